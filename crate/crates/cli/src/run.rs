use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use weier_core::algebraic::{TowerContext, TowerElement};
use weier_core::curve::{smoothness, Curve, Point};
use weier_core::differentials::{
    construct_third_kind, first_kind_basis, genus0_haupt, genus0_pullback, haupt_eval_with_order,
    unknown_monomials, vandermonde_equivalence, verify_residues, ParametricDifferential, ResidueReport,
};
use weier_core::exact::{monomial_string, BPoly, Ring};

use crate::args::{Cli, Command, CurveArgs, HauptArgs, PoleArgs};
use crate::error::{CliError, ErrorReport};
use crate::parse::{parse_number, parse_poly};

pub const SCHEMA: &str = "weier/1";

/// The structured output document.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: &'static str,
    pub input: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    pub checks: Vec<Check>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Vec<Timing>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveInfo {
    pub canonical: String,
    pub degree: u32,
    pub genus: u32,
    pub smoothness: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub stage: &'static str,
    pub ms: f64,
}

#[derive(Clone, Debug, Serialize)]
struct ExactValue {
    expression: String,
    decimal: String,
}

fn exact(e: &TowerElement, digits: u32) -> ExactValue {
    ExactValue { expression: e.to_string(), decimal: e.approximate(digits).to_string() }
}

struct Session {
    digits: u32,
    timings: Vec<Timing>,
    checks: Vec<Check>,
    curve_info: Option<CurveInfo>,
}

impl Session {
    fn timed<T>(&mut self, stage: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.push(Timing { stage, ms: start.elapsed().as_secs_f64() * 1e3 });
        out
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    fn curve(&mut self, args: &CurveArgs) -> Result<Curve, CliError> {
        let f = parse_poly(&args.curve)?;
        let curve = if args.assume_smooth {
            Curve::assume_smooth(f)?
        } else {
            self.timed("smoothness", || Curve::new(f))?
        };
        self.curve_info = Some(CurveInfo {
            canonical: curve.to_string(),
            degree: curve.degree(),
            genus: curve.genus(),
            smoothness: if curve.smoothness_verified() { "verified" } else { "assumed" },
        });
        Ok(curve)
    }
}

fn echo_input(cmd: &Command) -> Value {
    let c = cmd.curve_args();
    let mut v = json!({
        "curve": c.curve,
        "digits": c.digits,
        "assume_smooth": c.assume_smooth,
    });
    let poles = match cmd {
        Command::ThirdKind(p) | Command::Verify(p) => Some(p),
        Command::Haupt(h) => Some(&h.poles),
        _ => None,
    };
    if let Some(p) = poles {
        v["x1"] = json!(p.x1);
        v["x2"] = json!(p.x2);
        v["root1"] = json!(p.root1);
        v["root2"] = json!(p.root2);
        v["y1"] = json!(p.y1);
        v["y2"] = json!(p.y2);
        v["series_order"] = json!(p.series_order);
    }
    if let Command::Haupt(h) = cmd {
        v["xp"] = json!(h.xp);
        v["rootp"] = json!(h.rootp);
        v["yp"] = json!(h.yp);
        v["a"] = json!(h.a);
        v["roota"] = json!(h.roota);
    }
    v
}

/// Point given by abscissa and either a root index or a rational ordinate.
fn make_point(
    curve: &Curve,
    x: &str,
    root: usize,
    y: Option<&str>,
    ctx: &TowerContext,
) -> Result<(TowerContext, Point), CliError> {
    let x = parse_number(x)?;
    match y {
        Some(y) => {
            let y = parse_number(y)?;
            Ok((ctx.clone(), curve.point(x, TowerElement::constant(&y))?))
        }
        None => Ok(curve.section_point(&x, root, ctx)?),
    }
}

fn point_json(p: &Point, digits: u32) -> Value {
    json!({
        "x": p.x.to_string(),
        "root_index": p.root_index,
        "y": exact(&p.y, digits),
    })
}

fn generators_json(ctx: &TowerContext, digits: u32) -> Value {
    let gens: Vec<Value> = (0..ctx.len())
        .map(|i| {
            let d = ctx.generator_descriptor(i);
            json!({
                "name": format!("t{}", i + 1),
                "modulus": d.modulus().display_in("t"),
                "root_index": d.root_index(),
                "approx": TowerElement::generator(ctx, i).approximate(digits).to_string(),
            })
        })
        .collect();
    Value::Array(gens)
}

fn widest_context<'a>(elems: impl IntoIterator<Item = &'a TowerElement>) -> TowerContext {
    elems
        .into_iter()
        .fold(TowerContext::new(), |acc, e| if e.context().len() > acc.len() { e.context().clone() } else { acc })
}

fn tower_poly_string(p: &BPoly<TowerElement>) -> String {
    let mut terms: Vec<_> = p.terms().filter(|(_, c)| !c.is_structurally_zero()).collect();
    terms.sort_by(|((i1, j1), _), ((i2, j2), _)| (i2 + j2, i2).cmp(&(i1 + j1, i1)));
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|(&(i, j), c)| {
            let mono = monomial_string(i, j);
            match (c.as_rational(), mono.is_empty()) {
                (Some(q), true) => format!("({q})"),
                (Some(q), false) => format!("({q})*{mono}"),
                (None, true) => format!("({c})"),
                (None, false) => format!("({c})*{mono}"),
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn numerator_json(p: &BPoly<TowerElement>, digits: u32) -> Value {
    let mut terms: Vec<_> = p.terms().filter(|(_, c)| !c.is_structurally_zero()).collect();
    terms.sort_by(|((i1, j1), _), ((i2, j2), _)| (i2 + j2, i2).cmp(&(i1 + j1, i1)));
    let terms: Vec<Value> = terms
        .into_iter()
        .map(|(&(i, j), c)| {
            let mono = monomial_string(i, j);
            json!({ "monomial": if mono.is_empty() { "1".to_string() } else { mono }, "coefficient": exact(c, digits) })
        })
        .collect();
    json!({ "display": tower_poly_string(p), "terms": terms })
}

fn residue_checks(s: &mut Session, report: &ResidueReport, label: &str) {
    for c in &report.checks {
        let value = c.residue.as_ref().map(|r| r.to_string()).or_else(|| c.error.clone()).unwrap_or_default();
        s.check(
            format!("{label} residue at root {} over x = {}", c.root_index, c.x),
            c.passed,
            format!("expected {}, got {}", c.expected, value),
        );
    }
    s.check(format!("{label} residue sum"), report.sum_zero, "residues over both sections sum to zero");
}

fn residues_json(report: &ResidueReport) -> Value {
    let rows: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "section": c.section,
                "root_index": c.root_index,
                "x": c.x.to_string(),
                "expected": c.expected.to_string(),
                "residue": c.residue.as_ref().map(|r| r.to_string()),
                "error": c.error,
                "passed": c.passed,
            })
        })
        .collect();
    json!({ "points": rows, "sum_zero": report.sum_zero })
}

fn system_json(curve: &Curve, d: &ParametricDifferential) -> Value {
    let r = curve.degree() as usize;
    let n = unknown_monomials(curve.degree()).len();
    json!({
        "unknowns": unknown_monomials(curve.degree())
            .iter()
            .map(|&(i, j)| { let m = monomial_string(i, j); if m.is_empty() { "1".to_string() } else { m } })
            .collect::<Vec<_>>(),
        "naive": { "equations": 2 * r, "unknowns": n, "entries": "algebraic" },
        "symmetrized": {
            "equations": d.summary.equations,
            "unknowns": d.summary.unknowns,
            "rank": d.summary.rank,
            "nullspace_dim": d.summary.nullspace_dim,
            "entries": "rational",
        },
    })
}

fn poles(curve: &Curve, p: &PoleArgs) -> Result<(TowerContext, Point, Point), CliError> {
    let (ctx, p1) = make_point(curve, &p.x1, p.root1, p.y1.as_deref(), &TowerContext::new())?;
    let (ctx, p2) = make_point(curve, &p.x2, p.root2, p.y2.as_deref(), &ctx)?;
    Ok((ctx, p1, p2))
}

fn third_kind_stage(s: &mut Session, curve: &Curve, p: &PoleArgs) -> Result<(ParametricDifferential, ResidueReport), CliError> {
    let (_, p1, p2) = poles(curve, p)?;
    let mut d = s.timed("construct", || construct_third_kind(curve, &p1, &p2))?;
    if p.inject_fault {
        d.inject_fault();
    }
    let report = s.timed("residues", || verify_residues(&d, &[], p.series_order))?;
    residue_checks(s, &report, "third-kind");
    s.check(
        "nullspace dimension",
        d.summary.nullspace_dim == curve.genus() as usize,
        format!("{} (genus {})", d.summary.nullspace_dim, curve.genus()),
    );
    Ok((d, report))
}

fn third_kind_result(curve: &Curve, d: &ParametricDifferential, report: &ResidueReport, digits: u32) -> Value {
    let ctx = widest_context(d.e0.terms().map(|(_, c)| c).chain([&d.p1.y, &d.p2.y]));
    json!({
        "poles": [point_json(&d.p1, digits), point_json(&d.p2, digits)],
        "generators": generators_json(&ctx, digits),
        "system": system_json(curve, d),
        "numerator": numerator_json(&d.e0, digits),
        "first_kind_numerators": d.parameter_numerators().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        "denominator": d.denominator().to_string(),
        "residues": residues_json(report),
    })
}

fn run_haupt(s: &mut Session, h: &HauptArgs) -> Result<Value, CliError> {
    let curve = s.curve(&h.poles.curve)?;
    let p = &h.poles;
    let (mut ctx, p1, p2) = poles(&curve, p)?;
    let mut extra = Vec::new();
    for (i, a) in h.a.iter().enumerate() {
        let root = h.roota.get(i).copied().unwrap_or(0);
        let (c, pt) = make_point(&curve, a, root, None, &ctx)?;
        ctx = c;
        extra.push(pt);
    }
    let (ctx, pp) = make_point(&curve, &h.xp, h.rootp, h.yp.as_deref(), &ctx)?;
    let res = s.timed("haupt", || haupt_eval_with_order(&curve, &p1, &p2, &pp, &extra, p.series_order))?;
    s.check("third-kind residues", true, "certified during construction");
    for (a, i) in extra.iter().zip(1..) {
        let zero = res.differential.eval_u(a, &res.params)?.is_zero();
        s.check(format!("vanishes at A{i} (x = {})", a.x), zero, "u + sum c_j u_j = 0 exactly");
    }
    let mut out = json!({
        "points": {
            "p1": point_json(&p1, s.digits),
            "p2": point_json(&p2, s.digits),
            "pprime": point_json(&pp, s.digits),
            "a": extra.iter().map(|a| point_json(a, s.digits)).collect::<Vec<_>>(),
        },
        "generators": generators_json(&ctx, s.digits),
        "params": res.params.iter().map(|c| exact(c, s.digits)).collect::<Vec<_>>(),
        "value": exact(&res.value, s.digits),
    });
    if curve.genus() == 0 && curve.degree() == 2 {
        let closed = s.timed("closed-form", || genus0_haupt(&res.differential, &pp))?;
        let same = res.value.try_sub(&closed)?.is_zero();
        s.check("parametrization closed form", same, format!("closed form {}", closed));
        out["closed_form"] = json!(exact(&closed, s.digits));
    }
    Ok(out)
}

fn run_verify(s: &mut Session, p: &PoleArgs) -> Result<Value, CliError> {
    let curve = s.curve(&p.curve)?;
    let (d, report) = third_kind_stage(s, &curve, p)?;
    if !p.inject_fault {
        for k in 0..d.genus() {
            let mut params = vec![TowerElement::zero(); d.genus()];
            params[k] = TowerElement::one();
            let r = s.timed("residues", || verify_residues(&d, &params, p.series_order))?;
            s.check(
                format!("residues unchanged by first-kind direction {}", k + 1),
                r.passed(),
                format!("lambda_{} = 1", k + 1),
            );
        }
    }
    let (_, p1, p2) = poles(&curve, p)?;
    let checks = s.timed("vandermonde", || vandermonde_equivalence(&curve, &p1, &p2))?;
    for c in &checks {
        s.check(
            format!("Vandermonde equivalence over x{}", c.section + 1),
            c.passed(),
            format!("{} entries, {} mismatches", c.entries, c.mismatches.len()),
        );
    }
    let basis = first_kind_basis(&curve);
    s.check(
        "first-kind dimension",
        basis.len() == curve.genus() as usize,
        format!("{} numerators of degree <= {}", basis.len(), curve.degree() as i64 - 3),
    );
    let mut out = third_kind_result(&curve, &d, &report, s.digits);
    if curve.degree() == 2 && !p.inject_fault {
        let g = s.timed("parametrization", || genus0_pullback(&d, &[]))?;
        s.check(
            "parametrization pullback",
            g.passed(),
            format!(
                "through ({}, {}): residues {} and {}",
                g.point.x, g.point.y, g.residues[0], g.residues[1]
            ),
        );
        out["parametrization"] = json!({
            "point": [g.point.x.to_string(), g.point.y.to_string()],
            "slopes": [g.slopes[0].to_string(), g.slopes[1].to_string()],
            "identity_holds": g.identity_holds,
            "finite_poles": g.finite_poles(),
            "residues": [g.residues[0].to_string(), g.residues[1].to_string()],
        });
    }
    Ok(out)
}

fn execute(s: &mut Session, cmd: &Command) -> Result<Value, CliError> {
    match cmd {
        Command::Genus(c) => {
            let curve = s.curve(c)?;
            Ok(json!({ "degree": curve.degree(), "genus": curve.genus() }))
        }
        Command::Smooth(c) => {
            let f = parse_poly(&c.curve)?;
            let rep = s.timed("smoothness", || smoothness(&f));
            s.check("smooth", rep.smooth, rep.witness.clone().unwrap_or_else(|| "no singular point".into()));
            if !rep.smooth {
                return Err(weier_core::Error::NotSmooth(rep.witness.unwrap_or_default()).into());
            }
            Ok(json!({ "smooth": true }))
        }
        Command::FirstKind(c) => {
            let curve = s.curve(c)?;
            let basis = first_kind_basis(&curve);
            let nums = basis.numerators();
            let fy = curve.fy().to_string();
            Ok(json!({
                "dimension": basis.len(),
                "numerators": nums.iter().map(|n| n.to_string()).collect::<Vec<_>>(),
                "differentials": nums.iter().map(|n| format!("({n}) dx / ({fy})")).collect::<Vec<_>>(),
            }))
        }
        Command::ThirdKind(p) => {
            let curve = s.curve(&p.curve)?;
            let (d, report) = third_kind_stage(s, &curve, p)?;
            Ok(third_kind_result(&curve, &d, &report, s.digits))
        }
        Command::Haupt(h) => run_haupt(s, h),
        Command::Verify(p) => run_verify(s, p),
    }
}

/// Runs a request and returns the report and the process exit code.
pub fn run(cli: &Cli) -> (Report, i32) {
    let cmd = &cli.command;
    let args = cmd.curve_args();
    let mut s = Session { digits: args.digits, timings: Vec::new(), checks: Vec::new(), curve_info: None };
    let outcome = execute(&mut s, cmd);
    let failed_check = s.checks.iter().find(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail));
    let (result, error) = match outcome {
        Ok(v) => match failed_check {
            Some(msg) => (Some(v), Some(CliError::Verification(msg))),
            None => (Some(v), None),
        },
        Err(e) => (None, Some(e)),
    };
    let code = error.as_ref().map_or(0, CliError::exit_code);
    let report = Report {
        schema: SCHEMA,
        command: cmd.name(),
        input: echo_input(cmd),
        curve: s.curve_info,
        result,
        passed: error.is_none(),
        checks: s.checks,
        timings_ms: (!args.no_timings).then_some(s.timings),
        error: error.as_ref().map(CliError::report),
    };
    (report, code)
}

pub fn render_json(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize")
}

fn value_line(out: &mut String, key: &str, v: &Value) {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Object(m) if m.contains_key("decimal") => {
            format!("{} ~ {}", m["expression"].as_str().unwrap_or(""), m["decimal"].as_str().unwrap_or(""))
        }
        other => other.to_string(),
    };
    let _ = writeln!(out, "{key}: {text}");
}

fn point_line(out: &mut String, label: &str, p: &Value) {
    let root = match p["root_index"].as_u64() {
        Some(i) => format!("root {i}"),
        None => "given ordinate".to_string(),
    };
    let _ = writeln!(out, "{label}: x = {}, {root}, y ~ {}", p["x"].as_str().unwrap_or(""), p["y"]["decimal"].as_str().unwrap_or(""));
}

/// Plain-text rendering for terminals.
pub fn render_human(report: &Report) -> String {
    let mut out = String::new();
    if let Some(c) = &report.curve {
        let _ = writeln!(out, "curve: {} = 0 (degree {}, genus {}, smoothness {})", c.canonical, c.degree, c.genus, c.smoothness);
    }
    if let Some(Value::Object(r)) = &report.result {
        for key in ["degree", "genus", "smooth", "dimension", "numerators", "differentials"] {
            if let Some(v) = r.get(key) {
                value_line(&mut out, key, v);
            }
        }
        if let Some(Value::Array(poles)) = r.get("poles") {
            for (i, p) in poles.iter().enumerate() {
                point_line(&mut out, &format!("P{}", i + 1), p);
            }
        }
        if let Some(Value::Object(pts)) = r.get("points") {
            for key in ["p1", "p2", "pprime"] {
                point_line(&mut out, key, &pts[key]);
            }
            if let Some(Value::Array(extra)) = pts.get("a") {
                for (i, a) in extra.iter().enumerate() {
                    point_line(&mut out, &format!("A{}", i + 1), a);
                }
            }
        }
        if let Some(Value::Array(gens)) = r.get("generators") {
            for g in gens {
                let _ = writeln!(
                    out,
                    "{}: root {} of {} ~ {}",
                    g["name"].as_str().unwrap_or(""),
                    g["root_index"],
                    g["modulus"].as_str().unwrap_or(""),
                    g["approx"].as_str().unwrap_or("")
                );
            }
        }
        if let Some(sys) = r.get("system") {
            let sym = &sys["symmetrized"];
            let _ = writeln!(
                out,
                "system: naive {}x{}, symmetrized {}x{} rational, rank {}, nullspace {}",
                sys["naive"]["equations"], sys["naive"]["unknowns"], sym["equations"], sym["unknowns"], sym["rank"], sym["nullspace_dim"]
            );
        }
        if let Some(n) = r.get("numerator") {
            let _ = writeln!(out, "E0 = {}", n["display"].as_str().unwrap_or(""));
        }
        if let Some(d) = r.get("denominator") {
            value_line(&mut out, "denominator", d);
        }
        for key in ["params", "value", "closed_form"] {
            if let Some(v) = r.get(key) {
                match v {
                    Value::Array(items) => {
                        for (i, item) in items.iter().enumerate() {
                            value_line(&mut out, &format!("c{}", i + 1), item);
                        }
                    }
                    _ => value_line(&mut out, key, v),
                }
            }
        }
    }
    for c in &report.checks {
        let _ = writeln!(out, "[{}] {} ({})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    if let Some(t) = &report.timings_ms {
        let parts: Vec<String> = t.iter().map(|t| format!("{} {:.1} ms", t.stage, t.ms)).collect();
        if !parts.is_empty() {
            let _ = writeln!(out, "timings: {}", parts.join(", "));
        }
    }
    if let Some(e) = &report.error {
        let _ = writeln!(out, "error [{}]: {}", e.kind, e.message);
    }
    out
}
