//! Construction and residue certification of third-kind differentials
//! `E dx / ((x - x1)(x2 - x) f_y)` with residue `+1` at `P1` and `-1` at `P2`.

use crate::algebraic::TowerElement;
use crate::curve::{Curve, Point};
use crate::error::{Error, Result};
use crate::exact::{ff_solve, BPoly, Matrix, RatMatrix, Rational, Ring};

use super::first_kind::first_kind_basis;
use super::system::{pole_sections, third_kind_system_sym, unknown_monomials, PoleSections};
use super::{eval_tower_bpoly, series_at};

/// Default truncation order of the local series used for residues.
pub const DEFAULT_SERIES_ORDER: usize = 2;

/// Sizes of the solved symmetrized system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveSummary {
    pub equations: usize,
    pub unknowns: usize,
    pub rank: usize,
    pub nullspace_dim: usize,
}

/// A third-kind differential up to first-kind differentials:
/// numerator `E0 + sum_k lambda_k (x - x1)(x2 - x) m_k` over
/// `(x - x1)(x2 - x) f_y`, with `m_k` the first-kind monomials.
#[derive(Clone, Debug)]
pub struct ParametricDifferential {
    pub curve: Curve,
    pub p1: Point,
    pub p2: Point,
    pub e0: BPoly<TowerElement>,
    /// The first-kind numerators `m_k` (total degree at most `r - 3`).
    pub first_kind: Vec<BPoly<Rational>>,
    pub summary: SolveSummary,
}

/// `(x - x1)(x2 - x)`.
pub fn pole_factor(x1: &Rational, x2: &Rational) -> BPoly<Rational> {
    let a = BPoly::from_terms([((1, 0), Rational::one()), ((0, 0), -x1.clone())]);
    let b = BPoly::from_terms([((1, 0), -Rational::one()), ((0, 0), x2.clone())]);
    a.mul(&b)
}

fn coefficient_vector(p: &BPoly<Rational>, unknowns: &[(u32, u32)]) -> Vec<Rational> {
    unknowns.iter().map(|&(i, j)| p.coeff(i, j)).collect()
}

impl ParametricDifferential {
    pub fn genus(&self) -> usize {
        self.first_kind.len()
    }

    /// `(x - x1)(x2 - x) m_k` for each first-kind numerator.
    pub fn parameter_numerators(&self) -> Vec<BPoly<Rational>> {
        let q = pole_factor(&self.p1.x, &self.p2.x);
        self.first_kind.iter().map(|m| q.mul(m)).collect()
    }

    /// Full denominator `(x - x1)(x2 - x) f_y`.
    pub fn denominator(&self) -> BPoly<Rational> {
        pole_factor(&self.p1.x, &self.p2.x).mul(self.curve.fy())
    }

    pub fn numerator(&self, params: &[TowerElement]) -> Result<BPoly<TowerElement>> {
        if params.len() != self.genus() && !params.is_empty() {
            return Err(Error::WrongPoleCount { expected: self.genus(), got: params.len() });
        }
        let mut n = self.e0.clone();
        for (lambda, q) in params.iter().zip(self.parameter_numerators()) {
            for (&key, c) in q.terms() {
                n.add_term(key, &lambda.scale(c));
            }
        }
        Ok(n)
    }

    /// Residue at `p` computed from the local series of numerator and
    /// denominator, independently of the linear system.
    pub fn residue_at(&self, p: &Point, params: &[TowerElement], order: usize) -> Result<TowerElement> {
        let numer = self.numerator(params)?;
        let series = self.curve.local_series(p, order.max(1))?;
        let len = series.order() + 1;
        let n = series_at(&numer, &series, len)?;
        let d = series_at(&self.denominator().map(TowerElement::from_rational), &series, len)?;
        let vd = d
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| Error::SeriesTooShort(format!("denominator vanishes to order {len} at x = {}", p.x)))?;
        // A numerator vanishing through the truncation order has valuation
        // above the denominator's, so there is no pole.
        let pole_order = match n.iter().position(|c| !c.is_zero()) {
            Some(vn) if vn < vd => vd - vn,
            _ => return Ok(TowerElement::zero()),
        };
        if pole_order > 1 {
            return Err(Error::HigherOrderPole { x: p.x.to_string(), order: pole_order as i64 });
        }
        // u dx = (n_v t^v + ...) / (d_vd t^vd + ...) dt with vd = v + 1
        n[vd - 1].try_mul(&d[vd].invert()?)
    }

    /// Value of `u = numerator / denominator` at a point away from the poles.
    pub fn eval_u(&self, p: &Point, params: &[TowerElement]) -> Result<TowerElement> {
        if p.x == self.p1.x || p.x == self.p2.x {
            return Err(Error::EvaluationAtPole { x: p.x.to_string() });
        }
        let fy = self.curve.fy_at(p);
        if fy.is_zero() {
            return Err(Error::EvaluationAtPole { x: p.x.to_string() });
        }
        let lin = (&p.x - &self.p1.x) * (&self.p2.x - &p.x);
        let den = fy.scale(&lin).invert()?;
        eval_tower_bpoly(&self.numerator(params)?, &p.x, &p.y)?.try_mul(&den)
    }

    /// Value of the first-kind function `u_k = m_k / f_y` at `p`.
    pub fn eval_first_kind(&self, k: usize, p: &Point) -> Result<TowerElement> {
        let fy = self.curve.fy_at(p);
        if fy.is_zero() {
            return Err(Error::EvaluationAtPole { x: p.x.to_string() });
        }
        let m = self.first_kind[k].map(TowerElement::from_rational);
        eval_tower_bpoly(&m, &p.x, &p.y)?.try_mul(&fy.invert()?)
    }

    /// Adds one to the constant coefficient of `E0`; only for exercising the
    /// verification path.
    pub fn inject_fault(&mut self) {
        self.e0.add_term((0, 0), &TowerElement::one());
    }
}

/// Builds the differential from the symmetrized system without verifying
/// residues.
pub fn construct_third_kind(curve: &Curve, p1: &Point, p2: &Point) -> Result<ParametricDifferential> {
    let sys = third_kind_system_sym(curve, p1, p2)?;
    let rhs = Matrix::column(sys.rhs.clone());
    let sol = ff_solve(&sys.matrix, &rhs).map_err(|e| match e {
        Error::Inconsistent { row } => Error::Internal(format!("symmetrized system inconsistent at row {row}")),
        other => other,
    })?;
    let unknowns = unknown_monomials(curve.degree());
    let basis = first_kind_basis(curve);
    let q = pole_factor(&p1.x, &p2.x);
    let expected: Vec<Vec<Rational>> = basis.numerators().iter().map(|m| coefficient_vector(&q.mul(m), &unknowns)).collect();
    check_nullspace(&sol.nullspace, &expected)?;

    let particular: Vec<TowerElement> = (0..unknowns.len()).map(|i| sol.particular.get(i, 0).clone()).collect();
    let canonical = project_out(&particular, &expected)?;
    let e0 = BPoly::from_terms(unknowns.iter().copied().zip(canonical));
    Ok(ParametricDifferential {
        curve: curve.clone(),
        p1: p1.clone(),
        p2: p2.clone(),
        e0,
        first_kind: basis.numerators(),
        summary: SolveSummary {
            equations: sys.matrix.rows(),
            unknowns: unknowns.len(),
            rank: sol.rank,
            nullspace_dim: sol.nullspace.len(),
        },
    })
}

/// The nullspace must be exactly `(x - x1)(x2 - x)` times the polynomials
/// of degree at most `r - 3`.
fn check_nullspace(found: &[Vec<Rational>], expected: &[Vec<Rational>]) -> Result<()> {
    if found.len() != expected.len() {
        return Err(Error::Internal(format!(
            "nullspace has dimension {} but the genus is {}",
            found.len(),
            expected.len()
        )));
    }
    if found.is_empty() {
        return Ok(());
    }
    let rows: Vec<Vec<Rational>> = found.iter().chain(expected.iter()).cloned().collect();
    if RatMatrix::from_rows(rows).rank() != expected.len() {
        return Err(Error::Internal("nullspace differs from the first-kind numerators".into()));
    }
    Ok(())
}

/// Removes the component of `v` in the span of `basis` (orthogonal
/// projection under the coefficient inner product).
fn project_out(v: &[TowerElement], basis: &[Vec<Rational>]) -> Result<Vec<TowerElement>> {
    if basis.is_empty() {
        return Ok(v.to_vec());
    }
    let p = basis.len();
    let gram = RatMatrix::from_rows(
        (0..p)
            .map(|i| (0..p).map(|j| dot(&basis[i], &basis[j])).collect())
            .collect(),
    );
    let rhs: Vec<TowerElement> = basis
        .iter()
        .map(|b| {
            b.iter()
                .zip(v)
                .try_fold(TowerElement::zero(), |acc, (c, e)| acc.try_add(&e.scale(c)))
        })
        .collect::<Result<_>>()?;
    let coeffs = ff_solve(&gram, &Matrix::column(rhs))?.particular;
    let mut out = v.to_vec();
    for (k, b) in basis.iter().enumerate() {
        let lambda = coeffs.get(k, 0);
        for (o, c) in out.iter_mut().zip(b) {
            *o = o.try_sub(&lambda.scale(c))?;
        }
    }
    Ok(out)
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// One residue check at a section point.
#[derive(Clone, Debug)]
pub struct ResidueCheck {
    /// 0 for the section over `x1`, 1 for `x2`.
    pub section: usize,
    pub root_index: usize,
    pub x: Rational,
    pub expected: i64,
    pub residue: Option<TowerElement>,
    pub error: Option<String>,
    pub passed: bool,
}

/// Residues at every point over `x1` and `x2`.
#[derive(Clone, Debug)]
pub struct ResidueReport {
    pub checks: Vec<ResidueCheck>,
    /// Whether the residues over both sections sum to zero.
    pub sum_zero: bool,
}

impl ResidueReport {
    pub fn passed(&self) -> bool {
        self.sum_zero && self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&ResidueCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// Certifies residue `+1` at `P1`, `-1` at `P2` and `0` at every other
/// point of both sections, for the given parameters.
pub fn verify_residues(d: &ParametricDifferential, params: &[TowerElement], order: usize) -> Result<ResidueReport> {
    let secs = pole_sections(&d.curve, &d.p1, &d.p2)?;
    verify_with_sections(d, &secs, params, order)
}

pub(crate) fn verify_with_sections(
    d: &ParametricDifferential,
    secs: &PoleSections,
    params: &[TowerElement],
    order: usize,
) -> Result<ResidueReport> {
    let mut checks = Vec::new();
    let mut total = TowerElement::zero();
    let mut sum_ok = true;
    for (s, pts) in secs.points.iter().enumerate() {
        for (j, p) in pts.iter().enumerate() {
            let expected = match (s, j == secs.pole_index[s]) {
                (0, true) => 1,
                (1, true) => -1,
                _ => 0,
            };
            let (residue, error, passed) = match d.residue_at(p, params, order) {
                Ok(r) => {
                    let diff = r.try_sub(&TowerElement::constant(&Rational::from_integer(expected.into())))?;
                    let ok = diff.is_zero();
                    match total.try_add(&r) {
                        Ok(t) => total = t,
                        Err(_) => sum_ok = false,
                    }
                    (Some(r), None, ok)
                }
                Err(e @ (Error::HigherOrderPole { .. } | Error::SeriesTooShort(_))) => {
                    sum_ok = false;
                    (None, Some(e.to_string()), false)
                }
                Err(e) => return Err(e),
            };
            checks.push(ResidueCheck {
                section: s,
                root_index: j,
                x: p.x.clone(),
                expected,
                residue,
                error,
                passed,
            });
        }
    }
    Ok(ResidueReport { checks, sum_zero: sum_ok && total.is_zero() })
}

/// Builds the differential and certifies its residues (fails closed).
pub fn third_kind(curve: &Curve, p1: &Point, p2: &Point) -> Result<ParametricDifferential> {
    third_kind_with_order(curve, p1, p2, DEFAULT_SERIES_ORDER)
}

pub fn third_kind_with_order(curve: &Curve, p1: &Point, p2: &Point, order: usize) -> Result<ParametricDifferential> {
    let d = construct_third_kind(curve, p1, p2)?;
    let report = verify_residues(&d, &[], order)?;
    if let Some(bad) = report.first_failure() {
        return Err(Error::Verification(format!(
            "residue at root {} over x = {} is not {}",
            bad.root_index, bad.x, bad.expected
        )));
    }
    if !report.sum_zero {
        return Err(Error::Verification("residues do not sum to zero".into()));
    }
    Ok(d)
}
