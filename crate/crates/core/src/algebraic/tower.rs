//! Multi-generator algebraic extensions of Q.
//!
//! A context is an ordered list of generators `t_1, ..., t_k`, each the
//! root of a square-free rational polynomial and each pinned to one complex
//! root by a certified isolating disc. Elements are reduced polynomials in
//! the generators (exponent of `t_j` below `deg m_j`) with rational
//! coefficients. The ring `Q[t_1..t_k]/(m_1(t_1), ..., m_k(t_k))` is a
//! product of fields when a modulus is reducible, so zero testing is done
//! in the chosen complex embedding.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use super::dyadic::{Ball, Complex, Dyadic};
use super::roots::{isolate_roots, polish, IntPoly, RootIsolation};
use crate::error::{Error, Result};
use crate::exact::{common_denominator, format_terms, Poly, Rational, Ring, UPoly};

type Mono = Vec<u32>;

fn trim(mut m: Mono) -> Mono {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

/// One adjoined generator.
pub struct ExtensionDescriptor {
    modulus: UPoly,
    monic: UPoly,
    int_poly: IntPoly,
    root_index: usize,
    root_count: usize,
    real: bool,
    separation: Rational,
    isolating: Ball,
    /// Upper bound on the moduli of all roots (integer, at least 1).
    cauchy: BigInt,
    /// `|lc|` of the primitive integer modulus.
    lead: BigInt,
    /// `t^e mod m` for `e < 2 deg m - 1`.
    reductions: Vec<Vec<Rational>>,
    approx: Mutex<Ball>,
}

impl fmt::Debug for ExtensionDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtensionDescriptor")
            .field("modulus", &self.modulus.to_string())
            .field("root_index", &self.root_index)
            .finish()
    }
}

impl ExtensionDescriptor {
    fn new(modulus: &UPoly, iso: &RootIsolation, root_index: usize) -> Result<Self> {
        let count = iso.roots.len();
        if root_index >= count {
            return Err(Error::RootIndex { index: root_index, count });
        }
        let monic = modulus.monic();
        let d = monic.degree().unwrap_or(0);
        let int_poly = IntPoly::from_upoly(modulus);
        let mut reductions = Vec::with_capacity(2 * d);
        let mut cur = vec![Rational::zero(); d.max(1)];
        if d > 0 {
            cur[0] = Rational::one();
        }
        for _ in 0..(2 * d).saturating_sub(1).max(1) {
            reductions.push(cur.clone());
            cur = Self::times_t(&cur, &monic);
        }
        let root = &iso.roots[root_index];
        Ok(ExtensionDescriptor {
            modulus: modulus.clone(),
            cauchy: int_poly.cauchy_bound(),
            lead: int_poly.coeffs.last().unwrap().abs(),
            int_poly,
            monic,
            root_index,
            root_count: count,
            real: root.real,
            separation: iso.separation.clone(),
            isolating: root.ball.clone(),
            reductions,
            approx: Mutex::new(root.ball.clone()),
        })
    }

    fn times_t(v: &[Rational], monic: &UPoly) -> Vec<Rational> {
        let d = v.len();
        let top = v[d - 1].clone();
        let mut out = vec![Rational::zero(); d];
        for i in (1..d).rev() {
            out[i] = &v[i - 1] - &top * monic.coeff(i);
        }
        out[0] = -(&top * monic.coeff(0));
        out
    }

    pub fn modulus(&self) -> &UPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.monic.degree().unwrap_or(0)
    }

    pub fn root_index(&self) -> usize {
        self.root_index
    }

    pub fn root_count(&self) -> usize {
        self.root_count
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    /// Integer coefficients of the primitive modulus, lowest degree first.
    pub fn integer_modulus(&self) -> &[BigInt] {
        &self.int_poly.coeffs
    }

    fn reduced_power(&self, e: usize) -> Vec<Rational> {
        if let Some(r) = self.reductions.get(e) {
            return r.clone();
        }
        let mut cur = self.reductions.last().unwrap().clone();
        for _ in self.reductions.len() - 1..e {
            cur = Self::times_t(&cur, &self.monic);
        }
        cur
    }

    /// A disc of radius at most `2^-bits` around the generator's root.
    pub fn ball(&self, bits: i64) -> Ball {
        let want = Dyadic::pow2(-bits);
        let mut guard = self.approx.lock().unwrap_or_else(|e| e.into_inner());
        if guard.radius <= want {
            return guard.clone();
        }
        // A refined disc of radius below sep/8 whose center lies in the
        // isolating disc holds the same root.
        let eighth = Dyadic::from_rational(&(&self.separation / Rational::from_integer(BigInt::from(8))), 40).0;
        let target = if want < eighth { want } else { eighth };
        let mut prec = 64 + bits.max(0) as u64;
        loop {
            if let Some((z, r)) = polish(&self.int_poly, &guard.center, &target, prec) {
                let z = if self.real { Complex::real(z.re) } else { z };
                let inside = Ball::new(z.clone(), Dyadic::zero()).overlaps(&self.isolating);
                if inside {
                    *guard = Ball::new(z, r);
                    return guard.clone();
                }
            }
            prec *= 2;
            assert!(prec < 1 << 22, "root refinement of {} did not converge", self.modulus);
        }
    }
}

/// An ordered, immutable list of generators. Contexts obtained by adjoining
/// to a common ancestor are compatible when one extends the other.
#[derive(Clone, Default)]
pub struct TowerContext {
    exts: Arc<Vec<Arc<ExtensionDescriptor>>>,
}

impl fmt::Debug for TowerContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.exts.iter()).finish()
    }
}

impl TowerContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.exts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exts.is_empty()
    }

    pub fn generator_descriptor(&self, i: usize) -> &ExtensionDescriptor {
        &self.exts[i]
    }

    /// Adjoins the root of `modulus` with the given canonical index.
    pub fn adjoin(&self, modulus: &UPoly, root_index: usize) -> Result<(TowerContext, TowerElement)> {
        let iso = isolate_roots(modulus)?;
        let (ctx, mut gens) = self.adjoin_isolated(modulus, &iso, &[root_index])?;
        Ok((ctx, gens.pop().unwrap()))
    }

    /// Adjoins several roots of one modulus as separate generators, sharing a
    /// single isolation.
    pub fn adjoin_roots(&self, modulus: &UPoly, indices: &[usize]) -> Result<(TowerContext, Vec<TowerElement>)> {
        let iso = isolate_roots(modulus)?;
        self.adjoin_isolated(modulus, &iso, indices)
    }

    pub fn adjoin_isolated(
        &self,
        modulus: &UPoly,
        iso: &RootIsolation,
        indices: &[usize],
    ) -> Result<(TowerContext, Vec<TowerElement>)> {
        if modulus.degree().unwrap_or(0) == 0 {
            return Err(Error::ZeroPolynomial);
        }
        let mut exts: Vec<Arc<ExtensionDescriptor>> = self.exts.iter().cloned().collect();
        let first = exts.len();
        for &i in indices {
            exts.push(Arc::new(ExtensionDescriptor::new(modulus, iso, i)?));
        }
        let ctx = TowerContext { exts: Arc::new(exts) };
        let gens = (0..indices.len()).map(|k| TowerElement::generator(&ctx, first + k)).collect();
        Ok((ctx, gens))
    }

    fn is_prefix_of(&self, other: &TowerContext) -> bool {
        self.len() <= other.len()
            && (Arc::ptr_eq(&self.exts, &other.exts)
                || self.exts.iter().zip(other.exts.iter()).all(|(a, b)| Arc::ptr_eq(a, b)))
    }

    /// The larger of two compatible contexts.
    pub fn join(&self, other: &TowerContext) -> Result<TowerContext> {
        if self.is_prefix_of(other) {
            Ok(other.clone())
        } else if other.is_prefix_of(self) {
            Ok(self.clone())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn same(&self, other: &TowerContext) -> bool {
        self.len() == other.len() && self.is_prefix_of(other)
    }
}

/// An element of a tower ring.
#[derive(Clone)]
pub struct TowerElement {
    ctx: TowerContext,
    terms: BTreeMap<Mono, Rational>,
}

impl fmt::Debug for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TowerElement({self})")
    }
}

impl PartialEq for TowerElement {
    /// Structural equality; both sides must live in the same context unless
    /// they are rational.
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && (self.ctx.same(&other.ctx) || self.as_rational().is_some())
    }
}

impl TowerElement {
    pub fn constant(q: &Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Vec::new(), q.clone());
        }
        TowerElement { ctx: TowerContext::new(), terms }
    }

    pub fn generator(ctx: &TowerContext, i: usize) -> Self {
        assert!(i < ctx.len(), "generator index out of range");
        let mut mono = vec![0; i + 1];
        mono[i] = 1;
        let raw = BTreeMap::from([(mono, Rational::one())]);
        TowerElement { ctx: ctx.clone(), terms: reduce(ctx, raw) }
    }

    /// Re-homes the element into a context extending its own.
    pub fn lift(&self, ctx: &TowerContext) -> Result<Self> {
        if self.ctx.is_prefix_of(ctx) || self.as_rational().is_some() {
            Ok(TowerElement { ctx: ctx.clone(), terms: self.terms.clone() })
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn context(&self) -> &TowerContext {
        &self.ctx
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Exponent vectors and coefficients, in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(m, c)| (m.as_slice(), c))
    }

    /// Indices of generators that occur in the representation.
    pub fn used_generators(&self) -> Vec<usize> {
        let mut used = vec![false; self.ctx.len()];
        for m in self.terms.keys() {
            for (j, &e) in m.iter().enumerate() {
                if e > 0 {
                    used[j] = true;
                }
            }
        }
        used.iter().enumerate().filter(|(_, &u)| u).map(|(j, _)| j).collect()
    }

    fn combine(&self, other: &Self, f: impl Fn(&Self, &Self, &TowerContext) -> BTreeMap<Mono, Rational>) -> Result<Self> {
        let ctx = if self.as_rational().is_some() && other.ctx.len() > self.ctx.len() {
            other.ctx.clone()
        } else if other.as_rational().is_some() && self.ctx.len() >= other.ctx.len() {
            self.ctx.clone()
        } else {
            self.ctx.join(&other.ctx)?
        };
        let terms = f(self, other, &ctx);
        Ok(TowerElement { ctx, terms })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b, _| {
            let mut out = a.terms.clone();
            for (m, c) in &b.terms {
                accumulate(&mut out, m.clone(), c.clone());
            }
            out
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.negate())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b, ctx| {
            if let Some(q) = a.as_rational() {
                return scale_terms(&b.terms, &q);
            }
            if let Some(q) = b.as_rational() {
                return scale_terms(&a.terms, &q);
            }
            let mut raw = BTreeMap::new();
            for (ma, ca) in &a.terms {
                for (mb, cb) in &b.terms {
                    let len = ma.len().max(mb.len());
                    let m: Mono = (0..len)
                        .map(|j| ma.get(j).copied().unwrap_or(0) + mb.get(j).copied().unwrap_or(0))
                        .collect();
                    accumulate(&mut raw, m, ca * cb);
                }
            }
            reduce(ctx, raw)
        })
    }

    fn negate(&self) -> Self {
        TowerElement { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale_by(&self, q: &Rational) -> Self {
        TowerElement { ctx: self.ctx.clone(), terms: scale_terms(&self.terms, q) }
    }

    /// Enclosure of the element's value with radius at most `2^-bits`.
    pub fn enclose(&self, bits: i64) -> Ball {
        if let Some(q) = self.as_rational() {
            return Ball::from_rational(&q, (bits + 64 + magnitude_bits(&q)).max(64) as u64);
        }
        let used = self.used_generators();
        let mut prec = bits.max(0) + 64 + self.magnitude_bound_bits();
        loop {
            let p = prec as u64;
            let mut pows: BTreeMap<usize, Vec<Ball>> = BTreeMap::new();
            for &j in &used {
                let desc = self.ctx.generator_descriptor(j);
                let g = desc.ball(prec);
                let mut v = vec![Ball::one()];
                for e in 1..desc.degree() {
                    let next = v[e - 1].mul(&g, p);
                    v.push(next);
                }
                pows.insert(j, v);
            }
            let mut acc = Ball::zero();
            for (m, c) in &self.terms {
                let mut t = Ball::from_rational(c, p);
                for (j, &e) in m.iter().enumerate() {
                    if e > 0 {
                        t = t.mul(&pows[&j][e as usize], p);
                    }
                }
                acc = acc.add(&t, p);
            }
            let r = acc.radius.msb();
            match r {
                Some(k) if k >= -bits => prec += k + bits + 32,
                _ => return acc,
            }
        }
    }

    /// Bit length of `sum |c_e| prod R_j^{e_j}`, an upper bound on the value.
    fn magnitude_bound_bits(&self) -> i64 {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.abs();
            for (j, &e) in m.iter().enumerate() {
                if e > 0 {
                    let r = &self.ctx.generator_descriptor(j).cauchy;
                    t *= Rational::from_integer(r.pow(e));
                }
            }
            total += t;
        }
        magnitude_bits(&total)
    }

    /// `K` such that a nonzero value of this element has modulus at least
    /// `2^-K`.
    ///
    /// Clearing denominators with `d` and the leading coefficients `l_j`
    /// gives `g = d L q` with `L = prod l_j^{deg m_j - 1}`, integral over Z.
    /// The product of `g` over all root tuples is a nonzero integer when
    /// `g(alpha) != 0` (it is symmetric in each root set), while every
    /// conjugate is bounded by `B = d L sum |c_e| prod R_j^{e_j}`. Hence
    /// `|q(alpha)| >= B^{-(N-1)} / (d L)` with `N = prod deg m_j`.
    pub fn zero_bound_bits(&self) -> i64 {
        let used = self.used_generators();
        let d = common_denominator(self.terms.values());
        let mut l = BigInt::from(1);
        let mut n: i64 = 1;
        for &j in &used {
            let desc = self.ctx.generator_descriptor(j);
            l *= desc.lead.pow(desc.degree() as u32 - 1);
            n = n.saturating_mul(desc.degree() as i64);
        }
        let dl = Rational::from_integer(&d * &l);
        let mut sum = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.abs();
            for (j, &e) in m.iter().enumerate() {
                if e > 0 {
                    t *= Rational::from_integer(self.ctx.generator_descriptor(j).cauchy.pow(e));
                }
            }
            sum += t;
        }
        let b = (&dl * sum).ceil().to_integer().max(BigInt::from(1));
        (n - 1).saturating_mul(b.bits() as i64) + (dl.to_integer().bits() as i64) + 1
    }

    /// Certified decimal approximation with `digits` digits after the point
    /// (error at most half a unit in the last place).
    pub fn approximate(&self, digits: u32) -> ComplexDecimal {
        let bits = (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as i64 + 3;
        let b = self.enclose(bits);
        ComplexDecimal {
            re: decimal_string(&b.center.re.to_rational(), digits),
            im: decimal_string(&b.center.im.to_rational(), digits),
        }
    }

    /// Double-precision value (for diagnostics and tests).
    pub fn to_f64(&self) -> (f64, f64) {
        let b = self.enclose(60);
        (b.center.re.to_f64(), b.center.im.to_f64())
    }

    fn top_generator(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.len()).max().filter(|&l| l > 0).map(|l| l - 1)
    }

    /// Coefficients of `t_k^i`, `i < deg m_k`, as elements free of `t_k`.
    fn split(&self, k: usize) -> Vec<TowerElement> {
        let d = self.ctx.generator_descriptor(k).degree();
        let mut parts = vec![BTreeMap::new(); d];
        for (m, c) in &self.terms {
            let e = m.get(k).copied().unwrap_or(0) as usize;
            let mut rest = m.clone();
            if k < rest.len() {
                rest[k] = 0;
            }
            parts[e].insert(trim(rest), c.clone());
        }
        parts.into_iter().map(|terms| TowerElement { ctx: self.ctx.clone(), terms }).collect()
    }

    /// Multiplicative inverse in the tower ring.
    ///
    /// Fails with [`Error::ZeroDivision`] when the value is zero, and with
    /// [`Error::NotInvertible`] when the element is a zero divisor of the
    /// ring even though its value is nonzero.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDivision);
        }
        self.invert_nonzero()
    }

    fn invert_nonzero(&self) -> Result<Self> {
        let Some(k) = self.top_generator() else {
            let q = self.as_rational().unwrap();
            return Ok(TowerElement { ctx: self.ctx.clone(), terms: TowerElement::constant(&q.recip()).terms });
        };
        let desc = self.ctx.generator_descriptor(k);
        let lift = |q: &Rational| TowerElement { ctx: self.ctx.clone(), terms: TowerElement::constant(q).terms };
        let mut r0: Poly<TowerElement> = Poly::new(desc.monic.coeffs().iter().map(lift).collect());
        let mut r1: Poly<TowerElement> = Poly::new(self.split(k));
        let mut s0: Poly<TowerElement> = Poly::zero();
        let mut s1: Poly<TowerElement> = Poly::constant(TowerElement::one_in(&self.ctx));
        loop {
            match r1.degree() {
                None => return Err(zero_divisor(k, &r0)),
                Some(0) => {
                    let c = invert_coefficient(&r1.coeff(0), k)?;
                    let s = s1.scale(&c);
                    return Ok(self.assemble(k, &s));
                }
                Some(_) => {
                    let inv = invert_coefficient(r1.leading().unwrap(), k)?;
                    let (q, r) = div_rem_with(&r0, &r1, &inv);
                    let s2 = s0.sub(&q.mul(&s1));
                    r0 = std::mem::replace(&mut r1, r);
                    s0 = std::mem::replace(&mut s1, s2);
                }
            }
        }
    }

    fn one_in(ctx: &TowerContext) -> Self {
        TowerElement { ctx: ctx.clone(), terms: BTreeMap::from([(Vec::new(), Rational::one())]) }
    }

    fn assemble(&self, k: usize, s: &Poly<TowerElement>) -> Self {
        let g = TowerElement::generator(&self.ctx, k);
        s.eval(&g).lift(&self.ctx).expect("inverse stays in its context")
    }

    /// Exact form for machine-readable output.
    pub fn exact_form(&self, digits: u32) -> ExactForm {
        let generators = self
            .ctx
            .exts
            .iter()
            .map(|d| {
                GeneratorForm {
                    modulus: UPoly::new(d.int_poly.coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect())
                        .display_in("t"),
                    root_index: d.root_index,
                    approx: {
                        let b = d.ball((f64::from(digits) * std::f64::consts::LOG2_10).ceil() as i64 + 3);
                        ComplexDecimal {
                            re: decimal_string(&b.center.re.to_rational(), digits),
                            im: decimal_string(&b.center.im.to_rational(), digits),
                        }
                    },
                }
            })
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| TermForm {
                exponents: (0..self.ctx.len()).map(|j| m.get(j).copied().unwrap_or(0)).collect(),
                coefficient: c.to_string(),
            })
            .collect();
        ExactForm { expression: self.to_string(), generators, terms, decimal: self.approximate(digits) }
    }
}

fn magnitude_bits(q: &Rational) -> i64 {
    if q.is_zero() {
        0
    } else {
        (q.numer().bits() as i64 - q.denom().bits() as i64 + 1).max(0)
    }
}

fn accumulate(map: &mut BTreeMap<Mono, Rational>, m: Mono, c: Rational) {
    let m = trim(m);
    let entry = map.entry(m);
    match entry {
        std::collections::btree_map::Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn scale_terms(terms: &BTreeMap<Mono, Rational>, q: &Rational) -> BTreeMap<Mono, Rational> {
    if q.is_zero() {
        return BTreeMap::new();
    }
    terms.iter().map(|(m, c)| (m.clone(), c * q)).collect()
}

/// Brings every exponent below the degree of its modulus.
fn reduce(ctx: &TowerContext, raw: BTreeMap<Mono, Rational>) -> BTreeMap<Mono, Rational> {
    let mut out = BTreeMap::new();
    let mut stack: Vec<(Mono, Rational)> = raw.into_iter().collect();
    while let Some((m, c)) = stack.pop() {
        if c.is_zero() {
            continue;
        }
        let high = m
            .iter()
            .enumerate()
            .find(|(j, &e)| e as usize >= ctx.generator_descriptor(*j).degree());
        match high {
            None => accumulate(&mut out, m, c),
            Some((j, &e)) => {
                let row = ctx.generator_descriptor(j).reduced_power(e as usize);
                for (k, rc) in row.iter().enumerate() {
                    if !rc.is_zero() {
                        let mut m2 = m.clone();
                        m2[j] = k as u32;
                        stack.push((m2, &c * rc));
                    }
                }
            }
        }
    }
    out
}

fn invert_coefficient(c: &TowerElement, k: usize) -> Result<TowerElement> {
    if c.is_zero() {
        return Err(Error::NotInvertible {
            factor: None,
            detail: format!("a coefficient over generator t{} is a zero divisor", k + 1),
        });
    }
    c.invert_nonzero()
}

fn zero_divisor(k: usize, g: &Poly<TowerElement>) -> Error {
    let rational: Option<Vec<Rational>> = g.coeffs().iter().map(|c| c.as_rational()).collect();
    match rational {
        Some(cs) => {
            let f = UPoly::new(cs).monic();
            Error::NotInvertible {
                detail: format!("shares the factor {} with the modulus of t{}", f.display_in("y"), k + 1),
                factor: Some(f),
            }
        }
        None => Error::NotInvertible {
            factor: None,
            detail: format!("shares a nontrivial factor with the modulus of t{}", k + 1),
        },
    }
}

fn div_rem_with(
    a: &Poly<TowerElement>,
    b: &Poly<TowerElement>,
    lc_inv: &TowerElement,
) -> (Poly<TowerElement>, Poly<TowerElement>) {
    let db = b.degree().unwrap();
    let Some(da) = a.degree().filter(|&da| da >= db) else {
        return (Poly::zero(), a.clone());
    };
    let mut rem = a.coeffs().to_vec();
    let mut quot = vec![TowerElement::zero(); da - db + 1];
    for i in (0..=da - db).rev() {
        let c = Ring::mul(&rem[i + db], lc_inv);
        for j in 0..=db {
            rem[i + j] = Ring::sub(&rem[i + j], &Ring::mul(&c, &b.coeff(j)));
        }
        quot[i] = c;
    }
    rem.truncate(db);
    (Poly::new(quot), Poly::new(rem))
}

impl Ring for TowerElement {
    fn zero() -> Self {
        TowerElement { ctx: TowerContext::new(), terms: BTreeMap::new() }
    }

    fn one() -> Self {
        TowerElement::constant(&Rational::one())
    }

    fn from_rational(q: &Rational) -> Self {
        TowerElement::constant(q)
    }

    fn add(&self, rhs: &Self) -> Self {
        self.try_add(rhs).expect("tower context mismatch")
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.try_sub(rhs).expect("tower context mismatch")
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("tower context mismatch")
    }

    fn neg(&self) -> Self {
        self.negate()
    }

    fn scale(&self, q: &Rational) -> Self {
        self.scale_by(q)
    }

    /// Zero test in the chosen embedding, certified by a root-separation
    /// bound.
    fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        if self.as_rational().is_some() {
            return false;
        }
        let quick = self.enclose(64);
        if !quick.contains_zero() {
            return false;
        }
        let k = self.zero_bound_bits();
        let b = self.enclose(k + 2);
        if b.mag_upper() < Dyadic::pow2(-k) {
            return true;
        }
        debug_assert!(!b.contains_zero());
        false
    }

    fn is_structurally_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl std::ops::Add for &TowerElement {
    type Output = TowerElement;
    fn add(self, rhs: Self) -> TowerElement {
        Ring::add(self, rhs)
    }
}

impl std::ops::Sub for &TowerElement {
    type Output = TowerElement;
    fn sub(self, rhs: Self) -> TowerElement {
        Ring::sub(self, rhs)
    }
}

impl std::ops::Mul for &TowerElement {
    type Output = TowerElement;
    fn mul(self, rhs: Self) -> TowerElement {
        Ring::mul(self, rhs)
    }
}

impl std::ops::Neg for &TowerElement {
    type Output = TowerElement;
    fn neg(self) -> TowerElement {
        self.negate()
    }
}

impl fmt::Display for TowerElement {
    /// Polynomial in the generators `t1, t2, ...`, highest degree first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(&Mono, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let s = format_terms(terms.into_iter().map(|(m, c)| {
            let mono = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| if e == 1 { format!("t{}", j + 1) } else { format!("t{}^{e}", j + 1) })
                .collect::<Vec<_>>()
                .join("*");
            (c.clone(), mono)
        }));
        f.write_str(&s)
    }
}

/// Rounds to `digits` decimals (half away from zero).
pub fn decimal_string(q: &Rational, digits: u32) -> String {
    let scale = Rational::from_integer(BigInt::from(10u32).pow(digits));
    let scaled = (q * scale).abs();
    let n = (scaled + Rational::new(BigInt::from(1), BigInt::from(2))).floor().to_integer();
    let neg = q.is_negative() && !num_traits::Zero::is_zero(&n);
    let mut s = n.to_string();
    if digits > 0 {
        let width = digits as usize + 1;
        if s.len() < width {
            s = "0".repeat(width - s.len()) + &s;
        }
        s.insert(s.len() - digits as usize, '.');
    }
    if neg {
        s.insert(0, '-');
    }
    s
}

/// A decimal approximation `re + im*i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexDecimal {
    pub re: String,
    pub im: String,
}

impl ComplexDecimal {
    pub fn is_real(&self) -> bool {
        self.im.bytes().all(|b| matches!(b, b'0' | b'.' | b'-'))
    }
}

impl fmt::Display for ComplexDecimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            return f.write_str(&self.re);
        }
        match self.im.strip_prefix('-') {
            Some(abs) => write!(f, "{} - {}*i", self.re, abs),
            None => write!(f, "{} + {}*i", self.re, self.im),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorForm {
    /// Primitive integer modulus in the variable `t`.
    pub modulus: String,
    pub root_index: usize,
    pub approx: ComplexDecimal,
}

#[derive(Clone, Debug, Serialize)]
pub struct TermForm {
    pub exponents: Vec<u32>,
    pub coefficient: String,
}

/// Exact description of a tower element plus a decimal approximation.
#[derive(Clone, Debug, Serialize)]
pub struct ExactForm {
    pub expression: String,
    pub generators: Vec<GeneratorForm>,
    pub terms: Vec<TermForm>,
    pub decimal: ComplexDecimal,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    fn sqrt2() -> (TowerContext, TowerElement) {
        TowerContext::new().adjoin(&UPoly::from_ints(&[-2, 0, 1]), 1).unwrap()
    }

    #[test]
    fn square_of_generator_reduces() {
        let (_, t) = sqrt2();
        let sq = &t * &t;
        assert_eq!(sq.as_rational(), Some(rat(2)));
    }

    #[test]
    fn inverse_of_one_plus_sqrt2() {
        let (_, t) = sqrt2();
        let a = &t + &TowerElement::constant(&rat(1));
        let inv = a.invert().unwrap();
        assert_eq!(inv.to_string(), "t1-1");
        assert_eq!((&a * &inv).as_rational(), Some(rat(1)));
    }

    #[test]
    fn decimals() {
        let (_, t) = sqrt2();
        assert_eq!(t.approximate(20).to_string(), "1.41421356237309504880");
        assert_eq!(decimal_string(&ratio(-1, 3), 3), "-0.333");
        assert_eq!(decimal_string(&ratio(-1, 3000), 3), "0.000");
        assert_eq!(decimal_string(&ratio(5, 2), 0), "3");
    }

    #[test]
    fn semantic_zero_in_reducible_modulus() {
        // y^2 - 1 with the root +1: t - 1 is zero although nonzero in the ring.
        let (_, t) = TowerContext::new().adjoin(&UPoly::from_ints(&[-1, 0, 1]), 1).unwrap();
        let a = &t - &TowerElement::constant(&rat(1));
        assert!(!a.is_structurally_zero());
        assert!(a.is_zero());
        assert!(matches!(a.invert(), Err(Error::ZeroDivision)));
    }

    #[test]
    fn zero_divisor_reports_factor() {
        let (_, t) = TowerContext::new().adjoin(&UPoly::from_ints(&[-1, 0, 1]), 0).unwrap();
        let a = &t - &TowerElement::constant(&rat(1));
        match a.invert() {
            Err(Error::NotInvertible { factor: Some(f), .. }) => assert_eq!(f, UPoly::from_ints(&[-1, 1])),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn two_generators() {
        let (c1, a) = TowerContext::new().adjoin(&UPoly::from_ints(&[-2, 0, 1]), 1).unwrap();
        let (_, b) = c1.adjoin(&UPoly::from_ints(&[-3, 0, 1]), 1).unwrap();
        let a = a.lift(b.context()).unwrap();
        let s = &a + &b;
        // (sqrt2 + sqrt3)^2 = 5 + 2 sqrt6
        let sq = &s * &s;
        let six = &(&a * &b).scale_by(&rat(2)) + &TowerElement::constant(&rat(5));
        assert!((&sq - &six).is_structurally_zero());
        let inv = s.invert().unwrap();
        assert_eq!((&inv * &s).as_rational(), Some(rat(1)));
        let (re, _) = s.to_f64();
        assert!((re - (2f64.sqrt() + 3f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn sibling_roots_are_distinguished() {
        let m = UPoly::from_ints(&[-3, 0, 0, 1]);
        let (_, gens) = TowerContext::new().adjoin_roots(&m, &[0, 1, 2]).unwrap();
        let sum = &(&gens[0] + &gens[1]) + &gens[2];
        assert!(sum.is_zero());
        assert!(!(&gens[0] - &gens[1]).is_zero());
        let prod = &(&gens[0] * &gens[1]) * &gens[2];
        assert!((&prod - &TowerElement::constant(&rat(3))).is_zero());
    }

    #[test]
    fn unrelated_contexts_mismatch() {
        let (_, a) = sqrt2();
        let (_, b) = sqrt2();
        assert!(matches!(a.try_add(&b), Err(Error::ContextMismatch)));
    }
}
