//! Independent check of a conic's third-kind differential through the
//! rational parametrization by lines through a rational point.
//!
//! The line `y - y0 = s (x - x0)` meets the conic again at
//! `x = X(s) / Q(s)`, `y = Y(s) / Q(s)` with `Q(s) = f_2(1, s)`,
//! `L(s) = f_x(x0, y0) + s f_y(x0, y0)`, `X = x0 Q - L` and `Y = y0 Q - s L`.
//! A numerator of degree at most one becomes `g(x, y) = g~(s) / Q(s)` with
//! `g~ = g00 Q + g10 X + g01 Y`, so the differential pulls back to
//! `R(s) ds` with
//! `R = E~ (X' Q - X Q') / ((X - x1 Q)(x2 Q - X) F~y)`.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::algebraic::TowerElement;
use crate::curve::Point;
use crate::error::{Error, Result};
use crate::exact::{BPoly, Poly, Rational, Ring, UPoly};

use super::third_kind::ParametricDifferential;

type TPoly = Poly<TowerElement>;

/// A rational point of the conic used as the centre of the pencil.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoint {
    pub x: Rational,
    pub y: Rational,
}

/// Exact pullback of the differential to the parameter line.
#[derive(Clone, Debug)]
pub struct Genus0Check {
    pub point: RationalPoint,
    pub numerator: TPoly,
    pub denominator: TPoly,
    /// Parameters `s1`, `s2` of the poles `P1`, `P2`.
    pub slopes: [TowerElement; 2],
    /// `numerator(s_i) / denominator'(s_i)`.
    pub residues: [TowerElement; 2],
    /// Whether `numerator (s - s1)(s - s2) = (s1 - s2) denominator` holds
    /// coefficientwise, i.e. `R = 1/(s - s1) - 1/(s - s2)`.
    pub identity_holds: bool,
    pub residues_ok: bool,
}

impl Genus0Check {
    pub fn passed(&self) -> bool {
        self.identity_holds && self.residues_ok
    }

    /// Finite poles of the reduced pullback; two when the identity holds.
    pub fn finite_poles(&self) -> Option<usize> {
        self.identity_holds.then_some(2)
    }
}

fn is_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    Some(Rational::new(is_square(q.numer())?, is_square(q.denom())?))
}

/// Rational roots of a polynomial of degree at most two.
fn small_rational_roots(p: &UPoly) -> Vec<Rational> {
    match p.degree() {
        Some(1) => vec![-p.coeff(0) / p.coeff(1)],
        Some(2) => {
            let (a, b, c) = (p.coeff(2), p.coeff(1), p.coeff(0));
            let disc = &b * &b - Rational::from_integer(4.into()) * &a * &c;
            match rational_sqrt(&disc) {
                Some(d) => {
                    let two_a = &a + &a;
                    vec![(-&b - &d) / &two_a, (-&b + d) / two_a]
                }
                None => vec![],
            }
        }
        _ => vec![],
    }
}

/// Candidate abscissas ordered by height.
fn candidates(max_height: i64) -> Vec<Rational> {
    let mut out = vec![Rational::from_integer(0.into())];
    for h in 1..=max_height {
        for d in 1..=h {
            for m in 1..=h {
                if d.max(m) != h || num_integer::gcd(m, d) != 1 {
                    continue;
                }
                for n in [m, -m] {
                    out.push(Rational::new(n.into(), d.into()));
                }
            }
        }
    }
    out
}

/// Searches a small box for a rational point of the conic `f = 0` whose
/// abscissa avoids `excluded`.
pub fn find_rational_point(f: &BPoly<Rational>, excluded: &[Rational]) -> Result<RationalPoint> {
    for x in candidates(12) {
        if excluded.contains(&x) {
            continue;
        }
        if let Some(y) = small_rational_roots(&f.section(&x)).into_iter().next() {
            return Ok(RationalPoint { x, y });
        }
    }
    Err(Error::NoRationalPoint)
}

struct Pencil {
    point: RationalPoint,
    q: UPoly,
    x: UPoly,
    y: UPoly,
}

impl Pencil {
    fn new(f: &BPoly<Rational>, point: RationalPoint) -> Self {
        let (x0, y0) = (&point.x, &point.y);
        let fx = f.partial_x().eval(x0, y0);
        let fy = f.partial_y().eval(x0, y0);
        let q = UPoly::new(vec![f.coeff(2, 0), f.coeff(1, 1), f.coeff(0, 2)]);
        let l = UPoly::new(vec![fx, fy]);
        let s = UPoly::monomial(Rational::one(), 1);
        let x = q.scale(x0).sub(&l);
        let y = q.scale(y0).sub(&s.mul(&l));
        Pencil { point, q, x, y }
    }

    /// `g~` for `g` of total degree at most one.
    fn homogenize<T: Ring>(&self, g: &BPoly<T>, lift: impl Fn(&UPoly) -> Poly<T>) -> Poly<T> {
        lift(&self.q)
            .scale(&g.coeff(0, 0))
            .add(&lift(&self.x).scale(&g.coeff(1, 0)))
            .add(&lift(&self.y).scale(&g.coeff(0, 1)))
    }

    /// `dX/ds * Q - X * dQ/ds`, so that `dx/ds = this / Q^2`.
    fn x_wronskian(&self) -> UPoly {
        self.x.derivative().mul(&self.q).sub(&self.x.mul(&self.q.derivative()))
    }

    fn slope(&self, p: &Point) -> Result<TowerElement> {
        let dx = &p.x - &self.point.x;
        if num_traits::Zero::is_zero(&dx) {
            return Err(Error::SameAbscissa { x: p.x.to_string() });
        }
        let dy = p.y.try_sub(&TowerElement::constant(&self.point.y))?;
        Ok(dy.scale_by(&dx.recip()))
    }
}

fn lift(p: &UPoly) -> TPoly {
    p.map(TowerElement::from_rational)
}

fn check_conic(d: &ParametricDifferential) -> Result<()> {
    if d.curve.degree() != 2 {
        return Err(Error::Internal(format!(
            "the parametrization check needs a conic, got degree {}",
            d.curve.degree()
        )));
    }
    Ok(())
}

/// Pulls the (parameter-free) differential back to the line of slopes and
/// verifies it equals `ds/(s - s1) - ds/(s - s2)`.
pub fn genus0_pullback(d: &ParametricDifferential, excluded: &[Rational]) -> Result<Genus0Check> {
    check_conic(d)?;
    let mut avoid = vec![d.p1.x.clone(), d.p2.x.clone()];
    avoid.extend_from_slice(excluded);
    let pencil = Pencil::new(d.curve.f(), find_rational_point(d.curve.f(), &avoid)?);

    let e = pencil.homogenize(&d.numerator(&[])?, lift);
    let fy = lift(&pencil.homogenize(d.curve.fy(), |p| p.clone()));
    let numerator = e.mul(&lift(&pencil.x_wronskian()));
    let a = pencil.x.sub(&pencil.q.scale(&d.p1.x));
    let b = pencil.q.scale(&d.p2.x).sub(&pencil.x);
    let denominator = lift(&a.mul(&b)).mul(&fy);

    let s1 = pencil.slope(&d.p1)?;
    let s2 = pencil.slope(&d.p2)?;
    let gap = s1.try_sub(&s2)?;
    let lhs = numerator.mul(&TPoly::linear_root(&s1)).mul(&TPoly::linear_root(&s2));
    let diff = lhs.sub(&denominator.scale(&gap));
    let identity_holds = !gap.is_zero() && !denominator.is_zero() && diff.coeffs().iter().all(|c| c.is_zero());

    let dden = denominator.derivative();
    let mut residues = Vec::with_capacity(2);
    for s in [&s1, &s2] {
        let dv = dden.eval(s);
        if dv.is_zero() {
            return Err(Error::HigherOrderPole { x: "the parameter line".into(), order: 2 });
        }
        residues.push(numerator.eval(s).try_mul(&dv.invert()?)?);
    }
    let residues: [TowerElement; 2] = residues.try_into().expect("two residues");
    let residues_ok = residues[0].try_sub(&TowerElement::one())?.is_zero()
        && residues[1].try_add(&TowerElement::one())?.is_zero();
    Ok(Genus0Check {
        point: pencil.point,
        numerator,
        denominator,
        slopes: [s1, s2],
        residues,
        identity_holds,
        residues_ok,
    })
}

/// Closed form of the fundamental function on a conic:
/// `u(P') = (1 / x'(s')) (1/(s' - s1) - 1/(s' - s2))`.
pub fn genus0_haupt(d: &ParametricDifferential, pprime: &Point) -> Result<TowerElement> {
    check_conic(d)?;
    let avoid = [d.p1.x.clone(), d.p2.x.clone(), pprime.x.clone()];
    let pencil = Pencil::new(d.curve.f(), find_rational_point(d.curve.f(), &avoid)?);
    let s1 = pencil.slope(&d.p1)?;
    let s2 = pencil.slope(&d.p2)?;
    let sp = pencil.slope(pprime)?;
    let q = pencil.q.map(TowerElement::from_rational).eval(&sp);
    let w = lift(&pencil.x_wronskian()).eval(&sp);
    if w.is_zero() {
        return Err(Error::EvaluationAtPole { x: pprime.x.to_string() });
    }
    // dx/ds = w / q^2
    let inv_xs = q.try_mul(&q)?.try_mul(&w.invert()?)?;
    let a = sp.try_sub(&s1)?.invert()?;
    let b = sp.try_sub(&s2)?.invert()?;
    inv_xs.try_mul(&a.try_sub(&b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    #[test]
    fn candidates_start_small() {
        let c = candidates(2);
        assert_eq!(&c[..3], &[rat(0), rat(1), rat(-1)]);
        assert!(c.contains(&ratio(1, 2)));
        assert!(c.contains(&ratio(-2, 1)));
    }

    #[test]
    fn circle_has_rational_points() {
        let f = BPoly::from_terms([((2, 0), rat(1)), ((0, 2), rat(1)), ((0, 0), rat(-1))]);
        let p = find_rational_point(&f, &[rat(0), ratio(1, 2)]).unwrap();
        assert_eq!(f.eval(&p.x, &p.y), rat(0));
        let g = BPoly::from_terms([((2, 0), rat(1)), ((0, 2), rat(1)), ((0, 0), rat(1))]);
        assert!(matches!(find_rational_point(&g, &[]), Err(Error::NoRationalPoint)));
    }
}
