//! Smooth plane curves `f(x, y) = 0` over Q, their sections over rational
//! abscissas and local uniformizing series.

mod series;
mod smooth;

use std::fmt;

pub use series::LocalSeries;
pub(crate) use series::{substitute, Series};
pub use smooth::{groebner_basis, smoothness, SmoothnessReport};

use crate::algebraic::{isolate_roots, RootIsolation, TowerContext, TowerElement};
use crate::error::{Error, Result};
use crate::exact::{BPoly, Rational, Ring, UPoly};

/// Evaluates a rational bivariate polynomial at `(x, y)` with `y` algebraic.
pub fn eval_bpoly(p: &BPoly<Rational>, x: &Rational, y: &TowerElement) -> Result<TowerElement> {
    let section = p.section(x);
    let mut acc = TowerElement::zero();
    for c in section.coeffs().iter().rev() {
        acc = acc.try_mul(y)?.try_add(&TowerElement::constant(c))?;
    }
    Ok(acc)
}

/// A point of a curve with rational abscissa.
#[derive(Clone, Debug)]
pub struct Point {
    pub x: Rational,
    pub y: TowerElement,
    /// Position of `y` in the canonical root order of the section, when known.
    pub root_index: Option<usize>,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A plane curve of degree `r`.
#[derive(Clone, Debug)]
pub struct Curve {
    f: BPoly<Rational>,
    fx: BPoly<Rational>,
    fy: BPoly<Rational>,
    degree: u32,
    smoothness: Option<SmoothnessReport>,
}

impl Curve {
    /// Builds the curve and verifies smoothness exactly.
    pub fn new(f: BPoly<Rational>) -> Result<Self> {
        let mut c = Self::assume_smooth(f)?;
        let report = smoothness(&c.f);
        if !report.smooth {
            return Err(Error::NotSmooth(report.witness.unwrap_or_default()));
        }
        c.smoothness = Some(report);
        Ok(c)
    }

    /// Builds the curve without the smoothness check.
    pub fn assume_smooth(f: BPoly<Rational>) -> Result<Self> {
        let degree = f.total_degree().unwrap_or(0);
        if degree == 0 {
            return Err(Error::NotSmooth("the polynomial is constant".into()));
        }
        Ok(Curve { fx: f.partial_x(), fy: f.partial_y(), f, degree, smoothness: None })
    }

    pub fn f(&self) -> &BPoly<Rational> {
        &self.f
    }

    pub fn fx(&self) -> &BPoly<Rational> {
        &self.fx
    }

    pub fn fy(&self) -> &BPoly<Rational> {
        &self.fy
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `(r - 1)(r - 2) / 2`.
    pub fn genus(&self) -> u32 {
        (self.degree - 1) * (self.degree.saturating_sub(2)) / 2
    }

    /// Whether smoothness was verified (rather than assumed).
    pub fn smoothness_verified(&self) -> bool {
        self.smoothness.is_some()
    }

    /// `f(x0, y)` as a polynomial in `y`.
    pub fn section(&self, x0: &Rational) -> UPoly {
        self.f.section(x0)
    }

    /// Checks that the section over `x0` has `r` simple roots and isolates
    /// them.
    pub fn section_isolation(&self, x0: &Rational) -> Result<(UPoly, RootIsolation)> {
        let s = self.section(x0);
        if s.degree() != Some(self.degree as usize) {
            return Err(Error::DegreeDrop { x: x0.to_string() });
        }
        if !s.is_squarefree()? {
            return Err(Error::MultipleRoots { x: x0.to_string() });
        }
        let iso = isolate_roots(&s)?;
        Ok((s, iso))
    }

    /// All `r` points over `x0`, in canonical order, adjoined to `ctx`.
    pub fn section_roots(&self, x0: &Rational, ctx: &TowerContext) -> Result<(TowerContext, Vec<Point>)> {
        let (s, iso) = self.section_isolation(x0)?;
        let indices: Vec<usize> = (0..iso.roots.len()).collect();
        let (ctx, gens) = ctx.adjoin_isolated(&s, &iso, &indices)?;
        let points = gens
            .into_iter()
            .enumerate()
            .map(|(i, y)| Point { x: x0.clone(), y, root_index: Some(i) })
            .collect();
        Ok((ctx, points))
    }

    /// The point over `x0` with the given canonical root index.
    pub fn section_point(&self, x0: &Rational, index: usize, ctx: &TowerContext) -> Result<(TowerContext, Point)> {
        let (s, iso) = self.section_isolation(x0)?;
        if index >= iso.roots.len() {
            return Err(Error::RootIndex { index, count: iso.roots.len() });
        }
        let (ctx, mut gens) = ctx.adjoin_isolated(&s, &iso, &[index])?;
        Ok((ctx, Point { x: x0.clone(), y: gens.pop().unwrap(), root_index: Some(index) }))
    }

    /// Validates that `(x, y)` lies on the curve.
    pub fn point(&self, x: Rational, y: TowerElement) -> Result<Point> {
        if !eval_bpoly(&self.f, &x, &y)?.is_zero() {
            return Err(Error::PointNotOnCurve { x: x.to_string() });
        }
        Ok(Point { x, y, root_index: None })
    }

    /// The other `r - 1` points over the abscissa of `p`, adjoined as new
    /// generators; returns all `r` points in canonical order with `p`
    /// itself in its own slot.
    pub fn with_siblings(&self, p: &Point, ctx: &TowerContext) -> Result<(TowerContext, Vec<Point>, usize)> {
        let (s, iso) = self.section_isolation(&p.x)?;
        let own = match p.root_index {
            Some(i) => i,
            None => locate(&p.y, &iso)?,
        };
        let others: Vec<usize> = (0..iso.roots.len()).filter(|&i| i != own).collect();
        let ctx = ctx.join(p.y.context())?;
        let (ctx, gens) = ctx.adjoin_isolated(&s, &iso, &others)?;
        let mut points = Vec::with_capacity(iso.roots.len());
        let mut gens = gens.into_iter();
        for i in 0..iso.roots.len() {
            if i == own {
                points.push(p.clone());
            } else {
                points.push(Point { x: p.x.clone(), y: gens.next().unwrap(), root_index: Some(i) });
            }
        }
        Ok((ctx, points, own))
    }

    pub fn fx_at(&self, p: &Point) -> TowerElement {
        eval_bpoly(&self.fx, &p.x, &p.y).expect("a single element cannot mismatch itself")
    }

    /// `df/dy` at `p`.
    pub fn fy_at(&self, p: &Point) -> TowerElement {
        eval_bpoly(&self.fy, &p.x, &p.y).expect("a single element cannot mismatch itself")
    }

    /// Uniformizing series `x = x0 + t`, `y = y0 + c1 t + ... + cn t^n`.
    pub fn local_series(&self, p: &Point, n: usize) -> Result<LocalSeries> {
        LocalSeries::new(self, p, n)
    }
}

/// Index of the isolated root whose disc holds the value of `y`.
pub fn locate(y: &TowerElement, iso: &RootIsolation) -> Result<usize> {
    let sep = &iso.separation;
    let bits = (sep.denom().bits() as i64 - sep.numer().bits() as i64) + 8;
    let b = y.enclose(bits.max(8));
    let hits: Vec<usize> = iso
        .roots
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.ball.disjoint(&b))
        .map(|(i, _)| i)
        .collect();
    match hits.as_slice() {
        [i] => Ok(*i),
        _ => Err(Error::Internal(format!("could not locate {y} among {} roots", iso.roots.len()))),
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    pub(crate) fn cubic() -> Curve {
        Curve::new(BPoly::from_terms([
            ((3, 0), rat(1)),
            ((0, 3), rat(-1)),
            ((1, 1), rat(2)),
            ((1, 0), rat(1)),
            ((0, 1), rat(-2)),
            ((0, 0), rat(1)),
        ]))
        .unwrap()
    }

    fn circle() -> Curve {
        Curve::new(BPoly::from_terms([((2, 0), rat(1)), ((0, 2), rat(1)), ((0, 0), rat(-1))])).unwrap()
    }

    #[test]
    fn genus_formula() {
        assert_eq!(cubic().genus(), 1);
        assert_eq!(circle().genus(), 0);
    }

    #[test]
    fn sections_of_the_cubic() {
        let c = cubic();
        let (_, pts) = c.section_roots(&rat(0), &TowerContext::new()).unwrap();
        assert_eq!(pts.len(), 3);
        let (re, _) = pts[2].y.to_f64();
        assert!((re - 0.45340).abs() < 1e-5);
        for p in &pts {
            assert!(eval_bpoly(c.f(), &p.x, &p.y).unwrap().is_zero());
        }
        let (_, p) = c.section_point(&rat(1), 2, &TowerContext::new()).unwrap();
        let cube = &(&p.y * &p.y) * &p.y;
        assert_eq!(cube.as_rational(), Some(rat(3)));
        // f_y = -3y^2 + 2x - 2 at (1, 3^(1/3))
        let fy = c.fy_at(&p);
        let expected = (&p.y * &p.y).scale_by(&rat(-3));
        assert!((&fy - &expected).is_structurally_zero());
    }

    #[test]
    fn tangent_section_has_multiple_roots() {
        let err = circle().section_roots(&rat(1), &TowerContext::new()).unwrap_err();
        assert!(matches!(err, Error::MultipleRoots { .. }));
    }

    #[test]
    fn off_curve_point_rejected() {
        let err = circle().point(rat(0), TowerElement::constant(&rat(2))).unwrap_err();
        assert!(matches!(err, Error::PointNotOnCurve { .. }));
    }

    #[test]
    fn siblings_keep_the_given_point() {
        let c = cubic();
        let (ctx, p) = c.section_point(&rat(0), 1, &TowerContext::new()).unwrap();
        let (_, pts, own) = c.with_siblings(&Point { root_index: None, ..p.clone() }, &ctx).unwrap();
        assert_eq!(own, 1);
        assert!((&pts[1].y - &p.y).is_structurally_zero());
        let sum = pts.iter().fold(TowerElement::zero(), |acc, q| &acc + &q.y);
        assert!(sum.is_zero());
    }
}
