use crate::algebraic::TowerElement;
use crate::error::{Error, Result};
use crate::exact::{BPoly, Rational, Ring};

use super::{Curve, Point};

/// Truncated power series in `t` with tower coefficients, `coeffs[k]` the
/// coefficient of `t^k`.
pub(crate) type Series = Vec<TowerElement>;

pub(crate) fn series_mul(a: &[TowerElement], b: &[TowerElement], len: usize) -> Series {
    let mut out = vec![TowerElement::zero(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if ai.is_structurally_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            out[i + j] = out[i + j].add(&ai.mul(bj));
        }
    }
    out
}

/// `p(x0 + t, y0 + y(t))` truncated to `len` terms, where `p` is given
/// already shifted to the base point.
pub(crate) fn substitute(shifted: &BPoly<TowerElement>, y: &[TowerElement], len: usize) -> Series {
    let max_j = shifted.degree_y().unwrap_or(0) as usize;
    let mut ypow: Vec<Series> = vec![{
        let mut one = vec![TowerElement::zero(); len];
        one[0] = TowerElement::one();
        one
    }];
    for j in 1..=max_j {
        let next = series_mul(&ypow[j - 1], y, len);
        ypow.push(next);
    }
    let mut out = vec![TowerElement::zero(); len];
    for (&(i, j), c) in shifted.terms() {
        let i = i as usize;
        if i >= len {
            continue;
        }
        for (k, v) in ypow[j as usize].iter().enumerate().take(len - i) {
            if !v.is_structurally_zero() {
                out[i + k] = out[i + k].add(&c.mul(v));
            }
        }
    }
    out
}

pub(crate) fn shift_at(p: &BPoly<Rational>, pt: &Point) -> BPoly<TowerElement> {
    p.map(TowerElement::from_rational).shift(&TowerElement::constant(&pt.x), &pt.y)
}

/// Local parametrization `x = x0 + t`, `y = y0 + c1 t + ... + cn t^n`.
#[derive(Clone, Debug)]
pub struct LocalSeries {
    pub point: Point,
    /// `c1, ..., cn`.
    pub coeffs: Vec<TowerElement>,
}

impl LocalSeries {
    pub(super) fn new(curve: &Curve, p: &Point, n: usize) -> Result<Self> {
        let fy = curve.fy_at(p);
        if fy.is_zero() {
            return Err(Error::VerticalTangent { x: p.x.to_string() });
        }
        let inv = fy.invert()?;
        let shifted = shift_at(curve.f(), p);
        let len = n + 1;
        let mut y: Series = vec![TowerElement::zero(); len];
        for k in 1..=n {
            // With y truncated below t^k, the t^k coefficient of F(t, y) is
            // f_y c_k plus what is already known.
            let rest = substitute(&shifted, &y, k + 1);
            y[k] = rest[k].mul(&inv).neg();
        }
        Ok(LocalSeries { point: p.clone(), coeffs: y[1..].to_vec() })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `y(t) - y0` as a truncated series (constant term zero).
    pub(crate) fn displacement(&self) -> Series {
        let mut s = vec![TowerElement::zero()];
        s.extend(self.coeffs.iter().cloned());
        s
    }

    /// Coefficients of `t^0 .. t^n` of `f(x0 + t, y(t))`; all exactly zero.
    pub fn residual(&self, curve: &Curve) -> Vec<TowerElement> {
        let shifted = shift_at(curve.f(), &self.point);
        substitute(&shifted, &self.displacement(), self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::cubic;
    use super::*;
    use crate::algebraic::TowerContext;
    use crate::exact::{rat, ratio};

    #[test]
    fn circle_top_point() {
        let c = Curve::new(BPoly::from_terms([((2, 0), rat(1)), ((0, 2), rat(1)), ((0, 0), rat(-1))])).unwrap();
        let p = c.point(rat(0), TowerElement::constant(&rat(1))).unwrap();
        let s = c.local_series(&p, 2).unwrap();
        assert_eq!(s.coeffs[0].as_rational(), Some(rat(0)));
        assert_eq!(s.coeffs[1].as_rational(), Some(ratio(-1, 2)));
    }

    #[test]
    fn cubic_series_residual_vanishes() {
        let c = cubic();
        let (_, p) = c.section_point(&rat(0), 0, &TowerContext::new()).unwrap();
        let s = c.local_series(&p, 3).unwrap();
        for r in s.residual(&c) {
            assert!(r.is_zero());
        }
        // c1 = -f_x / f_y
        let c1 = c.fx_at(&p).mul(&c.fy_at(&p).invert().unwrap()).neg();
        assert!(s.coeffs[0].sub(&c1).is_zero());
    }

    #[test]
    fn vertical_tangent_detected() {
        let c = Curve::new(BPoly::from_terms([((2, 0), rat(1)), ((0, 2), rat(1)), ((0, 0), rat(-1))])).unwrap();
        let p = c.point(rat(1), TowerElement::zero()).unwrap();
        assert!(matches!(c.local_series(&p, 2), Err(Error::VerticalTangent { .. })));
    }
}
