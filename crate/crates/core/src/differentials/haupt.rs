//! Values of the fundamental function: the third-kind differential with
//! poles at `P1`, `P2`, corrected by first-kind differentials so that its
//! function vanishes at `p` further points, evaluated at `P'`.

use crate::algebraic::TowerElement;
use crate::curve::{Curve, Point};
use crate::error::{Error, Result};
use crate::exact::Ring;

use super::third_kind::{third_kind_with_order, ParametricDifferential, DEFAULT_SERIES_ORDER};

/// Outcome of [`haupt_eval`].
#[derive(Clone, Debug)]
pub struct HauptResult {
    pub value: TowerElement,
    /// The first-kind coefficients `c_1, ..., c_p`.
    pub params: Vec<TowerElement>,
    pub differential: ParametricDifferential,
    /// Whether `u + sum c_j u_j` vanishes exactly at every `A_i`.
    pub residuals_zero: bool,
}

pub fn haupt_eval(curve: &Curve, p1: &Point, p2: &Point, pprime: &Point, poles: &[Point]) -> Result<HauptResult> {
    haupt_eval_with_order(curve, p1, p2, pprime, poles, DEFAULT_SERIES_ORDER)
}

pub fn haupt_eval_with_order(
    curve: &Curve,
    p1: &Point,
    p2: &Point,
    pprime: &Point,
    poles: &[Point],
    order: usize,
) -> Result<HauptResult> {
    let differential = third_kind_with_order(curve, p1, p2, order)?;
    let p = differential.genus();
    if poles.len() != p {
        return Err(Error::WrongPoleCount { expected: p, got: poles.len() });
    }
    let mut seen = vec![&p1.x, &p2.x];
    for q in poles.iter().chain([pprime]) {
        if seen.contains(&&q.x) {
            return Err(Error::SameAbscissa { x: q.x.to_string() });
        }
        seen.push(&q.x);
        if q.root_index.is_none() {
            curve.point(q.x.clone(), q.y.clone())?;
        }
    }

    let mut rows = Vec::with_capacity(p);
    for a in poles {
        let mut row = (0..p).map(|j| differential.eval_first_kind(j, a)).collect::<Result<Vec<_>>>()?;
        row.push(differential.eval_u(a, &[])?.neg());
        rows.push(row);
    }
    let params = solve_square(rows)?;

    let mut residuals_zero = true;
    for a in poles {
        residuals_zero &= differential.eval_u(a, &params)?.is_zero();
    }
    if !residuals_zero {
        return Err(Error::Verification("the corrected function does not vanish at the extra poles".into()));
    }
    let value = differential.eval_u(pprime, &params)?;
    Ok(HauptResult { value, params, differential, residuals_zero })
}

/// Gauss-Jordan elimination on an augmented `n x (n + 1)` system with
/// semantic pivot tests.
fn solve_square(mut rows: Vec<Vec<TowerElement>>) -> Result<Vec<TowerElement>> {
    let n = rows.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !rows[r][col].is_zero()).ok_or(Error::DegeneratePoints { size: n })?;
        rows.swap(col, pivot);
        let inv = rows[col][col].invert()?;
        let prow: Vec<TowerElement> = rows[col].iter().map(|e| e.try_mul(&inv)).collect::<Result<_>>()?;
        for (r, row) in rows.iter_mut().enumerate() {
            if r == col || row[col].is_structurally_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (e, pe) in row.iter_mut().zip(&prow) {
                *e = e.try_sub(&pe.try_mul(&factor)?)?;
            }
        }
        rows[col] = prow;
    }
    Ok(rows.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn solves_a_rational_system() {
        let c = |q: i64| TowerElement::constant(&rat(q));
        let sol = solve_square(vec![vec![c(0), c(2), c(4)], vec![c(1), c(1), c(3)]]).unwrap();
        assert_eq!(sol[0].as_rational(), Some(rat(1)));
        assert_eq!(sol[1].as_rational(), Some(rat(2)));
    }

    #[test]
    fn singular_system_is_degenerate() {
        let c = |q: i64| TowerElement::constant(&rat(q));
        let err = solve_square(vec![vec![c(1), c(2), c(0)], vec![c(2), c(4), c(1)]]).unwrap_err();
        assert!(matches!(err, Error::DegeneratePoints { size: 2 }));
    }
}
