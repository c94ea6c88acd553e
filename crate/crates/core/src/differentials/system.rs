//! The linear systems for the numerator `E = sum c_ij x^i y^j` (`i + j <= r - 1`)
//! of a third-kind differential `E dx / ((x - x1)(x2 - x) f_y)`.

use crate::algebraic::{TowerContext, TowerElement};
use crate::curve::{Curve, Point};
use crate::error::{Error, Result};
use crate::exact::{vandermonde, Matrix, Rational, Ring};

/// Monomials `x^i y^j` with `i + j <= max_degree`, ordered by total degree,
/// then by decreasing power of `x`: `1, x, y, x^2, x*y, y^2, ...`.
pub fn monomials_up_to(max_degree: i64) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for d in 0..=max_degree.max(-1) {
        let d = d as u32;
        for j in 0..=d {
            out.push((d - j, j));
        }
    }
    out
}

/// The unknowns `c_ij` of the numerator ansatz, `i + j <= r - 1`.
pub fn unknown_monomials(r: u32) -> Vec<(u32, u32)> {
    monomials_up_to(r as i64 - 1)
}

/// What a row of a system encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowSource {
    /// `E(x_i, y) = 0` at a non-pole root of section `i`.
    Vanishing { section: usize, root: usize },
    /// `E(x_i, y_i) = (x2 - x1) f_y(x_i, y_i)` at the pole.
    Residue { section: usize, root: usize },
    /// Power-sum weighted combination `sum_j y_j^k E(x_i, y_j)`.
    Symmetrized { section: usize, power: u32 },
}

/// `matrix * c = rhs` over the unknowns `c_ij`.
#[derive(Clone, Debug)]
pub struct LinearSystem<T> {
    pub matrix: Matrix<T>,
    pub rhs: Vec<TowerElement>,
    pub unknowns: Vec<(u32, u32)>,
    pub rows: Vec<RowSource>,
}

impl<T: Ring> LinearSystem<T> {
    pub fn equations(&self) -> usize {
        self.matrix.rows()
    }

    pub fn unknown_count(&self) -> usize {
        self.unknowns.len()
    }
}

/// Checks the pole pair: distinct abscissas, admissible sections, points on
/// the curve.
pub fn check_poles(curve: &Curve, p1: &Point, p2: &Point) -> Result<TowerContext> {
    if p1.x == p2.x {
        return Err(Error::SameAbscissa { x: p1.x.to_string() });
    }
    for p in [p1, p2] {
        curve.section_isolation(&p.x)?;
        if p.root_index.is_none() {
            curve.point(p.x.clone(), p.y.clone())?;
        }
    }
    p1.y.context().join(p2.y.context())
}

/// `(x2 - x1) f_y(P)`, the right-hand side of a residue condition.
pub fn residue_rhs(curve: &Curve, p1: &Point, p2: &Point, at: &Point) -> TowerElement {
    curve.fy_at(at).scale(&(&p2.x - &p1.x))
}

/// Both pole sections with every ordinate adjoined; the given points keep
/// their own generators.
#[derive(Clone, Debug)]
pub struct PoleSections {
    pub ctx: TowerContext,
    pub points: [Vec<Point>; 2],
    /// Canonical index of the pole within each section.
    pub pole_index: [usize; 2],
}

pub fn pole_sections(curve: &Curve, p1: &Point, p2: &Point) -> Result<PoleSections> {
    let base = check_poles(curve, p1, p2)?;
    let (ctx, s1, i1) = curve.with_siblings(p1, &base)?;
    let (ctx, s2, i2) = curve.with_siblings(p2, &ctx)?;
    Ok(PoleSections { ctx, points: [s1, s2], pole_index: [i1, i2] })
}

/// One vanishing condition per non-pole ordinate plus one residue condition
/// per section: `2r` rows with algebraic entries.
pub fn third_kind_system_naive(curve: &Curve, p1: &Point, p2: &Point) -> Result<(LinearSystem<TowerElement>, PoleSections)> {
    let secs = pole_sections(curve, p1, p2)?;
    let unknowns = unknown_monomials(curve.degree());
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut sources = Vec::new();
    for (s, pts) in secs.points.iter().enumerate() {
        let pole = &[p1, p2][s];
        for (j, pt) in pts.iter().enumerate() {
            rows.push(monomial_row(&unknowns, &pt.x, &pt.y));
            if j == secs.pole_index[s] {
                rhs.push(residue_rhs(curve, p1, p2, pole));
                sources.push(RowSource::Residue { section: s, root: j });
            } else {
                rhs.push(TowerElement::zero());
                sources.push(RowSource::Vanishing { section: s, root: j });
            }
        }
    }
    let system = LinearSystem { matrix: Matrix::from_rows(rows), rhs, unknowns, rows: sources };
    Ok((system, secs))
}

fn monomial_row(unknowns: &[(u32, u32)], x: &Rational, y: &TowerElement) -> Vec<TowerElement> {
    let max_j = unknowns.iter().map(|m| m.1).max().unwrap_or(0);
    let mut ypow = vec![TowerElement::one()];
    for k in 1..=max_j as usize {
        let next = ypow[k - 1].mul(y);
        ypow.push(next);
    }
    unknowns
        .iter()
        .map(|&(a, b)| ypow[b as usize].scale(&pow_rational(x, a)))
        .collect()
}

pub(crate) fn pow_rational(x: &Rational, e: u32) -> Rational {
    Ring::pow(x, e)
}

/// Rows `k = 0..r-1` per section: `sum_j y_j^k E(x_i, y_j) = y_i^k (x2 - x1) f_y(x_i, y_i)`.
/// Coefficients are `x_i^a p_{b+k}` with `p` the power sums of `f(x_i, y)`,
/// so the matrix is rational.
pub fn third_kind_system_sym(curve: &Curve, p1: &Point, p2: &Point) -> Result<LinearSystem<Rational>> {
    check_poles(curve, p1, p2)?;
    let r = curve.degree();
    let unknowns = unknown_monomials(r);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut sources = Vec::new();
    for (s, pole) in [p1, p2].into_iter().enumerate() {
        let sums = curve.section(&pole.x).power_sums(2 * r as usize - 1)?;
        let base = residue_rhs(curve, p1, p2, pole);
        let mut ypow = TowerElement::one();
        for k in 0..r {
            let row: Vec<Rational> = unknowns
                .iter()
                .map(|&(a, b)| pow_rational(&pole.x, a) * &sums[(b + k) as usize])
                .collect();
            rows.push(row);
            rhs.push(ypow.mul(&base));
            sources.push(RowSource::Symmetrized { section: s, power: k });
            ypow = ypow.mul(&pole.y);
        }
    }
    Ok(LinearSystem { matrix: Matrix::from_rows(rows), rhs, unknowns, rows: sources })
}

/// Outcome of comparing `V_i * (naive rows of section i)` with the
/// symmetrized rows of section `i`.
#[derive(Clone, Debug)]
pub struct VandermondeCheck {
    pub section: usize,
    pub entries: usize,
    pub mismatches: Vec<(usize, usize)>,
}

impl VandermondeCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Multiplies each naive subsystem (augmented with its right-hand side) by
/// the Vandermonde matrix of the section ordinates and compares entrywise
/// with the symmetrized subsystem.
pub fn vandermonde_equivalence(curve: &Curve, p1: &Point, p2: &Point) -> Result<Vec<VandermondeCheck>> {
    let (naive, secs) = third_kind_system_naive(curve, p1, p2)?;
    let sym = third_kind_system_sym(curve, p1, p2)?;
    let r = curve.degree() as usize;
    let n = naive.unknown_count();
    let mut out = Vec::new();
    for s in 0..2 {
        let ordinates: Vec<TowerElement> = secs.points[s].iter().map(|p| p.y.clone()).collect();
        let v = vandermonde(&ordinates);
        let aug = Matrix::from_rows(
            (0..r)
                .map(|i| {
                    let row = s * r + i;
                    let mut v: Vec<TowerElement> = naive.matrix.row(row).to_vec();
                    v.push(naive.rhs[row].clone());
                    v
                })
                .collect(),
        );
        let prod = v.mul(&aug);
        let mut mismatches = Vec::new();
        for k in 0..r {
            let row = s * r + k;
            for c in 0..=n {
                let expected = if c < n {
                    TowerElement::constant(sym.matrix.get(row, c))
                } else {
                    sym.rhs[row].clone()
                };
                if !prod.get(k, c).try_sub(&expected)?.is_zero() {
                    mismatches.push((k, c));
                }
            }
        }
        out.push(VandermondeCheck { section: s, entries: r * (n + 1), mismatches });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_order() {
        assert_eq!(unknown_monomials(3), vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]);
        assert_eq!(unknown_monomials(2).len(), 3);
        assert!(monomials_up_to(-1).is_empty());
    }
}
