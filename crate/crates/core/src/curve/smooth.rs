//! Exact smoothness test for a plane curve `f = 0`.
//!
//! Affine singular points are the common zeros of `f, f_x, f_y`; there are
//! none exactly when the reduced Gröbner basis of that ideal is `{1}`.
//! Points at infinity are `[X:Y:0]` with `F_X = F_Y = F_Z = 0`, which on the
//! line `Z = 0` reads `d f_r/dX = d f_r/dY = f_{r-1} = 0` for the
//! homogeneous parts `f_r`, `f_{r-1}`.

use std::collections::BTreeMap;

use crate::exact::{BPoly, Rational, Ring, UPoly};

/// Outcome of [`smoothness`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothnessReport {
    pub smooth: bool,
    /// Description of the singular locus when not smooth.
    pub witness: Option<String>,
}

/// Keys `(total degree, exponent of x)` order monomials by graded
/// reverse-lexicographic order with `x > y`.
type Key = (u32, u32);

#[derive(Clone, Debug, PartialEq)]
struct GPoly {
    terms: BTreeMap<Key, Rational>,
}

fn key(i: u32, j: u32) -> Key {
    (i + j, i)
}

fn exps(k: Key) -> (u32, u32) {
    (k.1, k.0 - k.1)
}

impl GPoly {
    fn from_bpoly(f: &BPoly<Rational>) -> Self {
        let terms = f
            .terms()
            .filter(|(_, c)| !c.is_zero())
            .map(|(&(i, j), c)| (key(i, j), c.clone()))
            .collect();
        GPoly { terms }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn leading(&self) -> Option<(Key, &Rational)> {
        self.terms.last_key_value().map(|(k, c)| (*k, c))
    }

    fn monic(mut self) -> Self {
        if let Some((_, lc)) = self.leading() {
            let inv = lc.clone().recip();
            for c in self.terms.values_mut() {
                *c = &*c * &inv;
            }
        }
        self
    }

    /// `self - c * m * g` where `m` is the monomial with exponents `(a, b)`.
    fn sub_scaled(&mut self, c: &Rational, (a, b): (u32, u32), g: &GPoly) {
        for (k, gc) in &g.terms {
            let (i, j) = exps(*k);
            let nk = key(i + a, j + b);
            let v = self.terms.remove(&nk).unwrap_or_else(Rational::zero) - c * gc;
            if !v.is_zero() {
                self.terms.insert(nk, v);
            }
        }
    }

    fn to_bpoly(&self) -> BPoly<Rational> {
        BPoly::from_terms(self.terms.iter().map(|(k, c)| (exps(*k), c.clone())))
    }
}

fn divides(a: Key, b: Key) -> Option<(u32, u32)> {
    let (ai, aj) = exps(a);
    let (bi, bj) = exps(b);
    (ai <= bi && aj <= bj).then(|| (bi - ai, bj - aj))
}

fn reduce(p: &GPoly, basis: &[GPoly]) -> GPoly {
    let mut p = p.clone();
    let mut rem = GPoly { terms: BTreeMap::new() };
    while let Some((lm, lc)) = p.leading() {
        let lc = lc.clone();
        let hit = basis.iter().find_map(|g| {
            let (gm, gc) = g.leading()?;
            divides(gm, lm).map(|m| (g, m, gc.clone()))
        });
        match hit {
            Some((g, m, gc)) => p.sub_scaled(&(lc / gc), m, g),
            None => {
                p.terms.remove(&lm);
                rem.terms.insert(lm, lc);
            }
        }
    }
    rem
}

fn s_poly(f: &GPoly, g: &GPoly) -> GPoly {
    let (fm, fc) = f.leading().unwrap();
    let (gm, gc) = g.leading().unwrap();
    let (fi, fj) = exps(fm);
    let (gi, gj) = exps(gm);
    let (li, lj) = (fi.max(gi), fj.max(gj));
    let mut s = GPoly { terms: BTreeMap::new() };
    s.sub_scaled(&-fc.clone().recip(), (li - fi, lj - fj), f);
    s.sub_scaled(&gc.clone().recip(), (li - gi, lj - gj), g);
    s
}

/// Reduced Gröbner basis (grevlex) of the ideal generated by `gens`.
pub fn groebner_basis(gens: &[BPoly<Rational>]) -> Vec<BPoly<Rational>> {
    let mut basis: Vec<GPoly> = gens.iter().map(GPoly::from_bpoly).filter(|g| !g.is_zero()).map(GPoly::monic).collect();
    let mut pairs: Vec<(usize, usize)> = (0..basis.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    while let Some((i, j)) = pairs.pop() {
        let (mi, mj) = (basis[i].leading().unwrap().0, basis[j].leading().unwrap().0);
        let ((ai, aj), (bi, bj)) = (exps(mi), exps(mj));
        if ai.min(bi) == 0 && aj.min(bj) == 0 {
            // coprime leading monomials: the S-polynomial reduces to zero
            continue;
        }
        let r = reduce(&s_poly(&basis[i], &basis[j]), &basis);
        if r.is_zero() {
            continue;
        }
        let r = r.monic();
        if r.leading().unwrap().0 == (0, 0) {
            return vec![BPoly::constant(Rational::one())];
        }
        let n = basis.len();
        basis.push(r);
        pairs.extend((0..n).map(|i| (i, n)));
    }
    interreduce(basis).iter().map(GPoly::to_bpoly).collect()
}

fn interreduce(mut basis: Vec<GPoly>) -> Vec<GPoly> {
    // drop elements whose leading monomial is divisible by another's
    let mut keep: Vec<GPoly> = Vec::new();
    basis.sort_by_key(|g| g.leading().unwrap().0);
    for g in basis {
        let lm = g.leading().unwrap().0;
        if !keep.iter().any(|h| divides(h.leading().unwrap().0, lm).is_some()) {
            keep.push(g);
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<GPoly> = keep.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone()).collect();
        let (lm, lc) = keep[i].leading().map(|(k, c)| (k, c.clone())).unwrap();
        let mut tail = keep[i].clone();
        tail.terms.remove(&lm);
        let mut r = reduce(&tail, &others);
        r.terms.insert(lm, lc);
        out.push(r.monic());
    }
    out
}

/// Dehomogenized (`Y = 1`) univariate form of a homogeneous polynomial in
/// `x` and `y` of degree `d`.
fn dehomogenize(h: &BPoly<Rational>) -> UPoly {
    let d = h.total_degree().unwrap_or(0);
    let mut coeffs = vec![Rational::zero(); d as usize + 1];
    for (&(i, _), c) in h.terms() {
        coeffs[i as usize] = &coeffs[i as usize] + c;
    }
    UPoly::new(coeffs)
}

/// Common zero on the projective line of homogeneous forms (zero forms are
/// ignored).
fn common_projective_zero(forms: &[BPoly<Rational>]) -> Option<String> {
    let forms: Vec<&BPoly<Rational>> = forms.iter().filter(|h| !h.is_zero()).collect();
    if forms.is_empty() {
        return Some("every point at infinity".into());
    }
    // [1:0]: every form has zero X^d coefficient.
    let at_x = forms.iter().all(|h| {
        let d = h.total_degree().unwrap();
        d > 0 && h.coeff(d, 0).is_zero()
    });
    if at_x {
        return Some("[1:0:0]".into());
    }
    let g = forms
        .iter()
        .map(|h| dehomogenize(h))
        .fold(UPoly::zero(), |acc, p| acc.gcd(&p));
    match g.degree() {
        Some(d) if d > 0 => Some(format!("[x:1:0] with {}", g.display_in("x"))),
        _ => None,
    }
}

/// Decides whether `f = 0` is a smooth projective curve.
pub fn smoothness(f: &BPoly<Rational>) -> SmoothnessReport {
    let fx = f.partial_x();
    let fy = f.partial_y();
    let gb = groebner_basis(&[f.clone(), fx, fy]);
    let affine_smooth = gb.len() == 1 && gb[0].total_degree() == Some(0);
    if !affine_smooth {
        let eqs: Vec<String> = gb.iter().map(|g| g.to_string()).collect();
        return SmoothnessReport {
            smooth: false,
            witness: Some(format!("affine singular points satisfy {{{}}}", eqs.join(", "))),
        };
    }
    let r = f.total_degree().unwrap_or(0);
    let top = f.homogeneous_part(r);
    let sub = if r > 0 { f.homogeneous_part(r - 1) } else { BPoly::zero() };
    match common_projective_zero(&[top.partial_x(), top.partial_y(), sub]) {
        Some(w) => SmoothnessReport { smooth: false, witness: Some(format!("singular point at infinity {w}")) },
        None => SmoothnessReport { smooth: true, witness: None },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn poly(terms: &[((u32, u32), i64)]) -> BPoly<Rational> {
        BPoly::from_terms(terms.iter().map(|&(k, c)| (k, rat(c))))
    }

    #[test]
    fn cubic_is_smooth() {
        let f = poly(&[((3, 0), 1), ((0, 3), -1), ((1, 1), 2), ((1, 0), 1), ((0, 1), -2), ((0, 0), 1)]);
        assert!(smoothness(&f).smooth);
    }

    #[test]
    fn cusp_is_singular() {
        let f = poly(&[((0, 2), 1), ((3, 0), -1)]);
        let rep = smoothness(&f);
        assert!(!rep.smooth);
        assert!(rep.witness.unwrap().contains("affine"));
    }

    #[test]
    fn circle_is_smooth() {
        assert!(smoothness(&poly(&[((2, 0), 1), ((0, 2), 1), ((0, 0), -1)])).smooth);
    }

    #[test]
    fn node_at_infinity() {
        // x^2 y - y - 1: affine part smooth, singular at [0:1:0]
        let f = poly(&[((2, 1), 1), ((0, 1), -1), ((0, 0), -1)]);
        let rep = smoothness(&f);
        assert!(!rep.smooth);
        assert!(rep.witness.unwrap().contains("infinity"));
    }

    #[test]
    fn basis_of_line_pair() {
        let gb = groebner_basis(&[poly(&[((1, 0), 1)]), poly(&[((0, 1), 1), ((1, 0), 1)])]);
        assert_eq!(gb.len(), 2);
    }
}
