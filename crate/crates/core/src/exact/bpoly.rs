use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use super::poly::Poly;
use super::ring::{Rational, Ring};

/// Sparse bivariate polynomial `sum c_ij x^i y^j`, keyed by `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BPoly<T> {
    terms: BTreeMap<(u32, u32), T>,
}

impl<T: Ring> Default for BPoly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

impl<T: Ring> BPoly<T> {
    pub fn zero() -> Self {
        BPoly { terms: BTreeMap::new() }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), T)>) -> Self {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k, &c);
        }
        out
    }

    pub fn constant(c: T) -> Self {
        Self::from_terms([((0, 0), c)])
    }

    pub fn monomial(i: u32, j: u32, c: T) -> Self {
        Self::from_terms([((i, j), c)])
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, T::one())
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, T::one())
    }

    pub fn add_term(&mut self, key: (u32, u32), c: &T) {
        let sum = match self.terms.get(&key) {
            Some(old) => old.add(c),
            None => c.clone(),
        };
        if sum.is_structurally_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> T {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(T::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn degree_y(&self) -> Option<u32> {
        self.terms.keys().map(|(_, j)| *j).max()
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&T) -> S) -> BPoly<S> {
        BPoly::from_terms(self.terms.iter().map(|(k, c)| (*k, f(c))))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, &c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map(T::neg)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.mul(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((i1, j1), a) in &self.terms {
            for ((i2, j2), b) in &other.terms {
                out.add_term((i1 + i2, j1 + j2), &a.mul(b));
            }
        }
        out
    }

    pub fn partial_x(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((i, _), _)| *i > 0)
                .map(|((i, j), c)| ((i - 1, *j), c.scale(&Rational::from_integer(BigInt::from(*i))))),
        )
    }

    pub fn partial_y(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((_, j), _)| *j > 0)
                .map(|((i, j), c)| ((*i, j - 1), c.scale(&Rational::from_integer(BigInt::from(*j))))),
        )
    }

    /// Homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((i, j), _)| i + j == d)
                .map(|(k, c)| (*k, c.clone())),
        )
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        let max_i = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let max_j = self.degree_y().unwrap_or(0);
        let xp = powers(x, max_i);
        let yp = powers(y, max_j);
        self.terms.iter().fold(T::zero(), |acc, ((i, j), c)| {
            acc.add(&c.mul(&xp[*i as usize]).mul(&yp[*j as usize]))
        })
    }

    /// Univariate polynomial in `y` obtained by fixing `x`.
    pub fn section(&self, x: &T) -> Poly<T> {
        let max_i = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let xp = powers(x, max_i);
        let n = self.degree_y().map_or(0, |d| d as usize + 1);
        let mut coeffs = vec![T::zero(); n];
        for ((i, j), c) in &self.terms {
            coeffs[*j as usize] = coeffs[*j as usize].add(&c.mul(&xp[*i as usize]));
        }
        Poly::new(coeffs)
    }

    /// Coefficients of `F(t, Y) = self(x0 + t, y0 + Y)`.
    pub fn shift(&self, x0: &T, y0: &T) -> BPoly<T> {
        let max_i = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let max_j = self.degree_y().unwrap_or(0);
        let xp = powers(x0, max_i);
        let yp = powers(y0, max_j);
        let mut out = BPoly::zero();
        for ((i, j), c) in &self.terms {
            for a in 0..=*i {
                let cx = c
                    .mul(&xp[(i - a) as usize])
                    .scale(&Rational::from_integer(binomial(*i, a)));
                for b in 0..=*j {
                    let term = cx
                        .mul(&yp[(j - b) as usize])
                        .scale(&Rational::from_integer(binomial(*j, b)));
                    out.add_term((a, b), &term);
                }
            }
        }
        out
    }
}

pub(crate) fn powers<T: Ring>(x: &T, max: u32) -> Vec<T> {
    let mut out = Vec::with_capacity(max as usize + 1);
    out.push(T::one());
    for k in 1..=max as usize {
        let next = out[k - 1].mul(x);
        out.push(next);
    }
    out
}

/// Joins `(coefficient, monomial)` pairs as `c*m` terms with signs folded in.
pub(crate) fn format_terms(terms: impl Iterator<Item = (Rational, String)>) -> String {
    let mut out = String::new();
    for (c, mono) in terms {
        let neg = c.is_negative();
        let abs = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        if mono.is_empty() {
            out.push_str(&abs.to_string());
        } else if abs == Rational::one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{abs}*{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl BPoly<Rational> {
    /// Terms in canonical order: descending total degree, then descending
    /// power of `x`.
    pub fn canonical_terms(&self) -> Vec<((u32, u32), Rational)> {
        let mut terms: Vec<_> = self.terms.iter().map(|(k, c)| (*k, c.clone())).collect();
        terms.sort_by(|((i1, j1), _), ((i2, j2), _)| (i2 + j2, i2).cmp(&(i1 + j1, i1)));
        terms
    }
}

pub fn monomial_string(i: u32, j: u32) -> String {
    let part = |v: &str, e: u32| match e {
        0 => None,
        1 => Some(v.to_string()),
        _ => Some(format!("{v}^{e}")),
    };
    [part("x", i), part("y", j)].into_iter().flatten().collect::<Vec<_>>().join("*")
}

impl fmt::Display for BPoly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .canonical_terms()
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((i, j), c)| (c, monomial_string(i, j)));
        f.write_str(&format_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ring::rat;

    pub(crate) fn cubic() -> BPoly<Rational> {
        BPoly::from_terms([
            ((3, 0), rat(1)),
            ((0, 3), rat(-1)),
            ((1, 1), rat(2)),
            ((1, 0), rat(1)),
            ((0, 1), rat(-2)),
            ((0, 0), rat(1)),
        ])
    }

    #[test]
    fn display_canonical_order() {
        assert_eq!(cubic().to_string(), "x^3-y^3+2*x*y+x-2*y+1");
    }

    #[test]
    fn sections_of_cubic() {
        let f = cubic();
        assert_eq!(f.section(&rat(0)), Poly::from_ints(&[1, -2, 0, -1]));
        assert_eq!(f.section(&rat(1)), Poly::from_ints(&[3, 0, 0, -1]));
        assert_eq!(f.total_degree(), Some(3));
    }

    #[test]
    fn shift_matches_direct_evaluation() {
        let f = cubic();
        let g = f.shift(&rat(2), &rat(-1));
        for (t, yy) in [(0, 0), (1, 2), (-3, 5)] {
            assert_eq!(g.eval(&rat(t), &rat(yy)), f.eval(&rat(2 + t), &rat(-1 + yy)));
        }
    }

    #[test]
    fn partials() {
        let f = cubic();
        // f_y = -3y^2 + 2x - 2
        assert_eq!(
            f.partial_y(),
            BPoly::from_terms([((0, 2), rat(-3)), ((1, 0), rat(2)), ((0, 0), rat(-2))])
        );
        assert_eq!(f.partial_x().eval(&rat(1), &rat(1)), rat(3 + 2 + 1));
    }

    #[test]
    fn zero_coefficients_do_not_affect_degree() {
        let mut f = cubic();
        f.add_term((3, 0), &rat(-1));
        f.add_term((0, 3), &rat(1));
        assert_eq!(f.total_degree(), Some(2));
    }
}
