use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use super::matrix::{det_bareiss, RatMatrix};
use super::ring::{common_denominator, Rational, Ring};
use crate::error::{Error, Result};

/// Dense univariate polynomial, lowest degree first. Trailing
/// (structurally) zero coefficients are always trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

pub type UPoly = Poly<Rational>;

impl<T: Ring> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_structurally_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: T, degree: usize) -> Self {
        let mut coeffs = vec![T::zero(); degree];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// `x - a`
    pub fn linear_root(a: &T) -> Self {
        Self::new(vec![a.neg(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&T) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(T::neg).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_structurally_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.scale(q)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(T::one()), |acc, _| acc.mul(self))
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc.mul(x).add(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&Rational::from_integer(BigInt::from(i))))
                .collect(),
        )
    }

    /// `self(g(t))`
    pub fn compose(&self, g: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(g).add(&Self::constant(c.clone())))
    }
}

impl UPoly {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let lc_inv = divisor.leading().unwrap().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let one = Self::constant(Rational::one());
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (one.clone(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), one);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading().cloned() {
            None => (r0, s0, t0),
            Some(lc) => {
                let inv = lc.recip();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.gcd(&self.derivative()).degree() == Some(0))
    }

    /// Resultant as the determinant of the Sylvester matrix whose first
    /// `deg b` rows carry the coefficients of `self` (highest degree first),
    /// so that `res(a, b) = lc(a)^deg(b) * prod b(alpha_i)` over the roots of `a`.
    pub fn resultant(&self, other: &Self) -> Result<Rational> {
        let m = self.degree().ok_or(Error::ZeroPolynomial)?;
        let n = other.degree().ok_or(Error::ZeroPolynomial)?;
        if m == 0 && n == 0 {
            return Ok(Rational::one());
        }
        let size = m + n;
        let mut syl = RatMatrix::zeros(size, size);
        for row in 0..n {
            for (k, c) in self.coeffs.iter().rev().enumerate() {
                syl.set(row, row + k, c.clone());
            }
        }
        for row in 0..m {
            for (k, c) in other.coeffs.iter().rev().enumerate() {
                syl.set(n + row, row + k, c.clone());
            }
        }
        Ok(det_bareiss(&syl))
    }

    /// Power sums `p_0 .. p_{count-1}` of the roots, by Newton's identities
    /// on the coefficients.
    pub fn power_sums(&self, count: usize) -> Result<Vec<Rational>> {
        let n = self.degree().ok_or(Error::ZeroPolynomial)?;
        let monic = self.monic();
        // e[i] = coefficient of y^(n-i) in the monic polynomial
        let e = |i: usize| monic.coeff(n - i);
        let mut p: Vec<Rational> = Vec::with_capacity(count);
        for k in 0..count {
            if k == 0 {
                p.push(Rational::from_integer(BigInt::from(n)));
                continue;
            }
            let mut acc = Rational::zero();
            for i in 1..=k.min(n) {
                if i == k {
                    acc += e(i) * Rational::from_integer(BigInt::from(k));
                } else {
                    acc += e(i) * &p[k - i];
                }
            }
            p.push(-acc);
        }
        Ok(p)
    }

    /// Integer primitive multiple with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let den = common_denominator(&self.coeffs);
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let g = ints
            .iter()
            .fold(BigInt::from(0), |acc, c| num_integer::Integer::gcd(&acc, c));
        if num_traits::Zero::is_zero(&g) {
            return ints;
        }
        let sign = if ints.last().is_some_and(|c| c.is_negative()) { -BigInt::from(1) } else { BigInt::from(1) };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }

    pub fn display_in(&self, var: &str) -> String {
        let terms: Vec<(usize, Rational)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        super::bpoly::format_terms(terms.iter().map(|(i, c)| {
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            (c.clone(), mono)
        }))
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("y"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ring::{rat, ratio};

    fn p(c: &[i64]) -> UPoly {
        UPoly::from_ints(c)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 1])), p(&[-1, 1]));
        let f = p(&[-1, 2, 0, 1]);
        assert_eq!(f.gcd(&f.derivative()), p(&[1]));
        assert_eq!(p(&[2, 4]).gcd(&UPoly::zero()), UPoly::new(vec![ratio(1, 2), rat(1)]));
        assert!(UPoly::zero().gcd(&UPoly::zero()).is_zero());
    }

    #[test]
    fn squarefree_examples() {
        assert!(p(&[-1, 2, 0, 1]).is_squarefree().unwrap());
        assert!(!p(&[0, 0, 1]).is_squarefree().unwrap());
        assert!(p(&[-3, 0, 0, 1]).is_squarefree().unwrap());
        assert!(matches!(UPoly::zero().is_squarefree(), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn resultant_examples() {
        // convention: lc(a)^deg(b) * prod b(roots of a); b(1) = -1
        assert_eq!(p(&[-1, 1]).resultant(&p(&[-2, 1])).unwrap(), rat(-1));
        assert_eq!(p(&[1, 0, 1]).resultant(&p(&[0, 1])).unwrap(), rat(1));
        let f = p(&[-1, 2, 0, 1]);
        // -discriminant of y^3+2y-1: -(-4*8 - 27) = 59, and res(f, f') = -disc for cubics
        assert_eq!(f.resultant(&f.derivative()).unwrap(), rat(59));
        assert!(matches!(UPoly::zero().resultant(&f), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn power_sum_examples() {
        assert_eq!(p(&[-1, 2, 0, 1]).power_sums(4).unwrap(), vec![rat(3), rat(0), rat(-4), rat(3)]);
        assert_eq!(p(&[-3, 0, 0, 1]).power_sums(4).unwrap(), vec![rat(3), rat(0), rat(0), rat(9)]);
        // -y^3 + 3 is the same section up to sign
        assert_eq!(p(&[3, 0, 0, -1]).power_sums(4).unwrap(), vec![rat(3), rat(0), rat(0), rat(9)]);
        assert_eq!(p(&[2, -3, 1]).power_sums(3).unwrap(), vec![rat(2), rat(3), rat(5)]);
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = p(&[5, -3, 0, 2, 7]);
        let b = p(&[1, 0, 3]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = p(&[-1, 2, 0, 1]);
        let b = a.derivative();
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(g, p(&[1]));
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, 2, 0, 1]).to_string(), "y^3+2*y-1");
        assert_eq!(UPoly::new(vec![ratio(-3, 4), rat(0), rat(1)]).to_string(), "y^2-3/4");
    }
}
