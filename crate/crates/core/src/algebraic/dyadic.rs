//! Binary floating-point numbers `m * 2^e` with arbitrary mantissas and
//! complex discs built on top of them. Every operation on [`Ball`] returns
//! a disc guaranteed to contain the exact result.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

use crate::exact::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    m: BigInt,
    e: i64,
}

fn bits(n: &BigInt) -> i64 {
    n.bits() as i64
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { m: BigInt::zero(), e: 0 }
    }

    pub fn new(m: BigInt, e: i64) -> Self {
        Dyadic { m, e }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic { m: BigInt::from(n), e: 0 }
    }

    /// `2^e`
    pub fn pow2(e: i64) -> Self {
        Dyadic { m: BigInt::one(), e }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    /// Exponent of the leading bit, `floor(log2 |self|)`; `None` for zero.
    pub fn msb(&self) -> Option<i64> {
        (!self.m.is_zero()).then(|| self.e + bits(&self.m) - 1)
    }

    fn align(&self, other: &Self) -> (BigInt, BigInt, i64) {
        let e = self.e.min(other.e);
        ((&self.m) << (self.e - e) as usize, (&other.m) << (other.e - e) as usize, e)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, e) = self.align(other);
        Dyadic { m: a + b, e }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Dyadic { m: -&self.m, e: self.e }
    }

    pub fn abs(&self) -> Self {
        Dyadic { m: self.m.abs(), e: self.e }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Dyadic { m: &self.m * &other.m, e: self.e + other.e }
    }

    /// Floors to at most `prec` significant bits. Returns the result and
    /// the exponent `k` with `|error| < 2^k` when anything was dropped.
    pub fn truncate(&self, prec: u64) -> (Self, Option<i64>) {
        let extra = bits(&self.m) - prec as i64;
        if extra <= 0 {
            return (self.clone(), None);
        }
        let m = &self.m >> extra as usize;
        let e = self.e + extra;
        (Dyadic { m, e }, Some(e))
    }

    /// Rounds a nonnegative value up to at most `prec` significant bits.
    pub fn round_up(&self, prec: u64) -> Self {
        let extra = bits(&self.m) - prec as i64;
        if extra <= 0 {
            return self.clone();
        }
        let m = (&self.m >> extra as usize) + 1u32;
        Dyadic { m, e: self.e + extra }
    }

    /// Approximate quotient with about `prec` correct bits, truncated toward
    /// negative infinity; absolute error below one unit of the last place,
    /// which is `2^exp` of the returned value.
    pub fn div(&self, other: &Self, prec: u64) -> Self {
        assert!(!other.is_zero(), "dyadic division by zero");
        let shift = (prec as i64 + bits(&other.m) - bits(&self.m) + 2).max(0);
        let num = (&self.m) << shift as usize;
        let q = num_integer::Integer::div_floor(&num, &other.m);
        Dyadic { m: q, e: self.e - shift - other.e }
    }

    /// Upper bound on `self / other` for nonnegative operands.
    pub fn div_up(&self, other: &Self, prec: u64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let q = self.div(other, prec);
        let ulp = Dyadic::pow2(q.e);
        q.add(&ulp)
    }

    /// `floor(sqrt(self))` to about `prec` bits (a lower bound), nonnegative input.
    pub fn sqrt_floor(&self, prec: u64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut shift = (2 * prec as i64 - bits(&self.m)).max(0);
        if (self.e - shift) % 2 != 0 {
            shift += 1;
        }
        let m = ((&self.m) << shift as usize).sqrt();
        Dyadic { m, e: (self.e - shift) / 2 }
    }

    pub fn sqrt_ceil(&self, prec: u64) -> Self {
        let s = self.sqrt_floor(prec);
        if s.is_zero() && self.is_zero() {
            return s;
        }
        let ulp = Dyadic::pow2(s.e);
        s.add(&ulp)
    }

    pub fn from_rational(q: &Rational, prec: u64) -> (Self, Option<i64>) {
        if q.denom().is_one() {
            return Dyadic { m: q.numer().clone(), e: 0 }.truncate(prec);
        }
        let k = prec as i64 - (bits(q.numer()) - bits(q.denom())) + 1;
        let k = k.max(0);
        let num = q.numer() << k as usize;
        let m = num_integer::Integer::div_floor(&num, q.denom());
        (Dyadic { m, e: -k }, Some(-k))
    }

    pub fn to_rational(&self) -> Rational {
        if self.e >= 0 {
            Rational::from_integer(&self.m << self.e as usize)
        } else {
            Rational::new(self.m.clone(), BigInt::one() << (-self.e) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        let b = bits(&self.m);
        let drop = (b - 60).max(0);
        let m = (&self.m >> drop as usize).to_string().parse::<f64>().unwrap_or(0.0);
        m * 2f64.powi((self.e + drop).clamp(-2000, 2000) as i32)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 || !x.is_finite() {
            return Self::zero();
        }
        let (mant, exp) = {
            let bits = x.to_bits();
            let exp = ((bits >> 52) & 0x7ff) as i64;
            let frac = bits & ((1u64 << 52) - 1);
            if exp == 0 {
                (frac as i64, -1074)
            } else {
                ((frac | (1u64 << 52)) as i64, exp - 1075)
            }
        };
        let m = if x < 0.0 { -mant } else { mant };
        Dyadic { m: BigInt::from(m), e: exp }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }

    pub fn exponent(&self) -> i64 {
        self.e
    }

    pub fn sign(&self) -> Sign {
        self.m.sign()
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.align(other);
        a.cmp(&b)
    }
}

/// Approximate complex number; used for iterations whose results are
/// certified afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub re: Dyadic,
    pub im: Dyadic,
}

impl Complex {
    pub fn zero() -> Self {
        Complex { re: Dyadic::zero(), im: Dyadic::zero() }
    }

    pub fn real(re: Dyadic) -> Self {
        Complex { re, im: Dyadic::zero() }
    }

    pub fn new(re: Dyadic, im: Dyadic) -> Self {
        Complex { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Complex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Complex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> Self {
        Complex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        Complex { re: self.re.clone(), im: self.im.neg() }
    }

    /// Exact product.
    pub fn mul(&self, o: &Self) -> Self {
        Complex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn norm_sqr(&self) -> Dyadic {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    /// `|re| + |im|`, an upper bound on the modulus.
    pub fn abs_bound(&self) -> Dyadic {
        self.re.abs().add(&self.im.abs())
    }

    pub fn abs_lower(&self, prec: u64) -> Dyadic {
        self.norm_sqr().sqrt_floor(prec)
    }

    pub fn abs_upper(&self, prec: u64) -> Dyadic {
        self.norm_sqr().sqrt_ceil(prec)
    }

    /// Truncates both parts; returns an upper bound on the modulus of the
    /// rounding error (zero if nothing was dropped).
    pub fn truncate(&self, prec: u64) -> (Self, Dyadic) {
        let (re, er) = self.re.truncate(prec);
        let (im, ei) = self.im.truncate(prec);
        let err = [er, ei]
            .into_iter()
            .flatten()
            .fold(Dyadic::zero(), |acc, k| acc.add(&Dyadic::pow2(k)));
        (Complex { re, im }, err)
    }

    pub fn trunc(&self, prec: u64) -> Self {
        self.truncate(prec).0
    }

    /// Approximate quotient.
    pub fn div(&self, o: &Self, prec: u64) -> Self {
        let den = o.norm_sqr();
        let num = self.mul(&o.conj());
        Complex { re: num.re.div(&den, prec), im: num.im.div(&den, prec) }
    }

    pub fn from_rational(q: &Rational, prec: u64) -> Self {
        Complex::real(Dyadic::from_rational(q, prec).0)
    }
}

/// Closed complex disc `{ z : |z - center| <= radius }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub center: Complex,
    pub radius: Dyadic,
}

const RADIUS_BITS: u64 = 32;

impl Ball {
    pub fn exact(center: Complex) -> Self {
        Ball { center, radius: Dyadic::zero() }
    }

    pub fn new(center: Complex, radius: Dyadic) -> Self {
        Ball { center, radius }
    }

    pub fn zero() -> Self {
        Ball::exact(Complex::zero())
    }

    pub fn one() -> Self {
        Ball::exact(Complex::real(Dyadic::from_int(1)))
    }

    pub fn from_rational(q: &Rational, prec: u64) -> Self {
        let (c, err) = Dyadic::from_rational(q, prec);
        let radius = err.map_or(Dyadic::zero(), Dyadic::pow2);
        Ball { center: Complex::real(c), radius }
    }

    fn finish(center: Complex, radius: Dyadic, prec: u64) -> Self {
        let (center, err) = center.truncate(prec);
        Ball { center, radius: radius.add(&err).round_up(RADIUS_BITS) }
    }

    pub fn add(&self, o: &Self, prec: u64) -> Self {
        Self::finish(self.center.add(&o.center), self.radius.add(&o.radius), prec)
    }

    pub fn sub(&self, o: &Self, prec: u64) -> Self {
        Self::finish(self.center.sub(&o.center), self.radius.add(&o.radius), prec)
    }

    pub fn neg(&self) -> Self {
        Ball { center: self.center.neg(), radius: self.radius.clone() }
    }

    pub fn mul(&self, o: &Self, prec: u64) -> Self {
        let c = self.center.mul(&o.center);
        let r = self
            .center
            .abs_bound()
            .mul(&o.radius)
            .add(&o.center.abs_bound().mul(&self.radius))
            .add(&self.radius.mul(&o.radius));
        Self::finish(c, r, prec)
    }

    /// Enclosure of the reciprocal; `None` if the disc may contain zero.
    pub fn inv(&self, prec: u64) -> Option<Self> {
        let low = self.center.abs_lower(prec + 8);
        if low <= self.radius {
            return None;
        }
        let q = Complex::real(Dyadic::from_int(1)).div(&self.center, prec + 8).trunc(prec);
        // |q - 1/c| = |q c - 1| / |c|
        let resid = q.mul(&self.center).sub(&Complex::real(Dyadic::from_int(1)));
        let approx_err = resid.abs_bound().div_up(&low, RADIUS_BITS);
        // |1/(c+d) - 1/c| <= r / (|c| (|c| - r))
        let gap = low.sub(&self.radius);
        let pert = self.radius.div_up(&low.mul(&gap), RADIUS_BITS);
        Some(Ball { center: q, radius: approx_err.add(&pert).round_up(RADIUS_BITS) })
    }

    pub fn div(&self, o: &Self, prec: u64) -> Option<Self> {
        Some(self.mul(&o.inv(prec)?, prec))
    }

    /// Upper bound on `|z|` over the disc.
    pub fn mag_upper(&self) -> Dyadic {
        self.center.abs_bound().add(&self.radius)
    }

    /// Lower bound on `|z|` over the disc (zero if the disc contains 0).
    pub fn mag_lower(&self, prec: u64) -> Dyadic {
        let l = self.center.abs_lower(prec).sub(&self.radius);
        if l.is_negative() { Dyadic::zero() } else { l }
    }

    pub fn contains_zero(&self) -> bool {
        self.center.abs_lower(64) <= self.radius
    }

    /// Whether the two discs are certainly disjoint.
    pub fn disjoint(&self, o: &Self) -> bool {
        let d = self.center.sub(&o.center).abs_lower(64);
        d > self.radius.add(&o.radius)
    }

    /// Whether the two discs certainly intersect (or touch).
    pub fn overlaps(&self, o: &Self) -> bool {
        let d = self.center.sub(&o.center).abs_upper(64);
        d <= self.radius.add(&o.radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    #[test]
    fn zero_quotient_is_exact() {
        let q = Dyadic::zero().div_up(&Dyadic::from_int(11), 40);
        assert!(q.is_zero());
    }

    #[test]
    fn rational_roundtrip_within_error() {
        let q = ratio(-22, 7);
        let (d, err) = Dyadic::from_rational(&q, 100);
        let diff = (d.to_rational() - &q).abs();
        assert!(diff < Dyadic::pow2(err.unwrap()).to_rational());
    }

    #[test]
    fn ball_arithmetic_encloses_exact_value() {
        let prec = 80;
        let a = Ball::from_rational(&ratio(1, 3), prec);
        let b = Ball::from_rational(&ratio(-5, 11), prec);
        let exact = ratio(1, 3) * ratio(-5, 11) + ratio(1, 3);
        let got = a.mul(&b, prec).add(&a, prec);
        let dist = (got.center.re.to_rational() - exact).abs();
        assert!(dist <= got.radius.to_rational());
        assert!(got.radius.to_rational() < ratio(1, 1 << 60));
    }

    #[test]
    fn reciprocal_encloses() {
        let prec = 120;
        let c = Ball::exact(Complex::new(Dyadic::from_int(3), Dyadic::from_int(-4)));
        let inv = c.inv(prec).unwrap();
        // 1/(3-4i) = (3+4i)/25
        let re = (inv.center.re.to_rational() - ratio(3, 25)).abs();
        let im = (inv.center.im.to_rational() - ratio(4, 25)).abs();
        assert!(re <= inv.radius.to_rational() && im <= inv.radius.to_rational());
        assert!(Ball::zero().inv(prec).is_none());
    }

    #[test]
    fn sqrt_bounds() {
        let two = Dyadic::from_int(2);
        let lo = two.sqrt_floor(64).to_rational();
        let hi = two.sqrt_ceil(64).to_rational();
        assert!(&lo * &lo <= rat(2) && &hi * &hi >= rat(2));
        assert!(hi - lo < ratio(1, 1 << 60));
    }

    #[test]
    fn f64_conversion() {
        assert_eq!(Dyadic::from_f64(0.75).to_rational(), ratio(3, 4));
        assert!((Dyadic::from_f64(-1.25e-3).to_f64() + 1.25e-3).abs() < 1e-18);
    }
}
