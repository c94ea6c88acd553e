//! Certified isolation of the complex roots of a square-free rational
//! polynomial.
//!
//! Approximations come from an Aberth–Ehrlich iteration followed by Newton
//! polishing; each approximation `z` is then certified by the inclusion
//! disc `|w - z| <= n |p(z)| / |p'(z)|`, which always contains a root. Once
//! `n` such discs are pairwise disjoint every disc holds exactly one root.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dyadic::{Ball, Complex, Dyadic};
use crate::error::{Error, Result};
use crate::exact::{Rational, UPoly};

const START_PREC: u64 = 128;
const MAX_PREC: u64 = 1 << 16;
/// Real parts closer than this are treated as equal when ordering roots.
const TIE_BITS: i64 = 4096;

/// One certified root: the disc contains exactly this root and no other.
#[derive(Clone, Debug)]
pub struct IsolatedRoot {
    pub ball: Ball,
    pub real: bool,
    /// Index (in canonical order) of the complex-conjugate root.
    pub conjugate: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct RootIsolation {
    pub roots: Vec<IsolatedRoot>,
    /// Positive lower bound on the distance between any two roots.
    pub separation: Rational,
}

/// Integer polynomial used for certified evaluation.
#[derive(Clone, Debug)]
pub(crate) struct IntPoly {
    pub coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn from_upoly(p: &UPoly) -> Self {
        IntPoly { coeffs: p.primitive_integer() }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn derivative(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect(),
        }
    }

    fn eval_approx(&self, z: &Complex, prec: u64) -> Complex {
        self.coeffs.iter().rev().fold(Complex::zero(), |acc, c| {
            acc.mul(z).add(&Complex::real(Dyadic::new(c.clone(), 0))).trunc(prec)
        })
    }

    pub fn eval_ball(&self, z: &Ball, prec: u64) -> Ball {
        self.coeffs.iter().rev().fold(Ball::zero(), |acc, c| {
            acc.mul(z, prec).add(&Ball::exact(Complex::real(Dyadic::new(c.clone(), 0))), prec)
        })
    }

    /// `1 + max |a_i / a_n|`, rounded up to an integer.
    pub fn cauchy_bound(&self) -> BigInt {
        let lc = self.coeffs.last().unwrap().abs();
        let max = self.coeffs[..self.degree()].iter().map(|c| c.abs()).max().unwrap_or_default();
        BigInt::one() + num_integer::Integer::div_ceil(&max, &lc)
    }
}

/// Mahler's lower bound `sqrt(3|D|) n^{-(n+2)/2} ||p||_2^{-(n-1)}` on the
/// minimal distance between roots, for square-free `p`.
fn separation_bound(m: &UPoly, p: &IntPoly) -> Result<Rational> {
    let n = p.degree();
    if n < 2 {
        return Ok(Rational::one());
    }
    let pr = UPoly::new(p.coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect());
    let res = pr.resultant(&pr.derivative())?;
    let disc = (res / Rational::from_integer(p.coeffs[n].clone())).abs();
    if disc.is_zero() {
        return Err(Error::NotSquareFree(m.to_string()));
    }
    let num = (disc.to_integer() * BigInt::from(3)).sqrt();
    let nb = BigInt::from(n);
    let n_pow = if n.is_multiple_of(2) {
        nb.pow(((n + 2) / 2) as u32)
    } else {
        nb.pow(n.div_ceil(2) as u32) * (nb.sqrt() + 1u32)
    };
    let norm2: BigInt = p.coeffs.iter().map(|c| c * c).sum();
    let norm = norm2.sqrt() + 1u32;
    let den = n_pow * norm.pow((n - 1) as u32);
    Ok(Rational::new(num, den))
}

fn aberth(p: &IntPoly, start: &mut [Complex], prec: u64) {
    let dp = p.derivative();
    let n = start.len();
    let tol_bits = prec as i64 - 24;
    for _ in 0..2000 {
        let mut converged = true;
        for k in 0..n {
            let z = start[k].clone();
            let pz = p.eval_approx(&z, prec);
            if pz.is_zero() {
                continue;
            }
            let mut dpz = dp.eval_approx(&z, prec);
            if dpz.is_zero() {
                dpz = Complex::real(Dyadic::pow2(-(prec as i64) / 2));
            }
            let w = pz.div(&dpz, prec);
            let mut s = Complex::zero();
            for (j, zj) in start.iter().enumerate() {
                if j != k {
                    let d = z.sub(zj);
                    if !d.is_zero() {
                        s = s.add(&Complex::real(Dyadic::from_int(1)).div(&d, prec));
                    }
                }
            }
            let denom = Complex::real(Dyadic::from_int(1)).sub(&w.mul(&s).trunc(prec));
            let corr = if denom.is_zero() { w } else { w.div(&denom, prec) };
            let scale = z.abs_bound().msb().unwrap_or(0).max(0);
            if corr.abs_bound().msb().is_some_and(|b| b > scale - tol_bits) {
                converged = false;
            }
            start[k] = z.sub(&corr).trunc(prec);
        }
        if converged {
            break;
        }
    }
}

/// Inclusion radius `n |p(z)| / |p'(z)|` evaluated with certified
/// arithmetic; `None` if `p'(z)` cannot be bounded away from zero.
pub(crate) fn inclusion_radius(p: &IntPoly, z: &Complex, prec: u64) -> Option<Dyadic> {
    let zb = Ball::exact(z.clone());
    let pz = p.eval_ball(&zb, prec);
    let dpz = p.derivative().eval_ball(&zb, prec);
    let low = dpz.mag_lower(prec);
    if low.is_zero() {
        return None;
    }
    let up = pz.mag_upper().mul(&Dyadic::from_int(p.degree() as i64));
    Some(up.div_up(&low, 40).round_up(40))
}

/// Newton-polishes `z` until its inclusion radius is at most `target`.
pub(crate) fn polish(p: &IntPoly, z: &Complex, target: &Dyadic, min_prec: u64) -> Option<(Complex, Dyadic)> {
    let dp = p.derivative();
    let need = (-target.msb().unwrap_or(0)).max(0) as u64
        + z.abs_bound().msb().unwrap_or(0).max(0) as u64
        + 64;
    let mut prec = min_prec.max(need);
    let mut z = z.clone();
    let mut last: Option<Dyadic> = None;
    for _ in 0..200 {
        if let Some(r) = inclusion_radius(p, &z, prec) {
            if r <= *target {
                return Some((z, r));
            }
            if last.as_ref().is_some_and(|l| r >= *l) {
                prec *= 2;
                if prec > MAX_PREC * 4 {
                    return None;
                }
            }
            last = Some(r);
        } else {
            prec *= 2;
            if prec > MAX_PREC * 4 {
                return None;
            }
        }
        let pz = p.eval_approx(&z, prec);
        let dpz = dp.eval_approx(&z, prec);
        if dpz.is_zero() {
            return None;
        }
        z = z.sub(&pz.div(&dpz, prec)).trunc(prec);
    }
    None
}

fn initial_guesses(p: &IntPoly, attempt: u32) -> Vec<Complex> {
    let n = p.degree();
    let r = p.cauchy_bound().to_string().parse::<f64>().unwrap_or(1e300).min(1e300) * 0.5 + 0.1;
    (0..n)
        .map(|k| {
            let ang = std::f64::consts::TAU * k as f64 / n as f64 + 0.4 + 0.7 * attempt as f64;
            Complex::new(Dyadic::from_f64(r * ang.cos()), Dyadic::from_f64(r * ang.sin()))
        })
        .collect()
}

/// Upper bound `sep/4` as a dyadic (rounded down).
fn quarter(sep: &Rational) -> Dyadic {
    let q = sep / Rational::from_integer(BigInt::from(4));
    let (d, _) = Dyadic::from_rational(&q, 40);
    // from_rational floors, so `d <= sep/4`
    d
}

/// Isolates every complex root of a square-free polynomial and returns them
/// in canonical order: ascending real part, ties by ascending imaginary part.
pub fn isolate_roots(m: &UPoly) -> Result<RootIsolation> {
    if m.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !m.is_squarefree()? {
        return Err(Error::NotSquareFree(m.to_string()));
    }
    let p = IntPoly::from_upoly(m);
    let n = p.degree();
    if n == 0 {
        return Ok(RootIsolation { roots: Vec::new(), separation: Rational::one() });
    }
    let sep = separation_bound(m, &p)?;
    let target = quarter(&sep);

    if n == 1 {
        let root = Rational::new(-p.coeffs[0].clone(), p.coeffs[1].clone());
        let prec = (-target.msb().unwrap_or(0)).max(0) as u64 + 64;
        let b = Ball::from_rational(&root, prec);
        let b = Ball::new(Complex::real(b.center.re), b.radius);
        return Ok(RootIsolation { roots: vec![IsolatedRoot { ball: b, real: true, conjugate: None }], separation: sep });
    }

    let mut prec = START_PREC;
    let mut attempt = 0;
    loop {
        let mut approx = initial_guesses(&p, attempt);
        aberth(&p, &mut approx, prec);
        if let Some(balls) = certify(&p, &approx, &target, prec) {
            let roots = finish_isolation(&p, balls);
            return Ok(RootIsolation { roots, separation: sep });
        }
        prec *= 2;
        attempt += 1;
        if prec > MAX_PREC {
            return Err(Error::Isolation(format!("could not separate the roots of {m}")));
        }
    }
}

fn certify(p: &IntPoly, approx: &[Complex], target: &Dyadic, prec: u64) -> Option<Vec<Ball>> {
    let mut balls = Vec::with_capacity(approx.len());
    for z in approx {
        let (z, r) = polish(p, z, target, prec)?;
        balls.push(Ball::new(z, r));
    }
    for i in 0..balls.len() {
        for j in i + 1..balls.len() {
            if !balls[i].disjoint(&balls[j]) {
                return None;
            }
        }
    }
    Some(balls)
}

fn finish_isolation(p: &IntPoly, balls: Vec<Ball>) -> Vec<IsolatedRoot> {
    let n = balls.len();
    // A disc of radius < sep/4 that meets the real axis holds a real root:
    // its mirror image holds the conjugate root, and the two are closer
    // than sep.
    let mut roots: Vec<IsolatedRoot> = balls
        .into_iter()
        .map(|b| {
            let real = b.center.im.abs() <= b.radius;
            let ball = if real { Ball::new(Complex::real(b.center.re.clone()), b.radius) } else { b };
            IsolatedRoot { ball, real, conjugate: None }
        })
        .collect();
    for i in 0..n {
        if roots[i].real || roots[i].conjugate.is_some() {
            continue;
        }
        let mirror = Ball::new(roots[i].ball.center.conj(), roots[i].ball.radius.clone());
        if let Some(j) = (0..n).find(|&j| j != i && !roots[j].real && mirror.overlaps(&roots[j].ball)) {
            roots[i].conjugate = Some(j);
            roots[j].conjugate = Some(i);
        }
    }

    // Separate real-part intervals of non-conjugate roots where possible.
    let tie_target = Dyadic::pow2(-TIE_BITS);
    for i in 0..n {
        for j in i + 1..n {
            if roots[i].conjugate == Some(j) {
                continue;
            }
            let mut radius = roots[i].ball.radius.clone().max(roots[j].ball.radius.clone());
            while re_cmp(&roots[i].ball, &roots[j].ball).is_none() && radius > tie_target {
                radius = Dyadic::pow2(radius.msb().unwrap_or(0) - 8).max(tie_target.clone());
                for k in [i, j] {
                    if let Some((z, r)) = polish(p, &roots[k].ball.center, &radius, START_PREC) {
                        let z = if roots[k].real { Complex::real(z.re) } else { z };
                        roots[k].ball = Ball::new(z, r);
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| canonical_cmp(&roots, a, b));
    let mut position = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        position[old] = new;
    }
    order
        .iter()
        .map(|&old| {
            let mut r = roots[old].clone();
            r.conjugate = r.conjugate.map(|c| position[c]);
            r
        })
        .collect()
}

fn re_cmp(a: &Ball, b: &Ball) -> Option<Ordering> {
    let (alo, ahi) = (a.center.re.sub(&a.radius), a.center.re.add(&a.radius));
    let (blo, bhi) = (b.center.re.sub(&b.radius), b.center.re.add(&b.radius));
    if ahi < blo {
        Some(Ordering::Less)
    } else if bhi < alo {
        Some(Ordering::Greater)
    } else {
        None
    }
}

fn canonical_cmp(roots: &[IsolatedRoot], a: usize, b: usize) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let (ra, rb) = (&roots[a], &roots[b]);
    if ra.conjugate == Some(b) {
        return ra.ball.center.im.cmp(&rb.ball.center.im);
    }
    re_cmp(&ra.ball, &rb.ball)
        .unwrap_or_else(|| ra.ball.center.im.cmp(&rb.ball.center.im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn re(r: &IsolatedRoot) -> f64 {
        r.ball.center.re.to_f64()
    }
    fn im(r: &IsolatedRoot) -> f64 {
        r.ball.center.im.to_f64()
    }

    #[test]
    fn two_real_roots() {
        let iso = isolate_roots(&UPoly::from_ints(&[-1, 0, 1])).unwrap();
        assert_eq!(iso.roots.len(), 2);
        assert!((re(&iso.roots[0]) + 1.0).abs() < 1e-12);
        assert!((re(&iso.roots[1]) - 1.0).abs() < 1e-12);
        assert!(iso.roots.iter().all(|r| r.real));
    }

    #[test]
    fn cube_roots_of_three() {
        let iso = isolate_roots(&UPoly::from_ints(&[-3, 0, 0, 1])).unwrap();
        let r = &iso.roots;
        assert!((re(&r[0]) + 0.7211247851537042).abs() < 1e-12);
        assert!(im(&r[0]) < 0.0 && im(&r[1]) > 0.0);
        assert_eq!(r[0].conjugate, Some(1));
        assert!(r[2].real);
        assert!((re(&r[2]) - 1.4422495703074083).abs() < 1e-12);
    }

    #[test]
    fn section_of_the_cubic_at_zero() {
        // -y^3 - 2y + 1
        let iso = isolate_roots(&UPoly::from_ints(&[1, -2, 0, -1])).unwrap();
        let r = &iso.roots;
        assert!((re(&r[0]) + 0.22669).abs() < 1e-4);
        assert!(r[2].real && (re(&r[2]) - 0.45340).abs() < 1e-5);
    }

    #[test]
    fn radius_respects_separation() {
        let m = UPoly::from_ints(&[5, -1, 3, 0, 2, 1]);
        let iso = isolate_roots(&m).unwrap();
        let q = quarter(&iso.separation).to_rational();
        assert_eq!(iso.roots.len(), 5);
        for r in &iso.roots {
            assert!(r.ball.radius.to_rational() <= q);
        }
    }

    #[test]
    fn rejects_double_root() {
        assert!(matches!(isolate_roots(&UPoly::from_ints(&[0, 0, 1])), Err(Error::NotSquareFree(_))));
    }

    #[test]
    fn linear_rational_root() {
        let iso = isolate_roots(&UPoly::new(vec![ratio(-2, 3), ratio(1, 1)])).unwrap();
        assert!((re(&iso.roots[0]) - 2.0 / 3.0).abs() < 1e-15);
    }
}
