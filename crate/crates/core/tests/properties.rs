use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

use weier_core::algebraic::{isolate_roots, TowerContext, TowerElement};
use weier_core::exact::{det_bareiss, ff_solve, parse_rational, rat, vandermonde, Matrix, RatMatrix, Rational, Ring, UPoly};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn small_poly(max_degree: usize) -> impl Strategy<Value = UPoly> {
    (1..=max_degree)
        .prop_flat_map(|d| (prop::collection::vec(-9i64..=9, d), prop::sample::select(vec![-3i64, -1, 1, 2])))
        .prop_map(|(mut c, lead)| {
            c.push(lead);
            UPoly::from_ints(&c)
        })
}

/// Power sums from certified root enclosures, summed as rationals.
fn numeric_power_sums(p: &UPoly, count: usize, bits: i64) -> Vec<Rational> {
    let n = p.degree().unwrap();
    let (_, roots) = TowerContext::new().adjoin_roots(p, &(0..n).collect::<Vec<_>>()).unwrap();
    (0..count)
        .map(|k| {
            roots
                .iter()
                .map(|r| r.pow(k as u32).enclose(bits).center.re.to_rational())
                .fold(rat(0), |a, b| a + b)
        })
        .collect()
}

/// Q(sqrt 2, cbrt 3) with generators t1, t2.
fn field() -> (TowerElement, TowerElement) {
    let (ctx, a) = TowerContext::new().adjoin(&UPoly::from_ints(&[-2, 0, 1]), 1).unwrap();
    let (_, b) = ctx.adjoin(&UPoly::from_ints(&[-3, 0, 0, 1]), 2).unwrap();
    (a, b)
}

fn element((a, b): &(TowerElement, TowerElement), c: &[Rational]) -> TowerElement {
    let mut acc = TowerElement::zero();
    for (i, q) in c.iter().enumerate() {
        let term = a.pow((i % 2) as u32).mul(&b.pow((i / 2) as u32)).scale(q);
        acc = acc.add(&term);
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rational_display_round_trips(q in small_rational()) {
        prop_assert_eq!(parse_rational(&q.to_string()), Some(q));
    }

    #[test]
    fn tower_ring_axioms(
        a in prop::collection::vec(small_rational(), 6),
        b in prop::collection::vec(small_rational(), 6),
        c in prop::collection::vec(small_rational(), 6),
    ) {
        let f = field();
        let (a, b, c) = (element(&f, &a), element(&f, &b), element(&f, &c));
        let lhs = a.add(&b).mul(&c);
        let rhs = a.mul(&c).add(&b.mul(&c));
        prop_assert!(lhs.sub(&rhs).is_structurally_zero());
        prop_assert!(a.mul(&b).sub(&b.mul(&a)).is_structurally_zero());
    }

    #[test]
    fn inverse_times_element_is_one(a in prop::collection::vec(small_rational(), 6)) {
        let a = element(&field(), &a);
        prop_assume!(!a.is_zero());
        let inv = a.invert().unwrap();
        prop_assert_eq!(a.mul(&inv).as_rational(), Some(rat(1)));
    }

    #[test]
    fn doubling_digits_refines(a in prop::collection::vec(small_rational(), 6)) {
        let a = element(&field(), &a);
        let d = a.approximate(20);
        let e = a.approximate(40);
        let (x, y): (f64, f64) = (d.re.parse().unwrap(), e.re.parse().unwrap());
        prop_assert!((x - y).abs() <= 1e-19 * x.abs().max(1.0));
    }

    #[test]
    fn power_sums_match_numeric(p in small_poly(5)) {
        prop_assume!(p.is_squarefree().unwrap());
        let exact = p.power_sums(6).unwrap();
        let numeric = numeric_power_sums(&p, 6, 140);
        let tol = Rational::new(BigInt::from(1), BigInt::from(10).pow(30));
        for (e, n) in exact.iter().zip(&numeric) {
            prop_assert!((e - n).abs() < tol, "{} vs {}", e, n);
        }
    }

    #[test]
    fn isolation_finds_every_root(p in small_poly(6)) {
        prop_assume!(p.is_squarefree().unwrap());
        prop_assert_eq!(isolate_roots(&p).unwrap().roots.len(), p.degree().unwrap());
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(
        a in small_rational(),
        f in small_poly(3),
        g in small_poly(3),
    ) {
        let lin = UPoly::linear_root(&a);
        let (p, q) = (lin.mul(&f), lin.mul(&g));
        prop_assert_eq!(p.resultant(&q).unwrap(), rat(0));
        let coprime = f.gcd(&g).degree() == Some(0);
        prop_assert_eq!(f.resultant(&g).unwrap() != rat(0), coprime);
    }

    #[test]
    fn solve_reproduces_the_right_hand_side(
        rows in prop::collection::vec(prop::collection::vec(small_rational(), 4), 3),
        x in prop::collection::vec(small_rational(), 4),
    ) {
        let a = RatMatrix::from_rows(rows);
        let b = a.mul(&Matrix::column(x));
        let sol = ff_solve(&a, &b).unwrap();
        prop_assert_eq!(a.mul(&sol.particular), b);
        prop_assert_eq!(sol.rank + sol.nullspace.len(), 4);
        for v in &sol.nullspace {
            prop_assert!(a.mul(&Matrix::column(v.clone())).is_zero());
        }
    }

    #[test]
    fn vandermonde_determinant(xs in prop::collection::vec(small_rational(), 1..5)) {
        let mut expected = rat(1);
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                expected *= &xs[j] - &xs[i];
            }
        }
        prop_assert_eq!(det_bareiss(&vandermonde(&xs)).abs(), expected.abs());
    }
}

#[test]
fn newton_identity_fixtures() {
    let p = UPoly::from_ints(&[-1, 2, 0, 1]);
    assert_eq!(p.power_sums(4).unwrap(), vec![rat(3), rat(0), rat(-4), rat(3)]);
    let q = UPoly::from_ints(&[-3, 0, 0, 1]);
    assert_eq!(q.power_sums(4).unwrap(), vec![rat(3), rat(0), rat(0), rat(9)]);
}

#[test]
fn dyadic_roots_refine_to_high_precision() {
    // (y + 1)(8 - 3y): the root -1 is hit exactly by Newton polishing.
    let p = UPoly::from_ints(&[8, 5, -3]);
    let (_, roots) = TowerContext::new().adjoin_roots(&p, &[0, 1]).unwrap();
    assert_eq!(roots[0].enclose(300).center.re.to_rational(), rat(-1));
    let err = (roots[1].enclose(300).center.re.to_rational() - Rational::new(8.into(), 3.into())).abs();
    assert!(err < Rational::new(1.into(), BigInt::from(2).pow(290)));
}
