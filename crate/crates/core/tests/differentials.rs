use std::time::Instant;

use weier_core::algebraic::{TowerContext, TowerElement};
use weier_core::curve::{Curve, Point};
use weier_core::differentials::*;
use weier_core::exact::{rat, ratio, BPoly, Rational, Ring};
use weier_core::Error;

fn cubic() -> Curve {
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

fn poles(c: &Curve, x1: Rational, x2: Rational) -> (TowerContext, Point, Point) {
    let (ctx, p1) = c.section_point(&x1, 0, &TowerContext::new()).unwrap();
    let (ctx, p2) = c.section_point(&x2, 0, &ctx).unwrap();
    (ctx, p1, p2)
}

#[test]
fn cubic_naive_system_is_six_by_six() {
    let c = cubic();
    let (_, p1, p2) = poles(&c, rat(0), rat(1));
    let (sys, _) = third_kind_system_naive(&c, &p1, &p2).unwrap();
    assert_eq!((sys.equations(), sys.unknown_count()), (6, 6));
    let sym = third_kind_system_sym(&c, &p1, &p2).unwrap();
    assert_eq!((sym.equations(), sym.unknown_count()), (6, 6));
    assert_eq!(sym.matrix.rank(), 5);
}

#[test]
fn cubic_third_kind_is_certified_quickly() {
    let c = cubic();
    let start = Instant::now();
    let (_, p1, p2) = poles(&c, rat(0), rat(1));
    let d = third_kind(&c, &p1, &p2).unwrap();
    let report = verify_residues(&d, &[], DEFAULT_SERIES_ORDER).unwrap();
    assert!(start.elapsed().as_secs_f64() < 5.0, "took {:?}", start.elapsed());
    assert!(report.passed());
    assert_eq!(report.checks.len(), 6);
    assert_eq!(d.summary.nullspace_dim, 1);
    assert_eq!(d.summary.rank, 5);
    let expected: Vec<i64> = report.checks.iter().map(|c| c.expected).collect();
    assert_eq!(expected.iter().filter(|&&e| e == 1).count(), 1);
    assert_eq!(expected.iter().filter(|&&e| e == -1).count(), 1);
}

#[test]
fn residues_ignore_the_first_kind_parameter() {
    let c = cubic();
    let (_, p1, p2) = poles(&c, rat(0), rat(1));
    let d = third_kind(&c, &p1, &p2).unwrap();
    for lambda in [rat(1), ratio(-7, 3)] {
        let report = verify_residues(&d, &[TowerElement::constant(&lambda)], 3).unwrap();
        assert!(report.passed());
    }
}

#[test]
fn vandermonde_links_the_two_systems() {
    let c = cubic();
    let (_, p1, p2) = poles(&c, rat(0), rat(1));
    for check in vandermonde_equivalence(&c, &p1, &p2).unwrap() {
        assert!(check.passed(), "{check:?}");
        assert_eq!(check.entries, 3 * 7);
    }
    let c = circle();
    let (_, p1, p2) = poles(&c, rat(0), ratio(1, 2));
    for check in vandermonde_equivalence(&c, &p1, &p2).unwrap() {
        assert!(check.passed(), "{check:?}");
    }
}

#[test]
fn conic_differential_is_unique() {
    let c = circle();
    let (_, p1, p2) = poles(&c, rat(0), ratio(1, 2));
    let sym = third_kind_system_sym(&c, &p1, &p2).unwrap();
    assert_eq!((sym.equations(), sym.unknown_count()), (4, 3));
    let d = third_kind(&c, &p1, &p2).unwrap();
    assert_eq!(d.summary.rank, 3);
    assert_eq!(d.genus(), 0);
}

#[test]
fn swapping_poles_negates_residues() {
    let c = cubic();
    let (_, p1, p2) = poles(&c, rat(0), rat(1));
    let d = third_kind(&c, &p1, &p2).unwrap();
    let e = third_kind(&c, &p2, &p1).unwrap();
    let secs = pole_sections(&c, &p1, &p2).unwrap();
    for pts in &secs.points {
        for p in pts {
            let a = d.residue_at(p, &[], 2).unwrap();
            let b = e.residue_at(p, &[], 2).unwrap();
            assert!(a.try_add(&b).unwrap().is_zero());
        }
    }
}

#[test]
fn injected_fault_is_caught() {
    let c = cubic();
    let (_, p1, p2) = poles(&c, rat(0), rat(1));
    let mut d = third_kind(&c, &p1, &p2).unwrap();
    d.inject_fault();
    let report = verify_residues(&d, &[], 2).unwrap();
    assert!(!report.passed());
    assert!(report.first_failure().is_some());
}

#[test]
fn first_kind_dimension_matches_genus() {
    let c = cubic();
    let basis = first_kind_basis(&c);
    assert_eq!(basis.len(), 1);
    let quartic = Curve::new(BPoly::from_terms([((4, 0), rat(1)), ((0, 4), rat(1)), ((0, 0), rat(-1))])).unwrap();
    assert_eq!(first_kind_basis(&quartic).len(), 3);
    assert_eq!(quartic.genus(), 3);
}

#[test]
fn pole_validation_errors() {
    let c = circle();
    let (_, p1) = c.section_point(&rat(0), 0, &TowerContext::new()).unwrap();
    let p2 = Point { root_index: None, ..p1.clone() };
    assert!(matches!(third_kind(&c, &p1, &p2), Err(Error::SameAbscissa { .. })));
    let tangent = Point { x: rat(1), y: TowerElement::zero(), root_index: None };
    assert!(matches!(third_kind(&c, &p1, &tangent), Err(Error::MultipleRoots { .. })));
    let off = Point { x: ratio(1, 2), y: TowerElement::constant(&rat(3)), root_index: None };
    assert!(matches!(third_kind(&c, &p1, &off), Err(Error::PointNotOnCurve { .. })));
}

#[test]
fn cubic_fundamental_function() {
    let c = cubic();
    let (ctx, p1, p2) = poles(&c, rat(0), rat(1));
    let (ctx, a1) = c.section_point(&rat(2), 0, &ctx).unwrap();
    let (_, pp) = c.section_point(&rat(3), 0, &ctx).unwrap();
    let h = haupt_eval(&c, &p1, &p2, &pp, std::slice::from_ref(&a1)).unwrap();
    assert!(h.residuals_zero);
    assert!(h.differential.eval_u(&a1, &h.params).unwrap().is_zero());
    let d50 = h.value.approximate(50);
    let d100 = h.value.approximate(100);
    assert!(d100.re.starts_with(&d50.re[..d50.re.len() - 1]));
}

#[test]
fn haupt_needs_genus_many_points() {
    let c = cubic();
    let (ctx, p1, p2) = poles(&c, rat(0), rat(1));
    let (_, pp) = c.section_point(&rat(3), 0, &ctx).unwrap();
    assert!(matches!(haupt_eval(&c, &p1, &p2, &pp, &[]), Err(Error::WrongPoleCount { expected: 1, got: 0 })));
}

#[test]
fn circle_pullback_has_two_simple_poles() {
    let c = circle();
    let (_, p1, p2) = poles(&c, rat(0), ratio(1, 2));
    let d = third_kind(&c, &p1, &p2).unwrap();
    let check = genus0_pullback(&d, &[]).unwrap();
    assert!(check.identity_holds);
    assert!(check.residues_ok);
    assert_eq!(check.finite_poles(), Some(2));
}

#[test]
fn circle_fundamental_function_matches_closed_form() {
    let c = circle();
    let (ctx, p1, p2) = poles(&c, rat(0), ratio(1, 2));
    let pp = c.point(ratio(3, 5), TowerElement::constant(&ratio(4, 5))).unwrap();
    let h = haupt_eval(&c, &p1, &p2, &pp, &[]).unwrap();
    let closed = genus0_haupt(&h.differential, &pp).unwrap();
    assert!(h.value.try_sub(&closed).unwrap().is_zero());
    let _ = ctx;
}
