//! Differentials of the first and third kind and the fundamental function.

mod first_kind;
mod genus0;
mod haupt;
mod system;
mod third_kind;

pub use first_kind::{first_kind_basis, FirstKindBasis};
pub use genus0::{find_rational_point, genus0_haupt, genus0_pullback, Genus0Check, RationalPoint};
pub use haupt::{haupt_eval, haupt_eval_with_order, HauptResult};
pub use system::{
    check_poles, monomials_up_to, pole_sections, third_kind_system_naive, third_kind_system_sym, unknown_monomials,
    vandermonde_equivalence, LinearSystem, PoleSections, RowSource, VandermondeCheck,
};
pub use third_kind::{
    construct_third_kind, pole_factor, third_kind, third_kind_with_order, verify_residues, ParametricDifferential,
    ResidueCheck, ResidueReport, SolveSummary, DEFAULT_SERIES_ORDER,
};

use crate::algebraic::{TowerContext, TowerElement};
use crate::curve::{substitute, LocalSeries, Series};
use crate::error::Result;
use crate::exact::{BPoly, Rational, Ring};

fn common_context<'a>(elems: impl IntoIterator<Item = &'a TowerElement>) -> Result<TowerContext> {
    elems.into_iter().try_fold(TowerContext::new(), |acc, e| acc.join(e.context()))
}

/// Evaluates a polynomial with tower coefficients at `(x, y)`, reporting
/// incompatible contexts instead of panicking.
pub(crate) fn eval_tower_bpoly(p: &BPoly<TowerElement>, x: &Rational, y: &TowerElement) -> Result<TowerElement> {
    common_context(p.terms().map(|(_, c)| c).chain([y]))?;
    Ok(p.eval(&TowerElement::constant(x), y))
}

/// `p(x0 + t, y(t))` truncated to `len` terms along a local series.
pub(crate) fn series_at(p: &BPoly<TowerElement>, s: &LocalSeries, len: usize) -> Result<Series> {
    common_context(p.terms().map(|(_, c)| c).chain([&s.point.y]))?;
    let shifted = p.shift(&TowerElement::constant(&s.point.x), &s.point.y);
    let mut y = vec![TowerElement::zero()];
    y.extend(s.coeffs.iter().cloned());
    Ok(substitute(&shifted, &y, len))
}
