use crate::curve::Curve;
use crate::exact::{BPoly, Rational, Ring};

use super::system::monomials_up_to;

/// Numerators `x^i y^j` (`i + j <= r - 3`) of the first-kind differentials
/// `x^i y^j dx / f_y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstKindBasis {
    pub monomials: Vec<(u32, u32)>,
}

impl FirstKindBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn numerators(&self) -> Vec<BPoly<Rational>> {
        self.monomials.iter().map(|&(i, j)| BPoly::monomial(i, j, Rational::one())).collect()
    }
}

pub fn first_kind_basis(curve: &Curve) -> FirstKindBasis {
    FirstKindBasis { monomials: monomials_up_to(curve.degree() as i64 - 3) }
}
