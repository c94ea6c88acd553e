//! Exact arithmetic in towers of algebraic extensions of Q, with certified
//! numerical enclosures of the chosen complex embedding.

mod dyadic;
mod roots;
mod tower;

pub use dyadic::{Ball, Complex, Dyadic};
pub use roots::{isolate_roots, IsolatedRoot, RootIsolation};
pub use tower::{
    decimal_string, ComplexDecimal, ExactForm, ExtensionDescriptor, GeneratorForm, TermForm, TowerContext,
    TowerElement,
};
