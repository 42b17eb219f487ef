//! Exact algebra of normal-ordered polynomials in canonical position and
//! momentum operators, extended by opaque norm-function potential atoms.

mod atom;
mod index;
mod monomial;
mod poly;
mod print;
mod subst;

use thiserror::Error;

pub use atom::PotentialAtom;
pub use index::{axis_from_name, axis_name, CanonicalIndex, FormalSymbol, Kind, Space, SymbolFamily};
pub use monomial::Monomial;
pub use poly::{combination, cross, dot, vector, OperatorPoly};
pub use print::Naming;
pub use subst::SubstitutionMap;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("operands live in different spaces ({left:?} vs {right:?})")]
    AmbientMismatch { left: Space, right: Space },
    #[error("momentum {momentum} would have to cross potential atom `{atom}` depending on the same particle")]
    NonPolynomialCommutator { momentum: CanonicalIndex, atom: String },
    #[error("substitution image for {0:?} mixes positions and momenta or contains atoms")]
    KindMixing(CanonicalIndex),
    #[error("index {index:?} outside {space:?}")]
    IndexOutOfRange { index: CanonicalIndex, space: Space },
    #[error("potential atom `{0}` has a vanishing argument")]
    DegenerateAtom(String),
    #[error("substitution cannot be expressed on the argument of potential atom `{0}`")]
    UnrepresentableAtomImage(String),
    #[error("cross product needs three components, got {0}")]
    CrossNeedsThreeDimensions(usize),
    #[error("empty vector")]
    EmptyVector,
}
