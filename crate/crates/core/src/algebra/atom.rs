use num::{Signed, Zero};

use crate::coeff::Rational;

use super::AlgebraError;

/// An opaque scalar function `f(|w|)` of the Euclidean norm of a vector
/// `w = Σ_j c_j z_j + shift·a`.
///
/// `shift` only becomes nonzero when a translation acts on an argument whose
/// coefficients do not sum to zero. Atoms are norm functions, so they are
/// rotation invariant by construction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PotentialAtom {
    pub name: String,
    /// Sparse `(particle, c_j)` pairs, sorted by particle, no zero entries.
    pub coeffs: Vec<(usize, Rational)>,
    pub shift: Rational,
}

impl PotentialAtom {
    pub fn new(name: impl Into<String>, coeffs: Vec<(usize, Rational)>) -> Result<Self, AlgebraError> {
        Self::with_shift(name, coeffs, Rational::zero())
    }

    pub fn with_shift(
        name: impl Into<String>,
        coeffs: Vec<(usize, Rational)>,
        shift: Rational,
    ) -> Result<Self, AlgebraError> {
        let name = name.into();
        let mut merged: std::collections::BTreeMap<usize, Rational> = Default::default();
        for (j, c) in coeffs {
            *merged.entry(j).or_insert_with(Rational::zero) += c;
        }
        let mut coeffs: Vec<(usize, Rational)> = merged.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if coeffs.is_empty() {
            return Err(AlgebraError::DegenerateAtom(name));
        }
        let mut shift = shift;
        if coeffs[0].1.is_negative() {
            for (_, c) in coeffs.iter_mut() {
                *c = -c.clone();
            }
            shift = -shift;
        }
        Ok(PotentialAtom { name, coeffs, shift })
    }

    pub fn depends_on(&self, particle: usize) -> bool {
        self.coeffs.iter().any(|(j, _)| *j == particle)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().map(|(j, _)| *j)
    }

    pub fn coefficient_sum(&self) -> Rational {
        self.coeffs.iter().fold(Rational::zero(), |acc, (_, c)| acc + c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, rat_int};

    #[test]
    fn sign_is_canonicalised() {
        let a = PotentialAtom::new("V", vec![(1, rat_int(-1)), (2, rat_int(1))]).unwrap();
        let b = PotentialAtom::new("V", vec![(2, rat_int(-1)), (1, rat_int(1))]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.coeffs[0], (1, rat_int(1)));
    }

    #[test]
    fn positive_scaling_is_a_different_atom() {
        let a = PotentialAtom::new("V", vec![(1, rat_int(1)), (2, rat_int(-1))]).unwrap();
        let b = PotentialAtom::new("V", vec![(1, rat(1, 2)), (2, rat(-1, 2))]).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn zero_argument_is_rejected() {
        let err = PotentialAtom::new("V", vec![(1, rat_int(1)), (1, rat_int(-1))]).unwrap_err();
        assert!(matches!(err, AlgebraError::DegenerateAtom(_)));
    }
}
