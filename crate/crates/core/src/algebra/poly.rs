use std::collections::BTreeMap;

use crate::coeff::{Coeff, Rational};

use super::atom::PotentialAtom;
use super::index::{CanonicalIndex, FormalSymbol, Kind, Space};
use super::monomial::Monomial;
use super::AlgebraError;

/// A finite sum of normal-ordered monomials with exact Gaussian-rational
/// coefficients (ħ = 1).
///
/// The term map never stores a zero coefficient, so two equal operators have
/// identical maps and `==` is operator equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperatorPoly {
    space: Space,
    terms: BTreeMap<Monomial, Coeff>,
}

impl OperatorPoly {
    pub fn zero(space: Space) -> Self {
        OperatorPoly { space, terms: BTreeMap::new() }
    }

    pub fn constant(space: Space, c: Coeff) -> Self {
        Self::from_monomial(space, Monomial::one(), c)
    }

    pub fn one(space: Space) -> Self {
        Self::constant(space, Coeff::one())
    }

    pub fn from_monomial(space: Space, m: Monomial, c: Coeff) -> Self {
        let mut p = OperatorPoly::zero(space);
        p.accumulate(m, c);
        p
    }

    pub fn index(space: Space, idx: CanonicalIndex) -> Result<Self, AlgebraError> {
        if !space.contains(&idx) {
            return Err(AlgebraError::IndexOutOfRange { index: idx, space });
        }
        Ok(Self::from_monomial(space, Monomial::from_index(idx), Coeff::one()))
    }

    pub fn z(space: Space, particle: usize, axis: usize) -> Result<Self, AlgebraError> {
        Self::index(space, CanonicalIndex::z(particle, axis))
    }

    pub fn p(space: Space, particle: usize, axis: usize) -> Result<Self, AlgebraError> {
        Self::index(space, CanonicalIndex::p(particle, axis))
    }

    pub fn symbol(space: Space, sym: FormalSymbol) -> Self {
        Self::from_monomial(space, Monomial::from_symbol(sym), Coeff::one())
    }

    pub fn atom(space: Space, atom: PotentialAtom) -> Result<Self, AlgebraError> {
        if let Some(j) = atom.support().find(|j| !(1..=space.particles).contains(j)) {
            return Err(AlgebraError::IndexOutOfRange { index: CanonicalIndex::z(j, 1), space });
        }
        Ok(Self::from_monomial(space, Monomial::from_atom(atom), Coeff::one()))
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff the operator is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Coeff> {
        self.terms.get(m)
    }

    /// Constant term (coefficient of the identity).
    pub fn constant_term(&self) -> Coeff {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Coeff::zero)
    }

    pub(crate) fn accumulate(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_space(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.space != other.space {
            return Err(AlgebraError::AmbientMismatch { left: self.space, right: other.space });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_space(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&Coeff::int(-1))
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = OperatorPoly::zero(self.space);
        for (m, k) in &self.terms {
            out.accumulate(m.clone(), k * c);
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&Coeff::real(r.clone()))
    }

    /// Operator product in normal order.
    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_space(other)?;
        let mut out = OperatorPoly::zero(self.space);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                for (m, k) in ma.product(mb)? {
                    out.accumulate(m, &k * &c);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self, AlgebraError> {
        let mut out = OperatorPoly::one(self.space);
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// `[A, B] = AB − BA`
    pub fn commutator(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Particles whose `kind` operators appear in some term; atoms count as
    /// position dependence on their support.
    pub fn support(&self, kind: Kind) -> std::collections::BTreeSet<usize> {
        let mut out = std::collections::BTreeSet::new();
        for m in self.terms.keys() {
            for (i, _) in &m.factors {
                if i.kind == kind {
                    out.insert(i.particle);
                }
            }
            if kind == Kind::Position {
                for a in &m.atoms {
                    out.extend(a.support());
                }
            }
        }
        out
    }

    pub fn has_atoms(&self) -> bool {
        self.terms.keys().any(|m| !m.atoms.is_empty())
    }

    pub fn has_symbols(&self) -> bool {
        self.terms.keys().any(|m| m.has_symbols())
    }

    /// Coefficient operator of a single formal symbol at first order:
    /// the sum of all terms carrying exactly `sym^1` and no other symbol,
    /// with the symbol stripped.
    pub fn symbol_component(&self, sym: FormalSymbol) -> Self {
        let mut out = OperatorPoly::zero(self.space);
        for (m, c) in &self.terms {
            if m.symbols.len() == 1 && m.symbols[0] == (sym, 1) {
                let mut stripped = m.clone();
                stripped.symbols.clear();
                out.accumulate(stripped, c.clone());
            }
        }
        out
    }

    /// Reinterpret the same terms in another space with at least as many
    /// particles and the same dimension.
    pub fn embed(&self, space: Space) -> Result<Self, AlgebraError> {
        if space.dim != self.space.dim || space.particles < self.space.particles {
            return Err(AlgebraError::AmbientMismatch { left: self.space, right: space });
        }
        Ok(OperatorPoly { space, terms: self.terms.clone() })
    }
}

/// Euclidean dot product of two component vectors, `Σ_α a_α · b_α`.
pub fn dot(a: &[OperatorPoly], b: &[OperatorPoly]) -> Result<OperatorPoly, AlgebraError> {
    let space = a.first().or(b.first()).map(|p| p.space()).ok_or(AlgebraError::EmptyVector)?;
    let mut out = OperatorPoly::zero(space);
    for (x, y) in a.iter().zip(b) {
        out = out.add(&x.mul(y)?)?;
    }
    Ok(out)
}

/// Cross product of two three-component vectors, preserving operand order.
pub fn cross(a: &[OperatorPoly], b: &[OperatorPoly]) -> Result<Vec<OperatorPoly>, AlgebraError> {
    if a.len() != 3 || b.len() != 3 {
        return Err(AlgebraError::CrossNeedsThreeDimensions(a.len()));
    }
    let comp = |i: usize, j: usize| -> Result<OperatorPoly, AlgebraError> { a[i].mul(&b[j])?.sub(&a[j].mul(&b[i])?) };
    Ok(vec![comp(1, 2)?, comp(2, 0)?, comp(0, 1)?])
}

/// The vector `z[particle]` (or `p[particle]`) as its component list.
pub fn vector(space: Space, kind: Kind, particle: usize) -> Result<Vec<OperatorPoly>, AlgebraError> {
    (1..=space.dim)
        .map(|axis| OperatorPoly::index(space, CanonicalIndex { kind, particle, axis }))
        .collect()
}

/// Σ_j c_j z[j] (or p[j]) as a component list.
pub fn combination(
    space: Space,
    kind: Kind,
    coeffs: &[(usize, Rational)],
) -> Result<Vec<OperatorPoly>, AlgebraError> {
    let mut out = vec![OperatorPoly::zero(space); space.dim];
    for (j, c) in coeffs {
        for (axis, slot) in out.iter_mut().enumerate() {
            let comp = OperatorPoly::index(space, CanonicalIndex { kind, particle: *j, axis: axis + 1 })?;
            *slot = slot.add(&comp.scale_rational(c))?;
        }
    }
    Ok(out)
}
