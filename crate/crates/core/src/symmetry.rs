//! Galilei-group actions as substitution maps and the invariance classifier
//! for physically meaningful observables.

use std::collections::BTreeMap;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    AlgebraError, CanonicalIndex, FormalSymbol, Kind, OperatorPoly, Space, SubstitutionMap,
};
use crate::coeff::{format_rational, parse_rational, rat_int, Coeff, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymmetryError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("rotations need spatial dimension 2 or 3, got {0}")]
    NoRotations(usize),
    #[error("angular momentum needs spatial dimension 3, got {0}")]
    AngularMomentumDimension(usize),
    #[error("rotation check disagrees: substitution says {substitution}, commutators say {commutator}")]
    InconsistentRotationCheck { substitution: bool, commutator: bool },
    #[error("no generator family selected")]
    EmptySelection,
    #[error("invalid particle system: {0}")]
    InvalidSystem(String),
}

/// Particle count, spatial dimension and exact masses.
#[derive(Clone, Debug, PartialEq)]
pub struct ParticleSystem {
    dim: usize,
    masses: Vec<Rational>,
}

impl ParticleSystem {
    pub fn new(dim: usize, masses: Vec<Rational>) -> Result<Self, SymmetryError> {
        if !(1..=3).contains(&dim) {
            return Err(SymmetryError::InvalidSystem(format!("dimension {dim} not in 1..=3")));
        }
        if masses.is_empty() {
            return Err(SymmetryError::InvalidSystem("at least one particle is required".into()));
        }
        if let Some(m) = masses.iter().find(|m| !m.is_positive()) {
            return Err(SymmetryError::InvalidSystem(format!("mass {} is not positive", format_rational(m))));
        }
        Ok(ParticleSystem { dim, masses })
    }

    pub fn particles(&self) -> usize {
        self.masses.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    pub fn mass(&self, particle: usize) -> &Rational {
        &self.masses[particle - 1]
    }

    pub fn total_mass(&self) -> Rational {
        self.masses.iter().fold(Rational::zero(), |a, m| a + m)
    }

    pub fn space(&self) -> Space {
        Space::new(self.particles(), self.dim)
    }

    /// Generator weights in the original particle coordinates.
    pub fn weights(&self) -> ActionWeights {
        ActionWeights {
            space: self.space(),
            translation: vec![rat_int(1); self.particles()],
            boost: self.masses.clone(),
        }
    }
}

/// JSON form of a [`ParticleSystem`]: `{"dim": 3, "masses": ["1", "3/2"]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub dim: usize,
    pub masses: Vec<String>,
}

impl SystemDoc {
    pub fn into_system(self) -> Result<ParticleSystem, SymmetryError> {
        let masses = self
            .masses
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| SymmetryError::InvalidSystem(format!("bad rational `{s}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(n) = self.n {
            if n != masses.len() {
                return Err(SymmetryError::InvalidSystem(format!("n = {n} but {} masses given", masses.len())));
            }
        }
        ParticleSystem::new(self.dim, masses)
    }
}

/// How translations and boosts act on a set of vector indices:
/// `z_i → z_i + translation_i·a`, `p_i → p_i + boost_i·v`.
///
/// In particle coordinates the weights are `1` and `m_i`; in a transformed
/// frame they are the row sums of `T` and `S·m`.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionWeights {
    pub space: Space,
    pub translation: Vec<Rational>,
    pub boost: Vec<Rational>,
}

pub fn translation_action(w: &ActionWeights) -> Result<SubstitutionMap, SymmetryError> {
    scaled_translation_action(w, &rat_int(1))
}

/// Translation by `scale·a`.
pub fn scaled_translation_action(w: &ActionWeights, scale: &Rational) -> Result<SubstitutionMap, SymmetryError> {
    let space = w.space;
    let mut map = SubstitutionMap::new(space);
    for j in 1..=space.particles {
        let weight = &w.translation[j - 1] * scale;
        if weight.is_zero() {
            continue;
        }
        for axis in 1..=space.dim {
            let shift = OperatorPoly::symbol(space, FormalSymbol::translation(axis)).scale_rational(&weight);
            map.insert(CanonicalIndex::z(j, axis), OperatorPoly::z(space, j, axis)?.add(&shift)?)?;
        }
    }
    Ok(map)
}

/// Instantaneous Galilean boost, `p_j → p_j + m_j·v`, positions unchanged.
pub fn boost_action(w: &ActionWeights) -> Result<SubstitutionMap, SymmetryError> {
    let space = w.space;
    let mut map = SubstitutionMap::new(space);
    for j in 1..=space.particles {
        let weight = &w.boost[j - 1];
        if weight.is_zero() {
            continue;
        }
        for axis in 1..=space.dim {
            let shift = OperatorPoly::symbol(space, FormalSymbol::boost(axis)).scale_rational(weight);
            map.insert(CanonicalIndex::p(j, axis), OperatorPoly::p(space, j, axis)?.add(&shift)?)?;
        }
    }
    Ok(map)
}

/// `w → w + θ×w` for every position and momentum vector, first order in θ.
/// In two dimensions only `θ_z` exists.
pub fn rotation_action(space: Space) -> Result<SubstitutionMap, SymmetryError> {
    if space.dim < 2 {
        return Err(SymmetryError::NoRotations(space.dim));
    }
    let mut map = SubstitutionMap::new(space);
    for kind in [Kind::Position, Kind::Momentum] {
        for j in 1..=space.particles {
            let comp = |axis: usize| OperatorPoly::index(space, CanonicalIndex { kind, particle: j, axis });
            let theta = |axis: usize| OperatorPoly::symbol(space, FormalSymbol::rotation(axis));
            let images = if space.dim == 3 {
                // (θ×w)_x = θ_y w_z − θ_z w_y, cyclic
                let (x, y, z) = (comp(1)?, comp(2)?, comp(3)?);
                vec![
                    x.add(&theta(2).mul(&z)?)?.sub(&theta(3).mul(&y)?)?,
                    y.add(&theta(3).mul(&x)?)?.sub(&theta(1).mul(&z)?)?,
                    z.add(&theta(1).mul(&y)?)?.sub(&theta(2).mul(&x)?)?,
                ]
            } else {
                let (x, y) = (comp(1)?, comp(2)?);
                vec![x.sub(&theta(3).mul(&y)?)?, y.add(&theta(3).mul(&x)?)?]
            };
            for (axis, img) in images.into_iter().enumerate() {
                map.insert(CanonicalIndex { kind, particle: j, axis: axis + 1 }, img)?;
            }
        }
    }
    Ok(map)
}

/// `L_β = Σ_j (z_j × p_j)_β`, three components.
pub fn angular_momentum(space: Space) -> Result<Vec<OperatorPoly>, SymmetryError> {
    if space.dim != 3 {
        return Err(SymmetryError::AngularMomentumDimension(space.dim));
    }
    let mut out = vec![OperatorPoly::zero(space); 3];
    for j in 1..=space.particles {
        let z = crate::algebra::vector(space, Kind::Position, j)?;
        let p = crate::algebra::vector(space, Kind::Momentum, j)?;
        let l = crate::algebra::cross(&z, &p)?;
        for (acc, c) in out.iter_mut().zip(l) {
            *acc = acc.add(&c)?;
        }
    }
    Ok(out)
}

/// Invariance test: `residual = substitute(O, action) − O`.
pub fn is_invariant(o: &OperatorPoly, action: &SubstitutionMap) -> Result<(bool, OperatorPoly), SymmetryError> {
    let residual = o.substitute(action)?.sub(o)?;
    Ok((residual.is_zero(), residual))
}

/// Which continuous generator families an observable must be invariant under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetrySelection {
    pub translations: bool,
    pub rotations: bool,
    pub boosts: bool,
}

impl SymmetrySelection {
    pub fn all() -> Self {
        SymmetrySelection { translations: true, rotations: true, boosts: true }
    }

    /// Everything the dimension supports: rotations only when `dim ≥ 2`.
    pub fn for_dim(dim: usize) -> Self {
        SymmetrySelection { translations: true, rotations: dim >= 2, boosts: true }
    }

    pub fn validate(&self, dim: usize) -> Result<(), SymmetryError> {
        if !(self.translations || self.rotations || self.boosts) {
            return Err(SymmetryError::EmptySelection);
        }
        if self.rotations && dim < 2 {
            return Err(SymmetryError::NoRotations(dim));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Translation,
    Rotation,
    Boost,
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::Translation => "translation",
            Generator::Rotation => "rotation",
            Generator::Boost => "boost",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorVerdict {
    pub invariant: bool,
    /// `substitute(O) − O`; zero exactly when invariant.
    pub residual: OperatorPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalityVerdict {
    pub per_generator: BTreeMap<Generator, GeneratorVerdict>,
    pub is_physical: bool,
}

impl PhysicalityVerdict {
    pub fn get(&self, g: Generator) -> Option<&GeneratorVerdict> {
        self.per_generator.get(&g)
    }
}

/// Membership test for the physically meaningful observables: invariance
/// under every selected generator family, each tested independently.
///
/// For atom-free operators in three dimensions the rotation verdict is
/// cross-checked against commutators with the angular momentum.
pub fn classify(
    o: &OperatorPoly,
    sel: SymmetrySelection,
    weights: &ActionWeights,
) -> Result<PhysicalityVerdict, SymmetryError> {
    let space = o.space();
    if weights.space != space {
        return Err(AlgebraError::AmbientMismatch { left: space, right: weights.space }.into());
    }
    sel.validate(space.dim)?;
    let mut per_generator = BTreeMap::new();
    if sel.translations {
        let (invariant, residual) = is_invariant(o, &translation_action(weights)?)?;
        per_generator.insert(Generator::Translation, GeneratorVerdict { invariant, residual });
    }
    if sel.rotations {
        let (invariant, residual) = is_invariant(o, &rotation_action(space)?)?;
        if space.dim == 3 && !o.has_atoms() && !o.has_symbols() {
            let mut commutes = true;
            for l in angular_momentum(space)? {
                if !l.commutator(o)?.is_zero() {
                    commutes = false;
                }
            }
            if commutes != invariant {
                return Err(SymmetryError::InconsistentRotationCheck { substitution: invariant, commutator: commutes });
            }
        }
        per_generator.insert(Generator::Rotation, GeneratorVerdict { invariant, residual });
    }
    if sel.boosts {
        let (invariant, residual) = is_invariant(o, &boost_action(weights)?)?;
        per_generator.insert(Generator::Boost, GeneratorVerdict { invariant, residual });
    }
    let is_physical = per_generator.values().all(|v| v.invariant);
    Ok(PhysicalityVerdict { per_generator, is_physical })
}

/// The first-order rotation residual as `i·Σ_β θ_β [L_β, O]`.
pub fn rotation_residual_from_commutators(o: &OperatorPoly) -> Result<OperatorPoly, SymmetryError> {
    let space = o.space();
    let mut out = OperatorPoly::zero(space);
    for (beta, l) in angular_momentum(space)?.into_iter().enumerate() {
        let theta = OperatorPoly::symbol(space, FormalSymbol::rotation(beta + 1));
        out = out.add(&theta.mul(&l.commutator(o)?)?.scale(&Coeff::i()))?;
    }
    Ok(out)
}
