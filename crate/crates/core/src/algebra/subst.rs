use std::collections::BTreeMap;

use num::Zero;

use crate::coeff::{Coeff, Rational};

use super::atom::PotentialAtom;
use super::index::{CanonicalIndex, Kind, Space, SymbolFamily};
use super::monomial::Monomial;
use super::poly::OperatorPoly;
use super::AlgebraError;

/// Kind-preserving rewrite of canonical indices.
///
/// Every position image may contain positions, formal symbols and constants
/// but no momenta (and vice versa), so substituting term-wise keeps normal
/// order. Indices without an entry map to themselves.
#[derive(Clone, Debug, PartialEq)]
pub struct SubstitutionMap {
    space: Space,
    target: Space,
    images: BTreeMap<CanonicalIndex, OperatorPoly>,
}

impl SubstitutionMap {
    pub fn new(space: Space) -> Self {
        SubstitutionMap { space, target: space, images: BTreeMap::new() }
    }

    /// A map from operators on `space` to operators on `target`
    /// (e.g. original particles to transformed frame indices).
    pub fn between(space: Space, target: Space) -> Self {
        SubstitutionMap { space, target, images: BTreeMap::new() }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn target(&self) -> Space {
        self.target
    }

    pub fn insert(&mut self, idx: CanonicalIndex, image: OperatorPoly) -> Result<(), AlgebraError> {
        if !self.space.contains(&idx) {
            return Err(AlgebraError::IndexOutOfRange { index: idx, space: self.space });
        }
        if image.space() != self.target {
            return Err(AlgebraError::AmbientMismatch { left: self.target, right: image.space() });
        }
        for (m, _) in image.terms() {
            if !m.atoms.is_empty() {
                return Err(AlgebraError::KindMixing(idx));
            }
            if m.factors.iter().any(|(i, _)| i.kind != idx.kind) {
                return Err(AlgebraError::KindMixing(idx));
            }
        }
        self.images.insert(idx, image);
        Ok(())
    }

    pub fn image(&self, idx: &CanonicalIndex) -> Result<OperatorPoly, AlgebraError> {
        match self.images.get(idx) {
            Some(img) => Ok(img.clone()),
            None => OperatorPoly::index(self.target, *idx),
        }
    }

    pub fn images(&self) -> impl Iterator<Item = (&CanonicalIndex, &OperatorPoly)> {
        self.images.iter()
    }
}

impl OperatorPoly {
    /// Term-wise rewrite through `map`, collected back into canonical form.
    ///
    /// Atom arguments are rewritten through the position images: linear parts
    /// must act identically on every axis, translation symbols accumulate into
    /// the atom shift, and first-order rotation terms are dropped because a
    /// norm is rotation invariant at that order.
    pub fn substitute(&self, map: &SubstitutionMap) -> Result<OperatorPoly, AlgebraError> {
        if self.space() != map.space {
            return Err(AlgebraError::AmbientMismatch { left: self.space(), right: map.space });
        }
        let target = map.target;
        let mut out = OperatorPoly::zero(target);
        let mut cache: BTreeMap<(CanonicalIndex, u32), OperatorPoly> = BTreeMap::new();
        let mut power = |idx: CanonicalIndex, e: u32| -> Result<OperatorPoly, AlgebraError> {
            if let Some(p) = cache.get(&(idx, e)) {
                return Ok(p.clone());
            }
            let p = map.image(&idx)?.pow(e)?;
            cache.insert((idx, e), p.clone());
            Ok(p)
        };
        for (m, c) in self.terms() {
            let head = Monomial { symbols: m.symbols.clone(), ..Default::default() };
            let mut left = OperatorPoly::from_monomial(target, head, c.clone());
            for (idx, e) in m.positions() {
                left = left.mul(&power(*idx, *e)?)?;
            }
            if !m.atoms.is_empty() {
                let atoms = m
                    .atoms
                    .iter()
                    .map(|a| rewrite_atom(a, map))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut atoms_mono = Monomial::one();
                atoms_mono.atoms = atoms;
                atoms_mono.atoms.sort();
                left = left.mul(&OperatorPoly::from_monomial(target, atoms_mono, Coeff::one()))?;
            }
            for (idx, e) in m.momenta() {
                left = left.mul(&power(*idx, *e)?)?;
            }
            out = out.add(&left)?;
        }
        Ok(out)
    }
}

fn rewrite_atom(atom: &PotentialAtom, map: &SubstitutionMap) -> Result<PotentialAtom, AlgebraError> {
    let dim = map.space.dim;
    let mut coeffs: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut shift = atom.shift.clone();
    for (j, c) in &atom.coeffs {
        let mut first: Option<(BTreeMap<usize, Rational>, Rational)> = None;
        for axis in 1..=dim {
            let img = map.image(&CanonicalIndex::z(*j, axis))?;
            let parts = decompose_position_image(&img, axis, &atom.name)?;
            match &first {
                None => first = Some(parts),
                Some(prev) if *prev == parts => {}
                Some(_) => return Err(AlgebraError::UnrepresentableAtomImage(atom.name.clone())),
            }
        }
        let (lin, tr) = first.expect("dimension is at least one");
        for (k, a) in lin {
            *coeffs.entry(k).or_insert_with(Rational::zero) += c * a;
        }
        shift += c * tr;
    }
    PotentialAtom::with_shift(atom.name.clone(), coeffs.into_iter().collect(), shift)
}

/// Splits the image of `z_j.axis` into its symbol-free linear part
/// (particle → coefficient, same axis only) and the coefficient of `a.axis`.
fn decompose_position_image(
    img: &OperatorPoly,
    axis: usize,
    name: &str,
) -> Result<(BTreeMap<usize, Rational>, Rational), AlgebraError> {
    let bad = || AlgebraError::UnrepresentableAtomImage(name.to_string());
    let mut lin = BTreeMap::new();
    let mut tr = Rational::zero();
    for (m, c) in img.terms() {
        if !c.is_real() {
            return Err(bad());
        }
        let rotation_term = m.symbols.len() == 1
            && m.symbols[0].0.family == SymbolFamily::Rotation
            && m.symbols[0].1 == 1;
        match (m.symbols.as_slice(), m.factors.as_slice()) {
            ([], [(idx, 1)]) if idx.kind == Kind::Position && idx.axis == axis => {
                lin.insert(idx.particle, c.re.clone());
            }
            ([(sym, 1)], []) if sym.family == SymbolFamily::Translation && sym.axis == axis => {
                tr += &c.re;
            }
            (_, [(idx, 1)]) if rotation_term && idx.kind == Kind::Position => {}
            _ => return Err(bad()),
        }
    }
    Ok((lin, tr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FormalSymbol;
    use crate::coeff::rat_int;

    fn sp() -> Space {
        Space::new(3, 3)
    }

    fn translation(space: Space) -> SubstitutionMap {
        let mut s = SubstitutionMap::new(space);
        for j in 1..=space.particles {
            for a in 1..=space.dim {
                let img = OperatorPoly::z(space, j, a)
                    .unwrap()
                    .add(&OperatorPoly::symbol(space, FormalSymbol::translation(a)))
                    .unwrap();
                s.insert(CanonicalIndex::z(j, a), img).unwrap();
            }
        }
        s
    }

    #[test]
    fn differences_shed_the_shift() {
        let d = OperatorPoly::z(sp(), 1, 1).unwrap().sub(&OperatorPoly::z(sp(), 2, 1).unwrap()).unwrap();
        assert_eq!(d.substitute(&translation(sp())).unwrap(), d);
    }

    #[test]
    fn atom_shift_tracks_coefficient_sum() {
        let external = PotentialAtom::new("U", vec![(1, rat_int(1))]).unwrap();
        let pair = PotentialAtom::new("V", vec![(1, rat_int(1)), (2, rat_int(-1))]).unwrap();
        let u = OperatorPoly::atom(sp(), external).unwrap();
        let v = OperatorPoly::atom(sp(), pair).unwrap();
        let s = translation(sp());
        assert_eq!(v.substitute(&s).unwrap(), v);
        let shifted = u.substitute(&s).unwrap();
        assert_ne!(shifted, u);
        let (m, _) = shifted.terms().next().unwrap();
        assert_eq!(m.atoms[0].shift, rat_int(1));
    }

    #[test]
    fn kind_mixing_is_rejected() {
        let mut s = SubstitutionMap::new(sp());
        let bad = OperatorPoly::p(sp(), 1, 1).unwrap();
        assert!(matches!(s.insert(CanonicalIndex::z(1, 1), bad), Err(AlgebraError::KindMixing(_))));
    }

    #[test]
    fn axis_mixing_on_atom_is_rejected() {
        let mut s = SubstitutionMap::new(sp());
        s.insert(CanonicalIndex::z(1, 1), OperatorPoly::z(sp(), 1, 2).unwrap()).unwrap();
        let v = OperatorPoly::atom(sp(), PotentialAtom::new("V", vec![(1, rat_int(1))]).unwrap()).unwrap();
        assert!(matches!(v.substitute(&s), Err(AlgebraError::UnrepresentableAtomImage(_))));
    }
}
