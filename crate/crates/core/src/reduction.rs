//! Linear point transformations to center-of-mass plus internal coordinates,
//! projection onto a fixed total-momentum sector, and rotational invariants.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{cross, dot, AlgebraError, CanonicalIndex, Kind, OperatorPoly, Space, SubstitutionMap};
use crate::coeff::{format_rational, parse_rational, Coeff, Rational};
use crate::symmetry::{ActionWeights, ParticleSystem};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invalid frame map: {0}")]
    InvalidFrameMap(String),
    #[error("expression depends on the center-of-mass position and cannot be projected")]
    CMPositionDependence,
    #[error("rest-frame momentum has {got} components, expected {expected}")]
    RestMomentumDimension { expected: usize, got: usize },
    #[error("rotational invariants need dimension 3 and degree 2 or 3 (got dimension {dim}, degree {degree})")]
    UnsupportedBasis { dim: usize, degree: usize },
}

pub type RatMatrix = Vec<Vec<Rational>>;

/// Exact Gauss-Jordan inverse; `None` when singular.
pub fn invert(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = Rational::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn transpose(m: &RatMatrix) -> RatMatrix {
    let n = m.len();
    (0..m.first().map_or(0, |r| r.len())).map(|j| (0..n).map(|i| m[i][j].clone()).collect()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RowRole {
    Internal,
    CenterOfMass,
}

/// `z'_i = Σ_j T_ij z_j` on every axis, `p'_i = Σ_j S_ij p_j` with `S = (T⁻¹)ᵀ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFrameMap {
    masses: Vec<Rational>,
    t: RatMatrix,
    s: RatMatrix,
    t_inv: RatMatrix,
    roles: Vec<RowRole>,
}

impl LinearFrameMap {
    /// Validates every structural invariant and derives `S`.
    pub fn new(masses: Vec<Rational>, t: RatMatrix, roles: Vec<RowRole>) -> Result<Self, ReductionError> {
        let bad = |msg: String| Err(ReductionError::InvalidFrameMap(msg));
        let n = masses.len();
        if n == 0 {
            return bad("no particles".into());
        }
        if masses.iter().any(|m| !m.is_positive()) {
            return bad("masses must be positive".into());
        }
        if t.len() != n || t.iter().any(|r| r.len() != n) {
            return bad(format!("T must be {n}x{n}"));
        }
        if roles.len() != n {
            return bad(format!("expected {n} row roles, got {}", roles.len()));
        }
        let cm_rows: Vec<usize> = (0..n).filter(|&i| roles[i] == RowRole::CenterOfMass).collect();
        if cm_rows.len() != 1 {
            return bad(format!("exactly one centerOfMass row required, got {}", cm_rows.len()));
        }
        let total: Rational = masses.iter().sum();
        let cm = cm_rows[0];
        for (j, m) in masses.iter().enumerate() {
            if t[cm][j] != m / &total {
                return bad(format!("centerOfMass row entry {} must be m_j/M = {}", j + 1, format_rational(&(m / &total))));
            }
        }
        let Some(t_inv) = invert(&t) else {
            return bad("T is singular".into());
        };
        let s = transpose(&t_inv);
        for i in (0..n).filter(|&i| i != cm) {
            let row_sum: Rational = t[i].iter().sum();
            if !row_sum.is_zero() {
                return bad(format!("internal row {} of T sums to {}, not 0", i + 1, format_rational(&row_sum)));
            }
            let boost: Rational = s[i].iter().zip(&masses).map(|(a, m)| a * m).sum();
            if !boost.is_zero() {
                return bad(format!("internal momentum {} is not boost invariant", i + 1));
            }
        }
        Ok(LinearFrameMap { masses, t, s, t_inv, roles })
    }

    /// Sequential Jacobi vectors: row `k` is particle `k+1` relative to the
    /// center of mass of particles `1..=k`; the last row is the center of mass.
    pub fn jacobi(system: &ParticleSystem) -> Self {
        let m = system.masses();
        let n = m.len();
        let mut t = vec![vec![Rational::zero(); n]; n];
        let mut cluster = Rational::zero();
        for k in 0..n - 1 {
            cluster += &m[k];
            for j in 0..=k {
                t[k][j] = -(&m[j] / &cluster);
            }
            t[k][k + 1] = Rational::one();
        }
        let total = system.total_mass();
        for j in 0..n {
            t[n - 1][j] = &m[j] / &total;
        }
        let mut roles = vec![RowRole::Internal; n];
        roles[n - 1] = RowRole::CenterOfMass;
        LinearFrameMap::new(m.to_vec(), t, roles).expect("Jacobi rows satisfy the frame invariants")
    }

    pub fn n(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    pub fn t(&self) -> &RatMatrix {
        &self.t
    }

    pub fn s(&self) -> &RatMatrix {
        &self.s
    }

    pub fn t_inverse(&self) -> &RatMatrix {
        &self.t_inv
    }

    pub fn roles(&self) -> &[RowRole] {
        &self.roles
    }

    /// 1-based index of the center-of-mass row.
    pub fn cm_row(&self) -> usize {
        self.roles.iter().position(|r| *r == RowRole::CenterOfMass).expect("validated") + 1
    }

    /// 1-based indices of the internal rows.
    pub fn internal_rows(&self) -> Vec<usize> {
        (1..=self.n()).filter(|&i| i != self.cm_row()).collect()
    }

    pub fn total_mass(&self) -> Rational {
        self.masses.iter().sum()
    }

    /// Generator weights in the transformed frame: translations shift `z'_i`
    /// by the row sum of `T`, boosts shift `p'_i` by `(S·m)_i`.
    pub fn weights(&self, dim: usize) -> ActionWeights {
        ActionWeights {
            space: Space::new(self.n(), dim),
            translation: self.t.iter().map(|r| r.iter().sum()).collect(),
            boost: self.s.iter().map(|r| r.iter().zip(&self.masses).map(|(a, m)| a * m).sum()).collect(),
        }
    }

    /// Inverse kinetic metric `G = T M⁻¹ Tᵀ`: the kinetic energy is
    /// `½ Σ_ik G_ik p'_i·p'_k` in the transformed frame.
    pub fn kinetic_metric(&self) -> RatMatrix {
        let n = self.n();
        let mut g = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for k in 0..n {
                g[i][k] = (0..n).map(|j| &self.t[i][j] * &self.t[k][j] / &self.masses[j]).sum();
            }
        }
        g
    }

    /// Position images `z_j.α = Σ_i (T⁻¹)_ji z'_i.α`, momentum images
    /// `p_j.α = Σ_i T_ij p'_i.α`.
    pub fn substitution(&self, dim: usize) -> Result<SubstitutionMap, AlgebraError> {
        let n = self.n();
        let space = Space::new(n, dim);
        let mut map = SubstitutionMap::new(space);
        for j in 1..=n {
            for axis in 1..=dim {
                let mut zi = OperatorPoly::zero(space);
                let mut pi = OperatorPoly::zero(space);
                for i in 1..=n {
                    let a = &self.t_inv[j - 1][i - 1];
                    if !a.is_zero() {
                        zi = zi.add(&OperatorPoly::z(space, i, axis)?.scale_rational(a))?;
                    }
                    let b = &self.t[i - 1][j - 1];
                    if !b.is_zero() {
                        pi = pi.add(&OperatorPoly::p(space, i, axis)?.scale_rational(b))?;
                    }
                }
                map.insert(CanonicalIndex::z(j, axis), zi)?;
                map.insert(CanonicalIndex::p(j, axis), pi)?;
            }
        }
        Ok(map)
    }

    pub fn to_doc(&self) -> FrameMapDoc {
        FrameMapDoc {
            n: self.n(),
            masses: self.masses.iter().map(format_rational).collect(),
            t: self.t.iter().map(|r| r.iter().map(format_rational).collect()).collect(),
            roles: self.roles.clone(),
        }
    }
}

/// JSON form of a frame map; `S` is recomputed on load, never stored.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameMapDoc {
    pub n: usize,
    pub masses: Vec<String>,
    #[serde(rename = "T")]
    pub t: Vec<Vec<String>>,
    pub roles: Vec<RowRole>,
}

impl FrameMapDoc {
    pub fn into_map(self) -> Result<LinearFrameMap, ReductionError> {
        let parse = |s: &String| {
            parse_rational(s).ok_or_else(|| ReductionError::InvalidFrameMap(format!("bad rational `{s}`")))
        };
        let masses = self.masses.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
        if masses.len() != self.n {
            return Err(ReductionError::InvalidFrameMap(format!("n = {} but {} masses", self.n, masses.len())));
        }
        let t = self
            .t
            .iter()
            .map(|r| r.iter().map(parse).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        LinearFrameMap::new(masses, t, self.roles)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CmDependence {
    None,
    PositionDependent,
    MomentumDependent,
    Both,
}

/// An operator written in transformed-frame indices.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedOperator {
    pub expression: OperatorPoly,
    pub cm_row: usize,
    pub cm_dependence: CmDependence,
}

impl ReducedOperator {
    pub fn new(expression: OperatorPoly, cm_row: usize) -> Self {
        let pos = expression.support(Kind::Position).contains(&cm_row);
        let mom = expression.support(Kind::Momentum).contains(&cm_row);
        let cm_dependence = match (pos, mom) {
            (false, false) => CmDependence::None,
            (true, false) => CmDependence::PositionDependent,
            (false, true) => CmDependence::MomentumDependent,
            (true, true) => CmDependence::Both,
        };
        ReducedOperator { expression, cm_row, cm_dependence }
    }
}

pub fn apply_frame_map(o: &OperatorPoly, map: &LinearFrameMap) -> Result<ReducedOperator, ReductionError> {
    let space = o.space();
    if space.particles != map.n() {
        return Err(AlgebraError::AmbientMismatch { left: space, right: Space::new(map.n(), space.dim) }.into());
    }
    let expression = o.substitute(&map.substitution(space.dim)?)?;
    Ok(ReducedOperator::new(expression, map.cm_row()))
}

/// Restricts to the sector with total momentum `rest` (one entry per axis;
/// `None` means the rest frame).
pub fn project_cm(r: &ReducedOperator, rest: Option<&[Rational]>) -> Result<OperatorPoly, ReductionError> {
    if matches!(r.cm_dependence, CmDependence::PositionDependent | CmDependence::Both) {
        return Err(ReductionError::CMPositionDependence);
    }
    let space = r.expression.space();
    if let Some(q) = rest {
        if q.len() != space.dim {
            return Err(ReductionError::RestMomentumDimension { expected: space.dim, got: q.len() });
        }
    }
    let mut map = SubstitutionMap::new(space);
    for axis in 1..=space.dim {
        let value = rest.map_or_else(Rational::zero, |q| q[axis - 1].clone());
        map.insert(CanonicalIndex::p(r.cm_row, axis), OperatorPoly::constant(space, Coeff::real(value)))?;
    }
    Ok(r.expression.substitute(&map)?)
}

pub fn reduce_hamiltonian(h: &OperatorPoly, map: &LinearFrameMap) -> Result<OperatorPoly, ReductionError> {
    project_cm(&apply_frame_map(h, map)?, None)
}

/// Position vectors `z'_i` of the internal rows.
pub fn internal_vectors(map: &LinearFrameMap, dim: usize) -> Result<Vec<Vec<OperatorPoly>>, ReductionError> {
    let space = Space::new(map.n(), dim);
    Ok(map
        .internal_rows()
        .into_iter()
        .map(|i| crate::algebra::vector(space, Kind::Position, i))
        .collect::<Result<Vec<_>, _>>()?)
}

/// Dot products `w_i·w_j` (i ≤ j) and, for degree 3, triple products
/// `w_i·(w_j × w_k)` (i < j < k).
pub fn rotational_invariant_basis(
    vectors: &[Vec<OperatorPoly>],
    max_degree: usize,
) -> Result<Vec<OperatorPoly>, ReductionError> {
    let dim = vectors.first().map_or(3, |v| v.len());
    if dim != 3 || vectors.iter().any(|v| v.len() != 3) || !(2..=3).contains(&max_degree) {
        return Err(ReductionError::UnsupportedBasis { dim, degree: max_degree });
    }
    let mut out = Vec::new();
    for i in 0..vectors.len() {
        for j in i..vectors.len() {
            out.push(dot(&vectors[i], &vectors[j])?);
        }
    }
    if max_degree == 3 {
        for i in 0..vectors.len() {
            for j in i + 1..vectors.len() {
                for k in j + 1..vectors.len() {
                    out.push(dot(&vectors[i], &cross(&vectors[j], &vectors[k])?)?);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FormalSymbol, PotentialAtom};
    use crate::coeff::{rat, rat_int};
    use crate::symmetry::{boost_action, classify, is_invariant, translation_action, SymmetrySelection};

    fn system(dim: usize, masses: &[(i64, i64)]) -> ParticleSystem {
        ParticleSystem::new(dim, masses.iter().map(|&(a, b)| rat(a, b)).collect()).unwrap()
    }

    fn kinetic(s: &ParticleSystem, axes: usize) -> OperatorPoly {
        let sp = s.space();
        let mut t = OperatorPoly::zero(sp);
        for j in 1..=s.particles() {
            for a in 1..=axes {
                let p2 = OperatorPoly::p(sp, j, a).unwrap().pow(2).unwrap();
                t = t.add(&p2.scale_rational(&(rat_int(1) / (rat_int(2) * s.mass(j))))).unwrap();
            }
        }
        t
    }

    #[test]
    fn jacobi_two_equal_masses() {
        let map = LinearFrameMap::jacobi(&system(1, &[(1, 1), (1, 1)]));
        assert_eq!(map.t(), &vec![vec![rat_int(-1), rat_int(1)], vec![rat(1, 2), rat(1, 2)]]);
    }

    #[test]
    fn jacobi_unequal_masses_momentum_row() {
        let map = LinearFrameMap::jacobi(&system(1, &[(1, 1), (3, 1)]));
        assert_eq!(map.s()[0], vec![rat(-3, 4), rat(1, 4)]);
        assert_eq!(map.s()[1], vec![rat_int(1), rat_int(1)]);
    }

    #[test]
    fn jacobi_three_rows_sum_to_zero() {
        let map = LinearFrameMap::jacobi(&system(3, &[(1, 1), (1, 1), (1, 1)]));
        for i in map.internal_rows() {
            assert!(map.t()[i - 1].iter().sum::<Rational>().is_zero());
        }
        assert_eq!(map.t()[1], vec![rat(-1, 2), rat(-1, 2), rat_int(1)]);
    }

    #[test]
    fn single_particle_is_all_center_of_mass() {
        let s = system(3, &[(2, 1)]);
        let map = LinearFrameMap::jacobi(&s);
        assert_eq!(map.cm_row(), 1);
        assert!(map.internal_rows().is_empty());
        assert!(reduce_hamiltonian(&kinetic(&s, 3), &map).unwrap().is_zero());
    }

    #[test]
    fn invalid_maps_are_rejected() {
        let m = vec![rat_int(1), rat_int(1)];
        let roles = vec![RowRole::Internal, RowRole::CenterOfMass];
        let wrong_cm = vec![vec![rat_int(-1), rat_int(1)], vec![rat(1, 3), rat(2, 3)]];
        assert!(LinearFrameMap::new(m.clone(), wrong_cm, roles.clone()).is_err());
        let nonzero_row = vec![vec![rat_int(1), rat_int(1)], vec![rat(1, 2), rat(1, 2)]];
        assert!(LinearFrameMap::new(m.clone(), nonzero_row, roles.clone()).is_err());
        let two_cm = vec![RowRole::CenterOfMass, RowRole::CenterOfMass];
        let t = vec![vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(1, 2)]];
        assert!(LinearFrameMap::new(m, t, two_cm).is_err());
    }

    #[test]
    fn relative_coordinate_maps_to_internal_row() {
        let s = system(1, &[(1, 1), (1, 1)]);
        let map = LinearFrameMap::jacobi(&s);
        let sp = s.space();
        let d = OperatorPoly::z(sp, 1, 1).unwrap().sub(&OperatorPoly::z(sp, 2, 1).unwrap()).unwrap();
        let r = apply_frame_map(&d, &map).unwrap();
        assert_eq!(r.expression, OperatorPoly::z(sp, 1, 1).unwrap().neg());
        assert_eq!(r.cm_dependence, CmDependence::None);
    }

    #[test]
    fn kinetic_energy_splits() {
        let s = system(1, &[(2, 1), (3, 1)]);
        let map = LinearFrameMap::jacobi(&s);
        let sp = s.space();
        let r = apply_frame_map(&kinetic(&s, 1), &map).unwrap();
        assert_eq!(r.cm_dependence, CmDependence::MomentumDependent);
        let mu = rat(6, 5);
        let big_m = rat_int(5);
        let p_int = OperatorPoly::p(sp, 1, 1).unwrap().pow(2).unwrap().scale_rational(&(rat_int(1) / (rat_int(2) * &mu)));
        let p_cm = OperatorPoly::p(sp, 2, 1).unwrap().pow(2).unwrap().scale_rational(&(rat_int(1) / (rat_int(2) * &big_m)));
        assert_eq!(r.expression, p_int.add(&p_cm).unwrap());
        assert_eq!(project_cm(&r, None).unwrap(), p_int);
        let q = rat(7, 3);
        let moving = project_cm(&r, Some(std::slice::from_ref(&q))).unwrap();
        let shift = OperatorPoly::constant(sp, Coeff::real(&q * &q / (rat_int(2) * &big_m)));
        assert_eq!(moving, p_int.add(&shift).unwrap());
    }

    #[test]
    fn center_of_mass_position_cannot_be_projected() {
        let s = system(1, &[(1, 1), (3, 1)]);
        let map = LinearFrameMap::jacobi(&s);
        let sp = s.space();
        let zcm = OperatorPoly::z(sp, 1, 1)
            .unwrap()
            .scale_rational(&rat(1, 4))
            .add(&OperatorPoly::z(sp, 2, 1).unwrap().scale_rational(&rat(3, 4)))
            .unwrap();
        let r = apply_frame_map(&zcm, &map).unwrap();
        assert_eq!(r.expression, OperatorPoly::z(sp, 2, 1).unwrap());
        assert_eq!(r.cm_dependence, CmDependence::PositionDependent);
        assert_eq!(project_cm(&r, None), Err(ReductionError::CMPositionDependence));
    }

    #[test]
    fn harmonic_pair_reduces_to_relative_oscillator() {
        let s = system(3, &[(1, 1), (2, 1)]);
        let sp = s.space();
        let map = LinearFrameMap::jacobi(&s);
        let k = rat(5, 2);
        let z1 = crate::algebra::vector(sp, Kind::Position, 1).unwrap();
        let z2 = crate::algebra::vector(sp, Kind::Position, 2).unwrap();
        let d: Vec<_> = z1.iter().zip(&z2).map(|(a, b)| a.sub(b).unwrap()).collect();
        let h = kinetic(&s, 3).add(&dot(&d, &d).unwrap().scale_rational(&(&k / rat_int(2)))).unwrap();
        let reduced = reduce_hamiltonian(&h, &map).unwrap();
        let mu = rat(2, 3);
        let mut expected = OperatorPoly::zero(sp);
        for a in 1..=3 {
            let p = OperatorPoly::p(sp, 1, a).unwrap().pow(2).unwrap().scale_rational(&(rat_int(1) / (rat_int(2) * &mu)));
            let z = OperatorPoly::z(sp, 1, a).unwrap().pow(2).unwrap().scale_rational(&(&k / rat_int(2)));
            expected = expected.add(&p).unwrap().add(&z).unwrap();
        }
        assert_eq!(reduced, expected);
    }

    #[test]
    fn three_body_atoms_reduce_to_physical_internal_hamiltonian() {
        let s = system(3, &[(1, 1), (2, 1), (3, 1)]);
        let sp = s.space();
        let map = LinearFrameMap::jacobi(&s);
        let mut h = kinetic(&s, 3);
        for (i, j) in [(1, 2), (1, 3), (2, 3)] {
            let atom = PotentialAtom::new("V", vec![(i, rat_int(1)), (j, rat_int(-1))]).unwrap();
            h = h.add(&OperatorPoly::atom(sp, atom).unwrap()).unwrap();
        }
        let reduced = reduce_hamiltonian(&h, &map).unwrap();
        assert!(!reduced.support(Kind::Position).contains(&3));
        assert!(!reduced.support(Kind::Momentum).contains(&3));
        let sel = SymmetrySelection { translations: true, rotations: false, boosts: true };
        assert!(classify(&reduced, sel, &map.weights(3)).unwrap().is_physical);
    }

    #[test]
    fn frame_weights_decouple_center_of_mass() {
        let s = system(2, &[(1, 1), (2, 1), (4, 1)]);
        let map = LinearFrameMap::jacobi(&s);
        let w = map.weights(2);
        let sp = s.space();
        let tr = translation_action(&w).unwrap();
        let bo = boost_action(&w).unwrap();
        for i in map.internal_rows() {
            assert!(is_invariant(&OperatorPoly::z(sp, i, 1).unwrap(), &tr).unwrap().0);
            assert!(is_invariant(&OperatorPoly::p(sp, i, 2).unwrap(), &bo).unwrap().0);
        }
        let pcm = OperatorPoly::p(sp, 3, 1).unwrap();
        let v = OperatorPoly::symbol(sp, FormalSymbol::boost(1));
        assert_eq!(pcm.substitute(&bo).unwrap(), pcm.add(&v.scale_rational(&rat_int(7))).unwrap());
        let zcm = OperatorPoly::z(sp, 3, 1).unwrap();
        let a = OperatorPoly::symbol(sp, FormalSymbol::translation(1));
        assert_eq!(zcm.substitute(&tr).unwrap(), zcm.add(&a).unwrap());
    }

    #[test]
    fn invariant_basis_counts() {
        let sp = Space::new(4, 3);
        let v = |i| crate::algebra::vector(sp, Kind::Position, i).unwrap();
        let two = vec![v(1), v(2)];
        assert_eq!(rotational_invariant_basis(&two, 2).unwrap().len(), 3);
        assert_eq!(rotational_invariant_basis(&two, 3).unwrap().len(), 3);
        let three = vec![v(1), v(2), v(3)];
        assert_eq!(rotational_invariant_basis(&three, 3).unwrap().len(), 7);
        assert!(rotational_invariant_basis(&three, 4).is_err());
        let flat = Space::new(2, 2);
        let planar = vec![crate::algebra::vector(flat, Kind::Position, 1).unwrap()];
        assert!(rotational_invariant_basis(&planar, 2).is_err());
    }

    #[test]
    fn frame_doc_round_trip() {
        let map = LinearFrameMap::jacobi(&system(3, &[(1, 1), (3, 2), (5, 1)]));
        let text = serde_json::to_string(&map.to_doc()).unwrap();
        let back: FrameMapDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_map().unwrap(), map);
        assert!(text.contains("\"centerOfMass\""));
    }

    #[test]
    fn kinetic_metric_of_jacobi_is_diagonal() {
        let map = LinearFrameMap::jacobi(&system(1, &[(1, 1), (3, 1)]));
        let g = map.kinetic_metric();
        assert_eq!(g[0][0], rat(4, 3));
        assert!(g[0][1].is_zero());
        assert_eq!(g[1][1], rat(1, 4));
    }
}
