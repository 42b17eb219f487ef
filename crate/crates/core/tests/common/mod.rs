#![allow(dead_code)]

pub mod golden;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relobs::algebra::{OperatorPoly, Space};
use relobs::coeff::{rat, rat_int, Coeff, Rational};
use relobs::reduction::{LinearFrameMap, RowRole};
use relobs::spectral::GridModel;

/// One term: `num/den` (times `i` when flagged) times an ordered product of
/// `(is_momentum, particle, axis)` factors.
pub type TermSpec = (i64, i64, bool, Vec<(bool, usize, usize)>);

pub fn term_strategy(particles: usize, dim: usize, max_degree: usize) -> impl Strategy<Value = TermSpec> {
    (
        -3i64..=3,
        1i64..=3,
        any::<bool>(),
        prop::collection::vec((any::<bool>(), 1..=particles, 1..=dim), 0..=max_degree),
    )
}

pub fn poly_strategy(particles: usize, dim: usize, max_degree: usize) -> impl Strategy<Value = Vec<TermSpec>> {
    prop::collection::vec(term_strategy(particles, dim, max_degree), 0..=3)
}

/// Builds the polynomial by literal multiplication in the given factor order.
pub fn build_poly(space: Space, terms: &[TermSpec]) -> OperatorPoly {
    let mut out = OperatorPoly::zero(space);
    for (num, den, imag, factors) in terms {
        let r = rat(*num, *den);
        let c = if *imag { Coeff::new(rat_int(0), r) } else { Coeff::real(r) };
        let mut t = OperatorPoly::constant(space, c);
        for &(is_p, j, a) in factors {
            let f = if is_p { OperatorPoly::p(space, j, a) } else { OperatorPoly::z(space, j, a) };
            t = t.mul(&f.unwrap()).unwrap();
        }
        out = out.add(&t).unwrap();
    }
    out
}

pub fn random_masses(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| rat(rng.gen_range(1..=6), rng.gen_range(1..=3))).collect()
}

/// Random valid frame map: integer internal rows summing to zero, the
/// center-of-mass row at a random position, retried until invertible.
pub fn random_frame_map(rng: &mut ChaCha8Rng, n: usize) -> LinearFrameMap {
    let masses = random_masses(rng, n);
    let total: Rational = masses.iter().sum();
    loop {
        let cm = rng.gen_range(0..n);
        let mut t = Vec::with_capacity(n);
        let mut roles = Vec::with_capacity(n);
        for i in 0..n {
            if i == cm {
                t.push(masses.iter().map(|m| m / &total).collect());
                roles.push(RowRole::CenterOfMass);
            } else {
                let mut row: Vec<Rational> = (0..n - 1).map(|_| rat(rng.gen_range(-3..=3), rng.gen_range(1..=2))).collect();
                let sum: Rational = row.iter().sum();
                row.push(-sum);
                t.push(row);
                roles.push(RowRole::Internal);
            }
        }
        if let Ok(map) = LinearFrameMap::new(masses.clone(), t, roles) {
            return map;
        }
    }
}

/// Random expression text in the operator grammar.
/// Random well-formed operator text. Potential atoms only appear in a
/// trailing term multiplied by positions, so no momentum has to be moved
/// across an atom of the same particle.
pub fn random_expression(rng: &mut ChaCha8Rng, particles: usize, dim: usize, depth: usize) -> String {
    let core = random_core(rng, particles, dim, depth);
    if particles < 2 || rng.gen_bool(0.5) {
        return core;
    }
    let a = rng.gen_range(1..=particles);
    let b = (a % particles) + 1;
    let atom = format!("normfn(V, z[{a}] - {}*z[{b}])", rng.gen_range(1..4));
    match rng.gen_range(0..3) {
        0 => format!("{core} + {atom}"),
        1 => format!("{core} - {}*{atom}", rng.gen_range(2..5)),
        _ => format!("{core} + (z[{}].x)*{atom}", rng.gen_range(1..=particles)),
    }
}

fn random_core(rng: &mut ChaCha8Rng, particles: usize, dim: usize, depth: usize) -> String {
    let axes = ['x', 'y', 'z'];
    let axis = |rng: &mut ChaCha8Rng| axes[rng.gen_range(0..dim)];
    let pick = if depth == 0 { rng.gen_range(0..3) } else { rng.gen_range(0..10) };
    match pick {
        0 => match rng.gen_range(0..3) {
            0 => rng.gen_range(1..9).to_string(),
            1 => format!("{}/{}", rng.gen_range(1..9), rng.gen_range(2..5)),
            _ => "i".into(),
        },
        1 | 2 => {
            let v = if rng.gen_bool(0.5) { 'z' } else { 'p' };
            format!("{v}[{}].{}", rng.gen_range(1..=particles), axis(rng))
        }
        3 => format!(
            "{} + {}",
            random_core(rng, particles, dim, depth - 1),
            random_core(rng, particles, dim, depth - 1)
        ),
        4 => format!(
            "{} - ({})",
            random_core(rng, particles, dim, depth - 1),
            random_core(rng, particles, dim, depth - 1)
        ),
        5 | 6 => format!(
            "({}) * ({})",
            random_core(rng, particles, dim, depth - 1),
            random_core(rng, particles, dim, depth - 1)
        ),
        7 => format!("({})^2", random_core(rng, particles, dim, depth - 1)),
        8 => format!(
            "dot({}, {})",
            random_vector(rng, particles, 1),
            random_vector(rng, particles, 1)
        ),
        9 if dim == 3 => format!(
            "cross({}, {}).{}",
            random_vector(rng, particles, 1),
            random_vector(rng, particles, 1),
            axis(rng)
        ),
        _ => format!("-{}", random_core(rng, particles, dim, depth - 1)),
    }
}

fn random_vector(rng: &mut ChaCha8Rng, particles: usize, depth: usize) -> String {
    let atom = |rng: &mut ChaCha8Rng| {
        let v = if rng.gen_bool(0.5) { 'z' } else { 'p' };
        format!("{v}[{}]", rng.gen_range(1..=particles))
    };
    if depth == 0 {
        return atom(rng);
    }
    match rng.gen_range(0..4) {
        0 => atom(rng),
        1 => format!("{} - {}", atom(rng), atom(rng)),
        2 => format!("{}*{}", rng.gen_range(2..5), atom(rng)),
        _ => format!("({} + {})", atom(rng), random_vector(rng, particles, depth - 1)),
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn harmonic_pair(l: f64, npts: usize) -> GridModel {
    GridModel::from_json(&format!(
        r#"{{"particles": [{{"mass": 1}}, {{"mass": 1}}],
            "box": {{"L": {l}, "Npts": {npts}}},
            "potential": [{{"pair": [1, 2], "type": "harmonic", "params": {{"k": 1}}}}],
            "solver": {{"count": 4}}}}"#
    ))
    .unwrap()
}

pub fn soft_coulomb_pair(strength: f64, l: f64, npts: usize) -> GridModel {
    GridModel::from_json(&format!(
        r#"{{"particles": [{{"mass": 1}}, {{"mass": "3/2"}}],
            "box": {{"L": {l}, "Npts": {npts}}},
            "potential": [{{"pair": [1, 2], "type": "softCoulomb", "params": {{"strength": {strength}, "width": 1}}}}],
            "solver": {{"count": 3}}}}"#
    ))
    .unwrap()
}

/// Three particles with harmonic springs of different stiffness.
pub fn harmonic_triple(l: f64, npts: usize) -> GridModel {
    GridModel::from_json(&format!(
        r#"{{"particles": [{{"mass": 2}}, {{"mass": 2}}, {{"mass": 1}}],
            "box": {{"L": {l}, "Npts": {npts}}},
            "potential": [
                {{"pair": [1, 2], "type": "harmonic", "params": {{"k": 1}}}},
                {{"pair": [1, 3], "type": "harmonic", "params": {{"k": 0.7}}}},
                {{"pair": [2, 3], "type": "harmonic", "params": {{"k": 0.5}}}}],
            "solver": {{"count": 5, "tol": 1e-10}}}}"#
    ))
    .unwrap()
}

/// One light particle bound to two heavy ones by soft-Coulomb attraction,
/// heavy particles repelling each other.
pub fn bo_model(s_points: usize, y_points: usize) -> GridModel {
    GridModel::from_json(&format!(
        r#"{{"particles": [{{"mass": 1, "role": "heavy"}}, {{"mass": 1, "role": "heavy"}}, {{"mass": 1, "role": "light"}}],
            "box": {{"L": 16, "Npts": {s_points}, "internal": [{{"L": 16, "Npts": {s_points}}}, {{"L": 40, "Npts": {y_points}}}]}},
            "potential": [
                {{"pair": [1, 2], "type": "softCoulomb", "params": {{"strength": 1, "width": 1}}}},
                {{"pair": [1, 3], "type": "softCoulomb", "params": {{"strength": -1, "width": 1}}}},
                {{"pair": [2, 3], "type": "softCoulomb", "params": {{"strength": -1, "width": 1}}}}],
            "solver": {{"count": 2, "tol": 1e-9}}}}"#
    ))
    .unwrap()
}

/// Heavy-pair-relative frame for the harmonic triple: rows
/// `z₂ − z₁`, `z₃ − z₁` and the center of mass.
pub fn relative_map(model: &GridModel) -> LinearFrameMap {
    let m = &model.masses;
    let total: Rational = m.iter().sum();
    let t = vec![
        vec![rat_int(-1), rat_int(1), rat_int(0)],
        vec![rat_int(-1), rat_int(0), rat_int(1)],
        m.iter().map(|x| x / &total).collect(),
    ];
    LinearFrameMap::new(m.clone(), t, vec![RowRole::Internal, RowRole::Internal, RowRole::CenterOfMass]).unwrap()
}

/// Generalized eigenfrequencies `K v = ω² M v` of a harmonic network,
/// excluding the translation zero mode; an independent oracle built from
/// the spring constants only.
pub fn network_frequencies(masses: &[f64], springs: &[(usize, usize, f64)]) -> Vec<f64> {
    let n = masses.len();
    let mut k = nalgebra::DMatrix::<f64>::zeros(n, n);
    for &(a, b, c) in springs {
        k[(a, a)] += c;
        k[(b, b)] += c;
        k[(a, b)] -= c;
        k[(b, a)] -= c;
    }
    let d = nalgebra::DMatrix::<f64>::from_fn(n, n, |i, j| k[(i, j)] / (masses[i] * masses[j]).sqrt());
    let mut w: Vec<f64> =
        nalgebra::SymmetricEigen::new(d).eigenvalues.iter().filter(|l| **l > 1e-12).map(|l: &f64| l.sqrt()).collect();
    w.sort_by(f64::total_cmp);
    w
}
