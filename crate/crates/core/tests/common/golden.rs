//! Bundled example invocations whose JSON output is pinned byte for byte.

use std::path::PathBuf;

/// Golden cases: file name and arguments.
pub const GOLDEN: &[(&str, &[&str])] = &[
    ("classify_relative.json", &["classify", "--system", "data/pair_3d.json", "--expr", "z[1].x - z[2].x"]),
    ("classify_momentum.json", &["classify", "--system", "data/pair_3d.json", "--expr", "p[1].x"]),
    (
        "classify_no_rotations.json",
        &["classify", "--system", "data/three_3d.json", "--expr", "p[1].x - 1/2*p[2].x", "--no-rotations"],
    ),
    (
        "reduce_pair.json",
        &["reduce", "--system", "data/pair_3d.json", "--expr", "1/2*dot(p[1],p[1]) + 1/2*dot(p[2],p[2]) + normfn(V, z[1]-z[2])"],
    ),
    (
        "reduce_relative_map.json",
        &[
            "reduce",
            "--system",
            "data/three_3d.json",
            "--map",
            "data/three_relative_map.json",
            "--expr",
            "1/2*dot(p[1],p[1]) + 1/4*dot(p[2],p[2]) + 1/6*dot(p[3],p[3])",
        ],
    ),
    ("invariants.json", &["invariants", "--system", "data/three_3d.json", "--degree", "2"]),
    ("modes_ring8.json", &["modes", "--model", "data/ring8.json"]),
    ("modes_ring8_broken.json", &["modes", "--model", "data/ring8_broken.json"]),
    ("spectrum_reduced.json", &["spectrum", "--model", "data/pair_harmonic.json"]),
    ("spectrum_full.json", &["spectrum", "--model", "data/pair_harmonic.json", "--variant", "full", "--sector", "1"]),
    ("scaling.json", &["scaling", "--model", "data/pair_harmonic.json"]),
    ("bo.json", &["bo", "--model", "data/three_bo.json", "--mass-ratios", "10,100"]),
    (
        "spectral_function.json",
        &["spectral-function", "--model", "data/pair_harmonic.json", "--format", "json", "--points", "64"],
    ),
];

pub fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden").join(name)
}
