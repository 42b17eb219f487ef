use num::Signed;
use serde::{Deserialize, Serialize};

use crate::coeff::{parse_rational, Rational};

use super::kernels::KineticScheme;
use super::SpectralError;

pub const MIN_POINTS: usize = 64;

/// Pair interaction as a function of the separation `r`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "params", rename_all = "camelCase")]
pub enum PairPotential {
    /// `k r² / 2`
    Harmonic { k: f64 },
    /// `strength / sqrt(r² + width²)`; the sign of `strength` selects
    /// attraction or repulsion.
    SoftCoulomb { strength: f64, width: f64 },
}

impl PairPotential {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            PairPotential::Harmonic { k } => 0.5 * k * r * r,
            PairPotential::SoftCoulomb { strength, width } => strength / (r * r + width * width).sqrt(),
        }
    }

    fn validate(&self) -> Result<(), SpectralError> {
        match *self {
            PairPotential::Harmonic { k } if !k.is_finite() => Err(invalid("harmonic k must be finite")),
            PairPotential::SoftCoulomb { strength, width } if !(strength.is_finite() && width.is_finite() && width > 0.0) => {
                Err(invalid("soft-Coulomb needs finite strength and width > 0"))
            }
            _ => Ok(()),
        }
    }
}

fn invalid(msg: impl Into<String>) -> SpectralError {
    SpectralError::InvalidModel(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Role {
    Light,
    Heavy,
}

/// A mass given either as a JSON number or as an exact `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MassValue {
    Number(f64),
    Exact(String),
}

impl MassValue {
    pub fn to_rational(&self) -> Result<Rational, SpectralError> {
        let r = match self {
            MassValue::Number(x) => Rational::from_float(*x).ok_or_else(|| invalid(format!("mass {x} is not finite")))?,
            MassValue::Exact(s) => parse_rational(s).ok_or_else(|| invalid(format!("bad mass `{s}`")))?,
        };
        if !r.is_positive() {
            return Err(invalid("masses must be positive"));
        }
        Ok(r)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleDoc {
    pub mass: MassValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<Role>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisBox {
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "Npts")]
    pub npts: usize,
}

impl AxisBox {
    pub fn h(&self) -> f64 {
        self.l / self.npts as f64
    }

    fn validate(&self) -> Result<(), SpectralError> {
        if !(self.l.is_finite() && self.l > 0.0) {
            return Err(invalid(format!("box length {} must be positive", self.l)));
        }
        if self.npts < MIN_POINTS || !self.npts.is_power_of_two() {
            return Err(invalid(format!("Npts = {} must be a power of two ≥ {MIN_POINTS}", self.npts)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxDoc {
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "Npts")]
    pub npts: usize,
    /// Per internal axis boxes for three-particle models.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub internal: Option<Vec<AxisBox>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairTermDoc {
    pub pair: [usize; 2],
    #[serde(flatten)]
    pub potential: PairPotential,
}

fn default_count() -> usize {
    4
}

fn default_tol() -> f64 {
    1e-9
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverDoc {
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub kinetic: KineticScheme,
}

impl Default for SolverDoc {
    fn default() -> Self {
        SolverDoc { count: default_count(), tol: default_tol(), kinetic: KineticScheme::Spectral }
    }
}

/// JSON form of a grid model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub particles: Vec<ParticleDoc>,
    #[serde(rename = "box")]
    pub box_: BoxDoc,
    pub potential: Vec<PairTermDoc>,
    #[serde(default)]
    pub solver: SolverDoc,
}

/// Interaction between particles `a` and `b` (0-based), evaluated at `z_b − z_a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairTerm {
    pub a: usize,
    pub b: usize,
    pub potential: PairPotential,
}

/// Two or three particles on a line with periodic boundaries.
#[derive(Clone, Debug, PartialEq)]
pub struct GridModel {
    pub masses: Vec<Rational>,
    pub roles: Vec<Option<Role>>,
    pub box_: AxisBox,
    pub internal: Option<Vec<AxisBox>>,
    pub pairs: Vec<PairTerm>,
    pub count: usize,
    pub tol: f64,
    pub kinetic: KineticScheme,
}

impl GridModel {
    pub fn from_doc(doc: GridDoc) -> Result<Self, SpectralError> {
        let masses = doc.particles.iter().map(|p| p.mass.to_rational()).collect::<Result<Vec<_>, _>>()?;
        let roles = doc.particles.iter().map(|p| p.role).collect();
        let pairs = doc
            .potential
            .iter()
            .map(|t| PairTerm { a: t.pair[0].wrapping_sub(1), b: t.pair[1].wrapping_sub(1), potential: t.potential })
            .collect();
        let model = GridModel {
            masses,
            roles,
            box_: AxisBox { l: doc.box_.l, npts: doc.box_.npts },
            internal: doc.box_.internal,
            pairs,
            count: doc.solver.count,
            tol: doc.solver.tol,
            kinetic: doc.solver.kinetic,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn from_json(text: &str) -> Result<Self, SpectralError> {
        let doc: GridDoc = serde_json::from_str(text).map_err(|e| SpectralError::InvalidModel(e.to_string()))?;
        GridModel::from_doc(doc)
    }

    pub fn to_doc(&self) -> GridDoc {
        GridDoc {
            particles: self
                .masses
                .iter()
                .zip(&self.roles)
                .map(|(m, r)| ParticleDoc { mass: MassValue::Exact(crate::coeff::format_rational(m)), role: *r })
                .collect(),
            box_: BoxDoc { l: self.box_.l, npts: self.box_.npts, internal: self.internal.clone() },
            potential: self.pairs.iter().map(|p| PairTermDoc { pair: [p.a + 1, p.b + 1], potential: p.potential }).collect(),
            solver: SolverDoc { count: self.count, tol: self.tol, kinetic: self.kinetic },
        }
    }

    pub fn validate(&self) -> Result<(), SpectralError> {
        let n = self.masses.len();
        if !(2..=3).contains(&n) {
            return Err(invalid(format!("grid models need 2 or 3 particles, got {n}")));
        }
        if self.masses.iter().any(|m| !m.is_positive()) {
            return Err(invalid("masses must be positive"));
        }
        self.box_.validate()?;
        if let Some(boxes) = &self.internal {
            if boxes.len() != n - 1 {
                return Err(invalid(format!("expected {} internal boxes, got {}", n - 1, boxes.len())));
            }
            for b in boxes {
                b.validate()?;
            }
        }
        for p in &self.pairs {
            if p.a >= n || p.b >= n || p.a == p.b {
                return Err(invalid(format!("invalid pair ({}, {})", p.a.wrapping_add(1), p.b.wrapping_add(1))));
            }
            p.potential.validate()?;
        }
        if self.count == 0 {
            return Err(invalid("solver count must be at least 1"));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(invalid("solver tolerance must be positive"));
        }
        Ok(())
    }

    pub fn particles(&self) -> usize {
        self.masses.len()
    }

    pub fn masses_f64(&self) -> Vec<f64> {
        self.masses.iter().map(crate::coeff::rational_to_f64).collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.masses_f64().iter().sum()
    }

    /// Boxes for the internal axes; defaults to the common box.
    pub fn internal_boxes(&self) -> Vec<AxisBox> {
        self.internal.clone().unwrap_or_else(|| vec![self.box_; self.particles() - 1])
    }

    pub fn with_length(&self, l: f64) -> Self {
        GridModel { box_: AxisBox { l, npts: self.box_.npts }, ..self.clone() }
    }

    pub fn with_points(&self, npts: usize) -> Self {
        GridModel { box_: AxisBox { l: self.box_.l, npts }, ..self.clone() }
    }

    /// Every heavy particle gets `ratio` times the light mass.
    pub fn with_mass_ratio(&self, ratio: f64) -> Result<Self, SpectralError> {
        let light = self
            .roles
            .iter()
            .position(|r| *r == Some(Role::Light))
            .ok_or_else(|| invalid("no particle tagged light"))?;
        let ratio = Rational::from_float(ratio).filter(|r| r.is_positive()).ok_or_else(|| invalid("mass ratio must be positive"))?;
        let heavy = &self.masses[light] * ratio;
        let masses = self
            .masses
            .iter()
            .zip(&self.roles)
            .map(|(m, r)| if *r == Some(Role::Heavy) { heavy.clone() } else { m.clone() })
            .collect();
        Ok(GridModel { masses, ..self.clone() })
    }

    /// Sum of all pair potentials between `a` and `b` at separation `r`.
    pub fn pair_energy(&self, a: usize, b: usize, r: f64) -> f64 {
        self.pairs
            .iter()
            .filter(|p| (p.a == a && p.b == b) || (p.a == b && p.b == a))
            .map(|p| p.potential.eval(r))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PAIR: &str = r#"{
        "particles": [{"mass": 1}, {"mass": "3/2"}],
        "box": {"L": 40, "Npts": 128},
        "potential": [{"pair": [1, 2], "type": "softCoulomb", "params": {"strength": -1, "width": 1}}],
        "solver": {"count": 3}
    }"#;

    #[test]
    fn parses_documents() {
        let m = GridModel::from_json(PAIR).unwrap();
        assert_eq!(m.masses_f64(), vec![1.0, 1.5]);
        assert_eq!(m.count, 3);
        assert_eq!(m.kinetic, KineticScheme::Spectral);
        assert_eq!(m.pair_energy(1, 0, 0.0), -1.0);
        let back = GridModel::from_doc(m.to_doc()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rejects_invalid_models() {
        let bad_points = PAIR.replace("128", "100");
        assert!(GridModel::from_json(&bad_points).is_err());
        let small = PAIR.replace("128", "32");
        assert!(GridModel::from_json(&small).is_err());
        let zero_width = PAIR.replace("\"width\": 1", "\"width\": 0");
        assert!(GridModel::from_json(&zero_width).is_err());
        let bad_pair = PAIR.replace("[1, 2]", "[1, 1]");
        assert!(GridModel::from_json(&bad_pair).is_err());
    }

    #[test]
    fn potentials() {
        assert_eq!(PairPotential::Harmonic { k: 2.0 }.eval(3.0), 9.0);
        assert_eq!(PairPotential::SoftCoulomb { strength: 2.0, width: 3.0 }.eval(4.0), 0.4);
    }
}
