use std::path::Path;
use std::time::Instant;

use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::algebra::Naming;
use crate::coeff::{format_rational, parse_rational};
use crate::parse::parse_operator;
use crate::reduction::{
    apply_frame_map, internal_vectors, project_cm, rotational_invariant_basis, FrameMapDoc, LinearFrameMap,
};
use crate::spectral::bo::bo_solve;
use crate::spectral::config::GridDoc;
use crate::spectral::harmonic::{is_acoustic, HarmonicDoc, ASR_TOLERANCE, ZERO_MODE_THRESHOLD};
use crate::spectral::lehmann::SpectralFunction;
use crate::spectral::{
    cm_ladder_scaling, full_grid_spectrum, normal_modes, reduced_grid_spectrum, remove_acoustic_modes,
    spectral_function, GridModel, Probe, SpectralOptions, SpectrumResult, Variant,
};
use crate::symmetry::{classify, ParticleSystem, SymmetrySelection, SystemDoc};

use super::report::{CliError, ErrorKind, RunReport};
use super::{Cli, Command, Format, SpectrumVariant};

/// Inputs read for one run, kept in order for the report hash.
struct Inputs {
    parts: Vec<Vec<u8>>,
}

impl Inputs {
    fn new(command: &str) -> Self {
        Inputs { parts: vec![command.as_bytes().to_vec()] }
    }

    fn text(&mut self, s: &str) {
        self.parts.push(s.as_bytes().to_vec());
    }

    fn document<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T, CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::new(ErrorKind::Usage, format!("cannot read {}: {e}", path.display())))?;
        let doc = serde_json::from_slice(&bytes)
            .map_err(|e| CliError::new(ErrorKind::Parse, format!("{}: {e}", path.display())))?;
        self.parts.push(bytes);
        Ok(doc)
    }

    fn report(&self, echo: Vec<String>, result: Value) -> RunReport {
        let parts: Vec<&[u8]> = self.parts.iter().map(|p| p.as_slice()).collect();
        RunReport::new(echo, &parts, result)
    }
}

pub(super) fn execute(cli: &Cli, echo: Vec<String>) -> Result<String, CliError> {
    let start = Instant::now();
    let (inputs, output) = match &cli.command {
        Command::Classify(a) => {
            let mut inputs = Inputs::new("classify");
            let system = load_system(&mut inputs, &a.system)?;
            inputs.text(&a.expr);
            let o = parse_operator(&a.expr, system.space())?;
            let mut sel = SymmetrySelection::for_dim(system.dim());
            if a.no_rotations {
                sel.rotations = false;
            }
            let verdict = classify(&o, sel, &system.weights())?;
            let generators: serde_json::Map<String, Value> = verdict
                .per_generator
                .iter()
                .map(|(g, v)| {
                    (g.name().to_string(), json!({"invariant": v.invariant, "residual": v.residual.to_string()}))
                })
                .collect();
            let result = json!({
                "expression": o.to_string(),
                "system": system_json(&system),
                "selection": {"translations": sel.translations, "rotations": sel.rotations, "boosts": sel.boosts},
                "isPhysical": verdict.is_physical,
                "generators": generators,
                "failed": verdict.per_generator.iter().filter(|(_, v)| !v.invariant).map(|(g, _)| g.name()).collect::<Vec<_>>(),
            });
            (inputs, Output::Json(result))
        }
        Command::Reduce(a) => {
            let mut inputs = Inputs::new("reduce");
            let system = load_system(&mut inputs, &a.system)?;
            let map = load_map(&mut inputs, &a.map, &system)?;
            inputs.text(&a.expr);
            let o = parse_operator(&a.expr, system.space())?;
            let rest = match &a.sector_momentum {
                None => None,
                Some(parts) => {
                    let mut q = Vec::with_capacity(parts.len());
                    for p in parts {
                        inputs.text(p);
                        q.push(parse_rational(p.trim()).ok_or_else(|| {
                            CliError::new(ErrorKind::Parse, format!("bad rational `{p}` in --sector-momentum"))
                        })?);
                    }
                    Some(q)
                }
            };
            let transformed = apply_frame_map(&o, &map)?;
            let reduced = project_cm(&transformed, rest.as_deref())?;
            let naming = Naming::Frame { cm_row: Some(map.cm_row()) };
            let note = match &rest {
                None => "P_cm -> 0 applied".to_string(),
                Some(q) => format!("P_cm -> ({}) applied", q.iter().map(format_rational).collect::<Vec<_>>().join(", ")),
            };
            let result = json!({
                "expression": o.to_string(),
                "map": map.to_doc(),
                "transformed": transformed.expression.display_with(naming),
                "cmDependence": transformed.cm_dependence,
                "reduced": reduced.display_with(naming),
                "notes": [note],
            });
            (inputs, Output::Json(result))
        }
        Command::Invariants(a) => {
            let mut inputs = Inputs::new("invariants");
            let system = load_system(&mut inputs, &a.system)?;
            let map = load_map(&mut inputs, &a.map, &system)?;
            let vectors = internal_vectors(&map, system.dim())?;
            let basis = rotational_invariant_basis(&vectors, a.degree)?;
            let naming = Naming::Frame { cm_row: Some(map.cm_row()) };
            let result = json!({
                "map": map.to_doc(),
                "degree": a.degree,
                "vectors": map.internal_rows().iter().map(|i| format!("z'[{i}]")).collect::<Vec<_>>(),
                "invariants": basis.iter().map(|b| b.display_with(naming)).collect::<Vec<_>>(),
            });
            (inputs, Output::Json(result))
        }
        Command::Modes(a) => {
            let mut inputs = Inputs::new("modes");
            let doc: HarmonicDoc = inputs.document(&a.model)?;
            let model = doc.into_model()?;
            let modes = normal_modes(&model)?;
            let remaining = remove_acoustic_modes(&modes);
            let output = match a.format {
                Format::Csv => {
                    let mut s = String::from("index,omega,acoustic\n");
                    for (i, w) in modes.frequencies.iter().enumerate() {
                        s.push_str(&format!("{},{w:.12e},{}\n", i + 1, is_acoustic(*w)));
                    }
                    Output::Csv(s)
                }
                Format::Json => Output::Json(json!({
                    "frequencies": modes.frequencies,
                    "modes": modes.frequencies.iter().map(|w| json!({"omega": w, "acoustic": is_acoustic(*w)})).collect::<Vec<_>>(),
                    "zeroModes": modes.frequencies.len() - remaining.frequencies.len(),
                    "zeroModeThreshold": ZERO_MODE_THRESHOLD,
                    "remaining": remaining.frequencies,
                    "asr": {
                        "enforced": model.asr_enforced(),
                        "maxRowSum": model.max_row_sum(),
                        "satisfied": model.max_row_sum() <= ASR_TOLERANCE,
                    },
                })),
            };
            (inputs, output)
        }
        Command::Spectrum(a) => {
            let mut inputs = Inputs::new("spectrum");
            let model = load_model(&mut inputs, &a.model)?;
            let count = a.count.unwrap_or(model.count);
            let spectrum = match a.variant {
                SpectrumVariant::Full => full_grid_spectrum(&model, a.sector, count)?,
                SpectrumVariant::Reduced => reduced_grid_spectrum(&model, count)?.without_vectors(),
            };
            let output = match a.format {
                Format::Csv => Output::Csv(spectrum_csv(&spectrum)),
                Format::Json => Output::Json(to_value(&spectrum)),
            };
            (inputs, output)
        }
        Command::Scaling(a) => {
            let mut inputs = Inputs::new("scaling");
            let model = load_model(&mut inputs, &a.model)?;
            inputs.text(&join_f64(&a.lengths));
            let result = cm_ladder_scaling(&model, &a.lengths)?;
            (inputs, Output::Json(to_value(&result)))
        }
        Command::Bo(a) => {
            let mut inputs = Inputs::new("bo");
            let model = load_model(&mut inputs, &a.model)?;
            inputs.text(&join_f64(&a.mass_ratios));
            let mut rows = Vec::with_capacity(a.mass_ratios.len());
            for &ratio in &a.mass_ratios {
                let r = bo_solve(&model, ratio)?;
                rows.push((ratio, r));
            }
            let output = match a.format {
                Format::Csv => {
                    let mut s = String::from("mass_ratio,bo_ground,exact_ground,abs_error,rel_error\n");
                    for (ratio, r) in &rows {
                        s.push_str(&format!(
                            "{ratio},{:.12e},{:.12e},{:.6e},{:.6e}\n",
                            r.nuclear_levels[0],
                            r.exact_levels[0],
                            r.ground_error(),
                            r.relative_ground_error()
                        ));
                    }
                    Output::Csv(s)
                }
                Format::Json => Output::Json(json!({
                    "model": model.to_doc(),
                    "rows": rows.iter().map(|(ratio, r)| json!({
                        "massRatio": ratio,
                        "boGround": r.nuclear_levels[0],
                        "exactGround": r.exact_levels[0],
                        "absError": r.ground_error(),
                        "relError": r.relative_ground_error(),
                        "nuclearLevels": r.nuclear_levels,
                        "exactLevels": r.exact_levels,
                        "maxElectronicResidual": r.max_electronic_residual,
                    })).collect::<Vec<_>>(),
                })),
            };
            (inputs, output)
        }
        Command::SpectralFunction(a) => {
            let mut inputs = Inputs::new("spectral-function");
            let model = load_model(&mut inputs, &a.model)?;
            let variant: Variant = a.variant.parse().map_err(|e: String| CliError::new(ErrorKind::Usage, e))?;
            let probe: Probe = a.probe.parse().map_err(|e: String| CliError::new(ErrorKind::Usage, e))?;
            inputs.text(&format!("{variant} {probe} {:?} {:?} {:?} {:?}", a.eta, a.omega_max, a.points, a.count));
            let opts = SpectralOptions { eta: a.eta, omega_max: a.omega_max, points: a.points, count: a.count };
            let sf = spectral_function(&model, variant, probe, &opts)?;
            let output = match a.format {
                Format::Csv => Output::Csv(sf.to_csv()),
                Format::Json => Output::Json(spectral_json(&sf)),
            };
            (inputs, output)
        }
    };
    Ok(match output {
        Output::Csv(s) => s,
        Output::Json(result) => {
            let mut report = inputs.report(echo, result);
            if cli.timing {
                report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            report.to_json()
        }
    })
}

enum Output {
    Json(Value),
    Csv(String),
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize to JSON")
}

fn join_f64(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn load_system(inputs: &mut Inputs, path: &Path) -> Result<ParticleSystem, CliError> {
    let doc: SystemDoc = inputs.document(path)?;
    Ok(doc.into_system()?)
}

fn load_map(inputs: &mut Inputs, source: &str, system: &ParticleSystem) -> Result<LinearFrameMap, CliError> {
    if source == "jacobi" {
        inputs.text(source);
        return Ok(LinearFrameMap::jacobi(system));
    }
    let doc: FrameMapDoc = inputs.document(Path::new(source))?;
    let map = doc.into_map()?;
    if map.masses() != system.masses() {
        return Err(CliError::new(ErrorKind::Model, "frame map masses differ from the system"));
    }
    Ok(map)
}

fn load_model(inputs: &mut Inputs, path: &Path) -> Result<GridModel, CliError> {
    let doc: GridDoc = inputs.document(path)?;
    Ok(GridModel::from_doc(doc)?)
}

fn system_json(system: &ParticleSystem) -> Value {
    json!({"dim": system.dim(), "masses": system.masses().iter().map(format_rational).collect::<Vec<_>>()})
}

fn spectrum_csv(s: &SpectrumResult) -> String {
    let mut out = String::from("index,eigenvalue\n");
    for (i, e) in s.eigenvalues.iter().enumerate() {
        out.push_str(&format!("{i},{e:.12e}\n"));
    }
    out
}

fn spectral_json(sf: &SpectralFunction) -> Value {
    json!({
        "variant": sf.variant,
        "probe": sf.probe,
        "eta": sf.eta,
        "points": sf.omega.len(),
        "totalWeight": sf.total_weight,
        "integratedWeight": sf.integrated_weight(),
        "excludedWeight": sf.excluded_weight,
        "dominantPeak": sf.dominant_peak(),
        "satelliteSpacing": sf.satellite_spacing(),
        "poles": sf.poles,
        "omega": sf.omega,
        "density": sf.density,
    })
}
