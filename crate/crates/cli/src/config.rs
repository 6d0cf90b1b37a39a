//! Run configuration: a single JSON document.
//!
//! ```json
//! {
//!   "potential": {"kind": "polynomial", "coeffs": [0, 0, 0, 0, 1]},
//!   "hbar": [0.1, 0.05],
//!   "window": [0.5, 2.0],
//!   "levels": "all",
//!   "weights": [{"type": "potential"}],
//!   "oracle": {"tol": 1e-8},
//!   "output": {"format": "csv"}
//! }
//! ```
//!
//! `potential` may also be a path to a JSON file holding the potential,
//! resolved relative to the config file.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer};

use semiclass::io::Format;
use semiclass::oracle::{OracleOptions, Scheme, DEFAULT_TOL, MAX_INTERVALS};
use semiclass::potential::Domain;
use semiclass::potential::SingularKind;
use semiclass::quantize::BoundaryCondition;
use semiclass::spec::{PotentialSpec, WeightSpec};
use semiclass::Potential;

use crate::CliError;

#[derive(Debug, Clone)]
pub enum PotentialSource {
    Inline(PotentialSpec),
    Path(PathBuf),
}

impl<'de> Deserialize<'de> for PotentialSource {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = PotentialSource;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a potential object or a path to one")
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<Self::Value, E> {
                Ok(PotentialSource::Path(PathBuf::from(s)))
            }

            fn visit_map<A: MapAccess<'de>>(self, map: A) -> Result<Self::Value, A::Error> {
                PotentialSpec::deserialize(de::value::MapAccessDeserializer::new(map)).map(PotentialSource::Inline)
            }
        }
        d.deserialize_any(V)
    }
}

/// `"all"` keeps every level in the window; a list keeps those quantum numbers.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum LevelSelection {
    #[default]
    All,
    List(Vec<u32>),
}

impl LevelSelection {
    pub fn keeps(&self, n: u32) -> bool {
        match self {
            LevelSelection::All => true,
            LevelSelection::List(ns) => ns.contains(&n),
        }
    }
}

impl<'de> Deserialize<'de> for LevelSelection {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Word(String),
            List(Vec<u32>),
        }
        match Raw::deserialize(d)? {
            Raw::Word(w) if w == "all" || w == "all-in-window" => Ok(LevelSelection::All),
            Raw::Word(w) => Err(de::Error::custom(format!(
                "unknown level selection {w:?}, expected \"all\" or a list"
            ))),
            Raw::List(ns) => Ok(LevelSelection::List(ns)),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleConfig {
    pub enabled: bool,
    pub tol: f64,
    pub scheme: Scheme,
    pub max_intervals: usize,
    pub truncation: Option<(f64, f64)>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            tol: DEFAULT_TOL,
            scheme: Scheme::SecondOrder,
            max_intervals: MAX_INTERVALS,
            truncation: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WavefunctionConfig {
    /// Samples per level.
    pub points: usize,
    /// Distance sampled beyond the turning points.
    pub margin: f64,
}

impl Default for WavefunctionConfig {
    fn default() -> Self {
        Self {
            points: 401,
            margin: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// Largest action residual of the oracle levels.
    #[default]
    Residual,
    /// Largest `|lambda_sc - lambda_oracle|`.
    Eigenvalue,
    /// Relative sup-norm eigenfunction error of one level.
    Wavefunction,
    /// Quantum minus classical average of the first weight, one level.
    Observable,
    /// `|psi_oracle(x_+)|` of one level.
    Peak,
}

impl Quantity {
    pub fn label(self) -> &'static str {
        match self {
            Quantity::Residual => "residual",
            Quantity::Eigenvalue => "eigenvalue",
            Quantity::Wavefunction => "wavefunction",
            Quantity::Observable => "observable",
            Quantity::Peak => "peak",
        }
    }

    pub fn single_level(self) -> bool {
        matches!(self, Quantity::Wavefunction | Quantity::Observable | Quantity::Peak)
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScalingConfig {
    pub quantity: Quantity,
    /// Single-level quantities follow the level nearest this energy;
    /// defaults to the window midpoint.
    pub energy: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Format,
}

fn default_weights() -> Vec<WeightSpec> {
    vec![WeightSpec::Potential]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub potential: PotentialSource,
    pub hbar: Vec<f64>,
    pub window: (f64, f64),
    #[serde(default)]
    pub levels: LevelSelection,
    /// Wall condition; half-line potentials only, Dirichlet by default.
    #[serde(default)]
    pub boundary: Option<BoundaryCondition>,
    #[serde(default = "default_weights")]
    pub weights: Vec<WeightSpec>,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default)]
    pub wavefunction: WavefunctionConfig,
    #[serde(default)]
    pub scaling: ScalingConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Which quantization condition applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    Smooth,
    Jump,
    HalfLine(BoundaryCondition),
}

/// A validated configuration with its potential built.
pub struct Run {
    pub config: RunConfig,
    pub potential: Potential,
    pub geometry: Geometry,
}

impl Run {
    pub fn oracle_options(&self) -> OracleOptions {
        let wall = match self.geometry {
            Geometry::HalfLine(bc) => bc,
            _ => BoundaryCondition::Dirichlet,
        };
        OracleOptions {
            tol: self.config.oracle.tol,
            scheme: self.config.oracle.scheme,
            max_intervals: self.config.oracle.max_intervals,
            truncation: self.config.oracle.truncation,
            wall,
        }
    }
}

fn invalid(path: &Path, msg: impl fmt::Display) -> CliError {
    CliError::Config(format!("{}: {msg}", path.display()))
}

fn read_potential(path: &Path) -> Result<PotentialSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(path, e))?;
    serde_json::from_str(&text).map_err(|e| invalid(path, e))
}

pub fn parse(text: &str, path: &Path) -> Result<RunConfig, CliError> {
    serde_json::from_str(text).map_err(|e| invalid(path, e))
}

pub fn load(path: &Path) -> Result<Run, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(path, e))?;
    let config = parse(&text, path)?;
    let spec = match &config.potential {
        PotentialSource::Inline(s) => s.clone(),
        PotentialSource::Path(p) => {
            let p = if p.is_absolute() {
                p.clone()
            } else {
                path.parent().unwrap_or(Path::new(".")).join(p)
            };
            read_potential(&p)?
        }
    };
    let potential = spec.build().map_err(|e| invalid(path, e))?;
    validate(&config, path)?;
    let geometry = match (potential.domain(), config.boundary) {
        (Domain::HalfLine, bc) => Geometry::HalfLine(bc.unwrap_or(BoundaryCondition::Dirichlet)),
        (Domain::FullLine, Some(_)) => return Err(invalid(path, "a boundary condition needs a half-line potential")),
        (Domain::FullLine, None) => {
            if potential.singular_points().iter().any(|s| s.kind == SingularKind::Jump) {
                Geometry::Jump
            } else {
                Geometry::Smooth
            }
        }
    };
    Ok(Run {
        config,
        potential,
        geometry,
    })
}

fn validate(c: &RunConfig, path: &Path) -> Result<(), CliError> {
    if c.hbar.is_empty() {
        return Err(invalid(path, "hbar list is empty"));
    }
    for (i, h) in c.hbar.iter().enumerate() {
        if !(*h > 0.0 && h.is_finite()) {
            return Err(invalid(path, format!("hbar[{i}] = {h} is not positive")));
        }
        if c.hbar[..i].contains(h) {
            return Err(invalid(path, format!("hbar[{i}] = {h} is repeated")));
        }
    }
    let (lo, hi) = c.window;
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(invalid(path, format!("window ({lo}, {hi}) is empty")));
    }
    if !(c.oracle.tol >= 1e-10) {
        return Err(invalid(path, format!("oracle.tol = {} is below 1e-10", c.oracle.tol)));
    }
    if c.wavefunction.points < 2 {
        return Err(invalid(path, "wavefunction.points must be at least 2"));
    }
    if !(c.wavefunction.margin >= 0.0) {
        return Err(invalid(path, "wavefunction.margin must be non-negative"));
    }
    if c.weights.is_empty() {
        return Err(invalid(path, "weights list is empty"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("run.json")
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse(
            r#"{"potential":{"kind":"polynomial","coeffs":[0,0,1]},"hbar":[0.1],"window":[0,2]}"#,
            p(),
        )
        .unwrap();
        assert_eq!(c.levels, LevelSelection::All);
        assert!(c.oracle.enabled);
        assert_eq!(c.oracle.tol, DEFAULT_TOL);
        assert_eq!(c.output.format, Format::Csv);
        assert_eq!(c.weights, vec![WeightSpec::Potential]);
    }

    #[test]
    fn errors_carry_location() {
        let e = parse(
            "{\"potential\": \"v.json\",\n \"hbar\": [0.1],\n \"windw\": [0, 1]}",
            p(),
        )
        .unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("windw") && msg.contains("line 3"), "{msg}");
        let e = parse(
            r#"{"potential":{"kind":"polynomial","cofs":[1]},"hbar":[0.1],"window":[0,1]}"#,
            p(),
        )
        .unwrap_err();
        assert!(e.to_string().contains("cofs"));
    }

    #[test]
    fn level_selection() {
        let c = parse(
            r#"{"potential":"v.json","hbar":[0.1],"window":[0,1],"levels":[0,3]}"#,
            p(),
        )
        .unwrap();
        assert!(c.levels.keeps(3) && !c.levels.keeps(1));
        assert!(parse(
            r#"{"potential":"v.json","hbar":[0.1],"window":[0,1],"levels":"some"}"#,
            p()
        )
        .is_err());
    }

    #[test]
    fn invariants() {
        let base = |hbar: &str, window: &str| {
            let text = format!(r#"{{"potential":"v.json","hbar":{hbar},"window":{window}}}"#);
            validate(&parse(&text, p()).unwrap(), p())
        };
        assert!(base("[0.1, 0.05]", "[0, 1]").is_ok());
        assert!(base("[0.1, 0.1]", "[0, 1]").is_err());
        assert!(base("[-0.1]", "[0, 1]").is_err());
        assert!(base("[]", "[0, 1]").is_err());
        assert!(base("[0.1]", "[1, 1]").is_err());
    }
}
