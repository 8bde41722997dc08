//! Experiment configuration: a single human-editable TOML file, schema
//! validated, with explicit defaults echoed into the run manifest.

use crate::dynamics::{DtPolicy, InitialData};
use crate::error::{Error, Result};
use crate::flux::{
    check_admissibility, AdmissibilityReport, FluxSpec, GFunction, ShockData, TransverseFlux,
};
use crate::grid::Grid;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub flux: FluxSection,
    pub shock: ShockSection,
    pub grid: GridSection,
    pub time: TimeSection,
    pub initial: InitialData,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub tolerances: ToleranceSection,
    #[serde(default)]
    pub fit: FitSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluxSection {
    pub a: f64,
    #[serde(default = "default_g")]
    pub g: GFunction,
    /// Caller-asserted ‖g″‖∞ bound; defaults to the closed-form bound of the
    /// g family when it has one.
    #[serde(default)]
    pub g2_bound: Option<f64>,
    #[serde(default)]
    pub transverse: Vec<TransverseFlux>,
}

fn default_g() -> GFunction {
    GFunction::Zero
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShockSection {
    pub u_minus: f64,
    pub u_plus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub l: f64,
    pub n_xi: usize,
    #[serde(default = "default_n_dims")]
    pub n_dims: usize,
    pub n_t: usize,
}

fn default_n_dims() -> usize {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    /// `"auto"` or a fixed positive step.
    #[serde(default = "default_dt", with = "dt_policy_serde")]
    pub dt: DtPolicy,
    pub t_final: f64,
    #[serde(default = "default_diag_every")]
    pub diag_every: u64,
}

fn default_dt() -> DtPolicy {
    DtPolicy::Auto
}

fn default_diag_every() -> u64 {
    100
}

mod dt_policy_serde {
    use super::DtPolicy;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(dt: &DtPolicy, s: S) -> Result<S::Ok, S::Error> {
        match dt {
            DtPolicy::Auto => s.serialize_str("auto"),
            DtPolicy::Fixed(v) => s.serialize_f64(*v),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DtPolicy, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Num(f64),
        }
        match Raw::deserialize(d)? {
            Raw::Str(s) if s == "auto" => Ok(DtPolicy::Auto),
            Raw::Str(s) => Err(D::Error::custom(format!(
                "dt must be \"auto\" or a number, got {s:?}"
            ))),
            Raw::Num(v) => Ok(DtPolicy::Fixed(v)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Run directory; overridable by `--out` and the SHOCKLAB_OUT env root.
    #[serde(default)]
    pub dir: Option<String>,
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSection {
    /// Override for the dissipation-residual tolerance; default is
    /// 10 (h_ξ² + dt²) · ‖u0 − ũ‖²_{L²} from the convergence calibration.
    #[serde(default)]
    pub tol_residual: Option<f64>,
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
}

fn default_tail_tol() -> f64 {
    1e-6
}

impl Default for ToleranceSection {
    fn default() -> Self {
        ToleranceSection {
            tol_residual: None,
            tail_tol: default_tail_tol(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSection {
    #[serde(default = "default_t_min")]
    pub t_min: f64,
}

fn default_t_min() -> f64 {
    1.0
}

impl Default for FitSection {
    fn default() -> Self {
        FitSection {
            t_min: default_t_min(),
        }
    }
}

/// Config with the domain objects constructed and cross-checked.
#[derive(Debug, Clone)]
pub struct ValidatedExperiment {
    pub config: ExperimentConfig,
    pub flux: FluxSpec,
    pub shock: ShockData,
    pub grid: Grid,
    pub initial: InitialData,
    pub dt_policy: DtPolicy,
    pub admissibility: AdmissibilityReport,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<ExperimentConfig> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Builds and cross-checks the domain objects. The asserted ‖g″‖∞ bound
    /// is spot-checked by dense sampling on [u₊ − 1, u₋ + 1] (the dynamic
    /// range granted by the maximum principle, with unit headroom).
    pub fn validate(&self) -> Result<ValidatedExperiment> {
        let flux = FluxSpec::new(
            self.flux.a,
            self.flux.g.clone(),
            self.flux.g2_bound,
            self.flux.transverse.clone(),
        )?;
        let shock = ShockData::new(&flux, self.shock.u_minus, self.shock.u_plus)?;
        let lo = self.shock.u_plus.min(self.shock.u_minus) - 1.0;
        let hi = self.shock.u_plus.max(self.shock.u_minus) + 1.0;
        flux.verify_g2_bound(lo, hi, 4096)?;
        flux.verify_transverse_lipschitz(lo, hi, 1024)?;
        let grid = Grid::new(self.grid.l, self.grid.n_xi, self.grid.n_dims, self.grid.n_t)?;
        if !(self.time.t_final > 0.0) || !self.time.t_final.is_finite() {
            return Err(Error::Config(format!(
                "t_final must be positive, got {}",
                self.time.t_final
            )));
        }
        if self.time.diag_every == 0 {
            return Err(Error::Config("diag_every must be at least 1".into()));
        }
        if !(self.fit.t_min > 0.0) {
            return Err(Error::Config(format!(
                "fit t_min must be positive, got {}",
                self.fit.t_min
            )));
        }
        for &st in &self.output.snapshot_times {
            if !(0.0..=self.time.t_final).contains(&st) {
                return Err(Error::Config(format!(
                    "snapshot time {st} outside [0, t_final = {}]",
                    self.time.t_final
                )));
            }
        }
        let admissibility = check_admissibility(&flux, &shock);
        Ok(ValidatedExperiment {
            config: self.clone(),
            flux,
            shock,
            grid,
            initial: self.initial.clone(),
            dt_policy: self.time.dt,
            admissibility,
        })
    }
}

impl InitialData {
    /// Replaces the RNG seed where the family has one.
    pub fn with_seed(self, seed: u64) -> InitialData {
        match self {
            InitialData::RandomSmooth {
                amplitude,
                center,
                width,
                edge,
                modes,
                ..
            } => InitialData::RandomSmooth {
                amplitude,
                center,
                width,
                edge,
                modes,
                seed,
            },
            other => other,
        }
    }
}
