//! TOML run description for the `sg-sim` command.
//!
//! ```toml
//! mode = "decoupled"          # decoupled | coupled | eraser | profile
//!
//! [grid]
//! ny = 512
//! nz = 512
//! y_extent = 80.0
//! z_extent = 80.0
//!
//! [field]
//! mu = 1.0
//! gradient = 0.5              # b0
//! bias_ratio = 1000.0         # or: bias = <B0>
//!
//! [packet]                    # optional, defaults shown
//! y0 = 0.0
//! z0 = 0.0
//! sigma_y = 1.0
//! sigma_z = 1.0
//! py0 = 0.0
//! pz0 = 0.0
//!
//! [spin]                      # spin-½ direction of the incoming packet
//! theta = 1.5707963267948966
//! phi = 0.0
//!
//! [run]
//! dt = 8e-4
//! steps = 10000
//! record_every = 100
//! ```

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinError};
use crate::halfint::HalfInt;
use crate::sg_dynamics::eraser::{eraser_recombine, EraserOutcome, EraserProtocol};
use crate::sg_dynamics::field::{spinor_along, FieldConfig, PacketSpec, ScalingRecord, SpinorField, TrajectoryRecord};
use crate::sg_dynamics::grid::Grid2D;
use crate::sg_dynamics::profile::{large_spin_sg_profile, SgProfile};
use crate::sg_dynamics::solver::{evolve_coupled, evolve_decoupled, RunSpec};
use crate::spin_core::{coherent_state, random_state, Direction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunMode {
    Decoupled,
    Coupled,
    Eraser,
    Profile,
}

fn one() -> f64 {
    1.0
}

fn default_threshold() -> f64 {
    crate::sg_dynamics::DEFAULT_DECOUPLING_THRESHOLD
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    #[serde(default = "one")]
    pub mu: f64,
    pub gradient: f64,
    pub bias: Option<f64>,
    /// `B₀ / (|b₀|·y_half)`; needs a grid.
    pub bias_ratio: Option<f64>,
    #[serde(default = "one")]
    pub mass: f64,
    #[serde(default = "default_threshold")]
    pub decoupling_threshold: f64,
    #[serde(default)]
    pub scaling: Option<ScalingRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpinSection {
    pub theta: f64,
    pub phi: f64,
}

impl Default for SpinSection {
    fn default() -> Self {
        SpinSection { theta: std::f64::consts::FRAC_PI_2, phi: 0.0 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EraserSection {
    pub protocol: EraserProtocol,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileState {
    #[default]
    Coherent,
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSection {
    /// Spin quantum number, e.g. `"13/2"` or `"1000"`.
    pub j: HalfInt,
    #[serde(default)]
    pub state: ProfileState,
    #[serde(default = "default_theta")]
    pub theta: f64,
    #[serde(default)]
    pub phi: f64,
    #[serde(default)]
    pub seed: u64,
    pub time: f64,
    pub z_min: f64,
    pub z_max: f64,
    #[serde(default = "default_points")]
    pub points: usize,
}

fn default_theta() -> f64 {
    std::f64::consts::FRAC_PI_2
}

fn default_points() -> usize {
    2001
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: RunMode,
    pub grid: Option<Grid2D>,
    pub field: FieldSection,
    #[serde(default)]
    pub packet: PacketSpec,
    #[serde(default)]
    pub spin: SpinSection,
    pub run: Option<RunSpec>,
    #[serde(default)]
    pub eraser: EraserSection,
    pub profile: Option<ProfileSection>,
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| SpinError::config(format!("invalid run configuration: {e}")))
    }

    pub fn field_config(&self) -> Result<FieldConfig> {
        let f = &self.field;
        let bias = match (f.bias, f.bias_ratio) {
            (Some(b), None) => b,
            (None, Some(r)) => {
                let g = self.grid.ok_or_else(|| SpinError::config("bias_ratio needs a [grid] section"))?;
                r * f.gradient.abs() * g.y_half()
            }
            (None, None) => 0.0,
            (Some(_), Some(_)) => return Err(SpinError::config("give either field.bias or field.bias_ratio, not both")),
        };
        let cfg = FieldConfig {
            bias,
            gradient: f.gradient,
            mu: f.mu,
            mass: f.mass,
            decoupling_threshold: f.decoupling_threshold,
            scaling: f.scaling.clone().unwrap_or_default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn initial_field(&self) -> Result<SpinorField> {
        let grid = self.grid.ok_or_else(|| SpinError::config("this mode needs a [grid] section"))?;
        SpinorField::gaussian(grid, &self.packet, spinor_along(Direction::new(self.spin.theta, self.spin.phi)))
    }

    fn run_spec(&self) -> Result<RunSpec> {
        self.run.ok_or_else(|| SpinError::config("this mode needs a [run] section"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RunOutput {
    Trajectory { record: TrajectoryRecord, final_field: SpinorField },
    Eraser(EraserOutcome),
    Profile(SgProfile),
}

impl RunOutput {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let io = |e: csv::Error| SpinError::Numeric(format!("write failed: {e}"));
        match self {
            RunOutput::Trajectory { record, .. } => record.write_csv(w),
            RunOutput::Eraser(o) => {
                let mut out = csv::Writer::from_writer(w);
                out.write_record(["protocol", "fidelity", "reference_overlap", "separation_at_turn", "final_separation"])
                    .map_err(io)?;
                let proto = serde_json::to_value(o.protocol).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                out.write_record([
                    proto,
                    format!("{:.11e}", o.fidelity),
                    format!("{:.11e}", o.reference_overlap),
                    format!("{:.11e}", o.separation_at_turn),
                    format!("{:.11e}", o.final_separation),
                ])
                .map_err(io)?;
                out.flush().map_err(|e| SpinError::Numeric(format!("write failed: {e}")))
            }
            RunOutput::Profile(p) => {
                let mut out = csv::Writer::from_writer(w);
                out.write_record(["z", "intensity"]).map_err(io)?;
                for (z, i) in p.z.iter().zip(&p.intensity) {
                    out.write_record([format!("{z:.11e}"), format!("{i:.11e}")]).map_err(io)?;
                }
                out.flush().map_err(|e| SpinError::Numeric(format!("write failed: {e}")))
            }
        }
    }

    /// Key scalar results for the run manifest.
    pub fn summary(&self) -> serde_json::Value {
        match self {
            RunOutput::Trajectory { record, final_field } => serde_json::json!({
                "records": record.len(),
                "final_time": final_field.time,
                "population_transfer": record.population_transfer(),
                "max_norm_drift": record.max_norm_drift(),
                "pz_slope_up": record.pz_slope(0),
                "pz_slope_down": record.pz_slope(1),
            }),
            RunOutput::Eraser(o) => serde_json::to_value(o).unwrap_or_default(),
            RunOutput::Profile(p) => serde_json::json!({
                "z_j": p.z_j, "sigma_t": p.sigma_t, "mean": p.mean(), "std": p.std(),
            }),
        }
    }
}

pub fn run_config(cfg: &RunConfig) -> Result<RunOutput> {
    let field = cfg.field_config()?;
    match cfg.mode {
        RunMode::Decoupled | RunMode::Coupled => {
            let init = cfg.initial_field()?;
            let spec = cfg.run_spec()?;
            let (final_field, record) = if cfg.mode == RunMode::Decoupled {
                evolve_decoupled(&init, &field, &spec)?
            } else {
                evolve_coupled(&init, &field, &spec)?
            };
            Ok(RunOutput::Trajectory { record, final_field })
        }
        RunMode::Eraser => {
            let init = cfg.initial_field()?;
            Ok(RunOutput::Eraser(eraser_recombine(&init, &field, &cfg.run_spec()?, cfg.eraser.protocol)?))
        }
        RunMode::Profile => {
            let p = cfg.profile.as_ref().ok_or_else(|| SpinError::config("profile mode needs a [profile] section"))?;
            if p.points < 2 || !(p.z_max > p.z_min) {
                return Err(SpinError::config("profile needs z_max > z_min and at least 2 points"));
            }
            let state = match p.state {
                ProfileState::Coherent => coherent_state(p.j, Direction::new(p.theta, p.phi)),
                ProfileState::Random => random_state(p.j, p.seed),
            };
            let z: Vec<f64> = (0..p.points).map(|i| p.z_min + (p.z_max - p.z_min) * i as f64 / (p.points - 1) as f64).collect();
            Ok(RunOutput::Profile(large_spin_sg_profile(&state, &field, p.time, &z)?))
        }
    }
}
