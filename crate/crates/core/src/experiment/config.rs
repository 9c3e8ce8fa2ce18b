//! Scenario configuration, read from TOML. Every section and key is
//! optional; unknown keys are rejected.
//!
//! ```toml
//! scenario = "fig1c"
//!
//! [model]                 # physical model, used by feasibility, sweep and validate
//! kerr = 18849.55592153876
//!
//! [protocol.fig1c]        # per-scenario knobs
//! r_points = 121
//!
//! [sweep]
//! axes = [{ variable = "r", min = 0.0, max = 2.0, points = 5 }]
//! observables = ["alpha", "big_gamma"]
//!
//! [output]
//! precision = 17
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::sensing::ReadoutSpec;

pub const SCENARIOS: &[(&str, &str)] = &[
    ("fig1c", "anharmonicity, effective decay and their ratio versus squeezing"),
    ("fig2", "Rabi driving of the Fock and squeezed Fock qubits, populations and Wigner snapshots"),
    ("fig3b", "full-space Ramsey traces with finite pulses"),
    ("fig3c", "relative spring-constant sensitivity over Kerr strength and squeezing"),
    ("sm-s1", "pump-frame versus effective-model evolution: populations and Q functions"),
    ("sm-s2", "bias-point population of force sensing over Kerr strength and squeezing"),
    ("feasibility", "physical-unit figures of merit against reference values"),
    ("sweep", "cartesian parameter sweep over model fields"),
];

pub fn is_scenario(name: &str) -> bool {
    SCENARIOS.iter().any(|(n, _)| *n == name)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Option<String>,
    #[serde(default)]
    pub model: ModelParams,
    #[serde(default)]
    pub protocol: ProtocolConfig,
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(name) = &self.scenario {
            if !is_scenario(name) {
                return Err(Error::Config(format!("unknown scenario '{name}'")));
            }
        }
        self.model.validate().map_err(config_error)?;
        self.protocol.validate()?;
        if let Some(s) = &self.sweep {
            s.validate()?;
        }
        if !(1..=17).contains(&self.output.precision) {
            return Err(Error::Config(format!("output.precision must be 1..=17, got {}", self.output.precision)));
        }
        Ok(())
    }

    /// Scenario to run: the command-line choice, which must agree with the
    /// file when both are given.
    pub fn resolve_scenario(&self, requested: Option<&str>) -> Result<String> {
        match (requested, &self.scenario) {
            (Some(r), Some(f)) if r != f => {
                Err(Error::Config(format!("config is for scenario '{f}' but '{r}' was requested")))
            }
            (Some(r), _) if is_scenario(r) => Ok(r.to_string()),
            (Some(r), _) => Err(Error::Config(format!("unknown scenario '{r}'"))),
            (None, Some(f)) => Ok(f.clone()),
            (None, None) => Err(Error::Config("no scenario given".into())),
        }
    }

    /// SHA-256 of the canonical serialization, so formatting and comments in
    /// the source file do not change it.
    pub fn hash(&self) -> String {
        let canonical = toml::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}

fn config_error(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Config(msg()))
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    check(v.is_finite() && v > 0.0, || format!("{name} must be positive, got {v}"))
}

fn range(name: &str, lo: f64, hi: f64) -> Result<()> {
    check(lo.is_finite() && hi.is_finite() && lo <= hi, || format!("{name}: empty range [{lo}, {hi}]"))
}

fn points(name: &str, n: usize, min: usize) -> Result<()> {
    check(n >= min, || format!("{name} needs at least {min} points, got {n}"))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProtocolConfig {
    pub fig1c: Fig1cConfig,
    pub fig2: Fig2Config,
    pub fig3b: Fig3bConfig,
    pub fig3c: Fig3cConfig,
    pub sm_s1: SmS1Config,
    pub sm_s2: SmS2Config,
    pub readout: ReadoutSpec,
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<()> {
        self.fig1c.validate()?;
        self.fig2.validate()?;
        self.fig3b.validate()?;
        self.fig3c.validate()?;
        self.sm_s1.validate()?;
        self.sm_s2.validate()?;
        self.readout.validate().map_err(config_error)
    }
}

/// Closed-form α, Γ and α/Γ over r. Frequencies in units of K.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig1cConfig {
    pub gamma0_over_kerr: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub r_points: usize,
}

impl Default for Fig1cConfig {
    fn default() -> Self {
        Self { gamma0_over_kerr: 20.0, r_min: 0.0, r_max: 3.0, r_points: 121 }
    }
}

impl Fig1cConfig {
    fn validate(&self) -> Result<()> {
        positive("fig1c.gamma0_over_kerr", self.gamma0_over_kerr)?;
        range("fig1c r", self.r_min, self.r_max)?;
        check(self.r_min >= 0.0, || "fig1c.r_min must be ≥ 0".into())?;
        points("fig1c.r_points", self.r_points, 2)
    }
}

/// Resonant Rabi driving. Frequencies in units of K, times in units of 1/Ω_d.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig2Config {
    pub r: f64,
    /// γ₀/K in the decoherence panels.
    pub gamma0_over_kerr: f64,
    /// Ω_d as a fraction of the squeezed-qubit anharmonicity α(r).
    pub rabi_over_alpha: f64,
    /// Window in units of Ω_d t.
    pub phase_max: f64,
    pub time_points: usize,
    /// Levels kept in the Fock-basis panels.
    pub dim: usize,
    /// Levels of mode b kept without and with decoherence.
    pub dim_b: usize,
    pub dim_b_decay: usize,
    /// Keep the reservoir cross terms in the decoherence panel. They rotate at
    /// 2ω_b in the drive frame; dropping them is the secular approximation.
    pub cross_terms: bool,
    /// ω_b/K, needed only when `cross_terms` is set.
    pub omega_b_over_kerr: f64,
    /// Wigner snapshots at these Ω_d t.
    pub snapshots: Vec<f64>,
    /// Half-width and points per side of the quadrature grid.
    pub wigner_half_width: f64,
    pub wigner_points: usize,
}

impl Default for Fig2Config {
    fn default() -> Self {
        Self {
            r: 1.5,
            gamma0_over_kerr: 1.0,
            rabi_over_alpha: 0.05,
            phase_max: 2.0 * std::f64::consts::PI,
            time_points: 121,
            dim: 12,
            dim_b: 8,
            dim_b_decay: 16,
            cross_terms: false,
            omega_b_over_kerr: 1e4,
            snapshots: vec![0.0, std::f64::consts::PI, 2.0 * std::f64::consts::PI],
            wigner_half_width: 6.0,
            wigner_points: 61,
        }
    }
}

impl Fig2Config {
    fn validate(&self) -> Result<()> {
        check(self.r >= 0.0 && self.r.is_finite(), || "fig2.r must be ≥ 0".into())?;
        check(self.gamma0_over_kerr >= 0.0, || "fig2.gamma0_over_kerr must be ≥ 0".into())?;
        positive("fig2.rabi_over_alpha", self.rabi_over_alpha)?;
        positive("fig2.phase_max", self.phase_max)?;
        positive("fig2.omega_b_over_kerr", self.omega_b_over_kerr)?;
        points("fig2.time_points", self.time_points, 2)?;
        points("fig2.dim", self.dim, 4)?;
        points("fig2.dim_b", self.dim_b, 4)?;
        points("fig2.dim_b_decay", self.dim_b_decay, 4)?;
        check(self.snapshots.iter().all(|s| (0.0..=self.phase_max).contains(s)), || {
            "fig2.snapshots must lie inside the time window".into()
        })?;
        positive("fig2.wigner_half_width", self.wigner_half_width)?;
        points("fig2.wigner_points", self.wigner_points, 2)
    }
}

/// Full-space Ramsey traces. Frequencies in units of Ω_{π/2}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig3bConfig {
    pub kerr_values: Vec<f64>,
    pub r_values: Vec<f64>,
    pub gamma0: f64,
    /// Fringe frequency in the simulation frame.
    pub detuning: f64,
    pub t_max: f64,
    pub time_points: usize,
    pub dim: usize,
    pub cross_terms: bool,
}

impl Default for Fig3bConfig {
    fn default() -> Self {
        Self {
            kerr_values: vec![0.1, 1.0],
            r_values: vec![0.0, 1.5],
            gamma0: 1.0,
            detuning: 0.0,
            t_max: 4.0,
            time_points: 41,
            dim: 10,
            cross_terms: false,
        }
    }
}

impl Fig3bConfig {
    fn validate(&self) -> Result<()> {
        check(!self.kerr_values.is_empty() && self.kerr_values.iter().all(|k| *k >= 0.0), || {
            "fig3b.kerr_values must be a non-empty list of values ≥ 0".into()
        })?;
        check(!self.r_values.is_empty() && self.r_values.iter().all(|r| *r >= 0.0), || {
            "fig3b.r_values must be a non-empty list of values ≥ 0".into()
        })?;
        check(self.gamma0 >= 0.0, || "fig3b.gamma0 must be ≥ 0".into())?;
        positive("fig3b.t_max", self.t_max)?;
        points("fig3b.time_points", self.time_points, 2)?;
        points("fig3b.dim", self.dim, 3)
    }
}

/// δk_min/δk₀ and α/Γ over a (K/γ₀, r) grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig3cConfig {
    pub kerr_min: f64,
    pub kerr_max: f64,
    pub kerr_points: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub r_points: usize,
}

impl Default for Fig3cConfig {
    fn default() -> Self {
        Self { kerr_min: 0.1, kerr_max: 10.0, kerr_points: 41, r_min: 0.0, r_max: 2.0, r_points: 41 }
    }
}

impl Fig3cConfig {
    fn validate(&self) -> Result<()> {
        positive("fig3c.kerr_min", self.kerr_min)?;
        range("fig3c kerr", self.kerr_min, self.kerr_max)?;
        range("fig3c r", self.r_min, self.r_max)?;
        check(self.r_min >= 0.0, || "fig3c.r_min must be ≥ 0".into())?;
        points("fig3c.kerr_points", self.kerr_points, 1)?;
        points("fig3c.r_points", self.r_points, 1)
    }
}

/// Pump-frame model with bare decay versus the effective model with the
/// squeezed reservoir, from `|1⟩_S`. Frequencies in units of δ_a.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SmS1Config {
    pub r: f64,
    pub kerr: f64,
    pub gamma0: f64,
    /// Window in units of 1/Γ.
    pub window: f64,
    pub time_points: usize,
    /// Fock levels of mode a in the pump-frame run.
    pub dim: usize,
    /// Levels of mode b in the effective run.
    pub dim_b: usize,
    pub q_half_width: f64,
    pub q_points: usize,
}

impl Default for SmS1Config {
    fn default() -> Self {
        Self {
            r: 1.0,
            kerr: 1e-4,
            gamma0: 0.01,
            window: 1.0,
            time_points: 41,
            dim: 148,
            dim_b: 6,
            q_half_width: 4.0,
            q_points: 41,
        }
    }
}

impl SmS1Config {
    fn validate(&self) -> Result<()> {
        check(self.r >= 0.0 && self.r < 3.0, || "sm_s1.r must lie in [0, 3)".into())?;
        check(self.kerr >= 0.0, || "sm_s1.kerr must be ≥ 0".into())?;
        positive("sm_s1.gamma0", self.gamma0)?;
        positive("sm_s1.window", self.window)?;
        points("sm_s1.time_points", self.time_points, 2)?;
        points("sm_s1.dim", self.dim, 8)?;
        points("sm_s1.dim_b", self.dim_b, 3)?;
        check(self.dim_b <= self.dim, || "sm_s1.dim_b must not exceed sm_s1.dim".into())?;
        positive("sm_s1.q_half_width", self.q_half_width)?;
        points("sm_s1.q_points", self.q_points, 2)
    }
}

/// Force-sensing bias-point population over (K, r). Frequencies in units of ω_F.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SmS2Config {
    pub omega_b: f64,
    pub kerr_min: f64,
    pub kerr_max: f64,
    pub kerr_points: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub r_points: usize,
    pub dim: usize,
}

impl Default for SmS2Config {
    fn default() -> Self {
        Self { omega_b: 0.1, kerr_min: 0.1, kerr_max: 10.0, kerr_points: 21, r_min: 0.0, r_max: 2.0, r_points: 21, dim: 12 }
    }
}

impl SmS2Config {
    fn validate(&self) -> Result<()> {
        check(self.omega_b >= 0.0, || "sm_s2.omega_b must be ≥ 0".into())?;
        positive("sm_s2.kerr_min", self.kerr_min)?;
        range("sm_s2 kerr", self.kerr_min, self.kerr_max)?;
        range("sm_s2 r", self.r_min, self.r_max)?;
        check(self.r_min >= 0.0, || "sm_s2.r_min must be ≥ 0".into())?;
        points("sm_s2.kerr_points", self.kerr_points, 1)?;
        points("sm_s2.r_points", self.r_points, 1)?;
        points("sm_s2.dim", self.dim, 3)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub variable: String,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl AxisSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let n = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let f = i as f64 / n;
                match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * f,
                    Spacing::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * f).exp(),
                }
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        range(&format!("sweep axis '{}'", self.variable), self.min, self.max)?;
        points(&format!("sweep axis '{}'", self.variable), self.points, 1)?;
        if self.spacing == Spacing::Log {
            positive(&format!("log axis '{}' minimum", self.variable), self.min)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axes: Vec<AxisSpec>,
    pub observables: Vec<String>,
}

impl SweepConfig {
    fn validate(&self) -> Result<()> {
        check(!self.axes.is_empty(), || "sweep needs at least one axis".into())?;
        check(!self.observables.is_empty(), || "sweep needs at least one observable".into())?;
        for a in &self.axes {
            a.validate()?;
            check(super::sweep::SWEEP_VARIABLES.iter().any(|(v, _)| *v == a.variable), || {
                format!("sweep axis references unknown field '{}'", a.variable)
            })?;
        }
        for o in &self.observables {
            check(super::sweep::OBSERVABLES.iter().any(|(v, _)| *v == o), || format!("unknown observable '{o}'"))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Significant digits in CSV values.
    pub precision: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { precision: 17 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_all_defaults() {
        let cfg = ScenarioConfig::from_toml("").unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
        assert_eq!(cfg.output.precision, 17);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(ScenarioConfig::from_toml("bogus = 1"), Err(Error::Config(_))));
        assert!(ScenarioConfig::from_toml("[model]\nomega = 1.0").is_err());
        assert!(ScenarioConfig::from_toml("[protocol.fig1c]\nr_pts = 3").is_err());
        assert!(ScenarioConfig::from_toml("scenario = \"fig9\"").is_err());
    }

    #[test]
    fn sweep_axes_must_name_known_fields() {
        let bad = "[sweep]\naxes = [{ variable = \"colour\", min = 0.0, max = 1.0, points = 2 }]\nobservables = [\"alpha\"]";
        let err = ScenarioConfig::from_toml(bad).unwrap_err();
        assert!(err.to_string().contains("colour"));
        let good = "[sweep]\naxes = [{ variable = \"r\", min = 0.0, max = 1.0, points = 2 }]\nobservables = [\"alpha\"]";
        assert!(ScenarioConfig::from_toml(good).is_ok());
    }

    #[test]
    fn hash_ignores_formatting() {
        let a = ScenarioConfig::from_toml("scenario = \"fig1c\"\n[protocol.fig1c]\nr_points = 11\n").unwrap();
        let b = ScenarioConfig::from_toml("# comment\nscenario='fig1c'\n\n[protocol.fig1c]\nr_points=11 # eleven\n").unwrap();
        assert_eq!(a.hash(), b.hash());
        let c = ScenarioConfig::from_toml("scenario = \"fig1c\"\n[protocol.fig1c]\nr_points = 12\n").unwrap();
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn scenario_resolution() {
        let cfg = ScenarioConfig::from_toml("scenario = \"fig2\"").unwrap();
        assert_eq!(cfg.resolve_scenario(None).unwrap(), "fig2");
        assert_eq!(cfg.resolve_scenario(Some("fig2")).unwrap(), "fig2");
        assert!(cfg.resolve_scenario(Some("fig3b")).is_err());
        assert!(ScenarioConfig::default().resolve_scenario(None).is_err());
    }

    #[test]
    fn log_axis() {
        let a = AxisSpec { variable: "kerr".into(), min: 0.1, max: 10.0, points: 3, spacing: Spacing::Log };
        let v = a.values();
        assert!((v[1] - 1.0).abs() < 1e-15);
        assert!((v[2] - 10.0).abs() < 1e-12);
    }
}
