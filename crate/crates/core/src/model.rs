//! Model parameters, derived squeezed-frame quantities and Hamiltonian builders
//! for the two-phonon driven Kerr resonator.
//!
//! Three pictures appear:
//! * lab frame, `ω_a a†a + K a†a†aa + Ω_p cos(2ω_p t)·X²`;
//! * frame rotating at the pump half-frequency ω_p,
//!   `δ_a a†a + K a†a†aa + (Ω_p/2)(e^{−iθ}a² + e^{iθ}a†²)`;
//! * the Bogoliubov mode `b = cosh r·a + e^{iθ} sinh r·a†`, where after the
//!   rotating-wave approximation `H = ω_b b†b + U_b b†b†bb`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{self, Operator};
use crate::units::{self, HBAR};

/// How ħ enters the reported (not the dynamical) quantities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HbarMode {
    /// SI value of ħ; lengths in m, spring constants in N/m, forces in N.
    #[default]
    Si,
    /// ħ = 1 throughout.
    Natural,
}

impl HbarMode {
    pub fn hbar(self) -> f64 {
        match self {
            HbarMode::Si => HBAR,
            HbarMode::Natural => 1.0,
        }
    }
}

/// Physical inputs. Frequencies are angular (rad/s).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelParams {
    pub omega_a: f64,
    pub kerr: f64,
    pub gamma0: f64,
    /// Half the pump frequency; the drive oscillates at 2ω_p.
    pub omega_p: f64,
    /// Two-phonon drive amplitude Ω_p.
    pub drive_amp: f64,
    pub theta: f64,
    /// Resonator mass, kg.
    pub mass: f64,
    pub dim: usize,
    pub hbar_mode: HbarMode,
}

impl Default for ModelParams {
    /// Feasibility point: ω_a/2π = 600 MHz, K/2π = γ₀/2π = 3 kHz, m = 1e−21 kg,
    /// r = 1.5 with the pump tuned so that ω_b/2π = 4.2 MHz.
    fn default() -> Self {
        Self::for_target_omega_b(
            units::angular(600e6),
            units::angular(3e3),
            units::angular(3e3),
            1.5,
            PI,
            units::angular(4.2e6),
            1e-21,
            64,
        )
        .expect("default feasibility parameters are consistent")
    }
}

/// `8 cosh²r sinh²r + 4 sinh⁴r`, the Kerr-induced shift of ω_b in units of K.
pub fn kerr_shift_factor(r: f64) -> f64 {
    let (c, s) = (r.cosh(), r.sinh());
    8.0 * c * c * s * s + 4.0 * s.powi(4)
}

/// `U_b/K = [3 cosh 4r + 1]/4`.
pub fn kerr_enhancement(r: f64) -> f64 {
    (3.0 * (4.0 * r).cosh() + 1.0) / 4.0
}

impl ModelParams {
    /// Back-solve the pump so that the squeezed mode has squeezing `r` and
    /// frequency `omega_b`: `δ_a = (ω_b − K f(r)) cosh 2r`, `Ω_p = δ_a tanh 2r`.
    #[allow(clippy::too_many_arguments)]
    pub fn for_target_omega_b(
        omega_a: f64,
        kerr: f64,
        gamma0: f64,
        r: f64,
        theta: f64,
        omega_b: f64,
        mass: f64,
        dim: usize,
    ) -> Result<Self> {
        let bare = omega_b - kerr * kerr_shift_factor(r);
        if bare <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "target ω_b = {omega_b} is below the Kerr shift {}",
                kerr * kerr_shift_factor(r)
            )));
        }
        let delta_a = bare * (2.0 * r).cosh();
        let p = Self {
            omega_a,
            kerr,
            gamma0,
            omega_p: omega_a - delta_a,
            drive_amp: delta_a * (2.0 * r).tanh(),
            theta,
            mass,
            dim,
            hbar_mode: HbarMode::Si,
        };
        p.validate()?;
        Ok(p)
    }

    /// Dimensionless model in the pump frame: `δ_a`, `K`, `γ₀` given directly
    /// and `ω_a` set to `omega_a`; the pump amplitude realizes squeezing `r`.
    pub fn dimensionless(delta_a: f64, kerr: f64, gamma0: f64, r: f64, omega_a: f64, dim: usize) -> Self {
        Self {
            omega_a,
            kerr,
            gamma0,
            omega_p: omega_a - delta_a,
            drive_amp: delta_a * (2.0 * r).tanh(),
            theta: PI,
            mass: 1.0,
            dim,
            hbar_mode: HbarMode::Natural,
        }
    }

    pub fn delta_a(&self) -> f64 {
        self.omega_a - self.omega_p
    }

    pub fn hbar(&self) -> f64 {
        self.hbar_mode.hbar()
    }

    /// Same detuning, pump amplitude rescaled to give squeezing `r`.
    pub fn with_squeezing(&self, r: f64) -> Self {
        Self { drive_amp: self.delta_a() * (2.0 * r).tanh(), ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.omega_a, self.kerr, self.gamma0, self.omega_p, self.drive_amp, self.theta, self.mass]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("model parameters must be finite".into()));
        }
        if self.omega_a <= 0.0 {
            return Err(Error::InvalidParameter(format!("omega_a must be positive, got {}", self.omega_a)));
        }
        if self.gamma0 < 0.0 {
            return Err(Error::InvalidParameter(format!("gamma0 must be ≥ 0, got {}", self.gamma0)));
        }
        if self.mass <= 0.0 {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {}", self.mass)));
        }
        if self.dim < 2 {
            return Err(Error::InvalidDimension { dim: self.dim });
        }
        Ok(())
    }
}

/// `r = atanh(Ω_p/δ_a)/2`.
pub fn squeezing_from_drive(delta_a: f64, drive_amp: f64) -> Result<f64> {
    if delta_a == 0.0 {
        return Err(Error::UnstableDrive { ratio: f64::INFINITY });
    }
    let ratio = drive_amp / delta_a;
    if !ratio.is_finite() || ratio.abs() >= 1.0 {
        return Err(Error::UnstableDrive { ratio: ratio.abs() });
    }
    Ok(ratio.atanh() / 2.0)
}

/// Quantities derived from [`ModelParams`] in the squeezed frame.
#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveParams {
    pub r: f64,
    /// Bogoliubov phase: `b = cosh r·a + e^{iθ} sinh r·a†`.
    pub theta: f64,
    pub delta_a: f64,
    pub omega_b: f64,
    pub u_b: f64,
    pub alpha: f64,
    pub big_gamma: f64,
    pub n_sq: f64,
    pub m_sq: C64,
    pub x_zpf: f64,
    pub kerr: f64,
    pub gamma0: f64,
    pub hbar: f64,
}

impl EffectiveParams {
    /// Squeezed-frame quantities from a squeezing parameter directly, bypassing
    /// the pump. `omega_b` is taken as given.
    pub fn from_squeezing(r: f64, theta: f64, omega_b: f64, kerr: f64, gamma0: f64, x_zpf: f64, hbar: f64) -> Self {
        let (c, s) = (r.cosh(), r.sinh());
        let u_b = kerr * kerr_enhancement(r);
        Self {
            r,
            theta,
            delta_a: omega_b * (2.0 * r).cosh(),
            omega_b,
            u_b,
            alpha: 2.0 * u_b,
            big_gamma: gamma0 * (2.0 * r).cosh(),
            n_sq: s * s,
            m_sq: C64::from_polar(c * s, -theta),
            x_zpf,
            kerr,
            gamma0,
            hbar,
        }
    }

    /// `1/cosh 2r`.
    pub fn kappa(&self) -> f64 {
        1.0 / (2.0 * self.r).cosh()
    }
}

/// Derived squeezed-frame parameters.
///
/// A negative drive-to-detuning ratio is folded into `r ≥ 0` with the
/// Bogoliubov phase shifted by π.
pub fn effective_params(params: &ModelParams) -> Result<EffectiveParams> {
    params.validate()?;
    let delta_a = params.delta_a();
    if delta_a <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "detuning δ_a = ω_a − ω_p must be positive, got {delta_a}"
        )));
    }
    let signed = squeezing_from_drive(delta_a, params.drive_amp)?;
    let (r, theta) = if signed < 0.0 { (-signed, params.theta + PI) } else { (signed, params.theta) };
    let omega_b = (delta_a * delta_a - params.drive_amp * params.drive_amp).sqrt() + params.kerr * kerr_shift_factor(r);
    let hbar = params.hbar();
    let x_zpf = (hbar / (2.0 * params.mass * params.omega_a)).sqrt();
    let mut eff = EffectiveParams::from_squeezing(r, theta, omega_b, params.kerr, params.gamma0, x_zpf, hbar);
    eff.delta_a = delta_a;
    Ok(eff)
}

/// Size of the terms dropped by the rotating-wave approximation relative to
/// the rotation rates they oscillate at.
#[derive(Clone, Debug, PartialEq)]
pub struct RwaReport {
    /// `K sinh²2r/4 ÷ 4ω_b` (b⁴ terms), `K sinh 4r/2 ÷ 2ω_b` (b†b† terms),
    /// `K sinh 2r (3cosh 2r − 2)/2 ÷ 2ω_b` (b†b†b†b-type terms).
    pub ratios: [f64; 3],
    pub threshold: f64,
    pub passes: [bool; 3],
}

impl RwaReport {
    pub fn all_pass(&self) -> bool {
        self.passes.iter().all(|&p| p)
    }

    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().copied().fold(0.0, f64::max)
    }
}

pub const DEFAULT_RWA_THRESHOLD: f64 = 0.05;

pub fn rwa_ratios(r: f64, kerr: f64, omega_b: f64) -> [f64; 3] {
    let k = kerr.abs();
    let s2 = (2.0 * r).sinh();
    let c2 = (2.0 * r).cosh();
    [
        k * s2 * s2 / 4.0 / (4.0 * omega_b),
        k * (4.0 * r).sinh() / 2.0 / (2.0 * omega_b),
        k * s2 * (3.0 * c2 - 2.0) / 2.0 / (2.0 * omega_b),
    ]
}

pub fn rwa_report(params: &ModelParams, threshold: f64) -> Result<RwaReport> {
    let eff = effective_params(params)?;
    let ratios = rwa_ratios(eff.r, params.kerr, eff.omega_b);
    Ok(RwaReport { ratios, threshold, passes: ratios.map(|x| x < threshold) })
}

/// `X = e^{−iθ/2} a + e^{iθ/2} a†`; `X²` carries the pump in the lab frame.
fn pump_quadrature(dim: usize, theta: f64) -> Result<Operator> {
    let a = fock::annihilation(dim)?;
    Ok(&(&a * C64::from_polar(1.0, -theta / 2.0)) + &(&a.dagger() * C64::from_polar(1.0, theta / 2.0)))
}

/// Static and pump parts of the lab-frame Hamiltonian:
/// `H(t) = H₀ + Ω_p cos(2ω_p t)·X²`.
pub fn hamiltonian_lab_parts(params: &ModelParams) -> Result<(Operator, Operator)> {
    params.validate()?;
    let dim = params.dim;
    let h0 = &(&fock::number(dim)? * params.omega_a) + &(&fock::kerr(dim)? * params.kerr);
    let x = pump_quadrature(dim, params.theta)?;
    Ok((h0, &(&x * &x) * params.drive_amp))
}

pub fn hamiltonian_lab(params: &ModelParams, t: f64) -> Result<Operator> {
    let (h0, pump) = hamiltonian_lab_parts(params)?;
    Ok(&h0 + &(&pump * (2.0 * params.omega_p * t).cos()))
}

/// Pump-frame Hamiltonian `δ_a a†a + K a†a†aa + (Ω_p/2)(e^{−iθ}a² + e^{iθ}a†²)`.
pub fn hamiltonian_rot(params: &ModelParams) -> Result<Operator> {
    params.validate()?;
    let dim = params.dim;
    let a = fock::annihilation(dim)?;
    let a2 = &a * &a;
    let pump = &(&a2 * C64::from_polar(params.drive_amp / 2.0, -params.theta))
        + &(&a2.dagger() * C64::from_polar(params.drive_amp / 2.0, params.theta));
    Ok(&(&(&fock::number(dim)? * params.delta_a()) + &(&fock::kerr(dim)? * params.kerr)) + &pump)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Frame {
    /// Fock basis of the Bogoliubov mode b.
    ModeB,
    /// Fock basis of the bare mode a; the effective Hamiltonian is `S H_b S†`.
    ModeA,
}

/// `ω_b n + U_b n(n−1)` on `dim` levels of mode b.
pub fn hamiltonian_eff_diag(eff: &EffectiveParams, dim: usize) -> Result<Operator> {
    let values: Vec<f64> = (0..dim)
        .map(|n| {
            let n = n as f64;
            eff.omega_b * n + eff.u_b * n * (n - 1.0)
        })
        .collect();
    Operator::diagonal(&values)
}

pub fn hamiltonian_eff(params: &ModelParams, frame: Frame) -> Result<Operator> {
    let eff = effective_params(params)?;
    let hb = hamiltonian_eff_diag(&eff, params.dim)?;
    match frame {
        Frame::ModeB => Ok(hb),
        Frame::ModeA => {
            let s = fock::squeeze_operator(params.dim, eff.r, eff.theta)?;
            hb.conjugate_by(&s)
        }
    }
}
