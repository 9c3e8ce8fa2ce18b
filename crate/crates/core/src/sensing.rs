//! Sensing with the squeezed-Fock qubit: signal projection, Ramsey and Rabi
//! protocols, SNR and optimal sensitivities, plus the unsqueezed Fock-qubit
//! baseline.
//!
//! Qubit matrices use the basis order `(|0⟩_S, |1⟩_S)` with
//! `σ_z = |1⟩⟨1| − |0⟩⟨0|` and `σ₋ = |0⟩⟨1|`. Pulses rotate about y:
//! `R_y(φ) = cos(φ/2) − i sin(φ/2) Y` with `Y = [[0, i], [−i, 0]]`, so
//! `R_y(π/2) = [[1, 1], [−1, 1]]/√2`. The sequence is `R_y(π/2)`, free
//! evolution, `R_y(−π/2)`.

use std::f64::consts::{E, PI};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{self, Operator, QuantumState};
use crate::linalg::{CMatrix, I};
use crate::lindblad::{self, Convergence, DissipatorTerm, Generator, Hamiltonian, StepControl};
use crate::model::{self, EffectiveParams};

/// Two-level description of the qubit under the (squeezed) reservoir.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitParams {
    /// Qubit splitting, ω_b (squeezed) or ω_a (Fock baseline).
    pub omega_q: f64,
    pub big_gamma: f64,
    pub gamma0: f64,
    pub n_sq: f64,
    pub m_sq: C64,
    /// `1/cosh 2r`
    pub kappa: f64,
}

impl QubitParams {
    pub fn squeezed(eff: &EffectiveParams) -> Self {
        Self {
            omega_q: eff.omega_b,
            big_gamma: eff.big_gamma,
            gamma0: eff.gamma0,
            n_sq: eff.n_sq,
            m_sq: eff.m_sq,
            kappa: eff.kappa(),
        }
    }

    /// Unsqueezed Fock qubit `{|0⟩, |1⟩}` decaying at γ₀.
    pub fn fock(omega_a: f64, gamma0: f64) -> Self {
        Self { omega_q: omega_a, big_gamma: gamma0, gamma0, n_sq: 0.0, m_sq: C64::new(0.0, 0.0), kappa: 1.0 }
    }

    /// Same reservoir with a different splitting (e.g. a rotating-frame detuning).
    pub fn with_splitting(&self, omega_q: f64) -> Self {
        Self { omega_q, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0 && self.kappa <= 1.0) {
            return Err(Error::InvalidParameter(format!("kappa must lie in (0, 1], got {}", self.kappa)));
        }
        if self.gamma0 < 0.0 || (self.big_gamma * self.kappa - self.gamma0).abs() > 1e-9 * self.big_gamma.max(1.0) {
            return Err(Error::InvalidParameter("big_gamma must equal gamma0 / kappa".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignalKind {
    /// `k x²/2`, shifts the qubit frequency.
    SpringConstant,
    /// `F x`, drives transitions.
    StaticForce,
}

/// `x = x₀ (u b + u* b†)` with `u = cosh r − e^{−iθ} sinh r`; `|u| = e^r` at θ = π.
pub fn quadrature_weight(eff: &EffectiveParams) -> C64 {
    C64::from(eff.r.cosh()) - C64::from_polar(eff.r.sinh(), -eff.theta)
}

/// A signal Hamiltonian restricted to `{|0⟩_S, |1⟩_S}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectedSignal {
    pub kind: SignalKind,
    /// Projected matrix per unit signal (N/m or N), in rad/s.
    pub matrix: CMatrix,
    /// Identity part per unit signal, discarded as a global energy offset.
    pub offset: f64,
    /// ω_V per unit k (spring) or ω_F per unit F (force), rad/s.
    pub rate: f64,
}

/// Project `k x²/2` or `F x` onto the qubit subspace by taking the 2×2 block
/// of the Bogoliubov-mode operator.
pub fn project_signal(kind: SignalKind, eff: &EffectiveParams) -> Result<ProjectedSignal> {
    let b = fock::annihilation(4)?;
    let u = quadrature_weight(eff);
    let x = &(&b * u) + &(&b.dagger() * u.conj());
    let scale = eff.x_zpf / eff.hbar;
    let full = match kind {
        SignalKind::SpringConstant => &(&x * &x) * (0.5 * eff.x_zpf * scale),
        SignalKind::StaticForce => &x * scale,
    };
    let matrix = full.matrix().view((0, 0), (2, 2)).into_owned();
    let (offset, rate) = match kind {
        // diag(1, 3)·c = 2c·I + c·σ_z and ½ω_V σ_z fixes ω_V = 2c
        SignalKind::SpringConstant => {
            let avg = (matrix[(0, 0)].re + matrix[(1, 1)].re) / 2.0;
            (avg, matrix[(1, 1)].re - matrix[(0, 0)].re)
        }
        SignalKind::StaticForce => (0.0, 2.0 * matrix[(0, 1)].norm()),
    };
    Ok(ProjectedSignal { kind, matrix, offset, rate })
}

/// A concrete signal with its derived frequencies.
#[derive(Clone, Debug, PartialEq)]
pub struct SignalSpec {
    pub kind: SignalKind,
    /// k in N/m or F in N.
    pub value: f64,
    /// `ω_V = k x₀² |u|²/ħ` (zero for a force).
    pub omega_v: f64,
    /// `ω_F = 2x₀|u|F/ħ` (zero for a spring constant).
    pub omega_f: f64,
    /// `√(ω_b² + ω_F²)`
    pub omega_r: f64,
}

impl SignalSpec {
    pub fn spring(eff: &EffectiveParams, k: f64) -> Result<Self> {
        let p = project_signal(SignalKind::SpringConstant, eff)?;
        Ok(Self { kind: SignalKind::SpringConstant, value: k, omega_v: p.rate * k, omega_f: 0.0, omega_r: eff.omega_b })
    }

    pub fn force(eff: &EffectiveParams, f: f64) -> Result<Self> {
        let p = project_signal(SignalKind::StaticForce, eff)?;
        let omega_f = p.rate * f;
        Ok(Self {
            kind: SignalKind::StaticForce,
            value: f,
            omega_v: 0.0,
            omega_f,
            omega_r: eff.omega_b.hypot(omega_f),
        })
    }
}

/// Readout model: efficiency C, per-shot overhead t_m and total time T.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadoutSpec {
    pub c_readout: f64,
    pub t_m: f64,
    pub total_time: f64,
}

impl Default for ReadoutSpec {
    fn default() -> Self {
        Self { c_readout: 1.0, t_m: 0.0, total_time: 1.0 }
    }
}

impl ReadoutSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.c_readout > 0.0 && self.c_readout <= 1.0) {
            return Err(Error::InvalidParameter(format!("readout efficiency must lie in (0, 1], got {}", self.c_readout)));
        }
        if self.t_m < 0.0 || self.total_time <= 0.0 {
            return Err(Error::InvalidParameter("readout times must be positive".into()));
        }
        Ok(())
    }

    /// `N = T/(t + t_m)`
    pub fn n_shots(&self, t: f64) -> Result<f64> {
        self.validate()?;
        let n = self.total_time / (t + self.t_m);
        if !(n >= 1.0) {
            return Err(Error::InvalidParameter(format!("only {n} shots fit in the total time")));
        }
        Ok(n)
    }

    /// `σ_P = 1/(2C√N)`
    pub fn sigma_p(&self, t: f64) -> Result<f64> {
        Ok(1.0 / (2.0 * self.c_readout * self.n_shots(t)?.sqrt()))
    }
}

/// Outputs of one spring-constant Ramsey protocol, see [`spring_protocol`].
#[derive(Clone, Debug, PartialEq)]
pub struct SensingResult {
    pub times: Vec<f64>,
    pub p1: Vec<f64>,
    pub delta_p: f64,
    pub snr: f64,
    /// N·m⁻¹/√Hz (spring) or N/√Hz (force).
    pub sensitivity: f64,
    pub t_opt: f64,
}

fn ry(phi: f64) -> CMatrix {
    let (c, s) = ((phi / 2.0).cos(), (phi / 2.0).sin());
    CMatrix::from_row_slice(2, 2, &[C64::from(c), C64::from(s), C64::from(-s), C64::from(c)])
}

/// `c(t) = exp[−Γt/2 − i(ω_q + ω_V)t]`
pub fn coherence_factor(q: &QubitParams, omega_v: f64, t: f64) -> C64 {
    C64::new(-q.big_gamma * t / 2.0, -(q.omega_q + omega_v) * t).exp()
}

/// Closed-form Ramsey outcome at encoding time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct RamseyPoint {
    /// State after the second pulse.
    pub rho: CMatrix,
    pub p1: f64,
}

pub fn ramsey_analytic(q: &QubitParams, omega_v: f64, t: f64) -> Result<RamseyPoint> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("encoding time must be ≥ 0, got {t}")));
    }
    let c = coherence_factor(q, omega_v, t);
    let k = q.kappa;
    let rho00 = (1.0 + c.re) / 2.0;
    let rho11 = (1.0 - c.re) / 2.0;
    let rho01 = C64::new(k * (1.0 - c.norm_sqr()), c.im) / 2.0;
    let rho = CMatrix::from_row_slice(2, 2, &[C64::from(rho00), rho01, rho01.conj(), C64::from(rho11)]);
    Ok(RamseyPoint { rho, p1: rho11 })
}

/// Two-level master equation: `(ω/2)σ_z`, decay `γ₀(N+1)` on σ₋, `γ₀N` on σ₊,
/// and optionally the reservoir cross terms `−γ₀M σ₋ρσ₋ − γ₀M* σ₊ρσ₊`.
pub fn qubit_generator(q: &QubitParams, omega_v: f64, cross_terms: bool) -> Result<Generator> {
    let w = q.omega_q + omega_v;
    let h = Operator::diagonal(&[-w / 2.0, w / 2.0])?;
    let sm = fock::annihilation(2)?;
    let sp = sm.dagger();
    let mut terms = vec![
        DissipatorTerm::decay(q.gamma0 * (q.n_sq + 1.0), &sm),
        DissipatorTerm::decay(q.gamma0 * q.n_sq, &sp),
    ];
    if cross_terms {
        terms.push(DissipatorTerm::new(-q.m_sq * q.gamma0, sm.clone(), sm)?);
        terms.push(DissipatorTerm::new(-q.m_sq.conj() * q.gamma0, sp.clone(), sp)?);
    }
    Generator::new(Hamiltonian::constant(h), terms)
}

/// Numerical Ramsey trace from the two-level master equation with ideal pulses.
#[derive(Clone, Debug)]
pub struct RamseyNumeric {
    pub times: Vec<f64>,
    pub p1: Vec<f64>,
    /// States after the second pulse.
    pub rho: Vec<CMatrix>,
    pub diagnostics: lindblad::DiagnosticsSummary,
}

pub fn ramsey_numeric_qubit(q: &QubitParams, omega_v: f64, t_grid: &[f64], cross_terms: bool) -> Result<RamseyNumeric> {
    q.validate()?;
    let g = qubit_generator(q, omega_v, cross_terms)?;
    let first = ry(PI / 2.0);
    let second = ry(-PI / 2.0);
    let mut rho0 = CMatrix::zeros(2, 2);
    rho0[(0, 0)] = C64::from(1.0);
    let prepared = QuantumState::density(&first * rho0 * first.adjoint())?;
    let control = StepControl { tolerance: 1e-9, convergence: Convergence::FullState, ..StepControl::default() };
    let traj = lindblad::evolve(&g, &prepared, t_grid, &control)?;
    let rho: Vec<CMatrix> = traj.states.iter().map(|r| &second * r * second.adjoint()).collect();
    let p1 = rho.iter().map(|r| r[(1, 1)].re).collect();
    Ok(RamseyNumeric { times: t_grid.to_vec(), p1, rho, diagnostics: traj.summary() })
}

/// Settings of the full Fock-space Ramsey simulation.
#[derive(Clone, Debug, PartialEq)]
pub struct FullRamseySpec {
    /// Levels of the Bogoliubov mode kept.
    pub dim: usize,
    /// π/2-pulse drive strength Ω_{π/2}; pulse duration is `π/(2Ω_{π/2})`.
    pub pulse_amp: f64,
    /// Qubit splitting seen in the simulation frame (rad/s). The frame
    /// rotates at `ω_b − detuning`, so the fringe runs at `detuning + ω_V`.
    pub detuning: f64,
    /// Keep the reservoir cross terms (rotating at twice the frame frequency).
    pub cross_terms: bool,
}

#[derive(Clone, Debug)]
pub struct FullRamsey {
    /// Free-evolution times (pulses excluded).
    pub times: Vec<f64>,
    pub p1: Vec<f64>,
    /// Population outside `{|0⟩_S, |1⟩_S}` after the second pulse.
    pub leakage: Vec<f64>,
    pub pulse_time: f64,
    pub diagnostics: lindblad::DiagnosticsSummary,
}

/// Full-space Ramsey sequence in the Bogoliubov-mode Fock basis with finite
/// π/2 pulses `±(Ω/2)(i b − i b†)`, the Kerr term `U_b n(n−1)` and the
/// squeezed reservoir.
pub fn ramsey_numeric_full(eff: &EffectiveParams, omega_v: f64, t_grid: &[f64], spec: &FullRamseySpec) -> Result<FullRamsey> {
    if spec.dim < 3 {
        return Err(Error::TruncationTooSmall { dim: spec.dim, required: 3 });
    }
    if !(spec.pulse_amp > 0.0) {
        return Err(Error::InvalidParameter("pulse amplitude must be positive".into()));
    }
    let d = spec.dim;
    let b = fock::annihilation(d)?;
    let n = fock::number(d)?;
    let h_free = &(&n * (spec.detuning + omega_v)) + &(&fock::kerr(d)? * eff.u_b);
    let y = &(&b * I) - &(&b.dagger() * I);
    let frame = eff.omega_b - spec.detuning;
    let mut bath = lindblad::squeezed_bath_terms(eff, &b, frame);
    if !spec.cross_terms {
        bath.truncate(2);
    }
    let pulse_gen = |sign: f64| -> Result<Generator> {
        let h = &h_free + &(&y * (sign * spec.pulse_amp / 2.0));
        Generator::new(Hamiltonian::constant(h), bath.clone())
    };
    let (g_up, g_down) = (pulse_gen(1.0)?, pulse_gen(-1.0)?);
    let g_free = Generator::new(Hamiltonian::constant(h_free.clone()), bath.clone())?;
    let t_p = PI / (2.0 * spec.pulse_amp);
    let control = StepControl { tolerance: 1e-7, convergence: Convergence::FullState, eigen_every: 1, ..StepControl::default() };
    let keep_state = |rho: &CMatrix| vec![rho[(0, 0)].re];

    let vacuum = QuantumState::fock(d, 0)?;
    let after_first = lindblad::evolve_observed(&g_up, &vacuum, &[0.0, t_p], &control, &keep_state)?;
    let prepared = QuantumState::density(after_first.final_state.clone())
        .or_else(|_| QuantumState::density(hermitian_normalized(&after_first.final_state)))?;

    let abs_times: Vec<f64> = t_grid.iter().map(|t| t + t_p).collect();
    let free = lindblad::evolve(&g_free, &prepared, &abs_times, &control)?;
    let finals: Vec<Result<(f64, f64, Vec<lindblad::Diagnostics>)>> = free
        .states
        .par_iter()
        .zip(&abs_times)
        .map(|(rho, &t0)| {
            let start = QuantumState::density(hermitian_normalized(rho))?;
            let out = lindblad::evolve_observed(&g_down, &start, &[t0, t0 + t_p], &control, &|r: &CMatrix| {
                vec![r[(0, 0)].re, r[(1, 1)].re]
            })?;
            let last = out.values.last().expect("two samples");
            Ok((last[1], 1.0 - last[0] - last[1], out.diagnostics))
        })
        .collect();
    let mut p1 = Vec::with_capacity(t_grid.len());
    let mut leakage = Vec::with_capacity(t_grid.len());
    let mut diags = free.diagnostics.clone();
    diags.extend(after_first.diagnostics);
    for r in finals {
        let (p, l, d) = r?;
        p1.push(p);
        leakage.push(l);
        diags.extend(d);
    }
    Ok(FullRamsey {
        times: t_grid.to_vec(),
        p1,
        leakage,
        pulse_time: t_p,
        diagnostics: lindblad::DiagnosticsSummary::of(&diags),
    })
}

/// Remove rounding-level trace drift so a propagated state passes validation.
fn hermitian_normalized(rho: &CMatrix) -> CMatrix {
    let mut m = rho.clone();
    crate::linalg::hermitize(&mut m);
    let tr = crate::linalg::trace(&m).re;
    m / C64::from(tr)
}

/// Probability shift at the bias point for a spring-constant change `δk`:
/// `½ e^{−Γt/2} ω_V(δk) t`, with `ω_V(δk) = δk x₀²|u|²/ħ`.
pub fn delta_p(eff: &EffectiveParams, delta_k: f64, t: f64) -> Result<f64> {
    let rate = project_signal(SignalKind::SpringConstant, eff)?.rate;
    Ok(0.5 * (-eff.big_gamma * t / 2.0).exp() * rate * delta_k * t)
}

/// `SNR = δP/σ_P`.
pub fn snr(eff: &EffectiveParams, delta_k: f64, t: f64, readout: &ReadoutSpec) -> Result<f64> {
    Ok(delta_p(eff, delta_k, t)? / readout.sigma_p(t)?)
}

/// Optimal spring-constant sensitivities (T = 1 s, C = 1, t_m = 0).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpringSensitivity {
    /// `ħ√(Γe)/(x₀²|u|²)` at `t_opt = 1/Γ`.
    pub delta_k_min: f64,
    pub t_opt: f64,
    /// `ħ√(γ₀e)/(x₀² e^r)`: the large-r form, `√(cosh 2r) ≈ e^r` with the
    /// factor `1/√2` dropped.
    pub approx: f64,
    /// Unsqueezed Fock qubit, `ħ√(γ₀e)/x₀²` at `t = 1/γ₀`.
    pub baseline: f64,
}

impl SpringSensitivity {
    pub fn ratio(&self) -> f64 {
        self.delta_k_min / self.baseline
    }
}

pub fn sensitivity_spring(eff: &EffectiveParams) -> Result<SpringSensitivity> {
    if !(eff.gamma0 > 0.0) {
        return Err(Error::InvalidParameter("sensitivity needs gamma0 > 0".into()));
    }
    let rate = project_signal(SignalKind::SpringConstant, eff)?.rate;
    let x2 = eff.x_zpf * eff.x_zpf;
    Ok(SpringSensitivity {
        delta_k_min: (eff.big_gamma * E).sqrt() / rate,
        t_opt: 1.0 / eff.big_gamma,
        approx: eff.hbar * (eff.gamma0 * E).sqrt() / (x2 * eff.r.exp()),
        baseline: eff.hbar * (eff.gamma0 * E).sqrt() / x2,
    })
}

/// Ramsey spring-constant protocol for a change `delta_k`: the `P1` trace on
/// `t_grid`, and `δP`, SNR at `t_opt` with the given readout. `sensitivity`
/// is the `δk` giving SNR = 1 per √Hz, `δk·√T/SNR`; with ideal readout it
/// equals [`SpringSensitivity::delta_k_min`].
pub fn spring_protocol(eff: &EffectiveParams, delta_k: f64, readout: &ReadoutSpec, t_grid: &[f64]) -> Result<SensingResult> {
    let q = QubitParams::squeezed(eff);
    let omega_v = project_signal(SignalKind::SpringConstant, eff)?.rate * delta_k;
    let p1 = t_grid.iter().map(|&t| ramsey_analytic(&q, omega_v, t).map(|p| p.p1)).collect::<Result<_>>()?;
    let t_opt = sensitivity_spring(eff)?.t_opt;
    let snr_opt = snr(eff, delta_k, t_opt, readout)?;
    Ok(SensingResult {
        times: t_grid.to_vec(),
        p1,
        delta_p: delta_p(eff, delta_k, t_opt)?,
        snr: snr_opt,
        sensitivity: delta_k * readout.total_time.sqrt() / snr_opt,
        t_opt,
    })
}

/// Error-propagation sensitivity at encoding time `t`, total time `T`, fringe
/// phase `φ = (ω_q + ω_V)t`: `ΔO/(√(T/t)·|d⟨O⟩/dk|)` for the two-outcome
/// measurement of `|1⟩⟨1|`.
pub fn delta_k_error_propagation(eff: &EffectiveParams, t: f64, phase: f64, total_time: f64) -> Result<f64> {
    let rate = project_signal(SignalKind::SpringConstant, eff)?.rate;
    let envelope = (-eff.big_gamma * t / 2.0).exp();
    let re_c = envelope * phase.cos();
    // outcomes 1 and 0 with P1 = (1 − Re c)/2
    let p1 = (1.0 - re_c) / 2.0;
    let mean = p1;
    let second_moment = p1;
    let spread = (second_moment - mean * mean).sqrt();
    let error = spread / (total_time / t).sqrt();
    let slope = 0.5 * envelope * phase.sin().abs() * t * rate;
    Ok(error / slope)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CramerRaoSensitivity {
    pub delta_k_min: f64,
    pub t_opt: f64,
}

/// Minimize [`delta_k_error_propagation`] at the bias point (`φ = π/2`) over
/// the encoding time by golden-section search in `ln t`.
pub fn sensitivity_spring_cramer_rao(eff: &EffectiveParams, total_time: f64) -> Result<CramerRaoSensitivity> {
    if !(eff.gamma0 > 0.0) || !(total_time > 0.0) {
        return Err(Error::InvalidParameter("sensitivity needs gamma0 > 0 and T > 0".into()));
    }
    let f = |u: f64| delta_k_error_propagation(eff, u.exp(), PI / 2.0, total_time);
    let center = (1.0 / eff.gamma0).ln();
    let (u_min, value) = golden_section(&f, center - 12.0, center + 6.0, 1e-12)?;
    Ok(CramerRaoSensitivity { delta_k_min: value, t_opt: u_min.exp() })
}

fn golden_section(f: &dyn Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while (b - a).abs() > tol * (1.0 + c.abs()) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    let u = (a + b) / 2.0;
    Ok((u, f(u)?))
}

/// Encoding time of the bias point `(ω_q + ω_V)t = mπ/2`, m odd, closest to
/// `t_opt` from below. Falls back to m = 1 when even that exceeds `t_opt`.
pub fn bias_time(omega: f64, t_opt: f64) -> Result<(u32, f64)> {
    if !(omega > 0.0) {
        return Err(Error::InvalidParameter("bias point needs a positive fringe frequency".into()));
    }
    let quarter = PI / (2.0 * omega);
    let mut m = (t_opt / quarter).floor() as u32;
    if m.is_multiple_of(2) {
        m = m.saturating_sub(1);
    }
    let m = m.max(1);
    Ok((m, m as f64 * quarter))
}

/// `P = (ω_F²/ω_R²) sin²(ω_R t/2)`, `ω_R = √(ω_b² + ω_F²)`.
pub fn rabi_probability(omega_b: f64, omega_f: f64, t: f64) -> f64 {
    let omega_r = omega_b.hypot(omega_f);
    if omega_r == 0.0 {
        return 0.0;
    }
    (omega_f / omega_r).powi(2) * (omega_r * t / 2.0).sin().powi(2)
}

pub fn rabi_force_probability(eff: &EffectiveParams, force: f64, t: f64) -> Result<f64> {
    let s = SignalSpec::force(eff, force)?;
    Ok(rabi_probability(eff.omega_b, s.omega_f, t))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecoherenceMode {
    /// Reservoir noise amplified by the drive, χ(t) = γ₀ cosh(2r) t/2.
    DrivenBath,
    /// Amplified noise avoided, decay at the bare γ₀.
    DissipativeSqueezing,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForceSensitivity {
    pub delta_f_min: f64,
    pub t_opt: f64,
    pub approx: f64,
}

/// Optimal static-force sensitivity for a Rabi coupling `omega_f`.
pub fn sensitivity_force(eff: &EffectiveParams, omega_f: f64, mode: DecoherenceMode) -> Result<ForceSensitivity> {
    if !(eff.gamma0 > 0.0) || omega_f == 0.0 {
        return Err(Error::InvalidParameter("force sensitivity needs gamma0 > 0 and omega_f ≠ 0".into()));
    }
    let omega_r = eff.omega_b.hypot(omega_f);
    let pref = (omega_r / omega_f.abs()).powi(3);
    let u = quadrature_weight(eff).norm();
    let base = pref * eff.hbar / (2.0 * eff.x_zpf);
    Ok(match mode {
        DecoherenceMode::DrivenBath => ForceSensitivity {
            delta_f_min: base * (E * eff.big_gamma).sqrt() / u,
            t_opt: 1.0 / eff.big_gamma,
            approx: base * (E * eff.gamma0).sqrt(),
        },
        DecoherenceMode::DissipativeSqueezing => {
            let v = base * (E * eff.gamma0).sqrt() / u;
            ForceSensitivity { delta_f_min: v, t_opt: 1.0 / eff.gamma0, approx: v }
        }
    })
}

/// Unitary two-level propagation of `(ω_b/2)σ_z + (ω_F/2)σ_x` from `|0⟩`,
/// by a fixed-step RK4 on the amplitudes. Used as an independent check of
/// [`rabi_probability`].
pub fn rabi_unitary_population(omega_b: f64, omega_f: f64, t: f64, steps: usize) -> f64 {
    let h = [[C64::from(-omega_b / 2.0), C64::from(omega_f / 2.0)], [C64::from(omega_f / 2.0), C64::from(omega_b / 2.0)]];
    let f = |v: [C64; 2]| -> [C64; 2] {
        [-I * (h[0][0] * v[0] + h[0][1] * v[1]), -I * (h[1][0] * v[0] + h[1][1] * v[1])]
    };
    let dt = t / steps as f64;
    let mut v = [C64::from(1.0), C64::from(0.0)];
    for _ in 0..steps {
        let k1 = f(v);
        let k2 = f([v[0] + k1[0] * (dt / 2.0), v[1] + k1[1] * (dt / 2.0)]);
        let k3 = f([v[0] + k2[0] * (dt / 2.0), v[1] + k2[1] * (dt / 2.0)]);
        let k4 = f([v[0] + k3[0] * dt, v[1] + k3[1] * dt]);
        for i in 0..2 {
            v[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
        }
    }
    v[1].norm_sqr()
}

fn force_hamiltonian(eff: &EffectiveParams, omega_f: f64, dim: usize) -> Result<Operator> {
    let b = fock::annihilation(dim)?;
    Ok(&model::hamiltonian_eff_diag(eff, dim)? + &(&(&b + &b.dagger()) * (omega_f / 2.0)))
}

/// Full-space Rabi force sensing in the Bogoliubov-mode basis:
/// `H = ω_b n + U_b n(n−1) + (ω_F/2)(b + b†)` from `|0⟩_S`, no decoherence.
/// The closed-system evolution is exact through the eigenbasis of `H`.
/// Returns `(P(|1⟩_S), leakage out of {|0⟩_S, |1⟩_S})` at each time.
pub fn rabi_force_full(eff: &EffectiveParams, omega_f: f64, dim: usize, t_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidParameter("time grid must be finite".into()));
    }
    let h = force_hamiltonian(eff, omega_f, dim)?;
    let (energies, v) = crate::linalg::hermitian_eigen(h.matrix());
    // amplitudes of |0⟩ in the eigenbasis
    let c0: Vec<C64> = (0..dim).map(|k| v[(0, k)].conj()).collect();
    Ok(t_grid
        .iter()
        .map(|&t| {
            let amp = |n: usize| -> C64 {
                (0..dim).map(|k| v[(n, k)] * c0[k] * C64::from_polar(1.0, -energies[k] * t)).sum()
            };
            let (p0, p1) = (amp(0).norm_sqr(), amp(1).norm_sqr());
            (p1, 1.0 - p0 - p1)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::linspace;

    fn eff(r: f64) -> EffectiveParams {
        EffectiveParams::from_squeezing(r, PI, 3.0, 0.01, 0.2, 1.3, 1.0)
    }

    #[test]
    fn spring_projection() {
        let e0 = eff(0.0);
        let p = project_signal(SignalKind::SpringConstant, &e0).unwrap();
        // (b + b†)² on {|0⟩, |1⟩} is diag(1, 3)
        let c = 0.5 * e0.x_zpf * e0.x_zpf / e0.hbar;
        assert!((p.matrix[(0, 0)].re - c).abs() < 1e-15);
        assert!((p.matrix[(1, 1)].re - 3.0 * c).abs() < 1e-15);
        assert!(p.matrix[(0, 1)].norm() < 1e-15);
        assert!((p.offset - 2.0 * c).abs() < 1e-15);
        assert!((p.rate - 1.3 * 1.3).abs() < 1e-14);

        let e = eff(1.5);
        let p = project_signal(SignalKind::SpringConstant, &e).unwrap();
        let enhancement = p.rate / (1.3 * 1.3);
        assert!((enhancement - 3f64.exp()).abs() < 1e-10);
        assert!((enhancement - 20.0855).abs() < 1e-4);
    }

    #[test]
    fn force_projection() {
        let e = eff(0.7);
        let p = project_signal(SignalKind::StaticForce, &e).unwrap();
        assert!((p.rate - 2.0 * 1.3 * 0.7f64.exp()).abs() < 1e-12);
        assert!(p.matrix[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn analytic_ramsey_limits() {
        let q = QubitParams::squeezed(&eff(1.0));
        let start = ramsey_analytic(&q, 0.0, 0.0).unwrap();
        assert!(start.p1.abs() < 1e-15);
        assert!((start.rho[(0, 0)].re - 1.0).abs() < 1e-15);

        let clean = QubitParams { gamma0: 0.0, big_gamma: 0.0, ..q.clone() };
        let t = PI / clean.omega_q;
        assert!((ramsey_analytic(&clean, 0.0, t).unwrap().p1 - 1.0).abs() < 1e-12);

        let fock = QubitParams::fock(3.0, 0.2);
        for t in [0.3f64, 1.7, 4.0] {
            let want = 0.5 - 0.5 * (-0.2 * t / 2.0).exp() * (3.0 * t).cos();
            assert!((ramsey_analytic(&fock, 0.0, t).unwrap().p1 - want).abs() < 1e-14);
        }
    }

    #[test]
    fn analytic_state_is_physical() {
        let q = QubitParams::squeezed(&eff(1.2));
        for t in linspace(0.0, 8.0, 17) {
            let rho = ramsey_analytic(&q, 0.4, t).unwrap().rho;
            assert!(QuantumState::density(rho).is_ok(), "t={t}");
        }
    }

    #[test]
    fn numeric_qubit_matches_closed_form() {
        for r in [0.0, 0.5, 1.0, 1.5] {
            let q = QubitParams::squeezed(&eff(r));
            let grid = linspace(0.0, 5.0 / q.big_gamma, 41);
            let num = ramsey_numeric_qubit(&q, 0.3, &grid, false).unwrap();
            for (k, &t) in grid.iter().enumerate() {
                let a = ramsey_analytic(&q, 0.3, t).unwrap();
                assert!((num.p1[k] - a.p1).abs() < 1e-6, "r={r} t={t} {} vs {}", num.rho[k][(0, 1)], a.rho[(0, 1)]);
                // coherence including the κ(1 − |c|²) part
                assert!((num.rho[k][(0, 1)] - a.rho[(0, 1)]).norm() < 1e-6, "r={r} t={t}");
            }
        }
    }

    #[test]
    fn numeric_envelope_at_large_squeezing() {
        let e = eff(1.5);
        let q = QubitParams::squeezed(&e).with_splitting(0.0);
        let grid = linspace(0.0, 2.0, 5);
        let num = ramsey_numeric_qubit(&q, 0.0, &grid, false).unwrap();
        for (k, &t) in grid.iter().enumerate() {
            let env = (-0.2 * 3f64.cosh() * t / 2.0).exp();
            assert!((num.p1[k] - (0.5 - 0.5 * env)).abs() < 1e-6);
        }
    }

    #[test]
    fn delta_p_matches_finite_difference() {
        let e = eff(1.0);
        let q = QubitParams::squeezed(&e);
        let rate = project_signal(SignalKind::SpringConstant, &e).unwrap().rate;
        let (_, t) = bias_time(q.omega_q, 1.0 / q.big_gamma).unwrap();
        let dk = 0.04 / (rate * t);
        let base = ramsey_analytic(&q, 0.0, t).unwrap().p1;
        let shifted = ramsey_analytic(&q, rate * dk, t).unwrap().p1;
        let dp = delta_p(&e, dk, t).unwrap();
        assert!(((shifted - base).abs() - dp).abs() < 0.01 * dp);
        assert_eq!(delta_p(&e, dk, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn snr_scaling() {
        let e = eff(0.8);
        let single = ReadoutSpec { c_readout: 1.0, t_m: 0.0, total_time: 2.0 };
        let t = 2.0;
        let s = snr(&e, 1e-3, t, &single).unwrap();
        let rate = project_signal(SignalKind::SpringConstant, &e).unwrap().rate;
        let closed = (-e.big_gamma * t / 2.0).exp() * rate * 1e-3 * (t * single.total_time).sqrt();
        assert!((s - closed).abs() < 1e-12 * closed);
        let doubled = ReadoutSpec { total_time: 4.0, ..single };
        assert!((snr(&e, 1e-3, t, &doubled).unwrap() / s - 2f64.sqrt()).abs() < 1e-12);

        let lossy = ReadoutSpec { c_readout: 0.3, t_m: 0.5, total_time: 10.0 };
        let hand = delta_p(&e, 1e-3, t).unwrap() * 2.0 * 0.3 * (10.0f64 / 2.5).sqrt();
        assert!((snr(&e, 1e-3, t, &lossy).unwrap() - hand).abs() < 1e-12 * hand);
        assert!(ReadoutSpec { total_time: 1.0, ..lossy }.n_shots(2.0).is_err());
    }

    #[test]
    fn spring_sensitivity_identities() {
        let s0 = sensitivity_spring(&eff(0.0)).unwrap();
        assert!((s0.delta_k_min - s0.baseline).abs() < 1e-12 * s0.baseline);
        let s = sensitivity_spring(&eff(1.5)).unwrap();
        let closed = 3f64.cosh().sqrt() * (-3f64).exp();
        assert!((s.ratio() - closed).abs() < 1e-12);
        assert!((s.ratio() - 0.15797).abs() < 1e-5);
        assert!((s.approx / s.baseline - (-1.5f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn cramer_rao_matches_slope_route() {
        for r in [0.0, 0.6, 1.5] {
            let e = eff(r);
            let slope = sensitivity_spring(&e).unwrap();
            let cr = sensitivity_spring_cramer_rao(&e, 1.0).unwrap();
            assert!(((cr.delta_k_min - slope.delta_k_min) / slope.delta_k_min).abs() < 1e-12, "r={r}");
            assert!(((cr.t_opt - slope.t_opt) / slope.t_opt).abs() < 1e-5);
            let cr4 = sensitivity_spring_cramer_rao(&e, 4.0).unwrap();
            assert!((cr4.delta_k_min / cr.delta_k_min - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn bias_time_is_odd_quarter_period_below_optimum() {
        let (m, t) = bias_time(10.0, 1.0).unwrap();
        assert_eq!(m % 2, 1);
        assert!(t <= 1.0 && t + PI / 10.0 > 1.0);
        let (m, _) = bias_time(1.0, 0.1).unwrap();
        assert_eq!(m, 1);
    }

    #[test]
    fn rabi_formula_limits_and_unitary_check() {
        assert_eq!(rabi_probability(2.0, 0.0, 1.3), 0.0);
        assert!((rabi_probability(0.0, 2.0, PI / 2.0) - 1.0).abs() < 1e-15);
        for (wb, wf, t) in [(1.0, 0.4, 3.0), (2.5, 2.5, 1.1), (0.3, 5.0, 7.0)] {
            let exact = rabi_probability(wb, wf, t);
            let num = rabi_unitary_population(wb, wf, t, 20_000);
            assert!((exact - num).abs() < 1e-8, "{exact} vs {num}");
        }
    }

    #[test]
    fn force_modes() {
        let e0 = eff(0.0);
        let a = sensitivity_force(&e0, 2.0, DecoherenceMode::DrivenBath).unwrap();
        let b = sensitivity_force(&e0, 2.0, DecoherenceMode::DissipativeSqueezing).unwrap();
        assert!((a.delta_f_min - b.delta_f_min).abs() < 1e-15 * a.delta_f_min);

        let e = eff(1.5);
        let a = sensitivity_force(&e, 2.0, DecoherenceMode::DrivenBath).unwrap();
        let b = sensitivity_force(&e, 2.0, DecoherenceMode::DissipativeSqueezing).unwrap();
        assert!((a.delta_f_min / b.delta_f_min - 3f64.cosh().sqrt()).abs() < 1e-12);

        let strong = sensitivity_force(&e, 1e6, DecoherenceMode::DissipativeSqueezing).unwrap();
        let pref = strong.delta_f_min / (e.hbar * (E * e.gamma0).sqrt() / (2.0 * e.x_zpf * 1.5f64.exp()));
        assert!((pref - 1.0).abs() < 1e-10);
    }

    #[test]
    fn full_space_rabi_follows_two_level_formula_when_anharmonic() {
        let e = EffectiveParams::from_squeezing(1.5, PI, 0.0, 0.05, 0.0, 1.0, 1.0);
        let wf = 0.1;
        let grid = linspace(0.0, PI / wf, 9);
        let p = rabi_force_full(&e, wf, 6, &grid).unwrap();
        for (k, &t) in grid.iter().enumerate() {
            assert!((p[k].0 - rabi_probability(0.0, wf, t)).abs() < 5e-3, "t={t}: {:?}", p[k]);
            assert!(p[k].1 < 5e-3);
        }
    }

    #[test]
    fn protocol_sensitivity_matches_closed_form_with_ideal_readout() {
        let e = EffectiveParams::from_squeezing(1.2, PI, 5.0, 0.1, 0.3, 2.0, 1.0);
        let grid = linspace(0.0, 3.0, 7);
        let ideal = ReadoutSpec { c_readout: 1.0, t_m: 0.0, total_time: 4.0 };
        let out = spring_protocol(&e, 1e-3, &ideal, &grid).unwrap();
        let s = sensitivity_spring(&e).unwrap();
        assert!((out.sensitivity - s.delta_k_min).abs() < 1e-12 * s.delta_k_min);
        assert_eq!(out.t_opt, s.t_opt);
        assert_eq!(out.p1.len(), grid.len());
        let lossy = ReadoutSpec { c_readout: 0.5, t_m: 0.0, total_time: 4.0 };
        let worse = spring_protocol(&e, 1e-3, &lossy, &grid).unwrap();
        assert!((worse.sensitivity / out.sensitivity - 2.0).abs() < 1e-12);
    }

    #[test]
    fn eigenbasis_rabi_matches_master_equation_route() {
        let e = EffectiveParams::from_squeezing(0.4, PI, 0.7, 0.3, 0.0, 1.0, 1.0);
        let grid = linspace(0.0, 6.0, 13);
        let exact = rabi_force_full(&e, 1.1, 7, &grid).unwrap();
        let g = Generator::new(Hamiltonian::constant(force_hamiltonian(&e, 1.1, 7).unwrap()), Vec::new()).unwrap();
        let control = StepControl { tolerance: 1e-10, ..StepControl::default() };
        let traj = lindblad::evolve(&g, &QuantumState::fock(7, 0).unwrap(), &grid, &control).unwrap();
        for (k, (p1, leak)) in exact.iter().enumerate() {
            let rho = &traj.states[k];
            assert!((p1 - rho[(1, 1)].re).abs() < 1e-9);
            assert!((leak - (1.0 - rho[(0, 0)].re - rho[(1, 1)].re)).abs() < 1e-9);
        }
    }

    #[test]
    fn full_space_ramsey_without_decay_or_kerr_leakage() {
        // strong anharmonicity, no reservoir: only finite-pulse errors remain
        let mut e = EffectiveParams::from_squeezing(1.5, PI, 50.0, 0.5, 0.0, 1.0, 1.0);
        e.gamma0 = 0.0;
        e.big_gamma = 0.0;
        let spec = FullRamseySpec { dim: 6, pulse_amp: 4.0, detuning: 0.2, cross_terms: true };
        let grid = linspace(0.0, 6.0, 7);
        let out = ramsey_numeric_full(&e, 0.0, &grid, &spec).unwrap();
        let q = QubitParams::squeezed(&e).with_splitting(0.2);
        for (k, &t) in grid.iter().enumerate() {
            let a = ramsey_analytic(&QubitParams { kappa: 1.0, ..q.clone() }, 0.0, t).unwrap().p1;
            assert!(out.leakage[k] < 1e-2, "leak {}", out.leakage[k]);
            assert!((out.p1[k] - a).abs() < 0.05, "t={t}: {} vs {a}", out.p1[k]);
        }
    }
}
