//! Lindblad master equations: dissipator terms, generator assembly and
//! fixed-step RK4 integration with global step halving.
//!
//! A term with rate `γ` and operators `(A, B)` contributes
//! `γ/2 · (2AρB − BAρ − ρBA)`. Rates may be complex and may rotate as
//! `γ e^{iνt}` when the master equation is written in a rotating frame.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{self, Operator, QuantumState};
use crate::linalg::{self, CMatrix, I};
use crate::model::{self, EffectiveParams, ModelParams};
use crate::sparse::SparseOp;

pub const TRACE_TOL: f64 = 1e-8;
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const MIN_EIGEN_TOL: f64 = -1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct DissipatorTerm {
    pub rate: C64,
    /// Angular frequency ν of the rate in a rotating frame: `rate(t) = rate · e^{iνt}`.
    pub rotation: f64,
    pub op_left: Operator,
    pub op_right: Operator,
}

impl DissipatorTerm {
    pub fn new(rate: C64, op_left: Operator, op_right: Operator) -> Result<Self> {
        Self::rotating(rate, 0.0, op_left, op_right)
    }

    pub fn rotating(rate: C64, rotation: f64, op_left: Operator, op_right: Operator) -> Result<Self> {
        if op_left.dim() != op_right.dim() {
            return Err(Error::DimensionMismatch { left: op_left.dim(), right: op_right.dim() });
        }
        Ok(Self { rate, rotation, op_left, op_right })
    }

    /// Plain decay `γ/2 · (2AρA† − A†Aρ − ρA†A)`.
    pub fn decay(rate: f64, op: &Operator) -> Self {
        Self { rate: C64::from(rate), rotation: 0.0, op_left: op.clone(), op_right: op.dagger() }
    }

    pub fn dim(&self) -> usize {
        self.op_left.dim()
    }

    pub fn rate_at(&self, t: f64) -> C64 {
        if self.rotation == 0.0 {
            self.rate
        } else {
            self.rate * C64::from_polar(1.0, self.rotation * t)
        }
    }
}

/// `rate/2 · (2AρB − BAρ − ρBA)` with the rate evaluated at time `t`.
pub fn dissipator_apply_at(term: &DissipatorTerm, rho: &CMatrix, t: f64) -> Result<CMatrix> {
    if rho.nrows() != term.dim() || !rho.is_square() {
        return Err(Error::DimensionMismatch { left: term.dim(), right: rho.nrows() });
    }
    let a = term.op_left.matrix();
    let b = term.op_right.matrix();
    let ba = b * a;
    let d = (a * rho * b) * C64::from(2.0) - &ba * rho - rho * &ba;
    Ok(d * (term.rate_at(t) * 0.5))
}

pub fn dissipator_apply(term: &DissipatorTerm, rho: &CMatrix) -> Result<CMatrix> {
    dissipator_apply_at(term, rho, 0.0)
}

/// The four squeezed-reservoir terms acting on mode `b`:
/// rates `γ₀(N+1)`, `γ₀N`, `−γ₀M`, `−γ₀M*` on `(b,b†)`, `(b†,b)`, `(b,b)`, `(b†,b†)`.
///
/// `frame_omega` is the rotation frequency of the picture `b` is written in;
/// the `(b,b)` and `(b†,b†)` terms then rotate at `∓2·frame_omega`.
pub fn squeezed_bath_terms(eff: &EffectiveParams, b: &Operator, frame_omega: f64) -> Vec<DissipatorTerm> {
    let bd = b.dagger();
    let g = eff.gamma0;
    vec![
        DissipatorTerm::decay(g * (eff.n_sq + 1.0), b),
        DissipatorTerm::decay(g * eff.n_sq, &bd),
        DissipatorTerm {
            rate: -eff.m_sq * g,
            rotation: -2.0 * frame_omega,
            op_left: b.clone(),
            op_right: b.clone(),
        },
        DissipatorTerm {
            rate: -eff.m_sq.conj() * g,
            rotation: 2.0 * frame_omega,
            op_left: bd.clone(),
            op_right: bd,
        },
    ]
}

/// Time dependence of one Hamiltonian part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Modulation {
    Constant,
    /// `cos(ωt + φ)`
    Cosine { omega: f64, phase: f64 },
}

impl Modulation {
    pub fn at(&self, t: f64) -> f64 {
        match *self {
            Modulation::Constant => 1.0,
            Modulation::Cosine { omega, phase } => (omega * t + phase).cos(),
        }
    }
}

/// `H(t) = Σ_j f_j(t) H_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    parts: Vec<(Operator, Modulation)>,
}

impl Hamiltonian {
    pub fn constant(h: Operator) -> Self {
        Self { parts: vec![(h, Modulation::Constant)] }
    }

    pub fn with_part(mut self, h: Operator, modulation: Modulation) -> Result<Self> {
        let dim = self.dim();
        if h.dim() != dim {
            return Err(Error::DimensionMismatch { left: dim, right: h.dim() });
        }
        self.parts.push((h, modulation));
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.parts[0].0.dim()
    }

    pub fn parts(&self) -> &[(Operator, Modulation)] {
        &self.parts
    }

    pub fn at(&self, t: f64) -> Operator {
        let mut m = CMatrix::zeros(self.dim(), self.dim());
        for (h, f) in &self.parts {
            m += h.matrix() * C64::from(f.at(t));
        }
        Operator::from_matrix(m).expect("sum of valid operators")
    }
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub hamiltonian: Hamiltonian,
    pub terms: Vec<DissipatorTerm>,
}

impl Generator {
    pub fn new(hamiltonian: Hamiltonian, terms: Vec<DissipatorTerm>) -> Result<Self> {
        let dim = hamiltonian.dim();
        for t in &terms {
            if t.dim() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: t.dim() });
            }
        }
        Ok(Self { hamiltonian, terms })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    /// `L_t[ρ]` by dense matrix products; the reference the compiled kernel is
    /// checked against.
    pub fn rhs(&self, t: f64, rho: &CMatrix) -> Result<CMatrix> {
        if rho.nrows() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: rho.nrows() });
        }
        let h = self.hamiltonian.at(t);
        let mut out = (h.matrix() * rho - rho * h.matrix()) * (-I);
        for term in &self.terms {
            out += dissipator_apply_at(term, rho, t)?;
        }
        Ok(out)
    }

    fn compile(&self) -> Kernel {
        let d = self.dim();
        let mut left = CMatrix::zeros(d, d);
        let mut right = CMatrix::zeros(d, d);
        let mut modulated = Vec::new();
        for (h, f) in self.hamiltonian.parts() {
            match f {
                Modulation::Constant => {
                    left -= h.matrix() * I;
                    right += h.matrix() * I;
                }
                _ => modulated.push((*f, SparseOp::from_dense(h.matrix()))),
            }
        }
        let mut jumps = Vec::new();
        let mut rotating = Vec::new();
        for term in &self.terms {
            if term.rate == C64::new(0.0, 0.0) {
                continue;
            }
            let a = term.op_left.matrix();
            let b = term.op_right.matrix();
            let ba = b * a;
            if term.rotation == 0.0 {
                let half = term.rate * 0.5;
                left -= &ba * half;
                right -= &ba * half;
                jumps.push((term.rate, SparseOp::from_dense(a), SparseOp::from_dense(b)));
            } else {
                rotating.push(RotatingTerm {
                    rate: term.rate,
                    rotation: term.rotation,
                    a: SparseOp::from_dense(a),
                    b: SparseOp::from_dense(b),
                    ba: SparseOp::from_dense(&ba),
                });
            }
        }
        Kernel {
            dim: d,
            left: SparseOp::from_dense(&left),
            right: SparseOp::from_dense(&right),
            jumps,
            modulated,
            rotating,
        }
    }

    /// Upper bound on the spectral radius of the superoperator.
    fn spectral_bound(&self) -> f64 {
        let norm = |m: &CMatrix| SparseOp::from_dense(m).row_norm().max(SparseOp::from_dense(m).col_norm());
        let mut bound = 0.0;
        for (h, _) in self.hamiltonian.parts() {
            bound += 2.0 * norm(h.matrix());
        }
        for term in &self.terms {
            let a = term.op_left.matrix();
            let b = term.op_right.matrix();
            bound += term.rate.norm() * (norm(a) * norm(b) + norm(&(b * a)));
        }
        bound
    }
}

struct RotatingTerm {
    rate: C64,
    rotation: f64,
    a: SparseOp,
    b: SparseOp,
    ba: SparseOp,
}

/// `L_t[ρ] = Kρ + ρK' + Σ r AρB` with time-dependent pieces kept separate.
struct Kernel {
    dim: usize,
    left: SparseOp,
    right: SparseOp,
    jumps: Vec<(C64, SparseOp, SparseOp)>,
    modulated: Vec<(Modulation, SparseOp)>,
    rotating: Vec<RotatingTerm>,
}

impl Kernel {
    fn apply(&self, t: f64, rho: &[C64], out: &mut [C64], tmp: &mut [C64]) {
        let one = C64::new(1.0, 0.0);
        out.fill(C64::new(0.0, 0.0));
        self.left.left_mul_acc(one, rho, out);
        self.right.right_mul_acc(one, rho, out);
        for (rate, a, b) in &self.jumps {
            a.left_mul_into(rho, tmp);
            b.right_mul_acc(*rate, tmp, out);
        }
        for (f, h) in &self.modulated {
            let c = f.at(t);
            if c != 0.0 {
                h.left_mul_acc(-I * c, rho, out);
                h.right_mul_acc(I * c, rho, out);
            }
        }
        for term in &self.rotating {
            let rate = term.rate * C64::from_polar(1.0, term.rotation * t);
            term.a.left_mul_into(rho, tmp);
            term.b.right_mul_acc(rate, tmp, out);
            term.ba.left_mul_acc(-rate * 0.5, rho, out);
            term.ba.right_mul_acc(-rate * 0.5, rho, out);
        }
    }
}

/// What the step-halving loop watches for convergence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convergence {
    /// Diagonal of ρ at every output time.
    Populations,
    /// Every entry of ρ at every output time.
    FullState,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepControl {
    /// Starting step; `None` picks `2/λ` with λ a bound on the generator's spectral radius.
    pub initial_dt: Option<f64>,
    /// Accept a run once halving the step changes the watched quantity by less than this.
    pub tolerance: f64,
    pub max_refinements: u32,
    pub convergence: Convergence,
    /// Compute the smallest eigenvalue at every n-th output sample (0 = never).
    pub eigen_every: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            initial_dt: None,
            tolerance: 1e-6,
            max_refinements: 10,
            convergence: Convergence::Populations,
            eigen_every: 1,
        }
    }
}

/// Conservation diagnostics at one output sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Diagnostics {
    pub trace_error: f64,
    /// Largest `|ρ − ρ†|` seen before symmetrization since the previous sample.
    pub hermiticity_error: f64,
    /// NaN when not computed at this sample.
    pub min_eigenvalue: f64,
}

impl Diagnostics {
    pub fn within_tolerance(&self) -> bool {
        self.trace_error < TRACE_TOL
            && self.hermiticity_error < HERMITIAN_TOL
            && (self.min_eigenvalue.is_nan() || self.min_eigenvalue >= MIN_EIGEN_TOL)
    }
}

/// Worst values over a run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagnosticsSummary {
    pub max_trace_error: f64,
    pub max_hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

impl DiagnosticsSummary {
    pub fn of(diags: &[Diagnostics]) -> Self {
        Self {
            max_trace_error: diags.iter().map(|d| d.trace_error).fold(0.0, f64::max),
            max_hermiticity_error: diags.iter().map(|d| d.hermiticity_error).fold(0.0, f64::max),
            min_eigenvalue: diags
                .iter()
                .map(|d| d.min_eigenvalue)
                .filter(|v| !v.is_nan())
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub fn within_tolerance(&self) -> bool {
        self.max_trace_error < TRACE_TOL
            && self.max_hermiticity_error < HERMITIAN_TOL
            && self.min_eigenvalue >= MIN_EIGEN_TOL
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<CMatrix>,
    pub diagnostics: Vec<Diagnostics>,
    pub dt: f64,
    pub refinements: u32,
}

impl Trajectory {
    /// Any sample outside the conservation tolerances.
    pub fn flagged(&self) -> bool {
        !self.diagnostics.iter().all(Diagnostics::within_tolerance)
    }

    pub fn summary(&self) -> DiagnosticsSummary {
        DiagnosticsSummary::of(&self.diagnostics)
    }

    /// `⟨ψ|ρ(t)|ψ⟩` at every sample.
    pub fn overlap_trace(&self, psi: &nalgebra::DVector<C64>) -> Vec<f64> {
        self.states.iter().map(|rho| psi.dotc(&(rho * psi)).re).collect()
    }

    pub fn population_trace(&self, n: usize) -> Vec<f64> {
        self.states.iter().map(|rho| rho[(n, n)].re).collect()
    }
}

/// Output of [`evolve_observed`]: user observables instead of full states.
#[derive(Clone, Debug)]
pub struct ObservedTrajectory {
    pub times: Vec<f64>,
    /// `values[k]` holds the observables at `times[k]`.
    pub values: Vec<Vec<f64>>,
    pub diagnostics: Vec<Diagnostics>,
    pub final_state: CMatrix,
    pub dt: f64,
    pub refinements: u32,
}

impl ObservedTrajectory {
    pub fn flagged(&self) -> bool {
        !self.diagnostics.iter().all(Diagnostics::within_tolerance)
    }

    pub fn summary(&self) -> DiagnosticsSummary {
        DiagnosticsSummary::of(&self.diagnostics)
    }

    /// Trace of observable `j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.iter().map(|v| v[j]).collect()
    }
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::InvalidParameter("time grid is empty".into()));
    }
    if t_grid.iter().any(|t| !t.is_finite()) || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("time grid must be finite and strictly increasing".into()));
    }
    Ok(())
}

fn initial_density(generator: &Generator, rho0: &QuantumState) -> Result<CMatrix> {
    if rho0.dim() != generator.dim() {
        return Err(Error::DimensionMismatch { left: generator.dim(), right: rho0.dim() });
    }
    Ok(rho0.to_density())
}

/// One fixed-step pass over the grid; `sample` sees ρ at every output time.
fn run_fixed(
    kernel: &Kernel,
    rho0: &CMatrix,
    t_grid: &[f64],
    dt: f64,
    eigen_every: usize,
    sample: &mut dyn FnMut(usize, &CMatrix),
) -> Vec<Diagnostics> {
    let d = kernel.dim;
    let n = d * d;
    let mut rho = rho0.clone();
    let zero = C64::new(0.0, 0.0);
    let (mut k1, mut k2, mut k3, mut k4) = (vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n]);
    let mut stage = vec![zero; n];
    let mut tmp = vec![zero; n];
    let mut diags = Vec::with_capacity(t_grid.len());
    let mut herm_worst = 0.0f64;

    let mut record = |k: usize, rho: &CMatrix, herm: f64, diags: &mut Vec<Diagnostics>| {
        let trace_error = (linalg::trace(rho) - C64::from(1.0)).norm();
        let min_eigenvalue = if eigen_every > 0 && k.is_multiple_of(eigen_every) {
            linalg::min_eigenvalue(rho)
        } else {
            f64::NAN
        };
        diags.push(Diagnostics { trace_error, hermiticity_error: herm, min_eigenvalue });
        sample(k, rho);
    };

    record(0, &rho, linalg::hermiticity_error(&rho), &mut diags);
    for k in 1..t_grid.len() {
        let (t0, t1) = (t_grid[k - 1], t_grid[k]);
        let steps = ((t1 - t0) / dt).ceil().max(1.0) as usize;
        let h = (t1 - t0) / steps as f64;
        for s in 0..steps {
            let t = t0 + s as f64 * h;
            let y = rho.as_mut_slice();
            kernel.apply(t, y, &mut k1, &mut tmp);
            for ((o, &a), &b) in stage.iter_mut().zip(y.iter()).zip(&k1) {
                *o = a + b * (h / 2.0);
            }
            kernel.apply(t + h / 2.0, &stage, &mut k2, &mut tmp);
            for ((o, &a), &b) in stage.iter_mut().zip(y.iter()).zip(&k2) {
                *o = a + b * (h / 2.0);
            }
            kernel.apply(t + h / 2.0, &stage, &mut k3, &mut tmp);
            for ((o, &a), &b) in stage.iter_mut().zip(y.iter()).zip(&k3) {
                *o = a + b * h;
            }
            kernel.apply(t + h, &stage, &mut k4, &mut tmp);
            for (i, v) in y.iter_mut().enumerate() {
                *v += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
            }
            herm_worst = herm_worst.max(linalg::hermiticity_error(&rho));
            linalg::hermitize(&mut rho);
        }
        record(k, &rho, herm_worst, &mut diags);
        herm_worst = 0.0;
    }
    diags
}

fn max_change(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}

fn starting_dt(generator: &Generator, control: &StepControl, t_grid: &[f64]) -> f64 {
    // every halving must change the per-interval step count, so never start
    // above the smallest output spacing
    let gap = t_grid.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let auto = 2.0 / generator.spectral_bound().max(1e-300);
    let dt = control.initial_dt.unwrap_or(auto);
    if gap.is_finite() {
        dt.min(gap)
    } else {
        dt
    }
}

/// Integrate and record user observables at each output time. The step is
/// halved until the observables move by less than `control.tolerance`.
pub fn evolve_observed(
    generator: &Generator,
    rho0: &QuantumState,
    t_grid: &[f64],
    control: &StepControl,
    observe: &dyn Fn(&CMatrix) -> Vec<f64>,
) -> Result<ObservedTrajectory> {
    check_grid(t_grid)?;
    let rho0 = initial_density(generator, rho0)?;
    let kernel = generator.compile();
    let mut dt = starting_dt(generator, control, t_grid);
    let mut previous: Option<Vec<Vec<f64>>> = None;
    let mut change = f64::INFINITY;
    for refinement in 0..=control.max_refinements {
        let mut values = Vec::with_capacity(t_grid.len());
        let mut last = rho0.clone();
        let diagnostics = run_fixed(&kernel, &rho0, t_grid, dt, control.eigen_every, &mut |k, rho| {
            values.push(observe(rho));
            if k + 1 == t_grid.len() {
                last = rho.clone();
            }
        });
        if let Some(prev) = &previous {
            change = max_change(prev, &values);
            if change < control.tolerance {
                return Ok(ObservedTrajectory {
                    times: t_grid.to_vec(),
                    values,
                    diagnostics,
                    final_state: last,
                    dt,
                    refinements: refinement,
                });
            }
        }
        previous = Some(values);
        dt /= 2.0;
    }
    Err(Error::NonconvergentIntegration { refinements: control.max_refinements, change })
}

/// Integrate and keep the full density matrix at each output time.
pub fn evolve(generator: &Generator, rho0: &QuantumState, t_grid: &[f64], control: &StepControl) -> Result<Trajectory> {
    check_grid(t_grid)?;
    let rho0 = initial_density(generator, rho0)?;
    let kernel = generator.compile();
    let d = generator.dim();
    let watch = |rho: &CMatrix| -> Vec<f64> {
        match control.convergence {
            Convergence::Populations => (0..d).map(|n| rho[(n, n)].re).collect(),
            Convergence::FullState => rho.iter().flat_map(|z| [z.re, z.im]).collect(),
        }
    };
    let mut dt = starting_dt(generator, control, t_grid);
    let mut previous: Option<Vec<Vec<f64>>> = None;
    let mut change = f64::INFINITY;
    for refinement in 0..=control.max_refinements {
        let mut states = Vec::with_capacity(t_grid.len());
        let diagnostics = run_fixed(&kernel, &rho0, t_grid, dt, control.eigen_every, &mut |_, rho| {
            states.push(rho.clone())
        });
        let values: Vec<Vec<f64>> = states.iter().map(watch).collect();
        if let Some(prev) = &previous {
            change = max_change(prev, &values);
            if change < control.tolerance {
                return Ok(Trajectory { times: t_grid.to_vec(), states, diagnostics, dt, refinements: refinement });
            }
        }
        previous = Some(values);
        dt /= 2.0;
    }
    Err(Error::NonconvergentIntegration { refinements: control.max_refinements, change })
}

/// Lab-frame generator: `ω_a a†a + K a†a†aa + Ω_p cos(2ω_p t) X²` with bare
/// decay `γ₀` on `a`.
pub fn lab_frame_generator(params: &ModelParams) -> Result<Generator> {
    let (h0, pump) = model::hamiltonian_lab_parts(params)?;
    let h = Hamiltonian::constant(h0).with_part(pump, Modulation::Cosine { omega: 2.0 * params.omega_p, phase: 0.0 })?;
    let a = fock::annihilation(params.dim)?;
    Generator::new(h, vec![DissipatorTerm::decay(params.gamma0, &a)])
}

pub fn evolve_lab_frame(
    params: &ModelParams,
    rho0: &QuantumState,
    t_grid: &[f64],
    control: &StepControl,
) -> Result<Trajectory> {
    evolve(&lab_frame_generator(params)?, rho0, t_grid, control)
}

/// `e^{iωnt} ρ e^{−iωnt}`: a lab-frame state seen from the frame rotating at ω.
pub fn to_rotating_frame(rho: &CMatrix, omega: f64, t: f64) -> CMatrix {
    CMatrix::from_fn(rho.nrows(), rho.ncols(), |m, n| {
        rho[(m, n)] * C64::from_polar(1.0, omega * (m as f64 - n as f64) * t)
    })
}

/// Evenly spaced grid with `points` samples over `[t0, t1]`.
pub fn linspace(t0: f64, t1: f64, points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![t0];
    }
    (0..points).map(|k| t0 + (t1 - t0) * k as f64 / (points - 1) as f64).collect()
}
