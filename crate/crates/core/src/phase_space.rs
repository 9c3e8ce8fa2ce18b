//! Quasi-probability distributions on rectangular phase-space grids.
//!
//! Conventions:
//! * [`wigner`] takes quadrature axes `(x, p)` with `α = (x + i p)/√2`, and is
//!   normalized so `∫ W dx dp = 1`. Vacuum gives `W(0,0) = 1/π`, `|1⟩` gives `−1/π`.
//! * [`qfunc`] takes `α` axes directly, `Q(α) = ⟨α|ρ|α⟩/π`, `∫ Q d²α = 1`.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::QuantumState;
use crate::linalg::CMatrix;

/// Levels whose population is below this are dropped before the O(d²) sums.
const SUPPORT_CUTOFF: f64 = 1e-18;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseSpaceGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub n_re: usize,
    pub n_im: usize,
}

impl PhaseSpaceGrid {
    pub fn new(re: (f64, f64), im: (f64, f64), n_re: usize, n_im: usize) -> Result<Self> {
        let g = Self { re_min: re.0, re_max: re.1, im_min: im.0, im_max: im.1, n_re, n_im };
        g.validate()?;
        Ok(g)
    }

    /// Square grid `[−half, half]²` with `n` points per axis.
    pub fn square(half: f64, n: usize) -> Result<Self> {
        Self::new((-half, half), (-half, half), n, n)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max].iter().all(|v| v.is_finite());
        if !finite || self.re_min >= self.re_max || self.im_min >= self.im_max {
            return Err(Error::InvalidParameter("phase-space bounds must be finite and ordered".into()));
        }
        if self.n_re < 2 || self.n_im < 2 {
            return Err(Error::InvalidParameter("phase-space grid needs at least 2 points per axis".into()));
        }
        Ok(())
    }

    pub fn re_step(&self) -> f64 {
        (self.re_max - self.re_min) / (self.n_re - 1) as f64
    }

    pub fn im_step(&self) -> f64 {
        (self.im_max - self.im_min) / (self.n_im - 1) as f64
    }

    pub fn re_at(&self, i: usize) -> f64 {
        self.re_min + i as f64 * self.re_step()
    }

    pub fn im_at(&self, j: usize) -> f64 {
        self.im_min + j as f64 * self.im_step()
    }

    pub fn cell_area(&self) -> f64 {
        self.re_step() * self.im_step()
    }

    pub fn len(&self) -> usize {
        self.n_re * self.n_im
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Real field sampled on a grid; `values[j * n_re + i]` sits at `(re_i, im_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    pub grid: PhaseSpaceGrid,
    pub values: Vec<f64>,
}

impl Field {
    pub fn at(&self, i_re: usize, j_im: usize) -> f64 {
        self.values[j_im * self.grid.n_re + i_re]
    }

    /// Riemann sum `Σ value · cell area`.
    pub fn integrate(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_area()
    }

    /// `(re, im, value)` triples in storage order.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.grid.n_im).flat_map(move |j| {
            (0..self.grid.n_re).map(move |i| (self.grid.re_at(i), self.grid.im_at(j), self.at(i, j)))
        })
    }

    pub fn max_abs_diff(&self, other: &Field) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::InvalidParameter("fields live on different grids".into()));
        }
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    /// Marginal variances `(Var re, Var im)` of the field treated as a density.
    pub fn variances(&self) -> (f64, f64) {
        let (mut m0, mut mx, mut my, mut mxx, mut myy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (x, y, w) in self.points() {
            m0 += w;
            mx += w * x;
            my += w * y;
            mxx += w * x * x;
            myy += w * y * y;
        }
        let (ex, ey) = (mx / m0, my / m0);
        (mxx / m0 - ex * ex, myy / m0 - ey * ey)
    }
}

fn support(rho: &CMatrix) -> usize {
    let d = rho.nrows();
    (0..d).rev().find(|&n| rho[(n, n)].re.abs() > SUPPORT_CUTOFF).map_or(1, |n| n + 1)
}

/// Wigner function at one phase-space point from the generalized-Laguerre
/// closed form of each `|m⟩⟨m+k|` contribution.
///
/// `h_m = √(m!/(m+k)!) L_m^k(B) · √k!` is advanced by its normalized
/// three-term recurrence, and the prefactor `(2|α|)^k e^{−B/2}/√k!` is formed
/// in log space, so nothing overflows for |α| up to ~10.
fn wigner_point(rho: &CMatrix, m_dim: usize, a: C64, ln_fact: &[f64]) -> f64 {
    let b = 4.0 * a.norm_sqr();
    let abs2 = 2.0 * a.norm();
    let phase = if a.norm() > 0.0 { a / a.norm() } else { C64::from(1.0) };
    let k_max = if abs2 > 0.0 { m_dim } else { 1 };
    let mut w = 0.0;
    let mut phase_k = C64::from(1.0);
    for k in 0..k_max {
        let kf = k as f64;
        let ln_pref = if k > 0 { kf * abs2.ln() } else { 0.0 } - 0.5 * ln_fact[k] - 0.5 * b;
        let mut h_prev = 0.0;
        let mut h = 1.0;
        let mut acc = C64::new(0.0, 0.0);
        for m in 0..m_dim - k {
            let mf = m as f64;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            acc += rho[(m, m + k)] * (sign * h);
            let next = ((2.0 * mf + 1.0 + kf - b) * h - (mf * (mf + kf)).sqrt() * h_prev)
                / ((mf + 1.0) * (mf + 1.0 + kf)).sqrt();
            h_prev = h;
            h = next;
        }
        let weight = if k == 0 { 1.0 } else { 2.0 };
        w += weight * (acc * phase_k).re * ln_pref.exp();
        phase_k *= phase;
    }
    w / std::f64::consts::PI
}

/// Wigner function on quadrature axes `(x, p)`.
pub fn wigner(state: &QuantumState, grid: &PhaseSpaceGrid) -> Result<Field> {
    grid.validate()?;
    let rho = state.to_density();
    let m_dim = support(&rho);
    let sqrt2 = std::f64::consts::SQRT_2;
    let ln_fact: Vec<f64> = std::iter::once(0.0)
        .chain((1..m_dim).scan(0.0, |acc, n| {
            *acc += (n as f64).ln();
            Some(*acc)
        }))
        .collect();
    let values = (0..grid.n_im)
        .into_par_iter()
        .flat_map_iter(|j| {
            let p = grid.im_at(j);
            (0..grid.n_re)
                .map(|i| wigner_point(&rho, m_dim, C64::new(grid.re_at(i), p) / sqrt2, &ln_fact))
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(Field { grid: *grid, values })
}

/// Normalized coherent-state amplitudes `⟨n|α⟩` on the truncated space.
pub fn coherent_amplitudes(alpha: C64, dim: usize) -> Vec<C64> {
    let mut c = Vec::with_capacity(dim);
    c.push(C64::from(1.0));
    for n in 1..dim {
        let prev = c[n - 1];
        c.push(prev * alpha / (n as f64).sqrt());
    }
    let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    c.iter_mut().for_each(|z| *z /= norm);
    c
}

/// Husimi Q function on `α = re + i·im` axes.
pub fn qfunc(state: &QuantumState, grid: &PhaseSpaceGrid) -> Result<Field> {
    grid.validate()?;
    let rho = state.to_density();
    let dim = rho.nrows();
    let m_dim = support(&rho);
    let values = (0..grid.n_im)
        .into_par_iter()
        .flat_map_iter(|j| {
            let rho = &rho;
            (0..grid.n_re)
                .map(move |i| {
                    let c = coherent_amplitudes(C64::new(grid.re_at(i), grid.im_at(j)), dim);
                    let mut acc = C64::new(0.0, 0.0);
                    for n in 0..m_dim {
                        let mut row = C64::new(0.0, 0.0);
                        for m in 0..m_dim {
                            row += rho[(m, n)] * c[m].conj();
                        }
                        acc += row * c[n];
                    }
                    acc.re / std::f64::consts::PI
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(Field { grid: *grid, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{self, QuantumState};
    use crate::linalg::expm;
    use std::f64::consts::{E, PI};

    fn pi_inv() -> f64 {
        1.0 / PI
    }

    fn origin_grid() -> PhaseSpaceGrid {
        PhaseSpaceGrid::new((-1.0, 1.0), (-1.0, 1.0), 3, 3).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(PhaseSpaceGrid::new((1.0, -1.0), (-1.0, 1.0), 5, 5).is_err());
        assert!(PhaseSpaceGrid::new((-1.0, 1.0), (-1.0, 1.0), 1, 5).is_err());
    }

    #[test]
    fn vacuum_and_one_phonon_at_origin() {
        let vac = QuantumState::fock(6, 0).unwrap();
        let one = QuantumState::fock(6, 1).unwrap();
        let g = origin_grid();
        assert!((wigner(&vac, &g).unwrap().at(1, 1) - pi_inv()).abs() < 1e-14);
        assert!((wigner(&one, &g).unwrap().at(1, 1) + pi_inv()).abs() < 1e-14);
        assert!((qfunc(&vac, &g).unwrap().at(1, 1) - pi_inv()).abs() < 1e-14);
        assert!(qfunc(&one, &g).unwrap().at(1, 1).abs() < 1e-14);
    }

    #[test]
    fn vacuum_q_on_unit_circle() {
        let vac = QuantumState::fock(30, 0).unwrap();
        let g = PhaseSpaceGrid::new((0.0, 1.0), (-1.0, 0.0), 2, 2).unwrap();
        let q = qfunc(&vac, &g).unwrap();
        // (re, im) = (1, 0) and (0, -1)
        assert!((q.at(1, 1) - 1.0 / (E * PI)).abs() < 1e-14);
        assert!((q.at(0, 0) - 1.0 / (E * PI)).abs() < 1e-14);
    }

    /// Oracle: W(α) = (1/π) Tr[ρ D(α) P D(α)†] with P the parity operator and
    /// the displacement built by dense matrix exponential.
    #[test]
    fn wigner_matches_displaced_parity() {
        let dim = 40;
        let psi = nalgebra::DVector::from_fn(dim, |n, _| {
            if n < 4 {
                C64::new(1.0 + n as f64, 0.3 * n as f64)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let state = QuantumState::ket_normalized(psi).unwrap();
        let rho = state.to_density();
        let a = fock::annihilation(dim).unwrap();
        let parity = CMatrix::from_diagonal(&nalgebra::DVector::from_fn(dim, |n, _| {
            C64::from(if n % 2 == 0 { 1.0 } else { -1.0 })
        }));
        let grid = PhaseSpaceGrid::new((-1.2, 0.9), (-0.7, 1.1), 4, 3).unwrap();
        let w = wigner(&state, &grid).unwrap();
        for (x, p, value) in w.points() {
            let alpha = C64::new(x, p) / 2f64.sqrt();
            let gen = a.matrix().adjoint() * alpha - a.matrix() * alpha.conj();
            let d = expm(&gen);
            let oracle = (&d * &parity * d.adjoint() * &rho).trace().re / PI;
            assert!((value - oracle).abs() < 1e-10, "({x},{p}): {value} vs {oracle}");
        }
    }

    #[test]
    fn normalization_on_six_sigma_grid() {
        let dim = 120;
        let state = fock::squeezed_fock(dim, 1, 0.5, PI).unwrap();
        // widest quadrature std is e^{r}·√(3/2) for |1⟩_S
        let half = 6.0 * 0.5f64.exp() * 1.5f64.sqrt();
        let g = PhaseSpaceGrid::square(half, 121).unwrap();
        assert!((wigner(&state, &g).unwrap().integrate() - 1.0).abs() < 0.02);
        let gq = PhaseSpaceGrid::square(half / 2f64.sqrt() + 2.0, 121).unwrap();
        assert!((qfunc(&state, &gq).unwrap().integrate() - 1.0).abs() < 0.02);
    }

    /// Oracle: Gaussian covariance of S|0⟩, Var x = e^{2r}/2, Var p = e^{−2r}/2 at θ = π.
    #[test]
    fn squeezed_vacuum_marginal_variances() {
        let r = 1.0;
        let dim = fock::required_dim(r, PI, 0).unwrap();
        let state = fock::squeezed_fock(dim, 0, r, PI).unwrap();
        let g = PhaseSpaceGrid::new((-14.0, 14.0), (-3.0, 3.0), 141, 61).unwrap();
        let (vx, vp) = wigner(&state, &g).unwrap().variances();
        assert!((vx / 0.5 - (2.0 * r).exp()).abs() < 1e-3 * (2.0 * r).exp(), "{vx}");
        assert!((vp / 0.5 - (-2.0 * r).exp()).abs() < 1e-3, "{vp}");
    }

    #[test]
    fn q_is_bounded() {
        let state = fock::squeezed_fock(80, 2, 0.6, 0.3).unwrap();
        let g = PhaseSpaceGrid::square(3.0, 25).unwrap();
        for v in qfunc(&state, &g).unwrap().values {
            assert!(v >= -1e-15 && v <= 1.0 / PI + 1e-15);
        }
    }
}
