//! Truncated bosonic Hilbert space: ladder operators, the squeezing operator,
//! squeezed Fock states and the density-matrix/ket state type.
//!
//! A Fock space of dimension `dim` keeps the number states `|0⟩ … |dim−1⟩`.
//! The squeezing operator follows `S(ξ) = exp[(ξ* a² − ξ a†²)/2]` with
//! `ξ = r e^{iθ}`, so that `S a S† = cosh r · a + e^{iθ} sinh r · a†`.
//! θ = π squeezes momentum.

use std::ops::{Add, Mul, Sub};

use nalgebra::DVector;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::sparse::SparseOp;

/// Number of top Fock levels inspected by the truncation guard.
pub const TAIL_LEVELS: usize = 5;
/// Maximum population a guarded squeezed state may keep in the top levels.
pub const TAIL_TOLERANCE: f64 = 1e-8;

const KET_NORM_TOL: f64 = 1e-10;
const DENSITY_HERMITIAN_TOL: f64 = 1e-10;
const DENSITY_TRACE_TOL: f64 = 1e-10;
const DENSITY_MIN_EIG_TOL: f64 = -1e-8;

/// Dense operator on a truncated Fock space.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    mat: CMatrix,
}

impl Operator {
    pub fn from_matrix(mat: CMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::InvalidParameter(format!(
                "operator matrix must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        check_dim(mat.nrows())?;
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("operator has non-finite entries".into()));
        }
        Ok(Self { mat })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { mat: CMatrix::zeros(dim, dim) })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { mat: CMatrix::identity(dim, dim) })
    }

    /// Diagonal operator with the given real entries.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        check_dim(values.len())?;
        let diag = DVector::from_iterator(values.len(), values.iter().map(|&v| C64::from(v)));
        Ok(Self { mat: CMatrix::from_diagonal(&diag) })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn dagger(&self) -> Self {
        Self { mat: self.mat.adjoint() }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { mat: &self.mat * c }
    }

    pub fn try_mul(&self, rhs: &Operator) -> Result<Operator> {
        same_dim(self.dim(), rhs.dim())?;
        Ok(Self { mat: &self.mat * &rhs.mat })
    }

    /// `[self, other]`
    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        same_dim(self.dim(), other.dim())?;
        Ok(Self { mat: &self.mat * &other.mat - &other.mat * &self.mat })
    }

    /// `U · self · U†`
    pub fn conjugate_by(&self, u: &Operator) -> Result<Operator> {
        same_dim(self.dim(), u.dim())?;
        Ok(Self { mat: &u.mat * &self.mat * u.mat.adjoint() })
    }

    /// Largest `|H − H†|` entry divided by the largest entry (0 for the zero operator).
    pub fn relative_hermiticity_error(&self) -> f64 {
        let scale = linalg::max_abs(&self.mat);
        if scale == 0.0 {
            0.0
        } else {
            linalg::hermiticity_error(&self.mat) / scale
        }
    }

    /// Copy into a `dim`-level space, padding with zeros or truncating.
    pub fn resized(&self, dim: usize) -> Result<Operator> {
        check_dim(dim)?;
        let keep = dim.min(self.dim());
        let mut mat = CMatrix::zeros(dim, dim);
        mat.view_mut((0, 0), (keep, keep))
            .copy_from(&self.mat.view((0, 0), (keep, keep)));
        Ok(Self { mat })
    }

    pub(crate) fn to_sparse(&self) -> SparseOp {
        SparseOp::from_dense(&self.mat)
    }
}

impl<'a> Mul<&'a Operator> for &'a Operator {
    type Output = Operator;

    /// Panics on mismatched dimensions; see [`Operator::try_mul`].
    fn mul(self, rhs: &'a Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
        Operator { mat: &self.mat * &rhs.mat }
    }
}

impl<'a> Add<&'a Operator> for &'a Operator {
    type Output = Operator;

    fn add(self, rhs: &'a Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
        Operator { mat: &self.mat + &rhs.mat }
    }
}

impl<'a> Sub<&'a Operator> for &'a Operator {
    type Output = Operator;

    fn sub(self, rhs: &'a Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
        Operator { mat: &self.mat - &rhs.mat }
    }
}

impl Mul<C64> for &Operator {
    type Output = Operator;

    fn mul(self, c: C64) -> Operator {
        self.scale(c)
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;

    fn mul(self, c: f64) -> Operator {
        self.scale(C64::from(c))
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        Err(Error::InvalidDimension { dim })
    } else {
        Ok(())
    }
}

fn same_dim(left: usize, right: usize) -> Result<()> {
    if left != right {
        Err(Error::DimensionMismatch { left, right })
    } else {
        Ok(())
    }
}

/// Bosonic annihilation operator: entry `(n−1, n) = √n`.
pub fn annihilation(dim: usize) -> Result<Operator> {
    check_dim(dim)?;
    let mut mat = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        mat[(n - 1, n)] = C64::from((n as f64).sqrt());
    }
    Ok(Operator { mat })
}

pub fn creation(dim: usize) -> Result<Operator> {
    Ok(annihilation(dim)?.dagger())
}

/// `a†a`, built directly as diag(0, 1, …, dim−1).
pub fn number(dim: usize) -> Result<Operator> {
    let values: Vec<f64> = (0..dim).map(|n| n as f64).collect();
    Operator::diagonal(&values)
}

/// `a†a†aa` = diag(n(n−1)).
pub fn kerr(dim: usize) -> Result<Operator> {
    let values: Vec<f64> = (0..dim).map(|n| (n * n.saturating_sub(1)) as f64).collect();
    Operator::diagonal(&values)
}

/// Bogoliubov mode `cosh r · a + e^{iθ} sinh r · a†` on the truncated space.
pub fn bogoliubov_mode(dim: usize, r: f64, theta: f64) -> Result<Operator> {
    let a = annihilation(dim)?;
    let ad = a.dagger();
    Ok(&(&a * r.cosh()) + &(&ad * (C64::from_polar(1.0, theta) * r.sinh())))
}

/// Anti-Hermitian squeeze generator `(ξ* a² − ξ a†²)/2`, `ξ = r e^{iθ}`.
pub fn squeeze_generator(dim: usize, r: f64, theta: f64) -> Result<Operator> {
    let a = annihilation(dim)?;
    let a2 = &a * &a;
    let ad2 = a2.dagger();
    let xi = C64::from_polar(r, theta);
    Ok(&(&a2 * (xi.conj() * 0.5)) - &(&ad2 * (xi * 0.5)))
}

fn check_squeezing(r: f64, theta: f64) -> Result<()> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::InvalidParameter(format!("squeezing r must be finite and ≥ 0, got {r}")));
    }
    if !theta.is_finite() {
        return Err(Error::InvalidParameter("squeezing phase must be finite".into()));
    }
    Ok(())
}

/// `exp(G) v` for a sparse anti-Hermitian generator, by Taylor series over
/// `ceil(‖G‖₁)` sub-steps.
fn expm_multiply(gen: &SparseOp, v: &[C64]) -> Vec<C64> {
    let steps = gen.col_norm().ceil().max(1.0) as usize;
    let inv = 1.0 / steps as f64;
    let mut out = v.to_vec();
    for _ in 0..steps {
        let mut term = out.clone();
        let mut acc = out.clone();
        for k in 1..80 {
            term = gen.apply(&term);
            let f = inv / k as f64;
            term.iter_mut().for_each(|z| *z *= f);
            let tn: f64 = term.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            acc.iter_mut().zip(&term).for_each(|(a, t)| *a += t);
            if tn < 1e-18 {
                break;
            }
        }
        out = acc;
    }
    out
}

/// `S|n⟩` on the truncated space, without building the dense `S`.
fn squeezed_column(dim: usize, n: usize, r: f64, theta: f64) -> Result<Vec<C64>> {
    let gen = squeeze_generator(dim, r, theta)?.to_sparse();
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[n] = C64::new(1.0, 0.0);
    Ok(expm_multiply(&gen, &v))
}

fn top_population(v: &[C64]) -> f64 {
    let dim = v.len();
    v[dim.saturating_sub(TAIL_LEVELS)..].iter().map(|z| z.norm_sqr()).sum()
}

/// Population that `S|n⟩` keeps in the top [`TAIL_LEVELS`] Fock levels.
pub fn tail_population(dim: usize, n: usize, r: f64, theta: f64) -> Result<f64> {
    check_squeezing(r, theta)?;
    if n >= dim {
        return Err(Error::InvalidParameter(format!("level {n} outside dimension {dim}")));
    }
    Ok(top_population(&squeezed_column(dim, n, r, theta)?))
}

/// Heuristic starting dimension `max(64, ⌈20 e^{2r}⌉)`.
pub fn heuristic_dim(r: f64) -> usize {
    64usize.max((20.0 * (2.0 * r).exp()).ceil() as usize)
}

fn guard_passes(dim: usize, n_max: usize, r: f64, theta: f64) -> Result<bool> {
    if 4 * n_max >= dim {
        return Ok(false);
    }
    for n in 0..=n_max {
        if tail_population(dim, n, r, theta)? >= TAIL_TOLERANCE {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Default truncation for squeezed states up to `|n_max⟩_S`: start from
/// [`heuristic_dim`] and grow by 25% until the tail guard passes.
pub fn required_dim(r: f64, theta: f64, n_max: usize) -> Result<usize> {
    check_squeezing(r, theta)?;
    let mut dim = heuristic_dim(r).max(4 * n_max + 1);
    while !guard_passes(dim, n_max, r, theta)? {
        dim += (dim / 4).max(1);
        if dim > 1 << 14 {
            return Err(Error::InvalidParameter(format!("squeezing r = {r} needs an impractical truncation")));
        }
    }
    Ok(dim)
}

/// Smallest truncation (scanning upward from `4 n_max + 1`, step 8) that passes
/// the tail guard. Cheaper simulations than [`required_dim`].
pub fn minimal_dim(r: f64, theta: f64, n_max: usize) -> Result<usize> {
    check_squeezing(r, theta)?;
    let mut dim = (4 * n_max + 1).max(8);
    while !guard_passes(dim, n_max, r, theta)? {
        dim += 8;
        if dim > 1 << 14 {
            return Err(Error::InvalidParameter(format!("squeezing r = {r} needs an impractical truncation")));
        }
    }
    Ok(dim)
}

/// Number of low levels `0..k` whose squeezed images pass the tail guard.
pub fn guarded_levels(dim: usize, r: f64, theta: f64) -> Result<usize> {
    check_squeezing(r, theta)?;
    let gen = squeeze_generator(dim, r, theta)?.to_sparse();
    let mut k = 0;
    while k < dim {
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[k] = C64::new(1.0, 0.0);
        if top_population(&expm_multiply(&gen, &v)) >= TAIL_TOLERANCE {
            break;
        }
        k += 1;
    }
    Ok(k)
}

/// Dense squeezing operator `S = exp[(ξ* a² − ξ a†²)/2]`, `ξ = r e^{iθ}`.
///
/// Fails with [`Error::TruncationTooSmall`] when the squeezed vacuum leaks
/// into the top levels.
pub fn squeeze_operator(dim: usize, r: f64, theta: f64) -> Result<Operator> {
    check_squeezing(r, theta)?;
    check_dim(dim)?;
    if !guard_passes(dim, 0, r, theta)? {
        return Err(Error::TruncationTooSmall { dim, required: required_dim(r, theta, 0)? });
    }
    let gen = squeeze_generator(dim, r, theta)?;
    Ok(Operator { mat: linalg::expm(gen.matrix()) })
}

/// Squeezed Fock state `|n⟩_S = S|n⟩`.
pub fn squeezed_fock(dim: usize, n: usize, r: f64, theta: f64) -> Result<QuantumState> {
    check_squeezing(r, theta)?;
    check_dim(dim)?;
    if !guard_passes(dim, n, r, theta)? {
        return Err(Error::TruncationTooSmall { dim, required: required_dim(r, theta, n)? });
    }
    let v = squeezed_column(dim, n, r, theta)?;
    QuantumState::ket_normalized(DVector::from_vec(v))
}

/// Ket or density matrix on a truncated Fock space.
#[derive(Clone, Debug, PartialEq)]
pub enum QuantumState {
    Ket(DVector<C64>),
    Density(CMatrix),
}

impl QuantumState {
    /// Validated ket; the norm must already be 1 within 1e−10.
    pub fn ket(v: DVector<C64>) -> Result<Self> {
        check_dim(v.len())?;
        let norm = v.norm();
        if (norm - 1.0).abs() > KET_NORM_TOL {
            return Err(Error::InvalidState(format!("ket norm {norm} differs from 1")));
        }
        Ok(Self::Ket(v))
    }

    pub fn ket_normalized(v: DVector<C64>) -> Result<Self> {
        check_dim(v.len())?;
        let norm = v.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidState("ket has zero or non-finite norm".into()));
        }
        Ok(Self::Ket(v / C64::from(norm)))
    }

    /// Validated density matrix: Hermitian and unit trace within 1e−10,
    /// smallest eigenvalue ≥ −1e−8.
    pub fn density(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidState("density matrix must be square".into()));
        }
        check_dim(m.nrows())?;
        let herm = linalg::hermiticity_error(&m);
        if herm > DENSITY_HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("density matrix not Hermitian (error {herm:e})")));
        }
        let tr = linalg::trace(&m);
        if (tr - C64::from(1.0)).norm() > DENSITY_TRACE_TOL {
            return Err(Error::InvalidState(format!("density matrix trace {tr} differs from 1")));
        }
        let min = linalg::min_eigenvalue(&m);
        if min < DENSITY_MIN_EIG_TOL {
            return Err(Error::InvalidState(format!("density matrix has eigenvalue {min:e}")));
        }
        Ok(Self::Density(m))
    }

    /// Fock state `|n⟩`.
    pub fn fock(dim: usize, n: usize) -> Result<Self> {
        check_dim(dim)?;
        if n >= dim {
            return Err(Error::InvalidParameter(format!("level {n} outside dimension {dim}")));
        }
        let mut v = DVector::zeros(dim);
        v[n] = C64::from(1.0);
        Ok(Self::Ket(v))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Ket(v) => v.len(),
            Self::Density(m) => m.nrows(),
        }
    }

    pub fn to_density(&self) -> CMatrix {
        match self {
            Self::Ket(v) => v * v.adjoint(),
            Self::Density(m) => m.clone(),
        }
    }

    /// `⟨ψ|ρ|ψ⟩` for a normalized ket `ψ`.
    pub fn overlap_with(&self, psi: &DVector<C64>) -> f64 {
        match self {
            Self::Ket(v) => psi.dotc(v).norm_sqr(),
            Self::Density(m) => psi.dotc(&(m * psi)).re,
        }
    }

    /// Fidelity with a pure state, `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity(&self, other: &QuantumState) -> Result<f64> {
        same_dim(self.dim(), other.dim())?;
        match other {
            Self::Ket(psi) => Ok(self.overlap_with(psi)),
            Self::Density(_) => match self {
                Self::Ket(psi) => Ok(other.overlap_with(psi)),
                Self::Density(_) => Err(Error::InvalidParameter(
                    "fidelity between two mixed states is not supported".into(),
                )),
            },
        }
    }

    /// Population of Fock level `n`.
    pub fn population(&self, n: usize) -> f64 {
        match self {
            Self::Ket(v) => v[n].norm_sqr(),
            Self::Density(m) => m[(n, n)].re,
        }
    }

    pub fn expectation(&self, op: &Operator) -> Result<C64> {
        same_dim(self.dim(), op.dim())?;
        Ok(match self {
            Self::Ket(v) => v.dotc(&(op.matrix() * v)),
            Self::Density(m) => linalg::trace(&(op.matrix() * m)),
        })
    }

    /// Apply a unitary: `U|ψ⟩` or `UρU†`.
    pub fn transformed(&self, u: &Operator) -> Result<Self> {
        same_dim(self.dim(), u.dim())?;
        Ok(match self {
            Self::Ket(v) => Self::Ket(u.matrix() * v),
            Self::Density(m) => Self::Density(u.matrix() * m * u.matrix().adjoint()),
        })
    }

    /// Zero-pad into a larger space, or truncate (no renormalization).
    pub fn resized(&self, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let keep = dim.min(self.dim());
        Ok(match self {
            Self::Ket(v) => {
                let mut out = DVector::zeros(dim);
                out.rows_mut(0, keep).copy_from(&v.rows(0, keep));
                Self::Ket(out)
            }
            Self::Density(m) => {
                let mut out = CMatrix::zeros(dim, dim);
                out.view_mut((0, 0), (keep, keep)).copy_from(&m.view((0, 0), (keep, keep)));
                Self::Density(out)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn annihilation_on_three_levels() {
        let a = annihilation(3).unwrap();
        let m = a.matrix();
        assert_eq!(m[(0, 1)], C64::from(1.0));
        assert!((m[(1, 2)] - C64::from(2f64.sqrt())).norm() < 1e-15);
        let nonzero = m.iter().filter(|z| z.norm() > 0.0).count();
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn dimension_below_two_rejected() {
        assert!(matches!(annihilation(1), Err(Error::InvalidDimension { dim: 1 })));
        assert!(matches!(annihilation(0), Err(Error::InvalidDimension { dim: 0 })));
    }

    #[test]
    fn creation_times_annihilation_is_number() {
        for dim in [2, 5, 17] {
            let n = &creation(dim).unwrap() * &annihilation(dim).unwrap();
            assert!(linalg::max_abs(&(n.matrix() - number(dim).unwrap().matrix())) < 1e-14);
        }
    }

    #[test]
    fn commutator_has_single_corner_defect() {
        let dim = 9;
        let a = annihilation(dim).unwrap();
        let c = a.commutator(&a.dagger()).unwrap();
        for i in 0..dim {
            for j in 0..dim {
                let expected = match (i, j) {
                    (i, j) if i == j && i == dim - 1 => 1.0 - dim as f64,
                    (i, j) if i == j => 1.0,
                    _ => 0.0,
                };
                assert!((c.matrix()[(i, j)] - C64::from(expected)).norm() < 1e-13, "({i},{j})");
            }
        }
    }

    #[test]
    fn mismatched_products_error() {
        let a = annihilation(3).unwrap();
        let b = annihilation(4).unwrap();
        assert!(matches!(a.try_mul(&b), Err(Error::DimensionMismatch { left: 3, right: 4 })));
        assert!(a.commutator(&b).is_err());
    }

    #[test]
    fn zero_squeezing_is_identity() {
        let s = squeeze_operator(12, 0.0, PI).unwrap();
        assert!(linalg::max_abs(&(s.matrix() - CMatrix::identity(12, 12))) < 1e-15);
    }

    #[test]
    fn squeezed_vacuum_has_even_support() {
        let s = squeeze_operator(96, 0.8, PI).unwrap();
        for n in (1..96).step_by(2) {
            assert!(s.matrix()[(n, 0)].norm() < 1e-14, "odd amplitude at {n}");
        }
    }

    #[test]
    fn dense_and_vector_routes_agree() {
        let (dim, r, theta) = (90, 0.9, 0.4);
        let s = squeeze_operator(dim, r, theta).unwrap();
        for n in 0..3 {
            let QuantumState::Ket(v) = squeezed_fock(dim, n, r, theta).unwrap() else {
                panic!("ket expected")
            };
            let col = s.matrix().column(n);
            assert!((col - &v).norm() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn squeezed_vacuum_number_is_sinh_squared() {
        let dim = required_dim(1.5, PI, 0).unwrap();
        let state = squeezed_fock(dim, 0, 1.5, PI).unwrap();
        let n = state.expectation(&number(dim).unwrap()).unwrap();
        // sinh²(1.5) from an independent series evaluation
        let sinh: f64 = (0..40).map(|k| 1.5f64.powi(2 * k + 1) / factorial(2 * k + 1)).sum();
        assert!((n.re - sinh * sinh).abs() < 1e-8, "{} vs {}", n.re, sinh * sinh);
        assert!((sinh * sinh - 4.5336).abs() < 1e-3);
    }

    fn factorial(k: i32) -> f64 {
        (1..=k).map(f64::from).product()
    }

    #[test]
    fn squeezed_fock_orthogonal() {
        let dim = 160;
        let s0 = squeezed_fock(dim, 0, 1.2, PI).unwrap();
        let s1 = squeezed_fock(dim, 1, 1.2, PI).unwrap();
        let (QuantumState::Ket(v0), QuantumState::Ket(v1)) = (&s0, &s1) else { unreachable!() };
        assert!(v0.dotc(v1).norm() < 1e-10);
    }

    #[test]
    fn zero_squeezing_gives_fock_vacuum() {
        let v = squeezed_fock(8, 0, 0.0, PI).unwrap();
        assert!((v.population(0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn truncation_guard_reports_required_dim() {
        match squeeze_operator(20, 1.5, PI) {
            Err(Error::TruncationTooSmall { dim: 20, required }) => {
                assert!(required >= heuristic_dim(1.5));
                assert!(tail_population(required, 0, 1.5, PI).unwrap() < TAIL_TOLERANCE);
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn occupancy_margin_enforced() {
        assert!(matches!(squeezed_fock(8, 2, 0.0, 0.0), Err(Error::TruncationTooSmall { .. })));
        assert!(squeezed_fock(9, 2, 0.0, 0.0).is_ok());
    }

    #[test]
    fn negative_squeezing_rejected() {
        assert!(matches!(squeeze_operator(10, -0.1, 0.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn density_validation() {
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 0)] = C64::from(0.5);
        m[(1, 1)] = C64::from(0.5);
        assert!(QuantumState::density(m.clone()).is_ok());
        m[(0, 1)] = C64::new(0.0, 0.1);
        assert!(QuantumState::density(m.clone()).is_err(), "non-Hermitian accepted");
        m[(1, 0)] = C64::new(0.0, -0.1);
        assert!(QuantumState::density(m.clone()).is_ok());
        m[(2, 2)] = C64::from(0.1);
        assert!(QuantumState::density(m).is_err(), "trace 1.1 accepted");

        let mut neg = CMatrix::zeros(2, 2);
        neg[(0, 0)] = C64::from(1.1);
        neg[(1, 1)] = C64::from(-0.1);
        assert!(QuantumState::density(neg).is_err());
    }

    #[test]
    fn ket_norm_validation() {
        let v = DVector::from_vec(vec![C64::from(1.0), C64::from(1e-6)]);
        assert!(QuantumState::ket(v.clone()).is_ok());
        let w = DVector::from_vec(vec![C64::from(1.0), C64::from(1e-3)]);
        assert!(QuantumState::ket(w.clone()).is_err());
        assert!(QuantumState::ket_normalized(w).is_ok());
    }
}
