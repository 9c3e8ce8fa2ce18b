//! Dense complex linear algebra helpers: matrix exponential, Hermitian
//! eigendecomposition and a few norms used by the diagnostics.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

pub type CMatrix = DMatrix<C64>;

pub(crate) const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Padé(13) coefficients of exp, Higham (2005).
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Largest 1-norm for which the unscaled Padé(13) approximant is accurate
/// to double precision.
const THETA13: f64 = 5.371920351148152;

/// Induced 1-norm (max column sum).
pub fn norm1(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a Padé(13) approximant.
pub fn expm(a: &CMatrix) -> CMatrix {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.nrows();
    let norm = norm1(a);
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a * C64::from(0.5f64.powi(s));
    let ident = CMatrix::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = |k: usize| C64::from(PADE13[k]);

    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9))
        + &a6 * b(7)
        + &a4 * b(5)
        + &a2 * b(3)
        + &ident * b(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8))
        + &a6 * b(6)
        + &a4 * b(4)
        + &a2 * b(2)
        + &ident * b(0);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .expect("Padé denominator is singular; input norm is not finite");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending and the
/// matching eigenvectors as columns.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    m.clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// max |m - m†|
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// In-place (m + m†)/2.
pub fn hermitize(m: &mut CMatrix) {
    let n = m.nrows();
    for j in 0..n {
        for i in 0..j {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
        m[(j, j)] = C64::new(m[(j, j)].re, 0.0);
    }
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}
