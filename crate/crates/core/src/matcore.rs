//! Fixed-size dense linear algebra for the 2×2, 4×4 and 8×8 real matrices that
//! appear in two-mode phase-space computations.
//!
//! Everything here is a plain value type. Tolerances follow one policy: an
//! absolute tolerance `tol` is multiplied by the problem scale
//! `max(1, max_ij |m_ij|)` of the input before it is compared to anything.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Default absolute tolerance, scaled by [`Matrix::scale`] at every use.
pub const DEFAULT_TOL: f64 = 1e-9;

const JACOBI_MAX_SWEEPS: usize = 50;
const JACOBI_REL_OFF: f64 = 1e-14;

/// Square real matrix stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix<const N: usize>([[f64; N]; N]);

pub type Mat2 = Matrix<2>;
pub type Mat4 = Matrix<4>;
pub type Mat8 = Matrix<8>;

/// Real column vector of length `N`.
pub type Vector<const N: usize> = [f64; N];

impl<const N: usize> Matrix<N> {
    /// Builds a matrix from rows, rejecting NaN and infinities.
    pub fn new(rows: [[f64; N]; N]) -> Result<Self> {
        if rows.iter().flatten().all(|x| x.is_finite()) {
            Ok(Self(rows))
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Builds a matrix from rows that are known to be finite.
    pub const fn from_rows(rows: [[f64; N]; N]) -> Self {
        Self(rows)
    }

    pub const fn zeros() -> Self {
        Self([[0.0; N]; N])
    }

    pub fn identity() -> Self {
        Self::diag([1.0; N])
    }

    pub fn diag(d: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = v;
        }
        m
    }

    pub fn scalar(s: f64) -> Self {
        Self::diag([s; N])
    }

    pub fn rows(&self) -> &[[f64; N]; N] {
        &self.0
    }

    pub fn into_rows(self) -> [[f64; N]; N] {
        self.0
    }

    pub fn diagonal(&self) -> [f64; N] {
        std::array::from_fn(|i| self.0[i][i])
    }

    pub fn transpose(&self) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i])))
    }

    pub fn trace(&self) -> f64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    /// Problem scale `max(1, max |m_ij|)` used to turn absolute tolerances
    /// into relative ones.
    pub fn scale(&self) -> f64 {
        self.max_abs().max(1.0)
    }

    /// Largest entry of `|M - Mᵀ|`.
    pub fn asymmetry(&self) -> f64 {
        (*self - self.transpose()).max_abs()
    }

    pub fn symmetrized(&self) -> Self {
        (*self + self.transpose()) * 0.5
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    /// `S · M · Sᵀ`.
    pub fn congruence(&self, s: &Self) -> Self {
        *s * *self * s.transpose()
    }

    pub fn mul_vec(&self, v: &Vector<N>) -> Vector<N> {
        std::array::from_fn(|i| (0..N).map(|j| self.0[i][j] * v[j]).sum())
    }

    /// `uᵀ · M · v`.
    pub fn bilinear(&self, u: &Vector<N>, v: &Vector<N>) -> f64 {
        let mv = self.mul_vec(v);
        dot(u, &mv)
    }

    /// `vᵀ · M · v`.
    pub fn quad_form(&self, v: &Vector<N>) -> f64 {
        self.bilinear(v, v)
    }

    pub fn determinant(&self) -> f64 {
        if N == 2 {
            return self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0];
        }
        let mut lu = self.0;
        let mut det = 1.0;
        for k in 0..N {
            let pivot = (k..N)
                .max_by(|&a, &b| lu[a][k].abs().total_cmp(&lu[b][k].abs()))
                .unwrap_or(k);
            if lu[pivot][k] == 0.0 {
                return 0.0;
            }
            if pivot != k {
                lu.swap(pivot, k);
                det = -det;
            }
            det *= lu[k][k];
            for i in k + 1..N {
                let f = lu[i][k] / lu[k][k];
                for j in k + 1..N {
                    lu[i][j] -= f * lu[k][j];
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    ///
    /// Fails with [`Error::Singular`] when `|det M| <= tol · scale^N`.
    pub fn inverse(&self, tol: f64) -> Result<Self> {
        let det = self.determinant();
        if det.abs() <= tol * self.scale().powi(N as i32) {
            return Err(Error::Singular { det });
        }
        if N == 2 {
            let m = &self.0;
            let mut out = Self::zeros();
            out.0[0][0] = m[1][1] / det;
            out.0[0][1] = -m[0][1] / det;
            out.0[1][0] = -m[1][0] / det;
            out.0[1][1] = m[0][0] / det;
            return Ok(out);
        }
        let mut a = self.0;
        let mut inv = Self::identity().0;
        for k in 0..N {
            let pivot = (k..N)
                .max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs()))
                .unwrap_or(k);
            a.swap(pivot, k);
            inv.swap(pivot, k);
            let p = a[k][k];
            for j in 0..N {
                a[k][j] /= p;
                inv[k][j] /= p;
            }
            for i in 0..N {
                if i != k {
                    let f = a[i][k];
                    if f != 0.0 {
                        for j in 0..N {
                            a[i][j] -= f * a[k][j];
                            inv[i][j] -= f * inv[k][j];
                        }
                    }
                }
            }
        }
        Ok(Self(inv))
    }
}

impl Mat4 {
    /// 2×2 block `(row, col)` with `row, col ∈ {0, 1}`.
    pub fn block(&self, row: usize, col: usize) -> Mat2 {
        let (r, c) = (2 * row, 2 * col);
        Mat2::from_rows([
            [self.0[r][c], self.0[r][c + 1]],
            [self.0[r + 1][c], self.0[r + 1][c + 1]],
        ])
    }

    /// `[[top_left, top_right], [bottom_left, bottom_right]]`.
    pub fn from_blocks(tl: &Mat2, tr: &Mat2, bl: &Mat2, br: &Mat2) -> Self {
        let mut m = Self::zeros();
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = tl.0[i][j];
                m.0[i][j + 2] = tr.0[i][j];
                m.0[i + 2][j] = bl.0[i][j];
                m.0[i + 2][j + 2] = br.0[i][j];
            }
        }
        m
    }

    pub fn block_diag(a: &Mat2, b: &Mat2) -> Self {
        Self::from_blocks(a, &Mat2::zeros(), &Mat2::zeros(), b)
    }
}

pub fn dot<const N: usize>(u: &Vector<N>, v: &Vector<N>) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

impl<const N: usize> Index<(usize, usize)> for Matrix<N> {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Matrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Add for Matrix<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] + rhs.0[i][j])))
    }
}

impl<const N: usize> Sub for Matrix<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] - rhs.0[i][j])))
    }
}

impl<const N: usize> Neg for Matrix<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl<const N: usize> Mul for Matrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..N).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
        }))
    }
}

impl<const N: usize> Mul<f64> for Matrix<N> {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self(self.0.map(|row| row.map(|x| x * s)))
    }
}

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Clone, Copy, Debug)]
pub struct SymEigen<const N: usize> {
    /// Eigenvalues in ascending order.
    pub values: [f64; N],
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: Matrix<N>,
}

impl<const N: usize> SymEigen<N> {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[N - 1]
    }

    pub fn vector(&self, k: usize) -> Vector<N> {
        std::array::from_fn(|i| self.vectors.0[i][k])
    }

    /// `Q · diag(f(λ)) · Qᵀ`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Matrix<N> {
        Matrix::diag(self.values.map(f)).congruence(&self.vectors)
    }
}

/// Symmetric eigen-decomposition by cyclic Jacobi rotations.
///
/// Sweeps stop once the off-diagonal Frobenius norm falls below
/// `1e-14 · ‖M‖_F` or after 50 sweeps.
pub fn sym_eigen<const N: usize>(m: &Matrix<N>, tol: f64) -> Result<SymEigen<N>> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let asymmetry = m.asymmetry();
    if asymmetry > tol * m.scale() {
        return Err(Error::NotSymmetric { asymmetry });
    }
    let mut a = m.symmetrized().0;
    let mut q = Matrix::<N>::identity().0;
    let norm = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = JACOBI_REL_OFF * norm;

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            break;
        }
        for p in 0..N {
            for r in p + 1..N {
                if a[p][r] == 0.0 {
                    continue;
                }
                let theta = (a[r][r] - a[p][p]) / (2.0 * a[p][r]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akr = a[k][r];
                    a[k][p] = c * akp - s * akr;
                    a[k][r] = s * akp + c * akr;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let ark = a[r][k];
                    a[p][k] = c * apk - s * ark;
                    a[r][k] = s * apk + c * ark;
                }
                for row in q.iter_mut() {
                    let qp = row[p];
                    let qr = row[r];
                    row[p] = c * qp - s * qr;
                    row[r] = s * qp + c * qr;
                }
            }
        }
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values = order.map(|k| a[k][k]);
    let vectors = Matrix(std::array::from_fn(|i| order.map(|k| q[i][k])));
    Ok(SymEigen { values, vectors })
}

fn off_diagonal_norm<const N: usize>(a: &[[f64; N]; N]) -> f64 {
    let mut s = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j {
                s += x * x;
            }
        }
    }
    s.sqrt()
}

/// Hermitian 4×4 matrix `re + i·im` with symmetric `re` and antisymmetric `im`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermitianPair {
    re: Mat4,
    im: Mat4,
}

impl HermitianPair {
    pub fn new(re: Mat4, im: Mat4, tol: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::NonFinite);
        }
        let scale = re.scale().max(im.scale());
        if re.asymmetry() > tol * scale {
            return Err(Error::MalformedHermitian("real part is not symmetric"));
        }
        if (im + im.transpose()).max_abs() > tol * scale {
            return Err(Error::MalformedHermitian("imaginary part is not antisymmetric"));
        }
        Ok(Self { re, im })
    }

    pub fn re(&self) -> &Mat4 {
        &self.re
    }

    pub fn im(&self) -> &Mat4 {
        &self.im
    }

    /// Real symmetric embedding `[[re, -im], [im, re]]`; every eigenvalue of
    /// the Hermitian matrix appears twice in its spectrum.
    pub fn real_embedding(&self) -> Mat8 {
        let mut m = Mat8::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.re.0[i][j];
                m.0[i + 4][j + 4] = self.re.0[i][j];
                m.0[i][j + 4] = -self.im.0[i][j];
                m.0[i + 4][j] = self.im.0[i][j];
            }
        }
        m
    }

    fn scale(&self) -> f64 {
        self.re.scale().max(self.im.scale())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsdReport {
    pub psd: bool,
    pub min_eig: f64,
}

/// Decides `H ⪰ -tol·scale` from the smallest eigenvalue of the real
/// embedding of `H`.
pub fn is_psd_hermitian(h: &HermitianPair, tol: f64) -> PsdReport {
    let scale = h.scale();
    let emb = h.real_embedding();
    // The embedding is symmetric by construction.
    let eig = sym_eigen(&emb, f64::INFINITY).expect("finite embedding");
    let min_eig = eig.min();
    PsdReport { psd: min_eig >= -tol * scale, min_eig }
}

/// Symmetric `P = M^{-1/2}` for a 2×2 symmetric positive definite `M`.
pub fn spd_inverse_sqrt(m: &Mat2, tol: f64) -> Result<Mat2> {
    let eig = sym_eigen(m, tol)?;
    if eig.min() <= tol * m.scale() {
        return Err(Error::NotSpd { min_eig: eig.min() });
    }
    Ok(eig.map_spectrum(|l| 1.0 / l.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close<const N: usize>(a: &Matrix<N>, b: &Matrix<N>, tol: f64) {
        let d = (*a - *b).max_abs();
        assert!(d <= tol, "matrices differ by {d:e}\n{a:?}\n{b:?}");
    }

    #[test]
    fn determinants() {
        assert_eq!(Mat4::identity().determinant(), 1.0);
        let j = Mat2::from_rows([[0.0, 1.0], [-1.0, 0.0]]);
        assert_eq!(j.determinant(), 1.0);
        let m = Mat4::from_rows([
            [2.0, 1.0, 0.0, 3.0],
            [1.0, -1.0, 4.0, 0.5],
            [0.0, 2.0, 1.0, 1.0],
            [3.0, 0.0, 1.0, 2.0],
        ]);
        // Reference value from an independent LAPACK evaluation.
        assert!((m.determinant() - 31.5).abs() < 1e-12, "{}", m.determinant());
    }

    #[test]
    fn non_finite_rejected() {
        assert_eq!(Mat2::new([[f64::NAN, 0.0], [0.0, 1.0]]), Err(Error::NonFinite));
        assert!(Mat2::new([[1.0, 0.0], [0.0, 1.0]]).is_ok());
    }

    #[test]
    fn inverses() {
        assert_eq!(Mat4::identity().inverse(DEFAULT_TOL).unwrap(), Mat4::identity());
        assert_close(&Mat4::scalar(2.0).inverse(DEFAULT_TOL).unwrap(), &Mat4::scalar(0.5), 0.0);
        assert_close(&Mat4::scalar(0.5).inverse(DEFAULT_TOL).unwrap(), &Mat4::scalar(2.0), 0.0);
        let singular = Mat4::diag([1.0, 1.0, 0.0, 1.0]);
        assert!(matches!(singular.inverse(DEFAULT_TOL), Err(Error::Singular { .. })));
        let m = Mat4::from_rows([
            [4.0, 1.0, 0.5, 0.0],
            [1.0, 3.0, 0.0, 0.2],
            [0.5, 0.0, 2.0, 0.1],
            [0.0, 0.2, 0.1, 1.0],
        ]);
        assert_close(&(m * m.inverse(DEFAULT_TOL).unwrap()), &Mat4::identity(), 1e-14);
    }

    #[test]
    fn eigen_of_diagonal_and_vacuum() {
        let e = sym_eigen(&Mat4::diag([3.0, 1.0, 4.0, 2.0]), DEFAULT_TOL).unwrap();
        assert_eq!(e.values, [1.0, 2.0, 3.0, 4.0]);
        let e = sym_eigen(&Mat4::scalar(0.5), DEFAULT_TOL).unwrap();
        assert_eq!(e.values, [0.5; 4]);
    }

    #[test]
    fn eigen_rejects_asymmetric() {
        let m = Mat4::from_rows([
            [1.0, 0.1, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]);
        assert!(matches!(sym_eigen(&m, DEFAULT_TOL), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn eigen_of_two_mode_squeezed_covariance() {
        // Standard form with A = B = a·I, C = c·σ₃: the characteristic
        // polynomial factors into (λ - a)² - c² on each quadrature pair,
        // roots a ± c = ½e^{±2r}.
        let r: f64 = 0.7;
        let (a, c) = (0.5 * (2.0 * r).cosh(), 0.5 * (2.0 * r).sinh());
        let v = Mat4::from_rows([
            [a, 0.0, c, 0.0],
            [0.0, a, 0.0, -c],
            [c, 0.0, a, 0.0],
            [0.0, -c, 0.0, a],
        ]);
        let e = sym_eigen(&v, DEFAULT_TOL).unwrap();
        let lo = 0.5 * (-2.0 * r).exp();
        let hi = 0.5 * (2.0 * r).exp();
        for (got, want) in e.values.iter().zip([lo, lo, hi, hi]) {
            assert!((got - want).abs() < 1e-13, "{got} vs {want}");
        }
        assert_close(&(e.vectors.transpose() * e.vectors), &Mat4::identity(), 1e-12);
        for k in 0..4 {
            let vk = e.vector(k);
            let mv = v.mul_vec(&vk);
            for i in 0..4 {
                assert!((mv[i] - e.values[k] * vk[i]).abs() < 1e-10 * v.scale());
            }
        }
    }

    #[test]
    fn hermitian_psd_cases() {
        let omega = Mat4::from_rows([
            [0.0, 1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0, 0.0],
        ]);
        let half_omega = omega * 0.5;
        // Spectrum of v·I + (i/2)Ω is v ± ½ on each mode.
        for (v, want, psd) in [(0.5, 0.0, true), (0.4, -0.1, false), (1.0, 0.5, true)] {
            let h = HermitianPair::new(Mat4::scalar(v), half_omega, DEFAULT_TOL).unwrap();
            let rep = is_psd_hermitian(&h, DEFAULT_TOL);
            assert!((rep.min_eig - want).abs() < 1e-14, "v={v}: {}", rep.min_eig);
            assert_eq!(rep.psd, psd);
        }
    }

    #[test]
    fn hermitian_rejects_bad_parts() {
        let bad_im = Mat4::diag([0.1, 0.0, 0.0, 0.0]);
        assert!(matches!(
            HermitianPair::new(Mat4::identity(), bad_im, DEFAULT_TOL),
            Err(Error::MalformedHermitian(_))
        ));
        let mut bad_re = Mat4::identity();
        bad_re[(0, 1)] = 0.3;
        assert!(matches!(
            HermitianPair::new(bad_re, Mat4::zeros(), DEFAULT_TOL),
            Err(Error::MalformedHermitian(_))
        ));
    }

    #[test]
    fn inverse_square_roots() {
        assert_eq!(spd_inverse_sqrt(&Mat2::identity(), DEFAULT_TOL).unwrap(), Mat2::identity());
        let p = spd_inverse_sqrt(&Mat2::diag([4.0, 1.0]), DEFAULT_TOL).unwrap();
        assert_close(&p, &Mat2::diag([0.5, 1.0]), 1e-15);

        // [[2,1],[1,2]] has eigenpairs (1, (1,-1)/√2) and (3, (1,1)/√2), so
        // M^{-1/2} = ½[[1 + 1/√3, 1/√3 - 1], [1/√3 - 1, 1 + 1/√3]].
        let m = Mat2::from_rows([[2.0, 1.0], [1.0, 2.0]]);
        let p = spd_inverse_sqrt(&m, DEFAULT_TOL).unwrap();
        let s = 1.0 / 3f64.sqrt();
        let want = Mat2::from_rows([[0.5 * (1.0 + s), 0.5 * (s - 1.0)], [0.5 * (s - 1.0), 0.5 * (1.0 + s)]]);
        assert_close(&p, &want, 1e-15);
        assert_close(&m.congruence(&p), &Mat2::identity(), 1e-11);

        assert!(matches!(
            spd_inverse_sqrt(&Mat2::diag([1.0, -1.0]), DEFAULT_TOL),
            Err(Error::NotSpd { .. })
        ));
    }
}
