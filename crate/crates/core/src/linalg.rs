//! Dense complex matrices and a cyclic-Jacobi eigensolver for Hermitian
//! matrices.
//!
//! Everything here is sized for invariant-sector work (dimensions up to the
//! low hundreds), so storage is a flat row-major `Vec` and no attempt is made
//! at blocking or sparsity. The Jacobi solver is used instead of a LAPACK
//! binding for two reasons: it keeps the crate `no_std`, and its rotations
//! never touch matrix entries that are exactly zero, so block-diagonal
//! structure survives the decomposition bit-for-bit. Sector-confinement
//! checks downstream rely on that.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Relative off-diagonal threshold at which a Jacobi sweep is converged.
const JACOBI_TOL: f64 = 1e-14;
/// Hard cap on sweeps; cyclic Jacobi converges quadratically and never gets
/// anywhere near this for the sizes handled here.
const JACOBI_MAX_SWEEPS: usize = 64;
/// Absolute Hermiticity tolerance (scaled by the largest entry magnitude).
pub const HERMITIAN_TOL: f64 = 1e-13;

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    dim: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(dim: usize) -> Self {
        CMat { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Build from a closure over (row, col).
    pub fn from_fn<F: FnMut(usize, usize) -> C64>(dim: usize, mut f: F) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from real entries given row by row. Panics on a ragged input.
    pub fn from_rows_re(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "from_rows_re: ragged row {i}");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = C64::new(x, 0.0);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.dim, rhs.dim, "mul: dimension mismatch");
        let n = self.dim;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += aik * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.dim, v.len(), "matvec: dimension mismatch");
        let n = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..n {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn add(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.dim, rhs.dim, "add: dimension mismatch");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a += *b;
        }
        out
    }

    pub fn sub(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.dim, rhs.dim, "sub: dimension mismatch");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a -= *b;
        }
        out
    }

    pub fn scale(&self, s: C64) -> CMat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn scale_re(&self, s: f64) -> CMat {
        self.scale(C64::new(s, 0.0))
    }

    pub fn adjoint(&self) -> CMat {
        let n = self.dim;
        CMat::from_fn(n, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> CMat {
        let n = self.dim;
        CMat::from_fn(n, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &CMat) -> f64 {
        assert_eq!(self.dim, rhs.dim, "max_abs_diff: dimension mismatch");
        self.data
            .iter()
            .zip(rhs.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest deviation from the conjugate transpose.
    pub fn hermitian_dev(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_dev() <= tol
    }

    /// Largest entry of `U^dag U - I`.
    pub fn unitary_dev(&self) -> f64 {
        self.adjoint().mul(self).max_abs_diff(&CMat::identity(self.dim))
    }
}

impl core::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Eigendecomposition of a Hermitian matrix: `A = V diag(values) V^dag` with
/// real eigenvalues sorted ascending and orthonormal columns in `V`.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    values: Vec<f64>,
    vectors: CMat,
}

impl HermitianEig {
    /// Diagonalize by cyclic Jacobi rotations.
    ///
    /// Rejects input whose deviation from Hermiticity exceeds
    /// [`HERMITIAN_TOL`] scaled by the largest entry; the (tiny) remainder is
    /// symmetrized away before iterating.
    pub fn new(a: &CMat) -> Result<Self> {
        let dev = a.hermitian_dev();
        if dev > HERMITIAN_TOL * a.max_abs().max(1.0) {
            return Err(Error::NonHermitian { max_dev: dev });
        }
        let n = a.dim();
        // Work on the Hermitian part; diagonal forced real.
        let mut m = CMat::from_fn(n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
        for i in 0..n {
            m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
        }
        let mut v = CMat::identity(n);
        let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);

        let mut converged = false;
        for _ in 0..JACOBI_MAX_SWEEPS {
            if off_diagonal_norm(&m) <= JACOBI_TOL * scale {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut m, &mut v, p, q);
                }
            }
        }
        if !converged && off_diagonal_norm(&m) > JACOBI_TOL * scale {
            panic!("hermitian_eig: jacobi failed to converge");
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            m[(i, i)].re.partial_cmp(&m[(j, j)].re).expect("hermitian_eig: NaN eigenvalue")
        });
        let values: Vec<f64> = order.iter().map(|&i| m[(i, i)].re).collect();
        let vectors = CMat::from_fn(n, |i, j| v[(i, order[j])]);
        Ok(HermitianEig { values, vectors })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    /// Orthonormal eigenvectors as matrix columns, ordered like the values.
    pub fn eigenvectors(&self) -> &CMat {
        &self.vectors
    }

    /// `V diag(f(lambda)) V^dag` for a complex-valued spectral function.
    pub fn map_spectrum<F: Fn(f64) -> C64>(&self, f: F) -> CMat {
        let n = self.values.len();
        let fv: Vec<C64> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for (k, &f) in fv.iter().enumerate() {
                    acc += self.vectors[(i, k)] * f * self.vectors[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// Unitary `exp(-i A t)`.
    pub fn unitary_exp(&self, t: f64) -> CMat {
        self.map_spectrum(|l| C64::from_polar(1.0, -l * t))
    }

    /// `V diag(values) V^dag`; used by tests to bound the backward error.
    pub fn reconstruct(&self) -> CMat {
        self.map_spectrum(|l| C64::new(l, 0.0))
    }
}

fn off_diagonal_norm(m: &CMat) -> f64 {
    let n = m.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One Jacobi rotation zeroing the (p, q) entry of Hermitian `m`, with the
/// same unitary accumulated into `v`.
fn rotate(m: &mut CMat, v: &mut CMat, p: usize, q: usize) {
    let apq = m[(p, q)];
    let r = apq.norm();
    // Skipping exact (and denormal) zeros keeps decoupled blocks decoupled.
    if r <= 1e-300 {
        return;
    }
    let phase = apq / r; // e^{i phi}
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Unitary J differs from identity only in rows/cols p and q:
    //   J[p,p] = c        J[p,q] = s
    //   J[q,p] = -s e^{-i phi}   J[q,q] = c e^{-i phi}
    let sp = phase.conj() * s; // s e^{-i phi}
    let cp = phase.conj() * c; // c e^{-i phi}

    let n = m.dim();
    // Columns: M <- M J.
    for i in 0..n {
        let mip = m[(i, p)];
        let miq = m[(i, q)];
        m[(i, p)] = mip * c - miq * sp;
        m[(i, q)] = mip * s + miq * cp;
    }
    // Rows: M <- J^dag M.
    for j in 0..n {
        let mpj = m[(p, j)];
        let mqj = m[(q, j)];
        m[(p, j)] = mpj * c - mqj * phase * s;
        m[(q, j)] = mpj * s + mqj * phase * c;
    }
    // The rotated pair is known in closed form; write it exactly.
    m[(p, p)] = C64::new(app - t * r, 0.0);
    m[(q, q)] = C64::new(aqq + t * r, 0.0);
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);

    // Accumulate V <- V J.
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * c - viq * sp;
        v[(i, q)] = vip * s + viq * cp;
    }
}

/// Spectral (operator 2-) norm via the largest eigenvalue of `A^dag A`.
pub fn spectral_norm(a: &CMat) -> f64 {
    let gram = a.adjoint().mul(a);
    let eig = HermitianEig::new(&gram).expect("spectral_norm: gram matrix must be Hermitian");
    eig.eigenvalues().last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn random_hermitian(n: usize, rng: &mut SplitMix64) -> CMat {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m[(i, i)] = C64::new(rng.next_symmetric(), 0.0);
            for j in (i + 1)..n {
                let z = C64::new(rng.next_symmetric(), rng.next_symmetric());
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn identity_spectrum() {
        let eig = HermitianEig::new(&CMat::identity(4)).unwrap();
        for &l in eig.eigenvalues() {
            assert!((l - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn known_complex_2x2() {
        // [[1, i], [-i, 1]] has eigenvalues {0, 2}.
        let mut m = CMat::zeros(2);
        m[(0, 0)] = C64::new(1.0, 0.0);
        m[(0, 1)] = C64::new(0.0, 1.0);
        m[(1, 0)] = C64::new(0.0, -1.0);
        m[(1, 1)] = C64::new(1.0, 0.0);
        let eig = HermitianEig::new(&m).unwrap();
        assert!((eig.eigenvalues()[0] - 0.0).abs() < 1e-14);
        assert!((eig.eigenvalues()[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn random_reconstruction_and_orthonormality() {
        let mut rng = SplitMix64::new(0x1db1);
        for &n in &[1usize, 3, 8, 27] {
            let m = random_hermitian(n, &mut rng);
            let eig = HermitianEig::new(&m).unwrap();
            let scale = m.frobenius_norm().max(1.0);
            assert!(
                eig.reconstruct().max_abs_diff(&m) < 1e-12 * scale,
                "reconstruction failed at n={n}"
            );
            assert!(eig.eigenvectors().unitary_dev() < 1e-12, "V not unitary at n={n}");
            for w in eig.eigenvalues().windows(2) {
                assert!(w[0] <= w[1], "eigenvalues not sorted at n={n}");
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMat::zeros(2);
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(HermitianEig::new(&m), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn unitary_exp_properties() {
        let mut rng = SplitMix64::new(0xfeed);
        let m = random_hermitian(6, &mut rng);
        let eig = HermitianEig::new(&m).unwrap();
        assert!(eig.unitary_exp(0.0).max_abs_diff(&CMat::identity(6)) < 1e-14);
        let u = eig.unitary_exp(0.83);
        assert!(u.unitary_dev() < 1e-12);
        // Group property: U(s) U(t) = U(s + t).
        let prod = eig.unitary_exp(0.37).mul(&eig.unitary_exp(1.91));
        assert!(prod.max_abs_diff(&eig.unitary_exp(0.37 + 1.91)) < 1e-12);
    }

    #[test]
    fn block_structure_preserved_exactly() {
        // Two decoupled blocks: eigenvectors must keep exact zeros across
        // the block boundary, not just small entries.
        let mut m = CMat::zeros(4);
        m[(0, 1)] = C64::new(1.5, 0.25);
        m[(1, 0)] = C64::new(1.5, -0.25);
        m[(2, 3)] = C64::new(-0.5, 1.0);
        m[(3, 2)] = C64::new(-0.5, -1.0);
        let eig = HermitianEig::new(&m).unwrap();
        let v = eig.eigenvectors();
        for j in 0..4 {
            let top = v[(0, j)].norm() + v[(1, j)].norm();
            let bottom = v[(2, j)].norm() + v[(3, j)].norm();
            assert!(
                top == 0.0 || bottom == 0.0,
                "column {j} mixes blocks: top={top}, bottom={bottom}"
            );
        }
        let u = eig.unitary_exp(2.0);
        assert_eq!(u[(0, 2)], C64::new(0.0, 0.0));
        assert_eq!(u[(3, 1)], C64::new(0.0, 0.0));
    }

    #[test]
    fn spectral_norm_of_scaled_identity() {
        let m = CMat::identity(3).scale(C64::new(0.0, -2.5));
        assert!((spectral_norm(&m) - 2.5).abs() < 1e-12);
    }
}
