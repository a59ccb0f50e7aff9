//! Dense complex linear algebra for small Hermitian systems.
//!
//! Matrices are stored column-major so they can be handed to LAPACK/BLAS
//! (system OpenBLAS) without copies. Eigendecompositions use `zheevd`
//! (divide and conquer), products use `zgemm`. OpenBLAS internal threading
//! is pinned to one thread; parallelism happens at the task level.

use num_complex::Complex64 as C64;
use std::os::raw::c_char;
use std::sync::Once;

use crate::error::{Result, SimError};

extern "C" {
    fn zheevd_(
        jobz: *const c_char,
        uplo: *const c_char,
        n: *const i32,
        a: *mut C64,
        lda: *const i32,
        w: *mut f64,
        work: *mut C64,
        lwork: *const i32,
        rwork: *mut f64,
        lrwork: *const i32,
        iwork: *mut i32,
        liwork: *const i32,
        info: *mut i32,
    );
    fn zgemm_(
        transa: *const c_char,
        transb: *const c_char,
        m: *const i32,
        n: *const i32,
        k: *const i32,
        alpha: *const C64,
        a: *const C64,
        lda: *const i32,
        b: *const C64,
        ldb: *const i32,
        beta: *const C64,
        c: *mut C64,
        ldc: *const i32,
    );
    fn openblas_set_num_threads(n: i32);
}

static BLAS_INIT: Once = Once::new();

fn init_blas() {
    BLAS_INIT.call_once(|| unsafe {
        openblas_set_num_threads(1);
    });
}

/// Square complex matrix, column-major storage: entry (i, j) is `data[j*dim + i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for j in 0..dim {
            for i in 0..dim {
                m.data[j * dim + i] = f(i, j);
            }
        }
        m
    }

    /// Build from row-major nested slices (convenient for literals in tests).
    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let dim = rows.len();
        Self::from_fn(dim, |i, j| rows[i][j])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[j * self.dim + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[j * self.dim + i] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: C64) {
        self.data[j * self.dim + i] += v;
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn scale(&mut self, s: C64) {
        for v in &mut self.data {
            *v *= s;
        }
    }

    pub fn add_scaled(&mut self, other: &CMatrix, s: C64) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += s * b;
        }
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.dim;
        CMatrix::from_fn(n, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// `self * other` via zgemm.
    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        init_blas();
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim as i32;
        let mut out = CMatrix::zeros(self.dim);
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        unsafe {
            zgemm_(
                b"N".as_ptr() as _,
                b"N".as_ptr() as _,
                &n,
                &n,
                &n,
                &one,
                self.data.as_ptr(),
                &n,
                other.data.as_ptr(),
                &n,
                &zero,
                out.data.as_mut_ptr(),
                &n,
            );
        }
        out
    }

    /// `self * vec`.
    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim;
        debug_assert_eq!(v.len(), n);
        let mut out = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            let vj = v[j];
            if vj == C64::new(0.0, 0.0) {
                continue;
            }
            let col = &self.data[j * n..(j + 1) * n];
            for i in 0..n {
                out[i] += col[i] * vj;
            }
        }
        out
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (na, nb) = (self.dim, other.dim);
        let n = na * nb;
        let mut out = CMatrix::zeros(n);
        for ja in 0..na {
            for ia in 0..na {
                let a = self.get(ia, ja);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for jb in 0..nb {
                    for ib in 0..nb {
                        out.set(ia * nb + ib, ja * nb + jb, a * other.get(ib, jb));
                    }
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max |H - H†|.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim;
        let mut err: f64 = 0.0;
        for j in 0..n {
            for i in 0..=j {
                err = err.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        err
    }

    /// max entry of |U†U - I|.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let n = self.dim;
        let mut err: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                let target = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                err = err.max((p.get(i, j) - target).norm());
            }
        }
        err
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Eigendecomposition of a Hermitian matrix: `h = V diag(w) V†`.
///
/// Eigenvalues ascend; eigenvectors are the columns of `vectors`.
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(h: &CMatrix) -> Result<Self> {
        init_blas();
        let n = h.dim;
        let ni = n as i32;
        let mut a = h.clone();
        let mut w = vec![0.0f64; n];

        // workspace query
        let m1 = -1i32;
        let mut info = 0i32;
        let (mut wq, mut rwq, mut iwq) = (C64::new(0.0, 0.0), 0.0f64, 0i32);
        unsafe {
            zheevd_(
                b"V".as_ptr() as _,
                b"L".as_ptr() as _,
                &ni,
                a.data.as_mut_ptr(),
                &ni,
                w.as_mut_ptr(),
                &mut wq,
                &m1,
                &mut rwq,
                &m1,
                &mut iwq,
                &m1,
                &mut info,
            );
        }
        if info != 0 {
            return Err(SimError::Numerical(format!("zheevd workspace query failed: {info}")));
        }
        let lwork = wq.re as i32;
        let lrwork = rwq as i32;
        let liwork = iwq;
        let mut work = vec![C64::new(0.0, 0.0); lwork.max(1) as usize];
        let mut rwork = vec![0.0f64; lrwork.max(1) as usize];
        let mut iwork = vec![0i32; liwork.max(1) as usize];
        unsafe {
            zheevd_(
                b"V".as_ptr() as _,
                b"L".as_ptr() as _,
                &ni,
                a.data.as_mut_ptr(),
                &ni,
                w.as_mut_ptr(),
                work.as_mut_ptr(),
                &lwork,
                rwork.as_mut_ptr(),
                &lrwork,
                iwork.as_mut_ptr(),
                &liwork,
                &mut info,
            );
        }
        if info != 0 {
            return Err(SimError::Numerical(format!("zheevd failed: info={info}")));
        }
        Ok(HermitianEigen { values: w, vectors: a })
    }

    /// `exp(-i 2 pi H t)` from this decomposition (H in Hz, t in seconds).
    pub fn propagator(&self, t: f64) -> CMatrix {
        let n = self.vectors.dim;
        // V * diag(phase)
        let mut vp = self.vectors.clone();
        for (k, &wk) in self.values.iter().enumerate() {
            let ph = C64::from_polar(1.0, -2.0 * std::f64::consts::PI * wk * t);
            for i in 0..n {
                let v = vp.get(i, k);
                vp.set(i, k, v * ph);
            }
        }
        vp.mul(&self.vectors.adjoint())
    }

    /// Apply `exp(-i 2 pi H t)` to a state vector.
    pub fn propagate_vec(&self, psi: &[C64], t: f64) -> Vec<C64> {
        let n = self.vectors.dim;
        // c = V† psi
        let mut c = vec![C64::new(0.0, 0.0); n];
        for k in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..n {
                acc += self.vectors.get(i, k).conj() * psi[i];
            }
            c[k] = acc;
        }
        for (k, &wk) in self.values.iter().enumerate() {
            c[k] *= C64::from_polar(1.0, -2.0 * std::f64::consts::PI * wk * t);
        }
        let mut out = vec![C64::new(0.0, 0.0); n];
        for k in 0..n {
            let ck = c[k];
            for i in 0..n {
                out[i] += self.vectors.get(i, k) * ck;
            }
        }
        out
    }
}

/// `exp(-i 2 pi H t)` for Hermitian `h` (Hz), one-shot.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> Result<CMatrix> {
    Ok(HermitianEigen::new(h)?.propagator(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn matmul_matches_hand_computation() {
        let a = CMatrix::from_rows(&[
            &[c(1.0, 0.0), c(0.0, 1.0)],
            &[c(2.0, 0.0), c(0.0, 0.0)],
        ]);
        let b = CMatrix::from_rows(&[
            &[c(0.0, 0.0), c(1.0, 0.0)],
            &[c(1.0, 0.0), c(0.0, -1.0)],
        ]);
        let p = a.mul(&b);
        assert_eq!(p.get(0, 0), c(0.0, 1.0));
        assert_eq!(p.get(0, 1), c(2.0, 0.0));
        assert_eq!(p.get(1, 0), c(0.0, 0.0));
        assert_eq!(p.get(1, 1), c(2.0, 0.0));
    }

    #[test]
    fn eigh_pauli_x() {
        let sx = CMatrix::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]]);
        let e = HermitianEigen::new(&sx).unwrap();
        assert_abs_diff_eq!(e.values[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.values[1], 1.0, epsilon = 1e-12);
        // reconstruct
        let mut r = CMatrix::zeros(2);
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    let v = r.get(i, j)
                        + e.vectors.get(i, k) * e.values[k] * e.vectors.get(j, k).conj();
                    r.set(i, j, v);
                }
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!((r.get(i, j) - sx.get(i, j)).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn propagator_is_unitary_and_matches_rotation() {
        // H = f * sigma_z/2; exp(-i 2 pi H t) rotates phases by -/+ pi f t
        let f = 3.0e9;
        let h = CMatrix::from_rows(&[
            &[c(0.5 * f, 0.0), c(0.0, 0.0)],
            &[c(0.0, 0.0), c(-0.5 * f, 0.0)],
        ]);
        let t = 0.23e-9;
        let u = expm_hermitian(&h, t).unwrap();
        assert!(u.unitarity_error() < 1e-12);
        let expect = C64::from_polar(1.0, -std::f64::consts::PI * f * t);
        assert_abs_diff_eq!((u.get(0, 0) - expect).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn kron_dimensions_and_values() {
        let a = CMatrix::from_rows(&[&[c(1.0, 0.0), c(2.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)]]);
        let b = CMatrix::identity(3);
        let k = a.kron(&b);
        assert_eq!(k.dim(), 6);
        assert_eq!(k.get(0, 3), c(2.0, 0.0));
        assert_eq!(k.get(2, 5), c(2.0, 0.0));
        assert_eq!(k.get(1, 0), c(0.0, 0.0));
    }

    #[test]
    fn composition_of_exponentials_matches_single_exponential() {
        // static H: exp over t then t equals exp over 2t
        let h = CMatrix::from_rows(&[
            &[c(1.0e9, 0.0), c(0.3e9, 0.1e9)],
            &[c(0.3e9, -0.1e9), c(-0.4e9, 0.0)],
        ]);
        let u1 = expm_hermitian(&h, 1e-10).unwrap();
        let u2 = expm_hermitian(&h, 2e-10).unwrap();
        let u11 = u1.mul(&u1);
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!((u11.get(i, j) - u2.get(i, j)).norm(), 0.0, epsilon = 1e-13);
            }
        }
    }
}
