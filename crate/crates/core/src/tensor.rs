//! Dense complex matrices sized for few-qubit operators (dim = 2^N, N <= 12).

use crate::error::{Error, Result};

pub type Complex64 = num_complex::Complex<f64>;

/// Hermiticity and unit-trace checks on density matrices.
pub const DENSITY_TOL: f64 = 1e-12;
/// Eigenvalue floor for the positive-semidefiniteness check.
pub const PSD_TOL: f64 = 1e-10;
/// Jacobi stops once the off-diagonal norm drops below this times the Frobenius norm.
pub const JACOBI_REL_TOL: f64 = 1e-13;
/// Hard cap on Jacobi sweeps; convergence is quadratic and needs far fewer.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Square complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl CMatrix {
    /// Builds a dim x dim matrix from row-major entries. All entries must be finite.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::BadEntryCount {
                dim,
                expected: dim * dim,
                got: entries.len(),
            });
        }
        for (index, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NotFinite { index });
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        assert!(
            value.re.is_finite() && value.im.is_finite(),
            "matrix entries must stay finite"
        );
        self.entries[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let entries = self.entries.iter().map(|z| z * factor).collect();
        Self {
            dim: self.dim,
            entries,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            dim: self.dim,
            entries,
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Kronecker product; `self` is the more significant factor.
    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        let n = a * b;
        let mut out = Self::zeros(n);
        for i in 0..a {
            for j in 0..a {
                let z = self.entries[i * a + j];
                if z.re == 0.0 && z.im == 0.0 {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        out.entries[(i * b + k) * n + (j * b + l)] = z * other.entries[k * b + l];
                    }
                }
            }
        }
        out
    }

    /// Tr(self * other) without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<Complex64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.entries[i * n + j] * other.entries[j * n + i];
            }
        }
        Ok(acc)
    }

    /// Largest |A[i][j] - conj(A[j][i])| over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let d = (self.entries[i * n + j] - self.entries[j * n + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Eigenvalues of a Hermitian matrix in ascending order, via cyclic Jacobi
    /// with two-sided complex rotations.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        let defect = self.hermiticity_defect();
        if defect > DENSITY_TOL {
            return Err(Error::NotHermitian {
                defect,
                tol: DENSITY_TOL,
            });
        }
        let n = self.dim;
        if n == 0 {
            return Ok(Vec::new());
        }
        let threshold = JACOBI_REL_TOL * self.frobenius_norm();
        let mut a = self.entries.clone();
        // Work on the exactly Hermitian average of A and its adjoint.
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (a[i * n + j] + a[j * n + i].conj());
                a[i * n + j] = avg;
                a[j * n + i] = avg.conj();
            }
            a[i * n + i] = Complex64::new(a[i * n + i].re, 0.0);
        }

        for _ in 0..JACOBI_MAX_SWEEPS {
            if off_diagonal_norm(&a, n) <= threshold {
                let mut eigs: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
                eigs.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
                return Ok(eigs);
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    jacobi_rotate(&mut a, n, p, q);
                }
            }
        }
        let off = off_diagonal_norm(&a, n);
        if off <= threshold {
            let mut eigs: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
            eigs.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
            return Ok(eigs);
        }
        Err(Error::NoConvergence {
            max_sweeps: JACOBI_MAX_SWEEPS,
            off,
        })
    }

    /// Checks the density-matrix contract: Hermitian and unit trace within
    /// 1e-12, eigenvalues above -1e-10.
    pub fn validate_density(&self) -> Result<()> {
        let defect = self.hermiticity_defect();
        if defect > DENSITY_TOL {
            return Err(Error::NotHermitian {
                defect,
                tol: DENSITY_TOL,
            });
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::BadTrace {
                trace: tr.re,
                tol: DENSITY_TOL,
            });
        }
        let eigs = self.hermitian_eigenvalues()?;
        let min_eig = eigs.first().copied().unwrap_or(0.0);
        if min_eig < -PSD_TOL {
            return Err(Error::NotPositive { min_eig });
        }
        Ok(())
    }
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Annihilates the (p, q) entry with the unitary U = diag(g, 1) * [[c, s], [-s, c]]
/// where g = A[p][q]/|A[p][q]| carries the phase, applied two-sided.
fn jacobi_rotate(a: &mut [Complex64], n: usize, p: usize, q: usize) {
    let gamma = a[p * n + q];
    let abs_gamma = gamma.norm();
    if abs_gamma == 0.0 {
        return;
    }
    let alpha = a[p * n + p].re;
    let beta = a[q * n + q].re;
    let g = gamma / abs_gamma;
    let tau = (beta - alpha) / (2.0 * abs_gamma);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Columns p and q of A <- A * U, with U[.][p] = (g c, -s), U[.][q] = (g s, c).
    for i in 0..n {
        let aip = a[i * n + p];
        let aiq = a[i * n + q];
        a[i * n + p] = aip * (g * c) - aiq * s;
        a[i * n + q] = aip * (g * s) + aiq * c;
    }
    // Rows p and q of A <- U^dagger * A.
    for j in 0..n {
        let apj = a[p * n + j];
        let aqj = a[q * n + j];
        a[p * n + j] = apj * (g.conj() * c) - aqj * s;
        a[q * n + j] = apj * (g.conj() * s) + aqj * c;
    }
    // The rotation zeroes (p, q) exactly; clear rounding residue.
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
    a[p * n + p] = Complex64::new(a[p * n + p].re, 0.0);
    a[q * n + q] = Complex64::new(a[q * n + q].re, 0.0);
}
