//! State constructors. Party 1 owns the most significant qubit, so basis
//! index b encodes party k's bit at position N - k.

use crate::error::{Error, Result};
use crate::tensor::{CMatrix, Complex64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Norm check applied to state-vector constructors.
pub const NORM_TOL: f64 = 1e-12;

/// Normalized state vector on N qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Builds a state from amplitudes of length 2^N, N >= 1, normalized within 1e-12.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::OutOfRange {
                what: "state dimension",
                constraint: "a power of two, at least 2",
                value: dim as f64,
            });
        }
        for (index, z) in amplitudes.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NotFinite { index });
            }
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::BadNorm {
                norm,
                tol: NORM_TOL,
            });
        }
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn num_parties(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Projector |psi><psi|.
    pub fn density(&self) -> CMatrix {
        let dim = self.dim();
        let mut rho = CMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                rho.set(i, j, self.amplitudes[i] * self.amplitudes[j].conj());
            }
        }
        rho
    }
}

/// (|0...0> + |1...1>) / sqrt(2) on n >= 2 qubits.
pub fn ghz(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::OutOfRange {
            what: "party count",
            constraint: ">= 2 for a GHZ state",
            value: n as f64,
        });
    }
    let dim = 1usize << n;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    let w = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amplitudes[0] = w;
    amplitudes[dim - 1] = w;
    PureState::new(amplitudes)
}

/// p |GHZ><GHZ| + (1 - p) I / 2^n, with 0 <= p <= 1.
pub fn depolarized_ghz(n: usize, p: f64) -> Result<CMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            what: "visibility p",
            constraint: "within [0, 1]",
            value: p,
        });
    }
    let pure = ghz(n)?.density();
    let dim = pure.dim();
    let mixed = CMatrix::identity(dim).scale(Complex64::new((1.0 - p) / dim as f64, 0.0));
    pure.scale(Complex64::new(p, 0.0)).add(&mixed)
}

/// Single-qubit state (I + r . sigma) / 2 for a Bloch vector with |r| <= 1.
pub fn bloch_state(r: [f64; 3]) -> Result<CMatrix> {
    let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if !norm.is_finite() || norm > 1.0 + NORM_TOL {
        return Err(Error::OutOfRange {
            what: "Bloch vector norm",
            constraint: "at most 1",
            value: norm,
        });
    }
    let half = 0.5;
    CMatrix::new(
        2,
        vec![
            Complex64::new(half * (1.0 + r[2]), 0.0),
            Complex64::new(half * r[0], -half * r[1]),
            Complex64::new(half * r[0], half * r[1]),
            Complex64::new(half * (1.0 - r[2]), 0.0),
        ],
    )
}

/// Tensor product of single-qubit Bloch states; index 0 is party 1 (most significant).
pub fn product_state(blochs: &[[f64; 3]]) -> Result<CMatrix> {
    if blochs.is_empty() {
        return Err(Error::OutOfRange {
            what: "party count",
            constraint: ">= 1",
            value: 0.0,
        });
    }
    let mut rho = bloch_state(blochs[0])?;
    for r in &blochs[1..] {
        rho = rho.kron(&bloch_state(*r)?);
    }
    Ok(rho)
}

/// Haar-random pure state on n >= 1 qubits, deterministic in the seed.
pub fn random_pure(n: usize, seed: u64) -> Result<PureState> {
    if n < 1 {
        return Err(Error::OutOfRange {
            what: "party count",
            constraint: ">= 1",
            value: n as f64,
        });
    }
    let dim = 1usize << n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut amplitudes = Vec::with_capacity(dim);
    let mut norm_sqr = 0.0;
    for _ in 0..dim {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        norm_sqr += re * re + im * im;
        amplitudes.push(Complex64::new(re, im));
    }
    // A 2^n-dim Gaussian vector is zero with probability zero; the guard keeps
    // the constructor total anyway.
    if norm_sqr == 0.0 {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        return PureState::new(amplitudes);
    }
    let inv = 1.0 / norm_sqr.sqrt();
    for z in &mut amplitudes {
        *z *= inv;
    }
    PureState::new(amplitudes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ghz_amplitudes_sit_at_the_ends() {
        let psi = ghz(3).unwrap();
        let a = psi.amplitudes();
        let w = std::f64::consts::FRAC_1_SQRT_2;
        assert!((a[0].re - w).abs() < 1e-15);
        assert!((a[7].re - w).abs() < 1e-15);
        for z in &a[1..7] {
            assert_eq!(*z, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn ghz_requires_two_parties() {
        assert!(ghz(1).is_err());
    }

    #[test]
    fn ghz_density_is_valid() {
        ghz(4).unwrap().density().validate_density().unwrap();
    }

    #[test]
    fn depolarized_spectrum_matches_closed_form() {
        // Eigenvalues of rho_d(2, 0.5): 0.125 three times and 0.625 once.
        let rho = depolarized_ghz(2, 0.5).unwrap();
        let eigs = rho.hermitian_eigenvalues().unwrap();
        for e in &eigs[..3] {
            assert!((e - 0.125).abs() < 1e-12);
        }
        assert!((eigs[3] - 0.625).abs() < 1e-12);
    }

    #[test]
    fn depolarized_rejects_bad_visibility() {
        assert!(depolarized_ghz(3, 1.5).is_err());
        assert!(depolarized_ghz(3, -0.1).is_err());
    }

    #[test]
    fn bloch_state_rejects_long_vectors() {
        assert!(bloch_state([1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn product_state_orders_parties_most_significant_first() {
        // Party 1 in |1> (z = -1), party 2 in |0>: the population sits at index 2 = 0b10.
        let rho = product_state(&[[0.0, 0.0, -1.0], [0.0, 0.0, 1.0]]).unwrap();
        assert!((rho.get(2, 2).re - 1.0).abs() < 1e-15);
        assert!(rho.get(0, 0).norm() < 1e-15);
        rho.validate_density().unwrap();
    }

    #[test]
    fn random_pure_is_normalized_and_seed_stable() {
        let a = random_pure(3, 7).unwrap();
        let b = random_pure(3, 7).unwrap();
        let c = random_pure(3, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let norm: f64 = a.amplitudes().iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_pure_density_is_valid() {
        random_pure(2, 42)
            .unwrap()
            .density()
            .validate_density()
            .unwrap();
    }
}
