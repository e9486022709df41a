//! Imprecise +/-1-valued qubit observables and the complex functionals built
//! from them.

use crate::error::{Error, Result};
use crate::tensor::{CMatrix, Complex64};

/// Largest imprecision with a nonzero certification window, (2 - sqrt(2)) / 4.
pub const MAX_IMPRECISION: f64 = (2.0 - std::f64::consts::SQRT_2) / 4.0;
/// Slack admitted at the boundaries of the alignment range.
pub const ALIGNMENT_TOL: f64 = 1e-12;
/// Spectrum check tolerance for lab observables.
pub const SPECTRUM_TOL: f64 = 1e-10;

/// Imprecision epsilon confined to [0, (2 - sqrt(2)) / 4].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImprecisionParam(f64);

impl ImprecisionParam {
    pub fn new(eps: f64) -> Result<Self> {
        if !eps.is_finite() || !(0.0..=MAX_IMPRECISION).contains(&eps) {
            return Err(Error::OutOfRange {
                what: "imprecision epsilon",
                constraint: "within [0, (2 - sqrt(2)) / 4]",
                value: eps,
            });
        }
        Ok(Self(eps))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Worst-case alignment 1 - 2 eps reached at the bottom of the range.
    pub fn extremal_alignment(self) -> AlignmentFactor {
        AlignmentFactor::new(1.0 - 2.0 * self.0).expect("1 - 2 eps stays in range")
    }
}

/// Alignment q confined to [sqrt(2)/2, 1] within 1e-12.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignmentFactor(f64);

impl AlignmentFactor {
    pub fn new(q: f64) -> Result<Self> {
        let lo = std::f64::consts::FRAC_1_SQRT_2 - ALIGNMENT_TOL;
        let hi = 1.0 + ALIGNMENT_TOL;
        if !q.is_finite() || !(lo..=hi).contains(&q) {
            return Err(Error::OutOfRange {
                what: "alignment q",
                constraint: "within [sqrt(2)/2, 1]",
                value: q,
            });
        }
        Ok(Self(q.min(1.0)))
    }

    pub fn ideal() -> Self {
        Self(1.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// sqrt(1 - q^2), the weight on the orthogonal axis.
    pub fn misalignment(self) -> f64 {
        (1.0 - self.0 * self.0).max(0.0).sqrt()
    }
}

/// Alignment interval [1 - 2 eps, 1] compatible with imprecision eps.
pub fn eps_to_q_range(eps: ImprecisionParam) -> (f64, f64) {
    (1.0 - 2.0 * eps.value(), 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// The Pauli matrix on the given axis.
pub fn pauli(axis: Axis) -> CMatrix {
    let (a, b, c, d) = match axis {
        Axis::X => (
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ),
        Axis::Y => (
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ),
        Axis::Z => (
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 0.0),
        ),
    };
    CMatrix::new(2, vec![a, b, c, d]).expect("finite constants")
}

/// Measured pair standing in for sigma_x and sigma_y on one qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservablePair {
    pub x_obs: CMatrix,
    pub y_obs: CMatrix,
    pub alignment: AlignmentFactor,
}

impl ObservablePair {
    pub fn ideal() -> Self {
        tilted_pair(AlignmentFactor::ideal())
    }

    /// Worst-case pair at alignment 1 - 2 eps.
    pub fn from_imprecision(eps: ImprecisionParam) -> Self {
        tilted_pair(eps.extremal_alignment())
    }
}

/// Worst-case tilted realization: each lab observable leans toward the other
/// target's axis, X~ = q X + sqrt(1 - q^2) Y and Y~ = q Y + sqrt(1 - q^2) X.
pub fn tilted_pair(q: AlignmentFactor) -> ObservablePair {
    let s = q.misalignment();
    let x = pauli(Axis::X);
    let y = pauli(Axis::Y);
    let qc = Complex64::new(q.value(), 0.0);
    let sc = Complex64::new(s, 0.0);
    let x_obs = x
        .scale(qc)
        .add(&y.scale(sc))
        .expect("2x2 operands");
    let y_obs = y
        .scale(qc)
        .add(&x.scale(sc))
        .expect("2x2 operands");
    ObservablePair {
        x_obs,
        y_obs,
        alignment: q,
    }
}

fn check_observable(label: &str, m: &CMatrix) -> Result<()> {
    if m.dim() != 2 {
        return Err(Error::BadObservable {
            reason: format!("{label} observable must be 2x2, got dim {}", m.dim()),
        });
    }
    let defect = m.hermiticity_defect();
    if defect > 1e-12 {
        return Err(Error::BadObservable {
            reason: format!("{label} observable is not Hermitian (defect {defect:.3e})"),
        });
    }
    let eigs = m.hermitian_eigenvalues()?;
    if (eigs[0] + 1.0).abs() > SPECTRUM_TOL || (eigs[1] - 1.0).abs() > SPECTRUM_TOL {
        return Err(Error::BadObservable {
            reason: format!(
                "{label} observable spectrum is {{{:.12}, {:.12}}}, expected {{-1, 1}}",
                eigs[0], eigs[1]
            ),
        });
    }
    Ok(())
}

/// Imprecision eps = (2 - Tr(target lab)) / 4 of a lab observable against its
/// target. Both operators must be 2x2 +/-1-spectrum observables.
pub fn fidelity_gap(target: &CMatrix, lab: &CMatrix) -> Result<f64> {
    check_observable("target", target)?;
    check_observable("lab", lab)?;
    let overlap = target.trace_product(lab)?;
    Ok((2.0 - overlap.re) / 4.0)
}

/// Outcome sign selecting f^+ or f^-.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// f^s = X~ + s i Y~ for one party.
pub fn f_operator(pair: &ObservablePair, sign: Sign) -> CMatrix {
    let i_s = Complex64::new(0.0, sign.factor());
    pair.x_obs
        .add(&pair.y_obs.scale(i_s))
        .expect("2x2 operands")
}
