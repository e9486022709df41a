//! Steering functional, ideal and imprecision-corrected bounds, violation
//! weights, and depolarizing thresholds.
//!
//! The functional applies imprecise observables to all N parties, while the
//! bound correction multiplies per-party factors over the T trusted parties
//! only; that asymmetry is intentional.

use crate::error::{Error, Result};
use crate::observables::{f_operator, ImprecisionParam, ObservablePair, Sign};
use crate::tensor::CMatrix;

/// Verification scenario: N parties, the first T of them trusted.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    n: usize,
    t: usize,
    eps: Vec<ImprecisionParam>,
}

impl Scenario {
    /// Per-party imprecision; entries for untrusted parties are kept for
    /// device simulation but never enter bounds.
    pub fn new(n: usize, t: usize, eps: Vec<ImprecisionParam>) -> Result<Self> {
        if n < 1 {
            return Err(Error::BadScenario {
                reason: "party count must be at least 1".into(),
            });
        }
        if t > n {
            return Err(Error::BadScenario {
                reason: format!("trusted count {t} exceeds party count {n}"),
            });
        }
        if eps.len() != n {
            return Err(Error::BadScenario {
                reason: format!("expected {n} imprecision entries, got {}", eps.len()),
            });
        }
        Ok(Self { n, t, eps })
    }

    /// Same imprecision on every party.
    pub fn uniform(n: usize, t: usize, eps: ImprecisionParam) -> Result<Self> {
        Self::new(n, t, vec![eps; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn eps(&self) -> &[ImprecisionParam] {
        &self.eps
    }

    pub fn trusted_eps(&self) -> &[ImprecisionParam] {
        &self.eps[..self.t]
    }

    /// Worst-case device realization: each party measures the tilted pair at
    /// its own extremal alignment q_k = 1 - 2 eps_k.
    pub fn device_pairs(&self) -> Vec<ObservablePair> {
        self.eps
            .iter()
            .map(|&e| ObservablePair::from_imprecision(e))
            .collect()
    }
}

/// Per-party sign choice s_k selecting f^{s_k}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPattern {
    signs: Vec<Sign>,
}

impl SignPattern {
    pub fn new(signs: Vec<Sign>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::BadPattern {
                reason: "pattern must cover at least one party".into(),
            });
        }
        Ok(Self { signs })
    }

    pub fn all_plus(n: usize) -> Result<Self> {
        Self::new(vec![Sign::Plus; n])
    }

    pub fn uniform(n: usize, sign: Sign) -> Result<Self> {
        Self::new(vec![sign; n])
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }
}

impl std::str::FromStr for SignPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let signs = s
            .chars()
            .map(|ch| match ch {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                other => Err(Error::BadPattern {
                    reason: format!("unexpected character '{other}', want '+' or '-'"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(signs)
    }
}

impl std::fmt::Display for SignPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for s in &self.signs {
            write!(f, "{}", s.symbol())?;
        }
        Ok(())
    }
}

/// L = |Tr(rho f_1^{s_1} x ... x f_N^{s_N})|^2.
///
/// For GHZ input and ideal pairs every uniform pattern gives the same value
/// and mixed patterns give 0; with tilted pairs (q < 1) mixed patterns pick
/// up nonzero contributions through the misalignment terms.
pub fn l_value(rho: &CMatrix, pairs: &[ObservablePair], pattern: &SignPattern) -> Result<f64> {
    if pairs.len() != pattern.len() {
        return Err(Error::DimensionMismatch {
            left: pairs.len(),
            right: pattern.len(),
        });
    }
    if pairs.is_empty() {
        return Err(Error::BadPattern {
            reason: "need at least one party".into(),
        });
    }
    let expected_dim = 1usize
        .checked_shl(pairs.len() as u32)
        .ok_or(Error::BadScenario {
            reason: "party count too large for a dense operator".into(),
        })?;
    if rho.dim() != expected_dim {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: expected_dim,
        });
    }
    let mut op = f_operator(&pairs[0], pattern.signs()[0]);
    for (pair, &sign) in pairs[1..].iter().zip(&pattern.signs()[1..]) {
        op = op.kron(&f_operator(pair, sign));
    }
    let tr = rho.trace_product(&op)?;
    Ok(tr.norm_sqr())
}

/// Ideal-measurement bound B_0 = 2^{N - T}.
pub fn bound_ideal(s: &Scenario) -> f64 {
    2f64.powi((s.n - s.t) as i32)
}

/// Per-party bound correction 1 + 4 sqrt(eps (1 - eps)) - 8 eps sqrt(eps (1 - eps)).
/// Equals (q + s)^2 = 1 + 2 q s at q = 1 - 2 eps, s = 2 sqrt(eps (1 - eps)).
pub fn imprecision_factor(eps: ImprecisionParam) -> f64 {
    let e = eps.value();
    let root = (e * (1.0 - e)).sqrt();
    1.0 + 4.0 * root - 8.0 * e * root
}

/// B for per-party imprecision: 2^{N-T} times the product of the trusted
/// parties' correction factors.
pub fn bound_imprecise_perparty(s: &Scenario) -> f64 {
    s.trusted_eps()
        .iter()
        .fold(bound_ideal(s), |acc, &e| acc * imprecision_factor(e))
}

/// B_eps with the same imprecision on every trusted party.
pub fn bound_imprecise_uniform(s: &Scenario, eps: ImprecisionParam) -> f64 {
    bound_ideal(s) * imprecision_factor(eps).powi(s.t as i32)
}

/// First-order envelope 2^{N-T} (1 + 4 sqrt(eps))^T; dominates the exact bound.
pub fn bound_first_order(s: &Scenario, eps: ImprecisionParam) -> f64 {
    bound_ideal(s) * (1.0 + 4.0 * eps.value().sqrt()).powi(s.t as i32)
}

/// Squared modulus factor |q^N + i^N s^N|^2 shared by the GHZ closed forms.
fn ghz_numerator_norm_sqr(n: usize, eps: ImprecisionParam) -> f64 {
    let q = 1.0 - 2.0 * eps.value();
    let e = eps.value();
    let s = 2.0 * (e * (1.0 - e)).sqrt();
    let i_pow_n = num_complex::Complex::<f64>::i().powu(n as u32);
    let numerator = num_complex::Complex::new(q.powi(n as i32), 0.0) + i_pow_n * s.powi(n as i32);
    numerator.norm_sqr()
}

/// L for the GHZ state with every party at extremal alignment:
/// 2^{2N-2} |q^N + i^N s^N|^2.
pub fn ghz_l_value(n: usize, eps: ImprecisionParam) -> f64 {
    2f64.powi(2 * n as i32 - 2) * ghz_numerator_norm_sqr(n, eps)
}

/// GHZ violation weight W_G = 2^{(N+T-2)/2} |q^N + i^N s^N| / (q + s)^T.
pub fn ghz_weight(s: &Scenario, eps: ImprecisionParam) -> Result<f64> {
    if s.t == 0 {
        return Err(Error::BadScenario {
            reason: "GHZ weight needs at least one trusted party; use di_weight for T = 0".into(),
        });
    }
    let e = eps.value();
    let q = 1.0 - 2.0 * e;
    let sg = 2.0 * (e * (1.0 - e)).sqrt();
    let prefactor = 2f64.powf((s.n + s.t) as f64 / 2.0 - 1.0);
    Ok(prefactor * ghz_numerator_norm_sqr(s.n, eps).sqrt() / (q + sg).powi(s.t as i32))
}

/// W_G at the maximal imprecision eps_1 = (2 - sqrt(2)) / 4; independent of T.
pub fn ghz_weight_eps1(n: usize) -> f64 {
    match n % 4 {
        0 => 1.0,
        2 => 0.0,
        _ => std::f64::consts::FRAC_1_SQRT_2,
    }
}

/// W_d = p W_G for the depolarized GHZ state.
pub fn depolarized_weight(s: &Scenario, eps: ImprecisionParam, p: f64) -> Result<f64> {
    check_visibility(p)?;
    Ok(p * ghz_weight(s, eps)?)
}

/// Device-independent weight p sqrt(L_GHZ(eps) / 2^N): the T = 0 bound is
/// untouched by imprecision, only the observed value degrades.
pub fn di_weight(n: usize, eps: ImprecisionParam, p: f64) -> Result<f64> {
    check_visibility(p)?;
    Ok(p * (ghz_l_value(n, eps) / 2f64.powi(n as i32)).sqrt())
}

fn check_visibility(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            what: "visibility p",
            constraint: "within [0, 1]",
            value: p,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdMethod {
    Quantitative,
    DeviceIndependent,
}

impl std::fmt::Display for ThresholdMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Quantitative => write!(f, "quantitative"),
            Self::DeviceIndependent => write!(f, "device-independent"),
        }
    }
}

/// Smallest visibility whose weight crosses 1, when it exists in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Crossing(f64),
    Unverifiable,
}

/// p* = 1 / W(p=1); the weight is exactly linear in p, so no root-finding.
pub fn threshold_p(s: &Scenario, eps: ImprecisionParam, method: ThresholdMethod) -> Result<Threshold> {
    let w_full = match method {
        ThresholdMethod::Quantitative => depolarized_weight(s, eps, 1.0)?,
        ThresholdMethod::DeviceIndependent => di_weight(s.n, eps, 1.0)?,
    };
    if w_full > 1.0 {
        Ok(Threshold::Crossing(1.0 / w_full))
    } else {
        Ok(Threshold::Unverifiable)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Violation,
    FalsePositiveGap,
    NoViolation,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Violation => write!(f, "violation"),
            Self::FalsePositiveGap => write!(f, "false-positive-gap"),
            Self::NoViolation => write!(f, "no-violation"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationResult {
    pub l_value: f64,
    pub bound_ideal: f64,
    pub bound_imprecise: f64,
    pub weight: f64,
    pub classification: Classification,
}

/// Evaluates L on the supplied device pairs and classifies it against the
/// scenario's ideal and per-party corrected bounds. Violation is strict
/// (L > B_eps); B_0 < L <= B_eps is the false-positive gap.
pub fn verify(
    rho: &CMatrix,
    s: &Scenario,
    pairs: &[ObservablePair],
    pattern: &SignPattern,
) -> Result<VerificationResult> {
    if pairs.len() != s.n {
        return Err(Error::DimensionMismatch {
            left: pairs.len(),
            right: s.n,
        });
    }
    let l = l_value(rho, pairs, pattern)?;
    let b0 = bound_ideal(s);
    let b_eps = bound_imprecise_perparty(s);
    let weight = if l == 0.0 { 0.0 } else { (l / b_eps).sqrt() };
    let classification = if l > b_eps {
        Classification::Violation
    } else if l > b0 {
        Classification::FalsePositiveGap
    } else {
        Classification::NoViolation
    };
    Ok(VerificationResult {
        l_value: l,
        bound_ideal: b0,
        bound_imprecise: b_eps,
        weight,
        classification,
    })
}
