//! Explicit LHS(T, N) models and a seeded randomized search for the largest
//! functional value they can produce, property-testing the bounds and
//! exhibiting statistics inside the (B_0, B_eps] false-positive gap where
//! reachable.

use crate::error::{Error, Result};
use crate::inequality::{bound_ideal, bound_imprecise_uniform, Scenario, SignPattern};
use crate::observables::{ImprecisionParam, ObservablePair};
use crate::states::{bloch_state, NORM_TOL};
use crate::tensor::{CMatrix, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Slack above the bound before a value counts as a falsification, and above
/// B_0 before it counts as reaching the gap.
pub const BOUND_SLACK: f64 = 1e-9;

const SHARD_SIZE: usize = 1024;
const REFINE_PASSES: usize = 200;
const REFINE_STEP: f64 = 0.05;
const REFINE_MIN_STEP: f64 = 1e-9;

/// One hidden-variable branch: T trusted single-qubit states as Bloch
/// vectors, N - T untrusted deterministic outcome pairs in {-1, +1}.
#[derive(Debug, Clone, PartialEq)]
pub struct LhsComponent {
    pub trusted_blochs: Vec<[f64; 3]>,
    pub untrusted_responses: Vec<(f64, f64)>,
}

/// Finite mixture over hidden variables. Deterministic untrusted responses
/// lose no generality: every response function is a convex mixture of
/// deterministic ones and the functional is affine in the mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct LhsModel {
    weights: Vec<f64>,
    components: Vec<LhsComponent>,
}

impl LhsModel {
    pub fn new(weights: Vec<f64>, components: Vec<LhsComponent>) -> Result<Self> {
        if weights.is_empty() || weights.len() != components.len() {
            return Err(Error::BadModel {
                reason: format!(
                    "need matching nonempty weights and components, got {} and {}",
                    weights.len(),
                    components.len()
                ),
            });
        }
        let mut total = 0.0;
        for &w in &weights {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::BadModel {
                    reason: format!("weight {w} is not a probability"),
                });
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::BadModel {
                reason: format!("weights sum to {total}, expected 1"),
            });
        }
        let shape = (
            components[0].trusted_blochs.len(),
            components[0].untrusted_responses.len(),
        );
        for c in &components {
            if (c.trusted_blochs.len(), c.untrusted_responses.len()) != shape {
                return Err(Error::BadModel {
                    reason: "components disagree on trusted/untrusted counts".into(),
                });
            }
            for r in &c.trusted_blochs {
                let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
                if !norm.is_finite() || norm > 1.0 + NORM_TOL {
                    return Err(Error::BadModel {
                        reason: format!("Bloch vector norm {norm} exceeds 1"),
                    });
                }
            }
            for &(x, y) in &c.untrusted_responses {
                if x.abs() != 1.0 || y.abs() != 1.0 {
                    return Err(Error::BadModel {
                        reason: format!("untrusted response ({x}, {y}) must be in {{-1, +1}}^2"),
                    });
                }
            }
        }
        Ok(Self {
            weights,
            components,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[LhsComponent] {
        &self.components
    }

    pub fn mixtures(&self) -> usize {
        self.weights.len()
    }

    /// The hidden state rho_{k,lambda} as a density matrix.
    pub fn trusted_state(&self, lambda: usize, k: usize) -> Result<CMatrix> {
        bloch_state(self.components[lambda].trusted_blochs[k])
    }
}

/// Tr(obs rho) for rho = (I + r . sigma) / 2, without heap allocation.
fn bloch_expectation(obs: &CMatrix, r: [f64; 3]) -> f64 {
    let rho00 = Complex64::new(0.5 * (1.0 + r[2]), 0.0);
    let rho01 = Complex64::new(0.5 * r[0], -0.5 * r[1]);
    let rho10 = Complex64::new(0.5 * r[0], 0.5 * r[1]);
    let rho11 = Complex64::new(0.5 * (1.0 - r[2]), 0.0);
    (obs.get(0, 0) * rho00
        + obs.get(0, 1) * rho10
        + obs.get(1, 0) * rho01
        + obs.get(1, 1) * rho11)
        .re
}

/// L produced by the model: |sum_lambda p(lambda) prod_k g_k(lambda)|^2 with
/// trusted factors Tr(X~_k rho_{k,lambda}) + s_k i Tr(Y~_k rho_{k,lambda})
/// and untrusted factors x_k + s_k i y_k. Only the first T pairs are used;
/// untrusted parties answer through their deterministic responses.
pub fn model_l_value(
    model: &LhsModel,
    s: &Scenario,
    pairs: &[ObservablePair],
    pattern: &SignPattern,
) -> Result<f64> {
    if pairs.len() != s.n() {
        return Err(Error::DimensionMismatch {
            left: pairs.len(),
            right: s.n(),
        });
    }
    if pattern.len() != s.n() {
        return Err(Error::DimensionMismatch {
            left: pattern.len(),
            right: s.n(),
        });
    }
    let untrusted = s.n() - s.t();
    for c in model.components() {
        if c.trusted_blochs.len() != s.t() || c.untrusted_responses.len() != untrusted {
            return Err(Error::BadModel {
                reason: format!(
                    "component shape ({}, {}) does not match scenario (T={}, N-T={})",
                    c.trusted_blochs.len(),
                    c.untrusted_responses.len(),
                    s.t(),
                    untrusted
                ),
            });
        }
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (weight, c) in model.weights().iter().zip(model.components()) {
        let mut factor = Complex64::new(*weight, 0.0);
        for (k, r) in c.trusted_blochs.iter().enumerate() {
            let x = bloch_expectation(&pairs[k].x_obs, *r);
            let y = bloch_expectation(&pairs[k].y_obs, *r);
            factor *= Complex64::new(x, pattern.signs()[k].factor() * y);
        }
        for (j, &(x, y)) in c.untrusted_responses.iter().enumerate() {
            let sign = pattern.signs()[s.t() + j].factor();
            factor *= Complex64::new(x, sign * y);
        }
        acc += factor;
    }
    Ok(acc.norm_sqr())
}

fn random_model_from(s: &Scenario, mixtures: usize, rng: &mut ChaCha8Rng) -> LhsModel {
    let mut raw: Vec<f64> = (0..mixtures)
        .map(|_| -(1.0 - rng.gen::<f64>()).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    if total > 0.0 {
        for w in &mut raw {
            *w /= total;
        }
    } else {
        raw.fill(1.0 / mixtures as f64);
    }
    // Exact renormalization so the constructor's 1e-12 check always holds.
    let sum: f64 = raw.iter().sum();
    for w in &mut raw {
        *w /= sum;
    }
    let untrusted = s.n() - s.t();
    let components = (0..mixtures)
        .map(|_| {
            let trusted_blochs = (0..s.t())
                .map(|_| loop {
                    let v = [
                        rng.gen_range(-1.0..=1.0),
                        rng.gen_range(-1.0..=1.0),
                        rng.gen_range(-1.0..=1.0),
                    ];
                    if v[0] * v[0] + v[1] * v[1] + v[2] * v[2] <= 1.0 {
                        break v;
                    }
                })
                .collect();
            let untrusted_responses = (0..untrusted)
                .map(|_| {
                    (
                        if rng.gen::<bool>() { 1.0 } else { -1.0 },
                        if rng.gen::<bool>() { 1.0 } else { -1.0 },
                    )
                })
                .collect();
            LhsComponent {
                trusted_blochs,
                untrusted_responses,
            }
        })
        .collect();
    LhsModel::new(raw, components).expect("construction satisfies the model invariants")
}

/// Seeded-deterministic random model: Dirichlet-like weights, Bloch vectors
/// uniform on the unit ball, responses uniform in {-1, +1}^2.
pub fn random_model(s: &Scenario, mixtures: usize, seed: u64) -> Result<LhsModel> {
    if mixtures < 1 {
        return Err(Error::BadModel {
            reason: "need at least one mixture component".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_model_from(s, mixtures, &mut rng))
}

/// Outcome of a randomized bound-stress search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub best_l: f64,
    pub best_model: LhsModel,
    pub bound: f64,
    pub reached_gap: bool,
    pub iterations: usize,
    pub seed: u64,
}

impl SearchReport {
    /// False means the run falsified the bound: a software defect.
    pub fn bound_respected(&self) -> bool {
        self.best_l <= self.bound + BOUND_SLACK
    }
}

/// Randomized search for the model maximizing L, followed by coordinate-wise
/// hill climbing on the best model's Bloch vectors. The scenario contributes
/// N and T; every party measures the tilted pair at q = 1 - 2 eps, and the
/// reported bound is the matching uniform B_eps. Iterations are sharded into
/// deterministic per-shard generators (seed + shard index) and merged by
/// value, ties to the lowest shard, so the result is thread-count
/// independent.
pub fn search_max(
    s: &Scenario,
    eps: ImprecisionParam,
    iterations: usize,
    mixtures: usize,
    seed: u64,
) -> Result<SearchReport> {
    if iterations < 1 {
        return Err(Error::BadModel {
            reason: "need at least one search iteration".into(),
        });
    }
    if mixtures < 1 {
        return Err(Error::BadModel {
            reason: "need at least one mixture component".into(),
        });
    }
    let scenario = Scenario::uniform(s.n(), s.t(), eps)?;
    let pairs = scenario.device_pairs();
    let pattern = SignPattern::all_plus(scenario.n())?;
    let bound = bound_imprecise_uniform(&scenario, eps);
    let b0 = bound_ideal(&scenario);

    let num_shards = iterations.div_ceil(SHARD_SIZE);
    let shard_best: Vec<(f64, LhsModel)> = (0..num_shards)
        .into_par_iter()
        .map(|shard| {
            let count = SHARD_SIZE.min(iterations - shard * SHARD_SIZE);
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(shard as u64));
            let mut best: Option<(f64, LhsModel)> = None;
            for _ in 0..count {
                let model = random_model_from(&scenario, mixtures, &mut rng);
                let l = model_l_value(&model, &scenario, &pairs, &pattern)?;
                if best.as_ref().map_or(true, |(bl, _)| l > *bl) {
                    best = Some((l, model));
                }
            }
            Ok(best.expect("every shard evaluates at least one model"))
        })
        .collect::<Result<_>>()?;

    let mut best_l = f64::NEG_INFINITY;
    let mut best_model = None;
    for (l, model) in shard_best {
        if l > best_l {
            best_l = l;
            best_model = Some(model);
        }
    }
    let mut best_model = best_model.expect("at least one shard ran");

    (best_l, best_model) = refine(best_model, best_l, &scenario, &pairs, &pattern)?;

    Ok(SearchReport {
        best_l,
        best_model,
        bound,
        reached_gap: best_l > b0 + BOUND_SLACK,
        iterations,
        seed,
    })
}

/// Greedy coordinate ascent on the trusted Bloch vectors; step halves after
/// each pass without improvement. Weights and responses stay fixed, so every
/// intermediate candidate remains a valid model.
fn refine(
    mut model: LhsModel,
    mut best_l: f64,
    s: &Scenario,
    pairs: &[ObservablePair],
    pattern: &SignPattern,
) -> Result<(f64, LhsModel)> {
    if s.t() == 0 {
        return Ok((best_l, model));
    }
    let mut step = REFINE_STEP;
    for _ in 0..REFINE_PASSES {
        let mut improved = false;
        for lambda in 0..model.mixtures() {
            for k in 0..s.t() {
                for axis in 0..3 {
                    for dir in [step, -step] {
                        let mut candidate = model.clone();
                        let r = &mut candidate.components[lambda].trusted_blochs[k];
                        r[axis] += dir;
                        let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
                        if norm > 1.0 {
                            for c in r.iter_mut() {
                                *c /= norm;
                            }
                        }
                        let l = model_l_value(&candidate, s, pairs, pattern)?;
                        if l > best_l {
                            best_l = l;
                            model = candidate;
                            improved = true;
                        }
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < REFINE_MIN_STEP {
                break;
            }
        }
    }
    Ok((best_l, model))
}
