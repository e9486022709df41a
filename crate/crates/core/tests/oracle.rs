//! Cross-validates the dense-matrix functional against an independent
//! state-vector route that never builds a Kronecker product: local operators
//! are applied through bit manipulation, with party 1 on the most
//! significant bit.

use qsteer_core::{
    depolarized_ghz, ghz, l_value, model_l_value, product_state, random_model, random_pure,
    AlignmentFactor, CMatrix, Complex64, ImprecisionParam, LhsModel, ObservablePair, Scenario,
    SignPattern,
};

type Local = [[Complex64; 2]; 2];

/// f^s = X~ + s i Y~ assembled from scratch with plain 2x2 arithmetic.
fn local_f(q: f64, sign: f64) -> Local {
    let s = (1.0 - q * q).max(0.0).sqrt();
    let zero = Complex64::new(0.0, 0.0);
    // X~ = q sx + s sy, Y~ = q sy + s sx.
    let x = [
        [zero, Complex64::new(q, -s)],
        [Complex64::new(q, s), zero],
    ];
    let y = [
        [zero, Complex64::new(s, -q)],
        [Complex64::new(s, q), zero],
    ];
    let mut f = [[zero; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            f[r][c] = x[r][c] + Complex64::new(0.0, sign) * y[r][c];
        }
    }
    f
}

/// Applies a 2x2 operator to one party of a state vector.
fn apply_local(psi: &[Complex64], n: usize, party: usize, op: &Local) -> Vec<Complex64> {
    let mask = 1usize << (n - 1 - party);
    let mut out = psi.to_vec();
    for b in 0..psi.len() {
        if b & mask == 0 {
            let b1 = b | mask;
            out[b] = op[0][0] * psi[b] + op[0][1] * psi[b1];
            out[b1] = op[1][0] * psi[b] + op[1][1] * psi[b1];
        }
    }
    out
}

/// <psi| f_1 x ... x f_N |psi> with per-party alignments and signs.
fn pure_expectation(psi: &[Complex64], qs: &[f64], signs: &[f64]) -> Complex64 {
    let n = qs.len();
    let mut phi = psi.to_vec();
    for (party, (&q, &sign)) in qs.iter().zip(signs).enumerate() {
        phi = apply_local(&phi, n, party, &local_f(q, sign));
    }
    psi.iter()
        .zip(&phi)
        .map(|(a, b)| a.conj() * b)
        .sum()
}

fn uniform_pairs(n: usize, q: f64) -> Vec<ObservablePair> {
    let q = AlignmentFactor::new(q).unwrap();
    (0..n).map(|_| qsteer_core::tilted_pair(q)).collect()
}

#[test]
fn ghz_matrix_route_matches_state_vector_route() {
    for n in 2..=6 {
        let rho = ghz(n).unwrap().density();
        let psi = ghz(n).unwrap();
        let pattern = SignPattern::all_plus(n).unwrap();
        for step in 0..=7 {
            let eps = 0.02 * step as f64;
            let q = 1.0 - 2.0 * eps;
            let matrix = l_value(&rho, &uniform_pairs(n, q), &pattern).unwrap();
            let expect = pure_expectation(psi.amplitudes(), &vec![q; n], &vec![1.0; n]);
            assert!(
                (matrix - expect.norm_sqr()).abs() < 1e-10,
                "n={n} eps={eps}: {matrix} vs {}",
                expect.norm_sqr()
            );
        }
    }
}

#[test]
fn random_states_and_mixed_patterns_agree_across_routes() {
    for seed in 0..25u64 {
        let n = 2 + (seed % 4) as usize;
        let psi = random_pure(n, seed).unwrap();
        let rho = psi.density();
        // Per-party alignments and a seed-dependent mixed sign pattern.
        let qs: Vec<f64> = (0..n)
            .map(|k| 1.0 - 0.04 * ((seed as usize + k) % 8) as f64 / 2.0)
            .collect();
        let signs: Vec<f64> = (0..n)
            .map(|k| if (seed as usize + k) % 3 == 0 { -1.0 } else { 1.0 })
            .collect();
        let pattern_str: String = signs.iter().map(|&s| if s > 0.0 { '+' } else { '-' }).collect();
        let pattern: SignPattern = pattern_str.parse().unwrap();
        let pairs: Vec<ObservablePair> = qs
            .iter()
            .map(|&q| qsteer_core::tilted_pair(AlignmentFactor::new(q).unwrap()))
            .collect();
        let matrix = l_value(&rho, &pairs, &pattern).unwrap();
        let oracle = pure_expectation(psi.amplitudes(), &qs, &signs).norm_sqr();
        assert!(
            (matrix - oracle).abs() < 1e-10,
            "seed {seed}: {matrix} vs {oracle}"
        );
    }
}

#[test]
fn depolarized_mix_agrees_with_convex_combination_of_routes() {
    // Tr(f) = 0 per party, so the identity part never contributes and the
    // mixed-state trace is p <psi|Op|psi> exactly.
    for n in 2..=4 {
        let psi = ghz(n).unwrap();
        let pattern = SignPattern::all_plus(n).unwrap();
        for p in [0.0, 0.35, 0.8] {
            let rho = depolarized_ghz(n, p).unwrap();
            let q = 0.94;
            let matrix = l_value(&rho, &uniform_pairs(n, q), &pattern).unwrap();
            let pure = pure_expectation(psi.amplitudes(), &vec![q; n], &vec![1.0; n]);
            let oracle = (pure * p).norm_sqr();
            assert!(
                (matrix - oracle).abs() < 1e-10,
                "n={n} p={p}: {matrix} vs {oracle}"
            );
        }
    }
}

#[test]
fn single_lambda_model_matches_density_matrix_embedding() {
    // Deterministic responses embed as scalar observables x I and y I; the
    // untrusted marginal state is then irrelevant and both computation paths
    // must agree.
    for seed in 0..20u64 {
        let n = 2 + (seed % 3) as usize;
        let t = 1 + (seed as usize % n.min(2));
        let eps = ImprecisionParam::new(0.03).unwrap();
        let s = Scenario::uniform(n, t, eps).unwrap();
        let sampled = random_model(&s, 1, seed).unwrap();
        let component = sampled.components()[0].clone();
        let model = LhsModel::new(vec![1.0], vec![component.clone()]).unwrap();
        let pattern = SignPattern::all_plus(n).unwrap();
        let device_pairs = s.device_pairs();
        let model_value = model_l_value(&model, &s, &device_pairs, &pattern).unwrap();

        let mut blochs = component.trusted_blochs.clone();
        blochs.resize(n, [0.0, 0.0, 0.0]);
        let rho = product_state(&blochs).unwrap();
        let mut pairs = device_pairs[..t].to_vec();
        for &(x, y) in &component.untrusted_responses {
            pairs.push(ObservablePair {
                x_obs: CMatrix::identity(2).scale(Complex64::new(x, 0.0)),
                y_obs: CMatrix::identity(2).scale(Complex64::new(y, 0.0)),
                alignment: AlignmentFactor::ideal(),
            });
        }
        let matrix_value = l_value(&rho, &pairs, &pattern).unwrap();
        assert!(
            (model_value - matrix_value).abs() < 1e-10,
            "seed {seed}: {model_value} vs {matrix_value}"
        );
    }
}
