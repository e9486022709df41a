//! Randomized invariants: algebraic identities of the tensor layer, spectrum
//! and round-trip laws of the tilted observables, bound ordering, and the
//! per-party inequality chain behind the LHS bound.

use proptest::prelude::*;
use qsteer_core::{
    bound_first_order, bound_ideal, bound_imprecise_uniform, f_operator, ghz, ghz_l_value,
    imprecision_factor, l_value, tilted_pair, AlignmentFactor, Axis, CMatrix, Complex64,
    ImprecisionParam, Scenario, Sign, SignPattern, MAX_IMPRECISION,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn complex_entry() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn matrix(dim: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec(complex_entry(), dim * dim)
        .prop_map(move |entries| CMatrix::new(dim, entries).unwrap())
}

/// Unitary built by composing seeded complex Givens rotations.
fn random_unitary(dim: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = CMatrix::identity(dim);
    for _ in 0..4 * dim * dim {
        let p = rng.gen_range(0..dim);
        let q = rng.gen_range(0..dim);
        if p == q {
            continue;
        }
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let mut g = CMatrix::identity(dim);
        let e = Complex64::new(0.0, phi).exp();
        g.set(p, p, Complex64::new(theta.cos(), 0.0));
        g.set(p, q, -e * theta.sin());
        g.set(q, p, e.conj() * theta.sin());
        g.set(q, q, Complex64::new(theta.cos(), 0.0));
        u = u.matmul(&g).unwrap();
    }
    u
}

fn max_entry_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn kron_is_associative(a in matrix(2), b in matrix(2), c in matrix(3)) {
        let left = a.kron(&b).kron(&c);
        let right = a.kron(&b.kron(&c));
        prop_assert!(max_entry_distance(&left, &right) < 1e-14);
    }

    #[test]
    fn kron_multiplies_traces(a in matrix(2), b in matrix(3)) {
        let direct = a.kron(&b).trace();
        let product = a.trace() * b.trace();
        prop_assert!((direct - product).norm() < 1e-12);
    }

    #[test]
    fn trace_is_cyclic(a in matrix(4), b in matrix(4)) {
        let ab = a.trace_product(&b).unwrap();
        let ba = b.trace_product(&a).unwrap();
        prop_assert!((ab - ba).norm() < 1e-12);
    }

    #[test]
    fn jacobi_recovers_planted_spectrum(
        seed in any::<u64>(),
        mut eigs in prop::collection::vec(-5.0..5.0f64, 6),
    ) {
        let dim = eigs.len();
        let u = random_unitary(dim, seed);
        let mut d = CMatrix::zeros(dim);
        for (i, &e) in eigs.iter().enumerate() {
            d.set(i, i, Complex64::new(e, 0.0));
        }
        let a = u.matmul(&d).unwrap().matmul(&u.adjoint()).unwrap();
        let computed = a.hermitian_eigenvalues().unwrap();
        eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (got, want) in computed.iter().zip(&eigs) {
            prop_assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn tilted_observables_have_unit_spectrum(
        q in std::f64::consts::FRAC_1_SQRT_2..=1.0f64,
    ) {
        let pair = tilted_pair(AlignmentFactor::new(q).unwrap());
        for obs in [&pair.x_obs, &pair.y_obs] {
            let eigs = obs.hermitian_eigenvalues().unwrap();
            prop_assert!((eigs[0] + 1.0).abs() < 1e-10);
            prop_assert!((eigs[1] - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn fidelity_gap_round_trips(eps in 0.0..=MAX_IMPRECISION) {
        let pair = qsteer_core::ObservablePair::from_imprecision(
            ImprecisionParam::new(eps).unwrap(),
        );
        let gap = qsteer_core::fidelity_gap(&qsteer_core::pauli(Axis::X), &pair.x_obs).unwrap();
        prop_assert!((gap - eps).abs() < 1e-12);
    }

    #[test]
    fn f_operators_are_mutually_adjoint(
        q in std::f64::consts::FRAC_1_SQRT_2..=1.0f64,
    ) {
        let pair = tilted_pair(AlignmentFactor::new(q).unwrap());
        let plus = f_operator(&pair, Sign::Plus);
        let minus = f_operator(&pair, Sign::Minus);
        prop_assert!(max_entry_distance(&plus.adjoint(), &minus) < 1e-14);
    }

    #[test]
    fn bounds_are_ordered(
        (n, t) in (2..=8usize).prop_flat_map(|n| (Just(n), 1..=n)),
        eps in 1e-6..MAX_IMPRECISION,
    ) {
        let e = ImprecisionParam::new(eps).unwrap();
        let s = Scenario::uniform(n, t, e).unwrap();
        let b0 = bound_ideal(&s);
        let b_eps = bound_imprecise_uniform(&s, e);
        let b_fo = bound_first_order(&s, e);
        prop_assert!(b0 < b_eps, "{b0} !< {b_eps}");
        prop_assert!(b_eps <= b_fo, "{b_eps} !<= {b_fo}");
    }

    #[test]
    fn factor_identity_holds(eps in 0.0..=MAX_IMPRECISION) {
        let q = 1.0 - 2.0 * eps;
        let s = 2.0 * (eps * (1.0 - eps)).sqrt();
        let factor = imprecision_factor(ImprecisionParam::new(eps).unwrap());
        prop_assert!((factor - (q + s) * (q + s)).abs() < 1e-12);
        prop_assert!((factor - (1.0 + 2.0 * q * s)).abs() < 1e-12);
    }

    /// Per-party chain behind the bound: an untrusted deterministic response
    /// contributes modulus^2 exactly 2; a trusted qubit contributes at most
    /// the correction factor 1 + 2 q sqrt(1 - q^2).
    #[test]
    fn per_party_factors_obey_the_chain(
        q in std::f64::consts::FRAC_1_SQRT_2..=1.0f64,
        raw in [-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64],
        x_is_plus in any::<bool>(),
        y_is_plus in any::<bool>(),
    ) {
        let x = if x_is_plus { 1.0 } else { -1.0 };
        let y = if y_is_plus { 1.0 } else { -1.0 };
        assert_eq!(x * x + y * y, 2.0);

        let norm = (raw[0] * raw[0] + raw[1] * raw[1] + raw[2] * raw[2]).sqrt();
        let r = if norm > 1.0 {
            [raw[0] / norm, raw[1] / norm, raw[2] / norm]
        } else {
            raw
        };
        let s = (1.0 - q * q).max(0.0).sqrt();
        // <X~> = q r_x + s r_y, <Y~> = q r_y + s r_x.
        let ex = q * r[0] + s * r[1];
        let ey = q * r[1] + s * r[0];
        let modulus_sqr = ex * ex + ey * ey;
        prop_assert!(modulus_sqr <= 1.0 + 2.0 * q * s + 1e-12);
    }

    #[test]
    fn ghz_closed_form_matches_matrix_route(
        n in 2..=5usize,
        eps in 0.0..=MAX_IMPRECISION,
    ) {
        let e = ImprecisionParam::new(eps).unwrap();
        let rho = ghz(n).unwrap().density();
        let s = Scenario::uniform(n, 1, e).unwrap();
        let matrix = l_value(&rho, &s.device_pairs(), &SignPattern::all_plus(n).unwrap()).unwrap();
        prop_assert!((matrix - ghz_l_value(n, e)).abs() < 1e-10);
    }
}
