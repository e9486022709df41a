//! Fixtures shared by the benchmark targets.

use qsteer_core::{
    ghz, random_model, CMatrix, ImprecisionParam, LhsModel, ObservablePair, Scenario,
};

pub fn ghz_density(n: usize) -> CMatrix {
    ghz(n).expect("n >= 2").density()
}

pub fn tilted_pairs(n: usize, eps: f64) -> Vec<ObservablePair> {
    let e = ImprecisionParam::new(eps).expect("eps in range");
    (0..n).map(|_| ObservablePair::from_imprecision(e)).collect()
}

pub fn sample_scenario(n: usize, t: usize, eps: f64) -> Scenario {
    Scenario::uniform(n, t, ImprecisionParam::new(eps).expect("eps in range"))
        .expect("valid scenario")
}

pub fn sample_model(s: &Scenario, mixtures: usize, seed: u64) -> LhsModel {
    random_model(s, mixtures, seed).expect("valid model")
}
