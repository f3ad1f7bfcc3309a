#![allow(dead_code)]

use hubbard_ucc::fock::SpinOrbital;
use hubbard_ucc::hamiltonian::SectorMatrix;
use hubbard_ucc::ucc::ExcitationFactor;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random spin-balanced pair or quadruple factor with a random angle,
/// drawn by rejection over orbital subsets.
pub fn random_factor(rng: &mut ChaCha8Rng) -> ExcitationFactor {
    loop {
        let order = if rng.gen_bool(0.5) { 2 } else { 4 };
        let mut picks: Vec<usize> = (0..8).collect();
        for i in (1..picks.len()).rev() {
            let j = rng.gen_range(0..=i);
            picks.swap(i, j);
        }
        let orbitals = |ix: &[usize]| -> Vec<SpinOrbital> {
            ix.iter().map(|&i| SpinOrbital::from_canonical(i)).collect()
        };
        let targets = orbitals(&picks[..order]);
        let sources = orbitals(&picks[order..2 * order]);
        let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        if let Ok(factor) = ExcitationFactor::new(targets, sources, theta) {
            return factor;
        }
    }
}

/// Frobenius distance between two sector matrices.
pub fn frobenius_distance(a: &SectorMatrix, b: &SectorMatrix) -> f64 {
    (a.matrix() - b.matrix())
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// One pass/fail line per acceptance criterion.
pub fn report(criterion: &str, passed: bool, detail: &str) {
    let tag = if passed { "PASS" } else { "FAIL" };
    println!("{tag} {criterion}: {detail}");
}
