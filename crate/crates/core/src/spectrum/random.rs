use rand::Rng;

use super::SpectrumSet;
use crate::error::Result;

/// Random valid spectrum with `depth` positive λ.
///
/// With `adversarial`, each new λ is biased towards solutions of the two
/// exception equations, `3λ_n + λ_m + λ_k` or `3λ_n + λ_k - λ_m`, so that
/// exceptions actually occur; otherwise it is drawn from `(3λ_n, 6λ_n]`.
pub fn random_lacunary<R: Rng + ?Sized>(rng: &mut R, depth: usize, adversarial: bool) -> Result<SpectrumSet> {
    let mut lam: Vec<i128> = vec![0];
    if depth == 0 {
        return SpectrumSet::new(lam);
    }
    lam.push(rng.gen_range(1..=4));
    while lam.len() <= depth {
        let ln = *lam.last().unwrap();
        let next = if adversarial && rng.gen_bool(0.7) {
            let k = lam[rng.gen_range(1..lam.len())];
            let below: Vec<i128> = lam.iter().copied().filter(|&m| m <= k).collect();
            let m = below[rng.gen_range(0..below.len())];
            if m < k && rng.gen_bool(0.5) {
                3 * ln + k - m
            } else {
                3 * ln + m + k
            }
        } else {
            rng.gen_range(3 * ln + 1..=6 * ln)
        };
        lam.push(next);
    }
    SpectrumSet::new(lam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn always_valid() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for depth in 0..10 {
            for adv in [false, true] {
                assert_eq!(random_lacunary(&mut rng, depth, adv).unwrap().lambdas().len(), depth + 1);
            }
        }
    }
}
