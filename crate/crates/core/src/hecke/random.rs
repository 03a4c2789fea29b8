//! Seeded random Hecke characters over catalog fields.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{finite_parts, HeckeCharacter, InfinityType};
use crate::algebra::primes::factor_rational_prime;
use crate::algebra::{Embedding, Field, PrimeIdeal};
use crate::arith::primes_up_to;
use crate::error::{Error, Result};
use crate::rayclass::{Modulus, RayClassGroup};

#[derive(Debug, Clone, Copy)]
pub struct RandomOptions {
    /// Bound on `|(O/m)*|` for the declared modulus.
    pub max_residue_order: u64,
    /// Bound on `|n_σ|`.
    pub max_abs_n: i64,
    pub attempts: usize,
}

impl Default for RandomOptions {
    fn default() -> Self {
        RandomOptions { max_residue_order: 200, max_abs_n: 3, attempts: 500 }
    }
}

/// A random infinity type for which Π σ(u)^{n_σ} is torsion on the units.
pub fn random_infinity_type<R: Rng>(k: &Field, bound: i64, rng: &mut R) -> InfinityType {
    let d = k.d();
    if k.units.rank() == 0 {
        return InfinityType((0..d).map(|_| rng.gen_range(-bound..=bound)).collect());
    }
    if k.is_totally_real() {
        return InfinityType::constant(d, rng.gen_range(-bound..=bound));
    }
    // CM type: n_σ + n_{cσ} constant
    let c = k.conj;
    let reps: Vec<usize> = (0..d).filter(|&s| s < k.compose(c, s)).collect();
    let picks: Vec<i64> = reps.iter().map(|_| rng.gen_range(-bound..=bound)).collect();
    let lo = picks.iter().max().unwrap() - bound;
    let hi = picks.iter().min().unwrap() + bound;
    let total = rng.gen_range(lo..=hi);
    let mut n = vec![0i64; d];
    for (&s, &v) in reps.iter().zip(&picks) {
        n[s] = v;
        n[k.compose(c, s)] = total - v;
    }
    InfinityType(n)
}

fn prime_powers(k: &Field, max_order: u64) -> Result<Vec<(PrimeIdeal, u32)>> {
    let mut out = Vec::new();
    for p in primes_up_to(max_order + 1) {
        for q in factor_rational_prime(k, p)?.iter() {
            let n = q.norm() as u64;
            let mut e = 1u32;
            while n.pow(e - 1) * (n - 1) <= max_order {
                out.push((q.clone(), e));
                e += 1;
            }
        }
    }
    Ok(out)
}

/// A random modulus with `|(O/m)*|` at most `max_order`.
pub fn random_modulus<R: Rng>(k: &Field, max_order: u64, rng: &mut R) -> Result<Modulus> {
    let cands = prime_powers(k, max_order)?;
    let count = rng.gen_range(0..=2usize);
    let mut chosen: Vec<(PrimeIdeal, u32)> = Vec::new();
    let mut order = 1u64;
    for _ in 0..count {
        let fits: Vec<&(PrimeIdeal, u32)> = cands
            .iter()
            .filter(|(q, e)| {
                let n = q.norm() as u64;
                !chosen.iter().any(|(c, _)| c == q) && order * n.pow(e - 1) * (n - 1) <= max_order
            })
            .collect();
        let Some(&(q, e)) = fits.choose(rng) else { break };
        let n = q.norm() as u64;
        order *= n.pow(e - 1) * (n - 1);
        chosen.push((q.clone(), *e));
    }
    chosen.sort();
    let real = (0..k.real_places().len()).map(|_| rng.gen_bool(0.5)).collect();
    Modulus::from_factorization(k, &chosen, real)
}

/// A random character with values in `l`.
pub fn random_character<R: Rng>(k: &Field, l: &Field, opts: &RandomOptions, rng: &mut R) -> Result<HeckeCharacter> {
    let emb = Embedding::find(k.clone(), l.clone())?;
    for _ in 0..opts.attempts {
        let n = random_infinity_type(k, opts.max_abs_n, rng);
        let m = random_modulus(k, opts.max_residue_order, rng)?;
        let group = Arc::new(RayClassGroup::new(k, &m)?);
        let Ok(space) = finite_parts(&emb, &group, &n) else { continue };
        let w = space.base.w;
        let coeffs: Vec<u64> = space.free.iter().map(|_| rng.gen_range(0..w)).collect();
        let eps = space.pick(&coeffs);
        return HeckeCharacter::with_group(emb, group, n, eps);
    }
    Err(Error::SearchBound(format!("no random character found over {}", k.label)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_characters_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for label in ["rationals", "gaussian", "qsqrt5", "cyclo8"] {
            let k = catalog::field(label).unwrap();
            let l = catalog::field(super::super::presets::default_value_field(label)).unwrap();
            for _ in 0..3 {
                let chi = random_character(&k, &l, &RandomOptions::default(), &mut rng).unwrap();
                assert!(chi.group().residue_order() <= 200);
                chi.primitive().unwrap();
            }
        }
    }
}
