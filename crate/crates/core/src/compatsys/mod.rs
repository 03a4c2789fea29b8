//! Compatible systems of mod-℘ representations: Frobenius polynomials `f_r`
//! over L at finitely many indexed primes r of K, ramification set S ⊂ K,
//! defect set T ⊂ L, and (for generated systems) an explicit realization.

pub mod checks;
pub mod file;
pub mod verify;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::primes::factor_rational_prime;
use crate::algebra::{Elem, Embedding, Field, NumberField, PrimeIdeal};
use crate::arith::primes_up_to;
use crate::error::{Error, Result};
use crate::finite_field::{FfElem, FiniteField};
use crate::fp_poly::Poly;
use crate::hecke::{HeckeCharacter, ModPCharacter};
use crate::rayclass::Modulus;

pub use checks::{
    check_bounded_conductor, check_integrality, check_purity, detect_artin, ArtinVerdict, ConductorVerdict,
    IntegralityVerdict, PurityVerdict,
};
pub use file::{load_system, save_system, SystemFile};
pub use verify::{verify, verify_strict, Failure, Mode, VerificationReport};

/// `f_r` at one indexed prime; coefficients ascending, leading one last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobEntry {
    pub prime: PrimeIdeal,
    pub poly: Vec<Elem>,
}

/// Characters on a common modulus whose diagonal sum realizes the system.
#[derive(Debug, Clone)]
pub struct Realization {
    chars: Vec<HeckeCharacter>,
}

impl Realization {
    pub fn characters(&self) -> &[HeckeCharacter] {
        &self.chars
    }

    pub fn modulus(&self) -> &Modulus {
        self.chars[0].modulus()
    }

    /// `ρ_℘` as one table per diagonal entry.
    pub fn at(&self, place: &PrimeIdeal) -> Result<Vec<ModPCharacter>> {
        self.chars.iter().map(|c| c.reduce_mod_place(place)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct CompatibleSystem {
    pub emb: Embedding,
    pub dimension: usize,
    pub ramification: Vec<PrimeIdeal>,
    pub real_places: Vec<bool>,
    pub defect: Vec<PrimeIdeal>,
    pub frobenius: BTreeMap<(u64, Poly), FrobEntry>,
    pub realization: Option<Arc<Realization>>,
    pub conductor_hint: Option<Modulus>,
}

/// All primes of `k` with residue characteristic at most `bound`, ordered by key.
pub fn primes_below(k: &NumberField, bound: u64) -> Result<Vec<PrimeIdeal>> {
    let mut out = Vec::new();
    for p in primes_up_to(bound) {
        out.extend(factor_rational_prime(k, p)?.iter().cloned());
    }
    Ok(out)
}

/// Ascending coefficients of `Π (X − a_i)`.
pub fn poly_from_roots(l: &NumberField, roots: &[Elem]) -> Vec<Elem> {
    let mut f = vec![l.one()];
    for a in roots {
        let mut g = vec![l.zero(); f.len() + 1];
        for (i, c) in f.iter().enumerate() {
            g[i + 1] = l.add(&g[i + 1], c);
            g[i] = l.sub(&g[i], &l.mul(c, a));
        }
        f = g;
    }
    f
}

/// Ascending coefficients of `Π (X − a_i)` over a finite field.
pub fn ff_poly_from_roots(field: &FiniteField, roots: &[FfElem]) -> Vec<FfElem> {
    let mut f = vec![field.one()];
    for a in roots {
        let mut g = vec![field.zero(); f.len() + 1];
        for (i, c) in f.iter().enumerate() {
            g[i + 1] = field.add(&g[i + 1], c);
            g[i] = field.sub(&g[i], &field.mul(c, a));
        }
        f = g;
    }
    f
}

/// Places of L over the characteristics of `support`, and over primes dividing `w_L`.
pub fn default_defect_set(l: &NumberField, support: &[PrimeIdeal]) -> Result<Vec<PrimeIdeal>> {
    let mut chars: Vec<u64> = support.iter().map(|q| q.p).collect();
    chars.extend(crate::arith::factor_u64(l.units.torsion_order).into_iter().map(|(p, _)| p));
    chars.sort_unstable();
    chars.dedup();
    let mut out = Vec::new();
    for p in chars {
        out.extend(factor_rational_prime(l, p)?.iter().cloned());
    }
    Ok(out)
}

/// The direct sum of the given characters, with Frobenius data at every prime
/// of residue characteristic at most `prime_bound` coprime to the combined conductor.
pub fn system_from_characters(chars: &[HeckeCharacter], prime_bound: u64) -> Result<CompatibleSystem> {
    let first = chars
        .first()
        .ok_or_else(|| Error::Malformed("a system needs at least one character".into()))?;
    let emb = first.embedding().clone();
    for c in chars {
        if c.k().label != emb.source.label || c.l().label != emb.target.label || c.embedding().image != emb.image {
            return Err(Error::FieldMismatch(format!(
                "{} → {} does not match {} → {}",
                c.k().label,
                c.l().label,
                emb.source.label,
                emb.target.label
            )));
        }
    }
    let k = emb.source.clone();
    let l = emb.target.clone();
    let prims = chars.iter().map(|c| c.primitive()).collect::<Result<Vec<_>>>()?;
    let mut cond = prims[0].modulus().clone();
    for c in &prims[1..] {
        cond = cond.lcm(&k, c.modulus())?;
    }
    let realized = prims.iter().map(|c| c.inflate(&cond)).collect::<Result<Vec<_>>>()?;
    let ramification = cond.support(&k)?;
    let defect = default_defect_set(&l, &ramification)?;
    let mut frobenius = BTreeMap::new();
    for r in primes_below(&k, prime_bound)? {
        if ramification.contains(&r) {
            continue;
        }
        let roots = prims.iter().map(|c| c.eval_prime(&r)).collect::<Result<Vec<_>>>()?;
        frobenius.insert(r.key(), FrobEntry { poly: poly_from_roots(&l, &roots), prime: r });
    }
    Ok(CompatibleSystem {
        emb,
        dimension: chars.len(),
        ramification,
        real_places: cond.real.clone(),
        defect,
        frobenius,
        realization: Some(Arc::new(Realization { chars: realized })),
        conductor_hint: Some(cond),
    })
}

impl CompatibleSystem {
    pub fn k(&self) -> &Field {
        &self.emb.source
    }

    pub fn l(&self) -> &Field {
        &self.emb.target
    }

    pub fn realization(&self) -> Result<&Realization> {
        self.realization
            .as_deref()
            .ok_or_else(|| Error::NoRealization("axioms unverifiable; reconstruction-only mode".into()))
    }

    pub fn entry(&self, r: &PrimeIdeal) -> Option<&FrobEntry> {
        self.frobenius.get(&r.key())
    }

    /// The single root of `f_r` for a one-dimensional system.
    pub fn root(&self, r: &PrimeIdeal) -> Option<Elem> {
        let e = self.entry(r)?;
        (e.poly.len() == 2).then(|| self.l().neg(&e.poly[0]))
    }

    /// Places of L not in T with residue characteristic at most `bound`.
    pub fn good_places(&self, bound: u64) -> Result<Vec<PrimeIdeal>> {
        Ok(primes_below(self.l(), bound)?
            .into_iter()
            .filter(|q| !self.defect.contains(q))
            .collect())
    }

    /// Attaches the diagonal sum of `chars` as the realization. The data is
    /// not compared with it here; that is what verification does.
    pub fn with_realization(&self, chars: &[HeckeCharacter]) -> Result<CompatibleSystem> {
        if chars.len() != self.dimension {
            return Err(Error::Malformed(format!(
                "{} characters given for a system of dimension {}",
                chars.len(),
                self.dimension
            )));
        }
        let k = self.k();
        let mut cond: Option<Modulus> = None;
        let mut prims = Vec::new();
        for c in chars {
            if c.k().label != k.label || c.l().label != self.l().label || c.embedding().image != self.emb.image {
                return Err(Error::FieldMismatch(format!(
                    "character over {} → {} for a system over {} → {}",
                    c.k().label,
                    c.l().label,
                    k.label,
                    self.l().label
                )));
            }
            let p = c.primitive()?;
            cond = Some(match cond {
                None => p.modulus().clone(),
                Some(m) => m.lcm(k, p.modulus())?,
            });
            prims.push(p);
        }
        let cond = cond.ok_or_else(|| Error::Malformed("no characters given".into()))?;
        let realized = prims.iter().map(|c| c.inflate(&cond)).collect::<Result<Vec<_>>>()?;
        Ok(CompatibleSystem { realization: Some(Arc::new(Realization { chars: realized })), ..self.clone() })
    }

    /// Drops the realization, as for a system read from a file.
    pub fn data_only(&self) -> CompatibleSystem {
        CompatibleSystem { realization: None, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::hecke::presets;

    #[test]
    fn cm_entry_above_five() {
        let chi = presets::cm_gaussian().unwrap();
        let sys = system_from_characters(&[chi], 30).unwrap();
        let k = sys.k().clone();
        let r = factor_rational_prime(&k, 5)
            .unwrap()
            .iter()
            .find(|q| q.generator == k.elem(&[1, 2]) || q.generator == k.elem(&[1, -2]))
            .cloned()
            .unwrap();
        let root = sys.root(&r).unwrap();
        assert!(root == k.elem(&[-1, 2]) || root == k.elem(&[-1, -2]));
        assert_eq!(sys.ramification.len(), 1);
        assert_eq!(sys.ramification[0].p, 2);
    }

    #[test]
    fn trivial_plus_norm() {
        let q = catalog::field("rationals").unwrap();
        let chars = [presets::trivial(q.clone(), q.clone()).unwrap(), presets::norm(q.clone(), q.clone()).unwrap()];
        let sys = system_from_characters(&chars, 20).unwrap();
        assert_eq!(sys.dimension, 2);
        for e in sys.frobenius.values() {
            let p = e.prime.p as i64;
            assert_eq!(e.poly, vec![q.from_int(p), q.from_int(-p - 1), q.one()]);
        }
    }

    #[test]
    fn mismatched_fields_rejected() {
        let g = catalog::field("gaussian").unwrap();
        let q = catalog::field("rationals").unwrap();
        let a = presets::trivial(g.clone(), g.clone()).unwrap();
        let b = presets::trivial(q.clone(), q.clone()).unwrap();
        assert!(matches!(system_from_characters(&[a, b], 10), Err(Error::FieldMismatch(_))));
    }
}
