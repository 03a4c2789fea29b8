//! Recovers a Hecke character from a one-dimensional compatible system.
//!
//! The infinity type is read off the Frobenius roots at a few probe primes
//! `r ≡ 1 mod* m`, the finite part is solved for on `R_m`, and the result is
//! regenerated against every indexed prime.

pub mod finite;
pub mod probes;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::PrimeIdeal;
use crate::arith::{lcm_u64, primes_up_to};
use crate::codec::{elem_to_strings, ModulusJson};
use crate::compatsys::checks::check_bounded_conductor;
use crate::compatsys::CompatibleSystem;
use crate::error::{Error, Result};
use crate::hecke::file::CharacterFile;
use crate::hecke::{HeckeCharacter, InfinityType};
use crate::rayclass::Modulus;

pub use finite::{extract_finite_part, zeta_order, FinitePart};
pub use probes::{
    adjust_to_one, choose_probe_primes, choose_probe_primes_where, cross_check_independence, infer_exponents,
    Exponents, ProbePrime,
};

#[derive(Debug, Clone)]
pub struct ReconstructOptions {
    pub probe_count: usize,
    /// Residue characteristics sampled when reading the conductor off a realization.
    pub conductor_bound: u64,
    /// Largest exponent tried when growing the modulus over the ramified primes.
    pub max_growth: u32,
    /// Caps the residue characteristic of probe primes; the indexed range otherwise.
    pub probe_height: Option<u64>,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        ReconstructOptions { probe_count: 3, conductor_bound: 60, max_growth: 6, probe_height: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeAudit {
    pub prime: Vec<String>,
    pub p: u64,
    pub generator: Vec<String>,
    pub congruent: bool,
    pub zeta_exp: u64,
    pub m: Vec<i64>,
}

#[derive(Debug, Clone)]
pub struct ReconstructionResult {
    pub character: HeckeCharacter,
    pub infinity_type: InfinityType,
    /// lcm of the orders of the roots of unity met; divides `w_L`.
    pub torsion_order_bound: u64,
    pub ell: u64,
    pub conductor_source: String,
    pub finite_part_method: &'static str,
    pub extraction_places: Vec<u64>,
    pub probes: Vec<ProbeAudit>,
    /// Indexed primes at which the character reproduces `f_r` exactly.
    pub regenerated: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructionJson {
    pub character: CharacterFile,
    pub conductor: ModulusJson,
    pub torsion_order_bound: u64,
    pub ell: u64,
    pub conductor_source: String,
    pub finite_part_method: String,
    pub extraction_places: Vec<u64>,
    pub probes: Vec<ProbeAudit>,
    pub regenerated: usize,
}

impl ReconstructionResult {
    pub fn to_json(&self) -> Result<ReconstructionJson> {
        Ok(ReconstructionJson {
            character: CharacterFile::from_character(&self.character)?,
            conductor: ModulusJson::from_modulus(self.character.modulus()),
            torsion_order_bound: self.torsion_order_bound,
            ell: self.ell,
            conductor_source: self.conductor_source.clone(),
            finite_part_method: self.finite_part_method.to_string(),
            extraction_places: self.extraction_places.clone(),
            probes: self.probes.clone(),
            regenerated: self.regenerated,
        })
    }
}

/// Smallest prime not dividing `w_L` nor any `N(q) − 1` for ramified `q`.
pub fn choose_ell(sys: &CompatibleSystem) -> u64 {
    let w = sys.l().units.torsion_order;
    let bad: Vec<u128> = sys.ramification.iter().map(|q| q.norm() - 1).collect();
    primes_up_to(1000)
        .into_iter()
        .find(|&l| w % l != 0 && bad.iter().all(|n| n % l as u128 != 0))
        .unwrap_or(1009)
}

fn candidate_moduli(sys: &CompatibleSystem, opts: &ReconstructOptions) -> Result<Vec<(Modulus, String)>> {
    let k = sys.k();
    if sys.realization.is_some() {
        let v = check_bounded_conductor(sys, opts.conductor_bound)?;
        if let Some(m) = v.modulus(sys)? {
            return Ok(vec![(m, "realization".into())]);
        }
    }
    if let Some(h) = &sys.conductor_hint {
        return Ok(vec![(h.clone(), "declared".into())]);
    }
    let top = if sys.ramification.is_empty() { 1 } else { opts.max_growth };
    (1..=top)
        .map(|e| {
            let f: Vec<(PrimeIdeal, u32)> = sys.ramification.iter().map(|q| (q.clone(), e)).collect();
            Ok((Modulus::from_factorization(k, &f, sys.real_places.clone())?, format!("grown to exponent {e}")))
        })
        .collect()
}

fn probe_exponents(
    sys: &CompatibleSystem,
    m: &Modulus,
    ell: u64,
    opts: &ReconstructOptions,
) -> Result<Vec<(ProbePrime, Exponents)>> {
    let mut height = sys.frobenius.keys().map(|(p, _)| *p).max().unwrap_or(0);
    if let Some(h) = opts.probe_height {
        height = height.min(h);
    }
    let probes = choose_probe_primes_where(sys.k(), sys.l(), m, opts.probe_count, height, |q| {
        sys.entry(q).is_some()
    })?;
    probes
        .into_par_iter()
        .map(|r| {
            let root = sys
                .root(&r.prime)
                .ok_or_else(|| Error::Malformed(format!("f_r above {} is not linear", r.p())))?;
            let e = infer_exponents(&sys.emb, &root, &r.generator, Some(ell))?;
            Ok((r, e))
        })
        .collect()
}

/// Compares `χ(r)` with the root of `f_r` at every indexed prime coprime to the conductor.
fn regenerate(sys: &CompatibleSystem, chi: &HeckeCharacter) -> Result<usize> {
    let mut n = 0;
    for e in sys.frobenius.values() {
        if !chi.group().is_coprime(&e.prime.generator) {
            continue;
        }
        let root = sys
            .root(&e.prime)
            .ok_or_else(|| Error::Malformed(format!("f_r above {} is not linear", e.prime.p)))?;
        let v = chi.eval_prime(&e.prime)?;
        if v != root {
            return Err(Error::NotHeckeType(format!(
                "reconstructed character gives {v} at r = ({}) above {}, data gives {root}",
                elem_to_strings(&e.prime.generator).join(","),
                e.prime.p
            )));
        }
        n += 1;
    }
    Ok(n)
}

/// For a realized system, the reduction of `χ` must agree with `ρ_℘` at the
/// indexed primes, for each place used.
fn check_against_realization(sys: &CompatibleSystem, chi: &HeckeCharacter, places: &[u64]) -> Result<()> {
    let real = sys.realization()?;
    for q in sys.good_places(places.iter().copied().max().unwrap_or(0))? {
        if !places.contains(&q.p) {
            continue;
        }
        let rho = &real.at(&q)?[0];
        for e in sys.frobenius.values() {
            if e.prime.p == q.p || !chi.group().is_coprime(&e.prime.generator) {
                continue;
            }
            let want = q.reduce(&chi.eval_prime(&e.prime)?)?;
            if rho.eval_prime(&e.prime)? != want {
                return Err(Error::NotHeckeType(format!(
                    "ρ at the place above {} disagrees with the reconstruction at r = ({})",
                    q.p,
                    elem_to_strings(&e.prime.generator).join(",")
                )));
            }
        }
    }
    Ok(())
}

pub fn reconstruct_character(sys: &CompatibleSystem, opts: &ReconstructOptions) -> Result<ReconstructionResult> {
    if sys.dimension != 1 {
        return Err(Error::Malformed(format!(
            "reconstruction needs a one-dimensional system, got dimension {}",
            sys.dimension
        )));
    }
    let w = sys.l().units.torsion_order;
    let ell = choose_ell(sys);
    let candidates = candidate_moduli(sys, opts)?;
    let mut last = None;
    for (m, source) in candidates {
        let found = probe_exponents(sys, &m, ell, opts)?;
        let n = cross_check_independence(&found)?;
        let infinity = InfinityType(n);
        let part = match finite::extract(sys, &infinity, &m) {
            Ok(p) => p,
            Err(finite::Rejection::DoesNotFactor(s)) => {
                last = Some(s);
                continue;
            }
            Err(finite::Rejection::Fatal(e)) => return Err(e),
        };
        let chi = HeckeCharacter::with_group(sys.emb.clone(), part.group.clone(), infinity.clone(), part.finite.clone())
            .map_err(|e| match e {
                Error::UnitCompatibility { unit, detail } => {
                    Error::NotHeckeType(format!("finite part is not trivial on the unit {unit}: {detail}"))
                }
                e => e,
            })?
            .primitive()?;
        let regenerated = regenerate(sys, &chi)?;
        if sys.realization.is_some() {
            check_against_realization(sys, &chi, &part.places)?;
        }
        let mut torsion = chi.finite_part().order().max(1);
        for (_, e) in &found {
            torsion = lcm_u64(torsion, zeta_order(w, e.zeta_exp));
        }
        let probes = found
            .iter()
            .map(|(r, e)| ProbeAudit {
                prime: elem_to_strings(&r.prime.generator),
                p: r.p(),
                generator: elem_to_strings(&r.generator),
                congruent: r.congruent,
                zeta_exp: e.zeta_exp,
                m: e.m.clone(),
            })
            .collect();
        return Ok(ReconstructionResult {
            character: chi,
            infinity_type: infinity,
            torsion_order_bound: torsion,
            ell,
            conductor_source: source,
            finite_part_method: part.method,
            extraction_places: part.places,
            probes,
            regenerated,
        });
    }
    Err(Error::NotHeckeType(last.unwrap_or_else(|| "no candidate modulus".into())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::compatsys::system_from_characters;
    use crate::hecke::presets;

    fn round_trip(chi: &HeckeCharacter, bound: u64) -> (ReconstructionResult, ReconstructionResult) {
        let sys = system_from_characters(&[chi.clone()], bound).unwrap();
        let a = reconstruct_character(&sys, &ReconstructOptions::default()).unwrap();
        let b = reconstruct_character(&sys.data_only(), &ReconstructOptions::default()).unwrap();
        (a, b)
    }

    #[test]
    fn cm_character_round_trip() {
        let chi = presets::cm_gaussian().unwrap();
        let (a, b) = round_trip(&chi, 100);
        let k = chi.k();
        let target = Modulus::finite_only(k, &k.elem(&[2, -2])).unwrap();
        for r in [&a, &b] {
            assert_eq!(r.infinity_type.0, vec![1, 0]);
            assert_eq!(r.character.modulus(), &target);
            assert_eq!(r.character.finite_part(), chi.primitive().unwrap().finite_part());
        }
        assert_eq!(a.finite_part_method, "realization");
        assert_eq!(b.finite_part_method, "frobenius-data");
    }

    #[test]
    fn legendre_symbol_round_trip() {
        let chi = presets::legendre_five().unwrap();
        let (a, b) = round_trip(&chi, 100);
        for r in [&a, &b] {
            assert!(r.infinity_type.is_zero());
            assert_eq!(r.torsion_order_bound, 2);
            assert_eq!(r.character.modulus(), chi.primitive().unwrap().modulus());
        }
    }

    #[test]
    fn trivial_character() {
        let k = catalog::field("qsqrt5").unwrap();
        let l = catalog::field("cyclo5").unwrap();
        let chi = presets::trivial(k, l).unwrap();
        let (a, b) = round_trip(&chi, 60);
        for r in [&a, &b] {
            assert!(r.character.modulus().is_unit(r.character.k()));
            assert!(r.character.finite_part().is_trivial());
        }
    }

    #[test]
    fn conjugate_character_has_permuted_type() {
        let k = catalog::field("gaussian").unwrap();
        let chi = presets::cm_gaussian().unwrap();
        let sys = system_from_characters(&[chi], 100).unwrap();
        let mut conj = sys.data_only();
        for e in conj.frobenius.values_mut() {
            e.poly = e.poly.iter().map(|c| k.apply(1, c)).collect();
        }
        let r = reconstruct_character(&conj, &ReconstructOptions::default()).unwrap();
        assert_eq!(r.infinity_type.0, vec![0, 1]);
    }

    #[test]
    fn exponents_do_not_depend_on_ell() {
        let chi = presets::cm_gaussian().unwrap();
        let sys = system_from_characters(&[chi], 100).unwrap();
        let m = sys.conductor_hint.clone().unwrap();
        let probes = choose_probe_primes(sys.k(), sys.l(), &m, 3, 100).unwrap();
        for r in &probes {
            let root = sys.root(&r.prime).unwrap();
            let base = infer_exponents(&sys.emb, &root, &r.generator, None).unwrap();
            for ell in [3, 5, 7, 11] {
                assert_eq!(infer_exponents(&sys.emb, &root, &r.generator, Some(ell)).unwrap(), base);
            }
        }
    }

    #[test]
    fn perturbed_root_is_rejected() {
        let chi = presets::cm_gaussian().unwrap();
        let mut sys = system_from_characters(&[chi], 100).unwrap().data_only();
        let l = sys.l().clone();
        let key = sys.frobenius.keys().nth(6).unwrap().clone();
        let e = sys.frobenius.get_mut(&key).unwrap();
        e.poly[0] = l.add(&e.poly[0], &l.one());
        match reconstruct_character(&sys, &ReconstructOptions::default()) {
            Err(Error::NotHeckeType(msg)) => assert!(!msg.is_empty()),
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn higher_dimension_is_refused() {
        let chi = presets::cm_gaussian().unwrap();
        let sys = system_from_characters(&[chi.clone(), chi], 30).unwrap();
        assert!(matches!(reconstruct_character(&sys, &ReconstructOptions::default()), Err(Error::Malformed(_))));
    }
}
