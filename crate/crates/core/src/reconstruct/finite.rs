//! The finite part ε on `R_m`, from a realization (two residue places) or
//! from the exact Frobenius data.

use std::sync::Arc;

use num::{Integer, Zero};

use crate::algebra::{Elem, NumberField, PrimeIdeal};
use crate::codec::elem_to_strings;
use crate::compatsys::CompatibleSystem;
use crate::error::{Error, Result};
use crate::finite_field::FfElem;
use crate::hecke::InfinityType;
use crate::intmat::{self, Mat};
use crate::rayclass::{FiniteCharacter, Modulus, RayClassGroup};

/// Residue characteristics searched for the two identification places.
pub const PLACE_SEARCH_BOUND: u64 = 400;

#[derive(Debug, Clone)]
pub struct FinitePart {
    pub finite: FiniteCharacter,
    pub group: Arc<RayClassGroup>,
    /// `"realization"` or `"frobenius-data"`.
    pub method: &'static str,
    /// Residue characteristics of the places used for identification.
    pub places: Vec<u64>,
}

/// Why a candidate modulus was rejected.
#[derive(Debug)]
pub(crate) enum Rejection {
    /// ε does not factor through the modulus.
    DoesNotFactor(String),
    Fatal(Error),
}

impl From<Error> for Rejection {
    fn from(e: Error) -> Self {
        Rejection::Fatal(e)
    }
}

fn coprime_to(k: &NumberField, g: &Elem, p: u64) -> bool {
    let n = k.norm(g);
    let pb = num::BigInt::from(p);
    !(n.numer() % &pb).is_zero() && !(n.denom() % &pb).is_zero()
}

/// ε from `ρ_℘((g)) · Π σ(g)^{-m_σ} mod ℘` at the generators `g` of `R_m`,
/// matched against the roots of unity of L at two places.
fn via_realization(sys: &CompatibleSystem, infinity: &InfinityType, group: Arc<RayClassGroup>) -> Result<FinitePart> {
    let k = sys.k();
    let l = sys.l();
    let w = l.units.torsion_order;
    let real = sys.realization()?;
    let gens = group.r_generators()?;
    let mut places: Vec<PrimeIdeal> = Vec::new();
    for q in sys.good_places(PLACE_SEARCH_BOUND)? {
        if places.len() == 2 {
            break;
        }
        if w % q.p == 0 || places.iter().any(|x| x.p == q.p) || !gens.iter().all(|g| coprime_to(k, g, q.p)) {
            continue;
        }
        places.push(q);
    }
    if places.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "fewer than two admissible places below {PLACE_SEARCH_BOUND}"
        )));
    }
    let mut observed: Vec<Vec<FfElem>> = Vec::new();
    let mut zetas: Vec<Vec<FfElem>> = Vec::new();
    for q in &places {
        let rho = &real.at(q)?[0];
        let field = rho.field();
        let mut row = Vec::new();
        for g in &gens {
            let v = rho.eval_elem(g)?;
            let twist = q.reduce(&sys.emb.apply(&infinity.eval(k, g)?))?;
            let inv = field
                .inv(&twist)
                .ok_or_else(|| Error::NotCoprime(format!("Π σ(g)^m vanishes at the place above {}", q.p)))?;
            row.push(field.mul(&v, &inv));
        }
        observed.push(row);
        zetas.push((0..w).map(|e| q.reduce(&l.zeta_pow(e as i64))).collect::<Result<_>>()?);
    }
    let mut values = Vec::new();
    for (j, g) in gens.iter().enumerate() {
        let matches: Vec<u64> = (0..w)
            .filter(|&e| (0..2).all(|i| zetas[i][e as usize] == observed[i][j]))
            .collect();
        match matches.as_slice() {
            [e] => values.push(*e),
            [] => {
                return Err(Error::NotHeckeType(format!(
                    "twist at the generator ({}) is not a root of unity of {}",
                    elem_to_strings(g).join(","),
                    l.label
                )))
            }
            _ => {
                return Err(Error::Malformed(format!(
                    "ambiguous root of unity at the generator ({})",
                    elem_to_strings(g).join(",")
                )))
            }
        }
    }
    let finite = FiniteCharacter::new(group.r_divisors().to_vec(), w, values)?;
    Ok(FinitePart { finite, group, method: "realization", places: places.iter().map(|q| q.p).collect() })
}

/// ε from `f_r / Π σ(π_r)^{m_σ}` at every indexed prime, solved on `R_m`
/// together with the unit conditions.
fn via_data(
    sys: &CompatibleSystem,
    infinity: &InfinityType,
    group: Arc<RayClassGroup>,
) -> std::result::Result<FinitePart, Rejection> {
    let k = sys.k();
    let l = sys.l();
    let w = l.units.torsion_order;
    let divs = group.r_divisors().to_vec();
    let s = divs.len();
    let mut rows: Mat = Vec::new();
    let mut rhs = Vec::new();
    for (i, &d) in divs.iter().enumerate() {
        let mut row = vec![0i128; s];
        row[i] = d as i128;
        rows.push(row);
        rhs.push(0);
    }
    for (u, img) in group.units().iter().zip(group.unit_images_r()) {
        let psi = sys.emb.apply(&infinity.eval(k, u)?);
        let t = l.zeta_log(&psi).ok_or_else(|| {
            Rejection::Fatal(Error::NotHeckeType(format!("infinity type {:?} is not trivial on the unit {u}", infinity.0)))
        })?;
        rows.push(img.iter().map(|&c| c as i128).collect());
        rhs.push(((w - t) % w) as i128);
    }
    for e in sys.frobenius.values() {
        let pi = &e.prime.generator;
        if !group.is_coprime(pi) {
            continue;
        }
        let root = sys.root(&e.prime).ok_or_else(|| Error::Malformed("one-dimensional data expected".into()))?;
        let z = l.div(&root, &sys.emb.apply(&infinity.eval(k, pi)?))?;
        let ez = l.zeta_log(&z).ok_or_else(|| {
            Rejection::Fatal(Error::NotHeckeType(format!(
                "at r = ({}) above {}: f_r / Π σ(r)^m is not a root of unity",
                elem_to_strings(pi).join(","),
                e.prime.p
            )))
        })?;
        rows.push(group.resolve_r(pi)?.iter().map(|&c| c as i128).collect());
        rhs.push(ez as i128);
    }
    let x = match intmat::solve_mod(&rows, s, &rhs, w as i128) {
        Some(x) => x,
        None => {
            return Err(Rejection::DoesNotFactor(format!(
                "no character of R_m with m = {} fits the data",
                group.modulus().finite
            )))
        }
    };
    if s > 0 && intmat::kernel_size_mod(&rows, s, w as i128) != 1 {
        return Err(Rejection::Fatal(Error::InsufficientData(format!(
            "the indexed primes do not determine ε on R_m with m = {}",
            group.modulus().finite
        ))));
    }
    let finite = FiniteCharacter::new(divs, w, x.iter().map(|&v| v as u64).collect())?;
    Ok(FinitePart { finite, group, method: "frobenius-data", places: vec![] })
}

pub(crate) fn extract(
    sys: &CompatibleSystem,
    infinity: &InfinityType,
    conductor: &Modulus,
) -> std::result::Result<FinitePart, Rejection> {
    let group = Arc::new(RayClassGroup::new(sys.k(), conductor)?);
    if sys.realization.is_some() {
        Ok(via_realization(sys, infinity, group)?)
    } else {
        via_data(sys, infinity, group)
    }
}

/// ε on `R_conductor` for the infinity type `m_σ`.
pub fn extract_finite_part(sys: &CompatibleSystem, infinity: &InfinityType, conductor: &Modulus) -> Result<FinitePart> {
    extract(sys, infinity, conductor).map_err(|r| match r {
        Rejection::DoesNotFactor(s) => Error::NotHeckeType(s),
        Rejection::Fatal(e) => e,
    })
}

/// Order of the root of unity `ζ_w^e`.
pub fn zeta_order(w: u64, e: u64) -> u64 {
    w / w.gcd(&e)
}
