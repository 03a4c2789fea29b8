//! Bounded conductor, purity, integrality and finite-image checks.

use num::complex::Complex64;
use num::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::CompatibleSystem;
use crate::algebra::numeric::complex_roots;
use crate::algebra::{Elem, PrimeIdeal};
use crate::codec::ModulusJson;
use crate::error::{Error, Result};
use crate::finite_field::DlogContext;
use crate::hecke::ModPCharacter;
use crate::intmat::{Mat, Quotient};
use crate::rayclass::Modulus;

pub const PURITY_TOLERANCE: f64 = 1e-6;
pub const TWIST_WINDOW: i64 = 6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConductorVerdict {
    pub stable: bool,
    pub conductor: Option<ModulusJson>,
    pub places_sampled: usize,
    pub distinct: Vec<ModulusJson>,
}

impl ConductorVerdict {
    pub fn modulus(&self, sys: &CompatibleSystem) -> Result<Option<Modulus>> {
        self.conductor.as_ref().map(|m| m.to_modulus(sys.k())).transpose()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PurityVerdict {
    pub pass: bool,
    /// Common weight, snapped to a half-integer.
    pub t: f64,
    pub max_deviation: f64,
    pub roots_checked: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegralityVerdict {
    pub pass: bool,
    pub integral: bool,
    /// Smallest `|m|` making every twisted `f_r` integral.
    pub twist: Option<i64>,
    pub first_non_integral: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArtinKind {
    ArtinLike,
    UnboundedTrend,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArtinVerdict {
    pub verdict: ArtinKind,
    pub order: Option<u128>,
    /// `(residue characteristic, image order)` per sampled place.
    pub orders: Vec<(u64, u128)>,
}

fn direct_sum_conductor(sys: &CompatibleSystem, rhos: &[ModPCharacter]) -> Result<Modulus> {
    let k = sys.k();
    let mut c = rhos[0].conductor()?;
    for r in &rhos[1..] {
        c = c.lcm(k, &r.conductor()?)?;
    }
    Ok(c)
}

/// Prime-to-p conductor of each `ρ_℘` for ℘ ∉ T up to `p_bound`.
pub fn check_bounded_conductor(sys: &CompatibleSystem, p_bound: u64) -> Result<ConductorVerdict> {
    let real = sys.realization()?;
    let places = sys.good_places(p_bound)?;
    let found: Vec<Modulus> = places
        .par_iter()
        .map(|q| direct_sum_conductor(sys, &real.at(q)?))
        .collect::<Result<_>>()?;
    let mut distinct: Vec<Modulus> = Vec::new();
    for m in &found {
        if !distinct.contains(m) {
            distinct.push(m.clone());
        }
    }
    let stable = distinct.len() == 1;
    Ok(ConductorVerdict {
        stable,
        conductor: stable.then(|| ModulusJson::from_modulus(&distinct[0])),
        places_sampled: found.len(),
        distinct: distinct.iter().map(ModulusJson::from_modulus).collect(),
    })
}

fn complex_coeffs(sys: &CompatibleSystem, poly: &[Elem], s: usize) -> Vec<Complex64> {
    poly.iter().map(|c| sys.l().complex_embedding(c, s)).collect()
}

/// Fits `|root| = Nm(r)^t` over every complex embedding of L, at the first
/// `sample` indexed primes.
pub fn check_purity(sys: &CompatibleSystem, sample: usize) -> Result<PurityVerdict> {
    let l = sys.l();
    let mut ts = Vec::new();
    for e in sys.frobenius.values().take(sample) {
        let log_n = (e.prime.norm() as f64).ln();
        for s in 0..l.d() {
            let c = complex_coeffs(sys, &e.poly, s);
            let roots = if c.len() == 2 { vec![-c[0]] } else { complex_roots(&c) };
            for z in roots {
                if z.norm() == 0.0 {
                    return Err(Error::Malformed(format!("f_r has a zero root at {}", e.prime.generator)));
                }
                ts.push(z.norm().ln() / log_n);
            }
        }
    }
    if ts.is_empty() {
        return Err(Error::InsufficientData("no Frobenius roots available".into()));
    }
    let snap = (2.0 * ts[0]).round() / 2.0;
    let max_deviation = ts.iter().fold(0.0f64, |m, t| m.max((t - snap).abs()));
    Ok(PurityVerdict { pass: max_deviation <= PURITY_TOLERANCE, t: snap, max_deviation, roots_checked: ts.len() })
}

fn twisted_integral(sys: &CompatibleSystem, m: i64) -> Option<PrimeIdeal> {
    let l = sys.l();
    for e in sys.frobenius.values() {
        let n = BigInt::from(e.prime.norm());
        let deg = e.poly.len() - 1;
        for (k, c) in e.poly.iter().enumerate() {
            let shift = m * (deg - k) as i64;
            let scale = n.pow(shift.unsigned_abs() as u32);
            let twisted = if shift >= 0 {
                l.mul(c, &l.from_bigint(&scale))
            } else {
                Elem::new(c.num.clone(), &c.den * &scale)
            };
            if !twisted.is_integral() {
                return Some(e.prime.clone());
            }
        }
    }
    None
}

/// Integrality of every `f_r`, or the smallest norm twist restoring it.
pub fn check_integrality(sys: &CompatibleSystem) -> IntegralityVerdict {
    let first = twisted_integral(sys, 0);
    let integral = first.is_none();
    let mut twist = None;
    'search: for a in 0..=TWIST_WINDOW {
        for m in [a, -a] {
            if twisted_integral(sys, m).is_none() {
                twist = Some(m);
                break 'search;
            }
        }
    }
    IntegralityVerdict {
        pass: twist.is_some(),
        integral,
        twist,
        first_non_integral: first.map(|q| crate::codec::elem_to_strings(&q.generator)),
    }
}

/// Order of the subgroup of `(F_℘*)^n` generated by the diagonal values on
/// the class group generators.
pub fn image_order(rhos: &[ModPCharacter]) -> Result<u128> {
    if rhos.len() == 1 {
        return Ok(rhos[0].order());
    }
    let field = rhos[0].field();
    if rhos.iter().any(|r| r.group().divisors() != rhos[0].group().divisors()) {
        return Err(Error::Malformed("diagonal entries live on different groups".into()));
    }
    let m = field.order() - 1;
    let ctx = DlogContext::new(field, &field.primitive_element())?;
    let n = rhos.len();
    let mut rows: Mat = Vec::new();
    for j in 0..rhos[0].table().len() {
        let row = rhos
            .iter()
            .map(|r| {
                ctx.log(&r.table()[j])
                    .map(|x| x as i128)
                    .ok_or_else(|| Error::Malformed("value outside the residue field group".into()))
            })
            .collect::<Result<Vec<i128>>>()?;
        rows.push(row);
    }
    for i in 0..n {
        let mut row = vec![0i128; n];
        row[i] = m as i128;
        rows.push(row);
    }
    let index = Quotient::new(n, &rows)?.order();
    Ok(m.pow(n as u32) / index)
}

/// Image orders of `ρ_℘` over ℘ ∉ T up to `p_bound`.
pub fn detect_artin(sys: &CompatibleSystem, p_bound: u64) -> Result<ArtinVerdict> {
    let real = sys.realization()?;
    let places = sys.good_places(p_bound)?;
    let orders: Vec<(u64, u128)> = places
        .par_iter()
        .map(|q| Ok((q.p, image_order(&real.at(q)?)?)))
        .collect::<Result<_>>()?;
    if orders.is_empty() {
        return Err(Error::InsufficientData("no places to sample".into()));
    }
    let first = orders[0].1;
    let stable = orders.iter().all(|&(_, o)| o == first);
    Ok(ArtinVerdict {
        verdict: if stable { ArtinKind::ArtinLike } else { ArtinKind::UnboundedTrend },
        order: stable.then_some(first),
        orders,
    })
}
