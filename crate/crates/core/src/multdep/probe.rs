//! Reduction of a relation problem modulo primes of K.
//!
//! In the cyclic group `(O/q)*` of order M, `c̄^t ∈ ⟨ā_i⟩` holds for the
//! multiples of `t_q = Π_s s^{max(0, e_s(c) − max_i e_s(a_i))}`, where `s^{e_s(x)}`
//! is the order of the s-primary part of x. No discrete logarithms are needed.

use std::collections::BTreeMap;

use num::{BigInt, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::primes::{prime_by_key, reduce_mod, residue_factors};
use crate::algebra::{Elem, NumberField};
use crate::arith::{bigint_mod_u64, inv_mod, primes_up_to};
use crate::error::{Error, Result};
use crate::finite_field::{factor_u128, FfElem, FiniteField};
use crate::fp_poly::Poly;

/// Places handled per parallel batch.
const BATCH: usize = 256;
/// Witnesses listed with their generators; the rest are only counted.
pub const LISTED_WITNESSES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeMode {
    /// A witness is a prime where `c̄ ∉ ⟨ā_i⟩`.
    Exact,
    /// A witness is a prime where ℓ divides `t_q`.
    PrimeTo(u64),
}

#[derive(Debug, Clone, Copy)]
pub struct ProbeOptions {
    pub prime_bound: u64,
    pub split_only: bool,
    pub mode: ProbeMode,
    pub stop_at_first: bool,
}

impl ProbeOptions {
    pub fn new(prime_bound: u64, mode: ProbeMode) -> ProbeOptions {
        ProbeOptions { prime_bound, split_only: false, mode, stop_at_first: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeWitness {
    pub prime: Vec<String>,
    pub residue_char: u64,
    pub t_q: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub mode: ProbeMode,
    pub places_tested: usize,
    /// Residue characteristics dividing a denominator, or whose residue field was too large.
    pub skipped: Vec<u64>,
    pub witness_count: usize,
    pub witnesses: Vec<ProbeWitness>,
    /// Multiset of `t_q` over the tested places.
    pub t_values: BTreeMap<u128, usize>,
}

impl ProbeReport {
    pub fn first_witness(&self) -> Option<&ProbeWitness> {
        self.witnesses.first()
    }
}

struct PlanPlace {
    p: u64,
    residue_poly: Poly,
    /// Root of the residue polynomial when it is linear.
    root: Option<u64>,
    order: u128,
    factors: Vec<(u128, u32)>,
}

/// Places of K up to a bound with their residue data, reusable across problems.
pub struct ProbePlan {
    pub prime_bound: u64,
    pub split_only: bool,
    places: Vec<PlanPlace>,
}

impl ProbePlan {
    pub fn new(k: &NumberField, prime_bound: u64, split_only: bool) -> ProbePlan {
        let mut places = Vec::new();
        for p in primes_up_to(prime_bound) {
            let fs = residue_factors(k, p);
            if split_only && !(fs.len() == k.degree && fs.iter().all(|(g, e)| g.len() == 2 && *e == 1)) {
                continue;
            }
            for (g, _) in fs {
                let f = g.len() - 1;
                let order = (p as u128).checked_pow(f as u32).map(|n| n - 1);
                let Some(order) = order.filter(|n| n >> 64 == 0) else {
                    continue;
                };
                let factors = factor_u128(order);
                let root = (f == 1).then(|| (p - g[0] % p) % p);
                places.push(PlanPlace { p, residue_poly: g, root, order, factors });
            }
        }
        ProbePlan { prime_bound, split_only, places }
    }

    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }
}

fn is_witness(mode: ProbeMode, t_q: u128) -> bool {
    match mode {
        ProbeMode::Exact => t_q != 1,
        ProbeMode::PrimeTo(l) => t_q % l as u128 == 0,
    }
}

/// `e_s(x)` for each prime `s | M`, given `x ↦ x^e`.
fn sylow_exponents<T: PartialEq>(
    m: u128,
    factors: &[(u128, u32)],
    x: &T,
    one: &T,
    pow: impl Fn(&T, u128) -> T,
) -> Vec<u32> {
    factors
        .iter()
        .map(|&(s, v)| {
            let mut y = pow(x, m / s.pow(v));
            let mut k = 0;
            while y != *one {
                y = pow(&y, s);
                k += 1;
            }
            k
        })
        .collect()
}

fn minimal_t(factors: &[(u128, u32)], ec: &[u32], ea: &[Vec<u32>]) -> u128 {
    let mut t = 1u128;
    for (j, &(s, _)) in factors.iter().enumerate() {
        let h = ea.iter().map(|e| e[j]).max().unwrap_or(0);
        t *= s.pow(ec[j].saturating_sub(h));
    }
    t
}

/// An element with coordinates cached as machine integers when they fit.
struct Prepared<'a> {
    elem: &'a Elem,
    small: Option<(Vec<i128>, i128)>,
}

impl<'a> Prepared<'a> {
    fn new(elem: &'a Elem) -> Prepared<'a> {
        let small = elem
            .num
            .iter()
            .map(|c| c.to_i128())
            .collect::<Option<Vec<_>>>()
            .zip(elem.den.to_i128());
        Prepared { elem, small }
    }

    fn den_divisible(&self, p: u64) -> bool {
        match &self.small {
            Some((_, d)) => d % p as i128 == 0,
            None => (&self.elem.den % BigInt::from(p)).is_zero(),
        }
    }

    /// Image at the degree-one place `θ ↦ r`; `None` when it vanishes.
    fn at_root(&self, p: u64, r: u64) -> Option<u64> {
        let md = |c: i128| c.rem_euclid(p as i128) as u64;
        let (mut acc, den) = (0u64, match &self.small {
            Some((_, d)) => md(*d),
            None => bigint_mod_u64(&self.elem.den, p),
        });
        let n = self.elem.num.len();
        for i in (0..n).rev() {
            let c = match &self.small {
                Some((v, _)) => md(v[i]),
                None => bigint_mod_u64(&self.elem.num[i], p),
            };
            acc = ((acc as u128 * r as u128 + c as u128) % p as u128) as u64;
        }
        let v = (acc as u128 * inv_mod(den, p)? as u128 % p as u128) as u64;
        (v != 0).then_some(v)
    }
}

fn pow_u64(mut b: u64, mut e: u128, p: u64) -> u64 {
    let mut acc = 1u64;
    if p < 1 << 32 {
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
    } else {
        while e > 0 {
            if e & 1 == 1 {
                acc = (acc as u128 * b as u128 % p as u128) as u64;
            }
            b = (b as u128 * b as u128 % p as u128) as u64;
            e >>= 1;
        }
    }
    acc
}

enum Outcome {
    Skipped,
    Support,
    Tested(u128),
}

fn t_at(pl: &PlanPlace, c: &Prepared, a: &[Prepared]) -> Outcome {
    if std::iter::once(c).chain(a).any(|x| x.den_divisible(pl.p)) {
        return Outcome::Skipped;
    }
    if let Some(r) = pl.root {
        let Some(cb) = c.at_root(pl.p, r) else { return Outcome::Support };
        let Some(ab) = a.iter().map(|x| x.at_root(pl.p, r)).collect::<Option<Vec<u64>>>() else {
            return Outcome::Support;
        };
        let p = pl.p;
        let ex = |x: &u64| sylow_exponents(pl.order, &pl.factors, x, &1, |y, e| pow_u64(*y, e, p));
        let ec = ex(&cb);
        let ea: Vec<Vec<u32>> = ab.iter().map(ex).collect();
        return Outcome::Tested(minimal_t(&pl.factors, &ec, &ea));
    }
    let field = FiniteField::new(pl.p, pl.residue_poly.clone());
    let red = |x: &Prepared| -> Option<FfElem> {
        let v = reduce_mod(pl.p, &pl.residue_poly, x.elem).ok()?;
        (!field.is_zero(&v)).then_some(v)
    };
    let Some(cb) = red(c) else { return Outcome::Support };
    let Some(ab) = a.iter().map(red).collect::<Option<Vec<FfElem>>>() else {
        return Outcome::Support;
    };
    let one = field.one();
    let ex = |x: &FfElem| sylow_exponents(pl.order, &pl.factors, x, &one, |y, e| field.pow(y, e));
    let ec = ex(&cb);
    let ea: Vec<Vec<u32>> = ab.iter().map(ex).collect();
    Outcome::Tested(minimal_t(&pl.factors, &ec, &ea))
}

/// Computes `t_q` at every place of residue characteristic up to the bound
/// that is coprime to the supports of `c` and the `a_i`.
pub fn local_probe(k: &NumberField, c: &Elem, a: &[Elem], opts: &ProbeOptions) -> Result<ProbeReport> {
    let plan = ProbePlan::new(k, opts.prime_bound, opts.split_only);
    local_probe_with_plan(k, &plan, c, a, opts.mode, opts.stop_at_first)
}

pub fn local_probe_with_plan(
    k: &NumberField,
    plan: &ProbePlan,
    c: &Elem,
    a: &[Elem],
    mode: ProbeMode,
    stop_at_first: bool,
) -> Result<ProbeReport> {
    if c.is_zero() || a.iter().any(|x| x.is_zero()) {
        return Err(Error::ZeroElement);
    }
    let cp = Prepared::new(c);
    let ap: Vec<Prepared> = a.iter().map(Prepared::new).collect();
    let mut report = ProbeReport {
        mode,
        places_tested: 0,
        skipped: vec![],
        witness_count: 0,
        witnesses: vec![],
        t_values: BTreeMap::new(),
    };
    for chunk in plan.places.chunks(BATCH) {
        let results: Vec<Outcome> = chunk.par_iter().map(|pl| t_at(pl, &cp, &ap)).collect();
        for (pl, o) in chunk.iter().zip(results) {
            match o {
                Outcome::Skipped => {
                    if report.skipped.last() != Some(&pl.p) {
                        report.skipped.push(pl.p);
                    }
                }
                Outcome::Support => {}
                Outcome::Tested(t) => {
                    report.places_tested += 1;
                    *report.t_values.entry(t).or_insert(0) += 1;
                    if is_witness(mode, t) {
                        report.witness_count += 1;
                        if report.witnesses.len() < LISTED_WITNESSES {
                            let q = prime_by_key(k, pl.p, &pl.residue_poly)?;
                            report.witnesses.push(ProbeWitness {
                                prime: crate::codec::elem_to_strings(&q.generator),
                                residue_char: pl.p,
                                t_q: t,
                            });
                        }
                    }
                }
            }
        }
        if stop_at_first && report.witness_count > 0 {
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;

    #[test]
    fn three_against_two() {
        let q = catalog::field("rationals").unwrap();
        let rep = local_probe(&q, &q.from_int(3), &[q.from_int(2)], &ProbeOptions::new(50, ProbeMode::Exact)).unwrap();
        let w = rep.first_witness().unwrap();
        assert_eq!(w.residue_char, 7);
        // 3^2 = 9 = 2 mod 7
        assert_eq!(w.t_q, 2);
    }

    #[test]
    fn sixteen_against_two() {
        let q = catalog::field("rationals").unwrap();
        let rep = local_probe(&q, &q.from_int(16), &[q.from_int(2)], &ProbeOptions::new(2000, ProbeMode::Exact)).unwrap();
        assert!(rep.witnesses.is_empty());
        assert_eq!(rep.t_values.keys().collect::<Vec<_>>(), vec![&1]);
        assert_eq!(rep.places_tested, primes_up_to(2000).len() - 1);
    }

    #[test]
    fn brute_force_agreement() {
        let g = catalog::field("gaussian").unwrap();
        let c = g.elem(&[3, 2]);
        let a = [g.elem(&[1, 4]), g.elem(&[5, -2])];
        let (cp, ap) = (Prepared::new(&c), a.iter().map(Prepared::new).collect::<Vec<_>>());
        let plan = ProbePlan::new(&g, 60, false);
        assert!(plan.places.iter().any(|pl| pl.root.is_none()));
        for pl in &plan.places {
            let Outcome::Tested(t) = t_at(pl, &cp, &ap) else { continue };
            let field = FiniteField::new(pl.p, pl.residue_poly.clone());
            let red = |x: &Elem| reduce_mod(pl.p, &pl.residue_poly, x).unwrap();
            let gens: Vec<FfElem> = a.iter().map(red).collect();
            let mut sub = vec![field.one()];
            let mut i = 0;
            while i < sub.len() {
                for g in &gens {
                    let y = field.mul(&sub[i], g);
                    if !sub.contains(&y) {
                        sub.push(y);
                    }
                }
                i += 1;
            }
            let cb = red(&c);
            let naive = (1u128..).find(|&t| sub.contains(&field.pow(&cb, t))).unwrap();
            assert_eq!(t, naive, "above {}", pl.p);
        }
    }

    #[test]
    fn c_equal_to_a_generator() {
        let k = catalog::field("cyclo5").unwrap();
        let x = k.elem(&[2, -1, 3, 0]);
        let rep = local_probe(&k, &x, &[x.clone(), k.elem(&[1, 1, 0, 0])], &ProbeOptions::new(300, ProbeMode::Exact)).unwrap();
        assert!(rep.witnesses.is_empty() && rep.places_tested > 100);
    }
}
