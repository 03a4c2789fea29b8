//! Probe primes `r ≡ 1 mod* m` above split primes, and the exponents of the
//! Frobenius root at each of them.

use serde::Serialize;

use crate::algebra::primes::{factor_rational_prime, residue_factors, splits_completely};
use crate::algebra::{Elem, Embedding, Field, NumberField, PrimeIdeal};
use crate::arith::primes_up_to;
use crate::codec::elem_to_strings;
use crate::error::{Error, Result};
use crate::multdep::mult_relation;
use crate::rayclass::{Modulus, RayClassGroup};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbePrime {
    pub prime: PrimeIdeal,
    /// A generator of `prime`; `≡ 1 mod m` and positive at the real places of m
    /// when `congruent` holds.
    pub generator: Elem,
    pub congruent: bool,
}

impl ProbePrime {
    pub fn p(&self) -> u64 {
        self.prime.p
    }
}

/// `ζ_r` and the exponents `m_{r,σ}` with `f_root = ζ_r · Π_σ σ(r)^{m_{r,σ}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Exponents {
    pub zeta_exp: u64,
    pub m: Vec<i64>,
}

fn unit_box(rank: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-radius..=radius).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().map(|e| e.abs()).max().unwrap_or(0) == radius);
    out
}

/// Multiplies `pi` by a unit to make it trivial in `R_m`, when its ray class is trivial.
pub fn adjust_to_one(group: &RayClassGroup, pi: &Elem) -> Result<Option<Elem>> {
    if group.resolve(pi)?.iter().any(|&c| c != 0) {
        return Ok(None);
    }
    let k = group.field();
    let divs = group.r_divisors();
    let target = group.resolve_r(pi)?;
    let imgs = group.unit_images_r();
    let w = k.units.torsion_order;
    let rank = k.units.rank();
    let bound = divs.iter().copied().max().unwrap_or(1) as i64;
    for radius in 0..=bound {
        for b in unit_box(rank, radius) {
            for a in 0..w {
                let ok = divs.iter().enumerate().all(|(j, &d)| {
                    let mut s = target[j] as i128 + a as i128 * imgs[0][j] as i128;
                    for (i, &e) in b.iter().enumerate() {
                        s += e as i128 * imgs[i + 1][j] as i128;
                    }
                    s.rem_euclid(d as i128) == 0
                });
                if !ok {
                    continue;
                }
                let mut g = k.mul(&k.zeta_pow(a as i64), pi);
                for (e, eps) in b.iter().zip(&k.units.fundamental_units) {
                    g = k.mul(&g, &k.pow(eps, *e)?);
                }
                if group.resolve_r(&g)?.iter().any(|&c| c != 0) {
                    return Err(Error::Malformed(format!("unit adjustment of {pi} failed")));
                }
                return Ok(Some(g));
            }
        }
    }
    Err(Error::Malformed(format!("no unit moves {pi} to the trivial class")))
}

fn unramified_in(l: &NumberField, p: u64) -> bool {
    residue_factors(l, p).iter().all(|(_, e)| *e == 1)
}

/// Probe primes above distinct rational primes `p ≤ height_bound` that split
/// completely in K, are unramified in L and lie outside the support of m;
/// `accept` filters further. Primes in the trivial ray class come first; the
/// rest are filled with other admissible primes, whose root of unity then
/// absorbs ε.
pub fn choose_probe_primes_where(
    k: &Field,
    l: &NumberField,
    m: &Modulus,
    count: usize,
    height_bound: u64,
    accept: impl Fn(&PrimeIdeal) -> bool,
) -> Result<Vec<ProbePrime>> {
    let group = RayClassGroup::new(k, m)?;
    let bad: Vec<u64> = m.support(k)?.iter().map(|q| q.p).collect();
    let mut out = Vec::new();
    let mut spare = Vec::new();
    for p in primes_up_to(height_bound) {
        if out.len() >= count {
            break;
        }
        if bad.contains(&p) || !splits_completely(k, p) || !unramified_in(l, p) {
            continue;
        }
        let mut first = None;
        for q in factor_rational_prime(k, p)?.iter() {
            if !accept(q) {
                continue;
            }
            if let Some(g) = adjust_to_one(&group, &q.generator)? {
                out.push(ProbePrime { prime: q.clone(), generator: g, congruent: true });
                first = None;
                break;
            }
            first.get_or_insert_with(|| q.clone());
        }
        if let Some(q) = first {
            spare.push(ProbePrime { generator: q.generator.clone(), prime: q, congruent: false });
        }
    }
    let missing = count.saturating_sub(out.len());
    out.extend(spare.into_iter().take(missing));
    if out.len() < count {
        return Err(Error::InsufficientData(format!(
            "found {} of {count} probe primes below {height_bound}",
            out.len()
        )));
    }
    Ok(out)
}

pub fn choose_probe_primes(
    k: &Field,
    l: &NumberField,
    m: &Modulus,
    count: usize,
    height_bound: u64,
) -> Result<Vec<ProbePrime>> {
    choose_probe_primes_where(k, l, m, count, height_bound, |_| true)
}

/// Solves `f_root = ζ · Π_σ σ(r)^{m_σ}` in L with `ℓ ∤ t`, and requires `t = 1`.
pub fn infer_exponents(emb: &Embedding, f_root: &Elem, r: &Elem, ell: Option<u64>) -> Result<Exponents> {
    let k = &emb.source;
    let conj: Vec<Elem> = (0..k.d()).map(|s| emb.apply(&k.apply(s, r))).collect();
    let rel = mult_relation(&emb.target, f_root, &conj, ell)?.ok_or_else(|| {
        Error::NotHeckeType(format!(
            "at r = ({}): f_r has no root of the form ζ·Π σ(r)^m",
            elem_to_strings(r).join(",")
        ))
    })?;
    if rel.t != 1 {
        return Err(Error::NotHeckeType(format!(
            "at r = ({}): only the {}-th power of the root is a product of conjugates",
            elem_to_strings(r).join(","),
            rel.t
        )));
    }
    Ok(Exponents { zeta_exp: rel.zeta_exp, m: rel.m })
}

/// The common exponent vector, or the first pair of probes that disagree.
pub fn cross_check_independence(results: &[(ProbePrime, Exponents)]) -> Result<Vec<i64>> {
    let (r0, e0) = results
        .first()
        .ok_or_else(|| Error::InsufficientData("no probe primes".into()))?;
    for (r, e) in &results[1..] {
        if e.m != e0.m {
            return Err(Error::NotHeckeType(format!(
                "exponents {:?} at r = ({}) above {} differ from {:?} at r = ({}) above {}",
                e.m,
                elem_to_strings(&r.generator).join(","),
                r.p(),
                e0.m,
                elem_to_strings(&r0.generator).join(","),
                r0.p()
            )));
        }
    }
    Ok(e0.m.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;

    #[test]
    fn gaussian_probe_above_five() {
        let k = catalog::field("gaussian").unwrap();
        let m = Modulus::finite_only(&k, &k.elem(&[2, -2])).unwrap();
        let pr = choose_probe_primes(&k, &k, &m, 1, 100).unwrap();
        assert_eq!(pr[0].generator, k.elem(&[-1, 2]));
    }

    #[test]
    fn rational_probes_mod_five() {
        let q = catalog::field("rationals").unwrap();
        let m = Modulus::with_all_real(&q, &q.from_int(5)).unwrap();
        let pr = choose_probe_primes(&q, &q, &m, 2, 100).unwrap();
        let gens: Vec<Elem> = pr.iter().map(|r| r.generator.clone()).collect();
        assert_eq!(gens, vec![q.from_int(11), q.from_int(31)]);
        let unit = choose_probe_primes(&q, &q, &Modulus::unit(&q), 3, 100).unwrap();
        assert_eq!(unit.iter().map(|r| r.p()).collect::<Vec<_>>(), vec![2, 3, 5]);
    }

    #[test]
    fn exponent_examples() {
        let k = catalog::field("gaussian").unwrap();
        let emb = Embedding::identity(k.clone());
        let r = k.elem(&[-1, 2]);
        let e = infer_exponents(&emb, &r, &r, Some(3)).unwrap();
        assert_eq!(e, Exponents { zeta_exp: 0, m: vec![1, 0] });
        let e = infer_exponents(&emb, &k.one(), &r, Some(3)).unwrap();
        assert_eq!(e.m, vec![0, 0]);
        let e = infer_exponents(&emb, &k.from_int(5), &r, Some(3)).unwrap();
        assert_eq!(e.m, vec![1, 1]);
        assert!(matches!(infer_exponents(&emb, &k.from_int(3), &r, None), Err(Error::NotHeckeType(_))));
    }
}
