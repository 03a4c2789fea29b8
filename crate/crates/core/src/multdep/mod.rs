//! Multiplicative dependence in K*: exact relations through S-unit exponent
//! vectors, and the local probe by reduction modulo primes.

pub mod probe;
pub mod random;

use std::collections::BTreeSet;

use num::{BigInt, Integer, One, Signed, Zero};
use serde::Serialize;

use crate::algebra::primes::{factor_rational_prime, valuation};
use crate::algebra::units::decompose_unit;
use crate::algebra::{Elem, NumberField, PrimeIdeal};
use crate::arith::factor_bigint;
use crate::error::{Error, Result};
use crate::intmat::{self, Mat};

pub use probe::{local_probe, ProbeMode, ProbeOptions, ProbeReport, ProbeWitness};
pub use random::{random_element, random_instance, Instance, Planting};

/// Half-width of the box searched when minimizing `|m|` over the relation lattice.
pub const LEX_SEARCH_RADIUS: i128 = 3;

/// `x = ζ^torsion · Π ε_j^{fundamental_j} · Π gen(q_i)^{exponents_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SUnitFactorization {
    pub element: Elem,
    pub support: Vec<PrimeIdeal>,
    pub exponents: Vec<i64>,
    pub torsion: u64,
    pub fundamental: Vec<i64>,
}

impl SUnitFactorization {
    pub fn reassemble(&self, k: &NumberField) -> Result<Elem> {
        let mut x = k.zeta_pow(self.torsion as i64);
        for (e, eps) in self.fundamental.iter().zip(&k.units.fundamental_units) {
            x = k.mul(&x, &k.pow(eps, *e)?);
        }
        for (v, q) in self.exponents.iter().zip(&self.support) {
            x = k.mul(&x, &k.pow(&q.generator, *v)?);
        }
        Ok(x)
    }

    pub fn valuation_at(&self, q: &PrimeIdeal) -> i64 {
        self.support
            .iter()
            .position(|s| s.key() == q.key())
            .map_or(0, |i| self.exponents[i])
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.support.iter().map(|q| q.p).collect();
        ps.dedup();
        ps
    }
}

fn numerator(x: &Elem) -> Elem {
    Elem::new(x.num.clone(), BigInt::one())
}

/// Rational primes below the support of `x`.
fn support_characteristics(k: &NumberField, x: &Elem, hints: &[u64]) -> Result<Vec<u64>> {
    let n = k.norm(&numerator(x));
    let mut ps: BTreeSet<u64> = factor_bigint(n.numer(), hints)?.into_iter().map(|(p, _)| p).collect();
    if !x.den.is_one() {
        ps.extend(factor_bigint(&x.den, hints)?.into_iter().map(|(p, _)| p));
    }
    Ok(ps.into_iter().collect())
}

pub fn sunit_factor(k: &NumberField, x: &Elem) -> Result<SUnitFactorization> {
    sunit_factor_with_hints(k, x, &[])
}

/// As `sunit_factor`; rational primes in `hints` are tried first when factoring norms.
pub fn sunit_factor_with_hints(k: &NumberField, x: &Elem, hints: &[u64]) -> Result<SUnitFactorization> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let mut support = Vec::new();
    let mut exponents = Vec::new();
    let mut rest = x.clone();
    for p in support_characteristics(k, x, hints)? {
        for q in factor_rational_prime(k, p)?.iter() {
            let v = valuation(k, x, q)?;
            if v != 0 {
                rest = k.mul(&rest, &k.pow(&q.generator, -v)?);
                support.push(q.clone());
                exponents.push(v);
            }
        }
    }
    let (torsion, fundamental) = decompose_unit(k, &rest)
        .ok_or_else(|| Error::Factorization(format!("{x} leaves a non-unit cofactor {rest}")))?;
    let f = SUnitFactorization { element: x.clone(), support, exponents, torsion, fundamental };
    if f.reassemble(k)? != *x {
        return Err(Error::Factorization(format!("reassembly of {x} is inexact")));
    }
    Ok(f)
}

/// `c^t = ζ · Π a_i^{m_i}` with `t` minimal, `|m|` lexicographically minimal
/// among the searched representatives, and ζ forced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultRelation {
    pub t: u64,
    pub m: Vec<i64>,
    pub zeta_exp: u64,
    pub zeta: Elem,
    /// Least `t > 0` with `c^t ∈ ⟨a_i⟩` exactly, torsion included.
    pub t_exact: u64,
}

impl MultRelation {
    /// Whether a relation of the kind asked for by `mode` exists without ζ.
    pub fn holds(&self, mode: ProbeMode) -> bool {
        match mode {
            ProbeMode::Exact => self.t_exact == 1,
            ProbeMode::PrimeTo(l) => self.t_exact % l != 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationJson {
    pub t: u64,
    pub m: Vec<i64>,
    pub zeta_coords: Vec<String>,
    pub t_exact: u64,
}

impl RelationJson {
    pub fn from_relation(r: &MultRelation) -> RelationJson {
        RelationJson {
            t: r.t,
            m: r.m.clone(),
            zeta_coords: crate::codec::elem_to_strings(&r.zeta),
            t_exact: r.t_exact,
        }
    }
}

/// Exponent vectors over a common support followed by fundamental-unit exponents.
struct Vectors {
    free: Vec<Vec<i128>>,
    torsion: Vec<i128>,
}

fn exponent_vectors(k: &NumberField, fs: &[SUnitFactorization]) -> Vectors {
    let mut keys: Vec<PrimeIdeal> = fs.iter().flat_map(|f| f.support.iter().cloned()).collect();
    keys.sort_by_key(|q| q.key());
    keys.dedup_by_key(|q| q.key());
    let free = fs
        .iter()
        .map(|f| {
            keys.iter()
                .map(|q| f.valuation_at(q) as i128)
                .chain(f.fundamental.iter().map(|&e| e as i128))
                .collect()
        })
        .collect();
    let _ = k;
    Vectors { free, torsion: fs.iter().map(|f| f.torsion as i128).collect() }
}

fn gcd_of_first(basis: &[Vec<i128>]) -> i128 {
    basis.iter().fold(0i128, |g, v| g.gcd(&v[0]))
}

fn lex_key(m: &[i128]) -> (Vec<i128>, Vec<i128>) {
    (m.iter().map(|x| x.abs()).collect(), m.iter().map(|x| -x).collect())
}

/// Lexicographically smallest `|m|` over `m0 + span(kernel)` within a box.
fn lex_min(m0: &[i128], kernel: &[Vec<i128>]) -> Vec<i128> {
    let mut best = m0.to_vec();
    let dims = kernel.len();
    if dims == 0 {
        return best;
    }
    let radius = if dims <= 3 { LEX_SEARCH_RADIUS } else { 1 };
    let side = (2 * radius + 1) as usize;
    let total = side.checked_pow(dims as u32).unwrap_or(usize::MAX).min(1 << 20);
    for idx in 0..total {
        let mut rem = idx;
        let mut cand = m0.to_vec();
        for b in kernel {
            let y = (rem % side) as i128 - radius;
            rem /= side;
            for (c, bi) in cand.iter_mut().zip(b) {
                *c += y * bi;
            }
        }
        if lex_key(&cand) < lex_key(&best) {
            best = cand;
        }
    }
    best
}

fn column_matrix(rows: usize, cols: &[Vec<i128>]) -> Mat {
    let mut m: Mat = (0..rows).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    if m.is_empty() {
        m.push(vec![0; cols.len()]);
    }
    m
}

/// The multiplicative relation between `c` and the `a_i`, if any.
///
/// With `ell`, only relations with `ℓ ∤ t` are accepted.
pub fn mult_relation(k: &NumberField, c: &Elem, a: &[Elem], ell: Option<u64>) -> Result<Option<MultRelation>> {
    if c.is_zero() || a.iter().any(|x| x.is_zero()) {
        return Err(Error::ZeroElement);
    }
    let mut fa = Vec::with_capacity(a.len());
    let mut hints: Vec<u64> = Vec::new();
    for x in a {
        let f = sunit_factor_with_hints(k, x, &hints)?;
        hints.extend(f.primes());
        fa.push(f);
    }
    hints.sort_unstable();
    hints.dedup();
    let fc = sunit_factor_with_hints(k, c, &hints)?;
    let mut all = vec![fc];
    all.extend(fa);
    let vecs = exponent_vectors(k, &all);
    let rows = vecs.free[0].len();
    let n = a.len();
    let w = k.units.torsion_order as i128;

    // columns: t, m_1..m_n for t·v(c) − Σ m_i v(a_i) = 0
    let mut cols = vec![vecs.free[0].clone()];
    cols.extend(vecs.free[1..].iter().map(|v| v.iter().map(|x| -x).collect::<Vec<_>>()));
    let hom = column_matrix(rows, &cols);
    let t0 = gcd_of_first(&intmat::kernel(&hom, n + 1)).abs();
    if t0 == 0 {
        return Ok(None);
    }
    if let Some(l) = ell {
        if t0 % l as i128 == 0 {
            return Ok(None);
        }
    }
    let mut fixed = hom.clone();
    let mut pin = vec![0i128; n + 1];
    pin[0] = 1;
    fixed.push(pin);
    let mut rhs = vec![0i128; fixed.len()];
    rhs[fixed.len() - 1] = t0;
    let (x, _) = intmat::solve(&fixed, n + 1, &rhs)
        .ok_or_else(|| Error::Malformed("relation lattice has no point at the minimal t".into()))?;
    let a_only = column_matrix(rows, &vecs.free[1..]);
    let ker_a = if n == 0 { vec![] } else { intmat::kernel(&a_only, n) };
    let m = lex_min(&x[1..], &ker_a);

    let tors = t0 * vecs.torsion[0] - m.iter().zip(&vecs.torsion[1..]).map(|(mi, ki)| mi * ki).sum::<i128>();
    let zeta_exp = tors.rem_euclid(w) as u64;
    let zeta = k.zeta_pow(zeta_exp as i64);

    // torsion included: one more row and a column absorbing multiples of w
    let mut full: Mat = hom.iter().map(|r| r.iter().copied().chain([0]).collect()).collect();
    let mut trow = vec![vecs.torsion[0]];
    trow.extend(vecs.torsion[1..].iter().map(|k| -k));
    trow.push(-w);
    full.push(trow);
    let t_exact = gcd_of_first(&intmat::kernel(&full, n + 2)).abs();

    let m: Vec<i64> = m.iter().map(|&v| v as i64).collect();
    let rel = MultRelation { t: t0 as u64, m, zeta_exp, zeta, t_exact: t_exact as u64 };
    check_relation(k, c, a, &rel)?;
    Ok(Some(rel))
}

/// Verifies `c^t = ζ · Π a_i^{m_i}` by exact multiplication.
pub fn check_relation(k: &NumberField, c: &Elem, a: &[Elem], rel: &MultRelation) -> Result<()> {
    let lhs = k.pow(c, rel.t as i64)?;
    let mut rhs = rel.zeta.clone();
    for (x, &e) in a.iter().zip(&rel.m) {
        rhs = k.mul(&rhs, &k.pow(x, e)?);
    }
    if lhs != rhs {
        return Err(Error::Malformed(format!("relation check failed for c = {c}")));
    }
    Ok(())
}

/// Height of an element: the largest absolute numerator coordinate.
pub fn height(x: &Elem) -> BigInt {
    x.num.iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;

    #[test]
    fn eight_is_two_cubed() {
        let q = catalog::field("rationals").unwrap();
        let f = sunit_factor(&q, &q.from_int(8)).unwrap();
        assert_eq!(f.exponents, vec![3]);
        assert_eq!(f.support[0].p, 2);
        assert_eq!(f.torsion, 0);
        let r = mult_relation(&q, &q.from_int(8), &[q.from_int(2)], None).unwrap().unwrap();
        assert_eq!((r.t, r.m.clone(), r.zeta_exp), (1, vec![3], 0));
    }

    #[test]
    fn gaussian_associates() {
        let g = catalog::field("gaussian").unwrap();
        let x = g.elem(&[-1, 2]);
        let f = sunit_factor(&g, &x).unwrap();
        assert_eq!(f.support.len(), 1);
        assert_eq!(f.support[0].p, 5);
        assert_eq!(f.exponents, vec![1]);
        assert_eq!(g.mul(&g.zeta_pow(f.torsion as i64), &f.support[0].generator), x);

        let i = sunit_factor(&g, &g.elem(&[0, 1])).unwrap();
        assert!(i.support.is_empty());
        assert_eq!(g.zeta_pow(i.torsion as i64), g.elem(&[0, 1]));

        let r = mult_relation(&g, &x, &[g.elem(&[2, 1]), g.elem(&[2, -1])], None).unwrap().unwrap();
        assert_eq!((r.t, r.m.clone()), (1, vec![1, 0]));
        assert_eq!(r.zeta, g.elem(&[0, 1]));
        assert_eq!(r.t_exact, 4);
        assert!(!r.holds(ProbeMode::Exact) && r.holds(ProbeMode::PrimeTo(3)));
    }

    #[test]
    fn distinct_supports_have_no_relation() {
        let q = catalog::field("rationals").unwrap();
        assert!(mult_relation(&q, &q.from_int(3), &[q.from_int(2)], None).unwrap().is_none());
    }

    #[test]
    fn units_and_forbidden_primes() {
        let k = catalog::field("qsqrt2").unwrap();
        let eps = k.units.fundamental_units[0].clone();
        let c = k.pow(&eps, 6).unwrap();
        let r = mult_relation(&k, &c, &[k.pow(&eps, 4).unwrap()], None).unwrap().unwrap();
        assert_eq!((r.t, r.m.clone()), (2, vec![3]));
        assert!(mult_relation(&k, &c, &[k.pow(&eps, 4).unwrap()], Some(2)).unwrap().is_none());
        let r = mult_relation(&k, &k.from_int(-1), &[], None).unwrap().unwrap();
        assert_eq!((r.t, r.zeta_exp, r.t_exact), (1, 1, 2));
    }

    #[test]
    fn dependent_bases_get_small_exponents() {
        let q = catalog::field("rationals").unwrap();
        let a = [q.from_int(2), q.from_int(4), q.from_int(3)];
        let r = mult_relation(&q, &q.from_int(12), &a, None).unwrap().unwrap();
        assert_eq!(r.m, vec![0, 1, 1]);
    }
}
