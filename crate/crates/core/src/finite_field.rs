//! Finite fields F_{p^f} as F_p[x]/(g) and discrete logarithms.

use std::collections::HashMap;

use crate::arith::{factor_u64, mul_mod};
use crate::error::{Error, Result};
use crate::fp_poly::{self, Poly};

/// Largest field order accepted for discrete logarithms.
pub const DLOG_BOUND: u128 = 1 << 40;

/// An element of F_{p^f}: `f` coefficients, ascending.
pub type FfElem = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    pub p: u64,
    pub f: usize,
    /// Monic irreducible of degree `f`.
    pub modulus: Poly,
}

impl FiniteField {
    pub fn new(p: u64, modulus: Poly) -> FiniteField {
        let modulus = fp_poly::monic(&modulus, p);
        let f = modulus.len() - 1;
        FiniteField { p, f, modulus }
    }

    pub fn prime(p: u64) -> FiniteField {
        FiniteField::new(p, vec![0, 1])
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.f as u32)
    }

    fn pad(&self, mut a: Poly) -> FfElem {
        a.resize(self.f, 0);
        a
    }

    pub fn zero(&self) -> FfElem {
        vec![0; self.f]
    }

    pub fn one(&self) -> FfElem {
        self.from_u64(1)
    }

    pub fn from_u64(&self, c: u64) -> FfElem {
        let mut v = self.zero();
        v[0] = c % self.p;
        v
    }

    pub fn from_poly(&self, a: &[u64]) -> FfElem {
        self.pad(fp_poly::rem(a, &self.modulus, self.p))
    }

    pub fn is_zero(&self, a: &FfElem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FfElem, b: &FfElem) -> FfElem {
        a.iter().zip(b).map(|(&x, &y)| ((x as u128 + y as u128) % self.p as u128) as u64).collect()
    }

    pub fn sub(&self, a: &FfElem, b: &FfElem) -> FfElem {
        a.iter().zip(b).map(|(&x, &y)| ((x as u128 + (self.p - y) as u128) % self.p as u128) as u64).collect()
    }

    pub fn neg(&self, a: &FfElem) -> FfElem {
        a.iter().map(|&x| (self.p - x) % self.p).collect()
    }

    pub fn mul(&self, a: &FfElem, b: &FfElem) -> FfElem {
        if self.f == 1 {
            return vec![mul_mod(a[0], b[0], self.p)];
        }
        self.pad(fp_poly::mulmod(a, b, &self.modulus, self.p))
    }

    pub fn pow(&self, a: &FfElem, mut e: u128) -> FfElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FfElem) -> Option<FfElem> {
        if self.is_zero(a) {
            return None;
        }
        Some(self.pow(a, self.order() - 2))
    }

    /// Multiplicative order of a nonzero element.
    pub fn elem_order(&self, a: &FfElem) -> u128 {
        let n = self.order() - 1;
        let mut ord = n;
        for (q, _) in factor_u128(n) {
            while ord % q == 0 && self.pow(a, ord / q) == self.one() {
                ord /= q;
            }
        }
        ord
    }

    /// The smallest generator of the multiplicative group in the
    /// ordering by integer encoding.
    pub fn primitive_element(&self) -> FfElem {
        let n = self.order() - 1;
        let fac = factor_u128(n);
        let mut k: u128 = 1;
        loop {
            let cand = self.decode(k);
            if !self.is_zero(&cand) && fac.iter().all(|&(q, _)| self.pow(&cand, n / q) != self.one()) {
                return cand;
            }
            k += 1;
        }
    }

    /// Base-p digits of `k` as coefficients.
    pub fn decode(&self, mut k: u128) -> FfElem {
        let mut v = Vec::with_capacity(self.f);
        for _ in 0..self.f {
            v.push((k % self.p as u128) as u64);
            k /= self.p as u128;
        }
        v
    }

    pub fn encode(&self, a: &FfElem) -> u128 {
        a.iter().rev().fold(0u128, |acc, &c| acc * self.p as u128 + c as u128)
    }
}

pub fn factor_u128(n: u128) -> Vec<(u128, u32)> {
    // Field orders here stay below 2^64.
    factor_u64(u64::try_from(n).expect("group order below 2^64"))
        .into_iter()
        .map(|(p, e)| (p as u128, e))
        .collect()
}

/// Precomputed data for repeated logarithms to one base.
#[derive(Debug, Clone)]
pub struct DlogContext {
    field: FiniteField,
    base: FfElem,
    order: u128,
    factors: Vec<(u128, u32)>,
    // per prime q of the order: baby steps of base^(order/q)
    tables: Vec<(u128, HashMap<u128, u128>, FfElem)>,
}

impl DlogContext {
    pub fn new(field: &FiniteField, base: &FfElem) -> Result<DlogContext> {
        if field.order() > DLOG_BOUND {
            return Err(Error::FieldTooLarge(field.order()));
        }
        if field.is_zero(base) {
            return Err(Error::ZeroElement);
        }
        let order = field.elem_order(base);
        let factors = factor_u128(order);
        let mut tables = Vec::new();
        for &(q, _) in &factors {
            let gamma = field.pow(base, order / q);
            let m = (q as f64).sqrt().ceil() as u128 + 1;
            let mut table = HashMap::with_capacity(m as usize);
            let mut cur = field.one();
            for j in 0..m {
                table.entry(field.encode(&cur)).or_insert(j);
                cur = field.mul(&cur, &gamma);
            }
            // giant step gamma^{-m}
            let giant = field.inv(&field.pow(&gamma, m)).unwrap();
            tables.push((m, table, giant));
        }
        Ok(DlogContext { field: field.clone(), base: base.clone(), order, factors, tables })
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn base(&self) -> &FfElem {
        &self.base
    }

    // log of h in the order-q subgroup generated by gamma
    fn prime_log(&self, idx: usize, h: &FfElem) -> Option<u128> {
        let (q, _) = self.factors[idx];
        let (m, table, giant) = &self.tables[idx];
        let mut cur = h.clone();
        for i in 0..=*m {
            if let Some(&j) = table.get(&self.field.encode(&cur)) {
                let k = i * m + j;
                if k < q {
                    return Some(k);
                }
            }
            cur = self.field.mul(&cur, giant);
        }
        None
    }

    /// Smallest `k >= 0` with `base^k = target`, or `None`.
    pub fn log(&self, target: &FfElem) -> Option<u128> {
        let fld = &self.field;
        if fld.is_zero(target) {
            return None;
        }
        if fld.pow(target, self.order) != fld.one() {
            return None;
        }
        let mut residues = Vec::new();
        for (idx, &(q, e)) in self.factors.iter().enumerate() {
            let qe = q.pow(e);
            let cofactor = self.order / qe;
            let g = fld.pow(&self.base, cofactor);
            let h = fld.pow(target, cofactor);
            // g has order q^e; digits of the log in base q
            let ginv = fld.inv(&g).unwrap();
            let mut x: u128 = 0;
            let mut qk: u128 = 1;
            for _ in 0..e {
                let hk = fld.mul(&h, &fld.pow(&ginv, x));
                let probe = fld.pow(&hk, qe / (qk * q));
                let d = if probe == fld.one() {
                    0
                } else {
                    self.prime_log(idx, &probe)?
                };
                x += d * qk;
                qk *= q;
            }
            residues.push((x, qe));
        }
        Some(crt(&residues))
    }
}

fn crt(residues: &[(u128, u128)]) -> u128 {
    let mut x: u128 = 0;
    let mut m: u128 = 1;
    for &(r, n) in residues {
        // solve x + m*t = r mod n
        let mi = crate::arith::ext_gcd((m % n) as i128, n as i128).1.rem_euclid(n as i128) as u128;
        let diff = (r + n - x % n) % n;
        let t = diff * mi % n;
        x += m * t;
        m *= n;
    }
    x % m
}

/// One-shot discrete logarithm.
pub fn ff_dlog(field: &FiniteField, base: &FfElem, target: &FfElem) -> Result<Option<u128>> {
    Ok(DlogContext::new(field, base)?.log(target))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_logs() {
        let f13 = FiniteField::prime(13);
        assert_eq!(ff_dlog(&f13, &vec![2], &vec![8]).unwrap(), Some(3));
        assert_eq!(ff_dlog(&f13, &vec![2], &vec![1]).unwrap(), Some(0));
        let f7 = FiniteField::prime(7);
        assert_eq!(ff_dlog(&f7, &vec![2], &vec![3]).unwrap(), None);
        assert_eq!(ff_dlog(&f7, &vec![2], &vec![4]).unwrap(), Some(2));
    }

    #[test]
    fn extension_field_logs() {
        // F_49 = F_7[x]/(x^2+1)
        let f = FiniteField::new(7, vec![1, 0, 1]);
        assert_eq!(f.order(), 49);
        let g = f.primitive_element();
        assert_eq!(f.elem_order(&g), 48);
        let ctx = DlogContext::new(&f, &g).unwrap();
        for k in 0..48u128 {
            let t = f.pow(&g, k);
            assert_eq!(ctx.log(&t), Some(k));
        }
    }

    #[test]
    fn large_prime_field() {
        let p = 1_000_003u64;
        let f = FiniteField::prime(p);
        let g = f.primitive_element();
        let ctx = DlogContext::new(&f, &g).unwrap();
        for k in [0u128, 1, 17, 99_999, 1_000_001] {
            assert_eq!(ctx.log(&f.pow(&g, k)), Some(k));
        }
    }

    #[test]
    fn too_large_rejected() {
        let f = FiniteField::new(2_000_003, vec![2, 0, 1]);
        assert!(matches!(DlogContext::new(&f, &f.one()), Err(Error::FieldTooLarge(_))));
    }
}
