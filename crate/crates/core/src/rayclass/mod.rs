//! Strict ray class groups of class-number-one fields, and characters of
//! finite abelian groups.
//!
//! Elements coprime to the modulus are first mapped to raw exponent vectors
//! on `(O/m)* x signs`, one block per prime power and one coordinate per
//! real place. The group `R_m` is that product; `Cl_m` is its quotient by the
//! image of the global units.

pub mod lift;

use std::collections::HashMap;

use num::{BigInt, Integer, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::primes::{canonical_associate, factor_rational_prime, valuation};
use crate::algebra::{Elem, Field, NumberField, PrimeIdeal};
use crate::arith::factor_bigint;
use crate::error::{Error, Result};
use crate::finite_field::DlogContext;
use crate::fp_poly;
use crate::intmat::{Mat, Quotient};
use lift::{abs_norm, elem_of, fix_signs, pow_reduced, reduce_coords, sign_patterns, split_one};

/// Default cap on `|O/q^e|` for enumerated components.
pub const ENUM_BOUND: u64 = 10_000_000;

/// A modulus: a principal integral ideal plus a subset of the real places.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus {
    /// Canonical generator of the finite part.
    pub finite: Elem,
    /// One flag per entry of `NumberField::real_places`.
    pub real: Vec<bool>,
}

impl Modulus {
    pub fn new(k: &NumberField, finite: &Elem, real: Vec<bool>) -> Result<Modulus> {
        if finite.is_zero() {
            return Err(Error::ZeroElement);
        }
        if !finite.is_integral() {
            return Err(Error::NotIntegral(format!("modulus {finite}")));
        }
        if real.len() != k.real_places().len() {
            return Err(Error::Malformed(format!(
                "expected {} real-place flags, got {}",
                k.real_places().len(),
                real.len()
            )));
        }
        let n = abs_norm(k, finite);
        let finite = if n.is_one() { k.one() } else { canonical_associate(k, finite) };
        Ok(Modulus { finite, real })
    }

    pub fn unit(k: &NumberField) -> Modulus {
        Modulus {
            finite: k.one(),
            real: vec![false; k.real_places().len()],
        }
    }

    pub fn finite_only(k: &NumberField, finite: &Elem) -> Result<Modulus> {
        Modulus::new(k, finite, vec![false; k.real_places().len()])
    }

    pub fn with_all_real(k: &NumberField, finite: &Elem) -> Result<Modulus> {
        Modulus::new(k, finite, vec![true; k.real_places().len()])
    }

    pub fn norm(&self, k: &NumberField) -> BigInt {
        abs_norm(k, &self.finite)
    }

    pub fn is_unit(&self, k: &NumberField) -> bool {
        self.norm(k).is_one() && self.real.iter().all(|&b| !b)
    }

    /// The prime-power factorization of the finite part, sorted by prime.
    pub fn factorization(&self, k: &NumberField) -> Result<Vec<(PrimeIdeal, u32)>> {
        let n = self.norm(k);
        let mut out = Vec::new();
        for (p, _) in factor_bigint(&n, &[])? {
            for q in factor_rational_prime(k, p)?.iter() {
                let v = valuation(k, &self.finite, q)?;
                if v > 0 {
                    out.push((q.clone(), v as u32));
                }
            }
        }
        Ok(out)
    }

    pub fn from_factorization(k: &NumberField, factors: &[(PrimeIdeal, u32)], real: Vec<bool>) -> Result<Modulus> {
        let mut g = k.one();
        for (q, e) in factors {
            g = k.mul(&g, &k.pow_u(&q.generator, *e as u64));
        }
        Modulus::new(k, &g, real)
    }

    pub fn support(&self, k: &NumberField) -> Result<Vec<PrimeIdeal>> {
        Ok(self.factorization(k)?.into_iter().map(|(q, _)| q).collect())
    }

    /// Multiplies in each prime above `p` that does not already divide the modulus.
    pub fn with_radical(&self, k: &NumberField, p: u64) -> Result<Modulus> {
        let mut g = self.finite.clone();
        for q in factor_rational_prime(k, p)?.iter() {
            if valuation(k, &self.finite, q)? == 0 {
                g = k.mul(&g, &q.generator);
            }
        }
        Modulus::new(k, &g, self.real.clone())
    }

    /// Least common multiple, taking the larger exponent at each prime.
    pub fn lcm(&self, k: &NumberField, other: &Modulus) -> Result<Modulus> {
        let mut f = self.factorization(k)?;
        for (q, e) in other.factorization(k)? {
            match f.iter_mut().find(|(p, _)| *p == q) {
                Some((_, e0)) => *e0 = (*e0).max(e),
                None => f.push((q, e)),
            }
        }
        f.sort();
        let real = self.real.iter().zip(&other.real).map(|(&a, &b)| a || b).collect();
        Modulus::from_factorization(k, &f, real)
    }

    pub fn divides(&self, k: &NumberField, other: &Modulus) -> bool {
        let q = match k.div(&other.finite, &self.finite) {
            Ok(q) => q,
            Err(_) => return false,
        };
        q.is_integral() && self.real.iter().zip(&other.real).all(|(&a, &b)| !a || b)
    }
}

/// An HNF basis of a full-rank ideal lattice; row `i` has its last nonzero
/// entry in column `i`.
#[derive(Debug, Clone)]
struct Lattice {
    rows: Vec<Vec<i128>>,
    diag: Vec<i128>,
    strides: Vec<u64>,
    size: u64,
}

impl Lattice {
    fn of_power(k: &NumberField, pi: &Elem, e: u32) -> Result<Lattice> {
        let d = k.d();
        let base = k.pow_u(pi, e as u64);
        let mut gens = Vec::with_capacity(d);
        let mut cur = base;
        for _ in 0..d {
            gens.push(
                cur.num
                    .iter()
                    .map(|c| c.to_i128().ok_or_else(|| Error::GroupTooLarge("modulus coordinates overflow".into())))
                    .collect::<Result<Vec<i128>>>()?,
            );
            cur = k.mul(&cur, &k.theta());
        }
        let mut rows = vec![vec![0i128; d]; d];
        for c in (0..d).rev() {
            loop {
                let nz: Vec<usize> = (0..gens.len()).filter(|&i| gens[i][c] != 0).collect();
                if nz.len() <= 1 {
                    break;
                }
                let piv = *nz.iter().min_by_key(|&&i| gens[i][c].abs()).unwrap();
                for &i in &nz {
                    if i != piv {
                        let q = gens[i][c] / gens[piv][c];
                        for j in 0..d {
                            gens[i][j] -= q * gens[piv][j];
                        }
                    }
                }
            }
            let i = (0..gens.len())
                .find(|&i| gens[i][c] != 0)
                .ok_or_else(|| Error::Malformed("ideal lattice is not full rank".into()))?;
            let mut row = gens.remove(i);
            if row[c] < 0 {
                row.iter_mut().for_each(|x| *x = -*x);
            }
            rows[c] = row;
        }
        let diag: Vec<i128> = (0..d).map(|i| rows[i][i]).collect();
        let mut strides = Vec::with_capacity(d);
        let mut acc: u128 = 1;
        for &h in &diag {
            strides.push(acc as u64);
            acc *= h as u128;
            if acc > u64::MAX as u128 {
                return Err(Error::GroupTooLarge(format!("|O/q^{e}| overflows")));
            }
        }
        Ok(Lattice { rows, diag, strides, size: acc as u64 })
    }

    fn reduce(&self, v: &[i128]) -> Vec<i128> {
        let mut x = v.to_vec();
        for i in (0..x.len()).rev() {
            let t = x[i].div_euclid(self.diag[i]);
            if t != 0 {
                for j in 0..=i {
                    x[j] -= t * self.rows[i][j];
                }
            }
        }
        x
    }

    fn reduce_big(&self, v: &[BigInt]) -> Vec<i128> {
        let mut x = v.to_vec();
        for i in (0..x.len()).rev() {
            let t = x[i].div_floor(&BigInt::from(self.diag[i]));
            if !t.is_zero() {
                for j in 0..=i {
                    x[j] -= &t * self.rows[i][j];
                }
            }
        }
        x.iter().map(|c| c.to_i128().unwrap()).collect()
    }

    fn key(&self, reduced: &[i128]) -> u64 {
        reduced.iter().zip(&self.strides).map(|(&x, &s)| x as u64 * s).sum()
    }

    fn decode(&self, mut key: u64) -> Vec<i128> {
        self.diag
            .iter()
            .map(|&h| {
                let x = key % h as u64;
                key /= h as u64;
                x as i128
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
struct Table {
    q: PrimeIdeal,
    e: u32,
    lattice: Lattice,
    order: u64,
    index: HashMap<u64, Vec<i64>>,
    gens: Vec<Vec<i128>>,
    rel: Mat,
}

impl Table {
    fn build(k: &NumberField, q: &PrimeIdeal, e: u32, bound: u64) -> Result<Table> {
        let lattice = Lattice::of_power(k, &q.generator, e)?;
        if lattice.size > bound {
            return Err(Error::GroupTooLarge(format!("|O/q^{e}| = {} above {}", lattice.size, bound)));
        }
        let is_unit = |v: &[i128]| {
            let poly: Vec<u64> = v.iter().map(|c| c.rem_euclid(q.p as i128) as u64).collect();
            !fp_poly::trim(fp_poly::rem(&poly, &q.residue_poly, q.p)).is_empty()
        };
        let nq = q.norm() as u64;
        let order = nq.pow(e - 1) * (nq - 1);
        let mut one = vec![0i128; k.d()];
        one[0] = 1;
        let one = lattice.reduce(&one);
        let mul = |a: &[i128], b: &[i128]| lattice.reduce(&k.mul_int(a, b));

        let mut index: HashMap<u64, Vec<i64>> = HashMap::new();
        index.insert(lattice.key(&one), vec![]);
        let mut gens: Vec<Vec<i128>> = Vec::new();
        let mut rel_raw: Vec<(i64, Vec<i64>)> = Vec::new();
        for idx in 0..lattice.size {
            if index.len() as u64 == order {
                break;
            }
            let x = lattice.decode(idx);
            if !is_unit(&x) || index.contains_key(&idx) {
                continue;
            }
            let mut m = 1i64;
            let mut cur = x.clone();
            while !index.contains_key(&lattice.key(&cur)) {
                cur = mul(&cur, &x);
                m += 1;
            }
            let h0 = index[&lattice.key(&cur)].clone();
            let old: Vec<(Vec<i128>, Vec<i64>)> = index.iter().map(|(&key, v)| (lattice.decode(key), v.clone())).collect();
            let mut pow = x.clone();
            for j in 1..m {
                for (h, v) in &old {
                    let y = mul(h, &pow);
                    let mut w = v.clone();
                    w.resize(gens.len(), 0);
                    w.push(j);
                    index.insert(lattice.key(&y), w);
                }
                pow = mul(&pow, &x);
            }
            gens.push(x);
            rel_raw.push((m, h0));
        }
        let n = gens.len();
        for v in index.values_mut() {
            v.resize(n, 0);
        }
        let rel = rel_raw
            .into_iter()
            .enumerate()
            .map(|(i, (m, h0))| {
                let mut row = vec![0i128; n];
                for (j, &c) in h0.iter().enumerate() {
                    row[j] = -(c as i128);
                }
                row[i] += m as i128;
                row
            })
            .collect();
        debug_assert_eq!(index.len() as u64, order);
        Ok(Table { q: q.clone(), e, lattice, order, index, gens, rel })
    }

    fn coords(&self, a: &Elem) -> Vec<i64> {
        let x = self.lattice.reduce_big(&a.num);
        self.index[&self.lattice.key(&x)].clone()
    }
}

#[derive(Debug, Clone)]
enum Component {
    Cyclic { q: PrimeIdeal, ctx: DlogContext, order: u64 },
    Table(Box<Table>),
    Sign { slot: usize, place: usize },
}

impl Component {
    fn width(&self) -> usize {
        match self {
            Component::Table(t) => t.gens.len(),
            _ => 1,
        }
    }
}

/// `((O/m)* x signs) / units` with resolution of elements and prime ideals.
#[derive(Debug, Clone)]
pub struct RayClassGroup {
    k: Field,
    modulus: Modulus,
    factors: Vec<(PrimeIdeal, u32)>,
    comps: Vec<Component>,
    offsets: Vec<usize>,
    periods: Vec<u64>,
    n: usize,
    relations: Mat,
    lifts: Vec<Elem>,
    r: Quotient,
    cl: Quotient,
    units: Vec<Elem>,
    unit_raw: Vec<Vec<i128>>,
    norm: BigInt,
    patterns: Vec<Elem>,
}

impl RayClassGroup {
    pub fn new(k: &Field, m: &Modulus) -> Result<RayClassGroup> {
        RayClassGroup::with_bound(k, m, ENUM_BOUND)
    }

    pub fn with_bound(k: &Field, m: &Modulus, bound: u64) -> Result<RayClassGroup> {
        let factors = m.factorization(k)?;
        let norm = m.norm(k);
        let patterns = sign_patterns(k);
        let mut comps = Vec::new();
        let mut lifts = Vec::new();
        let one = k.one();
        for (q, e) in &factors {
            let qe = k.pow_u(&q.generator, *e as u64);
            let rest = k.div(&m.finite, &qe)?;
            let (_, idem) = split_one(k, &qe, &rest)?;
            let lift_local = |a: &Elem| -> Result<Elem> {
                let x = k.add(&one, &k.mul(&k.sub(a, &one), &idem));
                fix_signs(k, &reduce_coords(&x, &norm), &norm, 0, &patterns)
            };
            if *e == 1 {
                let field = q.residue_field();
                let g = field.primitive_element();
                let ctx = DlogContext::new(&field, &g)?;
                let order = ctx.order() as u64;
                let mut c: Vec<BigInt> = g.iter().map(|&x| BigInt::from(x)).collect();
                c.resize(k.d(), BigInt::zero());
                lifts.push(lift_local(&Elem::new(c, BigInt::one()))?);
                comps.push(Component::Cyclic { q: q.clone(), ctx, order });
            } else {
                let t = Table::build(k, q, *e, bound)?;
                for g in &t.gens {
                    lifts.push(lift_local(&elem_of(g))?);
                }
                comps.push(Component::Table(Box::new(t)));
            }
        }
        for (slot, (&flag, &place)) in m.real.iter().zip(&k.real_places()).enumerate() {
            if flag {
                lifts.push(fix_signs(k, &one, &norm, 1 << slot, &patterns)?);
                comps.push(Component::Sign { slot, place });
            }
        }
        let mut offsets = Vec::new();
        let mut n = 0;
        for c in &comps {
            offsets.push(n);
            n += c.width();
        }
        let mut relations: Mat = Vec::new();
        let mut periods = vec![0u64; n];
        for (c, &off) in comps.iter().zip(&offsets) {
            match c {
                Component::Cyclic { order, .. } => {
                    let mut row = vec![0i128; n];
                    row[off] = *order as i128;
                    relations.push(row);
                    periods[off] = *order;
                }
                Component::Table(t) => {
                    for r in &t.rel {
                        let mut row = vec![0i128; n];
                        row[off..off + r.len()].copy_from_slice(r);
                        relations.push(row);
                    }
                    for j in 0..t.gens.len() {
                        periods[off + j] = t.order;
                    }
                }
                Component::Sign { .. } => {
                    let mut row = vec![0i128; n];
                    row[off] = 2;
                    relations.push(row);
                    periods[off] = 2;
                }
            }
        }
        let exponent = periods.iter().fold(1u64, |acc, &p| acc.lcm(&p));
        let r = Quotient::with_exponent(n, &relations, exponent)?;
        let mut units = vec![k.units.torsion_generator.clone()];
        units.extend(k.units.fundamental_units.iter().cloned());
        let mut g = RayClassGroup {
            k: k.clone(),
            modulus: m.clone(),
            factors,
            comps,
            offsets,
            periods,
            n,
            relations: relations.clone(),
            lifts,
            r: r.clone(),
            cl: r,
            units: units.clone(),
            unit_raw: vec![],
            norm,
            patterns,
        };
        let unit_raw: Vec<Vec<i128>> = units.iter().map(|u| g.raw(u)).collect::<Result<_>>()?;
        let mut all = relations;
        all.extend(unit_raw.iter().cloned());
        g.cl = Quotient::with_exponent(n, &all, exponent)?;
        g.unit_raw = unit_raw;
        Ok(g)
    }

    pub fn field(&self) -> &Field {
        &self.k
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn factors(&self) -> &[(PrimeIdeal, u32)] {
        &self.factors
    }

    /// Elementary divisors of `Cl_m`.
    pub fn divisors(&self) -> &[u64] {
        &self.cl.divisors
    }

    pub fn order(&self) -> u128 {
        self.cl.order()
    }

    /// Elementary divisors of `R_m = (O/m)* x signs`.
    pub fn r_divisors(&self) -> &[u64] {
        &self.r.divisors
    }

    pub fn r_order(&self) -> u128 {
        self.r.order()
    }

    /// `|(O/m)*|`.
    pub fn residue_order(&self) -> u128 {
        let signs = self.modulus.real.iter().filter(|&&b| b).count();
        self.r.order() >> signs
    }

    /// Order of the image of the global units in `R_m`.
    pub fn unit_image_order(&self) -> u128 {
        self.r.order() / self.cl.order()
    }

    pub fn raw_len(&self) -> usize {
        self.n
    }

    pub fn is_coprime(&self, a: &Elem) -> bool {
        !a.is_zero()
            && self.factors.iter().all(|(q, _)| match q.reduce(a) {
                Ok(r) => r.iter().any(|&c| c != 0),
                Err(_) => false,
            })
    }

    /// Raw exponent vector of an element coprime to the modulus.
    pub fn raw(&self, a: &Elem) -> Result<Vec<i128>> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        if !a.is_integral() {
            let num = Elem::new(a.num.clone(), BigInt::one());
            let den = self.k.from_bigint(&a.den);
            let x = self.raw(&num)?;
            let y = self.raw(&den)?;
            return Ok(x.iter().zip(&y).map(|(u, v)| u - v).collect());
        }
        let mut out = vec![0i128; self.n];
        for (c, &off) in self.comps.iter().zip(&self.offsets) {
            match c {
                Component::Cyclic { q, ctx, .. } => {
                    let r = q.reduce(a)?;
                    let l = ctx.log(&r).ok_or_else(|| Error::NotCoprime(format!("{a} at {}", q.generator)))?;
                    out[off] = l as i128;
                }
                Component::Table(t) => {
                    let r = t.q.reduce(a)?;
                    if r.iter().all(|&c| c == 0) {
                        return Err(Error::NotCoprime(format!("{a} at {}", t.q.generator)));
                    }
                    for (j, v) in t.coords(a).into_iter().enumerate() {
                        out[off + j] = v as i128;
                    }
                }
                Component::Sign { place, .. } => {
                    if self.k.sign_at(a, *place)? < 0 {
                        out[off] = 1;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Coordinates in `R_m` of a raw vector.
    pub fn r_of_raw(&self, x: &[i128]) -> Vec<u64> {
        self.r.map(x)
    }

    pub fn cl_of_raw(&self, x: &[i128]) -> Vec<u64> {
        self.cl.map(x)
    }

    /// Class of an element in `Cl_m`.
    pub fn resolve(&self, a: &Elem) -> Result<Vec<u64>> {
        Ok(self.cl.map(&self.raw(a)?))
    }

    /// Class of an element in `R_m`.
    pub fn resolve_r(&self, a: &Elem) -> Result<Vec<u64>> {
        Ok(self.r.map(&self.raw(a)?))
    }

    /// Class of a prime ideal in `Cl_m`, through its canonical generator.
    pub fn resolve_prime(&self, q: &PrimeIdeal) -> Result<Vec<u64>> {
        self.resolve(&q.generator)
    }

    /// An element with the given raw vector: coprime to the modulus, with
    /// coordinates reduced and signs forced.
    pub fn element_of_raw(&self, x: &[i128]) -> Result<Elem> {
        let mut acc = self.k.one();
        let mut mask = 0usize;
        for (j, (&e, lift)) in x.iter().zip(&self.lifts).enumerate() {
            let e = e.rem_euclid(self.periods[j] as i128) as u64;
            if e == 0 {
                continue;
            }
            acc = reduce_coords(&self.k.mul(&acc, &pow_reduced(&self.k, lift, e, &self.norm)), &self.norm);
            if let Some(slot) = self.sign_slot(j) {
                if e % 2 == 1 {
                    mask |= 1 << slot;
                }
            }
        }
        fix_signs(&self.k, &acc, &self.norm, mask, &self.patterns)
    }

    fn sign_slot(&self, j: usize) -> Option<usize> {
        self.comps.iter().zip(&self.offsets).find_map(|(c, &off)| match c {
            Component::Sign { slot, .. } if off == j => Some(*slot),
            _ => None,
        })
    }

    /// Representatives of the `Cl_m` generators.
    pub fn generators(&self) -> Result<Vec<Elem>> {
        (0..self.cl.divisors.len())
            .map(|i| self.element_of_raw(&self.cl.generator(i)))
            .collect()
    }

    /// Representatives of the `R_m` generators.
    pub fn r_generators(&self) -> Result<Vec<Elem>> {
        (0..self.r.divisors.len())
            .map(|i| self.element_of_raw(&self.r.generator(i)))
            .collect()
    }

    /// A raw preimage of the `j`-th generator of `R_m`.
    pub fn r_generator_raw(&self, j: usize) -> Vec<i128> {
        self.r.generator(j)
    }

    /// The torsion generator followed by the fundamental units.
    pub fn units(&self) -> &[Elem] {
        &self.units
    }

    /// `R_m` coordinates of `units()`.
    pub fn unit_images_r(&self) -> Vec<Vec<u64>> {
        self.unit_raw.iter().map(|x| self.r.map(x)).collect()
    }

    /// Global lifts of the raw coordinate generators.
    pub fn raw_generators(&self) -> &[Elem] {
        &self.lifts
    }

    /// Raw relation rows of `R_m`.
    pub fn raw_relations(&self) -> &Mat {
        &self.relations
    }

    fn unit_vec(&self, j: usize) -> Vec<i128> {
        let mut v = vec![0i128; self.n];
        v[j] = 1;
        v
    }

    /// Raw vectors generating the kernel of `R_m -> R_m'` where `m'` lowers the
    /// exponent of the `i`-th prime factor to `e`.
    pub fn local_kernel(&self, i: usize, e: u32) -> Result<Vec<Vec<i128>>> {
        let off = self.offsets[i];
        match &self.comps[i] {
            Component::Cyclic { .. } => Ok(if e == 0 { vec![self.unit_vec(off)] } else { vec![] }),
            Component::Table(t) => {
                if e == 0 {
                    return Ok((0..t.gens.len()).map(|j| self.unit_vec(off + j)).collect());
                }
                if e >= t.e {
                    return Ok(vec![]);
                }
                let small = Lattice::of_power(&self.k, &t.q.generator, e)?;
                let mut out = Vec::new();
                for (&key, exps) in &t.index {
                    let mut v = t.lattice.decode(key);
                    v[0] -= 1;
                    if small.reduce(&v).iter().all(|&c| c == 0) {
                        let mut row = vec![0i128; self.n];
                        for (j, &c) in exps.iter().enumerate() {
                            row[off + j] = c as i128;
                        }
                        out.push(row);
                    }
                }
                Ok(out)
            }
            Component::Sign { .. } => Err(Error::IndexOutOfRange(format!("component {i} is a sign"))),
        }
    }

    /// The smallest modulus dividing this one through which a character of
    /// `R_m` factors, given a triviality test on raw vectors. Primes above
    /// `skip_p` are dropped from the result.
    pub fn conductor<F: Fn(&[i128]) -> bool>(&self, trivial: F, skip_p: Option<u64>) -> Result<Modulus> {
        let mut factors = Vec::new();
        let mut real = vec![false; self.modulus.real.len()];
        for (i, c) in self.comps.iter().enumerate() {
            match c {
                Component::Sign { slot, .. } => {
                    real[*slot] = !trivial(&self.unit_vec(self.offsets[i]));
                }
                _ => {
                    let (q, e) = &self.factors[i];
                    if skip_p == Some(q.p) {
                        continue;
                    }
                    let mut keep = *e;
                    for e2 in 0..*e {
                        if self.local_kernel(i, e2)?.iter().all(|v| trivial(v)) {
                            keep = e2;
                            break;
                        }
                    }
                    if keep > 0 {
                        factors.push((q.clone(), keep));
                    }
                }
            }
        }
        Modulus::from_factorization(&self.k, &factors, real)
    }

    /// An element coprime to this modulus that agrees with `g` modulo the
    /// divisor `f` and has the same signs as `g`.
    pub fn lift_from_divisor(&self, f: &Modulus, g: &Elem) -> Result<Elem> {
        let k = &self.k;
        let mut parts = Vec::new();
        for (q, _) in &self.factors {
            let v = valuation(k, &f.finite, q)?;
            if v > 0 {
                parts.push((k.pow_u(&q.generator, v as u64), g.clone()));
            } else {
                parts.push((q.generator.clone(), k.one()));
            }
        }
        let x = lift::crt(k, &parts)?;
        let modn = parts.iter().fold(BigInt::one(), |acc, (a, _)| acc * abs_norm(k, a));
        let mask = k
            .real_places()
            .iter()
            .enumerate()
            .fold(0usize, |m, (i, &s)| if k.sign_at(g, s).unwrap_or(1) < 0 { m | 1 << i } else { m });
        let x = if x.is_zero() { k.from_bigint(&modn) } else { x };
        fix_signs(k, &x, &modn, mask, &self.patterns)
    }

    /// Evaluates a character of `R_m` as an exponent of `ζ_w`.
    pub fn char_exp(&self, chi: &FiniteCharacter, a: &Elem) -> Result<u64> {
        Ok(chi.exp_at(&self.resolve_r(a)?))
    }
}

/// A character of a finite abelian group in Smith form with values in
/// `μ_w`, stored as exponents of a fixed primitive `w`-th root of unity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteCharacter {
    pub divisors: Vec<u64>,
    pub w: u64,
    pub values: Vec<u64>,
}

impl FiniteCharacter {
    pub fn new(divisors: Vec<u64>, w: u64, values: Vec<u64>) -> Result<FiniteCharacter> {
        if divisors.len() != values.len() {
            return Err(Error::Malformed("one value per generator expected".into()));
        }
        let values: Vec<u64> = values.into_iter().map(|v| v % w).collect();
        for (&d, &v) in divisors.iter().zip(&values) {
            if (d as u128 * v as u128) % w as u128 != 0 {
                return Err(Error::Malformed(format!(
                    "value ζ_{w}^{v} has order not dividing the generator order {d}"
                )));
            }
        }
        Ok(FiniteCharacter { divisors, w, values })
    }

    pub fn trivial(divisors: Vec<u64>, w: u64) -> FiniteCharacter {
        let values = vec![0; divisors.len()];
        FiniteCharacter { divisors, w, values }
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// `Σ v_i c_i mod w`.
    pub fn exp_at(&self, coords: &[u64]) -> u64 {
        let w = self.w as u128;
        (coords
            .iter()
            .zip(&self.values)
            .map(|(&c, &v)| c as u128 * v as u128 % w)
            .sum::<u128>()
            % w) as u64
    }

    /// Order of the character.
    pub fn order(&self) -> u64 {
        self.values
            .iter()
            .fold(1u64, |acc, &v| acc.lcm(&(self.w / self.w.gcd(&v))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;

    #[test]
    fn cm_modulus_is_trivial() {
        let k = catalog::field("gaussian").unwrap();
        let m = Modulus::finite_only(&k, &k.elem(&[-2, 2])).unwrap();
        assert_eq!(m.finite, k.elem(&[2, -2]));
        let g = RayClassGroup::new(&k, &m).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.r_order(), 4);
        assert_eq!(g.unit_image_order(), 4);
    }

    #[test]
    fn rationals_mod_five_infinity() {
        let k = catalog::field("rationals").unwrap();
        let m = Modulus::with_all_real(&k, &k.from_int(5)).unwrap();
        let g = RayClassGroup::new(&k, &m).unwrap();
        assert_eq!(g.divisors(), &[4]);
        assert_eq!(g.r_order(), 8);
        assert_eq!(g.resolve(&k.from_int(7)).unwrap(), g.resolve(&k.from_int(2)).unwrap());
        assert_eq!(g.resolve(&k.from_int(11)).unwrap(), vec![0]);
        assert_eq!(g.resolve(&k.from_int(-11)).unwrap(), vec![0]);
        assert_ne!(g.resolve_r(&k.from_int(-11)).unwrap(), g.resolve_r(&k.from_int(11)).unwrap());
    }

    #[test]
    fn trivial_modulus() {
        let k = catalog::field("gaussian").unwrap();
        let g = RayClassGroup::new(&k, &Modulus::unit(&k)).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.resolve(&k.elem(&[3, 2])).unwrap(), Vec::<u64>::new());
    }

    #[test]
    fn generators_resolve_to_basis() {
        let k = catalog::field("qsqrt2").unwrap();
        let m = Modulus::with_all_real(&k, &k.from_int(9)).unwrap();
        let g = RayClassGroup::new(&k, &m).unwrap();
        for (i, x) in g.r_generators().unwrap().iter().enumerate() {
            let v = g.resolve_r(x).unwrap();
            let want: Vec<u64> = (0..v.len()).map(|j| (i == j) as u64).collect();
            assert_eq!(v, want);
        }
        assert_eq!(g.residue_order() * 4, g.order() * g.unit_image_order());
    }

    #[test]
    fn conductor_of_trivial_is_unit() {
        let k = catalog::field("gaussian").unwrap();
        let m = Modulus::finite_only(&k, &k.from_int(10)).unwrap();
        let g = RayClassGroup::new(&k, &m).unwrap();
        let f = g.conductor(|_| true, None).unwrap();
        assert!(f.is_unit(&k));
    }
}
