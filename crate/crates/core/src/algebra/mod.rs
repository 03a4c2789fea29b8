//! Exact arithmetic in monogenic Galois number fields.
//!
//! Elements are stored in power-basis coordinates with a common positive
//! denominator. All operations live on [`NumberField`], which owns the
//! multiplication table, the automorphisms and the unit data.

pub mod catalog;
pub mod embedding;
pub mod numeric;
pub mod primes;
pub mod units;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num::complex::Complex64;
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
pub use embedding::Embedding;
pub use primes::PrimeIdeal;
pub use units::{UnitData, UnitGroup};

pub type Field = Arc<NumberField>;

/// A field element `num / den` in power-basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    pub num: Vec<BigInt>,
    pub den: BigInt,
}

impl Elem {
    pub fn from_ints(coords: &[i64]) -> Elem {
        Elem {
            num: coords.iter().map(|&c| BigInt::from(c)).collect(),
            den: BigInt::one(),
        }
    }

    pub fn new(num: Vec<BigInt>, den: BigInt) -> Elem {
        let mut e = Elem { num, den };
        e.normalize();
        e
    }

    pub fn from_rationals(coords: &[BigRational]) -> Elem {
        let den = coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coords
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Elem::new(num, den)
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in self.num.iter_mut() {
                *c = -&*c;
            }
        }
        let g = self
            .num
            .iter()
            .fold(self.den.clone(), |acc, c| acc.gcd(c));
        if !g.is_one() && !g.is_zero() {
            for c in self.num.iter_mut() {
                *c = &*c / &g;
            }
            self.den = &self.den / &g;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn coord(&self, i: usize) -> BigRational {
        BigRational::new(self.num[i].clone(), self.den.clone())
    }

    pub fn coords(&self) -> Vec<BigRational> {
        (0..self.num.len()).map(|i| self.coord(i)).collect()
    }

    /// Integer coordinates, if integral and small.
    pub fn int_coords(&self) -> Option<Vec<i64>> {
        if !self.is_integral() {
            return None;
        }
        self.num.iter().map(|c| c.to_i64()).collect()
    }

    /// The rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coord(0))
        } else {
            None
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let r = BigRational::new(c.clone(), self.den.clone());
            let t = match i {
                0 => format!("{r}"),
                1 => format!("{r}*θ"),
                _ => format!("{r}*θ^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+").replace("+-", "-"))
        }
    }
}

/// Input description of a field: minimal polynomial, automorphism images
/// of the generator, and optional unit data.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    pub label: String,
    pub min_poly: Vec<i64>,
    pub automorphisms: Vec<Vec<i64>>,
    pub units: Option<UnitData>,
}

pub struct NumberField {
    pub label: String,
    /// Monic, ascending coefficients.
    pub min_poly: Vec<i64>,
    pub degree: usize,
    /// `aut_images[s]` is the image of the generator under automorphism `s`;
    /// index 0 is the identity.
    pub aut_images: Vec<Elem>,
    // aut_mats[s][i][j] = coordinate i of s(θ^j)
    aut_mats: Vec<Vec<Vec<BigInt>>>,
    compose: Vec<Vec<usize>>,
    // coordinates of θ^k for k < 2d - 1
    power_table: Vec<Vec<BigInt>>,
    power_table_small: Vec<Vec<i128>>,
    traces: Vec<BigInt>,
    pub signature: (usize, usize),
    pub discriminant: BigInt,
    /// Index of complex conjugation (the identity for totally real fields).
    pub conj: usize,
    /// `emb_theta[s]` is the base complex embedding applied to `s(θ)`.
    emb_theta: Vec<Complex64>,
    pub units: UnitGroup,
    prime_cache: Mutex<HashMap<u64, Arc<Vec<PrimeIdeal>>>>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberField")
            .field("label", &self.label)
            .field("min_poly", &self.min_poly)
            .finish()
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label && self.min_poly == other.min_poly
    }
}

fn poly_eval_f(coeffs: &[i64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c as f64)
}

/// Checks irreducibility over Q by testing every candidate factor assembled
/// from subsets of the complex roots.
pub fn is_irreducible_over_q(poly: &[i64]) -> bool {
    let d = poly.len() - 1;
    if d <= 1 {
        return true;
    }
    let rts = numeric::roots(poly);
    for mask in 1u32..(1 << d) {
        let k = mask.count_ones() as usize;
        if k > d / 2 {
            continue;
        }
        let mut fac = vec![Complex64::new(1.0, 0.0)];
        for (i, r) in rts.iter().enumerate() {
            if mask & (1 << i) != 0 {
                let mut next = vec![Complex64::new(0.0, 0.0); fac.len() + 1];
                for (j, c) in fac.iter().enumerate() {
                    next[j + 1] += c;
                    next[j] -= c * r;
                }
                fac = next;
            }
        }
        if fac.iter().all(|c| c.im.abs() < 1e-6 && (c.re - c.re.round()).abs() < 1e-6) {
            let g: Vec<i64> = fac.iter().map(|c| c.re.round() as i64).collect();
            if int_poly_divides(&g, poly) {
                return false;
            }
        }
    }
    true
}

fn int_poly_divides(g: &[i64], f: &[i64]) -> bool {
    // g monic
    let mut r: Vec<i128> = f.iter().map(|&c| c as i128).collect();
    let dg = g.len() - 1;
    while r.len() > dg {
        let c = *r.last().unwrap();
        let k = r.len() - 1 - dg;
        for (j, &gj) in g.iter().enumerate() {
            r[k + j] -= c * gj as i128;
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}

fn det_bareiss(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

impl NumberField {
    /// Builds and validates a field.
    pub fn create(spec: FieldSpec) -> Result<NumberField> {
        let poly = spec.min_poly.clone();
        if poly.len() < 2 || *poly.last().unwrap() != 1 {
            return Err(Error::InvalidField("minimal polynomial must be monic of degree >= 1".into()));
        }
        let d = poly.len() - 1;
        if d > 8 {
            return Err(Error::InvalidField(format!("degree {d} exceeds 8")));
        }
        if !is_irreducible_over_q(&poly) {
            return Err(Error::Reducible(format!("{poly:?}")));
        }
        // θ^k table
        let mut power_table: Vec<Vec<BigInt>> = Vec::new();
        let mut cur: Vec<BigInt> = vec![BigInt::zero(); d];
        cur[0] = BigInt::one();
        for _ in 0..(2 * d).max(2) - 1 {
            power_table.push(cur.clone());
            // multiply by θ
            let top = cur[d - 1].clone();
            let mut next = vec![BigInt::zero(); d];
            for i in 1..d {
                next[i] = cur[i - 1].clone();
            }
            for i in 0..d {
                next[i] -= &top * poly[i];
            }
            cur = next;
        }
        let mut field = NumberField {
            label: spec.label.clone(),
            min_poly: poly.clone(),
            degree: d,
            aut_images: vec![],
            aut_mats: vec![],
            compose: vec![],
            power_table_small: power_table
                .iter()
                .map(|r| r.iter().map(|c| c.to_i128().unwrap()).collect())
                .collect(),
            power_table,
            traces: vec![],
            signature: (0, 0),
            discriminant: BigInt::zero(),
            conj: 0,
            emb_theta: vec![],
            units: UnitGroup::trivial(d),
            prime_cache: Mutex::new(HashMap::new()),
        };
        field.traces = (0..2 * d - 1)
            .map(|k| {
                // trace of multiplication by θ^k
                let mut t = BigInt::zero();
                for j in 0..d {
                    let prod = field.mul_raw(&field.power_table[k], &field.power_table[j]);
                    t += &prod[j];
                }
                t
            })
            .collect();

        // automorphisms
        let mut images: Vec<Elem> = spec
            .automorphisms
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.resize(d, 0);
                Elem::from_ints(&c)
            })
            .collect();
        if images.len() != d {
            return Err(Error::NotAutomorphism(format!(
                "expected {d} automorphisms, got {}",
                images.len()
            )));
        }
        let theta = field.theta();
        for g in &images {
            let v = field.eval_int_poly(&poly, g);
            if !v.is_zero() {
                return Err(Error::NotAutomorphism(format!("min_poly({g}) != 0")));
            }
        }
        for i in 0..d {
            for j in 0..i {
                if images[i] == images[j] {
                    return Err(Error::NotAutomorphism("duplicate maps".into()));
                }
            }
        }
        if let Some(pos) = images.iter().position(|g| *g == theta) {
            let id = images.remove(pos);
            images.insert(0, id);
        } else {
            return Err(Error::NotAutomorphism("identity map missing".into()));
        }
        field.aut_mats = images
            .iter()
            .map(|g| {
                let mut cols: Vec<Vec<BigInt>> = Vec::new();
                let mut p = field.one();
                for _ in 0..d {
                    cols.push(p.num.clone());
                    p = field.mul(&p, g);
                }
                (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
            })
            .collect();
        field.aut_images = images.clone();
        let mut compose = vec![vec![0usize; d]; d];
        for s in 0..d {
            for t in 0..d {
                let st = field.apply(s, &images[t]);
                match images.iter().position(|g| *g == st) {
                    Some(k) => compose[s][t] = k,
                    None => {
                        return Err(Error::NotAutomorphism(
                            "maps not closed under composition".into(),
                        ))
                    }
                }
            }
        }
        field.compose = compose;

        // numerics
        let roots = numeric::roots(&poly);
        let base = roots[0];
        field.emb_theta = images
            .iter()
            .map(|g| {
                let c: Vec<f64> = g.num.iter().map(|x| x.to_f64().unwrap()).collect();
                c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &x| acc * base + x)
            })
            .collect();
        for z in &field.emb_theta {
            if poly_eval_f(&poly, *z).norm() > 1e-6 {
                return Err(Error::NotAutomorphism("numeric embedding mismatch".into()));
            }
        }
        let r1 = roots.iter().filter(|z| z.im == 0.0).count();
        if r1 != 0 && r1 != d {
            return Err(Error::InvalidField("field is neither totally real nor totally complex".into()));
        }
        field.signature = (r1, (d - r1) / 2);
        field.conj = if r1 == d {
            0
        } else {
            field
                .emb_theta
                .iter()
                .position(|z| (z - base.conj()).norm() < 1e-8)
                .ok_or_else(|| Error::InvalidField("complex conjugation not found".into()))?
        };

        // discriminant
        let gram: Vec<Vec<BigInt>> = (0..d)
            .map(|i| (0..d).map(|j| field.traces[i + j].clone()).collect())
            .collect();
        field.discriminant = det_bareiss(&gram);

        field.units = UnitGroup::establish(&field, spec.units.as_ref())?;
        Ok(field)
    }

    pub fn d(&self) -> usize {
        self.degree
    }

    pub fn is_totally_real(&self) -> bool {
        self.signature.1 == 0
    }

    /// Automorphism indices of the real places (all of them for totally real fields).
    pub fn real_places(&self) -> Vec<usize> {
        if self.is_totally_real() {
            (0..self.degree).collect()
        } else {
            vec![]
        }
    }

    /// One automorphism index per infinite place.
    pub fn infinite_places(&self) -> Vec<usize> {
        if self.is_totally_real() {
            return (0..self.degree).collect();
        }
        (0..self.degree)
            .filter(|&s| s < self.compose[self.conj][s])
            .collect()
    }

    pub fn compose(&self, s: usize, t: usize) -> usize {
        self.compose[s][t]
    }

    pub fn aut_inverse(&self, s: usize) -> usize {
        (0..self.degree).find(|&t| self.compose[s][t] == 0).unwrap()
    }

    pub fn zero(&self) -> Elem {
        Elem::new(vec![BigInt::zero(); self.degree], BigInt::one())
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    pub fn from_int(&self, c: i64) -> Elem {
        self.from_bigint(&BigInt::from(c))
    }

    pub fn from_bigint(&self, c: &BigInt) -> Elem {
        let mut v = vec![BigInt::zero(); self.degree];
        v[0] = c.clone();
        Elem::new(v, BigInt::one())
    }

    pub fn from_rational(&self, c: &BigRational) -> Elem {
        let mut v = vec![BigInt::zero(); self.degree];
        v[0] = c.numer().clone();
        Elem::new(v, c.denom().clone())
    }

    pub fn theta(&self) -> Elem {
        if self.degree == 1 {
            return self.from_int(-self.min_poly[0]);
        }
        let mut v = vec![BigInt::zero(); self.degree];
        v[1] = BigInt::one();
        Elem::new(v, BigInt::one())
    }

    pub fn elem(&self, coords: &[i64]) -> Elem {
        let mut c = coords.to_vec();
        c.resize(self.degree, 0);
        Elem::from_ints(&c)
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        let den = &a.den * &b.den;
        let num = a
            .num
            .iter()
            .zip(&b.num)
            .map(|(x, y)| x * &b.den + y * &a.den)
            .collect();
        Elem::new(num, den)
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        Elem {
            num: a.num.iter().map(|x| -x).collect(),
            den: a.den.clone(),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &Elem, c: &BigRational) -> Elem {
        Elem::new(
            a.num.iter().map(|x| x * c.numer()).collect(),
            &a.den * c.denom(),
        )
    }

    fn mul_raw(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let d = self.degree;
        let mut wide = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    wide[i + j] += x * y;
                }
            }
        }
        let mut out: Vec<BigInt> = wide[..d].to_vec();
        for k in d..2 * d - 1 {
            if wide[k].is_zero() {
                continue;
            }
            for i in 0..d {
                out[i] += &wide[k] * &self.power_table[k][i];
            }
        }
        out
    }

    /// Product of integral coordinate vectors in machine integers.
    pub fn mul_int(&self, a: &[i128], b: &[i128]) -> Vec<i128> {
        let d = self.degree;
        let mut wide = vec![0i128; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                wide[i + j] += x * y;
            }
        }
        let mut out = wide[..d].to_vec();
        for k in d..2 * d - 1 {
            if wide[k] != 0 {
                for i in 0..d {
                    out[i] += wide[k] * self.power_table_small[k][i];
                }
            }
        }
        out
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        Elem::new(self.mul_raw(&a.num, &b.num), &a.den * &b.den)
    }

    pub fn pow(&self, a: &Elem, e: i64) -> Result<Elem> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        Ok(self.pow_u(&base, e.unsigned_abs()))
    }

    pub fn pow_u(&self, a: &Elem, mut e: u64) -> Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut others = self.one();
        for s in 1..self.degree {
            others = self.mul(&others, &self.apply(s, a));
        }
        let n = self.mul(a, &others);
        let nr = n.as_rational().expect("norm is rational");
        Ok(self.scale(&others, &nr.recip()))
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Applies automorphism `s`.
    pub fn apply(&self, s: usize, a: &Elem) -> Elem {
        let m = &self.aut_mats[s];
        let num = (0..self.degree)
            .map(|i| {
                m[i].iter()
                    .zip(&a.num)
                    .fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
            })
            .collect();
        Elem::new(num, a.den.clone())
    }

    pub fn apply_checked(&self, s: usize, a: &Elem) -> Result<Elem> {
        if s >= self.degree {
            return Err(Error::IndexOutOfRange(format!("automorphism {s}")));
        }
        Ok(self.apply(s, a))
    }

    pub fn norm(&self, a: &Elem) -> BigRational {
        let mut acc = a.clone();
        for s in 1..self.degree {
            acc = self.mul(&acc, &self.apply(s, a));
        }
        acc.as_rational().expect("norm is rational")
    }

    pub fn trace(&self, a: &Elem) -> BigRational {
        let t = a
            .num
            .iter()
            .zip(&self.traces)
            .fold(BigInt::zero(), |acc, (x, y)| acc + x * y);
        BigRational::new(t, a.den.clone())
    }

    /// Evaluates an integer polynomial (ascending) at `x`.
    pub fn eval_int_poly(&self, poly: &[i64], x: &Elem) -> Elem {
        let mut acc = self.zero();
        for &c in poly.iter().rev() {
            acc = self.add(&self.mul(&acc, x), &self.from_int(c));
        }
        acc
    }

    /// Base complex embedding composed with automorphism `s`.
    pub fn complex_embedding(&self, a: &Elem, s: usize) -> Complex64 {
        let z = self.emb_theta[s];
        let den = a.den.to_f64().unwrap();
        let mut acc = Complex64::new(0.0, 0.0);
        for c in a.num.iter().rev() {
            acc = acc * z + c.to_f64().unwrap();
        }
        acc / den
    }

    /// Sign of `a` at the real place `s`. Exact for degree at most 2.
    pub fn sign_at(&self, a: &Elem, s: usize) -> Result<i8> {
        if !self.is_totally_real() {
            return Err(Error::InvalidField("no real places".into()));
        }
        if a.is_zero() {
            return Ok(0);
        }
        match self.degree {
            1 => Ok(if a.num[0].is_positive() { 1 } else { -1 }),
            2 => {
                // a = x + yθ with θ = (-b ± √D)/2
                let b = self.min_poly[1];
                let c = self.min_poly[0];
                let disc = BigInt::from(b * b - 4 * c);
                let x = &a.num[0];
                let y = &a.num[1];
                let big_a = BigInt::from(2) * x - y * b;
                let root_sign: i64 = {
                    let z = self.emb_theta[s].re;
                    if 2.0 * z + b as f64 > 0.0 {
                        1
                    } else {
                        -1
                    }
                };
                let big_b = y * root_sign;
                // sign of big_a + big_b √disc
                let sa = big_a.signum();
                let sb = big_b.signum();
                let s = if sb.is_zero() {
                    sa
                } else if sa.is_zero() || sa == sb {
                    sb
                } else {
                    let lhs = &big_a * &big_a;
                    let rhs = &big_b * &big_b * &disc;
                    if lhs > rhs {
                        sa
                    } else {
                        sb
                    }
                };
                Ok(if s.is_positive() { 1 } else { -1 })
            }
            _ => {
                let v = self.complex_embedding(a, s).re;
                if v.abs() < 1e-9 {
                    return Err(Error::InvalidField("sign undecidable at working precision".into()));
                }
                Ok(if v > 0.0 { 1 } else { -1 })
            }
        }
    }

    pub fn signs(&self, a: &Elem) -> Vec<i8> {
        self.real_places()
            .iter()
            .map(|&s| self.sign_at(a, s).unwrap_or(0))
            .collect()
    }

    pub fn is_totally_positive(&self, a: &Elem) -> bool {
        self.signs(a).iter().all(|&s| s == 1)
    }

    /// `ln |a|` at each infinite place.
    pub fn log_embedding(&self, a: &Elem) -> Vec<f64> {
        self.infinite_places()
            .iter()
            .map(|&s| self.complex_embedding(a, s).norm().ln())
            .collect()
    }

    /// Positive-definite trace form `Tr(a * conj(a))`.
    pub fn t2(&self, a: &Elem) -> BigRational {
        let c = self.apply(self.conj, a);
        self.trace(&self.mul(a, &c))
    }

    /// Memoized factorizations of rational primes.
    pub(crate) fn prime_cache(&self) -> &Mutex<HashMap<u64, Arc<Vec<PrimeIdeal>>>> {
        &self.prime_cache
    }

    /// Multiplicative order of a root of unity, or `None` if `a` is not one.
    pub fn root_of_unity_order(&self, a: &Elem) -> Option<u64> {
        let w = self.units.torsion_order;
        if !a.is_integral() {
            return None;
        }
        let one = self.one();
        if self.pow_u(a, w) != one {
            return None;
        }
        (1..=w).find(|&k| w % k == 0 && self.pow_u(a, k) == one)
    }

    /// `ζ_w^k` for the torsion generator.
    pub fn zeta_pow(&self, k: i64) -> Elem {
        let w = self.units.torsion_order as i64;
        self.pow_u(&self.units.torsion_generator, k.rem_euclid(w) as u64)
    }

    /// Exponent `k` with `a = ζ_w^k`, if `a` is a root of unity.
    pub fn zeta_log(&self, a: &Elem) -> Option<u64> {
        let w = self.units.torsion_order;
        let mut cur = self.one();
        for k in 0..w {
            if cur == *a {
                return Some(k);
            }
            cur = self.mul(&cur, &self.units.torsion_generator);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian() -> NumberField {
        NumberField::create(FieldSpec {
            label: "g".into(),
            min_poly: vec![1, 0, 1],
            automorphisms: vec![vec![0, 1], vec![0, -1]],
            units: None,
        })
        .unwrap()
    }

    #[test]
    fn gaussian_basics() {
        let k = gaussian();
        assert_eq!(k.degree, 2);
        assert_eq!(k.signature, (0, 1));
        assert_eq!(k.discriminant, BigInt::from(-4));
        let a = k.elem(&[2, 1]);
        assert_eq!(k.apply(1, &a), k.elem(&[2, -1]));
        assert_eq!(k.norm(&a), BigRational::from_integer(5.into()));
        assert_eq!(k.trace(&k.elem(&[-1, 2])), BigRational::from_integer((-2).into()));
        assert_eq!(k.trace(&k.one()), BigRational::from_integer(2.into()));
        let inv = k.inv(&a).unwrap();
        assert_eq!(k.mul(&a, &inv), k.one());
        assert_eq!(k.units.torsion_order, 4);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = NumberField::create(FieldSpec {
            label: "g".into(),
            min_poly: vec![1, 0, 1],
            automorphisms: vec![vec![0, 1], vec![1, 1]],
            units: None,
        });
        assert!(matches!(bad, Err(Error::NotAutomorphism(_))));
        let red = NumberField::create(FieldSpec {
            label: "r".into(),
            min_poly: vec![-1, 0, 1],
            automorphisms: vec![vec![0, 1], vec![0, -1]],
            units: None,
        });
        assert!(matches!(red, Err(Error::Reducible(_))));
        assert!(!is_irreducible_over_q(&[4, 0, 0, 0, 1]));
        assert!(is_irreducible_over_q(&[1, 0, 0, 0, 1]));
    }

    #[test]
    fn rationals_convention() {
        let q = NumberField::create(FieldSpec {
            label: "q".into(),
            min_poly: vec![-1, 1],
            automorphisms: vec![vec![1]],
            units: None,
        })
        .unwrap();
        assert_eq!(q.degree, 1);
        assert_eq!(q.signature, (1, 0));
        let a = q.from_int(6);
        let b = q.from_int(-4);
        assert_eq!(q.mul(&a, &b), q.from_int(-24));
        assert_eq!(q.sign_at(&b, 0).unwrap(), -1);
        assert_eq!(q.units.torsion_order, 2);
    }
}
