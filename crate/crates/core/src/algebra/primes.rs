//! Prime ideals of monogenic fields with class number one, their canonical
//! generators, residue fields and reduction maps.

use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use super::units::balance;
use super::{Elem, NumberField};
use crate::arith::bigint_mod_u64;
use crate::error::{Error, Result};
use crate::finite_field::{FfElem, FiniteField};
use crate::fp_poly::{self, Poly};

/// Exponent window for fundamental units when choosing canonical associates.
pub const ASSOCIATE_WINDOW: i64 = 3;

/// A prime ideal `(p, g(θ))`, with a canonical generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdeal {
    pub p: u64,
    pub f: usize,
    /// Ramification index.
    pub e: u32,
    /// Monic irreducible factor of the minimal polynomial mod p.
    pub residue_poly: Poly,
    pub generator: Elem,
}

impl PrimeIdeal {
    pub fn norm(&self) -> u128 {
        (self.p as u128).pow(self.f as u32)
    }

    pub fn is_ramified(&self) -> bool {
        self.e > 1
    }

    pub fn residue_field(&self) -> FiniteField {
        FiniteField::new(self.p, self.residue_poly.clone())
    }

    /// Key identifying the ideal independently of its generator.
    pub fn key(&self) -> (u64, Poly) {
        (self.p, self.residue_poly.clone())
    }

    /// Image of `a` in the residue field.
    pub fn reduce(&self, a: &Elem) -> Result<FfElem> {
        reduce_mod(self.p, &self.residue_poly, a)
    }
}

/// Reduction of `a` modulo `(p, g(θ))`.
pub fn reduce_mod(p: u64, g: &[u64], a: &Elem) -> Result<FfElem> {
    let field = FiniteField::new(p, g.to_vec());
    let den = bigint_mod_u64(&a.den, p);
    if den == 0 {
        return Err(Error::NotIntegral(format!("p = {p}")));
    }
    let num: Poly = a.num.iter().map(|c| bigint_mod_u64(c, p)).collect();
    let x = field.from_poly(&num);
    let inv = crate::arith::inv_mod(den, p).unwrap();
    Ok(field.mul(&x, &field.from_u64(inv)))
}

/// Factorization of the minimal polynomial mod p.
pub fn residue_factors(k: &NumberField, p: u64) -> Vec<(Poly, u32)> {
    let f = fp_poly::from_i64s(&k.min_poly, p);
    fp_poly::factor(&f, p)
}

/// True when `p` splits completely and is unramified.
pub fn splits_completely(k: &NumberField, p: u64) -> bool {
    let fs = residue_factors(k, p);
    fs.len() == k.degree && fs.iter().all(|(g, e)| g.len() == 2 && *e == 1)
}

fn bilinear(g0: &[Vec<BigInt>], x: &[BigInt], y: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if !yj.is_zero() {
                acc += xi * yj * &g0[i][j];
            }
        }
    }
    acc
}

fn bilinear_f64(g0: &[Vec<f64>], x: &[BigInt]) -> f64 {
    let xf: Vec<f64> = x.iter().map(|c| c.to_f64().unwrap_or(f64::MAX)).collect();
    let mut acc = 0.0;
    for (i, a) in xf.iter().enumerate() {
        for (j, b) in xf.iter().enumerate() {
            acc += a * b * g0[i][j];
        }
    }
    acc
}

/// LLL reduction (δ = 3/4) of integer row vectors under the form `g0`.
pub fn lll(basis: &[Vec<BigInt>], g0: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = basis.len();
    let mut b: Vec<Vec<BigInt>> = basis.to_vec();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let gso = |b: &Vec<Vec<BigInt>>| -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
        let gram: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from_integer(bilinear(g0, &b[i], &b[j])))
                    .collect()
            })
            .collect();
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        let mut bstar = vec![BigRational::zero(); n];
        for i in 0..n {
            for j in 0..i {
                let mut s = gram[i][j].clone();
                for k in 0..j {
                    s -= &mu[i][k] * &mu[j][k] * &bstar[k];
                }
                mu[i][j] = s / &bstar[j];
            }
            let mut s = gram[i][i].clone();
            for k in 0..i {
                s -= &mu[i][k] * &mu[i][k] * &bstar[k];
            }
            bstar[i] = s;
        }
        (mu, bstar)
    };
    let (mut mu, mut bstar) = gso(&b);
    let mut k = 1;
    let mut guard = 0;
    while k < n && guard < 100_000 {
        guard += 1;
        for j in (0..k).rev() {
            if mu[k][j].abs() > half {
                let q = mu[k][j].round();
                let qi = q.to_integer();
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &qi * y;
                }
                for i in 0..j {
                    let d = &q * &mu[j][i];
                    mu[k][i] -= d;
                }
                mu[k][j] -= &q;
            }
        }
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bstar[k - 1];
        if bstar[k] >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            (mu, bstar) = gso(&b);
            k = (k - 1).max(1);
        }
    }
    b
}

fn combos(n: usize, r: i64) -> Vec<Vec<i64>> {
    let side = (2 * r + 1) as u64;
    (0..side.pow(n as u32))
        .map(|mut k| {
            let mut v = Vec::with_capacity(n);
            for _ in 0..n {
                v.push((k % side) as i64 - r);
                k /= side;
            }
            v
        })
        .collect()
}

/// Gram matrix of the positive definite trace form on the power basis.
pub fn t2_gram(k: &NumberField) -> Vec<Vec<BigInt>> {
    let d = k.degree;
    let basis: Vec<Elem> = (0..d)
        .map(|i| {
            let mut c = vec![0i64; d];
            c[i] = 1;
            k.elem(&c)
        })
        .collect();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let t = k.trace(&k.mul(&basis[i], &k.apply(k.conj, &basis[j])));
                    t.to_integer()
                })
                .collect()
        })
        .collect()
}

/// A generator of the ideal `(p, g(θ))`, found by lattice reduction.
pub fn find_generator(k: &NumberField, p: u64, g: &[u64]) -> Result<Elem> {
    let d = k.degree;
    let f = g.len() - 1;
    let target = BigInt::from(p).pow(f as u32);
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..f {
        let mut v = vec![BigInt::zero(); d];
        v[i] = BigInt::from(p);
        basis.push(v);
    }
    for j in 0..d - f {
        let mut v = vec![BigInt::zero(); d];
        for (i, &c) in g.iter().enumerate() {
            v[i + j] = BigInt::from(c);
        }
        basis.push(v);
    }
    let g0 = t2_gram(k);
    let red = lll(&basis, &g0);
    let g0f: Vec<Vec<f64>> = g0.iter().map(|r| r.iter().map(|x| x.to_f64().unwrap()).collect()).collect();
    for radius in [2i64, 4] {
        let mut cands: Vec<(f64, Vec<BigInt>)> = combos(d, radius)
            .into_iter()
            .map(|c| {
                let mut v = vec![BigInt::zero(); d];
                for (ci, row) in c.iter().zip(&red) {
                    if *ci != 0 {
                        for (x, y) in v.iter_mut().zip(row) {
                            *x += y * *ci;
                        }
                    }
                }
                (bilinear_f64(&g0f, &v), v)
            })
            .filter(|(_, v)| v.iter().any(|x| !x.is_zero()))
            .collect();
        cands.sort_by(|x, y| x.0.total_cmp(&y.0).then_with(|| x.1.cmp(&y.1)));
        for (_, v) in cands {
            let e = Elem::new(v, BigInt::one());
            let n = k.norm(&e);
            if n.numer().abs() == target {
                return Ok(e);
            }
        }
    }
    Err(Error::SearchBound(format!("no generator found above {p}")))
}

fn leading_positive(a: &Elem) -> bool {
    a.num
        .iter()
        .find(|c| !c.is_zero())
        .map_or(false, |c| c.is_positive())
}

/// The canonical associate of a nonzero integral element: among
/// `ζ^a ε^j g` with `j` in the exponent window, the lexicographically
/// smallest coordinate vector with positive leading nonzero coordinate.
pub fn canonical_associate(k: &NumberField, g: &Elem) -> Elem {
    let base = balance(k, g);
    let w = k.units.torsion_order;
    let rank = k.units.rank();
    let mut shifts: Vec<Elem> = vec![base.clone()];
    for j in 0..rank {
        let eps = &k.units.fundamental_units[j];
        let mut next = Vec::new();
        for s in &shifts {
            for e in -ASSOCIATE_WINDOW..=ASSOCIATE_WINDOW {
                next.push(k.mul(s, &k.pow(eps, e).unwrap()));
            }
        }
        shifts = next;
    }
    let mut best: Option<Elem> = None;
    for s in shifts {
        let mut cur = s;
        for _ in 0..w {
            if leading_positive(&cur) && best.as_ref().map_or(true, |b| cur < *b) {
                best = Some(cur.clone());
            }
            cur = k.mul(&cur, &k.units.torsion_generator);
        }
    }
    best.expect("some associate has a positive leading coordinate")
}

/// The primes above `p`, sorted by residue polynomial.
pub fn factor_rational_prime(k: &NumberField, p: u64) -> Result<Arc<Vec<PrimeIdeal>>> {
    if let Some(hit) = k.prime_cache().lock().unwrap().get(&p) {
        return Ok(hit.clone());
    }
    let facs = residue_factors(k, p);
    // conjugates of one generator generate the other primes above p
    let mut gens: Vec<Option<Elem>> = vec![None; facs.len()];
    for i in 0..facs.len() {
        if gens[i].is_some() {
            continue;
        }
        let g = find_generator(k, p, &facs[i].0)?;
        for s in 0..k.degree {
            let h = k.apply(s, &g);
            for (j, (gj, _)) in facs.iter().enumerate() {
                if gens[j].is_none() && reduce_mod(p, gj, &h)?.iter().all(|&c| c == 0) {
                    gens[j] = Some(h.clone());
                }
            }
        }
    }
    let mut out = Vec::new();
    for ((g, e), gen) in facs.into_iter().zip(gens) {
        let gen = canonical_associate(k, &gen.expect("every prime above p is a conjugate"));
        out.push(PrimeIdeal {
            p,
            f: g.len() - 1,
            e,
            residue_poly: g,
            generator: gen,
        });
    }
    let out = Arc::new(out);
    k.prime_cache().lock().unwrap().insert(p, out.clone());
    Ok(out)
}

/// The prime ideal with the given residue data, if it lies above `p`.
pub fn prime_by_key(k: &NumberField, p: u64, g: &[u64]) -> Result<PrimeIdeal> {
    factor_rational_prime(k, p)?
        .iter()
        .find(|q| q.residue_poly == g)
        .cloned()
        .ok_or_else(|| Error::Malformed(format!("no prime above {p} with residue polynomial {g:?}")))
}

/// The prime generated by `pi`, which must have prime-power norm.
pub fn prime_of_generator(k: &NumberField, pi: &Elem) -> Result<PrimeIdeal> {
    let n = k.norm(pi);
    if !pi.is_integral() || !n.is_integer() {
        return Err(Error::NotIntegral(format!("{pi}")));
    }
    let n = n.to_integer().abs();
    let fac = crate::arith::factor_bigint(&n, &[])?;
    if fac.len() != 1 {
        return Err(Error::Malformed(format!("{pi} does not generate a prime ideal")));
    }
    let (p, f) = fac[0];
    for q in factor_rational_prime(k, p)?.iter() {
        if q.f as u32 == f && q.reduce(pi)?.iter().all(|&c| c == 0) {
            return Ok(q.clone());
        }
    }
    Err(Error::Malformed(format!("{pi} does not generate a prime ideal")))
}

/// `x / π` when it is integral.
pub fn divide_exact(k: &NumberField, x: &Elem, q: &PrimeIdeal) -> Option<Elem> {
    let y = k.div(x, &q.generator).ok()?;
    if y.is_integral() {
        Some(y)
    } else {
        None
    }
}

/// Valuation of a nonzero element at `q`.
pub fn valuation(k: &NumberField, x: &Elem, q: &PrimeIdeal) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    // clear the denominator: v(x) = v(num) - v(den)
    let num = Elem::new(x.num.clone(), BigInt::one());
    let mut v = 0i64;
    let mut cur = num;
    while let Some(y) = divide_exact(k, &cur, q) {
        cur = y;
        v += 1;
    }
    let mut den = x.den.clone();
    let pp = BigInt::from(q.p);
    while (&den % &pp).is_zero() {
        den /= &pp;
        v -= q.e as i64;
    }
    Ok(v)
}

pub fn norm_u128(k: &NumberField, a: &Elem) -> Option<u128> {
    k.norm(a).to_integer().abs().to_u128()
}

#[cfg(test)]
mod tests {
    use super::super::FieldSpec;
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
    fn gaussian_primes() {
        let k = gaussian();
        let ps = factor_rational_prime(&k, 5).unwrap();
        assert_eq!(ps.len(), 2);
        let gens: Vec<Elem> = ps.iter().map(|q| q.generator.clone()).collect();
        assert!(gens.contains(&k.elem(&[1, -2])));
        assert!(gens.contains(&k.elem(&[1, 2])));
        let ps = factor_rational_prime(&k, 7).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].f, 2);
        // associates of 7: the rule picks 7i
        assert_eq!(ps[0].generator, k.elem(&[0, 7]));
        let ps = factor_rational_prime(&k, 2).unwrap();
        assert_eq!(ps.len(), 1);
        assert!(ps[0].is_ramified());
        assert_eq!(ps[0].generator, k.elem(&[1, -1]));
    }

    #[test]
    fn reduction_at_13() {
        let k = gaussian();
        let q = prime_of_generator(&k, &k.elem(&[3, 2])).unwrap();
        assert_eq!(q.reduce(&k.elem(&[-1, 2])).unwrap(), vec![9]);
        assert_eq!(q.reduce(&k.elem(&[3, 2])).unwrap(), vec![0]);
        assert_eq!(q.reduce(&k.one()).unwrap(), vec![1]);
        assert_eq!(valuation(&k, &k.elem(&[15, 10]), &q).unwrap(), 1);
    }
}
