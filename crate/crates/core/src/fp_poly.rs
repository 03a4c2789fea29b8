//! Univariate polynomials over a prime field F_p, coefficients ascending.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{inv_mod, mul_mod, pow_mod};

pub type Poly = Vec<u64>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                ((x as u128 + y as u128) % p as u128) as u64
            })
            .collect(),
    )
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                ((x as u128 + p as u128 - y as u128) % p as u128) as u64
            })
            .collect(),
    )
}

pub fn scale(a: &[u64], c: u64, p: u64) -> Poly {
    trim(a.iter().map(|&x| mul_mod(x, c, p)).collect())
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    let pp = p as u128;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u128 * y as u128) % pp;
        }
    }
    trim(out.into_iter().map(|c| c as u64).collect())
}

/// Division with remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly) {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p).expect("leading coefficient invertible");
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![0u64; r.len() - db];
    while r.len() >= b.len() {
        let k = r.len() - 1 - db;
        let c = mul_mod(*r.last().unwrap(), lead_inv, p);
        q[k] = c;
        for (j, &bj) in b.iter().enumerate() {
            let t = mul_mod(c, bj, p);
            r[k + j] = (r[k + j] + p - t) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> Poly {
    divrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> Poly {
    let a = trim(a.to_vec());
    match a.last() {
        None => a,
        Some(&l) => scale(&a, inv_mod(l, p).unwrap(), p),
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

pub fn derivative(a: &[u64], p: u64) -> Poly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
            .collect(),
    )
}

pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Poly {
    rem(&mul(a, b, p), m, p)
}

pub fn powmod(a: &[u64], mut e: u128, m: &[u64], p: u64) -> Poly {
    let mut base = rem(a, m, p);
    let mut acc = rem(&[1], m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &base, m, p);
        }
        base = mulmod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

/// Reduces an integer polynomial mod p.
pub fn from_i64s(a: &[i64], p: u64) -> Poly {
    trim(a.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect())
}

fn all_monic(deg: usize, p: u64) -> impl Iterator<Item = Poly> {
    let count = p.pow(deg as u32);
    (0..count).map(move |mut k| {
        let mut v = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            v.push(k % p);
            k /= p;
        }
        v.push(1);
        v
    })
}

fn factor_trial(f: &[u64], p: u64) -> Vec<(Poly, u32)> {
    let mut f = monic(f, p);
    let mut out = Vec::new();
    let mut d = 1;
    while degree(&f).unwrap_or(0) >= 2 * d {
        for g in all_monic(d, p) {
            if !is_irreducible(&g, p) {
                continue;
            }
            let mut e = 0;
            loop {
                let (q, r) = divrem(&f, &g, p);
                if !r.is_empty() {
                    break;
                }
                f = q;
                e += 1;
            }
            if e > 0 {
                out.push((g, e));
            }
        }
        d += 1;
    }
    if degree(&f).unwrap_or(0) > 0 {
        match out.iter_mut().find(|(g, _)| *g == f) {
            Some(entry) => entry.1 += 1,
            None => out.push((f, 1)),
        }
    }
    out
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = monic(f, p);
    let n = match degree(&f) {
        Some(n) if n >= 1 => n,
        _ => return false,
    };
    if n == 1 {
        return true;
    }
    let x = vec![0, 1];
    let q = p as u128;
    let mut xp = x.clone();
    for k in 1..=n {
        xp = powmod(&xp, q, &f, p);
        if k < n && n % k == 0 {
            let g = gcd(&sub(&xp, &x, p), &f, p);
            if degree(&g) != Some(0) {
                return false;
            }
        }
    }
    sub(&xp, &x, p).is_empty()
}

fn squarefree_parts(f: &[u64], p: u64) -> Vec<(Poly, u32)> {
    // Yun's algorithm; valid when p exceeds the degree.
    let f = monic(f, p);
    let mut out = Vec::new();
    let df = derivative(&f, p);
    let a = gcd(&f, &df, p);
    let mut b = divrem(&f, &a, p).0;
    let mut c = divrem(&df, &a, p).0;
    let mut d = sub(&c, &derivative(&b, p), p);
    let mut i = 1;
    loop {
        let g = gcd(&b, &d, p);
        if degree(&g).unwrap_or(0) > 0 {
            out.push((g.clone(), i));
        }
        b = divrem(&b, &g, p).0;
        if degree(&b).unwrap_or(0) == 0 {
            break;
        }
        c = divrem(&d, &g, p).0;
        d = sub(&c, &derivative(&b, p), p);
        i += 1;
    }
    out
}

fn distinct_degree(f: &[u64], p: u64) -> Vec<(Poly, usize)> {
    let mut f = monic(f, p);
    let x = vec![0, 1];
    let mut xp = x.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while degree(&f).unwrap_or(0) >= 2 * d {
        xp = powmod(&xp, p as u128, &f, p);
        let g = gcd(&sub(&xp, &x, p), &f, p);
        if degree(&g).unwrap_or(0) > 0 {
            out.push((g.clone(), d));
            f = divrem(&f, &g, p).0;
            xp = rem(&xp, &f, p);
        }
        d += 1;
    }
    if degree(&f).unwrap_or(0) > 0 {
        let n = degree(&f).unwrap();
        out.push((f, n));
    }
    out
}

fn equal_degree(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = degree(f).unwrap_or(0);
    if n == d {
        return vec![monic(f, p)];
    }
    let e = ((p as u128).pow(d as u32) - 1) / 2;
    loop {
        let a: Poly = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if degree(&a).unwrap_or(0) == 0 {
            continue;
        }
        let t = sub(&powmod(&a, e, f, p), &[1], p);
        let g = gcd(&t, f, p);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = divrem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&h, d, p, rng));
            return out;
        }
    }
}

/// Factors a nonzero polynomial into monic irreducibles with multiplicity,
/// sorted by (degree, coefficients).
pub fn factor(f: &[u64], p: u64) -> Vec<(Poly, u32)> {
    let f = trim(f.to_vec());
    let n = degree(&f).unwrap_or(0);
    let mut out = if p <= 7 || (p as usize) <= n {
        factor_trial(&f, p)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        let mut acc = Vec::new();
        for (sq, mult) in squarefree_parts(&f, p) {
            for (g, d) in distinct_degree(&sq, p) {
                for h in equal_degree(&g, d, p, &mut rng) {
                    acc.push((h, mult));
                }
            }
        }
        acc
    };
    out.sort_by_key(|(g, _)| (g.len(), g.iter().rev().copied().collect::<Vec<_>>()));
    out
}

pub fn roots(f: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = factor(f, p)
        .into_iter()
        .filter(|(g, _)| g.len() == 2)
        .map(|(g, _)| (p - g[0]) % p)
        .collect();
    r.sort_unstable();
    r
}

pub fn pow_u64(x: u64, e: u64, p: u64) -> u64 {
    pow_mod(x, e, p)
}
