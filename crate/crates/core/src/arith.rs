//! Machine-integer number theory: modular arithmetic, primality, factoring.

use num::bigint::Sign;
use num::{BigInt, Integer, One, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128 % m as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / a.gcd(&b) * b
    }
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut r = 1u64;
        let m = 128u64;
        let mut ys = 0u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Prime factorization with multiplicities, sorted by prime.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    if n <= 1 {
        return out;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    let mut stack = vec![n];
    let mut found: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            found.push(m);
            continue;
        }
        let d = pollard_brent(m);
        stack.push(d);
        stack.push(m / d);
    }
    found.sort_unstable();
    for p in found {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out.sort_unstable();
    out
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &b)| b.then_some(k as u64))
        .collect()
}

/// Multiplicative order of `x` in a cyclic group of order `n` with known factorization.
pub fn order_in_cyclic<F: Fn(u64) -> bool>(n: u64, factors: &[(u64, u32)], is_identity_pow: F) -> u64 {
    let mut ord = n;
    for &(p, _) in factors {
        while ord % p == 0 && is_identity_pow(ord / p) {
            ord /= p;
        }
    }
    ord
}

fn bigint_is_probable_prime(n: &BigInt) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Factors a nonzero integer whose prime factors are below 2^64.
///
/// `hints` are tried first, which lets products of already-factored numbers
/// of any size be split cheaply.
pub fn factor_bigint(n: &BigInt, hints: &[u64]) -> Result<Vec<(u64, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroElement);
    }
    let mut m = if n.sign() == Sign::Minus { -n } else { n.clone() };
    let mut acc: std::collections::BTreeMap<u64, u32> = std::collections::BTreeMap::new();
    let divide_out = |m: &mut BigInt, p: u64, acc: &mut std::collections::BTreeMap<u64, u32>| {
        if p < 2 {
            return;
        }
        let bp = BigInt::from(p);
        loop {
            let (q, r) = m.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            *m = q;
            *acc.entry(p).or_insert(0) += 1;
        }
    };
    for &p in hints {
        divide_out(&mut m, p, &mut acc);
    }
    for p in primes_up_to(10_000) {
        if m.is_one() {
            break;
        }
        divide_out(&mut m, p, &mut acc);
    }
    if !m.is_one() {
        if let Some(v) = m.to_u64() {
            for (p, e) in factor_u64(v) {
                *acc.entry(p).or_insert(0) += e;
            }
        } else if bigint_is_probable_prime(&m) {
            return Err(Error::Factorization(format!("prime factor {m} exceeds 2^64")));
        } else {
            return Err(Error::Factorization(format!(
                "cofactor {m} has no factor below 10^4 and exceeds 2^64"
            )));
        }
    }
    Ok(acc.into_iter().collect())
}

/// Euler's totient-free helper: the largest power of `p` dividing `n`.
pub fn valuation_u64(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

pub fn bigint_mod_u64(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_and_large() {
        let naive = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..2000 {
            assert_eq!(is_prime_u64(n), naive(n), "{n}");
        }
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1_000_000_007 * 3));
        assert!(is_prime_u64(18446744073709551557));
    }

    #[test]
    fn factoring_reassembles() {
        for n in [1u64, 2, 12, 97, 1 << 40, 600851475143, 999999000001 * 3, u64::MAX] {
            let f = factor_u64(n);
            let back: u128 = f.iter().map(|&(p, e)| (p as u128).pow(e)).product();
            assert_eq!(back, n as u128);
            assert!(f.iter().all(|&(p, _)| is_prime_u64(p)));
        }
    }

    #[test]
    fn bigint_factor_with_hints() {
        let big = BigInt::from(1_000_003u64).pow(5) * BigInt::from(7u64);
        let f = factor_bigint(&big, &[1_000_003]).unwrap();
        assert_eq!(f, vec![(7, 1), (1_000_003, 5)]);
        assert!(factor_bigint(&BigInt::zero(), &[]).is_err());
        let f = factor_bigint(&BigInt::from(-12), &[]).unwrap();
        assert_eq!(f, vec![(2, 2), (3, 1)]);
    }

    #[test]
    fn inverse_and_orders() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
        let f = factor_u64(12);
        let ord = order_in_cyclic(12, &f, |k| pow_mod(2, k, 13) == 1);
        assert_eq!(ord, 12);
        let ord = order_in_cyclic(12, &f, |k| pow_mod(3, k, 13) == 1);
        assert_eq!(ord, 3);
    }
}
