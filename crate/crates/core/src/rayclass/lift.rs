//! Chinese remaindering and sign adjustment for lifting residue data to
//! global elements.

use num::{BigInt, Integer, One, Signed};

use crate::algebra::{Elem, NumberField};
use crate::error::{Error, Result};
use crate::arith::factor_bigint;

pub(crate) fn elem_of(v: &[i128]) -> Elem {
    Elem::new(v.iter().map(|&c| BigInt::from(c)).collect(), BigInt::one())
}

/// Integral `u` in `(a)` and `v` in `(b)` with `u + v = 1`.
///
/// `u = a^E` where E kills `(O/b)*`; coordinates are reduced modulo
/// `N(a)N(b)`, which lies in `(a)(b)`.
pub fn split_one(k: &NumberField, a: &Elem, b: &Elem) -> Result<(Elem, Elem)> {
    let na = abs_norm(k, a);
    let nb = abs_norm(k, b);
    if nb.is_one() {
        return Ok((k.zero(), k.one()));
    }
    if na.is_one() {
        return Ok((k.one(), k.zero()));
    }
    let n = &na * &nb;
    let mut u = reduce_coords(a, &n);
    for (p, v) in factor_bigint(&nb, &[])? {
        for _ in 0..v {
            u = pow_reduced(k, &u, p, &n);
        }
        for f in 1..=k.d() as u32 {
            let q = p
                .checked_pow(f)
                .ok_or_else(|| Error::SearchBound(format!("{p}^{f} overflows")))?;
            u = pow_reduced(k, &u, q - 1, &n);
        }
    }
    let v = k.sub(&k.one(), &u);
    if !k.div(&v, b)?.is_integral() {
        return Err(Error::NotCoprime(format!("({a}) and ({b}) are not coprime")));
    }
    Ok((u, v))
}

/// Reduces each coordinate into `[0, n)`. Preserves the class modulo any ideal containing `n`.
pub fn reduce_coords(a: &Elem, n: &BigInt) -> Elem {
    if n.is_one() || !a.is_integral() {
        return a.clone();
    }
    Elem::new(a.num.iter().map(|c| c.mod_floor(n)).collect(), BigInt::one())
}

/// `a^e` with coordinates reduced modulo `n` after every step.
pub fn pow_reduced(k: &NumberField, a: &Elem, mut e: u64, n: &BigInt) -> Elem {
    let mut base = reduce_coords(a, n);
    let mut acc = k.one();
    while e > 0 {
        if e & 1 == 1 {
            acc = reduce_coords(&k.mul(&acc, &base), n);
        }
        e >>= 1;
        if e > 0 {
            base = reduce_coords(&k.mul(&base, &base), n);
        }
    }
    acc
}

/// Absolute norm of an integral generator, as a positive integer.
pub fn abs_norm(k: &NumberField, a: &Elem) -> BigInt {
    k.norm(a).to_integer().abs()
}

/// `x` with `x ≡ t_i mod (a_i)` for pairwise coprime `a_i`, coordinates reduced.
pub fn crt(k: &NumberField, parts: &[(Elem, Elem)]) -> Result<Elem> {
    let mut modulus = k.one();
    let mut x = k.zero();
    for (a, t) in parts {
        let (u, v) = split_one(k, &modulus, a)?;
        x = k.add(&k.mul(&x, &v), &k.mul(t, &u));
        modulus = k.mul(&modulus, a);
        x = reduce_coords(&x, &abs_norm(k, &modulus));
    }
    Ok(x)
}

/// Small elements realizing each sign pattern at the real places, indexed by
/// the bitmask of negative places.
pub fn sign_patterns(k: &NumberField) -> Vec<Elem> {
    let places = k.real_places();
    let n = places.len();
    let mut out: Vec<Option<Elem>> = vec![None; 1 << n];
    if n == 0 {
        return vec![k.one()];
    }
    let d = k.d() as u32;
    let side = 7i64;
    for idx in 0..side.pow(d) {
        let mut c = Vec::with_capacity(k.d());
        let mut t = idx;
        for _ in 0..d {
            c.push(t % side - 3);
            t /= side;
        }
        let e = k.elem(&c);
        if e.is_zero() {
            continue;
        }
        let Ok(signs) = places.iter().map(|&s| k.sign_at(&e, s)).collect::<Result<Vec<i8>>>() else {
            continue;
        };
        let mask = signs.iter().enumerate().fold(0usize, |m, (i, &s)| if s < 0 { m | 1 << i } else { m });
        if out[mask].is_none() {
            out[mask] = Some(e);
        }
    }
    out.into_iter()
        .map(|e| e.expect("every sign pattern occurs among small elements"))
        .collect()
}

/// Adds a multiple of the integer `n` to `a` so that its sign at each real
/// place matches `target` (negative iff the bit is set).
pub fn fix_signs(k: &NumberField, a: &Elem, n: &BigInt, mask: usize, patterns: &[Elem]) -> Result<Elem> {
    let places = k.real_places();
    if places.is_empty() {
        return Ok(a.clone());
    }
    let matches = |x: &Elem| -> bool {
        places.iter().enumerate().all(|(i, &s)| {
            let want = if mask >> i & 1 == 1 { -1 } else { 1 };
            k.sign_at(x, s).map_or(false, |v| v == want)
        })
    };
    if matches(a) {
        return Ok(a.clone());
    }
    let e = &patterns[mask];
    let mut c = n.clone();
    for _ in 0..256 {
        let x = k.add(a, &k.mul(e, &k.from_bigint(&c)));
        if matches(&x) {
            return Ok(x);
        }
        c *= 2;
    }
    Err(Error::SearchBound("sign adjustment did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;

    #[test]
    fn crt_gaussian() {
        let k = catalog::field("gaussian").unwrap();
        let a = k.elem(&[2, 1]);
        let b = k.elem(&[3, 0]);
        let x = crt(&k, &[(a.clone(), k.elem(&[1, 0])), (b.clone(), k.elem(&[0, 1]))]).unwrap();
        let d1 = k.div(&k.sub(&x, &k.one()), &a).unwrap();
        let d2 = k.div(&k.sub(&x, &k.theta()), &b).unwrap();
        assert!(d1.is_integral() && d2.is_integral());
    }

    #[test]
    fn signs_in_real_quadratic() {
        let k = catalog::field("qsqrt2").unwrap();
        let pats = sign_patterns(&k);
        assert_eq!(pats.len(), 4);
        let n = BigInt::from(7);
        for mask in 0..4 {
            let x = fix_signs(&k, &k.one(), &n, mask, &pats).unwrap();
            let y = k.div(&k.sub(&x, &k.one()), &k.from_int(7)).unwrap();
            assert!(y.is_integral());
        }
    }
}
