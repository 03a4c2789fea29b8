//! Random relation problems, half of them with a planted relation.

use num::{Signed, ToPrimitive};
use rand::Rng;

use crate::algebra::{Elem, NumberField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Planting {
    /// `c = Π a_i^{m_i}`.
    Product,
    /// `c = ζ · Π a_i^{m_i}`.
    Twisted,
    /// `a_1 = b^s` and `c = b · Π_{i>1} a_i^{m_i}`.
    Root(u64),
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub c: Elem,
    pub a: Vec<Elem>,
    pub planted: Option<Planting>,
}

/// Nonzero element with coordinates in `[-height, height]` and norm below 2^64.
pub fn random_element<R: Rng>(k: &NumberField, height: i64, rng: &mut R) -> Elem {
    loop {
        let coords: Vec<i64> = (0..k.degree).map(|_| rng.gen_range(-height..=height)).collect();
        let x = k.elem(&coords);
        if x.is_zero() {
            continue;
        }
        let n = k.norm(&x);
        if n.numer().abs().to_u64().is_some() {
            return x;
        }
    }
}

fn power_product<R: Rng>(k: &NumberField, a: &[Elem], rng: &mut R) -> Elem {
    let mut c = k.one();
    for x in a {
        let e = rng.gen_range(-2i64..=2);
        c = k.mul(&c, &k.pow(x, e).expect("nonzero base"));
    }
    c
}

/// One to three bases; `root_degrees` are the `s` used by root plantings.
pub fn random_instance<R: Rng>(k: &NumberField, height: i64, root_degrees: &[u64], rng: &mut R) -> Instance {
    let n = rng.gen_range(1..=3usize);
    let mut a: Vec<Elem> = (0..n).map(|_| random_element(k, height, rng)).collect();
    if rng.gen_bool(0.5) {
        return Instance { c: random_element(k, height, rng), a, planted: None };
    }
    let kind = rng.gen_range(0..3);
    if kind == 2 && !root_degrees.is_empty() {
        let s = root_degrees[rng.gen_range(0..root_degrees.len())];
        let small = (height as f64).powf(1.0 / s as f64).max(2.0) as i64;
        let b = random_element(k, small, rng);
        a[0] = k.pow(&b, s as i64).expect("nonzero base");
        let c = k.mul(&b, &power_product(k, &a[1..], rng));
        return Instance { c, a, planted: Some(Planting::Root(s)) };
    }
    let mut c = power_product(k, &a, rng);
    if kind == 1 {
        let w = k.units.torsion_order as i64;
        c = k.mul(&c, &k.zeta_pow(rng.gen_range(1..w.max(2))));
        return Instance { c, a, planted: Some(Planting::Twisted) };
    }
    Instance { c, a, planted: Some(Planting::Product) }
}
