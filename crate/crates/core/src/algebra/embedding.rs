//! Field embeddings K -> L given by the image of the generator.

use num::Zero;

use super::{Elem, Field};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Embedding {
    pub source: Field,
    pub target: Field,
    /// Image of the generator of the source, in target coordinates.
    pub image: Elem,
    powers: Vec<Elem>,
}

impl Embedding {
    pub fn new(source: Field, target: Field, image: Elem) -> Result<Embedding> {
        if image.num.len() != target.degree {
            return Err(Error::FieldMismatch("embedding image has wrong length".into()));
        }
        let v = target.eval_int_poly(&source.min_poly, &image);
        if !v.is_zero() {
            return Err(Error::FieldMismatch(format!(
                "{} is not a root of the minimal polynomial of {}",
                image, source.label
            )));
        }
        let mut powers = Vec::with_capacity(source.degree);
        let mut cur = target.one();
        for _ in 0..source.degree {
            powers.push(cur.clone());
            cur = target.mul(&cur, &image);
        }
        Ok(Embedding {
            source,
            target,
            image,
            powers,
        })
    }

    pub fn identity(k: Field) -> Embedding {
        let theta = k.theta();
        Embedding::new(k.clone(), k, theta).expect("identity embedding")
    }

    /// The lexicographically smallest root of the source minimal polynomial
    /// among target elements with coordinates in [-2, 2].
    pub fn find(source: Field, target: Field) -> Result<Embedding> {
        if source.label == target.label {
            return Ok(Embedding::identity(source));
        }
        if target.degree % source.degree != 0 {
            return Err(Error::FieldMismatch(format!(
                "{} does not embed in {}",
                source.label, target.label
            )));
        }
        let d = target.degree;
        let total = 5u64.pow(d as u32);
        let mut best: Option<Elem> = None;
        for mut k in 0..total {
            let mut c = Vec::with_capacity(d);
            for _ in 0..d {
                c.push((k % 5) as i64 - 2);
                k /= 5;
            }
            let e = target.elem(&c);
            if target.eval_int_poly(&source.min_poly, &e).is_zero()
                && best.as_ref().map_or(true, |b| e < *b)
            {
                best = Some(e);
            }
        }
        match best {
            Some(img) => Embedding::new(source, target, img),
            None => Err(Error::FieldMismatch(format!(
                "no embedding of {} into {} found",
                source.label, target.label
            ))),
        }
    }

    pub fn apply(&self, a: &Elem) -> Elem {
        let t = &self.target;
        let mut acc = t.zero();
        for (c, p) in a.num.iter().zip(&self.powers) {
            if !c.is_zero() {
                acc = t.add(&acc, &Elem::new(p.num.iter().map(|x| x * c).collect(), p.den.clone()));
            }
        }
        Elem::new(acc.num, &acc.den * &a.den)
    }
}
