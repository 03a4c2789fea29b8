//! Reductions of Hecke characters at primes of the value field, tabulated
//! on the generators of `Cl_{m·rad(p)}`.

use std::sync::Arc;

use num::Integer;

use super::{HeckeCharacter, ValueParts};
use crate::algebra::{Elem, PrimeIdeal};
use crate::error::{Error, Result};
use crate::finite_field::{FfElem, FiniteField};
use crate::rayclass::{Modulus, RayClassGroup};

#[derive(Debug, Clone)]
pub struct ModPCharacter {
    pub place: PrimeIdeal,
    field: FiniteField,
    group: Arc<RayClassGroup>,
    raw_values: Vec<FfElem>,
    table: Vec<FfElem>,
}

/// Reduction of `ζ^k · a / b` at `place`; `b` must be a unit there.
pub fn reduce_parts(place: &PrimeIdeal, field: &FiniteField, zeta_bar: &FfElem, parts: &ValueParts) -> Result<FfElem> {
    let a = place.reduce(&parts.num)?;
    let b = place.reduce(&parts.den)?;
    let b_inv = field
        .inv(&b)
        .ok_or_else(|| Error::NotIntegral(format!("value has a pole at the place above {}", place.p)))?;
    let z = field.pow(zeta_bar, parts.zeta_exp as u128);
    Ok(field.mul(&field.mul(&a, &b_inv), &z))
}

impl ModPCharacter {
    pub fn new(chi: &HeckeCharacter, place: &PrimeIdeal) -> Result<ModPCharacter> {
        let k = chi.k();
        let l = chi.l();
        let modulus = chi.modulus().with_radical(k, place.p)?;
        let group = Arc::new(RayClassGroup::new(k, &modulus)?);
        let field = place.residue_field();
        let zeta_bar = place.reduce(&l.units.torsion_generator)?;
        let raw_values = group
            .raw_generators()
            .iter()
            .map(|g| reduce_parts(place, &field, &zeta_bar, &chi.value_parts(g)?))
            .collect::<Result<Vec<_>>>()?;
        let mut m = ModPCharacter { place: place.clone(), field, group, raw_values, table: vec![] };
        let gens = m.group.generators()?;
        let table = gens
            .iter()
            .map(|g| Ok(m.eval_raw(&m.group.raw(g)?)))
            .collect::<Result<Vec<_>>>()?;
        m.table = table;
        for u in m.group.units() {
            let raw = m.group.raw(u)?;
            if m.eval_raw(&raw) != m.field.one() {
                return Err(Error::UnitCompatibility {
                    unit: u.to_string(),
                    detail: format!("reduction at the place above {} is not trivial on units", place.p),
                });
            }
        }
        let order = m.order();
        if order % place.p as u128 == 0 {
            return Err(Error::Malformed(format!("character order {order} is divisible by p = {}", place.p)));
        }
        Ok(m)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn group(&self) -> &Arc<RayClassGroup> {
        &self.group
    }

    pub fn modulus(&self) -> &Modulus {
        self.group.modulus()
    }

    /// Values on the generators of `Cl_{m·rad(p)}`.
    pub fn table(&self) -> &[FfElem] {
        &self.table
    }

    pub fn eval_raw(&self, raw: &[i128]) -> FfElem {
        let f = &self.field;
        let mut acc = f.one();
        let ord = f.order() - 1;
        for (&e, v) in raw.iter().zip(&self.raw_values) {
            let e = e.rem_euclid(ord as i128) as u128;
            if e != 0 {
                acc = f.mul(&acc, &f.pow(v, e));
            }
        }
        acc
    }

    /// `ρ(c)` for a class given by coordinates in `Cl_{m·rad(p)}`.
    pub fn eval_class(&self, c: &[u64]) -> FfElem {
        let f = &self.field;
        let mut acc = f.one();
        for (&e, v) in c.iter().zip(&self.table) {
            if e != 0 {
                acc = f.mul(&acc, &f.pow(v, e as u128));
            }
        }
        acc
    }

    /// `ρ(Frob_r)` through the class of `r`.
    pub fn eval_prime(&self, r: &PrimeIdeal) -> Result<FfElem> {
        if r.p == self.place.p {
            return Err(Error::NotCoprime(format!("prime above {} at its own characteristic", r.p)));
        }
        Ok(self.eval_class(&self.group.resolve_prime(r)?))
    }

    pub fn eval_elem(&self, g: &Elem) -> Result<FfElem> {
        Ok(self.eval_class(&self.group.resolve(g)?))
    }

    /// Order of the image, a cyclic subgroup of the residue field.
    pub fn order(&self) -> u128 {
        self.table
            .iter()
            .fold(1u128, |acc, v| acc.lcm(&self.field.elem_order(v)))
    }

    /// Prime-to-p part of the conductor.
    pub fn conductor(&self) -> Result<Modulus> {
        let one = self.field.one();
        self.group.conductor(|x| self.eval_raw(x) == one, Some(self.place.p))
    }
}

#[cfg(test)]
mod tests {
    use super::super::presets;
    use crate::algebra::catalog;
    use crate::algebra::primes::factor_rational_prime;

    #[test]
    fn cm_reduction_at_thirteen() {
        let chi = presets::cm_gaussian().unwrap();
        let k = catalog::field("gaussian").unwrap();
        let place = factor_rational_prime(&k, 13)
            .unwrap()
            .iter()
            .find(|q| q.reduce(&k.elem(&[3, 2])).unwrap().iter().all(|&c| c == 0))
            .unwrap()
            .clone();
        let rho = chi.reduce_mod_place(&place).unwrap();
        let five = factor_rational_prime(&k, 5).unwrap();
        let r = five
            .iter()
            .find(|q| chi.eval_prime(q).unwrap() == k.elem(&[-1, 2]))
            .unwrap();
        assert_eq!(rho.eval_prime(r).unwrap(), vec![9]);
        assert_eq!(rho.conductor().unwrap(), chi.conductor().unwrap());
    }
}
