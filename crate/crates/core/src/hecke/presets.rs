//! Named characters used by tests, examples and the command line.

use super::{from_infinity_type, HeckeCharacter, InfinityType};
use crate::algebra::{catalog, Embedding, Field};
use crate::error::Result;
use crate::rayclass::Modulus;

/// The character of `y^2 = x^3 - x` over Q(i): conductor `(1+i)^3`,
/// infinity type `(1, 0)`, `χ((γ))` the primary associate of γ.
pub fn cm_gaussian() -> Result<HeckeCharacter> {
    let k = catalog::field("gaussian")?;
    let m = Modulus::finite_only(&k, &k.elem(&[-2, 2]))?;
    from_infinity_type(&Embedding::identity(k), &m, InfinityType(vec![1, 0]))
}

/// The quadratic character of conductor 5 over the rationals, declared on `5·∞`.
pub fn legendre_five() -> Result<HeckeCharacter> {
    let k = catalog::field("rationals")?;
    let m = Modulus::with_all_real(&k, &k.from_int(5))?;
    let emb = Embedding::identity(k.clone());
    let group = std::sync::Arc::new(crate::rayclass::RayClassGroup::new(&k, &m)?);
    let space = super::finite_parts(&emb, &group, &InfinityType::zero(1))?;
    // the quadratic character is the unique order-2 element trivial on the sign
    for a in 0..2u64 {
        for b in 0..2u64 {
            let cand = space.pick(&[a, b]);
            let chi = HeckeCharacter::with_group(emb.clone(), group.clone(), InfinityType::zero(1), cand)?;
            if chi.eval(&k.from_int(2))? == k.from_int(-1) && chi.eval(&k.from_int(-1))? == k.one() {
                return Ok(chi);
            }
        }
    }
    unreachable!("the Legendre symbol mod 5 exists")
}

pub fn trivial(k: Field, l: Field) -> Result<HeckeCharacter> {
    let emb = Embedding::find(k.clone(), l)?;
    from_infinity_type(&emb, &Modulus::unit(&k), InfinityType::zero(k.d()))
}

/// `(γ) ↦ |Nm(γ)|`; on totally real fields the modulus carries every real place.
pub fn norm(k: Field, l: Field) -> Result<HeckeCharacter> {
    let emb = Embedding::find(k.clone(), l)?;
    let m = if k.is_totally_real() { Modulus::with_all_real(&k, &k.one())? } else { Modulus::unit(&k) };
    from_infinity_type(&emb, &m, InfinityType::constant(k.d(), 1))?.primitive()
}

/// `(γ) ↦ |Nm(γ)|^{-1}`.
pub fn inverse_norm(k: Field, l: Field) -> Result<HeckeCharacter> {
    let emb = Embedding::find(k.clone(), l)?;
    let m = if k.is_totally_real() { Modulus::with_all_real(&k, &k.one())? } else { Modulus::unit(&k) };
    from_infinity_type(&emb, &m, InfinityType::constant(k.d(), -1))?.primitive()
}

/// The value field used for each catalog field when none is given.
pub fn default_value_field(label: &str) -> &'static str {
    match label {
        "rationals" | "eisenstein" | "cyclo12" => "cyclo12",
        "gaussian" | "qsqrtm2" | "qsqrt2" | "cyclo8" => "cyclo8",
        "qsqrt5" | "cyclo5" => "cyclo5",
        "qsqrtm7" => "qsqrtm7",
        _ => "cyclo12",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cm_values() {
        let chi = cm_gaussian().unwrap();
        let k = chi.k().clone();
        assert_eq!(chi.eval(&k.elem(&[2, 1])).unwrap(), k.elem(&[-1, 2]));
        assert_eq!(chi.eval(&k.elem(&[3, 2])).unwrap(), k.elem(&[3, 2]));
        assert_eq!(chi.eval(&k.from_int(7)).unwrap(), k.from_int(-7));
        assert_eq!(chi.conductor().unwrap(), chi.modulus().clone());
        // ε(u) = u^{-1} on the units
        for u in [k.elem(&[0, 1]), k.elem(&[-1, 0])] {
            let z = k.zeta_pow(chi.epsilon_exp(&u).unwrap() as i64);
            assert_eq!(k.mul(&z, &u), k.one());
        }
    }

    #[test]
    fn legendre_and_norm() {
        let chi = legendre_five().unwrap();
        let k = chi.k().clone();
        for (a, v) in [(2, -1), (3, -1), (4, 1), (11, 1), (7, -1)] {
            assert_eq!(chi.eval(&k.from_int(a)).unwrap(), k.from_int(v));
        }
        assert_eq!(chi.conductor().unwrap(), Modulus::finite_only(&k, &k.from_int(5)).unwrap());
        let n = norm(k.clone(), k.clone()).unwrap();
        assert_eq!(n.eval(&k.from_int(-7)).unwrap(), k.from_int(7));
        let g = catalog::field("gaussian").unwrap();
        let n = norm(g.clone(), g.clone()).unwrap();
        assert!(n.conductor().unwrap().is_unit(&g));
        assert_eq!(n.eval(&g.elem(&[2, 1])).unwrap(), g.from_int(5));
        let s2 = catalog::field("qsqrt2").unwrap();
        let n = norm(s2.clone(), s2.clone()).unwrap();
        assert_eq!(n.eval(&s2.elem(&[1, 1])).unwrap(), s2.one());
        assert_eq!(n.eval(&s2.elem(&[1, 2])).unwrap(), s2.from_int(7));
    }

    #[test]
    fn trivial_on_declared_five_has_unit_conductor() {
        let k = catalog::field("gaussian").unwrap();
        let emb = Embedding::identity(k.clone());
        let m = Modulus::finite_only(&k, &k.from_int(5)).unwrap();
        let chi = from_infinity_type(&emb, &m, InfinityType::zero(2)).unwrap();
        assert!(chi.conductor().unwrap().is_unit(&k));
        let p = chi.primitive().unwrap();
        assert!(p.modulus().is_unit(&k));
    }
}
