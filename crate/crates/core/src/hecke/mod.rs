//! Hecke characters: a modulus, an infinity type and a finite-order
//! character of `(O/m)* x signs`, with values in a value field L ⊇ K.
//!
//! On a principal ideal `(γ)` coprime to the modulus,
//! `χ((γ)) = ε(γ) · Π_σ σ(γ)^{n_σ}`, where ε is read off the residue and
//! sign data of γ. Unit compatibility makes this independent of γ.

pub mod file;
pub mod modp;
pub mod presets;
pub mod random;

use std::sync::Arc;

use num::Integer;
use serde::{Deserialize, Serialize};

use crate::algebra::{Elem, Embedding, Field, NumberField, PrimeIdeal};
use crate::error::{Error, Result};
use crate::intmat::{self, Mat};
use crate::rayclass::{FiniteCharacter, Modulus, RayClassGroup};

pub use modp::ModPCharacter;

/// Exponents `n_σ`, indexed by automorphism of K.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InfinityType(pub Vec<i64>);

impl InfinityType {
    pub fn zero(d: usize) -> InfinityType {
        InfinityType(vec![0; d])
    }

    pub fn constant(d: usize, n: i64) -> InfinityType {
        InfinityType(vec![n; d])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&n| n == 0)
    }

    /// `(Π_{n_σ>0} σ(γ)^{n_σ}, Π_{n_σ<0} σ(γ)^{-n_σ})`, both integral for integral γ.
    pub fn split_eval(&self, k: &NumberField, g: &Elem) -> (Elem, Elem) {
        let mut num = k.one();
        let mut den = k.one();
        for (s, &n) in self.0.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let c = k.pow_u(&k.apply(s, g), n.unsigned_abs());
            if n > 0 {
                num = k.mul(&num, &c);
            } else {
                den = k.mul(&den, &c);
            }
        }
        (num, den)
    }

    /// `Π σ(γ)^{n_σ}` in K.
    pub fn eval(&self, k: &NumberField, g: &Elem) -> Result<Elem> {
        let (a, b) = self.split_eval(k, g);
        k.div(&a, &b)
    }
}

/// The pieces of `χ((γ))`: `ζ_{w_L}^k · emb(a) / emb(b)`.
#[derive(Debug, Clone)]
pub struct ValueParts {
    pub zeta_exp: u64,
    pub num: Elem,
    pub den: Elem,
}

#[derive(Debug, Clone)]
pub struct HeckeCharacter {
    emb: Embedding,
    modulus: Modulus,
    infinity: InfinityType,
    finite: FiniteCharacter,
    group: Arc<RayClassGroup>,
}

impl PartialEq for HeckeCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.k().label == other.k().label
            && self.l().label == other.l().label
            && self.emb.image == other.emb.image
            && self.modulus == other.modulus
            && self.infinity == other.infinity
            && self.finite == other.finite
    }
}

impl HeckeCharacter {
    /// Validates the data, in particular unit compatibility.
    pub fn new(emb: Embedding, modulus: Modulus, infinity: InfinityType, finite: FiniteCharacter) -> Result<HeckeCharacter> {
        let group = Arc::new(RayClassGroup::new(&emb.source, &modulus)?);
        HeckeCharacter::with_group(emb, group, infinity, finite)
    }

    pub fn with_group(
        emb: Embedding,
        group: Arc<RayClassGroup>,
        infinity: InfinityType,
        finite: FiniteCharacter,
    ) -> Result<HeckeCharacter> {
        let k = emb.source.clone();
        let l = emb.target.clone();
        if infinity.0.len() != k.d() {
            return Err(Error::Malformed(format!(
                "infinity type needs {} entries, got {}",
                k.d(),
                infinity.0.len()
            )));
        }
        if finite.w != l.units.torsion_order {
            return Err(Error::MissingRootsOfUnity(format!(
                "finite part uses μ_{} but {} has μ_{}",
                finite.w, l.label, l.units.torsion_order
            )));
        }
        if finite.divisors != group.r_divisors() {
            return Err(Error::Malformed(format!(
                "finite part is defined on a group with divisors {:?}, expected {:?}",
                finite.divisors,
                group.r_divisors()
            )));
        }
        let chi = HeckeCharacter {
            emb,
            modulus: group.modulus().clone(),
            infinity,
            finite,
            group,
        };
        for u in chi.group.units() {
            let v = chi.eval(u)?;
            if v != l.one() {
                return Err(Error::UnitCompatibility {
                    unit: u.to_string(),
                    detail: format!("χ((u)) = {v}, expected 1"),
                });
            }
        }
        Ok(chi)
    }

    pub fn k(&self) -> &Field {
        &self.emb.source
    }

    pub fn l(&self) -> &Field {
        &self.emb.target
    }

    pub fn embedding(&self) -> &Embedding {
        &self.emb
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn infinity_type(&self) -> &InfinityType {
        &self.infinity
    }

    pub fn finite_part(&self) -> &FiniteCharacter {
        &self.finite
    }

    pub fn group(&self) -> &Arc<RayClassGroup> {
        &self.group
    }

    pub fn value_parts(&self, g: &Elem) -> Result<ValueParts> {
        if !self.group.is_coprime(g) {
            return Err(Error::NotCoprime(format!("{g}")));
        }
        let zeta_exp = self.group.char_exp(&self.finite, g)?;
        let (a, b) = self.infinity.split_eval(self.k(), g);
        Ok(ValueParts { zeta_exp, num: self.emb.apply(&a), den: self.emb.apply(&b) })
    }

    /// `χ((γ))` for γ coprime to the modulus.
    pub fn eval(&self, g: &Elem) -> Result<Elem> {
        let p = self.value_parts(g)?;
        let l = self.l();
        let v = l.div(&p.num, &p.den)?;
        Ok(l.mul(&l.zeta_pow(p.zeta_exp as i64), &v))
    }

    pub fn eval_prime(&self, q: &PrimeIdeal) -> Result<Elem> {
        self.eval(&q.generator)
    }

    /// ε on an element, as an exponent of `ζ_{w_L}`.
    pub fn epsilon_exp(&self, g: &Elem) -> Result<u64> {
        self.group.char_exp(&self.finite, g)
    }

    /// The smallest modulus dividing the declared one through which χ factors.
    pub fn conductor(&self) -> Result<Modulus> {
        let f = &self.finite;
        let g = &self.group;
        g.conductor(|x| f.exp_at(&g.r_of_raw(x)) == 0, None)
    }

    /// The same character on its conductor.
    pub fn primitive(&self) -> Result<HeckeCharacter> {
        let f = self.conductor()?;
        if f == self.modulus {
            return Ok(self.clone());
        }
        let small = Arc::new(RayClassGroup::new(self.k(), &f)?);
        let values = small
            .r_generators()?
            .iter()
            .map(|g| {
                let x = self.group.lift_from_divisor(&f, g)?;
                self.epsilon_exp(&x)
            })
            .collect::<Result<Vec<u64>>>()?;
        let finite = FiniteCharacter::new(small.r_divisors().to_vec(), self.finite.w, values)?;
        HeckeCharacter::with_group(self.emb.clone(), small, self.infinity.clone(), finite)
    }

    /// The same character declared on a multiple of its modulus.
    pub fn inflate(&self, m: &Modulus) -> Result<HeckeCharacter> {
        if m == &self.modulus {
            return Ok(self.clone());
        }
        if !self.modulus.divides(self.k(), m) {
            return Err(Error::Malformed(format!("{} does not divide {}", self.modulus.finite, m.finite)));
        }
        let big = Arc::new(RayClassGroup::new(self.k(), m)?);
        let values = big
            .r_generators()?
            .iter()
            .map(|g| self.epsilon_exp(g))
            .collect::<Result<Vec<u64>>>()?;
        let finite = FiniteCharacter::new(big.r_divisors().to_vec(), self.finite.w, values)?;
        HeckeCharacter::with_group(self.emb.clone(), big, self.infinity.clone(), finite)
    }

    /// Reduction at a prime of L.
    pub fn reduce_mod_place(&self, place: &PrimeIdeal) -> Result<ModPCharacter> {
        ModPCharacter::new(self, place)
    }

    /// Purity weight: `n_σ + n_{cσ}` over two, when constant.
    pub fn weight(&self) -> Option<f64> {
        let k = self.k();
        let n = &self.infinity.0;
        if k.is_totally_real() {
            let first = n[0];
            return n.iter().all(|&x| x == first).then_some(first as f64);
        }
        let c = k.conj;
        let sums: Vec<i64> = (0..k.d()).map(|s| n[s] + n[k.compose(c, s)]).collect();
        sums.iter().all(|&x| x == sums[0]).then_some(sums[0] as f64 / 2.0)
    }
}

/// All finite parts compatible with an infinity type on a given modulus:
/// `base + Σ a_i free_i`.
#[derive(Debug, Clone)]
pub struct FinitePartSpace {
    pub base: FiniteCharacter,
    pub free: Vec<FiniteCharacter>,
}

impl FinitePartSpace {
    /// `base + Σ a_i free_i`.
    pub fn pick(&self, coeffs: &[u64]) -> FiniteCharacter {
        let w = self.base.w;
        let mut values = self.base.values.clone();
        for (f, &a) in self.free.iter().zip(coeffs) {
            for (v, &x) in values.iter_mut().zip(&f.values) {
                *v = ((*v as u128 + a as u128 * x as u128) % w as u128) as u64;
            }
        }
        FiniteCharacter { divisors: self.base.divisors.clone(), w, values }
    }
}

/// Solves the unit-compatibility conditions for ε on `R_m` given an
/// infinity type; errors if no finite part exists.
pub fn finite_parts(emb: &Embedding, group: &RayClassGroup, infinity: &InfinityType) -> Result<FinitePartSpace> {
    let k = &emb.source;
    let l = &emb.target;
    let w = l.units.torsion_order;
    let divs = group.r_divisors().to_vec();
    let s = divs.len();
    let mut rows: Mat = Vec::new();
    let mut rhs = Vec::new();
    for (i, &d) in divs.iter().enumerate() {
        let mut row = vec![0i128; s];
        row[i] = d as i128;
        rows.push(row);
        rhs.push(0);
    }
    for (u, img) in group.units().iter().zip(group.unit_images_r()) {
        let psi = emb.apply(&infinity.eval(k, u)?);
        let t = l.zeta_log(&psi).ok_or_else(|| Error::UnitCompatibility {
            unit: u.to_string(),
            detail: format!("Π σ(u)^n_σ = {psi} is not a root of unity in {}", l.label),
        })?;
        rows.push(img.iter().map(|&c| c as i128).collect());
        rhs.push(((w - t) % w) as i128);
    }
    let base = intmat::solve_mod(&rows, s, &rhs, w as i128).ok_or_else(|| {
        Error::MissingRootsOfUnity(format!(
            "no finite part with values in μ_{w} is compatible with the units on modulus {}",
            group.modulus().finite
        ))
    })?;
    let base = FiniteCharacter::new(divs.clone(), w, base.iter().map(|&v| v as u64).collect())?;
    let mut free = Vec::new();
    let cl_divs = group.divisors().to_vec();
    let r_in_cl: Vec<Vec<u64>> = (0..s).map(|j| group.cl_of_raw(&group.r_generator_raw(j))).collect();
    for (i, &d) in cl_divs.iter().enumerate() {
        let step = w / w.gcd(&d);
        if step == w {
            continue;
        }
        let values: Vec<u64> = r_in_cl.iter().map(|c| (c[i] as u128 * step as u128 % w as u128) as u64).collect();
        free.push(FiniteCharacter::new(divs.clone(), w, values)?);
    }
    Ok(FinitePartSpace { base, free })
}

/// Builds a character from an infinity type, using the lexicographically
/// first compatible finite part.
pub fn from_infinity_type(emb: &Embedding, modulus: &Modulus, infinity: InfinityType) -> Result<HeckeCharacter> {
    let group = Arc::new(RayClassGroup::new(&emb.source, modulus)?);
    let space = finite_parts(emb, &group, &infinity)?;
    HeckeCharacter::with_group(emb.clone(), group, infinity, space.base)
}
