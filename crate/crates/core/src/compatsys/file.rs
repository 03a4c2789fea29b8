//! System files. Loaded systems carry no realization.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CompatibleSystem, FrobEntry};
use crate::algebra::primes::prime_of_generator;
use crate::algebra::{catalog, Embedding, NumberField, PrimeIdeal};
use crate::codec::{elem_from_strings, elem_to_strings, ModulusJson};
use crate::error::{Error, Result};

pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusJson {
    pub prime: Vec<String>,
    pub residue_char: u64,
    pub poly: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemFile {
    pub version: u32,
    pub base_field_label: String,
    pub value_field_label: String,
    pub embedding: Vec<String>,
    pub dimension: usize,
    pub ramification_set: Vec<Vec<String>>,
    pub real_places: Vec<bool>,
    pub defect_set: Vec<Vec<String>>,
    #[serde(default)]
    pub conductor_hint: Option<ModulusJson>,
    pub frobenius_data: Vec<FrobeniusJson>,
}

fn prime_from(k: &NumberField, coords: &[String]) -> Result<PrimeIdeal> {
    prime_of_generator(k, &elem_from_strings(k, coords)?)
}

impl SystemFile {
    pub fn from_system(sys: &CompatibleSystem) -> SystemFile {
        let gens = |v: &[PrimeIdeal]| v.iter().map(|q| elem_to_strings(&q.generator)).collect();
        SystemFile {
            version: VERSION,
            base_field_label: sys.k().label.clone(),
            value_field_label: sys.l().label.clone(),
            embedding: elem_to_strings(&sys.emb.image),
            dimension: sys.dimension,
            ramification_set: gens(&sys.ramification),
            real_places: sys.real_places.clone(),
            defect_set: gens(&sys.defect),
            conductor_hint: sys.conductor_hint.as_ref().map(ModulusJson::from_modulus),
            frobenius_data: sys
                .frobenius
                .values()
                .map(|e| FrobeniusJson {
                    prime: elem_to_strings(&e.prime.generator),
                    residue_char: e.prime.p,
                    poly: e.poly.iter().map(elem_to_strings).collect(),
                })
                .collect(),
        }
    }

    pub fn to_system(&self) -> Result<CompatibleSystem> {
        if self.version != VERSION {
            return Err(Error::Malformed(format!("unsupported system file version {}", self.version)));
        }
        let k = catalog::field(&self.base_field_label)?;
        let l = catalog::field(&self.value_field_label)?;
        let emb = Embedding::new(k.clone(), l.clone(), elem_from_strings(&l, &self.embedding)?)?;
        if self.dimension == 0 {
            return Err(Error::Malformed("dimension must be positive".into()));
        }
        if self.real_places.len() != k.real_places().len() {
            return Err(Error::Malformed(format!("{} real place flags expected", k.real_places().len())));
        }
        let ramification = self
            .ramification_set
            .iter()
            .map(|c| prime_from(&k, c))
            .collect::<Result<Vec<_>>>()?;
        let defect = self.defect_set.iter().map(|c| prime_from(&l, c)).collect::<Result<Vec<_>>>()?;
        let mut frobenius = BTreeMap::new();
        for f in &self.frobenius_data {
            let prime = prime_from(&k, &f.prime)?;
            let at = || elem_to_strings(&prime.generator).join(",");
            if prime.p != f.residue_char {
                return Err(Error::Malformed(format!(
                    "prime ({}) lies above {}, not {}",
                    at(),
                    prime.p,
                    f.residue_char
                )));
            }
            if ramification.contains(&prime) {
                return Err(Error::Malformed(format!("f_r given at the ramified prime ({})", at())));
            }
            let poly = f.poly.iter().map(|c| elem_from_strings(&l, c)).collect::<Result<Vec<_>>>()?;
            if poly.len() != self.dimension + 1 {
                return Err(Error::Malformed(format!(
                    "f_r at ({}) has degree {}, expected {}",
                    at(),
                    poly.len() as i64 - 1,
                    self.dimension
                )));
            }
            if poly[self.dimension] != l.one() {
                return Err(Error::Malformed(format!("f_r at ({}) is not monic", at())));
            }
            if frobenius.insert(prime.key(), FrobEntry { prime: prime.clone(), poly }).is_some() {
                return Err(Error::Malformed(format!("duplicate entry at ({})", at())));
            }
        }
        let conductor_hint = self.conductor_hint.as_ref().map(|m| m.to_modulus(&k)).transpose()?;
        Ok(CompatibleSystem {
            emb,
            dimension: self.dimension,
            ramification,
            real_places: self.real_places.clone(),
            defect,
            frobenius,
            realization: None,
            conductor_hint,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("system files serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<SystemFile> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn save_system(sys: &CompatibleSystem, path: &Path) -> Result<()> {
    std::fs::write(path, SystemFile::from_system(sys).to_json())?;
    Ok(())
}

pub fn load_system(path: &Path) -> Result<CompatibleSystem> {
    SystemFile::from_json(&std::fs::read_to_string(path)?)?.to_system()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compatsys::system_from_characters;
    use crate::hecke::presets;

    #[test]
    fn round_trip_is_byte_stable() {
        let sys = system_from_characters(&[presets::cm_gaussian().unwrap()], 40).unwrap();
        let a = SystemFile::from_system(&sys).to_json();
        let back = SystemFile::from_json(&a).unwrap().to_system().unwrap();
        assert_eq!(back.frobenius, sys.frobenius);
        assert_eq!(SystemFile::from_system(&back).to_json(), a);
    }

    #[test]
    fn rejects_bad_files() {
        let sys = system_from_characters(&[presets::cm_gaussian().unwrap()], 20).unwrap();
        let good = SystemFile::from_system(&sys);
        let mut f = good.clone();
        f.base_field_label = "nowhere".into();
        assert!(matches!(f.to_system(), Err(Error::UnknownField(_))));
        let mut f = good.clone();
        f.frobenius_data[2].poly[1] = vec!["2".into(), "0".into()];
        let err = f.to_system().unwrap_err().to_string();
        assert!(err.contains("not monic"), "{err}");
    }
}
