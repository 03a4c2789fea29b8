//! Character files.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{HeckeCharacter, InfinityType};
use crate::algebra::{catalog, Embedding};
use crate::codec::{elem_from_strings, elem_to_strings};
use crate::error::{Error, Result};
use crate::intmat::{self, Mat};
use crate::rayclass::{FiniteCharacter, Modulus, RayClassGroup};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitePartJson {
    pub group_divisors: Vec<u64>,
    pub generator_reps: Vec<Vec<String>>,
    /// Values are exponents of this primitive root of unity of the value field.
    pub root_of_unity_order: u64,
    pub values: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterFile {
    pub base_field_label: String,
    pub value_field_label: String,
    pub embedding: Vec<String>,
    pub modulus: Vec<String>,
    pub real_places: Vec<bool>,
    pub infinity_type: Vec<i64>,
    pub finite_part: FinitePartJson,
}

impl CharacterFile {
    pub fn from_character(chi: &HeckeCharacter) -> Result<CharacterFile> {
        let reps = chi.group().r_generators()?;
        Ok(CharacterFile {
            base_field_label: chi.k().label.clone(),
            value_field_label: chi.l().label.clone(),
            embedding: elem_to_strings(&chi.embedding().image),
            modulus: elem_to_strings(&chi.modulus().finite),
            real_places: chi.modulus().real.clone(),
            infinity_type: chi.infinity_type().0.clone(),
            finite_part: FinitePartJson {
                group_divisors: chi.finite_part().divisors.clone(),
                generator_reps: reps.iter().map(elem_to_strings).collect(),
                root_of_unity_order: chi.finite_part().w,
                values: chi.finite_part().values.clone(),
            },
        })
    }

    pub fn to_character(&self) -> Result<HeckeCharacter> {
        let k = catalog::field(&self.base_field_label)?;
        let l = catalog::field(&self.value_field_label)?;
        let emb = Embedding::new(k.clone(), l.clone(), elem_from_strings(&l, &self.embedding)?)?;
        let m = Modulus::new(&k, &elem_from_strings(&k, &self.modulus)?, self.real_places.clone())?;
        let group = Arc::new(RayClassGroup::new(&k, &m)?);
        let fp = &self.finite_part;
        if fp.root_of_unity_order != l.units.torsion_order {
            return Err(Error::MissingRootsOfUnity(format!(
                "file uses μ_{} but {} has μ_{}",
                fp.root_of_unity_order, l.label, l.units.torsion_order
            )));
        }
        if fp.generator_reps.len() != fp.values.len() {
            return Err(Error::Malformed("one value per generator representative expected".into()));
        }
        let w = fp.root_of_unity_order;
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
        let mut coords = Vec::new();
        for (rep, &v) in fp.generator_reps.iter().zip(&fp.values) {
            let g = elem_from_strings(&k, rep)?;
            let c = group.resolve_r(&g)?;
            rows.push(c.iter().map(|&x| x as i128).collect());
            rhs.push((v % w) as i128);
            coords.push((c, v % w));
        }
        let x = intmat::solve_mod(&rows, s, &rhs, w as i128)
            .ok_or_else(|| Error::Malformed("finite-part values are inconsistent".into()))?;
        let eps = FiniteCharacter::new(divs, w, x.iter().map(|&v| v as u64).collect())?;
        let spans = coords.iter().map(|(c, _)| c.clone()).collect::<Vec<_>>();
        if !reps_generate(&group, &spans) {
            return Err(Error::Malformed("generator representatives do not generate the group".into()));
        }
        HeckeCharacter::with_group(emb, group, InfinityType(self.infinity_type.clone()), eps)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<CharacterFile> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Whether the given `R_m` coordinate vectors generate the group.
fn reps_generate(group: &RayClassGroup, spans: &[Vec<u64>]) -> bool {
    let divs = group.r_divisors();
    let n = divs.len();
    let mut rel: Mat = (0..n)
        .map(|i| (0..n).map(|j| if i == j { divs[i] as i128 } else { 0 }).collect())
        .collect();
    rel.extend(spans.iter().map(|c| c.iter().map(|&x| x as i128).collect()));
    intmat::Quotient::new(n, &rel).map_or(false, |q| q.order() == 1)
}

pub fn save_character(chi: &HeckeCharacter, path: &Path) -> Result<()> {
    CharacterFile::from_character(chi)?.save(path)
}

pub fn load_character(path: &Path) -> Result<HeckeCharacter> {
    CharacterFile::load(path)?.to_character()
}
