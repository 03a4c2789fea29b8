//! Unit groups: torsion, fundamental units, unit decomposition.

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{Elem, NumberField};
use crate::error::{Error, Result};

/// Unit data as stored in the catalog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitData {
    pub torsion_order: u64,
    pub torsion_generator: Vec<i64>,
    pub fundamental_units: Vec<Vec<i64>>,
}

#[derive(Debug, Clone)]
pub struct UnitGroup {
    pub torsion_order: u64,
    pub torsion_generator: Elem,
    pub fundamental_units: Vec<Elem>,
    /// Log embeddings of the fundamental units, one row per unit.
    pub logs: Vec<Vec<f64>>,
}

/// Bound on the y-coordinate in the Pell search.
const PELL_BOUND: i64 = 1_000_000;

fn box_elements(d: usize, r: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * r + 1) as u64;
    let total = side.pow(d as u32);
    (0..total).map(move |mut k| {
        let mut v = Vec::with_capacity(d);
        for _ in 0..d {
            v.push((k % side) as i64 - r);
            k /= side;
        }
        v
    })
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl UnitGroup {
    pub(crate) fn trivial(d: usize) -> UnitGroup {
        let mut g = vec![BigInt::zero(); d];
        g[0] = -BigInt::one();
        UnitGroup {
            torsion_order: 2,
            torsion_generator: Elem::new(g, BigInt::one()),
            fundamental_units: vec![],
            logs: vec![],
        }
    }

    pub fn rank(&self) -> usize {
        self.fundamental_units.len()
    }

    /// Computes or verifies the unit group of `k`.
    pub(crate) fn establish(k: &NumberField, data: Option<&UnitData>) -> Result<UnitGroup> {
        let (w, zeta) = search_torsion(k);
        let rank = k.signature.0 + k.signature.1 - 1;
        let searched_fu = if rank == 0 {
            vec![]
        } else if rank == 1 {
            vec![search_rank_one(k)?]
        } else {
            vec![]
        };
        let (torsion_generator, fundamental_units) = match data {
            None => {
                if rank > 1 {
                    return Err(Error::SearchBound(format!("unit rank {rank} unsupported without data")));
                }
                (zeta, searched_fu.clone())
            }
            Some(d) => {
                if d.torsion_order != w {
                    return Err(Error::InvalidField(format!(
                        "declared torsion order {} but found {w}",
                        d.torsion_order
                    )));
                }
                let g = k.elem(&d.torsion_generator);
                if k.root_of_unity_order_bounded(&g, w) != Some(w) {
                    return Err(Error::InvalidField("torsion generator has wrong order".into()));
                }
                if d.fundamental_units.len() != rank {
                    return Err(Error::InvalidField(format!(
                        "expected {rank} fundamental units, got {}",
                        d.fundamental_units.len()
                    )));
                }
                let fus: Vec<Elem> = d.fundamental_units.iter().map(|c| k.elem(c)).collect();
                for u in &fus {
                    let n = k.norm(u);
                    if !n.is_integer() || n.numer().abs() != BigInt::one() {
                        return Err(Error::InvalidField(format!("{u} is not a unit")));
                    }
                }
                if rank == 1 {
                    let a = l2(&k.log_embedding(&fus[0]));
                    let b = l2(&k.log_embedding(&searched_fu[0]));
                    if (a - b).abs() > 1e-8 * b.max(1.0) {
                        return Err(Error::InvalidField(format!(
                            "declared fundamental unit {} is not fundamental",
                            fus[0]
                        )));
                    }
                }
                (g, fus)
            }
        };
        let logs = fundamental_units.iter().map(|u| k.log_embedding(u)).collect();
        Ok(UnitGroup {
            torsion_order: w,
            torsion_generator,
            fundamental_units,
            logs,
        })
    }
}

impl NumberField {
    pub(crate) fn root_of_unity_order_bounded(&self, a: &Elem, bound: u64) -> Option<u64> {
        let one = self.one();
        let mut cur = a.clone();
        for k in 1..=bound {
            if cur == one {
                return Some(k);
            }
            cur = self.mul(&cur, a);
        }
        None
    }
}

fn search_torsion(k: &NumberField) -> (u64, Elem) {
    let d = k.degree;
    let mut best = (2u64, k.from_int(-1));
    for c in box_elements(d, if d <= 4 { 2 } else { 1 }) {
        let e = k.elem(&c);
        if e.is_zero() {
            continue;
        }
        let on_circle = (0..d).all(|s| (k.complex_embedding(&e, s).norm() - 1.0).abs() < 1e-9);
        if !on_circle {
            continue;
        }
        if let Some(o) = k.root_of_unity_order_bounded(&e, 64) {
            if o > best.0 || (o == best.0 && e < best.1 && o > 2) {
                best = (o, e);
            }
        }
    }
    best
}

fn search_rank_one(k: &NumberField) -> Result<Elem> {
    if k.degree == 2 && k.is_totally_real() {
        return pell_unit(k);
    }
    let d = k.degree;
    let mut best: Option<(f64, Elem)> = None;
    for c in box_elements(d, 2) {
        let e = k.elem(&c);
        if e.is_zero() {
            continue;
        }
        let n = k.norm(&e);
        if !n.is_integer() || n.numer().abs() != BigInt::one() {
            continue;
        }
        let size = l2(&k.log_embedding(&e));
        if size < 1e-6 {
            continue;
        }
        if best.as_ref().map_or(true, |(b, _)| size < *b - 1e-9) {
            best = Some((size, e));
        }
    }
    best.map(|(_, e)| e)
        .ok_or_else(|| Error::SearchBound("no fundamental unit in the search box".into()))
}

/// Smallest `x + yθ` with `y >= 1` and norm ±1 in a real quadratic order.
fn pell_unit(k: &NumberField) -> Result<Elem> {
    let b = k.min_poly[1] as i128;
    let c = k.min_poly[0] as i128;
    for y in 1..=PELL_BOUND as i128 {
        // x^2 - b x y + c y^2 = ±1
        let mut found: Vec<Elem> = Vec::new();
        for t in [1i128, -1] {
            let disc = b * b * y * y - 4 * (c * y * y - t);
            if disc < 0 {
                continue;
            }
            let s = (disc as f64).sqrt().round() as i128;
            for s in [s - 1, s, s + 1] {
                if s < 0 || s * s != disc {
                    continue;
                }
                for num in [b * y + s, b * y - s] {
                    if num % 2 == 0 {
                        found.push(k.elem(&[(num / 2) as i64, y as i64]));
                    }
                }
            }
        }
        if let Some(best) = found.into_iter().min_by(|a, b| {
            l2(&k.log_embedding(a))
                .partial_cmp(&l2(&k.log_embedding(b)))
                .unwrap()
                .then(a.cmp(b))
        }) {
            if k.log_embedding(&best)[0] < 0.0 {
                return k.inv(&best);
            }
            return Ok(best);
        }
    }
    Err(Error::SearchBound("Pell search exhausted".into()))
}

/// Writes a unit as `ζ^a * Π ε_j^{e_j}`; `None` if `u` is not a unit.
pub fn decompose_unit(k: &NumberField, u: &Elem) -> Option<(u64, Vec<i64>)> {
    if !u.is_integral() || u.is_zero() {
        return None;
    }
    let n = k.norm(u);
    if !n.is_integer() || n.numer().abs() != BigInt::one() {
        return None;
    }
    let ug = &k.units;
    let mut exps = vec![0i64; ug.rank()];
    let mut rest = u.clone();
    // a few rounds, since conjugates of large units lose precision
    for _ in 0..8 {
        if let Some(a) = k.zeta_log(&rest) {
            return Some((a, exps));
        }
        let step = solve_logs(&ug.logs, &unit_logs(k, &rest)?);
        if step.iter().all(|&e| e == 0) {
            return None;
        }
        for ((e, s), eps) in exps.iter_mut().zip(&step).zip(&ug.fundamental_units) {
            *e += s;
            rest = k.mul(&rest, &k.pow(eps, -s).ok()?);
        }
    }
    None
}

/// Log embedding of a unit, each entry read from whichever of `u`, `u⁻¹`
/// is large at that place.
fn unit_logs(k: &NumberField, u: &Elem) -> Option<Vec<f64>> {
    let a = k.log_embedding(u);
    let b = k.log_embedding(&k.inv(u).ok()?);
    Some(a.iter().zip(&b).map(|(&x, &y)| if x >= y { x } else { -y }).collect())
}

/// Rounded least-squares coefficients expressing `target` in the rows of `logs`.
pub fn solve_logs(logs: &[Vec<f64>], target: &[f64]) -> Vec<i64> {
    let r = logs.len();
    if r == 0 {
        return vec![];
    }
    // normal equations
    let mut g = vec![vec![0.0f64; r + 1]; r];
    for i in 0..r {
        for j in 0..r {
            g[i][j] = logs[i].iter().zip(&logs[j]).map(|(a, b)| a * b).sum();
        }
        g[i][r] = logs[i].iter().zip(target).map(|(a, b)| a * b).sum();
    }
    for col in 0..r {
        let piv = (col..r)
            .max_by(|&a, &b| g[a][col].abs().partial_cmp(&g[b][col].abs()).unwrap())
            .unwrap();
        g.swap(col, piv);
        for row in 0..r {
            if row != col {
                let f = g[row][col] / g[col][col];
                for c in col..=r {
                    g[row][c] -= f * g[col][c];
                }
            }
        }
    }
    (0..r).map(|i| (g[i][r] / g[i][i]).round() as i64).collect()
}

/// Multiplies `g` by the unit that best balances its absolute values
/// across the infinite places.
pub fn balance(k: &NumberField, g: &Elem) -> Elem {
    if k.units.rank() == 0 || g.is_zero() {
        return g.clone();
    }
    let lg = k.log_embedding(g);
    let n = k.norm(g).to_f64().unwrap().abs().ln() / k.degree as f64;
    let v: Vec<f64> = lg.iter().map(|x| x - n).collect();
    let exps = solve_logs(&k.units.logs, &v);
    let mut out = g.clone();
    for (e, eps) in exps.iter().zip(&k.units.fundamental_units) {
        out = k.mul(&out, &k.pow(eps, -e).unwrap());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::FieldSpec;
    use super::*;

    #[test]
    fn pell_for_sqrt2_and_golden() {
        let k = NumberField::create(FieldSpec {
            label: "s2".into(),
            min_poly: vec![-2, 0, 1],
            automorphisms: vec![vec![0, 1], vec![0, -1]],
            units: None,
        })
        .unwrap();
        assert_eq!(k.units.torsion_order, 2);
        let e = &k.units.fundamental_units[0];
        assert_eq!(e, &k.elem(&[1, 1]));
        let k = NumberField::create(FieldSpec {
            label: "s5".into(),
            min_poly: vec![-1, -1, 1],
            automorphisms: vec![vec![0, 1], vec![1, -1]],
            units: None,
        })
        .unwrap();
        let e = &k.units.fundamental_units[0];
        assert_eq!(e, &k.elem(&[0, 1]));
    }

    #[test]
    fn unit_decomposition() {
        let k = NumberField::create(FieldSpec {
            label: "s2".into(),
            min_poly: vec![-2, 0, 1],
            automorphisms: vec![vec![0, 1], vec![0, -1]],
            units: None,
        })
        .unwrap();
        let eps = k.units.fundamental_units[0].clone();
        let u = k.neg(&k.pow(&eps, -3).unwrap());
        assert_eq!(decompose_unit(&k, &u), Some((1, vec![-3])));
        assert_eq!(decompose_unit(&k, &k.elem(&[2, 0])), None);
    }
}
