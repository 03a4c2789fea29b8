//! JSON encodings of field elements and moduli.

use num::{BigInt, BigRational, One};
use serde::{Deserialize, Serialize};

use crate::algebra::{Elem, NumberField};
use crate::error::{Error, Result};
use crate::rayclass::Modulus;

/// Coordinates as decimal strings, `"a"` or `"a/b"`.
pub fn elem_to_strings(a: &Elem) -> Vec<String> {
    a.coords()
        .iter()
        .map(|c| if c.is_integer() { c.numer().to_string() } else { format!("{}/{}", c.numer(), c.denom()) })
        .collect()
}

pub fn elem_from_strings(k: &NumberField, s: &[String]) -> Result<Elem> {
    if s.len() != k.d() {
        return Err(Error::Malformed(format!(
            "element has {} coordinates, field {} has degree {}",
            s.len(),
            k.label,
            k.d()
        )));
    }
    let coords = s
        .iter()
        .map(|t| {
            let t = t.trim();
            let (n, d) = match t.split_once('/') {
                Some((n, d)) => (n, d),
                None => (t, "1"),
            };
            let n: BigInt = n.trim().parse().map_err(|_| Error::Malformed(format!("bad coordinate `{t}`")))?;
            let d: BigInt = d.trim().parse().map_err(|_| Error::Malformed(format!("bad coordinate `{t}`")))?;
            if d == BigInt::from(0) {
                return Err(Error::Malformed(format!("zero denominator in `{t}`")));
            }
            Ok(BigRational::new(n, d))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Elem::from_rationals(&coords))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulusJson {
    pub finite: Vec<String>,
    pub real_places: Vec<bool>,
}

impl ModulusJson {
    pub fn from_modulus(m: &Modulus) -> ModulusJson {
        ModulusJson { finite: elem_to_strings(&m.finite), real_places: m.real.clone() }
    }

    pub fn to_modulus(&self, k: &NumberField) -> Result<Modulus> {
        let g = elem_from_strings(k, &self.finite)?;
        if !g.den.is_one() {
            return Err(Error::NotIntegral("modulus generator".into()));
        }
        Modulus::new(k, &g, self.real_places.clone())
    }
}

/// Parses `a+b*θ+c*θ^2` style literals; `i` stands for `θ` in the gaussian field.
pub fn parse_elem(k: &NumberField, text: &str) -> Result<Elem> {
    let mut s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    s = s.replace('−', "-");
    if k.label == "gaussian" {
        s = s.replace('i', "θ");
    }
    s = s.replace("theta", "θ").replace('t', "θ");
    let bad = || Error::Malformed(format!("cannot parse element `{text}`"));
    if s.is_empty() {
        return Err(bad());
    }
    let mut coords = vec![BigRational::from_integer(BigInt::from(0)); k.d()];
    let mut terms = Vec::new();
    let mut cur = String::new();
    for ch in s.chars() {
        if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('^') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (-1, b.to_string()),
            None => (1, term.trim_start_matches('+').to_string()),
        };
        let (coef, power) = match body.find('θ') {
            None => (body.clone(), 0usize),
            Some(pos) => {
                let c = body[..pos].trim_end_matches('*');
                let rest = &body[pos + 'θ'.len_utf8()..];
                let p = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').and_then(|r| r.parse().ok()).ok_or_else(bad)?
                };
                (if c.is_empty() { "1".to_string() } else { c.to_string() }, p)
            }
        };
        if power >= k.d() {
            return Err(Error::Malformed(format!("power θ^{power} exceeds the basis in `{text}`")));
        }
        let c = elem_from_strings_one(&coef).ok_or_else(bad)?;
        coords[power] += c * BigRational::from_integer(BigInt::from(sign));
    }
    Ok(Elem::from_rationals(&coords))
}

fn elem_from_strings_one(t: &str) -> Option<BigRational> {
    let (n, d) = t.split_once('/').unwrap_or((t, "1"));
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    (d != BigInt::from(0)).then(|| BigRational::new(n, d))
}
