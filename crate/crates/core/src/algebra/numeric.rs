//! Complex roots of integer polynomials.

use num::complex::Complex64;

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn horner_deriv(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let n = coeffs.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for k in (1..n).rev() {
        acc = acc * z + coeffs[k] * k as f64;
    }
    acc
}

/// All complex roots of a monic polynomial (ascending coefficients), sorted
/// by decreasing imaginary part, then decreasing real part.
pub fn roots(poly: &[i64]) -> Vec<Complex64> {
    let c: Vec<Complex64> = poly.iter().map(|&x| Complex64::new(x as f64, 0.0)).collect();
    complex_roots(&c)
}

/// Roots of a monic polynomial with complex coefficients, same ordering.
pub fn complex_roots(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    if n == 0 {
        return vec![];
    }
    let bound = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.norm()));
    let seed = Complex64::new(0.4, 0.9);
    let fujiwara = (0..n)
        .map(|k| c[k].norm().powf(1.0 / (n - k) as f64))
        .fold(0.0f64, f64::max);
    let radius = if fujiwara > 2.0 { 2.0 * fujiwara } else { bound.min(2.0) };
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = horner(c, z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius.max(1.0) {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let d = horner_deriv(c, *r);
            if d.norm() > 1e-300 {
                *r -= horner(c, *r) / d;
            }
        }
        if r.im.abs() < 1e-12 {
            r.im = 0.0;
        }
    }
    z.sort_by(|a, b| {
        b.im.partial_cmp(&a.im)
            .unwrap()
            .then(b.re.partial_cmp(&a.re).unwrap())
    });
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_and_cyclotomic_roots() {
        let r = roots(&[1, 0, 1]);
        assert!((r[0] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        assert!((r[1] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        let r = roots(&[1, 1, 1, 1, 1]);
        for z in &r {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!((z.powu(5) - 1.0).norm() < 1e-10);
        }
        let r = roots(&[-2, 0, 1]);
        assert!((r[0].re - 2f64.sqrt()).abs() < 1e-12);
        let r = roots(&[-1, 1]);
        assert!((r[0].re - 1.0).abs() < 1e-14);
    }
}
