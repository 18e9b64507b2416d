use crate::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Roots of a polynomial with complex coefficients in descending order,
/// `coeffs[0] x^n + ... + coeffs[n]`. Leading zeros are stripped; a constant
/// polynomial is an error. Roots come back sorted lexicographically by
/// (re, im), each polished by a few Newton steps on the original polynomial.
pub fn companion_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::InvalidArgument("polynomial coefficients must be finite".into()));
    }
    let lead = coeffs.iter().position(|c| c.norm() > 0.0);
    let coeffs = match lead {
        Some(k) => &coeffs[k..],
        None => return Err(Error::InvalidArgument("zero polynomial has no roots".into())),
    };
    let n = coeffs.len() - 1;
    if n == 0 {
        return Err(Error::InvalidArgument("constant polynomial has no roots".into()));
    }

    // Trailing zero coefficients peel off as exact roots at the origin.
    let tail_zeros = coeffs.iter().rev().take_while(|c| c.norm() == 0.0).count();
    let reduced = &coeffs[..coeffs.len() - tail_zeros];
    let mut roots: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); tail_zeros];

    let m = reduced.len() - 1;
    if m > 0 {
        let monic: Vec<Complex64> = reduced.iter().map(|c| c / reduced[0]).collect();
        let comp = DMatrix::from_fn(m, m, |i, j| {
            if i == 0 {
                -monic[j + 1]
            } else if i == j + 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let vals = super::eig::eigvals(&comp)?;
        for v in vals {
            roots.push(polish(&monic, v));
        }
    }
    roots.sort_by(|x, y| (x.re, x.im).partial_cmp(&(y.re, y.im)).expect("finite"));
    Ok(roots)
}

/// Evaluate a descending-coefficient polynomial by Horner's rule.
pub fn poly_eval(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

fn polish(monic: &[Complex64], mut x: Complex64) -> Complex64 {
    let n = monic.len() - 1;
    for _ in 0..3 {
        let p = poly_eval(monic, x);
        let dp = {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &c) in monic.iter().enumerate().take(n) {
                let pow = (n - k) as f64;
                acc = acc * x + c * pow;
            }
            acc
        };
        if dp.norm() < 1e-300 {
            break;
        }
        let step = p / dp;
        if step.norm() > 0.1 * (1.0 + x.norm()) {
            break;
        }
        x -= step;
    }
    x
}
