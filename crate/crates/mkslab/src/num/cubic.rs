use crate::{Error, Result};
use num_complex::Complex64;

/// Roots of x^3 + c2 x^2 + c1 x + c0, closed form plus a Newton polish.
///
/// Returns exactly three roots (with multiplicity) sorted lexicographically by
/// (re, im). When the discriminant indicates three real roots they are returned
/// with exactly zero imaginary part.
pub fn solve_cubic_real(c2: f64, c1: f64, c0: f64) -> Result<[Complex64; 3]> {
    if !(c2.is_finite() && c1.is_finite() && c0.is_finite()) {
        return Err(Error::InvalidArgument(
            "cubic coefficients must be finite".into(),
        ));
    }
    // Depressed form t^3 + p t + q with x = t - c2/3.
    let shift = c2 / 3.0;
    let p = c1 - c2 * c2 / 3.0;
    let q = 2.0 * c2.powi(3) / 27.0 - c2 * c1 / 3.0 + c0;
    let disc = -4.0 * p.powi(3) - 27.0 * q * q;

    let mut roots: [Complex64; 3];
    if disc > 0.0 {
        // Three distinct real roots: trigonometric form (p < 0 here).
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        roots = [0, 1, 2].map(|k| {
            let t = m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
            Complex64::new(t - shift, 0.0)
        });
    } else {
        // One real root by Cardano, then the (possibly complex) pair.
        let half_q = q / 2.0;
        let inner = (half_q * half_q + p.powi(3) / 27.0).max(0.0).sqrt();
        // Pick the cube-root branch that avoids cancellation.
        let u = if half_q >= 0.0 {
            -(half_q + inner).cbrt()
        } else {
            (-half_q + inner).cbrt()
        };
        let v = if u != 0.0 { -p / (3.0 * u) } else { 0.0 };
        let t_real = u + v;
        let x1 = t_real - shift;
        // Remaining quadratic x^2 + (c2 + x1) x + (c1 + x1 (c2 + x1)) = 0.
        let b = c2 + x1;
        let c = c1 + x1 * b;
        let quad_disc = b * b - 4.0 * c;
        if quad_disc >= 0.0 {
            let sq = quad_disc.sqrt();
            let r1 = (-b + sq) / 2.0;
            let r2 = (-b - sq) / 2.0;
            roots = [
                Complex64::new(x1, 0.0),
                Complex64::new(r1, 0.0),
                Complex64::new(r2, 0.0),
            ];
        } else {
            let re = -b / 2.0;
            let im = (-quad_disc).sqrt() / 2.0;
            roots = [
                Complex64::new(x1, 0.0),
                Complex64::new(re, im),
                Complex64::new(re, -im),
            ];
        }
    }

    // Newton polish on the original cubic; keeps residuals tight near repeated
    // roots where the closed form loses digits.
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let f = ((*r + c2) * *r + c1) * *r + c0;
            let df = (*r * 3.0 + 2.0 * c2) * *r + c1;
            if df.norm() < 1e-300 {
                break;
            }
            let step = f / df;
            if !(step.norm() < 1.0 + r.norm()) {
                break;
            }
            *r -= step;
            if step.norm() < 1e-14 * (1.0 + r.norm()) {
                break;
            }
        }
    }
    // Purely real polishing can leave tiny imaginary dust on real roots.
    for r in roots.iter_mut() {
        if r.im.abs() < 1e-12 * (1.0 + r.re.abs()) {
            r.im = 0.0;
        }
    }
    roots.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .expect("finite roots")
    });
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(r: Complex64, c2: f64, c1: f64, c0: f64) -> f64 {
        (((r + c2) * r + c1) * r + c0).norm()
    }

    #[test]
    fn mu_zero_equilibria() {
        let s = -2.388;
        let roots = solve_cubic_real(0.0, s, 0.0).unwrap();
        let sq = (-s).sqrt();
        assert!((roots[0].re + sq).abs() < 1e-12 && roots[0].im == 0.0);
        assert!(roots[1].norm() < 1e-12);
        assert!((roots[2].re - sq).abs() < 1e-12 && roots[2].im == 0.0);
    }

    #[test]
    fn one_real_and_conjugate_pair() {
        let roots = solve_cubic_real(0.0, 0.0, 1.0).unwrap();
        let real: Vec<_> = roots.iter().filter(|r| r.im == 0.0).collect();
        assert_eq!(real.len(), 1);
        assert!((real[0].re + 1.0).abs() < 1e-12);
        let pair: Vec<_> = roots.iter().filter(|r| r.im != 0.0).collect();
        assert_eq!(pair.len(), 2);
        assert!((pair[0].conj() - pair[1]).norm() < 1e-12);
    }

    #[test]
    fn three_real_roots_case() {
        // x^3 - 4.69 x + 1: sign changes on a grid confirm three real roots.
        let (c2, c1, c0) = (0.0, -4.69, 1.0);
        let f = |x: f64| x.powi(3) + c1 * x + c0;
        let mut changes = 0;
        let mut prev = f(-4.0);
        let mut x = -4.0;
        while x < 4.0 {
            x += 0.01;
            let cur = f(x);
            if prev.signum() != cur.signum() {
                changes += 1;
            }
            prev = cur;
        }
        assert_eq!(changes, 3);
        let roots = solve_cubic_real(c2, c1, c0).unwrap();
        for r in &roots {
            assert_eq!(r.im, 0.0);
            assert!(residual(*r, c2, c1, c0) < 1e-10 * (1.0 + r.norm().powi(3)));
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(solve_cubic_real(f64::NAN, 0.0, 0.0).is_err());
        assert!(solve_cubic_real(0.0, f64::INFINITY, 0.0).is_err());
    }

    #[test]
    fn repeated_root() {
        // (x - 1)^2 (x + 2) = x^3 - 3x + 2
        let roots = solve_cubic_real(0.0, -3.0, 2.0).unwrap();
        for r in &roots {
            assert!(residual(*r, 0.0, -3.0, 2.0) < 1e-10 * (1.0 + r.norm().powi(3)));
        }
        assert!((roots[0].re + 2.0).abs() < 1e-7);
    }
}
