use crate::num::solve_cubic_real;
use crate::{Error, Result};
use num_complex::Complex64;

/// A rest state phi of the profile equation, a real root of
/// phi^3 + s phi + mu = 0. `coef` is c = s + 3 phi^2, the only number the
/// frame linearization depends on; the equilibrium is hyperbolic exactly when
/// c is nonzero.
#[derive(Debug, Clone, Copy)]
pub struct EquilibriumPoint {
    pub phi: f64,
    pub coef: f64,
    pub hyperbolic: bool,
}

/// All real equilibria at the given speed and flux offset, sorted
/// increasingly. A connecting front needs three of them; near the fold two of
/// them collide and the list shrinks.
pub fn equilibria(s: f64, mu: f64) -> Result<Vec<EquilibriumPoint>> {
    let roots = solve_cubic_real(0.0, s, mu)?;
    let mut real: Vec<f64> = roots
        .iter()
        .filter(|r| r.im.abs() < 1e-9 * (1.0 + r.re.abs()))
        .map(|r| r.re)
        .collect();
    real.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    real.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * (1.0 + a.abs()));
    Ok(real
        .into_iter()
        .map(|phi| {
            let coef = s + 3.0 * phi * phi;
            EquilibriumPoint { phi, coef, hyperbolic: coef.abs() > 1e-10 }
        })
        .collect())
}

/// The outer pair (phi_minus, phi_plus) a front connects. Errors when the
/// cubic has fewer than three real roots, which is how continuation discovers
/// the fold.
pub fn outer_equilibria(s: f64, mu: f64) -> Result<(EquilibriumPoint, EquilibriumPoint)> {
    let eqs = equilibria(s, mu)?;
    if eqs.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "only {} equilibria at s={s}, mu={mu}; no front connection",
            eqs.len()
        )));
    }
    Ok((eqs[0], *eqs.last().expect("nonempty")))
}

/// Real root of lambda^3 + lambda = c. The cubic is strictly increasing, so
/// this root is unique and has the sign of c.
pub fn frame_rate(c: f64) -> Result<f64> {
    let roots = solve_cubic_real(0.0, 1.0, -c)?;
    roots
        .iter()
        .find(|r| r.im.abs() < 1e-9 * (1.0 + r.re.abs()))
        .map(|r| r.re)
        .ok_or_else(|| Error::InvalidArgument(format!("no real frame rate for c={c}")))
}

/// Eigenstructure of the frame Jacobian J = [[0,1,0],[0,0,1],[c,-1,0]] at an
/// equilibrium, in closed form so it varies smoothly with s.
///
/// The eigenvalues solve nu^3 + nu = c: one real root `lambda1` plus the
/// conjugate pair nu = (-lambda1 +- i sqrt(4 + 3 lambda1^2)) / 2. Right
/// eigenvectors are v(nu) = (1, nu, nu^2) and left ones w(nu) =
/// (nu^2 + 1, nu, 1); the left vectors are what projective boundary
/// conditions dot against, since w(nu) annihilates every v(nu') with
/// nu' != nu. For c > 0 the real direction is the unstable one and the
/// spiral plane is stable.
#[derive(Debug, Clone)]
pub struct Linearization {
    pub coef: f64,
    pub lambda1: f64,
    pub spiral: Complex64,
    pub right_real: [f64; 3],
    pub left_real: [f64; 3],
    pub left_spiral: ([f64; 3], [f64; 3]),
}

pub fn linearize(s: f64, phi: f64) -> Result<Linearization> {
    let coef = s + 3.0 * phi * phi;
    if coef.abs() < 1e-12 {
        return Err(Error::DegenerateEquilibrium { coef });
    }
    let lambda1 = frame_rate(coef)?;
    let spiral = Complex64::new(-lambda1 / 2.0, (4.0 + 3.0 * lambda1 * lambda1).sqrt() / 2.0);

    let mut right_real = [1.0, lambda1, lambda1 * lambda1];
    normalize(&mut right_real);
    if right_real[0] < 0.0 {
        for v in right_real.iter_mut() {
            *v = -*v;
        }
    }
    let mut left_real = [lambda1 * lambda1 + 1.0, lambda1, 1.0];
    normalize(&mut left_real);

    let w = [spiral * spiral + 1.0, spiral, Complex64::new(1.0, 0.0)];
    let mut ws1 = [w[0].re, w[1].re, w[2].re];
    let mut ws2 = [w[0].im, w[1].im, w[2].im];
    normalize(&mut ws1);
    normalize(&mut ws2);

    Ok(Linearization { coef, lambda1, spiral, right_real, left_real, left_spiral: (ws1, ws2) })
}

fn normalize(v: &mut [f64; 3]) {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_equilibria() {
        // At mu = 0 the rest states are 0 and +-sqrt(-s).
        let s = -2.388;
        let eqs = equilibria(s, 0.0).unwrap();
        assert_eq!(eqs.len(), 3);
        let r = (-s).sqrt();
        assert!((eqs[0].phi + r).abs() < 1e-12);
        assert!(eqs[1].phi.abs() < 1e-12);
        assert!((eqs[2].phi - r).abs() < 1e-12);
        // Outer coefficient is -2s > 0, middle is s < 0.
        assert!((eqs[0].coef + 2.0 * s).abs() < 1e-10);
        assert!((eqs[1].coef - s).abs() < 1e-12);
        assert!(eqs.iter().all(|e| e.hyperbolic));
    }

    #[test]
    fn fold_loses_outer_pair() {
        // Past the fold only one real root remains.
        let eqs = equilibria(-1.0, 2.0).unwrap();
        assert_eq!(eqs.len(), 1);
        assert!(outer_equilibria(-1.0, 2.0).is_err());
    }

    #[test]
    fn frame_rate_solves_cubic() {
        for c in [4.776, 0.3, -1.7, 9.38] {
            let l1 = frame_rate(c).unwrap();
            assert!((l1.powi(3) + l1 - c).abs() < 1e-10);
            assert_eq!(l1 > 0.0, c > 0.0);
        }
    }

    #[test]
    fn eigenpairs_satisfy_frame_jacobian() {
        let lin = linearize(-2.388, (2.388f64).sqrt()).unwrap();
        let c = lin.coef;
        let jv = |v: [f64; 3]| [v[1], v[2], c * v[0] - v[1]];
        // Right: J v = lambda1 v.
        let r = jv(lin.right_real);
        for i in 0..3 {
            assert!((r[i] - lin.lambda1 * lin.right_real[i]).abs() < 1e-10);
        }
        // Left: w J = lambda1 w.
        let w = lin.left_real;
        let wj = [c * w[2], w[0] - w[2], w[1]];
        for i in 0..3 {
            assert!((wj[i] - lin.lambda1 * w[i]).abs() < 1e-10);
        }
        // Spiral eigenvalue solves the same cubic.
        let nu = lin.spiral;
        assert!((nu * nu * nu + nu - Complex64::new(c, 0.0)).norm() < 1e-10);
        assert!(nu.im > 0.0);
    }

    #[test]
    fn left_spiral_annihilates_real_direction_pairing() {
        // w(nu) . v(nu') vanishes for nu != nu'; check against the real
        // right eigenvector with the un-normalized closed forms.
        let lin = linearize(-3.7, 1.8).unwrap();
        let nu = lin.spiral;
        let l1 = lin.lambda1;
        let w = [nu * nu + 1.0, nu, Complex64::new(1.0, 0.0)];
        let v = [
            Complex64::new(1.0, 0.0),
            Complex64::new(l1, 0.0),
            Complex64::new(l1 * l1, 0.0),
        ];
        let dot = w[0] * v[0] + w[1] * v[1] + w[2] * v[2];
        // (nu^2 + 1) + nu l1 + l1^2 = 0 because nu and l1 both solve
        // x^3 + x = c and the quadratic factor is x^2 + l1 x + (1 + l1^2).
        assert!(dot.norm() < 1e-9, "pairing {dot}");
    }

    #[test]
    fn degenerate_coefficient_is_rejected() {
        let e = linearize(-3.0, 1.0);
        assert!(matches!(e, Err(Error::DegenerateEquilibrium { .. })));
    }
}
