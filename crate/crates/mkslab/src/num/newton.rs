use super::Tolerances;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Outcome of a damped Newton iteration. `residuals` holds the sup-norm of
/// the residual after each iteration, so its length is the iteration count.
/// `converged` is false when the budget ran out; the caller decides whether
/// that is fatal.
#[derive(Debug, Clone)]
pub struct NewtonResult {
    pub x: Vec<f64>,
    pub residuals: Vec<f64>,
    pub converged: bool,
}

/// Damped Newton iteration for a dense square system f(x) = 0.
///
/// Each step solves J dx = -f and backtracks over step fractions
/// 1, 1/2, 1/4, 1/8, keeping the first that reduces the residual (the full
/// step is kept as a last resort, which lets the iteration escape shallow
/// plateaus). Stops when the residual sup-norm drops below `abs_tol` or the
/// step is below `rel_tol` relative to the iterate.
pub fn newton_solve<F, J>(mut f: F, mut jac: J, x0: &[f64], tol: &Tolerances) -> Result<NewtonResult>
where
    F: FnMut(&[f64]) -> Vec<f64>,
    J: FnMut(&[f64]) -> DMatrix<f64>,
{
    tol.validate()?;
    let n = x0.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty initial guess".into()));
    }
    let mut x = x0.to_vec();
    let mut r = f(&x);
    if r.len() != n {
        return Err(Error::InvalidArgument(format!(
            "residual arity {} does not match state arity {n}",
            r.len()
        )));
    }
    let mut residuals = Vec::new();
    let mut rnorm = sup(&r);

    for _ in 0..tol.max_iter {
        if rnorm < tol.abs_tol {
            residuals.push(rnorm);
            return Ok(NewtonResult { x, residuals, converged: true });
        }
        let j = jac(&x);
        if j.nrows() != n || j.ncols() != n {
            return Err(Error::InvalidArgument("jacobian shape mismatch".into()));
        }
        let lu = j.lu();
        let rhs = DVector::from_iterator(n, r.iter().map(|v| -v));
        let dx = lu
            .solve(&rhs)
            .ok_or_else(|| Error::SingularJacobian("newton step".into()))?;
        if dx.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularJacobian("non-finite newton step".into()));
        }

        let mut best: Option<(Vec<f64>, Vec<f64>, f64)> = None;
        for lam in [1.0, 0.5, 0.25, 0.125] {
            let xt: Vec<f64> = x.iter().zip(dx.iter()).map(|(xi, di)| xi + lam * di).collect();
            let rt = f(&xt);
            let rn = sup(&rt);
            if rn.is_finite() && rn < rnorm {
                best = Some((xt, rt, rn));
                break;
            }
            if lam == 1.0 && rn.is_finite() {
                best = Some((xt, rt, rn));
            }
        }
        let (xt, rt, rn) = match best {
            Some(b) => b,
            None => return Err(Error::SingularJacobian("residual not finite along step".into())),
        };

        let step = dx.amax();
        let xscale = 1.0 + x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        x = xt;
        r = rt;
        rnorm = rn;
        residuals.push(rnorm);
        if step < tol.rel_tol * xscale && rnorm < tol.abs_tol.max(1e3 * f64::EPSILON * xscale) {
            return Ok(NewtonResult { x, residuals, converged: true });
        }
    }
    let converged = rnorm < tol.abs_tol;
    Ok(NewtonResult { x, residuals, converged })
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}
