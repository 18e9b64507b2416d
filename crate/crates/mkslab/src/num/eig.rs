use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Eigenvalues of a dense complex matrix, sorted lexicographically by
/// (re, im). Uses the complex Schur form; the triangular diagonal carries the
/// eigenvalues directly.
pub fn eigvals(a: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let (_, t) = schur(a)?;
    let mut vals: Vec<Complex64> = (0..t.nrows()).map(|i| t[(i, i)]).collect();
    vals.sort_by(|x, y| (x.re, x.im).partial_cmp(&(y.re, y.im)).expect("finite"));
    Ok(vals)
}

/// Full eigendecomposition of a dense complex matrix.
///
/// Returns eigenvalues in deterministic lexicographic (re, im) order together
/// with unit-norm eigenvectors as matching matrix columns. Eigenvectors come
/// from back-substitution on the Schur triangle, so each pair satisfies
/// ||A v - lambda v|| <= O(eps) ||A||.
pub fn eig_dense(a: &DMatrix<Complex64>) -> Result<(Vec<Complex64>, DMatrix<Complex64>)> {
    let n = a.nrows();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let (q, t) = schur(a)?;
    let scale = t
        .iter()
        .map(|c| c.norm())
        .fold(0.0_f64, f64::max)
        .max(1e-300);

    // For each Schur eigenvalue t[k,k], solve the upper-triangular system
    // (T - lambda I) u = 0 with u[k] = 1, u[j] = 0 for j > k, then map back
    // through Q. Near-repeated eigenvalues get a protected denominator, the
    // usual triangular-solve safeguard.
    let mut vecs = DMatrix::<Complex64>::zeros(n, n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (t[(i, i)], t[(j, j)]);
        (a.re, a.im).partial_cmp(&(b.re, b.im)).expect("finite")
    });
    for (col, &k) in order.iter().enumerate() {
        let lambda = t[(k, k)];
        let mut u = DVector::<Complex64>::zeros(n);
        u[k] = Complex64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for m in (j + 1)..=k {
                s += t[(j, m)] * u[m];
            }
            let mut denom = t[(j, j)] - lambda;
            if denom.norm() < 1e-13 * scale {
                denom = Complex64::new(1e-13 * scale, 0.0);
            }
            u[j] = -s / denom;
        }
        let mut v = &q * u;
        let norm = v.norm();
        if norm > 0.0 {
            v /= Complex64::new(norm, 0.0);
        }
        // Deterministic phase: make the largest-modulus entry real positive.
        let mut imax = 0;
        for i in 0..n {
            if v[i].norm() > v[imax].norm() {
                imax = i;
            }
        }
        if v[imax].norm() > 0.0 {
            let phase = v[imax] / Complex64::new(v[imax].norm(), 0.0);
            v /= phase;
        }
        vecs.set_column(col, &v);
    }
    let vals = order.iter().map(|&k| t[(k, k)]).collect();
    Ok((vals, vecs))
}

fn schur(a: &DMatrix<Complex64>) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>)> {
    if a.nrows() != a.ncols() {
        return Err(Error::InvalidArgument("matrix must be square".into()));
    }
    if a.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::InvalidArgument("matrix entries must be finite".into()));
    }
    nalgebra::linalg::Schur::try_new(a.clone(), 1e-14, 0)
        .map(|s| {
            let (q, t) = s.unpack();
            (q, t)
        })
        .ok_or_else(|| Error::EigFailure("Schur iteration did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(rows: usize, cols: usize, data: &[(f64, f64)]) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(
            rows,
            cols,
            &data.iter().map(|&(r, i)| Complex64::new(r, i)).collect::<Vec<_>>(),
        )
    }

    #[test]
    fn identity_eigs() {
        let a = DMatrix::<Complex64>::identity(4, 4);
        let vals = eigvals(&a).unwrap();
        for v in vals {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn diagonal_eigs_sorted() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(-3.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]));
        let vals = eigvals(&a).unwrap();
        assert!((vals[0] - Complex64::new(-3.0, 0.0)).norm() < 1e-12);
        assert!((vals[1] - Complex64::new(0.0, 0.0)).norm() < 1e-12);
        assert!((vals[2] - Complex64::new(0.0, 2.0)).norm() < 1e-12);
        assert!((vals[3] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn companion_of_quartic() {
        // x^4 - 1 -> eigenvalues {1, -1, i, -i}
        let a = cm(
            4,
            4,
            &[
                (0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0),
                (1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0),
                (0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0),
                (0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.0, 0.0),
            ],
        );
        let (vals, vecs) = eig_dense(&a).unwrap();
        let expect = [
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(1.0, 0.0),
        ];
        for (v, e) in vals.iter().zip(expect.iter()) {
            assert!((v - e).norm() < 1e-10, "{v} vs {e}");
        }
        let anorm = a.iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
        for (i, v) in vals.iter().enumerate() {
            let col = vecs.column(i).clone_owned();
            let r = (&a * &col - col * *v).norm();
            assert!(r < 1e-8 * anorm.max(1.0), "pair {i} residual {r}");
        }
    }

    #[test]
    fn reconstruction_on_random_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..5 {
            let n = 20;
            let a = DMatrix::from_fn(n, n, |_, _| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let (vals, vecs) = eig_dense(&a).unwrap();
            let anorm = a.norm();
            for (i, v) in vals.iter().enumerate() {
                let col = vecs.column(i).clone_owned();
                let r = (&a * &col - col * *v).norm();
                assert!(r < 1e-6 * anorm, "residual {r} vs norm {anorm}");
            }
        }
    }
}
