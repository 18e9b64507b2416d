use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

use crate::num::{companion_roots, rk45_final_complex};
use crate::profile::FrontProfile;
use crate::{Error, Result};

type M4 = SMatrix<Complex64, 4, 4>;
type M6 = SMatrix<Complex64, 6, 6>;
type V6 = SVector<Complex64, 6>;

/// Index pairs of the exterior-square basis e_i ^ e_j, i < j.
const IDX: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Controls for a single Evans evaluation and for winding counts built on it.
#[derive(Debug, Clone, Copy)]
pub struct EvansOptions {
    /// Half-length of the integration window; the profile is sampled on
    /// [-l, l] and clamped to its tail values beyond its own grid.
    pub l: f64,
    pub rtol: f64,
    pub atol: f64,
    /// Bisection cap for the argument tracker.
    pub max_depth: usize,
}

impl Default for EvansOptions {
    fn default() -> Self {
        EvansOptions { l: 25.0, rtol: 1e-9, atol: 1e-11, max_depth: 18 }
    }
}

/// Variable coefficients of the weighted eigenvalue system along one profile.
///
/// Conjugating by e^{az} replaces every d/dz with d/dz - a; expanding the
/// powers gives the constants below, and the eigenvalue problem becomes the
/// first-order system w' = A(z, lambda) w in (w, w', w'', w''').
#[derive(Debug, Clone)]
pub struct WeightedCoeffs<'a> {
    profile: &'a FrontProfile,
    pub a: f64,
    a0: f64,
    a1: f64,
    a2: f64,
    a3: f64,
}

impl<'a> WeightedCoeffs<'a> {
    pub fn new(profile: &'a FrontProfile, a: f64) -> Self {
        WeightedCoeffs {
            profile,
            a,
            a0: a * a + a.powi(4),
            a1: 2.0 * a + 4.0 * a.powi(3),
            a2: 6.0 * a * a + 1.0,
            a3: 4.0 * a,
        }
    }

    pub fn speed(&self) -> f64 {
        self.profile.s
    }

    /// Frame coefficients s + 3 phi^2 at the two rest states.
    pub fn end_coefs(&self) -> (f64, f64) {
        let s = self.profile.s;
        (
            s + 3.0 * self.profile.phi_minus * self.profile.phi_minus,
            s + 3.0 * self.profile.phi_plus * self.profile.phi_plus,
        )
    }

    /// System matrix of the weighted linearization at position z.
    pub fn matrix(&self, z: f64, lam: Complex64) -> M4 {
        let p = self.profile.eval_phi(z);
        let dp = self.profile.eval_dphi(z);
        let s = self.profile.s;
        let one = Complex64::new(1.0, 0.0);
        let mut m = M4::zeros();
        m[(0, 1)] = one;
        m[(1, 2)] = one;
        m[(2, 3)] = one;
        m[(3, 0)] = Complex64::new(
            6.0 * p * dp - self.a0 - 3.0 * self.a * p * p - self.a * s,
            0.0,
        ) - lam;
        m[(3, 1)] = Complex64::new(self.a1 + 3.0 * p * p + s, 0.0);
        m[(3, 2)] = Complex64::new(-self.a2, 0.0);
        m[(3, 3)] = Complex64::new(self.a3, 0.0);
        m
    }
}

/// Action of a 4x4 matrix on the exterior square: the generator of
/// t -> exp(tA)x ^ exp(tA)y at t = 0, written in the IDX basis.
pub fn induced(a: &M4) -> M6 {
    let mut b = M6::zeros();
    for (row, &(i, j)) in IDX.iter().enumerate() {
        for (col, &(k, l)) in IDX.iter().enumerate() {
            let mut v = Complex64::new(0.0, 0.0);
            if j == l {
                v += a[(i, k)];
            }
            if j == k {
                v -= a[(i, l)];
            }
            if i == k {
                v += a[(j, l)];
            }
            if i == l {
                v -= a[(j, k)];
            }
            b[(row, col)] = v;
        }
    }
    b
}

/// Decomposable wedge x ^ y in the IDX basis.
pub fn wedge2(x: &[Complex64; 4], y: &[Complex64; 4]) -> V6 {
    V6::from_fn(|r, _| {
        let (i, j) = IDX[r];
        x[i] * y[j] - x[j] * y[i]
    })
}

/// Pairing of two exterior squares into the volume form, i.e. the
/// determinant of the four underlying columns.
pub fn wedge_pair_product(w: &V6, v: &V6) -> Complex64 {
    w[0] * v[5] - w[1] * v[4] + w[2] * v[3] + w[3] * v[2] - w[4] * v[1] + w[5] * v[0]
}

/// Spatial eigenvalues of the weighted system at a rest state with frame
/// coefficient c, split by sign of the real part.
///
/// The unweighted symbol gives nu^4 + nu^2 - c nu + lambda = 0 and the
/// weight shifts every root by +a. Off the essential spectrum the split is
/// two growing and two decaying directions; anything else is reported as a
/// splitting failure rather than guessed around.
#[derive(Debug, Clone, Copy)]
pub struct SpatialSplit {
    pub unstable: [Complex64; 2],
    pub stable: [Complex64; 2],
}

pub fn asymptotic_spatial_eigs(c: f64, a: f64, lam: Complex64) -> Result<SpatialSplit> {
    let one = Complex64::new(1.0, 0.0);
    let roots = companion_roots(&[
        one,
        Complex64::new(0.0, 0.0),
        one,
        Complex64::new(-c, 0.0),
        lam,
    ])?;
    let mut unstable = Vec::with_capacity(2);
    let mut stable = Vec::with_capacity(2);
    for nu in roots {
        let mu = nu + a;
        if mu.re > 0.0 {
            unstable.push(mu);
        } else if mu.re < 0.0 {
            stable.push(mu);
        } else {
            return Err(Error::SplittingFailure(format!(
                "spatial eigenvalue {mu} sits on the imaginary axis"
            )));
        }
    }
    if unstable.len() != 2 || stable.len() != 2 {
        return Err(Error::SplittingFailure(format!(
            "split {}/{} instead of 2/2 at lambda = {lam}",
            unstable.len(),
            stable.len()
        )));
    }
    Ok(SpatialSplit {
        unstable: [unstable[0], unstable[1]],
        stable: [stable[0], stable[1]],
    })
}

/// Wedge of the two Vandermonde eigenvectors (1, mu, mu^2, mu^3) belonging
/// to a pair of spatial eigenvalues, expressed through the symmetric
/// functions e1 = mu1 + mu2 and e2 = mu1 mu2 so conjugate pairs stay exact.
pub fn pair_wedge(pair: [Complex64; 2]) -> V6 {
    let e1 = pair[0] + pair[1];
    let e2 = pair[0] * pair[1];
    V6::from_column_slice(&[
        Complex64::new(1.0, 0.0),
        e1,
        e1 * e1 - e2,
        e2,
        e1 * e2,
        e2 * e2,
    ])
}

/// Evans function at lambda: determinant pairing of the subspace carried in
/// from the left rest state along its growing directions with the one
/// carried in from the right along its decaying directions.
///
/// Both integrations run on the exterior square with the pair-sum growth
/// divided out, which keeps the wedges O(1) without changing zeros.
pub fn evans_eval(co: &WeightedCoeffs, lam: Complex64, opts: &EvansOptions) -> Result<Complex64> {
    let (c_minus, c_plus) = co.end_coefs();
    let left = asymptotic_spatial_eigs(c_minus, co.a, lam)?;
    let right = asymptotic_spatial_eigs(c_plus, co.a, lam)?;

    let run = |pair: [Complex64; 2], from: f64| -> Result<V6> {
        let sigma = pair[0] + pair[1];
        let w0 = pair_wedge(pair);
        let mut rhs = |z: f64, w: &[Complex64], dw: &mut [Complex64]| {
            let b = induced(&co.matrix(z, lam));
            for r in 0..6 {
                let mut acc = -sigma * w[r];
                for c in 0..6 {
                    acc += b[(r, c)] * w[c];
                }
                dw[r] = acc;
            }
        };
        let end = rk45_final_complex(
            &mut rhs,
            (from, 0.0),
            w0.as_slice(),
            opts.rtol,
            opts.atol,
            f64::INFINITY,
        )?;
        Ok(V6::from_column_slice(&end))
    };

    let w = run(left.unstable, -opts.l)?;
    let v = run(right.stable, opts.l)?;
    Ok(wedge_pair_product(&w, &v))
}
