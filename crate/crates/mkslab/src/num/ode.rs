use crate::{Error, Result};
use num_complex::Complex64;

/// Accepted-step record of an adaptive integration. `z` runs monotonically
/// from the start to the end of the span (decreasing when integrating
/// backwards); `states[i]` is the state at `z[i]` and every row has the same
/// length as the initial condition.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub z: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn last(&self) -> &[f64] {
        self.states.last().expect("trajectory has at least the initial point")
    }

    /// Piecewise-linear sample at a point inside the span. Clamps to the
    /// nearest endpoint outside it.
    pub fn sample(&self, z: f64) -> Vec<f64> {
        let n = self.z.len();
        if n == 1 {
            return self.states[0].clone();
        }
        let fwd = self.z[n - 1] >= self.z[0];
        let pos = |zz: f64| if fwd { zz } else { -zz };
        let zq = pos(z);
        if zq <= pos(self.z[0]) {
            return self.states[0].clone();
        }
        if zq >= pos(self.z[n - 1]) {
            return self.states[n - 1].clone();
        }
        let mut lo = 0;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if pos(self.z[mid]) <= zq {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = (z - self.z[lo]) / (self.z[hi] - self.z[lo]);
        self.states[lo]
            .iter()
            .zip(self.states[hi].iter())
            .map(|(a, b)| a + t * (b - a))
            .collect()
    }
}

/// Integrate y' = f(z, y) over `span` with a Dormand-Prince 5(4) stepper,
/// recording every accepted step. `f` writes the derivative into its third
/// argument. The span may run in either direction.
pub fn integrate_rk45<F>(
    mut f: F,
    span: (f64, f64),
    y0: &[f64],
    rtol: f64,
    atol: f64,
    max_step: f64,
) -> Result<Trajectory>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let mut traj = Trajectory { z: vec![span.0], states: vec![y0.to_vec()] };
    let rec = |z: f64, y: &[f64], t: &mut Trajectory| {
        t.z.push(z);
        t.states.push(y.to_vec());
    };
    dopri5(&mut f, span, y0, rtol, atol, max_step, &mut traj, rec)?;
    Ok(traj)
}

/// Endpoint-only variant of [`integrate_rk45`] for when the path does not
/// matter, just the state at the far end.
pub fn rk45_final<F>(
    mut f: F,
    span: (f64, f64),
    y0: &[f64],
    rtol: f64,
    atol: f64,
    max_step: f64,
) -> Result<Vec<f64>>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    dopri5(&mut f, span, y0, rtol, atol, max_step, &mut (), |_, _, _| {})
}

/// Endpoint-only integration of a complex-valued system, used for the Evans
/// function where states live on the exterior power of C^4.
pub fn rk45_final_complex<F>(
    mut f: F,
    span: (f64, f64),
    y0: &[Complex64],
    rtol: f64,
    atol: f64,
    max_step: f64,
) -> Result<Vec<Complex64>>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
{
    dopri5(&mut f, span, y0, rtol, atol, max_step, &mut (), |_, _, _| {})
}

trait OdeScalar:
    Copy
    + Default
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<f64, Output = Self>
    + std::ops::AddAssign
{
    fn sq_mag(self) -> f64;
}

impl OdeScalar for f64 {
    fn sq_mag(self) -> f64 {
        self * self
    }
}

impl OdeScalar for Complex64 {
    fn sq_mag(self) -> f64 {
        self.norm_sqr()
    }
}

const STAGE_C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const STAGE_A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Difference between the 5th and embedded 4th order weights.
const ERR_W: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[allow(clippy::too_many_arguments)]
fn dopri5<T, F, R, S>(
    f: &mut F,
    span: (f64, f64),
    y0: &[T],
    rtol: f64,
    atol: f64,
    max_step: f64,
    sink: &mut S,
    mut record: R,
) -> Result<Vec<T>>
where
    T: OdeScalar,
    F: FnMut(f64, &[T], &mut [T]),
    R: FnMut(f64, &[T], &mut S),
{
    let (z0, z1) = span;
    if !z0.is_finite() || !z1.is_finite() {
        return Err(Error::InvalidArgument("integration span must be finite".into()));
    }
    if !(rtol > 0.0) || !(atol > 0.0) || !(max_step > 0.0) {
        return Err(Error::InvalidArgument("tolerances and max_step must be positive".into()));
    }
    let n = y0.len();
    if y0.iter().any(|x| !x.sq_mag().is_finite()) {
        return Err(Error::InvalidArgument("initial state must be finite".into()));
    }
    let mut y = y0.to_vec();
    if z1 == z0 {
        return Ok(y);
    }
    let dir = if z1 > z0 { 1.0 } else { -1.0 };
    let span_len = (z1 - z0).abs();

    let mut k: Vec<Vec<T>> = vec![vec![T::default(); n]; 7];
    let mut ystage = vec![T::default(); n];
    let mut ynew = vec![T::default(); n];

    f(z0, &y, &mut k[0]);
    let mut h = initial_step(f, z0, &y, &k[0].clone(), dir, rtol, atol)
        .min(max_step)
        .min(span_len);
    let mut z = z0;
    let mut steps: u64 = 0;

    while (z1 - z) * dir > 0.0 {
        steps += 1;
        if steps > 50_000_000 {
            return Err(Error::IntegrationFailure { z });
        }
        h = h.min((z1 - z).abs()).min(max_step);
        if h < 1e-14 * span_len.max(1.0) {
            return Err(Error::IntegrationFailure { z });
        }
        let hs = h * dir;

        for s in 1..7 {
            for i in 0..n {
                let mut acc = y[i];
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = STAGE_A[s][j];
                    if a != 0.0 {
                        acc += kj[i] * (a * hs);
                    }
                }
                ystage[i] = acc;
            }
            let zq = z + STAGE_C[s] * hs;
            let (_, tail) = k.split_at_mut(s);
            f(zq, &ystage, &mut tail[0]);
        }
        // Stage 7 is evaluated at the 5th-order solution itself (FSAL), so
        // ystage now holds y_new.
        ynew.copy_from_slice(&ystage);

        let mut err_norm_sq = 0.0;
        for i in 0..n {
            let mut e = T::default();
            for (j, kj) in k.iter().enumerate() {
                if ERR_W[j] != 0.0 {
                    e += kj[i] * (ERR_W[j] * hs);
                }
            }
            let scale = atol + rtol * y[i].sq_mag().sqrt().max(ynew[i].sq_mag().sqrt());
            err_norm_sq += e.sq_mag() / (scale * scale);
        }
        let err_norm = (err_norm_sq / n as f64).sqrt();

        if !err_norm.is_finite() {
            h *= 0.25;
            continue;
        }
        if err_norm <= 1.0 {
            z += hs;
            y.copy_from_slice(&ynew);
            record(z, &y, sink);
            k.swap(0, 6);
            let factor = if err_norm == 0.0 {
                10.0
            } else {
                (0.9 * err_norm.powf(-0.2)).clamp(0.2, 10.0)
            };
            h *= factor;
        } else {
            h *= (0.9 * err_norm.powf(-0.2)).clamp(0.2, 1.0);
        }
    }
    Ok(y)
}

fn initial_step<T, F>(
    f: &mut F,
    z0: f64,
    y0: &[T],
    f0: &[T],
    dir: f64,
    rtol: f64,
    atol: f64,
) -> f64
where
    T: OdeScalar,
    F: FnMut(f64, &[T], &mut [T]),
{
    let n = y0.len();
    let scaled = |v: &[T], w: &[T]| -> f64 {
        let s: f64 = v
            .iter()
            .zip(w.iter())
            .map(|(x, yref)| {
                let sc = atol + rtol * yref.sq_mag().sqrt();
                x.sq_mag() / (sc * sc)
            })
            .sum();
        (s / n.max(1) as f64).sqrt()
    };
    let d0 = scaled(y0, y0);
    let d1 = scaled(f0, y0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1: Vec<T> = y0.iter().zip(f0.iter()).map(|(&y, &fy)| y + fy * (h0 * dir)).collect();
    let mut f1 = vec![T::default(); n];
    f(z0 + h0 * dir, &y1, &mut f1);
    let diff: Vec<T> = f1.iter().zip(f0.iter()).map(|(&a, &b)| a - b).collect();
    let d2 = scaled(&diff, y0) / h0;
    let h1 = if d1 <= 1e-15 && d2 <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1)
}
