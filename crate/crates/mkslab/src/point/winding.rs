use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::profile::FrontProfile;
use crate::{Error, Result};

use super::evans::{evans_eval, EvansOptions, WeightedCoeffs};

/// Closed contours the argument tracker knows how to lay out.
#[derive(Debug, Clone, Copy)]
pub enum ContourSpec {
    Circle { center: Complex64, radius: f64, n: usize },
    /// Boundary of { Re lambda >= -eta } cut by a circle of the given
    /// radius: a right half-circle arc followed by the vertical chord.
    HalfDisk { eta: f64, radius: f64, n_arc: usize, n_seg: usize },
}

impl ContourSpec {
    pub fn circle(center: Complex64, radius: f64) -> Self {
        ContourSpec::Circle { center, radius, n: 24 }
    }

    pub fn half_disk(eta: f64, radius: f64) -> Self {
        ContourSpec::HalfDisk { eta, radius, n_arc: 40, n_seg: 16 }
    }

    /// Vertex list, traversed once; the closing edge back to the first
    /// vertex is implicit.
    pub fn points(&self) -> Vec<Complex64> {
        match *self {
            ContourSpec::Circle { center, radius, n } => (0..n)
                .map(|j| {
                    let th = 2.0 * PI * j as f64 / n as f64;
                    center + radius * Complex64::new(th.cos(), th.sin())
                })
                .collect(),
            ContourSpec::HalfDisk { eta, radius, n_arc, n_seg } => {
                let mut pts = Vec::with_capacity(n_arc + n_seg);
                for j in 0..n_arc {
                    let th = -PI / 2.0 + PI * j as f64 / (n_arc - 1) as f64;
                    pts.push(Complex64::new(-eta, 0.0) + radius * Complex64::new(th.cos(), th.sin()));
                }
                // Interior chord points only; both endpoints already sit on
                // the arc.
                for j in 1..=n_seg {
                    let y = radius - 2.0 * radius * j as f64 / (n_seg + 1) as f64;
                    pts.push(Complex64::new(-eta, y));
                }
                pts
            }
        }
    }
}

/// Outcome of one argument-principle count.
#[derive(Debug, Clone, Copy)]
pub struct WindingCount {
    /// Accumulated argument change over 2 pi, before rounding.
    pub raw: f64,
    pub winding: i64,
    /// Distinct Evans evaluations spent, refinements included.
    pub evaluations: usize,
}

fn memo_key(lam: Complex64) -> (i64, i64) {
    ((lam.re * 1e11).round() as i64, (lam.im * 1e11).round() as i64)
}

/// Winding number of the Evans function around a contour.
///
/// Consecutive values are bisected until each argument step is below pi/2,
/// so the count cannot silently skip a sign excursion; values are memoized
/// because refinement revisits segment endpoints.
pub fn winding_number(
    co: &WeightedCoeffs,
    contour: &ContourSpec,
    opts: &EvansOptions,
) -> Result<WindingCount> {
    let pts = contour.points();
    if pts.len() < 3 {
        return Err(Error::ContourDegenerate("contour needs at least 3 vertices".into()));
    }

    // Seed the cache with the contour vertices, evaluated in parallel.
    let seeded: Result<Vec<(Complex64, Complex64)>> = pts
        .par_iter()
        .map(|&lam| evans_eval(co, lam, opts).map(|d| (lam, d)))
        .collect();
    let mut cache: HashMap<(i64, i64), Complex64> = HashMap::new();
    for (lam, d) in seeded? {
        if d.norm() == 0.0 {
            return Err(Error::ContourDegenerate(format!(
                "evans function vanishes on the contour at {lam}"
            )));
        }
        cache.insert(memo_key(lam), d);
    }

    let mut evals = cache.len();
    let value = |lam: Complex64, cache: &mut HashMap<(i64, i64), Complex64>,
                     evals: &mut usize|
     -> Result<Complex64> {
        if let Some(&d) = cache.get(&memo_key(lam)) {
            return Ok(d);
        }
        let d = evans_eval(co, lam, opts)?;
        if d.norm() == 0.0 {
            return Err(Error::ContourDegenerate(format!(
                "evans function vanishes on the contour at {lam}"
            )));
        }
        cache.insert(memo_key(lam), d);
        *evals += 1;
        Ok(d)
    };

    let mut total = 0.0_f64;
    let n = pts.len();
    for i in 0..n {
        // Depth-first refinement keeps segments in traversal order, so the
        // argument sums exactly once per resolved piece.
        let mut stack = vec![(pts[i], pts[(i + 1) % n], 0usize)];
        while let Some((a, b, depth)) = stack.pop() {
            let da = value(a, &mut cache, &mut evals)?;
            let db = value(b, &mut cache, &mut evals)?;
            let step = (db / da).arg();
            if step.abs() > PI / 2.0 {
                if depth >= opts.max_depth {
                    return Err(Error::ContourDegenerate(format!(
                        "argument step unresolved after {} bisections near {a}",
                        opts.max_depth
                    )));
                }
                let mid = 0.5 * (a + b);
                stack.push((mid, b, depth + 1));
                stack.push((a, mid, depth + 1));
            } else {
                total += step;
            }
        }
    }

    let raw = total / (2.0 * PI);
    let winding = raw.round();
    if (raw - winding).abs() > 0.1 {
        return Err(Error::ContourDegenerate(format!(
            "argument change {raw:.4} turns is not close to an integer"
        )));
    }
    Ok(WindingCount { raw, winding: winding as i64, evaluations: evals })
}

/// One row of the point-spectrum survey: count roots inside the half-disk
/// and separately inside a small circle hugging the origin, then check that
/// everything found is the lone translation zero.
#[derive(Debug, Clone, Copy)]
pub struct ObservationReport {
    pub mu: f64,
    pub s: f64,
    pub a: f64,
    pub eta: f64,
    pub radius: f64,
    pub winding_half_disk: i64,
    pub winding_origin: i64,
    pub raw_half_disk: f64,
    pub raw_origin: f64,
    /// |D(0)|, which sits on the translation zero.
    pub origin_value: f64,
    /// Median |D| over the origin-circle vertices, a same-scale yardstick
    /// for origin_value.
    pub origin_scale: f64,
    pub evaluations: usize,
    pub pass: bool,
}

/// Default origin-hugging circle: radius 0.01 centered a touch left of 0 so
/// the zero eigenvalue is strictly inside.
pub fn origin_circle() -> ContourSpec {
    ContourSpec::circle(Complex64::new(-0.005, 0.0), 0.01)
}

pub fn verify_numerical_observation(
    profile: &FrontProfile,
    a: f64,
    eta: f64,
    radius: f64,
    opts: &EvansOptions,
) -> Result<ObservationReport> {
    let co = WeightedCoeffs::new(profile, a);
    let boundary = winding_number(&co, &ContourSpec::half_disk(eta, radius), opts)?;
    let near = origin_circle();
    let origin = winding_number(&co, &near, opts)?;

    let d0 = evans_eval(&co, Complex64::new(0.0, 0.0), opts)?;
    let mut mags: Vec<f64> = near
        .points()
        .iter()
        .map(|&lam| evans_eval(&co, lam, opts).map(|d| d.norm()))
        .collect::<Result<_>>()?;
    mags.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let origin_scale = mags[mags.len() / 2];

    let pass = boundary.winding == 1 && origin.winding == 1;
    Ok(ObservationReport {
        mu: profile.mu,
        s: profile.s,
        a,
        eta,
        radius,
        winding_half_disk: boundary.winding,
        winding_origin: origin.winding,
        raw_half_disk: boundary.raw,
        raw_origin: origin.raw,
        origin_value: d0.norm(),
        origin_scale,
        evaluations: boundary.evaluations + origin.evaluations + 1,
        pass,
    })
}
