use super::nonlinear::EvolveRun;
use crate::{Error, Result};

/// Physical surface slope from the transformed slope variable:
/// h_x = sqrt(6/gamma) p + 1/gamma.
pub fn slope_to_gradient(p: f64, gamma: f64) -> f64 {
    (6.0 / gamma).sqrt() * p + 1.0 / gamma
}

/// Inverse of [`slope_to_gradient`]: p = sqrt(gamma/6) (h_x - 1/gamma).
pub fn gradient_to_slope(hx: f64, gamma: f64) -> f64 {
    (gamma / 6.0).sqrt() * (hx - 1.0 / gamma)
}

/// One reconstructed snapshot of the eroding surface, in lab coordinates.
#[derive(Debug, Clone)]
pub struct HeightFrame {
    pub t: f64,
    pub x: Vec<f64>,
    pub h: Vec<f64>,
}

/// Undoes the transformation chain that produced the slope model: the
/// traveling frame (speed s) and the Galilean shift by t/(2 gamma) move
/// the grid, the slope relation gives h_x, cumulative trapezoid
/// integration with h(left) = 0 gives the shape, and the background
/// erosion contributes the -v0 t drift.
///
/// A transformed-slope front with symmetric end states comes back as a
/// surface with two different limiting gradients, so the reconstructed
/// pattern is an asymmetric sawtooth even though p itself is balanced.
pub fn slope_to_height(run: &EvolveRun, gamma: f64, v0: f64) -> Result<Vec<HeightFrame>> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    let mut frames = Vec::with_capacity(run.snapshots.len());
    for snap in &run.snapshots {
        let shift = snap.t * (0.5 / gamma - snap.s);
        let x: Vec<f64> = snap.z.iter().map(|&z| z + shift).collect();
        let hx: Vec<f64> = snap.p.iter().map(|&p| slope_to_gradient(p, gamma)).collect();
        let mut h = vec![0.0; x.len()];
        let drift = -v0 * snap.t;
        h[0] = drift;
        for i in 1..x.len() {
            h[i] = h[i - 1] + 0.5 * (hx[i] + hx[i - 1]) * (x[i] - x[i - 1]);
        }
        frames.push(HeightFrame { t: snap.t, x, h });
    }
    Ok(frames)
}
