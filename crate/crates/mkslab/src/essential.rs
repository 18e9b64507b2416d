//! Essential spectrum of the linearization in exponentially weighted spaces.
//!
//! About a constant end state with coefficient c = s + 3 phi^2 the
//! linearization has symbol p(nu) = -nu^4 - nu^2 + c nu. Conjugating with
//! the weight e^{az} shifts the Fourier argument, so the Fredholm border is
//! the curve k -> p(ik - a). The weighted essential spectrum of a front sits
//! left of the borders of both end states; a weight is admissible when both
//! curves stay in the open left half plane.

use crate::num::minimize_scalar;
use crate::profile::{ContinuationRun, FrontProfile};
use crate::{Error, Result};
use num_complex::Complex64;

/// Border symbol p(ik - a) at a single wavenumber.
pub fn dispersion_point(c: f64, a: f64, k: f64) -> Complex64 {
    let nu = Complex64::new(-a, k);
    -nu.powu(4) - nu * nu + c * nu
}

/// Real part of the border symbol in closed form,
/// -a^4 + a^2 (6k^2 - 1) - a c - k^4 + k^2. Kept separate from the complex
/// evaluation so the two can cross-check each other.
pub fn dispersion_re(c: f64, a: f64, k: f64) -> f64 {
    let a2 = a * a;
    let k2 = k * k;
    -a2 * a2 + a2 * (6.0 * k2 - 1.0) - a * c - k2 * k2 + k2
}

/// Sample the Fredholm border over a wavenumber grid.
pub fn dispersion_curve(c: f64, a: f64, ks: &[f64]) -> Vec<Complex64> {
    ks.iter().map(|&k| dispersion_point(c, a, k)).collect()
}

/// The default wavenumber window for border plots and scans.
pub fn default_k_grid() -> Vec<f64> {
    let n = 4001;
    (0..n).map(|i| -5.0 + 10.0 * i as f64 / (n - 1) as f64).collect()
}

/// Exact supremum of the border's real part over all wavenumbers.
///
/// d/dk Re p(ik - a) vanishes at k = 0 and at k^2 = (6a^2 + 1) / 2; the
/// larger of the two critical values is the supremum, no grid involved.
pub fn max_dispersion_re(c: f64, a: f64) -> f64 {
    let a2 = a * a;
    let at_zero = -a2 * a2 - a2 - a * c;
    let at_ridge = 8.0 * a2 * a2 + 2.0 * a2 + 0.25 - a * c;
    at_zero.max(at_ridge)
}

/// Envelope (32 a^4 + 8 a^2 + 1) / (4a): the border at weight a stays in the
/// left half plane exactly when c exceeds this.
pub fn weight_envelope(a: f64) -> f64 {
    (32.0 * a.powi(4) + 8.0 * a * a + 1.0) / (4.0 * a)
}

/// Is the weight a admissible for an end state with coefficient c, meaning
/// the whole border lies strictly left of the imaginary axis?
pub fn weight_admissible(c: f64, a: f64) -> bool {
    a > 0.0 && max_dispersion_re(c, a) < 0.0
}

/// The open interval of admissible weights for a single end coefficient,
/// bisected to 1e-10 on each side. Empty when c is at or below the envelope
/// minimum.
pub fn weight_interval_for_coef(c: f64) -> Result<(f64, f64)> {
    let crit = critical_speed_sstar()?;
    if c <= crit.env_min {
        return Err(Error::WeightInadmissible { a: crit.a_star });
    }
    // Envelope is strictly decreasing below a_star and increasing above it,
    // so each side has exactly one crossing of weight_envelope(a) = c.
    let lo = bisect(|a| weight_envelope(a) - c, 1e-8, crit.a_star)?;
    let mut hi_end = crit.a_star.max(1.0);
    let mut guard = 0;
    while weight_envelope(hi_end) <= c {
        hi_end *= 2.0;
        guard += 1;
        if guard > 60 {
            return Err(Error::BracketMissing("upper admissibility crossing".into()));
        }
    }
    let hi = bisect(|a| weight_envelope(a) - c, crit.a_star, hi_end)?;
    Ok((lo, hi))
}

/// Admissible weight window of a whole profile: the intersection of the
/// windows of its two end states.
pub fn weight_interval(p: &FrontProfile) -> Result<(f64, f64)> {
    let c_minus = p.s + 3.0 * p.phi_minus * p.phi_minus;
    let c_plus = p.s + 3.0 * p.phi_plus * p.phi_plus;
    let (lo_m, hi_m) = weight_interval_for_coef(c_minus)?;
    let (lo_p, hi_p) = weight_interval_for_coef(c_plus)?;
    let lo = lo_m.max(lo_p);
    let hi = hi_m.min(hi_p);
    if lo >= hi {
        return Err(Error::WeightInadmissible { a: 0.5 * (lo + hi) });
    }
    Ok((lo, hi))
}

/// Where admissible weights first appear as the speed varies.
///
/// Minimizing the envelope over a gives the smallest end coefficient that
/// admits any weight; on the mu = 0 plateau both ends have c = -2s, so the
/// threshold speed is minus half the envelope minimum. The minimizing weight
/// satisfies 96 a^4 + 8 a^2 - 1 = 0.
#[derive(Debug, Clone, Copy)]
pub struct CriticalSpeed {
    pub a_star: f64,
    pub env_min: f64,
    pub s_star: f64,
}

pub fn critical_speed_sstar() -> Result<CriticalSpeed> {
    let m = minimize_scalar(weight_envelope, 0.05, 1.0, 1e-13, 400)?;
    if !m.interior {
        return Err(Error::BracketMissing("envelope minimum hit the bracket edge".into()));
    }
    // A bracketing minimizer only locates the optimum to about sqrt(eps);
    // two Newton steps on the stationarity equation 96 a^4 + 8 a^2 - 1 = 0
    // push it to machine precision.
    let mut a = m.x;
    for _ in 0..2 {
        let g = 96.0 * a.powi(4) + 8.0 * a * a - 1.0;
        let dg = 384.0 * a.powi(3) + 16.0 * a;
        a -= g / dg;
    }
    let env_min = weight_envelope(a);
    Ok(CriticalSpeed { a_star: a, env_min, s_star: -env_min / 2.0 })
}

/// Fold location from a continuation run that pushed mu upward until the
/// solver died. `bracket` is the recorded failure interval, `estimate` its
/// midpoint, and `discriminant_root` an extrapolated root of the equilibrium
/// discriminant -4 s^3 - 27 mu^2 along the path, a cross-check that the
/// failure really is the fold and not a solver artifact.
#[derive(Debug, Clone, Copy)]
pub struct MuStar {
    pub bracket: (f64, f64),
    pub estimate: f64,
    pub discriminant_root: f64,
}

pub fn critical_mu_star(run: &ContinuationRun) -> Result<MuStar> {
    let bracket = run.terminated.ok_or_else(|| {
        Error::InvalidArgument("continuation reached its targets without hitting the fold".into())
    })?;
    let disc = |mu: f64, s: f64| -4.0 * s * s * s - 27.0 * mu * mu;
    let tail: Vec<(f64, f64)> = run
        .path
        .iter()
        .rev()
        .take(2)
        .map(|st| (st.mu, disc(st.mu, st.s)))
        .collect();
    let discriminant_root = if tail.len() == 2 && (tail[0].1 - tail[1].1).abs() > 1e-300 {
        let (m1, d1) = tail[1];
        let (m2, d2) = tail[0];
        m2 - d2 * (m2 - m1) / (d2 - d1)
    } else {
        f64::NAN
    };
    Ok(MuStar { bracket, estimate: 0.5 * (bracket.0 + bracket.1), discriminant_root })
}

/// Fredholm borders of a front at weight a: both end curves plus the exact
/// supremum of their real parts. The spectral gap used by decay-rate checks
/// is minus that supremum.
#[derive(Debug, Clone)]
pub struct FredholmBorders {
    pub a: f64,
    pub c_minus: f64,
    pub c_plus: f64,
    pub k: Vec<f64>,
    pub lambda_minus: Vec<Complex64>,
    pub lambda_plus: Vec<Complex64>,
    pub max_re: f64,
}

pub fn fredholm_borders(p: &FrontProfile, a: f64, ks: Option<&[f64]>) -> FredholmBorders {
    let c_minus = p.s + 3.0 * p.phi_minus * p.phi_minus;
    let c_plus = p.s + 3.0 * p.phi_plus * p.phi_plus;
    let k: Vec<f64> = match ks {
        Some(v) => v.to_vec(),
        None => default_k_grid(),
    };
    let lambda_minus = dispersion_curve(c_minus, a, &k);
    let lambda_plus = dispersion_curve(c_plus, a, &k);
    let max_re = max_dispersion_re(c_minus, a).max(max_dispersion_re(c_plus, a));
    FredholmBorders { a, c_minus, c_plus, k, lambda_minus, lambda_plus, max_re }
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Result<f64> {
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::BracketMissing(format!("no sign change on [{lo}, {hi}]")));
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_re_matches_complex_eval() {
        for &(c, a) in &[(4.776, 0.3), (2.0, 0.1), (9.38, 0.7), (-1.0, 0.45)] {
            for &k in &[-3.0, -0.7, 0.0, 0.31, 1.9, 4.9] {
                let z = dispersion_point(c, a, k);
                let re = dispersion_re(c, a, k);
                assert!((z.re - re).abs() < 1e-10 * (1.0 + re.abs()), "c={c} a={a} k={k}");
            }
        }
    }

    #[test]
    fn exact_supremum_dominates_grid() {
        let (c, a) = (4.776, 0.3);
        let grid_max = default_k_grid()
            .iter()
            .map(|&k| dispersion_re(c, a, k))
            .fold(f64::NEG_INFINITY, f64::max);
        let exact = max_dispersion_re(c, a);
        assert!(exact >= grid_max - 1e-12);
        assert!(exact - grid_max < 1e-4, "grid misses the ridge by {}", exact - grid_max);
    }

    #[test]
    fn plateau_weight_is_admissible_with_known_gap() {
        // c = -2s at mu = 0; at a = 0.3 the border supremum is -0.938, the
        // spectral gap that linear decay rates are measured against.
        let c = 2.0 * 2.3879626;
        assert!(weight_admissible(c, 0.3));
        let m = max_dispersion_re(c, 0.3);
        assert!((m + 0.938).abs() < 1e-3, "sup Re = {m}");
        // Weight zero or negative is never admissible.
        assert!(!weight_admissible(c, 0.0));
        assert!(!weight_admissible(c, -0.1));
    }

    #[test]
    fn envelope_minimum_and_threshold_speed() {
        let crit = critical_speed_sstar().unwrap();
        assert!((crit.a_star - 0.2619).abs() < 1e-3, "a* = {}", crit.a_star);
        assert!((crit.env_min - 1.6220759).abs() < 1e-5, "min = {}", crit.env_min);
        assert!((crit.s_star + 0.811038).abs() < 1e-5, "s* = {}", crit.s_star);
        // Stationarity condition of the envelope.
        let a = crit.a_star;
        let st = 96.0 * a.powi(4) + 8.0 * a * a - 1.0;
        assert!(st.abs() < 1e-12, "96a^4+8a^2-1 = {st}");
        // Closed form for the stationary weight: a^2 = (-8 + sqrt(448)) / 192.
        let exact = ((448.0f64.sqrt() - 8.0) / 192.0).sqrt();
        assert!((a - exact).abs() < 1e-12);
    }

    #[test]
    fn weight_window_brackets_the_standard_choice() {
        let (lo, hi) = weight_interval_for_coef(2.0 * 2.3879626).unwrap();
        assert!(lo > 0.05 && lo < 0.06, "lo = {lo}");
        assert!(hi > 0.7 && hi < 0.8, "hi = {hi}");
        assert!(lo < 0.3 && 0.3 < hi);
        // Endpoints sit on the envelope.
        assert!((weight_envelope(lo) - 2.0 * 2.3879626).abs() < 1e-7);
        assert!((weight_envelope(hi) - 2.0 * 2.3879626).abs() < 1e-7);
    }

    #[test]
    fn subthreshold_speed_has_no_window() {
        assert!(matches!(
            weight_interval_for_coef(1.0),
            Err(Error::WeightInadmissible { .. })
        ));
    }
}
