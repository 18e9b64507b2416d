use crate::profile::FrontProfile;
use crate::{Error, Result};

/// A-priori confinement estimates for weighted point spectrum, evaluated
/// from sup norms of the profile.
///
/// With weight coefficients alpha0 = a^2 + a^4, alpha1 = 2a + 4a^3,
/// alpha2 = 6a^2 + 1, alpha3 = 4a, the two estimates are
///
///   Re lambda <= ||(phi^2)'||/2 + alpha2^2/4 - alpha0 - a s
///
///   Re lambda + |Im lambda| <=
///       ||alpha1 + phi^2 + s||^2 / (4 - 6 alpha3)
///     + ||(phi^2)' - alpha0 - 2 a phi^2 - a s||
///     + (1 - alpha3) / 2
///     + ||(phi^2)' - a s + alpha2 / 2|| / 2
///
/// (all norms sup over z). The second estimate's derivation needs
/// 4 - 6 alpha3 > 0, i.e. a < 1/6; `applicable_2` records whether that
/// holds. Beyond it the formula is still evaluated literally so the number
/// can be inspected, but it no longer bounds anything.
#[derive(Debug, Clone, Copy)]
pub struct EnergyBounds {
    pub a: f64,
    pub s: f64,
    pub bound_re: f64,
    pub bound_re_plus_abs_im: f64,
    pub applicable_2: bool,
}

pub fn energy_bounds(p: &FrontProfile, a: f64) -> Result<EnergyBounds> {
    if !(a > 0.0) {
        return Err(Error::InvalidArgument("weight must be positive".into()));
    }
    let s = p.s;
    let a0 = a * a + a.powi(4);
    let a1 = 2.0 * a + 4.0 * a.powi(3);
    let a2 = 6.0 * a * a + 1.0;
    let a3 = 4.0 * a;

    let sup = |f: &dyn Fn(usize) -> f64| -> f64 {
        (0..p.phi.len()).map(f).fold(0.0_f64, |m, v| m.max(v.abs()))
    };
    let dphi2 = |i: usize| 2.0 * p.phi[i] * p.dphi[i];

    let bound_re = 0.5 * sup(&dphi2) + a2 * a2 / 4.0 - a0 - a * s;

    let denom = 4.0 - 6.0 * a3;
    let applicable_2 = denom > 0.0;
    let t1 = sup(&|i| a1 + p.phi[i] * p.phi[i] + s).powi(2) / denom;
    let t2 = sup(&|i| dphi2(i) - a0 - 2.0 * a * p.phi[i] * p.phi[i] - a * s);
    let t3 = (1.0 - a3) / 2.0;
    let t4 = 0.5 * sup(&|i| dphi2(i) - a * s + a2 / 2.0);
    let bound_re_plus_abs_im = t1 + t2 + t3 + t4;

    Ok(EnergyBounds { a, s, bound_re, bound_re_plus_abs_im, applicable_2 })
}

impl EnergyBounds {
    /// The half-disk radius the second estimate suggests. Refused when the
    /// estimate is formally inapplicable at this weight, so callers fall
    /// back to an externally chosen radius.
    pub fn contour_radius(&self) -> Result<f64> {
        if !self.applicable_2 {
            return Err(Error::BoundInapplicable(format!(
                "4 - 24a <= 0 at a = {}; the mixed estimate does not bound",
                self.a
            )));
        }
        Ok(self.bound_re_plus_abs_im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{collocate_front, shoot_front, CollocationOptions};

    #[test]
    fn plateau_bounds_at_standard_weight() {
        let shot = shoot_front(-2.388, 0.0, 7.0, 10.0).unwrap();
        let p = collocate_front(shot.seed(0.5), -2.388, 0.0, &CollocationOptions::default())
            .unwrap();
        let b = energy_bounds(&p, 0.3).unwrap();
        // At a = 0.3 the denominator 4 - 24a is negative.
        assert!(!b.applicable_2);
        assert!(b.contour_radius().is_err());
        // Literal evaluation lands near 4.66 for this profile.
        assert!(
            (b.bound_re_plus_abs_im - 4.66).abs() < 0.05,
            "mixed estimate {:.4}",
            b.bound_re_plus_abs_im
        );
        assert!(b.bound_re.is_finite());
        // A small weight keeps the estimate applicable.
        let b2 = energy_bounds(&p, 0.1).unwrap();
        assert!(b2.applicable_2);
        assert!(b2.contour_radius().unwrap() > 0.0);
    }
}
