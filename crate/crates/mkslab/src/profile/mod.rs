//! Traveling front and back profiles.
//!
//! In the frame z = x + st the profile solves phi''' = s phi - phi' + phi^3 + mu
//! together with decay to the outer equilibria at both ends. The speed s is
//! part of the unknown: [`shoot_front`] pins down a first approximation by a
//! one-parameter shot along the unstable manifold, [`collocate_front`] then
//! solves the doubled two-point problem with projective boundary conditions
//! and s as a free parameter, and [`continue_in_mu`] drags that solution
//! through a range of flux offsets.

mod collocate;
mod continuation;
mod equilibria;
mod shoot;

pub use collocate::{collocate_front, CollocationOptions};
pub use continuation::{back_from_front, continue_in_mu, ContinuationRun, ContinuationStep};
pub use equilibria::{
    equilibria, frame_rate, linearize, outer_equilibria, EquilibriumPoint, Linearization,
};
pub use shoot::{shoot_front, ShootOutcome};

/// Which heteroclinic connection a profile represents: a front rises from
/// phi_minus to phi_plus, a back descends. The two are tied by the symmetry
/// (mu, s, phi) -> (-mu, s, -phi).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    Front,
    Back,
}

impl std::fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProfileKind::Front => write!(f, "front"),
            ProfileKind::Back => write!(f, "back"),
        }
    }
}

impl std::str::FromStr for ProfileKind {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "front" => Ok(ProfileKind::Front),
            "back" => Ok(ProfileKind::Back),
            other => Err(crate::Error::Parse(format!("unknown profile kind {other:?}"))),
        }
    }
}

/// A converged connecting profile on the full line [-l, l], sampled on the
/// uniform grid z[i] = -l + i * (l / n) with 2n + 1 nodes. `phi`, `dphi` and
/// `d2phi` hold the profile and its first two derivatives at the nodes;
/// evaluation between nodes is cubic Hermite. `a_plus` is the supremum of
/// exponential weights under which the derivative of the profile stays
/// square-integrable, half the real frame rate at the far equilibrium.
#[derive(Debug, Clone)]
pub struct FrontProfile {
    pub kind: ProfileKind,
    pub mu: f64,
    pub s: f64,
    pub l: f64,
    pub n: usize,
    pub z: Vec<f64>,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
    pub d2phi: Vec<f64>,
    pub phi_minus: f64,
    pub phi_plus: f64,
    pub a_plus: f64,
    pub residual: f64,
}

impl FrontProfile {
    pub fn grid_step(&self) -> f64 {
        self.l / self.n as f64
    }

    /// Profile value at z, cubic Hermite between nodes, clamped to the
    /// endpoint values outside the computed window.
    pub fn eval_phi(&self, z: f64) -> f64 {
        self.hermite(z, &self.phi, &self.dphi)
    }

    /// First derivative at z, interpolated the same way from (dphi, d2phi).
    pub fn eval_dphi(&self, z: f64) -> f64 {
        self.hermite(z, &self.dphi, &self.d2phi)
    }

    fn hermite(&self, z: f64, f: &[f64], df: &[f64]) -> f64 {
        let h = self.grid_step();
        let last = f.len() - 1;
        if z <= self.z[0] {
            return f[0];
        }
        if z >= self.z[last] {
            return f[last];
        }
        let pos = (z - self.z[0]) / h;
        let i = (pos.floor() as usize).min(last - 1);
        let t = pos - i as f64;
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * f[i]
            + (t3 - 2.0 * t2 + t) * h * df[i]
            + (-2.0 * t3 + 3.0 * t2) * f[i + 1]
            + (t3 - t2) * h * df[i + 1]
    }

    /// How far the computed ends sit from the limiting equilibria; small
    /// values certify the truncation length was generous enough.
    pub fn tail_deviation(&self) -> f64 {
        let left = (self.phi[0] - self.phi_minus).abs();
        let right = (self.phi[self.phi.len() - 1] - self.phi_plus).abs();
        left.max(right)
    }

    /// Node states of the doubled half-line formulation: element i holds
    /// (y(x_i), ytilde(x_i)) with y the right half and ytilde the mirrored
    /// left half. Used to reseed continuation steps exactly.
    pub(crate) fn doubled_states(&self) -> Vec<[f64; 6]> {
        let n = self.n;
        (0..=n)
            .map(|i| {
                [
                    self.phi[n + i],
                    self.dphi[n + i],
                    self.d2phi[n + i],
                    self.phi[n - i],
                    self.dphi[n - i],
                    self.d2phi[n - i],
                ]
            })
            .collect()
    }
}

/// Right-hand side of the first-order profile system
/// (phi, phi', phi'')' = (phi', phi'', s phi - phi' + phi^3 + mu).
#[inline]
pub fn field(y: &[f64; 3], s: f64, mu: f64) -> [f64; 3] {
    [y[1], y[2], s * y[0] - y[1] + y[0] * y[0] * y[0] + mu]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_profile() -> FrontProfile {
        // tanh-like data on a coarse grid, enough to exercise interpolation
        let l = 5.0;
        let n = 50;
        let h = l / n as f64;
        let z: Vec<f64> = (0..=2 * n).map(|i| -l + i as f64 * h).collect();
        let phi: Vec<f64> = z.iter().map(|&zz| zz.tanh()).collect();
        let dphi: Vec<f64> = z.iter().map(|&zz| 1.0 / zz.cosh().powi(2)).collect();
        let d2phi: Vec<f64> = z
            .iter()
            .map(|&zz| -2.0 * zz.tanh() / zz.cosh().powi(2))
            .collect();
        FrontProfile {
            kind: ProfileKind::Front,
            mu: 0.0,
            s: -2.388,
            l,
            n,
            z,
            phi,
            dphi,
            d2phi,
            phi_minus: -1.0,
            phi_plus: 1.0,
            a_plus: 0.7,
            residual: 0.0,
        }
    }

    #[test]
    fn hermite_eval_matches_smooth_data() {
        let p = toy_profile();
        for &z in &[-3.33, -0.617, 0.0, 0.29, 2.71] {
            assert!((p.eval_phi(z) - z.tanh()).abs() < 1e-6, "phi at {z}");
            assert!(
                (p.eval_dphi(z) - 1.0 / z.cosh().powi(2)).abs() < 1e-6,
                "dphi at {z}"
            );
        }
        // outside the window: clamped
        assert_eq!(p.eval_phi(-100.0), p.phi[0]);
        assert_eq!(p.eval_phi(100.0), *p.phi.last().unwrap());
    }

    #[test]
    fn doubled_states_mirror_the_line() {
        let p = toy_profile();
        let st = p.doubled_states();
        assert_eq!(st.len(), p.n + 1);
        assert_eq!(st[0][0], st[0][3]);
        let k = 17;
        assert_eq!(st[k][0], p.phi[p.n + k]);
        assert_eq!(st[k][3], p.phi[p.n - k]);
    }

    #[test]
    fn kind_round_trips_through_strings() {
        for k in [ProfileKind::Front, ProfileKind::Back] {
            let s = k.to_string();
            let back: ProfileKind = s.parse().unwrap();
            assert_eq!(back, k);
        }
        assert!("sideways".parse::<ProfileKind>().is_err());
    }
}
