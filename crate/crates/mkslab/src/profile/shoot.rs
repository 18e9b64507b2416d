use super::equilibria::{linearize, outer_equilibria};
use super::field;
use crate::num::{integrate_rk45, minimize_scalar, Trajectory};
use crate::{Error, Result};

/// Result of the one-parameter shot: the optimal departure amplitude along
/// the unstable direction of phi_minus, the end mismatch against the target
/// equilibrium, and the trajectory itself for seeding the collocation.
#[derive(Debug)]
pub struct ShootOutcome {
    pub eps: f64,
    pub mismatch: f64,
    pub traj: Trajectory,
    pub s: f64,
    pub mu: f64,
}

/// Shoot from near phi_minus at z = -l_left along the unstable eigendirection
/// and tune the departure amplitude eps so the state at z = l_right lands as
/// close to (phi_plus, 0, 0) as possible.
///
/// The mismatch is unimodal in log10(eps) over a wide window: too small and
/// the trajectory lingers and misses, too large and the cubic term blows it
/// up. A coarse scan over eps = 1e-12..1e-2 brackets the optimum, then a
/// golden-section pass on the exponent refines it. A blown-up integration
/// counts as a large penalty rather than an error, so the scan can walk
/// through explosive amplitudes unharmed.
pub fn shoot_front(s: f64, mu: f64, l_left: f64, l_right: f64) -> Result<ShootOutcome> {
    if !(l_left > 0.0) || !(l_right > 0.0) {
        return Err(Error::InvalidArgument("shooting window lengths must be positive".into()));
    }
    let (minus, plus) = outer_equilibria(s, mu)?;
    let lin = linearize(s, minus.phi)?;
    let eu = lin.right_real;
    let target = [plus.phi, 0.0, 0.0];

    let run = |eps: f64| -> Result<Trajectory> {
        let y0 = [minus.phi + eps * eu[0], eps * eu[1], eps * eu[2]];
        integrate_rk45(
            |_, y, dy| {
                let f = field(&[y[0], y[1], y[2]], s, mu);
                dy.copy_from_slice(&f);
            },
            (-l_left, l_right),
            &y0,
            1e-10,
            1e-12,
            0.05,
        )
    };
    let mismatch = |eps: f64| -> f64 {
        match run(eps) {
            Ok(t) => {
                let y = t.last();
                ((y[0] - target[0]).powi(2) + (y[1] - target[1]).powi(2)
                    + (y[2] - target[2]).powi(2))
                .sqrt()
            }
            Err(_) => 1e6,
        }
    };

    let mut best = (1e-7f64, f64::INFINITY);
    let mut expo = -12.0;
    while expo < -2.0 {
        let eps = 10f64.powf(expo);
        let m = mismatch(eps);
        if m < best.1 {
            best = (eps, m);
        }
        expo += 0.25;
    }
    if !best.1.is_finite() || best.1 >= 1e6 {
        return Err(Error::ShootingFailure { mismatch: best.1, threshold: 1e6 });
    }
    let le0 = best.0.log10();
    let opt = minimize_scalar(|le| mismatch(10f64.powf(le)), le0 - 0.3, le0 + 0.3, 1e-10, 300)?;
    let eps = 10f64.powf(opt.x);
    let m = opt.f;
    if m >= 1e6 {
        return Err(Error::ShootingFailure { mismatch: m, threshold: 1e6 });
    }
    let traj = run(eps)?;
    Ok(ShootOutcome { eps, mismatch: m, traj, s, mu })
}

impl ShootOutcome {
    /// Seed function for the collocation: the shot trajectory recentred so
    /// the profile crosses `anchor` at z = 0, clamped to the integration
    /// window outside it. Returns (phi, phi', phi'') at the requested z.
    pub fn seed(&self, anchor: f64) -> impl Fn(f64) -> [f64; 3] + '_ {
        let (z0, z1) = (self.traj.z[0], *self.traj.z.last().expect("nonempty"));
        // first upward crossing of the anchor level on a fine resample
        let m = 4000;
        let mut zc = 0.0;
        let mut prev = self.traj.sample(z0)[0];
        for k in 1..m {
            let zz = z0 + (z1 - z0) * k as f64 / (m - 1) as f64;
            let cur = self.traj.sample(zz)[0];
            if prev < anchor && cur >= anchor {
                zc = zz;
                break;
            }
            prev = cur;
        }
        move |z: f64| {
            let zz = (z + zc).clamp(z0, z1);
            let y = self.traj.sample(zz);
            [y[0], y[1], y[2]]
        }
    }
}
