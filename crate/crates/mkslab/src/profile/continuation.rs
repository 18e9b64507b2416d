use super::collocate::{solve_doubled, CollocationOptions};
use super::{FrontProfile, ProfileKind};
use crate::{Error, Result};

/// One converged point along a continuation path.
#[derive(Debug, Clone, Copy)]
pub struct ContinuationStep {
    pub mu: f64,
    pub s: f64,
}

/// Outcome of [`continue_in_mu`]. `profiles` holds a full profile at every
/// reached target, `path` the (mu, s) pair of every converged substep, and
/// `terminated` the bracket (last good mu, first failed mu) when the run hit
/// the fold where the outer equilibria merge and the front ceases to exist.
#[derive(Debug)]
pub struct ContinuationRun {
    pub profiles: Vec<FrontProfile>,
    pub path: Vec<ContinuationStep>,
    pub terminated: Option<(f64, f64)>,
}

/// Drag a converged front through a list of flux offsets.
///
/// Targets must move monotonically away from the starting mu. Steps are
/// capped at `max_substep`; a failed solve halves the step, and once the step
/// falls below `min_substep` the run records the failure bracket and stops,
/// which is precisely how the fold location gets boxed in.
pub fn continue_in_mu(
    start: &FrontProfile,
    targets: &[f64],
    opts: &CollocationOptions,
    max_substep: f64,
    min_substep: f64,
) -> Result<ContinuationRun> {
    if start.kind != ProfileKind::Front {
        return Err(Error::InvalidArgument(
            "continuation runs on fronts; convert backs through the symmetry first".into(),
        ));
    }
    if opts.n != start.n || (opts.l - start.l).abs() > 1e-12 {
        return Err(Error::InvalidArgument(
            "continuation mesh must match the starting profile".into(),
        ));
    }
    if !(max_substep > 0.0) || !(min_substep > 0.0) || min_substep > max_substep {
        return Err(Error::InvalidArgument("bad substep bounds".into()));
    }
    if targets.is_empty() {
        return Ok(ContinuationRun {
            profiles: Vec::new(),
            path: vec![ContinuationStep { mu: start.mu, s: start.s }],
            terminated: None,
        });
    }
    let dir = (targets[0] - start.mu).signum();
    if dir == 0.0 {
        return Err(Error::InvalidArgument("first target equals the starting mu".into()));
    }
    let mut prev = start.mu;
    for &t in targets {
        if (t - prev) * dir <= 0.0 {
            return Err(Error::InvalidArgument(
                "targets must move monotonically away from the start".into(),
            ));
        }
        prev = t;
    }

    let mut cur = start.clone();
    let mut mu_cur = start.mu;
    let mut run = ContinuationRun {
        profiles: Vec::new(),
        path: vec![ContinuationStep { mu: start.mu, s: start.s }],
        terminated: None,
    };
    let mut step = max_substep;

    'targets: for &target in targets {
        while (target - mu_cur) * dir > 1e-12 {
            let remaining = (target - mu_cur).abs();
            // Land exactly on the target once it is within reach; the slack
            // absorbs accumulated rounding in mu_cur.
            let exact = remaining <= step + 1e-9;
            let mu_next = if exact { target } else { mu_cur + dir * step };
            let seed = cur.doubled_states();
            match solve_doubled(&seed, cur.s, mu_next, opts) {
                Ok(p) => {
                    mu_cur = mu_next;
                    run.path.push(ContinuationStep { mu: p.mu, s: p.s });
                    cur = p;
                    // Grow back toward the cap after successes.
                    step = (step * 2.0).min(max_substep);
                }
                Err(_) => {
                    step = remaining.min(step) / 2.0;
                    if step < min_substep {
                        run.terminated = Some((mu_cur, mu_next));
                        break 'targets;
                    }
                }
            }
        }
        if (target - mu_cur) * dir <= 1e-12 {
            run.profiles.push(cur.clone());
        }
    }
    Ok(run)
}

/// The model's exact symmetry (mu, s, phi) -> (-mu, s, -phi): a front at mu
/// maps to a back at -mu with the same speed. Involutive to the bit, since
/// every field is either negated twice or copied.
pub fn back_from_front(p: &FrontProfile) -> FrontProfile {
    FrontProfile {
        kind: match p.kind {
            ProfileKind::Front => ProfileKind::Back,
            ProfileKind::Back => ProfileKind::Front,
        },
        mu: -p.mu,
        s: p.s,
        l: p.l,
        n: p.n,
        z: p.z.clone(),
        phi: p.phi.iter().map(|v| -v).collect(),
        dphi: p.dphi.iter().map(|v| -v).collect(),
        d2phi: p.d2phi.iter().map(|v| -v).collect(),
        phi_minus: -p.phi_minus,
        phi_plus: -p.phi_plus,
        // c = s + 3 phi^2 is even in phi, so the decay rate carries over.
        a_plus: p.a_plus,
        residual: p.residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{collocate_front, shoot_front};

    fn plateau_front() -> FrontProfile {
        let shot = shoot_front(-2.388, 0.0, 7.0, 10.0).unwrap();
        let opts = CollocationOptions::default();
        collocate_front(shot.seed(0.5), -2.388, 0.0, &opts).unwrap()
    }

    #[test]
    fn short_run_tracks_speed() {
        let p0 = plateau_front();
        let opts = CollocationOptions::default();
        let run = continue_in_mu(&p0, &[-0.1], &opts, 0.05, 1e-5).unwrap();
        assert!(run.terminated.is_none());
        assert_eq!(run.profiles.len(), 1);
        let p = &run.profiles[0];
        // Speed from the reference table: s(-0.1) = -2.703 to three decimals.
        assert!((p.s + 2.703).abs() < 0.01, "s = {:.5}", p.s);
        assert!(p.residual < 1e-8);
        // Path includes start plus two substeps of 0.05.
        assert_eq!(run.path.len(), 3);
    }

    #[test]
    fn symmetry_is_involutive() {
        let p = plateau_front();
        let b = back_from_front(&p);
        assert_eq!(b.kind, ProfileKind::Back);
        assert_eq!(b.mu, -p.mu);
        assert_eq!(b.s, p.s);
        assert!(b.phi.iter().zip(p.phi.iter()).all(|(x, y)| *x == -*y));
        // Back descends.
        assert!(b.phi_minus > b.phi_plus);
        let pp = back_from_front(&b);
        assert_eq!(pp.kind, p.kind);
        assert_eq!(pp.mu, p.mu);
        assert!(pp.phi == p.phi && pp.dphi == p.dphi && pp.d2phi == p.d2phi);
        assert_eq!(pp.a_plus, p.a_plus);
    }

    #[test]
    fn rejects_mixed_direction_targets() {
        let p = plateau_front();
        let opts = CollocationOptions::default();
        assert!(continue_in_mu(&p, &[-0.1, 0.1], &opts, 0.05, 1e-5).is_err());
        assert!(continue_in_mu(&p, &[0.0], &opts, 0.05, 1e-5).is_err());
    }
}
