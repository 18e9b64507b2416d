use crate::num::{BandedMatrix, CyclicPenta};
use crate::profile::FrontProfile;
use crate::{Error, Result};

/// How the spatial domain closes: wrap around, or hold the four outermost
/// points at their initial values so the tails stay pinned to the rest
/// states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    ClampedTails,
    Periodic,
}

/// A field sampled on a uniform grid at one instant, together with the
/// frame speed it is evolved in.
#[derive(Debug, Clone)]
pub struct EvolutionState {
    pub z: Vec<f64>,
    pub p: Vec<f64>,
    pub t: f64,
    pub s: f64,
}

impl EvolutionState {
    /// Builds the grid z0, z0+dz, ... through z1 (inclusive within half a
    /// step) and samples f on it.
    pub fn uniform(z0: f64, z1: f64, dz: f64, s: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        if !(dz > 0.0) || !(z1 > z0) {
            return Err(Error::InvalidArgument("need z1 > z0 and dz > 0".into()));
        }
        let n = ((z1 - z0) / dz + 0.5).floor() as usize + 1;
        if n < 8 {
            return Err(Error::InvalidArgument("grid too short for the stencils".into()));
        }
        let z: Vec<f64> = (0..n).map(|i| z0 + dz * i as f64).collect();
        let p = z.iter().map(|&zi| f(zi)).collect();
        Ok(EvolutionState { z, p, t: 0.0, s })
    }

    pub fn dz(&self) -> f64 {
        self.z[1] - self.z[0]
    }

    /// Trapezoid-rule mass; on a periodic grid the missing wrap interval
    /// makes this the plain Riemann sum.
    pub fn mass(&self, bc: Boundary) -> f64 {
        let sum: f64 = self.p.iter().sum();
        match bc {
            Boundary::Periodic => sum * self.dz(),
            Boundary::ClampedTails => {
                (sum - 0.5 * (self.p[0] + self.p[self.p.len() - 1])) * self.dz()
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EvolveOptions {
    pub dt: f64,
    pub t_end: f64,
    pub bc: Boundary,
    /// Weight used in the recorded deviation norm sup |e^{az}(p - p(0))|.
    pub weight_a: f64,
    /// Snapshot spacing in time units; diagnostics are kept every step.
    pub record_dt: f64,
    pub newton_tol: f64,
    pub max_newton: usize,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            dt: 0.01,
            t_end: 10.0,
            bc: Boundary::ClampedTails,
            weight_a: 0.3,
            record_dt: 0.25,
            newton_tol: 1e-11,
            max_newton: 12,
        }
    }
}

/// Per-step scalar diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct StepDiag {
    pub t: f64,
    pub mass: f64,
    pub sup: f64,
    /// sup |e^{az}(p - p(0))| with the configured weight.
    pub weighted_dev: f64,
    pub newton_iters: usize,
    pub newton_residual: f64,
}

#[derive(Debug, Clone)]
pub struct EvolveRun {
    pub snapshots: Vec<EvolutionState>,
    pub diagnostics: Vec<StepDiag>,
}

impl EvolveRun {
    pub fn final_state(&self) -> &EvolutionState {
        self.snapshots.last().expect("runs always keep the final snapshot")
    }
}

/// Semi-discrete right side s p' - p'' - p'''' + (p^3)', centered
/// second-order stencils. Clamped rows that lack a full stencil are left at
/// zero; the stepper pins them anyway.
fn rhs(p: &[f64], s: f64, dz: f64, bc: Boundary, out: &mut [f64]) {
    let n = p.len();
    let c1 = 1.0 / (2.0 * dz);
    let c2 = 1.0 / (dz * dz);
    let c4 = c2 * c2;
    let cube = |v: f64| v * v * v;
    match bc {
        Boundary::Periodic => {
            for i in 0..n {
                let im2 = (i + n - 2) % n;
                let im1 = (i + n - 1) % n;
                let ip1 = (i + 1) % n;
                let ip2 = (i + 2) % n;
                let pz = (p[ip1] - p[im1]) * c1;
                let pzz = (p[ip1] - 2.0 * p[i] + p[im1]) * c2;
                let qz = (cube(p[ip1]) - cube(p[im1])) * c1;
                let p4 = (p[ip2] - 4.0 * p[ip1] + 6.0 * p[i] - 4.0 * p[im1] + p[im2]) * c4;
                out[i] = s * pz - pzz + qz - p4;
            }
        }
        Boundary::ClampedTails => {
            out[0] = 0.0;
            out[1] = 0.0;
            out[n - 2] = 0.0;
            out[n - 1] = 0.0;
            for i in 2..n - 2 {
                let pz = (p[i + 1] - p[i - 1]) * c1;
                let pzz = (p[i + 1] - 2.0 * p[i] + p[i - 1]) * c2;
                let qz = (cube(p[i + 1]) - cube(p[i - 1])) * c1;
                let p4 =
                    (p[i + 2] - 4.0 * p[i + 1] + 6.0 * p[i] - 4.0 * p[i - 1] + p[i - 2]) * c4;
                out[i] = s * pz - pzz + qz - p4;
            }
        }
    }
}

/// Row i of ident*I + scale*J where J is the Jacobian of `rhs`, written
/// into the five band entries (i, i-2..i+2).
fn jac_row(
    p: &[f64],
    s: f64,
    dz: f64,
    ident: f64,
    scale: f64,
    im1: usize,
    ip1: usize,
) -> [f64; 5] {
    let c1 = 1.0 / (2.0 * dz);
    let c2 = 1.0 / (dz * dz);
    let c4 = c2 * c2;
    [
        scale * (-c4),
        scale * (-(s + 3.0 * p[im1] * p[im1]) * c1 - c2 + 4.0 * c4),
        ident + scale * (2.0 * c2 - 6.0 * c4),
        scale * ((s + 3.0 * p[ip1] * p[ip1]) * c1 - c2 + 4.0 * c4),
        scale * (-c4),
    ]
}

fn assemble_clamped(p: &[f64], s: f64, dz: f64, ident: f64, scale: f64) -> BandedMatrix {
    let n = p.len();
    let mut m = BandedMatrix::new(n, 2, 2);
    for i in [0, 1, n - 2, n - 1] {
        m.set(i, i, 1.0);
    }
    for i in 2..n - 2 {
        let row = jac_row(p, s, dz, ident, scale, i - 1, i + 1);
        for (k, v) in row.iter().enumerate() {
            m.add(i, i + k - 2, *v);
        }
    }
    m
}

fn assemble_periodic(p: &[f64], s: f64, dz: f64, ident: f64, scale: f64) -> [Vec<f64>; 5] {
    let n = p.len();
    let mut d: [Vec<f64>; 5] = core::array::from_fn(|_| vec![0.0; n]);
    for i in 0..n {
        let row = jac_row(p, s, dz, ident, scale, (i + n - 1) % n, (i + 1) % n);
        for k in 0..5 {
            d[k][i] = row[k];
        }
    }
    d
}

/// One Crank-Nicolson step by damped-free Newton on the implicit residual
/// pn - p - dt/2 (F(p) + F(pn)).
struct CnStepper {
    s: f64,
    dz: f64,
    bc: Boundary,
    /// Pinned (index, value) pairs for clamped tails.
    pins: Vec<(usize, f64)>,
    tol: f64,
    max_newton: usize,
}

impl CnStepper {
    fn step(&self, p: &mut Vec<f64>, dt: f64) -> Result<(usize, f64)> {
        let n = p.len();
        let mut f = vec![0.0; n];
        rhs(p, self.s, self.dz, self.bc, &mut f);
        let q: Vec<f64> = (0..n).map(|i| p[i] + 0.5 * dt * f[i]).collect();
        let mut pn = p.clone();
        let mut g = vec![0.0; n];
        let mut res = f64::INFINITY;
        for it in 0..self.max_newton {
            rhs(&pn, self.s, self.dz, self.bc, &mut f);
            for i in 0..n {
                g[i] = pn[i] - q[i] - 0.5 * dt * f[i];
            }
            for &(b, v) in &self.pins {
                g[b] = pn[b] - v;
            }
            res = g.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            if res < self.tol {
                *p = pn;
                return Ok((it, res));
            }
            match self.bc {
                Boundary::ClampedTails => {
                    let lu = assemble_clamped(&pn, self.s, self.dz, 1.0, -0.5 * dt).factor()?;
                    lu.solve_in_place(&mut g);
                }
                Boundary::Periodic => {
                    let d = assemble_periodic(&pn, self.s, self.dz, 1.0, -0.5 * dt);
                    let lu = CyclicPenta::factor([&d[0], &d[1], &d[2], &d[3], &d[4]])?;
                    lu.solve_in_place(&mut g);
                }
            }
            for i in 0..n {
                pn[i] -= g[i];
            }
        }
        Err(Error::NoConvergence { iters: self.max_newton, residual: res })
    }

    /// Advance by dt, splitting the step when Newton stalls.
    fn advance(&self, p: &mut Vec<f64>, dt: f64, depth: usize) -> Result<(usize, f64)> {
        match self.step(p, dt) {
            Ok(r) => Ok(r),
            Err(Error::NoConvergence { .. }) if depth < 3 => {
                self.advance(p, 0.5 * dt, depth + 1)?;
                self.advance(p, 0.5 * dt, depth + 1)
            }
            Err(e) => Err(e),
        }
    }
}

/// Crank-Nicolson time integration with per-step Newton solves.
///
/// Diagnostics are recorded every step against the initial state;
/// snapshots are kept every `record_dt` plus the final time. A step whose
/// Newton iteration stalls is retried as two half steps, three levels
/// deep, before the run is abandoned.
pub fn evolve(initial: &EvolutionState, opts: &EvolveOptions) -> Result<EvolveRun> {
    if !(opts.dt > 0.0) || !(opts.t_end >= 0.0) {
        return Err(Error::InvalidArgument("need dt > 0 and t_end >= 0".into()));
    }
    let n = initial.p.len();
    if n != initial.z.len() || n < 8 {
        return Err(Error::InvalidArgument("state needs matching z/p with n >= 8".into()));
    }
    let dz = initial.dz();
    for w in initial.z.windows(2) {
        if ((w[1] - w[0]) - dz).abs() > 1e-9 * (1.0 + dz) {
            return Err(Error::InvalidArgument("grid must be uniform".into()));
        }
    }

    let pins = match opts.bc {
        Boundary::Periodic => Vec::new(),
        Boundary::ClampedTails => [0, 1, n - 2, n - 1]
            .iter()
            .map(|&b| (b, initial.p[b]))
            .collect(),
    };
    let stepper = CnStepper {
        s: initial.s,
        dz,
        bc: opts.bc,
        pins,
        tol: opts.newton_tol,
        max_newton: opts.max_newton,
    };

    let nsteps = (opts.t_end / opts.dt).round() as usize;
    let rec = (opts.record_dt / opts.dt).round().max(1.0) as usize;
    let wexp: Vec<f64> = initial.z.iter().map(|&z| (opts.weight_a * z).exp()).collect();
    let p0 = initial.p.clone();

    let mut p = initial.p.clone();
    let mut snapshots = Vec::with_capacity(nsteps / rec + 2);
    let mut diagnostics = Vec::with_capacity(nsteps + 1);
    let mut last = (0usize, 0.0_f64);
    for istep in 0..=nsteps {
        let t = initial.t + istep as f64 * opts.dt;
        let state = EvolutionState { z: initial.z.clone(), p: p.clone(), t, s: initial.s };
        let sup = p.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let wdev = (0..n).fold(0.0_f64, |m, i| m.max((wexp[i] * (p[i] - p0[i])).abs()));
        diagnostics.push(StepDiag {
            t,
            mass: state.mass(opts.bc),
            sup,
            weighted_dev: wdev,
            newton_iters: last.0,
            newton_residual: last.1,
        });
        if istep % rec == 0 || istep == nsteps {
            snapshots.push(state);
        }
        if istep < nsteps {
            last = stepper.advance(&mut p, opts.dt, 0).map_err(|e| Error::EvolutionFailure {
                t,
                detail: e.to_string(),
            })?;
        }
    }
    Ok(EvolveRun { snapshots, diagnostics })
}

/// Newton-polishes the sampled front into the exact steady state of the
/// clamped spatial discretization.
///
/// The sampled profile leaves an O(dz^2) residual in the discrete
/// equations, and time stepping would relax toward the discrete steady
/// state by that amount; polishing first makes "front stays put" hold at
/// solver tolerance instead.
pub fn discrete_front(
    profile: &FrontProfile,
    z_left: f64,
    z_right: f64,
    dz: f64,
) -> Result<EvolutionState> {
    let mut state = EvolutionState::uniform(z_left, z_right, dz, profile.s, |z| {
        profile.eval_phi(z)
    })?;
    let n = state.p.len();
    let mut g = vec![0.0; n];
    for _ in 0..25 {
        rhs(&state.p, state.s, dz, Boundary::ClampedTails, &mut g);
        let res = g.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if res < 1e-12 {
            return Ok(state);
        }
        let lu = assemble_clamped(&state.p, state.s, dz, 0.0, 1.0).factor()?;
        lu.solve_in_place(&mut g);
        for i in 0..n {
            state.p[i] -= g[i];
        }
    }
    let res = g.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    Err(Error::NoConvergence { iters: 25, residual: res })
}
