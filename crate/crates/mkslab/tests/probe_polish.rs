use mkslab::essential::weight_interval;
use mkslab::evolve::{evolve, EvolutionState, EvolveOptions};
use mkslab::num::BandedMatrix;
use mkslab::profile::{collocate_front, shoot_front, CollocationOptions, FrontProfile};

fn rhs_steady(p: &[f64], s: f64, dz: f64, out: &mut [f64]) {
    let n = p.len();
    let c1 = 1.0 / (2.0 * dz);
    let c2 = 1.0 / (dz * dz);
    let c4 = c2 * c2;
    let cube = |v: f64| v * v * v;
    out[0] = 0.0;
    out[1] = 0.0;
    out[n - 2] = 0.0;
    out[n - 1] = 0.0;
    for i in 2..n - 2 {
        let pz = (p[i + 1] - p[i - 1]) * c1;
        let pzz = (p[i + 1] - 2.0 * p[i] + p[i - 1]) * c2;
        let qz = (cube(p[i + 1]) - cube(p[i - 1])) * c1;
        let p4 = (p[i + 2] - 4.0 * p[i + 1] + 6.0 * p[i] - 4.0 * p[i - 1] + p[i - 2]) * c4;
        out[i] = s * pz - pzz + qz - p4;
    }
}

/// Weighted steady Jacobian on the window, from raw samples.
fn weighted_jac(p: &[f64], s: f64, a: f64, dz: f64) -> BandedMatrix {
    let n = p.len();
    let a0 = a * a + a.powi(4);
    let a1 = 2.0 * a + 4.0 * a.powi(3);
    let a2 = 6.0 * a * a + 1.0;
    let a3 = 4.0 * a;
    let c1 = 1.0 / (2.0 * dz);
    let c2 = 1.0 / (dz * dz);
    let c3 = 1.0 / (2.0 * dz * dz * dz);
    let c4 = c2 * c2;
    let mut m = BandedMatrix::new(n, 2, 2);
    for i in [0, 1, n - 2, n - 1] {
        m.set(i, i, 1.0);
    }
    for i in 2..n - 2 {
        let phi = p[i];
        let dphi = (p[i + 1] - p[i - 1]) * c1;
        let cw1 = a1 + 3.0 * phi * phi + s;
        let cw0 = 6.0 * phi * dphi - a0 - 3.0 * a * phi * phi - a * s;
        let quart = [-c4, 4.0 * c4, -6.0 * c4, 4.0 * c4, -c4];
        let cubic = [-a3 * c3, 2.0 * a3 * c3, 0.0, -2.0 * a3 * c3, a3 * c3];
        for (k, off) in (-2i64..=2).enumerate() {
            m.add(i, (i as i64 + off) as usize, quart[k] + cubic[k]);
        }
        m.add(i, i - 1, -a2 * c2 - cw1 * c1);
        m.add(i, i, 2.0 * a2 * c2 + cw0);
        m.add(i, i + 1, -a2 * c2 + cw1 * c1);
    }
    m
}

fn drift_over(state: &EvolutionState, t_end: f64) -> f64 {
    let opts = EvolveOptions { t_end, weight_a: 0.0, ..EvolveOptions::default() };
    let run = evolve(state, &opts).unwrap();
    run.diagnostics.iter().fold(0.0_f64, |m, d| m.max(d.weighted_dev))
}

fn inv_iter(op: &BandedMatrix, seed: &[f64]) -> (f64, Vec<f64>) {
    let lu = op.clone().factor().unwrap();
    let mut v = seed.to_vec();
    let nv = (v.iter().map(|x| x * x).sum::<f64>()).sqrt();
    for x in v.iter_mut() {
        *x /= nv;
    }
    let mut lam = f64::INFINITY;
    for _ in 0..200 {
        let mut w = v.clone();
        lu.solve_in_place(&mut w);
        let nw = (w.iter().map(|x| x * x).sum::<f64>()).sqrt();
        for x in w.iter_mut() {
            *x /= nw;
        }
        let aw = op.matvec(&w);
        let lam_new: f64 = w.iter().zip(&aw).map(|(x, y)| x * y).sum();
        let done = (lam_new - lam).abs() < 1e-13;
        lam = lam_new;
        v = w;
        if done {
            break;
        }
    }
    (lam, v)
}

fn weighted_window_polish(
    prof: &FrontProfile,
    zl: f64,
    zr: f64,
    dz: f64,
) -> (Vec<f64>, Vec<f64>, f64) {
    let n = ((zr - zl) / dz + 0.5) as usize + 1;
    let z: Vec<f64> = (0..n).map(|i| zl + dz * i as f64).collect();
    let mut p: Vec<f64> = z.iter().map(|&zi| prof.eval_phi(zi)).collect();
    let s = prof.s;

    let mesh_half = prof.z[0].abs().max(prof.z[prof.z.len() - 1].abs());
    let half = mesh_half + 5.0;
    let (lo, hi) = weight_interval(prof).unwrap();
    let a = (0.5 * (lo + hi)).min(16.0 / half);
    println!("  weight a = {a:.3} (admissible ({lo:.3}, {hi:.3})), window half {half}");

    // window indices [wl, wr] inclusive, clipped to the domain
    let wl = ((-half - zl) / dz).ceil().max(0.0) as usize;
    let wr = (((half - zl) / dz).floor() as usize).min(n - 1);
    let m = wr - wl + 1;
    let zc = 0.5 * (z[wl] + z[wr]);
    println!("  window [{:.1}, {:.1}], {m} nodes", z[wl], z[wr]);

    // kernel pair of the weighted window operator, for deflation
    let win0: Vec<f64> = p[wl..=wr].to_vec();
    let mat0 = weighted_jac(&win0, s, a, dz);
    let mut km: Vec<f64> = (0..m)
        .map(|j| (a * (z[wl + j] - zc)).exp() * prof.eval_dphi(z[wl + j]))
        .collect();
    for b in [0, 1, m - 2, m - 1] {
        km[b] = 0.0;
    }
    let (lam_k, km) = inv_iter(&mat0, &km);
    let mut psi_seed: Vec<f64> = (0..m).map(|j| (1.7 * j as f64 + 0.3).sin()).collect();
    for b in [0, 1, m - 2, m - 1] {
        psi_seed[b] = 0.0;
    }
    let (lam_p, psi) = inv_iter(&mat0.transpose(), &psi_seed);
    let pk: f64 = psi.iter().zip(&km).map(|(x, y)| x * y).sum();
    println!("  kernel eig {lam_k:.5} adjoint {lam_p:.5} <psi,k> {pk:.3e}");

    let mut g = vec![0.0; n];
    let mut best = f64::INFINITY;
    for it in 0..40 {
        rhs_steady(&p, s, dz, &mut g);
        let res = g.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if it < 12 || it % 5 == 0 {
            println!("  polish it {it}: full res {res:.3e}");
        }
        best = best.min(res);
        if res < 1e-10 {
            break;
        }
        let win: Vec<f64> = p[wl..=wr].to_vec();
        let mat = weighted_jac(&win, s, a, dz);
        let mut rw = vec![0.0; m];
        for j in 2..m - 2 {
            rw[j] = (a * (z[wl + j] - zc)).exp() * g[wl + j];
        }
        let lu = mat.factor().unwrap();
        lu.solve_in_place(&mut rw);
        let pw: f64 = psi.iter().zip(&rw).map(|(x, y)| x * y).sum();
        let c = pw / pk;
        for j in 0..m {
            rw[j] -= c * km[j];
        }
        let wmax = rw.iter().fold(0.0_f64, |mm, v| mm.max(v.abs()));
        let mut dmax = 0.0_f64;
        let mut dloc = 0.0_f64;
        for j in 2..m - 2 {
            let d = (-a * (z[wl + j] - zc)).exp() * rw[j];
            if d.abs() > dmax {
                dmax = d.abs();
                dloc = z[wl + j];
            }
            p[wl + j] -= d;
        }
        if it < 3 {
            println!("    |w| {wmax:.3e}  |dp| {dmax:.3e} at z={dloc:.1}  w[2] {:.3e} w[m-3] {:.3e}", rw[2], rw[m - 3]);
        }
    }
    (z, p, best)
}

#[test]
fn probe() {
    let shot = shoot_front(-2.388, 0.0, 7.0, 10.0).unwrap();
    let prof =
        collocate_front(shot.seed(0.5), -2.388, 0.0, &CollocationOptions::default()).unwrap();

    let (z, p, best) = weighted_window_polish(&prof, -100.0, 100.0, 0.1);
    println!("windowed polish best residual: {best:.3e}");
    let shift = z
        .iter()
        .zip(&p)
        .map(|(&zi, &v)| (v - prof.eval_phi(zi)).abs())
        .fold(0.0_f64, f64::max);
    println!("|polished - sampled|_sup = {shift:.3e}");
    let polished = EvolutionState { z, p, t: 0.0, s: prof.s };
    println!("polished drift over T=10: {:.3e}", drift_over(&polished, 10.0));
}

#[test]
fn conjugation_identity() {
    let shot = shoot_front(-2.388, 0.0, 7.0, 10.0).unwrap();
    let prof =
        collocate_front(shot.seed(0.5), -2.388, 0.0, &CollocationOptions::default()).unwrap();
    let (zl, zr, dz) = (-45.0, 45.0, 0.1);
    let n = ((zr - zl) / dz + 0.5) as usize + 1;
    let z: Vec<f64> = (0..n).map(|i| zl + dz * i as f64).collect();
    let p: Vec<f64> = z.iter().map(|&zi| prof.eval_phi(zi)).collect();
    let s = prof.s;
    let a = 0.356;
    let mat = weighted_jac(&p, s, a, dz);
    // test vector: gaussian bump
    let v: Vec<f64> = z.iter().map(|&zi| (-zi * zi / 18.0).exp()).collect();
    let mv = mat.matvec(&v);
    // E J E^{-1} v by finite differences on rhs_steady
    let eps = 1e-6;
    let mut f0 = vec![0.0; n];
    rhs_steady(&p, s, dz, &mut f0);
    let pd: Vec<f64> = (0..n)
        .map(|i| p[i] + eps * (-a * z[i]).exp() * v[i])
        .collect();
    let mut f1 = vec![0.0; n];
    rhs_steady(&pd, s, dz, &mut f1);
    let mut worst = 0.0_f64;
    let mut wi = 0;
    for i in 4..n - 4 {
        let fd = (a * z[i]).exp() * (f1[i] - f0[i]) / eps;
        if (fd - mv[i]).abs() > worst {
            worst = (fd - mv[i]).abs();
            wi = i;
        }
    }
    println!(
        "worst |E J E^-1 v - M v| = {worst:.3e} at z={:.1} (|Mv| there {:.3e})",
        z[wi],
        mv[wi].abs()
    );
}
