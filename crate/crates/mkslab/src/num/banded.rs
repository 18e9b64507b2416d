use crate::{Error, Result};

/// General band matrix with `kl` subdiagonals and `ku` superdiagonals,
/// stored LAPACK style with `kl` spare rows on top so factorization can
/// happen in place. Entry (i, j) lives at band row `kl + ku + i - j`.
#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        let ldab = 2 * kl + ku + 1;
        BandedMatrix { n, kl, ku, data: vec![0.0; ldab * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        (self.kl + self.ku + i - j) * self.n + j
    }

    #[inline]
    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j <= i + self.ku && i <= j + self.kl
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band kl={} ku={}", self.kl, self.ku);
        let s = self.slot(i, j);
        self.data[s] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band kl={} ku={}", self.kl, self.ku);
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[self.slot(i, j)]
        } else {
            0.0
        }
    }

    /// Zero a full row inside the band, the first step of replacing it with a
    /// boundary closure.
    pub fn clear_row(&mut self, i: usize) {
        let lo = i.saturating_sub(self.kl);
        let hi = (i + self.ku).min(self.n - 1);
        for j in lo..=hi {
            let s = self.slot(i, j);
            self.data[s] = 0.0;
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            let mut acc = 0.0;
            for j in lo..=hi {
                acc += self.data[self.slot(i, j)] * x[j];
            }
            y[i] = acc;
        }
        y
    }

    /// Band transpose: (i, j) moves to (j, i), swapping the bandwidths. Used
    /// for adjoint solves without forming anything dense.
    pub fn transpose(&self) -> BandedMatrix {
        let mut t = BandedMatrix::new(self.n, self.ku, self.kl);
        for i in 0..self.n {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            for j in lo..=hi {
                let v = self.data[self.slot(i, j)];
                if v != 0.0 {
                    t.set(j, i, v);
                }
            }
        }
        t
    }

    /// LU factorization with partial pivoting, consuming the matrix. Fill-in
    /// stays inside the widened band, which is why storage reserves `kl`
    /// extra superdiagonal rows.
    pub fn factor(mut self) -> Result<BandedLu> {
        let n = self.n;
        let (kl, ku) = (self.kl, self.ku);
        let kv = kl + ku;
        let mut ipiv = vec![0usize; n];
        let mut ju = 0usize;
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let mut jp = 0usize;
            let mut pmax = 0.0f64;
            for p in 0..=km {
                let v = self.data[(kv + p) * n + j].abs();
                if v > pmax {
                    pmax = v;
                    jp = p;
                }
            }
            let pivot = self.data[(kv + jp) * n + j];
            if pivot == 0.0 || !pivot.is_finite() {
                return Err(Error::SingularJacobian(format!(
                    "band factorization broke down at column {j}"
                )));
            }
            ipiv[j] = j + jp;
            ju = ju.max((j + ku + jp).min(n - 1));
            if jp != 0 {
                for jj in j..=ju {
                    let r1 = (kv + j - jj) * n + jj;
                    let r2 = (kv + j + jp - jj) * n + jj;
                    self.data.swap(r1, r2);
                }
            }
            if km > 0 {
                let d = self.data[kv * n + j];
                for p in 1..=km {
                    self.data[(kv + p) * n + j] /= d;
                }
                for jj in (j + 1)..=ju {
                    let ujj = self.data[(kv + j - jj) * n + jj];
                    if ujj != 0.0 {
                        for p in 1..=km {
                            let m = self.data[(kv + p) * n + j];
                            self.data[(kv + j + p - jj) * n + jj] -= m * ujj;
                        }
                    }
                }
            }
        }
        Ok(BandedLu { n, kl, ku, data: self.data, ipiv })
    }
}

/// Factored form produced by [`BandedMatrix::factor`]; solves share the
/// factorization across many right-hand sides.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
    ipiv: Vec<usize>,
}

impl BandedLu {
    pub fn solve_in_place(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let kv = self.kl + self.ku;
        if self.kl > 0 {
            for j in 0..n {
                let p = self.ipiv[j];
                if p != j {
                    b.swap(j, p);
                }
                let km = self.kl.min(n - 1 - j);
                let bj = b[j];
                if bj != 0.0 {
                    for q in 1..=km {
                        b[j + q] -= self.data[(kv + q) * n + j] * bj;
                    }
                }
            }
        }
        for j in (0..n).rev() {
            let bj = b[j] / self.data[kv * n + j];
            b[j] = bj;
            if bj != 0.0 {
                let lo = j.saturating_sub(kv);
                for i in lo..j {
                    b[i] -= self.data[(kv + i - j) * n + j] * bj;
                }
            }
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

/// Pentadiagonal system with periodic wrap-around, solved as a plain band
/// factorization plus a rank-4 Woodbury correction for the four corner rows.
#[derive(Debug)]
pub struct CyclicPenta {
    n: usize,
    lu: BandedLu,
    // Columns of B^{-1} [e_0, e_1, e_{n-2}, e_{n-1}].
    w: [Vec<f64>; 4],
    // Inverse of the 4x4 capacity matrix I + V^T B^{-1} U.
    cap_inv: [[f64; 4]; 4],
    // Wrapped coefficients of rows 0, 1, n-2, n-1.
    c_m2_0: f64,
    c_m1_0: f64,
    c_m2_1: f64,
    c_p2_nm2: f64,
    c_p1_nm1: f64,
    c_p2_nm1: f64,
}

impl CyclicPenta {
    /// Factor the cyclic matrix with diagonals `d[k][i] = M[i, (i + k - 2) mod n]`
    /// for k = 0..5 covering offsets -2..=2. All five slices must have
    /// length n, and n must be at least 6 so the corners clear the band.
    pub fn factor(diags: [&[f64]; 5]) -> Result<CyclicPenta> {
        let n = diags[0].len();
        if n < 6 {
            return Err(Error::InvalidArgument(
                "cyclic pentadiagonal solve needs at least 6 unknowns".into(),
            ));
        }
        if diags.iter().any(|d| d.len() != n) {
            return Err(Error::InvalidArgument("diagonal slices disagree on length".into()));
        }
        let [dm2, dm1, d0, dp1, dp2] = diags;

        let mut band = BandedMatrix::new(n, 2, 2);
        for i in 0..n {
            if i >= 2 {
                band.set(i, i - 2, dm2[i]);
            }
            if i >= 1 {
                band.set(i, i - 1, dm1[i]);
            }
            band.set(i, i, d0[i]);
            if i + 1 < n {
                band.set(i, i + 1, dp1[i]);
            }
            if i + 2 < n {
                band.set(i, i + 2, dp2[i]);
            }
        }
        let lu = band.factor()?;

        let mut w: [Vec<f64>; 4] = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        let rows = [0usize, 1, n - 2, n - 1];
        for (col, &r) in rows.iter().enumerate() {
            let mut e = vec![0.0; n];
            e[r] = 1.0;
            lu.solve_in_place(&mut e);
            w[col] = e;
        }

        let c_m2_0 = dm2[0];
        let c_m1_0 = dm1[0];
        let c_m2_1 = dm2[1];
        let c_p2_nm2 = dp2[n - 2];
        let c_p1_nm1 = dp1[n - 1];
        let c_p2_nm1 = dp2[n - 1];
        let vt = |y: &[f64]| -> [f64; 4] {
            [
                c_m2_0 * y[n - 2] + c_m1_0 * y[n - 1],
                c_m2_1 * y[n - 1],
                c_p2_nm2 * y[0],
                c_p1_nm1 * y[0] + c_p2_nm1 * y[1],
            ]
        };
        let mut cap = [[0.0f64; 4]; 4];
        for (col, wc) in w.iter().enumerate() {
            let v = vt(wc);
            for row in 0..4 {
                cap[row][col] = v[row] + if row == col { 1.0 } else { 0.0 };
            }
        }
        let cap_inv = invert4(&cap).ok_or_else(|| {
            Error::SingularJacobian("cyclic corner correction is singular".into())
        })?;

        Ok(CyclicPenta {
            n,
            lu,
            w,
            cap_inv,
            c_m2_0,
            c_m1_0,
            c_m2_1,
            c_p2_nm2,
            c_p1_nm1,
            c_p2_nm1,
        })
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        self.lu.solve_in_place(b);
        let v = [
            self.c_m2_0 * b[n - 2] + self.c_m1_0 * b[n - 1],
            self.c_m2_1 * b[n - 1],
            self.c_p2_nm2 * b[0],
            self.c_p1_nm1 * b[0] + self.c_p2_nm1 * b[1],
        ];
        let mut t = [0.0f64; 4];
        for r in 0..4 {
            t[r] = (0..4).map(|c| self.cap_inv[r][c] * v[c]).sum();
        }
        for (col, wc) in self.w.iter().enumerate() {
            let tc = t[col];
            if tc != 0.0 {
                for i in 0..n {
                    b[i] -= wc[i] * tc;
                }
            }
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

fn invert4(m: &[[f64; 4]; 4]) -> Option<[[f64; 4]; 4]> {
    // Gauss-Jordan with partial pivoting on a 4x8 tableau.
    let mut t = [[0.0f64; 8]; 4];
    for i in 0..4 {
        t[i][..4].copy_from_slice(&m[i]);
        t[i][4 + i] = 1.0;
    }
    for c in 0..4 {
        let mut p = c;
        for r in (c + 1)..4 {
            if t[r][c].abs() > t[p][c].abs() {
                p = r;
            }
        }
        if t[p][c].abs() < 1e-300 {
            return None;
        }
        t.swap(c, p);
        let d = t[c][c];
        for v in t[c].iter_mut() {
            *v /= d;
        }
        for r in 0..4 {
            if r != c {
                let f = t[r][c];
                if f != 0.0 {
                    for k in 0..8 {
                        t[r][k] -= f * t[c][k];
                    }
                }
            }
        }
    }
    let mut out = [[0.0f64; 4]; 4];
    for i in 0..4 {
        out[i].copy_from_slice(&t[i][4..]);
    }
    Some(out)
}
