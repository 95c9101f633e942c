//! Angle relations behind the parametrised axioms: the two-level Euler
//! rewrite, SO(3) Euler extraction, and the split-point root.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Zero tests on `z`, `z'` and on `r ∓ 1` use this bound.
pub const BRANCH_TOL: f64 = 1e-12;

/// Representative in `[0, 2π)`.
pub fn canonical_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Right-hand angles `(β0, β1, β2, β3)` of the two-level Euler rewrite, in `[0, 2π)`.
pub fn eh_angles(alpha0: f64, alpha2: f64) -> (f64, f64, f64, f64) {
    let (s, t) = ((alpha0 + alpha2) / 2.0, (alpha0 - alpha2) / 2.0);
    let z = Complex64::new(-s.sin(), t.cos());
    let zp = Complex64::new(s.cos(), -t.sin());
    let half = (PI + alpha0 + alpha2) / 2.0;
    let (b0, b1, b2, b3) = if zp.norm() <= BRANCH_TOL {
        let az = z.arg();
        (2.0 * az, half - az, half - az, 0.0)
    } else if z.norm() <= BRANCH_TOL {
        let azp = zp.arg();
        let m = (alpha0 + alpha2) / 2.0 - azp;
        (2.0 * azp, m, PI + m, 0.0)
    } else {
        let a = Complex64::new(0.0, 1.0) + (z.norm() / zp.norm());
        let a = a.arg();
        let (az, azp) = (z.arg(), zp.arg());
        (az + azp, -a + half - az, a + half - az, az - azp)
    };
    (
        canonical_angle(b0),
        canonical_angle(b1),
        canonical_angle(b2),
        canonical_angle(b3),
    )
}

/// Real 3×3 rotation, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3 {
    m: [[f64; 3]; 3],
}

/// Euler axis sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// `R = Rz(γ1) Rx(γ2) Rz(γ3)`.
    Zxz,
    /// `R = Rx(δ1) Rz(δ2) Rx(δ3)`.
    Xzx,
}

impl Rotation3 {
    /// Checks orthogonality and `det = +1` within `1e-9`.
    pub fn new(m: [[f64; 3]; 3]) -> Result<Self> {
        let r = Self { m };
        let resid = r.mul(&r.transpose()).max_diff(&Self::identity());
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        let resid = resid.max((det - 1.0).abs());
        if resid > 1e-9 {
            return Err(Error::NotRotation(resid));
        }
        Ok(r)
    }

    pub fn identity() -> Self {
        Self {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    pub fn rx(t: f64) -> Self {
        let (s, c) = t.sin_cos();
        Self {
            m: [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]],
        }
    }

    pub fn rz(t: f64) -> Self {
        let (s, c) = t.sin_cos();
        Self {
            m: [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// `Rz(a) Rx(b) Rz(c)`.
    pub fn zxz(a: f64, b: f64, c: f64) -> Self {
        Self::rz(a).mul(&Self::rx(b)).mul(&Self::rz(c))
    }

    /// `Rx(a) Rz(b) Rx(c)`.
    pub fn xzx(a: f64, b: f64, c: f64) -> Self {
        Self::rx(a).mul(&Self::rz(b)).mul(&Self::rx(c))
    }

    /// Entry `r_{i,j}`, one-based.
    pub fn r(&self, i: usize, j: usize) -> f64 {
        self.m[i - 1][j - 1]
    }

    pub fn rows(&self) -> [[f64; 3]; 3] {
        self.m
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..3).map(|k| self.m[i][k] * o.m[k][j]).sum();
            }
        }
        Self { m }
    }

    pub fn transpose(&self) -> Self {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.m[j][i];
            }
        }
        Self { m }
    }

    pub fn max_diff(&self, o: &Self) -> f64 {
        (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| (self.m[i][j] - o.m[i][j]).abs())
            .fold(0.0, f64::max)
    }
}

/// Euler angles of `r`. The middle angle lies in `[0, π]`; at gimbal lock the
/// last angle is set to 0.
pub fn euler_so3(r: &Rotation3, conv: Convention) -> (f64, f64, f64) {
    match conv {
        Convention::Xzx => {
            let r11 = r.r(1, 1);
            if (r11 - 1.0).abs() <= BRANCH_TOL {
                (r.r(3, 2).atan2(r.r(3, 3)), 0.0, 0.0)
            } else if (r11 + 1.0).abs() <= BRANCH_TOL {
                ((-r.r(3, 2)).atan2(r.r(3, 3)), PI, 0.0)
            } else {
                (
                    r.r(3, 1).atan2(r.r(2, 1)),
                    r11.clamp(-1.0, 1.0).acos(),
                    r.r(1, 3).atan2(-r.r(1, 2)),
                )
            }
        }
        Convention::Zxz => {
            let r33 = r.r(3, 3);
            if (r33 - 1.0).abs() <= BRANCH_TOL {
                ((-r.r(1, 2)).atan2(r.r(1, 1)), 0.0, 0.0)
            } else if (r33 + 1.0).abs() <= BRANCH_TOL {
                (r.r(1, 2).atan2(r.r(1, 1)), PI, 0.0)
            } else {
                (
                    r.r(1, 3).atan2(-r.r(2, 3)),
                    r33.clamp(-1.0, 1.0).acos(),
                    r.r(3, 1).atan2(r.r(3, 2)),
                )
            }
        }
    }
}

/// `(δ1, δ2, δ3)` with `Rz(γ1)Rx(γ2)Rz(γ3) = Rx(δ1)Rz(δ2)Rx(δ3)`.
pub fn swap_euler_order(g1: f64, g2: f64, g3: f64) -> (f64, f64, f64) {
    euler_so3(&Rotation3::zxz(g1, g2, g3), Convention::Xzx)
}

/// `N(x) = sin α1 cos x cos α3 + cos α1 sin α3 cos(α2 − x)`.
pub fn split_residual(a1: f64, a2: f64, a3: f64, x: f64) -> f64 {
    a1.sin() * x.cos() * a3.cos() + a1.cos() * a3.sin() * (a2 - x).cos()
}

/// A root of `N` in `[−π/2, π/2]` by bisection; 0 when `N` vanishes identically.
pub fn pi_split(a1: f64, a2: f64, a3: f64) -> f64 {
    // N(x) = p cos x + q sin x.
    let b = a1.cos() * a3.sin();
    let p = a1.sin() * a3.cos() + b * a2.cos();
    let q = b * a2.sin();
    if p.abs() <= 1e-15 && q.abs() <= 1e-15 {
        return 0.0;
    }
    let n = |x: f64| split_residual(a1, a2, a3, x);
    let (mut lo, mut hi) = (-FRAC_PI_2, FRAC_PI_2);
    let (mut flo, fhi) = (n(lo), n(hi));
    if flo.abs() <= 1e-12 {
        return lo;
    }
    if fhi.abs() <= 1e-12 {
        return hi;
    }
    debug_assert!(flo * fhi < 0.0, "endpoints have opposite signs");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = n(mid);
        if fm == 0.0 || hi - lo <= f64::EPSILON {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
