//! Single-qudit synthesis of two-level unitaries from the generators.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ir::Circuit;
use crate::semantics::Matrix;

type C64 = Complex64;

/// 2×2 complex matrix, row-major.
pub type Unitary2 = [[C64; 2]; 2];

const DEGENERATE: f64 = 1e-12;

/// `(θ, α, β, γ)` with `U = e^{iθ} P(α) H P(β) H P(γ)`, `P(φ) = diag(1, e^{iφ})`.
pub fn two_level_euler(u: &Unitary2) -> (f64, f64, f64, f64) {
    // P(α)HP(β)HP(γ) = e^{iβ/2} [[c, −is e^{iγ}], [−is e^{iα}, c e^{i(α+γ)}]]
    // with c = cos(β/2), s = sin(β/2).
    let (u00, u01, u10, u11) = (u[0][0], u[0][1], u[1][0], u[1][1]);
    let beta = 2.0 * u10.norm().atan2(u00.norm());
    if u10.norm() <= DEGENERATE {
        let t = u00.arg();
        return (t, u11.arg() - t, 0.0, 0.0);
    }
    if u00.norm() <= DEGENERATE {
        let t = u01.arg();
        return (t, u10.arg() - t, beta, 0.0);
    }
    let a00 = u00.arg();
    (
        a00 - beta / 2.0,
        u10.arg() - a00 + FRAC_PI_2,
        beta,
        u01.arg() - a00 + FRAC_PI_2,
    )
}

pub fn unitarity_residual2(u: &Unitary2) -> f64 {
    let m = to_matrix(u);
    m.unitarity_residual()
}

pub fn to_matrix(u: &Unitary2) -> Matrix {
    Matrix::from_rows(&[u[0].to_vec(), u[1].to_vec()]).expect("2x2")
}

/// Circuit acting as `u` on `span{|r⟩, |r+1⟩}` and as the identity elsewhere.
pub fn synth_two_level(u: &Unitary2, d: usize, r: usize) -> Result<Circuit> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if r + 2 > d {
        return Err(Error::IndexOutOfRange {
            path: "synth_two_level".into(),
            what: "level",
            value: r,
            limit: d - 1,
        });
    }
    let resid = unitarity_residual2(u);
    if resid > 1e-9 {
        return Err(Error::NotUnitary(resid));
    }
    let (theta, alpha, beta, gamma) = two_level_euler(u);
    let p = |phi: f64| Circuit::ctrl(r + 1, Circuit::phase(phi));
    let h = Circuit::hadamard(r);
    // Written order: P_r(θ)P_{r+1}(θ) ∘ P(α) ∘ H ∘ P(β) ∘ H ∘ P(γ).
    let mut gates = vec![p(gamma), h.clone(), p(beta), h, p(alpha)];
    gates.push(p(theta));
    gates.push(Circuit::ctrl(r, Circuit::phase(theta)));
    Ok(Circuit::chain(1, gates))
}

/// `(θ, a, b, c)` with `U = e^{iθ} P(a) Rx(b) P(c)`, `Rx(b) = [[cos b, i sin b], [i sin b, cos b]]`.
pub fn phase_rx_phase(u: &Unitary2) -> (f64, f64, f64, f64) {
    // Rx(b) = e^{ib} H P(−2b) H.
    let (t, al, be, ga) = two_level_euler(u);
    let b = -be / 2.0;
    (t - b, al, b, ga)
}

/// `(θ, a, b, c)` with `U = e^{iθ} Rx(a) P(b) Rx(c)`.
pub fn rx_phase_rx(u: &Unitary2) -> (f64, f64, f64, f64) {
    // H U H = e^{i(θ+a+c)} P(−2a) H P(b) H P(−2c).
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let h = [[s, s], [s, -s]];
    let v = mul2(&mul2(&h, u), &h);
    let (t, al, be, ga) = two_level_euler(&v);
    let (a, c) = (-al / 2.0, -ga / 2.0);
    (t - a - c, a, be, c)
}

pub fn mul2(a: &Unitary2, b: &Unitary2) -> Unitary2 {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn phase2(phi: f64) -> Unitary2 {
    let z = C64::new(0.0, 0.0);
    [[C64::new(1.0, 0.0), z], [z, C64::from_polar(1.0, phi)]]
}

pub fn rx2(t: f64) -> Unitary2 {
    let c = C64::new(t.cos(), 0.0);
    let s = C64::new(0.0, t.sin());
    [[c, s], [s, c]]
}
