//! Equations derivable in the qudit theory, kept as soundness checks.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use super::qc::x_below_controlled;
use super::synth::{mul2, phase2, phase_rx_phase, rx2, rx_phase_rx, Unitary2};
use super::{
    ccp, commute, comp, flipped, pk, qq, AxiomSchema, ParamSpec as S, Params, Term, Theory,
};
use crate::error::Result;
use crate::ir::{h_gate, rx_gate, x_gate, Circuit};

const N: S = S::NONE;

pub(super) fn schemas() -> Vec<AxiomSchema> {
    let s = |name, spec, build| AxiomSchema::new(name, Theory::QcDerived, spec, build);
    let family = |name, build| s(name, N.split(6).angles(2).rungs(2), build);
    vec![
        s("0Phase", N, zero_phase),
        s("πSign", N, pi_sign),
        s("XII+1", N.rungs(1), x_adjacent_inv),
        s("XInv", N.levels(2), x_inv),
        s("HInv", N.levels(2), h_inv),
        s("HTot", N.levels(2), h_tot),
        s("RxTot", N.levels(2).angles(1), rx_tot),
        s("HDec", N.levels(2), h_dec),
        s("XCtrl", N.levels(2).digits(1), x_ctrl),
        s("XCtrlSym", N.levels(2).digits(1), x_ctrl_sym),
        s("RxSym", N.levels(2).angles(1), rx_sym),
        s("XX1", N.levels(3), xx1),
        s("XX2", N.levels(3), xx2),
        s("HCH", N.levels(2), hch),
        s("CHC", N.levels(2), chc),
        s("PHP", N.levels(2), php),
        s("HPH", N.levels(2), hph),
        s("CXC", N.levels(2).digits(1).angles(1), cxc),
        s("CHDec", N.rungs(1).digits(1), ch_dec),
        s("EP", N.digits(1).angles(1), ep),
        s("CCPDec", N.digits(2).angles(1), ccp_dec),
        s("CCCPDec", N.digits(3).angles(1), cccp_dec),
        family("CCP-CP", ccp_cp),
        family("CCn-CP", ccn_cp),
        family("CH-CP", ch_cp),
        family("CCP-CCP≠", ccp_ccp_ne),
        family("CCP-CCP", ccp_ccp),
        family("CCP-CH≠", ccp_ch_ne),
        family("CCn-CP≠", ccn_cp_ne),
        family("CCn-CH≠", ccn_ch_ne),
        family("CH-CH≠", ch_ch_ne),
        family("CNOT-CH≠", cnot_ch_ne),
        family("CCP-CNOT", ccp_cnot),
        family("CCn-CH2π", ccn_ch_2pi),
        family("CCn-CCn4", ccn_ccn_4),
        family("CCn-CCn3", ccn_ccn_3),
        family("CCP-CCn", ccp_ccn),
        family("CCn-CCn", ccn_ccn),
        s("H-CCP", N.levels(3).digits(1).angles(1), h_ccp),
        s("CH-HC", N.levels(3).levels2(3), ch_hc),
        s("CX-HC", N.levels(3).levels2(3), cx_hc),
        s("CX-XC", N.levels(3).levels2(3), cx_xc),
        s("RxXX", N.levels(3).angles(1), rx_xx),
        s("CX-XC-CX", N.levels(2), cx_xc_cx),
        s("EulerB", N.levels(2).angles(3), euler_b),
        s("Euler", N.levels(2).angles(3), euler),
    ]
}

fn zero_phase(_: usize, _: &Params) -> Result<(Term, Term)> {
    qq(Circuit::phase(0.0), Circuit::empty())
}

fn pi_sign(_: usize, _: &Params) -> Result<(Term, Term)> {
    qq(Circuit::phase(-PI), Circuit::phase(PI))
}

fn involution(g: Circuit) -> Result<(Term, Term)> {
    qq(Circuit::seq(g.clone(), g), Circuit::wire())
}

fn x_adjacent_inv(d: usize, p: &Params) -> Result<(Term, Term)> {
    let r = p.rungs[0];
    involution(x_gate(d, r, r + 1)?)
}

fn x_inv(d: usize, p: &Params) -> Result<(Term, Term)> {
    involution(x_gate(d, p.levels[0], p.levels[1])?)
}

fn h_inv(d: usize, p: &Params) -> Result<(Term, Term)> {
    involution(h_gate(d, p.levels[0], p.levels[1])?)
}

fn totalised(d: usize, g: Circuit) -> Result<(Term, Term)> {
    qq(
        Circuit::chain(2, (0..d).map(|k| Circuit::ctrl(k, g.clone())).collect()),
        Circuit::par(Circuit::wire(), g),
    )
}

fn h_tot(d: usize, p: &Params) -> Result<(Term, Term)> {
    totalised(d, h_gate(d, p.levels[0], p.levels[1])?)
}

fn rx_tot(d: usize, p: &Params) -> Result<(Term, Term)> {
    totalised(d, rx_gate(d, p.levels[0], p.levels[1], p.angles[0])?)
}

fn h_dec(d: usize, p: &Params) -> Result<(Term, Term)> {
    let (i, j) = (p.levels[0], p.levels[1]);
    qq(
        h_gate(d, i, j)?,
        comp(
            1,
            vec![
                pk(j, -FRAC_PI_2),
                rx_gate(d, i, j, FRAC_PI_4)?,
                pk(j, -FRAC_PI_2),
            ],
        ),
    )
}

/// `ctrl_k X^{(i,j)} = (W ⊗ H) ∘ ctrl_k ctrl_z(π) ∘ (W ⊗ H)` with `H = H^{(a,z)}`.
fn ctrl_x_via(d: usize, k: usize, i: usize, j: usize, a: usize, z: usize) -> Result<(Term, Term)> {
    let h = Circuit::par(Circuit::wire(), h_gate(d, a, z)?);
    qq(
        Circuit::ctrl(k, x_gate(d, i, j)?),
        comp(2, vec![h.clone(), ccp(k, z, PI), h]),
    )
}

fn x_ctrl(d: usize, p: &Params) -> Result<(Term, Term)> {
    let (i, j) = (p.levels[0], p.levels[1]);
    ctrl_x_via(d, p.digits[0], i, j, i, j)
}

fn x_ctrl_sym(d: usize, p: &Params) -> Result<(Term, Term)> {
    let (i, j) = (p.levels[0], p.levels[1]);
    ctrl_x_via(d, p.digits[0], i, j, j, i)
}

fn rx_sym(d: usize, p: &Params) -> Result<(Term, Term)> {
    let (i, j, t) = (p.levels[0], p.levels[1], p.angles[0]);
    qq(rx_gate(d, i, j, t)?, rx_gate(d, j, i, t)?)
}

fn xx1(d: usize, p: &Params) -> Result<(Term, Term)> {
    let [i, j, k] = [p.levels[0], p.levels[1], p.levels[2]];
    let x = |a, b| x_gate(d, a, b);
    qq(
        comp(1, vec![x(i, j)?, x(j, k)?]),
        comp(1, vec![x(i, k)?, x(i, j)?]),
    )
}

fn xx2(d: usize, p: &Params) -> Result<(Term, Term)> {
    let [i, j, k] = [p.levels[0], p.levels[1], p.levels[2]];
    let x = |a, b| x_gate(d, a, b);
    qq(
        comp(1, vec![x(i, j)?, x(j, k)?]),
        comp(1, vec![x(j, k)?, x(i, k)?]),
    )
}

fn hch(d: usize, p: &Params) -> Result<(Term, Term)> {
    let (i, j) = (p.levels[0], p.levels[1]);
    let h = h_gate(d, i, j)?;
    qq(comp(1, vec![h.clone(), pk(j, PI), h]), x_gate(d, i, j)?)
}

fn chc(d: usize, p: &Params) -> Result<(Term, Term)> {
    let (i, j) = (p.levels[0], p.levels[1]);
    let (h, x) = (h_gate(d, i, j)?, x_gate(d, i, j)?);
    qq(
        comp(1, vec![pk(j, PI), h.clone(), pk(j, PI)]),
        comp(1, vec![pk(i, PI), pk(j, PI), x.clone(), h, x]),
    )
}

fn php(d: usize, p: &Params) -> Result<(Term, Term)> {
    let (i, j) = (p.levels[0], p.levels[1]);
    let h = h_gate(d, i, j)?;
    qq(
        comp(1, vec![pk(j, FRAC_PI_2), h.clone(), pk(j, FRAC_PI_2)]),
        comp(
            1,
            vec![
                pk(i, FRAC_PI_4),
                pk(j, FRAC_PI_4),
                h.clone(),
                pk(j, -FRAC_PI_2),
                h,
            ],
        ),
    )
}

fn hph(d: usize, p: &Params) -> Result<(Term, Term)> {
    let (i, j) = (p.levels[0], p.levels[1]);
    let h = h_gate(d, i, j)?;
    qq(
        comp(1, vec![h.clone(), pk(j, FRAC_PI_2), h.clone()]),
        comp(
            1,
            vec![
                pk(i, FRAC_PI_4),
                pk(j, FRAC_PI_4),
                pk(j, -FRAC_PI_2),
                h,
                pk(j, -FRAC_PI_2),
            ],
        ),
    )
}

fn cxc(d: usize, p: &Params) -> Result<(Term, Term)> {
    let (k, l, m, t) = (p.levels[0], p.levels[1], p.digits[0], p.angles[0]);
    let x = Circuit::par(x_gate(d, k, l)?, Circuit::wire());
    qq(comp(2, vec![x.clone(), ccp(k, m, t), x]), ccp(l, m, t))
}

/// `W' = P(π/2) H P(φ) H P(−π/2)` on the rung `r`, `P = P_{r+1}`.
fn rung_frame(r: usize, phi: f64) -> Circuit {
    let h = Circuit::hadamard(r);
    comp(
        1,
        vec![
            pk(r + 1, FRAC_PI_2),
            h.clone(),
            pk(r + 1, phi),
            h,
            pk(r + 1, -FRAC_PI_2),
        ],
    )
}

/// `ctrl_m H(r) = (W ⊗ W') ∘ ctrl_m ctrl_{r+1}(π) ∘ (W ⊗ W'†)`.
pub(crate) fn controlled_hadamard(r: usize, m: usize) -> Circuit {
    let w = Circuit::par(Circuit::wire(), rung_frame(r, FRAC_PI_4));
    let w_dag = Circuit::par(Circuit::wire(), rung_frame(r, -FRAC_PI_4));
    comp(2, vec![w, ccp(m, r + 1, PI), w_dag])
}

fn ch_dec(_: usize, p: &Params) -> Result<(Term, Term)> {
    let (r, m) = (p.rungs[0], p.digits[0]);
    qq(
        Circuit::ctrl(m, Circuit::hadamard(r)),
        controlled_hadamard(r, m),
    )
}

fn ep(d: usize, p: &Params) -> Result<(Term, Term)> {
    let (k, t) = (p.digits[0], p.angles[0]);
    let x = x_gate(d, 0, k)?;
    qq(pk(k, t), comp(1, vec![x.clone(), pk(0, t), x]))
}

/// `ctrl_m ctrl_n(β) = (W ⊗ P_n(β/d)) ∘ ∏_{m'≠m} G_{m'}(β/d)`, where `G_{m'}`
/// conjugates a level-pair phase by `X^{(m,m')}` controlled from below.
pub(crate) fn ccp_decomposition(d: usize, m: usize, n: usize, beta: f64) -> Result<Circuit> {
    let x = beta / d as f64;
    let mut gates = Vec::new();
    for m2 in (0..d).filter(|&m2| m2 != m) {
        let cx = x_below_controlled(d, m, m2, n)?;
        let top = |s: f64| {
            Circuit::par(
                comp(1, vec![pk(m, s * x / 2.0), pk(m2, -s * x / 2.0)]),
                Circuit::wire(),
            )
        };
        gates.extend([cx.clone(), top(-1.0), cx, top(1.0)]);
    }
    gates.push(Circuit::par(Circuit::wire(), pk(n, x)));
    Ok(Circuit::chain(2, gates))
}

/// `ctrl_a ctrl_b ctrl_c(α) = ∏_{b*≠b} K_{b*}(α/d) ∘ CCP_{13}(α/d)` with
/// `K_{b*}(x) = (W ⊗ D(x)) ∘ CX ∘ (W ⊗ D(−x)) ∘ CX`, `D = ctrl_b ctrl_c` on
/// the lower pair and `CX = ctrl_a(X^{(b,b*)} ⊗ W)`. Nothing on the right
/// carries more than two controls.
pub(crate) fn cccp_decomposition(
    d: usize,
    a: usize,
    b: usize,
    c: usize,
    alpha: f64,
) -> Result<Circuit> {
    let x = alpha / d as f64;
    let mut gates = vec![Circuit::ctrl(a, Circuit::par(Circuit::wire(), pk(c, x)))];
    let low = |t: f64| Circuit::par(Circuit::wire(), ccp(b, c, t));
    for b2 in (0..d).filter(|&b2| b2 != b) {
        let cx = Circuit::ctrl(a, Circuit::par(x_gate(d, b, b2)?, Circuit::wire()));
        gates.extend([cx.clone(), low(-x), cx, low(x)]);
    }
    Ok(Circuit::chain(3, gates))
}

fn ccp_dec(d: usize, p: &Params) -> Result<(Term, Term)> {
    let (m, n, t) = (p.digits[0], p.digits[1], p.angles[0]);
    qq(ccp(m, n, t), ccp_decomposition(d, m, n, t)?)
}

fn cccp_dec(d: usize, p: &Params) -> Result<(Term, Term)> {
    let (a, b, c, t) = (p.digits[0], p.digits[1], p.digits[2], p.angles[0]);
    qq(
        Circuit::ctrl(a, ccp(b, c, t)),
        cccp_decomposition(d, a, b, c, t)?,
    )
}

/// Two-wire bodies placed under the distinct top controls of the family.
#[derive(Clone, Copy)]
enum Body {
    /// `P_a(θ) ⊗ W`.
    P,
    /// `ctrl_a P_b(θ)`.
    Cp,
    /// `ctrl_a P_b(π)`.
    Cn,
    /// `H(r) ⊗ W`.
    H,
    /// `W ⊗ H(r)`.
    HLow,
    /// `X^{(a,b)} ⊗ W`.
    X,
}

fn body(d: usize, kind: Body, a: usize, b: usize, r: usize, t: f64) -> Result<Circuit> {
    let w = Circuit::wire;
    Ok(match kind {
        Body::P => Circuit::par(pk(a, t), w()),
        Body::Cp => ccp(a, b, t),
        Body::Cn => ccp(a, b, PI),
        Body::H => Circuit::par(Circuit::hadamard(r), w()),
        Body::HLow => Circuit::par(w(), Circuit::hadamard(r)),
        Body::X => Circuit::par(x_gate(d, a, b)?, w()),
    })
}

/// `ctrl_k(F) ∘ ctrl_ℓ(G) = ctrl_ℓ(G) ∘ ctrl_k(F)`, `k ≠ ℓ`. With `fresh`
/// set, `G` draws its own inner digits and rung.
fn differently_controlled(
    d: usize,
    p: &Params,
    f: Body,
    g: Body,
    fresh: bool,
) -> Result<(Term, Term)> {
    let q = &p.digits;
    let (k, l) = (q[0], q[1]);
    let fc = body(d, f, q[2], q[3], p.rungs[0], p.angles[0])?;
    let gc = if fresh {
        body(d, g, q[4], q[5], p.rungs[1], p.angles[1])?
    } else {
        body(d, g, q[2], q[3], p.rungs[0], p.angles[1])?
    };
    commute(3, Circuit::ctrl(k, fc), Circuit::ctrl(l, gc))
}

macro_rules! family {
    ($($name:ident: $f:ident, $g:ident, $fresh:expr;)*) => {
        $(
            fn $name(d: usize, p: &Params) -> Result<(Term, Term)> {
                differently_controlled(d, p, Body::$f, Body::$g, $fresh)
            }
        )*
    };
}

family! {
    ccp_cp: P, P, false;
    ccn_cp: Cn, P, false;
    ch_cp: H, P, false;
    ccp_ccp_ne: Cp, Cp, true;
    ccp_ccp: Cp, Cp, false;
    ccp_ch_ne: Cp, H, true;
    ccn_cp_ne: Cn, P, true;
    ccn_ch_ne: Cn, H, true;
    ch_ch_ne: H, H, true;
    cnot_ch_ne: X, H, true;
    ccp_cnot: Cp, X, false;
    ccn_ch_2pi: Cn, HLow, false;
    ccn_ccn_4: Cn, Cn, true;
    ccn_ccn_3: Cn, Cp, true;
    ccp_ccn: Cp, Cn, false;
    ccn_ccn: Cn, Cn, false;
}

fn h_ccp(d: usize, p: &Params) -> Result<(Term, Term)> {
    let [m, l, b] = [p.levels[0], p.levels[1], p.levels[2]];
    let h = Circuit::par(Circuit::wire(), h_gate(d, m, l)?);
    commute(2, h, ccp(p.digits[0], b, p.angles[0]))
}

/// `ctrl_k(g on ℓ, m)` against `swap ∘ ctrl_n(h on i, j) ∘ swap`; the two
/// act on disjoint pairs of basis states.
fn crossed(
    p: &Params,
    g: impl Fn(usize, usize) -> Result<Circuit>,
    h: impl Fn(usize, usize) -> Result<Circuit>,
) -> Result<(Term, Term)> {
    let [i, j, k] = [p.levels[0], p.levels[1], p.levels[2]];
    let [l, m, n] = [p.levels2[0], p.levels2[1], p.levels2[2]];
    commute(
        2,
        Circuit::ctrl(k, g(l, m)?),
        flipped(Circuit::ctrl(n, h(i, j)?)),
    )
}

fn ch_hc(d: usize, p: &Params) -> Result<(Term, Term)> {
    crossed(p, |a, b| h_gate(d, a, b), |a, b| h_gate(d, a, b))
}

fn cx_hc(d: usize, p: &Params) -> Result<(Term, Term)> {
    crossed(p, |a, b| x_gate(d, a, b), |a, b| h_gate(d, a, b))
}

fn cx_xc(d: usize, p: &Params) -> Result<(Term, Term)> {
    crossed(p, |a, b| x_gate(d, a, b), |a, b| x_gate(d, a, b))
}

fn rx_xx(d: usize, p: &Params) -> Result<(Term, Term)> {
    let [i, j, k] = [p.levels[0], p.levels[1], p.levels[2]];
    let t = p.angles[0];
    qq(
        comp(1, vec![rx_gate(d, i, k, t)?, x_gate(d, j, k)?]),
        comp(1, vec![x_gate(d, j, k)?, rx_gate(d, i, j, t)?]),
    )
}

fn cx_xc_cx(d: usize, p: &Params) -> Result<(Term, Term)> {
    let (i, j) = (p.levels[0], p.levels[1]);
    let a = Circuit::ctrl(i, x_gate(d, i, j)?);
    let b = flipped(a.clone());
    qq(
        comp(2, vec![a.clone(), b.clone(), a.clone()]),
        comp(2, vec![b.clone(), a, b]),
    )
}

/// `e^{iθ}` on both levels of the pair.
fn pair_phase(i: usize, j: usize, t: f64) -> Circuit {
    comp(1, vec![pk(i, t), pk(j, t)])
}

fn euler_b(d: usize, p: &Params) -> Result<(Term, Term)> {
    let (i, j) = (p.levels[0], p.levels[1]);
    let a = &p.angles;
    let u: Unitary2 = mul2(&mul2(&phase2(a[0]), &rx2(a[1])), &phase2(a[2]));
    let (t, b1, b2, b3) = rx_phase_rx(&u);
    let rx = |x| rx_gate(d, i, j, x);
    qq(
        comp(1, vec![pk(j, a[0]), rx(a[1])?, pk(j, a[2])]),
        comp(1, vec![pair_phase(i, j, t), rx(b1)?, pk(j, b2), rx(b3)?]),
    )
}

fn euler(d: usize, p: &Params) -> Result<(Term, Term)> {
    let (i, j) = (p.levels[0], p.levels[1]);
    let a = &p.angles;
    let u: Unitary2 = mul2(&mul2(&rx2(a[0]), &phase2(a[1])), &rx2(a[2]));
    let (t, b1, b2, b3) = phase_rx_phase(&u);
    let rx = |x| rx_gate(d, i, j, x);
    qq(
        comp(1, vec![rx(a[0])?, pk(j, a[1]), rx(a[2])?]),
        comp(1, vec![pair_phase(i, j, t), pk(j, b1), rx(b2)?, pk(j, b3)]),
    )
}
