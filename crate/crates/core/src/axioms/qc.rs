//! Core and auxiliary schemata of the qudit theory.

use std::f64::consts::{PI, TAU};

use super::angles::{eh_angles, swap_euler_order};
use super::{
    ccp, commute, comp, flipped, pk, qq, AxiomSchema, ParamSpec as S, Params, Term, Theory,
};
use crate::error::Result;
use crate::ir::{h_gate, rx_gate, x_gate, Circuit};

const N: S = S::NONE;

pub(super) fn schemas() -> Vec<AxiomSchema> {
    let s = |name, spec, build| AxiomSchema::new(name, Theory::Qc, spec, build);
    vec![
        s("Sum", N.angles(2), sum),
        s("2π", N, two_pi),
        s("XH", N.levels(3), xh),
        s("H²", N.rungs(1), h_squared),
        s("HHd", N.levels(4), hhd),
        s("HPd", N.levels(3).angles(1), hpd),
        s("HCd", N.levels(3).digits(1), hcd),
        s("EH", N.levels(2).angles(2), eh),
        s("3Rx", N.levels(3).angles(3), three_rx),
        s("3CRx", N.levels(2).split(2).angles(3), three_crx),
        s("S", N, swap_decomposition),
        s("TP", N.angles(1), total_phase),
        s("TH", N.rungs(1), total_hadamard),
        s("PPc", N.split(4).angles(2), pp_c),
        s("Pπc", N.split(4).angles(1), ppi_c),
        s("ππdc", N.split(6), pipi_dc),
        s("HCc", N.split(4).rungs(1), hc_c),
        s("HHc", N.split(2).rungs(2), hh_c),
        s("HPc", N.split(4).rungs(1).angles(1), hp_c),
        s("ππc", N.split(4), pipi_c),
        s("CompP", N.digits(2).angles(1), comp_p),
        s("Compπ", N.digits(3), comp_pi),
    ]
}

fn sum(_: usize, p: &Params) -> Result<(Term, Term)> {
    let (a, b) = (p.angles[0], p.angles[1]);
    qq(
        Circuit::seq(Circuit::phase(a), Circuit::phase(b)),
        Circuit::phase(a + b),
    )
}

fn two_pi(_: usize, _: &Params) -> Result<(Term, Term)> {
    qq(Circuit::phase(TAU), Circuit::empty())
}

fn xh(d: usize, p: &Params) -> Result<(Term, Term)> {
    let [i, j, k] = [p.levels[0], p.levels[1], p.levels[2]];
    qq(
        comp(1, vec![x_gate(d, i, j)?, h_gate(d, i, k)?]),
        comp(1, vec![h_gate(d, j, k)?, x_gate(d, i, j)?]),
    )
}

fn h_squared(_: usize, p: &Params) -> Result<(Term, Term)> {
    let h = Circuit::hadamard(p.rungs[0]);
    qq(Circuit::seq(h.clone(), h), Circuit::wire())
}

fn hhd(d: usize, p: &Params) -> Result<(Term, Term)> {
    let l = &p.levels;
    commute(1, h_gate(d, l[0], l[1])?, h_gate(d, l[2], l[3])?)
}

fn hpd(d: usize, p: &Params) -> Result<(Term, Term)> {
    let l = &p.levels;
    commute(1, h_gate(d, l[0], l[1])?, pk(l[2], p.angles[0]))
}

fn hcd(d: usize, p: &Params) -> Result<(Term, Term)> {
    let l = &p.levels;
    let h = Circuit::par(h_gate(d, l[0], l[1])?, Circuit::wire());
    commute(2, h, ccp(l[2], p.digits[0], PI))
}

/// `H P_j(α0) H P_j(α2) H = P_j(β0) H P_i(β1) P_j(β2) H P_j(β3)` with `H = H^{(i,j)}`.
pub(crate) fn eh_pair(
    d: usize,
    i: usize,
    j: usize,
    a0: f64,
    a2: f64,
) -> Result<(Circuit, Circuit)> {
    let h = h_gate(d, i, j)?;
    let (b0, b1, b2, b3) = eh_angles(a0, a2);
    let lhs = comp(
        1,
        vec![h.clone(), pk(j, a0), h.clone(), pk(j, a2), h.clone()],
    );
    let rhs = comp(
        1,
        vec![pk(j, b0), h.clone(), pk(i, b1), pk(j, b2), h, pk(j, b3)],
    );
    Ok((lhs, rhs))
}

fn eh(d: usize, p: &Params) -> Result<(Term, Term)> {
    let (l, r) = eh_pair(d, p.levels[0], p.levels[1], p.angles[0], p.angles[1])?;
    qq(l, r)
}

fn three_rx(d: usize, p: &Params) -> Result<(Term, Term)> {
    let [i, j, k] = [p.levels[0], p.levels[1], p.levels[2]];
    let g = &p.angles;
    let (e1, e2, e3) = swap_euler_order(g[0], g[1], g[2]);
    let a = |t| rx_gate(d, i, j, t);
    let b = |t| rx_gate(d, j, k, t);
    qq(
        comp(1, vec![a(g[0])?, b(g[1])?, a(g[2])?]),
        comp(1, vec![b(e1)?, a(e2)?, b(e3)?]),
    )
}

fn three_crx(d: usize, p: &Params) -> Result<(Term, Term)> {
    let (i, j) = (p.levels[0], p.levels[1]);
    let (k, l) = (p.digits[0], p.digits[1]);
    let g = &p.angles;
    let (e1, e2, e3) = swap_euler_order(g[0], g[1], g[2]);
    // A acts on |k i⟩, |k j⟩ and B on |k j⟩, |l j⟩: a three-level chain.
    let a = |t| rx_gate(d, i, j, t).map(|r| Circuit::ctrl(k, r));
    let b = |t| rx_gate(d, k, l, t).map(|r| flipped(Circuit::ctrl(j, r)));
    qq(
        comp(2, vec![a(g[0])?, b(g[1])?, a(g[2])?]),
        comp(2, vec![b(e1)?, a(e2)?, b(e3)?]),
    )
}

/// `X^{(i,j)}` on the top wire, applied when the bottom wire holds `z`:
/// `(H^{(i,j)} ⊗ W) ∘ ctrl_j ctrl_z(π) ∘ (H^{(i,j)} ⊗ W)`.
pub(crate) fn x_below_controlled(d: usize, i: usize, j: usize, z: usize) -> Result<Circuit> {
    let h = Circuit::par(h_gate(d, i, j)?, Circuit::wire());
    Ok(comp(2, vec![h.clone(), ccp(j, z, PI), h]))
}

/// `∏_{i<j} T_{ij}` with `T_{ij} = A B A` exchanging `|i j⟩` and `|j i⟩`;
/// no swap occurs inside.
pub(crate) fn swap_as_controlled(d: usize) -> Result<Circuit> {
    let mut gates = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let a = Circuit::ctrl(i, x_gate(d, i, j)?);
            let b = x_below_controlled(d, i, j, i)?;
            gates.extend([a.clone(), b, a]);
        }
    }
    Ok(Circuit::chain(2, gates))
}

fn swap_decomposition(d: usize, _: &Params) -> Result<(Term, Term)> {
    qq(swap_as_controlled(d)?, Circuit::swap())
}

fn total_phase(d: usize, p: &Params) -> Result<(Term, Term)> {
    let t = p.angles[0];
    qq(
        Circuit::chain(1, (0..d).map(|k| pk(k, t)).collect()),
        Circuit::par(Circuit::wire(), Circuit::phase(t)),
    )
}

fn total_hadamard(d: usize, p: &Params) -> Result<(Term, Term)> {
    let h = Circuit::hadamard(p.rungs[0]);
    qq(
        Circuit::chain(2, (0..d).map(|k| Circuit::ctrl(k, h.clone())).collect()),
        Circuit::par(Circuit::wire(), h),
    )
}

fn pp_c(_: usize, p: &Params) -> Result<(Term, Term)> {
    let g = &p.digits;
    commute(
        2,
        ccp(g[0], g[2], p.angles[0]),
        ccp(g[1], g[3], p.angles[1]),
    )
}

fn ppi_c(_: usize, p: &Params) -> Result<(Term, Term)> {
    let g = &p.digits;
    commute(2, ccp(g[0], g[2], p.angles[0]), ccp(g[1], g[3], PI))
}

fn pipi_dc(_: usize, p: &Params) -> Result<(Term, Term)> {
    let g = &p.digits;
    commute(
        3,
        Circuit::ctrl(g[0], ccp(g[2], g[3], PI)),
        Circuit::ctrl(g[1], ccp(g[4], g[5], PI)),
    )
}

fn hc_c(_: usize, p: &Params) -> Result<(Term, Term)> {
    let g = &p.digits;
    let h = Circuit::ctrl(
        g[0],
        Circuit::par(Circuit::hadamard(p.rungs[0]), Circuit::wire()),
    );
    commute(3, h, Circuit::ctrl(g[1], ccp(g[2], g[3], PI)))
}

fn hh_c(_: usize, p: &Params) -> Result<(Term, Term)> {
    let g = &p.digits;
    commute(
        2,
        Circuit::ctrl(g[0], Circuit::hadamard(p.rungs[0])),
        Circuit::ctrl(g[1], Circuit::hadamard(p.rungs[1])),
    )
}

fn hp_c(_: usize, p: &Params) -> Result<(Term, Term)> {
    let g = &p.digits;
    let h = Circuit::ctrl(
        g[0],
        Circuit::par(Circuit::hadamard(p.rungs[0]), Circuit::wire()),
    );
    commute(3, h, Circuit::ctrl(g[1], ccp(g[2], g[3], p.angles[0])))
}

fn pipi_c(_: usize, p: &Params) -> Result<(Term, Term)> {
    let g = &p.digits;
    commute(2, ccp(g[0], g[2], PI), ccp(g[1], g[3], PI))
}

fn comp_p(_: usize, p: &Params) -> Result<(Term, Term)> {
    let (a, b, t) = (p.digits[0], p.digits[1], p.angles[0]);
    qq(
        comp(2, vec![Circuit::swap(), ccp(a, b, t)]),
        comp(2, vec![ccp(b, a, t), Circuit::swap()]),
    )
}

fn comp_pi(_: usize, p: &Params) -> Result<(Term, Term)> {
    let (a, b, c) = (p.digits[0], p.digits[1], p.digits[2]);
    let sw = Circuit::par(Circuit::swap(), Circuit::wire());
    qq(
        comp(3, vec![sw.clone(), Circuit::ctrl(a, ccp(b, c, PI))]),
        comp(3, vec![Circuit::ctrl(b, ccp(a, c, PI)), sw]),
    )
}
