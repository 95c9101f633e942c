//! Non-structural equations of the single-photon optical calculus.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use super::angles::{eh_angles, swap_euler_order};
use super::{AxiomSchema, ParamSpec as S, Params, Term, Theory};
use crate::error::Result;
use crate::lopp::LoppCircuit as L;

const N: S = S::NONE;

pub(super) fn schemas() -> Vec<AxiomSchema> {
    let s = |name, spec, build| AxiomSchema::new(name, Theory::Lopp, spec, build);
    vec![
        s("A", N.angles(2), add),
        s("2π", N, two_pi),
        s("SW", N, swap),
        s("E", N.angles(2), euler),
        s("3BS", N.angles(3), three_bs),
    ]
}

fn ll(l: L, r: L) -> Result<(Term, Term)> {
    Ok((Term::Lopp(l), Term::Lopp(r)))
}

/// Written order, as in the qudit catalogs.
fn comp(modes: usize, mut written: Vec<L>) -> L {
    written.reverse();
    L::chain(modes, written)
}

fn add(_: usize, p: &Params) -> Result<(Term, Term)> {
    let (a, b) = (p.angles[0], p.angles[1]);
    ll(L::seq(L::phase(a), L::phase(b)), L::phase(a + b))
}

fn two_pi(_: usize, _: &Params) -> Result<(Term, Term)> {
    ll(L::phase(TAU), L::wire())
}

fn swap(_: usize, _: &Params) -> Result<(Term, Term)> {
    let q = L::par(L::phase(-FRAC_PI_2), L::phase(-FRAC_PI_2));
    ll(L::swap(), L::seq(q, L::beam_splitter(FRAC_PI_2)))
}

/// `W ⊕ ps(θ)`.
fn lower(t: f64) -> L {
    L::par(L::wire(), L::phase(t))
}

/// The balanced Hadamard `(W ⊕ ps(−π/2)) ∘ bs(π/4) ∘ (W ⊕ ps(−π/2))`.
pub(crate) fn bs_hadamard() -> L {
    comp(
        2,
        vec![
            lower(-FRAC_PI_2),
            L::beam_splitter(FRAC_PI_4),
            lower(-FRAC_PI_2),
        ],
    )
}

fn euler(_: usize, p: &Params) -> Result<(Term, Term)> {
    let (a0, a2) = (p.angles[0], p.angles[1]);
    let (b0, b1, b2, b3) = eh_angles(a0, a2);
    let h = bs_hadamard;
    ll(
        comp(2, vec![h(), lower(a0), h(), lower(a2), h()]),
        comp(
            2,
            vec![
                lower(b0),
                h(),
                L::par(L::phase(b1), L::phase(b2)),
                h(),
                lower(b3),
            ],
        ),
    )
}

fn three_bs(_: usize, p: &Params) -> Result<(Term, Term)> {
    let g = &p.angles;
    let (e1, e2, e3) = swap_euler_order(g[0], g[1], g[2]);
    let top = |t| L::par(L::beam_splitter(t), L::wire());
    let bot = |t| L::par(L::wire(), L::beam_splitter(t));
    ll(
        comp(3, vec![top(g[0]), bot(g[1]), top(g[2])]),
        comp(3, vec![bot(e1), top(e2), bot(e3)]),
    )
}
