//! Separation of a circuit into a chain of one-gate layers.
//!
//! Output segments are atomic layers `id_p ⊗ G ⊗ id_q` with `G` among the
//! generators (phase, `H(r)`, `ctrl_k(phase)`, `ctrl_k ctrl_l(π)`) and explicit
//! block permutations `id_p ⊗ σ_{a,b} ⊗ id_q`. Segments are listed in
//! application order.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use crate::axioms::{
    cccp_decomposition, ccp_decomposition, controlled_hadamard, swap_as_controlled,
};
use crate::error::{Error, Result};
use crate::ir::{block_swap_term, iterated_control, Circuit, CircuitSpace, Node};

/// A generator of the layer family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gen {
    Phase(f64),
    /// `H(r)` on the rung `r, r+1`.
    Hadamard(usize),
    /// `ctrl_k(phase θ)`.
    CtrlPhase(usize, f64),
    /// `ctrl_k ctrl_l(π)`.
    CtrlCtrlPi(usize, usize),
}

impl Gen {
    pub fn arity(&self) -> usize {
        match self {
            Gen::Phase(_) => 0,
            Gen::Hadamard(_) | Gen::CtrlPhase(..) => 1,
            Gen::CtrlCtrlPi(..) => 2,
        }
    }

    pub fn circuit(&self) -> Circuit {
        match *self {
            Gen::Phase(t) => Circuit::phase(t),
            Gen::Hadamard(r) => Circuit::hadamard(r),
            Gen::CtrlPhase(k, t) => Circuit::ctrl(k, Circuit::phase(t)),
            Gen::CtrlCtrlPi(k, l) => Circuit::ctrl(k, Circuit::ctrl(l, Circuit::phase(PI))),
        }
    }
}

/// `ctrl_u(id_p ⊗ G ⊗ id_q)`; arity is `|u| + p + arity(G) + q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub u: Vec<usize>,
    pub p: usize,
    pub g: Gen,
    pub q: usize,
}

impl Layer {
    pub fn arity(&self) -> usize {
        self.u.len() + self.p + self.g.arity() + self.q
    }

    pub fn is_atomic(&self) -> bool {
        self.u.is_empty()
    }

    pub fn circuit(&self) -> Circuit {
        iterated_control(&self.u, self.g.circuit().padded(self.p, self.q))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Segment {
    Layer(Layer),
    /// `id_p ⊗ σ_{a,b} ⊗ id_q` with `a, b ≥ 1`.
    Perm {
        p: usize,
        a: usize,
        b: usize,
        q: usize,
    },
}

impl Segment {
    pub fn arity(&self) -> usize {
        match self {
            Segment::Layer(l) => l.arity(),
            Segment::Perm { p, a, b, q } => p + a + b + q,
        }
    }

    pub fn circuit(&self) -> Circuit {
        match self {
            Segment::Layer(l) => l.circuit(),
            Segment::Perm { p, a, b, q } => block_swap_term(*a, *b).padded(*p, *q),
        }
    }

    /// Adds `left` wires above and `right` wires below; only atomic layers
    /// and permutations can be padded without moving controls.
    fn pad(self, left: usize, right: usize) -> Segment {
        match self {
            Segment::Layer(mut l) => {
                debug_assert!(l.is_atomic());
                l.p += left;
                l.q += right;
                Segment::Layer(l)
            }
            Segment::Perm { p, a, b, q } => Segment::Perm {
                p: p + left,
                a,
                b,
                q: q + right,
            },
        }
    }
}

/// Chain of segments in application order; the empty chain is `id_arity`.
pub fn segments_to_circuit(arity: usize, segs: &[Segment]) -> Circuit {
    Circuit::chain(arity, segs.iter().map(Segment::circuit).collect())
}

fn is_pi(t: f64) -> bool {
    t.rem_euclid(TAU) == PI
}

/// Strips identity pads: `(p, core, q)` with `x = id_p ⊗ core ⊗ id_q`.
fn unpad(x: &Circuit) -> (usize, &Circuit, usize) {
    let (mut p, mut q, mut x) = (0, 0, x);
    loop {
        match x.node() {
            Node::Par(a, b) if b.is_id_tree() => {
                q += b.arity();
                x = a;
            }
            Node::Par(a, b) if a.is_id_tree() => {
                p += a.arity();
                x = b;
            }
            _ => return (p, x, q),
        }
    }
}

fn ctrl_chain(mut x: &Circuit) -> (Vec<usize>, &Circuit) {
    let mut u = Vec::new();
    while let Node::Ctrl(k, b) = x.node() {
        u.push(*k);
        x = b;
    }
    (u, x)
}

/// A phase under the controls `v`, split into the outer word and the generator.
fn phase_gen(mut v: Vec<usize>, t: f64) -> (Vec<usize>, Gen) {
    let g = match v.len() {
        0 => Gen::Phase(t),
        n if n >= 2 && is_pi(t) => {
            let l = v.pop().expect("len >= 2");
            let k = v.pop().expect("len >= 2");
            debug_assert!(n == v.len() + 2);
            Gen::CtrlCtrlPi(k, l)
        }
        _ => Gen::CtrlPhase(v.pop().expect("non-empty"), t),
    };
    (v, g)
}

/// Recognises a single controlled layer or padded block permutation.
pub fn parse_segment(c: &Circuit) -> Option<Segment> {
    let (u, x) = ctrl_chain(c);
    let (p, core, q) = unpad(x);
    match core.node() {
        Node::Hadamard(r) => Some(Segment::Layer(Layer {
            u,
            p,
            g: Gen::Hadamard(*r),
            q,
        })),
        Node::Phase(t) if p + q == 0 => {
            let (u, g) = phase_gen(u, *t);
            Some(Segment::Layer(Layer { u, p, g, q }))
        }
        Node::Phase(t) => Some(Segment::Layer(Layer {
            u,
            p,
            g: Gen::Phase(*t),
            q,
        })),
        Node::Ctrl(..) => {
            let (v, inner) = ctrl_chain(core);
            let Node::Phase(t) = inner.node() else {
                return None;
            };
            let (rest, g) = phase_gen(v, *t);
            rest.is_empty()
                .then_some(Segment::Layer(Layer { u, p, g, q }))
        }
        Node::Swap | Node::Seq(..) if u.is_empty() => {
            let n = core.arity();
            (1..n)
                .find(|&a| block_swap_term(a, n - a) == *core)
                .map(|a| Segment::Perm { p, a, b: n - a, q })
        }
        _ => None,
    }
}

/// Parsed segments and the control-depth multiset of a layered circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerForm {
    pub segments: Vec<Segment>,
    /// `|u_t|` for every layer, sorted.
    pub cd: Vec<usize>,
}

impl LayerForm {
    pub fn layers(&self) -> impl Iterator<Item = &Layer> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Layer(l) => Some(l),
            Segment::Perm { .. } => None,
        })
    }
}

/// `Some` iff `c` is a `Seq` tree of layers and permutation terms; identity
/// factors are dropped.
pub fn is_layer_form(c: &Circuit) -> Option<LayerForm> {
    fn walk(x: &Circuit, out: &mut Vec<Segment>) -> bool {
        if let Some(s) = parse_segment(x) {
            out.push(s);
            return true;
        }
        match x.node() {
            Node::Seq(f, g) => walk(g, out) && walk(f, out),
            _ => x.is_id_tree(),
        }
    }
    let mut segments = Vec::new();
    if !walk(c, &mut segments) {
        return None;
    }
    let mut cd: Vec<usize> = segments
        .iter()
        .filter_map(|s| match s {
            Segment::Layer(l) => Some(l.u.len()),
            Segment::Perm { .. } => None,
        })
        .collect();
    cd.sort_unstable();
    Some(LayerForm { segments, cd })
}

/// `(non-identity gates, Σ control depth over gates)`, compared lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Measure {
    pub gate_count: usize,
    pub control_depth: usize,
}

pub fn measure(c: &Circuit) -> Measure {
    fn go(x: &Circuit, depth: usize, m: &mut Measure) {
        match x.node() {
            Node::Empty | Node::Wire => {}
            Node::Swap | Node::Hadamard(_) | Node::Phase(_) => {
                m.gate_count += 1;
                m.control_depth += depth;
            }
            Node::Seq(a, b) | Node::Par(a, b) => {
                go(a, depth, m);
                go(b, depth, m);
            }
            Node::Ctrl(_, b) => go(b, depth + 1, m),
        }
    }
    let mut m = Measure {
        gate_count: 0,
        control_depth: 0,
    };
    go(c, 0, &mut m);
    m
}

/// Work still owed by a term: the ranks of its controlled non-generator
/// nodes, plus its size as a tie-break. Ordered by the multiset extension
/// on ranks, then size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PendingMeasure {
    /// Sorted descending.
    pub ranks: Vec<u32>,
    pub size: usize,
}

impl PendingMeasure {
    /// Strict decrease: multiset order on ranks, then size.
    pub fn decreases_to(&self, child: &PendingMeasure) -> bool {
        match multiset_cmp(&child.ranks, &self.ranks) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Equal => child.size < self.size,
            std::cmp::Ordering::Greater => false,
        }
    }
}

/// Multiset extension of the order on `u32`: after cancelling common
/// elements the side holding the larger maximum is larger.
pub fn multiset_cmp(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let mut count: BTreeMap<u32, i64> = BTreeMap::new();
    for &x in a {
        *count.entry(x).or_default() += 1;
    }
    for &x in b {
        *count.entry(x).or_default() -= 1;
    }
    match count.iter().rev().find(|(_, &c)| c != 0) {
        None => std::cmp::Ordering::Equal,
        Some((_, &c)) if c > 0 => std::cmp::Ordering::Greater,
        Some(_) => std::cmp::Ordering::Less,
    }
}

// Ranks by node kind and enclosing control count `c`. Each expansion only
// creates items of strictly smaller rank than the item it consumes.
fn rank_h(c: usize) -> u32 {
    if c == 1 {
        1
    } else {
        20 * (c as u32 - 1) + 3
    }
}
fn rank_seq(c: usize) -> u32 {
    if c == 1 {
        2
    } else {
        20 * (c as u32 - 1) + 4
    }
}
fn rank_ctrl(c: usize) -> u32 {
    if c == 1 {
        3
    } else {
        20 * (c as u32 - 1) + 5
    }
}
fn rank_phase(c: usize, pi: bool) -> Option<u32> {
    match (c, pi) {
        (0 | 1, _) | (2, true) => None,
        (2, false) => Some(5),
        (_, true) => Some(20 * (c as u32 - 2) + 1),
        (_, false) => Some(20 * (c as u32 - 2) + 2),
    }
}
fn rank_par(c: usize) -> u32 {
    20 * c as u32
}
fn rank_swap(c: usize) -> u32 {
    20 * c as u32 + 10
}

fn is_phase_chain(x: &Circuit) -> bool {
    let (v, inner) = ctrl_chain(x);
    matches!(inner.node(), Node::Phase(_)) && v.len() <= 1
}

pub fn pending_measure(c: &Circuit) -> PendingMeasure {
    fn go(x: &Circuit, c: usize, out: &mut Vec<u32>) {
        match x.node() {
            Node::Empty | Node::Wire => {}
            Node::Swap if c > 0 => out.push(rank_swap(c)),
            Node::Hadamard(_) if c > 0 => out.push(rank_h(c)),
            Node::Swap | Node::Hadamard(_) => {}
            Node::Phase(t) => out.extend(rank_phase(c, is_pi(*t))),
            Node::Seq(a, b) | Node::Par(a, b) => {
                if c > 0 && !x.is_id_tree() {
                    out.push(if matches!(x.node(), Node::Seq(..)) {
                        rank_seq(c)
                    } else {
                        rank_par(c)
                    });
                }
                go(a, c, out);
                go(b, c, out);
            }
            Node::Ctrl(_, b) => {
                if c > 0 && !is_phase_chain(b) {
                    out.push(rank_ctrl(c));
                }
                go(b, c + 1, out);
            }
        }
    }
    let mut ranks = Vec::new();
    go(c, 0, &mut ranks);
    ranks.sort_unstable_by(|a, b| b.cmp(a));
    PendingMeasure {
        ranks,
        size: c.size(),
    }
}

/// One recursive call: the measures of the caller's and the callee's argument.
#[derive(Debug, Clone)]
pub struct Step {
    pub parent_term: Circuit,
    pub child_term: Circuit,
    pub parent: PendingMeasure,
    pub child: PendingMeasure,
    pub parent_literal: Measure,
    pub child_literal: Measure,
}

impl Step {
    pub fn decreases(&self) -> bool {
        self.parent.decreases_to(&self.child)
    }
}

/// Budget: ten times a weight of the input. Each control level multiplies
/// the expansion by a factor polynomial in `d`, so the weight is exponential
/// in control depth; it saturates rather than overflowing.
fn fuel_for(c: &Circuit, d: usize) -> u64 {
    fn depth(x: &Circuit) -> u32 {
        match x.node() {
            Node::Seq(a, b) | Node::Par(a, b) => depth(a).max(depth(b)),
            Node::Ctrl(_, b) => 1 + depth(b),
            _ => 0,
        }
    }
    let m = measure(c);
    let base = (m.gate_count + c.size() + 1) as u64;
    let per_level = 256u64.saturating_mul((d * d * d) as u64);
    let weight = base.saturating_mul(per_level.saturating_pow(depth(c) + 1));
    weight.saturating_mul(10)
}

struct Run {
    d: usize,
    fuel: u64,
    calls: u64,
    trace: Option<Vec<Step>>,
}

impl Run {
    fn rec(&mut self, parent: &Circuit, child: &Circuit) -> Result<Vec<Segment>> {
        if let Some(t) = self.trace.as_mut() {
            t.push(Step {
                parent_term: parent.clone(),
                child_term: child.clone(),
                parent: pending_measure(parent),
                child: pending_measure(child),
                parent_literal: measure(parent),
                child_literal: measure(child),
            });
        }
        self.sep(child)
    }

    fn sep(&mut self, f: &Circuit) -> Result<Vec<Segment>> {
        self.calls += 1;
        if self.calls > self.fuel {
            return Err(Error::FuelExhausted(self.calls));
        }
        if f.is_id_tree() {
            return Ok(Vec::new());
        }
        if let Some(s) = parse_segment(f) {
            if matches!(&s, Segment::Perm { .. })
                || matches!(&s, Segment::Layer(l) if l.is_atomic())
            {
                return Ok(vec![s]);
            }
        }
        match f.node() {
            Node::Seq(a, b) => {
                let mut out = self.rec(f, b)?;
                out.extend(self.rec(f, a)?);
                Ok(out)
            }
            Node::Par(a, b) => {
                let (na, nb) = (a.arity(), b.arity());
                let mut out: Vec<Segment> =
                    self.rec(f, b)?.into_iter().map(|s| s.pad(na, 0)).collect();
                out.extend(self.rec(f, a)?.into_iter().map(|s| s.pad(0, nb)));
                Ok(out)
            }
            Node::Ctrl(m, body) => self.sep_ctrl(f, *m, body),
            // Leaves are caught by the segment parse.
            _ => unreachable!("leaf {f:?} is a segment"),
        }
    }

    fn sep_ctrl(&mut self, f: &Circuit, m: usize, body: &Circuit) -> Result<Vec<Segment>> {
        let c = |x: Circuit| Circuit::ctrl(m, x);
        if body.is_id_tree() {
            return Ok(Vec::new());
        }
        match body.node() {
            Node::Seq(g, h) => {
                let mut out = self.rec(f, &c(h.clone()))?;
                out.extend(self.rec(f, &c(g.clone()))?);
                Ok(out)
            }
            Node::Par(g, h) => {
                // Bring h next to the control, run it, restore, then run g.
                let (a, b) = (g.arity(), h.arity());
                let swaps = a > 0 && b > 0;
                let mut out = Vec::new();
                if swaps {
                    out.push(Segment::Perm { p: 1, a, b, q: 0 });
                }
                out.extend(self.rec(f, &c(h.clone()))?.into_iter().map(|s| s.pad(0, a)));
                if swaps {
                    out.push(Segment::Perm {
                        p: 1,
                        a: b,
                        b: a,
                        q: 0,
                    });
                }
                out.extend(self.rec(f, &c(g.clone()))?.into_iter().map(|s| s.pad(0, b)));
                Ok(out)
            }
            Node::Hadamard(r) => self.rec(f, &controlled_hadamard(*r, m)),
            Node::Swap => self.rec(f, &c(swap_as_controlled(self.d)?)),
            Node::Ctrl(n, g) => match g.node() {
                Node::Phase(b) => self.rec(f, &ccp_decomposition(self.d, m, *n, *b)?),
                Node::Ctrl(k, h) if matches!(h.node(), Node::Phase(_)) => {
                    let Node::Phase(a) = h.node() else {
                        unreachable!()
                    };
                    self.rec(f, &cccp_decomposition(self.d, m, *n, *k, *a)?)
                }
                _ => {
                    let inner = self.rec(f, body)?;
                    let t = segments_to_circuit(body.arity(), &inner);
                    self.rec(f, &c(t))
                }
            },
            // ctrl_m(phase) and ctrl_m ctrl_n(π) are segments.
            _ => unreachable!("controlled leaf {body:?} is a segment"),
        }
    }
}

fn run(c: &Circuit, d: usize, trace: bool) -> Result<(Vec<Segment>, Option<Vec<Step>>)> {
    c.validate(CircuitSpace::new(d)?)?;
    let mut r = Run {
        d,
        fuel: fuel_for(c, d),
        calls: 0,
        trace: trace.then(Vec::new),
    };
    let segs = r.sep(c)?;
    Ok((segs, r.trace))
}

/// Segments of the separated form, in application order.
pub fn separate_segments(c: &Circuit, d: usize) -> Result<Vec<Segment>> {
    Ok(run(c, d, false)?.0)
}

/// Semantically equal chain of atomic layers and explicit permutations.
pub fn separate(c: &Circuit, d: usize) -> Result<Circuit> {
    Ok(segments_to_circuit(c.arity(), &separate_segments(c, d)?))
}

/// `separate` together with the measures of every recursive call.
pub fn separate_traced(c: &Circuit, d: usize) -> Result<(Circuit, Vec<Step>)> {
    let (segs, trace) = run(c, d, true)?;
    Ok((
        segments_to_circuit(c.arity(), &segs),
        trace.unwrap_or_default(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_circuit;
    use crate::semantics::interp_qudit;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check(c: &Circuit, d: usize) -> Vec<Step> {
        let (out, steps) = separate_traced(c, d).unwrap();
        let a = interp_qudit(c, d).unwrap();
        let b = interp_qudit(&out, d).unwrap();
        assert!(
            a.max_diff(&b).unwrap() < 1e-9,
            "semantics changed for {c:?}"
        );
        let form = is_layer_form(&out).expect("output parses");
        assert!(form.layers().all(Layer::is_atomic));
        steps
    }

    #[test]
    fn measure_examples() {
        assert_eq!(
            measure(&Circuit::id(3)),
            Measure {
                gate_count: 0,
                control_depth: 0
            }
        );
        let c = Circuit::ctrl(1, Circuit::ctrl(0, Circuit::phase(PI)));
        assert_eq!(
            measure(&c),
            Measure {
                gate_count: 1,
                control_depth: 2
            }
        );
    }

    #[test]
    fn controlled_phase_is_a_fixpoint() {
        let c = Circuit::ctrl(2, Circuit::phase(0.4));
        assert_eq!(separate(&c, 3).unwrap(), c);
        let c = Circuit::ctrl(2, Circuit::ctrl(0, Circuit::phase(PI)));
        assert_eq!(separate(&c, 3).unwrap(), c);
    }

    #[test]
    fn controlled_sequence_distributes() {
        let (g, h) = (Circuit::hadamard(0), Circuit::ctrl(1, Circuit::phase(0.3)));
        let c = Circuit::ctrl(1, Circuit::seq(g.clone(), h.clone()));
        let want = [
            separate_segments(&Circuit::ctrl(1, h), 3).unwrap(),
            separate_segments(&Circuit::ctrl(1, g), 3).unwrap(),
        ]
        .concat();
        assert_eq!(separate_segments(&c, 3).unwrap(), want);
    }

    #[test]
    fn parallel_pads_each_side() {
        let c = Circuit::par(Circuit::hadamard(0), Circuit::hadamard(1));
        let segs = separate_segments(&c, 3).unwrap();
        assert_eq!(
            segs,
            vec![
                Segment::Layer(Layer {
                    u: vec![],
                    p: 1,
                    g: Gen::Hadamard(1),
                    q: 0
                }),
                Segment::Layer(Layer {
                    u: vec![],
                    p: 0,
                    g: Gen::Hadamard(0),
                    q: 1
                }),
            ]
        );
    }

    #[test]
    fn layer_form_parse() {
        assert!(is_layer_form(&Circuit::par(Circuit::hadamard(0), Circuit::hadamard(0))).is_none());
        let l1 = Circuit::ctrl(0, Circuit::par(Circuit::hadamard(0), Circuit::wire()));
        let l2 = Circuit::ctrl(1, Circuit::ctrl(0, Circuit::hadamard(0)));
        let form = is_layer_form(&Circuit::seq(l2, l1)).unwrap();
        assert_eq!(form.cd, vec![1, 2]);
        let perm = block_swap_term(2, 1).padded(1, 0);
        let form = is_layer_form(&perm).unwrap();
        assert_eq!(
            form.segments,
            vec![Segment::Perm {
                p: 1,
                a: 2,
                b: 1,
                q: 0
            }]
        );
    }

    #[test]
    fn deep_controls_and_swaps() {
        let cases = [
            Circuit::ctrl(1, Circuit::swap()),
            Circuit::ctrl(0, Circuit::ctrl(1, Circuit::ctrl(2, Circuit::phase(0.7)))),
            Circuit::ctrl(0, Circuit::ctrl(1, Circuit::ctrl(2, Circuit::phase(PI)))),
            Circuit::ctrl(2, Circuit::ctrl(1, Circuit::hadamard(1))),
            Circuit::ctrl(
                1,
                Circuit::par(Circuit::hadamard(0), Circuit::ctrl(2, Circuit::phase(1.0))),
            ),
            Circuit::ctrl(
                0,
                Circuit::ctrl(1, Circuit::par(Circuit::wire(), Circuit::hadamard(0))),
            ),
        ];
        for c in cases {
            for s in check(&c, 3) {
                assert!(s.decreases(), "{s:?}");
            }
        }
    }

    #[test]
    fn random_circuits_separate_soundly() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            for d in [2, 3] {
                let c = random_circuit(&mut rng, d, 3, 6);
                let steps = check(&c, d);
                assert!(steps.iter().all(Step::decreases));
                let once = separate(&c, d).unwrap();
                let twice = separate(&once, d).unwrap();
                assert_eq!(is_layer_form(&once), is_layer_form(&twice));
            }
        }
    }

    #[test]
    fn multiset_order() {
        use std::cmp::Ordering::*;
        assert_eq!(multiset_cmp(&[5], &[4, 4, 4, 3]), Greater);
        assert_eq!(multiset_cmp(&[5, 1], &[5, 1]), Equal);
        assert_eq!(multiset_cmp(&[], &[1]), Less);
        assert_eq!(multiset_cmp(&[3, 2, 2], &[3, 2, 1, 1, 1]), Greater);
    }
}
