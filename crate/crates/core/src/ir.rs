//! Raw qudit circuits with control as a primitive constructor.
//!
//! `Seq(f, g)` is `f ∘ g`: `g` is applied first. `Par(top, bottom)` places
//! `top` on the most significant wires. `Ctrl(k, body)` controls `body` on the
//! value `k` of a new top wire.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Empty,
    Wire,
    Swap,
    Hadamard(usize),
    Phase(f64),
    Seq(Circuit, Circuit),
    Par(Circuit, Circuit),
    Ctrl(usize, Circuit),
}

/// Immutable, cheaply clonable circuit term with cached arity.
#[derive(Clone, PartialEq)]
pub struct Circuit {
    node: Arc<Node>,
    arity: usize,
}

/// The ambient dimension `d ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircuitSpace {
    d: usize,
}

impl CircuitSpace {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        Ok(Self { d })
    }

    pub fn d(&self) -> usize {
        self.d
    }
}

impl Circuit {
    fn make(node: Node, arity: usize) -> Self {
        Self {
            node: Arc::new(node),
            arity,
        }
    }

    pub fn empty() -> Self {
        Self::make(Node::Empty, 0)
    }

    pub fn wire() -> Self {
        Self::make(Node::Wire, 1)
    }

    pub fn swap() -> Self {
        Self::make(Node::Swap, 2)
    }

    pub fn hadamard(r: usize) -> Self {
        Self::make(Node::Hadamard(r), 1)
    }

    pub fn phase(theta: f64) -> Self {
        Self::make(Node::Phase(theta), 0)
    }

    /// `f ∘ g`. Arity is taken from `f`; `validate` reports a mismatch.
    pub fn seq(f: Circuit, g: Circuit) -> Self {
        let arity = f.arity;
        Self::make(Node::Seq(f, g), arity)
    }

    pub fn try_seq(f: Circuit, g: Circuit) -> Result<Self> {
        if f.arity != g.arity {
            return Err(Error::ArityMismatch {
                path: "seq.right".into(),
                left: f.arity,
                right: g.arity,
            });
        }
        Ok(Self::seq(f, g))
    }

    pub fn par(top: Circuit, bottom: Circuit) -> Self {
        let arity = top.arity + bottom.arity;
        Self::make(Node::Par(top, bottom), arity)
    }

    pub fn ctrl(k: usize, body: Circuit) -> Self {
        let arity = body.arity + 1;
        Self::make(Node::Ctrl(k, body), arity)
    }

    /// `id_n`, right-nested; `id_0` is `Empty`.
    pub fn id(n: usize) -> Self {
        match n {
            0 => Self::empty(),
            1 => Self::wire(),
            _ => Self::par(Self::wire(), Self::id(n - 1)),
        }
    }

    /// Composite of `gates` in application order: the first element acts first.
    /// The tree is balanced so evaluation depth stays logarithmic.
    pub fn chain(arity: usize, gates: Vec<Circuit>) -> Self {
        fn build(g: &[Circuit]) -> Circuit {
            match g.len() {
                1 => g[0].clone(),
                n => {
                    let (first, last) = g.split_at(n / 2);
                    Circuit::seq(build(last), build(first))
                }
            }
        }
        if gates.is_empty() {
            Self::id(arity)
        } else {
            build(&gates)
        }
    }

    /// `id_p ⊗ self ⊗ id_q`, omitting empty pads.
    pub fn padded(self, p: usize, q: usize) -> Self {
        let mut c = self;
        if p > 0 {
            c = Self::par(Self::id(p), c);
        }
        if q > 0 {
            c = Self::par(c, Self::id(q));
        }
        c
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// True for `Empty`, `Wire`, and `Par` trees built only from those.
    pub fn is_id_tree(&self) -> bool {
        match self.node() {
            Node::Empty | Node::Wire => true,
            Node::Par(a, b) => a.is_id_tree() && b.is_id_tree(),
            _ => false,
        }
    }

    /// Arity recomputed from the leaves, ignoring the cache.
    pub fn recompute_arity(&self) -> usize {
        match self.node() {
            Node::Empty | Node::Phase(_) => 0,
            Node::Wire | Node::Hadamard(_) => 1,
            Node::Swap => 2,
            Node::Seq(f, _) => f.recompute_arity(),
            Node::Par(a, b) => a.recompute_arity() + b.recompute_arity(),
            Node::Ctrl(_, f) => 1 + f.recompute_arity(),
        }
    }

    /// Checks node-local constraints against `space` and returns the arity.
    pub fn validate(&self, space: CircuitSpace) -> Result<usize> {
        self.validate_at(space.d, "")
    }

    fn validate_at(&self, d: usize, path: &str) -> Result<usize> {
        let join = |step: &str| {
            if path.is_empty() {
                step.to_string()
            } else {
                format!("{path}.{step}")
            }
        };
        match self.node() {
            Node::Empty | Node::Phase(_) => Ok(0),
            Node::Wire => Ok(1),
            Node::Swap => Ok(2),
            Node::Hadamard(r) => {
                if *r + 1 >= d {
                    Err(Error::IndexOutOfRange {
                        path: join("H"),
                        what: "hadamard level",
                        value: *r,
                        limit: d - 1,
                    })
                } else {
                    Ok(1)
                }
            }
            Node::Seq(f, g) => {
                let a = f.validate_at(d, &join("seq.left"))?;
                let b = g.validate_at(d, &join("seq.right"))?;
                if a != b {
                    return Err(Error::ArityMismatch {
                        path: join("seq.right"),
                        left: a,
                        right: b,
                    });
                }
                Ok(a)
            }
            Node::Par(a, b) => {
                Ok(a.validate_at(d, &join("par.top"))? + b.validate_at(d, &join("par.bottom"))?)
            }
            Node::Ctrl(k, f) => {
                if *k >= d {
                    return Err(Error::IndexOutOfRange {
                        path: join("ctrl"),
                        what: "control value",
                        value: *k,
                        limit: d,
                    });
                }
                Ok(1 + f.validate_at(d, &join("ctrl.body"))?)
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Seq(a, b) | Node::Par(a, b) => 1 + a.size() + b.size(),
            Node::Ctrl(_, f) => 1 + f.size(),
            _ => 1,
        }
    }
}

impl fmt::Debug for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Empty => write!(f, "empty"),
            Node::Wire => write!(f, "wire"),
            Node::Swap => write!(f, "swap"),
            Node::Hadamard(r) => write!(f, "(H {r})"),
            Node::Phase(t) => write!(f, "(ph {t})"),
            Node::Seq(a, b) => write!(f, "(seq {a:?} {b:?})"),
            Node::Par(a, b) => write!(f, "(par {a:?} {b:?})"),
            Node::Ctrl(k, b) => write!(f, "(ctrl {k} {b:?})"),
        }
    }
}

/// `ctrl_u(f)`: `u[0]` is the outermost control.
pub fn iterated_control(u: &[usize], body: Circuit) -> Circuit {
    u.iter().rev().fold(body, |acc, &k| Circuit::ctrl(k, acc))
}

/// `iterated_control` with digit range checks.
pub fn try_iterated_control(space: CircuitSpace, u: &[usize], body: Circuit) -> Result<Circuit> {
    if let Some((i, &k)) = u.iter().enumerate().find(|(_, &k)| k >= space.d()) {
        return Err(Error::IndexOutOfRange {
            path: format!("u[{i}]"),
            what: "control value",
            value: k,
            limit: space.d(),
        });
    }
    Ok(iterated_control(u, body))
}

/// The canonical block swap `σ_{m,n}`: `|x⟩|y⟩ ↦ |y⟩|x⟩` for `x ∈ [d]^m`, `y ∈ [d]^n`.
pub fn block_swap_term(m: usize, n: usize) -> Circuit {
    if m == 0 {
        return Circuit::id(n);
    }
    if n == 0 {
        // σ_{m,0} is the identity; the recursion only unfolds n down to 1.
        return Circuit::id(m);
    }
    if n == 1 {
        if m == 1 {
            return Circuit::swap();
        }
        return Circuit::seq(
            Circuit::par(block_swap_term(m - 1, 1), Circuit::id(1)),
            Circuit::par(Circuit::id(m - 1), block_swap_term(1, 1)),
        );
    }
    Circuit::seq(
        Circuit::par(Circuit::id(1), block_swap_term(m, n - 1)),
        Circuit::par(block_swap_term(m, 1), Circuit::id(n - 1)),
    )
}

/// `σ_{a,b,c} := id_a ⊗ σ_{b,c}`.
pub fn block_swap3(a: usize, b: usize, c: usize) -> Circuit {
    block_swap_term(b, c).padded(a, 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivedKind {
    X,
    H,
    Rx,
}

fn check_level(d: usize, i: usize) -> Result<()> {
    if i >= d {
        return Err(Error::IndexOutOfRange {
            path: "derived".into(),
            what: "level",
            value: i,
            limit: d,
        });
    }
    Ok(())
}

fn pi_ctrl(k: usize) -> Circuit {
    Circuit::ctrl(k, Circuit::phase(PI))
}

/// `X^{(r,r+1)} = H ∘ ctrl_{r+1}(π) ∘ H`.
fn x_adjacent(r: usize) -> Circuit {
    Circuit::seq(
        Circuit::hadamard(r),
        Circuit::seq(pi_ctrl(r + 1), Circuit::hadamard(r)),
    )
}

/// Two-level swap `X^{(i,j)}`; `X^{(i,i)}` is a bare wire.
pub fn x_gate(d: usize, i: usize, j: usize) -> Result<Circuit> {
    check_level(d, i)?;
    check_level(d, j)?;
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    if i == j {
        return Ok(Circuit::wire());
    }
    // S_{i+1,j} carries level i+1 up to j; conjugating the adjacent swap by it
    // yields the (i, j) transposition.
    let ladder: Vec<Circuit> = (i + 1..j).map(x_adjacent).collect();
    let inverse: Vec<Circuit> = ladder.iter().rev().cloned().collect();
    let mut gates = inverse;
    gates.push(x_adjacent(i));
    gates.extend(ladder);
    Ok(Circuit::chain(1, gates))
}

/// Two-level Hadamard in the ordered basis `(|i⟩, |j⟩)`.
pub fn h_gate(d: usize, i: usize, j: usize) -> Result<Circuit> {
    check_level(d, i)?;
    check_level(d, j)?;
    if i == j {
        return Ok(Circuit::wire());
    }
    if j == i + 1 {
        return Ok(Circuit::hadamard(i));
    }
    if i < j {
        let x = x_gate(d, j, i + 1)?;
        Ok(Circuit::seq(
            x.clone(),
            Circuit::seq(Circuit::hadamard(i), x),
        ))
    } else {
        let x = x_gate(d, j, i)?;
        let h = h_gate(d, j, i)?;
        Ok(Circuit::seq(x.clone(), Circuit::seq(h, x)))
    }
}

/// `R_x^{(i,j)}(θ)`, acting as `[[cos θ, i sin θ], [i sin θ, cos θ]]` on `(|i⟩, |j⟩)`.
pub fn rx_gate(d: usize, i: usize, j: usize, theta: f64) -> Result<Circuit> {
    if i == j {
        return Err(Error::SideCondition("rx levels must differ".into()));
    }
    let h = h_gate(d, i, j)?;
    let phases = Circuit::seq(
        Circuit::ctrl(i, Circuit::phase(theta)),
        Circuit::ctrl(j, Circuit::phase(-theta)),
    );
    Ok(Circuit::seq(h.clone(), Circuit::seq(phases, h)))
}

pub fn derived_gate(
    kind: DerivedKind,
    d: usize,
    i: usize,
    j: usize,
    theta: Option<f64>,
) -> Result<Circuit> {
    match kind {
        DerivedKind::X => x_gate(d, i, j),
        DerivedKind::H => h_gate(d, i, j),
        DerivedKind::Rx => rx_gate(d, i, j, theta.ok_or(Error::MissingAngle)?),
    }
}

/// Expands an indexed box: `body(k)` for admitted `k`, composed in increasing
/// `k` (so the largest `k` is outermost). An empty selection is `id_arity`.
pub fn expand_box(
    d: usize,
    arity: usize,
    predicate: impl Fn(usize) -> bool,
    body: impl Fn(usize) -> Circuit,
) -> Result<Circuit> {
    let mut acc: Option<Circuit> = None;
    for k in (0..d).filter(|&k| predicate(k)) {
        let c = body(k);
        if c.arity() != arity {
            return Err(Error::ArityMismatch {
                path: format!("box[{k}]"),
                left: arity,
                right: c.arity(),
            });
        }
        acc = Some(match acc {
            None => c,
            Some(prev) => Circuit::seq(c, prev),
        });
    }
    Ok(acc.unwrap_or_else(|| Circuit::id(arity)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        let s3 = CircuitSpace::new(3).unwrap();
        assert_eq!(Circuit::ctrl(1, Circuit::hadamard(0)).validate(s3), Ok(2));
        let bad = Circuit::seq(Circuit::wire(), Circuit::swap());
        assert!(matches!(
            bad.validate(s3),
            Err(Error::ArityMismatch { ref path, left: 1, right: 2 }) if path == "seq.right"
        ));
        assert!(matches!(
            Circuit::hadamard(2).validate(s3),
            Err(Error::IndexOutOfRange { value: 2, .. })
        ));
        assert!(CircuitSpace::new(1).is_err());
    }

    #[test]
    fn nested_error_path() {
        let s2 = CircuitSpace::new(2).unwrap();
        let c = Circuit::par(
            Circuit::wire(),
            Circuit::ctrl(0, Circuit::seq(Circuit::wire(), Circuit::swap())),
        );
        match c.validate(s2) {
            Err(Error::ArityMismatch { path, .. }) => {
                assert_eq!(path, "par.bottom.ctrl.body.seq.right")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn block_swap_small_cases() {
        assert_eq!(block_swap_term(0, 5), Circuit::id(5));
        assert_eq!(block_swap_term(1, 1), Circuit::swap());
        let expect = Circuit::seq(
            Circuit::par(Circuit::swap(), Circuit::wire()),
            Circuit::par(Circuit::wire(), Circuit::swap()),
        );
        assert_eq!(block_swap_term(2, 1), expect);
        for m in 0..4 {
            for n in 0..4 {
                assert_eq!(block_swap_term(m, n).recompute_arity(), m + n);
            }
        }
    }

    #[test]
    fn iterated_control_unfolds() {
        let f = Circuit::hadamard(0);
        assert_eq!(iterated_control(&[], f.clone()), f);
        assert_eq!(
            iterated_control(&[2, 0], f.clone()),
            Circuit::ctrl(2, Circuit::ctrl(0, f.clone()))
        );
        let g = iterated_control(&[1], Circuit::phase(0.3));
        assert_eq!(g.arity(), 1);
        let s2 = CircuitSpace::new(2).unwrap();
        assert!(try_iterated_control(s2, &[0, 2], f).is_err());
    }

    #[test]
    fn derived_gate_edges() {
        assert_eq!(x_gate(4, 2, 2).unwrap(), Circuit::wire());
        assert_eq!(h_gate(4, 1, 2).unwrap(), Circuit::hadamard(1));
        assert_eq!(
            derived_gate(DerivedKind::Rx, 3, 0, 1, None),
            Err(Error::MissingAngle)
        );
        assert!(x_gate(3, 0, 3).is_err());
    }

    #[test]
    fn expand_box_order_and_empty() {
        let body = |k: usize| Circuit::ctrl(k, Circuit::phase(PI));
        let c = expand_box(3, 1, |_| true, body).unwrap();
        let expect = Circuit::seq(body(2), Circuit::seq(body(1), body(0)));
        assert_eq!(c, expect);
        assert_eq!(expand_box(3, 1, |_| false, body).unwrap(), Circuit::wire());
        let c = expand_box(3, 1, |k| k != 0, body).unwrap();
        assert_eq!(c, Circuit::seq(body(2), body(1)));
        assert!(expand_box(3, 2, |_| true, body).is_err());
    }

    #[test]
    fn chain_is_application_order() {
        let g: Vec<Circuit> = (0..5).map(|k| Circuit::phase(k as f64)).collect();
        let c = Circuit::chain(0, g);
        let mut order = Vec::new();
        fn walk(c: &Circuit, out: &mut Vec<f64>) {
            match c.node() {
                Node::Seq(f, g) => {
                    walk(g, out);
                    walk(f, out);
                }
                Node::Phase(t) => out.push(*t),
                _ => unreachable!(),
            }
        }
        walk(&c, &mut order);
        assert_eq!(order, vec![0.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!(Circuit::chain(2, vec![]), Circuit::id(2));
    }
}
