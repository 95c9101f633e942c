//! Contextual encoding of qudit circuits into Gray-coded optics, and decoding
//! of optical circuits back into polycontrolled qudit circuits.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graycode::GrayContext;
use crate::ir::{block_swap3, iterated_control, rx_gate, x_gate, Circuit, CircuitSpace, Node};
use crate::lopp::{ams, hadamard_network, jams, mode_block_swap, LoppCircuit, LoppNode};

/// `E^a_b`: `a` context qudits above the circuit, `b` below.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodingContext {
    pub d: usize,
    pub a: usize,
    pub b: usize,
}

/// `D^t_n`: the optical circuit occupies global modes from `t` of a `d^n` register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodingContext {
    pub d: usize,
    pub t: usize,
    pub n: usize,
}

/// Largest register, in modes, the encoder will build.
pub const ENCODE_MODE_CAP: usize = 1 << 12;

/// `E^a_b(C)` on `d^{a+n+b}` modes.
pub fn encode(ctx: EncodingContext, c: &Circuit) -> Result<LoppCircuit> {
    let n = c.validate(CircuitSpace::new(ctx.d)?)?;
    let total = ctx.a + n + ctx.b;
    let modes = pow_capped(ctx.d, total, ENCODE_MODE_CAP)?;
    let mut enc = Encoder {
        d: ctx.d,
        sigma: HashMap::new(),
    };
    let out = enc.encode(ctx.a, ctx.b, c)?;
    debug_assert_eq!(out.modes(), modes);
    Ok(out)
}

fn pow_capped(d: usize, n: usize, cap: usize) -> Result<usize> {
    let mut acc: usize = 1;
    for _ in 0..n {
        acc = acc
            .checked_mul(d)
            .filter(|&x| x <= cap)
            .ok_or(Error::DimensionCap {
                dim: d.saturating_pow(n as u32),
                cap,
            })?;
    }
    Ok(acc)
}

struct Encoder {
    d: usize,
    sigma: HashMap<(usize, usize, usize), LoppCircuit>,
}

impl Encoder {
    fn sigma(&mut self, a: usize, b: usize, c: usize) -> Result<LoppCircuit> {
        if let Some(s) = self.sigma.get(&(a, b, c)) {
            return Ok(s.clone());
        }
        let s = mode_block_swap(self.d, a, b, c)?;
        self.sigma.insert((a, b, c), s.clone());
        Ok(s)
    }

    /// `σ_{a,b,n} ∘ core ∘ σ_{a,n,b}`: moves the `n` target digits behind the
    /// `b` lower context digits, applies `core`, and moves them back.
    fn conjugated(
        &mut self,
        a: usize,
        n: usize,
        b: usize,
        core: LoppCircuit,
    ) -> Result<LoppCircuit> {
        let modes = core.modes();
        let pre = self.sigma(a, n, b)?;
        let post = self.sigma(a, b, n)?;
        Ok(LoppCircuit::chain(modes, vec![pre, core, post]))
    }

    fn encode(&mut self, a: usize, b: usize, c: &Circuit) -> Result<LoppCircuit> {
        let d = self.d;
        let n = c.arity();
        if c.is_id_tree() {
            return Ok(LoppCircuit::id(d.pow((a + n + b) as u32)));
        }
        match c.node() {
            Node::Empty | Node::Wire => unreachable!("identity trees handled above"),
            Node::Seq(f, g) => {
                let eg = self.encode(a, b, g)?;
                let ef = self.encode(a, b, f)?;
                Ok(LoppCircuit::seq(ef, eg))
            }
            Node::Par(top, bottom) => {
                let (n1, n2) = (top.arity(), bottom.arity());
                // The lower block is encoded first.
                let e2 = self.encode(a + n1, b, bottom)?;
                let e1 = self.encode(a, b + n2, top)?;
                Ok(LoppCircuit::seq(e2, e1))
            }
            Node::Phase(theta) => Ok(LoppCircuit::tensor(
                (0..d.pow((a + b) as u32))
                    .map(|_| LoppCircuit::phase(*theta))
                    .collect(),
            )),
            Node::Hadamard(r) => {
                let core = ams(d, a + b, &hadamard_network(d, *r)?)?;
                self.conjugated(a, 1, b, core)
            }
            Node::Swap => {
                let modes = d.pow((a + 2 + b) as u32);
                let pre = self.sigma(a, 2, b)?;
                let mid = self.sigma(a + b, 1, 1)?;
                let post = self.sigma(a, b, 2)?;
                Ok(LoppCircuit::chain(modes, vec![pre, mid, post]))
            }
            Node::Ctrl(k, body) => {
                let inner = self.encode(0, 0, body)?;
                let core = jams(d, *k, a + b, &inner)?;
                self.conjugated(a, n, b, core)
            }
        }
    }
}

/// `D^t_n(L)` as an `n`-wire qudit circuit.
pub fn decode(ctx: DecodingContext, l: &LoppCircuit) -> Result<Circuit> {
    let len = l.validate()?;
    let gray = GrayContext::shared(ctx.d, ctx.n)?;
    if ctx.t + len > gray.len() {
        return Err(Error::OffsetOutOfRange {
            t: ctx.t,
            len,
            total: gray.len(),
        });
    }
    decode_at(&gray, ctx.t, l)
}

fn decode_at(gray: &GrayContext, t: usize, l: &LoppCircuit) -> Result<Circuit> {
    let (d, n) = (gray.d(), gray.n());
    if l.is_id_tree() {
        return Ok(Circuit::id(n));
    }
    match l.node() {
        LoppNode::Empty | LoppNode::Wire => Ok(Circuit::id(n)),
        LoppNode::Seq(f, g) => Ok(Circuit::seq(decode_at(gray, t, f)?, decode_at(gray, t, g)?)),
        LoppNode::Par(top, bottom) => {
            let lower = decode_at(gray, t + top.modes(), bottom)?;
            let upper = decode_at(gray, t, top)?;
            Ok(Circuit::seq(lower, upper))
        }
        LoppNode::Phase(theta) => Ok(iterated_control(&gray.word(t), Circuit::phase(*theta))),
        LoppNode::Swap | LoppNode::BeamSplitter(_) => {
            let nb = gray.neighbor_decompose(t)?;
            let w = (nb.v as isize + nb.eps as isize) as usize;
            let g = match l.node() {
                LoppNode::Swap => x_gate(d, nb.v, w)?,
                LoppNode::BeamSplitter(theta) => rx_gate(d, nb.v, w, *theta)?,
                _ => unreachable!(),
            };
            debug_assert_eq!(nb.u.len() + 1 + nb.w.len(), n);
            lambda_wrap(&nb.u, &nb.w, g)
        }
    }
}

/// `Λ^u_w(g) = σ_{|u|,|w|,1} ∘ ctrl_{uw}(g) ∘ σ_{|u|,1,|w|}`: applies `g` to the
/// middle qudit exactly when the others hold `u` and `w`.
pub fn lambda_wrap(u: &[usize], w: &[usize], g: Circuit) -> Result<Circuit> {
    if g.arity() != 1 {
        return Err(Error::ArityMismatch {
            path: "lambda_wrap".into(),
            left: 1,
            right: g.arity(),
        });
    }
    let (a, b) = (u.len(), w.len());
    let ctrl: Vec<usize> = u.iter().chain(w).copied().collect();
    let core = iterated_control(&ctrl, g);
    if b == 0 {
        return Ok(core);
    }
    Ok(Circuit::chain(
        a + 1 + b,
        vec![block_swap3(a, 1, b), core, block_swap3(a, b, 1)],
    ))
}
