//! Dense unitary semantics for qudit and optical circuits.
//!
//! Two evaluators exist for each IR: a literal structural one (Kronecker
//! products, direct sums) kept as an oracle, and a gate-application one that
//! updates rows of an accumulated matrix in place. They are cross-checked by
//! property tests.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, TAU};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graycode::GrayContext;
use crate::ir::{Circuit, CircuitSpace, Node};
use crate::lopp::{LoppCircuit, LoppNode};

pub type C64 = Complex64;

/// Default bound on the matrix dimension.
pub const DEFAULT_CAP: usize = 1024;

/// Default comparison tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<C64>,
}

pub type UnitaryMatrix = Matrix;

/// `e^{iθ}`, exact at multiples of `π/2` once reduced mod `2π`.
pub fn phase_factor(theta: f64) -> C64 {
    let r = theta.rem_euclid(TAU);
    if r == 0.0 || r == TAU {
        C64::new(1.0, 0.0)
    } else if r == PI {
        C64::new(-1.0, 0.0)
    } else if r == FRAC_PI_2 {
        C64::new(0.0, 1.0)
    } else if r == 3.0 * FRAC_PI_2 {
        C64::new(0.0, -1.0)
    } else {
        C64::from_polar(1.0, theta)
    }
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::DimMismatch(dim, r.len()));
            }
            data.extend_from_slice(r);
        }
        Ok(Self { dim, data })
    }

    pub fn scalar(z: C64) -> Self {
        Self {
            dim: 1,
            data: vec![z],
        }
    }

    /// Permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let mut m = Self::zeros(perm.len());
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, ONE);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.data[i * self.dim + j] = z;
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (o, b) in row.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (n, m) = (self.dim, other.dim);
        let dim = n * m;
        let mut out = Self::zeros(dim);
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out.data[(i * m + k) * dim + j * m + l] = a * other.data[k * m + l];
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal sum, `self` on the leading indices.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let (n, m) = (self.dim, other.dim);
        let dim = n + m;
        let mut out = Self::zeros(dim);
        for i in 0..n {
            out.data[i * dim..i * dim + n].copy_from_slice(&self.data[i * n..(i + 1) * n]);
        }
        for i in 0..m {
            let row = (n + i) * dim + n;
            out.data[row..row + m].copy_from_slice(&other.data[i * m..(i + 1) * m]);
        }
        out
    }

    pub fn dagger(&self) -> Matrix {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, z: C64) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * z).collect(),
        }
    }

    /// Entrywise max-norm of the difference.
    pub fn max_diff(&self, other: &Matrix) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        self.dagger()
            .mul(self)
            .max_diff(&Matrix::identity(self.dim))
            .expect("same dimension")
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let n = self.dim;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.data.split_at_mut(hi * n);
        head[lo * n..(lo + 1) * n].swap_with_slice(&mut tail[..n]);
    }

    fn scale_row(&mut self, a: usize, z: C64) {
        let n = self.dim;
        for x in &mut self.data[a * n..(a + 1) * n] {
            *x *= z;
        }
    }

    /// Rows `(a, b) ← [[m00, m01], [m10, m11]] · (a, b)`.
    fn mix_rows(&mut self, a: usize, b: usize, m: [C64; 4]) {
        let n = self.dim;
        for c in 0..n {
            let x = self.data[a * n + c];
            let y = self.data[b * n + c];
            self.data[a * n + c] = m[0] * x + m[1] * y;
            self.data[b * n + c] = m[2] * x + m[3] * y;
        }
    }
}

impl Matrix {
    /// Text dump: header `dim N`, then one `re im` pair per line, row-major.
    pub fn dump(&self) -> String {
        let mut out = format!("dim {}\n", self.dim);
        for z in &self.data {
            out.push_str(&format!("{} {}\n", z.re, z.im));
        }
        out
    }

    /// Inverse of [`Matrix::dump`]; blank lines and `#` comments are ignored.
    pub fn parse_dump(text: &str) -> Result<Matrix> {
        let bad = |msg: String| Error::InvalidWord(msg);
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| bad("empty matrix dump".into()))?;
        let dim = header
            .strip_prefix("dim")
            .and_then(|n| n.trim().parse::<usize>().ok())
            .ok_or_else(|| bad(format!("bad header {header:?}")))?;
        let mut data = Vec::with_capacity(dim * dim);
        for line in lines {
            let parts: Vec<f64> = line
                .split_whitespace()
                .map(|x| {
                    x.parse::<f64>()
                        .map_err(|_| bad(format!("bad entry {line:?}")))
                })
                .collect::<Result<_>>()?;
            match parts[..] {
                [re, im] if re.is_finite() && im.is_finite() => data.push(C64::new(re, im)),
                _ => return Err(bad(format!("expected `re im`, got {line:?}"))),
            }
        }
        if data.len() != dim * dim {
            return Err(Error::DimMismatch(data.len(), dim * dim));
        }
        Ok(Matrix { dim, data })
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim {}", self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

/// `|k⟩⟨k| ⊗ U + Σ_{ℓ≠k} |ℓ⟩⟨ℓ| ⊗ I`.
pub fn controlled_extension(k: usize, u: &Matrix, d: usize) -> Result<Matrix> {
    if k >= d {
        return Err(Error::IndexOutOfRange {
            path: "controlled_extension".into(),
            what: "control value",
            value: k,
            limit: d,
        });
    }
    let m = u.dim();
    let mut out = Matrix::identity(d * m);
    for i in 0..m {
        for j in 0..m {
            out.set(k * m + i, k * m + j, u.get(i, j));
        }
    }
    Ok(out)
}

fn hadamard_matrix(d: usize, r: usize) -> Matrix {
    let mut m = Matrix::identity(d);
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    m.set(r, r, h);
    m.set(r, r + 1, h);
    m.set(r + 1, r, h);
    m.set(r + 1, r + 1, -h);
    m
}

fn swap_matrix(d: usize) -> Matrix {
    let perm: Vec<usize> = (0..d * d).map(|x| (x % d) * d + x / d).collect();
    Matrix::permutation(&perm)
}

fn check_cap(d: usize, n: usize, cap: usize) -> Result<usize> {
    let mut dim: usize = 1;
    for _ in 0..n {
        dim = dim
            .checked_mul(d)
            .filter(|&x| x <= cap)
            .ok_or(Error::DimensionCap {
                dim: d.saturating_pow(n as u32),
                cap,
            })?;
    }
    Ok(dim)
}

/// `⟦C⟧` by literal structural induction. Intended as an oracle for small terms.
pub fn interp_qudit_structural(c: &Circuit, d: usize) -> Result<Matrix> {
    let n = c.validate(CircuitSpace::new(d)?)?;
    check_cap(d, n, DEFAULT_CAP)?;
    Ok(structural(c, d))
}

fn structural(c: &Circuit, d: usize) -> Matrix {
    match c.node() {
        Node::Empty => Matrix::identity(1),
        Node::Phase(t) => Matrix::scalar(phase_factor(*t)),
        Node::Wire => Matrix::identity(d),
        Node::Swap => swap_matrix(d),
        Node::Hadamard(r) => hadamard_matrix(d, *r),
        Node::Seq(f, g) => structural(f, d).mul(&structural(g, d)),
        Node::Par(a, b) => structural(a, d).kron(&structural(b, d)),
        Node::Ctrl(k, f) => controlled_extension(*k, &structural(f, d), d).expect("validated"),
    }
}

/// `⟦C⟧` with the default dimension cap.
pub fn interp_qudit(c: &Circuit, d: usize) -> Result<Matrix> {
    interp_qudit_with_cap(c, d, DEFAULT_CAP)
}

pub fn interp_qudit_with_cap(c: &Circuit, d: usize, cap: usize) -> Result<Matrix> {
    let n = c.validate(CircuitSpace::new(d)?)?;
    let dim = check_cap(d, n, cap)?;
    let mut ev = QuditEval {
        d,
        n,
        m: Matrix::identity(dim),
        ctrls: Vec::new(),
        strides: (0..n).map(|w| d.pow((n - 1 - w) as u32)).collect(),
    };
    ev.apply(c, 0);
    Ok(ev.m)
}

struct QuditEval {
    d: usize,
    n: usize,
    m: Matrix,
    ctrls: Vec<(usize, usize)>,
    strides: Vec<usize>,
}

impl QuditEval {
    fn digit(&self, x: usize, wire: usize) -> usize {
        (x / self.strides[wire]) % self.d
    }

    fn controls_hold(&self, x: usize) -> bool {
        self.ctrls.iter().all(|&(w, k)| self.digit(x, w) == k)
    }

    fn apply(&mut self, c: &Circuit, off: usize) {
        match c.node() {
            Node::Empty | Node::Wire => {}
            Node::Seq(f, g) => {
                self.apply(g, off);
                self.apply(f, off);
            }
            Node::Par(a, b) => {
                self.apply(a, off);
                self.apply(b, off + a.arity());
            }
            Node::Ctrl(k, f) => {
                self.ctrls.push((off, *k));
                self.apply(f, off + 1);
                self.ctrls.pop();
            }
            Node::Phase(t) => {
                let z = phase_factor(*t);
                for x in 0..self.m.dim() {
                    if self.controls_hold(x) {
                        self.m.scale_row(x, z);
                    }
                }
            }
            Node::Hadamard(r) => {
                let h = C64::new(FRAC_1_SQRT_2, 0.0);
                let s = self.strides[off];
                for x in 0..self.m.dim() {
                    if self.digit(x, off) == *r && self.controls_hold(x) {
                        self.m.mix_rows(x, x + s, [h, h, h, -h]);
                    }
                }
            }
            Node::Swap => {
                let (sa, sb) = (self.strides[off], self.strides[off + 1]);
                for x in 0..self.m.dim() {
                    let (a, b) = (self.digit(x, off), self.digit(x, off + 1));
                    if a < b && self.controls_hold(x) {
                        let y = x - a * sa - b * sb + b * sa + a * sb;
                        self.m.swap_rows(x, y);
                    }
                }
            }
        }
        debug_assert!(off + c.arity() <= self.n);
    }
}

/// Single-photon semantics by literal structural induction.
pub fn interp_lopp_sp_structural(l: &LoppCircuit) -> Result<Matrix> {
    let m = l.validate()?;
    if m > DEFAULT_CAP {
        return Err(Error::DimensionCap {
            dim: m,
            cap: DEFAULT_CAP,
        });
    }
    Ok(sp_structural(l))
}

fn bs_entries(theta: f64) -> [C64; 4] {
    let c = C64::new(theta.cos(), 0.0);
    let s = C64::new(0.0, theta.sin());
    [c, s, s, c]
}

fn sp_structural(l: &LoppCircuit) -> Matrix {
    match l.node() {
        LoppNode::Empty => Matrix::identity(0),
        LoppNode::Wire => Matrix::identity(1),
        LoppNode::Phase(t) => Matrix::scalar(phase_factor(*t)),
        LoppNode::Swap => Matrix::permutation(&[1, 0]),
        LoppNode::BeamSplitter(t) => {
            let e = bs_entries(*t);
            Matrix::from_rows(&[vec![e[0], e[1]], vec![e[2], e[3]]]).expect("2x2")
        }
        LoppNode::Seq(f, g) => sp_structural(f).mul(&sp_structural(g)),
        LoppNode::Par(a, b) => sp_structural(a).direct_sum(&sp_structural(b)),
    }
}

/// `⟦L⟧_sp` with the default cap.
pub fn interp_lopp_sp(l: &LoppCircuit) -> Result<Matrix> {
    interp_lopp_sp_with_cap(l, DEFAULT_CAP)
}

pub fn interp_lopp_sp_with_cap(l: &LoppCircuit, cap: usize) -> Result<Matrix> {
    let m = l.validate()?;
    if m > cap {
        return Err(Error::DimensionCap { dim: m, cap });
    }
    let mut acc = Matrix::identity(m);
    sp_apply(l, 0, &mut acc);
    Ok(acc)
}

fn sp_apply(l: &LoppCircuit, off: usize, acc: &mut Matrix) {
    match l.node() {
        LoppNode::Empty | LoppNode::Wire => {}
        LoppNode::Seq(f, g) => {
            sp_apply(g, off, acc);
            sp_apply(f, off, acc);
        }
        LoppNode::Par(a, b) => {
            sp_apply(a, off, acc);
            sp_apply(b, off + a.modes(), acc);
        }
        LoppNode::Phase(t) => acc.scale_row(off, phase_factor(*t)),
        LoppNode::Swap => acc.swap_rows(off, off + 1),
        LoppNode::BeamSplitter(t) => acc.mix_rows(off, off + 1, bs_entries(*t)),
    }
}

/// `𝔊 ⟦L⟧_sp 𝔊†`: mode `k` is identified with the basis state `G_n^d(k)`.
pub fn interp_lopp_gray(l: &LoppCircuit, d: usize, n: usize) -> Result<Matrix> {
    let sp = interp_lopp_sp_with_cap(l, usize::MAX)?;
    gray_conjugate(&sp, d, n)
}

/// Re-indexes a mode-basis matrix into the computational basis.
pub fn gray_conjugate(sp: &Matrix, d: usize, n: usize) -> Result<Matrix> {
    let ctx = GrayContext::shared(d, n)?;
    if sp.dim() != ctx.len() {
        return Err(Error::ModeCountNotPower { modes: sp.dim(), d });
    }
    let idx: Vec<usize> = (0..ctx.len()).map(|k| ctx.value_of_mode(k)).collect();
    let mut out = Matrix::zeros(sp.dim());
    for s in 0..sp.dim() {
        for t in 0..sp.dim() {
            out.set(idx[s], idx[t], sp.get(s, t));
        }
    }
    Ok(out)
}

/// The Gray permutation matrix `𝔊_{n,d}`, sending `e_k` to `|G_n^d(k)⟩`.
pub fn gray_permutation(d: usize, n: usize) -> Result<Matrix> {
    let ctx = GrayContext::shared(d, n)?;
    let perm: Vec<usize> = (0..ctx.len()).map(|k| ctx.value_of_mode(k)).collect();
    Ok(Matrix::permutation(&perm))
}

/// Exact equality up to `tol` in max-norm, without any phase quotient.
pub fn unitary_equal(u: &Matrix, v: &Matrix, tol: f64) -> Result<(bool, f64)> {
    let r = u.max_diff(v)?;
    Ok((r <= tol, r))
}

/// Indices whose row or column differs from the identity beyond `tol`.
pub fn support_indices(u: &Matrix, tol: f64) -> BTreeSet<usize> {
    let n = u.dim();
    let delta = |i: usize, j: usize| if i == j { ONE } else { ZERO };
    (0..n)
        .filter(|&i| {
            (0..n).any(|j| {
                (u.get(i, j) - delta(i, j)).norm() > tol || (u.get(j, i) - delta(j, i)).norm() > tol
            })
        })
        .collect()
}

/// `I_{d^k}`.
pub fn identity_on(d: usize, k: usize) -> Matrix {
    Matrix::identity(d.pow(k as u32))
}
