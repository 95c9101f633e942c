//! Axiom catalogs as instantiable equation schemata, and the numerical
//! soundness harness that checks every instance against the semantics.

pub mod angles;
mod derived;
mod lopp;
mod qc;
pub mod synth;

pub(crate) use derived::{cccp_decomposition, ccp_decomposition, controlled_hadamard};
pub(crate) use qc::swap_as_controlled;

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ir::{Circuit, CircuitSpace};
use crate::lopp::LoppCircuit;
use crate::semantics::{interp_lopp_sp, interp_qudit, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theory {
    Qc,
    QcDerived,
    Lopp,
}

impl Theory {
    pub fn name(self) -> &'static str {
        match self {
            Theory::Qc => "qc",
            Theory::QcDerived => "qc-derived",
            Theory::Lopp => "lopp",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "qc" => Some(Theory::Qc),
            "qc-derived" => Some(Theory::QcDerived),
            "lopp" => Some(Theory::Lopp),
            _ => None,
        }
    }
}

/// One side of an equation.
#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Qudit(Circuit),
    Lopp(LoppCircuit),
}

impl Term {
    /// Wires for qudit terms, modes for optical ones.
    pub fn width(&self) -> usize {
        match self {
            Term::Qudit(c) => c.arity(),
            Term::Lopp(l) => l.modes(),
        }
    }

    pub fn unitary(&self, d: usize) -> Result<Matrix> {
        match self {
            Term::Qudit(c) => interp_qudit(c, d),
            Term::Lopp(l) => interp_lopp_sp(l),
        }
    }
}

/// Shape of a schema's parameters.
///
/// `levels` are pairwise distinct values in `[d]`; `rungs` lie in `[d−1]`;
/// `digits` are free values in `[d]` except that the first two differ when
/// `split` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ParamSpec {
    pub angles: usize,
    pub levels: usize,
    pub rungs: usize,
    pub digits: usize,
    pub split: bool,
    /// A second pairwise-distinct set, independent of `levels`.
    pub levels2: usize,
}

impl ParamSpec {
    pub const NONE: Self = Self {
        angles: 0,
        levels: 0,
        rungs: 0,
        digits: 0,
        split: false,
        levels2: 0,
    };

    pub const fn angles(mut self, n: usize) -> Self {
        self.angles = n;
        self
    }

    pub const fn levels(mut self, n: usize) -> Self {
        self.levels = n;
        self
    }

    pub const fn levels2(mut self, n: usize) -> Self {
        self.levels2 = n;
        self
    }

    pub const fn rungs(mut self, n: usize) -> Self {
        self.rungs = n;
        self
    }

    pub const fn digits(mut self, n: usize) -> Self {
        self.digits = n;
        self
    }

    /// First two digits must differ.
    pub const fn split(mut self, n: usize) -> Self {
        self.digits = n;
        self.split = true;
        self
    }

    /// Smallest dimension admitting the side conditions.
    pub fn min_d(&self) -> usize {
        2.max(self.levels).max(self.levels2)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Params {
    pub angles: Vec<f64>,
    pub levels: Vec<usize>,
    pub rungs: Vec<usize>,
    pub digits: Vec<usize>,
    pub levels2: Vec<usize>,
}

type Builder = fn(usize, &Params) -> Result<(Term, Term)>;

#[derive(Clone, Copy)]
pub struct AxiomSchema {
    pub name: &'static str,
    pub theory: Theory,
    pub spec: ParamSpec,
    build: Builder,
}

impl fmt::Debug for AxiomSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AxiomSchema")
            .field("name", &self.name)
            .field("theory", &self.theory)
            .field("spec", &self.spec)
            .finish()
    }
}

impl AxiomSchema {
    pub(crate) const fn new(
        name: &'static str,
        theory: Theory,
        spec: ParamSpec,
        build: Builder,
    ) -> Self {
        Self {
            name,
            theory,
            spec,
            build,
        }
    }

    pub fn applies_to(&self, d: usize) -> bool {
        d >= self.spec.min_d()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomInstance {
    pub schema: &'static str,
    pub d: usize,
    pub params: Params,
    pub lhs: Term,
    pub rhs: Term,
}

pub fn catalog(theory: Theory) -> Vec<AxiomSchema> {
    match theory {
        Theory::Qc => qc::schemas(),
        Theory::QcDerived => derived::schemas(),
        Theory::Lopp => lopp::schemas(),
    }
}

pub fn find_schema(name: &str) -> Option<AxiomSchema> {
    [Theory::Qc, Theory::QcDerived, Theory::Lopp]
        .into_iter()
        .flat_map(catalog)
        .find(|s| s.name == name)
}

fn side(msg: String) -> Error {
    Error::SideCondition(msg)
}

/// Checks the side conditions, then builds both sides.
pub fn instantiate(schema: &AxiomSchema, d: usize, params: &Params) -> Result<AxiomInstance> {
    CircuitSpace::new(d)?;
    let s = &schema.spec;
    let counts = [
        ("angles", params.angles.len(), s.angles),
        ("levels", params.levels.len(), s.levels),
        ("rungs", params.rungs.len(), s.rungs),
        ("digits", params.digits.len(), s.digits),
        ("second levels", params.levels2.len(), s.levels2),
    ];
    for (what, got, want) in counts {
        if got != want {
            return Err(side(format!(
                "{}: expected {want} {what}, got {got}",
                schema.name
            )));
        }
    }
    if d < s.min_d() {
        return Err(side(format!(
            "{} needs {} pairwise distinct levels, d = {d}",
            schema.name,
            s.min_d()
        )));
    }
    let range = |what: &'static str, v: usize, limit: usize| -> Result<()> {
        if v >= limit {
            return Err(Error::IndexOutOfRange {
                path: schema.name.into(),
                what,
                value: v,
                limit,
            });
        }
        Ok(())
    };
    for &v in params.levels.iter().chain(&params.levels2) {
        range("level", v, d)?;
    }
    for &v in &params.digits {
        range("digit", v, d)?;
    }
    for &v in &params.rungs {
        range("rung", v, d - 1)?;
    }
    for set in [&params.levels, &params.levels2] {
        for (i, a) in set.iter().enumerate() {
            if set[..i].contains(a) {
                return Err(side(format!(
                    "{}: levels must be pairwise distinct",
                    schema.name
                )));
            }
        }
    }
    if s.split && params.digits[0] == params.digits[1] {
        return Err(side(format!("{}: controls must differ", schema.name)));
    }
    if let Some(a) = params.angles.iter().find(|a| !a.is_finite()) {
        return Err(side(format!("{}: non-finite angle {a}", schema.name)));
    }
    let (lhs, rhs) = (schema.build)(d, params)?;
    if lhs.width() != rhs.width() {
        return Err(Error::ArityMismatch {
            path: schema.name.into(),
            left: lhs.width(),
            right: rhs.width(),
        });
    }
    if let Term::Qudit(c) = &lhs {
        c.validate(CircuitSpace::new(d)?)?;
    }
    if let Term::Qudit(c) = &rhs {
        c.validate(CircuitSpace::new(d)?)?;
    }
    Ok(AxiomInstance {
        schema: schema.name,
        d,
        params: params.clone(),
        lhs,
        rhs,
    })
}

/// `‖⟦lhs⟧ − ⟦rhs⟧‖_max`.
pub fn check_instance(inst: &AxiomInstance) -> Result<f64> {
    let l = inst.lhs.unitary(inst.d)?;
    let r = inst.rhs.unitary(inst.d)?;
    l.max_diff(&r)
}

const SPECIAL_ANGLES: [f64; 6] = [0.0, FRAC_PI_2, -FRAC_PI_2, PI, -PI, 2.0 * PI];

fn sample_angle(rng: &mut impl Rng) -> f64 {
    if rng.gen_bool(0.1) {
        *SPECIAL_ANGLES.choose(rng).expect("nonempty")
    } else {
        rng.gen_range(-TAU..TAU)
    }
}

/// Random parameters meeting the schema's side conditions for `d`.
pub fn sample_params(schema: &AxiomSchema, d: usize, rng: &mut impl Rng) -> Result<Params> {
    let s = &schema.spec;
    if d < s.min_d() {
        return Err(side(format!("{} does not apply at d = {d}", schema.name)));
    }
    let mut pool: Vec<usize> = (0..d).collect();
    pool.shuffle(rng);
    let levels = pool[..s.levels].to_vec();
    pool.shuffle(rng);
    let levels2 = pool[..s.levels2].to_vec();
    let rungs = (0..s.rungs).map(|_| rng.gen_range(0..d - 1)).collect();
    let mut digits: Vec<usize> = (0..s.digits).map(|_| rng.gen_range(0..d)).collect();
    if s.split {
        while digits[1] == digits[0] {
            digits[1] = rng.gen_range(0..d);
        }
    }
    let angles = (0..s.angles).map(|_| sample_angle(rng)).collect();
    Ok(Params {
        angles,
        levels,
        rungs,
        digits,
        levels2,
    })
}

/// Per-instance stream, so any single instance can be replayed in isolation.
pub fn instance_rng(seed: u64, schema_index: usize, d: usize, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((schema_index as u64) << 40) ^ ((d as u64) << 32) ^ i as u64);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The side conditions admit no instance at this `d`.
    Skip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportLine {
    pub name: &'static str,
    pub d: usize,
    pub instances: usize,
    pub max_residual: f64,
    pub status: Status,
}

impl fmt::Display for ReportLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        write!(
            f,
            "{} d={} instances={} max_residual={:.3e} {}",
            self.name, self.d, self.instances, self.max_residual, status
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarnessConfig {
    pub d: usize,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

/// Checks `samples` seeded instances of one schema. A build or evaluation
/// error counts as an infinite residual.
pub fn run_schema(schema_index: usize, schema: &AxiomSchema, cfg: HarnessConfig) -> ReportLine {
    let mut line = ReportLine {
        name: schema.name,
        d: cfg.d,
        instances: 0,
        max_residual: 0.0,
        status: Status::Skip,
    };
    if !schema.applies_to(cfg.d) {
        return line;
    }
    for i in 0..cfg.samples {
        let mut rng = instance_rng(cfg.seed, schema_index, cfg.d, i);
        let r = sample_params(schema, cfg.d, &mut rng)
            .and_then(|p| instantiate(schema, cfg.d, &p))
            .and_then(|inst| check_instance(&inst))
            .unwrap_or(f64::INFINITY);
        line.instances += 1;
        line.max_residual = line
            .max_residual
            .max(if r.is_nan() { f64::INFINITY } else { r });
    }
    line.status = if line.max_residual <= cfg.tol {
        Status::Pass
    } else {
        Status::Fail
    };
    line
}

/// One report line per schema of `theory`, sharded across threads.
pub fn run_harness(theory: Theory, cfg: HarnessConfig) -> Vec<ReportLine> {
    let schemas = catalog(theory);
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(schemas.len().max(1));
    let mut out: Vec<Option<ReportLine>> = vec![None; schemas.len()];
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let schemas = &schemas;
                scope.spawn(move || {
                    (w..schemas.len())
                        .step_by(workers)
                        .map(|i| (i, run_schema(i, &schemas[i], cfg)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, line) in h.join().expect("harness worker panicked") {
                out[i] = Some(line);
            }
        }
    });
    out.into_iter()
        .map(|l| l.expect("every schema reported"))
        .collect()
}

// Shared gate vocabulary for the catalogs. Lists are in written order:
// the last element is applied first.

pub(crate) fn comp(arity: usize, mut written: Vec<Circuit>) -> Circuit {
    written.reverse();
    Circuit::chain(arity, written)
}

/// `P_k(θ)`: phase `θ` on level `k` of one wire.
pub(crate) fn pk(k: usize, theta: f64) -> Circuit {
    Circuit::ctrl(k, Circuit::phase(theta))
}

/// `ctrl_k ctrl_m (θ)` on two wires.
pub(crate) fn ccp(k: usize, m: usize, theta: f64) -> Circuit {
    Circuit::ctrl(k, pk(m, theta))
}

/// `swap ∘ g ∘ swap` for a two-wire `g`.
pub(crate) fn flipped(g: Circuit) -> Circuit {
    comp(2, vec![Circuit::swap(), g, Circuit::swap()])
}

pub(crate) fn qq(l: Circuit, r: Circuit) -> Result<(Term, Term)> {
    Ok((Term::Qudit(l), Term::Qudit(r)))
}

/// `f ∘ g = g ∘ f`.
pub(crate) fn commute(arity: usize, f: Circuit, g: Circuit) -> Result<(Term, Term)> {
    qq(
        comp(arity, vec![f.clone(), g.clone()]),
        comp(arity, vec![g, f]),
    )
}
