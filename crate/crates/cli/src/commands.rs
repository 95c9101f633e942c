//! Commands, each returning its exit code and captured output.
//!
//! Exit codes: 0 success, 1 check failed, 2 usage, parse or validation
//! error, 3 dimension cap exceeded.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use polyqudit::axioms::synth::{synth_two_level, Unitary2};
use polyqudit::axioms::{run_harness, HarnessConfig, Status, Theory};
use polyqudit::normalize::separate;
use polyqudit::semantics::{interp_lopp_gray, interp_qudit, unitary_equal, Matrix};
use polyqudit::transpile::{decode, encode, DecodingContext, EncodingContext};
use polyqudit::Error;

use crate::text::{parse_lopp, parse_qudit, print_lopp, print_qudit, TextError};

const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "polyqudit",
    version,
    about = "Polycontrolled qudit circuits and their linear-optical encoding"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Print the unitary of a qudit circuit.
    Eval {
        #[arg(short)]
        d: usize,
        file: PathBuf,
    },
    /// Encode a qudit circuit as a Gray-coded optical circuit.
    Encode {
        #[arg(short)]
        d: usize,
        /// Context qudits above the circuit.
        #[arg(short, default_value_t = 0)]
        a: usize,
        /// Context qudits below the circuit.
        #[arg(short, default_value_t = 0)]
        b: usize,
        file: PathBuf,
    },
    /// Decode an optical circuit into an `n`-qudit circuit.
    Decode {
        #[arg(short)]
        d: usize,
        #[arg(short)]
        n: usize,
        /// First global mode occupied by the circuit.
        #[arg(short, default_value_t = 0)]
        t: usize,
        file: PathBuf,
    },
    /// Check that decoding the encoding reproduces the circuit's unitary.
    Roundtrip {
        #[arg(short)]
        d: usize,
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Rewrite into a chain of one-gate layers and explicit permutations.
    Normalize {
        #[arg(short)]
        d: usize,
        file: PathBuf,
    },
    /// Check the equation catalogs on seeded random instances.
    Axioms {
        #[arg(short)]
        d: usize,
        /// qc, qc-derived or lopp; all three when omitted.
        #[arg(long)]
        theory: Option<String>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Exit 0 iff two qudit circuits have equal unitaries.
    Equiv {
        #[arg(short)]
        d: usize,
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Synthesise a 2×2 unitary on the levels `r, r+1` of one qudit.
    Synth1q {
        #[arg(short)]
        d: usize,
        #[arg(short)]
        r: usize,
        /// Matrix dump: `dim 2` then four `re im` lines.
        #[arg(long)]
        matrix: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn check(passed: bool, stdout: String) -> Self {
        Self {
            code: if passed { 0 } else { 1 },
            stdout,
            stderr: String::new(),
        }
    }
}

struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::DimensionCap { .. }) {
            3
        } else {
            2
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<TextError> for Failure {
    fn from(e: TextError) -> Self {
        match e {
            TextError::Validation(inner) => inner.into(),
            syntax => Failure {
                code: 2,
                msg: syntax.to_string(),
            },
        }
    }
}

fn usage(msg: String) -> Failure {
    Failure { code: 2, msg }
}

fn read(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

pub fn execute(cmd: &Command) -> Output {
    run(cmd).unwrap_or_else(|f| Output {
        code: f.code,
        stdout: String::new(),
        stderr: format!("error: {}\n", f.msg),
    })
}

fn run(cmd: &Command) -> Result<Output, Failure> {
    match cmd {
        Command::Eval { d, file } => {
            let c = parse_qudit(&read(file)?, *d)?;
            Ok(Output::ok(interp_qudit(&c, *d)?.dump()))
        }
        Command::Encode { d, a, b, file } => {
            let c = parse_qudit(&read(file)?, *d)?;
            let l = encode(
                EncodingContext {
                    d: *d,
                    a: *a,
                    b: *b,
                },
                &c,
            )?;
            Ok(Output::ok(print_lopp(&l) + "\n"))
        }
        Command::Decode { d, n, t, file } => {
            let l = parse_lopp(&read(file)?)?;
            let c = decode(
                DecodingContext {
                    d: *d,
                    t: *t,
                    n: *n,
                },
                &l,
            )?;
            Ok(Output::ok(print_qudit(&c) + "\n"))
        }
        Command::Roundtrip { d, file, tol } => {
            let c = parse_qudit(&read(file)?, *d)?;
            let n = c.arity();
            let l = encode(EncodingContext { d: *d, a: 0, b: 0 }, &c)?;
            let back = decode(DecodingContext { d: *d, t: 0, n }, &l)?;
            let want = interp_qudit(&c, *d)?;
            let (enc_ok, enc_r) = unitary_equal(&interp_lopp_gray(&l, *d, n)?, &want, *tol)?;
            let (dec_ok, dec_r) = unitary_equal(&interp_qudit(&back, *d)?, &want, *tol)?;
            let ok = enc_ok && dec_ok;
            Ok(Output::check(
                ok,
                format!(
                    "encode residual={enc_r:.3e}\nroundtrip residual={dec_r:.3e}\n{}\n",
                    if ok { "PASS" } else { "FAIL" }
                ),
            ))
        }
        Command::Normalize { d, file } => {
            let c = parse_qudit(&read(file)?, *d)?;
            Ok(Output::ok(print_qudit(&separate(&c, *d)?) + "\n"))
        }
        Command::Axioms {
            d,
            theory,
            samples,
            seed,
            tol,
        } => {
            let theories = match theory {
                None => vec![Theory::Qc, Theory::QcDerived, Theory::Lopp],
                Some(t) => {
                    vec![Theory::parse(t).ok_or_else(|| usage(format!("unknown theory `{t}`")))?]
                }
            };
            if *d < 2 {
                return Err(Error::InvalidDimension(*d).into());
            }
            let cfg = HarnessConfig {
                d: *d,
                samples: *samples,
                seed: *seed,
                tol: *tol,
            };
            let mut out = String::new();
            let mut ok = true;
            for t in theories {
                out.push_str(&format!("# {}\n", t.name()));
                for line in run_harness(t, cfg) {
                    ok &= line.status != Status::Fail;
                    out.push_str(&format!("{line}\n"));
                }
            }
            Ok(Output::check(ok, out))
        }
        Command::Equiv {
            d,
            file1,
            file2,
            tol,
        } => {
            let c1 = parse_qudit(&read(file1)?, *d)?;
            let c2 = parse_qudit(&read(file2)?, *d)?;
            if c1.arity() != c2.arity() {
                return Ok(Output::check(
                    false,
                    format!("not equal: arity {} vs {}\n", c1.arity(), c2.arity()),
                ));
            }
            let (ok, r) = unitary_equal(&interp_qudit(&c1, *d)?, &interp_qudit(&c2, *d)?, *tol)?;
            Ok(Output::check(
                ok,
                format!(
                    "{} residual={r:.3e}\n",
                    if ok { "equal" } else { "not equal" }
                ),
            ))
        }
        Command::Synth1q { d, r, matrix } => {
            let m = Matrix::parse_dump(&read(matrix)?)?;
            if m.dim() != 2 {
                return Err(Error::DimMismatch(m.dim(), 2).into());
            }
            let u: Unitary2 = [[m.get(0, 0), m.get(0, 1)], [m.get(1, 0), m.get(1, 1)]];
            Ok(Output::ok(
                print_qudit(&synth_two_level(&u, *d, *r)?) + "\n",
            ))
        }
    }
}
