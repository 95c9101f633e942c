//! S-expression text for qudit and optical circuits.
//!
//! Qudit: `empty | wire | swap | (id N) | (H R) | (ph θ) | (seq A B) | (par A B) | (ctrl K A)`.
//! Optical: `empty | wire | swap | (ps θ) | (bs θ) | (seq A B) | (par A B)`.
//! Angles are decimals or `pi` multiples such as `pi/2`, `-pi/4`, `3pi/2`.
//! Output angles are shortest round-trip decimals.

use std::f64::consts::PI;
use std::fmt;

use polyqudit::ir::{Circuit, CircuitSpace, Node};
use polyqudit::lopp::{LoppCircuit, LoppNode};

#[derive(Debug, Clone, PartialEq)]
pub enum TextError {
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    Validation(polyqudit::Error),
}

impl fmt::Display for TextError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TextError::Syntax { line, col, msg } => {
                write!(f, "syntax error at {line}:{col}: {msg}")
            }
            TextError::Validation(e) => write!(f, "invalid circuit: {e}"),
        }
    }
}

impl std::error::Error for TextError {}

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Pos {
    line: usize,
    col: usize,
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

fn err<T>(pos: Pos, msg: impl Into<String>) -> Result<T, TextError> {
    Err(TextError::Syntax {
        line: pos.line,
        col: pos.col,
        msg: msg.into(),
    })
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Lexer<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    /// Skips whitespace and `;` comments.
    fn skip(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while self.chars.peek().is_some_and(|&c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn sexp(&mut self) -> Result<Sexp, TextError> {
        self.skip();
        let start = self.pos;
        match self.chars.peek() {
            None => err(start, "unexpected end of input"),
            Some(')') => err(start, "unexpected `)`"),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip();
                    match self.chars.peek() {
                        None => return err(start, "unclosed `(`"),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items, start));
                        }
                        Some(_) => items.push(self.sexp()?),
                    }
                }
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Sexp::Atom(s, start))
            }
        }
    }
}

fn read(text: &str) -> Result<Sexp, TextError> {
    let mut lx = Lexer {
        chars: text.chars().peekable(),
        pos: Pos { line: 1, col: 1 },
    };
    let s = lx.sexp()?;
    lx.skip();
    if lx.chars.peek().is_some() {
        return err(lx.pos, "trailing input after circuit");
    }
    Ok(s)
}

/// A decimal, or `[-][k]pi[/m]`.
pub fn parse_angle(s: &str) -> Option<f64> {
    let v = if let Some(i) = s.find("pi") {
        let (head, tail) = (&s[..i], &s[i + 2..]);
        let k = match head {
            "" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().ok()?,
        };
        let m = match tail {
            "" => 1.0,
            t => t.strip_prefix('/')?.parse::<f64>().ok()?,
        };
        k * PI / m
    } else {
        s.parse::<f64>().ok()?
    };
    v.is_finite().then_some(v)
}

fn number(x: &Sexp) -> Result<usize, TextError> {
    match x {
        Sexp::Atom(s, p) => s
            .parse()
            .or_else(|_| err(*p, format!("expected a natural number, got `{s}`"))),
        Sexp::List(_, p) => err(*p, "expected a natural number"),
    }
}

fn angle(x: &Sexp) -> Result<f64, TextError> {
    match x {
        Sexp::Atom(s, p) => {
            parse_angle(s).map_or_else(|| err(*p, format!("expected an angle, got `{s}`")), Ok)
        }
        Sexp::List(_, p) => err(*p, "expected an angle"),
    }
}

fn head(items: &[Sexp], pos: Pos) -> Result<&str, TextError> {
    match items.first() {
        Some(Sexp::Atom(h, _)) => Ok(h),
        _ => err(pos, "expected an operator"),
    }
}

fn arity_check(items: &[Sexp], n: usize, pos: Pos, op: &str) -> Result<(), TextError> {
    if items.len() != n + 1 {
        return err(
            pos,
            format!("`{op}` takes {n} argument(s), got {}", items.len() - 1),
        );
    }
    Ok(())
}

fn qudit(x: &Sexp) -> Result<Circuit, TextError> {
    match x {
        Sexp::Atom(a, p) => match a.as_str() {
            "empty" => Ok(Circuit::empty()),
            "wire" => Ok(Circuit::wire()),
            "swap" => Ok(Circuit::swap()),
            _ => err(*p, format!("unknown qudit atom `{a}`")),
        },
        Sexp::List(items, p) => {
            let h = head(items, *p)?;
            let a = |n| arity_check(items, n, *p, h);
            match h {
                "id" => {
                    a(1)?;
                    Ok(Circuit::id(number(&items[1])?))
                }
                "H" => {
                    a(1)?;
                    Ok(Circuit::hadamard(number(&items[1])?))
                }
                "ph" => {
                    a(1)?;
                    Ok(Circuit::phase(angle(&items[1])?))
                }
                "seq" => {
                    a(2)?;
                    Ok(Circuit::seq(qudit(&items[1])?, qudit(&items[2])?))
                }
                "par" => {
                    a(2)?;
                    Ok(Circuit::par(qudit(&items[1])?, qudit(&items[2])?))
                }
                "ctrl" => {
                    a(2)?;
                    Ok(Circuit::ctrl(number(&items[1])?, qudit(&items[2])?))
                }
                _ => err(items[0].pos(), format!("unknown qudit operator `{h}`")),
            }
        }
    }
}

fn lopp(x: &Sexp) -> Result<LoppCircuit, TextError> {
    match x {
        Sexp::Atom(a, p) => match a.as_str() {
            "empty" => Ok(LoppCircuit::empty()),
            "wire" => Ok(LoppCircuit::wire()),
            "swap" => Ok(LoppCircuit::swap()),
            _ => err(*p, format!("unknown optical atom `{a}`")),
        },
        Sexp::List(items, p) => {
            let h = head(items, *p)?;
            let a = |n| arity_check(items, n, *p, h);
            match h {
                "ps" => {
                    a(1)?;
                    Ok(LoppCircuit::phase(angle(&items[1])?))
                }
                "bs" => {
                    a(1)?;
                    Ok(LoppCircuit::beam_splitter(angle(&items[1])?))
                }
                "seq" => {
                    a(2)?;
                    Ok(LoppCircuit::seq(lopp(&items[1])?, lopp(&items[2])?))
                }
                "par" => {
                    a(2)?;
                    Ok(LoppCircuit::par(lopp(&items[1])?, lopp(&items[2])?))
                }
                _ => err(items[0].pos(), format!("unknown optical operator `{h}`")),
            }
        }
    }
}

/// Parses and validates against dimension `d`.
pub fn parse_qudit(text: &str, d: usize) -> Result<Circuit, TextError> {
    let c = qudit(&read(text)?)?;
    c.validate(CircuitSpace::new(d).map_err(TextError::Validation)?)
        .map_err(TextError::Validation)?;
    Ok(c)
}

pub fn parse_lopp(text: &str) -> Result<LoppCircuit, TextError> {
    let l = lopp(&read(text)?)?;
    l.validate().map_err(TextError::Validation)?;
    Ok(l)
}

/// Canonical text; `(id N)` for the canonical identity trees with `N ≥ 2`.
pub fn print_qudit(c: &Circuit) -> String {
    let mut out = String::new();
    write_qudit(c, &mut out);
    out
}

fn write_qudit(c: &Circuit, out: &mut String) {
    let n = c.arity();
    if n >= 2 && c.is_id_tree() && *c == Circuit::id(n) {
        out.push_str(&format!("(id {n})"));
        return;
    }
    match c.node() {
        Node::Empty => out.push_str("empty"),
        Node::Wire => out.push_str("wire"),
        Node::Swap => out.push_str("swap"),
        Node::Hadamard(r) => out.push_str(&format!("(H {r})")),
        Node::Phase(t) => out.push_str(&format!("(ph {t})")),
        Node::Seq(a, b) | Node::Par(a, b) => {
            out.push_str(if matches!(c.node(), Node::Seq(..)) {
                "(seq "
            } else {
                "(par "
            });
            write_qudit(a, out);
            out.push(' ');
            write_qudit(b, out);
            out.push(')');
        }
        Node::Ctrl(k, b) => {
            out.push_str(&format!("(ctrl {k} "));
            write_qudit(b, out);
            out.push(')');
        }
    }
}

pub fn print_lopp(l: &LoppCircuit) -> String {
    match l.node() {
        LoppNode::Empty => "empty".into(),
        LoppNode::Wire => "wire".into(),
        LoppNode::Swap => "swap".into(),
        LoppNode::Phase(t) => format!("(ps {t})"),
        LoppNode::BeamSplitter(t) => format!("(bs {t})"),
        LoppNode::Seq(a, b) => format!("(seq {} {})", print_lopp(a), print_lopp(b)),
        LoppNode::Par(a, b) => format!("(par {} {})", print_lopp(a), print_lopp(b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_examples() {
        assert_eq!(
            parse_qudit("(ctrl 1 (H 0))", 3).unwrap(),
            Circuit::ctrl(1, Circuit::hadamard(0))
        );
        assert_eq!(
            parse_qudit("(ph pi/2)", 2).unwrap(),
            Circuit::phase(std::f64::consts::FRAC_PI_2)
        );
        match parse_qudit("(seq wire swap)", 2) {
            Err(TextError::Validation(polyqudit::Error::ArityMismatch { path, .. })) => {
                assert_eq!(path, "seq.right")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn angle_forms() {
        assert_eq!(parse_angle("pi"), Some(PI));
        assert_eq!(parse_angle("-pi/4"), Some(-PI / 4.0));
        assert_eq!(parse_angle("3pi/2"), Some(3.0 * PI / 2.0));
        assert_eq!(parse_angle("0.25"), Some(0.25));
        assert_eq!(parse_angle("pi/"), None);
        assert_eq!(parse_angle("inf"), None);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse_qudit("(seq wire\n  (Q 1))", 2).unwrap_err();
        assert_eq!(
            e,
            TextError::Syntax {
                line: 2,
                col: 4,
                msg: "unknown qudit operator `Q`".into()
            }
        );
        let e = parse_qudit("(par wire wire", 2).unwrap_err();
        assert!(matches!(
            e,
            TextError::Syntax {
                line: 1,
                col: 1,
                ..
            }
        ));
        let e = parse_qudit("wire wire", 2).unwrap_err();
        assert!(matches!(
            e,
            TextError::Syntax {
                line: 1,
                col: 6,
                ..
            }
        ));
    }

    #[test]
    fn printing_is_canonical() {
        let c = parse_qudit("(seq (id 3) (par (ph -pi) (ctrl 2 ; comment\n swap)))", 3).unwrap();
        let t = print_qudit(&c);
        assert_eq!(
            t,
            "(seq (id 3) (par (ph -3.141592653589793) (ctrl 2 swap)))"
        );
        assert_eq!(parse_qudit(&t, 3).unwrap(), c);
        let l = parse_lopp("(par (bs pi/4) (ps 0.1))").unwrap();
        assert_eq!(parse_lopp(&print_lopp(&l)).unwrap(), l);
    }
}
