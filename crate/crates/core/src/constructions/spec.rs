//! The group-spec grammar: `NAME '(' arg (',' arg)* ')'` where each
//! argument is an integer or a nested spec. Names are case-insensitive and
//! whitespace is ignored.

use std::fmt;

use thiserror::Error;

use crate::field::{is_prime, prime_power};

/// Field orders accepted by the linear and affine constructors.
pub const SUPPORTED_Q: [u32; 8] = [2, 3, 4, 5, 7, 8, 9, 16];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Psl {
        n: u32,
        q: u32,
    },
    Sl {
        n: u32,
        q: u32,
    },
    Gl {
        n: u32,
        q: u32,
    },
    Pgl {
        n: u32,
        q: u32,
    },
    Gmf {
        m: u32,
        q: u32,
    },
    /// `ASL(2,q)`, the same group as `GMF(1,q)`.
    Asl {
        q: u32,
    },
    Ea {
        p: u32,
        k: u32,
    },
    Cyclic {
        n: u32,
    },
    Alternating {
        n: u32,
    },
    Symmetric {
        n: u32,
    },
    Pow {
        base: Box<GroupSpec>,
        m: u32,
    },
    Dp(Vec<GroupSpec>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown constructor '{0}'")]
    UnknownConstructor(String),
    #[error("{name} takes {expected}, got {got} argument(s)")]
    Arity {
        name: &'static str,
        expected: &'static str,
        got: usize,
    },
    #[error("{name}: argument {index} must be {expected}")]
    ArgumentKind {
        name: &'static str,
        index: usize,
        expected: &'static str,
    },
    #[error("{name}: {msg}")]
    Range { name: &'static str, msg: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Arg {
    Int(u64),
    Spec(GroupSpec),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, SpecError> {
        Err(SpecError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, c: u8) -> Result<(), SpecError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => self.syntax(format!("expected '{}', found '{}'", c as char, x as char)),
            None => self.syntax(format!("expected '{}', found end of input", c as char)),
        }
    }

    fn spec(&mut self) -> Result<GroupSpec, SpecError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.syntax("expected a constructor name");
        }
        let name = String::from_utf8_lossy(&self.src[start..self.pos]).to_ascii_uppercase();
        self.expect(b'(')?;
        let mut args = vec![self.arg()?];
        loop {
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                    args.push(self.arg()?);
                }
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                Some(c) => return self.syntax(format!("unexpected '{}'", c as char)),
                None => return self.syntax("unclosed '('"),
            }
        }
        build_spec(&name, args)
    }

    fn arg(&mut self) -> Result<Arg, SpecError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match text.parse() {
                    Ok(v) => Ok(Arg::Int(v)),
                    Err(_) => {
                        self.pos = start;
                        self.syntax("integer too large")
                    }
                }
            }
            Some(c) if c.is_ascii_alphabetic() => Ok(Arg::Spec(self.spec()?)),
            Some(c) => self.syntax(format!("unexpected '{}'", c as char)),
            None => self.syntax("unexpected end of input"),
        }
    }
}

pub fn parse_spec(text: &str) -> Result<GroupSpec, SpecError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let spec = p.spec()?;
    if p.peek().is_some() {
        return p.syntax("trailing input");
    }
    Ok(spec)
}

fn ints(
    name: &'static str,
    args: &[Arg],
    expected: &'static str,
    n: usize,
) -> Result<Vec<u64>, SpecError> {
    if args.len() != n {
        return Err(SpecError::Arity {
            name,
            expected,
            got: args.len(),
        });
    }
    args.iter()
        .enumerate()
        .map(|(i, a)| match a {
            Arg::Int(v) => Ok(*v),
            Arg::Spec(_) => Err(SpecError::ArgumentKind {
                name,
                index: i + 1,
                expected: "an integer",
            }),
        })
        .collect()
}

fn range(name: &'static str, ok: bool, msg: impl FnOnce() -> String) -> Result<(), SpecError> {
    if ok {
        Ok(())
    } else {
        Err(SpecError::Range { name, msg: msg() })
    }
}

fn field_q(name: &'static str, q: u64) -> Result<u32, SpecError> {
    range(name, SUPPORTED_Q.contains(&(q as u32)) && q <= 16, || {
        format!("q = {q} is not one of {SUPPORTED_Q:?}")
    })?;
    Ok(q as u32)
}

fn even_q(name: &'static str, q: u64) -> Result<u32, SpecError> {
    let q = field_q(name, q)?;
    range(
        name,
        q > 2 && prime_power(q).map(|(p, _)| p) == Some(2),
        || format!("q = {q} must be a power of 2 greater than 2"),
    )?;
    Ok(q)
}

fn linear(name: &'static str, args: &[Arg]) -> Result<(u32, u32), SpecError> {
    let v = ints(name, args, "2 arguments (n, q)", 2)?;
    range(name, (2..=4).contains(&v[0]), || {
        format!("n = {} must be in 2..=4", v[0])
    })?;
    Ok((v[0] as u32, field_q(name, v[1])?))
}

fn build_spec(name: &str, args: Vec<Arg>) -> Result<GroupSpec, SpecError> {
    Ok(match name {
        "PSL" => {
            let (n, q) = linear("PSL", &args)?;
            GroupSpec::Psl { n, q }
        }
        "SL" => {
            let (n, q) = linear("SL", &args)?;
            GroupSpec::Sl { n, q }
        }
        "GL" => {
            let (n, q) = linear("GL", &args)?;
            GroupSpec::Gl { n, q }
        }
        "PGL" => {
            let (n, q) = linear("PGL", &args)?;
            GroupSpec::Pgl { n, q }
        }
        "GMF" => {
            let v = ints("GMF", &args, "2 arguments (m, q)", 2)?;
            range("GMF", (1..=8).contains(&v[0]), || {
                format!("m = {} must be in 1..=8", v[0])
            })?;
            GroupSpec::Gmf {
                m: v[0] as u32,
                q: even_q("GMF", v[1])?,
            }
        }
        "ASL" => {
            let v = ints("ASL", &args, "2 arguments (2, q)", 2)?;
            range("ASL", v[0] == 2, || {
                format!("only dimension 2 is supported, got {}", v[0])
            })?;
            GroupSpec::Asl {
                q: even_q("ASL", v[1])?,
            }
        }
        "EA" => {
            let v = ints("EA", &args, "2 arguments (p, k)", 2)?;
            range("EA", v[0] <= 4096 && is_prime(v[0] as u32), || {
                format!("{} is not prime", v[0])
            })?;
            range(
                "EA",
                v[1] >= 1 && v[1] <= 12 && v[0].pow(v[1] as u32) <= 4096,
                || {
                    format!(
                        "p^k must satisfy k >= 1 and p^k <= 4096, got {}^{}",
                        v[0], v[1]
                    )
                },
            )?;
            GroupSpec::Ea {
                p: v[0] as u32,
                k: v[1] as u32,
            }
        }
        "C" => {
            let v = ints("C", &args, "1 argument (n)", 1)?;
            range("C", (1..=4096).contains(&v[0]), || {
                format!("n = {} must be in 1..=4096", v[0])
            })?;
            GroupSpec::Cyclic { n: v[0] as u32 }
        }
        "A" | "S" => {
            let label = if name == "A" { "A" } else { "S" };
            let v = ints(label, &args, "1 argument (n)", 1)?;
            range(label, (1..=10).contains(&v[0]), || {
                format!("n = {} must be in 1..=10", v[0])
            })?;
            let n = v[0] as u32;
            if name == "A" {
                GroupSpec::Alternating { n }
            } else {
                GroupSpec::Symmetric { n }
            }
        }
        "POW" => {
            if args.len() != 2 {
                return Err(SpecError::Arity {
                    name: "POW",
                    expected: "2 arguments (spec, m)",
                    got: args.len(),
                });
            }
            let mut it = args.into_iter();
            let base = match it.next().unwrap() {
                Arg::Spec(s) => s,
                Arg::Int(_) => {
                    return Err(SpecError::ArgumentKind {
                        name: "POW",
                        index: 1,
                        expected: "a group spec",
                    })
                }
            };
            let m = match it.next().unwrap() {
                Arg::Int(m) => m,
                Arg::Spec(_) => {
                    return Err(SpecError::ArgumentKind {
                        name: "POW",
                        index: 2,
                        expected: "an integer",
                    })
                }
            };
            range("POW", (1..=8).contains(&m), || {
                format!("m = {m} must be in 1..=8")
            })?;
            GroupSpec::Pow {
                base: Box::new(base),
                m: m as u32,
            }
        }
        "DP" => {
            let specs = args
                .into_iter()
                .enumerate()
                .map(|(i, a)| match a {
                    Arg::Spec(s) => Ok(s),
                    Arg::Int(_) => Err(SpecError::ArgumentKind {
                        name: "DP",
                        index: i + 1,
                        expected: "a group spec",
                    }),
                })
                .collect::<Result<Vec<_>, _>>()?;
            GroupSpec::Dp(specs)
        }
        other => return Err(SpecError::UnknownConstructor(other.to_string())),
    })
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Psl { n, q } => write!(f, "PSL({n},{q})"),
            GroupSpec::Sl { n, q } => write!(f, "SL({n},{q})"),
            GroupSpec::Gl { n, q } => write!(f, "GL({n},{q})"),
            GroupSpec::Pgl { n, q } => write!(f, "PGL({n},{q})"),
            GroupSpec::Gmf { m, q } => write!(f, "GMF({m},{q})"),
            GroupSpec::Asl { q } => write!(f, "ASL(2,{q})"),
            GroupSpec::Ea { p, k } => write!(f, "EA({p},{k})"),
            GroupSpec::Cyclic { n } => write!(f, "C({n})"),
            GroupSpec::Alternating { n } => write!(f, "A({n})"),
            GroupSpec::Symmetric { n } => write!(f, "S({n})"),
            GroupSpec::Pow { base, m } => write!(f, "POW({base},{m})"),
            GroupSpec::Dp(specs) => {
                write!(f, "DP(")?;
                for (i, s) in specs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_examples() {
        assert_eq!(
            parse_spec("PSL(2,7)").unwrap(),
            GroupSpec::Psl { n: 2, q: 7 }
        );
        assert_eq!(
            parse_spec("GMF(2,4)").unwrap(),
            GroupSpec::Gmf { m: 2, q: 4 }
        );
        assert_eq!(
            parse_spec(" gmf ( 2 , 4 ) ").unwrap(),
            GroupSpec::Gmf { m: 2, q: 4 }
        );
        assert_eq!(
            parse_spec("POW(A(5),2)").unwrap(),
            GroupSpec::Pow {
                base: Box::new(GroupSpec::Alternating { n: 5 }),
                m: 2
            }
        );
        assert_eq!(parse_spec("asl(2,4)").unwrap(), GroupSpec::Asl { q: 4 });
    }

    #[test]
    fn distinct_error_kinds() {
        assert!(matches!(parse_spec("PSL(2)"), Err(SpecError::Arity { .. })));
        assert!(matches!(
            parse_spec("FOO(2)"),
            Err(SpecError::UnknownConstructor(_))
        ));
        assert!(matches!(
            parse_spec("PSL(2,6)"),
            Err(SpecError::Range { .. })
        ));
        assert!(matches!(
            parse_spec("GMF(2,2)"),
            Err(SpecError::Range { .. })
        ));
        assert!(matches!(
            parse_spec("PSL(2,7"),
            Err(SpecError::Syntax { .. })
        ));
        assert!(matches!(
            parse_spec("PSL(2,7))"),
            Err(SpecError::Syntax { .. })
        ));
        assert!(matches!(
            parse_spec("POW(5,2)"),
            Err(SpecError::ArgumentKind { .. })
        ));
        assert!(matches!(parse_spec("A(11)"), Err(SpecError::Range { .. })));
        match parse_spec("PSL(2,,7)") {
            Err(SpecError::Syntax { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
    }

    fn arb_spec() -> impl Strategy<Value = GroupSpec> {
        let leaf = prop_oneof![
            (2u32..=4, proptest::sample::select(SUPPORTED_Q.to_vec()))
                .prop_map(|(n, q)| GroupSpec::Psl { n, q }),
            (2u32..=4, proptest::sample::select(SUPPORTED_Q.to_vec()))
                .prop_map(|(n, q)| GroupSpec::Gl { n, q }),
            (1u32..=8, proptest::sample::select(vec![4u32, 8, 16]))
                .prop_map(|(m, q)| GroupSpec::Gmf { m, q }),
            proptest::sample::select(vec![4u32, 8, 16]).prop_map(|q| GroupSpec::Asl { q }),
            (1u32..=6).prop_map(|k| GroupSpec::Ea { p: 2, k }),
            (1u32..=10).prop_map(|n| GroupSpec::Alternating { n }),
            (1u32..=10).prop_map(|n| GroupSpec::Symmetric { n }),
            (1u32..=100).prop_map(|n| GroupSpec::Cyclic { n }),
        ];
        leaf.prop_recursive(2, 8, 3, |inner| {
            prop_oneof![
                (inner.clone(), 1u32..=8).prop_map(|(b, m)| GroupSpec::Pow {
                    base: Box::new(b),
                    m
                }),
                proptest::collection::vec(inner, 1..3).prop_map(GroupSpec::Dp),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_reparses(spec in arb_spec()) {
            prop_assert_eq!(parse_spec(&spec.to_string()).unwrap(), spec.clone());
            prop_assert_eq!(parse_spec(&spec.to_string().lowercase_with_spaces()).unwrap(), spec);
        }
    }

    trait Noisy {
        fn lowercase_with_spaces(&self) -> String;
    }

    impl Noisy for String {
        fn lowercase_with_spaces(&self) -> String {
            self.to_lowercase().replace(',', " , ").replace('(', " (")
        }
    }
}
