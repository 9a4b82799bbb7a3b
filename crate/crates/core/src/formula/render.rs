use super::{Formula, Term};
use std::fmt;

const QUANT: u8 = 0;
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Exists(..) | Formula::Forall(..) => QUANT,
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMP,
        Formula::Or(_) => OR,
        Formula::And(_) => AND,
        _ => UNARY,
    }
}

fn sides(t: &Term) -> (Term, Term) {
    t.split_signs()
}

fn write_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if level(f) < min {
        write!(out, "(")?;
        write_at(f, QUANT, out)?;
        return write!(out, ")");
    }
    match f {
        Formula::True => write!(out, "true"),
        Formula::False => write!(out, "false"),
        Formula::Le(t) => {
            let (p, n) = sides(t);
            write!(out, "{p} <= {n}")
        }
        Formula::Lt(t) => {
            let (p, n) = sides(t);
            write!(out, "{p} < {n}")
        }
        Formula::Eq(t) => {
            let (p, n) = sides(t);
            write!(out, "{p} = {n}")
        }
        Formula::Cong(t, m) => {
            let (p, n) = sides(t);
            write!(out, "{p} = {n} mod {m}")
        }
        Formula::Pred(name, args) => {
            write!(out, "{name}(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    write!(out, ", ")?;
                }
                write!(out, "{a}")?;
            }
            write!(out, ")")
        }
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Eq(t) => {
                let (p, n) = sides(t);
                write!(out, "{p} != {n}")
            }
            Formula::Not(_) => {
                write!(out, "!")?;
                write_at(inner, UNARY, out)
            }
            _ => {
                write!(out, "!(")?;
                write_at(inner, QUANT, out)?;
                write!(out, ")")
            }
        },
        Formula::And(xs) => join(xs, " & ", AND + 1, out),
        Formula::Or(xs) => join(xs, " | ", OR + 1, out),
        Formula::Implies(a, b) => {
            write_at(a, IMP + 1, out)?;
            write!(out, " -> ")?;
            write_at(b, IMP, out)
        }
        Formula::Iff(a, b) => {
            write_at(a, IFF, out)?;
            write!(out, " <-> ")?;
            write_at(b, IFF + 1, out)
        }
        Formula::Exists(v, body) => {
            write!(out, "E {v}. ")?;
            write_at(body, QUANT, out)
        }
        Formula::Forall(v, body) => {
            write!(out, "A {v}. ")?;
            write_at(body, QUANT, out)
        }
    }
}

fn join(xs: &[Formula], sep: &str, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if xs.is_empty() {
        return write!(out, "{}", if sep.contains('&') { "true" } else { "false" });
    }
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(out, "{sep}")?;
        }
        write_at(x, min, out)?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, QUANT, f)
    }
}
