//! Propositional formula ASTs.
//!
//! The surface syntax is ASCII (`! & | -> <->`, constants `T`/`F`), with the
//! Unicode connectives accepted as aliases on input. `Display` prints the
//! minimal-parenthesis ASCII form; re-parsing the printed form yields a
//! structurally identical AST.

use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Var(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Formula::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// The set of variable names occurring in the formula.
    pub fn vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Var(v) => {
                out.insert(v.as_str());
            }
            Formula::Not(f) => f.collect_vars(out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Variable names in order of first occurrence, left to right.
    pub fn vars_in_order(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars_ordered(&mut out);
        out
    }

    fn collect_vars_ordered<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Var(v) => {
                if !out.contains(&v.as_str()) {
                    out.push(v.as_str());
                }
            }
            Formula::Not(f) => f.collect_vars_ordered(out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_vars_ordered(out);
                b.collect_vars_ordered(out);
            }
        }
    }
}

// Binding strength, loosest first. Used by the printer to decide parentheses.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Prec {
    Iff,
    Implies,
    Or,
    And,
    Atom,
}

fn write_prec(f: &mut fmt::Formatter<'_>, formula: &Formula, min: Prec) -> fmt::Result {
    let prec = match formula {
        Formula::Iff(..) => Prec::Iff,
        Formula::Implies(..) => Prec::Implies,
        Formula::Or(..) => Prec::Or,
        Formula::And(..) => Prec::And,
        _ => Prec::Atom,
    };
    let parens = prec < min;
    if parens {
        write!(f, "(")?;
    }
    match formula {
        Formula::True => write!(f, "T")?,
        Formula::False => write!(f, "F")?,
        Formula::Var(v) => write!(f, "{v}")?,
        Formula::Not(inner) => {
            write!(f, "!")?;
            write_prec(f, inner, Prec::Atom)?;
        }
        Formula::And(a, b) => {
            // left-associative: the right child must bind tighter
            write_prec(f, a, Prec::And)?;
            write!(f, " & ")?;
            write_prec(f, b, Prec::Atom)?;
        }
        Formula::Or(a, b) => {
            write_prec(f, a, Prec::Or)?;
            write!(f, " | ")?;
            write_prec(f, b, Prec::And)?;
        }
        Formula::Implies(a, b) => {
            // right-associative
            write_prec(f, a, Prec::Or)?;
            write!(f, " -> ")?;
            write_prec(f, b, Prec::Implies)?;
        }
        Formula::Iff(a, b) => {
            // non-associative: nested <-> always gets parentheses
            write_prec(f, a, Prec::Implies)?;
            write!(f, " <-> ")?;
            write_prec(f, b, Prec::Implies)?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prec(f, self, Prec::Iff)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vars_deduplicate() {
        let f = Formula::or(
            Formula::var("p"),
            Formula::and(Formula::var("p"), Formula::var("q")),
        );
        assert_eq!(f.vars().into_iter().collect::<Vec<_>>(), vec!["p", "q"]);
        assert_eq!(Formula::True.vars().len(), 0);
    }

    #[test]
    fn display_uses_minimal_parentheses() {
        let p = Formula::var("p");
        let q = Formula::var("q");
        let r = Formula::var("r");
        assert_eq!(
            Formula::or(Formula::and(p.clone(), q.clone()), r.clone()).to_string(),
            "p & q | r"
        );
        assert_eq!(
            Formula::and(Formula::or(p.clone(), q.clone()), r.clone()).to_string(),
            "(p | q) & r"
        );
        assert_eq!(
            Formula::implies(Formula::implies(p.clone(), q.clone()), r.clone()).to_string(),
            "(p -> q) -> r"
        );
        assert_eq!(
            Formula::implies(p.clone(), Formula::implies(q.clone(), r.clone())).to_string(),
            "p -> q -> r"
        );
        assert_eq!(
            Formula::not(Formula::implies(p.clone(), q.clone())).to_string(),
            "!(p -> q)"
        );
        assert_eq!(
            Formula::iff(Formula::iff(p.clone(), q.clone()), r.clone()).to_string(),
            "(p <-> q) <-> r"
        );
        assert_eq!(Formula::not(Formula::not(p)).to_string(), "!!p");
    }

    #[test]
    fn iff_children_of_other_connectives_are_parenthesized() {
        let p = Formula::var("p");
        let q = Formula::var("q");
        let f = Formula::and(Formula::iff(p.clone(), q.clone()), p.clone());
        assert_eq!(f.to_string(), "(p <-> q) & p");
        let g = Formula::implies(p.clone(), Formula::iff(p, q));
        assert_eq!(g.to_string(), "p -> (p <-> q)");
    }
}
