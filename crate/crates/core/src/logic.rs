//! Truth-table semantics: model enumeration, the Th-style inverse that
//! turns a model set back into a formula, and classical entailment.

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::lang::Language;
use crate::model::ModelSet;
use crate::par;

/// A formula with variable leaves resolved to bit masks, for fast
/// evaluation against assignment words.
pub(crate) enum Compiled {
    True,
    False,
    Var(u32),
    Not(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
    Implies(Box<Compiled>, Box<Compiled>),
    Iff(Box<Compiled>, Box<Compiled>),
}

pub(crate) fn compile(f: &Formula, lang: &Language) -> Result<Compiled> {
    Ok(match f {
        Formula::True => Compiled::True,
        Formula::False => Compiled::False,
        Formula::Var(name) => {
            let i = lang
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
            Compiled::Var(lang.bit(i))
        }
        Formula::Not(a) => Compiled::Not(Box::new(compile(a, lang)?)),
        Formula::And(a, b) => Compiled::And(Box::new(compile(a, lang)?), Box::new(compile(b, lang)?)),
        Formula::Or(a, b) => Compiled::Or(Box::new(compile(a, lang)?), Box::new(compile(b, lang)?)),
        Formula::Implies(a, b) => {
            Compiled::Implies(Box::new(compile(a, lang)?), Box::new(compile(b, lang)?))
        }
        Formula::Iff(a, b) => Compiled::Iff(Box::new(compile(a, lang)?), Box::new(compile(b, lang)?)),
    })
}

impl Compiled {
    pub(crate) fn eval(&self, word: u32) -> bool {
        match self {
            Compiled::True => true,
            Compiled::False => false,
            Compiled::Var(bit) => word & bit != 0,
            Compiled::Not(a) => !a.eval(word),
            Compiled::And(a, b) => a.eval(word) && b.eval(word),
            Compiled::Or(a, b) => a.eval(word) || b.eval(word),
            Compiled::Implies(a, b) => !a.eval(word) || b.eval(word),
            Compiled::Iff(a, b) => a.eval(word) == b.eval(word),
        }
    }
}

/// All assignments over `lang` satisfying `f`, in canonical order.
pub fn models_of(f: &Formula, lang: &Language) -> Result<ModelSet> {
    let compiled = compile(f, lang)?;
    let words = par::filter_range(0..lang.cube_size(), |w| compiled.eval(w));
    ModelSet::new(lang, words)
}

/// A DNF formula whose models are exactly `x`: one disjunct per assignment,
/// each the full conjunction of that assignment's literals. The empty set
/// becomes `F`.
pub fn formula_of_models(x: &ModelSet) -> Formula {
    let lang = x.lang();
    let mut disjuncts = x.words().iter().map(|&w| {
        let mut literals = (0..lang.len()).map(|i| {
            let var = Formula::var(lang.name(i));
            if w & lang.bit(i) != 0 {
                var
            } else {
                Formula::not(var)
            }
        });
        let first = literals.next().expect("language is non-empty");
        literals.fold(first, Formula::and)
    });
    match disjuncts.next() {
        None => Formula::False,
        Some(first) => disjuncts.fold(first, Formula::or),
    }
}

/// Classical consequence: every model of `f` over `lang` satisfies `g`.
pub fn entails(f: &Formula, g: &Formula, lang: &Language) -> Result<bool> {
    let cf = compile(f, lang)?;
    let cg = compile(g, lang)?;
    Ok((0..lang.cube_size()).all(|w| !cf.eval(w) || cg.eval(w)))
}
