//! Finite propositional languages and subsets of their variables.
//!
//! A [`Language`] is an ordered list of distinct variable names. The position
//! of a name is its canonical index, and the index fixes the bit layout of
//! every assignment: an assignment over `n` variables is stored as an `n`-bit
//! word whose most significant bit holds variable 0. Read as a binary number,
//! the word is the assignment's bitstring, and ascending word order is the
//! canonical enumeration order used everywhere in this crate.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Hard cap on language size; every algorithm here enumerates assignments
/// explicitly, so 2^24 worlds is the point past which nothing terminates in
/// reasonable time anyway.
pub const MAX_VARS: usize = 24;

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// An ordered finite set of propositional variables.
///
/// Cloning is cheap. Two languages are equal when their name lists are equal.
#[derive(Clone)]
pub struct Language {
    vars: Arc<[String]>,
}

impl Language {
    /// Builds a language from variable names, in the given order.
    ///
    /// Names must be distinct identifiers (`[A-Za-z_][A-Za-z0-9_']*`; the
    /// trailing prime is admitted for recoded variables such as `q'`). At
    /// least one and at most [`MAX_VARS`] variables.
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Language> {
        let vars: Vec<String> = names.into_iter().map(Into::into).collect();
        if vars.is_empty() {
            return Err(Error::InvalidLanguage("no variables".into()));
        }
        if vars.len() > MAX_VARS {
            return Err(Error::LanguageTooLarge {
                n: vars.len(),
                max: MAX_VARS,
            });
        }
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(v) {
                return Err(Error::InvalidLanguage(format!("bad variable name `{v}`")));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidLanguage(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Language { vars: vars.into() })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.vars
    }

    pub fn name(&self, index: usize) -> &str {
        &self.vars[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// The word-layout bit for variable `index`: variable 0 is the most
    /// significant of the `n` bits.
    pub fn bit(&self, index: usize) -> u32 {
        debug_assert!(index < self.len());
        1 << (self.len() - 1 - index)
    }

    /// Number of assignments over this language.
    pub fn cube_size(&self) -> u32 {
        1u32 << self.len()
    }

    pub fn full_set(&self) -> VarSet {
        VarSet {
            mask: self.cube_size() - 1,
        }
    }

    pub fn empty_set(&self) -> VarSet {
        VarSet { mask: 0 }
    }

    /// Variable subset from names. Errors on a name outside the language.
    pub fn var_set<S: AsRef<str>>(&self, names: impl IntoIterator<Item = S>) -> Result<VarSet> {
        let mut mask = 0;
        for name in names {
            let name = name.as_ref();
            match self.index_of(name) {
                Some(i) => mask |= self.bit(i),
                None => return Err(Error::UnknownVariable(name.to_string())),
            }
        }
        Ok(VarSet { mask })
    }

    /// Variable subset from indices.
    pub fn var_set_of_indices(&self, indices: impl IntoIterator<Item = usize>) -> Result<VarSet> {
        let mut mask = 0;
        for i in indices {
            if i >= self.len() {
                return Err(Error::UnknownVariable(format!("#{i}")));
            }
            mask |= self.bit(i);
        }
        Ok(VarSet { mask })
    }

    /// The names selected by `set`, in index order.
    pub fn names_of(&self, set: VarSet) -> Vec<&str> {
        self.indices_of(set).map(|i| self.name(i)).collect()
    }

    /// Indices selected by `set`, ascending.
    pub fn indices_of(&self, set: VarSet) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| set.mask & self.bit(i) != 0)
    }

    /// The sub-language consisting of the variables in `set`, keeping the
    /// parent order.
    pub fn restrict(&self, set: VarSet) -> Result<Language> {
        Language::new(self.names_of(set))
    }

    /// Parses a bitstring of exactly `len()` characters `0`/`1` into an
    /// assignment word.
    pub fn parse_bitstring(&self, s: &str) -> Result<u32> {
        if s.len() != self.len() || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::Format(format!(
                "expected a bitstring of {} binary digits, got `{s}`",
                self.len()
            )));
        }
        Ok(u32::from_str_radix(s, 2).expect("validated binary"))
    }

    /// Renders an assignment word as a bitstring, variable 0 first.
    pub fn bitstring(&self, word: u32) -> String {
        format!("{word:0width$b}", width = self.len())
    }

    pub(crate) fn check_same(&self, other: &Language) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::LanguageMismatch(format!(
                "[{}] vs [{}]",
                self.names().join(" "),
                other.names().join(" ")
            )))
        }
    }
}

impl PartialEq for Language {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars
    }
}

impl Eq for Language {}

impl fmt::Debug for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Language[{}]", self.names().join(" "))
    }
}

/// A subset of a language's variables, stored as a bit mask in word layout.
///
/// A `VarSet` is meaningful only relative to the language it was built from;
/// the language-carrying types check sizes where sets and values meet.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VarSet {
    mask: u32,
}

impl VarSet {
    pub const EMPTY: VarSet = VarSet { mask: 0 };

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub(crate) fn from_mask(mask: u32) -> VarSet {
        VarSet { mask }
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_subset_of(&self, other: VarSet) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn union(&self, other: VarSet) -> VarSet {
        VarSet {
            mask: self.mask | other.mask,
        }
    }

    pub fn intersect(&self, other: VarSet) -> VarSet {
        VarSet {
            mask: self.mask & other.mask,
        }
    }

    pub fn difference(&self, other: VarSet) -> VarSet {
        VarSet {
            mask: self.mask & !other.mask,
        }
    }

    pub fn is_disjoint_from(&self, other: VarSet) -> bool {
        self.mask & other.mask == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_bad_names() {
        assert!(Language::new(["p", "q", "p"]).is_err());
        assert!(Language::new(["1p"]).is_err());
        assert!(Language::new(["p q"]).is_err());
        assert!(Language::new(Vec::<String>::new()).is_err());
        assert!(Language::new(["q'"]).is_ok());
    }

    #[test]
    fn rejects_oversized_language() {
        let names: Vec<String> = (0..25).map(|i| format!("v{i}")).collect();
        assert!(matches!(
            Language::new(names),
            Err(Error::LanguageTooLarge { n: 25, .. })
        ));
    }

    #[test]
    fn word_layout_puts_variable_zero_in_the_msb() {
        let lang = Language::new(["p", "q", "r"]).unwrap();
        assert_eq!(lang.bit(0), 0b100);
        assert_eq!(lang.bit(2), 0b001);
        assert_eq!(lang.parse_bitstring("110").unwrap(), 0b110);
        assert_eq!(lang.bitstring(0b110), "110");
    }

    #[test]
    fn var_set_round_trips_names() {
        let lang = Language::new(["p", "q", "r"]).unwrap();
        let set = lang.var_set(["r", "p"]).unwrap();
        assert_eq!(lang.names_of(set), vec!["p", "r"]);
        assert_eq!(set.len(), 2);
        assert!(lang.var_set(["z"]).is_err());
    }

    #[test]
    fn restrict_keeps_parent_order() {
        let lang = Language::new(["a", "b", "c", "d"]).unwrap();
        let sub = lang.restrict(lang.var_set(["d", "b"]).unwrap()).unwrap();
        assert_eq!(sub.names(), ["b".to_string(), "d".to_string()]);
    }
}
