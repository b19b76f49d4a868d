//! Model sets and their carrier algebra: projection, first extension of a
//! partial assignment, and gluing projections back into a product.
//!
//! Everything is finite and explicit. A model set stores its assignments as
//! sorted words, so iteration order is always the canonical order and equal
//! sets compare equal structurally. The empty model set is a legal value
//! here; the factorization and revision modules reject it at their doors.

use std::fmt;

use crate::error::{Error, Result};
use crate::lang::{Language, VarSet};

/// A total truth assignment over a language.
#[derive(Clone, PartialEq, Eq)]
pub struct Assignment {
    lang: Language,
    word: u32,
}

impl Assignment {
    pub fn new(lang: &Language, word: u32) -> Result<Assignment> {
        if word >= lang.cube_size() {
            return Err(Error::Format(format!(
                "assignment word {word} out of range for {} variables",
                lang.len()
            )));
        }
        Ok(Assignment {
            lang: lang.clone(),
            word,
        })
    }

    pub fn from_bitstring(lang: &Language, bits: &str) -> Result<Assignment> {
        Ok(Assignment {
            lang: lang.clone(),
            word: lang.parse_bitstring(bits)?,
        })
    }

    pub fn lang(&self) -> &Language {
        &self.lang
    }

    /// The canonical integer encoding: the bitstring read as a binary
    /// number, variable 0 most significant.
    pub fn word(&self) -> u32 {
        self.word
    }

    pub fn value(&self, var_index: usize) -> bool {
        self.word & self.lang.bit(var_index) != 0
    }

    pub fn bitstring(&self) -> String {
        self.lang.bitstring(self.word)
    }

    /// Restriction to a variable subset.
    pub fn restrict(&self, domain: VarSet) -> PartialAssignment {
        PartialAssignment {
            lang: self.lang.clone(),
            domain,
            word: self.word & domain.mask(),
        }
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bitstring())
    }
}

/// A truth assignment on a subset of a language's variables.
#[derive(Clone, PartialEq, Eq)]
pub struct PartialAssignment {
    lang: Language,
    domain: VarSet,
    word: u32, // bits outside the domain are zero
}

impl PartialAssignment {
    /// Builds a partial assignment from `(name, value)` pairs.
    pub fn new<S: AsRef<str>>(
        lang: &Language,
        values: impl IntoIterator<Item = (S, bool)>,
    ) -> Result<PartialAssignment> {
        let mut domain = 0u32;
        let mut word = 0u32;
        for (name, value) in values {
            let name = name.as_ref();
            let i = lang
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            domain |= lang.bit(i);
            if value {
                word |= lang.bit(i);
            }
        }
        Ok(PartialAssignment {
            lang: lang.clone(),
            domain: VarSet::from_mask(domain),
            word,
        })
    }

    pub fn empty(lang: &Language) -> PartialAssignment {
        PartialAssignment {
            lang: lang.clone(),
            domain: VarSet::EMPTY,
            word: 0,
        }
    }

    pub fn lang(&self) -> &Language {
        &self.lang
    }

    pub fn domain(&self) -> VarSet {
        self.domain
    }

    pub fn word(&self) -> u32 {
        self.word
    }

    pub fn value(&self, var_index: usize) -> Option<bool> {
        let bit = self.lang.bit(var_index);
        if self.domain.mask() & bit == 0 {
            None
        } else {
            Some(self.word & bit != 0)
        }
    }
}

impl fmt::Debug for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Render as a bitstring with `-` on the unassigned positions.
        for i in 0..self.lang.len() {
            match self.value(i) {
                Some(true) => write!(f, "1")?,
                Some(false) => write!(f, "0")?,
                None => write!(f, "-")?,
            }
        }
        Ok(())
    }
}

/// A finite set of assignments over one language, stored sorted.
#[derive(Clone, PartialEq, Eq)]
pub struct ModelSet {
    lang: Language,
    words: Vec<u32>,
}

impl ModelSet {
    /// Builds a model set from words; sorts and deduplicates.
    pub fn new(lang: &Language, mut words: Vec<u32>) -> Result<ModelSet> {
        if let Some(&w) = words.iter().find(|&&w| w >= lang.cube_size()) {
            return Err(Error::Format(format!(
                "assignment word {w} out of range for {} variables",
                lang.len()
            )));
        }
        words.sort_unstable();
        words.dedup();
        Ok(ModelSet {
            lang: lang.clone(),
            words,
        })
    }

    pub fn empty(lang: &Language) -> ModelSet {
        ModelSet {
            lang: lang.clone(),
            words: Vec::new(),
        }
    }

    pub fn from_bitstrings<S: AsRef<str>>(
        lang: &Language,
        bits: impl IntoIterator<Item = S>,
    ) -> Result<ModelSet> {
        let words = bits
            .into_iter()
            .map(|b| lang.parse_bitstring(b.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        ModelSet::new(lang, words)
    }

    /// All 2^n assignments.
    pub fn full_cube(lang: &Language) -> ModelSet {
        ModelSet {
            lang: lang.clone(),
            words: (0..lang.cube_size()).collect(),
        }
    }

    pub fn lang(&self) -> &Language {
        &self.lang
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[u32] {
        &self.words
    }

    pub fn contains_word(&self, word: u32) -> bool {
        self.words.binary_search(&word).is_ok()
    }

    pub fn contains(&self, a: &Assignment) -> bool {
        self.lang == *a.lang() && self.contains_word(a.word())
    }

    pub fn iter(&self) -> impl Iterator<Item = Assignment> + '_ {
        self.words.iter().map(move |&w| Assignment {
            lang: self.lang.clone(),
            word: w,
        })
    }

    pub fn bitstrings(&self) -> Vec<String> {
        self.words.iter().map(|&w| self.lang.bitstring(w)).collect()
    }

    pub fn intersect(&self, other: &ModelSet) -> Result<ModelSet> {
        self.lang.check_same(&other.lang)?;
        let words = self
            .words
            .iter()
            .copied()
            .filter(|w| other.contains_word(*w))
            .collect();
        Ok(ModelSet {
            lang: self.lang.clone(),
            words,
        })
    }

    /// X⌈U′: the set of distinct restrictions of the members to `domain`.
    ///
    /// For the empty domain this is a single empty partial assignment when
    /// the set is non-empty, and empty otherwise.
    pub fn project(&self, domain: VarSet) -> ProjectedSet {
        let mask = domain.mask();
        let mut words: Vec<u32> = self.words.iter().map(|w| w & mask).collect();
        words.sort_unstable();
        words.dedup();
        ProjectedSet {
            lang: self.lang.clone(),
            domain,
            words,
        }
    }

    /// σ⁺: the canonically first member whose restriction to the partial
    /// assignment's domain equals it.
    pub fn first_extension(&self, partial: &PartialAssignment) -> Result<Assignment> {
        self.lang.check_same(partial.lang())?;
        let mask = partial.domain().mask();
        self.words
            .iter()
            .find(|&&w| w & mask == partial.word())
            .map(|&w| Assignment {
                lang: self.lang.clone(),
                word: w,
            })
            .ok_or(Error::NotRealizable)
    }
}

impl fmt::Debug for ModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.bitstrings().join(","))
    }
}

/// The projection of a model set onto one variable subset: a set of partial
/// assignments sharing a domain.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProjectedSet {
    lang: Language,
    domain: VarSet,
    words: Vec<u32>, // sorted, masked to the domain
}

impl ProjectedSet {
    /// Builds a projected set directly from partial-assignment words on
    /// `domain` (bits outside the domain must be zero).
    pub fn new(lang: &Language, domain: VarSet, mut words: Vec<u32>) -> Result<ProjectedSet> {
        if !domain.is_subset_of(lang.full_set()) {
            return Err(Error::Format("domain outside the language".into()));
        }
        if words.iter().any(|w| w & !domain.mask() != 0) {
            return Err(Error::Format(
                "partial assignment sets bits outside its domain".into(),
            ));
        }
        words.sort_unstable();
        words.dedup();
        Ok(ProjectedSet {
            lang: lang.clone(),
            domain,
            words,
        })
    }

    pub fn lang(&self) -> &Language {
        &self.lang
    }

    pub fn domain(&self) -> VarSet {
        self.domain
    }

    pub fn words(&self) -> &[u32] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, p: &PartialAssignment) -> bool {
        self.lang == *p.lang()
            && self.domain == p.domain()
            && self.words.binary_search(&p.word()).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = PartialAssignment> + '_ {
        self.words.iter().map(move |&w| PartialAssignment {
            lang: self.lang.clone(),
            domain: self.domain,
            word: w,
        })
    }

    /// Reinterprets the projection as a model set over the sub-language of
    /// its domain (variables keep their relative order).
    pub fn to_model_set(&self) -> Result<ModelSet> {
        let sub = self.lang.restrict(self.domain)?;
        let indices: Vec<usize> = self.lang.indices_of(self.domain).collect();
        let words = self
            .words
            .iter()
            .map(|&w| {
                let mut packed = 0u32;
                for (k, &i) in indices.iter().enumerate() {
                    if w & self.lang.bit(i) != 0 {
                        packed |= sub.bit(k);
                    }
                }
                packed
            })
            .collect();
        ModelSet::new(&sub, words)
    }

    /// Inverse of [`to_model_set`](Self::to_model_set): lifts a model set
    /// over the sub-language of `domain` back to a projected set in `lang`.
    pub fn from_model_set(lang: &Language, domain: VarSet, sub_set: &ModelSet) -> Result<ProjectedSet> {
        let indices: Vec<usize> = lang.indices_of(domain).collect();
        if sub_set.lang().len() != indices.len() {
            return Err(Error::LanguageMismatch(
                "sub-language size does not match the domain".into(),
            ));
        }
        let sub = sub_set.lang().clone();
        let words = sub_set
            .words()
            .iter()
            .map(|&w| {
                let mut lifted = 0u32;
                for (k, &i) in indices.iter().enumerate() {
                    if w & sub.bit(k) != 0 {
                        lifted |= lang.bit(i);
                    }
                }
                lifted
            })
            .collect();
        ProjectedSet::new(lang, domain, words)
    }
}

fn check_blocks_partition(lang: &Language, domains: &[VarSet]) -> Result<()> {
    let mut seen = VarSet::EMPTY;
    for &d in domains {
        if d.is_empty() {
            return Err(Error::NotAPartition("empty block".into()));
        }
        if !seen.is_disjoint_from(d) {
            return Err(Error::NotAPartition("overlapping blocks".into()));
        }
        seen = seen.union(d);
    }
    if seen != lang.full_set() {
        return Err(Error::NotAPartition(
            "blocks do not cover the language".into(),
        ));
    }
    Ok(())
}

/// The product of block projections: all assignments whose restriction to
/// each part's domain lies in that part. The domains must partition the
/// language.
pub fn glue(parts: &[ProjectedSet]) -> Result<ModelSet> {
    let lang = match parts.first() {
        Some(p) => p.lang().clone(),
        None => return Err(Error::NotAPartition("no blocks".into())),
    };
    for p in parts {
        lang.check_same(p.lang())?;
    }
    let domains: Vec<VarSet> = parts.iter().map(|p| p.domain()).collect();
    check_blocks_partition(&lang, &domains)?;

    // Every choice of one partial assignment per block ORs into a distinct
    // word, so the product enumerates the glue exactly.
    let mut words = vec![0u32];
    for part in parts {
        if part.is_empty() {
            words.clear();
            break;
        }
        let mut next = Vec::with_capacity(words.len() * part.len());
        for &w in &words {
            for &p in part.words() {
                next.push(w | p);
            }
        }
        words = next;
    }
    words.sort_unstable();
    ModelSet::new(&lang, words)
}

/// Glue of one projected set with the full cube on the remaining variables
/// `free`. `part.domain()` and `free` must partition the language; `free`
/// may be empty, in which case this is just the glue of `part` alone.
pub fn free_product(part: &ProjectedSet, free: VarSet) -> Result<ModelSet> {
    if free.is_empty() {
        return glue(std::slice::from_ref(part));
    }
    let lang = part.lang();
    let free_words: Vec<u32> = {
        // enumerate all assignments on the free variables
        let indices: Vec<usize> = lang.indices_of(free).collect();
        (0..(1u32 << indices.len()))
            .map(|combo| {
                let mut w = 0;
                for (k, &i) in indices.iter().enumerate() {
                    if combo & (1 << k) != 0 {
                        w |= lang.bit(i);
                    }
                }
                w
            })
            .collect()
    };
    let cube = ProjectedSet::new(lang, free, free_words)?;
    glue(&[part.clone(), cube])
}

/// Constructs the full cube restricted to a domain, as a projected set.
pub fn cube_on(lang: &Language, domain: VarSet) -> Result<ProjectedSet> {
    let indices: Vec<usize> = lang.indices_of(domain).collect();
    let words = (0..(1u32 << indices.len()))
        .map(|combo| {
            let mut w = 0;
            for (k, &i) in indices.iter().enumerate() {
                if combo & (1 << k) != 0 {
                    w |= lang.bit(i);
                }
            }
            w
        })
        .collect();
    ProjectedSet::new(lang, domain, words)
}

// --- text format ----------------------------------------------------------

impl ModelSet {
    /// Parses the model-set text format:
    ///
    /// ```text
    /// vars: p q r
    /// # comment
    /// 110
    /// 011
    /// ```
    ///
    /// `#` starts a comment, blank lines are ignored, and bit i of each row
    /// is the value of the i-th header variable.
    pub fn parse_text(text: &str) -> Result<ModelSet> {
        let mut lines = text.lines().map(|l| {
            let l = l.split('#').next().unwrap_or("");
            l.trim()
        });
        let header = lines
            .by_ref()
            .find(|l| !l.is_empty())
            .ok_or_else(|| Error::Format("missing `vars:` header".into()))?;
        let names = header
            .strip_prefix("vars:")
            .ok_or_else(|| Error::Format(format!("expected `vars:` header, got `{header}`")))?;
        let lang = Language::new(names.split_whitespace())?;
        let mut words = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            words.push(lang.parse_bitstring(line)?);
        }
        ModelSet::new(&lang, words)
    }

    /// Renders the model-set text format, one assignment per line in
    /// canonical order.
    pub fn to_text(&self) -> String {
        let mut out = format!("vars: {}\n", self.lang.names().join(" "));
        for &w in &self.words {
            out.push_str(&self.lang.bitstring(w));
            out.push('\n');
        }
        out
    }
}
