//! Bijective reinterpretations of the assignment cube.
//!
//! Whether a model set factorizes depends on the variable language: the
//! diagonal {11,00} has no split, but read through q′ := p ↔ q the same two
//! situations become {11,01}, which splits completely. A [`Recoding`] is a
//! bijection of the cube carrying a set over n source variables to a set
//! over n target variables, given either as a full permutation table or in
//! GF(2)-affine form (invertible 0/1 matrix plus offset vector, covering
//! the paper-and-pencil `p ↔ q` style definitions since x ↔ y is an affine
//! function of x ⊕ y).
//!
//! [`search_factorizing_recoding`] hunts for a recoding whose image has a
//! factorization with at least two blocks, exhausting all 2^n! tables in
//! the full mode (n ≤ 3) or all invertible matrices in the affine mode
//! (n ≤ 5), in lexicographic order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lang::Language;
use crate::model::ModelSet;
use crate::par;

/// The bijection itself, in either representation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RecodingMap {
    /// `table[w]` is the image of source word `w`; a permutation of the
    /// cube.
    Table(Vec<u32>),
    /// Target word bits are affine functions of source word bits:
    /// row r (one mask per target variable, in word layout) gives target
    /// variable r the parity of `rows[r] & w`, flipped by offset bit r.
    Affine { rows: Vec<u32>, offset: u32 },
}

/// A bijection of the 2^n cube from any n-variable language onto a target
/// language.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Recoding {
    target: Language,
    map: RecodingMap,
}

fn parity(word: u32) -> u32 {
    word.count_ones() & 1
}

fn mat_vec(rows: &[u32], word: u32) -> u32 {
    let n = rows.len();
    rows.iter()
        .enumerate()
        .fold(0, |acc, (r, &row)| acc | (parity(row & word) << (n - 1 - r)))
}

fn gf2_invertible(rows: &[u32]) -> bool {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut rank = 0;
    for bit in (0..n).rev() {
        let Some(pivot) = (rank..n).find(|&r| m[r] & (1 << bit) != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in 0..n {
            if r != rank && m[r] & (1 << bit) != 0 {
                m[r] ^= m[rank];
            }
        }
        rank += 1;
    }
    rank == n
}

fn gf2_inverse(rows: &[u32]) -> Option<Vec<u32>> {
    let n = rows.len();
    // Augment each row with the identity in the high bits and run
    // Gauss-Jordan on the low bits.
    let mut aug: Vec<u64> = rows
        .iter()
        .enumerate()
        .map(|(r, &row)| ((1u64 << (n - 1 - r)) << n) | u64::from(row))
        .collect();
    let mut where_pivot = vec![usize::MAX; n];
    let mut rank = 0;
    for bit in (0..n).rev() {
        let Some(pivot) = (rank..n).find(|&r| aug[r] & (1 << bit) != 0) else {
            continue;
        };
        aug.swap(rank, pivot);
        for r in 0..n {
            if r != rank && aug[r] & (1 << bit) != 0 {
                aug[r] ^= aug[rank];
            }
        }
        where_pivot[n - 1 - bit] = rank;
        rank += 1;
    }
    if rank < n {
        return None;
    }
    // Row with its single low bit at column (n-1-r) is row r of the
    // inverse's application order.
    Some(
        (0..n)
            .map(|r| (aug[where_pivot[r]] >> n) as u32)
            .collect(),
    )
}

impl Recoding {
    /// A permutation-table recoding. The table must be a bijection of the
    /// target language's cube.
    pub fn table(target: &Language, table: Vec<u32>) -> Result<Recoding> {
        let size = target.cube_size();
        if table.len() != size as usize {
            return Err(Error::InvalidRecoding(format!(
                "table has {} entries, cube has {size}",
                table.len()
            )));
        }
        let mut seen = vec![false; size as usize];
        for &w in &table {
            if w >= size || std::mem::replace(&mut seen[w as usize], true) {
                return Err(Error::InvalidRecoding(
                    "table is not a bijection of the cube".into(),
                ));
            }
        }
        Ok(Recoding {
            target: target.clone(),
            map: RecodingMap::Table(table),
        })
    }

    /// A GF(2)-affine recoding. `rows[r]` is the mask of source variables
    /// feeding target variable r; the matrix must be invertible.
    pub fn affine(target: &Language, rows: Vec<u32>, offset: u32) -> Result<Recoding> {
        let n = target.len();
        let full = target.full_set().mask();
        if rows.len() != n {
            return Err(Error::InvalidRecoding(format!(
                "matrix has {} rows for {n} variables",
                rows.len()
            )));
        }
        if rows.iter().any(|&r| r & !full != 0) || offset & !full != 0 {
            return Err(Error::InvalidRecoding(
                "matrix or offset uses bits outside the language".into(),
            ));
        }
        if !gf2_invertible(&rows) {
            return Err(Error::InvalidRecoding("matrix is singular".into()));
        }
        Ok(Recoding {
            target: target.clone(),
            map: RecodingMap::Affine { rows, offset },
        })
    }

    /// The identity table onto `target`.
    pub fn identity(target: &Language) -> Recoding {
        Recoding {
            target: target.clone(),
            map: RecodingMap::Table((0..target.cube_size()).collect()),
        }
    }

    pub fn target(&self) -> &Language {
        &self.target
    }

    pub fn map(&self) -> &RecodingMap {
        &self.map
    }

    /// Image of one source word.
    pub fn apply_word(&self, word: u32) -> u32 {
        match &self.map {
            RecodingMap::Table(t) => t[word as usize],
            RecodingMap::Affine { rows, offset } => mat_vec(rows, word) ^ offset,
        }
    }

    /// The inverse bijection, emitting onto `target` (normally the
    /// language the forward recoding was applied to).
    pub fn inverse(&self, target: &Language) -> Result<Recoding> {
        if target.len() != self.target.len() {
            return Err(Error::LanguageMismatch(format!(
                "inverse target has {} variables, recoding has {}",
                target.len(),
                self.target.len()
            )));
        }
        match &self.map {
            RecodingMap::Table(t) => {
                let mut inv = vec![0u32; t.len()];
                for (w, &img) in t.iter().enumerate() {
                    inv[img as usize] = w as u32;
                }
                Recoding::table(target, inv)
            }
            RecodingMap::Affine { rows, offset } => {
                let inv = gf2_inverse(rows).expect("construction checked invertibility");
                let inv_offset = mat_vec(&inv, *offset);
                Recoding::affine(target, inv, inv_offset)
            }
        }
    }

    /// Parses either JSON form:
    /// `{"matrix":[[1,0],[1,1]],"offset":[0,1],"target_vars":["p","q'"]}` or
    /// `{"permutation":[0,1,3,2],"target_vars":["p'","q'"]}`.
    pub fn from_json(json: &str) -> Result<Recoding> {
        let raw: RecodingJson =
            serde_json::from_str(json).map_err(|e| Error::Format(format!("recoding JSON: {e}")))?;
        let target = Language::new(raw.target_vars)?;
        let n = target.len();
        match (raw.matrix, raw.offset, raw.permutation) {
            (Some(matrix), offset, None) => {
                let rows = matrix
                    .iter()
                    .map(|row| {
                        if row.len() != n {
                            return Err(Error::Format(format!(
                                "matrix row has {} entries for {n} variables",
                                row.len()
                            )));
                        }
                        Ok(row
                            .iter()
                            .enumerate()
                            .fold(0u32, |acc, (j, &v)| acc | (u32::from(v & 1) << (n - 1 - j))))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let offset = match offset {
                    None => 0,
                    Some(bits) => {
                        if bits.len() != n {
                            return Err(Error::Format(format!(
                                "offset has {} entries for {n} variables",
                                bits.len()
                            )));
                        }
                        bits.iter()
                            .enumerate()
                            .fold(0u32, |acc, (r, &v)| acc | (u32::from(v & 1) << (n - 1 - r)))
                    }
                };
                Recoding::affine(&target, rows, offset)
            }
            (None, None, Some(permutation)) => Recoding::table(&target, permutation),
            _ => Err(Error::Format(
                "recoding JSON needs either `matrix` (+ optional `offset`) or `permutation`".into(),
            )),
        }
    }

    pub fn to_json(&self) -> String {
        let n = self.target.len();
        let raw = match &self.map {
            RecodingMap::Table(t) => RecodingJson {
                matrix: None,
                offset: None,
                permutation: Some(t.clone()),
                target_vars: self.target.names().to_vec(),
            },
            RecodingMap::Affine { rows, offset } => RecodingJson {
                matrix: Some(
                    rows.iter()
                        .map(|&row| (0..n).map(|j| ((row >> (n - 1 - j)) & 1) as u8).collect())
                        .collect(),
                ),
                offset: Some((0..n).map(|r| ((offset >> (n - 1 - r)) & 1) as u8).collect()),
                permutation: None,
                target_vars: self.target.names().to_vec(),
            },
        };
        serde_json::to_string(&raw).expect("recoding serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
struct RecodingJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<u8>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    offset: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    permutation: Option<Vec<u32>>,
    target_vars: Vec<String>,
}

/// Image of `x` under `r`, over the target language. The source language
/// only has to match in size.
pub fn apply_recoding(x: &ModelSet, r: &Recoding) -> Result<ModelSet> {
    if x.lang().len() != r.target.len() {
        return Err(Error::LanguageMismatch(format!(
            "recoding is over {} variables, model set over {}",
            r.target.len(),
            x.lang().len()
        )));
    }
    let words = x.words().iter().map(|&w| r.apply_word(w)).collect();
    ModelSet::new(&r.target, words)
}

/// Search mode: every bijection of the cube, or only GF(2)-affine ones.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SearchMode {
    Full,
    Affine,
}

/// Largest language the full-table search will take on (8! tables).
pub const MAX_FULL_SEARCH_VARS: usize = 3;
/// Largest language the affine search will take on (2^25 matrices).
pub const MAX_AFFINE_SEARCH_VARS: usize = 5;

/// True iff some two-block partition factorizes the words. A factorization
/// with ≥ 2 blocks exists iff a bipartition works, since merging all but
/// one block of a factorization leaves a factorizing bipartition.
fn splittable(words: &[u32], n: usize) -> bool {
    let full: u32 = ((1u64 << n) - 1) as u32;
    let count = |mask: u32| {
        let mut seen: Vec<u32> = words.iter().map(|&w| w & mask).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len() as u64
    };
    // Fixing the top variable in A visits each {A, Ā} once.
    let top = 1 << (n - 1);
    (1u32..full)
        .filter(|a| a & top != 0)
        .any(|a| count(a) * count(full & !a) == words.len() as u64)
}

fn advance_permutation(a: &mut [u32]) -> bool {
    let Some(i) = (0..a.len().saturating_sub(1)).rev().find(|&i| a[i] < a[i + 1]) else {
        return false;
    };
    let j = (i + 1..a.len()).rev().find(|&j| a[j] > a[i]).expect("a[i+1] > a[i]");
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}

fn primed_language(lang: &Language) -> Language {
    Language::new(lang.names().iter().map(|s| format!("{s}'")))
        .expect("priming keeps names distinct and valid")
}

/// Finds a recoding under which `x` factorizes into at least two blocks,
/// or `None` once the mode's whole search space is exhausted. Target
/// variables are the source names primed. The witness is the first success
/// in lexicographic order: permutation tables compared entrywise in the
/// full mode, matrices compared row-major in the affine mode.
pub fn search_factorizing_recoding(x: &ModelSet, mode: SearchMode) -> Result<Option<Recoding>> {
    if x.is_empty() {
        return Err(Error::EmptyModelSet);
    }
    let n = x.lang().len();
    let target = primed_language(x.lang());
    match mode {
        SearchMode::Full => {
            if n > MAX_FULL_SEARCH_VARS {
                return Err(Error::LanguageTooLarge {
                    n,
                    max: MAX_FULL_SEARCH_VARS,
                });
            }
            let mut table: Vec<u32> = (0..x.lang().cube_size()).collect();
            loop {
                let image: Vec<u32> = x.words().iter().map(|&w| table[w as usize]).collect();
                if splittable(&image, n) {
                    return Ok(Some(Recoding::table(&target, table)?));
                }
                if !advance_permutation(&mut table) {
                    return Ok(None);
                }
            }
        }
        SearchMode::Affine => {
            if n > MAX_AFFINE_SEARCH_VARS {
                return Err(Error::LanguageTooLarge {
                    n,
                    max: MAX_AFFINE_SEARCH_VARS,
                });
            }
            // Only offset 0 is tried: translating every image word by a
            // constant flips each variable's value pointwise, which is a
            // bijection on every block projection, so projection sizes and
            // hence factorizability never depend on the offset. Offset 0
            // also sorts first, so the witness matches a full
            // matrix-major, offset-minor enumeration.
            let row_mask = (1u64 << n) - 1;
            let hit = par::find_map_first_range(0..1u64 << (n * n), |encoded| {
                let rows: Vec<u32> =
                    (0..n).map(|r| ((encoded >> ((n - 1 - r) * n)) & row_mask) as u32).collect();
                if !gf2_invertible(&rows) {
                    return None;
                }
                let image: Vec<u32> = x.words().iter().map(|&w| mat_vec(&rows, w)).collect();
                splittable(&image, n).then_some(rows)
            });
            match hit {
                Some(rows) => Ok(Some(Recoding::affine(&target, rows, 0)?)),
                None => Ok(None),
            }
        }
    }
}
