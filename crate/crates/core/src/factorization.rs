//! Variable partitions and the factorization decision procedure.
//!
//! A partition 𝒜 of the variables factorizes a model set X when X equals
//! the glue of its own projections onto the blocks. Factorizing partitions
//! are closed under coarsening and under common refinement, so over a
//! finite language a unique finest one exists; [`finest_factorization`]
//! computes it directly and [`brute_force_finest`] recomputes it by
//! exhausting every partition, as an independent oracle for small
//! languages.
//!
//! The membership test itself is a cardinality check: X is always a subset
//! of the glue of its projections, and the glue has exactly the product of
//! the projection sizes as cardinality, so X equals the glue iff
//! `|X| = Π_i |X⌈A_i|`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lang::{Language, VarSet};
use crate::model::ModelSet;
use crate::par;

/// An ordered partition of a language's variables into disjoint, non-empty
/// blocks. Blocks are kept sorted by their lowest variable index, so equal
/// partitions compare equal structurally.
#[derive(Clone, PartialEq, Eq)]
pub struct Partition {
    lang: Language,
    blocks: Vec<VarSet>,
}

impl Partition {
    pub fn new(lang: &Language, mut blocks: Vec<VarSet>) -> Result<Partition> {
        let mut seen = VarSet::EMPTY;
        for &b in &blocks {
            if b.is_empty() {
                return Err(Error::NotAPartition("empty block".into()));
            }
            if !seen.is_disjoint_from(b) {
                return Err(Error::NotAPartition("overlapping blocks".into()));
            }
            seen = seen.union(b);
        }
        if seen != lang.full_set() {
            return Err(Error::NotAPartition(
                "blocks do not cover the language".into(),
            ));
        }
        // Lowest variable index first; variable 0 owns the highest bit, so
        // this is descending order of the leading mask bit.
        blocks.sort_unstable_by_key(|b| std::cmp::Reverse(b.mask()));
        Ok(Partition {
            lang: lang.clone(),
            blocks,
        })
    }

    /// Builds a partition from blocks of variable names.
    pub fn from_names<S: AsRef<str>>(
        lang: &Language,
        blocks: impl IntoIterator<Item = impl IntoIterator<Item = S>>,
    ) -> Result<Partition> {
        let blocks = blocks
            .into_iter()
            .map(|names| lang.var_set(names))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(lang, blocks)
    }

    /// The finest partition: one block per variable.
    pub fn singletons(lang: &Language) -> Partition {
        let blocks = (0..lang.len())
            .map(|i| VarSet::from_mask(lang.bit(i)))
            .collect();
        Partition {
            lang: lang.clone(),
            blocks,
        }
    }

    /// The coarsest partition: one block holding every variable.
    pub fn whole(lang: &Language) -> Partition {
        Partition {
            lang: lang.clone(),
            blocks: vec![lang.full_set()],
        }
    }

    pub fn lang(&self) -> &Language {
        &self.lang
    }

    pub fn blocks(&self) -> &[VarSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Blocks as lists of variable names, in block order.
    pub fn block_names(&self) -> Vec<Vec<String>> {
        self.blocks
            .iter()
            .map(|&b| self.lang.names_of(b).into_iter().map(String::from).collect())
            .collect()
    }

    /// Parses the JSON shape `{"blocks": [["p","q"],["r"]]}` against a
    /// known language.
    pub fn from_json(lang: &Language, json: &str) -> Result<Partition> {
        let raw: PartitionJson =
            serde_json::from_str(json).map_err(|e| Error::Format(format!("partition JSON: {e}")))?;
        Partition::from_names(lang, raw.blocks)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PartitionJson {
            blocks: self.block_names(),
        })
        .expect("partition serialization cannot fail")
    }
}

impl std::fmt::Debug for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rendered: Vec<String> = self
            .block_names()
            .iter()
            .map(|b| format!("{{{}}}", b.join(",")))
            .collect();
        write!(f, "{{{}}}", rendered.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct PartitionJson {
    blocks: Vec<Vec<String>>,
}

/// True iff `a`'s every block is contained in some block of `b`.
pub fn is_refinement(a: &Partition, b: &Partition) -> Result<bool> {
    a.lang().check_same(b.lang())?;
    Ok(a.blocks()
        .iter()
        .all(|&ab| b.blocks().iter().any(|&bb| ab.is_subset_of(bb))))
}

/// 𝒜⌈U′: the non-empty intersections of `p`'s blocks with `domain`, as a
/// partition of the sub-language on `domain`.
pub fn restrict_partition(p: &Partition, domain: VarSet) -> Result<Partition> {
    if domain.is_empty() {
        return Err(Error::NotAPartition("restriction to no variables".into()));
    }
    let sub = p.lang().restrict(domain)?;
    let positions: Vec<usize> = p.lang().indices_of(domain).collect();
    let blocks = p
        .blocks()
        .iter()
        .filter_map(|&b| {
            let cut = b.intersect(domain);
            if cut.is_empty() {
                return None;
            }
            let mut mask = 0u32;
            for (k, &i) in positions.iter().enumerate() {
                if cut.mask() & p.lang().bit(i) != 0 {
                    mask |= sub.bit(k);
                }
            }
            Some(VarSet::from_mask(mask))
        })
        .collect();
    Partition::new(&sub, blocks)
}

/// The partition whose blocks are all non-empty intersections of one block
/// from each input.
pub fn common_refinement(ps: &[Partition]) -> Result<Partition> {
    let first = ps
        .first()
        .ok_or_else(|| Error::NotAPartition("no partitions to refine".into()))?;
    let lang = first.lang().clone();
    let mut blocks: Vec<VarSet> = first.blocks().to_vec();
    for p in &ps[1..] {
        lang.check_same(p.lang())?;
        let mut next = Vec::new();
        for &a in &blocks {
            for &b in p.blocks() {
                let cut = a.intersect(b);
                if !cut.is_empty() {
                    next.push(cut);
                }
            }
        }
        blocks = next;
    }
    Partition::new(&lang, blocks)
}

/// Number of distinct restrictions of `x`'s members to `domain`.
fn projection_size(x: &ModelSet, domain: VarSet) -> u64 {
    x.project(domain).len() as u64
}

/// True iff X = glue(X's projections under `p`), decided by the cardinality
/// criterion `|X| = Π_i |X⌈A_i|`.
pub fn is_factorization(x: &ModelSet, p: &Partition) -> Result<bool> {
    if x.is_empty() {
        return Err(Error::EmptyModelSet);
    }
    x.lang().check_same(p.lang())?;
    // Π|X⌈A_i| ≤ 2^n because each factor is at most 2^|A_i|: no overflow.
    let product: u64 = p
        .blocks()
        .iter()
        .map(|&b| projection_size(x, b))
        .product();
    Ok(product == x.len() as u64)
}

/// Bipartition test used by the atom search: does {A, U∖A} factorize `x`?
/// `complement` may be empty, meaning A is the whole language.
fn splits(x: &ModelSet, a: VarSet, complement: VarSet) -> bool {
    if complement.is_empty() {
        return true;
    }
    projection_size(x, a) * projection_size(x, complement) == x.len() as u64
}

/// Union-find over variable indices, for the pre-merge pass.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, i: usize, j: usize) {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri != rj {
            self.parent[ri.max(rj)] = ri.min(rj);
        }
    }
}

/// Most blocks the atom search will take on; beyond this the subset
/// enumeration (2^blocks candidates) is ruled out rather than attempted.
pub const MAX_SEARCH_BLOCKS: usize = 20;

/// The unique finest factorizing partition of `x`.
///
/// Two phases. First a pre-merge pass: variables i, j whose pair projection
/// is smaller than the product of their single projections can never end up
/// in different blocks of a factorization (restricting a factorization to
/// {i,j} factorizes the pair projection), so they are union-found into one
/// block. Second, atom extraction: the minimal factor containing the lowest
/// unassigned block is found by scanning candidate unions of remaining
/// blocks in increasing block-count order and testing the bipartition
/// {candidate, rest} against x. Factors are closed under intersection, so
/// the first hit at the smallest block count is that unique minimal factor;
/// it is removed and the scan repeats on the remainder.
pub fn finest_factorization(x: &ModelSet) -> Result<Partition> {
    if x.is_empty() {
        return Err(Error::EmptyModelSet);
    }
    let lang = x.lang().clone();
    let n = lang.len();

    // Pre-merge: pairwise dependence forces cohabitation.
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let single_sizes: Vec<u64> = (0..n)
        .map(|i| projection_size(x, VarSet::from_mask(lang.bit(i))))
        .collect();
    let dependent = par::map_slice(&pairs, |&(i, j)| {
        let pair = VarSet::from_mask(lang.bit(i) | lang.bit(j));
        projection_size(x, pair) != single_sizes[i] * single_sizes[j]
    });
    let mut uf = UnionFind::new(n);
    for (&(i, j), &dep) in pairs.iter().zip(&dependent) {
        if dep {
            uf.union(i, j);
        }
    }

    // Collect pre-merge blocks, ordered by lowest member.
    let mut block_of_root = vec![VarSet::EMPTY; n];
    for i in 0..n {
        let r = uf.find(i);
        block_of_root[r] = block_of_root[r].union(VarSet::from_mask(lang.bit(i)));
    }
    let mut remaining: Vec<VarSet> = (0..n)
        .filter(|&i| !block_of_root[i].is_empty())
        .map(|i| block_of_root[i])
        .collect();

    if remaining.len() > MAX_SEARCH_BLOCKS {
        return Err(Error::TooManyBlocks {
            blocks: remaining.len(),
            max: MAX_SEARCH_BLOCKS,
        });
    }

    // Atom extraction.
    let mut atoms: Vec<VarSet> = Vec::new();
    while !remaining.is_empty() {
        let base = remaining[0];
        let others = &remaining[1..];

        // Candidate unions of `base` with subsets of the other remaining
        // blocks, ordered by block count, then by variable indices
        // lexicographically (equal to descending mask order within one
        // count).
        let mut candidates: Vec<(u32, VarSet)> = (0..1u32 << others.len())
            .map(|chosen| {
                let mut union = base;
                for (k, &b) in others.iter().enumerate() {
                    if chosen & (1 << k) != 0 {
                        union = union.union(b);
                    }
                }
                (chosen.count_ones(), union)
            })
            .collect();
        candidates.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(b.1.mask().cmp(&a.1.mask())));

        let atom = par::find_map_first_slice(&candidates, |&(_, a)| {
            let complement = lang.full_set().difference(a);
            splits(x, a, complement).then_some(a)
        })
        .expect("the union of all remaining blocks always splits");

        atoms.push(atom);
        remaining.retain(|&b| !b.is_subset_of(atom));
    }

    Partition::new(&lang, atoms)
}

/// Enumerates every partition of `0..n` as restricted growth strings and
/// yields each as a block list.
fn all_partitions(lang: &Language) -> Vec<Vec<VarSet>> {
    let n = lang.len();
    let mut out = Vec::new();
    // rgs[i] = block index of variable i; rgs[i] ≤ max(rgs[..i]) + 1.
    let mut rgs = vec![0usize; n];
    loop {
        let block_count = rgs.iter().copied().max().unwrap_or(0) + 1;
        let mut blocks = vec![VarSet::EMPTY; block_count];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b] = blocks[b].union(VarSet::from_mask(lang.bit(i)));
        }
        out.push(blocks);

        // Advance to the next restricted growth string.
        let mut i = n;
        loop {
            if i == 1 {
                return out;
            }
            i -= 1;
            let cap = rgs[..i].iter().copied().max().unwrap_or(0) + 1;
            if rgs[i] < cap {
                rgs[i] += 1;
                for v in rgs[i + 1..].iter_mut() {
                    *v = 0;
                }
                break;
            }
        }
    }
}

/// Maximum language size accepted by [`brute_force_finest`]; Bell(6) = 203
/// partitions keeps the exhaustive sweep instant.
pub const MAX_BRUTE_FORCE_VARS: usize = 6;

/// Finest factorization by exhaustion: test every partition of the
/// language and take the common refinement of all that factorize. Slow but
/// independent of the search in [`finest_factorization`]; used as its
/// oracle.
pub fn brute_force_finest(x: &ModelSet) -> Result<Partition> {
    if x.is_empty() {
        return Err(Error::EmptyModelSet);
    }
    let lang = x.lang();
    if lang.len() > MAX_BRUTE_FORCE_VARS {
        return Err(Error::LanguageTooLarge {
            n: lang.len(),
            max: MAX_BRUTE_FORCE_VARS,
        });
    }
    let factorizing: Vec<Partition> = all_partitions(lang)
        .into_iter()
        .map(|blocks| Partition::new(lang, blocks).expect("enumerated blocks partition the language"))
        .filter(|p| is_factorization(x, p).expect("x checked non-empty"))
        .collect();
    // The one-block partition always factorizes, so the list is non-empty.
    common_refinement(&factorizing)
}
