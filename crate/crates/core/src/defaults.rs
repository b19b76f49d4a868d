//! Defaults with specificity, compiled into a preference relation over
//! models.
//!
//! A default `φ |~ ψ` reads "φ normally implies ψ". For every pair of
//! models satisfying some antecedents, the most specific defaults that
//! separate the pair (both models satisfy φ, exactly one satisfies ψ) each
//! place the ψ-satisfier strictly below the other. Contradicting defaults
//! of equal specificity are allowed and produce 2-cycles; minimality is
//! strict, so the members of such a cycle exclude each other and a query's
//! minimal-model set can come out empty.
//!
//! The converse direction reads a default `Th{m,m′} |~ Th{m}` off every
//! edge m ≺ m′; compiling those defaults reproduces the edge set exactly,
//! because {m,m′} is the most specific antecedent containing both models.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::lang::Language;
use crate::logic::{compile, formula_of_models, models_of, Compiled};
use crate::model::{Assignment, ModelSet};
use crate::par;
use crate::parse::parse_formula;

/// A defeasible rule `antecedent |~ consequent`.
#[derive(Clone, Debug)]
pub struct Default {
    pub antecedent: Formula,
    pub consequent: Formula,
    pub label: Option<String>,
}

impl Default {
    pub fn new(antecedent: Formula, consequent: Formula) -> Default {
        Default {
            antecedent,
            consequent,
            label: None,
        }
    }

    pub fn labeled(antecedent: Formula, consequent: Formula, label: impl Into<String>) -> Default {
        Default {
            antecedent,
            consequent,
            label: Some(label.into()),
        }
    }
}

impl fmt::Display for Default {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |~ {}", self.antecedent, self.consequent)
    }
}

/// Parses the defaults file format: one `ANTECEDENT |~ CONSEQUENT` per
/// line, `#` comments, blank lines ignored. Rules are labeled d1, d2, … in
/// file order.
pub fn parse_defaults_file(text: &str) -> Result<Vec<Default>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (ant, cons) = line.split_once("|~").ok_or_else(|| {
            Error::Format(format!("expected `ANTECEDENT |~ CONSEQUENT`, got `{line}`"))
        })?;
        out.push(Default::labeled(
            parse_formula(ant)?,
            parse_formula(cons)?,
            format!("d{}", out.len() + 1),
        ));
    }
    Ok(out)
}

/// The language spanned by a default list: variables in first-occurrence
/// order, antecedent before consequent, rule by rule.
pub fn default_language(ds: &[Default]) -> Result<Language> {
    let mut names: Vec<&str> = Vec::new();
    for d in ds {
        for f in [&d.antecedent, &d.consequent] {
            for v in f.vars_in_order() {
                if !names.contains(&v) {
                    names.push(v);
                }
            }
        }
    }
    Language::new(names)
}

/// True iff `d1`'s antecedent classically entails `d2`'s.
pub fn more_specific(d1: &Default, d2: &Default, lang: &Language) -> Result<bool> {
    crate::logic::entails(&d1.antecedent, &d2.antecedent, lang)
}

/// True iff both models satisfy the antecedent and exactly one satisfies
/// the consequent.
pub fn separates(d: &Default, m: &Assignment, m2: &Assignment) -> Result<bool> {
    m.lang().check_same(m2.lang())?;
    let ant = compile(&d.antecedent, m.lang())?;
    let cons = compile(&d.consequent, m.lang())?;
    Ok(ant.eval(m.word())
        && ant.eval(m2.word())
        && (cons.eval(m.word()) != cons.eval(m2.word())))
}

/// A strict "more normal than" relation over the assignments of one
/// language: edge m ≺ m′ means m is preferred. Each edge carries the labels
/// of the defaults that produced it. Self-loops are rejected; 2-cycles are
/// legal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PreferenceGraph {
    lang: Language,
    edges: BTreeMap<(u32, u32), BTreeSet<String>>,
}

impl PreferenceGraph {
    pub fn new(lang: &Language) -> PreferenceGraph {
        PreferenceGraph {
            lang: lang.clone(),
            edges: BTreeMap::new(),
        }
    }

    pub fn lang(&self) -> &Language {
        &self.lang
    }

    /// Adds m ≺ m′, merging provenance into any existing edge.
    pub fn add_edge(
        &mut self,
        below: u32,
        above: u32,
        provenance: impl IntoIterator<Item = impl Into<String>>,
    ) -> Result<()> {
        if below == above {
            return Err(Error::Format("preference edges may not be self-loops".into()));
        }
        let limit = self.lang.cube_size();
        if below >= limit || above >= limit {
            return Err(Error::Format("edge endpoint outside the language's cube".into()));
        }
        self.edges
            .entry((below, above))
            .or_default()
            .extend(provenance.into_iter().map(Into::into));
        Ok(())
    }

    pub fn contains_edge(&self, below: u32, above: u32) -> bool {
        self.edges.contains_key(&(below, above))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edges in ascending (below, above) order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, &BTreeSet<String>)> {
        self.edges.iter().map(|(&(b, a), p)| (b, a, p))
    }

    /// The edge pairs alone, for set comparison.
    pub fn edge_set(&self) -> BTreeSet<(u32, u32)> {
        self.edges.keys().copied().collect()
    }

    /// Strongly connected components with more than one member, each
    /// sorted, ordered by smallest member. Cycles do not change any
    /// semantics here, but callers may want to surface them.
    pub fn cyclic_components(&self) -> Vec<Vec<u32>> {
        let mut forward: HashMap<u32, Vec<u32>> = HashMap::new();
        let mut backward: HashMap<u32, Vec<u32>> = HashMap::new();
        let mut nodes: BTreeSet<u32> = BTreeSet::new();
        for &(b, a) in self.edges.keys() {
            forward.entry(b).or_default().push(a);
            backward.entry(a).or_default().push(b);
            nodes.insert(b);
            nodes.insert(a);
        }

        // Kosaraju: order by forward finish time, then sweep the reverse
        // graph. Iterative to keep the stack flat.
        let mut finished: Vec<u32> = Vec::new();
        let mut seen: HashSet<u32> = HashSet::new();
        for &start in &nodes {
            if seen.contains(&start) {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            seen.insert(start);
            while let Some(&mut (node, ref mut next)) = stack.last_mut() {
                let succs = forward.get(&node).map(Vec::as_slice).unwrap_or(&[]);
                if *next < succs.len() {
                    let child = succs[*next];
                    *next += 1;
                    if seen.insert(child) {
                        stack.push((child, 0));
                    }
                } else {
                    finished.push(node);
                    stack.pop();
                }
            }
        }
        let mut assigned: HashSet<u32> = HashSet::new();
        let mut components = Vec::new();
        for &start in finished.iter().rev() {
            if assigned.contains(&start) {
                continue;
            }
            let mut component = vec![start];
            assigned.insert(start);
            let mut stack = vec![start];
            while let Some(node) = stack.pop() {
                for &prev in backward.get(&node).map(Vec::as_slice).unwrap_or(&[]) {
                    if assigned.insert(prev) {
                        component.push(prev);
                        stack.push(prev);
                    }
                }
            }
            if component.len() > 1 {
                component.sort_unstable();
                components.push(component);
            }
        }
        components.sort_unstable();
        components
    }

    /// Parses the graph JSON shape
    /// `{"vars":["p","q"],"edges":[{"from":"10","to":"11","defaults":["d1"]}]}`.
    pub fn from_json(json: &str) -> Result<PreferenceGraph> {
        let raw: GraphJson =
            serde_json::from_str(json).map_err(|e| Error::Format(format!("graph JSON: {e}")))?;
        let lang = Language::new(raw.vars)?;
        let mut g = PreferenceGraph::new(&lang);
        for e in raw.edges {
            let below = lang.parse_bitstring(&e.from)?;
            let above = lang.parse_bitstring(&e.to)?;
            g.add_edge(below, above, e.defaults)?;
        }
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        let edges = self
            .edges
            .iter()
            .map(|(&(b, a), p)| EdgeJson {
                from: self.lang.bitstring(b),
                to: self.lang.bitstring(a),
                defaults: p.iter().cloned().collect(),
            })
            .collect();
        serde_json::to_string(&GraphJson {
            vars: self.lang.names().to_vec(),
            edges,
        })
        .expect("graph serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vars: Vec<String>,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    from: String,
    to: String,
    #[serde(default)]
    defaults: Vec<String>,
}

/// Compiles defaults into the preference relation: for every unordered
/// model pair, the maximally specific separating defaults each orient an
/// edge toward the model satisfying their consequent.
pub fn build_preference(ds: &[Default], lang: &Language) -> Result<PreferenceGraph> {
    struct Rule {
        ant: Compiled,
        cons: Compiled,
        label: String,
    }
    let rules: Vec<Rule> = ds
        .iter()
        .enumerate()
        .map(|(i, d)| {
            Ok(Rule {
                ant: compile(&d.antecedent, lang)?,
                cons: compile(&d.consequent, lang)?,
                label: d.label.clone().unwrap_or_else(|| format!("d{}", i + 1)),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    // antecedent ⊢ antecedent, strictly, decided once per rule pair.
    let ant_models: Vec<Vec<bool>> = rules
        .iter()
        .map(|r| (0..lang.cube_size()).map(|w| r.ant.eval(w)).collect())
        .collect();
    let entails_ant = |i: usize, j: usize| {
        ant_models[i]
            .iter()
            .zip(&ant_models[j])
            .all(|(&a, &b)| !a || b)
    };
    let k = rules.len();
    let strictly_below: Vec<Vec<bool>> = (0..k)
        .map(|i| (0..k).map(|j| entails_ant(i, j) && !entails_ant(j, i)).collect())
        .collect();

    let words: Vec<u32> = (0..lang.cube_size()).collect();
    let chunks: Vec<Vec<(u32, u32, usize)>> = par::map_slice(&words, |&w1| {
        let mut edges = Vec::new();
        let mut separating: Vec<usize> = Vec::new();
        for w2 in w1 + 1..lang.cube_size() {
            separating.clear();
            for (i, r) in rules.iter().enumerate() {
                if r.ant.eval(w1) && r.ant.eval(w2) && (r.cons.eval(w1) != r.cons.eval(w2)) {
                    separating.push(i);
                }
            }
            for &i in &separating {
                if separating.iter().any(|&j| strictly_below[j][i]) {
                    continue;
                }
                let (below, above) = if rules[i].cons.eval(w1) {
                    (w1, w2)
                } else {
                    (w2, w1)
                };
                edges.push((below, above, i));
            }
        }
        edges
    });

    let mut g = PreferenceGraph::new(lang);
    for (below, above, i) in chunks.into_iter().flatten() {
        g.add_edge(below, above, [rules[i].label.clone()])?;
    }
    Ok(g)
}

/// μ(X): the members of X with no other member of X strictly below them.
pub fn minimal_models(g: &PreferenceGraph, x: &ModelSet) -> Result<ModelSet> {
    g.lang().check_same(x.lang())?;
    let words = x
        .words()
        .iter()
        .copied()
        .filter(|&m| !x.words().iter().any(|&below| g.contains_edge(below, m)))
        .collect();
    ModelSet::new(x.lang(), words)
}

/// φ |~ ψ under the compiled preference: every ≺-minimal model of φ
/// satisfies ψ.
pub fn nm_consequence(
    ds: &[Default],
    phi: &Formula,
    psi: &Formula,
    lang: &Language,
) -> Result<bool> {
    let g = build_preference(ds, lang)?;
    let minimal = minimal_models(&g, &models_of(phi, lang)?)?;
    let psi_models = models_of(psi, lang)?;
    Ok(minimal.words().iter().all(|&w| psi_models.contains_word(w)))
}

/// One default per edge m ≺ m′: `Th{m,m′} |~ Th{m}`, labeled d1, d2, … in
/// edge order.
pub fn extract_defaults(g: &PreferenceGraph) -> Vec<Default> {
    g.edges()
        .enumerate()
        .map(|(i, (below, above, _))| {
            let pair = ModelSet::new(g.lang(), vec![below, above]).expect("edge endpoints in range");
            let winner = ModelSet::new(g.lang(), vec![below]).expect("edge endpoint in range");
            Default::labeled(
                formula_of_models(&pair),
                formula_of_models(&winner),
                format!("d{}", i + 1),
            )
        })
        .collect()
}

/// True iff recompiling the defaults extracted from `g` reproduces `g`'s
/// edge set exactly.
pub fn round_trip(g: &PreferenceGraph) -> Result<bool> {
    let rebuilt = build_preference(&extract_defaults(g), g.lang())?;
    Ok(rebuilt.edge_set() == g.edge_set())
}
