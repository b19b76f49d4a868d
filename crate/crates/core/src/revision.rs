//! Hamming distances over assignments and distance-minimizing revision.
//!
//! The distance between two assignments comes in two flavours: the set of
//! variables they disagree on (compared by inclusion, a partial order) and
//! the weighted count of that set (a number). Revising a model set T by a
//! constraint F keeps the members of F closest to T. For the counting
//! flavours "closest" is the global minimum; for the set flavour every
//! pairwise disagreement set competes, and the ⊆-minimal ones win.
//!
//! When one partition factorizes both T and F, revision can be done block
//! by block and glued: [`revise_componentwise`] is that operator, and it
//! agrees with direct revision for all three metrics.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::factorization::{is_factorization, Partition};
use crate::lang::{Language, VarSet};
use crate::model::{glue, Assignment, ModelSet, ProjectedSet};
use crate::par;

/// One positive integer weight per variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightProfile {
    lang: Language,
    weights: Vec<u64>,
}

impl WeightProfile {
    /// All weights 1; plain counting.
    pub fn unit(lang: &Language) -> WeightProfile {
        WeightProfile {
            lang: lang.clone(),
            weights: vec![1; lang.len()],
        }
    }

    /// Weights by variable name; unmentioned variables get weight 1.
    pub fn from_named<S: AsRef<str>>(
        lang: &Language,
        named: impl IntoIterator<Item = (S, u64)>,
    ) -> Result<WeightProfile> {
        let mut weights = vec![1u64; lang.len()];
        for (name, w) in named {
            let name = name.as_ref();
            let i = lang
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            if w == 0 {
                return Err(Error::InvalidWeight(name.to_string()));
            }
            weights[i] = w;
        }
        Ok(WeightProfile {
            lang: lang.clone(),
            weights,
        })
    }

    pub fn lang(&self) -> &Language {
        &self.lang
    }

    pub fn weight(&self, var_index: usize) -> u64 {
        self.weights[var_index]
    }

    /// The same weights over the sub-language of `domain`.
    pub fn restrict(&self, domain: VarSet) -> Result<WeightProfile> {
        let sub = self.lang.restrict(domain)?;
        let weights = self
            .lang
            .indices_of(domain)
            .map(|i| self.weights[i])
            .collect();
        Ok(WeightProfile { lang: sub, weights })
    }

    /// Weighted size of a disagreement set.
    fn sum_over(&self, set: VarSet) -> u64 {
        self.lang
            .indices_of(set)
            .map(|i| self.weights[i])
            .sum()
    }
}

/// d_s: the set of variables on which the two assignments disagree.
pub fn hamming_set(x: &Assignment, y: &Assignment) -> Result<VarSet> {
    x.lang().check_same(y.lang())?;
    Ok(VarSet::from_mask(x.word() ^ y.word()))
}

/// d_c: the total weight of the disagreement set. Unit weights give the
/// plain count.
pub fn hamming_count(x: &Assignment, y: &Assignment, w: &WeightProfile) -> Result<u64> {
    x.lang().check_same(y.lang())?;
    x.lang().check_same(w.lang())?;
    Ok(w.sum_over(VarSet::from_mask(x.word() ^ y.word())))
}

/// The distance flavour revision runs under.
#[derive(Clone, Debug)]
pub enum Metric {
    /// Number of disagreeing variables.
    Count,
    /// Weighted count of disagreeing variables.
    Weighted(WeightProfile),
    /// The disagreement set itself, under inclusion.
    Set,
}

impl Metric {
    /// The same metric on the sub-language of `domain`.
    pub fn restrict(&self, domain: VarSet) -> Result<Metric> {
        Ok(match self {
            Metric::Count => Metric::Count,
            Metric::Set => Metric::Set,
            Metric::Weighted(w) => Metric::Weighted(w.restrict(domain)?),
        })
    }
}

/// A distance under either flavour.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DistanceValue {
    Count(u64),
    Vars(VarSet),
}

/// The distance between two assignments under `metric`.
pub fn distance(metric: &Metric, x: &Assignment, y: &Assignment) -> Result<DistanceValue> {
    Ok(match metric {
        Metric::Count => DistanceValue::Count(hamming_count(x, y, &WeightProfile::unit(x.lang()))?),
        Metric::Weighted(w) => DistanceValue::Count(hamming_count(x, y, w)?),
        Metric::Set => DistanceValue::Vars(hamming_set(x, y)?),
    })
}

fn check_revision_inputs(t: &ModelSet, f: &ModelSet) -> Result<()> {
    if t.is_empty() || f.is_empty() {
        return Err(Error::EmptyModelSet);
    }
    t.lang().check_same(f.lang())
}

/// Counting revision: the members of `f` whose weighted distance to `t` is
/// globally minimal.
pub fn revise_count(t: &ModelSet, f: &ModelSet, w: &WeightProfile) -> Result<ModelSet> {
    check_revision_inputs(t, f)?;
    t.lang().check_same(w.lang())?;
    let nearest: Vec<u64> = par::map_slice(f.words(), |&tau| {
        t.words()
            .iter()
            .map(|&sigma| w.sum_over(VarSet::from_mask(sigma ^ tau)))
            .min()
            .expect("t is non-empty")
    });
    let best = *nearest.iter().min().expect("f is non-empty");
    let words = f
        .words()
        .iter()
        .zip(&nearest)
        .filter(|&(_, &d)| d == best)
        .map(|(&tau, _)| tau)
        .collect();
    ModelSet::new(t.lang(), words)
}

/// Set-variant revision: collect every disagreement set between `t` and
/// `f`, keep the ⊆-minimal ones, and return the members of `f` realizing
/// one of them.
pub fn revise_set(t: &ModelSet, f: &ModelSet) -> Result<ModelSet> {
    check_revision_inputs(t, f)?;
    // Distance sets per candidate, deduplicated globally.
    let per_tau: Vec<Vec<u32>> = par::map_slice(f.words(), |&tau| {
        let mut ds: Vec<u32> = t.words().iter().map(|&sigma| sigma ^ tau).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    });
    let mut all: Vec<u32> = per_tau.iter().flatten().copied().collect();
    all.sort_unstable();
    all.dedup();
    let minimal: Vec<u32> = all
        .iter()
        .copied()
        .filter(|&d| !all.iter().any(|&e| e != d && e & d == e))
        .collect();
    let words = f
        .words()
        .iter()
        .zip(&per_tau)
        .filter(|(_, ds)| ds.iter().any(|d| minimal.binary_search(d).is_ok()))
        .map(|(&tau, _)| tau)
        .collect();
    ModelSet::new(t.lang(), words)
}

/// Revision under any metric.
pub fn revise(t: &ModelSet, f: &ModelSet, metric: &Metric) -> Result<ModelSet> {
    match metric {
        Metric::Count => revise_count(t, f, &WeightProfile::unit(t.lang())),
        Metric::Weighted(w) => revise_count(t, f, w),
        Metric::Set => revise_set(t, f),
    }
}

/// Blockwise revision: project `t` and `f` onto each block of `p`, revise
/// the projections under the restricted metric, and glue the results. `p`
/// must factorize both sets; when it does, the result equals direct
/// revision under the same metric.
pub fn revise_componentwise(
    t: &ModelSet,
    f: &ModelSet,
    p: &Partition,
    metric: &Metric,
) -> Result<ModelSet> {
    check_revision_inputs(t, f)?;
    t.lang().check_same(p.lang())?;
    if let Metric::Weighted(w) = metric {
        t.lang().check_same(w.lang())?;
    }
    if !is_factorization(t, p)? || !is_factorization(f, p)? {
        return Err(Error::NotJointlyFactorizable);
    }
    let parts = p
        .blocks()
        .iter()
        .map(|&block| {
            let t_sub = t.project(block).to_model_set()?;
            let f_sub = f.project(block).to_model_set()?;
            let revised = revise(&t_sub, &f_sub, &metric.restrict(block)?)?;
            ProjectedSet::from_model_set(t.lang(), block, &revised)
        })
        .collect::<Result<Vec<_>>>()?;
    glue(&parts)
}

#[derive(Deserialize)]
struct MetricConfigJson {
    metric: String,
    #[serde(default)]
    weights: Option<BTreeMap<String, u64>>,
}

/// Parses the metric configuration JSON
/// `{"metric":"count"|"set"|"weighted","weights":{"p":1,...}}` against a
/// known language. Weights are only accepted for the weighted metric and
/// default to 1 per variable when omitted.
pub fn parse_metric_config(lang: &Language, json: &str) -> Result<Metric> {
    let raw: MetricConfigJson =
        serde_json::from_str(json).map_err(|e| Error::Format(format!("metric JSON: {e}")))?;
    match raw.metric.as_str() {
        "count" | "set" => {
            if raw.weights.is_some() {
                return Err(Error::Format(format!(
                    "weights only apply to the weighted metric, not `{}`",
                    raw.metric
                )));
            }
            Ok(if raw.metric == "count" {
                Metric::Count
            } else {
                Metric::Set
            })
        }
        "weighted" => {
            let named = raw.weights.unwrap_or_default();
            Ok(Metric::Weighted(WeightProfile::from_named(lang, named)?))
        }
        other => Err(Error::Format(format!(
            "unknown metric `{other}`; expected count, set, or weighted"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lang(names: &[&str]) -> Language {
        Language::new(names.iter().copied()).unwrap()
    }

    fn ms(l: &Language, bits: &[&str]) -> ModelSet {
        ModelSet::from_bitstrings(l, bits.iter().copied()).unwrap()
    }

    fn asg(l: &Language, bits: &str) -> Assignment {
        Assignment::from_bitstring(l, bits).unwrap()
    }

    #[test]
    fn hamming_set_examples() {
        let l = lang(&["a", "b", "c"]);
        let x = asg(&l, "101");
        let y = asg(&l, "110");
        assert_eq!(
            hamming_set(&x, &y).unwrap(),
            l.var_set(["b", "c"]).unwrap()
        );
        assert_eq!(hamming_set(&x, &x).unwrap(), VarSet::EMPTY);
        assert_eq!(
            hamming_set(&asg(&l, "000"), &asg(&l, "111")).unwrap(),
            l.full_set()
        );
    }

    #[test]
    fn hamming_count_examples() {
        let l = lang(&["a", "b", "c"]);
        let unit = WeightProfile::unit(&l);
        assert_eq!(
            hamming_count(&asg(&l, "101"), &asg(&l, "110"), &unit).unwrap(),
            2
        );
        assert_eq!(
            hamming_count(&asg(&l, "101"), &asg(&l, "101"), &unit).unwrap(),
            0
        );

        let l2 = lang(&["p", "q"]);
        let w = WeightProfile::from_named(&l2, [("p", 1), ("q", 3)]).unwrap();
        assert_eq!(hamming_count(&asg(&l2, "11"), &asg(&l2, "01"), &w).unwrap(), 1);
        assert_eq!(hamming_count(&asg(&l2, "11"), &asg(&l2, "10"), &w).unwrap(), 3);
    }

    #[test]
    fn weights_must_be_positive() {
        let l = lang(&["p", "q"]);
        assert_eq!(
            WeightProfile::from_named(&l, [("q", 0)]).unwrap_err(),
            Error::InvalidWeight("q".into())
        );
        assert_eq!(
            WeightProfile::from_named(&l, [("z", 2)]).unwrap_err(),
            Error::UnknownVariable("z".into())
        );
    }

    #[test]
    fn revise_count_examples() {
        let l = lang(&["p", "q"]);
        let t = ms(&l, &["11"]);
        let f = ms(&l, &["00", "01", "10"]);
        let unit = WeightProfile::unit(&l);
        assert_eq!(revise_count(&t, &f, &unit).unwrap(), ms(&l, &["01", "10"]));

        let w = WeightProfile::from_named(&l, [("p", 1), ("q", 3)]).unwrap();
        assert_eq!(revise_count(&t, &f, &w).unwrap(), ms(&l, &["01"]));

        // Overlap means distance zero, so revision is intersection.
        let t2 = ms(&l, &["01", "11"]);
        let f2 = ms(&l, &["01", "10"]);
        assert_eq!(revise_count(&t2, &f2, &unit).unwrap(), ms(&l, &["01"]));

        assert_eq!(
            revise_count(&ModelSet::empty(&l), &f, &unit).unwrap_err(),
            Error::EmptyModelSet
        );
    }

    #[test]
    fn revise_set_examples() {
        let l = lang(&["p", "q"]);
        let t = ms(&l, &["11"]);
        let f = ms(&l, &["00", "01", "10"]);
        assert_eq!(revise_set(&t, &f).unwrap(), ms(&l, &["01", "10"]));

        let t2 = ms(&l, &["01", "11"]);
        let f2 = ms(&l, &["01", "10"]);
        assert_eq!(revise_set(&t2, &f2).unwrap(), ms(&l, &["01"]));

        let l3 = lang(&["a", "b", "c"]);
        let t3 = ms(&l3, &["000", "111"]);
        let f3 = ms(&l3, &["100"]);
        assert_eq!(revise_set(&t3, &f3).unwrap(), f3);
    }

    #[test]
    fn set_variant_can_keep_incomparable_candidates() {
        // Disagreement sets {a} and {b,c} are ⊆-incomparable, so both
        // candidates survive even though their counts differ.
        let l = lang(&["a", "b", "c"]);
        let t = ms(&l, &["111"]);
        let f = ms(&l, &["011", "100"]);
        assert_eq!(revise_set(&t, &f).unwrap(), f);
        let unit = WeightProfile::unit(&l);
        assert_eq!(revise_count(&t, &f, &unit).unwrap(), ms(&l, &["011"]));
    }

    #[test]
    fn componentwise_matches_direct_on_the_pinned_example() {
        let l = lang(&["p", "q"]);
        let t = ms(&l, &["11"]);
        let f = ms(&l, &["00"]);
        let p = Partition::singletons(&l);
        let got = revise_componentwise(&t, &f, &p, &Metric::Count).unwrap();
        assert_eq!(got, ms(&l, &["00"]));
        assert_eq!(
            got,
            revise_count(&t, &f, &WeightProfile::unit(&l)).unwrap()
        );
    }

    #[test]
    fn componentwise_with_one_block_is_direct_revision() {
        let l = lang(&["p", "q", "r"]);
        let t = ms(&l, &["111", "110"]);
        let f = ms(&l, &["000", "001"]);
        let whole = Partition::whole(&l);
        for metric in [Metric::Count, Metric::Set] {
            assert_eq!(
                revise_componentwise(&t, &f, &whole, &metric).unwrap(),
                revise(&t, &f, &metric).unwrap()
            );
        }
    }

    #[test]
    fn componentwise_requires_joint_factorizability() {
        let l = lang(&["p", "q"]);
        let t = ms(&l, &["11", "00"]);
        let f = ModelSet::full_cube(&l);
        assert_eq!(
            revise_componentwise(&t, &f, &Partition::singletons(&l), &Metric::Count).unwrap_err(),
            Error::NotJointlyFactorizable
        );
    }

    #[test]
    fn metric_config_parsing() {
        let l = lang(&["p", "q"]);
        assert!(matches!(
            parse_metric_config(&l, r#"{"metric":"count"}"#).unwrap(),
            Metric::Count
        ));
        assert!(matches!(
            parse_metric_config(&l, r#"{"metric":"set"}"#).unwrap(),
            Metric::Set
        ));
        let m = parse_metric_config(&l, r#"{"metric":"weighted","weights":{"q":3}}"#).unwrap();
        match m {
            Metric::Weighted(w) => {
                assert_eq!(w.weight(0), 1);
                assert_eq!(w.weight(1), 3);
            }
            other => panic!("expected weighted, got {other:?}"),
        }
        assert!(parse_metric_config(&l, r#"{"metric":"count","weights":{"p":1}}"#).is_err());
        assert!(parse_metric_config(&l, r#"{"metric":"euclid"}"#).is_err());
        assert!(parse_metric_config(&l, r#"{"metric":"weighted","weights":{"p":0}}"#).is_err());
    }

    #[test]
    fn restricted_weights_follow_their_variables() {
        let l = lang(&["p", "q", "r"]);
        let w = WeightProfile::from_named(&l, [("p", 2), ("q", 3), ("r", 5)]).unwrap();
        let qr = w.restrict(l.var_set(["q", "r"]).unwrap()).unwrap();
        assert_eq!(qr.lang().names(), ["q".to_string(), "r".to_string()]);
        assert_eq!(qr.weight(0), 3);
        assert_eq!(qr.weight(1), 5);
    }

    #[test]
    fn revision_lands_inside_the_evidence() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_000e);
        for _ in 0..400 {
            let n = rng.gen_range(1..=6usize);
            let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let l = Language::new(&names).unwrap();
            let mut pick = |density: f64| {
                let mut words: Vec<u32> =
                    (0..l.cube_size()).filter(|_| rng.gen_bool(density)).collect();
                if words.is_empty() {
                    words.push(rng.gen_range(0..l.cube_size()));
                }
                ModelSet::new(&l, words).unwrap()
            };
            let t = pick(0.3);
            let f = pick(0.3);
            let weights = WeightProfile::from_named(
                &l,
                names.iter().map(|nm| (nm.as_str(), rng.gen_range(1..=5u64))),
            )
            .unwrap();

            let overlap = t.intersect(&f).unwrap();
            for metric in [Metric::Count, Metric::Weighted(weights.clone()), Metric::Set] {
                let r = revise(&t, &f, &metric).unwrap();
                assert!(!r.is_empty());
                assert!(r.words().iter().all(|&w| f.contains_word(w)));
                if !overlap.is_empty() {
                    assert_eq!(r, overlap);
                }
            }

            let unit = Metric::Weighted(WeightProfile::unit(&l));
            assert_eq!(
                revise(&t, &f, &unit).unwrap(),
                revise(&t, &f, &Metric::Count).unwrap()
            );
        }
    }
}
