//! Semantic factorization and factorized belief revision for propositional
//! model sets.
//!
//! A set of models over variables `U` sometimes carries no information
//! linking one group of variables to another: it is then the "glue" of its
//! projections onto the groups, and each group can be reasoned about on its
//! own. This crate computes such splittings and exploits them:
//!
//! - [`factorization`] finds the finest variable partition that factorizes
//!   a model set, with a brute-force oracle for cross-checking.
//! - [`revision`] implements Hamming-style distance revision (counting,
//!   weighted counting, and the set-of-variables variant) and the
//!   componentwise form that revises each factor separately and glues the
//!   results.
//! - [`defaults`] compiles specificity-ordered default rules into a
//!   preference relation over models, answers nonmonotonic queries against
//!   it, and reads defaults back off a preference graph.
//! - [`recoding`] searches for bijective reinterpretations of the cube
//!   (table or GF(2)-affine) under which a set becomes factorizable.
//!
//! Everything is explicit truth-table enumeration over at most 24
//! variables, stored as sorted `u32` words. All values are immutable after
//! construction; with the default `parallel` feature the heavy loops fan
//! out through rayon, and without it the same code runs sequentially with
//! identical results.

pub mod defaults;
pub mod error;
pub mod factorization;
pub mod formula;
pub mod lang;
pub mod logic;
pub mod model;
mod par;
pub mod parse;
pub mod recoding;
pub mod revision;

pub use defaults::{
    build_preference, default_language, extract_defaults, minimal_models, more_specific,
    nm_consequence, parse_defaults_file, round_trip, separates, PreferenceGraph,
};
pub use error::{Error, Result};
pub use factorization::{
    brute_force_finest, common_refinement, finest_factorization, is_factorization, is_refinement,
    restrict_partition, Partition,
};
pub use formula::Formula;
pub use lang::{Language, VarSet, MAX_VARS};
pub use logic::{entails, formula_of_models, models_of};
pub use model::{cube_on, free_product, glue, Assignment, ModelSet, PartialAssignment, ProjectedSet};
pub use parse::parse_formula;
pub use recoding::{
    apply_recoding, search_factorizing_recoding, Recoding, RecodingMap, SearchMode,
    MAX_AFFINE_SEARCH_VARS, MAX_FULL_SEARCH_VARS,
};
pub use revision::{
    distance, hamming_count, hamming_set, parse_metric_config, revise, revise_componentwise,
    revise_count, revise_set, DistanceValue, Metric, WeightProfile,
};
