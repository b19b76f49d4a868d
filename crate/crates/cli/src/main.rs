//! Command-line front end for the `splitrev` library.
//!
//! Every subcommand loads its inputs, calls one library entry point, and
//! prints the result through a formatter; nothing here computes anything.
//! Model-set arguments accept either a path to a model-set text file or an
//! inline formula (the argument is treated as a file when such a file
//! exists). Exit codes: 0 for a positive result, 1 for a computed negative
//! answer (a failed check, a `no`, an exhausted search), 2 for usage and
//! input-format errors, 3 for semantic errors such as an empty model set.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use splitrev::{
    brute_force_finest, build_preference, default_language, extract_defaults,
    finest_factorization, is_factorization, models_of, nm_consequence, parse_defaults_file,
    parse_formula, parse_metric_config, revise, revise_componentwise, search_factorizing_recoding,
    Error, Formula, Language, Metric, ModelSet, Partition, PreferenceGraph, Result, SearchMode,
};

#[derive(Parser)]
#[command(
    name = "splitrev",
    version,
    about = "Semantic factorization, distance-based revision, and default reasoning \
             over explicit model sets"
)]
struct Cli {
    /// Render output as JSON
    #[arg(long, global = true)]
    json: bool,

    /// Space-separated variable names fixing the language of inline
    /// formulas (default: first-occurrence order)
    #[arg(long, global = true, value_name = "NAMES")]
    vars: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the models of a formula
    Models {
        /// Formula, e.g. "p & (q | r)"
        formula: String,
    },
    /// Compute the finest factorizing variable partition of a model set
    Factorize {
        /// Model-set file or inline formula
        set: String,
    },
    /// Test whether a partition factorizes a model set
    CheckPartition {
        /// Model-set file or inline formula
        set: String,
        /// Partition JSON file, e.g. {"blocks":[["p"],["q","r"]]}
        partition: PathBuf,
    },
    /// Revise a prior model set by evidence under a Hamming-style metric
    Revise {
        /// Distance to minimize
        #[arg(long, value_enum, default_value_t = MetricArg::Count)]
        metric: MetricArg,
        /// JSON file mapping variable names to positive integer weights
        #[arg(long, value_name = "FILE")]
        weights: Option<PathBuf>,
        /// Partition JSON file: revise each block separately and glue
        #[arg(long, value_name = "FILE")]
        partition: Option<PathBuf>,
        /// Prior model set (file or inline formula)
        prior: String,
        /// Evidence model set (file or inline formula)
        evidence: String,
    },
    /// Compile, query, or reconstruct default rules
    #[command(subcommand)]
    Defaults(DefaultsCmd),
    /// Search for a bijective reinterpretation that factorizes a set
    #[command(subcommand)]
    Recode(RecodeCmd),
    /// Brute-force reference computations
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Subcommand)]
enum DefaultsCmd {
    /// Build the preference graph for a defaults file and print its JSON
    Compile {
        /// Defaults file: one `antecedent |~ consequent` per line
        file: PathBuf,
    },
    /// Decide whether phi nonmonotonically entails psi under a defaults file
    Query {
        /// Defaults file
        file: PathBuf,
        /// Premise formula
        phi: String,
        /// Conclusion formula
        psi: String,
    },
    /// Read defaults back off a preference-graph JSON file
    Extract {
        /// Preference-graph JSON file
        graph: PathBuf,
    },
}

#[derive(Subcommand)]
enum RecodeCmd {
    /// Exhaust recodings in lexicographic order until the image factorizes
    Search {
        /// Search space: every bijection of the cube, or affine maps only
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Model-set file or inline formula
        set: String,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Finest factorization by exhausting every variable partition
    Finest {
        /// Model-set file or inline formula
        set: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Count,
    Set,
    Weighted,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Affine,
}

struct Report {
    stdout: String,
    stderr: String,
    code: u8,
}

impl Report {
    fn ok(stdout: String) -> Report {
        Report {
            stdout,
            stderr: String::new(),
            code: 0,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.stdout);
            eprint!("{}", report.stderr);
            let _ = std::io::stdout().flush();
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 3 })
        }
    }
}

fn run(cli: &Cli) -> Result<Report> {
    let vars = cli.vars.as_deref();
    match &cli.command {
        Command::Models { formula } => {
            let f = parse_formula(formula)?;
            let lang = inline_language(&[&f], vars)?;
            let x = models_of(&f, &lang)?;
            Ok(Report::ok(render_model_set(&x, cli.json)))
        }
        Command::Factorize { set } => {
            let x = load_model_set(set, vars)?;
            let p = finest_factorization(&x)?;
            Ok(Report::ok(render_partition(&p, cli.json)))
        }
        Command::CheckPartition { set, partition } => {
            let x = load_model_set(set, vars)?;
            let p = Partition::from_json(x.lang(), &read(partition)?)?;
            Ok(yes_no(is_factorization(&x, &p)?, "factorizes", cli.json))
        }
        Command::Revise {
            metric,
            weights,
            partition,
            prior,
            evidence,
        } => {
            let (t, f) = load_model_set_pair(prior, evidence, vars)?;
            let metric = build_metric(*metric, weights.as_deref(), t.lang())?;
            let revised = match partition {
                Some(path) => {
                    let p = Partition::from_json(t.lang(), &read(path)?)?;
                    revise_componentwise(&t, &f, &p, &metric)?
                }
                None => revise(&t, &f, &metric)?,
            };
            Ok(Report::ok(render_model_set(&revised, cli.json)))
        }
        Command::Defaults(cmd) => run_defaults(cmd, cli),
        Command::Recode(RecodeCmd::Search { mode, set }) => {
            let x = load_model_set(set, vars)?;
            let mode = match mode {
                ModeArg::Full => SearchMode::Full,
                ModeArg::Affine => SearchMode::Affine,
            };
            match search_factorizing_recoding(&x, mode)? {
                Some(r) => Ok(Report::ok(format!("{}\n", r.to_json()))),
                None => Ok(Report {
                    stdout: if cli.json {
                        format!("{}\n", json!({"found": false}))
                    } else {
                        "not found\n".to_string()
                    },
                    stderr: String::new(),
                    code: 1,
                }),
            }
        }
        Command::Oracle(OracleCmd::Finest { set }) => {
            let x = load_model_set(set, vars)?;
            let p = brute_force_finest(&x)?;
            Ok(Report::ok(render_partition(&p, cli.json)))
        }
    }
}

fn run_defaults(cmd: &DefaultsCmd, cli: &Cli) -> Result<Report> {
    match cmd {
        DefaultsCmd::Compile { file } => {
            let ds = parse_defaults_file(&read(file)?)?;
            let lang = default_language(&ds)?;
            let g = build_preference(&ds, &lang)?;
            let mut stderr = String::new();
            for component in g.cyclic_components() {
                let words: Vec<String> = component.iter().map(|&w| lang.bitstring(w)).collect();
                stderr.push_str(&format!(
                    "note: preference cycle among {}\n",
                    words.join(" ")
                ));
            }
            Ok(Report {
                stdout: format!("{}\n", g.to_json()),
                stderr,
                code: 0,
            })
        }
        DefaultsCmd::Query { file, phi, psi } => {
            let ds = parse_defaults_file(&read(file)?)?;
            let lang = default_language(&ds)?;
            let phi = parse_formula(phi)?;
            let psi = parse_formula(psi)?;
            Ok(yes_no(
                nm_consequence(&ds, &phi, &psi, &lang)?,
                "consequence",
                cli.json,
            ))
        }
        DefaultsCmd::Extract { graph } => {
            let g = PreferenceGraph::from_json(&read(graph)?)?;
            let ds = extract_defaults(&g);
            let stdout = if cli.json {
                let items: Vec<_> = ds
                    .iter()
                    .map(|d| {
                        json!({
                            "label": d.label,
                            "antecedent": d.antecedent.to_string(),
                            "consequent": d.consequent.to_string(),
                        })
                    })
                    .collect();
                format!("{}\n", json!({ "defaults": items }))
            } else {
                ds.iter().map(|d| format!("{d}\n")).collect()
            };
            Ok(Report::ok(stdout))
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn file_contents(arg: &str) -> Result<Option<String>> {
    let path = Path::new(arg);
    if path.is_file() {
        read(path).map(Some)
    } else if arg.contains(std::path::MAIN_SEPARATOR) {
        // No formula contains a path separator, so this was meant as a file.
        Err(Error::Format(format!("{arg}: no such file")))
    } else {
        Ok(None)
    }
}

fn inline_language(formulas: &[&Formula], vars: Option<&str>) -> Result<Language> {
    if let Some(names) = vars {
        return Language::new(names.split_whitespace());
    }
    let mut order: Vec<&str> = Vec::new();
    for f in formulas {
        for v in f.vars_in_order() {
            if !order.contains(&v) {
                order.push(v);
            }
        }
    }
    Language::new(order)
}

fn load_model_set(arg: &str, vars: Option<&str>) -> Result<ModelSet> {
    match file_contents(arg)? {
        Some(text) => ModelSet::parse_text(&text),
        None => {
            let f = parse_formula(arg)?;
            let lang = inline_language(&[&f], vars)?;
            models_of(&f, &lang)
        }
    }
}

fn load_model_set_pair(a: &str, b: &str, vars: Option<&str>) -> Result<(ModelSet, ModelSet)> {
    match (file_contents(a)?, file_contents(b)?) {
        (Some(ta), Some(tb)) => Ok((ModelSet::parse_text(&ta)?, ModelSet::parse_text(&tb)?)),
        (Some(ta), None) => {
            let t = ModelSet::parse_text(&ta)?;
            let f = models_of(&parse_formula(b)?, t.lang())?;
            Ok((t, f))
        }
        (None, Some(tb)) => {
            let f = ModelSet::parse_text(&tb)?;
            let t = models_of(&parse_formula(a)?, f.lang())?;
            Ok((t, f))
        }
        (None, None) => {
            let fa = parse_formula(a)?;
            let fb = parse_formula(b)?;
            let lang = inline_language(&[&fa, &fb], vars)?;
            Ok((models_of(&fa, &lang)?, models_of(&fb, &lang)?))
        }
    }
}

fn build_metric(arg: MetricArg, weights: Option<&Path>, lang: &Language) -> Result<Metric> {
    let name = match arg {
        MetricArg::Count => "count",
        MetricArg::Set => "set",
        MetricArg::Weighted => "weighted",
    };
    let config = match weights {
        None => json!({ "metric": name }),
        Some(path) => {
            let value: serde_json::Value = serde_json::from_str(&read(path)?)
                .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
            json!({ "metric": name, "weights": value })
        }
    };
    parse_metric_config(lang, &config.to_string())
}

fn render_model_set(x: &ModelSet, json_mode: bool) -> String {
    if json_mode {
        format!(
            "{}\n",
            json!({ "vars": x.lang().names(), "models": x.bitstrings() })
        )
    } else {
        x.to_text()
    }
}

fn render_partition(p: &Partition, json_mode: bool) -> String {
    if json_mode {
        format!("{}\n", p.to_json())
    } else {
        let blocks: Vec<String> = p
            .block_names()
            .iter()
            .map(|names| format!("[{}]", names.join(" ")))
            .collect();
        format!("{}\n", blocks.join(" "))
    }
}

fn yes_no(holds: bool, key: &str, json_mode: bool) -> Report {
    let stdout = if json_mode {
        let mut map = serde_json::Map::new();
        map.insert(key.to_string(), serde_json::Value::Bool(holds));
        format!("{}\n", serde_json::Value::Object(map))
    } else if holds {
        "yes\n".to_string()
    } else {
        "no\n".to_string()
    };
    Report {
        stdout,
        stderr: String::new(),
        code: if holds { 0 } else { 1 },
    }
}
