//! Command-line front end: argument parsing, dispatch and report output.

pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coxrig::bass_serre::{build_ball, cylinders, TreeOfFiniteGroups};
use coxrig::casework::{verify_counterexample, verify_dihedral_example, Checklist};
use coxrig::classification::{classify_components, max_finite_special_order, moussong_hyperbolic};
use coxrig::fingroup::{
    automorphism_group, diamond, domain_report, normalizer, perpendicular, FinGroup, FinGroupError, Perm,
    DEFAULT_ORDER_BOUND, MAX_AUT_GROUP_ORDER,
};
use coxrig::matrix::{parse_system, CoxeterMatrix};
use coxrig::rigidity::rigidity_report_with;
use coxrig::splitting::stallings_splitting;
use coxrig::words::{reduce_word, WordsError, DEFAULT_WORD_BUDGET};
use serde::Serialize;

use report::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ANALYSIS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "coxrig", version, about = "Coxeter group splittings and torsion-rigidity certificates")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Maximum number of words visited by word reduction.
    #[arg(long, env = "COXRIG_WORD_BUDGET", default_value_t = DEFAULT_WORD_BUDGET, global = true)]
    pub word_budget: usize,
    /// Maximum order of any materialized permutation group.
    #[arg(long, env = "COXRIG_ORDER_BOUND", default_value_t = DEFAULT_ORDER_BOUND, global = true)]
    pub order_bound: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Exactly one system source.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Inline system, e.g. "rank 3; m 1 2 = inf".
    #[arg(long)]
    pub system: Option<String>,
    /// File of systems, one stanza per system, stanzas separated by blank lines.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classification, splitting and rigidity in one report.
    Analyze(#[command(flatten)] Source),
    /// Irreducible components and Moussong's criterion.
    Classify(#[command(flatten)] Source),
    /// Stallings splitting over finite special subgroups.
    Split(#[command(flatten)] Source),
    /// Edge-group conditions for torsion rigidity.
    Rigidity(#[command(flatten)] Source),
    /// Reduce a word given as space-separated 1-based generator numbers.
    Reduce {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Permutation group computations; permutations in cycle notation.
    Fingroup {
        /// A generator, e.g. "(1 2)(3 4)". Repeatable.
        #[arg(long = "gen", required = true)]
        generators: Vec<String>,
        /// Number of points (default: the largest point mentioned).
        #[arg(long)]
        degree: Option<usize>,
        /// Generator of a subgroup whose normalizer is computed. Repeatable.
        #[arg(long = "subgroup-gen")]
        subgroup: Vec<String>,
        /// Two elements x and y for x ⋄ y.
        #[arg(long, num_args = 2, value_names = ["X", "Y"])]
        diamond: Option<Vec<String>>,
        /// Zero-divisor search for ⋄.
        #[arg(long)]
        domain: bool,
        /// Automorphism group (small groups only).
        #[arg(long)]
        automorphisms: bool,
    },
    /// Ball in the Bass-Serre tree of the splitting, with cylinders.
    Ball {
        #[command(flatten)]
        source: Source,
        #[arg(long, env = "COXRIG_RADIUS", default_value_t = 3)]
        radius: usize,
        /// 1-based splitting node at the centre.
        #[arg(long, default_value_t = 1)]
        base: usize,
    },
    /// Checklist for the amalgam counterexample.
    VerifyCounterexample,
    /// Checklist for the matrices over Z/11.
    VerifyDihedral,
}

/// Result of one invocation: exit code and the complete output streams.
#[derive(Debug, Default)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Outcome of one analysis.
enum Outcome {
    Report { json: serde_json::Value, text: String, code: i32 },
    Failed { code: i32, message: String },
}

fn report<R: Serialize + Render>(r: &R, code: i32) -> Outcome {
    Outcome::Report { json: serde_json::to_value(r).expect("reports serialize"), text: r.text(), code }
}

fn input_error(message: impl ToString) -> Outcome {
    Outcome::Failed { code: EXIT_INPUT, message: message.to_string() }
}

fn analysis_error(message: impl ToString) -> Outcome {
    Outcome::Failed { code: EXIT_ANALYSIS, message: message.to_string() }
}

fn group_error(e: FinGroupError) -> Outcome {
    match e {
        FinGroupError::OrderBoundExceeded { .. } => analysis_error(e),
        _ => input_error(e),
    }
}

/// Split a batch file into stanzas; `#` starts a comment line.
pub fn stanzas(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    for line in text.lines().chain(std::iter::once("")) {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            if !current.is_empty() {
                out.push(current.join("; "));
                current.clear();
            }
        } else {
            current.push(line.trim_end_matches(';'));
        }
    }
    out
}

fn systems(source: &Source) -> Result<(Vec<String>, bool), String> {
    match (&source.system, &source.file) {
        (Some(s), None) => Ok((vec![s.clone()], false)),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let found = stanzas(&text);
            if found.is_empty() {
                return Err(format!("{} contains no systems", path.display()));
            }
            Ok((found, true))
        }
        _ => Err("give exactly one of --system and --file".into()),
    }
}

fn analyze(m: &CoxeterMatrix, cli: &Cli) -> Outcome {
    let classification = classify_components(m);
    let rigidity = rigidity_report_with(m, cli.order_bound);
    let r = AnalyzeReport {
        system: m.to_system_text(),
        rank: m.rank(),
        finite: classification.is_finite(),
        order: if classification.is_finite() { classification.order() } else { None },
        classification,
        rigidity,
    };
    report(&r, EXIT_OK)
}

fn classify(m: &CoxeterMatrix) -> Outcome {
    let r = ClassifyReport {
        system: m.to_system_text(),
        classification: classify_components(m),
        hyperbolicity: moussong_hyperbolic(m),
        max_finite_special: max_finite_special_order(m),
    };
    report(&r, EXIT_OK)
}

fn parse_word(text: &str, rank: usize) -> Result<Vec<usize>, String> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(k) if (1..=rank).contains(&k) => Ok(k - 1),
            _ => Err(format!("bad letter `{t}`: expected a generator number in 1..={rank}")),
        })
        .collect()
}

fn reduce(m: &CoxeterMatrix, word: &str, cli: &Cli) -> Outcome {
    let w = match parse_word(word, m.rank()) {
        Ok(w) => w,
        Err(e) => return input_error(e),
    };
    let base = ReduceReport {
        system: m.to_system_text(),
        word: w.iter().map(|k| k + 1).collect(),
        status: ReduceStatus::Reduced,
        reduced: None,
        length: None,
        budget: cli.word_budget,
    };
    match reduce_word(m, &w, cli.word_budget) {
        Ok(r) => report(
            &ReduceReport { length: Some(r.len()), reduced: Some(r.iter().map(|k| k + 1).collect()), ..base },
            EXIT_OK,
        ),
        Err(WordsError::BudgetExhausted { .. }) => {
            report(&ReduceReport { status: ReduceStatus::BudgetExhausted, ..base }, EXIT_ANALYSIS)
        }
        Err(e) => input_error(e),
    }
}

fn ball(m: &CoxeterMatrix, radius: usize, base: usize, cli: &Cli) -> Outcome {
    let tree = stallings_splitting(m);
    if base == 0 || base > tree.nodes.len() {
        return input_error(format!("--base must be in 1..={}", tree.nodes.len()));
    }
    let t = match TreeOfFiniteGroups::from_split_tree(m, &tree, cli.order_bound) {
        Ok(t) => t,
        Err(e) => return analysis_error(e),
    };
    let b = match build_ball(&t, base - 1, radius) {
        Ok(b) => b,
        Err(e) => return analysis_error(e),
    };
    let mut vertex_groups = Vec::new();
    for v in &t.vertices {
        match v.group.order(cli.order_bound) {
            Ok(order) => vertex_groups.push(LabelledOrder { label: v.label.clone(), order }),
            Err(e) => return analysis_error(e),
        }
    }
    let edge_groups =
        t.edges.iter().enumerate().map(|(k, e)| LabelledOrder { label: e.label.clone(), order: t.edge_order(k) }).collect();
    let (cyl, cylinder_error) = match cylinders(&t, &b) {
        Ok(c) => (Some(c.iter().map(CylinderSummary::from).collect()), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let r = BallReport {
        system: m.to_system_text(),
        radius,
        base,
        vertex_count: b.vertices.len(),
        edge_count: b.edges.len(),
        level_counts: b.level_counts,
        vertex_groups,
        edge_groups,
        cylinders: cyl,
        cylinder_error,
    };
    report(&r, EXIT_OK)
}

fn parse_perms(texts: &[String], degree: usize) -> Result<Vec<Perm>, FinGroupError> {
    texts.iter().map(|t| Perm::parse(t, degree)).collect()
}

struct FingroupArgs<'a> {
    generators: &'a [String],
    degree: Option<usize>,
    subgroup: &'a [String],
    diamond: Option<&'a [String]>,
    domain: bool,
    automorphisms: bool,
}

fn fingroup(a: FingroupArgs<'_>, bound: usize) -> Result<FingroupReport, FinGroupError> {
    let mentioned = a
        .generators
        .iter()
        .chain(a.subgroup)
        .chain(a.diamond.unwrap_or(&[]))
        .map(|t| coxrig::fingroup::max_point(t))
        .collect::<Result<Vec<_>, _>>()?;
    let max = mentioned.into_iter().max().unwrap_or(1).max(1);
    let degree = match a.degree {
        Some(d) if d < max => return Err(FinGroupError::Parse(format!("degree {d} is below the largest point {max}"))),
        Some(d) => d,
        None => max,
    };
    let g = FinGroup::new(degree, parse_perms(a.generators, degree)?)?;
    let order = g.order(bound)?;
    let subgroup = if a.subgroup.is_empty() {
        None
    } else {
        let h = FinGroup::new(degree, parse_perms(a.subgroup, degree)?)?;
        for p in h.generators() {
            if !g.contains(p, bound)? {
                return Err(FinGroupError::Parse(format!("subgroup generator {p} is not in the group")));
            }
        }
        let n = normalizer(&g, &h, bound)?;
        let normalizer_order = n.order(bound)?;
        Some(SubgroupReport {
            generators: h.generators().to_vec(),
            order: h.order(bound)?,
            normalizer_order,
            normal: normalizer_order == order,
        })
    };
    let diamond_report = match a.diamond {
        Some([x, y]) => {
            let (x, y) = (Perm::parse(x, degree)?, Perm::parse(y, degree)?);
            if !g.contains(&x, bound)? || !g.contains(&y, bound)? {
                return Err(FinGroupError::Parse("diamond arguments must lie in the group".into()));
            }
            let d = diamond(&g, &x, &y, bound)?;
            Some(DiamondReport { order: d.order(bound)?, perpendicular: perpendicular(&g, &x, &y), x, y })
        }
        _ => None,
    };
    let domain = if a.domain { Some(domain_report(&g, &[], bound)?) } else { None };
    let automorphisms = if a.automorphisms {
        if order > MAX_AUT_GROUP_ORDER {
            return Err(FinGroupError::OrderBoundExceeded { bound: MAX_AUT_GROUP_ORDER });
        }
        let aut = automorphism_group(&g)?;
        Some(AutReport { order: aut.order(), inner_order: aut.inner_order(), out_trivial: aut.out_trivial })
    } else {
        None
    };
    Ok(FingroupReport {
        degree,
        generators: g.generators().to_vec(),
        order,
        abelian: g.is_abelian(),
        orbits: g.orbits().iter().map(|o| o.iter().map(|p| p + 1).collect()).collect(),
        subgroup,
        diamond: diamond_report,
        domain,
        automorphisms,
    })
}

fn checklist(list: &Checklist) -> Outcome {
    report(list, if list.all_passed { EXIT_OK } else { EXIT_ANALYSIS })
}

fn emit(outcomes: Vec<Outcome>, batch: bool, format: Format) -> Output {
    let mut out = Output::default();
    let mut json = Vec::new();
    let mut text = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Report { json: j, text: t, code } => {
                out.code = out.code.max(code);
                json.push(j);
                text.push(t);
            }
            Outcome::Failed { code, message } => {
                out.code = out.code.max(code);
                out.stderr.push_str(&format!("error: {message}\n"));
                json.push(serde_json::json!({ "error": message }));
                text.push(format!("error: {message}\n"));
            }
        }
    }
    match format {
        Format::Json if batch => out.stdout = serde_json::to_string_pretty(&json).expect("json") + "\n",
        Format::Json => {
            if let Some(j) = json.into_iter().next().filter(|j| j.get("error").is_none()) {
                out.stdout = serde_json::to_string_pretty(&j).expect("json") + "\n";
            }
        }
        Format::Text if batch => out.stdout = text.join("\n"),
        Format::Text => {
            if out.stderr.is_empty() {
                out.stdout = text.concat();
            }
        }
    }
    out
}

fn per_system(cli: &Cli, source: &Source, f: impl Fn(&CoxeterMatrix) -> Outcome) -> Output {
    let (texts, batch) = match systems(source) {
        Ok(s) => s,
        Err(e) => return emit(vec![input_error(e)], false, cli.format),
    };
    let outcomes = texts
        .iter()
        .map(|t| match parse_system(t) {
            Ok(m) => f(&m),
            Err(e) => input_error(e),
        })
        .collect();
    emit(outcomes, batch, cli.format)
}

pub fn execute(cli: &Cli) -> Output {
    match &cli.command {
        Command::Analyze(s) => per_system(cli, s, |m| analyze(m, cli)),
        Command::Classify(s) => per_system(cli, s, classify),
        Command::Split(s) => per_system(cli, s, |m| {
            report(&SplitReport { system: m.to_system_text(), splitting: stallings_splitting(m) }, EXIT_OK)
        }),
        Command::Rigidity(s) => per_system(cli, s, |m| {
            let r = RigidityRecord { system: m.to_system_text(), report: rigidity_report_with(m, cli.order_bound) };
            report(&r, EXIT_OK)
        }),
        Command::Reduce { source, word } => per_system(cli, source, |m| reduce(m, word, cli)),
        Command::Ball { source, radius, base } => per_system(cli, source, |m| ball(m, *radius, *base, cli)),
        Command::Fingroup { generators, degree, subgroup, diamond, domain, automorphisms } => {
            let args = FingroupArgs {
                generators,
                degree: *degree,
                subgroup,
                diamond: diamond.as_deref(),
                domain: *domain,
                automorphisms: *automorphisms,
            };
            let outcome = match fingroup(args, cli.order_bound) {
                Ok(r) => report(&r, EXIT_OK),
                Err(e) => group_error(e),
            };
            emit(vec![outcome], false, cli.format)
        }
        Command::VerifyCounterexample => {
            let outcome = match verify_counterexample() {
                Ok(list) => checklist(&list),
                Err(e) => analysis_error(e),
            };
            emit(vec![outcome], false, cli.format)
        }
        Command::VerifyDihedral => emit(vec![checklist(&verify_dihedral_example())], false, cli.format),
    }
}

/// Parse arguments (including the program name) and run.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                Output { code: EXIT_INPUT, stdout: String::new(), stderr: rendered }
            } else {
                Output { code: EXIT_OK, stdout: rendered, stderr: String::new() }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stanza_splitting() {
        let text = "# header\nrank 2\nm 1 2 = 3\n\n\nrank 1;\n\n";
        assert_eq!(stanzas(text), vec!["rank 2; m 1 2 = 3".to_string(), "rank 1".to_string()]);
    }

    #[test]
    fn word_parsing() {
        assert_eq!(parse_word("1 2, 3", 3).unwrap(), vec![0, 1, 2]);
        assert!(parse_word("0", 3).is_err());
        assert!(parse_word("4", 3).is_err());
        assert!(parse_word("x", 3).is_err());
        assert!(parse_word("", 3).unwrap().is_empty());
    }

    #[test]
    fn missing_source_is_input_error() {
        let out = run(["coxrig", "classify"]);
        assert_eq!(out.code, EXIT_INPUT);
        let out = run(["coxrig", "classify", "--system", "rank 1", "--file", "x"]);
        assert_eq!(out.code, EXIT_INPUT);
    }

    #[test]
    fn help_exits_zero() {
        let out = run(["coxrig", "--help"]);
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("verify-counterexample"));
    }
}
