//! Command-line front end: input ingestion, dispatch to the library, and
//! deterministic report rendering.
//!
//! Exit codes: 0 for pass/info, 1 for a verification failure, 2 for input
//! errors (including argument parsing).

mod formats;
mod report;
mod suite_cmd;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use approxforms::lefebvre::{self, EXACT_TOL};
use approxforms::{
    boolinf, check_axioms, choice, decompose, pad_to_universal, Polarity, Strategy, SystemTag,
    TruthTable,
};

use report::{aligned_table, OutputMode, Report, Verdict};

/// Input-side failure: missing files, parse errors, violated invariants.
#[derive(Debug)]
pub struct CliError {
    message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<approxforms::Error> for CliError {
    fn from(e: approxforms::Error) -> Self {
        Self::input(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputArg {
    Text,
    Structured,
}

#[derive(Parser)]
#[command(
    name = "approxforms",
    version,
    about = "Monotone decompositions of evaluation mappings, implicative normal forms, and choice ensembles",
    max_term_width = 100
)]
struct Cli {
    /// Report rendering mode
    #[arg(long, global = true, value_enum, default_value_t = OutputArg::Text)]
    output: OutputArg,
    /// Cap on codomain size for the subset-enumeration axiom check
    #[arg(long, global = true)]
    limit_subsets: Option<usize>,
    /// Default seed for randomized commands; their own --seed wins
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

fn resolve_seed(local: Option<u64>, global: Option<u64>) -> Result<u64, CliError> {
    local
        .or(global)
        .ok_or_else(|| CliError::input("a --seed is required for randomized commands"))
}

#[derive(Subcommand)]
enum Command {
    /// Model-check an operation system file against one axiom system
    CheckAxioms {
        /// Operation system file
        #[arg(long)]
        algebra: PathBuf,
        /// One of A, B, A*, B*
        #[arg(long)]
        system: String,
    },
    /// Decompose an evaluation mapping into an approximating form
    Decompose {
        /// Domain poset file
        #[arg(long)]
        poset: PathBuf,
        /// Codomain poset file
        #[arg(long)]
        codomain: PathBuf,
        /// Evaluation mapping file
        #[arg(long)]
        function: PathBuf,
        /// Operation system file
        #[arg(long)]
        algebra: PathBuf,
        /// Construction: 1 combines down-sets, 2 layers rank functions,
        /// 3 folds the binary combine
        #[arg(long)]
        theorem: u8,
        /// Expect a dual operation system
        #[arg(long)]
        dual: bool,
        /// Pad the result to the universal length
        #[arg(long)]
        pad: bool,
    },
    /// Synthesize an implicative normal form (`inf verify` checks all
    /// functions of one arity exhaustively)
    Inf {
        /// Optional mode: `verify`
        mode: Option<String>,
        /// Number of variables
        #[arg(long)]
        arity: usize,
        /// Truth table as a bit string, leftmost bit = all-zeros point
        #[arg(long)]
        table: Option<String>,
    },
    /// Ensemble characteristics, marginals, sampling and region scans
    Ensemble {
        #[command(subcommand)]
        cmd: EnsembleCmd,
    },
    /// Run a choice trace (`choice table` prints all eight intents)
    Choice {
        /// Optional mode: `table`
        mode: Option<String>,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        x1: Option<u8>,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        x2: Option<u8>,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        x3: Option<u8>,
        /// `exact` or `approx`
        #[arg(long)]
        algorithm: Option<String>,
    },
    /// Run every embedded verification suite
    VerifySuite {
        /// Master seed for the randomized batches
        #[arg(long)]
        seed: Option<u64>,
        /// Random decomposition instances
        #[arg(long, default_value_t = 1000)]
        instances: u64,
        /// Highest arity for the exhaustive normal-form check
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
    },
}

#[derive(Subcommand)]
enum EnsembleCmd {
    /// Marginals of a characteristic file
    Marginals {
        #[arg(long)]
        p: PathBuf,
    },
    /// Product characteristic with independent parameters
    Pure {
        #[arg(long)]
        x1: f64,
        #[arg(long)]
        x2: f64,
        #[arg(long)]
        x3: f64,
    },
    /// The golden-section realist ensemble and its invariants
    Golden,
    /// Seeded Monte Carlo estimate of the marginals
    Sample {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Worst deviation of the ensemble average over fixed marginals
    Region {
        #[arg(long)]
        x1: f64,
        #[arg(long)]
        x2: f64,
        #[arg(long)]
        x3: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mode = match cli.output {
        OutputArg::Text => OutputMode::Text,
        OutputArg::Structured => OutputMode::Structured,
    };
    match run(cli) {
        Ok(report) => {
            print!("{}", report.render(mode));
            ExitCode::from(report.verdict.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Report, CliError> {
    match cli.command {
        Command::CheckAxioms { algebra, system } => {
            cmd_check_axioms(algebra, system, cli.limit_subsets)
        }
        Command::Decompose {
            poset,
            codomain,
            function,
            algebra,
            theorem,
            dual,
            pad,
        } => cmd_decompose(
            poset,
            codomain,
            function,
            algebra,
            theorem,
            dual,
            pad,
            cli.limit_subsets,
        ),
        Command::Inf { mode, arity, table } => cmd_inf(mode, arity, table),
        Command::Ensemble { cmd } => cmd_ensemble(cmd, cli.seed),
        Command::Choice {
            mode,
            x1,
            x2,
            x3,
            algorithm,
        } => cmd_choice(mode, x1, x2, x3, algorithm),
        Command::VerifySuite {
            seed,
            instances,
            max_arity,
        } => suite_cmd::run(resolve_seed(seed, cli.seed)?, instances, max_arity),
    }
}

fn cmd_check_axioms(
    algebra: PathBuf,
    system: String,
    limit: Option<usize>,
) -> Result<Report, CliError> {
    let sys = formats::load_algebra_file(&algebra)?;
    let tag = SystemTag::parse(&system)
        .ok_or_else(|| CliError::input(format!("unknown axiom system `{system}`")))?;
    let ax = check_axioms(&sys, tag, limit)?;
    let verdict = if ax.passed {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let mut report = Report::new("check-axioms", verdict)
        .payload(json!({
            "system": tag.to_string(),
            "passed": ax.passed,
            "violations": ax.violations.iter().map(|v| json!({
                "axiom": v.axiom,
                "detail": v.detail,
            })).collect::<Vec<_>>(),
            "notes": ax.notes,
        }))
        .line(format!(
            "system {tag}: {}",
            if ax.passed {
                "all axioms hold"
            } else {
                "violations found"
            }
        ));
    for v in &ax.violations {
        report = report.line(format!("  {}: {}", v.axiom, v.detail));
    }
    for n in &ax.notes {
        report = report.line(format!("  note: {n}"));
    }
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn cmd_decompose(
    poset: PathBuf,
    codomain: PathBuf,
    function: PathBuf,
    algebra: PathBuf,
    theorem: u8,
    dual: bool,
    pad: bool,
    limit: Option<usize>,
) -> Result<Report, CliError> {
    let domain = formats::load_poset_file(&poset)?;
    let codomain_poset = formats::load_poset_file(&codomain)?;
    let psi = formats::load_map_file(&function, &domain, &codomain_poset)?;
    let sys = formats::load_algebra_file(&algebra)?;
    if sys.codomain() != &codomain_poset {
        return Err(CliError::input(
            "algebra codomain differs from the supplied codomain",
        ));
    }
    let expected = if dual {
        Polarity::Dual
    } else {
        Polarity::Primal
    };
    if sys.polarity() != expected {
        return Err(CliError::input(format!(
            "algebra polarity is {}, but the flags ask for {expected}",
            sys.polarity()
        )));
    }
    let strategy = Strategy::from_tag(theorem)
        .ok_or_else(|| CliError::input(format!("theorem must be 1, 2 or 3, got {theorem}")))?;
    let (mut form, mut rep) = decompose(&psi, &sys, strategy, limit)?;
    if pad {
        form = pad_to_universal(&form, rep.max_chain_length)?;
        let verify = approxforms::verify_form(&form, &psi);
        rep.dissociation_count = verify.dissociation_count;
        rep.support_chain = verify.support_chain.clone();
        rep.verified = rep.verified && verify.verified;
        rep.failures.extend(verify.failures);
    }
    let components_json: Vec<serde_json::Value> = form
        .components()
        .iter()
        .map(|c| {
            json!(c
                .domain()
                .names()
                .iter()
                .enumerate()
                .map(|(i, name)| (name.clone(), c.codomain().name(c.value(i)).to_string()))
                .collect::<std::collections::BTreeMap<_, _>>())
        })
        .collect();
    let support: Vec<Vec<String>> = rep
        .support_chain
        .iter()
        .map(|s| s.iter().map(|&x| domain.name(x).to_string()).collect())
        .collect();
    let verdict = if rep.verified {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let mut report = Report::new("decompose", verdict)
        .payload(json!({
            "strategy": strategy.tag(),
            "polarity": sys.polarity().to_string(),
            "padded": pad,
            "domain_order": domain.names(),
            "components": components_json,
            "dissociation_count": rep.dissociation_count,
            "max_chain_length": rep.max_chain_length,
            "residual_inversions": rep.residual_inversions,
            "inversion_regions": rep.inversion_regions,
            "support_chain": support,
            "verified": rep.verified,
            "failures": rep.failures,
        }))
        .line(format!(
            "strategy {} ({}): {} components, {} dissociations (bound {})",
            strategy.tag(),
            sys.polarity(),
            form.components().len(),
            rep.dissociation_count,
            rep.max_chain_length
        ));
    let mut rows = vec![std::iter::once("".to_string())
        .chain(domain.names().iter().cloned())
        .collect::<Vec<_>>()];
    for (i, c) in form.components().iter().enumerate() {
        rows.push(
            std::iter::once(format!("c{}", i + 1))
                .chain((0..domain.len()).map(|x| c.codomain().name(c.value(x)).to_string()))
                .collect(),
        );
    }
    report = report.lines(aligned_table(&rows));
    report = report.line(format!("verified: {}", rep.verified));
    for f in &rep.failures {
        report = report.line(format!("  failure: {f}"));
    }
    Ok(report)
}

fn cmd_inf(mode: Option<String>, arity: usize, table: Option<String>) -> Result<Report, CliError> {
    match mode.as_deref() {
        Some("verify") => {
            let summary = boolinf::exhaustive_verify(arity)?;
            let verdict = if summary.failures.is_empty() {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            Ok(Report::new("inf-verify", verdict)
                .payload(json!({
                    "arity": summary.arity,
                    "functions_checked": summary.functions_checked,
                    "failures": summary.failures,
                }))
                .line(format!(
                    "arity {}: {} functions checked, {} failures",
                    summary.arity,
                    summary.functions_checked,
                    summary.failures.len()
                )))
        }
        Some(other) => Err(CliError::input(format!("unknown inf mode `{other}`"))),
        None => {
            let bits = table.ok_or_else(|| CliError::input("--table is required"))?;
            let f = TruthTable::from_bit_string(arity, &bits)?;
            let form = boolinf::inf_synthesize(&f);
            let equivalent = form.to_truth_table() == f;
            let monotone = form.components().iter().all(TruthTable::is_monotone);
            let verdict = if equivalent && monotone {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            let k = form.implication_count();
            let mut report = Report::new("inf", verdict)
                .payload(json!({
                    "arity": arity,
                    "input": f.to_bit_string(),
                    "k": k,
                    "chain": form.chain_notation(),
                    "components": form.components().iter().map(TruthTable::to_bit_string).collect::<Vec<_>>(),
                    "equivalent": equivalent,
                    "monotone_components": monotone,
                }))
                .line(format!("f = {}", f.to_bit_string()))
                .line(format!("normal form: {} with k = {k}", form.chain_notation()));
            for (i, c) in form.components().iter().enumerate() {
                report = report.line(format!("  P{} = {}", k - i, c.to_bit_string()));
            }
            Ok(report)
        }
    }
}

fn marginals_json(m: &lefebvre::Marginals) -> serde_json::Value {
    json!({"x1": m.x1, "x2": m.x2, "x3": m.x3, "z": m.z})
}

fn cmd_ensemble(cmd: EnsembleCmd, global_seed: Option<u64>) -> Result<Report, CliError> {
    match cmd {
        EnsembleCmd::Marginals { p } => {
            let chr = formats::load_ensemble_file(&p)?;
            let m = lefebvre::marginals(&chr);
            Ok(Report::new("ensemble-marginals", Verdict::Info)
                .payload(json!({"p": chr.probabilities().to_vec(), "exact": marginals_json(&m)}))
                .line(format!("x1 = {}, x2 = {}, x3 = {}", m.x1, m.x2, m.x3))
                .line(format!("z  = {}", m.z)))
        }
        EnsembleCmd::Pure { x1, x2, x3 } => {
            let chr = lefebvre::pl_characteristic(x1, x2, x3)?;
            let m = lefebvre::marginals(&chr);
            let f = lefebvre::f_real(x1, x2, x3)?;
            let consistent = (m.z - f).abs() <= EXACT_TOL
                && (m.x1 - x1).abs() <= EXACT_TOL
                && (m.x2 - x2).abs() <= EXACT_TOL
                && (m.x3 - x3).abs() <= EXACT_TOL;
            Ok(Report::new(
                "ensemble-pure",
                if consistent {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                },
            )
            .payload(json!({
                "p": chr.probabilities().to_vec(),
                "exact": marginals_json(&m),
                "f": f,
                "consistent": consistent,
            }))
            .line(format!("p = {:?}", chr.probabilities()))
            .line(format!("z = {} matches f = {f}: {consistent}", m.z)))
        }
        EnsembleCmd::Golden => {
            let root = lefebvre::golden_section_root();
            let chr = lefebvre::golden_ensemble(root)?;
            let m = lefebvre::marginals(&chr);
            let area = lefebvre::realist_truth_area();
            let closed_form = (5f64.sqrt() - 1.0) / 2.0;
            let residual = root * root * root - 2.0 * root + 1.0;
            let mass: f64 = chr.probabilities().iter().sum();
            let support_ok = chr.support().iter().all(|k| area.contains(k));
            let ok = (root - closed_form).abs() <= 1e-10
                && residual.abs() <= 1e-10
                && support_ok
                && (mass - 1.0).abs() <= EXACT_TOL
                && (m.x3 - root).abs() <= EXACT_TOL;
            Ok(Report::new(
                "ensemble-golden",
                if ok { Verdict::Pass } else { Verdict::Fail },
            )
            .payload(json!({
                "root": root,
                "closed_form": closed_form,
                "residual": residual,
                "p": chr.probabilities().to_vec(),
                "exact": marginals_json(&m),
                "truth_area": area,
                "support_in_area": support_ok,
                "fixed_point": (m.x3 - root).abs() <= EXACT_TOL,
            }))
            .line(format!("root = {root}"))
            .line(format!(
                "third marginal = {} (fixed point: {})",
                m.x3,
                (m.x3 - root).abs() <= EXACT_TOL
            ))
            .line(format!(
                "support inside truth area: {support_ok}, total mass {mass}"
            )))
        }
        EnsembleCmd::Sample { p, n, seed } => {
            if n == 0 {
                return Err(CliError::input("--n must be at least 1"));
            }
            let seed = resolve_seed(seed, global_seed)?;
            let chr = formats::load_ensemble_file(&p)?;
            let exact = lefebvre::marginals(&chr);
            let empirical = lefebvre::sample_ensemble(&chr, n, seed);
            let sigma3 = |q: f64| 3.0 * (q * (1.0 - q) / n as f64).sqrt();
            let within = (empirical.x1 - exact.x1).abs() <= sigma3(exact.x1)
                && (empirical.x2 - exact.x2).abs() <= sigma3(exact.x2)
                && (empirical.x3 - exact.x3).abs() <= sigma3(exact.x3)
                && (empirical.z - exact.z).abs() <= sigma3(exact.z);
            Ok(Report::new(
                "ensemble-sample",
                if within { Verdict::Pass } else { Verdict::Fail },
            )
            .payload(json!({
                "n": n,
                "seed": seed,
                "exact": marginals_json(&exact),
                "empirical": marginals_json(&empirical),
                "within_three_sigma": within,
            }))
            .line(format!(
                "exact:     x1 = {}, x2 = {}, x3 = {}, z = {}",
                exact.x1, exact.x2, exact.x3, exact.z
            ))
            .line(format!(
                "empirical: x1 = {}, x2 = {}, x3 = {}, z = {}",
                empirical.x1, empirical.x2, empirical.x3, empirical.z
            ))
            .line(format!("within three sigma: {within}")))
        }
        EnsembleCmd::Region {
            x1,
            x2,
            x3,
            samples,
            seed,
        } => {
            let seed = resolve_seed(seed, global_seed)?;
            let scan = lefebvre::equality_region_scan(x1, x2, x3, samples, seed)?;
            Ok(Report::new("ensemble-region", Verdict::Info)
                .payload(json!({
                    "marginals": {"x1": x1, "x2": x2, "x3": x3},
                    "f": scan.f_value,
                    "vertices": scan.vertices,
                    "samples": scan.samples,
                    "worst_deviation": scan.worst_deviation,
                    "worst_p": scan.worst.probabilities().to_vec(),
                    "holds_for_all": scan.holds_for_all,
                }))
                .line(format!(
                    "f = {}, worst |z - f| = {} over {} vertices and {} samples",
                    scan.f_value, scan.worst_deviation, scan.vertices, scan.samples
                ))
                .line(format!(
                    "equality holds for every characteristic: {}",
                    scan.holds_for_all
                )))
        }
    }
}

fn cmd_choice(
    mode: Option<String>,
    x1: Option<u8>,
    x2: Option<u8>,
    x3: Option<u8>,
    algorithm: Option<String>,
) -> Result<Report, CliError> {
    match mode.as_deref() {
        Some("table") => {
            let rows = choice::choice_table();
            let chain = choice::StateChain::standard();
            let mut diffs = Vec::new();
            for (i, (row, &(es, ev, as_, av))) in
                rows.iter().zip(&choice::EXPECTED_TABLE).enumerate()
            {
                if (
                    row.exact_state,
                    row.exact_value,
                    row.approx_state,
                    row.approx_value,
                ) != (es, ev, as_, av)
                {
                    diffs.push(format!("row {i:03b} differs from the expected table"));
                }
            }
            let verdict = if diffs.is_empty() {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            let mut table = vec![vec![
                "x1".into(),
                "x2".into(),
                "x3".into(),
                "exact z".into(),
                "F".into(),
                "approx z".into(),
                "f".into(),
            ]];
            for row in &rows {
                table.push(vec![
                    u8::from(row.intent.b1).to_string(),
                    u8::from(row.intent.b2).to_string(),
                    u8::from(row.intent.b3).to_string(),
                    chain.state_name(row.exact_state).to_string(),
                    u8::from(row.exact_value).to_string(),
                    chain.state_name(row.approx_state).to_string(),
                    u8::from(row.approx_value).to_string(),
                ]);
            }
            let payload_rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "intent": [r.intent.b1, r.intent.b2, r.intent.b3],
                        "exact_state": chain.state_name(r.exact_state),
                        "exact_value": r.exact_value,
                        "approx_state": chain.state_name(r.approx_state),
                        "approx_value": r.approx_value,
                    })
                })
                .collect();
            Ok(Report::new("choice-table", verdict)
                .payload(json!({"rows": payload_rows, "diff": diffs}))
                .lines(aligned_table(&table))
                .diagnostics(diffs)
                .line("the two algorithms differ exactly at intent 011"))
        }
        Some(other) => Err(CliError::input(format!("unknown choice mode `{other}`"))),
        None => {
            let (x1, x2, x3) = match (x1, x2, x3) {
                (Some(a), Some(b), Some(c)) => (a == 1, b == 1, c == 1),
                _ => return Err(CliError::input("--x1, --x2, --x3 are required")),
            };
            let t = choice::IntentTriple::new(x1, x2, x3);
            let trace = match algorithm.as_deref() {
                Some("exact") => choice::run_exact(t),
                Some("approx") => choice::run_approx(t),
                Some(other) => return Err(CliError::input(format!("unknown algorithm `{other}`"))),
                None => return Err(CliError::input("--algorithm is required")),
            };
            let chain = choice::StateChain::standard();
            let stages: Vec<String> = trace
                .stage_states
                .iter()
                .map(|&s| chain.state_name(s).to_string())
                .collect();
            Ok(Report::new("choice", Verdict::Info)
                .payload(json!({
                    "intent": [x1, x2, x3],
                    "algorithm": algorithm,
                    "stage_states": stages,
                    "chosen": chain.state_name(trace.chosen),
                    "chosen_value": trace.chosen_value,
                }))
                .line(format!("stages: {}", stages.join(" -> ")))
                .line(format!(
                    "chosen {} with value {}",
                    chain.state_name(trace.chosen),
                    u8::from(trace.chosen_value)
                )))
        }
    }
}
