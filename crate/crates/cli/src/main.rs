//! `cbr`: choice-by-rejection analysis of finite choice data.
//!
//! Exit codes: 0 on success or pass, 1 on an axiom or verification failure,
//! 2 on an input or usage error.

mod render;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use cbr_core::axioms::{report, AxiomVerdict};
use cbr_core::identification::{
    identify, IdentificationError, IdentificationReport, DEFAULT_RMAX_CAP,
};
use cbr_core::oracle::{
    classify, enumerate_rationales, representations, sweep, ChoiceSpace, ClassificationProfile,
    Oracle, RationaleKind, RepresentationIndex, SweepId, SweepOptions, SweepReport,
    RSM_EXHAUSTION_MAX,
};
use cbr_core::representation::{
    synthesize_cbr, synthesize_tcbr, verify, Flavor, RepresentationDocument, SynthesisError,
    Verification,
};
use cbr_core::reversals::{
    double_reversals, find_reversals, revealed_relation, RevealedMode, ReversalChain,
};
use cbr_core::{BinaryRelation, ChoiceFunction, Reversal};

use render::Labels;

#[derive(Parser)]
#[command(
    name = "cbr",
    version,
    about = "Choice-by-rejection analysis of finite choice data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Require a linear second rationale (T-CBR).
    #[arg(long = "transitive-p", global = true)]
    transitive_p: bool,
    /// Cross-check against brute-force enumeration.
    #[arg(long, global = true)]
    oracle: bool,
    /// Universe size for population-level commands.
    #[arg(long = "n", value_name = "K", global = true)]
    n: Option<usize>,
    /// Sweep id to run (all sweeps when absent).
    #[arg(long, value_name = "ID", global = true)]
    check: Option<String>,
    /// Seed for sampled sweeps.
    #[arg(long, value_name = "S", default_value_t = 0, global = true)]
    seed: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long, value_name = "N", global = true)]
    threads: Option<usize>,
    /// Cap on listed maximal rationales and representations.
    #[arg(long, value_name = "M", default_value_t = DEFAULT_RMAX_CAP, global = true)]
    cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a choice document and report its shape.
    Validate { file: PathBuf },
    /// Evaluate every axiom, with witnesses for failures.
    Axioms { file: PathBuf },
    /// List reversals, revealed relations and double reversals.
    Reversals { file: PathBuf },
    /// Synthesize and verify a representation.
    Represent { file: PathBuf },
    /// Compute the identification bounds on the rationales.
    Identify { file: PathBuf },
    /// Decide membership in each two-stage model.
    Classify { file: PathBuf },
    /// Enumerate representations of a file, or population counts with --n.
    Oracle { file: Option<PathBuf> },
    /// Run exhaustive sweeps over every choice function of size --n.
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = Result<Outcome, InputError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let line = text
                .lines()
                .next()
                .unwrap_or("usage error")
                .trim_start_matches("error: ");
            eprintln!("cbr: {line}");
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(InputError(msg)) => {
            eprintln!("cbr: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(InputError("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()?;
    }
    match &cli.command {
        Command::Validate { file } => validate(cli, &load(file)?),
        Command::Axioms { file } => axioms(cli, &load(file)?),
        Command::Reversals { file } => reversals(cli, &load(file)?),
        Command::Represent { file } => represent(cli, &load(file)?),
        Command::Identify { file } => identification(cli, &load(file)?),
        Command::Classify { file } => classification(cli, &load(file)?),
        Command::Oracle { file: Some(file) } => oracle_file(cli, &load(file)?),
        Command::Oracle { file: None } => oracle_population(cli),
        Command::Sweep => sweeps(cli),
    }
}

fn load(path: &Path) -> Result<ChoiceFunction, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
    ChoiceFunction::parse(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(value: &T) -> Result<(), InputError> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn flavor(cli: &Cli) -> Flavor {
    if cli.transitive_p {
        Flavor::Tcbr
    } else {
        Flavor::Cbr
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn print_verdict(labels: &Labels, v: &AxiomVerdict) {
    let status = if v.pass { "PASS" } else { "FAIL" };
    match &v.witness {
        Some(w) => println!(
            "{status}  {:<18} {}",
            v.axiom.display_name(),
            labels.witness(w)
        ),
        None => println!("{status}  {}", v.axiom.display_name()),
    }
}

#[derive(Serialize)]
struct ValidateOutput<'a> {
    valid: bool,
    alternatives: &'a [String],
    menus: usize,
}

fn validate(cli: &Cli, c: &ChoiceFunction) -> CmdResult {
    let menus = c.nontrivial_menus().len();
    if cli.json {
        emit(&ValidateOutput {
            valid: true,
            alternatives: c.universe().labels(),
            menus,
        })?;
    } else {
        println!(
            "valid: {} alternatives {}, {menus} menus",
            c.size(),
            c.universe().format_menu(c.universe().full_menu())
        );
    }
    Ok(Outcome::Pass)
}

fn axioms(cli: &Cli, c: &ChoiceFunction) -> CmdResult {
    let rep = report(c);
    let pass = if cli.transitive_p {
        rep.tcbr_representable
    } else {
        rep.cbr_representable
    };
    if cli.json {
        emit(&rep)?;
    } else {
        let labels = Labels::new(c);
        println!("alternatives: {}", rep.alternatives.join(", "));
        for v in rep.axioms.values() {
            print_verdict(&labels, v);
        }
        let doubles: Vec<String> = rep
            .reversals
            .double_reversal_pairs
            .iter()
            .map(|&p| labels.pair(p))
            .collect();
        println!(
            "reversals: {} weak, {} strong; double reversals on [{}]",
            rep.reversals.weak,
            rep.reversals.strong,
            doubles.join(", ")
        );
        println!("CBR representable: {}", yes_no(rep.cbr_representable));
        println!("T-CBR representable: {}", yes_no(rep.tcbr_representable));
    }
    Ok(Outcome::from_pass(pass))
}

#[derive(Serialize)]
struct ReversalsOutput<'a> {
    alternatives: &'a [String],
    reversals: Vec<Reversal>,
    revealed_full_menu: BinaryRelation,
    revealed_small_menu: BinaryRelation,
    double_reversals: Vec<ReversalChain>,
}

fn reversals(cli: &Cli, c: &ChoiceFunction) -> CmdResult {
    let out = ReversalsOutput {
        alternatives: c.universe().labels(),
        reversals: find_reversals(c),
        revealed_full_menu: revealed_relation(c, RevealedMode::FullMenu),
        revealed_small_menu: revealed_relation(c, RevealedMode::SmallMenu),
        double_reversals: double_reversals(c),
    };
    if cli.json {
        emit(&out)?;
    } else {
        let labels = Labels::new(c);
        println!("reversals: {}", out.reversals.len());
        for r in &out.reversals {
            println!("  {}", labels.reversal(r));
        }
        println!(
            "revealed (all menus): {}",
            labels.relation(&out.revealed_full_menu)
        );
        println!(
            "revealed (small menus): {}",
            labels.relation(&out.revealed_small_menu)
        );
        println!("double reversals: {}", out.double_reversals.len());
        for chain in &out.double_reversals {
            println!("  {}: {}", labels.pair(chain.pair), labels.chain(chain));
        }
    }
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct OracleCheck {
    representations: usize,
    includes_synthesized: bool,
}

#[derive(Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
enum RepresentOutput {
    Synthesized {
        representation: RepresentationDocument,
        verification: Verification,
        oracle: Option<OracleCheck>,
    },
    AxiomFailure {
        alternatives: Vec<String>,
        verdict: AxiomVerdict,
    },
    InternalInvariantBreach {
        reason: String,
        candidate: RepresentationDocument,
    },
}

fn represent(cli: &Cli, c: &ChoiceFunction) -> CmdResult {
    let flavor = flavor(cli);
    let universe = c.universe();
    let synthesized = match flavor {
        Flavor::Tcbr => synthesize_tcbr(c),
        _ => synthesize_cbr(c),
    };
    let (out, pass) = match synthesized {
        Ok(rep) => {
            let verification = verify(c, &rep);
            let oracle = if cli.oracle {
                let found = representations(c, flavor, usize::MAX)?;
                Some(OracleCheck {
                    representations: found.total,
                    includes_synthesized: found.pairs.contains(&rep),
                })
            } else {
                None
            };
            let pass = verification.pass && oracle.as_ref().is_none_or(|o| o.includes_synthesized);
            let out = RepresentOutput::Synthesized {
                representation: rep.to_document(universe),
                verification,
                oracle,
            };
            (out, pass)
        }
        Err(SynthesisError::AxiomFailure(verdict)) => (
            RepresentOutput::AxiomFailure {
                alternatives: universe.labels().to_vec(),
                verdict: *verdict,
            },
            false,
        ),
        Err(SynthesisError::InternalInvariantBreach { reason, candidate }) => (
            RepresentOutput::InternalInvariantBreach {
                reason,
                candidate: candidate.to_document(universe),
            },
            false,
        ),
    };
    if cli.json {
        emit(&out)?;
        return Ok(Outcome::from_pass(pass));
    }
    let labels = Labels::new(c);
    match &out {
        RepresentOutput::Synthesized {
            representation,
            verification,
            oracle,
        } => {
            let pairs = |ps: &[[String; 2]]| {
                ps.iter()
                    .map(|[a, b]| format!("({a},{b})"))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            println!("flavor: {}", representation.flavor);
            println!("R = {{{}}}", pairs(&representation.first));
            println!("P = {{{}}}", pairs(&representation.second));
            if verification.pass {
                println!("verified on all {} menus", c.nontrivial_menus().len());
            } else {
                for m in &verification.mismatches {
                    println!(
                        "mismatch on {}: expected {}, got {:?}",
                        labels.menu(m.menu),
                        labels.alt(m.expected),
                        m.got.chosen().map(|a| labels.alt(a))
                    );
                }
            }
            if let Some(o) = oracle {
                println!(
                    "oracle: {} representations, synthesized pair {}",
                    o.representations,
                    if o.includes_synthesized {
                        "found"
                    } else {
                        "missing"
                    }
                );
            }
        }
        RepresentOutput::AxiomFailure { verdict, .. } => {
            println!("not {flavor} representable");
            print_verdict(&labels, verdict);
        }
        RepresentOutput::InternalInvariantBreach { reason, candidate } => {
            println!("internal invariant breach: {reason}");
            println!("candidate: {}", serde_json::to_string(candidate)?);
        }
    }
    Ok(Outcome::from_pass(pass))
}

#[derive(Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
enum IdentifyOutput {
    Identified(IdentificationReport),
    NotRepresentable {
        alternatives: Vec<String>,
        verdict: AxiomVerdict,
    },
    RevealedModeMismatch {
        alternatives: Vec<String>,
    },
}

fn identification(cli: &Cli, c: &ChoiceFunction) -> CmdResult {
    let alternatives = c.universe().labels().to_vec();
    let out = match identify(c, cli.cap) {
        Ok(rep) => IdentifyOutput::Identified(rep),
        Err(IdentificationError::NotRepresentable(verdict)) => IdentifyOutput::NotRepresentable {
            alternatives,
            verdict: *verdict,
        },
        Err(IdentificationError::RevealedModeMismatch) => {
            IdentifyOutput::RevealedModeMismatch { alternatives }
        }
    };
    let pass = matches!(out, IdentifyOutput::Identified(_));
    if cli.json {
        emit(&out)?;
        return Ok(Outcome::from_pass(pass));
    }
    let labels = Labels::new(c);
    match &out {
        IdentifyOutput::Identified(rep) => {
            println!(
                "minimal first rationale R^c: {}",
                labels.relation(&rep.r_min)
            );
            println!(
                "forced second-rationale pairs P^c: {}",
                labels.relation(&rep.p_min)
            );
            println!("excluded pairs Q: {}", labels.relation(&rep.q_hat));
            let suffix = if rep.truncated { " (truncated)" } else { "" };
            println!("maximal first rationales: {}{suffix}", rep.r_max.len());
            for r in &rep.r_max {
                println!("  {}", labels.relation(r));
            }
        }
        IdentifyOutput::NotRepresentable { verdict, .. } => {
            println!("not CBR representable");
            print_verdict(&labels, verdict);
        }
        IdentifyOutput::RevealedModeMismatch { .. } => {
            println!("revealed relations from small and full menus disagree");
        }
    }
    Ok(Outcome::from_pass(pass))
}

fn classification(cli: &Cli, c: &ChoiceFunction) -> CmdResult {
    let profile: ClassificationProfile = classify(c, &Oracle::new())?;
    let pass = profile.disagreements.is_empty();
    if cli.json {
        emit(&profile)?;
    } else {
        for (model, representable) in &profile.representable {
            let json = serde_json::to_value(model)?;
            let name = json.as_str().unwrap_or_default();
            let how = serde_json::to_value(profile.decided_by[model])?;
            println!(
                "{name:<14} {:<4} ({})",
                yes_no(*representable),
                how.as_str().unwrap_or_default()
            );
        }
        println!(
            "weak reversals: {}, strong reversals: {}",
            profile.reversals.weak, profile.reversals.strong
        );
        for model in &profile.disagreements {
            println!(
                "axioms and exhaustion disagree on {}",
                serde_json::to_value(model)?
            );
        }
    }
    Ok(Outcome::from_pass(pass))
}

#[derive(Serialize)]
struct OracleFileOutput {
    flavor: Flavor,
    total: usize,
    listed: Vec<RepresentationDocument>,
}

fn oracle_file(cli: &Cli, c: &ChoiceFunction) -> CmdResult {
    let flavor = flavor(cli);
    let found = representations(c, flavor, cli.cap)?;
    let out = OracleFileOutput {
        flavor,
        total: found.total,
        listed: found
            .pairs
            .iter()
            .map(|p| p.to_document(c.universe()))
            .collect(),
    };
    if cli.json {
        emit(&out)?;
    } else {
        let labels = Labels::new(c);
        println!("{flavor} representations: {}", found.total);
        for p in &found.pairs {
            println!(
                "  R = {}  P = {}",
                labels.relation(&p.first),
                labels.relation(&p.second)
            );
        }
        if found.total > found.pairs.len() {
            println!("  ... {} more", found.total - found.pairs.len());
        }
    }
    Ok(Outcome::from_pass(found.total > 0))
}

#[derive(Serialize)]
struct PopulationOutput {
    n: usize,
    rationales: BTreeMap<String, usize>,
    choice_functions: Option<usize>,
    representable: BTreeMap<Flavor, usize>,
}

fn oracle_population(cli: &Cli) -> CmdResult {
    let n = cli
        .n
        .ok_or_else(|| InputError("oracle needs a FILE or --n".into()))?;
    let mut rationales = BTreeMap::new();
    for (name, kind) in [
        ("partial_orders", RationaleKind::PartialOrder),
        ("tournaments", RationaleKind::Tournament),
        ("linear_orders", RationaleKind::LinearOrder),
        ("asymmetric", RationaleKind::Asymmetric),
    ] {
        rationales.insert(name.to_string(), enumerate_rationales(n, kind)?.len());
    }
    let choice_functions = ChoiceSpace::new(n).ok().map(|s| s.len());
    let mut representable = BTreeMap::new();
    for flavor in Flavor::ALL {
        if flavor == Flavor::Rsm && n > RSM_EXHAUSTION_MAX {
            continue;
        }
        representable.insert(
            flavor,
            RepresentationIndex::build(n, flavor)?.representable_count(),
        );
    }
    let out = PopulationOutput {
        n,
        rationales,
        choice_functions,
        representable,
    };
    if cli.json {
        emit(&out)?;
    } else {
        println!("n = {n}");
        for (name, count) in &out.rationales {
            println!("{name:<20} {count}");
        }
        if let Some(total) = out.choice_functions {
            println!("{:<20} {total}", "choice_functions");
        }
        for (flavor, count) in &out.representable {
            println!("{:<20} {count}", format!("{flavor}_representable"));
        }
    }
    Ok(Outcome::Pass)
}

fn sweeps(cli: &Cli) -> CmdResult {
    let n = cli.n.unwrap_or(3);
    let ids: Vec<SweepId> = match &cli.check {
        Some(id) => vec![id.parse::<SweepId>().map_err(InputError)?],
        None => SweepId::ALL.to_vec(),
    };
    let opts = SweepOptions {
        seed: cli.seed,
        rmax_cap: cli.cap,
        ..SweepOptions::default()
    };
    let reports: Vec<SweepReport> = ids
        .iter()
        .map(|&id| sweep(n, id, &opts))
        .collect::<Result<_, _>>()?;
    let pass = reports.iter().all(SweepReport::passed);
    if cli.json {
        emit(&reports)?;
    } else {
        for r in &reports {
            println!(
                "{} {} n={}: population {}, {} counterexamples",
                if r.passed() { "PASS" } else { "FAIL" },
                r.sweep,
                r.n,
                r.population,
                r.counterexample_total()
            );
            let counts: Vec<String> = r.counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
            println!("  {}", counts.join(" "));
            for ce in r.counterexamples.iter().take(5) {
                println!("  counterexample {}: {}", ce.function, ce.detail);
            }
        }
    }
    Ok(Outcome::from_pass(pass))
}
