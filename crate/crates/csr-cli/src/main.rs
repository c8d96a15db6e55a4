//! `csr` — command-line front end for the committee scoring toolkit.
//!
//! Exit codes: 0 = ok / verified, 1 = counterexample, 2 = input or usage
//! error, 3 = partial verification (budget exhausted). Every invocation is
//! deterministic given its flags, including seeds and `--threads`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use csr::axioms::{self, AuditOutcome, SearchDomain};
use csr::classify::{self, ClassReport, Verdict};
use csr::fixtures;
use csr::model::Election;
use csr::scoring::{parse_rule, score_of, Rule, ScoreTable};
use csr::solve;

#[derive(Parser)]
#[command(
    name = "csr",
    version,
    about = "Committee scoring rules: winners, scores, classification, axiom audits, generators"
)]
struct Cli {
    /// Worker threads for audits (0 = all cores; 1 = fully serial).
    /// Results are identical regardless of the thread count.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the winning committees of an election.
    Winners(WinnersArgs),
    /// Compute one committee's score.
    Score(ScoreArgs),
    /// Classify a scoring table into the structural hierarchy.
    Classify(ClassifyArgs),
    /// Audit a monotonicity axiom over a bounded election domain.
    Audit(AuditArgs),
    /// Generate elections and scoring tables.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Args)]
struct WinnersArgs {
    /// Rule spec (sntv | bloc | kborda | cc-borda | cc-approval | pav:<t> |
    /// qhb:<q> | lpborda:<p> | perfectionist | sntv+perf | trivial |
    /// multithreshold:<l1,..>;<t1,..> | maxthreshold:<t1,..> | table:<path>).
    #[arg(long)]
    rule: String,
    #[arg(short)]
    k: usize,
    /// Election file in the .elec format.
    #[arg(long)]
    election: PathBuf,
    /// exact (enumerate all committees), separable (per-candidate fast
    /// path), or greedy (one committee, (1-1/e) guarantee when eligible).
    #[arg(long, default_value = "exact")]
    method: String,
    /// Print the number of winning committees instead of listing them.
    #[arg(long)]
    count_only: bool,
    /// With --method greedy: also solve exactly and print the score ratio.
    #[arg(long)]
    compare_exact: bool,
    /// Run greedy on ineligible rules (no approximation guarantee).
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    rule: String,
    #[arg(short)]
    k: usize,
    #[arg(long)]
    election: PathBuf,
    /// Committee as comma-separated candidate tokens, e.g. a,b.
    #[arg(long)]
    committee: String,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Scoring table in the .fmk format.
    #[arg(long)]
    table: PathBuf,
    /// all | weakly-separable | separable | rep-focused | top-k | owa |
    /// decomposable.
    #[arg(long, default_value = "all")]
    class: String,
}

#[derive(Args)]
struct AuditArgs {
    /// non-crossing | prefix:<t> | top-member | narrow-top | enlargement |
    /// candidate | consistency | nonimposition.
    #[arg(long)]
    axiom: String,
    #[arg(long)]
    rule: String,
    #[arg(long)]
    max_m: usize,
    #[arg(long, default_value_t = 1)]
    max_n: u64,
    /// Fix the committee size (default: all k up to m-1).
    #[arg(short)]
    k: Option<usize>,
    /// Pin the smallest candidate count (default 2; table rules need m
    /// fixed).
    #[arg(long)]
    min_m: Option<usize>,
    #[arg(long, default_value = "exhaustive")]
    mode: String,
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    #[arg(long)]
    seed: Option<u64>,
    /// Budget in scoring-function evaluations.
    #[arg(long, default_value_t = axioms::DEFAULT_EVAL_BUDGET)]
    budget: u64,
    /// Report the counterexample as found, without greedy minimization.
    #[arg(long)]
    no_minimize: bool,
}

#[derive(Subcommand)]
enum GenCommand {
    /// The (m-1)!-vote election that ranks one candidate first everywhere.
    Zeta(GenZetaArgs),
    /// Concatenation of zeta elections over a candidate set.
    ZetaSet(GenZetaSetArgs),
    /// The all-permutations election (m! unit votes).
    Perms(GenPermsArgs),
    /// An election whose only winners are two committees sharing k-1
    /// members.
    TwoWinner(GenTwoWinnerArgs),
    /// Impartial culture: n rankings drawn uniformly, seeded.
    Ic(GenIcArgs),
    /// Tabulate a rule into a .fmk scoring table.
    Table(GenTableArgs),
}

#[derive(Args)]
struct GenZetaArgs {
    #[arg(long, value_delimiter = ',')]
    candidates: Vec<String>,
    #[arg(long)]
    center: String,
    #[arg(short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenZetaSetArgs {
    #[arg(long, value_delimiter = ',')]
    candidates: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    set: Vec<String>,
    #[arg(short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenPermsArgs {
    #[arg(long, value_delimiter = ',')]
    candidates: Vec<String>,
    #[arg(short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenTwoWinnerArgs {
    #[arg(long, value_delimiter = ',')]
    candidates: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    w1: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    w2: Vec<String>,
    #[arg(short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenIcArgs {
    #[arg(long, value_delimiter = ',')]
    candidates: Vec<String>,
    #[arg(short)]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[arg(short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenTableArgs {
    #[arg(long)]
    rule: String,
    #[arg(short)]
    m: usize,
    #[arg(short)]
    k: usize,
    #[arg(short)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // Ignore failures from double initialization (tests may share a
        // process).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> csr::Result<ExitCode> {
    match command {
        Command::Winners(args) => cmd_winners(args),
        Command::Score(args) => cmd_score(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Audit(args) => cmd_audit(args),
        Command::Gen(args) => cmd_gen(args),
    }
}

fn load_election(path: &PathBuf) -> csr::Result<Election> {
    let text = std::fs::read_to_string(path)?;
    Election::parse(&text)
}

fn committee_line(e: &Election, c: &csr::model::Committee) -> String {
    format!("{{{}}}", e.committee_tokens(c).join(","))
}

fn cmd_winners(args: WinnersArgs) -> csr::Result<ExitCode> {
    let election = load_election(&args.election)?;
    let rule = parse_rule(&args.rule, election.num_candidates(), args.k)?;
    match args.method.as_str() {
        "exact" | "separable" => {
            if args.method == "separable" && args.count_only {
                let count = solve::winners_separable_count(&election, &rule, args.k)?;
                let ws = solve::winners_separable(&election, &rule, args.k)?;
                println!("optimum={}", ws.optimum);
                println!("count={count}");
                return Ok(ExitCode::SUCCESS);
            }
            let ws = if args.method == "exact" {
                solve::winners_exact(&election, &rule, args.k)?
            } else {
                solve::winners_separable(&election, &rule, args.k)?
            };
            println!("optimum={}", ws.optimum);
            if args.count_only {
                println!("count={}", ws.committees.len());
            } else {
                let mut lines: Vec<String> = ws
                    .committees
                    .iter()
                    .map(|c| committee_line(&election, c))
                    .collect();
                lines.sort();
                for line in lines {
                    println!("{line}");
                }
            }
        }
        "greedy" => {
            let result = solve::winners_greedy(&election, &rule, args.k, args.force)?;
            println!("greedy={}", committee_line(&election, &result.committee));
            println!("score={}", result.score);
            println!(
                "guarantee={}",
                if result.guaranteed { "1-1/e" } else { "none" }
            );
            if args.compare_exact {
                let exact = solve::winners_exact(&election, &rule, args.k)?;
                let ratio = result.score.to_f64() / exact.optimum.to_f64();
                println!("optimum={}", exact.optimum);
                println!("ratio={}", csr::scoring::Score::Real(ratio));
            }
        }
        other => {
            return Err(csr::Error::Input(format!(
                "unknown method {other:?} (expected exact, separable, or greedy)"
            )));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_score(args: ScoreArgs) -> csr::Result<ExitCode> {
    let election = load_election(&args.election)?;
    let tokens: Vec<&str> = args.committee.split(',').map(|t| t.trim()).collect();
    if tokens.len() != args.k {
        return Err(csr::Error::Input(format!(
            "committee has {} members, -k says {}",
            tokens.len(),
            args.k
        )));
    }
    let committee = election.committee_from_tokens(&tokens)?;
    let rule = parse_rule(&args.rule, election.num_candidates(), args.k)?;
    let f = rule.scoring_function(election.num_candidates(), args.k)?;
    let score = score_of(&election, &f, &committee)?;
    println!("{score}");
    Ok(ExitCode::SUCCESS)
}

fn verdict_line(class: &str, verdict: &Verdict) -> String {
    let mut line = format!("class={class} verdict={}", verdict.label());
    match verdict {
        Verdict::Member(w) => line.push_str(&format!(" witness={w}")),
        Verdict::NonMember(c) => line.push_str(&format!(" certificate={c}")),
        Verdict::Unknown(reason) => line.push_str(&format!(" reason={reason}")),
    }
    line
}

fn cmd_classify(args: ClassifyArgs) -> csr::Result<ExitCode> {
    let table = ScoreTable::load(&args.table)?;
    let report: ClassReport = classify::classify_all(&table);
    println!(
        "table={} m={} k={} float={} degenerate={}",
        args.table.display(),
        table.m(),
        table.k(),
        report.approx,
        report.degenerate
    );
    let selected = args.class.as_str();
    let known = [
        "all",
        "weakly-separable",
        "separable",
        "rep-focused",
        "top-k",
        "owa",
        "decomposable",
    ];
    if !known.contains(&selected) {
        return Err(csr::Error::Input(format!(
            "unknown class {selected:?} (expected one of {})",
            known.join(", ")
        )));
    }
    let emit = |name: &str, verdict: &Verdict| {
        if selected == "all" || selected == name {
            println!("{}", verdict_line(name, verdict));
        }
    };
    emit("weakly-separable", &report.weakly_separable);
    if selected == "all" || selected == "separable" {
        // A single (m, k) table cannot decide separability across sizes.
        println!(
            "class=separable verdict=unknown reason=separability compares witnesses \
             across every committee size; classify a rule, not a single table"
        );
    }
    emit("rep-focused", &report.representation_focused);
    emit("top-k", &report.top_k_counting);
    emit("owa", &report.owa_based);
    emit("decomposable", &report.decomposable);
    Ok(ExitCode::SUCCESS)
}

fn cmd_audit(args: AuditArgs) -> csr::Result<ExitCode> {
    let rule = Rule::parse(&args.rule)?;

    // Nonimposition audits (m, k) pairs via witness elections, not a
    // profile domain.
    if args.axiom == "nonimposition" {
        let m = args.max_m;
        let ks: Vec<usize> = match args.k {
            Some(k) => vec![k],
            None => (1..m).collect(),
        };
        for k in ks {
            let outcome = axioms::audit_nonimposition(&rule, m, k, args.budget)?;
            let desc = format!("m={m},k={k},witness=zeta");
            let code = report_outcome(
                "nonimposition",
                &args.rule,
                &desc,
                &outcome,
                args.no_minimize,
            )?;
            if code != ExitCode::SUCCESS {
                return Ok(code);
            }
        }
        return Ok(ExitCode::SUCCESS);
    }

    let mut domain = match args.mode.as_str() {
        "exhaustive" => SearchDomain::exhaustive(args.max_m, args.max_n),
        "random" => {
            let seed = args.seed.ok_or_else(|| {
                csr::Error::Input("random mode requires an explicit --seed".into())
            })?;
            SearchDomain::random(args.max_m, args.max_n, args.samples, seed)
        }
        other => {
            return Err(csr::Error::Input(format!(
                "unknown mode {other:?} (expected exhaustive or random)"
            )));
        }
    };
    domain = domain.with_budget(args.budget);
    if let Some(k) = args.k {
        domain = domain.with_k(k);
    }
    if let Some(min_m) = args.min_m {
        domain = domain.with_min_m(min_m);
    }

    let outcome = match args.axiom.as_str() {
        "non-crossing" => axioms::audit_non_crossing(&rule, &domain)?,
        "top-member" => axioms::audit_prefix(&rule, 1, &domain)?,
        "narrow-top" => axioms::audit_narrow_top(&rule, &domain)?,
        "enlargement" => axioms::audit_committee_enlargement(&rule, &domain)?,
        "candidate" => axioms::audit_candidate_monotonicity(&rule, &domain)?,
        "consistency" => axioms::audit_consistency(&rule, &domain)?,
        other => match other.strip_prefix("prefix:") {
            Some(t) => {
                let t: usize = t
                    .parse()
                    .map_err(|_| csr::Error::Input(format!("bad prefix depth {t:?}")))?;
                axioms::audit_prefix(&rule, t, &domain)?
            }
            None => {
                return Err(csr::Error::Input(format!("unknown axiom {other:?}")));
            }
        },
    };
    let desc = domain.describe();
    report_outcome(&args.axiom, &args.rule, &desc, &outcome, args.no_minimize)
}

fn report_outcome(
    axiom: &str,
    rule_spec: &str,
    domain_desc: &str,
    outcome: &AuditOutcome,
    no_minimize: bool,
) -> csr::Result<ExitCode> {
    match outcome {
        AuditOutcome::Verified { .. } => {
            println!("axiom={axiom} rule={rule_spec} verdict=verified domain={domain_desc}");
            Ok(ExitCode::SUCCESS)
        }
        AuditOutcome::Counterexample(ce) => {
            let reported = if no_minimize {
                (**ce).clone()
            } else {
                axioms::minimize_counterexample(ce)?
            };
            println!("axiom={axiom} rule={rule_spec} verdict=counterexample domain={domain_desc}");
            print!("{}", reported.render());
            Ok(ExitCode::from(1))
        }
        AuditOutcome::Partial {
            checked_elections,
            evals,
            budget,
            ..
        } => {
            println!("axiom={axiom} rule={rule_spec} verdict=partial domain={domain_desc}");
            println!("checked={checked_elections} evals={evals} budget={budget}");
            Ok(ExitCode::from(3))
        }
    }
}

fn write_output(output: Option<PathBuf>, content: String) -> csr::Result<ExitCode> {
    match output {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn as_refs(tokens: &[String]) -> Vec<&str> {
    tokens.iter().map(|s| s.as_str()).collect()
}

fn cmd_gen(command: GenCommand) -> csr::Result<ExitCode> {
    match command {
        GenCommand::Zeta(args) => {
            let e = fixtures::zeta_candidate(&as_refs(&args.candidates), &args.center)?;
            write_output(args.output, e.to_string())
        }
        GenCommand::ZetaSet(args) => {
            let e = fixtures::zeta_set(&as_refs(&args.candidates), &as_refs(&args.set))?;
            write_output(args.output, e.to_string())
        }
        GenCommand::Perms(args) => {
            let e = fixtures::all_permutations(&as_refs(&args.candidates))?;
            write_output(args.output, e.to_string())
        }
        GenCommand::TwoWinner(args) => {
            let e = fixtures::two_winner_election(
                &as_refs(&args.candidates),
                &as_refs(&args.w1),
                &as_refs(&args.w2),
            )?;
            write_output(args.output, e.to_string())
        }
        GenCommand::Ic(args) => {
            let e = fixtures::impartial_culture(&as_refs(&args.candidates), args.n, args.seed)?;
            write_output(args.output, e.to_string())
        }
        GenCommand::Table(args) => {
            let rule = parse_rule(&args.rule, args.m, args.k)?;
            let table = rule.scoring_function(args.m, args.k)?.tabulate()?;
            write_output(args.output, table.to_string())
        }
    }
}
