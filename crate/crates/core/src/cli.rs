//! The `stepworld` command line.
//!
//! Exit codes: 0 success (or a good world), 1 usage/IO/parse errors, 2 search
//! found no winner within its caps, 3 the world has fatal errors, 4 the
//! analysis does not support the input (stochastic worlds).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::agents::{
    bit_length, make_baseline, parse_policies, policy_count, Agent, BaselineKind, LearnerParams, PolicyCode,
    TransducerPolicy,
};
use crate::error::{Error, Result};
use crate::life::run_life;
use crate::meaning::life_value;
use crate::search::{dovetail_search, parse_suite, search_ai, SearchReport, TestSuite, TestWorldSpec};
use crate::tree::{expand_life_tree_capped, expand_state_tree_capped, DEFAULT_NODE_CAP};
use crate::worlds::{analyze_good_world, builtin_world, complexity_proxy, parse_world, Verdict, WorldFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NO_WINNER: i32 = 2;
pub const EXIT_FATAL: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "stepworld", version, about = "Agents, worlds, trees of life and shortest-policy search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Live one life and print a per-step trace.
    RunLife(RunLifeArgs),
    /// Search for the shortest policy passing a suite.
    Search(SearchArgs),
    /// Check a world for fatal errors.
    CheckWorld(CheckWorldArgs),
    /// Dump the tree of life (or of states) to a depth.
    Tree(TreeArgs),
    /// Count policies per size and measure search effort on a suite.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct RunLifeArgs {
    /// World file, or `builtin:<name>`.
    #[arg(long)]
    world: String,
    /// random | constant:<letter> | echo | index:<n> | policy:<file> |
    /// learner[:h=1,epsilon=0.3,alpha=0.5,gamma=0.5,decay=4000]
    #[arg(long, default_value = "random")]
    agent: String,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Seeds both the world and the agent.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    suite: PathBuf,
    #[arg(long, default_value_t = 2)]
    max_states: usize,
    #[arg(long, default_value_t = 1_000_000)]
    policy_cap: u64,
    /// Per-candidate step cap; defaults to one full pass over the suite.
    #[arg(long)]
    step_budget: Option<u64>,
    #[arg(long)]
    dovetail: bool,
    #[arg(long, default_value_t = 16)]
    slice: u64,
    /// Writes `<out>.summary` and `<out>.csv` instead of printing.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CheckWorldArgs {
    #[arg(long)]
    world: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TreeArgs {
    #[arg(long)]
    world: String,
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// Dump world states instead of views.
    #[arg(long)]
    states: bool,
    /// Maximum number of tree nodes.
    #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
    cap: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    suite: PathBuf,
    #[arg(long, default_value_t = 2)]
    max_states: usize,
    #[arg(long, default_value_t = 1_000_000)]
    policy_cap: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Loads a world from a file path or `builtin:<name>`.
pub fn load_world(spec: &str, base: &Path) -> Result<WorldFile> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return builtin_world(name).ok_or_else(|| Error::InvalidConfig(format!("no builtin world {name:?}")));
    }
    let path = base.join(spec);
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    parse_world(&text).map_err(|e| match e {
        Error::Parse(diags) => Error::InvalidConfig(format!(
            "{}:\n{}",
            path.display(),
            diags.iter().map(|d| format!("  {d}")).collect::<Vec<_>>().join("\n")
        )),
        other => other,
    })
}

fn parse_learner(opts: &str, wf: &WorldFile) -> Result<LearnerParams> {
    let mut p = LearnerParams {
        history: 1,
        epsilon: 0.3,
        alpha: 0.5,
        gamma: 0.5,
        decay_steps: Some(4000),
        meaning: wf.meaning.clone(),
    };
    for kv in opts.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::InvalidConfig(format!("learner option {kv:?} is not key=value")))?;
        let bad = || Error::InvalidConfig(format!("bad value in learner option {kv:?}"));
        match k {
            "h" => p.history = v.parse().map_err(|_| bad())?,
            "epsilon" => p.epsilon = v.parse().map_err(|_| bad())?,
            "alpha" => p.alpha = v.parse().map_err(|_| bad())?,
            "gamma" => p.gamma = v.parse().map_err(|_| bad())?,
            "decay" => {
                let n: u64 = v.parse().map_err(|_| bad())?;
                p.decay_steps = (n > 0).then_some(n);
            }
            _ => return Err(Error::InvalidConfig(format!("unknown learner option {k:?}"))),
        }
    }
    Ok(p)
}

/// Builds an agent from its command-line description.
pub fn make_agent(spec: &str, wf: &WorldFile, seed: u64) -> Result<Box<dyn Agent + Send>> {
    let sigma = wf.world.sigma().clone();
    let omega = wf.world.omega().clone();
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    match kind {
        "random" => make_baseline(BaselineKind::Random, sigma, omega, seed),
        "constant" => {
            let letter = omega
                .lookup(arg)
                .ok_or_else(|| Error::InvalidConfig(format!("{arg:?} is not an omega letter")))?;
            make_baseline(BaselineKind::Constant(letter), sigma, omega, seed)
        }
        "learner" => make_baseline(BaselineKind::HistoryLearner(parse_learner(arg, wf)?), sigma, omega, seed),
        "echo" => Ok(Box::new(TransducerPolicy::echo(sigma, omega)?)),
        "index" => {
            let n = arg
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad policy index {arg:?}")))?;
            Ok(Box::new(PolicyCode::decode(n, sigma, omega)?))
        }
        "policy" => {
            let text = std::fs::read_to_string(arg).map_err(|e| Error::io(arg, e))?;
            let mut policies = parse_policies(&text, sigma, omega)?;
            Ok(Box::new(policies.swap_remove(0)))
        }
        other => Err(Error::InvalidConfig(format!("unknown agent kind {other:?}"))),
    }
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => stdout.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e)),
    }
}

fn run_life_cmd(args: &RunLifeArgs, stdout: &mut dyn Write) -> Result<i32> {
    let wf = load_world(&args.world, Path::new(""))?;
    let mut agent = make_agent(&args.agent, &wf, args.seed)?;
    let life = run_life(&wf.world, &mut agent, args.steps, args.seed)?;
    let sigma = wf.world.sigma();
    let omega = wf.world.omega();
    let mut text = String::new();
    let _ = writeln!(text, "# stepworld run-life");
    let _ = writeln!(text, "# world: {}", args.world);
    let _ = writeln!(text, "# agent: {}", args.agent);
    let _ = writeln!(text, "# steps: {}", args.steps);
    let _ = writeln!(text, "# seed: {}", args.seed);
    let _ = writeln!(text, "i,view,action,cumulative_value");
    let mut total = 0;
    for (i, (v, d)) in life.views.iter().zip(&life.actions).enumerate() {
        total += wf.meaning.letter_value(*v);
        let _ = writeln!(text, "{i},{},{},{total}", sigma.name(*v), omega.name(*d));
    }
    let _ = writeln!(text, "# life_value: {}", life_value(&life, &wf.meaning));
    emit(args.out.as_deref(), &text, stdout)?;
    Ok(EXIT_OK)
}

fn load_suite(path: &Path, policy_cap: u64, step_budget: Option<u64>) -> Result<TestSuite> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let entries = parse_suite(&text).map_err(|e| match e {
        Error::Parse(diags) => Error::InvalidConfig(format!(
            "{}:\n{}",
            path.display(),
            diags.iter().map(|d| format!("  {d}")).collect::<Vec<_>>().join("\n")
        )),
        other => other,
    })?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut specs = Vec::with_capacity(entries.len());
    for (i, e) in entries.into_iter().enumerate() {
        let wf = load_world(&e.world, base)?;
        specs.push(TestWorldSpec::new(
            format!("w{i}"),
            Arc::new(wf.world),
            wf.meaning,
            e.train,
            e.eval,
            e.require,
            e.seed,
        )?);
    }
    match step_budget {
        Some(b) => TestSuite::new(specs, b, policy_cap),
        None => TestSuite::unbudgeted(specs, policy_cap),
    }
}

fn suite_header(text: &mut String, command: &str, suite_path: &Path, suite: &TestSuite) {
    let _ = writeln!(text, "# stepworld {command}");
    let _ = writeln!(text, "# suite: {}", suite_path.display());
    let source = std::fs::read_to_string(suite_path).unwrap_or_default();
    for (spec, entry) in suite.specs.iter().zip(parse_suite(&source).unwrap_or_default()) {
        let _ = writeln!(
            text,
            "# {}: world={} train={} eval={} require={} seed={}",
            spec.name, entry.world, spec.train_steps, spec.eval_steps, spec.requirement, spec.seed
        );
    }
}

fn search_cmd(args: &SearchArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let suite = load_suite(&args.suite, args.policy_cap, args.step_budget)?;
    let report: SearchReport = if args.dovetail {
        dovetail_search(&suite, args.max_states, args.slice)?
    } else {
        search_ai(&suite, args.max_states)?
    };
    let mut summary = String::new();
    suite_header(&mut summary, "search", &args.suite, &suite);
    summary.push_str(&report.render_summary());
    let table = report.render_table();
    let _ = writeln!(stderr, "search finished in {:.3}s", report.elapsed.as_secs_f64());
    match &args.out {
        Some(prefix) => {
            let with_ext = |ext: &str| {
                let mut p = prefix.clone().into_os_string();
                p.push(ext);
                PathBuf::from(p)
            };
            emit(Some(&with_ext(".summary")), &summary, stdout)?;
            emit(Some(&with_ext(".csv")), &table, stdout)?;
        }
        None => {
            emit(None, &summary, stdout)?;
            emit(None, &table, stdout)?;
        }
    }
    Ok(if report.winner.is_some() { EXIT_OK } else { EXIT_NO_WINNER })
}

fn check_world_cmd(args: &CheckWorldArgs, stdout: &mut dyn Write) -> Result<i32> {
    let wf = load_world(&args.world, Path::new(""))?;
    let report = analyze_good_world(&wf.world, &wf.meaning)?;
    let complexity = complexity_proxy(&wf.world)?;
    let mut text = String::new();
    let _ = writeln!(text, "# stepworld check-world");
    let _ = writeln!(text, "# world: {}", args.world);
    let _ = writeln!(text, "# states: {}", complexity.states);
    let _ = writeln!(text, "# minimized_states: {}", complexity.minimized_states);
    text.push_str(&report.render(&wf.world));
    emit(args.out.as_deref(), &text, stdout)?;
    Ok(match report.verdict {
        Verdict::Good => EXIT_OK,
        Verdict::HasFatalErrors => EXIT_FATAL,
    })
}

fn tree_cmd(args: &TreeArgs, stdout: &mut dyn Write) -> Result<i32> {
    let wf = load_world(&args.world, Path::new(""))?;
    let text = if args.states {
        expand_state_tree_capped(&wf.world, args.depth, args.cap)?.dump(&wf.world)
    } else {
        expand_life_tree_capped(&wf.world, args.depth, args.cap)?.dump(&wf.world)
    };
    emit(args.out.as_deref(), &text, stdout)?;
    Ok(EXIT_OK)
}

fn bench_cmd(args: &BenchArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let suite = load_suite(&args.suite, args.policy_cap, None)?;
    let report = search_ai(&suite, args.max_states)?;
    let (m, k) = (suite.sigma().len(), suite.omega().len());
    let mut text = String::new();
    suite_header(&mut text, "bench", &args.suite, &suite);
    let _ = writeln!(text, "# sigma: {}  omega: {}", m, k);
    let _ = writeln!(text, "states,policies,length_bits,cumulative,examined,steps");
    let mut cumulative: u128 = 0;
    for s in 1..=args.max_states {
        let count = policy_count(m, k, s);
        cumulative += count.map_or(u128::MAX - cumulative, u128::from);
        let tier: Vec<_> = report.candidates.iter().filter(|c| c.code.state_count == s).collect();
        let steps: u64 = tier
            .iter()
            .map(|c| {
                c.outcomes
                    .iter()
                    .zip(&suite.specs)
                    .filter(|(o, _)| o.value().is_some())
                    .map(|(_, spec)| spec.total_steps())
                    .sum::<u64>()
            })
            .sum();
        let _ = writeln!(
            text,
            "{s},{},{},{cumulative},{},{steps}",
            count.map_or("overflow".to_string(), |c| c.to_string()),
            bit_length(m, k, s),
            tier.len()
        );
    }
    text.push_str(&report.render_summary());
    let _ = writeln!(stderr, "bench search took {:.3}s", report.elapsed.as_secs_f64());
    emit(args.out.as_deref(), &text, stdout)?;
    Ok(EXIT_OK)
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Unsupported(_) => EXIT_UNSUPPORTED,
        _ => EXIT_ERROR,
    }
}

/// Runs the CLI with explicit arguments and output streams; returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_ERROR;
            }
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    let result = match &cli.command {
        Command::RunLife(a) => run_life_cmd(a, stdout),
        Command::Search(a) => search_cmd(a, stdout, stderr),
        Command::CheckWorld(a) => check_world_cmd(a, stdout),
        Command::Tree(a) => tree_cmd(a, stdout),
        Command::Bench(a) => bench_cmd(a, stdout, stderr),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code_for(&e)
        }
    }
}
