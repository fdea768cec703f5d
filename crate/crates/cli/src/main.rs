//! `dki`: batch experiment driver for deterministic K-identification over
//! the binary symmetric channel.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 invariant or bound
//! violation detected, 3 I/O error.

mod output;
mod sweep;

use clap::{Args, Parser, Subcommand};
use dki_core::binmath::{
    error_exponent_point, ratio_to_f64, run_tail_suite, run_volume_suite, ExponentBranch,
    Probability, SuiteOutcome, SuiteRow,
};
use dki_core::channel::Seed;
use dki_core::codebook::{
    empirical_rate, exhaustive_construct, gv_greedy_construct_capped, gv_size_lower_bound,
    parse_rational, verify, Codebook, CodebookParams,
};
use dki_core::dki::{
    analytic_bounds, brute_force_type1, brute_force_type2, dki_capacity, kappa_region,
    mc_estimate, run_zeta_suite, DkiParams, ErrorKind, TargetSet,
};
use num::rational::BigRational;
use num::BigUint;
use output::{fmt_f64, write_table, Format, Table};
use std::path::{Path, PathBuf};
use sweep::{int_sweep_to_string, parse_int_sweep, parse_sweep, sweep_to_string};

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn usage(msg: impl ToString) -> CliError {
    CliError::Usage(msg.to_string())
}

#[derive(Parser)]
#[command(
    name = "dki",
    about = "Deterministic K-identification experiments over the binary symmetric channel",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Identification capacity over a sweep of weight fractions.
    Capacity {
        /// Sweep of weight fractions A (list or start:stop:step).
        #[arg(long)]
        a: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Admissible target-rate bounds over an (eps, beta) grid.
    KappaRegion {
        #[arg(long)]
        eps: String,
        #[arg(long)]
        beta: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Inequality suites checked against exact oracles.
    Bounds {
        /// Suite: volumes, tails, or zeta.
        #[arg(long)]
        suite: String,
        /// Blocklength sweep (suite-specific default when omitted).
        #[arg(long)]
        n: Option<String>,
        /// Crossover sweep (suite-specific default when omitted).
        #[arg(long)]
        eps: Option<String>,
        /// Packing-parameter sweep, zeta suite only.
        #[arg(long)]
        beta: Option<String>,
        /// Alphabet size, volumes suite only.
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build, verify, or describe codebook files.
    #[command(subcommand)]
    Codebook(CodebookCmd),
    /// Monte Carlo error estimation against a codebook file.
    Simulate {
        #[arg(long)]
        codebook: PathBuf,
        /// Crossover probability (rational, e.g. 1/10).
        #[arg(long)]
        eps: String,
        /// Target-set sizes to simulate.
        #[arg(long, default_value = "1")]
        k: String,
        /// Index of the transmitted message.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        /// Target-set choice: random or nearest (adversarial).
        #[arg(long, default_value = "nearest")]
        set_mode: String,
        /// Which error types to measure: both, type1, or type2.
        #[arg(long, default_value = "both")]
        types: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact error-probability oracles (full output-space enumeration).
    Oracle {
        #[arg(long)]
        codebook: PathBuf,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// Explicit target set, e.g. 0,2,5 (0-based).
        #[arg(long)]
        set: Option<String>,
        /// Target-set size when --set is omitted (nearest-K adversarial set).
        #[arg(long, default_value_t = 1)]
        k: u64,
        /// Duplicate the sent codeword under a fresh index and show that the
        /// two error probabilities sum to one.
        #[arg(long, default_value_t = false)]
        converse_demo: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Random-coding error exponent over a rate sweep.
    ErrorExponent {
        #[arg(long)]
        r: String,
        #[arg(long)]
        eps: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum CodebookCmd {
    /// Construct a codebook and write it to a file.
    Build {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: String,
        #[arg(long)]
        beta: String,
        /// greedy (seeded random) or exhaustive (lexicographic, n <= 20).
        #[arg(long, default_value = "greedy")]
        construction: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        /// Consecutive-rejection budget for the greedy builder.
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        /// Optional cap on the number of codewords.
        #[arg(long)]
        max_words: Option<u64>,
        /// Codebook file to write.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
    /// Revalidate a codebook file; exits 2 on any violation.
    Verify {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Size, distance, rate, and packing-bound summary of a codebook file.
    Stats {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
        Err(CliError::Io(e)) => {
            eprintln!("io error: {e}");
            std::process::exit(3);
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Cmd::Capacity { a, output } => cmd_capacity(&a, &output),
        Cmd::KappaRegion { eps, beta, output } => cmd_kappa_region(&eps, &beta, &output),
        Cmd::Bounds { suite, n, eps, beta, q, output } => {
            cmd_bounds(&suite, n.as_deref(), eps.as_deref(), beta.as_deref(), q, &output)
        }
        Cmd::Codebook(sub) => match sub {
            CodebookCmd::Build {
                n,
                a,
                beta,
                construction,
                seed,
                stream,
                budget,
                max_words,
                out,
                format,
            } => cmd_codebook_build(
                n, &a, &beta, &construction, seed, stream, budget, max_words, &out, format,
            ),
            CodebookCmd::Verify { file, output } => cmd_codebook_verify(&file, &output),
            CodebookCmd::Stats { file, output } => cmd_codebook_stats(&file, &output),
        },
        Cmd::Simulate {
            codebook,
            eps,
            k,
            index,
            trials,
            seed,
            stream,
            set_mode,
            types,
            output,
        } => cmd_simulate(
            &codebook, &eps, &k, index, trials, seed, stream, &set_mode, &types, &output,
        ),
        Cmd::Oracle { codebook, eps, index, set, k, converse_demo, output } => {
            cmd_oracle(&codebook, &eps, index, set.as_deref(), k, converse_demo, &output)
        }
        Cmd::ErrorExponent { r, eps, output } => cmd_error_exponent(&r, &eps, &output),
    }
}

fn parse_prob(s: &str) -> Result<Probability, CliError> {
    let r = parse_rational(s).ok_or_else(|| usage(format!("bad rational {s:?}")))?;
    Probability::new(r).map_err(usage)
}

fn format_string(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Jsonl => "jsonl",
    }
}

fn out_string(out: &Option<PathBuf>) -> String {
    out.as_deref().map_or_else(|| "-".to_string(), |p| p.display().to_string())
}

fn cmd_capacity(a_spec: &str, output: &OutputArgs) -> Result<i32, CliError> {
    let sweep = parse_sweep(a_spec).map_err(usage)?;
    let mut table = Table::new(vec!["A", "capacity", "error"]);
    for a in &sweep {
        match dki_capacity(a) {
            Ok(c) => table.push(vec![a.to_string(), fmt_f64(c), String::new()]),
            Err(e) => table.push(vec![a.to_string(), String::new(), e.to_string()]),
        }
    }
    let config = vec![
        ("a".to_string(), sweep_to_string(&sweep)),
        ("format".to_string(), format_string(output.format).to_string()),
        ("out".to_string(), out_string(&output.out)),
    ];
    write_table("capacity", &config, &table, output.format, output.out.as_deref())?;
    Ok(0)
}

fn cmd_kappa_region(eps_spec: &str, beta_spec: &str, output: &OutputArgs) -> Result<i32, CliError> {
    let eps_sweep = parse_sweep(eps_spec).map_err(usage)?;
    let beta_sweep = parse_sweep(beta_spec).map_err(usage)?;
    let mut table =
        Table::new(vec!["eps", "beta", "kappa_theorem", "kappa_asymptotic", "error"]);
    for eps in &eps_sweep {
        for beta in &beta_sweep {
            let row = (|| -> Result<(f64, f64), String> {
                let e = Probability::new(eps.clone()).map_err(|e| e.to_string())?;
                let b = Probability::new(beta.clone()).map_err(|e| e.to_string())?;
                let kr = kappa_region(&e, &b).map_err(|e| e.to_string())?;
                Ok((kr.theorem, kr.asymptotic))
            })();
            match row {
                Ok((theorem, asymptotic)) => table.push(vec![
                    eps.to_string(),
                    beta.to_string(),
                    fmt_f64(theorem),
                    fmt_f64(asymptotic),
                    String::new(),
                ]),
                Err(msg) => table.push(vec![
                    eps.to_string(),
                    beta.to_string(),
                    String::new(),
                    String::new(),
                    msg,
                ]),
            }
        }
    }
    let config = vec![
        ("eps".to_string(), sweep_to_string(&eps_sweep)),
        ("beta".to_string(), sweep_to_string(&beta_sweep)),
        ("format".to_string(), format_string(output.format).to_string()),
        ("out".to_string(), out_string(&output.out)),
    ];
    write_table("kappa-region", &config, &table, output.format, output.out.as_deref())?;
    Ok(0)
}

fn suite_rows_into_table(outcome: &SuiteOutcome, table: &mut Table) {
    let lookup = |params: &[(String, String)], key: &str| -> String {
        params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.clone())
            .unwrap_or_default()
    };
    for row in &outcome.rows {
        match row {
            SuiteRow::Checked(report) => table.push(vec![
                lookup(&report.params, "check"),
                lookup(&report.params, "n"),
                lookup(&report.params, "k"),
                lookup(&report.params, "q"),
                lookup(&report.params, "eps"),
                lookup(&report.params, "beta"),
                "checked".to_string(),
                fmt_f64(report.lhs_log2),
                fmt_f64(report.rhs_log2),
                report.holds.to_string(),
                String::new(),
            ]),
            SuiteRow::Skipped { params, reason } => table.push(vec![
                lookup(params, "check"),
                lookup(params, "n"),
                lookup(params, "k"),
                lookup(params, "q"),
                lookup(params, "eps"),
                lookup(params, "beta"),
                "skipped".to_string(),
                String::new(),
                String::new(),
                String::new(),
                reason.clone(),
            ]),
        }
    }
}

fn cmd_bounds(
    suite: &str,
    n_spec: Option<&str>,
    eps_spec: Option<&str>,
    beta_spec: Option<&str>,
    q: u32,
    output: &OutputArgs,
) -> Result<i32, CliError> {
    let mut table = Table::new(vec![
        "check", "n", "k", "q", "eps", "beta", "status", "lhs_log2", "rhs_log2", "holds",
        "reason",
    ]);
    let mut config = vec![
        ("suite".to_string(), suite.to_string()),
        ("format".to_string(), format_string(output.format).to_string()),
        ("out".to_string(), out_string(&output.out)),
    ];
    let to_probs = |values: &[BigRational]| -> Result<Vec<Probability>, CliError> {
        values.iter().map(|v| Probability::new(v.clone()).map_err(usage)).collect()
    };
    let outcome = match suite {
        "volumes" => {
            let ns = parse_int_sweep(n_spec.unwrap_or("10:1000:1")).map_err(usage)?;
            let eps = parse_sweep(eps_spec.unwrap_or("1/20:1/2:1/20")).map_err(usage)?;
            config.push(("n".to_string(), int_sweep_to_string(&ns)));
            config.push(("eps".to_string(), sweep_to_string(&eps)));
            config.push(("q".to_string(), q.to_string()));
            run_volume_suite(&ns, &to_probs(&eps)?, q)
        }
        "tails" => {
            let ns = parse_int_sweep(n_spec.unwrap_or("1:30:1")).map_err(usage)?;
            let n_max = ns.iter().max().copied().unwrap_or(0);
            let eps = parse_sweep(eps_spec.unwrap_or("1/10,1/4,3/10,2/5")).map_err(usage)?;
            config.push(("n".to_string(), format!("1:{n_max}:1")));
            config.push(("eps".to_string(), sweep_to_string(&eps)));
            run_tail_suite(n_max, &to_probs(&eps)?)
        }
        "zeta" => {
            let ns = parse_int_sweep(n_spec.unwrap_or("50,100,200,400")).map_err(usage)?;
            let ns32: Vec<u32> = ns.iter().map(|&n| n as u32).collect();
            let eps = parse_sweep(eps_spec.unwrap_or("1/10,1/4,3/10")).map_err(usage)?;
            let betas = parse_sweep(beta_spec.unwrap_or("1/10,1/5")).map_err(usage)?;
            config.push(("n".to_string(), int_sweep_to_string(&ns)));
            config.push(("eps".to_string(), sweep_to_string(&eps)));
            config.push(("beta".to_string(), sweep_to_string(&betas)));
            run_zeta_suite(&ns32, &to_probs(&eps)?, &betas)
        }
        other => return Err(usage(format!("unknown suite {other:?}"))),
    };
    suite_rows_into_table(&outcome, &mut table);
    config.push(("violations".to_string(), outcome.violations.to_string()));
    config.push(("skipped".to_string(), outcome.skipped.to_string()));
    write_table("bounds", &config, &table, output.format, output.out.as_deref())?;
    Ok(if outcome.violations > 0 { 2 } else { 0 })
}

#[allow(clippy::too_many_arguments)]
fn cmd_codebook_build(
    n: u32,
    a_spec: &str,
    beta_spec: &str,
    construction: &str,
    seed: u64,
    stream: u64,
    budget: u64,
    max_words: Option<u64>,
    out: &Path,
    format: Format,
) -> Result<i32, CliError> {
    let a = parse_rational(a_spec).ok_or_else(|| usage(format!("bad A {a_spec:?}")))?;
    let beta = parse_rational(beta_spec).ok_or_else(|| usage(format!("bad beta {beta_spec:?}")))?;
    let params = CodebookParams::new(n, a, beta).map_err(usage)?;
    let cb = match construction {
        "greedy" => gv_greedy_construct_capped(params, Seed::new(seed, stream), budget, max_words),
        "exhaustive" => exhaustive_construct(params).map_err(usage)?,
        other => return Err(usage(format!("unknown construction {other:?}"))),
    };
    let file = std::fs::File::create(out)?;
    cb.save(std::io::BufWriter::new(file)).map_err(|e| match e {
        dki_core::codebook::CodebookError::Io(io) => CliError::Io(io),
        other => usage(other),
    })?;
    let mut table = Table::new(vec![
        "n",
        "A",
        "beta",
        "construction",
        "M",
        "min_distance",
        "required_min_distance",
        "empirical_rate",
        "gv_lower_bound",
    ]);
    table.push(vec![
        cb.params().n().to_string(),
        cb.params().a().to_string(),
        cb.params().beta().to_string(),
        construction.to_string(),
        cb.len().to_string(),
        cb.min_distance().to_string(),
        cb.params().min_distance().to_string(),
        fmt_f64(empirical_rate(&cb)),
        fmt_f64(gv_size_lower_bound(cb.params())),
    ]);
    let config = vec![
        ("n".to_string(), n.to_string()),
        ("a".to_string(), a_spec.to_string()),
        ("beta".to_string(), beta_spec.to_string()),
        ("construction".to_string(), construction.to_string()),
        ("seed".to_string(), seed.to_string()),
        ("stream".to_string(), stream.to_string()),
        ("budget".to_string(), budget.to_string()),
        (
            "max_words".to_string(),
            max_words.map_or_else(|| "-".to_string(), |m| m.to_string()),
        ),
        ("out".to_string(), out.display().to_string()),
        ("format".to_string(), format_string(format).to_string()),
    ];
    write_table("codebook-build", &config, &table, format, None)?;
    Ok(0)
}

fn load_codebook(path: &Path) -> Result<Codebook, CliError> {
    let text = std::fs::read_to_string(path)?;
    Codebook::parse(&text).map_err(usage)
}

fn cmd_codebook_verify(file: &Path, output: &OutputArgs) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(file)?;
    let mut table = Table::new(vec!["status", "detail"]);
    let config = vec![
        ("file".to_string(), file.display().to_string()),
        ("format".to_string(), format_string(output.format).to_string()),
        ("out".to_string(), out_string(&output.out)),
    ];
    let code = match Codebook::parse(&text) {
        Ok(cb) => {
            // parse already revalidates; run the checker once more so the
            // report is explicit in the output
            let report = verify(&cb);
            if report.is_clean() {
                table.push(vec!["clean".to_string(), format!("M={}", cb.len())]);
                0
            } else {
                for v in &report.violations {
                    table.push(vec!["violation".to_string(), v.clone()]);
                }
                2
            }
        }
        Err(e) => {
            table.push(vec!["violation".to_string(), e.to_string()]);
            2
        }
    };
    write_table("codebook-verify", &config, &table, output.format, output.out.as_deref())?;
    Ok(code)
}

fn cmd_codebook_stats(file: &Path, output: &OutputArgs) -> Result<i32, CliError> {
    let cb = load_codebook(file)?;
    let mut table = Table::new(vec![
        "n",
        "A",
        "beta",
        "M",
        "min_distance",
        "required_min_distance",
        "empirical_rate",
        "gv_lower_bound",
    ]);
    table.push(vec![
        cb.params().n().to_string(),
        cb.params().a().to_string(),
        cb.params().beta().to_string(),
        cb.len().to_string(),
        cb.min_distance().to_string(),
        cb.params().min_distance().to_string(),
        fmt_f64(empirical_rate(&cb)),
        fmt_f64(gv_size_lower_bound(cb.params())),
    ]);
    let config = vec![
        ("file".to_string(), file.display().to_string()),
        ("format".to_string(), format_string(output.format).to_string()),
        ("out".to_string(), out_string(&output.out)),
    ];
    write_table("codebook-stats", &config, &table, output.format, output.out.as_deref())?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    codebook: &Path,
    eps_spec: &str,
    k_spec: &str,
    index: usize,
    trials: u64,
    seed: u64,
    stream: u64,
    set_mode: &str,
    types: &str,
    output: &OutputArgs,
) -> Result<i32, CliError> {
    let cb = load_codebook(codebook)?;
    let eps = parse_prob(eps_spec)?;
    let ks_sizes = parse_int_sweep(k_spec).map_err(usage)?;
    if index >= cb.len() {
        return Err(usage(format!("index {index} out of range for M = {}", cb.len())));
    }
    let want_type1 = matches!(types, "both" | "type1");
    let want_type2 = matches!(types, "both" | "type2");
    if !(want_type1 || want_type2) {
        return Err(usage(format!("unknown types {types:?} (both, type1, type2)")));
    }
    let mut table = Table::new(vec![
        "error_type",
        "i",
        "K",
        "set",
        "trials",
        "hits",
        "p_hat",
        "ci_low",
        "ci_high",
        "analytic_bound",
    ]);
    // fixed stream layout: one lane for set sampling, then a block of
    // `trials` per estimate row, so re-runs and row-parallel runs agree
    let mut set_rng = Seed::new(seed, stream).rng();
    let mut row_index = 0u64;
    for &k in &ks_sizes {
        let k = k as usize;
        if k > cb.len() {
            return Err(usage(format!("K = {k} exceeds M = {}", cb.len())));
        }
        let p = DkiParams::with_k(
            cb.params().n(),
            eps.clone(),
            cb.params().a().clone(),
            cb.params().beta().clone(),
            BigUint::from(k as u64),
        )
        .map_err(usage)?;
        let bounds = analytic_bounds(&p);
        let mut sets = Vec::new();
        if want_type1 {
            let set = match set_mode {
                "random" => TargetSet::random_including(cb.len(), k, index, &mut set_rng)
                    .map_err(usage)?,
                "nearest" => {
                    if k == 1 {
                        TargetSet::new(vec![index], cb.len()).map_err(usage)?
                    } else {
                        let near = TargetSet::nearest_to(cb.words(), index, k - 1)
                            .map_err(usage)?;
                        let mut idx = near.indices().to_vec();
                        idx.push(index);
                        TargetSet::new(idx, cb.len()).map_err(usage)?
                    }
                }
                other => return Err(usage(format!("unknown set mode {other:?}"))),
            };
            sets.push((ErrorKind::Type1, set, bounds.zeta1));
        }
        if want_type2 {
            let set = match set_mode {
                "random" => TargetSet::random_excluding(cb.len(), k, index, &mut set_rng)
                    .map_err(usage)?,
                "nearest" => TargetSet::nearest_to(cb.words(), index, k).map_err(usage)?,
                other => return Err(usage(format!("unknown set mode {other:?}"))),
            };
            sets.push((ErrorKind::Type2, set, bounds.type2_bound));
        }
        for (kind, set, bound) in sets {
            let est_seed = Seed::new(seed, stream.wrapping_add(1 + row_index * trials));
            let est =
                mc_estimate(cb.words(), &set, index, &p, trials, est_seed).map_err(usage)?;
            debug_assert_eq!(est.kind, kind);
            table.push(vec![
                kind.to_string(),
                index.to_string(),
                k.to_string(),
                set.indices()
                    .iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(";"),
                est.trials.to_string(),
                est.hits.to_string(),
                fmt_f64(est.p_hat),
                fmt_f64(est.ci_low),
                fmt_f64(est.ci_high),
                fmt_f64(bound.to_linear()),
            ]);
            row_index += 1;
        }
    }
    let config = vec![
        ("codebook".to_string(), codebook.display().to_string()),
        ("eps".to_string(), eps.to_string()),
        ("k".to_string(), int_sweep_to_string(&ks_sizes)),
        ("index".to_string(), index.to_string()),
        ("trials".to_string(), trials.to_string()),
        ("seed".to_string(), seed.to_string()),
        ("stream".to_string(), stream.to_string()),
        ("set_mode".to_string(), set_mode.to_string()),
        ("types".to_string(), types.to_string()),
        ("format".to_string(), format_string(output.format).to_string()),
        ("out".to_string(), out_string(&output.out)),
    ];
    write_table("simulate", &config, &table, output.format, output.out.as_deref())?;
    Ok(0)
}

fn cmd_oracle(
    codebook: &Path,
    eps_spec: &str,
    index: usize,
    set_spec: Option<&str>,
    k: u64,
    converse_demo: bool,
    output: &OutputArgs,
) -> Result<i32, CliError> {
    let cb = load_codebook(codebook)?;
    let eps = parse_prob(eps_spec)?;
    if index >= cb.len() {
        return Err(usage(format!("index {index} out of range for M = {}", cb.len())));
    }
    let mut table =
        Table::new(vec!["error_type", "i", "K", "set", "value", "value_exact"]);
    let config = vec![
        ("codebook".to_string(), codebook.display().to_string()),
        ("eps".to_string(), eps.to_string()),
        ("index".to_string(), index.to_string()),
        ("set".to_string(), set_spec.unwrap_or("-").to_string()),
        ("k".to_string(), k.to_string()),
        ("converse_demo".to_string(), converse_demo.to_string()),
        ("format".to_string(), format_string(output.format).to_string()),
        ("out".to_string(), out_string(&output.out)),
    ];
    let params_for = |m_words: &[dki_core::hamming::Word], k_val: u64| {
        DkiParams::with_k(
            cb.params().n(),
            eps.clone(),
            cb.params().a().clone(),
            cb.params().beta().clone(),
            BigUint::from(k_val.max(1)),
        )
        .map_err(usage)
        .map(|p| (m_words.len(), p))
    };
    if converse_demo {
        // duplicate the sent codeword under a fresh index; with the original
        // inside the target set and the twin outside, the miss mass and the
        // false-acceptance mass of the shared word split one unit exactly
        let mut words = cb.words().to_vec();
        words.push(cb.word(index).clone());
        let twin = words.len() - 1;
        let (m, p) = params_for(&words, k)?;
        let set = if k <= 1 {
            TargetSet::new(vec![index], m).map_err(usage)?
        } else {
            let near = TargetSet::nearest_to(&words[..m - 1], index, (k - 1) as usize)
                .map_err(usage)?;
            let mut idx = near.indices().to_vec();
            idx.push(index);
            TargetSet::new(idx, m).map_err(usage)?
        };
        let t1 = brute_force_type1(&words, index, &set, &p).map_err(usage)?;
        let t2 = brute_force_type2(&words, twin, &set, &p).map_err(usage)?;
        let set_str = set
            .indices()
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(";");
        let sum = &t1 + &t2;
        table.push(vec![
            "type1".to_string(),
            index.to_string(),
            set.k().to_string(),
            set_str.clone(),
            fmt_f64(ratio_to_f64(&t1)),
            t1.to_string(),
        ]);
        table.push(vec![
            "type2".to_string(),
            twin.to_string(),
            set.k().to_string(),
            set_str.clone(),
            fmt_f64(ratio_to_f64(&t2)),
            t2.to_string(),
        ]);
        table.push(vec![
            "converse-sum".to_string(),
            format!("{index}+{twin}"),
            set.k().to_string(),
            set_str,
            fmt_f64(ratio_to_f64(&sum)),
            sum.to_string(),
        ]);
        write_table("oracle", &config, &table, output.format, output.out.as_deref())?;
        return Ok(0);
    }
    let set = match set_spec {
        Some(spec) => {
            let indices: Result<Vec<usize>, _> =
                spec.split(',').map(|s| s.trim().parse::<usize>()).collect();
            let indices = indices.map_err(|_| usage(format!("bad set {spec:?}")))?;
            TargetSet::new(indices, cb.len()).map_err(usage)?
        }
        None => TargetSet::nearest_to(cb.words(), index, k as usize).map_err(usage)?,
    };
    let (_, p) = params_for(cb.words(), set.k() as u64)?;
    let (kind, value) = if set.contains(index) {
        ("type1", brute_force_type1(cb.words(), index, &set, &p).map_err(usage)?)
    } else {
        ("type2", brute_force_type2(cb.words(), index, &set, &p).map_err(usage)?)
    };
    table.push(vec![
        kind.to_string(),
        index.to_string(),
        set.k().to_string(),
        set.indices().iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";"),
        fmt_f64(ratio_to_f64(&value)),
        value.to_string(),
    ]);
    write_table("oracle", &config, &table, output.format, output.out.as_deref())?;
    Ok(0)
}

fn cmd_error_exponent(r_spec: &str, eps_spec: &str, output: &OutputArgs) -> Result<i32, CliError> {
    let sweep = parse_sweep(r_spec).map_err(usage)?;
    let eps = parse_prob(eps_spec)?;
    let mut table = Table::new(vec!["R", "delta", "case", "E_r", "error"]);
    for r in &sweep {
        match error_exponent_point(ratio_to_f64(r), &eps) {
            Ok(pt) => {
                let case = match pt.branch {
                    ExponentBranch::TangentGap => "1",
                    ExponentBranch::Linear => "2",
                };
                table.push(vec![
                    r.to_string(),
                    fmt_f64(pt.delta),
                    case.to_string(),
                    fmt_f64(pt.value),
                    String::new(),
                ]);
            }
            Err(e) => table.push(vec![
                r.to_string(),
                String::new(),
                String::new(),
                String::new(),
                e.to_string(),
            ]),
        }
    }
    let config = vec![
        ("r".to_string(), sweep_to_string(&sweep)),
        ("eps".to_string(), eps.to_string()),
        ("format".to_string(), format_string(output.format).to_string()),
        ("out".to_string(), out_string(&output.out)),
    ];
    write_table("error-exponent", &config, &table, output.format, output.out.as_deref())?;
    Ok(0)
}
