//! Command implementations behind the `mcharlier` binary.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mcharlier::charlier::{self, IdentityReport, OrthogonalityReport, RijReport};
use mcharlier::fock::{self, BookkeepingReport, InteriorReport, PsiReport};
use mcharlier::strategies::{self, Strategy};
use mcharlier::{build_table, parse_rational, CharlierParams, CharlierTable, MultiIndex, Rational};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "mcharlier",
    version,
    about = "Exact multiple Charlier polynomials"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ConfigArgs {
    /// Number of directions.
    #[arg(long = "r", global = true, default_value_t = 2)]
    pub r: usize,
    /// Comma-separated parameters as exact rationals, e.g. `1/2,3/2`.
    #[arg(long, global = true, default_value = "1/2,3/2")]
    pub sigma: String,
    /// Largest total degree |n|.
    #[arg(long, global = true, default_value_t = 5)]
    pub nmax: usize,
    /// Largest spectral point k.
    #[arg(long, global = true, default_value_t = 6)]
    pub kmax: usize,
    /// Series truncation degree D.
    #[arg(long, global = true, default_value_t = 8)]
    pub cutoff: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for parallel checks (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate C_n(k) by all three routes.
    Eval {
        /// Multi-index, comma-separated.
        #[arg(long)]
        n: String,
        #[arg(long)]
        k: usize,
    },
    /// Run a verification suite; exit status 0 iff every assertion holds.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Verify a table read from a JSON export instead of a fresh build.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Emit the recurrence table (JSON symbolic, CSV evaluated at k = 0..kmax).
    Table,
    /// Time the three lattice strategies at increasing nmax.
    Bench {
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "recurrence,explicit,genfunc"
        )]
        strategies: Vec<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Orthogonality,
    Compatibility,
    Backward,
    Forward,
    Difference,
    Rij,
    Fock,
    Psi,
    Agreement,
    All,
}

impl Suite {
    const EACH: [Suite; 9] = [
        Suite::Agreement,
        Suite::Orthogonality,
        Suite::Compatibility,
        Suite::Backward,
        Suite::Forward,
        Suite::Difference,
        Suite::Rij,
        Suite::Fock,
        Suite::Psi,
    ];

    fn name(self) -> &'static str {
        match self {
            Suite::Orthogonality => "orthogonality",
            Suite::Compatibility => "compatibility",
            Suite::Backward => "backward",
            Suite::Forward => "forward",
            Suite::Difference => "difference",
            Suite::Rij => "rij",
            Suite::Fock => "fock",
            Suite::Psi => "psi",
            Suite::Agreement => "agreement",
            Suite::All => "all",
        }
    }
}

/// Validated run parameters.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub params: CharlierParams,
    pub nmax: usize,
    pub kmax: usize,
    pub cutoff: usize,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_args(a: &ConfigArgs) -> Result<Self> {
        let sigma = a
            .sigma
            .split(',')
            .map(|s| parse_rational(s.trim()))
            .collect::<mcharlier::Result<Vec<Rational>>>()?;
        if sigma.len() != a.r {
            bail!("--sigma has {} entries but --r is {}", sigma.len(), a.r);
        }
        let params = CharlierParams::new(sigma)?;
        if a.cutoff < a.nmax {
            bail!("--cutoff {} must be at least --nmax {}", a.cutoff, a.nmax);
        }
        if a.kmax > a.cutoff {
            bail!("--kmax {} must not exceed --cutoff {}", a.kmax, a.cutoff);
        }
        Ok(Self {
            params,
            nmax: a.nmax,
            kmax: a.kmax,
            cutoff: a.cutoff,
            format: a.format,
            seed: a.seed,
        })
    }
}

/// What a command produced: the rendered text and whether every assertion
/// it made held.
pub struct Outcome {
    pub output: String,
    pub success: bool,
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    if let Some(jobs) = cli.config.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .context("configuring the worker pool")?;
    }
    let config = RunConfig::from_args(&cli.config)?;
    let outcome = match &cli.command {
        Command::Eval { n, k } => cmd_eval(&config, &parse_index(n)?, *k)?,
        Command::Verify { suite, table } => {
            let table = match table {
                Some(path) => Some(load_table(path)?),
                None => None,
            };
            cmd_verify(&config, *suite, table)?
        }
        Command::Table => cmd_table(&config),
        Command::Bench { strategies } => {
            let parsed = strategies
                .iter()
                .map(|s| s.trim().parse::<Strategy>())
                .collect::<mcharlier::Result<Vec<_>>>()?;
            cmd_bench(&config, &parsed)?
        }
    };
    Ok(outcome)
}

pub fn parse_index(s: &str) -> Result<MultiIndex> {
    let entries = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .with_context(|| format!("bad index entry {t:?}"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MultiIndex::new(entries))
}

fn load_table(path: &PathBuf) -> Result<CharlierTable> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading table {}", path.display()))?;
    Ok(CharlierTable::from_json(&text)?)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct EvalReport {
    index: MultiIndex,
    k: usize,
    #[serde(serialize_with = "ser_str")]
    value: Rational,
    methods: Vec<MethodValue>,
    agree: bool,
}

#[derive(Serialize)]
struct MethodValue {
    method: Strategy,
    #[serde(serialize_with = "ser_str")]
    value: Rational,
}

fn ser_str<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(q)
}

/// `C_n(k)` by recurrence, explicit formula and generating function.
pub fn cmd_eval(config: &RunConfig, n: &MultiIndex, k: usize) -> Result<Outcome> {
    config.params.check_index(n)?;
    if n.total() > config.nmax {
        bail!("|n| = {} exceeds --nmax {}", n.total(), config.nmax);
    }
    if k > config.kmax {
        bail!("k = {k} exceeds --kmax {}", config.kmax);
    }
    let methods: Vec<MethodValue> = Strategy::ALL
        .iter()
        .map(|&s| {
            Ok(MethodValue {
                method: s,
                value: strategies::value_at(s, &config.params, n, k)?,
            })
        })
        .collect::<Result<_>>()?;
    let agree = methods.iter().all(|m| m.value == methods[0].value);
    if !agree {
        let detail: Vec<String> = methods
            .iter()
            .map(|m| format!("{}={}", m.method, m.value))
            .collect();
        bail!("methods disagree at n={n}, k={k}: {}", detail.join(" "));
    }
    let report = EvalReport {
        index: n.clone(),
        k,
        value: methods[0].value.clone(),
        methods,
        agree,
    };
    let output = match config.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("index,k,recurrence,explicit,genfunc,agree\n");
            let vals: Vec<String> = report.methods.iter().map(|m| m.value.to_string()).collect();
            let _ = writeln!(s, "\"{}\",{k},{},{}", n, vals.join(","), agree);
            s
        }
        Format::Text => {
            let vals: Vec<String> = report
                .methods
                .iter()
                .map(|m| format!("{}={}", m.method, m.value))
                .collect();
            format!(
                "C{n}({k}) = {}\n{} agree={agree}\n",
                report.value,
                vals.join(" ")
            )
        }
    };
    Ok(Outcome {
        output,
        success: agree,
    })
}

/// One named check inside a suite.
#[derive(Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub pass: bool,
    pub cases: usize,
    /// Informational checks are reported but do not affect the exit status.
    pub informational: bool,
    pub detail: serde_json::Value,
}

#[derive(Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<CheckSummary>,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub config: RunConfig,
    pub pass: bool,
    pub suites: Vec<SuiteResult>,
}

fn identity_summary(rep: &IdentityReport) -> CheckSummary {
    CheckSummary {
        name: rep.check.clone(),
        pass: rep.pass(),
        cases: rep.cases,
        informational: false,
        detail: serde_json::to_value(rep).expect("serializes"),
    }
}

fn interior_summary(rep: &InteriorReport) -> CheckSummary {
    CheckSummary {
        name: rep.check.clone(),
        pass: rep.pass,
        cases: rep.comparisons,
        informational: false,
        detail: serde_json::to_value(rep).expect("serializes"),
    }
}

fn bookkeeping_summary(rep: &BookkeepingReport) -> CheckSummary {
    CheckSummary {
        name: rep.check.clone(),
        pass: rep.pass(),
        cases: rep.cases,
        informational: false,
        detail: serde_json::to_value(rep).expect("serializes"),
    }
}

fn psi_summary(rep: &PsiReport) -> CheckSummary {
    CheckSummary {
        name: format!("psi sigma={}", rep.sigma),
        pass: rep.pass(),
        cases: rep.cases,
        informational: false,
        detail: serde_json::to_value(rep).expect("serializes"),
    }
}

fn orthogonality_summary(reps: &[OrthogonalityReport]) -> CheckSummary {
    let failing: Vec<&OrthogonalityReport> = reps.iter().filter(|r| !r.pass()).collect();
    CheckSummary {
        name: "orthogonality".into(),
        pass: failing.is_empty(),
        cases: reps.iter().map(|r| r.conditions.len()).sum(),
        informational: false,
        detail: serde_json::json!({ "failing": failing }),
    }
}

fn rij_summaries(rep: &RijReport) -> Vec<CheckSummary> {
    let mut printed = identity_summary(&rep.printed);
    printed.informational = true;
    vec![identity_summary(&rep.corrected), printed]
}

/// Every `(k, l)` pair, or a seeded sample of six when there are more.
fn involution_pairs(r: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (0..r)
        .flat_map(|k| (k + 1..r).map(move |l| (k, l)))
        .collect();
    if pairs.len() > 6 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        pairs.shuffle(&mut rng);
        pairs.truncate(6);
        pairs.sort();
    }
    pairs
}

fn fock_suite(config: &RunConfig, table: &CharlierTable) -> Result<Vec<CheckSummary>> {
    let params = table.params();
    let r = params.r();
    let d = config.cutoff;
    let kmax = config.kmax.min(d);
    let mut out = vec![
        interior_summary(&fock::check_canonical_commutators(r, d)),
        interior_summary(&fock::check_number_operators(r, d)),
    ];
    let mut hh = Vec::new();
    let mut sym = Vec::new();
    let pairs = involution_pairs(r, config.seed);
    let k_list: Vec<usize> = (0..=kmax).collect();
    for i in 0..r {
        for j in i + 1..r {
            hh.push(fock::check_commutator_hh(i, j, params, d)?);
            sym.push(fock::check_r_with_pairs(i, j, &k_list, &pairs, params, d)?);
        }
    }
    out.push(interior_summary(&InteriorReport::merge(
        "commutator-hh",
        hh,
    )));

    let mut eigen = Vec::new();
    let mut similarity = Vec::new();
    let mut ladder_x = Vec::new();
    for i in 0..r {
        for k in 0..=kmax.min(d.saturating_sub(1)) {
            if d >= 1 {
                eigen.push(fock::check_eigen(i, k, params, d)?);
            }
        }
        similarity.push(fock::check_similarity(i, params, d)?);
        for k in 1..=kmax {
            ladder_x.push(fock::check_ladder_x(i, k, params, d)?);
        }
    }
    let ladder_y = (0..kmax.min(d))
        .map(|k| fock::check_ladder_y(k, params, d))
        .collect::<mcharlier::Result<Vec<_>>>()?;
    out.push(interior_summary(&InteriorReport::merge("eigen", eigen)));
    out.push(interior_summary(&InteriorReport::merge(
        "similarity",
        similarity,
    )));
    out.push(interior_summary(&InteriorReport::merge(
        "ladder-x", ladder_x,
    )));
    out.push(interior_summary(&InteriorReport::merge(
        "ladder-y", ladder_y,
    )));
    out.push(interior_summary(&InteriorReport::merge("symmetry-r", sym)));
    out.push(interior_summary(&fock::check_reference_states(params, d)?));
    out.push(interior_summary(&fock::check_state_against_table(
        table, kmax, d,
    )?));
    out.push(bookkeeping_summary(&fock::check_norm_bookkeeping(r, kmax)));
    Ok(out)
}

fn run_suite(config: &RunConfig, table: &CharlierTable, suite: Suite) -> Result<Vec<CheckSummary>> {
    let nmax = config.nmax.min(table.max_total_degree());
    Ok(match suite {
        Suite::Agreement => vec![
            identity_summary(&charlier::check_explicit_agreement(table)),
            identity_summary(&charlier::check_path_independence(table)),
            interior_summary(&fock::check_state_against_table(
                table,
                config.kmax,
                config.cutoff.max(table.max_total_degree()),
            )?),
        ],
        Suite::Orthogonality => vec![orthogonality_summary(&charlier::check_orthogonality_all(
            table, nmax,
        ))],
        Suite::Compatibility => vec![identity_summary(&charlier::check_compatibility(table))],
        Suite::Backward => vec![identity_summary(&charlier::check_backward(table))],
        Suite::Forward => vec![identity_summary(&charlier::check_forward(table))],
        Suite::Difference => vec![identity_summary(&charlier::check_combined_difference(
            table,
        ))],
        Suite::Rij => rij_summaries(&charlier::check_rij_all(table)),
        Suite::Fock => fock_suite(config, table)?,
        Suite::Psi => table
            .params()
            .sigma()
            .iter()
            .map(|s| Ok(psi_summary(&fock::check_psi(nmax, config.kmax, s)?)))
            .collect::<Result<_>>()?,
        Suite::All => unreachable!("expanded by the caller"),
    })
}

/// Runs one suite (or all of them) against a freshly built table, or
/// against `table` when one is supplied.
pub fn cmd_verify(
    config: &RunConfig,
    suite: Suite,
    table: Option<CharlierTable>,
) -> Result<Outcome> {
    let table = table.unwrap_or_else(|| build_table(&config.params, config.nmax));
    let selected: Vec<Suite> = match suite {
        Suite::All => Suite::EACH.to_vec(),
        s => vec![s],
    };
    let mut suites = Vec::new();
    for s in selected {
        let checks = run_suite(config, &table, s)?;
        suites.push(SuiteResult {
            suite: s.name().into(),
            pass: checks.iter().all(|c| c.pass || c.informational),
            checks,
        });
    }
    let report = VerifyReport {
        config: RunConfig {
            params: table.params().clone(),
            ..config.clone()
        },
        pass: suites.iter().all(|s| s.pass),
        suites,
    };
    let output = match config.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("suite,check,pass,cases,informational\n");
            for suite in &report.suites {
                for c in &suite.checks {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{}",
                        suite.suite, c.name, c.pass, c.cases, c.informational
                    );
                }
            }
            s
        }
        Format::Text => render_verify_text(&report),
    };
    Ok(Outcome {
        output,
        success: report.pass,
    })
}

fn render_verify_text(report: &VerifyReport) -> String {
    let mut s = String::new();
    for suite in &report.suites {
        for c in &suite.checks {
            let status = match (c.pass, c.informational) {
                (true, _) => "PASS",
                (false, true) => "NOTE",
                (false, false) => "FAIL",
            };
            let _ = writeln!(s, "{status} {}/{} ({} cases)", suite.suite, c.name, c.cases);
            if !c.pass {
                for line in failure_lines(&c.detail).into_iter().take(10) {
                    let _ = writeln!(s, "    {line}");
                }
            }
        }
    }
    let _ = writeln!(s, "{}", if report.pass { "OK" } else { "FAILED" });
    s
}

/// Compact one-line renderings of the failures in a check's JSON detail.
fn failure_lines(detail: &serde_json::Value) -> Vec<String> {
    let mut lines = Vec::new();
    if let Some(fails) = detail.get("failures").and_then(|f| f.as_array()) {
        lines.extend(fails.iter().map(|f| f.to_string()));
    }
    if let Some(fails) = detail.get("failing").and_then(|f| f.as_array()) {
        for rep in fails {
            let index = rep.get("index").map(|v| v.to_string()).unwrap_or_default();
            for c in rep["conditions"].as_array().into_iter().flatten() {
                if c["pass"] == serde_json::Value::Bool(false) {
                    lines.push(format!(
                        "n={index} j={} l={} mantissa={}",
                        c["direction"], c["l"], c["mantissa"]
                    ));
                }
            }
        }
    }
    lines
}

pub fn cmd_table(config: &RunConfig) -> Outcome {
    let table = build_table(&config.params, config.nmax);
    let output = match config.format {
        Format::Json => {
            let mut s = table.to_json();
            s.push('\n');
            s
        }
        Format::Csv => table.to_csv(config.kmax),
        Format::Text => {
            let mut s = String::new();
            for (n, c) in table.iter() {
                let _ = writeln!(s, "C{n}(k) = {c}");
            }
            s
        }
    };
    Outcome {
        output,
        success: true,
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct LevelTiming {
    pub nmax: usize,
    pub wall_us: u128,
    pub peak_bits: u64,
}

#[derive(Serialize, Clone, Debug)]
pub struct BenchRow {
    pub strategy: Strategy,
    pub levels: Vec<LevelTiming>,
}

#[derive(Serialize)]
pub struct BenchReport {
    pub r: usize,
    pub kmax: usize,
    pub agreement: bool,
    pub rows: Vec<BenchRow>,
}

/// Times each strategy on the full lattice at `nmax = 1..=config.nmax`,
/// checking that all strategies produce identical values at every level.
pub fn cmd_bench(config: &RunConfig, chosen: &[Strategy]) -> Result<Outcome> {
    if chosen.is_empty() {
        bail!("at least one strategy is required");
    }
    let mut rows: Vec<BenchRow> = chosen
        .iter()
        .map(|&s| BenchRow {
            strategy: s,
            levels: Vec::new(),
        })
        .collect();
    for level in 1..=config.nmax.max(1) {
        let mut reference: Option<(Strategy, strategies::LatticeValues)> = None;
        for row in rows.iter_mut() {
            let start = Instant::now();
            let values = strategies::compute(row.strategy, &config.params, level, config.kmax);
            let wall_us = start.elapsed().as_micros();
            row.levels.push(LevelTiming {
                nmax: level,
                wall_us,
                peak_bits: values.peak_bits,
            });
            match &reference {
                None => reference = Some((row.strategy, values)),
                Some((name, base)) => {
                    if let Some((n, k)) = base.first_disagreement(&values) {
                        return Err(anyhow!(
                            "verification error: {name} and {} disagree at n={n}, k={k} (nmax={level})",
                            row.strategy
                        ));
                    }
                }
            }
        }
    }
    let report = BenchReport {
        r: config.params.r(),
        kmax: config.kmax,
        agreement: true,
        rows,
    };
    let output = match config.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("strategy,nmax,wall_us,peak_bits\n");
            for row in &report.rows {
                for l in &row.levels {
                    let _ = writeln!(
                        s,
                        "{},{},{},{}",
                        row.strategy, l.nmax, l.wall_us, l.peak_bits
                    );
                }
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            let levels: Vec<String> = (1..=config.nmax.max(1))
                .map(|l| format!("{:>12}", format!("n<={l}")))
                .collect();
            let _ = writeln!(s, "{:<12}{}", "strategy", levels.join(""));
            for row in &report.rows {
                let cells: Vec<String> = row
                    .levels
                    .iter()
                    .map(|l| format!("{:>12}", format!("{}us/{}b", l.wall_us, l.peak_bits)))
                    .collect();
                let _ = writeln!(s, "{:<12}{}", row.strategy.to_string(), cells.join(""));
            }
            let _ = writeln!(s, "agreement: all strategies identical");
            s
        }
    };
    Ok(Outcome {
        output,
        success: true,
    })
}
