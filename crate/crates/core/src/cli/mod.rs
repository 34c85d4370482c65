//! The `simhyp` command line: parses a [`RunConfig`] from flags or a config
//! file, runs one engine, and renders a report headed by the config hash
//! and seed.
//!
//! Exit codes: 0 on success, 1 when a construction or verification fails
//! (the report names the witness), 2 on usage or parse errors.

mod config;

pub use config::{Command, Format, RunConfig, DEFAULT_BUDGET, DEFAULT_SEED};

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use num_bigint::BigUint;
use thiserror::Error;

use crate::actions::{parse_actions, ActionError, ActionSpace};
use crate::census::{
    self, density_bound_from_extension_set, density_table, example_4_9_report, verify_extension_claim, ClassFn,
    CensusError, DensityReport, Method, SimulHyperbolic,
};
use crate::construct::{
    calibrate_extension_constant, find_simul_contracting, find_simul_hyperbolic, sc_extension_set,
    sh_extension_set, ConstructError, ExtensionSet, FamilyRoute, DEFAULT_SEARCH_RADIUS,
};
use crate::group::{GroupError, GroupSpec};
use crate::qm::{combine_nonvanishing, defect_sample, parse_qms, QmError, QmEvaluator};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("failed: {0}")]
    Failure(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ActionError> for CliError {
    fn from(e: ActionError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<QmError> for CliError {
    fn from(e: QmError) -> Self {
        match e {
            QmError::Group(_) | QmError::Invalid(_) => CliError::Usage(e.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<CensusError> for CliError {
    fn from(e: CensusError) -> Self {
        match e {
            CensusError::Unsupported(_) => CliError::Usage(e.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<ConstructError> for CliError {
    fn from(e: ConstructError) -> Self {
        CliError::Failure(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "simhyp", version, about = "Simultaneously hyperbolic elements on tree and line actions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// `free(k)`, `product(...)` or `freeprod(z, z/k, ...)`.
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// `;`-separated: `cayley(factor=k)`, `bass-serre`, `line(a=1,...)`.
    #[arg(long, global = true)]
    pub actions: Option<String>,
    /// `;`-separated: `hom(a=1)`, `count(w=ab)`, `busemann(k)`.
    #[arg(long, global = true)]
    pub qms: Option<String>,
    #[arg(long, global = true)]
    pub n: Option<u32>,
    #[arg(long = "verify-radius", global = true)]
    pub verify_radius: Option<u32>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Calibration trials for the audit run.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// `series` or `bfs`.
    #[arg(long, global = true)]
    pub method: Option<String>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Config file with `key = value` lines; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let mut c = RunConfig::parse(&std::fs::read_to_string(path)?)?;
                c.command = self.command;
                c
            }
            None => RunConfig::new(self.command),
        };
        let mut set = |k: &str, v: Option<String>| -> Result<(), CliError> {
            match v {
                Some(v) => cfg.set(k, &v).map_err(CliError::Usage),
                None => Ok(()),
            }
        };
        set("group", self.group)?;
        set("actions", self.actions)?;
        set("qms", self.qms)?;
        set("n", self.n.map(|x| x.to_string()))?;
        set("verify-radius", self.verify_radius.map(|x| x.to_string()))?;
        set("seed", self.seed.map(|x| x.to_string()))?;
        set("budget", self.budget.map(|x| x.to_string()))?;
        set("method", self.method)?;
        set("threads", self.threads.map(|x| x.to_string()))?;
        set("format", self.format.map(|x| x.to_string()))?;
        set("out", self.out.map(|p| p.display().to_string()))?;
        Ok(cfg)
    }
}

/// Parses `std::env::args`, runs, writes the report; returns the exit code.
pub fn main_entry() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = cli.into_config().and_then(|cfg| {
        let report = run(&cfg)?;
        emit(&cfg, &report)?;
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("simhyp: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn emit(cfg: &RunConfig, report: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => std::fs::write(path, report)?,
        None => print!("{report}"),
    }
    Ok(())
}

/// Runs one command and returns the full report text.
pub fn run(cfg: &RunConfig) -> Result<String, CliError> {
    if let Some(t) = cfg.threads {
        // Only the first call in a process can size the global pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let mut out = format!(
        "# simhyp {}\n# config_hash\t{}\n# seed\t{}\n",
        cfg.command,
        cfg.hash(),
        cfg.seed
    );
    let body = match cfg.command {
        Command::Ball => cmd_ball(cfg)?,
        Command::Density => cmd_density(cfg)?,
        Command::FindSh => cmd_find_sh(cfg)?,
        Command::FindSc => cmd_find_sc(cfg)?,
        Command::ExtensionSet => cmd_extension_set(cfg)?,
        Command::CombineQm => cmd_combine_qm(cfg)?,
        Command::Example49 => cmd_example_4_9(cfg)?,
    };
    out.push_str(&body);
    Ok(out)
}

struct Setup {
    group: GroupSpec,
    spaces: Vec<ActionSpace>,
    qms: Vec<QmEvaluator>,
}

fn setup(cfg: &RunConfig) -> Result<Setup, CliError> {
    if cfg.group.trim().is_empty() {
        return Err(CliError::Usage("--group is required".into()));
    }
    let group = GroupSpec::parse(&cfg.group)?;
    let spaces = parse_actions(&group, &cfg.actions)?;
    let qms = parse_qms(&group, &spaces, &cfg.qms)?;
    Ok(Setup { group, spaces, qms })
}

fn need_spaces(s: &Setup) -> Result<(), CliError> {
    if s.spaces.is_empty() && s.qms.is_empty() {
        return Err(CliError::Usage("--actions or --qms is required".into()));
    }
    Ok(())
}

/// One row of the fixed TSV schema.
struct Row {
    n: u32,
    ball_series: Option<BigUint>,
    ball_bfs: Option<BigUint>,
    hits: Option<BigUint>,
    ratio: Option<(String, String)>,
}

fn render_rows(format: Format, rows: &[Row]) -> String {
    let opt = |o: &Option<BigUint>| o.as_ref().map_or("-".to_string(), |v| v.to_string());
    let cells: Vec<[String; 6]> = rows
        .iter()
        .map(|r| {
            let (num, den) = r.ratio.clone().unwrap_or(("-".into(), "-".into()));
            [r.n.to_string(), opt(&r.ball_series), opt(&r.ball_bfs), opt(&r.hits), num, den]
        })
        .collect();
    let header = ["n", "ball_series", "ball_bfs", "hits", "ratio_num", "ratio_den"];
    let mut s = String::new();
    match format {
        Format::Tsv => {
            s += &header.join("\t");
            s.push('\n');
            for c in &cells {
                s += &c.join("\t");
                s.push('\n');
            }
        }
        Format::Table => {
            let mut w: Vec<usize> = header.iter().map(|h| h.len()).collect();
            for c in &cells {
                for (i, x) in c.iter().enumerate() {
                    w[i] = w[i].max(x.len());
                }
            }
            let line = |c: &[String]| {
                let parts: Vec<String> = c.iter().enumerate().map(|(i, x)| format!("{x:>w$}", w = w[i])).collect();
                parts.join("  ") + "\n"
            };
            s += &line(&header.map(String::from));
            for c in &cells {
                s += &line(c);
            }
        }
    }
    s
}

fn cmd_ball(cfg: &RunConfig) -> Result<String, CliError> {
    let group = GroupSpec::parse(&cfg.group)?;
    let n = cfg.n.unwrap_or(8);
    let series = match census::sphere_series(&group, n) {
        Ok(s) => Some(s.balls()),
        Err(CensusError::Unsupported(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let bfs = if cfg.method == Method::Bfs || series.is_none() {
        let sizes = census::bfs_sphere_sizes(&group, n, census::DEFAULT_BUDGET)?;
        let mut acc = 0u64;
        Some(
            sizes
                .into_iter()
                .map(|s| {
                    acc += s;
                    BigUint::from(acc)
                })
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };
    if let (Some(a), Some(b)) = (&series, &bfs) {
        if let Some(i) = (0..a.len()).find(|&i| a[i] != b[i]) {
            return Err(CliError::Failure(format!("series and bfs disagree at n = {i}: {} vs {}", a[i], b[i])));
        }
    }
    let rows: Vec<Row> = (0..=n)
        .map(|i| Row {
            n: i,
            ball_series: series.as_ref().map(|v| v[i as usize].clone()),
            ball_bfs: bfs.as_ref().map(|v| v[i as usize].clone()),
            hits: None,
            ratio: None,
        })
        .collect();
    Ok(render_rows(cfg.format, &rows))
}

fn cmd_density(cfg: &RunConfig) -> Result<String, CliError> {
    let s = setup(cfg)?;
    need_spaces(&s)?;
    let n = cfg.n.unwrap_or(6);
    let reports: Vec<DensityReport> = if s.qms.is_empty() {
        let class = SimulHyperbolic::new(s.spaces.clone());
        density_table(&s.group, &class, n, cfg.method)?
    } else {
        let class = ClassFn::new("sh+qm", |g: &crate::group::GroupElement| {
            s.spaces.iter().all(|sp| sp.is_hyperbolic(g).unwrap_or(false))
                && s.qms.iter().all(|q| q.evaluate(g).map(|v| v != 0.into()).unwrap_or(false))
        });
        density_table(&s.group, &class, n, Method::Bfs)?
    };
    let rows: Vec<Row> = reports
        .iter()
        .map(|r| Row {
            n: r.n,
            ball_series: (r.method == Method::Series).then(|| r.ball.clone()),
            ball_bfs: (r.method == Method::Bfs).then(|| r.ball.clone()),
            hits: Some(r.hits.clone()),
            ratio: Some((r.ratio.numer().to_string(), r.ratio.denom().to_string())),
        })
        .collect();
    Ok(render_rows(cfg.format, &rows))
}

fn calibration_audit(cfg: &RunConfig, s: &Setup, pool: &[crate::group::GroupElement]) -> String {
    let trees: Vec<ActionSpace> = s.spaces.iter().filter(|x| x.is_tree()).cloned().collect();
    if trees.is_empty() {
        return String::new();
    }
    match calibrate_extension_constant(&trees, pool, cfg.budget, cfg.seed) {
        Ok(c) => format!("calibration_audit\tD={} trials={} seed={}\n", c.d, c.trials, c.seed),
        Err(e) => format!("calibration_audit\tskipped: {e}\n"),
    }
}

fn cmd_find_sh(cfg: &RunConfig) -> Result<String, CliError> {
    let s = setup(cfg)?;
    need_spaces(&s)?;
    let cert = find_simul_hyperbolic(&s.spaces, &s.qms, cfg.verify_radius.unwrap_or(DEFAULT_SEARCH_RADIUS))?;
    if !cert.recheck(&s.spaces, &s.qms)? {
        return Err(CliError::Failure(format!("recheck failed for {}", s.group.render(&cert.element))));
    }
    let mut out = cert.render(&s.group);
    out += &calibration_audit(cfg, &s, std::slice::from_ref(&cert.element));
    out += "status\tPASS\n";
    Ok(out)
}

fn cmd_find_sc(cfg: &RunConfig) -> Result<String, CliError> {
    let s = setup(cfg)?;
    if s.spaces.is_empty() {
        return Err(CliError::Usage("--actions is required".into()));
    }
    let cert = find_simul_contracting(&s.spaces, None, None)?;
    if !cert.recheck(&s.spaces)? {
        return Err(CliError::Failure(format!("recheck failed for {}", s.group.render(&cert.element))));
    }
    let mut out = cert.render(&s.group);
    if let Some(f) = &cert.f_family {
        out += &calibration_audit(cfg, &s, &f.base);
    }
    out += "status\tPASS\n";
    Ok(out)
}

fn cmd_extension_set(cfg: &RunConfig) -> Result<String, CliError> {
    let s = setup(cfg)?;
    need_spaces(&s)?;
    let radius = cfg.verify_radius.unwrap_or(6);
    let all_trees = s.qms.is_empty() && s.spaces.iter().all(|x| x.action_type() == crate::actions::ActionType::GeneralType);
    let set: ExtensionSet = if all_trees {
        sc_extension_set(&s.spaces, Some(radius), FamilyRoute::Search)?
    } else {
        sh_extension_set(&s.spaces, &s.qms, Some(radius))?
    };
    let class = ClassFn::new(format!("{}-target", set.target), |g: &crate::group::GroupElement| {
        set.in_target(g).unwrap_or(false)
    });
    let claim = verify_extension_claim(&set.elements, &s.group, &class, radius)?;
    let bound = density_bound_from_extension_set(&set.elements, &s.group)?;
    let mut out = set.render(&s.group);
    let _ = writeln!(
        out,
        "extension_claim\tchecked={} direct={} via_prefix={} max_witness_distance={}",
        claim.checked, claim.direct, claim.via_prefix, claim.max_witness_distance
    );
    let _ = writeln!(out, "density_bound\t{bound}");
    out += &calibration_audit(cfg, &s, &set.base);
    out += "status\tPASS\n";
    Ok(out)
}

fn cmd_combine_qm(cfg: &RunConfig) -> Result<String, CliError> {
    let s = setup(cfg)?;
    if s.qms.is_empty() {
        return Err(CliError::Usage("--qms is required".into()));
    }
    let combined = combine_nonvanishing(&s.qms, cfg.verify_radius.unwrap_or(DEFAULT_SEARCH_RADIUS))?;
    let mut out = format!("element\t{}\n", s.group.render(&combined.element));
    for (q, v) in s.qms.iter().zip(&combined.values) {
        let _ = writeln!(out, "value\t{}\t{v}", q.label());
    }
    for step in &combined.steps {
        let _ = writeln!(out, "step\t{step:?}");
    }
    for q in &s.qms {
        let sampled = defect_sample(q, cfg.budget, 8, cfg.seed)?;
        let _ = writeln!(out, "defect_sample\t{}\tsampled={sampled} declared={}", q.label(), q.defect());
    }
    out += "status\tPASS\n";
    Ok(out)
}

fn cmd_example_4_9(cfg: &RunConfig) -> Result<String, CliError> {
    let audit = example_4_9_report(cfg.n.unwrap_or(20), cfg.verify_radius.unwrap_or(6))?;
    if !audit.consistent() {
        return Err(CliError::Failure("exhaustive counts disagree with the series".into()));
    }
    Ok(match cfg.format {
        Format::Tsv => audit.to_tsv(),
        Format::Table => audit.to_string(),
    })
}
