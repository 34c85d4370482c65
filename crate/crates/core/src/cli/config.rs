//! Run configuration: flags, or a `key = value` file with the same names.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use super::CliError;
use crate::census::Method;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::Subcommand)]
pub enum Command {
    /// Ball sizes for n = 0..=N.
    Ball,
    /// Density of simultaneously hyperbolic elements.
    Density,
    /// A simultaneously hyperbolic element, with certificate.
    FindSh,
    /// A simultaneously contracting element, with certificate.
    FindSc,
    /// A finite extension set, verified on a ball, with its density bound.
    ExtensionSet,
    /// An element on which every quasimorphism is nonzero.
    CombineQm,
    /// Growth audit of the F2 × F3 non-SH count.
    #[command(name = "example-4-9")]
    Example49,
}

impl Command {
    const NAMES: [(&'static str, Command); 7] = [
        ("ball", Command::Ball),
        ("density", Command::Density),
        ("find-sh", Command::FindSh),
        ("find-sc", Command::FindSc),
        ("extension-set", Command::ExtensionSet),
        ("combine-qm", Command::CombineQm),
        ("example-4-9", Command::Example49),
    ];
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = Self::NAMES.iter().find(|(_, c)| c == self).map(|(n, _)| *n).expect("all named");
        f.write_str(name)
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::NAMES
            .iter()
            .find(|(n, _)| *n == s.trim())
            .map(|(_, c)| *c)
            .ok_or_else(|| format!("unknown command '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Tsv,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Table => "table",
            Format::Tsv => "tsv",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub group: String,
    pub actions: String,
    pub qms: String,
    pub n: Option<u32>,
    pub verify_radius: Option<u32>,
    pub seed: u64,
    pub budget: usize,
    pub method: Method,
    pub threads: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_BUDGET: usize = 2000;

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            group: String::new(),
            actions: String::new(),
            qms: String::new(),
            n: None,
            verify_radius: None,
            seed: DEFAULT_SEED,
            budget: DEFAULT_BUDGET,
            method: Method::Series,
            threads: None,
            format: Format::Table,
            out: None,
        }
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut command = None;
        let mut cfg = RunConfig::new(Command::Ball);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |m: String| CliError::Usage(format!("config line {}: {m}", lineno + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key = value".into()))?;
            let value = value.trim();
            match key.trim() {
                "command" => command = Some(value.parse().map_err(bad)?),
                key => cfg.set(key, value).map_err(bad)?,
            }
        }
        cfg.command = command.ok_or_else(|| CliError::Usage("config has no command".into()))?;
        Ok(cfg)
    }

    pub(crate) fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let num = |v: &str| v.parse::<u64>().map_err(|e| format!("{key}: {e}"));
        match key {
            "group" => self.group = value.to_string(),
            "actions" => self.actions = value.to_string(),
            "qms" => self.qms = value.to_string(),
            "n" => self.n = Some(num(value)? as u32),
            "verify-radius" => self.verify_radius = Some(num(value)? as u32),
            "seed" => self.seed = num(value)?,
            "budget" => self.budget = num(value)? as usize,
            "method" => self.method = value.parse()?,
            "threads" => self.threads = Some(num(value)? as usize),
            "format" => {
                self.format = match value {
                    "table" => Format::Table,
                    "tsv" => Format::Tsv,
                    other => return Err(format!("unknown format '{other}'")),
                }
            }
            "out" => self.out = Some(PathBuf::from(value)),
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    /// Canonical text; [`RunConfig::parse`] inverts it.
    pub fn to_text(&self) -> String {
        let mut s = format!("command = {}\n", self.command);
        for (k, v) in [("group", &self.group), ("actions", &self.actions), ("qms", &self.qms)] {
            if !v.is_empty() {
                s += &format!("{k} = {v}\n");
            }
        }
        if let Some(n) = self.n {
            s += &format!("n = {n}\n");
        }
        if let Some(r) = self.verify_radius {
            s += &format!("verify-radius = {r}\n");
        }
        s += &format!("seed = {}\nbudget = {}\nmethod = {}\n", self.seed, self.budget, self.method);
        if let Some(t) = self.threads {
            s += &format!("threads = {t}\n");
        }
        s += &format!("format = {}\n", self.format);
        if let Some(o) = &self.out {
            s += &format!("out = {}\n", o.display());
        }
        s
    }

    /// First 16 hex digits of the SHA-256 of the canonical text, without
    /// the output path and thread count.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out = None;
        c.threads = None;
        let digest = Sha256::digest(c.to_text().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
