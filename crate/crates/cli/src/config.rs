//! The TOML experiment config.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Gen,
    VerifyClaims,
    Solve,
    ForcedCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Gen => "gen",
            Command::VerifyClaims => "verify-claims",
            Command::Solve => "solve",
            Command::ForcedCheck => "forced-check",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    #[default]
    Generate,
    File,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    #[default]
    Product,
    Random,
}

/// Which space `solve` works on: the family's own space, or the refined
/// `C ∪ E` space of the construction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveSpace {
    #[default]
    Family,
    Pipeline,
}

/// Solvers run by `solve`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Disjoint,
    Almost,
}

fn default_solvers() -> Vec<Solver> {
    vec![Solver::Disjoint, Solver::Almost]
}

fn one() -> usize {
    1
}

fn two() -> usize {
    2
}

fn default_witness_limit() -> usize {
    32
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub commands: Vec<Command>,
    #[serde(default)]
    pub source: Source,
    #[serde(default)]
    pub generator: Generator,
    /// Family JSON to read when `source = "file"`.
    pub family_path: Option<PathBuf>,
    /// Where `gen` saves the family, if anywhere.
    pub family_out: Option<PathBuf>,
    #[serde(rename = "mu_B", default)]
    pub mu_b: usize,
    #[serde(rename = "mu_D", default)]
    pub mu_d: usize,
    #[serde(rename = "mu_C", default)]
    pub mu_c: usize,
    #[serde(default = "one", alias = "threshold")]
    pub t: usize,
    /// Ground-set size for the random generator.
    pub n: Option<usize>,
    #[serde(default = "one")]
    pub depth: usize,
    #[serde(default = "one")]
    pub budget: usize,
    #[serde(rename = "size_I", default = "two")]
    pub size_i: usize,
    #[serde(default = "one")]
    pub m_max: usize,
    /// Bound for the almost-disjoint solver; defaults to `size_I` on the
    /// pipeline space and 2 otherwise.
    pub cap: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_witness_limit")]
    pub witness_limit: usize,
    #[serde(default)]
    pub solve_space: SolveSpace,
    #[serde(default = "default_solvers")]
    pub solvers: Vec<Solver>,
    /// Point lists for `forced-check`; defaults to the ground set alone.
    pub collection: Option<Vec<Vec<usize>>>,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let config: Config = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Config::from_toml(&text)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.to_string()));
        if self.commands.is_empty() {
            return bad("`commands` must list at least one of gen, verify-claims, solve, forced-check");
        }
        if self.source == Source::File && self.family_path.is_none() {
            return bad("`source = \"file\"` needs `family_path`");
        }
        if self.source == Source::Generate && self.generator == Generator::Random && self.n.is_none() {
            return bad("the random generator needs `n`");
        }
        if self.t == 0 || self.depth == 0 {
            return bad("`t` and `depth` must be at least 1");
        }
        if self.cap == Some(0) {
            return bad("`cap` must be at least 1");
        }
        Ok(())
    }
}
