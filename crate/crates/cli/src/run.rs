//! Command execution and report assembly.

use resolab_core::construction::{blocks_of, split_blocks, Construction, PairNwd};
use resolab_core::independence::{check_condition1, check_independent, check_separating, product_family, random_family, RandomDraw};
use resolab_core::solvers::{atoms, max_almost_disjoint_dense, max_disjoint_dense, validate_almost_family};
use resolab_core::{Error, PartitionFamily, PointSet, TraceSpace};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Command, Config, Generator, SolveSpace, Solver, Source};
use crate::{load_family, save_family, CliError};

/// Report and process exit code of one run.
#[derive(Debug)]
pub struct Outcome {
    pub report: Value,
    pub exit_code: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Pass,
    Fail,
    /// Capacity exceeded or an internal error: counts as a failed verdict.
    Error,
    /// Sizing or parameter errors: the config asked for something invalid.
    ConfigError,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error | Status::ConfigError => "error",
        }
    }

    fn of(holds: bool) -> Self {
        if holds {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

fn error_status(e: &Error) -> Status {
    match e {
        Error::Capacity(_) | Error::Invariant(_) => Status::Error,
        _ => Status::ConfigError,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Capacity(_) => "capacity",
        Error::Sizing(_) => "sizing",
        Error::Invariant(_) => "internal",
        _ => "precondition",
    }
}

fn error_value(e: &Error) -> Value {
    json!({ "kind": error_kind(e), "message": e.to_string() })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

/// The first `limit` items and the total count.
fn truncated<T: Serialize>(items: &[T], limit: usize) -> Value {
    json!({
        "total": items.len(),
        "shown": items.iter().take(limit).map(to_value).collect::<Vec<_>>(),
    })
}

/// Accumulates one command's fields and its worst status.
struct Section {
    status: Status,
    body: serde_json::Map<String, Value>,
}

impl Section {
    fn new(command: Command) -> Self {
        let mut body = serde_json::Map::new();
        body.insert("command".into(), json!(command.name()));
        Section {
            status: Status::Pass,
            body,
        }
    }

    fn put(&mut self, key: &str, value: Value) {
        self.body.insert(key.into(), value);
    }

    fn verdict(&mut self, key: &str, holds: bool, value: Value) {
        self.status = self.status.max(Status::of(holds));
        self.put(key, value);
    }

    fn error(&mut self, key: &str, e: &Error) {
        self.status = self.status.max(error_status(e));
        self.put(key, json!({ "error": error_value(e) }));
    }

    fn finish(mut self) -> (Status, Value) {
        self.put("status", json!(self.status.as_str()));
        (self.status, Value::Object(self.body))
    }
}

struct Family {
    family: PartitionFamily,
    /// Set when the random generator rejected its draw.
    rejected: Option<resolab_core::Condition>,
}

fn acquire(config: &Config) -> Result<Family, CliError> {
    match (config.source, config.generator) {
        (Source::File, _) => {
            let path = config.family_path.as_ref().expect("validated");
            Ok(Family {
                family: load_family(path)?,
                rejected: None,
            })
        }
        (Source::Generate, Generator::Product) => Ok(Family {
            family: product_family(config.mu_b, config.mu_d, config.t)?,
            rejected: None,
        }),
        (Source::Generate, Generator::Random) => {
            let n = config.n.expect("validated");
            let draw = random_family(config.mu_c + config.mu_d, n, config.depth, config.t, config.seed)?;
            let rejected = match &draw {
                RandomDraw::Accepted(_) => None,
                RandomDraw::Rejected { failing, .. } => Some(failing.clone()),
            };
            let (c, d) = split_blocks(draw.family(), config.mu_c)?;
            Ok(Family {
                family: c.concat(&d)?,
                rejected,
            })
        }
    }
}

/// Runs every command of `config`, with `seed_override` replacing the config
/// seed. Errors here are usage errors (exit 2); errors inside a command are
/// recorded in its report section.
pub fn run(config: &Config, seed_override: Option<u64>) -> Result<Outcome, CliError> {
    let mut config = config.clone();
    if let Some(seed) = seed_override {
        config.seed = seed;
    }
    let acquired = acquire(&config)?;
    let mut construction: Option<Result<Construction, Error>> = None;
    let mut results = Vec::new();
    let mut overall = Status::Pass;
    for &command in &config.commands {
        let (status, body) = match command {
            Command::Gen => gen(&config, &acquired)?,
            Command::VerifyClaims => {
                let c = construction.get_or_insert_with(|| build(&config, &acquired.family));
                verify_claims(&config, c)
            }
            Command::Solve => {
                let c = (config.solve_space == SolveSpace::Pipeline)
                    .then(|| &*construction.get_or_insert_with(|| build(&config, &acquired.family)));
                solve(&config, &acquired.family, c)
            }
            Command::ForcedCheck => forced_check(&config, &acquired.family)?,
        };
        overall = overall.max(status);
        results.push(body);
    }
    let exit_code = match overall {
        Status::Pass => 0,
        Status::Fail | Status::Error => 1,
        Status::ConfigError => 2,
    };
    let report = json!({
        "config": to_value(&config),
        "seed": config.seed,
        "results": results,
        "status": overall.as_str(),
        "exit_code": exit_code,
    });
    Ok(Outcome { report, exit_code })
}

fn build(config: &Config, family: &PartitionFamily) -> Result<Construction, Error> {
    let (c, d) = blocks_of(family)?;
    Construction::new(c, d, config.size_i, config.m_max)
}

fn gen(config: &Config, acquired: &Family) -> Result<(Status, Value), CliError> {
    let family = &acquired.family;
    let mut s = Section::new(Command::Gen);
    let mut blocks = serde_json::Map::new();
    for e in family.entries() {
        let count = blocks.entry(e.block.as_str()).or_insert(json!(0));
        *count = json!(count.as_u64().unwrap_or(0) + 1);
    }
    s.put(
        "family",
        json!({ "n": family.n(), "partitions": family.len(), "blocks": blocks }),
    );
    let depth = config.depth.min(family.len());
    let verdict = match &acquired.rejected {
        Some(failing) => resolab_core::Verdict::fail(failing.clone()),
        None if family.is_empty() => resolab_core::Verdict::pass(),
        None => check_independent(family, depth, config.t)?,
    };
    s.verdict(
        "independence",
        verdict.holds,
        json!({ "depth": depth, "t": config.t, "verdict": to_value(&verdict) }),
    );
    let unseparated = check_separating(family).map(|u| json!([u.0, u.1]));
    s.put("unseparated_points", unseparated.unwrap_or(Value::Null));
    if let Some(path) = &config.family_out {
        save_family(path, family)?;
        s.put("family_out", json!(path.display().to_string()));
    }
    Ok(s.finish())
}

fn pair_value(p: &PairNwd, limit: usize) -> Value {
    let rows: Vec<Value> = p
        .witnesses
        .iter()
        .zip(&p.copies)
        .map(|(w, m)| json!({ "base": to_value(&w.base), "extension": to_value(&w.extension), "copy": m }))
        .collect();
    json!({
        "alpha": p.alpha,
        "beta": p.beta,
        "holds": p.holds,
        "failing": to_value(&p.failing),
        "replay_holds": p.replay_holds,
        "direct_holds": p.direct_holds,
        "witnesses": truncated(&rows, limit),
    })
}

fn verify_claims(config: &Config, construction: &Result<Construction, Error>) -> (Status, Value) {
    let mut s = Section::new(Command::VerifyClaims);
    let c = match construction {
        Ok(c) => c,
        Err(e) => {
            s.error("construction", e);
            return s.finish();
        }
    };
    let limit = config.witness_limit;
    let injection: Vec<Value> = c
        .injection()
        .iter()
        .map(|(idx, j)| {
            json!({
                "a": [c.split().i_labels[idx.lo], c.split().i_labels[idx.hi]],
                "m": idx.m,
                "j": j,
            })
        })
        .collect();
    s.put("split", json!({ "I": c.split().i_labels, "J": c.split().j_labels }));
    s.put("injection", json!(injection));

    match check_condition1(c.c_block(), c.d_block(), config.depth, config.t) {
        Ok(failure) => s.verdict("condition1", failure.is_none(), json!({ "failure": to_value(&failure) })),
        Err(e) => s.error("condition1", &e),
    }
    match c.verify_claim1(config.depth) {
        Ok(r) => s.verdict("claim1", r.holds, to_value(&r)),
        Err(e) => s.error("claim1", &e),
    }
    let space = match c.assemble_space(config.depth, config.t) {
        Ok(space) => space,
        Err(e) => {
            s.error("space", &e);
            return s.finish();
        }
    };
    s.put(
        "space",
        json!({ "n": space.n(), "partitions": space.family().len(), "basic_opens": space.basic_opens().len() }),
    );
    match c.verify_claim2(&space) {
        Ok(r) => s.verdict(
            "claim2",
            r.holds,
            json!({
                "holds": r.holds,
                "checked": r.checked,
                "failure": to_value(&r.failure),
                "chains": truncated(&r.chains, limit),
            }),
        ),
        Err(e) => s.error("claim2", &e),
    }
    match c.verify_claim3a(&space) {
        Ok(r) => s.verdict("claim3a", r.holds, to_value(&r)),
        Err(e) => s.error("claim3a", &e),
    }
    match c.verify_claim3b(&space) {
        Ok(r) => s.verdict(
            "claim3b",
            r.holds,
            json!({
                "holds": r.holds,
                "pairs": r.pairs.iter().map(|p| pair_value(p, limit)).collect::<Vec<_>>(),
            }),
        ),
        Err(e) => s.error("claim3b", &e),
    }
    s.finish()
}

fn solve(config: &Config, family: &PartitionFamily, construction: Option<&Result<Construction, Error>>) -> (Status, Value) {
    let mut s = Section::new(Command::Solve);
    let limit = config.witness_limit;
    let (space, certificate) = match construction {
        None => match TraceSpace::new(family.clone(), config.depth, config.t) {
            Ok(space) => (space, None),
            Err(e) => {
                s.error("space", &e);
                return s.finish();
            }
        },
        Some(Err(e)) => {
            s.error("construction", e);
            return s.finish();
        }
        Some(Ok(c)) => match c.assemble_space(config.depth, config.t) {
            Ok(space) => {
                let cands: Vec<PointSet> = c
                    .split()
                    .i_labels
                    .iter()
                    .map(|a| c.candidate(a).expect("I-labels are D-labels").clone())
                    .collect();
                (space, Some(cands))
            }
            Err(e) => {
                s.error("space", &e);
                return s.finish();
            }
        },
    };
    s.put(
        "space",
        json!({
            "kind": if certificate.is_some() { "pipeline" } else { "family" },
            "n": space.n(),
            "partitions": space.family().len(),
            "depth": space.depth(),
        }),
    );
    s.put("dispersion", json!(space.dispersion()));
    let a = atoms(&space);
    s.put("atoms", truncated(&a, limit));

    if config.solvers.contains(&Solver::Disjoint) {
        match max_disjoint_dense(&space) {
            Ok(r) => {
                let maximal = r.count >= space.dispersion();
                s.put("max_disjoint_dense", to_value(&r));
                s.put("maximally_resolvable", json!(maximal));
            }
            Err(e) => s.error("max_disjoint_dense", &e),
        }
    }
    if !config.solvers.contains(&Solver::Almost) {
        return s.finish();
    }

    let cap = config
        .cap
        .unwrap_or_else(|| certificate.as_ref().map_or(2, Vec::len));
    let seed = match &certificate {
        Some(cands) => match validate_almost_family(&space, config.budget, cands) {
            Ok(()) => {
                s.put("certificate", json!({ "valid": true, "size": cands.len() }));
                Some(cands.as_slice())
            }
            Err(e) => {
                s.put("certificate", json!({ "valid": false, "reason": e.to_string() }));
                None
            }
        },
        None => None,
    };
    match max_almost_disjoint_dense(&space, config.budget, cap, seed) {
        Ok(r) => s.verdict(
            "max_almost_disjoint_dense",
            r.count >= cap,
            json!({ "cap": cap, "budget": config.budget, "count": r.count, "witness": r.witness }),
        ),
        Err(e) => s.error("max_almost_disjoint_dense", &e),
    }
    s.finish()
}

fn forced_check(config: &Config, family: &PartitionFamily) -> Result<(Status, Value), CliError> {
    let mut s = Section::new(Command::ForcedCheck);
    let n = family.n();
    let collection: Vec<PointSet> = match &config.collection {
        None => vec![PointSet::full(n)],
        Some(lists) => lists
            .iter()
            .map(|pts| PointSet::from_points(n, pts.iter().copied()))
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Config(format!("`collection`: {e}")))?,
    };
    s.put("collection", json!(collection));
    match TraceSpace::new(family.clone(), config.depth, config.t).and_then(|space| space.is_d_forced(&collection)) {
        Ok(v) => s.verdict("forced", v.holds, to_value(&v)),
        Err(e) => s.error("forced", &e),
    }
    Ok(s.finish())
}
