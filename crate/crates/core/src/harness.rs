// Copyright 2026 The hspsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Command-line configuration, mode dispatch and report serialization.

use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::cascade::BranchState;
use crate::dense::DEFAULT_DENSE_CAP;
use crate::engine::{
    choose_s_bounded, choose_s_exact, decide_trivial, identify_subgroup, invert_exact,
    one_sided_trivial, ConditionalMatrix, EngineOptions, DEFAULT_S_CAP,
};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::oracle::{HiddenOracle, QueryLedger};
use crate::rational::{from_text, mat_to_text, q, to_text, Q};
use crate::subgroup::{generating_set, Subgroup, SubgroupCatalog};
use crate::verify::{success_bound, verify_group, Check, VerifyOptions};

/// Environment variable overriding the dense amplitude cap.
pub const DENSE_CAP_ENV: &str = "HSPSIM_DENSE_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Subgroups,
    Simulate,
    Matrix,
    Identify,
    DecideTrivial,
    OneSided,
    Verify,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Subgroups => "subgroups",
            Mode::Simulate => "simulate",
            Mode::Matrix => "matrix",
            Mode::Identify => "identify",
            Mode::DecideTrivial => "decide-trivial",
            Mode::OneSided => "one-sided",
            Mode::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HiddenSelector {
    All,
    Members(Vec<usize>),
}

fn parse_hidden(s: &str) -> std::result::Result<HiddenSelector, String> {
    if s.trim() == "all" {
        return Ok(HiddenSelector::All);
    }
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| format!("`{x}` is not an element id")))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(HiddenSelector::Members)
}

fn parse_even_s(s: &str) -> std::result::Result<u32, String> {
    let v: u32 = s.parse().map_err(|_| format!("`{s}` is not a count"))?;
    if v < 2 || v % 2 == 1 {
        return Err(format!("s must be even and at least 2, got {v}"));
    }
    Ok(v)
}

fn parse_epsilon(s: &str) -> std::result::Result<Q, String> {
    let e = from_text(s).ok_or_else(|| format!("`{s}` is not a rational"))?;
    if e <= Q::from_integer(0.into()) || e >= Q::from_integer(1.into()) {
        return Err(format!("epsilon must lie in (0, 1), got {s}"));
    }
    Ok(e)
}

#[derive(Debug, Parser)]
#[command(name = "hspsim", version, about = "Exact simulator of the polynomial-query hidden subgroup algorithm")]
struct Cli {
    /// What to run.
    #[arg(value_enum)]
    mode: Mode,
    /// Group spec: Z:<n>, Z2^<k>, D:<n>, S:<n>, Q8, inline JSON table or @path.json.
    #[arg(long)]
    group: String,
    /// Hidden subgroup as a member list (e.g. 0,3) or `all`.
    #[arg(long, value_parser = parse_hidden, default_value = "all")]
    hidden: HiddenSelector,
    /// Number of couplets (even, >= 2).
    #[arg(long, value_parser = parse_even_s)]
    s: Option<u32>,
    /// Target error for simulate mode, as p/q.
    #[arg(long, value_parser = parse_epsilon)]
    epsilon: Option<Q>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Dense simulator amplitude cap (overrides HSPSIM_DENSE_CAP).
    #[arg(long)]
    dense_cap: Option<u128>,
    /// Upper limit for s during escalation.
    #[arg(long, default_value_t = DEFAULT_S_CAP)]
    s_cap: u32,
    /// Include branch dumps in simulate output.
    #[arg(long)]
    debug_branches: bool,
    /// Record wall time in the report (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub mode: Mode,
    pub group: String,
    pub hidden: HiddenSelector,
    pub s: Option<u32>,
    pub epsilon: Option<Q>,
    pub seed: u64,
    pub format: Format,
    pub dense_cap: u128,
    pub s_cap: u32,
    pub debug_branches: bool,
    pub timing: bool,
}

/// Parses `argv` (without the program name). Usage errors carry clap's
/// message, which names the offending flag.
pub fn parse_config<I, T>(argv: I) -> std::result::Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(std::iter::once("hspsim".into()).chain(argv.into_iter().map(Into::into)))?;
    let dense_cap = cli
        .dense_cap
        .or_else(|| std::env::var(DENSE_CAP_ENV).ok().and_then(|v| v.trim().parse().ok()))
        .unwrap_or(DEFAULT_DENSE_CAP);
    Ok(RunConfig {
        mode: cli.mode,
        group: cli.group,
        hidden: cli.hidden,
        s: cli.s,
        epsilon: cli.epsilon,
        seed: cli.seed,
        format: cli.format,
        dense_cap,
        s_cap: cli.s_cap,
        debug_branches: cli.debug_branches,
        timing: cli.timing,
    })
}

impl RunConfig {
    pub fn new(mode: Mode, group: &str) -> Self {
        RunConfig {
            mode,
            group: group.to_string(),
            hidden: HiddenSelector::All,
            s: None,
            epsilon: None,
            seed: 0,
            format: Format::Json,
            dense_cap: DEFAULT_DENSE_CAP,
            s_cap: DEFAULT_S_CAP,
            debug_branches: false,
            timing: false,
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "mode": self.mode.name(),
            "group": self.group,
            "hidden": match &self.hidden {
                HiddenSelector::All => json!("all"),
                HiddenSelector::Members(m) => json!(m),
            },
            "s": self.s,
            "epsilon": self.epsilon.as_ref().map(to_text),
            "seed": self.seed,
            "dense_cap": self.dense_cap.to_string(),
            "s_cap": self.s_cap,
        })
    }

    fn load_group(&self) -> Result<FiniteGroup> {
        match self.group.strip_prefix('@') {
            Some(path) => Ok(FiniteGroup::build(&std::fs::read_to_string(path)?)?),
            None => Ok(FiniteGroup::build(&self.group)?),
        }
    }
}

/// Flat table used for CSV output.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    /// Row-major `row,col,value` flattening.
    pub fn from_matrix(m: &[Vec<Q>]) -> Self {
        let mut t = Table::new(&["row", "col", "value"]);
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t.push(vec![i.to_string(), j.to_string(), to_text(v)]);
            }
        }
        t
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub config: Value,
    pub payload: Value,
    pub ledger: QueryLedger,
    pub checks: Vec<Check>,
    pub wall_time_ms: Option<u128>,
    pub table: Table,
}

impl Report {
    pub fn empty(config: &RunConfig) -> Self {
        Report {
            config: config.to_json(),
            payload: Value::Object(Map::new()),
            ledger: QueryLedger::new(),
            checks: Vec::new(),
            wall_time_ms: None,
            table: Table::default(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "config": self.config,
            "payload": self.payload,
            "ledger": self.ledger.to_json(),
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        });
        if let Some(ms) = self.wall_time_ms {
            v["wall_time_ms"] = json!(ms as u64);
        }
        v
    }
}

/// Renders a report. JSON keys are sorted; CSV is the mode's flat table.
pub fn serialize(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(&report.to_json()).expect("json");
            out.push(b'\n');
            out
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&report.table.header).expect("csv");
            for row in &report.table.rows {
                w.write_record(row).expect("csv");
            }
            w.into_inner().expect("csv")
        }
    }
}

fn hidden_list(group: &FiniteGroup, catalog: &SubgroupCatalog, sel: &HiddenSelector) -> Result<Vec<Subgroup>> {
    match sel {
        HiddenSelector::All => Ok(catalog.subgroups().to_vec()),
        HiddenSelector::Members(m) => Ok(vec![Subgroup::new(group, m)?]),
    }
}

fn members_text(k: &Subgroup) -> String {
    k.members().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Instance results are fanned out in parallel and reassembled in catalog order.
fn fan_out<T, F>(hidden: &[Subgroup], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Subgroup) -> Result<T> + Sync + Send,
{
    hidden.par_iter().map(f).collect()
}

fn single_or_list(mut items: Vec<Value>, single: bool) -> Value {
    if single {
        items.remove(0)
    } else {
        json!({ "instances": items })
    }
}

pub fn execute(config: &RunConfig) -> Result<Report> {
    let started = Instant::now();
    let group = Arc::new(config.load_group()?);
    let mut report = Report::empty(config);
    let engine = EngineOptions { s: config.s, s_cap: config.s_cap };
    let single = matches!(config.hidden, HiddenSelector::Members(_));

    match config.mode {
        Mode::Subgroups => {
            let catalog = SubgroupCatalog::enumerate(&group)?;
            let mut table = Table::new(&["index", "order", "cyclic", "members", "generators"]);
            let list: Vec<Value> = catalog
                .subgroups()
                .iter()
                .enumerate()
                .map(|(i, k)| {
                    let gens = generating_set(&group, k);
                    table.push(vec![
                        (i + 1).to_string(),
                        k.order().to_string(),
                        k.is_cyclic(&group).to_string(),
                        members_text(k),
                        gens.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
                    ]);
                    json!({
                        "index": i + 1,
                        "order": k.order(),
                        "cyclic": k.is_cyclic(&group),
                        "members": k.members(),
                        "transversal": catalog.transversal(i),
                        "generators": gens,
                    })
                })
                .collect();
            report.payload = json!({ "order": group.order(), "r": catalog.len(), "subgroups": list });
            report.table = table;
        }
        Mode::Simulate => {
            let catalog = Arc::new(SubgroupCatalog::enumerate(&group)?);
            let r = catalog.len();
            let s = match config.s {
                Some(s) => s,
                None => {
                    let eps = config.epsilon.clone().unwrap_or_else(|| q(1, 100));
                    choose_s_bounded(r, &eps)?
                }
            };
            let hidden = hidden_list(&group, &catalog, &config.hidden)?;
            let runs = fan_out(&hidden, |h| {
                let mut oracle = HiddenOracle::new(group.clone(), h)?;
                let st = BranchState::prepare_initial(&mut oracle, catalog.clone(), s)?;
                let fin = st.run_cascade()?;
                Ok((h.clone(), fin, oracle.ledger().clone()))
            })?;
            let mut table = Table::new(&["hidden", "outcome", "probability"]);
            let mut items = Vec::new();
            let mut checks = Vec::new();
            for (h, fin, ledger) in runs {
                let dist = fin.first_register_distribution();
                for (nu, p) in dist.probabilities().iter().enumerate() {
                    table.push(vec![members_text(&h), nu.to_string(), to_text(p)]);
                }
                let own = catalog.position(&h).map(|i| i + 1);
                let bound = success_bound(r, s);
                checks.push(Check {
                    name: format!("success_bound[{}]", members_text(&h)),
                    passed: own.is_some_and(|i| dist.probability(i) >= bound) && dist.is_valid(),
                    detail: format!("bound {}", to_text(&bound)),
                });
                let mut item = json!({
                    "hidden": h.members(),
                    "s": s,
                    "r": r,
                    "branches": fin.len(),
                    "distribution": dist.to_json(),
                    "sample": dist.sample(config.seed),
                });
                if config.debug_branches {
                    item["branch_dump"] = fin.debug_json();
                }
                report.ledger.merge(&ledger);
                items.push(item);
            }
            report.payload = single_or_list(items, single);
            report.checks = checks;
            report.table = table;
        }
        Mode::Matrix => {
            let catalog = Arc::new(SubgroupCatalog::enumerate(&group)?);
            let s = config.s.unwrap_or_else(|| choose_s_exact(catalog.len()));
            let m = ConditionalMatrix::build(group.clone(), catalog, s)?;
            let mut payload = m.to_json();
            if let Ok(inv) = invert_exact(&m) {
                payload["M_inverse"] = json!(mat_to_text(&inv));
            }
            payload["neumann_bounds"] = json!(m.neumann_bounds_hold());
            report.payload = payload;
            report.table = Table::from_matrix(m.entries());
        }
        Mode::Identify => {
            let catalog = SubgroupCatalog::enumerate(&group)?;
            let hidden = hidden_list(&group, &catalog, &config.hidden)?;
            let runs = fan_out(&hidden, |h| {
                let mut oracle = HiddenOracle::new(group.clone(), h)?;
                Ok((h.clone(), identify_subgroup(&mut oracle, engine)?))
            })?;
            let mut table = Table::new(&["hidden", "identified", "generators", "rounds", "s", "queries"]);
            let mut items = Vec::new();
            for (h, id) in runs {
                let correct = id.subgroup == h;
                report.checks.push(Check {
                    name: format!("identify[{}]", members_text(&h)),
                    passed: correct,
                    detail: format!("{} queries", id.ledger.total()),
                });
                table.push(vec![
                    members_text(&h),
                    members_text(&id.subgroup),
                    id.generators.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
                    id.rounds.len().to_string(),
                    id.s.to_string(),
                    id.ledger.total().to_string(),
                ]);
                report.ledger.merge(&id.ledger);
                let mut v = id.to_json();
                v["hidden"] = json!(h.members());
                v["ledger"] = id.ledger.to_json();
                items.push(v);
            }
            report.payload = single_or_list(items, single);
            report.table = table;
        }
        Mode::DecideTrivial | Mode::OneSided => {
            let catalog = SubgroupCatalog::enumerate(&group)?;
            let hidden = hidden_list(&group, &catalog, &config.hidden)?;
            let one_sided = config.mode == Mode::OneSided;
            let runs = fan_out(&hidden, |h| {
                let mut oracle = HiddenOracle::new(group.clone(), h)?;
                let d = if one_sided {
                    one_sided_trivial(&mut oracle, config.seed, engine)?
                } else {
                    decide_trivial(&mut oracle, engine)?
                };
                Ok((h.clone(), d))
            })?;
            let mut table = Table::new(&["hidden", "answer", "p", "amplified", "queries"]);
            let mut items = Vec::new();
            let mut wrong = 0usize;
            let mut uncertain = 0usize;
            for (h, d) in runs {
                let correct = d.non_trivial != h.is_trivial();
                let guaranteed = !one_sided || h.is_trivial() || h.is_cyclic(&group);
                if guaranteed {
                    report.checks.push(Check {
                        name: format!("{}[{}]", config.mode.name(), members_text(&h)),
                        passed: correct,
                        detail: String::new(),
                    });
                } else {
                    uncertain += 1;
                    wrong += usize::from(!correct);
                }
                table.push(vec![
                    members_text(&h),
                    if d.non_trivial { "non-trivial" } else { "trivial" }.to_string(),
                    to_text(&d.probability),
                    to_text(&d.amplified),
                    d.ledger.total().to_string(),
                ]);
                report.ledger.merge(&d.ledger);
                let mut v = d.to_json();
                v["hidden"] = json!(h.members());
                v["correct"] = json!(correct);
                items.push(v);
            }
            let mut payload = single_or_list(items, single);
            if one_sided {
                payload["non_cyclic_instances"] = json!(uncertain);
                payload["non_cyclic_errors"] = json!(wrong);
            }
            report.payload = payload;
            report.table = table;
        }
        Mode::Verify => {
            let opts = VerifyOptions { dense_cap: config.dense_cap, s_cap: config.s_cap, ..Default::default() };
            let checks = verify_group(group.clone(), &opts)?;
            let mut table = Table::new(&["check", "passed", "detail"]);
            for c in &checks {
                table.push(vec![c.name.clone(), c.passed.to_string(), c.detail.clone()]);
            }
            report.payload = json!({ "checks_run": checks.len(), "all_passed": checks.iter().all(|c| c.passed) });
            report.checks = checks;
            report.table = table;
        }
    }
    if config.timing {
        report.wall_time_ms = Some(started.elapsed().as_millis());
    }
    Ok(report)
}

/// Process exit code for an execution error.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_resource_cap() {
        3
    } else {
        match err {
            Error::Group(_) | Error::Config(_) | Error::Io(_) => 1,
            _ => 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let c = parse_config(["simulate", "--group", "Z:6", "--hidden", "0,3", "--s", "10"]).unwrap();
        assert_eq!(c.mode, Mode::Simulate);
        assert_eq!(c.hidden, HiddenSelector::Members(vec![0, 3]));
        assert_eq!(c.s, Some(10));
        let c = parse_config(["identify", "--group", "S:3", "--hidden", "all"]).unwrap();
        assert_eq!(c.hidden, HiddenSelector::All);
        let err = parse_config(["simulate", "--s", "3"]).unwrap_err().to_string();
        assert!(err.contains("--s"), "{err}");
        let err = parse_config(["simulate", "--group", "Z:2", "--bogus"]).unwrap_err().to_string();
        assert!(err.contains("--bogus"), "{err}");
        assert!(parse_config(["matrix", "--group", "Z:2", "--epsilon", "2"]).is_err());
    }

    #[test]
    fn identify_all_fans_out() {
        let c = parse_config(["identify", "--group", "S:3", "--hidden", "all"]).unwrap();
        let rep = execute(&c).unwrap();
        assert_eq!(rep.payload["instances"].as_array().unwrap().len(), 6);
        assert!(rep.all_passed());
    }

    #[test]
    fn matrix_payload() {
        let c = parse_config(["matrix", "--group", "Z:2", "--s", "2"]).unwrap();
        let rep = execute(&c).unwrap();
        assert_eq!(rep.payload["M"], json!([["1/1", "0/1"], ["1/4", "3/4"]]));
        let csv = String::from_utf8(serialize(&rep, Format::Csv)).unwrap();
        assert_eq!(csv, "row,col,value\n0,0,1/1\n0,1,0/1\n1,0,1/4\n1,1,3/4\n");
    }

    #[test]
    fn identify_single() {
        let c = parse_config(["identify", "--group", "Z:6", "--hidden", "0,3"]).unwrap();
        let rep = execute(&c).unwrap();
        assert_eq!(rep.payload["subgroup"], json!([3]));
        assert_eq!(rep.payload["rounds"], json!(2));
    }

    #[test]
    fn empty_report_and_determinism() {
        let c = RunConfig::new(Mode::Subgroups, "Z:2");
        let v: Value = serde_json::from_slice(&serialize(&Report::empty(&c), Format::Json)).unwrap();
        assert_eq!(v["payload"], json!({}));
        assert_eq!(v["ledger"], json!({"total": 0, "phases": {}}));
        let c = parse_config(["simulate", "--group", "S:3", "--s", "4"]).unwrap();
        let a = serialize(&execute(&c).unwrap(), Format::Json);
        let b = serialize(&execute(&c).unwrap(), Format::Json);
        assert_eq!(a, b);
    }

    #[test]
    fn bad_hidden_is_an_error() {
        let c = parse_config(["identify", "--group", "Z:6", "--hidden", "0,1"]).unwrap();
        let err = execute(&c).unwrap_err();
        assert_eq!(exit_code(&err), 1);
    }
}
