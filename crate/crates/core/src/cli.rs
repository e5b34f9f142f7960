//! Command-line front end: argument parsing, dispatch, report assembly and exit codes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::actions::{p_orbit_report, s_orbit_report, OrbitData};
use crate::equiv::{classify_with_orbits, Classification, MAX_CLASSIFY_POLYS};
use crate::error::{Error, Result};
use crate::goppa::{code_of_root, CodeRecord};
use crate::tower::{ElemRepr, Params, Tower};
use crate::verify::{parity_table, run_suite, SuiteOptions, SuiteReport, SUITES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Tower,
    Enumerate,
    Orbits,
    Classify,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Maximal irreducible Goppa codes: towers, orbits, classification and verification suites.
#[derive(Debug, Clone, Parser)]
#[command(name = "goppa-equiv", version)]
pub struct RunConfig {
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long, value_enum, default_value = "tower")]
    pub cmd: Command,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Lift the |P| guard on enumerate and classify.
    #[arg(long)]
    pub force: bool,
    /// Verification suites to run (default: all).
    #[arg(long = "suite")]
    pub suites: Vec<String>,
    /// Print the verification suites and exit.
    #[arg(long)]
    pub list: bool,
}

impl RunConfig {
    /// `Some` when all four parameters were given, an error when only some were.
    pub fn params(&self) -> Result<Option<Params>> {
        match (self.p, self.m, self.n, self.r) {
            (Some(p), Some(m), Some(n), Some(r)) => Params::new(p, m, n, r).map(Some),
            (None, None, None, None) => Ok(None),
            _ => Err(Error::InvalidParams("--p, --m, --n and --r must be given together".into())),
        }
    }

    fn require_params(&self) -> Result<Params> {
        self.params()?.ok_or_else(|| Error::InvalidParams("this command needs --p --m --n --r".into()))
    }
}

#[derive(Debug, Clone, Serialize)]
struct ConfigEcho {
    p: Option<u32>,
    m: Option<u32>,
    n: Option<u32>,
    r: Option<u32>,
    cmd: Command,
    format: Format,
    force: bool,
    suites: Vec<String>,
}

/// Everything except `run` is a deterministic function of the configuration.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    config: ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    tower: Option<Value>,
    pub payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suites: Option<Vec<SuiteSummary>>,
    pub run: RunInfo,
    #[serde(skip)]
    csv: String,
    #[serde(skip)]
    pub exit_code: i32,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub name: String,
    pub passed: bool,
    pub failed_checks: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunInfo {
    pub workers: usize,
    pub timings_ms: BTreeMap<String, u128>,
}

fn exit_code_of(err: &Error) -> i32 {
    match err {
        Error::SizeGuard(_) => EXIT_GUARD,
        Error::InvalidParams(_) | Error::Decode(_) => EXIT_INVALID,
        _ => EXIT_FALSIFIED,
    }
}

fn elem_csv(e: &ElemRepr) -> String {
    e.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

struct Timer(BTreeMap<String, u128>);

impl Timer {
    fn time<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.0.insert(label.to_string(), start.elapsed().as_millis());
        out
    }
}

fn cmd_tower(tower: &Tower) -> (Value, String) {
    let d = tower.describe();
    let mut csv = String::from("ctx,degree,size,modulus\n");
    for field in &d.fields {
        let modulus = field.modulus.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(csv, "{},{},{},{}", field.ctx.tag(), field.degree, field.size, modulus).unwrap();
    }
    (serde_json::to_value(d).expect("serializable"), csv)
}

fn guard_polys(data: &OrbitData, force: bool) -> Result<()> {
    if data.polys.len() > MAX_CLASSIFY_POLYS && !force {
        return Err(Error::SizeGuard(format!("|P| = {} exceeds {MAX_CLASSIFY_POLYS}; use --force", data.polys.len())));
    }
    Ok(())
}

fn cmd_enumerate(tower: &Tower, data: &OrbitData, force: bool) -> Result<(Value, String)> {
    use rayon::prelude::*;
    guard_polys(data, force)?;
    let records: Vec<CodeRecord> = (0..data.polys.len())
        .into_par_iter()
        .map(|i| CodeRecord::new(tower, &code_of_root(tower, data.polys.root(i))?))
        .collect::<Result<_>>()?;
    let mut csv = String::from("alpha,g,N,k,min_distance,weight_enumerator\n");
    for rec in &records {
        let g = rec.g.iter().map(elem_csv).collect::<Vec<_>>().join(";");
        let w = rec.weight_enumerator.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
        let d = rec.min_distance.map(|d| d.to_string()).unwrap_or_default();
        writeln!(csv, "{},{},{},{},{},{}", elem_csv(&rec.alpha), quoted(&g), rec.length, rec.k, d, w).unwrap();
    }
    Ok((json!({"count": records.len(), "codes": records}), csv))
}

fn cmd_orbits(tower: &Tower, data: &OrbitData) -> (Value, String) {
    let s = s_orbit_report(tower, &data.s_orbits);
    let p = p_orbit_report(tower, &data.p_orbits, &data.polys);
    let mut csv = String::from("set,orbit,size,rep\n");
    for (k, o) in s.orbits.iter().enumerate() {
        writeln!(csv, "S,{k},{},{}", o.size, elem_csv(&o.rep)).unwrap();
    }
    for (k, o) in p.orbits.iter().enumerate() {
        let rep = o.rep.iter().map(elem_csv).collect::<Vec<_>>().join(";");
        writeln!(csv, "P,{k},{},{}", o.size, quoted(&rep)).unwrap();
    }
    let payload = json!({
        "S_size": data.roots.len(), "P_size": data.polys.len(), "correspondence": data.correspondence,
        "S_orbits": s, "P_orbits": p,
    });
    (payload, csv)
}

fn cmd_classify(c: &Classification) -> (Value, String) {
    let csv = format!("{}\n{}\n", Classification::CSV_HEADER, c.csv_row());
    (serde_json::to_value(c).expect("serializable"), csv)
}

fn cmd_verify(config: &RunConfig, timer: &mut Timer) -> Result<(Value, String, Vec<SuiteSummary>, bool)> {
    let known: Vec<&str> = SUITES.iter().map(|(name, _)| *name).collect();
    let selected: Vec<String> =
        if config.suites.is_empty() { known.iter().map(|s| s.to_string()).collect() } else { config.suites.clone() };
    if let Some(bad) = selected.iter().find(|s| !known.contains(&s.as_str())) {
        return Err(Error::InvalidParams(format!("unknown suite {bad:?}")));
    }
    let opts = SuiteOptions { params: config.params()?, force: config.force };
    let mut reports: Vec<SuiteReport> = Vec::new();
    for name in &selected {
        reports.push(timer.time(name, || run_suite(name, &opts))?);
    }
    let summaries: Vec<SuiteSummary> = reports
        .iter()
        .map(|r| SuiteSummary {
            name: r.name.clone(),
            passed: r.passed,
            failed_checks: r.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect(),
        })
        .collect();
    let mut csv = String::from("suite,check,passed,detail\n");
    for r in &reports {
        for c in &r.checks {
            writeln!(csv, "{},{},{},{}", r.name, quoted(&c.name), c.passed, quoted(&c.detail)).unwrap();
        }
    }
    if selected.iter().any(|s| s == "parity") {
        csv.push_str("\nq,n,generator,cycle_type,sign\n");
        for row in parity_table()? {
            let ct = row.cycle_type.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
            writeln!(csv, "{},{},{},{},{}", row.q, row.n, row.generator, ct, row.sign).unwrap();
        }
    }
    let all_passed = reports.iter().all(|r| r.passed);
    Ok((serde_json::to_value(&reports).expect("serializable"), csv, summaries, all_passed))
}

/// Builds the report for `config`. Errors carry their exit code through `exit_code_of`.
pub fn execute(config: &RunConfig) -> Result<Report> {
    let mut timer = Timer(BTreeMap::new());
    let mut tower_doc = None;
    let mut suites = None;
    let mut exit_code = EXIT_OK;
    let (payload, csv) = match config.cmd {
        Command::Verify => {
            let (payload, csv, summaries, passed) = cmd_verify(config, &mut timer)?;
            if let Some(params) = config.params()? {
                tower_doc = Some(serde_json::to_value(Tower::new(params)?.describe()).expect("serializable"));
            }
            suites = Some(summaries);
            if !passed {
                exit_code = EXIT_FALSIFIED;
            }
            (payload, csv)
        }
        cmd => {
            let params = config.require_params()?;
            let tower = timer.time("tower", || Tower::new(params))?;
            tower_doc = Some(serde_json::to_value(tower.describe()).expect("serializable"));
            match cmd {
                Command::Tower => cmd_tower(&tower),
                _ => {
                    let data = timer.time("orbits", || OrbitData::compute(&tower))?;
                    match cmd {
                        Command::Enumerate => timer.time("enumerate", || cmd_enumerate(&tower, &data, config.force))?,
                        Command::Orbits => cmd_orbits(&tower, &data),
                        _ => {
                            let c = timer.time("classify", || classify_with_orbits(&tower, &data, config.force))?;
                            cmd_classify(&c)
                        }
                    }
                }
            }
        }
    };
    Ok(Report {
        config: ConfigEcho {
            p: config.p,
            m: config.m,
            n: config.n,
            r: config.r,
            cmd: config.cmd,
            format: config.format,
            force: config.force,
            suites: config.suites.clone(),
        },
        tower: tower_doc,
        payload,
        suites,
        run: RunInfo { workers: rayon::current_num_threads(), timings_ms: timer.0 },
        csv,
        exit_code,
    })
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            Format::Csv => self.csv.clone(),
        }
    }
}

fn write_output(config: &RunConfig, text: &str) -> std::io::Result<()> {
    match &config.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

/// Runs the program on parsed arguments and returns the process exit code.
pub fn run(config: RunConfig) -> i32 {
    if config.list {
        for (name, description) in SUITES {
            println!("{name:<20} {description}");
        }
        return EXIT_OK;
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(config.workers).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return EXIT_INVALID;
        }
    };
    match pool.install(|| execute(&config)) {
        Ok(report) => {
            if let Err(e) = write_output(&config, &report.render(config.format)) {
                eprintln!("error: cannot write output: {e}");
                return EXIT_FALSIFIED;
            }
            if let Some(suites) = &report.suites {
                for s in suites {
                    eprintln!("{} {}", if s.passed { "PASS" } else { "FAIL" }, s.name);
                }
            }
            report.exit_code
        }
        Err(e) => {
            let code = exit_code_of(&e);
            let record = json!({"error": e.to_string(), "exit_code": code});
            eprintln!("{record}");
            code
        }
    }
}
