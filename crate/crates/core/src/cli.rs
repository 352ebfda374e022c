//! The `krall` command line: configuration, subcommands, reports and the
//! operator cache.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::AlgebraContext;
use crate::darboux::{DarbouxSpec, QFamily};
use crate::error::{Error, Result};
use crate::fit::fit_bf;
use crate::multivariate::EigenBasis;
use crate::ncop::NcOp;
use crate::poly::UniPoly;
use crate::rat::{self, Rat};
use crate::verify::{self, Check, SuiteParams};

/// Run parameters. Rationals are strings such as `"1/2"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: u32,
    pub beta: String,
    pub k: Option<usize>,
    pub a: Vec<String>,
    pub d: Option<usize>,
    pub n_max: usize,
    pub s_max: u32,
    pub degree_max: usize,
    pub seed: u64,
    pub cache_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            alpha: 1,
            beta: "0".into(),
            k: None,
            a: vec!["1".into()],
            d: None,
            n_max: 8,
            s_max: 2,
            degree_max: 3,
            seed: 0,
            cache_dir: PathBuf::from("krall-cache"),
        }
    }
}

impl RunConfig {
    pub fn beta_rat(&self) -> Result<Rat> {
        rat::parse(&self.beta)
    }

    pub fn spec(&self) -> Result<DarbouxSpec> {
        let a = self.a.iter().map(|x| rat::parse(x)).collect::<Result<Vec<_>>>()?;
        if let Some(k) = self.k {
            if k != a.len() {
                return Err(Error::InvalidParameters(format!("k = {k} but {} values of a were given", a.len())));
            }
        }
        DarbouxSpec::new(self.alpha, self.beta_rat()?, a)
    }

    /// The dimension, after checking `beta = d/2 - 1`.
    pub fn multivariate_dim(&self) -> Result<usize> {
        let d = self.d.ok_or_else(|| Error::InvalidParameters("this command needs --d".into()))?;
        if d < 2 {
            return Err(Error::InvalidParameters(format!("d = {d} must be at least 2")));
        }
        let expected = rat::frac(d as i64 - 2, 2);
        if self.beta_rat()? != expected {
            return Err(Error::InvalidParameters(format!(
                "d = {d} requires beta = {}, got {}",
                rat::to_string(&expected),
                self.beta
            )));
        }
        Ok(d)
    }

    pub fn suite_params(&self) -> Result<SuiteParams> {
        Ok(SuiteParams {
            spec: self.spec()?,
            n_max: self.n_max,
            s_max: self.s_max,
            degree_max: self.degree_max,
            seed: self.seed,
            d: self.d,
        })
    }
}

#[derive(Debug, Parser)]
#[command(name = "krall", version, about = "Exact Krall-Jacobi polynomials and their differential operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON config file; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub alpha: Option<u32>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Comma-separated Darboux parameters.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub a: Option<Vec<String>>,
    #[arg(long, global = true)]
    pub d: Option<usize>,
    #[arg(long, global = true)]
    pub n_max: Option<usize>,
    #[arg(long, global = true)]
    pub s_max: Option<u32>,
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Suites to run (comma-separated); default is every applicable suite.
    #[arg(long, global = true, value_delimiter = ',')]
    pub suite: Vec<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Emit q_n, or hat q_{n,s} when s > 0.
    Qpoly {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        s: u32,
    },
    /// Emit a basis of the algebra up to --degree.
    Algebra,
    /// Fit and cache B_f for each basis element.
    Fit,
    /// Run invariant suites.
    Verify,
    /// Emit the multivariate eigenbasis up to --n-max.
    Mvbasis,
    /// Run the multivariate suites.
    Mvverify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Qpoly { .. } => "qpoly",
            Command::Algebra => "algebra",
            Command::Fit => "fit",
            Command::Verify => "verify",
            Command::Mvbasis => "mvbasis",
            Command::Mvverify => "mvverify",
        }
    }
}

impl Cli {
    /// Config file (if any) with flag overrides applied.
    pub fn resolve_config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::Malformed(format!("cannot read config {}: {e}", path.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| Error::Malformed(format!("config {}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        if let Some(v) = self.alpha {
            cfg.alpha = v;
        }
        if let Some(v) = &self.beta {
            cfg.beta = v.clone();
        }
        if let Some(v) = self.k {
            cfg.k = Some(v);
        }
        if let Some(v) = &self.a {
            cfg.a = v.clone();
        }
        if let Some(v) = self.d {
            cfg.d = Some(v);
        }
        if let Some(v) = self.n_max {
            cfg.n_max = v;
        }
        if let Some(v) = self.s_max {
            cfg.s_max = v;
        }
        if let Some(v) = self.degree {
            cfg.degree_max = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = &self.cache_dir {
            cfg.cache_dir = v.clone();
        }
        // normalize rationals so the echo is canonical
        cfg.beta = rat::to_string(&cfg.beta_rat()?);
        cfg.a = cfg.a.iter().map(|x| rat::parse(x).map(|r| rat::to_string(&r))).collect::<Result<_>>()?;
        cfg.k = Some(cfg.spec()?.k());
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub checks: Vec<Check>,
    pub result: Value,
    pub wall_time_ms: u128,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// Sorted keys, 2-space indent, trailing newline.
    pub fn to_json_string(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        let mut out = serde_json::to_string_pretty(&v).expect("report serializes");
        out.push('\n');
        out
    }
}

fn poly_json(p: &UniPoly) -> Value {
    Value::Array(p.coeffs().iter().map(|c| Value::String(rat::to_string(c))).collect())
}

/// Runs one command. `Err` means the configuration was unusable.
pub fn run(command: &Command, suites: &[String], cfg: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let (checks, result) = match command {
        Command::Qpoly { n, s } => run_qpoly(cfg, *n, *s)?,
        Command::Algebra => {
            let spec = cfg.spec()?;
            let basis = AlgebraContext::new(&spec)?.basis(cfg.degree_max)?;
            let result = json!({ "degree": cfg.degree_max, "basis": basis.iter().map(poly_json).collect::<Vec<_>>() });
            (Vec::new(), result)
        }
        Command::Fit => run_fit(cfg)?,
        Command::Verify => {
            let params = cfg.suite_params()?;
            let names: Vec<&str> = if suites.is_empty() {
                verify::default_suites(&params.spec)
            } else {
                suites.iter().map(String::as_str).collect()
            };
            if let Some(bad) = names.iter().find(|n| !verify::UNIVARIATE_SUITES.contains(n)) {
                return Err(Error::InvalidParameters(format!(
                    "unknown suite {bad:?}; available: {}",
                    verify::UNIVARIATE_SUITES.join(", ")
                )));
            }
            (verify::run_suites(&names, &params)?, json!({ "suites": names }))
        }
        Command::Mvbasis => run_mvbasis(cfg)?,
        Command::Mvverify => {
            cfg.multivariate_dim()?;
            let params = cfg.suite_params()?;
            let mut names = vec!["mv-eigen"];
            if params.spec.alpha == 1 && params.spec.k() == 1 {
                names.push("mv-orthogonality");
            }
            (verify::run_suites(&names, &params)?, json!({ "suites": names }))
        }
    };
    Ok(Report {
        command: command.name().into(),
        config: cfg.clone(),
        checks,
        result,
        wall_time_ms: start.elapsed().as_millis(),
    })
}

fn run_qpoly(cfg: &RunConfig, n: Option<usize>, s: u32) -> Result<(Vec<Check>, Value)> {
    let family = QFamily::new(cfg.spec()?)?;
    let ns: Vec<usize> = match n {
        Some(n) => vec![n],
        None => (0..=cfg.n_max).collect(),
    };
    let top = *ns.iter().max().unwrap_or(&0);
    family.check_generic(top)?;
    let polys = ns
        .iter()
        .map(|&n| {
            let p = if s == 0 { family.q(n)? } else { family.hat_q(n, s)? };
            Ok(json!({ "n": n, "s": s, "coeffs": poly_json(&p) }))
        })
        .collect::<Result<Vec<_>>>()?;
    let result = if n.is_some() { polys.into_iter().next().expect("one entry") } else { Value::Array(polys) };
    Ok((Vec::new(), result))
}

fn run_mvbasis(cfg: &RunConfig) -> Result<(Vec<Check>, Value)> {
    let d = cfg.multivariate_dim()?;
    let family = QFamily::new(cfg.spec()?)?;
    family.check_generic(cfg.n_max)?;
    let basis = EigenBasis::new(&family, d)?;
    let mut out = Vec::new();
    for n in 0..=cfg.n_max as u32 {
        for (n, i, j) in basis.indices(n)? {
            let q = basis.q(n, i, j)?;
            let terms: Vec<Value> =
                q.terms().iter().map(|(e, c)| json!([e, rat::to_string(c)])).collect();
            out.push(json!({ "n": n, "i": i, "j": j, "terms": terms }));
        }
    }
    Ok((Vec::new(), json!({ "d": d, "polynomials": out })))
}

// ---------------------------------------------------------------- cache

fn file_token(r: &str) -> String {
    r.replace('-', "m").replace('/', "_")
}

/// Cache file for the basis element of the given degree.
pub fn cache_path(cfg: &RunConfig, degree: usize) -> Result<PathBuf> {
    let spec = cfg.spec()?;
    let a: Vec<String> = spec.a.iter().map(|x| file_token(&rat::to_string(x))).collect();
    Ok(cfg.cache_dir.join(format!(
        "B-alpha{}-beta{}-a{}-deg{degree}.json",
        spec.alpha,
        file_token(&rat::to_string(&spec.beta)),
        a.join(",")
    )))
}

fn write_stable(path: &Path, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v).map_err(|e| Error::Cache(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::Cache(format!("cannot write {}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Cache(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))
}

/// Writes `op` to `path` and reads it back.
pub fn cache_roundtrip(op: &NcOp, path: &Path) -> Result<NcOp> {
    write_stable(path, &op.to_json())?;
    load_operator(path)
}

pub fn load_operator(path: &Path) -> Result<NcOp> {
    NcOp::from_json(&read_json(path)?).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))
}

fn run_fit(cfg: &RunConfig) -> Result<(Vec<Check>, Value)> {
    let spec = cfg.spec()?;
    let family = QFamily::new(spec.clone())?;
    family.check_generic(cfg.n_max)?;
    let basis = AlgebraContext::new(&spec)?.basis(cfg.degree_max)?;
    fs::create_dir_all(&cfg.cache_dir)
        .map_err(|e| Error::Cache(format!("cannot create {}: {e}", cfg.cache_dir.display())))?;
    let mut entries = Vec::new();
    let mut ops = Vec::new();
    for f in &basis {
        let degree = f.degree().unwrap_or(0);
        let path = cache_path(cfg, degree)?;
        let op = if path.exists() {
            let v = read_json(&path)?;
            let stored = v.get("f").cloned().unwrap_or(Value::Null);
            if stored != poly_json(f) {
                return Err(Error::Cache(format!("{}: cached f does not match this configuration", path.display())));
            }
            let op_json = v.get("operator").ok_or_else(|| Error::Cache(format!("{}: missing \"operator\"", path.display())))?;
            NcOp::from_json(op_json).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?
        } else {
            let op = fit_bf(f, &family)?;
            write_stable(&path, &json!({ "f": poly_json(f), "operator": op.to_json() }))?;
            op
        };
        entries.push(json!({ "f": poly_json(f), "operator": op.to_json() }));
        ops.push(op);
    }
    let check = Check::from_outcome("fit/eigen", verify::check_eigen(&family, &basis, &ops, cfg.n_max));
    Ok((vec![check], json!({ "operators": entries })))
}

// ---------------------------------------------------------------- entry point

/// Parses `args`, runs, writes the report, and returns the exit status:
/// 0 when every check passes, 1 when some check fails, 2 on configuration errors.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = cli.resolve_config().and_then(|cfg| run(&cli.command, &cli.suite, &cfg));
    let report = match outcome {
        Ok(r) => r,
        Err(e) => {
            eprintln!("krall: {e}");
            return 2;
        }
    };
    let text = report.to_json_string();
    let written = match &cli.out {
        Some(path) => fs::write(path, &text).map_err(|e| e.to_string()),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("krall: cannot write report: {e}");
        return 2;
    }
    if report.passed() {
        0
    } else {
        1
    }
}
