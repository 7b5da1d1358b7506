use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use tamesign::checks::{self, Budget, CheckRecord, Suite};
use tamesign::chidata::{delta_ii, ChiError, ChiVariant};
use tamesign::epschar::{char_row, CharRow, Named};
use tamesign::presets::{self, PRESETS};
use tamesign::torus::{enumerate_all, sample_points};
use tamesign::{Scenario, ScenarioError, TorusPoint};

const SCENARIO_DIR_VAR: &str = "TAMESIGN_SCENARIO_DIR";

#[derive(Parser)]
#[command(
    name = "tamesign",
    version,
    about = "Sign characters of tame twisted Levi data"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List, print or validate scenarios.
    Scenario {
        #[command(subcommand)]
        cmd: ScenarioCmd,
    },
    /// Run property suites and print a JSON report.
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Preset name or scenario file; defaults to every preset.
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Cap on torus points per scenario.
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Tabulate every character at torus points.
    Eval {
        #[arg(long)]
        scenario: String,
        /// `enumerate`, or a point such as `g^3;g^0`.
        #[arg(long, default_value = "enumerate")]
        gamma: String,
        /// Output stem; writes `<stem>.csv` and `<stem>.json`.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Sample size when the torus is too large to enumerate.
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Gauss sums and Hasse–Davenport for odd q ≤ qmax.
    Gauss {
        #[arg(long, default_value_t = 27)]
        qmax: u32,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum ScenarioCmd {
    List,
    /// Print a scenario document.
    Show {
        scenario: String,
    },
    Validate {
        file: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load_file(path: &Path) -> Result<Scenario, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Scenario::from_json(&text).map_err(|e| match e {
        ScenarioError::Validation { .. } => Failure::Check(format!("{}: {e}", path.display())),
        e => Failure::Usage(format!("{}: {e}", path.display())),
    })
}

/// Preset name, then a path, then a file under the scenario directory.
fn resolve(arg: &str) -> Result<Scenario, Failure> {
    if PRESETS.contains(&arg) {
        return presets::preset(arg).map_err(|e| Failure::Usage(e.to_string()));
    }
    let direct = PathBuf::from(arg);
    if direct.exists() {
        return load_file(&direct);
    }
    if let Ok(dir) = std::env::var(SCENARIO_DIR_VAR) {
        for name in [arg.to_string(), format!("{arg}.json")] {
            let p = Path::new(&dir).join(name);
            if p.exists() {
                return load_file(&p);
            }
        }
    }
    Err(Failure::Usage(format!(
        "no preset or scenario file named {arg}"
    )))
}

fn scenario_cmd(cmd: ScenarioCmd) -> Result<(), Failure> {
    match cmd {
        ScenarioCmd::List => {
            for sc in presets::all_presets() {
                println!("{:<20} {}", sc.name(), sc.describe());
            }
        }
        ScenarioCmd::Show { scenario } => println!("{}", resolve(&scenario)?.to_doc().to_json()),
        ScenarioCmd::Validate { file } => {
            let sc = load_file(&file)?;
            println!("ok {}", sc.describe());
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SuiteReport {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    trials: usize,
    suites: Vec<Suite>,
    pass: bool,
    records: Vec<CheckRecord>,
}

fn check(suite: &str, scenario: Option<String>, budget: Budget) -> Result<(), Failure> {
    let suites = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::parse(suite).ok_or_else(|| Failure::Usage(format!("unknown suite {suite}")))?]
    };
    let (label, scenarios) = match scenario {
        Some(s) => {
            let sc = resolve(&s)?;
            (sc.name().to_string(), vec![sc])
        }
        None => ("presets".to_string(), presets::all_presets()),
    };
    let mut records = Vec::new();
    for &s in &suites {
        records.extend(checks::run_suite(s, &label, &scenarios, &budget));
    }
    let pass = records.iter().all(CheckRecord::passed);
    let report = SuiteReport {
        tool: "tamesign",
        version: env!("CARGO_PKG_VERSION"),
        seed: budget.seed,
        trials: budget.trials,
        suites,
        pass,
        records,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("serializable")
    );
    if pass {
        Ok(())
    } else {
        let bad: Vec<String> = report
            .records
            .iter()
            .filter(|r| !r.passed())
            .map(|r| format!("{}/{} ({})", r.suite.name(), r.check, r.law))
            .collect();
        Err(Failure::Check(format!("failed: {}", bad.join(", "))))
    }
}

/// `1`, `-1`, `i`, `-i`, or a decimal pair.
fn fmt_complex(z: Complex64) -> String {
    let near = |a: f64, b: f64| (a - b).abs() < 1e-9;
    match (z.re, z.im) {
        (r, i) if near(r, 1.0) && near(i, 0.0) => "1".into(),
        (r, i) if near(r, -1.0) && near(i, 0.0) => "-1".into(),
        (r, i) if near(r, 0.0) && near(i, 1.0) => "i".into(),
        (r, i) if near(r, 0.0) && near(i, -1.0) => "-i".into(),
        (r, i) => format!("{r:.9}{i:+.9}i"),
    }
}

#[derive(Serialize)]
struct EvalRow {
    #[serde(flatten)]
    chars: CharRow,
    /// `None` when some symmetric `α(γ)` has residue 1.
    delta_prime: Option<String>,
    delta_doubleprime: Option<String>,
}

#[derive(Serialize)]
struct CsvRow {
    gamma: String,
    sharp_x: i8,
    flat0: i8,
    flat1: i8,
    flat2: i8,
    f: i8,
    flat: i8,
    esr_formula: i8,
    esr_oracle: i8,
    hyper_formula: i8,
    hyper_oracle: i8,
    spinor_formula: Option<i8>,
    spinor_oracle: Option<i8>,
    eps_x: i8,
    closed: i8,
    delta_prime: Option<String>,
    delta_doubleprime: Option<String>,
}

impl From<&EvalRow> for CsvRow {
    fn from(r: &EvalRow) -> Self {
        let c = &r.chars;
        let n = |k| c.named[&k];
        CsvRow {
            gamma: c.gamma.clone(),
            sharp_x: n(Named::SharpX),
            flat0: n(Named::Flat0),
            flat1: n(Named::Flat1),
            flat2: n(Named::Flat2),
            f: n(Named::F),
            flat: n(Named::Flat),
            esr_formula: c.esr[0],
            esr_oracle: c.esr[1],
            hyper_formula: c.hyper[0],
            hyper_oracle: c.hyper[1],
            spinor_formula: c.spinor.map(|s| s[0]),
            spinor_oracle: c.spinor.map(|s| s[1]),
            eps_x: c.eps_x,
            closed: c.closed,
            delta_prime: r.delta_prime.clone(),
            delta_doubleprime: r.delta_doubleprime.clone(),
        }
    }
}

#[derive(Serialize)]
struct EvalReport<'a> {
    scenario: &'a str,
    points: usize,
    enumerated: bool,
    rows: &'a [EvalRow],
}

fn delta(sc: &Scenario, v: ChiVariant, g: &TorusPoint) -> Result<Option<String>, Failure> {
    match delta_ii(sc, v, g) {
        Ok(z) => Ok(Some(fmt_complex(z))),
        Err(ChiError::ResiduallySingular(_)) => Ok(None),
        Err(e) => Err(Failure::Check(e.to_string())),
    }
}

fn eval(scenario: &str, gamma: &str, out: &Path, seed: u64, samples: usize) -> Result<(), Failure> {
    let sc = resolve(scenario)?;
    let (points, enumerated) = if gamma == "enumerate" {
        match enumerate_all(&sc) {
            Ok(p) => (p, true),
            Err(_) => (sample_points(&sc, samples, seed), false),
        }
    } else {
        let g = TorusPoint::parse(&sc, gamma)
            .map_err(|e| Failure::Usage(format!("--gamma {gamma}: {e}")))?;
        (vec![g], false)
    };
    let mut rows = Vec::new();
    for g in &points {
        rows.push(EvalRow {
            chars: char_row(&sc, g).map_err(|e| Failure::Check(format!("{}: {e}", g.spec())))?,
            delta_prime: delta(&sc, ChiVariant::Prime, g)?,
            delta_doubleprime: delta(&sc, ChiVariant::DoublePrime, g)?,
        });
    }
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let csv_path = out.with_extension("csv");
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| Failure::Usage(e.to_string()))?;
    for r in &rows {
        w.serialize(CsvRow::from(r))
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    w.flush()?;
    let report = EvalReport {
        scenario: sc.name(),
        points: rows.len(),
        enumerated,
        rows: &rows,
    };
    std::fs::write(
        out.with_extension("json"),
        serde_json::to_string_pretty(&report).expect("serializable") + "\n",
    )?;
    let bad = rows
        .iter()
        .filter(|r| r.chars.eps_x != r.chars.closed)
        .count();
    println!("{} rows -> {}", rows.len(), csv_path.display());
    if bad > 0 {
        return Err(Failure::Check(format!(
            "{bad} rows violate ε_x = ε♯·ε♭·ε_f"
        )));
    }
    Ok(())
}

fn gauss(qmax: u32, json: bool) -> Result<(), Failure> {
    let rows = checks::gauss_table(qmax);
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&rows).expect("serializable")
        );
    } else {
        println!("q,p,n,gauss,unit_modulus,square_is_sign,hasse_davenport");
        for r in &rows {
            println!(
                "{},{},{},{},{},{},{}",
                r.q,
                r.p,
                r.n,
                fmt_complex(Complex64::new(r.re, r.im)),
                r.unit_modulus,
                r.square_is_sign,
                r.hasse_davenport
            );
        }
    }
    if rows
        .iter()
        .all(|r| r.unit_modulus && r.square_is_sign && r.hasse_davenport)
    {
        Ok(())
    } else {
        Err(Failure::Check("Gauss sum identities failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Scenario { cmd } => scenario_cmd(cmd),
        Cmd::Check {
            suite,
            scenario,
            seed,
            trials,
            points,
        } => check(
            &suite,
            scenario,
            Budget {
                seed,
                trials,
                points,
                pairs: 4 * points,
            },
        ),
        Cmd::Eval {
            scenario,
            gamma,
            out,
            seed,
            samples,
        } => eval(&scenario, &gamma, &out, seed, samples),
        Cmd::Gauss { qmax, json } => gauss(qmax, json),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
