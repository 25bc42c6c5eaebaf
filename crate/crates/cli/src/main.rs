use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use afm::afm::afm_solve;
use afm::exact::linear_s_state;
use afm::oracle::numeric_observables;
use afm::{solve_radial, AuxiliaryKind, Error, ObservableSet, PotentialModel, QuantumNumbers, SolverConfig};
use afm_cli::tables::{self, sig4, Outcome, TableId, FIGURE_COLUMNS};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

const EXIT_NO_BOUND: u8 = 2;
const EXIT_STRICT: u8 = 1;
const EXIT_USAGE: u8 = 64;
const EXIT_SOFTWARE: u8 = 70;

const UNITS: &str = "\
Units are reduced per potential family (ħ = 1):
  linear  H = p²/2m + a r   defaults m = 1/2, a = 1 (so 2m = a = 1);
          lengths scale as (2ma)^(-1/3), energies as (a²/2m)^(1/3)
  log     H = p²/4 + ln r   (m = 2); lengths in units of the log scale
  exp     H = p² - k e^(-r) (m = 1/2); lengths in units of the range, k dimensionless
Wavefunctions are ψ(r) = R(r)/√(4π), normalized so that ∫ 4π ψ² r² dr = 1.
Moments r_mK / rK are ⟨r^-K⟩ / ⟨r^K⟩; p2, p4 are ⟨p²⟩, ⟨p⁴⟩; psi0_sq is |ψ(0)|².
";

#[derive(Parser)]
#[command(
    name = "afm",
    version,
    about = "Auxiliary field method: energies, states and table reproduction"
)]
struct Cli {
    /// Print the unit conventions and exit.
    #[arg(long)]
    help_units: bool,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// AFM solution and trial-state observables as JSON.
    Solve {
        family: Family,
        aux: Aux,
        n: u32,
        l: u32,
        #[command(flatten)]
        params: Params,
    },
    /// Recompute a published table next to its golden values.
    Table {
        id: TableId,
        #[arg(value_enum)]
        format_arg: Option<Format>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Exit with status 1 when any row misses its tolerance.
        #[arg(long)]
        strict: bool,
        /// Sample count for figure data.
        #[arg(long, default_value_t = 201)]
        samples: usize,
        /// Radial extent for figure data.
        #[arg(long, default_value_t = 10.0)]
        r_max: f64,
    },
    /// Sampled wavefunction ψ(r) as CSV.
    Wavefunction {
        family: Family,
        /// `coulomb`, `quadratic` or `exact`.
        aux: WaveSource,
        n: u32,
        l: u32,
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long, default_value_t = 400)]
        samples: usize,
    },
    /// Numeric eigenstate energy and observables as JSON.
    Oracle {
        family: Family,
        n: u32,
        l: u32,
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long, default_value_t = 20_000)]
        grid_points: usize,
    },
}

#[derive(Args, Clone, Copy)]
struct Params {
    /// Coupling of the exponential potential.
    #[arg(long)]
    k: Option<f64>,
    /// Mass for the linear potential.
    #[arg(long, default_value_t = 0.5)]
    m: f64,
    /// Slope of the linear potential.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Linear,
    Log,
    Exp,
}

#[derive(Clone, Copy, ValueEnum)]
enum Aux {
    Coulomb,
    Quadratic,
}

impl From<Aux> for AuxiliaryKind {
    fn from(a: Aux) -> Self {
        match a {
            Aux::Coulomb => AuxiliaryKind::Coulomb,
            Aux::Quadratic => AuxiliaryKind::Quadratic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WaveSource {
    Coulomb,
    Quadratic,
    Exact,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Csv,
    Json,
}

/// Failure with its exit status.
struct Failure {
    code: u8,
    message: String,
    json: Option<Value>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoBoundState(reason) => Failure {
                code: EXIT_NO_BOUND,
                message: e.to_string(),
                json: Some(json!({ "error": "no-bound-state", "reason": reason.code() })),
            },
            Error::Domain(_) => usage(e.to_string()),
            _ => Failure {
                code: EXIT_SOFTWARE,
                message: e.to_string(),
                json: None,
            },
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_SOFTWARE,
            message: format!("output: {e}"),
            json: None,
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
        json: None,
    }
}

fn model(family: Family, p: Params) -> Result<PotentialModel, Failure> {
    let v = match family {
        Family::Linear => PotentialModel::Linear { m: p.m, a: p.a },
        Family::Log => PotentialModel::Logarithmic,
        Family::Exp => PotentialModel::Exponential {
            k: p.k.ok_or_else(|| usage("the exponential family needs --k"))?,
        },
    };
    v.validate()?;
    Ok(v)
}

fn observables_json(map: &mut Map<String, Value>, obs: &ObservableSet) {
    for (k, v) in &obs.r_moments {
        let key = if *k < 0 { format!("r_m{}", -k) } else { format!("r{k}") };
        map.insert(key, json!(v));
    }
    map.insert("p2".into(), json!(obs.p2));
    map.insert("p4".into(), json!(obs.p4));
    map.insert("psi0_sq".into(), json!(obs.psi0_sq));
    map.insert("mean_h".into(), json!(obs.mean_h));
}

fn potential_json(map: &mut Map<String, Value>, v: PotentialModel) {
    map.insert("family".into(), json!(v.name()));
    match v {
        PotentialModel::Linear { m, a } => {
            map.insert("m".into(), json!(m));
            map.insert("a".into(), json!(a));
        }
        PotentialModel::Exponential { k } => {
            map.insert("k".into(), json!(k));
        }
        PotentialModel::Logarithmic => {}
    }
}

fn solve(v: PotentialModel, kind: AuxiliaryKind, q: QuantumNumbers) -> Result<Value, Failure> {
    let sol = afm_solve(v, kind, q)?;
    let obs = afm::observables::afm_observable_set(v, &sol);
    let mut map = Map::new();
    potential_json(&mut map, v);
    map.insert("aux".into(), json!(kind.name()));
    map.insert("n".into(), json!(q.n));
    map.insert("l".into(), json!(q.l));
    map.insert("principal_n".into(), json!(sol.principal_n));
    map.insert("nu0".into(), json!(sol.nu0));
    map.insert("r0".into(), json!(sol.r0));
    match sol.scale {
        afm::BasisScale::Hydrogen(s) => map.insert("eta".into(), json!(s.eta)),
        afm::BasisScale::Oscillator(s) => map.insert("lambda".into(), json!(s.lambda)),
    };
    map.insert("energy".into(), json!(sol.energy));
    map.insert("offset".into(), json!(sol.offset));
    map.insert("bound".into(), json!(sol.bound.label()));
    map.insert("aux_root".into(), json!(sol.aux_root));
    observables_json(&mut map, &obs);
    Ok(Value::Object(map))
}

fn oracle(v: PotentialModel, q: QuantumNumbers, cfg: SolverConfig) -> Result<Value, Failure> {
    let f = solve_radial(v, q, cfg)?;
    let obs = numeric_observables(&f, v)?;
    let mut map = Map::new();
    potential_json(&mut map, v);
    map.insert("n".into(), json!(q.n));
    map.insert("l".into(), json!(q.l));
    map.insert("energy".into(), json!(f.energy));
    map.insert("r_max".into(), json!(f.grid[f.grid.len() - 1]));
    map.insert("grid_points".into(), json!(f.grid.len()));
    observables_json(&mut map, &obs);
    Ok(Value::Object(map))
}

/// Radius beyond which `|r R(r)|` stays below `1e-7` of its peak.
fn support(radial: &dyn Fn(f64) -> f64, start: f64) -> f64 {
    let mut peak = 0.0f64;
    let mut quiet = 0;
    let mut r = start * 0.05;
    while r < 1e6 {
        let u = (r * radial(r)).abs();
        peak = peak.max(u);
        quiet = if u < 1e-7 * peak && r > 3.0 * start {
            quiet + 1
        } else {
            0
        };
        if quiet >= 5 {
            return r;
        }
        r *= 1.1;
    }
    r
}

fn wavefunction(
    v: PotentialModel,
    source: WaveSource,
    q: QuantumNumbers,
    r_max: Option<f64>,
    samples: usize,
) -> Result<Vec<(f64, f64)>, Failure> {
    if samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let radial: Box<dyn Fn(f64) -> f64> = match (source, v) {
        (WaveSource::Exact, PotentialModel::Linear { m, a }) if q.l == 0 => {
            let s = linear_s_state(m, a, q.n);
            Box::new(move |r| s.radial(r))
        }
        (WaveSource::Exact, _) => {
            let f = solve_radial(v, q, SolverConfig::default())?;
            // samples sit at cell midpoints, so r > 0
            Box::new(move |r| f.interpolate(r) / r)
        }
        (WaveSource::Coulomb | WaveSource::Quadratic, _) => {
            let kind = if matches!(source, WaveSource::Coulomb) {
                AuxiliaryKind::Coulomb
            } else {
                AuxiliaryKind::Quadratic
            };
            let sol = afm_solve(v, kind, q)?;
            Box::new(move |r| sol.radial(r))
        }
    };
    let r_max = match r_max {
        Some(r) if r > 0.0 => r,
        Some(r) => return Err(usage(format!("--r-max must be positive, got {r}"))),
        None => support(&*radial, 1.0),
    };
    let norm = 1.0 / (4.0 * PI).sqrt();
    let dr = r_max / samples as f64;
    Ok((0..samples)
        .map(|i| {
            let r = (i as f64 + 0.5) * dr;
            (r, norm * radial(r))
        })
        .collect())
}

fn write_json(out: &mut dyn Write, value: &Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

fn table(
    out: &mut dyn Write,
    id: TableId,
    format: Format,
    strict: bool,
    samples: usize,
    r_max: f64,
) -> Result<(), Failure> {
    if id == TableId::FigWavefunctions {
        if samples < 2 || !(r_max > 0.0) {
            return Err(usage("figure data needs --samples ≥ 2 and --r-max > 0"));
        }
        let rows = tables::figure_rows(r_max, samples)?;
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(FIGURE_COLUMNS).map_err(csv_err)?;
                for row in rows {
                    w.write_record(row.iter().map(|x| format!("{x:.6e}")))
                        .map_err(csv_err)?;
                }
                w.flush()?;
            }
            Format::Json => {
                let list: Vec<Value> = rows
                    .iter()
                    .map(|row| {
                        Value::Object(
                            FIGURE_COLUMNS
                                .iter()
                                .zip(row)
                                .map(|(c, x)| (c.to_string(), json!(x)))
                                .collect(),
                        )
                    })
                    .collect();
                write_json(out, &Value::Array(list))?;
            }
        }
        return Ok(());
    }

    let rows = tables::compute(id);
    let failing = rows.iter().filter(|r| r.status != tables::Status::Pass).count();
    let computed = |o: &Outcome| match o {
        Outcome::Value(x) => sig4(*x),
        Outcome::NoBound(reason) => format!("- ({reason})"),
        Outcome::Failed(_) => "error".to_string(),
    };
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["row", "column", "computed", "published", "diff", "tolerance", "status"])
                .map_err(csv_err)?;
            for r in &rows {
                let tol = match r.golden.mode {
                    afm_cli::golden::Mode::Rel => format!("{}%", r.golden.tolerance * 100.0),
                    _ => format!("{}", r.golden.tolerance),
                };
                w.write_record([
                    r.golden.row.as_str(),
                    &r.golden.column,
                    &computed(&r.outcome),
                    &r.golden.published,
                    &r.diff().map(diff_text).unwrap_or_default(),
                    &tol,
                    r.status.label(),
                ])
                .map_err(csv_err)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let rounded = |x: f64| sig4(x).parse::<f64>().ok();
                    let (value, note) = match &r.outcome {
                        Outcome::Value(x) => (rounded(*x), None),
                        Outcome::NoBound(reason) => (None, Some(format!("no-bound-state: {reason}"))),
                        Outcome::Failed(msg) => (None, Some(msg.clone())),
                    };
                    json!({
                        "row": r.golden.row,
                        "column": r.golden.column,
                        "computed": value,
                        "published": r.golden.published,
                        "diff": r.diff().and_then(rounded),
                        "tolerance": r.golden.tolerance,
                        "mode": r.golden.mode,
                        "status": r.status,
                        "note": note,
                    })
                })
                .collect();
            write_json(out, &Value::Array(list))?;
        }
    }
    if strict && failing > 0 {
        return Err(Failure {
            code: EXIT_STRICT,
            message: format!("{failing} of {} rows outside tolerance", rows.len()),
            json: None,
        });
    }
    Ok(())
}

/// Differences below the print precision of any table show as zero.
fn diff_text(d: f64) -> String {
    if d < 1e-6 {
        "0".into()
    } else {
        sig4(d)
    }
}

fn csv_err(e: csv::Error) -> Failure {
    Failure {
        code: EXIT_SOFTWARE,
        message: format!("csv output: {e}"),
        json: None,
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if cli.help_units {
        print!("{UNITS}");
        return Ok(());
    }
    let Some(command) = cli.command else {
        return Err(usage("a subcommand is required; see --help"));
    };
    let mut sink: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let out = &mut *sink;
    match command {
        Command::Solve {
            family,
            aux,
            n,
            l,
            params,
        } => {
            let v = model(family, params)?;
            let value = solve(v, aux.into(), QuantumNumbers::new(n, l))?;
            write_json(out, &value)?;
        }
        Command::Table {
            id,
            format_arg,
            format,
            strict,
            samples,
            r_max,
        } => {
            let format = format.or(format_arg).unwrap_or(Format::Csv);
            table(out, id, format, strict, samples, r_max)?;
        }
        Command::Wavefunction {
            family,
            aux,
            n,
            l,
            params,
            r_max,
            samples,
        } => {
            let v = model(family, params)?;
            let points = wavefunction(v, aux, QuantumNumbers::new(n, l), r_max, samples)?;
            writeln!(out, "r,psi")?;
            for (r, psi) in points {
                writeln!(out, "{r:.6e},{psi:.9e}")?;
            }
        }
        Command::Oracle {
            family,
            n,
            l,
            params,
            r_max,
            grid_points,
        } => {
            let v = model(family, params)?;
            let cfg = SolverConfig {
                r_max,
                grid_points,
                ..SolverConfig::default()
            };
            let value = oracle(v, QuantumNumbers::new(n, l), cfg)?;
            write_json(out, &value)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Some(j) = &f.json {
                println!("{j}");
            }
            eprintln!("afm: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
