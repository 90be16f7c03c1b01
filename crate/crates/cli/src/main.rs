use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kni_cli::pipeline::{
    classify_stage, differing_coeffs, mechanics_stage, monodromy_stage, variational_stage, ExitStatus,
};
use kni_cli::{run_pipeline, Config, Report, Section};
use kni_core::classify::kimura_classify;
use kni_core::exactfield::parse_constant;
use kni_core::fixtures;
use kni_core::mechanics::{integrate_extremal, write_csv, ExtremalOptions, RealState};
use kni_core::opalgebra::{annihilates, cyclic_reduce, y0_log_derivative, DiffOp, HGParams};
use kni_core::variational::VarSystem;

#[derive(Parser)]
#[command(
    name = "kni",
    version,
    about = "Non-integrability pipeline for the minimum-time controlled Kepler problem"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the full pipeline and print the report.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        /// key=value, applied after the config file.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Leave out the timings section.
        #[arg(long)]
        no_timings: bool,
    },
    /// Collision branches on the invariant submanifold.
    Branches,
    /// Normal block of the variational equation, as a varsystem file.
    Nve {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cyclic-vector reduction of a varsystem file on one coordinate.
    Cyclic {
        #[arg(long)]
        input: PathBuf,
        /// 1-based coordinate index.
        #[arg(long)]
        coord: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Galois group of a hypergeometric equation, or the singularity table
    /// of an operator file.
    Classify {
        #[arg(long, allow_hyphen_values = true, requires_all = ["b", "c"], conflicts_with = "op")]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        #[arg(long, required_unless_present = "a")]
        op: Option<PathBuf>,
    },
    /// Numeric monodromy of an operator file.
    Monodromy {
        #[arg(long)]
        op: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Integrate a real extremal and write its CSV trajectory.
    Extremal {
        /// x1 x2 x3 x4 p1 p2 p3 p4, space or comma separated.
        #[arg(long, allow_hyphen_values = true)]
        state: String,
        #[arg(long)]
        tf: f64,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 0.1)]
        dt: f64,
        /// Integrate the uncontrolled Kepler flow.
        #[arg(long)]
        no_thrust: bool,
        /// Stop once |x1| falls below this value.
        #[arg(long)]
        x1_floor: Option<f64>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a report file against the schema.
    Validate {
        #[arg(long)]
        report: PathBuf,
    },
}

type CliResult = Result<ExitCode, String>;

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_file<T>(path: &Path) -> Result<T, String>
where
    T: std::str::FromStr<Err = kni_core::ParseError>,
{
    read(path)?.parse().map_err(|e| format!("{}:{e}", path.display()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn load_config(path: Option<&Path>, set: &[String]) -> Result<Config, String> {
    let mut cfg = match path {
        Some(p) => parse_file::<Config>(p)?,
        None => Config::default(),
    };
    for kv in set {
        cfg.apply_override(kv)
            .map_err(|e| format!("--set {kv}: {}", e.message))?;
    }
    Ok(cfg)
}

fn code(e: ExitStatus) -> ExitCode {
    ExitCode::from(e as u8)
}

fn constant(name: &str, s: &str) -> Result<kni_core::exactfield::CycNum, String> {
    parse_constant(s).map_err(|e| format!("--{name}: column {}: {}", e.column, e.message))
}

fn run(cli: Cli) -> CliResult {
    match cli.cmd {
        Cmd::Run {
            config,
            set,
            out,
            no_timings,
        } => {
            let cfg = load_config(config.as_deref(), &set)?;
            let outcome = run_pipeline(&cfg).map_err(|e| format!("pipeline aborted: {e}"))?;
            let text = if no_timings {
                outcome.report.to_text_without_timings()
            } else {
                outcome.report.to_text()
            };
            emit(&text, out.as_deref())?;
            if let Some(v) = outcome.report.get("verdict/verdict") {
                eprintln!("verdict: {v}");
            }
            Ok(code(outcome.exit))
        }
        Cmd::Branches => {
            let (s, _) = mechanics_stage().map_err(|e| e.to_string())?;
            emit(&s.to_text(), None)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Nve { out } => {
            let (_, b) = mechanics_stage().map_err(|e| e.to_string())?;
            let (_, a3, coord) = variational_stage(&b).map_err(|e| e.to_string())?;
            emit(&a3.to_text(), out.as_deref())?;
            eprintln!("coordinate matching the fixture's first: {}", coord + 1);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Cyclic { input, coord, out } => {
            let sys: VarSystem = parse_file(&input)?;
            if coord == 0 || coord > sys.n {
                return Err(format!("--coord must lie in 1..={}", sys.n));
            }
            let l = cyclic_reduce(&sys, coord - 1).map_err(|e| e.to_string())?;
            let l = if l.is_even() {
                l.w_to_x1().map_err(|e| e.to_string())?
            } else {
                l
            };
            emit(&l.to_text(), out.as_deref())?;
            let printed = fixtures::hyp_printed().map_err(|e| e.to_string())?;
            let variant = fixtures::hyp_variant().map_err(|e| e.to_string())?;
            let mut s = Section::new();
            let show = |d: Vec<String>| {
                if d.is_empty() {
                    "(none)".to_string()
                } else {
                    d.join(", ")
                }
            };
            s.value("order", l.order().unwrap_or(0))
                .value("chart", l.chart())
                .value("differs from hyp fixture in", show(differing_coeffs(&l, &printed)))
                .value("differs from typo variant in", show(differing_coeffs(&l, &variant)));
            if l.chart() == kni_core::exactfield::Chart::X1 {
                let a = annihilates(&l, &y0_log_derivative()).map_err(|e| e.to_string())?;
                s.value("annihilates y0", a);
            }
            eprint!("{}", s.to_text());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Classify { a, b, c, op } => {
            if let Some(path) = op {
                let l: DiffOp = parse_file(&path)?;
                let (s, _) = classify_stage(&l, None, false).map_err(|e| e.to_string())?;
                // the printed-parameter fallback is meaningless for an arbitrary operator
                let mut t = Section::new();
                for (k, n) in s.entries.into_iter().filter(|(k, _)| k != "classification used") {
                    t.entries.push((k, n));
                }
                emit(&t.to_text(), None)?;
                return Ok(ExitCode::SUCCESS);
            }
            let (a, b, c) = (a.expect("clap"), b.expect("clap"), c.expect("clap"));
            let p = HGParams::new(constant("a", &a)?, constant("b", &b)?, constant("c", &c)?);
            let class = kimura_classify(&p);
            let mut s = Section::new();
            s.value("params", &p)
                .value("tag", &class.tag)
                .value("witness", &class.witness);
            emit(&s.to_text(), None)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Monodromy { op, base, tol } => {
            let l: DiffOp = parse_file(&op)?;
            let mut cfg = Config::default();
            cfg.set("monodromy.tol", &tol.to_string())?;
            if let Some(b) = base {
                cfg.set("monodromy.base", &b)?;
            }
            let reports = kni_core::classify::fuchs_test(&l).unwrap_or_default();
            let (s, m) = monodromy_stage(&l, &reports, &cfg).map_err(|e| e.to_string())?;
            emit(&s.to_text(), None)?;
            for w in m.warnings {
                eprintln!("warning: {w}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Extremal {
            state,
            tf,
            tol,
            eps,
            dt,
            no_thrust,
            x1_floor,
            config,
            out,
        } => {
            let cfg = load_config(config.as_deref(), &[])?;
            let vals: Vec<f64> = state
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<f64>().map_err(|_| format!("--state: `{t}` is not a number")))
                .collect::<Result<_, _>>()?;
            let y: [f64; 8] = vals
                .try_into()
                .map_err(|v: Vec<f64>| format!("--state needs 8 values, got {}", v.len()))?;
            let opts = ExtremalOptions {
                tol: tol.unwrap_or(cfg.extremal_tol),
                eps_switch: eps.unwrap_or(cfg.switch_eps),
                thrust: !no_thrust,
                output_dt: dt,
                x1_floor,
            };
            let r = integrate_extremal(&RealState::new(0.0, y), tf, &opts).map_err(|e| e.to_string())?;
            let mut buf = Vec::new();
            write_csv(&r.samples, &mut buf).map_err(|e| e.to_string())?;
            emit(&String::from_utf8(buf).expect("ascii csv"), out.as_deref())?;
            let mut s = Section::new();
            s.value("t end", r.t_end)
                .value("samples", r.samples.len())
                .value("max H drift", format!("{:.3e}", r.max_h_drift))
                .value("max energy drift", format!("{:.3e}", r.max_energy_drift))
                .value("max C drift", format!("{:.3e}", r.max_c_drift))
                .value("stopped early", r.stopped_early)
                .value("accepted steps", r.stats.accepted);
            for (k, ev) in r.events.iter().enumerate() {
                s.value(
                    &format!("singular event {}", k + 1),
                    format!("t = {}, |(p3, p4)| = {:.3e}", ev.t, ev.norm),
                );
            }
            eprint!("{}", s.to_text());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Validate { report } => {
            let r: Report = parse_file(&report)?;
            println!("valid; verdict: {}", r.get("verdict/verdict").unwrap_or("(none)"));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                code(ExitStatus::StageFailure)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            code(ExitStatus::StageFailure)
        }
    }
}
