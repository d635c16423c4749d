use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use rearrange::experiments::{
    brock_gap, contraction_report, solynin_converge, translate_demo, verify, BrockGapConfig, Fault,
    Policy, RunManifest, Suite, VerifyConfig,
};
use rearrange::{ExactUnion, Rational, Scalar};

#[derive(Parser, Debug)]
#[command(
    name = "rearrange",
    version,
    about = "Exact experiments with polarizations and symmetrizations"
)]
struct Cli {
    /// Run seed; per-cell seeds are derived from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory for output files and the run manifest (stdout if absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the property suites; exits nonzero on any failure.
    Verify {
        /// `all` or one of interval_algebra, setmaps_1d, contractions,
        /// nd_sets, rearrangements, cli_experiments.
        #[arg(default_value = "all")]
        suite: String,
        /// Random cases per check.
        #[arg(long, default_value_t = 200)]
        cases: usize,
        /// Inject a known bug (`polarization-sign`) to test the suites.
        #[arg(long)]
        inject: Option<String>,
    },
    /// Exact distance between the dyadic polarization chain and the Solynin image.
    SolyninConverge {
        /// Interval-union set descriptor (JSON).
        #[arg(long)]
        set: PathBuf,
        /// Largest dyadic level m.
        #[arg(long, default_value_t = 7)]
        m_max: u32,
    },
    /// Evidence that the chord-midpoint map is not a limit of polarizations.
    BrockGap {
        /// Contraction factor in (0, 1].
        #[arg(long, default_value = "1/2")]
        b: String,
        /// Fold proposals per restart.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        /// Ambient dimension.
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Translate a set by two polarizations.
    TranslateDemo {
        /// Nonnegative rational shift, e.g. `3/2`.
        #[arg(long)]
        a: String,
        /// Interval-union set descriptor (JSON).
        #[arg(long)]
        set: PathBuf,
    },
    /// Closed forms and class-I verdicts for every map kind.
    ContractionReport,
}

type AnyResult<T> = std::result::Result<T, Box<dyn std::error::Error>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> AnyResult<()> {
    if let Ok(v) = std::env::var("REARRANGE_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| format!("REARRANGE_THREADS={v:?} is not a thread count"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

/// Output sink: files under `--out`, or stdout.
struct Sink<'a> {
    dir: Option<&'a Path>,
}

impl Sink<'_> {
    fn emit(&self, name: &str, body: &str) -> AnyResult<()> {
        match self.dir {
            Some(d) => fs::write(d.join(name), body)?,
            None => std::io::stdout().write_all(body.as_bytes())?,
        }
        Ok(())
    }

    /// Files that only make sense next to the main output.
    fn side(&self, name: &str, body: &str) -> AnyResult<()> {
        if let Some(d) = self.dir {
            fs::write(d.join(name), body)?;
        }
        Ok(())
    }
}

fn read_set(path: &Path) -> AnyResult<ExactUnion> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(rearrange::io::from_json(&text)?)
}

fn parse_rational(s: &str, what: &str) -> AnyResult<Rational> {
    Rational::parse_exact(s).map_err(|e| format!("{what}: {e}").into())
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> AnyResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn json_string<T: Serialize>(v: &T) -> AnyResult<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn exact_policy(tolerance: &str) -> Policy {
    Policy {
        arithmetic: "exact rational".into(),
        tolerance: tolerance.into(),
        grid: None,
    }
}

fn run(cli: &Cli) -> AnyResult<bool> {
    if let Some(d) = &cli.out {
        fs::create_dir_all(d)?;
    }
    let sink = Sink {
        dir: cli.out.as_deref(),
    };
    let fmt = cli.format;
    let (name, params, policy, ok) = match &cli.command {
        Command::Verify {
            suite,
            cases,
            inject,
        } => {
            let which = if suite == "all" {
                None
            } else {
                Some(suite.parse::<Suite>()?)
            };
            let fault = inject.as_deref().map(str::parse::<Fault>).transpose()?;
            let cfg = VerifyConfig {
                cases: *cases,
                seed: cli.seed,
                fault,
            };
            let outcomes = verify(which, &cfg);
            let ok = outcomes.iter().all(|o| o.passed());
            for o in outcomes.iter().filter(|o| !o.passed()) {
                eprintln!(
                    "FAIL {}::{} ({} of {} cases)",
                    o.suite, o.check, o.failed, o.cases
                );
                for w in &o.failures {
                    eprintln!("  counterexample: {w}");
                }
            }
            let body = match fmt {
                Format::Json => json_string(&outcomes)?,
                Format::Csv => csv_string(
                    &[
                        "suite",
                        "check",
                        "cases",
                        "failed",
                        "pass",
                        "first_counterexample",
                    ],
                    outcomes.iter().map(|o| {
                        vec![
                            o.suite.to_string(),
                            o.check.into(),
                            o.cases.to_string(),
                            o.failed.to_string(),
                            o.passed().to_string(),
                            o.failures.first().cloned().unwrap_or_default(),
                        ]
                    }),
                )?,
            };
            sink.emit(&format!("verify.{}", fmt.ext()), &body)?;
            let params = json!({"suite": suite, "cases": cases, "inject": inject});
            (
                "verify",
                params,
                exact_policy("zero (exact); 1e-12 on float energy checks"),
                ok,
            )
        }
        Command::SolyninConverge { set, m_max } => {
            let a = read_set(set)?;
            let (rows, seconds) = solynin_converge(&a, *m_max)?;
            let body = match fmt {
                Format::Json => json_string(
                    &rows
                        .iter()
                        .map(|r| json!({"m": r.m, "distance": r.distance_decimal(), "distance_exact": r.distance.to_exact_string(), "steps": r.steps}))
                        .collect::<Vec<_>>(),
                )?,
                Format::Csv => csv_string(
                    &["m", "distance", "distance_exact", "steps"],
                    rows.iter().map(|r| {
                        vec![r.m.to_string(), format!("{}", r.distance_decimal()), r.distance.to_exact_string(), r.steps.to_string()]
                    }),
                )?,
            };
            sink.emit(&format!("solynin_converge.{}", fmt.ext()), &body)?;
            let timing = csv_string(
                &["m", "seconds"],
                rows.iter()
                    .zip(&seconds)
                    .map(|(r, s)| vec![r.m.to_string(), format!("{s:.6}")]),
            )?;
            sink.side("solynin_converge_timing.csv", &timing)?;
            let params = json!({"set": a, "m_max": m_max});
            (
                "solynin-converge",
                params,
                exact_policy("zero (exact)"),
                true,
            )
        }
        Command::BrockGap { b, budget, n } => {
            let mut cfg = BrockGapConfig::new(parse_rational(b, "b")?, *budget, cli.seed);
            cfg.n = *n;
            let (report, trace) = brock_gap(&cfg)?;
            let summary = json_string(&report)?;
            match fmt {
                Format::Json => {
                    sink.emit("brock_gap_summary.json", &summary)?;
                    sink.side("brock_gap_trace.json", &json_string(&trace)?)?;
                }
                Format::Csv => {
                    let body = csv_string(
                        &["restart", "proposal", "chain_len", "sup_distance"],
                        trace.iter().map(|r| {
                            vec![
                                r.restart.to_string(),
                                r.proposal.to_string(),
                                r.chain_len.to_string(),
                                format!("{:e}", r.sup_distance),
                            ]
                        }),
                    )?;
                    sink.emit("brock_gap_trace.csv", &body)?;
                    sink.side("brock_gap_summary.json", &summary)?;
                }
            }
            let policy = Policy {
                arithmetic: "exact rational (class-I, closed-form volume); f64 (voxels, search)"
                    .into(),
                tolerance: "zero on witness re-verification".into(),
                grid: Some(format!("voxel h = {}", report.proof_channel.volume.voxel_h)),
            };
            let params = json!({"b": b, "budget": budget, "n": n, "restarts": cfg.restarts, "samples": cfg.samples});
            ("brock-gap", params, policy, true)
        }
        Command::TranslateDemo { a, set } => {
            let shift = parse_rational(a, "a")?;
            let input = read_set(set)?;
            let report = translate_demo(&shift, &input)?;
            if !report.equal {
                eprintln!(
                    "FAIL translated set {} differs from {}",
                    report.output(),
                    report.expected
                );
            }
            let body = match fmt {
                Format::Json => json_string(&report)?,
                Format::Csv => {
                    let centers = [
                        report.t.clone().unwrap_or_default(),
                        report.second_center.clone().unwrap_or_default(),
                    ];
                    let mut rows = vec![vec![
                        "0".into(),
                        String::new(),
                        String::new(),
                        report.input.to_string(),
                    ]];
                    for (i, s) in report.steps.iter().enumerate() {
                        let (c, o) = (centers[i.min(1)].clone(), if i == 0 { "+" } else { "-" });
                        rows.push(vec![(i + 1).to_string(), c, o.into(), s.to_string()]);
                    }
                    rows.push(vec![
                        "expected".into(),
                        String::new(),
                        String::new(),
                        report.expected.to_string(),
                    ]);
                    csv_string(&["step", "center", "orient", "set"], rows)?
                }
            };
            sink.emit(&format!("translate_demo.{}", fmt.ext()), &body)?;
            let params = json!({"a": a, "set": input});
            (
                "translate-demo",
                params,
                exact_policy("zero (exact)"),
                report.equal,
            )
        }
        Command::ContractionReport => {
            let rows = contraction_report();
            let body = match fmt {
                Format::Json => json_string(&rows)?,
                Format::Csv => csv_string(
                    &[
                        "kind",
                        "t0",
                        "orient",
                        "b",
                        "phi",
                        "psi",
                        "phi_pl",
                        "class_i",
                        "witness_a",
                        "witness_b",
                        "cross_validated",
                        "samples",
                    ],
                    rows.iter().map(|r| {
                        let [wa, wb] = r.witness.clone().unwrap_or_default();
                        let oriented = matches!(
                            r.map.kind,
                            rearrange::MapKind::Polarization | rearrange::MapKind::Solynin
                        );
                        vec![
                            r.map.kind.name().into(),
                            r.map.center.to_exact_string(),
                            if oriented {
                                r.map.orientation.symbol().into()
                            } else {
                                String::new()
                            },
                            if r.map.kind == rearrange::MapKind::Brock {
                                r.map.b.to_exact_string()
                            } else {
                                String::new()
                            },
                            r.phi.into(),
                            r.psi.into(),
                            r.phi_pl.clone(),
                            if r.member {
                                "member".into()
                            } else {
                                "non-member".into()
                            },
                            wa,
                            wb,
                            r.cross_validated.to_string(),
                            r.samples.to_string(),
                        ]
                    }),
                )?,
            };
            sink.emit(&format!("contraction_report.{}", fmt.ext()), &body)?;
            let ok = rows.iter().all(|r| r.cross_validated);
            (
                "contraction-report",
                json!({}),
                exact_policy("zero (exact)"),
                ok,
            )
        }
    };
    let manifest = RunManifest::new(
        name,
        json!({"format": fmt, "args": params}),
        cli.seed,
        policy,
    );
    sink.side("manifest.json", &json_string(&manifest)?)?;
    Ok(ok)
}
