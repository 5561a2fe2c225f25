//! `resist`: resistance functionals, extremal diagnostics and global
//! minimizers for curves on surfaces in geodesic coordinates.

mod chart;
mod config;
mod num;
mod output;

use std::fs;
use std::path::PathBuf;
use std::process::exit;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;
use num::{g12, parse_int_list, parse_list, parse_number, parse_pair};
use output::{arr, null, obj, CliError, J};

use resist_core::curve::{Branch, ParametricCurve, Profile};
use resist_core::extremal;
use resist_core::flowsim;
use resist_core::metric::{GeodesicPoint, Metric};
use resist_core::optimizer;
use resist_core::resistance::{self, Method, ResistanceReport};

#[derive(Parser)]
#[command(
    name = "resist",
    version,
    about = "Resistance of curves on surfaces in geodesic coordinates: evaluation, diagnostics, global minimizers, Monte-Carlo checks and figure export"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct ConfigArg {
    /// JSON config file; explicit flags override its values
    #[arg(long, value_name = "PATH")]
    config: Option<String>,
}

#[derive(Args, Default)]
struct MetricArgs {
    /// Surface: sphere, plane, hyperbolic, or custom (default plane)
    #[arg(long)]
    metric: Option<String>,
    /// Warp table CSV with header "u,f", required for --metric custom
    #[arg(long, value_name = "PATH")]
    warp_table: Option<String>,
}

#[derive(Args, Default)]
struct EndpointArgs {
    /// Start point "u,v"; angles accept pi literals like 2pi/3
    #[arg(long)]
    from: Option<String>,
    /// End point "u,v"
    #[arg(long)]
    to: Option<String>,
}

#[derive(Args, Default)]
struct ProfileArgs {
    /// Family: loxodrome, truncated, parallel, meridian, oscillation,
    /// segment, tangent-circle
    #[arg(long)]
    profile: Option<String>,
    #[command(flatten)]
    endpoints: EndpointArgs,
    /// Junction angle for --profile truncated
    #[arg(long)]
    vc: Option<String>,
    /// Radius of a parallel
    #[arg(long)]
    u: Option<String>,
    /// Angle of a meridian
    #[arg(long)]
    v: Option<String>,
    /// Radial range "a,b" of a meridian
    #[arg(long)]
    u_range: Option<String>,
    /// Angular range "a,b"
    #[arg(long)]
    v_range: Option<String>,
    /// Lower radius of an oscillation profile
    #[arg(long)]
    u0: Option<String>,
    /// Upper radius of an oscillation profile
    #[arg(long)]
    u1: Option<String>,
    /// Odd oscillation index
    #[arg(long)]
    m_index: Option<u32>,
    /// Tangency half-amplitude of a tangent circle
    #[arg(long)]
    v0: Option<String>,
    /// Tangent-circle branch: plus or minus
    #[arg(long)]
    branch: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the resistance of a profile by every applicable method
    Resistance {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        metric: MetricArgs,
        #[command(flatten)]
        profile: ProfileArgs,
    },
    /// Classify the global minimizer between two points
    Classify {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        metric: MetricArgs,
        #[command(flatten)]
        endpoints: EndpointArgs,
    },
    /// Optimal junction of the truncated-loxodrome family
    Truncate {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        metric: MetricArgs,
        #[command(flatten)]
        endpoints: EndpointArgs,
    },
    /// Discrete dynamic-programming oracle for the global minimum
    Oracle {
        #[command(flatten)]
        config: ConfigArg,
        /// Angular amplitude
        #[arg(long)]
        delta_v: Option<String>,
        /// Radial budget L
        #[arg(long)]
        l: Option<String>,
        /// Number of angular cells (default 128)
        #[arg(long)]
        n_cells: Option<usize>,
        /// Slope grid resolution (default 128)
        #[arg(long)]
        slope_grid: Option<usize>,
        /// Slope cap (default max(2, 2L/delta_v))
        #[arg(long)]
        p_max: Option<String>,
    },
    /// Monte-Carlo collision simulation of a monotone profile
    Simulate {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        metric: MetricArgs,
        #[command(flatten)]
        profile: ProfileArgs,
        /// Number of particles (default 100000)
        #[arg(long)]
        n: Option<u64>,
        /// RNG seed (default RESIST_SEED, else 0)
        #[arg(long)]
        seed: Option<u64>,
        /// Optional per-impact CSV "v,transfer"
        #[arg(long, value_name = "PATH")]
        impacts_csv: Option<String>,
    },
    /// Extremality diagnostics along a profile as CSV
    Diagnose {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        metric: MetricArgs,
        #[command(flatten)]
        profile: ProfileArgs,
        /// Samples per smooth piece (default 100)
        #[arg(long)]
        samples: Option<usize>,
        /// Output CSV path (default stdout)
        #[arg(long, value_name = "PATH")]
        out: Option<String>,
    },
    /// Resistance of the oscillation family for a list of odd indices
    Oscillate {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        metric: MetricArgs,
        /// Lower radius
        #[arg(long)]
        u0: Option<String>,
        /// Upper radius
        #[arg(long)]
        u1: Option<String>,
        /// Comma-separated odd indices, e.g. 1,3,5
        #[arg(long)]
        m_list: Option<String>,
    },
    /// Export profile samples (CSV) and a chart rendering (SVG)
    Export {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        metric: MetricArgs,
        #[command(flatten)]
        profile: ProfileArgs,
        /// Loxodrome slopes to draw from --from over --v-range, e.g.
        /// 0.2,0.5,1
        #[arg(long)]
        ks: Option<String>,
        /// Samples per smooth piece (default 256)
        #[arg(long)]
        samples: Option<usize>,
        /// Output CSV path; with --ks the slope is appended per file
        #[arg(long, value_name = "PATH")]
        csv: Option<String>,
        /// Output SVG path, one polyline per curve
        #[arg(long, value_name = "PATH")]
        svg: Option<String>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    exit(0);
                }
                _ => {
                    eprintln!("{}", CliError::config(err.to_string()).to_json());
                    exit(2);
                }
            }
        }
    };
    if let Err(err) = run(cli.command) {
        eprintln!("{}", err.to_json());
        exit(err.exit_code());
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Resistance { config, metric, profile } => {
            let cfg = load(&config, merge_metric(metric, profile_config(profile)))?;
            cmd_resistance(&cfg)
        }
        Command::Classify { config, metric, endpoints } => {
            let cfg = load(&config, merge_metric(metric, endpoint_config(endpoints)))?;
            cmd_classify(&cfg)
        }
        Command::Truncate { config, metric, endpoints } => {
            let cfg = load(&config, merge_metric(metric, endpoint_config(endpoints)))?;
            cmd_truncate(&cfg)
        }
        Command::Oracle { config, delta_v, l, n_cells, slope_grid, p_max } => {
            let flags = RunConfig {
                delta_v,
                l,
                n_cells,
                slope_grid,
                p_max,
                ..Default::default()
            };
            let cfg = load(&config, flags)?;
            cmd_oracle(&cfg)
        }
        Command::Simulate { config, metric, profile, n, seed, impacts_csv } => {
            let mut flags = merge_metric(metric, profile_config(profile));
            flags.n = n;
            flags.seed = seed;
            flags.impacts_csv = impacts_csv;
            let cfg = load(&config, flags)?;
            cmd_simulate(&cfg)
        }
        Command::Diagnose { config, metric, profile, samples, out } => {
            let mut flags = merge_metric(metric, profile_config(profile));
            flags.samples = samples;
            flags.out = out;
            let cfg = load(&config, flags)?;
            cmd_diagnose(&cfg)
        }
        Command::Oscillate { config, metric, u0, u1, m_list } => {
            let mut flags = merge_metric(metric, RunConfig::default());
            flags.u0 = u0;
            flags.u1 = u1;
            flags.m_list = m_list;
            let cfg = load(&config, flags)?;
            cmd_oscillate(&cfg)
        }
        Command::Export { config, metric, profile, ks, samples, csv, svg } => {
            let mut flags = merge_metric(metric, profile_config(profile));
            flags.ks = ks;
            flags.samples = samples;
            flags.csv = csv;
            flags.svg = svg;
            let cfg = load(&config, flags)?;
            cmd_export(&cfg)
        }
    }
}

fn profile_config(p: ProfileArgs) -> RunConfig {
    RunConfig {
        profile: p.profile,
        from: p.endpoints.from,
        to: p.endpoints.to,
        vc: p.vc,
        u: p.u,
        v: p.v,
        u_range: p.u_range,
        v_range: p.v_range,
        u0: p.u0,
        u1: p.u1,
        m_index: p.m_index,
        v0: p.v0,
        branch: p.branch,
        ..Default::default()
    }
}

fn endpoint_config(e: EndpointArgs) -> RunConfig {
    RunConfig {
        from: e.from,
        to: e.to,
        ..Default::default()
    }
}

fn merge_metric(m: MetricArgs, mut cfg: RunConfig) -> RunConfig {
    cfg.metric = m.metric;
    cfg.warp_table = m.warp_table;
    cfg
}

fn load(config: &ConfigArg, flags: RunConfig) -> Result<RunConfig, CliError> {
    match &config.config {
        None => Ok(flags),
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::config(format!("cannot read config {path}: {e}")))?;
            let file = RunConfig::from_json(&text)?;
            Ok(flags.over(file))
        }
    }
}

fn require<T>(value: Option<T>, what: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::config(format!("missing required parameter --{what}")))
}

fn point(text: &str) -> Result<GeodesicPoint, CliError> {
    let (u, v) = parse_pair(text)?;
    Ok(GeodesicPoint::new(u, v))
}

fn build_metric(cfg: &RunConfig) -> Result<Metric, CliError> {
    match cfg.metric.as_deref().unwrap_or("plane") {
        "sphere" => Ok(Metric::sphere()),
        "plane" => Ok(Metric::plane()),
        "hyperbolic" => Ok(Metric::hyperbolic()),
        "custom" => {
            let path = require(cfg.warp_table.as_ref(), "warp-table")?;
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::config(format!("cannot read warp table {path}: {e}")))?;
            Ok(Metric::custom_from_csv(&text)?)
        }
        other => Err(CliError::config(format!(
            "unknown metric '{other}': expected sphere, plane, hyperbolic or custom"
        ))),
    }
}

enum BuiltProfile {
    Graph {
        profile: Profile,
        closed_form: Option<f64>,
        label: String,
    },
    Meridian {
        curve: ParametricCurve,
        label: String,
    },
}

fn require_plane(metric: &Metric, family: &str) -> Result<(), CliError> {
    if metric.id() != "plane" {
        return Err(CliError::config(format!(
            "--profile {family} is defined on the plane only"
        )));
    }
    Ok(())
}

fn build_profile(metric: &Metric, cfg: &RunConfig) -> Result<BuiltProfile, CliError> {
    let family = require(cfg.profile.as_deref(), "profile")?;
    match family {
        "loxodrome" => {
            let a = point(require(cfg.from.as_deref(), "from")?)?;
            let b = point(require(cfg.to.as_deref(), "to")?)?;
            let profile = Profile::loxodrome(metric, a, b)?;
            let delta_v = (b.v - a.v).abs();
            let k = metric.amplitude(a.u, b.u)? / delta_v;
            Ok(BuiltProfile::Graph {
                profile,
                closed_form: Some(delta_v / (1.0 + k * k)),
                label: format!("loxodrome k={k:.4}"),
            })
        }
        "truncated" => {
            let a = point(require(cfg.from.as_deref(), "from")?)?;
            let b = point(require(cfg.to.as_deref(), "to")?)?;
            let v_c = parse_number(require(cfg.vc.as_deref(), "vc")?)?;
            let profile = Profile::truncated_loxodrome(metric, a, b, v_c)?;
            let k = metric.amplitude(a.u, b.u)? / (v_c - a.v);
            let closed = (v_c - a.v) / (1.0 + k * k) + (b.v - v_c);
            Ok(BuiltProfile::Graph {
                profile,
                closed_form: Some(closed),
                label: format!("truncated loxodrome v_c={v_c:.4}"),
            })
        }
        "parallel" => {
            let u0 = parse_number(require(cfg.u.as_deref(), "u")?)?;
            let range = parse_pair(require(cfg.v_range.as_deref(), "v-range")?)?;
            let profile = Profile::parallel(metric, u0, range)?;
            Ok(BuiltProfile::Graph {
                profile,
                closed_form: Some((range.1 - range.0).abs()),
                label: format!("parallel u={u0:.4}"),
            })
        }
        "meridian" => {
            let v0 = parse_number(require(cfg.v.as_deref(), "v")?)?;
            let range = parse_pair(require(cfg.u_range.as_deref(), "u-range")?)?;
            let curve = ParametricCurve::meridian(metric, v0, range)?;
            Ok(BuiltProfile::Meridian {
                curve,
                label: format!("meridian v={v0:.4}"),
            })
        }
        "oscillation" => {
            let u0 = parse_number(require(cfg.u0.as_deref(), "u0")?)?;
            let u1 = parse_number(require(cfg.u1.as_deref(), "u1")?)?;
            let m_index = require(cfg.m_index, "m-index")?;
            let range = match cfg.v_range.as_deref() {
                Some(r) => parse_pair(r)?,
                None => (0.0, std::f64::consts::FRAC_PI_2),
            };
            let profile = Profile::oscillation(metric, u0, u1, m_index, range)?;
            let delta_v = range.1 - range.0;
            let big_l = metric.amplitude(u0, u1)?;
            let rate = m_index as f64 * big_l * std::f64::consts::PI / (2.0 * delta_v);
            Ok(BuiltProfile::Graph {
                profile,
                closed_form: Some(delta_v / (1.0 + rate * rate).sqrt()),
                label: format!("oscillation m={m_index}"),
            })
        }
        "segment" => {
            require_plane(metric, family)?;
            let a = point(require(cfg.from.as_deref(), "from")?)?;
            let b = point(require(cfg.to.as_deref(), "to")?)?;
            let profile = Profile::plane_segment(a, b)?;
            Ok(BuiltProfile::Graph {
                profile,
                closed_form: None,
                label: "segment".into(),
            })
        }
        "tangent-circle" => {
            require_plane(metric, family)?;
            let v0 = parse_number(require(cfg.v0.as_deref(), "v0")?)?;
            let branch = match cfg.branch.as_deref().unwrap_or("plus") {
                "plus" => Branch::Plus,
                "minus" => Branch::Minus,
                other => {
                    return Err(CliError::config(format!(
                        "unknown branch '{other}': expected plus or minus"
                    )))
                }
            };
            let profile = Profile::tangent_circle(v0, branch)?;
            Ok(BuiltProfile::Graph {
                profile,
                closed_form: Some(resistance::tangent_circle_resistance(v0)?),
                label: format!("tangent circle v0={v0:.4}"),
            })
        }
        other => Err(CliError::config(format!(
            "unknown profile family '{other}'"
        ))),
    }
}

fn method_tag(method: Method) -> &'static str {
    match method {
        Method::Parametric => "parametric",
        Method::Graph => "graph",
        Method::Transformed => "transformed",
        Method::ClosedForm => "closed_form",
        Method::MonteCarlo => "monte_carlo",
    }
}

fn report_json(r: &ResistanceReport) -> String {
    obj(&[
        ("value", J::N(r.value)),
        ("abs_error", J::N(r.abs_error)),
        ("method", J::S(method_tag(r.method).into())),
    ])
}

fn cmd_resistance(cfg: &RunConfig) -> Result<(), CliError> {
    let metric = build_metric(cfg)?;
    let built = build_profile(&metric, cfg)?;
    let mut reports: Vec<ResistanceReport> = Vec::new();
    let label;
    match &built {
        BuiltProfile::Graph { profile, closed_form, label: l } => {
            label = l.clone();
            reports.push(resistance::graph(profile)?);
            reports.push(resistance::transformed(profile)?);
            reports.push(resistance::parametric(&profile.to_parametric())?);
            if let Some(value) = closed_form {
                reports.push(ResistanceReport {
                    value: *value,
                    abs_error: 0.0,
                    method: Method::ClosedForm,
                });
            }
        }
        BuiltProfile::Meridian { curve, label: l } => {
            label = l.clone();
            reports.push(resistance::parametric(curve)?);
            reports.push(ResistanceReport {
                value: 0.0,
                abs_error: 0.0,
                method: Method::ClosedForm,
            });
        }
    }
    println!(
        "{}",
        obj(&[
            ("profile", J::S(label)),
            ("metric", J::S(metric.id().into())),
            ("reports", J::Raw(arr(reports.iter().map(report_json).collect()))),
        ])
    );
    Ok(())
}

fn cmd_classify(cfg: &RunConfig) -> Result<(), CliError> {
    let metric = build_metric(cfg)?;
    let a = point(require(cfg.from.as_deref(), "from")?)?;
    let b = point(require(cfg.to.as_deref(), "to")?)?;
    let s = optimizer::classify(&metric, a, b)?;
    let kind = match s.kind {
        optimizer::MinimizerKind::Loxodrome => "loxodrome",
        optimizer::MinimizerKind::Truncated => "truncated",
    };
    println!(
        "{}",
        obj(&[
            ("kind", J::S(kind.into())),
            ("k", s.k.map(J::N).unwrap_or_else(null)),
            ("V", s.junction_v.map(J::N).unwrap_or_else(null)),
            ("optimal_value", J::N(s.optimal_value)),
            ("lower_bound", J::N(s.lower_bound)),
        ])
    );
    Ok(())
}

fn cmd_truncate(cfg: &RunConfig) -> Result<(), CliError> {
    let metric = build_metric(cfg)?;
    let a = point(require(cfg.from.as_deref(), "from")?)?;
    let b = point(require(cfg.to.as_deref(), "to")?)?;
    let t = optimizer::optimal_truncation(&metric, a, b)?;
    println!(
        "{}",
        obj(&[
            ("V", J::N(t.junction_v)),
            ("value", J::N(t.value)),
            ("second_derivative", J::N(t.second_derivative)),
            ("numeric_V", J::N(t.numeric_junction_v)),
        ])
    );
    Ok(())
}

fn cmd_oracle(cfg: &RunConfig) -> Result<(), CliError> {
    let delta_v = parse_number(require(cfg.delta_v.as_deref(), "delta-v")?)?;
    let big_l = parse_number(require(cfg.l.as_deref(), "l")?)?;
    let n_cells = cfg.n_cells.unwrap_or(128);
    let slope_grid = cfg.slope_grid.unwrap_or(128);
    let p_max = match cfg.p_max.as_deref() {
        Some(p) => parse_number(p)?,
        None => (2.0f64).max(2.0 * big_l / delta_v),
    };
    let value = optimizer::brute_force_min(delta_v, big_l, n_cells, slope_grid, p_max)?;
    let bound = optimizer::jensen_lower_bound(delta_v, big_l)?;
    println!(
        "{}",
        obj(&[
            ("value", J::N(value)),
            ("lower_bound", J::N(bound)),
            ("gap", J::N(value - bound)),
            ("delta_v", J::N(delta_v)),
            ("L", J::N(big_l)),
            ("n_cells", J::U(n_cells as u64)),
            ("slope_grid", J::U(slope_grid as u64)),
            ("p_max", J::N(p_max)),
        ])
    );
    Ok(())
}

fn default_seed(cfg: &RunConfig) -> u64 {
    cfg.seed.unwrap_or_else(|| {
        std::env::var("RESIST_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(0)
    })
}

fn cmd_simulate(cfg: &RunConfig) -> Result<(), CliError> {
    let metric = build_metric(cfg)?;
    let built = build_profile(&metric, cfg)?;
    let BuiltProfile::Graph { profile, .. } = built else {
        return Err(CliError::config(
            "simulate requires a graph profile (meridians intercept no flow)",
        ));
    };
    let n = cfg.n.unwrap_or(100_000);
    let seed = default_seed(cfg);
    let result = if let Some(path) = &cfg.impacts_csv {
        let (summary, impacts) = flowsim::simulate_detailed(&profile, n, seed)?;
        let mut text = String::from("v,transfer\n");
        for s in &impacts {
            text.push_str(&format!("{},{}\n", g12(s.v_coord), g12(s.transfer)));
        }
        fs::write(path, text)?;
        summary
    } else {
        flowsim::simulate(&profile, n, seed)?
    };
    println!(
        "{}",
        obj(&[
            ("estimate", J::N(result.estimate)),
            ("std_error", J::N(result.std_error)),
            ("n", J::U(result.n)),
            ("seed", J::U(result.seed)),
            ("sic_violations", J::U(result.sic_violations)),
            ("rng", J::S(result.rng.into())),
        ])
    );
    Ok(())
}

fn cmd_diagnose(cfg: &RunConfig) -> Result<(), CliError> {
    let metric = build_metric(cfg)?;
    let built = build_profile(&metric, cfg)?;
    let BuiltProfile::Graph { profile, .. } = built else {
        return Err(CliError::config("diagnose requires a graph profile"));
    };
    let rows = extremal::diagnostics(&profile, cfg.samples.unwrap_or(100))?;
    let mut text = String::from("v,el_residual,C,legendre_margin\n");
    for r in rows {
        text.push_str(&format!(
            "{},{},{},{}\n",
            g12(r.v),
            g12(r.el_residual),
            g12(r.conserved),
            g12(r.legendre_margin)
        ));
    }
    match &cfg.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_oscillate(cfg: &RunConfig) -> Result<(), CliError> {
    let metric = build_metric(cfg)?;
    let u0 = parse_number(require(cfg.u0.as_deref(), "u0")?)?;
    let u1 = parse_number(require(cfg.u1.as_deref(), "u1")?)?;
    let list = parse_int_list(require(cfg.m_list.as_deref(), "m-list")?)?;
    let out = optimizer::oscillation_infimum_demo(&metric, u0, u1, &list)?;
    let items: Vec<String> = out
        .iter()
        .map(|&(m, r)| obj(&[("m", J::U(m as u64)), ("resistance", J::N(r))]))
        .collect();
    println!("{}", obj(&[("results", J::Raw(arr(items)))]));
    Ok(())
}

fn with_suffix(path: &str, suffix: &str) -> String {
    let p = PathBuf::from(path);
    let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = p.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    let mut out = p.clone();
    out.set_file_name(format!("{stem}{suffix}.{ext}"));
    out.to_string_lossy().into_owned()
}

fn cmd_export(cfg: &RunConfig) -> Result<(), CliError> {
    let metric = build_metric(cfg)?;
    let samples = cfg.samples.unwrap_or(256);
    if cfg.csv.is_none() && cfg.svg.is_none() {
        return Err(CliError::config("export needs --csv and/or --svg"));
    }

    let mut labeled: Vec<(String, Profile)> = Vec::new();
    if let Some(ks) = &cfg.ks {
        let a = point(require(cfg.from.as_deref(), "from")?)?;
        let range = parse_pair(require(cfg.v_range.as_deref(), "v-range")?)?;
        for k in parse_list(ks)? {
            let p = Profile::loxodrome_from_slope(&metric, a, k, range)?;
            labeled.push((format!("k{k}"), p));
        }
    } else {
        let built = build_profile(&metric, cfg)?;
        let BuiltProfile::Graph { profile, label, .. } = built else {
            return Err(CliError::config(
                "export supports graph profiles; draw parallels with --ks 0",
            ));
        };
        labeled.push((label, profile));
    }

    let mut csv_files = Vec::new();
    if let Some(base) = &cfg.csv {
        for (label, profile) in &labeled {
            let path = if labeled.len() == 1 {
                base.clone()
            } else {
                with_suffix(base, &format!("-{label}"))
            };
            let mut text = String::from("v,u,uprime\n");
            for row in profile.sample_rows(samples) {
                text.push_str(&format!(
                    "{},{},{}\n",
                    g12(row.v),
                    g12(row.u),
                    g12(row.uprime)
                ));
            }
            fs::write(&path, text)?;
            csv_files.push(path);
        }
    }

    if let Some(path) = &cfg.svg {
        let curves: Vec<chart::Curve> = labeled
            .iter()
            .map(|(label, profile)| chart::Curve {
                label: label.clone(),
                points: profile
                    .sample_rows(samples)
                    .iter()
                    .map(|r| chart::chart_point(&metric, r.u, r.v))
                    .collect(),
            })
            .collect();
        fs::write(path, chart::render_svg(&metric, &curves))?;
    }

    println!(
        "{}",
        obj(&[
            ("curves", J::U(labeled.len() as u64)),
            (
                "csv",
                J::Raw(arr(csv_files
                    .iter()
                    .map(|p| serde_json::to_string(p).expect("path encodes"))
                    .collect())),
            ),
            (
                "svg",
                cfg.svg
                    .as_ref()
                    .map(|p| J::S(p.clone()))
                    .unwrap_or_else(null),
            ),
        ])
    );
    Ok(())
}
