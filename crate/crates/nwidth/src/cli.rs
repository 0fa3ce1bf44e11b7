//! Command-line interface: coefficient, exact-width, POD, trigamma,
//! experiment, and plot subcommands with CSV/SVG emission.
//!
//! Exit codes: 0 on success, 1 on a domain error (invalid mathematical
//! input, unsupported combination, I/O or backend failure), 2 on a usage
//! error (unknown flags/subcommands, malformed signal specs).

use crate::experiments::{fmt_float, run_experiment, write_csv, ExperimentConfig, ExperimentName};
use crate::fourier::{coefficients, hws_classify, hws_split, Hws, HWS_TOL_ANALYTIC};
use crate::signals::{
    antiderivative_signal, box_convolve, hws_assemble, jump_signal, ramp_signal, random_steps,
    sigmoid_ramp, Signal, DEFAULT_SIGMOID_DEPTH,
};
use crate::snapshots::{
    basis_matrix, midpoint_grid, pod_width_curve, projection_distances, singular_values,
    snapshot_matrix,
};
use crate::widths::{
    gm_spectrum, jump_spectrum, sort_spectrum, spectrum, trigamma, width_curve, Parity,
    SortedSpectrum,
};
use crate::{Error, Result};
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "nwidth",
    version,
    about = "N-widths of the transport solution manifold"
)]
struct Cli {
    /// Override the seed of random signals and experiment configs.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fourier coefficients of a signal.
    Coeffs {
        #[command(flatten)]
        signal: SignalArg,
        /// Highest frequency index.
        #[arg(long = "k-max")]
        k_max: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact width curve of a half-wave symmetric signal.
    Exact {
        #[command(flatten)]
        signal: SignalArg,
        /// Largest subspace dimension N.
        #[arg(long = "n-max")]
        n_max: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Empirical (POD) width curve from a snapshot matrix.
    Pod {
        #[command(flatten)]
        signal: SignalArg,
        /// Spatial grid size.
        #[arg(long)]
        nx: usize,
        /// Parameter grid size.
        #[arg(long)]
        nmu: usize,
        /// Largest subspace dimension N.
        #[arg(long = "n-max")]
        n_max: usize,
        /// Also report projection distances onto an explicit trigonometric
        /// basis: `odd:K` or `even:K` with K frequency blocks.
        #[arg(long)]
        basis: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the trigamma function at X.
    Trigamma { x: f64 },
    /// Run a named experiment (heaviside | ramps | steepness | random1d | random2d).
    Experiment {
        name: String,
        /// Flat key=value config file; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        outdir: PathBuf,
    },
    /// Render a CSV as a simple SVG line chart.
    Plot {
        /// Input CSV (first column is the x axis).
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated y column names; defaults to all non-x columns.
        #[arg(long)]
        columns: Option<String>,
        /// Logarithmic x and y axes.
        #[arg(long)]
        loglog: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SignalArg {
    /// Signal spec: jump | gm:M | ramp:M:EPS | sigmoid:EPS[:DEPTH] |
    /// steps:N:SEED[:conv:WIDTH:PASSES]
    #[arg(long)]
    signal: String,
}

/// Usage errors exit with 2, domain errors with 1.
#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parse argv and dispatch; returns the process exit code.
pub fn run<I>(args: I) -> i32
where
    I: IntoIterator,
    I::Item: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap renders help/version on stdout (exit 0) and errors on
            // stderr (exit 2)
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Ok(v) = std::env::var("NWIDTH_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    match dispatch(cli) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            eprintln!("run `nwidth --help` for the synopsis");
            2
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    let seed = cli.seed;
    match cli.cmd {
        Cmd::Coeffs { signal, k_max, out } => cmd_coeffs(&signal.signal, seed, k_max, &out),
        Cmd::Exact { signal, n_max, out } => cmd_exact(&signal.signal, seed, n_max, &out),
        Cmd::Pod {
            signal,
            nx,
            nmu,
            n_max,
            basis,
            out,
        } => cmd_pod(&signal.signal, seed, nx, nmu, n_max, basis.as_deref(), &out),
        Cmd::Trigamma { x } => {
            println!("{}", trigamma(x).map_err(CliError::Domain)?);
            Ok(())
        }
        Cmd::Experiment {
            name,
            config,
            outdir,
        } => {
            let name: ExperimentName = name.parse().map_err(|e| usage(format!("{e}")))?;
            let mut cfg = match config {
                Some(path) => ExperimentConfig::from_file(name, &path)?,
                None => ExperimentConfig::default_for(name),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            run_experiment(name, &cfg, &outdir)?;
            Ok(())
        }
        Cmd::Plot {
            input,
            columns,
            loglog,
            out,
        } => {
            let cols: Option<Vec<&str>> = columns
                .as_deref()
                .map(|c| c.split(',').map(str::trim).collect());
            plot_svg(&input, cols.as_deref(), loglog, &out)?;
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// signal spec parsing (malformed specs are usage errors)
// ---------------------------------------------------------------------------

fn parse_signal(spec: &str, seed_override: Option<u64>) -> CliResult<Signal> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = |what: &str| usage(format!("signal spec '{spec}': {what}"));
    let num = |s: &str, what: &str| s.parse::<f64>().map_err(|_| bad(what));
    let int = |s: &str, what: &str| s.parse::<u64>().map_err(|_| bad(what));
    match parts[0] {
        "jump" if parts.len() == 1 => Ok(jump_signal()),
        "gm" if parts.len() == 2 => {
            let m = int(parts[1], "invalid order M")? as u32;
            if m > 16 {
                return Err(bad("antiderivative order must be <= 16"));
            }
            Ok(antiderivative_signal(m))
        }
        "ramp" if parts.len() == 3 => {
            let m = int(parts[1], "invalid order M")? as u32;
            let eps = num(parts[2], "invalid steepness EPS")?;
            let q = ramp_signal(m, eps).map_err(|e| usage(format!("signal spec '{spec}': {e}")))?;
            Ok(hws_assemble(&q))
        }
        "sigmoid" if parts.len() == 2 || parts.len() == 3 => {
            let eps = num(parts[1], "invalid steepness EPS")?;
            let depth = if parts.len() == 3 {
                int(parts[2], "invalid recursion DEPTH")? as u32
            } else {
                DEFAULT_SIGMOID_DEPTH
            };
            let q = sigmoid_ramp(eps, depth)
                .map_err(|e| usage(format!("signal spec '{spec}': {e}")))?;
            Ok(hws_assemble(&q))
        }
        "steps" if parts.len() == 3 || parts.len() == 6 => {
            let n = int(parts[1], "invalid step count N")? as usize;
            let seed = seed_override.unwrap_or(int(parts[2], "invalid SEED")?);
            let g =
                random_steps(n, seed).map_err(|e| usage(format!("signal spec '{spec}': {e}")))?;
            if parts.len() == 3 {
                return Ok(g);
            }
            if parts[3] != "conv" {
                return Err(bad("expected 'conv' tag"));
            }
            let width = num(parts[4], "invalid box WIDTH")?;
            let passes = int(parts[5], "invalid pass count")? as u32;
            Ok(box_convolve(&g, width, passes)
                .map_err(|e| usage(format!("signal spec '{spec}': {e}")))?)
        }
        _ => Err(bad(
            "expected jump | gm:M | ramp:M:EPS | sigmoid:EPS[:DEPTH] | \
             steps:N:SEED[:conv:WIDTH:PASSES]",
        )),
    }
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

fn cmd_coeffs(spec: &str, seed: Option<u64>, k_max: usize, out: &Path) -> CliResult<()> {
    if k_max == 0 {
        return Err(usage("--k-max must be at least 1"));
    }
    let g = parse_signal(spec, seed)?;
    let c = coefficients(&g, k_max)?;
    let mut rows = Vec::with_capacity(k_max + 1);
    rows.push(vec![
        "0".to_string(),
        fmt_float(c.a0),
        fmt_float(0.0),
        c.a0_provenance.to_string(),
    ]);
    for k in 1..=k_max {
        rows.push(vec![
            k.to_string(),
            fmt_float(c.a[k - 1]),
            fmt_float(c.b[k - 1]),
            c.provenance[k - 1].to_string(),
        ]);
    }
    write_csv(out, &["k", "a_k", "b_k", "provenance"], &rows)?;
    Ok(())
}

/// Build the sorted eigenvalue spectrum of a half-wave symmetric signal,
/// using closed-form spectra for the jump/antiderivative family and
/// coefficient-based spectra (with exact Parseval remainder) otherwise.
fn exact_spectrum(spec: &str, g: &Signal, n_max: usize) -> CliResult<SortedSpectrum> {
    if spec == "jump" {
        return Ok(sort_spectrum(jump_spectrum(n_max + 16)));
    }
    if let Some(m) = spec.strip_prefix("gm:").and_then(|s| s.parse::<u32>().ok()) {
        return Ok(sort_spectrum(gm_spectrum(m, n_max + 16)));
    }
    let parity = match hws_classify(g, HWS_TOL_ANALYTIC) {
        Hws::Odd => Parity::Odd,
        Hws::Even => Parity::Even,
        Hws::None => {
            return Err(CliError::Domain(Error::Unsupported(format!(
                "exact widths need a half-wave symmetric signal; '{spec}' is not"
            ))))
        }
    };
    let k_max = 2 * n_max + 64;
    let parts = hws_split(&coefficients(g, k_max)?);
    let norm = g.l2_norm_sq().ok();
    Ok(sort_spectrum(spectrum(&parts, parity, norm)))
}

fn cmd_exact(spec: &str, seed: Option<u64>, n_max: usize, out: &Path) -> CliResult<()> {
    let g = parse_signal(spec, seed)?;
    let sorted = exact_spectrum(spec, &g, n_max)?;
    let rows: Vec<Vec<String>> = width_curve(&sorted, n_max)?
        .into_iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                fmt_float(r.delta),
                fmt_float(r.d_lo),
                fmt_float(r.d_hi),
                if r.exact { "1" } else { "0" }.to_string(),
                r.method.to_string(),
            ]
        })
        .collect();
    write_csv(
        out,
        &["N", "delta_N", "d_N_lo", "d_N_hi", "exact", "method"],
        &rows,
    )?;
    Ok(())
}

fn parse_basis(arg: &str) -> CliResult<(Parity, usize)> {
    let (parity, k) = arg
        .split_once(':')
        .ok_or_else(|| usage(format!("--basis '{arg}': expected odd:K or even:K")))?;
    let k: usize = k
        .parse()
        .map_err(|_| usage(format!("--basis '{arg}': invalid block count")))?;
    if k == 0 {
        return Err(usage(format!(
            "--basis '{arg}': block count must be positive"
        )));
    }
    match parity {
        "odd" => Ok((Parity::Odd, k)),
        "even" => Ok((Parity::Even, k)),
        _ => Err(usage(format!(
            "--basis '{arg}': parity must be odd or even"
        ))),
    }
}

fn cmd_pod(
    spec: &str,
    seed: Option<u64>,
    nx: usize,
    nmu: usize,
    n_max: usize,
    basis: Option<&str>,
    out: &Path,
) -> CliResult<()> {
    if nx < 2 || nmu < 2 {
        return Err(usage("--nx and --nmu must be at least 2"));
    }
    let basis_req = basis.map(parse_basis).transpose()?;
    let g = parse_signal(spec, seed)?;
    let m = snapshot_matrix(&g, nx, nmu);
    let sigma = singular_values(&m)?;
    let curve = pod_width_curve(&sigma, m.weight, n_max);

    // Projection distances per N: for each row use the largest full-block
    // basis of the requested parity with dimension <= N (capped at K
    // blocks); dimension 0 means projecting onto nothing.
    let mut header = vec!["N", "delta_pod"];
    let mut dist_cols: Vec<(f64, f64)> = Vec::new();
    if let Some((parity, k_cap)) = basis_req {
        header.push("dist_L2_basis");
        header.push("dist_Linf_basis");
        let grid = midpoint_grid(nx);
        let dim = |k: usize| match parity {
            Parity::Odd => 2 * k,
            Parity::Even => 2 * k + 1,
        };
        // distances for block counts 0..=k_cap (k = 0: raw snapshot norms)
        let mut by_blocks = Vec::with_capacity(k_cap + 1);
        let raw_l2 = curve[0];
        let raw_linf = (0..nmu)
            .map(|j| m.data.column(j).iter().map(|v| v * v).sum::<f64>() / nx as f64)
            .fold(0.0f64, f64::max)
            .sqrt();
        by_blocks.push((raw_l2, raw_linf));
        for k in 1..=k_cap {
            let psi = basis_matrix(parity, k, &grid)?;
            by_blocks.push(projection_distances(&m, &psi)?);
        }
        for n in 0..=n_max {
            let k = (0..=k_cap)
                .rev()
                .find(|&k| dim(k) <= n || k == 0)
                .unwrap_or(0);
            dist_cols.push(by_blocks[k]);
        }
    }
    let rows: Vec<Vec<String>> = (0..=n_max)
        .map(|n| {
            let mut row = vec![n.to_string(), fmt_float(curve[n])];
            if let Some(&(l2, linf)) = dist_cols.get(n) {
                row.push(fmt_float(l2));
                row.push(fmt_float(linf));
            }
            row
        })
        .collect();
    write_csv(out, &header, &rows)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// SVG plotting
// ---------------------------------------------------------------------------

const SVG_PALETTE: [&str; 6] = [
    "#1f6fb2", "#d1495b", "#3a7d44", "#8d6a9f", "#c98a2b", "#444444",
];

/// Render selected CSV columns as a minimal deterministic SVG line chart.
/// The first CSV column is the x axis; `columns` selects the y columns
/// (default: all others). With `loglog`, both axes are base-10 logarithmic
/// and nonpositive points are skipped.
pub fn plot_svg(input: &Path, columns: Option<&[&str]>, loglog: bool, out: &Path) -> Result<()> {
    let text = std::fs::read_to_string(input)?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| Error::InvalidParameter("empty CSV: no header row".into()))?
        .split(',')
        .map(str::trim)
        .collect();
    if header.len() < 2 {
        return Err(Error::InvalidParameter(
            "CSV needs an x column and at least one y column".into(),
        ));
    }
    let data: Vec<Vec<f64>> = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split(',')
                .map(|v| v.trim().parse::<f64>().unwrap_or(f64::NAN))
                .collect()
        })
        .collect();
    if data.is_empty() {
        return Err(Error::InvalidParameter("empty CSV: no data rows".into()));
    }
    let y_names: Vec<&str> = match columns {
        Some(cols) => {
            let missing: Vec<&str> = cols
                .iter()
                .copied()
                .filter(|c| !header.contains(c))
                .collect();
            if !missing.is_empty() {
                return Err(Error::MissingColumn(missing.join(", ")));
            }
            cols.to_vec()
        }
        None => header[1..].to_vec(),
    };
    let col_idx = |name: &str| header.iter().position(|h| *h == name).unwrap();

    let transform = |v: f64| -> Option<f64> {
        if !v.is_finite() {
            None
        } else if loglog {
            (v > 0.0).then(|| v.log10())
        } else {
            Some(v)
        }
    };
    // collect polylines in plot coordinates
    let mut series: Vec<(&str, Vec<(f64, f64)>)> = Vec::new();
    for name in &y_names {
        let j = col_idx(name);
        let pts: Vec<(f64, f64)> = data
            .iter()
            .filter_map(|row| Some((transform(row[0])?, transform(*row.get(j)?)?)))
            .collect();
        series.push((name, pts));
    }
    let all: Vec<(f64, f64)> = series.iter().flat_map(|(_, p)| p.iter().copied()).collect();
    if all.is_empty() {
        return Err(Error::InvalidParameter(
            "no plottable points (after log filtering)".into(),
        ));
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x1 - x0 < 1e-300 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-300 {
        y1 = y0 + 1.0;
    }
    let (w, h, ml, mr, mt, mb) = (800.0, 600.0, 70.0, 20.0, 20.0, 50.0);
    let px = |x: f64| ml + (x - x0) / (x1 - x0) * (w - ml - mr);
    let py = |y: f64| h - mb - (y - y0) / (y1 - y0) * (h - mt - mb);
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\">\n<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
    ));
    // axes
    svg.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n\
         <line x1=\"{ml}\" y1=\"{mt}\" x2=\"{ml}\" y2=\"{}\" stroke=\"black\"/>\n",
        h - mb,
        w - mr,
        h - mb,
        h - mb
    ));
    let label = |v: f64| {
        if loglog {
            format!("1e{v:.2}")
        } else {
            format!("{v:.4}")
        }
    };
    svg.push_str(&format!(
        "<text x=\"{ml}\" y=\"{}\" font-size=\"12\">{}</text>\n\
         <text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{}</text>\n\
         <text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{}</text>\n\
         <text x=\"{}\" y=\"{mt}\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
        h - mb + 20.0,
        label(x0),
        w - mr,
        h - mb + 20.0,
        label(x1),
        ml - 5.0,
        h - mb,
        label(y0),
        ml - 5.0,
        label(y1),
    ));
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = SVG_PALETTE[i % SVG_PALETTE.len()];
        if !pts.is_empty() {
            let path: Vec<String> = pts
                .iter()
                .map(|&(x, y)| format!("{:.3},{:.3}", px(x), py(y)))
                .collect();
            svg.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" \
                 points=\"{}\"/>\n",
                path.join(" ")
            ));
        }
        // legend
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{color}\">{name}</text>\n",
            w - mr - 180.0,
            mt + 16.0 * (i as f64 + 1.0),
        ));
    }
    svg.push_str("</svg>\n");
    std::fs::write(out, svg)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signal_specs_parse() {
        assert!(parse_signal("jump", None).is_ok());
        assert!(parse_signal("gm:2", None).is_ok());
        assert!(parse_signal("ramp:3:0.04592", None).is_ok());
        assert!(parse_signal("sigmoid:0.025", None).is_ok());
        assert!(parse_signal("sigmoid:0.025:4", None).is_ok());
        assert!(parse_signal("steps:20:7", None).is_ok());
        assert!(parse_signal("steps:20:7:conv:0.1:2", None).is_ok());
    }

    #[test]
    fn bad_signal_specs_are_usage_errors() {
        for spec in [
            "bogus",
            "gm",
            "ramp:9:0.1",
            "ramp:1:1.5",
            "ramp:1",
            "steps:0:7",
            "steps:20:7:conv:0.1",
            "steps:20:7:xonv:0.1:2",
            "sigmoid:abc",
        ] {
            match parse_signal(spec, None) {
                Err(CliError::Usage(_)) => {}
                _ => panic!("spec '{spec}' should be a usage error"),
            }
        }
    }

    #[test]
    fn seed_override_applies_to_steps() {
        let a = parse_signal("steps:20:7", None).unwrap();
        let b = parse_signal("steps:20:99", Some(7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn basis_arg_parses() {
        assert!(matches!(parse_basis("odd:3"), Ok((Parity::Odd, 3))));
        assert!(matches!(parse_basis("even:10"), Ok((Parity::Even, 10))));
        for bad in ["odd", "odd:0", "odd:x", "weird:3"] {
            assert!(matches!(parse_basis(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }
}
