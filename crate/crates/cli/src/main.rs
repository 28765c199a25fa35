//! `kfree`: generate, measure and verify k-free and B-free lattice point sets.

mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;

use kfree_core::correlation::{autocorr_table, write_autocorr_csv};
use kfree_core::diffraction::{
    intensity, support_enumerate, write_svg, FigureFormat, FigureStyle, PlotAtom, RationalBox, RationalPoint,
};
use kfree_core::ergodics::{run_verification, write_report_csv};
use kfree_core::io as pointio;
use kfree_core::numfield::{self, QuadRational};
use kfree_core::patches::{
    entropy_formula, frequency_closed, frequency_empirical, parse_points, patch_census, Patch,
};
use kfree_core::pointsets::{find_hole, generate, is_admissible, verify_hole};
use kfree_core::{arith, diffraction, LatticeWindow};

use config::{ConfigFile, Overrides, RunConfig};

#[derive(Parser)]
#[command(name = "kfree", version, about = "k-free and B-free lattice point sets: generation, statistics, diffraction")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct CommonArgs {
    /// TOML config file (`version = 1`); flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// visible | kfree:n,k | bfree:n:b1,b2,...
    #[arg(long, global = true)]
    spec: Option<String>,
    /// Lattice window (ball:n:R, ball@c:R, box:lo:hi) or, for diffraction,
    /// a rational box lo1,..,lon,hi1,..,hin.
    #[arg(long, global = true)]
    window: Option<String>,
    /// Relative error for Euler products (default 1e-8).
    #[arg(long, global = true)]
    rel_err: Option<f64>,
    /// Maximum number of lattice cells a command may visit.
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    /// Output format: csv, rle or svg, depending on the command.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the point set in a window.
    Gen,
    /// Membership of a single point.
    Member {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Admissibility of a finite set, e.g. "(0,0);(1,0)".
    Admissible {
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
    /// Construct and verify a hole of the given inradius.
    Hole {
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
    },
    /// Empirical autocorrelation coefficients.
    Autocorr {
        /// Shifts, e.g. "(1,0);(2,0)".
        #[arg(long, allow_hyphen_values = true)]
        shifts: String,
        #[arg(long)]
        radius: f64,
    },
    /// Diffraction atoms in a rational box, or the intensity at one point.
    Diffract {
        #[arg(long, default_value_t = 1e-6)]
        threshold: f64,
        /// Single position, e.g. 1/2,0.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        /// Exclude the upper faces of the box.
        #[arg(long)]
        upper_open: bool,
    },
    /// Diffraction figure file (svg or csv).
    Figure {
        #[arg(long, default_value_t = 1e-6)]
        threshold: f64,
        /// area | quartic
        #[arg(long, default_value = "area")]
        style: String,
    },
    /// Closed-form patch frequency, optionally with an empirical estimate.
    Freq {
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        /// Patch points, e.g. "(0,-1);(1,0)" or "{}".
        #[arg(long, allow_hyphen_values = true)]
        patch: String,
        /// Also count occurrences over B_R(0).
        #[arg(long)]
        empirical: Option<f64>,
        /// Maximum number of free window points.
        #[arg(long, default_value_t = kfree_core::patches::DEFAULT_TERM_CAP)]
        term_cap: usize,
    },
    /// Census of ρ-patches over B_R(0).
    Census {
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long)]
        radius: f64,
    },
    /// Patch-counting entropy (nats unless --log2).
    Entropy {
        #[arg(long)]
        log2: bool,
    },
    /// Seeded randomized verification of the residue identities and torus maps.
    Ergocheck {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Embedded k-free integers of Z[√2] in a disk.
    NfGen {
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long)]
        radius: f64,
    },
    /// Dedekind zeta function of Q(√2).
    NfZeta {
        #[arg(long, default_value_t = 2.0)]
        s: f64,
    },
    /// Diffraction of the k-free integers of Z[√2].
    NfDiffract {
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 1e-3)]
        threshold: f64,
        /// Single λ = a + b√2 given as a,b, e.g. 1/4,0.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// area | quartic (svg output only)
        #[arg(long, default_value = "quartic")]
        style: String,
    },
}

/// A failed command: exit code 1 for a failed verification, 2 for errors.
enum Failure {
    Verification(String),
    Error(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Error(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn sink(cfg: &RunConfig) -> Result<Box<dyn Write>, Failure> {
    Ok(match &cfg.out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Error(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn comment_header(out: &mut dyn Write, lines: &[String]) -> io::Result<()> {
    for l in lines {
        writeln!(out, "# {l}")?;
    }
    Ok(())
}

fn format_or(cfg: &RunConfig, default: &str, allowed: &[&str]) -> Result<String, Failure> {
    let f = cfg.format.clone().unwrap_or_else(|| default.to_string());
    if !allowed.contains(&f.as_str()) {
        return Err(Failure::Error(format!("unsupported --format '{f}' (expected one of {})", allowed.join(", "))));
    }
    Ok(f)
}

fn lattice_window(cfg: &RunConfig) -> Result<LatticeWindow, Failure> {
    let w = cfg.window.as_deref().ok_or_else(|| Failure::Error("--window is required, e.g. ball:2:100".into()))?;
    let w: LatticeWindow = w.parse()?;
    if w.dim() != cfg.spec.dim() {
        return Err(Failure::Error(format!("window dimension {} does not match spec dimension {}", w.dim(), cfg.spec.dim())));
    }
    Ok(w)
}

fn rational_box(cfg: &RunConfig, dim: usize, upper_open: bool) -> Result<RationalBox, Failure> {
    let w = cfg.window.as_deref().unwrap_or("0,0,1,1");
    let vals = w
        .split(',')
        .map(|t| t.trim().parse::<Ratio<i64>>().map_err(|e| Failure::Error(format!("--window '{t}': {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if vals.len() != 2 * dim {
        return Err(Failure::Error(format!("--window needs {} values lo1,..,hi{dim}, got {}", 2 * dim, vals.len())));
    }
    Ok(RationalBox { lo: vals[..dim].to_vec(), hi: vals[dim..].to_vec(), upper_open })
}

fn float_box(cfg: &RunConfig, default: &str) -> Result<([f64; 2], [f64; 2]), Failure> {
    let w = cfg.window.as_deref().unwrap_or(default);
    let v = w
        .split(',')
        .map(|t| {
            let r: Ratio<i64> = t.trim().parse().map_err(|e| Failure::Error(format!("--window '{t}': {e}")))?;
            Ok(*r.numer() as f64 / *r.denom() as f64)
        })
        .collect::<Result<Vec<f64>, Failure>>()?;
    if v.len() != 4 || !(v[2] > v[0] && v[3] > v[1]) {
        return Err(Failure::Error("--window needs x0,y0,x1,y1 with x1 > x0 and y1 > y0".into()));
    }
    Ok(([v[0], v[1]], [v[2], v[3]]))
}

fn parse_ints(s: &str) -> Result<Vec<i64>, Failure> {
    s.trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split(',')
        .map(|c| c.trim().parse::<i64>().map_err(|e| Failure::Error(format!("'{c}': {e}"))))
        .collect()
}

fn scalar(out: &mut dyn Write, value: f64, bound: f64) -> io::Result<()> {
    writeln!(out, "{value:.12} +/- {bound:.1e}")
}

fn run(cli: Cli) -> Outcome {
    let c = cli.common;
    let file = c.config.as_deref().map(ConfigFile::load).transpose().map_err(Failure::Error)?;
    let cfg = RunConfig::resolve(
        file,
        Overrides {
            spec: c.spec,
            window: c.window,
            rel_err: c.rel_err,
            cap: c.cap,
            out: c.out,
            format: c.format,
            seed: c.seed,
        },
    )
    .map_err(Failure::Error)?;
    if let Some(dir) = std::env::var_os("KFREE_CACHE_DIR") {
        arith::set_constant_cache_dir(Some(PathBuf::from(dir)));
    }
    let spec = &cfg.spec;
    let n = spec.dim();

    match cli.command {
        Command::Gen => {
            let window = lattice_window(&cfg)?;
            let set = generate(spec, &window, cfg.cap)?;
            match format_or(&cfg, "csv", &["csv", "rle"])?.as_str() {
                "csv" => pointio::write_csv(&set, sink(&cfg)?)?,
                _ => {
                    let path = cfg.out.as_ref().ok_or_else(|| Failure::Error("--format rle needs --out".into()))?;
                    pointio::save_rle(&set, path)?;
                }
            }
        }
        Command::Member { point } => {
            let x = parse_ints(&point)?;
            let mut out = sink(&cfg)?;
            writeln!(out, "{}", spec.is_member(&x)?)?;
            out.flush()?;
        }
        Command::Admissible { points } => {
            let pts = parse_points(&points)?;
            let a = is_admissible(spec, &pts)?;
            let mut out = sink(&cfg)?;
            match a.witness {
                Some(m) if !a.admissible => writeln!(out, "false (every class mod {m} is occupied)")?,
                _ => writeln!(out, "{}", a.admissible)?,
            }
            out.flush()?;
        }
        Command::Hole { rho } => {
            let hole = find_hole(spec, rho)?;
            let ok = verify_hole(spec, &hole.center, rho)?
                && generate(spec, &LatticeWindow::ball_at(hole.center.clone(), rho), cfg.cap)?.is_empty();
            let mut out = sink(&cfg)?;
            comment_header(&mut out, &cfg.header("hole"))?;
            let c: Vec<String> = hole.center.iter().map(|v| v.to_string()).collect();
            writeln!(out, "center: ({})", c.join(","))?;
            writeln!(out, "period: {}", hole.period)?;
            let m: Vec<String> = hole.moduli.iter().map(|v| v.to_string()).collect();
            writeln!(out, "moduli: {}", m.join(","))?;
            writeln!(out, "verified: {ok}")?;
            out.flush()?;
            if !ok {
                return Err(Failure::Verification("hole verification failed".into()));
            }
        }
        Command::Autocorr { shifts, radius } => {
            let shifts = parse_points(&shifts)?;
            let samples = autocorr_table(spec, &shifts, radius, cfg.cap)?;
            let mut out = sink(&cfg)?;
            write_autocorr_csv(&samples, n, &cfg.header("autocorr"), &mut out)?;
            out.flush()?;
        }
        Command::Diffract { threshold, at, upper_open } => {
            let mut out = sink(&cfg)?;
            if let Some(at) = at {
                let l: RationalPoint = at.parse()?;
                let i = intensity(spec, &l)?;
                scalar(&mut out, i, 2.0 * kfree_core::DEFAULT_REL_ERR * i)?;
                out.flush()?;
                return Ok(());
            }
            let window = rational_box(&cfg, n, upper_open)?;
            let atoms = support_enumerate(spec, &window, threshold, cfg.cap)?;
            let mut header = cfg.header("diffract");
            header.push(format!("threshold: {threshold:e}"));
            match format_or(&cfg, "csv", &["csv", "svg"])?.as_str() {
                "csv" => {
                    comment_header(&mut out, &header)?;
                    let cols: Vec<String> = (1..=n).map(|i| format!("k{i}")).collect();
                    writeln!(out, "position,den,{},intensity", cols.join(","))?;
                    for a in &atoms {
                        let coords: Vec<String> = a.position.coords().iter().map(|c| format!("{c:.10}")).collect();
                        writeln!(out, "\"{}\",{},{},{:.12e}", a.position, a.position.den(), coords.join(","), a.intensity)?;
                    }
                }
                _ => {
                    let view = view_of(&window)?;
                    let plot: Vec<PlotAtom> = atoms.iter().map(PlotAtom::from).collect();
                    write_svg(&plot, FigureStyle::AreaProportional, view, &header, &mut out)?;
                }
            }
            out.flush()?;
        }
        Command::Figure { threshold, style } => {
            let style: FigureStyle = style.parse()?;
            let window = rational_box(&cfg, n, false)?;
            let view = view_of(&window)?;
            let atoms = support_enumerate(spec, &window, threshold, cfg.cap)?;
            let plot: Vec<PlotAtom> = atoms.iter().map(PlotAtom::from).collect();
            let path = cfg.out.clone().ok_or_else(|| Failure::Error("figure needs --out".into()))?;
            let format = match format_or(&cfg, "svg", &["svg", "csv"])?.as_str() {
                "svg" => FigureFormat::Svg,
                _ => FigureFormat::Csv,
            };
            let mut header = cfg.header("figure");
            header.push(format!("threshold: {threshold:e}"));
            diffraction::emit_figure(&plot, style, view, format, &header, &path)?;
        }
        Command::Freq { rho, patch, empirical, term_cap } => {
            let p = Patch::new(n, rho, parse_points(&patch)?)?;
            let f = frequency_closed(spec, &p, term_cap)?;
            let mut out = sink(&cfg)?;
            scalar(&mut out, f.value, f.tail_error)?;
            if let Some(r) = empirical {
                let e = frequency_empirical(spec, &p, r, cfg.cap)?;
                writeln!(out, "empirical: {e:.12} (R = {r})")?;
            }
            out.flush()?;
        }
        Command::Census { rho, radius } => {
            let census = patch_census(spec, rho, radius, cfg.cap)?;
            let mut header = cfg.header("census");
            header.push(format!("rho: {rho}"));
            header.push(format!("radius: {radius}"));
            header.push(format!("sites: {}", census.sites));
            header.push(format!("observed: {}", census.observed()));
            let mut out = sink(&cfg)?;
            census.write_csv(&header, &mut out)?;
            out.flush()?;
        }
        Command::Entropy { log2 } => {
            let h = entropy_formula(spec, cfg.rel_err)?;
            let scale = if log2 { 1.0 / std::f64::consts::LN_2 } else { 1.0 };
            let v = h.value * scale;
            let mut out = sink(&cfg)?;
            scalar(&mut out, v, v * h.certified_bound)?;
            out.flush()?;
        }
        Command::Ergocheck { trials, dim } => {
            let rows = run_verification(cfg.seed, trials, dim)?;
            let mut header = cfg.header("ergocheck");
            header.push(format!("trials: {trials}"));
            header.push(format!("dim: {dim}"));
            let mut out = sink(&cfg)?;
            write_report_csv(&rows, &header, &mut out)?;
            out.flush()?;
            let failed = rows.iter().filter(|r| !r.pass).count();
            if failed > 0 {
                return Err(Failure::Verification(format!("{failed} of {} checks failed", rows.len())));
            }
            eprintln!("{} checks passed", rows.len());
        }
        Command::NfGen { k, radius } => {
            let pts = numfield::generate_nf(k, radius, cfg.cap)?;
            let mut header = cfg.header("nf-gen");
            header.push(format!("k: {k}"));
            header.push(format!("radius: {radius}"));
            let mut out = sink(&cfg)?;
            comment_header(&mut out, &header)?;
            writeln!(out, "x,y,a,b")?;
            for p in &pts {
                writeln!(out, "{:.12},{:.12},{},{}", p.position[0], p.position[1], p.preimage.a, p.preimage.b)?;
            }
            out.flush()?;
        }
        Command::NfZeta { s } => {
            let z = numfield::dedekind_zeta(s, cfg.rel_err)?;
            let mut out = sink(&cfg)?;
            scalar(&mut out, z.value, z.value * z.certified_bound)?;
            out.flush()?;
        }
        Command::NfDiffract { k, threshold, lambda, style } => {
            let mut out = sink(&cfg)?;
            if let Some(l) = lambda {
                let l: QuadRational = l.parse()?;
                let i = numfield::intensity_nf(&l, k, cfg.rel_err)?;
                scalar(&mut out, i, 2.0 * cfg.rel_err * i)?;
                out.flush()?;
                return Ok(());
            }
            let (lo, hi) = float_box(&cfg, "0,0,1,1")?;
            let atoms = numfield::support_enumerate_nf(k, lo, hi, threshold, cfg.rel_err, cfg.cap)?;
            let mut header = cfg.header("nf-diffract");
            header.push(format!("k: {k}"));
            header.push(format!("threshold: {threshold:e}"));
            match format_or(&cfg, "csv", &["csv", "svg"])?.as_str() {
                "csv" => {
                    comment_header(&mut out, &header)?;
                    writeln!(out, "x,y,a,b,den,intensity")?;
                    for a in &atoms {
                        writeln!(
                            out,
                            "{:.10},{:.10},{},{},{},{:.12e}",
                            a.position[0], a.position[1], a.lambda.a, a.lambda.b, a.den, a.intensity
                        )?;
                    }
                }
                _ => {
                    let style: FigureStyle = style.parse()?;
                    let plot: Vec<PlotAtom> =
                        atoms.iter().map(|a| PlotAtom { position: a.position.to_vec(), intensity: a.intensity }).collect();
                    write_svg(&plot, style, (lo, hi), &header, &mut out)?;
                }
            }
            out.flush()?;
        }
    }
    Ok(())
}

fn view_of(window: &RationalBox) -> Result<([f64; 2], [f64; 2]), Failure> {
    if window.lo.len() != 2 {
        return Err(Failure::Error("figures need a two-dimensional spec".into()));
    }
    let f = |r: &Ratio<i64>| *r.numer() as f64 / *r.denom() as f64;
    Ok(([f(&window.lo[0]), f(&window.lo[1])], [f(&window.hi[0]), f(&window.hi[1])]))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        // a closed downstream pipe (e.g. `| head`) is not an error
        Err(Failure::Error(msg)) if msg.contains("Broken pipe") => ExitCode::SUCCESS,
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
