use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spdc_oam::config::{Command, Format, RunConfig};
use spdc_oam::entanglement::LogBase;
use spdc_oam::run::run;
use spdc_oam::{Error, ModeFamily, Result};

/// OAM spectra and entanglement entropy of down-converted photon pairs.
#[derive(Parser, Debug)]
#[command(name = "spdc-oam", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Normalized (l_s, l_i) spectrum of one scenario.
    Spectrum,
    /// Entropy for every pump charge and pump/projection combination.
    EntropyTable,
    /// Compare the lens-transformed Bessel-Gauss beam with the closed-form POV mode.
    ValidatePov,
    /// Rank entropy conventions against the reference table.
    Calibrate,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Family {
    #[value(alias = "LG")]
    Lg,
    #[value(alias = "POV")]
    Pov,
}

impl From<Family> for ModeFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Lg => ModeFamily::LaguerreGauss,
            Family::Pov => ModeFamily::PerfectVortex,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
enum Conventions {
    Configured,
    All,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum OutFormat {
    Csv,
    Json,
}

fn parse_pair(s: &str) -> std::result::Result<(i32, i32), String> {
    let (a, b) = s.split_once(',').ok_or("expected l_s,l_i")?;
    Ok((
        a.trim().parse().map_err(|e| format!("l_s: {e}"))?,
        b.trim().parse().map_err(|e| format!("l_i: {e}"))?,
    ))
}

fn parse_log_base(s: &str) -> std::result::Result<LogBase, String> {
    match s {
        "e" | "natural" => Ok(LogBase::Natural),
        "2" => Ok(LogBase::Two),
        _ => s
            .strip_prefix("d=")
            .and_then(|d| d.parse().ok())
            .map(LogBase::Dimension)
            .ok_or_else(|| format!("expected e, 2 or d=<dimension>, got {s}")),
    }
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// TOML config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pump: Option<Family>,
    /// Pump topological charge.
    #[arg(long, global = true, allow_negative_numbers = true)]
    lp: Option<i32>,
    /// Radial index of an LG pump.
    #[arg(long, global = true)]
    p: Option<u32>,
    /// Projection family for both signal and idler.
    #[arg(long, global = true, value_enum)]
    project: Option<Family>,
    #[arg(long, global = true, value_enum)]
    signal: Option<Family>,
    #[arg(long, global = true, value_enum)]
    idler: Option<Family>,
    /// Half-width of the (l_s, l_i) window; sized automatically when omitted.
    #[arg(long, global = true)]
    window: Option<u32>,
    /// Report the probability of one pair, e.g. --pair 1,0.
    #[arg(long, global = true, value_parser = parse_pair, allow_hyphen_values = true)]
    pair: Option<(i32, i32)>,

    /// Entropy table rows, e.g. --lp-values 0,1,2.
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    lp_values: Option<Vec<i32>>,
    /// Logarithm base: e, 2 or d=<dimension>.
    #[arg(long, global = true, value_parser = parse_log_base)]
    log_base: Option<LogBase>,
    #[arg(long, global = true)]
    normalize_weights: Option<bool>,
    /// Numerically L2-normalize every mode before the overlap.
    #[arg(long, global = true)]
    normalize_modes: Option<bool>,
    #[arg(long, global = true, value_enum)]
    conventions: Option<Conventions>,

    /// POV ring radius.
    #[arg(long, global = true)]
    r0: Option<f64>,
    /// POV ring width.
    #[arg(long, global = true)]
    w0: Option<f64>,
    #[arg(long, global = true)]
    focal_length: Option<f64>,
    #[arg(long, global = true)]
    wavenumber: Option<f64>,
    /// Charges checked by validate-pov.
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    validate_l: Option<Vec<i32>>,

    #[arg(long, global = true)]
    r_max: Option<f64>,
    #[arg(long, global = true)]
    radial_nodes: Option<usize>,
    #[arg(long, global = true)]
    panels: Option<usize>,
    #[arg(long, global = true)]
    azimuthal_nodes: Option<usize>,
    #[arg(long, global = true)]
    rel_tol: Option<f64>,

    /// Output directory [env: SPDC_OAM_OUT_DIR, default: .]
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Output file, overriding the directory and generated name.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutFormat>,
    /// Print the resolved configuration as TOML and exit.
    #[arg(long, global = true)]
    print_config: bool,
}

fn resolve(cmd: Cmd, o: &Opts) -> Result<RunConfig> {
    let mut c = match &o.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    c.command = match cmd {
        Cmd::Spectrum => Command::Spectrum,
        Cmd::EntropyTable => Command::EntropyTable,
        Cmd::ValidatePov => Command::ValidatePov,
        Cmd::Calibrate => Command::Calibrate,
    };
    macro_rules! set {
        ($field:expr, $flag:expr) => {
            if let Some(v) = $flag.clone() {
                $field = v.into();
            }
        };
    }
    set!(c.pump, o.pump);
    set!(c.l_p, o.lp);
    set!(c.p, o.p);
    if let Some(f) = o.project {
        c.signal = f.into();
        c.idler = f.into();
    }
    set!(c.signal, o.signal);
    set!(c.idler, o.idler);
    if o.window.is_some() {
        c.l_window = o.window;
    }
    if o.pair.is_some() {
        c.pair = o.pair;
    }
    set!(c.l_p_values, o.lp_values);
    set!(c.log_base, o.log_base);
    set!(c.normalize_weights, o.normalize_weights);
    set!(c.normalize_modes, o.normalize_modes);
    if let Some(conv) = o.conventions {
        c.all_conventions = conv == Conventions::All;
    }
    set!(c.pov.r0, o.r0);
    set!(c.pov.w0, o.w0);
    set!(c.lens.focal_length, o.focal_length);
    set!(c.lens.wavenumber, o.wavenumber);
    set!(c.validate_l, o.validate_l);
    set!(c.quadrature.r_max, o.r_max);
    set!(c.quadrature.radial_nodes, o.radial_nodes);
    set!(c.quadrature.panels, o.panels);
    set!(c.quadrature.azimuthal_nodes, o.azimuthal_nodes);
    set!(c.quadrature.rel_tol, o.rel_tol);
    if o.out_dir.is_some() {
        c.out_dir = o.out_dir.clone();
    }
    if o.output.is_some() {
        c.output = o.output.clone();
    }
    if let Some(f) = o.format {
        c.format = match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        };
    }
    c.validate()?;
    Ok(c)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = resolve(cli.command, &cli.opts).and_then(|cfg| {
        if cli.opts.print_config {
            print!("{}", cfg.to_toml_string()?);
            return Ok(());
        }
        let outcome = run(&cfg)?;
        print!("{}", outcome.summary);
        for f in &outcome.files {
            eprintln!("wrote {}", f.display());
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_status(&e))
        }
    }
}

fn exit_status(e: &Error) -> u8 {
    e.exit_code() as u8
}
