//! Command-line surface: ICA over a day/value corpus, per-day density
//! sharpening, basis inspection, and seeded synthetic fixture generation.

use clap::{Args, Parser, Subcommand, ValueEnum};
use lpsharp::io::{fmt6, ingest_csv, write_atomic, write_lp_map_csv, write_surprisal_csv};
use lpsharp::{
    build_lp_map, compare_surprisal, fit_gaussian_robust, fit_laplace_mle, fit_profile,
    gauss_legendre, kl_surprise, maxent_fit, BaseModel, DSModel, Error, ExperimentSeries, Family,
    IcaConfig, LPBasis, Penalty, Result, ScreenMode, SharpeningFunction,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "lpsharp", version, about = "LP diagnostics and density sharpening for day/value corpora")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Gaussian,
    Laplace,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum PenaltyArg {
    Aic,
    Bic,
}

impl From<PenaltyArg> for Penalty {
    fn from(p: PenaltyArg) -> Self {
        match p {
            PenaltyArg::Aic => Penalty::Aic,
            PenaltyArg::Bic => Penalty::Bic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ScreenModeArg {
    Open,
    Threshold,
    ThresholdThenOpen,
}

impl From<ScreenModeArg> for ScreenMode {
    fn from(m: ScreenModeArg) -> Self {
        match m {
            ScreenModeArg::Open => ScreenMode::Open,
            ScreenModeArg::Threshold => ScreenMode::Threshold,
            ScreenModeArg::ThresholdThenOpen => ScreenMode::ThresholdThenOpen,
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Input CSV with header day,value
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "aic")]
    penalty: PenaltyArg,
    #[arg(long, value_enum, default_value = "open")]
    screen_mode: ScreenModeArg,
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u32).range(16..=512))]
    quadrature_nodes: u32,
    #[arg(long, default_value = "./out")]
    output_dir: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Informative component analysis: LP-map, surprisal table, heatmaps
    Ica {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value = "both")]
        family: FamilyArg,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=12))]
        m_max: u32,
        /// Report degenerate series as blank rows instead of aborting
        #[arg(long)]
        skip_degenerate: bool,
    },
    /// Sharpen one day's base model and emit the fitted densities
    Sharpen {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        day: u32,
        #[arg(long, value_enum, default_value = "laplace")]
        family: FamilyArg,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=12))]
        m_max: u32,
        /// Clamp negative L2-series density values to zero in the plot CSVs
        #[arg(long)]
        clip_plot: bool,
    },
    /// Print the orthonormal polynomial coefficients as CSV
    Basis {
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=12))]
        max_order: u32,
    },
    /// Generate a seeded synthetic corpus in the input schema
    Synth {
        #[arg(long, value_enum, default_value = "laplace")]
        family: FamilyArg,
        #[arg(long, default_value_t = 0.0)]
        location: f64,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, default_value_t = 500)]
        n_per_day: usize,
        #[arg(long, default_value_t = 1)]
        k_days: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "./out")]
        output_dir: PathBuf,
    },
}

fn single_family(f: FamilyArg) -> Result<Family> {
    match f {
        FamilyArg::Gaussian => Ok(Family::Gaussian),
        FamilyArg::Laplace => Ok(Family::Laplace),
        FamilyArg::Both => Err(Error::InvalidInput(
            "this command needs a single family (gaussian or laplace)".into(),
        )),
    }
}

fn cmd_ica(common: &CommonArgs, family: FamilyArg, m_max: u32, skip_degenerate: bool) -> Result<()> {
    let dataset = ingest_csv(&common.input)?;
    let basis = LPBasis::build(m_max as usize)?;
    let cfg = IcaConfig {
        m_max: m_max as usize,
        penalty: common.penalty.into(),
        mode: common.screen_mode.into(),
        skip_degenerate,
    };
    let families = match family {
        FamilyArg::Gaussian => vec![Family::Gaussian],
        FamilyArg::Laplace => vec![Family::Laplace],
        FamilyArg::Both => vec![Family::Gaussian, Family::Laplace],
    };
    for fam in &families {
        let map = build_lp_map(&dataset, *fam, &cfg, &basis)?;
        let stem = common.output_dir.join(format!("lp_map_{}", fam.label()));
        write_lp_map_csv(&map, &stem.with_extension("csv"))?;
        write_atomic(
            &stem.with_extension("svg"),
            lpsharp::svg::render_lp_map(&map).as_bytes(),
        )?;
    }
    if family == FamilyArg::Both {
        let table = compare_surprisal(&dataset, &cfg, &basis)?;
        write_surprisal_csv(&table, &common.output_dir.join("surprisal.csv"))?;
    }
    Ok(())
}

fn fit_day_base(values: &[f64], family: Family) -> Result<BaseModel> {
    match family {
        Family::Gaussian => fit_gaussian_robust(values),
        Family::Laplace => fit_laplace_mle(values),
    }
}

fn cmd_sharpen(common: &CommonArgs, day: u32, family: FamilyArg, m_max: u32, clip_plot: bool) -> Result<()> {
    let family = single_family(family)?;
    let dataset = ingest_csv(&common.input)?;
    let series: &ExperimentSeries = dataset
        .iter()
        .find(|s| s.series_id == day)
        .ok_or(Error::UnknownDay(day))?;
    let basis = LPBasis::build(m_max as usize)?;
    let quad = gauss_legendre(common.quadrature_nodes as usize)?;
    let base = fit_day_base(&series.values, family)?;
    let profile = fit_profile(
        &series.values,
        &base,
        &basis,
        common.penalty.into(),
        common.screen_mode.into(),
    )?;
    let l2 = SharpeningFunction::l2_from_profile(&profile, &basis);
    let constraints: Vec<(usize, f64)> = profile
        .selected
        .iter()
        .map(|&j| (j, profile.smoothed[j - 1]))
        .collect();
    let maxent = maxent_fit(&constraints, &basis, &quad)?;
    let kl = kl_surprise(&maxent, &quad)?;

    let clip = |v: f64| if clip_plot { v.max(0.0) } else { v };

    // d_<day>.csv: the two sharpening functions on a 512-point u grid
    let mut d_csv = String::from("u,d_l2,d_maxent\n");
    for i in 0..512 {
        let u = (i as f64 + 0.5) / 512.0;
        d_csv.push_str(&format!(
            "{},{},{}\n",
            fmt6(u),
            fmt6(clip(l2.eval(u))),
            fmt6(maxent.eval(u))
        ));
    }
    write_atomic(&common.output_dir.join(format!("d_{day}.csv")), d_csv.as_bytes())?;

    // density_<day>.csv: base and sharpened densities over location +/- 8 scales
    let ds_l2 = DSModel::new(base, l2.clone());
    let ds_me = DSModel::new(base, maxent.clone());
    let mut f_csv = String::from("x,f0,ds_l2,ds_maxent\n");
    for i in 0..512 {
        let x = base.location() + base.scale() * (-8.0 + 16.0 * (i as f64 + 0.5) / 512.0);
        f_csv.push_str(&format!(
            "{},{},{},{}\n",
            fmt6(x),
            fmt6(base.pdf(x)?),
            fmt6(clip(ds_l2.pdf(x)?)),
            fmt6(ds_me.pdf(x)?)
        ));
    }
    write_atomic(&common.output_dir.join(format!("density_{day}.csv")), f_csv.as_bytes())?;

    // model_<day>.txt: full fit report
    let mut txt = String::new();
    txt.push_str(&format!("day: {day}\n"));
    txt.push_str(&format!("family: {}\n", family.label()));
    txt.push_str(&format!("n: {}\n", profile.n));
    txt.push_str(&format!("location: {}\n", fmt6(base.location())));
    txt.push_str(&format!("scale: {}\n", fmt6(base.scale())));
    txt.push_str(&format!("penalty: {}\n", profile.penalty.label()));
    txt.push_str(&format!(
        "selected: {{{}}}\n",
        profile
            .selected
            .iter()
            .map(|j| j.to_string())
            .collect::<Vec<_>>()
            .join(",")
    ));
    let join6 = |v: &[f64]| v.iter().map(|&c| fmt6(c)).collect::<Vec<_>>().join(",");
    txt.push_str(&format!("raw_lp: {}\n", join6(&profile.raw)));
    txt.push_str(&format!("smoothed_lp: {}\n", join6(&profile.smoothed)));
    for &(j, th) in maxent.terms() {
        txt.push_str(&format!("theta{j}: {}\n", fmt6(th)));
    }
    txt.push_str(&format!("psi: {}\n", fmt6(maxent.log_partition())));
    txt.push_str(&format!("si: {}\n", fmt6(profile.surprisal)));
    txt.push_str(&format!("kl: {}\n", fmt6(kl)));
    write_atomic(&common.output_dir.join(format!("model_{day}.txt")), txt.as_bytes())?;
    Ok(())
}

fn cmd_basis(max_order: u32) -> Result<()> {
    let basis = LPBasis::build(max_order as usize)?;
    println!("order,power,coefficient");
    for j in 1..=basis.max_order() {
        for (power, c) in basis.coefficients(j)?.iter().enumerate() {
            println!("{j},{power},{}", fmt6(*c));
        }
    }
    Ok(())
}

fn cmd_synth(
    family: FamilyArg,
    location: f64,
    scale: f64,
    n_per_day: usize,
    k_days: usize,
    seed: u64,
    output_dir: &PathBuf,
) -> Result<()> {
    let family = single_family(family)?;
    let base = BaseModel::new(family, location, scale)?;
    let dataset = lpsharp::synth::generate(&base, n_per_day, k_days, seed)?;
    write_atomic(
        &output_dir.join("synth.csv"),
        lpsharp::synth::to_csv(&dataset).as_bytes(),
    )?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ica {
            common,
            family,
            m_max,
            skip_degenerate,
        } => cmd_ica(&common, family, m_max, skip_degenerate),
        Command::Sharpen {
            common,
            day,
            family,
            m_max,
            clip_plot,
        } => cmd_sharpen(&common, day, family, m_max, clip_plot),
        Command::Basis { max_order } => cmd_basis(max_order),
        Command::Synth {
            family,
            location,
            scale,
            n_per_day,
            k_days,
            seed,
            output_dir,
        } => cmd_synth(family, location, scale, n_per_day, k_days, seed, &output_dir),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
