use std::path::PathBuf;

use argseg_core::oversegment::MAX_SMOOTHING_RADIUS;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "argseg", version, about = "Stroke-driven image segmentation by relational graph matching")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Watershed oversegmentation; writes a 16-bit region id PNG.
    Overseg {
        #[arg(long)]
        image: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        watershed: WatershedArgs,
    },
    /// Segment an image from labelled strokes.
    Segment {
        #[arg(long)]
        image: PathBuf,
        #[arg(long)]
        strokes: PathBuf,
        #[arg(long, default_value_t = 0.5, value_parser = alpha)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5, value_parser = gamma)]
        gamma: f64,
        /// Label map PNG; the label table goes next to it as JSON.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        render: RenderArgs,
        /// Also save the model as a stamp.
        #[arg(long)]
        stamp_out: Option<PathBuf>,
        #[command(flatten)]
        watershed: WatershedArgs,
    },
    /// Save the model defined by strokes as a reusable stamp.
    Stamp {
        #[arg(long)]
        image: PathBuf,
        #[arg(long)]
        strokes: PathBuf,
        #[arg(long, default_value_t = 0.5, value_parser = alpha)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5, value_parser = gamma)]
        gamma: f64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        watershed: WatershedArgs,
    },
    /// Apply a stamp to an image with its top-left corner at `--at x,y`.
    Apply {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        image: PathBuf,
        #[arg(long, value_parser = placement, allow_hyphen_values = true)]
        at: (i64, i64),
        /// Defaults to the value stored in the stamp.
        #[arg(long, value_parser = alpha)]
        alpha: Option<f64>,
        /// Defaults to the value stored in the stamp.
        #[arg(long, value_parser = gamma)]
        gamma: Option<f64>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        render: RenderArgs,
        #[command(flatten)]
        watershed: WatershedArgs,
    },
}

#[derive(Debug, Args)]
pub struct WatershedArgs {
    /// Box blur radius applied before the gradient.
    #[arg(long = "smoothing", default_value_t = 1, value_parser = smoothing)]
    pub radius: u32,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Blended overlay PNG.
    #[arg(long)]
    pub overlay: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5, value_parser = opacity)]
    pub opacity: f64,
}

fn unit(name: &str, s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{name} must be a number in [0, 1]"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{name} must be in [0, 1]"))
    }
}

fn alpha(s: &str) -> Result<f64, String> {
    unit("alpha", s)
}

fn gamma(s: &str) -> Result<f64, String> {
    unit("gamma", s)
}

fn opacity(s: &str) -> Result<f64, String> {
    unit("opacity", s)
}

fn smoothing(s: &str) -> Result<u32, String> {
    match s.parse::<u32>() {
        Ok(r) if r <= MAX_SMOOTHING_RADIUS => Ok(r),
        _ => Err(format!("smoothing must be an integer in [0, {MAX_SMOOTHING_RADIUS}]")),
    }
}

fn placement(s: &str) -> Result<(i64, i64), String> {
    let err = || "at must be two integers x,y".to_string();
    let (x, y) = s.split_once(',').ok_or_else(err)?;
    Ok((x.trim().parse().map_err(|_| err())?, y.trim().parse().map_err(|_| err())?))
}
