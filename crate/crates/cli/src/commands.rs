use std::fmt;
use std::path::Path;
use std::time::Instant;

use argseg_core::io::{load_image, read_model_pack, read_strokes, write_label_map, write_model_pack, write_partition, write_rgb_png};
use argseg_core::pipeline::{make_stamp_partitioned, segment_partitioned};
use argseg_core::{apply_stamp, render_labels, watershed, LabelId, MatchParams, RasterImage, Rgb, SegmentationResult, WatershedParams};

use crate::args::{Command, RenderArgs, WatershedArgs};

/// A failed step, named after the flag or stage it came from.
#[derive(Debug)]
pub struct Failure {
    what: String,
    source: argseg_core::Error,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Keep the reason on one line even if a nested message is not.
        let reason = self.source.to_string().replace('\n', " ");
        write!(f, "{}: {reason}", self.what)
    }
}

trait Context<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, Failure>;
}

impl<T> Context<T> for argseg_core::Result<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, Failure> {
        self.map_err(|source| Failure { what: what(), source })
    }
}

fn flag(name: &str, path: &Path) -> impl FnOnce() -> String {
    let s = format!("--{name} {}", path.display());
    move || s
}

fn ws(args: &WatershedArgs) -> WatershedParams {
    WatershedParams::new(args.radius).expect("validated by the parser")
}

pub fn run(command: Command) -> Result<(), Failure> {
    let start = Instant::now();
    match command {
        Command::Overseg { image, out, watershed: w } => {
            let img = load_image(&image).context(flag("image", &image))?;
            let partition = watershed(&img, ws(&w));
            write_partition(&out, &partition).context(flag("out", &out))?;
            eprintln!("overseg: {} regions in {:.1} ms", partition.region_count(), ms(start));
        }
        Command::Segment { image, strokes, alpha, gamma, out, render, stamp_out, watershed: w } => {
            let img = load_image(&image).context(flag("image", &image))?;
            let strokes = read_strokes(&strokes).context(flag("strokes", &strokes))?;
            let params = MatchParams::new(alpha, gamma).context(|| "params".into())?;
            let partition = watershed(&img, ws(&w));
            let result = segment_partitioned(&img, &partition, &strokes, params).context(|| "segment".into())?;
            for warning in &result.warnings {
                eprintln!("warning: {warning}");
            }
            let table = strokes.label_table();
            write_outputs(&img, &result, &table, &out, &render)?;
            if let Some(path) = stamp_out {
                let pack = make_stamp_partitioned(&img, &partition, &strokes, params).context(|| "stamp".into())?;
                write_model_pack(&path, &pack).context(flag("stamp-out", &path))?;
            }
            eprintln!(
                "segment: {} regions, {} model vertices in {:.1} ms",
                result.region_count,
                result.regions.values().map(|r| r.model_vertex).collect::<std::collections::BTreeSet<_>>().len(),
                ms(start)
            );
        }
        Command::Stamp { image, strokes, alpha, gamma, out, watershed: w } => {
            let img = load_image(&image).context(flag("image", &image))?;
            let strokes = read_strokes(&strokes).context(flag("strokes", &strokes))?;
            let params = MatchParams::new(alpha, gamma).context(|| "params".into())?;
            let partition = watershed(&img, ws(&w));
            let pack = make_stamp_partitioned(&img, &partition, &strokes, params).context(|| "stamp".into())?;
            write_model_pack(&out, &pack).context(flag("out", &out))?;
            let r = pack.rect;
            eprintln!(
                "stamp: {} vertices, rect {}x{} at ({}, {}) in {:.1} ms",
                pack.model_arg.vertex_count(),
                r.width,
                r.height,
                r.x,
                r.y,
                ms(start)
            );
        }
        Command::Apply { model, image, at, alpha, gamma, out, render, watershed: w } => {
            let pack = read_model_pack(&model).context(flag("model", &model))?;
            let img = load_image(&image).context(flag("image", &image))?;
            let params = MatchParams::new(
                alpha.unwrap_or(pack.params_default.alpha()),
                gamma.unwrap_or(pack.params_default.gamma_e()),
            )
            .context(|| "params".into())?;
            // The placement is checked before the watershed runs.
            let result = apply_stamp(&pack, &img, at, params, ws(&w)).context(|| "--at".into())?;
            write_outputs(&img, &result, &pack.label_table, &out, &render)?;
            eprintln!("apply: {} regions matched in {:.1} ms", result.regions.len(), ms(start));
        }
    }
    Ok(())
}

fn write_outputs(
    img: &RasterImage,
    result: &SegmentationResult,
    table: &std::collections::BTreeMap<LabelId, Rgb>,
    out: &Path,
    render: &RenderArgs,
) -> Result<(), Failure> {
    write_label_map(out, result, table).context(flag("out", out))?;
    if let Some(path) = &render.overlay {
        let overlay = render_labels(result, table, img, render.opacity).context(|| "render".into())?;
        write_rgb_png(path, &overlay).context(flag("overlay", path))?;
    }
    Ok(())
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}
