use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use argseg_core::io::{decode_label_map_png, decode_partition_png, read_model_pack, write_rgb_png};
use argseg_core::{LabelId, RasterImage, StrokeLabel, StrokeSet};
use tempfile::TempDir;

fn argseg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_argseg")).args(args).output().expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    /// 40x24 image, dark left half and light right half, one stroke per tone.
    fn two_tone() -> Fixture {
        let dir = TempDir::new().unwrap();
        let image = RasterImage::from_fn(40, 24, |x, _| if x < 20 { [30, 30, 30] } else { [220, 220, 220] }).unwrap();
        write_rgb_png(dir.path().join("image.png"), &image).unwrap();
        let strokes = StrokeSet::new(
            3,
            vec![
                StrokeLabel { id: LabelId(1), color: [255, 0, 0], brush_width: None, polylines: vec![vec![[4.0, 3.0], [4.0, 20.0]]] },
                StrokeLabel { id: LabelId(2), color: [0, 0, 255], brush_width: None, polylines: vec![vec![[35.0, 3.0], [35.0, 20.0]]] },
            ],
        );
        std::fs::write(dir.path().join("strokes.json"), serde_json::to_string(&strokes).unwrap()).unwrap();
        Fixture { dir }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).to_str().unwrap().to_owned()
    }
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn segment_two_tone_matches_ground_truth() {
    let f = Fixture::two_tone();
    let out = argseg(&[
        "segment", "--image", &f.arg("image.png"), "--strokes", &f.arg("strokes.json"), "--out", &f.arg("labels.png"),
        "--overlay", &f.arg("overlay.png"), "--stamp-out", &f.arg("stamp.json"),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stderr(&out).contains("ms"), "timing goes to stderr");

    let (w, h, labels) = decode_label_map_png(&read(&f.path("labels.png"))).unwrap();
    assert_eq!((w, h), (40, 24));
    for y in 0..h {
        for x in (0..w).filter(|&x| x != 19 && x != 20) {
            let expected = if x < 20 { LabelId(1) } else { LabelId(2) };
            assert_eq!(labels[(y * w + x) as usize], expected);
        }
    }
    let sidecar: serde_json::Value = serde_json::from_slice(&read(&f.path("labels.json"))).unwrap();
    assert_eq!(sidecar["unlabelled"], 65535);
    assert_eq!(sidecar["labels"][1]["color"], serde_json::json!([0, 0, 255]));

    let overlay = argseg_core::io::load_image(f.path("overlay.png")).unwrap();
    // opacity 0.5 of red over 30 gray: (255 + 30) / 2 = 142.5 -> 143
    assert_eq!(overlay.get(2, 2), [143, 15, 15]);
    read_model_pack(f.path("stamp.json")).unwrap();
}

#[test]
fn overseg_writes_partition_and_sidecar() {
    let f = Fixture::two_tone();
    let out = argseg(&["overseg", "--image", &f.arg("image.png"), "--out", &f.arg("part.png"), "--smoothing", "0"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let partition = decode_partition_png(&read(&f.path("part.png"))).unwrap();
    let sidecar: serde_json::Value = serde_json::from_slice(&read(&f.path("part.json"))).unwrap();
    assert_eq!(sidecar["region_count"], partition.region_count());
    assert_eq!(partition.region_count(), 2);
}

#[test]
fn stamp_then_apply_reproduces_segment() {
    let f = Fixture::two_tone();
    let base = ["--image", &f.arg("image.png"), "--strokes", &f.arg("strokes.json")];
    let seg = argseg(&[&["segment"][..], &base, &["--out", &f.arg("seg.png")]].concat());
    assert!(seg.status.success(), "{}", stderr(&seg));
    let stamp = argseg(&[&["stamp"][..], &base, &["--out", &f.arg("stamp.json")]].concat());
    assert!(stamp.status.success(), "{}", stderr(&stamp));

    let pack = read_model_pack(f.path("stamp.json")).unwrap();
    let at = format!("{},{}", pack.rect.x, pack.rect.y);
    let apply = argseg(&["apply", "--model", &f.arg("stamp.json"), "--image", &f.arg("image.png"), "--at", &at, "--out", &f.arg("applied.png")]);
    assert!(apply.status.success(), "{}", stderr(&apply));

    let (w, _, seg_labels) = decode_label_map_png(&read(&f.path("seg.png"))).unwrap();
    let (_, _, applied) = decode_label_map_png(&read(&f.path("applied.png"))).unwrap();
    for (i, (&a, &s)) in applied.iter().zip(&seg_labels).enumerate() {
        let (x, y) = ((i as u32 % w) as i64, (i as u32 / w) as i64);
        if pack.rect.contains(x, y) {
            assert_eq!(a, s);
        } else {
            assert_eq!(a, LabelId::UNLABELLED);
        }
    }
}

#[test]
fn out_of_range_alpha_is_a_usage_error() {
    let f = Fixture::two_tone();
    let out = argseg(&["segment", "--image", &f.arg("image.png"), "--strokes", &f.arg("strokes.json"), "--alpha", "1.5", "--out", &f.arg("l.png")]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.contains("alpha must be in [0, 1]"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    for args in [&["segment"][..], &["frobnicate"], &["overseg", "--image", "a.png", "--out", "b.png", "--smoothing", "9"], &["apply", "--model", "m", "--image", "i", "--at", "3", "--out", "o"]] {
        let out = argseg(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
        assert_eq!(stderr(&out).lines().count(), 1, "{args:?}");
        assert!(stderr(&out).starts_with("error:"));
    }
}

#[test]
fn placement_outside_image_is_a_pipeline_error() {
    let f = Fixture::two_tone();
    let stamp = argseg(&["stamp", "--image", &f.arg("image.png"), "--strokes", &f.arg("strokes.json"), "--out", &f.arg("stamp.json")]);
    assert!(stamp.status.success());
    for at in ["500,0", "-200,-200"] {
        let out = argseg(&["apply", "--model", &f.arg("stamp.json"), "--image", &f.arg("image.png"), "--at", at, "--out", &f.arg("x.png")]);
        assert_eq!(out.status.code(), Some(1));
        let err = stderr(&out);
        assert_eq!(err.lines().count(), 1, "{err}");
        assert!(err.starts_with("error: --at: invalid placement"), "{err}");
        assert!(!f.path("x.png").exists());
    }
}

#[test]
fn pipeline_errors_name_the_offending_input() {
    let f = Fixture::two_tone();
    std::fs::write(f.path("bad.json"), "{ not json").unwrap();
    let cases: [(Vec<String>, &str); 3] = [
        (vec!["overseg".into(), "--image".into(), f.arg("missing.png"), "--out".into(), f.arg("p.png")], "error: --image"),
        (
            vec!["segment".into(), "--image".into(), f.arg("image.png"), "--strokes".into(), f.arg("bad.json"), "--out".into(), f.arg("l.png")],
            "error: --strokes",
        ),
        (
            vec!["apply".into(), "--model".into(), f.arg("bad.json"), "--image".into(), f.arg("image.png"), "--at".into(), "0,0".into(), "--out".into(), f.arg("l.png")],
            "error: --model",
        ),
    ];
    for (args, prefix) in cases {
        let out = argseg(&args.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let err = stderr(&out);
        assert_eq!(err.lines().count(), 1, "{err}");
        assert!(err.starts_with(prefix), "{err}");
    }
}

#[test]
fn off_image_strokes_report_empty_model() {
    let f = Fixture::two_tone();
    std::fs::write(
        f.path("off.json"),
        r#"{"labels":[{"id":1,"color":[1,2,3],"polylines":[[[-50,-50],[-60,-40]]]}]}"#,
    )
    .unwrap();
    let out = argseg(&["segment", "--image", &f.arg("image.png"), "--strokes", &f.arg("off.json"), "--out", &f.arg("l.png")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("empty model"), "{}", stderr(&out));
}

#[test]
fn help_exits_zero() {
    let out = argseg(&["--help"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("segment"));
}
