use std::path::Path;
use std::process::{Command, Output};

use specwarp::{pearson_r, read_wav, read_wav_file, write_wav, BitDepth, Signal};
use tempfile::TempDir;

fn specwarp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specwarp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = specwarp(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn fails(args: &[&str]) -> (i32, String) {
    let out = specwarp(args);
    assert!(!out.status.success(), "{args:?} unexpectedly succeeded");
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn mono(p: impl AsRef<Path>) -> Signal {
    read_wav(p).unwrap().swap_remove(0)
}

#[test]
fn gen_then_identity_warp_reproduces_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let (src, out) = (path(&dir, "in.wav"), path(&dir, "out.wav"));
    ok(&[
        "gen",
        "sweep",
        &src,
        "--bit-depth",
        "float32",
        "--amplitude",
        "0.8",
    ]);
    let stdout = ok(&["warp", "--warp", "f", &src, &out]);
    assert!(stdout.contains("wrote"));

    let x = mono(&src);
    let y = read_wav_file(&out).unwrap();
    assert_eq!(y.bit_depth, BitDepth::Float32);
    assert_eq!(x.len(), y.channels[0].len());
    for (a, b) in x.samples().iter().zip(y.channels[0].samples()) {
        assert!((a - b).abs() <= 1e-6);
    }
}

#[test]
fn tone_warp_moves_the_peak() {
    let dir = tempfile::tempdir().unwrap();
    let (src, out, csv) = (
        path(&dir, "tone.wav"),
        path(&dir, "warped.wav"),
        path(&dir, "psd.csv"),
    );
    ok(&["gen", "tone", &src, "--freq", "300", "--amplitude", "0.9"]);
    ok(&["warp", "--warp", "2/3*f", &src, &out]);
    assert_eq!(read_wav_file(&out).unwrap().bit_depth, BitDepth::Pcm16);
    ok(&["psd", &out, &csv]);

    let mut reader = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["frequency_hz", "power"]);
    let rows: Vec<(f64, f64)> = reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].parse().unwrap())
        })
        .collect();
    let peak = rows
        .iter()
        .fold(
            (0.0, f64::MIN),
            |best, &(f, p)| if p > best.1 { (f, p) } else { best },
        )
        .0;
    assert!((peak - 200.0).abs() <= 16_000.0 / 4096.0, "{peak}");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(!text.contains('\r'));
}

#[test]
fn stereo_channels_are_warped_independently() {
    let dir = tempfile::tempdir().unwrap();
    let (src, out) = (path(&dir, "stereo.wav"), path(&dir, "out.wav"));
    let left = specwarp::generate::tone(300.0, 0.5, 16_000.0, 0.5).unwrap();
    let right = specwarp::generate::tone(900.0, 0.5, 16_000.0, 0.5).unwrap();
    write_wav(&src, &[left.clone(), right.clone()], BitDepth::Float32).unwrap();
    ok(&["warp", "--warp", "f", &src, &out]);
    let back = read_wav(&out).unwrap();
    assert_eq!(back.len(), 2);
    for (orig, got) in [left, right].iter().zip(&back) {
        let r = pearson_r(orig.samples(), got.samples()).unwrap();
        assert!(r > 1.0 - 1e-9, "{r}");
    }
}

#[test]
fn spectrogram_csv_is_long_format() {
    let dir = tempfile::tempdir().unwrap();
    let (src, csv) = (path(&dir, "tone.wav"), path(&dir, "sg.csv"));
    ok(&["gen", "tone", &src, "--duration", "0.25"]);
    ok(&["spectrogram", &src, &csv, "--window", "512", "--hop", "256"]);
    let mut reader = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(
        reader.headers().unwrap(),
        vec!["time_s", "frequency_hz", "power"]
    );
    let frames = (4000 - 512) / 256 + 1;
    assert_eq!(reader.records().count(), frames * 257);
}

#[test]
fn validate_writes_a_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let (report, warped) = (path(&dir, "report.json"), path(&dir, "warped.wav"));
    let stdout = ok(&[
        "validate",
        "--gen",
        "sweep:start=21,end=480",
        "--warp",
        "2/3*f",
        "--dewarp",
        "3/2*f",
        &report,
        "--save-warped",
        &warped,
    ]);
    assert!(stdout.contains("signal r"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    for key in [
        "input", "warp", "dewarp", "signal_r", "psd_r", "peaks_hz", "stages", "options", "warnings",
    ] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert!(json["signal_r"].as_f64().unwrap() >= 0.99);
    assert_eq!(json["stages"].as_array().unwrap().len(), 3);
    assert_eq!(json["input"]["samples"], 16_000);
    assert_eq!(mono(&warped).len(), 16_000);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let (cfg, out) = (path(&dir, "run.toml"), path(&dir, "out.wav"));
    std::fs::write(
        &cfg,
        "warp = \"3/2*f\"\ngen = \"tone:freq=300,duration=0.5\"\nrate = 8000\nbit-depth = \"float32\"\n",
    )
    .unwrap();
    ok(&["warp", "--config", &cfg, "--warp", "f", &out]);
    let y = read_wav_file(&out).unwrap();
    assert_eq!(y.bit_depth, BitDepth::Float32);
    let y = &y.channels[0];
    assert_eq!(y.sample_rate_hz(), 8000.0);
    assert_eq!(y.len(), 4000);
    let x = specwarp::generate::tone(300.0, 0.5, 8000.0, 1.0).unwrap();
    assert!(pearson_r(x.samples(), y.samples()).unwrap() > 1.0 - 1e-6);

    std::fs::write(&cfg, "wrap = \"f\"\n").unwrap();
    let (code, stderr) = fails(&["warp", "--config", &cfg, "--gen", "tone", &out]);
    assert_eq!(code, 1);
    assert!(stderr.contains("wrap"), "{stderr}");
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(&dir, "a.wav"), path(&dir, "b.wav"));
    for out in [&a, &b] {
        ok(&[
            "warp",
            "--gen",
            "noise:seed=3",
            "--warp",
            "2/3*f",
            "--chunk",
            "4000",
            out,
        ]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn errors_name_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(&dir, "out.wav");

    let (code, stderr) = fails(&["warp", "--gen", "tone", "--warp", "2*f+g", &out]);
    assert_eq!(code, 1);
    assert!(stderr.contains("unknown identifier `g`"), "{stderr}");

    let (_, stderr) = fails(&["warp", "--gen", "tone", "--warp", "1/(f-f)", &out]);
    assert!(stderr.contains("division by zero"), "{stderr}");

    let (_, stderr) = fails(&[
        "warp",
        "--gen",
        "tone",
        "--warp",
        "30*f",
        "--nyquist",
        "strict",
        &out,
    ]);
    assert!(stderr.contains("Nyquist"), "{stderr}");

    let (_, stderr) = fails(&["warp", "--warp", "f", &path(&dir, "missing.wav"), &out]);
    assert!(stderr.contains("missing.wav"), "{stderr}");

    let (_, stderr) = fails(&["warp", "--gen", "tone", &out]);
    assert!(stderr.contains("--warp"), "{stderr}");

    let (_, stderr) = fails(&["warp", "--gen", "tone", "--warp", "f", "--chunk", "8", &out]);
    assert!(stderr.contains("chunk"), "{stderr}");

    let src = path(&dir, "tone.wav");
    ok(&["gen", "tone", &src]);
    let (_, stderr) = fails(&["psd", &src, &path(&dir, "p.csv"), "--channel", "1"]);
    assert!(stderr.contains("channel 1"), "{stderr}");

    assert!(!Path::new(&out).exists());
}

#[test]
fn clamping_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out = specwarp(&[
        "warp",
        "--gen",
        "tone:freq=3000",
        "--warp",
        "3*f",
        &path(&dir, "out.wav"),
    ]);
    assert!(out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("clamped at Nyquist"), "{stderr}");
}

#[test]
fn demo_prints_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let json = path(&dir, "demo.json");
    let out = specwarp(&["demo", "--json", &json]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("check"));
    assert!(stdout.contains("checks passed"));
    let checks: Vec<serde_json::Value> =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(checks.len(), 9);
    let all_passed = checks.iter().all(|c| c["passed"] == true);
    let expected = if all_passed { 0 } else { 2 };
    assert_eq!(out.status.code(), Some(expected));
}
