mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hgtf::cli::formats::{
    decode_f64le, parse_complex, parse_grid_csv, parse_signal_csv, write_signal, Report,
    SignalFormat,
};
use tempfile::TempDir;

fn hgtf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgtf"))
        .args(args)
        .output()
        .unwrap()
}

fn run_ok(args: &[&str]) {
    let out = hgtf(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn report(dir: &Path) -> Report {
    Report::parse(&fs::read_to_string(dir.join("report.txt")).unwrap())
}

fn num(r: &Report, key: &str) -> f64 {
    r.get(key)
        .unwrap_or_else(|| panic!("missing {key}"))
        .parse()
        .unwrap()
}

const ANALYZE: &[&str] = &[
    "analyze",
    "--gen",
    "chirp:rate=1,sigma=2,span=32,dt=0.0625",
    "--order",
    "2",
    "--delta-t",
    "0.5",
];

#[test]
fn analyze_outputs_and_self_consistency() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("run");
    let mut args = ANALYZE.to_vec();
    args.extend(["--out", out.to_str().unwrap()]);
    run_ok(&args);
    for f in ["psi.csv", "density.csv", "density.ppm", "report.txt"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let r = report(&out);
    assert!(r.get("energy_residual").is_some());
    assert!(num(&r, "energy_residual") < 1e-3);
    let grid = parse_grid_csv(&fs::read_to_string(out.join("density.csv")).unwrap(), |s| {
        s.parse::<f64>().ok()
    })
    .unwrap();
    let energy = num(&r, "energy");
    assert!((grid.integral() - energy).abs() <= 1e-12 * energy);

    let psi = parse_grid_csv(
        &fs::read_to_string(out.join("psi.csv")).unwrap(),
        parse_complex,
    )
    .unwrap();
    for (row_psi, row_d) in psi.values.iter().zip(&grid.values) {
        for (p, d) in row_psi.iter().zip(row_d) {
            assert_eq!(p.norm_sqr(), *d);
        }
    }

    let ppm = fs::read(out.join("density.ppm")).unwrap();
    let header = format!(
        "P6\n{} {}\n255\n",
        grid.t_values.len(),
        grid.omega_values.len()
    );
    assert!(ppm.starts_with(header.as_bytes()));
    assert_eq!(
        ppm.len(),
        header.len() + 3 * grid.t_values.len() * grid.omega_values.len()
    );
}

#[test]
fn outputs_are_deterministic() {
    let tmp = TempDir::new().unwrap();
    let dirs = [tmp.path().join("a"), tmp.path().join("b")];
    for d in &dirs {
        let mut args = ANALYZE.to_vec();
        args.extend([
            "--out",
            d.to_str().unwrap(),
            "--scale",
            "log",
            "--floor",
            "1e-4",
        ]);
        run_ok(&args);
    }
    for f in ["psi.csv", "density.csv", "density.ppm"] {
        assert_eq!(
            fs::read(dirs[0].join(f)).unwrap(),
            fs::read(dirs[1].join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn reconstruct_emits_both_formats() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("rec");
    run_ok(&[
        "reconstruct",
        "--gen",
        "chirp:rate=0.5,sigma=1,span=128,dt=0.125",
        "--delta-t",
        "1",
        "--route",
        "series",
        "--n-max",
        "64",
        "--out",
        out.to_str().unwrap(),
    ]);
    let r = report(&out);
    assert!(num(&r, "l2_error") <= 1e-3);
    let from_csv =
        parse_signal_csv(&fs::read_to_string(out.join("reconstructed.csv")).unwrap()).unwrap();
    let from_bin = decode_f64le(&fs::read(out.join("reconstructed.f64")).unwrap()).unwrap();
    assert_eq!(from_csv.samples(), from_bin.samples());
    assert_eq!(from_csv.t0(), from_bin.t0());
}

#[test]
fn reconstruct_integral_route_with_negative_axes() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("rec");
    run_ok(&[
        "reconstruct",
        "--gen",
        "gaussian:span=32,dt=0.0625",
        "--delta-t",
        "1",
        "--order",
        "3",
        "--t-axis",
        "-16:16:257",
        "--omega-axis",
        "-25:25:401",
        "--strict",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(num(&report(&out), "l2_error") <= 1e-3);
}

#[test]
fn moments_of_second_order_window() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("m");
    run_ok(&[
        "moments",
        "--gen",
        "hgf:n=2,delta_t=0.7,T=1,Omega=3",
        "--out",
        out.to_str().unwrap(),
    ]);
    let r = report(&out);
    assert!((num(&r, "sigma_t") - 5f64.sqrt() * 0.7).abs() < 1e-6);
    assert!((num(&r, "sigma_omega") - 5f64.sqrt() * 0.5 / 0.7).abs() < 1e-6);
}

#[test]
fn file_inputs_round_trip() {
    let tmp = TempDir::new().unwrap();
    let s = common::chirp();
    let (csv, bin) = (tmp.path().join("in.csv"), tmp.path().join("in.bin"));
    write_signal(&csv, &s, SignalFormat::Csv).unwrap();
    write_signal(&bin, &s, SignalFormat::F64le).unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    run_ok(&[
        "moments",
        "--input",
        csv.to_str().unwrap(),
        "--out",
        a.to_str().unwrap(),
    ]);
    run_ok(&[
        "moments",
        "--input",
        bin.to_str().unwrap(),
        "--out",
        b.to_str().unwrap(),
    ]);
    for key in ["energy", "mu_t", "sigma_t", "mu_omega", "sigma_omega"] {
        assert_eq!(report(&a).get(key), report(&b).get(key), "{key}");
    }
}

#[test]
fn marginals_and_wigner_and_gabor_runs() {
    let tmp = TempDir::new().unwrap();
    let m = tmp.path().join("m");
    run_ok(&[
        "marginals",
        "--gen",
        "tones",
        "--order",
        "1",
        "--delta-t",
        "0.5",
        "--strict",
        "--out",
        m.to_str().unwrap(),
    ]);
    assert!(m.join("marginal_time.csv").is_file() && m.join("marginal_freq.csv").is_file());
    let w = tmp.path().join("w");
    run_ok(&[
        "wigner",
        "--gen",
        "tones",
        "--strict",
        "--format",
        "csv",
        "--out",
        w.to_str().unwrap(),
    ]);
    assert!(w.join("wigner.csv").is_file() && !w.join("wigner.ppm").exists());
    assert!(num(&report(&w), "min") < 0.0);
    let g = tmp.path().join("g");
    run_ok(&[
        "gabor",
        "--gen",
        "chirp",
        "--strict",
        "--format",
        "ppm",
        "--out",
        g.to_str().unwrap(),
    ]);
    assert!(g.join("density.ppm").is_file() && !g.join("density.csv").exists());
}

#[test]
fn usage_errors_exit_1() {
    let out = hgtf(&["analyze", "--gen", "chirp", "--order", "2", "--out", "x"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--delta-t"));
    assert_eq!(
        hgtf(&[
            "analyze",
            "--gen",
            "chirp",
            "--order",
            "-1",
            "--delta-t",
            "1",
            "--out",
            "x"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(hgtf(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(hgtf(&[]).status.code(), Some(1));
    let help = hgtf(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("Exit codes"));
}

#[test]
fn bad_input_data_exits_2() {
    let tmp = TempDir::new().unwrap();
    let bad = tmp.path().join("jump.csv");
    fs::write(&bad, "t,re\n0,1\n0.1,1\n0.2,1\n0.5,1\n").unwrap();
    let out = hgtf(&[
        "moments",
        "--input",
        bad.to_str().unwrap(),
        "--out",
        tmp.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 4"));
    let missing = hgtf(&[
        "moments",
        "--input",
        "/nonexistent.csv",
        "--out",
        tmp.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn strict_failure_exits_3_after_writing() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("s");
    let code = hgtf(&[
        "analyze",
        "--gen",
        "chirp:span=10",
        "--delta-t",
        "0.5",
        "--strict",
        "--out",
        out.to_str().unwrap(),
    ])
    .status
    .code();
    assert_eq!(code, Some(3));
    assert_eq!(report(&out).get("status"), Some("check_failed"));
}
