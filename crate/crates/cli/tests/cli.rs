use std::fs;
use std::path::Path;
use std::process::Command;

use num_complex::Complex64;
use qptf_cli::dispatch;
use qptf_cli::io::{read_tfmap_csv, write_signal_csv};
use qptf_core::Signal;

fn run(args: &[&str]) -> i32 {
    dispatch(std::iter::once("qptf").chain(args.iter().copied()))
}

fn read_dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn binary_without_arguments_prints_usage_and_exits_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_qptf")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    let out = Command::new(env!("CARGO_BIN_EXE_qptf")).arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["transform", "--kind", "aqwd", "--lfm", "1,0.1,0.2"]), 2);
    assert_eq!(run(&["transform", "--kind", "wd", "--lambda", "0,-1,0,0,0", "--lfm", "1,0,0"]), 2);
    assert_eq!(run(&["transform", "--kind", "wd"]), 2);
    assert_eq!(run(&["transform", "--kind", "aqwd", "--lambda", "0,0,0,0,0", "--lfm", "1,0,0"]), 2);
    assert_eq!(run(&["transform", "--kind", "wd", "--lfm", "1,0,0", "--gaussian-pair", "0,4"]), 2);
    assert_eq!(run(&["transform", "--kind", "wd", "--lfm", "1,0,0", "--n", "4"]), 2);
    assert_eq!(run(&["figure", "fig1-gaussian"]), 2);
    assert_eq!(run(&["figure", "fig5", "--lambda", "0,-1,0,2,2"]), 2);
    assert_eq!(run(&["verify"]), 2);
    assert_eq!(run(&["sweep", "--config", "aqwd", "--snrs", "10", "--lfm", "1,0.1,0.2"]), 2);
}

#[test]
fn transform_is_byte_deterministic_and_feeds_detect() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let code = run(&[
            "transform", "--kind", "aqwd", "--lambda", "0,-1,0,2,2", "--lfm", "1,0.1,0.2",
            "--half-support", "10", "--n", "256", "--snr-db", "10", "--seed", "3",
            "--contour", "6", "--out-dir", dir.path().to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
    }
    let files = read_dir_bytes(a.path());
    assert_eq!(
        files.iter().map(|f| f.0.as_str()).collect::<Vec<_>>(),
        ["aqwd.csv", "aqwd.pgm", "aqwd_contour.pgm"]
    );
    assert_eq!(files, read_dir_bytes(b.path()));

    let map = read_tfmap_csv(&a.path().join("aqwd.csv")).unwrap();
    assert_eq!(map.params().unwrap().as_tuple(), (0.0, -1.0, 0.0, 2.0, 2.0));

    let from_csv = a.path().join("from_csv.txt");
    let direct = a.path().join("direct.txt");
    assert_eq!(run(&["detect", "--from-csv", a.path().join("aqwd.csv").to_str().unwrap(), "--out", from_csv.to_str().unwrap()]), 0);
    assert_eq!(
        run(&[
            "detect", "--kind", "aqwd", "--lambda", "0,-1,0,2,2", "--lfm", "1,0.1,0.2", "--n", "256",
            "--snr-db", "10", "--seed", "3", "--out", direct.to_str().unwrap(),
        ]),
        0
    );
    assert_eq!(fs::read(from_csv).unwrap(), fs::read(direct).unwrap());
}

#[test]
fn generated_signal_feeds_transform() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(run(&["generate", "--lfm", "1,0.1,0.2", "--lfm", "0.5,0.3,-0.1", "--n", "128", "--out-dir", d]), 0);
    assert_eq!(run(&["transform", "--kind", "wd", "--input", &format!("{d}/signal.csv"), "--out-dir", d, "--name", "from_file"]), 0);
    assert_eq!(run(&["transform", "--kind", "wd", "--lfm", "1,0.1,0.2", "--lfm", "0.5,0.3,-0.1", "--n", "128", "--out-dir", d, "--name", "direct"]), 0);
    assert_eq!(fs::read(dir.path().join("from_file.csv")).unwrap(), fs::read(dir.path().join("direct.csv")).unwrap());
}

#[test]
fn zero_signal_is_a_detection_failure_not_a_crash() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.csv");
    write_signal_csv(&Signal::new(vec![Complex64::default(); 64], -1.0, 1.0 / 32.0).unwrap(), &path).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(run(&["detect", "--kind", "wd", "--input", p]), 1);
    // noise power relative to a zero signal is undefined
    assert_eq!(run(&["detect", "--kind", "wd", "--input", p, "--snr-db", "10"]), 1);
    assert_eq!(run(&["transform", "--kind", "af", "--input", p, "--out-dir", dir.path().to_str().unwrap()]), 0);
    let pgm = fs::read(dir.path().join("af.pgm")).unwrap();
    assert!(pgm[b"P5\n64 64\n255\n".len()..].iter().all(|&v| v == 0));
}

#[test]
fn verify_reports_every_property() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("verify.csv");
    assert_eq!(run(&["verify", "--all", "--n", "256", "--out", out.to_str().unwrap()]), 0);
    let text = fs::read_to_string(out).unwrap();
    let best: Vec<&str> = text.lines().skip(1).filter(|l| l.split(',').nth(6) == Some("true")).collect();
    assert_eq!(best.len(), 18);
    assert!(best.iter().all(|l| l.ends_with(",true")));
    assert_eq!(run(&["verify", "--property", "moyal-af", "--n", "128"]), 0);
}

#[test]
fn sweep_and_figure_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let d = dir.path().to_str().unwrap();
        let args = [
            "sweep", "--config", "wd", "--config", "aqwd:1,-2,1,2,1", "--snrs", "10,inf", "--seeds", "1..3",
            "--lfm", "1,0.1,0.2", "--n", "128", "--out",
        ];
        let out = format!("{d}/sweep.csv");
        assert_eq!(run(&[&args[..], &[out.as_str()]].concat()), 0);
        assert_eq!(run(&["figure", "fig6", "--n", "128", "--out-dir", d]), 0);
        assert_eq!(run(&["figure", "fig1-gaussian", "--lambda", "1,-1,1,0,0", "--n", "64", "--out-dir", d]), 0);
    }
    let files = read_dir_bytes(a.path());
    assert_eq!(files, read_dir_bytes(b.path()));
    let sweep = &files.iter().find(|f| f.0 == "sweep.csv").unwrap().1;
    assert_eq!(String::from_utf8_lossy(sweep).lines().count(), 1 + 2 * 2 * 3);
    assert!(files.iter().any(|f| f.0 == "fig6_c_aqwd_snr10_contour.pgm"));
    assert!(files.iter().any(|f| f.0 == "fig1_gaussian_d_aqaf_clean.csv"));
}
