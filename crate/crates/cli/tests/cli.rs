use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/corpus").join(name)
}

fn shotik(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shotik")).args(args).output().expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn build(dir: &TempDir) -> String {
    let cb = dir.path().join("cb.txt").to_string_lossy().into_owned();
    let a = corpus("train_a.txt");
    let b = corpus("train_b.txt");
    let out = shotik(&["build", a.to_str().unwrap(), b.to_str().unwrap(), "-o", &cb]);
    assert!(out.status.success(), "{}", stderr(&out));
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.contains("level 4:"));
    assert!(summary.contains("average length:"));
    assert!(summary.contains("entropy:"));
    cb
}

#[test]
fn build_compress_decompress_round_trip() {
    let dir = TempDir::new().unwrap();
    let cb = build(&dir);
    let msg = dir.path().join("m.sk");
    let text = "আমি ভাত খাই। hello ☃";
    let out = shotik(&["compress", "-c", &cb, "--text", text, "-o", msg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stderr(&out).contains("bits/char"));

    let out = shotik(&["decompress", "-c", &cb, msg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), text);
}

#[test]
fn compress_file_to_stdout() {
    let dir = TempDir::new().unwrap();
    let cb = build(&dir);
    let input = corpus("held_out/sample_1.txt");
    let out = shotik(&["compress", "-c", &cb, input.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(&out.stdout[..2], b"SK");
    let msg = dir.path().join("m.sk");
    fs::write(&msg, &out.stdout).unwrap();
    let back = shotik(&["decompress", "-c", &cb, msg.to_str().unwrap()]);
    assert_eq!(back.stdout, fs::read(input).unwrap());
}

#[test]
fn decompress_reports_codec_errors() {
    let dir = TempDir::new().unwrap();
    let cb = build(&dir);
    let msg = dir.path().join("m.sk");
    let out = shotik(&["compress", "-c", &cb, "--text", "আমি", "-o", msg.to_str().unwrap()]);
    assert!(out.status.success());

    let mut bytes = fs::read(&msg).unwrap();
    bytes[5] ^= 1;
    fs::write(&msg, &bytes).unwrap();
    let out = shotik(&["decompress", "-c", &cb, msg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("wrong codebook"));

    fs::write(&msg, b"XX").unwrap();
    let out = shotik(&["decompress", "-c", &cb, msg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_corpus_fails_with_data_error() {
    let dir = TempDir::new().unwrap();
    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "").unwrap();
    let cb = dir.path().join("cb.txt");
    let out = shotik(&["build", empty.to_str().unwrap(), "-o", cb.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("empty alphabet"));
}

#[test]
fn invalid_utf8_is_a_data_error() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, [0xff, 0xfe]).unwrap();
    let cb = dir.path().join("cb.txt");
    let out = shotik(&["build", bad.to_str().unwrap(), "-o", cb.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("invalid UTF-8"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(shotik(&[]).status.code(), Some(1));
    assert_eq!(shotik(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(shotik(&["hyphenate", "x", "--variant", "zz"]).status.code(), Some(1));
    assert_eq!(shotik(&["--help"]).status.code(), Some(0));
}

#[test]
fn hyphenate_prints_syllables() {
    let expected = [("ul", "priesth-ood"), ("ur", "prie-sthood"), ("uml", "priest-hood"), ("umr", "pries-thood")];
    for (v, want) in expected {
        let out = shotik(&["hyphenate", "priesthood", "--variant", v]);
        assert!(out.status.success());
        assert_eq!(String::from_utf8(out.stdout).unwrap().trim_end(), want);
    }
}

#[test]
fn bench_table_and_csv_are_seeded() {
    let dir = TempDir::new().unwrap();
    let cb = build(&dir);
    let s1 = corpus("held_out/sample_1.txt");
    let s2 = corpus("held_out/sample_2.txt");
    let run = |seed: &str| {
        shotik(&[
            "bench", "-c", &cb, s1.to_str().unwrap(), s2.to_str().unwrap(),
            "--block-chars", "200", "--samples", "4", "--seed", seed, "--csv",
        ])
    };
    let a = run("3");
    let b = run("3");
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let csv = String::from_utf8(a.stdout).unwrap();
    assert!(csv.lines().next().unwrap().contains("bits_per_char"));
    assert!(csv.contains("sample_1"));

    let out = shotik(&["bench", "-c", &cb, s1.to_str().unwrap()]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("Bits/char"));
}

#[test]
fn bench_refuses_training_files_unless_allowed() {
    let dir = TempDir::new().unwrap();
    let cb = build(&dir);
    let train = corpus("train_a.txt");
    let t = train.to_str().unwrap();
    let out = shotik(&["bench", "-c", &cb, t, "--corpus", t]);
    assert_eq!(out.status.code(), Some(1));
    let out = shotik(&["bench", "-c", &cb, t, "--corpus", t, "--allow-overlap"]);
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn bench_shows_competitor_columns() {
    let dir = TempDir::new().unwrap();
    let cb = build(&dir);
    let comp = dir.path().join("comp.csv");
    fs::write(&comp, "sample_1,gzip,6.10\n").unwrap();
    let s1 = corpus("held_out/sample_1.txt");
    let out = shotik(&["bench", "-c", &cb, s1.to_str().unwrap(), "--competitors", comp.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("gzip"));
    assert!(table.contains("6.10"));
}

#[test]
fn stats_reports_usage() {
    let dir = TempDir::new().unwrap();
    let cb = build(&dir);
    let s1 = corpus("held_out/sample_1.txt");
    let out = shotik(&["stats", "-c", &cb, s1.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("escapes"));
    assert!(text.contains("bits/char"));
}

#[test]
fn corrupt_codebook_is_a_data_error() {
    let dir = TempDir::new().unwrap();
    let cb = dir.path().join("cb.txt");
    fs::write(&cb, "NOTACODEBOOK\n").unwrap();
    let out = shotik(&["stats", "-c", cb.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
