use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

fn qpp() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qpp"))
}

fn run(args: &[&str]) -> Output {
    qpp().args(args).output().expect("spawn qpp")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn pseudo_random(len: usize, seed: u64) -> Vec<u8> {
    let mut state = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) | 1;
    (0..len)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 24) as u8
        })
        .collect()
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Self {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn file(&self, name: &str, bytes: &[u8]) -> PathBuf {
        let p = self.path(name);
        fs::write(&p, bytes).unwrap();
        p
    }

    fn s(p: &Path) -> &str {
        p.to_str().unwrap()
    }

    fn genpad(&self, key: &Path, out: &str, extra: &[&str]) -> Output {
        let out = self.path(out);
        let mut args = vec!["genpad", "--key", Self::s(key), "-o", Self::s(&out)];
        args.extend_from_slice(extra);
        run(&args)
    }
}

#[test]
fn genpad_default_shape() {
    let ws = Workspace::new();
    let key = ws.file("key.bin", &pseudo_random(4096, 1));
    let out = ws.genpad(&key, "pad.qpp", &["--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(fs::metadata(ws.path("pad.qpp")).unwrap().len(), 8204);
    let summary: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(summary["command"], "genpad");
    assert_eq!(summary["bits_consumed"], 32768);
    assert_eq!(summary["n"], 8);
    assert_eq!(summary["tables"], 16);
    assert_eq!(summary["generator"], "paper");
    assert_eq!(summary["otp_entropy_bits"], 128);
}

#[test]
fn genpad_short_key_fails() {
    let ws = Workspace::new();
    let key = ws.file("key.bin", &[7u8; 10]);
    let out = ws.genpad(&key, "pad.qpp", &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("required 32768 bits, available 80"));
    assert!(!ws.path("pad.qpp").exists());
}

#[test]
fn genpad_is_deterministic() {
    let ws = Workspace::new();
    let key = ws.file("key.bin", &pseudo_random(8192, 2));
    for g in ["paper", "unbiased", "rc4"] {
        let a = ws.genpad(&key, "a.qpp", &["-g", g]);
        let b = ws.genpad(&key, "b.qpp", &["-g", g]);
        assert!(a.status.success() && b.status.success(), "{}", stderr(&a));
        assert_eq!(
            fs::read(ws.path("a.qpp")).unwrap(),
            fs::read(ws.path("b.qpp")).unwrap(),
            "generator {g}"
        );
    }
}

#[test]
fn genpad_reads_key_from_stdin() {
    let ws = Workspace::new();
    let key = pseudo_random(24, 3);
    let file_key = ws.file("key.bin", &key);
    let from_file = ws.genpad(&file_key, "file.qpp", &["-n", "3", "-m", "8"]);
    assert!(from_file.status.success());

    let out_path = ws.path("stdin.qpp");
    let mut child = qpp()
        .args(["genpad", "-k", "-", "-n", "3", "-m", "8", "-o"])
        .arg(&out_path)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&key).unwrap();
    assert!(child.wait_with_output().unwrap().status.success());
    assert_eq!(
        fs::read(ws.path("file.qpp")).unwrap(),
        fs::read(out_path).unwrap()
    );
}

#[test]
fn unsafe_dev_key_is_labelled_and_seeded() {
    let ws = Workspace::new();
    let a = ws.path("a.qpp");
    let b = ws.path("b.qpp");
    for p in [&a, &b] {
        let out = run(&[
            "genpad",
            "--unsafe-dev-key",
            "42",
            "-g",
            "unbiased",
            "-o",
            Workspace::s(p),
        ]);
        assert!(out.status.success());
        assert!(stderr(&out).contains("NOT secret"));
    }
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn genpad_requires_a_key_source() {
    let ws = Workspace::new();
    let out = run(&["genpad", "-o", Workspace::s(&ws.path("p.qpp"))]);
    assert_eq!(out.status.code(), Some(2));
}

fn pad_for(ws: &Workspace, name: &str, seed: u64, n: &str, m: &str) -> PathBuf {
    let key = ws.file(&format!("{name}.key"), &pseudo_random(1 << 20, seed));
    let out = ws.genpad(&key, name, &["-n", n, "-m", m]);
    assert!(out.status.success(), "{}", stderr(&out));
    ws.path(name)
}

fn encrypt(pad: &Path, input: &Path, output: &Path) -> Output {
    run(&[
        "encrypt",
        "--pad",
        Workspace::s(pad),
        "-i",
        Workspace::s(input),
        "-o",
        Workspace::s(output),
    ])
}

fn decrypt(pad: &Path, input: &Path, output: &Path) -> Output {
    run(&[
        "decrypt",
        "--pad",
        Workspace::s(pad),
        "-i",
        Workspace::s(input),
        "-o",
        Workspace::s(output),
    ])
}

#[test]
fn one_mebibyte_round_trip() {
    let ws = Workspace::new();
    let pad = pad_for(&ws, "pad.qpp", 10, "8", "16");
    let plain = pseudo_random(1 << 20, 11);
    let input = ws.file("plain.bin", &plain);
    let ct = ws.path("ct.qppc");
    let back = ws.path("back.bin");
    assert!(encrypt(&pad, &input, &ct).status.success());
    let container = fs::read(&ct).unwrap();
    assert_eq!(&container[..4], b"QPPC");
    assert_eq!(container.len(), 14 + plain.len());
    assert_ne!(&container[14..], plain.as_slice());
    assert!(decrypt(&pad, &ct, &back).status.success());
    assert_eq!(fs::read(back).unwrap(), plain);
}

#[test]
fn odd_word_sizes_round_trip() {
    let ws = Workspace::new();
    for (n, m) in [("3", "5"), ("5", "2"), ("13", "3")] {
        let pad = pad_for(&ws, &format!("pad{n}.qpp"), 20, n, m);
        let plain = pseudo_random(1001, 21);
        let input = ws.file("in.bin", &plain);
        let ct = ws.path("ct");
        let back = ws.path("back");
        assert!(encrypt(&pad, &input, &ct).status.success());
        assert!(decrypt(&pad, &ct, &back).status.success());
        assert_eq!(fs::read(&back).unwrap(), plain, "n = {n}");
    }
}

#[test]
fn stdin_to_stdout_pipeline() {
    let ws = Workspace::new();
    let pad = pad_for(&ws, "pad.qpp", 30, "8", "16");
    let plain = pseudo_random(5000, 31);
    let mut child = qpp()
        .args(["encrypt", "--pad", Workspace::s(&pad)])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&plain).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(&out.stdout[..4], b"QPPC");
    let ct = ws.file("ct", &out.stdout);
    let back = ws.path("back");
    assert!(decrypt(&pad, &ct, &back).status.success());
    assert_eq!(fs::read(back).unwrap(), plain);
}

#[test]
fn empty_file_round_trip() {
    let ws = Workspace::new();
    let pad = pad_for(&ws, "pad.qpp", 40, "8", "16");
    let input = ws.file("empty", &[]);
    let ct = ws.path("ct");
    let back = ws.path("back");
    assert!(encrypt(&pad, &input, &ct).status.success());
    assert_eq!(fs::read(&ct).unwrap().len(), 14);
    assert!(decrypt(&pad, &ct, &back).status.success());
    assert!(fs::read(back).unwrap().is_empty());
}

#[test]
fn wrong_pad_gives_garbage_not_error() {
    let ws = Workspace::new();
    let pad_a = pad_for(&ws, "a.qpp", 50, "8", "16");
    let pad_b = pad_for(&ws, "b.qpp", 51, "8", "16");
    let plain = pseudo_random(4096, 52);
    let input = ws.file("in", &plain);
    let ct = ws.path("ct");
    let back = ws.path("back");
    assert!(encrypt(&pad_a, &input, &ct).status.success());
    assert!(decrypt(&pad_b, &ct, &back).status.success());
    let garbage = fs::read(back).unwrap();
    assert_eq!(garbage.len(), plain.len());
    assert_ne!(garbage, plain);
}

#[test]
fn error_exit_codes() {
    let ws = Workspace::new();
    let pad8 = pad_for(&ws, "p8.qpp", 60, "8", "16");
    let pad3 = pad_for(&ws, "p3.qpp", 61, "3", "2");
    let input = ws.file("in", b"some plaintext");
    let ct = ws.path("ct");
    assert!(encrypt(&pad8, &input, &ct).status.success());

    // Word-size mismatch between pad and container.
    let out = decrypt(&pad3, &ct, &ws.path("x"));
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));

    // Corrupt pad file.
    let mut pad_bytes = fs::read(&pad8).unwrap();
    pad_bytes[12] = pad_bytes[14];
    let bad_pad = ws.file("bad.qpp", &pad_bytes);
    let out = encrypt(&bad_pad, &input, &ws.path("y"));
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("table 0"));

    // Corrupt container.
    let mut ct_bytes = fs::read(&ct).unwrap();
    ct_bytes.truncate(ct_bytes.len() - 1);
    let bad_ct = ws.file("bad.qppc", &ct_bytes);
    let out = decrypt(&pad8, &bad_ct, &ws.path("z"));
    assert_eq!(out.status.code(), Some(6));
    let out = decrypt(&pad8, &input, &ws.path("z"));
    assert_eq!(out.status.code(), Some(6));

    // Missing input.
    let out = encrypt(&pad8, &ws.path("missing"), &ws.path("w"));
    assert_eq!(out.status.code(), Some(5));
    let out = encrypt(&ws.path("missing.qpp"), &input, &ws.path("w"));
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn verify_suites() {
    let out = run(&["verify", "degeneracy", "-n", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("5040 for all 64 (m,c) pairs; group order 40320"));

    let out = run(&["verify", "xor", "-n", "8"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("256 involutions, all pairs commute, closed"));

    let out = run(&["verify", "commute", "-n", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("120/576"));

    let out = run(&["verify", "commute", "-n", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("4/4"));

    let out = run(&["verify", "uniform", "--seed", "7"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("PASS"));

    let out = run(&["verify", "uniform", "--generator", "paper", "--seed", "7"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("not asserted"));

    let out = run(&["verify", "degeneracy", "-n", "4"]);
    assert_eq!(out.status.code(), Some(7));
    let out = run(&["verify", "uniform", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(7));
}

#[test]
fn verify_all_json_records_parse() {
    let out = run(&["verify", "all", "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let records: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.len(), 6);
    assert!(records.iter().all(|r| r["command"] == "verify"));
    assert!(records.iter().all(|r| r["passed"] == true));
    let last = records.last().unwrap();
    assert_eq!(last["suite"], "all");
    assert_eq!(last["group_order"]["exact"], 40320);
    assert_eq!(last["degeneracy_per_pair"]["exact"], 5040);
}

#[test]
fn verify_is_deterministic_for_a_seed() {
    let a = run(&["verify", "uniform", "--seed", "99", "--format", "json"]);
    let b = run(&["verify", "uniform", "--seed", "99", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let fresh = run(&["verify", "uniform", "--fresh-seed", "--format", "json"]);
    let rec: serde_json::Value = serde_json::from_slice(&fresh.stdout).unwrap();
    assert!(rec["seed"].is_u64());
}

#[test]
fn demo_reproduces_worked_examples() {
    let out = run(&["demo"]);
    assert!(out.status.success());
    let text = stdout(&out);
    // First rows of the XOR-3 and worked-table matrices.
    assert!(text.contains("0 0 0 1 0 0 0 0    |0> -> |3>"));
    assert!(text.contains("0 1 0 0 0 0 0 0    |0> -> |1>"));
    assert!(text.contains("0 0 0 0 0 1 0 0    |0> -> |5>"));
    for statement in [
        "2 → 1 under X̂_3",
        "1 → 2 under X̂_3",
        "3 → 5 under P_k",
        "5 → 3 under P_k^T",
    ] {
        assert!(text.contains(&format!("[ok  ] {statement}")), "{statement}");
    }
    assert!(text.contains("log10(2^8!) ≈ 506.93"));
}

#[test]
fn json_output_for_every_command() {
    let ws = Workspace::new();
    let key = ws.file("key", &pseudo_random(4096, 70));
    let pad = ws.path("pad.qpp");
    let input = ws.file("in", b"hello");
    let ct = ws.path("ct");
    let back = ws.path("back");
    let outputs = [
        ws.genpad(&key, "pad.qpp", &["--format", "json"]),
        run(&[
            "encrypt", "--format", "json", "--pad", Workspace::s(&pad), "-i",
            Workspace::s(&input), "-o", Workspace::s(&ct),
        ]),
        run(&[
            "decrypt", "--format", "json", "--pad", Workspace::s(&pad), "-i",
            Workspace::s(&ct), "-o", Workspace::s(&back),
        ]),
        run(&["entropy", "--format", "json", "-n", "3", "-m", "2"]),
        run(&["demo", "--format", "json"]),
    ];
    for (out, command) in outputs
        .iter()
        .zip(["genpad", "encrypt", "decrypt", "entropy", "demo"])
    {
        assert!(out.status.success(), "{command}: {}", stderr(out));
        let rec: serde_json::Value = serde_json::from_slice(&out.stdout)
            .unwrap_or_else(|e| panic!("{command}: {e}"));
        assert_eq!(rec["command"], command);
    }
    assert_eq!(fs::read(back).unwrap(), b"hello");
}

#[test]
fn entropy_defaults() {
    let out = run(&["entropy", "--format", "json"]);
    let rec: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rec["n"], 8);
    assert_eq!(rec["tables"], 16);
    assert_eq!(rec["otp_bits"], 128);
    let qpp = rec["qpp_bits"].as_f64().unwrap();
    assert!((qpp - 26943.94).abs() < 1.0);
}
