use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn johnson_fft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_johnson-fft"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn read_csv(path: &Path) -> Vec<(String, f64)> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| {
            let (k, v) = l.rsplit_once(',').unwrap();
            (k.to_string(), v.parse().unwrap())
        })
        .collect()
}

fn weight_column(text: &str) -> Vec<f64> {
    text.lines()
        .filter_map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            (f.len() == 4 && f[0].parse::<usize>().is_ok()).then(|| f[2].parse().unwrap())
        })
        .collect()
}

fn share_column(text: &str) -> Vec<f64> {
    text.lines()
        .filter_map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            (f.len() == 4 && f[0].parse::<usize>().is_ok()).then(|| f[3].parse().unwrap())
        })
        .collect()
}

#[test]
fn plan_four_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("j42.plan");
    let o = johnson_fft(&["plan", "--n", "4", "--k", "2", "--out", p(&path)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("dim 6, 3 factors"));
    let plan = johnson_fft::load_plan(&path).unwrap();
    assert_eq!((plan.dim(), plan.factors().len()), (6, 3));
}

#[test]
fn plan_trivial_and_medium() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("j50.plan");
    let o = johnson_fft(&["plan", "--n", "5", "--k", "0", "--out", p(&path)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("dim 1"));

    let path = dir.path().join("j126.plan");
    let o = johnson_fft(&["plan", "--n", "12", "--k", "6", "--out", p(&path)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("dim 924, 11 factors"));
}

#[test]
fn plan_unwritable_path() {
    let o = johnson_fft(&["plan", "--n", "4", "--k", "2", "--out", "/nonexistent/dir/x.plan"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("error"));
}

#[test]
fn budget_exit_code() {
    let o = johnson_fft(&["plan", "--n", "40", "--k", "20", "--out", "/tmp/never.plan"]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn forward_of_all_ones() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("ones.csv");
    let words = ["1122", "1212", "1221", "2112", "2121", "2211"];
    fs::write(&input, words.iter().map(|w| format!("{w},1\n")).collect::<String>()).unwrap();
    let out = dir.path().join("coeffs.csv");
    let o = johnson_fft(&["transform", "--n", "4", "--k", "2", "--in", p(&input), "--out", p(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("bound 36"));
    let coeffs = read_csv(&out);
    assert_eq!(coeffs.len(), 6);
    for (t, v) in coeffs {
        if t == "1234/" {
            assert!((v - 6f64.sqrt()).abs() < 1e-12);
        } else {
            assert!(v.abs() < 1e-12, "{t} {v}");
        }
    }
}

#[test]
fn inverse_after_forward_reproduces_file() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("j73.plan");
    assert!(johnson_fft(&["plan", "--n", "7", "--k", "3", "--out", p(&plan)]).status.success());
    let words = johnson_fft::enumerate_words(7, 3).unwrap();
    let mut x: u64 = 99;
    let mut text = String::new();
    for w in &words {
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        text.push_str(&format!("{w},{}\n", (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5));
    }
    let input = dir.path().join("f.csv");
    fs::write(&input, &text).unwrap();
    let mid = dir.path().join("c.json");
    let back = dir.path().join("g.csv");
    let o = johnson_fft(&["transform", "--plan", p(&plan), "--in", p(&input), "--out", p(&mid)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = johnson_fft(&[
        "transform", "--plan", p(&plan), "--direction", "inverse", "--in", p(&mid), "--out", p(&back),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let before = read_csv(&input);
    let after = read_csv(&back);
    assert_eq!(before.len(), after.len());
    for ((w1, a), (w2, b)) in before.iter().zip(&after) {
        assert_eq!(w1, w2);
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn malformed_word_names_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.csv");
    fs::write(&input, "1122,1\n1212,2\n1123,3\n").unwrap();
    let o = johnson_fft(&["transform", "--n", "4", "--k", "2", "--in", p(&input)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn plan_header_must_match_request() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("j42.plan");
    assert!(johnson_fft(&["plan", "--n", "4", "--k", "2", "--out", p(&plan)]).status.success());
    let o = johnson_fft(&["verify", "--plan", p(&plan), "--n", "5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn weights_of_constant_and_delta() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c.json");
    let values: Vec<String> = johnson_fft::enumerate_words(6, 3)
        .unwrap()
        .iter()
        .map(|w| format!("\"{w}\": 2.0"))
        .collect();
    fs::write(&input, format!("{{\"n\": 6, \"k\": 3, \"values\": {{{}}}}}", values.join(","))).unwrap();
    let o = johnson_fft(&["weights", "--n", "6", "--k", "3", "--in", p(&input)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let shares = share_column(&stdout(&o));
    assert_eq!(shares, vec![1.0, 0.0, 0.0, 0.0]);
    assert!(stdout(&o).contains("(within)"));

    let delta = dir.path().join("d.csv");
    fs::write(&delta, "1122,1\n").unwrap();
    let o = johnson_fft(&["weights", "--n", "4", "--k", "2", "--in", p(&delta)]);
    let shares = share_column(&stdout(&o));
    assert_eq!(shares, vec![0.1667, 0.5, 0.3333]);
}

#[test]
fn band_pass_then_weights() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("f.csv");
    fs::write(&input, "1122,3\n1212,-1\n2211,0.5\n").unwrap();
    let out = dir.path().join("g.csv");
    let o = johnson_fft(&[
        "project", "--n", "4", "--k", "2", "--components", "0,1", "--in", p(&input), "--out", p(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("project:"));
    let o = johnson_fft(&["weights", "--n", "4", "--k", "2", "--in", p(&out)]);
    let w = weight_column(&stdout(&o));
    assert!(w[2].abs() < 1e-10, "{w:?}");

    let o = johnson_fft(&["project", "--n", "4", "--k", "2", "--components", "3", "--in", p(&input)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_six_three() {
    let o = johnson_fft(&["verify", "--n", "6", "--k", "3"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("result: PASS"));
    assert_eq!(text.lines().filter(|l| l.ends_with("PASS")).count(), 8);
}

#[test]
fn verify_corrupted_plan_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("j63.plan");
    assert!(johnson_fft(&["plan", "--n", "6", "--k", "3", "--out", p(&path)]).status.success());
    let text = fs::read_to_string(&path).unwrap();
    let line = text.lines().find(|l| l.starts_with("2 ")).unwrap().to_string();
    let mut fields: Vec<&str> = line.split_whitespace().collect();
    fields[5] = "5.0e-1";
    fs::write(&path, text.replacen(&line, &fields.join(" "), 1)).unwrap();
    let o = johnson_fft(&["verify", "--plan", p(&path)]);
    assert_eq!(o.status.code(), Some(3));
    let report = stdout(&o);
    let orth = report.lines().find(|l| l.starts_with("factor_orthogonality")).unwrap();
    assert!(orth.ends_with("FAIL"), "{report}");
}

#[test]
fn bench_sixteen_eight() {
    let o = johnson_fft(&["bench", "--n", "16", "--k", "8", "--reps", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("forward:")).unwrap();
    let ops: u64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!(ops <= 386_100);
    assert!(line.contains("bound 386100 (within)"));
    assert!(!text.contains("EXCEEDS"));
}
