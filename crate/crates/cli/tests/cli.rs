//! End-to-end runs of the `qcap` binary.

use std::path::PathBuf;
use std::process::Command;

use qcap::entropy::binary_entropy;
use qcap::info::{accessible_information_for_elements, holevo_chi};
use qcap::linalg::{c, outer, CMatrix, CVector};
use qcap::quantum::{Ensemble, PureState};
use qcap_cli::qch::parse_channel;

fn channel(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "channels", &format!("{name}.qch")].iter().collect();
    p.display().to_string()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn qcap(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_qcap")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    let prefix = format!("{key}: ");
    text.lines()
        .find_map(|l| l.strip_prefix(prefix.as_str()))
        .unwrap_or_else(|| panic!("no field {key} in\n{text}"))
}

fn float(text: &str, key: &str) -> f64 {
    field(text, key).parse().unwrap()
}

fn parse_vector(s: &str) -> CVector {
    let entries: Vec<_> = s
        .split_whitespace()
        .map(|pair| {
            let (re, im) = pair.split_once(',').unwrap();
            c(re.parse().unwrap(), im.parse().unwrap())
        })
        .collect();
    CVector::from_vec(entries)
}

/// `key[i]: weight ; re,im re,im ...` lines.
fn weighted_vectors(text: &str, key: &str) -> Vec<(f64, CVector)> {
    let n: usize = field(text, &format!("{key}_size")).parse().unwrap();
    (0..n)
        .map(|i| {
            let (w, v) = field(text, &format!("{key}[{i}]")).split_once(" ; ").unwrap();
            (w.parse().unwrap(), parse_vector(v))
        })
        .collect()
}

#[test]
fn every_shipped_channel_parses() {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "channels"].iter().collect();
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "qch") {
            let f = parse_channel(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert!(!f.name.is_empty());
            count += 1;
        }
    }
    assert!(count >= 10);
}

#[test]
fn trine_c11_report_round_trips() {
    let r = qcap(&["c11", "--channel", &channel("trine"), "--restarts", "8", "--seed", "7"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let value = float(&r.stdout, "value");
    assert!((value - 0.6454).abs() < 5e-4, "{value}");
    assert!(float(&r.stdout, "holevo_bound") >= value - 1e-9);
    assert!(float(&r.stdout, "measurement_dual_bound") >= value - 1e-6);
    assert_eq!(field(&r.stdout, "status"), "converged");
    assert_eq!(field(&r.stdout, "restarts"), "8");

    // Re-evaluate the dumped ensemble and measurement.
    let ens: Vec<(f64, PureState)> = weighted_vectors(&r.stdout, "ensemble")
        .into_iter()
        .map(|(p, v)| (p, PureState::normalized(v).unwrap()))
        .collect();
    let ens = Ensemble::normalized(ens).unwrap().to_mixed();
    let elements: Vec<CMatrix> = weighted_vectors(&r.stdout, "povm").into_iter().map(|(w, v)| outer(&v) * c(w, 0.0)).collect();
    let recomputed = accessible_information_for_elements(&ens, &elements).unwrap();
    assert!((recomputed - value).abs() < 1e-7, "{recomputed} vs {value}");
}

#[test]
fn c1inf_ensemble_dump_reproduces_value() {
    let file = channel("amplitude-damping");
    let r = qcap(&["c1inf", "--channel", &file]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let value = float(&r.stdout, "value");
    let items = weighted_vectors(&r.stdout, "ensemble")
        .into_iter()
        .map(|(p, v)| (p, PureState::normalized(v).unwrap()))
        .collect();
    let ch = parse_channel(file.as_ref()).unwrap().channel;
    let chi = holevo_chi(&Ensemble::normalized(items).unwrap().through(&ch).unwrap());
    assert!((chi - value).abs() < 1e-7, "{chi} vs {value}");
}

#[test]
fn entanglement_assisted_identity_is_two() {
    let r = qcap(&["cea", "--channel", &channel("identity")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!((float(&r.stdout, "value") - 2.0).abs() < 1e-6);
    assert!(r.stdout.contains("wall_time_s: "));
}

#[test]
fn report_headers() {
    let r = qcap(&["chi", "--channel", &channel("trine"), "--seed", "3"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(field(&r.stdout, "command"), "chi");
    assert_eq!(field(&r.stdout, "version"), env!("CARGO_PKG_VERSION"));
    assert_eq!(field(&r.stdout, "dim_in"), "2");
    assert_eq!(field(&r.stdout, "seed"), "3");
    assert!((float(&r.stdout, "value") - 1.0).abs() < 1e-9);

    let r = qcap(&["chi", "--channel", &channel("trine"), "--probs", "1,0,0"]);
    assert!(float(&r.stdout, "value").abs() < 1e-9);
}

#[test]
fn fig1_sweep_table() {
    let dir = std::env::temp_dir().join(format!("qcap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("fig1.csv");
    let r = qcap(&["sweep", "--curve", "fig1", "--steps", "64", "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let text = std::fs::read_to_string(&out).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["theta", "i_acc", "h_vn"]);
    let rows: Vec<Vec<f64>> = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 64);
    for row in &rows {
        assert!(row[1] <= row[2] + 1e-9, "{row:?}");
    }
    let last = &rows[63];
    assert!((last[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-11);
    assert!((last[1] - 1.0).abs() < 1e-6 && (last[2] - 1.0).abs() < 1e-9);
    // theta = pi/3 is grid point 42.
    let third = &rows[42];
    assert!((third[0] - std::f64::consts::FRAC_PI_3).abs() < 1e-11);
    assert!((third[1] - (1.0 - binary_entropy(0.5 - 3f64.sqrt() / 4.0))).abs() < 1e-6);
    assert!((third[2] - binary_entropy(0.25)).abs() < 1e-9);

    let r = qcap(&["sweep", "--curve", "fig1", "--steps", "0", "--format", "csv"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, "theta,i_acc,h_vn\n");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn csv_output_is_deterministic() {
    let file = channel("trine");
    let run = || qcap(&["c11", "--channel", &file, "--restarts", "3", "--seed", "5", "--format", "csv"]);
    let (a, b) = (run(), run());
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.starts_with("key,value\ncommand,c11\n"));
    assert!(!a.stdout.contains("wall_time_s"));
}

#[test]
fn round_limit_exits_with_two() {
    let r = qcap(&["c1inf", "--channel", &channel("amplitude-damping"), "--max-rounds", "1"]);
    assert_eq!(r.code, 2, "{}", r.stdout);
    assert_eq!(field(&r.stdout, "status"), "round-limit");
}

#[test]
fn errors_exit_with_one() {
    let r = qcap(&["c1inf", "--channel", "/nonexistent/x.qch"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("/nonexistent/x.qch"), "{}", r.stderr);

    let r = qcap(&["c1inf", "--no-such-flag"]);
    assert_eq!(r.code, 1);

    let r = qcap(&["c1inf"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("--channel"), "{}", r.stderr);

    // Channels without signals cannot answer signal questions.
    let r = qcap(&["chi", "--channel", &channel("identity")]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("no signal set"), "{}", r.stderr);

    let r = qcap(&["chi", "--channel", &channel("trine"), "--probs", "0.5,0.5"]);
    assert_eq!(r.code, 1);

    let dir = std::env::temp_dir().join(format!("qcap-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.qch");
    std::fs::write(&bad, r#"{"name": "bad", "dim_in": 2, "dim_out": 2, "kraus": [[[1,0],[0,0]],[[0,0],[0.5,0]]]}"#).unwrap();
    let r = qcap(&["c1inf", "--channel", bad.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("trace preserving"), "{}", r.stderr);
    std::fs::write(&bad, "{\"name\": ").unwrap();
    let r = qcap(&["c1inf", "--channel", bad.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("line 1"), "{}", r.stderr);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(qcap(&["--help"]).code, 0);
    let v = qcap(&["--version"]);
    assert_eq!(v.code, 0);
    assert!(v.stdout.contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn classical_and_oracle_commands() {
    let r = qcap(&["arimoto-blahut", "--channel", &channel("bsc-embed")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let exact = 1.0 - binary_entropy(0.11);
    assert!((float(&r.stdout, "value") - exact).abs() < 1e-7);

    let r = qcap(&["c1inf", "--channel", &channel("bsc-embed")]);
    assert!((float(&r.stdout, "value") - exact).abs() < 1e-5);

    let r = qcap(&["oracle", "--channel", &channel("depolarizing"), "--objective", "qmi", "--step", "0.1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let w: [f64; 4] = [0.7, 0.1, 0.1, 0.1];
    let exact = 2.0 + w.iter().map(|x| x * x.log2()).sum::<f64>();
    assert!((float(&r.stdout, "value") - exact).abs() < 1e-9);

    let r = qcap(&["limited-ea", "--channel", &channel("depolarizing"), "--B", "0"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(field(&r.stdout, "experimental").contains("conjectured"));
    assert!((float(&r.stdout, "value") - 0.2780719051).abs() < 2e-3);

    let r = qcap(&["coherent", "--channel", &channel("identity")]);
    assert!((float(&r.stdout, "value") - 1.0).abs() < 1e-6);
}
