use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tsc_core::corpus::write_synthetic_corpus;
use tsc_core::{decode_any, decode_wire, Payload};

fn tsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// `key=value` fields of the compress summary line.
fn field(line: &str, key: &str) -> String {
    line.split_whitespace()
        .find_map(|kv| kv.strip_prefix(key)?.strip_prefix('='))
        .unwrap_or_else(|| panic!("no {key} in {line:?}"))
        .to_string()
}

/// Integer-valued samples so f32 storage is lossless.
fn write_signal(dir: &Path, n: usize) -> PathBuf {
    let p = dir.join("signal.csv");
    let body: String = (0..n)
        .map(|i| {
            let t = i as f64;
            let v = (300.0 * (t / 37.0).sin() + 120.0 * (t / 5.3).cos() + (i * 7919 % 13) as f64).round();
            format!("{v}\n")
        })
        .collect();
    std::fs::write(&p, format!("value\n{body}")).unwrap();
    p
}

#[test]
fn byte_budget_is_never_exceeded() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_signal(dir.path(), 4000);
    let out = dir.path().join("a.tsc");
    for budget in ["64", "128", "340", "1024"] {
        let o = tsc(&["compress", "--method", "tsc", "--bytes", budget, path(&input), path(&out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let size = std::fs::metadata(&out).unwrap().len();
        assert!(size <= budget.parse().unwrap());
        assert_eq!(field(&stdout(&o), "bytes"), size.to_string());
    }
}

#[test]
fn fraction_keeps_the_matching_point_count() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_signal(dir.path(), 4000);
    let out = dir.path().join("a.tsc");
    let o = tsc(&["compress", "--fraction", "0.9", path(&input), path(&out)]);
    assert!(o.status.success());
    let kept: usize = field(&stdout(&o), "kept").parse().unwrap();
    assert!((399..=401).contains(&kept), "{kept}");
    let c = decode_wire(&std::fs::read(&out).unwrap(), 1.0).unwrap();
    assert_eq!(c.len(), kept);
}

#[test]
fn dft_coeffs_sets_bin_count() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_signal(dir.path(), 1000);
    let out = dir.path().join("a.tsc");
    let o = tsc(&["compress", "--method", "dft", "--coeffs", "5", path(&input), path(&out)]);
    assert!(o.status.success());
    match decode_any(&std::fs::read(&out).unwrap(), 1.0).unwrap() {
        Payload::Spectrum(d) => assert_eq!(d.len(), 5),
        other => panic!("expected a spectrum, got {other:?}"),
    }
}

#[test]
fn baselines_accept_byte_budgets() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_signal(dir.path(), 2000);
    let out = dir.path().join("a.tsc");
    for method in ["dft", "paa", "random"] {
        let o = tsc(&["compress", "--method", method, "--bytes", "500", path(&input), path(&out)]);
        assert!(o.status.success(), "{method}");
        assert!(std::fs::metadata(&out).unwrap().len() <= 500);
        assert_eq!(field(&stdout(&o), "method"), method);
    }
}

#[test]
fn full_budget_round_trip_reproduces_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_signal(dir.path(), 500);
    let wire = dir.path().join("a.tsc");
    let back = dir.path().join("back.csv");
    assert!(tsc(&["compress", "--points", "500", path(&input), path(&wire)]).status.success());
    assert!(tsc(&["reconstruct", path(&wire), path(&back)]).status.success());
    let original = std::fs::read_to_string(&input).unwrap();
    let original: Vec<f64> = original.lines().skip(1).map(|l| l.parse().unwrap()).collect();
    let rebuilt: Vec<f64> = std::fs::read_to_string(&back)
        .unwrap()
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    assert_eq!(original, rebuilt);
}

#[test]
fn tsc_reconstruction_is_piecewise_linear() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_signal(dir.path(), 800);
    let wire = dir.path().join("a.tsc");
    let back = dir.path().join("back.csv");
    assert!(tsc(&["compress", "--points", "20", path(&input), path(&wire)]).status.success());
    assert!(tsc(&["reconstruct", path(&wire), path(&back)]).status.success());
    let c = decode_wire(&std::fs::read(&wire).unwrap(), 1.0).unwrap();
    let y: Vec<f64> = std::fs::read_to_string(&back)
        .unwrap()
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    assert_eq!(y.len(), 800);
    for w in c.points().windows(2) {
        let (a, b) = (w[0], w[1]);
        for t in a.index..=b.index {
            let expect = a.value + (b.value - a.value) * (t - a.index) as f64 / (b.index - a.index) as f64;
            assert!((y[t] - expect).abs() < 1e-9 * (1.0 + expect.abs()));
        }
    }
}

#[test]
fn wav_in_and_out() {
    let dir = tempfile::tempdir().unwrap();
    let wav = write_synthetic_corpus(dir.path(), 1, 3).unwrap().remove(0);
    let wire = dir.path().join("a.tsc");
    let back = dir.path().join("back.wav");
    assert!(tsc(&["compress", "--bytes", "340", path(&wav), path(&wire)]).status.success());
    let o = tsc(&["reconstruct", path(&wire), path(&back)]);
    assert_eq!(o.status.code(), Some(2));
    let o = tsc(&["reconstruct", "--rate", "8000", path(&wire), path(&back)]);
    assert!(o.status.success());
    let r = tsc_core::io::read_wav(&back).unwrap();
    assert_eq!(r.sample_rate_hz(), 8000.0);
    assert_eq!(r.len(), tsc_core::io::read_wav(&wav).unwrap().len());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_signal(dir.path(), 300);
    let out = dir.path().join("a.tsc");
    let code = |args: &[&str]| tsc(args).status.code();

    assert_eq!(code(&["compress", "--method", "opus", "--bytes", "100", path(&input), path(&out)]), Some(2));
    assert_eq!(code(&["compress", "--method", "dft", "--window", "4", path(&input), path(&out)]), Some(2));
    assert_eq!(code(&["compress", "--bytes", "100", "--points", "9", path(&input), path(&out)]), Some(2));
    assert_eq!(code(&["compress", path(&input), path(&out)]), Some(2));
    assert_eq!(code(&["compress", "--bytes", "20", path(&input), path(&out)]), Some(1));
    assert_eq!(code(&["compress", "--bytes", "100", "missing.csv", path(&out)]), Some(1));

    assert_eq!(code(&["compress", "--bytes", "200", path(&input), path(&out)]), Some(0));
    let mut bytes = std::fs::read(&out).unwrap();
    bytes[0] = b'X';
    let bad = dir.path().join("bad.tsc");
    std::fs::write(&bad, &bytes).unwrap();
    assert_eq!(code(&["reconstruct", path(&bad), "x.csv"]), Some(1));
}

#[test]
fn diagram_is_sorted_by_persistence() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_signal(dir.path(), 400);
    let o = tsc(&["diagram", path(&input)]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("birth,death,min_index,max_index,is_global"));
    let pers: Vec<f64> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            f[1].parse::<f64>().unwrap() - f[0].parse::<f64>().unwrap()
        })
        .collect();
    assert!(!pers.is_empty());
    assert!(pers.windows(2).all(|w| w[0] >= w[1]));

    let file = dir.path().join("d.csv");
    assert!(tsc(&["diagram", path(&input), "--output", path(&file)]).status.success());
    assert_eq!(std::fs::read_to_string(&file).unwrap(), text);
}

#[test]
fn bench_rows_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    write_synthetic_corpus(&corpus, 3, 11).unwrap();
    let run = |out: &Path| {
        let o = tsc(&[
            "bench", "--corpus", path(&corpus), "--noise", "0,1", "--no-timing", "--no-dtw", "--seed", "5",
            "--out", path(out),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read_to_string(out).unwrap()
    };
    let a = run(&dir.path().join("a.csv"));
    let b = run(&dir.path().join("b.csv"));
    assert_eq!(a, b);

    let mut rdr = csv::Reader::from_reader(a.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    let details: Vec<_> = rows.iter().filter(|r| &r[col("row_type")] == "detail").collect();
    let aggregates: Vec<_> = rows.iter().filter(|r| &r[col("row_type")] == "aggregate").collect();
    // 3 files x 4 methods x 4 fractions x 2 noise levels
    assert_eq!(details.len(), 96);
    assert_eq!(aggregates.len(), 32);

    for agg in &aggregates {
        let key = |r: &csv::StringRecord| {
            (
                r[col("method")].to_string(),
                r[col("target_fraction")].to_string(),
                r[col("noise_multiple")].to_string(),
            )
        };
        let apen: Vec<f64> = details
            .iter()
            .filter(|d| key(d) == key(agg) && &d[col("status")] == "ok")
            .map(|d| d[col("apen")].parse().unwrap())
            .collect();
        let mean = apen.iter().sum::<f64>() / apen.len() as f64;
        assert_eq!(agg[col("count")].parse::<usize>().unwrap(), apen.len());
        let got: f64 = agg[col("apen")].parse().unwrap();
        assert!((got - mean).abs() <= 1e-12 * (1.0 + mean.abs()));
    }
}

#[test]
fn bench_synthetic_and_empty_corpus() {
    let o = tsc(&["bench", "--synthetic", "2", "--methods", "tsc", "--fractions", "0.9", "--no-timing"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1 + 2 + 1);

    let dir = tempfile::tempdir().unwrap();
    let o = tsc(&["bench", "--corpus", path(dir.path())]);
    assert_ne!(o.status.code(), Some(0));
    assert_eq!(tsc(&["bench"]).status.code(), Some(2));
}
