use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rabi_core::gfunction::Truncation;
use rabi_core::rootfinder::{scan_brackets, DEFAULT_STEP};
use rabi_core::validate_params;

fn rabi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rabi")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data rows of a schema-tagged CSV, split on commas.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

const GOLDEN: [f64; 8] = [
    -0.707805064098486,
    -0.427043674566187,
    0.370949763390693,
    0.673603825027012,
    1.360756832131718,
    1.63701037064434,
    2.466695702065398,
    2.54523096551278,
];

#[test]
fn spectrum_csv_matches_golden_levels() {
    let o = rabi(&["spectrum", "--omega", "1", "--g", "0.7", "--delta", "0.4", "--levels", "8", "--format", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("# schema=1\n"));
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["index", "energy", "parity", "kind", "method", "residual"]);
    assert_eq!(rows.len(), 8);
    for (row, want) in rows.iter().zip(GOLDEN) {
        let e: f64 = row[1].parse().unwrap();
        assert!((e - want).abs() < 1e-9, "{e} vs {want}");
        assert_eq!(row[3], "regular");
        assert_eq!(row[4], "gfunction");
    }
}

#[test]
fn spectrum_reports_juddian_pair() {
    let o = rabi(&["spectrum", "--g", "0.3", "--delta", "0.8", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    let juddian: Vec<&serde_json::Value> = v["rows"].as_array().unwrap().iter().filter(|r| r["kind"] == "juddian").collect();
    assert_eq!(juddian.len(), 2);
    assert_ne!(juddian[0]["parity"], juddian[1]["parity"]);
    assert!((juddian[0]["energy"].as_f64().unwrap() - 0.91).abs() < 1e-15);
}

#[test]
fn spectrum_fallbacks_and_errors() {
    let o = rabi(&["spectrum", "--g", "0", "--delta", "0.3", "--levels", "4"]);
    assert!(o.status.success());
    let (_, rows) = csv_rows(&stdout(&o));
    let values: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(values, ["-0.3", "0.3", "0.7", "1.3"]);
    assert!(rows.iter().all(|r| r[4] == "oracle"));

    let o = rabi(&["spectrum", "--omega", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NonPositiveFrequency"));

    let o = rabi(&["spectrum", "--format", "svg"]);
    assert_eq!(o.status.code(), Some(2));
    let o = rabi(&["spectrum", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn negative_couplings_give_the_same_spectrum() {
    let a = rabi(&["spectrum", "--g", "0.7", "--delta", "0.4"]);
    let b = rabi(&["spectrum", "--g", "-0.7", "--delta", "-0.4"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn gscan_sign_changes_match_brackets() {
    let o = rabi(&["gscan", "--g", "0.5", "--delta", "0.5", "--x-min", "-0.5", "--x-max", "4.5", "--step", "0.005"]);
    assert!(o.status.success());
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["x", "g_plus", "g_minus"]);
    assert_eq!(rows.len(), 1001);

    let mut changes = 0;
    for col in 1..=2 {
        let mut prev: Option<(f64, f64)> = None;
        for r in &rows {
            let x: f64 = r[0].parse().unwrap();
            if r[col].is_empty() {
                prev = None;
                continue;
            }
            let v: f64 = r[col].parse().unwrap();
            if let Some((xa, a)) = prev {
                let across_pole = xa.floor() != x.floor() && x.floor() >= 0.0;
                if a * v < 0.0 && !across_pole {
                    changes += 1;
                }
            }
            prev = Some((x, v));
        }
    }
    let p = validate_params(1.0, 0.5, 0.5).unwrap();
    let scan = scan_brackets(&p, -0.5, 4.5, DEFAULT_STEP, &Truncation::default()).unwrap();
    assert_eq!(changes, scan.brackets.len());
}

#[test]
fn gscan_pole_rows_are_empty_and_zero_width_gives_one_row() {
    let o = rabi(&["gscan", "--x-min", "0.99", "--x-max", "1.01", "--step", "0.01"]);
    let (_, rows) = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1], ["1", "", ""]);
    assert!(!rows[0][1].is_empty());

    let o = rabi(&["gscan", "--x-min", "0.3", "--x-max", "0.3"]);
    let (_, rows) = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 1);

    let o = rabi(&["gscan", "--step", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

fn figure_into(dir: &Path, threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rabi"))
        .args(["figure", "--quick", "--out"])
        .arg(dir)
        .env("RAYON_NUM_THREADS", threads)
        .output()
        .unwrap()
}

#[test]
fn figure_panels_counts_and_determinism() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let oa = figure_into(a.path(), "1");
    let ob = figure_into(b.path(), "4");
    assert!(oa.status.success(), "{}", stderr(&oa));
    let summary = stdout(&oa);
    for (n, closed) in [(0, 0), (1, 1), (2, 2), (3, 3)] {
        assert!(summary.contains(&format!("n={n} juddian: closed={closed} open=0")), "{summary}");
    }
    assert_eq!(summary, stdout(&ob));
    for name in ["panel_n0.svg", "panel_n1.svg", "panel_n2.svg", "panel_n3.svg", "figure.svg", "polylines.csv"] {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert!(x == y, "{name} differs between thread counts");
    }
    let svg = fs::read_to_string(a.path().join("figure.svg")).unwrap();
    assert!(svg.contains("version=\"1.1\""));
    assert_eq!(svg.matches("clip-path=").count(), 4);
    let csv = fs::read_to_string(a.path().join("polylines.csv")).unwrap();
    assert!(csv.starts_with("# schema=1\n"));
}

#[test]
fn figure_rejects_bad_level_lists() {
    assert_eq!(rabi(&["figure", "--n", ""]).status.code(), Some(2));
    assert_eq!(rabi(&["figure", "--n", "7"]).status.code(), Some(2));
    assert_eq!(rabi(&["figure", "--cells", "2001"]).status.code(), Some(2));
}

#[test]
fn locus_json_reports_intercepts() {
    let o = rabi(&["locus", "--n", "1", "--quick", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let sets = v["sets"].as_array().unwrap();
    assert_eq!(sets.len(), 3);
    assert_eq!(sets[0]["closed_components"], 1);
    let hits: Vec<f64> = sets[1..]
        .iter()
        .flat_map(|s| s["axis_intercepts"].as_array().unwrap().iter().map(|h| h.as_f64().unwrap()))
        .collect();
    for target in [2.0, 3.0] {
        assert!(hits.iter().any(|h| (h - target).abs() < 1e-3), "{hits:?}");
    }
}

#[test]
fn oracle_table() {
    let o = rabi(&["oracle", "--g", "0.7", "--delta", "0.4", "--levels", "8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("# m_max=80\n"));
    let (_, rows) = csv_rows(&text);
    for (row, want) in rows.iter().zip(GOLDEN) {
        assert!((row[1].parse::<f64>().unwrap() - want).abs() < 1e-12);
    }
    assert_eq!(rabi(&["oracle", "--m-max", "4"]).status.code(), Some(2));
}

#[test]
fn verify_quick_passes_and_report_is_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = rabi(&["verify", "--quick", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["passed"], true);
    for c in v["checks"].as_array().unwrap() {
        for key in ["check", "status", "measured", "tolerance"] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
        assert_eq!(c["status"], "pass");
    }
}

#[test]
fn verify_catches_an_injected_fault() {
    let o = rabi(&["verify", "--quick", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let oracle = v["checks"].as_array().unwrap().iter().find(|c| c["check"] == "oracle_equivalence").unwrap();
    assert_eq!(oracle["status"], "fail");
}

#[test]
fn verify_rejects_svg() {
    assert_eq!(rabi(&["verify", "--format", "svg"]).status.code(), Some(2));
}
