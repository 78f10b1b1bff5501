use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use cinewild::harness::io::{csv_header, load_scenario, read_csv, scenario_to_json};
use cinewild::harness::{experiment1_preset, experiment2_preset};

fn cinewild(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cinewild"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// One giraffe run shared by the tests that only read its output.
fn e1_run() -> &'static Path {
    static DIR: OnceLock<PathBuf> = OnceLock::new();
    DIR.get_or_init(|| {
        let out = scratch("e1-run").join("out");
        let o = cinewild(&["run", "--preset", "e1", "--mode", "cinewild", "--seed", "42", "--out", s(&out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        out
    })
}

#[test]
fn run_writes_one_row_per_step() {
    let out = e1_run();
    let text = fs::read_to_string(out.join("metrics.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 300);
    assert_eq!(text.lines().next().unwrap(), csv_header().join(","));
    let summary: serde_json::Value = serde_json::from_slice(&fs::read(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["mode"], "cinewild");
    assert_eq!(summary["seed"], 42);
    assert_eq!(summary["steps"], 300);
}

#[test]
fn e2_baseline_stays_in_view() {
    let out = scratch("e2-baseline").join("out");
    let o = cinewild(&["run", "--preset", "e2", "--mode", "baseline", "--out", s(&out)]);
    assert!(o.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&fs::read(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["summary"]["near"]["pct_inside_fov"], 100.0);
}

#[test]
fn malformed_configs_exit_2_without_output() {
    let dir = scratch("malformed");
    let broken = dir.join("broken.json");
    fs::write(&broken, "{ \"name\": \"x\", ").unwrap();
    let mut bad = experiment1_preset();
    bad.ethics.d_sf = 30.0;
    let invalid = dir.join("invalid.json");
    fs::write(&invalid, scenario_to_json(&bad)).unwrap();
    let missing = dir.join("missing.json");

    for cfg in [&broken, &invalid, &missing] {
        let out = dir.join("out");
        let o = cinewild(&["run", "--config", s(cfg), "--out", s(&out)]);
        assert_eq!(o.status.code(), Some(2), "{}", cfg.display());
        assert!(!out.exists());
        assert!(!String::from_utf8_lossy(&o.stderr).trim().is_empty());
    }
    let o = cinewild(&["run", "--config", s(&invalid), "--out", s(&dir.join("out"))]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("d_sf"));
}

#[test]
fn bad_flags_and_thread_counts_exit_2() {
    let out = scratch("flags").join("out");
    assert_eq!(cinewild(&[]).status.code(), Some(2));
    assert_eq!(cinewild(&["run", "--preset", "e1"]).status.code(), Some(2));
    assert_eq!(cinewild(&["plot", "--in", "x.csv", "--out", s(&out), "--which", "pie"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_cinewild"))
        .args(["presets"])
        .env("CINEWILD_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(cinewild(&["--help"]).status.success());
}

#[test]
fn presets_round_trip() {
    let dir = scratch("presets");
    let listed = cinewild(&["presets"]);
    assert!(listed.status.success());
    let text = String::from_utf8(listed.stdout).unwrap();
    assert!(text.contains("e1") && text.contains("e2"));

    assert!(cinewild(&["presets", "--out", s(&dir)]).status.success());
    for (file, preset) in [("e1.json", experiment1_preset()), ("e2.json", experiment2_preset())] {
        let path = dir.join(file);
        let loaded = load_scenario(&path).unwrap();
        assert_eq!(loaded, preset);
        assert_eq!(scenario_to_json(&loaded), fs::read_to_string(&path).unwrap());
    }
}

#[test]
fn config_file_matches_preset_run() {
    let dir = scratch("config-run");
    assert!(cinewild(&["presets", "--out", s(&dir)]).status.success());
    let out = dir.join("out");
    let o = cinewild(&["run", "--config", s(&dir.join("e1.json")), "--mode", "cinewild", "--seed", "42", "--out", s(&out)]);
    assert!(o.status.success());
    assert_eq!(fs::read(out.join("metrics.csv")).unwrap(), fs::read(e1_run().join("metrics.csv")).unwrap());
}

#[test]
fn compare_with_one_seed_has_zero_spread() {
    let out = scratch("compare").join("out");
    let o = cinewild(&["compare", "--preset", "e2", "--seeds", "1", "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut rdr = csv::Reader::from_path(out.join("comparison.csv")).unwrap();
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["scope", "metric", "cinewild_mean", "cinewild_std", "baseline_mean", "baseline_std"]
    );
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        for std in [&rec[3], &rec[5]] {
            assert!(std.is_empty() || std == "0", "{rec:?}");
        }
        rows += 1;
    }
    // all, near and three sequences
    assert_eq!(rows, 5 * 11);
    let paired: serde_json::Value = serde_json::from_slice(&fs::read(out.join("summaries.json")).unwrap()).unwrap();
    assert_eq!(paired.as_array().unwrap().len(), 1);

    // same seed list, same bytes
    let again = scratch("compare-again").join("out");
    assert!(cinewild(&["compare", "--preset", "e2", "--seeds", "1", "--out", s(&again)]).status.success());
    assert_eq!(fs::read(out.join("comparison.csv")).unwrap(), fs::read(again.join("comparison.csv")).unwrap());
}

#[test]
fn plot_writes_valid_svg_panels() {
    let run = e1_run();
    let out = scratch("plot").join("svg");
    let o = cinewild(&["plot", "--in", s(&run.join("metrics.csv")), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let records = read_csv(&run.join("metrics.csv")).unwrap();
    for panel in ["distance", "focal", "framing", "kinematics", "fovx"] {
        let text = fs::read_to_string(out.join(format!("{panel}.svg"))).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap_or_else(|e| panic!("{panel}: {e}"));
        assert_eq!(doc.root_element().tag_name().name(), "svg");
        let boundaries = doc.descendants().filter(|n| n.attribute("class") == Some("sequence-boundary")).count();
        assert_eq!(boundaries, 2, "{panel}");
    }

    let distance = fs::read_to_string(out.join("distance.svg")).unwrap();
    assert!(distance.contains("d_ac = 20"));
    assert!(distance.contains("d_sf = 5"));

    // one path vertex per logged value, nothing invented
    let doc = roxmltree::Document::parse(&distance).unwrap();
    let vertices: usize = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("series"))
        .map(|n| n.attribute("d").unwrap().matches(['M', 'L']).count())
        .sum();
    assert_eq!(vertices, records.len());

    let fovx = fs::read_to_string(out.join("fovx.svg")).unwrap();
    let doc = roxmltree::Document::parse(&fovx).unwrap();
    let borders: Vec<_> = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("threshold"))
        .map(|n| n.attribute("stroke").unwrap())
        .collect();
    assert_eq!(borders.len(), 2);
    assert!(fovx.contains("W = 960"));
}

#[test]
fn plot_selects_panels() {
    let out = scratch("plot-which").join("svg");
    let o = cinewild(&["plot", "--in", s(&e1_run().join("metrics.csv")), "--out", s(&out), "--which", "fovx,focal"]);
    assert!(o.status.success());
    let mut names: Vec<_> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["focal.svg", "fovx.svg"]);
}

#[test]
fn plot_rejects_empty_and_foreign_csv() {
    let dir = scratch("plot-bad");
    let empty = dir.join("empty.csv");
    fs::write(&empty, format!("{}\n", csv_header().join(","))).unwrap();
    let blank = dir.join("blank.csv");
    fs::write(&blank, "").unwrap();
    let foreign = dir.join("foreign.csv");
    fs::write(&foreign, "a,b,c\n1,2,3\n").unwrap();
    for csv in [&empty, &blank, &foreign] {
        let out = dir.join("svg");
        let o = cinewild(&["plot", "--in", s(csv), "--out", s(&out)]);
        assert_eq!(o.status.code(), Some(2), "{}", csv.display());
        assert!(!out.exists());
    }
}
