//! End-to-end runs of the `smallgon` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use smallgon::files::{MetricsFile, PolygonFile, ReportFile};
use smallgon_core::{b_family, q_family, AngleFamily, Polygon};
use tempfile::TempDir;

fn smallgon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smallgon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn build_to(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut full = vec!["build"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let out = smallgon(&full);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn measure(path: &Path) -> MetricsFile {
    let out = smallgon(&["measure", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

fn write_polygon(dir: &Path, name: &str, vertices: &[[f64; 2]]) -> PathBuf {
    let file = PolygonFile {
        n: vertices.len(),
        family: "raw".to_owned(),
        params: Default::default(),
        vertices: vertices.to_vec(),
    };
    let path = dir.join(name);
    fs::write(&path, smallgon::json::to_string(&file)).unwrap();
    path
}

#[test]
fn build_then_measure_is_bit_exact() {
    let dir = TempDir::new().unwrap();
    for (name, args, library) in [
        (
            "b8.json",
            vec!["--family", "b", "--n", "8"],
            b_family(8).unwrap(),
        ),
        (
            "q8.json",
            vec!["--family", "q", "--n", "8"],
            q_family(8).unwrap(),
        ),
        (
            "b64.json",
            vec!["--family", "b", "--n", "64"],
            b_family(64).unwrap(),
        ),
    ] {
        let path = build_to(dir.path(), name, &args);
        let file: PolygonFile = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(file.polygon().unwrap().vertices(), library.vertices());
        let m = measure(&path);
        let want = library.metrics().unwrap();
        assert_eq!(m.perimeter.to_bits(), want.perimeter.to_bits());
        assert_eq!(m.width.to_bits(), want.width.to_bits());
        assert_eq!(m.area.to_bits(), want.area.to_bits());
        assert_eq!(m.diameter.to_bits(), want.diameter.to_bits());
    }
}

#[test]
fn build_b16_starts_at_origin() {
    let out = smallgon(&["build", "--family", "b", "--n", "16"]);
    assert_eq!(code(&out), 0);
    let file: PolygonFile = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(file.n, 16);
    assert_eq!(file.vertices.len(), 16);
    assert_eq!(file.vertices[0], [0.0, 0.0]);
    assert_eq!(file.family, "b");
}

#[test]
fn build_reuleaux_hexagon() {
    let dir = TempDir::new().unwrap();
    let path = build_to(
        dir.path(),
        "r36.json",
        &["--family", "reuleaux", "--m", "3", "--n", "6"],
    );
    let m = measure(&path);
    let h = std::f64::consts::PI / 12.0;
    assert!((m.perimeter - 12.0 * h.sin()).abs() < 1e-12);
    assert!((m.width - h.cos()).abs() < 1e-12);
    assert_eq!(m.n, 6);
}

#[test]
fn build_rejects_bad_parameters() {
    assert_eq!(code(&smallgon(&["build", "--family", "b", "--n", "12"])), 2);
    assert_eq!(
        code(&smallgon(&[
            "build", "--family", "reuleaux", "--m", "4", "--n", "8"
        ])),
        2
    );
    assert_eq!(
        code(&smallgon(&["build", "--family", "regular", "--n", "2"])),
        2
    );
    let out = smallgon(&["build", "--family", "b", "--n", "12"]);
    assert!(stdout(&out).is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn build_from_angles() {
    let dir = TempDir::new().unwrap();
    let angles = dir.path().join("angles.json");
    let out = smallgon(&["optimize", "--family", "b", "--n", "8"]);
    assert_eq!(code(&out), 0);
    let report: ReportFile = serde_json::from_str(&stdout(&out)).unwrap();
    fs::write(&angles, serde_json::to_string(&report.angles).unwrap()).unwrap();
    let path = build_to(
        dir.path(),
        "bstar8.json",
        &[
            "--family",
            "b",
            "--n",
            "8",
            "--angles",
            angles.to_str().unwrap(),
        ],
    );
    let m = measure(&path);
    assert!((m.perimeter - report.objective).abs() < 1e-12);
    let file: PolygonFile = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file.family, "from-angles");
}

#[test]
fn measure_reference_values() {
    let dir = TempDir::new().unwrap();
    let b8 = measure(&build_to(
        dir.path(),
        "b8.json",
        &["--family", "b", "--n", "8"],
    ));
    assert!((b8.width - 0.9776087734).abs() < 5e-11);
    assert_eq!(b8.diameter_edges.len(), 8);
    let q8 = measure(&build_to(
        dir.path(),
        "q8.json",
        &["--family", "q", "--n", "8"],
    ));
    assert_eq!(q8.diameter_edges.len(), 8);
    assert!(q8.convex);
}

#[test]
fn measure_square() {
    let dir = TempDir::new().unwrap();
    let side = 0.5;
    let path = write_polygon(
        dir.path(),
        "square.json",
        &[[0.0, 0.0], [side, 0.0], [side, side], [0.0, side]],
    );
    let m = measure(&path);
    assert!((m.diameter - side * 2f64.sqrt()).abs() < 1e-15);
    assert_eq!(m.diameter_edges, [[0, 2], [1, 3]]);
    assert_eq!(m.width, side);
}

#[test]
fn measure_rejects_bad_input() {
    let dir = TempDir::new().unwrap();
    let bowtie = write_polygon(
        dir.path(),
        "bowtie.json",
        &[[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]],
    );
    assert_eq!(code(&smallgon(&["measure", bowtie.to_str().unwrap()])), 1);
    let garbage = dir.path().join("garbage.json");
    fs::write(&garbage, "{\"n\": 3, \"vertices\": [").unwrap();
    assert_eq!(code(&smallgon(&["measure", garbage.to_str().unwrap()])), 2);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&smallgon(&["measure", missing.to_str().unwrap()])), 1);
}

#[test]
fn render_segment_counts() {
    let dir = TempDir::new().unwrap();
    for (args, boundary, diameter) in [
        (vec!["--family", "b", "--n", "8"], 8, 8),
        (vec!["--family", "regular", "--n", "4"], 4, 2),
        (vec!["--family", "q", "--n", "4"], 4, 4),
    ] {
        let path = build_to(dir.path(), "p.json", &args);
        let svg_path = dir.path().join("p.svg");
        let out = smallgon(&[
            "render",
            path.to_str().unwrap(),
            "--out",
            svg_path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
        let svg = fs::read_to_string(&svg_path).unwrap();
        assert_eq!(
            svg.matches(r#"class="boundary""#).count(),
            boundary,
            "{args:?}"
        );
        assert_eq!(
            svg.matches(r#"class="diameter""#).count(),
            diameter,
            "{args:?}"
        );
    }
}

#[test]
fn render_missing_file_fails() {
    assert_eq!(code(&smallgon(&["render", "/nonexistent/p.json"])), 1);
}

fn table(args: &[&str]) -> Vec<Vec<String>> {
    let mut full = vec!["table"];
    full.extend_from_slice(args);
    let out = smallgon(&full);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    csv::Reader::from_reader(out.stdout.as_slice())
        .records()
        .map(|r| r.unwrap().iter().map(str::to_owned).collect())
        .collect()
}

#[test]
fn table_reference_rows() {
    let t1 = table(&["T1", "--n", "32"]);
    assert_eq!(
        t1[0],
        [
            "32",
            "3.1365484905",
            "3.1402809876",
            "3.1403234211",
            "3.1403306141",
            "3.1403310687",
            "3.1403311570",
            "0.8374"
        ]
    );
    let t3 = table(&["T3"]);
    assert_eq!(t3.len(), 5);
    assert_eq!(t3[3][5], "0.8870");
    let t4 = table(&["T4", "--n", "8"]);
    assert_eq!(
        t4[0],
        [
            "8",
            "3.1195976652",
            "3.1210621230",
            "3.1211471341",
            "3.1214451523",
            "0.2219"
        ]
    );
}

#[test]
fn table_output_is_deterministic() {
    let a = smallgon(&["table", "T2"]);
    let b = smallgon(&["table", "T2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn table_digits_override() {
    let t2 = table(&["T2", "--n", "8", "--digits", "3"]);
    assert_eq!(t2[0][1], "0.924");
    let t5 = table(&["T5", "--n", "8", "--digits", "3"]);
    assert_eq!(t5[0][3], "0.435");
}

#[test]
fn table_rejects_unsupported_n() {
    assert_eq!(code(&smallgon(&["table", "T4", "--n", "256"])), 2);
    assert_eq!(code(&smallgon(&["table", "T1", "--n", "24"])), 2);
    assert_eq!(code(&smallgon(&["table", "T9"])), 2);
}

#[test]
fn optimize_report_certifies() {
    let out = smallgon(&["optimize", "--family", "q", "--n", "8"]);
    assert_eq!(code(&out), 0);
    let report: ReportFile = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report.converged);
    assert!((report.objective - 3.1195976652).abs() < 5e-11);
    let core = report.to_report().unwrap();
    smallgon_core::certify(&core, 8, AngleFamily::Q).unwrap();
}

#[test]
fn optimize_config_handling() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("config.json");
    fs::write(&config, r#"{"starts": 1, "max_outer": 60}"#).unwrap();
    let out = smallgon(&[
        "optimize",
        "--family",
        "b",
        "--n",
        "16",
        "--config",
        config.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let report: ReportFile = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.starts_used, 1);

    fs::write(&config, r#"{"tol_eq": -1}"#).unwrap();
    let out = smallgon(&[
        "optimize",
        "--family",
        "b",
        "--n",
        "16",
        "--config",
        config.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    fs::write(&config, r#"{"tolerance": 1e-9}"#).unwrap();
    let out = smallgon(&[
        "optimize",
        "--family",
        "b",
        "--n",
        "16",
        "--config",
        config.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn optimize_impossible_tolerance_fails() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("config.json");
    fs::write(
        &config,
        r#"{"tol_kkt": 1e-30, "tol_eq": 1e-30, "max_outer": 2, "starts": 1}"#,
    )
    .unwrap();
    let out = smallgon(&[
        "optimize",
        "--family",
        "q",
        "--n",
        "8",
        "--config",
        config.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let report: ReportFile = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(!report.converged);
}

#[test]
fn verify_passes_and_catches_perturbation() {
    let out = smallgon(&["verify", "--n-max", "128"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(!text.contains("FAIL"));
    assert!(text.contains("b quarter vertex at (-1/2 1/2),64,"));

    let dir = TempDir::new().unwrap();
    let path = build_to(dir.path(), "b16.json", &["--family", "b", "--n", "16"]);
    assert_eq!(
        code(&smallgon(&[
            "verify",
            "--n-max",
            "16",
            "--polygon",
            path.to_str().unwrap()
        ])),
        0
    );
    let mut file: PolygonFile = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    file.vertices[5][1] -= 1e-6;
    fs::write(&path, smallgon::json::to_string(&file)).unwrap();
    let out = smallgon(&[
        "verify",
        "--n-max",
        "16",
        "--polygon",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn verify_rejects_bad_n_max() {
    assert_eq!(code(&smallgon(&["verify", "--n-max", "100"])), 2);
}

#[test]
fn polygon_json_uses_17_digits() {
    let out = smallgon(&["build", "--family", "regular", "--n", "4"]);
    let text = stdout(&out);
    // 0.5 minus one ulp survives the trip through text
    assert!(text.contains("0.49999999999999994"));
    assert!(text.contains("-0.50000000000000000"));
    let file: PolygonFile = serde_json::from_str(&text).unwrap();
    let p = Polygon::new(file.points()).unwrap();
    assert_eq!(p.vertices()[1].y, 0.5 - f64::EPSILON / 4.0);
}
