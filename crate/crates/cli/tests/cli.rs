use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const MU0: f64 = 1.256_637_062_12e-6;

const LOOP_AXIS: &str = r#"
schema = 1
[[sources]]
type = "loop"
radius = 0.5
current = 2.0
[grid]
x = { from = 0.0 }
y = { from = 0.0 }
z = { from = -1.0, to = 1.0, count = 9 }
[output]
quantities = ["B"]
"#;

fn singem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_singem")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn parse(text: &str) -> Table {
        let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
        let mut r = csv::Reader::from_reader(body.as_bytes());
        let header = r.headers().unwrap().iter().map(String::from).collect();
        let rows = r.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
        Table { header, rows }
    }

    fn col(&self, name: &str) -> Vec<f64> {
        let i = self.header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[i].parse().unwrap()).collect()
    }

    fn statuses(&self) -> Vec<String> {
        let i = self.header.iter().position(|h| h == "status").unwrap();
        self.rows.iter().map(|r| r[i].clone()).collect()
    }
}

fn run_table(dir: &Path, scene: &str, extra: &[&str]) -> (Output, Table) {
    let s = write(dir, "scene.toml", scene);
    let out = dir.join("out.csv");
    let mut args = vec!["run", "--scene", s.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = singem(&args);
    let t = Table::parse(&std::fs::read_to_string(&out).unwrap_or_default());
    (o, t)
}

#[test]
fn loop_axis_matches_textbook_field() {
    let dir = tempfile::tempdir().unwrap();
    let (o, t) = run_table(dir.path(), LOOP_AXIS, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (z, bz) = (t.col("z"), t.col("B_z"));
    assert_eq!(z.len(), 9);
    for (z, bz) in z.iter().zip(&bz) {
        let want = MU0 * 2.0 * 0.25 / (2.0 * (0.25 + z * z).powf(1.5));
        assert!((bz - want).abs() < 1e-8 * want, "z = {z}: {bz} vs {want}");
    }
    for (b, e) in t.col("B_z").iter().zip(t.col("B_error")) {
        assert!(e >= 0.0 && e < 1e-6 * b);
    }
    assert!(t.col("B_x").iter().chain(&t.col("B_y")).all(|v| v.abs() < 1e-15));
}

#[test]
fn csv_header_records_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "scene.toml", LOOP_AXIS);
    let o = singem(&["run", "--scene", s.to_str().unwrap()]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("# scene-sha256: ") && l.len() == "# scene-sha256: ".len() + 64));
    assert!(text.contains("# units: SI"));
    assert!(text.contains("# sign-conventions: v1"));
}

#[test]
fn empty_grid_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "scene.toml", &LOOP_AXIS.replace("count = 9", "count = 0"));
    let o = singem(&["run", "--scene", s.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("grid.z.count"));
    assert!(o.stdout.is_empty());
}

#[test]
fn opposite_loops_cancel() {
    let scene = r#"
schema = 1
[[sources]]
type = "loop"
radius = 0.5
current = 1.5
[[sources]]
type = "loop"
radius = 0.5
current = -1.5
[grid]
x = { from = 0.1, to = 0.9, count = 3 }
y = { from = 0.2 }
z = { from = -0.3, to = 0.3, count = 3 }
[output]
quantities = ["A", "B"]
"#;
    let dir = tempfile::tempdir().unwrap();
    let (o, t) = run_table(dir.path(), scene, &[]);
    assert_eq!(o.status.code(), Some(0));
    for c in ["A_x", "A_y", "A_z", "B_x", "B_y", "B_z"] {
        assert!(t.col(c).iter().all(|v| *v == 0.0), "{c}: {:?}", t.col(c));
    }
}

#[test]
fn superposition_is_linear() {
    let one = |src: &str| {
        format!(
            "schema = 1\n{src}\n[grid]\nx = {{ from = -0.4, to = 0.4, count = 3 }}\ny = {{ from = 0.25 }}\n\
             z = {{ from = 0.1, to = 0.7, count = 3 }}\n[output]\nquantities = [\"A\", \"phi\", \"B\", \"E\"]\n"
        )
    };
    let ring = "[[sources]]\ntype = \"loop\"\nradius = 0.3\ncurrent = 2.0\n";
    let charge = "[[sources]]\ntype = \"point_charge\"\ncharge = 1e-9\nposition = [0.0, 0.0, 1.5]\n";
    let dir = tempfile::tempdir().unwrap();
    let (_, a) = run_table(dir.path(), &one(ring), &[]);
    let (_, b) = run_table(dir.path(), &one(charge), &[]);
    let (o, both) = run_table(dir.path(), &one(&format!("{ring}{charge}")), &[]);
    assert_eq!(o.status.code(), Some(0));
    for c in ["A_x", "A_y", "A_z", "phi", "B_x", "B_y", "B_z", "E_x", "E_y", "E_z"] {
        for ((x, y), s) in a.col(c).iter().zip(b.col(c)).zip(both.col(c)) {
            let err = (x + y - s).abs();
            assert!(err <= 1e-12, "{c}: {x} + {y} vs {s}");
            assert!(err <= 1e-14 * (x.abs() + y.abs()), "{c}: {x} + {y} vs {s}");
        }
    }
}

#[test]
fn runs_are_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "scene.toml", LOOP_AXIS);
    let run = |threads: &str| {
        singem(&["run", "--scene", s.to_str().unwrap(), "--threads", threads]).stdout
    };
    let first = run("1");
    assert!(!first.is_empty());
    assert_eq!(first, run("1"));
    assert_eq!(first, run("4"));
}

#[test]
fn unknown_key_is_reported_with_its_path() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "scene.toml", &LOOP_AXIS.replace("current = 2.0", "current = 2.0\ncolour = 3"));
    let o = singem(&["validate", "--scene", s.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("sources[0]") && err.contains("colour"), "{err}");
}

#[test]
fn set_overrides_scene_values() {
    let dir = tempfile::tempdir().unwrap();
    let (_, base) = run_table(dir.path(), LOOP_AXIS, &[]);
    let (o, doubled) = run_table(dir.path(), LOOP_AXIS, &["--set", "sources.0.current=4.0"]);
    assert_eq!(o.status.code(), Some(0));
    for (x, y) in base.col("B_z").iter().zip(doubled.col("B_z")) {
        assert!((2.0 * x - y).abs() < 1e-12 * y);
    }
    let (o, _) = run_table(dir.path(), LOOP_AXIS, &["--set", "sources.3.current=4.0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn validate_rejects_helix_pitch_beyond_one() {
    let scene = r#"
schema = 1
[[sources]]
type = "helix"
radius = 0.5
pitch = 1.2
length = 3.0
current = 1.0
[grid]
x = { from = 1.0 }
y = { from = 0.0 }
z = { from = 0.0 }
"#;
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "scene.toml", scene);
    let o = singem(&["validate", "--scene", s.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("pitch"));
}

#[test]
fn validate_reports_loop_normalization() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "scene.toml", LOOP_AXIS);
    let o = singem(&["validate", "--scene", s.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let line = text.lines().find(|l| l.contains("lambda")).unwrap();
    let value: f64 = line.split("= ").nth(2).unwrap().split_whitespace().next().unwrap().parse().unwrap();
    let want = 4.0 * PI * MU0 * 1.0;
    assert!((value - want).abs() < 1e-14 * want, "{line}");
    // the normalized scene is itself a valid scene
    let again = write(dir.path(), "normalized.toml", &text);
    assert_eq!(singem(&["validate", "--scene", again.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn points_on_the_wire_are_flagged_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let scene = LOOP_AXIS.replace("x = { from = 0.0 }", "x = { from = 0.5 }").replace("count = 9", "count = 3");
    let (o, t) = run_table(dir.path(), &scene, &[]);
    assert_eq!(o.status.code(), Some(2));
    let st = t.statuses();
    assert_eq!(st.len(), 3);
    assert_eq!(st[0], "ok");
    assert!(st[1].starts_with("error:"), "{st:?}");
    assert_eq!(st[2], "ok");
}

#[test]
fn doc_format_is_json() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "scene.toml", LOOP_AXIS);
    let o = singem(&["run", "--scene", s.to_str().unwrap(), "--format", "doc"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["sign_conventions"], 1);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 9);
    let cols: Vec<&str> = doc["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert!(cols.contains(&"B_z"));
}

#[test]
fn selfcheck_passes() {
    let o = singem(&["selfcheck"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let o = singem(&["selfcheck", "--check", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(singem(&["selfcheck", "--check", "99"]).status.code(), Some(1));
}

#[test]
fn example_scenes_run_cleanly() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenes");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "toml") {
            let o = singem(&["run", "--scene", p.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0), "{}: {}", p.display(), String::from_utf8_lossy(&o.stderr));
            let t = Table::parse(&String::from_utf8(o.stdout).unwrap());
            assert!(t.statuses().iter().all(|s| s == "ok"));
            seen += 1;
        }
    }
    assert!(seen >= 4);
}
