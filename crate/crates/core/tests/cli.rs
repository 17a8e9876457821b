use std::path::Path;
use std::process::{Command, Output};

use tsgen::distance::{distance, DistanceKind};
use tsgen::io;

fn tsgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsgen"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = tsgen(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn generate_ram_fig7_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "d.jsonl");
    let msg = ok(&[
        "generate",
        "ram",
        "--length",
        "100",
        "--dim",
        "3",
        "--radius",
        "50",
        "--distortion",
        "5",
        "--classes",
        "200",
        "--class-size",
        "4",
        "--seed",
        "7",
        "--out",
        &out,
    ]);
    assert!(msg.contains("800 series"), "{msg}");
    let ds = io::read_dataset_file(&out).unwrap();
    assert_eq!(ds.len(), 800);
    assert_eq!(ds.labels().len(), 200);
}

#[test]
fn generate_cbf_and_length_guard() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "c.jsonl");
    ok(&[
        "generate",
        "cbf",
        "--length",
        "125",
        "--dim",
        "3",
        "--classes",
        "27",
        "--class-size",
        "5",
        "--seed",
        "1",
        "--out",
        &out,
    ]);
    let ds = io::read_dataset_file(&out).unwrap();
    assert_eq!(ds.len(), 135);
    assert_eq!(ds.labels().len(), 27);

    let bad = tsgen(&[
        "generate",
        "cbf",
        "--length",
        "4",
        "--dim",
        "3",
        "--classes",
        "27",
        "--class-size",
        "5",
        "--seed",
        "1",
        "--out",
        &out,
    ]);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("at least 8"));
}

#[test]
fn seed_is_required_and_unknown_flags_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "c.jsonl");
    let no_seed = tsgen(&[
        "generate",
        "cbf",
        "--length",
        "16",
        "--dim",
        "1",
        "--classes",
        "3",
        "--class-size",
        "1",
        "--out",
        &out,
    ]);
    assert!(!no_seed.status.success());
    let unknown = tsgen(&[
        "generate",
        "cbf",
        "--length",
        "16",
        "--dim",
        "1",
        "--classes",
        "3",
        "--class-size",
        "1",
        "--seed",
        "1",
        "--out",
        &out,
        "--colour",
        "red",
    ]);
    assert!(!unknown.status.success());
}

#[test]
fn distance_and_classify_match_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "d.jsonl");
    ok(&[
        "generate",
        "ram",
        "--length",
        "30",
        "--dim",
        "2",
        "--radius",
        "50",
        "--distortion",
        "5",
        "--classes",
        "4",
        "--class-size",
        "3",
        "--seed",
        "11",
        "--out",
        &out,
    ]);
    let ds = io::read_dataset_file(&out).unwrap();

    assert_eq!(
        ok(&["distance", "--kind", "dtw", "--file", &out, "--a", "0", "--b", "0"]).trim(),
        "0"
    );
    let printed: f64 = ok(&[
        "distance", "--kind", "dtw", "--file", &out, "--a", "1", "--b", "5",
    ])
    .trim()
    .parse()
    .unwrap();
    let lib = distance(DistanceKind::Dtw, ds.items()[1].series(), ds.items()[5].series()).unwrap();
    assert_eq!(printed.to_bits(), lib.to_bits());
    assert!(
        !tsgen(&["distance", "--kind", "dk", "--file", &out, "--a", "0", "--b", "99"])
            .status
            .success()
    );

    let score: f64 = ok(&["classify", "--kind", "erp", "--file", &out])
        .trim()
        .parse()
        .unwrap();
    assert_eq!(
        score,
        tsgen::classify::knn1_loo_score(&ds, DistanceKind::Erp).unwrap()
    );
}

#[test]
fn euclidean_on_unequal_lengths_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.jsonl");
    std::fs::write(
        &path,
        concat!(
            r#"{"format_version":1,"generator":"manual","params":{},"seed":0,"dimensionality":1,"rng":"chacha8"}"#, "\n",
            r#"{"label":"a","index":0,"series":[[0.0],[1.0]]}"#, "\n",
            r#"{"label":"b","index":1,"series":[[0.0]]}"#, "\n",
        ),
    )
    .unwrap();
    let file = path.to_string_lossy();
    assert!(!tsgen(&[
        "distance",
        "--kind",
        "euclidean",
        "--file",
        &file,
        "--a",
        "0",
        "--b",
        "1"
    ])
    .status
    .success());
    assert!(
        tsgen(&["distance", "--kind", "dtw", "--file", &file, "--a", "0", "--b", "1"])
            .status
            .success()
    );
}

#[test]
fn sweep_two_kinds_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "s.csv");
    ok(&[
        "sweep",
        "--generator",
        "ram",
        "--kind",
        "dtw,euclidean",
        "--axis",
        "distortion=5,25",
        "--axis",
        "class_size=2,3,4",
        "--fixed",
        "radius=50",
        "--fixed",
        "length=40",
        "--fixed",
        "dim=2",
        "--fixed",
        "classes=5",
        "--replicates",
        "3",
        "--seed",
        "1",
        "--out",
        &out,
    ]);
    for kind in ["dtw", "euclidean"] {
        let file = p(dir.path(), &format!("s.{kind}.csv"));
        let text = std::fs::read_to_string(&file).unwrap();
        let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows[0], "distortion,class_size,rep_1,rep_2,rep_3,mean");
        assert_eq!(rows.len(), 7);
        let svg = p(dir.path(), &format!("{kind}.svg"));
        ok(&["export", "heatmap", "--in", &file, "--out", &svg]);
        let svg = std::fs::read_to_string(svg).unwrap();
        assert_eq!(svg.matches(r#"class="cell""#).count(), 6);
    }
}

#[test]
fn sweep_rejects_bad_axes() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "s.csv");
    let base = [
        "sweep",
        "--generator",
        "cbf",
        "--kind",
        "dtw",
        "--fixed",
        "length=16",
        "--fixed",
        "dim=2",
        "--fixed",
        "classes=3",
        "--replicates",
        "1",
        "--seed",
        "1",
        "--out",
        &out,
    ];
    let mut distortion = base.to_vec();
    distortion.extend(["--axis", "distortion=1,2", "--axis", "class_size=2"]);
    let r = tsgen(&distortion);
    assert!(!r.status.success());
    assert!(String::from_utf8_lossy(&r.stderr).contains("distortion"));

    let three = [
        "sweep",
        "--generator",
        "cbf",
        "--kind",
        "dtw",
        "--fixed",
        "length=16",
        "--axis",
        "dim=2",
        "--axis",
        "classes=3",
        "--axis",
        "class_size=2",
        "--replicates",
        "1",
        "--seed",
        "1",
        "--out",
        &out,
    ];
    assert!(!tsgen(&three).status.success());

    // export of a one-axis table fails
    let one = p(dir.path(), "one.csv");
    ok(&[
        "sweep",
        "--generator",
        "cbf",
        "--kind",
        "dtw",
        "--fixed",
        "length=16",
        "--fixed",
        "dim=2",
        "--fixed",
        "classes=3",
        "--axis",
        "class_size=2,3",
        "--replicates",
        "1",
        "--seed",
        "1",
        "--out",
        &one,
    ]);
    assert!(!tsgen(&[
        "export",
        "heatmap",
        "--in",
        &one,
        "--out",
        &p(dir.path(), "x.svg")
    ])
    .status
    .success());
}
