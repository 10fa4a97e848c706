use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use valconv::aabb::{subset_opt, sum_opt};
use valconv::SmoothValuation;

const SCENE: &str = r#"{
  "bodies": {
    "unit": {"kind": "polygon", "vertices": [[0,0],[1,0],[1,1],[0,1]]},
    "far": {"kind": "polygon", "vertices": [[5,5],[6,5],[6,6]]},
    "origin": {"kind": "polygon", "vertices": [[0,0]]},
    "seg": {"kind": "interval", "lo": 0, "hi": 0.5},
    "ab": {"kind": "interval", "lo": -0.43, "hi": -0.35}
  },
  "measures": {
    "delta": {"dim": 2, "atoms": [[[0,0], 1.0]]},
    "mixed": {"dim": 2, "atoms": [[[0.25,0.5], -0.5]],
              "grid": {"origin": [0,0], "spacing": 0.25, "shape": [2,2], "values": [1,2,3,4]}},
    "line": {"dim": 1, "grid": {"origin": [0], "spacing": 0.125, "shape": [4], "values": [1,3,2,2]}}
  },
  "valuations": {
    "e": {"dim": 2, "terms": [{"coeff": 1, "measure": "delta", "body": "origin"}]},
    "psi": {"dim": 2, "terms": [
      {"coeff": 1.5, "measure": "mixed", "body": "unit"},
      {"coeff": -1, "measure": "delta", "body": {"kind": "polygon", "vertices": [[0,0],[0.5,0]]}}
    ]},
    "oned": {"dim": 1, "terms": [{"coeff": 1, "measure": "line", "body": "seg"}]}
  },
  "probes": ["unit", "far"]
}"#;

struct Fixture {
    dir: TempDir,
    scene: PathBuf,
}

fn fixture(text: &str) -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let scene = dir.path().join("scene.json");
    std::fs::write(&scene, text).unwrap();
    Fixture { dir, scene }
}

fn valconv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_valconv"))
        .args(args)
        .output()
        .unwrap()
}

fn scene_arg(f: &Fixture) -> &str {
    f.scene.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read_valuation(p: &Path) -> SmoothValuation {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn eval_unit_on_containing_probe() {
    let f = fixture(SCENE);
    let out = valconv(&["eval", "--scene", scene_arg(&f), "--valuation", "e"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "probe,value");
    assert_eq!(lines[1], "unit,1.0000000000000000e0");
    assert_eq!(lines[2], "far,0.0000000000000000e0");
}

#[test]
fn eval_with_empty_probe_list_prints_header_only() {
    let f = fixture(&SCENE.replace(r#""probes": ["unit", "far"]"#, r#""probes": []"#));
    let out = valconv(&["eval", "--scene", scene_arg(&f), "--valuation", "psi"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "probe,value\n");
}

#[test]
fn eval_errors_exit_with_code_2() {
    let f = fixture(SCENE);
    let mismatch = valconv(&[
        "eval",
        "--scene",
        scene_arg(&f),
        "--valuation",
        "psi",
        "--probes",
        "seg",
    ]);
    assert_eq!(mismatch.status.code(), Some(2));
    let unknown = valconv(&["eval", "--scene", scene_arg(&f), "--valuation", "nope"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("unknown valuation"));
    let usage = valconv(&["eval", "--valuation", "psi"]);
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn eval_random_probes_are_seeded() {
    let f = fixture(SCENE);
    let run = |seed: &str| {
        stdout(&valconv(&[
            "eval",
            "--scene",
            scene_arg(&f),
            "--valuation",
            "psi",
            "--random-probes",
            "5",
            "--seed",
            seed,
        ]))
    };
    let (a, b, c) = (run("3"), run("3"), run("4"));
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(a.lines().count(), 1 + 2 + 5);
}

#[test]
fn eval_cross_checks_the_oned_engine() {
    let f = fixture(SCENE);
    let base = [
        "eval",
        "--scene",
        scene_arg(&f),
        "--valuation",
        "oned",
        "--probes",
        "seg,ab",
    ];
    let ok = valconv(
        &[
            &base[..],
            &["--grid-spacing", "0.001", "--tolerance", "0.001"],
        ]
        .concat(),
    );
    assert_eq!(ok.status.code(), Some(0));
    let text = stdout(&ok);
    assert!(text.starts_with("probe,value,oned\n"));
    for line in text.lines().skip(1) {
        let cols: Vec<f64> = line
            .split(',')
            .skip(1)
            .map(|c| c.parse().unwrap())
            .collect();
        assert!((cols[0] - cols[1]).abs() < 1e-3, "{line}");
    }
    let strict = valconv(
        &[
            &base[..],
            &["--grid-spacing", "0.25", "--tolerance", "1e-12"],
        ]
        .concat(),
    );
    assert_eq!(strict.status.code(), Some(1));
    let wrong_dim = valconv(&[
        "eval",
        "--scene",
        scene_arg(&f),
        "--valuation",
        "psi",
        "--grid-spacing",
        "0.01",
    ]);
    assert_eq!(wrong_dim.status.code(), Some(2));
}

#[test]
fn convolve_with_identity_reproduces_the_valuation() {
    let f = fixture(SCENE);
    let out_path = f.dir.path().join("conv.json");
    let out = valconv(&[
        "convolve",
        "--scene",
        scene_arg(&f),
        "--left",
        "e",
        "--right",
        "psi",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let psi_path = f.dir.path().join("psi.json");
    valconv(&[
        "convolve",
        "--scene",
        scene_arg(&f),
        "--left",
        "psi",
        "--right",
        "e",
        "--out",
        psi_path.to_str().unwrap(),
    ]);
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(written, std::fs::read_to_string(&psi_path).unwrap());
    let scene_psi: serde_json::Value = serde_json::from_str(SCENE).unwrap();
    let conv = read_valuation(&out_path);
    assert_eq!(conv.terms().len(), 2);
    assert_eq!(conv.terms()[0].coeff, 1.5);
    let mixed: valconv::Measure =
        serde_json::from_value(scene_psi["measures"]["mixed"].clone()).unwrap();
    assert_eq!(conv.terms()[0].measure, mixed);
}

#[test]
fn convolve_multiplies_terms_and_adds_support_boxes() {
    let f = fixture(SCENE);
    let out_path = f.dir.path().join("pp.json");
    let out = valconv(&[
        "convolve",
        "--scene",
        scene_arg(&f),
        "--left",
        "psi",
        "--right",
        "psi",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let conv = read_valuation(&out_path);
    assert_eq!(conv.terms().len(), 4);
    let psi = read_valuation(&{
        let p = f.dir.path().join("psi.json");
        valconv(&[
            "convolve",
            "--scene",
            scene_arg(&f),
            "--left",
            "e",
            "--right",
            "psi",
            "--out",
            p.to_str().unwrap(),
        ]);
        p
    });
    let b = psi.support_bound().unwrap();
    let bound = sum_opt(b.as_ref(), b.as_ref()).unwrap();
    assert!(subset_opt(
        conv.support_bound().unwrap().as_ref(),
        bound.as_ref()
    ));
    let mismatch = valconv(&[
        "convolve",
        "--scene",
        scene_arg(&f),
        "--left",
        "psi",
        "--right",
        "oned",
    ]);
    assert_eq!(mismatch.status.code(), Some(2));
}

#[test]
fn verify_all_passes_and_reports_every_assertion() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = valconv(&["verify", "all", "--out", report.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["passed"], true);
    let criteria = json["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 11);
    for c in criteria {
        let assertions = c["assertions"].as_array().unwrap();
        assert!(!assertions.is_empty());
        for a in assertions {
            assert!(
                a["measured"].is_number() && a["expected"].is_number(),
                "{a}"
            );
        }
    }
}

#[test]
fn injected_edge_merge_fault_fails_the_steiner_suite() {
    let out = valconv(&["verify", "steiner", "--inject-fault", "edge-merge-sign"]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["passed"], false);
    let clean = valconv(&["verify", "steiner"]);
    assert_eq!(clean.status.code(), Some(0));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    assert_eq!(valconv(&["verify", "bogus"]).status.code(), Some(2));
}
