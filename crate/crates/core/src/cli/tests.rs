use std::path::Path;

use super::*;

fn run(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("loewner-weld").chain(args.iter().copied()))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

const CONST_LOG2: &str = r#"{"T": 0.6931471805599453, "grid": [0, 0.6931471805599453], "sigma": [0, 0]}"#;

#[test]
fn radial_slit_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let drv = write(dir.path(), "const.json", CONST_LOG2);
    let wcsv = path(dir.path(), "w.csv");
    assert_eq!(run(&["weld", "--driver", &drv, "--samples", "256", "--out", &wcsv]), 0);
    let w = io::read_welding(Path::new(&wcsv)).unwrap();
    assert_eq!(w.pairs().len(), 257);
    for p in w.pairs() {
        assert!((p.theta_plus + p.theta_minus).abs() < 1e-3);
    }

    let report = path(dir.path(), "r.json");
    assert_eq!(run(&["analyze", "--welding", &wcsv, "--driver", &drv, "--out", &report]), 0);
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!((r["mr_constant"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-3);
    assert!(r["wp_cross_integral"]["value"].as_f64().unwrap() < 1e-4);
    assert_eq!(r["loewner_energy"].as_f64().unwrap(), 0.0);
    assert_eq!(r["normalization"], "raw");
    assert!(r["config"]["quadrature_tol"].as_f64().is_some());
    assert!(r["config"]["eps_hit"].as_f64().is_some());

    let maps = path(dir.path(), "m.json");
    assert_eq!(run(&["construct", "--welding", &wcsv, "--driver", &drv, "--out", &maps]), 0);
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&maps).unwrap()).unwrap();
    let kinds: Vec<&str> = m["maps"].as_array().unwrap().iter().map(|x| x["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["tau", "psi", "slit_map_h", "lemma_q", "composite_f"]);
    let f = &m["maps"][4];
    assert!(f["diagnostics"]["max_pair_mismatch"].as_f64().unwrap() < 1e-3);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let drv = write(
        dir.path(),
        "d.json",
        r#"{"T": 0.5, "grid": [0, 0.25, 0.5], "sigma": [0, 0.2, 0.1]}"#,
    );
    let (a, b) = (path(dir.path(), "a.csv"), path(dir.path(), "b.csv"));
    assert_eq!(run(&["weld", "--driver", &drv, "--samples", "16", "--out", &a]), 0);
    assert_eq!(run(&["weld", "--driver", &drv, "--samples", "16", "--out", &b]), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let (ra, rb) = (path(dir.path(), "a.json"), path(dir.path(), "b.json"));
    let flags = ["--allow-unconverged", "--cells", "32"];
    assert_eq!(run(&[&["analyze", "--welding", &a, "--out", &ra][..], &flags[..]].concat()), 0);
    assert_eq!(run(&[&["analyze", "--welding", &a, "--out", &rb][..], &flags[..]].concat()), 0);
    // Reports embed their own output path; everything else must match bit for bit.
    let strip = |p: &str| {
        let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        v["config"]["output"] = serde_json::Value::Null;
        v.to_string()
    };
    assert_eq!(strip(&ra), strip(&rb));
}

#[test]
fn exit_codes_and_no_partial_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"T": 0.5, "grid": [0, 0.5, 0.4], "sigma": [0, 0, 0]}"#,
    );
    let out = path(dir.path(), "out.csv");
    assert_eq!(run(&["weld", "--driver", &bad, "--out", &out]), 2);
    let zero = write(dir.path(), "zero.json", r#"{"T": 0, "grid": [0, 0], "sigma": [0, 0]}"#);
    assert_eq!(run(&["weld", "--driver", &zero, "--out", &out]), 2);
    assert!(!Path::new(&out).exists());

    let drv = write(dir.path(), "d.json", r#"{"T": 0.8, "grid": [0, 0.4, 0.8], "sigma": [0, 0.3, 0.2]}"#);
    assert_eq!(run(&["weld", "--driver", &drv, "--out", &drv]), 2);
    let w = path(dir.path(), "w.csv");
    assert_eq!(run(&["weld", "--driver", &drv, "--samples", "32", "--out", &w]), 0);
    let report = path(dir.path(), "r.json");
    assert_eq!(
        run(&["analyze", "--welding", &w, "--out", &report, "--cells", "8", "--quad-tol", "1e-12"]),
        4
    );
    assert!(!Path::new(&report).exists());
    assert_eq!(run(&["weld", "--driver", &drv, "--samples", "4", "--out", &out]), 2);
    assert_eq!(run(&["selftest"]), 0);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 4);
}

#[test]
fn trace_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    let drv = write(dir.path(), "const.json", CONST_LOG2);
    let tr = path(dir.path(), "t.csv");
    assert_eq!(run(&["trace", "--driver", &drv, "--count", "20", "--out", &tr]), 0);
    let (header, cols) = io::read_columns(Path::new(&tr)).unwrap();
    assert_eq!(header, ["t", "x", "y"]);
    assert!((cols[1][19] - (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-3);
    let w = path(dir.path(), "w.csv");
    assert_eq!(run(&["weld", "--driver", &drv, "--samples", "16", "--out", &w]), 0);
    for (input, kind) in [(&tr, "trace"), (&w, "welding"), (&w, "profile")] {
        let svg = path(dir.path(), &format!("{kind}.svg"));
        assert_eq!(run(&["plot", "--input", input, "--kind", kind, "--out", &svg]), 0);
        let text = std::fs::read_to_string(&svg).unwrap();
        assert!(text.starts_with("<svg") && text.contains("<polyline"));
    }
    let svg = path(dir.path(), "oops.svg");
    assert_eq!(run(&["plot", "--input", &tr, "--kind", "welding", "--out", &svg]), 2);
}
