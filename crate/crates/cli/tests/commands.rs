//! Every command is checked against the library call it wraps, by running
//! the built binary. Deterministic outputs are also pinned by golden files
//! in `tests/golden` (regenerate with `DIRIMUL_BLESS=1`).

use std::path::PathBuf;
use std::process::Command;

use dirimul::colegamelin::{cg_factor, extremal_function, ExtremalSpec};
use dirimul::fejer::{fejer_apply, FejerSpec};
use dirimul::multipliers::{ess_norm_bracket, multiplier_norm, operator_norm_lower_bound};
use dirimul::norms::{norm, norm_hinf, torus_norm};
use dirimul::operators::{
    approximate_spectrum_cloud, closed_range_certificate, commutant_test, matrix_of, spectrum_cloud, truncated_norm,
    BoundarySpec, HalfPlaneGrid, RangeConfig,
};
use dirimul::{bohr_lift, bohr_transform, Complex64, EngineConfig, PExponent};
use dirimul_cli::parse_series;
use serde_json::{json, Value};

fn dirimul(args: &[&str]) -> (Value, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_dirimul")).args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(stdout.trim()).unwrap_or_else(|e| panic!("{args:?}: {e}: {stdout}"));
    (v, out.status.code().unwrap())
}

fn ok(args: &[&str]) -> Value {
    let (v, code) = dirimul(args);
    assert_eq!(code, 0, "{args:?}: {v}");
    v
}

fn cfg(seed: u64, samples: usize) -> EngineConfig {
    EngineConfig { seed, samples, ..EngineConfig::default() }
}

fn p(s: &str) -> PExponent {
    s.parse().unwrap()
}

fn golden(name: &str, v: &Value) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    let text = serde_json::to_string_pretty(v).unwrap() + "\n";
    if std::env::var_os("DIRIMUL_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &text).unwrap();
    }
    let stored = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    let stored: Value = serde_json::from_str(&stored).unwrap();
    assert_eq!(&stored, v, "golden {name}");
}

#[test]
fn norm_matches_library() {
    let d = parse_series("1 + 2^-s + 3^-s").unwrap();
    for pe in ["2", "4", "3/2", "inf"] {
        let v = ok(&["norm", "--series", "1 + 2^-s + 3^-s", "--p", pe, "--seed", "3", "--samples", "4096"]);
        assert_eq!(v, json!(norm(&d, &p(pe), &cfg(3, 4096)).unwrap()), "p = {pe}");
    }
    golden("norm_p4", &ok(&["norm", "--series", "1 + 2^-s + 3^-s", "--p", "4"]));
}

#[test]
fn hinf_matches_library() {
    let d = parse_series("2 + 2^-s - 3^-s").unwrap();
    let v = ok(&["hinf", "--series", "2 + 2^-s - 3^-s", "--grid", "64"]);
    let c = EngineConfig { grid: Some(64), ..EngineConfig::default() };
    assert_eq!(v, json!(norm_hinf(&d, &c).unwrap()));
    golden("hinf", &v);
}

#[test]
fn mult_norm_matches_library() {
    let d = parse_series("1 + 2^-s").unwrap();
    let v = ok(&["mult-norm", "--series", "1+2^-s", "--p", "4", "--q", "2", "--trials", "8", "--seed", "11"]);
    let c = cfg(11, EngineConfig::default().samples);
    let m = multiplier_norm(&d, p("4"), p("2"), &c).unwrap();
    let lb = operator_norm_lower_bound(&d, p("4"), p("2"), 8, &c).unwrap();
    assert_eq!(v["value"], json!(m.value));
    assert_eq!(v["upper"], json!(m.upper));
    assert_eq!(v["lower"], json!(lb.value));
    assert_eq!(v["regime"], json!({"kind": "ht", "t": 4}));
    assert!(v["lower"].as_f64().unwrap() <= v["upper"].as_f64().unwrap());
}

#[test]
fn mult_norm_refuses_zero_regime() {
    let (v, code) = dirimul(&["mult-norm", "--series", "1+2^-s", "--p", "2", "--q", "4"]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("no nonzero multipliers"), "{v}");
}

#[test]
fn ess_bracket_matches_library() {
    let d = parse_series("1 + 2^-s").unwrap();
    for (pe, qe) in [("4", "2"), ("2", "2"), ("inf", "2"), ("1", "1")] {
        let v = ok(&["ess-bracket", "--series", "1+2^-s", "--p", pe, "--q", qe, "--samples", "8192"]);
        let b = ess_norm_bracket(&d, p(pe), p(qe), &cfg(EngineConfig::default().seed, 8192)).unwrap();
        assert_eq!(v["lower"], json!(b.lower));
        assert_eq!(v["upper"], json!(b.upper));
        assert_eq!(v["regime"], json!(b.regime));
    }
    golden("ess_bracket_4_2", &ok(&["ess-bracket", "--series", "1+2^-s", "--p", "4", "--q", "2"]));
}

#[test]
fn op_norm_and_commutant_match_library() {
    let d = parse_series("1 + 2^-s - 0.5*6^-s").unwrap();
    let v = ok(&["op-norm", "--series", "1 + 2^-s - 0.5*6^-s", "--cutoff", "120"]);
    let a = matrix_of(&d, 2, 120).unwrap();
    assert_eq!(v["primes"], json!(2));
    assert_eq!(v["dim"], json!(a.dim()));
    assert_eq!(v["norm"], json!(truncated_norm(&a)));

    let v = ok(&["commutant-test", "--series", "1 + 2^-s - 0.5*6^-s", "--cutoff", "120"]);
    let r = commutant_test(&a.entries, 2, 120, 1e-12).unwrap();
    assert_eq!(v["commutes"], json!(true));
    assert_eq!(v["max_defect"], json!(r.max_defect));

    // A diagonal matrix that is not the identity fails against the shifts.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let dim = matrix_of(&d, 1, 16).unwrap().dim();
    let rows: Vec<Vec<Value>> = (0..dim)
        .map(|i| (0..dim).map(|j| json!({"re": if i == j { i as f64 } else { 0.0 }, "im": 0.0})).collect())
        .collect();
    std::fs::write(&path, serde_json::to_string(&rows).unwrap()).unwrap();
    let path = path.to_str().unwrap();
    let v = ok(&["commutant-test", "--matrix", path, "--primes", "1", "--cutoff", "16"]);
    assert_eq!(v["commutes"], json!(false));
}

#[test]
fn spectrum_commands_match_library() {
    let d = parse_series("2 + 2^-s").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("cloud.csv");
    let v = ok(&["spectrum", "--series", "2 + 2^-s", "--n-sigma", "20", "--n-t", "30", "--csv", csv.to_str().unwrap()]);
    let grid = HalfPlaneGrid { n_sigma: 20, n_t: 30, ..HalfPlaneGrid::default() };
    let r = spectrum_cloud(&d, &grid).unwrap();
    assert_eq!(v["kind"], json!("full"));
    assert_eq!(v["hull_bound"], json!(r.hull_bound));
    assert_eq!(v["points"], json!(r.points.len()));
    assert_eq!(v["closed"], json!(true));
    let body = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = body.lines().collect();
    assert_eq!(rows[0], "source,re,im");
    assert_eq!(rows.len(), r.points.len() + 1);
    let first: Vec<f64> = rows[1].split(',').skip(1).map(|x| x.parse().unwrap()).collect();
    assert_eq!(Complex64::new(first[0], first[1]), r.points[0]);

    let v = ok(&["ap-spectrum", "--series", "2 + 2^-s", "--n-t", "5000", "--torus-resolution", "64"]);
    let spec = BoundarySpec { n_t: 5000, torus_resolution: Some(64), ..BoundarySpec::default() };
    let r = approximate_spectrum_cloud(&d, &spec, &EngineConfig::default()).unwrap();
    assert_eq!(v["kind"], json!("approximate"));
    assert_eq!(v["hull_bound"], json!(r.hull_bound));
    assert_eq!(v["cross_distance"], json!(r.cross_distance));
}

#[test]
fn closed_range_matches_library() {
    let d = parse_series("2 + 2^-s").unwrap();
    let v = ok(&["closed-range", "--series", "2 + 2^-s", "--lambda", "(0.5+0.5i)", "--t-count", "65536"]);
    let rc = RangeConfig { t_count: 65536, ..RangeConfig::default() };
    let cert = closed_range_certificate(&d, Complex64::new(0.5, 0.5), &rc, &EngineConfig::default()).unwrap();
    assert_eq!(v, json!(cert));
    golden("closed_range", &v);
}

#[test]
fn fejer_matches_library() {
    let v = ok(&["fejer", "--series", "1 + 2^-s + 4^-s + 8^-s - 6^-s", "--n", "2"]);
    let f = bohr_lift(&parse_series("1 + 2^-s + 4^-s + 8^-s - 6^-s").unwrap()).unwrap();
    let smoothed = fejer_apply(&f, &FejerSpec::new(2, f.nvars())).unwrap();
    assert_eq!(v["series"], json!(bohr_transform(&smoothed).unwrap()));
    assert_eq!(v["torus"], json!(smoothed));
    golden("fejer", &v);
}

#[test]
fn extremal_matches_library() {
    let v = ok(&["extremal", "--z", "0.5,(0.1+0.2i)", "--p", "2", "--degree", "12"]);
    let z = vec![Complex64::new(0.5, 0.0), Complex64::new(0.1, 0.2)];
    let spec = ExtremalSpec::new(z.clone(), p("2")).unwrap();
    let f = extremal_function(&spec, 12).unwrap();
    assert_eq!(v["poly"], json!(f));
    assert_eq!(v["norm"], json!(torus_norm(&f, &p("2"), &EngineConfig::default()).unwrap()));
    assert_eq!(v["value"], json!(f.eval(&z).unwrap().norm()));
    assert_eq!(v["target"], json!(cg_factor(&z, &p("2"))));
    assert_eq!(v["spec"]["z"][1], json!({"re": 0.1, "im": 0.2}));
}

#[test]
fn errors_are_reported_as_json() {
    let (v, code) = dirimul(&["norm", "--series", "1 + 0^-s"]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("at 4"), "{v}");
    let (v, code) = dirimul(&["hinf"]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("--series"));
}

#[test]
fn pretty_keeps_json_on_stdout() {
    let out =
        Command::new(env!("CARGO_BIN_EXE_dirimul")).args(["norm", "--series", "1+2^-s", "--pretty"]).output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["value"], json!(2f64.sqrt()));
    assert!(String::from_utf8(out.stderr).unwrap().contains("value"));
}
