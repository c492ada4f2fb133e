use std::fs;

use pvq::cli::{run, EXIT_CONTRACT, EXIT_IO, EXIT_OK, EXIT_USAGE};

fn pvq(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("pvq").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn quantize_prints_the_pipeline() {
    let (code, out, _) = pvq(&["quantize", "0.6,0.8", "--k", "7"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("point: (3,4)"), "{out}");
    assert!(out.contains("index: 10 of 28"), "{out}");
    let (code, out, _) = pvq(&["quantize", "-0.6,0.8", "--k", "7", "--p", "1.3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("(-"), "{out}");
}

#[test]
fn quantize_warns_when_normalizing() {
    let (code, _, err) = pvq(&["quantize", "3,4", "--k", "7"]);
    assert_eq!(code, EXIT_OK);
    assert!(!err.is_empty());
}

#[test]
fn exit_codes() {
    assert_eq!(pvq(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(pvq(&["quantize", "0.6,0.8"]).0, EXIT_USAGE);
    assert_eq!(pvq(&["sweep", "--l", "2", "--k", "x"]).0, EXIT_USAGE);
    assert_eq!(pvq(&["quantize", "0,0", "--k", "3"]).0, EXIT_CONTRACT);
    assert_eq!(pvq(&["quantize", "0.6,0.8", "--k", "0"]).0, EXIT_CONTRACT);
    assert_eq!(pvq(&["quantize", "0.6,0.8", "--k", "3", "--p=-1"]).0, EXIT_CONTRACT);
    assert_eq!(pvq(&["quantize", "0.6,0.8", "--l", "3", "--k", "3"]).0, EXIT_CONTRACT);
    assert_eq!(pvq(&["sweep", "--l", "2", "--k", "3", "--p-min", "1.1"]).0, EXIT_CONTRACT);
    assert_eq!(pvq(&["heatmap", "--l-min", "1"]).0, EXIT_CONTRACT);
    assert_eq!(pvq(&["--help"]).0, EXIT_OK);
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("t.csv");
    let bad = bad.to_str().unwrap();
    let (code, _, err) = pvq(&["heatmap", "--l-max", "3", "--k-max", "2", "--samples", "10", "--out", bad]);
    assert_eq!(code, EXIT_IO);
    assert!(err.starts_with("error:"));
    assert_eq!(pvq(&["baselines", "--samples", "10", "--out", bad]).0, EXIT_IO);
    assert_eq!(pvq(&["optimize-lattice", "--k", "2", "--out", bad]).0, EXIT_IO);
}

#[test]
fn heatmap_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = |name: &str, serial: bool| {
        let path = dir.path().join(name).to_str().unwrap().to_string();
        let mut v = vec!["heatmap", "--l-max", "5", "--k-max", "4", "--samples", "300", "--seed", "7", "--out"]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>();
        v.push(path);
        if serial {
            v.push("--serial".into());
        }
        v
    };
    for (name, serial) in [("a.csv", false), ("b.csv", false), ("c.csv", true)] {
        let a = args(name, serial);
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        assert_eq!(pvq(&refs).0, EXIT_OK);
    }
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.csv")).unwrap());
    assert_eq!(a, fs::read(dir.path().join("c.csv")).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 1 + 4 * 4);
    assert!(text.starts_with("l,k,best_p,mse_radial,mse_best,pct,db,n_samples,seed\n2,1,"));
}

#[test]
fn sweep_writes_a_one_row_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let (code, out, _) =
        pvq(&["sweep", "--l", "2", "--k", "15", "--samples", "2000", "--out", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("best_p"), "{out}");
    let text = fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("2,15,"));
}

#[test]
fn baselines_to_stdout() {
    let (code, out, _) = pvq(&["baselines", "--l", "6", "--pvq-k", "1,3", "--samples", "500"]);
    assert_eq!(code, EXIT_OK);
    let names: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(names, ["sign", "sign_fitted_gain", "sign_max", "pvq", "pvq"]);
}

#[test]
fn single_step_lattice_leaves_corners_alone() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("k1");
    let (code, out, _) = pvq(&["optimize-lattice", "--k", "1", "--out", prefix.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("radial objective 1.2"), "{out}");
    let radial = fs::read(dir.path().join("k1_radial.csv")).unwrap();
    let opt = fs::read(dir.path().join("k1_optimized.csv")).unwrap();
    assert_eq!(radial, opt);
    assert!(String::from_utf8(radial).unwrap().starts_with("vertex_id,a,b,c\n0,"));
}
