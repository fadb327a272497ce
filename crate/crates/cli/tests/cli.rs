//! End-to-end runs of the `cochar` binary: output formats, determinism and
//! exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

use cochar_core::catalog::BUNDLED_CATALOG;
use cochar_core::hilbert::mult_uk;
use cochar_core::partitions::partitions_up_to;

fn cochar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cochar"))
        .args(args)
        .env_remove("COCHAR_CATALOG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines().skip(1).collect()
}

fn corrupted_catalog(tag: &str) -> PathBuf {
    let text = BUNDLED_CATALOG.replacen("[\"19\", [1, 1]]", "[\"18\", [1, 1]]", 1);
    assert_ne!(text, BUNDLED_CATALOG);
    let path = std::env::temp_dir().join(format!("cochar-corrupt-{tag}-{}.json", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn hilbert_of_free_commutative_algebra() {
    let o = cochar(&["hilbert", "--p", "1", "--q", "0", "--d", "2", "--deg", "2", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("exponent,coeff"));
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.ends_with(",1")));
    assert_eq!(rows[0], "\"0,0\",1");
    assert_eq!(rows[1], "\"1,0\",1");
}

#[test]
fn hilbert_in_one_variable() {
    let o = cochar(&["hilbert", "--p", "0", "--q", "1", "--d", "1", "--deg", "4"]);
    assert_eq!(code(&o), 0);
    let rows: Vec<String> = data_rows(&stdout(&o)).into_iter().map(String::from).collect();
    assert_eq!(rows, ["\"0\",1", "\"1\",1", "\"2\",1", "\"3\",1", "\"4\",1"]);
}

#[test]
fn output_is_stable_across_runs_and_threads() {
    let args = ["hilbert", "--p", "1", "--q", "1", "--d", "3", "--deg", "6"];
    let a = cochar(&args);
    let b = cochar(&args);
    let mut single = args.to_vec();
    single.extend(["--threads", "1"]);
    let c = cochar(&single);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert_eq!(data_rows(&stdout(&a)).len(), 84);
}

#[test]
fn table_matches_power_of_polynomial_algebra() {
    let o = cochar(&["table", "--p", "2", "--q", "0", "--d", "2", "--deg", "8"]);
    assert_eq!(code(&o), 0);
    let m = mult_uk(2, 2, 8).unwrap();
    let want: Vec<String> = partitions_up_to(8, 2)
        .iter()
        .map(|l| {
            let parts: Vec<String> = l.parts().iter().map(u32::to_string).collect();
            format!("\"{}\",{}", parts.join(","), m.get(l))
        })
        .collect();
    assert_eq!(data_rows(&stdout(&o)), want);
}

#[test]
fn table_for_two_by_two_upper_triangular() {
    let o = cochar(&["table", "--p", "0", "--q", "1", "--d", "2", "--deg", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "lambda,m\n\"\",1\n\"1\",1\n\"2\",1\n\"1,1\",1\n");
}

#[test]
fn empty_partition_has_multiplicity_one() {
    for (p, q) in [("1", "1"), ("2", "1"), ("0", "2")] {
        let o = cochar(&["table", "--p", p, "--q", q, "--d", "3", "--deg", "5"]);
        assert_eq!(data_rows(&stdout(&o))[0], "\"\",1");
    }
}

#[test]
fn json_round_trips_byte_for_byte() {
    for cmd in ["hilbert", "table"] {
        let o = cochar(&[cmd, "--p", "1", "--q", "1", "--d", "2", "--deg", "5", "--format", "json"]);
        assert_eq!(code(&o), 0);
        let text = stdout(&o);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&value).unwrap() + "\n", text);
        let meta = &value["meta"];
        assert_eq!(meta["p"], 1);
        assert_eq!(meta["cap"], 5);
        assert_eq!(meta["catalog_checksum"].as_str().unwrap().len(), 64);
        assert!(value["rows"].as_array().unwrap().len() > 1);
    }
}

#[test]
fn verify_equal_entries() {
    let o = cochar(&["verify", "--entry", "f2", "--d", "4", "--deg", "10"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("EQUAL up to degree 10"));
    let o = cochar(&["verify", "--entry", "R03_2var", "--d", "2", "--deg", "20"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn verify_reports_corrupted_catalog() {
    let path = corrupted_catalog("flag");
    let o = cochar(&["verify", "--entry", "R02_2var", "--d", "2", "--deg", "12", "--catalog", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("MISMATCH at lambda=(2,1)"), "{}", stdout(&o));
    std::fs::remove_file(path).ok();
}

#[test]
fn catalog_path_from_environment() {
    let path = corrupted_catalog("env");
    let o = Command::new(env!("CARGO_BIN_EXE_cochar"))
        .args(["verify", "--entry", "R02_2var", "--d", "2", "--deg", "12"])
        .env("COCHAR_CATALOG", &path)
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    std::fs::remove_file(path).ok();
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&cochar(&["verify", "--entry", "nope", "--d", "2", "--deg", "4"])), 2);
    assert_eq!(code(&cochar(&["hilbert", "--p", "0", "--q", "0", "--d", "2", "--deg", "4"])), 2);
    assert_eq!(code(&cochar(&["hilbert", "--p", "1"])), 2);
    assert_eq!(code(&cochar(&["table", "--p", "1", "--q", "0", "--d", "2", "--deg", "4", "--format", "xml"])), 2);
    assert_eq!(code(&cochar(&["verify", "--entry", "R02_2var", "--d", "3", "--deg", "4"])), 2);
    assert_eq!(code(&cochar(&["verify", "--entry", "f", "--d", "2", "--deg", "4", "--catalog", "/nonexistent"])), 2);
}

#[test]
fn asym_interpolates_catalog_entry() {
    let o = cochar(&["asym", "--entry", "R02_2var", "--mode", "interpolate"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("leading form: 1/720*(5*n1^3*n2^4 + 6*n1^2*n2^5 + 2*n1*n2^6)"), "{out}");
    assert!(out.contains("MATCH"));
}

#[test]
fn asym_pipeline_window_too_small_exits_four() {
    let o = cochar(&["asym", "--pipeline", "0,2", "--n1-start", "8", "--n2-start", "8", "--deg1", "3", "--deg2", "4"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("window"));
}

#[test]
fn asym_pipeline_matches_catalog_for_two_blocks() {
    let o = cochar(&["asym", "--pipeline", "0,2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("1/720*(5*n1^3*n2^4 + 6*n1^2*n2^5 + 2*n1*n2^6)"));
}

#[test]
fn asym_pipeline_for_four_blocks_differs_from_catalog() {
    // the recovered form has degree 17; the catalog form has degree 13
    let o = cochar(&["asym", "--pipeline", "0,4"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("286*n1^7*n2^10"), "{out}");
    assert!(out.contains("MISMATCH"));
}

#[test]
fn asym_ratio_table() {
    let o = cochar(&["asym", "--entry", "R11_Vd", "--mode", "ratio", "--points", "8,16,32"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert_eq!(out.matches("PASS").count(), 3);
    assert!(out.contains("1.220045"));
}

#[test]
fn asym_ratio_three_variables_needs_larger_samples() {
    let o = cochar(&["asym", "--entry", "R02_3var", "--mode", "ratio", "--points", "8,16,32"]);
    assert_eq!(code(&o), 1);
    let o = cochar(&["asym", "--entry", "R02_3var", "--mode", "ratio", "--points", "64,128,256,512"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn schur_prints_polynomial() {
    let o = cochar(&["schur", "--lambda", "2,1", "--d", "3"]);
    assert_eq!(code(&o), 0);
    let rows = data_rows(&stdout(&o)).len();
    assert_eq!(rows, 7);
    assert!(stdout(&o).contains("\"1,1,1\",2"));
}

#[test]
fn selftest_subset() {
    let o = cochar(&["selftest", "--criterion", "1,7"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("2/2 criteria passed"));
    assert_eq!(code(&cochar(&["selftest", "--criterion", "99"])), 2);
}
