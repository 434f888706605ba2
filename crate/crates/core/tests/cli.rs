use std::process::{Command, Output};

fn qbounce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbounce")).args(args).output().expect("binary runs")
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows = rdr.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    (headers, rows)
}

fn column(headers: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let j = headers.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[j].parse().unwrap()).collect()
}

#[test]
fn ideal_levels_are_airy_zeros() {
    let out = qbounce(&["ideal", "--nmax", "5"]);
    assert!(out.status.success());
    let (h, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 5);
    let lambda = column(&h, &rows, "lambda");
    for (n, l) in lambda.iter().enumerate() {
        assert!((l - qbounce::airy::zero(n + 1).unwrap()).abs() < 1e-14);
    }
}

#[test]
fn effective_range_resonances_round_trip_through_csv() {
    let out = qbounce(&["resonances", "--method", "effrange", "--nmax", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (h, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    let e = column(&h, &rows, "E_ana");
    let e0 = column(&h, &rows, "E0");
    let shift = column(&h, &rows, "shift_ana");
    for i in 0..4 {
        assert!((e[i] - e0[i] - shift[i]).abs() < 1e-12);
        // perfect-mirror levels sit below the ideal ones by roughly mg Re a
        assert!(shift[i] < 0.0 && shift[i] > -1e-3);
    }
}

#[test]
fn json_and_csv_agree() {
    let csv_out = qbounce(&["poles", "--method", "effrange", "--nmax", "3"]);
    let json_out = qbounce(&["poles", "--method", "effrange", "--nmax", "3", "--format", "json"]);
    assert!(csv_out.status.success() && json_out.status.success());
    let (h, rows) = csv_rows(&String::from_utf8(csv_out.stdout).unwrap());
    let re = column(&h, &rows, "re_ana");
    let v: serde_json::Value = serde_json::from_slice(&json_out.stdout).unwrap();
    let json_rows = v["rows"].as_array().unwrap();
    assert_eq!(json_rows.len(), 3);
    for (r, x) in json_rows.iter().zip(&re) {
        assert_eq!(r["re_ana"].as_f64().unwrap(), *x);
        assert!(r["im_ana"].as_f64().unwrap() < 0.0);
    }
}

#[test]
fn writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reflect.csv");
    let out = qbounce(&["reflect", "--synthetic", "--points", "20", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let (h, rows) = csv_rows(&text);
    assert_eq!(h, ["k_per_m", "re_r", "im_r"]);
    assert_eq!(rows.len(), 20);
    let re = column(&h, &rows, "re_r");
    let im = column(&h, &rows, "im_r");
    assert!(re.iter().zip(&im).all(|(a, b)| a.hypot(*b) <= 1.0));
}

#[test]
fn langer_dump_spans_the_turning_point() {
    let out = qbounce(&["langer-dump", "--model", "v4", "--energy", "2.3", "--points", "40"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (h, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    let bz = column(&h, &rows, "bold_z");
    assert!(bz.windows(2).all(|w| w[1] > w[0]));
    assert!(bz[0] < 2.3 && *bz.last().unwrap() > 2.3);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["resonances", "--nmax", "0"][..],
        &["resonances", "--bogus"],
        &["resonances", "--preset", "gold"],
        &["langer-dump", "--points", "2"],
    ] {
        let out = qbounce(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error"));
    }
}

#[test]
fn numerical_failures_exit_3() {
    let out = qbounce(&["poles", "--model", "v4", "--method", "numeric", "--nmax", "1", "--mass", "1e-40"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error: NewtonDivergence"), "{err}");
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(qbounce(&["--help"]).status.code(), Some(0));
    assert_eq!(qbounce(&["scan", "--help"]).status.code(), Some(0));
}
