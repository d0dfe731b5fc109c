use std::f64::consts::PI;

use braid_tau::cli::run;

struct Ran {
    code: i32,
    out: String,
    err: String,
}

fn cli(args: &[&str]) -> Ran {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("braid-tau").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Ran {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn csv_rows(out: &str) -> Vec<Vec<String>> {
    out.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn tau_window_one() {
    let r = cli(&["tau", "--window", "1"]);
    assert_eq!(r.code, 0);
    assert_eq!(
        r.out,
        "n,coeff\n-1,-1.00000000000e0\n0,0.00000000000e0\n1,1.00000000000e0\n"
    );
}

#[test]
fn tau_rows_are_alternating_harmonic() {
    let r = cli(&["tau", "--window", "5", "--precision", "17"]);
    for row in csv_rows(&r.out) {
        let n: i64 = row[0].parse().unwrap();
        let c = num(&row[1]);
        let expected = match n {
            0 => 0.0,
            n if n > 0 => (-1f64).powi(n as i32 + 1) / n as f64,
            n => -(-1f64).powi(-n as i32 + 1) / -n as f64,
        };
        assert_eq!(c, expected, "n = {n}");
    }
}

#[test]
fn zero_window_is_a_usage_error() {
    for args in [
        &["tau", "--window", "0"][..],
        &["parseval", "--j", "1", "--k", "1", "--window", "0"],
        &["reconstruct", "--k", "1", "--window", "0"],
    ] {
        let r = cli(args);
        assert_eq!(r.code, 1, "{args:?}");
        assert!(r.out.is_empty());
        assert!(!r.err.is_empty());
    }
}

#[test]
fn bad_arguments_exit_one() {
    assert_eq!(cli(&["frobnicate"]).code, 1);
    assert_eq!(cli(&["cn", "--n", "1"]).code, 1);
    assert_eq!(cli(&["verify-exp", "--terms", "x"]).code, 1);
    assert_eq!(cli(&["verify-exp", "--probes", "3..1"]).code, 1);
    assert_eq!(cli(&["reconstruct", "--k", "1", "--terms", "-3"]).code, 1);
    assert_eq!(cli(&["tau", "--precision", "0"]).code, 1);
}

#[test]
fn help_exits_zero() {
    let r = cli(&["--help"]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("verify-exp"));
    for sub in ["tau", "cn", "verify-exp", "parseval", "reconstruct"] {
        assert_eq!(cli(&[sub, "--help"]).code, 0, "{sub}");
    }
}

#[test]
fn cn_closed_constants() {
    let r = cli(&["cn", "--n", "1", "--m", "2", "--precision", "17"]);
    assert_eq!(r.code, 0);
    let row = &csv_rows(&r.out)[0];
    assert_eq!(row[2], "closed");
    assert_eq!(row[3], "");
    assert_eq!(num(&row[4]), 2.0);

    let r = cli(&["cn", "--n", "0", "--m", "2", "--precision", "17"]);
    let row = &csv_rows(&r.out)[0];
    assert!((num(&row[4]) + PI * PI / 3.0).abs() < 1e-14);

    let r = cli(&["cn", "--n", "-1", "--m", "3", "--precision", "17"]);
    let row = &csv_rows(&r.out)[0];
    // (iθ)^3 is purely imaginary, so c_{-n} = -conj(c_n)
    assert!((num(&row[4]) + (6.0 - PI * PI)).abs() < 1e-13);
}

#[test]
fn cn_quad_constant_function() {
    let r = cli(&["cn", "--n", "4", "--m", "0", "--method", "quad"]);
    assert_eq!(r.code, 0);
    let row = &csv_rows(&r.out)[0];
    assert_eq!(row[2], "quad");
    assert!(num(&row[4]).abs() < 1e-14 && num(&row[5]).abs() < 1e-14);

    let r = cli(&["cn", "--n", "0", "--m", "0", "--method", "quad"]);
    assert!((num(&csv_rows(&r.out)[0][4]) - 1.0).abs() < 1e-14);
}

#[test]
fn cn_conv_approaches_closed_form() {
    let r = cli(&["cn", "--n", "1", "--m", "2", "--method", "conv", "--window", "512"]);
    assert_eq!(r.code, 0);
    let row = &csv_rows(&r.out)[0];
    assert_eq!(row[3], "512");
    let err = (num(&row[4]) - 2.0).abs();
    assert!(err > 0.0 && err < 2.0 / 512.0 * 1.01, "{err}");
}

#[test]
fn verify_exp_header_and_zero_terms() {
    let r = cli(&["verify-exp", "--windows", "16", "--terms", "0"]);
    assert_eq!(r.code, 0);
    assert_eq!(
        r.out.lines().next().unwrap(),
        "N,M,err_c1,err_off,l2_err,discarded_mass"
    );
    // exp truncated to the constant term is δ_0; distance to δ_1 is √2 on the probes
    let row = &csv_rows(&r.out)[0];
    assert_eq!(row[..2], ["16", "0"]);
    assert!((num(&row[4]) - 2f64.sqrt()).abs() < 1e-10);
    assert_eq!(num(&row[5]), 0.0);
}

#[test]
fn verify_exp_single_window_passes() {
    let r = cli(&["verify-exp", "--windows", "64"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(csv_rows(&r.out).len(), 1);
}

#[test]
fn verify_exp_trend_across_windows() {
    let r = cli(&["verify-exp", "--windows", "64,256", "--terms", "auto"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let rows = csv_rows(&r.out);
    assert_eq!(rows.len(), 2);
    assert!(num(&rows[1][2]) < num(&rows[0][2]));
}

#[test]
fn parseval_cases() {
    let r = cli(&["parseval", "--j", "1", "--k", "1", "--window", "100"]);
    assert_eq!(r.code, 0);
    let row = &csv_rows(&r.out)[0];
    let gap = num(&row[7]);
    assert!(gap <= 0.02 && gap > 0.019);
    assert_eq!(num(&row[8]), 0.02);

    let r = cli(&["parseval", "--j", "0", "--k", "0", "--window", "3"]);
    let row = &csv_rows(&r.out)[0];
    assert_eq!(num(&row[7]), 0.0);

    // odd j + k: right-hand side vanishes and there is no tabulated bound
    let r = cli(&["parseval", "--j", "1", "--k", "2", "--window", "50"]);
    assert_eq!(r.code, 0);
    let row = &csv_rows(&r.out)[0];
    assert_eq!(num(&row[5]), 0.0);
    assert_eq!(row[8], "");
}

#[test]
fn reconstruct_identity_is_exact() {
    let r = cli(&["reconstruct", "--k", "0", "--window", "32"]);
    assert_eq!(r.code, 0);
    for row in csv_rows(&r.out) {
        assert_eq!(num(&row[4]), 0.0);
    }
}

#[test]
fn reconstruct_q_matches_verify_exp() {
    let a = cli(&["reconstruct", "--k", "1", "--window", "256", "--probes", "1", "--precision", "17"]);
    let b = cli(&["verify-exp", "--windows", "256", "--probes", "1", "--precision", "17"]);
    assert_eq!(a.code, 0);
    assert_eq!(b.code, 0);
    assert_eq!(csv_rows(&a.out)[0][4], csv_rows(&b.out)[0][2]);
}

#[test]
fn reconstruct_inverse_mirrors_q() {
    let a = cli(&["reconstruct", "--k", "1", "--window", "128", "--probes", "1", "--precision", "17"]);
    let b = cli(&["reconstruct", "--k", "-1", "--window", "128", "--probes=-1", "--precision", "17"]);
    assert_eq!(csv_rows(&a.out)[0][4], csv_rows(&b.out)[0][4]);
}

#[test]
fn reconstruct_probe_outside_cap() {
    let r = cli(&["reconstruct", "--k", "1", "--window", "4", "--probes", "0..9"]);
    assert_eq!(r.code, 1);
}

#[test]
fn json_output_shape() {
    let r = cli(&["--format", "json", "reconstruct", "--k", "2", "--window", "64"]);
    assert_eq!(r.code, 0);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["command"], "reconstruct");
    assert_eq!(v["summary"]["k"], 2);
    assert_eq!(v["summary"]["cap"], 128);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 17);
    assert_eq!(rows[0]["n"], -8);

    let r = cli(&["tau", "--window", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert!(v.get("summary").is_none());
    assert_eq!(v["rows"][3]["coeff"], 1.0);
    assert_eq!(v["rows"][4]["coeff"], -0.5);
}

#[test]
fn output_is_deterministic() {
    let args = ["verify-exp", "--windows", "32,64,128", "--precision", "17"];
    let first = cli(&args).out;
    for _ in 0..3 {
        assert_eq!(cli(&args).out, first);
    }
}
