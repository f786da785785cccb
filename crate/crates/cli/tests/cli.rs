use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tdeform_core::rational::{int, rat};
use tdeform_core::{Poly, Rational, TruncatedSeries};

fn tdeform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tdeform"))
        .args(args)
        .env_remove("TDEFORM_ORDER")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = tdeform(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn fails(args: &[&str], code: i32) -> Value {
    let out = tdeform(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}");
    assert!(out.stdout.is_empty());
    serde_json::from_slice(&out.stderr).expect("error body is JSON")
}

fn series(text: &str) -> TruncatedSeries {
    serde_json::from_str(text).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn bernoulli_moments(p: &Rational, order: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(order, |k| if k == 0 { int(1) } else { p.clone() })
}

#[test]
fn bernoulli_conv_gives_binomial_moments() {
    let dir = tempfile::tempdir().unwrap();
    let b = serde_json::to_string(&bernoulli_moments(&rat(1, 2), 6)).unwrap();
    let a = write(dir.path(), "a.json", &b);
    let b = write(dir.path(), "b.json", &b);
    let got = series(&ok(&["conv", "--t", "-1", &a, &b]));
    // Bin(2, 1/2): E[S^k] = 1/2 + 2^k / 4 for k >= 1.
    let expected = TruncatedSeries::from_fn(6, |k| {
        if k == 0 {
            int(1)
        } else {
            rat(1, 2) + rat(1 << k, 4)
        }
    });
    assert_eq!(got, expected);
}

#[test]
fn hermite_at_minus_one_gives_double_factorials() {
    let got = series(&ok(&[
        "series", "--family", "hermite", "--t", "-1", "--order", "8",
    ]));
    let expected = TruncatedSeries::from_ints(&[1, 0, 1, 0, 3, 0, 15, 0, 105], 8).unwrap();
    assert_eq!(got, expected);
}

#[test]
fn laguerre_cumulants_are_constant() {
    let dir = tempfile::tempdir().unwrap();
    let l = ok(&[
        "series", "--family", "laguerre", "--lambda", "3", "--t", "1/2", "--order", "4",
    ]);
    let path = write(dir.path(), "L.json", &l);
    let kappas: Vec<String> =
        serde_json::from_str(&ok(&["cumulants", "--t", "1/2", &path])).unwrap();
    assert_eq!(kappas, vec!["3"; 4]);
}

#[test]
fn outputs_reparse_as_inputs() {
    let l = ok(&[
        "series", "--family", "laguerre", "--lambda", "5/3", "--t", "-7/2", "--order", "6",
    ]);
    assert_eq!(serde_json::to_string(&series(&l)).unwrap(), l.trim_end());

    let kappas = ok(&["cumulants", "--t", "-7/2", &l]);
    let back = ok(&["from-cumulants", "--t", "-7/2", kappas.trim_end()]);
    assert_eq!(series(&back), series(&l));

    let f = serde_json::to_string(&Poly::from_ints(&[1, -3, 2]).unwrap()).unwrap();
    let g = serde_json::to_string(&Poly::from_ints(&[1, 0, -1]).unwrap()).unwrap();
    let h = ok(&["finfree-conv", &f, &g]);
    let h_poly: Poly = serde_json::from_str(&h).unwrap();
    assert_eq!(h_poly.degree(), 2);
    let applied: Poly = serde_json::from_str(&ok(&["finfree-generator", h.trim_end()])).unwrap();
    assert_eq!(applied.degree(), 2);

    let report: Value = serde_json::from_str(&ok(&[
        "apply-generator",
        "--family",
        "hermite",
        "--t",
        "2/3",
        &l,
    ]))
    .unwrap();
    series(&report["eta"].to_string());
    series(&report["result"].to_string());
}

#[test]
fn finite_mode_flag_and_dconv_agree() {
    let a = "{\"order\":4,\"coeffs\":[\"1\",\"2\",\"1/3\",\"0\",\"0\"]}";
    let b = "{\"order\":4,\"coeffs\":[\"1\",\"-1\",\"5\",\"0\",\"0\"]}";
    assert_eq!(
        ok(&["conv", "--t", "d:2", a, b]),
        ok(&["dconv", "--d", "2", a, b])
    );
}

#[test]
fn order_override_truncates_inputs() {
    let h = ok(&["series", "--family", "hermite", "--t", "-1", "--order", "8"]);
    let cut = series(&ok(&["phi", "--t", "-1", "--order", "3", &h]));
    assert_eq!(cut.order(), 3);
    fails(&["phi", "--t", "-1", "--order", "9", &h], 2);

    let out = Command::new(env!("CARGO_BIN_EXE_tdeform"))
        .args(["series", "--family", "hermite", "--t", "-1"])
        .env("TDEFORM_ORDER", "4")
        .output()
        .unwrap();
    assert_eq!(series(&String::from_utf8(out.stdout).unwrap()).order(), 4);
}

#[test]
fn csv_carries_exact_and_decimal_columns() {
    let csv = ok(&[
        "series", "--family", "binomial", "--lambda", "1/3", "--t", "-1", "--order", "2",
        "--format", "csv",
    ]);
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines[0], "k,value,value_decimal");
    assert_eq!(lines[2], "1,1/3,3.33333333333e-1");

    let l = ok(&[
        "series", "--family", "laguerre", "--lambda", "2", "--t", "-1", "--order", "4",
    ]);
    let seq = ok(&[
        "lln",
        "--t",
        "-1",
        "--ms",
        "1,2,4,8",
        "--sequential",
        "--format",
        "csv",
        &l,
    ]);
    let par = ok(&["lln", "--t", "-1", "--ms", "1,2,4,8", "--format", "csv", &l]);
    assert_eq!(seq, par);
    assert!(seq.starts_with("m,n,error,error_decimal\n"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("h.json");
    let printed = ok(&[
        "series",
        "--family",
        "hermite",
        "--t",
        "1/2",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert!(printed.is_empty());
    assert_eq!(series(&fs::read_to_string(target).unwrap()).order(), 8);
}

#[test]
fn computation_errors_exit_one() {
    let shifted = "{\"order\":2,\"coeffs\":[\"2\",\"1\",\"1\"]}";
    let err = fails(&["cumulants", "--t", "1/2", shifted], 1);
    assert_eq!(err["error"], "domain");
    assert!(err["message"].is_string());

    let err = fails(
        &[
            "series", "--family", "laguerre", "--lambda", "0", "--t", "2/3",
        ],
        1,
    );
    assert_eq!(err["error"], "domain");

    let not_standard = "{\"order\":3,\"coeffs\":[\"1\",\"1\",\"0\",\"0\"]}";
    let err = fails(&["clt", "--t", "-1", "--ms", "1,2", not_standard], 1);
    assert_eq!(err["error"], "precondition");

    let a = "{\"order\":2,\"coeffs\":[\"1\",\"0\",\"0\"]}";
    let b = "{\"order\":3,\"coeffs\":[\"1\",\"0\",\"0\",\"0\"]}";
    assert_eq!(
        fails(&["conv", "--t", "5/2", a, b], 1)["error"],
        "truncation_mismatch"
    );
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write(dir.path(), "broken.json", "{\"order\":2,\"coeffs\":[\"1\",");
    assert_eq!(
        fails(&["cumulants", "--t", "1/2", &broken], 2)["error"],
        "parse"
    );

    let bad_rational = write(
        dir.path(),
        "bad.json",
        "{\"order\":1,\"coeffs\":[\"1\",\"1/0\"]}",
    );
    assert_eq!(fails(&["powersums", &bad_rational], 2)["error"], "parse");

    let missing = dir.path().join("nope.json");
    assert_eq!(
        fails(&["powersums", missing.to_str().unwrap()], 2)["error"],
        "io"
    );

    assert_eq!(
        fails(
            &[
                "conv",
                "{\"order\":0,\"coeffs\":[\"1\"]}",
                "{\"order\":0,\"coeffs\":[\"1\"]}"
            ],
            2
        )["error"],
        "usage"
    );

    for args in [
        &["frobnicate"][..],
        &["series", "--family", "hermite", "--t", "x/y"][..],
    ] {
        let out = tdeform(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}
