use std::process::{Command, Output};

fn pdfill(args: &[&str], budget: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pdfill"));
    cmd.args(args).env_remove("PDFILL_BUDGET");
    if let Some(b) = budget {
        cmd.env("PDFILL_BUDGET", b);
    }
    cmd.output().unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = pdfill(args, None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn complex_outputs() {
    assert_eq!(json(&["complex", "Sigma2", "Z", "--euler"])["euler"], -2);
    assert_eq!(
        json(&["complex", "F2", "Z", "--dualize"])["ranks"],
        serde_json::json!([0, 2, 1])
    );
    let twisted = json(&["complex", "Klein", "Z", "--twist", "a:-1,b:1"]);
    assert_eq!(
        twisted["differentials"][0]["rows"],
        serde_json::json!([["1 + a"], ["1 - b"]])
    );
    let h = json(&["complex", "Klein", "Z", "--homology", "Q"]);
    assert_eq!(h["homology"]["dims"], serde_json::json!([1, 1, 0]));
}

#[test]
fn sweep_outputs() {
    assert_eq!(
        json(&["fill", "Z^2", "Z", "--radius", "4", "--max-word", "12"])["max_ratio"],
        "3/4"
    );
    assert_eq!(
        json(&["fill", "Sigma2", "Z", "--radius", "5", "--max-word", "8"])["max_ratio"],
        "1/8"
    );
    let f2 = json(&["fill", "F2", "Z", "--radius", "3"]);
    assert_eq!(
        (f2["corpus_size"].clone(), f2["kappa_hat"].clone()),
        (0.into(), "0/1".into())
    );
    assert_eq!(
        json(&["folner", "Z^2", "--family", "boxes:20"])["verdict"],
        "ratio-vanishing"
    );
    assert_eq!(
        json(&["folner", "F2", "--family", "connected:10"])["verdict"],
        "ratio-bounded-below"
    );
    assert_eq!(json(&["slim", "F2", "--radius", "5"])["delta_hat"], 0);
    let c = json(&["constants", "Sigma2", "--kappa", "1"]);
    assert_eq!(
        (c["N"].clone(), c["k"].clone(), c["m"].clone()),
        (8.into(), 65.into(), 8.into())
    );
}

#[test]
fn csv_series() {
    let out = pdfill(&["folner", "Klein", "--family", "balls:3", "--csv"], None);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "set_size,ratio\n1,1/1\n5,4/5\n13,7/13\n25,2/5\n"
    );
    let out = pdfill(&["slim", "Z^2", "--radius", "4", "--csv"], None);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "radius,delta_hat\n1,0\n2,1\n3,1\n4,2\n"
    );
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("pdfill-{}.json", std::process::id()));
    let out = pdfill(&["constants", "Klein", "--output", path.to_str().unwrap()], None);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(v["k"], 17);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str], budget| pdfill(args, budget).status.code();
    assert_eq!(code(&["complex", "Nope"], None), Some(2));
    assert_eq!(code(&["complex", "Klein", "Z", "--twist", "a:2"], None), Some(2));
    assert_eq!(code(&["complex", "Klein", "H", "--twist", "a:-1"], None), Some(2));
    assert_eq!(code(&["fill", "Z^2", "Q"], None), Some(2));
    assert_eq!(code(&["constants", "F2"], None), Some(2));
    assert_eq!(code(&["frobnicate"], None), Some(2));
    assert_eq!(code(&["folner", "F2", "--family", "connected:13"], None), Some(3));
    assert_eq!(code(&["slim", "Sigma2", "--radius", "6"], Some("1000")), Some(3));
    assert_eq!(code(&["fill", "Sigma2", "Z", "--radius", "5"], Some("50")), Some(3));
    assert_eq!(code(&["slim", "F2"], Some("lots")), Some(2));
}
