use std::path::{Path, PathBuf};
use std::process::Command;

use clap::Parser;
use igt_cli::{run, Cli};
use serde_json::Value;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn invoke(args: &[&str]) -> (Value, i32) {
    let cli = Cli::try_parse_from(std::iter::once("igt").chain(args.iter().copied())).unwrap();
    let out = run(&cli).unwrap();
    (serde_json::from_str(&out.stdout).unwrap(), out.code)
}

fn binary(args: &[&str], seed_env: Option<&str>) -> (String, String, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_igt"));
    cmd.args(args).env_remove("IGT_SEED");
    if let Some(s) = seed_env {
        cmd.env("IGT_SEED", s);
    }
    let out = cmd.output().unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let p = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn check_reports_orders() {
    let (v, code) = invoke(&["check", &fixture("77b.job")]);
    assert_eq!(code, 0);
    let r = &v["report"];
    assert_eq!(r["order"], 768);
    assert_eq!(r["projective_order"], 384);
    assert_eq!(r["scalar_kernel_order"], 2);
    assert_eq!(r["small_group_id"], serde_json::json!([384, 5602]));
    assert_eq!(r["convention"], "row");
    for (job, order) in [
        ("s3.job", 6),
        ("c6.job", 6),
        ("q8.job", 8),
        ("sl23.job", 24),
    ] {
        assert_eq!(
            invoke(&["check", &fixture(job)]).0["report"]["order"],
            order,
            "{job}"
        );
    }
}

#[test]
fn s3_character_table() {
    let (v, _) = invoke(&["char-table", &fixture("s3.job")]);
    let r = &v["report"];
    let chars = r["characters"].as_array().unwrap();
    assert_eq!(chars.len(), 3);
    assert_eq!(r["classes"].as_array().unwrap().len(), 3);
    assert!(chars
        .iter()
        .all(|c| c["values"].as_array().unwrap().len() == 3));
    let degrees: Vec<u64> = chars
        .iter()
        .map(|c| c["degree"].as_u64().unwrap())
        .collect();
    assert_eq!(degrees.iter().map(|d| d * d).sum::<u64>(), 6);
    assert_eq!(r["orthogonality"], true);
    // The permutation module is 1 + the 2-dimensional irreducible.
    let dec: Vec<u64> = r["representation_decomposition"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(dec.iter().sum::<u64>(), 2);
}

#[test]
fn families_77b() {
    let (v, _) = invoke(&[
        "families",
        "--degree",
        "2",
        "--codim",
        "3",
        "--locate",
        &fixture("77b_ideal.txt"),
        &fixture("77b.job"),
    ]);
    let r = &v["report"];
    assert_eq!(r["module_dimension"], 21);
    let fams = r["families"].as_array().unwrap();
    assert_eq!(fams.len(), 1);
    assert_eq!(fams[0]["dimension"], 1);
    let samples = fams[0]["samples"].as_array().unwrap();
    assert_eq!(
        samples
            .iter()
            .map(|s| s["label"].as_str().unwrap())
            .collect::<Vec<_>>(),
        ["e0", "e1", "ones"]
    );
    assert!(samples.iter().all(|s| s["invariant"] == true));
    let pencil = &fams[0]["pencil"];
    assert_eq!(pencil["degenerate"], serde_json::json!([[1, 0], [0, 1]]));
    assert_eq!(pencil["located"]["member"], true);
    assert_eq!(pencil["located"]["lambda"], "-1/2*z^6");
}

#[test]
fn families_on_a_rational_job() {
    let (v, _) = invoke(&[
        "families",
        "--degree",
        "2",
        "--codim",
        "1",
        &fixture("s3.job"),
    ]);
    let r = &v["report"];
    assert_eq!(r["module_dimension"], 6);
    assert_eq!(r["families"].as_array().unwrap().len(), 1);
    assert!(r["families"][0]["pencil"].is_object());
}

#[test]
fn symplectic_77b() {
    let (v, _) = invoke(&[
        "symplectic",
        "--ideal",
        &fixture("77b_ideal.txt"),
        &fixture("77b.job"),
    ]);
    let r = &v["report"];
    assert_eq!(r["symplectic_order"], 192);
    assert_eq!(r["index"], 2);
    assert_eq!(r["determinant_ratio_values"], 2);
    let inside: Vec<bool> = r["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["symplectic"].as_bool().unwrap())
        .collect();
    assert_eq!(inside, [true, true, true, true, false]);
    assert!(r["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn discriminant_conventions() {
    let (half, _) = invoke(&["discriminant", "--ideal", &fixture("77b_ideal.txt")]);
    let (coef, _) = invoke(&[
        "discriminant",
        "--ideal",
        &fixture("77b_ideal.txt"),
        "--gram",
        "coefficient",
    ]);
    assert_eq!(half["report"]["degree"], 6);
    assert_eq!(
        coef["report"]["discriminant"],
        "y1^5*y2 - y1^4*y3^2 + 2*y1^3*y2^3 + y1*y2^5 - 7/4*y1*y2*y3^4 - y2^4*y3^2 - 1/4*y3^6"
    );
    assert_ne!(
        half["report"]["discriminant"],
        coef["report"]["discriminant"]
    );
}

#[test]
fn pure_tensor_files() {
    assert_eq!(
        invoke(&["pure-tensor", "--file", &fixture("pure_e01.toml")]).0["report"]["decomposable"],
        true
    );
    assert_eq!(
        invoke(&["pure-tensor", "--file", &fixture("pure_sum.toml")]).0["report"]["decomposable"],
        false
    );
}

#[test]
fn pfr_on_q8() {
    let (v, _) = invoke(&["pfr", "--dim", "2", &fixture("q8.job")]);
    let r = &v["report"];
    assert_eq!(r["count"], 1);
    assert_eq!(r["kernel_order"], 2);
    assert_eq!(r["schur_cover_check"], "passed");
    assert_eq!(r["representation_is_p_projective"], true);
}

#[test]
fn output_is_deterministic_for_a_seed() {
    let args = [
        "--seed",
        "5",
        "families",
        "--degree",
        "2",
        "--codim",
        "3",
        &fixture("77b.job"),
    ];
    let (a, _, ca) = binary(&args, None);
    let (b, _, cb) = binary(&args, None);
    assert_eq!((ca, cb), (0, 0));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["seed"], 5);
}

#[test]
fn seed_from_environment_and_flag() {
    let job = fixture("s3.job");
    let (out, _, _) = binary(&["check", &job], Some("42"));
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["seed"], 42);
    let (out, _, _) = binary(&["--seed", "7", "check", &job], Some("42"));
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["seed"], 7);
    let (out, _, _) = binary(&["check", &job], None);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["seed"], 0);
}

#[test]
fn exit_codes() {
    let (_, err, code) = binary(&["check", "/nonexistent.job"], None);
    assert_eq!(code, 1);
    let e: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(e["error"]["kind"], "input_error");

    let (_, err, code) = binary(&["--cap", "100", "check", &fixture("77b.job")], None);
    assert_eq!(code, 2);
    assert_eq!(
        serde_json::from_str::<Value>(err.trim()).unwrap()["error"]["kind"],
        "cap_exceeded"
    );

    let wrong = std::fs::read_to_string(fixture("s3.job"))
        .unwrap()
        .replace("expected_order = 6", "expected_order = 7");
    let (out, _, code) = binary(
        &[
            "check",
            scratch("wrong_order.job", &wrong).to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(code, 3);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["report"]["expectations"][0]["ok"], false);

    let bad = scratch(
        "bad.job",
        "conductor = 1\n[group]\nkind = \"permutation\"\npermutations = [[1, 1]]\n",
    );
    assert_eq!(binary(&["check", bad.to_str().unwrap()], None).2, 1);
    let unknown = scratch(
        "unknown.job",
        "conductor = 1\ncolour = 3\n[group]\nkind = \"permutation\"\npermutations = [[2, 1]]\n",
    );
    assert_eq!(binary(&["check", unknown.to_str().unwrap()], None).2, 1);

    // An ideal that is not invariant is a precondition failure.
    let ideal = scratch("x0sq.txt", "conductor = 24\nvariables = 6\nx0^2\n");
    assert_eq!(
        binary(
            &[
                "symplectic",
                "--ideal",
                ideal.to_str().unwrap(),
                &fixture("77b.job")
            ],
            None
        )
        .2,
        1
    );
}

#[test]
fn timing_is_opt_in() {
    let (v, _) = invoke(&["check", &fixture("c6.job")]);
    assert!(v.get("timing_ms").is_none());
    let (v, _) = invoke(&["--timing", "check", &fixture("c6.job")]);
    assert!(v["timing_ms"].is_u64());
}
