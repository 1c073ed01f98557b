use spherolimb::cli::run;

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("spherolimb").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn catalog_human_ends_with_the_counts() {
    let (code, out, _) = call(&["catalog"]);
    assert_eq!(code, 0);
    assert_eq!(
        out.lines().last(),
        Some("73 symmetric / 5256 asymmetric / 5329 total")
    );
}

#[test]
fn catalog_csv_round_trips() {
    let (code, out, _) = call(&["catalog", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut reader = csv::Reader::from_reader(out.as_bytes());
    let headers = reader.headers().unwrap().clone();
    let rec = headers.iter().position(|h| h == "record").unwrap();
    let id = headers.iter().position(|h| h == "id").unwrap();
    let ids: Vec<String> = reader
        .records()
        .map(|r| r.unwrap())
        .filter(|r| &r[rec] == "variant")
        .map(|r| r[id].to_string())
        .collect();
    let expected: Vec<String> = spherolimb_core::catalog()
        .into_iter()
        .map(|d| d.id)
        .collect();
    assert_eq!(ids, expected);
}

#[test]
fn catalog_jsonl_round_trips() {
    let (_, out, _) = call(&["catalog", "--format", "jsonl"]);
    let values: Vec<serde_json::Value> = out
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let ids: Vec<&str> = values
        .iter()
        .filter(|v| v["record"] == "variant")
        .map(|v| v["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids.len(), 73);
    for id in ids {
        assert_eq!(
            id.parse::<spherolimb_core::VariantDescriptor>().unwrap().id,
            id
        );
    }
    let counts = values.iter().find(|v| v["record"] == "counts").unwrap();
    assert_eq!(counts["total_robots"], 5329);
}

#[test]
fn catalog_category_filter() {
    let (code, out, _) = call(&["catalog", "--category", "4$0", "--format", "jsonl"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.contains("\"variant\"")).count(), 4);
    let (code, _, err) = call(&["catalog", "--category", "7$0"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown category"));
}

#[test]
fn verify_single_rows() {
    let (code, out, _) = call(&["verify", "R^i R^i R^i", "--trials", "10"]);
    assert_eq!(code, 0);
    assert!(out.contains("10/10"));
    let (code, out, _) = call(&["verify", "R R^i R^i R^i", "--trials", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("REDUNDANT"));
    assert!(out.contains("twist rank below joint count"));
    let (code, _, err) = call(&["verify", "R R R"]);
    assert_eq!(code, 2);
    assert!(err.contains("not a row"));
}

#[test]
fn verify_all_is_reproducible() {
    let a = call(&[
        "verify", "--all", "--trials", "2", "--seed", "3", "--format", "csv",
    ]);
    let b = call(&[
        "verify", "--all", "--trials", "2", "--seed", "3", "--format", "csv",
    ]);
    assert_eq!(a.0, 0);
    assert_eq!(a, b);
    assert_eq!(a.1.lines().count(), 74);
}

#[test]
fn analyze_reports_and_checks() {
    let (code, out, _) = call(&["analyze", &data("rrrpp.toml")]);
    assert_eq!(code, 0);
    assert!(out.contains("necessary condition: holds"));
    assert!(out.contains("overall PASS"));

    let (code, out, _) = call(&["analyze", &data("offset_5r.toml"), "--format", "jsonl"]);
    assert_eq!(code, 0);
    let first: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    assert_eq!(first["so3_necessary"], false);

    let (code, _, err) = call(&["analyze", &data("rrrpp.toml"), "--checklist", "R^i R^i R^i"]);
    assert_eq!(code, 2);
    assert!(err.contains("do not follow"));
}

#[test]
fn analyze_parse_errors_exit_2() {
    let (code, _, err) = call(&["analyze", &data("bad_type.toml")]);
    assert_eq!(code, 2);
    assert!(err.contains(":4:8:"), "{err}");
    assert!(err.contains("joints[0].type"));
    let (code, _, _) = call(&["analyze", &data("missing.toml")]);
    assert_eq!(code, 2);
}

#[test]
fn robot_command() {
    let (code, out, _) = call(&[
        "robot",
        "R^i R^i R^i",
        "R^i R^i R^p R^p R^p",
        "R^i R^i R^i P P",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("SO(3) platform: PASS"));
    assert!(out.contains("platform twist space dimension 3"));
    let (code, _, err) = call(&["robot", "R^i R^i R^i", "R^i R^i R^i R", "R^i R^i R^i"]);
    assert_eq!(code, 2);
    assert!(err.contains("redundant"));
    let (code, _, _) = call(&["robot", "R^i R^i R^i", "R^i R^i R^i"]);
    assert_eq!(code, 2);
}

#[test]
fn counts_command() {
    let (code, out, _) = call(&["counts"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("73 symmetric / 5256 asymmetric / 5329 total\n"));
    let (_, out, _) = call(&["counts", "--limbs", "84"]);
    assert!(out.ends_with("84 symmetric / 6972 asymmetric / 7056 total\n"));
    let (code, _, _) = call(&["counts", "--limbs", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn props_command() {
    let (code, out, _) = call(&["props", "--trials", "50", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 5);
}

#[test]
fn help_and_unknown_commands() {
    assert_eq!(call(&["--help"]).0, 0);
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&[]).0, 2);
}
