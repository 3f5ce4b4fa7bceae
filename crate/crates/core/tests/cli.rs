use std::process::{Command, Output};

fn jlparity(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jlparity"))
        .args(args)
        .env_remove("JLPARITY_CASE")
        .env_remove("JLPARITY_Q")
        .env_remove("JLPARITY_N")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn split_q3_n2_sweep() {
    let o = jlparity(&["sweep", "--case", "split", "--q", "3", "--n", "2", "--format", "jsonl"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 8);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["consistent"], true);
        assert_eq!(v["c_order"], 8);
    }
}

#[test]
fn ramified_even_n_warns() {
    let o = jlparity(&["sweep", "--case", "ramified", "--q", "3", "--n", "2", "--format", "jsonl"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn unramified_qprime_2() {
    let o = jlparity(&["sweep", "--case", "unramified", "--qprime", "2", "--n", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let ok = headers.iter().position(|h| h == "consistent").unwrap();
    let rows: Vec<_> = rdr.records().map(|r| r.unwrap()).collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| &r[ok] == "true"));
}

#[test]
fn out_of_range_exits_2() {
    let o = jlparity(&["sweep", "--case", "split", "--q", "7", "--n", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unsupported range"));
}

#[test]
fn output_is_deterministic() {
    let args = ["sweep", "--case", "split,ramified", "--q", "3,5", "--n", "1,2,3", "--format", "jsonl"];
    let a = jlparity(&args);
    let b = jlparity(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn env_overrides_and_out_file() {
    let dir = std::env::temp_dir().join(format!("jlparity-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("records.jsonl");
    let o = Command::new(env!("CARGO_BIN_EXE_jlparity"))
        .args(["sweep", "--format", "jsonl", "--out"])
        .arg(&path)
        .env("JLPARITY_CASE", "split")
        .env("JLPARITY_Q", "3")
        .env("JLPARITY_N", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 8);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_ramified_q5_n3() {
    let o = jlparity(&["verify", "--case", "ramified", "--q", "5", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn injected_fault_fails_verify() {
    let o = jlparity(&["verify", "--case", "split", "--q", "3", "--n", "2", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn framework_with_seed() {
    let o = jlparity(&["framework", "--seed", "42", "--format", "jsonl"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.contains("\"passed\":true")));
}

#[test]
fn tower_dump_parses() {
    let o = jlparity(&["tower", "--case", "ramified", "--q", "3", "--n", "3", "--format", "jsonl"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["tower"]["p"], 3);
    assert_eq!(v["tower"]["top_degree"], 6);
}

#[test]
fn records_match_published_schema() {
    let schema: serde_json::Value =
        serde_json::from_str(include_str!("../../../docs/instance_record.v1.schema.json")).unwrap();
    let props = schema["properties"].as_object().unwrap();
    let o = jlparity(&["sweep", "--case", "unramified", "--qprime", "3", "--n", "3", "--format", "jsonl"]);
    assert_eq!(o.status.code(), Some(0));
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let obj = v.as_object().unwrap();
        for key in schema["required"].as_array().unwrap() {
            assert!(obj.contains_key(key.as_str().unwrap()), "missing {key}");
        }
        for key in obj.keys() {
            assert!(props.contains_key(key), "undocumented field {key}");
        }
        assert_eq!(v["schema_version"], schema["properties"]["schema_version"]["const"]);
    }
}
