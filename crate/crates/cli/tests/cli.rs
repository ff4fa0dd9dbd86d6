use std::path::Path;
use std::process::{Command, Output};

fn griddom(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_griddom"))
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .env_remove("GRIDDOM_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn gamma_exact_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = griddom(dir.path(), &["--output", "json", "gamma", "5", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["exact"], 9);
    assert_eq!(v["lower"], v["upper"]);
    assert!(v["witness"].is_null(), "the profile DP yields no witness");

    let out = griddom(dir.path(), &["--output", "json", "gamma", "5", "5"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["exact"], 7);
    assert_eq!(v["witness"].as_array().unwrap().len(), 7);

    let out = griddom(dir.path(), &["gamma", "24", "24", "--method", "closed"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("131"));
}

#[test]
fn gamma_interval_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = griddom(
        dir.path(),
        &[
            "--output", "json", "gamma", "9", "11", "--method", "sandwich", "--k", "2",
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["lower"].as_i64().unwrap() < v["upper"].as_i64().unwrap());
    assert_eq!(v["k"], 2);
}

#[test]
fn bad_input_exits_64() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["gamma", "0", "3"][..],
        &["words", "0"],
        &["gamma", "x", "3"],
        &["frobnicate"],
    ] {
        assert_eq!(
            griddom(dir.path(), args).status.code(),
            Some(64),
            "{args:?}"
        );
    }
    let empty = griddom(dir.path(), &["verify", "--nmin", "9", "--nmax", "8"]);
    assert_eq!(empty.status.code(), Some(64));
}

#[test]
fn words_count_and_list() {
    let dir = tempfile::tempdir().unwrap();
    let out = griddom(dir.path(), &["words", "3", "count"]);
    assert_eq!(stdout(&out).trim(), "17");
    let out = griddom(dir.path(), &["words", "2", "list"]);
    let listed: Vec<String> = stdout(&out).lines().map(str::to_owned).collect();
    assert_eq!(listed, ["00", "01", "10", "11", "12", "21", "22"]);
}

#[test]
fn matrix_cache_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        griddom(dir.path(), &["matrix", "build", "--k", "1"])
            .status
            .code(),
        Some(0)
    );
    let first = std::fs::read_dir(dir.path()).unwrap().count();
    assert!(first > 0);
    assert_eq!(
        griddom(dir.path(), &["matrix", "build", "--k", "1"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), first);

    let out = griddom(dir.path(), &["matrix", "export", "--k", "1", "--tag", "L"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<String> = stdout(&out).lines().map(str::to_owned).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.split(',').count() == 3));

    let tmx = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|e| e == "tmx"))
        .expect("a cached matrix");
    std::fs::write(&tmx, b"TMX1garbage").unwrap();
    let out = griddom(dir.path(), &["matrix", "build", "--k", "1"]);
    assert_eq!(out.status.code(), Some(65));
}

#[test]
fn verify_small_rectangle() {
    let dir = tempfile::tempdir().unwrap();
    let out = griddom(
        dir.path(),
        &["verify", "--k", "3", "--nmax", "8", "--mmax", "10"],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn render_draws_a_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = griddom(dir.path(), &["render", "8", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().take(8).collect();
    assert!(rows.iter().all(|r| r.len() == 8));
    let marks = rows.iter().map(|r| r.matches('#').count()).sum::<usize>();
    assert!(marks <= 16, "{text}");

    let out = griddom(dir.path(), &["render", "3", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).matches('#').count(), 3);
}
