use std::process::{Command, Output};

fn treegen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treegen"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = treegen(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn free_count() {
    let out = treegen(&["free", "8", "--count"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "23\n");
    assert!(String::from_utf8(out.stderr).unwrap().contains("elapsed:"));
}

#[test]
fn rooted_ws_listing() {
    assert_eq!(
        stdout(&["rooted", "4", "--format", "ws"]),
        "4321\n4311\n4211\n4111\n"
    );
}

#[test]
fn free_edges_listing() {
    assert_eq!(stdout(&["free", "2", "--format", "edges"]), "1-2\n");
}

#[test]
fn output_is_deterministic() {
    for format in ["ws", "edges", "adjlist", "matrix"] {
        let a = stdout(&["free", "11", "--format", format]);
        let b = stdout(&["free", "11", "--format", format]);
        assert_eq!(a, b, "{format}");
        assert_eq!(
            a,
            stdout(&["free", "11", "--format", format, "--parallel"]),
            "{format}"
        );
    }
    let a = stdout(&["rooted", "10"]);
    assert_eq!(a.lines().count(), 719);
    assert_eq!(a, stdout(&["rooted", "10", "--parallel"]));
}

#[test]
fn parallel_count_matches() {
    assert_eq!(stdout(&["free", "18", "--count", "--parallel"]), "123867\n");
    assert_eq!(
        stdout(&["rooted", "14", "--count", "--parallel"]),
        "32973\n"
    );
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("treegen-cli-{}.txt", std::process::id()));
    let out = treegen(&["free", "6", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert_eq!(text, stdout(&["free", "6"]));
}

#[test]
fn bench_reports_counts() {
    let report = stdout(&["bench", "free", "18", "--repeat", "2"]);
    assert!(report.contains("count: 123867\n"), "{report}");
    assert!(report.contains("min_ms:") && report.contains("median_ms:"));
    assert!(stdout(&["bench", "free", "20", "--repeat", "1"]).contains("count: 823065\n"));
    assert!(stdout(&["bench", "free", "1", "--repeat", "1"]).contains("count: 1\n"));
}

#[test]
fn usage_errors_exit_nonzero() {
    for args in [
        &["free", "0"][..],
        &["free"],
        &["rooted", "12", "--cache", "4"],
        &["free", "8", "--format", "dot"],
        &["bench", "free", "5", "--repeat", "0"],
    ] {
        let out = treegen(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn count_mode_memory_is_bounded() {
    let out = treegen(&["free", "24", "--count", "--cache", "13"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "39299897\n");
    let err = String::from_utf8(out.stderr).unwrap();
    let kib: u64 = err
        .lines()
        .find_map(|l| l.strip_prefix("peak rss: "))
        .and_then(|l| l.strip_suffix(" KiB"))
        .expect("peak rss reported")
        .parse()
        .unwrap();
    assert!(kib < 500 * 1024, "{kib} KiB");
}
