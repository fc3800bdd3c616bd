use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selfdual"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn parse_errors_exit_2() {
    let o = run(&["verify", "--family", "doubly", "--hex", "34F", "--k", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("even polynomial weight, got 7"),
        "{}",
        stderr(&o)
    );

    let o = run(&["verify", "--family", "singly", "--hex", "zz", "--k", "10"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify", "--family", "singly", "--hex", "34F", "--k", "11"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify", "--family", "singly", "--hex", "34F"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&[
        "search", "--family", "singly", "--k-min", "9", "--k-max", "3",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["search", "--family", "singly", "--k", "37"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rank_deficient_code_exits_3() {
    // x^2 + x + 1 divides x^36 - 1, so the circulants lose rank.
    let o = run(&["verify", "--family", "singly", "--hex", "7", "--k", "3"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn low_distance_code_exits_4() {
    let o = run(&[
        "verify",
        "--family",
        "singly",
        "--hex",
        "1F",
        "--k",
        "5",
        "--threads",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    assert!(stderr(&o).contains("no enumerator template"));
}

#[test]
fn raw_duplicated_identity_gives_binomials() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ii.txt");
    std::fs::write(
        &path,
        "# [I | I], k = 4\n1000 1000\n0100 0100\n0010 0010\n0001 0001\n",
    )
    .unwrap();
    let o = run(&["distribution", "--raw", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let lines: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(lines.len(), 9);
    for (w, line) in lines.iter().enumerate() {
        let expected = if w % 2 == 0 {
            binomial(4, w as u64 / 2)
        } else {
            0
        };
        assert_eq!(*line, format!("{w}\t{expected}"));
    }

    std::fs::write(&path, "10\n1x\n").unwrap();
    let o = run(&["distribution", "--raw", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["distribution", "--raw", "/nonexistent/matrix.txt"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tiny_search_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.jsonl");
    let o = run(&[
        "search",
        "--family",
        "singly",
        "--k",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("0 records"), "{}", stdout(&o));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "");
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn tables_against_results_file() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = write(
        dir.path(),
        "f.csv",
        "family,param1,param2,k,ones,hex\nsingly,0,483,10,7,34F\ndoubly,-2820,,9,6,1CB\n",
    );
    let good = concat!(
        r#"{"family":"singly","k":10,"hex":"34F","ones":7,"d":12,"gamma":0,"beta":483,"enumerator_type":"W72_1","dist_sha":"x"}"#,
        "\n",
        r#"{"family":"doubly","k":9,"hex":"1A7","ones":6,"d":12,"alpha":-2820,"dist_sha":"x"}"#,
        "\n"
    );
    let results = write(dir.path(), "r.jsonl", good);
    let o = run(&["tables", "--fixture", &fixture, "--results", &results]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("2 rows: 2 match, 0 mismatch, 0 missing"));
    // read-only: running again gives the same report
    assert_eq!(
        stdout(&run(&[
            "tables",
            "--fixture",
            &fixture,
            "--results",
            &results
        ])),
        stdout(&o)
    );

    // negative control: corrupted beta in the fixture
    let corrupted = write(
        dir.path(),
        "bad.csv",
        "family,param1,param2,k,ones,hex\nsingly,0,484,10,7,34F\ndoubly,-2820,,9,6,1CB\n",
    );
    let o = run(&["tables", "--fixture", &corrupted, "--results", &results]);
    assert_eq!(o.status.code(), Some(5));
    let text = stdout(&o);
    assert!(
        text.contains("MISMATCH  line 2: singly gamma=0 beta=484 K=10 hex 34F"),
        "{text}"
    );
    assert!(text.contains("1 match, 1 mismatch, 0 missing"), "{text}");

    let partial = write(dir.path(), "p.jsonl", good.lines().next().unwrap());
    let o = run(&["tables", "--fixture", &fixture, "--results", &partial]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).contains("missing   line 3: doubly alpha=-2820 K=9 hex 1CB"));

    let broken = write(
        dir.path(),
        "b.csv",
        "family,param1,param2,k,ones,hex\nsingly,0,483,10,6,34F\n",
    );
    let o = run(&["tables", "--fixture", &broken, "--results", &results]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("fixture line 2"));
}

#[test]
fn embedded_tables_load() {
    // An empty results file: every embedded row is reported missing.
    let dir = tempfile::tempdir().unwrap();
    let results = write(dir.path(), "empty.jsonl", "");
    let o = run(&["tables", "--results", &results, "--family", "doubly"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(
        stdout(&o).contains("79 rows: 0 match, 0 mismatch, 79 missing"),
        "{}",
        stdout(&o)
    );
    let o = run(&[
        "tables",
        "--results",
        &results,
        "--sample",
        "5",
        "--seed",
        "3",
    ]);
    assert!(stdout(&o).contains("5 rows: 0 match, 0 mismatch, 5 missing"));
}
