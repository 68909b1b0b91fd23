//! Black-box tests of the binary: exit codes, exact output bytes, format
//! switches, and worker-count determinism.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_conductors"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("output is UTF-8")
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["table1", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["dioph", "--p", "3", "--q", "5", "--eq", "9"]).status.code(), Some(2));
    assert_eq!(run(&["curve", "--a", "20001", "--b", "0", "--n", "0"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_1() {
    let out = run(&["classnum", "-m", "12"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid input"));

    // (2, 1) has the perfect-square 2^2 - 3 = 1, so the family degenerates
    let out = run(&["almost-prime", "--a", "2", "--b", "1", "--limit", "100"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["obstruct", "--p", "9", "--q", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not an odd prime"));
}

#[test]
fn classnum_of_minus_23() {
    assert_eq!(stdout(&["classnum", "-m", "-23"]), "m,d,h,div3\n-23,-23,3,1\n");
}

#[test]
fn first_congruence_candidate() {
    assert_eq!(stdout(&["candidates", "--limit", "5000"]), "N,p,q\n4681,151,31\n");
}

#[test]
fn empty_result_is_header_only() {
    assert_eq!(stdout(&["candidates", "--limit", "100"]), "N,p,q\n");
}

#[test]
fn curve_row_for_the_conductor_19_curve() {
    assert_eq!(
        stdout(&["curve", "--a", "1", "--b", "1", "--n", "0"]),
        "a,b,n,a1,a2,a3,a4,a6,b2,b4,b6,b8,c4,c6,delta,admissible,N\n\
         1,1,0,0,1,1,1,0,4,2,1,0,-32,8,-19,1,19\n"
    );
}

#[test]
fn curve_without_squarefree_delta_has_empty_conductor() {
    // (0, 0, 0) gives delta = -27 = -3^3
    let out = stdout(&["curve", "--a", "0", "--b", "0", "--n", "0"]);
    let row = out.lines().nth(1).unwrap();
    assert!(row.ends_with(",-27,0,"), "row = {row}");
}

#[test]
fn dioph_finds_the_known_16_gap() {
    assert_eq!(
        stdout(&["dioph", "--p", "3", "--q", "5", "--eq", "2"]),
        "eq,a,b,A,term_sign,rhs_sign\n2,2,2,,-1,\n"
    );
}

#[test]
fn dioph_searches_all_equations_by_default() {
    let out = stdout(&["dioph", "--p", "3", "--q", "5", "--a-max", "12", "--b-max", "12"]);
    let eqs: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    // at least the E2, E6 and E7 hits at (3, 5)
    for eq in ["2", "6", "7"] {
        assert!(eqs.contains(&eq), "missing equation {eq} in {eqs:?}");
    }
    let mut sorted = eqs.clone();
    sorted.sort();
    assert_eq!(eqs, sorted, "rows grouped by equation number");
}

#[test]
fn obstruct_covers_both_orders() {
    let out = stdout(&["obstruct", "--p", "151", "--q", "271"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 15);
    assert_eq!(lines[0], "p,q,eq,kind,detail");
    for (i, line) in lines[1..8].iter().enumerate() {
        assert!(line.starts_with(&format!("151,271,{},", i + 1)), "line = {line}");
    }
    for (i, line) in lines[8..15].iter().enumerate() {
        assert!(line.starts_with(&format!("271,151,{},", i + 1)), "line = {line}");
    }
    assert!(!out.contains(",none,"));

    let two = stdout(&["obstruct", "--p", "151", "--q", "271", "--eq", "3"]);
    assert_eq!(two.lines().count(), 3);
}

#[test]
fn obstruct_reports_missing_certificates() {
    // (7, 11) fails the mod 3 / mod 5 congruence preconditions
    let out = stdout(&["obstruct", "--p", "7", "--q", "11", "--eq", "4"]);
    for line in out.lines().skip(1) {
        assert!(line.ends_with(",none,"), "line = {line}");
    }
}

#[test]
fn setzer_primes_below_100() {
    assert_eq!(stdout(&["setzer-primes", "--limit", "100"]), "u,p\n3,73\n5,89\n");
}

#[test]
fn hl_emits_a_constant_and_a_convergence_note() {
    let out = run(&["hl", "--a", "0", "--b", "1", "--prime-limit", "1000"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "a,b,prime_cutoff,constant");
    let c: f64 = text.lines().nth(1).unwrap().split(',').nth(3).unwrap().parse().unwrap();
    assert!(c > 0.0 && c < 1.0, "constant = {c}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("converges"));
}

#[test]
fn json_format_mirrors_the_csv_fields() {
    let text = stdout(&["classnum", "-m", "-23", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
    assert_eq!(v["columns"].as_array().unwrap().len(), 4);
    assert_eq!(v["rows"][0]["h"], 3);
    assert_eq!(v["rows"][0]["div3"], true);
    assert_eq!(v["rows"][0]["m"], -23);

    // absent q becomes null
    let t1 = stdout(&["table1", "--bound", "5", "--max-conductor", "50", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&t1).expect("valid JSON");
    assert!(v["rows"][0]["q"].is_null(), "rows = {}", v["rows"]);
}

#[test]
fn table_format_aligns_columns() {
    let text = stdout(&["setzer-primes", "--limit", "100", "--format", "table"]);
    assert_eq!(text, "u   p\n3  73\n5  89\n");
}

#[test]
fn worker_count_does_not_change_output_bytes() {
    let args = ["table1", "--bound", "40", "--max-conductor", "999"];
    let one = stdout(&[&args[..], &["--workers", "1"]].concat());
    let four = stdout(&[&args[..], &["--workers", "4"]].concat());
    assert_eq!(one, four);

    let args = ["table2", "--limit", "250000"];
    let one = stdout(&[&args[..], &["--workers", "1"]].concat());
    let three = stdout(&[&args[..], &["--workers", "3"]].concat());
    assert_eq!(one, three);
    assert_eq!(one.lines().count(), 4, "three rows below 250000 plus header");
}

#[test]
fn output_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    let direct = stdout(&["table1", "--bound", "30", "--max-conductor", "200"]);
    let to_file = stdout(&[
        "table1",
        "--bound",
        "30",
        "--max-conductor",
        "200",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(to_file.is_empty(), "file mode writes nothing to stdout");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);
}

#[test]
fn table2_verdicts_file_explains_every_candidate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("verdicts.csv");
    let table = stdout(&["table2", "--limit", "250000", "--verdicts", path.to_str().unwrap()]);
    let verdicts = std::fs::read_to_string(&path).unwrap();
    let vlines: Vec<&str> = verdicts.lines().collect();
    assert_eq!(vlines[0], "N,p,q,congruence_pass,failing_field,h_values");

    let surviving: Vec<&str> = table.lines().skip(1).collect();
    let mut passed = 0;
    for line in &vlines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[3], "1", "all listed candidates pass the congruences");
        if fields[4].is_empty() {
            // no failing field: the candidate made the table
            assert!(surviving.contains(&format!("{},{},{}", fields[0], fields[1], fields[2]).as_str()));
            passed += 1;
        } else {
            let failing: i64 = fields[4].parse().unwrap();
            let h: u64 = fields[5]
                .split(';')
                .find_map(|mh| {
                    let (m, h) = mh.split_once(':').unwrap();
                    (m.parse::<i64>().unwrap() == failing).then(|| h.parse().unwrap())
                })
                .expect("failing field appears in h_values");
            assert_eq!(h % 3, 0, "the named field has 3 | h");
        }
    }
    assert_eq!(passed, surviving.len());
}
