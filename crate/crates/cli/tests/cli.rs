use std::process::{Command, Output};

use ah_core::verifier::VerificationReport;

fn ah_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ah-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn last_row(out: &Output) -> String {
    stdout(out).lines().last().unwrap().to_owned()
}

#[test]
fn coeffs_csv_rows() {
    let out = ah_lab(&["coeffs", "--p", "5", "--max-n", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("n,num,den,a_n"));
    assert_eq!(last_row(&out), "5,5,24,0");

    assert_eq!(last_row(&ah_lab(&["coeffs", "--p", "3", "--max-n", "3"])), "3,1,2,2");

    let zero = ah_lab(&["coeffs", "--p", "7", "--max-n", "0"]);
    assert_eq!(stdout(&zero).lines().collect::<Vec<_>>(), ["n,num,den,a_n", "0,1,1,1"]);
}

#[test]
fn coeffs_json_matches_csv() {
    let csv_out = ah_lab(&["coeffs", "--p", "7", "--max-n", "50", "--format", "csv"]);
    let json_out = ah_lab(&["coeffs", "--p", "7", "--max-n", "50", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json_out)).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    let mut reader = csv::Reader::from_reader(csv_out.stdout.as_slice());
    let mut count = 0;
    for (rec, row) in reader.records().zip(rows) {
        let rec = rec.unwrap();
        assert_eq!(rec[0].parse::<u64>().unwrap(), row["n"]);
        assert_eq!(&rec[1], row["num"].as_str().unwrap());
        assert_eq!(&rec[2], row["den"].as_str().unwrap());
        assert_eq!(rec[3].parse::<u64>().unwrap(), row["a_n"]);
        count += 1;
    }
    assert_eq!(count, 51);
}

#[test]
fn coeffs_rejects_composite() {
    let out = ah_lab(&["coeffs", "--p", "9", "--max-n", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn unreadable_output_path_is_exit_3() {
    let out = ah_lab(&["coeffs", "--p", "5", "--max-n", "5", "--out", "/nonexistent/dir/t.csv"]);
    assert_eq!(out.status.code(), Some(3));
    let out = ah_lab(&["verify", "--pmin", "5", "--pmax", "5", "--checks", "lehmer", "--out", "/nonexistent/r.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unknown_check_lists_names() {
    let out = ah_lab(&["verify", "--checks", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    for name in ["u-recursion", "conjecture-k-odd", "lehmer"] {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn bad_bounds_are_usage_errors() {
    assert_eq!(ah_lab(&["verify", "--pmin", "2", "--pmax", "5"]).status.code(), Some(2));
    assert_eq!(ah_lab(&["verify", "--pmin", "11", "--pmax", "5"]).status.code(), Some(2));
    assert_eq!(ah_lab(&["verify", "--xmin", "-5"]).status.code(), Some(2));
}

#[test]
fn proved_identities_exit_zero() {
    let out = ah_lab(&["verify", "--pmin", "5", "--pmax", "7", "--checks", "feq-gamma,nielsen"]);
    assert_eq!(out.status.code(), Some(0));
    let report: VerificationReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.totals.pass, 4);
    assert_eq!(report.exit_code(), 0);
}

#[test]
fn json_round_trips() {
    let out = ah_lab(&["verify", "--pmin", "3", "--pmax", "11", "--checks", "closed-forms,conjecture-k-odd,numeric-sums"]);
    let text = stdout(&out);
    let report: VerificationReport = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&report).unwrap();
    assert_eq!(again.trim_end(), text.trim_end());
    let reparsed: VerificationReport = serde_json::from_str(&again).unwrap();
    assert_eq!(reparsed, report);
    assert_eq!(out.status.code(), Some(report.exit_code()));
    assert_eq!(report.schema_version, "1");
}

#[test]
fn csv_report_matches_json() {
    let args = ["verify", "--pmin", "3", "--pmax", "7", "--checks", "wolstenholme,lehmer,corollary-sixth"];
    let json_out = ah_lab(&args);
    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    let csv_out = ah_lab(&csv_args);
    assert_eq!(json_out.status.code(), csv_out.status.code());
    let report: VerificationReport = serde_json::from_str(&stdout(&json_out)).unwrap();
    let mut reader = csv::Reader::from_reader(csv_out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), report.totals.total());
    for (row, check) in rows.iter().zip(report.checks()) {
        assert_eq!(row[0].parse::<u64>().unwrap(), check.prime);
        assert_eq!(&row[1], check.name.as_str());
        assert_eq!(&row[2], check.status.as_str());
        let lhs = check.witness.as_ref().map(|w| w.lhs.to_string()).unwrap_or_default();
        assert_eq!(&row[5], lhs);
    }
}

#[test]
fn seed_is_echoed() {
    let out = ah_lab(&["verify", "--pmin", "5", "--pmax", "5", "--checks", "lemma-pound0", "--seed", "17"]);
    let report: VerificationReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.config_echo["seed"], 17);
    assert_eq!(report.primes[0].checks[0].params["seed"], 17);
}
