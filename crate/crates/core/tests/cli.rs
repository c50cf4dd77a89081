//! The `derivrule` binary: output formats, atomic writes and exit codes.

use std::process::{Command, Output};

use derivrule::csv::Table;
use derivrule::PrecisionContext;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_derivrule")).args(args).output().expect("spawn")
}

fn stdout_table(out: &Output) -> Table {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    Table::parse(&String::from_utf8(out.stdout.clone()).unwrap()).unwrap()
}

#[test]
fn chebyshev_first_kind_weights_are_pi_over_n() {
    let t = stdout_table(&run(&["rule", "--system", "cheb1", "--N", "4", "--analytic", "--digits", "30"]));
    let c = PrecisionContext::new(30, 10).unwrap();
    let want = c.pi() / 4u32;
    let wi = t.column("w").unwrap();
    assert_eq!(t.rows.len(), 4);
    for row in &t.rows {
        let w = c.parse(&row[wi]).unwrap();
        assert!((w - &want).abs() < 1e-29);
    }
    assert!(t.comments.iter().any(|l| l.contains("system=cheb1")));
}

#[test]
fn no_meta_starts_with_header() {
    let out = run(&["invert", "--system", "hermite", "--N", "9", "--digits", "20", "--no-meta"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("k,x,rho_exact,rho_approx,err_abs,err_rel,err_weighted\n"), "{text}");
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn output_file_is_written_whole_and_reproducibly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wr.csv");
    let p = path.to_str().unwrap();
    let args = ["wratio", "--system", "legendre,cheb2", "--N", "20", "--digits", "20", "--output", p];
    assert!(run(&args).status.success());
    let first = std::fs::read_to_string(&path).unwrap();
    assert!(run(&args).status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);
    let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 1, "stray files: {names:?}");
    Table::parse(&first).unwrap();
}

#[test]
fn resolvent_rows_follow_z_arguments() {
    let t = stdout_table(&run(&["resolvent", "--system", "legendre", "--N", "10", "--z", "2,1", "--z", "-0.5,0.25"]));
    assert_eq!(t.rows.len(), 2);
    let im = t.column("im_F").unwrap();
    for row in &t.rows {
        assert!(row[im].parse::<f64>().unwrap() < 0.0);
    }
}

#[test]
fn photoeffect_reports_bound_and_continuum_states() {
    let t = stdout_table(&run(&["photoeffect", "--N", "20", "--digits", "40"]));
    let state = t.column("state").unwrap();
    assert_eq!(t.rows.len(), 20);
    assert!(t.rows.iter().any(|r| r[state] == "bound"));
    assert!(t.rows.iter().any(|r| r[state] != "bound"));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["rule", "--system", "nonsense", "--N", "4"],
        vec!["rule", "--system", "cheb1", "--N", "1"],
        vec!["rule", "--system", "legendre", "--N", "4", "--analytic"],
        vec!["missing-mass", "--N", "2000"],
        vec!["histogram", "--N", "200000"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}
