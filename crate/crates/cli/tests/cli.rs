use std::fs;
use std::process::{Command, Output};

fn pslr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pslr")).args(args).env_remove("PSLR_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Drops the four timing columns so rows from separate runs compare equal.
fn strip_times(text: &str) -> Vec<String> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(text.as_bytes());
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            let cells: Vec<&str> = rec.iter().collect();
            [&cells[..5], &cells[9..]].concat().join(",")
        })
        .collect()
}

#[test]
fn gen_writes_saddle_blocks() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ex1");
    let o = pslr(&["gen", "--problem", "example1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["ata.mtx", "b.mtx", "c.mtx"] {
        let text = fs::read_to_string(out.join(f)).unwrap();
        assert!(text.starts_with("%%MatrixMarket"));
    }
    let a = pslr::linalg::mm_read(out.join("ata.mtx")).unwrap();
    assert!(a.is_symmetric(1e-12));
}

#[test]
fn gen_writes_plain_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let o = pslr(&["gen", "--problem", "banded3", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let a = pslr::linalg::mm_read(dir.path().join("a.mtx")).unwrap();
    assert_eq!((a.nrows(), a.nnz()), (128, 3 * 128 - 2));
}

#[test]
fn solve_prints_iteration_count() {
    let o = pslr(&["solve", "--problem", "example1", "--method", "pslr_gmres", "--m", "5", "--rk", "15", "--x0", "pre"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("n-iter: ")).unwrap();
    let n: usize = line["n-iter: ".len()..].parse().unwrap();
    assert!((8..=14).contains(&n), "{n}");
    assert!(text.contains("status: Converged"));
}

#[test]
fn solve_not_converged_exits_2() {
    let o = pslr(&["solve", "--problem", "banded3", "--method", "gmres", "--maxit", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("n-iter: F"));
}

#[test]
fn config_errors_exit_1() {
    let o = pslr(&["solve", "--problem", "tridiag_paper", "--method", "cg"]);
    assert_eq!(o.status.code(), Some(1));
    let o = pslr(&["solve", "--problem", "mm:/nonexistent/x.mtx", "--method", "gmres"]);
    assert_eq!(o.status.code(), Some(1));
    let o = pslr(&["solve", "--problem", "example1", "--method", "pslr_gmres", "--m", "6"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(pslr(&["solve", "--bogus"]).status.code(), Some(64));
    assert_eq!(pslr(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(pslr(&["solve", "--problem", "nope", "--method", "gmres"]).status.code(), Some(64));
    assert_eq!(pslr(&["--help"]).status.code(), Some(0));
}

#[test]
fn bench_m_range_gives_six_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t5.csv");
    let md = dir.path().join("t5.md");
    let o = pslr(&[
        "bench",
        "--problem",
        "example1",
        "--method",
        "pslr_gmres",
        "--m",
        "0..5",
        "--rk",
        "15",
        "--out",
        csv.to_str().unwrap(),
        "--markdown",
        md.to_str().unwrap(),
    ]);
    assert!(matches!(o.status.code(), Some(0 | 2)));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "problem,method,m,r_k,x0,o-t,p-t,i-t,t-t,n-iter,error,status");
    assert_eq!(lines.len(), 7);
    for (m, line) in lines[1..].iter().enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 12);
        assert_eq!(cells[2], m.to_string());
    }
    assert_eq!(fs::read_to_string(&md).unwrap().lines().count(), 8);
}

#[test]
fn bench_is_deterministic_and_seeded() {
    let run = |seed: &str, jobs: &str| {
        let o = pslr(&[
            "bench",
            "--problem",
            "random_saddle:60,30",
            "--problem",
            "banded5",
            "--method",
            "pslr_gmres,gmres",
            "--x0",
            "pre,zero,random",
            "--seed",
            seed,
            "--jobs",
            jobs,
        ]);
        assert!(matches!(o.status.code(), Some(0 | 2)), "{}", String::from_utf8_lossy(&o.stderr));
        strip_times(&stdout(&o))
    };
    let a = run("3", "1");
    assert_eq!(a.len(), 1 + 2 * (3 + 2));
    assert_eq!(a, run("3", "4"));
    assert_ne!(a, run("4", "1"));
}

#[test]
fn seed_env_fallback() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_pslr"));
        c.args(["bench", "--problem", "random_saddle:50,25", "--method", "gmres"]);
        if let Some(f) = flag {
            c.args(["--seed", f]);
        }
        match env {
            Some(e) => c.env("PSLR_SEED", e),
            None => c.env_remove("PSLR_SEED"),
        };
        strip_times(&String::from_utf8(c.output().unwrap().stdout).unwrap())
    };
    assert_eq!(run(Some("9"), None), run(None, Some("9")));
    assert_eq!(run(Some("9"), Some("2")), run(None, Some("2")));
    assert_eq!(run(None, None), run(None, Some("0")));
}

#[test]
fn spectrum_identity_like_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("eig.csv");
    let o = pslr(&["spectrum", "--problem", "banded3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 128);
    // symmetric tridiag(2, 6, 2): eigenvalues real and inside (2, 10)
    assert!(rows.iter().all(|&(re, im)| im == 0.0 && re > 2.0 && re < 10.0));

    let o = pslr(&["spectrum", "--problem", "banded7", "--cap", "100", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let o = pslr(&["spectrum", "--problem", "example1", "--target", "schur-pslr", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
}
