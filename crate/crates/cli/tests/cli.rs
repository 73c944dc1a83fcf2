use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lcgraph"))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sweep_writes_records_and_summary() {
    let cfg = scratch("conn.cfg", "kind = connectivity\nn = 20\np.c = -1, 0, 1\ntrials = 15\nseed = 5\n");
    let cfg = cfg.to_str().unwrap();
    let a = run(&["sweep", "--config", cfg]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("point,n,p,trial,seed,outcome"));
    assert_eq!(lines.iter().filter(|l| !l.starts_with('#') && !l.starts_with("point")).count(), 45);
    assert_eq!(lines.iter().filter(|l| l.starts_with("#summary,") && !l.starts_with("#summary,point")).count(), 3);
    // reruns are byte identical, whatever the worker count
    let b = run(&["sweep", "--config", cfg, "--workers", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["sweep", "--config", cfg, "--seed", "6"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn out_and_trials_flags() {
    let cfg = scratch("moments.cfg", "kind=moments\nn=10\np=0.5\ntrials=3\n");
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests/moments.csv");
    let o = run(&["sweep", "--config", cfg.to_str().unwrap(), "--trials", "7", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("0,")).count(), 7);
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(run(&["sweep"]).status.code(), Some(2));
    let missing = run(&["sweep", "--config", "/nonexistent/file.cfg"]);
    assert_eq!(missing.status.code(), Some(2));
    let unknown = scratch("unknown.cfg", "kind=moments\nn=10\np=0.5\ncolour=blue\n");
    assert_eq!(run(&["sweep", "--config", unknown.to_str().unwrap()]).status.code(), Some(2));
    let bad_kind = scratch("badkind.cfg", "kind=teleport\nn=10\n");
    assert_eq!(run(&["sweep", "--config", bad_kind.to_str().unwrap()]).status.code(), Some(2));
    let odd = scratch("odd.cfg", "kind=matching\nn=7\np=1\n");
    assert_eq!(run(&["sweep", "--config", odd.to_str().unwrap()]).status.code(), Some(2));
    let bad_matrix = scratch("bad.csv", "n=2\n0,1\n1,inf\n");
    assert_eq!(run(&["atsp", bad_matrix.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn capacity_errors_exit_three() {
    let cfg = scratch("ham.cfg", "kind=hamilton\nn=30\np=1\ntrials=2\n");
    let o = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());
}

#[test]
fn atsp_matrix_file() {
    let m = scratch("two_cycles.csv", "n=4\ninf,1,5,5\n1,inf,5,5\n5,5,inf,1\n5,5,1,inf\n");
    let o = run(&["atsp", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let get = |k: &str| text.lines().find_map(|l| l.strip_prefix(&format!("{k},"))).unwrap().to_string();
    assert_eq!(get("assignment_cost"), "4");
    assert_eq!(get("cycles"), "2");
    assert_eq!(get("tour_cost"), "12");
    assert_eq!(get("optimum_cost"), "12");
    let order: Vec<usize> = get("tour").split(' ').map(|v| v.parse().unwrap()).collect();
    assert_eq!(order.len(), 4);
    assert_eq!(order[0], 0);
}

#[test]
fn sample_round_trips_as_cost_matrix() {
    let cfg = scratch("atsp.cfg", "kind=atsp\nn=5\nalpha=row:1,2,1,2,1\ntrials=2\nseed=3\n");
    let o = run(&["sample", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("n=5\ninf,"));
    let m = scratch("sampled.csv", &text);
    assert_eq!(run(&["atsp", m.to_str().unwrap()]).status.code(), Some(0));
    let table = run(&["atsp", "--config", cfg.to_str().unwrap()]);
    assert_eq!(table.status.code(), Some(0));
    assert!(stdout(&table).starts_with("n,trials,bound,"));
}

#[test]
fn oracle_and_mst_commands() {
    let cfg = scratch("oracle.cfg", "kind=connectivity\nn=50\np.c=0\n");
    let o = run(&["oracle", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let limit: f64 = row[4].parse().unwrap();
    assert!((limit - (-1f64).exp()).abs() < 1e-12);
    let mst = scratch("mst.cfg", "kind=mst\nn=30\ntrials=20\nseed=2\n");
    let o = run(&["mst", "--config", mst.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("n,trials,mean,std_error,series,mode,relative_gap\n30,20,"));
    assert_eq!(run(&["mst", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().count() >= 5);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
}
