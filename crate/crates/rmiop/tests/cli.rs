//! CLI integration: exit codes, file round trips, and byte-identical reports
//! across runs of the same command.

use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_rmiop")
}

fn run_in(dir: &std::path::Path, args: &[&str]) -> (i32, String, String) {
    let out = Command::new(bin())
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn rmiop");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).to_string(),
        String::from_utf8_lossy(&out.stderr).to_string(),
    )
}

#[test]
fn gen_prove_verify_round_trip_and_exit_codes() {
    let dir = std::env::temp_dir().join(format!("rmiop-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    let (code, _, _) = run_in(&dir, &["gen", "--n", "27", "--seed", "7", "--out", "t"]);
    assert_eq!(code, 0);
    // deterministic generation: same seed, same files
    let first = std::fs::read(dir.join("t.instance")).unwrap();
    run_in(&dir, &["gen", "--n", "27", "--seed", "7", "--out", "t2"]);
    assert_eq!(first, std::fs::read(dir.join("t2.instance")).unwrap());

    let (code, _, _) = run_in(
        &dir,
        &[
            "prove",
            "--instance",
            "t.instance",
            "--witness",
            "t.witness",
            "--seed",
            "9",
            "--out",
            "t.transcript",
        ],
    );
    assert_eq!(code, 0);

    let (code, stdout, _) = run_in(
        &dir,
        &["verify", "--instance", "t.instance", "--transcript", "t.transcript"],
    );
    assert_eq!(code, 0);
    assert!(stdout.contains("accept"));

    // truncated transcript: exit 2
    let bytes = std::fs::read(dir.join("t.transcript")).unwrap();
    std::fs::write(dir.join("short.transcript"), &bytes[..bytes.len() / 3]).unwrap();
    let (code, _, stderr) = run_in(
        &dir,
        &["verify", "--instance", "t.instance", "--transcript", "short.transcript"],
    );
    assert_eq!(code, 2, "stderr: {stderr}");

    // unknown preset / usage errors: exit 2
    let (code, _, _) = run_in(&dir, &["params", "--preset", "nope"]);
    assert_eq!(code, 2);
    let (code, _, _) = run_in(&dir, &["frobnicate"]);
    assert_eq!(code, 2);

    // bad n: exit 2
    let (code, _, _) = run_in(&dir, &["gen", "--n", "28", "--seed", "1", "--out", "x"]);
    assert_eq!(code, 2);

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = std::env::temp_dir().join(format!("rmiop-cli-rep-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for args in [
        vec!["params", "--preset", "desk27"],
        vec!["ldt", "--profile", "spectra"],
        vec!["selftest", "--tier", "fast", "--seed", "3"],
    ] {
        let (c1, out1, _) = run_in(&dir, &args);
        let (c2, out2, _) = run_in(&dir, &args);
        assert_eq!(c1, 0, "command {args:?} failed");
        assert_eq!(c1, c2);
        assert_eq!(out1, out2, "report for {args:?} not reproducible");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn unsat_instance_generates_and_is_reported_unsatisfied() {
    let dir = std::env::temp_dir().join(format!("rmiop-cli-unsat-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (code, _, _) = run_in(
        &dir,
        &["gen", "--n", "27", "--seed", "5", "--unsat", "--out", "u"],
    );
    assert_eq!(code, 0);
    // the stored witness no longer satisfies the rewritten instance
    let t = rmiop::field::Tower::default_tower();
    let inst = rmiop::r1cs::instance_from_text(
        &t,
        &std::fs::read_to_string(dir.join("u.instance")).unwrap(),
    )
    .unwrap();
    let witness = rmiop::r1cs::witness_from_text(
        &t,
        &std::fs::read_to_string(dir.join("u.witness")).unwrap(),
    )
    .unwrap();
    assert!(!inst.is_satisfied(&t, &witness).unwrap());
    std::fs::remove_dir_all(&dir).ok();
}
