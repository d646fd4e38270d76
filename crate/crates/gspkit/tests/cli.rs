//! End-to-end CLI coverage: every subcommand, artifact round trips between
//! subcommands, and the documented exit codes.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gspkit"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gspkit-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn gspkit")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn gen_solve_verify_pipeline() {
    let inst = tmp("inst.json");
    let out = run(&["gen", "--n", "4", "--seed", "5", "--out", inst.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{out:?}");

    let report = tmp("report.json");
    let out = run(&[
        "solve",
        "--instance",
        inst.to_str().unwrap(),
        "--epsilon",
        "1/2",
        "--mode",
        "exact",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{out:?}");
    let parsed: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert!(parsed["schedule"]["segments"].is_array());

    // write the schedule artifact and verify it against the instance
    let schedule = tmp("schedule.json");
    fs::write(&schedule, serde_json::to_string(&parsed["schedule"]).unwrap()).unwrap();
    let out = run(&[
        "verify",
        "--gsp",
        inst.to_str().unwrap(),
        "--schedule",
        schedule.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{out:?}");
}

#[test]
fn reduce_rcp_solve_verify_render_pipeline() {
    let inst = tmp("inst2.json");
    run(&[
        "gen", "--n", "3", "--seed", "9", "--objective", "tardiness", "--out",
        inst.to_str().unwrap(),
    ]);
    let rcp = tmp("reduced.json");
    let out = run(&[
        "reduce",
        "--instance",
        inst.to_str().unwrap(),
        "--epsilon",
        "1/2",
        "--offset",
        "1",
        "--out",
        rcp.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{out:?}");
    assert!(rcp.with_extension("varmap.json").exists());

    let sel = tmp("sel.json");
    for mode in ["brute", "dp", "approx-oracle", "tardiness"] {
        let out = run(&[
            "rcp",
            "solve",
            "--instance",
            rcp.to_str().unwrap(),
            "--mode",
            mode,
            "--epsilon",
            "1/2",
            "--out",
            sel.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "mode {mode}: {out:?}");
        let verify = run(&[
            "verify",
            "--instance",
            rcp.to_str().unwrap(),
            "--selection",
            sel.to_str().unwrap(),
        ]);
        assert_eq!(code(&verify), 0, "mode {mode}: {verify:?}");
    }

    let svg = tmp("instance.svg");
    let out = run(&[
        "render",
        "--instance",
        rcp.to_str().unwrap(),
        "--selection",
        sel.to_str().unwrap(),
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{out:?}");
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn verification_failure_exits_one() {
    let rcp = tmp("bad.json");
    fs::write(
        &rcp,
        r#"{"rows":[{"j":0,"rects":[{"a":0,"b":2,"c":1,"p":1},{"a":2,"b":4,"c":1,"p":1}]}],"rays":[{"s":0,"t":3,"d":1}]}"#,
    )
    .unwrap();
    let sel = tmp("bad-sel.json");
    fs::write(&sel, "[1]").unwrap(); // prefix violation
    let out = run(&[
        "verify",
        "--instance",
        rcp.to_str().unwrap(),
        "--selection",
        sel.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("row 0"), "{stdout}");
}

#[test]
fn infeasible_instance_exits_two() {
    let rcp = tmp("infeasible.json");
    fs::write(
        &rcp,
        r#"{"rows":[{"j":0,"rects":[{"a":0,"b":2,"c":1,"p":1}]}],"rays":[{"s":0,"t":0,"d":5}]}"#,
    )
    .unwrap();
    let out = run(&[
        "rcp", "solve", "--instance", rcp.to_str().unwrap(), "--mode", "dp",
    ]);
    assert_eq!(code(&out), 2, "{out:?}");
}

#[test]
fn brute_budget_exhaustion_exits_three() {
    let rcp = tmp("budget.json");
    fs::write(
        &rcp,
        r#"{"rows":[{"j":0,"rects":[{"a":0,"b":1,"c":1,"p":1},{"a":1,"b":2,"c":1,"p":1}]},
                   {"j":1,"rects":[{"a":0,"b":1,"c":1,"p":1},{"a":1,"b":2,"c":1,"p":1}]}],
           "rays":[]}"#,
    )
    .unwrap();
    let out = run(&[
        "rcp", "solve", "--instance", rcp.to_str().unwrap(), "--mode", "brute", "--budget", "2",
    ]);
    assert_eq!(code(&out), 3, "{out:?}");
}

#[test]
fn bench_csv_is_byte_identical_across_runs() {
    let config = tmp("bench-config.json");
    fs::write(
        &config,
        r#"{"instances":4,"seed":3,"n":3,"p_max":2,"r_max":2,"w_max":2,"d_max":4,
           "objective":"mixed","epsilon":"1/2","modes":["exact"]}"#,
    )
    .unwrap();
    let prefix1 = tmp("bench-a").to_str().unwrap().to_string();
    let prefix2 = tmp("bench-b").to_str().unwrap().to_string();
    for prefix in [&prefix1, &prefix2] {
        let out = run(&[
            "bench",
            "--config",
            config.to_str().unwrap(),
            "--out-prefix",
            prefix,
        ]);
        assert_eq!(code(&out), 0, "{out:?}");
    }
    let a = fs::read(format!("{prefix1}.csv")).unwrap();
    let b = fs::read(format!("{prefix2}.csv")).unwrap();
    assert_eq!(a, b);
}
