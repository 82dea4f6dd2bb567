use std::path::Path;
use std::process::Command;

use gridmmo::cli::{
    bench, main_with_args, run_episode, verify_replay, PolicyKind, ReplayLog, ThroughputReport,
    Verdict, EXIT_DIVERGED, EXIT_FORMAT, EXIT_OK, EXIT_USAGE,
};
use gridmmo::Config;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut full = vec!["gridmmo"];
    full.extend_from_slice(args);
    let code = main_with_args(full, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn small_config_file(dir: &Path, extra: &str) -> std::path::PathBuf {
    let path = dir.join("small.toml");
    let text = format!(
        "map_size = 32\nborder = 4\nnum_agents = 8\nmax_agents = 8\nnum_npcs = 16\nhorizon = 200\n{extra}"
    );
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn run_twice_gives_identical_replays() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config_file(dir.path(), "");
    let (a, b) = (dir.path().join("a.replay"), dir.path().join("b.replay"));
    for path in [&a, &b] {
        let (code, out, err) = run(&[
            "run",
            "--config",
            p(&cfg),
            "--seed",
            "7",
            "--ticks",
            "100",
            "--replay",
            p(path),
        ]);
        assert_eq!(code, EXIT_OK, "{err}");
        assert!(out.starts_with("ticks 100 "), "{out}");
        assert!(out.contains("agent 1: "), "{out}");
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let (code, out, _) = run(&["replay", "--replay", p(&a), "--verify"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "ok: 100 ticks verified");
    let (code, out, _) = run(&["replay", "--replay", p(&a)]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "seed 7 ticks 100");
}

#[test]
fn horizon_bounds_the_record_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config_file(dir.path(), "");
    std::fs::write(
        &cfg,
        std::fs::read_to_string(&cfg)
            .unwrap()
            .replace("horizon = 200", "horizon = 10"),
    )
    .unwrap();
    let replay = dir.path().join("h.replay");
    let (code, _, err) = run(&[
        "run",
        "--config",
        p(&cfg),
        "--replay",
        p(&replay),
        "--ticks",
        "50",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let log = ReplayLog::load(&replay).unwrap();
    assert_eq!(log.records.len(), 10);
    assert_eq!(
        log.records.iter().map(|r| r.tick).collect::<Vec<_>>(),
        (0..10).collect::<Vec<_>>()
    );
}

/// Byte offset of the `kind` field of action `index` in record `rec`.
fn action_kind_offset(bytes: &[u8], rec: usize, index: usize) -> usize {
    let mut at = bytes.iter().position(|&b| b == b'\n').unwrap() + 1;
    for _ in 0..rec {
        let len = u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as usize;
        at += 4 + len;
    }
    // length prefix, tick, action count, then (id, kind, a, b, c) per action
    at + 4 + 8 + 4 + index * 40 + 8
}

#[test]
fn flipped_action_byte_names_the_tick() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config_file(dir.path(), "");
    let replay = dir.path().join("f.replay");
    let (code, _, _) = run(&[
        "run",
        "--config",
        p(&cfg),
        "--seed",
        "3",
        "--ticks",
        "120",
        "--replay",
        p(&replay),
    ]);
    assert_eq!(code, EXIT_OK);
    let log = ReplayLog::load(&replay).unwrap();
    // a gather always leaves an event; flipping it to a sell of item 0 cannot
    let (rec, index) = log
        .records
        .iter()
        .enumerate()
        .find_map(|(i, r)| {
            r.actions
                .iter()
                .position(|(_, a)| a[0] == 4)
                .map(|j| (i, j))
        })
        .expect("some agent gathered");
    let tick = log.records[rec].tick;
    let mut bytes = std::fs::read(&replay).unwrap();
    let at = action_kind_offset(&bytes, rec, index);
    assert_eq!(bytes[at], 4);
    bytes[at] ^= 1;
    std::fs::write(&replay, &bytes).unwrap();

    let (code, out, _) = run(&["replay", "--replay", p(&replay), "--verify"]);
    assert_eq!(code, EXIT_DIVERGED);
    assert!(
        out.starts_with(&format!("diverged at tick {tick}:")),
        "{out}"
    );
}

#[test]
fn corrupt_logs_are_format_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config_file(dir.path(), "");
    let replay = dir.path().join("t.replay");
    run(&[
        "run",
        "--config",
        p(&cfg),
        "--ticks",
        "5",
        "--replay",
        p(&replay),
    ]);
    let bytes = std::fs::read(&replay).unwrap();
    let header_end = bytes.iter().position(|&b| b == b'\n').unwrap();

    let cut = dir.path().join("cut.replay");
    std::fs::write(&cut, &bytes[..header_end / 2]).unwrap();
    let (code, _, err) = run(&["replay", "--replay", p(&cut), "--verify"]);
    assert_eq!(code, EXIT_FORMAT, "{err}");

    std::fs::write(&cut, &bytes[..bytes.len() - 3]).unwrap();
    assert_eq!(
        run(&["replay", "--replay", p(&cut), "--verify"]).0,
        EXIT_FORMAT
    );

    let mut tampered = bytes.clone();
    tampered[header_end - 3] ^= 0x01;
    std::fs::write(&cut, &tampered).unwrap();
    assert_eq!(run(&["replay", "--replay", p(&cut)]).0, EXIT_FORMAT);

    std::fs::write(&cut, b"not a replay\n").unwrap();
    assert_eq!(run(&["replay", "--replay", p(&cut)]).0, EXIT_FORMAT);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let r = dir.path().join("x.replay");
    assert_eq!(run(&[]).0, EXIT_USAGE);
    assert_eq!(run(&["fly"]).0, EXIT_USAGE);
    assert_eq!(run(&["run", "--seed", "1"]).0, EXIT_USAGE);
    assert_eq!(
        run(&["run", "--replay", p(&r), "--policy", "greedy"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        run(&["run", "--replay", p(&r), "--seed", "-4"]).0,
        EXIT_USAGE
    );
    assert_eq!(run(&["bench", "--agents", "many"]).0, EXIT_USAGE);
    assert_eq!(run(&["replay", "--verify"]).0, EXIT_USAGE);
    let bad = small_config_file(dir.path(), "colour = 3\n");
    let (code, _, err) = run(&["run", "--config", p(&bad), "--replay", p(&r)]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("colour"), "{err}");
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("bench"));
}

#[test]
fn task_file_flag() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config_file(dir.path(), "");
    let tasks = dir.path().join("tasks.json");
    std::fs::write(
        &tasks,
        r#"[{"predicate": "TickGE", "params": {"num_tick": 5}, "subject": [1], "assignee": [2]}]"#,
    )
    .unwrap();
    let replay = dir.path().join("k.replay");
    let (code, out, err) = run(&[
        "run",
        "--config",
        p(&cfg),
        "--ticks",
        "6",
        "--tasks",
        p(&tasks),
        "--replay",
        p(&replay),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("agent 2: 1/1 tasks completed"), "{out}");
    assert!(!out.contains("agent 1:"));
    std::fs::write(&tasks, r#"[{"predicate": "Nope", "subject": [1]}]"#).unwrap();
    assert_eq!(
        run(&[
            "run",
            "--config",
            p(&cfg),
            "--tasks",
            p(&tasks),
            "--replay",
            p(&replay)
        ])
        .0,
        EXIT_USAGE
    );
}

#[test]
fn scripted_seed_7_golden_digest() {
    let s = run_episode(
        &Config::default(),
        7,
        1000,
        PolicyKind::Scripted,
        None,
        None,
    )
    .unwrap();
    assert_eq!(s.ticks, 1000);
    assert_eq!(s.final_digest, 0x5b57_6e53_846d_b293);
    assert_eq!(s.digests.last(), Some(&s.final_digest));
}

#[test]
fn replay_is_self_contained() {
    let cfg = Config {
        map_size: 32,
        border: 4,
        num_agents: 8,
        max_agents: 8,
        num_npcs: 8,
        ..Config::default()
    };
    let mut buf = Vec::new();
    run_episode(&cfg, 12, 60, PolicyKind::Scripted, None, Some(&mut buf)).unwrap();
    let log = ReplayLog::read(&buf[..]).unwrap();
    assert_eq!(log.to_bytes(), buf);
    assert_eq!(verify_replay(&log).unwrap(), Verdict::Match { ticks: 60 });
    // a different recorded digest is caught at that tick
    let mut bad = log.clone();
    bad.records[17].digest ^= 1;
    assert!(matches!(
        verify_replay(&bad).unwrap(),
        Verdict::Diverged { tick: 17, .. }
    ));
}

#[test]
fn throughput_arithmetic() {
    let r = ThroughputReport::new(128, 1000, 1, 1, 40.0);
    assert_eq!(r.agent_steps, 128_000);
    assert_eq!(r.agent_steps_per_core_sec, 3200.0);
    let r = ThroughputReport::new(128, 1000, 4, 4, 40.0);
    assert_eq!(r.agent_steps, 512_000);
    assert_eq!(r.agent_steps_per_sec, 12_800.0);
    assert_eq!(r.agent_steps_per_core_sec, 3200.0);
}

#[test]
fn bench_without_mortality_keeps_everyone() {
    let cfg = Config {
        map_size: 32,
        border: 4,
        ..Config::default()
    };
    let b = bench(&cfg, 16, 300, 2, false, 1).unwrap();
    assert_eq!(b.alive_at_end, vec![16, 16]);
    assert_eq!(b.report.agent_steps, 16 * 300 * 2);
    assert_eq!(b.final_digests.len(), 2);
    let again = bench(&cfg, 16, 300, 2, false, 1).unwrap();
    assert_eq!(again.final_digests, b.final_digests);
}

#[test]
fn binary_round_trip() {
    let exe = env!("CARGO_BIN_EXE_gridmmo");
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config_file(dir.path(), "");
    let replay = dir.path().join("bin.replay");
    let st = Command::new(exe)
        .args([
            "run",
            "--config",
            p(&cfg),
            "--ticks",
            "20",
            "--policy",
            "scripted",
            "--replay",
            p(&replay),
        ])
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    let st = Command::new(exe)
        .args(["replay", "--replay", p(&replay), "--verify"])
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    let out = Command::new(exe).args(["run", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
