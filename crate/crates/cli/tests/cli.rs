use std::f64::consts::TAU;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use plasticwalk::analysis::{EpisodeTrace, TraceMeta};
use plasticwalk_cli::checkpoint::{parse_log, Checkpoint};
use plasticwalk_cli::commands::read_trace;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_plasticwalk"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Small enough to train in well under a second.
fn tiny_config(dir: &Path, name: &str, extra: &str) -> PathBuf {
    let out = dir.join(format!("{name}_out"));
    let text = format!(
        r#"master_seed = 11
policy = "hebbian"
topology = "beetle"
out_dir = "{}"
checkpoint_interval = 2
{extra}

[es]
population_size = 8
generations = 4
workers = 1

[walker]
episode_steps = 40
"#,
        out.display()
    );
    let path = dir.join(format!("{name}.toml"));
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["train"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn missing_seed_names_the_key() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("c.toml");
    fs::write(&path, "policy = \"hebbian\"\ntopology = \"beetle\"\n").unwrap();
    let o = run(&["train", "--config", s(&path)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("master_seed"), "{}", stderr(&o));
}

#[test]
fn unknown_key_is_named() {
    let dir = TempDir::new().unwrap();
    let path = tiny_config(dir.path(), "c", "poplation = 3");
    let o = run(&["train", "--config", s(&path)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("poplation"), "{}", stderr(&o));
}

#[test]
fn unreadable_config_is_config_error() {
    let o = run(&["train", "--config", "/nonexistent/x.toml"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn train_writes_artifacts_and_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let cfg = tiny_config(dir.path(), "run", "");
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let o = run(&["train", "--config", s(&cfg), "--out", s(out), "--quiet"]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let log_a = fs::read(out_a.join("generations.csv")).unwrap();
    let rows = parse_log(std::str::from_utf8(&log_a).unwrap()).unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows.iter().map(|r| r.generation).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    assert_eq!(log_a, fs::read(out_b.join("generations.csv")).unwrap());
    assert_eq!(
        fs::read(out_a.join("checkpoint.json")).unwrap(),
        fs::read(out_b.join("checkpoint.json")).unwrap()
    );
    assert!(out_a.join("checkpoints/gen_000002.json").is_file());
    assert!(out_a.join("checkpoints/gen_000004.json").is_file());
    assert!(out_a.join("best_genome.json").is_file());
}

#[test]
fn resume_matches_uninterrupted_run() {
    let dir = TempDir::new().unwrap();
    let cfg = tiny_config(dir.path(), "run", "");
    let direct = dir.path().join("direct");
    assert!(run(&["train", "--config", s(&cfg), "--out", s(&direct), "--quiet"]).status.success());

    // Train half, then resume from the generation-2 checkpoint.
    let half_cfg = tiny_config(dir.path(), "half", "");
    let text = fs::read_to_string(&half_cfg).unwrap().replace("generations = 4", "generations = 2");
    fs::write(&half_cfg, text).unwrap();
    let split = dir.path().join("split");
    assert!(run(&["train", "--config", s(&half_cfg), "--out", s(&split), "--quiet"]).status.success());
    let o = run(&[
        "train",
        "--config",
        s(&cfg),
        "--out",
        s(&split),
        "--checkpoint",
        s(&split.join("checkpoint.json")),
        "--quiet",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read(direct.join("generations.csv")).unwrap(), fs::read(split.join("generations.csv")).unwrap());
    let a = Checkpoint::load(&direct.join("checkpoint.json")).unwrap();
    let b = Checkpoint::load(&split.join("checkpoint.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn resume_rejects_changed_config() {
    let dir = TempDir::new().unwrap();
    let cfg = tiny_config(dir.path(), "run", "");
    let out = dir.path().join("o");
    assert!(run(&["train", "--config", s(&cfg), "--out", s(&out), "--quiet"]).status.success());
    let other = tiny_config(dir.path(), "other", "normalization = \"std\"");
    let o = run(&[
        "train",
        "--config",
        s(&other),
        "--out",
        s(&out),
        "--checkpoint",
        s(&out.join("checkpoint.json")),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("different configuration"), "{}", stderr(&o));
}

#[test]
fn eval_reproduces_best_fitness_and_honours_damage() {
    let dir = TempDir::new().unwrap();
    let cfg = tiny_config(dir.path(), "run", "");
    let out = dir.path().join("o");
    assert!(run(&["train", "--config", s(&cfg), "--out", s(&out), "--quiet"]).status.success());
    let ckpt = out.join("checkpoint.json");
    let best = Checkpoint::load(&ckpt).unwrap().best_fitness.unwrap();

    let ev = dir.path().join("ev");
    let o = run(&["eval", "--config", s(&cfg), "--checkpoint", s(&ckpt), "--seeds", "0", "--out", s(&ev)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(ev.join("eval_train.csv")).unwrap();
    let fitness: f64 = csv.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((fitness - best).abs() <= 1e-9, "{fitness} vs {best}");

    let o = run(&[
        "eval", "--config", s(&cfg), "--checkpoint", s(&ckpt), "--damage", "lf", "--seeds", "0..2", "--trace", "--out",
        s(&ev),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(ev.join("eval_lf.csv")).unwrap().lines().count(), 3);
    for seed in 0..2 {
        let trace = read_trace(&ev.join(format!("run_lf_seed{seed}.trace"))).unwrap();
        assert_eq!(trace.len(), 40);
        let first = &trace.steps()[0].observation[..3];
        assert!(trace.steps().iter().all(|st| &st.observation[..3] == first));
        assert!(trace.steps().iter().any(|st| st.observation[3..18] != trace.steps()[0].observation[3..18]));
    }
}

#[test]
fn eval_rejects_topology_mismatch() {
    let dir = TempDir::new().unwrap();
    let cfg = tiny_config(dir.path(), "run", "");
    let out = dir.path().join("o");
    assert!(run(&["train", "--config", s(&cfg), "--out", s(&out), "--quiet"]).status.success());
    let gecko = dir.path().join("gecko.toml");
    fs::write(&gecko, fs::read_to_string(&cfg).unwrap().replace("\"beetle\"", "\"gecko\"")).unwrap();
    let o = run(&["eval", "--config", s(&gecko), "--checkpoint", s(&out.join("checkpoint.json"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("topology"), "{}", stderr(&o));
}

fn write_trace(path: &Path, snapshots: Vec<Vec<f64>>) {
    let t = EpisodeTrace::from_snapshots(TraceMeta::default(), snapshots).unwrap();
    t.write_binary(BufWriter::new(File::create(path).unwrap())).unwrap();
}

fn cycle(steps: usize, dims: usize) -> Vec<Vec<f64>> {
    (0..steps)
        .map(|t| {
            let a = TAU * t as f64 / 25.0;
            (0..dims).map(|k| (k as f64 + 1.0) * a.sin() + (dims - k) as f64 * a.cos()).collect()
        })
        .collect()
}

#[test]
fn analyze_reports_limit_cycle_and_writes_exports() {
    let dir = TempDir::new().unwrap();
    let trace = dir.path().join("cyc.trace");
    write_trace(&trace, cycle(400, 6));
    let out = dir.path().join("an");
    let o = run(&["analyze", s(&trace), "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("limit_cycle"));
    let classes: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("attractors.json")).unwrap()).unwrap();
    assert_eq!(classes["cyc"], "limit_cycle");
    assert!(out.join("cyc_scores.csv").is_file());
    assert!(out.join("variance_ratio.json").is_file());
    assert_eq!(fs::read_to_string(out.join("pc_spread.csv")).unwrap().lines().count(), 4);
}

#[test]
fn analyze_input_errors() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.trace");
    let b = dir.path().join("b.trace");
    write_trace(&a, cycle(300, 6));
    write_trace(&b, cycle(300, 5));
    let o = run(&["analyze", s(&a), s(&b), "--out", s(&dir.path().join("x"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("b.trace"), "{}", stderr(&o));

    let o = run(&["analyze", s(&a), "--q", "7", "--out", s(&dir.path().join("y"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("q = 7"), "{}", stderr(&o));
}

#[test]
fn compare_emits_full_matrix() {
    let dir = TempDir::new().unwrap();
    let a = tiny_config(dir.path(), "heb_max", "");
    let b = tiny_config(dir.path(), "heb_std", "normalization = \"std\"");
    let out = dir.path().join("cmp");
    let o = run(&["compare", "--config", s(&a), "--config", s(&b), "--seeds", "0..2", "--out", s(&out), "--quiet"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(out.join("compare.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 2 * 6 * 2);
    assert!(rows.iter().all(|r| r.ends_with(",ok")));
    for cond in ["flat", "uneven", "lf", "rh", "lf_rf", "perturbed"] {
        assert_eq!(rows.iter().filter(|r| r.split(',').nth(1) == Some(cond)).count(), 4);
    }
}

#[test]
fn compare_marks_failed_runs() {
    let dir = TempDir::new().unwrap();
    let a = tiny_config(dir.path(), "good", "");
    let b = tiny_config(dir.path(), "bad", "");
    // An output directory that cannot be created makes the second run fail.
    let blocker = dir.path().join("blocker");
    fs::write(&blocker, "").unwrap();
    let text = fs::read_to_string(&b).unwrap();
    let bad_out = dir.path().join("bad_out");
    fs::write(&b, text.replace(s(&bad_out), s(&blocker.join("sub")))).unwrap();
    let out = dir.path().join("cmp");
    let o = run(&["compare", "--config", s(&a), "--config", s(&b), "--seeds", "0", "--out", s(&out), "--quiet"]);
    assert_eq!(o.status.code(), Some(2));
    let csv = fs::read_to_string(out.join("compare.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 12);
    assert_eq!(rows.iter().filter(|r| r.contains("failed")).count(), 6);
    assert!(rows.iter().filter(|r| r.starts_with("good,")).all(|r| r.ends_with(",ok")));
}

#[test]
fn compare_needs_two_configs() {
    let dir = TempDir::new().unwrap();
    let a = tiny_config(dir.path(), "a", "");
    let o = run(&["compare", "--config", s(&a), "--out", s(&dir.path().join("c"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn shipped_configs_resolve() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            plasticwalk_cli::load_config(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            n += 1;
        }
    }
    assert!(n >= 5);
}
