#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use priority_cli::config::ScenarioConfig;
use priority_cli::demos;
use priority_core::frameworks::{Product, Spm, Spp, S01};
use priority_core::scheduler::{parse_run, run_scenario, run_to_text};
use priority_core::OpponentUniverse;

pub fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_priority-engine"));
    cmd.env_remove("PRIORITY_ENGINE_SEARCH_BOUND");
    cmd
}

pub fn run_bin(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary starts")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

pub fn demos_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("demos")
}

pub fn demo_universe_path(name: &str) -> PathBuf {
    demos_dir().join(format!("{name}.universe"))
}

pub fn demo_config(name: &str) -> ScenarioConfig {
    ScenarioConfig::parse(demos::find(name).expect("bundled demo").config).unwrap()
}

pub fn demo_universe(name: &str) -> OpponentUniverse {
    OpponentUniverse::parse(demos::find(name).expect("bundled demo").universe).unwrap()
}

/// The bundled scenario's run file, built in process at the default bound.
pub fn demo_run_text(name: &str) -> String {
    let config = demo_config(name);
    let outcome = run_scenario(
        &config.framework_spec().unwrap(),
        &config.kinds().unwrap(),
        Arc::new(demo_universe(name)),
        config.run_config(64),
    )
    .unwrap();
    outcome.run_text
}

/// A hand edit of a demo run and the stage the audit has to name.
pub struct Tamper {
    pub name: &'static str,
    pub demo: &'static str,
    pub stage: usize,
    pub description: &'static str,
}

pub const TAMPERS: [Tamper; 5] = [
    Tamper { name: "simple-final-item", demo: "simple", stage: 19, description: "12 dropped from the last item" },
    Tamper { name: "fm-chain-order", demo: "fm", stage: 30, description: "two chain slots swapped" },
    Tamper { name: "insep-protected-element", demo: "insep", stage: 40, description: "protected 20 put into A" },
    Tamper { name: "fm-forged-witness", demo: "fm", stage: 12, description: "certificate claim bit flipped" },
    Tamper { name: "split-routing", demo: "split", stage: 5, description: "routed bit flipped" },
];

pub fn fixture_path(t: &Tamper) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/tampered").join(format!("{}.run", t.name))
}

pub fn tampered_text(t: &Tamper) -> String {
    let text = demo_run_text(t.demo);
    match t.name {
        "simple-final-item" => {
            let mut run = parse_run(&Spm, &text).unwrap();
            run.stages[19].item.remove(&12);
            run_to_text(&Spm, &run)
        }
        "fm-chain-order" => {
            let f = Product::new(Spm, Spm);
            let mut run = parse_run(&f, &text).unwrap();
            run.stages[30].chain.swap(1, 2);
            run_to_text(&f, &run)
        }
        "insep-protected-element" => {
            let mut run = parse_run(&Spp, &text).unwrap();
            for stage in &mut run.stages[40..] {
                stage.item.a.insert(20);
            }
            run_to_text(&Spp, &run)
        }
        "fm-forged-witness" => {
            let f = Product::new(Spm, Spm);
            let mut run = parse_run(&f, &text).unwrap();
            let rec = run.certificates.iter_mut().find(|c| c.strategy == 1 && c.is_live()).unwrap();
            let w = &mut rec.certificate.witness;
            w[4] = 1 - w[4];
            run_to_text(&f, &run)
        }
        "split-routing" => {
            let f: S01 = demo_config("split").framework_spec().unwrap().s01().unwrap();
            let mut run = parse_run(&f, &text).unwrap();
            for stage in &mut run.stages[5..] {
                let mut bits = stage.item.bits().to_vec();
                bits[5] = !bits[5];
                stage.item = priority_core::BitString::from_bits(bits);
            }
            run_to_text(&f, &run)
        }
        other => panic!("unknown tamper {other}"),
    }
}

/// The stage numbers listed on the verifier's `failing stages:` line.
pub fn reported_stages(report: &str) -> Vec<usize> {
    report
        .lines()
        .find_map(|l| l.strip_prefix("failing stages:"))
        .map(|rest| rest.split_whitespace().filter_map(|s| s.parse().ok()).collect())
        .unwrap_or_default()
}
