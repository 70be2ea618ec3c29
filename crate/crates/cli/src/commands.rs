use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use priority_core::encoding::parse_hex_field;
use priority_core::frameworks::{FrameworkSpec, Product, Spm, SpmRequest, Spp, S01};
use priority_core::scheduler::{run_scenario, verify_run_text, ScenarioError, SchedulerError};
use priority_core::{BruteForceOracle, Framework, NatSet, OpponentUniverse};

use crate::config::{default_search_bound, ScenarioConfig};
use crate::demos;

/// Process exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    /// Failed audit or internal invariant failure.
    Failure,
    /// Unreadable or invalid input.
    InputError,
    /// Run finished without every strategy satisfied and stable, or got stuck.
    Incomplete,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::Failure => 1,
            Status::InputError => 2,
            Status::Incomplete => 3,
        }
    }
}

/// What a command prints and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub status: Status,
    pub message: String,
}

impl Outcome {
    fn input(message: impl Into<String>) -> Self {
        Outcome { status: Status::InputError, message: message.into() }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub universe: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub horizon_override: Option<usize>,
}

fn read(path: &Path) -> Result<String, Outcome> {
    fs::read_to_string(path).map_err(|e| Outcome::input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Outcome> {
    fs::write(path, text).map_err(|e| Outcome {
        status: Status::Failure,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

fn load_universe(text: &str, origin: &str) -> Result<OpponentUniverse, Outcome> {
    OpponentUniverse::parse(text).map_err(|e| Outcome::input(format!("{origin}: {e}")))
}

fn collapse(result: Result<Outcome, Outcome>) -> Outcome {
    result.unwrap_or_else(|o| o)
}

pub fn cmd_run(config_path: &Path, options: &RunOptions) -> Outcome {
    collapse((|| {
        let text = read(config_path)?;
        let mut config = ScenarioConfig::parse(&text)
            .map_err(|e| Outcome::input(format!("{}: {e}", config_path.display())))?;
        if let Some(h) = options.horizon_override {
            config.override_horizon(h).map_err(Outcome::input)?;
        }
        let dir = config_path.parent().unwrap_or(Path::new("."));
        let universe_path = options
            .universe
            .clone()
            .or_else(|| config.universe_path(dir))
            .ok_or_else(|| Outcome::input("no universe given in the config or with --universe"))?;
        let universe = load_universe(&read(&universe_path)?, &universe_path.display().to_string())?;
        let out = options.out.clone().or_else(|| config.out_path(dir)).unwrap_or_else(|| {
            let stem = config_path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
            PathBuf::from(format!("{stem}.run"))
        });
        execute(&config, universe, &out)
    })())
}

pub fn cmd_demo(name: &str, options: &RunOptions) -> Outcome {
    collapse((|| {
        let demo = demos::find(name).ok_or_else(|| {
            Outcome::input(format!("unknown demo {name:?}; choose one of {}", demos::names().join(", ")))
        })?;
        let mut config = ScenarioConfig::parse(demo.config).map_err(|e| Outcome {
            status: Status::Failure,
            message: format!("bundled demo {name}: {e}"),
        })?;
        if let Some(h) = options.horizon_override {
            config.override_horizon(h).map_err(Outcome::input)?;
        }
        let (universe_text, origin) = match &options.universe {
            Some(path) => (read(path)?, path.display().to_string()),
            None => (demo.universe.to_string(), format!("bundled universe {name}")),
        };
        let universe = load_universe(&universe_text, &origin)?;
        let out = options.out.clone().unwrap_or_else(|| PathBuf::from(format!("{name}.run")));
        let universe_out = out.with_extension("universe");
        write(&universe_out, &universe.to_text())?;
        let mut outcome = execute(&config, universe, &out)?;
        let _ = writeln!(outcome.message, "universe file: {}", universe_out.display());
        Ok(outcome)
    })())
}

fn execute(config: &ScenarioConfig, universe: OpponentUniverse, out: &Path) -> Result<Outcome, Outcome> {
    let spec = config.framework_spec().map_err(Outcome::input)?;
    let kinds = config.kinds().map_err(Outcome::input)?;
    let search_bound = default_search_bound().map_err(Outcome::input)?;
    let result = run_scenario(&spec, &kinds, Arc::new(universe), config.run_config(search_bound));
    let scenario = match result {
        Ok(s) => s,
        Err(ScenarioError::Config(m)) | Err(ScenarioError::Scheduler(SchedulerError::Config(m))) => {
            return Err(Outcome::input(m))
        }
        Err(ScenarioError::Scheduler(e @ SchedulerError::NoCompatibleItem { .. }))
        | Err(ScenarioError::Scheduler(e @ SchedulerError::Unsatisfied(_))) => {
            return Err(Outcome { status: Status::Incomplete, message: e.to_string() })
        }
        Err(ScenarioError::Scheduler(e)) => return Err(Outcome { status: Status::Failure, message: e.to_string() }),
    };
    write(out, &scenario.run_text)?;
    let mut message = scenario.summary.clone();
    let _ = writeln!(message, "run file: {}", out.display());
    let status = if scenario.success() { Status::Success } else { Status::Incomplete };
    Ok(Outcome { status, message })
}

pub fn cmd_verify(run_path: &Path, universe_path: &Path) -> Outcome {
    collapse((|| {
        let text = read(run_path)?;
        let universe = load_universe(&read(universe_path)?, &universe_path.display().to_string())?;
        let report = verify_run_text(&text, &universe)
            .map_err(|e| Outcome::input(format!("{}: {e}", run_path.display())))?;
        let mut message = report.to_string();
        let stages = report.failing_stages();
        if !stages.is_empty() {
            let list: Vec<String> = stages.iter().map(usize::to_string).collect();
            let _ = write!(message, "\nfailing stages: {}", list.join(" "));
        }
        let status = if report.passed() { Status::Success } else { Status::Failure };
        Ok(Outcome { status, message })
    })())
}

/// Compares the domination formula with exhaustive search on the framework's
/// bounded universe. Requests are `0x` hex encodings; set requests may also
/// be written `{1,3}/{2}` (positive part, then negative part).
pub fn cmd_oracle(framework: &str, bound: usize, u: &str, v: &str) -> Outcome {
    let spec = match framework {
        "spm" => Ok(FrameworkSpec::Spm),
        "spm-pair" => Ok(FrameworkSpec::SpmPair),
        other => FrameworkSpec::parse_id(other),
    };
    let spec = match spec {
        Ok(s) => s,
        Err(e) => return Outcome::input(e.to_string()),
    };
    match spec {
        FrameworkSpec::Spm => oracle_on(&Spm, bound, u, v, parse_spm_request),
        FrameworkSpec::SpmPair => oracle_on(&Product::new(Spm, Spm), bound, u, v, |_| None),
        FrameworkSpec::Spp => oracle_on(&Spp, bound, u, v, |_| None),
        FrameworkSpec::S01(a) => match S01::new(a) {
            Ok(f) => oracle_on(&f, bound, u, v, |_| None),
            Err(e) => Outcome::input(e.to_string()),
        },
        spec @ FrameworkSpec::Ssep { .. } => match spec.ssep() {
            Ok(f) => oracle_on(&f, bound, u, v, |_| None),
            Err(e) => Outcome::input(e.to_string()),
        },
    }
}

fn oracle_on<F: Framework>(
    f: &F,
    bound: usize,
    u: &str,
    v: &str,
    readable: impl Fn(&str) -> Option<F::Request>,
) -> Outcome {
    let parse = |text: &str| -> Result<F::Request, String> {
        let request = if text.starts_with("0x") {
            let bytes = parse_hex_field(text).map_err(|e| format!("{text:?}: {e}"))?;
            f.decode_request(&bytes).map_err(|e| format!("{text:?}: {e}"))?
        } else {
            readable(text).ok_or_else(|| format!("{text:?} is not a request of {}", f.id()))?
        };
        f.check_request(&request).map_err(|e| format!("{text:?}: {e}"))?;
        Ok(request)
    };
    let (u, v) = match (parse(u), parse(v)) {
        (Ok(u), Ok(v)) => (u, v),
        (Err(e), _) | (_, Err(e)) => return Outcome::input(e),
    };
    let oracle = match BruteForceOracle::new(f, bound) {
        Ok(o) => o,
        Err(e) => return Outcome::input(format!("bound {bound}: {e}")),
    };
    let formula = f.dominates(&u, &v);
    let exhaustive = oracle.check(&u, &v);
    let agree = formula == exhaustive.dominates;
    let mut message = format!(
        "formula={formula} oracle={} {}",
        exhaustive.dominates,
        if agree { "agree" } else { "disagree" }
    );
    if let Some(m) = exhaustive.counterexample {
        let _ = write!(message, "\ncounterexample item: {}", f.limit_of(&m));
    }
    Outcome { status: if agree { Status::Success } else { Status::Failure }, message }
}

/// `{1,3}/{2}`, `<{1,3},{2}>` or `⟨{1,3},{2}⟩`.
pub fn parse_spm_request(text: &str) -> Option<SpmRequest> {
    let mut groups = Vec::new();
    let mut rest = text.trim();
    rest = rest.strip_prefix('⟨').or_else(|| rest.strip_prefix('<')).unwrap_or(rest);
    rest = rest.strip_suffix('⟩').or_else(|| rest.strip_suffix('>')).unwrap_or(rest);
    let mut rest = rest.trim();
    while !rest.is_empty() {
        if !groups.is_empty() {
            rest = rest.strip_prefix(',').or_else(|| rest.strip_prefix('/'))?.trim_start();
        }
        let body = rest.strip_prefix('{')?;
        let close = body.find('}')?;
        let set: NatSet = body[..close]
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u64>().ok())
            .collect::<Option<_>>()?;
        groups.push(set);
        rest = body[close + 1..].trim_start();
    }
    match <[NatSet; 2]>::try_from(groups) {
        Ok([pos, neg]) => Some(SpmRequest { pos, neg }),
        Err(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn readable_set_requests() {
        let r = parse_spm_request("⟨{1,3},{2}⟩").unwrap();
        assert_eq!(r, SpmRequest { pos: [1, 3].into_iter().collect(), neg: [2].into_iter().collect() });
        assert_eq!(parse_spm_request("{1, 3} / {2}"), Some(r.clone()));
        assert_eq!(parse_spm_request("<{1,3},{2}>"), Some(r));
        assert_eq!(parse_spm_request("{}/{}"), Some(SpmRequest::default()));
        for bad in ["{1}", "{1}/{2}/{3}", "{a}/{}", "1,3/2", ""] {
            assert_eq!(parse_spm_request(bad), None, "{bad}");
        }
    }

    #[test]
    fn oracle_examples() {
        let agree = cmd_oracle("spm", 6, "{1,3}/{2}", "{1}/{2}");
        assert_eq!(agree.status, Status::Success);
        assert!(agree.message.starts_with("formula=true oracle=true agree"));
        let both_false = cmd_oracle("spm", 6, "{1}/{2}", "{1}/{4}");
        assert_eq!(both_false.status, Status::Success);
        assert!(both_false.message.starts_with("formula=false oracle=false agree"));
        assert_eq!(cmd_oracle("spm", 6, "{1/{2}", "{1}/{2}").status, Status::InputError);
        assert_eq!(cmd_oracle("spm", 6, "{1}/{1}", "{1}/{2}").status, Status::InputError);
        assert_eq!(cmd_oracle("bogus", 6, "{1}/{2}", "{1}/{2}").status, Status::InputError);
    }

    #[test]
    fn unknown_demo_is_an_input_error() {
        assert_eq!(cmd_demo("bogus", &RunOptions::default()).status, Status::InputError);
    }
}
