//! Line-oriented run files.
//!
//! ```text
//! run v1
//! framework spm
//! universe <sha256 of the universe's canonical text>
//! config horizon 20 quiescence 5 search_bound 64
//! strategies SIMPLE(0) SIMPLE(1)
//! stage 0 chain 0x0000 item 0x events act:0
//! stage 1 chain 0x010300,0x0000 item 0x03 events act:1,chg:0,inj:1/0
//! certificates 1
//! cert 0 SIMPLE(0) stage 2 declared 3 live witness 0,3 guard 0x010300
//! stabilization 1,2 yes
//! end
//! ```
//!
//! Requests and items are `0x`-hex of their canonical encodings. Events:
//! `act:i` activation, `chg:i` request change, `inj:i/j` injury of `i`
//! caused by `j`, `cert:i` declaration, `wd:i` withdrawal. Guards joining
//! several requests are written `joint:<hex>,<hex>`.

use std::fmt::Write as _;

use crate::encoding::{hex_field, parse_hex_field};
use crate::error::{FormatError, FrameworkError};
use crate::framework::{Certificate, Framework, Guard};

use super::{CertificateRecord, Event, FrameworkRun, Run, RunConfig, StageRecord};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunHeader {
    pub framework: String,
    pub universe_hash: String,
    pub config: RunConfig,
    pub strategies: Vec<String>,
}

fn list<T>(xs: &[T], f: impl Fn(&T) -> String) -> String {
    if xs.is_empty() {
        "-".into()
    } else {
        xs.iter().map(f).collect::<Vec<_>>().join(",")
    }
}

fn event_token(e: &Event) -> String {
    match e {
        Event::Activated(i) => format!("act:{i}"),
        Event::Changed(i) => format!("chg:{i}"),
        Event::Injured { index, cause } => format!("inj:{index}/{cause}"),
        Event::Declared(i) => format!("cert:{i}"),
        Event::Withdrawn(i) => format!("wd:{i}"),
    }
}

fn parse_event(token: &str) -> Option<Event> {
    let (tag, body) = token.split_once(':')?;
    let num = |s: &str| s.parse::<usize>().ok();
    Some(match tag {
        "act" => Event::Activated(num(body)?),
        "chg" => Event::Changed(num(body)?),
        "cert" => Event::Declared(num(body)?),
        "wd" => Event::Withdrawn(num(body)?),
        "inj" => {
            let (i, j) = body.split_once('/')?;
            Event::Injured { index: num(i)?, cause: num(j)? }
        }
        _ => return None,
    })
}

pub fn run_to_text<F: Framework>(f: &F, run: &FrameworkRun<F>) -> String {
    let c = &run.config;
    let mut out = String::from("run v1\n");
    let _ = writeln!(out, "framework {}", run.framework);
    let _ = writeln!(out, "universe {}", run.universe_hash);
    let _ = writeln!(out, "config horizon {} quiescence {} search_bound {}", c.horizon, c.quiescence, c.search_bound);
    let mut strategies = String::from("strategies");
    for label in &run.strategies {
        strategies.push(' ');
        strategies.push_str(label);
    }
    let _ = writeln!(out, "{strategies}");
    for (n, stage) in run.stages.iter().enumerate() {
        let _ = writeln!(
            out,
            "stage {n} chain {} item {} events {}",
            list(&stage.chain, |r| hex_field(&f.encode_request(r))),
            hex_field(&f.encode_item(&stage.item)),
            list(&stage.events, event_token),
        );
    }
    let _ = writeln!(out, "certificates {}", run.certificates.len());
    for rec in &run.certificates {
        let cert = &rec.certificate;
        let state = match rec.withdrawn {
            None => "live".to_string(),
            Some(w) => format!("withdrawn:{w}"),
        };
        let guard = match &cert.guard {
            Guard::Request(r) => hex_field(&f.encode_request(r)),
            Guard::Joint(rs) => format!("joint:{}", list(rs, |r| hex_field(&f.encode_request(r)))),
        };
        let _ = writeln!(
            out,
            "cert {} {} stage {} declared {} {state} witness {} guard {guard}",
            rec.strategy,
            cert.requirement,
            cert.stage,
            rec.declared,
            list(&cert.witness, u64::to_string),
        );
    }
    let _ = writeln!(
        out,
        "stabilization {} {}",
        list(&run.last_change, usize::to_string),
        if run.stabilized() { "yes" } else { "no" }
    );
    out.push_str("end\n");
    out
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate().peekable() }
    }

    /// Next line split on whitespace, with its 1-based number. Running out
    /// before the `end` marker means the file was cut short.
    fn next(&mut self) -> Result<(usize, Vec<&'a str>), FormatError> {
        let (i, line) = self.inner.next().ok_or(FormatError::Truncated)?;
        Ok((i + 1, line.split_whitespace().collect()))
    }

    fn peek_keyword(&mut self) -> Option<&'a str> {
        self.inner.peek().and_then(|(_, l)| l.split_whitespace().next())
    }
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

fn num<T: std::str::FromStr>(line: usize, token: &str) -> Result<T, FormatError> {
    token.parse().map_err(|_| syntax(line, format!("expected a decimal natural, got {token:?}")))
}

fn keyed<'a>(line: usize, tokens: &[&'a str], keys: &[&str]) -> Result<Vec<&'a str>, FormatError> {
    if tokens.len() != 2 * keys.len() {
        return Err(syntax(line, format!("expected {} key/value pairs", keys.len())));
    }
    keys.iter()
        .enumerate()
        .map(|(i, k)| {
            if tokens[2 * i] == *k {
                Ok(tokens[2 * i + 1])
            } else {
                Err(syntax(line, format!("expected `{k}`, got {:?}", tokens[2 * i])))
            }
        })
        .collect()
}

fn parse_header_lines(lines: &mut Lines<'_>) -> Result<RunHeader, FormatError> {
    let (l, t) = lines.next()?;
    if t != ["run", "v1"] {
        return Err(syntax(l, "expected `run v1`"));
    }
    let (l, t) = lines.next()?;
    let framework = match t.as_slice() {
        ["framework", id] => id.to_string(),
        _ => return Err(syntax(l, "expected `framework <id>`")),
    };
    let (l, t) = lines.next()?;
    let universe_hash = match t.as_slice() {
        ["universe", h] if h.len() == 64 && h.bytes().all(|b| b.is_ascii_hexdigit() && !b.is_ascii_uppercase()) => {
            h.to_string()
        }
        _ => return Err(syntax(l, "expected `universe <sha256 hex>`")),
    };
    let (l, t) = lines.next()?;
    if t.first() != Some(&"config") {
        return Err(syntax(l, "expected `config ...`"));
    }
    let v = keyed(l, &t[1..], &["horizon", "quiescence", "search_bound"])?;
    let config = RunConfig { horizon: num(l, v[0])?, quiescence: num(l, v[1])?, search_bound: num(l, v[2])? };
    let (l, t) = lines.next()?;
    if t.first() != Some(&"strategies") {
        return Err(syntax(l, "expected `strategies ...`"));
    }
    let strategies = t[1..].iter().map(|s| s.to_string()).collect();
    Ok(RunHeader { framework, universe_hash, config, strategies })
}

/// Header fields only, without decoding any moves.
pub fn read_header(text: &str) -> Result<RunHeader, FormatError> {
    parse_header_lines(&mut Lines::new(text))
}

fn hex_list<'a>(line: usize, token: &'a str) -> Result<Vec<Vec<u8>>, FormatError> {
    if token == "-" {
        return Ok(Vec::new());
    }
    token
        .split(',')
        .map(|h| parse_hex_field(h).map_err(|e| FormatError::Content { line, source: e.into() }))
        .collect()
}

pub fn parse_run<F: Framework>(f: &F, text: &str) -> Result<FrameworkRun<F>, FormatError> {
    let mut lines = Lines::new(text);
    let header = parse_header_lines(&mut lines)?;
    if header.framework != f.id() {
        return Err(FormatError::FrameworkMismatch { expected: f.id(), found: header.framework });
    }
    let content = |line: usize| move |source: FrameworkError| FormatError::Content { line, source };

    let mut stages = Vec::new();
    while lines.peek_keyword() == Some("stage") {
        let (l, t) = lines.next()?;
        let v = keyed(l, &t, &["stage", "chain", "item", "events"])?;
        if num::<usize>(l, v[0])? != stages.len() {
            return Err(syntax(l, format!("expected stage {}", stages.len())));
        }
        let chain = hex_list(l, v[1])?
            .iter()
            .map(|b| f.decode_request_raw(b).map_err(content(l)))
            .collect::<Result<Vec<_>, _>>()?;
        let item_bytes = parse_hex_field(v[2]).map_err(|e| content(l)(e.into()))?;
        let item = f.decode_item(&item_bytes).map_err(content(l))?;
        let events = if v[3] == "-" {
            Vec::new()
        } else {
            v[3].split(',').map(|e| parse_event(e).ok_or_else(|| syntax(l, format!("bad event {e:?}")))).collect::<Result<_, _>>()?
        };
        stages.push(StageRecord { chain, item, events });
    }

    let (l, t) = lines.next()?;
    let count: usize = match t.as_slice() {
        ["certificates", n] => num(l, n)?,
        _ => return Err(syntax(l, "expected `certificates <count>`")),
    };
    let mut certificates = Vec::with_capacity(count);
    for _ in 0..count {
        let (l, t) = lines.next()?;
        if t.len() != 12 || t[0] != "cert" {
            return Err(syntax(l, "expected a `cert` line"));
        }
        let strategy = num(l, t[1])?;
        let requirement = t[2].to_string();
        let v = keyed(l, &t[3..7], &["stage", "declared"])?;
        let (stage, declared) = (num(l, v[0])?, num(l, v[1])?);
        let withdrawn = match t[7] {
            "live" => None,
            w => Some(num(l, w.strip_prefix("withdrawn:").ok_or_else(|| syntax(l, "expected live or withdrawn:<stage>"))?)?),
        };
        let v = keyed(l, &t[8..12], &["witness", "guard"])?;
        let witness = if v[0] == "-" {
            Vec::new()
        } else {
            v[0].split(',').map(|x| num(l, x)).collect::<Result<_, _>>()?
        };
        let guard_text = v[1];
        let guard = match guard_text.strip_prefix("joint:") {
            Some(rest) => Guard::Joint(
                hex_list(l, rest)?.iter().map(|b| f.decode_request_raw(b).map_err(content(l))).collect::<Result<_, _>>()?,
            ),
            None => {
                let bytes = parse_hex_field(guard_text).map_err(|e| content(l)(e.into()))?;
                Guard::Request(f.decode_request_raw(&bytes).map_err(content(l))?)
            }
        };
        certificates.push(CertificateRecord {
            strategy,
            certificate: Certificate { requirement, witness, guard, stage },
            declared,
            withdrawn,
        });
    }

    let (l, t) = lines.next()?;
    let last_change = match t.as_slice() {
        ["stabilization", changes, "yes" | "no"] => {
            if *changes == "-" {
                Vec::new()
            } else {
                changes.split(',').map(|c| num(l, c)).collect::<Result<_, _>>()?
            }
        }
        _ => return Err(syntax(l, "expected `stabilization <stages> <yes|no>`")),
    };
    let stabilized_claim = t[2] == "yes";
    let (l, t) = lines.next()?;
    if t != ["end"] {
        return Err(syntax(l, "expected `end`"));
    }
    if let Ok((l, t)) = lines.next() {
        if !t.is_empty() {
            return Err(syntax(l, "content after `end`"));
        }
    }
    let run = Run {
        framework: header.framework,
        universe_hash: header.universe_hash,
        config: header.config,
        strategies: header.strategies,
        stages,
        certificates,
        last_change,
    };
    if run.stabilized() != stabilized_claim {
        return Err(syntax(l.saturating_sub(1), "stabilization flag disagrees with the recorded change stages"));
    }
    Ok(run)
}
