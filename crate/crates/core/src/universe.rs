//! Table-driven opponents: stage-wise enumerable sets `W_e`, partial 0/1
//! functions `φ_e` with convergence costs, and oracle functionals `Φ_e` with
//! use bounds.
//!
//! Unknown indices behave as the empty set / everywhere-divergent function.
//!
//! Text format (canonical form is what [`OpponentUniverse::to_text`] emits):
//!
//! ```text
//! universe v1
//! [ce-sets]
//! W 0: 2@3 5@7
//! [partials]
//! phi 1 4 -> 0 cost 2
//! [functionals]
//! Phi 0 5 00 -> 0 use 2 cost 1
//! ```
//!
//! `#` starts a comment; blank lines are ignored. An oracle key is a bit
//! string, written `-` when empty.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::encoding::{BitString, NatSet};
use crate::error::UniverseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialEntry {
    pub value: u8,
    pub cost: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalEntry {
    pub key: BitString,
    pub value: u8,
    pub use_bound: usize,
    pub cost: u64,
}

/// Raw, unvalidated tables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UniverseTable {
    /// `e ↦ [(element, appearance stage)]`, listed in order of appearance.
    pub ce_sets: BTreeMap<u64, Vec<(u64, u64)>>,
    pub partials: BTreeMap<(u64, u64), PartialEntry>,
    pub functionals: BTreeMap<(u64, u64), Vec<FunctionalEntry>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpponentUniverse {
    table: UniverseTable,
}

impl OpponentUniverse {
    pub fn empty() -> Self {
        OpponentUniverse { table: UniverseTable::default() }
    }

    /// Validates stage monotonicity and use-consistency.
    pub fn from_table(mut table: UniverseTable) -> Result<Self, UniverseError> {
        for (&e, list) in &table.ce_sets {
            let mut seen = NatSet::new();
            let mut last_stage = 0;
            for &(x, stage) in list {
                if !seen.insert(x) {
                    return Err(UniverseError::DuplicateElement { e, element: x });
                }
                if stage < last_stage {
                    return Err(UniverseError::NonMonotoneStages { e, element: x });
                }
                last_stage = stage;
            }
        }
        for (&(e, x), entry) in &table.partials {
            if entry.value > 1 {
                return Err(UniverseError::NotABit { key: format!("phi {e} {x}"), value: entry.value.into() });
            }
        }
        for (&(e, x), entries) in table.functionals.iter_mut() {
            entries.sort_by(|a, b| a.key.cmp(&b.key).then(a.use_bound.cmp(&b.use_bound)));
            for entry in entries.iter() {
                if entry.value > 1 {
                    return Err(UniverseError::NotABit {
                        key: format!("Phi {e} {x} {}", key_text(&entry.key)),
                        value: entry.value.into(),
                    });
                }
                if entry.key.len() < entry.use_bound {
                    return Err(UniverseError::KeyShorterThanUse {
                        e,
                        x,
                        key: key_text(&entry.key),
                        use_bound: entry.use_bound,
                    });
                }
            }
            for (i, first) in entries.iter().enumerate() {
                for second in &entries[i + 1..] {
                    if first.key == second.key {
                        return Err(UniverseError::Duplicate(format!("Phi {e} {x} {}", key_text(&first.key))));
                    }
                    for (anchor, other) in [(first, second), (second, first)] {
                        let u = anchor.use_bound;
                        let agrees = other.key.len() >= u && other.key.bits()[..u] == anchor.key.bits()[..u];
                        if agrees && (anchor.value != other.value || anchor.use_bound != other.use_bound) {
                            return Err(UniverseError::UseInconsistent {
                                e,
                                x,
                                first: key_text(&first.key),
                                second: key_text(&second.key),
                                use_bound: u,
                            });
                        }
                    }
                }
            }
        }
        Ok(OpponentUniverse { table })
    }

    pub fn table(&self) -> &UniverseTable {
        &self.table
    }

    /// Elements of `W_e` that have appeared by stage `stage`.
    pub fn we_at_stage(&self, e: u64, stage: u64) -> NatSet {
        self.table
            .ce_sets
            .get(&e)
            .map(|list| list.iter().filter(|&&(_, s)| s <= stage).map(|&(x, _)| x).collect())
            .unwrap_or_default()
    }

    /// Every element ever listed for `W_e`.
    pub fn we_all(&self, e: u64) -> NatSet {
        self.table.ce_sets.get(&e).map(|list| list.iter().map(|&(x, _)| x).collect()).unwrap_or_default()
    }

    /// Largest appearance stage in `W_e`'s table.
    pub fn we_last_stage(&self, e: u64) -> Option<u64> {
        self.table.ce_sets.get(&e).and_then(|list| list.iter().map(|&(_, s)| s).max())
    }

    /// `φ_e(x)` if it converges within `budget` steps.
    pub fn phi_eval(&self, e: u64, x: u64, budget: u64) -> Option<u8> {
        self.table.partials.get(&(e, x)).filter(|p| p.cost <= budget).map(|p| p.value)
    }

    /// `Φ_e^{oracle}(x)` as `(value, use)` if an entry matches the oracle
    /// below its use and converges within `budget` steps.
    pub fn functional_eval(&self, e: u64, oracle: &BitString, x: u64, budget: u64) -> Option<(u8, usize)> {
        self.table
            .functionals
            .get(&(e, x))?
            .iter()
            .filter(|f| {
                f.use_bound <= oracle.len() && f.cost <= budget && oracle.bits()[..f.use_bound] == f.key.bits()[..f.use_bound]
            })
            .min_by_key(|f| f.cost)
            .map(|f| (f.value, f.use_bound))
    }

    /// Entries of `Φ_e`, keyed by argument.
    pub fn functional_entries(&self, e: u64) -> impl Iterator<Item = (u64, &FunctionalEntry)> {
        self.table
            .functionals
            .range((e, 0)..=(e, u64::MAX))
            .flat_map(|(&(_, x), entries)| entries.iter().map(move |f| (x, f)))
    }

    /// Arguments on which `φ_e` converges at some budget.
    pub fn phi_domain(&self, e: u64) -> impl Iterator<Item = (u64, &PartialEntry)> {
        self.table.partials.range((e, 0)..=(e, u64::MAX)).map(|(&(_, x), p)| (x, p))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("universe v1\n[ce-sets]\n");
        for (e, list) in &self.table.ce_sets {
            let _ = write!(out, "W {e}:");
            for (x, s) in list {
                let _ = write!(out, " {x}@{s}");
            }
            out.push('\n');
        }
        out.push_str("[partials]\n");
        for ((e, x), p) in &self.table.partials {
            let _ = writeln!(out, "phi {e} {x} -> {} cost {}", p.value, p.cost);
        }
        out.push_str("[functionals]\n");
        for ((e, x), entries) in &self.table.functionals {
            for f in entries {
                let _ = writeln!(
                    out,
                    "Phi {e} {x} {} -> {} use {} cost {}",
                    key_text(&f.key),
                    f.value,
                    f.use_bound,
                    f.cost
                );
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, UniverseError> {
        Self::from_table(parse_table(text)?)
    }

    /// SHA-256 of the canonical text, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

fn key_text(key: &BitString) -> String {
    if key.is_empty() {
        "-".into()
    } else {
        key.to_string()
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    CeSets,
    Partials,
    Functionals,
}

fn parse_table(text: &str) -> Result<UniverseTable, UniverseError> {
    let mut table = UniverseTable::default();
    let mut section = Section::None;
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: &str| UniverseError::Parse { line: line_no, message: message.to_string() };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if !saw_header {
            if line != "universe v1" {
                return Err(err("expected header `universe v1`"));
            }
            saw_header = true;
            continue;
        }
        match line {
            "[ce-sets]" => {
                section = Section::CeSets;
                continue;
            }
            "[partials]" => {
                section = Section::Partials;
                continue;
            }
            "[functionals]" => {
                section = Section::Functionals;
                continue;
            }
            _ => {}
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let num = |t: &str| t.parse::<u64>().map_err(|_| err(&format!("expected a decimal natural, got {t:?}")));
        match section {
            Section::None => return Err(err("entry outside any section")),
            Section::CeSets => {
                if tokens.first() != Some(&"W") || tokens.len() < 2 {
                    return Err(err("expected `W <e>: <x>@<stage> ...`"));
                }
                let e = num(tokens[1].trim_end_matches(':'))?;
                if !tokens[1].ends_with(':') {
                    return Err(err("missing `:` after set index"));
                }
                let mut list = Vec::new();
                for t in &tokens[2..] {
                    let (x, s) = t.split_once('@').ok_or_else(|| err("expected `<x>@<stage>`"))?;
                    list.push((num(x)?, num(s)?));
                }
                if table.ce_sets.insert(e, list).is_some() {
                    return Err(UniverseError::Duplicate(format!("W {e}")));
                }
            }
            Section::Partials => {
                if tokens.len() != 7 || tokens[0] != "phi" || tokens[3] != "->" || tokens[5] != "cost" {
                    return Err(err("expected `phi <e> <x> -> <bit> cost <c>`"));
                }
                let (e, x) = (num(tokens[1])?, num(tokens[2])?);
                let value = num(tokens[4])?;
                if value > 1 {
                    return Err(UniverseError::NotABit { key: format!("phi {e} {x}"), value });
                }
                let entry = PartialEntry { value: value as u8, cost: num(tokens[6])? };
                if table.partials.insert((e, x), entry).is_some() {
                    return Err(UniverseError::Duplicate(format!("phi {e} {x}")));
                }
            }
            Section::Functionals => {
                if tokens.len() != 10
                    || tokens[0] != "Phi"
                    || tokens[4] != "->"
                    || tokens[6] != "use"
                    || tokens[8] != "cost"
                {
                    return Err(err("expected `Phi <e> <x> <key> -> <bit> use <u> cost <c>`"));
                }
                let (e, x) = (num(tokens[1])?, num(tokens[2])?);
                let key = if tokens[3] == "-" {
                    BitString::new()
                } else {
                    tokens[3].parse::<BitString>().map_err(|_| err("oracle key must be a bit string"))?
                };
                let value = num(tokens[5])?;
                if value > 1 {
                    return Err(UniverseError::NotABit { key: format!("Phi {e} {x}"), value });
                }
                table.functionals.entry((e, x)).or_default().push(FunctionalEntry {
                    key,
                    value: value as u8,
                    use_bound: num(tokens[7])? as usize,
                    cost: num(tokens[9])?,
                });
            }
        }
    }
    if !saw_header {
        return Err(UniverseError::Parse { line: 0, message: "empty universe file".into() });
    }
    Ok(table)
}
