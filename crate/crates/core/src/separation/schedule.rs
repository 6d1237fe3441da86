//! Separation schedules such as `MC-CFB-I-CIF`.
//!
//! Grammar: `"MC" ("-" TOKEN)+` with `TOKEN := I | T | MT | TI | OW | C[I][F][B]`.
//! `I` switches to integer solves; `TI` and `CI..` may only follow it.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CycleOptions {
    /// Breadth-first search on the zero-weight subgraph (integral points only).
    pub integer: bool,
    /// Chordless cycles only.
    pub facet: bool,
    /// Component bound before any path search.
    pub bounded: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Procedure {
    Cycles(CycleOptions),
    /// Terminal triangles; `integer` marks the integer-phase token `TI`.
    Terminal { integer: bool },
    MultiTerminal,
    OddWheel,
}

impl Procedure {
    pub fn needs_terminals(self) -> bool {
        matches!(self, Procedure::Terminal { .. } | Procedure::MultiTerminal)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    IntegerSwitch,
    Separate(Procedure),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    stages: Vec<Stage>,
    tokens: Vec<String>,
}

fn parse_cycle_token(tok: &str) -> Option<CycleOptions> {
    let mut rest = tok.strip_prefix('C')?;
    let mut opts = CycleOptions::default();
    if let Some(r) = rest.strip_prefix('I') {
        opts.integer = true;
        rest = r;
    }
    if let Some(r) = rest.strip_prefix('F') {
        opts.facet = true;
        rest = r;
    }
    if let Some(r) = rest.strip_prefix('B') {
        opts.bounded = true;
        rest = r;
    }
    rest.is_empty().then_some(opts)
}

pub fn parse_schedule(text: &str) -> Result<Schedule> {
    let err = |token: &str, reason: &'static str| Error::Schedule {
        text: text.to_string(),
        token: token.to_string(),
        reason,
    };
    let mut parts = text.trim().split('-');
    let head = parts.next().unwrap_or("");
    if head != "MC" {
        return Err(err(head, "schedule must start with"));
    }
    let mut stages = Vec::new();
    let mut tokens = Vec::new();
    let mut integer = false;
    for tok in parts {
        let stage = match tok {
            "I" => {
                integer = true;
                Stage::IntegerSwitch
            }
            "T" => Stage::Separate(Procedure::Terminal { integer: false }),
            "TI" => {
                if !integer {
                    return Err(err(tok, "integer token before the integer switch"));
                }
                Stage::Separate(Procedure::Terminal { integer: true })
            }
            "MT" => Stage::Separate(Procedure::MultiTerminal),
            "OW" => Stage::Separate(Procedure::OddWheel),
            _ => match parse_cycle_token(tok) {
                Some(opts) => {
                    if opts.integer && !integer {
                        return Err(err(tok, "integer token before the integer switch"));
                    }
                    Stage::Separate(Procedure::Cycles(opts))
                }
                None => return Err(err(tok, "unknown token")),
            },
        };
        stages.push(stage);
        tokens.push(tok.to_string());
    }
    if stages.is_empty() {
        return Err(err("", "no stages after"));
    }
    Ok(Schedule { stages, tokens })
}

impl Schedule {
    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn token(&self, i: usize) -> &str {
        &self.tokens[i]
    }

    /// Whether stage `i` solves integer programs.
    pub fn integer_at(&self, i: usize) -> bool {
        self.stages[..=i].contains(&Stage::IntegerSwitch)
    }

    /// Procedures active in stage `i`: every procedure introduced so far, in
    /// order of first appearance.
    pub fn cumulative(&self, i: usize) -> Vec<Procedure> {
        let mut out = Vec::new();
        for s in &self.stages[..=i] {
            if let Stage::Separate(p) = s {
                if !out.contains(p) {
                    out.push(*p);
                }
            }
        }
        out
    }

    pub fn needs_terminals(&self) -> bool {
        self.stages
            .iter()
            .any(|s| matches!(s, Stage::Separate(p) if p.needs_terminals()))
    }

    pub fn ends_integer(&self) -> bool {
        self.integer_at(self.stages.len() - 1)
    }
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_schedule(s)
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MC")?;
        for t in &self.tokens {
            write!(f, "-{t}")?;
        }
        Ok(())
    }
}
