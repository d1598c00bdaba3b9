//! FCAT v1: a line-oriented text format for fusion rings with optional
//! twists, dimensions and central charge. Grammar in `docs/fcat.md`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use fusioncat_core::{CycNum, FusionRing, ModularDatum, DEFAULT_ORDER_CAP, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based; 0 when the problem is with the file as a whole.
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            f.write_str(&self.msg)
        } else {
            write!(f, "line {}: {}", self.line, self.msg)
        }
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, msg: msg.into() })
}

/// A named category as read from or written to FCAT.
#[derive(Debug, Clone)]
pub struct Document {
    pub name: String,
    pub datum: ModularDatum,
}

fn index(tok: &str, line: usize) -> Result<usize, ParseError> {
    tok.parse().or_else(|_| err(line, format!("expected a label index, found `{tok}`")))
}

fn rational(tok: &str, line: usize) -> Result<Q, ParseError> {
    tok.parse::<Q>().or_else(|_| err(line, format!("expected a rational p/q, found `{tok}`")))
}

fn arity(toks: &[&str], n: usize, line: usize) -> Result<(), ParseError> {
    if toks.len() != n + 1 {
        return err(line, format!("`{}` takes {n} argument(s), found {}", toks[0], toks.len() - 1));
    }
    Ok(())
}

/// Parse FCAT text with the default cyclotomic order cap.
pub fn parse(text: &str) -> Result<Document, ParseError> {
    parse_with_cap(text, DEFAULT_ORDER_CAP)
}

pub fn parse_with_cap(text: &str, cap: u32) -> Result<Document, ParseError> {
    let mut name: Option<String> = None;
    let mut labels: BTreeMap<usize, (String, usize)> = BTreeMap::new();
    let mut unit: Option<(usize, usize)> = None;
    let mut duals: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut entries: BTreeMap<(usize, usize, usize), (u32, usize)> = BTreeMap::new();
    let mut twists: BTreeMap<usize, (Q, usize)> = BTreeMap::new();
    let mut dims: BTreeMap<usize, (CycNum, usize)> = BTreeMap::new();
    let mut c: Option<Q> = None;

    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        match toks[0] {
            "category" => {
                if name.is_some() {
                    return err(line, "second `category` directive");
                }
                let rest = body["category".len()..].trim();
                if rest.is_empty() {
                    return err(line, "`category` needs a name");
                }
                name = Some(rest.to_string());
            }
            "label" => {
                arity(&toks, 2, line)?;
                let i = index(toks[1], line)?;
                if labels.contains_key(&i) {
                    return err(line, format!("label {i} declared twice"));
                }
                if let Some((j, _)) = labels.iter().find(|(_, (s, _))| s == toks[2]) {
                    return err(line, format!("label name `{}` already used by {j}", toks[2]));
                }
                labels.insert(i, (toks[2].to_string(), line));
            }
            "unit" => {
                arity(&toks, 1, line)?;
                if unit.is_some() {
                    return err(line, "second `unit` directive");
                }
                unit = Some((index(toks[1], line)?, line));
            }
            "dual" => {
                arity(&toks, 2, line)?;
                let i = index(toks[1], line)?;
                let d = index(toks[2], line)?;
                if duals.insert(i, (d, line)).is_some() {
                    return err(line, format!("dual of {i} given twice"));
                }
            }
            "N" => {
                arity(&toks, 4, line)?;
                let (i, j, k) = (index(toks[1], line)?, index(toks[2], line)?, index(toks[3], line)?);
                let m: u32 = toks[4].parse().or_else(|_| {
                    err(line, format!("multiplicity must be a nonnegative integer, found `{}`", toks[4]))
                })?;
                if entries.insert((i, j, k), (m, line)).is_some() {
                    return err(line, format!("N {i} {j} {k} given twice"));
                }
            }
            "twist" => {
                arity(&toks, 2, line)?;
                let i = index(toks[1], line)?;
                if twists.insert(i, (rational(toks[2], line)?, line)).is_some() {
                    return err(line, format!("twist of {i} given twice"));
                }
            }
            "dim" => {
                if toks.len() < 3 {
                    return err(line, "`dim` takes an index and an expression");
                }
                let i = index(toks[1], line)?;
                let expr = body["dim".len()..].trim_start()[toks[1].len()..].trim();
                let d =
                    CycNum::parse_with_cap(expr, cap).or_else(|e| err(line, format!("bad dimension `{expr}`: {e}")))?;
                if dims.insert(i, (d, line)).is_some() {
                    return err(line, format!("dim of {i} given twice"));
                }
            }
            "c" => {
                arity(&toks, 1, line)?;
                if c.is_some() {
                    return err(line, "second `c` directive");
                }
                c = Some(rational(toks[1], line)?);
            }
            other => return err(line, format!("unknown directive `{other}`")),
        }
    }

    let name = match name {
        Some(n) => n,
        None => return err(0, "missing `category` directive"),
    };
    if labels.is_empty() {
        return err(0, "no labels declared");
    }
    let rank = labels.len();
    if let Some((&i, &(_, line))) = labels.iter().find(|(&i, _)| i >= rank) {
        return err(line, format!("label indices must be 0..{}, found {i}", rank - 1));
    }
    let in_range = |i: usize, line: usize| -> Result<(), ParseError> {
        if i >= rank {
            return err(line, format!("index {i} is not a declared label"));
        }
        Ok(())
    };
    let (unit, unit_line) = match unit {
        Some(u) => u,
        None => return err(0, "missing `unit` directive"),
    };
    in_range(unit, unit_line)?;
    for (&(i, j, k), &(_, line)) in &entries {
        in_range(i, line)?;
        in_range(j, line)?;
        in_range(k, line)?;
    }
    for (&i, &(d, line)) in &duals {
        in_range(i, line)?;
        in_range(d, line)?;
    }
    for (&i, &(_, line)) in &twists {
        in_range(i, line)?;
    }
    for (&i, &(_, line)) in &dims {
        in_range(i, line)?;
    }

    let names: Vec<String> = labels.into_values().map(|(s, _)| s).collect();
    let triples = entries.iter().map(|(&(i, j, k), &(m, _))| (i, j, k, m));
    let mut ring = FusionRing::new(names, unit, triples).or_else(|e| err(0, e.to_string()))?;
    for (i, (d, _)) in duals {
        ring.set_supplied_dual(i, d).or_else(|e| err(0, e.to_string()))?;
    }
    let mut datum = ModularDatum::new(ring);
    datum.set_order_cap(cap);
    for (i, (t, _)) in twists {
        datum.set_twist(i, t);
    }
    for (i, (d, _)) in dims {
        datum.set_dim(i, d);
    }
    if let Some(c) = c {
        datum.set_central_charge(c);
    }
    Ok(Document { name, datum })
}

fn rational_text(q: Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Canonical FCAT text. `emit(parse(emit(d)))` is byte-identical to
/// `emit(d)`.
pub fn emit(name: &str, md: &ModularDatum) -> String {
    let ring = md.ring();
    let mut out = String::new();
    let _ = writeln!(out, "# FCAT v1");
    let _ = writeln!(out, "category {name}");
    if let Some(c) = md.central_charge() {
        let _ = writeln!(out, "c {}", rational_text(c));
    }
    for (i, l) in ring.labels().iter().enumerate() {
        let _ = writeln!(out, "label {i} {l}");
    }
    let _ = writeln!(out, "unit {}", ring.unit());
    for i in 0..ring.rank() {
        if let Some(d) = ring.supplied_dual(i) {
            let _ = writeln!(out, "dual {i} {d}");
        }
    }
    let sorted: BTreeSet<(usize, usize, usize, u32)> = ring.entries().collect();
    for (i, j, k, m) in sorted {
        let _ = writeln!(out, "N {i} {j} {k} {m}");
    }
    for i in 0..ring.rank() {
        if let Some(t) = md.twist(i) {
            let _ = writeln!(out, "twist {i} {}", rational_text(t));
        }
    }
    for i in 0..ring.rank() {
        if let Some(d) = md.dim(i) {
            let _ = writeln!(out, "dim {i} {d}");
        }
    }
    out
}

/// Only the `N` lines, as printed by `verlinde`.
pub fn emit_entries(entries: &[(usize, usize, usize, u32)]) -> String {
    let sorted: BTreeSet<_> = entries.iter().copied().filter(|e| e.3 != 0).collect();
    let mut out = String::new();
    for (i, j, k, m) in sorted {
        let _ = writeln!(out, "N {i} {j} {k} {m}");
    }
    out
}
