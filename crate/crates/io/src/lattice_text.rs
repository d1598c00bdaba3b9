//! Lattice text files:
//!
//! ```text
//! lattice L rank 2
//! gram 0 0 4
//! gram 0 1 -2
//! gram 1 1 4
//! coset c 1/2 1/2
//! ```
//!
//! `gram i j v` sets both `(i,j)` and `(j,i)`; unset entries are 0. A
//! `coset` belongs to the nearest preceding `lattice` and its coordinates
//! are in that lattice's basis. Coset names are unique per file.

use std::fmt::Write as _;

use fusioncat_core::{Coset, Lattice, Q};

use crate::fcat::ParseError;

#[derive(Debug, Clone)]
pub struct LatticeEntry {
    pub name: String,
    pub lattice: Lattice,
    pub cosets: Vec<(String, Coset)>,
}

#[derive(Debug, Clone, Default)]
pub struct LatticeFile {
    pub entries: Vec<LatticeEntry>,
}

impl LatticeFile {
    pub fn coset(&self, name: &str) -> Option<&Coset> {
        self.entries.iter().flat_map(|e| e.cosets.iter()).find(|(n, _)| n == name).map(|(_, c)| c)
    }

    pub fn lattice(&self, name: &str) -> Option<&Lattice> {
        self.entries.iter().find(|e| e.name == name).map(|e| &e.lattice)
    }
}

struct Pending {
    name: String,
    line: usize,
    gram: Vec<Vec<Option<Q>>>,
    cosets: Vec<(String, Vec<Q>, usize)>,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, msg: msg.into() })
}

fn rational(tok: &str, line: usize) -> Result<Q, ParseError> {
    tok.parse::<Q>().or_else(|_| err(line, format!("expected a rational p/q, found `{tok}`")))
}

fn finish(p: Pending) -> Result<LatticeEntry, ParseError> {
    let gram: Vec<Vec<Q>> =
        p.gram.iter().map(|row| row.iter().map(|x| x.unwrap_or_else(|| Q::from_integer(0))).collect()).collect();
    let lattice = Lattice::new(gram).or_else(|e| err(p.line, format!("lattice `{}`: {e}", p.name)))?;
    let mut cosets = Vec::with_capacity(p.cosets.len());
    for (name, v, line) in p.cosets {
        let c = Coset::new(&lattice, v).or_else(|e| err(line, format!("coset `{name}`: {e}")))?;
        cosets.push((name, c));
    }
    Ok(LatticeEntry { name: p.name, lattice, cosets })
}

pub fn parse(text: &str) -> Result<LatticeFile, ParseError> {
    let mut out = LatticeFile::default();
    let mut cur: Option<Pending> = None;
    let mut coset_names: Vec<String> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        match toks[0] {
            "lattice" => {
                if toks.len() != 4 || toks[2] != "rank" {
                    return err(line, "expected `lattice <name> rank <r>`");
                }
                let r: usize = match toks[3].parse() {
                    Ok(r) if r > 0 => r,
                    _ => return err(line, format!("bad rank `{}`", toks[3])),
                };
                if out.entries.iter().any(|e| e.name == toks[1]) || cur.as_ref().is_some_and(|p| p.name == toks[1]) {
                    return err(line, format!("lattice `{}` declared twice", toks[1]));
                }
                if let Some(p) = cur.take() {
                    out.entries.push(finish(p)?);
                }
                cur =
                    Some(Pending { name: toks[1].to_string(), line, gram: vec![vec![None; r]; r], cosets: Vec::new() });
            }
            "gram" => {
                let Some(p) = cur.as_mut() else {
                    return err(line, "`gram` before any `lattice`");
                };
                if toks.len() != 4 {
                    return err(line, "expected `gram <i> <j> <value>`");
                }
                let r = p.gram.len();
                let ij: Vec<usize> = toks[1..3]
                    .iter()
                    .map(|t| t.parse::<usize>().ok().filter(|&i| i < r))
                    .collect::<Option<_>>()
                    .map_or_else(|| err(line, format!("gram index out of range 0..{}", r - 1)), Ok)?;
                let v = rational(toks[3], line)?;
                let (i, j) = (ij[0], ij[1]);
                if p.gram[i][j].is_some() {
                    return err(line, format!("gram entry ({i},{j}) given twice"));
                }
                p.gram[i][j] = Some(v);
                p.gram[j][i] = Some(v);
            }
            "coset" => {
                let Some(p) = cur.as_mut() else {
                    return err(line, "`coset` before any `lattice`");
                };
                if toks.len() < 2 {
                    return err(line, "expected `coset <name> v1 v2 ...`");
                }
                let r = p.gram.len();
                if toks.len() != r + 2 {
                    return err(line, format!("coset `{}` needs {r} coordinates", toks[1]));
                }
                if coset_names.iter().any(|n| n == toks[1]) {
                    return err(line, format!("coset `{}` declared twice", toks[1]));
                }
                let v = toks[2..].iter().map(|t| rational(t, line)).collect::<Result<Vec<_>, _>>()?;
                coset_names.push(toks[1].to_string());
                p.cosets.push((toks[1].to_string(), v, line));
            }
            other => return err(line, format!("unknown directive `{other}`")),
        }
    }
    if let Some(p) = cur.take() {
        out.entries.push(finish(p)?);
    }
    Ok(out)
}

pub fn emit(file: &LatticeFile) -> String {
    let mut out = String::new();
    for e in &file.entries {
        let g = e.lattice.gram();
        let _ = writeln!(out, "lattice {} rank {}", e.name, g.len());
        for i in 0..g.len() {
            for j in i..g.len() {
                if g[i][j] != Q::from_integer(0) {
                    let _ = writeln!(out, "gram {i} {j} {}", g[i][j]);
                }
            }
        }
        for (name, c) in &e.cosets {
            let coords: Vec<String> = c.rep().iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "coset {name} {}", coords.join(" "));
        }
    }
    out
}
