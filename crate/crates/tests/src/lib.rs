//! The published s~ table for `U` as a checked fixture, used by the
//! acceptance target.

#![allow(clippy::needless_range_loop)]

use fusioncat_core::CycNum;
use sha2::{Digest, Sha256};

pub const PUBLISHED: &str = include_str!("../fixtures/u_stilde_published.txt");

/// sha256 of the non-comment lines, each with its newline.
pub fn data_digest(text: &str) -> String {
    let mut h = Sha256::new();
    for l in text.lines().filter(|l| !l.starts_with('#')) {
        h.update(l.as_bytes());
        h.update(b"\n");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn recorded_digest(text: &str) -> &str {
    text.lines().find_map(|l| l.strip_prefix("# sha256 of the data lines: ")).expect("digest header")
}

/// The 20x20 table, row-major.
pub fn published_table() -> Vec<Vec<CycNum>> {
    let mut m = vec![vec![None; 20]; 20];
    for l in PUBLISHED.lines().filter(|l| !l.starts_with('#')) {
        let mut parts = l.splitn(3, ' ');
        let i: usize = parts.next().unwrap().parse().unwrap();
        let j: usize = parts.next().unwrap().parse().unwrap();
        let x: CycNum = parts.next().unwrap().parse().unwrap_or_else(|e| panic!("{l}: {e}"));
        assert!(m[i][j].replace(x).is_none(), "duplicate entry {i} {j}");
    }
    m.into_iter().map(|row| row.into_iter().map(|x| x.expect("missing entry")).collect()).collect()
}

/// Which of untwisted (0..8), t (8..14), t^2 (14..20) a U index sits in.
pub fn sector(i: usize) -> usize {
    match i {
        0..=7 => 0,
        8..=13 => 1,
        _ => 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fusioncat_core::catalog::build_u;

    #[test]
    fn fixture_is_intact() {
        assert_eq!(data_digest(PUBLISHED), recorded_digest(PUBLISHED));
    }

    #[test]
    fn all_entries_parse() {
        let m = published_table();
        assert_eq!(m.len(), 20);
        assert_eq!(m[0][0].to_string(), "1");
        assert_eq!(m[6][7].to_string(), "-3");
        assert_eq!(m[8][0].to_string(), "2");
    }

    #[test]
    fn untwisted_rows_and_columns_match_derived_table() {
        let published = published_table();
        let ours = build_u().unwrap().stilde().unwrap();
        for i in 0..20 {
            for j in 0..20 {
                if sector(i) == 0 || sector(j) == 0 {
                    assert_eq!(published[i][j], ours[i][j], "entry ({i},{j})");
                }
            }
        }
    }

    /// `sum_k s~_ik conj(s~_jk)` against `72 delta_ij`.
    fn gram_defects(m: &[Vec<CycNum>]) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for i in 0..20 {
            for j in i..20 {
                let mut acc = CycNum::zero();
                for k in 0..20 {
                    acc = &acc + &(&m[i][k] * &m[j][k].conj());
                }
                let want = CycNum::from_integer(if i == j { 72 } else { 0 });
                if acc != want {
                    bad.push((i, j));
                }
            }
        }
        bad
    }

    #[test]
    fn published_table_is_not_unitary() {
        // the derived table is; the published one cannot come from any modular datum
        assert!(gram_defects(&build_u().unwrap().stilde().unwrap()).is_empty());
        let bad = gram_defects(&published_table());
        // row 11 against its own block, and rows 17..19 against nearly everything
        for pair in [(8, 11), (11, 13), (0, 17), (16, 19)] {
            assert!(bad.contains(&pair), "{bad:?}");
        }
        assert!(bad.iter().all(|&(i, j)| i == 11 || j == 11 || j >= 17), "{bad:?}");
    }
}
