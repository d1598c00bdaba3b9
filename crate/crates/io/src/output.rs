//! Text renderings shared by the CLI: exact matrices, `i j expr` grids,
//! float tables and q-series dumps.

use std::fmt::Write as _;

use fusioncat_core::modular_data::CycMatrix;
use fusioncat_core::{CycNum, QSeries};

/// Significant digits used by float output.
pub const FLOAT_DIGITS: usize = 10;

/// Round to `digits` significant digits (ties to even) and print without
/// an exponent when the magnitude allows it.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    assert!(digits > 0);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let neg = mant.starts_with('-');
    let digits_only: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits_only = digits_only.trim_end_matches('0');
    let digits_only = if digits_only.is_empty() { "0" } else { digits_only };
    if !(-6..=15).contains(&exp) {
        let m = if digits_only.len() > 1 {
            format!("{}.{}", &digits_only[..1], &digits_only[1..])
        } else {
            digits_only.to_string()
        };
        return format!("{}{m}e{exp}", if neg { "-" } else { "" });
    }
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    let point = exp + 1;
    if point <= 0 {
        s.push_str("0.");
        for _ in 0..(-point) {
            s.push('0');
        }
        s.push_str(digits_only);
    } else {
        let p = point as usize;
        if digits_only.len() <= p {
            s.push_str(digits_only);
            for _ in digits_only.len()..p {
                s.push('0');
            }
        } else {
            s.push_str(&digits_only[..p]);
            s.push('.');
            s.push_str(&digits_only[p..]);
        }
    }
    s
}

/// `a`, `bi` or `a+bi` at [`FLOAT_DIGITS`].
pub fn fmt_complex(z: (f64, f64)) -> String {
    let tol = 1e-12 * z.0.abs().max(z.1.abs()).max(1.0);
    let re = if z.0.abs() < tol { 0.0 } else { z.0 };
    let im = if z.1.abs() < tol { 0.0 } else { z.1 };
    match (re == 0.0, im == 0.0) {
        (_, true) => fmt_sig(re, FLOAT_DIGITS),
        (true, false) => format!("{}i", fmt_sig(im, FLOAT_DIGITS)),
        (false, false) => {
            let sign = if im < 0.0 { '-' } else { '+' };
            format!("{}{sign}{}i", fmt_sig(re, FLOAT_DIGITS), fmt_sig(im.abs(), FLOAT_DIGITS))
        }
    }
}

/// One entry per line: `i j expr`, row-major.
pub fn grid(m: &CycMatrix) -> String {
    let mut out = String::new();
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let _ = writeln!(out, "{i} {j} {x}");
        }
    }
    out
}

/// Rows of tab-separated entries, each rendered by `f`.
pub fn table(m: &CycMatrix, f: impl Fn(&CycNum) -> String) -> String {
    let mut out = String::new();
    for row in m {
        let cells: Vec<String> = row.iter().map(&f).collect();
        let _ = writeln!(out, "{}", cells.join("\t"));
    }
    out
}

/// `exponent coefficient` per line, ascending, then the cutoff.
pub fn series_dump(s: &QSeries) -> String {
    let mut out = String::new();
    for (e, c) in s.terms() {
        let _ = writeln!(out, "{e} {c}");
    }
    let _ = writeln!(out, "# cutoff {}", s.cutoff());
    out
}
