//! Truncated q-series with rational exponents.
//!
//! A series knows its coefficients exactly for every exponent below its
//! `cutoff`; products track how far both factors are known.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::lattice::Coset;
use crate::Q;

#[derive(Debug, Clone, PartialEq)]
pub enum QSeriesError {
    /// The next omitted term is not small against the evaluated sum.
    TailTooLarge {
        estimate: f64,
        sum: f64,
    },
    DenominatorTooSmall(f64),
    CutoffMismatch,
}

impl fmt::Display for QSeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QSeriesError::TailTooLarge { estimate, sum } => {
                write!(f, "truncation tail {estimate:e} too large against sum {sum:e}")
            }
            QSeriesError::DenominatorTooSmall(v) => write!(f, "denominator evaluates to {v:e}"),
            QSeriesError::CutoffMismatch => f.write_str("series truncated at different orders"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    terms: BTreeMap<Q, BigInt>,
    cutoff: Q,
}

impl QSeries {
    pub fn zero(cutoff: Q) -> QSeries {
        QSeries { terms: BTreeMap::new(), cutoff }
    }

    pub fn monomial(exponent: Q, coeff: BigInt, cutoff: Q) -> QSeries {
        let mut s = QSeries::zero(cutoff);
        s.add_term(exponent, coeff);
        s
    }

    /// Adds `coeff q^exponent`; terms at or past the cutoff are dropped.
    pub fn add_term(&mut self, exponent: Q, coeff: BigInt) {
        if exponent >= self.cutoff || coeff.is_zero() {
            return;
        }
        let e = self.terms.entry(exponent).or_insert_with(BigInt::zero);
        *e += coeff;
        if e.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    pub fn cutoff(&self) -> Q {
        self.cutoff
    }

    /// `(exponent, coefficient)` pairs in increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (Q, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: Q) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn leading_exponent(&self) -> Option<Q> {
        self.terms.keys().next().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest exponent that could carry a nonzero coefficient.
    fn floor_exponent(&self) -> Q {
        self.leading_exponent().unwrap_or(self.cutoff)
    }

    /// Cut down to a smaller cutoff.
    pub fn truncate(&self, cutoff: Q) -> QSeries {
        let cutoff = if cutoff < self.cutoff { cutoff } else { self.cutoff };
        QSeries { terms: self.terms.range(..cutoff).map(|(e, c)| (*e, c.clone())).collect(), cutoff }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let cutoff = if self.cutoff < other.cutoff { self.cutoff } else { other.cutoff };
        let mut out = self.truncate(cutoff);
        for (e, c) in other.terms() {
            out.add_term(e, c.clone());
        }
        out
    }

    /// Product, known below `min(c1 + low2, c2 + low1)`.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let a = self.cutoff + other.floor_exponent();
        let b = other.cutoff + self.floor_exponent();
        let cutoff = if a < b { a } else { b };
        let mut out = QSeries::zero(cutoff);
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                if e1 + e2 >= cutoff {
                    break;
                }
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    /// Multiply by `q^s` (the cutoff moves with it).
    pub fn shift(&self, s: Q) -> QSeries {
        QSeries { terms: self.terms.iter().map(|(e, c)| (*e + s, c.clone())).collect(), cutoff: self.cutoff + s }
    }

    /// `sum c q^e` for real `0 < q < 1`.
    pub fn eval(&self, q: f64) -> f64 {
        let lq = libm::log(q);
        self.terms().map(|(e, c)| c.to_f64().unwrap_or(f64::NAN) * libm::exp(lq * q_to_f64(e))).sum()
    }

    /// Estimate of the first omitted term: `max |c| q^cutoff`.
    pub fn tail_estimate(&self, q: f64) -> f64 {
        let max = self.terms.values().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).fold(0.0, f64::max);
        max * libm::exp(libm::log(q) * q_to_f64(self.cutoff))
    }
}

fn q_to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Coefficients of `prod_{n>=1} (1 - q^n)^(-r)` up to degree `max_deg`.
pub fn eta_product_coeffs(r: u32, max_deg: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); max_deg + 1];
    c[0] = BigInt::from(1);
    for _ in 0..r {
        for n in 1..=max_deg {
            // multiply by 1/(1 - q^n)
            for k in n..=max_deg {
                let t = c[k - n].clone();
                c[k] += t;
            }
        }
    }
    c
}

/// `q^(-r/24) prod (1 - q^n)^(-r)`, exact below `cutoff`.
pub fn eta_inverse_power(r: u32, cutoff: Q) -> QSeries {
    let shift = Q::new(-i64::from(r), 24);
    let mut out = QSeries::zero(cutoff);
    if cutoff <= shift {
        return out;
    }
    let max_deg = (cutoff - shift).ceil().to_integer().max(0) as usize;
    for (n, c) in eta_product_coeffs(r, max_deg).into_iter().enumerate() {
        out.add_term(Q::from_integer(n as i64) + shift, c);
    }
    out
}

/// `sum_{x in coset, <x,x>/2 < cutoff} q^(<x,x>/2)`.
pub fn theta_coset(c: &Coset, cutoff: Q) -> QSeries {
    let mut out = QSeries::zero(cutoff);
    if cutoff <= Q::from_integer(0) {
        return out;
    }
    let two = Q::from_integer(2);
    for (_, n) in c.vectors_up_to(cutoff * two) {
        out.add_term(n / two, BigInt::from(1));
    }
    out
}

/// Character `q^(-c/24) sum theta_1 theta_2 prod (1-q^n)^(-rank)` of a sum
/// of tensor products of lattice modules, exact below `cutoff - c/24`.
pub fn character(pieces: &[(Coset, Coset)], c: Q, cutoff: Q) -> QSeries {
    let mut sum = QSeries::zero(cutoff);
    let mut rank = 0;
    for (a, b) in pieces {
        rank = a.lattice().rank() + b.lattice().rank();
        let t = theta_coset(a, cutoff).mul(&theta_coset(b, cutoff));
        sum = sum.add(&t.truncate(cutoff));
    }
    // eta_inverse_power carries q^(-rank/24); swap it for q^(-c/24)
    let eta = eta_inverse_power(rank as u32, cutoff).shift(Q::new(rank as i64, 24));
    sum.mul(&eta).truncate(cutoff).shift(-c / Q::from_integer(24))
}

/// `num(iy)/den(iy)` at `q = e^(-2 pi y)`.
pub fn qdim_ratio(num: &QSeries, den: &QSeries, y: f64) -> Result<f64, QSeriesError> {
    if num.cutoff() != den.cutoff() {
        return Err(QSeriesError::CutoffMismatch);
    }
    let q = libm::exp(-2.0 * core::f64::consts::PI * y);
    let (a, b) = (num.eval(q), den.eval(q));
    if b.abs() < 1e-300 {
        return Err(QSeriesError::DenominatorTooSmall(b));
    }
    for (s, v) in [(num, a), (den, b)] {
        let t = s.tail_estimate(q);
        if t > 1e-12 * v.abs() {
            return Err(QSeriesError::TailTooLarge { estimate: t, sum: v });
        }
    }
    Ok(a / b)
}

pub const DEFAULT_YS: [f64; 3] = [0.04, 0.02, 0.01];

/// `y -> 0` limit of [`qdim_ratio`] by polynomial (Richardson-Neville)
/// extrapolation through the given sample points.
pub fn qdim_extrapolated(num: &QSeries, den: &QSeries, ys: &[f64]) -> Result<f64, QSeriesError> {
    let mut p: Vec<f64> = Vec::with_capacity(ys.len());
    for &y in ys {
        p.push(qdim_ratio(num, den, y)?);
    }
    let n = ys.len();
    for m in 1..n {
        for i in 0..n - m {
            // value at 0 of the interpolant through ys[i..=i+m]
            p[i] = (ys[i + m] * p[i] - ys[i] * p[i + 1]) / (ys[i + m] - ys[i]);
        }
    }
    Ok(p[0])
}
