//! Exact arithmetic in cyclotomic fields Q(zeta_N).
//!
//! A [`CycNum`] is stored over the power basis `1, z, ..., z^(phi(N)-1)` of
//! `Q(z)`, `z = e^(2 pi i/N)`, reduced modulo the cyclotomic polynomial
//! `Phi_N`, with integer numerators over one positive common denominator.
//! Operands of different orders are promoted to the lcm of their orders;
//! promotion past the order cap is an error.
//!
//! The textual form is a sum of rational multiples of `e(p/q)`
//! (`e(p/q) = exp(2 pi i p/q)`), e.g. `2*e(-2/9)+2*e(1/9)`.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg;

/// Largest order reachable by promotion unless a caller asks otherwise.
pub const DEFAULT_ORDER_CAP: u32 = 720;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycError {
    OrderCapExceeded {
        needed: u64,
        cap: u32,
    },
    /// `to_order(m)` with `m` not a multiple of the current order.
    IncompatibleOrder {
        from: u32,
        to: u32,
    },
    DivisionByZero,
    Parse {
        pos: usize,
        msg: String,
    },
}

impl fmt::Display for CycError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycError::OrderCapExceeded { needed, cap } => {
                write!(f, "cyclotomic order {needed} exceeds cap {cap}")
            }
            CycError::IncompatibleOrder { from, to } => {
                write!(f, "cannot move order {from} element to order {to}")
            }
            CycError::DivisionByZero => f.write_str("division by zero"),
            CycError::Parse { pos, msg } => write!(f, "at column {}: {msg}", pos + 1),
        }
    }
}

#[derive(Debug)]
struct Field {
    order: u32,
    phi: usize,
    /// Phi_N = x^phi + sum of (k, a) as a x^k.
    low: Vec<(usize, i64)>,
}

fn mobius(mut n: u64) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    out.sort_unstable();
    out
}

/// Coefficients of Phi_n, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    // Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)}
    let n64 = u64::from(n);
    let mut poly: Vec<i128> = vec![1];
    let mut dividers = Vec::new();
    for d in divisors(n64) {
        match mobius(n64 / d) {
            1 => {
                let d = d as usize;
                let mut next = vec![0i128; poly.len() + d];
                for (i, c) in poly.iter().enumerate() {
                    next[i + d] += c;
                    next[i] -= c;
                }
                poly = next;
            }
            -1 => dividers.push(d as usize),
            _ => {}
        }
    }
    for d in dividers {
        // exact division by x^d - 1, from the top
        let deg = poly.len() - 1;
        let mut q = vec![0i128; deg - d + 1];
        let mut rem = poly.clone();
        for t in (d..=deg).rev() {
            let c = rem[t];
            if c != 0 {
                q[t - d] = c;
                rem[t] = 0;
                rem[t - d] += c;
            }
        }
        debug_assert!(rem.iter().all(|&c| c == 0));
        poly = q;
    }
    poly.into_iter().map(|c| c as i64).collect()
}

fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

fn field(order: u32) -> Arc<Field> {
    let poly = cyclotomic_polynomial(order);
    let phi = poly.len() - 1;
    debug_assert_eq!(phi as u64, euler_phi(u64::from(order)));
    let low = poly[..phi].iter().enumerate().filter(|(_, c)| **c != 0).map(|(k, c)| (k, *c)).collect();
    Arc::new(Field { order, phi, low })
}

fn lcm(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

/// Order needed to hold both operands, or an error past `cap`.
pub fn common_order(a: u32, b: u32, cap: u32) -> Result<u32, CycError> {
    let l = lcm(u64::from(a), u64::from(b));
    if l > u64::from(cap) {
        return Err(CycError::OrderCapExceeded { needed: l, cap });
    }
    Ok(l as u32)
}

/// Exact element of Q(zeta_N).
#[derive(Clone)]
pub struct CycNum {
    field: Arc<Field>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum[{}]({})", self.order(), self)
    }
}

impl CycNum {
    fn from_poly(field: Arc<Field>, mut poly: Vec<BigInt>, den: BigInt) -> CycNum {
        let phi = field.phi;
        if poly.len() < phi {
            poly.resize(phi, BigInt::zero());
        }
        for t in (phi..poly.len()).rev() {
            if poly[t].is_zero() {
                continue;
            }
            let c = core::mem::take(&mut poly[t]);
            for &(k, a) in &field.low {
                poly[t - phi + k] -= &c * a;
            }
        }
        poly.truncate(phi);
        let mut out = CycNum { field, num: poly, den };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        assert!(!self.den.is_zero(), "zero denominator");
        if self.den.is_negative() {
            self.den = -core::mem::take(&mut self.den);
            for c in self.num.iter_mut() {
                *c = -core::mem::take(c);
            }
        }
        if self.num.iter().all(|c| c.is_zero()) {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if c.is_zero() {
                continue;
            }
            g = g.gcd(c);
            if g.is_one() {
                return;
            }
        }
        for c in self.num.iter_mut() {
            *c = &*c / &g;
        }
        self.den = &self.den / &g;
    }

    pub fn zero() -> CycNum {
        CycNum::from_integer(BigInt::zero())
    }

    pub fn one() -> CycNum {
        CycNum::from_integer(BigInt::one())
    }

    pub fn from_integer(n: impl Into<BigInt>) -> CycNum {
        CycNum::from_poly(field(1), vec![n.into()], BigInt::one())
    }

    pub fn from_rational(r: &BigRational) -> CycNum {
        CycNum::from_poly(field(1), vec![r.numer().clone()], r.denom().clone())
    }

    pub fn from_ratio(num: i64, den: i64) -> CycNum {
        CycNum::from_poly(field(1), vec![BigInt::from(num)], BigInt::from(den))
    }

    /// `e^(2 pi i num/den)`, stored at order `den / gcd(num, den)`.
    pub fn root_of_unity(num: i64, den: u32) -> CycNum {
        assert!(den >= 1, "root_of_unity needs den >= 1");
        let d = i64::from(den);
        let g = num.gcd(&d);
        let order = (d / g) as u32;
        let k = (num / g).rem_euclid(i64::from(order)) as usize;
        CycNum::monomial(field(order), k, BigInt::one())
    }

    /// `zeta_order^k` at exactly the given order (not reduced to the minimal one).
    pub fn root_of_unity_at(order: u32, k: i64) -> CycNum {
        let k = k.rem_euclid(i64::from(order)) as usize;
        CycNum::monomial(field(order), k, BigInt::one())
    }

    fn monomial(field: Arc<Field>, k: usize, c: BigInt) -> CycNum {
        let mut poly = vec![BigInt::zero(); k.max(field.phi - 1) + 1];
        poly[k] = c;
        CycNum::from_poly(field, poly, BigInt::one())
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    /// Canonical coefficients over `1, z, ..., z^(phi(N)-1)`.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.to_rational().is_some_and(|r| r.is_one())
    }

    /// `Some(r)` when the value is rational.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.num.iter().skip(1).all(|c| c.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Re-express at order `m`, which must be a multiple of the current order.
    pub fn to_order(&self, m: u32) -> Result<CycNum, CycError> {
        let n = self.order();
        if m == n {
            return Ok(self.clone());
        }
        if m == 0 || !m.is_multiple_of(n) {
            return Err(CycError::IncompatibleOrder { from: n, to: m });
        }
        let step = (m / n) as usize;
        let f = field(m);
        let mut poly = vec![BigInt::zero(); (self.num.len().saturating_sub(1)) * step + 1];
        for (k, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                poly[k * step] = c.clone();
            }
        }
        Ok(CycNum::from_poly(f, poly, self.den.clone()))
    }

    fn aligned(&self, other: &CycNum, cap: u32) -> Result<(CycNum, CycNum), CycError> {
        let m = common_order(self.order(), other.order(), cap)?;
        Ok((self.to_order(m)?, other.to_order(m)?))
    }

    fn add_same(&self, other: &CycNum) -> CycNum {
        let phi = self.field.phi;
        let mut poly = Vec::with_capacity(phi);
        if self.den == other.den {
            for k in 0..phi {
                poly.push(&self.num[k] + &other.num[k]);
            }
            return CycNum::from_poly(self.field.clone(), poly, self.den.clone());
        }
        for k in 0..phi {
            poly.push(&self.num[k] * &other.den + &other.num[k] * &self.den);
        }
        CycNum::from_poly(self.field.clone(), poly, &self.den * &other.den)
    }

    fn mul_same(&self, other: &CycNum) -> CycNum {
        let phi = self.field.phi;
        let mut poly = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    poly[i + j] += a * b;
                }
            }
        }
        CycNum::from_poly(self.field.clone(), poly, &self.den * &other.den)
    }

    pub fn checked_add(&self, other: &CycNum, cap: u32) -> Result<CycNum, CycError> {
        if Arc::ptr_eq(&self.field, &other.field) || self.order() == other.order() {
            return Ok(self.add_same(other));
        }
        let (a, b) = self.aligned(other, cap)?;
        Ok(a.add_same(&b))
    }

    pub fn checked_sub(&self, other: &CycNum, cap: u32) -> Result<CycNum, CycError> {
        self.checked_add(&other.neg_ref(), cap)
    }

    pub fn checked_mul(&self, other: &CycNum, cap: u32) -> Result<CycNum, CycError> {
        if self.order() == other.order() {
            return Ok(self.mul_same(other));
        }
        // rational factors never force a promotion
        if let Some(r) = other.to_rational() {
            return Ok(self.scale(&r));
        }
        if let Some(r) = self.to_rational() {
            return Ok(other.scale(&r));
        }
        let (a, b) = self.aligned(other, cap)?;
        Ok(a.mul_same(&b))
    }

    pub fn checked_div(&self, other: &CycNum, cap: u32) -> Result<CycNum, CycError> {
        let inv = other.inv()?;
        self.checked_mul(&inv, cap)
    }

    fn neg_ref(&self) -> CycNum {
        CycNum { field: self.field.clone(), num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }

    /// Multiply by a rational scalar; keeps the order.
    pub fn scale(&self, r: &BigRational) -> CycNum {
        let poly = self.num.iter().map(|c| c * r.numer()).collect();
        CycNum::from_poly(self.field.clone(), poly, &self.den * r.denom())
    }

    /// Multiply by `zeta_N^k` where `N` is this number's order.
    pub fn mul_root(&self, k: i64) -> CycNum {
        let n = i64::from(self.order());
        let k = k.rem_euclid(n) as usize;
        if k == 0 {
            return self.clone();
        }
        let mut poly = vec![BigInt::zero(); self.num.len() + k];
        for (j, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                poly[j + k] = c.clone();
            }
        }
        CycNum::from_poly(self.field.clone(), poly, self.den.clone())
    }

    /// Complex conjugation, the automorphism `z -> z^-1`.
    pub fn conj(&self) -> CycNum {
        self.galois(-1)
    }

    /// The Galois automorphism `z -> z^k`, `gcd(k, N) = 1`.
    pub fn galois(&self, k: i64) -> CycNum {
        let n = i64::from(self.order());
        assert!(k.gcd(&n) == 1, "galois exponent must be a unit mod N");
        let mut poly = vec![BigInt::zero(); n as usize];
        for (j, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                let e = (j as i64 * k).rem_euclid(n) as usize;
                poly[e] += c;
            }
        }
        CycNum::from_poly(self.field.clone(), poly, self.den.clone())
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<CycNum, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        if let Some(r) = self.to_rational() {
            return Ok(CycNum::from_poly(self.field.clone(), vec![r.denom().clone()], r.numer().clone()));
        }
        let nonzero: Vec<usize> = (0..self.num.len()).filter(|&k| !self.num[k].is_zero()).collect();
        if nonzero.len() == 1 {
            // c z^k -> (1/c) z^(N-k)
            let k = nonzero[0];
            let n = self.order() as usize;
            let mut poly = vec![BigInt::zero(); n];
            poly[(n - k) % n] = self.den.clone();
            return Ok(CycNum::from_poly(self.field.clone(), poly, self.num[k].clone()));
        }
        // Solve (self * x) = 1 over the power basis.
        let phi = self.field.phi;
        let mut cols = Vec::with_capacity(phi);
        let mut cur = CycNum { field: self.field.clone(), num: self.num.clone(), den: BigInt::one() };
        for _ in 0..phi {
            cols.push(cur.coeffs());
            cur = cur.mul_root(1);
        }
        let mat: Vec<Vec<BigRational>> = (0..phi).map(|r| (0..phi).map(|c| cols[c][r].clone()).collect()).collect();
        let mut rhs = vec![BigRational::zero(); phi];
        rhs[0] = BigRational::one();
        let x = linalg::solve(mat, rhs).ok_or(CycError::DivisionByZero)?;
        let lcm_den = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let poly: Vec<BigInt> = x.iter().map(|v| v.numer() * (&lcm_den / v.denom()) * &self.den).collect();
        Ok(CycNum::from_poly(self.field.clone(), poly, lcm_den))
    }

    pub fn pow(&self, e: i64) -> Result<CycNum, CycError> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycNum::one().to_order(self.order())?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            base = base.mul_same(&base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Complex embedding with `z -> e^(2 pi i/N)`, in double precision.
    pub fn embed(&self) -> (f64, f64) {
        let n = f64::from(self.order());
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        let (mut re, mut im) = (0.0, 0.0);
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.to_f64().unwrap_or(f64::NAN) / den;
            let ang = 2.0 * core::f64::consts::PI * (k as f64) / n;
            re += v * libm::cos(ang);
            im += v * libm::sin(ang);
        }
        (re, im)
    }

    /// Same value at the smallest order (the conductor; orders 2 mod 4 are
    /// never used since Q(zeta_2m) = Q(zeta_m) for odd m).
    pub fn reduce_order(&self) -> CycNum {
        if let Some(r) = self.to_rational() {
            return CycNum::from_rational(&r);
        }
        let n = self.order();
        let target = self.coeffs();
        for d in divisors(u64::from(n)) {
            let d = d as u32;
            if d == n {
                break;
            }
            if d % 4 == 2 || d == 1 {
                continue;
            }
            let sub_phi = euler_phi(u64::from(d)) as usize;
            let step = i64::from(n / d);
            let basis: Vec<Vec<BigRational>> =
                (0..sub_phi).map(|j| CycNum::root_of_unity_at(n, j as i64 * step).coeffs()).collect();
            let mat: Vec<Vec<BigRational>> =
                (0..target.len()).map(|r| (0..sub_phi).map(|c| basis[c][r].clone()).collect()).collect();
            if let Some(y) = linalg::solve(mat, target.clone()) {
                let lcm_den = y.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                let poly = y.iter().map(|v| v.numer() * (&lcm_den / v.denom())).collect();
                return CycNum::from_poly(field(d), poly, lcm_den);
            }
        }
        self.clone()
    }

    /// Sign of a real value; `None` when the value is not real (exactly).
    pub fn real_sign(&self) -> Option<core::cmp::Ordering> {
        if self.conj() != *self {
            return None;
        }
        if self.is_zero() {
            return Some(core::cmp::Ordering::Equal);
        }
        let (re, _) = self.embed();
        Some(if re > 0.0 { core::cmp::Ordering::Greater } else { core::cmp::Ordering::Less })
    }

    /// Positive square root of a positive rational, as a cyclotomic number.
    /// Built from quadratic Gauss sums, so the order is 1, 4p-type or 8-type.
    pub fn sqrt_rational(r: &BigRational, cap: u32) -> Result<CycNum, CycError> {
        assert!(r.is_positive(), "sqrt_rational needs r > 0");
        // sqrt(a/b) = sqrt(a*b)/b; pull out square factors
        let mut m = r.numer() * r.denom();
        let mut outside = BigInt::one();
        let mut radical = BigInt::one();
        let mut p = BigInt::from(2u32);
        while &p * &p <= m {
            let mut e = 0u32;
            while (&m % &p).is_zero() {
                m /= &p;
                e += 1;
            }
            for _ in 0..e / 2 {
                outside *= &p;
            }
            if e % 2 == 1 {
                radical *= &p;
            }
            p += 1u32;
        }
        radical *= &m;
        let mut root = CycNum::from_rational(&BigRational::new(outside, r.denom().clone()));
        let mut rest = radical;
        let mut p = 2u64;
        while !rest.is_one() {
            if (&rest % p).is_zero() {
                rest /= p;
                root = root.checked_mul(&sqrt_prime(p), cap)?;
            }
            p += 1;
        }
        Ok(root)
    }
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else if r == 0 {
        0
    } else {
        -1
    }
}

/// sqrt(p) for a prime p.
fn sqrt_prime(p: u64) -> CycNum {
    if p == 2 {
        return &CycNum::root_of_unity(1, 8) + &CycNum::root_of_unity(-1, 8);
    }
    let order = p as u32;
    let mut g = CycNum::zero().to_order(order).unwrap();
    for a in 1..p {
        let z = CycNum::root_of_unity_at(order, a as i64);
        if legendre(a, p) == 1 {
            g = g.add_same(&z);
        } else {
            g = g.add_same(&z.neg_ref());
        }
    }
    // g = sqrt(p) for p = 1 mod 4 and i sqrt(p) for p = 3 mod 4
    if p % 4 == 1 {
        g
    } else {
        let minus_i = CycNum::root_of_unity(-1, 4);
        g.checked_mul(&minus_i, u32::MAX).unwrap()
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &CycNum) -> bool {
        if self.order() == other.order() {
            return self.den == other.den && self.num == other.num;
        }
        match self.aligned(other, u32::MAX) {
            Ok((a, b)) => a.den == b.den && a.num == b.num,
            Err(_) => false,
        }
    }
}

impl Eq for CycNum {}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&CycNum> for &CycNum {
            type Output = CycNum;
            /// # Panics
            /// When promotion exceeds [`DEFAULT_ORDER_CAP`] (or on division by zero).
            fn $m(self, rhs: &CycNum) -> CycNum {
                match self.$checked(rhs, DEFAULT_ORDER_CAP) {
                    Ok(v) => v,
                    Err(e) => panic!("{}", e),
                }
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        self.neg_ref()
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        self.neg_ref()
    }
}

fn write_rational(out: &mut String, r: &BigRational) {
    out.push_str(&r.numer().to_string());
    if !r.denom().is_one() {
        out.push('/');
        out.push_str(&r.denom().to_string());
    }
}

impl fmt::Display for CycNum {
    /// Prints at the minimal order, so equal values print identically.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduce_order();
        if r.is_zero() {
            return f.write_str("0");
        }
        let n = i64::from(r.order());
        let mut out = String::new();
        for (k, c) in r.coeffs().into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            if k == 0 {
                write_rational(&mut out, &mag);
                continue;
            }
            if !mag.is_one() {
                write_rational(&mut out, &mag);
                out.push('*');
            }
            let mut e = k as i64;
            if 2 * e > n {
                e -= n;
            }
            let g = e.gcd(&n);
            out.push_str(&alloc::format!("e({}/{})", e / g, n / g));
        }
        f.write_str(&out)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    cap: u32,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, CycError> {
        Err(CycError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt, CycError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let txt = core::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(BigInt::from_str(txt).unwrap())
    }

    /// `int` or `int/int`, optionally signed
    fn rational(&mut self) -> Result<BigRational, CycError> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let n = self.integer()?;
        let d = if self.eat(b'/') { self.integer()? } else { BigInt::one() };
        if d.is_zero() {
            return self.err("zero denominator");
        }
        let r = BigRational::new(n, d);
        Ok(if neg { -r } else { r })
    }

    fn expr(&mut self) -> Result<CycNum, CycError> {
        self.eat(b'+');
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                let t = self.term()?;
                acc = acc.checked_add(&t, self.cap)?;
            } else if self.eat(b'-') {
                let t = self.term()?;
                acc = acc.checked_sub(&t, self.cap)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<CycNum, CycError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let f = self.factor()?;
            acc = acc.checked_mul(&f, self.cap)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<CycNum, CycError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(v)
            }
            Some(b'e') => {
                self.pos += 1;
                if !self.eat(b'(') {
                    return self.err("expected '(' after e");
                }
                let r = self.rational()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                let den = r.denom().to_u64().filter(|&d| d <= u64::from(self.cap));
                let Some(den) = den else {
                    return Err(CycError::OrderCapExceeded {
                        needed: r.denom().to_u64().unwrap_or(u64::MAX),
                        cap: self.cap,
                    });
                };
                let num = (r.numer() % BigInt::from(den)).to_i64().unwrap();
                Ok(CycNum::root_of_unity(num, den as u32))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let d = if self.eat(b'/') { self.integer()? } else { BigInt::one() };
                if d.is_zero() {
                    return self.err("zero denominator");
                }
                Ok(CycNum::from_rational(&BigRational::new(n, d)))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

impl CycNum {
    /// Parse the textual form with an explicit order cap.
    pub fn parse_with_cap(s: &str, cap: u32) -> Result<CycNum, CycError> {
        let mut p = Parser { s: s.as_bytes(), pos: 0, cap };
        let v = p.expr()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(v)
    }
}

impl FromStr for CycNum {
    type Err = CycError;
    fn from_str(s: &str) -> Result<CycNum, CycError> {
        CycNum::parse_with_cap(s, DEFAULT_ORDER_CAP)
    }
}
