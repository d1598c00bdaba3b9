//! Positive-definite lattices given by Gram matrices, cosets of a lattice in
//! its dual, and minimal-norm search.
//!
//! Coordinates are always with respect to the lattice basis. The rank-2
//! lattice `L` below has basis `b2, b3` with `<b2,b2> = <b3,b3> = 4`,
//! `<b2,b3> = -2`; the rank-1 lattice `Zb1` has `<b1,b1> = 6`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Roots;
use num_traits::{Signed, Zero};

use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    NotSymmetric,
    NotPositiveDefinite,
    NotIntegral,
    Mismatch,
    Dimension {
        expected: usize,
        got: usize,
    },
    /// `tau_action` only knows the order-3 isometry of `L`.
    NotL,
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::NotSymmetric => f.write_str("Gram matrix is not symmetric"),
            LatticeError::NotPositiveDefinite => f.write_str("Gram matrix is not positive definite"),
            LatticeError::NotIntegral => f.write_str("Gram matrix is not integral"),
            LatticeError::Mismatch => f.write_str("cosets of different lattices"),
            LatticeError::Dimension { expected, got } => {
                write!(f, "expected {expected} coordinates, got {got}")
            }
            LatticeError::NotL => f.write_str("tau acts only on the lattice L = sqrt2 A2"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    gram: Vec<Vec<Q>>,
}

fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

impl Lattice {
    pub fn new(gram: Vec<Vec<Q>>) -> Result<Lattice, LatticeError> {
        let r = gram.len();
        if r == 0 || gram.iter().any(|row| row.len() != r) {
            return Err(LatticeError::NotSymmetric);
        }
        for i in 0..r {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
        }
        // leading principal minors via exact elimination
        let mut m = gram.clone();
        for k in 0..r {
            if !m[k][k].is_positive() {
                return Err(LatticeError::NotPositiveDefinite);
            }
            for i in k + 1..r {
                let f = m[i][k] / m[k][k];
                for j in k..r {
                    let t = f * m[k][j];
                    m[i][j] -= t;
                }
            }
        }
        Ok(Lattice { gram })
    }

    pub fn from_integers(gram: &[&[i64]]) -> Result<Lattice, LatticeError> {
        Lattice::new(gram.iter().map(|r| r.iter().map(|&v| qi(v)).collect()).collect())
    }

    /// `L`, Gram `[[4,-2],[-2,4]]`.
    pub fn l() -> Lattice {
        Lattice::from_integers(&[&[4, -2], &[-2, 4]]).unwrap()
    }

    /// `Z b1`, Gram `[[6]]`.
    pub fn z_beta1() -> Lattice {
        Lattice::from_integers(&[&[6]]).unwrap()
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<Q>] {
        &self.gram
    }

    pub fn is_integral(&self) -> bool {
        self.gram.iter().flatten().all(|v| v.is_integer())
    }

    pub fn is_even(&self) -> bool {
        self.is_integral() && (0..self.rank()).all(|i| (self.gram[i][i].to_integer() % 2) == 0)
    }

    pub fn det(&self) -> Q {
        let r = self.rank();
        let mut m = self.gram.clone();
        let mut det = qi(1);
        for k in 0..r {
            det *= m[k][k];
            for i in k + 1..r {
                let f = m[i][k] / m[k][k];
                for j in k..r {
                    let t = f * m[k][j];
                    m[i][j] -= t;
                }
            }
        }
        det
    }

    fn inverse(&self) -> Vec<Vec<Q>> {
        let r = self.rank();
        let mut a = self.gram.clone();
        let mut inv: Vec<Vec<Q>> = (0..r).map(|i| (0..r).map(|j| qi(i64::from(i == j))).collect()).collect();
        for c in 0..r {
            let p = (c..r).find(|&i| !a[i][c].is_zero()).unwrap();
            a.swap(c, p);
            inv.swap(c, p);
            let d = a[c][c];
            for j in 0..r {
                a[c][j] /= d;
                inv[c][j] /= d;
            }
            for i in 0..r {
                if i != c && !a[i][c].is_zero() {
                    let f = a[i][c];
                    for j in 0..r {
                        let (t1, t2) = (f * a[c][j], f * inv[c][j]);
                        a[i][j] -= t1;
                        inv[i][j] -= t2;
                    }
                }
            }
        }
        inv
    }

    pub fn inner(&self, x: &[Q], y: &[Q]) -> Q {
        let mut s = qi(0);
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                s += x[i] * self.gram[i][j] * y[j];
            }
        }
        s
    }

    pub fn norm(&self, x: &[Q]) -> Q {
        self.inner(x, x)
    }

    /// Certified lower bound on the smallest eigenvalue of the Gram matrix.
    ///
    /// Gershgorin, or `det/(tr/(r-1))^(r-1)` (AM-GM on the other
    /// eigenvalues) when that is larger; the latter is always positive.
    pub fn lambda_min_bound(&self) -> Q {
        let r = self.rank();
        if r == 1 {
            return self.gram[0][0];
        }
        let gersh = (0..r)
            .map(|i| {
                let off: Q = (0..r).filter(|&j| j != i).map(|j| self.gram[i][j].abs()).sum();
                self.gram[i][i] - off
            })
            .min()
            .unwrap();
        let tr: Q = (0..r).map(|i| self.gram[i][i]).sum();
        let mean = tr / qi(r as i64 - 1);
        let mut p = qi(1);
        for _ in 0..r - 1 {
            p *= mean;
        }
        let amgm = self.det() / p;
        if gersh > amgm {
            gersh
        } else {
            amgm
        }
    }

    /// Representatives of `L°/L`, canonical and sorted.
    pub fn dual_coset_reps(&self) -> Result<Vec<Coset>, LatticeError> {
        if !self.is_integral() {
            return Err(LatticeError::NotIntegral);
        }
        let inv = self.inverse();
        let r = self.rank();
        let gens: Vec<Vec<Q>> = (0..r).map(|j| (0..r).map(|i| inv[i][j]).collect()).collect();
        let zero = Coset::zero(self);
        let mut seen: BTreeSet<Vec<Q>> = BTreeSet::new();
        seen.insert(zero.rep.clone());
        let mut frontier = vec![zero];
        while let Some(c) = frontier.pop() {
            for g in &gens {
                let next = Coset::new(self, c.rep.iter().zip(g).map(|(a, b)| *a + *b).collect()).unwrap();
                if seen.insert(next.rep.clone()) {
                    frontier.push(next);
                }
            }
        }
        Ok(seen.into_iter().map(|rep| Coset { lattice: self.clone(), rep }).collect())
    }
}

/// `rep + L` with `rep` reduced into `[0,1)^r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coset {
    lattice: Lattice,
    rep: Vec<Q>,
}

impl PartialOrd for Lattice {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Lattice {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.gram.cmp(&other.gram)
    }
}

impl Coset {
    pub fn new(lattice: &Lattice, rep: Vec<Q>) -> Result<Coset, LatticeError> {
        if rep.len() != lattice.rank() {
            return Err(LatticeError::Dimension { expected: lattice.rank(), got: rep.len() });
        }
        Ok(Coset { lattice: lattice.clone(), rep: rep.into_iter().map(|v| v - v.floor()).collect() })
    }

    pub fn zero(lattice: &Lattice) -> Coset {
        Coset { lattice: lattice.clone(), rep: vec![qi(0); lattice.rank()] }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn rep(&self) -> &[Q] {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.iter().all(|v| v.is_zero())
    }

    pub fn add(&self, other: &Coset) -> Result<Coset, LatticeError> {
        if self.lattice != other.lattice {
            return Err(LatticeError::Mismatch);
        }
        Coset::new(&self.lattice, self.rep.iter().zip(&other.rep).map(|(a, b)| *a + *b).collect())
    }

    pub fn negate(&self) -> Coset {
        Coset::new(&self.lattice, self.rep.iter().map(|v| -*v).collect()).unwrap()
    }

    /// All `(x, <x,x>)` with `x` in the coset and `<x,x> <= bound`.
    ///
    /// Searches the box `|a_i| <= ceil(sqrt(2 bound/lambda)) + 1` around the
    /// representative, with `lambda` from [`Lattice::lambda_min_bound`].
    pub fn vectors_up_to(&self, bound: Q) -> Vec<(Vec<Q>, Q)> {
        if bound.is_negative() {
            return Vec::new();
        }
        let lam = self.lattice.lambda_min_bound();
        let t = qi(2) * bound / lam;
        let ceil = t.ceil().to_integer();
        let mut radius = ceil.sqrt();
        if radius * radius < ceil {
            radius += 1;
        }
        let radius = radius + 1;
        let r = self.lattice.rank();
        let mut out = Vec::new();
        let mut a = vec![-radius; r];
        loop {
            let x: Vec<Q> = self.rep.iter().zip(&a).map(|(v, o)| *v + qi(*o)).collect();
            let nrm = self.lattice.norm(&x);
            if nrm <= bound {
                out.push((x, nrm));
            }
            let mut i = 0;
            loop {
                if i == r {
                    return out;
                }
                a[i] += 1;
                if a[i] <= radius {
                    break;
                }
                a[i] = -radius;
                i += 1;
            }
        }
    }

    /// Minimum of `<x,x>` over the coset.
    pub fn min_norm(&self) -> Q {
        let target = self.lattice.norm(&self.rep);
        self.vectors_up_to(target).into_iter().map(|(_, n)| n).min().unwrap()
    }

    /// Smallest nonzero norm in the coset (the minimum itself unless the
    /// coset is `L`).
    pub fn min_nonzero_norm(&self) -> Q {
        if !self.is_zero() {
            return self.min_norm();
        }
        let mut bound = self.lattice.gram.iter().enumerate().map(|(i, r)| r[i]).min().unwrap();
        loop {
            if let Some(m) = self.vectors_up_to(bound).into_iter().map(|(_, n)| n).filter(|n| !n.is_zero()).min() {
                return m;
            }
            bound *= qi(2);
        }
    }

    /// Module twist by the order-3 isometry of `L`: `lambda + L` goes to
    /// `tau^-1 lambda + L`, where `tau(b2) = b3`, `tau(b3) = -(b2 + b3)`.
    pub fn tau_action(&self) -> Result<Coset, LatticeError> {
        if self.lattice != Lattice::l() {
            return Err(LatticeError::NotL);
        }
        let (u, v) = (self.rep[0], self.rep[1]);
        Coset::new(&self.lattice, vec![v - u, -u])
    }

    /// Lowest conformal weight of the `eps`-eigenspace of `tau` on the
    /// lattice module `V_{lambda+L}`, for a tau-stable coset of `L`.
    ///
    /// Minimal vectors of a nonzero stable coset form free tau-orbits, so
    /// every eigenspace starts at `min_norm/2`. On `V_L` itself the vacuum
    /// has eigenvalue 1, while the weight-one Heisenberg space carries the
    /// two nontrivial eigenvalues (tau is fixed-point free on the span).
    pub fn eigenspace_weight(&self, eps: u8) -> Result<Q, LatticeError> {
        if self.tau_action()? != *self {
            return Err(LatticeError::Mismatch);
        }
        if !self.is_zero() {
            return Ok(self.min_norm() / qi(2));
        }
        if eps.is_multiple_of(3) {
            return Ok(qi(0));
        }
        let lattice_part = self.min_nonzero_norm() / qi(2);
        Ok(if lattice_part < qi(1) { lattice_part } else { qi(1) })
    }
}

/// The half-lattice part `L_0, L_a, L_b, L_c` of a coset `L_h + L^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Half {
    Zero,
    A,
    B,
    C,
}

impl Half {
    pub const ALL: [Half; 4] = [Half::Zero, Half::A, Half::B, Half::C];

    /// Coordinates in the `(b2, b3)` basis.
    pub fn rep(self) -> [Q; 2] {
        let h = Q::new(1, 2);
        match self {
            Half::Zero => [qi(0), qi(0)],
            Half::A => [qi(0), h],
            // b0/2 = -(b2+b3)/2
            Half::B => [h, h],
            Half::C => [h, qi(0)],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Half::Zero => "0",
            Half::A => "a",
            Half::B => "b",
            Half::C => "c",
        }
    }
}

/// `L^j = j (2 b2 + b3)/3 + L`.
pub fn l_third(j: u8) -> [Q; 2] {
    let j = i64::from(j % 3);
    [Q::new(2 * j, 3), Q::new(j, 3)]
}

/// `L^{(h,j)} = L_h + L^j`.
pub fn l_coset(h: Half, j: u8) -> Coset {
    let a = h.rep();
    let b = l_third(j);
    Coset::new(&Lattice::l(), vec![a[0] + b[0], a[1] + b[1]]).unwrap()
}

/// `k/6 b1 + Z b1`, or any rational multiple.
pub fn z_beta1_coset(t: Q) -> Coset {
    Coset::new(&Lattice::z_beta1(), vec![t]).unwrap()
}

/// Decomposition of `Z a1 + Z a2 + Z a3` (`<a_i,a_j> = 2 delta_ij`) into
/// `(k/3 b1 + Z b1) x L^k`, `k = 0, 1, 2`.
#[derive(Debug, Clone)]
pub struct OrbifoldDecomposition {
    pub pieces: [(Coset, Coset); 3],
}

/// `(b1, b2, b3)` coordinates of `a1 x1 + a2 x2 + a3 x3`, using
/// `a1 = (b1+2b2+b3)/3`, `a2 = (b1-b2+b3)/3`, `a3 = (b1-b2-2b3)/3`.
pub fn alpha_to_beta(a: [i64; 3]) -> [Q; 3] {
    let [x, y, z] = a;
    [Q::new(x + y + z, 3), Q::new(2 * x - y - z, 3), Q::new(x + y - 2 * z, 3)]
}

pub fn orbifold_decomposition() -> OrbifoldDecomposition {
    let pieces = [0u8, 1, 2].map(|k| (z_beta1_coset(Q::new(i64::from(k), 3)), l_coset(Half::Zero, k)));
    OrbifoldDecomposition { pieces }
}

impl OrbifoldDecomposition {
    /// Indices of the pieces containing the given alpha-lattice vector.
    pub fn locate(&self, a: [i64; 3]) -> Vec<usize> {
        let b = alpha_to_beta(a);
        let r1 = z_beta1_coset(b[0]);
        let r2 = Coset::new(&Lattice::l(), vec![b[1], b[2]]).unwrap();
        (0..3).filter(|&k| self.pieces[k].0 == r1 && self.pieces[k].1 == r2).collect()
    }

    /// Every alpha-vector with coordinates in `[-radius, radius]` lies in
    /// exactly one piece and keeps its norm `2(x^2+y^2+z^2)`.
    pub fn verify(&self, radius: i64) -> Result<(), String> {
        for x in -radius..=radius {
            for y in -radius..=radius {
                for z in -radius..=radius {
                    let hits = self.locate([x, y, z]);
                    if hits.len() != 1 {
                        return Err(format!("({x},{y},{z}) lies in pieces {hits:?}"));
                    }
                    let b = alpha_to_beta([x, y, z]);
                    let n = qi(6) * b[0] * b[0] + Lattice::l().norm(&[b[1], b[2]]);
                    if n != qi(2 * (x * x + y * y + z * z)) {
                        return Err(format!("norm mismatch at ({x},{y},{z})"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// True when the coset is fixed by tau.
pub fn is_tau_stable(c: &Coset) -> bool {
    c.tau_action().is_ok_and(|t| t == *c)
}
