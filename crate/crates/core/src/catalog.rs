//! The two catalog categories and the orbifold counting formula.
//!
//! `U` has 20 simple objects: `M^i` (`i` in Z2), `M~_i[e]` and
//! `Mhat_{t^k,i}[e]` (`e` in Z3, `k` in {1,2}), numbered `W0..W19`.
//! `VLtau` has 30: `V(0,j)[e]`, `V(c,j)` and `VT_j(t^k)[e]`.
//!
//! Two fusion rules are encoded in a corrected form, because the rules as
//! usually printed do not give a modular category with these weights:
//! `Mhat_{t^k,i}[e] x Mhat_{t^k,j}[f]` has charges `-(e+f)` and `1-(e+f)`
//! (not `2-(e+f)`), and likewise for `VT x VT`; and
//! `VT_i(t)[e] x VT_j(t^2)[f]` lands in `V(0,2i+j)[e+2f] + V(c,2i+j)`.
//! The mixed diagonal/twisted rule reads
//! `M~_i[e] x Mhat_{t^k,j}[f] = Mhat_{t^k,i+j}[k e + f]`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cyclotomic::CycNum;
use crate::fusion_ring::FusionRing;
use crate::lattice::{l_coset, z_beta1_coset, Coset, Half};
use crate::modular_data::{frac, ModularDatum, ModularError};
use crate::Q;

/// `(n^3 + 26 n)/3`, the number of irreducible modules of the Z3
/// permutation orbifold built from a rank-one lattice VOA with `n`
/// irreducibles.
pub fn count_orbifold_irreducibles(n: u64) -> u64 {
    let n = u128::from(n);
    let t = n * n * n + 26 * n;
    assert!(t % 3 == 0, "n^3 + 26n is always divisible by 3");
    (t / 3) as u64
}

fn m2(x: i64) -> u8 {
    x.rem_euclid(2) as u8
}

fn m3(x: i64) -> u8 {
    x.rem_euclid(3) as u8
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ULabel {
    /// `M~_i[e]`
    Diag { i: u8, eps: u8 },
    /// `M^i`
    Off { i: u8 },
    /// `Mhat_{t^k,i}[e]`
    Twisted { k: u8, i: u8, eps: u8 },
}

impl ULabel {
    /// All labels in `W0..W19` order.
    pub fn all() -> Vec<ULabel> {
        let mut v = Vec::with_capacity(20);
        for i in 0..2 {
            for eps in 0..3 {
                v.push(ULabel::Diag { i, eps });
            }
        }
        v.push(ULabel::Off { i: 0 });
        v.push(ULabel::Off { i: 1 });
        for k in 1..3 {
            for i in 0..2 {
                for eps in 0..3 {
                    v.push(ULabel::Twisted { k, i, eps });
                }
            }
        }
        v
    }

    pub fn index(self) -> usize {
        match self {
            ULabel::Diag { i, eps } => 3 * i as usize + eps as usize,
            ULabel::Off { i } => 6 + i as usize,
            ULabel::Twisted { k, i, eps } => 8 + 6 * (k as usize - 1) + 3 * i as usize + eps as usize,
        }
    }

    pub fn from_index(w: usize) -> Option<ULabel> {
        ULabel::all().get(w).copied()
    }

    /// ASCII name: `M^0`, `M~_1[2]`, `Mhat_t1_0[2]`.
    pub fn name(self) -> String {
        match self {
            ULabel::Diag { i, eps } => format!("M~_{i}[{eps}]"),
            ULabel::Off { i } => format!("M^{i}"),
            ULabel::Twisted { k, i, eps } => format!("Mhat_t{k}_{i}[{eps}]"),
        }
    }

    /// Quantum dimension: 1, 3 or 2.
    pub fn qdim(self) -> i64 {
        match self {
            ULabel::Diag { .. } => 1,
            ULabel::Off { .. } => 3,
            ULabel::Twisted { .. } => 2,
        }
    }

    /// Dual module: `M~_i[e]' = M~_i[-e]`, `Mhat_{t^k,i}[e]' = Mhat_{t^{2k},i}[e]`.
    pub fn dual(self) -> ULabel {
        match self {
            ULabel::Diag { i, eps } => ULabel::Diag { i, eps: m3(-i64::from(eps)) },
            ULabel::Off { i } => ULabel::Off { i },
            ULabel::Twisted { k, i, eps } => ULabel::Twisted { k: 3 - k, i, eps },
        }
    }

    fn kind_rank(self) -> u8 {
        match self {
            ULabel::Off { .. } => 0,
            ULabel::Diag { .. } => 1,
            ULabel::Twisted { .. } => 2,
        }
    }
}

/// Conformal weights of `W0..W19`.
pub const U_WEIGHTS: [(i64, i64); 20] = [
    (0, 1),
    (1, 1),
    (1, 1),
    (3, 4),
    (3, 4),
    (3, 4),
    (1, 2),
    (1, 4),
    (1, 9),
    (7, 9),
    (4, 9),
    (31, 36),
    (19, 36),
    (7, 36),
    (1, 9),
    (7, 9),
    (4, 9),
    (31, 36),
    (19, 36),
    (7, 36),
];

pub fn u_weight(w: usize) -> Q {
    let (n, d) = U_WEIGHTS[w];
    Q::new(n, d)
}

/// Fusion product of two `U` labels as `(label, multiplicity)`.
pub fn fuse_u(a: ULabel, b: ULabel) -> Vec<(ULabel, u32)> {
    let (a, b) = if a.kind_rank() <= b.kind_rank() { (a, b) } else { (b, a) };
    use ULabel::*;
    match (a, b) {
        (Off { i }, Off { i: j }) => {
            let s = m2(i64::from(i + j));
            let mut v: Vec<(ULabel, u32)> = (0..3).map(|r| (Diag { i: s, eps: r }, 1)).collect();
            v.push((Off { i: s }, 2));
            v
        }
        (Off { i }, Diag { i: j, .. }) => vec![(Off { i: m2(i64::from(i + j)) }, 1)],
        (Off { i }, Twisted { k, i: j, .. }) => {
            let s = m2(i64::from(i + j));
            (0..3).map(|r| (Twisted { k, i: s, eps: r }, 1)).collect()
        }
        (Diag { i, eps }, Diag { i: j, eps: e1 }) => {
            vec![(Diag { i: m2(i64::from(i + j)), eps: m3(i64::from(eps + e1)) }, 1)]
        }
        (Diag { i, eps }, Twisted { k, i: j, eps: e1 }) => {
            vec![(Twisted { k, i: m2(i64::from(i + j)), eps: m3(i64::from(k) * i64::from(eps) + i64::from(e1)) }, 1)]
        }
        (Twisted { k, i, eps }, Twisted { k: k1, i: j, eps: e1 }) => {
            let s = m2(i64::from(i + j));
            if k == k1 {
                let k2 = 3 - k;
                let t = i64::from(eps) + i64::from(e1);
                let mut v =
                    vec![(Twisted { k: k2, i: s, eps: m3(-t) }, 1), (Twisted { k: k2, i: s, eps: m3(1 - t) }, 1)];
                v.sort();
                v
            } else {
                // order the t-factor first
                let (e, f) = if k == 1 { (eps, e1) } else { (e1, eps) };
                vec![(Diag { i: s, eps: m3(i64::from(e) + 2 * i64::from(f)) }, 1), (Off { i: s }, 1)]
            }
        }
        _ => unreachable!("pairs are sorted by kind"),
    }
}

fn ring_from<L: Copy>(
    labels: &[L],
    name: impl Fn(L) -> String,
    index: impl Fn(L) -> usize,
    fuse: impl Fn(L, L) -> Vec<(L, u32)>,
) -> FusionRing {
    let mut entries = Vec::new();
    for &a in labels {
        for &b in labels {
            for (c, m) in fuse(a, b) {
                entries.push((index(a), index(b), index(c), m));
            }
        }
    }
    FusionRing::new(labels.iter().map(|&l| name(l)).collect(), 0, entries).expect("catalog rings are well formed")
}

pub fn u_ring() -> FusionRing {
    ring_from(&ULabel::all(), ULabel::name, ULabel::index, fuse_u)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogError {
    Validation(String),
    Modular(ModularError),
}

impl core::fmt::Display for CatalogError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CatalogError::Validation(s) => write!(f, "catalog ring fails validation: {s}"),
            CatalogError::Modular(e) => write!(f, "{e}"),
        }
    }
}

fn validated(ring: &FusionRing) -> Result<(), CatalogError> {
    let rep = ring.validate();
    for (name, v) in rep.checks() {
        if let Some(v) = v {
            return Err(CatalogError::Validation(format!("{name}: {}", v.detail)));
        }
    }
    Ok(())
}

/// The 20-object datum: weights from the table above, integer quantum
/// dimensions, `c = 3`.
pub fn build_u() -> Result<ModularDatum, CatalogError> {
    let mut ring = u_ring();
    for l in ULabel::all() {
        ring.set_supplied_dual(l.index(), l.dual().index()).expect("index in range");
    }
    validated(&ring)?;
    let mut md = ModularDatum::new(ring);
    for (w, l) in ULabel::all().into_iter().enumerate() {
        md.set_twist(w, u_weight(w));
        md.set_dim(w, CycNum::from_integer(l.qdim()));
    }
    md.set_central_charge(Q::from_integer(3));
    Ok(md)
}

/// Resolve `M^0`-style names and `W13`-style aliases.
pub fn u_index(name: &str) -> Option<usize> {
    if let Some(n) = name.strip_prefix('W') {
        return n.parse::<usize>().ok().filter(|&w| w < 20);
    }
    ULabel::all().into_iter().position(|l| l.name() == name)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum VLabel {
    /// `V_{L^(0,j)}[e]`
    Zero { j: u8, eps: u8 },
    /// `V_{L^(c,j)}`
    C { j: u8 },
    /// `V_L^{T,j}(t^k)[e]`
    T { k: u8, j: u8, eps: u8 },
}

impl VLabel {
    pub fn all() -> Vec<VLabel> {
        let mut v = Vec::with_capacity(30);
        for j in 0..3 {
            for eps in 0..3 {
                v.push(VLabel::Zero { j, eps });
            }
        }
        for j in 0..3 {
            v.push(VLabel::C { j });
        }
        for k in 1..3 {
            for j in 0..3 {
                for eps in 0..3 {
                    v.push(VLabel::T { k, j, eps });
                }
            }
        }
        v
    }

    pub fn index(self) -> usize {
        match self {
            VLabel::Zero { j, eps } => 3 * j as usize + eps as usize,
            VLabel::C { j } => 9 + j as usize,
            VLabel::T { k, j, eps } => 12 + 9 * (k as usize - 1) + 3 * j as usize + eps as usize,
        }
    }

    /// `V(0,1)[2]`, `V(c,2)`, `VT_1(t2)[0]`.
    pub fn name(self) -> String {
        match self {
            VLabel::Zero { j, eps } => format!("V(0,{j})[{eps}]"),
            VLabel::C { j } => format!("V(c,{j})"),
            VLabel::T { k, j, eps } => format!("VT_{j}(t{k})[{eps}]"),
        }
    }

    pub fn qdim(self) -> i64 {
        match self {
            VLabel::Zero { .. } => 1,
            VLabel::C { .. } => 3,
            VLabel::T { .. } => 2,
        }
    }

    fn kind_rank(self) -> u8 {
        match self {
            VLabel::Zero { .. } => 0,
            VLabel::C { .. } => 1,
            VLabel::T { .. } => 2,
        }
    }

    /// Dual module.
    pub fn dual(self) -> VLabel {
        match self {
            VLabel::Zero { j, eps } => VLabel::Zero { j: m3(2 * i64::from(j)), eps: m3(2 * i64::from(eps)) },
            VLabel::C { j } => VLabel::C { j: m3(2 * i64::from(j)) },
            VLabel::T { k, j, eps } => VLabel::T { k: 3 - k, j, eps },
        }
    }
}

pub fn fuse_vltau(a: VLabel, b: VLabel) -> Vec<(VLabel, u32)> {
    let (a, b) = if a.kind_rank() <= b.kind_rank() { (a, b) } else { (b, a) };
    use VLabel::*;
    let add = |x: u8, y: u8| m3(i64::from(x) + i64::from(y));
    match (a, b) {
        (Zero { j: i, eps }, Zero { j, eps: e1 }) => vec![(Zero { j: add(i, j), eps: add(eps, e1) }, 1)],
        (Zero { j: i, .. }, C { j }) => vec![(C { j: add(i, j) }, 1)],
        (Zero { j: i, eps }, T { k, j, eps: e1 }) => {
            let kk = i64::from(k);
            vec![(T { k, j: m3(i64::from(j) - kk * i64::from(i)), eps: m3(kk * i64::from(eps) + i64::from(e1)) }, 1)]
        }
        (C { j: i }, C { j }) => {
            let s = add(i, j);
            let mut v: Vec<(VLabel, u32)> = (0..3).map(|r| (Zero { j: s, eps: r }, 1)).collect();
            v.push((C { j: s }, 2));
            v
        }
        (C { j: i }, T { k, j, .. }) => {
            let jj = m3(i64::from(j) - i64::from(k) * i64::from(i));
            (0..3).map(|r| (T { k, j: jj, eps: r }, 1)).collect()
        }
        (T { k, j: i, eps }, T { k: k1, j, eps: e1 }) => {
            if k == k1 {
                let t = i64::from(eps) + i64::from(e1);
                let jj = m3(-(i64::from(i) + i64::from(j)));
                let mut v = vec![(T { k: 3 - k, j: jj, eps: m3(-t) }, 1), (T { k: 3 - k, j: jj, eps: m3(1 - t) }, 1)];
                v.sort();
                v
            } else {
                let (i, e, j, f) = if k == 1 { (i, eps, j, e1) } else { (j, e1, i, eps) };
                let s = m3(2 * i64::from(i) + i64::from(j));
                vec![(Zero { j: s, eps: m3(i64::from(e) + 2 * i64::from(f)) }, 1), (C { j: s }, 1)]
            }
        }
        _ => unreachable!("pairs are sorted by kind"),
    }
}

pub fn vltau_ring() -> FusionRing {
    ring_from(&VLabel::all(), VLabel::name, VLabel::index, fuse_vltau)
}

/// Conformal weight of a `VLtau` module mod 1.
pub fn vltau_weight(l: VLabel) -> Q {
    match l {
        VLabel::Zero { j, .. } => frac(Q::new(2 * i64::from(j) * i64::from(j), 3)),
        VLabel::C { j } => frac(l_coset(Half::C, j).min_norm() / Q::from_integer(2)),
        VLabel::T { j, eps, .. } => twisted_weight(j, eps),
    }
}

/// `(10 - 3(j^2 + e))/9 mod 1`, the weight class of `V_L^{T,j}(t^k)[e]`.
pub fn twisted_weight(j: u8, eps: u8) -> Q {
    let j = i64::from(j);
    frac(Q::new(10 - 3 * (j * j + i64::from(eps)), 9))
}

/// The 30-object datum, `c = 2`.
pub fn build_vltau() -> Result<ModularDatum, CatalogError> {
    let mut ring = vltau_ring();
    for l in VLabel::all() {
        ring.set_supplied_dual(l.index(), l.dual().index()).expect("index in range");
    }
    validated(&ring)?;
    let mut md = ModularDatum::new(ring);
    for l in VLabel::all() {
        md.set_twist(l.index(), vltau_weight(l));
        md.set_dim(l.index(), CycNum::from_integer(l.qdim()));
    }
    md.set_central_charge(Q::from_integer(2));
    Ok(md)
}

/// Rank-2 factor of one decomposition piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rank2Piece {
    /// Full lattice module `V_{L^(c,j)}`.
    Coset(Coset),
    /// tau-eigenspace of a stable lattice module.
    Eigen(Coset, u8),
    /// `V_L^{T,j}(t^k)[e]`
    Twisted { k: u8, j: u8, eps: u8 },
}

/// `(Z b1 coset, rank-2 piece)` for the three summands of a `U` module.
pub fn u_pieces(l: ULabel) -> [(Coset, Rank2Piece); 3] {
    let i = match l {
        ULabel::Off { i } | ULabel::Diag { i, .. } | ULabel::Twisted { i, .. } => i64::from(i),
    };
    let lam = [Q::new(i, 2), Q::new(3 * i + 2, 6), Q::new(3 * i + 4, 6)];
    let rank2 = |n: usize| -> Rank2Piece {
        let j = n as u8;
        match l {
            ULabel::Off { .. } => Rank2Piece::Coset(l_coset(Half::C, j)),
            ULabel::Diag { eps, .. } => Rank2Piece::Eigen(l_coset(Half::Zero, j), eps),
            ULabel::Twisted { k, eps, .. } => {
                let tj = [0, m3(2 * i64::from(k)), k][n];
                Rank2Piece::Twisted { k, j: tj, eps }
            }
        }
    };
    [0, 1, 2].map(|n| (z_beta1_coset(lam[n]), rank2(n)))
}

/// Lowest weight of a rank-2 piece; exact for untwisted pieces and a class
/// mod 1 for twisted ones.
pub fn rank2_weight(p: &Rank2Piece) -> Q {
    match p {
        Rank2Piece::Coset(c) => c.min_norm() / Q::from_integer(2),
        Rank2Piece::Eigen(c, eps) => c.eigenspace_weight(*eps).expect("stable coset"),
        Rank2Piece::Twisted { j, eps, .. } => twisted_weight(*j, *eps),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightRow {
    pub w: usize,
    pub label: ULabel,
    pub table: Q,
    /// Recomputed weight (untwisted), or the three piece weights mod 1.
    pub recomputed: Vec<Q>,
    pub passed: bool,
}

/// Recompute every `U` weight from lattice minima and compare with the
/// weight table: exactly for untwisted labels, mod 1 piecewise for twisted.
pub fn weight_table_check() -> Vec<WeightRow> {
    let two = Q::from_integer(2);
    ULabel::all()
        .into_iter()
        .enumerate()
        .map(|(w, label)| {
            let table = u_weight(w);
            let pieces = u_pieces(label);
            let weights: Vec<Q> = pieces.iter().map(|(a, b)| a.min_norm() / two + rank2_weight(b)).collect();
            match label {
                ULabel::Twisted { .. } => {
                    let recomputed: Vec<Q> = weights.into_iter().map(frac).collect();
                    let passed = recomputed.iter().all(|&x| x == frac(table));
                    WeightRow { w, label, table, recomputed, passed }
                }
                _ => {
                    let min = weights.into_iter().min().unwrap();
                    WeightRow { w, label, table, recomputed: vec![min], passed: min == table }
                }
            }
        })
        .collect()
}

/// Lattice pieces of an untwisted `U` module for character computations:
/// `M^i` as full cosets, `M~_i[e]` only for the sum over `e` is available,
/// so `None` is returned for diagonal and twisted labels.
pub fn u_character_pieces(l: ULabel) -> Option<Vec<(Coset, Coset)>> {
    match l {
        ULabel::Off { .. } => Some(
            u_pieces(l)
                .into_iter()
                .map(|(a, b)| match b {
                    Rank2Piece::Coset(c) => (a, c),
                    _ => unreachable!(),
                })
                .collect(),
        ),
        _ => None,
    }
}
