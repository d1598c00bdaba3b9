//! Finite commutative fusion rings.
//!
//! Structure constants `N_{ij}^k` are stored sparsely per `(i, j)`. The
//! dual of each label is derived from the unit column; a supplied dual is
//! only cross-checked by [`FusionRing::validate`].

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingError {
    UnknownIndex(usize),
    UnknownLabel(String),
    DuplicateLabel(String),
    DuplicateEntry { i: usize, j: usize, k: usize },
    NoConvergence { label: usize },
}

impl fmt::Display for RingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingError::UnknownIndex(i) => write!(f, "unknown label index {i}"),
            RingError::UnknownLabel(s) => write!(f, "unknown label '{s}'"),
            RingError::DuplicateLabel(s) => write!(f, "duplicate label '{s}'"),
            RingError::DuplicateEntry { i, j, k } => {
                write!(f, "structure constant N {i} {j} {k} given twice")
            }
            RingError::NoConvergence { label } => {
                write!(f, "power iteration did not converge for label {label}")
            }
        }
    }
}

/// Element of the fusion ring with nonnegative integer coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RingElement {
    coeffs: BTreeMap<usize, u64>,
}

impl RingElement {
    pub fn zero() -> RingElement {
        RingElement::default()
    }

    pub fn basis(i: usize) -> RingElement {
        RingElement::from_terms([(i, 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, u64)>) -> RingElement {
        let mut e = RingElement::zero();
        for (i, m) in terms {
            e.add_term(i, m);
        }
        e
    }

    pub fn add_term(&mut self, i: usize, m: u64) {
        if m > 0 {
            *self.coeffs.entry(i).or_insert(0) += m;
        }
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(&i).copied().unwrap_or(0)
    }

    /// Nonzero terms in increasing label order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.coeffs.iter().map(|(&i, &m)| (i, m))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// First failing instance of an axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub indices: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub unit: Option<Violation>,
    pub commutativity: Option<Violation>,
    pub duality: Option<Violation>,
    /// `N_{ij}^k = N_{i k'}^{j'}`
    pub frobenius: Option<Violation>,
    pub associativity: Option<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks().iter().all(|(_, v)| v.is_none())
    }

    pub fn checks(&self) -> [(&'static str, &Option<Violation>); 5] {
        [
            ("unit law", &self.unit),
            ("commutativity", &self.commutativity),
            ("duality", &self.duality),
            ("frobenius symmetry", &self.frobenius),
            ("associativity", &self.associativity),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionRing {
    labels: Vec<String>,
    unit: usize,
    table: BTreeMap<(usize, usize), Vec<(usize, u32)>>,
    dual: Vec<Option<usize>>,
    supplied_dual: Vec<Option<usize>>,
}

impl FusionRing {
    /// Build from `(i, j, k, N_{ij}^k)` entries; zero multiplicities are dropped.
    pub fn new(
        labels: Vec<String>,
        unit: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, u32)>,
    ) -> Result<FusionRing, RingError> {
        let n = labels.len();
        for (a, l) in labels.iter().enumerate() {
            if labels[..a].contains(l) {
                return Err(RingError::DuplicateLabel(l.clone()));
            }
        }
        if unit >= n {
            return Err(RingError::UnknownIndex(unit));
        }
        let mut table: BTreeMap<(usize, usize), Vec<(usize, u32)>> = BTreeMap::new();
        for (i, j, k, m) in entries {
            for x in [i, j, k] {
                if x >= n {
                    return Err(RingError::UnknownIndex(x));
                }
            }
            if m == 0 {
                continue;
            }
            let row = table.entry((i, j)).or_default();
            match row.binary_search_by_key(&k, |e| e.0) {
                Ok(_) => return Err(RingError::DuplicateEntry { i, j, k }),
                Err(pos) => row.insert(pos, (k, m)),
            }
        }
        let mut ring = FusionRing { labels, unit, table, dual: Vec::new(), supplied_dual: vec![None; n] };
        ring.dual = (0..n).map(|i| ring.derive_dual(i)).collect();
        Ok(ring)
    }

    fn derive_dual(&self, i: usize) -> Option<usize> {
        let mut found = None;
        for j in 0..self.rank() {
            match self.n(i, j, self.unit) {
                0 => {}
                1 if found.is_none() => found = Some(j),
                _ => return None,
            }
        }
        found
    }

    /// Record a dual given in input data; checked by `validate`.
    pub fn set_supplied_dual(&mut self, i: usize, d: usize) -> Result<(), RingError> {
        if i >= self.rank() {
            return Err(RingError::UnknownIndex(i));
        }
        if d >= self.rank() {
            return Err(RingError::UnknownIndex(d));
        }
        self.supplied_dual[i] = Some(d);
        Ok(())
    }

    pub fn supplied_dual(&self, i: usize) -> Option<usize> {
        self.supplied_dual[i]
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }

    /// `N_{ij}^k`
    pub fn n(&self, i: usize, j: usize, k: usize) -> u32 {
        self.table
            .get(&(i, j))
            .and_then(|row| row.binary_search_by_key(&k, |e| e.0).ok().map(|p| row[p].1))
            .unwrap_or(0)
    }

    /// Nonzero `(k, N_{ij}^k)` in increasing `k`.
    pub fn product(&self, i: usize, j: usize) -> &[(usize, u32)] {
        self.table.get(&(i, j)).map(|r| r.as_slice()).unwrap_or(&[])
    }

    /// All nonzero entries `(i, j, k, m)` in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, u32)> + '_ {
        self.table.iter().flat_map(|(&(i, j), row)| row.iter().map(move |&(k, m)| (i, j, k, m)))
    }

    /// The derived dual, if the unit column determines one.
    pub fn dual_of(&self, i: usize) -> Option<usize> {
        self.dual.get(i).copied().flatten()
    }

    fn check_index(&self, i: usize) -> Result<(), RingError> {
        if i < self.rank() {
            Ok(())
        } else {
            Err(RingError::UnknownIndex(i))
        }
    }

    pub fn fuse(&self, a: &RingElement, b: &RingElement) -> Result<RingElement, RingError> {
        let mut out = RingElement::zero();
        for (i, x) in a.terms() {
            self.check_index(i)?;
            for (j, y) in b.terms() {
                self.check_index(j)?;
                for &(k, m) in self.product(i, j) {
                    out.add_term(k, x * y * u64::from(m));
                }
            }
        }
        Ok(out)
    }

    pub fn fuse_labels(&self, i: usize, j: usize) -> Result<RingElement, RingError> {
        self.fuse(&RingElement::basis(i), &RingElement::basis(j))
    }

    /// Human-readable form such as `A + 2*B`.
    pub fn format_element(&self, e: &RingElement) -> String {
        if e.is_zero() {
            return String::from("0");
        }
        let parts: Vec<String> = e
            .terms()
            .map(|(i, m)| if m == 1 { self.labels[i].clone() } else { format!("{m}*{}", self.labels[i]) })
            .collect();
        parts.join(" + ")
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.rank();
        let u = self.unit;
        let mut unit = None;
        'unit: for j in 0..n {
            for k in 0..n {
                let want = u32::from(j == k);
                for (a, b) in [(u, j), (j, u)] {
                    let got = self.n(a, b, k);
                    if got != want {
                        unit = Some(Violation {
                            indices: vec![a, b, k],
                            detail: format!("N({a},{b};{k}) = {got}, expected {want}"),
                        });
                        break 'unit;
                    }
                }
            }
        }

        let mut commutativity = None;
        'comm: for i in 0..n {
            for j in i + 1..n {
                if self.product(i, j) != self.product(j, i) {
                    let k = (0..n).find(|&k| self.n(i, j, k) != self.n(j, i, k)).unwrap();
                    commutativity = Some(Violation {
                        indices: vec![i, j, k],
                        detail: format!(
                            "N({i},{j};{k}) = {} but N({j},{i};{k}) = {}",
                            self.n(i, j, k),
                            self.n(j, i, k)
                        ),
                    });
                    break 'comm;
                }
            }
        }

        let mut duality = None;
        for i in 0..n {
            let d = self.dual[i];
            let bad = match d {
                None => Some(format!("label {i} has no unique dual")),
                Some(d) if self.dual[d] != Some(i) => Some(format!("dual of {i} is not an involution")),
                Some(d) => match self.supplied_dual[i] {
                    Some(s) if s != d => Some(format!("supplied dual {s} of {i} differs from derived {d}")),
                    _ => None,
                },
            };
            if let Some(detail) = bad {
                duality = Some(Violation { indices: vec![i], detail });
                break;
            }
        }

        let mut frobenius = None;
        if duality.is_none() {
            'frob: for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let kd = self.dual[k].unwrap();
                        let jd = self.dual[j].unwrap();
                        let (a, b) = (self.n(i, j, k), self.n(i, kd, jd));
                        if a != b {
                            frobenius = Some(Violation {
                                indices: vec![i, j, k],
                                detail: format!("N({i},{j};{k}) = {a} but N({i},{kd};{jd}) = {b}"),
                            });
                            break 'frob;
                        }
                    }
                }
            }
        }

        ValidationReport { unit, commutativity, duality, frobenius, associativity: self.check_associativity() }
    }

    /// Compares (i x j) x k with i x (j x k) for every triple, which covers
    /// all quadruples (i, j, k, l).
    fn check_associativity(&self) -> Option<Violation> {
        let n = self.rank();
        let mut left = vec![0u64; n];
        let mut right = vec![0u64; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    left.iter_mut().for_each(|v| *v = 0);
                    right.iter_mut().for_each(|v| *v = 0);
                    for &(m, a) in self.product(i, j) {
                        for &(l, b) in self.product(m, k) {
                            left[l] += u64::from(a) * u64::from(b);
                        }
                    }
                    for &(m, a) in self.product(j, k) {
                        for &(l, b) in self.product(i, m) {
                            right[l] += u64::from(a) * u64::from(b);
                        }
                    }
                    if let Some(l) = (0..n).find(|&l| left[l] != right[l]) {
                        return Some(Violation {
                            indices: vec![i, j, k, l],
                            detail: format!(
                                "sum_m N(i,j;m)N(m,k;l) = {} but sum_m N(j,k;m)N(i,m;l) = {}",
                                left[l], right[l]
                            ),
                        });
                    }
                }
            }
        }
        None
    }

    /// `(N_i)_{jk} = N_{ij}^k`
    pub fn fusion_matrix(&self, i: usize) -> Vec<Vec<u32>> {
        let n = self.rank();
        let mut m = vec![vec![0u32; n]; n];
        for (j, row) in m.iter_mut().enumerate() {
            for &(k, v) in self.product(i, j) {
                row[k] = v;
            }
        }
        m
    }

    /// Perron-Frobenius eigenvalue of `N_i` by power iteration.
    ///
    /// Iterates on `I + N_i` from the all-ones vector: the shift makes the
    /// Perron root strictly dominant even when `N_i` has other eigenvalues of
    /// the same modulus.
    pub fn qdim_pf(&self, i: usize) -> Result<f64, RingError> {
        self.check_index(i)?;
        const TOL: f64 = 1e-12;
        const MAX_ITER: usize = 100_000;
        let n = self.rank();
        let m = self.fusion_matrix(i);
        let mut x = vec![1.0 / libm::sqrt(n as f64); n];
        let mut y = vec![0.0; n];
        let mut lambda = 0.0;
        for _ in 0..MAX_ITER {
            for j in 0..n {
                let mut s = x[j];
                for k in 0..n {
                    if m[j][k] != 0 {
                        s += f64::from(m[j][k]) * x[k];
                    }
                }
                y[j] = s;
            }
            let norm = libm::sqrt(y.iter().map(|v| v * v).sum::<f64>());
            for j in 0..n {
                x[j] = y[j] / norm;
            }
            let done = (norm - lambda).abs() <= TOL * norm;
            lambda = norm;
            if done {
                return Ok(lambda - 1.0);
            }
        }
        Err(RingError::NoConvergence { label: i })
    }

    /// True when fusing with `i` permutes the labels.
    pub fn is_permutation(&self, i: usize) -> bool {
        let n = self.rank();
        let mut hit = vec![false; n];
        for j in 0..n {
            match self.product(i, j) {
                [(k, 1)] if !hit[*k] => hit[*k] = true,
                _ => return false,
            }
        }
        true
    }

    /// Labels with quantum dimension 1 (within 1e-8) that also pass the exact
    /// permutation test.
    pub fn simple_currents(&self) -> Vec<usize> {
        (0..self.rank())
            .filter(|&i| self.qdim_pf(i).is_ok_and(|d| (d - 1.0).abs() < 1e-8) && self.is_permutation(i))
            .collect()
    }
}
