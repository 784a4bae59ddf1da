//! Simply-laced root systems with exact integer arithmetic.
//!
//! Simple roots are numbered as follows:
//!
//! * `A_n`: the path `1 - 2 - ... - n`.
//! * `D_n`: the path `1 - ... - (n-2)`, with both `n-1` and `n` attached to `n-2`.
//! * `E_n`: Bourbaki numbering, the chain `1 - 3 - 4 - ... - n` with `2` attached to `4`.
//!
//! Roots are stored in simple-root coordinates. Weight (fundamental-weight)
//! coordinates are derived on demand by multiplying with the Cartan matrix.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default rank cap for the infinite families.
pub const DEFAULT_MAX_RANK: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    A,
    D,
    E,
}

impl Kind {
    pub fn letter(self) -> char {
        match self {
            Kind::A => 'A',
            Kind::D => 'D',
            Kind::E => 'E',
        }
    }
}

/// A legal `(kind, rank)` pair, e.g. `D4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CartanType {
    pub kind: Kind,
    pub rank: usize,
}

impl CartanType {
    pub fn new(kind: Kind, rank: i64) -> Result<Self> {
        let legal = match kind {
            Kind::A => rank >= 1,
            Kind::D => rank >= 3,
            Kind::E => (6..=8).contains(&rank),
        };
        if !legal {
            return Err(Error::IllegalType {
                kind: kind.letter(),
                rank,
            });
        }
        Ok(CartanType {
            kind,
            rank: rank as usize,
        })
    }

    /// Edges of the Dynkin diagram, 0-based, each with `i < j`.
    pub fn dynkin_edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        match self.kind {
            Kind::A => (1..n).map(|i| (i - 1, i)).collect(),
            Kind::D => {
                let mut edges: Vec<_> = (1..n - 2).map(|i| (i - 1, i)).collect();
                edges.push((n - 3, n - 2));
                edges.push((n - 3, n - 1));
                edges
            }
            Kind::E => {
                let mut edges = vec![(0, 2), (1, 3)];
                edges.extend((3..n).map(|i| (i - 1, i)));
                edges
            }
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.letter(), self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let kind = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Kind::A,
            Some('D') => Kind::D,
            Some('E') => Kind::E,
            _ => return Err(Error::ParseType(s.to_string())),
        };
        let rank: i64 = chars
            .as_str()
            .parse()
            .map_err(|_| Error::ParseType(s.to_string()))?;
        CartanType::new(kind, rank)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    SimpleRoot,
    FundamentalWeight,
}

/// An integer vector together with the basis its coordinates refer to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeVector {
    pub coords: Vec<i64>,
    pub basis: Basis,
}

impl LatticeVector {
    pub fn root(coords: impl Into<Vec<i64>>) -> Self {
        LatticeVector {
            coords: coords.into(),
            basis: Basis::SimpleRoot,
        }
    }

    pub fn weight(coords: impl Into<Vec<i64>>) -> Self {
        LatticeVector {
            coords: coords.into(),
            basis: Basis::FundamentalWeight,
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn neg(&self) -> Self {
        LatticeVector {
            coords: self.coords.iter().map(|c| -c).collect(),
            basis: self.basis,
        }
    }

    /// Signed sum of coordinates.
    pub fn coord_sum(&self) -> i64 {
        self.coords.iter().sum()
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// An ADE root system. Immutable after construction.
#[derive(Debug, Clone)]
pub struct RootSystem {
    ty: CartanType,
    cartan: Vec<Vec<i64>>,
    /// Adjugate of the Cartan matrix; `cartan^{-1} = adjugate / det`.
    adjugate: Vec<Vec<i64>>,
    det: i64,
    /// Positive roots first (height, then reverse lexicographic, so `α_1` precedes `α_2`), then their negatives
    /// in the same order.
    roots: Vec<LatticeVector>,
    index: HashMap<Vec<i64>, usize>,
}

impl RootSystem {
    pub fn build(kind: Kind, rank: i64) -> Result<Self> {
        Self::build_with_cap(kind, rank, DEFAULT_MAX_RANK)
    }

    /// Like [`RootSystem::build`], with an explicit rank cap for `A` and `D`.
    pub fn build_with_cap(kind: Kind, rank: i64, cap: usize) -> Result<Self> {
        let ty = CartanType::new(kind, rank)?;
        if kind != Kind::E && ty.rank > cap {
            return Err(Error::RankTooLarge {
                kind: kind.letter(),
                rank: ty.rank,
                cap,
            });
        }
        Ok(Self::from_type(ty))
    }

    pub fn from_spec(spec: &str) -> Result<Self> {
        let ty: CartanType = spec.parse()?;
        Self::build(ty.kind, ty.rank as i64)
    }

    fn from_type(ty: CartanType) -> Self {
        let r = ty.rank;
        let mut cartan = vec![vec![0i64; r]; r];
        for (i, row) in cartan.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (i, j) in ty.dynkin_edges() {
            cartan[i][j] = -1;
            cartan[j][i] = -1;
        }
        let (adjugate, det) = integer_inverse(&cartan);

        // Orbit of the simple roots under the simple reflections.
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
        for i in 0..r {
            let mut e = vec![0; r];
            e[i] = 1;
            seen.insert(e.clone());
            queue.push_back(e);
        }
        while let Some(beta) = queue.pop_front() {
            for i in 0..r {
                let p: i64 = (0..r).map(|k| beta[k] * cartan[k][i]).sum();
                if p == 0 {
                    continue;
                }
                let mut image = beta.clone();
                image[i] -= p;
                if seen.insert(image.clone()) {
                    queue.push_back(image);
                }
            }
        }
        let mut positive: Vec<Vec<i64>> = seen
            .into_iter()
            .filter(|v| v.iter().all(|&c| c >= 0))
            .collect();
        positive.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let negative: Vec<Vec<i64>> = positive
            .iter()
            .map(|v| v.iter().map(|c| -c).collect())
            .collect();
        let roots: Vec<LatticeVector> = positive
            .into_iter()
            .chain(negative)
            .map(LatticeVector::root)
            .collect();
        let index = roots
            .iter()
            .enumerate()
            .map(|(k, v)| (v.coords.clone(), k))
            .collect();
        RootSystem {
            ty,
            cartan,
            adjugate,
            det,
            roots,
            index,
        }
    }

    pub fn cartan_type(&self) -> CartanType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.ty.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn cartan_det(&self) -> i64 {
        self.det
    }

    /// Number of positive roots.
    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }

    /// `rank + |roots|`.
    pub fn dim(&self) -> usize {
        self.rank() + self.roots.len()
    }

    /// All roots: positive roots first, then negatives in matching order.
    pub fn roots(&self) -> &[LatticeVector] {
        &self.roots
    }

    pub fn positive_roots(&self) -> &[LatticeVector] {
        &self.roots[..self.num_positive()]
    }

    pub fn negative_roots(&self) -> &[LatticeVector] {
        &self.roots[self.num_positive()..]
    }

    pub fn simple_root(&self, i: usize) -> &LatticeVector {
        let mut e = vec![0; self.rank()];
        e[i] = 1;
        &self.roots[self.index[&e]]
    }

    pub fn simple_roots(&self) -> Vec<LatticeVector> {
        (0..self.rank()).map(|i| self.simple_root(i).clone()).collect()
    }

    pub fn root_index(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    pub fn is_root(&self, coords: &[i64]) -> bool {
        self.index.contains_key(coords)
    }

    /// Index of `-roots[k]`.
    pub fn negation_index(&self, k: usize) -> usize {
        let n = self.num_positive();
        if k < n {
            k + n
        } else {
            k - n
        }
    }

    pub fn is_positive_index(&self, k: usize) -> bool {
        k < self.num_positive()
    }

    /// The highest root, the unique root maximal in dominance order.
    pub fn highest_root(&self) -> &LatticeVector {
        &self.roots[self.num_positive() - 1]
    }

    /// `rho` in fundamental-weight coordinates: all ones.
    pub fn rho(&self) -> LatticeVector {
        LatticeVector::weight(vec![1; self.rank()])
    }

    pub fn fundamental_weight(&self, i: usize) -> LatticeVector {
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        LatticeVector::weight(c)
    }

    fn check_len(&self, v: &LatticeVector) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::BasisMismatch {
                rank: self.rank(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Root coordinates `c` mapped to weight coordinates `c^T * cartan`.
    pub fn root_to_weight_coords(&self, c: &[i64]) -> Vec<i64> {
        let r = self.rank();
        (0..r)
            .map(|j| (0..r).map(|i| c[i] * self.cartan[i][j]).sum())
            .collect()
    }

    /// Inverse of [`RootSystem::root_to_weight_coords`]; `None` off the root lattice.
    pub fn weight_to_root_coords(&self, w: &[i64]) -> Option<Vec<i64>> {
        let r = self.rank();
        let mut out = Vec::with_capacity(r);
        for i in 0..r {
            let num: i64 = (0..r).map(|j| self.adjugate[i][j] * w[j]).sum();
            if num % self.det != 0 {
                return None;
            }
            out.push(num / self.det);
        }
        Some(out)
    }

    /// Re-express `v` in fundamental-weight coordinates.
    pub fn to_weight(&self, v: &LatticeVector) -> Result<LatticeVector> {
        self.check_len(v)?;
        Ok(match v.basis {
            Basis::FundamentalWeight => v.clone(),
            Basis::SimpleRoot => LatticeVector::weight(self.root_to_weight_coords(&v.coords)),
        })
    }

    /// Re-express `v` in simple-root coordinates, if it lies in the root lattice.
    pub fn to_root(&self, v: &LatticeVector) -> Result<LatticeVector> {
        self.check_len(v)?;
        match v.basis {
            Basis::SimpleRoot => Ok(v.clone()),
            Basis::FundamentalWeight => self
                .weight_to_root_coords(&v.coords)
                .map(LatticeVector::root)
                .ok_or_else(|| Error::NotInRootLattice(v.coords.clone())),
        }
    }

    /// Weight coordinates of `v` (converting if needed).
    pub fn weight_coords(&self, v: &LatticeVector) -> Result<Vec<i64>> {
        Ok(self.to_weight(v)?.coords)
    }

    /// The invariant form, normalized so roots have `(α, α) = 2`.
    ///
    /// Integral whenever one argument lies in the root lattice. Two weights
    /// outside the root lattice can pair to a fraction; that case reports
    /// [`Error::NotInRootLattice`].
    pub fn pairing(&self, v: &LatticeVector, w: &LatticeVector) -> Result<i64> {
        self.check_len(v)?;
        self.check_len(w)?;
        match (v.basis, w.basis) {
            (Basis::SimpleRoot, Basis::FundamentalWeight) => Ok(dot(&v.coords, &w.coords)),
            (Basis::FundamentalWeight, Basis::SimpleRoot) => Ok(dot(&v.coords, &w.coords)),
            (Basis::SimpleRoot, Basis::SimpleRoot) => {
                Ok(dot(&v.coords, &self.root_to_weight_coords(&w.coords)))
            }
            (Basis::FundamentalWeight, Basis::FundamentalWeight) => {
                if let Some(rc) = self.weight_to_root_coords(&v.coords) {
                    Ok(dot(&rc, &w.coords))
                } else if let Some(rc) = self.weight_to_root_coords(&w.coords) {
                    Ok(dot(&v.coords, &rc))
                } else {
                    Err(Error::NotInRootLattice(v.coords.clone()))
                }
            }
        }
    }

    /// `(α, α_i)` for root coordinates `alpha`.
    pub fn pair_simple(&self, alpha: &[i64], i: usize) -> i64 {
        (0..self.rank()).map(|k| alpha[k] * self.cartan[k][i]).sum()
    }

    /// `(α, β)` for two vectors in root coordinates.
    pub fn form(&self, a: &[i64], b: &[i64]) -> i64 {
        dot(a, &self.root_to_weight_coords(b))
    }

    /// Height of a root, reported positively for negative roots too.
    pub fn height(&self, alpha: &LatticeVector) -> i64 {
        self.signed_height(alpha).abs()
    }

    /// Plain coordinate sum in the simple-root basis.
    pub fn signed_height(&self, alpha: &LatticeVector) -> i64 {
        match alpha.basis {
            Basis::SimpleRoot => alpha.coord_sum(),
            Basis::FundamentalWeight => self
                .weight_to_root_coords(&alpha.coords)
                .map(|c| c.iter().sum())
                .unwrap_or_else(|| panic!("{alpha} is not in the root lattice")),
        }
    }

    /// The `α`-string through `β`: `(p, q)` with `β - pα, ..., β + qα` all roots.
    pub fn root_string(&self, alpha: &LatticeVector, beta: &LatticeVector) -> Result<(u32, u32)> {
        let a = self.to_root(alpha)?.coords;
        let b = self.to_root(beta)?.coords;
        if !self.is_root(&a) {
            return Err(Error::NotARoot(a));
        }
        if !self.is_root(&b) {
            return Err(Error::NotARoot(b));
        }
        if a == b || a.iter().zip(&b).all(|(x, y)| *x == -y) {
            return Err(Error::DependentRoots);
        }
        let walk = |sign: i64| {
            let mut k = 0u32;
            let mut cur = b.clone();
            loop {
                cur = cur.iter().zip(&a).map(|(c, x)| c + sign * x).collect();
                if !self.is_root(&cur) {
                    return k;
                }
                k += 1;
            }
        };
        Ok((walk(-1), walk(1)))
    }

    /// Simple reflection `s_i` acting on weight coordinates.
    pub fn reflect_weight(&self, i: usize, w: &mut [i64]) {
        let c = w[i];
        if c != 0 {
            for (j, wj) in w.iter_mut().enumerate() {
                *wj -= c * self.cartan[i][j];
            }
        }
    }

    pub fn is_dominant_coords(w: &[i64]) -> bool {
        w.iter().all(|&c| c >= 0)
    }
}

/// Integer vectors of length `rank` with coordinates in `-radius..=radius`.
///
/// When the full box exceeds `cap` points, every `stride`-th point in
/// lexicographic order is taken instead, so the sample is deterministic.
pub fn weight_ball(rank: usize, radius: i64, cap: usize) -> Vec<Vec<i64>> {
    let side = (2 * radius + 1) as u128;
    let total = side.pow(rank as u32);
    let stride = if total > cap as u128 {
        total.div_ceil(cap as u128)
    } else {
        1
    };
    let mut out = Vec::new();
    let mut idx: u128 = 0;
    while idx < total {
        let mut rem = idx;
        let mut v = vec![0i64; rank];
        for c in v.iter_mut().rev() {
            *c = (rem % side) as i64 - radius;
            rem /= side;
        }
        out.push(v);
        idx += stride;
    }
    out
}

/// Adjugate and determinant of a small nonsingular integer matrix, by exact
/// Gauss-Jordan elimination over the rationals.
fn integer_inverse(m: &[Vec<i64>]) -> (Vec<Vec<i64>>, i64) {
    use num_rational::Ratio;
    let n = m.len();
    let mut a: Vec<Vec<Ratio<i128>>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Ratio<i128>> = row.iter().map(|&x| Ratio::from_integer(x as i128)).collect();
            r.extend((0..n).map(|j| Ratio::from_integer((i == j) as i128)));
            r
        })
        .collect();
    let mut det = Ratio::from_integer(1i128);
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| a[r][col] != Ratio::from_integer(0))
            .expect("Cartan matrix is nonsingular");
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                if f != Ratio::from_integer(0) {
                    for c in 0..2 * n {
                        let v = a[col][c] * f;
                        a[r][c] -= v;
                    }
                }
            }
        }
    }
    assert!(det.is_integer());
    let d = det.to_integer();
    let adj = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = a[i][n + j] * Ratio::from_integer(d);
                    assert!(v.is_integer());
                    v.to_integer() as i64
                })
                .collect()
        })
        .collect();
    (adj, d as i64)
}
