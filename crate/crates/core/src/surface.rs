//! The exceptional curves `C_1, ..., C_r` of a minimal resolution of an ADE
//! surface singularity, their intersection lattice and its dictionary with
//! the roots.

use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::Serialize;

use crate::cotangent::descent_chain;
use crate::error::{Error, Result};
use crate::flag_cohomology::schubert_restriction_degree;
use crate::report::Report;
use crate::root_system::{dot, LatticeVector, RootSystem};

type Q = Ratio<i128>;

/// Intersection matrix of the exceptional `(-2)`-curves, `C_i` labelled by
/// the simple root `α_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolutionLattice {
    pub rank: usize,
    pub intersection: Vec<Vec<i64>>,
    pub labels: Vec<String>,
}

/// `Σ a_i C_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DivisorClass {
    pub coeffs: Vec<i64>,
}

impl DivisorClass {
    pub fn new(coeffs: impl Into<Vec<i64>>) -> Self {
        DivisorClass {
            coeffs: coeffs.into(),
        }
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    pub fn neg(&self) -> Self {
        DivisorClass::new(self.coeffs.iter().map(|c| -c).collect::<Vec<_>>())
    }
}

impl ResolutionLattice {
    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> i64 {
        let ib: Vec<i64> = self
            .intersection
            .iter()
            .map(|row| dot(row, &b.coeffs))
            .collect();
        dot(&a.coeffs, &ib)
    }

    pub fn self_intersection(&self, d: &DivisorClass) -> i64 {
        self.intersect(d, d)
    }

    /// Leading principal minors of `-intersection`, computed exactly.
    pub fn leading_minors(&self) -> Vec<i128> {
        (1..=self.rank)
            .map(|k| {
                let m: Vec<Vec<Q>> = (0..k)
                    .map(|i| (0..k).map(|j| Q::from_integer(-self.intersection[i][j] as i128)).collect())
                    .collect();
                let d = determinant(m);
                assert!(d.is_integer());
                d.to_integer()
            })
            .collect()
    }

    pub fn is_negative_definite(&self) -> bool {
        self.leading_minors().iter().all(|&m| m > 0)
    }

    /// `C_i` as a divisor class.
    pub fn curve(&self, i: usize) -> DivisorClass {
        let mut c = vec![0; self.rank];
        c[i] = 1;
        DivisorClass::new(c)
    }

    /// Every integer class with `D² = -2`.
    ///
    /// Writes `-D² = Σ d_i (x_i + Σ_{j>i} μ_ij x_j)²` via an exact rational
    /// `LDLᵀ` decomposition, then fixes coordinates from the last to the first,
    /// keeping only values whose partial sum stays within 2.
    pub fn minus_two_classes(&self) -> Vec<DivisorClass> {
        let n = self.rank;
        let q: Vec<Vec<Q>> = self
            .intersection
            .iter()
            .map(|row| row.iter().map(|&v| Q::from_integer(-v as i128)).collect())
            .collect();
        let mut d = vec![Q::from_integer(0); n];
        let mut mu = vec![vec![Q::from_integer(0); n]; n];
        for i in 0..n {
            let mut di = q[i][i];
            for k in 0..i {
                di -= mu[k][i] * mu[k][i] * d[k];
            }
            assert!(di > Q::from_integer(0), "form is not positive definite");
            d[i] = di;
            for j in i + 1..n {
                let mut v = q[i][j];
                for k in 0..i {
                    v -= mu[k][i] * mu[k][j] * d[k];
                }
                mu[i][j] = v / di;
            }
        }
        let mut out = Vec::new();
        let mut x = vec![0i64; n];
        let target = Q::from_integer(2);
        fn rec(
            i: usize,
            budget: Q,
            x: &mut Vec<i64>,
            d: &[Q],
            mu: &[Vec<Q>],
            lattice: &ResolutionLattice,
            out: &mut Vec<DivisorClass>,
        ) {
            let n = x.len();
            let mut center = Q::from_integer(0);
            for j in i + 1..n {
                center -= mu[i][j] * Q::from_integer(x[j] as i128);
            }
            let radius_sq = budget / d[i];
            let k = isqrt_floor(radius_sq) + 1;
            let lo = center.floor().to_integer() - k;
            let hi = center.ceil().to_integer() + k;
            for v in lo..=hi {
                let off = Q::from_integer(v) - center;
                let used = d[i] * off * off;
                if used > budget {
                    continue;
                }
                x[i] = v as i64;
                if i == 0 {
                    let cls = DivisorClass::new(x.clone());
                    if lattice.self_intersection(&cls) == -2 {
                        out.push(cls);
                    }
                } else {
                    rec(i - 1, budget - used, x, d, mu, lattice, out);
                }
            }
            x[i] = 0;
        }
        if n > 0 {
            rec(n - 1, target, &mut x, &d, &mu, self, &mut out);
        }
        out.sort();
        out
    }
}

fn isqrt_floor(v: Q) -> i128 {
    let f = v.floor().to_integer().max(0);
    let mut r = (f as f64).sqrt() as i128;
    while r * r > f {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= f {
        r += 1;
    }
    r
}

fn determinant(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut det = Q::from_integer(1);
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| m[r][col] != Q::from_integer(0)) else {
            return Q::from_integer(0);
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        for r in col + 1..n {
            let f = m[r][col] / p;
            for c in col..n {
                let v = m[col][c] * f;
                m[r][c] -= v;
            }
        }
    }
    det
}

/// Solve `x · a = b` for a row vector `x` over the rationals.
fn solve_row(a: &[Vec<i64>], b: &[i64]) -> Result<Vec<Q>> {
    let n = a.len();
    // Transposed system aᵀ xᵀ = bᵀ, augmented.
    let mut m: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row: Vec<Q> = (0..n).map(|j| Q::from_integer(a[j][i] as i128)).collect();
            row.push(Q::from_integer(b[i] as i128));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| m[r][col] != Q::from_integer(0))
            .ok_or(Error::SingularSystem)?;
        m.swap(piv, col);
        let p = m[col][col];
        for v in m[col].iter_mut() {
            *v /= p;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col && row[col] != Q::from_integer(0) {
                let f = row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= *y * f;
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n]).collect())
}

/// The lattice with `intersection = -cartan`.
pub fn resolution_lattice(rs: &RootSystem) -> ResolutionLattice {
    let intersection: Vec<Vec<i64>> = rs
        .cartan()
        .iter()
        .map(|row| row.iter().map(|v| -v).collect())
        .collect();
    let lattice = ResolutionLattice {
        rank: rs.rank(),
        intersection,
        labels: (1..=rs.rank()).map(|i| format!("C{i}")).collect(),
    };
    debug_assert!(lattice.is_negative_definite());
    lattice
}

/// The divisor `D = Σ n_i C_i` attached to the root `α = Σ n_i α_i`, so that
/// `𝔏_α` restricts to `O(-D)`.
///
/// Solves `m · [C_i·C_j] = -n · [(α_i, α_j)]` exactly and checks that the
/// unique solution is `m = n`.
pub fn root_to_divisor(rs: &RootSystem, lattice: &ResolutionLattice, alpha: &LatticeVector) -> Result<DivisorClass> {
    let n = rs.to_root(alpha)?.coords;
    if !rs.is_root(&n) {
        return Err(Error::NotARoot(n));
    }
    let r = rs.rank();
    let rhs: Vec<i64> = (0..r)
        .map(|j| -(0..r).map(|i| n[i] * rs.cartan()[i][j]).sum::<i64>())
        .collect();
    let m = solve_row(&lattice.intersection, &rhs)?;
    let m: Vec<i64> = m
        .iter()
        .map(|q| {
            assert!(q.is_integer(), "non-integral divisor coefficient");
            q.to_integer() as i64
        })
        .collect();
    assert_eq!(m, n, "divisor coefficients differ from root coordinates");
    let d = DivisorClass::new(m);
    debug_assert_eq!(lattice.self_intersection(&d), -2);
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BundleDecomposition {
    /// Rank of the trivial summand `O^{⊕r}`.
    pub trivial_rank: usize,
    /// One line bundle `O(D)` per class with `D² = -2`.
    pub divisors: Vec<DivisorClass>,
    pub total_rank: usize,
}

/// `O^{⊕r} ⊕ ⨁_{D² = -2} O(D)`, with the enumerated `(-2)`-classes checked
/// element by element against the image of [`root_to_divisor`].
pub fn bundle_decomposition(rs: &RootSystem) -> Result<BundleDecomposition> {
    let lattice = resolution_lattice(rs);
    let divisors = lattice.minus_two_classes();
    let enumerated: BTreeSet<DivisorClass> = divisors.iter().cloned().collect();
    let mut image = BTreeSet::new();
    for a in rs.roots() {
        image.insert(root_to_divisor(rs, &lattice, a)?);
    }
    if enumerated != image || divisors.len() != rs.roots().len() {
        return Err(Error::ConstructionFailure(format!(
            "{} classes with D² = -2, {} roots",
            divisors.len(),
            image.len()
        )));
    }
    Ok(BundleDecomposition {
        trivial_rank: rs.rank(),
        total_rank: rs.rank() + divisors.len(),
        divisors,
    })
}

/// Verdict that `H²(S̃, O(D)) = 0`, with the height induction that proves it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceH2Verdict {
    pub divisor: DivisorClass,
    pub vanishes: bool,
    /// Curves subtracted in turn, each meeting the current divisor with
    /// intersection number `-1`, down to a single `C_i`.
    pub chain: Vec<(usize, DivisorClass)>,
}

/// Replays the induction on `ht(D)` for an effective root class: the base
/// case is `H²(O(C_i)) = 0` (rationality of the surface), and each step
/// removes a curve `C_i` with `D · C_i = -1`.
pub fn surface_h2_oracle(rs: &RootSystem, lattice: &ResolutionLattice, d: &DivisorClass) -> Result<SurfaceH2Verdict> {
    if d.coeffs.len() != rs.rank() || lattice.self_intersection(d) != -2 || !rs.is_root(&d.coeffs) {
        return Err(Error::NotARootClass(d.coeffs.clone()));
    }
    if !d.is_effective() {
        return Err(Error::NotEffective(d.coeffs.clone()));
    }
    let steps = descent_chain(rs, &LatticeVector::root(d.neg().coeffs))
        .ok_or_else(|| Error::NotARootClass(d.coeffs.clone()))?;
    let mut chain = Vec::new();
    let mut cur = d.clone();
    for s in steps {
        debug_assert_eq!(lattice.intersect(&cur, &lattice.curve(s.simple)), -1);
        cur = DivisorClass::new(s.next.neg().coords);
        chain.push((s.simple, cur.clone()));
    }
    Ok(SurfaceH2Verdict {
        divisor: d.clone(),
        vanishes: true,
        chain,
    })
}

/// Row per root (in [`RootSystem::roots`] order), column per curve: the
/// degree `D_α · C_i` of `O(D_α)` on `C_i`.
pub fn restriction_matrix(rs: &RootSystem, lattice: &ResolutionLattice) -> Result<Vec<Vec<i64>>> {
    rs.roots()
        .iter()
        .map(|a| {
            let d = root_to_divisor(rs, lattice, a)?;
            Ok((0..rs.rank())
                .map(|i| lattice.intersect(&d, &lattice.curve(i)))
                .collect())
        })
        .collect()
}

/// `D_α · D_β = -(α, β)` for all pairs of roots.
pub fn verify_isometry(rs: &RootSystem) -> Report {
    let lattice = resolution_lattice(rs);
    let divisors: Vec<DivisorClass> = rs
        .roots()
        .iter()
        .map(|a| root_to_divisor(rs, &lattice, a).unwrap())
        .collect();
    let mut report = Report::new("surface.isometry");
    for (a, da) in rs.roots().iter().zip(&divisors) {
        for (b, db) in rs.roots().iter().zip(&divisors) {
            let lhs = lattice.intersect(da, db);
            let rhs = -rs.form(&a.coords, &b.coords);
            report.record((lhs != rhs).then(|| format!("D{a}·D{b} = {lhs}, expected {rhs}")));
        }
    }
    report
}

/// The flag-side restriction degree `(α, α_i)` against the surface side
/// `D_α · C_i`, which should be its negative.
pub fn verify_restriction_degrees(rs: &RootSystem) -> Report {
    let lattice = resolution_lattice(rs);
    let mut report = Report::new("surface.restriction_degrees");
    let m = match restriction_matrix(rs, &lattice) {
        Ok(m) => m,
        Err(e) => {
            report.record(Some(e.to_string()));
            return report;
        }
    };
    for (a, row) in rs.roots().iter().zip(&m) {
        for (i, &surface_side) in row.iter().enumerate() {
            let flag_side = schubert_restriction_degree(rs, a, i);
            report.record(match flag_side {
                Ok(f) if f == -surface_side => None,
                Ok(f) => Some(format!("{a}, C{}: flag {f}, surface {surface_side}", i + 1)),
                Err(e) => Some(format!("{a}: {e}")),
            });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        RootSystem::from_spec(s).unwrap()
    }

    #[test]
    fn lattices() {
        let l = resolution_lattice(&rs("A2"));
        assert_eq!(l.intersection, vec![vec![-2, 1], vec![1, -2]]);
        assert_eq!(resolution_lattice(&rs("A1")).intersection, vec![vec![-2]]);
        let e8 = resolution_lattice(&rs("E8"));
        assert!(e8.is_negative_definite());
        assert_eq!(*e8.leading_minors().last().unwrap(), 1);
        for i in 0..8 {
            assert_eq!(e8.intersection[i][i], -2);
        }
    }

    #[test]
    fn not_negative_definite_detected() {
        // affine A2 (a triangle of -2 curves) is only semidefinite
        let l = ResolutionLattice {
            rank: 3,
            intersection: vec![vec![-2, 1, 1], vec![1, -2, 1], vec![1, 1, -2]],
            labels: vec![],
        };
        assert!(!l.is_negative_definite());
    }

    #[test]
    fn divisors_of_roots() {
        let a2 = rs("A2");
        let l = resolution_lattice(&a2);
        let d = root_to_divisor(&a2, &l, &LatticeVector::root([1, 0])).unwrap();
        assert_eq!(d, DivisorClass::new([1, 0]));
        assert_eq!(l.self_intersection(&d), -2);
        let d = root_to_divisor(&a2, &l, &LatticeVector::root([1, 1])).unwrap();
        assert_eq!(d, DivisorClass::new([1, 1]));
        assert_eq!(l.self_intersection(&d), -2);
        let d = root_to_divisor(&a2, &l, &LatticeVector::root([-1, 0])).unwrap();
        assert_eq!(d, DivisorClass::new([-1, 0]));
        assert!(root_to_divisor(&a2, &l, &LatticeVector::root([1, -1])).is_err());
    }

    /// Independent oracle: brute force over a coordinate box.
    fn box_minus_two(l: &ResolutionLattice, bound: i64) -> BTreeSet<DivisorClass> {
        crate::root_system::weight_ball(l.rank, bound, usize::MAX)
            .into_iter()
            .map(DivisorClass::new)
            .filter(|d| l.self_intersection(d) == -2)
            .collect()
    }

    #[test]
    fn enumeration_matches_box_oracle() {
        for (s, bound) in [("A3", 2), ("D4", 3), ("A5", 2)] {
            let l = resolution_lattice(&rs(s));
            let got: BTreeSet<DivisorClass> = l.minus_two_classes().into_iter().collect();
            assert_eq!(got, box_minus_two(&l, bound), "{s}");
        }
    }

    #[test]
    fn decompositions() {
        for (s, total) in [("A1", 3), ("A2", 8), ("D4", 28), ("E6", 78), ("E7", 133), ("E8", 248)] {
            let dec = bundle_decomposition(&rs(s)).unwrap();
            assert_eq!(dec.total_rank, total, "{s}");
            let set: BTreeSet<_> = dec.divisors.iter().cloned().collect();
            assert!(dec.divisors.iter().all(|d| set.contains(&d.neg())));
        }
    }

    #[test]
    fn h2_oracle() {
        let a2 = rs("A2");
        let l = resolution_lattice(&a2);
        let v = surface_h2_oracle(&a2, &l, &DivisorClass::new([1, 0])).unwrap();
        assert!(v.vanishes && v.chain.is_empty());
        let v = surface_h2_oracle(&a2, &l, &DivisorClass::new([1, 1])).unwrap();
        assert!(v.vanishes);
        assert_eq!(v.chain.len(), 1);
        assert!(matches!(
            surface_h2_oracle(&a2, &l, &DivisorClass::new([-1, 0])),
            Err(Error::NotEffective(_))
        ));
        assert!(matches!(
            surface_h2_oracle(&a2, &l, &DivisorClass::new([2, 0])),
            Err(Error::NotARootClass(_))
        ));
        let e8 = rs("E8");
        let l8 = resolution_lattice(&e8);
        for a in e8.positive_roots() {
            let v = surface_h2_oracle(&e8, &l8, &DivisorClass::new(a.coords.clone())).unwrap();
            assert_eq!(v.chain.len() as i64, e8.height(a) - 1);
        }
    }

    #[test]
    fn restriction_entries() {
        let a2 = rs("A2");
        let l = resolution_lattice(&a2);
        let m = restriction_matrix(&a2, &l).unwrap();
        let row = |v: &[i64]| &m[a2.root_index(v).unwrap()];
        assert_eq!(row(&[1, 0])[0], -2);
        assert_eq!(row(&[1, 0])[1], 1);
        assert_eq!(row(&[1, 1])[0], -1);
    }

    #[test]
    fn isometry() {
        for s in ["A3", "D5", "E6"] {
            assert!(verify_isometry(&rs(s)).passed());
        }
    }

    #[test]
    fn restriction_degrees_all_types() {
        for t in ["A1", "A4", "D5", "E6", "E8"] {
            let rs = RootSystem::from_spec(t).unwrap();
            let rep = verify_restriction_degrees(&rs);
            assert!(rep.passed(), "{t}: {:?}", rep.violations);
        }
    }
}
