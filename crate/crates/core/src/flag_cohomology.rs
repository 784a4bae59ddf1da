//! Line-bundle cohomology on the flag variety `G/B` (Borel-Weil-Bott).
//!
//! For a weight `λ`, `H^i(G/B, L_λ)` vanishes in every degree when `λ + ρ` is
//! singular. Otherwise it is nonzero only in degree `ind(λ + ρ)`, where it is
//! the irreducible module of highest weight `(λ + ρ)⁺ - ρ`.
//!
//! Weights are handled in fundamental-weight coordinates; Weyl group elements
//! only ever appear as words in the simple reflections.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::Report;
use crate::root_system::{dot, weight_ball, LatticeVector, RootSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    AllVanish,
    Concentrated,
}

/// Borel-Weil-Bott verdict for one line bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyVerdict {
    pub status: Status,
    pub degree: Option<usize>,
    pub highest_weight: Option<LatticeVector>,
    pub dimension: Option<BigUint>,
    /// Simple reflections (0-based) applied, in order, to sort `λ + ρ`.
    pub witness: Vec<usize>,
}

impl CohomologyVerdict {
    /// Euler characteristic contribution `(-1)^degree · dim`, zero when everything vanishes.
    pub fn euler(&self) -> num_bigint::BigInt {
        match (&self.degree, &self.dimension) {
            (Some(d), Some(dim)) => {
                let v = num_bigint::BigInt::from(dim.clone());
                if d % 2 == 0 {
                    v
                } else {
                    -v
                }
            }
            _ => num_bigint::BigInt::zero(),
        }
    }

    /// `dim H^i`.
    pub fn dim_in_degree(&self, i: usize) -> BigUint {
        match (&self.degree, &self.dimension) {
            (Some(d), Some(dim)) if *d == i => dim.clone(),
            _ => BigUint::zero(),
        }
    }
}

/// Whether some root pairs to zero with `mu`.
pub fn is_singular(rs: &RootSystem, mu: &LatticeVector) -> Result<bool> {
    let w = rs.weight_coords(mu)?;
    Ok(rs.positive_roots().iter().any(|a| dot(&a.coords, &w) == 0))
}

/// Number of positive roots pairing negatively with `mu`.
pub fn index(rs: &RootSystem, mu: &LatticeVector) -> Result<usize> {
    let w = rs.weight_coords(mu)?;
    Ok(rs
        .positive_roots()
        .iter()
        .filter(|a| dot(&a.coords, &w) < 0)
        .count())
}

/// Sort `mu` into the dominant chamber by reflecting at the first negative
/// coordinate until none is left. Returns the dominant weight and the word.
pub fn dominant_conjugate(rs: &RootSystem, mu: &LatticeVector) -> Result<(LatticeVector, Vec<usize>)> {
    let mut w = rs.weight_coords(mu)?;
    let mut word = Vec::new();
    while let Some(i) = w.iter().position(|&c| c < 0) {
        rs.reflect_weight(i, &mut w);
        word.push(i);
    }
    Ok((LatticeVector::weight(w), word))
}

/// Dimension of the irreducible module with dominant highest weight `mu`, by
/// the Weyl dimension formula `Π (μ+ρ, α) / Π (ρ, α)` over positive roots.
pub fn weyl_dim(rs: &RootSystem, mu: &LatticeVector) -> Result<BigUint> {
    let w = rs.weight_coords(mu)?;
    if !RootSystem::is_dominant_coords(&w) {
        return Err(Error::NotDominant(w));
    }
    let shifted: Vec<i64> = w.iter().map(|c| c + 1).collect();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for a in rs.positive_roots() {
        num *= BigUint::from(dot(&a.coords, &shifted) as u64);
        den *= BigUint::from(a.coord_sum() as u64);
    }
    let (q, r) = (&num / &den, &num % &den);
    assert!(r.is_zero(), "Weyl dimension quotient is not exact");
    Ok(q)
}

/// The Borel-Weil-Bott verdict for `L_λ`.
pub fn bwb(rs: &RootSystem, lambda: &LatticeVector) -> Result<CohomologyVerdict> {
    let w = rs.weight_coords(lambda)?;
    let shifted = LatticeVector::weight(w.iter().map(|c| c + 1).collect::<Vec<_>>());
    if is_singular(rs, &shifted)? {
        return Ok(CohomologyVerdict {
            status: Status::AllVanish,
            degree: None,
            highest_weight: None,
            dimension: None,
            witness: Vec::new(),
        });
    }
    let degree = index(rs, &shifted)?;
    let (dom, word) = dominant_conjugate(rs, &shifted)?;
    debug_assert_eq!(word.len(), degree);
    let mu = LatticeVector::weight(dom.coords.iter().map(|c| c - 1).collect::<Vec<_>>());
    let dimension = weyl_dim(rs, &mu)?;
    Ok(CohomologyVerdict {
        status: Status::Concentrated,
        degree: Some(degree),
        highest_weight: Some(mu),
        dimension: Some(dimension),
        witness: word,
    })
}

/// For every root `α`: no cohomology in degree ≥ 2, and `H¹(L_α) ≠ 0` exactly
/// for the negative simple roots, where it is one-dimensional.
pub fn verify_prop2(rs: &RootSystem) -> Report {
    let rows: Vec<Option<String>> = rs
        .roots()
        .par_iter()
        .map(|alpha| {
            let v = match bwb(rs, alpha) {
                Ok(v) => v,
                Err(e) => return Some(format!("{alpha}: {e}")),
            };
            let neg_simple = rs.signed_height(alpha) == -1;
            if let Some(d) = v.degree {
                if d >= 2 {
                    return Some(format!("{alpha}: cohomology in degree {d}"));
                }
            }
            let h1 = v.dim_in_degree(1);
            match (neg_simple, h1.is_zero()) {
                (true, true) => Some(format!("{alpha}: H^1 vanishes for a negative simple root")),
                (true, false) if h1 != BigUint::one() => {
                    Some(format!("{alpha}: dim H^1 = {h1}, expected 1"))
                }
                (false, false) => Some(format!("{alpha}: unexpected H^1 of dim {h1}")),
                _ => None,
            }
        })
        .collect();
    let mut report = Report::new("flag.prop2");
    for r in rows {
        report.record(r);
    }
    report
}

/// `ind(α + ρ) ≤ 1` whenever `α + ρ` is regular, together with the weight
/// coordinate ranges: `{-1, 0, 1}` for `α ≠ ±α_i`, `{-1, 0, 1, 2}` for `α = α_i`.
pub fn verify_lemma3(rs: &RootSystem) -> Report {
    let mut report = Report::new("flag.lemma3");
    for alpha in rs.roots() {
        let w = rs.root_to_weight_coords(&alpha.coords);
        let shifted = LatticeVector::weight(w.iter().map(|c| c + 1).collect::<Vec<_>>());
        let mut problems = Vec::new();
        if !is_singular(rs, &shifted).unwrap() {
            let ind = index(rs, &shifted).unwrap();
            if ind > 1 {
                problems.push(format!("ind = {ind}"));
            }
        }
        let h = rs.signed_height(alpha);
        let allowed: &[i64] = match h {
            1 => &[-1, 0, 1, 2],
            -1 => &[-2, -1, 0, 1],
            _ => &[-1, 0, 1],
        };
        if w.iter().any(|c| !allowed.contains(c)) {
            problems.push(format!("weight coordinates {w:?}"));
        }
        report.record((!problems.is_empty()).then(|| format!("{alpha}: {}", problems.join(", "))));
    }
    report
}

/// Degree of `L_λ` on the Schubert line `C_i`: `(λ, α_i)` (0-based `i`).
pub fn schubert_restriction_degree(rs: &RootSystem, lambda: &LatticeVector, i: usize) -> Result<i64> {
    if i >= rs.rank() {
        return Err(Error::IndexOutOfRange {
            index: i,
            rank: rs.rank(),
        });
    }
    Ok(rs.weight_coords(lambda)?[i])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Triviality {
    Trivial,
    /// Simple indices (0-based) whose class restricts to zero on `C_i`.
    Nontrivial(Vec<usize>),
}

/// The deformed bundle is trivial iff every `[φ_{-α_i}]` is nonzero on its
/// Schubert line. `nonvanishing[i]` reports that class for simple index `i`.
pub fn triviality_criterion(nonvanishing: &[bool]) -> Triviality {
    let failing: Vec<usize> = nonvanishing
        .iter()
        .enumerate()
        .filter(|(_, &ok)| !ok)
        .map(|(i, _)| i)
        .collect();
    if failing.is_empty() {
        Triviality::Trivial
    } else {
        Triviality::Nontrivial(failing)
    }
}

/// Duality `H^i(L_λ)* ≅ H^{N-i}(L_{-λ-2ρ})`, `N = |Φ⁺|`, over the weight ball
/// of the given radius (capped by deterministic striding).
pub fn verify_serre_duality(rs: &RootSystem, radius: i64, cap: usize) -> Report {
    let n = rs.num_positive();
    let rows: Vec<Option<String>> = weight_ball(rs.rank(), radius, cap)
        .into_par_iter()
        .map(|w| {
            let dual: Vec<i64> = w.iter().map(|c| -c - 2).collect();
            let a = bwb(rs, &LatticeVector::weight(w.clone())).unwrap();
            let b = bwb(rs, &LatticeVector::weight(dual)).unwrap();
            let ok = match (a.degree, b.degree) {
                (None, None) => true,
                (Some(i), Some(j)) => i + j == n && a.dimension == b.dimension,
                _ => false,
            };
            (!ok).then(|| format!("λ = {w:?}"))
        })
        .collect();
    let mut report = Report::new("flag.serre_duality");
    for r in rows {
        report.record(r);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        RootSystem::from_spec(s).unwrap()
    }

    fn w(c: &[i64]) -> LatticeVector {
        LatticeVector::weight(c.to_vec())
    }

    #[test]
    fn singularity() {
        let a2 = rs("A2");
        assert!(!is_singular(&a2, &a2.rho()).unwrap());
        assert!(is_singular(&a2, &w(&[0, 0])).unwrap());
        assert!(is_singular(&rs("E6"), &w(&[0; 6])).unwrap());
        // -θ + ρ = 0 in A2
        let theta = a2.to_weight(a2.highest_root()).unwrap();
        let v: Vec<i64> = theta.coords.iter().map(|c| 1 - c).collect();
        assert_eq!(v, vec![0, 0]);
        assert!(is_singular(&a2, &w(&v)).unwrap());
    }

    #[test]
    fn indices() {
        let a2 = rs("A2");
        assert_eq!(index(&a2, &a2.rho()).unwrap(), 0);
        // -α1 + ρ = (-2, 1) + (1, 1)
        assert_eq!(index(&a2, &w(&[-1, 2])).unwrap(), 1);
        let e7 = rs("E7");
        assert_eq!(index(&e7, &e7.rho().neg()).unwrap(), 63);
    }

    #[test]
    fn sorting() {
        let a2 = rs("A2");
        assert_eq!(dominant_conjugate(&a2, &a2.rho()).unwrap(), (a2.rho(), vec![]));
        assert_eq!(dominant_conjugate(&a2, &w(&[-1, 2])).unwrap(), (w(&[1, 1]), vec![0]));
        for s in ["A3", "D4", "E6"] {
            let sys = rs(s);
            let (dom, word) = dominant_conjugate(&sys, &sys.rho().neg()).unwrap();
            assert_eq!(dom, sys.rho());
            assert_eq!(word.len(), sys.num_positive());
        }
    }

    #[test]
    fn weyl_dimensions() {
        let a2 = rs("A2");
        assert_eq!(weyl_dim(&a2, &w(&[0, 0])).unwrap(), BigUint::one());
        assert_eq!(weyl_dim(&a2, &w(&[1, 1])).unwrap(), BigUint::from(8u32));
        assert_eq!(weyl_dim(&a2, &w(&[1, 0])).unwrap(), BigUint::from(3u32));
        assert!(matches!(weyl_dim(&a2, &w(&[-1, 0])), Err(Error::NotDominant(_))));
        let e8 = rs("E8");
        assert_eq!(weyl_dim(&e8, e8.highest_root()).unwrap(), BigUint::from(248u32));
        // 27-dimensional minuscule module of E6
        let e6 = rs("E6");
        assert_eq!(weyl_dim(&e6, &e6.fundamental_weight(0)).unwrap(), BigUint::from(27u32));
        // 56-dimensional minuscule module of E7
        let e7 = rs("E7");
        assert_eq!(weyl_dim(&e7, &e7.fundamental_weight(6)).unwrap(), BigUint::from(56u32));
    }

    #[test]
    fn adjoint_dimension_every_type() {
        for s in ["A1", "A5", "D3", "D7", "E6", "E7", "E8"] {
            let sys = rs(s);
            assert_eq!(
                weyl_dim(&sys, sys.highest_root()).unwrap(),
                BigUint::from(sys.dim()),
                "{s}"
            );
        }
    }

    #[test]
    fn bwb_examples() {
        let a2 = rs("A2");
        let v = bwb(&a2, &LatticeVector::root([-1, 0])).unwrap();
        assert_eq!(v.status, Status::Concentrated);
        assert_eq!(v.degree, Some(1));
        assert_eq!(v.highest_weight, Some(w(&[0, 0])));
        assert_eq!(v.dimension, Some(BigUint::one()));
        let v = bwb(&a2, &w(&[0, 0])).unwrap();
        assert_eq!((v.degree, v.dimension), (Some(0), Some(BigUint::one())));
        let v = bwb(&a2, &LatticeVector::root([-1, -1])).unwrap();
        assert_eq!(v.status, Status::AllVanish);
    }

    #[test]
    fn h1_at_negative_simple_matches_h0_of_trivial() {
        for s in ["A4", "D5", "E6"] {
            let sys = rs(s);
            let h0 = bwb(&sys, &LatticeVector::weight(vec![0; sys.rank()])).unwrap();
            for i in 0..sys.rank() {
                let v = bwb(&sys, &sys.simple_root(i).neg()).unwrap();
                assert_eq!(v.dim_in_degree(1), h0.dim_in_degree(0));
                assert_eq!(v.dim_in_degree(1), BigUint::one());
            }
        }
    }

    #[test]
    fn root_sweeps() {
        for s in ["A1", "A5", "D4", "E6", "E8"] {
            let sys = rs(s);
            let p = verify_prop2(&sys);
            assert!(p.passed(), "{s}: {:?}", p.violations);
            assert_eq!(p.checked, sys.roots().len());
            let l = verify_lemma3(&sys);
            assert!(l.passed(), "{s}: {:?}", l.violations);
        }
        assert_eq!(verify_prop2(&rs("A5")).checked, 30);
        assert_eq!(verify_prop2(&rs("D4")).checked, 24);
    }

    #[test]
    fn restriction_degrees() {
        let a2 = rs("A2");
        assert_eq!(schubert_restriction_degree(&a2, &LatticeVector::root([-1, 0]), 0).unwrap(), -2);
        assert_eq!(schubert_restriction_degree(&a2, &LatticeVector::root([-1, 0]), 1).unwrap(), 1);
        for i in 0..2 {
            for j in 0..2 {
                let d = schubert_restriction_degree(&a2, &a2.fundamental_weight(j), i).unwrap();
                assert_eq!(d, (i == j) as i64);
            }
        }
        assert!(matches!(
            schubert_restriction_degree(&a2, &a2.rho(), 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn triviality() {
        assert_eq!(triviality_criterion(&[true, true]), Triviality::Trivial);
        assert_eq!(triviality_criterion(&[false, true]), Triviality::Nontrivial(vec![0]));
        assert_eq!(triviality_criterion(&[true]), Triviality::Trivial);
    }

    #[test]
    fn duality_on_ball() {
        for s in ["A2", "A3", "D4"] {
            let r = verify_serre_duality(&rs(s), 3, 100_000);
            assert!(r.passed(), "{s}: {:?}", r.violations);
        }
        let r = verify_serre_duality(&rs("E6"), 3, 20_000);
        assert!(r.passed());
    }

    #[test]
    fn sorting_word_length_is_index_for_regular() {
        let sys = rs("D4");
        for v in weight_ball(4, 2, 10_000) {
            let mu = w(&v);
            if !is_singular(&sys, &mu).unwrap() {
                let (_, word) = dominant_conjugate(&sys, &mu).unwrap();
                assert_eq!(word.len(), index(&sys, &mu).unwrap());
            }
        }
    }
}
