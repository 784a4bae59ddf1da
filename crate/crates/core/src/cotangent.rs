//! Dominance order, `λ⁺`, `λ*`, `Cht(λ)` and cohomology verdicts for the line
//! bundles `𝔏_λ` on the cotangent bundle `T*(G/B)`.
//!
//! `λ⁺` is the dominant Weyl conjugate of `λ`; `λ*` is the minimal dominant
//! weight above `λ`. `Cht(λ)` is the length of the longest chain of dominant
//! weights in `[λ*, λ⁺]`. Every dominant weight in that interval is found by an
//! exact search over root-lattice translates, and uniqueness of `λ*` is checked
//! rather than assumed.

use itertools::Itertools;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flag_cohomology::{bwb, dominant_conjugate};
use crate::report::Report;
use crate::root_system::{add, weight_ball, LatticeVector, RootSystem};

/// Default cap on the number of multisets in [`euler_characteristic_graded`].
pub const DEFAULT_MULTISET_CAP: u128 = 1_000_000;

/// `λ ≤ μ`: `μ - λ` is a nonnegative integer combination of simple roots.
pub fn dominance_leq(rs: &RootSystem, lambda: &LatticeVector, mu: &LatticeVector) -> Result<bool> {
    let l = rs.weight_coords(lambda)?;
    let m = rs.weight_coords(mu)?;
    let diff: Vec<i64> = m.iter().zip(&l).map(|(a, b)| a - b).collect();
    Ok(match rs.weight_to_root_coords(&diff) {
        Some(c) => c.iter().all(|&x| x >= 0),
        None => false,
    })
}

/// The dominant weight in the Weyl orbit of `λ`.
pub fn lambda_plus(rs: &RootSystem, lambda: &LatticeVector) -> Result<LatticeVector> {
    let (plus, _) = dominant_conjugate(rs, lambda)?;
    assert!(dominance_leq(rs, lambda, &plus)?, "λ ≤ λ⁺ violated");
    Ok(plus)
}

/// All dominant weights `μ` (weight coordinates) with `lower ≤ μ ≤ upper`.
///
/// Writes `μ = upper - Σ c_i α_i` with `0 ≤ c ≤ upper - lower` in root
/// coordinates and searches `c` depth-first, pruning a branch once some
/// coordinate of `μ` is negative even with every unassigned neighbour at its
/// bound.
pub fn dominant_interval(rs: &RootSystem, lower: &[i64], upper: &[i64]) -> Vec<Vec<i64>> {
    dominant_interval_limited(rs, lower, upper, usize::MAX)
}

/// Like [`dominant_interval`], stopping once `limit` weights are found
/// (the result is sorted either way).
fn dominant_interval_limited(rs: &RootSystem, lower: &[i64], upper: &[i64], limit: usize) -> Vec<Vec<i64>> {
    let r = rs.rank();
    let diff: Vec<i64> = upper.iter().zip(lower).map(|(a, b)| a - b).collect();
    let Some(bound) = rs.weight_to_root_coords(&diff) else {
        return Vec::new();
    };
    if bound.iter().any(|&b| b < 0) {
        return Vec::new();
    }
    let cartan = rs.cartan();
    let neighbours: Vec<Vec<usize>> = (0..r)
        .map(|i| (0..r).filter(|&j| j != i && cartan[i][j] != 0).collect())
        .collect();
    let mut out = Vec::new();
    let mut c = vec![0i64; r];
    fn feasible(
        k: usize,
        assigned: usize,
        c: &[i64],
        bound: &[i64],
        upper: &[i64],
        neighbours: &[Vec<usize>],
    ) -> bool {
        let mut v = upper[k] - 2 * c[k];
        for &j in &neighbours[k] {
            v += if j < assigned { c[j] } else { bound[j] };
        }
        v >= 0
    }
    fn rec(
        i: usize,
        c: &mut Vec<i64>,
        bound: &[i64],
        upper: &[i64],
        neighbours: &[Vec<usize>],
        rs: &RootSystem,
        out: &mut Vec<Vec<i64>>,
        limit: usize,
    ) {
        let r = c.len();
        if out.len() >= limit {
            return;
        }
        if i == r {
            let sub = rs.root_to_weight_coords(c);
            let mu: Vec<i64> = upper.iter().zip(&sub).map(|(a, b)| a - b).collect();
            if RootSystem::is_dominant_coords(&mu) {
                out.push(mu);
            }
            return;
        }
        for v in 0..=bound[i] {
            c[i] = v;
            // every coordinate touched so far must still be reachable
            let ok = (0..=i).all(|k| feasible(k, i + 1, c, bound, upper, neighbours))
                && neighbours[i]
                    .iter()
                    .filter(|&&k| k > i)
                    .all(|&k| feasible(k, i + 1, c, bound, upper, neighbours));
            if ok {
                rec(i + 1, c, bound, upper, neighbours, rs, out, limit);
            }
        }
        c[i] = 0;
    }
    rec(0, &mut c, &bound, upper, &neighbours, rs, &mut out, limit);
    out.sort();
    out
}

/// The unique minimal dominant weight `λ*` with `λ ≤ λ*`.
pub fn lambda_star(rs: &RootSystem, lambda: &LatticeVector) -> Result<LatticeVector> {
    let l = rs.weight_coords(lambda)?;
    let plus = lambda_plus(rs, lambda)?;
    let interval = dominant_interval(rs, &l, &plus.coords);
    Ok(LatticeVector::weight(unique_minimal(rs, &l, &interval)?))
}

fn leq_coords(rs: &RootSystem, a: &[i64], b: &[i64]) -> bool {
    let diff: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    rs.weight_to_root_coords(&diff)
        .is_some_and(|c| c.iter().all(|&x| x >= 0))
}

fn unique_minimal(rs: &RootSystem, lambda: &[i64], set: &[Vec<i64>]) -> Result<Vec<i64>> {
    let minimal: Vec<Vec<i64>> = set
        .iter()
        .filter(|m| !set.iter().any(|o| o != *m && leq_coords(rs, o, m)))
        .cloned()
        .collect();
    match minimal.len() {
        1 => Ok(minimal.into_iter().next().unwrap()),
        _ => Err(Error::NonUniqueMinimal {
            lambda: lambda.to_vec(),
            minimal,
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChtReport {
    pub lambda: LatticeVector,
    pub lambda_plus: LatticeVector,
    pub lambda_star: LatticeVector,
    pub cht: usize,
    /// `cht + 1` dominant weights from `λ*` to `λ⁺`, strictly increasing.
    pub chain_witness: Vec<LatticeVector>,
    /// Height of `λ⁺ - λ*`.
    pub shift: i64,
}

/// `Cht(λ)` with a longest chain in the dominance DAG of `[λ*, λ⁺]`.
pub fn cht(rs: &RootSystem, lambda: &LatticeVector) -> Result<ChtReport> {
    let l = rs.weight_coords(lambda)?;
    let plus = lambda_plus(rs, lambda)?;
    let interval = dominant_interval(rs, &l, &plus.coords);
    let star = unique_minimal(rs, &l, &interval)?;

    // Heights above λ* give a topological order.
    let height = |m: &[i64]| -> i64 {
        let d: Vec<i64> = m.iter().zip(&star).map(|(a, b)| a - b).collect();
        rs.weight_to_root_coords(&d).unwrap().iter().sum()
    };
    let mut nodes = interval.clone();
    nodes.sort_by_key(|m| height(m));
    let n = nodes.len();
    let mut best = vec![0usize; n];
    let mut prev: Vec<Option<usize>> = vec![None; n];
    for j in 0..n {
        for i in 0..j {
            if nodes[i] != nodes[j] && leq_coords(rs, &nodes[i], &nodes[j]) && best[i] + 1 > best[j] {
                best[j] = best[i] + 1;
                prev[j] = Some(i);
            }
        }
    }
    let top = nodes.iter().position(|m| *m == plus.coords).unwrap();
    // Any longest chain extends to end at λ⁺, so read it back from there.
    debug_assert_eq!(best.iter().max(), Some(&best[top]));
    let mut chain = vec![top];
    while let Some(p) = prev[*chain.last().unwrap()] {
        chain.push(p);
    }
    chain.reverse();
    let shift = height(&plus.coords);
    Ok(ChtReport {
        lambda: LatticeVector::weight(l),
        lambda_plus: plus,
        lambda_star: LatticeVector::weight(star),
        cht: best[top],
        chain_witness: chain.into_iter().map(|k| LatticeVector::weight(nodes[k].clone())).collect(),
        shift,
    })
}

/// `Cht(λ) = 0` iff `(λ, β) ≥ -1` for every positive root `β`.
pub fn cht_zero_criterion(rs: &RootSystem, lambda: &LatticeVector) -> Result<bool> {
    let w = rs.weight_coords(lambda)?;
    Ok(rs
        .positive_roots()
        .iter()
        .all(|b| crate::root_system::dot(&b.coords, &w) >= -1))
}

/// `Cht(λ) = 0`, decided without building the whole interval: it holds
/// exactly when `λ⁺` is the only dominant weight in `[λ, λ⁺]`.
pub fn cht_is_zero(rs: &RootSystem, lambda: &LatticeVector) -> Result<bool> {
    let l = rs.weight_coords(lambda)?;
    let plus = lambda_plus(rs, lambda)?;
    Ok(dominant_interval_limited(rs, &l, &plus.coords, 2).len() == 1)
}

/// Both parts of the `Cht = 0` lemma on the radius-2 weight ball (at most
/// `budget` weights): the coordinate criterion, and stability of `Cht = 0`
/// under adding a fundamental weight.
pub fn verify_cht_lemma(rs: &RootSystem, budget: usize) -> Report {
    let rows: Vec<Report> = weight_ball(rs.rank(), 2, budget)
        .into_par_iter()
        .map(|w| {
            let mut rep = Report::new("cotangent.cht_lemma");
            let lambda = LatticeVector::weight(w.clone());
            let crit = cht_zero_criterion(rs, &lambda).unwrap();
            match cht_is_zero(rs, &lambda) {
                Ok(zero) => {
                    rep.record((zero != crit).then(|| {
                        format!("λ = {w:?}: cht zero {zero}, criterion {crit}")
                    }));
                    if zero {
                        for i in 0..rs.rank() {
                            let mut v = w.clone();
                            v[i] += 1;
                            let z2 = cht_is_zero(rs, &LatticeVector::weight(v.clone()));
                            rep.record((z2 != Ok(true)).then(|| {
                                format!("λ = {w:?} + ω{}: cht zero {z2:?}", i + 1)
                            }));
                        }
                    }
                }
                Err(e) => rep.record(Some(format!("λ = {w:?}: {e}"))),
            }
            rep
        })
        .collect();
    let mut report = Report::new("cotangent.cht_lemma");
    for r in rows {
        report.merge(r);
    }
    report
}

/// `Cht(α) = 0` exactly for the positive roots.
pub fn verify_remark10(rs: &RootSystem) -> Report {
    let rows: Vec<Option<String>> = rs
        .roots()
        .par_iter()
        .map(|alpha| match cht(rs, alpha) {
            Ok(r) => {
                let positive = alpha.coords.iter().all(|&c| c >= 0);
                ((r.cht == 0) != positive).then(|| format!("{alpha}: cht {}", r.cht))
            }
            Err(e) => Some(format!("{alpha}: {e}")),
        })
        .collect();
    let mut report = Report::new("cotangent.remark10");
    for r in rows {
        report.record(r);
    }
    report
}

/// One step of the height induction on negative roots: add simple root
/// `simple` (0-based) to reach `next`, which has pairing `-1` with it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentStep {
    pub simple: usize,
    pub next: LatticeVector,
}

/// Descent from a negative root to a negative simple root; `None` if some
/// intermediate root admits no descent (never happens in ADE types).
pub fn descent_chain(rs: &RootSystem, lambda: &LatticeVector) -> Option<Vec<DescentStep>> {
    let mut cur = rs.to_root(lambda).ok()?.coords;
    if !rs.is_root(&cur) || cur.iter().any(|&c| c > 0) {
        return None;
    }
    let mut steps = Vec::new();
    while cur.iter().sum::<i64>() < -1 {
        let step = (0..rs.rank()).find_map(|i| {
            if rs.pair_simple(&cur, i) != -1 {
                return None;
            }
            let mut next = cur.clone();
            next[i] += 1;
            (rs.is_root(&next) && next.iter().all(|&c| c <= 0)).then_some((i, next))
        })?;
        cur = step.1.clone();
        steps.push(DescentStep {
            simple: step.0,
            next: LatticeVector::root(step.1),
        });
    }
    Some(steps)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InductionChain {
    pub root: LatticeVector,
    pub steps: Vec<DescentStep>,
}

/// Every negative root of height at least 2 has a simple root with pairing
/// `-1` whose sum is again negative; the full chain down to height 1 is
/// returned for every negative root.
pub fn verify_prop11_induction(rs: &RootSystem) -> (Report, Vec<InductionChain>) {
    let mut report = Report::new("cotangent.prop11_induction");
    let mut chains = Vec::new();
    for lambda in rs.negative_roots() {
        match descent_chain(rs, lambda) {
            Some(steps) => {
                let expected = (rs.height(lambda) - 1) as usize;
                report.record((steps.len() != expected).then(|| {
                    format!("{lambda}: chain of length {} expected {expected}", steps.len())
                }));
                chains.push(InductionChain {
                    root: lambda.clone(),
                    steps,
                });
            }
            None => report.record(Some(format!("{lambda}: no descent simple root"))),
        }
    }
    (report, chains)
}

/// Why `H²(𝔏_λ)` on `T*(G/B)` is known to vanish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum H2Reason {
    /// `Cht(λ) ≤ 1`, and cohomology vanishes above `Cht`.
    ChtAtMostOne,
    /// Negative root: the base case `H²(-α_i) = 0` and the shift
    /// `H^i(λ) ≅ H^i(λ + α)[-1]` along the descent chain.
    NegativeRootDescent(Vec<DescentStep>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct H1Structure {
    pub lambda_star: LatticeVector,
    pub lambda_plus: LatticeVector,
    pub shift: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CotangentVerdict {
    pub lambda: LatticeVector,
    pub cht: ChtReport,
    /// `H^i = 0` for every `i ≥ 1`.
    pub h_positive_vanish: bool,
    /// `H¹ ≅ H⁰(λ*)/H⁰(λ⁺)` up to the grading shift, when `Cht = 1`.
    pub h1_structure: Option<H1Structure>,
    /// All `H^i` vanish for `i` above this degree.
    pub upper_vanishing_degree: usize,
    /// `Some` when `H² = 0` is established.
    pub h2_vanishes: Option<H2Reason>,
}

pub fn cotangent_verdict(rs: &RootSystem, lambda: &LatticeVector) -> Result<CotangentVerdict> {
    let report = cht(rs, lambda)?;
    let c = report.cht;
    let h1_structure = (c == 1).then(|| H1Structure {
        lambda_star: report.lambda_star.clone(),
        lambda_plus: report.lambda_plus.clone(),
        shift: report.shift,
    });
    let as_root = rs.to_root(lambda).ok().map(|v| v.coords);
    let negative_root = as_root
        .as_ref()
        .is_some_and(|v| rs.is_root(v) && v.iter().all(|&x| x <= 0));
    let h2_vanishes = if negative_root {
        descent_chain(rs, lambda).map(H2Reason::NegativeRootDescent)
    } else if c <= 1 {
        Some(H2Reason::ChtAtMostOne)
    } else {
        None
    };
    Ok(CotangentVerdict {
        lambda: report.lambda.clone(),
        h_positive_vanish: c == 0,
        h1_structure,
        upper_vanishing_degree: c,
        h2_vanishes,
        cht: report,
    })
}

/// `χ(G/B, S^j 𝔫* ⊗ L_λ)`, summing `χ(L_{λ + σ(M)})` over multisets `M` of
/// `j` positive roots (the weights of `𝔫*`).
pub fn euler_characteristic_graded(
    rs: &RootSystem,
    lambda: &LatticeVector,
    j: usize,
    cap: u128,
) -> Result<BigInt> {
    let base = rs.weight_coords(lambda)?;
    let n = rs.num_positive() as u128;
    let count = binomial(n + j as u128 - 1, j as u128);
    if count > cap {
        return Err(Error::BudgetExceeded { needed: count, cap });
    }
    let weights: Vec<Vec<i64>> = rs
        .positive_roots()
        .iter()
        .map(|a| rs.root_to_weight_coords(&a.coords))
        .collect();
    let multisets: Vec<Vec<usize>> = (0..weights.len()).combinations_with_replacement(j).collect();
    let total = multisets
        .into_par_iter()
        .map(|m| {
            let mut w = base.clone();
            for k in m {
                w = add(&w, &weights[k]);
            }
            bwb(rs, &LatticeVector::weight(w)).unwrap().euler()
        })
        .reduce(BigInt::default, |a, b| a + b);
    Ok(total)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// `χ(S⁰ 𝔫* ⊗ L_{-α_i}) = -1` for every simple root, matching `dim H¹ = 1`.
pub fn verify_simple_euler(rs: &RootSystem) -> Report {
    let mut report = Report::new("cotangent.simple_euler");
    for a in rs.simple_roots() {
        let chi = euler_characteristic_graded(rs, &a.neg(), 0, DEFAULT_MULTISET_CAP);
        report.record(match chi {
            Ok(v) if v == BigInt::from(-1) => None,
            Ok(v) => Some(format!("{}: χ = {v}", a.neg())),
            Err(e) => Some(format!("{}: {e}", a.neg())),
        });
    }
    report
}
