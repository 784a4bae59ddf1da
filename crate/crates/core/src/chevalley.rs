//! A Chevalley basis `{h_i, x_α}` with integer structure constants.
//!
//! Basis order: `h_1, ..., h_r`, then `x_α` for the roots in
//! [`RootSystem::roots`] order. Brackets:
//!
//! * `[h_i, h_j] = 0`
//! * `[h_i, x_α] = (α, α_i) x_α`
//! * `[x_α, x_{-α}] = h_α`, the coroot written in the `h_i` (equal to the root coordinates)
//! * `[x_α, x_β] = n_{α,β} x_{α+β}` when `α + β` is a root, else `0`.
//!
//! The signs come from the bimultiplicative function `ε` on the root lattice
//! with `ε(α_i, α_i) = -1`, `ε(α_i, α_j) = -1` for adjacent `i < j`, and `+1`
//! otherwise. With the normalization `[x_α, x_{-α}] = +h_α` the table is
//! `n_{α,β} = s(α) s(β) s(α+β) ε(α, β)`, where `s` is the sign of a root.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::Report;
use crate::root_system::{CartanType, LatticeVector, RootSystem};

type Terms = Vec<(usize, i64)>;

/// The sign table `n_{α,β}` and coroot expansions, with the basis bracket
/// precomputed.
#[derive(Debug, Clone)]
pub struct ChevalleyConstants {
    ty: CartanType,
    rank: usize,
    num_roots: usize,
    /// `n[a * num_roots + b]` for root indices `a`, `b`.
    n: Vec<i8>,
    /// `sum[a * num_roots + b]`: index of `α_a + α_b` if it is a root.
    sum: Vec<Option<u32>>,
    h_coeffs: Vec<Vec<i64>>,
    /// Simple-root pairings `(α, α_i)` per root.
    weights: Vec<Vec<i64>>,
    neg: Vec<usize>,
}

/// `ε(a, b)` for the generator values above, as a sign.
fn epsilon(a: &[i64], b: &[i64], edges: &[(usize, usize)]) -> i8 {
    let mut exp: i64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    for &(i, j) in edges {
        exp += a[i] * b[j];
    }
    if exp.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn root_sign(v: &[i64]) -> i8 {
    if v.iter().all(|&c| c >= 0) {
        1
    } else {
        -1
    }
}

impl ChevalleyConstants {
    /// Build the sign table and verify the support, antisymmetry and cocycle
    /// conditions on it.
    pub fn build(rs: &RootSystem) -> Result<Self> {
        let c = Self::build_unchecked(rs, true);
        let support = c.check_support(rs);
        if !support.passed() {
            return Err(Error::ConstructionFailure(support.violations.join("; ")));
        }
        let cocycle = c.check_cocycle(rs);
        if !cocycle.passed() {
            return Err(Error::ConstructionFailure(cocycle.violations.join("; ")));
        }
        Ok(c)
    }

    /// Without the root-sign twist the table is `n = ε` itself. Exposed so the
    /// failure of that normalization can be demonstrated.
    pub fn build_unchecked(rs: &RootSystem, twisted: bool) -> Self {
        let roots = rs.roots();
        let m = roots.len();
        let edges = rs.cartan_type().dynkin_edges();
        let mut n = vec![0i8; m * m];
        let mut sum = vec![None; m * m];
        for (a, ra) in roots.iter().enumerate() {
            for (b, rb) in roots.iter().enumerate() {
                let s: Vec<i64> = ra.coords.iter().zip(&rb.coords).map(|(x, y)| x + y).collect();
                if let Some(k) = rs.root_index(&s) {
                    let mut sign = epsilon(&ra.coords, &rb.coords, &edges);
                    if twisted {
                        sign *= root_sign(&ra.coords) * root_sign(&rb.coords) * root_sign(&s);
                    }
                    n[a * m + b] = sign;
                    sum[a * m + b] = Some(k as u32);
                }
            }
        }
        let weights = roots
            .iter()
            .map(|v| rs.root_to_weight_coords(&v.coords))
            .collect();
        ChevalleyConstants {
            ty: rs.cartan_type(),
            rank: rs.rank(),
            num_roots: m,
            n,
            sum,
            h_coeffs: roots.iter().map(|v| v.coords.clone()).collect(),
            weights,
            neg: (0..m).map(|k| rs.negation_index(k)).collect(),
        }
    }

    pub fn cartan_type(&self) -> CartanType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_roots(&self) -> usize {
        self.num_roots
    }

    /// `rank + |roots|`.
    pub fn dim(&self) -> usize {
        self.rank + self.num_roots
    }

    /// `n_{α,β}` for root indices.
    pub fn n(&self, a: usize, b: usize) -> i8 {
        self.n[a * self.num_roots + b]
    }

    /// Index of `α_a + α_b`, when that is a root.
    pub fn sum_index(&self, a: usize, b: usize) -> Option<usize> {
        self.sum[a * self.num_roots + b].map(|k| k as usize)
    }

    /// Expansion of `h_α = [x_α, x_{-α}]` over `h_1, ..., h_r`.
    pub fn h_coeffs(&self, a: usize) -> &[i64] {
        &self.h_coeffs[a]
    }

    /// A copy with the single entry `n_{a,b}` negated; for mutation tests.
    pub fn with_flipped_sign(&self, a: usize, b: usize) -> Self {
        let mut c = self.clone();
        c.n[a * self.num_roots + b] *= -1;
        c
    }

    /// Basis index of `x_α` for root index `a`.
    pub fn root_basis(&self, a: usize) -> usize {
        self.rank + a
    }

    /// Bracket of two basis elements as a sparse list of `(basis index, coefficient)`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Terms {
        let r = self.rank;
        match (i < r, j < r) {
            (true, true) => Vec::new(),
            (true, false) => {
                let b = j - r;
                let w = self.weights[b][i];
                if w == 0 {
                    Vec::new()
                } else {
                    vec![(j, w)]
                }
            }
            (false, true) => {
                let a = i - r;
                let w = self.weights[a][j];
                if w == 0 {
                    Vec::new()
                } else {
                    vec![(i, -w)]
                }
            }
            (false, false) => {
                let (a, b) = (i - r, j - r);
                if self.neg[a] == b {
                    self.h_coeffs[a]
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(k, &c)| (k, c))
                        .collect()
                } else if let Some(s) = self.sum_index(a, b) {
                    vec![(r + s, self.n(a, b) as i64)]
                } else {
                    Vec::new()
                }
            }
        }
    }

    /// Apply `ad(e_i)` to a sparse vector, accumulating into `out`.
    pub(crate) fn ad_basis_apply(&self, i: usize, v: &[(usize, i64)], out: &mut Vec<(usize, i64)>) {
        for &(j, c) in v {
            for (k, d) in self.bracket_basis(i, j) {
                out.push((k, c * d));
            }
        }
    }

    /// Exhaustive support and antisymmetry check: `n_{α,β} ≠ 0` iff
    /// `α + β` is a root, values in `{±1}`, and `n_{α,β} = -n_{β,α}`.
    pub fn check_support(&self, rs: &RootSystem) -> Report {
        let mut report = Report::new("chevalley.support_antisymmetry");
        let roots = rs.roots();
        for a in 0..self.num_roots {
            for b in 0..self.num_roots {
                let s: Vec<i64> = roots[a]
                    .coords
                    .iter()
                    .zip(&roots[b].coords)
                    .map(|(x, y)| x + y)
                    .collect();
                let is_root = rs.is_root(&s);
                let v = self.n(a, b);
                let bad = if is_root {
                    v.abs() != 1 || self.n(b, a) != -v
                } else {
                    v != 0
                };
                report.record(bad.then(|| {
                    format!("n{}{} = {v}", roots[a], roots[b])
                }));
            }
        }
        report
    }

    /// The cocycle identity
    /// `n_{α,β} n_{α+β,γ} + n_{β,γ} n_{β+γ,α} + n_{γ,α} n_{γ+α,β} = 0`
    /// over all pairwise independent triples; a term whose subscript is not a
    /// root reads as 0.
    pub fn check_cocycle(&self, rs: &RootSystem) -> Report {
        let m = self.num_roots;
        let term = |a: usize, b: usize, c: usize| -> i64 {
            match self.sum_index(a, b) {
                Some(s) => self.n(a, b) as i64 * self.n(s, c) as i64,
                None => 0,
            }
        };
        let rows: Vec<Report> = (0..m)
            .into_par_iter()
            .map(|a| {
                let mut rep = Report::new("chevalley.cocycle");
                for b in 0..m {
                    if b == a || b == self.neg[a] {
                        continue;
                    }
                    for c in 0..m {
                        if c == a || c == self.neg[a] || c == b || c == self.neg[b] {
                            continue;
                        }
                        let v = term(a, b, c) + term(b, c, a) + term(c, a, b);
                        rep.record((v != 0).then(|| {
                            let roots = rs.roots();
                            format!("cocycle({}, {}, {}) = {v}", roots[a], roots[b], roots[c])
                        }));
                    }
                }
                rep
            })
            .collect();
        let mut report = Report::new("chevalley.cocycle");
        for r in rows {
            report.merge(r);
        }
        report
    }

    /// Jacobi residual `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]` on basis elements.
    pub fn jacobi_residual(&self, x: usize, y: usize, z: usize) -> Vec<(usize, i64)> {
        let mut acc = Vec::new();
        for (p, q, s) in [(x, y, z), (y, z, x), (z, x, y)] {
            let inner = self.bracket_basis(q, s);
            self.ad_basis_apply(p, &inner, &mut acc);
        }
        collapse(acc)
    }

    /// Jacobi identity on basis triples. `Exhaustive` visits all `dim³`
    /// triples; `Sampled` draws triples from a seeded generator.
    pub fn check_jacobi(&self, mode: JacobiMode) -> Report {
        let d = self.dim();
        let describe = |x: usize, y: usize, z: usize, res: &[(usize, i64)]| {
            format!("jacobi(e{x}, e{y}, e{z}) = {res:?}")
        };
        let rows: Vec<Report> = match mode {
            JacobiMode::Exhaustive => (0..d)
                .into_par_iter()
                .map(|x| {
                    let mut rep = Report::new("chevalley.jacobi");
                    for y in 0..d {
                        for z in 0..d {
                            let res = self.jacobi_residual(x, y, z);
                            rep.record((!res.is_empty()).then(|| describe(x, y, z, &res)));
                        }
                    }
                    rep
                })
                .collect(),
            JacobiMode::Sampled { triples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let picks: Vec<(usize, usize, usize)> = (0..triples)
                    .map(|_| (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d)))
                    .collect();
                picks
                    .par_chunks(4096)
                    .map(|chunk| {
                        let mut rep = Report::new("chevalley.jacobi");
                        for &(x, y, z) in chunk {
                            let res = self.jacobi_residual(x, y, z);
                            rep.record((!res.is_empty()).then(|| describe(x, y, z, &res)));
                        }
                        rep
                    })
                    .collect()
            }
        };
        let mut report = Report::new("chevalley.jacobi");
        for r in rows {
            report.merge(r);
        }
        report
    }

    /// `ad([x, y]) = ad(x) ad(y) - ad(y) ad(x)` for `pairs` random basis pairs,
    /// compared column by column.
    pub fn check_ad_homomorphism(&self, pairs: usize, seed: u64) -> Report {
        let d = self.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let picks: Vec<(usize, usize)> = (0..pairs)
            .map(|_| (rng.gen_range(0..d), rng.gen_range(0..d)))
            .collect();
        let rows: Vec<Report> = picks
            .par_chunks(256)
            .map(|chunk| {
                let mut rep = Report::new("chevalley.ad_homomorphism");
                for &(x, y) in chunk {
                    let xy = self.bracket_basis(x, y);
                    let mut bad = None;
                    for k in 0..d {
                        let mut lhs = Vec::new();
                        for &(b, c) in &xy {
                            for (t, v) in self.bracket_basis(b, k) {
                                lhs.push((t, c * v));
                            }
                        }
                        let mut rhs = Vec::new();
                        self.ad_basis_apply(x, &self.bracket_basis(y, k), &mut rhs);
                        let mut yx = Vec::new();
                        self.ad_basis_apply(y, &self.bracket_basis(x, k), &mut yx);
                        rhs.extend(yx.into_iter().map(|(t, v)| (t, -v)));
                        lhs.extend(rhs.into_iter().map(|(t, v)| (t, -v)));
                        if !collapse(lhs).is_empty() {
                            bad = Some(format!("ad([e{x}, e{y}]) differs on column {k}"));
                            break;
                        }
                    }
                    rep.record(bad);
                }
                rep
            })
            .collect();
        let mut report = Report::new("chevalley.ad_homomorphism");
        for r in rows {
            report.merge(r);
        }
        report
    }

    /// Whether `x ↦ ad(x)` is injective, i.e. the center is trivial. Rank of
    /// the stacked ad map computed modulo a large prime; full rank mod p
    /// implies full rank over the rationals.
    pub fn is_centerless(&self) -> bool {
        const P: i64 = 2_147_483_647;
        let d = self.dim();
        // Row (j, k) of the stacked map: x ↦ coefficient of e_j in [x, e_k].
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for k in 0..d {
            let mut block = vec![vec![0i64; d]; d];
            for i in 0..d {
                for (j, c) in self.bracket_basis(i, k) {
                    block[j][i] = c.rem_euclid(P);
                }
            }
            rows.extend(block.into_iter().filter(|r| r.iter().any(|&c| c != 0)));
        }
        rank_mod_p(rows, d, P) == d
    }

    /// One line per nonzero entry: `α-coords | β-coords | sign`.
    pub fn dump(&self, rs: &RootSystem) -> String {
        let mut out = String::new();
        let roots = rs.roots();
        let fmt = |v: &LatticeVector| {
            v.coords
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        for a in 0..self.num_roots {
            for b in 0..self.num_roots {
                let s = self.n(a, b);
                if s != 0 {
                    let _ = writeln!(out, "{} | {} | {:+}", fmt(&roots[a]), fmt(&roots[b]), s);
                }
            }
        }
        out
    }
}

/// How to visit basis triples for the Jacobi check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobiMode {
    Exhaustive,
    Sampled { triples: usize, seed: u64 },
}

pub(crate) fn collapse(mut v: Vec<(usize, i64)>) -> Vec<(usize, i64)> {
    v.sort_unstable_by_key(|t| t.0);
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(v.len());
    for (k, c) in v {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 += c,
            _ => out.push((k, c)),
        }
    }
    out.retain(|t| t.1 != 0);
    out
}

fn rank_mod_p(mut rows: Vec<Vec<i64>>, cols: usize, p: i64) -> usize {
    let inv = |a: i64| -> i64 {
        let (mut base, mut e, mut acc) = (a.rem_euclid(p), p - 2, 1i64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let iv = inv(rows[rank][col]);
        for c in rows[rank].iter_mut() {
            *c = *c * iv % p;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x - f * y).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// An element of the Lie algebra in the Chevalley basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LieElement {
    #[serde(skip)]
    ty: CartanType,
    rank: usize,
    coeffs: Vec<i64>,
}

impl LieElement {
    pub fn zero(c: &ChevalleyConstants) -> Self {
        LieElement {
            ty: c.ty,
            rank: c.rank,
            coeffs: vec![0; c.dim()],
        }
    }

    /// The `k`-th basis element.
    pub fn basis(c: &ChevalleyConstants, k: usize) -> Self {
        let mut e = Self::zero(c);
        e.coeffs[k] = 1;
        e
    }

    /// `h_i`, 0-based.
    pub fn h(c: &ChevalleyConstants, i: usize) -> Self {
        Self::basis(c, i)
    }

    /// `x_α` for root index `a`.
    pub fn x(c: &ChevalleyConstants, a: usize) -> Self {
        Self::basis(c, c.rank + a)
    }

    pub fn from_coeffs(c: &ChevalleyConstants, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != c.dim() {
            return Err(Error::SystemMismatch);
        }
        Ok(LieElement {
            ty: c.ty,
            rank: c.rank,
            coeffs,
        })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Coefficients of `h_1, ..., h_r`.
    pub fn cartan_part(&self) -> &[i64] {
        &self.coeffs[..self.rank]
    }

    /// Coefficient of `x_α` for root index `a`.
    pub fn root_coeff(&self, a: usize) -> i64 {
        self.coeffs[self.rank + a]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.ty != other.ty {
            return Err(Error::SystemMismatch);
        }
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(out)
    }

    pub fn scale(&self, s: i64) -> Self {
        let mut out = self.clone();
        for a in out.coeffs.iter_mut() {
            *a *= s;
        }
        out
    }

    fn support(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (k, c))
    }
}

/// Bilinear extension of the basis bracket.
pub fn bracket(x: &LieElement, y: &LieElement, c: &ChevalleyConstants) -> Result<LieElement> {
    if x.ty != c.ty || y.ty != c.ty {
        return Err(Error::SystemMismatch);
    }
    let mut out = LieElement::zero(c);
    for (i, a) in x.support() {
        for (j, b) in y.support() {
            for (k, v) in c.bracket_basis(i, j) {
                out.coeffs[k] += a * b * v;
            }
        }
    }
    Ok(out)
}

/// Dense matrix of `ad(x)` in the ordered Chevalley basis; column `k` holds `[x, e_k]`.
pub fn adjoint_matrix(x: &LieElement, c: &ChevalleyConstants) -> Result<Vec<Vec<i64>>> {
    if x.ty != c.ty {
        return Err(Error::SystemMismatch);
    }
    let d = c.dim();
    let mut m = vec![vec![0i64; d]; d];
    for (i, a) in x.support() {
        for k in 0..d {
            for (j, v) in c.bracket_basis(i, k) {
                m[j][k] += a * v;
            }
        }
    }
    Ok(m)
}

/// Options for [`verify_chevalley`].
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub jacobi: JacobiMode,
    pub ad_pairs: usize,
    pub seed: u64,
}

impl VerifyOptions {
    /// Exhaustive Jacobi through dimension 133 (E7), sampled at 10⁶ triples
    /// beyond that unless `full` is set.
    pub fn for_system(rs: &RootSystem, full: bool, seed: u64) -> Self {
        let jacobi = if full || rs.dim() <= 133 {
            JacobiMode::Exhaustive
        } else {
            JacobiMode::Sampled {
                triples: 1_000_000,
                seed,
            }
        };
        VerifyOptions {
            jacobi,
            ad_pairs: 10_000,
            seed,
        }
    }
}

/// Support/antisymmetry, cocycle, Jacobi and ad-homomorphism checks.
pub fn verify_chevalley(c: &ChevalleyConstants, rs: &RootSystem, opts: &VerifyOptions) -> Vec<Report> {
    vec![
        c.check_support(rs),
        c.check_cocycle(rs),
        c.check_jacobi(opts.jacobi),
        c.check_ad_homomorphism(opts.ad_pairs, opts.seed),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(s: &str) -> (RootSystem, ChevalleyConstants) {
        let rs = RootSystem::from_spec(s).unwrap();
        let c = ChevalleyConstants::build(&rs).unwrap();
        (rs, c)
    }

    fn idx(rs: &RootSystem, v: &[i64]) -> usize {
        rs.root_index(v).unwrap()
    }

    #[test]
    fn a1_negation_bracket_routes_to_h() {
        let (rs, c) = setup("A1");
        let a = idx(&rs, &[1]);
        let b = idx(&rs, &[-1]);
        assert_eq!(c.n(a, b), 0);
        let h = bracket(&LieElement::x(&c, a), &LieElement::x(&c, b), &c).unwrap();
        assert_eq!(h.cartan_part(), &[1]);
    }

    #[test]
    fn a2_examples() {
        let (rs, c) = setup("A2");
        let a1 = idx(&rs, &[1, 0]);
        let a2 = idx(&rs, &[0, 1]);
        assert_eq!(c.n(a1, a2).abs(), 1);
        let h1 = LieElement::h(&c, 0);
        let x1 = LieElement::x(&c, a1);
        assert_eq!(bracket(&h1, &x1, &c).unwrap(), x1.scale(2));
        let xm1 = LieElement::x(&c, idx(&rs, &[-1, 0]));
        let h = bracket(&x1, &xm1, &c).unwrap();
        assert_eq!(h.cartan_part(), &[1, 0]);
        assert!((0..rs.roots().len()).all(|k| h.root_coeff(k) == 0));
    }

    #[test]
    fn a3_orthogonal_bracket_vanishes() {
        let (rs, c) = setup("A3");
        let x1 = LieElement::x(&c, idx(&rs, &[1, 0, 0]));
        let x3 = LieElement::x(&c, idx(&rs, &[0, 0, 1]));
        assert!(bracket(&x1, &x3, &c).unwrap().is_zero());
    }

    #[test]
    fn system_mismatch() {
        let (_, c2) = setup("A2");
        let (_, c3) = setup("A3");
        let x = LieElement::h(&c2, 0);
        let y = LieElement::h(&c3, 0);
        assert_eq!(bracket(&x, &y, &c2), Err(Error::SystemMismatch));
        assert_eq!(x.add(&y), Err(Error::SystemMismatch));
        assert!(LieElement::from_coeffs(&c2, vec![0; 3]).is_err());
    }

    #[test]
    fn untwisted_epsilon_fails_jacobi() {
        let rs = RootSystem::from_spec("A2").unwrap();
        let c = ChevalleyConstants::build_unchecked(&rs, false);
        assert!(!c.check_jacobi(JacobiMode::Exhaustive).passed());
    }

    #[test]
    fn cocycle_fails_on_dependent_triples() {
        // With γ = -α the identity picks up (β, α) instead of 0, which is why
        // the check is restricted to pairwise independent triples.
        let (rs, c) = setup("A2");
        let a = idx(&rs, &[1, 0]);
        let b = idx(&rs, &[0, 1]);
        let g = idx(&rs, &[-1, 0]);
        let term = |x: usize, y: usize, z: usize| {
            c.sum_index(x, y)
                .map(|s| c.n(x, y) as i64 * c.n(s, z) as i64)
                .unwrap_or(0)
        };
        let v = term(a, b, g) + term(b, g, a) + term(g, a, b);
        assert_eq!(v, rs.form(&[0, 1], &[1, 0]));
    }

    #[test]
    fn ad_h1_in_a1_is_diagonal() {
        let (_, c) = setup("A1");
        let m = adjoint_matrix(&LieElement::h(&c, 0), &c).unwrap();
        assert_eq!(m, vec![vec![0, 0, 0], vec![0, 2, 0], vec![0, 0, -2]]);
    }

    fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = a.len();
        let mut out = vec![vec![0; n]; n];
        for i in 0..n {
            for k in 0..n {
                if a[i][k] != 0 {
                    for j in 0..n {
                        out[i][j] += a[i][k] * b[k][j];
                    }
                }
            }
        }
        out
    }

    #[test]
    fn ad_highest_root_is_nilpotent_of_order_three() {
        let (rs, c) = setup("A2");
        let x = LieElement::x(&c, idx(&rs, &rs.highest_root().coords));
        let m = adjoint_matrix(&x, &c).unwrap();
        let m2 = matmul(&m, &m);
        let m3 = matmul(&m2, &m);
        assert!(m2.iter().flatten().any(|&v| v != 0));
        assert!(m3.iter().flatten().all(|&v| v == 0));
    }

    #[test]
    fn adjoint_matrix_is_linear() {
        let (_, c) = setup("D4");
        let x = LieElement::x(&c, 3);
        let y = LieElement::h(&c, 1).scale(3);
        let lhs = adjoint_matrix(&x.add(&y).unwrap(), &c).unwrap();
        let mx = adjoint_matrix(&x, &c).unwrap();
        let my = adjoint_matrix(&y, &c).unwrap();
        for i in 0..c.dim() {
            for j in 0..c.dim() {
                assert_eq!(lhs[i][j], mx[i][j] + my[i][j]);
            }
        }
    }

    #[test]
    fn dense_ad_is_homomorphism_on_a3() {
        // Dense matrix products as an independent route to the sparse check.
        let (_, c) = setup("A3");
        let d = c.dim();
        for x in 0..d {
            for y in (0..d).step_by(3) {
                let ex = LieElement::basis(&c, x);
                let ey = LieElement::basis(&c, y);
                let lhs = adjoint_matrix(&bracket(&ex, &ey, &c).unwrap(), &c).unwrap();
                let ax = adjoint_matrix(&ex, &c).unwrap();
                let ay = adjoint_matrix(&ey, &c).unwrap();
                let (p, q) = (matmul(&ax, &ay), matmul(&ay, &ax));
                for i in 0..d {
                    for j in 0..d {
                        assert_eq!(lhs[i][j], p[i][j] - q[i][j]);
                    }
                }
            }
        }
    }

    #[test]
    fn verification_passes_small_types() {
        for s in ["A1", "A2", "A3", "D4"] {
            let (rs, c) = setup(s);
            for rep in verify_chevalley(&c, &rs, &VerifyOptions::for_system(&rs, false, 7)) {
                assert!(rep.passed(), "{s} {}: {:?}", rep.check, &rep.violations[..1]);
            }
        }
    }

    #[test]
    fn string_compatibility() {
        let (rs, c) = setup("D5");
        let m = rs.roots().len();
        for a in 0..m {
            for b in 0..m {
                if b == a || b == rs.negation_index(a) {
                    continue;
                }
                let xa = LieElement::x(&c, a);
                let inner = bracket(&xa, &LieElement::x(&c, b), &c).unwrap();
                assert!(bracket(&xa, &inner, &c).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn centerless() {
        for s in ["A1", "A3", "D4"] {
            assert!(setup(s).1.is_centerless(), "{s}");
        }
    }

    #[test]
    fn dump_format() {
        let (rs, c) = setup("A2");
        let dump = c.dump(&rs);
        // 12 ordered pairs of roots summing to a root in A2
        assert_eq!(dump.lines().count(), 12);
        assert!(dump.lines().all(|l| l.split(" | ").count() == 3));
    }
}
