//! Formal obstruction calculus for deformed holomorphic structures
//! `∂̄_φ = ∂̄₀ + Σ_α φ_α ad(x_α)`, with `α` running over one half of the roots.
//!
//! Forms live in a graded-commutative algebra over the integers generated by
//! odd `φ_α` (degree 1) and even `ψ_α = ∂̄₀ φ_α` (degree 2). Squaring the
//! operator symbolically and reading off the coefficient of each `ad(x_α)`
//! gives the integrability system
//!
//! ```text
//! ψ_α + Σ n_{β,γ} φ_β φ_γ = 0
//! ```
//!
//! with one term per unordered decomposition `α = β + γ`, `β` before `γ` in the
//! root order. (Summing over ordered pairs instead would double every term.)

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::chevalley::{collapse, ChevalleyConstants};
use crate::cotangent::cotangent_verdict;
use crate::error::{Error, Result};
use crate::flag_cohomology::bwb;
use crate::report::Report;
use crate::root_system::{CartanType, LatticeVector, RootSystem};
use crate::surface::{resolution_lattice, surface_h2_oracle, DivisorClass, ResolutionLattice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Half {
    PositiveHalf,
    NegativeHalf,
}

impl Half {
    pub fn contains(self, rs: &RootSystem, k: usize) -> bool {
        rs.is_positive_index(k) == (self == Half::PositiveHalf)
    }
}

/// A generator, indexed by its slot in the system's root order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Generator {
    Phi(u32),
    Psi(u32),
}

impl Generator {
    fn is_odd(self) -> bool {
        matches!(self, Generator::Phi(_))
    }

    fn key(self) -> (u32, u8) {
        match self {
            Generator::Phi(s) => (s, 0),
            Generator::Psi(s) => (s, 1),
        }
    }
}

/// Product of generators in canonical order (by slot, `φ` before `ψ`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Monomial(Vec<Generator>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// Normalize a written product. Returns the sign picked up from
    /// reordering odd generators, or `None` if some `φ` repeats.
    pub fn canonical(mut gens: Vec<Generator>) -> Option<(i64, Monomial)> {
        // Inversions among odd generators decide the sign; even ones commute.
        let odd: Vec<(u32, u8)> = gens.iter().filter(|g| g.is_odd()).map(|g| g.key()).collect();
        let mut inversions = 0usize;
        for i in 0..odd.len() {
            for j in i + 1..odd.len() {
                match odd[i].cmp(&odd[j]) {
                    std::cmp::Ordering::Greater => inversions += 1,
                    std::cmp::Ordering::Equal => return None,
                    std::cmp::Ordering::Less => {}
                }
            }
        }
        gens.sort_by_key(|g| g.key());
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((sign, Monomial(gens)))
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0
    }

    /// Number of odd generators.
    pub fn odd_degree(&self) -> usize {
        self.0.iter().filter(|g| g.is_odd()).count()
    }

    /// Total form degree: `φ` counts 1, `ψ` counts 2.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|g| if g.is_odd() { 1 } else { 2 }).sum()
    }
}

/// A sparse integer combination of monomials.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FormalForm {
    terms: BTreeMap<Monomial, i64>,
}

impl FormalForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, Monomial::one())
    }

    pub fn monomial(c: i64, m: Monomial) -> Self {
        let mut f = Self::zero();
        f.add_term(c, m);
        f
    }

    pub fn phi(slot: u32) -> Self {
        Self::monomial(1, Monomial(vec![Generator::Phi(slot)]))
    }

    pub fn psi(slot: u32) -> Self {
        Self::monomial(1, Monomial(vec![Generator::Psi(slot)]))
    }

    /// Product of generators in the written order.
    pub fn product(gens: &[Generator]) -> Self {
        match Monomial::canonical(gens.to_vec()) {
            Some((s, m)) => Self::monomial(s, m),
            None => Self::zero(),
        }
    }

    pub fn add_term(&mut self, c: i64, m: Monomial) {
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(c, m.clone());
        }
        out
    }

    pub fn scale(&self, s: i64) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.terms() {
            out.add_term(c * s, m.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let mut gens = a.0.clone();
                gens.extend_from_slice(&b.0);
                if let Some((s, m)) = Monomial::canonical(gens) {
                    out.add_term(s * ca * cb, m);
                }
            }
        }
        out
    }

    /// The derivation `δ` with `δφ = ψ`, `δψ = 0` and the graded Leibniz rule.
    pub fn delta(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.terms() {
            let mut odd_before = 0;
            for (i, g) in m.0.iter().enumerate() {
                if let Generator::Phi(s) = *g {
                    let mut gens = m.0.clone();
                    gens[i] = Generator::Psi(s);
                    let sign = if odd_before % 2 == 0 { 1 } else { -1 };
                    if let Some((t, mm)) = Monomial::canonical(gens) {
                        out.add_term(sign * t * c, mm);
                    }
                    odd_before += 1;
                }
            }
        }
        out
    }

    /// Replace every `ψ_s` by `map[s]` (which must be even), leaving `φ` alone.
    pub fn substitute_psi(&self, map: &HashMap<u32, FormalForm>) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.terms() {
            let mut acc = Self::monomial(c, Monomial::one());
            for g in &m.0 {
                let factor = match g {
                    Generator::Psi(s) if map.contains_key(s) => map[s].clone(),
                    _ => Self::product(&[*g]),
                };
                acc = acc.mul(&factor);
            }
            out = out.add(&acc);
        }
        out
    }
}

/// The root order used for slots: `slots[k]` is a root index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootOrder {
    slots: Vec<usize>,
    slot_of: HashMap<usize, u32>,
}

impl RootOrder {
    /// Roots of `half` in the root system's own order.
    pub fn canonical(rs: &RootSystem, half: Half) -> Self {
        Self::from_roots((0..rs.roots().len()).filter(|&k| half.contains(rs, k)).collect())
    }

    pub fn from_roots(slots: Vec<usize>) -> Self {
        let slot_of = slots.iter().enumerate().map(|(s, &k)| (k, s as u32)).collect();
        RootOrder { slots, slot_of }
    }

    pub fn slot(&self, root: usize) -> Option<u32> {
        self.slot_of.get(&root).copied()
    }

    pub fn root(&self, slot: u32) -> usize {
        self.slots[slot as usize]
    }

    pub fn roots(&self) -> &[usize] {
        &self.slots
    }
}

/// `(δ + Σ φ_α ad(x_α))²` expanded symbolically on the Chevalley basis and
/// written as `Σ_α F_α ad(x_α)`. Returns `F_α` for every root in the order
/// (keyed by root index).
///
/// Every monomial's operator must be `ad` of an element supported on the
/// half; anything else, including any `ad(h_i)` part, is a
/// [`Error::CancellationFailure`].
pub fn expand_curvature(c: &ChevalleyConstants, order: &RootOrder) -> Result<BTreeMap<usize, FormalForm>> {
    let d = c.dim();
    let r = c.rank();
    // monomial -> (row, col) -> coefficient
    let mut blocks: HashMap<Monomial, HashMap<(usize, usize), i64>> = HashMap::new();
    let mut push = |m: Monomial, row: usize, col: usize, v: i64| {
        *blocks.entry(m).or_default().entry((row, col)).or_insert(0) += v;
    };
    for col in 0..d {
        // D(e_col) = Σ_β φ_β ⊗ [x_β, e_col]
        let mut first: Vec<(u32, usize, i64)> = Vec::new();
        for (slot, &b) in order.roots().iter().enumerate() {
            for (j, v) in c.bracket_basis(c.root_basis(b), col) {
                first.push((slot as u32, j, v));
            }
        }
        for &(sb, j, v) in &first {
            // δ(φ_β) e_j
            push(Monomial(vec![Generator::Psi(sb)]), j, col, v);
            // Σ_α φ_α ∧ φ_β ⊗ [x_α, e_j]
            for (sa, &a) in order.roots().iter().enumerate() {
                let Some((sign, m)) = Monomial::canonical(vec![Generator::Phi(sa as u32), Generator::Phi(sb)])
                else {
                    continue;
                };
                for (k, w) in c.bracket_basis(c.root_basis(a), j) {
                    push(m.clone(), k, col, sign * v * w);
                }
            }
        }
    }

    let mut out: BTreeMap<usize, FormalForm> = order.roots().iter().map(|&k| (k, FormalForm::zero())).collect();
    let mut monomials: Vec<_> = blocks.into_iter().collect();
    monomials.sort_by(|a, b| a.0.cmp(&b.0));
    for (m, entries) in monomials {
        let entries: HashMap<(usize, usize), i64> = entries.into_iter().filter(|e| e.1 != 0).collect();
        if entries.is_empty() {
            continue;
        }
        let element = decompose_inner(c, &entries).ok_or_else(|| {
            Error::CancellationFailure(format!("{m:?}: operator is not ad of any element"))
        })?;
        if element[..r].iter().any(|&v| v != 0) {
            return Err(Error::CancellationFailure(format!("{m:?}: ad(h) part {:?}", &element[..r])));
        }
        let shape_ok = m.odd_degree() == 2 && m.0.len() == 2 || m.odd_degree() == 0 && m.0.len() == 1;
        for (k, &v) in element[r..].iter().enumerate() {
            if v == 0 {
                continue;
            }
            if order.slot(k).is_none() {
                return Err(Error::CancellationFailure(format!("{m:?}: ad(x) outside the half at root {k}")));
            }
            if !shape_ok {
                return Err(Error::CancellationFailure(format!("{m:?}: unexpected monomial shape")));
            }
            out.get_mut(&k).unwrap().add_term(v, m.clone());
        }
    }
    Ok(out)
}

/// Find `x` with `ad(x) = M` for a sparse integer matrix `M`, or `None`.
///
/// Root coefficients are read from the columns `h_i` (where
/// `[x_γ, h_i] = -(γ, α_i) x_γ`), the Cartan part from the diagonal at the
/// simple root vectors; the candidate is then checked against every entry.
fn decompose_inner(c: &ChevalleyConstants, m: &HashMap<(usize, usize), i64>) -> Option<Vec<i64>> {
    let r = c.rank();
    let d = c.dim();
    let mut x = vec![0i64; d];
    for g in 0..c.num_roots() {
        let row = r + g;
        // any i with [x_γ, h_i] ≠ 0
        let (i, w) = (0..r)
            .map(|i| (i, c.bracket_basis(row, i)))
            .find_map(|(i, t)| t.first().map(|&(_, w)| (i, w)))?;
        let val = m.get(&(row, i)).copied().unwrap_or(0);
        if val % w != 0 {
            return None;
        }
        x[row] = val / w;
    }
    // Cartan part: [h, x_{α_i}] = Σ_j c_j (α_i, α_j) x_{α_i}
    let simple: Vec<usize> = (0..c.num_roots())
        .filter(|&k| {
            let h = c.h_coeffs(k);
            h.iter().sum::<i64>() == 1 && h.iter().all(|&v| v >= 0)
        })
        .collect();
    let mut vals = vec![0i64; r];
    let mut cartan = vec![vec![0i64; r]; r];
    for &k in &simple {
        let i = c.h_coeffs(k).iter().position(|&v| v == 1).unwrap();
        vals[i] = m.get(&(r + k, r + k)).copied().unwrap_or(0);
        for (j, row) in cartan[i].iter_mut().enumerate() {
            *row = c.bracket_basis(j, r + k).first().map(|t| t.1).unwrap_or(0);
        }
    }
    let h = solve_integer(&cartan, &vals)?;
    x[..r].copy_from_slice(&h);

    // Verify: ad(x) equals M on every column.
    let mut expected: HashMap<(usize, usize), i64> = HashMap::new();
    for col in 0..d {
        let mut acc = Vec::new();
        for (b, &v) in x.iter().enumerate() {
            if v != 0 {
                for (k, w) in c.bracket_basis(b, col) {
                    acc.push((k, v * w));
                }
            }
        }
        for (k, v) in collapse(acc) {
            expected.insert((k, col), v);
        }
    }
    (expected == *m).then_some(x)
}

/// Integer solution of `a x = b` for a small nonsingular matrix, if one exists.
fn solve_integer(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<i64>> {
    use num_rational::Ratio;
    let n = a.len();
    let mut m: Vec<Vec<Ratio<i128>>> = (0..n)
        .map(|i| {
            let mut row: Vec<Ratio<i128>> = a[i].iter().map(|&v| Ratio::from_integer(v as i128)).collect();
            row.push(Ratio::from_integer(b[i] as i128));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| m[r][col] != Ratio::from_integer(0))?;
        m.swap(piv, col);
        let p = m[col][col];
        for v in m[col].iter_mut() {
            *v /= p;
        }
        let pr = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col {
                let f = row[col];
                if f != Ratio::from_integer(0) {
                    for (x, y) in row.iter_mut().zip(&pr) {
                        *x -= *y * f;
                    }
                }
            }
        }
    }
    m.into_iter()
        .map(|row| row[n].is_integer().then(|| row[n].to_integer() as i64))
        .collect()
}

/// One quadratic term `n_{β,γ} φ_β φ_γ`, `β` before `γ` in the root order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadraticTerm {
    pub sign: i8,
    pub beta: LatticeVector,
    pub gamma: LatticeVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Equation {
    pub root: LatticeVector,
    pub height: i64,
    pub terms: Vec<QuadraticTerm>,
}

/// How quadratic terms are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QuadraticConvention {
    /// One term per unordered decomposition; the ordered-pair sum is twice this.
    UnorderedPairs,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionSystem {
    pub cartan_type: CartanType,
    pub half: Half,
    pub convention: QuadraticConvention,
    /// Equations in solve order: by height, then root order.
    pub equations: Vec<Equation>,
    #[serde(skip)]
    order: RootOrder,
    #[serde(skip)]
    forms: BTreeMap<usize, FormalForm>,
}

impl ObstructionSystem {
    pub fn order(&self) -> &RootOrder {
        &self.order
    }

    /// `ψ_α + Σ n_{β,γ} φ_β φ_γ` for the root with index `k`.
    pub fn form(&self, k: usize) -> Option<&FormalForm> {
        self.forms.get(&k)
    }

    pub fn quadratic_count(&self) -> usize {
        self.equations.iter().filter(|e| !e.terms.is_empty()).count()
    }

    /// Human-readable equations, e.g. `∂̄₀φ(α1+α2) + φ(α1)∧φ(α2) = 0`.
    pub fn render(&self) -> String {
        self.render_with('α')
    }

    /// As [`render`](Self::render) with simple roots named `letter1`, `letter2`, ...
    /// (`C` gives the exceptional curves of the surface).
    pub fn render_with(&self, letter: char) -> String {
        let mut out = String::new();
        for e in &self.equations {
            out.push_str(&format!("∂̄₀φ({})", label_with(&e.root, letter)));
            for t in &e.terms {
                let s = if t.sign > 0 { '+' } else { '-' };
                out.push_str(&format!(
                    " {s} φ({})∧φ({})",
                    label_with(&t.beta, letter),
                    label_with(&t.gamma, letter)
                ));
            }
            out.push_str(" = 0\n");
        }
        out
    }
}

/// `α1+α2`, `-α1-2α2`, ...
pub fn root_label(v: &LatticeVector) -> String {
    label_with(v, 'α')
}

fn label_with(v: &LatticeVector, letter: char) -> String {
    let mut s = String::new();
    for (i, &c) in v.coords.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if c < 0 {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        if c.abs() != 1 {
            s.push_str(&c.abs().to_string());
        }
        s.push_str(&format!("{letter}{}", i + 1));
    }
    s
}

impl fmt::Display for ObstructionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Build the system from the decompositions `α = β + γ` inside the half and
/// check it against [`expand_curvature`] term by term.
pub fn build_system(rs: &RootSystem, c: &ChevalleyConstants, half: Half) -> Result<ObstructionSystem> {
    build_system_with_order(rs, c, half, RootOrder::canonical(rs, half))
}

pub fn build_system_with_order(
    rs: &RootSystem,
    c: &ChevalleyConstants,
    half: Half,
    order: RootOrder,
) -> Result<ObstructionSystem> {
    let roots = rs.roots();
    let mut forms = BTreeMap::new();
    let mut equations = Vec::new();
    for &k in order.roots() {
        let sk = order.slot(k).unwrap();
        let mut form = FormalForm::psi(sk);
        let mut terms = Vec::new();
        for &b in order.roots() {
            for &g in order.roots() {
                let (sb, sg) = (order.slot(b).unwrap(), order.slot(g).unwrap());
                if sb < sg && c.sum_index(b, g) == Some(k) {
                    let n = c.n(b, g);
                    terms.push(QuadraticTerm {
                        sign: n,
                        beta: roots[b].clone(),
                        gamma: roots[g].clone(),
                    });
                    form.add_term(n as i64, Monomial(vec![Generator::Phi(sb), Generator::Phi(sg)]));
                }
            }
        }
        forms.insert(k, form);
        equations.push((rs.height(&roots[k]), sk, Equation {
            root: roots[k].clone(),
            height: rs.height(&roots[k]),
            terms,
        }));
    }
    let expanded = expand_curvature(c, &order)?;
    if expanded != forms {
        let bad: Vec<String> = forms
            .iter()
            .filter(|(k, f)| expanded.get(k) != Some(f))
            .map(|(k, _)| roots[*k].to_string())
            .collect();
        return Err(Error::ConstructionFailure(format!(
            "decomposition sum differs from curvature expansion at {}",
            bad.join(", ")
        )));
    }
    equations.sort_by_key(|e| (e.0, e.1));
    Ok(ObstructionSystem {
        cartan_type: rs.cartan_type(),
        half,
        convention: QuadraticConvention::UnorderedPairs,
        equations: equations.into_iter().map(|e| e.2).collect(),
        order,
        forms,
    })
}

/// Verdict on `H²` of the line bundle attached to one root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct H2VanishVerdict {
    pub vanishes: bool,
    pub citation: String,
}

/// A source of `H²` vanishing verdicts, one per root of the half.
pub trait H2Oracle {
    fn name(&self) -> &str;
    fn h2(&self, root: &LatticeVector) -> Option<H2VanishVerdict>;
}

/// `H²(G/B, L_α)` from Borel-Weil-Bott.
pub struct FlagOracle<'a> {
    pub rs: &'a RootSystem,
}

impl H2Oracle for FlagOracle<'_> {
    fn name(&self) -> &str {
        "flag"
    }

    fn h2(&self, root: &LatticeVector) -> Option<H2VanishVerdict> {
        let v = bwb(self.rs, root).ok()?;
        let citation = match v.degree {
            Some(d) => format!("bwb: concentrated in degree {d}"),
            None => "bwb: all degrees vanish".to_string(),
        };
        Some(H2VanishVerdict {
            vanishes: v.degree != Some(2),
            citation,
        })
    }
}

/// `H²(T*(G/B), 𝔏_α)` from `Cht` and the negative-root height induction.
pub struct CotangentOracle<'a> {
    pub rs: &'a RootSystem,
}

impl H2Oracle for CotangentOracle<'_> {
    fn name(&self) -> &str {
        "cotangent"
    }

    fn h2(&self, root: &LatticeVector) -> Option<H2VanishVerdict> {
        let v = cotangent_verdict(self.rs, root).ok()?;
        Some(match v.h2_vanishes {
            Some(crate::cotangent::H2Reason::ChtAtMostOne) => H2VanishVerdict {
                vanishes: true,
                citation: format!("cht = {}", v.cht.cht),
            },
            Some(crate::cotangent::H2Reason::NegativeRootDescent(steps)) => H2VanishVerdict {
                vanishes: true,
                citation: format!("negative-root descent, {} steps", steps.len()),
            },
            None => H2VanishVerdict {
                vanishes: false,
                citation: format!("cht = {}, no vanishing argument", v.cht.cht),
            },
        })
    }
}

/// `H²(S̃, O(D))` on the resolved surface. A root of the half is sent to the
/// effective class: `D_α` on the positive half, `D_{-α}` on the negative one.
pub struct SurfaceOracle<'a> {
    pub rs: &'a RootSystem,
    pub lattice: ResolutionLattice,
}

impl<'a> SurfaceOracle<'a> {
    pub fn new(rs: &'a RootSystem) -> Self {
        SurfaceOracle {
            rs,
            lattice: resolution_lattice(rs),
        }
    }
}

impl H2Oracle for SurfaceOracle<'_> {
    fn name(&self) -> &str {
        "surface"
    }

    fn h2(&self, root: &LatticeVector) -> Option<H2VanishVerdict> {
        let coords = self.rs.to_root(root).ok()?.coords;
        let d = DivisorClass::new(coords);
        let d = if d.is_effective() { d } else { d.neg() };
        let v = surface_h2_oracle(self.rs, &self.lattice, &d).ok()?;
        Some(H2VanishVerdict {
            vanishes: v.vanishes,
            citation: format!("surface induction, {} steps", v.chain.len()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateEntry {
    pub root: LatticeVector,
    pub height: i64,
    pub h2: H2VanishVerdict,
    /// Height-1 roots: the class `[φ_α]` must be nonzero in `H¹`.
    pub requires_nontrivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolvabilityCertificate {
    pub oracle: String,
    pub entries: Vec<CertificateEntry>,
    pub complete: bool,
    /// Roots of height ≥ 2 whose obstruction space does not vanish.
    pub failing: Vec<LatticeVector>,
}

impl SolvabilityCertificate {
    pub fn nontriviality_requirements(&self) -> Vec<&LatticeVector> {
        self.entries
            .iter()
            .filter(|e| e.requires_nontrivial)
            .map(|e| &e.root)
            .collect()
    }
}

/// Walk the equations by height: each root of height ≥ 2 needs a vanishing
/// obstruction space, each height-1 root records its nontriviality
/// requirement.
pub fn certify_solvability(system: &ObstructionSystem, oracle: &dyn H2Oracle) -> Result<SolvabilityCertificate> {
    let mut entries = Vec::new();
    let mut failing = Vec::new();
    for e in &system.equations {
        let h2 = oracle
            .h2(&e.root)
            .ok_or_else(|| Error::IncompleteOracle(e.root.coords.clone()))?;
        if e.height >= 2 && !h2.vanishes {
            failing.push(e.root.clone());
        }
        entries.push(CertificateEntry {
            root: e.root.clone(),
            height: e.height,
            h2,
            requires_nontrivial: e.height == 1,
        });
    }
    Ok(SolvabilityCertificate {
        oracle: oracle.name().to_string(),
        complete: failing.is_empty(),
        entries,
        failing,
    })
}

/// Consistency of the system with the given constants:
///
/// * each `ad(x_α)`, `α` in the half, is a derivation of the bracket, which is
///   what makes `∂̄_φ` compatible with the Lie structure;
/// * the curvature expansion with these constants reproduces the system;
/// * `δ` of each quadratic part vanishes once every `ψ_β` is replaced by
///   `-Σ n φφ` from the lower equations.
pub fn check_bianchi(system: &ObstructionSystem, c: &ChevalleyConstants) -> Report {
    let mut report = Report::new("obstruction.bianchi");
    let d = c.dim();
    let order = &system.order;

    for &a in order.roots() {
        let xa = c.root_basis(a);
        let mut bad = 0usize;
        for y in 0..d {
            for z in 0..d {
                let mut acc = Vec::new();
                c.ad_basis_apply(xa, &c.bracket_basis(y, z), &mut acc);
                for (k, v) in c.bracket_basis(xa, y) {
                    for (t, w) in c.bracket_basis(k, z) {
                        acc.push((t, -v * w));
                    }
                }
                for (k, v) in c.bracket_basis(xa, z) {
                    for (t, w) in c.bracket_basis(y, k) {
                        acc.push((t, -v * w));
                    }
                }
                if !collapse(acc).is_empty() {
                    bad += 1;
                }
            }
        }
        report.record((bad > 0).then(|| format!("ad(x_{a}) fails the derivation rule on {bad} pairs")));
    }

    match expand_curvature(c, order) {
        Ok(expanded) => {
            for (k, f) in &system.forms {
                report.record((expanded.get(k) != Some(f)).then(|| format!("expansion differs at root {k}")));
            }
        }
        Err(e) => report.record(Some(e.to_string())),
    }

    let subst: HashMap<u32, FormalForm> = system
        .forms
        .iter()
        .map(|(&k, f)| {
            let s = order.slot(k).unwrap();
            (s, f.add(&FormalForm::psi(s).scale(-1)).scale(-1))
        })
        .collect();
    for (&k, f) in &system.forms {
        let s = order.slot(k).unwrap();
        let quadratic = f.add(&FormalForm::psi(s).scale(-1));
        let residual = quadratic.delta().substitute_psi(&subst);
        report.record((!residual.is_zero()).then(|| format!("bianchi residual at root {k}: {residual:?}")));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(s: &str) -> (RootSystem, ChevalleyConstants) {
        let rs = RootSystem::from_spec(s).unwrap();
        let c = ChevalleyConstants::build(&rs).unwrap();
        (rs, c)
    }

    #[test]
    fn canonical_signs() {
        let (s, m) = Monomial::canonical(vec![Generator::Phi(2), Generator::Phi(1)]).unwrap();
        assert_eq!(s, -1);
        assert_eq!(m.generators(), &[Generator::Phi(1), Generator::Phi(2)]);
        assert!(Monomial::canonical(vec![Generator::Phi(1), Generator::Phi(1)]).is_none());
        let (s, _) = Monomial::canonical(vec![Generator::Psi(0), Generator::Phi(2), Generator::Phi(1)]).unwrap();
        assert_eq!(s, -1);
        let (s, _) = Monomial::canonical(vec![Generator::Phi(2), Generator::Psi(0), Generator::Phi(1)]).unwrap();
        assert_eq!(s, -1);
        assert!(Monomial::canonical(vec![Generator::Psi(1), Generator::Psi(1)]).is_some());
    }

    #[test]
    fn delta_leibniz() {
        // δ(φ1 φ2) = ψ1 φ2 - φ1 ψ2
        let f = FormalForm::product(&[Generator::Phi(1), Generator::Phi(2)]);
        let expected = FormalForm::product(&[Generator::Psi(1), Generator::Phi(2)])
            .add(&FormalForm::product(&[Generator::Phi(1), Generator::Psi(2)]).scale(-1));
        assert_eq!(f.delta(), expected);
        assert!(f.delta().delta().is_zero());
    }

    use proptest::prelude::*;

    fn arb_generator() -> impl Strategy<Value = Generator> {
        prop_oneof![(0u32..5).prop_map(Generator::Phi), (0u32..5).prop_map(Generator::Psi)]
    }

    fn arb_form() -> impl Strategy<Value = FormalForm> {
        proptest::collection::vec((-3i64..=3, proptest::collection::vec(arb_generator(), 0..=4)), 1..4).prop_map(
            |terms| {
                let mut f = FormalForm::zero();
                for (c, gens) in terms {
                    f = f.add(&FormalForm::product(&gens).scale(c));
                }
                f
            },
        )
    }

    fn parity(f: &FormalForm) -> Option<usize> {
        let mut it = f.terms().map(|(m, _)| m.degree() % 2);
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    proptest! {
        #[test]
        fn delta_squares_to_zero(f in arb_form()) {
            prop_assert!(f.delta().delta().is_zero());
        }

        #[test]
        fn delta_is_graded_derivation(a in arb_form(), b in arb_form()) {
            // only homogeneous a has a well-defined sign
            if let Some(p) = parity(&a) {
                let lhs = a.mul(&b).delta();
                let sign = if p == 0 { 1 } else { -1 };
                let rhs = a.delta().mul(&b).add(&a.mul(&b.delta()).scale(sign));
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn product_is_associative(a in arb_form(), b in arb_form(), c in arb_form()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }
    }

    #[test]
    fn a1_negative_half() {
        let (rs, c) = setup("A1");
        let sys = build_system(&rs, &c, Half::NegativeHalf).unwrap();
        assert_eq!(sys.equations.len(), 1);
        assert!(sys.equations[0].terms.is_empty());
        let k = rs.root_index(&[-1]).unwrap();
        assert_eq!(sys.form(k).unwrap(), &FormalForm::psi(0));
    }

    #[test]
    fn a2_positive_half() {
        let (rs, c) = setup("A2");
        let sys = build_system(&rs, &c, Half::PositiveHalf).unwrap();
        assert_eq!(sys.equations.len(), 3);
        assert_eq!(sys.quadratic_count(), 1);
        let theta = sys.equations.last().unwrap();
        assert_eq!(theta.root.coords, vec![1, 1]);
        assert_eq!(theta.terms.len(), 1);
        let a1 = rs.root_index(&[1, 0]).unwrap();
        let a2 = rs.root_index(&[0, 1]).unwrap();
        // α1 precedes α2 in the root order only if sorted that way; the
        // stored term always lists the earlier slot first.
        let t = &theta.terms[0];
        let (b, g) = (rs.root_index(&t.beta.coords).unwrap(), rs.root_index(&t.gamma.coords).unwrap());
        assert!([a1, a2].contains(&b) && [a1, a2].contains(&g));
        assert_eq!(t.sign, c.n(b, g));
    }

    #[test]
    fn d4_highest_root_decompositions() {
        let (rs, c) = setup("D4");
        let sys = build_system(&rs, &c, Half::NegativeHalf).unwrap();
        let theta = rs.highest_root();
        let eq = sys.equations.iter().find(|e| e.root == theta.neg()).unwrap();
        // oracle: unordered pairs of positive roots summing to θ
        let pos = rs.positive_roots();
        let mut pairs = 0;
        for i in 0..pos.len() {
            for j in i + 1..pos.len() {
                let s: Vec<i64> = pos[i].coords.iter().zip(&pos[j].coords).map(|(a, b)| a + b).collect();
                if s == theta.coords {
                    pairs += 1;
                }
            }
        }
        assert_eq!(eq.terms.len(), pairs);
        assert!(eq.terms.iter().all(|t| t.sign.abs() == 1));
        for t in &eq.terms {
            assert_eq!(rs.height(&t.beta) + rs.height(&t.gamma), eq.height);
        }
    }

    #[test]
    fn heights_and_order() {
        let (rs, c) = setup("A4");
        for half in [Half::PositiveHalf, Half::NegativeHalf] {
            let sys = build_system(&rs, &c, half).unwrap();
            assert!(sys.equations.windows(2).all(|w| w[0].height <= w[1].height));
            for e in &sys.equations {
                if e.height == 1 {
                    assert!(e.terms.is_empty());
                }
            }
        }
    }

    #[test]
    fn certificates() {
        let (rs, c) = setup("D4");
        for half in [Half::PositiveHalf, Half::NegativeHalf] {
            let sys = build_system(&rs, &c, half).unwrap();
            for oracle in [
                &FlagOracle { rs: &rs } as &dyn H2Oracle,
                &CotangentOracle { rs: &rs },
                &SurfaceOracle::new(&rs),
            ] {
                let cert = certify_solvability(&sys, oracle).unwrap();
                assert!(cert.complete, "{} {half:?}: {:?}", oracle.name(), cert.failing);
                assert_eq!(cert.nontriviality_requirements().len(), 4);
            }
        }
    }

    struct Adversary<'a>(&'a RootSystem);

    impl H2Oracle for Adversary<'_> {
        fn name(&self) -> &str {
            "adversary"
        }

        fn h2(&self, root: &LatticeVector) -> Option<H2VanishVerdict> {
            Some(H2VanishVerdict {
                vanishes: *root != self.0.highest_root().neg(),
                citation: String::new(),
            })
        }
    }

    struct Partial;

    impl H2Oracle for Partial {
        fn name(&self) -> &str {
            "partial"
        }

        fn h2(&self, root: &LatticeVector) -> Option<H2VanishVerdict> {
            (root.coord_sum().abs() == 1).then(|| H2VanishVerdict {
                vanishes: true,
                citation: String::new(),
            })
        }
    }

    #[test]
    fn adversarial_and_partial_oracles() {
        let (rs, c) = setup("A3");
        let sys = build_system(&rs, &c, Half::NegativeHalf).unwrap();
        let cert = certify_solvability(&sys, &Adversary(&rs)).unwrap();
        assert!(!cert.complete);
        assert_eq!(cert.failing, vec![rs.highest_root().neg()]);
        assert!(matches!(certify_solvability(&sys, &Partial), Err(Error::IncompleteOracle(_))));
    }

    #[test]
    fn bianchi_clean() {
        for s in ["A2", "A3", "D4"] {
            let (rs, c) = setup(s);
            for half in [Half::PositiveHalf, Half::NegativeHalf] {
                let sys = build_system(&rs, &c, half).unwrap();
                let rep = check_bianchi(&sys, &c);
                assert!(rep.passed(), "{s} {half:?}: {:?}", rep.violations);
            }
        }
    }

    #[test]
    fn mutations_are_detected() {
        for s in ["A2", "D4"] {
            let (rs, c) = setup(s);
            let m = rs.roots().len();
            for half in [Half::PositiveHalf, Half::NegativeHalf] {
                let sys = build_system(&rs, &c, half).unwrap();
                for a in 0..m {
                    for b in 0..m {
                        if c.n(a, b) != 0 {
                            let bad = c.with_flipped_sign(a, b);
                            assert!(!check_bianchi(&sys, &bad).passed(), "{s} {half:?} flip ({a},{b}) undetected");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reordering_gives_equivalent_systems() {
        let (rs, c) = setup("D4");
        let half = Half::NegativeHalf;
        let canonical = build_system(&rs, &c, half).unwrap();
        let mut rev = RootOrder::canonical(&rs, half).roots().to_vec();
        rev.reverse();
        let reversed = build_system_with_order(&rs, &c, half, RootOrder::from_roots(rev)).unwrap();
        // Same forms after translating slots.
        for &k in canonical.order().roots() {
            let f = canonical.form(k).unwrap();
            let g = reversed.form(k).unwrap();
            let translate = |slot: u32| reversed.order().slot(canonical.order().root(slot)).unwrap();
            let mut moved = FormalForm::zero();
            for (m, coef) in f.terms() {
                let gens: Vec<Generator> = m
                    .generators()
                    .iter()
                    .map(|g| match *g {
                        Generator::Phi(s) => Generator::Phi(translate(s)),
                        Generator::Psi(s) => Generator::Psi(translate(s)),
                    })
                    .collect();
                moved = moved.add(&FormalForm::product(&gens).scale(coef));
            }
            assert_eq!(&moved, g);
        }
        let oracle = FlagOracle { rs: &rs };
        let a = certify_solvability(&canonical, &oracle).unwrap();
        let b = certify_solvability(&reversed, &oracle).unwrap();
        let key = |c: &SolvabilityCertificate| {
            let mut v: Vec<_> = c.entries.iter().map(|e| (e.root.coords.clone(), e.h2.vanishes, e.requires_nontrivial)).collect();
            v.sort();
            v
        };
        assert_eq!(key(&a), key(&b));
        assert_eq!(a.complete, b.complete);
    }

    #[test]
    fn labels() {
        assert_eq!(root_label(&LatticeVector::root([1, 1])), "α1+α2");
        assert_eq!(root_label(&LatticeVector::root([-1, -2, 0])), "-α1-2α2");
    }
}
