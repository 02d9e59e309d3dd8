//! Root systems in simple-root coordinates, their finite Weyl groups, and
//! identification of irreducible components by Cartan matrix.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, rank_of, GramMatrix, Rational, RootVector};

/// Default element cap for Weyl group closure.
pub const WEYL_BUDGET: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    BC,
    G,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::BC => "BC",
            Family::G => "G",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CartanLabel {
    pub family: Family,
    pub rank: usize,
}

impl CartanLabel {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::G => rank == 2,
            Family::D => rank >= 2,
            _ => rank >= 1,
        };
        if ok {
            Ok(Self { family, rank })
        } else {
            Err(Error::UnsupportedLabel(format!("{}{}", family.as_str(), rank)))
        }
    }

    /// Standard Gram matrix of the simple roots.
    ///
    /// `B`/`BC` use `α_i = e_i − e_{i+1}`, `α_r = e_r`; `C` uses
    /// `α_r = 2e_r`; `D` uses `α_r = e_{r−1} + e_r`; `G` has short `α₁`.
    pub fn gram(&self) -> GramMatrix {
        let r = self.rank;
        let mut g = vec![vec![Rational::zero(); r]; r];
        for i in 0..r {
            g[i][i] = int(2);
            if i + 1 < r {
                g[i][i + 1] = int(-1);
                g[i + 1][i] = int(-1);
            }
        }
        match self.family {
            Family::A => {}
            Family::B | Family::BC => g[r - 1][r - 1] = int(1),
            Family::C => {
                g[r - 1][r - 1] = int(4);
                if r >= 2 {
                    g[r - 2][r - 1] = int(-2);
                    g[r - 1][r - 2] = int(-2);
                }
            }
            Family::D => {
                if r >= 2 {
                    g[r - 2][r - 1] = Rational::zero();
                    g[r - 1][r - 2] = Rational::zero();
                }
                if r >= 3 {
                    g[r - 3][r - 1] = int(-1);
                    g[r - 1][r - 3] = int(-1);
                }
            }
            Family::G => {
                g[0][1] = int(-3);
                g[1][0] = int(-3);
                g[1][1] = int(6);
            }
        }
        GramMatrix::new(g).expect("standard Gram matrices are positive definite")
    }

    /// `|W|` in closed form.
    pub fn weyl_order(&self) -> u128 {
        let r = self.rank as u128;
        let fact = |n: u128| (1..=n).product::<u128>();
        match self.family {
            Family::A => fact(r + 1),
            Family::B | Family::C | Family::BC => (1u128 << r) * fact(r),
            Family::D => (1u128 << (r - 1)) * fact(r),
            Family::G => 12,
        }
    }

    /// Whether `−id` lies in the Weyl group of this irreducible type.
    pub fn has_minus_identity(&self) -> bool {
        match self.family {
            Family::A => self.rank == 1,
            Family::D => self.rank.is_multiple_of(2),
            _ => true,
        }
    }

    /// Subscripted form, e.g. `BC₃`.
    pub fn pretty(&self) -> String {
        const SUB: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
        let digits: String = self.rank.to_string().chars().map(|c| SUB[c.to_digit(10).unwrap() as usize]).collect();
        format!("{}{}", self.family.as_str(), digits)
    }
}

impl fmt::Display for CartanLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.as_str(), self.rank)
    }
}

impl FromStr for CartanLabel {
    type Err = Error;

    /// Accepts `A3`, `BC(2)`, `g2`, `B_4`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnsupportedLabel(s.to_string());
        let t: String = s.chars().filter(|c| !matches!(c, '(' | ')' | '_' | ' ')).collect();
        let t = t.to_ascii_uppercase();
        let split = t.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
        let (fam, num) = t.split_at(split);
        let family = match fam {
            "A" => Family::A,
            "B" => Family::B,
            "C" => Family::C,
            "D" => Family::D,
            "BC" => Family::BC,
            "G" => Family::G,
            _ => return Err(bad()),
        };
        let rank: usize = num.parse().map_err(|_| bad())?;
        CartanLabel::new(family, rank).map_err(|_| bad())
    }
}

/// ASCII type string such as `B1+BC2`; the empty system is `0`.
pub fn type_string(labels: &[CartanLabel]) -> String {
    if labels.is_empty() {
        return "0".into();
    }
    labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("+")
}

/// Subscripted type string such as `B₁⊕BC₂`; the empty system is `∅`.
pub fn type_string_pretty(labels: &[CartanLabel]) -> String {
    if labels.is_empty() {
        return "∅".into();
    }
    labels.iter().map(|l| l.pretty()).collect::<Vec<_>>().join("⊕")
}

/// A finite set of roots inside `𝔞` with its metric.
///
/// Positive roots are the lexicographically positive ones; simple roots are
/// the positive roots that are not a sum of two positive roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    gram: GramMatrix,
    roots: Vec<RootVector>,
    positive_roots: Vec<RootVector>,
    simple_roots: Vec<RootVector>,
}

impl RootSystem {
    /// Wraps an arbitrary finite set of nonzero vectors. No axioms are
    /// checked; see [`verify_axioms`].
    pub fn from_roots(gram: GramMatrix, roots: impl IntoIterator<Item = RootVector>) -> Result<Self> {
        let r = gram.rank();
        let set: BTreeSet<RootVector> = roots.into_iter().collect();
        for v in &set {
            if v.len() != r {
                return Err(Error::DimensionMismatch { expected: r, found: v.len() });
            }
        }
        let roots: Vec<RootVector> = set.into_iter().filter(|v| !v.is_zero()).collect();
        let positive_roots: Vec<RootVector> = roots.iter().filter(|v| v.is_positive()).cloned().collect();
        let pos_set: BTreeSet<&RootVector> = positive_roots.iter().collect();
        let mut decomposable = BTreeSet::new();
        for (i, a) in positive_roots.iter().enumerate() {
            for b in &positive_roots[i..] {
                let s = a + b;
                if pos_set.contains(&s) {
                    decomposable.insert(s);
                }
            }
        }
        let simple_roots = positive_roots.iter().filter(|v| !decomposable.contains(*v)).cloned().collect();
        Ok(Self { gram, roots, positive_roots, simple_roots })
    }

    pub fn empty(gram: GramMatrix) -> Self {
        Self::from_roots(gram, []).expect("empty set has no dimension errors")
    }

    /// Dimension of the ambient space.
    pub fn rank(&self) -> usize {
        self.gram.rank()
    }

    /// Dimension of the span of the roots.
    pub fn span_rank(&self) -> usize {
        let rows: Vec<Vec<Rational>> = self.roots.iter().map(|v| v.to_rationals()).collect();
        rank_of(&rows)
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    pub fn roots(&self) -> &[RootVector] {
        &self.roots
    }

    pub fn positive_roots(&self) -> &[RootVector] {
        &self.positive_roots
    }

    pub fn simple_roots(&self) -> &[RootVector] {
        &self.simple_roots
    }

    pub fn contains(&self, v: &RootVector) -> bool {
        self.roots.binary_search(v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Whether some root has its double in the set.
    pub fn is_reduced(&self) -> bool {
        !self.roots.iter().any(|a| self.contains(&a.scale(2)))
    }

    fn ip(&self, u: &RootVector, v: &RootVector) -> Rational {
        self.gram.inner(u, v).expect("dimensions checked at construction")
    }

    /// `2⟨β,α⟩/⟨α,α⟩`.
    pub fn cartan_integer(&self, beta: &RootVector, alpha: &RootVector) -> Rational {
        self.ip(beta, alpha) * int(2) / self.ip(alpha, alpha)
    }

    /// `s_α(β)` if it has integer coordinates.
    pub fn reflect(&self, alpha: &RootVector, beta: &RootVector) -> Option<RootVector> {
        let c = self.cartan_integer(beta, alpha);
        if !c.is_integer() {
            return None;
        }
        let k = c.to_integer().to_i64()?;
        Some(beta - &alpha.scale(k))
    }
}

/// Builds the root system of a Cartan label by reflection closure of its
/// simple roots (doubling the short roots for `BC`).
pub fn build_root_system(label: CartanLabel) -> Result<RootSystem> {
    let label = CartanLabel::new(label.family, label.rank)?;
    let gram = label.gram();
    let r = label.rank;
    let simple: Vec<RootVector> = (0..r).map(|i| RootVector::unit(r, i)).collect();
    let probe = RootSystem::empty(gram.clone());
    let mut seen: BTreeSet<RootVector> = simple.iter().cloned().collect();
    let mut queue: VecDeque<RootVector> = simple.iter().cloned().collect();
    while let Some(b) = queue.pop_front() {
        for a in &simple {
            let s = probe.reflect(a, &b).ok_or(Error::NotCrystallographic)?;
            if seen.insert(s.clone()) {
                queue.push_back(s);
            }
        }
    }
    if label.family == Family::BC {
        let short = seen.iter().map(|v| gram.inner(v, v).unwrap()).min().unwrap();
        let doubles: Vec<RootVector> =
            seen.iter().filter(|v| gram.inner(v, v).unwrap() == short).map(|v| v.scale(2)).collect();
        seen.extend(doubles);
    }
    RootSystem::from_roots(gram, seen)
}

/// Root system axioms: `R = −R`, `s_α R = R` with integral Cartan numbers,
/// and proportional roots differ by `±1/2, ±1` or `±2`.
pub fn verify_axioms(r: &RootSystem) -> bool {
    let roots = r.roots();
    for a in roots {
        if a.is_zero() || !r.contains(&-a) {
            return false;
        }
        for b in roots {
            match r.reflect(a, b) {
                Some(s) if r.contains(&s) => {}
                _ => return false,
            }
            if b != a && b != &-a && b != &a.scale(2) && a != &b.scale(2) && b != &a.scale(-2) && a != &b.scale(-2) {
                let (aa, bb, ab) = (r.ip(a, a), r.ip(b, b), r.ip(a, b));
                if &ab * &ab == aa * bb {
                    return false;
                }
            }
        }
    }
    true
}

/// Finite reflection group as an explicit set of integer matrices acting on
/// simple-root coordinates (row-major, `rank × rank`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylGroup {
    rank: usize,
    generators: Vec<Vec<i64>>,
    elements: BTreeSet<Vec<i64>>,
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn elements(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.elements.iter()
    }

    pub fn contains(&self, m: &[i64]) -> bool {
        self.elements.contains(m)
    }

    /// `w · v` for an element `w`.
    pub fn apply(&self, w: &[i64], v: &RootVector) -> RootVector {
        apply(self.rank, w, v)
    }
}

fn apply(n: usize, w: &[i64], v: &RootVector) -> RootVector {
    RootVector::new((0..n).map(|i| (0..n).map(|j| w[i * n + j] * v.coords()[j]).sum()).collect())
}

fn compose(n: usize, a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x != 0 {
                for j in 0..n {
                    out[i * n + j] += x * b[k * n + j];
                }
            }
        }
    }
    out
}

fn identity_matrix(n: usize) -> Vec<i64> {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

fn reflection_matrix(r: &RootSystem, alpha: &RootVector) -> Result<Vec<i64>> {
    let n = r.rank();
    let mut m = vec![0; n * n];
    for j in 0..n {
        let col = r.reflect(alpha, &RootVector::unit(n, j)).ok_or(Error::NotCrystallographic)?;
        for i in 0..n {
            m[i * n + j] = col.coords()[i];
        }
    }
    Ok(m)
}

pub fn weyl_group(r: &RootSystem) -> Result<WeylGroup> {
    weyl_group_with_budget(r, WEYL_BUDGET)
}

/// Closure of the simple reflections under composition.
pub fn weyl_group_with_budget(r: &RootSystem, budget: usize) -> Result<WeylGroup> {
    let n = r.rank();
    let generators = r.simple_roots().iter().map(|a| reflection_matrix(r, a)).collect::<Result<Vec<_>>>()?;
    let id = identity_matrix(n);
    let mut elements = BTreeSet::new();
    elements.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(w) = queue.pop_front() {
        for g in &generators {
            let x = compose(n, g, &w);
            if !elements.contains(&x) {
                if elements.len() >= budget {
                    return Err(Error::ClosureBudgetExceeded(budget));
                }
                elements.insert(x.clone());
                queue.push_back(x);
            }
        }
    }
    Ok(WeylGroup { rank: n, generators, elements })
}

pub fn contains_minus_identity(w: &WeylGroup) -> bool {
    let mut m = identity_matrix(w.rank);
    m.iter_mut().for_each(|x| *x = -*x);
    w.contains(&m)
}

/// Tits prediction for `−id_𝔞 ∈ W`: the roots span `𝔞` and no component
/// is `A_n (n ≥ 2)` or `D_odd`.
pub fn tits_minus_identity(labels: &[CartanLabel], ambient_rank: usize) -> bool {
    labels.iter().map(|l| l.rank).sum::<usize>() == ambient_rank && labels.iter().all(|l| l.has_minus_identity())
}

pub fn decompose_and_classify(r: &RootSystem) -> Result<Vec<CartanLabel>> {
    decompose_and_classify_in(r, r)
}

/// Irreducible components of `r`, sorted by family then rank. A reduced
/// rank-one component `{±α}` is named `B1` when `2α` lies in `ambient`
/// and `A1` otherwise.
pub fn decompose_and_classify_in(r: &RootSystem, ambient: &RootSystem) -> Result<Vec<CartanLabel>> {
    let mut labels = Vec::new();
    for comp in components(r) {
        labels.push(classify_component(r, &comp, ambient)?);
    }
    labels.sort();
    Ok(labels)
}

/// Connected components of the nonzero-inner-product graph on the roots.
pub fn components(r: &RootSystem) -> Vec<Vec<RootVector>> {
    let roots = r.roots();
    let mut comp_of: Vec<Option<usize>> = vec![None; roots.len()];
    let mut out = Vec::new();
    for start in 0..roots.len() {
        if comp_of[start].is_some() {
            continue;
        }
        let id = out.len();
        comp_of[start] = Some(id);
        let mut members = vec![start];
        let mut k = 0;
        while k < members.len() {
            let i = members[k];
            k += 1;
            for j in 0..roots.len() {
                if comp_of[j].is_none() && !r.ip(&roots[i], &roots[j]).is_zero() {
                    comp_of[j] = Some(id);
                    members.push(j);
                }
            }
        }
        members.sort();
        out.push(members.into_iter().map(|i| roots[i].clone()).collect());
    }
    out
}

fn classify_component(r: &RootSystem, comp: &[RootVector], ambient: &RootSystem) -> Result<CartanLabel> {
    let sub = RootSystem::from_roots(r.gram.clone(), comp.iter().cloned())?;
    let simple = sub.simple_roots();
    let k = simple.len();
    if !sub.is_reduced() {
        return CartanLabel::new(Family::BC, k);
    }
    if k == 1 {
        let fam = if ambient.contains(&simple[0].scale(2)) { Family::B } else { Family::A };
        return CartanLabel::new(fam, 1);
    }
    let cartan: Vec<Vec<Rational>> =
        simple.iter().map(|a| simple.iter().map(|b| sub.cartan_integer(a, b)).collect()).collect();
    for fam in [Family::A, Family::B, Family::C, Family::D, Family::G] {
        let Ok(label) = CartanLabel::new(fam, k) else { continue };
        if fam == Family::D && k < 4 {
            continue;
        }
        if fam == Family::C && k < 3 {
            continue;
        }
        let g = label.gram();
        let reference: Vec<Vec<Rational>> =
            (0..k).map(|i| (0..k).map(|j| g.entry(i, j) * int(2) / g.entry(j, j)).collect()).collect();
        if permutation_match(&cartan, &reference) {
            return Ok(label);
        }
    }
    Err(Error::UnrecognizedType { rank: k })
}

/// Whether `a = P·b·Pᵀ` for some permutation `P` (backtracking).
fn permutation_match(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    fn go(a: &[Vec<Rational>], b: &[Vec<Rational>], perm: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = perm.len();
        if i == a.len() {
            return true;
        }
        for c in 0..a.len() {
            if used[c] {
                continue;
            }
            let ok = (0..i).all(|j| a[i][j] == b[c][perm[j]] && a[j][i] == b[perm[j]][c]);
            if ok && a[i][i] == b[c][c] {
                used[c] = true;
                perm.push(c);
                if go(a, b, perm, used) {
                    return true;
                }
                perm.pop();
                used[c] = false;
            }
        }
        false
    }
    a.len() == b.len() && go(a, b, &mut Vec::new(), &mut vec![false; a.len()])
}
