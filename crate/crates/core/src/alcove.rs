//! Affine walls `⟨α,H⟩ = nπ − φ_ε`, the fundamental alcove `P₀`, its faces,
//! active root systems `Σ̃_H`, and reduction of points into `P₀̄`.
//!
//! Points are `H = Σ x_i·π·H_i`, so `⟨α,H⟩ = π·Σ c_j x_j` for `α = Σ c_j α_j`
//! and every test below is exact rational arithmetic on `x`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, int, rank_of, solve, AngleUnit, Rational, RationalAngle, RootVector};
use crate::roots::RootSystem;
use crate::triad::GradedRootDatum;

/// Upper bound on reflections in [`reduce_to_alcove`].
pub const REDUCTION_GUARD: usize = 100_000;

/// `H = Σ x_i·π·H_i`, stored as the coefficients `x_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlcovePoint {
    coeffs: Vec<Rational>,
}

impl AlcovePoint {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }
    }

    pub fn origin(rank: usize) -> Self {
        Self { coeffs: vec![Rational::zero(); rank] }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of π in `⟨α,H⟩`.
    pub fn pairing(&self, alpha: &RootVector) -> Rational {
        alpha.pair_dual(&self.coeffs)
    }
}

impl fmt::Display for AlcovePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(fmt_rational).collect();
        write!(f, "({})·π", parts.join(","))
    }
}

/// `⟨α,H⟩ + φ` as an exact angle.
pub fn pairing_angle(d: &GradedRootDatum, alpha: &RootVector, h: &AlcovePoint, phi: &RationalAngle) -> RationalAngle {
    debug_assert_eq!(alpha.len(), d.rank());
    debug_assert_eq!(h.rank(), d.rank());
    RationalAngle::new(h.pairing(alpha) + phi.coeff())
}

/// The hyperplane `⟨α,H⟩ = nπ − φ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Wall {
    pub alpha: RootVector,
    pub phi: RationalAngle,
    pub n: i64,
}

impl Wall {
    /// The right-hand side `n − φ` in units of π.
    pub fn level(&self) -> Rational {
        int(self.n) - self.phi.coeff()
    }

    /// `H ↦ s_α(H) + 2(nπ − φ)/⟨α,α⟩·α`.
    pub fn reflect(&self, d: &GradedRootDatum, h: &AlcovePoint) -> AlcovePoint {
        let g = d.gram();
        let aa = g.inner(&self.alpha, &self.alpha).expect("wall root has datum rank");
        let t = (h.pairing(&self.alpha) - self.level()) * int(2) / aa;
        // α in dual-basis coordinates is Gα
        let ga = g.lower(&self.alpha);
        AlcovePoint::new(h.coeffs.iter().zip(&ga).map(|(x, a)| x - &t * a).collect())
    }
}

impl fmt::Display for Wall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},H> = {}·π", self.alpha, fmt_rational(&self.level()))
    }
}

/// `⟨normal,H⟩ < bound·π` with a primitive integer `normal`, plus the wall
/// it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub normal: RootVector,
    pub bound: Rational,
    pub wall: Wall,
}

impl Inequality {
    fn value(&self, x: &AlcovePoint) -> Rational {
        x.pairing(&self.normal)
    }

    pub fn satisfied_strict(&self, x: &AlcovePoint) -> bool {
        self.value(x) < self.bound
    }

    pub fn satisfied_closed(&self, x: &AlcovePoint) -> bool {
        self.value(x) <= self.bound
    }

    pub fn is_tight(&self, x: &AlcovePoint) -> bool {
        self.value(x) == self.bound
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nonpos = self.normal.coords().iter().all(|&c| c <= 0);
        let (v, rel, b) =
            if nonpos { (-&self.normal, ">", -&self.bound) } else { (self.normal.clone(), "<", self.bound.clone()) };
        let mut terms = String::new();
        for (i, &c) in v.coords().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if terms.is_empty() {
                ""
            } else {
                "+"
            };
            let k = c.abs();
            let coef = if k == 1 { String::new() } else { format!("{k}") };
            terms.push_str(&format!("{sign}{coef}x{}", i + 1));
        }
        write!(f, "{terms} {rel} {}", fmt_rational(&b))
    }
}

/// The fundamental alcove as a nonredundant facet list with its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alcove {
    facets: Vec<Inequality>,
    vertices: Vec<AlcovePoint>,
}

impl Alcove {
    pub fn facets(&self) -> &[Inequality] {
        &self.facets
    }

    pub fn vertices(&self) -> &[AlcovePoint] {
        &self.vertices
    }

    pub fn contains_closed(&self, x: &AlcovePoint) -> bool {
        self.facets.iter().all(|f| f.satisfied_closed(x))
    }

    pub fn contains_open(&self, x: &AlcovePoint) -> bool {
        self.facets.iter().all(|f| f.satisfied_strict(x))
    }

    /// Indices of facets tight at `x`.
    pub fn tight_at(&self, x: &AlcovePoint) -> Vec<usize> {
        (0..self.facets.len()).filter(|&i| self.facets[i].is_tight(x)).collect()
    }

    pub fn barycenter(&self) -> AlcovePoint {
        barycenter(self.vertices.iter())
    }

    pub fn is_simplex(&self) -> bool {
        self.facets.len() == self.vertices.first().map_or(0, |v| v.rank()) + 1
    }
}

fn barycenter<'a>(pts: impl Iterator<Item = &'a AlcovePoint>) -> AlcovePoint {
    let mut n = 0i64;
    let mut acc: Vec<Rational> = Vec::new();
    for p in pts {
        if acc.is_empty() {
            acc = vec![Rational::zero(); p.rank()];
        }
        for (a, x) in acc.iter_mut().zip(p.coeffs()) {
            *a += x;
        }
        n += 1;
    }
    AlcovePoint::new(acc.into_iter().map(|a| a / int(n.max(1))).collect())
}

/// Slab `P_ε` for one `α ∈ Σ_ε⁺`, as `(lower, n_lower, upper, n_upper)`
/// in units of π.
fn slab(phi: &Rational) -> (Rational, i64, Rational, i64) {
    if phi.is_negative() {
        (-Rational::one() - phi, -1, -phi, 0)
    } else {
        (-phi, 0, Rational::one() - phi, 1)
    }
}

/// All slab halfspaces, keeping the tightest bound per primitive direction.
fn halfspaces(d: &GradedRootDatum) -> Vec<Inequality> {
    let mut best: BTreeMap<RootVector, Inequality> = BTreeMap::new();
    let mut offer = |normal: RootVector, bound: Rational, wall: Wall| {
        let (k, p) = normal.primitive().expect("roots are nonzero");
        let p = if k < 0 { -&p } else { p };
        let bound = bound / int(k.abs());
        match best.get(&p) {
            Some(old) if old.bound <= bound => {}
            _ => {
                best.insert(p.clone(), Inequality { normal: p, bound, wall });
            }
        }
    };
    for s in d.sectors() {
        let (lo, n_lo, hi, n_hi) = slab(s.phi().coeff());
        for (a, _) in s.positive() {
            offer(a.clone(), hi.clone(), Wall { alpha: a.clone(), phi: s.phi().clone(), n: n_hi });
            offer(-a, -lo.clone(), Wall { alpha: a.clone(), phi: s.phi().clone(), n: n_lo });
        }
    }
    best.into_values().collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn affine_rank(pts: &[&AlcovePoint]) -> usize {
    if pts.is_empty() {
        return 0;
    }
    let base = pts[0];
    let rows: Vec<Vec<Rational>> =
        pts[1..].iter().map(|p| p.coeffs().iter().zip(base.coeffs()).map(|(a, b)| a - b).collect()).collect();
    rank_of(&rows)
}

/// `P₀ = ⋂_ε P_ε` reduced to its facets.
pub fn fundamental_alcove(d: &GradedRootDatum) -> Result<Alcove> {
    let r = d.rank();
    if d.sigma_tilde().span_rank() != r {
        return Err(Error::EmptyAlcove);
    }
    let hs = halfspaces(d);
    let mut vertices: Vec<AlcovePoint> = Vec::new();
    for idx in subsets(hs.len(), r) {
        let a: Vec<Vec<Rational>> = idx.iter().map(|&i| hs[i].normal.to_rationals()).collect();
        let b: Vec<Rational> = idx.iter().map(|&i| hs[i].bound.clone()).collect();
        let Some(x) = solve(&a, &b) else { continue };
        let x = AlcovePoint::new(x);
        if hs.iter().all(|h| h.satisfied_closed(&x)) && !vertices.contains(&x) {
            vertices.push(x);
        }
    }
    vertices.sort();
    let refs: Vec<&AlcovePoint> = vertices.iter().collect();
    if vertices.len() <= r || affine_rank(&refs) != r {
        return Err(Error::EmptyAlcove);
    }
    let mut facets: Vec<Inequality> = hs
        .into_iter()
        .filter(|h| {
            let on: Vec<&AlcovePoint> = vertices.iter().filter(|v| h.is_tight(v)).collect();
            on.len() >= r && affine_rank(&on) == r - 1
        })
        .collect();
    facets.sort_by(|a, b| a.bound.is_zero().cmp(&b.bound.is_zero()).then_with(|| a.normal.cmp(&b.normal)));
    let alcove = Alcove { facets, vertices };
    if !alcove.contains_open(&alcove.barycenter()) {
        return Err(Error::EmptyAlcove);
    }
    Ok(alcove)
}

/// `Σ_{ε,H}` for each sector and their union `Σ̃_H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActiveRoots {
    pub per_sector: Vec<(RationalAngle, Vec<RootVector>)>,
    pub union: RootSystem,
}

impl ActiveRoots {
    /// Active positive roots of the sector with phase `phi`.
    pub fn positive_in(&self, phi: &RationalAngle) -> Vec<RootVector> {
        self.per_sector
            .iter()
            .filter(|(p, _)| p == phi)
            .flat_map(|(_, v)| v.iter().filter(|a| a.is_positive()).cloned())
            .collect()
    }
}

pub fn is_active(d: &GradedRootDatum, alpha: &RootVector, h: &AlcovePoint, phi: &RationalAngle) -> bool {
    pairing_angle(d, alpha, h, phi).is_multiple_of(AngleUnit::Pi)
}

pub fn active_roots(d: &GradedRootDatum, h: &AlcovePoint) -> ActiveRoots {
    let mut per_sector = Vec::new();
    let mut all = Vec::new();
    for s in d.sectors() {
        let act: Vec<RootVector> = s.roots().keys().filter(|a| is_active(d, a, h, s.phi())).cloned().collect();
        all.extend(act.iter().cloned());
        per_sector.push((s.phi().clone(), act));
    }
    let union = RootSystem::from_roots(d.gram().clone(), all).expect("sector roots have datum rank");
    ActiveRoots { per_sector, union }
}

/// `P₀^Δ`: the relatively open face where exactly the facets outside
/// `delta` are tight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub delta: Vec<usize>,
    pub tight: Vec<usize>,
    pub dimension: usize,
    pub vertices: Vec<usize>,
    pub representative: AlcovePoint,
    pub active: ActiveRoots,
}

impl Face {
    /// `|Δ| = 1` on a simplex: an alcove vertex.
    pub fn is_vertex(&self) -> bool {
        self.dimension == 0
    }
}

/// All faces of the closed alcove, sorted by dimension then `Δ`.
pub fn faces(d: &GradedRootDatum) -> Result<Vec<Face>> {
    let alc = fundamental_alcove(d)?;
    Ok(faces_of(d, &alc))
}

pub fn faces_of(d: &GradedRootDatum, alc: &Alcove) -> Vec<Face> {
    let k = alc.facets.len();
    let tight_sets: Vec<Vec<usize>> = alc.vertices.iter().map(|v| alc.tight_at(v)).collect();
    let mut out = Vec::new();
    for size in 0..=k {
        for t in subsets(k, size) {
            let vs: Vec<usize> =
                (0..alc.vertices.len()).filter(|&i| t.iter().all(|f| tight_sets[i].contains(f))).collect();
            if vs.is_empty() {
                continue;
            }
            let closure: Vec<usize> = (0..k).filter(|f| vs.iter().all(|&i| tight_sets[i].contains(f))).collect();
            if closure != t {
                continue;
            }
            let pts: Vec<&AlcovePoint> = vs.iter().map(|&i| &alc.vertices[i]).collect();
            let representative = barycenter(pts.iter().copied());
            let dimension = affine_rank(&pts);
            let delta: Vec<usize> = (0..k).filter(|f| !t.contains(f)).collect();
            let active = active_roots(d, &representative);
            out.push(Face { delta, tight: t, dimension, vertices: vs, representative, active });
        }
    }
    out.sort_by(|a, b| a.dimension.cmp(&b.dimension).then_with(|| a.delta.cmp(&b.delta)));
    out
}

/// Moves `h` into `P₀̄` by reflecting in the first violated facet wall
/// until none is violated.
pub fn reduce_to_alcove(d: &GradedRootDatum, h: &AlcovePoint) -> Result<(AlcovePoint, Vec<Wall>)> {
    let alc = fundamental_alcove(d)?;
    reduce_in(d, &alc, h)
}

pub fn reduce_in(d: &GradedRootDatum, alc: &Alcove, h: &AlcovePoint) -> Result<(AlcovePoint, Vec<Wall>)> {
    if h.rank() != d.rank() {
        return Err(Error::DimensionMismatch { expected: d.rank(), found: h.rank() });
    }
    let mut x = h.clone();
    let mut word = Vec::new();
    while let Some(f) = alc.facets.iter().find(|f| !f.satisfied_closed(&x)) {
        if word.len() >= REDUCTION_GUARD {
            return Err(Error::NonTermination(REDUCTION_GUARD));
        }
        x = f.wall.reflect(d, &x);
        word.push(f.wall.clone());
    }
    Ok((x, word))
}
