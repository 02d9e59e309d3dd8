//! Orbit geometry at a point `H` of the alcove: the multiset `E_H`,
//! shape-operator spectra, mean curvature, the austere / totally geodesic /
//! arid* / weakly reflective* flags, and the minimal-orbit solver.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::alcove::{active_roots, fundamental_alcove, pairing_angle, ActiveRoots, Alcove, AlcovePoint};
use crate::error::{Error, Result};
use crate::exact::{int, rat, solve, AngleUnit, Rational, RationalAngle, RootVector};
use crate::interval::{precision_ladder, RealContext, RealInterval, DEFAULT_PRECISION, MAX_PRECISION};
use crate::roots::{contains_minus_identity, decompose_and_classify_in, tits_minus_identity, weyl_group, CartanLabel};
use crate::triad::GradedRootDatum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TriState {
    Yes,
    No,
    Indeterminate,
}

impl TriState {
    pub fn as_str(self) -> &'static str {
        match self {
            TriState::Yes => "yes",
            TriState::No => "no",
            TriState::Indeterminate => "indet",
        }
    }
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One element `−cot(θ)·α` of `E_H` with multiplicity; `θ ∈ (0, 1)·π`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CotTerm {
    pub alpha: RootVector,
    pub phi: RationalAngle,
    pub theta: RationalAngle,
    pub mult: u32,
}

/// `E_H`: one term per `(ε, α ∈ Σ_ε⁺)` with `⟨α,H⟩ + φ_ε ∉ πZ`.
pub fn cot_terms(d: &GradedRootDatum, h: &AlcovePoint) -> Vec<CotTerm> {
    let mut out = Vec::new();
    for s in d.sectors() {
        for (a, m) in s.positive() {
            let t = pairing_angle(d, a, h, s.phi());
            if t.is_multiple_of(AngleUnit::Pi) {
                continue;
            }
            out.push(CotTerm { alpha: a.clone(), phi: s.phi().clone(), theta: t.normalize_mod_pi(), mult: m });
        }
    }
    out
}

/// Multiplicity of the roots active at `H` (counted over `Σ_ε⁺`).
pub fn active_multiplicity(d: &GradedRootDatum, h: &AlcovePoint) -> u64 {
    let mut n = 0u64;
    for s in d.sectors() {
        for (a, m) in s.positive() {
            if pairing_angle(d, a, h, s.phi()).is_multiple_of(AngleUnit::Pi) {
                n += u64::from(m);
            }
        }
    }
    n
}

pub fn is_totally_geodesic(d: &GradedRootDatum, h: &AlcovePoint) -> bool {
    d.sectors()
        .iter()
        .all(|s| s.positive().all(|(a, _)| pairing_angle(d, a, h, s.phi()).is_multiple_of(AngleUnit::HalfPi)))
}

/// One eigenvalue family `−⟨α,ξ⟩·cot θ` of `A^ξ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumTerm {
    pub alpha: RootVector,
    pub theta: RationalAngle,
    pub mult: u32,
    /// `⟨α,ξ⟩`.
    pub pairing: Rational,
    pub eigenvalue: RealInterval,
}

/// Spectrum of `A^ξ`: `zero_mult` zeros plus one family per non-active
/// graded root. Active multiplicity is reported separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumReport {
    pub zero_mult: u32,
    pub active_mult: u64,
    pub terms: Vec<SpectrumTerm>,
}

impl SpectrumReport {
    /// `zero_mult + Σ m` over non-active roots.
    pub fn eigenvalue_count(&self) -> u64 {
        u64::from(self.zero_mult) + self.terms.iter().map(|t| u64::from(t.mult)).sum::<u64>()
    }

    /// Eigenvalue count plus the active multiplicity; independent of `H`.
    pub fn total_multiplicity(&self) -> u64 {
        self.eigenvalue_count() + self.active_mult
    }
}

/// `ξ = Σ y_i H_i` is given by its dual-basis coordinates `y`.
pub fn shape_spectrum(
    d: &GradedRootDatum,
    h: &AlcovePoint,
    xi: &[Rational],
    precision_bits: u32,
) -> Result<SpectrumReport> {
    if xi.len() != d.rank() {
        return Err(Error::DimensionMismatch { expected: d.rank(), found: xi.len() });
    }
    let ctx = RealContext::new(precision_bits);
    let mut terms = Vec::new();
    for t in cot_terms(d, h) {
        let pairing = t.alpha.pair_dual(xi);
        let eigenvalue = ctx.cot_angle(&t.theta)?.mul_rational(&-&pairing);
        terms.push(SpectrumTerm { alpha: t.alpha, theta: t.theta, mult: t.mult, pairing, eigenvalue });
    }
    Ok(SpectrumReport { zero_mult: d.zero_mult(), active_mult: active_multiplicity(d, h), terms })
}

/// `m_H = −Σ m(α,ε)·cot θ·α` after exact cancellation of `(α, θ)` against
/// `(α, π − θ)` and removal of `cot(π/2)` terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeanCurvature {
    /// Net weights `w`: `m_H = −Σ w·cot(θ)·α` with `θ ∈ (0, 1/2)·π`.
    pub formal: Vec<(RootVector, RationalAngle, i64)>,
    /// Simple-root-basis components of `m_H`.
    pub components: Vec<RealInterval>,
    pub norm: RealInterval,
}

impl MeanCurvature {
    /// The exact cancellation left nothing.
    pub fn is_exactly_zero(&self) -> bool {
        self.formal.is_empty()
    }
}

fn formal_mean_curvature(d: &GradedRootDatum, h: &AlcovePoint) -> Vec<(RootVector, RationalAngle, i64)> {
    let half = rat(1, 2);
    let mut acc: BTreeMap<(RootVector, RationalAngle), i64> = BTreeMap::new();
    for t in cot_terms(d, h) {
        let c = t.theta.coeff();
        if c == &half {
            continue;
        }
        let (theta, w) = if c < &half {
            (t.theta.clone(), i64::from(t.mult))
        } else {
            (RationalAngle::new(Rational::one() - c), -i64::from(t.mult))
        };
        *acc.entry((t.alpha, theta)).or_insert(0) += w;
    }
    acc.into_iter().filter(|(_, w)| *w != 0).map(|((a, t), w)| (a, t, w)).collect()
}

pub fn mean_curvature(d: &GradedRootDatum, h: &AlcovePoint) -> Result<MeanCurvature> {
    mean_curvature_at(d, h, &RealContext::new(DEFAULT_PRECISION))
}

pub fn mean_curvature_at(d: &GradedRootDatum, h: &AlcovePoint, ctx: &RealContext) -> Result<MeanCurvature> {
    let r = d.rank();
    let formal = formal_mean_curvature(d, h);
    let mut comps = vec![ctx.integer(0); r];
    for (a, theta, w) in &formal {
        let k = ctx.cot_angle(theta)?.mul_int(-*w);
        for (j, &c) in a.coords().iter().enumerate() {
            if c != 0 {
                comps[j] = comps[j].add(&k.mul_int(c));
            }
        }
    }
    let norm = gram_norm(d, &comps, ctx)?;
    Ok(MeanCurvature { formal, components: comps, norm })
}

fn gram_norm(d: &GradedRootDatum, v: &[RealInterval], ctx: &RealContext) -> Result<RealInterval> {
    let g = d.gram();
    let mut sq = ctx.integer(0);
    for i in 0..v.len() {
        for j in 0..v.len() {
            let gij = g.entry(i, j);
            if gij.is_zero() {
                continue;
            }
            let t = if i == j { v[i].square() } else { v[i].mul(&v[j]) };
            sq = sq.add(&t.mul_rational(gij));
        }
    }
    sq.sqrt()
}

/// Multiset symmetry of `E_H` under negation, line by line.
pub fn is_austere(d: &GradedRootDatum, h: &AlcovePoint) -> TriState {
    let half = rat(1, 2);
    // line -> (c, θ) -> multiplicity, nonzero values only
    let mut lines: BTreeMap<RootVector, BTreeMap<(i64, RationalAngle), u64>> = BTreeMap::new();
    for t in cot_terms(d, h) {
        if t.theta.coeff() == &half {
            continue;
        }
        let (c, p) = t.alpha.primitive().expect("roots are nonzero");
        *lines.entry(p).or_default().entry((c, t.theta)).or_insert(0) += u64::from(t.mult);
    }
    let mirror = |th: &RationalAngle| RationalAngle::new(Rational::one() - th.coeff());
    let mut undecided = Vec::new();
    for (line, terms) in &lines {
        let symmetric = terms.iter().all(|((c, th), m)| terms.get(&(*c, mirror(th))).copied().unwrap_or(0) == *m);
        if !symmetric {
            undecided.push(line.clone());
        }
    }
    if undecided.is_empty() {
        return TriState::Yes;
    }
    // Values with equal c are equal iff θ agrees, so the only unknown
    // coincidences are between different c on one line.
    for line in &undecided {
        let terms = &lines[line];
        let mut keys: Vec<(i64, RationalAngle)> = Vec::new();
        for (c, th) in terms.keys() {
            for k in [(*c, th.clone()), (*c, mirror(th))] {
                if !keys.contains(&k) {
                    keys.push(k);
                }
            }
        }
        for i in 0..keys.len() {
            for j in i + 1..keys.len() {
                if keys[i].0 != keys[j].0 && !certified_distinct(&keys[i], &keys[j]) {
                    return TriState::Indeterminate;
                }
            }
        }
    }
    TriState::No
}

fn certified_distinct(a: &(i64, RationalAngle), b: &(i64, RationalAngle)) -> bool {
    for p in precision_ladder() {
        let ctx = RealContext::new(p);
        let (Ok(x), Ok(y)) = (ctx.cot_angle(&a.1), ctx.cot_angle(&b.1)) else { return false };
        if x.mul_int(a.0).disjoint(&y.mul_int(b.0)) {
            return true;
        }
    }
    false
}

/// `(arid*, weakly reflective*)`: `Span(Σ̃_H) = 𝔞`, and additionally
/// `−id ∈ W(Σ̃_H)`. The generated group is checked against the Tits table.
pub fn symmetry_flags(d: &GradedRootDatum, h: &AlcovePoint) -> Result<(bool, bool)> {
    let act = active_roots(d, h);
    let labels = decompose_and_classify_in(&act.union, d.sigma_tilde())?;
    flags_from(d, &act, &labels)
}

fn flags_from(d: &GradedRootDatum, act: &ActiveRoots, labels: &[CartanLabel]) -> Result<(bool, bool)> {
    let r = d.rank();
    let arid = act.union.span_rank() == r;
    let generated = contains_minus_identity(&weyl_group(&act.union)?);
    let predicted = tits_minus_identity(labels, r);
    if generated != predicted {
        return Err(Error::InternalInconsistency(format!(
            "-id in generated Weyl group: {generated}, Tits prediction: {predicted}"
        )));
    }
    Ok((arid, arid && generated))
}

/// Full classification record at one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub point: AlcovePoint,
    pub active: ActiveRoots,
    pub sigma_type: Vec<CartanLabel>,
    pub terms: Vec<CotTerm>,
    pub minimal: TriState,
    pub austere: TriState,
    pub totally_geodesic: bool,
    pub arid_sufficient: bool,
    pub weakly_reflective_sufficient: bool,
    pub mean_curvature: MeanCurvature,
    pub precision_bits: u32,
}

impl OrbitReport {
    /// TG ⟹ austere ⟹ `0 ∈ ‖m_H‖`, and WR* ⟹ arid*.
    pub fn implications_hold(&self) -> bool {
        (!self.totally_geodesic || self.austere == TriState::Yes)
            && (self.austere != TriState::Yes || self.mean_curvature.norm.contains_zero())
            && (!self.weakly_reflective_sufficient || self.arid_sufficient)
            && (self.austere != TriState::Yes || self.minimal == TriState::Yes)
    }
}

pub fn analyze(d: &GradedRootDatum, h: &AlcovePoint) -> Result<OrbitReport> {
    if h.rank() != d.rank() {
        return Err(Error::DimensionMismatch { expected: d.rank(), found: h.rank() });
    }
    let act = active_roots(d, h);
    let sigma_type = decompose_and_classify_in(&act.union, d.sigma_tilde())?;
    let (arid, wr) = flags_from(d, &act, &sigma_type)?;
    let austere = is_austere(d, h);
    let totally_geodesic = is_totally_geodesic(d, h);
    let mut precision_bits = DEFAULT_PRECISION;
    let mut mc = mean_curvature_at(d, h, &RealContext::new(precision_bits))?;
    while mc.norm.contains_zero() && !mc.is_exactly_zero() && precision_bits < MAX_PRECISION {
        precision_bits *= 2;
        mc = mean_curvature_at(d, h, &RealContext::new(precision_bits))?;
    }
    let minimal = if austere == TriState::Yes || arid || mc.is_exactly_zero() {
        TriState::Yes
    } else if !mc.norm.contains_zero() {
        TriState::No
    } else {
        TriState::Indeterminate
    };
    Ok(OrbitReport {
        point: h.clone(),
        active: act,
        sigma_type,
        terms: cot_terms(d, h),
        minimal,
        austere,
        totally_geodesic,
        arid_sufficient: arid,
        weakly_reflective_sufficient: wr,
        mean_curvature: mc,
        precision_bits,
    })
}

/// Points of `P₀̄ ∩ (1/N)Zʳ` in lexicographic order.
pub fn grid_points(d: &GradedRootDatum, denominator: u32) -> Result<Vec<AlcovePoint>> {
    let alc = fundamental_alcove(d)?;
    Ok(grid_points_in(&alc, d.rank(), denominator))
}

pub fn grid_points_in(alc: &Alcove, rank: usize, denominator: u32) -> Vec<AlcovePoint> {
    let n = i64::from(denominator.max(1));
    let mut lo = vec![i64::MAX; rank];
    let mut hi = vec![i64::MIN; rank];
    for v in alc.vertices() {
        for (j, x) in v.coeffs().iter().enumerate() {
            let s = x * int(n);
            lo[j] = lo[j].min(i64::try_from(s.floor().to_integer()).unwrap_or(i64::MIN / 2));
            hi[j] = hi[j].max(i64::try_from(s.ceil().to_integer()).unwrap_or(i64::MAX / 2));
        }
    }
    let mut out = Vec::new();
    let mut cur = lo.clone();
    if rank == 0 {
        return out;
    }
    loop {
        let p = AlcovePoint::new(cur.iter().map(|&k| rat(k, n)).collect());
        if alc.contains_closed(&p) {
            out.push(p);
        }
        let mut j = rank;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if cur[j] < hi[j] {
                cur[j] += 1;
                for k in cur.iter_mut().skip(j + 1).zip(lo.iter().skip(j + 1)) {
                    *k.0 = *k.1;
                }
                break;
            }
        }
    }
}

/// Grid points whose austere verdict is yes or indeterminate.
pub fn scan_austere(d: &GradedRootDatum, denominator: u32) -> Result<Vec<(AlcovePoint, TriState)>> {
    Ok(grid_points(d, denominator)?
        .into_iter()
        .map(|p| {
            let t = is_austere(d, &p);
            (p, t)
        })
        .filter(|(_, t)| *t != TriState::No)
        .collect())
}

/// `V(H) = Σ m(α,ε)·log|sin(⟨α,H⟩ + φ_ε)|` on the open alcove.
pub fn volume(d: &GradedRootDatum, h: &AlcovePoint, ctx: &RealContext) -> Result<RealInterval> {
    let mut acc = ctx.integer(0);
    for s in d.sectors() {
        for (a, m) in s.positive() {
            let t = pairing_angle(d, a, h, s.phi());
            if t.is_multiple_of(AngleUnit::Pi) {
                return Err(Error::Pole(format!("{t}")));
            }
            let l = ctx.ln(&ctx.abs_sin_angle(&t))?;
            acc = acc.add(&l.mul_int(i64::from(m)));
        }
    }
    Ok(acc)
}

/// `∂V/∂x_j = π·Σ m cot θ·c_j`.
pub fn volume_gradient(d: &GradedRootDatum, h: &AlcovePoint, ctx: &RealContext) -> Result<Vec<RealInterval>> {
    let mc = mean_curvature_at(d, h, ctx)?;
    Ok(mc.components.iter().map(|c| c.neg().mul(ctx.pi())).collect())
}

/// Outcome of [`find_minimal`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalPoint {
    pub point: AlcovePoint,
    pub iterations: usize,
    pub norm: RealInterval,
}

/// Working precision of the solver.
pub const SOLVER_PRECISION: u32 = 256;
const SOLVER_ITERATIONS: usize = 200;

fn round_dyadic(q: &Rational, bits: u32) -> Rational {
    let s = BigInt::one() << bits;
    let n = (q * Rational::from_integer(s.clone())).round().to_integer();
    Rational::new(n, s)
}

/// `u = Σ m cot θ·c` and `Q = Σ m csc²θ·c cᵀ` as rational midpoints.
fn newton_data(d: &GradedRootDatum, h: &AlcovePoint, ctx: &RealContext) -> Result<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let r = d.rank();
    let mut u = vec![Rational::zero(); r];
    let mut q = vec![vec![Rational::zero(); r]; r];
    for t in cot_terms(d, h) {
        let cot = ctx.cot_angle(&t.theta)?.mid_dyadic(SOLVER_PRECISION);
        let csc2 = &cot * &cot + Rational::one();
        let m = int(i64::from(t.mult));
        let c = t.alpha.coords();
        for i in 0..r {
            if c[i] == 0 {
                continue;
            }
            u[i] += &m * &cot * int(c[i]);
            for j in 0..r {
                if c[j] != 0 {
                    q[i][j] += &m * &csc2 * int(c[i] * c[j]);
                }
            }
        }
    }
    Ok((u, q))
}

fn sq_norm(u: &[Rational], d: &GradedRootDatum) -> Rational {
    d.gram().inner_q(u, u)
}

/// Critical point of the concave `V` by damped Newton ascent from the
/// alcove barycenter, stopping once the certified `‖m_H‖` is below
/// `tolerance`.
pub fn find_minimal(d: &GradedRootDatum, tolerance: &Rational) -> Result<MinimalPoint> {
    let alc = fundamental_alcove(d)?;
    let ctx = RealContext::new(SOLVER_PRECISION);
    let inv_pi = ctx.integer(1).div(ctx.pi())?.mid_dyadic(SOLVER_PRECISION);
    let tol = RealInterval::from_rational(tolerance, SOLVER_PRECISION);
    let mut x = alc.barycenter();
    for it in 0..=SOLVER_ITERATIONS {
        let mc = mean_curvature_at(d, &x, &ctx)?;
        if mc.is_exactly_zero() || mc.norm.compare(&tol) == Some(core::cmp::Ordering::Less) {
            return Ok(MinimalPoint { point: x, iterations: it, norm: mc.norm });
        }
        if it == SOLVER_ITERATIONS {
            break;
        }
        let (u, q) = newton_data(d, &x, &ctx)?;
        let step = solve(&q, &u).ok_or_else(|| Error::NoConvergence("singular Hessian".into()))?;
        let base = sq_norm(&u, d);
        let mut t = Rational::one();
        let mut accepted = None;
        for _ in 0..80 {
            let cand = AlcovePoint::new(
                x.coeffs()
                    .iter()
                    .zip(&step)
                    .map(|(xi, si)| round_dyadic(&(xi + &t * si * &inv_pi), SOLVER_PRECISION))
                    .collect(),
            );
            if alc.contains_open(&cand) {
                let (u2, _) = newton_data(d, &cand, &ctx)?;
                if sq_norm(&u2, d) < base {
                    accepted = Some(cand);
                    break;
                }
            }
            t /= int(2);
        }
        match accepted {
            Some(c) if c != x => x = c,
            _ => {
                return Err(Error::NoConvergence(format!(
                    "line search stalled at iteration {it} with |m_H| = {}",
                    mc.norm
                )))
            }
        }
    }
    Err(Error::NoConvergence(format!("no convergence after {SOLVER_ITERATIONS} iterations")))
}
