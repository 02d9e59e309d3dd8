//! Graded root data: sectors `Σ_ε` with phases `φ_ε` and multiplicities,
//! validation, and the built-in catalog.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exact::{int, rat, GramMatrix, Rational, RationalAngle, RootVector};
use crate::roots::{build_root_system, verify_axioms, CartanLabel, Family, RootSystem};

/// One graded piece: the phase `φ_ε` (`ε = e^{2iφ}`) and `m(α, ε)` for
/// every `α ∈ Σ_ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sector {
    phi: RationalAngle,
    roots: BTreeMap<RootVector, u32>,
}

impl Sector {
    pub fn new(phi: RationalAngle, roots: BTreeMap<RootVector, u32>) -> Self {
        Self { phi, roots }
    }

    pub fn phi(&self) -> &RationalAngle {
        &self.phi
    }

    pub fn roots(&self) -> &BTreeMap<RootVector, u32> {
        &self.roots
    }

    pub fn mult(&self, alpha: &RootVector) -> u32 {
        self.roots.get(alpha).copied().unwrap_or(0)
    }

    /// `Σ_ε⁺` with multiplicities.
    pub fn positive(&self) -> impl Iterator<Item = (&RootVector, u32)> {
        self.roots.iter().filter(|(a, _)| a.is_positive()).map(|(a, &m)| (a, m))
    }
}

/// Phase of `ε⁻¹`, folded back into `(−1/2, 1/2]`.
pub fn inverse_phase(phi: &RationalAngle) -> RationalAngle {
    fold_phase(&-phi)
}

/// Representative of `φ mod π` in `(−1/2, 1/2]·π`.
pub fn fold_phase(phi: &RationalAngle) -> RationalAngle {
    let c = phi.normalize_mod_pi().coeff().clone();
    if c > rat(1, 2) {
        RationalAngle::new(c - Rational::one())
    } else {
        RationalAngle::new(c)
    }
}

fn phi_in_range(phi: &RationalAngle) -> bool {
    let c = phi.coeff();
    c > &rat(-1, 2) && c <= &rat(1, 2)
}

/// Adds `(−α, ε⁻¹)` with multiplicity `m(α, ε)` wherever it is missing,
/// creating partner sectors as needed, and sorts sectors by phase.
pub fn complete_negatives(sectors: Vec<Sector>) -> Vec<Sector> {
    let mut by_phase: BTreeMap<RationalAngle, BTreeMap<RootVector, u32>> = BTreeMap::new();
    for s in &sectors {
        let e = by_phase.entry(s.phi.clone()).or_default();
        for (a, &m) in &s.roots {
            e.entry(a.clone()).or_insert(m);
        }
    }
    let snapshot: Vec<(RationalAngle, RootVector, u32)> =
        by_phase.iter().flat_map(|(p, r)| r.iter().map(move |(a, &m)| (p.clone(), a.clone(), m))).collect();
    for (p, a, m) in snapshot {
        if !phi_in_range(&p) {
            continue;
        }
        by_phase.entry(inverse_phase(&p)).or_default().entry(-&a).or_insert(m);
    }
    by_phase.into_iter().map(|(phi, roots)| Sector { phi, roots }).collect()
}

/// A single failed datum invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    PhiRange { phi: RationalAngle },
    RootNotInSigma { phi: RationalAngle, root: RootVector },
    Duality { phi: RationalAngle, root: RootVector, mult: u32, partner_mult: u32 },
    Coverage { root: RootVector },
    Order { phi: RationalAngle, order: u32 },
    NonPositiveMultiplicity { phi: RationalAngle, root: RootVector },
    DuplicatePhase { phi: RationalAngle },
    SigmaAxioms,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PhiRange { phi } => write!(f, "phase {phi} outside (-1/2, 1/2]·π"),
            Violation::RootNotInSigma { phi, root } => {
                write!(f, "root {root} in sector {phi} is not in the root system")
            }
            Violation::Duality { phi, root, mult, partner_mult } => {
                write!(f, "m({root}, {phi}) = {mult} but the inverse sector has m(-{root}) = {partner_mult}")
            }
            Violation::Coverage { root } => write!(f, "root {root} lies in no sector"),
            Violation::Order { phi, order } => write!(f, "phase {phi} violates ε^{order} = 1"),
            Violation::NonPositiveMultiplicity { phi, root } => {
                write!(f, "multiplicity of {root} in sector {phi} is not positive")
            }
            Violation::DuplicatePhase { phi } => write!(f, "phase {phi} appears in two sectors"),
            Violation::SigmaAxioms => f.write_str("the union of sectors is not a root system"),
        }
    }
}

/// A graded restricted root datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRootDatum {
    name: String,
    sigma_tilde: RootSystem,
    label: Option<CartanLabel>,
    sectors: Vec<Sector>,
    order: u32,
    zero_mult: Option<u32>,
}

impl GradedRootDatum {
    /// Builds and validates.
    pub fn new(
        name: impl Into<String>,
        sigma_tilde: RootSystem,
        label: Option<CartanLabel>,
        sectors: Vec<Sector>,
        order: u32,
        zero_mult: Option<u32>,
    ) -> Result<Self> {
        let d = Self::new_unchecked(name, sigma_tilde, label, sectors, order, zero_mult);
        let v = validate(&d);
        if v.is_empty() {
            Ok(d)
        } else {
            Err(Error::InvalidDatum(v))
        }
    }

    pub fn new_unchecked(
        name: impl Into<String>,
        sigma_tilde: RootSystem,
        label: Option<CartanLabel>,
        sectors: Vec<Sector>,
        order: u32,
        zero_mult: Option<u32>,
    ) -> Self {
        Self { name: name.into(), sigma_tilde, label, sectors, order, zero_mult }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.sigma_tilde.rank()
    }

    pub fn gram(&self) -> &GramMatrix {
        self.sigma_tilde.gram()
    }

    pub fn sigma_tilde(&self) -> &RootSystem {
        &self.sigma_tilde
    }

    pub fn label(&self) -> Option<CartanLabel> {
        self.label
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Declared zero-eigenvalue block dimension, if any.
    pub fn zero_mult_declared(&self) -> Option<u32> {
        self.zero_mult
    }

    pub fn zero_mult(&self) -> u32 {
        self.zero_mult.unwrap_or(0)
    }

    pub fn sector(&self, phi: &RationalAngle) -> Option<&Sector> {
        self.sectors.iter().find(|s| &s.phi == phi)
    }

    /// `(sector index, α, m(α,ε))` for every `ε` and `α ∈ Σ_ε⁺`.
    pub fn positive_terms(&self) -> impl Iterator<Item = (usize, &RootVector, u32)> {
        self.sectors.iter().enumerate().flat_map(|(i, s)| s.positive().map(move |(a, m)| (i, a, m)))
    }

    /// `Σ_ε Σ_{α∈Σ_ε⁺} m(α,ε)`.
    pub fn total_positive_mult(&self) -> u64 {
        self.positive_terms().map(|(_, _, m)| u64::from(m)).sum()
    }

    /// The datum with every phase and root negated; carries the same
    /// geometry by the duality `m(α,ε) = m(−α,ε⁻¹)`.
    pub fn negated(&self) -> Self {
        let sectors = self
            .sectors
            .iter()
            .map(|s| Sector { phi: inverse_phase(&s.phi), roots: s.roots.iter().map(|(a, &m)| (-a, m)).collect() })
            .collect::<Vec<_>>();
        let mut sectors = sectors;
        sectors.sort_by(|a, b| a.phi.cmp(&b.phi));
        Self { sectors, ..self.clone() }
    }
}

/// All violated invariants, in a fixed order.
pub fn validate(d: &GradedRootDatum) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut phases: Vec<&RationalAngle> = Vec::new();
    for s in &d.sectors {
        if phases.contains(&&s.phi) {
            out.push(Violation::DuplicatePhase { phi: s.phi.clone() });
        }
        phases.push(&s.phi);
        if !phi_in_range(&s.phi) {
            out.push(Violation::PhiRange { phi: s.phi.clone() });
        }
        if !(s.phi.coeff() * int(i64::from(d.order))).is_integer() {
            out.push(Violation::Order { phi: s.phi.clone(), order: d.order });
        }
        for (a, &m) in &s.roots {
            if m == 0 {
                out.push(Violation::NonPositiveMultiplicity { phi: s.phi.clone(), root: a.clone() });
            }
            if !d.sigma_tilde.contains(a) {
                out.push(Violation::RootNotInSigma { phi: s.phi.clone(), root: a.clone() });
            }
        }
    }
    for s in &d.sectors {
        let partner = d.sector(&inverse_phase(&s.phi));
        for (a, &m) in &s.roots {
            let pm = partner.map_or(0, |p| p.mult(&-a));
            if pm != m && (a.is_positive() || pm == 0) {
                out.push(Violation::Duality { phi: s.phi.clone(), root: a.clone(), mult: m, partner_mult: pm });
            }
        }
    }
    for a in d.sigma_tilde.roots() {
        if !d.sectors.iter().any(|s| s.roots.contains_key(a)) {
            out.push(Violation::Coverage { root: a.clone() });
        }
    }
    if !verify_axioms(&d.sigma_tilde) {
        out.push(Violation::SigmaAxioms);
    }
    out
}

/// Named integer parameters for [`catalog`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CatalogParams {
    pub p: Option<i64>,
    pub q: Option<i64>,
    pub label: Option<CartanLabel>,
    /// Multiplicity per root-length class, shortest first.
    pub mults: Option<Vec<u32>>,
}

impl CatalogParams {
    pub fn pq(p: i64, q: i64) -> Self {
        Self { p: Some(p), q: Some(q), ..Self::default() }
    }

    pub fn isotropy(label: CartanLabel, mults: Option<Vec<u32>>) -> Self {
        Self { label: Some(label), mults, ..Self::default() }
    }
}

/// A built-in family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub key: &'static str,
    pub parameters: &'static str,
    pub summary: &'static str,
}

pub const CATALOG: [CatalogEntry; 4] = [
    CatalogEntry {
        key: "so_even",
        parameters: "p, q (p > q >= 3, both odd)",
        summary: "(SO(p+q), SO(p)xSO(q), U((p+q)/2)); Σ̃ = BC_r, r = (q-1)/2, l = 4",
    },
    CatalogEntry {
        key: "su_sp",
        parameters: "p, q (p > q >= 3, both odd)",
        summary: "(SU(p+q), S(U(p)xU(q)), Sp((p+q)/2)); Σ̃ = BC_r, r = (q-1)/2, l = 4",
    },
    CatalogEntry {
        key: "so8_g2",
        parameters: "none",
        summary: "(SO(8), SO(7), G2 twisted by triality); Σ̃ = G2, l = 3",
    },
    CatalogEntry {
        key: "isotropy",
        parameters: "label (Cartan type), optional mults per root length, shortest first",
        summary: "one sector φ = 0 with Σ_1 = Σ̃, l = 1",
    },
];

/// Builds a catalog datum.
pub fn catalog(key: &str, params: &CatalogParams) -> Result<GradedRootDatum> {
    match key {
        "so_even" => {
            bc_family(key, params, BcMults { long: 2, short_per_pq: 1, quarter: 2, double_zero: 1, double_half: 0 })
        }
        "su_sp" => {
            bc_family(key, params, BcMults { long: 4, short_per_pq: 2, quarter: 4, double_zero: 3, double_half: 1 })
        }
        "so8_g2" => so8_g2(),
        "isotropy" => isotropy(params),
        _ => Err(Error::UnknownKey(key.into())),
    }
}

/// Root classes of `BC_r` in the `B` simple basis via `e_j = c_j − c_{j−1}`.
#[derive(Clone, Copy, PartialEq, Eq)]
enum BcClass {
    Long,
    Short,
    Double,
}

fn bc_class(v: &RootVector) -> BcClass {
    let c = v.coords();
    let e: Vec<i64> = (0..c.len()).map(|j| c[j] - if j > 0 { c[j - 1] } else { 0 }).collect();
    let nz: Vec<i64> = e.into_iter().filter(|&x| x != 0).collect();
    match nz.as_slice() {
        [x] if x.abs() == 2 => BcClass::Double,
        [_] => BcClass::Short,
        _ => BcClass::Long,
    }
}

/// Multiplicities of a `BC_r` family; short roots carry `short_per_pq·(p−q)`
/// in `φ ∈ {0, π/2}` and `quarter` in `φ = ±π/4`. A zero `double_half`
/// leaves `2e_i` out of `Σ_{−1}`.
struct BcMults {
    long: u32,
    short_per_pq: u32,
    quarter: u32,
    double_zero: u32,
    double_half: u32,
}

fn bc_family(key: &str, params: &CatalogParams, m: BcMults) -> Result<GradedRootDatum> {
    let (p, q) = match (params.p, params.q) {
        (Some(p), Some(q)) => (p, q),
        _ => return Err(Error::BadParameters(format!("{key} needs --p and --q"))),
    };
    if !(p > q && q >= 3 && q % 2 == 1 && p % 2 == 1) {
        return Err(Error::BadParameters(format!("{key} needs p > q >= 3 with p and q odd (got p={p}, q={q})")));
    }
    let r = ((q - 1) / 2) as usize;
    let diff = u32::try_from(p - q).map_err(|_| Error::BadParameters("p - q too large".into()))?;
    let label = CartanLabel::new(Family::BC, r)?;
    let sigma = build_root_system(label)?;
    let mut zero = BTreeMap::new();
    let mut half = BTreeMap::new();
    let mut quarter = BTreeMap::new();
    for a in sigma.roots() {
        match bc_class(a) {
            BcClass::Long => {
                zero.insert(a.clone(), m.long);
                half.insert(a.clone(), m.long);
            }
            BcClass::Short => {
                zero.insert(a.clone(), m.short_per_pq * diff);
                half.insert(a.clone(), m.short_per_pq * diff);
                quarter.insert(a.clone(), m.quarter);
            }
            BcClass::Double => {
                zero.insert(a.clone(), m.double_zero);
                if m.double_half > 0 {
                    half.insert(a.clone(), m.double_half);
                }
            }
        }
    }
    let sectors = alloc::vec![
        Sector::new(RationalAngle::from_ratio(-1, 4), quarter.clone()),
        Sector::new(RationalAngle::zero(), zero),
        Sector::new(RationalAngle::from_ratio(1, 4), quarter),
        Sector::new(RationalAngle::from_ratio(1, 2), half),
    ];
    GradedRootDatum::new(format!("{key}(p={p},q={q})"), sigma, Some(label), sectors, 4, None)
}

fn so8_g2() -> Result<GradedRootDatum> {
    let label = CartanLabel::new(Family::G, 2)?;
    let sigma = build_root_system(label)?;
    let g = sigma.gram().clone();
    let all: BTreeMap<RootVector, u32> = sigma.roots().iter().map(|a| (a.clone(), 1)).collect();
    let short: BTreeMap<RootVector, u32> =
        sigma.roots().iter().filter(|a| g.inner(a, a).unwrap() == int(2)).map(|a| (a.clone(), 1)).collect();
    let sectors = alloc::vec![
        Sector::new(RationalAngle::from_ratio(-1, 3), short.clone()),
        Sector::new(RationalAngle::zero(), all),
        Sector::new(RationalAngle::from_ratio(1, 3), short),
    ];
    GradedRootDatum::new("so8_g2", sigma, Some(label), sectors, 3, None)
}

fn isotropy(params: &CatalogParams) -> Result<GradedRootDatum> {
    let label = params.label.ok_or_else(|| Error::BadParameters("isotropy needs a Cartan label".into()))?;
    let sigma = build_root_system(label)?;
    let g = sigma.gram().clone();
    let mut lengths: Vec<Rational> = sigma.roots().iter().map(|a| g.inner(a, a).unwrap()).collect();
    lengths.sort();
    lengths.dedup();
    let mults = match &params.mults {
        None => alloc::vec![1; lengths.len()],
        Some(m) if m.len() == lengths.len() && m.iter().all(|&x| x > 0) => m.clone(),
        Some(m) => {
            return Err(Error::BadParameters(format!(
                "{label} has {} root lengths, got {} positive multiplicities",
                lengths.len(),
                m.len()
            )))
        }
    };
    let roots: BTreeMap<RootVector, u32> = sigma
        .roots()
        .iter()
        .map(|a| {
            let n = g.inner(a, a).unwrap();
            let k = lengths.iter().position(|l| l == &n).unwrap();
            (a.clone(), mults[k])
        })
        .collect();
    let suffix = match &params.mults {
        Some(m) => format!(",m={}", m.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join("/")),
        None => String::new(),
    };
    let sectors = alloc::vec![Sector::new(RationalAngle::zero(), roots)];
    GradedRootDatum::new(format!("isotropy({label}{suffix})"), sigma, Some(label), sectors, 1, None)
}

/// Whether `v` is a nonzero rational multiple of `u`.
pub fn collinear(u: &RootVector, v: &RootVector) -> bool {
    let (Some((_, pu)), Some((_, pv))) = (u.primitive(), v.primitive()) else { return false };
    pu == pv || pu == -&pv
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(c: &[i64]) -> RootVector {
        RootVector::new(c.to_vec())
    }

    fn phi(n: i64, d: i64) -> RationalAngle {
        RationalAngle::from_ratio(n, d)
    }

    #[test]
    fn catalog_data_validate() {
        for (k, p) in [
            ("so_even", CatalogParams::pq(9, 7)),
            ("su_sp", CatalogParams::pq(9, 7)),
            ("so8_g2", CatalogParams::default()),
            ("isotropy", CatalogParams::isotropy("A1".parse().unwrap(), None)),
            ("isotropy", CatalogParams::isotropy("BC1".parse().unwrap(), Some(alloc::vec![4, 1]))),
        ] {
            let d = catalog(k, &p).unwrap();
            assert!(validate(&d).is_empty(), "{k}");
        }
    }

    #[test]
    fn so_even_multiplicities() {
        let d = catalog("so_even", &CatalogParams::pq(9, 7)).unwrap();
        assert_eq!(d.rank(), 3);
        assert_eq!(d.order(), 4);
        // e1 = α1+α2+α3, e1-e2 = α1, e1+e2 = α1+2α2+2α3, 2e1 = 2(α1+α2+α3)
        let e1 = rv(&[1, 1, 1]);
        let one = d.sector(&phi(0, 1)).unwrap();
        let minus = d.sector(&phi(1, 2)).unwrap();
        let i = d.sector(&phi(1, 4)).unwrap();
        let mi = d.sector(&phi(-1, 4)).unwrap();
        assert_eq!(one.mult(&rv(&[1, 0, 0])), 2);
        assert_eq!(one.mult(&rv(&[1, 2, 2])), 2);
        assert_eq!(one.mult(&e1), 2);
        assert_eq!(one.mult(&rv(&[2, 2, 2])), 1);
        assert_eq!(minus.mult(&e1), 2);
        assert_eq!(minus.mult(&rv(&[2, 2, 2])), 0);
        assert_eq!(i.mult(&e1), 2);
        assert_eq!(mi.mult(&-&e1), 2);
        assert_eq!(i.roots().len(), 6);
        assert_eq!(one.roots().len(), 24);
        assert_eq!(minus.roots().len(), 18);
    }

    #[test]
    fn su_sp_multiplicities() {
        let d = catalog("su_sp", &CatalogParams::pq(9, 7)).unwrap();
        let one = d.sector(&phi(0, 1)).unwrap();
        let minus = d.sector(&phi(1, 2)).unwrap();
        assert_eq!(one.mult(&rv(&[1, 0, 0])), 4);
        assert_eq!(one.mult(&rv(&[0, 0, 1])), 4);
        assert_eq!(one.mult(&rv(&[0, 0, 2])), 3);
        assert_eq!(minus.mult(&rv(&[0, 0, 2])), 1);
        assert_eq!(d.sector(&phi(-1, 4)).unwrap().mult(&rv(&[0, 0, 1])), 4);
    }

    #[test]
    fn so8_g2_sectors() {
        let d = catalog("so8_g2", &CatalogParams::default()).unwrap();
        assert_eq!(d.order(), 3);
        let w = d.sector(&phi(1, 3)).unwrap();
        let keys: Vec<_> = w.positive().map(|(a, _)| a.clone()).collect();
        assert_eq!(keys, [rv(&[1, 0]), rv(&[1, 1]), rv(&[2, 1])]);
        assert_eq!(d.sector(&phi(0, 1)).unwrap().roots().len(), 12);
    }

    #[test]
    fn bad_params() {
        assert!(matches!(catalog("so_even", &CatalogParams::pq(7, 9)), Err(Error::BadParameters(_))));
        assert!(matches!(catalog("so_even", &CatalogParams::pq(9, 4)), Err(Error::BadParameters(_))));
        assert!(matches!(catalog("nope", &CatalogParams::default()), Err(Error::UnknownKey(_))));
        assert!(matches!(
            catalog("isotropy", &CatalogParams::isotropy("BC1".parse().unwrap(), Some(alloc::vec![1]))),
            Err(Error::BadParameters(_))
        ));
    }

    fn a1_datum(sectors: Vec<Sector>, order: u32) -> GradedRootDatum {
        let sigma = build_root_system("A1".parse().unwrap()).unwrap();
        GradedRootDatum::new_unchecked("t", sigma, None, sectors, order, None)
    }

    #[test]
    fn duality_violation() {
        let a = rv(&[1]);
        let s = alloc::vec![
            Sector::new(phi(1, 4), [(a.clone(), 2)].into_iter().collect()),
            Sector::new(phi(-1, 4), [(-&a, 1)].into_iter().collect()),
        ];
        let v = validate(&a1_datum(s, 4));
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(matches!(v[0], Violation::Duality { .. }));
    }

    #[test]
    fn phi_range_violation() {
        let a = rv(&[1]);
        let s = alloc::vec![Sector::new(phi(3, 4), [(a.clone(), 1), (-&a, 1)].into_iter().collect())];
        let v = validate(&a1_datum(s, 4));
        assert!(v.contains(&Violation::PhiRange { phi: phi(3, 4) }), "{v:?}");
        assert_eq!(v.iter().filter(|x| matches!(x, Violation::PhiRange { .. })).count(), 1);
    }

    #[test]
    fn order_and_coverage() {
        let a = rv(&[1]);
        let s = alloc::vec![Sector::new(phi(1, 2), [(a.clone(), 1)].into_iter().collect())];
        let v = validate(&a1_datum(s, 3));
        assert!(v.contains(&Violation::Order { phi: phi(1, 2), order: 3 }));
        assert!(v.contains(&Violation::Coverage { root: -&a }));
    }

    #[test]
    fn completion() {
        let a = rv(&[1]);
        let s = complete_negatives(alloc::vec![Sector::new(phi(1, 4), [(a.clone(), 2)].into_iter().collect())]);
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].phi(), &phi(-1, 4));
        assert_eq!(s[0].mult(&-&a), 2);
        let h = complete_negatives(alloc::vec![Sector::new(phi(1, 2), [(a.clone(), 3)].into_iter().collect())]);
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].mult(&-&a), 3);
    }

    #[test]
    fn folding() {
        assert_eq!(inverse_phase(&phi(1, 2)), phi(1, 2));
        assert_eq!(inverse_phase(&phi(1, 3)), phi(-1, 3));
        assert_eq!(fold_phase(&phi(3, 4)), phi(-1, 4));
        assert!(collinear(&rv(&[1, 1]), &rv(&[-2, -2])));
        assert!(!collinear(&rv(&[1, 0]), &rv(&[1, 1])));
    }
}
