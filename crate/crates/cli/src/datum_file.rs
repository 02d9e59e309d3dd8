//! JSON datum files.
//!
//! Negative roots may be omitted; loading completes them through
//! `m(−α, ε⁻¹) = m(α, ε)`. Serialization is canonical: positive roots only,
//! sorted, sectors sorted by phase.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use hermann_core::exact::fmt_rational;
use hermann_core::roots::build_root_system;
use hermann_core::triad::{complete_negatives, validate};
use hermann_core::{
    CartanLabel, GradedRootDatum, GramMatrix, Rational, RationalAngle, RootSystem, RootVector, Sector, Violation,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum DatumError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("invalid datum: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatumFile {
    name: String,
    rank: usize,
    gram: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    simple_roots_label: Option<String>,
    order: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    zero_mult: Option<u32>,
    sectors: Vec<SectorFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SectorFile {
    phi: String,
    roots: Vec<RootEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RootEntry {
    v: Vec<i64>,
    m: u32,
}

fn field(field: &str, message: impl Into<String>) -> DatumError {
    DatumError::Field { field: field.into(), message: message.into() }
}

/// `p/q` or an integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let t = s.trim();
    if t.is_empty() || t.contains(char::is_whitespace) {
        return None;
    }
    if let Some((_, d)) = t.split_once('/') {
        if d.trim_start_matches(['+', '-']).chars().all(|c| c == '0') {
            return None;
        }
    }
    Rational::from_str(t).ok()
}

pub fn parse_datum(text: &str) -> Result<GradedRootDatum, DatumError> {
    let file: DatumFile = serde_json::from_str(text).map_err(|e| DatumError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    build(file)
}

pub fn load_datum(path: &Path) -> Result<GradedRootDatum, DatumError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| DatumError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_datum(&text)
}

fn build(f: DatumFile) -> Result<GradedRootDatum, DatumError> {
    let r = f.rank;
    if r == 0 {
        return Err(field("rank", "must be positive"));
    }
    if f.gram.len() != r {
        return Err(field("gram", format!("expected {r} rows, found {}", f.gram.len())));
    }
    let mut g = Vec::with_capacity(r);
    for (i, row) in f.gram.iter().enumerate() {
        if row.len() != r {
            return Err(field("gram", format!("row {i} has {} entries, expected {r}", row.len())));
        }
        let parsed = row
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| field("gram", format!("bad rational {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        g.push(parsed);
    }
    let gram = GramMatrix::new(g).map_err(|e| field("gram", e.to_string()))?;

    let mut sectors = Vec::new();
    for (k, s) in f.sectors.iter().enumerate() {
        let phi = parse_rational(&s.phi)
            .ok_or_else(|| field(&format!("sectors[{k}].phi"), format!("bad rational {:?}", s.phi)))?;
        let mut roots = BTreeMap::new();
        for (j, e) in s.roots.iter().enumerate() {
            let name = format!("sectors[{k}].roots[{j}].v");
            if e.v.len() != r {
                return Err(field(&name, format!("has length {}, expected {r}", e.v.len())));
            }
            let v = RootVector::new(e.v.clone());
            if v.is_zero() {
                return Err(field(&name, "zero vector"));
            }
            if roots.insert(v, e.m).is_some() {
                return Err(field(&name, "duplicate root in sector"));
            }
        }
        sectors.push(Sector::new(RationalAngle::new(phi), roots));
    }
    let mut phases: Vec<&RationalAngle> = sectors.iter().map(|s| s.phi()).collect();
    phases.sort();
    if phases.windows(2).any(|w| w[0] == w[1]) {
        return Err(field("sectors", "two sectors share a phase"));
    }
    let sectors = complete_negatives(sectors);

    let label = match &f.simple_roots_label {
        Some(s) => {
            let l = CartanLabel::from_str(s).map_err(|e| field("simple_roots_label", e.to_string()))?;
            if l.rank != r {
                return Err(field("simple_roots_label", format!("{l} has rank {}, datum has rank {r}", l.rank)));
            }
            Some(l)
        }
        None => None,
    };
    let roots: Vec<RootVector> = match label {
        Some(l) => build_root_system(l).map_err(|e| field("simple_roots_label", e.to_string()))?.roots().to_vec(),
        None => sectors.iter().flat_map(|s| s.roots().keys().cloned()).collect(),
    };
    let sigma = RootSystem::from_roots(gram, roots).map_err(|e| field("sectors", e.to_string()))?;
    let d = GradedRootDatum::new_unchecked(f.name, sigma, label, sectors, f.order, f.zero_mult);
    let v = validate(&d);
    if v.is_empty() {
        Ok(d)
    } else {
        Err(DatumError::Invalid(v))
    }
}

/// Canonical pretty JSON with a trailing newline.
pub fn serialize_datum(d: &GradedRootDatum) -> String {
    let r = d.rank();
    let gram = (0..r).map(|i| (0..r).map(|j| fmt_rational(d.gram().entry(i, j))).collect()).collect();
    let mut sectors: Vec<&Sector> = d.sectors().iter().collect();
    sectors.sort_by(|a, b| a.phi().cmp(b.phi()));
    let file = DatumFile {
        name: d.name().to_string(),
        rank: r,
        gram,
        simple_roots_label: d.label().map(|l| l.to_string()),
        order: d.order(),
        zero_mult: d.zero_mult_declared(),
        sectors: sectors
            .into_iter()
            .map(|s| SectorFile {
                phi: fmt_rational(s.phi().coeff()),
                roots: s.positive().map(|(a, m)| RootEntry { v: a.coords().to_vec(), m }).collect(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("datum serializes");
    out.push('\n');
    out
}
