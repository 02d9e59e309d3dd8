//! Plain and TSV tables.

use hermann_core::geometry::{MeanCurvature, OrbitReport, SpectrumReport};
use hermann_core::roots::{type_string, type_string_pretty};
use hermann_core::RealInterval;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Plain,
    Tsv,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Tsv => {
                let mut out = String::new();
                for line in std::iter::once(&self.header).chain(&self.rows) {
                    out.push_str(&line.join("\t"));
                    out.push('\n');
                }
                out
            }
            Format::Plain => {
                let n = self.header.len();
                let mut w = vec![0; n];
                for line in std::iter::once(&self.header).chain(&self.rows) {
                    for (i, c) in line.iter().enumerate() {
                        w[i] = w[i].max(c.chars().count());
                    }
                }
                let fmt_line = |line: &[String]| {
                    let mut s = String::new();
                    for (i, c) in line.iter().enumerate() {
                        s.push_str(c);
                        if i + 1 < n {
                            s.push_str(&" ".repeat(w[i] - c.chars().count() + 2));
                        }
                    }
                    s.trim_end().to_string() + "\n"
                };
                let mut out = fmt_line(&self.header);
                let rule: Vec<String> = w.iter().map(|&k| "-".repeat(k)).collect();
                out.push_str(&fmt_line(&rule));
                for r in &self.rows {
                    out.push_str(&fmt_line(r));
                }
                out
            }
        }
    }
}

pub fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

/// Interval with its working precision, e.g. `1.5e0 ±2^-230 [192 bits]`.
pub fn fmt_interval(x: &RealInterval) -> String {
    format!("{x} [{} bits]", x.precision_bits())
}

pub fn fmt_norm(mc: &MeanCurvature) -> String {
    if mc.is_exactly_zero() {
        "0 (exact)".into()
    } else {
        fmt_interval(&mc.norm)
    }
}

pub fn fmt_type(r: &OrbitReport, format: Format) -> String {
    match format {
        Format::Tsv => type_string(&r.sigma_type),
        Format::Plain => type_string_pretty(&r.sigma_type),
    }
}

pub const REPORT_COLUMNS: [&str; 8] = ["point", "type", "TG", "austere", "minimal", "arid*", "WR*", "norm_mH"];

/// One classification row per report; `labels` prepends a leading column.
pub fn classification_table(reports: &[OrbitReport], labels: Option<(&str, &[String])>, format: Format) -> Table {
    let mut header: Vec<&str> = Vec::new();
    if let Some((name, _)) = labels {
        header.push(name);
    }
    header.extend(REPORT_COLUMNS);
    let mut t = Table::new(&header);
    for (i, r) in reports.iter().enumerate() {
        let mut row = Vec::new();
        if let Some((_, l)) = labels {
            row.push(l[i].clone());
        }
        row.extend([
            r.point.to_string(),
            fmt_type(r, format),
            yes_no(r.totally_geodesic),
            r.austere.to_string(),
            r.minimal.to_string(),
            yes_no(r.arid_sufficient),
            yes_no(r.weakly_reflective_sufficient),
            fmt_norm(&r.mean_curvature),
        ]);
        t.push(row);
    }
    t
}

pub fn spectrum_table(s: &SpectrumReport) -> Table {
    let mut t = Table::new(&["root", "theta", "mult", "eigenvalue"]);
    t.push(vec!["zero".into(), "-".into(), s.zero_mult.to_string(), "0 (exact)".into()]);
    for term in &s.terms {
        let ev = if term.eigenvalue.width() == hermann_core::rat(0, 1) {
            format!("{} (exact)", hermann_core::interval::fmt_sci(&term.eigenvalue.mid(), 20))
        } else {
            fmt_interval(&term.eigenvalue)
        };
        t.push(vec![term.alpha.to_string(), term.theta.to_string(), term.mult.to_string(), ev]);
    }
    t.push(vec!["active".into(), "-".into(), s.active_mult.to_string(), "normal".into()]);
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only() {
        let t = Table::new(&["point", "austere"]);
        assert_eq!(t.render(Format::Tsv), "point\taustere\n");
        assert_eq!(t.render(Format::Plain), "point  austere\n-----  -------\n");
    }

    #[test]
    fn plain_alignment_counts_chars() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["B₁⊕BC₂".into(), "x".into()]);
        assert_eq!(t.render(Format::Plain), "a       b\n------  -\nB₁⊕BC₂  x\n");
    }
}
