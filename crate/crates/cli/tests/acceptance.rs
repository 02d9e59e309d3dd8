//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the target exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use hermann_core::alcove::{active_roots, fundamental_alcove, reduce_to_alcove, AlcovePoint};
use hermann_core::geometry::{analyze, find_minimal, mean_curvature_at, volume, volume_gradient, OrbitReport};
use hermann_core::interval::RealContext;
use hermann_core::roots::{build_root_system, contains_minus_identity, verify_axioms, weyl_group};
use hermann_core::{catalog, rat, CartanLabel, CatalogParams, Family, GradedRootDatum, Rational, RationalAngle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RANDOM_POINTS: usize = 100;
const GRADIENT_POINTS: usize = 20;

fn ten_pow(e: u32) -> Rational {
    (0..e).fold(rat(1, 1), |acc, _| acc * rat(10, 1))
}

fn abs(q: &Rational) -> Rational {
    if *q < rat(0, 1) {
        -q
    } else {
        q.clone()
    }
}

fn iso(label: &str, mults: Option<Vec<u32>>) -> CatalogParams {
    CatalogParams::isotropy(label.parse::<CartanLabel>().unwrap(), mults)
}

/// One representative per catalog key, plus the two rank-one isotropy
/// data used by the solver oracles.
fn catalog_data() -> Vec<GradedRootDatum> {
    [
        ("so_even", CatalogParams::pq(9, 7)),
        ("su_sp", CatalogParams::pq(9, 7)),
        ("so8_g2", CatalogParams::default()),
        ("isotropy", iso("A1", None)),
        ("isotropy", iso("BC1", Some(vec![4, 1]))),
    ]
    .into_iter()
    .map(|(k, p)| catalog(k, &p).unwrap())
    .collect()
}

fn random_point(rng: &mut ChaCha8Rng, rank: usize) -> AlcovePoint {
    let den: i64 = if rng.gen_bool(0.5) { rng.gen_range(1..=12) } else { rng.gen_range(13..=997) };
    AlcovePoint::new((0..rank).map(|_| rat(rng.gen_range(-2 * den..=2 * den), den)).collect())
}

fn random_interior(rng: &mut ChaCha8Rng, d: &GradedRootDatum) -> AlcovePoint {
    let alc = fundamental_alcove(d).unwrap();
    let w: Vec<i64> = alc.vertices().iter().map(|_| rng.gen_range(1..=1000)).collect();
    let total: i64 = w.iter().sum();
    let mut x = vec![rat(0, 1); d.rank()];
    for (v, &k) in alc.vertices().iter().zip(&w) {
        for (xi, vi) in x.iter_mut().zip(v.coeffs()) {
            *xi += vi * rat(k, total);
        }
    }
    AlcovePoint::new(x)
}

struct Ledger {
    failures: Vec<String>,
    /// Every (datum, point) touched, for the implication sweep.
    touched: Vec<(GradedRootDatum, AlcovePoint)>,
}

impl Ledger {
    fn record(
        &mut self,
        n: usize,
        title: &str,
        budget: Duration,
        check: impl FnOnce(&mut Self) -> Result<String, String>,
    ) {
        let start = Instant::now();
        let outcome = check(self);
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => {
                Err(format!("{detail}; took {:.1}s, budget {}s", elapsed.as_secs_f64(), budget.as_secs()))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS [{n:>2}] {title}: {detail} ({:.1}s)", elapsed.as_secs_f64()),
            Err(why) => {
                println!("FAIL [{n:>2}] {title}: {why}");
                self.failures.push(format!("{n}: {why}"));
            }
        }
    }

    fn touch(&mut self, d: &GradedRootDatum, h: &AlcovePoint) {
        self.touched.push((d.clone(), h.clone()));
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn point_of(s: &str) -> AlcovePoint {
    let inner = s.strip_prefix('(').and_then(|s| s.strip_suffix(")·π")).expect("point column");
    AlcovePoint::new(inner.split(',').map(|c| c.parse::<Rational>().unwrap()).collect())
}

/// Classified vertex rows of `faces --format tsv`: (point, type, austere, arid*, WR*).
fn vertex_rows(args: &[&str]) -> Vec<(String, String, String, String, String)> {
    let mut argv = vec!["faces"];
    argv.extend_from_slice(args);
    argv.extend_from_slice(&["--format", "tsv"]);
    common::tsv_rows(&common::stdout(&argv))
        .into_iter()
        .map(|r| (r[1].clone(), r[2].clone(), r[4].clone(), r[6].clone(), r[7].clone()))
        .collect()
}

fn scan(args: &[&str], denominator: &str) -> Vec<(String, String)> {
    let mut argv = vec!["scan-austere"];
    argv.extend_from_slice(args);
    argv.extend_from_slice(&["--denominator", denominator, "--format", "tsv"]);
    common::tsv_rows(&common::stdout(&argv)).into_iter().map(|r| (r[0].clone(), r[1].clone())).collect()
}

fn criterion_1(l: &mut Ledger) -> Result<String, String> {
    let args = ["--triad", "so_even", "--p", "9", "--q", "7"];
    let d = catalog("so_even", &CatalogParams::pq(9, 7)).unwrap();
    let expected: BTreeSet<(String, String)> =
        [("(0,0,0)·π", "BC3"), ("(1/4,0,0)·π", "B1+BC2"), ("(0,1/4,0)·π", "B2+BC1"), ("(0,0,1/4)·π", "B3")]
            .into_iter()
            .map(|(p, t)| (p.to_string(), t.to_string()))
            .collect();
    let rows = vertex_rows(&args);
    let got: BTreeSet<(String, String)> = rows.iter().map(|r| (r.0.clone(), r.1.clone())).collect();
    ensure(rows.len() == 4 && got == expected, || format!("vertices {got:?}"))?;
    ensure(rows.iter().all(|r| r.4 == "yes"), || format!("WR* column {rows:?}"))?;
    let hits = scan(&args, "24");
    let points: BTreeSet<String> = hits.iter().map(|h| h.0.clone()).collect();
    let vertex_points: BTreeSet<String> = expected.iter().map(|e| e.0.clone()).collect();
    ensure(points == vertex_points && hits.iter().all(|h| h.1 == "yes"), || format!("scan {hits:?}"))?;
    for r in &rows {
        l.touch(&d, &point_of(&r.0));
    }
    Ok("4 vertices BC3 / B1+BC2 / B2+BC1 / B3, all WR*; N=24 scan finds exactly them".into())
}

fn criterion_2(l: &mut Ledger) -> Result<String, String> {
    let args = ["--triad", "su_sp", "--p", "9", "--q", "7"];
    let d = catalog("su_sp", &CatalogParams::pq(9, 7)).unwrap();
    let hits = scan(&args, "24");
    let expected: BTreeSet<String> =
        ["(0,0,0)·π", "(1/4,0,0)·π", "(0,1/4,0)·π", "(0,0,1/4)·π"].into_iter().map(String::from).collect();
    let points: BTreeSet<String> = hits.iter().map(|h| h.0.clone()).collect();
    ensure(points == expected && hits.iter().all(|h| h.1 == "yes"), || format!("scan {hits:?}"))?;
    let out = common::stdout(&[
        "analyze", "--triad", "su_sp", "--p", "9", "--q", "7", "--point", "0,0,1/8", "--format", "tsv",
    ]);
    let row = &common::tsv_rows(&out)[0];
    ensure(row[3] == "no", || format!("austere at x_r = 1/8 is {}", row[3]))?;
    for p in &points {
        l.touch(&d, &point_of(p));
    }
    l.touch(&d, &AlcovePoint::new(vec![rat(0, 1), rat(0, 1), rat(1, 8)]));
    Ok("N=24 scan finds the 4 vertices; x_r = π/8 is not austere".into())
}

fn criterion_3(l: &mut Ledger) -> Result<String, String> {
    let args = ["--triad", "so8_g2"];
    let d = catalog("so8_g2", &CatalogParams::default()).unwrap();
    let rows = vertex_rows(&args);
    let got: Vec<(&str, &str, &str, &str, &str)> =
        rows.iter().map(|r| (r.0.as_str(), r.1.as_str(), r.2.as_str(), r.3.as_str(), r.4.as_str())).collect();
    let expected = vec![
        ("(0,0)·π", "G2", "yes", "yes", "yes"),
        ("(1/6,0)·π", "A1+A1", "yes", "yes", "yes"),
        ("(0,1/3)·π", "A2", "no", "yes", "no"),
    ];
    ensure(got == expected, || format!("vertex rows {got:?}"))?;
    let hits = scan(&args, "36");
    let want = vec![("(0,0)·π".to_string(), "yes".to_string()), ("(1/6,0)·π".to_string(), "yes".to_string())];
    ensure(hits == want, || format!("scan {hits:?}"))?;
    for r in &rows {
        l.touch(&d, &point_of(&r.0));
    }
    Ok("vertices G2 / A1+A1 / A2; arid* but not austere at (π/3)H₂; N=36 scan finds {0, (π/6)H₁}".into())
}

fn criterion_4(l: &mut Ledger) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    for d in catalog_data() {
        for _ in 0..RANDOM_POINTS {
            let h = random_point(&mut rng, d.rank());
            let act = active_roots(&d, &h);
            ensure(act.union.is_empty() || verify_axioms(&act.union), || format!("{} at {h}", d.name()))?;
            checked += 1;
            l.touch(&d, &h);
        }
    }
    Ok(format!("{checked} active root systems satisfy the axioms"))
}

fn criterion_5(_: &mut Ledger) -> Result<String, String> {
    let fact = |n: u128| (1..=n).product::<u128>();
    let mut cases = Vec::new();
    for r in 1..=4u128 {
        cases.push((Family::A, r, fact(r + 1), r == 1));
        cases.push((Family::BC, r, (1 << r) * fact(r), true));
    }
    for r in 2..=4u128 {
        cases.push((Family::B, r, (1 << r) * fact(r), true));
        cases.push((Family::D, r, (1 << (r - 1)) * fact(r), r != 3));
    }
    cases.push((Family::G, 2, 12, true));
    for (f, r, order, minus_id) in &cases {
        let l = CartanLabel::new(*f, *r as usize).unwrap();
        let w = weyl_group(&build_root_system(l).unwrap()).map_err(|e| format!("{l}: {e}"))?;
        ensure(w.order() as u128 == *order, || format!("|W({l})| = {}, expected {order}", w.order()))?;
        ensure(contains_minus_identity(&w) == *minus_id, || format!("-id in W({l}) disagrees with Tits"))?;
    }
    Ok(format!("{} Weyl groups match closed-form orders and the Tits table", cases.len()))
}

fn criterion_6(l: &mut Ledger) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let ctx = RealContext::new(256);
    let step = rat(1, 1) / ten_pow(8);
    let rel = rat(1, 1) / ten_pow(6);
    let mut worst = rat(0, 1);
    for d in catalog_data() {
        for _ in 0..GRADIENT_POINTS {
            let h = random_interior(&mut rng, &d);
            let mh = mean_curvature_at(&d, &h, &ctx).map_err(|e| e.to_string())?;
            for j in 0..d.rank() {
                let at = |s: &Rational| {
                    let mut x = h.coeffs().to_vec();
                    x[j] += s;
                    volume(&d, &AlcovePoint::new(x), &ctx).unwrap()
                };
                // ∂V/∂x_j with x the coefficient of π, so −∇V/π is m_H
                let fd = at(&step).sub(&at(&-step.clone())).div(&ctx.rational(&(&step * rat(2, 1)))).unwrap();
                let minus_grad = fd.div(ctx.pi()).unwrap().neg().mid();
                let exact = mh.components[j].mid();
                let err = abs(&(&minus_grad - &exact));
                ensure(err <= &rel * abs(&exact), || {
                    format!("{} at {h}, component {j}: {minus_grad} vs {exact}", d.name())
                })?;
                if exact != rat(0, 1) {
                    worst = worst.max(err / abs(&exact));
                }
            }
            let g = volume_gradient(&d, &h, &ctx).map_err(|e| e.to_string())?;
            ensure(g.len() == d.rank(), || "gradient length".into())?;
            l.touch(&d, &h);
        }
    }
    Ok(format!("worst relative error {:.2e}", hermann_core::RealInterval::from_rational(&worst, 64).to_f64()))
}

fn criterion_7(l: &mut Ledger) -> Result<String, String> {
    let tol = rat(1, 1) / ten_pow(20);
    let bound = hermann_core::RealInterval::from_rational(&tol, 256);
    for d in catalog_data() {
        let m = find_minimal(&d, &tol).map_err(|e| format!("{}: {e}", d.name()))?;
        let alc = fundamental_alcove(&d).unwrap();
        ensure(alc.contains_open(&m.point), || format!("{}: {} not interior", d.name(), m.point))?;
        ensure(m.norm.hi() < bound.lo(), || format!("{}: norm {}", d.name(), m.norm))?;
        l.touch(&d, &m.point);
    }
    let a1 = catalog("isotropy", &iso("A1", None)).unwrap();
    let x = find_minimal(&a1, &tol).unwrap().point.coeffs()[0].clone();
    ensure(abs(&(&x - rat(1, 2))) < rat(1, 1) / ten_pow(30), || format!("A1 minimum at {x}"))?;

    // 4 cot y + 2 cot 2y on (0, π/2), bisected on rational multiples of π
    let bc1 = catalog("isotropy", &iso("BC1", Some(vec![4, 1]))).unwrap();
    let ctx = RealContext::new(256);
    let g = |t: &Rational| {
        let c1 = ctx.cot_angle(&RationalAngle::new(t.clone())).unwrap().mul_int(4);
        let c2 = ctx.cot_angle(&RationalAngle::new(t * rat(2, 1))).unwrap().mul_int(2);
        c1.add(&c2)
    };
    let (mut lo, mut hi) = (rat(1, 100), rat(49, 100));
    ensure(g(&lo).is_positive() && g(&hi).is_negative(), || "bisection bracket".into())?;
    for _ in 0..90 {
        let mid = (&lo + &hi) / rat(2, 1);
        match g(&mid) {
            v if v.is_positive() => lo = mid,
            v if v.is_negative() => hi = mid,
            _ => break,
        }
    }
    let y = find_minimal(&bc1, &tol).unwrap().point.coeffs()[0].clone();
    let root = (&lo + &hi) / rat(2, 1);
    ensure(abs(&(&y - &root)) < tol, || format!("BC1 minimum at {y}, bisection {root}"))?;
    Ok("certified |m_H| < 1e-20 for all data; A1 at 1/2; BC1 matches bisection".into())
}

fn criterion_8(l: &mut Ledger) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let ctx = RealContext::new(192);
    let tol = rat(1, 1) / ten_pow(20);
    let mut moved = 0;
    for d in catalog_data() {
        let alc = fundamental_alcove(&d).unwrap();
        for _ in 0..RANDOM_POINTS {
            let h = random_point(&mut rng, d.rank());
            let (x, word) = reduce_to_alcove(&d, &h).map_err(|e| e.to_string())?;
            ensure(alc.contains_closed(&x), || format!("{}: {h} -> {x} outside", d.name()))?;
            let (y, _) = reduce_to_alcove(&d, &x).map_err(|e| e.to_string())?;
            ensure(y == x, || format!("{}: not idempotent at {x}", d.name()))?;
            let a = mean_curvature_at(&d, &h, &ctx).map_err(|e| e.to_string())?.norm;
            let b = mean_curvature_at(&d, &x, &ctx).map_err(|e| e.to_string())?.norm;
            let diff = a.sub(&b);
            ensure(diff.hi() < tol && diff.lo() > -tol.clone(), || format!("{}: norms differ at {h}", d.name()))?;
            moved += usize::from(!word.is_empty());
            l.touch(&d, &h);
            l.touch(&d, &x);
        }
    }
    Ok(format!("{moved} of {} points moved; all land in the closed alcove", 5 * RANDOM_POINTS))
}

fn criterion_9(l: &mut Ledger) -> Result<String, String> {
    let mut n = 0;
    for (d, h) in &l.touched {
        let r: OrbitReport = analyze(d, h).map_err(|e| format!("{} at {h}: {e}", d.name()))?;
        ensure(r.implications_hold(), || format!("{} at {h}", d.name()))?;
        n += 1;
    }
    Ok(format!("{n} reports satisfy TG => austere => 0 in |m_H| and WR* => arid*"))
}

fn criterion_10(_: &mut Ledger) -> Result<String, String> {
    let runs: [&[&str]; 3] = [
        &["faces", "--triad", "so8_g2", "--format", "tsv"],
        &["faces", "--triad", "so_even", "--p", "9", "--q", "7", "--all-faces"],
        &["scan-austere", "--triad", "so8_g2", "--denominator", "36", "--jobs", "3"],
    ];
    for args in runs {
        let a = common::hermann(args);
        let b = common::hermann(args);
        ensure(a.status.success() && a.stdout == b.stdout && a.stderr == b.stderr, || format!("{args:?} differs"))?;
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut svgs = Vec::new();
    for name in ["a.svg", "b.svg"] {
        let path = dir.path().join(name);
        let p = path.to_str().unwrap();
        common::stdout(&["diagram", "--triad", "so8_g2", "--out", p]);
        svgs.push(std::fs::read_to_string(&path).map_err(|e| e.to_string())?);
    }
    ensure(svgs[0] == svgs[1], || "SVG output differs between runs".into())?;
    common::well_formed_xml(&svgs[0])?;
    let markers = svgs[0].matches("class=\"marker ").count();
    ensure(markers == 3, || format!("{markers} markers"))?;
    Ok("byte-identical reruns; well-formed SVG with 3 vertex markers".into())
}

fn main() {
    let mut l = Ledger { failures: Vec::new(), touched: Vec::new() };
    let s = Duration::from_secs;
    l.record(1, "so_even(9,7) faces and N=24 scan", s(30), criterion_1);
    l.record(2, "su_sp(9,7) scan and x_r = π/8", s(30), criterion_2);
    l.record(3, "so8_g2 faces and N=36 scan", s(10), criterion_3);
    l.record(4, "active root systems at random points", s(60), criterion_4);
    l.record(5, "Weyl group orders and -id", s(60), criterion_5);
    l.record(6, "volume gradient vs mean curvature", s(600), criterion_6);
    l.record(7, "minimal orbit solver", s(600), criterion_7);
    l.record(8, "alcove reduction invariance", s(600), criterion_8);
    l.record(9, "flag implications", s(600), criterion_9);
    l.record(10, "CLI determinism and SVG", s(120), criterion_10);
    let passed = 10 - l.failures.len();
    println!("acceptance: {passed}/10 criteria passed");
    if !l.failures.is_empty() {
        std::process::exit(1);
    }
}
