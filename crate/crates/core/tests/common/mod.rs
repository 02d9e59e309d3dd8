#![allow(dead_code)]

use hermann_core::alcove::{fundamental_alcove, AlcovePoint};
use hermann_core::{catalog, rat, CartanLabel, CatalogParams, GradedRootDatum, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Every catalog key with representative parameters.
pub fn catalog_data() -> Vec<GradedRootDatum> {
    let iso = |s: &str, m: Option<Vec<u32>>| CatalogParams::isotropy(s.parse::<CartanLabel>().unwrap(), m);
    [
        ("so_even", CatalogParams::pq(9, 7)),
        ("su_sp", CatalogParams::pq(9, 7)),
        ("so8_g2", CatalogParams::default()),
        ("isotropy", iso("A1", None)),
        ("isotropy", iso("BC1", Some(vec![4, 1]))),
        ("isotropy", iso("B2", None)),
    ]
    .into_iter()
    .map(|(k, p)| catalog(k, &p).unwrap())
    .collect()
}

/// Anywhere in `[-2, 2]ʳ`; small denominators half of the time so that
/// walls and their intersections are hit.
pub fn random_point(rng: &mut ChaCha8Rng, rank: usize) -> AlcovePoint {
    let den: i64 = if rng.gen_bool(0.5) { rng.gen_range(1..=12) } else { rng.gen_range(13..=997) };
    AlcovePoint::new((0..rank).map(|_| rat(rng.gen_range(-2 * den..=2 * den), den)).collect())
}

/// Strict convex combination of the alcove vertices.
pub fn random_interior(rng: &mut ChaCha8Rng, d: &GradedRootDatum) -> AlcovePoint {
    let alc = fundamental_alcove(d).unwrap();
    let w: Vec<i64> = alc.vertices().iter().map(|_| rng.gen_range(1..=1000)).collect();
    let total: i64 = w.iter().sum();
    let mut x = vec![Rational::from_integer(0.into()); d.rank()];
    for (v, &k) in alc.vertices().iter().zip(&w) {
        for (xi, vi) in x.iter_mut().zip(v.coeffs()) {
            *xi += vi * rat(k, total);
        }
    }
    let p = AlcovePoint::new(x);
    assert!(alc.contains_open(&p));
    p
}
