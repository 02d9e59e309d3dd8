use hermann_core::roots::{
    build_root_system, contains_minus_identity, decompose_and_classify, tits_minus_identity, verify_axioms, weyl_group,
};
use hermann_core::{CartanLabel, Family, RootVector};

fn factorial(n: u128) -> u128 {
    (1..=n).product()
}

/// Closed-form Weyl group orders.
fn expected_order(f: Family, r: u128) -> u128 {
    match f {
        Family::A => factorial(r + 1),
        Family::B | Family::C | Family::BC => (1 << r) * factorial(r),
        Family::D => (1 << (r - 1)) * factorial(r),
        Family::G => 12,
    }
}

fn oracle_labels() -> Vec<CartanLabel> {
    let mut v = Vec::new();
    for r in 1..=4 {
        v.push(CartanLabel::new(Family::A, r).unwrap());
        v.push(CartanLabel::new(Family::BC, r).unwrap());
    }
    for r in 2..=4 {
        v.push(CartanLabel::new(Family::B, r).unwrap());
        v.push(CartanLabel::new(Family::D, r).unwrap());
    }
    v.push(CartanLabel::new(Family::G, 2).unwrap());
    v
}

#[test]
fn group_orders_match_closed_forms() {
    for l in oracle_labels() {
        let r = build_root_system(l).unwrap();
        assert!(verify_axioms(&r), "{l}");
        let w = weyl_group(&r).unwrap();
        assert_eq!(w.order() as u128, expected_order(l.family, l.rank as u128), "{l}");
    }
}

#[test]
fn minus_identity_matches_tits() {
    for l in oracle_labels() {
        let w = weyl_group(&build_root_system(l).unwrap()).unwrap();
        let expected = !(l.family == Family::A && l.rank >= 2 || l.family == Family::D && l.rank == 3);
        assert_eq!(contains_minus_identity(&w), expected, "{l}");
        assert_eq!(tits_minus_identity(&[l], l.rank), expected, "{l}");
    }
}

#[test]
fn weyl_elements_permute_roots() {
    for l in oracle_labels().into_iter().filter(|l| l.rank <= 3) {
        let r = build_root_system(l).unwrap();
        let w = weyl_group(&r).unwrap();
        for g in w.elements() {
            let mut image: Vec<RootVector> = r.roots().iter().map(|a| w.apply(g, a)).collect();
            image.sort();
            assert_eq!(image, r.roots(), "{l}");
        }
    }
}

#[test]
fn classification_recovers_label() {
    for l in oracle_labels() {
        let r = build_root_system(l).unwrap();
        let got = decompose_and_classify(&r).unwrap();
        // D2 = A1+A1 and D3 = A3 are the low-rank coincidences
        let expected = match (l.family, l.rank) {
            (Family::D, 2) => vec![CartanLabel::new(Family::A, 1).unwrap(); 2],
            (Family::D, 3) => vec![CartanLabel::new(Family::A, 3).unwrap()],
            _ => vec![l],
        };
        assert_eq!(got, expected, "{l}");
    }
}
