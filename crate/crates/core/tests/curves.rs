use std::collections::BTreeMap;

use fiberlrc::family::{Family, FamilyOptions, Instance};
use fiberlrc::gf::{Field, FieldElement};

fn inst(f: Family) -> Instance {
    f.instance(&FamilyOptions::default()).unwrap()
}

/// Every affine point of the family's curve, by scanning all tuples
/// against the defining equations written out here.
fn brute_points(inst: &Instance) -> Vec<Vec<FieldElement>> {
    let f: &Field = inst.fiber_product.field();
    let q = f.half_order().unwrap() as u128;
    let tr = |x| f.add(f.pow(x, q), x);
    let nm = |x| f.pow(x, q + 1);
    let all: Vec<FieldElement> = f.elements().collect();
    let mut out = Vec::new();
    match inst.family {
        Family::HermitianRational { .. } => {
            for &x in &all {
                for &y in &all {
                    if tr(y) == nm(x) {
                        out.push(vec![x, y]);
                    }
                }
            }
        }
        Family::HermitianLrc2 { .. } => {
            for &u in &all {
                for &y in &all {
                    for &x in &all {
                        if nm(y) == u && tr(x) == u {
                            out.push(vec![u, y, x]);
                        }
                    }
                }
            }
        }
        Family::Thc { .. } => {
            for &y0 in &all {
                for &y1 in &all {
                    for &y2 in &all {
                        if tr(y0) == nm(y1) && tr(y2) == nm(y0) {
                            out.push(vec![y0, y1, y2]);
                        }
                    }
                }
            }
        }
        Family::ArtinSchreier { t, .. } => {
            assert_eq!(t, 2);
            let asm = |y| f.sub(f.pow(y, f.p() as u128), y);
            let (a1, a2) = (inst.kernel[0], inst.kernel[1]);
            for &y0 in &all {
                let rhs1 = f.mul(a1, nm(y0));
                let rhs2 = f.mul(a2, nm(y0));
                let s1: Vec<_> = all.iter().filter(|&&y| asm(y) == rhs1).collect();
                let s2: Vec<_> = all.iter().filter(|&&y| asm(y) == rhs2).collect();
                for &&y1 in &s1 {
                    for &&y2 in &s2 {
                        out.push(vec![y0, y1, y2]);
                    }
                }
            }
        }
    }
    out
}

fn fiber_histogram(points: &[Vec<FieldElement>]) -> BTreeMap<FieldElement, usize> {
    let mut h = BTreeMap::new();
    for pt in points {
        *h.entry(pt[0]).or_insert(0) += 1;
    }
    h
}

#[test]
fn split_locus_sizes() {
    let cases = [
        (Family::Thc { p: 3, h: 1 }, 6),
        (Family::Thc { p: 2, h: 2 }, 12),
        (Family::ArtinSchreier { p: 3, h: 2, t: 2 }, 81),
        (Family::ArtinSchreier { p: 2, h: 2, t: 2 }, 16),
        (Family::HermitianRational { p: 3, h: 1 }, 9),
    ];
    for (fam, s) in cases {
        let i = inst(fam);
        let locus = i.fiber_product.split_locus();
        assert_eq!(locus.split.len(), s, "{fam:?}");
        assert!(locus.split.windows(2).all(|w| w[0] < w[1]));
        // the classification agrees with an independent enumeration
        let hist = fiber_histogram(&brute_points(&i));
        for a in i.fiber_product.field().elements() {
            assert_eq!(locus.fiber_sizes[a.enc() as usize] as usize, hist.get(&a).copied().unwrap_or(0));
        }
    }
}

#[test]
fn thc_fiber_sizes() {
    for (p, h) in [(3, 1), (2, 2)] {
        let i = inst(Family::Thc { p, h });
        let f = i.fiber_product.field();
        let q = f.half_order().unwrap();
        for a in f.elements() {
            let size = i.fiber_product.fiber_size(a);
            if f.rel_trace(a).unwrap().is_zero() {
                assert_eq!(size, q);
            } else {
                assert_eq!(size, q * (q + 1));
            }
        }
    }
}

#[test]
fn artin_schreier_zero_fiber_is_prime_field() {
    let i = inst(Family::ArtinSchreier { p: 3, h: 2, t: 2 });
    let fiber = i.fiber_product.fiber(FieldElement::ZERO);
    assert_eq!(fiber.len(), 9);
    assert!(fiber.iter().all(|pt| pt[1].enc() < 3 && pt[2].enc() < 3));
}

#[test]
fn evaluation_set_sizes_and_order() {
    let cases = [
        (Family::HermitianLrc2 { p: 2, h: 2 }, 60),
        (Family::HermitianLrc2 { p: 3, h: 1 }, 24),
        (Family::Thc { p: 3, h: 1 }, 72),
        (Family::Thc { p: 2, h: 2 }, 240),
        (Family::ArtinSchreier { p: 3, h: 2, t: 2 }, 729),
        (Family::HermitianRational { p: 2, h: 2 }, 64),
    ];
    for (fam, n) in cases {
        let i = inst(fam);
        let eval = i.evaluation_set().unwrap();
        assert_eq!(eval.len(), n, "{fam:?}");
        let pts: Vec<Vec<FieldElement>> = eval.points().map(<[_]>::to_vec).collect();
        assert!(pts.windows(2).all(|w| w[0] < w[1]), "canonical order");
        assert!(pts.iter().all(|pt| i.fiber_product.satisfies(pt)));
        // every kept base value carries a full fiber
        let brute = brute_points(&i);
        let hist = fiber_histogram(&brute);
        for &a in eval.base_values() {
            assert_eq!(hist[&a], eval.d_g());
        }
        assert_eq!(n, eval.base_values().len() * eval.d_g());
    }
}

#[test]
fn coordinate_degrees_on_b() {
    // a y_i value is taken by at most d_{y_i} points of B, and exactly
    // d_{y_i} away from ramification
    for fam in [Family::ArtinSchreier { p: 3, h: 2, t: 2 }, Family::HermitianLrc2 { p: 3, h: 1 }] {
        let i = inst(fam);
        let eval = i.evaluation_set().unwrap();
        let d_y = i.fiber_product.d_y().to_vec();
        for (c, &dy) in d_y.iter().enumerate() {
            let counts: Vec<u64> =
                i.fiber_product.field().elements().map(|v| eval.count_with(c + 1, v) as u64).collect();
            assert!(counts.iter().all(|&cnt| cnt <= dy), "{fam:?} y{}", c + 1);
            assert!(counts.contains(&dy));
        }
    }
}

#[test]
fn point_counts() {
    // X_3: 72 points over the split values and 3 over each trace-zero value
    let r = Family::Thc { p: 3, h: 1 }.point_count_check().unwrap();
    assert_eq!(r.affine_enumerated, Some(81));
    assert_eq!(r.total_enumerated(), Some(82));
    assert_eq!(r.matches, Some(true));
    assert_eq!(brute_points(&inst(Family::Thc { p: 3, h: 1 })).len(), 81);

    let r = Family::ArtinSchreier { p: 3, h: 2, t: 2 }.point_count_check().unwrap();
    assert_eq!(r.affine_enumerated, Some(729));
    assert_eq!(r.matches, Some(true));

    let r = Family::HermitianRational { p: 2, h: 2 }.point_count_check().unwrap();
    assert_eq!(r.affine_enumerated, Some(64));
    assert_eq!(r.closed_form_total, 65);

    let r = Family::Thc { p: 2, h: 2 }.point_count_check().unwrap();
    assert_eq!(r.total_enumerated(), Some(257));
    assert_eq!(r.matches, Some(true));

    // too large to enumerate: closed form only
    let r = Family::ArtinSchreier { p: 7, h: 4, t: 2 }.point_count_check().unwrap();
    assert_eq!(r.affine_enumerated, None);
    assert_eq!(r.matches, None);
    assert_eq!(r.closed_form_total as u128, 49 * 7u128.pow(8) + 1);
}
