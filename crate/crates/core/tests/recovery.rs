use fiberlrc::code_builder::{build_family_code, LrcCode};
use fiberlrc::family::{Family, FamilyOptions};
use fiberlrc::gf::{Field, FieldElement};
use fiberlrc::recovery::*;
use fiberlrc::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn code(f: Family, l: u64) -> LrcCode {
    build_family_code(&f.instance(&FamilyOptions::default()).unwrap(), l).unwrap()
}

fn random_codeword(code: &LrcCode, rng: &mut ChaCha8Rng) -> Vec<FieldElement> {
    let o = code.field().order() as u32;
    let msg: Vec<FieldElement> = (0..code.k()).map(|_| FieldElement::from_enc(rng.gen_range(0..o))).collect();
    code.encode(&msg).unwrap()
}

/// Highest-order divided difference; zero iff the points lie on a
/// polynomial of degree below `pts.len() - 1`.
fn top_divided_difference(f: &Field, pts: &[(FieldElement, FieldElement)]) -> FieldElement {
    let mut col: Vec<FieldElement> = pts.iter().map(|p| p.1).collect();
    for level in 1..pts.len() {
        col = (0..col.len() - 1).map(|i| f.div(f.sub(col[i + 1], col[i]), f.sub(pts[i + level].0, pts[i].0))).collect();
    }
    col[0]
}

#[test]
fn set_structure() {
    let cases = [
        (Family::Thc { p: 3, h: 1 }, 3, vec![3, 2]),
        (Family::Thc { p: 2, h: 2 }, 0, vec![4, 3]),
        (Family::HermitianLrc2 { p: 3, h: 1 }, 0, vec![3, 2]),
        (Family::ArtinSchreier { p: 3, h: 2, t: 2 }, 0, vec![2, 2]),
        (Family::HermitianRational { p: 3, h: 1 }, 0, vec![2]),
    ];
    for (fam, l, sizes) in cases {
        let c = code(fam, l);
        let idx = build_recovery_index(&c).unwrap();
        let eval = c.evaluation_set();
        assert_eq!(idx.t(), sizes.len());
        for i in 0..c.n() {
            let sets: Vec<Vec<usize>> = (1..=idx.t()).map(|j| idx.set(i, j)).collect();
            for (j, s) in sets.iter().enumerate() {
                assert_eq!(s.len(), sizes[j], "{fam:?}");
                assert!(!s.contains(&i));
                assert!(s.windows(2).all(|w| w[0] < w[1]));
                // all coordinates but y_{j+1} agree
                for &a in s {
                    for c2 in 0..=idx.t() {
                        if c2 != j + 1 {
                            assert_eq!(eval.coordinate(a, c2), eval.coordinate(i, c2));
                        }
                    }
                }
                for other in &sets[j + 1..] {
                    assert!(s.iter().all(|a| !other.contains(a)));
                }
            }
        }
    }
}

#[test]
fn x4_every_position_every_set() {
    let c = code(Family::Thc { p: 2, h: 2 }, 4);
    let idx = build_recovery_index(&c).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..100 {
        let cw = random_codeword(&c, &mut rng);
        for i in 0..c.n() {
            let mut w = Word::complete(cw.clone());
            w.erase(i);
            for j in 1..=2 {
                assert_eq!(recover(&c, &idx, &w, i, j).unwrap(), cw[i]);
            }
        }
    }
}

#[test]
fn recovered_points_fit_low_degree() {
    let c = code(Family::ArtinSchreier { p: 3, h: 2, t: 2 }, 40);
    let idx = build_recovery_index(&c).unwrap();
    let f = c.field();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cw = random_codeword(&c, &mut rng);
    for i in (0..c.n()).step_by(7) {
        let mut w = Word::complete(cw.clone());
        w.erase(i);
        for j in 1..=2 {
            let v = recover(&c, &idx, &w, i, j).unwrap();
            let mut pts: Vec<(FieldElement, FieldElement)> =
                idx.set(i, j).iter().map(|&a| (idx.abscissa(a, j), cw[a])).collect();
            pts.push((idx.abscissa(i, j), v));
            // d_h points on a polynomial of degree <= d_h - 2
            assert!(top_divided_difference(f, &pts).is_zero());
        }
    }
}

#[test]
fn trivial_codewords() {
    let c = code(Family::HermitianLrc2 { p: 3, h: 1 }, 0);
    let idx = build_recovery_index(&c).unwrap();
    for val in [FieldElement::ZERO, FieldElement::ONE] {
        let mut w = Word::complete(vec![val; c.n()]);
        w.erase(5);
        for j in 1..=2 {
            assert_eq!(recover(&c, &idx, &w, 5, j).unwrap(), val);
        }
    }
}

#[test]
fn x3_all_erasure_pairs() {
    let c = code(Family::Thc { p: 3, h: 1 }, 3);
    let idx = build_recovery_index(&c).unwrap();
    let cw = random_codeword(&c, &mut ChaCha8Rng::seed_from_u64(2));
    let check = |erased: &[usize]| {
        let mut w = Word::complete(cw.clone());
        for &e in erased {
            w.erase(e);
        }
        let rep = recover_multi(&c, &idx, &w).unwrap();
        assert!(rep.failed.is_empty(), "{erased:?}");
        assert_eq!(rep.word.symbols, cw);
        let mut fixed = rep.repaired.clone();
        fixed.sort();
        assert_eq!(fixed, erased);
    };
    for a in 0..c.n() {
        check(&[a]);
        for b in a + 1..c.n() {
            check(&[a, b]);
        }
    }
}

#[test]
fn one_direction_blocked() {
    // erasing the whole y1-group of i leaves the y2-set intact
    let c = code(Family::Thc { p: 3, h: 1 }, 3);
    let idx = build_recovery_index(&c).unwrap();
    let cw = random_codeword(&c, &mut ChaCha8Rng::seed_from_u64(3));
    let mut w = Word::complete(cw.clone());
    let i = 10;
    w.erase(i);
    for a in idx.set(i, 1) {
        w.erase(a);
    }
    assert!(matches!(recover(&c, &idx, &w, i, 1), Err(Error::NotEnoughSurvivors { have: 0, .. })));
    let rep = recover_multi(&c, &idx, &w).unwrap();
    assert!(rep.failed.is_empty());
    assert_eq!(rep.word.symbols, cw);
    assert!(rep.repaired.contains(&i));
}

#[test]
fn bad_requests() {
    let c = code(Family::Thc { p: 3, h: 1 }, 0);
    let idx = build_recovery_index(&c).unwrap();
    let w = Word::complete(vec![FieldElement::ZERO; c.n()]);
    assert!(matches!(recover(&c, &idx, &w, 0, 3), Err(Error::BadParams(_))));
    let short = Word::complete(vec![FieldElement::ZERO; 3]);
    assert_eq!(recover(&c, &idx, &short, 0, 1).unwrap_err(), Error::LengthMismatch { expected: 72, got: 3 });
    let opts = Word::from_options(&[Some(FieldElement::ONE), None]);
    assert_eq!(opts.erasures(), vec![1]);
}
