mod common;

use common::q;
use galrep::ec::WeierstrassCurve;
use galrep::polyq::{parse_ratfunc, Value};
use galrep::tables::*;

#[test]
fn all_identities_hold() {
    let r = verify_all();
    let failed: Vec<String> = r.failures().iter().map(|c| format!("{} {}", c.name, c.detail)).collect();
    assert!(failed.is_empty(), "{failed:#?}");
    assert!(r.checks.len() > 150);
}

#[test]
fn j_examples() {
    let t = |s| parse_ratfunc(s, "t").unwrap();
    assert_eq!(get_j(2, 3).unwrap(), &t("t^2+1728"));
    assert_eq!(get_j(3, 4).unwrap(), &t("t^3"));
    assert_eq!(get_j(5, 8).unwrap(), &t("25(t^2+10t+5)^3/t^5"));
    assert!(matches!(get_j(5, 10), Err(TableError::UnknownEntry(5, 10))));
    assert!(matches!(get_j(4, 1), Err(TableError::UnknownPrime(4))));
    assert!(matches!(get_j(11, 3), Err(TableError::NoJ(11, 3))));
}

#[test]
fn family_examples() {
    let Family::Param { a, b } = get_family(3, 3).unwrap() else { panic!() };
    let x = q(2, 1);
    // −3·3³·11 and −2·3⁴·(4 − 36 − 27)
    assert_eq!(a.eval(&x), q(-891, 1));
    assert_eq!(b.eval(&x), q(9558, 1));
    let Family::Fixed(e) = get_family(7, 1).unwrap() else { panic!() };
    assert_eq!(e, &WeierstrassCurve::short(q(-42875, 1), q(-3246250, 1)).unwrap());
    let Family::Fixed(e) = get_family(11, 1).unwrap() else { panic!() };
    assert_eq!(e, &WeierstrassCurve::short(q(-27 * 14641, 1), q(54 * 161051 * 43, 1)).unwrap());
    assert!(matches!(get_family(5, 2), Err(TableError::NoFamily(5, 2))));
}

#[test]
fn family_members_have_the_right_j() {
    for (l, i) in [(3u64, 1u32), (3, 3), (5, 1), (5, 5), (5, 6), (7, 3), (7, 4), (7, 5), (7, 7), (13, 4), (13, 5)] {
        let fam = get_family(l, i).unwrap();
        let j = get_j(l, i).unwrap();
        for t in [q(2, 1), q(-3, 7), q(11, 5)] {
            let Ok(e) = fam.curve_at(&t) else { continue };
            assert_eq!(j.evaluate(&t).unwrap(), Value::Finite(e.j_invariant()), "{l}.{i} at {t}");
        }
    }
}

#[test]
fn cm_examples() {
    let e = cm_entry(&q(-3375, 1)).unwrap();
    assert_eq!((e.d, e.f), (7, 1));
    assert_eq!(e.model, WeierstrassCurve::from_ints([0, 0, 0, -1715, 33614]).unwrap());
    let e = cm_entry(&q(1728, 1)).unwrap();
    assert_eq!((e.d, e.f), (4, 1));
    assert_eq!(e.model, WeierstrassCurve::from_ints([0, 0, 0, 1, 0]).unwrap());
    assert!(cm_entry(&q(5, 1)).is_none());
    assert_eq!(tables().cm_entries().len(), 13);
    for e in tables().cm_entries() {
        assert_eq!(e.model.j_invariant(), e.j);
    }
}

#[test]
fn printed_index_lists() {
    let idx = |l: u64| -> Vec<u64> {
        let t = tables().prime(l).unwrap();
        let mut v: Vec<u64> = t.listing().iter().map(|e| e.index).collect();
        for e in t.listing() {
            v.extend(e.subs.iter().map(|s| s.index));
        }
        v
    };
    assert_eq!(idx(2), vec![6, 3, 2]);
    assert_eq!(idx(3), vec![12, 6, 4, 3, 24, 8, 8]);
    assert_eq!(idx(5), vec![60, 30, 30, 15, 12, 12, 10, 6, 5, 120, 120, 24, 24, 24, 24]);
    assert_eq!(idx(7), vec![56, 28, 24, 24, 24, 21, 8, 112, 48, 48, 48, 48, 48, 48, 16, 16]);
    assert_eq!(idx(11), vec![60, 60, 55, 120, 120, 120, 120]);
    assert_eq!(idx(13), vec![42, 42, 42, 28, 28, 14, 91, 56, 56, 56, 56]);
}

#[test]
fn entries_in_matching_order() {
    for t in tables().primes() {
        assert!(t.entries.windows(2).all(|w| w[0].index >= w[1].index));
    }
    let order = |l: u64| tables().prime(l).unwrap().entries.iter().map(|e| e.number).collect::<Vec<_>>();
    assert_eq!(order(5), vec![1, 2, 3, 4, 5, 6, 7, 8, 9]);
    assert_eq!(order(7), vec![1, 2, 3, 4, 5, 6, 7]);
    assert_eq!(order(13), vec![7, 1, 2, 3, 4, 5, 6]);
    assert_eq!(tables().prime(5).unwrap().twist_discriminant, Some(5));
    assert_eq!(tables().prime(13).unwrap().twist_discriminant, Some(13));
    assert_eq!(tables().prime(3).unwrap().twist_discriminant, Some(-3));
    assert_eq!(tables().prime(7).unwrap().twist_discriminant, Some(-7));
}

#[test]
fn exceptional_pair_table() {
    let got: Vec<(u64, String)> = exceptional_pairs().into_iter().map(|(l, j, _)| (l, galrep::exactmath::rat_to_string(&j))).collect();
    let want = [
        (17, format!("-{}/{}", 17u128 * 373u128.pow(3), 1u128 << 17)),
        (17, format!("-{}/2", 289u128 * 101u128.pow(3))),
        (37, format!("-{}", 7u128 * 11u128.pow(3))),
        (37, format!("-{}", 7u128 * 137u128.pow(3) * 2083u128.pow(3))),
    ];
    assert_eq!(got, want.to_vec());
}

#[test]
fn nonsplit_data_identities() {
    let x = tables().xns11();
    assert_eq!(x.a, x.quintic.pow(11));
    let d = x.d_poly().expect("Δ = D²·cubic");
    assert_eq!(&(&d * &d) * &x.cubic, x.discriminant());
}

#[test]
fn emit_lists_every_group() {
    let s = emit();
    assert!(s.contains("ell 13 G7 index 91"));
    assert!(s.contains("ell 5 H6.2 index 24"));
    assert!(s.contains("xns11 curve [0,-1,1,-7,10]"));
    assert_eq!(s.lines().filter(|l| l.starts_with("cm ")).count(), 13);
}
