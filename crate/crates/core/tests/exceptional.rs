use proptest::prelude::*;

use polytriple::exceptional::{exceptional_union, square_class_exclusion, ExceptionalSet, Mod3Exclusion};
use polytriple::TripleInvariants;

#[test]
fn exclusions_hold_on_targets() {
    for a in 3..=16 {
        for b in a..=16 {
            for c in b..=16 {
                let t = TripleInvariants::new(a, b, c).unwrap();
                let ex = square_class_exclusion(&t);
                let set = ExceptionalSet::new(&t);
                for n in 0..=10_000u64 {
                    let target = t.target(n);
                    match ex.mod3 {
                        Mod3Exclusion::Always => assert_eq!(target % 3, 2, "{a},{b},{c} n={n}"),
                        Mod3Exclusion::OnClass { residue } if n % 3 == residue as u64 => {
                            assert_eq!(target % 3, 2, "{a},{b},{c} n={n}")
                        }
                        _ => {}
                    }
                    if ex.twice_squares_excluded {
                        assert!(set.witnesses(n).iter().all(|w| w.t != 2), "{a},{b},{c} n={n}");
                    }
                    if let Some(o) = ex.constant_ord2 {
                        assert_eq!(target.trailing_zeros(), o);
                    }
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn witnesses_are_exact(a in 3i64..60, b in 3i64..60, c in 3i64..60, n in 0u64..1_000_000) {
        let t = TripleInvariants::new(a, b, c).unwrap();
        for w in exceptional_union(&t, n) {
            prop_assert!(w.holds_for(t.target(n)));
            prop_assert_eq!(t.level % w.t as i128, 0);
        }
    }

    #[test]
    fn membership_is_permutation_invariant(a in 3i64..60, b in 3i64..60, c in 3i64..60, n in 0u64..100_000) {
        let base = exceptional_union(&TripleInvariants::new(a, b, c).unwrap(), n);
        prop_assert_eq!(&exceptional_union(&TripleInvariants::new(c, a, b).unwrap(), n), &base);
        prop_assert_eq!(&exceptional_union(&TripleInvariants::new(b, c, a).unwrap(), n), &base);
    }
}
