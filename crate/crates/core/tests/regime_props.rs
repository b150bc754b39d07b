use proptest::prelude::*;
use regflow::bilinear::Form;
use regflow::regime::{check_theorem, custom, TheoremId, Verdict};

fn quarter(max: i32) -> impl Strategy<Value = f64> {
    (0..=max).prop_map(|k| k as f64 / 4.0)
}

fn form() -> impl Strategy<Value = Form> {
    prop_oneof![Just(Form::B1), Just(Form::B2), Just(Form::B3), Just(Form::B4), Just(Form::B5(1, 2, 2))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    // The closed-form systems are sufficient conditions.
    #[test]
    fn remark_implies_hypotheses(th in quarter(8), th1 in quarter(8), th2 in quarter(8), f in form()) {
        let p = custom(th, th1, th2, f);
        for id in TheoremId::ALL {
            let c = check_theorem(id, &p, 3, None).unwrap();
            if c.remark.verdict == Verdict::Holds {
                prop_assert_eq!(c.verdict, Verdict::Holds, "{} at ({}, {}, {}) {:?}", id, th, th1, th2, f);
            }
        }
    }

    // More dissipation never hurts.
    #[test]
    fn dissipation_is_monotone(th in quarter(7), th1 in quarter(8), th2 in quarter(8), f in form()) {
        let lo = custom(th, th1, th2, f);
        let hi = custom(th + 0.25, th1, th2, f);
        for id in [TheoremId::ExistenceA, TheoremId::UniquenessA, TheoremId::DeterminingDissipative] {
            if check_theorem(id, &lo, 3, None).unwrap().verdict == Verdict::Holds {
                prop_assert_eq!(check_theorem(id, &hi, 3, None).unwrap().verdict, Verdict::Holds, "{}", id);
            }
        }
    }

    // Any β in the reported set passes the pointwise check.
    #[test]
    fn set_members_pass(th in quarter(8), th1 in quarter(8), th2 in quarter(8), f in form()) {
        let p = custom(th, th1, th2, f);
        for id in [TheoremId::ExistenceBLocal, TheoremId::UniquenessB, TheoremId::Regularity, TheoremId::AttractorIii] {
            let c = check_theorem(id, &p, 3, None).unwrap();
            let set = c.admissible.unwrap();
            for piece in &set.pieces {
                let b = match (&piece.lo, &piece.hi) {
                    (Some(l), Some(h)) => (l.value + h.value) / 2.0,
                    (Some(l), None) => l.value + 1.0,
                    (None, Some(h)) => h.value - 1.0,
                    (None, None) => 0.0,
                };
                let at = check_theorem(id, &p, 3, Some(b)).unwrap();
                prop_assert_eq!(at.verdict, Verdict::Holds, "{} β={}", id, b);
            }
        }
    }
}
