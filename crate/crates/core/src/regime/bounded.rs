//! Sufficient conditions for boundedness of the trilinear forms and for
//! pointwise multiplication in Sobolev spaces.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::exact::{fmt_q, q, qi, rational, to_f64, Atom, Clause, Env, Lin, Relaxation, Witness, Q};
use crate::bilinear::Form;
use crate::error::{Error, Result};

/// The three groups of forms that share their boundedness conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormFamily {
    /// `b̄1` and `b̄3`.
    B13,
    B2,
    /// `b̄4` and the general `b̄5`.
    B45,
}

impl FormFamily {
    pub fn of(form: Form) -> FormFamily {
        match form {
            Form::B1 | Form::B5(1, 1, 1) => FormFamily::B13,
            Form::B2 => FormFamily::B2,
            Form::B5(..) => FormFamily::B45,
        }
    }

    pub fn parse(s: &str) -> Result<FormFamily> {
        match s.trim().to_ascii_uppercase().as_str() {
            "B1" | "B3" | "B13" => Ok(FormFamily::B13),
            "B2" => Ok(FormFamily::B2),
            "B4" | "B5" | "B45" => Ok(FormFamily::B45),
            _ => Err(Error::Config(format!("unknown form family `{s}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FormFamily::B13 => "B1/B3",
            FormFamily::B2 => "B2",
            FormFamily::B45 => "B4/B5",
        }
    }
}

/// `(n+2)/2`.
pub fn critical(n: usize) -> Q {
    q(n as i64 + 2, 2)
}

fn w(k: Option<u8>, relaxation: Relaxation) -> Witness {
    Witness { k, l: None, relaxation }
}

/// Boundedness of `b̄ : V^{s1} × V^{s2} × V^{s3} → ℝ` as a disjunction of
/// linear clauses in whatever variables the `s_i` contain.
///
/// Each clause records `k` (where the family has one) and which relaxation
/// of the strict sum condition it uses. Clauses with an integer relaxation
/// carry the sum as an equality: above the threshold the strict clause with
/// the same pairwise conditions already applies.
pub fn bounded_clauses(family: FormFamily, s: &[Lin; 3], n: usize) -> Vec<Clause> {
    let c = critical(n);
    let sum = s[0].clone() + s[1].clone() + s[2].clone() - c;
    let pair = |i: usize, j: usize, r: Q| Atom::ge(s[i].clone() + s[j].clone() - r);
    let at_least = |i: usize, r: Q| Atom::ge(s[i].clone() - r);
    let ks: Vec<Option<u8>> = match family {
        FormFamily::B2 => vec![None],
        _ => vec![Some(0), Some(1)],
    };
    let mut out = vec![];
    for &k in &ks {
        let kq = qi(k.unwrap_or(0) as i64);
        let pairwise = match family {
            FormFamily::B13 => vec![pair(1, 2, qi(1)), pair(0, 2, kq.clone()), pair(0, 1, qi(1) - &kq)],
            FormFamily::B2 => vec![pair(1, 2, qi(0)), pair(0, 2, qi(1)), pair(0, 1, qi(1))],
            FormFamily::B45 => vec![pair(1, 2, qi(1)), pair(0, 2, qi(1)), pair(0, 1, qi(1))],
        };
        out.push(Clause::new(w(k, Relaxation::None), pairwise.clone()).and([Atom::gt(sum.clone())]));
        for i in 0..3 {
            out.push(
                Clause::new(w(k, Relaxation::NonPositiveInteger(i as u8 + 1)), pairwise.clone())
                    .and([Atom::eq(sum.clone()), Atom::NonPosInt(s[i].clone())]),
            );
        }
    }
    // endpoint relaxations
    let ends: Vec<(Option<u8>, [Q; 3])> = match family {
        FormFamily::B13 => vec![(Some(0), [qi(0), qi(0), qi(1)]), (Some(1), [qi(0), qi(1), qi(0)])],
        FormFamily::B2 => vec![(None, [qi(1), qi(0), qi(0)])],
        FormFamily::B45 => vec![(Some(0), [qi(1), qi(0), qi(1)]), (Some(1), [qi(1), qi(1), qi(0)])],
    };
    for (k, lo) in ends {
        let atoms = (0..3).map(|i| at_least(i, lo[i].clone())).chain([Atom::ge(sum.clone())]).collect();
        out.push(Clause::new(w(k, Relaxation::Endpoint), atoms));
    }
    out
}

/// Result of a boundedness query at a point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Boundedness {
    pub bounded: bool,
    /// Every `(k, relaxation)` that works.
    pub witnesses: Vec<Witness>,
    /// `σ1 + σ2 + σ3 − (n+2)/2`.
    pub sum_slack: f64,
    /// Inputs were not all simple fractions and some condition sits within 1e-12 of its threshold.
    pub boundary: bool,
}

/// Whether `b̄ : V^{σ1} × V^{σ2} × V^{σ3} → ℝ` is bounded for the given
/// family, by the sufficient conditions with their relaxations.
pub fn bform_bounded(family: FormFamily, sigma: [f64; 3], n: usize) -> Boundedness {
    let mut exact = true;
    let s: [Q; 3] = std::array::from_fn(|i| {
        let (v, e) = rational(sigma[i]);
        exact &= e;
        v
    });
    bform_bounded_q(family, &s, n, exact)
}

pub fn bform_bounded_q(family: FormFamily, s: &[Q; 3], n: usize, exact: bool) -> Boundedness {
    let lins: [Lin; 3] = std::array::from_fn(|i| Lin::constant(s[i].clone()));
    let clauses = bounded_clauses(family, &lins, n);
    let env = Env::new();
    let mut witnesses: Vec<Witness> =
        clauses.iter().filter(|c| c.holds(&env) == Some(true)).map(|c| c.witness).collect();
    witnesses.sort();
    witnesses.dedup();
    let sum = &s[0] + &s[1] + &s[2] - critical(n);
    let boundary = !exact && near_any(&clauses);
    Boundedness { bounded: !witnesses.is_empty(), witnesses, sum_slack: to_f64(&sum), boundary }
}

fn near_any(clauses: &[Clause]) -> bool {
    clauses.iter().flat_map(|c| &c.atoms).any(|a| to_f64(&a.lhs().c).abs() <= 1e-12)
}

/// One condition of the multiplication lemma with its slack.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub text: String,
    pub holds: bool,
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultCheck {
    pub admissible: bool,
    /// The interchanged strictness (allowed for `s ∈ ℕ₀`) was needed.
    pub interchanged: bool,
    pub conditions: Vec<Condition>,
    pub boundary: bool,
}

/// Whether pointwise multiplication extends to `H^{s1} ⊗ H^{s2} → H^s`:
/// `s1 + s2 ≥ 0`, `s_i ≥ s`, `s1 + s2 − s > n/2`, where for `s ∈ ℕ₀` the
/// strictness of the last two may be swapped.
pub fn sobolev_mult_admissible(s1: f64, s2: f64, s: f64, n: usize) -> MultCheck {
    let (a, ea) = rational(s1);
    let (b, eb) = rational(s2);
    let (t, et) = rational(s);
    let half_n = q(n as i64, 2);
    let sum = &a + &b;
    let d1 = &a - &t;
    let d2 = &b - &t;
    let top = &sum - &t - &half_n;
    let natural = t.is_integer() && !t.is_negative();
    let plain = !sum.is_negative() && !d1.is_negative() && !d2.is_negative() && top.is_positive();
    let swapped = natural && !sum.is_negative() && d1.is_positive() && d2.is_positive() && !top.is_negative();
    let cond = |text: String, holds: bool, v: &Q| Condition { text, holds, slack: to_f64(v) };
    let (r1, r2) = if !plain && swapped { (">", "≥") } else { ("≥", ">") };
    let conditions = vec![
        cond("s1 + s2 ≥ 0".into(), !sum.is_negative(), &sum),
        cond(format!("s1 {r1} s"), if r1 == ">" { d1.is_positive() } else { !d1.is_negative() }, &d1),
        cond(format!("s2 {r1} s"), if r1 == ">" { d2.is_positive() } else { !d2.is_negative() }, &d2),
        cond(
            format!("s1 + s2 - s {r2} {}", fmt_q(&half_n)),
            if r2 == ">" { top.is_positive() } else { !top.is_negative() },
            &top,
        ),
    ];
    let exact = ea && eb && et;
    let boundary = !exact && [&sum, &d1, &d2, &top].iter().any(|v| to_f64(v).abs() <= 1e-12);
    MultCheck { admissible: plain || swapped, interchanged: !plain && swapped, conditions, boundary }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_lemma_examples() {
        assert!(sobolev_mult_admissible(1.0, 1.0, 0.0, 3).admissible);
        assert!(!sobolev_mult_admissible(1.0, 1.0, 1.0, 3).admissible);
        assert!(sobolev_mult_admissible(0.5, 1.0, 0.0, 2).admissible);
    }

    #[test]
    fn interchange_only_for_natural_targets() {
        // s1 + s2 - s = n/2 exactly, s_i > s
        let c = sobolev_mult_admissible(1.0, 1.0, 0.0, 4);
        assert!(c.admissible && c.interchanged);
        let c = sobolev_mult_admissible(0.5, 0.5, -1.0, 4);
        assert!(!c.admissible);
    }

    #[test]
    fn boundedness_examples() {
        let b = bform_bounded(FormFamily::B13, [1.0, 1.0, 1.0], 3);
        assert!(b.bounded);
        let ks: Vec<_> = b.witnesses.iter().filter(|w| w.relaxation == Relaxation::None).map(|w| w.k).collect();
        assert_eq!(ks, vec![Some(0), Some(1)]);

        let b = bform_bounded(FormFamily::B2, [2.0, 0.0, 0.0], 2);
        assert!(b.bounded);
        assert!(b.witnesses.iter().any(|w| w.relaxation == Relaxation::Endpoint));
        assert!(!b.witnesses.iter().any(|w| w.relaxation == Relaxation::None));

        assert!(!bform_bounded(FormFamily::B13, [0.0, 0.0, 1.0], 3).bounded);
    }

    #[test]
    fn integer_relaxation_needs_exact_threshold() {
        // sum = 5/2 exactly with σ1 = 0
        let b = bform_bounded(FormFamily::B13, [0.0, 2.0, 0.5], 3);
        assert!(b.bounded);
        assert!(b.witnesses.iter().any(|w| w.relaxation == Relaxation::NonPositiveInteger(1)));
        // same sum with no integer entry and no endpoint route
        assert!(!bform_bounded(FormFamily::B45, [0.75, 0.75, 1.0], 3).bounded);
    }
}
