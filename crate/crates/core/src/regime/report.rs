use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::bounded::FormFamily;
use super::direct::{self, Exps};
use super::exact::{fmt_q, holding, q, rational, solve_1d, to_f64, Bound, Env, IntervalSet, Var, Witness, Q};
use super::remarks::remark_system;
use super::{TheoremId, Verdict};
use crate::error::{Error, Result};
use crate::timestep::ModelParams;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsSummary {
    pub label: String,
    pub theta: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub n: usize,
    pub form: String,
    pub family: FormFamily,
    /// All exponents were read as exact fractions.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct End {
    pub value: f64,
    /// Exact value as a fraction.
    pub exact: String,
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub lo: Option<End>,
    pub hi: Option<End>,
}

/// An admissible set, as text and as pieces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetReport {
    pub text: String,
    pub pieces: Vec<Piece>,
}

impl SetReport {
    pub fn new(set: &IntervalSet, name: &str) -> SetReport {
        let end = |b: &Option<Bound>| {
            b.as_ref().map(|b| End { value: to_f64(&b.at), exact: fmt_q(&b.at), closed: b.closed })
        };
        SetReport {
            text: set.render(name),
            pieces: set.0.iter().map(|i| Piece { lo: end(&i.lo), hi: end(&i.hi) }).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }
}

/// One inequality of a remark system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub witness: Witness,
    pub text: String,
    /// `None` when a free exponent could not be fixed (empty admissible set).
    pub holds: Option<bool>,
    /// Left side minus right side.
    pub slack: Option<f64>,
    /// Inexact inputs put the slack within 1e-12 of zero.
    pub boundary: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RemarkCheck {
    pub verdict: Verdict,
    /// Selector values for which the system holds.
    pub witnesses: Vec<Witness>,
    /// Admissible set of the free exponent, when there is one.
    pub set: Option<SetReport>,
    /// Where the slacks were evaluated, e.g. `β = 3/2`.
    pub evaluated_at: Option<String>,
    pub inequalities: Vec<InequalityReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub theorem: TheoremId,
    /// Verdict of the hypotheses themselves.
    pub verdict: Verdict,
    pub parameter: Option<String>,
    /// Value supplied for the parameter, if any.
    pub given: Option<f64>,
    pub admissible: Option<SetReport>,
    pub witnesses: Vec<Witness>,
    /// Extra quantities (`p`, a working `(σ1, σ2)`, the `β` used, ...).
    pub details: BTreeMap<String, String>,
    /// Verdict and slacks of the closed-form system.
    pub remark: RemarkCheck,
}

/// One column of the summary tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub model: String,
    pub a: String,
    pub b: String,
    pub gamma: String,
    pub p: String,
    pub local: String,
    pub uniqueness: String,
    pub regularity: String,
    /// The caption's `max{−θ2 − 1/2, θ2 + 1/2, n/2}` for the NS-α-like family, verbatim.
    pub gamma_caption: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub params: ParamsSummary,
    pub verdicts: BTreeMap<TheoremId, TheoremCheck>,
    pub table: TableRow,
}

struct Ctx {
    e: Exps,
    env: Env,
    exact: bool,
}

fn ctx(params: &ModelParams, n: usize) -> Result<Ctx> {
    if n == 0 {
        return Err(Error::Config("dimension must be positive".into()));
    }
    for (name, v) in [("theta", params.theta), ("theta1", params.theta1), ("theta2", params.theta2)] {
        if !v.is_finite() {
            return Err(Error::Config(format!("{name} must be finite")));
        }
    }
    params.selector.form.validate()?;
    let (t, e0) = rational(params.theta);
    let (t1, e1) = rational(params.theta1);
    let (t2, e2) = rational(params.theta2);
    let env = Env::new().with(Var::Theta, t.clone()).with(Var::Theta1, t1.clone()).with(Var::Theta2, t2.clone());
    let family = FormFamily::of(params.selector.form);
    Ok(Ctx { e: Exps { theta: t, theta1: t1, theta2: t2, n, family }, env, exact: e0 && e1 && e2 })
}

fn remark_var(id: TheoremId) -> Option<Var> {
    match id {
        TheoremId::ExistenceA => Some(Var::Gamma),
        TheoremId::ExistenceBLocal | TheoremId::UniquenessB | TheoremId::Regularity => Some(Var::Beta),
        TheoremId::DeterminingNondissipative => Some(Var::Alpha),
        _ => None,
    }
}

fn not_applicable() -> RemarkCheck {
    RemarkCheck { verdict: Verdict::NotApplicable, witnesses: vec![], set: None, evaluated_at: None, inequalities: vec![] }
}

fn remark_check(id: TheoremId, c: &Ctx, given: Option<&Q>, fixed_beta: Option<&Q>) -> RemarkCheck {
    let dnf = remark_system(id, c.e.family, c.e.n);
    let mut env = c.env.clone();
    if let Some(b) = fixed_beta {
        env.set(Var::Beta, b.clone());
    }
    let var = remark_var(id);
    let (verdict, witnesses, set, at) = match (var, given) {
        (Some(v), None) => {
            let (set, per) = solve_1d(&dnf, &env, v);
            let w: Vec<Witness> = per.iter().map(|p| p.0).collect();
            let sample = set.sample();
            let name = v.symbol();
            if let Some(s) = &sample {
                env.set(v, s.clone());
            }
            let at = sample.map(|s| format!("{name} = {}", fmt_q(&s)));
            (Verdict::from_bool(!set.is_empty()), w, Some(SetReport::new(&set, name)), at)
        }
        (Some(v), Some(x)) => {
            env.set(v, x.clone());
            let w = holding(&dnf, &env);
            (Verdict::from_bool(!w.is_empty()), w, None, Some(format!("{} = {}", v.symbol(), fmt_q(x))))
        }
        (None, _) => {
            let w = holding(&dnf, &env);
            (Verdict::from_bool(!w.is_empty()), w, None, None)
        }
    };
    let mut inequalities = vec![];
    for clause in &dnf {
        for atom in &clause.atoms {
            let value = atom.lhs().eval(&env);
            let slack = value.as_ref().map(to_f64);
            inequalities.push(InequalityReport {
                witness: clause.witness,
                text: atom.render(),
                holds: atom.holds(&env),
                slack,
                boundary: !c.exact && slack.is_some_and(|s| s.abs() <= 1e-12),
            });
        }
    }
    RemarkCheck { verdict, witnesses, set, evaluated_at: at, inequalities }
}

fn dedup(mut w: Vec<Witness>) -> Vec<Witness> {
    w.sort();
    w.dedup();
    w
}

fn set_verdict(set: &IntervalSet, given: Option<&Q>) -> Verdict {
    match given {
        Some(x) => Verdict::from_bool(set.contains(x)),
        None => Verdict::from_bool(!set.is_empty()),
    }
}

fn point_text(p: &(Q, Q)) -> String {
    format!("({}, {})", fmt_q(&p.0), fmt_q(&p.1))
}

/// Evaluate one theorem for a model in dimension `n`. `beta` fixes the
/// parameter of the β-parameterized theorems (for the nondissipative
/// determining-modes theorem it fixes `β` and the admissible `α` is solved
/// for); without it the admissible set is returned.
pub fn check_theorem(id: TheoremId, params: &ModelParams, n: usize, beta: Option<f64>) -> Result<TheoremCheck> {
    let c = ctx(params, n)?;
    let e = &c.e;
    let given_q = beta.map(|b| rational(b).0);
    let mut details = BTreeMap::new();
    let mut out = TheoremCheck {
        theorem: id,
        verdict: Verdict::Fails,
        parameter: id.parameter().map(str::to_string),
        given: None,
        admissible: None,
        witnesses: vec![],
        details: BTreeMap::new(),
        remark: not_applicable(),
    };
    let beta_param = matches!(
        id,
        TheoremId::ExistenceBLocal | TheoremId::UniquenessB | TheoremId::Regularity | TheoremId::AttractorIii
    );
    if beta_param {
        out.given = beta;
    }
    match id {
        TheoremId::ExistenceA => {
            let r = direct::existence_a(e);
            out.verdict = Verdict::from_bool(r.holds);
            out.admissible = Some(SetReport::new(&r.gamma_set, "γ"));
            out.witnesses = dedup(r.witnesses.clone());
            details.insert("a".into(), fmt_q(&r.a));
            details.insert("b".into(), fmt_q(&r.b));
            details.insert("extra-triple".into(), r.extra_triple.to_string());
            if let Some(p) = &r.p {
                details.insert("p".into(), fmt_q(p));
            }
            if let Some(g) = &r.p_gamma {
                details.insert("p-at-gamma".into(), fmt_q(g));
            }
            if let Some(s) = &r.sigma_sum {
                details.insert("sigma-sum".into(), fmt_q(s));
            }
            out.remark = remark_check(id, &c, None, None);
        }
        TheoremId::ExistenceBLocal | TheoremId::UniquenessB | TheoremId::Regularity | TheoremId::AttractorIii => {
            let (set, w) = match id {
                TheoremId::ExistenceBLocal => direct::local_existence(e),
                TheoremId::UniquenessB => direct::uniqueness_b(e),
                TheoremId::Regularity => direct::regularity(e),
                _ => direct::attractor_iii(e),
            };
            out.verdict = set_verdict(&set, given_q.as_ref());
            out.admissible = Some(SetReport::new(&set, "β"));
            out.witnesses = dedup(w);
            out.remark = if id == TheoremId::AttractorIii {
                remark_check(id, &c, None, None)
            } else {
                remark_check(id, &c, given_q.as_ref(), None)
            };
        }
        TheoremId::UniquenessA => {
            let r = direct::uniqueness_a(e);
            out.verdict = Verdict::from_bool(r.is_some());
            if let Some((p, w)) = &r {
                details.insert("sigma".into(), point_text(p));
                out.witnesses = vec![*w];
            }
            out.remark = remark_check(id, &c, None, None);
        }
        TheoremId::AttractorCorollary => {
            out.verdict = Verdict::from_bool(direct::attractor_corollary(e));
            details.insert("uniqueness-a".into(), direct::uniqueness_a(e).is_some().to_string());
            details.insert("extra-triple".into(), e.extra_triple().to_string());
            details.insert("attractor-iii".into(), (!direct::attractor_iii(e).0.is_empty()).to_string());
            out.remark = remark_check(id, &c, None, None);
        }
        TheoremId::DeterminingDissipative => {
            if e.theta.is_positive() {
                let r = direct::determining_dissipative(e);
                out.verdict = Verdict::from_bool(r.is_some());
                if let Some((p, w)) = &r {
                    details.insert("sigma".into(), point_text(p));
                    out.witnesses = vec![*w];
                }
                details.insert("beta".into(), fmt_q(&(&e.theta - &e.theta2)));
                out.remark = remark_check(id, &c, None, None);
            } else {
                out.verdict = Verdict::NotApplicable;
            }
        }
        TheoremId::DeterminingNondissipative => {
            if e.theta.is_zero() {
                let b = given_q.clone().unwrap_or_else(|| -e.theta2.clone());
                let (set, w) = direct::determining_nondissipative(e, &b);
                out.verdict = Verdict::from_bool(!set.is_empty());
                out.admissible = Some(SetReport::new(&set, "α"));
                out.witnesses = dedup(w);
                details.insert("beta".into(), fmt_q(&b));
                if let Some(lo) = set.inf().filter(|lo| lo.closed) {
                    details.insert("alpha-min".into(), fmt_q(&lo.at));
                }
                out.remark = remark_check(id, &c, None, Some(&b));
            } else {
                out.verdict = Verdict::NotApplicable;
            }
        }
    }
    out.details = details;
    Ok(out)
}

fn gamma_text(set: &IntervalSet) -> String {
    match set.inf() {
        None if set.is_empty() => "none".into(),
        None => "-∞".into(),
        Some(b) if b.closed => fmt_q(&b.at),
        Some(b) => format!("{}+ε", fmt_q(&b.at)),
    }
}

fn regularity_text(set: &IntervalSet) -> String {
    if set.is_empty() {
        return "none".into();
    }
    match set.sup() {
        Some(b) => format!("β {} {}", if b.closed { "≤" } else { "<" }, fmt_q(&b.at)),
        None => set.render("β"),
    }
}

/// The columns of the existence, uniqueness and regularity tables.
pub fn table_row(params: &ModelParams, n: usize) -> Result<TableRow> {
    let c = ctx(params, n)?;
    let e = &c.e;
    let ex = direct::existence_a(e);
    let gamma_caption = params.label.starts_with("NS-α-like").then(|| {
        let cands = [-e.theta2.clone() - q(1, 2), e.theta2.clone() + q(1, 2), q(n as i64, 2)];
        fmt_q(cands.iter().max().expect("three candidates"))
    });
    Ok(TableRow {
        model: params.label.clone(),
        a: fmt_q(&ex.a),
        b: fmt_q(&ex.b),
        gamma: gamma_text(&ex.gamma_set),
        p: ex.p.as_ref().map(fmt_q).unwrap_or_else(|| "none".into()),
        local: direct::local_existence(e).0.render("β"),
        uniqueness: direct::uniqueness_set(e).render("β"),
        regularity: regularity_text(&direct::regularity(e).0),
        gamma_caption,
    })
}

/// Every theorem for one model.
pub fn full_report(params: &ModelParams, n: usize) -> Result<RegimeReport> {
    let c = ctx(params, n)?;
    let mut verdicts = BTreeMap::new();
    for id in TheoremId::ALL {
        verdicts.insert(id, check_theorem(id, params, n, None)?);
    }
    Ok(RegimeReport {
        params: ParamsSummary {
            label: params.label.clone(),
            theta: params.theta,
            theta1: params.theta1,
            theta2: params.theta2,
            n,
            form: params.selector.form.name(),
            family: c.e.family,
            exact: c.exact,
        },
        verdicts,
        table: table_row(params, n)?,
    })
}

fn width(s: &str) -> usize {
    s.chars().count()
}

/// Aligned text in the layout of the existence/uniqueness/regularity tables.
pub fn render_tables(rows: &[TableRow]) -> String {
    let mut lines: Vec<(String, Vec<String>)> = vec![
        ("Model".into(), rows.iter().map(|r| r.model.clone()).collect()),
        ("a, b".into(), rows.iter().map(|r| format!("{}, {}", r.a, r.b)).collect()),
        ("γ, p".into(), rows.iter().map(|r| format!("{}, {}", r.gamma, r.p)).collect()),
        ("Local".into(), rows.iter().map(|r| r.local.clone()).collect()),
        ("Uniqueness".into(), rows.iter().map(|r| r.uniqueness.clone()).collect()),
        ("Regularity".into(), rows.iter().map(|r| r.regularity.clone()).collect()),
    ];
    if rows.iter().any(|r| r.gamma_caption.is_some()) {
        lines.push((
            "γ caption".into(),
            rows.iter().map(|r| r.gamma_caption.clone().unwrap_or_else(|| "-".into())).collect(),
        ));
    }
    let head = lines.iter().map(|l| width(&l.0)).max().unwrap_or(0);
    let cols: Vec<usize> =
        (0..rows.len()).map(|j| lines.iter().map(|l| width(&l.1[j])).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for (i, (name, cells)) in lines.iter().enumerate() {
        out.push_str(name);
        out.push_str(&" ".repeat(head - width(name)));
        for (j, cell) in cells.iter().enumerate() {
            out.push_str(" | ");
            out.push_str(cell);
            out.push_str(&" ".repeat(cols[j] - width(cell)));
        }
        out.push_str(" |\n");
        if i == 0 {
            out.push_str(&"-".repeat(head));
            for w in &cols {
                out.push_str("-+-");
                out.push_str(&"-".repeat(*w));
            }
            out.push_str("-+\n");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regime::preset;

    #[test]
    fn uniqueness_beta_examples() {
        let nse = preset("NSE").unwrap();
        let c = check_theorem(TheoremId::UniquenessB, &nse, 3, None).unwrap();
        assert_eq!(c.admissible.unwrap().text, "β > 3/2");
        let c = check_theorem(TheoremId::UniquenessB, &nse, 3, Some(1.5)).unwrap();
        assert_eq!(c.verdict, Verdict::Fails);
        let c = check_theorem(TheoremId::UniquenessB, &nse, 3, Some(1.75)).unwrap();
        assert_eq!(c.verdict, Verdict::Holds);
    }

    #[test]
    fn inequalities_carry_slack() {
        let p = preset("Leray-α").unwrap();
        let c = check_theorem(TheoremId::UniquenessA, &p, 3, None).unwrap();
        assert!(!c.remark.inequalities.is_empty());
        assert!(c.remark.inequalities.iter().all(|i| i.slack.is_some()));
        // 2θ + 2θ1 + θ2 > 5/2 has slack 3/2
        let lead = c.remark.inequalities.iter().find(|i| i.text == "2θ + 2θ1 + θ2 > 5/2").unwrap();
        assert_eq!(lead.slack, Some(1.5));
    }

    #[test]
    fn nondissipative_only_for_theta_zero() {
        let p = preset("NSE").unwrap();
        let c = check_theorem(TheoremId::DeterminingNondissipative, &p, 3, None).unwrap();
        assert_eq!(c.verdict, Verdict::NotApplicable);
        let p = preset("NSV").unwrap();
        let c = check_theorem(TheoremId::DeterminingDissipative, &p, 3, None).unwrap();
        assert_eq!(c.verdict, Verdict::NotApplicable);
    }
}
