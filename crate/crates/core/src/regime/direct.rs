//! Theorem hypotheses evaluated directly: each hypothesis asks for
//! boundedness of `b(u,v,w) = b̄(Mu, Nv, w)` on some triple of spaces, and
//! since `M` and `N` gain `2θ1` and `2θ2` derivatives this becomes a
//! boundedness question for `b̄` at shifted exponents.
//!
//! The closed-form remark systems are sufficient conditions derived from
//! the same hypotheses; the sets computed here are the sharper ones and are
//! what the summary tables report.

use num_traits::{Signed, Zero};

use super::bounded::{bounded_clauses, FormFamily};
use super::exact::{
    feasible_2d, minimize_2d, q, qi, solve_1d, Atom, Dnf, Env, Interval, IntervalSet, Lin, Var, Witness, Q,
};

/// Exponents of a model in exact form.
#[derive(Clone, Debug, PartialEq)]
pub struct Exps {
    pub theta: Q,
    pub theta1: Q,
    pub theta2: Q,
    pub n: usize,
    pub family: FormFamily,
}

/// Lower clamp for existential searches. Boundedness needs pairwise sums
/// of exponents bounded below, so nothing is lost this far out.
const CLAMP: i64 = 1000;

fn k(v: &Q) -> Lin {
    Lin::constant(v.clone())
}

fn var(v: Var) -> Lin {
    Lin::var(v)
}

impl Exps {
    /// `b` bounded on `V^a × V^b × V^c`.
    pub fn composed(&self, a: Lin, b: Lin, c: Lin) -> Dnf {
        let s = [a + self.theta1.clone() * qi(2), b + self.theta2.clone() * qi(2), c];
        bounded_clauses(self.family, &s, self.n)
    }

    fn with(dnf: Dnf, extra: &[Atom]) -> Dnf {
        dnf.into_iter().map(|c| c.and(extra.iter().cloned())).collect()
    }

    /// Right-hand side of the pairwise condition that survives when the
    /// third exponent is taken large: `s1 + s2 ≥ r`.
    fn far_pair(&self) -> Q {
        match self.family {
            FormFamily::B13 => qi(0),
            _ => qi(1),
        }
    }

    fn ct(&self) -> Q {
        &self.theta - &self.theta2
    }

    /// Condition iii) of global existence (and of the attractor corollary):
    /// a bounded triple with first two exponents below `θ − θ2` and the
    /// third as large as needed. Reduces to `2θ + 2θ1 > r`.
    pub fn extra_triple(&self) -> bool {
        (&self.theta * qi(2) + &self.theta1 * qi(2)) > self.far_pair()
    }
}

/// Global existence of weak solutions.
#[derive(Clone, Debug, PartialEq)]
pub struct ExistenceA {
    pub holds: bool,
    /// `u ∈ L^∞(V^a) ∩ L^2(V^b)`.
    pub a: Q,
    pub b: Q,
    /// Admissible `γ` with the first two exponents at `θ − θ2`.
    pub gamma_set: IntervalSet,
    /// The `p` in `u̇ ∈ L^p(V^{-γ})` at the smallest admissible `γ`.
    pub p: Option<Q>,
    /// `γ` at which `p` was computed.
    pub p_gamma: Option<Q>,
    /// Smallest `σ1 + σ2` with `b` bounded at `(σ1, σ2, p_gamma)`.
    pub sigma_sum: Option<Q>,
    pub extra_triple: bool,
    pub witnesses: Vec<Witness>,
}

pub fn existence_a(e: &Exps) -> ExistenceA {
    let ct = e.ct();
    let domain = [
        Atom::ge(var(Var::Gamma) - (e.theta.clone() + &e.theta2)),
        Atom::gt(var(Var::Gamma) - e.theta2.clone()),
    ];
    let dnf = Exps::with(e.composed(k(&ct), k(&ct), var(Var::Gamma)), &domain);
    let (gamma_set, per) = solve_1d(&dnf, &Env::new(), Var::Gamma);
    let witnesses = per.iter().map(|p| p.0).collect();
    let extra = e.extra_triple();
    let mut out = ExistenceA {
        holds: !gamma_set.is_empty() && extra,
        a: -e.theta2.clone(),
        b: ct.clone(),
        gamma_set: gamma_set.clone(),
        p: None,
        p_gamma: None,
        sigma_sum: None,
        extra_triple: extra,
        witnesses,
    };
    let Some(lo) = gamma_set.inf() else {
        if !gamma_set.is_empty() && e.theta.is_zero() {
            out.p = Some(qi(2));
        }
        return out;
    };
    // the infimum is attained unless the set is open there; step inside if so
    let g = if lo.closed { lo.at.clone() } else { lo.at.clone() + q(1, 1000) };
    out.p_gamma = Some(g.clone());
    if e.theta.is_zero() {
        out.p = Some(qi(2));
        return out;
    }
    let box_atoms = [
        Atom::ge(var(Var::X) + e.theta2.clone()),
        Atom::ge(k(&ct) - var(Var::X)),
        Atom::ge(var(Var::Y) + e.theta2.clone()),
        Atom::ge(k(&ct) - var(Var::Y)),
    ];
    let dnf = Exps::with(e.composed(var(Var::X), var(Var::Y), k(&g)), &box_atoms);
    if let Some((s, _, _)) = minimize_2d(&dnf, &Env::new(), &(var(Var::X) + var(Var::Y))) {
        let den = &s + &e.theta2 * qi(2);
        let p = if den.is_positive() { (qi(2) * &e.theta / den).min(qi(2)) } else { qi(2) };
        out.sigma_sum = Some(s);
        out.p = Some(p);
    }
    out
}

/// `b : V^β × V^β × V^{θ−β}` bounded, `β ≥ −θ2`. With `extra`, also the
/// second triple needed for local existence.
fn beta_diagonal(e: &Exps, extra: bool) -> Dnf {
    let b = var(Var::Beta);
    let mut atoms = vec![Atom::ge(b.clone() + e.theta2.clone())];
    if extra {
        let lhs = (b.clone() + e.theta.clone() + e.theta1.clone() + e.theta2.clone()) * 2 - e.far_pair();
        atoms.push(Atom::gt(lhs));
    }
    Exps::with(e.composed(b.clone(), b.clone(), k(&e.theta) - b), &atoms)
}

/// Admissible `β` for local existence in `L^∞(V^β) ∩ L^2(V^{β+θ})`.
pub fn local_existence(e: &Exps) -> (IntervalSet, Vec<Witness>) {
    let (s, per) = solve_1d(&beta_diagonal(e, true), &Env::new(), Var::Beta);
    (s, per.into_iter().map(|p| p.0).collect())
}

/// Part b) of the uniqueness theorem: continuity in `V^β`.
pub fn uniqueness_b(e: &Exps) -> (IntervalSet, Vec<Witness>) {
    let (s, per) = solve_1d(&beta_diagonal(e, false), &Env::new(), Var::Beta);
    (s, per.into_iter().map(|p| p.0).collect())
}

/// Part a): continuity in `V^{-θ2}` if `b : V^{σ1} × V^{θ−θ2} × V^{σ2}` is
/// bounded for some `σ1 ≤ θ−θ2`, `σ2 ≤ θ+θ2`, `σ1 + σ2 ≤ θ`. Returns a
/// point `(σ1, σ2)` that works.
pub fn uniqueness_a(e: &Exps) -> Option<((Q, Q), Witness)> {
    let region = [
        Atom::ge(k(&e.ct()) - var(Var::X)),
        Atom::ge(k(&(e.theta.clone() + &e.theta2)) - var(Var::Y)),
        Atom::ge(k(&e.theta) - var(Var::X) - var(Var::Y)),
        Atom::ge(var(Var::X) + qi(CLAMP)),
        Atom::ge(var(Var::Y) + qi(CLAMP)),
    ];
    let dnf = Exps::with(e.composed(var(Var::X), k(&e.ct()), var(Var::Y)), &region);
    feasible_2d(&dnf, &Env::new())
}

/// `β` for which the uniqueness table applies: part b) for `β ≥ −θ2`, and
/// the single point `β = −θ2` from part a).
pub fn uniqueness_set(e: &Exps) -> IntervalSet {
    let (b, _) = uniqueness_b(e);
    if uniqueness_a(e).is_some() {
        b.union(&IntervalSet(vec![Interval::point(-e.theta2.clone())]))
    } else {
        b
    }
}

/// Regularity for `β > −θ2`: `b : V^α × V^α × V^{θ−β}` bounded with
/// `α = min{β, θ−θ2}`.
pub fn regularity(e: &Exps) -> (IntervalSet, Vec<Witness>) {
    let b = var(Var::Beta);
    let ct = e.ct();
    let low = Exps::with(
        e.composed(b.clone(), b.clone(), k(&e.theta) - b.clone()),
        &[Atom::gt(b.clone() + e.theta2.clone()), Atom::ge(k(&ct) - b.clone())],
    );
    let high = Exps::with(
        e.composed(k(&ct), k(&ct), k(&e.theta) - b.clone()),
        &[Atom::gt(b.clone() + e.theta2.clone()), Atom::gt(b - ct.clone())],
    );
    let mut dnf = low;
    dnf.extend(high);
    let (s, per) = solve_1d(&dnf, &Env::new(), Var::Beta);
    let mut w: Vec<Witness> = per.into_iter().map(|p| p.0).collect();
    w.sort();
    w.dedup();
    (s, w)
}

/// Condition (iii) of the attractor theorem: some `β ∈ [−θ2, θ−θ2]` with
/// `b : V^β × V^β × V^{θ−β}` bounded.
pub fn attractor_iii(e: &Exps) -> (IntervalSet, Vec<Witness>) {
    let b = var(Var::Beta);
    let dnf = Exps::with(beta_diagonal(e, false), &[Atom::ge(k(&e.ct()) - b)]);
    let (s, per) = solve_1d(&dnf, &Env::new(), Var::Beta);
    (s, per.into_iter().map(|p| p.0).collect())
}

/// Global attractor: uniqueness a), the extra triple, and attractor (iii).
pub fn attractor_corollary(e: &Exps) -> bool {
    uniqueness_a(e).is_some() && e.extra_triple() && !attractor_iii(e).0.is_empty()
}

/// Determining modes with `θ > 0`: `b : V^{σ1} × V^{θ−θ2} × V^{σ2}` bounded
/// for some `σ1 ≤ θ−θ2`, `σ2 ≤ θ+θ2` with `σ1 + σ2 ≤ θ/2`, which keeps the
/// time exponent `p = θ/(θ−σ1−σ2)` at most 2 so that the energy bound
/// controls `ε`.
pub fn determining_dissipative(e: &Exps) -> Option<((Q, Q), Witness)> {
    if !e.theta.is_positive() {
        return None;
    }
    let region = [
        Atom::ge(k(&e.ct()) - var(Var::X)),
        Atom::ge(k(&(e.theta.clone() + &e.theta2)) - var(Var::Y)),
        Atom::ge(k(&(e.theta.clone() / qi(2))) - var(Var::X) - var(Var::Y)),
        Atom::ge(var(Var::X) + qi(CLAMP)),
        Atom::ge(var(Var::Y) + qi(CLAMP)),
    ];
    let dnf = Exps::with(e.composed(var(Var::X), k(&e.ct()), var(Var::Y)), &region);
    feasible_2d(&dnf, &Env::new())
}

/// Determining modes with `θ = 0`: admissible `α ≤ −θ2` with
/// `b : V^α × V^β × V^{θ2}` bounded, at the given `β ≥ −θ2`.
pub fn determining_nondissipative(e: &Exps, beta: &Q) -> (IntervalSet, Vec<Witness>) {
    if !e.theta.is_zero() || beta < &-e.theta2.clone() {
        return (IntervalSet::empty(), vec![]);
    }
    let a = var(Var::Alpha);
    let dnf = Exps::with(
        e.composed(a.clone(), k(beta), k(&e.theta2)),
        &[Atom::ge(-a - e.theta2.clone())],
    );
    let (s, per) = solve_1d(&dnf, &Env::new(), Var::Alpha);
    (s, per.into_iter().map(|p| p.0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(t: (i64, i64, i64), fam: FormFamily) -> Exps {
        Exps { theta: qi(t.0), theta1: qi(t.1), theta2: qi(t.2), n: 3, family: fam }
    }

    #[test]
    fn nse_existence_row() {
        let e = ex((1, 0, 0), FormFamily::B13);
        let r = existence_a(&e);
        assert!(r.holds);
        assert_eq!((r.a.clone(), r.b.clone()), (qi(0), qi(1)));
        let g = r.gamma_set.inf().unwrap();
        assert_eq!(g.at, qi(1));
        assert!(g.closed);
        assert_eq!(r.p, Some(q(4, 3)));
    }

    #[test]
    fn nse_local_and_regularity() {
        let e = ex((1, 0, 0), FormFamily::B13);
        assert_eq!(local_existence(&e).0.render("β"), "β > 3/2");
        assert!(regularity(&e).0.is_empty());
    }

    #[test]
    fn ml_alpha_regularity_closed_by_integer_point() {
        let e = ex((1, 0, 1), FormFamily::B13);
        let s = regularity(&e).0;
        let top = s.sup().unwrap();
        assert_eq!(top.at, q(1, 2));
        assert!(top.closed);
    }

    #[test]
    fn nsv_alpha_window() {
        let e = ex((0, 1, 1), FormFamily::B13);
        let (s, _) = determining_nondissipative(&e, &qi(-1));
        assert_eq!(s.render("α"), "-3/2 ≤ α ≤ -1");
    }
}
