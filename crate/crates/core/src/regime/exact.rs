//! Exact linear arithmetic over the model exponents.
//!
//! Every condition the checker handles is a boolean combination of affine
//! inequalities in a handful of variables, so everything here works on
//! [`Lin`] (an affine form) and [`Atom`] (a single comparison).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Floats closer than this to a simple fraction are read as that fraction.
const SNAP_TOL: f64 = 1e-12;
const MAX_DENOM: i128 = 10_000;

/// Read `x` as a rational. Returns the simplest fraction (denominator at
/// most 10⁴) within 1e-12 and `true`, or the exact binary value and `false`.
pub fn rational(x: f64) -> (Q, bool) {
    assert!(x.is_finite(), "non-finite parameter {x}");
    // continued-fraction convergents
    let (mut h0, mut h1): (i128, i128) = (0, 1);
    let (mut k0, mut k1): (i128, i128) = (1, 0);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > MAX_DENOM {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= SNAP_TOL * x.abs().max(1.0) {
            return (BigRational::new(BigInt::from(h1), BigInt::from(k1)), true);
        }
        let frac = r - a;
        if frac == 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    (BigRational::from_float(x).expect("finite"), false)
}

pub fn to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// `3/2`, `-1`, `0`.
pub fn fmt_q(v: &Q) -> String {
    if v.is_integer() {
        v.to_integer().to_string()
    } else if v.denom() <= &BigInt::from(64) {
        format!("{}/{}", v.numer(), v.denom())
    } else {
        format!("{}", to_f64(v))
    }
}

pub fn floor_q(v: &Q) -> BigInt {
    v.numer().div_floor(v.denom())
}

pub fn ceil_q(v: &Q) -> BigInt {
    -((-v.numer()).div_floor(v.denom()))
}

/// Variables that can appear in a condition. `X` and `Y` stand for the
/// auxiliary exponents `σ1`, `σ2` of existential hypotheses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Theta,
    Theta1,
    Theta2,
    Beta,
    Alpha,
    Gamma,
    X,
    Y,
}

pub const NV: usize = 8;

impl Var {
    pub const ALL: [Var; NV] = [Var::Theta, Var::Theta1, Var::Theta2, Var::Beta, Var::Alpha, Var::Gamma, Var::X, Var::Y];

    pub fn symbol(self) -> &'static str {
        match self {
            Var::Theta => "θ",
            Var::Theta1 => "θ1",
            Var::Theta2 => "θ2",
            Var::Beta => "β",
            Var::Alpha => "α",
            Var::Gamma => "γ",
            Var::X => "σ1",
            Var::Y => "σ2",
        }
    }
}

/// `c + Σ a_v v`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lin {
    pub c: Q,
    pub a: [Q; NV],
}

impl Lin {
    pub fn constant(c: Q) -> Lin {
        Lin { c, a: std::array::from_fn(|_| Q::zero()) }
    }

    pub fn var(v: Var) -> Lin {
        let mut l = Lin::constant(Q::zero());
        l.a[v as usize] = Q::one();
        l
    }

    pub fn coef(&self, v: Var) -> &Q {
        &self.a[v as usize]
    }

    pub fn is_const(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }

    /// Substitute every variable that has a value in `env`.
    pub fn subst(&self, env: &Env) -> Lin {
        let mut out = self.clone();
        for v in Var::ALL {
            if let Some(val) = &env.0[v as usize] {
                let a = std::mem::replace(&mut out.a[v as usize], Q::zero());
                out.c += a * val;
            }
        }
        out
    }

    /// Value when every variable with a nonzero coefficient is bound.
    pub fn eval(&self, env: &Env) -> Option<Q> {
        let s = self.subst(env);
        s.is_const().then_some(s.c)
    }

    /// Substitute `v := e`.
    pub fn replace(&self, v: Var, e: &Lin) -> Lin {
        let mut out = self.clone();
        let a = std::mem::replace(&mut out.a[v as usize], Q::zero());
        if a.is_zero() {
            return out;
        }
        out + e.clone() * a
    }

    fn terms(&self) -> String {
        let mut s = String::new();
        for v in Var::ALL {
            let a = &self.a[v as usize];
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let m = a.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if !m.is_one() {
                s.push_str(&fmt_q(&m));
            }
            s.push_str(v.symbol());
        }
        s
    }
}

impl Add for Lin {
    type Output = Lin;
    fn add(mut self, o: Lin) -> Lin {
        self.c += o.c;
        for (x, y) in self.a.iter_mut().zip(o.a) {
            *x += y;
        }
        self
    }
}

impl Sub for Lin {
    type Output = Lin;
    fn sub(self, o: Lin) -> Lin {
        self + (-o)
    }
}

impl Neg for Lin {
    type Output = Lin;
    fn neg(self) -> Lin {
        self * -Q::one()
    }
}

impl Mul<Q> for Lin {
    type Output = Lin;
    fn mul(mut self, k: Q) -> Lin {
        self.c *= &k;
        for x in self.a.iter_mut() {
            *x *= &k;
        }
        self
    }
}

impl Mul<i64> for Lin {
    type Output = Lin;
    fn mul(self, k: i64) -> Lin {
        self * qi(k)
    }
}

impl Add<Q> for Lin {
    type Output = Lin;
    fn add(mut self, k: Q) -> Lin {
        self.c += k;
        self
    }
}

impl Sub<Q> for Lin {
    type Output = Lin;
    fn sub(mut self, k: Q) -> Lin {
        self.c -= k;
        self
    }
}

/// Partial assignment of the variables.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Env(pub [Option<Q>; NV]);

impl Env {
    pub fn new() -> Env {
        Env(std::array::from_fn(|_| None))
    }

    pub fn with(mut self, v: Var, val: Q) -> Env {
        self.0[v as usize] = Some(val);
        self
    }

    pub fn set(&mut self, v: Var, val: Q) {
        self.0[v as usize] = Some(val);
    }

    pub fn get(&self, v: Var) -> Option<&Q> {
        self.0[v as usize].as_ref()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rel {
    Ge,
    Gt,
    Eq,
}

impl Rel {
    fn holds(self, x: &Q) -> bool {
        match self {
            Rel::Ge => !x.is_negative(),
            Rel::Gt => x.is_positive(),
            Rel::Eq => x.is_zero(),
        }
    }
}

/// `lhs rel 0`, or "`lhs` is a non-positive integer".
#[derive(Clone, Debug, PartialEq)]
pub enum Atom {
    Cmp(Lin, Rel),
    NonPosInt(Lin),
}

impl Atom {
    pub fn ge(l: Lin) -> Atom {
        Atom::Cmp(l, Rel::Ge)
    }

    pub fn gt(l: Lin) -> Atom {
        Atom::Cmp(l, Rel::Gt)
    }

    pub fn eq(l: Lin) -> Atom {
        Atom::Cmp(l, Rel::Eq)
    }

    pub fn lhs(&self) -> &Lin {
        match self {
            Atom::Cmp(l, _) | Atom::NonPosInt(l) => l,
        }
    }

    pub fn map(&self, f: impl Fn(&Lin) -> Lin) -> Atom {
        match self {
            Atom::Cmp(l, r) => Atom::Cmp(f(l), *r),
            Atom::NonPosInt(l) => Atom::NonPosInt(f(l)),
        }
    }

    /// `None` while some variable is unbound.
    pub fn holds(&self, env: &Env) -> Option<bool> {
        let v = self.lhs().eval(env)?;
        Some(match self {
            Atom::Cmp(_, r) => r.holds(&v),
            Atom::NonPosInt(_) => v.is_integer() && !v.is_positive(),
        })
    }

    /// Human form with the constant moved to the right: `θ + 2θ1 ≥ 1`.
    pub fn render(&self) -> String {
        let l = self.lhs();
        let terms = l.terms();
        let rhs = fmt_q(&-l.c.clone());
        match self {
            Atom::NonPosInt(_) => format!("{} ∈ ℤ≤0", if l.c.is_zero() { terms } else { format!("{terms} + {}", fmt_q(&l.c)) }),
            Atom::Cmp(_, r) => {
                let op = match r {
                    Rel::Ge => "≥",
                    Rel::Gt => ">",
                    Rel::Eq => "=",
                };
                if terms.is_empty() {
                    format!("{} {op} 0", fmt_q(&l.c))
                } else {
                    format!("{terms} {op} {rhs}")
                }
            }
        }
    }
}

/// Which relaxation of a boundedness statement was used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relaxation {
    /// Strict sum condition.
    None,
    /// Non-strict sum because `σ_i` (1-based) is a non-positive integer.
    NonPositiveInteger(u8),
    /// Non-strict sum through the endpoint conditions.
    Endpoint,
}

/// Which disjunct of a condition holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub k: Option<u8>,
    pub l: Option<u8>,
    pub relaxation: Relaxation,
}

impl Witness {
    pub const PLAIN: Witness = Witness { k: None, l: None, relaxation: Relaxation::None };
}

/// A conjunction, labelled with the disjunct it represents.
#[derive(Clone, Debug, PartialEq)]
pub struct Clause {
    pub witness: Witness,
    pub atoms: Vec<Atom>,
}

impl Clause {
    pub fn new(witness: Witness, atoms: Vec<Atom>) -> Clause {
        Clause { witness, atoms }
    }

    pub fn holds(&self, env: &Env) -> Option<bool> {
        let mut all = true;
        for a in &self.atoms {
            all &= a.holds(env)?;
        }
        Some(all)
    }

    pub fn map(&self, f: impl Fn(&Lin) -> Lin) -> Clause {
        Clause { witness: self.witness, atoms: self.atoms.iter().map(|a| a.map(&f)).collect() }
    }

    pub fn subst(&self, env: &Env) -> Clause {
        self.map(|l| l.subst(env))
    }

    pub fn and(mut self, more: impl IntoIterator<Item = Atom>) -> Clause {
        self.atoms.extend(more);
        self
    }
}

/// A disjunction of clauses.
pub type Dnf = Vec<Clause>;

/// Witnesses of all clauses that hold at a fully bound point.
pub fn holding(dnf: &[Clause], env: &Env) -> Vec<Witness> {
    let mut w: Vec<Witness> = dnf.iter().filter(|c| c.holds(env) == Some(true)).map(|c| c.witness).collect();
    w.sort();
    w.dedup();
    w
}

/// Conjunction of two disjunctions.
pub fn and_dnf(a: &[Clause], b: &[Clause], merge: impl Fn(Witness, Witness) -> Witness) -> Dnf {
    let mut out = vec![];
    for x in a {
        for y in b {
            out.push(Clause::new(merge(x.witness, y.witness), x.atoms.iter().chain(&y.atoms).cloned().collect()));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Intervals

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound {
    pub at: Q,
    pub closed: bool,
}

/// Interval of the real line; `None` ends are infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Option<Bound>,
    pub hi: Option<Bound>,
}

impl Interval {
    pub fn all() -> Interval {
        Interval { lo: None, hi: None }
    }

    pub fn point(x: Q) -> Interval {
        Interval { lo: Some(Bound { at: x.clone(), closed: true }), hi: Some(Bound { at: x, closed: true }) }
    }

    pub fn is_empty(&self) -> bool {
        match (&self.lo, &self.hi) {
            (Some(l), Some(h)) => match l.at.cmp(&h.at) {
                Ordering::Greater => true,
                Ordering::Equal => !(l.closed && h.closed),
                Ordering::Less => false,
            },
            _ => false,
        }
    }

    pub fn is_point(&self) -> bool {
        matches!((&self.lo, &self.hi), (Some(l), Some(h)) if l.at == h.at && l.closed && h.closed)
    }

    pub fn contains(&self, x: &Q) -> bool {
        let lo_ok = self.lo.as_ref().map_or(true, |b| if b.closed { x >= &b.at } else { x > &b.at });
        let hi_ok = self.hi.as_ref().map_or(true, |b| if b.closed { x <= &b.at } else { x < &b.at });
        lo_ok && hi_ok
    }

    /// Tighten the lower end.
    pub fn raise(&mut self, b: Bound) {
        let replace = match &self.lo {
            None => true,
            Some(cur) => b.at > cur.at || (b.at == cur.at && !b.closed),
        };
        if replace {
            self.lo = Some(b);
        }
    }

    /// Tighten the upper end.
    pub fn lower(&mut self, b: Bound) {
        let replace = match &self.hi {
            None => true,
            Some(cur) => b.at < cur.at || (b.at == cur.at && !b.closed),
        };
        if replace {
            self.hi = Some(b);
        }
    }

    pub fn intersect(&self, o: &Interval) -> Interval {
        let mut r = self.clone();
        if let Some(b) = &o.lo {
            r.raise(b.clone());
        }
        if let Some(b) = &o.hi {
            r.lower(b.clone());
        }
        r
    }

    /// A point inside, preferring closed ends. Assumes non-empty.
    pub fn sample(&self) -> Q {
        match (&self.lo, &self.hi) {
            (Some(l), _) if l.closed => l.at.clone(),
            (_, Some(h)) if h.closed => h.at.clone(),
            (Some(l), Some(h)) => (&l.at + &h.at) / qi(2),
            (Some(l), None) => &l.at + qi(1),
            (None, Some(h)) => &h.at - qi(1),
            (None, None) => qi(0),
        }
    }

    fn render(&self, name: &str) -> String {
        let ge = |b: &Bound| if b.closed { "≥" } else { ">" };
        let le = |b: &Bound| if b.closed { "≤" } else { "<" };
        match (&self.lo, &self.hi) {
            (None, None) => format!("all {name}"),
            _ if self.is_point() => format!("{name} = {}", fmt_q(&self.lo.as_ref().unwrap().at)),
            (Some(l), None) => format!("{name} {} {}", ge(l), fmt_q(&l.at)),
            (None, Some(h)) => format!("{name} {} {}", le(h), fmt_q(&h.at)),
            (Some(l), Some(h)) => format!("{} {} {name} {} {}", fmt_q(&l.at), le(l), le(h), fmt_q(&h.at)),
        }
    }
}

fn lo_cmp(a: &Interval, b: &Interval) -> Ordering {
    match (&a.lo, &b.lo) {
        (None, None) => Ordering::Equal,
        (None, _) => Ordering::Less,
        (_, None) => Ordering::Greater,
        (Some(x), Some(y)) => x.at.cmp(&y.at).then_with(|| y.closed.cmp(&x.closed)),
    }
}

/// Finite union of disjoint intervals, sorted upward.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntervalSet(pub Vec<Interval>);

impl IntervalSet {
    pub fn empty() -> IntervalSet {
        IntervalSet(vec![])
    }

    pub fn from_parts(parts: impl IntoIterator<Item = Interval>) -> IntervalSet {
        let mut v: Vec<Interval> = parts.into_iter().filter(|i| !i.is_empty()).collect();
        v.sort_by(lo_cmp);
        let mut out: Vec<Interval> = vec![];
        for i in v {
            if let Some(last) = out.last_mut() {
                let touches = match (&last.hi, &i.lo) {
                    (None, _) | (_, None) => true,
                    (Some(h), Some(l)) => l.at < h.at || (l.at == h.at && (l.closed || h.closed)),
                };
                if touches {
                    let extend = match (&last.hi, &i.hi) {
                        (None, _) => false,
                        (_, None) => true,
                        (Some(a), Some(b)) => b.at > a.at || (b.at == a.at && b.closed && !a.closed),
                    };
                    if extend {
                        last.hi = i.hi;
                    }
                    continue;
                }
            }
            out.push(i);
        }
        IntervalSet(out)
    }

    pub fn union(&self, o: &IntervalSet) -> IntervalSet {
        IntervalSet::from_parts(self.0.iter().chain(&o.0).cloned())
    }

    pub fn intersect(&self, i: &Interval) -> IntervalSet {
        IntervalSet::from_parts(self.0.iter().map(|x| x.intersect(i)))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.0.iter().any(|i| i.contains(x))
    }

    /// Infimum and whether it is attained; `None` for an empty or unbounded-below set.
    pub fn inf(&self) -> Option<Bound> {
        self.0.first().and_then(|i| i.lo.clone())
    }

    pub fn sup(&self) -> Option<Bound> {
        self.0.last().and_then(|i| i.hi.clone())
    }

    pub fn unbounded_below(&self) -> bool {
        self.0.first().is_some_and(|i| i.lo.is_none())
    }

    pub fn unbounded_above(&self) -> bool {
        self.0.last().is_some_and(|i| i.hi.is_none())
    }

    /// A member, taken from the highest piece.
    pub fn sample(&self) -> Option<Q> {
        self.0.last().map(|i| i.sample())
    }

    /// Pieces from the top down, joined with "or": `β > -1/2 or β = -1`.
    pub fn render(&self, name: &str) -> String {
        if self.0.is_empty() {
            return "none".into();
        }
        self.0.iter().rev().map(|i| i.render(name)).collect::<Vec<_>>().join(" or ")
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

// ---------------------------------------------------------------------------
// Solvers

/// Integer atoms are expanded into at most this many candidate values.
const MAX_INT_CASES: i64 = 256;

/// Replace each `NonPosInt` atom by the equalities `lhs = m` for the
/// integers `m ≤ 0` allowed by `range`, which reports the attainable
/// `[min, max]` of a form under the linear atoms of the clause.
fn expand_int(clause: &Clause, range: &dyn Fn(&[Atom], &Lin) -> Option<(Q, Q)>) -> Vec<Vec<Atom>> {
    let linear: Vec<Atom> = clause.atoms.iter().filter(|a| matches!(a, Atom::Cmp(..))).cloned().collect();
    let mut cases = vec![linear.clone()];
    for a in &clause.atoms {
        let Atom::NonPosInt(l) = a else { continue };
        let mut next = vec![];
        for base in &cases {
            let Some((lo, hi)) = range(base, l) else { continue };
            let top = floor_q(&hi).min(BigInt::zero());
            let bottom = ceil_q(&lo).max(&top - BigInt::from(MAX_INT_CASES - 1));
            let mut m = top;
            while m >= bottom {
                let mut c = base.clone();
                c.push(Atom::eq(l.clone() - Q::from_integer(m.clone())));
                next.push(c);
                m -= 1;
            }
        }
        cases = next;
    }
    cases
}

/// Set of `v` satisfying linear atoms that mention no other unbound variable.
fn interval_of(atoms: &[Atom], v: Var) -> Interval {
    let mut iv = Interval::all();
    for a in atoms {
        let Atom::Cmp(l, r) = a else { unreachable!("integer atoms are expanded first") };
        let coef = l.coef(v).clone();
        if coef.is_zero() {
            if !r.holds(&l.c) {
                return Interval { lo: Some(Bound { at: qi(1), closed: false }), hi: Some(Bound { at: qi(0), closed: false }) };
            }
            continue;
        }
        let root = -l.c.clone() / &coef;
        let closed = *r != Rel::Gt;
        if *r == Rel::Eq {
            iv.raise(Bound { at: root.clone(), closed: true });
            iv.lower(Bound { at: root, closed: true });
        } else if coef.is_positive() {
            iv.raise(Bound { at: root, closed });
        } else {
            iv.lower(Bound { at: root, closed });
        }
    }
    iv
}

fn range_1d(atoms: &[Atom], l: &Lin, v: Var) -> Option<(Q, Q)> {
    let iv = interval_of(atoms, v);
    if iv.is_empty() {
        return None;
    }
    let a = l.coef(v).clone();
    if a.is_zero() {
        return Some((l.c.clone(), l.c.clone()));
    }
    let at = |b: &Option<Bound>| b.as_ref().map(|b| &l.c + &a * &b.at);
    let (x, y) = (at(&iv.lo), at(&iv.hi));
    let big = qi(1_000_000);
    let (x, y) = if a.is_positive() { (x, y) } else { (y, x) };
    Some((x.unwrap_or(-big.clone()), y.unwrap_or(big)))
}

/// The set of values of `v` for which the clause holds once `env` is
/// substituted. Every other variable must be bound.
pub fn clause_set_1d(clause: &Clause, env: &Env, v: Var) -> IntervalSet {
    let c = clause.subst(env);
    for a in &c.atoms {
        for w in Var::ALL {
            assert!(w == v || a.lhs().coef(w).is_zero(), "variable {} left unbound", w.symbol());
        }
    }
    let cases = expand_int(&c, &|atoms, l| range_1d(atoms, l, v));
    IntervalSet::from_parts(cases.iter().map(|atoms| interval_of(atoms, v)))
}

/// Union over the clauses, with the witnesses of each non-empty clause.
pub fn solve_1d(dnf: &[Clause], env: &Env, v: Var) -> (IntervalSet, Vec<(Witness, IntervalSet)>) {
    let mut all = IntervalSet::empty();
    let mut per = vec![];
    for c in dnf {
        let s = clause_set_1d(c, env, v);
        if !s.is_empty() {
            all = all.union(&s);
            per.push((c.witness, s));
        }
    }
    (all, per)
}

type P2 = (Q, Q);

fn line_val(l: &Lin, p: &P2) -> Q {
    &l.c + l.coef(Var::X) * &p.0 + l.coef(Var::Y) * &p.1
}

/// Vertices of the closure of the polygon cut out by `atoms` in the
/// `(X, Y)` plane. Callers keep the region bounded.
fn vertices(atoms: &[Atom]) -> Vec<P2> {
    let lines: Vec<&Lin> = atoms.iter().map(|a| a.lhs()).collect();
    let closure_ok = |p: &P2| {
        atoms.iter().all(|a| match a {
            Atom::Cmp(l, Rel::Eq) => line_val(l, p).is_zero(),
            Atom::Cmp(l, _) => !line_val(l, p).is_negative(),
            Atom::NonPosInt(_) => true,
        })
    };
    let mut out: Vec<P2> = vec![];
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (a1, b1, c1) = (lines[i].coef(Var::X), lines[i].coef(Var::Y), &lines[i].c);
            let (a2, b2, c2) = (lines[j].coef(Var::X), lines[j].coef(Var::Y), &lines[j].c);
            let det = a1 * b2 - a2 * b1;
            if det.is_zero() {
                continue;
            }
            let x = (b1 * c2 - b2 * c1) / &det;
            let y = (a2 * c1 - a1 * c2) / &det;
            let p = (x, y);
            if closure_ok(&p) && !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

fn strict_ok(atoms: &[Atom], p: &P2) -> bool {
    atoms.iter().all(|a| match a {
        Atom::Cmp(l, r) => r.holds(&line_val(l, p)),
        Atom::NonPosInt(_) => true,
    })
}

fn centroid(ps: &[P2]) -> P2 {
    let n = qi(ps.len() as i64);
    let sx: Q = ps.iter().map(|p| p.0.clone()).sum();
    let sy: Q = ps.iter().map(|p| p.1.clone()).sum();
    (sx / &n, sy / n)
}

/// Minimum of `obj` over the closure, and whether it is attained on the
/// region itself (strict atoms respected).
fn min_2d_linear(atoms: &[Atom], obj: &Lin) -> Option<(Q, bool, P2)> {
    let vs = vertices(atoms);
    if vs.is_empty() || !strict_ok(atoms, &centroid(&vs)) {
        return None;
    }
    let best = vs.iter().map(|p| line_val(obj, p)).min()?;
    let face: Vec<P2> = vs.iter().filter(|p| line_val(obj, p) == best).cloned().collect();
    let c = centroid(&face);
    Some((best, strict_ok(atoms, &c), c))
}

fn range_2d(atoms: &[Atom], l: &Lin) -> Option<(Q, Q)> {
    let lo = min_2d_linear(atoms, l)?.0;
    let hi = -min_2d_linear(atoms, &-l.clone())?.0;
    Some((lo, hi))
}

fn check_2d(c: &Clause) {
    for a in &c.atoms {
        for w in Var::ALL {
            assert!(w == Var::X || w == Var::Y || a.lhs().coef(w).is_zero(), "variable {} left unbound", w.symbol());
        }
    }
}

/// Infimum of `obj` over the `(X, Y)` region where some clause holds.
/// Returns the value, whether it is attained, and the witness that achieves it.
pub fn minimize_2d(dnf: &[Clause], env: &Env, obj: &Lin) -> Option<(Q, bool, Witness)> {
    let mut best: Option<(Q, bool, Witness)> = None;
    for clause in dnf {
        let c = clause.subst(env);
        check_2d(&c);
        for atoms in expand_int(&c, &range_2d) {
            let Some((v, attained, _)) = min_2d_linear(&atoms, obj) else { continue };
            let better = match &best {
                None => true,
                Some((b, att, _)) => v < *b || (v == *b && attained && !att),
            };
            if better {
                best = Some((v, attained, c.witness));
            }
        }
    }
    best
}

/// Some point of the `(X, Y)` region satisfying a clause, with its witness.
pub fn feasible_2d(dnf: &[Clause], env: &Env) -> Option<(P2, Witness)> {
    for clause in dnf {
        let c = clause.subst(env);
        check_2d(&c);
        for atoms in expand_int(&c, &range_2d) {
            let vs = vertices(&atoms);
            if vs.is_empty() {
                continue;
            }
            let p = centroid(&vs);
            if strict_ok(&atoms, &p) {
                return Some((p, c.witness));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Lin {
        Lin::var(Var::Beta)
    }

    #[test]
    fn snaps_simple_fractions() {
        assert_eq!(rational(1.5), (q(3, 2), true));
        assert_eq!(rational(-0.5), (q(-1, 2), true));
        assert_eq!(rational(0.1), (q(1, 10), true));
        assert_eq!(rational(1.0 / 3.0), (q(1, 3), true));
        assert!(!rational(std::f64::consts::PI).1);
    }

    #[test]
    fn formats() {
        assert_eq!(fmt_q(&q(3, 2)), "3/2");
        assert_eq!(fmt_q(&q(-4, 2)), "-2");
        assert_eq!(fmt_q(&qi(0)), "0");
    }

    #[test]
    fn merges_touching_pieces() {
        let a = Interval { lo: Some(Bound { at: qi(0), closed: true }), hi: Some(Bound { at: qi(1), closed: false }) };
        let b = Interval { lo: Some(Bound { at: qi(1), closed: true }), hi: None };
        let s = IntervalSet::from_parts([b, a]);
        assert_eq!(s.render("β"), "β ≥ 0");
        let open = Interval { lo: Some(Bound { at: qi(1), closed: false }), hi: None };
        let left = Interval { lo: None, hi: Some(Bound { at: qi(1), closed: false }) };
        assert_eq!(IntervalSet::from_parts([open, left]).0.len(), 2);
    }

    #[test]
    fn strictness_survives_solving() {
        // 2β - 3 > 0 and 4 - β ≥ 0
        let c = Clause::new(
            Witness::PLAIN,
            vec![Atom::gt(x() * 2 - qi(3)), Atom::ge(-x() + qi(4))],
        );
        let s = clause_set_1d(&c, &Env::new(), Var::Beta);
        assert_eq!(s.render("β"), "3/2 < β ≤ 4");
        assert!(!s.contains(&q(3, 2)));
        assert!(s.contains(&qi(4)));
    }

    #[test]
    fn integer_relaxation_adds_points() {
        // β ≥ -3, β - 1 ∈ ℤ≤0, β ≤ 1/2  → {-3, -2, -1, 0}
        let c = Clause::new(
            Witness::PLAIN,
            vec![Atom::ge(x() + qi(3)), Atom::NonPosInt(x() - qi(1)), Atom::ge(-x() + q(1, 2))],
        );
        let s = clause_set_1d(&c, &Env::new(), Var::Beta);
        assert_eq!(s.0.len(), 4);
        assert!(s.0.iter().all(|i| i.is_point()));
    }

    #[test]
    fn polygon_minimum_and_strictness() {
        let (sx, sy) = (Lin::var(Var::X), Lin::var(Var::Y));
        // 0 ≤ x ≤ 1, 0 ≤ y ≤ 1, x + y > 1/2
        let atoms = vec![
            Atom::ge(sx.clone()),
            Atom::ge(-sx.clone() + qi(1)),
            Atom::ge(sy.clone()),
            Atom::ge(-sy.clone() + qi(1)),
            Atom::gt(sx.clone() + sy.clone() - q(1, 2)),
        ];
        let dnf = vec![Clause::new(Witness::PLAIN, atoms.clone())];
        let (v, attained, _) = minimize_2d(&dnf, &Env::new(), &(sx.clone() + sy.clone())).unwrap();
        assert_eq!(v, q(1, 2));
        assert!(!attained);
        let mut closed = atoms;
        closed[4] = Atom::ge(sx.clone() + sy.clone() - q(1, 2));
        let dnf = vec![Clause::new(Witness::PLAIN, closed)];
        assert!(minimize_2d(&dnf, &Env::new(), &(sx + sy)).unwrap().1);
    }

    #[test]
    fn infeasible_strict_polygon() {
        let sx = Lin::var(Var::X);
        let sy = Lin::var(Var::Y);
        let atoms = vec![
            Atom::ge(sx.clone()),
            Atom::ge(-sx.clone()),
            Atom::gt(sx.clone()),
            Atom::ge(sy.clone()),
            Atom::ge(-sy + qi(1)),
        ];
        assert!(feasible_2d(&[Clause::new(Witness::PLAIN, atoms)], &Env::new()).is_none());
    }
}
