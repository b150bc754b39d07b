//! The closed-form parameter conditions stated after each theorem, one
//! system per theorem and form family.
//!
//! Every system is a disjunction over the selectors `k` (and `ℓ` where a
//! second independent selector appears) of conjunctions of affine
//! inequalities in `θ, θ1, θ2` and, where relevant, `β`, `α`, `γ`.

use super::bounded::{critical, FormFamily};
use super::exact::{q, qi, Atom, Clause, Dnf, Lin, Relaxation, Var, Witness, Q};
use super::TheoremId;

fn th() -> Lin {
    Lin::var(Var::Theta)
}
fn t1() -> Lin {
    Lin::var(Var::Theta1)
}
fn t2() -> Lin {
    Lin::var(Var::Theta2)
}
fn beta() -> Lin {
    Lin::var(Var::Beta)
}
fn alpha() -> Lin {
    Lin::var(Var::Alpha)
}
fn gamma() -> Lin {
    Lin::var(Var::Gamma)
}
fn k0() -> Lin {
    Lin::constant(qi(0))
}

/// `lhs ≥ rhs`
fn ge(lhs: Lin, rhs: Lin) -> Atom {
    Atom::ge(lhs - rhs)
}
/// `lhs > rhs`
fn gt(lhs: Lin, rhs: Lin) -> Atom {
    Atom::gt(lhs - rhs)
}
fn cst(v: Q) -> Lin {
    Lin::constant(v)
}

fn clause(k: Option<u8>, l: Option<u8>, atoms: Vec<Atom>) -> Clause {
    Clause::new(Witness { k, l, relaxation: Relaxation::None }, atoms)
}

/// `k` values a family ranges over.
fn ks(fam: FormFamily) -> Vec<Option<u8>> {
    match fam {
        FormFamily::B13 => vec![Some(0), Some(1)],
        _ => vec![None],
    }
}

fn kq(k: Option<u8>) -> Q {
    qi(k.unwrap_or(0) as i64)
}

/// The remark system for `id`. Theorem-level standing assumptions on `β`,
/// `α` and `γ` are included so that solving for the free variable returns
/// an admissible set.
pub fn remark_system(id: TheoremId, fam: FormFamily, n: usize) -> Dnf {
    let c = cst(critical(n));
    let half = || cst(q(1, 2));
    let one = || cst(qi(1));
    match id {
        TheoremId::ExistenceA => {
            let mins = match fam {
                FormFamily::B13 => vec![th() * 2 + t1() * 2 - c.clone(), th() - t2() + t1() * 2, th() + t2() - one()],
                FormFamily::B2 => vec![th() * 2 + t1() * 2 - c.clone(), th() - t2() + t1() * 2 - one(), th() + t2()],
                FormFamily::B45 => {
                    vec![th() * 2 + t1() * 2 - c.clone(), th() - t2() + t1() * 2 - one(), th() + t2() - one()]
                }
            };
            let mut atoms = vec![gt(th() + t1(), half()), ge(th() - t2() - one(), -gamma())];
            atoms.extend(mins.into_iter().map(|m| gt(m, -gamma())));
            atoms.push(ge(gamma(), th() + t2()));
            atoms.push(gt(gamma(), t2()));
            vec![clause(None, None, atoms)]
        }
        // The remark after the uniqueness theorem states the same system for
        // its part b) as the local existence remark.
        TheoremId::ExistenceBLocal | TheoremId::UniquenessB => {
            let lower = gt(beta(), c.clone() - th() - (t1() + t2()) * 2);
            let standing = ge(beta(), -t2());
            match fam {
                FormFamily::B13 => ks(fam)
                    .into_iter()
                    .map(|k| {
                        let kk = kq(k);
                        clause(
                            k,
                            None,
                            vec![
                                ge(th() + t1() * 2, cst(kk.clone())),
                                ge(th() + t2() * 2, one()),
                                lower.clone(),
                                ge(beta(), cst((qi(1) - kk) / qi(2)) - t1() - t2()),
                                standing.clone(),
                            ],
                        )
                    })
                    .collect(),
                FormFamily::B2 | FormFamily::B45 => {
                    let t2_rhs = if fam == FormFamily::B2 { k0() } else { one() };
                    vec![clause(
                        None,
                        None,
                        vec![
                            ge(th() + t1() * 2, one()),
                            ge(th() + t2() * 2, t2_rhs),
                            lower,
                            ge(beta(), half() - t1() - t2()),
                            standing,
                        ],
                    )]
                }
            }
        }
        TheoremId::UniquenessA => match fam {
            FormFamily::B13 => ks(fam)
                .into_iter()
                .map(|k| {
                    let kk = kq(k);
                    clause(
                        k,
                        None,
                        vec![
                            ge(th() + t1(), cst((qi(1) - &kk) / qi(2))),
                            ge(th() + t1() * 2, cst(kk.clone())),
                            ge(th() + t2(), half()),
                            gt(th() * 2 + t1() * 2 + t2(), c.clone()),
                            ge(th() * 3 + t1() * 2 + t2() * 2, cst(qi(2) - kk)),
                        ],
                    )
                })
                .collect(),
            FormFamily::B2 => vec![clause(
                None,
                None,
                vec![
                    ge(th() + t1() * 2, one()),
                    ge(th() + t1(), half()),
                    ge(th() + t2(), k0()),
                    gt(th() * 2 + t1() * 2 + t2(), c.clone()),
                    ge(th() * 3 + t1() * 2 + t2() * 2, one()),
                ],
            )],
            FormFamily::B45 => vec![clause(
                None,
                None,
                vec![
                    ge(th() + t1(), half()),
                    ge(th() + t1() * 2, one()),
                    ge(th() + t2(), half()),
                    gt(th() * 2 + t1() * 2 + t2(), c.clone()),
                    ge(th() * 3 + t1() * 2 + t2() * 2, cst(qi(2))),
                ],
            )],
        },
        TheoremId::Regularity => {
            let window = |upper: Lin| {
                vec![
                    gt(beta(), c.clone() - (t1() + t2()) * 2 - th()),
                    gt(th() * 3 + t1() * 2 - c.clone(), beta()),
                    gt(beta(), -t2()),
                    ge(upper, beta()),
                ]
            };
            let top = gt(th() * 4 + t1() * 4 + t2() * 2, c.clone() * 2);
            match fam {
                FormFamily::B13 => {
                    let mut out = vec![];
                    for k in [0u8, 1] {
                        for l in [0u8, 1] {
                            let (kk, ll) = (qi(k as i64), qi(l as i64));
                            let mut atoms = vec![
                                top.clone(),
                                ge(th() * 2 + t1() * 2, cst(qi(1) - &kk)),
                                ge(th() + t2() * 2, one()),
                                ge(th() * 3 + t1() * 4, one()),
                                ge(th() + t1() * 2, cst(ll.clone())),
                                ge(th() * 3 + t1() * 2 + t2() * 2, cst(qi(2) - &ll)),
                                ge(beta(), cst((qi(1) - &ll) / qi(2)) - t1() - t2()),
                            ];
                            atoms.extend(window(th() * 2 + t2() - one()));
                            atoms.push(ge(th() * 2 - t2() + t1() * 2 - cst(kk), beta()));
                            out.push(clause(Some(k), Some(l), atoms));
                        }
                    }
                    out
                }
                FormFamily::B2 => {
                    let mut atoms = vec![
                        top,
                        ge(th() + t2() * 2, k0()),
                        ge(th() + t1() * 2, one()),
                        ge(beta(), half() - t1() - t2()),
                    ];
                    atoms.extend(window(th() * 2 + t2()));
                    atoms.push(ge(th() * 2 - t2() + t1() * 2 - one(), beta()));
                    vec![clause(None, None, atoms)]
                }
                FormFamily::B45 => {
                    let mut atoms = vec![
                        top,
                        ge(th() + t2() * 2, one()),
                        ge(th() + t1() * 2, one()),
                        ge(beta(), half() - t1() - t2()),
                    ];
                    atoms.extend(window(th() * 2 + t2() - one()));
                    atoms.push(ge(th() * 2 - t2() + t1() * 2 - one(), beta()));
                    vec![clause(None, None, atoms)]
                }
            }
        }
        TheoremId::AttractorIii => {
            let head = gt(th() * 2, c.clone() - t1() * 2 - t2());
            match fam {
                FormFamily::B13 => ks(fam)
                    .into_iter()
                    .map(|k| {
                        let kk = kq(k);
                        clause(
                            k,
                            None,
                            vec![
                                head.clone(),
                                ge(th() * 2 + t1() * 2, cst(qi(1) - &kk)),
                                ge(t2() * 2 + th(), one()),
                                ge(t1() * 2 + th(), cst(kk)),
                            ],
                        )
                    })
                    .collect(),
                FormFamily::B2 => vec![clause(
                    None,
                    None,
                    vec![head, ge(th() * 2 + t1() * 2, one()), ge(t2() * 2 + th(), k0()), ge(t1() * 2 + th(), one())],
                )],
                FormFamily::B45 => vec![clause(
                    None,
                    None,
                    vec![head, ge(th() * 2 + t1() * 2, one()), ge(t2() * 2 + th(), one()), ge(t1() * 2 + th(), one())],
                )],
            }
        }
        TheoremId::AttractorCorollary => {
            // uniqueness a) with its k, condition (iii) of the attractor
            // theorem with an independent selector stored as ℓ, and the
            // existence a) lead condition for the extra triple.
            let u = remark_system(TheoremId::UniquenessA, fam, n);
            let a = remark_system(TheoremId::AttractorIii, fam, n);
            let mut out = vec![];
            for x in &u {
                for y in &a {
                    let mut atoms = x.atoms.clone();
                    atoms.extend(y.atoms.iter().cloned());
                    atoms.push(gt(th() + t1(), half()));
                    out.push(clause(x.witness.k, y.witness.k, atoms));
                }
            }
            out
        }
        TheoremId::DeterminingDissipative => {
            let pos = gt(th(), k0());
            match fam {
                FormFamily::B13 => ks(fam)
                    .into_iter()
                    .map(|k| {
                        let kk = kq(k);
                        clause(
                            k,
                            None,
                            vec![
                                pos.clone(),
                                gt(th() * q(3, 2) + t1() * 2 + t2(), c.clone()),
                                ge(th() + t2(), half()),
                                gt(th() * q(1, 2) + t1() * 2, cst(kk.clone())),
                                ge(th() + t1(), cst((qi(1) - kk) / qi(2))),
                            ],
                        )
                    })
                    .collect(),
                FormFamily::B2 => vec![clause(
                    None,
                    None,
                    vec![
                        pos,
                        gt(th() * q(3, 2) + t1() * 2 + t2() * 2, c.clone()),
                        ge(th() + t2(), k0()),
                        gt(th() * q(1, 2) + t1() * 2, one()),
                        ge(th() + t1(), half()),
                    ],
                )],
                FormFamily::B45 => vec![clause(
                    None,
                    None,
                    vec![
                        pos,
                        gt(th() * q(3, 2) + t1() * 2 + t2(), c.clone()),
                        ge(th() + t2(), half()),
                        gt(th() * q(1, 2) + t1() * 2, one()),
                        ge(th() + t1(), half()),
                    ],
                )],
            }
        }
        TheoremId::DeterminingNondissipative => {
            let standing = vec![Atom::eq(th()), ge(beta(), -t2()), ge(-t2(), alpha())];
            let alpha_lead = gt(alpha(), c.clone() - t1() * 2 - beta() - t2() * 3);
            let mut out = vec![];
            let lk: Vec<Option<u8>> = ks(fam);
            for k in &lk {
                for l in &lk {
                    let (kk, ll) = (kq(*k), kq(*l));
                    let mut atoms = standing.clone();
                    atoms.push(gt(beta() + t1() * 2 + t2() * 2, c.clone()));
                    match fam {
                        FormFamily::B13 => {
                            atoms.push(ge(beta() + t2() * 3, one()));
                            atoms.push(gt(t1() * 2, cst(kk.clone())));
                            atoms.push(ge(t1() * 2 + beta() + t2(), cst(qi(1) - &kk)));
                            atoms.push(alpha_lead.clone());
                            atoms.push(ge(alpha(), cst(ll.clone()) - t1() * 2 - t2()));
                            atoms.push(ge(alpha(), cst(qi(1) - &ll) - t1() * 2 - beta() - t2() * 2));
                        }
                        FormFamily::B2 | FormFamily::B45 => {
                            let rhs = if fam == FormFamily::B2 { k0() } else { one() };
                            atoms.push(ge(beta() + t2() * 3, rhs));
                            atoms.push(gt(t1() * 2, one()));
                            atoms.push(ge(t1() * 2 + beta() + t2(), one()));
                            atoms.push(alpha_lead.clone());
                            atoms.push(ge(alpha(), one() - t1() * 2 - t2()));
                            atoms.push(ge(alpha(), one() - t1() * 2 - beta() - t2() * 2));
                        }
                    }
                    out.push(clause(*k, *l, atoms));
                }
            }
            out
        }
    }
}
