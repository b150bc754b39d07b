use regflow::regime::{check_theorem, full_report, preset, render_tables, table_row, TheoremId, Verdict, TABLE_MODELS};

// (model, a, b, gamma, p, local, uniqueness, regularity)
const ROWS: [(&str, &str, &str, &str, &str, &str, &str, &str); 6] = [
    ("NSE", "0", "1", "1", "4/3", "β > 3/2", "β > 3/2", "none"),
    ("Leray-α", "0", "1", "1", "2", "β ≥ 0", "β ≥ 0", "β ≤ 1"),
    ("ML-α", "-1", "0", "2", "2", "β > -1/2", "β > -1/2 or β = -1", "β ≤ 1/2"),
    ("SBM", "-1", "0", "2", "2", "β ≥ -1", "β ≥ -1", "β ≤ 2"),
    ("NSV", "-1", "-1", "1+ε", "2", "β ≥ -1", "β ≥ -1", "β ≤ -1/2"),
    ("NS-α", "-1", "0", "2", "2", "β > -1/2", "β > -1/2 or β = -1", "β ≤ 0"),
];

#[test]
fn summary_tables_reproduce() {
    for (m, a, b, g, p, local, uniq, reg) in ROWS {
        let r = table_row(&preset(m).unwrap(), 3).unwrap();
        assert_eq!(
            (r.a.as_str(), r.b.as_str(), r.gamma.as_str(), r.p.as_str()),
            (a, b, g, p),
            "existence row of {m}"
        );
        assert_eq!(r.local, local, "local existence of {m}");
        assert_eq!(r.uniqueness, uniq, "uniqueness of {m}");
        assert_eq!(r.regularity, reg, "regularity of {m}");
    }
}

#[test]
fn every_table_model_renders() {
    let rows: Vec<_> = TABLE_MODELS.iter().map(|m| table_row(&preset(m).unwrap(), 3).unwrap()).collect();
    let text = render_tables(&rows);
    for m in TABLE_MODELS {
        assert!(text.contains(m), "{m} missing from\n{text}");
    }
    let like = rows.last().unwrap();
    assert_eq!(like.gamma_caption.as_deref(), Some("3/2"));
}

#[test]
fn like_family_corollary_needs_theta2() {
    let off = check_theorem(TheoremId::AttractorCorollary, &preset("NS-α-like(1,0)").unwrap(), 3, None).unwrap();
    let on = check_theorem(TheoremId::AttractorCorollary, &preset("NS-α-like(1,1)").unwrap(), 3, None).unwrap();
    assert_eq!(off.verdict, Verdict::Fails);
    assert_eq!(on.verdict, Verdict::Holds);
}

#[test]
fn euler_like_custom_model_has_no_dissipative_results() {
    let p = regflow::regime::custom(0.0, 0.0, 0.0, regflow::bilinear::Form::B1);
    let rep = full_report(&p, 3).unwrap();
    for (id, c) in &rep.verdicts {
        if *id == TheoremId::DeterminingNondissipative {
            continue;
        }
        assert_ne!(c.verdict, Verdict::Holds, "{id} should not hold without dissipation");
    }
}

#[test]
fn leray_full_report() {
    let rep = full_report(&preset("Leray-α").unwrap(), 3).unwrap();
    for id in [
        TheoremId::ExistenceA,
        TheoremId::ExistenceBLocal,
        TheoremId::UniquenessA,
        TheoremId::UniquenessB,
        TheoremId::Regularity,
        TheoremId::AttractorIii,
        TheoremId::AttractorCorollary,
        TheoremId::DeterminingDissipative,
    ] {
        assert_eq!(rep.verdicts[&id].verdict, Verdict::Holds, "{id}");
    }
    assert_eq!(rep.verdicts[&TheoremId::DeterminingNondissipative].verdict, Verdict::NotApplicable);
    let json = serde_json::to_string(&rep).unwrap();
    assert!(json.contains("existence-a"));
}
