use chu_core::fincat::*;

#[test]
fn canned_instances_satisfy_the_theorem() {
    for (name, _) in CANNED {
        let s = canned_situation(name).unwrap();
        validate_instance(&s).unwrap();
        let t = check_theorem(&s).unwrap();
        assert!(t.hom_pairs > 0);
        let c = check_corollaries(&s).unwrap();
        assert!(c.ti_sj_unit_iso && c.ti_sj_counit_iso, "{name}");
        assert!(c.jti_s_bijections > 0 && c.t_isj_bijections > 0, "{name}");
    }
}

#[test]
fn two_adjunction_biconditional() {
    for t in [two_adj_identity(), two_adj_diagonal()] {
        let r = check_2adj(&t).unwrap();
        assert!(r.biconditional);
        assert_eq!(r.left_fully_faithful, r.right_fully_faithful);
    }
}

#[test]
fn canned_match_builders() {
    assert_eq!(canned_situation("trivial").unwrap(), trivial_situation());
    assert_eq!(canned_situation("poset").unwrap(), poset_situation());
    assert_eq!(canned_situation("nonthin").unwrap(), nonthin_situation());
    assert!(canned_situation("other").is_none());
}
