mod common;

use std::collections::BTreeSet;

use common::{random_stable_diagram, PRYM_SURFACES};
use flatkern::diagram::{
    are_isomorphic, canonical_type, compose, invert, is_isomorphism, prediagram_from_type, search_isomorphisms,
    Matching, Prediagram,
};
use flatkern::enumerator::{
    classify_kind, enumerate_matchings, enumerate_stable_prediagrams, type_classes, Filter, Kind, RejectReason,
    SearchSpec,
};
use flatkern::error::Error;
use flatkern::presets::{load_preset, GOLDEN};
use flatkern::prym::{check_structure, find_prym_involutions, involution_report, satisfies_formula};
use flatkern::surface::stratum_signature;
use itertools::Itertools;
use proptest::strategy::{Just, Strategy};
use proptest::test_runner::TestRunner;

fn base_spec() -> SearchSpec {
    let base = load_preset("prym1111-base").unwrap();
    let mut spec = SearchSpec::new(base.prediagram().unwrap(), 2);
    spec.involution = base.involution.clone();
    spec.labels = base.label_scheme().unwrap();
    spec
}

fn brute_isomorphic(p1: &Prediagram, p2: &Prediagram) -> bool {
    let mut found = false;
    search_isomorphisms(p1, p2, false, &mut |_| {
        found = true;
        true
    });
    found
}

#[test]
fn conjugacy_classes_by_brute_force() {
    for n in 1..=4usize {
        let c: Vec<usize> = (0..n).map(|k| (k + 1) % n).collect();
        let ci = invert(&c);
        for f in (0..n).permutations(n) {
            // orbit of f under conjugation by powers of c
            let mut orbit = BTreeSet::new();
            let mut g = f.clone();
            for _ in 0..n {
                orbit.insert(g.clone());
                g = compose(&c, &compose(&g, &ci));
            }
            assert_eq!(canonical_type(&f), *orbit.iter().next().unwrap(), "{f:?}");
        }
    }
    // S3 splits into 4 classes under rotation: id, (0 1 2), (0 2 1), transpositions
    assert_eq!(type_classes(3).len(), 4);
    assert_eq!(type_classes(2), vec![vec![0, 1], vec![1, 0]]);
}

#[test]
fn type_isomorphism_agrees_with_search() {
    for n in 1..=4usize {
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        for f in &perms {
            for g in &perms {
                let (p, q) = (prediagram_from_type(f), prediagram_from_type(g));
                let by_type = canonical_type(f) == canonical_type(g);
                assert_eq!(brute_isomorphic(&p, &q), by_type, "{f:?} {g:?}");
                match are_isomorphic(&p, &q) {
                    Some(phi) => assert!(by_type && is_isomorphism(&p, &q, &phi, false)),
                    None => assert!(!by_type),
                }
            }
        }
    }
}

#[test]
fn relabelling_preserves_isomorphism_class() {
    let mut runner = TestRunner::deterministic();
    for _ in 0..20 {
        let d = random_stable_diagram(&mut runner);
        let p = &d.prediagram;
        let n = p.n_ends();
        let perm: Vec<usize> = common::sample(&mut runner, Just((0..n).collect::<Vec<_>>()).prop_shuffle());
        let q = p.relabel(&perm);
        assert!(q.is_valid());
        assert!(brute_isomorphic(p, &q));
        let phi = are_isomorphic(p, &q).unwrap();
        assert!(is_isomorphism(p, &q, &phi, false));
        assert_eq!(stratum_signature(p).unwrap(), stratum_signature(&q).unwrap());
    }
}

#[test]
fn filter_order_does_not_change_survivors() {
    let orders = [
        [Filter::Involution, Filter::Connectivity, Filter::Metric],
        [Filter::Connectivity, Filter::Metric, Filter::Involution],
        [Filter::Metric, Filter::Involution, Filter::Connectivity],
    ];
    let mut seen: Option<Vec<String>> = None;
    for order in orders {
        let mut spec = base_spec();
        spec.filter_order = order;
        let res = enumerate_matchings(&spec).unwrap();
        assert_eq!(res.survivors.len() + res.rejected.len(), 720);
        let names = res.survivor_names();
        if let Some(prev) = &seen {
            assert_eq!(prev, &names, "{order:?}");
        }
        seen = Some(names);
    }
}

#[test]
fn rejection_table_is_exhaustive() {
    let res = enumerate_matchings(&base_spec()).unwrap();
    let names: BTreeSet<String> =
        res.survivors.iter().map(|s| s.name.clone()).chain(res.rejected.iter().map(|r| r.name.clone())).collect();
    assert_eq!(names.len(), 720);
    let counts = res.reason_counts();
    assert_eq!(counts.values().sum::<usize>() + 5, 720);
    assert_eq!(counts["isomorphic-duplicate"], res.survivors.iter().map(|s| s.class.len() - 1).sum::<usize>());
    for r in &res.rejected {
        assert_eq!(r.duplicate_of.is_some(), r.reason == RejectReason::IsomorphicDuplicate);
    }
}

#[test]
fn kind_filter_reports_other_kind() {
    let mut spec = base_spec();
    spec.kind_filter = Some(Kind::First);
    let res = enumerate_matchings(&spec).unwrap();
    assert_eq!(res.survivor_names(), vec!["cafbed", "fabced"]);
    let other: Vec<&str> =
        res.rejected.iter().filter(|r| r.reason == RejectReason::OtherKind).map(|r| r.name.as_str()).collect();
    assert_eq!(other, vec!["cdefab", "cefbda", "faecdb"]);
}

#[test]
fn classify_kind_examples() {
    let spec = base_spec();
    let labels = spec.labels.clone().unwrap();
    let rho = spec.involution.clone().unwrap();
    for (name, kind) in [("fabced", Kind::First), ("cafbed", Kind::First), ("cdefab", Kind::Second), ("faecdb", Kind::Second)] {
        let m = labels.matching(name).unwrap();
        let inv = flatkern::prym::involution_from(&spec.base, &m, &rho).unwrap();
        assert_eq!(classify_kind(&spec.base, &m, &inv).unwrap(), kind, "{name}");
    }
}

#[test]
fn classify_kind_needs_two_fixed_cylinders() {
    let d = load_preset("genus2").unwrap().diagram(GOLDEN).unwrap();
    let inv = find_prym_involutions(&d).into_iter().next().unwrap();
    assert!(matches!(
        classify_kind(&d.prediagram, &d.matching, &inv),
        Err(Error::WrongFixedCount { expected: 2, .. })
    ));
}

#[test]
fn survivors_carry_valid_involutions() {
    let spec = base_spec();
    for s in enumerate_matchings(&spec).unwrap().survivors {
        check_structure(&spec.base, &s.matching, &s.involution.rho).unwrap();
        assert!(satisfies_formula(s.involution.fixed_counts, 3));
        assert_eq!(s.involution.fixed_cylinders().len(), 2);
        let report = involution_report(&s.involution, 3);
        assert!(report.formula.holds);
        assert_eq!(report.formula.rhs, 4);
    }
}

#[test]
fn stable_prediagram_classes() {
    assert_eq!(enumerate_stable_prediagrams(&[0], 16).unwrap().len(), 1);
    let g2 = enumerate_stable_prediagrams(&[1, 1], 16).unwrap();
    assert_eq!(g2.len(), 1);
    let t = g2[0].component_type().unwrap();
    assert_eq!(t.multiset, vec![vec![0, 1], vec![1, 0]]);

    let four = enumerate_stable_prediagrams(&[1, 1, 1, 1], 16).unwrap();
    let base = load_preset("prym1111-base").unwrap().prediagram().unwrap();
    let want = base.component_type().unwrap().multiset;
    assert_eq!(want, vec![vec![0, 1], vec![0, 1], vec![1, 0], vec![1, 0]]);
    assert!(four.iter().any(|p| {
        let m = p.component_type().unwrap().multiset;
        m == want || p.reversal().component_type().unwrap().multiset == want
    }));
    assert!(matches!(enumerate_stable_prediagrams(&[3, 3, 3], 16), Err(Error::SizeCap(_))));
}

#[test]
fn prym_surface_involutions() {
    for id in PRYM_SURFACES {
        let p = load_preset(id).unwrap();
        let d = p.diagram(GOLDEN).unwrap();
        let all = find_prym_involutions(&d);
        assert!(!all.is_empty(), "{id}");
        let designated = p.prym_involution(GOLDEN).unwrap().unwrap();
        assert!(all.iter().any(|i| i.rho == designated.rho), "{id}");
        for inv in &all {
            check_structure(&d.prediagram, &d.matching, &inv.rho).unwrap();
            assert!(satisfies_formula(inv.fixed_counts, 3));
            if let Some(j) = inv.conjugate_of {
                assert_eq!(all[j].fixed_counts, inv.fixed_counts);
            }
        }
    }
}

#[test]
fn base_automorphisms_commuting_with_involution() {
    let spec = base_spec();
    let rho = spec.involution.clone().unwrap();
    let mut count = 0;
    search_isomorphisms(&spec.base, &spec.base, false, &mut |phi| {
        if (0..phi.len()).all(|e| phi[rho[e]] == rho[phi[e]]) {
            count += 1;
        }
        false
    });
    assert_eq!(count, 8);
}

#[test]
fn unmatched_survivor_matching_rejected_by_validation() {
    let spec = base_spec();
    let m = Matching::default();
    assert!(m.validate(&spec.base).is_err());
}
