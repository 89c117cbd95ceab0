#![allow(dead_code)]

use flatkern::diagram::{disjoint_union, metric_feasible, prediagram_from_type, Matching, Prediagram, SeparatrixDiagram};
use flatkern::exactalg::QuadraticNumber;
use flatkern::surface::is_connected_surface;
use itertools::Itertools;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

pub const PRYM_SURFACES: [&str; 5] = ["prym1111-s1", "prym1111-s2", "prym1111-s3", "prym1111-s4", "prym1111-s5"];

pub fn sample<S: Strategy>(runner: &mut TestRunner, s: S) -> S::Value {
    s.new_tree(runner).expect("strategy").current()
}

/// Admissible matchings (connected surface, feasible metric) of a prediagram.
pub fn admissible_matchings(p: &Prediagram) -> Vec<(Matching, Vec<QuadraticNumber>)> {
    let comps = p.cylinder_components();
    let pos: Vec<usize> = comps.iter().filter(|c| c.positive).map(|c| c.id).collect();
    let neg: Vec<usize> = comps.iter().filter(|c| !c.positive).map(|c| c.id).collect();
    if pos.len() != neg.len() {
        return Vec::new();
    }
    neg.iter()
        .copied()
        .permutations(neg.len())
        .filter_map(|q| {
            let m = Matching(pos.iter().copied().zip(q).collect());
            if !is_connected_surface(p, &m) {
                return None;
            }
            let l = metric_feasible(p, &m)?;
            Some((m, l.into_iter().map(|x| QuadraticNumber::rational(x, 0)).collect()))
        })
        .collect()
}

/// Random stable connected diagram with rational metric and at most 12 ends.
pub fn random_stable_diagram(runner: &mut TestRunner) -> SeparatrixDiagram {
    loop {
        let sizes: Vec<usize> = sample(runner, prop::collection::vec(1usize..=3, 1..=3));
        if sizes.iter().map(|n| 2 * n).sum::<usize>() > 12 {
            continue;
        }
        let parts: Vec<Prediagram> = sizes
            .iter()
            .map(|&n| {
                let f: Vec<usize> = sample(runner, Just((0..n).collect::<Vec<_>>()).prop_shuffle());
                prediagram_from_type(&f)
            })
            .collect();
        let p = disjoint_union(&parts);
        let options = admissible_matchings(&p);
        if options.is_empty() {
            continue;
        }
        let k = sample(runner, 0..options.len());
        let (m, l) = options[k].clone();
        return SeparatrixDiagram::new(p, m, l, 0).expect("admissible");
    }
}
