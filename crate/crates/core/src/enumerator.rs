//! Exhaustive search over matchings of a base prediagram, filtered by the
//! existence of a Prym involution, connectivity and metric feasibility, and
//! reduced modulo isomorphism; plus enumeration of stable prediagrams by type.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::Serialize;

use crate::diagram::{
    canonical_type, comp_key, disjoint_union, metric_feasible, metric_feasible_with, prediagram_from_type,
    search_isomorphisms, transports_matching, Matching, Prediagram,
};
use crate::error::{Error, Result};
use crate::exactalg::Rational;
use crate::presets::LabelScheme;
use crate::prym::{
    check_structure, fixed_point_count_parts, involution_from, satisfies_formula, PrymInvolution,
};
use crate::surface::{is_connected_surface, stratum_signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Filter {
    Involution,
    Connectivity,
    Metric,
}

pub const DEFAULT_ORDER: [Filter; 3] = [Filter::Involution, Filter::Connectivity, Filter::Metric];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    NoInvolution,
    ExtraFixedCylinder,
    Disconnected,
    MetricInfeasible,
    IsomorphicDuplicate,
    OtherKind,
}

impl RejectReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            RejectReason::NoInvolution => "no-involution",
            RejectReason::ExtraFixedCylinder => "extra-fixed-cylinder",
            RejectReason::Disconnected => "disconnected",
            RejectReason::MetricInfeasible => "metric-infeasible",
            RejectReason::IsomorphicDuplicate => "isomorphic-duplicate",
            RejectReason::OtherKind => "other-kind",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub base: Prediagram,
    /// Involution of the base every candidate must carry; when absent, any
    /// involution of the candidate is accepted.
    pub involution: Option<Vec<usize>>,
    pub required_fixed_cylinders: usize,
    pub kind_filter: Option<Kind>,
    pub require_connected: bool,
    pub require_metric: bool,
    pub labels: Option<LabelScheme>,
    pub filter_order: [Filter; 3],
}

impl SearchSpec {
    pub fn new(base: Prediagram, required_fixed_cylinders: usize) -> Self {
        SearchSpec {
            base,
            involution: None,
            required_fixed_cylinders,
            kind_filter: None,
            require_connected: true,
            require_metric: true,
            labels: None,
            filter_order: DEFAULT_ORDER,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Survivor {
    pub name: String,
    pub matching: Matching,
    /// One length per saddle connection.
    pub metric: Vec<Rational>,
    pub involution: PrymInvolution,
    pub kind: Option<Kind>,
    /// Names of every candidate in the isomorphism class, representative first.
    pub class: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub name: String,
    pub matching: Matching,
    pub reason: RejectReason,
    pub duplicate_of: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationResult {
    pub candidates: usize,
    pub survivors: Vec<Survivor>,
    pub rejected: Vec<Rejection>,
}

impl ClassificationResult {
    pub fn survivor_names(&self) -> Vec<String> {
        self.survivors.iter().map(|s| s.name.clone()).collect()
    }

    pub fn rejection(&self, name: &str) -> Option<&Rejection> {
        self.rejected.iter().find(|r| r.name == name)
    }

    pub fn reason_counts(&self) -> BTreeMap<&'static str, usize> {
        let mut c = BTreeMap::new();
        for r in &self.rejected {
            *c.entry(r.reason.as_str()).or_insert(0) += 1;
        }
        c
    }
}

fn matching_name(m: &Matching, labels: Option<&LabelScheme>) -> String {
    match labels {
        Some(l) => l.tuple(m),
        None => m.0.iter().map(|(a, b)| format!("{}:{}", comp_key(*a), comp_key(*b))).join(","),
    }
}

/// All bijections positive → negative components, in lexicographic order of
/// their names when labels are given.
fn candidates(base: &Prediagram, labels: Option<&LabelScheme>) -> Vec<Matching> {
    match labels {
        Some(l) => (0..l.letters.len())
            .permutations(l.letters.len())
            .map(|perm| Matching(perm.iter().enumerate().map(|(i, &k)| (l.letters[k], l.digits[i])).collect()))
            .collect(),
        None => {
            let comps = base.cylinder_components();
            let pos: Vec<usize> = comps.iter().filter(|c| c.positive).map(|c| c.id).collect();
            let neg: Vec<usize> = comps.iter().filter(|c| !c.positive).map(|c| c.id).collect();
            if pos.len() != neg.len() {
                return Vec::new();
            }
            neg.iter()
                .copied()
                .permutations(neg.len())
                .map(|q| Matching(pos.iter().copied().zip(q).collect()))
                .collect()
        }
    }
}

/// Equalities l(s) = l(ρ(s)) between saddle connection indices.
fn rho_equalities(base: &Prediagram, rho: &[usize]) -> Vec<(usize, usize)> {
    let sc = base.saddle_index();
    base.saddle_connections().iter().map(|s| (sc[s.positive_end], sc[rho[s.positive_end]])).collect()
}

fn involution_filter(spec: &SearchSpec, m: &Matching, genus: usize) -> std::result::Result<PrymInvolution, RejectReason> {
    let base = &spec.base;
    let want = spec.required_fixed_cylinders;
    let mut extra = false;
    let mut consider = |rho: &[usize]| -> Option<PrymInvolution> {
        check_structure(base, m, rho).ok()?;
        let counts = fixed_point_count_parts(base, m, rho).ok()?;
        if counts.2 > want {
            extra = true;
            return None;
        }
        if counts.2 == want && satisfies_formula(counts, genus) {
            return involution_from(base, m, rho).ok();
        }
        None
    };
    let found = match &spec.involution {
        Some(rho) => consider(rho),
        None => {
            let mut all = Vec::new();
            search_isomorphisms(base, base, true, &mut |rho| {
                if let Some(inv) = consider(rho) {
                    all.push(inv);
                }
                false
            });
            all.sort_by(|a, b| a.rho.cmp(&b.rho));
            all.into_iter().next()
        }
    };
    match found {
        Some(inv) => Ok(inv),
        None if extra => Err(RejectReason::ExtraFixedCylinder),
        None => Err(RejectReason::NoInvolution),
    }
}

/// First kind when both fixed cylinders are bordered by the same pair of
/// singularities.
pub fn classify_kind(base: &Prediagram, m: &Matching, inv: &PrymInvolution) -> Result<Kind> {
    let fixed = inv.fixed_cylinders();
    if fixed.len() != 2 {
        return Err(Error::WrongFixedCount { expected: 2, found: fixed.len() });
    }
    let vert = base.singularity_of();
    let comps: BTreeMap<usize, Vec<usize>> = base.cylinder_components().into_iter().map(|c| (c.id, c.edges)).collect();
    let cyls: Vec<(usize, usize)> = m.0.iter().map(|(&a, &b)| (a, b)).collect();
    let border = |i: usize| -> BTreeSet<usize> {
        let (b, t) = cyls[i];
        comps[&b].iter().chain(&comps[&t]).map(|&e| vert[e]).collect()
    };
    Ok(if border(fixed[0]) == border(fixed[1]) { Kind::First } else { Kind::Second })
}

/// Class representative key: digit labels of the fixed cylinders, then the
/// name.
fn representative_key(spec: &SearchSpec, m: &Matching, inv: &PrymInvolution, name: &str) -> (Vec<usize>, String) {
    let mut digits: Vec<usize> = match &spec.labels {
        Some(l) => {
            let tops: Vec<usize> = m.0.values().copied().collect();
            inv.fixed_cylinders().iter().filter_map(|&i| l.digit_of(tops[i])).collect()
        }
        None => Vec::new(),
    };
    digits.sort_unstable();
    (digits, name.to_string())
}

fn same_class(base: &Prediagram, a: &(Matching, PrymInvolution), b: &(Matching, PrymInvolution)) -> bool {
    let mut found = false;
    search_isomorphisms(base, base, false, &mut |phi| {
        found = transports_matching(base, &a.0, base, &b.0, phi, false)
            && (0..phi.len()).all(|e| phi[a.1.rho[e]] == b.1.rho[phi[e]]);
        found
    });
    found
}

pub fn enumerate_matchings(spec: &SearchSpec) -> Result<ClassificationResult> {
    let base = &spec.base;
    if !base.is_valid() {
        return Err(Error::InvalidPrediagram("base".into()));
    }
    let genus = stratum_signature(base)?.genus;
    let labels = spec.labels.as_ref();
    let all = candidates(base, labels);
    let mut rejected = Vec::new();
    let mut passing: Vec<(String, Matching, PrymInvolution)> = Vec::new();

    for m in &all {
        let name = matching_name(m, labels);
        let mut inv: Option<PrymInvolution> = None;
        let mut reason = None;
        for f in spec.filter_order {
            let r = match f {
                Filter::Involution => match involution_filter(spec, m, genus) {
                    Ok(i) => {
                        inv = Some(i);
                        None
                    }
                    Err(r) => Some(r),
                },
                Filter::Connectivity => {
                    (spec.require_connected && !is_connected_surface(base, m)).then_some(RejectReason::Disconnected)
                }
                Filter::Metric => {
                    let eq = inv.as_ref().map(|i| rho_equalities(base, &i.rho)).unwrap_or_default();
                    (spec.require_metric && metric_feasible_with(base, m, &eq).is_none())
                        .then_some(RejectReason::MetricInfeasible)
                }
            };
            if r.is_some() {
                reason = r;
                break;
            }
        }
        match reason {
            Some(reason) => rejected.push(Rejection { name, matching: m.clone(), reason, duplicate_of: None }),
            None => passing.push((name, m.clone(), inv.expect("involution filter ran"))),
        }
    }

    // isomorphism classes
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..passing.len() {
        let pair = (passing[i].1.clone(), passing[i].2.clone());
        let hit = classes.iter_mut().find(|c| {
            let j = c[0];
            same_class(base, &(passing[j].1.clone(), passing[j].2.clone()), &pair)
        });
        match hit {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }

    let mut survivors = Vec::new();
    for class in classes {
        let rep = *class
            .iter()
            .min_by_key(|&&i| representative_key(spec, &passing[i].1, &passing[i].2, &passing[i].0))
            .expect("non-empty class");
        let (name, m, inv) = passing[rep].clone();
        let mut members: Vec<String> = class.iter().filter(|&&i| i != rep).map(|&i| passing[i].0.clone()).collect();
        members.sort();
        for &i in &class {
            if i != rep {
                rejected.push(Rejection {
                    name: passing[i].0.clone(),
                    matching: passing[i].1.clone(),
                    reason: RejectReason::IsomorphicDuplicate,
                    duplicate_of: Some(name.clone()),
                });
            }
        }
        let metric = if spec.require_metric {
            metric_feasible_with(base, &m, &rho_equalities(base, &inv.rho))
                .ok_or_else(|| Error::InvalidDiagram(format!("{name}: invariant metric vanished")))?
        } else {
            metric_feasible(base, &m).unwrap_or_default()
        };
        let kind = if spec.required_fixed_cylinders == 2 { classify_kind(base, &m, &inv).ok() } else { None };
        let mut class_names = vec![name.clone()];
        class_names.extend(members);
        survivors.push(Survivor { name, matching: m, metric, involution: inv, kind, class: class_names });
    }

    if let Some(k) = spec.kind_filter {
        let (keep, drop): (Vec<_>, Vec<_>) = survivors.into_iter().partition(|s| s.kind == Some(k));
        survivors = keep;
        for s in drop {
            rejected.push(Rejection { name: s.name, matching: s.matching, reason: RejectReason::OtherKind, duplicate_of: None });
        }
    }
    survivors.sort_by(|a, b| (a.kind, &a.name).cmp(&(b.kind, &b.name)));
    rejected.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(ClassificationResult { candidates: all.len(), survivors, rejected })
}

/// Canonical types of S_n, one per class under conjugation by c_n.
pub fn type_classes(n: usize) -> Vec<Vec<usize>> {
    let set: BTreeSet<Vec<usize>> = (0..n).permutations(n).map(|f| canonical_type(&f)).collect();
    set.into_iter().collect()
}

fn admits_surface(p: &Prediagram) -> bool {
    let comps = p.cylinder_components();
    let pos: Vec<usize> = comps.iter().filter(|c| c.positive).map(|c| c.id).collect();
    let neg: Vec<usize> = comps.iter().filter(|c| !c.positive).map(|c| c.id).collect();
    if pos.len() != neg.len() {
        return false;
    }
    neg.iter().copied().permutations(neg.len()).any(|q| {
        let m = Matching(pos.iter().copied().zip(q).collect());
        is_connected_surface(p, &m) && metric_feasible(p, &m).is_some()
    })
}

fn class_key(p: &Prediagram) -> Vec<(usize, Vec<usize>)> {
    let keyed = |q: &Prediagram| {
        let t = q.component_type().expect("stable");
        let mut k: Vec<(usize, Vec<usize>)> = t.components.into_iter().map(|f| (f.len(), f)).collect();
        k.sort();
        k
    };
    keyed(p).min(keyed(&p.reversal()))
}

/// Stable prediagrams with singularity orders `kappa` that carry at least
/// one connected surface with a positive metric, up to isomorphism and
/// reversal.
pub fn enumerate_stable_prediagrams(kappa: &[usize], max_ends: usize) -> Result<Vec<Prediagram>> {
    let total: usize = kappa.iter().map(|k| 2 * (k + 1)).sum();
    if total > max_ends.min(16) {
        return Err(Error::SizeCap(format!("{total} ends")));
    }
    let mut sizes: Vec<usize> = kappa.iter().map(|k| k + 1).collect();
    sizes.sort_unstable();
    let groups: Vec<(usize, usize)> = sizes.iter().dedup_with_count().map(|(c, &n)| (n, c)).collect();
    // for each group of equal orbit sizes, a multiset of type classes
    let per_group: Vec<Vec<Vec<Vec<usize>>>> = groups
        .iter()
        .map(|&(n, count)| {
            type_classes(n).into_iter().combinations_with_replacement(count).collect()
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for choice in per_group.into_iter().multi_cartesian_product() {
        let parts: Vec<Prediagram> = choice.iter().flatten().map(|f| prediagram_from_type(f)).collect();
        let p = disjoint_union(&parts);
        let key = class_key(&p);
        if seen.contains(&key) || !admits_surface(&p) {
            continue;
        }
        seen.insert(key);
        out.push(p);
    }
    Ok(out)
}
