//! Prediagrams of separatrices (E, σ, τ, θ), diagrams with a matching and a
//! metric, component types, reversal and isomorphisms.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{positive_solution, QuadraticNumber, Rational};

/// Edge ends are 0..n. `positive[e]` encodes θ, i.e. membership in E₊.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Prediagram {
    pub sigma: Vec<usize>,
    pub tau: Vec<usize>,
    pub positive: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: String,
    pub ends: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, kind: &str, ends: Vec<usize>) {
        if !ends.is_empty() {
            self.violations.push(Violation { kind: kind.to_string(), ends });
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CylinderComponent {
    /// Least edge end of the orbit, used as the component id.
    pub id: usize,
    /// The σ∞-orbit, starting at `id`.
    pub edges: Vec<usize>,
    pub positive: bool,
}

/// A τ-pair, oriented from its positive end.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SaddleConnection {
    pub id: usize,
    pub positive_end: usize,
    pub negative_end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramType {
    /// Canonical type of each connected component, in order of least end.
    pub components: Vec<Vec<usize>>,
    /// The same types, sorted.
    pub multiset: Vec<Vec<usize>>,
}

pub fn orbits(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut j = s;
        while !seen[j] {
            seen[j] = true;
            cyc.push(j);
            j = perm[j];
        }
        out.push(cyc);
    }
    out
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

pub fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    g.iter().map(|&x| f[x]).collect()
}

pub fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

impl Prediagram {
    /// Builds and validates.
    pub fn new(sigma: Vec<usize>, tau: Vec<usize>, positive: &[usize]) -> Result<Self> {
        let n = sigma.len();
        let mut pos = vec![false; n];
        for &e in positive {
            if e >= n {
                return Err(Error::InvalidPrediagram(format!("positive end {e} out of range")));
            }
            pos[e] = true;
        }
        let p = Prediagram { sigma, tau, positive: pos };
        let report = p.validate();
        if !report.is_valid() {
            let kinds: Vec<_> = report.violations.iter().map(|v| v.kind.as_str()).collect();
            return Err(Error::InvalidPrediagram(kinds.join(", ")));
        }
        Ok(p)
    }

    pub fn n_ends(&self) -> usize {
        self.sigma.len()
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.sigma.len();
        let mut r = ValidationReport::default();
        if self.tau.len() != n || self.positive.len() != n {
            r.push("length-mismatch", vec![n]);
            return r;
        }
        if n % 2 == 1 {
            r.push("odd-ends", vec![n]);
        }
        let out_of_range: Vec<usize> =
            (0..n).filter(|&e| self.sigma[e] >= n || self.tau[e] >= n).collect();
        if !out_of_range.is_empty() {
            r.push("label-out-of-range", out_of_range);
            return r;
        }
        if !is_permutation(&self.sigma) {
            r.push("sigma-not-permutation", (0..n).collect());
        }
        if !is_permutation(&self.tau) {
            r.push("tau-not-permutation", (0..n).collect());
            return r;
        }
        r.push("tau-fixed-point", (0..n).filter(|&e| self.tau[e] == e).collect());
        r.push("tau-not-involution", (0..n).filter(|&e| self.tau[self.tau[e]] != e).collect());
        r.push(
            "theta-not-section",
            (0..n).filter(|&e| self.tau[e] != e && self.positive[e] == self.positive[self.tau[e]]).collect(),
        );
        if is_permutation(&self.sigma) {
            r.push(
                "not-alternating",
                (0..n).filter(|&e| self.positive[e] == self.positive[self.sigma[e]]).collect(),
            );
        }
        r
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    pub fn positive_ends(&self) -> Vec<usize> {
        (0..self.n_ends()).filter(|&e| self.positive[e]).collect()
    }

    pub fn sigma_inf(&self, e: usize) -> usize {
        self.sigma[self.tau[e]]
    }

    /// σ∞-orbits, sorted by least end.
    pub fn cylinder_components(&self) -> Vec<CylinderComponent> {
        let st: Vec<usize> = (0..self.n_ends()).map(|e| self.sigma_inf(e)).collect();
        let mut out: Vec<CylinderComponent> = orbits(&st)
            .into_iter()
            .map(|edges| {
                let positive = self.positive[edges[0]];
                debug_assert!(edges.iter().all(|&e| self.positive[e] == positive));
                CylinderComponent { id: edges[0], edges, positive }
            })
            .collect();
        out.sort_by_key(|c| c.id);
        out
    }

    /// Maps each end to the id of its cylinder component.
    pub fn component_of(&self) -> Vec<usize> {
        let mut m = vec![0; self.n_ends()];
        for c in self.cylinder_components() {
            for &e in &c.edges {
                m[e] = c.id;
            }
        }
        m
    }

    /// σ-orbits (singularities), sorted by least end.
    pub fn singularities(&self) -> Vec<Vec<usize>> {
        orbits(&self.sigma)
    }

    pub fn singularity_of(&self) -> Vec<usize> {
        let mut m = vec![0; self.n_ends()];
        for (i, o) in self.singularities().iter().enumerate() {
            for &e in o {
                m[e] = i;
            }
        }
        m
    }

    /// τ-pairs sorted by least end.
    pub fn saddle_connections(&self) -> Vec<SaddleConnection> {
        (0..self.n_ends())
            .filter(|&e| e < self.tau[e])
            .map(|e| {
                let f = self.tau[e];
                let (p, q) = if self.positive[e] { (e, f) } else { (f, e) };
                SaddleConnection { id: e, positive_end: p, negative_end: q }
            })
            .collect()
    }

    /// Maps each end to the index of its saddle connection.
    pub fn saddle_index(&self) -> Vec<usize> {
        let mut m = vec![0; self.n_ends()];
        for (i, s) in self.saddle_connections().iter().enumerate() {
            m[s.positive_end] = i;
            m[s.negative_end] = i;
        }
        m
    }

    /// Orbits of ⟨σ, τ⟩, each sorted, listed by least end.
    pub fn connected_orbits(&self) -> Vec<Vec<usize>> {
        let n = self.n_ends();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut stack = vec![s];
            seen[s] = true;
            let mut comp = Vec::new();
            while let Some(a) = stack.pop() {
                comp.push(a);
                for b in [self.sigma[a], self.tau[a]] {
                    if !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Induced sub-prediagrams, each relabeled 0..k by increasing original
    /// label; the second entry lists the original labels.
    pub fn connected_components(&self) -> Vec<(Prediagram, Vec<usize>)> {
        self.connected_orbits()
            .into_iter()
            .map(|labels| {
                let mut new = BTreeMap::new();
                for (i, &e) in labels.iter().enumerate() {
                    new.insert(e, i);
                }
                let p = Prediagram {
                    sigma: labels.iter().map(|&e| new[&self.sigma[e]]).collect(),
                    tau: labels.iter().map(|&e| new[&self.tau[e]]).collect(),
                    positive: labels.iter().map(|&e| self.positive[e]).collect(),
                };
                (p, labels)
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_orbits().len() <= 1
    }

    pub fn is_stable(&self) -> bool {
        let s = self.singularity_of();
        (0..self.n_ends()).all(|e| s[e] == s[self.tau[e]])
    }

    pub fn is_alternating(&self) -> bool {
        (0..self.n_ends()).all(|e| self.positive[e] != self.positive[self.sigma[e]])
    }

    /// Same σ and τ, complementary positive set.
    pub fn reversal(&self) -> Prediagram {
        Prediagram {
            sigma: self.sigma.clone(),
            tau: self.tau.clone(),
            positive: self.positive.iter().map(|p| !p).collect(),
        }
    }

    /// Type read from a positive base end x of a stable single σ-orbit:
    /// τσ^{2k}(x) = σ^{2f(k)+1}(x).
    fn raw_type(&self, x: usize) -> Result<Vec<usize>> {
        let mut pos = BTreeMap::new();
        let mut y = x;
        let mut j = 0;
        loop {
            pos.insert(y, j);
            j += 1;
            y = self.sigma[y];
            if y == x {
                break;
            }
        }
        if j % 2 == 1 {
            return Err(Error::OddOrbit(j));
        }
        let n = j / 2;
        let mut y = x;
        let mut f = Vec::with_capacity(n);
        for _ in 0..n {
            let t = *pos.get(&self.tau[y]).ok_or(Error::NotStable)?;
            if t % 2 == 0 {
                return Err(Error::NotAlternating);
            }
            f.push((t - 1) / 2);
            y = self.sigma[self.sigma[y]];
        }
        Ok(f)
    }

    pub fn component_type(&self) -> Result<DiagramType> {
        if !self.is_alternating() {
            return Err(Error::NotAlternating);
        }
        if !self.is_stable() {
            return Err(Error::NotStable);
        }
        let mut components = Vec::new();
        for orbit in self.connected_orbits() {
            let x = *orbit.iter().find(|&&e| self.positive[e]).ok_or(Error::NotAlternating)?;
            components.push(canonical_type(&self.raw_type(x)?));
        }
        let mut multiset = components.clone();
        multiset.sort();
        Ok(DiagramType { components, multiset })
    }

    /// Relabels ends: end e becomes perm[e].
    pub fn relabel(&self, perm: &[usize]) -> Prediagram {
        let n = self.n_ends();
        let mut sigma = vec![0; n];
        let mut tau = vec![0; n];
        let mut positive = vec![false; n];
        for e in 0..n {
            sigma[perm[e]] = perm[self.sigma[e]];
            tau[perm[e]] = perm[self.tau[e]];
            positive[perm[e]] = self.positive[e];
        }
        Prediagram { sigma, tau, positive }
    }
}

/// Lexicographically least conjugate of f under the cyclic group ⟨c_n⟩,
/// c_n(k) = k + 1 mod n.
pub fn canonical_type(f: &[usize]) -> Vec<usize> {
    let n = f.len();
    (0..n.max(1))
        .map(|s| (0..n).map(|k| (f[(k + s) % n] + n - s) % n).collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// Canonical form of (f ∘ c_n)⁻¹.
pub fn reversed_type(f: &[usize]) -> Vec<usize> {
    let n = f.len();
    let fc: Vec<usize> = (0..n).map(|k| f[(k + 1) % n]).collect();
    canonical_type(&invert(&fc))
}

/// The single-vertex stable prediagram of type f: ends x_j = j around the
/// vertex, σ(x_j) = x_{j+1}, even ends positive, τ(x_{2k}) = x_{2f(k)+1}.
pub fn prediagram_from_type(f: &[usize]) -> Prediagram {
    let n = f.len();
    let sigma = (0..2 * n).map(|j| (j + 1) % (2 * n)).collect();
    let mut tau = vec![0; 2 * n];
    for k in 0..n {
        tau[2 * k] = 2 * f[k] + 1;
        tau[2 * f[k] + 1] = 2 * k;
    }
    let positive = (0..2 * n).map(|j| j % 2 == 0).collect();
    Prediagram { sigma, tau, positive }
}

pub fn disjoint_union(parts: &[Prediagram]) -> Prediagram {
    let mut out = Prediagram { sigma: vec![], tau: vec![], positive: vec![] };
    for p in parts {
        let off = out.sigma.len();
        out.sigma.extend(p.sigma.iter().map(|x| x + off));
        out.tau.extend(p.tau.iter().map(|x| x + off));
        out.positive.extend(p.positive.iter());
    }
    out
}

/// Backtracking over bijections φ with φσ₁ = σ₂φ, φτ₁ = τ₂φ and
/// φ(E₊¹) = E₊² (or E₋² when `reverse`, i.e. maps into the reversal).
/// `accept` sees each complete φ and returns true to stop the search.
pub fn search_isomorphisms(
    p1: &Prediagram,
    p2: &Prediagram,
    reverse: bool,
    accept: &mut dyn FnMut(&[usize]) -> bool,
) {
    let n = p1.n_ends();
    if p2.n_ends() != n {
        return;
    }
    let orbit_len = |p: &Prediagram| {
        let mut l = vec![0; p.n_ends()];
        for o in p.singularities() {
            for &e in &o {
                l[e] = o.len();
            }
        }
        l
    };
    let (l1, l2) = (orbit_len(p1), orbit_len(p2));
    let comps = p1.connected_orbits();
    let mut phi = vec![usize::MAX; n];
    let mut inv = vec![usize::MAX; n];

    fn propagate(
        p1: &Prediagram,
        p2: &Prediagram,
        reverse: bool,
        phi: &mut [usize],
        inv: &mut [usize],
        x: usize,
        y: usize,
        trail: &mut Vec<usize>,
    ) -> bool {
        let mut stack = vec![(x, y)];
        while let Some((a, b)) = stack.pop() {
            if phi[a] != usize::MAX {
                if phi[a] != b {
                    return false;
                }
                continue;
            }
            if inv[b] != usize::MAX || p1.positive[a] != (p2.positive[b] != reverse) {
                return false;
            }
            phi[a] = b;
            inv[b] = a;
            trail.push(a);
            stack.push((p1.sigma[a], p2.sigma[b]));
            stack.push((p1.tau[a], p2.tau[b]));
        }
        true
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        ci: usize,
        comps: &[Vec<usize>],
        p1: &Prediagram,
        p2: &Prediagram,
        reverse: bool,
        l1: &[usize],
        l2: &[usize],
        phi: &mut Vec<usize>,
        inv: &mut Vec<usize>,
        accept: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if ci == comps.len() {
            return accept(phi);
        }
        let x = comps[ci][0];
        for y in 0..p2.n_ends() {
            if inv[y] != usize::MAX || l1[x] != l2[y] {
                continue;
            }
            let mut trail = Vec::new();
            let ok = propagate(p1, p2, reverse, phi, inv, x, y, &mut trail);
            if ok && rec(ci + 1, comps, p1, p2, reverse, l1, l2, phi, inv, accept) {
                return true;
            }
            for a in trail {
                inv[phi[a]] = usize::MAX;
                phi[a] = usize::MAX;
            }
        }
        false
    }

    rec(0, &comps, p1, p2, reverse, &l1, &l2, &mut phi, &mut inv, accept);
}

/// An isomorphism P1 → P2 if one exists. Stable connected inputs are
/// decided by type, with φ built by aligning base ends of equal raw type;
/// everything else goes through the backtracking search.
pub fn are_isomorphic(p1: &Prediagram, p2: &Prediagram) -> Option<Vec<usize>> {
    if p1.n_ends() != p2.n_ends() {
        return None;
    }
    let simple = |p: &Prediagram| p.is_valid() && p.is_stable() && p.is_connected() && p.n_ends() > 0;
    if simple(p1) && simple(p2) {
        let t1 = p1.component_type().ok()?;
        let t2 = p2.component_type().ok()?;
        if t1.components != t2.components {
            return None;
        }
        let canon = &t1.components[0];
        let base = |p: &Prediagram| {
            p.positive_ends().into_iter().find(|&x| p.raw_type(x).ok().as_ref() == Some(canon))
        };
        let (x1, x2) = (base(p1)?, base(p2)?);
        let mut phi = vec![0; p1.n_ends()];
        let (mut a, mut b) = (x1, x2);
        loop {
            phi[a] = b;
            a = p1.sigma[a];
            b = p2.sigma[b];
            if a == x1 {
                break;
            }
        }
        debug_assert!(is_isomorphism(p1, p2, &phi, false));
        return Some(phi);
    }
    let mut found = None;
    search_isomorphisms(p1, p2, false, &mut |phi| {
        found = Some(phi.to_vec());
        true
    });
    found
}

pub fn is_isomorphism(p1: &Prediagram, p2: &Prediagram, phi: &[usize], reverse: bool) -> bool {
    let n = p1.n_ends();
    phi.len() == n
        && p2.n_ends() == n
        && is_permutation(phi)
        && (0..n).all(|e| {
            phi[p1.sigma[e]] == p2.sigma[phi[e]]
                && phi[p1.tau[e]] == p2.tau[phi[e]]
                && p1.positive[e] == (p2.positive[phi[e]] != reverse)
        })
}

/// Positive component id → negative component id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching(pub BTreeMap<usize, usize>);

impl Matching {
    pub fn validate(&self, p: &Prediagram) -> Result<()> {
        let comps = p.cylinder_components();
        let pos: Vec<usize> = comps.iter().filter(|c| c.positive).map(|c| c.id).collect();
        let mut neg: Vec<usize> = comps.iter().filter(|c| !c.positive).map(|c| c.id).collect();
        let keys: Vec<usize> = self.0.keys().copied().collect();
        let mut vals: Vec<usize> = self.0.values().copied().collect();
        vals.sort_unstable();
        neg.sort_unstable();
        if keys != pos || vals != neg {
            return Err(Error::InvalidDiagram(
                "matching is not a bijection from positive to negative components".into(),
            ));
        }
        Ok(())
    }

    pub fn inverse(&self) -> BTreeMap<usize, usize> {
        self.0.iter().map(|(&p, &q)| (q, p)).collect()
    }
}

/// True when φ : (P1, m1) → (P2, m2) carries matched pairs to matched pairs.
/// With `reverse`, P2's roles are read in its reversal, whose matching is m2⁻¹.
pub fn transports_matching(
    _p1: &Prediagram,
    m1: &Matching,
    p2: &Prediagram,
    m2: &Matching,
    phi: &[usize],
    reverse: bool,
) -> bool {
    let c2 = p2.component_of();
    let inv2 = m2.inverse();
    m1.0.iter().all(|(&p, &q)| {
        let a = c2[phi[p]];
        let b = c2[phi[q]];
        if reverse {
            inv2.get(&a) == Some(&b)
        } else {
            m2.0.get(&a) == Some(&b)
        }
    })
}

/// Rows of l̂(c) − l̂(m(c)) = 0 over the saddle-connection variables.
pub fn matching_equations(p: &Prediagram, m: &Matching) -> Vec<Vec<Rational>> {
    let sc = p.saddle_index();
    let ns = p.n_ends() / 2;
    let comps: BTreeMap<usize, CylinderComponent> = p.cylinder_components().into_iter().map(|c| (c.id, c)).collect();
    m.0.iter()
        .map(|(&a, &b)| {
            let mut row = vec![Rational::zero(); ns];
            for &e in &comps[&a].edges {
                row[sc[e]] += Rational::one();
            }
            for &e in &comps[&b].edges {
                row[sc[e]] -= Rational::one();
            }
            row
        })
        .collect()
}

/// A strictly positive rational metric compatible with the matching, plus
/// optional equalities between saddle connections (pairs of indices).
/// All-ones is preferred when it works.
pub fn metric_feasible_with(p: &Prediagram, m: &Matching, equal: &[(usize, usize)]) -> Option<Vec<Rational>> {
    let ns = p.n_ends() / 2;
    let mut rows = matching_equations(p, m);
    for &(i, j) in equal {
        if i != j {
            let mut r = vec![Rational::zero(); ns];
            r[i] += Rational::one();
            r[j] -= Rational::one();
            rows.push(r);
        }
    }
    let ones = vec![Rational::one(); ns];
    if rows.iter().all(|r| r.iter().fold(Rational::zero(), |acc, x| acc + x).is_zero()) {
        return Some(ones);
    }
    positive_solution(&rows, ns)
}

pub fn metric_feasible(p: &Prediagram, m: &Matching) -> Option<Vec<Rational>> {
    metric_feasible_with(p, m, &[])
}

/// Cylinder: a matched pair, bottom = positive component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cylinder {
    pub bottom: usize,
    pub top: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatrixDiagram {
    pub prediagram: Prediagram,
    pub matching: Matching,
    /// One length per saddle connection, in `saddle_connections()` order.
    pub lengths: Vec<QuadraticNumber>,
    pub d: u64,
}

impl SeparatrixDiagram {
    pub fn new(prediagram: Prediagram, matching: Matching, lengths: Vec<QuadraticNumber>, d: u64) -> Result<Self> {
        let dg = SeparatrixDiagram { prediagram, matching, lengths, d };
        dg.validate()?;
        Ok(dg)
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.prediagram.validate();
        if !r.is_valid() {
            let kinds: Vec<_> = r.violations.iter().map(|v| v.kind.as_str()).collect();
            return Err(Error::InvalidPrediagram(kinds.join(", ")));
        }
        self.matching.validate(&self.prediagram)?;
        if self.lengths.len() != self.prediagram.n_ends() / 2 {
            return Err(Error::InvalidDiagram(format!(
                "{} lengths for {} saddle connections",
                self.lengths.len(),
                self.prediagram.n_ends() / 2
            )));
        }
        for l in &self.lengths {
            if l.d != self.d {
                return Err(Error::ContextMismatch(self.d, l.d));
            }
            if !l.is_positive() {
                return Err(Error::InvalidDiagram(format!("non-positive length {l}")));
            }
        }
        for (&p, &q) in &self.matching.0 {
            if self.hat_l(p) != self.hat_l(q) {
                return Err(Error::InvalidDiagram(format!("matched components C{p} and C{q} differ in length")));
            }
        }
        Ok(())
    }

    pub fn end_length(&self, e: usize) -> &QuadraticNumber {
        &self.lengths[self.prediagram.saddle_index()[e]]
    }

    /// l̂ of the component with the given id.
    pub fn hat_l(&self, comp: usize) -> QuadraticNumber {
        let sc = self.prediagram.saddle_index();
        let mut acc = QuadraticNumber::zero(self.d);
        let mut e = comp;
        loop {
            acc = &acc + &self.lengths[sc[e]];
            e = self.prediagram.sigma_inf(e);
            if e == comp {
                break;
            }
        }
        acc
    }

    /// Cylinders ordered by bottom component id.
    pub fn cylinders(&self) -> Vec<Cylinder> {
        self.matching.0.iter().map(|(&bottom, &top)| Cylinder { bottom, top }).collect()
    }

    pub fn circumferences(&self) -> Vec<QuadraticNumber> {
        self.cylinders().iter().map(|c| self.hat_l(c.bottom)).collect()
    }

    pub fn to_json(&self) -> DiagramJson {
        DiagramJson::from_parts(&self.prediagram, &self.matching, &self.lengths, self.d)
    }
}

/// An isomorphism of separatrix diagrams transports the matching and the
/// metric; `reverse` targets the reversal of D2.
pub fn diagram_isomorphisms(d1: &SeparatrixDiagram, d2: &SeparatrixDiagram, reverse: bool, first: bool) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if d1.d != d2.d {
        return out;
    }
    let sc1 = d1.prediagram.saddle_index();
    let sc2 = d2.prediagram.saddle_index();
    search_isomorphisms(&d1.prediagram, &d2.prediagram, reverse, &mut |phi| {
        let ok = transports_matching(&d1.prediagram, &d1.matching, &d2.prediagram, &d2.matching, phi, reverse)
            && (0..phi.len()).all(|e| d1.lengths[sc1[e]] == d2.lengths[sc2[phi[e]]]);
        if ok {
            out.push(phi.to_vec());
        }
        ok && first
    });
    out
}

pub fn diagram_isomorphic(d1: &SeparatrixDiagram, d2: &SeparatrixDiagram) -> bool {
    !diagram_isomorphisms(d1, d2, false, true).is_empty()
}

/// Wire form. Field order is alphabetical so serialization is canonical.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub d: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heights: Option<BTreeMap<String, QuadraticNumber>>,
    #[serde(default)]
    pub lengths: BTreeMap<String, QuadraticNumber>,
    #[serde(default)]
    pub matching: BTreeMap<String, String>,
    pub n_ends: usize,
    pub positive: Vec<usize>,
    pub sigma: Vec<Vec<usize>>,
    pub tau: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twists: Option<BTreeMap<String, QuadraticNumber>>,
}

pub fn comp_key(id: usize) -> String {
    format!("C{id}")
}

pub fn sc_key(id: usize) -> String {
    format!("S{id}")
}

fn parse_key(s: &str, prefix: char) -> Result<usize> {
    s.strip_prefix(prefix)
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad id '{s}' (expected {prefix}<n>)")))
}

impl DiagramJson {
    pub fn from_parts(p: &Prediagram, m: &Matching, lengths: &[QuadraticNumber], d: u64) -> Self {
        let scs = p.saddle_connections();
        DiagramJson {
            d,
            heights: None,
            lengths: scs.iter().zip(lengths).map(|(s, l)| (sc_key(s.id), l.clone())).collect(),
            matching: m.0.iter().map(|(&a, &b)| (comp_key(a), comp_key(b))).collect(),
            n_ends: p.n_ends(),
            positive: p.positive_ends(),
            sigma: orbits(&p.sigma),
            tau: scs.iter().map(|s| vec![s.id, p.tau[s.id]]).collect(),
            twists: None,
        }
    }

    pub fn prediagram_json(p: &Prediagram) -> Self {
        Self::from_parts(p, &Matching::default(), &[], 0)
    }

    /// Raw prediagram, not validated.
    pub fn prediagram(&self) -> Result<Prediagram> {
        let n = self.n_ends;
        let mut sigma: Vec<usize> = (0..n).collect();
        for cyc in &self.sigma {
            for (i, &e) in cyc.iter().enumerate() {
                let f = cyc[(i + 1) % cyc.len()];
                if e >= n || f >= n {
                    return Err(Error::Parse(format!("sigma label out of range in {cyc:?}")));
                }
                sigma[e] = f;
            }
        }
        let mut tau: Vec<usize> = (0..n).collect();
        for pair in &self.tau {
            if pair.len() != 2 || pair[0] >= n || pair[1] >= n {
                return Err(Error::Parse(format!("bad tau pair {pair:?}")));
            }
            tau[pair[0]] = pair[1];
            tau[pair[1]] = pair[0];
        }
        let mut positive = vec![false; n];
        for &e in &self.positive {
            if e >= n {
                return Err(Error::Parse(format!("positive end {e} out of range")));
            }
            positive[e] = true;
        }
        Ok(Prediagram { sigma, tau, positive })
    }

    pub fn matching(&self) -> Result<Matching> {
        let mut m = BTreeMap::new();
        for (a, b) in &self.matching {
            m.insert(parse_key(a, 'C')?, parse_key(b, 'C')?);
        }
        Ok(Matching(m))
    }

    pub fn has_matching(&self) -> bool {
        !self.matching.is_empty()
    }

    /// Lengths in saddle-connection order for prediagram `p`.
    pub fn lengths_for(&self, p: &Prediagram) -> Result<Vec<QuadraticNumber>> {
        p.saddle_connections()
            .iter()
            .map(|s| {
                self.lengths
                    .get(&sc_key(s.id))
                    .cloned()
                    .ok_or_else(|| Error::Parse(format!("missing length for {}", sc_key(s.id))))
            })
            .collect()
    }

    pub fn diagram(&self) -> Result<SeparatrixDiagram> {
        let p = self.prediagram()?;
        let m = self.matching()?;
        let l = self.lengths_for(&p)?;
        SeparatrixDiagram::new(p, m, l, self.d)
    }

    pub fn to_canonical_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> Prediagram {
        Prediagram::new(vec![1, 0], vec![1, 0], &[0]).unwrap()
    }

    #[test]
    fn torus_components() {
        let t = torus();
        let c = t.cylinder_components();
        assert_eq!(c.len(), 2);
        assert!(c[0].positive && !c[1].positive);
        assert!(t.is_stable());
        assert_eq!(t.component_type().unwrap().components, vec![vec![0]]);
    }

    #[test]
    fn validation_kinds() {
        let p = Prediagram { sigma: vec![1, 0], tau: vec![0, 1], positive: vec![true, false] };
        let kinds: Vec<String> = p.validate().violations.into_iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&"tau-fixed-point".to_string()));
        let p = Prediagram { sigma: vec![1, 0], tau: vec![1, 0], positive: vec![true, true] };
        let kinds: Vec<String> = p.validate().violations.into_iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&"theta-not-section".to_string()));
    }

    #[test]
    fn canonical_types_s3() {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut classes: Vec<Vec<usize>> = perms.iter().map(|p| canonical_type(p)).collect();
        classes.sort();
        classes.dedup();
        // id, c3, c3², and the three transpositions in one class
        assert_eq!(classes.len(), 4);
        for p in perms {
            let c = canonical_type(&p);
            assert_eq!(canonical_type(&c), c);
        }
    }

    #[test]
    fn reversal_of_identity_in_s2() {
        let p = prediagram_from_type(&[0, 1]);
        let r = p.reversal();
        assert_eq!(r.component_type().unwrap().components, vec![vec![1, 0]]);
        assert_eq!(reversed_type(&[0, 1]), vec![1, 0]);
        assert_eq!(r.reversal(), p);
    }

    #[test]
    fn type_mismatch_is_not_isomorphic() {
        let a = prediagram_from_type(&[0, 1]);
        let b = prediagram_from_type(&[1, 0]);
        assert!(are_isomorphic(&a, &b).is_none());
        let phi = are_isomorphic(&a, &a).unwrap();
        assert!(is_isomorphism(&a, &a, &phi, false));
    }

    #[test]
    fn torus_metric() {
        let t = torus();
        let c = t.cylinder_components();
        let m = Matching([(c[0].id, c[1].id)].into_iter().collect());
        assert_eq!(metric_feasible(&t, &m), Some(vec![Rational::one()]));
    }

    #[test]
    fn json_round_trip() {
        let t = torus();
        let m = Matching([(0, 1)].into_iter().collect());
        let d = SeparatrixDiagram::new(t, m, vec![QuadraticNumber::from_int(1, 0)], 0).unwrap();
        let s = d.to_json().to_canonical_string();
        let back: DiagramJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.diagram().unwrap(), d);
        assert_eq!(back.to_canonical_string(), s);
    }
}
