//! Combinatorial Prym involutions: isomorphisms Γ → Γ̄ of order two that
//! transport the matching and the metric and satisfy
//! #Fix(ρ₀) + #Fix(τρ) + 2·#Fix(ρ∘m) = 10 − 2g.

use serde::Serialize;

use crate::diagram::{
    diagram_isomorphisms, is_isomorphism, search_isomorphisms, transports_matching, Matching, Prediagram,
    SeparatrixDiagram,
};
use crate::error::{Error, Result};
use crate::surface::stratum_signature;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrymInvolution {
    pub rho: Vec<usize>,
    /// Induced permutation of singularities (σ-orbits by least end).
    pub rho0: Vec<usize>,
    /// Induced permutation of cylinders (ordered by bottom component).
    pub pi: Vec<usize>,
    /// (#Fix ρ₀, #Fix τρ on saddle connections, #fixed cylinders).
    pub fixed_counts: (usize, usize, usize),
    /// Index of an earlier involution conjugate to this one by a diagram
    /// automorphism.
    pub conjugate_of: Option<usize>,
}

impl PrymInvolution {
    pub fn fixed_cylinders(&self) -> Vec<usize> {
        (0..self.pi.len()).filter(|&i| self.pi[i] == i).collect()
    }

    pub fn fixed_total(&self) -> usize {
        self.fixed_counts.0 + self.fixed_counts.1 + 2 * self.fixed_counts.2
    }
}

pub fn formula_rhs(genus: usize) -> i64 {
    10 - 2 * genus as i64
}

pub fn satisfies_formula(counts: (usize, usize, usize), genus: usize) -> bool {
    (counts.0 + counts.1 + 2 * counts.2) as i64 == formula_rhs(genus)
}

/// ρ is an isomorphism Γ → Γ̄ with ρ² = id that transports the matching.
pub fn check_structure(p: &Prediagram, m: &Matching, rho: &[usize]) -> Result<()> {
    if !is_isomorphism(p, p, rho, true) {
        return Err(Error::MalformedInvolution("not an isomorphism onto the reversal".into()));
    }
    if (0..rho.len()).any(|e| rho[rho[e]] != e) {
        return Err(Error::MalformedInvolution("square is not the identity".into()));
    }
    if !transports_matching(p, m, p, m, rho, true) {
        return Err(Error::MalformedInvolution("does not transport the matching".into()));
    }
    Ok(())
}

pub fn cylinder_permutation_parts(p: &Prediagram, m: &Matching, rho: &[usize]) -> Result<(Vec<usize>, usize)> {
    check_structure(p, m, rho)?;
    let comp = p.component_of();
    let cyls: Vec<(usize, usize)> = m.0.iter().map(|(&a, &b)| (a, b)).collect();
    let mut pi = Vec::with_capacity(cyls.len());
    for &(bottom, _) in &cyls {
        let image_top = comp[rho[bottom]];
        let j = cyls
            .iter()
            .position(|&(_, t)| t == image_top)
            .ok_or_else(|| Error::MalformedInvolution("cylinder image not found".into()))?;
        pi.push(j);
    }
    for (i, &(_, top)) in cyls.iter().enumerate() {
        if comp[rho[top]] != cyls[pi[i]].0 {
            return Err(Error::MalformedInvolution("inconsistent cylinder action".into()));
        }
    }
    let fixed = (0..pi.len()).filter(|&i| pi[i] == i).count();
    Ok((pi, fixed))
}

pub fn fixed_point_count_parts(p: &Prediagram, m: &Matching, rho: &[usize]) -> Result<(usize, usize, usize)> {
    let (_, fc) = cylinder_permutation_parts(p, m, rho)?;
    let vert = p.singularity_of();
    let f0 = p.singularities().iter().filter(|o| vert[rho[o[0]]] == vert[o[0]]).count();
    let ft = (0..p.n_ends()).filter(|&e| p.tau[rho[e]] == e).count() / 2;
    Ok((f0, ft, fc))
}

pub fn fixed_point_count(d: &SeparatrixDiagram, rho: &[usize]) -> Result<(usize, usize, usize)> {
    fixed_point_count_parts(&d.prediagram, &d.matching, rho)
}

pub fn cylinder_permutation(d: &SeparatrixDiagram, rho: &[usize]) -> Result<(Vec<usize>, usize)> {
    cylinder_permutation_parts(&d.prediagram, &d.matching, rho)
}

/// Builds the full record for ρ, checking structure and the fixed-point
/// formula (genus from the stratum signature).
pub fn involution_from(p: &Prediagram, m: &Matching, rho: &[usize]) -> Result<PrymInvolution> {
    let genus = stratum_signature(p)?.genus;
    let counts = fixed_point_count_parts(p, m, rho)?;
    if !satisfies_formula(counts, genus) {
        return Err(Error::MalformedInvolution(format!(
            "fixed points {counts:?} do not sum to {}",
            formula_rhs(genus)
        )));
    }
    let (pi, _) = cylinder_permutation_parts(p, m, rho)?;
    let vert = p.singularity_of();
    let rho0 = p.singularities().iter().map(|o| vert[rho[o[0]]]).collect();
    Ok(PrymInvolution { rho: rho.to_vec(), rho0, pi, fixed_counts: counts, conjugate_of: None })
}

fn flag_conjugates(list: &mut [PrymInvolution], autos: &[Vec<usize>]) {
    for k in 0..list.len() {
        for j in 0..k {
            let conj = autos.iter().any(|a| {
                // a ρ_j a⁻¹ = ρ_k  ⇔  a ∘ ρ_j = ρ_k ∘ a
                (0..a.len()).all(|e| a[list[j].rho[e]] == list[k].rho[a[e]])
            });
            if conj {
                list[k].conjugate_of = Some(j);
                break;
            }
        }
    }
}

/// All combinatorial Prym involutions of the diagram, sorted by ρ.
pub fn find_prym_involutions(d: &SeparatrixDiagram) -> Vec<PrymInvolution> {
    if !d.prediagram.is_stable() {
        return Vec::new();
    }
    let mut out: Vec<PrymInvolution> = diagram_isomorphisms(d, d, true, false)
        .into_iter()
        .filter_map(|rho| involution_from(&d.prediagram, &d.matching, &rho).ok())
        .collect();
    out.sort_by(|a, b| a.rho.cmp(&b.rho));
    let autos = diagram_isomorphisms(d, d, false, false);
    flag_conjugates(&mut out, &autos);
    out
}

/// Metric-free variant: involutions of (Γ, m) alone.
pub fn find_combinatorial_involutions(p: &Prediagram, m: &Matching) -> Vec<PrymInvolution> {
    let mut out = Vec::new();
    if !p.is_stable() {
        return out;
    }
    search_isomorphisms(p, p, true, &mut |rho| {
        if let Ok(inv) = involution_from(p, m, rho) {
            out.push(inv);
        }
        false
    });
    out.sort_by(|a, b| a.rho.cmp(&b.rho));
    out
}

/// Cycle notation, 1-based, fixed points omitted; "()" for the identity.
pub fn cycle_notation(perm: &[usize]) -> String {
    let cycles: Vec<String> = crate::diagram::orbits(perm)
        .into_iter()
        .filter(|c| c.len() > 1)
        .map(|c| format!("({})", c.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(" ")))
        .collect();
    if cycles.is_empty() {
        "()".into()
    } else {
        cycles.concat()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaCheck {
    pub lhs: usize,
    pub rhs: i64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutionReport {
    pub rho: Vec<usize>,
    pub rho0: String,
    pub pi: String,
    pub fixed_counts: [usize; 3],
    pub fixed_cylinders: Vec<usize>,
    pub formula: FormulaCheck,
    pub conjugate_of: Option<usize>,
}

pub fn involution_report(inv: &PrymInvolution, genus: usize) -> InvolutionReport {
    InvolutionReport {
        rho: inv.rho.clone(),
        rho0: cycle_notation(&inv.rho0),
        pi: cycle_notation(&inv.pi),
        fixed_counts: [inv.fixed_counts.0, inv.fixed_counts.1, inv.fixed_counts.2],
        fixed_cylinders: inv.fixed_cylinders().iter().map(|i| i + 1).collect(),
        formula: FormulaCheck {
            lhs: inv.fixed_total(),
            rhs: formula_rhs(genus),
            holds: satisfies_formula(inv.fixed_counts, genus),
        },
        conjugate_of: inv.conjugate_of,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn notation() {
        assert_eq!(cycle_notation(&[4, 3, 2, 1, 0]), "(1 5)(2 4)");
        assert_eq!(cycle_notation(&[0, 1]), "()");
    }

    #[test]
    fn identity_is_not_an_involution_of_the_reversal() {
        let p = Prediagram::new(vec![1, 0], vec![1, 0], &[0]).unwrap();
        let m = Matching([(0, 1)].into_iter().collect());
        assert!(check_structure(&p, &m, &[0, 1]).is_err());
        // the swap is: torus, g = 1, 10 - 2 = 8 would be needed
        assert!(check_structure(&p, &m, &[1, 0]).is_ok());
        assert!(involution_from(&p, &m, &[1, 0]).is_err());
    }
}
