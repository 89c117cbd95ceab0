//! Linear algebra in twist coordinates. Coordinate x_i twists cylinder i by
//! x_i·c_i; the isoperiodic twist space is K = {x : Σ x_i c_i [γ_i] = 0}.

use itertools::Itertools;
use serde::Serialize;

use crate::diagram::SeparatrixDiagram;
use crate::error::{Error, Result};
use crate::exactalg::{echelon_basis, qspan_dimension, rational_closure, QMatrix, QuadraticNumber};
use crate::surface::{chain_complex, stratum_signature, Surface};

pub type Vector = Vec<QuadraticNumber>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Locus {
    FullStratum,
    /// Cylinder involution (0-based).
    Prym(Vec<usize>),
    /// Basis of a subspace of twist coordinates.
    Explicit(Vec<Vector>),
}

impl Locus {
    pub fn name(&self) -> &'static str {
        match self {
            Locus::FullStratum => "full",
            Locus::Prym(_) => "prym",
            Locus::Explicit(_) => "explicit",
        }
    }
}

pub fn support(u: &[QuadraticNumber]) -> Vec<usize> {
    (0..u.len()).filter(|&i| !u[i].is_zero()).collect()
}

/// ℚ-span dimension of the entries, minus one.
pub fn degree(u: &[QuadraticNumber]) -> Result<usize> {
    if u.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    Ok(qspan_dimension(u)? - 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeformationVector {
    pub u: Vector,
    pub support: Vec<usize>,
    pub degree: usize,
}

impl DeformationVector {
    pub fn new(u: Vector) -> Result<Self> {
        let degree = degree(&u)?;
        Ok(DeformationVector { support: support(&u), degree, u })
    }

    /// Same direction, first non-zero coordinate equal to 1.
    pub fn normalized(&self) -> DeformationVector {
        let lead = self.u[self.support[0]].clone();
        let u = self.u.iter().map(|x| x.try_div(&lead).expect("non-zero lead")).collect();
        DeformationVector { u, support: self.support.clone(), degree: self.degree }
    }
}

/// u_i = δ_i / c_i.
pub fn inverse_pattern(delta: &[i64], c: &[QuadraticNumber]) -> Result<Vector> {
    if delta.len() != c.len() {
        return Err(Error::DimensionMismatch("pattern length".into()));
    }
    delta
        .iter()
        .zip(c)
        .map(|(&k, ci)| QuadraticNumber::from_int(k, ci.d).try_mul(&ci.inv()?))
        .collect()
}

fn combine(coeffs: &[QuadraticNumber], basis: &[Vector], m: usize, d: u64) -> Vector {
    let mut v = vec![QuadraticNumber::zero(d); m];
    for (t, b) in coeffs.iter().zip(basis) {
        for i in 0..m {
            v[i] = &v[i] + &(t * &b[i]);
        }
    }
    v
}

/// Basis of {v ∈ span(basis) : rows·v = 0}, where each row is a linear form on ℚ(√d)^m.
fn subspace_where(basis: &[Vector], forms: &[Vector], m: usize, d: u64) -> Vec<Vector> {
    if basis.is_empty() {
        return Vec::new();
    }
    if forms.is_empty() {
        return echelon_basis(basis, m);
    }
    let rows: Vec<Vector> = forms
        .iter()
        .map(|f| {
            basis
                .iter()
                .map(|b| f.iter().zip(b).fold(QuadraticNumber::zero(d), |acc, (x, y)| &acc + &(x * y)))
                .collect()
        })
        .collect();
    let mat = QMatrix::from_rows(d, basis.len(), rows).expect("well-formed");
    let ker = mat.kernel_basis();
    let vs: Vec<Vector> = ker.iter().map(|t| combine(t, basis, m, d)).collect();
    echelon_basis(&vs, m)
}

fn coordinate_form(j: usize, m: usize, d: u64) -> Vector {
    let mut f = vec![QuadraticNumber::zero(d); m];
    f[j] = QuadraticNumber::one(d);
    f
}

/// Basis of {v ∈ span(K) : supp(v) ⊆ s}.
pub fn restrict_to_support(k: &[Vector], s: &[usize], m: usize, d: u64) -> Vec<Vector> {
    let forms: Vec<Vector> = (0..m).filter(|j| !s.contains(j)).map(|j| coordinate_form(j, m, d)).collect();
    subspace_where(k, &forms, m, d)
}

pub fn in_span(u: &[QuadraticNumber], k: &[Vector]) -> bool {
    let m = u.len();
    let mut all = k.to_vec();
    all.push(u.to_vec());
    echelon_basis(&all, m).len() == echelon_basis(k, m).len()
}

/// K_full from the chain complex: solve Σ x_i c_i·bottom_i = ∂₂(y) and keep x.
pub fn isoperiodic_twist_space(d: &SeparatrixDiagram) -> Result<Vec<Vector>> {
    let cx = chain_complex(d)?;
    let c = d.circumferences();
    let m = c.len();
    let dd = d.d;
    let n1 = cx.n_one_cells();
    let mut mat = QMatrix::zeros(n1, 2 * m, dd);
    for r in 0..n1 {
        for i in 0..m {
            mat.set(r, i, c[i].scale(&crate::exactalg::int(cx.core_classes[i][r])))?;
            let b = cx.boundary2.get(r, i);
            mat.set(r, m + i, QuadraticNumber::rational(-b.a.clone(), dd))?;
        }
    }
    let ker = mat.kernel_basis();
    let xs: Vec<Vector> = ker.into_iter().map(|v| v[..m].to_vec()).collect();
    Ok(echelon_basis(&xs, m))
}

/// Checks Σ x_i c_i [γ_i] is a boundary, directly against the complex.
pub fn is_isoperiodic(d: &SeparatrixDiagram, x: &[QuadraticNumber]) -> Result<bool> {
    let cx = chain_complex(d)?;
    let c = d.circumferences();
    let dd = d.d;
    let n1 = cx.n_one_cells();
    let chain: Vector = (0..n1)
        .map(|r| {
            (0..c.len()).fold(QuadraticNumber::zero(dd), |acc, i| {
                &acc + (&(&x[i] * &c[i]).scale(&crate::exactalg::int(cx.core_classes[i][r])))
            })
        })
        .collect();
    let b2 = QMatrix::from_rows(
        dd,
        c.len(),
        (0..n1).map(|r| (0..c.len()).map(|j| QuadraticNumber::rational(cx.boundary2.get(r, j).a.clone(), dd)).collect()).collect(),
    )?;
    let mut aug = b2.to_rows();
    for (r, row) in aug.iter_mut().enumerate() {
        row.push(chain[r].clone());
    }
    let aug = QMatrix::from_rows(dd, c.len() + 1, aug)?;
    Ok(aug.rank() == b2.rank())
}

/// K_prym = K_full ∩ {x : x_{π(i)} = x_i}.
pub fn prym_twist_space(k_full: &[Vector], pi: &[usize], c: &[QuadraticNumber]) -> Result<Vec<Vector>> {
    let m = pi.len();
    if c.len() != m || (0..m).any(|i| pi[i] >= m || pi[pi[i]] != i) {
        return Err(Error::IncompatibleInvolution);
    }
    if (0..m).any(|i| c[pi[i]] != c[i]) {
        return Err(Error::IncompatibleInvolution);
    }
    let d = c.first().map_or(0, |x| x.d);
    let forms: Vec<Vector> = (0..m)
        .filter(|&i| pi[i] > i)
        .map(|i| {
            let mut f = coordinate_form(i, m, d);
            f[pi[i]] = QuadraticNumber::from_int(-1, d);
            f
        })
        .collect();
    Ok(subspace_where(k_full, &forms, m, d))
}

/// K_full ∩ span(basis).
pub fn explicit_twist_space(k_full: &[Vector], basis: &[Vector], m: usize, d: u64) -> Result<Vec<Vector>> {
    if basis.iter().any(|b| b.len() != m || b.iter().any(|x| x.d != d)) {
        return Err(Error::DimensionMismatch("explicit locus basis".into()));
    }
    // linear forms vanishing on span(basis)
    let b = echelon_basis(basis, m);
    let forms = if b.is_empty() {
        (0..m).map(|j| coordinate_form(j, m, d)).collect()
    } else {
        QMatrix::from_rows(d, m, b)?.kernel_basis()
    };
    Ok(subspace_where(k_full, &forms, m, d))
}

pub fn is_minimal(u: &[QuadraticNumber], k: &[Vector]) -> Result<bool> {
    if u.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    if !in_span(u, k) {
        return Err(Error::NotInSpan);
    }
    let m = u.len();
    let d = u[0].d;
    let s = support(u);
    for &j in &s {
        let smaller: Vec<usize> = s.iter().copied().filter(|&i| i != j).collect();
        if !restrict_to_support(k, &smaller, m, d).is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One normalized vector per inclusion-minimal support of span(K). A
/// vector of K vanishing on k−1 independent coordinates (k = dim K) spans a
/// line whose generator has minimal support, and every minimal support
/// arises this way.
pub fn minimal_deformations(k: &[Vector], m: usize, d: u64) -> Vec<DeformationVector> {
    let k = echelon_basis(k, m);
    let dim = k.len();
    if dim == 0 {
        return Vec::new();
    }
    let mut out: Vec<DeformationVector> = Vec::new();
    for z in (0..m).combinations(dim - 1) {
        let forms: Vec<Vector> = z.iter().map(|&j| coordinate_form(j, m, d)).collect();
        let w = subspace_where(&k, &forms, m, d);
        if w.len() != 1 {
            continue;
        }
        let v = DeformationVector::new(w[0].clone()).expect("non-zero").normalized();
        if !out.iter().any(|o| o.support == v.support) {
            out.push(v);
        }
    }
    out.sort_by(|a, b| a.support.cmp(&b.support));
    out
}

pub fn are_transverse(u: &[QuadraticNumber], v: &[QuadraticNumber]) -> bool {
    let su = support(u);
    support(v).iter().all(|i| !su.contains(i))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistModel {
    pub m: usize,
    pub d: u64,
    pub circumferences: Vector,
    pub heights: Vector,
    pub locus: Locus,
    /// Stability for the locus beyond plain stability, as asserted by the caller.
    pub locus_stable_asserted: bool,
    pub n_singularities: usize,
    pub k_full: Vec<Vector>,
    pub k: Vec<Vector>,
}

impl TwistModel {
    pub fn new(s: &Surface, locus: Locus) -> Result<Self> {
        let d = &s.diagram;
        if !d.prediagram.is_stable() {
            return Err(Error::NotStable);
        }
        let c = d.circumferences();
        let m = c.len();
        let k_full = isoperiodic_twist_space(d)?;
        let k = match &locus {
            Locus::FullStratum => k_full.clone(),
            Locus::Prym(pi) => prym_twist_space(&k_full, pi, &c)?,
            Locus::Explicit(b) => explicit_twist_space(&k_full, b, m, d.d)?,
        };
        Ok(TwistModel {
            m,
            d: d.d,
            circumferences: c,
            heights: s.heights.clone(),
            locus,
            locus_stable_asserted: true,
            n_singularities: stratum_signature(&d.prediagram)?.kappa.len(),
            k_full,
            k,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyVerdict {
    pub holds: bool,
    pub witness: Option<DeformationVector>,
    pub max_degree: Option<usize>,
    pub reason: String,
}

pub fn has_property_p(model: &TwistModel) -> PropertyVerdict {
    if model.k.is_empty() {
        return PropertyVerdict {
            holds: false,
            witness: None,
            max_degree: None,
            reason: "absolute locus slice".into(),
        };
    }
    let mins = minimal_deformations(&model.k, model.m, model.d);
    let max_degree = mins.iter().map(|v| v.degree).max();
    match mins.into_iter().find(|v| v.degree >= 1) {
        Some(w) => PropertyVerdict {
            holds: true,
            witness: Some(w),
            max_degree,
            reason: "minimal deformation of positive degree".into(),
        },
        None => PropertyVerdict {
            holds: false,
            witness: None,
            max_degree,
            reason: "every minimal deformation has degree 0".into(),
        },
    }
}

/// Σ deg(u_i) for pairwise transverse minimal deformations of K.
pub fn rank_lower_bound(vectors: &[Vector], k: &[Vector]) -> Result<usize> {
    for (i, u) in vectors.iter().enumerate() {
        if !is_minimal(u, k)? {
            return Err(Error::NotMinimal);
        }
        for v in &vectors[i + 1..] {
            if !are_transverse(u, v) {
                return Err(Error::NotTransverse);
            }
        }
    }
    vectors.iter().map(|u| degree(u)).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionCertificate {
    pub dim_k: usize,
    /// dim(K + Σ V_{u_i}) with V_u the rational closure of u.
    pub dim_with_closures: usize,
    /// Upper bound on the Rel dimension, |Σ| − 1.
    pub rel_upper_bound: usize,
    pub rank_lower_bound: i64,
    pub inequality: String,
}

/// The closure of the leaf contains every V_u, so dim(K + Σ V_u) ≤ rank + rel,
/// and rel ≤ |Σ| − 1.
pub fn dimension_rank_bound(k: &[Vector], vectors: &[Vector], n_singularities: usize, m: usize, d: u64) -> Result<DimensionCertificate> {
    let mut all = k.to_vec();
    for u in vectors {
        for r in rational_closure(u)? {
            all.push(r.into_iter().map(|x| QuadraticNumber::rational(x, d)).collect());
        }
    }
    let dim_with = echelon_basis(&all, m).len();
    let rel = n_singularities.saturating_sub(1);
    let bound = dim_with as i64 - rel as i64;
    Ok(DimensionCertificate {
        dim_k: echelon_basis(k, m).len(),
        dim_with_closures: dim_with,
        rel_upper_bound: rel,
        rank_lower_bound: bound,
        inequality: format!("rank + {rel} >= {dim_with}"),
    })
}

/// Ratios c_i / c_1 and the dimension of their ℚ-span.
pub fn field_ratio_generators(c: &[QuadraticNumber]) -> Result<(Vector, usize)> {
    let first = c.first().ok_or(Error::ZeroVector)?;
    let ratios = c.iter().map(|x| x.try_div(first)).collect::<Result<Vector>>()?;
    let dim = qspan_dimension(&ratios)?;
    Ok((ratios, dim))
}

/// (h_1/c_1, …, h_m/c_m).
pub fn shear_vector(s: &Surface) -> Result<DeformationVector> {
    let c = s.circumferences();
    let u = s.heights.iter().zip(&c).map(|(h, ci)| h.try_div(ci)).collect::<Result<Vector>>()?;
    DeformationVector::new(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    fn q(a: i64, b: i64, d: u64) -> QuadraticNumber {
        QuadraticNumber::new(int(a), int(b), d).unwrap()
    }

    #[test]
    fn degrees() {
        assert_eq!(degree(&[q(1, 0, 2), q(-3, 0, 2)]).unwrap(), 0);
        assert_eq!(degree(&[q(1, 0, 2), q(0, 1, 2)]).unwrap(), 1);
        assert!(degree(&[q(0, 0, 2)]).is_err());
    }

    #[test]
    fn ratio_field() {
        let (r, dim) = field_ratio_generators(&[q(2, 0, 2), q(4, 0, 2), q(6, 0, 2)]).unwrap();
        assert_eq!(r, vec![q(1, 0, 2), q(2, 0, 2), q(3, 0, 2)]);
        assert_eq!(dim, 1);
        assert_eq!(field_ratio_generators(&[q(1, 0, 2), q(1, 1, 2), q(0, 1, 2)]).unwrap().1, 2);
        let (r, dim) = field_ratio_generators(&[q(0, 1, 2), q(0, 2, 2)]).unwrap();
        assert_eq!((r, dim), (vec![q(1, 0, 2), q(2, 0, 2)], 1));
    }

    #[test]
    fn minimal_in_two_dims() {
        // K = span{(1,1,0), (0,1,1)} in ℚ³: minimal supports {0,1}, {1,2}, {0,2}
        let k = vec![vec![q(1, 0, 0), q(1, 0, 0), q(0, 0, 0)], vec![q(0, 0, 0), q(1, 0, 0), q(1, 0, 0)]];
        let mins = minimal_deformations(&k, 3, 0);
        let supports: Vec<Vec<usize>> = mins.iter().map(|v| v.support.clone()).collect();
        assert_eq!(supports, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        let sum = vec![q(1, 0, 0), q(2, 0, 0), q(1, 0, 0)];
        assert!(!is_minimal(&sum, &k).unwrap());
        assert!(is_minimal(&k[0], &k).unwrap());
        assert_eq!(is_minimal(&[q(1, 0, 0), q(0, 0, 0), q(0, 0, 0)], &k), Err(Error::NotInSpan));
        assert!(!are_transverse(&k[0], &k[0]));
    }
}
