//! The translation surface glued from a diagram: stratum, connectivity,
//! cellular chain complex and periods.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::diagram::{comp_key, DiagramJson, Matching, Prediagram, SeparatrixDiagram};
use crate::error::{Error, Result};
use crate::exactalg::{QMatrix, QuadraticNumber};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumSignature {
    /// Singularity orders, largest first.
    pub kappa: Vec<usize>,
    pub genus: usize,
    pub n_saddle_connections: usize,
}

pub fn stratum_signature(p: &Prediagram) -> Result<StratumSignature> {
    if !p.is_valid() {
        return Err(Error::InvalidPrediagram("invalid prediagram".into()));
    }
    if !p.is_stable() {
        return Err(Error::NotStable);
    }
    let mut kappa = Vec::new();
    for o in p.singularities() {
        if o.len() % 2 == 1 {
            return Err(Error::OddOrbit(o.len()));
        }
        kappa.push(o.len() / 2 - 1);
    }
    kappa.sort_unstable_by(|a, b| b.cmp(a));
    let ns = p.n_ends() / 2;
    let chi = kappa.len() as i64 - ns as i64;
    if chi > 2 || (2 - chi) % 2 != 0 {
        return Err(Error::InvalidPrediagram(format!("Euler characteristic {chi}")));
    }
    Ok(StratumSignature { kappa, genus: ((2 - chi) / 2) as usize, n_saddle_connections: ns })
}

/// Connected components of the prediagram, linked by matched pairs.
pub fn is_connected_surface(p: &Prediagram, m: &Matching) -> bool {
    let orbits = p.connected_orbits();
    let mut which = vec![0; p.n_ends()];
    for (i, o) in orbits.iter().enumerate() {
        for &e in o {
            which[e] = i;
        }
    }
    let mut parent: Vec<usize> = (0..orbits.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (&a, &b) in &m.0 {
        let (x, y) = (find(&mut parent, which[a]), find(&mut parent, which[b]));
        parent[x] = y;
    }
    let root = find(&mut parent, 0);
    (0..orbits.len()).all(|i| find(&mut parent, i) == root)
}

/// Cellular chain complex. 0-cells: singularities; 1-cells: saddle
/// connections (oriented from their positive end) then one cross curve per
/// cylinder; 2-cells: one rectangle per cylinder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplexData {
    pub n_singularities: usize,
    pub n_saddle_connections: usize,
    pub n_cylinders: usize,
    pub boundary1: QMatrix,
    pub boundary2: QMatrix,
    /// Bottom chain of each cylinder, over the 1-cells.
    pub core_classes: Vec<Vec<i64>>,
    pub top_classes: Vec<Vec<i64>>,
}

impl ChainComplexData {
    pub fn n_one_cells(&self) -> usize {
        self.n_saddle_connections + self.n_cylinders
    }

    pub fn betti1(&self) -> usize {
        self.n_one_cells() - self.boundary1.rank() - self.boundary2.rank()
    }

    pub fn betti0(&self) -> usize {
        self.n_singularities - self.boundary1.rank()
    }
}

pub fn chain_complex(d: &SeparatrixDiagram) -> Result<ChainComplexData> {
    let p = &d.prediagram;
    if !p.is_stable() {
        return Err(Error::NotStable);
    }
    if !is_connected_surface(p, &d.matching) {
        return Err(Error::Disconnected);
    }
    let vert = p.singularity_of();
    let nv = p.singularities().len();
    let scs = p.saddle_connections();
    let ns = scs.len();
    let sc = p.saddle_index();
    let cyls = d.cylinders();
    let m = cyls.len();
    let comps: BTreeMap<usize, Vec<usize>> = p.cylinder_components().into_iter().map(|c| (c.id, c.edges)).collect();

    let mut b1 = vec![vec![0i64; ns + m]; nv];
    for (i, s) in scs.iter().enumerate() {
        b1[vert[s.negative_end]][i] += 1;
        b1[vert[s.positive_end]][i] -= 1;
    }
    let chain = |comp: usize| {
        let mut v = vec![0i64; ns + m];
        for &e in &comps[&comp] {
            v[sc[e]] += 1;
        }
        v
    };
    let mut core = Vec::new();
    let mut top = Vec::new();
    for (j, c) in cyls.iter().enumerate() {
        b1[vert[c.top]][ns + j] += 1;
        b1[vert[c.bottom]][ns + j] -= 1;
        core.push(chain(c.bottom));
        top.push(chain(c.top));
    }
    let b2: Vec<Vec<i64>> =
        (0..ns + m).map(|r| (0..m).map(|j| core[j][r] - top[j][r]).collect()).collect();
    let boundary2 = if m == 0 { QMatrix::zeros(ns, 0, 0) } else { QMatrix::from_ints(0, &b2)? };
    Ok(ChainComplexData {
        n_singularities: nv,
        n_saddle_connections: ns,
        n_cylinders: m,
        boundary1: QMatrix::from_ints(0, &b1)?,
        boundary2,
        core_classes: core,
        top_classes: top,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Period {
    pub real: QuadraticNumber,
    pub imag: QuadraticNumber,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surface {
    pub diagram: SeparatrixDiagram,
    pub heights: Vec<QuadraticNumber>,
    pub twists: Vec<QuadraticNumber>,
}

impl Surface {
    /// Heights default to 1 and twists to 0.
    pub fn new(
        diagram: SeparatrixDiagram,
        heights: Option<Vec<QuadraticNumber>>,
        twists: Option<Vec<QuadraticNumber>>,
    ) -> Result<Self> {
        let m = diagram.cylinders().len();
        let d = diagram.d;
        let heights = heights.unwrap_or_else(|| vec![QuadraticNumber::one(d); m]);
        let twists = twists.unwrap_or_else(|| vec![QuadraticNumber::zero(d); m]);
        if heights.len() != m || twists.len() != m {
            return Err(Error::DimensionMismatch(format!("{m} cylinders")));
        }
        for x in heights.iter().chain(&twists) {
            if x.d != d {
                return Err(Error::ContextMismatch(d, x.d));
            }
        }
        if let Some(h) = heights.iter().find(|h| !h.is_positive()) {
            return Err(Error::InvalidDiagram(format!("non-positive height {h}")));
        }
        Ok(Surface { diagram, heights, twists })
    }

    pub fn circumferences(&self) -> Vec<QuadraticNumber> {
        self.diagram.circumferences()
    }

    /// Periods of the 1-cells: saddle connection ↦ (l, 0), cross curve of
    /// cylinder j ↦ (t_j, h_j).
    pub fn periods(&self) -> Vec<Period> {
        let d = self.diagram.d;
        let mut out: Vec<Period> = self
            .diagram
            .lengths
            .iter()
            .map(|l| Period { real: l.clone(), imag: QuadraticNumber::zero(d) })
            .collect();
        for (t, h) in self.twists.iter().zip(&self.heights) {
            out.push(Period { real: t.clone(), imag: h.clone() });
        }
        out
    }

    pub fn area(&self) -> QuadraticNumber {
        let d = self.diagram.d;
        self.circumferences()
            .iter()
            .zip(&self.heights)
            .fold(QuadraticNumber::zero(d), |acc, (c, h)| &acc + &(c * h))
    }

    /// Twist coordinates x act by t_j ↦ t_j + x_j c_j.
    pub fn twisted(&self, x: &[QuadraticNumber]) -> Result<Surface> {
        let c = self.circumferences();
        if x.len() != c.len() {
            return Err(Error::DimensionMismatch("twist vector".into()));
        }
        let twists = self
            .twists
            .iter()
            .zip(x.iter().zip(&c))
            .map(|(t, (xi, ci))| t.try_add(&xi.try_mul(ci)?))
            .collect::<Result<Vec<_>>>()?;
        Surface::new(self.diagram.clone(), Some(self.heights.clone()), Some(twists))
    }

    pub fn to_json(&self) -> DiagramJson {
        let mut j = self.diagram.to_json();
        let keys: Vec<String> = self.diagram.cylinders().iter().map(|c| comp_key(c.bottom)).collect();
        j.heights = Some(keys.iter().cloned().zip(self.heights.iter().cloned()).collect());
        j.twists = Some(keys.into_iter().zip(self.twists.iter().cloned()).collect());
        j
    }

    pub fn from_json(j: &DiagramJson) -> Result<Surface> {
        let diagram = j.diagram()?;
        let keys: Vec<String> = diagram.cylinders().iter().map(|c| comp_key(c.bottom)).collect();
        let pick = |m: &Option<BTreeMap<String, QuadraticNumber>>| -> Result<Option<Vec<QuadraticNumber>>> {
            match m {
                None => Ok(None),
                Some(m) => keys
                    .iter()
                    .map(|k| m.get(k).cloned().ok_or_else(|| Error::Parse(format!("missing cylinder {k}"))))
                    .collect::<Result<Vec<_>>>()
                    .map(Some),
            }
        };
        Surface::new(diagram.clone(), pick(&j.heights)?, pick(&j.twists)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub betti0: usize,
    pub betti1: usize,
    pub genus: usize,
    /// 1-cell names: saddle connections by id, then cross curves by cylinder.
    pub one_cells: Vec<String>,
    pub core_classes: BTreeMap<String, Vec<i64>>,
    pub boundary_relation_holds: bool,
}

pub fn homology_report(d: &SeparatrixDiagram) -> Result<HomologyReport> {
    let cx = chain_complex(d)?;
    let sig = stratum_signature(&d.prediagram)?;
    let mut one_cells: Vec<String> =
        d.prediagram.saddle_connections().iter().map(|s| crate::diagram::sc_key(s.id)).collect();
    let cyls = d.cylinders();
    one_cells.extend(cyls.iter().map(|c| format!("X{}", comp_key(c.bottom))));
    let core_classes = cyls.iter().zip(&cx.core_classes).map(|(c, v)| (comp_key(c.bottom), v.clone())).collect();
    Ok(HomologyReport {
        betti0: cx.betti0(),
        betti1: cx.betti1(),
        genus: sig.genus,
        one_cells,
        core_classes,
        boundary_relation_holds: cx.boundary1.mul(&cx.boundary2)?.is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Matching;

    fn torus() -> SeparatrixDiagram {
        let p = Prediagram::new(vec![1, 0], vec![1, 0], &[0]).unwrap();
        SeparatrixDiagram::new(p, Matching([(0, 1)].into_iter().collect()), vec![QuadraticNumber::one(0)], 0).unwrap()
    }

    #[test]
    fn marked_torus() {
        let t = torus();
        let s = stratum_signature(&t.prediagram).unwrap();
        assert_eq!(s, StratumSignature { kappa: vec![0], genus: 1, n_saddle_connections: 1 });
        let cx = chain_complex(&t).unwrap();
        assert_eq!(cx.n_one_cells() - cx.boundary1.rank(), 2);
        assert_eq!(cx.boundary2.rank(), 0);
        assert_eq!(cx.betti1(), 2);
    }

    #[test]
    fn unit_square_periods() {
        let s = Surface::new(torus(), None, None).unwrap();
        let p = s.periods();
        assert_eq!(p[0], Period { real: QuadraticNumber::one(0), imag: QuadraticNumber::zero(0) });
        assert_eq!(p[1], Period { real: QuadraticNumber::zero(0), imag: QuadraticNumber::one(0) });
        let t = s.twisted(&[QuadraticNumber::one(0)]).unwrap();
        assert_eq!(t.periods()[1].real, QuadraticNumber::one(0));
        assert!(s.area().is_positive());
    }
}
