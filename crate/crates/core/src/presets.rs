//! Bundled diagrams. The source of truth is the table of cylinder diagrams
//! below (bottom and top saddle connections of each cylinder, left to
//! right); the JSON files under `presets/` are generated from it and
//! shipped with the build.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::diagram::{comp_key, sc_key, DiagramJson, Matching, Prediagram, SeparatrixDiagram};
use crate::error::{Error, Result};
use crate::exactalg::{rat, QuadraticNumber};
use crate::prym::{find_prym_involutions, involution_from, PrymInvolution};
use crate::surface::{stratum_signature, Surface};

pub const GOLDEN: &str = "golden-irrational";
pub const UNIT: &str = "unit-rational";

/// Builds a diagram from cylinders given as (bottom, top) lists of saddle
/// connection names, left to right. Saddle connection i (numbered by first
/// appearance among the bottoms) has positive end 2i and negative end 2i+1;
/// the positive component of a cylinder is its bottom. Returns the diagram
/// and the names in saddle-connection order.
pub fn cylinder_diagram(
    cylinders: &[(Vec<&str>, Vec<&str>)],
    lengths: &BTreeMap<String, QuadraticNumber>,
    d: u64,
) -> Result<(SeparatrixDiagram, Vec<String>)> {
    let mut names: Vec<String> = Vec::new();
    for (b, _) in cylinders {
        for s in b {
            if names.iter().any(|n| n == s) {
                return Err(Error::InvalidDiagram(format!("{s} appears twice among bottoms")));
            }
            names.push(s.to_string());
        }
    }
    let idx = |s: &str| {
        names.iter().position(|n| n == s).ok_or_else(|| Error::InvalidDiagram(format!("{s} is never a bottom")))
    };
    let n = 2 * names.len();
    let mut sigma = vec![usize::MAX; n];
    for (b, t) in cylinders {
        for k in 0..b.len() {
            sigma[2 * idx(b[k])? + 1] = 2 * idx(b[(k + 1) % b.len()])?;
        }
        for k in 0..t.len() {
            sigma[2 * idx(t[k])?] = 2 * idx(t[(k + t.len() - 1) % t.len()])? + 1;
        }
    }
    if sigma.contains(&usize::MAX) {
        return Err(Error::InvalidDiagram("every saddle connection must appear once in a top".into()));
    }
    let tau: Vec<usize> = (0..n).map(|e| e ^ 1).collect();
    let positive: Vec<usize> = (0..n).step_by(2).collect();
    let p = Prediagram::new(sigma, tau, &positive)?;
    let comp = p.component_of();
    let mut m = BTreeMap::new();
    for (b, t) in cylinders {
        m.insert(comp[2 * idx(b[0])?], comp[2 * idx(t[0])? + 1]);
    }
    let l = names
        .iter()
        .map(|s| lengths.get(s).cloned().ok_or_else(|| Error::InvalidDiagram(format!("no length for {s}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok((SeparatrixDiagram::new(p, Matching(m), l, d)?, names))
}

/// The base prediagram of Prym(1,1,1,1): four 4-valent stars. Star v has
/// ends 4v..4v+3, read clockwise as (e0 e3 e2 e1), with τ pairing e0–e1 and
/// e2–e3; stars 0 and 2 have e0, e2 positive, stars 1 and 3 have e1, e3
/// positive.
pub fn prym_base() -> Prediagram {
    let n = 16;
    let mut sigma = vec![0; n];
    let mut tau = vec![0; n];
    let mut positive = Vec::new();
    for v in 0..4 {
        let e: Vec<usize> = (0..4).map(|i| 4 * v + i).collect();
        let cyc = [e[0], e[3], e[2], e[1]];
        for i in 0..4 {
            sigma[cyc[i]] = cyc[(i + 1) % 4];
        }
        tau[e[0]] = e[1];
        tau[e[1]] = e[0];
        tau[e[2]] = e[3];
        tau[e[3]] = e[2];
        if v % 2 == 0 {
            positive.extend([e[0], e[2]]);
        } else {
            positive.extend([e[1], e[3]]);
        }
    }
    Prediagram::new(sigma, tau, &positive).expect("base prediagram is valid")
}

/// Figure labels of the base: letters name positive components, digits
/// negative ones, by a representative end.
pub fn prym_base_labels() -> BTreeMap<String, usize> {
    let p = prym_base();
    let comp = p.component_of();
    [("a", 0), ("b", 2), ("1", 1), ("2", 4), ("3", 6), ("c", 5), ("d", 8), ("e", 10), ("4", 9), ("5", 12), ("6", 14), ("f", 13)]
        .into_iter()
        .map(|(k, e)| (k.to_string(), comp[e]))
        .collect()
}

/// The involution fixed on the base: it exchanges the first two stars and
/// the last two, sending component 2 to a and 5 to d.
pub fn prym_base_involution() -> Vec<usize> {
    let p = prym_base();
    let mut rho = vec![usize::MAX; p.n_ends()];
    let mut stack = vec![(0, 4), (4, 0), (8, 12), (12, 8)];
    while let Some((a, b)) = stack.pop() {
        if rho[a] != usize::MAX {
            assert_eq!(rho[a], b, "inconsistent base involution");
            continue;
        }
        rho[a] = b;
        stack.push((p.sigma[a], p.sigma[b]));
        stack.push((p.tau[a], p.tau[b]));
    }
    rho
}

/// Letter/digit notation for matchings: "(fabced)" matches digit i with the
/// letter in position i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelScheme {
    /// Component ids of a, b, c, …
    pub letters: Vec<usize>,
    /// Component ids of 1, 2, 3, …
    pub digits: Vec<usize>,
}

impl LabelScheme {
    pub fn from_labels(labels: &BTreeMap<String, usize>) -> Result<Self> {
        let mut letters = Vec::new();
        let mut digits = Vec::new();
        for i in 0.. {
            let l = ((b'a' + i as u8) as char).to_string();
            let g = (i + 1).to_string();
            match (labels.get(&l), labels.get(&g)) {
                (Some(&x), Some(&y)) => {
                    letters.push(x);
                    digits.push(y);
                }
                (None, None) => break,
                _ => return Err(Error::Parse("labels must pair letters with digits".into())),
            }
        }
        Ok(LabelScheme { letters, digits })
    }

    pub fn matching(&self, tuple: &str) -> Result<Matching> {
        let chars: Vec<char> = tuple.trim_matches(|c| c == '(' || c == ')').chars().collect();
        if chars.len() != self.digits.len() {
            return Err(Error::Parse(format!("matching '{tuple}' has wrong length")));
        }
        let mut m = BTreeMap::new();
        for (i, ch) in chars.iter().enumerate() {
            let k = (*ch as u8).wrapping_sub(b'a') as usize;
            let letter = *self.letters.get(k).ok_or_else(|| Error::Parse(format!("bad letter '{ch}'")))?;
            if m.insert(letter, self.digits[i]).is_some() {
                return Err(Error::Parse(format!("letter '{ch}' repeated")));
            }
        }
        Ok(Matching(m))
    }

    pub fn tuple(&self, m: &Matching) -> String {
        let inv = m.inverse();
        self.digits
            .iter()
            .map(|d| {
                let p = inv[d];
                (b'a' + self.letters.iter().position(|&x| x == p).expect("labelled") as u8) as char
            })
            .collect()
    }

    pub fn digit_of(&self, comp: usize) -> Option<usize> {
        self.digits.iter().position(|&x| x == comp).map(|i| i + 1)
    }
}

/// p + q·φ with φ = (1 + √5)/2, in context d = 5.
fn golden(p: i64, q: i64) -> QuadraticNumber {
    QuadraticNumber::new(rat(2 * p + q, 2), rat(q, 2), 5).expect("valid")
}

struct Figure {
    id: &'static str,
    description: &'static str,
    cylinders: Vec<(Vec<&'static str>, Vec<&'static str>)>,
    /// name, golden (p, q), unit length
    lengths: Vec<(&'static str, (i64, i64), i64)>,
    /// 1-based fixed cylinders of the designated involution, if any.
    fixed: Option<Vec<usize>>,
    certificates: Vec<(&'static str, Vec<Vec<i64>>)>,
}

fn cyl(b: &[&'static str], t: &[&'static str]) -> (Vec<&'static str>, Vec<&'static str>) {
    (b.to_vec(), t.to_vec())
}

fn figures() -> Vec<Figure> {
    vec![
        Figure {
            id: "genus2",
            description: "The stable three-cylinder decomposition in genus 2, H(1,1).",
            cylinders: vec![cyl(&["g1"], &["g4"]), cyl(&["g3", "g4"], &["g2", "g1"]), cyl(&["g2"], &["g3"])],
            lengths: vec![("g1", (1, 0), 1), ("g2", (0, 1), 1), ("g3", (0, 1), 1), ("g4", (1, 0), 1)],
            fixed: Some(vec![1, 2, 3]),
            certificates: vec![("k_full", vec![vec![1, -1, 1]])],
        },
        Figure {
            id: "prym22odd",
            description: "Four-cylinder Prym eigenform model in H^odd(2,2); the involution fixes cylinders 1 and 2.",
            cylinders: vec![
                cyl(&["h5"], &["h2"]),
                cyl(&["h1", "h2", "h3"], &["h4", "h5", "h6"]),
                cyl(&["h4"], &["h1"]),
                cyl(&["h6"], &["h3"]),
            ],
            lengths: vec![
                ("h1", (1, 0), 1),
                ("h2", (0, 1), 1),
                ("h3", (1, 0), 1),
                ("h4", (1, 0), 1),
                ("h5", (0, 1), 1),
                ("h6", (1, 0), 1),
            ],
            fixed: Some(vec![1, 2]),
            certificates: vec![("minimal", vec![vec![1, -1, 1, 1]])],
        },
        Figure {
            id: "prym211",
            description: "Five-cylinder Prym eigenform model in H(2,1,1); the involution exchanges 1 with 5 and 2 with 4.",
            cylinders: vec![
                cyl(&["A"], &["k1"]),
                cyl(&["k1", "k2"], &["A", "k3"]),
                cyl(&["k3"], &["k4"]),
                cyl(&["k4", "B"], &["k2", "k5"]),
                cyl(&["k5"], &["B"]),
            ],
            lengths: vec![
                ("A", (1, 0), 1),
                ("k1", (1, 0), 1),
                ("k2", (0, 1), 1),
                ("k3", (0, 1), 1),
                ("k4", (0, 1), 1),
                ("B", (1, 0), 1),
                ("k5", (1, 0), 1),
            ],
            fixed: Some(vec![3]),
            certificates: vec![
                ("minimal", vec![vec![1, -1, 2, -1, 1]]),
                ("closure", vec![vec![1, -1, 1, 0, 0], vec![0, 0, 1, -1, 1]]),
            ],
        },
        Figure {
            id: "prym1111-s1",
            description: "Prym(1,1,1,1) surface 1, matching (fabced), first kind; fixed cylinders 1 and 6.",
            cylinders: vec![
                cyl(&["C"], &["q"]),
                cyl(&["B", "q"], &["r", "s"]),
                cyl(&["r"], &["A"]),
                cyl(&["s"], &["t"]),
                cyl(&["t", "A"], &["p", "C"]),
                cyl(&["p"], &["B"]),
            ],
            lengths: vec![
                ("C", (2, -1), 1),
                ("q", (2, -1), 1),
                ("B", (0, 1), 1),
                ("p", (0, 1), 1),
                ("r", (1, 0), 1),
                ("s", (1, 0), 1),
                ("t", (1, 0), 1),
                ("A", (1, 0), 1),
            ],
            fixed: Some(vec![1, 6]),
            certificates: vec![
                ("minimal", vec![vec![1, 0, -1, -1, 0, 1]]),
                ("transverse", vec![vec![1, 0, 0, 0, -1, 1], vec![0, 1, -1, -1, 0, 0]]),
            ],
        },
        Figure {
            id: "prym1111-s2",
            description: "Prym(1,1,1,1) surface 2, matching (faecdb), second kind; fixed cylinders 3 and 5.",
            cylinders: vec![
                cyl(&["B", "A"], &["u", "v"]),
                cyl(&["u"], &["A"]),
                cyl(&["v"], &["w"]),
                cyl(&["w", "C"], &["x", "y"]),
                cyl(&["x"], &["B"]),
                cyl(&["y"], &["C"]),
            ],
            lengths: vec![
                ("B", (1, 0), 1),
                ("v", (1, 0), 1),
                ("w", (1, 0), 1),
                ("x", (1, 0), 1),
                ("A", (0, 1), 1),
                ("u", (0, 1), 1),
                ("C", (0, 1), 1),
                ("y", (0, 1), 1),
            ],
            fixed: Some(vec![3, 5]),
            certificates: vec![
                ("minimal", vec![vec![1, -1, 0, 1, -2, -1]]),
                ("transverse", vec![vec![1, -1, 0, 0, -1, 0], vec![0, 0, 1, -1, 0, 1]]),
            ],
        },
        Figure {
            id: "prym1111-s3",
            description: "Prym(1,1,1,1) surface 3, matching (cdefab), second kind; fixed cylinders 2 and 5.",
            cylinders: vec![
                cyl(&["B"], &["a1"]),
                cyl(&["a1", "C"], &["a2", "a3"]),
                cyl(&["a2"], &["A"]),
                cyl(&["a3"], &["a4"]),
                cyl(&["a4", "A"], &["a5", "B"]),
                cyl(&["a5"], &["C"]),
            ],
            lengths: vec![
                ("B", (1, 0), 1),
                ("a1", (1, 0), 1),
                ("a3", (1, 0), 1),
                ("a4", (1, 0), 1),
                ("C", (0, 1), 1),
                ("a2", (0, 1), 1),
                ("A", (0, 1), 1),
                ("a5", (0, 1), 1),
            ],
            fixed: Some(vec![2, 5]),
            certificates: vec![
                ("minimal", vec![vec![1, 0, 1, 1, -2, 1]]),
                ("transverse", vec![vec![1, 0, 0, 0, -1, 1], vec![0, 1, -1, -1, 0, 0]]),
            ],
        },
        Figure {
            id: "prym1111-s4",
            description: "Prym(1,1,1,1) surface 4, matching (cafbed), first kind; fixed cylinders 2 and 3.",
            cylinders: vec![
                cyl(&["B", "C"], &["b1"]),
                cyl(&["A"], &["b2"]),
                cyl(&["b1", "b2"], &["A", "b3"]),
                cyl(&["b3"], &["b4", "b5"]),
                cyl(&["b4"], &["C"]),
                cyl(&["b5"], &["B"]),
            ],
            lengths: vec![
                ("B", (1, 0), 1),
                ("C", (1, 0), 1),
                ("b4", (1, 0), 1),
                ("b5", (1, 0), 1),
                ("b1", (2, 0), 2),
                ("b3", (2, 0), 2),
                ("A", (0, 1), 1),
                ("b2", (0, 1), 1),
            ],
            fixed: Some(vec![2, 3]),
            certificates: vec![
                ("minimal", vec![vec![0, 1, -1, 0, 1, 1]]),
                ("transverse", vec![vec![1, 0, 0, 0, -1, -1], vec![0, 1, -1, 1, 0, 0]]),
            ],
        },
        Figure {
            id: "prym1111-s5",
            description: "Prym(1,1,1,1) surface 5, matching (cefbda), second kind; fixed cylinders 1 and 3.",
            cylinders: vec![
                cyl(&["A"], &["d1"]),
                cyl(&["d1", "B"], &["d2"]),
                cyl(&["d2", "C"], &["d3", "d4"]),
                cyl(&["d3"], &["A", "d5"]),
                cyl(&["d4"], &["B"]),
                cyl(&["d5"], &["C"]),
            ],
            lengths: vec![
                ("A", (0, 1), 1),
                ("d1", (0, 1), 1),
                ("B", (1, 0), 1),
                ("C", (1, 0), 1),
                ("d4", (1, 0), 1),
                ("d5", (1, 0), 1),
                ("d2", (1, 1), 2),
                ("d3", (1, 1), 2),
            ],
            fixed: Some(vec![1, 3]),
            certificates: vec![
                ("minimal", vec![vec![1, 0, -1, 0, 1, 1]]),
                ("k_full", vec![vec![1, 0, 0, -1, 0, 1], vec![0, 1, 0, -1, -1, 1], vec![0, 0, 1, -1, -1, 0]]),
            ],
        },
        Figure {
            id: "hyp22",
            description: "Two-singularity fixture in H(2,2): every cylinder has its two boundaries on different singularities.",
            cylinders: vec![
                cyl(&["s1"], &["s2"]),
                cyl(&["s2", "s3"], &["s1", "s4"]),
                cyl(&["s4", "s5"], &["s3", "s6"]),
                cyl(&["s6"], &["s5"]),
            ],
            lengths: vec![
                ("s1", (1, 0), 1),
                ("s2", (1, 0), 1),
                ("s3", (0, 1), 1),
                ("s4", (0, 1), 1),
                ("s5", (2, 0), 1),
                ("s6", (2, 0), 1),
            ],
            fixed: None,
            certificates: vec![],
        },
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresetEntry {
    /// Listed deformation vectors as sign/multiplicity patterns δ, meaning
    /// (δ_1/c_1, …, δ_m/c_m).
    #[serde(default)]
    pub certificates: BTreeMap<String, Vec<Vec<i64>>>,
    pub default_locus: String,
    pub description: String,
    #[serde(default)]
    pub fixed_cylinders: Vec<usize>,
    pub genus: usize,
    pub id: String,
    #[serde(default)]
    pub involution: Option<Vec<usize>>,
    pub kappa: Vec<usize>,
    #[serde(default)]
    pub labels: Option<BTreeMap<String, String>>,
    #[serde(default)]
    pub metrics: BTreeMap<String, DiagramJson>,
    #[serde(default)]
    pub prediagram: Option<DiagramJson>,
    #[serde(default)]
    pub saddle_names: BTreeMap<String, String>,
}

fn parse_comp(s: &str) -> Result<usize> {
    s.strip_prefix('C').and_then(|r| r.parse().ok()).ok_or_else(|| Error::Parse(format!("bad component '{s}'")))
}

impl PresetEntry {
    pub fn is_prediagram_only(&self) -> bool {
        self.metrics.is_empty()
    }

    pub fn prediagram(&self) -> Result<Prediagram> {
        match (&self.prediagram, self.metrics.values().next()) {
            (Some(p), _) => p.prediagram(),
            (None, Some(m)) => m.prediagram(),
            (None, None) => Err(Error::Parse(format!("preset {} has no prediagram", self.id))),
        }
    }

    pub fn metric_ids(&self) -> Vec<String> {
        self.metrics.keys().cloned().collect()
    }

    pub fn diagram(&self, metric: &str) -> Result<SeparatrixDiagram> {
        self.metrics
            .get(metric)
            .ok_or_else(|| Error::UnknownPreset(format!("{}:{metric}", self.id)))?
            .diagram()
    }

    pub fn surface(&self, metric: &str) -> Result<Surface> {
        Surface::from_json(self.metrics.get(metric).ok_or_else(|| Error::UnknownPreset(format!("{}:{metric}", self.id)))?)
    }

    pub fn label_scheme(&self) -> Result<Option<LabelScheme>> {
        match &self.labels {
            None => Ok(None),
            Some(l) => {
                let ids = l.iter().map(|(k, v)| Ok((k.clone(), parse_comp(v)?))).collect::<Result<BTreeMap<_, _>>>()?;
                Ok(Some(LabelScheme::from_labels(&ids)?))
            }
        }
    }

    /// The designated involution, validated against the given metric.
    pub fn prym_involution(&self, metric: &str) -> Result<Option<PrymInvolution>> {
        let Some(rho) = &self.involution else { return Ok(None) };
        if self.is_prediagram_only() {
            return Ok(None);
        }
        let d = self.diagram(metric)?;
        let inv = involution_from(&d.prediagram, &d.matching, rho)?;
        if (0..rho.len()).any(|e| d.end_length(e) != d.end_length(rho[e])) {
            return Err(Error::MalformedInvolution("involution does not preserve the metric".into()));
        }
        Ok(Some(inv))
    }
}

pub const PRESET_IDS: [&str; 10] = [
    "genus2",
    "hyp22",
    "prym1111-base",
    "prym1111-s1",
    "prym1111-s2",
    "prym1111-s3",
    "prym1111-s4",
    "prym1111-s5",
    "prym211",
    "prym22odd",
];

fn builtin(id: &str) -> Option<&'static str> {
    Some(match id {
        "genus2" => include_str!("../presets/genus2.json"),
        "hyp22" => include_str!("../presets/hyp22.json"),
        "prym1111-base" => include_str!("../presets/prym1111-base.json"),
        "prym1111-s1" => include_str!("../presets/prym1111-s1.json"),
        "prym1111-s2" => include_str!("../presets/prym1111-s2.json"),
        "prym1111-s3" => include_str!("../presets/prym1111-s3.json"),
        "prym1111-s4" => include_str!("../presets/prym1111-s4.json"),
        "prym1111-s5" => include_str!("../presets/prym1111-s5.json"),
        "prym211" => include_str!("../presets/prym211.json"),
        "prym22odd" => include_str!("../presets/prym22odd.json"),
        _ => return None,
    })
}

fn preset_dir() -> Option<PathBuf> {
    std::env::var_os("FLATKERN_PRESETS").map(PathBuf::from)
}

pub fn list_presets() -> Vec<String> {
    if let Some(dir) = preset_dir() {
        let mut ids: Vec<String> = std::fs::read_dir(dir)
            .map(|rd| {
                rd.filter_map(|e| e.ok())
                    .filter_map(|e| e.file_name().to_str().and_then(|n| n.strip_suffix(".json")).map(String::from))
                    .collect()
            })
            .unwrap_or_default();
        ids.sort();
        return ids;
    }
    PRESET_IDS.iter().map(|s| s.to_string()).collect()
}

pub fn load_preset(id: &str) -> Result<PresetEntry> {
    let text = match preset_dir() {
        Some(dir) => std::fs::read_to_string(dir.join(format!("{id}.json")))
            .map_err(|_| Error::UnknownPreset(id.to_string()))?,
        None => builtin(id).ok_or_else(|| Error::UnknownPreset(id.to_string()))?.to_string(),
    };
    Ok(serde_json::from_str(&text)?)
}

pub fn preset_to_string(p: &PresetEntry) -> String {
    serde_json::to_string_pretty(p).expect("serializable") + "\n"
}

/// Rebuilds a preset from the figure table.
pub fn generate_preset(id: &str) -> Result<PresetEntry> {
    if id == "prym1111-base" {
        let p = prym_base();
        let sig = stratum_signature(&p)?;
        return Ok(PresetEntry {
            certificates: BTreeMap::new(),
            default_locus: "prym".into(),
            description: "Base prediagram of Prym(1,1,1,1): four 4-valent stars; letters a-f are the positive components, digits 1-6 the negative ones. The involution exchanges stars 1,2 and 3,4.".into(),
            fixed_cylinders: vec![],
            genus: sig.genus,
            id: id.into(),
            involution: Some(prym_base_involution()),
            kappa: sig.kappa,
            labels: Some(prym_base_labels().into_iter().map(|(k, v)| (k, comp_key(v))).collect()),
            metrics: BTreeMap::new(),
            prediagram: Some(DiagramJson::prediagram_json(&p)),
            saddle_names: BTreeMap::new(),
        });
    }
    let fig = figures().into_iter().find(|f| f.id == id).ok_or_else(|| Error::UnknownPreset(id.to_string()))?;
    let gold: BTreeMap<String, QuadraticNumber> =
        fig.lengths.iter().map(|(n, (p, q), _)| (n.to_string(), golden(*p, *q))).collect();
    let unit: BTreeMap<String, QuadraticNumber> =
        fig.lengths.iter().map(|(n, _, u)| (n.to_string(), QuadraticNumber::from_int(*u, 0))).collect();
    let (dg, names) = cylinder_diagram(&fig.cylinders, &gold, 5)?;
    let (du, _) = cylinder_diagram(&fig.cylinders, &unit, 0)?;
    let sig = stratum_signature(&dg.prediagram)?;
    let involution = match &fig.fixed {
        None => None,
        Some(fixed) => {
            let want: Vec<usize> = fixed.iter().map(|i| i - 1).collect();
            let inv = find_prym_involutions(&dg)
                .into_iter()
                .find(|inv| inv.fixed_cylinders() == want)
                .ok_or_else(|| Error::InvalidDiagram(format!("{id}: no involution with fixed cylinders {fixed:?}")))?;
            Some(inv.rho)
        }
    };
    let saddle_names =
        dg.prediagram.saddle_connections().iter().zip(&names).map(|(s, n)| (sc_key(s.id), n.clone())).collect();
    Ok(PresetEntry {
        certificates: fig.certificates.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        default_locus: if involution.is_some() { "prym".into() } else { "full".into() },
        description: fig.description.into(),
        fixed_cylinders: fig.fixed.unwrap_or_default(),
        genus: sig.genus,
        id: id.into(),
        involution,
        kappa: sig.kappa,
        labels: None,
        metrics: [(GOLDEN.to_string(), dg.to_json()), (UNIT.to_string(), du.to_json())].into_iter().collect(),
        prediagram: None,
        saddle_names,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_labels_round_trip() {
        let s = LabelScheme::from_labels(&prym_base_labels()).unwrap();
        for t in ["fabced", "cafbed", "cdefab", "cefbda", "faecdb"] {
            let m = s.matching(t).unwrap();
            m.validate(&prym_base()).unwrap();
            assert_eq!(s.tuple(&m), t);
        }
        assert!(s.matching("aabcde").is_err());
    }

    #[test]
    fn base_involution_maps_two_to_a() {
        let rho = prym_base_involution();
        let p = prym_base();
        let comp = p.component_of();
        let l = prym_base_labels();
        assert_eq!(comp[rho[l["2"]]], l["a"]);
        assert_eq!(comp[rho[l["4"]]], l["f"]);
        assert_eq!(comp[rho[l["d"]]], l["5"]);
    }
}
