use std::path::PathBuf;

use flatkern::diagram::DiagramJson;
use flatkern::presets::{generate_preset, load_preset, preset_to_string, PresetEntry, GOLDEN, PRESET_IDS, UNIT};
use flatkern::prym::fixed_point_count;
use flatkern::surface::stratum_signature;
use flatkern::twistspace::{degree, in_span, inverse_pattern, is_minimal, Locus, TwistModel};

fn preset_path(id: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("presets").join(format!("{id}.json"))
}

/// Run with FLATKERN_BLESS=1 to rewrite the bundled files.
#[test]
fn bundled_files_match_generator() {
    let bless = std::env::var_os("FLATKERN_BLESS").is_some();
    for id in PRESET_IDS {
        let text = preset_to_string(&generate_preset(id).unwrap());
        let path = preset_path(id);
        if bless {
            std::fs::write(&path, &text).unwrap();
        }
        assert_eq!(std::fs::read_to_string(&path).unwrap(), text, "{id} is stale; rerun with FLATKERN_BLESS=1");
    }
}

#[test]
fn round_trip_is_byte_identical() {
    for id in PRESET_IDS {
        let text = std::fs::read_to_string(preset_path(id)).unwrap();
        let p: PresetEntry = serde_json::from_str(&text).unwrap();
        assert_eq!(preset_to_string(&p), text, "{id}");
        for (name, m) in &p.metrics {
            let again: DiagramJson = serde_json::from_str(&m.to_canonical_string()).unwrap();
            assert_eq!(&again, m, "{id}/{name}");
            assert_eq!(again.diagram().unwrap().to_json(), *m, "{id}/{name}");
        }
    }
}

#[test]
fn listed_ids() {
    let ids = flatkern::presets::list_presets();
    for id in ["genus2", "prym22odd", "prym211", "prym1111-base", "prym1111-s1", "prym1111-s5"] {
        assert!(ids.iter().any(|x| x == id), "{id}");
    }
    assert!(load_preset("no-such-thing").is_err());
}

#[test]
fn signatures() {
    let expect: &[(&str, &[usize], usize, usize)] = &[
        ("genus2", &[1, 1], 2, 3),
        ("prym22odd", &[2, 2], 3, 4),
        ("prym211", &[2, 1, 1], 3, 0),
        ("hyp22", &[2, 2], 3, 4),
        ("prym1111-s1", &[1, 1, 1, 1], 3, 6),
        ("prym1111-s2", &[1, 1, 1, 1], 3, 6),
        ("prym1111-s3", &[1, 1, 1, 1], 3, 6),
        ("prym1111-s4", &[1, 1, 1, 1], 3, 6),
        ("prym1111-s5", &[1, 1, 1, 1], 3, 6),
    ];
    for &(id, kappa, genus, ncyl) in expect {
        let p = load_preset(id).unwrap();
        assert_eq!(p.kappa, kappa, "{id}");
        assert_eq!(p.genus, genus, "{id}");
        let pd = p.prediagram().unwrap();
        assert!(pd.is_valid() && pd.is_stable(), "{id}");
        assert_eq!(stratum_signature(&pd).unwrap().kappa, kappa, "{id}");
        for metric in [GOLDEN, UNIT] {
            let d = p.diagram(metric).unwrap();
            d.validate().unwrap();
            if ncyl > 0 {
                assert_eq!(d.cylinders().len(), ncyl, "{id}");
            }
        }
    }
    let base = load_preset("prym1111-base").unwrap();
    assert!(base.is_prediagram_only());
    assert_eq!(base.kappa, vec![1, 1, 1, 1]);
}

#[test]
fn documented_involutions_rederive() {
    for id in PRESET_IDS {
        let p = load_preset(id).unwrap();
        if p.is_prediagram_only() || p.involution.is_none() {
            continue;
        }
        for metric in [GOLDEN, UNIT] {
            let inv = p.prym_involution(metric).unwrap().unwrap();
            let fixed: Vec<usize> = inv.fixed_cylinders().iter().map(|i| i + 1).collect();
            assert_eq!(fixed, p.fixed_cylinders, "{id}/{metric}");
            let d = p.diagram(metric).unwrap();
            let counts = fixed_point_count(&d, &inv.rho).unwrap();
            assert_eq!((counts.0 + counts.1 + 2 * counts.2) as i64, 10 - 2 * p.genus as i64, "{id}");
        }
    }
    let p = load_preset("prym22odd").unwrap();
    assert_eq!(p.fixed_cylinders, vec![1, 2]);
}

#[test]
fn documented_certificates_rederive() {
    for id in PRESET_IDS {
        let p = load_preset(id).unwrap();
        if p.certificates.is_empty() {
            continue;
        }
        let s = p.surface(GOLDEN).unwrap();
        let full = TwistModel::new(&s, Locus::FullStratum).unwrap();
        let c = s.circumferences();
        for (name, list) in &p.certificates {
            for delta in list {
                let u = inverse_pattern(delta, &c).unwrap();
                assert!(in_span(&u, &full.k_full), "{id}/{name} {delta:?} not in K_full");
                assert!(is_minimal(&u, &full.k_full).is_ok(), "{id}/{name}");
                let _ = degree(&u).unwrap();
            }
        }
    }
}
