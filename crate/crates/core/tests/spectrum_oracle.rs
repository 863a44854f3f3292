use std::collections::HashMap;

use twzeta_core::fuchsian::brute::{minimal_translation_length, naive_classes};
use twzeta_core::fuchsian::{
    bolza_group, enumerate_spectrum, enumerate_spectrum_indexed, Completeness, EnumOptions, Isometry,
};

fn systole() -> f64 {
    2.0 * (1.0 + std::f64::consts::SQRT_2).acosh()
}

#[test]
fn production_matches_reference_enumeration_at_length_four() {
    let g = bolza_group();
    let (sp, index) = enumerate_spectrum_indexed(&g, 4.0, &EnumOptions::default()).unwrap();
    assert_eq!(sp.completeness, Completeness::Exhaustive);
    let naive = naive_classes(&g, 4.0, 8, 2).unwrap();
    eprintln!("production classes: {}, reference classes: {}", sp.classes.len(), naive.len());
    assert_eq!(naive.len(), sp.classes.len());
    let mut hit: HashMap<usize, usize> = HashMap::new();
    for (k, nc) in naive.iter().enumerate() {
        let targets: Vec<Option<usize>> = nc.members.iter().map(|(m, _)| index.classify(m)).collect();
        let t = targets[0].expect("reference class missing from production spectrum");
        assert!(targets.iter().all(|x| *x == Some(t)), "reference class {k} splits");
        assert!(hit.insert(t, k).is_none(), "two reference classes map to production class {t}");
        assert!((sp.classes[t].length - nc.length).abs() <= 1e-12);
    }
}

#[test]
fn systole_matches_brute_force_minimum() {
    let best = minimal_translation_length(&bolza_group(), 8).unwrap();
    assert!((best - systole()).abs() < 1e-12);
    let sp = enumerate_spectrum(&bolza_group(), 4.0, &EnumOptions::default()).unwrap();
    assert!((sp.systole().unwrap() - best).abs() < 1e-12);
}

#[test]
fn spectrum_invariants_at_length_five() {
    let g = bolza_group();
    let (sp, index) = enumerate_spectrum_indexed(&g, 5.0, &EnumOptions::default()).unwrap();
    eprintln!("L=5: {} classes, stats {:?}", sp.classes.len(), sp.stats);
    for (i, c) in sp.classes.iter().enumerate() {
        let from_trace = 2.0 * (c.matrix.abs_trace() / 2.0).acosh();
        assert!((from_trace - c.length).abs() <= 1e-12 * c.length);
        assert!(c.length <= 5.0 && c.length > 0.0);
        assert!(c.word.is_cyclically_reduced());
        assert_eq!(c.primitive, c.power_index == 1);
        // Conjugation invariance and inverse closure.
        for x in &g.generators {
            let conj = x.mul(&c.matrix).mul(&x.inverse());
            assert_eq!(index.classify(&conj), Some(i));
        }
        let inv = index.classify(&c.matrix.inverse()).expect("inverse class present");
        assert_ne!(inv, i, "Bolza geodesics are not conjugate to their inverses");
        let w = g.evaluate(&c.word).unwrap();
        assert_eq!(index.classify(&w), Some(i));
    }
    for w in sp.classes.windows(2) {
        assert!(w[0].length <= w[1].length + 1e-12);
    }
    // Primitivity: no primitive class is a power of another enumerated class.
    for d in &sp.classes {
        let mut p: Isometry = d.matrix;
        for _ in 2..=4 {
            p = p.mul(&d.matrix);
            if let Some(c) = index.classify(&p) {
                assert!(!sp.classes[c].primitive);
            }
        }
    }
}

#[test]
fn spectrum_is_monotone_in_cutoff() {
    let g = bolza_group();
    let small = enumerate_spectrum(&g, 3.5, &EnumOptions::default()).unwrap();
    let (large, index) = enumerate_spectrum_indexed(&g, 5.0, &EnumOptions::default()).unwrap();
    let mut seen = std::collections::HashSet::new();
    for c in &small.classes {
        let k = index.classify(&c.matrix).expect("class kept at larger cutoff");
        assert!(seen.insert(k));
        assert!((large.classes[k].length - c.length).abs() < 1e-12);
    }
}

#[test]
fn float_and_exact_agree_on_bolza() {
    let g = bolza_group();
    let exact = enumerate_spectrum(&g, 4.0, &EnumOptions::default()).unwrap();
    let float = enumerate_spectrum(&g.to_float(), 4.0, &EnumOptions::default()).unwrap();
    assert_eq!(exact.classes.len(), float.classes.len());
    for (a, b) in exact.classes.iter().zip(&float.classes) {
        assert!((a.length - b.length).abs() < 1e-9);
    }
}
