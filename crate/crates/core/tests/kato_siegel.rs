use eisenkron::kato_siegel::{
    distribution_suite, distribution_trace_lemma, omega_d, omega_d_closed, omega_t_residue, residue_law, sample_points,
    trace_check, translation_check,
};
use eisenkron::numerics::{cx, rel_defect};
use eisenkron::{Lattice, PrecisionContext, TorsionPoint};

const PREC: u32 = 256;

fn lattices() -> [Lattice; 2] {
    let ctx = PrecisionContext::default();
    [
        Lattice::from_tau(&cx(PREC, 0.0, 1.0), &ctx).unwrap(),
        Lattice::from_tau(&cx(PREC, 0.5, 3f64.sqrt() / 2.0), &ctx).unwrap(),
    ]
}

#[test]
fn summed_form_equals_closed_form() {
    for lat in lattices() {
        let z = cx(PREC, 0.23, 0.17);
        for d in [2u64, 3, 4, 6] {
            let a = omega_d(&z, d, &lat).unwrap();
            let b = omega_d_closed(&z, d, &lat).unwrap();
            assert!(rel_defect(&a, &b) < 1e-20, "D = {d}");
        }
    }
}

#[test]
fn residues_are_integers() {
    let [lat, _] = lattices();
    let entries = residue_law(2, &lat).unwrap();
    assert_eq!(entries.len(), 4);
    let total: i64 = entries.iter().map(|e| e.expected).sum();
    assert_eq!(total, 0);
    for e in &entries {
        assert!(e.defect < 1e-20, "{}: {:e}", e.point, e.defect);
    }
}

#[test]
fn single_residue_is_the_pairing() {
    let [lat, _] = lattices();
    let t = TorsionPoint::new(0, 1, 3).unwrap();
    for (m, n) in [(0, 0), (1, 0), (0, 1)] {
        let (res, want) = omega_t_residue(&t, m, n, &lat).unwrap();
        assert!(rel_defect(&res, &want) < 1e-20, "({m},{n})");
    }
}

#[test]
fn translation_character() {
    for lat in lattices() {
        let t = TorsionPoint::new(0, 1, 3).unwrap();
        let shift = TorsionPoint::new(1, 2, 3).unwrap();
        let c = translation_check(&t, &shift, &sample_points(&lat, 4, 1), &lat).unwrap();
        assert!(c.defect < 1e-20, "{:e}", c.defect);
    }
}

#[test]
fn trace_compatibility() {
    let [lat, _] = lattices();
    let z = cx(PREC, 0.23, 0.17);
    for (d, n) in [(2u64, 3u64), (3, 2), (2, 5)] {
        assert!(trace_check(d, n, &z, &lat).unwrap() < 1e-20, "({d},{n})");
    }
    assert!(trace_check(2, 4, &z, &lat).is_err());
}

#[test]
fn sample_points_are_deterministic() {
    let [lat, _] = lattices();
    assert_eq!(sample_points(&lat, 5, 2), sample_points(&lat, 5, 2));
    assert_ne!(sample_points(&lat, 5, 2), sample_points(&lat, 5, 3));
}

#[test]
fn distribution_instances() {
    let [lat, _] = lattices();
    let s = TorsionPoint::new(1, 0, 5).unwrap();
    let t = TorsionPoint::new(1, 1, 2).unwrap();
    let t6 = TorsionPoint::new(1, 2, 6).unwrap();
    let rep = distribution_suite(2, 3, 5, &s, &t, &t6, 5, &lat).unwrap();
    assert_eq!(rep.entries.len(), 3);
    for e in &rep.entries {
        assert_eq!(e.samples, 5, "{}", e.name);
        assert!(e.defect.unwrap() < 1e-18, "{}: {:?}", e.name, e.defect);
    }
    let half = TorsionPoint::new(1, 0, 2).unwrap();
    assert!(distribution_trace_lemma(&half, 3, &lat).unwrap().defect.is_none());
}
