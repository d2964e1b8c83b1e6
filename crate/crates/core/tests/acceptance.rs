//! The acceptance suite: every numbered criterion at the three canonical
//! verification points, printing one pass/fail line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use wt1::acceptance::{
    build_point, criterion_dual_construction, criterion_ferrero_greenberg, criterion_gross,
    criterion_interpolation, criterion_linear_relation, criterion_properties,
    criterion_stability, criterion_structure, criterion_theorem_d, criterion_trivial_zero,
    tolerances, BuiltPoint, CriterionReport, PointSpec, CANONICAL_POINTS,
};

fn points() -> Vec<BuiltPoint> {
    CANONICAL_POINTS
        .iter()
        .map(|&(d, p)| {
            let spec = PointSpec::quadratic(d, p, tolerances::DEFAULT_PRECISION).unwrap();
            build_point(&spec).unwrap()
        })
        .collect()
}

fn assert_criterion(rep: &CriterionReport, label: &str) {
    println!("{}  {}", rep.summary_line(), label);
    assert!(
        rep.pass,
        "criterion {} failed at {}: {:#?}",
        rep.id, label, rep.sets
    );
}

#[test]
fn criterion_01_gross_formula() {
    for bp in points() {
        let rep = criterion_gross(&bp).unwrap();
        assert_criterion(&rep, &bp.spec.label());
    }
}

#[test]
fn criterion_02_trivial_zero() {
    for bp in points() {
        let rep = criterion_trivial_zero(&bp).unwrap();
        assert_criterion(&rep, &bp.spec.label());
    }
}

#[test]
fn criterion_03_ferrero_greenberg() {
    for bp in points() {
        let rep = criterion_ferrero_greenberg(&bp, 4).unwrap();
        assert_criterion(&rep, &bp.spec.label());
    }
}

#[test]
fn criterion_04_interpolation_oracle() {
    for bp in points() {
        let rep = criterion_interpolation(&bp).unwrap();
        assert_criterion(&rep, &bp.spec.label());
    }
}

#[test]
fn criterion_05_linear_relation() {
    for bp in points() {
        let rep = criterion_linear_relation(&bp).unwrap();
        assert_criterion(&rep, &bp.spec.label());
    }
}

#[test]
fn criterion_06_eigenspace_identities() {
    for bp in points() {
        let rep = criterion_theorem_d(&bp).unwrap();
        assert_criterion(&rep, &bp.spec.label());
    }
}

#[test]
fn criterion_07_dual_construction() {
    for bp in points() {
        let rep = criterion_dual_construction(&bp).unwrap();
        assert_criterion(&rep, &bp.spec.label());
    }
}

#[test]
fn criterion_08_structure_models() {
    for bp in points() {
        let rep = criterion_structure(&bp).unwrap();
        assert_criterion(&rep, &bp.spec.label());
    }
}

#[test]
fn criterion_09_property_suites() {
    for bp in points() {
        let rep = criterion_properties(&bp).unwrap();
        assert_criterion(&rep, &bp.spec.label());
    }
}

#[test]
fn criterion_10_precision_stability() {
    for (d, p) in CANONICAL_POINTS {
        let spec = PointSpec::quadratic(d, p, tolerances::DEFAULT_PRECISION).unwrap();
        let rep = criterion_stability(&spec).unwrap();
        assert_criterion(&rep, &spec.label());
    }
}
