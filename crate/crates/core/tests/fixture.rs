use ruequiv::fixture::{generate, mean_cramers_v, FixtureSpec};

#[test]
fn dependence_controls_association() {
    let strong = generate(&FixtureSpec::census(5000, 0.9), 1).unwrap();
    let none = generate(&FixtureSpec::census(5000, 0.0), 1).unwrap();
    let (vs, vn) = (mean_cramers_v(&strong).unwrap(), mean_cramers_v(&none).unwrap());
    assert!(vs > 0.3, "high dependence gave {vs}");
    assert!(vn < 0.05, "zero dependence gave {vn}");
}

#[test]
fn same_seed_same_table() {
    let spec = FixtureSpec::generic(500, 3, 1, 4, 0.5);
    assert_eq!(generate(&spec, 8).unwrap(), generate(&spec, 8).unwrap());
    assert_ne!(generate(&spec, 8).unwrap(), generate(&spec, 9).unwrap());
}
