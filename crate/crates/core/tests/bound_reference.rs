//! Bound values against 256-bit mpmath references produced by
//! `oracles/bound_reference.py`.

use bigkey_fpe::bounds::{
    entropy_h, entropy_h_inv, gamma, gamma_crossing, theorem1_bound, theorem1_log2, theorem1_terms,
    BoundInputs, Variant,
};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

const EXACT: [(i32, f64, f64); 3] = [
    (10, 4.523_458_950_666_863_5e-33, 2.988_733_526_233_285e-33),
    (20, 4.645_205_239_122_574e-30, 3.073_646_404_502_589_3e-30),
    (30, 2.164_213_574_200_251_4e-25, 2.148_120_811_733_742_8e-25),
];

const CLOSED: [(i32, f64); 3] = [
    (10, 5.063_169_773_182_522_5e-33),
    (20, 5.200_345_420_832_481_4e-30),
    (30, 2.622_453_026_209_983e-25),
];

#[test]
fn entropy_references() {
    assert!(rel(entropy_h(0.11).unwrap(), 0.499_915_958_164_528) < 1e-15);
    assert!(rel(entropy_h_inv(0.5).unwrap(), 0.889_972_135_561_640_5) < 1e-15);
}

#[test]
fn exact_inverse_totals() {
    for (e, total, g) in EXACT {
        let b = BoundInputs::terabyte_example(2f64.powi(e));
        let got = theorem1_bound(&b, Variant::ExactInverse).unwrap();
        assert!(rel(got, total) < 1e-12, "q=2^{e}: {got} vs {total}");
        assert!(rel(gamma(&b).unwrap(), g) < 1e-12);
        let lg = theorem1_log2(&b, Variant::ExactInverse).unwrap();
        assert!(rel(lg.exp2(), total) < 1e-6, "log route at q=2^{e}");
    }
}

#[test]
fn closed_form_totals() {
    for (e, total) in CLOSED {
        let b = BoundInputs::terabyte_example(2f64.powi(e));
        let got = theorem1_bound(&b, Variant::ClosedForm).unwrap();
        assert!(rel(got, total) < 1e-12, "q=2^{e}: {got} vs {total}");
        assert!(got >= theorem1_bound(&b, Variant::ExactInverse).unwrap());
    }
}

#[test]
fn mixing_term_reference() {
    let t = theorem1_terms(
        &BoundInputs::terabyte_example(2f64.powi(30)),
        Variant::ExactInverse,
    )
    .unwrap();
    assert!(rel(t.mixing, 9.341_989_762e-46) < 1e-9);
    assert_eq!(t.oracle, 0.0);
}

#[test]
fn half_crossing_reference() {
    let q = gamma_crossing(&BoundInputs::terabyte_example(1.0), 0.5, 1.0, 2f64.powi(40))
        .unwrap()
        .unwrap();
    assert!((q.log2() - 34.542_013_898_5).abs() < 1e-6);
}
