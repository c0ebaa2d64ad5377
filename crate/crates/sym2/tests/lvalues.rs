use rug::Float;
use sym2_moment::lvalues::oracle::oracle_coefficients_needed;
use sym2_moment::lvalues::{sym2_oracle_checked, sym2_series, weighted_eigenforms};
use sym2_moment::mp::{pi, rel_err};
use sym2_moment::PrecisionPolicy;

fn pol() -> PrecisionPolicy {
    PrecisionPolicy::new(30, 1e-12, 1e-12).unwrap()
}

#[test]
fn rankin_constancy() {
    // w_f (k − 1) L(1, sym²f) = 2π² for every eigenform
    let p = pol();
    for k in [12u32, 24, 36] {
        let len = oracle_coefficients_needed(k, 1.0, 1e-12) + 1;
        let forms = weighted_eigenforms(k, len, &p, None).unwrap();
        let want = Float::with_val(p.bits(), pi(p.bits()).square() * 2u32);
        for f in &forms {
            let l = sym2_oracle_checked(f, 1.0, &p).unwrap();
            let got = Float::with_val(p.bits(), f.weight().unwrap() * &l) * (k - 1);
            assert!(rel_err(&got, &want) < 1e-10, "k = {k}: {got}");
        }
    }
}

#[test]
fn oracle_matches_euler_product_at_three() {
    let p = PrecisionPolicy::new(30, 2e-9, 2e-9).unwrap();
    for k in [16u32, 24] {
        let forms = weighted_eigenforms(k, 40_000, &p, None).unwrap();
        for f in &forms {
            let a = sym2_oracle_checked(f, 3.0, &p).unwrap();
            let b = sym2_series(f, 3.0, &p).unwrap();
            assert!(b.certified);
            assert!(rel_err(&a, &b.value) < 1e-8, "k = {k}");
        }
    }
}
