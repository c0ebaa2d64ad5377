use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Complex, Float};
use sym2_moment::arith::{kloosterman, CountKind};
use sym2_moment::asymptotics::{i_closed, s_sign};
use sym2_moment::harness::{read_moment_records, render_moment, MomentRow, RunConfig};
use sym2_moment::mp::{abs_err_c, sci};
use sym2_moment::{Error, PrecisionPolicy};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn even_ranges_validate(lo in 6u32..40, span in 0u32..20) {
        let c = RunConfig { k_min: 2 * lo, k_max: 2 * (lo + span), ..RunConfig::default() };
        prop_assert!(c.validate().is_ok());
        prop_assert_eq!(c.weights().len() as u32, span + 1);
    }

    #[test]
    fn odd_or_small_weights_are_config_errors(lo in 0u32..80, hi in 0u32..80) {
        let c = RunConfig { k_min: lo, k_max: hi, ..RunConfig::default() };
        let ok = lo >= 12 && lo % 2 == 0 && hi % 2 == 0 && lo <= hi;
        match c.validate() {
            Ok(()) => prop_assert!(ok),
            Err(e) => {
                prop_assert!(!ok);
                prop_assert!(matches!(e, Error::Config(_)));
            }
        }
    }

    #[test]
    fn fingerprint_tracks_every_setting(digits in 30u32..80, sigma in 0.6f64..3.0) {
        let a = RunConfig { digits, sigma, ..RunConfig::default() };
        let b = a.clone();
        prop_assert_eq!(a.fingerprint(), b.fingerprint());
        let c = RunConfig { digits: digits + 1, ..a.clone() };
        prop_assert_ne!(a.fingerprint(), c.fingerprint());
    }

    #[test]
    fn scientific_strings_round_trip(m in -1.0e6f64..1.0e6, e in -40i32..40, digits in 20usize..60) {
        let prec = 256;
        let x = Float::with_val(prec, m) * Float::with_val(prec, 10).pow(e);
        let s = sci(&x, digits);
        prop_assert!(s.contains('e'));
        let back = Float::with_val(prec, Float::parse(&s).unwrap());
        if !x.is_zero() {
            let rel = (Float::with_val(prec, &back - &x) / &x).abs().to_f64();
            prop_assert!(rel < 10f64.powi(1 - digits as i32));
        }
    }

    #[test]
    fn kloosterman_is_symmetric_and_bounded(m in 1i64..60, n in 1i64..60, c in 1u64..120) {
        let a = kloosterman(m, n, c, 128);
        let b = kloosterman(n, m, c, 128);
        prop_assert!(Float::with_val(128, &a - &b).abs() < 1e-25);
        // Weil: |S| ≤ τ(c) √gcd(m, n, c) √c
        let g = sym2_moment::arith::gcd(sym2_moment::arith::gcd(m as u64, n as u64), c);
        let bound = sym2_moment::arith::divisor_count(c) as f64 * ((g * c) as f64).sqrt();
        prop_assert!(a.to_f64().abs() <= bound + 1e-9);
    }

    #[test]
    fn convolution_identities_hold_on_prefixes(n in 1u64..3000) {
        for kind in [CountKind::N, CountKind::M] {
            prop_assert!(sym2_moment::arith::convolution_identity_check(kind, n).holds);
        }
    }

    #[test]
    fn sign_table_has_period_six(k in 6u32..400) {
        let k = 2 * k;
        prop_assert_eq!(s_sign(k), s_sign(k + 6));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn closed_integral_is_continuous_in_y(yr in 0.3f64..6.0, ur in 0.75f64..3.0, ui in -1.0f64..1.0) {
        let p = PrecisionPolicy::new(30, 1e-20, 1e-20).unwrap();
        let prec = p.bits();
        let u = Complex::with_val(prec, (ur, ui));
        let y = Float::with_val(prec, yr);
        let y2 = Float::with_val(prec, yr + 1e-7);
        let a = i_closed(&u, &y, 24, &p).unwrap();
        let b = i_closed(&u, &y2, 24, &p).unwrap();
        prop_assert!(abs_err_c(&a, &b) < 1e-3);
    }
}

#[test]
fn error_rows_survive_a_round_trip() {
    let config = RunConfig::default();
    let rows = vec![MomentRow::Failed { k: 12, error: "tail \"bound\", exceeded".into() }];
    let text = render_moment(&rows, &config).unwrap();
    let back = read_moment_records(&text).unwrap();
    assert_eq!(back.len(), 1);
    assert_eq!(back[0].status, "error");
    assert_eq!(back[0].error, "tail \"bound\", exceeded");
    assert_eq!(back[0].fingerprint, config.fingerprint());
}
