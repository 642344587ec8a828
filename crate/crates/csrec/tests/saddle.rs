use csrec::numeric::{ComplexAP, Precision};
use csrec::saddle::{cs_terms, grad_potential, max_residual, potential, reciprocity_sum_fig8, solve_system};
use proptest::prelude::*;

fn p64() -> Precision {
    Precision::default()
}

// T for p = 6, computed at 40 digits.
const T_REAL: f64 = 13.767_505_694_281_377;
const T_COMPLEX: (f64, f64) = (1.340_917_487_100_444, 1.284_485_300_468_354_4);

#[test]
fn census() {
    for p in [-8, -6, 6, 8, 10] {
        let sols = solve_system(p, p64()).unwrap();
        assert_eq!(sols.len(), p.unsigned_abs() as usize, "p = {p}");
        assert!(max_residual(p, &sols).unwrap() < 1e-10);
    }
}

#[test]
fn frozen_critical_values() {
    let terms = cs_terms(6, Precision::from_digits(40).unwrap()).unwrap();
    let mut reals: Vec<f64> = terms.iter().map(|s| s.t.re_f64().abs()).collect();
    reals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    reals.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    assert_eq!(reals.len(), 2);
    assert!((reals[1] - T_REAL).abs() < 1e-13);
    assert!((reals[0] - T_COMPLEX.0).abs() < 1e-13);
    for s in &terms {
        let im = s.t.im_f64().abs();
        assert!(im < 1e-30 || (im - T_COMPLEX.1).abs() < 1e-13);
    }
}

#[test]
fn mirror_surgery_negates_values() {
    let a = reciprocity_sum_fig8(6, p64()).unwrap();
    let b = reciprocity_sum_fig8(-6, p64()).unwrap();
    assert!(a.sum.dist(&-&b.sum) < 1e-15);
}

#[test]
fn conjugate_points_negate_flattenings() {
    for p in [6, 8, -10] {
        let terms = cs_terms(p, p64()).unwrap();
        for s in &terms {
            let partner = terms
                .iter()
                .find(|o| o.z.dist(&s.z.conj()) < 1e-12 && o.w.dist(&s.w.conj()) < 1e-12)
                .expect("conjugate point present");
            // The z = -1 points at p = 0 mod 4 are real and sit on the log cut.
            if std::ptr::eq(partner, s) {
                assert!(s.z.dist(&ComplexAP::from_f64(p64(), -1.0, 0.0)) < 1e-12);
                continue;
            }
            assert_eq!((partner.c, partner.d), (-s.c, -s.d));
            assert!(partner.t.dist(&s.t.conj()) < 1e-12);
        }
    }
}

#[test]
fn doubled_precision_keeps_passing() {
    for p in [6, -6, 8] {
        let lo = reciprocity_sum_fig8(p, p64()).unwrap();
        let hi = reciprocity_sum_fig8(p, p64().doubled()).unwrap();
        assert!(lo.distance < 1e-6 && hi.distance < 1e-6);
        assert!(hi.distance <= lo.distance.max(1e-30));
    }
}

fn fd_error(z: &ComplexAP, w: &ComplexAP, p: i64) -> f64 {
    let prec = z.prec();
    let h = ComplexAP::from_f64(prec, 1e-7, 0.0);
    let two_h = h.mul_int(2);
    let (gz, gw) = grad_potential(z, w, p).unwrap();
    let dz = (&potential(&(z + &h), w, p).unwrap() - &potential(&(z - &h), w, p).unwrap())
        .checked_div(&two_h)
        .unwrap();
    let dw = (&potential(z, &(w + &h), p).unwrap() - &potential(z, &(w - &h), p).unwrap())
        .checked_div(&two_h)
        .unwrap();
    (dz.dist(&gz) / gz.abs_f64().max(1.0)).max(dw.dist(&gw) / gw.abs_f64().max(1.0))
}

proptest! {
    #[test]
    fn gradient_matches_finite_differences(
        rz in 0.3f64..0.9, tz in -2.5f64..2.5,
        rw in 1.2f64..2.5, tw in -2.5f64..2.5,
        half_p in 3i64..6,
    ) {
        // |z| < 1 < |w| keeps zw and z/w inside the unit disc, away from the Li2 cut.
        let z = ComplexAP::from_f64(p64(), rz * tz.cos(), rz * tz.sin());
        let w = ComplexAP::from_f64(p64(), rw * tw.cos(), rw * tw.sin());
        let zw = &z * &w;
        prop_assume!(zw.abs_f64() < 0.9 || zw.im_f64().abs() > 0.05 || zw.re_f64() < 0.9);
        prop_assert!(fd_error(&z, &w, 2 * half_p) < 1e-6);
    }
}
