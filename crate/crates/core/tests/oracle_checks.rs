//! Library results against the independent high-precision oracles.

use hisigma::audit::binomial_tail_at_least;
use hisigma::fattail::{gap_vs_gaussian, student_t_tail, TDistSpec};
use hisigma::tailprob::{
    gauss_tail, gauss_tail_asymptotic, gauss_tail_exact, occurrence_days, TailMode, TailQuery,
};
use hisigma::Magnitude;
use hisigma_oracle::{binomial, gauss, quad, Sci};

fn rel_to(m: &Magnitude, s: &Sci) -> f64 {
    s.rel_diff(m.decade(), m.fraction())
}

#[test]
fn exact_path_checkpoints() {
    let mut k = 0.5;
    while k <= 9.5 + 1e-12 {
        let got = gauss_tail_exact(k).unwrap().probability;
        let rel = rel_to(&got, &gauss::gauss_tail(k));
        assert!(rel <= 1e-12, "k={k} rel={rel:e}");
        k += 0.5;
    }
}

#[test]
fn exact_path_dense_grid() {
    for i in 1..=95 {
        let k = i as f64 / 10.0 + 0.0371;
        if k > 9.5 {
            break;
        }
        let got = gauss_tail_exact(k).unwrap().probability;
        let rel = rel_to(&got, &gauss::gauss_tail(k));
        assert!(rel <= 1e-12, "k={k} rel={rel:e}");
    }
}

#[test]
fn asymptotic_path_far_tail() {
    for k in [10.0, 12.5, 15.0, 20.0, 25.0, 40.0, 100.0, 1e3, 1e4, 1e5, 1e6] {
        let got = gauss_tail_asymptotic(k).unwrap().probability;
        let rel = rel_to(&got, &gauss::gauss_tail(k));
        assert!(rel <= 1e-12, "k={k} rel={rel:e}");
    }
}

#[test]
fn truncation_bound_covers_actual_error() {
    for (k, terms) in [(10.0, 3), (15.0, 4), (20.0, 4), (25.0, 5)] {
        let r = hisigma::tailprob::gauss_tail_asymptotic_terms(k, terms).unwrap();
        let actual = rel_to(&r.probability, &gauss::gauss_tail(k));
        let bound = r.diagnostics.truncation_bound;
        assert!(bound >= actual, "k={k} terms={terms} bound={bound:e} actual={actual:e}");
        assert!(actual > 0.1 * bound, "k={k}: bound should be sharp");
    }
    for k in [10.0, 15.0, 20.0, 25.0] {
        let r = gauss_tail_asymptotic(k).unwrap();
        let actual = rel_to(&r.probability, &gauss::gauss_tail(k));
        assert!(r.diagnostics.truncation_bound + 1e-15 >= actual, "k={k}");
    }
}

#[test]
fn occurrence_days_against_oracle() {
    // days = 1/p, so the relative error carries over unchanged
    for k in [3.0, 4.0, 5.0, 6.0, 7.0] {
        let r = gauss_tail(&TailQuery::new(k)).unwrap();
        let o = gauss::gauss_tail(k);
        let inv = occurrence_days(&r.probability).unwrap();
        let rel = o.rel_diff(-inv.decade() - 1, 1.0 - inv.fraction());
        assert!(rel <= 1e-9, "k={k} rel={rel:e}");
    }
}

#[test]
fn auto_mode_tracks_oracle_everywhere() {
    for k in [0.0, 0.25, 2.49, 2.51, 8.99, 9.0, 9.01, 30.0, 500.0] {
        let r = gauss_tail(&TailQuery::new(k).mode(TailMode::Auto)).unwrap();
        let rel = rel_to(&r.probability, &gauss::gauss_tail(k));
        assert!(rel <= 1e-12, "k={k} rel={rel:e}");
    }
}

#[test]
fn binomial_against_exact_sums() {
    let cases: &[(u64, u64, &str)] = &[
        (44, 1, "0.02275"),
        (250, 2, "3.057e-138"),
        (2_000, 46, "0.02275"),
        (2_000, 60, "0.02275"),
        (2_000, 30, "0.02275"),
        (300, 3, "9.865876450376946e-10"),
        (1_000, 1_000, "0.5"),
        (2_000, 7, "0.001"),
        (500, 40, "0.3"),
    ];
    for &(n, m, p) in cases {
        let pm: Magnitude = p.parse().unwrap();
        let got = binomial_tail_at_least(n, m, &pm).unwrap();
        let want = binomial::tail_at_least(n, m, p);
        let rel = rel_to(&got, &want);
        assert!(rel <= 1e-9, "n={n} m={m} p={p} rel={rel:e}");
    }
}

#[test]
fn binomial_large_n() {
    // too large for the exact oracle; P(X >= 1) = 1 - (1 - p)^n instead
    let p = 1e-7;
    let got = binomial_tail_at_least(1_000_000, 1, &Magnitude::from_real(p).unwrap())
        .unwrap()
        .to_real();
    let want = -(1_000_000.0 * (-p).ln_1p()).exp_m1();
    assert!((got / want - 1.0).abs() < 1e-9, "{got} vs {want}");
}

#[test]
fn student_t_against_quadrature() {
    for nu in [1.0, 2.5, 3.0, 4.0, 5.0, 10.0, 30.0] {
        for t in [0.1, 0.5, 1.0, 2.0, 3.5, 7.0, 20.0, 150.0] {
            let got = student_t_tail(t, &TDistSpec::raw(nu).unwrap()).unwrap().to_real();
            let want = quad::student_t_sf(t, nu);
            let rel = (got / want - 1.0).abs();
            assert!(rel <= 1e-10, "nu={nu} t={t} rel={rel:e}");
        }
    }
    for nu in [3.0, 4.0, 10.0] {
        for k in [1.0, 2.0, 5.0, 10.0, 25.0] {
            let got = student_t_tail(k, &TDistSpec::standardized(nu).unwrap()).unwrap().to_real();
            let want = quad::standardized_t_sf(k, nu);
            let rel = (got / want - 1.0).abs();
            assert!(rel <= 1e-10, "nu={nu} k={k} rel={rel:e}");
        }
    }
}

#[test]
fn gap_at_ten_sigma_four_dof() {
    let t = quad::standardized_t_sf(10.0, 4.0).log10();
    let g = gauss::gauss_tail(10.0).log10();
    let want = (t - g).floor() as i64;
    assert_eq!(want, 18);
    assert_eq!(gap_vs_gaussian(10.0, &TDistSpec::standardized(4.0).unwrap()).unwrap(), want);
}

#[test]
fn standardized_three_dof_at_twenty_five_sigma() {
    let got = student_t_tail(25.0, &TDistSpec::standardized(3.0).unwrap()).unwrap();
    assert!((got.log10_value() + 5.0).abs() <= 1.0);
    let want = quad::standardized_t_sf(25.0, 3.0);
    assert!((got.to_real() / want - 1.0).abs() < 1e-10);
}
