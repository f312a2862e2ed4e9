//! Independent reference values for the spectral building blocks.

use approx::assert_relative_eq;
use twopoint::quadrature::{gauss_jacobi, jacobi_mass};
use twopoint::scalar::ln_gamma;
use twopoint::space::catalog_sample;
use twopoint::{catalog, Family, JacobiIndex, SpaceId, SpaceParams};

/// `Q_n(x) = ₂F₁(−n, n+α+β+1; α+1; (1−x)/2)`, summed term by term. For
/// `x < 0` the reflection `P_n^{(α,β)}(x) = (−1)^n P_n^{(β,α)}(−x)` keeps the
/// argument below `1/2`.
fn q_hypergeometric(n: u64, a: f64, b: f64, x: f64) -> f64 {
    if x < 0.0 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let ratio = pochhammer_over_factorial(b, n) / pochhammer_over_factorial(a, n);
        return sign * ratio * hypergeometric_sum(n, b, a, -x);
    }
    hypergeometric_sum(n, a, b, x)
}

fn hypergeometric_sum(n: u64, a: f64, b: f64, x: f64) -> f64 {
    let z = (1.0 - x) / 2.0;
    let n = n as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut j = 0.0;
    while j < n {
        term *= (-n + j) * (n + a + b + 1.0 + j) / ((a + 1.0 + j) * (j + 1.0)) * z;
        sum += term;
        j += 1.0;
    }
    sum
}

fn pochhammer_over_factorial(a: f64, n: u64) -> f64 {
    (1..=n).map(|j| (a + j as f64) / j as f64).product()
}

fn factorial_ratio_u128(top: u64, bottom: u64) -> u128 {
    (bottom + 1..=top).map(u128::from).product()
}

fn binom(n: u64, k: u64) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// Harmonic dimensions from classical closed forms.
fn d_closed_form(id: SpaceId, k: u64) -> f64 {
    let m = u64::from(id.m);
    match id.family {
        Family::Sphere => {
            if k == 0 {
                1.0
            } else {
                (2 * k + m - 1) as f64 * factorial_ratio_u128(k + m - 2, k) as f64
                    / factorial_ratio_u128(m - 1, 1) as f64
            }
        }
        Family::RealProjective => d_closed_form(SpaceId::sphere(id.m).unwrap(), 2 * k),
        Family::ComplexProjective => {
            let n = m / 2;
            let c = binom(k + n - 1, k) as f64;
            (2 * k + n) as f64 / n as f64 * c * c
        }
        _ => {
            // d_k = P_k(1)² / ‖P_k‖², both normalized by the total mass.
            let sp: SpaceParams<f64> = catalog(id);
            let (a, b) = (sp.alpha, sp.beta);
            let k = k as f64;
            let ln_h = (a + b + 1.0) * 2f64.ln() - (2.0 * k + a + b + 1.0).ln() + ln_gamma(k + a + 1.0)
                + ln_gamma(k + b + 1.0)
                - ln_gamma(k + a + b + 1.0)
                - ln_gamma(k + 1.0);
            let ln_mass = (a + b + 1.0) * 2f64.ln() + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
                - ln_gamma(a + b + 2.0);
            let ln_p1 = ln_gamma(k + a + 1.0) - ln_gamma(k + 1.0) - ln_gamma(a + 1.0);
            (2.0 * ln_p1 - ln_h + ln_mass).exp()
        }
    }
}

#[test]
fn normalized_jacobi_matches_hypergeometric_sum() {
    for id in catalog_sample() {
        let idx = catalog::<f64>(id).jacobi();
        for k in 0..=12u64 {
            for i in 0..=40 {
                let x = -1.0 + 2.0 * f64::from(i) / 40.0;
                let oracle = q_hypergeometric(k, idx.alpha, idx.beta, x);
                assert!(
                    (idx.q(k, x) - oracle).abs() <= 1e-10,
                    "{id} k={k} x={x}: {} vs {oracle}",
                    idx.q(k, x)
                );
                let p = idx.p(k, x).unwrap();
                let p_oracle = pochhammer_over_factorial(idx.alpha, k) * oracle;
                assert!((p - p_oracle).abs() <= 1e-10 * idx.p_at_one(k), "{id} k={k} x={x}: {p} vs {p_oracle}");
            }
        }
    }
}

#[test]
fn harmonic_dimensions_match_closed_forms() {
    let mut ids = catalog_sample();
    ids.extend([SpaceId::new(Family::Sphere, 7).unwrap(), SpaceId::new(Family::ComplexProjective, 10).unwrap()]);
    for id in ids {
        let sp: SpaceParams<f64> = catalog(id);
        for k in 0..=40u64 {
            assert_relative_eq!(sp.harmonic_dim_real(k), d_closed_form(id, k), max_relative = 1e-10);
        }
    }
}

#[test]
fn spherical_functions_are_orthogonal() {
    for id in catalog_sample() {
        let sp: SpaceParams<f64> = catalog(id);
        let idx = sp.jacobi();
        let rule = gauss_jacobi(&idx, 40).unwrap();
        let mass = jacobi_mass(&idx);
        let tables: Vec<Vec<f64>> = rule.nodes.iter().map(|&x| idx.q_table(32, x)).collect();
        for j in 0..=32 {
            for k in 0..=32 {
                let got: f64 = rule.weights.iter().zip(&tables).map(|(w, q)| w * q[j] * q[k]).sum::<f64>() / mass;
                let expect = if j == k { 1.0 / d_closed_form(id, k as u64) } else { 0.0 };
                assert!((got - expect).abs() <= 1e-12, "{id} j={j} k={k}: {got} vs {expect}");
            }
        }
    }
}

#[test]
fn gauss_legendre_nodes_are_known() {
    let rule = gauss_jacobi(&JacobiIndex::new(0.0, 0.0).unwrap(), 3).unwrap();
    let r = (0.6f64).sqrt();
    for (x, e) in rule.nodes.iter().zip([-r, 0.0, r]) {
        assert!((x - e).abs() < 1e-15);
    }
    for (w, e) in rule.weights.iter().zip([5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0]) {
        assert!((w - e).abs() < 1e-14);
    }
}

#[test]
fn laplace_eigenvalues_follow_the_family_shift() {
    let eig = |f, m, k| catalog::<f64>(SpaceId::new(f, m).unwrap()).laplace_eigenvalue(k);
    assert_eq!(eig(Family::Sphere, 2, 3), 12.0);
    assert_eq!(eig(Family::RealProjective, 2, 2), 5.0);
    assert_eq!(eig(Family::ComplexProjective, 4, 1), 3.0);
    assert_eq!(eig(Family::CayleyPlane, 16, 1), 1.0 * (1.0 + 7.0 + 3.0 + 1.0));
}
