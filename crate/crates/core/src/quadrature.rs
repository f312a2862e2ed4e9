//! Gauss–Jacobi quadrature by the Golub–Welsch construction.
//!
//! Nodes come from the symmetric tridiagonal Jacobi matrix (implicit QL with
//! Wilkinson shifts), are polished by Newton steps on `Q_n`, and weights are
//! taken from the closed-form Christoffel expression.

use crate::error::{invalid, Error, Result};
use crate::jacobi::JacobiIndex;
use crate::scalar::{beta_fn, from_u64, lit, ln_gamma, pairwise_sum, Real};

/// Nodes and weights for `∫_{-1}^{1} g(x) (1 − x)^α (1 + x)^β dx`.
#[derive(Debug, Clone)]
pub struct QuadratureRule<F> {
    pub nodes: Vec<F>,
    pub weights: Vec<F>,
    pub order: usize,
}

impl<F: Real> QuadratureRule<F> {
    /// Sum of weights.
    pub fn mass(&self) -> F {
        pairwise_sum(&self.weights)
    }

    pub fn integrate(&self, mut g: impl FnMut(F) -> F) -> F {
        let terms: Vec<F> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * g(x))
            .collect();
        pairwise_sum(&terms)
    }
}

/// Total mass `2^{α+β+1} B(α+1, β+1)` of the Jacobi weight.
pub fn jacobi_mass<F: Real>(idx: &JacobiIndex<F>) -> F {
    let one = F::one();
    lit::<F>(2.0).powf(idx.alpha + idx.beta + one) * beta_fn(idx.alpha + one, idx.beta + one)
}

/// Gauss–Jacobi rule with `n` nodes, exact through degree `2n − 1`.
pub fn gauss_jacobi<F: Real>(idx: &JacobiIndex<F>, n: usize) -> Result<QuadratureRule<F>> {
    if n == 0 {
        return Err(invalid("n", "quadrature order must be at least 1"));
    }
    let (a, b) = (idx.alpha, idx.beta);
    let (one, two) = (F::one(), lit::<F>(2.0));
    let (mut diag, mut off) = jacobi_matrix(idx, n);

    let mut first = vec![F::zero(); n];
    first[0] = one;
    tridiagonal_ql(&mut diag, &mut off, &mut first).map_err(|_| Error::EigenSolve { order: n })?;

    let mut nodes = diag;
    nodes.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));

    let nn = n as u64;
    for x in nodes.iter_mut() {
        for _ in 0..4 {
            let (q, dq) = idx.q_with_derivative(nn, *x);
            if dq == F::zero() {
                break;
            }
            let step = q / dq;
            *x = (*x - step).max(-one).min(one);
            if step.abs() <= F::epsilon() * lit(4.0) {
                break;
            }
        }
    }

    let nf = from_u64::<F>(nn);
    let ln_g = ln_gamma(nf + a + one) + ln_gamma(nf + b + one)
        - ln_gamma(nf + a + b + one)
        - ln_gamma(nf + one)
        + (a + b + one) * two.ln();
    let ln_p1 = ln_gamma(nf + a + one) - ln_gamma(nf + one) - ln_gamma(a + one);
    let mut weights = Vec::with_capacity(n);
    for &x in &nodes {
        let (_, dq) = idx.q_with_derivative(nn, x);
        let w = (ln_g - two * ln_p1).exp() / ((one - x * x) * dq * dq);
        if !(w > F::zero()) || !w.is_finite() {
            return Err(Error::EigenSolve { order: n });
        }
        weights.push(w);
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        order: n,
    })
}

/// Three-term recurrence matrix for the monic Jacobi polynomials.
fn jacobi_matrix<F: Real>(idx: &JacobiIndex<F>, n: usize) -> (Vec<F>, Vec<F>) {
    let (a, b) = (idx.alpha, idx.beta);
    let (one, two, four) = (F::one(), lit::<F>(2.0), lit::<F>(4.0));
    let diag = (0..n)
        .map(|i| {
            let s = two * from_u64::<F>(i as u64) + a + b;
            if i == 0 {
                (b - a) / (a + b + two)
            } else {
                (b * b - a * a) / (s * (s + two))
            }
        })
        .collect();
    let mut off = vec![F::zero(); n];
    for i in 1..n {
        let fi = from_u64::<F>(i as u64);
        let s = two * fi + a + b;
        let v = if i == 1 {
            four * (one + a) * (one + b) / ((two + a + b) * (two + a + b) * (lit::<F>(3.0) + a + b))
        } else {
            four * fi * (fi + a) * (fi + b) * (fi + a + b) / (s * s * (s + one) * (s - one))
        };
        off[i - 1] = v.sqrt();
    }
    (diag, off)
}

/// Eigenvalues of a symmetric tridiagonal matrix in place (`d` diagonal,
/// `e[i]` couples `i` and `i + 1`), rotating `z` as the first row of the
/// eigenvector matrix.
fn tridiagonal_ql<F: Real>(d: &mut [F], e: &mut [F], z: &mut [F]) -> std::result::Result<(), ()> {
    let n = d.len();
    let (zero, one, two) = (F::zero(), F::one(), lit::<F>(2.0));
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= F::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(());
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(one);
            g = d[m] - d[l] + e[l] / (g + if g >= zero { r } else { -r });
            let (mut s, mut c, mut p) = (one, one, zero);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == zero {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = zero;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = zero;
        }
    }
    Ok(())
}

/// Golub–Welsch weights straight from the eigenvector components, used as an
/// internal cross-check of the closed-form weights.
#[cfg(test)]
fn golub_welsch_raw(idx: &JacobiIndex<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (mut diag, mut off) = jacobi_matrix(idx, n);
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    tridiagonal_ql(&mut diag, &mut off, &mut z).unwrap();
    let mass = jacobi_mass(idx);
    let mut pairs: Vec<(f64, f64)> = diag.into_iter().zip(z.iter().map(|v| mass * v * v)).collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    pairs.into_iter().unzip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{catalog, catalog_sample};
    use approx::assert_relative_eq;

    #[test]
    fn midpoint_rule() {
        let r = gauss_jacobi(&JacobiIndex::new(0.0_f64, 0.0).unwrap(), 1).unwrap();
        assert_relative_eq!(r.nodes[0], 0.0, epsilon = 1e-15);
        assert_relative_eq!(r.weights[0], 2.0, epsilon = 1e-14);
    }

    #[test]
    fn legendre_moments() {
        let r = gauss_jacobi(&JacobiIndex::new(0.0_f64, 0.0).unwrap(), 3).unwrap();
        assert!((r.integrate(|x| x.powi(4)) - 0.4).abs() < 1e-12);
        assert!((r.integrate(|x| x.powi(5))).abs() < 1e-14);
    }

    #[test]
    fn mass_matches_beta_function() {
        for id in catalog_sample() {
            let j = catalog::<f64>(id).jacobi();
            for n in [1usize, 5, 64, 300] {
                let r = gauss_jacobi(&j, n).unwrap();
                assert_relative_eq!(r.mass(), jacobi_mass(&j), max_relative = 1e-12);
                assert!(r.nodes.iter().all(|&x| x > -1.0 && x < 1.0));
                assert!(r.weights.iter().all(|&w| w > 0.0));
            }
        }
    }

    #[test]
    fn closed_form_weights_match_eigenvectors() {
        let j = JacobiIndex::new(1.0_f64, 0.0).unwrap();
        let (nodes, weights) = golub_welsch_raw(&j, 40);
        let r = gauss_jacobi(&j, 40).unwrap();
        for i in 0..40 {
            assert_relative_eq!(r.nodes[i], nodes[i], epsilon = 1e-13);
            assert_relative_eq!(r.weights[i], weights[i], max_relative = 1e-9);
        }
    }

    #[test]
    fn zero_order_rejected() {
        assert!(gauss_jacobi(&JacobiIndex::new(0.0_f64, 0.0).unwrap(), 0).is_err());
    }
}
