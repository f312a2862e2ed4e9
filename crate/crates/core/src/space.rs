//! Catalog of compact two-point homogeneous spaces.
//!
//! Each space is described by its dimension `m` and the quadruple
//! `(σ, ρ, α, β)` with `α = (σ + ρ − 1)/2 = (m − 2)/2` and `β = (ρ − 1)/2`.
//! The Laplace–Beltrami eigenvalues are `k(k + α + β + 1)` and the degree-`k`
//! eigenspace has dimension `d_k`, normalized so that the addition formula
//! reads `Σ_j Y_{k,j}(x) Y_{k,j}(y) = d_k Q_k(cos d(x, y))`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobi::JacobiIndex;
use crate::scalar::{from_u64, lit, ln_gamma, Real};

/// The five families of compact two-point homogeneous spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Sphere,
    RealProjective,
    ComplexProjective,
    QuaternionProjective,
    CayleyPlane,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Sphere,
        Family::RealProjective,
        Family::ComplexProjective,
        Family::QuaternionProjective,
        Family::CayleyPlane,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Sphere => "sphere",
            Family::RealProjective => "real-projective",
            Family::ComplexProjective => "complex-projective",
            Family::QuaternionProjective => "quaternion-projective",
            Family::CayleyPlane => "cayley-plane",
        }
    }

    fn admissible(self) -> &'static str {
        match self {
            Family::Sphere => "m >= 1",
            Family::RealProjective => "m >= 2",
            Family::ComplexProjective => "m in {4, 6, 8, ...}",
            Family::QuaternionProjective => "m in {8, 12, 16, ...}",
            Family::CayleyPlane => "m = 16",
        }
    }

    fn admits(self, m: u32) -> bool {
        match self {
            Family::Sphere => m >= 1,
            Family::RealProjective => m >= 2,
            Family::ComplexProjective => m >= 4 && m % 2 == 0,
            Family::QuaternionProjective => m >= 8 && m % 4 == 0,
            Family::CayleyPlane => m == 16,
        }
    }

    /// `(σ, ρ)` as functions of `m`.
    fn sigma_rho(self, m: u32) -> (i64, i64) {
        let m = i64::from(m);
        match self {
            Family::Sphere => (0, m - 1),
            Family::RealProjective => (m - 1, 0),
            Family::ComplexProjective => (m - 2, 1),
            Family::QuaternionProjective => (m - 4, 3),
            Family::CayleyPlane => (8, 7),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Ok(match key.as_str() {
            "sphere" | "s" => Family::Sphere,
            "real-projective" | "rp" | "real" => Family::RealProjective,
            "complex-projective" | "cp" | "complex" => Family::ComplexProjective,
            "quaternion-projective" | "hp" | "quaternion" | "quaternionic-projective" => {
                Family::QuaternionProjective
            }
            "cayley-plane" | "cayley" | "octonion-projective" | "op" => Family::CayleyPlane,
            _ => return Err(Error::UnknownFamily(s.to_string())),
        })
    }
}

/// A validated (family, dimension) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceId {
    pub family: Family,
    pub m: u32,
}

impl SpaceId {
    pub fn new(family: Family, m: u32) -> Result<Self> {
        if !family.admits(m) {
            return Err(Error::InadmissibleDimension {
                family: family.name().to_string(),
                m,
                admissible: family.admissible(),
            });
        }
        Ok(Self { family, m })
    }

    pub fn sphere(m: u32) -> Result<Self> {
        Self::new(Family::Sphere, m)
    }
}

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(m={})", self.family, self.m)
    }
}

/// Jacobi-analysis parameters of a catalog space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceParams<F> {
    pub id: SpaceId,
    pub m: u32,
    pub sigma: F,
    pub rho: F,
    pub alpha: F,
    pub beta: F,
}

/// Looks up `(σ, ρ, α, β)` for a space.
pub fn catalog<F: Real>(id: SpaceId) -> SpaceParams<F> {
    let (sigma, rho) = id.family.sigma_rho(id.m);
    // α and β are half-integers; build them from exact integer numerators.
    let alpha = lit::<F>((sigma + rho - 1) as f64) / lit(2.0);
    let beta = lit::<F>((rho - 1) as f64) / lit(2.0);
    SpaceParams {
        id,
        m: id.m,
        sigma: lit(sigma as f64),
        rho: lit(rho as f64),
        alpha,
        beta,
    }
}

impl<F: Real> SpaceParams<F> {
    /// Validates the id and builds the parameters.
    pub fn new(family: Family, m: u32) -> Result<Self> {
        Ok(catalog(SpaceId::new(family, m)?))
    }

    pub fn family(&self) -> Family {
        self.id.family
    }

    pub fn jacobi(&self) -> JacobiIndex<F> {
        JacobiIndex::new_unchecked(self.alpha, self.beta)
    }

    /// `α + β + 1`.
    pub fn shift(&self) -> F {
        self.alpha + self.beta + F::one()
    }

    /// Laplace–Beltrami eigenvalue `λ_k = k(k + α + β + 1)`.
    pub fn laplace_eigenvalue(&self, k: u64) -> F {
        let kf = from_u64::<F>(k);
        kf * (kf + self.shift())
    }

    /// `ln d_k`, accumulated through log-Gamma terms.
    pub fn ln_harmonic_dim(&self, k: u64) -> F {
        if k == 0 {
            return F::zero();
        }
        let (a, b, s) = (self.alpha, self.beta, self.shift());
        let kf = from_u64::<F>(k);
        (lit::<F>(2.0) * kf + s).ln() + ln_gamma(b + F::one()) + ln_gamma(kf + s)
            + ln_gamma(kf + a + F::one())
            - ln_gamma(s + F::one())
            - ln_gamma(a + F::one())
            - ln_gamma(kf + F::one())
            - ln_gamma(kf + b + F::one())
    }

    /// `d_k` as a real number, snapped to the integer while the log-Gamma
    /// route is accurate enough to identify it.
    pub fn harmonic_dim_real(&self, k: u64) -> F {
        if k == 0 {
            return F::one();
        }
        let d = self.ln_harmonic_dim(k).exp();
        if d < lit::<F>(0.01) / F::epsilon() {
            d.round()
        } else {
            d
        }
    }

    /// `d_k` rounded to the nearest integer (saturating at `u64::MAX`).
    pub fn harmonic_dim(&self, k: u64) -> u64 {
        let d = self.harmonic_dim_real(k).round();
        d.to_u64().unwrap_or(u64::MAX).max(1)
    }

    /// `D_n = Σ_{k ≤ n} d_k`.
    pub fn cumulative_dim(&self, n: u64) -> u64 {
        (0..=n).fold(0u64, |acc, k| acc.saturating_add(self.harmonic_dim(k)))
    }

    /// `d_0, …, d_K` as reals.
    pub fn dims(&self, kmax: usize) -> Vec<F> {
        (0..=kmax as u64).map(|k| self.harmonic_dim_real(k)).collect()
    }

    /// `λ_0, …, λ_K`.
    pub fn eigenvalues(&self, kmax: usize) -> Vec<F> {
        (0..=kmax as u64).map(|k| self.laplace_eigenvalue(k)).collect()
    }

    /// Cumulative dimensions `D_0, …, D_K` as reals; these overflow `u64`
    /// quickly in high dimension.
    pub fn cumulative_dims_real(&self, kmax: usize) -> Vec<F> {
        let mut acc = F::zero();
        (0..=kmax as u64)
            .map(|k| {
                acc = acc + self.harmonic_dim_real(k).round();
                acc
            })
            .collect()
    }

    /// Cumulative dimensions `D_0, …, D_K` (saturating).
    pub fn cumulative_dims(&self, kmax: usize) -> Vec<u64> {
        let mut acc = 0u64;
        (0..=kmax as u64)
            .map(|k| {
                acc = acc.saturating_add(self.harmonic_dim(k));
                acc
            })
            .collect()
    }
}

/// A representative sample of catalog spaces covering all five families.
pub fn catalog_sample() -> Vec<SpaceId> {
    use Family::*;
    [
        (Sphere, 2),
        (Sphere, 3),
        (Sphere, 4),
        (RealProjective, 2),
        (RealProjective, 3),
        (RealProjective, 4),
        (ComplexProjective, 4),
        (ComplexProjective, 6),
        (QuaternionProjective, 8),
        (QuaternionProjective, 12),
        (CayleyPlane, 16),
    ]
    .into_iter()
    .map(|(f, m)| SpaceId::new(f, m).expect("sample ids are admissible"))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(f: Family, m: u32) -> SpaceParams<f64> {
        SpaceParams::new(f, m).unwrap()
    }

    #[test]
    fn catalog_examples() {
        let cp = params(Family::ComplexProjective, 4);
        assert_eq!((cp.sigma, cp.rho, cp.alpha, cp.beta), (2.0, 1.0, 1.0, 0.0));
        let cay = params(Family::CayleyPlane, 16);
        assert_eq!((cay.sigma, cay.rho, cay.alpha, cay.beta), (8.0, 7.0, 7.0, 3.0));
        let rp = params(Family::RealProjective, 3);
        assert_eq!((rp.sigma, rp.rho, rp.alpha, rp.beta), (2.0, 0.0, 0.5, -0.5));
        let s2 = params(Family::Sphere, 2);
        assert_eq!((s2.alpha, s2.beta), (0.0, 0.0));
    }

    #[test]
    fn parameter_identities_hold_exactly() {
        for fam in Family::ALL {
            for m in 1..=24 {
                let Ok(id) = SpaceId::new(fam, m) else { continue };
                let p: SpaceParams<f64> = catalog(id);
                assert_eq!(p.alpha, (p.sigma + p.rho - 1.0) / 2.0);
                assert_eq!(p.alpha, (f64::from(m) - 2.0) / 2.0);
                assert_eq!(p.beta, (p.rho - 1.0) / 2.0);
                assert!(p.alpha >= p.beta && p.beta >= -0.5, "{id}");
            }
        }
    }

    #[test]
    fn rejects_inadmissible_dimensions() {
        for (f, m) in [
            (Family::Sphere, 0),
            (Family::RealProjective, 1),
            (Family::ComplexProjective, 5),
            (Family::ComplexProjective, 2),
            (Family::QuaternionProjective, 10),
            (Family::CayleyPlane, 8),
        ] {
            let err = SpaceId::new(f, m).unwrap_err();
            assert!(matches!(err, Error::InadmissibleDimension { .. }));
            assert!(err.to_string().contains("admissible"));
        }
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("torus".parse::<Family>().is_err());
    }

    #[test]
    fn eigenvalues() {
        let s2 = params(Family::Sphere, 2);
        assert_eq!(s2.laplace_eigenvalue(0), 0.0);
        assert_eq!(s2.laplace_eigenvalue(3), 12.0);
        let cp = params(Family::ComplexProjective, 4);
        assert_eq!(cp.laplace_eigenvalue(2), 8.0);
        let lam = cp.eigenvalues(50);
        assert!(lam.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn dims_small_cases() {
        let s2 = params(Family::Sphere, 2);
        for k in 0..=1000 {
            assert_eq!(s2.harmonic_dim(k), 2 * k + 1);
        }
        let rp2 = params(Family::RealProjective, 2);
        for k in 0..=200 {
            assert_eq!(rp2.harmonic_dim(k), 4 * k + 1);
        }
        assert_eq!(s2.cumulative_dim(0), 1);
        assert_eq!(s2.cumulative_dim(3), 16);
        let cp = params(Family::ComplexProjective, 4);
        let brute: u64 = (0..=2).map(|k| cp.harmonic_dim(k)).sum();
        assert_eq!(cp.cumulative_dim(2), brute);
        // S^1: d_k = 2 for k ≥ 1
        let s1 = params(Family::Sphere, 1);
        assert_eq!(s1.harmonic_dim(0), 1);
        assert!((1..50).all(|k| s1.harmonic_dim(k) == 2));
    }

    fn growth_slopes(p: &SpaceParams<f64>, lo: usize, hi: usize) -> (f64, f64) {
        let ks: Vec<f64> = (lo..=hi).map(|k| k as f64).collect();
        let d: Vec<f64> = (lo..=hi).map(|k| p.harmonic_dim_real(k as u64)).collect();
        let cum = p.cumulative_dims_real(hi);
        assert!(cum.windows(2).all(|w| w[1] > w[0]));
        let dn: Vec<f64> = (lo..=hi).map(|k| cum[k]).collect();
        (
            crate::scalar::log_log_slope(&ks, &d).unwrap(),
            crate::scalar::log_log_slope(&ks, &dn).unwrap(),
        )
    }

    #[test]
    fn dims_growth_rates_desk_window() {
        // lower-order terms bias the [64, 512] fit by roughly m²/100, so the
        // desk window is only informative in low dimension
        for id in catalog_sample().into_iter().filter(|id| id.m <= 4) {
            let p: SpaceParams<f64> = catalog(id);
            let (sd, sc) = growth_slopes(&p, 64, 512);
            assert!((sd - (f64::from(p.m) - 1.0)).abs() <= 0.05, "{id}: {sd}");
            assert!((sc - f64::from(p.m)).abs() <= 0.05, "{id}: {sc}");
        }
    }

    #[test]
    fn dims_growth_rates_asymptotic_window() {
        for id in catalog_sample() {
            let p: SpaceParams<f64> = catalog(id);
            let (sd, sc) = growth_slopes(&p, 8192, 65536);
            assert!((sd - (f64::from(p.m) - 1.0)).abs() <= 0.05, "{id}: {sd}");
            assert!((sc - f64::from(p.m)).abs() <= 0.05, "{id}: {sc}");
        }
    }
}
