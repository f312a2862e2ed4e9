//! Zonal Mercer kernels `K(x, y) = Σ_k b_k d_k Q_k(cos d(x, y))`.
//!
//! The integral operator has eigenvalue `b_k` with multiplicity `d_k`, so
//! everything here works on degree blocks and only expands multiplicities
//! when explicitly asked.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::scalar::{from_u64, lit, ln_gamma, median, pairwise_sum, Real};
use crate::space::{catalog, Family, SpaceId, SpaceParams};
use crate::zonal::ZonalFunction;

/// A decade tail ratio at or above this is treated as divergent. A plain
/// harmonic tail `Σ 1/k` sits just under 1 at desk truncations.
pub const TAIL_RATIO_MAX: f64 = 0.99;

/// Slope tolerance for decay verdicts.
pub const SLOPE_TOLERANCE: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct MercerKernel<F> {
    pub space: SpaceParams<F>,
    pub coeffs: Vec<F>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Validation<F> {
    /// First degree with a negative coefficient.
    pub positivity: Option<usize>,
    /// First degree `k` with `b_{k+1} > b_k`.
    pub monotonicity: Option<usize>,
    pub summable: bool,
    pub tail_ratio: Option<F>,
}

impl<F> Validation<F> {
    pub fn is_valid(&self) -> bool {
        self.positivity.is_none() && self.monotonicity.is_none() && self.summable
    }
}

/// Ratio of the last decade's sum of `terms` to the previous decade's
/// (dyadic blocks below 100 terms). `None` when the truncation is too short
/// to say anything.
pub fn tail_ratio<F: Real>(terms: &[F]) -> Option<F> {
    let k = terms.len().checked_sub(1)?;
    let factor = if k >= 100 { 10 } else { 2 };
    let (mid, lo) = (k / factor, k / (factor * factor));
    if mid == lo || k < 4 {
        return None;
    }
    let last = pairwise_sum(&terms[mid + 1..=k]);
    let prev = pairwise_sum(&terms[lo + 1..=mid]);
    if prev == F::zero() {
        return Some(if last == F::zero() { F::zero() } else { F::infinity() });
    }
    Some(last / prev)
}

fn converges<F: Real>(ratio: Option<F>) -> bool {
    ratio.map_or(true, |r| r < lit(TAIL_RATIO_MAX))
}

impl<F: Real> MercerKernel<F> {
    pub fn new(space: SpaceParams<F>, coeffs: Vec<F>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("coeffs", "need at least b_0"));
        }
        if let Some(k) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(invalid("coeffs", format!("non-finite coefficient at degree {k}")));
        }
        Ok(Self {
            space,
            coeffs,
            notes: Vec::new(),
        })
    }

    pub fn kmax(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Terms `d_k b_k` whose sum is the trace.
    pub fn trace_terms(&self) -> Vec<F> {
        self.space
            .dims(self.kmax())
            .iter()
            .zip(&self.coeffs)
            .map(|(&d, &b)| d * b)
            .collect()
    }

    pub fn trace(&self) -> F {
        pairwise_sum(&self.trace_terms())
    }

    pub fn validate(&self) -> Validation<F> {
        let positivity = self.coeffs.iter().position(|&b| b < F::zero());
        let slack = lit::<F>(16.0) * F::epsilon();
        let monotonicity = self.coeffs.windows(2).position(|w| w[1] > w[0] + slack * w[0].abs());
        let tail = tail_ratio(&self.trace_terms());
        Validation {
            positivity,
            monotonicity,
            summable: converges(tail),
            tail_ratio: tail,
        }
    }

    fn require_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_valid() {
            return Ok(());
        }
        let mut why = Vec::new();
        if let Some(k) = v.positivity {
            why.push(format!("negative coefficient at degree {k}"));
        }
        if let Some(k) = v.monotonicity {
            why.push(format!("coefficients increase after degree {k}"));
        }
        if !v.summable {
            why.push("trace tail does not decay".to_string());
        }
        Err(Error::InvalidKernel(why.join("; ")))
    }

    /// The slice `K^y` as a zonal function, `h_k = b_k d_k`.
    pub fn slice(&self) -> ZonalFunction<F> {
        ZonalFunction {
            space: self.space,
            coeffs: self.trace_terms(),
        }
    }

    /// Kernel of the operator square root, coefficients `√b_k`.
    pub fn sqrt_kernel(&self) -> Result<Self> {
        if let Some(k) = self.coeffs.iter().position(|&b| b < F::zero()) {
            return Err(Error::InvalidKernel(format!("negative coefficient at degree {k}")));
        }
        Ok(Self {
            space: self.space,
            coeffs: self.coeffs.iter().map(|b| b.sqrt()).collect(),
            notes: self.notes.clone(),
        })
    }

    /// Coefficients `λ_k^r b_k` of `B^{2r,0} K` with the trace diagnostic.
    pub fn fractional_kernel(&self, r: F) -> Result<FractionalKernel<F>> {
        if !(r > F::zero()) || !r.is_finite() {
            return Err(invalid("r", "order must be positive"));
        }
        let coeffs: Vec<F> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &b)| self.space.laplace_eigenvalue(k as u64).powf(r) * b)
            .collect();
        let terms: Vec<F> = self
            .space
            .dims(self.kmax())
            .iter()
            .zip(&coeffs)
            .map(|(&d, &c)| d * c)
            .collect();
        let tail = tail_ratio(&terms);
        Ok(FractionalKernel {
            trace: pairwise_sum(&terms),
            coeffs,
            tail_ratio: tail,
            trace_converges: converges(tail),
        })
    }

    /// Degree blocks of the eigenvalue sequence.
    pub fn blocks(&self) -> Vec<EigenBlock<F>> {
        let cum = self.space.cumulative_dims_real(self.kmax());
        let half = lit::<F>(0.5);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &b)| {
                let start = if k == 0 { F::one() } else { cum[k - 1] + F::one() };
                EigenBlock {
                    degree: k,
                    value: b,
                    start,
                    end: cum[k],
                    midpoint: half * (start + cum[k]),
                }
            })
            .collect()
    }

    /// The first `n` eigenvalues with multiplicities expanded.
    pub fn eigen_sequence(&self, n: usize) -> Result<EigenSequence<F>> {
        let total = self.space.cumulative_dims_real(self.kmax())[self.kmax()];
        if from_u64::<F>(n as u64) > total {
            return Err(Error::OutOfRange {
                index: n as u64,
                available: total.to_u64().unwrap_or(u64::MAX),
            });
        }
        let mut values = Vec::with_capacity(n);
        'outer: for (k, &b) in self.coeffs.iter().enumerate() {
            let mult = self.space.harmonic_dim(k as u64);
            for _ in 0..mult {
                if values.len() == n {
                    break 'outer;
                }
                values.push(b);
            }
        }
        Ok(EigenSequence { values })
    }

    /// `λ_n` (one-based).
    pub fn eigenvalue(&self, n: u64) -> Result<F> {
        let nf = from_u64::<F>(n);
        let cum = self.space.cumulative_dims_real(self.kmax());
        if n == 0 || nf > cum[self.kmax()] {
            return Err(Error::OutOfRange {
                index: n,
                available: cum[self.kmax()].to_u64().unwrap_or(u64::MAX),
            });
        }
        let k = cum.partition_point(|&d| d < nf);
        Ok(self.coeffs[k])
    }

    /// Kolmogorov n-width of the unit ball image, `√λ_{n+1}`.
    pub fn n_width(&self, n: u64) -> Result<F> {
        Ok(self.eigenvalue(n + 1)?.sqrt())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FractionalKernel<F> {
    pub coeffs: Vec<F>,
    pub trace: F,
    pub tail_ratio: Option<F>,
    pub trace_converges: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EigenBlock<F> {
    pub degree: usize,
    pub value: F,
    /// First and last one-based eigenvalue index of the block.
    pub start: F,
    pub end: F,
    pub midpoint: F,
}

/// Nonincreasing eigenvalues with multiplicity, index origin 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenSequence<F> {
    pub values: Vec<F>,
}

impl<F: Real> EigenSequence<F> {
    /// `λ_n`, one-based.
    pub fn get(&self, n: usize) -> Option<F> {
        n.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HolderEstimate<F> {
    /// Slope clamped to `(0, 2]`; `None` for a degenerate kernel.
    pub beta: Option<F>,
    pub raw_slope: Option<F>,
    pub t_grid: Vec<F>,
    pub deviation: Vec<F>,
}

/// `D(t) = sup_u |Σ_k b_k d_k (Q_k(cos t) − 1) Q_k(u)|` over `points`
/// Chebyshev–Lobatto nodes.
pub fn holder_deviation<F: Real>(kernel: &MercerKernel<F>, t: F, points: usize) -> F {
    let idx = kernel.space.jacobi();
    let defect = idx.defect_table(kernel.kmax(), t);
    let coeffs: Vec<F> = kernel
        .trace_terms()
        .iter()
        .zip(&defect)
        .map(|(&h, &d)| -h * d)
        .collect();
    let n = points.max(2);
    let step = F::PI() / from_u64((n - 1) as u64);
    (0..n)
        .map(|j| idx.clenshaw(&coeffs, (step * from_u64(j as u64)).cos()).abs())
        .fold(F::zero(), F::max)
}

pub fn holder_exponent<F: Real>(kernel: &MercerKernel<F>, t_grid: &[F]) -> Result<HolderEstimate<F>> {
    holder_exponent_with(kernel, t_grid, 2048)
}

pub fn holder_exponent_with<F: Real>(
    kernel: &MercerKernel<F>,
    t_grid: &[F],
    points: usize,
) -> Result<HolderEstimate<F>> {
    kernel.require_valid()?;
    if t_grid.len() < 8 {
        return Err(invalid("t_grid", "need at least 8 points"));
    }
    if t_grid.iter().any(|&t| !(t > F::zero() && t < F::PI())) {
        return Err(invalid("t_grid", "entries must lie in (0, π)"));
    }
    let deviation: Vec<F> = t_grid
        .par_iter()
        .map(|&t| holder_deviation(kernel, t, points))
        .collect();
    let degenerate = deviation.iter().all(|&d| d <= F::zero());
    let raw = if degenerate {
        None
    } else {
        crate::scalar::log_log_slope(t_grid, &deviation)
    };
    let beta = raw.map(|s| s.max(F::epsilon()).min(lit(2.0)));
    Ok(HolderEstimate {
        beta,
        raw_slope: raw,
        t_grid: t_grid.to_vec(),
        deviation,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayReport<F> {
    pub fitted_slope: F,
    pub target_slope: F,
    /// `max λ_n n^{−target}` over blocks in the last decade.
    pub sup_statistic: F,
    pub window_median: F,
    pub verdict: bool,
    /// Eigenvalue index range `[n_lo, n_hi]` of the fit.
    pub fit_window: (F, F),
    pub tolerance: F,
    pub diagnostics: Vec<String>,
}

/// Log–log fit of block values against block midpoints restricted to
/// `[lo, hi]`.
pub fn block_slope<F: Real>(blocks: &[EigenBlock<F>], lo: F, hi: F) -> Option<F> {
    let (x, y): (Vec<F>, Vec<F>) = blocks
        .iter()
        .filter(|b| b.degree > 0 && b.midpoint >= lo && b.midpoint <= hi && b.value > F::zero())
        .map(|b| (b.midpoint, b.value))
        .unzip();
    crate::scalar::log_log_slope(&x, &y)
}

/// Decay verdict against `λ_n = O(n^{target})` (`target < 0`).
pub fn decay_verdict<F: Real>(kernel: &MercerKernel<F>, target: F) -> Result<DecayReport<F>> {
    kernel.require_valid()?;
    let blocks = kernel.blocks();
    let total = blocks.last().map_or(F::one(), |b| b.end);
    let decades = total.log10();
    let two = lit::<F>(2.0);
    if decades < two {
        return Err(invalid(
            "kernel",
            format!("only {decades:.2} decades of eigenvalues; need at least 2"),
        ));
    }
    let ten = lit::<F>(10.0);
    let lo = ten.powf((decades - two) / two);
    let hi = ten.powf((decades + two) / two);
    let slope = block_slope(&blocks, lo, hi)
        .ok_or_else(|| Error::Numerical("too few blocks in the fit window".into()))?;
    let stat = |b: &EigenBlock<F>| b.value * b.end.powf(-target);
    let window: Vec<F> = blocks
        .iter()
        .filter(|b| b.degree > 0 && b.midpoint >= lo && b.midpoint <= hi)
        .map(stat)
        .collect();
    let window_median = median(&window).unwrap_or(F::nan());
    let sup_statistic = blocks
        .iter()
        .filter(|b| b.degree > 0 && b.end > total / ten)
        .map(stat)
        .fold(F::zero(), F::max);
    let tol = lit::<F>(SLOPE_TOLERANCE);
    let slope_ok = slope <= target + tol;
    let sup_ok = sup_statistic <= two * window_median;
    let mut diagnostics = Vec::new();
    if !slope_ok {
        diagnostics.push(format!("fitted slope {slope} exceeds target {target} + {tol}"));
    }
    if !sup_ok {
        diagnostics.push(format!(
            "sup statistic {sup_statistic} exceeds twice the window median {window_median}"
        ));
    }
    Ok(DecayReport {
        fitted_slope: slope,
        target_slope: target,
        sup_statistic,
        window_median,
        verdict: slope_ok && sup_ok,
        fit_window: (lo, hi),
        tolerance: tol,
        diagnostics,
    })
}

/// Verdict for the rate `n^{−1−β/m}` of a `(B, β)`-Hölder kernel.
pub fn decay_verdict_holder<F: Real>(kernel: &MercerKernel<F>, beta: F) -> Result<DecayReport<F>> {
    if !(beta > F::zero() && beta <= lit(2.0)) {
        return Err(invalid("beta", "must lie in (0, 2]"));
    }
    let m = from_u64::<F>(u64::from(kernel.space.m));
    decay_verdict(kernel, -(F::one() + beta / m))
}

/// Verdict for the rate `n^{−1−2r/m}` when `B^{2r,0} K` is trace-class.
pub fn decay_verdict_sobolev<F: Real>(kernel: &MercerKernel<F>, r: F) -> Result<DecayReport<F>> {
    if !(r > F::zero()) || !r.is_finite() {
        return Err(invalid("r", "must be positive"));
    }
    let frac = kernel.fractional_kernel(r)?;
    if !frac.trace_converges {
        return Err(Error::Precondition(format!(
            "trace of the fractional kernel does not converge (tail ratio {:?})",
            frac.tail_ratio.and_then(|v| v.to_f64())
        )));
    }
    let m = from_u64::<F>(u64::from(kernel.space.m));
    decay_verdict(kernel, -(F::one() + lit::<F>(2.0) * r / m))
}

/// Exponent `m(1 + ε) + 2r − 1` of the example kernel.
pub fn example_exponent(m: u32, epsilon: f64, r: u32) -> f64 {
    f64::from(m) * (1.0 + epsilon) + 2.0 * f64::from(r) - 1.0
}

/// Degree coefficients of `1 + Σ_n c_n n^{−e} P_n^{(α,β)}(cos t)`, built from
/// the Gamma-ratio form of `c_n`.
pub fn example_kernel<F: Real>(id: SpaceId, epsilon: F, r: u32, kmax: usize) -> Result<MercerKernel<F>> {
    let m = from_u64::<F>(u64::from(id.m));
    if !(m * epsilon > F::one()) {
        return Err(invalid("epsilon", "need m·ε > 1"));
    }
    if r == 0 {
        return Err(invalid("r", "must be a positive integer"));
    }
    let space = catalog::<F>(id);
    let (a, b) = (space.alpha, space.beta);
    let one = F::one();
    let e = m * (one + epsilon) + from_u64::<F>(2 * u64::from(r)) - one;
    let mut coeffs = vec![one];
    for n in 1..=kmax as u64 {
        let nf = from_u64::<F>(n);
        let ln_c = ln_gamma(b + one) + (lit::<F>(2.0) * nf + a + b + one).ln() + ln_gamma(nf + a + b + one)
            - ln_gamma(a + b + lit::<F>(2.0))
            - ln_gamma(nf + b + one);
        let ln_p1 = ln_gamma(nf + a + one) - ln_gamma(nf + one) - ln_gamma(a + one);
        coeffs.push((ln_c + ln_p1 - e * nf.ln() - space.ln_harmonic_dim(n)).exp());
    }
    let mut k = MercerKernel::new(space, coeffs)?;
    if id.family == Family::Sphere {
        k.notes.push("sphere: decay results are stated for projective spaces; formulas applied uniformly".into());
    }
    Ok(k)
}

/// Log–log slope of `κ_n = √λ_{n+1}` against `n + 1` over block midpoints of
/// degrees `[k_lo, k_hi]`.
pub fn n_width_slope<F: Real>(kernel: &MercerKernel<F>, k_lo: usize, k_hi: usize) -> Option<F> {
    let blocks = kernel.blocks();
    let (x, y): (Vec<F>, Vec<F>) = blocks
        .iter()
        .filter(|b| b.degree >= k_lo && b.degree <= k_hi && b.value > F::zero())
        .map(|b| (b.midpoint, b.value.sqrt()))
        .unzip();
    crate::scalar::log_log_slope(&x, &y)
}

/// Eigenvalue slope over the blocks of degrees `[k_lo, k_hi]`.
pub fn eigen_slope<F: Real>(kernel: &MercerKernel<F>, k_lo: usize, k_hi: usize) -> Option<F> {
    let blocks = kernel.blocks();
    let lo = blocks.get(k_lo)?.midpoint;
    let hi = blocks.get(k_hi)?.midpoint;
    block_slope(&blocks, lo, hi)
}
