//! Scalar abstraction and the handful of special functions the toolkit needs.
//!
//! Every numerical routine is generic over [`Real`], which is satisfied by
//! `f32` and `f64`. Constants are injected through [`lit`].

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar usable throughout the crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Default + Debug + Display + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Sum
        + Default
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` literal into `F`.
#[inline]
pub fn lit<F: Real>(x: f64) -> F {
    F::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Converts an unsigned integer into `F`.
#[inline]
pub fn from_u64<F: Real>(n: u64) -> F {
    F::from_u64(n).expect("integer representable in scalar type")
}

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural logarithm of `|Γ(x)|`.
///
/// Uses the Lanczos approximation for `x ≥ 1/2` and the reflection formula
/// below that. Poles (non-positive integers) return `+∞`.
pub fn ln_gamma<F: Real>(x: F) -> F {
    let half = lit::<F>(0.5);
    if x < half {
        // Γ(x)Γ(1−x) = π / sin(πx)
        let s = (F::PI() * x).sin();
        if s == F::zero() {
            return F::infinity();
        }
        return F::PI().ln() - s.abs().ln() - ln_gamma(F::one() - x);
    }
    let x = x - F::one();
    let mut acc = lit::<F>(LANCZOS_COEFFS[0]);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc = acc + lit::<F>(c) / (x + from_u64(i as u64));
    }
    let t = x + lit::<F>(LANCZOS_G) + half;
    lit::<F>(0.5 * (2.0 * std::f64::consts::PI).ln()) + (x + half) * t.ln() - t + acc.ln()
}

/// `Γ(x)` for positive `x`.
pub fn gamma<F: Real>(x: F) -> F {
    ln_gamma(x).exp()
}

/// Generalized binomial coefficient `Γ(a+1) / (Γ(b+1) Γ(a−b+1))`.
///
/// Follows the Gamma-function definition everywhere, so `binom(a, 0) = 1`.
/// A negative integer lower index gives zero.
pub fn binom_real<F: Real>(a: F, b: F) -> F {
    if b < F::zero() && b == b.round() {
        return F::zero();
    }
    if b == F::zero() {
        return F::one();
    }
    let diff = a - b;
    if diff < F::zero() && diff == diff.round() && a >= F::zero() {
        return F::zero();
    }
    // Sign bookkeeping is only needed for negative Gamma arguments, which the
    // toolkit never produces for catalog parameters; magnitude via logs.
    (ln_gamma(a + F::one()) - ln_gamma(b + F::one()) - ln_gamma(diff + F::one())).exp()
}

/// Exact integer binomial coefficient, zero when `k > n`.
pub fn binom_u64(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    u64::try_from(acc).expect("binomial coefficient fits in u64")
}

/// Beta function `B(a, b)` for positive arguments.
pub fn beta_fn<F: Real>(a: F, b: F) -> F {
    (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
}

/// Pairwise (cascade) summation; deterministic and accurate to O(log n) ulps.
pub fn pairwise_sum<F: Real>(values: &[F]) -> F {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        return values.iter().fold(F::zero(), |acc, &v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Ordinary least-squares slope and intercept of `y` on `x`.
pub fn linear_fit<F: Real>(x: &[F], y: &[F]) -> Option<(F, F)> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let n = from_u64::<F>(x.len() as u64);
    let mx = x.iter().copied().sum::<F>() / n;
    let my = y.iter().copied().sum::<F>() / n;
    let (mut sxy, mut sxx) = (F::zero(), F::zero());
    for (&a, &b) in x.iter().zip(y) {
        sxy = sxy + (a - mx) * (b - my);
        sxx = sxx + (a - mx) * (a - mx);
    }
    if sxx == F::zero() {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Slope of `ln y` against `ln x`; points with non-positive entries are skipped.
pub fn log_log_slope<F: Real>(x: &[F], y: &[F]) -> Option<F> {
    let (lx, ly): (Vec<F>, Vec<F>) = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > F::zero() && **b > F::zero())
        .map(|(a, b)| (a.ln(), b.ln()))
        .unzip();
    linear_fit(&lx, &ly).map(|(s, _)| s)
}

/// `n` geometrically spaced points from `lo` to `hi` inclusive.
pub fn geomspace<F: Real>(lo: F, hi: F, n: usize) -> Vec<F> {
    match n {
        0 => Vec::new(),
        1 => vec![hi],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            let step = (b - a) / from_u64::<F>((n - 1) as u64);
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        hi
                    } else {
                        (a + step * from_u64::<F>(i as u64)).exp()
                    }
                })
                .collect()
        }
    }
}

/// Median of a slice (average of the two central values for even length).
pub fn median<F: Real>(values: &[F]) -> Option<F> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / lit(2.0)
    })
}
