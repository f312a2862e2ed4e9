//! K-functionals, moduli of smoothness and the weighted sums that compare
//! them with `‖S_{r,t} f − f‖_p`.
//!
//! At `p = 2` every quantity is evaluated spectrally (Parseval); other
//! exponents go through Gauss–Jacobi quadrature of the zonal profile.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::multiplier::{eta, DefectEngine};
use crate::scalar::{from_u64, geomspace, lit, pairwise_sum, Real};
use crate::zonal::{golden_max, LpNormer, ZonalFunction};

fn is_two<F: Real>(p: F) -> bool {
    p == lit(2.0)
}

fn check_order<F: Real>(r: F) -> Result<()> {
    if !(r > F::zero()) || !r.is_finite() {
        return Err(invalid("r", "order must be a positive real"));
    }
    Ok(())
}

/// Norm of the multiplier image `Σ μ_k h_k Q_k`, spectrally at `p = 2`.
fn image_norm<F: Real>(
    f: &ZonalFunction<F>,
    mu: &[F],
    p: F,
    normer: Option<&LpNormer<F>>,
) -> Result<F> {
    if is_two(p) {
        let e = f.energies();
        let terms: Vec<F> = e.values.iter().zip(mu).map(|(&s, &m)| m * m * s).collect();
        return Ok(pairwise_sum(&terms).sqrt());
    }
    let g = ZonalFunction {
        space: f.space,
        coeffs: f.coeffs.iter().zip(mu).map(|(&h, &m)| h * m).collect(),
    };
    match normer {
        Some(n) => n.norm(&g, p),
        None => g.lp_norm(p),
    }
}

/// Grid settings for the supremum in the modulus of smoothness.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModulusOptions {
    pub points: usize,
    pub refine: bool,
    /// Smallest grid point as a fraction of `t`.
    pub lower_ratio: f64,
}

impl Default for ModulusOptions {
    fn default() -> Self {
        Self {
            points: 64,
            refine: true,
            lower_ratio: 1e-3,
        }
    }
}

/// `ω_r(f, t)_p = sup_{s ≤ t} ‖(I − S_s)^{r/2} f‖_p`.
pub fn modulus<F: Real>(f: &ZonalFunction<F>, r: F, t: F, p: F) -> Result<F> {
    modulus_with(f, r, t, p, &ModulusOptions::default(), None)
}

pub fn modulus_with<F: Real>(
    f: &ZonalFunction<F>,
    r: F,
    t: F,
    p: F,
    opts: &ModulusOptions,
    normer: Option<&LpNormer<F>>,
) -> Result<F> {
    check_order(r)?;
    if !(t > F::zero() && t < F::PI()) {
        return Err(invalid("t", "must lie in (0, π)"));
    }
    if opts.points < 2 {
        return Err(invalid("points", "need at least two grid points"));
    }
    let idx = f.space.jacobi();
    let kmax = f.kmax();
    let half_r = r / lit(2.0);
    let tol = lit::<F>(-1e-10);
    let at = |s: F| -> Result<F> {
        let base = idx.defect_table(kmax, s);
        if let Some(k) = base.iter().position(|&b| b < tol) {
            return Err(Error::Numerical(format!(
                "1 - Q_{k}(cos {s}) is negative beyond tolerance"
            )));
        }
        let mu: Vec<F> = base
            .iter()
            .map(|&b| b.max(F::zero()).min(lit(2.0)).powf(half_r))
            .collect();
        image_norm(f, &mu, p, normer)
    };
    let grid = geomspace(t * lit(opts.lower_ratio), t, opts.points);
    let values = grid.iter().map(|&s| at(s)).collect::<Result<Vec<F>>>()?;
    let (mut best_i, mut best) = (0, F::zero());
    for (i, &v) in values.iter().enumerate() {
        if v > best {
            best = v;
            best_i = i;
        }
    }
    if opts.refine && best > F::zero() {
        let lo = grid[best_i.saturating_sub(1)];
        let hi = grid[(best_i + 1).min(grid.len() - 1)];
        let g = |s: F| at(s).unwrap_or(F::zero());
        best = best.max(golden_max(g, lo, hi, 40));
    }
    Ok(best)
}

/// `‖f − η_{at} f‖_p + t^r (‖η_{at} f‖_p + ‖B^r η_{at} f‖_p)`.
pub fn k_functional_realized<F: Real>(f: &ZonalFunction<F>, r: F, t: F, p: F) -> Result<F> {
    k_functional_realized_with(f, r, t, p, F::one(), None)
}

pub fn k_functional_realized_with<F: Real>(
    f: &ZonalFunction<F>,
    r: F,
    t: F,
    p: F,
    a: F,
    normer: Option<&LpNormer<F>>,
) -> Result<F> {
    check_order(r)?;
    if !(t > F::zero()) || !t.is_finite() {
        return Err(invalid("t", "must be positive"));
    }
    if !(a > F::zero()) {
        return Err(invalid("a", "must be positive"));
    }
    let eta_k: Vec<F> = (0..=f.kmax()).map(|k| eta(a * t * from_u64(k as u64))).collect();
    let rest: Vec<F> = eta_k.iter().map(|&e| F::one() - e).collect();
    let half_r = r / lit(2.0);
    let deriv: Vec<F> = eta_k
        .iter()
        .enumerate()
        .map(|(k, &e)| {
            if k == 0 {
                F::zero()
            } else {
                e * f.space.laplace_eigenvalue(k as u64).powf(half_r)
            }
        })
        .collect();
    let far = image_norm(f, &rest, p, normer)?;
    let near = image_norm(f, &eta_k, p, normer)?;
    let near_d = image_norm(f, &deriv, p, normer)?;
    Ok(far + t.powf(r) * (near + near_d))
}

/// Objective of the diagonal `L²` K-functional problem over `g_k = θ_k h_k`:
/// `√Σ(1−θ)²s + τ(√Σθ²s + √Σθ²λ^r s)` with `τ = t^r`.
#[derive(Debug, Clone)]
pub struct OracleProblem<F> {
    pub energies: Vec<F>,
    pub lambda_r: Vec<F>,
    pub tau: F,
}

impl<F: Real> OracleProblem<F> {
    pub fn new(f: &ZonalFunction<F>, r: F, t: F) -> Result<Self> {
        check_order(r)?;
        if !(t > F::zero()) || !t.is_finite() {
            return Err(invalid("t", "must be positive"));
        }
        let lambda_r = (0..=f.kmax())
            .map(|k| f.space.laplace_eigenvalue(k as u64).powf(r))
            .collect();
        Ok(Self {
            energies: f.energies().values,
            lambda_r,
            tau: t.powf(r),
        })
    }

    fn parts(&self, theta: &[F]) -> (F, F, F) {
        let one = F::one();
        let mut a = Vec::with_capacity(theta.len());
        let mut b = Vec::with_capacity(theta.len());
        let mut c = Vec::with_capacity(theta.len());
        for ((&th, &s), &l) in theta.iter().zip(&self.energies).zip(&self.lambda_r) {
            a.push((one - th) * (one - th) * s);
            b.push(th * th * s);
            c.push(th * th * l * s);
        }
        (pairwise_sum(&a).sqrt(), pairwise_sum(&b).sqrt(), pairwise_sum(&c).sqrt())
    }

    pub fn objective(&self, theta: &[F]) -> F {
        let (a, b, c) = self.parts(theta);
        a + self.tau * (b + c)
    }

    /// Gradient; a vanishing norm term contributes its zero subgradient.
    pub fn gradient(&self, theta: &[F]) -> Vec<F> {
        let (a, b, c) = self.parts(theta);
        let inv = |v: F| if v > F::zero() { F::one() / v } else { F::zero() };
        let (ia, ib, ic) = (inv(a), inv(b), inv(c));
        theta
            .iter()
            .zip(&self.energies)
            .zip(&self.lambda_r)
            .map(|((&th, &s), &l)| -(F::one() - th) * s * ia + self.tau * th * s * (ib + l * ic))
            .collect()
    }

    /// Diagonal scaling whose unit projected step is the majorize–minimize map.
    fn scaling(&self, theta: &[F]) -> Vec<F> {
        let (a, b, c) = self.parts(theta);
        let inv = |v: F| if v > F::zero() { F::one() / v } else { F::zero() };
        let (ia, ib, ic) = (inv(a), inv(b), inv(c));
        self.energies
            .iter()
            .zip(&self.lambda_r)
            .map(|(&s, &l)| s * (ia + self.tau * (ib + l * ic)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    GradientTolerance,
    LineSearchStall,
    IterationLimit,
    /// The gradient phase could not improve on the two-parameter optimum,
    /// which happens when the minimizer sits on a face where a norm vanishes.
    ReducedOptimum,
    Trivial,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleResult<F> {
    pub value: F,
    pub iterations: usize,
    pub converged: bool,
    pub termination: Termination,
    pub gradient_norm: F,
    pub theta: Vec<F>,
}

fn projected_gradient_norm<F: Real>(theta: &[F], grad: &[F]) -> F {
    let sq: Vec<F> = theta
        .iter()
        .zip(grad)
        .map(|(&th, &g)| {
            let blocked = (th <= F::zero() && g > F::zero()) || (th >= F::one() && g < F::zero());
            if blocked {
                F::zero()
            } else {
                g * g
            }
        })
        .collect();
    pairwise_sum(&sq).sqrt()
}

/// Stationary points with all three norms positive satisfy
/// `θ_k = 1 / (1 + u + v λ_k^r)` with `u = τa/b`, `v = τa/c`; the limits
/// `u, v → 0, ∞` cover the degenerate faces. Searching `(ln u, ln v)` gives
/// the starting point of the gradient phase.
fn reduced_theta<F: Real>(prob: &OracleProblem<F>, x: F, y: F) -> Vec<F> {
    let (u, v) = (x.exp(), y.exp());
    prob.lambda_r
        .iter()
        .map(|&l| F::one() / (F::one() + u + v * l))
        .collect()
}

fn reduced_search<F: Real>(prob: &OracleProblem<F>) -> Vec<F> {
    const SPAN: f64 = 40.0;
    const CELLS: usize = 32;
    let eval = |x: F, y: F| prob.objective(&reduced_theta(prob, x, y));
    let h = lit::<F>(2.0 * SPAN / CELLS as f64);
    let lo = lit::<F>(-SPAN);
    let (mut bx, mut by, mut bv) = (lo, lo, F::infinity());
    for i in 0..=CELLS {
        for j in 0..=CELLS {
            let (x, y) = (lo + h * from_u64(i as u64), lo + h * from_u64(j as u64));
            let v = eval(x, y);
            if v < bv {
                (bx, by, bv) = (x, y, v);
            }
        }
    }
    // compass search
    let mut step = h;
    let floor = lit::<F>(1e-8);
    while step > floor {
        let mut moved = false;
        for (dx, dy) in [(step, F::zero()), (-step, F::zero()), (F::zero(), step), (F::zero(), -step)] {
            let v = eval(bx + dx, by + dy);
            if v < bv {
                (bx, by, bv) = (bx + dx, by + dy, v);
                moved = true;
                break;
            }
        }
        if !moved {
            step = step / lit(2.0);
        }
    }
    reduced_theta(prob, bx, by)
}

/// Exact `L²` K-functional `inf_g ‖f − g‖_2 + t^r ‖g‖_{W_2^r}`, solved over
/// degree-diagonal `g` by scaled projected gradient with Armijo steps.
pub fn k_functional_oracle<F: Real>(f: &ZonalFunction<F>, r: F, t: F) -> Result<OracleResult<F>> {
    const MAX_ITER: usize = 10_000;
    let prob = OracleProblem::new(f, r, t)?;
    let n = prob.energies.len();
    let norm = f.l2_norm_spectral();
    if norm == F::zero() {
        return Ok(OracleResult {
            value: F::zero(),
            iterations: 0,
            converged: true,
            termination: Termination::Trivial,
            gradient_norm: F::zero(),
            theta: vec![F::zero(); n],
        });
    }
    let tol = lit::<F>(1e-9) * norm;
    let clip = |v: F| v.max(F::zero()).min(F::one());
    let mut theta = reduced_search(&prob);
    let mut value = prob.objective(&theta);
    let reduced_value = value;
    let mut step = F::one();
    let mut iterations = 0;
    let mut termination = Termination::IterationLimit;
    let mut gnorm = F::infinity();
    while iterations < MAX_ITER {
        let grad = prob.gradient(&theta);
        gnorm = projected_gradient_norm(&theta, &grad);
        if gnorm <= tol {
            termination = Termination::GradientTolerance;
            break;
        }
        iterations += 1;
        let h = prob.scaling(&theta);
        let mut accepted = false;
        for _ in 0..60 {
            let cand: Vec<F> = theta
                .iter()
                .zip(&grad)
                .zip(&h)
                .map(|((&th, &g), &hk)| if hk > F::zero() { clip(th - step * g / hk) } else { th })
                .collect();
            let decrease: F = theta
                .iter()
                .zip(&cand)
                .zip(&grad)
                .map(|((&a, &b), &g)| g * (a - b))
                .sum();
            let cv = prob.objective(&cand);
            if cv <= value - lit::<F>(1e-4) * decrease && decrease > F::zero() {
                theta = cand;
                value = cv;
                accepted = true;
                break;
            }
            step = step / lit(2.0);
        }
        if !accepted {
            termination = Termination::LineSearchStall;
            break;
        }
        step = (step * lit(2.0)).min(lit(1e6));
    }
    if termination != Termination::GradientTolerance && value >= reduced_value * (F::one() - lit::<F>(1e-12)) {
        termination = Termination::ReducedOptimum;
    }
    let converged = matches!(termination, Termination::GradientTolerance | Termination::ReducedOptimum);
    let ones = vec![F::one(); n];
    let zeros = vec![F::zero(); n];
    let (v1, v0) = (prob.objective(&ones), prob.objective(&zeros));
    if v1 < value {
        value = v1;
        theta = ones;
    }
    if v0 < value {
        value = v0;
        theta = zeros;
    }
    Ok(OracleResult {
        value,
        iterations,
        converged,
        termination,
        gradient_norm: gnorm,
        theta,
    })
}

/// `‖S_{r,t} f − f‖_p`, with the multiplier `1 − m_r` computed without
/// cancellation.
pub fn norm_srt_diff<F: Real>(f: &ZonalFunction<F>, r: u32, t: F, p: F) -> Result<F> {
    let engine = DefectEngine::new(&f.space, f.kmax());
    norm_srt_diff_with(f, &engine, r, t, p, None)
}

fn norm_srt_diff_with<F: Real>(
    f: &ZonalFunction<F>,
    engine: &DefectEngine<F>,
    r: u32,
    t: F,
    p: F,
    normer: Option<&LpNormer<F>>,
) -> Result<F> {
    let d = engine.complement(r, t)?;
    image_norm(f, &d.values, p, normer)
}

/// Both weightings of the Hausdorff–Young type sum.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HySum<F> {
    /// Weighted by `|1 − m_r(k,t)|^q`.
    pub exact: F,
    /// Weighted by `(min{1, tk})^{rq}` (`^{2r}` in the supremum form).
    pub min_power: F,
}

/// `{Σ_k d_k^{(2−q)/(2q)} w_k s_k^{q/2}}^{1/q}` with `q = p'` for `p ∈ (1, 2]`;
/// for `p = 1` the supremum `sup_k d_k^{−1/2} w_k s_k^{1/2}`.
pub fn hy_weighted_sum<F: Real>(f: &ZonalFunction<F>, r: u32, t: F, p: F) -> Result<HySum<F>> {
    let engine = DefectEngine::new(&f.space, f.kmax());
    hy_weighted_sum_with(f, &engine, r, t, p)
}

fn hy_weighted_sum_with<F: Real>(
    f: &ZonalFunction<F>,
    engine: &DefectEngine<F>,
    r: u32,
    t: F,
    p: F,
) -> Result<HySum<F>> {
    let one = F::one();
    if !(p >= one && p <= lit(2.0)) {
        return Err(invalid("p", "the weighted sum is defined for p in [1, 2]"));
    }
    let defect = engine.complement(r, t)?.values;
    let dims = f.space.dims(f.kmax());
    let s = f.energies().values;
    let min_w = |k: usize| (t * from_u64(k as u64)).min(one);
    if p == one {
        let two_r = 2 * r as i32;
        let (mut ex, mut mp) = (F::zero(), F::zero());
        for k in 0..s.len() {
            let base = s[k].sqrt() / dims[k].sqrt();
            ex = ex.max(defect[k].abs() * base);
            mp = mp.max(min_w(k).powi(two_r) * base);
        }
        return Ok(HySum { exact: ex, min_power: mp });
    }
    let q = p / (p - one);
    let two = lit::<F>(2.0);
    let rq = from_u64::<F>(u64::from(r)) * q;
    let (mut ex, mut mp) = (Vec::new(), Vec::new());
    for k in 0..s.len() {
        let common = dims[k].powf((two - q) / (two * q)) * s[k].powf(q / two);
        ex.push(defect[k].abs().powf(q) * common);
        mp.push(min_w(k).powf(rq) * common);
    }
    Ok(HySum {
        exact: pairwise_sum(&ex).powf(one / q),
        min_power: pairwise_sum(&mp).powf(one / q),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Column<F> {
    pub name: String,
    pub values: Vec<Option<F>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Spread<F> {
    pub numerator: String,
    pub denominator: String,
    /// `max ratio / min ratio` over the grid; `None` when no grid point has
    /// both quantities positive, `∞` when only one of them vanishes somewhere.
    pub value: Option<F>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport<F> {
    pub r: u32,
    pub p: F,
    pub a: F,
    pub t_grid: Vec<F>,
    pub columns: Vec<Column<F>>,
    pub spreads: Vec<Spread<F>>,
}

impl<F: Real> EquivalenceReport<F> {
    pub fn column(&self, name: &str) -> Option<&Column<F>> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn spread(&self, num: &str, den: &str) -> Option<F> {
        self.spreads
            .iter()
            .find(|s| s.numerator == num && s.denominator == den)
            .and_then(|s| s.value)
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ReportOptions {
    /// Realization constant in `η_{at}`.
    pub a: f64,
    pub modulus: ModulusOptions,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            a: 1.0,
            modulus: ModulusOptions::default(),
        }
    }
}

pub const REPORT_COLUMNS: [&str; 8] = [
    "K_realized",
    "K_oracle",
    "norm_Srt_diff",
    "omega_2r",
    "hy_sum_exact",
    "hy_sum_min_power",
    "K_realized_a0.5",
    "K_realized_a2",
];

const SPREAD_PAIRS: [(&str, &str); 7] = [
    ("K_oracle", "norm_Srt_diff"),
    ("K_realized", "K_oracle"),
    ("K_oracle", "omega_2r"),
    ("K_realized", "norm_Srt_diff"),
    ("K_realized", "omega_2r"),
    ("norm_Srt_diff", "omega_2r"),
    ("hy_sum_exact", "norm_Srt_diff"),
];

pub fn spread<F: Real>(num: &[Option<F>], den: &[Option<F>]) -> Option<F> {
    let (mut lo, mut hi) = (F::infinity(), F::zero());
    let mut any = false;
    let mut lopsided = false;
    for (a, b) in num.iter().zip(den) {
        if let (Some(a), Some(b)) = (a, b) {
            let (pa, pb) = (*a > F::zero(), *b > F::zero());
            if pa && pb {
                let ratio = *a / *b;
                lo = lo.min(ratio);
                hi = hi.max(ratio);
                any = true;
            } else if pa != pb {
                lopsided = true;
            }
        }
    }
    if lopsided {
        return Some(F::infinity());
    }
    any.then(|| hi / lo)
}

/// Tabulates `K_{2r}` (realized and, at `p = 2`, exact), `‖S_{r,t} f − f‖_p`,
/// `ω_{2r}` and the weighted sums over `t_grid`.
pub fn equivalence_report<F: Real>(
    f: &ZonalFunction<F>,
    r: u32,
    t_grid: &[F],
    p: F,
    opts: &ReportOptions,
) -> Result<EquivalenceReport<F>> {
    if r == 0 {
        return Err(invalid("r", "must be a positive integer"));
    }
    if !(p > F::one()) || p.is_infinite() {
        return Err(invalid("p", "report requires 1 < p < ∞"));
    }
    let order = from_u64::<F>(2 * u64::from(r));
    let engine = DefectEngine::new(&f.space, f.kmax());
    let normer = if is_two(p) {
        None
    } else {
        Some(LpNormer::new(&f.space, f.kmax())?)
    };
    let a = lit::<F>(opts.a);
    let rows = t_grid
        .par_iter()
        .map(|&t| -> Result<Vec<Option<F>>> {
            let nm = normer.as_ref();
            let kr = k_functional_realized_with(f, order, t, p, a, nm)?;
            let ko = if is_two(p) {
                Some(k_functional_oracle(f, order, t)?.value)
            } else {
                None
            };
            let srt = norm_srt_diff_with(f, &engine, r, t, p, nm)?;
            let om = modulus_with(f, order, t, p, &opts.modulus, nm)?;
            let hy = if p <= lit(2.0) {
                Some(hy_weighted_sum_with(f, &engine, r, t, p)?)
            } else {
                None
            };
            let half = k_functional_realized_with(f, order, t, p, a * lit(0.5), nm)?;
            let double = k_functional_realized_with(f, order, t, p, a * lit(2.0), nm)?;
            Ok(vec![
                Some(kr),
                ko,
                Some(srt),
                Some(om),
                hy.map(|h| h.exact),
                hy.map(|h| h.min_power),
                Some(half),
                Some(double),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let columns: Vec<Column<F>> = REPORT_COLUMNS
        .iter()
        .enumerate()
        .map(|(i, name)| Column {
            name: (*name).to_string(),
            values: rows.iter().map(|row| row[i]).collect(),
        })
        .collect();
    let find = |name: &str| &columns.iter().find(|c| c.name == name).expect("known column").values;
    let spreads = SPREAD_PAIRS
        .iter()
        .map(|(n, d)| Spread {
            numerator: (*n).to_string(),
            denominator: (*d).to_string(),
            value: spread(find(n), find(d)),
        })
        .collect();
    Ok(EquivalenceReport {
        r,
        p,
        a,
        t_grid: t_grid.to_vec(),
        columns,
        spreads,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_zonal;
    use crate::space::{Family, SpaceParams};
    use approx::assert_relative_eq;

    fn s2() -> SpaceParams<f64> {
        SpaceParams::new(Family::Sphere, 2).unwrap()
    }

    #[test]
    fn single_mode_closed_forms() {
        let sp = s2();
        let (k, h) = (8usize, 1.7);
        let f = ZonalFunction::single_mode(sp, k, h);
        let norm = h / (2.0 * k as f64 + 1.0).sqrt();
        let lam = (k * (k + 1)) as f64;
        for &t in &[0.01_f64, 0.05, 0.1, 0.5, 1.0] {
            let r = 2.0;
            let expect = (t.powf(r) * (1.0 + lam.powf(r / 2.0))).min(1.0) * norm;
            let got = k_functional_oracle(&f, r, t).unwrap().value;
            assert_relative_eq!(got, expect, max_relative = 1e-12);
            if t * k as f64 <= 1.0 {
                let kr = k_functional_realized(&f, r, t, 2.0).unwrap();
                assert_relative_eq!(kr, t.powf(r) * (1.0 + lam.powf(r / 2.0)) * norm, max_relative = 1e-12);
            }
        }
        let om = modulus(&f, 2.0, 0.1, 2.0).unwrap();
        let direct = (1..=4000)
            .map(|i| 1.0 - sp.jacobi().q(k as u64, (0.1 * i as f64 / 4000.0).cos()))
            .fold(0.0_f64, f64::max)
            * norm;
        assert_relative_eq!(om, direct, max_relative = 1e-6);
    }

    #[test]
    fn large_t_collapses_to_mean() {
        let f = random_zonal(&s2(), 20, 3, 0, 2.0);
        let t: f64 = 2.5;
        let mean = f.coeffs[0];
        let centered = ZonalFunction::new(f.space, {
            let mut c = f.coeffs.clone();
            c[0] = 0.0;
            c
        })
        .unwrap();
        let expect = centered.l2_norm_spectral() + t.powf(1.5) * mean.abs();
        assert_relative_eq!(k_functional_realized(&f, 1.5, t, 2.0).unwrap(), expect, max_relative = 1e-12);
    }

    #[test]
    fn zero_function_everything_vanishes() {
        let z = ZonalFunction::zero(s2(), 16);
        assert_eq!(k_functional_oracle(&z, 2.0, 0.1).unwrap().value, 0.0);
        assert_eq!(k_functional_realized(&z, 2.0, 0.1, 2.0).unwrap(), 0.0);
        assert_eq!(modulus(&z, 2.0, 0.1, 2.0).unwrap(), 0.0);
        let rep = equivalence_report(&z, 1, &[0.1, 0.2], 2.0, &ReportOptions::default()).unwrap();
        assert!(rep.spreads.iter().all(|s| s.value.is_none()));
    }

    #[test]
    fn p_two_weighted_sum_is_parseval() {
        let f = random_zonal(&s2(), 64, 9, 1, 2.0);
        for r in 1..=3 {
            for &t in &[0.01, 0.1, 0.5] {
                let hy = hy_weighted_sum(&f, r, t, 2.0).unwrap();
                let direct = norm_srt_diff(&f, r, t, 2.0).unwrap();
                assert_relative_eq!(hy.exact, direct, max_relative = 1e-12);
            }
        }
        assert!(hy_weighted_sum(&f, 1, 0.1, 2.5).is_err());
        let p1 = hy_weighted_sum(&f, 1, 0.1, 1.0).unwrap();
        assert!(p1.exact > 0.0 && p1.min_power > 0.0);
    }

    #[test]
    fn oracle_below_realized() {
        let sp = s2();
        for i in 0..5 {
            let f = random_zonal(&sp, 64, 11, i, 2.0);
            for &t in &[0.02, 0.1, 0.4] {
                let o = k_functional_oracle(&f, 2.0, t).unwrap();
                let kr = k_functional_realized(&f, 2.0, t, 2.0).unwrap();
                assert!(o.value <= kr + 1e-9 * kr, "{} {}", o.value, kr);
                assert!(o.value <= f.l2_norm_spectral() + 1e-15);
            }
        }
    }

    #[test]
    fn non_l2_paths_run() {
        let f = random_zonal(&s2(), 24, 5, 0, 2.0);
        let rep = equivalence_report(&f, 1, &[0.05, 0.1], 3.0, &ReportOptions::default()).unwrap();
        assert!(rep.column("K_oracle").unwrap().values.iter().all(Option::is_none));
        assert!(rep.column("omega_2r").unwrap().values.iter().all(|v| v.unwrap() > 0.0));
    }
}
