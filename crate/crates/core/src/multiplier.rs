//! Multiplier sequences: shifts, generalized shifts, the smooth cutoff, finite
//! differences and the dyadic Marcinkiewicz statistic.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::jacobi::CosineTable;
use crate::scalar::{binom_u64, from_u64, lit, Real};
use crate::space::SpaceParams;
use crate::zonal::ZonalFunction;

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierSequence<F> {
    pub space: SpaceParams<F>,
    pub values: Vec<F>,
    pub label: String,
    pub notes: Vec<String>,
}

impl<F: Real> MultiplierSequence<F> {
    pub fn new(space: SpaceParams<F>, values: Vec<F>, label: impl Into<String>) -> Result<Self> {
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid("values", format!("non-finite multiplier at degree {k}")));
        }
        Ok(Self {
            space,
            values,
            label: label.into(),
            notes: Vec::new(),
        })
    }

    pub fn constant(space: SpaceParams<F>, c: F, kmax: usize) -> Self {
        Self {
            space,
            values: vec![c; kmax + 1],
            label: "constant".into(),
            notes: Vec::new(),
        }
    }

    pub fn kmax(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    /// Applies the multiplier to `f`; the shorter truncation wins.
    pub fn apply(&self, f: &ZonalFunction<F>) -> Result<ZonalFunction<F>> {
        apply(self, f)
    }
}

fn check_t<F: Real>(t: F) -> Result<()> {
    if !(t >= F::zero() && t <= F::PI()) {
        return Err(invalid("t", "must lie in [0, π]"));
    }
    Ok(())
}

/// `μ_k = Q_k(cos t)`. `t = 0` gives the identity.
pub fn shift_multipliers<F: Real>(space: &SpaceParams<F>, t: F, kmax: usize) -> Result<MultiplierSequence<F>> {
    check_t(t)?;
    let values = space.jacobi().q_table(kmax, t.cos());
    MultiplierSequence::new(*space, values, format!("S_t(t={t})"))
}

/// Weights `(−2/C(2r,r)) (−1)^j C(2r, r−j)` for `j = 1..=r`.
fn gen_shift_weights<F: Real>(r: u32) -> Vec<F> {
    let r = u64::from(r);
    let central = from_u64::<F>(binom_u64(2 * r, r));
    (1..=r)
        .map(|j| {
            let sign = if j % 2 == 0 { F::one() } else { -F::one() };
            -lit::<F>(2.0) / central * sign * from_u64(binom_u64(2 * r, r - j))
        })
        .collect()
}

fn check_r(r: u32) -> Result<()> {
    if r == 0 {
        return Err(invalid("r", "must be a positive integer"));
    }
    Ok(())
}

/// `m_r(k, t)`, the multipliers of the generalized shift `S_{r,t}`.
pub fn gen_shift_multipliers<F: Real>(
    space: &SpaceParams<F>,
    r: u32,
    t: F,
    kmax: usize,
) -> Result<MultiplierSequence<F>> {
    check_r(r)?;
    check_t(t)?;
    let idx = space.jacobi();
    let mut values = vec![F::zero(); kmax + 1];
    for (j, w) in gen_shift_weights::<F>(r).into_iter().enumerate() {
        let jt = from_u64::<F>(j as u64 + 1) * t;
        for (v, q) in values.iter_mut().zip(idx.q_table(kmax, jt.cos())) {
            *v = *v + w * q;
        }
    }
    let mut seq = MultiplierSequence::new(*space, values, format!("S_{{r,t}}(r={r},t={t})"))?;
    if t > F::PI() / from_u64(2 * u64::from(r)) {
        seq.notes.push("t exceeds π/(2r); outside the small-t regime".into());
    }
    Ok(seq)
}

/// Accurate `1 − m_r(k, t)` for a fixed truncation, through the cosine
/// expansion `1 − m_r = (4^r / C(2r,r)) Σ_v c_{k,v} sin^{2r}(vt/2)`.
#[derive(Debug, Clone)]
pub struct DefectEngine<F> {
    space: SpaceParams<F>,
    table: CosineTable<F>,
}

impl<F: Real> DefectEngine<F> {
    pub fn new(space: &SpaceParams<F>, kmax: usize) -> Self {
        Self {
            space: *space,
            table: CosineTable::new(&space.jacobi(), kmax),
        }
    }

    pub fn kmax(&self) -> usize {
        self.table.kmax()
    }

    pub fn defect(&self, r: u32, t: F) -> Vec<F> {
        let kmax = self.table.kmax();
        let half = lit::<F>(0.5);
        let two_r = 2 * r as i32;
        let pref = lit::<F>(4.0).powi(r as i32) / from_u64(binom_u64(2 * u64::from(r), u64::from(r)));
        let sines: Vec<F> = (0..=kmax)
            .map(|v| (half * from_u64::<F>(v as u64) * t).sin().powi(two_r))
            .collect();
        (0..=kmax)
            .map(|k| {
                let row = self.table.row(k);
                pref * row.iter().zip(&sines).map(|(&c, &s)| c * s).sum::<F>()
            })
            .collect()
    }

    /// The multiplier sequence of `I − S_{r,t}`.
    pub fn complement(&self, r: u32, t: F) -> Result<MultiplierSequence<F>> {
        check_r(r)?;
        check_t(t)?;
        MultiplierSequence::new(self.space, self.defect(r, t), format!("I-S_{{r,t}}(r={r},t={t})"))
    }
}

/// Multipliers of `I − S_{r,t}` with cancellation-free values.
pub fn gen_shift_defect<F: Real>(
    space: &SpaceParams<F>,
    r: u32,
    t: F,
    kmax: usize,
) -> Result<MultiplierSequence<F>> {
    DefectEngine::new(space, kmax).complement(r, t)
}

/// Smooth cutoff: 1 on `[0, 1]`, 0 on `[2, ∞)`, `C^∞` in between.
pub fn eta<F: Real>(s: F) -> F {
    let one = F::one();
    if s <= one {
        return one;
    }
    let two = lit::<F>(2.0);
    if s >= two {
        return F::zero();
    }
    let phi = |u: F| if u > F::zero() { (-one / u).exp() } else { F::zero() };
    let (a, b) = (phi(two - s), phi(s - one));
    a / (a + b)
}

/// `μ_k = η(t k)`.
pub fn eta_multipliers<F: Real>(space: &SpaceParams<F>, t: F, kmax: usize) -> Result<MultiplierSequence<F>> {
    if !(t > F::zero()) || !t.is_finite() {
        return Err(invalid("t", "must be positive"));
    }
    let values = (0..=kmax).map(|k| eta(t * from_u64(k as u64))).collect();
    MultiplierSequence::new(*space, values, format!("eta_t(t={t})"))
}

pub fn apply<F: Real>(mu: &MultiplierSequence<F>, f: &ZonalFunction<F>) -> Result<ZonalFunction<F>> {
    if mu.space.id != f.space.id {
        return Err(Error::SpaceMismatch);
    }
    let coeffs = f.coeffs.iter().zip(&mu.values).map(|(&h, &m)| h * m).collect();
    ZonalFunction::new(f.space, coeffs)
}

/// `j`-fold forward difference `Δb_k = b_{k+1} − b_k`.
pub fn forward_difference<F: Real>(seq: &[F], j: usize) -> Result<Vec<F>> {
    if j > seq.len() {
        return Err(invalid("j", "difference order exceeds sequence length"));
    }
    let mut cur = seq.to_vec();
    for _ in 0..j {
        cur = cur.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok(cur)
}

/// Smallest integer exceeding `m / 2`.
pub fn marcinkiewicz_order(m: u32) -> usize {
    (m / 2 + 1) as usize
}

#[derive(Debug, Clone, Serialize)]
pub struct MarcinkiewiczReport<F> {
    pub s: usize,
    pub jmax: u32,
    pub sup_abs: F,
    /// `2^{j(s−1)} Σ_{l=2^j}^{2^{j+1}} |Δ^s μ_l|` for `j = 0..=jmax`.
    pub blocks: Vec<F>,
    pub bound: F,
}

pub fn marcinkiewicz_bound<F: Real>(
    mu: &MultiplierSequence<F>,
    s: usize,
    jmax: u32,
) -> Result<MarcinkiewiczReport<F>> {
    if s == 0 {
        return Err(invalid("s", "must be positive"));
    }
    let required = (1usize << (jmax + 1)) + s;
    if mu.kmax() < required {
        return Err(Error::TruncationTooShort {
            required,
            available: mu.kmax(),
        });
    }
    let diff = forward_difference(&mu.values, s)?;
    let sup_abs = mu.values.iter().fold(F::zero(), |a, v| a.max(v.abs()));
    let blocks: Vec<F> = (0..=jmax)
        .map(|j| {
            let lo = 1usize << j;
            let sum: F = diff[lo..=2 * lo].iter().map(|v| v.abs()).sum();
            lit::<F>(2.0).powi((j as i32) * (s as i32 - 1)) * sum
        })
        .collect();
    let bound = blocks.iter().fold(sup_abs, |a, &b| a.max(b));
    Ok(MarcinkiewiczReport {
        s,
        jmax,
        sup_abs,
        blocks,
        bound,
    })
}

/// The three multiplier sequences used to pass between `K_{2r}` and
/// `‖S_{r,t} f − f‖`.
#[derive(Debug, Clone)]
pub struct ProofSequences<F> {
    pub mu1: MultiplierSequence<F>,
    pub mu2: MultiplierSequence<F>,
    pub mu3: MultiplierSequence<F>,
}

pub fn proof_sequences<F: Real>(
    space: &SpaceParams<F>,
    r: u32,
    t: F,
    a: F,
    kmax: usize,
) -> Result<ProofSequences<F>> {
    check_r(r)?;
    if !(t > F::zero() && t <= F::FRAC_PI_2()) {
        return Err(invalid("t", "must lie in (0, π/2]"));
    }
    if !(a > F::zero()) || !a.is_finite() {
        return Err(invalid("a", "must be positive"));
    }
    if kmax < 1 {
        return Err(invalid("kmax", "need at least degree 1"));
    }
    let defect = DefectEngine::new(space, kmax).defect(r, t);
    let ri = r as i32;
    let t2r = t.powi(2 * ri);
    let (mut mu1, mut mu2, mut mu3) = (Vec::new(), Vec::new(), Vec::new());
    for k in 0..=kmax {
        let e = eta(a * t * from_u64(k as u64));
        let d = defect[k];
        let m = F::one() - d;
        mu1.push(if e == F::one() {
            F::zero()
        } else {
            (F::one() - e) * m.powi(4) / d
        });
        if k == 0 {
            continue;
        }
        let scale = space.laplace_eigenvalue(k as u64).powi(ri) * t2r;
        if e == F::zero() {
            mu2.push(F::zero());
            mu3.push(F::zero());
        } else {
            mu2.push(d / scale * e);
            mu3.push(scale / d * e);
        }
    }
    // degree 0 is annihilated by every operator involved; copy the k = 1 value
    mu2.insert(0, mu2[0]);
    mu3.insert(0, mu3[0]);
    let tag = format!("(r={r},t={t},a={a})");
    let note = "degree-0 value copied from degree 1".to_string();
    let mut mu2 = MultiplierSequence::new(*space, mu2, format!("mu2{tag}"))?;
    let mut mu3 = MultiplierSequence::new(*space, mu3, format!("mu3{tag}"))?;
    mu2.notes.push(note.clone());
    mu3.notes.push(note);
    Ok(ProofSequences {
        mu1: MultiplierSequence::new(*space, mu1, format!("mu1{tag}"))?,
        mu2,
        mu3,
    })
}

/// Empirical constants for `a ≤ (1 − m_r)/(kt)^{2r} ≤ b` on `0 < kt ≤ π` and
/// `m_r ≤ v_τ` on `kt ≥ τ`.
#[derive(Debug, Clone, Serialize)]
pub struct RatioReport<F> {
    pub r: u32,
    pub kmax: usize,
    pub a_min: F,
    pub b_max: F,
    /// Ratio at the cell nearest `kt = π/2`.
    pub midpoint: F,
    pub v_tau_one: F,
    pub v_tau_pi: F,
    pub min_defect_small_t: F,
}

pub fn equivalence_ratio_report<F: Real>(
    space: &SpaceParams<F>,
    r: u32,
    t_grid: &[F],
    kmax: usize,
) -> Result<RatioReport<F>> {
    check_r(r)?;
    if t_grid.iter().any(|&t| !(t > F::zero() && t <= F::FRAC_PI_2())) {
        return Err(invalid("t_grid", "entries must lie in (0, π/2]"));
    }
    let engine = DefectEngine::new(space, kmax);
    let pi = F::PI();
    let mut a_min = F::infinity();
    let mut b_max = F::zero();
    let mut v1 = F::neg_infinity();
    let mut vpi = F::neg_infinity();
    let mut min_def = F::infinity();
    let mut midpoint = F::nan();
    let mut mid_gap = F::infinity();
    let target = F::FRAC_PI_2();
    for &t in t_grid {
        let def = engine.defect(r, t);
        for (k, &d) in def.iter().enumerate().skip(1) {
            let kt = from_u64::<F>(k as u64) * t;
            if t <= pi / from_u64(2 * u64::from(r)) {
                min_def = min_def.min(d);
            }
            if kt <= pi {
                let ratio = d / kt.powi(2 * r as i32);
                a_min = a_min.min(ratio);
                b_max = b_max.max(ratio);
                if (kt - target).abs() < mid_gap {
                    mid_gap = (kt - target).abs();
                    midpoint = ratio;
                }
            }
            let m = F::one() - d;
            if kt >= F::one() {
                v1 = v1.max(m);
            }
            if kt >= pi {
                vpi = vpi.max(m);
            }
        }
    }
    Ok(RatioReport {
        r,
        kmax,
        a_min,
        b_max,
        midpoint,
        v_tau_one: v1,
        v_tau_pi: vpi,
        min_defect_small_t: min_def,
    })
}

/// Report-only scaling diagnostics for finite differences of `m_r`.
#[derive(Debug, Clone, Serialize)]
pub struct DifferenceScaling<F> {
    pub j: usize,
    /// Per-`t` maximum of the scaled difference.
    pub per_t: Vec<F>,
    pub max: F,
    pub spread: Option<F>,
}

fn scaling_summary<F: Real>(j: usize, per_t: Vec<F>) -> DifferenceScaling<F> {
    let max = per_t.iter().fold(F::zero(), |a, &b| a.max(b));
    let min = per_t.iter().fold(F::infinity(), |a, &b| a.min(b));
    let spread = (min > F::zero() && max.is_finite()).then(|| max / min);
    DifferenceScaling { j, per_t, max, spread }
}

/// `max_{kt ≤ 1} |Δ^j m_r(k,t)| / t^j` for each `t`.
pub fn small_t_difference_scaling<F: Real>(
    space: &SpaceParams<F>,
    r: u32,
    j: usize,
    t_grid: &[F],
    kmax: usize,
) -> Result<DifferenceScaling<F>> {
    let engine = DefectEngine::new(space, kmax);
    let mut per_t = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let m: Vec<F> = engine.defect(r, t).into_iter().map(|d| -d).collect();
        let diff = forward_difference(&m, j)?;
        let mut best = F::zero();
        for (k, v) in diff.iter().enumerate() {
            if from_u64::<F>((k + j) as u64) * t <= F::one() {
                best = best.max(v.abs() / t.powi(j as i32));
            }
        }
        per_t.push(best);
    }
    Ok(scaling_summary(j, per_t))
}

/// `max k^j |Δ^j[(1 − m_r)/(λ_k t²)^r]|` over `0 < kt < 1`, `k ∈ [8, kmax]`.
pub fn normalized_defect_scaling<F: Real>(
    space: &SpaceParams<F>,
    r: u32,
    j: usize,
    t_grid: &[F],
    kmax: usize,
) -> Result<DifferenceScaling<F>> {
    let engine = DefectEngine::new(space, kmax);
    let ri = r as i32;
    let mut per_t = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let def = engine.defect(r, t);
        let g: Vec<F> = (1..=kmax)
            .map(|k| def[k] / (space.laplace_eigenvalue(k as u64) * t * t).powi(ri))
            .collect();
        let diff = forward_difference(&g, j)?;
        let mut best = F::zero();
        for (i, v) in diff.iter().enumerate() {
            let k = i + 1;
            let kf = from_u64::<F>(k as u64);
            if k >= 8 && from_u64::<F>((k + j) as u64) * t < F::one() {
                best = best.max(v.abs() * kf.powi(j as i32));
            }
        }
        per_t.push(best);
    }
    Ok(scaling_summary(j, per_t))
}
