//! Seeded random test functions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::scalar::{from_u64, lit, Real};
use crate::space::SpaceParams;
use crate::zonal::ZonalFunction;

/// `h_k = g_k (1 + k)^{−decay}` with `g_k` standard normal. Each `index`
/// selects an independent ChaCha stream under the same seed, so functions
/// do not depend on generation order.
pub fn random_zonal<F: Real>(
    space: &SpaceParams<F>,
    kmax: usize,
    seed: u64,
    index: u64,
    decay: F,
) -> ZonalFunction<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let coeffs = (0..=kmax)
        .map(|k| {
            let g: f64 = StandardNormal.sample(&mut rng);
            lit::<F>(g) * (F::one() + from_u64::<F>(k as u64)).powf(-decay)
        })
        .collect();
    ZonalFunction {
        space: *space,
        coeffs,
    }
}

/// `count` functions with the default decay 2.
pub fn random_suite<F: Real>(space: &SpaceParams<F>, kmax: usize, seed: u64, count: usize) -> Vec<ZonalFunction<F>> {
    (0..count as u64)
        .map(|i| random_zonal(space, kmax, seed, i, lit(2.0)))
        .collect()
}
