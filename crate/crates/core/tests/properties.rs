use proptest::prelude::*;
use twopoint::mercer::example_kernel;
use twopoint::multiplier::{gen_shift_multipliers, DefectEngine};
use twopoint::random::random_zonal;
use twopoint::smoothness::{k_functional_oracle, k_functional_realized};
use twopoint::space::catalog_sample;
use twopoint::{catalog, LpNormer, MercerKernel, SpaceId, SpaceParams, ZonalFunction};

fn space_strategy() -> impl Strategy<Value = SpaceParams<f64>> {
    (0..catalog_sample().len()).prop_map(|i| catalog(catalog_sample()[i]))
}

fn zonal_strategy(kmax: usize) -> impl Strategy<Value = ZonalFunction<f64>> {
    (space_strategy(), 1..=kmax, any::<u64>())
        .prop_map(|(sp, k, seed)| random_zonal(&sp, k, seed, 0, 1.5))
}

fn pair_strategy(kmax: usize) -> impl Strategy<Value = (ZonalFunction<f64>, ZonalFunction<f64>)> {
    (space_strategy(), 1..=kmax, any::<u64>()).prop_map(|(sp, k, seed)| {
        (random_zonal(&sp, k, seed, 0, 1.5), random_zonal(&sp, k, seed, 1, 1.5))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parseval(f in zonal_strategy(48)) {
        let by_quadrature = f.lp_norm(2.0).unwrap();
        let spectral = f.l2_norm_spectral();
        prop_assert!((by_quadrature - spectral).abs() <= 1e-11 * spectral);
    }

    #[test]
    fn triangle_inequality((f, g) in pair_strategy(40), p in 1.0f64..6.0) {
        let normer = LpNormer::new(&f.space, f.kmax()).unwrap();
        let sum = f.combine(1.0, &g, 1.0).unwrap();
        let lhs = normer.norm(&sum, p).unwrap();
        let rhs = normer.norm(&f, p).unwrap() + normer.norm(&g, p).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn multiplier_application_is_linear((f, g) in pair_strategy(40), a in -3.0f64..3.0, r in 1u32..4, t in 0.01f64..1.5) {
        let mu = gen_shift_multipliers(&f.space, r, t, f.kmax()).unwrap();
        let lhs = mu.apply(&f.combine(a, &g, 1.0).unwrap()).unwrap();
        let rhs = mu.apply(&f).unwrap().combine(a, &mu.apply(&g).unwrap(), 1.0).unwrap();
        for (x, y) in lhs.coeffs.iter().zip(&rhs.coeffs) {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn multiplier_scales_energies(f in zonal_strategy(64), r in 1u32..5, t in 0.001f64..3.0) {
        let mu = gen_shift_multipliers(&f.space, r, t, f.kmax()).unwrap();
        let image = mu.apply(&f).unwrap().energies().values;
        let before = f.energies().values;
        for k in 0..=f.kmax() {
            let expect = mu.values[k] * mu.values[k] * before[k];
            prop_assert!((image[k] - expect).abs() <= 1e-13 * expect.max(1e-300));
        }
    }

    #[test]
    fn normalization_at_degree_zero(sp in space_strategy(), r in 1u32..7, t in 0.0f64..std::f64::consts::PI) {
        let mu = gen_shift_multipliers(&sp, r, t, 3).unwrap();
        prop_assert!((mu.values[0] - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn defect_is_nonnegative(sp in space_strategy(), r in 1u32..7, t in 0.0f64..std::f64::consts::PI) {
        let defect = DefectEngine::new(&sp, 96).defect(r, t);
        prop_assert!(defect.iter().all(|&d| d >= 0.0));
        let direct = gen_shift_multipliers(&sp, r, t, 96).unwrap();
        for (a, b) in defect.iter().zip(&direct.values) {
            prop_assert!((a - (1.0 - b)).abs() <= 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn oracle_never_exceeds_realization(f in zonal_strategy(32), r in 1.0f64..3.0, t in 0.01f64..1.0) {
        let oracle = k_functional_oracle(&f, r, t).unwrap().value;
        let realized = k_functional_realized(&f, r, t, 2.0).unwrap();
        prop_assert!(oracle <= realized * (1.0 + 1e-9));
    }

    #[test]
    fn oracle_is_monotone_in_t(f in zonal_strategy(32), r in 1.0f64..3.0, t in 0.01f64..0.5, factor in 1.1f64..3.0) {
        let small = k_functional_oracle(&f, r, t).unwrap().value;
        let large = k_functional_oracle(&f, r, t * factor).unwrap().value;
        prop_assert!(small <= large * (1.0 + 1e-7));
    }

    #[test]
    fn oracle_is_subadditive((f, g) in pair_strategy(24), r in 1.0f64..3.0, t in 0.01f64..1.0) {
        let sum = f.combine(1.0, &g, 1.0).unwrap();
        let lhs = k_functional_oracle(&sum, r, t).unwrap().value;
        let rhs = k_functional_oracle(&f, r, t).unwrap().value + k_functional_oracle(&g, r, t).unwrap().value;
        prop_assert!(lhs <= rhs * (1.0 + 1e-7));
    }

    #[test]
    fn valid_kernels_have_nonincreasing_eigenvalues(i in 0usize..11, decay in 1.2f64..4.0) {
        let sp: SpaceParams<f64> = catalog(catalog_sample()[i]);
        let coeffs: Vec<f64> = (0..40u64)
            .map(|k| (1.0 + k as f64).powf(-decay) / sp.harmonic_dim_real(k))
            .collect();
        let kernel = MercerKernel::new(sp, coeffs).unwrap();
        prop_assert!(kernel.validate().is_valid());
        let n = (kernel.space.cumulative_dims_real(39)[39] as usize).min(3000);
        prop_assert!(kernel.eigen_sequence(n).unwrap().is_nonincreasing());
    }

    #[test]
    fn example_kernels_are_valid(eps_scale in 1.05f64..3.0, r in 1u32..3) {
        for id in [SpaceId::sphere(2).unwrap(), SpaceId::new(twopoint::Family::ComplexProjective, 4).unwrap()] {
            let eps = eps_scale / f64::from(id.m);
            let k = example_kernel::<f64>(id, eps, r, 128).unwrap();
            prop_assert!(k.validate().positivity.is_none());
            prop_assert!(k.validate().monotonicity.is_none());
        }
    }
}
