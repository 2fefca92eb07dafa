use acr_core::ensembles::{random_hermitian, random_state, seeded_rng};
use acr_core::{
    bloch_from_alpha, decode_index, encode_index, index_pair_sets, propagator_matrix, reduced_density, solve_acr,
    spectral_decompose, spin_expectations, AcrProblem, BlochParameter, ChainGeometry, ChainSpec, Complex64 as c64,
    Spin, TiltedIsing,
};
use faer::Side;
use proptest::prelude::*;

fn geometry() -> impl Strategy<Value = ChainGeometry> {
    (1u32..=4).prop_flat_map(|twice| {
        let g = twice as usize + 1;
        let max_sites = (1usize..=12).take_while(|l| g.pow(*l as u32) <= 4096).last().unwrap();
        (1..=max_sites).prop_map(move |l| ChainGeometry::new(l, Spin::from_twice(twice).unwrap()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encode_decode_round_trip((geom, frac) in (geometry(), 0.0f64..1.0)) {
        let j = 1 + ((geom.dim() as f64 * frac) as usize).min(geom.dim() - 1);
        let b = decode_index(j, &geom).unwrap();
        prop_assert_eq!(b.levels.len(), geom.sites());
        prop_assert!(b.levels.iter().all(|&l| l < geom.local_dim()));
        prop_assert_eq!(encode_index(&b.levels, &geom).unwrap().j, j);
    }

    #[test]
    fn bloch_point_from_alpha(re in -50.0f64..50.0, im in -50.0f64..50.0) {
        let alpha = c64::new(re, im);
        let b = bloch_from_alpha(BlochParameter::Finite(alpha));
        let n = b.up().norm_sqr() + b.down().norm_sqr();
        prop_assert!((n - 1.0).abs() < 1e-14);
        let v = b.spin_vector();
        let a2 = alpha.norm_sqr();
        prop_assert!((v[0] - re / (1.0 + a2)).abs() < 1e-12);
        prop_assert!((v[1] - im / (1.0 + a2)).abs() < 1e-12);
        prop_assert!((v[2] - 0.5 * (a2 - 1.0) / (1.0 + a2)).abs() < 1e-12);
        prop_assert!(((v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt() - 0.5).abs() < 1e-12);
        match b.alpha() {
            BlochParameter::Finite(back) => prop_assert!((back - alpha).norm() < 1e-10 * (1.0 + alpha.norm())),
            BlochParameter::Infinite => prop_assert!(false, "finite alpha came back infinite"),
        }
    }

    #[test]
    fn index_sets_partition((sites, qf, pf) in (1usize..=9, 0.0f64..1.0, 0.0f64..1.0)) {
        let q = 1 + ((sites as f64 * qf) as usize).min(sites - 1);
        let p = 1 + ((sites as f64 * pf) as usize).min(sites - 1);
        let sets = index_pair_sets(sites, q, p).unwrap();
        let dim = 1usize << sites;
        for (list, offset) in [(&sets.d, sets.offset_q), (&sets.d_bar, sets.offset_p)] {
            let mut seen = vec![false; dim + 1];
            for &j in list.iter() {
                for k in [j, j + offset] {
                    prop_assert!(!seen[k]);
                    seen[k] = true;
                }
            }
            prop_assert!(seen[1..].iter().all(|&s| s));
        }
    }

    #[test]
    fn reduced_density_is_a_state(seed in any::<u64>(), (geom, sf) in (geometry(), 0.0f64..1.0)) {
        prop_assume!(geom.dim() <= 1024);
        let psi = random_state(&mut seeded_rng(seed), geom.dim());
        let site = 1 + ((geom.sites() as f64 * sf) as usize).min(geom.sites() - 1);
        let rho = reduced_density(&psi, site, &geom).unwrap();
        prop_assert!((rho.trace() - c64::new(1.0, 0.0)).norm() < 1e-12);
        let evd = rho.rho.self_adjoint_eigen(Side::Lower).unwrap();
        prop_assert!(evd.S().column_vector().iter().all(|l| l.re >= -1e-12));
        let e = spin_expectations(&rho, geom.spin());
        let s = geom.spin().value();
        prop_assert!(e.bloch_norm * e.bloch_norm <= s * s + 1e-10);
        let g = geom.local_dim() as f64;
        prop_assert!(e.purity >= 1.0 / g - 1e-10 && e.purity <= 1.0 + 1e-10);
        if geom.spin() == Spin::HALF {
            prop_assert!((e.purity - 0.5 - 2.0 * e.bloch_norm * e.bloch_norm).abs() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Any solved problem is a product state on the collapse site at t = 0.
    #[test]
    fn solved_state_factorizes(
        seed in any::<u64>(),
        sites in 3usize..=6,
        (qf, pf) in (0.0f64..1.0, 0.0f64..1.0),
        (a, b, c, d) in (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0),
        tau in 0.5f64..8.0,
    ) {
        let q = 1 + ((sites as f64 * qf) as usize).min(sites - 1);
        let p = 1 + ((sites as f64 * pf) as usize).min(sites - 1);
        let spec = ChainSpec::tilted_ising(sites, TiltedIsing::REFERENCE).unwrap();
        let h = random_hermitian(&mut seeded_rng(seed), spec.geom.dim());
        let u = propagator_matrix(&spectral_decompose(&h).unwrap(), tau);
        let alpha = bloch_from_alpha(BlochParameter::Finite(c64::new(a, b)));
        let beta = bloch_from_alpha(BlochParameter::Finite(c64::new(c, d)));
        let problem = AcrProblem::new(spec, q, alpha, p, beta, tau).unwrap();
        let sol = solve_acr(&problem, &u).unwrap();
        prop_assert!(sol.residual < 1e-8);
        let e = spin_expectations(&reduced_density(&sol.psi0, q, &spec.geom).unwrap(), Spin::HALF);
        prop_assert!((e.purity - 1.0).abs() < 1e-12);
        for (x, y) in e.vector().iter().zip(alpha.spin_vector()) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }
}
