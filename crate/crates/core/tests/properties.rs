use proptest::prelude::*;

use rabi_core::eigen::{eigenvalues, SymmetricMatrix};
use rabi_core::gfunction::{g_pair, k_coeffs, residue_pair, scaled_pair_at, Truncation};
use rabi_core::oracle::{build_hamiltonian, build_hamiltonian_signed, parity_reduce, FockTruncation};
use rabi_core::{validate_params, ModelParams, SpectralPoint};

fn params() -> impl Strategy<Value = ModelParams> {
    (0.1f64..1.5, 0.1f64..1.5).prop_map(|(g, d)| validate_params(1.0, g, d).unwrap())
}

fn off_pole_x() -> impl Strategy<Value = f64> {
    (-2.0f64..6.0).prop_filter("near a pole", |x| x.round() < 0.0 || (x - x.round()).abs() > 1e-4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn kseries_satisfies_its_recurrence(p in params(), x in off_pole_x()) {
        let ks = k_coeffs(SpectralPoint::new(x), &p, &Truncation::default()).unwrap();
        prop_assert!(ks.recurrence_residual(&p) <= 1e-12);
    }

    #[test]
    fn more_terms_do_not_move_converged_values(p in params(), x in off_pole_x()) {
        let t = Truncation::default();
        let a = g_pair(SpectralPoint::new(x), &p, &t).unwrap();
        let b = g_pair(SpectralPoint::new(x), &p, &t.with_max_terms(400)).unwrap();
        let scale = 1.0 + a.g_plus.abs().max(a.g_minus.abs());
        prop_assert!((a.g_plus - b.g_plus).abs() <= 1e-13 * scale);
        prop_assert!((a.g_minus - b.g_minus).abs() <= 1e-13 * scale);
    }

    #[test]
    fn residues_factor_through_k_at_the_pole(p in params(), n in 0usize..4) {
        let r = residue_pair(n, &p, &Truncation::default()).unwrap();
        prop_assert!((r.r_plus - r.k_n_at_pole * r.c_plus).abs() <= 1e-12 * r.r_plus_scale().max(1e-300));
        prop_assert!((r.r_minus - r.k_n_at_pole * r.c_minus).abs() <= 1e-12 * r.r_minus_scale().max(1e-300));
    }

    #[test]
    fn scaled_g_approaches_the_residue(p in params(), n in 0usize..3) {
        // (x − nω)G(x) − R is ε times the regular part of G at the pole, which
        // can dwarf R at strong coupling, so check the first-order approach.
        let t = Truncation::default();
        let r = residue_pair(n, &p, &t).unwrap();
        for eps in [1e-5, -1e-5] {
            let (ap, am) = scaled_pair_at(n, eps, &p, &t).unwrap();
            let (bp, bm) = scaled_pair_at(n, eps / 10.0, &p, &t).unwrap();
            for (a, b, res, scale) in [(ap, bp, r.r_plus, r.r_plus_scale()), (am, bm, r.r_minus, r.r_minus_scale())] {
                let (ea, eb) = (a - res, b - res);
                prop_assert!((eb - ea / 10.0).abs() <= 1e-3 * ea.abs() + 1e-10 * scale, "errors {ea:e}, {eb:e}");
            }
        }
    }

    #[test]
    fn g_and_delta_signs_are_irrelevant(g in -1.5f64..1.5, d in -1.5f64..1.5) {
        prop_assume!(g.abs() > 0.05);
        let p = validate_params(1.0, g, d).unwrap();
        prop_assert_eq!(p.g(), g.abs());
        prop_assert_eq!(p.delta(), d.abs());
        let f = FockTruncation::unchecked(12);
        let a = eigenvalues(&build_hamiltonian_signed(1.0, g, d, &f)).unwrap();
        let b = eigenvalues(&build_hamiltonian(&p, &f)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn sectors_reproduce_the_full_spectrum(g in 0.0f64..1.5, d in 0.0f64..1.5) {
        let p = validate_params(1.0, g, d).unwrap();
        let f = FockTruncation::unchecked(6);
        let full = eigenvalues(&build_hamiltonian(&p, &f)).unwrap();
        let (hp, hm) = parity_reduce(&p, &f);
        let mut union = eigenvalues(&hp).unwrap();
        union.extend(eigenvalues(&hm).unwrap());
        union.sort_by(f64::total_cmp);
        for (x, y) in full.iter().zip(&union) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn eigenvalues_respect_similarity_invariants(seed in any::<u64>(), dim in 1usize..14, shift in -3.0f64..3.0) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut m = SymmetricMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..=i {
                m.set(i, j, rng.random_range(-1.0..1.0));
            }
        }
        let ev = eigenvalues(&m).unwrap();
        prop_assert!(ev.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!((ev.iter().sum::<f64>() - m.trace()).abs() <= 1e-12);
        prop_assert!((ev.iter().map(|v| v * v).sum::<f64>() - m.frobenius_sq()).abs() <= 1e-12);
        let shifted = eigenvalues(&m.shifted(shift)).unwrap();
        for (a, b) in ev.iter().zip(&shifted) {
            prop_assert!((a + shift - b).abs() <= 1e-12);
        }
    }
}
