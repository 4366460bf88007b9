use gauss_epi::channels::{apply_beamsplitter, heat_semigroup, Eta};
use gauss_epi::inequalities::{epi_check, integral_fisher, stam_check, CheckOptions, Roles};
use gauss_epi::states::{
    conditional_entropy, conditional_mutual_information, entropy, random_conditionally_independent,
    random_state, random_symplectic, thermal, CiBlocks,
};
use gauss_epi::symplectic::{
    apply_symplectic, is_valid_covariance, quadratures_of, restrict, symplectic_eigenvalues,
    symplectic_residual,
};
use gauss_epi::{GaussianState, Partition};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn abm(seed: u64) -> GaussianState {
    let p = Partition::contiguous(&[("A", 1), ("B", 1), ("M", 1)]).unwrap();
    random_state(seed, 3, p, 3.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectrum_is_symplectic_invariant(seed in any::<u64>(), n in 1usize..4) {
        let s = random_state(seed, n, Partition::single("A", n), 4.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let sym = random_symplectic(&mut rng, n);
        prop_assert!(symplectic_residual(sym.matrix()) < 1e-8);
        let before = symplectic_eigenvalues(s.cov()).unwrap();
        let (moved, _) = apply_symplectic(&sym, s.cov(), s.mean()).unwrap();
        let after = symplectic_eigenvalues(&moved).unwrap();
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() <= 1e-8 * x.max(1.0), "{x} vs {y}");
        }
    }

    #[test]
    fn marginals_stay_valid(seed in any::<u64>(), keep in 0usize..3) {
        let s = abm(seed);
        let sub = restrict(s.cov(), &quadratures_of(&[keep])).unwrap();
        prop_assert!(is_valid_covariance(&sub, 1e-9).valid);
    }

    #[test]
    fn entropy_adds_over_products(nu_a in 0.5f64..5.0, nu_b in 0.5f64..5.0) {
        let a = thermal(nu_a, 1).unwrap();
        let b = thermal(nu_b, 2).unwrap().relabel("A", "B").unwrap();
        let ab = a.tensor(&b).unwrap();
        let joint = entropy(&ab, &["A", "B"]).unwrap();
        let sum = entropy(&a, &["A"]).unwrap() + entropy(&b, &["B"]).unwrap();
        prop_assert!((joint - sum).abs() <= 1e-10 * sum.max(1.0));
    }

    #[test]
    fn strong_subadditivity(seed in any::<u64>()) {
        let s = abm(seed);
        prop_assert!(conditional_mutual_information(&s, &["A"], &["B"], &["M"]).unwrap() >= -1e-9);
    }

    #[test]
    fn entropy_increase_is_monotone_and_concave(seed in any::<u64>(), t in 0.05f64..3.0) {
        let s = abm(seed);
        let d = |t: f64| integral_fisher(&s, &["A"], &["M"], t).unwrap();
        let (d1, d2, d3) = (d(t), d(2.0 * t), d(3.0 * t));
        prop_assert!(d1 >= -1e-10 && d2 >= d1 - 1e-10);
        prop_assert!(d2 - d1 >= d3 - d2 - 1e-9);
    }

    #[test]
    fn heat_splits_additively(seed in any::<u64>(), s in 0.0f64..2.0, t in 0.0f64..2.0) {
        let st = abm(seed);
        let split = integral_fisher(&st, &["A"], &["M"], s).unwrap()
            + integral_fisher(&heat_semigroup(&st, &["A"], s).unwrap(), &["A"], &["M"], t).unwrap();
        let whole = integral_fisher(&st, &["A"], &["M"], s + t).unwrap();
        prop_assert!((split - whole).abs() <= 1e-9 * whole.abs().max(1.0));
    }

    #[test]
    fn heating_memory_cannot_lower_conditional_entropy(seed in any::<u64>(), t in 0.0f64..5.0) {
        let s = abm(seed);
        let before = conditional_entropy(&s, &["A"], &["M"]).unwrap();
        let after = conditional_entropy(&heat_semigroup(&s, &["M"], t).unwrap(), &["A"], &["M"]).unwrap();
        prop_assert!(after >= before - 1e-9);
    }

    #[test]
    fn passive_mixing_preserves_total_entropy(seed in any::<u64>(), eta in 0.0f64..=1.0) {
        let s = abm(seed);
        let out = apply_beamsplitter(&s, Eta::new(eta).unwrap(), true).unwrap();
        let before = entropy(&s, &["A", "B"]).unwrap();
        let after = entropy(&out, &["C", "D"]).unwrap();
        prop_assert!((before - after).abs() <= 1e-8 * before.abs().max(1.0));
    }

    #[test]
    fn conditional_inequalities_hold(seed in any::<u64>(), eta in prop_oneof![0.0f64..=1.0, 1.0f64..3.0]) {
        let s = random_conditionally_independent(seed, CiBlocks::symmetric(1, 1, 3.0)).unwrap();
        let roles = Roles::standard(&s);
        let e = Eta::new(eta).unwrap();
        let opts = CheckOptions::default();
        prop_assert!(epi_check(&s, &roles, e, &opts).unwrap().holds(1e-9));
        prop_assert!(stam_check(&s, &roles, e, &opts).unwrap().holds(1e-9));
    }
}
