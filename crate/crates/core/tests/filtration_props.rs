mod common;

use holodist::filtration::{
    deligne_v, generated_v_check, graded_piece, graded_piece_descended, minimal_extension, parabolic_lattice,
};
use holodist::formal::{descend_model, lift_model, nearby_cycles};
use holodist::scalar::{rat, ExactScalar};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn level() -> impl Strategy<Value = BigRational> {
    (-24i64..=24).prop_map(|n| rat(n, 12))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn v_is_generated_and_saturations_agree(seed in any::<u64>(), b in level()) {
        let model = common::random_model(&mut ChaCha8Rng::seed_from_u64(seed), 4, 3);
        let (ok, witness) = generated_v_check(&model, &b);
        prop_assert!(ok, "{:?}", witness);
        prop_assert!(minimal_extension(&model).equal);
    }

    #[test]
    fn multiplication_by_y_shifts_levels(seed in any::<u64>(), b in level()) {
        let model = common::random_model(&mut ChaCha8Rng::seed_from_u64(seed), 4, 3);
        let one = rat(1, 1);
        prop_assert_eq!(parabolic_lattice(&model, &b).mul_coordinate(1), parabolic_lattice(&model, &(&b + &one)));
        prop_assert_eq!(deligne_v(&model, &b).mul_coordinate(1), deligne_v(&model, &(&b + &one)));
    }

    #[test]
    fn graded_pieces_sit_at_level_b(seed in any::<u64>(), b in level()) {
        let model = common::random_model(&mut ChaCha8Rng::seed_from_u64(seed), 4, 3);
        let g = graded_piece(&model, &b);
        for s in g.s_eigenvalues() {
            prop_assert_eq!(&s.re, &b);
        }
        prop_assert_eq!(g.n_blocks().iter().sum::<u32>(), g.dim());
    }

    #[test]
    fn nearby_cycles_ignore_integer_shifts(seed in any::<u64>(), k in -3i64..=3) {
        let model = common::random_model(&mut ChaCha8Rng::seed_from_u64(seed), 4, 3);
        for r in model.parts.values() {
            for e in &r.exponents {
                let shifted = &e.beta + &ExactScalar::from_int(k);
                prop_assert_eq!(nearby_cycles(r, &e.beta), nearby_cycles(r, &shifted));
                prop_assert_eq!(nearby_cycles(r, &e.beta), (e.dim, e.log_depth));
            }
        }
    }

    #[test]
    fn descent_undoes_trivial_lift(seed in any::<u64>(), q in 2u32..=3) {
        let model = common::random_model(&mut ChaCha8Rng::seed_from_u64(seed), 4, 1);
        let up = lift_model(&model, q);
        prop_assert_eq!(up.q, q);
        prop_assert_eq!(descend_model(&up, q).unwrap(), model);
    }

    #[test]
    fn descended_graded_piece_scales(seed in any::<u64>(), b in level()) {
        let model = common::random_model(&mut ChaCha8Rng::seed_from_u64(seed), 4, 1);
        let up = lift_model(&model, 2);
        let g = graded_piece_descended(&up, 2, &b).unwrap();
        prop_assert_eq!(&g.n_scale, &rat(1, 2));
        let mut down: Vec<_> = g.s_eigenvalues();
        let mut direct: Vec<_> = graded_piece(&model, &b).s_eigenvalues();
        down.sort();
        direct.sort();
        prop_assert_eq!(down, direct);
    }
}
