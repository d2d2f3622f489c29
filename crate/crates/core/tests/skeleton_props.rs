mod common;

use holodist::blowup::{collapse_blowup, required_k0, FourierTaylor};
use holodist::exponential::ExponentialPart;
use holodist::formal::{analyze, FormalConfig};
use holodist::laurent::Var;
use holodist::parse::parse_operator;
use holodist::polar::rewrite_polar_term;
use holodist::scalar::{rat, ExactScalar};
use holodist::skeleton::{
    bernstein_equation, combine_betas, combine_betas_characterized, skeleton, ExpansionSkeleton,
};
use holodist::term::SymbolicTerm;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bset() -> impl Strategy<Value = Vec<ExactScalar>> {
    prop::sample::subsequence((0i64..6).collect::<Vec<_>>(), 0..=4).prop_flat_map(|slots| {
        let n = slots.len();
        prop::collection::vec(-3i64..=3, n).prop_map(move |shifts| {
            slots
                .iter()
                .zip(&shifts)
                .map(|(s, k)| ExactScalar::new(rat(s + 6 * k, 6), if s % 2 == 0 { rat(0, 1) } else { rat(1, 3) }))
                .collect()
        })
    })
}

fn fourier_taylor() -> impl Strategy<Value = FourierTaylor> {
    prop::collection::vec(((0u32..=6, -7i32..=7), -1.0f64..1.0, -1.0f64..1.0), 1..10)
        .prop_map(|v| FourierTaylor::new(v.into_iter().map(|(k, a, b)| (k, Complex64::new(a, b)))))
}

fn polar_term() -> impl Strategy<Value = SymbolicTerm> {
    (-12i64..12, -4i64..4, -12i64..12, -4i64..4, 0u32..=3, 0u32..=3, any::<bool>()).prop_map(|(a, b, c, d, j, k, phi)| {
        SymbolicTerm {
            var: Var::Y,
            phi: if phi { ExponentialPart::monomial(1, ExactScalar::new(rat(1, 2), rat(1, 3))) } else { ExponentialPart::zero() },
            beta_hol: ExactScalar::new(rat(a, 6), rat(b, 5)),
            beta_anti: ExactScalar::new(rat(c, 6), rat(d, 5)),
            j_log: j,
            k_log: k,
            coeff: ExactScalar::new(rat(3, 2), rat(-1, 4)),
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn bset_formula_matches_characterization(b1 in bset(), b2 in bset()) {
        prop_assert_eq!(combine_betas(&b1, &b2), combine_betas_characterized(&b1, &b2));
    }

    #[test]
    fn bset_is_symmetric_and_inside_the_union(b1 in bset(), b2 in bset()) {
        let b = combine_betas(&b1, &b2);
        prop_assert_eq!(&b, &combine_betas(&b2, &b1));
        for beta in &b {
            prop_assert!(b1.contains(beta) || b2.contains(beta));
        }
    }

    #[test]
    fn blowup_round_trip(f in fourier_taylor()) {
        let c = collapse_blowup(&f, 8).unwrap();
        prop_assert_eq!(c.to_fourier_taylor(), f.clone());
        let max = f.coefficients.keys().map(|&(m, n)| required_k0(m, n)).max().unwrap();
        prop_assert_eq!(c.k0, max);
        for (&k, g) in &c.components {
            for &(a, b) in g.keys() {
                // every piece is y^a ȳ^b |y|^k with the original degree
                let m = (a + b) as i32 + k;
                prop_assert!(f.coefficients.contains_key(&(m as u32, a as i32 - b as i32)));
            }
        }
    }

    #[test]
    fn polar_rewrite_is_pointwise(t in polar_term(), r in 0.1f64..0.9, theta in -3.0f64..3.0) {
        let y = Complex64::from_polar(r, theta);
        let want = common::term_value(y, t.phi.eval(y), t.beta_hol.to_c64(), t.beta_anti.to_c64(), t.j_log, t.k_log, t.coeff.to_c64());
        let got: Complex64 = rewrite_polar_term(&t).iter().map(|p| p.eval(y)).sum();
        prop_assert!((got - want).norm() <= 1e-10 * want.norm());
    }

    #[test]
    fn polar_rewrite_has_one_term_per_log_power(t in polar_term()) {
        let parts = rewrite_polar_term(&t);
        let ls: Vec<u32> = parts.iter().map(|p| p.l).collect();
        prop_assert!(ls.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(ls.iter().all(|&l| l <= t.j_log + t.k_log));
        for p in &parts {
            prop_assert_eq!(&p.frequency, &(&t.beta_hol - &t.beta_anti));
        }
    }
}

#[test]
fn skeleton_json_round_trip_on_random_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let hol = common::random_model(&mut rng, 4, 1);
        let anti = common::random_model(&mut rng, 4, 1);
        let s = skeleton(&hol, &anti);
        assert_eq!(ExpansionSkeleton::from_json(&s.to_json()).unwrap(), s);
        for e in &s.entries {
            assert!(s.phis.contains(&e.phi));
        }
    }
}

#[test]
fn skeleton_of_conjugate_pair_is_diagonal() {
    // hol and anti from the same operator: every part pairs with itself
    let cfg = FormalConfig::default();
    for text in ["T^2*(T - 1/3)", "(T + 1/2)*(x^2*D + 1)", "T^3"] {
        let a = analyze(&parse_operator(text).unwrap(), &cfg).unwrap();
        let s = skeleton(&a.model, &a.model);
        let zero = a.model.parts.get(&ExponentialPart::zero());
        for e in s.entries.iter().filter(|e| e.phi.is_zero()) {
            let coset = zero.and_then(|r| r.entry(&e.beta)).unwrap();
            assert!(e.l_max < coset.log_depth, "{text}: {e:?}");
        }
    }
}

#[test]
fn bernstein_brackets_kill_solutions_up_to_order_j() {
    let cfg = FormalConfig { truncation: 12, ..Default::default() };
    for text in ["T^2*(T - 1/2)", "(T + 1/3)^2*(T - 2/3)", "T*(x^2*D + 1)"] {
        let a = analyze(&parse_operator(text).unwrap(), &cfg).unwrap();
        for phi in a.model.parts.keys() {
            for j in 0..4 {
                let eq = bernstein_equation(&a, phi, j);
                assert!(eq.certified, "{text} phi={phi} j={j}");
                assert_eq!(eq.k_j, j.saturating_sub(1));
                for r in eq.residual_orders.iter().flatten() {
                    assert!(*r >= j as i64, "{text}: residual {r} < {j}");
                }
            }
        }
    }
}
