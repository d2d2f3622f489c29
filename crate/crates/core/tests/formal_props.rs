use holodist::exponential::ExponentialPart;
use holodist::formal::{analyze, descend_model, lift_model, FormalConfig};
use holodist::laurent::Var;
use holodist::operator::{DiffOp, Form};
use holodist::parse::{parse_operator, print_operator};
use holodist::poly::Poly;
use holodist::scalar::{rat, ExactScalar};
use holodist::term::{apply_to_sum, SymbolicTerm};
use num_complex::Complex64;
use proptest::prelude::*;

fn cfg() -> FormalConfig {
    FormalConfig { truncation: 8, ..Default::default() }
}

fn scalar() -> impl Strategy<Value = ExactScalar> {
    (-6i64..=6, 1i64..=4, -2i64..=2).prop_map(|(n, d, im)| ExactScalar::new(rat(n, d), rat(im, 3)))
}

/// Text of a random operator `Σ c x^k T^j`.
fn operator_text() -> impl Strategy<Value = String> {
    prop::collection::vec((-5i64..=5, 1i64..=3, -3i64..=3, 0u32..=3), 1..5).prop_map(|terms| {
        terms
            .iter()
            .map(|(n, d, k, j)| format!("({n}/{d})*x^({k})*T^{j}"))
            .collect::<Vec<_>>()
            .join(" + ")
    })
}

fn laurent_at(c: &holodist::laurent::LaurentPoly, x: Complex64) -> Complex64 {
    c.terms().map(|(e, a)| a.to_c64() * x.powi(e as i32)).sum()
}

/// `Σ c_j(x) ∂^j e^x`.
fn d_form_on_exp(op: &DiffOp, x: Complex64) -> Complex64 {
    op.convert_form(Form::D).coeffs().iter().map(|c| laurent_at(c, x) * x.exp()).sum()
}

/// `Σ c_j(x) θ^j e^x` with `θ^j e^x = Σ_i S(j,i) x^i e^x`.
fn theta_form_on_exp(op: &DiffOp, x: Complex64) -> Complex64 {
    const STIRLING: [[f64; 4]; 4] = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 1.0, 1.0, 0.0], [0.0, 1.0, 3.0, 1.0]];
    op.to_theta()
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let poly: Complex64 = (0..=j).map(|i| STIRLING[j][i] * x.powi(i as i32)).sum();
            laurent_at(c, x) * poly * x.exp()
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn operator_text_round_trip(text in operator_text()) {
        let p = parse_operator(&text).unwrap();
        let printed = print_operator(&p);
        prop_assert_eq!(parse_operator(&printed).unwrap(), p);
    }

    #[test]
    fn theta_and_d_forms_act_alike(text in operator_text(), re in 0.2f64..1.5, im in -1.0f64..1.0) {
        let p = parse_operator(&text).unwrap();
        let x = Complex64::new(re, im);
        let a = theta_form_on_exp(&p, x);
        let b = d_form_on_exp(&p, x);
        prop_assert!((a - b).norm() <= 1e-9 * (1.0 + a.norm()));
    }

    #[test]
    fn composition_is_associative(a in operator_text(), b in operator_text(), c in operator_text()) {
        let (a, b, c) = (parse_operator(&a).unwrap(), parse_operator(&b).unwrap(), parse_operator(&c).unwrap());
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn composition_acts_as_application(a in operator_text(), b in operator_text(), beta in scalar()) {
        let (a, b) = (parse_operator(&a).unwrap(), parse_operator(&b).unwrap());
        let t = vec![SymbolicTerm::power_log(Var::X, beta, 1, ExactScalar::one())];
        let lhs = apply_to_sum(&a.compose(&b), &t).unwrap();
        let rhs = apply_to_sum(&a, &apply_to_sum(&b, &t).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// `∏ (θ - β_i)^{m_i}` with pairwise non-congruent `β_i`.
    #[test]
    fn regular_products(slots in prop::sample::subsequence((0i64..6).collect::<Vec<_>>(), 1..=3),
                        shifts in prop::collection::vec(-2i64..=2, 3),
                        mults in prop::collection::vec(1u32..=3, 3)) {
        let mut theta_poly = Poly::constant(ExactScalar::one());
        let mut want = Vec::new();
        for (i, s) in slots.iter().enumerate() {
            let beta = ExactScalar::from_frac(s + 6 * shifts[i], 6);
            theta_poly = theta_poly.mul(&Poly::linear_root(&beta).pow(mults[i]));
            want.push((beta, mults[i]));
        }
        let p = DiffOp::from_theta_poly(Var::X, &theta_poly);
        let a = analyze(&p, &cfg()).unwrap();
        prop_assert_eq!(a.model.q, 1);
        let r = &a.model.parts[&ExponentialPart::zero()];
        prop_assert_eq!(r.rank, p.order());
        for (beta, m) in want {
            let e = r.entry(&beta).unwrap();
            prop_assert_eq!(e.log_depth, m);
            prop_assert_eq!(e.jordan.clone(), vec![m]);
            prop_assert!(beta.integer_difference(&e.beta).unwrap() >= 0);
        }
        prop_assert!(a.certified());
    }

    /// `(θ - β)(θ + c x^{-r})` has parts `0` and `(c/r) y^{-r}`.
    #[test]
    fn one_exponential_factor(num in prop_oneof![-4i64..=-1, 1i64..=4], den in 1i64..=3, r in 1i64..=3, beta in scalar()) {
        let c = ExactScalar::from_frac(num, den);
        let irregular = DiffOp::theta(Var::X).add(&DiffOp::multiplication(Var::X, -r, c.clone()));
        let p = DiffOp::from_theta_poly(Var::X, &Poly::linear_root(&beta)).compose(&irregular);
        let a = analyze(&p, &cfg()).unwrap();
        prop_assert_eq!(a.model.q, 1);
        prop_assert_eq!(a.model.total_rank(), 2);
        let phi = ExponentialPart::monomial(r as u32, &c * &ExactScalar::from_frac(1, r));
        prop_assert!(a.model.parts.contains_key(&phi));
        prop_assert!(a.model.parts.contains_key(&ExponentialPart::zero()));
        prop_assert!(a.certified());
    }

    #[test]
    fn ramified_operator_has_ramified_parts(num in prop_oneof![-4i64..=-1, 1i64..=4], r in 1i64..=2, q in 2u32..=3) {
        let c = ExactScalar::from_int(num);
        let p = DiffOp::theta(Var::X).add(&DiffOp::multiplication(Var::X, -r, c.clone()));
        let base = analyze(&p, &cfg()).unwrap().model;
        let up = analyze(&p.ramify(q), &cfg()).unwrap().model;
        prop_assert_eq!(up.q, 1);
        let lifted = lift_model(&base, q);
        prop_assert_eq!(lifted.parts.keys().collect::<Vec<_>>(), up.parts.keys().collect::<Vec<_>>());
        prop_assert_eq!(descend_model(&lifted, q).unwrap(), base);
    }
}
