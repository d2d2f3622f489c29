use holodist::parse::{parse_distribution, print_distribution};
use num_complex::Complex64;
use proptest::prelude::*;

/// One product: text and its value at `y`.
#[derive(Clone, Debug)]
struct Piece {
    a: u32,
    b: u32,
    c: (i32, i32),
    abs_num: i32,
    l: u32,
    exp: Option<i32>,
    gauss: bool,
}

impl Piece {
    fn text(&self) -> String {
        let mut f = vec![format!("({} + {}*i)*y^{}*conj(y)^{}", self.c.0, self.c.1, self.a, self.b)];
        if self.abs_num != 0 {
            f.push(format!("abs(y)^({}/5)", self.abs_num));
        }
        if self.l > 0 {
            f.push(format!("L^{}", self.l));
        }
        if let Some(k) = self.exp {
            f.push(format!("exp({k}/y - {k}/conj(y))"));
        }
        if self.gauss {
            f.push("gauss(y)".into());
        }
        f.join("*")
    }

    fn value(&self, y: Complex64) -> Complex64 {
        let r = y.norm();
        let mut v = Complex64::new(self.c.0 as f64, self.c.1 as f64) * y.powu(self.a) * y.conj().powu(self.b);
        v *= r.powf(self.abs_num as f64 / 5.0) * (-2.0 * r.ln()).powi(self.l as i32);
        if let Some(k) = self.exp {
            let phi = k as f64 / y;
            v *= (phi - phi.conj()).exp();
        }
        if self.gauss {
            v *= (-r * r).exp();
        }
        v
    }
}

fn piece() -> impl Strategy<Value = Piece> {
    (0u32..=2, 0u32..=2, (-3i32..=3, -3i32..=3), -6i32..=6, 0u32..=2, prop::option::of(-2i32..=2), any::<bool>())
        .prop_filter("nonzero", |p| p.2 != (0, 0) && p.5 != Some(0))
        .prop_map(|(a, b, c, abs_num, l, exp, gauss)| Piece { a, b, c, abs_num, l, exp, gauss })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn parsed_distribution_evaluates_like_its_text(pieces in prop::collection::vec(piece(), 1..4), r in 0.1f64..0.9, t in -3.0f64..3.0) {
        let text: Vec<String> = pieces.iter().map(Piece::text).collect();
        let v = parse_distribution(&text.join(" + ")).unwrap();
        let y = Complex64::from_polar(r, t);
        let want: Complex64 = pieces.iter().map(|p| p.value(y)).sum();
        let got = v.eval(y);
        prop_assert!((got - want).norm() <= 1e-10 * (1.0 + want.norm()), "{} vs {}", got, want);
    }

    #[test]
    fn distribution_text_round_trip(pieces in prop::collection::vec(piece(), 1..4)) {
        let text: Vec<String> = pieces.iter().map(Piece::text).collect();
        let v = parse_distribution(&text.join(" + ")).unwrap();
        prop_assert_eq!(parse_distribution(&print_distribution(&v)).unwrap(), v);
    }
}
