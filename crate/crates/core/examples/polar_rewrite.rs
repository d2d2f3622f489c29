//! Rewriting `y^β' ȳ^β'' (log y)^j (log ȳ)^k` in polar form.

use holodist::laurent::Var;
use holodist::polar::rewrite_polar_term;
use holodist::scalar::ExactScalar;
use holodist::term::SymbolicTerm;
use num_complex::Complex64;

fn main() {
    let t = SymbolicTerm {
        var: Var::Y,
        phi: Default::default(),
        beta_hol: ExactScalar::from_frac(1, 2),
        beta_anti: ExactScalar::from_frac(-1, 3),
        j_log: 2,
        k_log: 1,
        coeff: ExactScalar::one(),
    };
    let parts = rewrite_polar_term(&t);
    for p in &parts {
        println!("beta = {}  L^{}  frequency = {}  angular = {:?}", p.beta, p.l, p.frequency, p.angular.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    }
    let y = Complex64::from_polar(0.3, 1.1);
    let lhs = t.eval(y);
    let rhs: Complex64 = parts.iter().map(|p| p.eval(y)).sum();
    println!("at y = {y}: direct {lhs}, polar {rhs}");
}
