//! Collapse of Fourier–Taylor data on the real blow-up to `Σ g_k |y|^k`.

use holodist::blowup::{brute_force_k0, collapse_blowup, FourierTaylor};
use num_complex::Complex64;

fn main() -> holodist::Result<()> {
    let one = Complex64::new(1.0, 0.0);
    let f = FourierTaylor::new([((1, 4), one), ((2, 0), one), ((2, 1), Complex64::new(0.0, 2.0))]);
    let c = collapse_blowup(&f, 8)?;
    println!("k0 = {} (brute force {:?})", c.k0, brute_force_k0(&f, 8));
    for (k, g) in &c.components {
        println!("|y|^{k}: {g:?}");
    }
    let y = Complex64::from_polar(0.4, 0.7);
    println!("round trip at {y}: {} vs {}", f.eval(y.norm(), y.arg()), c.eval(y));
    Ok(())
}
