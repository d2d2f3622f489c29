//! Kashiwara–Malgrange and parabolic lattices, graded pieces and the
//! minimal extension.

use holodist::filtration::{graded_piece, minimal_extension, report};
use holodist::formal::{analyze, FormalConfig};
use holodist::parse::parse_operator;
use holodist::scalar::rat;

fn main() -> holodist::Result<()> {
    let p = parse_operator("(T + 1/3)^2*(x^2*D + 1)")?;
    let a = analyze(&p, &FormalConfig::default())?;
    let b = rat(-1, 3);
    println!("{}", serde_json::to_string_pretty(&report(&a.model, &b)).unwrap());
    let g = graded_piece(&a.model, &b);
    println!("gr dim {}  S eigenvalues {:?}  N blocks {:?}", g.dim(), g.s_eigenvalues().iter().map(|s| s.to_string()).collect::<Vec<_>>(), g.n_blocks());
    let m = minimal_extension(&a.model);
    println!("minimal extension from V and from P agree: {}", m.equal);
    Ok(())
}
