//! Annulus masses of `|y|^{2β}` decide local integrability at `Re β = -1`.

use holodist::mellin::l1::{l1_profile, l1_verdict};
use holodist::mellin::ModelDistribution;
use holodist::scalar::ExactScalar;

fn main() {
    for (num, den) in [(-2, 5), (-9, 10), (-11, 10), (-6, 5)] {
        let v = ModelDistribution::power_log(ExactScalar::from_frac(num, den), 0);
        let profile = l1_profile(&v, 0.5, 8);
        let ratio = profile[profile.len() - 2] / profile[profile.len() - 1];
        println!("beta = {num}/{den}: successive mass ratio {ratio:.4}, {:?}", l1_verdict(&profile, 1.2));
    }
}
