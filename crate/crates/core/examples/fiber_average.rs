//! Average φ_α over the fiber of the projectivized tangent bundle and
//! compare with half the trace of α, in both cases and at two orders.
//!
//! ```bash
//! cargo run --release --example fiber_average
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shimura_lab::symspace::{fiber_average, Case, OneOneForm};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let forms: Vec<OneOneForm<f64>> = (0..100)
        .map(|_| {
            let mut u = || rng.gen_range(-5.0..5.0);
            OneOneForm::new(u(), u(), (u(), u()))
        })
        .collect();
    for case in [Case::One, Case::Two] {
        for order in [8, 16, 32] {
            let worst = forms
                .iter()
                .map(|a| (fiber_average(a, case, order) - a.trace() / 2.0).abs())
                .fold(0.0, f64::max);
            println!("{case:?} order {order:>2}: max |average - trace/2| = {worst:.2e}");
        }
    }
}
