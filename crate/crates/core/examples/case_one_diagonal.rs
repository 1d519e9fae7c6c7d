//! The diagonal curve z ↦ (z, z) and a twisted one z ↦ (ωz, σ(ω)z) on the
//! Hilbert modular surface of ℚ(√5), with their stabilizers in SL₂(ℤ[ω]).
//!
//! ```bash
//! cargo run --release --example case_one_diagonal
//! ```

use shimura_lab::registry::{diagonal_curve_case_one, surface_generators, Sl2Quad};

fn main() {
    let gens = surface_generators();
    let twists = [
        ("identity", Sl2Quad::identity()),
        ("diag(omega^2, 1)", Sl2Quad::from_ints([[(1, 1), (0, 0)], [(0, 0), (1, 0)]])),
    ];
    for (name, mu) in twists {
        let curve = diagonal_curve_case_one(&mu, &gens, 4).expect("totally positive determinant");
        println!(
            "{name}: {} stabilizer elements among {} words; embeddings {:?}",
            curve.stabilizer.len(),
            curve.words_examined,
            curve.mu_embedded
        );
        for g in curve.stabilizer.iter().skip(1).take(3) {
            println!("  {:?}", g.embeddings());
        }
    }
}
