//! Enumerate curves on the Picard modular surface up to a coordinate height
//! and print one line per Γ-class.
//!
//! ```bash
//! cargo run --release --example enumerate_curves -- 2
//! ```

use std::time::Instant;

use shimura_lab::registry::{build_registry, GammaGenerators, RegistryBudget};

fn main() {
    let height = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let word_bound = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(RegistryBudget::default().word_bound);
    let entry_bound = std::env::args().nth(3).and_then(|s| s.parse().ok()).unwrap_or(RegistryBudget::default().entry_bound);
    let budget = RegistryBudget { height, word_bound, entry_bound, ..RegistryBudget::default() };
    let start = Instant::now();
    let reg = build_registry(&GammaGenerators::default_set(), &budget).expect("registry");
    println!(
        "{} curves ({} vectors merged) in {:.2?}",
        reg.curves.len(),
        reg.dedup_policy.merged,
        start.elapsed()
    );
    for c in &reg.curves {
        println!(
            "{}  v={}  h={}  class={}  stab={}{}  hyperbolic={}",
            c.id,
            c.defining_vector,
            c.h_value,
            c.residue_class,
            c.stabilizer_gens.len(),
            if c.stabilizer_truncated { "+" } else { "" },
            c.has_hyperbolic,
        );
    }
}
