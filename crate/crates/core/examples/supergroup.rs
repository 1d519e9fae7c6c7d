//! Bracket-generate from h plus one random element outside h, in both
//! models, and show the centralizer element that stays inside a proper
//! subalgebra.
//!
//! ```bash
//! cargo run --release --example supergroup
//! ```

use shimura_lab::liegen::{generated_subalgebra, supergroup_check, Case, LieAlgebraModel};

fn main() {
    for case in [Case::One, Case::Two] {
        let model = LieAlgebraModel::new(case);
        let report = supergroup_check(&model, 100, 2024).unwrap();
        let dims: std::collections::BTreeMap<usize, usize> =
            report.trials.iter().fold(Default::default(), |mut m, t| {
                *m.entry(t.dimension).or_default() += 1;
                m
            });
        println!("{case:?}: dim g = {}, dim h = {}, generated dimensions {dims:?}", report.dim_g, report.dim_h);
    }
    let model = LieAlgebraModel::new(Case::Two);
    let z = model.combine(&[2, 1, 0, 0, 0, 0, 0, 0]);
    let mut seeds = model.h_basis.clone();
    seeds.push(z);
    println!("h + diag(2i, -i, -i) generates dimension {}", generated_subalgebra(&model, &seeds).unwrap().dim);
}
