//! Sample every height-1 and height-2 curve with a hyperbolic stabilizer,
//! fold into the fundamental domain and print the discrepancy table.
//!
//! ```bash
//! cargo run --release --example equidistribution -- 20000
//! ```

use shimura_lab::equidist::{
    default_radius, discrepancy_report, reference_family, sample_curve, OracleConfig, SampleOptions, TestFunction,
};
use shimura_lab::registry::{build_registry, GammaGenerators, RegistryBudget};

fn main() {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let reg = build_registry(&GammaGenerators::default_set(), &RegistryBudget::default()).expect("registry");
    let opts = SampleOptions::default();
    let family = reference_family(&opts.fold, &TestFunction::ALL, &OracleConfig::default());
    for (f, r) in family.functions.iter().zip(&family.reference) {
        println!("reference {:<10} {:.6} +- {:.1e}", f.name(), r.value, r.std_error);
    }
    let batches: Vec<_> = reg
        .curves
        .iter()
        .filter(|c| c.has_hyperbolic)
        .map(|c| sample_curve::<f64>(c, n, default_radius(c.height), 1, &opts).expect("sample"))
        .collect();
    let report = discrepancy_report(&batches, &family).expect("report");
    for row in &report.rows {
        println!("{} height {} h {:>2}  D = {:.3e} +- {:.1e}", row.curve_id, row.height, row.h_value, row.d, row.d_err);
    }
    println!("Spearman(D, height) = {:?}", report.trend);
}
