//! Covolume of the stabilizer of a few curves by counting stabilizer-orbit
//! points of the disk centre, at two radii.
//!
//! ```bash
//! cargo run --release --example volume
//! ```

use std::f64::consts::PI;

use shimura_lab::equidist::{estimate_volume, VolumeOptions};
use shimura_lab::registry::{build_registry, GammaGenerators, RegistryBudget};

fn main() {
    let budget = RegistryBudget { height: 1, ..RegistryBudget::default() };
    let reg = build_registry(&GammaGenerators::default_set(), &budget).expect("registry");
    for c in &reg.curves {
        for radius in [4.0, 4.5] {
            match estimate_volume(c, radius, 3, &VolumeOptions::default()) {
                Ok(v) => println!(
                    "{} v={} R={radius}: {:.4} +- {:.4} ({:.3} pi), gap {:.3}, converged {}, dirichlet {:.3}",
                    c.id,
                    c.defining_vector,
                    v.value,
                    v.std_error,
                    v.value / PI,
                    v.truncation_gap,
                    v.converged,
                    v.dirichlet_value
                ),
                Err(e) => println!("{}: {e}", c.id),
            }
        }
    }
}
