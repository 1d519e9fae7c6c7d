//! Find the stabilizer of the line through (1, 0, 0), pick a hyperbolic
//! element and recover the line from it.
//!
//! ```bash
//! cargo run --release --example stabilizer_roundtrip
//! ```

use shimura_lab::hermitian::{HermitianForm, IsometryMatrix, LatticeVector};
use shimura_lab::registry::{classify_stabilizer_element, rational_line_from_element, stabilizer_generators, ElementKind};

fn main() {
    let h = HermitianForm::standard();
    let v = LatticeVector::from_pairs([(1, 0), (0, 0), (0, 0)]);
    let search = stabilizer_generators(&h, &v, 3).expect("search");
    println!("{} stabilizer elements with entries up to 3", search.elements.len());

    let witness = IsometryMatrix::from_gauss([[(1, 0), (0, 0), (0, 0)], [(0, 0), (2, 1), (2, 0)], [(0, 0), (2, 0), (2, -1)]]);
    assert!(search.elements.contains(&witness));
    println!("seed witness: {:?}, line {}", classify_stabilizer_element(&witness), rational_line_from_element(&h, &witness).unwrap());
    for g in search.elements.iter().filter(|g| classify_stabilizer_element(g) == ElementKind::Hyperbolic).take(3) {
        let line = rational_line_from_element(&h, g).expect("hyperbolic elements fix a line");
        println!("trace {}  ->  line {}", g.trace(), line);
    }
}
