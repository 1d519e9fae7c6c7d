//! Self-intersection from periods and the ratio C²/vol² for a sequence
//! whose normalized periods tend to those of the Kähler class.
//!
//! ```bash
//! cargo run --release --example self_intersection
//! ```

use rug::Rational;
use shimura_lab::cohomology::{CohomologyModel, PeriodVector, Scalar};
use shimura_lab::linalg::Matrix;

fn main() {
    let r = |s: &str| <Rational as Scalar>::parse(s).unwrap();
    let gram = Matrix::from_rows(vec![
        vec![r("3"), r("0"), r("0"), r("0")],
        vec![r("0"), r("-1"), r("0"), r("0")],
        vec![r("0"), r("0"), r("-2"), r("1")],
        vec![r("0"), r("0"), r("1"), r("-2")],
    ]);
    let model = CohomologyModel::new(gram).unwrap().with_cusp_block(vec![2, 3]).unwrap();
    println!("lambda = {}, limit 1/lambda = {}", model.lambda(), model.limit_ratio());

    let seq: Vec<PeriodVector<Rational>> = (1..=8i64)
        .map(|k| {
            let a = 10i64.pow(k as u32 / 2) * k;
            PeriodVector::new(vec![Rational::from(a), Rational::from(k), Rational::from(1), Rational::from(-k)])
        })
        .collect();
    for (p, ratio) in seq.iter().zip(model.asymptotic_ratio(&seq).unwrap()) {
        let c2 = model.self_intersection(p).unwrap();
        let class = model.poincare_dual(p).unwrap();
        let proj = model.cusp_projection(&class).unwrap();
        println!(
            "vol {:>9}  C^2 = {:<14} ratio {:.10}  (pC)^2 - C^2 = {}",
            p.volume().to_string(),
            c2.to_string(),
            ratio.to_f64(),
            Rational::from(&model.square(&proj) - &c2)
        );
    }
}
