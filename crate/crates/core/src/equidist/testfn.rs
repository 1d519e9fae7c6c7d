use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fold_point, substream, FoldGenerators};
use crate::real::{Cx, Precision};
use crate::symspace::BallPoint;

/// Bounded functions on the ball, invariant under the stabilizer of the
/// origin in Γ (unit phases and the swap of z₁, z₂). All but `Constant`
/// carry the cutoff (1 − |z|²)².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFunction {
    Constant,
    Radial,
    Product,
    Anisotropy,
    Phase,
}

impl TestFunction {
    pub const ALL: [TestFunction; 5] = [
        TestFunction::Constant,
        TestFunction::Radial,
        TestFunction::Product,
        TestFunction::Anisotropy,
        TestFunction::Phase,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TestFunction::Constant => "constant",
            TestFunction::Radial => "radial",
            TestFunction::Product => "product",
            TestFunction::Anisotropy => "anisotropy",
            TestFunction::Phase => "phase",
        }
    }

    pub fn eval(self, p: &BallPoint<f64>) -> f64 {
        let a = p.z1.norm_sqr();
        let b = p.z2.norm_sqr();
        let s = a + b;
        let cut = (1.0 - s) * (1.0 - s);
        match self {
            TestFunction::Constant => 1.0,
            TestFunction::Radial => s * cut,
            TestFunction::Product => a * b * cut,
            TestFunction::Anisotropy => (a - b) * (a - b) * cut,
            TestFunction::Phase => {
                let w = p.z1.mul(&p.z2.conj());
                let w2 = w.mul(&w);
                w2.mul(&w2).re * cut
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub value: f64,
    pub std_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub nodes_per_replicate: usize,
    pub replicates: usize,
    /// Radius of the ball covering the fundamental-domain approximation.
    pub radius: f64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> OracleConfig {
        OracleConfig { nodes_per_replicate: 1 << 16, replicates: 16, radius: 4.5, seed: 0x5eed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleInfo {
    pub config: OracleConfig,
    pub fold_corner_bound: u32,
    pub total_nodes: usize,
    /// Fraction of nodes lying in the domain.
    pub accepted_fraction: f64,
    /// Estimated volume of the domain inside the covering ball.
    pub domain_volume: f64,
    /// Share of the domain's mass in the outermost half unit of radius.
    pub outer_shell_mass: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionFamily {
    pub functions: Vec<TestFunction>,
    pub reference: Vec<Reference>,
    pub oracle: Option<OracleInfo>,
}

const PRIMES: [u8; 4] = [2, 3, 5, 7];

#[derive(Clone, Default)]
struct Sums {
    w: f64,
    wf: Vec<f64>,
    outer: f64,
    accepted: usize,
}

/// Averages of each function over the Dirichlet domain D at the origin,
/// by randomized Halton quadrature on the ball of the configured radius.
///
/// Coordinates: r = R·u₀ with weight sinh³(r/2)cosh(r/2) (the radial part
/// of the invariant volume), |z₁|² = tanh²(r/2)·u₁ and uniform phases;
/// nodes outside D are dropped. Each replicate applies an independent
/// Cranley–Patterson shift; the spread across replicates gives the error.
pub fn reference_family(fold: &FoldGenerators, functions: &[TestFunction], cfg: &OracleConfig) -> TestFunctionFamily {
    let gens = fold.mats::<f64>(Precision::digits(15));
    let k = functions.len();
    let big_r = cfg.radius;
    let shell = (big_r - 0.5).max(0.0);
    let chunk = 4096;
    let chunks = cfg.nodes_per_replicate.div_ceil(chunk);
    let mut estimates: Vec<Vec<f64>> = Vec::with_capacity(cfg.replicates);
    let mut total = Sums { wf: vec![0.0; k], ..Sums::default() };
    for rep in 0..cfg.replicates {
        let mut rng = substream(cfg.seed, rep as u64);
        let shift: [f64; 4] = std::array::from_fn(|_| rng.gen());
        let parts: Vec<Sums> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut s = Sums { wf: vec![0.0; k], ..Sums::default() };
                let end = ((c + 1) * chunk).min(cfg.nodes_per_replicate);
                for i in c * chunk..end {
                    let u: [f64; 4] = std::array::from_fn(|d| (halton::number(PRIMES[d], i + 1) + shift[d]).fract());
                    let r = big_r * u[0];
                    let w = (r / 2.0).sinh().powi(3) * (r / 2.0).cosh();
                    let rho2 = (r / 2.0).tanh().powi(2);
                    let m1 = (rho2 * u[1]).sqrt();
                    let m2 = (rho2 * (1.0 - u[1])).sqrt();
                    let (a, b) = (std::f64::consts::TAU * u[2], std::f64::consts::TAU * u[3]);
                    let x = BallPoint { z1: Cx::new(m1 * a.cos(), m1 * a.sin()), z2: Cx::new(m2 * b.cos(), m2 * b.sin()) };
                    if fold_point(&x, &gens, 0).budget_exceeded {
                        continue;
                    }
                    s.accepted += 1;
                    s.w += w;
                    if r > shell {
                        s.outer += w;
                    }
                    for (j, f) in functions.iter().enumerate() {
                        s.wf[j] += w * f.eval(&x);
                    }
                }
                s
            })
            .collect();
        let mut s = Sums { wf: vec![0.0; k], ..Sums::default() };
        for p in parts {
            s.w += p.w;
            s.outer += p.outer;
            s.accepted += p.accepted;
            for j in 0..k {
                s.wf[j] += p.wf[j];
            }
        }
        estimates.push(s.wf.iter().map(|v| v / s.w).collect());
        total.w += s.w;
        total.outer += s.outer;
        total.accepted += s.accepted;
        for j in 0..k {
            total.wf[j] += s.wf[j];
        }
    }
    let reps = cfg.replicates as f64;
    let reference = (0..k)
        .map(|j| {
            let mean = estimates.iter().map(|e| e[j]).sum::<f64>() / reps;
            let var = if cfg.replicates > 1 {
                estimates.iter().map(|e| (e[j] - mean).powi(2)).sum::<f64>() / (reps - 1.0)
            } else {
                f64::NAN
            };
            Reference { value: mean, std_error: (var / reps).sqrt() }
        })
        .collect();
    let total_nodes = cfg.nodes_per_replicate * cfg.replicates;
    // ∫ w dr over [0, R] is sinh⁴(R/2)/2; the invariant volume of B_R is 8π²sinh⁴(R/2)
    let mean_w = total.w / total_nodes as f64;
    let domain_volume = mean_w * big_r * 16.0 * std::f64::consts::PI.powi(2);
    TestFunctionFamily {
        functions: functions.to_vec(),
        reference,
        oracle: Some(OracleInfo {
            config: cfg.clone(),
            fold_corner_bound: fold.corner_bound,
            total_nodes,
            accepted_fraction: total.accepted as f64 / total_nodes as f64,
            domain_volume,
            outer_shell_mass: total.outer / total.w,
        }),
    }
}
