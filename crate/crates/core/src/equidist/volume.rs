//! Covolume of a curve's stabilizer acting on its disk.
//!
//! For Δ acting on 𝔻 with fundamental domain F and N(x) = #{δ : d(δx, 0) ≤ R},
//! unfolding gives ∫_{D_R(0)} dA/N = area{y ∈ F : N(y) > 0}, which increases
//! to area(F) with R. N(x) = s·#{orbit points of 0 within R of x}, s the
//! order of the stabilizer of 0 in Δ acting on 𝔻.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{substream, EquidistError, CHUNK};
use crate::real::{Cx, Mat3, Precision};
use crate::registry::{ShimuraCurveRecord, VolumeEstimate};

type C = Cx<f64>;
type M2 = [[C; 2]; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeOptions {
    pub samples: usize,
    pub bootstrap: usize,
    pub max_orbit: usize,
    /// The orbit search explores out to 2R plus this margin.
    pub reach_slack: f64,
}

impl Default for VolumeOptions {
    fn default() -> VolumeOptions {
        VolumeOptions { samples: 4096, bootstrap: 200, max_orbit: 2_000_000, reach_slack: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeResult {
    pub value: f64,
    pub std_error: f64,
    pub radius: f64,
    /// The same estimator at radius R − 1.
    pub coarse_value: f64,
    /// Independent estimate: area of the Dirichlet domain at 0 inside D_R,
    /// divided by the order of the stabilizer of 0.
    pub dirichlet_value: f64,
    pub orbit_points: usize,
    pub center_stabilizer: usize,
    /// value − coarse_value: the estimator increases to the covolume, so this
    /// indicates how much truncation remains.
    pub truncation_gap: f64,
    /// The truncation gap is at most a tenth of the value.
    pub converged: bool,
    /// The generated group is finite: the estimate grows with R.
    pub unbounded: bool,
    pub orbit_truncated: bool,
}

impl VolumeResult {
    pub fn estimate(&self) -> VolumeEstimate {
        VolumeEstimate {
            value: self.value,
            std_error: self.std_error,
            radius: self.radius,
            truncation_gap: self.truncation_gap,
            converged: self.converged,
        }
    }

}

fn inv3(m: &Mat3<f64>) -> Mat3<f64> {
    let c = |i: usize, j: usize| {
        let (i1, i2) = ((i + 1) % 3, (i + 2) % 3);
        let (j1, j2) = ((j + 1) % 3, (j + 2) % 3);
        m[i1][j1].mul(&m[i2][j2]).sub(&m[i1][j2].mul(&m[i2][j1]))
    };
    let det = m[0][0].mul(&c(0, 0)).add(&m[0][1].mul(&c(0, 1))).add(&m[0][2].mul(&c(0, 2)));
    std::array::from_fn(|i| std::array::from_fn(|j| c(j, i).div(&det)))
}

fn m2_mul(a: &M2, b: &M2) -> M2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]))))
}

fn m2_inv(a: &M2) -> M2 {
    let det = a[0][0].mul(&a[1][1]).sub(&a[0][1].mul(&a[1][0]));
    [[a[1][1].div(&det), a[0][1].neg().div(&det)], [a[1][0].neg().div(&det), a[0][0].div(&det)]]
}

fn image_of_zero(m: &M2) -> C {
    m[0][1].div(&m[1][1])
}

/// cosh²(d(p, q)/2) on the unit disk.
fn cosh2_half(p: &C, q: &C) -> f64 {
    let num = C::new(1.0, 0.0).sub(&p.conj().mul(q)).norm_sqr();
    num / ((1.0 - p.norm_sqr()) * (1.0 - q.norm_sqr()))
}

fn dist0(q: &C) -> f64 {
    2.0 * (1.0 / (1.0 - q.norm_sqr())).sqrt().acosh()
}

const CELL: f64 = 1e-8;
const SAME: f64 = 1e-10;

struct Orbit {
    points: Vec<C>,
    center_stabilizer: usize,
    truncated: bool,
    max_dist: f64,
}

fn key(q: &C) -> (i64, i64) {
    ((q.re / CELL).round() as i64, (q.im / CELL).round() as i64)
}

fn lookup(grid: &HashMap<(i64, i64), Vec<usize>>, pts: &[C], q: &C) -> Option<usize> {
    let (a, b) = key(q);
    for da in -1..=1 {
        for db in -1..=1 {
            if let Some(ids) = grid.get(&(a + da, b + db)) {
                for &i in ids {
                    if pts[i].sub(q).norm_sqr() < SAME * SAME {
                        return Some(i);
                    }
                }
            }
        }
    }
    None
}

/// Orbit of 0 under the group generated by `gens` out to distance `reach`.
fn orbit(gens: &[M2], reach: f64, max_points: usize) -> Orbit {
    let mut sym: Vec<M2> = Vec::new();
    for g in gens {
        sym.push(*g);
        sym.push(m2_inv(g));
    }
    let id: M2 = [[C::new(1.0, 0.0), C::new(0.0, 0.0)], [C::new(0.0, 0.0), C::new(1.0, 0.0)]];
    let mut elems = vec![id];
    let mut pts = vec![C::new(0.0, 0.0)];
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    grid.entry(key(&pts[0])).or_default().push(0);
    let mut angles = BTreeSet::new();
    angles.insert(0i64);
    let mut queue = VecDeque::from([0usize]);
    let mut truncated = false;
    let mut max_dist: f64 = 0.0;
    while let Some(i) = queue.pop_front() {
        for g in &sym {
            let e = m2_mul(g, &elems[i]);
            let q = image_of_zero(&e);
            if let Some(j) = lookup(&grid, &pts, &q) {
                // elems[j]⁻¹·e fixes 0 and rotates by arg(k₀₀/k₁₁)
                let k = m2_mul(&m2_inv(&elems[j]), &e);
                let rot = k[0][0].div(&k[1][1]);
                let turns = rot.im.atan2(rot.re) / std::f64::consts::TAU;
                let t = (turns.rem_euclid(1.0) * 1e6).round() as i64 % 1_000_000;
                angles.insert(t);
                continue;
            }
            let d = dist0(&q);
            if !d.is_finite() || d > reach {
                continue;
            }
            if pts.len() >= max_points {
                truncated = true;
                continue;
            }
            max_dist = max_dist.max(d);
            let idx = pts.len();
            pts.push(q);
            elems.push(e);
            grid.entry(key(&q)).or_default().push(idx);
            queue.push_back(idx);
        }
    }
    Orbit { points: pts, center_stabilizer: angles.len(), truncated, max_dist }
}

/// Stabilizer generators as Möbius maps of the curve's disk: the block of
/// g⁻¹γg acting on (z, 1), g the stored conjugator.
fn disk_generators(record: &ShimuraCurveRecord) -> Result<Vec<M2>, EquidistError> {
    let g = record
        .conjugator_mat3::<f64>(Precision::digits(15))
        .ok_or_else(|| EquidistError::NotSampled(record.id.clone()))?;
    let gi = inv3(&g);
    Ok(record
        .stabilizer_gens
        .iter()
        .filter(|s| !s.is_identity())
        .map(|s| {
            let s = s.to_mat3::<f64>(Precision::digits(15));
            let m = crate::real::mat3_mul(&gi, &crate::real::mat3_mul(&s, &g));
            [[m[1][1], m[1][2]], [m[2][1], m[2][2]]]
        })
        .collect())
}

/// vol(Δ\𝔻) ≈ area(D_R)·E[1/N] over points uniform in D_R, with a
/// bootstrap standard error.
pub fn estimate_volume(
    record: &ShimuraCurveRecord,
    radius: f64,
    seed: u64,
    opts: &VolumeOptions,
) -> Result<VolumeResult, EquidistError> {
    if record.stabilizer_gens.is_empty() {
        return Err(EquidistError::NoStabilizer);
    }
    if !(radius > 1.0 && radius.is_finite()) {
        return Err(EquidistError::InvalidArgument(format!("radius must exceed 1, got {radius}")));
    }
    if opts.samples < 2 {
        return Err(EquidistError::InvalidArgument("need at least 2 samples".into()));
    }
    let gens = disk_generators(record)?;
    let orb = orbit(&gens, 2.0 * radius + opts.reach_slack, opts.max_orbit);
    let s = orb.center_stabilizer as f64;
    let c_fine = (radius / 2.0).cosh().powi(2);
    let coarse_r = radius - 1.0;
    let c_coarse = (coarse_r / 2.0).cosh().powi(2);
    let cosh_r = radius.cosh();
    let chunks = opts.samples.div_ceil(CHUNK);
    // per sample: (1/N at R, Some(1/N at R − 1) if inside the smaller disk,
    // whether 0 is the nearest orbit point)
    let vals: Vec<(f64, Option<f64>, bool)> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = substream(seed, c as u64);
            let m = CHUNK.min(opts.samples - c * CHUNK);
            let pts = &orb.points;
            (0..m)
                .map(move |_| {
                    let u: f64 = rng.gen();
                    let th: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
                    let r = (1.0 + u * (cosh_r - 1.0)).acosh();
                    let rho = (r / 2.0).tanh();
                    let x = C::new(rho * th.cos(), rho * th.sin());
                    let (mut nf, mut nc) = (0usize, 0usize);
                    let c0 = 1.0 / (1.0 - x.norm_sqr());
                    let mut nearest = true;
                    for q in pts {
                        let c2 = cosh2_half(&x, q);
                        if c2 < c0 * (1.0 - 1e-12) {
                            nearest = false;
                        }
                        if c2 <= c_fine {
                            nf += 1;
                            if c2 <= c_coarse {
                                nc += 1;
                            }
                        }
                    }
                    let fine = 1.0 / (s * nf.max(1) as f64);
                    let coarse = (r <= coarse_r).then(|| 1.0 / (s * nc.max(1) as f64));
                    (fine, coarse, nearest)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let area = |r: f64| std::f64::consts::TAU * (r.cosh() - 1.0);
    let n = vals.len() as f64;
    let value = area(radius) * vals.iter().map(|v| v.0).sum::<f64>() / n;
    let coarse: Vec<f64> = vals.iter().filter_map(|v| v.1).collect();
    let coarse_value = if coarse.is_empty() {
        f64::NAN
    } else {
        area(coarse_r) * coarse.iter().sum::<f64>() / coarse.len() as f64
    };
    let inside = vals.iter().filter(|v| v.2).count() as f64;
    let dirichlet_value = area(radius) * inside / n / s;
    let mut rng = substream(seed, u64::MAX);
    let mut boots = Vec::with_capacity(opts.bootstrap);
    for _ in 0..opts.bootstrap {
        let mut acc = 0.0;
        for _ in 0..vals.len() {
            acc += vals[rng.gen_range(0..vals.len())].0;
        }
        boots.push(area(radius) * acc / n);
    }
    let bm = boots.iter().sum::<f64>() / boots.len().max(1) as f64;
    let std_error = if boots.len() > 1 {
        (boots.iter().map(|b| (b - bm).powi(2)).sum::<f64>() / (boots.len() - 1) as f64).sqrt()
    } else {
        f64::NAN
    };
    let truncation_gap = value - coarse_value;
    Ok(VolumeResult {
        value,
        truncation_gap,
        converged: truncation_gap.abs() <= 0.1 * value,
        std_error,
        radius,
        coarse_value,
        dirichlet_value,
        orbit_points: orb.points.len(),
        center_stabilizer: orb.center_stabilizer,
        unbounded: !orb.truncated && orb.max_dist < radius,
        orbit_truncated: orb.truncated,
    })
}
