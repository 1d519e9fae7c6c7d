use rand::Rng;
use rayon::prelude::*;

use super::{fold_point, substream, EquidistError, FoldGenerators, CHUNK, DEFAULT_FOLD_WORD_BOUND};
use crate::real::{mat3_mul_vec, Cx, Precision, Real};
use crate::registry::{ShimuraCurveRecord, VolumeEstimate};
use crate::symspace::BallPoint;

#[derive(Clone, Debug)]
pub struct SampleOptions {
    pub fold: FoldGenerators,
    pub word_bound: usize,
    pub precision: Precision,
}

impl Default for SampleOptions {
    fn default() -> SampleOptions {
        SampleOptions {
            fold: FoldGenerators::default(),
            word_bound: DEFAULT_FOLD_WORD_BOUND,
            precision: Precision::digits(15),
        }
    }
}

/// R = 4 + log(1 + height).
pub fn default_radius(height: u64) -> f64 {
    4.0 + (1.0 + height as f64).ln()
}

#[derive(Clone, Debug)]
pub struct SampleBatch<T> {
    pub curve_id: String,
    pub height: u64,
    pub h_value: String,
    pub residue_class: String,
    pub volume: Option<VolumeEstimate>,
    pub seed: u64,
    pub radius: f64,
    pub word_bound: usize,
    /// Disk coordinates before embedding.
    pub disk: Vec<Cx<T>>,
    pub raw: Vec<BallPoint<T>>,
    pub points: Vec<BallPoint<T>>,
    pub fold_words: Vec<Vec<u16>>,
    pub weights: Vec<f64>,
    pub budget_exceeded: Vec<bool>,
}

impl<T> SampleBatch<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn word_lengths(&self) -> Vec<usize> {
        self.fold_words.iter().map(Vec::len).collect()
    }

    pub fn exceeded_count(&self) -> usize {
        self.budget_exceeded.iter().filter(|&&b| b).count()
    }
}

struct Drawn<T> {
    disk: Cx<T>,
    raw: BallPoint<T>,
    folded: BallPoint<T>,
    word: Vec<u16>,
    exceeded: bool,
}

/// n points uniform for hyperbolic area on the radius-R disk of the curve,
/// embedded in the ball and folded. Point k comes from substream ⌊k/1024⌋
/// of `seed`, so the batch does not depend on the thread count.
pub fn sample_curve<T: Real>(
    record: &ShimuraCurveRecord,
    n: usize,
    radius: f64,
    seed: u64,
    opts: &SampleOptions,
) -> Result<SampleBatch<T>, EquidistError> {
    if n == 0 {
        return Err(EquidistError::InvalidArgument("n must be at least 1".into()));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(EquidistError::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    let prec = opts.precision;
    let g = record
        .conjugator_mat3::<T>(prec)
        .ok_or_else(|| EquidistError::NotSampled(record.id.clone()))?;
    let gens = opts.fold.mats::<T>(prec);
    let cosh_r = radius.cosh();
    let chunks = n.div_ceil(CHUNK);
    let drawn: Vec<Vec<Drawn<T>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = substream(seed, c as u64);
            let m = CHUNK.min(n - c * CHUNK);
            (0..m)
                .map(|_| {
                    let u: f64 = rng.gen();
                    let theta: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
                    let one = T::from_f64(prec, 1.0);
                    // area of the radius-r disk is 2π(cosh r − 1)
                    let r = (one.clone() + T::from_f64(prec, u) * T::from_f64(prec, cosh_r - 1.0)).acosh();
                    let rho = (r / T::from_f64(prec, 2.0)).tanh();
                    let th = T::from_f64(prec, theta);
                    let disk = Cx::new(rho.clone() * th.cos(), rho * th.sin());
                    let line = mat3_mul_vec(&g, &[Cx::zero(prec), disk.clone(), Cx::one(prec)]);
                    let raw = BallPoint::from_line(&line)?;
                    let f = fold_point(&raw, &gens, opts.word_bound);
                    Ok(Drawn { disk, raw, folded: f.point, word: f.word, exceeded: f.budget_exceeded })
                })
                .collect::<Result<Vec<_>, EquidistError>>()
        })
        .collect::<Result<_, _>>()?;
    let mut batch = SampleBatch {
        curve_id: record.id.clone(),
        height: record.height,
        h_value: record.h_value.to_string(),
        residue_class: record.residue_class.representative().to_string(),
        volume: record.volume_estimate.clone(),
        seed,
        radius,
        word_bound: opts.word_bound,
        disk: Vec::with_capacity(n),
        raw: Vec::with_capacity(n),
        points: Vec::with_capacity(n),
        fold_words: Vec::with_capacity(n),
        weights: vec![1.0; n],
        budget_exceeded: Vec::with_capacity(n),
    };
    for d in drawn.into_iter().flatten() {
        batch.disk.push(d.disk);
        batch.raw.push(d.raw);
        batch.points.push(d.folded);
        batch.fold_words.push(d.word);
        batch.budget_exceeded.push(d.exceeded);
    }
    Ok(batch)
}
