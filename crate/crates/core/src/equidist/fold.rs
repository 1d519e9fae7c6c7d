//! Greedy descent toward the origin of the ball.

use crate::real::{mat3_mul, mat3_mul_vec, Cx, Mat3, Precision, Real};
use crate::symspace::BallPoint;

pub const DEFAULT_FOLD_WORD_BOUND: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct Folded<T> {
    pub point: BallPoint<T>,
    /// Generator indices in application order: point = g_{w_k} ⋯ g_{w_1}·x.
    pub word: Vec<u16>,
    pub budget_exceeded: bool,
}

fn act<T: Real>(g: &Mat3<T>, x: &BallPoint<T>) -> Option<BallPoint<T>> {
    BallPoint::from_line(&mat3_mul_vec(g, &x.to_line())).ok()
}

/// Repeatedly applies the generator giving the smallest |z|² while it
/// strictly decreases; ties go to the lower index. Distance to the origin
/// is monotone in |z|².
pub fn fold_point<T: Real>(x: &BallPoint<T>, gens: &[Mat3<T>], word_bound: usize) -> Folded<T> {
    let mut cur = x.clone();
    let mut cur_n = cur.norm_sqr();
    let mut word = Vec::new();
    loop {
        let mut best: Option<(usize, BallPoint<T>, T)> = None;
        for (i, g) in gens.iter().enumerate() {
            let Some(y) = act(g, &cur) else { continue };
            let n = y.norm_sqr();
            let better = match &best {
                Some((_, _, bn)) => n < *bn,
                None => n < cur_n,
            };
            if better {
                best = Some((i, y, n));
            }
        }
        match best {
            None => return Folded { point: cur, word, budget_exceeded: false },
            Some(_) if word.len() >= word_bound => return Folded { point: cur, word, budget_exceeded: true },
            Some((i, y, n)) => {
                word.push(i as u16);
                cur = y;
                cur_n = n;
            }
        }
    }
}

/// The product g_{w_k} ⋯ g_{w_1} as a single matrix.
pub fn word_matrix<T: Real>(word: &[u16], gens: &[Mat3<T>], prec: Precision) -> Mat3<T> {
    let mut m: Mat3<T> = std::array::from_fn(|i| {
        std::array::from_fn(|j| if i == j { Cx::one(prec) } else { Cx::zero(prec) })
    });
    for &w in word {
        m = mat3_mul(&gens[w as usize], &m);
    }
    m
}

/// Euclidean distance in ℂ² between w·x and `folded`.
pub fn replay_error<T: Real>(x: &BallPoint<T>, word: &[u16], folded: &BallPoint<T>, gens: &[Mat3<T>]) -> f64 {
    let prec = x.z1.re.precision();
    let m = word_matrix(word, gens, prec);
    match act(&m, x) {
        Some(y) => (y.z1.sub(&folded.z1).norm_sqr() + y.z2.sub(&folded.z2).norm_sqr()).sqrt().to_f64(),
        None => f64::INFINITY,
    }
}
