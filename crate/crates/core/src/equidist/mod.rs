//! Sampling Shimura curves, folding into a fundamental domain for Γ and
//! comparing against the invariant measure.
//!
//! The fold uses every γ ∈ Γ with |γ₃₃|² ≤ N, one per orbit point of the
//! origin. When this set contains the face pairings of the Dirichlet domain
//! D centred at the origin, greedy descent ends in D, so test functions
//! invariant under Stab_Γ(origin) become Γ-invariant after folding.

mod fold;
mod report;
mod sample;
mod testfn;
mod volume;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::hermitian::IsometryMatrix;
use crate::real::{Mat3, Precision, Real};
use crate::registry::origin_moving_elements;
use crate::symspace::SymSpaceError;

pub use fold::{fold_point, replay_error, word_matrix, Folded, DEFAULT_FOLD_WORD_BOUND};
pub use report::{discrepancy_report, spearman, DiscrepancyReport, DiscrepancyRow};
pub use sample::{default_radius, sample_curve, SampleBatch, SampleOptions};
pub use testfn::{reference_family, OracleConfig, OracleInfo, Reference, TestFunction, TestFunctionFamily};
pub use volume::{estimate_volume, VolumeOptions, VolumeResult};

/// |γ₃₃|² bound of the default fold set. Raising it to 20 changes no folded
/// point in a test over 10⁵ points.
pub const DEFAULT_FOLD_CORNER_BOUND: u32 = 5;

/// Points per RNG substream.
pub const CHUNK: usize = 1024;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum EquidistError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("curve {0} cannot be sampled: missing or unreadable conjugator")]
    NotSampled(String),
    #[error("need at least 3 curves, got {0}")]
    InsufficientCurves(usize),
    #[error("curve has no stabilizer generators")]
    NoStabilizer,
    #[error("test function family has no reference integrals")]
    MissingReference,
    #[error(transparent)]
    SymSpace(#[from] SymSpaceError),
}

/// Generator list used for folding.
#[derive(Clone, Debug, PartialEq)]
pub struct FoldGenerators {
    pub corner_bound: u32,
    pub elements: Vec<IsometryMatrix>,
}

impl FoldGenerators {
    pub fn catalogue(corner_bound: u32) -> FoldGenerators {
        FoldGenerators { corner_bound, elements: origin_moving_elements(corner_bound) }
    }

    pub fn mats<T: Real>(&self, prec: Precision) -> Vec<Mat3<T>> {
        self.elements.iter().map(|g| g.to_mat3::<T>(prec)).collect()
    }
}

impl Default for FoldGenerators {
    fn default() -> FoldGenerators {
        FoldGenerators::catalogue(DEFAULT_FOLD_CORNER_BOUND)
    }
}

pub(crate) fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
