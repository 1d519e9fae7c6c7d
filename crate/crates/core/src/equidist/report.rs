use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{EquidistError, OracleInfo, Reference, SampleBatch, TestFunctionFamily};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyRow {
    pub curve_id: String,
    pub height: u64,
    pub h_value: String,
    pub residue_class: String,
    pub n: usize,
    pub radius: f64,
    pub volume_estimate: Option<f64>,
    /// Bootstrap error combined with the truncation gap.
    pub volume_err: Option<f64>,
    pub d: f64,
    pub d_err: f64,
    pub means: Vec<f64>,
    pub gaps: Vec<f64>,
    /// Monte-Carlo standard errors of the sample means.
    pub mc_errors: Vec<f64>,
    pub fold_budget_exceeded: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub functions: Vec<String>,
    pub reference: Vec<Reference>,
    pub oracle: Option<OracleInfo>,
    pub rows: Vec<DiscrepancyRow>,
    /// Spearman correlation of D against curve height; absent when all
    /// heights or all D values coincide.
    pub trend: Option<f64>,
}

/// Average ranks (1-based); tied values share the mean of their ranks.
fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut out = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = r;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation; NaN when either side is constant.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

fn row(batch: &SampleBatch<f64>, family: &TestFunctionFamily) -> DiscrepancyRow {
    let k = family.functions.len();
    let wsum: f64 = batch.weights.iter().sum();
    let mut sums = vec![0.0; k];
    for (p, w) in batch.points.iter().zip(&batch.weights) {
        for (j, f) in family.functions.iter().enumerate() {
            sums[j] += w * f.eval(p);
        }
    }
    let means: Vec<f64> = sums.iter().map(|s| s / wsum).collect();
    let n = batch.len() as f64;
    let mut mc_errors = vec![0.0; k];
    for (p, w) in batch.points.iter().zip(&batch.weights) {
        for (j, f) in family.functions.iter().enumerate() {
            mc_errors[j] += w * (f.eval(p) - means[j]).powi(2);
        }
    }
    for e in &mut mc_errors {
        *e = (*e / wsum / (n - 1.0).max(1.0)).sqrt();
    }
    let gaps: Vec<f64> = means.iter().zip(&family.reference).map(|(m, r)| m - r.value).collect();
    let (mut d, mut d_err) = (0.0, 0.0);
    for j in 0..k {
        if gaps[j].abs() > d || j == 0 {
            d = gaps[j].abs();
            d_err = mc_errors[j].hypot(family.reference[j].std_error);
        }
    }
    DiscrepancyRow {
        curve_id: batch.curve_id.clone(),
        height: batch.height,
        h_value: batch.h_value.clone(),
        residue_class: batch.residue_class.clone(),
        n: batch.len(),
        radius: batch.radius,
        volume_estimate: batch.volume.as_ref().map(|v| v.value),
        volume_err: batch.volume.as_ref().map(|v| v.total_error()),
        d,
        d_err,
        means,
        gaps,
        mc_errors,
        fold_budget_exceeded: batch.exceeded_count(),
    }
}

/// Per-curve maximal gap between sample means and reference integrals,
/// plus the rank correlation of that gap against height. Batches are
/// reported in the order given.
pub fn discrepancy_report(
    batches: &[SampleBatch<f64>],
    family: &TestFunctionFamily,
) -> Result<DiscrepancyReport, EquidistError> {
    if batches.len() < 3 {
        return Err(EquidistError::InsufficientCurves(batches.len()));
    }
    if family.functions.is_empty() || family.reference.len() != family.functions.len() {
        return Err(EquidistError::MissingReference);
    }
    let rows: Vec<DiscrepancyRow> = batches.iter().map(|b| row(b, family)).collect();
    let heights: Vec<f64> = rows.iter().map(|r| r.height as f64).collect();
    let ds: Vec<f64> = rows.iter().map(|r| r.d).collect();
    Ok(DiscrepancyReport {
        functions: family.functions.iter().map(|f| f.name().to_string()).collect(),
        reference: family.reference.clone(),
        oracle: family.oracle.clone(),
        trend: Some(spearman(&heights, &ds)).filter(|t| t.is_finite()),
        rows,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.9e}")).unwrap_or_default()
}

impl DiscrepancyReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "curve_id,height,h_value,residue_class,n,radius,volume_estimate,volume_err,D,D_err",
        );
        for f in &self.functions {
            write!(s, ",gap_{f}").unwrap();
        }
        s.push('\n');
        for r in &self.rows {
            write!(
                s,
                "{},{},{},{},{},{},{},{},{:.9e},{:.9e}",
                r.curve_id,
                r.height,
                r.h_value,
                r.residue_class,
                r.n,
                r.radius,
                opt(r.volume_estimate),
                opt(r.volume_err),
                r.d,
                r.d_err
            )
            .unwrap();
            for g in &r.gaps {
                write!(s, ",{g:.9e}").unwrap();
            }
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spearman_basics() {
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]), -1.0);
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]), 1.0);
        assert_eq!(ranks(&[5.0, 1.0, 5.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
        // tie-corrected value checked by hand: ranks x = (1,2,3,4), y = (1.5,1.5,3,4)
        let r = spearman(&[1.0, 2.0, 3.0, 4.0], &[7.0, 7.0, 8.0, 9.0]);
        assert!((r - 4.5 / (5.0f64 * 4.5).sqrt()).abs() < 1e-15);
    }
}
