//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;
use sha2::{Digest, Sha256};

use shimura_lab::cohomology::{CohomologyError, CohomologyModel, PeriodVector};
use shimura_lab::equidist::{
    default_radius, discrepancy_report, estimate_volume, reference_family, sample_curve, OracleConfig, SampleOptions,
    TestFunction, VolumeOptions,
};
use shimura_lab::hermitian::{IsometryMatrix, LatticeVector};
use shimura_lab::linalg::Matrix;
use shimura_lab::liegen::{supergroup_check, Case as LieCase, LieAlgebraModel};
use shimura_lab::real::{Cx, Hp, Precision, Real};
use shimura_lab::registry::{
    build_registry, rational_line_from_element, stabilizer_generators, CurveRegistry, GammaGenerators,
    RegistryBudget,
};
use shimura_lab::ring::norm_residue_class;
use shimura_lab::symspace::{fiber_average, phi_alpha_dir, Case, OneOneForm, TangentDirection};

type Outcome = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let t = start.elapsed();
    if t <= limit {
        Ok(detail)
    } else {
        Err(format!("{detail}; took {t:.1?}, limit {limit:?}"))
    }
}

fn fiber() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let forms: Vec<OneOneForm<f64>> = (0..100)
        .map(|_| {
            let mut u = || r.gen_range(-5.0..5.0);
            OneOneForm::new(u(), u(), (u(), u()))
        })
        .collect();
    let mut parts = Vec::new();
    for case in [Case::One, Case::Two] {
        for (order, tol) in [(16, 1e-9), (32, 1e-12)] {
            let worst = forms.iter().map(|a| (fiber_average(a, case, order) - a.trace() / 2.0).abs()).fold(0.0, f64::max);
            if worst > tol {
                return Err(format!("{case:?} order {order}: error {worst:e} > {tol:e}"));
            }
            parts.push(format!("{case:?}/{order} {worst:.1e}"));
        }
    }
    within(Duration::from_secs(10), start, parts.join(", "))
}

fn phi_omega() -> Outcome {
    let prec = Precision::digits(100);
    let omega = OneOneForm::<Hp>::kahler(prec);
    let one = Hp::from_f64(prec, 1.0);
    let mut r = rng(2);
    let mut worst = 0.0f64;
    let mut count = 0;
    while count < 10_000 {
        let mut c = || Cx::<Hp>::from_f64(prec, r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        if let Ok(dir) = TangentDirection::new(c(), c()) {
            worst = worst.max((phi_alpha_dir(&omega, &dir) - one.clone()).abs().to_f64());
            count += 1;
        }
    }
    if worst <= 1e-30 {
        Ok(format!("max |phi - 1| = {worst:.1e} over {count} directions"))
    } else {
        Err(format!("max |phi - 1| = {worst:e}"))
    }
}

fn roundtrip(reg: &CurveRegistry) -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for c in &reg.curves {
        if let Some(g) = c.hyperbolic_witness() {
            checked += 1;
            let v = rational_line_from_element(&reg.form, g).map_err(|e| format!("{}: {e}", c.id))?;
            if v.canonical() != c.defining_vector.canonical() {
                return Err(format!("{}: recovered {v}, expected {}", c.id, c.defining_vector));
            }
        }
    }
    if checked == 0 {
        return Err("no curve has a hyperbolic witness".into());
    }
    let seed = IsometryMatrix::block([[(2, 1), (2, 0)], [(2, 0), (2, -1)]]);
    let found = stabilizer_generators(&reg.form, &LatticeVector::basis(0), 3).map_err(|e| e.to_string())?;
    if !found.elements.contains(&seed) {
        return Err("seed witness not found at entry_bound 3".into());
    }
    within(Duration::from_secs(60), start, format!("{checked}/{checked} lines recovered, seed witness found"))
}

fn residues(reg: &CurveRegistry) -> Outcome {
    let classes: std::collections::BTreeSet<String> = reg.curves.iter().map(|c| c.residue_class.to_string()).collect();
    if classes.len() < 2 {
        return Err(format!("only classes {classes:?}"));
    }
    let gens = GammaGenerators::default_set().symmetric();
    let mut r = rng(4);
    let mut violations = 0;
    for c in &reg.curves {
        for _ in 0..100 {
            let len = r.gen_range(1..=8);
            let g = (0..len).fold(IsometryMatrix::identity(), |acc, _| acc.mul(&gens[r.gen_range(0..gens.len())]));
            let w = g.apply_lattice(&c.defining_vector).ok_or("word left the lattice")?;
            let class = norm_residue_class(&reg.form.norm(&w.to_quad_rat())).map_err(|e| e.to_string())?;
            violations += usize::from(class != c.residue_class);
        }
    }
    if violations == 0 {
        Ok(format!("classes {classes:?}, {} curves x 100 words, 0 violations", reg.curves.len()))
    } else {
        Err(format!("{violations} class violations"))
    }
}

fn supergroup() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (case, dim) in [(LieCase::One, 6), (LieCase::Two, 8)] {
        let rep = supergroup_check(&LieAlgebraModel::new(case), 100, 1).map_err(|e| e.to_string())?;
        if rep.passes != 100 || rep.dim_g != dim {
            return Err(format!("{case:?}: {}/100 trials reach dimension {}", rep.passes, rep.dim_g));
        }
        parts.push(format!("{case:?} 100/100 -> {dim}"));
    }
    within(Duration::from_secs(30), start, parts.join(", "))
}

/// γ₀ orthogonal to everything else, a random invertible symmetric block on the rest.
fn random_gram(r: &mut ChaCha8Rng, d: usize) -> Matrix<f64> {
    let mut g = Matrix::from_fn(d, d, |_, _| 0.0);
    g[(0, 0)] = r.gen_range(0.5..10.0);
    for i in 1..d {
        for j in i..d {
            let x = r.gen_range(-3.0..3.0);
            g[(i, j)] = x;
            g[(j, i)] = x;
        }
    }
    g
}

fn pd_expansion() -> Outcome {
    let mut r = rng(6);
    let mut done = 0;
    let mut worst = 0.0f64;
    while done < 1000 {
        let d = r.gen_range(2..=6);
        let Ok(model) = CohomologyModel::new(random_gram(&mut r, d)) else { continue };
        let p = PeriodVector::new((0..d).map(|_| r.gen_range(-100.0..100.0)).collect());
        let (a, b) = (model.self_intersection(&p).unwrap(), model.self_intersection_direct(&p).unwrap());
        worst = worst.max((a - b).abs() / (1.0 + a.abs().max(b.abs())));
        done += 1;
    }
    if worst > 1e-12 {
        return Err(format!("f64 expansion differs by {worst:e}"));
    }
    let mut exact = 0;
    while exact < 200 {
        let d = r.gen_range(2..=5);
        let mut g = Matrix::<Rational>::zeros(d, d);
        g[(0, 0)] = Rational::from((r.gen_range(1..20), r.gen_range(1..5)));
        for i in 1..d {
            for j in i..d {
                let x = Rational::from((r.gen_range(-9..=9), r.gen_range(1..4)));
                g[(i, j)] = x.clone();
                g[(j, i)] = x;
            }
        }
        let Ok(model) = CohomologyModel::new(g) else { continue };
        let p = PeriodVector::new((0..d).map(|_| Rational::from((r.gen_range(-50..=50), r.gen_range(1..7)))).collect());
        if model.self_intersection(&p).unwrap() != model.self_intersection_direct(&p).unwrap() {
            return Err("rational expansion differs".into());
        }
        exact += 1;
    }
    // p_n = (A_n, ε_n): r_n − 1/λ = (ε_n/A_n)²/gram₁₁ exactly
    for _ in 0..100 {
        let lambda = Rational::from((r.gen_range(1..20), r.gen_range(1..5)));
        let g11 = Rational::from(r.gen_range(1..10) * if r.gen_bool(0.5) { 1 } else { -1 });
        let mut g = Matrix::<Rational>::zeros(2, 2);
        g[(0, 0)] = lambda;
        g[(1, 1)] = g11.clone();
        let max_abs = Rational::from(g[(0, 0)].clone().abs()).max(Rational::from(g11.clone().abs()));
        let model = CohomologyModel::new(g).unwrap();
        let seq: Vec<PeriodVector<Rational>> =
            (1..=30i64).map(|n| PeriodVector::new(vec![Rational::from(n * n), Rational::from((n, 3))])).collect();
        let ratios = model.asymptotic_ratio(&seq).unwrap();
        for (p, rn) in seq.iter().zip(&ratios) {
            let q = Rational::from(&p.periods[1] / &p.periods[0]).square();
            let dev = Rational::from(rn - &model.limit_ratio());
            if dev != Rational::from(&q / &g11) {
                return Err("deviation is not (eps/A)^2 / gram11".into());
            }
            if dev.abs() > Rational::from(2 * q * &max_abs) {
                return Err("deviation exceeds 2 (eps/A)^2 max|gram|".into());
            }
        }
    }
    Ok(format!("1000 f64 models (worst {worst:.1e}), 200 exact rational models, 100 synthetic sequences"))
}

fn cusp() -> Outcome {
    let mut r = rng(7);
    for _ in 0..200 {
        let f = r.gen_range(0..3);
        let d = 4 + f;
        let mut g = Matrix::<Rational>::zeros(d, d);
        g[(0, 0)] = Rational::from(r.gen_range(1..10));
        for k in 0..f {
            g[(1 + k, 1 + k)] = Rational::from(r.gen_range(1..6) * if r.gen_bool(0.5) { 1 } else { -1 });
        }
        let a: Vec<i64> = (0..9).map(|_| r.gen_range(-2..=2)).collect();
        for i in 0..3 {
            for j in 0..3 {
                let s: i64 = (0..3).map(|k| a[3 * k + i] * a[3 * k + j]).sum::<i64>() + i64::from(i == j);
                g[(1 + f + i, 1 + f + j)] = Rational::from(-s);
            }
        }
        let block: Vec<usize> = (1 + f..d).collect();
        let model = CohomologyModel::new(g).unwrap().with_cusp_block(block.clone()).map_err(|e| e.to_string())?;
        let mut class: Vec<Rational> = (0..d).map(|_| Rational::from((r.gen_range(-20..=20), r.gen_range(1..6)))).collect();
        if r.gen_bool(0.2) {
            for &b in &block {
                class[b] = Rational::new();
            }
        }
        let pc = model.cusp_projection(&class).map_err(|e| e.to_string())?;
        if model.cusp_projection(&pc).unwrap() != pc {
            return Err("projection is not idempotent".into());
        }
        let y: Vec<Rational> = (0..d).map(|_| Rational::from(r.gen_range(-9..=9))).collect();
        let py = model.cusp_projection(&y).unwrap();
        if model.pairing(&pc, &y) != model.pairing(&class, &py) {
            return Err("projection is not self-adjoint".into());
        }
        let gain = Rational::from(&model.square(&pc) - &model.square(&class));
        let b_zero = block.iter().all(|&b| class[b] == 0);
        if gain < 0 || (gain == 0) != b_zero {
            return Err(format!("(pC)^2 - C^2 = {gain} with B-component zero: {b_zero}"));
        }
    }
    let mut g = Matrix::<Rational>::zeros(3, 3);
    g[(0, 0)] = Rational::from(1);
    g[(1, 1)] = Rational::from(-1);
    g[(2, 2)] = Rational::from(1);
    let planted = CohomologyModel::new(g).unwrap().with_cusp_block(vec![1, 2]).map_err(|e| e.to_string())?;
    match planted.cusp_projection(&[Rational::from(1), Rational::from(1), Rational::from(1)]) {
        Err(CohomologyError::NotNegativeDefinite) => Ok("200 exact models; planted indefinite block rejected".into()),
        other => Err(format!("planted indefinite block gave {other:?}")),
    }
}

fn equidistribution(reg: &CurveRegistry) -> Outcome {
    let start = Instant::now();
    let n = 100_000;
    let opts = SampleOptions::default();
    let family = reference_family(&opts.fold, &TestFunction::ALL, &OracleConfig::default());
    let mut batches = Vec::new();
    for c in reg.curves.iter().filter(|c| c.has_hyperbolic) {
        let mut rec = c.clone();
        rec.volume_estimate = Some(estimate_volume(c, 5.0, 1, &VolumeOptions::default()).map_err(|e| e.to_string())?.estimate());
        batches.push(sample_curve::<f64>(&rec, n, default_radius(c.height), 1, &opts).map_err(|e| e.to_string())?);
    }
    if batches.len() < 5 {
        return Err(format!("only {} curves", batches.len()));
    }
    let report = discrepancy_report(&batches, &family).map_err(|e| e.to_string())?;
    let k = family.functions.iter().position(|f| *f == TestFunction::Constant).ok_or("no constant function")?;
    if let Some(row) = report.rows.iter().find(|r| r.gaps[k] != 0.0) {
        return Err(format!("{}: constant gap {:e}", row.curve_id, row.gaps[k]));
    }
    let trend = report.trend.ok_or("trend undefined")?;
    let (first, last) = (report.rows.first().unwrap(), report.rows.last().unwrap());
    if trend > 0.0 || last.d > first.d {
        return Err(format!("trend {trend:.3}, D {:.3e} -> {:.3e}", first.d, last.d));
    }
    // volumes on converged curves, compared across increasing height within combined error bars
    let vols: Vec<(u64, f64, f64)> = batches
        .iter()
        .filter_map(|b| b.volume.as_ref().filter(|v| v.converged).map(|v| (b.height, v.value, v.total_error())))
        .collect();
    let mut pairs = 0;
    for a in &vols {
        for b in vols.iter().filter(|b| b.0 > a.0) {
            pairs += 1;
            if a.1 > b.1 + a.2 + b.2 {
                return Err(format!("volume {:.3} at height {} exceeds {:.3} at height {}", a.1, a.0, b.1, b.0));
            }
        }
    }
    if pairs == 0 {
        return Err("no converged volume pairs across heights".into());
    }
    within(
        Duration::from_secs(600),
        start,
        format!(
            "{} curves, n = {n}: trend {trend:.3}, D {:.2e} -> {:.2e}, {} converged volumes, {pairs} ordered pairs",
            batches.len(),
            first.d,
            last.d,
            vols.len()
        ),
    )
}

fn digest(dir: &Path) -> Vec<(String, String)> {
    let mut out: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), hex::encode(Sha256::digest(std::fs::read(&p).unwrap()))))
        .collect();
    out.sort();
    out
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let commands: [&[&str]; 7] = [
        &["enumerate", "--height", "1"],
        &["sample", "--height", "1", "--n", "2000"],
        &[
            "equidist", "--height", "1", "--n", "2000", "--set", "volume_radius=3.5", "--set", "oracle_nodes=4096",
            "--set", "oracle_max_error=1",
        ],
        &["selfint"],
        &["liecheck"],
        &["fiberavg"],
        &["verify"],
    ];
    let mut runs = Vec::new();
    for (k, workers) in ["1", "1", "8"].iter().enumerate() {
        let out = tmp.path().join(format!("run{k}"));
        for args in commands {
            let status = Command::new(env!("CARGO_BIN_EXE_shimura-lab"))
                .args(args)
                .args(["--workers", workers, "--out"])
                .arg(&out)
                .env_remove("SHIMURA_LAB_OUT_DIR")
                .output()
                .map_err(|e| e.to_string())?
                .status;
            if !status.success() {
                return Err(format!("{} exited with {status}", args[0]));
            }
        }
        runs.push(digest(&out));
    }
    if runs[0] != runs[1] {
        return Err("two runs with one worker differ".into());
    }
    if runs[0] != runs[2] {
        return Err("outputs differ between 1 and 8 workers".into());
    }
    Ok(format!("{} output files identical across 3 runs (workers 1, 1, 8)", runs[0].len()))
}

fn main() {
    let reg = build_registry(&GammaGenerators::default_set(), &RegistryBudget { height: 2, ..RegistryBudget::default() })
        .expect("height 2 registry");
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("fiber averaging", Box::new(fiber)),
        ("phi_omega", Box::new(phi_omega)),
        ("rational-line roundtrip", Box::new(|| roundtrip(&reg))),
        ("norm-residue separation", Box::new(|| residues(&reg))),
        ("supergroup", Box::new(supergroup)),
        ("PD expansion", Box::new(pd_expansion)),
        ("cusp projection", Box::new(cusp)),
        ("equidistribution trend", Box::new(|| equidistribution(&reg))),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let t = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {} {name}: PASS ({d}) [{t:.1} s]", k + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({d}) [{t:.1} s]", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
