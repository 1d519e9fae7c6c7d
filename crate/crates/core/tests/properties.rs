use proptest::prelude::*;
use rug::Rational;

use shimura_lab::cohomology::{CohomologyModel, PeriodVector};
use shimura_lab::hermitian::{is_in_su, HermitianForm, IsometryMatrix, LatticeVector, VectorKind};
use shimura_lab::linalg::Matrix;
use shimura_lab::liegen::{generated_subalgebra, Case as LieCase, LieAlgebraModel};
use shimura_lab::real::{Cx, Hp, Precision};
use shimura_lab::registry::{build_registry, write_registry, GammaGenerators, RegistryBudget};
use shimura_lab::ring::norm_residue_class;
use shimura_lab::symspace::{fiber_average, geodesic_disk, phi_alpha, BallPoint, Case, OneOneForm};

fn form() -> impl Strategy<Value = OneOneForm<f64>> {
    (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64).prop_map(|(a, b, c, d)| OneOneForm::new(a, b, (c, d)))
}

fn word(max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    let n = GammaGenerators::default_set().symmetric().len();
    prop::collection::vec(0..n, 0..=max_len)
}

fn eval_word(w: &[usize]) -> IsometryMatrix {
    let gens = GammaGenerators::default_set().symmetric();
    w.iter().fold(IsometryMatrix::identity(), |acc, &k| acc.mul(&gens[k]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn phi_is_scale_invariant(
        a in form(),
        v in (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64),
        lam in (0.01..50.0f64, -50.0..50.0f64),
    ) {
        let (v1, v2) = (Cx::new(v.0, v.1), Cx::new(v.2, v.3));
        prop_assume!(v1.norm_sqr() + v2.norm_sqr() > 1e-6);
        let l = Cx::new(lam.0, lam.1);
        let base = phi_alpha(&a, &v1, &v2).unwrap();
        let scaled = phi_alpha(&a, &l.mul(&v1), &l.mul(&v2)).unwrap();
        prop_assert!((base - scaled).abs() <= 1e-12 * (1.0 + base.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fiber_average_is_linear(a in form(), b in form(), s in -3.0..3.0f64, t in -3.0..3.0f64) {
        for case in [Case::One, Case::Two] {
            let lhs = fiber_average(&a.linear(&s, &b, &t), case, 32);
            let rhs = s * fiber_average(&a, case, 32) + t * fiber_average(&b, case, 32);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn su_closed_under_products_and_inverses(w1 in word(6), w2 in word(6)) {
        let h = HermitianForm::standard();
        let (g1, g2) = (eval_word(&w1), eval_word(&w2));
        prop_assert!(is_in_su(&h, &g1.mul(&g2)));
        prop_assert!(is_in_su(&h, &g1.inverse().unwrap()));
    }

    #[test]
    fn residue_class_is_orbit_invariant(
        c in prop::collection::vec((-3i64..=3, -3i64..=3), 3),
        w in word(6),
    ) {
        let h = HermitianForm::standard();
        let v = LatticeVector::from_pairs([c[0], c[1], c[2]]);
        prop_assume!(h.classify(&v) == VectorKind::Positive);
        let gv = eval_word(&w).apply_lattice(&v).unwrap();
        let (hv, hgv) = (h.norm(&v.to_quad_rat()), h.norm(&gv.to_quad_rat()));
        prop_assert_eq!(&hv, &hgv);
        prop_assert_eq!(norm_residue_class(&hv).unwrap(), norm_residue_class(&hgv).unwrap());
    }

    #[test]
    fn pd_expansion_matches_direct_form(
        diag in prop::collection::vec(prop_oneof![-9.0..-0.5f64, 0.5..9.0f64], 1..5),
        off in prop::collection::vec(-1.0..1.0f64, 10),
        lambda in 0.5..9.0f64,
        p in prop::collection::vec(-100.0..100.0f64, 5),
    ) {
        // γ₀ orthogonal to the rest; the other block is diagonal plus a small symmetric perturbation
        let d = diag.len() + 1;
        let gram = Matrix::from_fn(d, d, |i, j| match (i, j) {
            (0, 0) => lambda,
            (0, _) | (_, 0) => 0.0,
            _ if i == j => diag[i - 1],
            _ => 0.1 * off[(i.min(j) * 3 + i.max(j)) % off.len()],
        });
        let Ok(model) = CohomologyModel::new(gram) else { return Ok(()) };
        let pv = PeriodVector::new(p[..d].to_vec());
        let a = model.self_intersection(&pv).unwrap();
        let b = model.self_intersection_direct(&pv).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs())));
    }

    #[test]
    fn cusp_projection_is_an_orthogonal_projection(
        lambda in 1i64..10,
        free in prop::collection::vec(prop_oneof![-5i64..=-1, 1i64..=5], 0..3),
        a in prop::collection::vec(-2i64..=2, 9),
        c in prop::collection::vec((-20i64..=20, 1i64..=5), 7),
    ) {
        // cusp block −(AᵀA + I) of size 3 after γ₀ and the free classes
        let f = free.len();
        let d = 1 + f + 3;
        let mut gram = Matrix::<Rational>::zeros(d, d);
        gram[(0, 0)] = Rational::from(lambda);
        for (k, &g) in free.iter().enumerate() {
            gram[(1 + k, 1 + k)] = Rational::from(g);
        }
        for i in 0..3 {
            for j in 0..3 {
                let s: i64 = (0..3).map(|k| a[3 * k + i] * a[3 * k + j]).sum::<i64>() + i64::from(i == j);
                gram[(1 + f + i, 1 + f + j)] = Rational::from(-s);
            }
        }
        let block: Vec<usize> = (1 + f..d).collect();
        let model = CohomologyModel::new(gram).unwrap().with_cusp_block(block.clone()).unwrap();
        let class: Vec<Rational> = c[..d].iter().map(|&(p, q)| Rational::from((p, q))).collect();
        let pc = model.cusp_projection(&class).unwrap();
        prop_assert_eq!(model.cusp_projection(&pc).unwrap(), pc.clone());
        prop_assert_eq!(model.pairing(&pc, &class), model.pairing(&class, &pc));
        for &b in &block {
            let mut e = vec![Rational::new(); d];
            e[b] = Rational::from(1);
            prop_assert_eq!(model.pairing(&pc, &e), Rational::new());
        }
        // (pC)² − C² = −(C_B)², zero exactly when the B-component vanishes
        let cb: Vec<Rational> = class.iter().zip(&pc).map(|(x, y)| Rational::from(x - y)).collect();
        let gain = Rational::from(&model.square(&pc) - &model.square(&class));
        prop_assert_eq!(gain.clone(), Rational::from(-model.square(&cb)));
        prop_assert!(gain >= 0);
        prop_assert_eq!(gain == 0, cb.iter().all(|x| *x == 0));
    }

    #[test]
    fn generated_subalgebra_is_monotone_and_idempotent(
        case_two in any::<bool>(),
        c1 in prop::collection::vec(-3i64..=3, 8),
        c2 in prop::collection::vec(-3i64..=3, 8),
    ) {
        let model = LieAlgebraModel::new(if case_two { LieCase::Two } else { LieCase::One });
        let k = model.basis.len();
        let (x, y) = (model.combine(&c1[..k]), model.combine(&c2[..k]));
        let small = generated_subalgebra(&model, &[x.clone()]).unwrap();
        let big = generated_subalgebra(&model, &[x, y]).unwrap();
        prop_assert!(small.dim <= big.dim);
        prop_assert_eq!(generated_subalgebra(&model, &big.basis).unwrap().dim, big.dim);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn complex_line_through_two_disk_points_stays_in_the_disk(
        z in (0.0..0.95f64, 0.0..6.3f64, 0.0..0.95f64, 0.0..6.3f64),
        mix in (0.05..0.95f64, -1.0..1.0f64),
        which in 0usize..3,
    ) {
        let lines = [[(1, 0), (0, 0), (0, 0)], [(1, 0), (1, 0), (0, 0)], [(1, 1), (1, 0), (0, 0)]];
        let h = HermitianForm::standard();
        let prec = Precision::digits(60);
        let disk = geodesic_disk::<Hp>(&h, &LatticeVector::from_pairs(lines[which]), prec, 1e-14).unwrap();
        let pt = |r: f64, t: f64| disk.point(&Cx::<Hp>::from_f64(prec, r * t.cos(), r * t.sin())).unwrap();
        let (p, q) = (pt(z.0, z.1), pt(z.2, z.3));
        // a negative vector in span(p, q) is another point of the same complex geodesic
        let (lp, lq) = (p.to_line(), q.to_line());
        let (s, t) = (Cx::<Hp>::from_f64(prec, mix.0, 0.0), Cx::<Hp>::from_f64(prec, 1.0 - mix.0, mix.1 * 0.1));
        let x: [Cx<Hp>; 3] = std::array::from_fn(|k| lp[k].mul(&s).add(&lq[k].mul(&t)));
        if let Ok(m) = BallPoint::from_line(&x) {
            prop_assert!(disk.orthogonality_residual(&m, prec) <= 1e-18);
        }
        prop_assert!(disk.orthogonality_residual(&p, prec) <= 1e-18);
    }
}

#[test]
fn registry_is_deterministic() {
    let budget = RegistryBudget { height: 1, ..RegistryBudget::default() };
    let a = write_registry(&build_registry(&GammaGenerators::default_set(), &budget).unwrap());
    let b = write_registry(&build_registry(&GammaGenerators::default_set(), &budget).unwrap());
    assert_eq!(a, b);
}
