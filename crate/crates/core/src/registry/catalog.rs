//! Elements of SU(diag(1,1,−1), ℤ[i]) that move the origin o = [e₃] a
//! bounded distance: cosh²(d(o, γo)/2) = |γ₃₃|².
//!
//! Every entry of such γ satisfies |γᵢⱼ|² ≤ |γ₃₃|², so the search is finite.
//! One element per orbit point γo is kept, together with its inverse.

use std::collections::BTreeMap;

use crate::hermitian::{HermitianForm, IsometryMatrix};
use crate::registry::fast::{self, G, V3};

fn h_std(x: &V3, y: &V3) -> Option<G> {
    let t0 = fast::mul(fast::conj(x[0]), y[0])?;
    let t1 = fast::mul(fast::conj(x[1]), y[1])?;
    let t2 = fast::mul(fast::conj(x[2]), y[2])?;
    fast::sub(fast::add(t0, t1)?, t2)
}

fn n2(g: G) -> i64 {
    g.0 * g.0 + g.1 * g.1
}

fn det(c1: &V3, c2: &V3, c3: &V3) -> Option<G> {
    let m = |a: G, b: G| fast::mul(a, b);
    let minor = |i: usize, j: usize| -> Option<G> { fast::sub(m(c2[i], c3[j])?, m(c2[j], c3[i])?) };
    let a = m(c1[0], minor(1, 2)?)?;
    let b = m(c1[1], minor(0, 2)?)?;
    let c = m(c1[2], minor(0, 1)?)?;
    fast::add(fast::sub(a, b)?, c)
}

/// Elements γ with 1 < |γ₃₃|² ≤ `corner_bound`, one per orbit point γo and
/// closed under inversion, sorted by |γ₃₃|² then entries.
pub fn origin_moving_elements(corner_bound: u32) -> Vec<IsometryMatrix> {
    let n = corner_bound as i64;
    let r = (n as f64).sqrt().floor() as i64;
    let coords: Vec<G> = (-r..=r)
        .flat_map(|a| (-r..=r).map(move |b| (a, b)))
        .filter(|&g| n2(g) <= n)
        .collect();
    let mut pos: Vec<V3> = Vec::new();
    let mut neg: Vec<V3> = Vec::new();
    for &a in &coords {
        for &b in &coords {
            for &c in &coords {
                let v = [a, b, c];
                match n2(a) + n2(b) - n2(c) {
                    1 if n2(c) < n => pos.push(v),
                    -1 if n2(c) > 1 => neg.push(v),
                    _ => {}
                }
            }
        }
    }
    // orbit point γo ↔ the line of the third column
    let mut by_point: BTreeMap<(i64, V3), [V3; 3]> = BTreeMap::new();
    for c3 in &neg {
        let key = (n2(c3[2]), fast::canonical(*c3));
        if by_point.contains_key(&key) {
            continue;
        }
        let perp: Vec<&V3> = pos.iter().filter(|c| h_std(c, c3) == Some((0, 0))).collect();
        'found: for c1 in &perp {
            for c2 in &perp {
                if h_std(c1, c2) == Some((0, 0)) && det(c1, c2, c3) == Some((1, 0)) {
                    by_point.insert(key, [**c1, **c2, *c3]);
                    break 'found;
                }
            }
        }
    }
    let mut out: Vec<IsometryMatrix> = Vec::new();
    for cols in by_point.values() {
        let g = IsometryMatrix::from_gauss(std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i])));
        let inv = g.inverse().expect("unimodular");
        for m in [g, inv] {
            if !out.contains(&m) {
                out.push(m);
            }
        }
    }
    let key = |m: &IsometryMatrix| {
        let e = m.to_quad_ints().expect("integral");
        (e[2][2].norm(), e)
    };
    out.sort_by_key(key);
    debug_assert!(out.iter().all(|g| crate::hermitian::is_in_su(&HermitianForm::standard(), g)));
    out
}

/// Elements fixing the origin: γ = diag(U, u) with U a monomial unit matrix.
pub fn origin_stabilizer() -> Vec<IsometryMatrix> {
    let units = [(1, 0), (0, 1), (-1, 0), (0, -1)];
    let mut out = Vec::new();
    for swap in [false, true] {
        for &a in &units {
            for &b in &units {
                for &c in &units {
                    let z = (0, 0);
                    let m = if swap {
                        [[z, a, z], [b, z, z], [z, z, c]]
                    } else {
                        [[a, z, z], [z, b, z], [z, z, c]]
                    };
                    let g = IsometryMatrix::from_gauss(m);
                    if g.det().is_one() {
                        out.push(g);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::is_in_su;

    #[test]
    fn catalogue_elements_are_isometries_moving_the_origin() {
        let h = HermitianForm::standard();
        let els = origin_moving_elements(3);
        assert!(!els.is_empty());
        for g in &els {
            assert!(is_in_su(&h, g));
            let c = g.to_quad_ints().unwrap()[2][2].norm();
            assert!(c > crate::int::Int::ONE && c <= crate::int::Int::from(3));
            assert!(els.contains(&g.inverse().unwrap()));
        }
        // the parabolic generator has |γ₃₃|² = 2
        let p = IsometryMatrix::block([[(1, 1), (1, 0)], [(1, 0), (1, -1)]]);
        let o = p.apply_lattice(&crate::hermitian::LatticeVector::basis(2)).unwrap().canonical();
        assert!(els
            .iter()
            .any(|g| g.apply_lattice(&crate::hermitian::LatticeVector::basis(2)).unwrap().canonical() == o));
    }

    #[test]
    fn origin_stabilizer_has_expected_order() {
        // monomial unit matrices with det 1: 2 patterns · 4³ units / 4 det values
        let k = origin_stabilizer();
        assert_eq!(k.len(), 32);
        for g in &k {
            assert!(is_in_su(&HermitianForm::standard(), g));
        }
    }
}
