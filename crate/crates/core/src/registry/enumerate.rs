use std::collections::{HashMap, HashSet};

use crate::hermitian::{HermitianForm, IsometryMatrix, LatticeVector, VectorKind};
use crate::registry::fast::{self, M3, V3};

/// Primitive h-positive vectors of height ≤ `height`, one per unit class,
/// in lexicographic order.
pub fn enumerate_positive_vectors(h: &HermitianForm, height: u32) -> Vec<LatticeVector> {
    let b = height as i64;
    let coord: Vec<(i64, i64)> = (-b..=b).flat_map(|re| (-b..=b).map(move |im| (re, im))).collect();
    let mut out = Vec::new();
    for &x in &coord {
        for &y in &coord {
            for &z in &coord {
                let v = [x, y, z];
                if v == [(0, 0); 3] || fast::canonical(v) != v {
                    continue;
                }
                let lv = fast::to_lattice(&v);
                if lv.is_primitive() == Ok(true) && h.classify(&lv) == VectorKind::Positive {
                    out.push(lv);
                }
            }
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reduction {
    pub representatives: Vec<LatticeVector>,
    /// For every input, the index of its representative.
    pub assignment: Vec<usize>,
}

/// Greedy Γ-reduction: each new representative claims every vector reached
/// by a word of length ≤ `word_bound` in `gens`. Vectors are compared up to
/// units. Two inputs with different h-values are never merged.
pub fn reduce_mod_gamma(
    h: &HermitianForm,
    vectors: &[LatticeVector],
    gens: &[IsometryMatrix],
    word_bound: u32,
) -> Reduction {
    let fast_gens: Vec<M3> = gens
        .iter()
        .map(|g| fast::from_isometry(g).expect("generators must be integral with small entries"))
        .collect();
    let max_height = vectors
        .iter()
        .filter_map(|v| v.height().to_i64())
        .max()
        .unwrap_or(0);
    let mut owner: HashMap<V3, usize> = HashMap::new();
    let mut reps: Vec<LatticeVector> = Vec::new();
    let mut assignment = Vec::with_capacity(vectors.len());
    for v in vectors {
        let key = fast::from_lattice(&v.canonical());
        if let Some(&r) = key.as_ref().and_then(|k| owner.get(k)) {
            debug_assert_eq!(h.norm(&reps[r].to_quad_rat()), h.norm(&v.to_quad_rat()));
            if h.norm(&reps[r].to_quad_rat()) == h.norm(&v.to_quad_rat()) {
                assignment.push(r);
                continue;
            }
        }
        let r = reps.len();
        reps.push(v.canonical());
        assignment.push(r);
        let Some(start) = key else { continue };
        for w in orbit_ball(start, &fast_gens, word_bound) {
            let small = w.iter().all(|c| c.0.abs() <= max_height && c.1.abs() <= max_height);
            if small {
                owner.entry(w).or_insert(r);
            }
        }
    }
    Reduction { representatives: reps, assignment }
}

/// Canonical vectors reachable from `start` by words of length ≤ `depth`.
pub(crate) fn orbit_ball(start: V3, gens: &[M3], depth: u32) -> HashSet<V3> {
    let start = fast::canonical(start);
    let mut seen: HashSet<V3> = HashSet::from([start]);
    let mut frontier = vec![start];
    for _ in 0..depth {
        let mut next = Vec::new();
        for v in &frontier {
            for g in gens {
                if let Some(w) = fast::mat_vec(g, v) {
                    let w = fast::canonical(w);
                    if seen.insert(w) {
                        next.push(w);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::GammaGenerators;
    use crate::ring::{is_primitive, QuadInt};

    #[test]
    fn height_one_count_matches_unit_quotient_recount() {
        let h = HermitianForm::standard();
        let got = enumerate_positive_vectors(&h, 1);
        // independent count: all primitive positive tuples, then divide by |units|
        let mut all = 0;
        let r = -1..=1i64;
        for a in r.clone() { for b in r.clone() { for c in r.clone() {
            for d in r.clone() { for e in r.clone() { for f in r.clone() {
                let v = [QuadInt::new(a, b), QuadInt::new(c, d), QuadInt::new(e, f)];
                if v.iter().all(QuadInt::is_zero) || !is_primitive(&v).unwrap() {
                    continue;
                }
                if a * a + b * b + c * c + d * d - e * e - f * f > 0 {
                    all += 1;
                }
            }}}
        }}}
        assert_eq!(all % 4, 0);
        assert_eq!(got.len(), all / 4);
        assert!(got.contains(&LatticeVector::basis(0)));
        assert!(!got.contains(&LatticeVector::basis(2)));
        let mut sorted = got.clone();
        sorted.sort();
        assert_eq!(sorted, got);
    }

    #[test]
    fn reduction_examples() {
        let h = HermitianForm::standard();
        let gens = GammaGenerators::default_set().symmetric();
        let e1 = LatticeVector::basis(0);
        let moved = gens[0].apply_lattice(&e1).unwrap();
        let r = reduce_mod_gamma(&h, &[e1.clone(), moved], &gens, 1);
        assert_eq!(r.representatives.len(), 1);
        let three = LatticeVector::from_pairs([(1, 1), (1, 0), (0, 0)]);
        let r = reduce_mod_gamma(&h, &[e1.clone(), three.clone()], &gens, 4);
        assert_eq!(r.representatives.len(), 2);
        let input = enumerate_positive_vectors(&h, 1);
        let r = reduce_mod_gamma(&h, &input, &gens, 0);
        assert_eq!(r.representatives, input);
    }

    #[test]
    fn merges_respect_h_values() {
        let h = HermitianForm::standard();
        let gens = GammaGenerators::default_set().symmetric();
        let input = enumerate_positive_vectors(&h, 1);
        let r = reduce_mod_gamma(&h, &input, &gens, 3);
        assert!(r.representatives.len() < input.len());
        for (v, &k) in input.iter().zip(&r.assignment) {
            let rep = &r.representatives[k];
            assert_eq!(h.norm(&v.to_quad_rat()), h.norm(&rep.to_quad_rat()));
        }
    }
}
