//! Small Gaussian-integer arithmetic in checked `i64` for the hot loops
//! (stabilizer search, orbit balls). Overflow is reported as `None`.

use crate::hermitian::{IsometryMatrix, LatticeVector};
use crate::ring::QuadInt;

pub type G = (i64, i64);
pub type V3 = [G; 3];
pub type M3 = [[G; 3]; 3];

#[inline]
pub fn mul(a: G, b: G) -> Option<G> {
    let re = a.0.checked_mul(b.0)?.checked_sub(a.1.checked_mul(b.1)?)?;
    let im = a.0.checked_mul(b.1)?.checked_add(a.1.checked_mul(b.0)?)?;
    Some((re, im))
}

#[inline]
pub fn add(a: G, b: G) -> Option<G> {
    Some((a.0.checked_add(b.0)?, a.1.checked_add(b.1)?))
}

#[inline]
pub fn sub(a: G, b: G) -> Option<G> {
    Some((a.0.checked_sub(b.0)?, a.1.checked_sub(b.1)?))
}

#[inline]
pub fn conj(a: G) -> G {
    (a.0, -a.1)
}

pub fn mat_vec(m: &M3, v: &V3) -> Option<V3> {
    let mut out = [(0, 0); 3];
    for i in 0..3 {
        let mut acc = (0, 0);
        for j in 0..3 {
            acc = add(acc, mul(m[i][j], v[j])?)?;
        }
        out[i] = acc;
    }
    Some(out)
}

/// Multiply by the unit making the vector canonical: first nonzero
/// coordinate with re > 0 and im ≥ 0.
pub fn canonical(v: V3) -> V3 {
    let Some(lead) = v.iter().find(|c| **c != (0, 0)) else {
        return v;
    };
    let u = [(1, 0), (0, 1), (-1, 0), (0, -1)]
        .into_iter()
        .find(|&u| {
            let c = mul(u, *lead).expect("unit multiple cannot overflow");
            c.0 > 0 && c.1 >= 0
        })
        .expect("nonzero Gaussian integers have a first-quadrant associate");
    v.map(|c| mul(u, c).expect("unit multiple cannot overflow"))
}

pub fn from_lattice(v: &LatticeVector) -> Option<V3> {
    let c = |q: &QuadInt| Some((q.re.to_i64()?, q.im.to_i64()?));
    Some([c(&v.coords[0])?, c(&v.coords[1])?, c(&v.coords[2])?])
}

pub fn to_lattice(v: &V3) -> LatticeVector {
    LatticeVector::from_pairs(*v)
}

pub fn from_isometry(g: &IsometryMatrix) -> Option<M3> {
    let m = g.to_quad_ints()?;
    let mut out = [[(0, 0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (m[i][j].re.to_i64()?, m[i][j].im.to_i64()?);
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_agrees_with_exact_rule() {
        for a in -3..=3 {
            for b in -3..=3 {
                let v = [(0, 0), (a, b), (b, 1)];
                let exact = to_lattice(&v).canonical();
                assert_eq!(to_lattice(&canonical(v)), exact, "{v:?}");
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        assert!(mul((i64::MAX, 0), (2, 0)).is_none());
        assert_eq!(mul((1, 1), (1, -1)), Some((2, 0)));
    }
}
