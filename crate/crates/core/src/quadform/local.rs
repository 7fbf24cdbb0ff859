//! Local-global computations for diagonal forms over `Q`.
//!
//! Inputs are lists of squarefree integers. With `d` the determinant and
//! `s_v` the Hasse invariant `prod_{i<j} (a_i, a_j)_v`, a form is isotropic at
//! `v` iff
//!
//! * dim 2: `-d` is a square at `v`;
//! * dim 3: `s_v = (-1, -d)_v`;
//! * dim 4: `d` is not a square at `v`, or it is and `s_v = (-1, -1)_v`;
//! * dim >= 5: always at finite places, indefinite at the real place.
//!
//! Only the real place, 2 and primes dividing a coefficient need checking.

use crate::arith;
use crate::field::{hilbert_symbol, is_local_square, relevant_places, Place};

pub fn det(values: &[i64]) -> i64 {
    values.iter().fold(1, |acc, &a| arith::squarefree_mul(acc, a))
}

pub fn hasse(values: &[i64], v: Place) -> i8 {
    let mut s = 1;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            s *= hilbert_symbol(values[i], values[j], v);
        }
    }
    s
}

pub fn signature(values: &[i64]) -> i64 {
    values.iter().map(|&a| if a > 0 { 1 } else { -1 }).sum()
}

pub fn is_isotropic_at(values: &[i64], v: Place) -> bool {
    let d = det(values);
    match values.len() {
        0 | 1 => false,
        2 => is_local_square(-d, v),
        3 => hasse(values, v) == hilbert_symbol(-1, -d, v),
        4 => !is_local_square(d, v) || hasse(values, v) == hilbert_symbol(-1, -1, v),
        _ => v != Place::Real || signature(values).unsigned_abs() < values.len() as u64,
    }
}

pub fn is_isotropic(values: &[i64]) -> bool {
    match values.len() {
        0 | 1 => false,
        2 => arith::squarefree_mul(-values[0], values[1]) == 1,
        _ => relevant_places(values).into_iter().all(|v| is_isotropic_at(values, v)),
    }
}

/// Witt index from the classification of forms over `Q`.
///
/// For each candidate anisotropic dimension `m` (same parity as `n`,
/// at least `|signature|`) the invariants of the would-be anisotropic part
/// `phi` with `q = phi + k H` are derived and tested for existence:
/// `d_phi = d (-1)^k`, `s(phi) = s(q) s(kH) (d_phi, (-1)^k)`, and a form of
/// dimension `m` with these invariants exists iff `s_v = 1` when `m = 1`, or
/// when `m = 2` and `-d_phi` is a local square, plus the real conditions
/// `sign d_phi = (-1)^neg` and `s_inf = (-1)^(neg (neg-1)/2)`.
/// The least feasible `m` is the anisotropic dimension.
pub fn witt_index(values: &[i64]) -> usize {
    let n = values.len();
    let sigma = signature(values);
    let d = det(values);
    let places = relevant_places(values);
    let s_q: Vec<i8> = places.iter().map(|&v| hasse(values, v)).collect();
    let mut m = (sigma.unsigned_abs() as usize).max(n % 2);
    while m <= n {
        let k = (n - m) / 2;
        let sign_k: i64 = if k.is_multiple_of(2) { 1 } else { -1 };
        let d_phi = arith::squarefree_mul(d, sign_k);
        let neg = (m as i64 - sigma) / 2;
        let feasible = places.iter().zip(&s_q).all(|(&v, &sq)| {
            let s_kh = if (k * k.saturating_sub(1) / 2) % 2 == 1 { hilbert_symbol(-1, -1, v) } else { 1 };
            let s_phi = sq * s_kh * hilbert_symbol(d_phi, sign_k, v);
            match (m, v) {
                (0, _) => d_phi == 1 && s_phi == 1,
                (_, Place::Real) => {
                    let sign_ok = (d_phi > 0) == (neg % 2 == 0);
                    let s_ok = s_phi == if (neg * (neg - 1) / 2) % 2 == 0 { 1 } else { -1 };
                    sign_ok && s_ok && (m != 1 || s_phi == 1) && (m != 2 || !is_local_square(-d_phi, v) || s_phi == 1)
                }
                (1, _) => s_phi == 1,
                (2, _) => !is_local_square(-d_phi, v) || s_phi == 1,
                _ => true,
            }
        });
        if feasible {
            return k;
        }
        m += 2;
    }
    unreachable!("q itself is a form with its own invariants")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isotropy_examples() {
        assert!(!is_isotropic(&[1, 1, 1, 7]));
        assert!(!is_isotropic(&[1, 1, -7, -7]));
        assert!(is_isotropic(&[1, 1, 1, 1, -7]));
        assert!(!is_isotropic(&[1, 1, 1, -7]));
        assert!(is_isotropic(&[1, -1]));
        assert!(is_isotropic(&[1, 1, -2]));
        assert!(!is_isotropic(&[1, 1, -3]));
        assert!(!is_isotropic(&[1, 1, 1]));
        assert!(is_isotropic(&[2, 3, -5]));
    }

    #[test]
    fn witt_index_examples() {
        assert_eq!(witt_index(&[1, -1, 5]), 1);
        assert_eq!(witt_index(&[1, 1, 1, 7]), 0);
        let mut v = vec![1; 12];
        v.extend([7; 4]);
        v.extend([-1; 16]);
        assert_eq!(witt_index(&v), 16);
        assert_eq!(witt_index(&[1, 1, -1, -1]), 2);
        assert_eq!(witt_index(&[1, 1, -3, -3]), 0);
        assert_eq!(witt_index(&[1, 1, -2, -2]), 2);
        assert_eq!(witt_index(&[1, 1, 1, 1, -7]), 1);
        assert_eq!(witt_index(&[1, 1, 1, 1, 1, -1, -1, -1]), 3);
        assert_eq!(witt_index(&[]), 0);
    }
}
