//! Constructive hyperbolic splitting over `Q`.
//!
//! Repeatedly find an isotropic vector of a small isotropic subform, split off
//! the hyperbolic plane it spans together with a coordinate vector, and
//! re-diagonalize the orthogonal complement with exact rationals.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::local;
use crate::arith;
use crate::error::{Error, Result};

/// Default cap on the number of vectors examined per splitting call.
pub const DEFAULT_STEP_CAP: u64 = 50_000_000;

/// Returns the Witt index and the anisotropic part of `<values>`.
pub fn anisotropic_part(values: &[i64], cap: u64) -> Result<(usize, Vec<i64>)> {
    let mut rest = values.to_vec();
    let mut index = 0;
    let mut steps = 0u64;
    loop {
        index += cancel_pairs(&mut rest);
        if !local::is_isotropic(&rest) {
            return Ok((index, rest));
        }
        let chosen = pick_subform(&rest);
        let sub: Vec<i64> = chosen.iter().map(|&i| rest[i]).collect();
        let v = isotropic_vector(&sub, cap, &mut steps)?;
        let complement = hyperbolic_complement(&sub, &v)?;
        let mut next: Vec<i64> =
            rest.iter().enumerate().filter(|(i, _)| !chosen.contains(i)).map(|(_, &a)| a).collect();
        next.extend(complement);
        rest = next;
        index += 1;
    }
}

fn cancel_pairs(values: &mut Vec<i64>) -> usize {
    let mut count = 0;
    let mut i = 0;
    while i < values.len() {
        if let Some(j) = (i + 1..values.len()).find(|&j| values[j] == -values[i]) {
            values.remove(j);
            values.remove(i);
            count += 1;
        } else {
            i += 1;
        }
    }
    count
}

/// Indices of an isotropic subform of dimension at most 5, preferring small
/// dimension and small coefficients since both shrink the vector search.
fn pick_subform(values: &[i64]) -> Vec<usize> {
    if values.len() <= 4 {
        return (0..values.len()).collect();
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by_key(|&i| (values[i].unsigned_abs(), values[i], i));
    let pos: Vec<usize> = order.iter().copied().filter(|&i| values[i] > 0).take(4).collect();
    let neg: Vec<usize> = order.iter().copied().filter(|&i| values[i] < 0).take(4).collect();
    let pool: Vec<usize> = pos.iter().chain(&neg).copied().collect();
    let height = |s: &[usize]| s.iter().map(|&i| values[i].unsigned_abs() as u128).product::<u128>();
    for k in 3..=4 {
        let mut best: Option<Vec<usize>> = None;
        for_each_subset(pool.len(), k, &mut |idx| {
            let s: Vec<usize> = idx.iter().map(|&t| pool[t]).collect();
            if best.as_ref().is_none_or(|b| height(&s) < height(b)) {
                let sub: Vec<i64> = s.iter().map(|&i| values[i]).collect();
                if local::is_isotropic(&sub) {
                    best = Some(s);
                }
            }
        });
        if let Some(mut s) = best {
            s.sort_unstable();
            return s;
        }
    }
    let mut chosen = vec![pos[0], neg[0]];
    chosen.extend(order.iter().filter(|i| !chosen.contains(i)).take(3).copied().collect::<Vec<_>>());
    chosen.sort_unstable();
    chosen
}

fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    go(0, n, k, &mut Vec::new(), f);
}

/// Least-height nonzero integer zero of `sum a_i x_i^2`, by meet in the middle
/// over doubling height bounds.
pub fn isotropic_vector(values: &[i64], cap: u64, steps: &mut u64) -> Result<Vec<i64>> {
    let k = values.len();
    let half = k / 2;
    let (left, right) = values.split_at(half);
    let mut h: i64 = 1;
    loop {
        let round = ((h + 1) as u64)
            .saturating_pow(left.len() as u32)
            .saturating_add(((h + 1) as u64).saturating_pow(right.len() as u32));
        if steps.saturating_add(round) > cap {
            return Err(Error::ResourceExceeded(format!("no isotropic vector of height < {h} for {values:?}")));
        }
        let mut seen: HashMap<i128, Vec<i64>> = HashMap::new();
        for_each_vector(left.len(), h, &mut |x| {
            *steps += 1;
            seen.entry(eval(left, x)).or_insert_with(|| x.to_vec());
            true
        });
        let mut found = None;
        for_each_vector(right.len(), h, &mut |y| {
            *steps += 1;
            if let Some(x) = seen.get(&-eval(right, y)) {
                if x.iter().chain(y).any(|&c| c != 0) {
                    found = Some(x.iter().chain(y).copied().collect::<Vec<_>>());
                    return false;
                }
            }
            true
        });
        if let Some(v) = found {
            return Ok(v);
        }
        h *= 2;
    }
}

fn eval(values: &[i64], x: &[i64]) -> i128 {
    values.iter().zip(x).map(|(&a, &c)| a as i128 * c as i128 * c as i128).sum()
}

/// Visits all vectors in `[0, h]^len`; the callback returns false to stop.
fn for_each_vector(len: usize, h: i64, f: &mut dyn FnMut(&[i64]) -> bool) {
    let mut x = vec![0i64; len];
    loop {
        if !f(&x) {
            return;
        }
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            if x[i] < h {
                x[i] += 1;
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Diagonal entries (as squarefree integers) of the orthogonal complement of
/// the hyperbolic plane spanned by the isotropic `v` and a coordinate vector.
pub fn hyperbolic_complement(values: &[i64], v: &[i64]) -> Result<Vec<i64>> {
    let k = values.len();
    let j = (0..k).find(|&i| v[i] != 0).expect("nonzero vector");
    let other = (j + 1..k).find(|&i| v[i] != 0).expect("isotropic vector has two nonzero entries");
    let a: Vec<Q> = values.iter().map(|&x| q(x)).collect();
    let vq: Vec<Q> = v.iter().map(|&x| q(x)).collect();
    let bil = |x: &[Q], y: &[Q]| -> Q { (0..k).fold(Q::zero(), |acc, i| acc + &a[i] * &x[i] * &y[i]) };
    let unit = |i: usize| -> Vec<Q> { (0..k).map(|t| if t == i { q(1) } else { q(0) }).collect() };
    let w = unit(j);
    let b = bil(&vq, &w);
    let aj = a[j].clone();
    let mut basis = Vec::new();
    for t in (0..k).filter(|&t| t != j && t != other) {
        let u = unit(t);
        let beta = bil(&u, &vq) / &b;
        let alpha = (bil(&u, &w) - &aj * &beta) / &b;
        let proj: Vec<Q> = (0..k).map(|i| &u[i] - &alpha * &vq[i] - &beta * &w[i]).collect();
        basis.push(proj);
    }
    let gram: Vec<Vec<Q>> = basis.iter().map(|x| basis.iter().map(|y| bil(x, y)).collect()).collect();
    diagonalize(gram)?.into_iter().map(|r| rational_class(&r)).collect()
}

/// Diagonal entries of a nondegenerate symmetric rational matrix.
pub fn diagonalize(mut g: Vec<Vec<Q>>) -> Result<Vec<Q>> {
    let mut out = Vec::new();
    while !g.is_empty() {
        let n = g.len();
        if g[0][0].is_zero() {
            if let Some(i) = (1..n).find(|&i| !g[i][i].is_zero()) {
                g.swap(0, i);
                for row in g.iter_mut() {
                    row.swap(0, i);
                }
            } else if let Some(j) = (1..n).find(|&j| !g[0][j].is_zero()) {
                // e_0 <- e_0 + e_j
                let row_j = g[j].clone();
                for (t, add) in row_j.into_iter().enumerate() {
                    g[0][t] += add;
                }
                for row in g.iter_mut() {
                    let add = row[j].clone();
                    row[0] += add;
                }
            } else {
                return Err(Error::DegenerateElement("degenerate Gram matrix".into()));
            }
        }
        let p = g[0][0].clone();
        out.push(p.clone());
        let next: Vec<Vec<Q>> = (1..n).map(|i| (1..n).map(|t| &g[i][t] - &g[i][0] * &g[0][t] / &p).collect()).collect();
        g = next;
    }
    Ok(out)
}

/// Squarefree integer in the square class of a nonzero rational.
pub fn rational_class(r: &Q) -> Result<i64> {
    let too_big = || Error::ResourceExceeded(format!("rational {r} too large to classify"));
    let n = r.numer().abs().to_i128().ok_or_else(too_big)?;
    let d = r.denom().to_i128().ok_or_else(too_big)?;
    let sign = if r.is_negative() { -1 } else { 1 };
    Ok(arith::squarefree_mul(sign * arith::squarefree_part(n)?, arith::squarefree_part(d)?))
}
