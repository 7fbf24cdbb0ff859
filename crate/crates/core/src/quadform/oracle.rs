//! Exhaustive isotropy search, independent of the Springer and
//! Hasse-Minkowski machinery.
//!
//! Each coordinate of a candidate vector is a polynomial in the tower
//! variables with exponents in `[0, window)` per variable, and coefficients in
//! `[-height, height]` over `Q` or all of `F_p`. The form is evaluated exactly
//! as a Laurent polynomial. Candidates are visited in lexicographic order of
//! coefficient index, so the returned witness is the least one.
//!
//! Coefficient order over `Q` is `0, 1, -1, 2, -2, ...`.
//!
//! For forms with monomial coefficients, constant vectors (`window = 1`) are a
//! sufficient budget over `F_p` towers: a form is isotropic iff one of its
//! residue groups is, and a zero of that group over `F_p` is a constant
//! witness.

use super::QForm;
use crate::field::BaseField;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub height: u32,
    pub window: u32,
    pub max_vectors: u64,
}

impl Budget {
    pub fn sufficient_prime_field() -> Self {
        Budget { height: 0, window: 1, max_vectors: 50_000_000 }
    }

    pub fn rational(height: u32) -> Self {
        Budget { height, window: 1, max_vectors: 50_000_000 }
    }
}

/// A witness: per coordinate, the coefficients of its polynomial indexed by
/// exponent vectors in `[0, window)^depth` (first variable fastest).
pub type Witness = Vec<Vec<i64>>;

struct Layout {
    depth: usize,
    window: usize,
    acc_side: usize,
}

impl Layout {
    fn monomials(&self) -> usize {
        self.window.pow(self.depth as u32)
    }

    fn acc_len(&self) -> usize {
        self.acc_side.pow(self.depth as u32)
    }

    fn exps(&self, mut idx: usize, side: usize) -> Vec<usize> {
        (0..self.depth)
            .map(|_| {
                let e = idx % side;
                idx /= side;
                e
            })
            .collect()
    }

    fn acc_index(&self, exps: &[usize]) -> usize {
        exps.iter().rev().fold(0, |acc, &e| acc * self.acc_side + e)
    }
}

fn coefficient_values(q: &QForm, budget: &Budget) -> Vec<i64> {
    match q.field().base() {
        BaseField::PrimeField(p) => (0..p as i64).collect(),
        BaseField::Rationals => {
            let mut v = vec![0];
            for h in 1..=budget.height as i64 {
                v.push(h);
                v.push(-h);
            }
            v
        }
    }
}

/// Contribution `a * X^2` of one coordinate polynomial to the accumulator.
fn contribution(layout: &Layout, coeff_base: i64, bits: u64, poly: &[i64], modulus: Option<i64>) -> Vec<i128> {
    let mut out = vec![0i128; layout.acc_len()];
    let mons = layout.monomials();
    for s in 0..mons {
        if poly[s] == 0 {
            continue;
        }
        let es = layout.exps(s, layout.window);
        for t in 0..mons {
            if poly[t] == 0 {
                continue;
            }
            let et = layout.exps(t, layout.window);
            let exps: Vec<usize> = (0..layout.depth).map(|i| es[i] + et[i] + ((bits >> i) & 1) as usize).collect();
            let idx = layout.acc_index(&exps);
            out[idx] += coeff_base as i128 * poly[s] as i128 * poly[t] as i128;
        }
    }
    if let Some(m) = modulus {
        for x in out.iter_mut() {
            *x = x.rem_euclid(m as i128);
        }
    }
    out
}

/// Searches for an exact nonzero zero of `q` within `budget`.
pub fn brute_force_isotropy(q: &QForm, budget: &Budget) -> Option<Witness> {
    let depth = q.field().depth();
    let window = budget.window.max(1) as usize;
    let layout = Layout { depth, window, acc_side: 2 * window };
    let modulus = match q.field().base() {
        BaseField::PrimeField(p) => Some(p as i64),
        BaseField::Rationals => None,
    };
    let values = coefficient_values(q, budget);
    let mons = layout.monomials();
    let n_cands = values.len().checked_pow(mons as u32)?;
    let total = (n_cands as u64).checked_pow(q.dim() as u32).unwrap_or(u64::MAX);
    if total > budget.max_vectors || q.dim() == 0 {
        return None;
    }
    let polys: Vec<Vec<i64>> = (0..n_cands)
        .map(|mut idx| {
            (0..mons)
                .map(|_| {
                    let c = values[idx % values.len()];
                    idx /= values.len();
                    c
                })
                .collect()
        })
        .collect();
    let contribs: Vec<Vec<Vec<i128>>> = q
        .coeffs()
        .iter()
        .map(|c| polys.iter().map(|p| contribution(&layout, c.base, c.bits, p, modulus)).collect())
        .collect();

    let n = q.dim();
    let mut choice = vec![0usize; n];
    let mut accs = vec![vec![0i128; layout.acc_len()]; n + 1];
    let reduce = |x: i128| match modulus {
        Some(m) => x.rem_euclid(m as i128),
        None => x,
    };
    // iterative depth-first search over coordinates
    let mut level = 0;
    loop {
        if level == n {
            if choice.iter().any(|&c| c != 0) && accs[n].iter().all(|&x| x == 0) {
                return Some(choice.iter().map(|&c| polys[c].clone()).collect());
            }
            level -= 1;
            if !advance(&mut choice, &mut level, n_cands) {
                return None;
            }
        }
        let next: Vec<i128> =
            accs[level].iter().zip(&contribs[level][choice[level]]).map(|(&a, &b)| reduce(a + b)).collect();
        accs[level + 1] = next;
        level += 1;
    }
}

/// Moves to the next candidate at `level`, backtracking as needed.
fn advance(choice: &mut [usize], level: &mut usize, n_cands: usize) -> bool {
    loop {
        choice[*level] += 1;
        if choice[*level] < n_cands {
            return true;
        }
        choice[*level] = 0;
        if *level == 0 {
            return false;
        }
        *level -= 1;
    }
}

/// Exact evaluation of `q` at a witness; true iff the value is zero.
pub fn evaluates_to_zero(q: &QForm, w: &Witness, window: u32) -> bool {
    let depth = q.field().depth();
    let window = window.max(1) as usize;
    let layout = Layout { depth, window, acc_side: 2 * window };
    let modulus = match q.field().base() {
        BaseField::PrimeField(p) => Some(p as i64),
        BaseField::Rationals => None,
    };
    let mut acc = vec![0i128; layout.acc_len()];
    for (c, poly) in q.coeffs().iter().zip(w) {
        for (a, b) in acc.iter_mut().zip(contribution(&layout, c.base, c.bits, poly, None)) {
            *a += b;
        }
    }
    acc.iter().all(|&x| match modulus {
        Some(m) => x.rem_euclid(m as i128) == 0,
        None => x == 0,
    })
}
