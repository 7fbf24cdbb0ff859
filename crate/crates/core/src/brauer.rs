//! 2-torsion Brauer classes written as sums of quaternion symbols.
//!
//! Over a tower `k((x))` every class splits uniquely as `C0 + (x, r)` with
//! `C0` a class of `k` and `r` a square class of `k`, using
//! `(u x, v) = (u, v) + (x, v)` and `(u x, v x) = (u x, -u v)`.
//! A class is trivial iff `C0` is trivial and `r` is a square.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{relevant_places, BaseField, FieldDesc, SquareClass};
use crate::quadform::QForm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerClass2 {
    field: FieldDesc,
    symbols: Vec<(SquareClass, SquareClass)>,
}

/// One level of the residue decomposition `c = c0 + (x_top, ramification)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueSplit {
    pub c0: BrauerClass2,
    pub ramification: SquareClass,
}

impl BrauerClass2 {
    pub fn trivial(field: &FieldDesc) -> Self {
        BrauerClass2 { field: field.clone(), symbols: Vec::new() }
    }

    pub fn symbol(field: &FieldDesc, a: SquareClass, b: SquareClass) -> Self {
        Self::from_symbols(field, vec![(a, b)])
    }

    /// Builds a class and applies the symbol relations that need no search:
    /// symmetry, `(a, a) = (a, -1)`, `(1, b) = (a, -a) = 0`, and cancellation
    /// of repeated symbols.
    pub fn from_symbols(field: &FieldDesc, symbols: Vec<(SquareClass, SquareClass)>) -> Self {
        let one = field.one();
        let mut normal: Vec<(SquareClass, SquareClass)> = Vec::new();
        for (a, mut b) in symbols {
            if a == b {
                b = field.neg_one();
            }
            if a == one || b == one || field.mul(a, b) == field.neg_one() {
                continue;
            }
            let pair = if a <= b { (a, b) } else { (b, a) };
            if let Some(pos) = normal.iter().position(|&s| s == pair) {
                normal.remove(pos);
            } else {
                normal.push(pair);
            }
        }
        normal.sort();
        BrauerClass2 { field: field.clone(), symbols: normal }
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn symbols(&self) -> &[(SquareClass, SquareClass)] {
        &self.symbols
    }

    pub fn add(&self, other: &BrauerClass2) -> Result<BrauerClass2> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        let mut all = self.symbols.clone();
        all.extend_from_slice(&other.symbols);
        Ok(Self::from_symbols(&self.field, all))
    }

    /// The same symbols over an extension of the field.
    pub fn lift(&self, field: &FieldDesc) -> Result<BrauerClass2> {
        if !field.extends(&self.field) {
            return Err(Error::FieldMismatch(self.field.to_string(), field.to_string()));
        }
        Ok(Self::from_symbols(field, self.symbols.clone()))
    }

    /// Splits off the top variable: `c = c0 + (x_top, ramification)`.
    pub fn canonicalize(&self) -> Result<ResidueSplit> {
        let f = &self.field;
        let lower = f.shallower()?;
        let mut c0 = Vec::new();
        let mut ram = lower.one();
        for &(a, b) in &self.symbols {
            let (u, ea) = f.residue_split(a)?;
            let (v, eb) = f.residue_split(b)?;
            match (ea, eb) {
                (false, false) => c0.push((u, v)),
                (true, false) => {
                    c0.push((u, v));
                    ram = lower.mul(ram, v);
                }
                (false, true) => {
                    c0.push((u, v));
                    ram = lower.mul(ram, u);
                }
                (true, true) => {
                    let w = lower.neg(lower.mul(u, v));
                    c0.push((u, w));
                    ram = lower.mul(ram, w);
                }
            }
        }
        Ok(ResidueSplit { c0: Self::from_symbols(&lower, c0), ramification: ram })
    }

    /// Full decomposition down to the base: the base class and the
    /// ramification at each variable, innermost first.
    pub fn residue_chain(&self) -> Result<(BrauerClass2, Vec<SquareClass>)> {
        let mut rams = Vec::new();
        let mut c = self.clone();
        while c.field.depth() > 0 {
            let split = c.canonicalize()?;
            rams.push(split.ramification);
            c = split.c0;
        }
        rams.reverse();
        Ok((c, rams))
    }

    /// Local invariant at each relevant place (base `Q` only).
    pub fn local_invariants(&self) -> Result<Vec<(crate::field::Place, i8)>> {
        if self.field.base() != BaseField::Rationals || self.field.depth() > 0 {
            return Err(Error::UnsupportedField("local invariants need a class over Q".into()));
        }
        let values: Vec<i64> = self.symbols.iter().flat_map(|(a, b)| [a.base, b.base]).collect();
        let mut out = Vec::new();
        for v in relevant_places(&values) {
            let mut s = 1;
            for &(a, b) in &self.symbols {
                s *= self.field.hilbert_symbol(a, b, v)?;
            }
            out.push((v, s));
        }
        Ok(out)
    }

    pub fn is_trivial(&self) -> bool {
        if self.symbols.is_empty() {
            return true;
        }
        if self.field.depth() == 0 {
            return match self.field.base() {
                BaseField::PrimeField(_) => true,
                BaseField::Rationals => self.local_invariants().expect("base Q").iter().all(|&(_, s)| s == 1),
            };
        }
        let split = self.canonicalize().expect("depth >= 1");
        split.c0.field.is_square(split.ramification) && split.c0.is_trivial()
    }

    pub fn equals(&self, other: &BrauerClass2) -> Result<bool> {
        Ok(self.add(other)?.is_trivial())
    }

    /// Schur index, restricted to 1, 2 or 4.
    ///
    /// Over `Q` a nontrivial class has index 2. Over a tower a class with at
    /// most two symbols uses the Albert form `<a,b,-ab,-c,-d,cd>`, which is
    /// anisotropic iff the index is 4. Longer classes go through the residue
    /// formula: for `c = c0 + (x, r)` the index is `ind(c0)` if `r` is a
    /// square and `2 ind(c0 over k(sqrt r))` otherwise.
    pub fn schur_index(&self) -> Result<u32> {
        if self.is_trivial() {
            return Ok(1);
        }
        if self.field.depth() == 0 {
            return Ok(2);
        }
        if self.symbols.len() <= 2 {
            return Ok(self.albert_index());
        }
        let idx = self.residue_index()?;
        if idx > 4 {
            return Err(Error::Unsupported(format!("Schur index {idx} exceeds 4")));
        }
        Ok(idx)
    }

    /// Index of a nontrivial class with at most two symbols via Albert's form.
    pub fn albert_index(&self) -> u32 {
        match self.symbols.len() {
            0 => 1,
            1 => 2,
            2 => {
                if self.albert_form().expect("two symbols").is_isotropic() {
                    2
                } else {
                    4
                }
            }
            _ => panic!("albert_index needs at most two symbols"),
        }
    }

    /// `<a, b, -ab, -c, -d, cd>` for `(a,b) + (c,d)`.
    pub fn albert_form(&self) -> Option<QForm> {
        if self.symbols.len() != 2 {
            return None;
        }
        let f = &self.field;
        let [(a, b), (c, d)] = [self.symbols[0], self.symbols[1]];
        Some(QForm::new(f.clone(), vec![a, b, f.neg(f.mul(a, b)), f.neg(c), f.neg(d), f.mul(c, d)]))
    }

    /// Schur index by the residue formula, without the two-symbol shortcut.
    pub fn residue_index(&self) -> Result<u32> {
        residue_index(&self.field, self.symbols.clone(), false)
    }
}

/// `collapsed` means the base `F_p` has been replaced by `F_{p^2}`, where
/// every base class is a square.
fn residue_index(field: &FieldDesc, symbols: Vec<(SquareClass, SquareClass)>, collapsed: bool) -> Result<u32> {
    let symbols = if collapsed { collapse(symbols) } else { symbols };
    let c = BrauerClass2::from_symbols(field, symbols);
    if field.depth() == 0 {
        if collapsed {
            return Ok(1);
        }
        return Ok(if c.is_trivial() { 1 } else { 2 });
    }
    let split = c.canonicalize()?;
    let lower = split.c0.field.clone();
    let mut r = split.ramification;
    if collapsed {
        r.base = 1;
    }
    if lower.is_square(r) {
        return residue_index(&lower, split.c0.symbols, collapsed);
    }
    if r.bits == 0 {
        return match lower.base() {
            BaseField::PrimeField(_) => Ok(2 * residue_index(&lower, split.c0.symbols, true)?),
            BaseField::Rationals => Err(Error::Unsupported(format!("index over Q(sqrt {}) is out of scope", r.base))),
        };
    }
    // adjoin t = sqrt(r): with r = x_j w, x_j becomes w up to squares
    let j = 63 - r.bits.leading_zeros() as usize;
    let w = SquareClass { base: r.base, bits: r.bits & !(1 << j) };
    let map = |a: SquareClass| {
        if a.bits >> j & 1 == 1 {
            lower.mul(SquareClass { base: a.base, bits: a.bits & !(1 << j) }, w)
        } else {
            a
        }
    };
    let mapped: Vec<_> = split.c0.symbols.iter().map(|&(a, b)| (map(a), map(b))).collect();
    Ok(2 * residue_index(&lower, mapped, collapsed)?)
}

fn collapse(symbols: Vec<(SquareClass, SquareClass)>) -> Vec<(SquareClass, SquareClass)> {
    symbols.into_iter().map(|(a, b)| (SquareClass { base: 1, ..a }, SquareClass { base: 1, ..b })).collect()
}

/// `sum_{i<j} (a_i, a_j)`.
pub fn hasse_invariant(q: &QForm) -> BrauerClass2 {
    let c = q.coeffs();
    let mut symbols = Vec::new();
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            symbols.push((c[i], c[j]));
        }
    }
    BrauerClass2::from_symbols(q.field(), symbols)
}

/// Clifford invariant from the Hasse invariant `s` and determinant `d`:
/// dim 1,2 mod 8: `s`; 3,4: `s + (-1,-d)`; 5,6: `s + (-1,-1)`; 7,0: `s + (-1,d)`.
pub fn clifford_invariant(q: &QForm) -> BrauerClass2 {
    let f = q.field();
    let s = hasse_invariant(q);
    let d = q.determinant();
    let m1 = f.neg_one();
    let extra = match q.dim() % 8 {
        1 | 2 => None,
        3 | 4 => Some((m1, f.neg(d))),
        5 | 6 => Some((m1, m1)),
        _ => Some((m1, d)),
    };
    match extra {
        Some(sym) => s.add(&BrauerClass2::symbol(f, sym.0, sym.1)).expect("same field"),
        None => s,
    }
}

impl fmt::Display for BrauerClass2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.symbols.iter().map(|&(a, b)| format!("({},{})", self.field.render(a), self.field.render(b))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
