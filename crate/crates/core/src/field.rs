//! Fields, square classes, Hilbert symbols and orderings.
//!
//! Supported fields are `Q`, `F_p` for odd primes `p`, and iterated Laurent
//! series towers `K((x_1))((x_2))...((x_n))` over either of them. Every nonzero
//! square class of such a tower is `a * x_1^e_1 * ... * x_n^e_n` with `a` a
//! base square class and `e_i` in {0, 1}, which is what [`SquareClass`] stores.
//!
//! Over `F_p` the base class is `1` or the least positive quadratic
//! non-residue modulo `p`.

use std::fmt;

use crate::arith;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseField {
    Rationals,
    PrimeField(u64),
}

/// A base field together with an ordered list of Laurent variables,
/// innermost first. The last variable is the top of the tower.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldDesc {
    base: BaseField,
    vars: Vec<String>,
}

/// A nonzero element up to squares.
///
/// `base` is a squarefree integer over `Q`, and `1` or the fixed non-residue
/// over `F_p`. Bit `i` of `bits` is the parity of the exponent of variable `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    pub base: i64,
    pub bits: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Real,
    Prime(u64),
}

/// An ordering of a tower over `Q`: the sign of each variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ordering {
    neg_mask: u64,
    depth: usize,
}

pub const MAX_DEPTH: usize = 63;

impl FieldDesc {
    pub fn rationals() -> Self {
        FieldDesc { base: BaseField::Rationals, vars: Vec::new() }
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        if p < 3 || !arith::is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not an odd prime")));
        }
        Ok(FieldDesc { base: BaseField::PrimeField(p), vars: Vec::new() })
    }

    pub fn new(base: BaseField, vars: Vec<String>) -> Result<Self> {
        let mut f = match base {
            BaseField::Rationals => Self::rationals(),
            BaseField::PrimeField(p) => Self::prime_field(p)?,
        };
        for v in vars {
            f = f.extend(&v)?;
        }
        Ok(f)
    }

    /// Appends a new top variable.
    pub fn extend(&self, var: &str) -> Result<Self> {
        if self.vars.iter().any(|v| v == var) {
            return Err(Error::InvalidField(format!("duplicate variable `{var}`")));
        }
        if self.vars.len() >= MAX_DEPTH {
            return Err(Error::InvalidField("tower too deep".into()));
        }
        if var.is_empty() || !var.chars().next().unwrap().is_ascii_alphabetic() {
            return Err(Error::InvalidField(format!("bad variable name `{var}`")));
        }
        let mut vars = self.vars.clone();
        vars.push(var.to_string());
        Ok(FieldDesc { base: self.base, vars })
    }

    /// Appends `m` variables with names not yet in use (`x1`, `x2`, ...).
    pub fn extend_fresh(&self, m: usize) -> Result<Self> {
        let mut f = self.clone();
        let mut k = 1;
        for _ in 0..m {
            while f.vars.iter().any(|v| *v == format!("x{k}")) {
                k += 1;
            }
            f = f.extend(&format!("x{k}"))?;
        }
        Ok(f)
    }

    /// The field with the top variable removed.
    pub fn shallower(&self) -> Result<Self> {
        if self.vars.is_empty() {
            return Err(Error::NotATower);
        }
        Ok(FieldDesc { base: self.base, vars: self.vars[..self.vars.len() - 1].to_vec() })
    }

    pub fn base(&self) -> BaseField {
        self.base
    }

    pub fn base_field(&self) -> FieldDesc {
        FieldDesc { base: self.base, vars: Vec::new() }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn depth(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Whether `self` is `other` with zero or more variables appended.
    pub fn extends(&self, other: &FieldDesc) -> bool {
        self.base == other.base && self.vars.starts_with(&other.vars)
    }

    pub fn is_real(&self) -> bool {
        self.base == BaseField::Rationals
    }

    /// The non-residue used as the nontrivial base class of `F_p`.
    pub fn non_residue(&self) -> Option<i64> {
        match self.base {
            BaseField::Rationals => None,
            BaseField::PrimeField(p) => Some(arith::least_non_residue(p) as i64),
        }
    }

    pub fn one(&self) -> SquareClass {
        SquareClass { base: 1, bits: 0 }
    }

    pub fn neg_one(&self) -> SquareClass {
        self.int(-1).expect("-1 is a unit")
    }

    /// Class of the top variable, or of variable `i`.
    pub fn var(&self, i: usize) -> SquareClass {
        assert!(i < self.depth());
        SquareClass { base: 1, bits: 1 << i }
    }

    pub fn int(&self, n: i64) -> Result<SquareClass> {
        self.canonical_square_class(n as i128, 1, &[])
    }

    /// Canonical class of `numerator / denominator * prod x_i^monomial[i]`.
    pub fn canonical_square_class(&self, numerator: i128, denominator: i128, monomial: &[i64]) -> Result<SquareClass> {
        if numerator == 0 {
            return Err(Error::DegenerateElement("zero coefficient".into()));
        }
        if denominator == 0 {
            return Err(Error::DegenerateElement("zero denominator".into()));
        }
        if monomial.len() > self.depth() {
            return Err(Error::InvalidField(format!(
                "monomial has {} exponents but the tower has depth {}",
                monomial.len(),
                self.depth()
            )));
        }
        let mut bits = 0u64;
        for (i, e) in monomial.iter().enumerate() {
            if e.rem_euclid(2) == 1 {
                bits |= 1 << i;
            }
        }
        let base = match self.base {
            BaseField::Rationals => {
                let a = arith::squarefree_part(numerator)?;
                let b = arith::squarefree_part(denominator)?;
                arith::squarefree_mul(a, b)
            }
            BaseField::PrimeField(p) => {
                let n = numerator.rem_euclid(p as i128);
                let d = denominator.rem_euclid(p as i128);
                if n == 0 || d == 0 {
                    return Err(Error::DegenerateElement(format!("{numerator}/{denominator} vanishes in F_{p}")));
                }
                let prod = (n * d % p as i128) as i64;
                if arith::legendre(prod, p)? == 1 {
                    1
                } else {
                    arith::least_non_residue(p) as i64
                }
            }
        };
        Ok(SquareClass { base, bits })
    }

    pub fn mul(&self, a: SquareClass, b: SquareClass) -> SquareClass {
        SquareClass { base: arith::squarefree_mul(a.base, b.base), bits: a.bits ^ b.bits }
    }

    pub fn neg(&self, a: SquareClass) -> SquareClass {
        self.mul(a, self.neg_one())
    }

    pub fn product(&self, items: impl IntoIterator<Item = SquareClass>) -> SquareClass {
        items.into_iter().fold(self.one(), |acc, c| self.mul(acc, c))
    }

    pub fn is_square(&self, a: SquareClass) -> bool {
        a == self.one()
    }

    /// Whether `a` is a valid canonical class of this field.
    pub fn contains(&self, a: SquareClass) -> bool {
        let bits_ok = self.depth() == 64 || a.bits >> self.depth() == 0;
        let base_ok = match self.base {
            BaseField::Rationals => a.base != 0 && arith::squarefree_part(a.base as i128) == Ok(a.base),
            BaseField::PrimeField(_) => a.base == 1 || Some(a.base) == self.non_residue(),
        };
        bits_ok && base_ok
    }

    /// Splits `a = u * x_top^e` with `u` a class of the shallower field.
    pub fn residue_split(&self, a: SquareClass) -> Result<(SquareClass, bool)> {
        if self.vars.is_empty() {
            return Err(Error::NotATower);
        }
        let top = 1u64 << (self.depth() - 1);
        Ok((SquareClass { base: a.base, bits: a.bits & !top }, a.bits & top != 0))
    }

    /// Inverse of [`FieldDesc::residue_split`].
    pub fn recompose(&self, unit: SquareClass, top_bit: bool) -> Result<SquareClass> {
        if self.vars.is_empty() {
            return Err(Error::NotATower);
        }
        let top = 1u64 << (self.depth() - 1);
        Ok(SquareClass { base: unit.base, bits: if top_bit { unit.bits | top } else { unit.bits } })
    }

    pub fn ordering(&self, negative_vars: &[bool]) -> Result<Ordering> {
        if !self.is_real() {
            return Err(Error::NoOrdering);
        }
        if negative_vars.len() != self.depth() {
            return Err(Error::InvalidField("ordering needs one sign per variable".into()));
        }
        let mut neg_mask = 0;
        for (i, &neg) in negative_vars.iter().enumerate() {
            if neg {
                neg_mask |= 1 << i;
            }
        }
        Ok(Ordering { neg_mask, depth: self.depth() })
    }

    /// All orderings of the field; empty over `F_p`.
    pub fn orderings(&self) -> Vec<Ordering> {
        if !self.is_real() {
            return Vec::new();
        }
        (0..1u64 << self.depth()).map(|neg_mask| Ordering { neg_mask, depth: self.depth() }).collect()
    }

    pub fn sign_at(&self, a: SquareClass, ordering: &Ordering) -> Result<i8> {
        if !self.is_real() {
            return Err(Error::NoOrdering);
        }
        if ordering.depth != self.depth() {
            return Err(Error::InvalidField("ordering belongs to another tower".into()));
        }
        let mut s = if a.base < 0 { -1 } else { 1 };
        if (a.bits & ordering.neg_mask).count_ones() % 2 == 1 {
            s = -s;
        }
        Ok(s)
    }

    /// Hilbert symbol of two classes of `Q` at a place.
    pub fn hilbert_symbol(&self, a: SquareClass, b: SquareClass, v: Place) -> Result<i8> {
        if self.base != BaseField::Rationals || a.bits != 0 || b.bits != 0 {
            return Err(Error::UnsupportedField("Hilbert symbols need classes of Q".into()));
        }
        Ok(hilbert_symbol(a.base, b.base, v))
    }

    pub fn render(&self, a: SquareClass) -> String {
        let mut parts = Vec::new();
        if a.base != 1 || a.bits == 0 {
            parts.push(a.base.to_string());
        }
        for (i, v) in self.vars.iter().enumerate() {
            if a.bits >> i & 1 == 1 {
                parts.push(v.clone());
            }
        }
        let s = parts.join("*");
        if a.base == -1 && a.bits != 0 {
            format!("-{}", &s[3..])
        } else {
            s
        }
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base {
            BaseField::Rationals => write!(f, "Q")?,
            BaseField::PrimeField(p) => write!(f, "Fp({p})")?,
        }
        if !self.vars.is_empty() {
            write!(f, "[[{}]]", self.vars.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl Ordering {
    pub fn is_negative(&self, var: usize) -> bool {
        self.neg_mask >> var & 1 == 1
    }
}

/// Hilbert symbol `(a, b)_v` of nonzero integers.
///
/// Odd `p`: with `a = p^al u`, `b = p^be w`,
/// `(a,b)_p = (-1)^(al be (p-1)/2) (u/p)^be (w/p)^al`.
/// `p = 2`: `(-1)^(eps(u) eps(w) + al omega(w) + be omega(u))` with
/// `eps(u) = (u-1)/2`, `omega(u) = (u^2-1)/8` mod 2.
pub fn hilbert_symbol(a: i64, b: i64, v: Place) -> i8 {
    assert!(a != 0 && b != 0, "Hilbert symbol of zero");
    match v {
        Place::Real => {
            if a < 0 && b < 0 {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (al, u) = arith::split_valuation(a, 2);
            let (be, w) = arith::split_valuation(b, 2);
            let eps = |x: i64| ((x.rem_euclid(4) - 1) / 2) as u32;
            let omega = |x: i64| {
                let r = x.rem_euclid(8);
                if r == 3 || r == 5 {
                    1
                } else {
                    0
                }
            };
            let e = eps(u) * eps(w) + al * omega(w) + be * omega(u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (al, u) = arith::split_valuation(a, p);
            let (be, w) = arith::split_valuation(b, p);
            let mut s: i8 = if (al * be) % 2 == 1 && (p - 1) / 2 % 2 == 1 { -1 } else { 1 };
            if be % 2 == 1 {
                s *= arith::legendre(u, p).expect("unit");
            }
            if al % 2 == 1 {
                s *= arith::legendre(w, p).expect("unit");
            }
            s
        }
    }
}

/// The places at which `(a, b)` can be nontrivial: the real place, 2, and
/// the odd primes dividing `a b`.
pub fn relevant_places(values: &[i64]) -> Vec<Place> {
    let mut primes = vec![2u64];
    for &x in values {
        for p in arith::prime_divisors(x.unsigned_abs() as u128) {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    primes.sort_unstable();
    let mut out = vec![Place::Real];
    out.extend(primes.into_iter().map(Place::Prime));
    out
}

/// Whether the squarefree integer `d` is a square in the completion at `v`.
pub fn is_local_square(d: i64, v: Place) -> bool {
    match v {
        Place::Real => d > 0,
        Place::Prime(2) => d.rem_euclid(8) == 1,
        Place::Prime(p) => d % p as i64 != 0 && arith::legendre(d, p) == Ok(1),
    }
}
