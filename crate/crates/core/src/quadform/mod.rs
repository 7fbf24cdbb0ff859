//! Diagonal quadratic forms: composition, isotropy, Witt decomposition,
//! isometry, subforms, represented values and signatures.
//!
//! Over a tower the coefficients are grouped by their exponent bits. By
//! Springer's theorem, applied one variable at a time, a form is isotropic iff
//! one of its residue groups is, and its Witt index is the sum of the Witt
//! indices of the groups. Over `F_p` everything follows from dimension and
//! determinant; over `Q` from the local-global principle.

pub mod local;
pub mod oracle;
pub mod split;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{BaseField, FieldDesc, Ordering, SquareClass};

pub use oracle::{brute_force_isotropy, Budget, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QForm {
    field: FieldDesc,
    coeffs: Vec<SquareClass>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittDecomp {
    pub witt_index: usize,
    pub anisotropic_part: QForm,
}

impl QForm {
    pub fn new(field: FieldDesc, coeffs: Vec<SquareClass>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| field.contains(c)), "coefficient outside {field}");
        QForm { field, coeffs }
    }

    pub fn empty(field: FieldDesc) -> Self {
        QForm { field, coeffs: Vec::new() }
    }

    pub fn from_ints(field: &FieldDesc, values: &[i64]) -> Result<Self> {
        let coeffs = values.iter().map(|&v| field.int(v)).collect::<Result<_>>()?;
        Ok(QForm::new(field.clone(), coeffs))
    }

    /// `n` copies of `<c>`.
    pub fn times(field: &FieldDesc, n: usize, c: SquareClass) -> Self {
        QForm::new(field.clone(), vec![c; n])
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn coeffs(&self) -> &[SquareClass] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    fn check_field(&self, other: &QForm) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    pub fn orthogonal_sum(&self, other: &QForm) -> Result<QForm> {
        self.check_field(other)?;
        let mut coeffs = self.coeffs.clone();
        coeffs.extend_from_slice(&other.coeffs);
        Ok(QForm::new(self.field.clone(), coeffs))
    }

    pub fn tensor(&self, other: &QForm) -> Result<QForm> {
        self.check_field(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .flat_map(|&a| other.coeffs.iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.field.mul(a, b))
            .collect();
        Ok(QForm::new(self.field.clone(), coeffs))
    }

    pub fn scale(&self, c: SquareClass) -> QForm {
        QForm::new(self.field.clone(), self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect())
    }

    pub fn negate(&self) -> QForm {
        self.scale(self.field.neg_one())
    }

    /// Sorted copy; equal sorted forms are isometric.
    pub fn sorted(&self) -> QForm {
        let mut coeffs = self.coeffs.clone();
        coeffs.sort();
        QForm::new(self.field.clone(), coeffs)
    }

    /// The same coefficients viewed over an extension `field` of this field.
    pub fn lift(&self, field: &FieldDesc) -> Result<QForm> {
        if !field.extends(&self.field) {
            return Err(Error::FieldMismatch(self.field.to_string(), field.to_string()));
        }
        Ok(QForm::new(field.clone(), self.coeffs.clone()))
    }

    /// Product of the coefficients; 1 for the empty form.
    pub fn determinant(&self) -> SquareClass {
        self.field.product(self.coeffs.iter().copied())
    }

    /// `(-1)^(n(n-1)/2) det`.
    pub fn signed_det(&self) -> SquareClass {
        let n = self.dim();
        let d = self.determinant();
        if (n * n.saturating_sub(1) / 2) % 2 == 1 {
            self.field.neg(d)
        } else {
            d
        }
    }

    /// Base values of the coefficients, grouped by exponent bits.
    pub fn residue_groups(&self) -> BTreeMap<u64, Vec<i64>> {
        let mut groups: BTreeMap<u64, Vec<i64>> = BTreeMap::new();
        for c in &self.coeffs {
            groups.entry(c.bits).or_default().push(c.base);
        }
        groups
    }

    pub fn is_isotropic(&self) -> bool {
        self.residue_groups().values().any(|g| base_isotropic(self.field.base(), g))
    }

    pub fn is_anisotropic(&self) -> bool {
        !self.is_isotropic()
    }

    pub fn witt_index(&self) -> usize {
        self.residue_groups().values().map(|g| base_witt_index(self.field.base(), g)).sum()
    }

    pub fn witt_decompose(&self) -> Result<WittDecomp> {
        self.witt_decompose_capped(split::DEFAULT_STEP_CAP)
    }

    /// Witt decomposition with an explicit search cap for the rational splitting.
    pub fn witt_decompose_capped(&self, cap: u64) -> Result<WittDecomp> {
        let mut index = 0;
        let mut coeffs = Vec::new();
        for (bits, group) in self.residue_groups() {
            let (i, an) = base_anisotropic_part(&self.field, &group, cap)?;
            index += i;
            coeffs.extend(an.into_iter().map(|base| SquareClass { base, bits }));
        }
        Ok(WittDecomp { witt_index: index, anisotropic_part: QForm::new(self.field.clone(), coeffs) })
    }

    pub fn is_hyperbolic(&self) -> bool {
        2 * self.witt_index() == self.dim()
    }

    pub fn isometric(&self, other: &QForm) -> Result<bool> {
        self.check_field(other)?;
        if self.dim() != other.dim() {
            return Ok(false);
        }
        if self.sorted() == other.sorted() {
            return Ok(true);
        }
        Ok(self.orthogonal_sum(&other.negate())?.witt_index() == self.dim())
    }

    /// Whether `self` is isometric to a subform of `other`.
    pub fn is_subform_of(&self, other: &QForm) -> Result<bool> {
        self.check_field(other)?;
        if self.dim() > other.dim() {
            return Ok(false);
        }
        Ok(other.orthogonal_sum(&self.negate())?.witt_index() >= self.dim())
    }

    pub fn represents(&self, c: SquareClass) -> bool {
        if self.is_isotropic() {
            return true;
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.push(self.field.neg(c));
        QForm::new(self.field.clone(), coeffs).is_isotropic()
    }

    pub fn signature(&self, ordering: &Ordering) -> Result<i64> {
        self.coeffs.iter().map(|&c| self.field.sign_at(c, ordering).map(i64::from)).sum()
    }

    /// Whether the form is indefinite at `ordering`.
    pub fn is_indefinite_at(&self, ordering: &Ordering) -> Result<bool> {
        Ok(self.signature(ordering)?.unsigned_abs() < self.dim() as u64)
    }

    pub fn brute_force_isotropy(&self, budget: &Budget) -> Option<Witness> {
        oracle::brute_force_isotropy(self, budget)
    }

    /// Coefficients with the top variable bit clear and set (the latter with
    /// the bit removed), over the shallower field.
    pub fn top_split(&self) -> Result<(QForm, QForm)> {
        let lower = self.field.shallower()?;
        let mut p = Vec::new();
        let mut r = Vec::new();
        for &c in &self.coeffs {
            let (u, top) = self.field.residue_split(c)?;
            if top {
                r.push(u);
            } else {
                p.push(u);
            }
        }
        Ok((QForm::new(lower.clone(), p), QForm::new(lower, r)))
    }
}

pub fn is_subform(p: &QForm, q: &QForm) -> Result<bool> {
    p.is_subform_of(q)
}

fn base_isotropic(base: BaseField, values: &[i64]) -> bool {
    match base {
        BaseField::Rationals => local::is_isotropic(values),
        BaseField::PrimeField(p) => match values.len() {
            0 | 1 => false,
            2 => {
                let f = FieldDesc::prime_field(p).expect("odd prime");
                let det = f.product(values.iter().map(|&b| SquareClass { base: b, bits: 0 }));
                f.is_square(f.neg(det))
            }
            _ => true,
        },
    }
}

fn base_witt_index(base: BaseField, values: &[i64]) -> usize {
    match base {
        BaseField::Rationals => local::witt_index(values),
        BaseField::PrimeField(p) => ff_witt(p, values).0,
    }
}

/// Witt index and anisotropic part over `F_p` from dimension and determinant.
fn ff_witt(p: u64, values: &[i64]) -> (usize, Vec<i64>) {
    let f = FieldDesc::prime_field(p).expect("odd prime");
    let n = values.len();
    let det = f.product(values.iter().map(|&b| SquareClass { base: b, bits: 0 }));
    let minus = f.neg_one();
    let pow = |k: usize| if k.is_multiple_of(2) { f.one() } else { minus };
    if n % 2 == 1 {
        let i = n / 2;
        (i, vec![f.mul(det, pow(i)).base])
    } else if n == 0 || det == pow(n / 2) {
        (n / 2, Vec::new())
    } else {
        let i = n / 2 - 1;
        (i, vec![1, f.mul(det, pow(i)).base])
    }
}

fn base_anisotropic_part(field: &FieldDesc, values: &[i64], cap: u64) -> Result<(usize, Vec<i64>)> {
    match field.base() {
        BaseField::Rationals => split::anisotropic_part(values, cap),
        BaseField::PrimeField(p) => Ok(ff_witt(p, values)),
    }
}

impl fmt::Display for QForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|&c| self.field.render(c)).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qx(vars: &[&str]) -> FieldDesc {
        FieldDesc::new(BaseField::Rationals, vars.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn form(f: &FieldDesc, terms: &[(i64, &[i64])]) -> QForm {
        QForm::new(f.clone(), terms.iter().map(|(n, e)| f.canonical_square_class(*n as i128, 1, e).unwrap()).collect())
    }

    #[test]
    fn sums_and_products() {
        let q = FieldDesc::rationals();
        let a = QForm::from_ints(&q, &[1, 2]).unwrap();
        let b = QForm::from_ints(&q, &[3]).unwrap();
        assert_eq!(a.orthogonal_sum(&b).unwrap(), QForm::from_ints(&q, &[1, 2, 3]).unwrap());
        assert_eq!(a.orthogonal_sum(&QForm::empty(q.clone())).unwrap(), a);
        let t = QForm::from_ints(&q, &[1, 1]).unwrap().tensor(&QForm::from_ints(&q, &[1, 7]).unwrap()).unwrap();
        assert_eq!(t, QForm::from_ints(&q, &[1, 7, 1, 7]).unwrap());
        let four = QForm::from_ints(&q, &[1, 1, 1, 1]).unwrap();
        assert_eq!(four.scale(q.int(7).unwrap()), QForm::from_ints(&q, &[7, 7, 7, 7]).unwrap());
        let f = qx(&["x"]);
        assert!(matches!(a.orthogonal_sum(&QForm::from_ints(&f, &[1]).unwrap()), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn product_gap_shape() {
        let q = FieldDesc::rationals();
        let pi = QForm::from_ints(&q, &[1, 1, 1, 1]).unwrap();
        let f = QForm::from_ints(&q, &[1, 1, 1, 7]).unwrap();
        let prod = pi.tensor(&f).unwrap();
        assert_eq!(prod.coeffs().iter().filter(|c| c.base == 1).count(), 12);
        assert_eq!(prod.coeffs().iter().filter(|c| c.base == 7).count(), 4);
        let sixteen = QForm::times(&q, 16, q.one());
        assert!(prod.isometric(&sixteen).unwrap());
        let decomp = prod.orthogonal_sum(&sixteen.negate()).unwrap().witt_decompose().unwrap();
        assert_eq!(decomp.witt_index, 16);
        assert_eq!(decomp.anisotropic_part.dim(), 0);
    }

    #[test]
    fn determinants() {
        let q = FieldDesc::rationals();
        assert_eq!(QForm::from_ints(&q, &[1, 1, 1, 7]).unwrap().determinant(), q.int(7).unwrap());
        let f = qx(&["x", "y"]);
        let g = form(&f, &[(1, &[]), (-1, &[1]), (-1, &[0, 1]), (1, &[1, 1])]);
        assert_eq!(g.determinant(), f.one());
        assert_eq!(QForm::from_ints(&q, &[1, -1]).unwrap().signed_det(), q.one());
        assert_eq!(QForm::empty(q.clone()).determinant(), q.one());
    }

    #[test]
    fn isotropy_examples() {
        let q = FieldDesc::rationals();
        assert!(!QForm::from_ints(&q, &[1, 1, 1, 7]).unwrap().is_isotropic());
        assert!(!QForm::from_ints(&q, &[1, 1, -7, -7]).unwrap().is_isotropic());
        assert!(QForm::from_ints(&q, &[1, 1, 1, 1, -7]).unwrap().is_isotropic());
        let f = qx(&["x"]);
        assert!(!form(&f, &[(1, &[]), (-1, &[1])]).is_isotropic());
        let fp = FieldDesc::prime_field(7).unwrap().extend("x").unwrap();
        assert!(!form(&fp, &[(1, &[]), (-1, &[1])]).is_isotropic());
        assert!(form(&fp, &[(1, &[]), (1, &[]), (1, &[])]).is_isotropic());
        // -1 is a non-square mod 7, a square mod 5
        assert!(!form(&fp, &[(1, &[]), (1, &[])]).is_isotropic());
        let f5 = FieldDesc::prime_field(5).unwrap();
        assert!(QForm::from_ints(&f5, &[1, 1]).unwrap().is_isotropic());
    }

    #[test]
    fn witt_examples() {
        let q = FieldDesc::rationals();
        let d = QForm::from_ints(&q, &[1, -1, 5]).unwrap().witt_decompose().unwrap();
        assert_eq!(d.witt_index, 1);
        assert_eq!(d.anisotropic_part, QForm::from_ints(&q, &[5]).unwrap());
        let f = qx(&["x"]);
        let g = form(&f, &[(1, &[]), (1, &[]), (1, &[1]), (-1, &[1])]);
        let d = g.witt_decompose().unwrap();
        assert_eq!(d.witt_index, 1);
        assert_eq!(d.anisotropic_part, form(&f, &[(1, &[]), (1, &[])]));
    }

    #[test]
    fn finite_field_decomposition() {
        let f7 = FieldDesc::prime_field(7).unwrap();
        for values in [&[1i64, 1][..], &[1, 3], &[1, 1, 1], &[3, 3, 3, 1], &[1, 1, 1, 1], &[1, 3, 1, 3]] {
            let q = QForm::from_ints(&f7, values).unwrap();
            let d = q.witt_decompose().unwrap();
            assert_eq!(d.anisotropic_part.dim() + 2 * d.witt_index, q.dim());
            assert!(!d.anisotropic_part.is_isotropic());
            let h = QForm::from_ints(&f7, &[1, -1]).unwrap();
            let mut rebuilt = d.anisotropic_part.clone();
            for _ in 0..d.witt_index {
                rebuilt = rebuilt.orthogonal_sum(&h).unwrap();
            }
            assert_eq!(rebuilt.determinant(), q.determinant(), "{values:?}");
        }
    }

    #[test]
    fn isometry_and_subforms() {
        let q = FieldDesc::rationals();
        let four = QForm::from_ints(&q, &[1, 1, 1, 1]).unwrap();
        assert!(four.scale(q.int(7).unwrap()).isometric(&four).unwrap());
        assert!(QForm::from_ints(&q, &[1, 2]).unwrap().isometric(&QForm::from_ints(&q, &[2, 1]).unwrap()).unwrap());
        assert!(!QForm::from_ints(&q, &[1, 1]).unwrap().isometric(&QForm::from_ints(&q, &[1, 7]).unwrap()).unwrap());
        assert!(QForm::from_ints(&q, &[1, 1, 1]).unwrap().is_subform_of(&four).unwrap());
        assert!(!QForm::from_ints(&q, &[-1]).unwrap().is_subform_of(&QForm::from_ints(&q, &[1, 1]).unwrap()).unwrap());
        let sixteen = QForm::times(&q, 16, q.one());
        assert!(QForm::from_ints(&q, &[1, 1, 1, 7]).unwrap().is_subform_of(&sixteen).unwrap());
    }

    #[test]
    fn represented_values() {
        let q = FieldDesc::rationals();
        assert!(QForm::from_ints(&q, &[1, 1, 1, 1]).unwrap().represents(q.int(7).unwrap()));
        assert!(!QForm::from_ints(&q, &[1, 1]).unwrap().represents(q.neg_one()));
        let f = qx(&["x"]);
        assert!(form(&f, &[(1, &[]), (1, &[1])]).represents(f.var(0)));
    }

    #[test]
    fn signatures() {
        let q = FieldDesc::rationals();
        let p = q.ordering(&[]).unwrap();
        assert_eq!(QForm::from_ints(&q, &[1, 1, 1, 7]).unwrap().signature(&p).unwrap(), 4);
        let f = qx(&["x", "y"]);
        let pos = f.ordering(&[false, false]).unwrap();
        let tau2 = form(&f, &[(1, &[]), (1, &[]), (-1, &[1]), (-1, &[0, 1]), (1, &[1, 1])]);
        assert_eq!(tau2.signature(&pos).unwrap(), 1);
        let a = form(&f, &[(1, &[]), (1, &[1])]);
        let b = form(&f, &[(1, &[]), (-1, &[0, 1])]);
        let prod = a.tensor(&b).unwrap();
        assert_eq!(prod.signature(&pos).unwrap(), 0);
        assert_eq!(a.signature(&pos).unwrap() * b.signature(&pos).unwrap(), 0);
    }

    #[test]
    fn oracle_examples() {
        let f7 = FieldDesc::prime_field(7).unwrap();
        let q = QForm::from_ints(&f7, &[1, 1, 1]).unwrap();
        let w = q.brute_force_isotropy(&Budget::sufficient_prime_field()).unwrap();
        assert_eq!(w, vec![vec![1], vec![2], vec![3]]);
        assert!(oracle::evaluates_to_zero(&q, &vec![vec![2], vec![1], vec![3]], 1));
        let r = FieldDesc::rationals();
        let q5 = QForm::from_ints(&r, &[1, 1, 1, 1, -7]).unwrap();
        let w = q5.brute_force_isotropy(&Budget::rational(2)).unwrap();
        assert!(oracle::evaluates_to_zero(&q5, &w, 1));
        assert!(oracle::evaluates_to_zero(&q5, &vec![vec![2], vec![1], vec![1], vec![1], vec![1]], 1));
        let fx = f7.extend("x").unwrap();
        let aniso = form(&fx, &[(1, &[]), (-1, &[1])]);
        for window in 1..=3 {
            let b = Budget { height: 0, window, max_vectors: 50_000_000 };
            assert!(aniso.brute_force_isotropy(&b).is_none());
        }
    }
}
