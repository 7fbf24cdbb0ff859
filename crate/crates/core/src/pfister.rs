//! Pfister forms: expansion, recognition up to similarity, neighbours and
//! their complementary forms, excellence, roundness, and passing properties
//! up and down generic Pfister multiples `q (x) <<-x1,...,-xm>>`.

use std::fmt;

use crate::brauer::clifford_invariant;
use crate::error::{Error, Result};
use crate::field::{FieldDesc, SquareClass};
use crate::quadform::{is_subform, QForm};

/// `<<b1,...,bn>> = <1,-b1> (x) ... (x) <1,-bn>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PfisterSpec {
    pub field: FieldDesc,
    pub slots: Vec<SquareClass>,
}

impl PfisterSpec {
    pub fn new(field: &FieldDesc, slots: Vec<SquareClass>) -> Self {
        PfisterSpec { field: field.clone(), slots }
    }

    pub fn folds(&self) -> usize {
        self.slots.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.slots.len()
    }

    pub fn expand(&self) -> QForm {
        expand_pfister(self)
    }

    pub fn lift(&self, field: &FieldDesc) -> Result<PfisterSpec> {
        if !field.extends(&self.field) {
            return Err(Error::FieldMismatch(self.field.to_string(), field.to_string()));
        }
        Ok(PfisterSpec { field: field.clone(), slots: self.slots.clone() })
    }
}

impl fmt::Display for PfisterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.slots.iter().map(|&s| self.field.render(s)).collect();
        write!(f, "pf({})", parts.join(","))
    }
}

pub fn expand_pfister(pi: &PfisterSpec) -> QForm {
    let f = &pi.field;
    let mut coeffs = vec![f.one()];
    for &b in &pi.slots {
        let nb = f.neg(b);
        let twisted: Vec<SquareClass> = coeffs.iter().map(|&c| f.mul(c, nb)).collect();
        coeffs.extend(twisted);
    }
    QForm::new(f.clone(), coeffs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PfisterMatch {
    /// `q = scalar * expand(pfister)`.
    Similar {
        pfister: PfisterSpec,
        scalar: SquareClass,
    },
    NotSimilar,
    Unknown,
}

impl PfisterMatch {
    pub fn is_similar(&self) -> bool {
        matches!(self, PfisterMatch::Similar { .. })
    }
}

fn require_anisotropic(q: &QForm) -> Result<()> {
    if q.is_isotropic() {
        return Err(Error::Isotropic);
    }
    Ok(())
}

/// Decides whether the anisotropic form `q` is similar to a Pfister form.
pub fn similar_to_pfister(q: &QForm, candidate: Option<&PfisterSpec>) -> Result<PfisterMatch> {
    require_anisotropic(q)?;
    let f = q.field();
    if let Some(pi) = candidate {
        if pi.field != *f {
            return Err(Error::FieldMismatch(pi.field.to_string(), f.to_string()));
        }
        let Some(&c) = q.coeffs().first() else {
            return Ok(PfisterMatch::NotSimilar);
        };
        return Ok(if q.isometric(&pi.expand().scale(c))? {
            PfisterMatch::Similar { pfister: pi.clone(), scalar: c }
        } else {
            PfisterMatch::NotSimilar
        });
    }
    let n = q.dim();
    if n == 0 || !n.is_power_of_two() {
        return Ok(PfisterMatch::NotSimilar);
    }
    let a1 = q.coeffs()[0];
    let normalized = q.scale(a1);
    let c = normalized.coeffs();
    match n {
        1 => Ok(PfisterMatch::Similar { pfister: PfisterSpec::new(f, vec![]), scalar: a1 }),
        2 => Ok(PfisterMatch::Similar { pfister: PfisterSpec::new(f, vec![f.neg(c[1])]), scalar: a1 }),
        4 => {
            if !f.is_square(q.determinant()) {
                return Ok(PfisterMatch::NotSimilar);
            }
            let pi = PfisterSpec::new(f, vec![f.neg(c[1]), f.neg(c[2])]);
            Ok(PfisterMatch::Similar { pfister: pi, scalar: a1 })
        }
        8 => {
            if !f.is_square(q.determinant()) || !clifford_invariant(&normalized).is_trivial() {
                return Ok(PfisterMatch::NotSimilar);
            }
            match recover_slots(&normalized)? {
                Some(pi) => Ok(PfisterMatch::Similar { pfister: pi, scalar: a1 }),
                None => Ok(PfisterMatch::Unknown),
            }
        }
        _ => Ok(PfisterMatch::Unknown),
    }
}

/// Slots of a Pfister form `phi` with `phi` representing 1, built by
/// repeatedly doubling a Pfister subform by a value of its complement.
/// Returns `None` when the result does not verify.
fn recover_slots(phi: &QForm) -> Result<Option<PfisterSpec>> {
    let f = phi.field();
    let mut pi = PfisterSpec::new(f, vec![]);
    while pi.dim() < phi.dim() {
        let rest = phi.orthogonal_sum(&pi.expand().negate())?.witt_decompose()?.anisotropic_part;
        if rest.dim() != phi.dim() - pi.dim() {
            return Ok(None);
        }
        pi.slots.push(f.neg(rest.coeffs()[0]));
        if !pi.expand().is_subform_of(phi)? {
            return Ok(None);
        }
    }
    Ok(if phi.isometric(&pi.expand())? { Some(pi) } else { None })
}

/// Certificate that `form (+) complementary = scalar * expand(ambient)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborWitness {
    pub ambient: PfisterSpec,
    pub scalar: SquareClass,
    pub complementary: QForm,
}

impl NeighborWitness {
    /// Re-checks the defining isometry and the dimension condition.
    pub fn verify(&self, form: &QForm) -> Result<bool> {
        let lhs = form.orthogonal_sum(&self.complementary)?;
        Ok(2 * form.dim() > self.ambient.dim() && lhs.isometric(&self.ambient.expand().scale(self.scalar))?)
    }
}

pub fn is_neighbor(q: &QForm, pi: &PfisterSpec) -> Result<Option<NeighborWitness>> {
    require_anisotropic(q)?;
    if pi.field != *q.field() {
        return Err(Error::FieldMismatch(pi.field.to_string(), q.field().to_string()));
    }
    if 2 * q.dim() <= pi.dim() {
        return Ok(None);
    }
    let c = q.coeffs()[0];
    let ambient = pi.expand().scale(c);
    if !is_subform(q, &ambient)? {
        return Ok(None);
    }
    let complementary = ambient.orthogonal_sum(&q.negate())?.witt_decompose()?.anisotropic_part;
    Ok(Some(NeighborWitness { ambient: pi.clone(), scalar: c, complementary }))
}

pub fn complementary_form(q: &QForm, pi: &PfisterSpec) -> Result<QForm> {
    is_neighbor(q, pi)?.map(|w| w.complementary).ok_or(Error::NotANeighbor)
}

/// An anisotropic 5-dimensional form is a Pfister neighbour iff the
/// Clifford invariant has Schur index at most 2.
pub fn dim5_neighbor_test(q: &QForm) -> Result<bool> {
    if q.dim() != 5 {
        return Err(Error::DimensionError(format!("expected dimension 5, got {}", q.dim())));
    }
    require_anisotropic(q)?;
    Ok(clifford_invariant(q).schur_index()? <= 2)
}

/// Three-valued answer for properties that may be out of reach.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    Refuted,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Verified => "verified",
            Verdict::Refuted => "refuted",
            Verdict::Unknown => "unknown",
        })
    }
}

/// Neighbour status found without an ambient candidate.
enum AutoNeighbor {
    /// A neighbour whose complementary form is known to be excellent.
    ExcellentComplement,
    Witness(NeighborWitness),
    NotNeighbor,
    Unknown,
}

fn auto_neighbor(q: &QForm) -> Result<AutoNeighbor> {
    let f = q.field();
    let c = q.coeffs();
    Ok(match q.dim() {
        0 | 1 => AutoNeighbor::ExcellentComplement,
        2 => AutoNeighbor::ExcellentComplement,
        3 => {
            let (a, b, cc) = (c[0], c[1], c[2]);
            let pi = PfisterSpec::new(f, vec![f.neg(f.mul(a, b)), f.neg(f.mul(a, cc))]);
            match is_neighbor(q, &pi)? {
                Some(w) => AutoNeighbor::Witness(w),
                None => AutoNeighbor::Unknown,
            }
        }
        4 | 8 => match similar_to_pfister(q, None)? {
            PfisterMatch::Similar { .. } => AutoNeighbor::ExcellentComplement,
            PfisterMatch::NotSimilar => AutoNeighbor::NotNeighbor,
            PfisterMatch::Unknown => AutoNeighbor::Unknown,
        },
        5 => match dim5_neighbor_test(q) {
            Ok(true) => AutoNeighbor::ExcellentComplement,
            Ok(false) => AutoNeighbor::NotNeighbor,
            Err(Error::Unsupported(_)) => AutoNeighbor::Unknown,
            Err(e) => return Err(e),
        },
        _ => AutoNeighbor::Unknown,
    })
}

/// Excellence: dimension at most 1, or a Pfister neighbour whose
/// complementary form is excellent. `chain` supplies the ambient Pfister
/// form at each level; levels without one use dimension-specific detection.
pub fn is_excellent(q: &QForm, chain: Option<&[PfisterSpec]>) -> Result<Verdict> {
    require_anisotropic(q)?;
    let chain = chain.unwrap_or(&[]);
    if let Some(pi) = chain.iter().find(|pi| pi.field != *q.field()) {
        return Err(Error::WitnessError(format!("chain entry {pi} is over {}", pi.field)));
    }
    let mut current = q.clone();
    let mut level = 0;
    loop {
        if current.dim() <= 1 {
            if level < chain.len() {
                return Err(Error::WitnessError(format!(
                    "chain has {} entries but only {level} levels are needed",
                    chain.len()
                )));
            }
            return Ok(Verdict::Verified);
        }
        if let Some(pi) = chain.get(level) {
            if let Some(w) = is_neighbor(&current, pi)? {
                current = w.complementary;
                level += 1;
                continue;
            }
        }
        return Ok(match auto_neighbor(&current)? {
            AutoNeighbor::ExcellentComplement => Verdict::Verified,
            AutoNeighbor::Witness(w) => {
                current = w.complementary;
                level += 1;
                continue;
            }
            AutoNeighbor::NotNeighbor => Verdict::Refuted,
            AutoNeighbor::Unknown => Verdict::Unknown,
        });
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RoundCheck {
    Pass,
    Fail(SquareClass),
}

/// Compares represented values with similarity factors on `samples`.
/// A pass says nothing about values outside the sample set.
pub fn round_check_sampled(q: &QForm, samples: &[SquareClass]) -> RoundCheck {
    for &c in samples {
        let represented = q.represents(c);
        let similar = q.isometric(&q.scale(c)).expect("same field");
        if represented != similar {
            return RoundCheck::Fail(c);
        }
    }
    let one = q.field().one();
    if !q.represents(one) {
        return RoundCheck::Fail(one);
    }
    RoundCheck::Pass
}

/// `q (x) <<-x1,...,-xm>>` over the field with `m` fresh variables.
pub fn generic_ascend(q: &QForm, m: usize) -> Result<QForm> {
    require_anisotropic(q)?;
    let base = q.field();
    let f = base.extend_fresh(m)?;
    let slots = (base.depth()..f.depth()).map(|i| f.neg(f.var(i))).collect();
    q.lift(&f)?.tensor(&PfisterSpec::new(&f, slots).expand())
}

/// Property to carry down from a generic Pfister multiple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DescentProperty {
    /// Neighbour of `rho (x) <<-x...>>`; without `rho` the base form is
    /// tested by dimension-specific detection.
    Neighbor(Option<PfisterSpec>),
    /// Multiple of `rho (x) <<-x...>>`.
    Multiple(PfisterSpec),
    /// Roundness on the given base samples.
    Round(Vec<SquareClass>),
    /// Excellence, with an optional base chain.
    Excellent(Option<Vec<PfisterSpec>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseWitness {
    None,
    /// `q (+) gamma = scalar * rho`.
    Complement(NeighborWitness),
    /// `q = multiplier (x) rho`.
    Multiplier(QForm),
    /// A sample that breaks roundness.
    RoundFailure(SquareClass),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Descent {
    pub base_form: QForm,
    pub levels: usize,
    pub verdict: Verdict,
    pub witness: BaseWitness,
}

/// Peels `levels` factors `<1, x_top>` off `q`. Each step requires the
/// coefficients with and without the top variable to agree as multisets.
pub fn generic_factor(q: &QForm, levels: usize) -> Result<QForm> {
    let mut current = q.clone();
    for _ in 0..levels {
        let (p, r) = current.top_split()?;
        if p.sorted() != r.sorted() {
            return Err(Error::NoGenericFactor);
        }
        current = p;
    }
    Ok(current)
}

/// Number of top variables that peel off syntactically.
pub fn generic_depth(q: &QForm) -> usize {
    let mut n = 0;
    let mut current = q.clone();
    while current.field().depth() > 0 && current.dim() > 0 {
        match generic_factor(&current, 1) {
            Ok(p) => {
                current = p;
                n += 1;
            }
            Err(_) => break,
        }
    }
    n
}

pub fn generic_descend(q: &QForm, levels: usize, property: &DescentProperty) -> Result<Descent> {
    require_anisotropic(q)?;
    let base = generic_factor(q, levels)?;
    let field = base.field().clone();
    let check_field = |pi: &PfisterSpec| {
        if pi.field == field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(pi.field.to_string(), field.to_string()))
        }
    };
    let (verdict, witness) = match property {
        DescentProperty::Neighbor(Some(rho)) => {
            check_field(rho)?;
            match is_neighbor(&base, rho)? {
                Some(w) => (Verdict::Verified, BaseWitness::Complement(w)),
                None => (Verdict::Refuted, BaseWitness::None),
            }
        }
        DescentProperty::Neighbor(None) => match auto_neighbor(&base)? {
            AutoNeighbor::ExcellentComplement => (Verdict::Verified, BaseWitness::None),
            AutoNeighbor::Witness(w) => (Verdict::Verified, BaseWitness::Complement(w)),
            AutoNeighbor::NotNeighbor => (Verdict::Refuted, BaseWitness::None),
            AutoNeighbor::Unknown => (Verdict::Unknown, BaseWitness::None),
        },
        DescentProperty::Multiple(rho) => {
            check_field(rho)?;
            match multiplier(&base, rho)? {
                Some(m) => (Verdict::Verified, BaseWitness::Multiplier(m)),
                None => (Verdict::Refuted, BaseWitness::None),
            }
        }
        DescentProperty::Round(samples) => {
            if let Some(&s) = samples.iter().find(|&&s| !field.contains(s)) {
                return Err(Error::FieldMismatch(format!("{s:?}"), field.to_string()));
            }
            let base_check = round_check_sampled(&base, samples);
            let tower_check = tower_round_failure(q, &base, samples)?;
            if tower_check.is_some() != matches!(base_check, RoundCheck::Fail(_)) {
                return Err(Error::WitnessError("tower and base roundness disagree".into()));
            }
            match base_check {
                RoundCheck::Pass => (Verdict::Verified, BaseWitness::None),
                RoundCheck::Fail(c) => (Verdict::Refuted, BaseWitness::RoundFailure(c)),
            }
        }
        DescentProperty::Excellent(chain) => {
            if let Some(chain) = chain {
                chain.iter().try_for_each(check_field)?;
            }
            (is_excellent(&base, chain.as_deref())?, BaseWitness::None)
        }
    };
    Ok(Descent { base_form: base, levels, verdict, witness })
}

/// Greedy decomposition `q = a1 rho (+) a2 rho (+) ...` with each `ai` the
/// first coefficient of what remains.
pub fn multiplier(q: &QForm, rho: &PfisterSpec) -> Result<Option<QForm>> {
    let f = q.field();
    let r = rho.expand();
    let mut rest = q.clone();
    let mut mult = Vec::new();
    while rest.dim() > 0 {
        if rest.dim() < r.dim() {
            return Ok(None);
        }
        let a = rest.coeffs()[0];
        let piece = r.scale(a);
        if !piece.is_subform_of(&rest)? {
            return Ok(None);
        }
        mult.push(a);
        rest = rest.orthogonal_sum(&piece.negate())?.witt_decompose()?.anisotropic_part;
    }
    Ok(Some(QForm::new(f.clone(), mult)))
}

/// Roundness failure read off the tower form itself, for the samples that
/// break the base form: `1` fails iff `<-1> (+) q_tower` is anisotropic, and
/// `c` fails iff `q_tower (+) -c q_tower` is not hyperbolic while `c` is
/// represented (or the reverse).
fn tower_round_failure(q: &QForm, base: &QForm, samples: &[SquareClass]) -> Result<Option<SquareClass>> {
    let f = q.field();
    for &c in samples {
        let lifted = base.lift(f)?;
        let represented = lifted.represents(c);
        let similar = q.orthogonal_sum(&q.scale(c).negate())?.is_hyperbolic();
        if represented != similar {
            return Ok(Some(c));
        }
    }
    let minus_one = QForm::new(f.clone(), vec![f.neg_one()]);
    if minus_one.orthogonal_sum(q)?.is_anisotropic() {
        return Ok(Some(base.field().one()));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::BaseField;

    fn qx(vars: &[&str]) -> FieldDesc {
        FieldDesc::new(BaseField::Rationals, vars.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn ints(f: &FieldDesc, v: &[i64]) -> Vec<SquareClass> {
        v.iter().map(|&n| f.int(n).unwrap()).collect()
    }

    fn tau2(f: &FieldDesc) -> QForm {
        let (x, y) = (f.var(0), f.var(1));
        QForm::new(f.clone(), vec![f.one(), f.one(), f.neg(x), f.neg(y), f.mul(x, y)])
    }

    #[test]
    fn expansion() {
        let q = FieldDesc::rationals();
        let pi = PfisterSpec::new(&q, ints(&q, &[-1, -1]));
        assert_eq!(pi.expand(), QForm::from_ints(&q, &[1, 1, 1, 1]).unwrap());
        let f = qx(&["x"]);
        let pi = PfisterSpec::new(&f, vec![f.neg(f.var(0))]);
        assert_eq!(pi.expand(), QForm::new(f.clone(), vec![f.one(), f.var(0)]));
        let h = PfisterSpec::new(&q, vec![q.one()]).expand();
        assert!(h.is_hyperbolic());
    }

    #[test]
    fn similarity() {
        let q = FieldDesc::rationals();
        let factor = QForm::from_ints(&q, &[1, 1, 1, 7]).unwrap();
        assert_eq!(similar_to_pfister(&factor, None).unwrap(), PfisterMatch::NotSimilar);
        let m = similar_to_pfister(&QForm::from_ints(&q, &[3, 6]).unwrap(), None).unwrap();
        assert_eq!(
            m,
            PfisterMatch::Similar { pfister: PfisterSpec::new(&q, ints(&q, &[-2])), scalar: q.int(3).unwrap() }
        );
        let sixteen = QForm::times(&q, 16, q.one());
        let pi4 = PfisterSpec::new(&q, ints(&q, &[-1, -1, -1, -1]));
        assert!(similar_to_pfister(&sixteen, Some(&pi4)).unwrap().is_similar());
        assert_eq!(similar_to_pfister(&sixteen, None).unwrap(), PfisterMatch::Unknown);
        let eight = QForm::times(&q, 8, q.one());
        match similar_to_pfister(&eight, None).unwrap() {
            PfisterMatch::Similar { pfister, .. } => assert!(pfister.expand().isometric(&eight).unwrap()),
            other => panic!("{other:?}"),
        }
        let f = qx(&["x", "y"]);
        assert_eq!(similar_to_pfister(&tau2(&f), None).unwrap(), PfisterMatch::NotSimilar);
    }

    #[test]
    fn neighbors() {
        let q = FieldDesc::rationals();
        let pi = PfisterSpec::new(&q, ints(&q, &[-1, -1]));
        let t1 = QForm::from_ints(&q, &[1, 1, 1]).unwrap();
        let w = is_neighbor(&t1, &pi).unwrap().unwrap();
        assert_eq!(w.complementary, QForm::from_ints(&q, &[1]).unwrap());
        assert!(w.verify(&t1).unwrap());
        assert!(is_neighbor(&QForm::from_ints(&q, &[1, 1]).unwrap(), &pi).unwrap().is_none());
        let five = QForm::times(&q, 5, q.one());
        let pi3 = PfisterSpec::new(&q, ints(&q, &[-1, -1, -1]));
        assert!(complementary_form(&five, &pi3).unwrap().isometric(&QForm::times(&q, 3, q.one())).unwrap());

        let f = qx(&["x", "y"]);
        let (x, y) = (f.var(0), f.var(1));
        let amb = PfisterSpec::new(&f, vec![x, y, f.neg_one()]);
        let w = is_neighbor(&tau2(&f), &amb).unwrap().unwrap();
        let expected = QForm::new(f.clone(), vec![f.neg(x), f.neg(y), f.mul(x, y)]);
        assert!(w.complementary.isometric(&expected).unwrap());
        assert!(w.verify(&tau2(&f)).unwrap());
    }

    #[test]
    fn dim5() {
        let f = qx(&["x1", "x2", "x3", "x4"]);
        let q = QForm::new(f.clone(), vec![f.one(), f.var(0), f.var(1), f.var(2), f.var(3)]);
        assert!(!dim5_neighbor_test(&q).unwrap());
        let r = FieldDesc::rationals();
        assert!(dim5_neighbor_test(&QForm::times(&r, 5, r.one())).unwrap());
        assert!(dim5_neighbor_test(&QForm::from_ints(&r, &[1, 1, 1, 1, 7]).unwrap()).unwrap());
        assert!(matches!(dim5_neighbor_test(&QForm::times(&r, 4, r.one())), Err(Error::DimensionError(_))));
    }

    #[test]
    fn excellence() {
        let q = FieldDesc::rationals();
        let pi = PfisterSpec::new(&q, ints(&q, &[-1, -1]));
        let t1 = QForm::from_ints(&q, &[1, 1, 1]).unwrap();
        assert_eq!(is_excellent(&t1, Some(&[pi])).unwrap(), Verdict::Verified);
        let factor = QForm::from_ints(&q, &[1, 1, 1, 7]).unwrap();
        assert_eq!(is_excellent(&factor, None).unwrap(), Verdict::Refuted);
        let f = qx(&["x", "y"]);
        let (x, y) = (f.var(0), f.var(1));
        let chain = [PfisterSpec::new(&f, vec![x, y, f.neg_one()]), PfisterSpec::new(&f, vec![x, y])];
        assert_eq!(is_excellent(&tau2(&f), Some(&chain)).unwrap(), Verdict::Verified);
        assert_eq!(is_excellent(&tau2(&f), None).unwrap(), Verdict::Verified);
        let six = QForm::new(f.clone(), vec![f.one(), f.one(), f.one(), f.var(0), f.var(1), f.var(1)]);
        assert_eq!(is_excellent(&six, None).unwrap(), Verdict::Unknown);
    }

    #[test]
    fn roundness() {
        let q = FieldDesc::rationals();
        let four = QForm::times(&q, 4, q.one());
        assert_eq!(round_check_sampled(&four, &ints(&q, &[2, 3, 5, 7])), RoundCheck::Pass);
        let three = q.int(3).unwrap();
        assert_eq!(round_check_sampled(&QForm::from_ints(&q, &[3, 3]).unwrap(), &[three]), RoundCheck::Fail(three));
        assert_eq!(round_check_sampled(&QForm::times(&q, 3, q.one()), &[three]), RoundCheck::Fail(three));
    }

    #[test]
    fn ascend_and_descend() {
        let q = FieldDesc::rationals();
        let factor = QForm::from_ints(&q, &[1, 1, 1, 7]).unwrap();
        let up = generic_ascend(&factor, 1).unwrap();
        assert_eq!(up.dim(), 8);
        assert!(up.is_anisotropic());
        assert_eq!(generic_ascend(&factor, 0).unwrap(), factor);
        let t1 = QForm::from_ints(&q, &[1, 1, 1]).unwrap();
        let up2 = generic_ascend(&t1, 2).unwrap();
        assert_eq!((up2.dim(), up2.field().depth()), (12, 2));

        let pi = PfisterSpec::new(&q, ints(&q, &[-1, -1]));
        let d = generic_descend(&generic_ascend(&t1, 1).unwrap(), 1, &DescentProperty::Neighbor(Some(pi))).unwrap();
        assert_eq!(d.verdict, Verdict::Verified);
        match d.witness {
            BaseWitness::Complement(w) => assert_eq!(w.complementary, QForm::from_ints(&q, &[1]).unwrap()),
            other => panic!("{other:?}"),
        }

        let m = QForm::from_ints(&q, &[1, 2]).unwrap().tensor(&QForm::from_ints(&q, &[1, 7]).unwrap()).unwrap();
        let rho = PfisterSpec::new(&q, ints(&q, &[-7]));
        let d = generic_descend(&generic_ascend(&m, 1).unwrap(), 1, &DescentProperty::Multiple(rho)).unwrap();
        assert_eq!(d.verdict, Verdict::Verified);
        assert_eq!(d.witness, BaseWitness::Multiplier(QForm::from_ints(&q, &[1, 2]).unwrap()));

        let three = q.int(3).unwrap();
        let base = QForm::from_ints(&q, &[3, 3]).unwrap();
        let d = generic_descend(&generic_ascend(&base, 1).unwrap(), 1, &DescentProperty::Round(vec![three])).unwrap();
        assert_eq!(d.witness, BaseWitness::RoundFailure(three));

        let f = qx(&["x"]);
        let bad = QForm::new(f.clone(), vec![f.one(), f.var(0), f.var(0)]);
        assert_eq!(generic_factor(&bad, 1), Err(Error::NoGenericFactor));
    }
}
