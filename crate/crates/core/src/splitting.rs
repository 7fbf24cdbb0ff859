//! Certified bounds on the first Witt index `i1` of an anisotropic form.
//!
//! Each rule turns a known structural fact into an equality or inequality
//! on `i1`. The engine intersects everything it can derive and keeps a trail
//! of which rule produced which bound. Nothing here builds a function field.

use std::fmt;

use num_integer::Integer;

use crate::brauer::clifford_invariant;
use crate::error::{Error, Result};
use crate::pfister::{
    dim5_neighbor_test, generic_depth, generic_factor, is_neighbor, similar_to_pfister, PfisterMatch, PfisterSpec,
};
use crate::quadform::QForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// `i1 <= dim - 2^k` for the largest `2^k < dim`.
    R0,
    /// Similar to a Pfister form: `i1 = dim / 2`.
    R1,
    /// Neighbour of an `n`-fold Pfister form: `i1 = dim - 2^(n-1)`.
    R2,
    /// `q = pi (x) q'`: `i1 >= dim(pi) lo(q')`, and `dim(pi)` divides `i1`.
    R3,
    /// `q = pi (x) q'` with `q'` of maximal splitting: `i1 = dim(pi) i1(q')`.
    R4,
    /// Indefinite at an ordering: `i1 <= (dim - |sgn|) / 2`.
    R5,
    /// Dimension 4 and not similar to a Pfister form: `i1 = 1`.
    R6,
    /// Generic Pfister multiple `q' (x) <<-x1..-xm>>`: `i1 = 2^m i1(q')`.
    R7,
    /// `q = tau (x) q'` with `tau` a large neighbour of `pi` and `q'` of
    /// maximal splitting: `i1 = dim(pi) i1(q') - dim(q') (dim(pi) - dim(tau))`.
    R8,
    /// Dimension `2^n` or `2^n - 1` where maximal splitting would make the
    /// form similar or a neighbour to an `n`-fold Pfister form, refuted by
    /// the determinant or the Clifford invariant: `i1 <= dim - 2^(n-1) - 1`.
    R9,
    /// Caller-supplied assertion, not checked.
    Hypothesis,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::R0 => "R0",
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::R4 => "R4",
            Rule::R5 => "R5",
            Rule::R6 => "R6",
            Rule::R7 => "R7",
            Rule::R8 => "R8",
            Rule::R9 => "R9",
            Rule::Hypothesis => "H",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Rule::R0 => "dimension-squeeze",
            Rule::R1 => "pfister-similar",
            Rule::R2 => "pfister-neighbor",
            Rule::R3 => "product-floor",
            Rule::R4 => "max-splitting-product",
            Rule::R5 => "signature",
            Rule::R6 => "dim4-non-pfister",
            Rule::R7 => "generic-multiple",
            Rule::R8 => "neighbor-product",
            Rule::R9 => "clifford-obstruction",
            Rule::Hypothesis => "unverified-hypothesis",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Effect {
    Lower(usize),
    Upper(usize),
    Exact(usize),
    Divisor(usize),
}

impl fmt::Display for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Effect::Lower(v) => write!(f, "i1 >= {v}"),
            Effect::Upper(v) => write!(f, "i1 <= {v}"),
            Effect::Exact(v) => write!(f, "i1 = {v}"),
            Effect::Divisor(v) => write!(f, "{v} | i1"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleFiring {
    pub rule: Rule,
    pub premise: String,
    pub effect: Effect,
}

impl fmt::Display for RuleFiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {} ({})", self.rule.id(), self.rule.name(), self.effect, self.premise)
    }
}

/// Structural facts supplied by the caller. Every hint is verified before use.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Hints {
    /// Candidate Pfister form `q` may be similar to.
    pub pfister: Option<PfisterSpec>,
    /// Candidate ambient Pfister form for a neighbour test.
    pub neighbor: Option<PfisterSpec>,
    /// `q = pi (x) q'`.
    pub product: Option<(PfisterSpec, QForm)>,
    /// `q = tau (x) q'` with `tau` a neighbour of `pi`: `(pi, tau, q')`.
    pub neighbor_product: Option<(PfisterSpec, QForm, QForm)>,
}

/// Assertions about objects that cannot be computed here, such as kernel
/// forms over the generic splitting tower. They are consumed as given and
/// every conclusion drawn from them is marked conditional.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConditionalHypothesis {
    /// `i1(q)` of the factor form.
    pub i1: Option<usize>,
    /// `i2(q)` of the factor form.
    pub i2: Option<usize>,
    /// `pi (x) q1` stays anisotropic over the first field of the splitting tower.
    pub first_kernel_anisotropic: bool,
    /// `pi (x) q2` stays anisotropic over the second field.
    pub second_kernel_anisotropic: bool,
}

impl ConditionalHypothesis {
    pub fn is_empty(&self) -> bool {
        *self == ConditionalHypothesis::default()
    }

    fn describe(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(v) = self.i1 {
            out.push(format!("i1(q)={v}"));
        }
        if let Some(v) = self.i2 {
            out.push(format!("i2(q)={v}"));
        }
        if self.first_kernel_anisotropic {
            out.push("pi(x)q1 anisotropic over F1".into());
        }
        if self.second_kernel_anisotropic {
            out.push("pi(x)q2 anisotropic over F2".into());
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct I1Bounds {
    pub dim: usize,
    pub lo: usize,
    pub hi: usize,
    /// Certified divisor of `i1`.
    pub divisor: usize,
    /// Lower bound coming from a product factorization alone.
    pub product_floor: Option<usize>,
    pub rules: Vec<RuleFiring>,
    /// Whether some bound rests on an unverified hypothesis.
    pub conditional: bool,
}

impl I1Bounds {
    fn new(dim: usize) -> Self {
        I1Bounds { dim, lo: 1, hi: dim / 2, divisor: 1, product_floor: None, rules: Vec::new(), conditional: false }
    }

    pub fn exact(&self) -> Option<usize> {
        (self.lo == self.hi).then_some(self.lo)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.lo <= v && v <= self.hi && v.is_multiple_of(self.divisor)
    }

    /// Ids of the rules that fired, in firing order without repeats.
    pub fn rule_ids(&self) -> Vec<&'static str> {
        let mut ids: Vec<&'static str> = Vec::new();
        for r in &self.rules {
            if !ids.contains(&r.rule.id()) {
                ids.push(r.rule.id());
            }
        }
        ids
    }

    pub fn fired(&self, rule: Rule) -> bool {
        self.rules.iter().any(|r| r.rule == rule)
    }

    fn apply(&mut self, rule: Rule, premise: impl Into<String>, effect: Effect) -> Result<()> {
        match effect {
            Effect::Lower(v) => self.lo = self.lo.max(v),
            Effect::Upper(v) => self.hi = self.hi.min(v),
            Effect::Exact(v) => {
                self.lo = self.lo.max(v);
                self.hi = self.hi.min(v);
            }
            Effect::Divisor(d) => self.divisor = self.divisor.lcm(&d),
        }
        if rule == Rule::Hypothesis {
            self.conditional = true;
        }
        self.rules.push(RuleFiring { rule, premise: premise.into(), effect });
        // round the interval to multiples of the divisor
        self.lo = self.lo.div_ceil(self.divisor) * self.divisor;
        self.hi = self.hi / self.divisor * self.divisor;
        if self.lo > self.hi {
            let trail: Vec<String> = self.rules.iter().map(|r| r.to_string()).collect();
            return Err(Error::InconsistentCertificate(format!(
                "empty interval [{}, {}]: {}",
                self.lo,
                self.hi,
                trail.join("; ")
            )));
        }
        Ok(())
    }
}

impl fmt::Display for I1Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact() {
            Some(v) => write!(f, "exact {v}")?,
            None => write!(f, "[{}, {}]", self.lo, self.hi)?,
        }
        if self.divisor > 1 {
            write!(f, " divisor {}", self.divisor)?;
        }
        if let Some(fl) = self.product_floor {
            write!(f, " floor {fl}")?;
        }
        if self.conditional {
            write!(f, " (conditional)")?;
        }
        Ok(())
    }
}

/// Largest power of two strictly below `n` (`n >= 2`).
fn pow2_below(n: usize) -> usize {
    let p = n.next_power_of_two();
    if p == n {
        n / 2
    } else {
        p / 2
    }
}

pub fn i1_bounds(q: &QForm, hints: &Hints, hyp: Option<&ConditionalHypothesis>) -> Result<I1Bounds> {
    let n = q.dim();
    if n < 2 {
        return Err(Error::DimensionError(format!("first Witt index needs dimension >= 2, got {n}")));
    }
    if q.is_isotropic() {
        return Err(Error::Isotropic);
    }
    let mut b = I1Bounds::new(n);
    let top = pow2_below(n);
    b.apply(Rule::R0, format!("dim {n}, 2^k = {top}"), Effect::Upper(n - top))?;

    // R1
    match similar_to_pfister(q, hints.pfister.as_ref())? {
        PfisterMatch::Similar { pfister, scalar } => {
            let premise = format!("q = {} * {}", q.field().render(scalar), pfister);
            b.apply(Rule::R1, premise, Effect::Exact(n / 2))?;
        }
        PfisterMatch::NotSimilar if n == 4 => {
            b.apply(Rule::R6, "dim 4, determinant or Clifford invariant nontrivial", Effect::Exact(1))?;
        }
        _ => {}
    }

    // R2
    if let Some(pi) = &hints.neighbor {
        if let Some(w) = is_neighbor(q, pi)? {
            let premise = format!("neighbour of {} with complement {}", pi, w.complementary);
            b.apply(Rule::R2, premise, Effect::Exact(n - pi.dim() / 2))?;
        }
    }
    if n == 3 {
        b.apply(Rule::R2, "every 3-dimensional form is a neighbour of a 2-fold form", Effect::Exact(1))?;
    }
    if n == 5 && dim5_neighbor_test(q).unwrap_or(false) {
        b.apply(Rule::R2, "5-dimensional with Clifford index <= 2", Effect::Exact(1))?;
    }

    // R3, R4
    if let Some((pi, qp)) = &hints.product {
        apply_product(&mut b, q, pi, qp)?;
    }

    // R5
    signature_rule(&mut b, q)?;

    // R7
    let m = generic_depth(q);
    if m > 0 {
        let base = generic_factor(q, m)?;
        if base.dim() >= 2 {
            let inner = i1_bounds(&base, &Hints::default(), None)?;
            let scale = 1 << m;
            let premise = format!("q = {} (x) generic {m}-fold, inner {}", base, inner);
            match inner.exact() {
                Some(v) => b.apply(Rule::R7, premise, Effect::Exact(scale * v))?,
                None => {
                    b.apply(Rule::R7, premise.clone(), Effect::Lower(scale * inner.lo))?;
                    b.apply(Rule::R7, premise, Effect::Upper(scale * inner.hi))?;
                }
            }
            b.apply(Rule::R7, "generic multiple", Effect::Divisor(scale * inner.divisor))?;
        }
    }

    // R8
    if let Some((pi, tau, qp)) = &hints.neighbor_product {
        apply_neighbor_product(&mut b, q, pi, tau, qp)?;
    }

    // R9
    clifford_obstruction(&mut b, q)?;

    if let Some(h) = hyp.filter(|h| !h.is_empty()) {
        if let (Some((pi, _)), Some(v), true) = (&hints.product, h.i1, h.first_kernel_anisotropic) {
            let premise = format!("assumed {}", h.describe().join(", "));
            b.apply(Rule::Hypothesis, premise, Effect::Exact(pi.dim() * v))?;
        }
    }
    Ok(b)
}

fn apply_product(b: &mut I1Bounds, q: &QForm, pi: &PfisterSpec, qp: &QForm) -> Result<()> {
    let product = pi.expand().tensor(qp)?;
    if !q.isometric(&product)? {
        return Err(Error::WitnessError(format!("{q} is not {pi} (x) {qp}")));
    }
    if qp.dim() < 2 {
        return Ok(());
    }
    let inner = i1_bounds(qp, &Hints::default(), None)?;
    let d = pi.dim();
    let floor = d * inner.lo;
    b.product_floor = Some(b.product_floor.map_or(floor, |f| f.max(floor)));
    let premise = format!("q = {pi} (x) {qp}, i1(q') in {inner}");
    b.apply(Rule::R3, premise.clone(), Effect::Lower(floor))?;
    b.apply(Rule::R3, premise, Effect::Divisor(d))?;
    if let Some(v) = inner.exact() {
        if (qp.dim() - v).is_power_of_two() {
            let premise = format!("q' = {qp} has maximal splitting with i1 = {v}");
            b.apply(Rule::R4, premise, Effect::Exact(d * v))?;
        }
    }
    Ok(())
}

fn apply_neighbor_product(b: &mut I1Bounds, q: &QForm, pi: &PfisterSpec, tau: &QForm, qp: &QForm) -> Result<()> {
    if !q.isometric(&tau.tensor(qp)?)? {
        return Err(Error::WitnessError(format!("{q} is not {tau} (x) {qp}")));
    }
    if is_neighbor(tau, pi)?.is_none() {
        return Err(Error::WitnessError(format!("{tau} is not a neighbour of {pi}")));
    }
    let full = pi.expand().tensor(qp)?;
    if full.is_isotropic() || qp.dim() < 2 {
        return Ok(());
    }
    let inner = i1_bounds(qp, &Hints::default(), None)?;
    let Some(v) = inner.exact() else { return Ok(()) };
    if !(qp.dim() - v).is_power_of_two() {
        return Ok(());
    }
    let (dp, dt, dq) = (pi.dim(), tau.dim(), qp.dim());
    // dim tau > dim pi - dim pi * i1(q') / dim q'
    if dt * dq <= dp * (dq - v) {
        return Ok(());
    }
    let premise = format!("tau = {tau} neighbour of {pi}, q' = {qp} maximal splitting with i1 = {v}");
    b.apply(Rule::R8, premise, Effect::Exact(dp * v - dq * (dp - dt)))
}

fn signature_rule(b: &mut I1Bounds, q: &QForm) -> Result<()> {
    let f = q.field();
    if !f.is_real() {
        return Ok(());
    }
    let used = q.coeffs().iter().fold(0u64, |acc, c| acc | c.bits);
    if used.count_ones() > 16 {
        return Ok(());
    }
    let n = q.dim();
    let mut best: Option<(usize, u64)> = None;
    // signs only depend on the variables that occur
    let mut mask = 0u64;
    loop {
        let negs: Vec<bool> = (0..f.depth()).map(|i| mask >> i & 1 == 1).collect();
        let ordering = f.ordering(&negs)?;
        let sgn = q.signature(&ordering)?.unsigned_abs() as usize;
        if sgn < n {
            let bound = (n - sgn) / 2;
            if best.is_none_or(|(v, _)| bound < v) {
                best = Some((bound, mask));
            }
        }
        if mask == used {
            break;
        }
        mask = (mask.wrapping_sub(used)) & used;
    }
    if let Some((bound, mask)) = best {
        let negs: Vec<&str> = (0..f.depth()).filter(|&i| mask >> i & 1 == 1).map(|i| f.vars()[i].as_str()).collect();
        let premise = if negs.is_empty() {
            "indefinite at the ordering with every variable positive".to_string()
        } else {
            format!("indefinite at the ordering with {} negative", negs.join(","))
        };
        b.apply(Rule::R5, premise, Effect::Upper(bound))?;
    }
    Ok(())
}

fn clifford_obstruction(b: &mut I1Bounds, q: &QForm) -> Result<()> {
    let n = q.dim();
    let f = q.field();
    if n.is_power_of_two() && n >= 4 {
        let a = q.coeffs()[0];
        let normalized = q.scale(a);
        let obstruction = if !f.is_square(q.determinant()) {
            Some("determinant is not a square")
        } else if n >= 8 && !clifford_invariant(&normalized).is_trivial() {
            Some("Clifford invariant is nontrivial")
        } else {
            None
        };
        if let Some(why) = obstruction {
            let premise = format!("dim {n}: maximal splitting forces a Pfister multiple, but {why}");
            b.apply(Rule::R9, premise, Effect::Upper(n / 2 - 1))?;
        }
    } else if (n + 1).is_power_of_two() && n >= 7 {
        let d = q.determinant();
        let completed = q.orthogonal_sum(&QForm::new(f.clone(), vec![d]))?;
        let c = clifford_invariant(&completed);
        if !c.is_trivial() {
            let premise = format!(
                "dim {n}: maximal splitting forces q (+) <{}> similar to a Pfister form, but its Clifford invariant {} is nontrivial",
                f.render(d),
                c
            );
            b.apply(Rule::R9, premise, Effect::Upper(n - n.div_ceil(2) - 1))?;
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaxSplit {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for MaxSplit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MaxSplit::Yes => "yes",
            MaxSplit::No => "no",
            MaxSplit::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxSplitStatus {
    pub status: MaxSplit,
    /// The value `i1` must take for maximal splitting.
    pub target: usize,
    pub bounds: I1Bounds,
}

impl MaxSplitStatus {
    /// Rules that pushed the upper bound below the target.
    pub fn obstruction_trail(&self) -> Vec<&RuleFiring> {
        self.bounds
            .rules
            .iter()
            .filter(|r| matches!(r.effect, Effect::Upper(v) | Effect::Exact(v) if v < self.target))
            .collect()
    }
}

/// Maximal splitting means `dim - i1` is a power of two, i.e. `i1` attains
/// the dimension squeeze.
pub fn max_splitting_status(q: &QForm, hints: &Hints, hyp: Option<&ConditionalHypothesis>) -> Result<MaxSplitStatus> {
    let bounds = i1_bounds(q, hints, hyp)?;
    let target = q.dim() - pow2_below(q.dim());
    let status = if bounds.lo >= target {
        MaxSplit::Yes
    } else if bounds.hi < target {
        MaxSplit::No
    } else {
        MaxSplit::Unknown
    };
    Ok(MaxSplitStatus { status, target, bounds })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilityReport {
    pub witt_index: usize,
    pub pfister_dim: usize,
    /// An isotropic Pfister form is hyperbolic, and so is every multiple.
    pub pfister_anisotropic: bool,
    pub product_dim: usize,
}

impl DivisibilityReport {
    pub fn holds(&self) -> bool {
        if self.pfister_anisotropic {
            self.witt_index.is_multiple_of(self.pfister_dim)
        } else {
            2 * self.witt_index == self.product_dim
        }
    }
}

/// Witt index of `pi (x) q`, which must be a multiple of `dim pi` when `pi`
/// is anisotropic.
pub fn verify_witt_divisibility(pi: &PfisterSpec, q: &QForm) -> Result<DivisibilityReport> {
    let expanded = pi.expand();
    let product = expanded.tensor(q)?;
    let witt_index = product.witt_decompose()?.witt_index;
    Ok(DivisibilityReport {
        witt_index,
        pfister_dim: pi.dim(),
        pfister_anisotropic: expanded.is_anisotropic(),
        product_dim: product.dim(),
    })
}

/// Conclusions drawn from a [`ConditionalHypothesis`]; never verified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionalConclusions {
    /// `i1(pi (x) q) = dim(pi) i1(q)`.
    pub i1_product: usize,
    /// `i2(pi (x) q) <= dim(pi) i2(q)`.
    pub i2_product_max: Option<usize>,
    pub assumptions: Vec<String>,
}

impl ConditionalConclusions {
    /// Whether the engine's bounds for the product rule out the conclusion,
    /// which shows that some assumption fails.
    pub fn contradicts(&self, product_bounds: &I1Bounds) -> bool {
        !product_bounds.contains(self.i1_product)
    }
}

pub fn i2_conditional(q: &QForm, pi: &PfisterSpec, hyp: &ConditionalHypothesis) -> Result<ConditionalConclusions> {
    if q.dim() < 2 {
        return Err(Error::DimensionError(format!("need dimension >= 2, got {}", q.dim())));
    }
    let i1 = hyp.i1.ok_or_else(|| Error::IncompleteHypothesis("i1(q) not supplied".into()))?;
    if !hyp.first_kernel_anisotropic {
        return Err(Error::IncompleteHypothesis("anisotropy of pi (x) q1 over F1 not asserted".into()));
    }
    let i2_product_max = match (hyp.i2, hyp.second_kernel_anisotropic) {
        (Some(i2), true) => Some(pi.dim() * i2),
        (None, false) => None,
        (Some(_), false) => {
            return Err(Error::IncompleteHypothesis("i2(q) given without anisotropy of pi (x) q2 over F2".into()))
        }
        (None, true) => return Err(Error::IncompleteHypothesis("anisotropy over F2 asserted without i2(q)".into())),
    };
    Ok(ConditionalConclusions { i1_product: pi.dim() * i1, i2_product_max, assumptions: hyp.describe() })
}
