//! End-to-end acceptance checks, one line per criterion.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use qform::brauer::BrauerClass2;
use qform::corpus::parse_corpus;
use qform::expr::{parse_brauer, parse_field, parse_form, parse_pfister};
use qform::field::{hilbert_symbol, relevant_places, FieldDesc, Place};
use qform::pfister::{
    dim5_neighbor_test, generic_ascend, generic_descend, is_neighbor, round_check_sampled, DescentProperty,
    PfisterSpec, RoundCheck, Verdict,
};
use qform::properties::{self, DEFAULT_SEED};
use qform::splitting::{i1_bounds, max_splitting_status, Hints, MaxSplit, Rule};
use qform::{clifford_invariant, QForm};

type Check = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn q(text: &str, field: &str) -> std::result::Result<QForm, String> {
    parse_form(text, Some(&parse_field(field).map_err(err)?)).map_err(err)
}

fn pf(text: &str, f: &FieldDesc) -> std::result::Result<PfisterSpec, String> {
    parse_pfister(text, f).map_err(err)
}

fn criterion1() -> Check {
    let prod = q("pf(-1,-1) (*) <1,1,1,7>", "Q")?;
    let f = prod.field().clone();
    let ones = QForm::times(&f, 16, f.one());
    ensure!(prod.isometric(&ones).map_err(err)?, "product is not 16 x <1>");
    let factor = q("<1,1,1,7>", "Q")?;
    let b = i1_bounds(&factor, &Hints::default(), None).map_err(err)?;
    ensure!(b.exact() == Some(1), "i1(<1,1,1,7>) = {b}");
    let hints = Hints {
        pfister: Some(pf("pf(-1,-1,-1,-1)", &f)?),
        product: Some((pf("pf(-1,-1)", &f)?, factor)),
        ..Hints::default()
    };
    let bp = i1_bounds(&prod, &hints, None).map_err(err)?;
    ensure!(bp.exact() == Some(8), "product i1 = {bp}");
    ensure!(bp.product_floor == Some(4), "floor {:?}", bp.product_floor);
    Ok(format!("16<1>, i1 exact 1 and 8, floor 4 < 8 ({})", bp.rule_ids().join(",")))
}

fn criterion2() -> Check {
    let fld = "Q[[x,y]]";
    let t = q("<1,1,1> (*) (<1> (+) pf(x,y))", fld)?;
    let f = t.field().clone();
    ensure!(t.dim() == 15 && t.is_anisotropic(), "tau1 (x) tau2 isotropic or wrong dim");
    let completed = t.orthogonal_sum(&QForm::times(&f, 1, f.one())).map_err(err)?;
    ensure!(!clifford_invariant(&completed).is_trivial(), "Clifford class trivial");
    ensure!(q("<1,1,1,x,y,-x*y>", fld)?.is_anisotropic(), "Albert form isotropic");
    let class: BrauerClass2 = parse_brauer("(-1,-1) + (x,y)", &f).map_err(err)?;
    let idx = class.schur_index().map_err(err)?;
    ensure!(idx == 4, "schur index {idx}");
    let s = max_splitting_status(&t, &Hints::default(), None).map_err(err)?;
    ensure!(s.status == MaxSplit::No, "maxsplit {}", s.status);
    let trail = s.obstruction_trail();
    ensure!(trail.iter().any(|r| r.rule == Rule::R9), "no R9 in obstruction trail");
    Ok(format!("dim 15 anisotropic, index 4, maxsplit no via {}", s.bounds.rule_ids().join(",")))
}

fn criterion3() -> Check {
    let base = q("<1,x1,x2,x3,x4>", "Q[[x1,x2,x3,x4]]")?;
    ensure!(!dim5_neighbor_test(&base).map_err(err)?, "dim-5 form passes the neighbour test");
    let idx = clifford_invariant(&base).schur_index().map_err(err)?;
    ensure!(idx == 4, "Clifford index {idx}");
    let s = max_splitting_status(&base, &Hints::default(), None).map_err(err)?;
    ensure!(s.status == MaxSplit::Yes && s.bounds.exact() == Some(1), "base: {} {}", s.status, s.bounds);
    ensure!(s.bounds.fired(Rule::R0), "R0 did not fire");
    let mut dims = Vec::new();
    for m in 1..=2 {
        let up = generic_ascend(&base, m).map_err(err)?;
        let d = generic_descend(&up, m, &DescentProperty::Neighbor(None)).map_err(err)?;
        ensure!(d.verdict == Verdict::Refuted, "m={m}: descent {}", d.verdict);
        let s = max_splitting_status(&up, &Hints::default(), None).map_err(err)?;
        ensure!(s.status == MaxSplit::Yes, "m={m}: maxsplit {} ({})", s.status, s.bounds);
        dims.push(up.dim());
    }
    ensure!(dims == [10, 20], "dims {dims:?}");
    Ok("index 4, maxsplit yes; dims 10 and 20 refuted as neighbours with maxsplit yes".into())
}

fn suite(run: fn(&mut rand_chacha::ChaCha8Rng, usize) -> properties::SuiteOutcome, salt: u64, n: usize) -> Check {
    let o = run(&mut properties::rng(DEFAULT_SEED ^ salt), n);
    ensure!(o.cases == n, "{} of {n} cases", o.cases);
    ensure!(o.passed(), "{} violations, first: {}", o.failures.len(), o.failures[0]);
    Ok(format!("{n} cases, 0 violations"))
}

fn criterion4() -> Check {
    suite(properties::witt_divisibility, 4, 500)
}

fn criterion5() -> Check {
    suite(properties::springer_oracle, 5, 200)
}

/// Strips square factors of `p` so that the valuation is 0 or 1.
fn reduce(mut a: i64, p: i64) -> i64 {
    while a % (p * p) == 0 {
        a /= p * p;
    }
    a
}

/// Whether `z^2 = a x^2 + b y^2` has a primitive solution modulo `p^k`,
/// with `k` large enough for every such solution to lift.
fn hilbert_by_search(a: i64, b: i64, p: i64) -> i8 {
    let (a, b) = (reduce(a, p), reduce(b, p));
    let k = if p == 2 { 5 } else { 3 };
    let m = p.pow(k);
    let mut square = vec![false; m as usize];
    for z in 0..m {
        square[(z * z % m) as usize] = true;
    }
    let r = |x: i64| x.rem_euclid(m) as usize;
    // x a unit, scaled to 1
    let unit_x = (0..m).any(|y| square[r(a + b * (y * y % m))]);
    // x divisible by p and y a unit, scaled to 1
    let unit_y = (0..m).step_by(p as usize).any(|x| square[r(a * (x * x % m) + b)]);
    // x, y both divisible by p leave z^2 divisible by p^2 with z a unit: impossible
    if unit_x || unit_y {
        1
    } else {
        -1
    }
}

fn criterion6() -> Check {
    let formula = suite(properties::hilbert_product_formula, 6, 1000)?;
    let mut rng = properties::rng(DEFAULT_SEED ^ 66);
    let mut places = 0;
    for _ in 0..100 {
        let (a, b) = (properties::nonzero(&mut rng, 100), properties::nonzero(&mut rng, 100));
        let mut product = 1;
        for v in relevant_places(&[a, b]) {
            let closed = hilbert_symbol(a, b, v);
            let search = match v {
                Place::Real => {
                    if a < 0 && b < 0 {
                        -1
                    } else {
                        1
                    }
                }
                Place::Prime(p) => hilbert_by_search(a, b, p as i64),
            };
            ensure!(closed == search, "({a},{b}) at {v}: closed {closed}, search {search}");
            product *= search;
            places += 1;
        }
        ensure!(product == 1, "search symbols of ({a},{b}) multiply to {product}");
        for p in [3i64, 5, 7, 11] {
            if a % p != 0 && b % p != 0 {
                ensure!(hilbert_by_search(a, b, p) == 1, "({a},{b}) nontrivial at unramified {p}");
            }
        }
    }
    Ok(format!("{formula}; 100 pairs agree with the search at {places} places"))
}

fn criterion7() -> Check {
    let o = properties::pfister_roundness(&mut properties::rng(DEFAULT_SEED ^ 7), 20);
    ensure!(o.passed(), "{}", o.failures.join("; "));
    let f = FieldDesc::rationals();
    let three = f.canonical_square_class(3, 1, &[]).map_err(err)?;
    for text in ["<3,3>", "<1,1,1>"] {
        let form = q(text, "Q")?;
        let res = round_check_sampled(&form, &[three]);
        ensure!(res == RoundCheck::Fail(three), "{text}: {res:?}");
    }
    Ok("20 Pfister forms round on 20 samples; <3,3> and <1,1,1> fail at 3".into())
}

/// Forms with exact first Witt index, from the corpus and the listed families.
fn exact_forms() -> std::result::Result<Vec<(String, QForm, Hints)>, String> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/reference.corpus")).map_err(err)?;
    let mut seen = BTreeMap::new();
    for r in parse_corpus(&text).map_err(err)? {
        if r.args.contains_key("ascend") {
            continue;
        }
        let field = r.form.field_or(r.field.as_ref()).map_err(err)?.clone();
        let form = r.form.expr.elaborate(&field).map_err(err)?;
        let pfister = r.args.get("pfister").and_then(|s| parse_pfister(s, &field).ok());
        let mut hints = Hints { product: r.form.expr.product_factors(&field).map_err(err)?, ..Hints::default() };
        if let Some(pi) = pfister.filter(|pi| pi.dim() == form.dim()) {
            hints.pfister = Some(pi);
        }
        seen.entry(form.to_string()).or_insert((r.id.clone(), form, hints));
    }
    for (text, field) in
        [("<1,1,1,7>", "Q"), ("<1,1,1>", "Q"), ("pf(-1,-1)", "Q"), ("<1,x1,x2,x3,x4>", "Q[[x1,x2,x3,x4]]")]
    {
        let form = q(text, field)?;
        seen.entry(form.to_string()).or_insert((text.to_string(), form, Hints::default()));
    }
    Ok(seen.into_values().collect())
}

fn criterion8() -> Check {
    let mut checked = 0;
    let mut confirmed = 0;
    for (id, form, hints) in exact_forms()? {
        if form.dim() < 2 || form.is_isotropic() {
            continue;
        }
        let Some(v) = i1_bounds(&form, &hints, None).map_err(err)?.exact() else { continue };
        let up = generic_ascend(&form, 1).map_err(err)?;
        let b = i1_bounds(&up, &Hints::default(), None).map_err(err)?;
        ensure!(b.exact() == Some(2 * v), "{id}: i1 {v}, ascended {b}");
        checked += 1;
        // a neighbour of pi ascends to a neighbour of pi (x) <<-x>>
        let f = form.field();
        let mut candidates: Vec<PfisterSpec> = Vec::new();
        for folds in 1..=3 {
            if (1usize << folds) >= form.dim() && (1usize << (folds - 1)) < form.dim() {
                candidates.extend(small_pfisters(f, folds));
            }
        }
        if let Some(w) = candidates.iter().find_map(|pi| is_neighbor(&form, pi).ok().flatten()) {
            let uf = up.field();
            let x = uf.vars().last().expect("ascended").clone();
            let minus_x = parse_form(&format!("<-{x}>"), Some(uf)).map_err(err)?.coeffs()[0];
            let mut slots: Vec<_> = w.ambient.lift(uf).map_err(err)?.slots;
            slots.push(minus_x);
            let ambient = PfisterSpec::new(uf, slots);
            let nb = i1_bounds(&up, &Hints { neighbor: Some(ambient), ..Hints::default() }, None).map_err(err)?;
            ensure!(nb.fired(Rule::R2) && nb.exact() == Some(2 * v), "{id}: neighbour route gives {nb}");
            confirmed += 1;
        }
    }
    ensure!(checked >= 4, "only {checked} forms with exact i1");
    Ok(format!("{checked} forms double under ascent, {confirmed} confirmed by R2"))
}

/// Pfister forms with slots drawn from small coefficients over `Q`.
fn small_pfisters(f: &FieldDesc, folds: usize) -> Vec<PfisterSpec> {
    let base = [-1i128, -2, -3, -7];
    let mut out = Vec::new();
    let mut idx = vec![0usize; folds];
    loop {
        let slots =
            idx.iter().map(|&i| f.canonical_square_class(base[i], 1, &vec![0; f.depth()]).expect("unit")).collect();
        out.push(PfisterSpec::new(f, slots));
        let mut j = 0;
        loop {
            if j == folds {
                return out;
            }
            idx[j] += 1;
            if idx[j] < base.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

fn criterion9() -> Check {
    let vq = "pf(-x1,-x2,-x3) (+) x4*<1,x1,x2,x3> (+) x5*<1,x1,x2,x3>";
    let form = q(vq, "Q[[x1,x2,x3,x4,x5]]")?;
    ensure!(form.dim() == 16 && form.is_anisotropic(), "dim-16 form isotropic");
    let b = i1_bounds(&form, &Hints::default(), None).map_err(err)?;
    ensure!(b.contains(2) && 2 % b.divisor == 0, "interval {b} excludes 2");
    let fld = "Q[[x1,x2,x3,x4,x5,y]]";
    let p = "pf(-x1,-x2,-x3) (+) x4*<1,x1,x2,x3> (+) x5*<1,x1>";
    let big = q(&format!("{vq} (+) y*({p})"), fld)?;
    ensure!(big.dim() == 30 && big.is_anisotropic(), "30-dim form isotropic");
    let ambient = q(&format!("({vq}) (*) <1,y>"), fld)?;
    ensure!(big.is_subform_of(&ambient).map_err(err)?, "not a subform of q (x) <1,y>");
    Ok(format!("anisotropic, i1 interval {b} contains 2; 30-dim subform holds"))
}

type Criterion = (&'static str, fn() -> Check, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("product value strictly above the floor", criterion1, Duration::from_secs(1)),
        ("two neighbours with non-maximal splitting", criterion2, Duration::from_secs(1)),
        ("maximal splitting without neighbours", criterion3, Duration::from_secs(5)),
        ("Witt index divisibility", criterion4, Duration::from_secs(60)),
        ("Springer against exhaustive search", criterion5, Duration::from_secs(60)),
        ("Hilbert product formula", criterion6, Duration::from_secs(10)),
        ("roundness", criterion7, Duration::from_secs(10)),
        ("first Witt index under generic ascent", criterion8, Duration::from_secs(60)),
        ("16-dimensional form and its 30-dimensional extension", criterion9, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = run();
        let took = start.elapsed();
        let res = match res {
            Ok(msg) if took > *limit => Err(format!("{msg}; took {took:?}, limit {limit:?}")),
            r => r,
        };
        match res {
            Ok(msg) => println!("criterion {} PASS {name} ({:.0?}): {msg}", i + 1, took),
            Err(msg) => {
                failed += 1;
                println!("criterion {} FAIL {name} ({:.0?}): {msg}", i + 1, took);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
