//! Plain-text regression corpus.
//!
//! Records are blocks of `key: value` lines separated by blank lines; `#`
//! starts a comment line.
//!
//! ```text
//! id: gap-product-i1
//! field: Q
//! form: pf(-1,-1) (*) <1,1,1,7>
//! query: i1; pfister=pf(-1,-1,-1,-1)
//! expect: exact 8
//! note: free text
//! ```
//!
//! The query is an operation name followed by `;`-separated `key=value`
//! arguments. Every query accepts `ascend=m`, which replaces the form by its
//! generic Pfister multiple in `m` fresh variables first, and `require=R9`,
//! which also demands that the listed rule fired.

use std::collections::BTreeMap;
use std::path::Path;

use crate::brauer::{clifford_invariant, hasse_invariant};
use crate::error::{Error, Result};
use crate::expr::{parse_brauer, parse_coeffs, parse_field, parse_form_expr, parse_pfister, print_form, ParsedForm};
use crate::field::FieldDesc;
use crate::pfister::{
    dim5_neighbor_test, generic_ascend, generic_descend, is_excellent, is_neighbor, round_check_sampled,
    similar_to_pfister, BaseWitness, DescentProperty, PfisterMatch, PfisterSpec, RoundCheck,
};
use crate::quadform::QForm;
use crate::report::RecordResult;
use crate::splitting::{
    i1_bounds, i2_conditional, max_splitting_status, verify_witt_divisibility, ConditionalHypothesis, Hints, I1Bounds,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusRecord {
    pub id: String,
    pub line: usize,
    pub field: Option<FieldDesc>,
    pub form: ParsedForm,
    pub op: String,
    pub args: BTreeMap<String, String>,
    pub expect: String,
    pub note: Option<String>,
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusRecord>> {
    let mut records = Vec::new();
    let mut block: Vec<(usize, &str, &str)> = Vec::new();
    let lines: Vec<&str> = text.lines().collect();
    for (i, raw) in lines.iter().enumerate().chain(std::iter::once((lines.len(), &""))) {
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            if !block.is_empty() {
                records.push(parse_record(&block)?);
                block.clear();
            }
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| Error::Corpus { line: i + 1, msg: format!("expected `key: value`, got `{line}`") })?;
        block.push((i + 1, key.trim(), value.trim()));
    }
    let mut seen = BTreeMap::new();
    for r in &records {
        if let Some(prev) = seen.insert(r.id.clone(), r.line) {
            return Err(Error::Corpus { line: r.line, msg: format!("duplicate id `{}` (first at line {prev})", r.id) });
        }
    }
    Ok(records)
}

fn parse_record(block: &[(usize, &str, &str)]) -> Result<CorpusRecord> {
    let start = block[0].0;
    let mut fields: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for &(line, key, value) in block {
        if !["id", "field", "form", "query", "expect", "note"].contains(&key) {
            return Err(Error::Corpus { line, msg: format!("unknown key `{key}`") });
        }
        if fields.insert(key, (line, value)).is_some() {
            return Err(Error::Corpus { line, msg: format!("repeated key `{key}`") });
        }
    }
    let get = |key: &str| {
        fields.get(key).copied().ok_or_else(|| Error::Corpus { line: start, msg: format!("record lacks `{key}:`") })
    };
    let at = |line: usize| move |e: Error| Error::Corpus { line, msg: e.to_string() };
    let (_, id) = get("id")?;
    let field = match fields.get("field") {
        Some(&(line, v)) => Some(parse_field(v).map_err(at(line))?),
        None => None,
    };
    let (form_line, form_text) = get("form")?;
    let form = parse_form_expr(form_text).map_err(at(form_line))?;
    if form.field.is_none() && field.is_none() {
        return Err(Error::Corpus { line: form_line, msg: "no field for the form".into() });
    }
    let (query_line, query) = get("query")?;
    let mut parts = query.split(';');
    let op = parts.next().unwrap_or("").trim().to_string();
    let mut args = BTreeMap::new();
    for part in parts {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Corpus {
            line: query_line,
            msg: format!("expected `key=value`, got `{}`", part.trim()),
        })?;
        args.insert(k.trim().to_string(), v.trim().to_string());
    }
    let (_, expect) = get("expect")?;
    Ok(CorpusRecord {
        id: id.to_string(),
        line: start,
        field,
        form,
        op,
        args,
        expect: expect.to_string(),
        note: fields.get("note").map(|(_, v)| v.to_string()),
    })
}

/// What a query produced: the comparable value and the rules that fired.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub got: String,
    pub rules: Vec<String>,
}

impl Outcome {
    fn plain(got: impl Into<String>) -> Self {
        Outcome { got: got.into(), rules: Vec::new() }
    }

    fn with_bounds(got: impl Into<String>, b: &I1Bounds) -> Self {
        Outcome { got: got.into(), rules: b.rule_ids().into_iter().map(String::from).collect() }
    }
}

fn normalize(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

pub fn bounds_text(b: &I1Bounds) -> String {
    match b.exact() {
        Some(v) => format!("exact {v}"),
        None => format!("range {}..{}", b.lo, b.hi),
    }
}

pub fn run_record(r: &CorpusRecord) -> RecordResult {
    let (got, rules, mut passed) = match evaluate(r) {
        Ok(o) => {
            let ok = normalize(&o.got) == normalize(&r.expect);
            (o.got, o.rules, ok)
        }
        Err(e) => {
            let got = format!("error {}", e.kind());
            let ok = normalize(&got) == normalize(&r.expect);
            (format!("{got}: {e}"), Vec::new(), ok)
        }
    };
    if let Some(req) = r.args.get("require") {
        if !req.split(',').all(|id| rules.iter().any(|x| x == id.trim())) {
            passed = false;
        }
    }
    RecordResult { id: r.id.clone(), passed, expected: r.expect.clone(), got, rules }
}

pub fn run_corpus_text(text: &str) -> Result<Vec<RecordResult>> {
    Ok(parse_corpus(text)?.iter().map(run_record).collect())
}

pub fn run_corpus(path: &Path) -> Result<Vec<RecordResult>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Corpus { line: 0, msg: format!("cannot read {}: {e}", path.display()) })?;
    run_corpus_text(&text)
}

struct Ctx<'a> {
    r: &'a CorpusRecord,
    form: QForm,
    field: FieldDesc,
}

impl Ctx<'_> {
    fn arg(&self, key: &str) -> Result<&str> {
        self.r
            .args
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::Corpus { line: self.r.line, msg: format!("query `{}` needs `{key}=`", self.r.op) })
    }

    fn opt(&self, key: &str) -> Option<&str> {
        self.r.args.get(key).map(String::as_str)
    }

    fn form_arg(&self, key: &str) -> Result<QForm> {
        parse_form_expr(self.arg(key)?)?.elaborate(Some(&self.field))
    }

    fn pfister_arg(&self, key: &str) -> Result<Option<PfisterSpec>> {
        self.opt(key).map(|s| parse_pfister(s, &self.field)).transpose()
    }

    fn hints(&self, ascended: bool) -> Result<Hints> {
        let mut hints = Hints {
            pfister: self.pfister_arg("pfister")?,
            neighbor: self.pfister_arg("neighbor")?,
            ..Hints::default()
        };
        if let Some(pi) = self.pfister_arg("product")? {
            hints.product = Some((pi, self.form_arg("factor")?));
        } else if !ascended {
            hints.product = self.r.form.expr.product_factors(&self.field)?;
        }
        if let Some(pi) = self.pfister_arg("np-pfister")? {
            hints.neighbor_product = Some((pi, self.form_arg("np-tau")?, self.form_arg("np-factor")?));
        }
        Ok(hints)
    }

    fn hypothesis(&self) -> Result<ConditionalHypothesis> {
        let num = |k: &str| -> Result<Option<usize>> {
            self.opt(k)
                .map(|v| v.parse::<usize>().map_err(|_| Error::Corpus { line: self.r.line, msg: format!("bad `{k}`") }))
                .transpose()
        };
        Ok(ConditionalHypothesis {
            i1: num("i1")?,
            i2: num("i2")?,
            first_kernel_anisotropic: self.opt("k1") == Some("anisotropic"),
            second_kernel_anisotropic: self.opt("k2") == Some("anisotropic"),
        })
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn evaluate(r: &CorpusRecord) -> Result<Outcome> {
    let field = r.form.field_or(r.field.as_ref())?.clone();
    let mut form = r.form.expr.elaborate(&field)?;
    let mut ascended = false;
    if let Some(m) = r.args.get("ascend") {
        let m: usize = m.parse().map_err(|_| Error::Corpus { line: r.line, msg: "bad `ascend`".into() })?;
        form = generic_ascend(&form, m)?;
        ascended = m > 0;
    }
    let ctx = Ctx { r, field: form.field().clone(), form };
    let q = &ctx.form;
    let f = &ctx.field;
    Ok(match r.op.as_str() {
        "dim" => Outcome::plain(q.dim().to_string()),
        "anisotropic" => Outcome::plain(yes_no(q.is_anisotropic())),
        "witt" => Outcome::plain(q.witt_index().to_string()),
        "anisotropic-part" => Outcome::plain(print_form(&q.witt_decompose()?.anisotropic_part)),
        "isometric" => Outcome::plain(yes_no(q.isometric(&ctx.form_arg("other")?)?)),
        "subform" => Outcome::plain(yes_no(q.is_subform_of(&ctx.form_arg("of")?)?)),
        "hasse-trivial" => Outcome::plain(yes_no(hasse_invariant(q).is_trivial())),
        "clifford-trivial" => Outcome::plain(yes_no(clifford_invariant(q).is_trivial())),
        "schur-index" => {
            let class = match ctx.opt("class") {
                Some(c) => parse_brauer(c, f)?,
                None => clifford_invariant(q),
            };
            Outcome::plain(class.schur_index()?.to_string())
        }
        "albert-anisotropic" => {
            let class = parse_brauer(ctx.arg("class")?, f)?;
            let albert = class
                .albert_form()
                .ok_or_else(|| Error::Corpus { line: r.line, msg: "Albert form needs exactly two symbols".into() })?;
            Outcome::plain(yes_no(albert.is_anisotropic()))
        }
        "similar-pfister" => Outcome::plain(match similar_to_pfister(q, ctx.pfister_arg("pfister")?.as_ref())? {
            PfisterMatch::Similar { .. } => "yes",
            PfisterMatch::NotSimilar => "no",
            PfisterMatch::Unknown => "unknown",
        }),
        "neighbor" => {
            let pi = parse_pfister(ctx.arg("pfister")?, f)?;
            match is_neighbor(q, &pi)? {
                None => Outcome::plain("false"),
                Some(w) => match ctx.opt("complement") {
                    Some(_) if !w.complementary.isometric(&ctx.form_arg("complement")?)? => {
                        Outcome::plain(format!("complement {}", print_form(&w.complementary)))
                    }
                    _ => Outcome::plain("true"),
                },
            }
        }
        "dim5-neighbor" => Outcome::plain(yes_no(dim5_neighbor_test(q)?)),
        "excellent" => {
            let chain = ctx
                .opt("chain")
                .map(|c| c.split('|').map(|s| parse_pfister(s.trim(), f)).collect::<Result<Vec<_>>>())
                .transpose()?;
            Outcome::plain(is_excellent(q, chain.as_deref())?.to_string())
        }
        "round" => {
            let samples = parse_coeffs(ctx.arg("samples")?, f)?;
            Outcome::plain(match round_check_sampled(q, &samples) {
                RoundCheck::Pass => "pass".to_string(),
                RoundCheck::Fail(c) => format!("fail {}", f.render(c)),
            })
        }
        "i1" => {
            let b = i1_bounds(q, &ctx.hints(ascended)?, Some(&ctx.hypothesis()?))?;
            Outcome::with_bounds(bounds_text(&b), &b)
        }
        "i1-floor" => {
            let b = i1_bounds(q, &ctx.hints(ascended)?, None)?;
            let got = b.product_floor.map_or("none".to_string(), |v| v.to_string());
            Outcome::with_bounds(got, &b)
        }
        "i1-consistent" => {
            let v: usize =
                ctx.arg("value")?.parse().map_err(|_| Error::Corpus { line: r.line, msg: "bad `value`".into() })?;
            let b = i1_bounds(q, &ctx.hints(ascended)?, None)?;
            Outcome::with_bounds(yes_no(b.contains(v)), &b)
        }
        "maxsplit" => {
            let s = max_splitting_status(q, &ctx.hints(ascended)?, None)?;
            Outcome::with_bounds(s.status.to_string(), &s.bounds)
        }
        "descend" => {
            let levels = match ctx.opt("levels") {
                Some(l) => l.parse().map_err(|_| Error::Corpus { line: r.line, msg: "bad `levels`".into() })?,
                None => 1,
            };
            let base_field = (0..levels).try_fold(f.clone(), |g, _| g.shallower())?;
            let pf = |key: &str| ctx.opt(key).map(|s| parse_pfister(s, &base_field)).transpose();
            let property = match ctx.arg("property")? {
                "neighbor" => DescentProperty::Neighbor(pf("pfister")?),
                "multiple" => DescentProperty::Multiple(
                    pf("pfister")?
                        .ok_or_else(|| Error::Corpus { line: r.line, msg: "multiple needs `pfister=`".into() })?,
                ),
                "round" => DescentProperty::Round(parse_coeffs(ctx.arg("samples")?, &base_field)?),
                "excellent" => DescentProperty::Excellent(
                    ctx.opt("chain")
                        .map(|c| c.split('|').map(|s| parse_pfister(s.trim(), &base_field)).collect::<Result<Vec<_>>>())
                        .transpose()?,
                ),
                other => return Err(Error::Corpus { line: r.line, msg: format!("unknown property `{other}`") }),
            };
            let d = generic_descend(q, levels, &property)?;
            let witness = match &d.witness {
                BaseWitness::None => String::new(),
                BaseWitness::Complement(w) => format!(" complement {}", print_form(&w.complementary)),
                BaseWitness::Multiplier(m) => format!(" multiplier {}", print_form(m)),
                BaseWitness::RoundFailure(c) => format!(" witness {}", base_field.render(*c)),
            };
            Outcome::plain(format!("{}{witness}", d.verdict))
        }
        "witt-divisibility" => {
            let pi = parse_pfister(ctx.arg("pfister")?, f)?;
            let rep = verify_witt_divisibility(&pi, q)?;
            let got = if rep.holds() { rep.witt_index.to_string() } else { format!("violation {}", rep.witt_index) };
            Outcome::plain(got)
        }
        "i2-conditional" => {
            let pi = parse_pfister(ctx.arg("pfister")?, f)?;
            let c = i2_conditional(q, &pi, &ctx.hypothesis()?)?;
            let mut got = format!("i1={}", c.i1_product);
            if let Some(v) = c.i2_product_max {
                got.push_str(&format!(" i2<={v}"));
            }
            if let Some(cand) = ctx.pfister_arg("product-pfister")? {
                let product = pi.expand().tensor(q)?;
                let b = i1_bounds(&product, &Hints { pfister: Some(cand), ..Hints::default() }, None)?;
                if c.contradicts(&b) {
                    got.push_str(&format!(" contradicts {}", bounds_text(&b)));
                }
            }
            Outcome::plain(got)
        }
        other => return Err(Error::Corpus { line: r.line, msg: format!("unknown query `{other}`") }),
    })
}
