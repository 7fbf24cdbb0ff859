//! Text syntax for forms.
//!
//! ```text
//! input  := form [ 'over' field ]
//! form   := term { '(+)' term }
//! term   := factor { '(*)' factor }
//! factor := '<' coeff {',' coeff} '>' | 'pf(' coeff {',' coeff} ')'
//!         | '(' form ')' | coeff '*' factor
//! coeff  := ['-'|'+'] [int ['/' int]] { ['*'] var ['^' int] }
//! field  := 'Q' | 'Fp(' prime ')' | field '[[' var {',' var} ']]'
//! ```
//!
//! `(*)` binds tighter than `(+)`; `pf(a1,...,an)` is `<<a1,...,an>>`.

use std::fmt;

use crate::brauer::BrauerClass2;
use crate::error::{Error, Result};
use crate::field::{FieldDesc, SquareClass};
use crate::pfister::PfisterSpec;
use crate::quadform::QForm;

/// A signed rational monomial `num/den * prod var^exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coeff {
    pub num: i128,
    pub den: i128,
    pub vars: Vec<(String, i64)>,
}

impl Coeff {
    pub fn int(n: i128) -> Self {
        Coeff { num: n, den: 1, vars: Vec::new() }
    }

    pub fn elaborate(&self, field: &FieldDesc) -> Result<SquareClass> {
        let mut monomial = vec![0i64; field.depth()];
        for (v, e) in &self.vars {
            let i = field.var_index(v).ok_or_else(|| Error::UnknownVariable(v.clone()))?;
            monomial[i] += e;
        }
        field.canonical_square_class(self.num, self.den, &monomial)
    }

    /// Canonical coefficient for a square class.
    pub fn from_class(field: &FieldDesc, a: SquareClass) -> Self {
        let vars = (0..field.depth()).filter(|&i| a.bits >> i & 1 == 1).map(|i| (field.vars()[i].clone(), 1)).collect();
        Coeff { num: a.base as i128, den: 1, vars }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let negative = (self.num < 0) != (self.den < 0);
        let (n, d) = (self.num.unsigned_abs(), self.den.unsigned_abs());
        if negative {
            write!(f, "-")?;
        }
        let mut parts = Vec::new();
        if n != 1 || d != 1 || self.vars.is_empty() {
            parts.push(if d == 1 { n.to_string() } else { format!("{n}/{d}") });
        }
        for (v, e) in &self.vars {
            parts.push(if *e == 1 { v.clone() } else { format!("{v}^{e}") });
        }
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormExpr {
    Diagonal(Vec<Coeff>),
    Pfister(Vec<Coeff>),
    Sum(Box<FormExpr>, Box<FormExpr>),
    Tensor(Box<FormExpr>, Box<FormExpr>),
    Scaled(Coeff, Box<FormExpr>),
}

impl FormExpr {
    pub fn elaborate(&self, field: &FieldDesc) -> Result<QForm> {
        match self {
            FormExpr::Diagonal(cs) => {
                let coeffs = cs.iter().map(|c| c.elaborate(field)).collect::<Result<_>>()?;
                Ok(QForm::new(field.clone(), coeffs))
            }
            FormExpr::Pfister(_) => Ok(self.pfister(field)?.expect("pfister literal").expand()),
            FormExpr::Sum(a, b) => a.elaborate(field)?.orthogonal_sum(&b.elaborate(field)?),
            FormExpr::Tensor(a, b) => a.elaborate(field)?.tensor(&b.elaborate(field)?),
            FormExpr::Scaled(c, e) => Ok(e.elaborate(field)?.scale(c.elaborate(field)?)),
        }
    }

    /// The Pfister form of a `pf(...)` literal.
    pub fn pfister(&self, field: &FieldDesc) -> Result<Option<PfisterSpec>> {
        match self {
            FormExpr::Pfister(cs) => {
                let slots = cs.iter().map(|c| c.elaborate(field)).collect::<Result<_>>()?;
                Ok(Some(PfisterSpec::new(field, slots)))
            }
            _ => Ok(None),
        }
    }

    /// `(pi, q')` when the expression is literally `pf(...) (*) q'` or `q' (*) pf(...)`.
    pub fn product_factors(&self, field: &FieldDesc) -> Result<Option<(PfisterSpec, QForm)>> {
        if let FormExpr::Tensor(a, b) = self {
            if let Some(pi) = a.pfister(field)? {
                return Ok(Some((pi, b.elaborate(field)?)));
            }
            if let Some(pi) = b.pfister(field)? {
                return Ok(Some((pi, a.elaborate(field)?)));
            }
        }
        Ok(None)
    }

    fn precedence(&self) -> u8 {
        match self {
            FormExpr::Sum(..) => 0,
            FormExpr::Tensor(..) => 1,
            _ => 2,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        let list = |cs: &[Coeff]| cs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        match self {
            FormExpr::Diagonal(cs) => write!(f, "<{}>", list(cs)),
            FormExpr::Pfister(cs) => write!(f, "pf({})", list(cs)),
            FormExpr::Sum(a, b) => {
                a.write_at(f, 0)?;
                write!(f, " (+) ")?;
                b.write_at(f, 1)
            }
            FormExpr::Tensor(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " (*) ")?;
                b.write_at(f, 2)
            }
            FormExpr::Scaled(c, e) => {
                write!(f, "{c}*")?;
                e.write_at(f, 2)
            }
        }
    }
}

impl fmt::Display for FormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

/// A parsed input line: an expression and its optional `over` clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedForm {
    pub expr: FormExpr,
    pub field: Option<FieldDesc>,
}

impl ParsedForm {
    /// Elaborates over the `over` field, or `default` when there is none.
    pub fn elaborate(&self, default: Option<&FieldDesc>) -> Result<QForm> {
        self.expr.elaborate(self.field_or(default)?)
    }

    pub fn field_or<'a>(&'a self, default: Option<&'a FieldDesc>) -> Result<&'a FieldDesc> {
        self.field.as_ref().or(default).ok_or_else(|| Error::Syntax { pos: 0, msg: "missing `over FIELD`".into() })
    }
}

impl fmt::Display for ParsedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)?;
        if let Some(field) = &self.field {
            write!(f, " over {field}")?;
        }
        Ok(())
    }
}

/// Canonical text of a form: a diagonal literal with its field.
pub fn print_form(q: &QForm) -> String {
    let cs: Vec<Coeff> = q.coeffs().iter().map(|&a| Coeff::from_class(q.field(), a)).collect();
    ParsedForm { expr: FormExpr::Diagonal(cs), field: Some(q.field().clone()) }.to_string()
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected `{tok}`"))
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let r = self.rest();
        let mut chars = r.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() => {}
            _ => return None,
        }
        let end = chars.find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_')).map_or(r.len(), |(i, _)| i);
        self.pos += end;
        Some(&r[..end])
    }

    fn peek_ident(&mut self) -> Option<&'a str> {
        let save = self.pos;
        let id = self.ident();
        self.pos = save;
        id
    }

    fn at_pfister(&mut self) -> bool {
        self.skip_ws();
        let r = self.rest();
        r.starts_with("pf") && r[2..].trim_start().starts_with('(')
    }

    fn number(&mut self) -> Result<Option<i128>> {
        self.skip_ws();
        let r = self.rest();
        let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        if end == 0 {
            return Ok(None);
        }
        let n = r[..end].parse::<i128>().or_else(|_| self.err("number too large"))?;
        self.pos += end;
        Ok(Some(n))
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = self.eat("-");
        match self.number()? {
            Some(n) => {
                let n = i64::try_from(n).or_else(|_| self.err("exponent too large"))?;
                Ok(if neg { -n } else { n })
            }
            None => self.err("expected an integer"),
        }
    }

    fn form(&mut self) -> Result<FormExpr> {
        let mut lhs = self.term()?;
        while self.eat("(+)") {
            let rhs = self.term()?;
            lhs = FormExpr::Sum(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<FormExpr> {
        let mut lhs = self.factor()?;
        while self.eat("(*)") {
            let rhs = self.factor()?;
            lhs = FormExpr::Tensor(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<FormExpr> {
        match self.peek() {
            Some('<') => {
                self.pos += 1;
                let cs = self.coeff_list()?;
                self.expect(">")?;
                Ok(FormExpr::Diagonal(cs))
            }
            Some('(') if !self.rest().starts_with("(+)") && !self.rest().starts_with("(*)") => {
                self.pos += 1;
                let e = self.form()?;
                self.expect(")")?;
                Ok(e)
            }
            Some(_) if self.at_pfister() => {
                self.expect("pf")?;
                self.expect("(")?;
                let cs = self.coeff_list()?;
                self.expect(")")?;
                Ok(FormExpr::Pfister(cs))
            }
            Some(c) if c == '-' || c == '+' || c.is_ascii_alphanumeric() => {
                let c = self.coeff()?;
                self.expect("*")?;
                let e = self.factor()?;
                Ok(FormExpr::Scaled(c, Box::new(e)))
            }
            Some(_) => self.err("expected a form"),
            None => self.err("unexpected end of input"),
        }
    }

    fn coeff_list(&mut self) -> Result<Vec<Coeff>> {
        let mut cs = vec![self.coeff()?];
        while self.eat(",") {
            cs.push(self.coeff()?);
        }
        Ok(cs)
    }

    fn coeff(&mut self) -> Result<Coeff> {
        let start = self.pos;
        let mut sign = 1;
        if self.eat("-") {
            sign = -1;
        } else {
            self.eat("+");
        }
        let mut num = 1;
        let mut den = 1;
        let mut have_number = false;
        if let Some(n) = self.number()? {
            num = n;
            have_number = true;
            if self.eat("/") {
                den = self.number()?.map_or_else(|| self.err("expected a denominator"), Ok)?;
            }
        }
        let mut vars: Vec<(String, i64)> = Vec::new();
        loop {
            let save = self.pos;
            // a star separates factors, except directly after a number (`3x`)
            // or for the leading variable
            let juxtaposed =
                vars.is_empty() && (!have_number || self.rest().starts_with(|c: char| c.is_ascii_alphabetic()));
            if !juxtaposed && !self.eat("*") {
                break;
            }
            if self.at_pfister() || self.peek_ident().is_none() {
                self.pos = save;
                break;
            }
            let id = self.ident().expect("peeked");
            let e = if self.eat("^") { self.signed_int()? } else { 1 };
            match vars.iter_mut().find(|(v, _)| v == id) {
                Some(entry) => entry.1 += e,
                None => vars.push((id.to_string(), e)),
            }
        }
        if !have_number && vars.is_empty() {
            self.pos = start;
            return self.err("expected a coefficient");
        }
        if num == 0 {
            return Err(Error::DegenerateElement(format!("zero coefficient at {start}")));
        }
        if den == 0 {
            return Err(Error::DegenerateElement(format!("zero denominator at {start}")));
        }
        Ok(Coeff { num: sign * num, den, vars })
    }

    fn field(&mut self) -> Result<FieldDesc> {
        let mut f = if self.eat("Fp") {
            self.expect("(")?;
            let p = self.number()?.map_or_else(|| self.err("expected a prime"), Ok)?;
            self.expect(")")?;
            let p = u64::try_from(p).or_else(|_| self.err("prime too large"))?;
            FieldDesc::prime_field(p)?
        } else if self.eat("Q") {
            FieldDesc::rationals()
        } else {
            return self.err("expected `Q` or `Fp(p)`");
        };
        while self.eat("[[") {
            loop {
                let Some(v) = self.ident() else { return self.err("expected a variable name") };
                f = f.extend(v)?;
                if !self.eat(",") {
                    break;
                }
            }
            self.expect("]]")?;
        }
        Ok(f)
    }
}

pub fn parse_field(text: &str) -> Result<FieldDesc> {
    let mut p = Parser::new(text);
    let f = p.field()?;
    if !p.at_end() {
        return p.err("trailing input after field");
    }
    Ok(f)
}

/// Parses `form [over FIELD]`.
pub fn parse_form_expr(text: &str) -> Result<ParsedForm> {
    let mut p = Parser::new(text);
    let expr = p.form()?;
    let field = if p.peek_ident() == Some("over") {
        p.ident();
        Some(p.field()?)
    } else {
        None
    };
    if !p.at_end() {
        return p.err("unexpected trailing input");
    }
    Ok(ParsedForm { expr, field })
}

/// Parses and elaborates in one step.
pub fn parse_form(text: &str, default: Option<&FieldDesc>) -> Result<QForm> {
    parse_form_expr(text)?.elaborate(default)
}

/// Parses `pf(a1,...,an)`.
pub fn parse_pfister(text: &str, field: &FieldDesc) -> Result<PfisterSpec> {
    let parsed = parse_form_expr(text)?;
    let f = parsed.field_or(Some(field))?;
    parsed.expr.pfister(f)?.ok_or_else(|| Error::Syntax { pos: 0, msg: format!("`{text}` is not a pf(...) literal") })
}

/// Parses a sum of quaternion symbols `(a,b) + (c,d)`; `0` is the trivial class.
pub fn parse_brauer(text: &str, field: &FieldDesc) -> Result<BrauerClass2> {
    let mut p = Parser::new(text);
    let mut symbols = Vec::new();
    if p.eat("0") && p.at_end() {
        return Ok(BrauerClass2::trivial(field));
    }
    p.pos = 0;
    loop {
        p.expect("(")?;
        let a = p.coeff()?.elaborate(field)?;
        p.expect(",")?;
        let b = p.coeff()?.elaborate(field)?;
        p.expect(")")?;
        symbols.push((a, b));
        if !p.eat("+") {
            break;
        }
    }
    if !p.at_end() {
        return p.err("unexpected trailing input");
    }
    Ok(BrauerClass2::from_symbols(field, symbols))
}

/// Parses a comma-separated list of coefficients.
pub fn parse_coeffs(text: &str, field: &FieldDesc) -> Result<Vec<SquareClass>> {
    let mut p = Parser::new(text);
    let cs = p.coeff_list()?;
    if !p.at_end() {
        return p.err("unexpected trailing input");
    }
    cs.iter().map(|c| c.elaborate(field)).collect()
}
