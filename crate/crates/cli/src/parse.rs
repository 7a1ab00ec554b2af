//! Line-oriented script parser. Bindings are evaluated while parsing, so every
//! shape, type and context error surfaces here with a position.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use chu_core::chu::{internal_hom, reflect, tensor, ChuObject, Side};
use chu_core::fincat::{canned_situation, Situation};
use chu_core::laws::LawId;
use chu_core::modring::{cyclic, dual_module, tensor_k, NilModule, RingSpec};
use chu_core::topo::{Functional, PresentedSpace};
use chu_core::{FieldSpec, Matrix};
use serde::de::DeserializeOwned;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Chu(ChuObject),
    Module(NilModule),
    Space(PresentedSpace),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Chu(_) => "Chu object",
            Value::Module(_) => "module",
            Value::Space(_) => "presented space",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (text|json)")),
        }
    }
}

/// Campaign sizes left unset fall back to the command-line flags, then to
/// the check's own default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Sizes {
    pub samples: Option<usize>,
    pub dims: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    Involution(ChuObject),
    Law(LawId, Vec<ChuObject>),
    Separated(ChuObject),
    Extensional(ChuObject),
    Fr(ChuObject),
    FrCampaign(Sizes),
    Rf(PresentedSpace),
    RfCampaign(Sizes),
    EndK,
    Factor(PresentedSpace, Functional),
    FactorCorpus(Sizes),
    Extend(PresentedSpace, Functional),
    Sigma(PresentedSpace),
    SigmaCorpus,
    Finprod(Sizes),
    Pullback(Sizes),
    SelfInjective(Sizes),
    Cogenerator(NilModule),
    CogeneratorCampaign(Sizes),
    SelfDual,
    TensorTable,
    Baer(NilModule),
    EmbedCyclic,
    Appendix(String, Box<Situation>),
    TwoAdj(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Field(FieldSpec),
    Ring(RingSpec),
    Bind(String, Value),
    Check(Check),
    Laws { laws: Vec<LawId>, sizes: Sizes, corrupt: bool },
    Replay { law: LawId, inputs: Vec<ChuObject>, corrupt: bool },
    Report { format: Format, path: Option<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stmt {
    pub line: usize,
    /// The source line with comments and surrounding space removed.
    pub text: String,
    pub kind: StmtKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Script {
    pub field: Option<FieldSpec>,
    pub ring: Option<RingSpec>,
    pub stmts: Vec<Stmt>,
}

#[derive(Debug, Clone)]
struct Tok<'a> {
    s: &'a str,
    col: usize,
}

/// Splits on whitespace, keeping bracketed groups whole.
fn tokenize(line: &str) -> Result<Vec<Tok<'_>>, (usize, String)> {
    let mut out = Vec::new();
    let mut start = None;
    let mut depth = 0i32;
    for (i, c) in line.char_indices() {
        match c {
            '[' | '{' => {
                depth += 1;
                start.get_or_insert(i);
            }
            ']' | '}' => {
                depth -= 1;
                if depth < 0 {
                    return Err((i + 1, "unbalanced bracket".into()));
                }
            }
            c if c.is_whitespace() && depth == 0 => {
                if let Some(s) = start.take() {
                    out.push(Tok { s: &line[s..i], col: s + 1 });
                }
            }
            _ => {
                start.get_or_insert(i);
            }
        }
    }
    if depth != 0 {
        return Err((start.unwrap_or(0) + 1, "unclosed bracket".into()));
    }
    if let Some(s) = start {
        out.push(Tok { s: &line[s..], col: s + 1 });
    }
    Ok(out)
}

struct Parser<'a> {
    base: &'a Path,
    script: Script,
    names: BTreeMap<String, Value>,
}

struct Line<'t, 'a> {
    no: usize,
    toks: &'t [Tok<'a>],
    pos: usize,
    end_col: usize,
}

impl<'t, 'a> Line<'t, 'a> {
    fn err<T>(&self, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { line: self.no, col, msg: msg.into() })
    }

    fn next(&mut self, what: &str) -> Result<Tok<'a>, ParseError> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => self.err(self.end_col, format!("expected {what}")),
        }
    }

    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos)
    }

    fn done(&self) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) => self.err(t.col, format!("unexpected `{}`", t.s)),
            None => Ok(()),
        }
    }

    fn int<T: FromStr>(&mut self, what: &str) -> Result<T, ParseError> {
        let t = self.next(what)?;
        t.s.parse().or_else(|_| self.err(t.col, format!("expected {what}, found `{}`", t.s)))
    }

    fn json<T: DeserializeOwned>(&mut self, what: &str) -> Result<T, ParseError> {
        let t = self.next(what)?;
        // `{rows}` is accepted for generator lists
        let src = match t.s.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            Some(inner) => format!("[{inner}]"),
            None => t.s.to_string(),
        };
        serde_json::from_str(&src).or_else(|e| self.err(t.col, format!("malformed {what}: {e}")))
    }

    /// `--samples N`, `--dims N` / `--dim N` and `--corrupt`, in any order.
    fn flags(&mut self, allow_corrupt: bool) -> Result<(Sizes, bool), ParseError> {
        let mut sizes = Sizes::default();
        let mut corrupt = false;
        while let Some(t) = self.peek().cloned() {
            self.pos += 1;
            match t.s {
                "--samples" => sizes.samples = Some(self.int("a sample count")?),
                "--dims" | "--dim" => sizes.dims = Some(self.int("a dimension bound")?),
                "--corrupt" if allow_corrupt => corrupt = true,
                _ => return self.err(t.col, format!("unknown flag `{}`", t.s)),
            }
        }
        Ok((sizes, corrupt))
    }
}

fn is_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

const KEYWORDS: [&str; 6] = ["field", "ring", "check", "laws", "replay", "report"];

impl<'a> Parser<'a> {
    fn field(&self, l: &Line, col: usize) -> Result<FieldSpec, ParseError> {
        match self.script.field {
            Some(f) => Ok(f),
            None => l.err(col, "no field in scope (declare `field P` or `ring P N` first)"),
        }
    }

    fn ring(&self, l: &Line, col: usize) -> Result<RingSpec, ParseError> {
        match self.script.ring {
            Some(r) => Ok(r),
            None => l.err(col, "no ring in scope (declare `ring P N` first)"),
        }
    }

    fn lookup(&self, l: &mut Line) -> Result<(Value, usize), ParseError> {
        let t = l.next("a name")?;
        match self.names.get(t.s) {
            Some(v) => Ok((v.clone(), t.col)),
            None if is_name(t.s) => l.err(t.col, format!("unbound name `{}`", t.s)),
            None => l.err(t.col, format!("expected a name, found `{}`", t.s)),
        }
    }

    fn chu(&self, l: &mut Line) -> Result<ChuObject, ParseError> {
        match self.lookup(l)? {
            (Value::Chu(o), _) => Ok(o),
            (v, col) => l.err(col, format!("expected a Chu object, found a {}", v.kind())),
        }
    }

    fn module(&self, l: &mut Line) -> Result<NilModule, ParseError> {
        match self.lookup(l)? {
            (Value::Module(m), _) => Ok(m),
            (v, col) => l.err(col, format!("expected a module, found a {}", v.kind())),
        }
    }

    fn space(&self, l: &mut Line) -> Result<PresentedSpace, ParseError> {
        match self.lookup(l)? {
            (Value::Space(v), _) => Ok(v),
            (v, col) => l.err(col, format!("expected a presented space, found a {}", v.kind())),
        }
    }

    fn set_field(&mut self, l: &Line, col: usize, f: FieldSpec) -> Result<(), ParseError> {
        match self.script.field {
            Some(old) if old != f => l.err(col, format!("field {} conflicts with field {} in scope", f.p(), old.p())),
            _ => {
                self.script.field = Some(f);
                Ok(())
            }
        }
    }

    fn prime(&self, l: &mut Line) -> Result<(FieldSpec, usize), ParseError> {
        let t = l.next("a prime")?;
        let p: u64 = t.s.parse().or_else(|_| l.err(t.col, format!("expected a prime, found `{}`", t.s)))?;
        match FieldSpec::new(p) {
            Ok(f) => Ok((f, t.col)),
            Err(_) => l.err(t.col, format!("{p} is not a supported prime")),
        }
    }

    fn functional(&self, l: &mut Line, v: &PresentedSpace) -> Result<Functional, ParseError> {
        let col = l.peek().map_or(l.end_col, |t| t.col);
        let coeffs: Vec<i64> = l.json("functional coefficients")?;
        let f = v.field();
        match Functional::new(v, coeffs.iter().map(|&c| f.reduce(c)).collect()) {
            Ok(phi) => Ok(phi),
            Err(e) => l.err(col, e.to_string()),
        }
    }

    fn binding(&mut self, l: &mut Line) -> Result<Value, ParseError> {
        let head = l.next("a constructor")?;
        let value = match head.s {
            "chu" => {
                let field = self.field(l, head.col)?;
                let a: usize = l.int("dimension of A")?;
                let x: usize = l.int("dimension of X")?;
                let col = l.peek().map_or(l.end_col, |t| t.col);
                let rows: Vec<Vec<i64>> = l.json("pairing matrix")?;
                if rows.len() != a || rows.iter().any(|r| r.len() != x) {
                    return l.err(col, format!("pairing must be {a} rows of {x} entries"));
                }
                let flat: Vec<i64> = rows.concat();
                let m = Matrix::from_ints(field, a, x, &flat).or_else(|e| l.err(col, e.to_string()))?;
                Value::Chu(ChuObject::from_pairing(m))
            }
            "dual" => match self.lookup(l)? {
                (Value::Chu(o), _) => Value::Chu(o.dual()),
                (Value::Module(m), _) => Value::Module(dual_module(&m)),
                (v, col) => return l.err(col, format!("no dual of a {}", v.kind())),
            },
            "S" => Value::Chu(reflect(&self.chu(l)?, Side::Separated).object),
            "E" => Value::Chu(reflect(&self.chu(l)?, Side::Extensional).object),
            "tensor" | "hom" => {
                let (a, col) = self.lookup(l)?;
                let (b, col2) = self.lookup(l)?;
                match (a, b, head.s) {
                    (Value::Chu(s), Value::Chu(t), "tensor") => Value::Chu(tensor(&s, &t).or_else(|e| l.err(col, e.to_string()))?),
                    (Value::Chu(s), Value::Chu(t), _) => Value::Chu(internal_hom(&s, &t).or_else(|e| l.err(col, e.to_string()))?),
                    (Value::Module(m1), Value::Module(m2), "tensor") => {
                        Value::Module(tensor_k(&m1, &m2).or_else(|e| l.err(col, e.to_string()))?)
                    }
                    (a, b, op) => {
                        return l.err(col2, format!("no {op} of a {} and a {}", a.kind(), b.kind()));
                    }
                }
            }
            "cyclic" => {
                let ring = self.ring(l, head.col)?;
                let col = l.peek().map_or(l.end_col, |t| t.col);
                let i: usize = l.int("a cyclic order")?;
                Value::Module(cyclic(ring, i).or_else(|e| l.err(col, e.to_string()))?)
            }
            "presented" => {
                let field = self.field(l, head.col)?;
                let factors: Vec<usize> = l.json("factor dimensions")?;
                let col = l.peek().map_or(l.end_col, |t| t.col);
                let gens: Vec<Vec<i64>> = l.json("generator rows")?;
                let rows: Vec<Vec<u32>> = gens.iter().map(|r| r.iter().map(|&e| field.reduce(e)).collect()).collect();
                Value::Space(PresentedSpace::new(field, factors, &rows).or_else(|e| l.err(col, e.to_string()))?)
            }
            other => return l.err(head.col, format!("unknown constructor `{other}`")),
        };
        l.done()?;
        Ok(value)
    }

    /// `NAME` or `campaign FLAGS`.
    fn named_or_campaign<T>(
        &self,
        l: &mut Line,
        named: impl FnOnce(&Self, &mut Line) -> Result<T, ParseError>,
        campaign: impl FnOnce(Sizes) -> T,
        keyword: &str,
    ) -> Result<T, ParseError> {
        if l.peek().map(|t| t.s) == Some(keyword) {
            l.pos += 1;
            Ok(campaign(l.flags(false)?.0))
        } else {
            named(self, l)
        }
    }

    fn check(&mut self, l: &mut Line) -> Result<Check, ParseError> {
        let head = l.next("a check name")?;
        let col = head.col;
        let check = match head.s {
            "involution" => Check::Involution(self.chu(l)?),
            "separated" => Check::Separated(self.chu(l)?),
            "extensional" => Check::Extensional(self.chu(l)?),
            "law" => {
                let t = l.next("a law id")?;
                let law: LawId = t.s.parse().or_else(|e: chu_core::laws::UnknownLaw| l.err(t.col, e.to_string()))?;
                let mut objs = Vec::new();
                while l.peek().is_some() {
                    objs.push(self.chu(l)?);
                }
                if objs.len() != law.arity() {
                    return l.err(t.col, format!("{law} takes {} objects, got {}", law.arity(), objs.len()));
                }
                Check::Law(law, objs)
            }
            "fr" => self.named_or_campaign(l, |p, l| p.chu(l).map(Check::Fr), Check::FrCampaign, "campaign")?,
            "rf" => {
                self.field(l, col)?;
                self.named_or_campaign(l, |p, l| p.space(l).map(Check::Rf), Check::RfCampaign, "campaign")?
            }
            "endk" => {
                self.field(l, col)?;
                Check::EndK
            }
            "factor" | "extend" => {
                if head.s == "factor" && l.peek().map(|t| t.s) == Some("corpus") {
                    l.pos += 1;
                    self.field(l, col)?;
                    Check::FactorCorpus(l.flags(false)?.0)
                } else {
                    let v = self.space(l)?;
                    let phi = self.functional(l, &v)?;
                    if head.s == "factor" {
                        Check::Factor(v, phi)
                    } else {
                        Check::Extend(v, phi)
                    }
                }
            }
            "sigma" => {
                if l.peek().map(|t| t.s) == Some("corpus") {
                    l.pos += 1;
                    Check::SigmaCorpus
                } else {
                    Check::Sigma(self.space(l)?)
                }
            }
            "finprod" | "pullback" => {
                self.field(l, col)?;
                let sizes = l.flags(false)?.0;
                if head.s == "finprod" {
                    Check::Finprod(sizes)
                } else {
                    Check::Pullback(sizes)
                }
            }
            "selfinjective" => {
                self.ring(l, col)?;
                Check::SelfInjective(l.flags(false)?.0)
            }
            "cogenerator" => {
                self.ring(l, col)?;
                self.named_or_campaign(l, |p, l| p.module(l).map(Check::Cogenerator), Check::CogeneratorCampaign, "campaign")?
            }
            "selfdual" | "tensortable" | "embedcyclic" => {
                self.ring(l, col)?;
                match head.s {
                    "selfdual" => Check::SelfDual,
                    "tensortable" => Check::TensorTable,
                    _ => Check::EmbedCyclic,
                }
            }
            "baer" => Check::Baer(self.module(l)?),
            "appendix" => {
                let t = l.next("an instance name or path")?;
                let s = match canned_situation(t.s) {
                    Some(s) => s,
                    None => {
                        let path = self.base.join(t.s);
                        let text = std::fs::read_to_string(&path)
                            .or_else(|e| l.err(t.col, format!("cannot read {}: {e}", path.display())))?;
                        serde_json::from_str(&text).or_else(|e| l.err(t.col, format!("bad instance {}: {e}", t.s)))?
                    }
                };
                Check::Appendix(t.s.to_string(), Box::new(s))
            }
            "twoadj" => {
                let t = l.next("identity|diagonal")?;
                if !matches!(t.s, "identity" | "diagonal") {
                    return l.err(t.col, format!("unknown 2-adjunction `{}` (identity|diagonal)", t.s));
                }
                Check::TwoAdj(t.s.to_string())
            }
            other => return l.err(col, format!("unknown check `{other}`")),
        };
        l.done()?;
        Ok(check)
    }

    fn statement(&mut self, l: &mut Line) -> Result<Option<StmtKind>, ParseError> {
        let Some(first) = l.peek().cloned() else { return Ok(None) };
        if l.toks.get(1).map(|t| t.s) == Some(":=") {
            if !is_name(first.s) || KEYWORDS.contains(&first.s) {
                return l.err(first.col, format!("`{}` cannot be bound", first.s));
            }
            if self.names.contains_key(first.s) {
                return l.err(first.col, format!("`{}` is already bound", first.s));
            }
            l.pos = 2;
            let v = self.binding(l)?;
            self.names.insert(first.s.to_string(), v.clone());
            return Ok(Some(StmtKind::Bind(first.s.to_string(), v)));
        }
        l.pos = 1;
        let kind = match first.s {
            "field" => {
                let (f, col) = self.prime(l)?;
                l.done()?;
                if self.script.field.is_some() && self.script.ring.is_none() {
                    return l.err(first.col, "only one field declaration is allowed");
                }
                self.set_field(l, col, f)?;
                StmtKind::Field(f)
            }
            "ring" => {
                let (f, col) = self.prime(l)?;
                let n_tok = l.peek().cloned();
                let n: usize = l.int("a nilpotency index")?;
                l.done()?;
                if self.script.ring.is_some() {
                    return l.err(first.col, "only one ring declaration is allowed");
                }
                let ring = RingSpec::new(f.p() as u64, n)
                    .or_else(|e| l.err(n_tok.map_or(col, |t| t.col), e.to_string()))?;
                self.set_field(l, col, f)?;
                self.script.ring = Some(ring);
                StmtKind::Ring(ring)
            }
            "check" => StmtKind::Check(self.check(l)?),
            "laws" => {
                let t = l.next("`all` or a law id")?;
                let laws = if t.s == "all" {
                    LawId::ALL.to_vec()
                } else {
                    vec![t.s.parse().or_else(|e: chu_core::laws::UnknownLaw| l.err(t.col, e.to_string()))?]
                };
                self.field(l, first.col)?;
                let (sizes, corrupt) = l.flags(true)?;
                StmtKind::Laws { laws, sizes, corrupt }
            }
            "replay" => {
                let t = l.next("a law id")?;
                let law: LawId = t.s.parse().or_else(|e: chu_core::laws::UnknownLaw| l.err(t.col, e.to_string()))?;
                let field = self.field(l, first.col)?;
                let col = l.peek().map_or(l.end_col, |t| t.col);
                let inputs: Vec<ChuObject> = l.json("counterexample objects")?;
                if inputs.len() != law.arity() {
                    return l.err(col, format!("{law} takes {} objects, got {}", law.arity(), inputs.len()));
                }
                if inputs.iter().any(|o| o.field() != field) {
                    return l.err(col, format!("counterexample is not over F_{}", field.p()));
                }
                let (_, corrupt) = l.flags(true)?;
                StmtKind::Replay { law, inputs, corrupt }
            }
            "report" => {
                let t = l.next("text|json")?;
                let format = t.s.parse().or_else(|e: String| l.err(t.col, e))?;
                let path = l.peek().map(|t| t.s.to_string());
                if path.is_some() {
                    l.pos += 1;
                }
                l.done()?;
                StmtKind::Report { format, path }
            }
            other => return l.err(first.col, format!("unknown statement `{other}`")),
        };
        Ok(Some(kind))
    }
}

/// Parses a script. Relative instance paths in `check appendix` resolve
/// against `base`.
pub fn parse_program_in(text: &str, base: &Path) -> Result<Script, ParseError> {
    let mut p = Parser { base, script: Script::default(), names: BTreeMap::new() };
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks = tokenize(body).map_err(|(col, msg)| ParseError { line: no, col, msg })?;
        let mut l = Line { no, toks: &toks, pos: 0, end_col: body.trim_end().len() + 1 };
        if let Some(kind) = p.statement(&mut l)? {
            let text = toks.iter().map(|t| t.s).collect::<Vec<_>>().join(" ");
            p.script.stmts.push(Stmt { line: no, text, kind });
        }
    }
    Ok(p.script)
}

pub fn parse_program(text: &str) -> Result<Script, ParseError> {
    parse_program_in(text, Path::new("."))
}
