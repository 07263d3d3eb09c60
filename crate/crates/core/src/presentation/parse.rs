//! Parser for the presentation DSL.
//!
//! Statements are keyword-introduced and `;`-terminated; newlines are
//! whitespace and `#` starts a line comment.
//!
//! ```text
//! gens a[i] for i >= 1, x, y;
//! rels a[s]^s * a[s-1]^-1 for s >= 2;
//! rels [x, y]; x^2;
//! torsion_free;
//! ```
//!
//! Word syntax: juxtaposition or `*` for products, `^` followed by an integer
//! or affine parameter expression for powers, `^` followed by a word for
//! conjugation (`u^v = v^-1*u*v`, `u^-v = (u^-1)^v`), `[u, v]` for the
//! commutator `u^-1*v^-1*u*v`, `-` prefix for inversion, `1` for the empty
//! word. A `for` suffix turns a relator into a schema over one or two integer
//! parameters.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{
    AffineExpr, FamilyDecl, ParamRange, Presentation, RelatorSchema, SchemaLetter, SchemaWord,
};

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: u32, col: u32, msg: String },
    #[error("{line}:{col}: unknown generator `{name}`")]
    UndeclaredGenerator { line: u32, col: u32, name: String },
    #[error("{line}:{col}: unknown parameter `{name}` in an index or exponent")]
    UndeclaredParam { line: u32, col: u32, name: String },
    #[error("{line}:{col}: index `{index}` of family `{name}` can fall below its declared minimum {min}")]
    IndexOutOfRange {
        line: u32,
        col: u32,
        name: String,
        index: String,
        min: u32,
    },
    #[error("{line}:{col}: family `{name}` requires an index")]
    FamilyNeedsIndex { line: u32, col: u32, name: String },
    #[error("{line}:{col}: duplicate generator `{name}`")]
    DuplicateGenerator { line: u32, col: u32, name: String },
    #[error("{line}:{col}: parameter `{name}` shadows a declared generator")]
    ParamShadowsGenerator { line: u32, col: u32, name: String },
    #[error("{line}:{col}: relator families take at most two parameters")]
    TooManyParams { line: u32, col: u32 },
    #[error("{line}:{col}: exponent is not affine in the parameters")]
    NonAffineExponent { line: u32, col: u32 },
    #[error("{line}:{col}: parametric exponent on a multi-letter expression")]
    ParametricExponentOnCompound { line: u32, col: u32 },
}

fn syntax(line: u32, col: u32, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

// ---------------------------------------------------------------------------
// lexer

#[derive(Clone, PartialEq, Eq, Debug)]
enum TokKind {
    Ident(String),
    Int(i64),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Caret,
    Star,
    Plus,
    Minus,
    Comma,
    Semi,
    DotDot,
    Ge,
    KwGens,
    KwRels,
    KwFor,
    KwIn,
    KwTorsionFree,
}

#[derive(Clone, Debug)]
struct Tok {
    kind: TokKind,
    line: u32,
    col: u32,
}

fn lex(text: &str) -> Result<Vec<Tok>, ParseError> {
    let mut toks = Vec::new();
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump(&mut chars);
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut s = String::new();
                while chars
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
                {
                    s.push(bump(&mut chars));
                }
                let kind = match s.as_str() {
                    "gens" => TokKind::KwGens,
                    "rels" => TokKind::KwRels,
                    "for" => TokKind::KwFor,
                    "in" => TokKind::KwIn,
                    "torsion_free" => TokKind::KwTorsionFree,
                    _ => TokKind::Ident(s),
                };
                toks.push(Tok {
                    kind,
                    line: tline,
                    col: tcol,
                });
            }
            '0'..='9' => {
                let mut s = String::new();
                while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                    s.push(bump(&mut chars));
                }
                let n: i64 = s
                    .parse()
                    .map_err(|_| syntax(tline, tcol, "integer literal out of range"))?;
                toks.push(Tok {
                    kind: TokKind::Int(n),
                    line: tline,
                    col: tcol,
                });
            }
            '.' => {
                bump(&mut chars);
                if chars.peek() == Some(&'.') {
                    bump(&mut chars);
                    toks.push(Tok {
                        kind: TokKind::DotDot,
                        line: tline,
                        col: tcol,
                    });
                } else {
                    return Err(syntax(tline, tcol, "expected `..`"));
                }
            }
            '>' => {
                bump(&mut chars);
                if chars.peek() == Some(&'=') {
                    bump(&mut chars);
                    toks.push(Tok {
                        kind: TokKind::Ge,
                        line: tline,
                        col: tcol,
                    });
                } else {
                    return Err(syntax(tline, tcol, "expected `>=`"));
                }
            }
            _ => {
                let kind = match c {
                    '[' => TokKind::LBracket,
                    ']' => TokKind::RBracket,
                    '(' => TokKind::LParen,
                    ')' => TokKind::RParen,
                    '^' => TokKind::Caret,
                    '*' => TokKind::Star,
                    '+' => TokKind::Plus,
                    '-' => TokKind::Minus,
                    ',' => TokKind::Comma,
                    ';' => TokKind::Semi,
                    other => {
                        return Err(syntax(
                            tline,
                            tcol,
                            format!("unexpected character `{other}`"),
                        ))
                    }
                };
                bump(&mut chars);
                toks.push(Tok {
                    kind,
                    line: tline,
                    col: tcol,
                });
            }
        }
    }
    Ok(toks)
}

// ---------------------------------------------------------------------------
// token cursor

struct Cursor<'a> {
    toks: &'a [Tok],
    pos: usize,
    end_line: u32,
    end_col: u32,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Tok], end_line: u32, end_col: u32) -> Self {
        Cursor {
            toks,
            pos: 0,
            end_line,
            end_col,
        }
    }

    fn peek(&self) -> Option<&TokKind> {
        self.toks.get(self.pos).map(|t| &t.kind)
    }

    fn here(&self) -> (u32, u32) {
        match self.toks.get(self.pos) {
            Some(t) => (t.line, t.col),
            None => (self.end_line, self.end_col),
        }
    }

    fn next(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, kind: &TokKind) -> bool {
        if self.peek() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: &TokKind, what: &str) -> Result<(), ParseError> {
        if self.eat(kind) {
            Ok(())
        } else {
            let (l, c) = self.here();
            Err(syntax(l, c, format!("expected {what}")))
        }
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

// ---------------------------------------------------------------------------
// word expression AST

type Pos = (u32, u32);

#[derive(Clone, Debug)]
enum Ast {
    One,
    Sym {
        name: String,
        pos: Pos,
    },
    Fam {
        name: String,
        index: AffineExpr,
        pos: Pos,
    },
    Inv(Box<Ast>),
    Prod(Vec<Ast>),
    Pow {
        base: Box<Ast>,
        exp: AffineExpr,
        pos: Pos,
    },
    Conj {
        base: Box<Ast>,
        by: Box<Ast>,
        inv_base: bool,
    },
    Comm(Box<Ast>, Box<Ast>),
}

fn starts_atom(kind: &TokKind) -> bool {
    matches!(
        kind,
        TokKind::Ident(_) | TokKind::Int(_) | TokKind::LParen | TokKind::LBracket | TokKind::Minus
    )
}

fn parse_product(cur: &mut Cursor, params: &[(String, ParamRange)]) -> Result<Ast, ParseError> {
    let mut factors = Vec::new();
    loop {
        match cur.peek() {
            Some(k) if starts_atom(k) => {
                factors.push(parse_factor(cur, params)?);
                // optional `*` between factors
                cur.eat(&TokKind::Star);
            }
            _ => break,
        }
    }
    let (l, c) = cur.here();
    match factors.len() {
        0 => Err(syntax(l, c, "expected a word expression")),
        1 => Ok(factors.pop().unwrap()),
        _ => Ok(Ast::Prod(factors)),
    }
}

fn parse_factor(cur: &mut Cursor, params: &[(String, ParamRange)]) -> Result<Ast, ParseError> {
    let mut base = parse_atom(cur, params)?;
    while cur.peek() == Some(&TokKind::Caret) {
        let pos = cur.here();
        cur.next();
        base = parse_exponent(cur, params, base, pos)?;
    }
    Ok(base)
}

fn parse_atom(cur: &mut Cursor, params: &[(String, ParamRange)]) -> Result<Ast, ParseError> {
    let (l, c) = cur.here();
    match cur.next().map(|t| t.kind.clone()) {
        Some(TokKind::Ident(name)) => {
            if cur.peek() == Some(&TokKind::LBracket) {
                cur.next();
                let index = parse_affine(cur)?;
                cur.expect(&TokKind::RBracket, "`]` after index")?;
                Ok(Ast::Fam {
                    name,
                    index,
                    pos: (l, c),
                })
            } else {
                Ok(Ast::Sym { name, pos: (l, c) })
            }
        }
        Some(TokKind::Int(1)) => Ok(Ast::One),
        Some(TokKind::Int(n)) => Err(syntax(
            l,
            c,
            format!("unexpected integer `{n}` (only `1` denotes the empty word)"),
        )),
        Some(TokKind::LParen) => {
            let inner = parse_product(cur, params)?;
            cur.expect(&TokKind::RParen, "`)`")?;
            Ok(inner)
        }
        Some(TokKind::LBracket) => {
            let u = parse_product(cur, params)?;
            cur.expect(&TokKind::Comma, "`,` in commutator")?;
            let v = parse_product(cur, params)?;
            cur.expect(&TokKind::RBracket, "`]` after commutator")?;
            Ok(Ast::Comm(Box::new(u), Box::new(v)))
        }
        Some(TokKind::Minus) => {
            let inner = parse_atom(cur, params)?;
            Ok(Ast::Inv(Box::new(inner)))
        }
        _ => Err(syntax(l, c, "expected a word expression")),
    }
}

/// Parses the right operand of `^`. An integer or an affine expression in the
/// schema parameters is a power; anything else is a conjugator word. A
/// leading `-` inverts the base first (`u^-v = (u^-1)^v`, `u^-2 = (u^2)^-1`).
fn parse_exponent(
    cur: &mut Cursor,
    params: &[(String, ParamRange)],
    base: Ast,
    pos: Pos,
) -> Result<Ast, ParseError> {
    let neg = cur.eat(&TokKind::Minus);
    let (l, c) = cur.here();
    let is_param = |name: &str| params.iter().any(|(p, _)| p == name);
    match cur.peek().cloned() {
        Some(TokKind::Int(n)) => {
            cur.next();
            let exp = AffineExpr::constant(if neg { -n } else { n });
            Ok(Ast::Pow {
                base: Box::new(base),
                exp,
                pos,
            })
        }
        Some(TokKind::Ident(name)) if is_param(&name) => {
            cur.next();
            let exp = if neg {
                AffineExpr::param(name).neg()
            } else {
                AffineExpr::param(name)
            };
            Ok(Ast::Pow {
                base: Box::new(base),
                exp,
                pos,
            })
        }
        Some(TokKind::LParen) => {
            // try the span as an affine expression over the parameters,
            // otherwise treat it as a conjugator word
            let close = matching_paren(cur)?;
            let span = &cur.toks[cur.pos + 1..close];
            let affine = {
                let mut sub = Cursor::new(span, cur.end_line, cur.end_col);
                match parse_affine(&mut sub) {
                    Ok(e) if sub.done() && e.params().all(is_param) => Some(e),
                    _ => None,
                }
            };
            match affine {
                Some(e) => {
                    cur.pos = close + 1;
                    let exp = if neg { e.neg() } else { e };
                    Ok(Ast::Pow {
                        base: Box::new(base),
                        exp,
                        pos,
                    })
                }
                None => {
                    cur.next(); // `(`
                    let by = parse_product(cur, params)?;
                    cur.expect(&TokKind::RParen, "`)` after conjugator")?;
                    let b = if neg { Ast::Inv(Box::new(base)) } else { base };
                    Ok(Ast::Conj {
                        base: Box::new(b),
                        by: Box::new(by),
                        inv_base: false,
                    })
                }
            }
        }
        Some(k) if starts_atom(&k) => {
            let by = parse_atom(cur, params)?;
            let b = if neg { Ast::Inv(Box::new(base)) } else { base };
            Ok(Ast::Conj {
                base: Box::new(b),
                by: Box::new(by),
                inv_base: false,
            })
        }
        _ => Err(syntax(l, c, "expected an exponent or conjugator after `^`")),
    }
}

/// Index of the `)` matching the `(` at the cursor.
fn matching_paren(cur: &Cursor) -> Result<usize, ParseError> {
    let mut depth = 0usize;
    for (i, t) in cur.toks.iter().enumerate().skip(cur.pos) {
        match t.kind {
            TokKind::LParen => depth += 1,
            TokKind::RParen => {
                depth -= 1;
                if depth == 0 {
                    return Ok(i);
                }
            }
            _ => {}
        }
    }
    let (l, c) = cur.here();
    Err(syntax(l, c, "unmatched `(`"))
}

/// `affine := ["-"] term (("+"|"-") term)*`, `term := INT ["*" IDENT] | IDENT ["*" INT]`.
fn parse_affine(cur: &mut Cursor) -> Result<AffineExpr, ParseError> {
    let mut acc = AffineExpr::constant(0);
    let mut negate = cur.eat(&TokKind::Minus);
    loop {
        let term = parse_affine_term(cur)?;
        acc = if negate {
            acc.sub(&term)
        } else {
            acc.add(&term)
        };
        if cur.eat(&TokKind::Plus) {
            negate = false;
        } else if cur.eat(&TokKind::Minus) {
            negate = true;
        } else {
            return Ok(acc);
        }
    }
}

fn parse_affine_term(cur: &mut Cursor) -> Result<AffineExpr, ParseError> {
    let (l, c) = cur.here();
    match cur.next().map(|t| t.kind.clone()) {
        Some(TokKind::Int(n)) => {
            if cur.eat(&TokKind::Star) {
                let (l2, c2) = cur.here();
                match cur.next().map(|t| t.kind.clone()) {
                    Some(TokKind::Ident(p)) => Ok(AffineExpr::param(p).scale(n)),
                    _ => Err(syntax(l2, c2, "expected parameter after `*`")),
                }
            } else {
                Ok(AffineExpr::constant(n))
            }
        }
        Some(TokKind::Ident(p)) => {
            if cur.eat(&TokKind::Star) {
                let (l2, c2) = cur.here();
                match cur.next().map(|t| t.kind.clone()) {
                    Some(TokKind::Int(n)) => Ok(AffineExpr::param(p).scale(n)),
                    _ => Err(syntax(l2, c2, "expected integer after `*`")),
                }
            } else {
                Ok(AffineExpr::param(p))
            }
        }
        _ => Err(syntax(l, c, "expected an integer or parameter")),
    }
}

// ---------------------------------------------------------------------------
// lowering to schema letters

struct LowerCtx<'a> {
    families: &'a [FamilyDecl],
    plain: &'a [String],
    params: &'a [(String, ParamRange)],
}

impl LowerCtx<'_> {
    fn check_params(&self, e: &AffineExpr, pos: Pos) -> Result<(), ParseError> {
        for p in e.params() {
            if !self.params.iter().any(|(name, _)| name == p) {
                return Err(ParseError::UndeclaredParam {
                    line: pos.0,
                    col: pos.1,
                    name: p.to_string(),
                });
            }
        }
        Ok(())
    }
}

fn invert_letters(mut letters: Vec<SchemaLetter>) -> Vec<SchemaLetter> {
    letters.reverse();
    for l in &mut letters {
        l.exponent = l.exponent.neg();
    }
    letters
}

fn lower(ast: &Ast, ctx: &LowerCtx) -> Result<Vec<SchemaLetter>, ParseError> {
    match ast {
        Ast::One => Ok(Vec::new()),
        Ast::Sym { name, pos } => {
            if ctx.plain.iter().any(|g| g == name) {
                Ok(vec![SchemaLetter::plain(
                    name.clone(),
                    AffineExpr::constant(1),
                )])
            } else if ctx.families.iter().any(|f| &f.name == name) {
                Err(ParseError::FamilyNeedsIndex {
                    line: pos.0,
                    col: pos.1,
                    name: name.clone(),
                })
            } else {
                Err(ParseError::UndeclaredGenerator {
                    line: pos.0,
                    col: pos.1,
                    name: name.clone(),
                })
            }
        }
        Ast::Fam { name, index, pos } => {
            let family = ctx
                .families
                .iter()
                .find(|f| &f.name == name)
                .ok_or_else(|| ParseError::UndeclaredGenerator {
                    line: pos.0,
                    col: pos.1,
                    name: name.clone(),
                })?;
            ctx.check_params(index, *pos)?;
            let (lo, _) = index.bounds_over(ctx.params);
            if lo.is_none() || lo.unwrap() < i64::from(family.min_index) {
                return Err(ParseError::IndexOutOfRange {
                    line: pos.0,
                    col: pos.1,
                    name: name.clone(),
                    index: index.to_string(),
                    min: family.min_index,
                });
            }
            Ok(vec![SchemaLetter::indexed(
                name.clone(),
                index.clone(),
                AffineExpr::constant(1),
            )])
        }
        Ast::Inv(inner) => Ok(invert_letters(lower(inner, ctx)?)),
        Ast::Prod(factors) => {
            let mut out = Vec::new();
            for f in factors {
                out.extend(lower(f, ctx)?);
            }
            Ok(out)
        }
        Ast::Pow { base, exp, pos } => {
            ctx.check_params(exp, *pos)?;
            let letters = lower(base, ctx)?;
            if letters.len() == 1 {
                let l = &letters[0];
                let exponent = l.exponent.mul(exp).ok_or(ParseError::NonAffineExponent {
                    line: pos.0,
                    col: pos.1,
                })?;
                Ok(vec![SchemaLetter {
                    name: l.name.clone(),
                    index: l.index.clone(),
                    exponent,
                }])
            } else {
                match exp.as_constant() {
                    Some(c) => {
                        let block = if c < 0 {
                            invert_letters(letters)
                        } else {
                            letters
                        };
                        let mut out = Vec::new();
                        for _ in 0..c.unsigned_abs() {
                            out.extend(block.iter().cloned());
                        }
                        Ok(out)
                    }
                    None => Err(ParseError::ParametricExponentOnCompound {
                        line: pos.0,
                        col: pos.1,
                    }),
                }
            }
        }
        Ast::Conj { base, by, inv_base } => {
            let mut b = lower(base, ctx)?;
            if *inv_base {
                b = invert_letters(b);
            }
            let h = lower(by, ctx)?;
            let mut out = invert_letters(h.clone());
            out.extend(b);
            out.extend(h);
            Ok(out)
        }
        Ast::Comm(u, v) => {
            let ul = lower(u, ctx)?;
            let vl = lower(v, ctx)?;
            let mut out = invert_letters(ul.clone());
            out.extend(invert_letters(vl.clone()));
            out.extend(ul);
            out.extend(vl);
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------------------
// statement-level parser

/// Parses presentation source text.
pub fn parse(text: &str) -> Result<Presentation, ParseError> {
    let toks = lex(text)?;
    let (end_line, end_col) = toks.last().map(|t| (t.line, t.col + 1)).unwrap_or((1, 1));
    let mut p = Presentation::default();
    let mut i = 0usize;
    while i < toks.len() {
        match toks[i].kind {
            TokKind::KwGens => {
                i = parse_gens(&toks, i + 1, &mut p, end_line, end_col)?;
            }
            TokKind::KwRels => {
                i = parse_rels(&toks, i + 1, &mut p, end_line, end_col)?;
            }
            TokKind::KwTorsionFree => {
                p.torsion_free_asserted = true;
                i += 1;
                if i < toks.len() && toks[i].kind == TokKind::Semi {
                    i += 1;
                }
            }
            _ => {
                return Err(syntax(
                    toks[i].line,
                    toks[i].col,
                    "expected `gens`, `rels`, or `torsion_free`",
                ));
            }
        }
    }
    Ok(p)
}

fn is_keyword(kind: &TokKind) -> bool {
    matches!(
        kind,
        TokKind::KwGens | TokKind::KwRels | TokKind::KwTorsionFree
    )
}

fn declare_name(p: &mut Presentation, name: &str, line: u32, col: u32) -> Result<(), ParseError> {
    let clash = p.plain_gens.iter().any(|g| g == name) || p.families.iter().any(|f| f.name == name);
    if clash {
        return Err(ParseError::DuplicateGenerator {
            line,
            col,
            name: name.to_string(),
        });
    }
    Ok(())
}

fn parse_gens(
    toks: &[Tok],
    mut i: usize,
    p: &mut Presentation,
    end_line: u32,
    end_col: u32,
) -> Result<usize, ParseError> {
    loop {
        match toks.get(i).map(|t| &t.kind) {
            None => return Ok(i),
            Some(TokKind::Semi) => return Ok(i + 1),
            Some(k) if is_keyword(k) => return Ok(i),
            Some(TokKind::Ident(name)) => {
                let (line, col) = (toks[i].line, toks[i].col);
                let name = name.clone();
                i += 1;
                if toks.get(i).map(|t| &t.kind) == Some(&TokKind::LBracket) {
                    // family: `a[i] for i >= lo`
                    i += 1;
                    let placeholder = match toks.get(i).map(|t| t.kind.clone()) {
                        Some(TokKind::Ident(s)) => s,
                        _ => {
                            let (l, c) = pos_at(toks, i, end_line, end_col);
                            return Err(syntax(l, c, "expected index placeholder"));
                        }
                    };
                    i += 1;
                    expect_at(toks, &mut i, &TokKind::RBracket, "`]`", end_line, end_col)?;
                    expect_at(toks, &mut i, &TokKind::KwFor, "`for`", end_line, end_col)?;
                    match toks.get(i).map(|t| t.kind.clone()) {
                        Some(TokKind::Ident(s)) if s == placeholder => (),
                        _ => {
                            let (l, c) = pos_at(toks, i, end_line, end_col);
                            return Err(syntax(
                                l,
                                c,
                                format!("expected the placeholder `{placeholder}` after `for`"),
                            ));
                        }
                    }
                    i += 1;
                    expect_at(toks, &mut i, &TokKind::Ge, "`>=`", end_line, end_col)?;
                    let min = match toks.get(i).map(|t| t.kind.clone()) {
                        Some(TokKind::Int(n)) if n >= 0 && n <= i64::from(u32::MAX) => n as u32,
                        _ => {
                            let (l, c) = pos_at(toks, i, end_line, end_col);
                            return Err(syntax(l, c, "expected a non-negative minimum index"));
                        }
                    };
                    i += 1;
                    declare_name(p, &name, line, col)?;
                    p.families.push(FamilyDecl {
                        name,
                        min_index: min,
                    });
                } else {
                    declare_name(p, &name, line, col)?;
                    p.plain_gens.push(name);
                }
                // decl separator
                if toks.get(i).map(|t| &t.kind) == Some(&TokKind::Comma) {
                    i += 1;
                }
            }
            Some(_) => {
                let (l, c) = pos_at(toks, i, end_line, end_col);
                return Err(syntax(l, c, "expected a generator declaration"));
            }
        }
    }
}

fn pos_at(toks: &[Tok], i: usize, end_line: u32, end_col: u32) -> (u32, u32) {
    toks.get(i)
        .map(|t| (t.line, t.col))
        .unwrap_or((end_line, end_col))
}

fn expect_at(
    toks: &[Tok],
    i: &mut usize,
    kind: &TokKind,
    what: &str,
    end_line: u32,
    end_col: u32,
) -> Result<(), ParseError> {
    if toks.get(*i).map(|t| &t.kind) == Some(kind) {
        *i += 1;
        Ok(())
    } else {
        let (l, c) = pos_at(toks, *i, end_line, end_col);
        Err(syntax(l, c, format!("expected {what}")))
    }
}

fn parse_rels(
    toks: &[Tok],
    mut i: usize,
    p: &mut Presentation,
    end_line: u32,
    end_col: u32,
) -> Result<usize, ParseError> {
    loop {
        // find the end of this clause: `;` or next statement keyword or EOF
        let start = i;
        while i < toks.len() && toks[i].kind != TokKind::Semi && !is_keyword(&toks[i].kind) {
            i += 1;
        }
        let clause = &toks[start..i];
        let after_semi = i < toks.len() && toks[i].kind == TokKind::Semi;
        if after_semi {
            i += 1;
        }
        if !clause.is_empty() {
            parse_relator_clause(clause, p, end_line, end_col)?;
        }
        let more = after_semi && i < toks.len() && !is_keyword(&toks[i].kind);
        if !more {
            return Ok(i);
        }
    }
}

fn parse_relator_clause(
    clause: &[Tok],
    p: &mut Presentation,
    end_line: u32,
    end_col: u32,
) -> Result<(), ParseError> {
    // split the clause at `for`, if present
    let for_at = clause.iter().position(|t| t.kind == TokKind::KwFor);
    let (word_toks, params) = match for_at {
        Some(at) => {
            let spec = &clause[at + 1..];
            let params = parse_param_spec(spec, p, end_line, end_col)?;
            (&clause[..at], params)
        }
        None => (clause, Vec::new()),
    };

    let mut cur = Cursor::new(word_toks, end_line, end_col);
    let ast = parse_product(&mut cur, &params)?;
    if !cur.done() {
        let (l, c) = cur.here();
        return Err(syntax(l, c, "unexpected trailing input in relator"));
    }
    let ctx = LowerCtx {
        families: &p.families,
        plain: &p.plain_gens,
        params: &params,
    };
    let mut letters = lower(&ast, &ctx)?;
    letters.retain(|l| !l.exponent.is_zero());

    if params.is_empty() {
        let word = SchemaWord(letters)
            .instantiate(&BTreeMap::new())
            .expect("constant indices were validated during lowering");
        // freely trivial relators carry no information; drop them
        if !word.is_empty() {
            p.relators.push(word);
        }
    } else {
        p.schemas.push(RelatorSchema {
            params,
            template: SchemaWord(letters),
        });
    }
    Ok(())
}

/// `param_spec := group ("," group)*` with
/// `group := IDENT ("," IDENT)* (">=" INT | "in" INT ".." INT)`, e.g.
/// `s >= 2`, `k, l >= 1`, or `k >= 1, l in 2..5`.
fn parse_param_spec(
    spec: &[Tok],
    p: &Presentation,
    end_line: u32,
    end_col: u32,
) -> Result<Vec<(String, ParamRange)>, ParseError> {
    let mut i = 0usize;
    let mut out: Vec<(String, ParamRange)> = Vec::new();
    loop {
        let mut names: Vec<(String, u32, u32)> = Vec::new();
        loop {
            match spec.get(i).map(|t| t.kind.clone()) {
                Some(TokKind::Ident(name)) => {
                    names.push((name, spec[i].line, spec[i].col));
                    i += 1;
                    if spec.get(i).map(|t| &t.kind) == Some(&TokKind::Comma) {
                        i += 1;
                        continue;
                    }
                    break;
                }
                _ => {
                    let (l, c) = pos_at(spec, i, end_line, end_col);
                    return Err(syntax(l, c, "expected a parameter name"));
                }
            }
        }
        let range = parse_range(spec, &mut i, end_line, end_col)?;
        for (name, l, c) in names {
            if p.plain_gens.contains(&name) || p.families.iter().any(|f| f.name == name) {
                return Err(ParseError::ParamShadowsGenerator {
                    line: l,
                    col: c,
                    name,
                });
            }
            if out.iter().any(|(n, _)| *n == name) {
                return Err(syntax(l, c, format!("duplicate parameter `{name}`")));
            }
            if out.len() == 2 {
                return Err(ParseError::TooManyParams { line: l, col: c });
            }
            out.push((name, range.clone()));
        }
        if i == spec.len() {
            return Ok(out);
        }
        expect_at(
            spec,
            &mut i,
            &TokKind::Comma,
            "`,` or end of relator",
            end_line,
            end_col,
        )?;
    }
}

fn parse_range(
    spec: &[Tok],
    i: &mut usize,
    end_line: u32,
    end_col: u32,
) -> Result<ParamRange, ParseError> {
    let read_int = |i: &mut usize| -> Result<i64, ParseError> {
        let negate = spec.get(*i).map(|t| &t.kind) == Some(&TokKind::Minus);
        if negate {
            *i += 1;
        }
        match spec.get(*i).map(|t| t.kind.clone()) {
            Some(TokKind::Int(n)) => {
                *i += 1;
                Ok(if negate { -n } else { n })
            }
            _ => {
                let (l, c) = pos_at(spec, *i, end_line, end_col);
                Err(syntax(l, c, "expected an integer bound"))
            }
        }
    };
    match spec.get(*i).map(|t| t.kind.clone()) {
        Some(TokKind::Ge) => {
            *i += 1;
            Ok(ParamRange::at_least(read_int(i)?))
        }
        Some(TokKind::KwIn) => {
            *i += 1;
            let lo = read_int(i)?;
            expect_at(spec, i, &TokKind::DotDot, "`..`", end_line, end_col)?;
            let hi = read_int(i)?;
            if lo > hi {
                let (l, c) = pos_at(spec, i.saturating_sub(1), end_line, end_col);
                return Err(syntax(l, c, format!("empty range {lo}..{hi}")));
            }
            Ok(ParamRange::between(lo, hi))
        }
        _ => {
            let (l, c) = pos_at(spec, *i, end_line, end_col);
            Err(syntax(l, c, "expected `>=` or `in` after parameter names"))
        }
    }
}
