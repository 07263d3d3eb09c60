//! Group presentations: generator families, concrete relators, and 1–2
//! parameter relator schemas with bounded or unbounded integer ranges.
//!
//! The text format is a small line-oriented DSL (see [`parse`]); output is
//! available in canonical DSL form and as GAP-compatible source.

mod parse;

pub use parse::{parse, ParseError};

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::word::{Gen, Letter, Sign, Word};

/// Integer-affine expression `c0 + c1*p + c2*q` over at most two schema
/// parameters. Zero coefficients are never stored, so structural equality is
/// semantic equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct AffineExpr {
    constant: i64,
    terms: BTreeMap<String, i64>,
}

impl AffineExpr {
    pub fn constant(c: i64) -> Self {
        AffineExpr {
            constant: c,
            terms: BTreeMap::new(),
        }
    }

    pub fn param(name: impl Into<String>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(name.into(), 1);
        AffineExpr { constant: 0, terms }
    }

    pub fn add(&self, other: &AffineExpr) -> AffineExpr {
        let mut out = self.clone();
        out.constant += other.constant;
        for (p, c) in &other.terms {
            let e = out.terms.entry(p.clone()).or_insert(0);
            *e += c;
            if *e == 0 {
                out.terms.remove(p);
            }
        }
        out
    }

    pub fn neg(&self) -> AffineExpr {
        self.scale(-1)
    }

    pub fn sub(&self, other: &AffineExpr) -> AffineExpr {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> AffineExpr {
        if k == 0 {
            return AffineExpr::constant(0);
        }
        AffineExpr {
            constant: self.constant * k,
            terms: self.terms.iter().map(|(p, c)| (p.clone(), c * k)).collect(),
        }
    }

    /// Product of two affine expressions; defined only when at least one side
    /// is constant (the result must stay affine).
    pub fn mul(&self, other: &AffineExpr) -> Option<AffineExpr> {
        if let Some(c) = self.as_constant() {
            Some(other.scale(c))
        } else {
            other.as_constant().map(|c| self.scale(c))
        }
    }

    pub fn as_constant(&self) -> Option<i64> {
        self.terms.is_empty().then_some(self.constant)
    }

    pub fn is_zero(&self) -> bool {
        self.as_constant() == Some(0)
    }

    pub fn params(&self) -> impl Iterator<Item = &str> {
        self.terms.keys().map(String::as_str)
    }

    pub fn eval(&self, env: &BTreeMap<String, i64>) -> i64 {
        self.constant
            + self
                .terms
                .iter()
                .map(|(p, c)| c * env.get(p).copied().unwrap_or(0))
                .sum::<i64>()
    }

    /// Minimum and maximum over the box described by `ranges`; `None` bounds
    /// mean minus/plus infinity. Parameters missing from `ranges` are treated
    /// as unconstrained above their absence (coefficient on unknown parameter
    /// makes both sides unbounded).
    pub fn bounds_over(&self, ranges: &[(String, ParamRange)]) -> (Option<i64>, Option<i64>) {
        let mut lo = Some(self.constant);
        let mut hi = Some(self.constant);
        for (p, c) in &self.terms {
            let range = ranges.iter().find(|(name, _)| name == p).map(|(_, r)| r);
            let (term_lo, term_hi) = match range {
                Some(r) => {
                    if *c >= 0 {
                        (Some(c * r.lo), r.hi.map(|h| c * h))
                    } else {
                        (r.hi.map(|h| c * h), Some(c * r.lo))
                    }
                }
                None => (None, None),
            };
            lo = match (lo, term_lo) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            };
            hi = match (hi, term_hi) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            };
        }
        (lo, hi)
    }

    /// Sign classification of the expression over the given parameter box.
    pub fn sign_over(&self, ranges: &[(String, ParamRange)]) -> SignClass {
        let (lo, hi) = self.bounds_over(ranges);
        match (lo, hi) {
            (Some(0), Some(0)) => SignClass::Zero,
            (Some(l), _) if l > 0 => SignClass::Positive,
            (_, Some(h)) if h < 0 => SignClass::Negative,
            _ => SignClass::Indefinite,
        }
    }
}

impl fmt::Display for AffineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, c) in &self.terms {
            if first {
                match *c {
                    1 => write!(f, "{p}")?,
                    -1 => write!(f, "-{p}")?,
                    c => write!(f, "{c}*{p}")?,
                }
                first = false;
            } else if *c > 0 {
                if *c == 1 {
                    write!(f, "+{p}")?;
                } else {
                    write!(f, "+{c}*{p}")?;
                }
            } else if *c == -1 {
                write!(f, "-{p}")?;
            } else {
                write!(f, "{c}*{p}")?;
            }
        }
        if first {
            write!(f, "{}", self.constant)?;
        } else if self.constant > 0 {
            write!(f, "+{}", self.constant)?;
        } else if self.constant < 0 {
            write!(f, "{}", self.constant)?;
        }
        Ok(())
    }
}

/// Sign of an affine expression over a parameter box.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SignClass {
    Positive,
    Negative,
    Zero,
    Indefinite,
}

/// Closed integer range for one schema parameter; `hi = None` means
/// unbounded above.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParamRange {
    pub lo: i64,
    pub hi: Option<i64>,
}

impl ParamRange {
    pub fn at_least(lo: i64) -> Self {
        ParamRange { lo, hi: None }
    }

    pub fn between(lo: i64, hi: i64) -> Self {
        ParamRange { lo, hi: Some(hi) }
    }
}

/// One run of a schema word: a generator name, an optional affine index (for
/// members of an indexed family), and an affine exponent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SchemaLetter {
    pub name: String,
    pub index: Option<AffineExpr>,
    pub exponent: AffineExpr,
}

impl SchemaLetter {
    pub fn plain(name: impl Into<String>, exponent: AffineExpr) -> Self {
        SchemaLetter {
            name: name.into(),
            index: None,
            exponent,
        }
    }

    pub fn indexed(name: impl Into<String>, index: AffineExpr, exponent: AffineExpr) -> Self {
        SchemaLetter {
            name: name.into(),
            index: Some(index),
            exponent,
        }
    }
}

impl fmt::Display for SchemaLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.index {
            Some(idx) => write!(f, "{}[{}]", self.name, idx)?,
            None => write!(f, "{}", self.name)?,
        }
        if self.exponent.as_constant() != Some(1) {
            if exponent_needs_parens(&self.exponent) {
                write!(f, "^({})", self.exponent)?;
            } else {
                write!(f, "^{}", self.exponent)?;
            }
        }
        Ok(())
    }
}

fn exponent_needs_parens(e: &AffineExpr) -> bool {
    // bare forms: integer constant, or a single parameter with coefficient +-1
    match e.as_constant() {
        Some(_) => false,
        None => {
            e.constant != 0
                || e.terms.len() != 1
                || !matches!(e.terms.values().next(), Some(1) | Some(-1))
        }
    }
}

/// Parametric word template: a sequence of schema letters.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SchemaWord(pub Vec<SchemaLetter>);

impl SchemaWord {
    pub fn letters(&self) -> &[SchemaLetter] {
        &self.0
    }

    /// Evaluates the template at a parameter assignment, producing a freely
    /// reduced word. Indices must come out non-negative.
    pub fn instantiate(&self, env: &BTreeMap<String, i64>) -> Result<Word, InstantiateError> {
        let mut letters: Vec<Letter> = Vec::new();
        for sl in &self.0 {
            let gen = match &sl.index {
                Some(idx) => {
                    let v = idx.eval(env);
                    let v = u32::try_from(v).map_err(|_| InstantiateError::NegativeIndex {
                        name: sl.name.clone(),
                        value: v,
                    })?;
                    Gen::indexed(&sl.name, v)
                }
                None => Gen::plain(&sl.name),
            };
            let e = sl.exponent.eval(env);
            let sign = if e >= 0 { Sign::Plus } else { Sign::Minus };
            for _ in 0..e.unsigned_abs() {
                letters.push(Letter::new(gen.clone(), sign));
            }
        }
        Ok(Word::reduce(letters))
    }
}

impl fmt::Display for SchemaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, sl) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{sl}")?;
        }
        Ok(())
    }
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum InstantiateError {
    #[error("index of family {name} evaluates to {value}, which is negative")]
    NegativeIndex { name: String, value: i64 },
}

/// A relator family: template plus ordered parameter ranges (at most two
/// parameters).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelatorSchema {
    pub params: Vec<(String, ParamRange)>,
    pub template: SchemaWord,
}

impl fmt::Display for RelatorSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} for ", self.template)?;
        // shared-range groups print compactly: `k, l >= 1`
        let all_same = self.params.len() > 1 && self.params.windows(2).all(|w| w[0].1 == w[1].1);
        if all_same {
            let names: Vec<&str> = self.params.iter().map(|(n, _)| n.as_str()).collect();
            write!(f, "{}", names.join(", "))?;
            write_range(f, &self.params[0].1)
        } else {
            for (i, (name, range)) in self.params.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{name}")?;
                write_range(f, range)?;
            }
            Ok(())
        }
    }
}

fn write_range(f: &mut fmt::Formatter<'_>, r: &ParamRange) -> fmt::Result {
    match r.hi {
        Some(hi) => write!(f, " in {}..{}", r.lo, hi),
        None => write!(f, " >= {}", r.lo),
    }
}

/// Declaration of an indexed generator family `name[i] for i >= min_index`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FamilyDecl {
    pub name: String,
    pub min_index: u32,
}

/// A group presentation: declared generators (plain and/or indexed
/// families), concrete relators, relator schemas, and the torsion-free
/// assertion flag.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Presentation {
    pub families: Vec<FamilyDecl>,
    pub plain_gens: Vec<String>,
    pub relators: Vec<Word>,
    pub schemas: Vec<RelatorSchema>,
    pub torsion_free_asserted: bool,
}

/// Output of [`Presentation::instantiate`]: the schema-free presentation and
/// the number of freely trivial instances that were dropped.
#[derive(Clone, Debug)]
pub struct Instantiation {
    pub presentation: Presentation,
    pub dropped_trivial: usize,
}

/// Text output formats.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Dsl,
    Gap,
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum SerializeError {
    #[error("GAP output requires an instantiated presentation, but {0} schema(s) are present")]
    SchemasPresent(usize),
    #[error("GAP generator names collide after index mangling: {0}")]
    NameClash(String),
}

impl Presentation {
    /// Presentation over the two plain generators `x, y` with the given
    /// relators; the shape of every embedding target.
    pub fn over_xy(relators: Vec<Word>) -> Presentation {
        Presentation {
            families: Vec::new(),
            plain_gens: vec!["x".into(), "y".into()],
            relators,
            schemas: Vec::new(),
            torsion_free_asserted: false,
        }
    }

    pub fn family(&self, name: &str) -> Option<&FamilyDecl> {
        self.families.iter().find(|f| f.name == name)
    }

    /// Expands every schema into concrete relators. Parameters with an
    /// unbounded range run from their lower bound up to `bound`; bounded
    /// ranges expand in full. Freely trivial instances are dropped and
    /// counted. Expansion order is schema order, then lexicographic in the
    /// declared parameter order, so relator lists grow monotonically with
    /// `bound`.
    pub fn instantiate(&self, bound: i64) -> Instantiation {
        let mut relators = self.relators.clone();
        let mut dropped = 0usize;
        for schema in &self.schemas {
            let caps: Vec<(i64, i64)> = schema
                .params
                .iter()
                .map(|(_, r)| (r.lo, r.hi.unwrap_or(bound)))
                .collect();
            let mut envs: Vec<BTreeMap<String, i64>> = vec![BTreeMap::new()];
            for ((name, _), (lo, hi)) in schema.params.iter().zip(&caps) {
                let mut next = Vec::new();
                for env in &envs {
                    for v in *lo..=*hi {
                        let mut e = env.clone();
                        e.insert(name.clone(), v);
                        next.push(e);
                    }
                }
                envs = next;
            }
            for env in &envs {
                // ranges were validated at construction, so indices are
                // non-negative here
                let w = schema
                    .template
                    .instantiate(env)
                    .expect("validated schema produced a negative index");
                if w.is_empty() {
                    dropped += 1;
                } else {
                    relators.push(w);
                }
            }
        }
        Instantiation {
            presentation: Presentation {
                families: self.families.clone(),
                plain_gens: self.plain_gens.clone(),
                relators,
                schemas: Vec::new(),
                torsion_free_asserted: self.torsion_free_asserted,
            },
            dropped_trivial: dropped,
        }
    }

    /// Canonical text output. DSL output round-trips through [`parse`]; GAP
    /// output requires a schema-free presentation.
    pub fn serialize(&self, format: Format) -> Result<String, SerializeError> {
        match format {
            Format::Dsl => Ok(self.to_dsl()),
            Format::Gap => self.to_gap(),
        }
    }

    fn to_dsl(&self) -> String {
        let mut out = String::new();
        out.push_str("gens ");
        let mut decls: Vec<String> = Vec::new();
        for f in &self.families {
            decls.push(format!("{}[i] for i >= {}", f.name, f.min_index));
        }
        for g in &self.plain_gens {
            decls.push(g.clone());
        }
        out.push_str(&decls.join(", "));
        out.push_str(";\n");
        for r in &self.relators {
            out.push_str(&format!("rels {r};\n"));
        }
        for s in &self.schemas {
            out.push_str(&format!("rels {s};\n"));
        }
        if self.torsion_free_asserted {
            out.push_str("torsion_free;\n");
        }
        out
    }

    fn to_gap(&self) -> Result<String, SerializeError> {
        if !self.schemas.is_empty() {
            return Err(SerializeError::SchemasPresent(self.schemas.len()));
        }
        // collect generator names in declaration order; indexed generators
        // are mangled `a[3]` -> `a3`
        let mut names: Vec<String> = Vec::new();
        let mut used: Vec<Gen> = Vec::new();
        for r in &self.relators {
            for g in r.generators() {
                if !used.contains(&g) {
                    used.push(g);
                }
            }
        }
        used.sort();
        for g in &self.plain_gens {
            names.push(g.clone());
        }
        for g in &used {
            if g.index().is_some() {
                names.push(gap_name(g));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for n in &names {
            if !seen.insert(n.clone()) {
                return Err(SerializeError::NameClash(n.clone()));
            }
        }
        let quoted: Vec<String> = names.iter().map(|n| format!("\"{n}\"")).collect();
        let mut out = String::new();
        out.push_str(&format!("F := FreeGroup({});\n", quoted.join(",")));
        out.push_str("AssignGeneratorVariables(F);\n");
        if self.relators.is_empty() {
            out.push_str("rels := [];\n");
        } else {
            out.push_str("rels := [\n");
            for (i, r) in self.relators.iter().enumerate() {
                let sep = if i + 1 == self.relators.len() {
                    ""
                } else {
                    ","
                };
                out.push_str(&format!("  {}{sep}\n", gap_word(r)));
            }
            out.push_str("];\n");
        }
        out.push_str("G := F / rels;\n");
        Ok(out)
    }
}

fn gap_name(g: &Gen) -> String {
    match g.index() {
        Some(i) => format!("{}{}", g.name(), i),
        None => g.name().to_string(),
    }
}

fn gap_word(w: &Word) -> String {
    if w.is_empty() {
        return "One(F)".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    let letters = w.letters();
    let mut i = 0;
    while i < letters.len() {
        let l = &letters[i];
        let mut count: i64 = 1;
        while i + (count as usize) < letters.len() && letters[i + count as usize] == *l {
            count += 1;
        }
        let exp = match l.sign {
            Sign::Plus => count,
            Sign::Minus => -count,
        };
        if exp == 1 {
            parts.push(gap_name(&l.gen));
        } else {
            parts.push(format!("{}^{}", gap_name(&l.gen), exp));
        }
        i += count as usize;
    }
    parts.join("*")
}
