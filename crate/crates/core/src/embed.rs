//! Generator words over `{x, y}` and the two-generator embedding transform.
//!
//! Every countable group presented on a single generator family `a[1], a[2],
//! ...` embeds into a group on two generators `x, y`: each `a[i]` is sent to
//! a fixed word `a_i(x, y)`, and every relator is rewritten through that
//! substitution. Torsion-free groups admit a shorter family of generator
//! words; using it is only sound when the caller asserts torsion-freeness,
//! which this module never infers.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::presentation::{
    AffineExpr, ParamRange, Presentation, RelatorSchema, SchemaLetter, SchemaWord, SignClass,
};
use crate::word::{Gen, Substitution, UnmappedPolicy, Word};

/// Which generator-word family the transform uses.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EmbedMode {
    /// Works for every input group.
    General,
    /// Shorter words, valid only for torsion-free groups; requires the
    /// presentation's `torsion_free` assertion.
    TorsionFree,
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum EmbedError {
    #[error("generator word index must be at least 1 (got {0})")]
    IndexBelowOne(u32),
    #[error(
        "presentation still contains {0} relator schema(s); instantiate first or use embed_schema"
    )]
    SchemasPresent(usize),
    #[error("embedding requires exactly one indexed generator family (found {families} families and {plain} plain generators)")]
    GeneratorShape { families: usize, plain: usize },
    #[error("family `{0}` is declared from index {1}; embedding needs indices >= 1")]
    FamilyIndexBelowOne(String, u32),
    #[error("relator uses {0}, which is not a member of the declared family")]
    ForeignGenerator(Gen),
    #[error("torsion-free mode requires the presentation to carry the torsion_free assertion")]
    TorsionFreeNotAsserted,
    #[error("schema exponent `{0}` does not have constant sign over the declared parameter range")]
    SignIndefiniteExponent(String),
    #[error("schema exponent `{0}` is parameter-dependent; general-mode images support only constant exponents")]
    ParametricExponentInGeneralMode(String),
}

fn x() -> Word {
    Word::from_gen(Gen::plain("x"))
}

fn y() -> Word {
    Word::from_gen(Gen::plain("y"))
}

/// `(x*y^i)^2*x^-1`, the conjugator shared by both generator-word families.
fn conjugator(i: u32) -> Word {
    x().mul(&y().pow(i64::from(i))).pow(2).mul(&x().inv())
}

/// The general generator word `a_i(x,y) = y^((x*y^i)^2*x^-1) * y^-x`,
/// freely reduced; its length is `4i + 10`.
pub fn universal_word(i: u32) -> Result<Word, EmbedError> {
    let tf = universal_word_tf(i)?;
    Ok(tf.mul(&y().conj(&x()).inv()))
}

/// The torsion-free generator word `y^((x*y^i)^2*x^-1)`, freely reduced; its
/// length is `4i + 7`. Equals `universal_word(i) * y^x`.
pub fn universal_word_tf(i: u32) -> Result<Word, EmbedError> {
    if i < 1 {
        return Err(EmbedError::IndexBelowOne(i));
    }
    Ok(y().conj(&conjugator(i)))
}

/// The passage word `t_i = y^i*x*y^i*x^-1` of length `2i + 2`.
pub fn passage_word(i: u32) -> Result<Word, EmbedError> {
    if i < 1 {
        return Err(EmbedError::IndexBelowOne(i));
    }
    let yi = y().pow(i64::from(i));
    Ok(yi.mul(&x()).mul(&yi).mul(&x().inv()))
}

/// The classical HNN-embedding generator word `e_i` over `{a, b}`, of
/// length `4i + 12`; kept for length comparison against [`universal_word`],
/// which is two letters shorter at every index.
pub fn hnn_word(i: u32) -> Result<Word, EmbedError> {
    if i < 1 {
        return Err(EmbedError::IndexBelowOne(i));
    }
    let a = Word::from_gen(Gen::plain("a"));
    let b = Word::from_gen(Gen::plain("b"));
    let n = i64::from(i);
    let segments = [
        a.inv(),
        b.inv(),
        a.clone(),
        b.pow(-n),
        a.clone(),
        b.inv(),
        a.inv(),
        b.pow(n),
        a.inv(),
        b.clone(),
        a.clone(),
        b.pow(-n),
        a.clone(),
        b.clone(),
        a.inv(),
        b.pow(n),
    ];
    Ok(Word::reduce(
        segments.iter().flat_map(|w| w.letters().iter().cloned()),
    ))
}

/// Generator word for the given mode.
pub fn generator_word(i: u32, mode: EmbedMode) -> Result<Word, EmbedError> {
    match mode {
        EmbedMode::General => universal_word(i),
        EmbedMode::TorsionFree => universal_word_tf(i),
    }
}

/// A completed embedding: the target presentation over `{x, y}`, the
/// substitution sending each source generator to its image word, and
/// per-relator provenance notes.
#[derive(Clone, PartialEq, Debug)]
pub struct EmbeddingResult {
    pub target: Presentation,
    pub gamma: Substitution,
    pub mode: EmbedMode,
    /// One entry per target relator, then one per target schema.
    pub notes: Vec<String>,
}

struct SourceShape<'a> {
    family: &'a crate::presentation::FamilyDecl,
}

fn check_shape<'a>(p: &'a Presentation, mode: EmbedMode) -> Result<SourceShape<'a>, EmbedError> {
    if p.families.len() != 1 || !p.plain_gens.is_empty() {
        return Err(EmbedError::GeneratorShape {
            families: p.families.len(),
            plain: p.plain_gens.len(),
        });
    }
    let family = &p.families[0];
    if family.min_index < 1 {
        return Err(EmbedError::FamilyIndexBelowOne(
            family.name.clone(),
            family.min_index,
        ));
    }
    if mode == EmbedMode::TorsionFree && !p.torsion_free_asserted {
        return Err(EmbedError::TorsionFreeNotAsserted);
    }
    Ok(SourceShape { family })
}

fn family_indices(p: &Presentation, family: &str) -> Result<BTreeSet<u32>, EmbedError> {
    let mut out = BTreeSet::new();
    for r in &p.relators {
        for g in r.generators() {
            match g.index() {
                Some(i) if g.name() == family => {
                    out.insert(i);
                }
                _ => return Err(EmbedError::ForeignGenerator(g)),
            }
        }
    }
    Ok(out)
}

/// Transforms a schema-free presentation on one generator family into a
/// presentation over `{x, y}` by substituting the mode's generator words
/// into every relator. Relators come out substituted-and-reduced, in source
/// order, with no further cleanup.
pub fn embed(p: &Presentation, mode: EmbedMode) -> Result<EmbeddingResult, EmbedError> {
    if !p.schemas.is_empty() {
        return Err(EmbedError::SchemasPresent(p.schemas.len()));
    }
    let shape = check_shape(p, mode)?;
    let mut indices = family_indices(p, &shape.family.name)?;
    indices.insert(shape.family.min_index);

    let mut gamma = Substitution::new(UnmappedPolicy::Error);
    for &i in &indices {
        gamma.insert(
            Gen::indexed(&shape.family.name, i),
            generator_word(i, mode)?,
        );
    }

    let mut relators = Vec::with_capacity(p.relators.len());
    let mut notes = Vec::with_capacity(p.relators.len());
    for (n, r) in p.relators.iter().enumerate() {
        let image = gamma.apply(r).expect("every family index has an image");
        notes.push(format!("r{} <- {}", n + 1, r));
        relators.push(image);
    }

    Ok(EmbeddingResult {
        target: Presentation::over_xy(relators),
        gamma,
        mode,
        notes,
    })
}

/// Schema-level variant of [`embed`]: relator families are transformed into
/// relator families over `{x, y}` without instantiating them, so that
/// instantiation commutes with embedding. Refuses schemas whose exponents do
/// not have constant sign over their declared ranges.
pub fn embed_schema(p: &Presentation, mode: EmbedMode) -> Result<EmbeddingResult, EmbedError> {
    let shape = check_shape(p, mode)?;
    let mut indices = family_indices(p, &shape.family.name)?;
    indices.insert(shape.family.min_index);

    let mut gamma = Substitution::new(UnmappedPolicy::Error);
    for &i in &indices {
        gamma.insert(
            Gen::indexed(&shape.family.name, i),
            generator_word(i, mode)?,
        );
    }

    let mut relators = Vec::new();
    let mut notes = Vec::new();
    for (n, r) in p.relators.iter().enumerate() {
        let image = gamma.apply(r).expect("every family index has an image");
        notes.push(format!("r{} <- {}", n + 1, r));
        relators.push(image);
    }

    let mut schemas = Vec::new();
    for (n, schema) in p.schemas.iter().enumerate() {
        let target = embed_one_schema(schema, &shape, mode)?;
        notes.push(format!("family {} <- {}", n + 1, schema));
        schemas.push(target);
    }

    let mut target = Presentation::over_xy(relators);
    target.schemas = schemas;
    Ok(EmbeddingResult {
        target,
        gamma,
        mode,
        notes,
    })
}

fn embed_one_schema(
    schema: &RelatorSchema,
    shape: &SourceShape,
    mode: EmbedMode,
) -> Result<RelatorSchema, EmbedError> {
    let mut image: Vec<SchemaLetter> = Vec::new();
    for letter in schema.template.letters() {
        let index = match (&letter.index, letter.name == shape.family.name) {
            (Some(idx), true) => idx,
            _ => {
                return Err(EmbedError::ForeignGenerator(Gen::plain(&letter.name)));
            }
        };
        let (idx_lo, _) = index.bounds_over(&schema.params);
        if idx_lo.is_none() || idx_lo.unwrap() < 1 {
            return Err(EmbedError::IndexBelowOne(0));
        }
        match letter.exponent.sign_over(&schema.params) {
            SignClass::Zero => continue,
            SignClass::Indefinite => {
                return Err(EmbedError::SignIndefiniteExponent(
                    letter.exponent.to_string(),
                ));
            }
            SignClass::Positive | SignClass::Negative => {}
        }
        image.extend(image_letters(index, &letter.exponent, mode)?);
    }
    Ok(RelatorSchema {
        params: schema.params.clone(),
        template: SchemaWord(schema_reduce(image, &schema.params)),
    })
}

/// Image of one schema run `a[idx]^exp` as schema letters over `{x, y}`.
///
/// Torsion-free images are conjugates of `y`, so a parametric exponent just
/// moves into the conjugated power. General images are products of two
/// conjugates, which only admit constant exponents (the power is unrolled).
fn image_letters(
    idx: &AffineExpr,
    exp: &AffineExpr,
    mode: EmbedMode,
) -> Result<Vec<SchemaLetter>, EmbedError> {
    let one = AffineExpr::constant(1);
    let x1 = || SchemaLetter::plain("x", one.clone());
    let x_inv = || SchemaLetter::plain("x", AffineExpr::constant(-1));
    let y_pow = |e: AffineExpr| SchemaLetter::plain("y", e);
    match mode {
        EmbedMode::TorsionFree => Ok(vec![
            x1(),
            y_pow(idx.neg()),
            x_inv(),
            y_pow(idx.neg()),
            x_inv(),
            y_pow(exp.clone()),
            x1(),
            y_pow(idx.clone()),
            x1(),
            y_pow(idx.clone()),
            x_inv(),
        ]),
        EmbedMode::General => {
            let c = exp
                .as_constant()
                .ok_or_else(|| EmbedError::ParametricExponentInGeneralMode(exp.to_string()))?;
            let base = vec![
                x1(),
                y_pow(idx.neg()),
                x_inv(),
                y_pow(idx.neg()),
                x_inv(),
                y_pow(one.clone()),
                x1(),
                y_pow(idx.clone()),
                x1(),
                y_pow(idx.clone()),
                SchemaLetter::plain("x", AffineExpr::constant(-2)),
                y_pow(AffineExpr::constant(-1)),
                x1(),
            ];
            let block = if c < 0 {
                invert_schema_letters(base)
            } else {
                base
            };
            let mut out = Vec::new();
            for _ in 0..c.unsigned_abs() {
                out.extend(block.iter().cloned());
            }
            Ok(out)
        }
    }
}

fn invert_schema_letters(mut letters: Vec<SchemaLetter>) -> Vec<SchemaLetter> {
    letters.reverse();
    for l in &mut letters {
        l.exponent = l.exponent.neg();
    }
    letters
}

/// Conservative schema-level free reduction: adjacent runs of the same
/// letter merge only when the merged exponent is identically zero or has
/// provably constant sign over the parameter box; otherwise the runs are
/// kept side by side (instantiation re-reduces, so this is only a matter of
/// how much of the reduction is visible in the template).
fn schema_reduce(letters: Vec<SchemaLetter>, params: &[(String, ParamRange)]) -> Vec<SchemaLetter> {
    let mut out: Vec<SchemaLetter> = Vec::new();
    for mut l in letters {
        if l.exponent.is_zero() {
            continue;
        }
        loop {
            match out.last() {
                Some(top) if top.name == l.name && top.index == l.index => {
                    let sum = top.exponent.add(&l.exponent);
                    if sum.is_zero() || sum.sign_over(params) == SignClass::Zero {
                        out.pop();
                        break;
                    }
                    match sum.sign_over(params) {
                        SignClass::Positive | SignClass::Negative => {
                            out.pop();
                            l.exponent = sum;
                        }
                        _ => {
                            out.push(l);
                            break;
                        }
                    }
                }
                _ => {
                    out.push(l);
                    break;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse;
    use crate::word::{Letter, Sign};

    fn letters(spec: &[(&str, i64)]) -> Vec<Letter> {
        let mut out = Vec::new();
        for &(n, e) in spec {
            let sign = if e > 0 { Sign::Plus } else { Sign::Minus };
            for _ in 0..e.unsigned_abs() {
                out.push(Letter::new(Gen::plain(n), sign));
            }
        }
        out
    }

    /// Direct letter layout `x (y^-i x^-1)^2 y (x y^i)^2 x^-2 y^-1 x` of the
    /// general word; independent of the conjugation-based construction.
    fn direct_general(i: i64) -> Word {
        Word::reduce(letters(&[
            ("x", 1),
            ("y", -i),
            ("x", -1),
            ("y", -i),
            ("x", -1),
            ("y", 1),
            ("x", 1),
            ("y", i),
            ("x", 1),
            ("y", i),
            ("x", -2),
            ("y", -1),
            ("x", 1),
        ]))
    }

    /// Direct letter layout `x (y^-i x^-1)^2 y (x y^i)^2 x^-1` of the
    /// torsion-free word.
    fn direct_tf(i: i64) -> Word {
        Word::reduce(letters(&[
            ("x", 1),
            ("y", -i),
            ("x", -1),
            ("y", -i),
            ("x", -1),
            ("y", 1),
            ("x", 1),
            ("y", i),
            ("x", 1),
            ("y", i),
            ("x", -1),
        ]))
    }

    #[test]
    fn first_general_word_is_the_frozen_expansion() {
        let w = universal_word(1).unwrap();
        assert_eq!(w, direct_general(1));
        assert_eq!(w.len(), 14);
        assert_eq!(w.to_string(), "x*y^-1*x^-1*y^-1*x^-1*y*x*y*x*y*x^-2*y^-1*x");
    }

    #[test]
    fn second_general_word_matches_direct_layout() {
        let w = universal_word(2).unwrap();
        assert_eq!(w, direct_general(2));
        assert_eq!(w.len(), 18);
    }

    #[test]
    fn two_construction_paths_agree() {
        for i in 1..=40u32 {
            assert_eq!(universal_word(i).unwrap(), direct_general(i64::from(i)));
            assert_eq!(universal_word_tf(i).unwrap(), direct_tf(i64::from(i)));
        }
    }

    #[test]
    fn first_tf_word_is_eleven_letters() {
        let w = universal_word_tf(1).unwrap();
        assert_eq!(w, direct_tf(1));
        assert_eq!(w.len(), 11);
        assert_eq!(w.to_string(), "x*y^-1*x^-1*y^-1*x^-1*y*x*y*x*y*x^-1");
    }

    #[test]
    fn general_word_is_tf_word_times_inverse_conjugate() {
        let y_x = y().conj(&x());
        for i in 1..=50u32 {
            let general = universal_word(i).unwrap();
            let tf = universal_word_tf(i).unwrap();
            assert_eq!(general, tf.mul(&y_x.inv()));
            assert_eq!(tf, general.mul(&y_x));
        }
    }

    #[test]
    fn index_guards() {
        assert_eq!(universal_word(0), Err(EmbedError::IndexBelowOne(0)));
        assert_eq!(universal_word_tf(0), Err(EmbedError::IndexBelowOne(0)));
        assert_eq!(passage_word(0), Err(EmbedError::IndexBelowOne(0)));
        assert_eq!(hnn_word(0), Err(EmbedError::IndexBelowOne(0)));
    }

    #[test]
    fn passage_word_layout() {
        assert_eq!(passage_word(1).unwrap().to_string(), "y*x*y*x^-1");
        assert_eq!(passage_word(3).unwrap().to_string(), "y^3*x*y^3*x^-1");
    }

    #[test]
    fn passage_word_from_substitution() {
        // y^i z^i with z -> y^(x^-1) must reduce to the passage word
        let z = Gen::plain("z");
        let s = Substitution::new(UnmappedPolicy::Identity).with(z.clone(), y().conj(&x().inv()));
        for i in 1..=20i64 {
            let formal = y().pow(i).mul(&Word::from_gen(z.clone()).pow(i));
            assert_eq!(s.apply(&formal).unwrap(), passage_word(i as u32).unwrap());
        }
    }

    #[test]
    fn hnn_word_is_sixteen_letters_at_one() {
        let w = hnn_word(1).unwrap();
        assert_eq!(w.len(), 16);
        assert_eq!(
            w.to_string(),
            "a^-1*b^-1*a*b^-1*a*b^-1*a^-1*b*a^-1*b*a*b^-1*a*b*a^-1*b"
        );
    }

    #[test]
    fn hnn_words_are_two_letters_longer() {
        for i in 1..=60u32 {
            assert_eq!(
                hnn_word(i).unwrap().len(),
                universal_word(i).unwrap().len() + 2
            );
        }
    }

    #[test]
    fn commutator_of_images_equals_image_of_commutator() {
        let u1 = universal_word(1).unwrap();
        let u2 = universal_word(2).unwrap();
        let direct = u1.comm(&u2);
        let gamma = Substitution::new(UnmappedPolicy::Error)
            .with(Gen::indexed("a", 1), u1)
            .with(Gen::indexed("a", 2), u2);
        let formal =
            Word::from_gen(Gen::indexed("a", 1)).comm(&Word::from_gen(Gen::indexed("a", 2)));
        assert_eq!(gamma.apply(&formal).unwrap(), direct);
        assert_eq!(direct.len(), 60);
    }

    #[test]
    fn power_relator_matches_displayed_rationals_form() {
        // (a_2)^2 * (a_1)^-1 in torsion-free words equals the displayed
        // (y^2)^((x y^2)^2 x^-1) * y^-((x y)^2 x^-1)
        let lhs = universal_word_tf(2)
            .unwrap()
            .pow(2)
            .mul(&universal_word_tf(1).unwrap().inv());
        let rhs = y()
            .pow(2)
            .conj(&conjugator(2))
            .mul(&y().conj(&conjugator(1)).inv());
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.len(), 23);
    }

    #[test]
    fn embeds_rationals_at_small_bound() {
        let p = parse("gens a[i] for i >= 1; rels a[s]^s * a[s-1]^-1 for s >= 2; torsion_free;")
            .unwrap();
        let inst = p.instantiate(3).presentation;
        let result = embed(&inst, EmbedMode::TorsionFree).unwrap();
        assert_eq!(result.target.relators.len(), 2);
        for (k, s) in (2u32..=3).enumerate() {
            // (y^s)^((x y^s)^2 x^-1) * y^-((x y^(s-1))^2 x^-1)
            let expected = y()
                .pow(i64::from(s))
                .conj(&conjugator(s))
                .mul(&y().conj(&conjugator(s - 1)).inv());
            assert_eq!(result.target.relators[k], expected);
        }
        assert!(result.gamma.get(&Gen::indexed("a", 1)).is_some());
        assert!(result.gamma.get(&Gen::indexed("a", 3)).is_some());
    }

    #[test]
    fn embeds_quasicyclic_two_group() {
        let p = parse("gens a[i] for i >= 1; rels a[1]^2; a[s+1]^2 * a[s]^-1 for s >= 1;").unwrap();
        let inst = p.instantiate(2).presentation;
        let result = embed(&inst, EmbedMode::General).unwrap();
        assert_eq!(result.target.relators.len(), 3);
        let a = |i: u32| universal_word(i).unwrap();
        assert_eq!(result.target.relators[0], a(1).pow(2));
        assert_eq!(result.target.relators[1], a(2).pow(2).mul(&a(1).inv()));
        assert_eq!(result.target.relators[2], a(3).pow(2).mul(&a(2).inv()));
        // the first family relator, written as displayed: (a_2)^2 y^x y^-((x y)^2 x^-1)
        let displayed = a(2)
            .pow(2)
            .mul(&y().conj(&x()))
            .mul(&y().conj(&conjugator(1)).inv());
        assert_eq!(result.target.relators[1], displayed);
    }

    #[test]
    fn embeds_free_presentation() {
        let p = parse("gens a[i] for i >= 1;").unwrap();
        let result = embed(&p, EmbedMode::General).unwrap();
        assert!(result.target.relators.is_empty());
        assert_eq!(result.gamma.iter().count(), 1);
    }

    #[test]
    fn embed_rejects_bad_shapes() {
        let with_schema = parse("gens a[i] for i >= 1; rels [a[k], a[l]] for k, l >= 1;").unwrap();
        assert_eq!(
            embed(&with_schema, EmbedMode::General),
            Err(EmbedError::SchemasPresent(1))
        );
        let plain = parse("gens x, y; rels [x, y];").unwrap();
        assert!(matches!(
            embed(&plain, EmbedMode::General),
            Err(EmbedError::GeneratorShape { .. })
        ));
        let no_assert = parse("gens a[i] for i >= 1; rels a[1]^2;").unwrap();
        assert_eq!(
            embed(&no_assert, EmbedMode::TorsionFree),
            Err(EmbedError::TorsionFreeNotAsserted)
        );
    }

    #[test]
    fn schema_embedding_of_rationals_matches_displayed_family() {
        let p = parse("gens a[i] for i >= 1; rels a[s]^s * a[s-1]^-1 for s >= 2; torsion_free;")
            .unwrap();
        let result = embed_schema(&p, EmbedMode::TorsionFree).unwrap();
        assert_eq!(result.target.schemas.len(), 1);
        let schema = &result.target.schemas[0];
        assert_eq!(
            schema.params,
            vec![("s".to_string(), ParamRange::at_least(2))]
        );
        assert_eq!(
            schema.template.to_string(),
            "x*y^-s*x^-1*y^-s*x^-1*y^s*x*y^s*x*y*x^-1*y^(-s+1)*x^-1*y^-1*x*y^(s-1)*x*y^(s-1)*x^-1"
        );
    }

    #[test]
    fn schema_embedding_of_pair_commutators() {
        let p =
            parse("gens a[i] for i >= 1; rels [a[k], a[l]] for k, l >= 1; torsion_free;").unwrap();
        let result = embed_schema(&p, EmbedMode::TorsionFree).unwrap();
        let schema = &result.target.schemas[0];
        assert_eq!(schema.params.len(), 2);
        // instantiating the target family at (k, l) must match the commutator
        // of the torsion-free generator words
        for k in 1..=3u32 {
            for l in 1..=3u32 {
                let env = [
                    ("k".to_string(), i64::from(k)),
                    ("l".to_string(), i64::from(l)),
                ]
                .into_iter()
                .collect();
                let inst = schema.template.instantiate(&env).unwrap();
                let expected = universal_word_tf(k)
                    .unwrap()
                    .comm(&universal_word_tf(l).unwrap());
                assert_eq!(inst, expected);
            }
        }
    }

    #[test]
    fn schema_embedding_commutes_with_instantiation() {
        let sources = [
            "gens a[i] for i >= 1; rels [a[k], a[l]] for k, l >= 1; torsion_free;",
            "gens a[i] for i >= 1; rels a[s]^s * a[s-1]^-1 for s >= 2; torsion_free;",
            "gens a[i] for i >= 1; rels a[1]^3; a[s+1]^3 * a[s]^-1 for s >= 1;",
        ];
        for (text, mode) in sources.iter().zip([
            EmbedMode::TorsionFree,
            EmbedMode::TorsionFree,
            EmbedMode::General,
        ]) {
            let p = parse(text).unwrap();
            for bound in 1..=4i64 {
                let schema_first = embed_schema(&p, mode).unwrap().target.instantiate(bound);
                let instantiate_first = embed(&p.instantiate(bound).presentation, mode).unwrap();
                assert_eq!(
                    schema_first.presentation.relators, instantiate_first.target.relators,
                    "mismatch for {text} at bound {bound}"
                );
            }
        }
    }

    #[test]
    fn schema_embedding_refuses_sign_indefinite_exponents() {
        let p = parse("gens a[i] for i >= 1; rels a[s]^(s-3) for s >= 1; torsion_free;").unwrap();
        assert_eq!(
            embed_schema(&p, EmbedMode::TorsionFree),
            Err(EmbedError::SignIndefiniteExponent("s-3".to_string()))
        );
    }

    #[test]
    fn schema_embedding_refuses_parametric_powers_in_general_mode() {
        let p = parse("gens a[i] for i >= 1; rels a[s]^s * a[s-1]^-1 for s >= 2;").unwrap();
        assert_eq!(
            embed_schema(&p, EmbedMode::General),
            Err(EmbedError::ParametricExponentInGeneralMode("s".to_string()))
        );
    }
}
