//! Free-group word arithmetic over arbitrary generator alphabets.
//!
//! A [`Word`] is a freely reduced sequence of signed generator letters; it is
//! impossible to construct an unreduced `Word` through this API, so structural
//! equality of `Word`s is exactly equality in the free group. The empty word
//! is the identity.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A generator symbol: a name plus an optional non-negative index, so `a[3]`
/// is `("a", Some(3))` and `x` is `("x", None)`. The pair is the identity of
/// the generator; comparison is structural. The name is shared, so letters
/// clone without allocating.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Gen {
    name: Arc<str>,
    index: Option<u32>,
}

impl Gen {
    pub fn plain(name: impl AsRef<str>) -> Self {
        Gen {
            name: Arc::from(name.as_ref()),
            index: None,
        }
    }

    pub fn indexed(name: impl AsRef<str>, index: u32) -> Self {
        Gen {
            name: Arc::from(name.as_ref()),
            index: Some(index),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn index(&self) -> Option<u32> {
        self.index
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{}[{}]", self.name, i),
            None => write!(f, "{}", self.name),
        }
    }
}

/// Sign of a letter: a generator or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// One signed letter of a word.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    pub gen: Gen,
    pub sign: Sign,
}

impl Letter {
    pub fn new(gen: Gen, sign: Sign) -> Self {
        Letter { gen, sign }
    }

    pub fn pos(gen: Gen) -> Self {
        Letter::new(gen, Sign::Plus)
    }

    pub fn neg(gen: Gen) -> Self {
        Letter::new(gen, Sign::Minus)
    }

    pub fn inverse(&self) -> Letter {
        Letter {
            gen: self.gen.clone(),
            sign: self.sign.flip(),
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.gen == other.gen && self.sign != other.sign
    }
}

/// A freely reduced word. The only constructors reduce their input, so the
/// no-adjacent-cancellation invariant always holds.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    /// The empty word (group identity).
    pub fn empty() -> Word {
        Word {
            letters: Vec::new(),
        }
    }

    /// Freely reduces a raw letter sequence. Idempotent; the result is the
    /// unique reduced form and never longer than the input.
    pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            push_reduced(&mut out, l);
        }
        Word { letters: out }
    }

    /// Single-letter word for a generator.
    pub fn from_gen(gen: Gen) -> Word {
        Word {
            letters: vec![Letter::pos(gen)],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Reduced product `self * rhs`.
    pub fn mul(&self, rhs: &Word) -> Word {
        let mut out = self.letters.clone();
        for l in &rhs.letters {
            push_reduced(&mut out, l.clone());
        }
        Word { letters: out }
    }

    /// Inverse word: reversed letters with flipped signs. A reduced word's
    /// inverse is already reduced.
    pub fn inv(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    /// Conjugate `self^h = h^-1 * self * h`.
    pub fn conj(&self, h: &Word) -> Word {
        h.inv().mul(self).mul(h)
    }

    /// Commutator `[self, other] = self^-1 * other^-1 * self * other`.
    pub fn comm(&self, other: &Word) -> Word {
        self.inv().mul(&other.inv()).mul(self).mul(other)
    }

    /// Integer power; negative exponents invert, `pow(_, 0)` is empty.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inv() } else { self.clone() };
        let count = n.unsigned_abs() as usize;
        let mut letters = Vec::with_capacity(base.len() * count);
        for _ in 0..count {
            letters.extend(base.letters().iter().cloned());
        }
        Word::reduce(letters)
    }

    /// Strips matching inverse letters from the two ends until the word is
    /// cyclically reduced (first letter is not the inverse of the last).
    pub fn cyclically_reduced(&self) -> Word {
        let mut letters = self.letters.as_slice();
        while letters.len() >= 2 && letters[0].cancels(&letters[letters.len() - 1]) {
            letters = &letters[1..letters.len() - 1];
        }
        Word {
            letters: letters.to_vec(),
        }
    }

    /// Set of generators occurring in the word.
    pub fn generators(&self) -> BTreeSet<Gen> {
        self.letters.iter().map(|l| l.gen.clone()).collect()
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last().is_some_and(|t| t.cancels(&l)) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word::reduce(iter)
    }
}

impl fmt::Display for Word {
    /// Canonical print: maximal runs as `g^k`, `*`-separated; the empty word
    /// prints as `1`. Round-trips through the presentation DSL parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = &self.letters[i];
            let mut count: i64 = 1;
            while i + (count as usize) < self.letters.len()
                && self.letters[i + count as usize] == *l
            {
                count += 1;
            }
            let exp = match l.sign {
                Sign::Plus => count,
                Sign::Minus => -count,
            };
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if exp == 1 {
                write!(f, "{}", l.gen)?;
            } else {
                write!(f, "{}^{}", l.gen, exp)?;
            }
            i += count as usize;
        }
        Ok(())
    }
}

/// What a substitution does with a generator it has no image for.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum UnmappedPolicy {
    /// Applying the substitution to a word containing an unmapped generator
    /// is an error.
    Error,
    /// Unmapped generators are sent to themselves.
    Identity,
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
#[error("generator {0} has no image under the substitution")]
pub struct UnmappedGen(pub Gen);

/// A finite partial map from generators to words, applied as a homomorphism:
/// the result of [`Substitution::apply`] is always reduced, and application
/// respects products and inverses.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Substitution {
    map: BTreeMap<Gen, Word>,
    policy: UnmappedPolicy,
}

impl Substitution {
    pub fn new(policy: UnmappedPolicy) -> Self {
        Substitution {
            map: BTreeMap::new(),
            policy,
        }
    }

    pub fn insert(&mut self, gen: Gen, image: Word) {
        self.map.insert(gen, image);
    }

    pub fn with(mut self, gen: Gen, image: Word) -> Self {
        self.insert(gen, image);
        self
    }

    pub fn get(&self, gen: &Gen) -> Option<&Word> {
        self.map.get(gen)
    }

    pub fn policy(&self) -> UnmappedPolicy {
        self.policy
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Gen, &Word)> {
        self.map.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Homomorphic image of `w`, reduced.
    pub fn apply(&self, w: &Word) -> Result<Word, UnmappedGen> {
        let mut out: Vec<Letter> = Vec::new();
        for l in w.letters() {
            match self.map.get(&l.gen) {
                Some(image) => match l.sign {
                    Sign::Plus => {
                        for il in image.letters() {
                            push_reduced(&mut out, il.clone());
                        }
                    }
                    Sign::Minus => {
                        for il in image.letters().iter().rev() {
                            push_reduced(&mut out, il.inverse());
                        }
                    }
                },
                None => match self.policy {
                    UnmappedPolicy::Identity => push_reduced(&mut out, l.clone()),
                    UnmappedPolicy::Error => return Err(UnmappedGen(l.gen.clone())),
                },
            }
        }
        Ok(Word { letters: out })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x() -> Word {
        Word::from_gen(Gen::plain("x"))
    }

    fn y() -> Word {
        Word::from_gen(Gen::plain("y"))
    }

    fn raw(spec: &[(&str, i32)]) -> Vec<Letter> {
        spec.iter()
            .map(|&(n, s)| Letter::new(Gen::plain(n), if s > 0 { Sign::Plus } else { Sign::Minus }))
            .collect()
    }

    /// The 14-letter expanded form of the first universal generator word,
    /// computed once by hand from its conjugate expression.
    fn a1_letters() -> Vec<Letter> {
        raw(&[
            ("x", 1),
            ("y", -1),
            ("x", -1),
            ("y", -1),
            ("x", -1),
            ("y", 1),
            ("x", 1),
            ("y", 1),
            ("x", 1),
            ("y", 1),
            ("x", -1),
            ("x", -1),
            ("y", -1),
            ("x", 1),
        ])
    }

    #[test]
    fn reduce_cancels_adjacent_pair() {
        let w = Word::reduce(raw(&[("x", 1), ("y", 1), ("y", -1), ("x", 1)]));
        assert_eq!(w, x().mul(&x()));
        assert_eq!(w.len(), 2);
    }

    #[test]
    fn reduce_empty_is_identity() {
        assert!(Word::reduce(Vec::new()).is_empty());
    }

    #[test]
    fn reduce_conjugate_expansion_of_first_universal_word() {
        // Raw concatenation of h^-1, y, h, x^-1, y^-1, x with h = x y x y x^-1:
        // the unreduced letter stream happens to be reduced already and must
        // equal the frozen 14-letter expansion.
        let h = x().mul(&y()).mul(&x()).mul(&y()).mul(&x().inv());
        let mut stream: Vec<Letter> = Vec::new();
        stream.extend(h.inv().letters().iter().cloned());
        stream.extend(y().letters().iter().cloned());
        stream.extend(h.letters().iter().cloned());
        stream.extend(x().inv().letters().iter().cloned());
        stream.extend(y().inv().letters().iter().cloned());
        stream.extend(x().letters().iter().cloned());
        let reduced = Word::reduce(stream);
        assert_eq!(reduced.letters(), a1_letters().as_slice());
        assert_eq!(reduced.len(), 14);
    }

    #[test]
    fn mul_inverse_pair_cancels() {
        assert!(x().mul(&x().inv()).is_empty());
    }

    #[test]
    fn mul_cancels_across_boundary() {
        let z = Word::from_gen(Gen::plain("z"));
        let lhs = x().mul(&y());
        let rhs = y().inv().mul(&z);
        assert_eq!(lhs.mul(&rhs), x().mul(&z));
    }

    #[test]
    fn mul_word_with_own_inverse() {
        let a = y().conj(&x()); // x^-1 y x
        assert!(a.mul(&a.inv()).is_empty());
    }

    #[test]
    fn inv_reverses_and_negates() {
        let w = x().mul(&y().inv());
        assert_eq!(w.inv(), y().mul(&x().inv()));
        assert!(Word::empty().inv().is_empty());
    }

    #[test]
    fn inv_of_expanded_universal_word() {
        let w = Word::reduce(a1_letters());
        let expected: Vec<Letter> = a1_letters().iter().rev().map(Letter::inverse).collect();
        assert_eq!(w.inv().letters(), expected.as_slice());
    }

    #[test]
    fn conj_matches_convention() {
        // u^h = h^-1 u h
        assert_eq!(y().conj(&x()), x().inv().mul(&y()).mul(&x()));
        assert_eq!(y().conj(&x().inv()), x().mul(&y()).mul(&x().inv()));
        assert_eq!(y().conj(&Word::empty()), y());
    }

    #[test]
    fn comm_definition_and_self_commutator() {
        assert_eq!(
            x().comm(&y()),
            x().inv().mul(&y().inv()).mul(&x()).mul(&y())
        );
        assert!(x().comm(&x()).is_empty());
    }

    #[test]
    fn pow_small_cases() {
        let xy = x().mul(&y());
        assert_eq!(xy.pow(2), xy.mul(&xy));
        assert_eq!(x().pow(-3), x().inv().mul(&x().inv()).mul(&x().inv()));
        assert!(x().pow(0).is_empty());
    }

    #[test]
    fn substitute_formal_commutator() {
        let a = Gen::plain("a");
        let b = Gen::plain("b");
        let w = Word::from_gen(a.clone()).comm(&Word::from_gen(b.clone()));
        let s = Substitution::new(UnmappedPolicy::Error)
            .with(a, x())
            .with(b, y());
        assert_eq!(s.apply(&w).unwrap(), x().comm(&y()));
    }

    #[test]
    fn substitute_square_gives_prufer_first_relator() {
        // a[1]^2 under a[1] -> a_1(x,y) is the first relator of the embedded
        // 2-quasicyclic group: (y^((x*y)^2*x^-1) * y^-x)^2, reduced.
        let a1 = Gen::indexed("a", 1);
        let image = Word::reduce(a1_letters());
        let w = Word::from_gen(a1.clone()).pow(2);
        let s = Substitution::new(UnmappedPolicy::Error).with(a1, image.clone());
        let expected = image.pow(2);
        assert_eq!(s.apply(&w).unwrap(), expected);
        // the square only cancels nothing: lengths add
        assert_eq!(expected.len(), 28);
    }

    #[test]
    fn substitute_empty_word() {
        let s = Substitution::new(UnmappedPolicy::Error).with(Gen::plain("a"), x());
        assert!(s.apply(&Word::empty()).unwrap().is_empty());
    }

    #[test]
    fn substitute_unmapped_policies() {
        let w = x().mul(&y());
        let s = Substitution::new(UnmappedPolicy::Error).with(Gen::plain("x"), y());
        assert_eq!(s.apply(&w), Err(UnmappedGen(Gen::plain("y"))));
        let s = Substitution::new(UnmappedPolicy::Identity).with(Gen::plain("x"), y());
        assert_eq!(s.apply(&w).unwrap(), y().mul(&y()));
    }

    #[test]
    fn cyclic_reduction_strips_conjugating_shell() {
        // x y z y^-1 x^-1 cyclically reduces to z
        let z = Word::from_gen(Gen::plain("z"));
        let w = z.conj(&y().inv().mul(&x().inv()));
        assert_eq!(w.cyclically_reduced(), z);
    }

    #[test]
    fn display_runs_and_identity() {
        let w = x()
            .mul(&y())
            .mul(&y())
            .mul(&x().inv())
            .mul(&x().inv())
            .mul(&y().inv());
        assert_eq!(w.to_string(), "x*y^2*x^-2*y^-1");
        assert_eq!(Word::empty().to_string(), "1");
        assert_eq!(Word::from_gen(Gen::indexed("a", 3)).to_string(), "a[3]");
    }

    // --- randomized property tests ---

    fn arb_gen() -> impl Strategy<Value = Gen> {
        prop_oneof![
            prop_oneof![Just("x"), Just("y"), Just("z")].prop_map(Gen::plain),
            (prop_oneof![Just("a"), Just("b")], 1u32..4).prop_map(|(n, i)| Gen::indexed(n, i)),
        ]
    }

    fn arb_letters(max: usize) -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec(
            (arb_gen(), prop::bool::ANY)
                .prop_map(|(g, s)| Letter::new(g, if s { Sign::Plus } else { Sign::Minus })),
            0..max,
        )
    }

    fn arb_word(max: usize) -> impl Strategy<Value = Word> {
        arb_letters(max).prop_map(Word::reduce)
    }

    proptest! {
        #[test]
        fn reduction_idempotent_and_bounded(raw in arb_letters(24)) {
            let r = Word::reduce(raw.clone());
            prop_assert_eq!(Word::reduce(r.letters().to_vec()), r.clone());
            prop_assert!(r.len() <= raw.len());
            prop_assert_eq!(r.len() % 2, raw.len() % 2);
        }

        #[test]
        fn substitution_is_homomorphic(u in arb_word(12), v in arb_word(12), img in arb_word(6)) {
            let s = Substitution::new(UnmappedPolicy::Identity)
                .with(Gen::plain("x"), img)
                .with(Gen::plain("y"), Word::from_gen(Gen::plain("z")).inv());
            let lhs = s.apply(&u.mul(&v)).unwrap();
            let rhs = s.apply(&u).unwrap().mul(&s.apply(&v).unwrap());
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(s.apply(&u.inv()).unwrap(), s.apply(&u).unwrap().inv());
        }

        #[test]
        fn conjugation_round_trips(u in arb_word(12), h in arb_word(8)) {
            prop_assert_eq!(u.conj(&h).conj(&h.inv()), u);
        }

        #[test]
        fn pow_is_additive(u in arb_word(8), m in -5i64..=5, n in -5i64..=5) {
            prop_assert_eq!(u.pow(m + n), u.pow(m).mul(&u.pow(n)));
        }
    }
}
