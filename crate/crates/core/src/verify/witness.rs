//! Finite permutation witnesses: search for an assignment of permutations to
//! the target's generators that kills every relator while keeping a queried
//! word's image non-trivial. A found witness certifies that the word is not
//! the identity in the presented group.
//!
//! The search is sound but incomplete: absence of a witness up to some
//! degree proves nothing. Assignments are enumerated exhaustively for
//! degrees up to 4 and sampled randomly (deterministically seeded) above
//! that.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use super::perm::Perm;
use crate::presentation::Presentation;
use crate::word::{Gen, Sign, Word};

/// Map from the target's generators to permutations of `{0, .., degree-1}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PermAssignment {
    pub degree: usize,
    pub images: BTreeMap<Gen, Perm>,
}

impl PermAssignment {
    /// Image of a word under the assignment; `None` if some generator has no
    /// image.
    pub fn eval(&self, w: &Word) -> Option<Perm> {
        let mut acc = Perm::identity(self.degree);
        for l in w.letters() {
            let img = self.images.get(&l.gen)?;
            acc = match l.sign {
                Sign::Plus => acc.then(img),
                Sign::Minus => acc.then(&img.inverse()),
            };
        }
        Some(acc)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum WitnessStatus {
    WitnessFound,
    Exhausted,
    Timeout,
}

#[derive(Clone, PartialEq, Debug)]
pub struct WitnessReport {
    pub status: WitnessStatus,
    pub assignment: Option<PermAssignment>,
    pub image_order: Option<u64>,
    /// Number of assignments tried.
    pub steps: u64,
}

#[derive(Clone, Debug)]
pub struct WitnessOptions {
    pub max_degree: usize,
    pub max_steps: u64,
    pub time_limit: Option<Duration>,
    pub seed: u64,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions {
            max_degree: 8,
            max_steps: 2_000_000,
            time_limit: None,
            seed: 1,
        }
    }
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum WitnessError {
    #[error("witness search requires an instantiated presentation ({0} schemas present)")]
    SchemasPresent(usize),
    #[error("word uses generator {0}, which the target does not declare")]
    UndeclaredGenerator(Gen),
}

/// Word compiled against a fixed generator ordering for fast evaluation.
struct Compiled {
    ops: Vec<(usize, bool)>, // (generator slot, inverted)
}

fn compile(w: &Word, slots: &[Gen]) -> Result<Compiled, WitnessError> {
    let mut ops = Vec::with_capacity(w.len());
    for l in w.letters() {
        let slot = slots
            .iter()
            .position(|g| *g == l.gen)
            .ok_or_else(|| WitnessError::UndeclaredGenerator(l.gen.clone()))?;
        ops.push((slot, l.sign == Sign::Minus));
    }
    Ok(Compiled { ops })
}

fn eval_compiled(c: &Compiled, perms: &[Perm], invs: &[Perm], degree: usize) -> Perm {
    let mut acc = Perm::identity(degree);
    for &(slot, inverted) in &c.ops {
        acc = acc.then(if inverted { &invs[slot] } else { &perms[slot] });
    }
    acc
}

/// Re-validates a claimed witness by direct evaluation: returns the image
/// order of `w` when every relator maps to the identity and `w` does not.
pub fn validate_witness(
    target: &Presentation,
    w: &Word,
    assignment: &PermAssignment,
) -> Option<u64> {
    for r in &target.relators {
        if !assignment.eval(r)?.is_identity() {
            return None;
        }
    }
    let image = assignment.eval(w)?;
    if image.is_identity() {
        return None;
    }
    Some(image.order())
}

/// Searches for a permutation witness that the image of `w` is non-trivial
/// in the group the target presents.
pub fn find_witness(
    target: &Presentation,
    w: &Word,
    opts: &WitnessOptions,
) -> Result<WitnessReport, WitnessError> {
    if !target.schemas.is_empty() {
        return Err(WitnessError::SchemasPresent(target.schemas.len()));
    }
    let slots: Vec<Gen> = target.plain_gens.iter().map(Gen::plain).collect();
    let rels: Vec<Compiled> = target
        .relators
        .iter()
        .map(|r| compile(r, &slots))
        .collect::<Result<_, _>>()?;
    let word = compile(w, &slots)?;

    let mut steps: u64 = 0;
    if w.is_empty() {
        // the identity element has no nontrivial image anywhere
        return Ok(WitnessReport {
            status: WitnessStatus::Exhausted,
            assignment: None,
            image_order: None,
            steps,
        });
    }

    let start = Instant::now();
    let out_of_time = |steps: u64| {
        opts.time_limit
            .is_some_and(|limit| steps.is_multiple_of(1024) && start.elapsed() >= limit)
    };
    let found = |perms: &[Perm], degree: usize, steps: u64| {
        let images: BTreeMap<Gen, Perm> =
            slots.iter().cloned().zip(perms.iter().cloned()).collect();
        let assignment = PermAssignment { degree, images };
        let order =
            validate_witness(target, w, &assignment).expect("search hit implies validation");
        WitnessReport {
            status: WitnessStatus::WitnessFound,
            assignment: Some(assignment),
            image_order: Some(order),
            steps,
        }
    };
    let accepts = |perms: &[Perm], invs: &[Perm], degree: usize| {
        rels.iter()
            .all(|r| eval_compiled(r, perms, invs, degree).is_identity())
            && !eval_compiled(&word, perms, invs, degree).is_identity()
    };

    // exhaustive over small degrees
    let exhaustive_cap = opts.max_degree.min(4);
    for degree in 1..=exhaustive_cap {
        let all = Perm::all(degree);
        let mut odometer = vec![0usize; slots.len()];
        loop {
            steps += 1;
            if steps > opts.max_steps || out_of_time(steps) {
                return Ok(WitnessReport {
                    status: WitnessStatus::Timeout,
                    assignment: None,
                    image_order: None,
                    steps,
                });
            }
            let perms: Vec<Perm> = odometer.iter().map(|&i| all[i].clone()).collect();
            let invs: Vec<Perm> = perms.iter().map(Perm::inverse).collect();
            if accepts(&perms, &invs, degree) {
                return Ok(found(&perms, degree, steps));
            }
            // advance, last slot fastest
            let mut pos = slots.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                odometer[pos] += 1;
                if odometer[pos] < all.len() {
                    break;
                }
                odometer[pos] = 0;
                if pos == 0 {
                    pos = usize::MAX;
                    break;
                }
            }
            if pos == usize::MAX || slots.is_empty() {
                break;
            }
        }
    }

    if opts.max_degree <= 4 {
        return Ok(WitnessReport {
            status: WitnessStatus::Exhausted,
            assignment: None,
            image_order: None,
            steps,
        });
    }

    // randomized above degree 4, round-robin over the remaining degrees
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let degrees: Vec<usize> = (5..=opts.max_degree).collect();
    let mut turn = 0usize;
    while steps < opts.max_steps && !out_of_time(steps) {
        steps += 1;
        let degree = degrees[turn % degrees.len()];
        turn += 1;
        let perms: Vec<Perm> = (0..slots.len())
            .map(|_| Perm::random(&mut rng, degree))
            .collect();
        let invs: Vec<Perm> = perms.iter().map(Perm::inverse).collect();
        if accepts(&perms, &invs, degree) {
            return Ok(found(&perms, degree, steps));
        }
    }
    Ok(WitnessReport {
        status: WitnessStatus::Timeout,
        assignment: None,
        image_order: None,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{embed, universal_word, EmbedMode};
    use crate::presentation::parse;

    #[test]
    fn free_target_finds_transposition_for_x() {
        let target = Presentation::over_xy(Vec::new());
        let w = Word::from_gen(Gen::plain("x"));
        let opts = WitnessOptions {
            max_degree: 2,
            ..Default::default()
        };
        let report = find_witness(&target, &w, &opts).unwrap();
        assert_eq!(report.status, WitnessStatus::WitnessFound);
        let assignment = report.assignment.unwrap();
        assert_eq!(assignment.degree, 2);
        // deterministic enumeration: x gets the transposition, y stays identity
        assert_eq!(
            assignment.images[&Gen::plain("x")],
            Perm::from_images(vec![1, 0]).unwrap()
        );
        assert!(assignment.images[&Gen::plain("y")].is_identity());
        assert_eq!(report.image_order, Some(2));
    }

    #[test]
    fn empty_word_is_exhausted_without_assignment() {
        let target = Presentation::over_xy(Vec::new());
        let report = find_witness(&target, &Word::empty(), &WitnessOptions::default()).unwrap();
        assert_eq!(report.status, WitnessStatus::Exhausted);
        assert!(report.assignment.is_none());
        assert!(report.image_order.is_none());
    }

    #[test]
    fn exhausted_when_no_witness_below_cap() {
        // relator x forces x to the identity everywhere
        let target = Presentation::over_xy(vec![Word::from_gen(Gen::plain("x"))]);
        let w = Word::from_gen(Gen::plain("x"));
        let opts = WitnessOptions {
            max_degree: 3,
            ..Default::default()
        };
        let report = find_witness(&target, &w, &opts).unwrap();
        assert_eq!(report.status, WitnessStatus::Exhausted);
    }

    #[test]
    fn witness_for_embedded_order_two_group() {
        let source = parse("gens a[i] for i >= 1; rels a[1]^2;").unwrap();
        let result = embed(&source, EmbedMode::General).unwrap();
        let w = universal_word(1).unwrap();
        let report = find_witness(&result.target, &w, &WitnessOptions::default()).unwrap();
        assert_eq!(report.status, WitnessStatus::WitnessFound);
        assert_eq!(report.image_order, Some(2));
        let assignment = report.assignment.unwrap();
        assert_eq!(
            validate_witness(&result.target, &w, &assignment),
            Some(2),
            "witness must re-validate"
        );
    }

    #[test]
    fn rejects_foreign_generators_and_schemas() {
        let target = Presentation::over_xy(Vec::new());
        let w = Word::from_gen(Gen::plain("q"));
        assert_eq!(
            find_witness(&target, &w, &WitnessOptions::default()),
            Err(WitnessError::UndeclaredGenerator(Gen::plain("q")))
        );
        let schema_target = parse("gens a[i] for i >= 1; rels a[s]^2 for s >= 1;").unwrap();
        assert!(matches!(
            find_witness(&schema_target, &Word::empty(), &WitnessOptions::default()),
            Err(WitnessError::SchemasPresent(1))
        ));
    }
}
