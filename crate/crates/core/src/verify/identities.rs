//! The word identities that make the embedding machinery tick, checked by
//! exact free reduction: each identity holds iff `lhs * rhs^-1` reduces to
//! the empty word.
//!
//! With `a = y^x`, `z = y^(x^-1)`, `t_i = y^i*x*y^i*x^-1` and `a_i` the
//! general generator word, the suite checks for each `i`:
//!
//! 1. `a^(t_i) = a_i * a`
//! 2. `y^i * z^i = t_i`
//! 3. `y^x = a`
//! 4. `z^x = y`

use std::collections::BTreeMap;

use serde::Serialize;

use crate::embed::{passage_word, universal_word};
use crate::word::{Gen, Letter, Word};

/// One verified claim, serializable as a JSON line.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub params: BTreeMap<String, i64>,
    pub pass: bool,
    /// The reduced word `lhs * rhs^-1`; `"1"` exactly when the check passes.
    pub certificate: String,
}

impl CheckRecord {
    fn from_diff(name: &str, i: Option<u32>, lhs: &Word, rhs: &Word) -> CheckRecord {
        let diff = lhs.mul(&rhs.inv());
        let mut params = BTreeMap::new();
        if let Some(i) = i {
            params.insert("i".to_string(), i64::from(i));
        }
        CheckRecord {
            name: name.to_string(),
            params,
            pass: diff.is_empty(),
            certificate: diff.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

/// Renders records as JSON lines, one record per line.
pub fn to_json_lines(records: &[CheckRecord]) -> String {
    records.iter().map(|r| r.to_json() + "\n").collect()
}

fn x() -> Word {
    Word::from_gen(Gen::plain("x"))
}

fn y() -> Word {
    Word::from_gen(Gen::plain("y"))
}

/// The word `a = y^x` built letter by letter, independent of `conj`.
fn a_word() -> Word {
    Word::reduce(vec![
        Letter::neg(Gen::plain("x")),
        Letter::pos(Gen::plain("y")),
        Letter::pos(Gen::plain("x")),
    ])
}

fn z_word() -> Word {
    y().conj(&x().inv())
}

fn identity_records(i: u32, mutate: Option<usize>) -> Vec<CheckRecord> {
    let a = a_word();
    let t = passage_word(i).expect("i >= 1");
    let a_i = universal_word(i).expect("i >= 1");

    // 1. a^(t_i) = a_i * a   (mutation: drop the last letter of a_i)
    let rhs_word = if mutate == Some(0) {
        Word::reduce(a_i.letters()[..a_i.len() - 1].to_vec())
    } else {
        a_i
    };
    let c1 = CheckRecord::from_diff(
        "conjugate-splits-into-generator-word",
        Some(i),
        &a.conj(&t),
        &rhs_word.mul(&a),
    );

    // 2. y^i z^i = t_i   (mutation: z conjugated the wrong way)
    let z = if mutate == Some(1) {
        y().conj(&x())
    } else {
        z_word()
    };
    let c2 = CheckRecord::from_diff(
        "passage-word-two-forms",
        Some(i),
        &y().pow(i64::from(i)).mul(&z.pow(i64::from(i))),
        &t,
    );

    // 3. y^x = a   (mutation: conjugate by x^-1 instead)
    let lhs = if mutate == Some(2) {
        y().conj(&x().inv())
    } else {
        y().conj(&x())
    };
    let c3 = CheckRecord::from_diff("conjugate-defines-a", Some(i), &lhs, &a);

    // 4. z^x = y   (mutation: conjugate by x^-1 instead)
    let conj_by = if mutate == Some(3) { x().inv() } else { x() };
    let c4 = CheckRecord::from_diff(
        "z-conjugates-back-to-y",
        Some(i),
        &z_word().conj(&conj_by),
        &y(),
    );

    vec![c1, c2, c3, c4]
}

/// Runs the four-identity suite for every `i` in `1..=i_max`.
pub fn check_identities(i_max: u32) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for i in 1..=i_max.max(1) {
        out.extend(identity_records(i, None));
    }
    out
}

/// Four deliberately broken variants, one per identity, at `i = 3`. Every
/// record must come back with `pass == false`; they guard the suite against
/// vacuous passes.
pub fn negative_controls() -> Vec<CheckRecord> {
    (0..4)
        .map(|k| {
            let mut r = identity_records(3, Some(k)).swap_remove(k);
            r.name.push_str("-mutated");
            r
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_for_small_indices() {
        let records = check_identities(10);
        assert_eq!(records.len(), 40);
        for r in &records {
            assert!(
                r.pass,
                "{} failed at {:?}: {}",
                r.name, r.params, r.certificate
            );
            assert_eq!(r.certificate, "1");
        }
    }

    #[test]
    fn first_identity_instantiated_directly() {
        // conj(conj(y, x), t_1) * (a_1 * y^x)^-1 reduces to the empty word
        let lhs = y().conj(&x()).conj(&passage_word(1).unwrap());
        let rhs = universal_word(1).unwrap().mul(&y().conj(&x()));
        assert!(lhs.mul(&rhs.inv()).is_empty());
    }

    #[test]
    fn negative_controls_all_fail() {
        let controls = negative_controls();
        assert_eq!(controls.len(), 4);
        for r in &controls {
            assert!(!r.pass, "{} unexpectedly passed", r.name);
            assert_ne!(r.certificate, "1");
        }
    }

    #[test]
    fn records_serialize_as_json_lines() {
        let lines = to_json_lines(&check_identities(1));
        assert_eq!(lines.lines().count(), 4);
        let first: serde_json::Value = serde_json::from_str(lines.lines().next().unwrap()).unwrap();
        assert_eq!(first["pass"], serde_json::Value::Bool(true));
        assert_eq!(first["params"]["i"], serde_json::json!(1));
    }
}
