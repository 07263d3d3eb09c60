//! Golden-file check for GAP output: the embedded rationals presentation at
//! bound 3, frozen at its first verified run.

use twogen::embed::{embed, EmbedMode};
use twogen::presentation::{parse, Format};

const GOLDEN: &str = include_str!("golden/t_q_bound3.g");

#[test]
fn embedded_rationals_gap_output_matches_golden() {
    let p =
        parse("gens a[i] for i >= 1; rels a[s]^s * a[s-1]^-1 for s >= 2; torsion_free;").unwrap();
    let inst = p.instantiate(3).presentation;
    let result = embed(&inst, EmbedMode::TorsionFree).unwrap();
    assert_eq!(result.target.serialize(Format::Gap).unwrap(), GOLDEN);
}

#[test]
fn source_presentation_gap_output_uses_mangled_names() {
    let p = parse("gens a[i] for i >= 1; rels a[s]^s * a[s-1]^-1 for s >= 2;").unwrap();
    let gap = p
        .instantiate(3)
        .presentation
        .serialize(Format::Gap)
        .unwrap();
    assert_eq!(
        gap,
        "F := FreeGroup(\"a1\",\"a2\",\"a3\");\nAssignGeneratorVariables(F);\nrels := [\n  a2^2*a1^-1,\n  a3^3*a2^-1\n];\nG := F / rels;\n"
    );
}
