//! A six-message groupcast instance whose type-2 sets are all clean but which
//! has no length-3 scalar linear code. The small-field search agrees with a
//! field-independent argument:
//!
//! receivers decoding W1 (twice) and W2 force `{3,4,5}`, `{3,5,6}` and
//! `{1,3,6}` to span planes; V3, V4 and V1 are pairwise independent. If V5 is
//! not parallel to V3, then V6 lies in `<V3,V4> ∩ <V1,V3> = <V3>`, and V5
//! falls into `span{V4,V6}`, which the W5 receiver forbids. If V5 is parallel
//! to V3, then V6 (not parallel to V5) makes `<V3,V6> = <V1,V3>`, which
//! contains V1 and breaks the second W1 receiver.

use indexcode::feasibility::{check_rate_third, Prediction, RateThirdVerdict};
use indexcode::oracle::{exists_code, min_length, SUPPORTED_FIELDS};
use indexcode::problem::{random_problem, Completeness, IndexCodingProblem};
use indexcode::structure::StructureReport;

const INSTANCE: &str = r#"{"n": 6, "receivers": [
    {"demands": [1], "side_info": [2, 6]},
    {"demands": [2], "side_info": [4, 5]},
    {"demands": [3], "side_info": [1, 2, 4, 5, 6]},
    {"demands": [4], "side_info": [1, 2, 3, 5]},
    {"demands": [5], "side_info": [1, 2, 3]},
    {"demands": [6], "side_info": [2, 3, 4, 5]},
    {"demands": [1], "side_info": [2, 4]},
    {"demands": [5], "side_info": [1, 2, 3, 4]},
    {"demands": [3, 4], "side_info": [1, 5, 6]}]}"#;

fn instance() -> IndexCodingProblem {
    IndexCodingProblem::parse(INSTANCE, Completeness::Required).unwrap()
}

#[test]
fn found_by_the_seeded_generator() {
    let generated = random_problem(6, 0.65, false, 20838);
    assert_eq!(generated, instance());
}

#[test]
fn type2_sets_are_clean() {
    let r = StructureReport::build(&instance());
    assert_eq!(r.type2_sets.len(), 3);
    assert!(r.type2_sets.iter().all(|t| t.is_clean()));
    assert_eq!(
        check_rate_third(&instance()),
        RateThirdVerdict::Undetermined {
            conjecture_predicts: Prediction::Feasible
        }
    );
}

#[test]
fn no_length_three_code_over_small_fields() {
    let p = instance();
    for q in SUPPORTED_FIELDS {
        assert!(!exists_code(&p, q, 3).unwrap().exists, "GF({q})");
        assert_eq!(min_length(&p, q, 4).unwrap().min_length, Some(4));
    }
}
