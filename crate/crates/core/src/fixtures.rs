//! Bundled example problems (the JSON files under `fixtures/`).
//!
//! * `ex1a`, `ex1b`: two 4-message single-unicast problems with identical
//!   alignment and pairwise conflict graphs but different conflict
//!   hypergraphs.
//! * `ex_inf`: six messages, no acyclic quadruple, yet not rate 1/3 feasible.
//! * `ex_feas`: six messages whose alignment set has forks and a cycle, with
//!   an explicit length-3 code (`ex_feas_reference_code`).
//! * `p5`: five messages; `{1,2,3}` is a clean type-2 alignment set.

use crate::codec::ScalarLinearCode;
use crate::problem::{Completeness, IndexCodingProblem};

pub const EX1A: &str = include_str!("../fixtures/ex1a.json");
pub const EX1B: &str = include_str!("../fixtures/ex1b.json");
pub const EX_INF: &str = include_str!("../fixtures/ex_inf.json");
pub const EX_FEAS: &str = include_str!("../fixtures/ex_feas.json");
pub const P5: &str = include_str!("../fixtures/p5.json");
pub const EX_FEAS_REFERENCE_CODE: &str = include_str!("../fixtures/ex_feas_reference.code.json");

fn load(text: &str) -> IndexCodingProblem {
    IndexCodingProblem::parse(text, Completeness::Required).expect("bundled fixture is valid")
}

pub fn ex1a() -> IndexCodingProblem {
    load(EX1A)
}

pub fn ex1b() -> IndexCodingProblem {
    load(EX1B)
}

pub fn ex_inf() -> IndexCodingProblem {
    load(EX_INF)
}

pub fn ex_feas() -> IndexCodingProblem {
    load(EX_FEAS)
}

pub fn p5() -> IndexCodingProblem {
    load(P5)
}

/// `W1, W3 -> e1`, `W4, W5 -> e2`, `W2, W6 -> e3` over GF(1009).
pub fn ex_feas_reference_code() -> ScalarLinearCode {
    ScalarLinearCode::from_json(EX_FEAS_REFERENCE_CODE).expect("bundled code is valid")
}

/// Every bundled problem by file stem.
pub fn all() -> Vec<(&'static str, IndexCodingProblem)> {
    vec![
        ("ex1a", ex1a()),
        ("ex1b", ex1b()),
        ("ex_inf", ex_inf()),
        ("ex_feas", ex_feas()),
        ("p5", p5()),
    ]
}
