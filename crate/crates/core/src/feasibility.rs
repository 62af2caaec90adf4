//! Verdicts for the symmetric rates 1, 1/2 and 1/3.
//!
//! Rate 1 needs no conflicts at all. Rate 1/2 is feasible exactly when no
//! conflict joins two messages of one alignment set. For rate 1/3 there are
//! two combinatorial obstructions (a type-2 set with a restricted internal
//! conflict, an acyclic quadruple), a sufficient condition (every alignment
//! set is kind-1, kind-2 or a clean type-2 set, or the problem is already
//! rate 1/2 feasible), and a gap in between where only a conjecture speaks.

use serde::{Deserialize, Serialize};

use crate::problem::{fmt_set, ConflictPair, IndexCodingProblem, MessageSet};
use crate::structure::{
    find_acyclic_quadruple, restricted_internal_conflicts, AcyclicQuadruple, Classification,
    Derived, RestrictedConflict, StructureReport,
};

/// Bumped whenever report keys change.
pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RateOneVerdict {
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conflict: Option<ConflictPair>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InternalConflict {
    pub pair: ConflictPair,
    pub alignment_set: MessageSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RateHalfVerdict {
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub internal_conflict: Option<InternalConflict>,
}

/// Which argument establishes a feasible rate-1/3 verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeasibleBasis {
    /// Every alignment set is kind-1, kind-2 or a clean type-2 set.
    AlignmentSetConstruction,
    /// A length-2 code exists; pad it.
    RateHalfCode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prediction {
    Feasible,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RateThirdVerdict {
    Feasible {
        basis: FeasibleBasis,
    },
    InfeasibleDirtyType2 {
        type2_set: MessageSet,
        conflict: RestrictedConflict,
    },
    InfeasibleAcyclicQuadruple {
        quadruple: AcyclicQuadruple,
    },
    /// Not settled by a proof; `conjecture_predicts` is a labeled guess.
    Undetermined {
        conjecture_predicts: Prediction,
    },
}

impl RateThirdVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, RateThirdVerdict::Feasible { .. })
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            RateThirdVerdict::InfeasibleDirtyType2 { .. }
                | RateThirdVerdict::InfeasibleAcyclicQuadruple { .. }
        )
    }

    /// One-line human rendering.
    pub fn describe(&self) -> String {
        match self {
            RateThirdVerdict::Feasible { basis: FeasibleBasis::AlignmentSetConstruction } => {
                "Feasible (alignment-set construction): every alignment set is kind-1, kind-2 or clean type-2".into()
            }
            RateThirdVerdict::Feasible { basis: FeasibleBasis::RateHalfCode } => {
                "Feasible (rate 1/2 feasible, so a length-2 code extends to length 3)".into()
            }
            RateThirdVerdict::InfeasibleDirtyType2 { type2_set, conflict } => format!(
                "Infeasible (dirty type-2 set): type-2 set {}, restricted internal conflict {}",
                fmt_set(type2_set),
                conflict.pair
            ),
            RateThirdVerdict::InfeasibleAcyclicQuadruple { quadruple } => {
                let m = quadruple.messages;
                let r = quadruple.receivers;
                format!(
                    "Infeasible (acyclic quadruple): messages ({},{},{},{}) at receivers ({},{},{},{})",
                    m[0], m[1], m[2], m[3], r[0], r[1], r[2], r[3]
                )
            }
            RateThirdVerdict::Undetermined { conjecture_predicts } => format!(
                "Undetermined by the alignment-set construction; conjecture predicts {}",
                match conjecture_predicts {
                    Prediction::Feasible => "feasible",
                    Prediction::Infeasible => "infeasible",
                }
            ),
        }
    }
}

fn rate_one(d: &Derived) -> RateOneVerdict {
    let conflict = d.conflicts.iter().next().copied();
    RateOneVerdict {
        feasible: conflict.is_none(),
        conflict,
    }
}

fn rate_half(d: &Derived) -> RateHalfVerdict {
    // Conflicts in pair order, so the witness is the smallest internal one.
    let internal_conflict = d.conflicts.iter().find_map(|c| {
        d.sets
            .iter()
            .find(|s| c.within(&s.members))
            .map(|s| InternalConflict {
                pair: *c,
                alignment_set: s.members.clone(),
            })
    });
    RateHalfVerdict {
        feasible: internal_conflict.is_none(),
        internal_conflict,
    }
}

fn rate_third(p: &IndexCodingProblem, d: &Derived) -> RateThirdVerdict {
    for t in &d.type2 {
        let dirty =
            restricted_internal_conflicts(p, &t.messages).expect("type-2 sets are nonempty");
        if let Some(conflict) = dirty.into_iter().next() {
            return RateThirdVerdict::InfeasibleDirtyType2 {
                type2_set: t.messages.clone(),
                conflict,
            };
        }
    }
    // Implied by the check above on every input; kept separate so that the
    // implication stays testable.
    if let Some(quadruple) = find_acyclic_quadruple(p) {
        return RateThirdVerdict::InfeasibleAcyclicQuadruple { quadruple };
    }
    let constructible = d.sets.iter().all(|s| {
        matches!(
            d.classify(p, s),
            Classification::Kind1 | Classification::Kind2 | Classification::Type2Clean
        )
    });
    if constructible {
        return RateThirdVerdict::Feasible {
            basis: FeasibleBasis::AlignmentSetConstruction,
        };
    }
    if rate_half(d).feasible {
        return RateThirdVerdict::Feasible {
            basis: FeasibleBasis::RateHalfCode,
        };
    }
    RateThirdVerdict::Undetermined {
        conjecture_predicts: Prediction::Feasible,
    }
}

pub fn check_rate_one(p: &IndexCodingProblem) -> RateOneVerdict {
    rate_one(&Derived::new(p))
}

pub fn check_rate_half(p: &IndexCodingProblem) -> RateHalfVerdict {
    rate_half(&Derived::new(p))
}

pub fn check_rate_third(p: &IndexCodingProblem) -> RateThirdVerdict {
    rate_third(p, &Derived::new(p))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub format_version: u32,
    pub messages: usize,
    pub receivers: usize,
    pub rate_one: RateOneVerdict,
    pub rate_half: RateHalfVerdict,
    pub rate_third: RateThirdVerdict,
    /// `rate_third.describe()`, stored for consumers that only read text.
    pub rate_third_summary: String,
    pub structure: StructureReport,
}

pub fn analyze(p: &IndexCodingProblem) -> FeasibilityReport {
    let d = Derived::new(p);
    let rate_third = rate_third(p, &d);
    FeasibilityReport {
        format_version: REPORT_FORMAT_VERSION,
        messages: p.n(),
        receivers: p.receiver_count(),
        rate_one: rate_one(&d),
        rate_half: rate_half(&d),
        rate_third_summary: rate_third.describe(),
        rate_third,
        structure: StructureReport::from_derived(p, &d),
    }
}

impl FeasibilityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "messages: {}, receivers: {}\n",
            self.messages, self.receivers
        );
        out += &match &self.rate_one.conflict {
            None => "rate 1: feasible (no conflicts)\n".to_string(),
            Some(c) => format!("rate 1: infeasible, conflict {c}\n"),
        };
        out += &match &self.rate_half.internal_conflict {
            None => "rate 1/2: feasible (no internal conflicts)\n".to_string(),
            Some(w) => format!(
                "rate 1/2: infeasible, internal conflict {} inside alignment set {}\n",
                w.pair,
                fmt_set(&w.alignment_set)
            ),
        };
        out += &format!("rate 1/3: {}\n", self.rate_third_summary);
        out += "alignment sets:\n";
        for s in &self.structure.alignment_sets {
            out += &format!(
                "  {} {:?}{}{}\n",
                fmt_set(&s.members),
                s.classification,
                if s.has_fork { ", fork" } else { "" },
                if s.has_cycle { ", cycle" } else { "" }
            );
        }
        if !self.structure.type2_sets.is_empty() {
            out += "type-2 sets:\n";
            for t in &self.structure.type2_sets {
                let dirty: Vec<String> = t
                    .restricted_internal_conflicts
                    .iter()
                    .map(|c| c.pair.to_string())
                    .collect();
                out += &format!(
                    "  {} {}\n",
                    fmt_set(&t.messages),
                    if dirty.is_empty() {
                        "clean".to_string()
                    } else {
                        format!("dirty: {}", dirty.join(" "))
                    }
                );
            }
        }
        out
    }
}
