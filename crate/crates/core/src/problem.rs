//! Groupcast index coding problems.
//!
//! A problem has `n` messages `W_1..W_n` held by the source and an ordered
//! list of receivers, each demanding a nonempty set of messages and holding
//! a (disjoint) set of messages as side information. Everything else in the
//! crate is derived from this description: interfering sets, conflicts,
//! restricted problems, and from those the alignment structure.
//!
//! Problems are immutable once built. [`IndexCodingProblem::new`] is the only
//! validating constructor; the text form (see [`IndexCodingProblem::parse`])
//! goes through it as well.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::seeded_rng;

/// 1-based message identifier `W_id`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MessageId(usize);

impl MessageId {
    /// Panics if `id == 0`; ids are 1-based.
    pub fn new(id: usize) -> Self {
        assert!(id >= 1, "message ids are 1-based");
        MessageId(id)
    }

    pub fn from_index(index: usize) -> Self {
        MessageId(index + 1)
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// 0-based position, for indexing per-message arrays.
    pub fn index(self) -> usize {
        self.0 - 1
    }
}

impl fmt::Display for MessageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// 1-based receiver identifier (position in the problem's receiver list).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReceiverId(usize);

impl ReceiverId {
    pub fn new(id: usize) -> Self {
        assert!(id >= 1, "receiver ids are 1-based");
        ReceiverId(id)
    }

    pub fn from_index(index: usize) -> Self {
        ReceiverId(index + 1)
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 - 1
    }
}

impl fmt::Display for ReceiverId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type MessageSet = BTreeSet<MessageId>;

/// Builds a [`MessageSet`] from 1-based ids.
pub fn message_set<I: IntoIterator<Item = usize>>(ids: I) -> MessageSet {
    ids.into_iter().map(MessageId::new).collect()
}

/// Renders a set as `{1,3,4}`.
pub fn fmt_set(set: &MessageSet) -> String {
    let inner: Vec<String> = set.iter().map(|m| m.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Receiver {
    demands: MessageSet,
    side_info: MessageSet,
}

impl Receiver {
    /// Unvalidated; invariants are checked when the receiver is placed in a
    /// problem.
    pub fn new(demands: MessageSet, side_info: MessageSet) -> Self {
        Receiver { demands, side_info }
    }

    pub fn demands(&self) -> &MessageSet {
        &self.demands
    }

    pub fn side_info(&self) -> &MessageSet {
        &self.side_info
    }
}

/// Unordered pair of distinct messages in conflict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ConflictPair {
    a: MessageId,
    b: MessageId,
}

impl ConflictPair {
    /// Returns `None` when `x == y`.
    pub fn new(x: MessageId, y: MessageId) -> Option<Self> {
        match x.cmp(&y) {
            std::cmp::Ordering::Less => Some(ConflictPair { a: x, b: y }),
            std::cmp::Ordering::Greater => Some(ConflictPair { a: y, b: x }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn of(x: usize, y: usize) -> Self {
        Self::new(MessageId::new(x), MessageId::new(y)).expect("distinct messages")
    }

    /// Smaller id.
    pub fn a(&self) -> MessageId {
        self.a
    }

    /// Larger id.
    pub fn b(&self) -> MessageId {
        self.b
    }

    pub fn contains(&self, m: MessageId) -> bool {
        self.a == m || self.b == m
    }

    pub fn within(&self, set: &MessageSet) -> bool {
        set.contains(&self.a) && set.contains(&self.b)
    }
}

impl fmt::Display for ConflictPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.a, self.b)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProblemError {
    #[error("malformed problem file: {0}")]
    Malformed(String),
    #[error("problem must have at least one message")]
    NoMessages,
    #[error("problem must have at least one receiver")]
    NoReceivers,
    #[error("receiver {receiver}: message id {id} out of range 1..={n}")]
    IdOutOfRange {
        receiver: usize,
        id: usize,
        n: usize,
    },
    #[error("receiver {receiver}: message {id} is both demanded and side information")]
    Overlap { receiver: usize, id: usize },
    #[error("receiver {receiver}: empty demand set")]
    EmptyDemand { receiver: usize },
    #[error("messages not demanded by any receiver: {}", fmt_ids(.0))]
    Undemanded(Vec<usize>),
    #[error("receiver index {0} out of range")]
    ReceiverOutOfRange(usize),
    #[error("message id {0} out of range")]
    MessageOutOfRange(usize),
    #[error("restriction set must be nonempty")]
    EmptyRestriction,
}

fn fmt_ids(ids: &[usize]) -> String {
    ids.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// What to do with messages no receiver demands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Completeness {
    #[default]
    Required,
    /// Accept and record them; see [`IndexCodingProblem::undemanded`].
    AllowUndemanded,
}

/// One interference event: receiver `receiver` decoding demanded message
/// `demanded` sees `interferers` as interference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interference {
    pub receiver: ReceiverId,
    pub demanded: MessageId,
    pub interferers: MessageSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexCodingProblem {
    n: usize,
    receivers: Vec<Receiver>,
    undemanded: Vec<MessageId>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    n: usize,
    receivers: Vec<ReceiverFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReceiverFile {
    demands: Vec<usize>,
    #[serde(default)]
    side_info: Vec<usize>,
}

impl IndexCodingProblem {
    pub fn new(
        n: usize,
        receivers: Vec<Receiver>,
        completeness: Completeness,
    ) -> Result<Self, ProblemError> {
        if n == 0 {
            return Err(ProblemError::NoMessages);
        }
        if receivers.is_empty() {
            return Err(ProblemError::NoReceivers);
        }
        let mut demanded = vec![false; n];
        for (idx, r) in receivers.iter().enumerate() {
            let receiver = idx + 1;
            if r.demands.is_empty() {
                return Err(ProblemError::EmptyDemand { receiver });
            }
            for m in r.demands.iter().chain(r.side_info.iter()) {
                if m.get() > n {
                    return Err(ProblemError::IdOutOfRange {
                        receiver,
                        id: m.get(),
                        n,
                    });
                }
            }
            if let Some(m) = r.demands.intersection(&r.side_info).next() {
                return Err(ProblemError::Overlap {
                    receiver,
                    id: m.get(),
                });
            }
            for m in &r.demands {
                demanded[m.index()] = true;
            }
        }
        let undemanded: Vec<MessageId> = (0..n)
            .filter(|&i| !demanded[i])
            .map(MessageId::from_index)
            .collect();
        if !undemanded.is_empty() && completeness == Completeness::Required {
            return Err(ProblemError::Undemanded(
                undemanded.iter().map(|m| m.get()).collect(),
            ));
        }
        Ok(IndexCodingProblem {
            n,
            receivers,
            undemanded,
        })
    }

    /// Single-unicast problem from per-message interfering sets: receiver `j`
    /// demands `W_j` and knows every message outside `{W_j} ∪ interf[j-1]`.
    pub fn single_unicast(interf: &[&[usize]]) -> Result<Self, ProblemError> {
        let n = interf.len();
        let receivers = interf
            .iter()
            .enumerate()
            .map(|(idx, set)| {
                let k = idx + 1;
                let set: BTreeSet<usize> = set.iter().copied().collect();
                let side = (1..=n).filter(|&i| i != k && !set.contains(&i));
                Receiver::new(message_set([k]), message_set(side))
            })
            .collect();
        Self::new(n, receivers, Completeness::Required)
    }

    pub fn parse(text: &str, completeness: Completeness) -> Result<Self, ProblemError> {
        let file: ProblemFile =
            serde_json::from_str(text).map_err(|e| ProblemError::Malformed(e.to_string()))?;
        let mut receivers = Vec::with_capacity(file.receivers.len());
        for (idx, r) in file.receivers.iter().enumerate() {
            for &id in r.demands.iter().chain(r.side_info.iter()) {
                if id == 0 || id > file.n {
                    return Err(ProblemError::IdOutOfRange {
                        receiver: idx + 1,
                        id,
                        n: file.n,
                    });
                }
            }
            receivers.push(Receiver::new(
                message_set(r.demands.iter().copied()),
                message_set(r.side_info.iter().copied()),
            ));
        }
        Self::new(file.n, receivers, completeness)
    }

    /// Canonical text form: ids ascending, two-space indented JSON.
    pub fn to_json(&self) -> String {
        let file = ProblemFile {
            n: self.n,
            receivers: self
                .receivers
                .iter()
                .map(|r| ReceiverFile {
                    demands: r.demands.iter().map(|m| m.get()).collect(),
                    side_info: r.side_info.iter().map(|m| m.get()).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("problem serializes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn receivers(&self) -> &[Receiver] {
        &self.receivers
    }

    pub fn receiver(&self, j: ReceiverId) -> Option<&Receiver> {
        self.receivers.get(j.index())
    }

    pub fn receiver_count(&self) -> usize {
        self.receivers.len()
    }

    pub fn receiver_ids(&self) -> impl Iterator<Item = ReceiverId> {
        (0..self.receivers.len()).map(ReceiverId::from_index)
    }

    pub fn messages(&self) -> impl Iterator<Item = MessageId> {
        (0..self.n).map(MessageId::from_index)
    }

    pub fn all_messages(&self) -> MessageSet {
        self.messages().collect()
    }

    /// Messages no receiver demands (only possible under
    /// [`Completeness::AllowUndemanded`]).
    pub fn undemanded(&self) -> &[MessageId] {
        &self.undemanded
    }

    /// `Interf_k(j)`: every message other than `W_k` missing at receiver `j`
    /// if `j` demands `W_k`, and the empty set otherwise. Co-demanded
    /// messages the receiver lacks count as interference.
    pub fn interfering_set(&self, j: ReceiverId, k: MessageId) -> Result<MessageSet, ProblemError> {
        if j.get() > self.receivers.len() {
            return Err(ProblemError::ReceiverOutOfRange(j.get()));
        }
        if k.get() > self.n {
            return Err(ProblemError::MessageOutOfRange(k.get()));
        }
        Ok(self.interf(j.index(), k))
    }

    pub(crate) fn interf(&self, j_index: usize, k: MessageId) -> MessageSet {
        let r = &self.receivers[j_index];
        if !r.demands.contains(&k) {
            return MessageSet::new();
        }
        self.messages()
            .filter(|&m| m != k && !r.side_info.contains(&m))
            .collect()
    }

    /// Every (receiver, demanded message) pair with its interfering set, in
    /// receiver order then message order. Empty interfering sets included.
    pub fn interference(&self) -> Vec<Interference> {
        let mut out = Vec::new();
        for (idx, r) in self.receivers.iter().enumerate() {
            for &k in &r.demands {
                out.push(Interference {
                    receiver: ReceiverId::from_index(idx),
                    demanded: k,
                    interferers: self.interf(idx, k),
                });
            }
        }
        out
    }
}

/// All conflicting pairs: `{k, i}` whenever `W_i ∈ Interf_k(j)` for some
/// receiver `j` demanding `W_k`.
pub fn conflicts(p: &IndexCodingProblem) -> BTreeSet<ConflictPair> {
    let mut out = BTreeSet::new();
    for ev in p.interference() {
        for &i in &ev.interferers {
            out.extend(ConflictPair::new(ev.demanded, i));
        }
    }
    out
}

/// A restricted problem together with the id translation back to its parent.
#[derive(Clone, Debug)]
pub struct Restriction {
    problem: IndexCodingProblem,
    original_ids: Vec<MessageId>,
    kept_receivers: Vec<ReceiverId>,
}

impl Restriction {
    pub fn problem(&self) -> &IndexCodingProblem {
        &self.problem
    }

    /// Parent id of restricted message `m`.
    pub fn to_original(&self, m: MessageId) -> MessageId {
        self.original_ids[m.index()]
    }

    pub fn to_original_set(&self, set: &MessageSet) -> MessageSet {
        set.iter().map(|&m| self.to_original(m)).collect()
    }

    /// Restricted id of parent message `m`, if it survived.
    pub fn to_restricted(&self, m: MessageId) -> Option<MessageId> {
        self.original_ids
            .binary_search(&m)
            .ok()
            .map(MessageId::from_index)
    }

    /// Restricted message `i` (0-based) corresponds to `original_ids()[i]`.
    pub fn original_ids(&self) -> &[MessageId] {
        &self.original_ids
    }

    /// Restricted receiver `j` (0-based) is parent receiver `kept_receivers()[j]`.
    pub fn kept_receivers(&self) -> &[ReceiverId] {
        &self.kept_receivers
    }
}

/// The problem induced on `subset`: messages renumbered `1..=|subset|` in
/// ascending parent order, receivers kept iff they demand something in
/// `subset`, demand and side information intersected with `subset`.
pub fn restrict_problem(
    p: &IndexCodingProblem,
    subset: &MessageSet,
) -> Result<Restriction, ProblemError> {
    if subset.is_empty() {
        return Err(ProblemError::EmptyRestriction);
    }
    if let Some(m) = subset.iter().find(|m| m.get() > p.n()) {
        return Err(ProblemError::MessageOutOfRange(m.get()));
    }
    let original_ids: Vec<MessageId> = subset.iter().copied().collect();
    let new_id: BTreeMap<MessageId, MessageId> = original_ids
        .iter()
        .enumerate()
        .map(|(i, &m)| (m, MessageId::from_index(i)))
        .collect();
    let translate = |set: &MessageSet| -> MessageSet {
        set.iter().filter_map(|m| new_id.get(m).copied()).collect()
    };

    let mut receivers = Vec::new();
    let mut kept_receivers = Vec::new();
    for (idx, r) in p.receivers().iter().enumerate() {
        let demands = translate(&r.demands);
        if demands.is_empty() {
            continue;
        }
        receivers.push(Receiver::new(demands, translate(&r.side_info)));
        kept_receivers.push(ReceiverId::from_index(idx));
    }
    let undemanded = (0..original_ids.len())
        .map(MessageId::from_index)
        .filter(|m| !receivers.iter().any(|r| r.demands.contains(m)))
        .collect();
    // Receiver invariants carry over from the parent. Completeness is recorded,
    // not enforced, and the receiver list may be empty when the parent allowed
    // undemanded messages.
    let problem = IndexCodingProblem {
        n: original_ids.len(),
        receivers,
        undemanded,
    };
    Ok(Restriction {
        problem,
        original_ids,
        kept_receivers,
    })
}

/// Seeded random problem.
///
/// The generator is `ChaCha8Rng::seed_from_u64(seed)`. In single-unicast mode
/// receiver `j` (for `j = 1..=n`) demands `W_j`, and each other message
/// `i = 1..=n`, `i != j`, in ascending order, joins `S(j)` when
/// `gen_bool(density)` fires.
///
/// In groupcast mode the same `n` receivers are generated first, then
/// `gen_range(0..=n)` extra receivers follow. Each extra receiver demands
/// `W_{gen_range(1..=n)}` and, if `gen_bool(0.3)` fires, a second distinct
/// message drawn the same way until it differs; side information is then
/// drawn per remaining message as above.
///
/// Panics unless `n >= 1` and `0 <= density <= 1`.
pub fn random_problem(
    n: usize,
    density: f64,
    single_unicast: bool,
    seed: u64,
) -> IndexCodingProblem {
    assert!(n >= 1, "random_problem needs at least one message");
    assert!((0.0..=1.0).contains(&density), "density must lie in [0, 1]");
    let mut rng = seeded_rng(seed);
    let mut receivers = Vec::new();
    let side_info = |rng: &mut rand_chacha::ChaCha8Rng, demands: &MessageSet| -> MessageSet {
        (1..=n)
            .map(MessageId::new)
            .filter(|m| !demands.contains(m))
            .filter(|_| rng.gen_bool(density))
            .collect()
    };
    for j in 1..=n {
        let demands = message_set([j]);
        let side = side_info(&mut rng, &demands);
        receivers.push(Receiver::new(demands, side));
    }
    if !single_unicast {
        let extra = rng.gen_range(0..=n);
        for _ in 0..extra {
            let first = rng.gen_range(1..=n);
            let mut demands = message_set([first]);
            if n > 1 && rng.gen_bool(0.3) {
                loop {
                    let second = rng.gen_range(1..=n);
                    if second != first {
                        demands.insert(MessageId::new(second));
                        break;
                    }
                }
            }
            let side = side_info(&mut rng, &demands);
            receivers.push(Receiver::new(demands, side));
        }
    }
    IndexCodingProblem::new(n, receivers, Completeness::Required)
        .expect("generated problems are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn brute_conflicts(p: &IndexCodingProblem) -> BTreeSet<ConflictPair> {
        // Straight from the definition: W_i missing at a receiver demanding
        // some W_k != W_i.
        let mut out = BTreeSet::new();
        for r in p.receivers() {
            for &k in r.demands() {
                for i in 1..=p.n() {
                    let i = MessageId::new(i);
                    if i != k && !r.side_info().contains(&i) {
                        out.insert(ConflictPair::new(i, k).unwrap());
                    }
                }
            }
        }
        out
    }

    #[test]
    fn parses_ex_feas() {
        let p = fixtures::ex_feas();
        assert_eq!(p.n(), 6);
        assert_eq!(p.receiver_count(), 6);
    }

    #[test]
    fn smallest_instance() {
        let p = IndexCodingProblem::parse(
            r#"{"n":1,"receivers":[{"demands":[1],"side_info":[]}]}"#,
            Completeness::Required,
        )
        .unwrap();
        assert_eq!(p.n(), 1);
        assert!(conflicts(&p).is_empty());
    }

    #[test]
    fn parse_errors() {
        let req = Completeness::Required;
        assert_eq!(
            IndexCodingProblem::parse(
                r#"{"n":2,"receivers":[{"demands":[1],"side_info":[1,2]}]}"#,
                req
            ),
            Err(ProblemError::Overlap { receiver: 1, id: 1 })
        );
        assert!(matches!(
            IndexCodingProblem::parse(r#"{"n":2,"receivers":[{"demands":[3]}]}"#, req),
            Err(ProblemError::IdOutOfRange { id: 3, .. })
        ));
        assert!(matches!(
            IndexCodingProblem::parse(r#"{"n":2,"receivers":[{"demands":[0]}]}"#, req),
            Err(ProblemError::IdOutOfRange { id: 0, .. })
        ));
        assert_eq!(
            IndexCodingProblem::parse(r#"{"n":1,"receivers":[{"demands":[]}]}"#, req),
            Err(ProblemError::EmptyDemand { receiver: 1 })
        );
        assert_eq!(
            IndexCodingProblem::parse(r#"{"n":3,"receivers":[{"demands":[1]}]}"#, req),
            Err(ProblemError::Undemanded(vec![2, 3]))
        );
        assert!(matches!(
            IndexCodingProblem::parse(r#"{"n":3,"receivers":[{"demands":[1]"#, req),
            Err(ProblemError::Malformed(_))
        ));
        assert!(matches!(
            IndexCodingProblem::parse(r#"{"n":1,"receivers":[{"demands":[1],"extra":1}]}"#, req),
            Err(ProblemError::Malformed(_))
        ));
        assert_eq!(
            IndexCodingProblem::parse(r#"{"n":1,"receivers":[]}"#, req),
            Err(ProblemError::NoReceivers)
        );
        let relaxed = IndexCodingProblem::parse(
            r#"{"n":3,"receivers":[{"demands":[1]}]}"#,
            Completeness::AllowUndemanded,
        )
        .unwrap();
        assert_eq!(
            relaxed.undemanded(),
            &[MessageId::new(2), MessageId::new(3)]
        );
    }

    #[test]
    fn canonical_text_round_trips() {
        let p = IndexCodingProblem::parse(
            r#"{"n":3,"receivers":[{"demands":[2],"side_info":[3,1]},{"demands":[3,1]}]}"#,
            Completeness::Required,
        )
        .unwrap();
        let text = p.to_json();
        assert!(text.contains("\"side_info\": [\n        1,\n        3\n      ]"));
        assert_eq!(
            IndexCodingProblem::parse(&text, Completeness::Required).unwrap(),
            p
        );
    }

    #[test]
    fn interfering_sets_from_examples() {
        let feas = fixtures::ex_feas();
        assert_eq!(
            feas.interfering_set(ReceiverId::new(6), MessageId::new(6))
                .unwrap(),
            message_set([3, 4, 5])
        );
        let inf = fixtures::ex_inf();
        assert_eq!(
            inf.interfering_set(ReceiverId::new(5), MessageId::new(5))
                .unwrap(),
            message_set([1, 3, 4])
        );
        // Not demanded -> empty.
        assert!(inf
            .interfering_set(ReceiverId::new(5), MessageId::new(1))
            .unwrap()
            .is_empty());
        assert_eq!(
            inf.interfering_set(ReceiverId::new(7), MessageId::new(1)),
            Err(ProblemError::ReceiverOutOfRange(7))
        );
    }

    #[test]
    fn full_side_information_means_no_interference() {
        let p = IndexCodingProblem::single_unicast(&[&[], &[], &[]]).unwrap();
        for j in p.receiver_ids() {
            for k in p.messages() {
                assert!(p.interfering_set(j, k).unwrap().is_empty());
            }
        }
        assert!(conflicts(&p).is_empty());
    }

    #[test]
    fn co_demanded_messages_interfere() {
        let p = IndexCodingProblem::parse(
            r#"{"n":2,"receivers":[{"demands":[1,2]}]}"#,
            Completeness::Required,
        )
        .unwrap();
        assert_eq!(p.interf(0, MessageId::new(1)), message_set([2]));
        assert_eq!(conflicts(&p), [ConflictPair::of(1, 2)].into());
    }

    #[test]
    fn conflicts_match_brute_force() {
        let inf = fixtures::ex_inf();
        let c = conflicts(&inf);
        assert!(c.contains(&ConflictPair::of(1, 4)));
        assert!(c.contains(&ConflictPair::of(1, 3)));
        assert_eq!(c, brute_conflicts(&inf));

        let feas = fixtures::ex_feas();
        let c = conflicts(&feas);
        assert!(c.contains(&ConflictPair::of(3, 5)));
        assert_eq!(c, brute_conflicts(&feas));

        for seed in 0..40 {
            let p = random_problem(1 + (seed as usize % 6), 0.5, seed % 2 == 0, seed);
            assert_eq!(conflicts(&p), brute_conflicts(&p));
        }
    }

    #[test]
    fn restriction_examples() {
        let inf = fixtures::ex_inf();
        let r = restrict_problem(&inf, &message_set([1, 2, 3, 4])).unwrap();
        assert_eq!(r.kept_receivers(), &[1, 2, 3, 4].map(ReceiverId::new));
        let w2 = r.problem().interf(1, MessageId::new(2));
        assert_eq!(r.to_original_set(&w2), message_set([1, 3]));

        let feas = fixtures::ex_feas();
        let r = restrict_problem(&feas, &message_set([3, 4, 5])).unwrap();
        assert_eq!(r.kept_receivers(), &[3, 4, 5].map(ReceiverId::new));
        // The W5-receiver is the third kept one and W5 is restricted id 3.
        let w5 = r.to_restricted(MessageId::new(5)).unwrap();
        assert_eq!(w5, MessageId::new(3));
        assert_eq!(
            r.to_original_set(&r.problem().interf(2, w5)),
            message_set([3])
        );

        assert!(matches!(
            restrict_problem(&feas, &MessageSet::new()),
            Err(ProblemError::EmptyRestriction)
        ));
        assert!(matches!(
            restrict_problem(&feas, &message_set([9])),
            Err(ProblemError::MessageOutOfRange(9))
        ));
    }

    #[test]
    fn restriction_to_everything_is_identity() {
        let inf = fixtures::ex_inf();
        let r = restrict_problem(&inf, &inf.all_messages()).unwrap();
        assert_eq!(r.problem(), &inf);
    }

    #[test]
    fn random_problem_limits_and_determinism() {
        let full = random_problem(4, 1.0, true, 11);
        for r in full.receivers() {
            assert_eq!(r.side_info().len(), 3);
        }
        let empty = random_problem(4, 0.0, true, 11);
        for j in empty.receiver_ids() {
            let k = MessageId::new(j.get());
            let expect: MessageSet = empty.messages().filter(|&m| m != k).collect();
            assert_eq!(empty.interfering_set(j, k).unwrap(), expect);
        }
        assert_eq!(
            random_problem(5, 0.4, false, 99),
            random_problem(5, 0.4, false, 99)
        );
        assert_eq!(
            random_problem(5, 0.4, true, 99),
            random_problem(5, 0.4, true, 99)
        );
    }
}
