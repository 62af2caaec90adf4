//! Combinatorial structure of a problem's interference.
//!
//! The alignment graph joins two messages when both are missing at a receiver
//! that is decoding a third message; its connected components are the
//! alignment sets. The conflict hypergraph records each nonempty interfering
//! set together with the message being decoded. On top of those sit the rate
//! one-third notions: triangular interfering sets (three co-interfering
//! messages with a conflict among them), type-2 alignment sets (components of
//! triangles chained through shared conflicting pairs) and conflicts internal
//! to alignment sets of a restricted problem.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::dsu::DisjointSets;
use crate::problem::{
    conflicts, fmt_set, restrict_problem, ConflictPair, IndexCodingProblem, Interference,
    MessageId, MessageSet, ProblemError, ReceiverId,
};

/// Unordered alignment edge `(a, b)` with `a < b`.
pub type Edge = (MessageId, MessageId);

fn edge(x: MessageId, y: MessageId) -> Edge {
    if x < y {
        (x, y)
    } else {
        (y, x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlignmentGraph {
    n: usize,
    edges: BTreeSet<Edge>,
}

impl AlignmentGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn has_edge(&self, x: MessageId, y: MessageId) -> bool {
        self.edges.contains(&edge(x, y))
    }

    pub fn degree(&self, m: MessageId) -> usize {
        self.edges
            .iter()
            .filter(|(a, b)| *a == m || *b == m)
            .count()
    }

    pub fn neighbors(&self, m: MessageId) -> MessageSet {
        self.edges
            .iter()
            .filter_map(|&(a, b)| match (a == m, b == m) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect()
    }

    /// Connected components, ordered by smallest member.
    pub fn components(&self) -> Vec<AlignmentSet> {
        let mut dsu = DisjointSets::new(self.n);
        for &(a, b) in &self.edges {
            dsu.union(a.index(), b.index());
        }
        dsu.groups()
            .into_iter()
            .map(|g| AlignmentSet {
                members: g.into_iter().map(MessageId::from_index).collect(),
            })
            .collect()
    }

    fn edges_within(&self, s: &MessageSet) -> usize {
        self.edges
            .iter()
            .filter(|(a, b)| s.contains(a) && s.contains(b))
            .count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AlignmentSet {
    pub members: MessageSet,
}

impl AlignmentSet {
    pub fn contains(&self, m: MessageId) -> bool {
        self.members.contains(&m)
    }
}

/// `{i, j}` is an edge iff some receiver decoding `W_k`, `k ∉ {i, j}`, has
/// both in `Interf_k(j)`.
pub fn alignment_graph(p: &IndexCodingProblem) -> AlignmentGraph {
    alignment_graph_from(p.n(), &p.interference())
}

fn alignment_graph_from(n: usize, events: &[Interference]) -> AlignmentGraph {
    let mut edges = BTreeSet::new();
    for ev in events {
        for (&a, &b) in ev.interferers.iter().tuple_combinations() {
            edges.insert(edge(a, b));
        }
    }
    AlignmentGraph { n, edges }
}

pub fn alignment_sets(p: &IndexCodingProblem) -> Vec<AlignmentSet> {
    alignment_graph(p).components()
}

/// A hyperedge joining the message being decoded to its interfering set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Hyperedge {
    pub demanded: MessageId,
    pub interferers: MessageSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum HyperedgeKey {
    /// A single interferer carries no direction: `{k, i}` as a plain pair.
    Pair(ConflictPair),
    Directed(MessageId, MessageSet),
}

impl Hyperedge {
    fn key(&self) -> HyperedgeKey {
        if self.interferers.len() == 1 {
            let i = *self.interferers.iter().next().unwrap();
            HyperedgeKey::Pair(ConflictPair::new(self.demanded, i).expect("k not in Interf_k"))
        } else {
            HyperedgeKey::Directed(self.demanded, self.interferers.clone())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConflictHypergraph {
    n: usize,
    hyperedges: BTreeSet<Hyperedge>,
}

impl ConflictHypergraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hyperedges(&self) -> &BTreeSet<Hyperedge> {
        &self.hyperedges
    }

    fn keys(&self) -> BTreeSet<HyperedgeKey> {
        self.hyperedges.iter().map(Hyperedge::key).collect()
    }
}

pub fn conflict_hypergraph(p: &IndexCodingProblem) -> ConflictHypergraph {
    let hyperedges = p
        .interference()
        .into_iter()
        .filter(|ev| !ev.interferers.is_empty())
        .map(|ev| Hyperedge {
            demanded: ev.demanded,
            interferers: ev.interferers,
        })
        .collect();
    ConflictHypergraph {
        n: p.n(),
        hyperedges,
    }
}

/// Same vertex count and the same hyperedges. A hyperedge with a single
/// interferer is an undirected pair, so `(k, {i})` matches `(i, {k})`; larger
/// hyperedges keep the decoded message distinguished.
pub fn hypergraphs_equal(h1: &ConflictHypergraph, h2: &ConflictHypergraph) -> bool {
    h1.n == h2.n && h1.keys() == h2.keys()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegacyConflictGraph {
    n: usize,
    edges: BTreeSet<ConflictPair>,
}

impl LegacyConflictGraph {
    pub fn edges(&self) -> &BTreeSet<ConflictPair> {
        &self.edges
    }
}

pub fn legacy_conflict_graph(p: &IndexCodingProblem) -> LegacyConflictGraph {
    LegacyConflictGraph {
        n: p.n(),
        edges: conflicts(p),
    }
}

/// Some vertex of `s` has degree at least 3.
pub fn has_fork(g: &AlignmentGraph, s: &AlignmentSet) -> bool {
    s.members.iter().any(|&m| g.degree(m) >= 3)
}

/// `s` is a connected component, so it has a cycle iff it has at least as
/// many edges as vertices.
pub fn has_cycle(g: &AlignmentGraph, s: &AlignmentSet) -> bool {
    g.edges_within(&s.members) >= s.members.len()
}

/// A cycle inside `s` as a vertex sequence (first vertex not repeated), found
/// by depth-first search.
pub fn cycle_witness(g: &AlignmentGraph, s: &AlignmentSet) -> Option<Vec<MessageId>> {
    let start = *s.members.iter().next()?;
    let mut parent: BTreeMap<MessageId, Option<MessageId>> = BTreeMap::new();
    let mut stack = vec![(start, None::<MessageId>)];
    while let Some((v, from)) = stack.pop() {
        if parent.contains_key(&v) {
            continue;
        }
        parent.insert(v, from);
        for w in g.neighbors(v) {
            if Some(w) == from {
                continue;
            }
            if parent.contains_key(&w) {
                // Back edge v-w closes a cycle through their common ancestor.
                let path_to_root = |mut x: MessageId| {
                    let mut path = vec![x];
                    while let Some(Some(px)) = parent.get(&x) {
                        x = *px;
                        path.push(x);
                    }
                    path
                };
                let pv = path_to_root(v);
                let pw = path_to_root(w);
                let pw_set: BTreeSet<MessageId> = pw.iter().copied().collect();
                let meet = *pv.iter().find(|x| pw_set.contains(x))?;
                let mut cycle: Vec<MessageId> =
                    pv.iter().copied().take_while(|&x| x != meet).collect();
                cycle.push(meet);
                let tail: Vec<MessageId> = pw.iter().copied().take_while(|&x| x != meet).collect();
                cycle.extend(tail.into_iter().rev());
                return Some(cycle);
            }
            stack.push((w, Some(v)));
        }
    }
    None
}

/// Messages `(i1, i2, i3, i4)` with receivers `(j1..j4)` such that `j_k`
/// demands `i_k` and every earlier message interferes there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcyclicQuadruple {
    pub messages: [MessageId; 4],
    pub receivers: [ReceiverId; 4],
}

/// Exhaustive search over ordered 4-tuples; returns the lexicographically
/// smallest witness.
pub fn find_acyclic_quadruple(p: &IndexCodingProblem) -> Option<AcyclicQuadruple> {
    let events = p.interference();
    let mut by_message: Vec<Vec<&Interference>> = vec![Vec::new(); p.n()];
    for ev in &events {
        by_message[ev.demanded.index()].push(ev);
    }

    fn extend(
        by_message: &[Vec<&Interference>],
        chosen: &mut Vec<(MessageId, ReceiverId)>,
    ) -> bool {
        if chosen.len() == 4 {
            return true;
        }
        for (idx, evs) in by_message.iter().enumerate() {
            let m = MessageId::from_index(idx);
            if chosen.iter().any(|&(c, _)| c == m) {
                continue;
            }
            let witness = evs
                .iter()
                .find(|ev| chosen.iter().all(|(c, _)| ev.interferers.contains(c)));
            if let Some(ev) = witness {
                chosen.push((m, ev.receiver));
                if extend(by_message, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    let mut chosen = Vec::with_capacity(4);
    if !extend(&by_message, &mut chosen) {
        return None;
    }
    Some(AcyclicQuadruple {
        messages: [0, 1, 2, 3].map(|i| chosen[i].0),
        receivers: [0, 1, 2, 3].map(|i| chosen[i].1),
    })
}

/// Three messages interfering together at one receiver, at least two of them
/// in conflict. `receiver`/`demanded` name the first witnessing receiver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangularInterferingSet {
    pub members: [MessageId; 3],
    pub receiver: ReceiverId,
    pub demanded: MessageId,
}

impl TriangularInterferingSet {
    pub fn member_set(&self) -> MessageSet {
        self.members.iter().copied().collect()
    }
}

pub fn triangular_interfering_sets(p: &IndexCodingProblem) -> Vec<TriangularInterferingSet> {
    triangles_from(&p.interference(), &conflicts(p))
}

fn triangles_from(
    events: &[Interference],
    conflict_set: &BTreeSet<ConflictPair>,
) -> Vec<TriangularInterferingSet> {
    let in_conflict = |x: MessageId, y: MessageId| {
        ConflictPair::new(x, y).is_some_and(|c| conflict_set.contains(&c))
    };
    let mut found: BTreeMap<[MessageId; 3], (ReceiverId, MessageId)> = BTreeMap::new();
    for ev in events {
        for (&a, &b, &c) in ev.interferers.iter().tuple_combinations() {
            if in_conflict(a, b) || in_conflict(a, c) || in_conflict(b, c) {
                found.entry([a, b, c]).or_insert((ev.receiver, ev.demanded));
            }
        }
    }
    found
        .into_iter()
        .map(|(members, (receiver, demanded))| TriangularInterferingSet {
            members,
            receiver,
            demanded,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Type2AlignmentSet {
    pub triangles: Vec<[MessageId; 3]>,
    pub messages: MessageSet,
}

/// Components of the triangle graph in which two triangles are adjacent when
/// they share exactly two messages and those two are in conflict.
pub fn type2_alignment_sets(p: &IndexCodingProblem) -> Vec<Type2AlignmentSet> {
    let conflict_set = conflicts(p);
    let triangles = triangles_from(&p.interference(), &conflict_set);
    type2_from(&triangles, &conflict_set)
}

fn type2_from(
    triangles: &[TriangularInterferingSet],
    conflict_set: &BTreeSet<ConflictPair>,
) -> Vec<Type2AlignmentSet> {
    let mut dsu = DisjointSets::new(triangles.len());
    for (x, y) in (0..triangles.len()).tuple_combinations() {
        let sx = triangles[x].member_set();
        let shared: Vec<MessageId> = triangles[y]
            .members
            .iter()
            .copied()
            .filter(|m| sx.contains(m))
            .collect();
        if shared.len() == 2 {
            let pair = ConflictPair::new(shared[0], shared[1]).expect("distinct");
            if conflict_set.contains(&pair) {
                dsu.union(x, y);
            }
        }
    }
    let mut out: Vec<Type2AlignmentSet> = dsu
        .groups()
        .into_iter()
        .map(|g| {
            let triangles: Vec<[MessageId; 3]> = g.iter().map(|&i| triangles[i].members).collect();
            let messages = triangles.iter().flatten().copied().collect();
            Type2AlignmentSet {
                triangles,
                messages,
            }
        })
        .collect();
    out.sort_by(|a, b| a.messages.cmp(&b.messages));
    out
}

/// A conflict of the restricted problem lying inside one restricted
/// alignment set, both in parent numbering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictedConflict {
    pub pair: ConflictPair,
    pub restricted_alignment_set: MessageSet,
}

pub fn restricted_internal_conflicts(
    p: &IndexCodingProblem,
    subset: &MessageSet,
) -> Result<Vec<RestrictedConflict>, ProblemError> {
    let r = restrict_problem(p, subset)?;
    let rp = r.problem();
    let sets = alignment_sets(rp);
    let mut out = Vec::new();
    for c in conflicts(rp) {
        if let Some(s) = sets.iter().find(|s| s.contains(c.a()) && s.contains(c.b())) {
            out.push(RestrictedConflict {
                pair: ConflictPair::new(r.to_original(c.a()), r.to_original(c.b()))
                    .expect("distinct"),
                restricted_alignment_set: r.to_original_set(&s.members),
            });
        }
    }
    Ok(out)
}

/// How an alignment set fits the rate one-third construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// No receiver sees three of its messages in one interfering set.
    Kind1,
    /// Exactly three conflict-free messages interfering together somewhere.
    Kind2,
    /// Equals a type-2 union with no restricted internal conflicts.
    Type2Clean,
    /// Equals a type-2 union that has restricted internal conflicts.
    Type2Dirty,
    Other,
}

/// Everything derived from one problem, computed once.
pub(crate) struct Derived {
    pub events: Vec<Interference>,
    pub conflicts: BTreeSet<ConflictPair>,
    pub graph: AlignmentGraph,
    pub sets: Vec<AlignmentSet>,
    pub triangles: Vec<TriangularInterferingSet>,
    pub type2: Vec<Type2AlignmentSet>,
}

impl Derived {
    pub fn new(p: &IndexCodingProblem) -> Self {
        let events = p.interference();
        let conflicts = conflicts(p);
        let graph = alignment_graph_from(p.n(), &events);
        let sets = graph.components();
        let triangles = triangles_from(&events, &conflicts);
        let type2 = type2_from(&triangles, &conflicts);
        Derived {
            events,
            conflicts,
            graph,
            sets,
            triangles,
            type2,
        }
    }

    pub fn classify(&self, p: &IndexCodingProblem, s: &AlignmentSet) -> Classification {
        let three_together = self
            .events
            .iter()
            .any(|ev| ev.interferers.intersection(&s.members).nth(2).is_some());
        if !three_together {
            return Classification::Kind1;
        }
        if s.members.len() == 3 {
            let together = self
                .events
                .iter()
                .any(|ev| s.members.is_subset(&ev.interferers));
            let conflict_free = !self.conflicts.iter().any(|c| c.within(&s.members));
            if together && conflict_free {
                return Classification::Kind2;
            }
        }
        if self.type2.iter().any(|t| t.messages == s.members) {
            let clean = restricted_internal_conflicts(p, &s.members)
                .expect("alignment sets are nonempty")
                .is_empty();
            return if clean {
                Classification::Type2Clean
            } else {
                Classification::Type2Dirty
            };
        }
        Classification::Other
    }
}

pub fn classify_alignment_set(p: &IndexCodingProblem, s: &AlignmentSet) -> Classification {
    Derived::new(p).classify(p, s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignmentSetReport {
    pub members: MessageSet,
    pub has_fork: bool,
    pub has_cycle: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle_witness: Option<Vec<MessageId>>,
    pub classification: Classification,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Type2Report {
    pub messages: MessageSet,
    pub triangles: Vec<[MessageId; 3]>,
    pub restricted_internal_conflicts: Vec<RestrictedConflict>,
}

impl Type2Report {
    pub fn is_clean(&self) -> bool {
        self.restricted_internal_conflicts.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub alignment_sets: Vec<AlignmentSetReport>,
    pub alignment_edges: Vec<Edge>,
    pub conflicts: Vec<ConflictPair>,
    pub triangles: Vec<[MessageId; 3]>,
    pub type2_sets: Vec<Type2Report>,
    pub acyclic_quadruple: Option<AcyclicQuadruple>,
}

impl StructureReport {
    pub fn build(p: &IndexCodingProblem) -> Self {
        let d = Derived::new(p);
        Self::from_derived(p, &d)
    }

    pub(crate) fn from_derived(p: &IndexCodingProblem, d: &Derived) -> Self {
        let alignment_sets = d
            .sets
            .iter()
            .map(|s| {
                let has_cycle = has_cycle(&d.graph, s);
                AlignmentSetReport {
                    members: s.members.clone(),
                    has_fork: has_fork(&d.graph, s),
                    has_cycle,
                    cycle_witness: if has_cycle {
                        cycle_witness(&d.graph, s)
                    } else {
                        None
                    },
                    classification: d.classify(p, s),
                }
            })
            .collect();
        let type2_sets = d
            .type2
            .iter()
            .map(|t| Type2Report {
                messages: t.messages.clone(),
                triangles: t.triangles.clone(),
                restricted_internal_conflicts: restricted_internal_conflicts(p, &t.messages)
                    .expect("type-2 sets are nonempty"),
            })
            .collect();
        StructureReport {
            alignment_sets,
            alignment_edges: d.graph.edges.iter().copied().collect(),
            conflicts: d.conflicts.iter().copied().collect(),
            triangles: d.triangles.iter().map(|t| t.members).collect(),
            type2_sets,
            acyclic_quadruple: find_acyclic_quadruple(p),
        }
    }

    pub fn classification_of(&self, members: &MessageSet) -> Option<Classification> {
        self.alignment_sets
            .iter()
            .find(|s| &s.members == members)
            .map(|s| s.classification)
    }
}

/// Graphviz text: alignment edges solid, conflict edges dotted, and each
/// conflict hyperedge as a point node tied to its members (bold to the
/// decoded message).
pub fn to_dot(p: &IndexCodingProblem) -> String {
    let g = alignment_graph(p);
    let h = conflict_hypergraph(p);
    let mut out = String::from("graph alignment {\n  node [shape=circle];\n");
    for m in p.messages() {
        let _ = writeln!(out, "  w{m} [label=\"W{m}\"];");
    }
    for (a, b) in g.edges() {
        let _ = writeln!(out, "  w{a} -- w{b};");
    }
    for c in conflicts(p) {
        let _ = writeln!(out, "  w{} -- w{} [style=dotted];", c.a(), c.b());
    }
    for (i, he) in h.hyperedges().iter().enumerate() {
        let _ = writeln!(
            out,
            "  h{i} [shape=point, xlabel=\"{{{},{}}}\"];",
            he.demanded,
            fmt_set(&he.interferers)
        );
        let _ = writeln!(out, "  h{i} -- w{} [style=bold];", he.demanded);
        for m in &he.interferers {
            let _ = writeln!(out, "  h{i} -- w{m} [style=dashed];");
        }
    }
    out.push_str("}\n");
    out
}
