//! Exhaustive search for the shortest scalar linear code over a small prime
//! field.
//!
//! Decodability constraints only care about spans, so the search may fix any
//! invertible change of basis and any nonzero rescaling of each vector. It
//! assigns messages in a fixed order and keeps the vectors assigned so far
//! spanning exactly `e1..er`: the next message either takes a projective
//! point of that span (first nonzero entry 1) or the new direction
//! `e(r+1)`. Each constraint is tested as soon as its last message is placed.
//! Messages that share no constraint are searched independently.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{verify, ScalarLinearCode};
use crate::dsu::DisjointSets;
use crate::feasibility::check_rate_third;
use crate::linalg::{FieldPrime, VectorGF};
use crate::problem::IndexCodingProblem;

pub const MAX_MESSAGES: usize = 10;
pub const MAX_LENGTH: usize = 4;
pub const SUPPORTED_FIELDS: [u64; 3] = [2, 3, 5];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle handles at most {cap} messages, problem has {n}")]
    TooManyMessages { n: usize, cap: usize },
    #[error("oracle fields are 2, 3 and 5, got {0}")]
    UnsupportedField(u64),
    #[error("oracle lengths are 1..={cap}, got {length}")]
    UnsupportedLength { length: usize, cap: usize },
}

fn check_caps(p: &IndexCodingProblem, q: u64, length: usize) -> Result<(), OracleError> {
    if p.n() > MAX_MESSAGES {
        return Err(OracleError::TooManyMessages {
            n: p.n(),
            cap: MAX_MESSAGES,
        });
    }
    if !SUPPORTED_FIELDS.contains(&q) {
        return Err(OracleError::UnsupportedField(q));
    }
    if !(1..=MAX_LENGTH).contains(&length) {
        return Err(OracleError::UnsupportedLength {
            length,
            cap: MAX_LENGTH,
        });
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub exists: bool,
    pub witness: Option<ScalarLinearCode>,
    pub nodes_explored: u64,
}

type Small = [u32; MAX_LENGTH];

/// `V_k ∉ span{V_i : i ∈ interferers}`, message indices 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Constraint {
    demanded: usize,
    interferers: Vec<usize>,
}

fn constraints(p: &IndexCodingProblem) -> Vec<Constraint> {
    let mut all: Vec<Constraint> = p
        .interference()
        .into_iter()
        .filter(|ev| !ev.interferers.is_empty())
        .map(|ev| Constraint {
            demanded: ev.demanded.index(),
            interferers: ev.interferers.iter().map(|m| m.index()).collect(),
        })
        .collect();
    all.sort_by(|a, b| {
        b.interferers
            .len()
            .cmp(&a.interferers.len())
            .then_with(|| (a.demanded, &a.interferers).cmp(&(b.demanded, &b.interferers)))
    });
    all.dedup();
    // A constraint is implied by one with the same demand and more interferers.
    let mut kept: Vec<Constraint> = Vec::new();
    for c in all {
        let implied = kept.iter().any(|k| {
            k.demanded == c.demanded && c.interferers.iter().all(|i| k.interferers.contains(i))
        });
        if !implied {
            kept.push(c);
        }
    }
    kept
}

struct Field {
    q: u32,
    length: usize,
    inv: Vec<u32>,
}

impl Field {
    fn new(q: u32, length: usize) -> Self {
        let inv = (0..q)
            .map(|a| (1..q).find(|b| a * b % q == 1).unwrap_or(0))
            .collect();
        Field { q, length, inv }
    }

    /// Reduces `v` against echelon rows (each with a unit pivot).
    fn reduce(&self, mut v: Small, rows: &[(Small, usize)]) -> Small {
        for (row, piv) in rows {
            let c = v[*piv];
            if c != 0 {
                for t in 0..self.length {
                    v[t] = (v[t] + self.q * self.q - c * row[t]) % self.q;
                }
            }
        }
        v
    }

    fn in_span(&self, v: Small, vs: impl Iterator<Item = Small>) -> bool {
        let mut rows: Vec<(Small, usize)> = Vec::with_capacity(self.length);
        for w in vs {
            let mut r = self.reduce(w, &rows);
            if let Some(piv) = (0..self.length).find(|&t| r[t] != 0) {
                let s = self.inv[r[piv] as usize];
                for x in r[..self.length].iter_mut() {
                    *x = *x * s % self.q;
                }
                rows.push((r, piv));
                if rows.len() == self.length {
                    return true;
                }
            }
        }
        self.reduce(v, &rows).iter().all(|&x| x == 0)
    }

    /// Projective points supported on the first `r` coordinates.
    fn points_within(&self, r: usize) -> Vec<Small> {
        let mut out = Vec::new();
        for lead in 0..r {
            let free = r - lead - 1;
            let count = (self.q as usize).pow(free as u32);
            for mut code in 0..count {
                let mut v = [0; MAX_LENGTH];
                v[lead] = 1;
                for x in v[lead + 1..r].iter_mut() {
                    *x = (code % self.q as usize) as u32;
                    code /= self.q as usize;
                }
                out.push(v);
            }
        }
        out
    }
}

struct Component<'a> {
    field: &'a Field,
    order: Vec<usize>,
    /// Constraints to test once `order[pos]` is assigned.
    due: Vec<Vec<&'a Constraint>>,
    points: Vec<Vec<Small>>,
    nodes: u64,
}

impl Component<'_> {
    fn search(&mut self, pos: usize, rank: usize, assigned: &mut [Small]) -> bool {
        if pos == self.order.len() {
            return true;
        }
        let m = self.order[pos];
        let inside = self.points[rank].len();
        let fresh = usize::from(rank < self.field.length);
        for c in 0..inside + fresh {
            let v = if c < inside {
                self.points[rank][c]
            } else {
                let mut e = [0; MAX_LENGTH];
                e[rank] = 1;
                e
            };
            self.nodes += 1;
            assigned[m] = v;
            let ok = self.due[pos].iter().all(|c| {
                !self.field.in_span(
                    assigned[c.demanded],
                    c.interferers.iter().map(|&i| assigned[i]),
                )
            });
            let next_rank = if rank < self.field.length && v[rank] == 1 {
                rank + 1
            } else {
                rank
            };
            if ok && self.search(pos + 1, next_rank, assigned) {
                return true;
            }
        }
        false
    }
}

/// Does a length-`length` scalar linear code over GF(`q`) exist? Exhaustive.
pub fn exists_code(
    p: &IndexCodingProblem,
    q: u64,
    length: usize,
) -> Result<SearchOutcome, OracleError> {
    check_caps(p, q, length)?;
    let field = Field::new(q as u32, length);
    let cons = constraints(p);
    let n = p.n();

    let mut dsu = DisjointSets::new(n);
    let mut involved = vec![false; n];
    for c in &cons {
        involved[c.demanded] = true;
        for &i in &c.interferers {
            involved[i] = true;
            dsu.union(c.demanded, i);
        }
    }
    let points: Vec<Vec<Small>> = (0..=length).map(|r| field.points_within(r)).collect();

    let mut e1 = [0; MAX_LENGTH];
    e1[0] = 1;
    let mut assigned = vec![e1; n];
    let mut nodes = 0u64;
    let mut exists = true;
    for group in dsu.groups() {
        if !involved[group[0]] {
            continue;
        }
        // First-seen order over constraints, largest interfering sets first.
        let mut order: Vec<usize> = Vec::new();
        for c in cons
            .iter()
            .filter(|c| dsu.find(c.demanded) == dsu.find(group[0]))
        {
            for m in std::iter::once(c.demanded).chain(c.interferers.iter().copied()) {
                if !order.contains(&m) {
                    order.push(m);
                }
            }
        }
        let mut due: Vec<Vec<&Constraint>> = vec![Vec::new(); order.len()];
        for c in cons
            .iter()
            .filter(|c| dsu.find(c.demanded) == dsu.find(group[0]))
        {
            let last = std::iter::once(c.demanded)
                .chain(c.interferers.iter().copied())
                .map(|m| order.iter().position(|&o| o == m).expect("ordered"))
                .max()
                .expect("nonempty");
            due[last].push(c);
        }
        let mut comp = Component {
            field: &field,
            order,
            due,
            points: points.clone(),
            nodes: 0,
        };
        let found = comp.search(0, 0, &mut assigned);
        nodes += comp.nodes;
        if !found {
            exists = false;
            break;
        }
    }

    let witness = exists.then(|| {
        let f = FieldPrime::new(q).expect("supported fields are prime");
        let vectors = assigned
            .iter()
            .map(|v| VectorGF::from(v[..length].iter().map(|&x| x as u64).collect::<Vec<_>>()))
            .collect();
        let code = ScalarLinearCode::new(f, vectors).expect("search assigns nonzero vectors");
        debug_assert!(verify(p, &code).expect("shapes match").ok);
        code
    });
    Ok(SearchOutcome {
        exists,
        witness,
        nodes_explored: nodes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthTrial {
    pub length: usize,
    pub exists: bool,
    pub nodes_explored: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldResult {
    pub q: u64,
    pub trials: Vec<LengthTrial>,
    pub min_length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ScalarLinearCode>,
}

/// Tries `L = 1, 2, ...` up to `max_length` and stops at the first success.
pub fn min_length(
    p: &IndexCodingProblem,
    q: u64,
    max_length: usize,
) -> Result<FieldResult, OracleError> {
    check_caps(p, q, max_length.max(1))?;
    let mut trials = Vec::new();
    for length in 1..=max_length {
        let out = exists_code(p, q, length)?;
        trials.push(LengthTrial {
            length,
            exists: out.exists,
            nodes_explored: out.nodes_explored,
        });
        if out.exists {
            return Ok(FieldResult {
                q,
                trials,
                min_length: Some(length),
                witness: out.witness,
            });
        }
    }
    Ok(FieldResult {
        q,
        trials,
        min_length: None,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub max_length: usize,
    pub fields: Vec<FieldResult>,
    /// Set when a combinatorial obstruction rules out length 3 over every
    /// field, not only the tested ones.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unconditional_bound: Option<String>,
    pub caveat: String,
}

pub fn run(
    p: &IndexCodingProblem,
    fields: &[u64],
    max_length: usize,
) -> Result<OracleResult, OracleError> {
    let fields = fields
        .iter()
        .map(|&q| min_length(p, q, max_length))
        .collect::<Result<Vec<_>, _>>()?;
    let verdict = check_rate_third(p);
    let unconditional_bound = verdict
        .is_infeasible()
        .then(|| format!("length >= 4 over every field: {}", verdict.describe()));
    let tested: Vec<String> = fields.iter().map(|f| f.q.to_string()).collect();
    let caveat = format!(
        "lengths are minimal over the tested fields {{{}}} only; larger fields may admit shorter codes",
        tested.join(",")
    );
    Ok(OracleResult {
        max_length,
        fields,
        unconditional_bound,
        caveat,
    })
}

impl OracleResult {
    /// `"min length: 4 (q=2), 4 (q=3)"`.
    pub fn summary(&self) -> String {
        let parts: Vec<String> = self
            .fields
            .iter()
            .map(|f| match f.min_length {
                Some(l) => format!("{l} (q={})", f.q),
                None => format!("> {} (q={})", self.max_length, f.q),
            })
            .collect();
        format!("min length: {}", parts.join(", "))
    }

    pub fn to_text(&self) -> String {
        let mut out = self.summary();
        out.push('\n');
        for f in &self.fields {
            for t in &f.trials {
                out += &format!(
                    "  q={} L={}: {} ({} nodes)\n",
                    f.q,
                    t.length,
                    if t.exists { "code found" } else { "none" },
                    t.nodes_explored
                );
            }
        }
        if let Some(b) = &self.unconditional_bound {
            out += &format!("{b}\n");
        }
        out += &format!("note: {}\n", self.caveat);
        out
    }

    pub fn min_over_fields(&self) -> Option<usize> {
        self.fields.iter().filter_map(|f| f.min_length).min()
    }
}

/// One conjecture-probe observation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeRecord {
    /// `(q, exists length <= 3)` in the order tried; stops at the first yes.
    pub fields_tried: Vec<(u64, bool)>,
    pub within_three: bool,
}

/// Looks for a length-3 (or shorter) code over each field in turn.
pub fn probe_length_three(
    p: &IndexCodingProblem,
    fields: &[u64],
) -> Result<ProbeRecord, OracleError> {
    let mut fields_tried = Vec::new();
    for &q in fields {
        let found = exists_code(p, q, 3)?.exists;
        fields_tried.push((q, found));
        if found {
            return Ok(ProbeRecord {
                fields_tried,
                within_three: true,
            });
        }
    }
    Ok(ProbeRecord {
        fields_tried,
        within_three: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::problem::random_problem;

    #[test]
    fn projective_points_counts() {
        for (q, l) in [(2u32, 3usize), (3, 3), (5, 2), (2, 4)] {
            let f = Field::new(q, l);
            let expect = ((q as usize).pow(l as u32) - 1) / (q as usize - 1);
            assert_eq!(f.points_within(l).len(), expect);
        }
    }

    #[test]
    fn ex_inf_needs_four() {
        let p = fixtures::ex_inf();
        assert!(!exists_code(&p, 2, 3).unwrap().exists);
        let out = exists_code(&p, 2, 4).unwrap();
        assert!(out.exists);
        assert!(verify(&p, out.witness.as_ref().unwrap()).unwrap().ok);
        for q in [2, 3] {
            assert_eq!(min_length(&p, q, 4).unwrap().min_length, Some(4));
        }
    }

    #[test]
    fn conflict_free_length_one() {
        let p = IndexCodingProblem::single_unicast(&[&[], &[], &[]]).unwrap();
        for q in SUPPORTED_FIELDS {
            assert!(exists_code(&p, q, 1).unwrap().exists);
        }
    }

    #[test]
    fn fixture_min_lengths() {
        let r = min_length(&fixtures::ex_feas(), 2, 4).unwrap();
        assert_eq!(r.min_length, Some(3));
        let w = r.witness.unwrap();
        assert!(verify(&fixtures::ex_feas(), &w)
            .unwrap()
            .type2_rank_check_passes());
        for q in [2, 3] {
            assert_eq!(
                min_length(&fixtures::ex1b(), q, 4).unwrap().min_length,
                Some(4)
            );
            assert_eq!(
                min_length(&fixtures::ex1a(), q, 4).unwrap().min_length,
                Some(3)
            );
        }
    }

    #[test]
    fn caps() {
        let p = fixtures::ex_inf();
        assert_eq!(
            exists_code(&p, 7, 2).unwrap_err(),
            OracleError::UnsupportedField(7)
        );
        assert_eq!(
            exists_code(&p, 4, 2).unwrap_err(),
            OracleError::UnsupportedField(4)
        );
        assert!(matches!(
            exists_code(&p, 2, 5),
            Err(OracleError::UnsupportedLength { .. })
        ));
        assert!(matches!(
            exists_code(&p, 2, 0),
            Err(OracleError::UnsupportedLength { .. })
        ));
        let big = random_problem(11, 0.5, true, 1);
        assert!(matches!(
            exists_code(&big, 2, 2),
            Err(OracleError::TooManyMessages { n: 11, cap: 10 })
        ));
    }

    #[test]
    fn summary_text() {
        let r = run(&fixtures::ex_inf(), &[2, 3], 4).unwrap();
        assert_eq!(r.summary(), "min length: 4 (q=2), 4 (q=3)");
        assert!(r.unconditional_bound.is_some());
        let r = run(&fixtures::ex_inf(), &[2], 3).unwrap();
        assert_eq!(r.summary(), "min length: > 3 (q=2)");
    }

    /// Plain enumeration of every assignment of nonzero vectors.
    fn brute_force_exists(p: &IndexCodingProblem, q: u64, length: usize) -> bool {
        let f = FieldPrime::new(q).unwrap();
        let total = q.pow(length as u32);
        let vecs: Vec<VectorGF> = (1..total)
            .map(|mut x| {
                VectorGF::from(
                    (0..length)
                        .map(|_| {
                            let d = x % q;
                            x /= q;
                            d
                        })
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        let n = p.n();
        let mut idx = vec![0usize; n];
        loop {
            let c =
                ScalarLinearCode::new(f, idx.iter().map(|&i| vecs[i].clone()).collect()).unwrap();
            if verify(p, &c).unwrap().ok {
                return true;
            }
            let mut pos = 0;
            loop {
                if pos == n {
                    return false;
                }
                idx[pos] += 1;
                if idx[pos] < vecs.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn agrees_with_brute_force() {
        for seed in 0..60 {
            let n = 2 + (seed % 4) as usize;
            let p = random_problem(n, 0.35, seed % 2 == 0, seed);
            for (q, l) in [(2, 1), (2, 2), (3, 2), (2, 3)] {
                let fast = exists_code(&p, q, l).unwrap();
                assert_eq!(
                    fast.exists,
                    brute_force_exists(&p, q, l),
                    "seed {seed} q {q} L {l}"
                );
                if let Some(w) = fast.witness {
                    assert!(verify(&p, &w).unwrap().ok);
                }
            }
        }
    }

    #[test]
    fn monotone_in_length() {
        for seed in 0..40 {
            let p = random_problem(5, 0.3, false, 100 + seed);
            let mut prev = false;
            for l in 1..=4 {
                let now = exists_code(&p, 2, l).unwrap().exists;
                assert!(!prev || now, "seed {seed}");
                prev = now;
            }
        }
    }
}
