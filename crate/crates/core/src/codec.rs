//! Scalar linear index codes: one length-`L` vector per message, broadcast
//! codeword `Σ V_i·W_i`.
//!
//! A receiver decoding `W_k` subtracts its side information and is left with
//! `V_k·W_k` plus interference from `Interf_k(j)`; it can solve for `W_k`
//! exactly when `V_k` lies outside the span of the interfering vectors.
//! [`verify`] checks that condition everywhere, the constructors draw random
//! assignments following the alignment structure until one verifies, and
//! [`encode`]/[`decode_all`] run the broadcast end to end.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::feasibility::{check_rate_half, check_rate_third, FeasibleBasis, RateThirdVerdict};
use crate::linalg::{
    random_subspace_basis, random_vector, rank, Echelon, FieldPrime, LinalgError, VectorGF,
};
use crate::problem::{
    fmt_set, restrict_problem, IndexCodingProblem, MessageId, MessageSet, ProblemError, ReceiverId,
    Restriction,
};
use crate::structure::{alignment_sets, Classification, Derived};

/// Redraws allowed by the constructors unless the caller says otherwise.
pub const DEFAULT_MAX_ATTEMPTS: usize = 8;

#[derive(Debug, Error)]
pub enum CodecError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("malformed code file: {0}")]
    Malformed(String),
    #[error("code has {found} vectors, problem has {expected} messages")]
    MessageCountMismatch { expected: usize, found: usize },
    #[error("message {0} is assigned the zero vector")]
    ZeroVector(MessageId),
    #[error("rate {rate} construction precondition unmet: {reason}")]
    PreconditionUnmet { rate: &'static str, reason: String },
    #[error("no verified code after {attempts} attempts (field too small?)")]
    AttemptsExhausted { attempts: usize },
    #[error("code does not resolve all conflicts ({violations} violations)")]
    Unverified { violations: usize },
    #[error("expected {expected} symbols, got {found}")]
    SymbolCount { expected: usize, found: usize },
    #[error("symbol {symbol} not reduced modulo {p}")]
    SymbolOutOfRange { symbol: u64, p: u64 },
    #[error("receiver {receiver} lacks side-information symbol for message {message}")]
    MissingSideInfo {
        receiver: ReceiverId,
        message: MessageId,
    },
    #[error("codeword inconsistent with the code at receiver {0}")]
    InconsistentCodeword(ReceiverId),
    #[error("vectors of {set} span {rank} dimensions, at most 2 allowed")]
    SpanTooLarge { set: String, rank: usize },
}

/// Length-`L` vector per message over one prime field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CodeFile", into = "CodeFile")]
pub struct ScalarLinearCode {
    length: usize,
    field: FieldPrime,
    vectors: Vec<VectorGF>,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CodeFile {
    length: usize,
    prime: u64,
    vectors: Vec<Vec<u64>>,
}

impl TryFrom<CodeFile> for ScalarLinearCode {
    type Error = CodecError;

    fn try_from(file: CodeFile) -> Result<Self, CodecError> {
        let field = FieldPrime::new(file.prime)?;
        let vectors = file
            .vectors
            .into_iter()
            .map(|v| VectorGF::new(v, field))
            .collect::<Result<Vec<_>, _>>()?;
        let code = Self::new(field, vectors)?;
        if code.length != file.length {
            return Err(CodecError::Malformed(format!(
                "declared length {} but vectors have length {}",
                file.length, code.length
            )));
        }
        Ok(code)
    }
}

impl From<ScalarLinearCode> for CodeFile {
    fn from(c: ScalarLinearCode) -> Self {
        CodeFile {
            length: c.length,
            prime: c.field.p(),
            vectors: c.vectors.iter().map(|v| v.entries().to_vec()).collect(),
        }
    }
}

impl ScalarLinearCode {
    /// Rejects ragged, unreduced or zero vectors.
    pub fn new(field: FieldPrime, vectors: Vec<VectorGF>) -> Result<Self, CodecError> {
        let Some(first) = vectors.first() else {
            return Err(CodecError::Malformed("code has no vectors".into()));
        };
        let length = first.len();
        if length == 0 {
            return Err(LinalgError::EmptyVector.into());
        }
        for (idx, v) in vectors.iter().enumerate() {
            if v.len() != length {
                return Err(LinalgError::LengthMismatch {
                    expected: length,
                    found: v.len(),
                }
                .into());
            }
            if let Some(&entry) = v.entries().iter().find(|&&e| e >= field.p()) {
                return Err(LinalgError::EntryOutOfRange {
                    entry,
                    p: field.p(),
                }
                .into());
            }
            if v.is_zero() {
                return Err(CodecError::ZeroVector(MessageId::from_index(idx)));
            }
        }
        Ok(ScalarLinearCode {
            length,
            field,
            vectors,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, CodecError> {
        let file: CodeFile =
            serde_json::from_str(text).map_err(|e| CodecError::Malformed(e.to_string()))?;
        file.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("code serializes")
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn field(&self) -> FieldPrime {
        self.field
    }

    pub fn vectors(&self) -> &[VectorGF] {
        &self.vectors
    }

    pub fn vector(&self, m: MessageId) -> &VectorGF {
        &self.vectors[m.index()]
    }

    pub fn message_count(&self) -> usize {
        self.vectors.len()
    }

    fn vectors_of(&self, set: &MessageSet) -> Vec<VectorGF> {
        set.iter().map(|&m| self.vector(m).clone()).collect()
    }
}

/// Receiver `receiver` cannot separate `message` from its interference.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub receiver: ReceiverId,
    pub message: MessageId,
}

/// Dimension spanned by the vectors of one type-2 message union.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Type2Span {
    pub messages: MessageSet,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationResult {
    pub ok: bool,
    pub violations: Vec<Violation>,
    pub zero_vectors: Vec<MessageId>,
    /// Draws a constructor needed; 0 for a plain [`verify`].
    pub attempts_used: usize,
    /// Filled for length-3 codes only.
    pub type2_spans: Vec<Type2Span>,
    pub receivers_total: usize,
    pub receivers_ok: usize,
}

impl VerificationResult {
    /// A verified length-3 code must keep every type-2 union inside a plane.
    /// `false` here on a verified code would be a bug somewhere.
    pub fn type2_rank_check_passes(&self) -> bool {
        !self.ok || self.type2_spans.iter().all(|s| s.rank <= 2)
    }
}

/// Checks `V_k ∉ span{V_i : i ∈ Interf_k(j)}` for every receiver `j` and
/// every demanded `W_k`.
pub fn verify(
    p: &IndexCodingProblem,
    c: &ScalarLinearCode,
) -> Result<VerificationResult, CodecError> {
    if c.message_count() != p.n() {
        return Err(CodecError::MessageCountMismatch {
            expected: p.n(),
            found: c.message_count(),
        });
    }
    let f = c.field;
    let zero_vectors: Vec<MessageId> = p.messages().filter(|&m| c.vector(m).is_zero()).collect();
    let mut violations = Vec::new();
    let mut bad_receivers = std::collections::BTreeSet::new();
    for ev in p.interference() {
        let mut span = Echelon::new(c.length, f);
        for &i in &ev.interferers {
            span.insert(c.vector(i))?;
        }
        if span.contains(c.vector(ev.demanded))? {
            violations.push(Violation {
                receiver: ev.receiver,
                message: ev.demanded,
            });
            bad_receivers.insert(ev.receiver);
        }
    }
    let type2_spans = if c.length == 3 {
        let d = Derived::new(p);
        d.type2
            .iter()
            .map(|t| {
                Ok(Type2Span {
                    messages: t.messages.clone(),
                    rank: rank(&c.vectors_of(&t.messages), f)?,
                })
            })
            .collect::<Result<Vec<_>, LinalgError>>()?
    } else {
        Vec::new()
    };
    Ok(VerificationResult {
        ok: violations.is_empty() && zero_vectors.is_empty(),
        violations,
        zero_vectors,
        attempts_used: 0,
        type2_spans,
        receivers_total: p.receiver_count(),
        receivers_ok: p.receiver_count() - bad_receivers.len(),
    })
}

/// A verified code and the verification that accepted it.
#[derive(Clone, Debug)]
pub struct Construction {
    pub code: ScalarLinearCode,
    pub verification: VerificationResult,
}

fn redraw_until_verified<R, F>(
    p: &IndexCodingProblem,
    f: FieldPrime,
    max_attempts: usize,
    rng: &mut R,
    mut draw: F,
) -> Result<Construction, CodecError>
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> Result<Vec<VectorGF>, CodecError>,
{
    for attempt in 1..=max_attempts {
        let vectors = draw(rng)?;
        if vectors.iter().any(VectorGF::is_zero) {
            continue;
        }
        let code = ScalarLinearCode::new(f, vectors)?;
        let mut verification = verify(p, &code)?;
        if verification.ok {
            verification.attempts_used = attempt;
            return Ok(Construction { code, verification });
        }
    }
    Err(CodecError::AttemptsExhausted {
        attempts: max_attempts,
    })
}

/// Length-2 code: one random vector per alignment set, shared by its
/// members, redrawn wholesale until it verifies.
pub fn construct_rate_half<R: Rng + ?Sized>(
    p: &IndexCodingProblem,
    f: FieldPrime,
    rng: &mut R,
    max_attempts: usize,
) -> Result<Construction, CodecError> {
    let verdict = check_rate_half(p);
    if let Some(w) = verdict.internal_conflict {
        return Err(CodecError::PreconditionUnmet {
            rate: "1/2",
            reason: format!(
                "internal conflict {} inside alignment set {}",
                w.pair,
                fmt_set(&w.alignment_set)
            ),
        });
    }
    let sets = alignment_sets(p);
    redraw_until_verified(p, f, max_attempts, rng, |rng| {
        let mut vectors = vec![VectorGF::zero(2); p.n()];
        for s in &sets {
            let v = random_vector(2, f, rng);
            for &m in &s.members {
                vectors[m.index()] = v.clone();
            }
        }
        Ok(vectors)
    })
}

/// Length-3 code for problems the feasibility ladder proves rate-1/3
/// feasible.
///
/// Alignment sets are handled by classification: `Kind1` members get
/// independent random vectors, a `Kind2` triple shares one random vector, and
/// a `Type2Clean` set draws a random plane and then one random vector of that
/// plane per alignment set of the problem restricted to it. Problems that are
/// already rate-1/2 feasible get one random vector per alignment set.
pub fn construct_rate_third<R: Rng + ?Sized>(
    p: &IndexCodingProblem,
    f: FieldPrime,
    rng: &mut R,
    max_attempts: usize,
) -> Result<Construction, CodecError> {
    let verdict = check_rate_third(p);
    let basis = match &verdict {
        RateThirdVerdict::Feasible { basis } => *basis,
        other => {
            return Err(CodecError::PreconditionUnmet {
                rate: "1/3",
                reason: other.describe(),
            });
        }
    };
    let d = Derived::new(p);
    enum Plan {
        Shared(MessageSet),
        Independent(MessageSet),
        Plane(Vec<MessageSet>),
    }
    let plans: Vec<Plan> = d
        .sets
        .iter()
        .map(|s| match basis {
            FeasibleBasis::RateHalfCode => Ok(Plan::Shared(s.members.clone())),
            FeasibleBasis::AlignmentSetConstruction => match d.classify(p, s) {
                Classification::Kind1 => Ok(Plan::Independent(s.members.clone())),
                Classification::Kind2 => Ok(Plan::Shared(s.members.clone())),
                Classification::Type2Clean => {
                    let r = restrict_problem(p, &s.members)?;
                    let parts = alignment_sets(r.problem())
                        .into_iter()
                        .map(|rs| r.to_original_set(&rs.members))
                        .collect();
                    Ok(Plan::Plane(parts))
                }
                Classification::Type2Dirty | Classification::Other => {
                    unreachable!("feasible verdict admits only Kind1/Kind2/Type2Clean sets")
                }
            },
        })
        .collect::<Result<_, CodecError>>()?;

    redraw_until_verified(p, f, max_attempts, rng, |rng| {
        let mut vectors = vec![VectorGF::zero(3); p.n()];
        for plan in &plans {
            match plan {
                Plan::Independent(members) => {
                    for &m in members {
                        vectors[m.index()] = random_vector(3, f, rng);
                    }
                }
                Plan::Shared(members) => {
                    let v = random_vector(3, f, rng);
                    for &m in members {
                        vectors[m.index()] = v.clone();
                    }
                }
                Plan::Plane(parts) => {
                    let plane = random_subspace_basis(3, 2, f, rng)?;
                    for part in parts {
                        let coeffs = [rng.gen_range(0..f.p()), rng.gen_range(0..f.p())];
                        let v = plane.combine(&coeffs, f);
                        for &m in part {
                            vectors[m.index()] = v.clone();
                        }
                    }
                }
            }
        }
        Ok(vectors)
    })
}

fn check_symbols(symbols: &[u64], expected: usize, f: FieldPrime) -> Result<(), CodecError> {
    if symbols.len() != expected {
        return Err(CodecError::SymbolCount {
            expected,
            found: symbols.len(),
        });
    }
    if let Some(&symbol) = symbols.iter().find(|&&s| s >= f.p()) {
        return Err(CodecError::SymbolOutOfRange { symbol, p: f.p() });
    }
    Ok(())
}

/// `Σ V_i·W_i`. Works for any code; only decoding needs verification.
pub fn encode(
    p: &IndexCodingProblem,
    c: &ScalarLinearCode,
    payload: &[u64],
) -> Result<Vec<u64>, CodecError> {
    if c.message_count() != p.n() {
        return Err(CodecError::MessageCountMismatch {
            expected: p.n(),
            found: c.message_count(),
        });
    }
    let f = c.field;
    check_symbols(payload, p.n(), f)?;
    let mut word = VectorGF::zero(c.length);
    for (v, &w) in c.vectors.iter().zip(payload) {
        word = word.add(&v.scale(w, f), f);
    }
    Ok(word.entries().to_vec())
}

/// Per receiver, the payload symbols of its side information.
pub fn side_information(p: &IndexCodingProblem, payload: &[u64]) -> Vec<BTreeMap<MessageId, u64>> {
    p.receivers()
        .iter()
        .map(|r| {
            r.side_info()
                .iter()
                .map(|&m| (m, payload[m.index()]))
                .collect()
        })
        .collect()
}

/// Each receiver strips its side information from `codeword` and solves for
/// every demanded symbol. Refuses codes that fail [`verify`].
pub fn decode_all(
    p: &IndexCodingProblem,
    c: &ScalarLinearCode,
    codeword: &[u64],
    side: &[BTreeMap<MessageId, u64>],
) -> Result<Vec<BTreeMap<MessageId, u64>>, CodecError> {
    let v = verify(p, c)?;
    if !v.ok {
        return Err(CodecError::Unverified {
            violations: v.violations.len() + v.zero_vectors.len(),
        });
    }
    let f = c.field;
    check_symbols(codeword, c.length, f)?;
    if side.len() != p.receiver_count() {
        return Err(CodecError::SymbolCount {
            expected: p.receiver_count(),
            found: side.len(),
        });
    }
    let word = VectorGF::from(codeword.to_vec());
    let mut out = Vec::with_capacity(p.receiver_count());
    for (idx, r) in p.receivers().iter().enumerate() {
        let receiver = ReceiverId::from_index(idx);
        let mut residual = word.clone();
        for &m in r.side_info() {
            let &s = side[idx].get(&m).ok_or(CodecError::MissingSideInfo {
                receiver,
                message: m,
            })?;
            check_symbols(&[s], 1, f)?;
            residual = residual.sub(&c.vector(m).scale(s, f), f);
        }
        let mut decoded = BTreeMap::new();
        for &k in r.demands() {
            let mut span = Echelon::new(c.length, f);
            for i in p.interf(idx, k) {
                span.insert(c.vector(i))?;
            }
            let rv = span.reduce(c.vector(k))?;
            let ry = span.reduce(&residual)?;
            let pivot = rv
                .entries()
                .iter()
                .position(|&e| e != 0)
                .expect("verified: V_k outside the interference span");
            let symbol = f.mul(ry.entries()[pivot], f.inv(rv.entries()[pivot]));
            if rv.scale(symbol, f) != ry {
                return Err(CodecError::InconsistentCodeword(receiver));
            }
            decoded.insert(k, symbol);
        }
        out.push(decoded);
    }
    Ok(out)
}

/// A code for a restricted problem obtained by mapping the parent's vectors
/// through a rank-2 linear map.
#[derive(Clone, Debug)]
pub struct PlaneProjection {
    pub restriction: Restriction,
    /// The two rows of the `2 × L` map.
    pub map: [VectorGF; 2],
    pub code: ScalarLinearCode,
}

/// Restricts `p` to `subset` and maps the vectors of `subset` (which must span
/// at most two dimensions) to length 2 by a map that is injective on their
/// span.
pub fn project_to_plane(
    p: &IndexCodingProblem,
    c: &ScalarLinearCode,
    subset: &MessageSet,
) -> Result<PlaneProjection, CodecError> {
    if c.message_count() != p.n() {
        return Err(CodecError::MessageCountMismatch {
            expected: p.n(),
            found: c.message_count(),
        });
    }
    let f = c.field;
    let length = c.length;
    let restriction = restrict_problem(p, subset)?;
    let members = c.vectors_of(subset);
    let mut ech = Echelon::new(length, f);
    let mut basis: Vec<VectorGF> = Vec::new();
    for v in &members {
        if ech.insert(v)? {
            basis.push(v.clone());
        }
    }
    if basis.len() > 2 {
        return Err(CodecError::SpanTooLarge {
            set: fmt_set(subset),
            rank: basis.len(),
        });
    }
    if length < 2 {
        return Err(LinalgError::InvalidDimension { d: 2, length }.into());
    }
    for i in 0..length {
        if basis.len() == 2 {
            break;
        }
        let e = VectorGF::unit(length, i);
        if ech.insert(&e)? {
            basis.push(e);
        }
    }
    // Two coordinates on which the basis is invertible.
    let (b1, b2) = (basis[0].entries(), basis[1].entries());
    let (r, s, det) = (0..length)
        .flat_map(|r| (r + 1..length).map(move |s| (r, s)))
        .map(|(r, s)| (r, s, f.sub(f.mul(b1[r], b2[s]), f.mul(b2[r], b1[s]))))
        .find(|&(_, _, det)| det != 0)
        .expect("independent pair has a nonzero 2x2 minor");
    // M = [[b1_r, b2_r], [b1_s, b2_s]]; A = M^{-1} restricted to coordinates r, s.
    let di = f.inv(det);
    let inv = [
        [f.mul(b2[s], di), f.mul(f.neg(b2[r]), di)],
        [f.mul(f.neg(b1[s]), di), f.mul(b1[r], di)],
    ];
    let row = |k: usize| {
        let mut e = vec![0; length];
        e[r] = inv[k][0];
        e[s] = inv[k][1];
        VectorGF::from(e)
    };
    let map = [row(0), row(1)];
    let vectors = members
        .iter()
        .map(|v| VectorGF::from(vec![map[0].dot(v, f), map[1].dot(v, f)]))
        .collect();
    let code = ScalarLinearCode::new(f, vectors)?;
    Ok(PlaneProjection {
        restriction,
        map,
        code,
    })
}
