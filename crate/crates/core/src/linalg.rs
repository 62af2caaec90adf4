//! Prime-field arithmetic and the span/rank primitives used by feasibility
//! checks, code construction and the exhaustive oracle.
//!
//! Elements of GF(p) are stored as `u64` in `[0, p)`. Moduli are capped below
//! 2^32 so a product of two reduced elements always fits in 64 bits.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of draws [`random_subspace_basis`] makes before giving up.
pub const SUBSPACE_RETRY_CAP: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {0} too large (must be below 2^32)")]
    ModulusTooLarge(u64),
    #[error("vector length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("entry {entry} not reduced modulo {p}")]
    EntryOutOfRange { entry: u64, p: u64 },
    #[error("vectors must have length at least 1")]
    EmptyVector,
    #[error("subspace dimension {d} invalid for length {length}")]
    InvalidDimension { d: usize, length: usize },
    #[error("no rank-{d} draw after {attempts} attempts")]
    RetryCapExceeded { d: usize, attempts: usize },
}

/// The field GF(p) for a prime `p < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct FieldPrime(u64);

impl FieldPrime {
    /// 2^31 - 1.
    pub const DEFAULT: FieldPrime = FieldPrime(2_147_483_647);

    pub fn new(p: u64) -> Result<Self, LinalgError> {
        if p >= 1 << 32 {
            return Err(LinalgError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(FieldPrime(p))
    }

    pub fn p(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Panics on zero.
    pub fn inv(self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.0), "zero has no inverse");
        self.pow(a, self.0 - 2)
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn reduce_i64(self, a: i64) -> u64 {
        a.rem_euclid(self.0 as i64) as u64
    }
}

impl TryFrom<u64> for FieldPrime {
    type Error = LinalgError;

    fn try_from(p: u64) -> Result<Self, Self::Error> {
        FieldPrime::new(p)
    }
}

impl From<FieldPrime> for u64 {
    fn from(f: FieldPrime) -> u64 {
        f.0
    }
}

impl fmt::Display for FieldPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A length-`L` vector over GF(p); entries are assumed reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VectorGF(Vec<u64>);

impl VectorGF {
    /// Checks length and that every entry is reduced modulo `f`.
    pub fn new(entries: Vec<u64>, f: FieldPrime) -> Result<Self, LinalgError> {
        if entries.is_empty() {
            return Err(LinalgError::EmptyVector);
        }
        if let Some(&entry) = entries.iter().find(|&&e| e >= f.p()) {
            return Err(LinalgError::EntryOutOfRange { entry, p: f.p() });
        }
        Ok(VectorGF(entries))
    }

    pub fn zero(length: usize) -> Self {
        VectorGF(vec![0; length])
    }

    /// `e_i`, 0-based.
    pub fn unit(length: usize, i: usize) -> Self {
        let mut v = vec![0; length];
        v[i] = 1;
        VectorGF(v)
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn scale(&self, c: u64, f: FieldPrime) -> Self {
        VectorGF(self.0.iter().map(|&e| f.mul(e, c)).collect())
    }

    pub fn add(&self, other: &Self, f: FieldPrime) -> Self {
        VectorGF(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self, f: FieldPrime) -> Self {
        VectorGF(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        )
    }

    pub fn dot(&self, other: &Self, f: FieldPrime) -> u64 {
        self.0
            .iter()
            .zip(&other.0)
            .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }

    /// Zero-extends (or truncates) to `length` coordinates.
    pub fn resized(&self, length: usize) -> Self {
        let mut v = self.0.clone();
        v.resize(length, 0);
        VectorGF(v)
    }
}

impl From<Vec<u64>> for VectorGF {
    /// Unchecked; prefer [`VectorGF::new`] for untrusted input.
    fn from(v: Vec<u64>) -> Self {
        VectorGF(v)
    }
}

/// Incremental row-reduced echelon basis of a subspace of GF(p)^L.
///
/// Every stored row has a leading 1 at its pivot column and zeros in every
/// other row's pivot column, so [`Echelon::reduce`] is the linear projection
/// along the span onto the non-pivot coordinates.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: FieldPrime,
    length: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(length: usize, field: FieldPrime) -> Self {
        Echelon {
            field,
            length,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn length(&self) -> usize {
        self.length
    }

    fn check(&self, v: &VectorGF) -> Result<(), LinalgError> {
        if v.len() != self.length {
            return Err(LinalgError::LengthMismatch {
                expected: self.length,
                found: v.len(),
            });
        }
        Ok(())
    }

    fn reduce_raw(&self, v: &[u64]) -> Vec<u64> {
        let f = self.field;
        let mut out = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = out[pc];
            if c != 0 {
                for (o, &r) in out.iter_mut().zip(row) {
                    *o = f.sub(*o, f.mul(c, r));
                }
            }
        }
        out
    }

    /// Residue of `v` after eliminating the span. Zero iff `v` is in the span.
    pub fn reduce(&self, v: &VectorGF) -> Result<VectorGF, LinalgError> {
        self.check(v)?;
        Ok(VectorGF(self.reduce_raw(&v.0)))
    }

    pub fn contains(&self, v: &VectorGF) -> Result<bool, LinalgError> {
        Ok(self.reduce(v)?.is_zero())
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &VectorGF) -> Result<bool, LinalgError> {
        self.check(v)?;
        let f = self.field;
        let mut r = self.reduce_raw(&v.0);
        let Some(pc) = r.iter().position(|&e| e != 0) else {
            return Ok(false);
        };
        let inv = f.inv(r[pc]);
        for e in r.iter_mut() {
            *e = f.mul(*e, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                for (x, &y) in row.iter_mut().zip(&r) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(pc);
        Ok(true)
    }

    pub fn rows(&self) -> impl Iterator<Item = VectorGF> + '_ {
        self.rows.iter().map(|r| VectorGF(r.clone()))
    }
}

fn common_length(vs: &[VectorGF]) -> Result<Option<usize>, LinalgError> {
    let Some(first) = vs.first() else {
        return Ok(None);
    };
    for v in vs {
        if v.len() != first.len() {
            return Err(LinalgError::LengthMismatch {
                expected: first.len(),
                found: v.len(),
            });
        }
    }
    Ok(Some(first.len()))
}

/// Rank over GF(p); the empty list has rank 0.
pub fn rank(vs: &[VectorGF], f: FieldPrime) -> Result<usize, LinalgError> {
    let Some(length) = common_length(vs)? else {
        return Ok(0);
    };
    let mut ech = Echelon::new(length, f);
    for v in vs {
        ech.insert(v)?;
    }
    Ok(ech.rank())
}

/// Whether `v` lies in the span of `vs` (the span of nothing is `{0}`).
pub fn in_span(v: &VectorGF, vs: &[VectorGF], f: FieldPrime) -> Result<bool, LinalgError> {
    let mut ech = Echelon::new(v.len(), f);
    for w in vs {
        ech.insert(w)?;
    }
    ech.contains(v)
}

/// An independent list of vectors and the subspace they span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    length: usize,
    basis: Vec<VectorGF>,
}

impl SubspaceBasis {
    /// Greedily keeps the vectors of `vs` that raise the rank.
    pub fn span_of(length: usize, vs: &[VectorGF], f: FieldPrime) -> Result<Self, LinalgError> {
        let mut ech = Echelon::new(length, f);
        let mut basis = Vec::new();
        for v in vs {
            if ech.insert(v)? {
                basis.push(v.clone());
            }
        }
        Ok(SubspaceBasis { length, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn basis(&self) -> &[VectorGF] {
        &self.basis
    }

    /// `Σ coeffs[i]·basis[i]`.
    pub fn combine(&self, coeffs: &[u64], f: FieldPrime) -> VectorGF {
        assert_eq!(coeffs.len(), self.basis.len());
        self.basis
            .iter()
            .zip(coeffs)
            .fold(VectorGF::zero(self.length), |acc, (b, &c)| {
                acc.add(&b.scale(c, f), f)
            })
    }
}

/// `ChaCha8Rng::seed_from_u64(seed)`, the generator behind every seeded
/// operation in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `length` entries, each `rng.gen_range(0..p)`.
pub fn random_vector<R: Rng + ?Sized>(length: usize, f: FieldPrime, rng: &mut R) -> VectorGF {
    VectorGF((0..length).map(|_| rng.gen_range(0..f.p())).collect())
}

/// Draws `d` random vectors of length `length`, retrying until they are
/// independent (at most [`SUBSPACE_RETRY_CAP`] times).
pub fn random_subspace_basis<R: Rng + ?Sized>(
    length: usize,
    d: usize,
    f: FieldPrime,
    rng: &mut R,
) -> Result<SubspaceBasis, LinalgError> {
    if d == 0 || d > length {
        return Err(LinalgError::InvalidDimension { d, length });
    }
    for _ in 0..SUBSPACE_RETRY_CAP {
        let draws: Vec<VectorGF> = (0..d).map(|_| random_vector(length, f, rng)).collect();
        if rank(&draws, f)? == d {
            return Ok(SubspaceBasis {
                length,
                basis: draws,
            });
        }
    }
    Err(LinalgError::RetryCapExceeded {
        d,
        attempts: SUBSPACE_RETRY_CAP,
    })
}
