//! Generator/relator presentations of tame pro-p groups and their matrix
//! realizations.
//!
//! For a set of primes all congruent to 1 mod p, the group has a presentation
//! with one generator `tau_i` (inertia at `q_i`) and one relator
//!
//! ```text
//! r_i = tau_i^(q_i - 1) * [tau_i^-1, sigma_i^-1]
//! ```
//!
//! per prime, where `sigma_i` (a Frobenius lift) satisfies
//! `sigma_i = prod_{j != i} tau_j^(L_ij)` modulo the Frattini subgroup and
//! `[x, y] = x^-1 y^-1 x y`. A matrix assignment sends each generator to an
//! invertible matrix over truncated Z_p; evaluating the relators measures how
//! far the assignment is from a representation.
//!
//! The mod-p^3 linearization: writing `tau_i = 1 + p A_i` with trace-zero
//! `A_i`, the relator reduces to
//!
//! ```text
//! r_i = 1 + p^2 (c_i A_i + sum_{j != i} ell_ij [A_i, A_j])  mod p^3
//! ```
//!
//! with `c_i = (q_i - 1)/p`. [`linearized_residual`] computes the right-hand
//! coefficient; [`KochPresentation::relator_eval`] computes the left side, so
//! the two routes check each other.

use crate::linkdata::{LinkError, LinkTable, RootChoice, TamePrimeSet};
use crate::padic::{hensel_sqrt, is_prime_u64, PadicError, PadicInt};
use crate::pmatrix::{MatrixError, OmegaLevel, PMatrix};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KochError {
    #[error("q = {q} is not 1 mod p = {p}, so it contributes no generator")]
    PrimeNotOneModP { q: u64, p: u64 },
    #[error("congruence requirement violated at q = {q}: need q = 1 mod {p} and q != 1 mod {p}^2")]
    BadCongruence { q: u64, p: u64 },
    #[error(
        "matrix is not in the first special congruence subgroup of 2x2 matrices at precision >= 2"
    )]
    NotInSL21,
    #[error("trace {trace} is not 0 mod {p}")]
    NotTraceZero { trace: u64, p: u64 },
    #[error("expected {expected} matrices, found {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("mixed p contexts: {left} vs {right}")]
    MixedPrimes { left: u64, right: u64 },
    #[error("an empty prime set has no presentation")]
    EmptySet,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Link(#[from] LinkError),
}

/// A 2x2 trace-zero matrix over F_p, the target of the Frattini-quotient map
/// on the first special congruence subgroup. Entries are stored reduced,
/// row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceZeroMat {
    p: u64,
    entries: [u64; 4],
}

impl TraceZeroMat {
    pub fn new(p: u64, entries: [u64; 4]) -> Result<Self, KochError> {
        if p == 2 || !is_prime_u64(p) {
            return Err(KochError::Link(LinkError::NotOddPrime(p)));
        }
        let entries = entries.map(|e| e % p);
        let trace = (entries[0] + entries[3]) % p;
        if trace != 0 {
            return Err(KochError::NotTraceZero { trace, p });
        }
        Ok(TraceZeroMat { p, entries })
    }

    /// Builds the matrix from its free coordinates `(a, b, c)`; the last
    /// entry is forced to `-a`.
    pub fn from_upper(p: u64, a: u64, b: u64, c: u64) -> Self {
        let a = a % p;
        Self::new(p, [a, b % p, c % p, (p - a) % p]).expect("trace is zero by construction")
    }

    pub fn zero(p: u64) -> Self {
        Self::from_upper(p, 0, 0, 0)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn entries(&self) -> [u64; 4] {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    fn check_p(&self, other: &Self) -> Result<(), KochError> {
        if self.p != other.p {
            return Err(KochError::MixedPrimes {
                left: self.p,
                right: other.p,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, KochError> {
        self.check_p(other)?;
        let mut entries = [0u64; 4];
        for (i, e) in entries.iter_mut().enumerate() {
            *e = (self.entries[i] + other.entries[i]) % self.p;
        }
        Ok(TraceZeroMat { p: self.p, entries })
    }

    pub fn scalar(&self, k: u64) -> Self {
        let k = k % self.p;
        TraceZeroMat {
            p: self.p,
            entries: self.entries.map(|e| e * k % self.p),
        }
    }

    /// The Lie bracket `xy - yx`, again trace-zero.
    pub fn bracket(x: &Self, y: &Self) -> Result<Self, KochError> {
        x.check_p(y)?;
        let p = x.p;
        let mul = |l: &[u64; 4], r: &[u64; 4]| -> [u64; 4] {
            [
                (l[0] * r[0] + l[1] * r[2]) % p,
                (l[0] * r[1] + l[1] * r[3]) % p,
                (l[2] * r[0] + l[3] * r[2]) % p,
                (l[2] * r[1] + l[3] * r[3]) % p,
            ]
        };
        let xy = mul(&x.entries, &y.entries);
        let yx = mul(&y.entries, &x.entries);
        let mut entries = [0u64; 4];
        for (i, e) in entries.iter_mut().enumerate() {
            *e = (xy[i] + p - yx[i]) % p;
        }
        Ok(TraceZeroMat { p, entries })
    }

    /// The unipotent matrix `1 + p^digit * A` over `(p, precision)`.
    pub fn unipotent_lift(&self, digit: u32, precision: u32) -> Result<PMatrix, KochError> {
        let shift = BigUint::from(self.p).pow(digit);
        let mut entries = Vec::with_capacity(4);
        for (idx, &e) in self.entries.iter().enumerate() {
            let diag: u32 = if idx == 0 || idx == 3 { 1 } else { 0 };
            let v = BigUint::from(diag) + &shift * e;
            entries.push(PadicInt::new(self.p, precision, v)?);
        }
        Ok(PMatrix::new(self.p, precision, 2, entries)?)
    }
}

/// Image of a matrix `g = 1 + pA` in the Frattini quotient of the first
/// special congruence subgroup: the reduction of `A` mod p. Requires a 2x2
/// matrix at precision >= 2 with `g = 1 mod p` and determinant exactly 1.
pub fn frattini_image(g: &PMatrix) -> Result<TraceZeroMat, KochError> {
    if g.size() != 2 || g.precision() < 2 || !g.congruence_level_test(1, true) {
        return Err(KochError::NotInSL21);
    }
    let p = g.prime();
    let one = PadicInt::one(p, g.precision())?;
    let mut entries = [0u64; 4];
    for i in 0..2 {
        for j in 0..2 {
            let diff = if i == j {
                g.entry(i, j).sub(&one)?
            } else {
                g.entry(i, j).clone()
            };
            // diff is divisible by p because g = 1 mod p.
            let shifted = diff.residue() / p;
            entries[i * 2 + j] = (shifted % p).to_u64().expect("reduced below p");
        }
    }
    // det(1 + pA) = 1 forces tr(A) = 0 mod p whenever the precision is >= 2.
    TraceZeroMat::new(p, entries).map_err(|_| KochError::NotInSL21)
}

/// Dimension of the F_p-span of the given trace-zero matrices, in `[0, 3]`.
/// All inputs must share one p.
pub fn span_rank(mats: &[TraceZeroMat]) -> usize {
    let Some(first) = mats.first() else {
        return 0;
    };
    let p = first.p();
    let mut rows: Vec<[u64; 3]> = mats
        .iter()
        .map(|m| {
            assert_eq!(m.p(), p, "mixed p contexts");
            let e = m.entries();
            [e[0], e[1], e[2]]
        })
        .collect();
    let inv = |x: u64| crate::padic::mod_pow_u64(x, p - 2, p);
    let mut rank = 0usize;
    for col in 0..3 {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let scale = inv(rows[rank][col]);
        for x in rows[rank].iter_mut() {
            *x = *x * scale % p;
        }
        let pivot_row = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for (cell, pv) in row.iter_mut().zip(pivot_row) {
                *cell = (*cell + (p - factor) * pv) % p;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Matrices assigned to the generators: one inertia image `tau_i` and one
/// Frobenius image `sigma_i` per prime, all invertible and in one context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixAssignment {
    tau: Vec<PMatrix>,
    sigma: Vec<PMatrix>,
}

impl MatrixAssignment {
    pub fn new(tau: Vec<PMatrix>, sigma: Vec<PMatrix>) -> Result<Self, KochError> {
        if tau.is_empty() {
            return Err(KochError::EmptySet);
        }
        if tau.len() != sigma.len() {
            return Err(KochError::CountMismatch {
                expected: tau.len(),
                found: sigma.len(),
            });
        }
        let probe = &tau[0];
        for m in tau.iter().chain(sigma.iter()) {
            if m.prime() != probe.prime() {
                return Err(KochError::MixedPrimes {
                    left: probe.prime(),
                    right: m.prime(),
                });
            }
            if m.precision() != probe.precision() || m.size() != probe.size() {
                return Err(KochError::Matrix(MatrixError::SizeMismatch {
                    left: probe.size(),
                    right: m.size(),
                }));
            }
            if !m.is_invertible() {
                return Err(KochError::Matrix(MatrixError::NonInvertible));
            }
        }
        Ok(MatrixAssignment { tau, sigma })
    }

    pub fn d(&self) -> usize {
        self.tau.len()
    }

    pub fn tau(&self, i: usize) -> &PMatrix {
        &self.tau[i]
    }

    pub fn sigma(&self, i: usize) -> &PMatrix {
        &self.sigma[i]
    }
}

/// Outcome of evaluating one relator under an assignment. `residual` is the
/// omega level of the relator value; `passed` means it was the identity to
/// full precision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelatorCheck {
    pub index: usize,
    pub q: u64,
    pub passed: bool,
    pub residual: OmegaLevel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationCheck {
    pub passed: bool,
    pub relators: Vec<RelatorCheck>,
}

/// Presentation data for the maximal pro-p group unramified outside a set of
/// primes all congruent to 1 mod p: the primes, their link numbers, and the
/// relator shapes.
#[derive(Debug, Clone)]
pub struct KochPresentation {
    set: TamePrimeSet,
    link: LinkTable,
}

impl KochPresentation {
    pub fn new(set: TamePrimeSet) -> Result<Self, KochError> {
        Self::with_choice(set, RootChoice::Smallest)
    }

    pub fn with_choice(set: TamePrimeSet, choice: RootChoice) -> Result<Self, KochError> {
        if set.is_empty() {
            return Err(KochError::EmptySet);
        }
        if let Some(&q) = set.primes().iter().find(|&&q| q % set.p() != 1) {
            return Err(KochError::PrimeNotOneModP { q, p: set.p() });
        }
        let link = LinkTable::compute_with_choice(&set, choice);
        Ok(KochPresentation { set, link })
    }

    pub fn set(&self) -> &TamePrimeSet {
        &self.set
    }

    pub fn link(&self) -> &LinkTable {
        &self.link
    }

    pub fn d(&self) -> usize {
        self.set.len()
    }

    /// `r_i = tau_i^(q_i - 1) [tau_i^-1, sigma_i^-1]` evaluated in the matrix
    /// group.
    pub fn relator_eval(&self, assign: &MatrixAssignment, i: usize) -> Result<PMatrix, KochError> {
        if assign.d() != self.d() {
            return Err(KochError::CountMismatch {
                expected: self.d(),
                found: assign.d(),
            });
        }
        let t = assign.tau(i);
        let s = assign.sigma(i);
        let comm = t.inv()?.commutator(&s.inv()?)?;
        Ok(t.pow_u64(self.set.primes()[i] - 1).mul(&comm)?)
    }

    /// Completes inertia images to a full assignment using the linked
    /// Frobenius shape `sigma_i = prod_{j != i} tau_j^(L_ij)`, factors taken
    /// in ascending j.
    pub fn assignment_from_taus(&self, taus: Vec<PMatrix>) -> Result<MatrixAssignment, KochError> {
        if taus.len() != self.d() {
            return Err(KochError::CountMismatch {
                expected: self.d(),
                found: taus.len(),
            });
        }
        let probe = &taus[0];
        let mut sigmas = Vec::with_capacity(self.d());
        for i in 0..self.d() {
            let mut acc = PMatrix::identity(probe.prime(), probe.precision(), probe.size())?;
            for (j, tau_j) in taus.iter().enumerate() {
                if j == i {
                    continue;
                }
                let lij = self.link.l(i, j).expect("off-diagonal entry");
                acc = acc.mul(&tau_j.pow_u64(lij))?;
            }
            sigmas.push(acc);
        }
        MatrixAssignment::new(taus, sigmas)
    }

    /// Evaluates every relator and reports which vanish.
    pub fn verify(&self, assign: &MatrixAssignment) -> Result<PresentationCheck, KochError> {
        let mut relators = Vec::with_capacity(self.d());
        for i in 0..self.d() {
            let value = self.relator_eval(assign, i)?;
            relators.push(RelatorCheck {
                index: i,
                q: self.set.primes()[i],
                passed: value.is_identity(),
                residual: value.omega(),
            });
        }
        Ok(PresentationCheck {
            passed: relators.iter().all(|r| r.passed),
            relators,
        })
    }

    /// See [`linearized_residual`].
    pub fn linearized_residual(
        &self,
        mats: &[TraceZeroMat],
    ) -> Result<Vec<TraceZeroMat>, KochError> {
        linearized_residual(&self.link, mats)
    }
}

/// The single-prime assignment that satisfies the relator exactly:
/// `tau = [[1, p], [0, 1]]` and `sigma = diag(r, r^-1)` where `r` is the
/// square root of q lifted from 1. Conjugation by `sigma` raises `tau` to
/// the power `r^2 = q`, which is precisely what the relator demands of a
/// Frobenius at q.
pub fn local_witness(p: u64, q: u64, precision: u32) -> Result<MatrixAssignment, KochError> {
    let r = hensel_sqrt(q, p, precision)?;
    let tau = PMatrix::from_i64_rows(p, precision, &[vec![1, p as i64], vec![0, 1]])?;
    let zero = PadicInt::zero(p, precision)?;
    let sigma = PMatrix::new(
        p,
        precision,
        2,
        vec![r.clone(), zero.clone(), zero, r.inv()?],
    )?;
    MatrixAssignment::new(vec![tau], vec![sigma])
}

/// Right-hand side of the mod-p^3 relation: for trace-zero `A_i`,
///
/// ```text
/// residual_i = c_i A_i + sum_{j != i} ell_ij (A_i A_j - A_j A_i)  over F_p
/// ```
///
/// Requires every prime of the table to be 1 mod p but not 1 mod p^2, so
/// that `c_i` is well defined mod p and the generators `1 + pA_i` have the
/// right order profile.
pub fn linearized_residual(
    link: &LinkTable,
    mats: &[TraceZeroMat],
) -> Result<Vec<TraceZeroMat>, KochError> {
    if link.len() != mats.len() {
        return Err(KochError::CountMismatch {
            expected: link.len(),
            found: mats.len(),
        });
    }
    let p = link.p();
    for m in mats {
        if m.p() != p {
            return Err(KochError::MixedPrimes {
                left: p,
                right: m.p(),
            });
        }
    }
    for (idx, &q) in link.primes().iter().enumerate() {
        if !link.is_cong1_mod_p(idx) || link.is_cong1_mod_p2(idx) {
            return Err(KochError::BadCongruence { q, p });
        }
    }
    let d = mats.len();
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        let ci = link.c(i).expect("c is defined when q = 1 mod p");
        let mut acc = mats[i].scalar(ci % p);
        for (j, mat_j) in mats.iter().enumerate() {
            if j == i {
                continue;
            }
            let ell = link.ell(i, j).expect("off-diagonal entry");
            let br = TraceZeroMat::bracket(&mats[i], mat_j)?;
            acc = acc.add(&br.scalar(ell))?;
        }
        out.push(acc);
    }
    Ok(out)
}
