//! Finiteness and image-restriction checks driven by link data.
//!
//! Each check is packaged as a [`Finding`]: a rule id, the preconditions it
//! evaluated (with their truth values), any unverifiable assumptions the
//! conclusion depends on, and the conclusion itself. Conclusions are only
//! ever drawn from true preconditions; when a precondition fails the finding
//! reports [`Conclusion::Unknown`] rather than weakening the rule.
//!
//! Every exported predicate is invariant under the choice of primitive roots
//! used to build link tables, and [`classify`] can be re-run with a different
//! choice to confirm that on a given input.

use crate::linkdata::{LinkError, LinkTable, RootChoice, TamePrimeSet};
use crate::padic::{is_prime_u64, mod_pow_u64};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("the prime set is empty")]
    EmptySet,
    #[error("no prime in the set is 1 mod p")]
    EmptySMin,
    #[error("expected exactly {expected} primes, found {found}")]
    WrongCardinality { expected: usize, found: usize },
    #[error("congruence requirement violated at q = {q}: need q = 1 mod {p} and q != 1 mod {p}^2")]
    BadCongruence { q: u64, p: u64 },
    #[error("this check requires p > 3, got p = {0}")]
    RequiresPGreater3(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("duplicate prime {0}")]
    Duplicate(u64),
    #[error(transparent)]
    Link(#[from] LinkError),
}

/// What a rule concluded about the group (or about its continuous
/// homomorphisms into a fixed target).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Conclusion {
    /// The maximal pro-p quotient is trivial.
    TrivialGroup,
    /// The group is finite cyclic.
    FiniteCyclic,
    /// The group is finite.
    Finite,
    /// The group is infinite (generator/relation counting).
    InfiniteByGS,
    /// Continuous homomorphisms into the first principal congruence subgroup
    /// of `GL_n(Z_p)` are trivial, for every n.
    HomsToGLn1Trivial,
    /// Continuous homomorphisms into the `m0`-th principal congruence
    /// subgroup of `GL_n(Z_p)` are trivial, for every n.
    HomsToGLnM0Trivial { m0: u32 },
    /// If the group is powerful and infinite, it is the first special
    /// congruence subgroup of `SL_2(Z_p)`; the necessary link conditions for
    /// that hold.
    Sl21OnlyInfiniteOption,
    /// The image of any continuous homomorphism into `SL_2(Z_p)` has at most
    /// two elements.
    ImageAtMost2,
    /// The rule does not apply or its conditions fail to decide anything.
    Unknown,
}

/// A named predicate together with its evaluated truth value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub holds: bool,
}

fn cond(name: impl Into<String>, holds: bool) -> Condition {
    Condition {
        name: name.into(),
        holds,
    }
}

/// Result of one rule. `basis_invariant` records that the verdict does not
/// depend on the primitive roots chosen for the link tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub rule: String,
    pub preconditions: Vec<Condition>,
    pub assumptions: Vec<String>,
    pub conclusion: Conclusion,
    pub basis_invariant: bool,
    pub notes: Vec<String>,
}

mod biguint_decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The two real numbers whose quotient gives the degree cutoff, kept for
/// display; the integer `bound` itself is certified by exact arithmetic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundComponents {
    /// `254 - ln(product)`
    pub numerator: f64,
    /// `ln(60.1 / product)`
    pub denominator: f64,
}

/// Outcome of the unconditional degree bound for a set of ramified primes.
///
/// When the product of the primes is below 60.1, every number field
/// unramified outside the set (tame ramification only) has degree at most
/// `floor((254 - ln product) / ln(60.1 / product))`; in particular the tame
/// fundamental group is finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TameBoundResult {
    #[serde(with = "biguint_decimal")]
    pub product: BigUint,
    pub bounded: bool,
    pub bound: Option<u64>,
    pub components: BoundComponents,
    pub note: Option<String>,
}

/// Scaled rational bounds `lo/denom <= e^254 <= hi/denom` from the Taylor
/// series with `terms` terms. Needs `terms >= 507` so the tail is dominated
/// by a geometric series with ratio below 1/2.
fn exp254_scaled_bounds(terms: u32) -> (BigUint, BigUint, BigUint) {
    assert!(terms >= 507);
    let n = terms as u64;
    let mut fact = BigUint::one();
    for k in 2..=n {
        fact *= k;
    }
    // t_k = 254^k * n!/k!; the ratio t_k / t_{k-1} = 254/k is an exact
    // division because n!/(k-1)! carries the factor k for k <= n.
    let mut t = fact.clone();
    let mut sum = t.clone();
    for k in 1..=n {
        t = t * 254u32 / k;
        sum += &t;
    }
    let lo = sum * (n + 1);
    let hi = &lo + BigUint::from(254u32).pow(terms + 1) * 2u32;
    let denom = fact * (n + 1);
    (lo, hi, denom)
}

/// Whether `60.1^n * e^(-254) <= product^(n-1)`, decided by exact integer
/// arithmetic (no floating point enters the comparison). This is the
/// inequality whose largest solution `n` is the tame degree bound.
pub fn degree_inequality_holds(product: &BigUint, n: u64) -> bool {
    // Clear the fractions: the inequality is equivalent to
    //   product * 601^n * denom <= 10^n * product^n * lo_or_hi.
    let mut terms = 520u32;
    loop {
        let (lo, hi, denom) = exp254_scaled_bounds(terms);
        let n32 = u32::try_from(n).expect("degree bound fits in u32");
        let lhs_base = product * BigUint::from(601u32).pow(n32) * denom;
        let rhs_base = BigUint::from(10u32).pow(n32) * product.pow(n32);
        if lhs_base <= &rhs_base * lo {
            return true;
        }
        if lhs_base > rhs_base * hi {
            return false;
        }
        // The interval around e^254 straddles the comparison; tighten it.
        terms *= 2;
    }
}

/// Degree bound for tame number fields unramified outside the given primes.
pub fn tame_degree_bound(primes: &[u64]) -> Result<TameBoundResult, ClassifyError> {
    if primes.is_empty() {
        return Err(ClassifyError::EmptySet);
    }
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(ClassifyError::Duplicate(w[0]));
        }
    }
    for &q in &sorted {
        if !is_prime_u64(q) {
            return Err(ClassifyError::NotPrime(q));
        }
    }
    let product: BigUint = sorted.iter().fold(BigUint::one(), |acc, &q| acc * q);
    let p_f64 = product.to_f64().unwrap_or(f64::INFINITY);
    let components = BoundComponents {
        numerator: 254.0 - p_f64.ln(),
        denominator: (60.1 / p_f64).ln(),
    };
    // product < 60.1 over the integers.
    let bounded = product <= BigUint::from(60u32);
    if !bounded {
        return Ok(TameBoundResult {
            product,
            bounded,
            bound: None,
            components,
            note: None,
        });
    }
    // Floating-point seed, then exact adjustment in both directions.
    let mut n = (components.numerator / components.denominator).floor() as u64;
    while degree_inequality_holds(&product, n + 1) {
        n += 1;
    }
    while n > 1 && !degree_inequality_holds(&product, n) {
        n -= 1;
    }
    let note = match sorted.as_slice() {
        [q] if *q < 23 => Some(format!(
            "a single tamely ramified prime below 23 gives a cyclic tame fundamental group of order {}",
            q - 1
        )),
        _ => None,
    };
    Ok(TameBoundResult {
        product,
        bounded,
        bound: Some(n),
        components,
        note,
    })
}

/// Depth cutoff `m0 = max_i v_p(q_i - 1) + 1` over the primes congruent to
/// 1 mod p: homomorphisms into the `m0`-th principal congruence subgroup of
/// `GL_n(Z_p)` are trivial for every n.
pub fn simple_threshold(set: &TamePrimeSet) -> Result<u32, ClassifyError> {
    let s_min = set.s_min();
    if s_min.is_empty() {
        return Err(ClassifyError::EmptySMin);
    }
    let p = set.p();
    let max_f = s_min
        .primes()
        .iter()
        .map(|&q| {
            let mut f = 0u32;
            let mut n = q - 1;
            while n % p == 0 {
                n /= p;
                f += 1;
            }
            f
        })
        .max()
        .expect("s_min is nonempty");
    Ok(max_f + 1)
}

/// Rules for very small `s_min`: empty gives the trivial group, one prime a
/// finite cyclic group, and two primes a finite group when some link number
/// between them is nonzero.
pub fn check_small_s(set: &TamePrimeSet) -> Finding {
    check_small_s_with_choice(set, RootChoice::Smallest)
}

pub fn check_small_s_with_choice(set: &TamePrimeSet, choice: RootChoice) -> Finding {
    let rule = "small-ramified-set".to_string();
    let s_min = set.s_min();
    let p = set.p();
    match s_min.len() {
        0 => Finding {
            rule,
            preconditions: vec![cond("s_min is empty", true)],
            assumptions: vec![],
            conclusion: Conclusion::TrivialGroup,
            basis_invariant: true,
            notes: vec![format!("no ramified prime is 1 mod {p}")],
        },
        1 => {
            let q = s_min.primes()[0];
            let mut f = 0u32;
            let mut n = q - 1;
            while n.is_multiple_of(p) {
                n /= p;
                f += 1;
            }
            Finding {
                rule,
                preconditions: vec![cond("s_min has exactly one prime", true)],
                assumptions: vec![],
                conclusion: Conclusion::FiniteCyclic,
                basis_invariant: true,
                notes: vec![format!("cyclic of order {p}^{f}")],
            }
        }
        2 => {
            let link = LinkTable::compute_with_choice(&s_min, choice);
            let nonzero = link.ell(0, 1) != Some(0) || link.ell(1, 0) != Some(0);
            Finding {
                rule,
                preconditions: vec![
                    cond("s_min has exactly two primes", true),
                    cond(
                        "some link number between the two primes is nonzero mod p",
                        nonzero,
                    ),
                ],
                assumptions: vec![],
                conclusion: if nonzero {
                    Conclusion::Finite
                } else {
                    Conclusion::Unknown
                },
                basis_invariant: true,
                notes: vec![],
            }
        }
        _ => Finding {
            rule,
            preconditions: vec![cond("s_min has at most two primes", false)],
            assumptions: vec![],
            conclusion: Conclusion::Unknown,
            basis_invariant: true,
            notes: vec![],
        },
    }
}

/// Generator/relation counting: four or more primes congruent to 1 mod p
/// force the group to be infinite.
pub fn golod_shafarevich_flag(set: &TamePrimeSet) -> Finding {
    let m = set.s_min().len();
    let holds = m >= 4;
    Finding {
        rule: "golod-shafarevich".to_string(),
        preconditions: vec![cond("s_min has at least four primes", holds)],
        assumptions: vec![],
        conclusion: if holds {
            Conclusion::InfiniteByGS
        } else {
            Conclusion::Unknown
        },
        basis_invariant: true,
        notes: if holds {
            vec![
                "generator and relation counts violate the Golod-Shafarevich inequality for finite p-groups"
                    .to_string(),
            ]
        } else {
            vec![]
        },
    }
}

/// Necessary link conditions for a three-prime set to admit an infinite
/// powerful maximal pro-p quotient: all six link numbers nonzero and the
/// three cross-ratio identities between them and `c_i = (q_i - 1)/p`.
pub fn check_labute_triple(set: &TamePrimeSet) -> Result<Finding, ClassifyError> {
    check_labute_triple_with_choice(set, RootChoice::Smallest)
}

pub fn check_labute_triple_with_choice(
    set: &TamePrimeSet,
    choice: RootChoice,
) -> Result<Finding, ClassifyError> {
    if set.len() != 3 {
        return Err(ClassifyError::WrongCardinality {
            expected: 3,
            found: set.len(),
        });
    }
    let rule = "powerful-triple".to_string();
    let p = set.p();
    let pp = p * p;
    let mut preconditions = Vec::new();
    let mut congruences_ok = true;
    for &q in set.primes() {
        let c1 = q % p == 1;
        preconditions.push(cond(format!("{q} is 1 mod {p}"), c1));
        congruences_ok &= c1;
    }
    for &q in set.primes() {
        let c2 = q % pp != 1;
        preconditions.push(cond(format!("{q} is not 1 mod {p}^2"), c2));
        congruences_ok &= c2;
    }
    if !congruences_ok {
        return Ok(Finding {
            rule,
            preconditions,
            assumptions: vec![],
            conclusion: Conclusion::Unknown,
            basis_invariant: true,
            notes: vec![
                "congruence preconditions fail; the link conditions were not evaluated".to_string(),
            ],
        });
    }
    let link = LinkTable::compute_with_choice(set, choice);
    let all_nonzero = link.all_ell_nonzero();
    let c = |i: usize| link.c(i).expect("q = 1 mod p") % p;
    let ell = |i: usize, j: usize| link.ell(i, j).expect("off-diagonal");
    let ratio = |a: u64, b: u64| (a + b).is_multiple_of(p);
    // Cross-multiplied forms of l13/c1 = -l23/c2, l21/c2 = -l31/c3,
    // l12/c1 = -l32/c3.
    let r1 = ratio(ell(0, 2) * c(1) % p, ell(1, 2) * c(0) % p);
    let r2 = ratio(ell(1, 0) * c(2) % p, ell(2, 0) * c(1) % p);
    let r3 = ratio(ell(0, 1) * c(2) % p, ell(2, 1) * c(0) % p);
    preconditions.push(cond("all six link numbers are nonzero mod p", all_nonzero));
    preconditions.push(cond("l13/c1 = -l23/c2 mod p", r1));
    preconditions.push(cond("l21/c2 = -l31/c3 mod p", r2));
    preconditions.push(cond("l12/c1 = -l32/c3 mod p", r3));
    let consistent = all_nonzero && r1 && r2 && r3;
    Ok(Finding {
        rule,
        preconditions,
        assumptions: vec!["the group is powerful".to_string()],
        conclusion: if consistent {
            Conclusion::Sl21OnlyInfiniteOption
        } else {
            Conclusion::Finite
        },
        basis_invariant: true,
        notes: if consistent {
            vec![
                "all necessary conditions for an infinite powerful quotient hold; if infinite, the group is the first special congruence subgroup of SL_2(Z_p)"
                    .to_string(),
            ]
        } else {
            vec!["a necessary condition for an infinite powerful quotient fails".to_string()]
        },
    })
}

/// When every prime is 1 mod p but not 1 mod p^2 and all link numbers vanish
/// mod p, continuous homomorphisms into the first principal congruence
/// subgroup of `GL_n(Z_p)` are trivial.
pub fn check_all_lij_zero(set: &TamePrimeSet) -> Result<Finding, ClassifyError> {
    check_all_lij_zero_with_choice(set, RootChoice::Smallest)
}

pub fn check_all_lij_zero_with_choice(
    set: &TamePrimeSet,
    choice: RootChoice,
) -> Result<Finding, ClassifyError> {
    let p = set.p();
    for &q in set.primes() {
        if q % p != 1 || q % (p * p) == 1 {
            return Err(ClassifyError::BadCongruence { q, p });
        }
    }
    let link = LinkTable::compute_with_choice(set, choice);
    let all_zero = link.all_ell_zero();
    Ok(Finding {
        rule: "zero-linking-cutoff".to_string(),
        preconditions: vec![
            cond("every prime is 1 mod p and not 1 mod p^2", true),
            cond("all link numbers vanish mod p", all_zero),
        ],
        assumptions: vec![],
        conclusion: if all_zero {
            Conclusion::HomsToGLn1Trivial
        } else {
            Conclusion::Unknown
        },
        basis_invariant: true,
        notes: vec![],
    })
}

/// Constraints on continuous homomorphisms into `SL_2(Z_p)` for `p > 3` when
/// no ramified prime divides `p^2 - 1`. A quadratic nonresidue condition
/// forces each inertia image to be finite; if additionally one of four gcd
/// clauses holds uniformly, the whole image has at most two elements
/// (conditionally on the recorded order-divisibility hypothesis).
pub fn check_sl2_conditions(set: &TamePrimeSet) -> Result<Finding, ClassifyError> {
    let p = set.p();
    if p <= 3 {
        return Err(ClassifyError::RequiresPGreater3(p));
    }
    let mut preconditions = Vec::new();
    let mut tame_ok = true;
    for &q in set.primes() {
        let ok = !(p * p - 1).is_multiple_of(q);
        preconditions.push(cond(format!("{q} does not divide {p}^2 - 1"), ok));
        tame_ok &= ok;
    }
    let mut all_nonresidue = true;
    for &q in set.primes() {
        let nr = mod_pow_u64(q % p, (p - 1) / 2, p) == p - 1;
        preconditions.push(cond(format!("{q} is a quadratic nonresidue mod {p}"), nr));
        all_nonresidue &= nr;
    }
    // Each clause pairs a side of p with a side of q; `plus` selects q + 1
    // over q - 1.
    let clauses = [
        ("gcd(p-1, q-1) = 2 for every q", p - 1, false),
        ("gcd(p-1, q+1) = 2 for every q", p - 1, true),
        ("gcd(p+1, q-1) = 2 for every q", p + 1, false),
        ("gcd(p+1, q+1) = 2 for every q", p + 1, true),
    ];
    let mut first_clause: Option<usize> = None;
    for (idx, &(name, base, plus)) in clauses.iter().enumerate() {
        let holds = set
            .primes()
            .iter()
            .all(|&q| base.gcd(&(if plus { q + 1 } else { q - 1 })) == 2);
        preconditions.push(cond(name, holds));
        if holds && first_clause.is_none() {
            first_clause = Some(idx);
        }
    }
    let conclusive = tame_ok && first_clause.is_some();
    let mut assumptions = Vec::new();
    let mut notes = vec!["applies to continuous homomorphisms into SL_2(Z_p)".to_string()];
    if conclusive {
        let idx = first_clause.expect("checked");
        let side_p = if idx < 2 { "p - 1" } else { "p + 1" };
        let side_q = if idx.is_multiple_of(2) {
            "q - 1"
        } else {
            "q + 1"
        };
        assumptions.push(format!(
            "the order of each inertia image divides {side_p} and {side_q}"
        ));
        if all_nonresidue {
            notes.push(
                "each inertia image is finite because every prime is a quadratic nonresidue mod p"
                    .to_string(),
            );
        } else {
            assumptions.push("each inertia image is finite".to_string());
        }
    }
    Ok(Finding {
        rule: "sl2-image-constraints".to_string(),
        preconditions,
        assumptions,
        conclusion: if conclusive {
            Conclusion::ImageAtMost2
        } else {
            Conclusion::Unknown
        },
        basis_invariant: true,
        notes,
    })
}

/// Full report for one prime set: every applicable rule, in a fixed order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub p: u64,
    pub primes: Vec<u64>,
    pub s_min: Vec<u64>,
    pub findings: Vec<Finding>,
    pub tame_bound: Option<TameBoundResult>,
}

impl ClassificationReport {
    pub fn finding(&self, rule: &str) -> Option<&Finding> {
        self.findings.iter().find(|f| f.rule == rule)
    }
}

pub fn classify(set: &TamePrimeSet) -> ClassificationReport {
    classify_with_choice(set, RootChoice::Smallest)
}

pub fn classify_with_choice(set: &TamePrimeSet, choice: RootChoice) -> ClassificationReport {
    let p = set.p();
    let s_min = set.s_min();
    let mut findings = Vec::new();
    findings.push(check_small_s_with_choice(set, choice));
    findings.push(golod_shafarevich_flag(set));
    if !s_min.is_empty() {
        let m0 = simple_threshold(set).expect("s_min is nonempty");
        findings.push(Finding {
            rule: "congruence-depth-cutoff".to_string(),
            preconditions: vec![cond("s_min is nonempty", true)],
            assumptions: vec![],
            conclusion: Conclusion::HomsToGLnM0Trivial { m0 },
            basis_invariant: true,
            notes: vec![],
        });
        let pp = p * p;
        if s_min.primes().iter().all(|&q| q % pp != 1) {
            findings.push(
                check_all_lij_zero_with_choice(&s_min, choice)
                    .expect("congruences were pre-checked"),
            );
        } else {
            findings.push(Finding {
                rule: "zero-linking-cutoff".to_string(),
                preconditions: vec![cond("every prime is 1 mod p and not 1 mod p^2", false)],
                assumptions: vec![],
                conclusion: Conclusion::Unknown,
                basis_invariant: true,
                notes: vec![],
            });
        }
    }
    if s_min.len() == 3 {
        findings
            .push(check_labute_triple_with_choice(&s_min, choice).expect("cardinality is three"));
    }
    if p > 3 && !set.is_empty() {
        findings.push(check_sl2_conditions(set).expect("p > 3"));
    }
    let tame_bound = if set.is_empty() {
        None
    } else {
        let result = tame_degree_bound(set.primes()).expect("set was validated");
        findings.push(Finding {
            rule: "tame-degree-bound".to_string(),
            preconditions: vec![cond(
                "the product of the ramified primes is below 60.1",
                result.bounded,
            )],
            assumptions: vec![],
            conclusion: if result.bounded {
                Conclusion::Finite
            } else {
                Conclusion::Unknown
            },
            basis_invariant: true,
            notes: match result.bound {
                Some(b) => vec![format!(
                    "every tame number field unramified outside the set has degree at most {b}"
                )],
                None => vec![],
            },
        });
        Some(result)
    };
    ClassificationReport {
        p,
        primes: set.primes().to_vec(),
        s_min: s_min.primes().to_vec(),
        findings,
        tame_bound,
    }
}

/// All triples of primes `q <= qmax` (each 1 mod p, none 1 mod p^2) whose
/// link data passes every necessary condition of the powerful-triple rule.
/// Results are lexicographically sorted and identical with and without
/// parallelism.
pub fn search_labute_triples(
    p: u64,
    qmax: u64,
    parallel: bool,
) -> Result<Vec<[u64; 3]>, ClassifyError> {
    // Validates p as an odd prime.
    TamePrimeSet::new(p, vec![])?;
    let pp = p * p;
    let candidates: Vec<u64> = (2..=qmax)
        .filter(|&q| q % p == 1 && q % pp != 1 && is_prime_u64(q))
        .collect();
    let n = candidates.len();
    if n < 3 {
        return Ok(Vec::new());
    }
    // One link table over the whole candidate list; triple checks then read
    // the same entries check_labute_triple would compute for the sub-table.
    let set = TamePrimeSet::new(p, candidates.clone())?;
    let link = LinkTable::compute(&set);
    let c: Vec<u64> = (0..n)
        .map(|i| link.c(i).expect("q = 1 mod p") % p)
        .collect();
    let ell = |i: usize, j: usize| link.ell(i, j).expect("off-diagonal");
    let accept = |i: usize, j: usize, k: usize| -> bool {
        let pairs = [(i, j), (j, i), (i, k), (k, i), (j, k), (k, j)];
        if pairs.iter().any(|&(a, b)| ell(a, b) == 0) {
            return false;
        }
        let r1 = (ell(i, k) * c[j] + ell(j, k) * c[i]).is_multiple_of(p);
        let r2 = (ell(j, i) * c[k] + ell(k, i) * c[j]).is_multiple_of(p);
        let r3 = (ell(i, j) * c[k] + ell(k, j) * c[i]).is_multiple_of(p);
        r1 && r2 && r3
    };
    let mut triples = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                triples.push((i, j, k));
            }
        }
    }
    let mut found: Vec<[u64; 3]> = if parallel {
        triples
            .par_iter()
            .filter(|&&(i, j, k)| accept(i, j, k))
            .map(|&(i, j, k)| [candidates[i], candidates[j], candidates[k]])
            .collect()
    } else {
        triples
            .iter()
            .filter(|&&(i, j, k)| accept(i, j, k))
            .map(|&(i, j, k)| [candidates[i], candidates[j], candidates[k]])
            .collect()
    };
    found.sort_unstable();
    Ok(found)
}
