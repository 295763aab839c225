//! Link numbers of tame prime sets.
//!
//! For distinct primes `q_i`, `q_j` with `q_j` odd, fix a primitive root
//! `g_j` mod `q_j`. The link number `L_ij` is the exponent with
//! `q_i = g_j^(-L_ij) mod q_j`, taken in `[0, q_j - 1)`, and `ell_ij` is its
//! reduction mod p. The table also records, per prime, the integer
//! `c_i = (q_i - 1)/p` when `q_i = 1 mod p`, the depth `f_i = v_p(q_i - 1)`,
//! and the congruence flags the classification rules branch on.
//!
//! `ell_ij` depends on the choice of `g_j` only up to a unit: replacing `g_j`
//! rescales column j of the table by a common nonzero factor mod p. Every
//! predicate exported from this crate is invariant under that rescaling; the
//! `ell` values themselves are not.

use crate::padic::{is_prime_u64, mod_pow_u64, mul_mod_u64};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinkError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("the set may not contain p = {0}")]
    ContainsP(u64),
    #[error("duplicate prime {0}")]
    Duplicate(u64),
    #[error("{a} is divisible by {q}, so no discrete logarithm exists")]
    NotCoprime { a: u64, q: u64 },
    #[error("{g} is not a primitive root mod {q}")]
    NotPrimitiveRoot { g: u64, q: u64 },
}

/// Which primitive root to use per column when building a link table. The
/// default is the smallest; the alternative exists so callers can confirm
/// that derived predicates do not depend on the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum RootChoice {
    #[default]
    Smallest,
    SecondSmallest,
}

/// An odd prime p together with a finite set of ramified primes, none equal
/// to p. Primes are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TamePrimeSet {
    p: u64,
    primes: Vec<u64>,
}

impl TamePrimeSet {
    pub fn new(p: u64, mut primes: Vec<u64>) -> Result<Self, LinkError> {
        if p == 2 || !is_prime_u64(p) {
            return Err(LinkError::NotOddPrime(p));
        }
        for &q in &primes {
            if !is_prime_u64(q) {
                return Err(LinkError::NotPrime(q));
            }
            if q == p {
                return Err(LinkError::ContainsP(p));
            }
        }
        primes.sort_unstable();
        for w in primes.windows(2) {
            if w[0] == w[1] {
                return Err(LinkError::Duplicate(w[0]));
            }
        }
        Ok(TamePrimeSet { p, primes })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// The subset of primes congruent to 1 mod p. Primes outside it are
    /// redundant: dropping them does not change the maximal pro-p quotient
    /// unramified outside the set.
    pub fn s_min(&self) -> TamePrimeSet {
        TamePrimeSet {
            p: self.p,
            primes: self
                .primes
                .iter()
                .copied()
                .filter(|q| q % self.p == 1)
                .collect(),
        }
    }
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Whether `g` generates the multiplicative group mod the prime `q`.
pub fn is_primitive_root(g: u64, q: u64) -> bool {
    debug_assert!(is_prime_u64(q));
    if q == 2 {
        return g % 2 == 1;
    }
    if g.is_multiple_of(q) {
        return false;
    }
    distinct_prime_factors(q - 1)
        .iter()
        .all(|&r| mod_pow_u64(g, (q - 1) / r, q) != 1)
}

/// The k-th smallest integer >= 2 that is a primitive root mod the prime
/// `q` (k is zero-based). For `q = 2` the group is trivial and the function
/// returns 1 by convention regardless of k.
pub fn kth_primitive_root(q: u64, k: usize) -> u64 {
    assert!(is_prime_u64(q), "{q} is not prime");
    if q == 2 {
        return 1;
    }
    let mut remaining = k;
    let mut g = 2u64;
    loop {
        if is_primitive_root(g, q) {
            if remaining == 0 {
                return g;
            }
            remaining -= 1;
        }
        g += 1;
    }
}

/// The smallest primitive root mod the prime `q` (1 for `q = 2`).
pub fn primitive_root(q: u64) -> u64 {
    kth_primitive_root(q, 0)
}

/// The exponent `e` in `[0, q - 1)` with `g^e = a mod q`, where `g` is a
/// primitive root mod the prime `q`. Brute force for small q, baby-step
/// giant-step above that.
pub fn discrete_log(q: u64, g: u64, a: u64) -> Result<u64, LinkError> {
    let a = a % q;
    if a == 0 {
        return Err(LinkError::NotCoprime { a, q });
    }
    if q == 2 {
        return Ok(0);
    }
    if q < 10_000 {
        let mut acc = 1u64;
        for e in 0..q - 1 {
            if acc == a {
                return Ok(e);
            }
            acc = mul_mod_u64(acc, g, q);
        }
        panic!("{g} is not a primitive root mod {q}");
    }
    let order = q - 1;
    let m = order.isqrt() + 1;
    let mut baby = HashMap::with_capacity(m as usize);
    let mut acc = 1u64;
    for j in 0..m {
        baby.entry(acc).or_insert(j);
        acc = mul_mod_u64(acc, g, q);
    }
    // acc is now g^m; its inverse is the giant step.
    let giant = mod_pow_u64(acc, order - 1, q);
    let mut gamma = a;
    for i in 0..=m {
        if let Some(&j) = baby.get(&gamma) {
            return Ok((i * m + j) % order);
        }
        gamma = mul_mod_u64(gamma, giant, q);
    }
    panic!("{g} is not a primitive root mod {q}");
}

/// Whether `a` is a p-th power mod the prime `q`. When `q` is not 1 mod p
/// the p-th power map is a bijection mod q, so the answer is always true.
pub fn is_pth_power(a: u64, q: u64, p: u64) -> Result<bool, LinkError> {
    let a = a % q;
    if a == 0 {
        return Err(LinkError::NotCoprime { a, q });
    }
    if !(q - 1).is_multiple_of(p) {
        return Ok(true);
    }
    Ok(mod_pow_u64(a, (q - 1) / p, q) == 1)
}

fn p_adic_depth(p: u64, mut n: u64) -> u32 {
    let mut f = 0u32;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        f += 1;
    }
    f
}

/// Link numbers and congruence data for a tame prime set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkTable {
    p: u64,
    primes: Vec<u64>,
    roots: Vec<u64>,
    /// `l[i][j] = L_ij` for `i != j`; the diagonal is `None`.
    l: Vec<Vec<Option<u64>>>,
    /// `ell[i][j] = L_ij mod p`.
    ell: Vec<Vec<Option<u64>>>,
    /// `c[i] = (q_i - 1)/p` when `q_i = 1 mod p`.
    c: Vec<Option<u64>>,
    /// `f[i] = v_p(q_i - 1)`.
    f: Vec<u32>,
    cong1_mod_p: Vec<bool>,
    cong1_mod_p2: Vec<bool>,
}

impl LinkTable {
    pub fn compute(set: &TamePrimeSet) -> Self {
        Self::compute_with_choice(set, RootChoice::Smallest)
    }

    pub fn compute_with_choice(set: &TamePrimeSet, choice: RootChoice) -> Self {
        let k = match choice {
            RootChoice::Smallest => 0,
            RootChoice::SecondSmallest => 1,
        };
        let roots = set
            .primes()
            .iter()
            .map(|&q| kth_primitive_root(q, k))
            .collect();
        Self::compute_with_roots(set, roots).expect("generated roots are primitive")
    }

    /// Builds the table with caller-chosen primitive roots, one per prime in
    /// set order. Exists so invariance under the choice can be exercised.
    pub fn compute_with_roots(set: &TamePrimeSet, roots: Vec<u64>) -> Result<Self, LinkError> {
        assert_eq!(roots.len(), set.len(), "one root per prime");
        for (&g, &q) in roots.iter().zip(set.primes()) {
            if q == 2 {
                continue;
            }
            if !is_primitive_root(g, q) {
                return Err(LinkError::NotPrimitiveRoot { g, q });
            }
        }
        let p = set.p();
        let primes = set.primes().to_vec();
        let d = primes.len();
        let mut l = vec![vec![None; d]; d];
        let mut ell = vec![vec![None; d]; d];
        for i in 0..d {
            for j in 0..d {
                if i == j {
                    continue;
                }
                let (qi, qj) = (primes[i], primes[j]);
                let e = discrete_log(qj, roots[j] % qj, qi)?;
                // L_ij is the negative of the logarithm, in [0, q_j - 1).
                let lij = if qj == 2 { 0 } else { (qj - 1 - e) % (qj - 1) };
                l[i][j] = Some(lij);
                ell[i][j] = Some(lij % p);
            }
        }
        let c = primes
            .iter()
            .map(|&q| if q % p == 1 { Some((q - 1) / p) } else { None })
            .collect();
        let f = primes.iter().map(|&q| p_adic_depth(p, q - 1)).collect();
        let cong1_mod_p = primes.iter().map(|&q| q % p == 1).collect();
        let cong1_mod_p2 = primes.iter().map(|&q| q % (p * p) == 1).collect();
        Ok(LinkTable {
            p,
            primes,
            roots,
            l,
            ell,
            c,
            f,
            cong1_mod_p,
            cong1_mod_p2,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn root(&self, j: usize) -> u64 {
        self.roots[j]
    }

    /// `L_ij`, or `None` on the diagonal.
    pub fn l(&self, i: usize, j: usize) -> Option<u64> {
        self.l[i][j]
    }

    /// `L_ij mod p`, or `None` on the diagonal.
    pub fn ell(&self, i: usize, j: usize) -> Option<u64> {
        self.ell[i][j]
    }

    /// `(q_i - 1)/p` when `q_i = 1 mod p`.
    pub fn c(&self, i: usize) -> Option<u64> {
        self.c[i]
    }

    /// `v_p(q_i - 1)`.
    pub fn f(&self, i: usize) -> u32 {
        self.f[i]
    }

    pub fn is_cong1_mod_p(&self, i: usize) -> bool {
        self.cong1_mod_p[i]
    }

    pub fn is_cong1_mod_p2(&self, i: usize) -> bool {
        self.cong1_mod_p2[i]
    }

    pub fn all_cong1_mod_p(&self) -> bool {
        self.cong1_mod_p.iter().all(|&b| b)
    }

    pub fn any_cong1_mod_p2(&self) -> bool {
        self.cong1_mod_p2.iter().any(|&b| b)
    }

    /// Whether every off-diagonal `ell_ij` vanishes. Invariant under the
    /// primitive-root choice.
    pub fn all_ell_zero(&self) -> bool {
        let d = self.len();
        (0..d).all(|i| (0..d).all(|j| i == j || self.ell[i][j] == Some(0)))
    }

    /// Whether every off-diagonal `ell_ij` is nonzero. Invariant under the
    /// primitive-root choice.
    pub fn all_ell_nonzero(&self) -> bool {
        let d = self.len();
        (0..d).all(|i| (0..d).all(|j| i == j || matches!(self.ell[i][j], Some(v) if v != 0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_set_validation() {
        assert_eq!(
            TamePrimeSet::new(2, vec![7]).unwrap_err(),
            LinkError::NotOddPrime(2)
        );
        assert_eq!(
            TamePrimeSet::new(9, vec![7]).unwrap_err(),
            LinkError::NotOddPrime(9)
        );
        assert_eq!(
            TamePrimeSet::new(3, vec![7, 8]).unwrap_err(),
            LinkError::NotPrime(8)
        );
        assert_eq!(
            TamePrimeSet::new(3, vec![7, 3]).unwrap_err(),
            LinkError::ContainsP(3)
        );
        assert_eq!(
            TamePrimeSet::new(3, vec![7, 7]).unwrap_err(),
            LinkError::Duplicate(7)
        );
        let s = TamePrimeSet::new(3, vec![31, 7, 229]).unwrap();
        assert_eq!(s.primes(), &[7, 31, 229]);
    }

    #[test]
    fn s_min_examples() {
        let s = TamePrimeSet::new(3, vec![5, 7, 13]).unwrap();
        assert_eq!(s.s_min().primes(), &[7, 13]);
        let t = TamePrimeSet::new(3, vec![2, 5]).unwrap();
        assert!(t.s_min().is_empty());
        let u = TamePrimeSet::new(5, vec![11, 31, 1021]).unwrap();
        assert_eq!(u.s_min().primes(), &[11, 31, 1021]);
    }

    #[test]
    fn primitive_roots_match_exhaustive_search() {
        // Oracle: check order directly by iterating powers.
        let order_of = |g: u64, q: u64| -> u64 {
            let mut acc = g % q;
            let mut e = 1;
            while acc != 1 {
                acc = acc * g % q;
                e += 1;
            }
            e
        };
        for &q in &[3u64, 5, 7, 11, 13, 31, 229] {
            let g = primitive_root(q);
            assert_eq!(order_of(g, q), q - 1, "root {g} mod {q}");
            for smaller in 2..g {
                assert_ne!(order_of(smaller, q), q - 1);
            }
        }
        assert_eq!(primitive_root(2), 1);
        assert_eq!(primitive_root(7), 3);
        assert_eq!(primitive_root(31), 3);
    }

    #[test]
    fn second_smallest_roots() {
        // mod 7 the primitive roots are 3 and 5.
        assert_eq!(kth_primitive_root(7, 1), 5);
        // mod 3 only the residue 2 generates; the next integer representing
        // it is 5.
        assert_eq!(kth_primitive_root(3, 1), 5);
        assert_eq!(kth_primitive_root(2, 1), 1);
    }

    #[test]
    fn discrete_log_small() {
        assert_eq!(discrete_log(7, 3, 1).unwrap(), 0);
        assert_eq!(discrete_log(7, 3, 3).unwrap(), 1);
        assert_eq!(discrete_log(7, 3, 2).unwrap(), 2);
        assert_eq!(
            discrete_log(7, 3, 14).unwrap_err(),
            LinkError::NotCoprime { a: 0, q: 7 }
        );
        // All exponents against a table oracle.
        let q = 31u64;
        let g = 3u64;
        let mut table = vec![0u64; q as usize];
        let mut acc = 1u64;
        for e in 0..q - 1 {
            table[acc as usize] = e;
            acc = acc * g % q;
        }
        for a in 1..q {
            assert_eq!(discrete_log(q, g, a).unwrap(), table[a as usize]);
        }
    }

    #[test]
    fn discrete_log_bsgs_agrees_with_powers() {
        // 10007 is prime and above the brute-force threshold.
        let q = 10_007u64;
        let g = primitive_root(q);
        for &e in &[0u64, 1, 17, 5000, 10005] {
            let a = mod_pow_u64(g, e, q);
            assert_eq!(discrete_log(q, g, a).unwrap(), e);
        }
    }

    #[test]
    fn pth_power_detection() {
        // 7 is not a cube mod 13: 7^4 = 9 mod 13.
        assert_eq!(mod_pow_u64(7, 4, 13), 9);
        assert!(!is_pth_power(7, 13, 3).unwrap());
        // 13 is a cube mod 7 (3^3 = 27 = 6 = 13 mod 7).
        assert!(is_pth_power(13, 7, 3).unwrap());
        // q not 1 mod p: every unit is a p-th power.
        assert!(is_pth_power(3, 5, 3).unwrap());
        assert!(matches!(
            is_pth_power(26, 13, 3),
            Err(LinkError::NotCoprime { .. })
        ));
    }

    #[test]
    fn link_table_shape_and_flags() {
        let s = TamePrimeSet::new(3, vec![7, 31, 229]).unwrap();
        let t = LinkTable::compute(&s);
        assert_eq!(t.len(), 3);
        for i in 0..3 {
            assert_eq!(t.l(i, i), None);
            assert!(t.is_cong1_mod_p(i));
            assert!(!t.is_cong1_mod_p2(i));
            assert_eq!(t.f(i), 1);
        }
        assert_eq!(t.c(0), Some(2));
        assert_eq!(t.c(1), Some(10));
        assert_eq!(t.c(2), Some(76));
        // Reconstruction: q_i = g_j^(-L_ij) mod q_j.
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let qj = t.primes()[j];
                let lij = t.l(i, j).unwrap();
                let recon = mod_pow_u64(t.root(j), qj - 1 - (lij % (qj - 1)), qj);
                assert_eq!(recon, t.primes()[i] % qj);
            }
        }
    }

    #[test]
    fn link_vanishing_matches_power_residues() {
        // ell_ij = 0 exactly when q_i is a p-th power mod q_j.
        let s = TamePrimeSet::new(3, vec![7, 13]).unwrap();
        let t = LinkTable::compute(&s);
        // 7 is not a cube mod 13, so ell_01 != 0; 13 is a cube mod 7.
        assert_ne!(t.ell(0, 1), Some(0));
        assert_eq!(t.ell(1, 0), Some(0));
        let ell01_zero = t.ell(0, 1) == Some(0);
        assert_eq!(ell01_zero, is_pth_power(7, 13, 3).unwrap());
        let ell10_zero = t.ell(1, 0) == Some(0);
        assert_eq!(ell10_zero, is_pth_power(13, 7, 3).unwrap());
    }

    #[test]
    fn depth_and_c_fields() {
        let s = TamePrimeSet::new(3, vec![19, 7]).unwrap();
        let t = LinkTable::compute(&s);
        // 19 - 1 = 2 * 3^2.
        let i19 = t.primes().iter().position(|&q| q == 19).unwrap();
        assert_eq!(t.f(i19), 2);
        assert!(t.is_cong1_mod_p2(i19));
        assert_eq!(t.c(i19), Some(6));
    }

    #[test]
    fn column_rescaling_under_root_change() {
        // Changing the root of column j multiplies every ell_ij by one
        // common nonzero scalar mod p.
        let p = 3u64;
        let s = TamePrimeSet::new(p, vec![7, 31, 229]).unwrap();
        let t0 = LinkTable::compute_with_choice(&s, RootChoice::Smallest);
        let t1 = LinkTable::compute_with_choice(&s, RootChoice::SecondSmallest);
        for j in 0..3 {
            let mut scale: Option<u64> = None;
            for i in 0..3 {
                if i == j {
                    continue;
                }
                let (a, b) = (t0.ell(i, j).unwrap(), t1.ell(i, j).unwrap());
                assert_eq!(a == 0, b == 0, "vanishing must be invariant");
                if a != 0 {
                    // b = scale * a mod p for the same scale all down column j
                    let a_inv = mod_pow_u64(a, p - 2, p);
                    let u = b * a_inv % p;
                    assert_ne!(u, 0);
                    if let Some(prev) = scale {
                        assert_eq!(prev, u);
                    }
                    scale = Some(u);
                }
            }
        }
        assert_eq!(t0.all_ell_nonzero(), t1.all_ell_nonzero());
        assert_eq!(t0.all_ell_zero(), t1.all_ell_zero());
    }

    #[test]
    fn invalid_roots_rejected() {
        let s = TamePrimeSet::new(3, vec![7, 13]).unwrap();
        // 2 has order 3 mod 7, not 6.
        let err = LinkTable::compute_with_roots(&s, vec![2, 2]).unwrap_err();
        assert_eq!(err, LinkError::NotPrimitiveRoot { g: 2, q: 7 });
    }

    #[test]
    fn table_with_prime_two_member() {
        // 2 may appear in the set; its column is trivial.
        let s = TamePrimeSet::new(3, vec![2, 7]).unwrap();
        let t = LinkTable::compute(&s);
        let i2 = 0usize;
        assert_eq!(t.primes()[i2], 2);
        assert_eq!(t.root(i2), 1);
        assert_eq!(t.l(1, 0), Some(0));
        assert!(!t.is_cong1_mod_p(i2));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn discrete_log_inverts_power(e in 0u64..10006, seed in 0u64..3) {
                let q = 10_007u64;
                let g = kth_primitive_root(q, seed as usize);
                let a = mod_pow_u64(g, e, q);
                prop_assert_eq!(discrete_log(q, g, a).unwrap(), e % (q - 1));
            }

            #[test]
            fn pth_power_matches_explicit_cube_set(a in 1u64..13) {
                // Exhaustive cube table mod 13.
                let cubes: std::collections::HashSet<u64> =
                    (1u64..13).map(|x| x * x * x % 13).collect();
                prop_assert_eq!(is_pth_power(a, 13, 3).unwrap(), cubes.contains(&a));
            }
        }
    }
}
