//! Acceptance gate: one test per numbered criterion, each printing a
//! `[PASS] criterion N` line on success (visible with `--nocapture`).
//! Runtime budgets and case counts are asserted, not aspirational.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;
use tamelink::classify::{
    classify, classify_with_choice, degree_inequality_holds, search_labute_triples,
    tame_degree_bound, Conclusion,
};
use tamelink::koch::{local_witness, KochPresentation, MatrixAssignment, TraceZeroMat};
use tamelink::linkdata::{discrete_log, primitive_root, RootChoice, TamePrimeSet};
use tamelink::padic::{hensel_sqrt, is_prime_u64, PadicInt};
use tamelink::pmatrix::PMatrix;

/// Independent modular exponentiation used as the oracle side of
/// cross-validations; deliberately not the library's implementation.
fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut acc: u128 = 1 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

fn primes_upto(n: u64) -> Vec<u64> {
    (2..=n).filter(|&x| is_prime_u64(x)).collect()
}

fn v_p(p: u64, mut n: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

fn set(p: u64, primes: &[u64]) -> TamePrimeSet {
    TamePrimeSet::new(p, primes.to_vec()).unwrap()
}

#[test]
fn criterion_01_labute_examples_reproduce() {
    for (p, primes) in [(3u64, [7u64, 31, 229]), (5, [11, 31, 1021])] {
        let start = Instant::now();
        let report = classify(&set(p, &primes));
        let finding = report.finding("powerful-triple").expect("triple rule ran");
        assert_eq!(
            finding.preconditions.len(),
            10,
            "six congruence conditions plus four link conditions"
        );
        for c in &finding.preconditions {
            assert!(c.holds, "p={p}, S={primes:?}: condition failed: {}", c.name);
        }
        assert_eq!(finding.conclusion, Conclusion::Sl21OnlyInfiniteOption);
        let elapsed = start.elapsed();
        assert!(
            elapsed.as_secs_f64() < 1.0,
            "classify took {elapsed:?}, budget is 1 s"
        );
    }
    println!("[PASS] criterion 1: both published triples satisfy every powerful-triple precondition in under 1 s each");
}

#[test]
fn criterion_02_search_rediscovers_triples() {
    let start = Instant::now();
    let found3 = search_labute_triples(3, 250, false).unwrap();
    assert!(
        found3.contains(&[7, 31, 229]),
        "p=3 search found {found3:?}"
    );
    let found5 = search_labute_triples(5, 1100, false).unwrap();
    assert!(
        found5.contains(&[11, 31, 1021]),
        "p=5 search found {found5:?}"
    );
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "searches took {elapsed:?}, budget is 30 s single-threaded"
    );
    println!("[PASS] criterion 2: single-threaded search rediscovers both triples in under 30 s");
}

#[test]
fn criterion_03_local_witness_and_negative_control() {
    for (p, q) in [(3u64, 7u64), (5, 11), (7, 29)] {
        let pres = KochPresentation::new(set(p, &[q])).unwrap();
        let witness = local_witness(p, q, 12).unwrap();
        let check = pres.verify(&witness).unwrap();
        assert!(check.passed, "witness fails for p={p}, q={q}");
        assert!(check.relators[0].residual.is_saturated());

        let expected_level = v_p(p, q - 1) + 1;
        for precision in 3..=12u32 {
            let tau =
                PMatrix::from_i64_rows(p, precision, &[vec![1, p as i64], vec![0, 1]]).unwrap();
            let sigma = PMatrix::identity(p, precision, 2).unwrap();
            let control = MatrixAssignment::new(vec![tau], vec![sigma]).unwrap();
            let check = pres.verify(&control).unwrap();
            assert!(
                !check.passed,
                "sigma = I passed at p={p}, q={q}, K={precision}"
            );
            let residual = &check.relators[0].residual;
            assert!(!residual.is_saturated());
            assert_eq!(
                residual.level(),
                expected_level,
                "residual level at p={p}, q={q}, K={precision}"
            );
        }
    }
    println!("[PASS] criterion 3: local witnesses verify at K=12 and sigma := I fails at K=3..12 with residual level v_p(q-1)+1");
}

#[test]
fn criterion_04_link_numbers_match_power_residue_symbols() {
    let start = Instant::now();
    let primes = primes_upto(500);
    let mut pairs = 0usize;
    for p in [3u64, 5, 7] {
        for &qj in primes.iter().filter(|&&qj| qj % p == 1) {
            let g = primitive_root(qj);
            let exponent = (qj - 1) / p;
            for &qi in primes.iter().filter(|&&qi| qi != qj) {
                let e = discrete_log(qj, g, qi % qj).unwrap();
                let l = (qj - 1 - e) % (qj - 1);
                let ell_zero = l.is_multiple_of(p);
                let is_power = mod_pow(qi % qj, exponent, qj) == 1;
                assert_eq!(ell_zero, is_power, "mismatch at p={p}, q_i={qi}, q_j={qj}");
                pairs += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert_eq!(
        pairs, 7708,
        "exhaustive pair count for p in {{3,5,7}}, q <= 500"
    );
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "cross-validation took {elapsed:?}, budget is 10 s"
    );
    println!(
        "[PASS] criterion 4: link number vanishing matches the power-residue symbol on {pairs} ordered pairs with zero mismatches"
    );
}

#[test]
fn criterion_05_relators_match_linearization() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x05);
    let pools: Vec<(u64, Vec<u64>)> = [3u64, 5]
        .iter()
        .map(|&p| {
            let pool = primes_upto(400)
                .into_iter()
                .filter(|&q| q % p == 1 && q % (p * p) != 1)
                .collect();
            (p, pool)
        })
        .collect();
    let mut checked = 0usize;
    for _ in 0..100 {
        let (p, pool) = &pools[rng.random_range(0..pools.len())];
        let p = *p;
        let d = 2 + rng.random_range(0..2usize);
        let mut chosen: Vec<u64> = Vec::new();
        while chosen.len() < d {
            let q = pool[rng.random_range(0..pool.len())];
            if !chosen.contains(&q) {
                chosen.push(q);
            }
        }
        let pres = KochPresentation::new(set(p, &chosen)).unwrap();
        let mats: Vec<TraceZeroMat> = (0..d)
            .map(|_| {
                TraceZeroMat::from_upper(
                    p,
                    rng.random_range(0..p),
                    rng.random_range(0..p),
                    rng.random_range(0..p),
                )
            })
            .collect();
        let taus: Vec<PMatrix> = mats
            .iter()
            .map(|a| a.unipotent_lift(1, 3).unwrap())
            .collect();
        let assign = pres.assignment_from_taus(taus).unwrap();
        let residuals = pres.linearized_residual(&mats).unwrap();
        for (i, residual) in residuals.iter().enumerate() {
            let direct = pres.relator_eval(&assign, i).unwrap();
            let predicted = residual.unipotent_lift(2, 3).unwrap();
            assert_eq!(direct, predicted, "relator {i} of S={chosen:?} at p={p}");
        }
        checked += 1;
    }
    assert_eq!(checked, 100);
    println!("[PASS] criterion 5: direct relator evaluation equals the linearized residual mod p^3 on 100/100 seeded assignments");
}

#[test]
fn criterion_06_valuation_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x06);
    let precision = 10u32;
    let congruence_elem = |rng: &mut ChaCha8Rng, p: u64, n: usize| -> PMatrix {
        let level = 1 + rng.random_range(0..4u32);
        let scale = p.pow(level) as i64;
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let noise = rng.random_range(0..p.pow(3)) as i64;
                        if i == j {
                            1 + scale * noise
                        } else {
                            scale * noise
                        }
                    })
                    .collect()
            })
            .collect();
        PMatrix::from_i64_rows(p, precision, &rows).unwrap()
    };
    for _ in 0..200 {
        let p = [3u64, 5][rng.random_range(0..2usize)];
        let n = 2 + rng.random_range(0..2usize);
        let g = congruence_elem(&mut rng, p, n);
        let h = congruence_elem(&mut rng, p, n);
        let wg = g.omega();
        let wh = h.omega();

        let quot = g.mul(&h.inv().unwrap()).unwrap();
        assert!(
            quot.omega() >= wg.min(wh),
            "omega(g h^-1) < min at p={p}, n={n}"
        );

        let comm = g.commutator(&h).unwrap();
        let wc = comm.omega();
        let sum = wg.level() + wh.level();
        if sum >= precision {
            assert!(wc.is_saturated(), "commutator level {wc:?} with sum {sum}");
        } else {
            assert!(
                wc.is_saturated() || wc.level() >= sum,
                "omega([g,h]) = {wc:?} below {sum}"
            );
        }

        let gp = g.pow_u64(p);
        let wp = gp.omega();
        if wg.is_saturated() || wg.level() + 1 >= precision {
            assert!(wp.is_saturated(), "omega(g^p) = {wp:?} should saturate");
        } else {
            assert!(!wp.is_saturated());
            assert_eq!(wp.level(), wg.level() + 1, "omega(g^p) at p={p}, n={n}");
        }
    }
    println!("[PASS] criterion 6: all three valuation axioms hold with saturation on 200 seeded pairs in GL_n^1");
}

#[test]
fn criterion_07_frattini_additivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x07);
    let sl21_elem = |rng: &mut ChaCha8Rng, p: u64| -> PMatrix {
        let pi = p as i64;
        let rows: Vec<Vec<i64>> = (0..2)
            .map(|i| {
                (0..2)
                    .map(|j| {
                        let noise = rng.random_range(0..p) as i64;
                        if i == j {
                            1 + pi * noise
                        } else {
                            pi * noise
                        }
                    })
                    .collect()
            })
            .collect();
        let g0 = PMatrix::from_i64_rows(p, 3, &rows).unwrap();
        // Rescale the first column so the determinant is exactly 1; the
        // correcting unit is 1 mod p, so the element stays in SL_2^1.
        let unit = g0.det().inv().unwrap();
        let one = PadicInt::one(p, 3).unwrap();
        let zero = PadicInt::zero(p, 3).unwrap();
        let fix = PMatrix::new(p, 3, 2, vec![unit, zero.clone(), zero, one]).unwrap();
        let g = g0.mul(&fix).unwrap();
        assert!(g.det().is_one());
        g
    };
    for chunk in [3u64, 5, 7] {
        for _ in 0..100 {
            let g = sl21_elem(&mut rng, chunk);
            let h = sl21_elem(&mut rng, chunk);
            let fg = tamelink::koch::frattini_image(&g).unwrap();
            let fh = tamelink::koch::frattini_image(&h).unwrap();
            let fgh = tamelink::koch::frattini_image(&g.mul(&h).unwrap()).unwrap();
            assert_eq!(fgh, fg.add(&fh).unwrap(), "additivity at p={chunk}");
            for f in [&fg, &fh, &fgh] {
                let e = f.entries();
                assert_eq!((e[0] + e[3]) % chunk, 0, "image not trace zero");
            }
        }
    }
    println!("[PASS] criterion 7: frattini_image is additive and trace-zero on 300 seeded pairs in SL_2^1 across p = 3, 5, 7");
}

#[test]
fn criterion_08_tame_degree_bound_certified() {
    let r = tame_degree_bound(&[2, 3, 5]).unwrap();
    assert!(r.bounded);
    assert_eq!(r.bound, Some(360));
    let thirty = BigUint::from(30u32);
    assert!(degree_inequality_holds(&thirty, 360), "n = 360 must hold");
    assert!(!degree_inequality_holds(&thirty, 361), "n = 361 must fail");
    let unbounded = tame_degree_bound(&[2, 31]).unwrap();
    assert!(!unbounded.bounded);
    assert_eq!(unbounded.bound, None);
    println!("[PASS] criterion 8: bound for {{2,3,5}} is 360, certified exactly at n=360 and n=361; {{2,31}} reports no bound");
}

#[test]
fn criterion_09_hensel_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x09);
    let small_odd: Vec<u64> = primes_upto(97).into_iter().filter(|&p| p > 2).collect();
    for _ in 0..50 {
        let p = small_odd[rng.random_range(0..small_odd.len())];
        let q = loop {
            let k = rng.random_range(1..=(1_000_000 - 1) / p);
            let q = 1 + p * k;
            if is_prime_u64(q) {
                break q;
            }
        };
        let r = hensel_sqrt(q, p, 20).unwrap();
        assert_eq!(r.residue() % p, BigUint::from(1u32), "r = 1 mod {p}");
        let q_elem = PadicInt::from_u64(p, 20, q).unwrap();
        assert_eq!(r.mul(&r).unwrap(), q_elem, "r^2 = q mod {p}^20 for q={q}");
    }
    println!("[PASS] criterion 9: 50 seeded Hensel roots satisfy r = 1 mod p and r^2 = q mod p^20");
}

#[test]
fn criterion_10_root_choice_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0A);
    let p_pool = [3u64, 5, 7, 11, 13];
    let q_pool = primes_upto(1000);
    for _ in 0..50 {
        let p = p_pool[rng.random_range(0..p_pool.len())];
        let size = 2 + rng.random_range(0..2usize);
        let mut primes: Vec<u64> = Vec::new();
        while primes.len() < size {
            let q = q_pool[rng.random_range(0..q_pool.len())];
            if q != p && !primes.contains(&q) {
                primes.push(q);
            }
        }
        let s = set(p, &primes);
        let smallest = classify_with_choice(&s, RootChoice::Smallest);
        let second = classify_with_choice(&s, RootChoice::SecondSmallest);
        assert_eq!(smallest, second, "report differs for p={p}, S={primes:?}");
    }
    println!("[PASS] criterion 10: 50 seeded classifications are identical under smallest and second-smallest primitive roots");
}
