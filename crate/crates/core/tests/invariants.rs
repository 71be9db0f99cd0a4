//! Cross-module invariants: instrumented checks of the voting round against
//! the brute-force oracles, the deception-detection rate, and assorted
//! property tests.

use num_bigint::BigUint;
use num_rational::Ratio;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use sparseslp_core::exec;
use sparseslp_core::ff::{ExtField, ExtFieldElement, PrimeField};
use sparseslp_core::interp::{
    build_approximation_traced, ceil_log2, majority_vote_interpolate, CoefficientVector,
};
use sparseslp_core::modpoly::{random_sparse_poly, SparsePoly};
use sparseslp_core::oracle::{collision_count, term_buckets};
use sparseslp_core::slp::{slp_from_sparse, ProbeLedger};

fn field101() -> ExtField {
    ExtField::prime_field(PrimeField::new(101).unwrap())
}

fn b(v: u64) -> BigUint {
    BigUint::from(v)
}

/// Evaluations of every nonempty bucket of `g` at each multiplier; a
/// deception is a pair of different buckets with identical evaluations
/// everywhere.
fn bucket_evaluations(
    g: &SparsePoly,
    primes: &[u64],
    alphas: &[ExtFieldElement],
) -> Vec<(SparsePoly, Vec<ExtFieldElement>)> {
    let mut out = Vec::new();
    for &p in primes {
        for bucket in term_buckets(g, p) {
            let evals: Vec<ExtFieldElement> = alphas
                .iter()
                .map(|a| bucket.poly.eval(a).unwrap())
                .collect();
            out.push((bucket.poly, evals));
        }
    }
    out
}

fn has_undetected_deception(buckets: &[(SparsePoly, Vec<ExtFieldElement>)]) -> bool {
    for i in 0..buckets.len() {
        for j in i + 1..buckets.len() {
            if buckets[i].0 != buckets[j].0 && buckets[i].1 == buckets[j].1 {
                return true;
            }
        }
    }
    false
}

/// When the selected primes really do keep collisions below T/2 and every
/// deception is detected (both checked against the known instance), the
/// vote is sound: every constructed term is a genuine term of g, and at
/// least half of g is constructed.
#[test]
fn vote_is_sound_when_preconditions_hold() {
    let k = field101();
    let d = b(10_000);
    let t = 8u64;
    let mut conditioned_runs = 0;
    for seed in 0..60u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(0x50b0 + seed);
        let g = random_sparse_poly(&k, t as usize, &d, &mut rng).unwrap();
        let slp = slp_from_sparse(&g).unwrap();
        let ledger = ProbeLedger::new();
        let (f_dd, detail) = build_approximation_traced(
            &slp,
            &SparsePoly::zero(k.clone()),
            t,
            &d,
            Ratio::new(1, 20),
            &mut rng,
            &ledger,
        )
        .unwrap();

        let primes_ok = detail
            .primes
            .iter()
            .all(|&p| (collision_count(&g, p) as u64) < t / 2);
        let buckets = bucket_evaluations(&g, &detail.primes, &detail.alphas);
        if !primes_ok || has_undetected_deception(&buckets) {
            continue;
        }
        conditioned_runs += 1;
        for (e, c) in f_dd.terms() {
            assert_eq!(g.coeff(e), *c, "seed {seed}: spurious term at exponent {e}");
        }
        assert!(
            2 * f_dd.term_count() >= g.term_count(),
            "seed {seed}: only {} of {} terms constructed",
            f_dd.term_count(),
            g.term_count()
        );
        assert_eq!(detail.voted.len(), f_dd.term_count(), "seed {seed}");
    }
    assert!(
        conditioned_runs >= 50,
        "preconditions held in only {conditioned_runs}/60 runs"
    );
}

/// The multipliers miss some deception in at most a mu + 0.05 fraction of
/// seeded rounds (mu = 1/20, 200 rounds).
#[test]
fn deception_detection_rate() {
    let k = field101();
    let d = b(10_000);
    let t = 8u64;
    let trials = 200usize;
    let missed: usize = exec::run_indexed(trials, |i| {
        let mut rng = ChaCha12Rng::seed_from_u64(0xdece + i as u64);
        let g = random_sparse_poly(&k, t as usize, &d, &mut rng).unwrap();
        let slp = slp_from_sparse(&g).unwrap();
        let ledger = ProbeLedger::new();
        let (_, detail) = build_approximation_traced(
            &slp,
            &SparsePoly::zero(k.clone()),
            t,
            &d,
            Ratio::new(1, 20),
            &mut rng,
            &ledger,
        )
        .unwrap();
        let buckets = bucket_evaluations(&g, &detail.primes, &detail.alphas);
        usize::from(has_undetected_deception(&buckets))
    })
    .into_iter()
    .sum();
    assert!(
        missed as f64 <= trials as f64 * (0.05 + 0.05),
        "deceptions slipped through in {missed}/{trials} rounds"
    );
}

/// The round loop halves T, so the trace never exceeds ceil(log2 T) + 1
/// rows — regardless of randomness.
#[test]
fn trace_length_is_bounded() {
    let k = field101();
    for (seed, t_bound) in [(1u64, 1u64), (2, 2), (3, 3), (4, 16), (5, 31)] {
        let mut rng = ChaCha12Rng::seed_from_u64(0x71ace + seed);
        let terms = 3.min(t_bound as usize);
        let f = random_sparse_poly(&k, terms, &b(500), &mut rng).unwrap();
        let slp = slp_from_sparse(&f).unwrap();
        let result =
            majority_vote_interpolate(&slp, t_bound, &b(500), Ratio::new(1, 10), &mut rng)
                .unwrap();
        assert!(result.trace.len() as u64 <= ceil_log2(t_bound) + 1);
        let mut expect = 0u64;
        let mut t = t_bound;
        while t > 1 {
            expect += 1;
            t /= 2;
        }
        assert_eq!(result.trace.len() as u64, expect);
    }
}

/// Identical inputs and seed give identical results, including the trace.
#[test]
fn interpolation_is_seed_deterministic() {
    let k = field101();
    let mut gen_rng = ChaCha12Rng::seed_from_u64(0xde70);
    let f = random_sparse_poly(&k, 6, &b(2_000), &mut gen_rng).unwrap();
    let slp = slp_from_sparse(&f).unwrap();
    let run = |seed: u64| {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        majority_vote_interpolate(&slp, 8, &b(2_000), Ratio::new(1, 10), &mut rng).unwrap()
    };
    let a = run(7);
    let bb = run(7);
    assert_eq!(a.poly, bb.poly);
    assert_eq!(a.ledger.probe_count(), bb.ledger.probe_count());
    assert_eq!(a.ledger.total_probe_size(), bb.ledger.total_probe_size());
    assert_eq!(a.trace.len(), bb.trace.len());
    for (x, y) in a.trace.iter().zip(&bb.trace) {
        assert_eq!((x.lambda, x.candidates, x.probes), (y.lambda, y.candidates, y.probes));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Images respect addition for any cycle length and multiplier.
    #[test]
    fn image_additivity(seed in 0u64..1_000_000, p in 1u64..40, ta in 0usize..6, tb in 0usize..6) {
        let k = field101();
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let bound = b(800);
        let f = random_sparse_poly(&k, ta, &bound, &mut rng).unwrap();
        let g = random_sparse_poly(&k, tb, &bound, &mut rng).unwrap();
        let alpha = k.random_nonzero(&mut rng);
        let lhs = f.add(&g).unwrap().image(&alpha, p).unwrap();
        let rhs = f.image(&alpha, p).unwrap().cyclic_add(&g.image(&alpha, p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// The dictionary key order is exactly the lexicographic order of the
    /// canonical byte encodings.
    #[test]
    fn coefficient_vector_order_matches_byte_encoding(seed in 0u64..1_000_000, m in 1usize..6) {
        let base = PrimeField::new(101).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let ext = ExtField::random(base, 2, &mut rng).unwrap();
        let draw = |rng: &mut ChaCha12Rng| -> (CoefficientVector, Vec<u8>) {
            let entries: Vec<ExtFieldElement> =
                (0..m).map(|_| ext.random_nonzero(rng)).collect();
            let bytes: Vec<u8> = entries.iter().flat_map(|e| e.canonical_bytes()).collect();
            (CoefficientVector::new(entries), bytes)
        };
        let (va, ba) = draw(&mut rng);
        let (vb, bb) = draw(&mut rng);
        prop_assert_eq!(va.cmp(&vb), ba.cmp(&bb));
    }

    /// Probing a synthesized program agrees with the direct sparse image.
    #[test]
    fn probe_matches_image(seed in 0u64..1_000_000, p in 1u64..50, t in 0usize..8) {
        let k = field101();
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let f = random_sparse_poly(&k, t, &b(5_000), &mut rng).unwrap();
        let slp = slp_from_sparse(&f).unwrap();
        let alpha = k.random_nonzero(&mut rng);
        let ledger = ProbeLedger::new();
        prop_assert_eq!(
            slp.probe(&alpha, p, &ledger).unwrap(),
            f.image(&alpha, p).unwrap()
        );
    }
}
