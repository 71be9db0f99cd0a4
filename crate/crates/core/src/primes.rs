//! Parameter formulas and probe-driven prime selection.
//!
//! For the current bounds `(T, D)` the engine works with primes in
//! `[lambda, 2*lambda]`. Most of them separate most terms of the unknown
//! polynomial; the selection procedure probes a batch of candidates at
//! `alpha = 1` and keeps the `ell` whose images have the most terms, which
//! bounds their collision counts within a factor of two of the best ones.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::Zero;

use rand::Rng;

use crate::exec;
use crate::ff::ExtField;
use crate::interp::compute_image;
use crate::modpoly::{CyclicPoly, SparsePoly};
use crate::real;
use crate::slp::{ProbeLedger, Slp};
use crate::{Error, Result};

/// Derived parameters for one approximation round, all deterministic in
/// `(T, D, q, mu)`.
///
/// * `lambda` — primes are drawn from `[lambda, 2*lambda]`;
/// * `gamma` — number of candidate primes to probe;
/// * `ell` — number of primes kept (always even);
/// * `diversifiers` — number of random multipliers `alpha_j`;
/// * `ext_degree` — degree `s` of the extension the multipliers live in;
/// * `mu` — the failure budget the formulas were instantiated with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSet {
    pub lambda: u64,
    pub gamma: u64,
    pub ell: u64,
    pub diversifiers: u64,
    pub ext_degree: u32,
    pub mu: Ratio<u64>,
}

/// Primes selected for a round together with their `alpha = 1` images.
#[derive(Clone, Debug)]
pub struct PrimeImages {
    pub primes: Vec<u64>,
    pub images: Vec<CyclicPoly>,
}

/// `lambda(T, D) = max(21, ceil((40/3) (T-1) ln D))`, the lower end of the
/// prime search interval. Defined for every `T >= 1` (the `T = 1` path takes
/// the max clause).
pub fn lambda_bound(t_bound: u64, degree_bound: &BigUint) -> Result<u64> {
    let c_num = 40u64
        .checked_mul(t_bound.saturating_sub(1))
        .ok_or_else(|| Error::invalid("term bound too large"))?;
    let v = real::ceil_ratio_ln(c_num, 3, degree_bound, &BigUint::from(1u32))?;
    Ok(v.max(21))
}

/// Derives the full parameter set. Requires `T >= 2`, `D >= 2` and
/// `0 < mu < 1/3`. All ceilings are decided exactly (integer comparisons or
/// certified log enclosures), never by bare floating point.
pub fn compute_params(
    t_bound: u64,
    degree_bound: &BigUint,
    q: u64,
    mu: Ratio<u64>,
) -> Result<ParamSet> {
    if t_bound < 2 {
        return Err(Error::invalid("term bound must be at least 2"));
    }
    if *degree_bound < BigUint::from(2u32) {
        return Err(Error::invalid("degree bound must be at least 2"));
    }
    if mu.numer().is_zero() || mu * 3 >= Ratio::from_integer(1) {
        return Err(Error::invalid("failure budget must lie in (0, 1/3)"));
    }
    let lambda = lambda_bound(t_bound, degree_bound)?;

    // ell = 2 * (smallest k with lambda^k >= D)
    let lam = BigUint::from(lambda);
    let ell = 2 * smallest_power_at_least(&lam, degree_bound);

    // gamma = max(ceil(8 log_lambda D), ceil(8 ln(1/mu)));
    // the first term is the smallest k with lambda^k >= D^8
    let gamma_a = smallest_power_at_least(&lam, &degree_bound.pow(8));
    let gamma_b = real::ceil_ratio_ln(
        8,
        1,
        &BigUint::from(*mu.denom()),
        &BigUint::from(*mu.numer()),
    )?;
    let gamma = gamma_a.max(gamma_b);
    debug_assert!(gamma >= ell);

    // s = smallest power with q^s >= 2D + 1
    let ext_degree = smallest_power_at_least(&BigUint::from(q), &(degree_bound * 2u32 + 1u32));

    // m = ceil(log2(T^2 (1 + ell/4)^2 / (2 mu)))
    //   = smallest k with 2^k * 32 * num(mu) >= T^2 (4 + ell)^2 * den(mu)
    let target = BigUint::from(t_bound).pow(2)
        * BigUint::from(4 + ell).pow(2)
        * BigUint::from(*mu.denom());
    let mut pow = BigUint::from(32u32) * BigUint::from(*mu.numer());
    let mut diversifiers = 0u64;
    while pow < target {
        pow <<= 1;
        diversifiers += 1;
    }

    Ok(ParamSet {
        lambda,
        gamma,
        ell,
        diversifiers,
        ext_degree: u32::try_from(ext_degree)
            .map_err(|_| Error::invalid("extension degree out of range"))?,
        mu,
    })
}

/// Smallest `k >= 1` with `base^k >= target` (for `base >= 2`,
/// `target >= 2`).
fn smallest_power_at_least(base: &BigUint, target: &BigUint) -> u64 {
    let mut acc = base.clone();
    let mut k = 1u64;
    while acc < *target {
        acc *= base;
        k += 1;
    }
    k
}

/// All primes in `[a, b]`, ascending, by a bit-packed Eratosthenes sieve
/// over `[2, b]`.
pub fn primes_in_range(a: u64, b: u64) -> Result<Vec<u64>> {
    if a < 2 || a > b {
        return Err(Error::invalid("range must satisfy 2 <= a <= b"));
    }
    if b > 1 << 34 {
        return Err(Error::Internal(format!("sieve bound {b} too large")));
    }
    let n = b as usize;
    let mut composite = vec![0u64; n / 64 + 1];
    let get = |bits: &[u64], i: usize| bits[i / 64] >> (i % 64) & 1 == 1;
    let mut i = 2usize;
    while i * i <= n {
        if !get(&composite, i) {
            let mut j = i * i;
            while j <= n {
                composite[j / 64] |= 1 << (j % 64);
                j += i;
            }
        }
        i += 1;
    }
    Ok((a as usize..=n)
        .filter(|&i| !get(&composite, i))
        .map(|i| i as u64)
        .collect())
}

/// Candidate primes for one round: `gamma` distinct primes sampled
/// uniformly from `[lambda, 2*lambda]` when the interval is rich enough
/// (`gamma <= 3*lambda / (5 ln lambda)`), otherwise every prime in the
/// interval. Output is ascending either way.
pub fn choose_primes(lambda: u64, gamma: u64, rng: &mut impl Rng) -> Result<Vec<u64>> {
    if lambda < 21 {
        return Err(Error::invalid("lambda must be at least 21"));
    }
    let all = primes_in_range(lambda, 2 * lambda)?;
    if real::within_prime_sampling_threshold(gamma, lambda)? && gamma as usize <= all.len() {
        let mut picked: Vec<u64> = rand::seq::index::sample(rng, all.len(), gamma as usize)
            .into_iter()
            .map(|i| all[i])
            .collect();
        picked.sort_unstable();
        Ok(picked)
    } else {
        Ok(all)
    }
}

/// Runs the prime-selection procedure for `g = f - f_star` (known only
/// through the SLP): probes every candidate prime at `alpha = 1`, sorts by
/// image term count (descending, larger prime first on ties), and returns
/// the first `ell` primes with their images.
///
/// With probability greater than `1 - mu`, every returned prime leaves
/// fewer than `T/2` terms of `g` in collisions.
pub fn find_primes(
    slp: &Slp,
    f_star: &SparsePoly,
    t_bound: u64,
    degree_bound: &BigUint,
    mu: Ratio<u64>,
    rng: &mut impl Rng,
    ledger: &ProbeLedger,
) -> Result<PrimeImages> {
    let params = compute_params(t_bound, degree_bound, slp.field().modulus(), mu)?;
    Ok(find_primes_with_params(slp, f_star, &params, rng, ledger)?.0)
}

/// As [`find_primes`] but with precomputed parameters; also reports how many
/// candidates were probed.
pub(crate) fn find_primes_with_params(
    slp: &Slp,
    f_star: &SparsePoly,
    params: &ParamSet,
    rng: &mut impl Rng,
    ledger: &ProbeLedger,
) -> Result<(PrimeImages, u64)> {
    let candidates = choose_primes(params.lambda, params.gamma, rng)?;
    if (candidates.len() as u64) < params.ell {
        return Err(Error::Internal(format!(
            "only {} primes available for ell = {}",
            candidates.len(),
            params.ell
        )));
    }
    let one = ExtField::prime_field(slp.field()).one();
    let images: Vec<CyclicPoly> = exec::run_indexed(candidates.len(), |i| {
        compute_image(slp, f_star, &one, candidates[i], ledger)
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let counts: Vec<usize> = images.iter().map(CyclicPoly::term_count).collect();
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&i, &j| {
        counts[j]
            .cmp(&counts[i])
            .then(candidates[j].cmp(&candidates[i]))
    });

    let keep = params.ell as usize;
    let mut primes = Vec::with_capacity(keep);
    let mut kept_images = Vec::with_capacity(keep);
    for &idx in order.iter().take(keep) {
        primes.push(candidates[idx]);
        kept_images.push(images[idx].clone());
    }
    Ok((
        PrimeImages {
            primes,
            images: kept_images,
        },
        candidates.len() as u64,
    ))
}
