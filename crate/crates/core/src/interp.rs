//! The interpolation engine.
//!
//! One round works on the residual `g = f - f_star`, known only through the
//! SLP. It selects primes `p_i` whose images keep most terms of `g` apart,
//! computes diversified images `g(alpha_j z) mod (z^{p_i} - 1)` for random
//! nonzero `alpha_j` in `F_{q^s}`, and groups image terms by their vector of
//! coefficients across the `alpha_j`. A vector seen for at least `ell/2` of
//! the primes is voted to be the image of one genuine term: its exponent is
//! recovered by Chinese remaindering the residues, and its coefficient is
//! read off an `alpha = 1` image. Each round halves the term bound; when one
//! term remains, the endgame reads it from images at the smallest primes.
//!
//! The driver is Monte Carlo: with failure budget `epsilon` split across the
//! rounds, the returned polynomial equals `f` with probability at least
//! `1 - epsilon`. Detected inconsistencies in the endgame surface as
//! [`Error::EndgameInconsistent`]; undetected wrong answers stay within the
//! `epsilon` budget.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::One;
use rand::Rng;

use crate::exec;
use crate::ff::{ExtField, ExtFieldElement};
use crate::modpoly::{CyclicPoly, SparsePoly};
use crate::primes::{compute_params, find_primes_with_params, ParamSet};
use crate::slp::{ProbeLedger, Slp};
use crate::{Error, Result};

/// The coefficients one candidate term shows across the `m` diversified
/// images. Ordered lexicographically by the canonical byte encoding of the
/// entries, so it can key an ordered dictionary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientVector {
    entries: Vec<ExtFieldElement>,
}

impl CoefficientVector {
    pub fn new(entries: Vec<ExtFieldElement>) -> Self {
        CoefficientVector { entries }
    }

    pub fn entries(&self) -> &[ExtFieldElement] {
        &self.entries
    }
}

impl Ord for CoefficientVector {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // byte-lexicographic over the little-endian encoding; comparing each
        // residue with swapped bytes is the same order without allocating
        for (a, b) in self.entries.iter().zip(&other.entries) {
            for (x, y) in a.residues().iter().zip(b.residues()) {
                match x.swap_bytes().cmp(&y.swap_bytes()) {
                    std::cmp::Ordering::Equal => {}
                    ord => return ord,
                }
            }
        }
        self.entries.len().cmp(&other.entries.len())
    }
}

impl PartialOrd for CoefficientVector {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered dictionary from coefficient vectors to the `(prime index,
/// residue)` pairs that produced them.
#[derive(Debug, Default)]
pub struct EvidenceDict {
    map: BTreeMap<CoefficientVector, Vec<(usize, u64)>>,
}

impl EvidenceDict {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn append(&mut self, key: CoefficientVector, pair: (usize, u64)) {
        self.map.entry(key).or_default().push(pair);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CoefficientVector, &Vec<(usize, u64)>)> {
        self.map.iter()
    }
}

/// `f(alpha z) - f_star(alpha z) mod (z^p - 1)`: one SLP probe minus the
/// explicit image of the running approximation. Records exactly one probe of
/// degree `p * s`.
pub fn compute_image(
    slp: &Slp,
    f_star: &SparsePoly,
    alpha: &ExtFieldElement,
    p: u64,
    ledger: &ProbeLedger,
) -> Result<CyclicPoly> {
    let probed = slp.probe(alpha, p, ledger)?;
    probed.cyclic_sub(&f_star.image(alpha, p)?)
}

/// Solves `x = r_k (mod m_k)` for pairwise-coprime moduli, returning the
/// unique solution below the product. Pairs are `(residue, modulus)`.
/// Duplicate moduli are tolerated only when their residues agree.
pub fn crt_combine(congruences: &[(u64, u64)]) -> Result<BigUint> {
    if congruences.is_empty() {
        return Err(Error::invalid("no congruences to combine"));
    }
    let mut sorted = congruences.to_vec();
    sorted.sort_by_key(|&(_, m)| m);
    let mut x = BigUint::from(sorted[0].0 % sorted[0].1);
    let mut modulus = BigUint::from(sorted[0].1);
    for window in sorted.windows(2) {
        let (r_prev, m_prev) = window[0];
        let (r, m) = window[1];
        if m == m_prev {
            if r % m == r_prev % m {
                continue;
            }
            return Err(Error::invalid(format!(
                "inconsistent congruences modulo {m}"
            )));
        }
        let x_mod_m = u64::try_from(&x % m).expect("residue fits");
        let diff = (r % m + m - x_mod_m % m) % m;
        let mod_inv = inv_mod_u64(
            u64::try_from(&modulus % m).expect("residue fits"),
            m,
        )
        .ok_or_else(|| Error::invalid(format!("moduli are not coprime at {m}")))?;
        let t = (diff as u128 * mod_inv as u128 % m as u128) as u64;
        x += &modulus * t;
        modulus *= m;
    }
    Ok(x)
}

/// Inverse of `a` modulo `m` when `gcd(a, m) = 1`.
fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// One genuine-looking term voted in by the evidence dictionary.
#[derive(Clone, Debug)]
pub struct VotedTerm {
    pub exponent: BigUint,
    pub coefficient: ExtFieldElement,
    pub evidence: Vec<(usize, u64)>,
}

/// Everything one approximation round decided, for reporting and for
/// post-hoc checks against known instances.
#[derive(Debug)]
pub struct BuildDetail {
    pub params: ParamSet,
    /// Candidate primes actually probed (`gamma` or the whole interval).
    pub candidates: u64,
    pub primes: Vec<u64>,
    pub alphas: Vec<ExtFieldElement>,
    /// Keys that reached the vote threshold and survived the filters.
    pub voted: Vec<VotedTerm>,
    pub keys_total: usize,
    pub keys_discarded_duplicate_prime: usize,
    pub keys_discarded_exponent_bound: usize,
}

/// Builds `f_double_star` containing (with probability greater than
/// `1 - mu`) all but at most `T/2` terms of `g = f - f_star`.
pub fn build_approximation(
    slp: &Slp,
    f_star: &SparsePoly,
    t_bound: u64,
    degree_bound: &BigUint,
    mu: Ratio<u64>,
    rng: &mut impl Rng,
    ledger: &ProbeLedger,
) -> Result<SparsePoly> {
    Ok(build_approximation_traced(slp, f_star, t_bound, degree_bound, mu, rng, ledger)?.0)
}

/// As [`build_approximation`], also returning the round's decisions.
///
/// Randomness is drawn in a fixed order: candidate primes, then the
/// extension modulus, then the diversifiers. All probe batches join in
/// deterministic order, so output depends only on the inputs and RNG state.
pub fn build_approximation_traced(
    slp: &Slp,
    f_star: &SparsePoly,
    t_bound: u64,
    degree_bound: &BigUint,
    mu: Ratio<u64>,
    rng: &mut impl Rng,
    ledger: &ProbeLedger,
) -> Result<(SparsePoly, BuildDetail)> {
    if f_star.field().degree() != 1 || f_star.field().base() != slp.field() {
        return Err(Error::FieldMismatch);
    }
    // the parameter formulas need D >= 2; raising the bound is harmless
    let d_params = degree_bound.clone().max(BigUint::from(2u32));
    let params = compute_params(t_bound, &d_params, slp.field().modulus(), mu)?;
    let (prime_images, candidates) = find_primes_with_params(slp, f_star, &params, rng, ledger)?;

    let ext = ExtField::random(slp.field(), params.ext_degree as usize, rng)?;
    let alphas: Vec<ExtFieldElement> = (0..params.diversifiers)
        .map(|_| ext.random_nonzero(rng))
        .collect();

    let ell = prime_images.primes.len();
    let m = alphas.len();
    let images: Vec<CyclicPoly> = {
        let jobs: Vec<(usize, usize)> = (0..ell)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .collect();
        exec::run_indexed(jobs.len(), |k| {
            let (i, j) = jobs[k];
            compute_image(slp, f_star, &alphas[j], prime_images.primes[i], ledger)
        })
        .into_iter()
        .collect::<Result<_>>()?
    };

    // evidence: for every residue seen in any diversified image of prime i,
    // key the coefficient vector across all alphas with the pair (i, e)
    let mut dict = EvidenceDict::new();
    for i in 0..ell {
        let mut residues: BTreeSet<u64> = BTreeSet::new();
        for j in 0..m {
            residues.extend(images[i * m + j].nonzero_exponents());
        }
        for e in residues {
            let entries: Vec<ExtFieldElement> =
                (0..m).map(|j| images[i * m + j].coeff(e)).collect();
            dict.append(CoefficientVector::new(entries), (i, e));
        }
    }

    let mut f_double_star = SparsePoly::zero(f_star.field().clone());
    let mut detail = BuildDetail {
        params: params.clone(),
        candidates,
        primes: prime_images.primes.clone(),
        alphas,
        voted: Vec::new(),
        keys_total: dict.len(),
        keys_discarded_duplicate_prime: 0,
        keys_discarded_exponent_bound: 0,
    };
    let threshold = (params.ell / 2) as usize;
    for (_, pairs) in dict.iter() {
        if pairs.len() < threshold {
            continue;
        }
        // a genuine term yields at most one residue per prime; a repeat
        // proves this key merges different term subsets
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            detail.keys_discarded_duplicate_prime += 1;
            continue;
        }
        // exponent from the first ell/2 congruences (smallest prime index);
        // their product is at least lambda^(ell/2) >= D
        let congruences: Vec<(u64, u64)> = pairs
            .iter()
            .take(threshold)
            .map(|&(i, e)| (e, prime_images.primes[i]))
            .collect();
        let exponent = crt_combine(&congruences)?;
        if exponent > *degree_bound {
            detail.keys_discarded_exponent_bound += 1;
            continue;
        }
        // coefficient from the alpha = 1 image of the first evidence pair
        let (i0, e0) = pairs[0];
        let coefficient = prime_images.images[i0].coeff(e0);
        f_double_star.add_term(exponent.clone(), coefficient.clone())?;
        detail.voted.push(VotedTerm {
            exponent,
            coefficient,
            evidence: pairs.clone(),
        });
    }
    Ok((f_double_star, detail))
}

/// Recovers the at-most-one remaining term of `g = f - f_star`. The
/// coefficient is `g(1)`; the exponent comes from images at the smallest
/// primes `2, 3, 5, ...` until their product exceeds `degree_bound`.
///
/// Any image with more than one term, a coefficient disagreeing with
/// `g(1)`, or a reconstructed exponent beyond the bound proves the
/// single-term assumption wrong and raises
/// [`Error::EndgameInconsistent`].
pub fn single_term_endgame(
    slp: &Slp,
    f_star: &SparsePoly,
    degree_bound: &BigUint,
    ledger: &ProbeLedger,
) -> Result<SparsePoly> {
    if f_star.field().degree() != 1 || f_star.field().base() != slp.field() {
        return Err(Error::FieldMismatch);
    }
    let one = f_star.field().one();
    let c = compute_image(slp, f_star, &one, 1, ledger)?.coeff(0);
    if c.is_zero() {
        return Ok(f_star.clone());
    }
    let mut congruences: Vec<(u64, u64)> = Vec::new();
    let mut product = BigUint::one();
    let mut p = 2u64;
    while product <= *degree_bound {
        let image = compute_image(slp, f_star, &one, p, ledger)?;
        let nonzero = image.nonzero_exponents();
        if nonzero.len() != 1 {
            return Err(Error::EndgameInconsistent(format!(
                "image modulo {p} has {} terms, expected exactly 1",
                nonzero.len()
            )));
        }
        if image.coeff(nonzero[0]) != c {
            return Err(Error::EndgameInconsistent(format!(
                "coefficient modulo {p} disagrees with g(1)"
            )));
        }
        congruences.push((nonzero[0], p));
        product *= p;
        p = next_prime(p);
    }
    let exponent = crt_combine(&congruences)?;
    if exponent > *degree_bound {
        return Err(Error::EndgameInconsistent(format!(
            "reconstructed exponent {exponent} exceeds the degree bound"
        )));
    }
    let mut out = f_star.clone();
    out.add_term(exponent, c)?;
    Ok(out)
}

fn next_prime(after: u64) -> u64 {
    let mut n = after + 1;
    loop {
        if crate::ff::is_prime_u64(n) {
            return n;
        }
        n += 1;
    }
}

/// Per-round entry of the interpolation trace.
#[derive(Clone, Debug)]
pub struct IterationTrace {
    pub t_bound: u64,
    pub lambda: u64,
    pub ell: u64,
    pub gamma: u64,
    /// Candidate primes actually probed this round.
    pub candidates: u64,
    pub diversifiers: u64,
    pub ext_degree: u32,
    pub terms_built: u64,
    pub probes: u64,
    pub probe_size: u64,
    pub max_probe_degree: u64,
}

/// Result of a full interpolation run.
#[derive(Debug)]
pub struct InterpolationResult {
    pub poly: SparsePoly,
    pub ledger: ProbeLedger,
    pub trace: Vec<IterationTrace>,
    pub endgame_probes: u64,
    pub endgame_probe_size: u64,
}

/// Interpolates the sparse polynomial computed by `slp`, given bounds
/// `T >= #f` and `D >= deg f`, with success probability at least
/// `1 - epsilon`.
///
/// The failure budget is split as `mu = epsilon / (2 * max(1, ceil(log2 T)))`
/// with each round receiving `mu / 2`. Rounds halve `T`; the endgame
/// recovers the final term. Requires `T >= 1`, `D >= 1` and
/// `0 < epsilon <= 1/2`.
pub fn majority_vote_interpolate(
    slp: &Slp,
    t_bound: u64,
    degree_bound: &BigUint,
    epsilon: Ratio<u64>,
    rng: &mut impl Rng,
) -> Result<InterpolationResult> {
    if t_bound < 1 {
        return Err(Error::invalid("term bound must be at least 1"));
    }
    if degree_bound < &BigUint::one() {
        return Err(Error::invalid("degree bound must be at least 1"));
    }
    if epsilon.numer() == &0 || epsilon > Ratio::new(1, 2) {
        return Err(Error::invalid("epsilon must lie in (0, 1/2]"));
    }
    let ledger = ProbeLedger::new();
    let mut f_star = SparsePoly::zero(ExtField::prime_field(slp.field()));
    let mu = epsilon / Ratio::from_integer(2 * ceil_log2(t_bound).max(1));
    let mut t = t_bound;
    let mut trace = Vec::new();
    while t > 1 {
        let probes_before = ledger.probe_count();
        let size_before = ledger.total_probe_size();
        let (f_double_star, detail) = build_approximation_traced(
            slp,
            &f_star,
            t,
            degree_bound,
            mu / Ratio::from_integer(2),
            rng,
            &ledger,
        )?;
        f_star = f_star.add(&f_double_star)?;
        let records = ledger.records();
        let max_probe_degree = records[probes_before as usize..]
            .iter()
            .map(|r| r.degree())
            .max()
            .unwrap_or(0);
        trace.push(IterationTrace {
            t_bound: t,
            lambda: detail.params.lambda,
            ell: detail.params.ell,
            gamma: detail.params.gamma,
            candidates: detail.candidates,
            diversifiers: detail.params.diversifiers,
            ext_degree: detail.params.ext_degree,
            terms_built: f_double_star.term_count() as u64,
            probes: ledger.probe_count() - probes_before,
            probe_size: ledger.total_probe_size() - size_before,
            max_probe_degree,
        });
        t /= 2;
    }
    let probes_before = ledger.probe_count();
    let size_before = ledger.total_probe_size();
    let poly = single_term_endgame(slp, &f_star, degree_bound, &ledger)?;
    let endgame_probes = ledger.probe_count() - probes_before;
    let endgame_probe_size = ledger.total_probe_size() - size_before;
    Ok(InterpolationResult {
        poly,
        ledger,
        trace,
        endgame_probes,
        endgame_probe_size,
    })
}

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2(n: u64) -> u64 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros() as u64
    }
}

/// Exact dense recovery by one probe at `alpha = 1` with cycle length
/// `D + 1`: the image is the polynomial itself whenever `deg f <= D`. This
/// is the deterministic referee the randomized path is checked against.
pub fn recover_dense(slp: &Slp, degree_bound: u64, ledger: &ProbeLedger) -> Result<SparsePoly> {
    let one = ExtField::prime_field(slp.field()).one();
    let image = slp.probe(&one, degree_bound + 1, ledger)?;
    Ok(image.to_sparse())
}
