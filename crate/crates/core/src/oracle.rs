//! Brute-force oracles over *known* polynomials, for tests, experiments and
//! statistical harnesses.
//!
//! Everything here needs the polynomial in explicit sparse form, which the
//! interpolation engine never has — these functions must not be called from
//! the interpolation path, and are not.

use num_bigint::BigUint;

use crate::modpoly::SparsePoly;

/// The number of terms of `g` whose exponent residue modulo `p` is shared
/// with at least one other term — the terms that merge in
/// `g mod (z^p - 1)`.
pub fn collision_count(g: &SparsePoly, p: u64) -> usize {
    let mut class_sizes: std::collections::BTreeMap<u64, usize> = Default::default();
    let big_p = BigUint::from(p);
    for e in g.exponents() {
        let r = u64::try_from(e % &big_p).expect("residue fits u64");
        *class_sizes.entry(r).or_default() += 1;
    }
    class_sizes.values().filter(|&&n| n >= 2).map(|&n| n).sum()
}

/// The sub-polynomial of `g` with exponents congruent to `residue` mod
/// `prime`. The coefficient a diversified image shows at degree `residue`
/// is exactly this polynomial evaluated at the multiplier.
#[derive(Clone, Debug)]
pub struct TermBucket {
    pub prime: u64,
    pub residue: u64,
    pub poly: SparsePoly,
}

/// Partitions the terms of `g` by exponent residue modulo `prime`,
/// returning the nonempty buckets in ascending residue order.
pub fn term_buckets(g: &SparsePoly, prime: u64) -> Vec<TermBucket> {
    let big_p = BigUint::from(prime);
    let mut buckets: std::collections::BTreeMap<u64, SparsePoly> = Default::default();
    for (e, c) in g.terms() {
        let r = u64::try_from(e % &big_p).expect("residue fits u64");
        buckets
            .entry(r)
            .or_insert_with(|| SparsePoly::zero(g.field().clone()))
            .add_term(e.clone(), c.clone())
            .expect("same field");
    }
    buckets
        .into_iter()
        .map(|(residue, poly)| TermBucket {
            prime,
            residue,
            poly,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{ExtField, PrimeField};

    fn poly(terms: &[(u64, u64)]) -> SparsePoly {
        let k = ExtField::prime_field(PrimeField::new(7).unwrap());
        SparsePoly::from_terms(
            k.clone(),
            terms
                .iter()
                .map(|&(e, c)| (BigUint::from(e), k.from_base_residue(c))),
        )
        .unwrap()
    }

    #[test]
    fn collision_count_examples() {
        let g = poly(&[(9, 1), (4, 1), (0, 3)]);
        assert_eq!(collision_count(&g, 5), 2); // residues 4, 4, 0
        assert_eq!(collision_count(&g, 7), 0); // residues 2, 4, 0
        assert_eq!(collision_count(&poly(&[(12, 5)]), 3), 0);
    }

    #[test]
    fn buckets_partition_terms() {
        let g = poly(&[(9, 1), (4, 1), (0, 3)]);
        let buckets = term_buckets(&g, 5);
        assert_eq!(buckets.len(), 2);
        assert_eq!(buckets[0].residue, 0);
        assert_eq!(buckets[0].poly, poly(&[(0, 3)]));
        assert_eq!(buckets[1].residue, 4);
        assert_eq!(buckets[1].poly, poly(&[(9, 1), (4, 1)]));
        let total: usize = buckets.iter().map(|b| b.poly.term_count()).sum();
        assert_eq!(total, g.term_count());
    }
}
