//! Two polynomial representations: sparse exponent-to-coefficient maps with
//! big-integer exponents, and dense cyclic polynomials in `R[z]/(z^p - 1)`.
//!
//! Cyclic polynomials are the working representation for probe results. They
//! store all `p` coefficients packed as consecutive residue groups so that
//! ring operations run on flat buffers.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use crate::ff::{ExtField, ExtFieldElement, PrimeField};
use crate::{Error, Result};

/// A sparse polynomial: ordered map from distinct exponents to nonzero
/// coefficients. Iteration yields ascending exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    field: ExtField,
    terms: BTreeMap<BigUint, ExtFieldElement>,
}

impl SparsePoly {
    pub fn zero(field: ExtField) -> Self {
        SparsePoly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(field: ExtField, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BigUint, ExtFieldElement)>,
    {
        let mut poly = SparsePoly::zero(field);
        for (e, c) in terms {
            poly.add_term(e, c)?;
        }
        Ok(poly)
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    /// Adds `c * z^e`, merging with any existing term and dropping the term
    /// if the merged coefficient is zero.
    pub fn add_term(&mut self, e: BigUint, c: ExtFieldElement) -> Result<()> {
        if *c.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let merged = self.field.add(slot.get(), &c)?;
                if merged.is_zero() {
                    slot.remove();
                } else {
                    slot.insert(merged);
                }
            }
        }
        Ok(())
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<&BigUint> {
        self.terms.keys().next_back()
    }

    /// Coefficient of `z^e` (zero when absent).
    pub fn coeff(&self, e: &BigUint) -> ExtFieldElement {
        self.terms.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &ExtFieldElement)> {
        self.terms.iter()
    }

    pub fn exponents(&self) -> impl Iterator<Item = &BigUint> {
        self.terms.keys()
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), self.field.neg(c)?)?;
        }
        Ok(out)
    }

    /// Coefficient of this polynomial coerced into `target`: identical
    /// fields pass through, and base-field (`s = 1`) coefficients embed into
    /// any extension of the same prime.
    fn coerce(&self, c: &ExtFieldElement, target: &ExtField) -> Result<ExtFieldElement> {
        if self.field == *target {
            Ok(c.clone())
        } else if self.field.degree() == 1 && self.field.base() == target.base() {
            Ok(target.from_base_residue(c.residues()[0]))
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Evaluates at `x`, which may live in an extension of the coefficient
    /// field.
    pub fn eval(&self, x: &ExtFieldElement) -> Result<ExtFieldElement> {
        let target = x.field().clone();
        let mut acc = target.zero();
        for (e, c) in self.terms() {
            let term = target.mul(&self.coerce(c, &target)?, &x.pow(e))?;
            acc = target.add(&acc, &term)?;
        }
        Ok(acc)
    }

    /// The image `sum_i c_i * alpha^{e_i} * z^{e_i mod p}` of `f(alpha z)`
    /// modulo `z^p - 1`, over the field of `alpha`.
    pub fn image(&self, alpha: &ExtFieldElement, p: u64) -> Result<CyclicPoly> {
        let target = alpha.field().clone();
        let mut out = CyclicPoly::zero(target.clone(), p)?;
        let s = target.degree();
        let big_p = BigUint::from(p);
        for (e, c) in self.terms() {
            let val = target.mul(&self.coerce(c, &target)?, &alpha.pow(e))?;
            let slot = u64::try_from(e % &big_p).expect("residue fits u64") as usize;
            target.add_assign_packed(
                &mut out.packed[slot * s..(slot + 1) * s],
                target.packed_of(&val),
            );
        }
        Ok(out)
    }

    /// Canonical text form, see [`SparsePoly::from_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("q {}\n", self.field.base().modulus()));
        if self.field.degree() > 1 {
            out.push_str(&format!("s {}\n", self.field.degree()));
            let coeffs: Vec<String> = self.field.modulus().iter().map(u64::to_string).collect();
            out.push_str(&format!("modulus {}\n", coeffs.join(" ")));
        }
        for (e, c) in self.terms() {
            let res: Vec<String> = c.residues().iter().map(u64::to_string).collect();
            out.push_str(&format!("{} {}\n", res.join(" "), e));
        }
        out
    }

    /// Parses the line-oriented sparse-polynomial format:
    ///
    /// ```text
    /// q <prime>
    /// s <degree>            (optional, with the next line)
    /// modulus <c0> ... <cs>
    /// <r0> ... <r_{s-1}> <exponent>
    /// ```
    pub fn from_text(text: &str) -> Result<SparsePoly> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let parse_err = |line: usize, msg: &str| Error::Parse {
            line,
            msg: msg.to_string(),
        };
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty polynomial file"))?;
        let q = parse_header(header, "q").ok_or_else(|| parse_err(line_no, "expected `q <prime>`"))?;
        let base = PrimeField::new(q).map_err(|e| parse_err(line_no, &e.to_string()))?;

        let mut pending = lines.next();
        let field = if let Some((s_line, l)) = pending {
            if let Some(s) = parse_header(l, "s") {
                let (m_line, ml) = lines
                    .next()
                    .ok_or_else(|| parse_err(s_line, "`s` must be followed by `modulus`"))?;
                let toks: Vec<&str> = ml.split_whitespace().collect();
                if toks.first() != Some(&"modulus") || toks.len() != s as usize + 2 {
                    return Err(parse_err(m_line, "expected `modulus` with s + 1 coefficients"));
                }
                let coeffs: Vec<u64> = toks[1..]
                    .iter()
                    .map(|t| t.parse::<u64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| parse_err(m_line, "bad modulus coefficient"))?;
                pending = lines.next();
                ExtField::new(base, coeffs).map_err(|e| parse_err(m_line, &e.to_string()))?
            } else {
                ExtField::prime_field(base)
            }
        } else {
            ExtField::prime_field(base)
        };

        let s = field.degree();
        let mut poly = SparsePoly::zero(field.clone());
        while let Some((line_no, l)) = pending {
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.len() != s + 1 {
                return Err(parse_err(
                    line_no,
                    &format!("term line needs {s} residues and an exponent"),
                ));
            }
            let residues: Vec<u64> = toks[..s]
                .iter()
                .map(|t| t.parse::<u64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| parse_err(line_no, "bad coefficient residue"))?;
            let e: BigUint = toks[s]
                .parse()
                .map_err(|_| parse_err(line_no, "bad exponent"))?;
            let c = field
                .element(&residues)
                .map_err(|e| parse_err(line_no, &e.to_string()))?;
            poly.add_term(e, c)
                .map_err(|e| parse_err(line_no, &e.to_string()))?;
            pending = lines.next();
        }
        Ok(poly)
    }
}

fn parse_header(line: &str, key: &str) -> Option<u64> {
    let mut toks = line.split_whitespace();
    if toks.next() != Some(key) {
        return None;
    }
    let v = toks.next()?.parse().ok()?;
    if toks.next().is_some() {
        return None;
    }
    Some(v)
}

/// A uniformly random polynomial with exactly `t` terms: distinct exponents
/// in `[0, max_exp]` and nonzero coefficients. Deterministic per RNG state.
pub fn random_sparse_poly(
    field: &ExtField,
    t: usize,
    max_exp: &BigUint,
    rng: &mut impl Rng,
) -> Result<SparsePoly> {
    let choices = max_exp + 1u32;
    if BigUint::from(t) > choices {
        return Err(Error::invalid(format!(
            "cannot place {t} distinct exponents in [0, {max_exp}]"
        )));
    }
    let mut exponents = std::collections::BTreeSet::new();
    if let Ok(n) = u64::try_from(&choices) {
        if n <= 1 << 20 && 2 * t as u64 > n {
            // dense instance: sample by shuffling the full range
            let mut all: Vec<u64> = (0..n).collect();
            for i in 0..t {
                let j = rng.random_range(i..all.len());
                all.swap(i, j);
            }
            exponents.extend(all[..t].iter().map(|&e| BigUint::from(e)));
        }
    }
    while exponents.len() < t {
        exponents.insert(random_biguint_inclusive(max_exp, rng));
    }
    let mut poly = SparsePoly::zero(field.clone());
    for e in exponents {
        poly.add_term(e, field.random_nonzero(rng))?;
    }
    Ok(poly)
}

/// Uniform `BigUint` in `[0, max]` by bit-rejection.
pub fn random_biguint_inclusive(max: &BigUint, rng: &mut impl Rng) -> BigUint {
    if max.is_zero() {
        return BigUint::zero();
    }
    let bits = max.bits();
    loop {
        let mut limbs = Vec::with_capacity(bits.div_ceil(32) as usize);
        let mut remaining = bits;
        while remaining > 0 {
            let take = remaining.min(32);
            let mask = if take == 32 { u32::MAX } else { (1u32 << take) - 1 };
            limbs.push(rng.random::<u32>() & mask);
            remaining -= take;
        }
        let v = BigUint::new(limbs);
        if v <= *max {
            return v;
        }
    }
}

/// A dense element of `F_{q^s}[z]/(z^p - 1)`: all `p` coefficients stored as
/// packed residue groups of width `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicPoly {
    field: ExtField,
    p: u64,
    packed: Vec<u64>,
}

/// Cap on `p * s` buffer slots, to fail cleanly instead of exhausting memory.
const MAX_CYCLIC_SLOTS: u64 = 1 << 28;

impl CyclicPoly {
    pub fn zero(field: ExtField, p: u64) -> Result<Self> {
        if p < 1 {
            return Err(Error::invalid("cycle length must be >= 1"));
        }
        let slots = p
            .checked_mul(field.degree() as u64)
            .filter(|&n| n <= MAX_CYCLIC_SLOTS)
            .ok_or_else(|| Error::Internal(format!("cycle length {p} too large")))?;
        Ok(CyclicPoly {
            field,
            p,
            packed: vec![0; slots as usize],
        })
    }

    pub fn from_coeffs(field: ExtField, p: u64, coeffs: &[ExtFieldElement]) -> Result<Self> {
        if coeffs.len() as u64 > p {
            return Err(Error::invalid("more coefficients than the cycle length"));
        }
        let mut out = CyclicPoly::zero(field.clone(), p)?;
        let s = field.degree();
        for (i, c) in coeffs.iter().enumerate() {
            if *c.field() != field {
                return Err(Error::FieldMismatch);
            }
            out.packed[i * s..(i + 1) * s].copy_from_slice(field.packed_of(c));
        }
        Ok(out)
    }

    pub(crate) fn from_packed(field: ExtField, p: u64, packed: Vec<u64>) -> Self {
        debug_assert_eq!(packed.len(), p as usize * field.degree());
        CyclicPoly { field, p, packed }
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn cycle_len(&self) -> u64 {
        self.p
    }

    pub fn coeff(&self, i: u64) -> ExtFieldElement {
        assert!(i < self.p, "index {i} out of cycle range {}", self.p);
        let s = self.field.degree();
        let i = i as usize;
        self.field.element_from_packed(&self.packed[i * s..(i + 1) * s])
    }

    fn slot_is_zero(&self, i: usize) -> bool {
        let s = self.field.degree();
        self.packed[i * s..(i + 1) * s].iter().all(|&c| c == 0)
    }

    /// Number of nonzero coefficients.
    pub fn term_count(&self) -> usize {
        (0..self.p as usize).filter(|&i| !self.slot_is_zero(i)).count()
    }

    pub fn is_zero(&self) -> bool {
        self.packed.iter().all(|&c| c == 0)
    }

    /// Degrees with a nonzero coefficient, ascending.
    pub fn nonzero_exponents(&self) -> Vec<u64> {
        (0..self.p as usize)
            .filter(|&i| !self.slot_is_zero(i))
            .map(|i| i as u64)
            .collect()
    }

    fn check_compatible(&self, other: &CyclicPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.p != other.p {
            return Err(Error::CycleMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn cyclic_add(&self, other: &CyclicPoly) -> Result<CyclicPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        self.field.add_assign_packed(&mut out.packed, &other.packed);
        Ok(out)
    }

    pub fn cyclic_sub(&self, other: &CyclicPoly) -> Result<CyclicPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        self.field.sub_assign_packed(&mut out.packed, &other.packed);
        Ok(out)
    }

    /// Cyclic convolution: `out_k = sum_{i+j = k mod p} a_i * b_j`.
    pub fn cyclic_mul(&self, other: &CyclicPoly) -> Result<CyclicPoly> {
        self.check_compatible(other)?;
        let packed = cyclic_mul_packed(&self.field, self.p as usize, &self.packed, &other.packed);
        Ok(CyclicPoly::from_packed(self.field.clone(), self.p, packed))
    }

    /// Converts to a sparse polynomial with the same (small) exponents.
    pub fn to_sparse(&self) -> SparsePoly {
        let mut out = SparsePoly::zero(self.field.clone());
        for i in self.nonzero_exponents() {
            out.add_term(BigUint::from(i), self.coeff(i))
                .expect("same field");
        }
        out
    }

    pub(crate) fn packed(&self) -> &[u64] {
        &self.packed
    }
}

/// Convolution kernel on packed buffers. Skips zero coefficients, so cost is
/// `O(#a * #b)` element products plus the output buffer.
pub(crate) fn cyclic_mul_packed(field: &ExtField, p: usize, a: &[u64], b: &[u64]) -> Vec<u64> {
    let s = field.degree();
    let mut out = vec![0u64; p * s];
    let nz = |buf: &[u64]| -> Vec<usize> {
        (0..p)
            .filter(|&i| buf[i * s..(i + 1) * s].iter().any(|&c| c != 0))
            .collect()
    };
    let ia = nz(a);
    let ib = nz(b);
    let mut prod = vec![0u64; s];
    let mut tmp = vec![0u64; 2 * s - 1];
    for &i in &ia {
        let av = &a[i * s..(i + 1) * s];
        for &j in &ib {
            field.mul_packed(av, &b[j * s..(j + 1) * s], &mut prod, &mut tmp);
            let mut k = i + j;
            if k >= p {
                k -= p;
            }
            field.add_assign_packed(&mut out[k * s..(k + 1) * s], &prod);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::PrimeField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn fq(q: u64) -> ExtField {
        ExtField::prime_field(PrimeField::new(q).unwrap())
    }

    fn cp(field: &ExtField, p: u64, coeffs: &[u64]) -> CyclicPoly {
        let elems: Vec<_> = coeffs.iter().map(|&c| field.from_base_residue(c)).collect();
        CyclicPoly::from_coeffs(field.clone(), p, &elems).unwrap()
    }

    fn sp(field: &ExtField, terms: &[(u64, u64)]) -> SparsePoly {
        SparsePoly::from_terms(
            field.clone(),
            terms
                .iter()
                .map(|&(e, c)| (BigUint::from(e), field.from_base_residue(c))),
        )
        .unwrap()
    }

    #[test]
    fn cyclic_add_cancels_inverse() {
        let k = fq(5);
        let a = cp(&k, 3, &[1, 1, 0]);
        let b = cp(&k, 3, &[4, 4, 0]);
        assert!(a.cyclic_add(&b).unwrap().is_zero());
    }

    #[test]
    fn cyclic_sub_example() {
        let k = fq(7);
        let a = cp(&k, 2, &[3, 1]);
        let b = cp(&k, 2, &[3, 0]);
        assert_eq!(a.cyclic_sub(&b).unwrap(), cp(&k, 2, &[0, 1]));
    }

    #[test]
    fn cycle_len_one_is_field_arithmetic() {
        let k = fq(7);
        let a = cp(&k, 1, &[5]);
        let b = cp(&k, 1, &[4]);
        assert_eq!(a.cyclic_add(&b).unwrap(), cp(&k, 1, &[2]));
        assert_eq!(a.cyclic_mul(&b).unwrap(), cp(&k, 1, &[6]));
    }

    #[test]
    fn cyclic_mul_examples() {
        let k = fq(5);
        let one_plus_z = cp(&k, 3, &[1, 1, 0]);
        assert_eq!(
            one_plus_z.cyclic_mul(&one_plus_z).unwrap(),
            cp(&k, 3, &[1, 2, 1])
        );
        let z2 = cp(&k, 3, &[0, 0, 1]);
        assert_eq!(z2.cyclic_mul(&z2).unwrap(), cp(&k, 3, &[0, 1, 0]));
        let a = cp(&k, 3, &[2, 0, 3]);
        let one = cp(&k, 3, &[1, 0, 0]);
        assert_eq!(a.cyclic_mul(&one).unwrap(), a);
    }

    #[test]
    fn mismatched_operands_are_rejected() {
        let k = fq(5);
        let a = cp(&k, 3, &[1]);
        let b = cp(&k, 4, &[1]);
        assert!(matches!(
            a.cyclic_add(&b),
            Err(Error::CycleMismatch(3, 4))
        ));
        let c = cp(&fq(7), 3, &[1]);
        assert!(matches!(a.cyclic_mul(&c), Err(Error::FieldMismatch)));
    }

    #[test]
    fn image_examples() {
        let k = fq(7);
        let f = sp(&k, &[(10, 3), (3, 5)]);
        let img1 = f.image(&k.one(), 4).unwrap();
        assert_eq!(img1, cp(&k, 4, &[0, 0, 3, 5]));
        let img2 = f.image(&k.from_base_residue(2), 4).unwrap();
        assert_eq!(img2, cp(&k, 4, &[0, 0, 6, 5]));
        let zero = SparsePoly::zero(k.clone());
        assert!(zero.image(&k.one(), 4).unwrap().is_zero());
    }

    #[test]
    fn term_count_examples() {
        let k = fq(7);
        assert_eq!(CyclicPoly::zero(k.clone(), 5).unwrap().term_count(), 0);
        assert_eq!(cp(&k, 4, &[0, 0, 3, 5]).term_count(), 2);
        let f = sp(&k, &[(9, 1), (4, 1), (0, 3)]);
        assert_eq!(f.image(&k.one(), 5).unwrap().term_count(), 2);
    }

    #[test]
    fn eval_examples() {
        let k = fq(7);
        let f = sp(&k, &[(10, 3), (3, 5)]);
        assert_eq!(f.eval(&k.one()).unwrap(), k.one());
        let zero = SparsePoly::zero(k.clone());
        assert!(zero.eval(&k.from_base_residue(4)).unwrap().is_zero());
        let c = sp(&k, &[(0, 6)]);
        assert_eq!(
            c.eval(&k.from_base_residue(3)).unwrap(),
            k.from_base_residue(6)
        );
    }

    #[test]
    fn eval_embeds_base_coefficients() {
        let base = PrimeField::new(3).unwrap();
        let k9 = ExtField::new(base, vec![1, 0, 1]).unwrap();
        let f = sp(&fq(3), &[(2, 2), (0, 1)]); // 2z^2 + 1
        let y = k9.element(&[0, 1]).unwrap();
        // 2y^2 + 1 = 2*(-1) + 1 = -1 = 2
        assert_eq!(f.eval(&y).unwrap(), k9.from_base_residue(2));
    }

    #[test]
    fn add_term_merges_and_drops_zero() {
        let k = fq(5);
        let mut f = sp(&k, &[(3, 2)]);
        f.add_term(BigUint::from(3u32), k.from_base_residue(3)).unwrap();
        assert!(f.is_zero());
        f.add_term(BigUint::from(1u32), k.zero()).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn image_is_additive() {
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        let k = fq(101);
        let bound = BigUint::from(500u32);
        for _ in 0..25 {
            let f = random_sparse_poly(&k, 6, &bound, &mut rng).unwrap();
            let h = random_sparse_poly(&k, 4, &bound, &mut rng).unwrap();
            let alpha = k.random_nonzero(&mut rng);
            let p = rng.random_range(1..40u64);
            let lhs = f.add(&h).unwrap().image(&alpha, p).unwrap();
            let rhs = f
                .image(&alpha, p)
                .unwrap()
                .cyclic_add(&h.image(&alpha, p).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn image_at_large_cycle_is_exact() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        let k = fq(13);
        let bound = BigUint::from(60u32);
        for _ in 0..25 {
            let f = random_sparse_poly(&k, 5, &bound, &mut rng).unwrap();
            let p = 61 + rng.random_range(0..10u64);
            let img = f.image(&k.one(), p).unwrap();
            assert_eq!(img.term_count(), f.term_count());
            assert_eq!(img.to_sparse(), f);
        }
    }

    #[test]
    fn convolution_matches_schoolbook_with_folding() {
        // exhaustive over p <= 4 here; the full p <= 6 sweep runs in the
        // acceptance suite
        let k = fq(5);
        for p in 1u64..=4 {
            let total = 3u64.pow(p as u32);
            for code_a in 0..total {
                for code_b in 0..total {
                    let dig = |code: u64, i: u32| code / 3u64.pow(i) % 3;
                    let a: Vec<u64> = (0..p as u32).map(|i| dig(code_a, i)).collect();
                    let b: Vec<u64> = (0..p as u32).map(|i| dig(code_b, i)).collect();
                    let got = cp(&k, p, &a).cyclic_mul(&cp(&k, p, &b)).unwrap();
                    let mut want = vec![0u64; p as usize];
                    for (i, &x) in a.iter().enumerate() {
                        for (j, &y) in b.iter().enumerate() {
                            let slot = (i + j) % p as usize;
                            want[slot] = (want[slot] + x * y) % 5;
                        }
                    }
                    assert_eq!(got, cp(&k, p, &want));
                }
            }
        }
    }

    #[test]
    fn text_round_trip_base_field() {
        let k = fq(101);
        let f = sp(&k, &[(0, 7), (12345, 100)]);
        let text = f.to_text();
        assert_eq!(text, "q 101\n7 0\n100 12345\n");
        assert_eq!(SparsePoly::from_text(&text).unwrap(), f);
    }

    #[test]
    fn text_round_trip_extension_field() {
        let base = PrimeField::new(3).unwrap();
        let k = ExtField::new(base, vec![1, 0, 1]).unwrap();
        let mut f = SparsePoly::zero(k.clone());
        f.add_term(BigUint::from(9u32), k.element(&[1, 2]).unwrap())
            .unwrap();
        let text = f.to_text();
        assert_eq!(text, "q 3\ns 2\nmodulus 1 0 1\n1 2 9\n");
        assert_eq!(SparsePoly::from_text(&text).unwrap(), f);
    }

    #[test]
    fn text_parse_errors_carry_line_numbers() {
        match SparsePoly::from_text("q 101\n3 nope\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(SparsePoly::from_text("").is_err());
        assert!(SparsePoly::from_text("q 6\n").is_err());
    }

    #[test]
    fn random_poly_has_exact_shape() {
        let k = fq(101);
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let bound = BigUint::from(10_000u32);
        let f = random_sparse_poly(&k, 10, &bound, &mut rng).unwrap();
        assert_eq!(f.term_count(), 10);
        assert!(f.degree().unwrap() <= &bound);
        assert!(f.terms().all(|(_, c)| !c.is_zero()));
        // infeasible request
        assert!(random_sparse_poly(&k, 5, &BigUint::from(3u32), &mut rng).is_err());
        // t = max_exp + 1 forces every exponent
        let g = random_sparse_poly(&k, 4, &BigUint::from(3u32), &mut rng).unwrap();
        assert_eq!(g.term_count(), 4);
    }
}
