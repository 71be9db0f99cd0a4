//! Exact arithmetic in prime fields `F_q` and extension fields
//! `F_{q^s} = F_q[y]/<m(y)>`.
//!
//! Moduli are restricted to primes `2 <= q < 2^62` so that products fit in
//! double-word intermediates. Extension elements are stored as canonical
//! coefficient vectors of length exactly `s`, so equality is coefficientwise
//! equality and the little-endian byte encoding below is a total order.

use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;

use crate::{Error, Result};

/// The prime field `F_q` for a machine-word-sized prime `q < 2^62`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    q: u64,
}

/// A residue in `[0, q)` tagged with its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: PrimeField,
    value: u64,
}

impl PrimeField {
    /// Largest admissible modulus, exclusive.
    pub const MAX_MODULUS: u64 = 1 << 62;

    /// Constructs `F_q`, verifying primality with a deterministic
    /// Miller-Rabin test (exact for this size range).
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 || q >= Self::MAX_MODULUS || !is_prime_u64(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(PrimeField { q })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn element(&self, v: u64) -> FieldElement {
        FieldElement {
            field: *self,
            value: v % self.q,
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    pub fn pow_u64(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.q;
        base %= self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if a % self.q == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow_u64(a, self.q - 2))
    }

    /// Uniform residue in `[0, q)`.
    pub fn random(&self, rng: &mut impl Rng) -> u64 {
        rng.random_range(0..self.q)
    }
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(FieldElement {
            field: self.field,
            value: self.field.inv(self.value)?,
        })
    }
}

macro_rules! fe_binop {
    ($trait:ident, $method:ident, $op:ident) => {
        impl std::ops::$trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                assert_eq!(self.field, rhs.field, "operands from different fields");
                FieldElement {
                    field: self.field,
                    value: self.field.$op(self.value, rhs.value),
                }
            }
        }
    };
}
fe_binop!(Add, add, add);
fe_binop!(Sub, sub, sub);
fe_binop!(Mul, mul, mul);

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field,
            value: self.field.neg(self.value),
        }
    }
}

/// Deterministic Miller-Rabin, exact for all `n < 3.3 * 10^24`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        r += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[derive(Debug)]
struct ExtFieldInner {
    base: PrimeField,
    s: usize,
    /// Monic modulus, ascending coefficients, length `s + 1`, last entry 1.
    modulus: Vec<u64>,
}

/// The extension field `F_{q^s} = F_q[y]/<m(y)>` with `m` monic irreducible
/// of degree `s`. Cloning is cheap; two handles compare equal when they have
/// the same base prime, degree, and modulus.
#[derive(Clone, Debug)]
pub struct ExtField {
    inner: Arc<ExtFieldInner>,
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.base == other.inner.base
                && self.inner.s == other.inner.s
                && self.inner.modulus == other.inner.modulus)
    }
}
impl Eq for ExtField {}

/// An element of `F_{q^s}`: exactly `s` reduced coefficients of
/// `y^0 .. y^{s-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtFieldElement {
    field: ExtField,
    coeffs: Vec<u64>,
}

impl ExtField {
    /// Builds `F_q[y]/<m(y)>` from an explicit monic modulus (ascending
    /// coefficients, degree >= 1). Irreducibility is checked.
    pub fn new(base: PrimeField, modulus: Vec<u64>) -> Result<Self> {
        let modulus: Vec<u64> = modulus.iter().map(|&c| c % base.modulus()).collect();
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::invalid(
                "extension modulus must be monic of degree >= 1",
            ));
        }
        if !is_irreducible(base, &modulus) {
            return Err(Error::invalid("extension modulus is reducible"));
        }
        let s = modulus.len() - 1;
        Ok(ExtField {
            inner: Arc::new(ExtFieldInner { base, s, modulus }),
        })
    }

    /// The degree-1 extension with modulus `y`, i.e. `F_q` itself.
    pub fn prime_field(base: PrimeField) -> Self {
        ExtField {
            inner: Arc::new(ExtFieldInner {
                base,
                s: 1,
                modulus: vec![0, 1],
            }),
        }
    }

    /// Builds `F_{q^s}` from a randomly found irreducible modulus.
    /// Deterministic given the RNG state.
    pub fn random(base: PrimeField, s: usize, rng: &mut impl Rng) -> Result<Self> {
        let modulus = find_irreducible(base, s, rng)?;
        if s == 1 {
            return Ok(Self::prime_field(base));
        }
        ExtField::new(base, modulus)
    }

    pub fn base(&self) -> PrimeField {
        self.inner.base
    }

    /// Extension degree `s >= 1`.
    pub fn degree(&self) -> usize {
        self.inner.s
    }

    /// Ascending modulus coefficients, length `s + 1`.
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    /// Number of elements `q^s` (may be large).
    pub fn order(&self) -> BigUint {
        BigUint::from(self.inner.base.modulus()).pow(self.inner.s as u32)
    }

    pub fn zero(&self) -> ExtFieldElement {
        ExtFieldElement {
            field: self.clone(),
            coeffs: vec![0; self.inner.s],
        }
    }

    pub fn one(&self) -> ExtFieldElement {
        self.from_base_residue(1)
    }

    /// Embeds a base-field residue as a constant polynomial.
    pub fn from_base_residue(&self, v: u64) -> ExtFieldElement {
        let mut coeffs = vec![0; self.inner.s];
        coeffs[0] = v % self.inner.base.modulus();
        ExtFieldElement {
            field: self.clone(),
            coeffs,
        }
    }

    /// Embeds `F_q` into `F_{q^s}`; errors when the base primes differ.
    pub fn embed(&self, e: FieldElement) -> Result<ExtFieldElement> {
        if e.field() != self.inner.base {
            return Err(Error::FieldMismatch);
        }
        Ok(self.from_base_residue(e.value()))
    }

    /// Element from up to `s` ascending coefficients (reduced mod `q`).
    pub fn element(&self, coeffs: &[u64]) -> Result<ExtFieldElement> {
        if coeffs.len() > self.inner.s {
            return Err(Error::invalid(format!(
                "element needs at most {} coefficients, got {}",
                self.inner.s,
                coeffs.len()
            )));
        }
        let q = self.inner.base.modulus();
        let mut full = vec![0; self.inner.s];
        for (slot, &c) in full.iter_mut().zip(coeffs) {
            *slot = c % q;
        }
        Ok(ExtFieldElement {
            field: self.clone(),
            coeffs: full,
        })
    }

    fn check_pair(&self, a: &ExtFieldElement, b: &ExtFieldElement) -> Result<()> {
        if a.field != *self || b.field != *self {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, a: &ExtFieldElement, b: &ExtFieldElement) -> Result<ExtFieldElement> {
        self.check_pair(a, b)?;
        let mut coeffs = a.coeffs.clone();
        self.add_assign_packed(&mut coeffs, &b.coeffs);
        Ok(ExtFieldElement {
            field: self.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, a: &ExtFieldElement, b: &ExtFieldElement) -> Result<ExtFieldElement> {
        self.check_pair(a, b)?;
        let mut coeffs = a.coeffs.clone();
        self.sub_assign_packed(&mut coeffs, &b.coeffs);
        Ok(ExtFieldElement {
            field: self.clone(),
            coeffs,
        })
    }

    pub fn neg(&self, a: &ExtFieldElement) -> Result<ExtFieldElement> {
        if a.field != *self {
            return Err(Error::FieldMismatch);
        }
        let base = self.inner.base;
        Ok(ExtFieldElement {
            field: self.clone(),
            coeffs: a.coeffs.iter().map(|&c| base.neg(c)).collect(),
        })
    }

    pub fn mul(&self, a: &ExtFieldElement, b: &ExtFieldElement) -> Result<ExtFieldElement> {
        self.check_pair(a, b)?;
        let s = self.inner.s;
        let mut out = vec![0; s];
        let mut tmp = vec![0; 2 * s - 1];
        self.mul_packed(&a.coeffs, &b.coeffs, &mut out, &mut tmp);
        Ok(ExtFieldElement {
            field: self.clone(),
            coeffs: out,
        })
    }

    /// Inverse by the extended Euclidean algorithm on the modulus.
    pub fn inv(&self, a: &ExtFieldElement) -> Result<ExtFieldElement> {
        if a.field != *self {
            return Err(Error::FieldMismatch);
        }
        let coeffs = dense::inv_mod(&a.coeffs, &self.inner.modulus, self.inner.base)?;
        let mut full = vec![0; self.inner.s];
        full[..coeffs.len()].copy_from_slice(&coeffs);
        Ok(ExtFieldElement {
            field: self.clone(),
            coeffs: full,
        })
    }

    /// `a^e` by square-and-multiply; `0^0 = 1`.
    pub fn pow(&self, a: &ExtFieldElement, e: &BigUint) -> Result<ExtFieldElement> {
        if a.field != *self {
            return Err(Error::FieldMismatch);
        }
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc)?;
            if e.bit(i) {
                acc = self.mul(&acc, a)?;
            }
        }
        Ok(acc)
    }

    /// Uniform draw from the `q^s - 1` nonzero elements.
    pub fn random_nonzero(&self, rng: &mut impl Rng) -> ExtFieldElement {
        let q = self.inner.base.modulus();
        loop {
            let coeffs: Vec<u64> = (0..self.inner.s).map(|_| rng.random_range(0..q)).collect();
            if coeffs.iter().any(|&c| c != 0) {
                return ExtFieldElement {
                    field: self.clone(),
                    coeffs,
                };
            }
        }
    }

    // ---- packed-slice kernels used by the cyclic polynomial ring ----
    //
    // A packed slice holds one element as `s` consecutive residues. These
    // kernels avoid per-element allocation in probe-heavy loops.

    #[inline]
    pub(crate) fn add_assign_packed(&self, acc: &mut [u64], x: &[u64]) {
        let base = self.inner.base;
        for (a, &b) in acc.iter_mut().zip(x) {
            *a = base.add(*a, b);
        }
    }

    #[inline]
    pub(crate) fn sub_assign_packed(&self, acc: &mut [u64], x: &[u64]) {
        let base = self.inner.base;
        for (a, &b) in acc.iter_mut().zip(x) {
            *a = base.sub(*a, b);
        }
    }

    /// `out = a * b mod m`; `out` has length `s`, `tmp` length `2s - 1`.
    pub(crate) fn mul_packed(&self, a: &[u64], b: &[u64], out: &mut [u64], tmp: &mut [u64]) {
        let s = self.inner.s;
        let base = self.inner.base;
        tmp.fill(0);
        for i in 0..s {
            if a[i] == 0 {
                continue;
            }
            for j in 0..s {
                if b[j] != 0 {
                    tmp[i + j] = base.add(tmp[i + j], base.mul(a[i], b[j]));
                }
            }
        }
        // fold y^d for d >= s using y^s = -(low part of modulus)
        for d in (s..2 * s - 1).rev() {
            let c = tmp[d];
            if c == 0 {
                continue;
            }
            tmp[d] = 0;
            for j in 0..s {
                let mj = self.inner.modulus[j];
                if mj != 0 {
                    tmp[d - s + j] = base.sub(tmp[d - s + j], base.mul(c, mj));
                }
            }
        }
        out.copy_from_slice(&tmp[..s]);
    }

    pub(crate) fn packed_of<'a>(&self, e: &'a ExtFieldElement) -> &'a [u64] {
        debug_assert!(e.field == *self);
        &e.coeffs
    }

    pub(crate) fn element_from_packed(&self, coeffs: &[u64]) -> ExtFieldElement {
        debug_assert_eq!(coeffs.len(), self.inner.s);
        ExtFieldElement {
            field: self.clone(),
            coeffs: coeffs.to_vec(),
        }
    }
}

impl ExtFieldElement {
    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Ascending coefficients of `y^0 .. y^{s-1}` as base-field elements.
    pub fn coeffs(&self) -> Vec<FieldElement> {
        let base = self.field.base();
        self.coeffs.iter().map(|&c| base.element(c)).collect()
    }

    pub fn residues(&self) -> &[u64] {
        &self.coeffs
    }

    /// For degree-1 fields, the single residue.
    pub fn as_base(&self) -> Result<FieldElement> {
        if self.field.degree() != 1 {
            return Err(Error::invalid("element is not in a degree-1 field"));
        }
        Ok(self.field.base().element(self.coeffs[0]))
    }

    /// Canonical encoding: `s` fixed-width little-endian residues. Equal
    /// elements encode identically, so lexicographic byte order is a total
    /// order on each field.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 * self.coeffs.len());
        for &c in &self.coeffs {
            out.extend_from_slice(&c.to_le_bytes());
        }
        out
    }

    pub fn inv(&self) -> Result<ExtFieldElement> {
        self.field.clone().inv(self)
    }

    pub fn pow(&self, e: &BigUint) -> ExtFieldElement {
        self.field.clone().pow(self, e).expect("element field")
    }
}

macro_rules! ext_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for &ExtFieldElement {
            type Output = ExtFieldElement;
            fn $method(self, rhs: &ExtFieldElement) -> ExtFieldElement {
                self.field
                    .clone()
                    .$method(self, rhs)
                    .expect("operands from different fields")
            }
        }
    };
}
ext_binop!(Add, add);
ext_binop!(Sub, sub);
ext_binop!(Mul, mul);

impl std::ops::Neg for &ExtFieldElement {
    type Output = ExtFieldElement;
    fn neg(self) -> ExtFieldElement {
        self.field.clone().neg(self).expect("element field")
    }
}

/// Finds a monic irreducible polynomial of degree `s` over `F_q` by random
/// search (expected about `s` trials). For `s = 1` this is the polynomial
/// `y`. Returns ascending coefficients of length `s + 1`.
pub fn find_irreducible(base: PrimeField, s: usize, rng: &mut impl Rng) -> Result<Vec<u64>> {
    if s == 0 {
        return Err(Error::invalid("extension degree must be >= 1"));
    }
    if s == 1 {
        return Ok(vec![0, 1]);
    }
    let q = base.modulus();
    for _ in 0..64 * s {
        let mut m: Vec<u64> = (0..s).map(|_| rng.random_range(0..q)).collect();
        m.push(1);
        if is_irreducible(base, &m) {
            return Ok(m);
        }
    }
    Err(Error::Internal(format!(
        "no irreducible modulus of degree {s} found after {} trials",
        64 * s
    )))
}

/// Irreducibility of a monic polynomial over `F_q`: `y^{q^s} = y (mod m)`
/// and `gcd(y^{q^{s/r}} - y, m) = 1` for every prime `r | s`.
pub fn is_irreducible(base: PrimeField, modulus: &[u64]) -> bool {
    assert!(
        modulus.len() >= 2 && *modulus.last().unwrap() == 1,
        "modulus must be monic of degree >= 1"
    );
    let s = modulus.len() - 1;
    if s == 1 {
        return true;
    }
    let q = base.modulus();
    let y = vec![0, 1];
    // frob[j] = y^{q^j} mod m
    let mut frob = y.clone();
    let mut frob_at = vec![Vec::new(); s + 1];
    for j in 1..=s {
        frob = dense::pow_mod_u64(&frob, q, modulus, base);
        frob_at[j] = frob.clone();
    }
    if dense::trim(&frob_at[s]) != y {
        return false;
    }
    for r in dense::prime_factors(s) {
        let h = dense::sub(&frob_at[s / r], &y, base);
        let g = dense::gcd(&h, modulus, base);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Dense univariate polynomial helpers over `F_q` (ascending coefficients,
/// trailing zeros trimmed). Only what the irreducibility machinery needs.
pub(crate) mod dense {
    use super::PrimeField;
    use crate::{Error, Result};

    pub fn trim(a: &[u64]) -> Vec<u64> {
        let mut v = a.to_vec();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn sub(a: &[u64], b: &[u64], f: PrimeField) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out = vec![0; n];
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            out[i] = f.sub(x, y);
        }
        trim(&out)
    }

    pub fn mul(a: &[u64], b: &[u64], f: PrimeField) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(x, y));
                }
            }
        }
        trim(&out)
    }

    /// Remainder of `a` by monic-or-not `m` (leading coefficient inverted).
    pub fn rem(a: &[u64], m: &[u64], f: PrimeField) -> Vec<u64> {
        let m = trim(m);
        assert!(!m.is_empty(), "division by zero polynomial");
        let lead_inv = f.inv(*m.last().unwrap()).expect("nonzero lead");
        let mut r = a.to_vec();
        while trim(&r).len() >= m.len() {
            r = trim(&r);
            let shift = r.len() - m.len();
            let c = f.mul(*r.last().unwrap(), lead_inv);
            for (j, &mj) in m.iter().enumerate() {
                r[shift + j] = f.sub(r[shift + j], f.mul(c, mj));
            }
        }
        trim(&r)
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], f: PrimeField) -> Vec<u64> {
        rem(&mul(a, b, f), m, f)
    }

    pub fn pow_mod_u64(base: &[u64], e: u64, m: &[u64], f: PrimeField) -> Vec<u64> {
        let mut acc = vec![1];
        if e == 0 {
            return acc;
        }
        let bits = 64 - e.leading_zeros();
        for i in (0..bits).rev() {
            acc = mul_mod(&acc, &acc, m, f);
            if e >> i & 1 == 1 {
                acc = mul_mod(&acc, base, m, f);
            }
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], f: PrimeField) -> Vec<u64> {
        let (mut a, mut b) = (trim(a), trim(b));
        while !b.is_empty() {
            let r = rem(&a, &b, f);
            a = b;
            b = r;
        }
        if let Some(&lead) = a.last() {
            let inv = f.inv(lead).expect("nonzero lead");
            for c in &mut a {
                *c = f.mul(*c, inv);
            }
        }
        a
    }

    /// Extended Euclid: the inverse of `a` modulo the field modulus `m`.
    pub fn inv_mod(a: &[u64], m: &[u64], f: PrimeField) -> Result<Vec<u64>> {
        let a = trim(a);
        if a.is_empty() {
            return Err(Error::DivisionByZero);
        }
        // invariant: u * a = r (mod m)
        let (mut r0, mut r1) = (trim(m), a);
        let (mut u0, mut u1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (quot, rem) = div_rem(&r0, &r1, f);
            let u2 = sub(&u0, &mul(&quot, &u1, f), f);
            r0 = r1;
            r1 = rem;
            u0 = u1;
            u1 = u2;
        }
        if r0.len() != 1 {
            return Err(Error::Internal("modulus not irreducible".into()));
        }
        let scale = f.inv(r0[0])?;
        Ok(trim(
            &u0.iter().map(|&c| f.mul(c, scale)).collect::<Vec<_>>(),
        ))
    }

    pub fn div_rem(a: &[u64], b: &[u64], f: PrimeField) -> (Vec<u64>, Vec<u64>) {
        let b = trim(b);
        assert!(!b.is_empty(), "division by zero polynomial");
        let lead_inv = f.inv(*b.last().unwrap()).expect("nonzero lead");
        let mut r = trim(a);
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![0; r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = f.mul(*r.last().unwrap(), lead_inv);
            q[shift] = c;
            for (j, &bj) in b.iter().enumerate() {
                r[shift + j] = f.sub(r[shift + j], f.mul(c, bj));
            }
            r = trim(&r);
            if r.is_empty() {
                break;
            }
        }
        (trim(&q), r)
    }

    pub fn prime_factors(mut n: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                out.push(d);
                while n % d == 0 {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            out.push(n);
        }
        out
    }
}
