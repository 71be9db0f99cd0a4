//! Straight-line programs: a branchless instruction list over `F_q` with a
//! single input `z`, evaluated generically over any ring that embeds `F_q`.
//!
//! The interpolation engine never expands an SLP symbolically. It probes the
//! program at `alpha * z` over `F_{q^s}[z]/(z^p - 1)`, which keeps every
//! intermediate at `p` coefficients no matter how large the degrees grow.
//! Each probe is charged `p * s` (its degree) to a [`ProbeLedger`].

use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::ff::{ExtField, ExtFieldElement, PrimeField};
use crate::modpoly::{cyclic_mul_packed, CyclicPoly, SparsePoly};
use crate::{Error, Result};

/// Instruction operator; division is not representable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlpOp {
    Add,
    Sub,
    Mul,
}

/// An instruction operand: the input `z`, a base-field constant, or the
/// result of an earlier instruction (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operand {
    Input,
    Const(u64),
    Reg(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Instruction {
    pub op: SlpOp,
    pub lhs: Operand,
    pub rhs: Operand,
}

/// A validated straight-line program over `F_q`. The value of the final
/// instruction is the program output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slp {
    field: PrimeField,
    instructions: Vec<Instruction>,
}

/// Rings an [`Slp`] can execute over: they provide the three operations and
/// an embedding of base-field residues.
pub trait SlpRing {
    type Elem: Clone;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Embedding of a residue of the program's base field.
    fn constant(&self, c: u64) -> Self::Elem;
}

impl Slp {
    /// Validates structurally: nonempty, register references strictly
    /// backward, constants reduced. Malformed programs are rejected here so
    /// that evaluation never fails.
    pub fn new(field: PrimeField, instructions: Vec<Instruction>) -> Result<Self> {
        if instructions.is_empty() {
            return Err(Error::invalid("straight-line program must be nonempty"));
        }
        let mut canon = instructions;
        for (i, ins) in canon.iter_mut().enumerate() {
            for side in [&mut ins.lhs, &mut ins.rhs] {
                match side {
                    Operand::Reg(j) if *j >= i => {
                        return Err(Error::invalid(format!(
                            "instruction {} references register {} before it exists",
                            i + 1,
                            *j + 1
                        )));
                    }
                    Operand::Const(c) => *c %= field.modulus(),
                    _ => {}
                }
            }
        }
        Ok(Slp {
            field,
            instructions: canon,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Program length `L`.
    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one instruction
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    /// Executes the program over `ring` with the given input, in `O(L)` ring
    /// operations.
    pub fn eval_ring<R: SlpRing>(&self, ring: &R, input: &R::Elem) -> R::Elem {
        let mut regs: Vec<R::Elem> = Vec::with_capacity(self.instructions.len());
        for ins in &self.instructions {
            let val = {
                let fetch = |op: &Operand| -> std::borrow::Cow<'_, R::Elem> {
                    match op {
                        Operand::Input => std::borrow::Cow::Borrowed(input),
                        Operand::Reg(j) => std::borrow::Cow::Borrowed(&regs[*j]),
                        Operand::Const(c) => std::borrow::Cow::Owned(ring.constant(*c)),
                    }
                };
                let a = fetch(&ins.lhs);
                let b = fetch(&ins.rhs);
                match ins.op {
                    SlpOp::Add => ring.add(&a, &b),
                    SlpOp::Sub => ring.sub(&a, &b),
                    SlpOp::Mul => ring.mul(&a, &b),
                }
            };
            regs.push(val);
        }
        regs.pop().expect("nonempty program")
    }

    /// Evaluates at a point of `F_{q^s}`.
    pub fn eval_element(&self, x: &ExtFieldElement) -> Result<ExtFieldElement> {
        if x.field().base() != self.field {
            return Err(Error::FieldMismatch);
        }
        Ok(self.eval_ring(x.field(), x))
    }

    /// Probes the program at `alpha * z` over `F_{q^s}[z]/(z^p - 1)`,
    /// recording one probe of degree `p * s`. For `p = 1` the input is the
    /// constant `alpha`, i.e. the probe evaluates at `alpha`.
    ///
    /// Evaluation runs on a register pool that recycles buffers after their
    /// last use, so memory stays at `O(w * p * s)` for a program of live
    /// width `w` no matter how long the program is.
    pub fn probe(
        &self,
        alpha: &ExtFieldElement,
        p: u64,
        ledger: &ProbeLedger,
    ) -> Result<CyclicPoly> {
        if alpha.is_zero() {
            return Err(Error::invalid("probe multiplier must be nonzero"));
        }
        if alpha.field().base() != self.field {
            return Err(Error::FieldMismatch);
        }
        let field = alpha.field().clone();
        // validates p and the buffer size
        let zero = CyclicPoly::zero(field.clone(), p)?;
        let s = field.degree();
        let mut input = zero.packed().to_vec();
        let slot = (1 % p) as usize * s;
        input[slot..slot + s].copy_from_slice(alpha.residues());
        let out = exec_pooled(self, &field, p as usize, &input);
        ledger.record(p, s as u64);
        Ok(CyclicPoly::from_packed(field, p, out))
    }
}

/// Pooled evaluation over the cyclic ring. Registers are dropped back into
/// a free list after their last use; constants never materialize a buffer.
fn exec_pooled(slp: &Slp, field: &ExtField, p: usize, input: &[u64]) -> Vec<u64> {
    let code = slp.instructions();
    let base = field.base();
    let s = field.degree();
    let len = p * s;

    let mut last_use = vec![usize::MAX; code.len()];
    for (i, ins) in code.iter().enumerate() {
        for op in [&ins.lhs, &ins.rhs] {
            if let Operand::Reg(j) = op {
                last_use[*j] = i;
            }
        }
    }

    enum Src<'a> {
        Slice(&'a [u64]),
        Scalar(u64),
    }

    let mut regs: Vec<Option<Vec<u64>>> = (0..code.len()).map(|_| None).collect();
    let mut pool: Vec<Vec<u64>> = Vec::new();
    let mut prod = vec![0u64; s];
    let mut tmp = vec![0u64; 2 * s - 1];
    let mut nz_a: Vec<usize> = Vec::new();
    let mut nz_b: Vec<usize> = Vec::new();

    for (i, ins) in code.iter().enumerate() {
        let mut out = pool.pop().unwrap_or_else(|| vec![0u64; len]);
        {
            let fetch = |op: &Operand| -> Src<'_> {
                match op {
                    Operand::Input => Src::Slice(input),
                    Operand::Reg(j) => Src::Slice(regs[*j].as_deref().expect("live register")),
                    Operand::Const(c) => Src::Scalar(*c),
                }
            };
            let a = fetch(&ins.lhs);
            let b = fetch(&ins.rhs);
            match (ins.op, a, b) {
                (SlpOp::Add, Src::Slice(x), Src::Slice(y)) => {
                    for k in 0..len {
                        out[k] = base.add(x[k], y[k]);
                    }
                }
                (SlpOp::Add, Src::Slice(x), Src::Scalar(c))
                | (SlpOp::Add, Src::Scalar(c), Src::Slice(x)) => {
                    out.copy_from_slice(x);
                    out[0] = base.add(out[0], c);
                }
                (SlpOp::Add, Src::Scalar(c), Src::Scalar(d)) => {
                    out.fill(0);
                    out[0] = base.add(c, d);
                }
                (SlpOp::Sub, Src::Slice(x), Src::Slice(y)) => {
                    for k in 0..len {
                        out[k] = base.sub(x[k], y[k]);
                    }
                }
                (SlpOp::Sub, Src::Slice(x), Src::Scalar(c)) => {
                    out.copy_from_slice(x);
                    out[0] = base.sub(out[0], c);
                }
                (SlpOp::Sub, Src::Scalar(c), Src::Slice(x)) => {
                    for k in 0..len {
                        out[k] = base.neg(x[k]);
                    }
                    out[0] = base.add(out[0], c);
                }
                (SlpOp::Sub, Src::Scalar(c), Src::Scalar(d)) => {
                    out.fill(0);
                    out[0] = base.sub(c, d);
                }
                (SlpOp::Mul, Src::Slice(x), Src::Scalar(c))
                | (SlpOp::Mul, Src::Scalar(c), Src::Slice(x)) => {
                    for k in 0..len {
                        out[k] = base.mul(x[k], c);
                    }
                }
                (SlpOp::Mul, Src::Scalar(c), Src::Scalar(d)) => {
                    out.fill(0);
                    out[0] = base.mul(c, d);
                }
                (SlpOp::Mul, Src::Slice(x), Src::Slice(y)) => {
                    out.fill(0);
                    nz_a.clear();
                    nz_b.clear();
                    for idx in 0..p {
                        if x[idx * s..(idx + 1) * s].iter().any(|&v| v != 0) {
                            nz_a.push(idx);
                        }
                        if y[idx * s..(idx + 1) * s].iter().any(|&v| v != 0) {
                            nz_b.push(idx);
                        }
                    }
                    for &ia in &nz_a {
                        let xv = &x[ia * s..(ia + 1) * s];
                        for &ib in &nz_b {
                            field.mul_packed(xv, &y[ib * s..(ib + 1) * s], &mut prod, &mut tmp);
                            let mut k = ia + ib;
                            if k >= p {
                                k -= p;
                            }
                            field.add_assign_packed(&mut out[k * s..(k + 1) * s], &prod);
                        }
                    }
                }
            }
        }
        for op in [&ins.lhs, &ins.rhs] {
            if let Operand::Reg(j) = op {
                if last_use[*j] == i {
                    if let Some(buf) = regs[*j].take() {
                        pool.push(buf);
                    }
                }
            }
        }
        regs[i] = Some(out);
    }
    regs.pop().flatten().expect("nonempty program")
}

impl SlpRing for ExtField {
    type Elem = ExtFieldElement;
    fn add(&self, a: &ExtFieldElement, b: &ExtFieldElement) -> ExtFieldElement {
        ExtField::add(self, a, b).expect("ring elements share the field")
    }
    fn sub(&self, a: &ExtFieldElement, b: &ExtFieldElement) -> ExtFieldElement {
        ExtField::sub(self, a, b).expect("ring elements share the field")
    }
    fn mul(&self, a: &ExtFieldElement, b: &ExtFieldElement) -> ExtFieldElement {
        ExtField::mul(self, a, b).expect("ring elements share the field")
    }
    fn constant(&self, c: u64) -> ExtFieldElement {
        self.from_base_residue(c)
    }
}

/// The ring `F_{q^s}[z]/(z^p - 1)` over packed coefficient buffers.
pub struct CyclicRing {
    field: ExtField,
    p: usize,
}

impl CyclicRing {
    pub fn new(field: ExtField, p: u64) -> Result<Self> {
        // delegate the length checks and the allocation guard
        CyclicPoly::zero(field.clone(), p)?;
        Ok(CyclicRing {
            field,
            p: p as usize,
        })
    }

    pub fn elem_of(&self, poly: &CyclicPoly) -> Result<Vec<u64>> {
        if *poly.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        if poly.cycle_len() != self.p as u64 {
            return Err(Error::CycleMismatch(poly.cycle_len(), self.p as u64));
        }
        Ok(poly.packed().to_vec())
    }

    pub fn to_poly(&self, elem: Vec<u64>) -> CyclicPoly {
        CyclicPoly::from_packed(self.field.clone(), self.p as u64, elem)
    }
}

impl SlpRing for CyclicRing {
    type Elem = Vec<u64>;
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let mut out = a.clone();
        self.field.add_assign_packed(&mut out, b);
        out
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let mut out = a.clone();
        self.field.sub_assign_packed(&mut out, b);
        out
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        cyclic_mul_packed(&self.field, self.p, a, b)
    }
    fn constant(&self, c: u64) -> Vec<u64> {
        let mut out = vec![0u64; self.p * self.field.degree()];
        out[0] = c % self.field.base().modulus();
        out
    }
}

/// Running account of probe work: the count of probes and the sum of their
/// degrees `p * s`. Recording is thread-safe and totals are independent of
/// interleaving.
#[derive(Debug, Default)]
pub struct ProbeLedger {
    inner: Mutex<LedgerInner>,
}

#[derive(Debug, Default)]
struct LedgerInner {
    records: Vec<ProbeRecord>,
    total_probe_size: u64,
}

/// One recorded probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeRecord {
    pub cycle_len: u64,
    pub ext_degree: u64,
}

impl ProbeRecord {
    /// The probe degree `p * s`.
    pub fn degree(&self) -> u64 {
        self.cycle_len * self.ext_degree
    }
}

impl ProbeLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&self, cycle_len: u64, ext_degree: u64) {
        let mut inner = self.inner.lock().expect("ledger poisoned");
        inner.total_probe_size += cycle_len * ext_degree;
        inner.records.push(ProbeRecord {
            cycle_len,
            ext_degree,
        });
    }

    pub fn probe_count(&self) -> u64 {
        self.inner.lock().expect("ledger poisoned").records.len() as u64
    }

    pub fn total_probe_size(&self) -> u64 {
        self.inner.lock().expect("ledger poisoned").total_probe_size
    }

    pub fn records(&self) -> Vec<ProbeRecord> {
        self.inner.lock().expect("ledger poisoned").records.clone()
    }
}

/// Compiles a known sparse polynomial over `F_q` into an SLP of length
/// `O(#f log deg f)`: each monomial is built by binary powering, scaled, and
/// summed. The zero polynomial compiles to `z - z`.
pub fn slp_from_sparse(f: &SparsePoly) -> Result<Slp> {
    if f.field().degree() != 1 {
        return Err(Error::invalid("SLP synthesis expects a base-field polynomial"));
    }
    let field = f.field().base();
    let mut instructions: Vec<Instruction> = Vec::new();
    fn emit(code: &mut Vec<Instruction>, op: SlpOp, lhs: Operand, rhs: Operand) -> Operand {
        code.push(Instruction { op, lhs, rhs });
        Operand::Reg(code.len() - 1)
    }
    if f.is_zero() {
        emit(&mut instructions, SlpOp::Sub, Operand::Input, Operand::Input);
        return Slp::new(field, instructions);
    }
    let mut acc: Option<Operand> = None;
    let terms: Vec<(BigUint, u64)> = f
        .terms()
        .map(|(e, c)| (e.clone(), c.residues()[0]))
        .collect();
    for (e, c) in terms.into_iter().rev() {
        let term = if e.is_zero() {
            Operand::Const(c)
        } else {
            let mut cur = Operand::Input;
            for i in (0..e.bits() - 1).rev() {
                cur = emit(&mut instructions, SlpOp::Mul, cur, cur);
                if e.bit(i) {
                    cur = emit(&mut instructions, SlpOp::Mul, cur, Operand::Input);
                }
            }
            if c != 1 {
                cur = emit(&mut instructions, SlpOp::Mul, cur, Operand::Const(c));
            }
            cur
        };
        acc = Some(match acc {
            None => term,
            Some(prev) => emit(&mut instructions, SlpOp::Add, prev, term),
        });
    }
    if instructions.is_empty() {
        // single constant term: materialize it as one instruction
        let Some(Operand::Const(c)) = acc else {
            unreachable!("constant-only polynomial")
        };
        emit(
            &mut instructions,
            SlpOp::Add,
            Operand::Const(c),
            Operand::Const(0),
        );
    }
    Slp::new(field, instructions)
}

/// Packs a multivariate exponent vector into one integer by base-`bound`
/// digits: `sum_i e_i * bound^i`. Every entry must be `< bound`.
pub fn kronecker_pack(exps: &[BigUint], bound: &BigUint) -> Result<BigUint> {
    if bound.is_zero() {
        return Err(Error::invalid("Kronecker bound must be positive"));
    }
    let mut acc = BigUint::zero();
    let mut weight = BigUint::one();
    for (i, e) in exps.iter().enumerate() {
        if e >= bound {
            return Err(Error::BoundViolation(format!(
                "exponent {e} at position {i} is not below {bound}"
            )));
        }
        acc += e * &weight;
        weight *= bound;
    }
    Ok(acc)
}

/// Inverse of [`kronecker_pack`]: base-`bound` digit extraction into `n`
/// entries. Requires `e < bound^n`.
pub fn kronecker_unpack(e: &BigUint, bound: &BigUint, n: usize) -> Result<Vec<BigUint>> {
    if bound.is_zero() {
        return Err(Error::invalid("Kronecker bound must be positive"));
    }
    if *e >= bound.pow(n as u32) {
        return Err(Error::BoundViolation(format!(
            "packed exponent {e} is not below {bound}^{n}"
        )));
    }
    let mut rest = e.clone();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(&rest % bound);
        rest /= bound;
    }
    Ok(out)
}

// ---- text format ----

impl Slp {
    /// Canonical text form, one instruction per line:
    ///
    /// ```text
    /// q <prime>
    /// b<i> <- <operand> <op> <operand>
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = format!("q {}\n", self.field.modulus());
        for (i, ins) in self.instructions.iter().enumerate() {
            let op = match ins.op {
                SlpOp::Add => '+',
                SlpOp::Sub => '-',
                SlpOp::Mul => '*',
            };
            out.push_str(&format!(
                "b{} <- {} {} {}\n",
                i + 1,
                operand_text(&ins.lhs),
                op,
                operand_text(&ins.rhs)
            ));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Slp> {
        let parse_err = |line: usize, msg: String| Error::Parse { line, msg };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty program".into()))?;
        let q = {
            let toks: Vec<&str> = header.split_whitespace().collect();
            if toks.len() != 2 || toks[0] != "q" {
                return Err(parse_err(line_no, "expected header `q <prime>`".into()));
            }
            toks[1]
                .parse::<u64>()
                .map_err(|_| parse_err(line_no, "bad modulus".into()))?
        };
        let field = PrimeField::new(q).map_err(|e| parse_err(line_no, e.to_string()))?;

        let mut instructions = Vec::new();
        for (line_no, l) in lines {
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.len() != 5 || toks[1] != "<-" {
                return Err(parse_err(
                    line_no,
                    "expected `b<i> <- <operand> <op> <operand>`".into(),
                ));
            }
            let idx = toks[0]
                .strip_prefix('b')
                .and_then(|d| d.parse::<usize>().ok())
                .ok_or_else(|| parse_err(line_no, format!("bad result register `{}`", toks[0])))?;
            if idx != instructions.len() + 1 {
                return Err(parse_err(
                    line_no,
                    format!("result register must be b{}", instructions.len() + 1),
                ));
            }
            let op = match toks[3] {
                "+" => SlpOp::Add,
                "-" => SlpOp::Sub,
                "*" => SlpOp::Mul,
                "/" => {
                    return Err(parse_err(
                        line_no,
                        "division instructions are not supported".into(),
                    ))
                }
                other => return Err(parse_err(line_no, format!("unknown operator `{other}`"))),
            };
            let operand = |tok: &str| -> Result<Operand> {
                if tok == "z" {
                    return Ok(Operand::Input);
                }
                if let Some(d) = tok.strip_prefix('b') {
                    let j: usize = d
                        .parse()
                        .map_err(|_| parse_err(line_no, format!("bad register `{tok}`")))?;
                    if j == 0 || j > instructions.len() {
                        return Err(parse_err(
                            line_no,
                            format!("register b{j} is not defined yet"),
                        ));
                    }
                    return Ok(Operand::Reg(j - 1));
                }
                let v: u128 = tok
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("bad operand `{tok}`")))?;
                Ok(Operand::Const((v % q as u128) as u64))
            };
            instructions.push(Instruction {
                op,
                lhs: operand(toks[2])?,
                rhs: operand(toks[4])?,
            });
        }
        Slp::new(field, instructions)
    }
}

fn operand_text(op: &Operand) -> String {
    match op {
        Operand::Input => "z".to_string(),
        Operand::Const(c) => c.to_string(),
        Operand::Reg(j) => format!("b{}", j + 1),
    }
}
