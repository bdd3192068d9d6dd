//! Exact arithmetic in GF(p^m).
//!
//! Elements are encoded as integers in `[0, q)`: the polynomial
//! `a_0 + a_1 α + ... + a_{m-1} α^{m-1}` maps to `Σ a_i p^i`. The defining
//! polynomial is the monic irreducible of degree `m` whose low coefficients
//! have the smallest such encoding, so a field of a given size is always built
//! the same way.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

/// Fields up to this size get a full addition table.
const ADD_TABLE_LIMIT: u32 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field size {0} exceeds the supported maximum {MAX_FIELD_SIZE}")]
    TooLarge(u64),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("encoding {enc} is not an element of GF({q})")]
    OutOfRange { enc: u64, q: u32 },
}

/// Description of GF(q), q = p^m.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FieldSpec {
    pub q: u32,
    pub p: u32,
    pub m: u32,
    /// `c_0..c_{m-1}` of the monic irreducible `x^m + Σ c_i x^i`; empty for prime fields.
    pub irr: Vec<u32>,
}

/// Builds the canonical description of GF(q).
pub fn make_field(q: u64) -> Result<FieldSpec, GfError> {
    if q > MAX_FIELD_SIZE {
        return Err(GfError::TooLarge(q));
    }
    let (p, m) = prime_power(q).ok_or(GfError::NotPrimePower(q))?;
    let irr = if m == 1 {
        Vec::new()
    } else {
        smallest_irreducible(p, m)
    };
    Ok(FieldSpec {
        q: q as u32,
        p,
        m,
        irr,
    })
}

fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        // q itself is prime
        p = q;
    }
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p as u32, m))
}

/// Scans `c` in ascending encoding order and returns the first `c` for which
/// `x^m + Σ c_i x^i` has no monic factor of degree `1..=m/2`.
fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for enc in 0..count {
        let low = digits(enc, p, m as usize);
        let mut poly = low.clone();
        poly.push(1);
        if is_irreducible(&poly, p) {
            return low;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over GF(p)")
}

fn digits(mut enc: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((enc % p as u64) as u32);
        enc /= p as u64;
    }
    out
}

/// Brute-force irreducibility test over GF(p) by trial division with every
/// monic polynomial of degree at most half the input degree.
pub(crate) fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for enc in 0..count {
            let mut divisor = digits(enc, p, d);
            divisor.push(1);
            if poly_rem_is_zero(poly, &divisor, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(num: &[u32], monic: &[u32], p: u32) -> bool {
    let mut rem = num.to_vec();
    let d = monic.len() - 1;
    while rem.len() > d {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - d;
        if lead != 0 {
            for (i, &c) in monic.iter().enumerate() {
                let v = &mut rem[shift + i];
                *v = (*v + p - (lead * c) % p) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

/// Schoolbook multiplication of two encodings modulo the defining polynomial.
/// Only used while building tables.
fn slow_mul(spec: &FieldSpec, a: u32, b: u32) -> u32 {
    let (p, m) = (spec.p, spec.m as usize);
    if m == 1 {
        return ((a as u64 * b as u64) % p as u64) as u32;
    }
    let da = digits(a as u64, p, m);
    let db = digits(b as u64, p, m);
    let mut prod = vec![0u32; 2 * m - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    // x^m = -Σ c_i x^i
    for top in (m..prod.len()).rev() {
        let lead = prod[top];
        if lead == 0 {
            continue;
        }
        prod[top] = 0;
        for (i, &c) in spec.irr.iter().enumerate() {
            let v = &mut prod[top - m + i];
            *v = (*v + p - (lead * c) % p) % p;
        }
    }
    prod[..m].iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

#[derive(Debug)]
enum Addition {
    Xor,
    Prime,
    Table(Vec<u16>),
    Digits,
}

#[derive(Debug)]
struct Tables {
    spec: FieldSpec,
    /// exp[i] = g^i for i in [0, 2(q-1))
    exp: Vec<u32>,
    /// log[a] for a != 0
    log: Vec<u32>,
    neg: Vec<u32>,
    addition: Addition,
}

/// A constructed field with lookup tables. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(q: u64) -> Result<Self, GfError> {
        Ok(Self::from_spec(make_field(q)?))
    }

    pub fn from_spec(spec: FieldSpec) -> Self {
        let q = spec.q;
        let p = spec.p;
        let m = spec.m as usize;

        let neg: Vec<u32> = (0..q)
            .map(|a| {
                digits(a as u64, p, m)
                    .iter()
                    .rev()
                    .fold(0u32, |acc, &d| acc * p + (p - d) % p)
            })
            .collect();

        let addition = if p == 2 {
            Addition::Xor
        } else if m == 1 {
            Addition::Prime
        } else if q <= ADD_TABLE_LIMIT {
            let mut table = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = add_digits(p, a, b) as u16;
                }
            }
            Addition::Table(table)
        } else {
            Addition::Digits
        };

        let order = q - 1;
        let mut exp = vec![0u32; 2 * order.max(1) as usize];
        let mut log = vec![0u32; q as usize];
        if q == 2 {
            exp = vec![1, 1];
        } else {
            let gen = (2..q)
                .find(|&g| {
                    let mut x = g;
                    let mut k = 1;
                    while x != 1 {
                        x = slow_mul(&spec, x, g);
                        k += 1;
                    }
                    k == order
                })
                .expect("multiplicative group is cyclic");
            let mut x = 1;
            for i in 0..order {
                exp[i as usize] = x;
                exp[(i + order) as usize] = x;
                log[x as usize] = i;
                x = slow_mul(&spec, x, gen);
            }
        }

        Field(Arc::new(Tables {
            spec,
            exp,
            log,
            neg,
            addition,
        }))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.spec.q
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.spec.p
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.0.spec.m
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.0.addition {
            Addition::Xor => a ^ b,
            Addition::Prime => {
                let s = a + b;
                if s >= self.0.spec.p {
                    s - self.0.spec.p
                } else {
                    s
                }
            }
            Addition::Table(t) => t[(a * self.0.spec.q + b) as usize] as u32,
            Addition::Digits => add_digits(self.0.spec.p, a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.0.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &self.0;
        t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32, GfError> {
        if a == 0 {
            return Err(GfError::DivisionByZero);
        }
        let t = &self.0;
        let order = self.q() - 1;
        Ok(t.exp[((order - t.log[a as usize]) % order.max(1)) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q() - 1) as u64;
        let idx = (self.0.log[a as usize] as u64 * (e % order)) % order;
        self.0.exp[idx as usize]
    }

    /// `α^j` where `α` is the root of the defining polynomial. Together with
    /// `j in 0..m` these form a GF(p)-basis of the field.
    pub fn alpha_power(&self, j: u32) -> u32 {
        self.p().pow(j)
    }

    pub fn contains(&self, enc: u64) -> bool {
        enc < self.q() as u64
    }

    pub fn element(&self, enc: u32) -> Result<FieldElement, GfError> {
        if !self.contains(enc as u64) {
            return Err(GfError::OutOfRange {
                enc: enc as u64,
                q: self.q(),
            });
        }
        Ok(FieldElement {
            enc,
            field: self.clone(),
        })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            enc: 0,
            field: self.clone(),
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            enc: 1,
            field: self.clone(),
        }
    }

    /// All elements in ascending encoding order.
    pub fn enumerate(&self) -> Vec<FieldElement> {
        (0..self.q())
            .map(|enc| FieldElement {
                enc,
                field: self.clone(),
            })
            .collect()
    }

    /// Evaluates `Σ coeffs[h] x^h` by Horner's rule.
    pub fn eval_poly(&self, coeffs: &[u32], x: u32) -> u32 {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

fn add_digits(p: u32, mut a: u32, mut b: u32) -> u32 {
    let mut out = 0;
    let mut place = 1;
    while a > 0 || b > 0 {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
}

/// An element tagged with the field it belongs to.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    enc: u32,
    field: Field,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@GF({})", self.enc, self.field.q())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.enc)
    }
}

impl FieldElement {
    pub fn enc(&self) -> u32 {
        self.enc
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.enc == 0
    }

    pub fn arith(&self, other: &FieldElement, kind: ArithKind) -> Result<FieldElement, GfError> {
        if self.field != other.field {
            return Err(GfError::FieldMismatch);
        }
        let f = &self.field;
        let enc = match kind {
            ArithKind::Add => f.add(self.enc, other.enc),
            ArithKind::Sub => f.sub(self.enc, other.enc),
            ArithKind::Mul => f.mul(self.enc, other.enc),
        };
        Ok(FieldElement {
            enc,
            field: f.clone(),
        })
    }

    pub fn invert(&self) -> Result<FieldElement, GfError> {
        Ok(FieldElement {
            enc: self.field.inv(self.enc)?,
            field: self.field.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_spec() {
        assert_eq!(
            make_field(5).unwrap(),
            FieldSpec {
                q: 5,
                p: 5,
                m: 1,
                irr: vec![]
            }
        );
    }

    /// Independent scan: first c (ascending Σ c_i 2^i) such that x^3 + c2 x^2 + c1 x + c0
    /// has no root in GF(2). For a cubic, no root means irreducible.
    #[test]
    fn gf8_irreducible_matches_root_scan() {
        let first = (0u32..8)
            .find(|&enc| {
                let c = [enc & 1, (enc >> 1) & 1, (enc >> 2) & 1];
                (0..2u32).all(|x| (x * x * x + c[2] * x * x + c[1] * x + c[0]) % 2 != 0)
            })
            .unwrap();
        assert_eq!(first, 3);
        assert_eq!(make_field(8).unwrap().irr, vec![1, 1, 0]);
    }

    #[test]
    fn rejects_non_prime_powers_and_large_sizes() {
        assert_eq!(make_field(6), Err(GfError::NotPrimePower(6)));
        assert_eq!(make_field(1), Err(GfError::NotPrimePower(1)));
        assert_eq!(make_field(0), Err(GfError::NotPrimePower(0)));
        assert_eq!(make_field(12), Err(GfError::NotPrimePower(12)));
        assert_eq!(make_field(65537), Err(GfError::TooLarge(65537)));
        assert!(make_field(65536).is_ok());
        assert!(make_field(65521).is_ok());
    }

    #[test]
    fn make_field_is_deterministic() {
        for q in [4u64, 9, 16, 25, 27, 49, 81, 128, 243, 256, 625] {
            assert_eq!(make_field(q).unwrap(), make_field(q).unwrap());
        }
    }

    #[test]
    fn arith_examples() {
        let f5 = Field::new(5).unwrap();
        let prod = f5
            .element(3)
            .unwrap()
            .arith(&f5.element(4).unwrap(), ArithKind::Mul)
            .unwrap();
        assert_eq!(prod.enc(), 2);

        let f8 = Field::new(8).unwrap();
        let a = f8.element(2).unwrap();
        let a2 = f8.element(4).unwrap();
        assert_eq!(a.arith(&a2, ArithKind::Mul).unwrap().enc(), 3);

        for x in f8.enumerate() {
            assert_eq!(x.arith(&f8.zero(), ArithKind::Add).unwrap(), x);
        }
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let f5 = Field::new(5).unwrap();
        let f7 = Field::new(7).unwrap();
        let err = f5.one().arith(&f7.one(), ArithKind::Add).unwrap_err();
        assert_eq!(err, GfError::FieldMismatch);
        // separately built but identical fields are compatible
        let f5b = Field::new(5).unwrap();
        assert!(f5.one().arith(&f5b.one(), ArithKind::Add).is_ok());
    }

    #[test]
    fn inverse_examples() {
        let f5 = Field::new(5).unwrap();
        assert_eq!(f5.element(2).unwrap().invert().unwrap().enc(), 3);
        assert_eq!(f5.zero().invert(), Err(GfError::DivisionByZero));
        for q in [2u64, 3, 4, 8, 9] {
            let f = Field::new(q).unwrap();
            assert_eq!(f.one().invert().unwrap().enc(), 1);
        }
        let f8 = Field::new(8).unwrap();
        let two = f8.element(2).unwrap();
        let by_search = (1..8).find(|&x| f8.mul(2, x) == 1).unwrap();
        assert_eq!(by_search, 5);
        assert_eq!(two.invert().unwrap().enc(), 5);
    }

    #[test]
    fn enumerate_order() {
        let encs = |q| -> Vec<u32> {
            Field::new(q)
                .unwrap()
                .enumerate()
                .iter()
                .map(|e| e.enc())
                .collect()
        };
        assert_eq!(encs(3), vec![0, 1, 2]);
        assert_eq!(encs(4), vec![0, 1, 2, 3]);
        assert_eq!(Field::new(65536).unwrap().enumerate().len(), 65536);
    }

    #[test]
    fn table_and_digit_addition_agree() {
        // 3^7 = 2187 takes the digit path, 3^6 = 729 the table path
        for q in [729u64, 2187] {
            let f = Field::new(q).unwrap();
            for a in (0..q as u32).step_by(7) {
                for b in (0..q as u32).step_by(11) {
                    assert_eq!(f.add(a, b), add_digits(3, a, b));
                    assert_eq!(f.sub(f.add(a, b), b), a);
                }
            }
        }
    }

    #[test]
    fn log_tables_match_schoolbook_multiplication() {
        for q in [4u64, 8, 9, 16, 25, 27, 32, 49] {
            let f = Field::new(q).unwrap();
            for a in 0..q as u32 {
                for b in 0..q as u32 {
                    assert_eq!(f.mul(a, b), slow_mul(f.spec(), a, b), "GF({q}) {a}*{b}");
                }
            }
        }
    }
}
