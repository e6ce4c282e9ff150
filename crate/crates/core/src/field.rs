//! Arithmetic in small finite fields GF(p^k).
//!
//! Elements are packed into integers in `[0, p^k)` by reading the polynomial
//! coefficients `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` as base-`p` digits
//! (`c_0` least significant). Every field this crate supports has at most
//! 512 elements, so addition, multiplication, inversion and the Frobenius
//! map are all precomputed tables.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u32 = 512;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("GF({p}^{k}) is outside the supported range (k in 1..=8, p^k <= 512)")]
    UnsupportedSize { p: u32, k: u32 },
    #[error("modulus {0:?} is not a monic irreducible polynomial")]
    Reducible(Vec<u16>),
    #[error("elements belong to different fields")]
    Mismatch,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

struct FieldData {
    p: u16,
    k: u8,
    q: u16,
    /// Monic modulus, coefficients low to high, length k + 1.
    modulus: Vec<u16>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    frob: Vec<u16>,
    primitive: u16,
    /// `log[a]` is the discrete log of `a` to the base `primitive` (unused at 0).
    log: Vec<u16>,
}

/// A finite field GF(p^k) with fully tabulated arithmetic. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldData>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.k)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Decomposes `q` as `p^k` with `p` prime.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn checked_size(p: u32, k: u32) -> Result<u32, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if !(1..=8).contains(&k) {
        return Err(FieldError::UnsupportedSize { p, k });
    }
    let q = (p as u64).pow(k);
    if q > MAX_FIELD_ORDER as u64 {
        return Err(FieldError::UnsupportedSize { p, k });
    }
    Ok(q as u32)
}

// Polynomials over GF(p), coefficients low to high.

fn poly_trim(mut a: Vec<u16>) -> Vec<u16> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u16], m: &[u16], p: u16) -> Vec<u16> {
    let p32 = p as u32;
    let mut r: Vec<u16> = poly_trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm] as u32, p32);
    while r.len() > dm {
        let dr = r.len() - 1;
        let factor = (r[dr] as u32 * lead_inv) % p32;
        for i in 0..=dm {
            let idx = dr - dm + i;
            let sub = (factor * m[i] as u32) % p32;
            r[idx] = ((r[idx] as u32 + p32 - sub) % p32) as u16;
        }
        r = poly_trim(r);
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut result = 1u32;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

fn digits(mut v: u32, p: u32, k: usize) -> Vec<u16> {
    let mut out = vec![0u16; k];
    for d in out.iter_mut() {
        *d = (v % p) as u16;
        v /= p;
    }
    out
}

fn pack(d: &[u16], p: u32) -> u32 {
    d.iter().rev().fold(0u32, |acc, &c| acc * p + c as u32)
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-p
/// digits of `code`.
fn monic_from_code(code: u32, p: u32, deg: usize) -> Vec<u16> {
    let mut m = digits(code, p, deg);
    m.push(1);
    m
}

/// Exhaustive irreducibility test: no monic factor of degree `1..=deg/2`.
pub fn is_irreducible(modulus: &[u16], p: u32) -> bool {
    let deg = match modulus.len() {
        0 | 1 => return false,
        n => n - 1,
    };
    if modulus[deg] != 1 || modulus.iter().any(|&c| c as u32 >= p) {
        return false;
    }
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d as u32) {
            let f = monic_from_code(code, p, d);
            if poly_rem(modulus, &f, p as u16).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The smallest monic irreducible of degree `k` under the base-p code order.
/// This reproduces the published table (x^2+x+1, x^3+x+1, x^2+1, x^4+x+1)
/// for GF(4), GF(8), GF(9), GF(16).
fn default_modulus(p: u32, k: u32) -> Vec<u16> {
    (0..p.pow(k))
        .map(|code| monic_from_code(code, p, k as usize))
        .find(|m| is_irreducible(m, p))
        .expect("irreducible polynomials exist in every degree")
}

fn fixed_modulus(p: u32, k: u32) -> Option<Vec<u16>> {
    match (p, k) {
        (2, 2) => Some(vec![1, 1, 1]),
        (2, 3) => Some(vec![1, 1, 0, 1]),
        (3, 2) => Some(vec![1, 0, 1]),
        (2, 4) => Some(vec![1, 1, 0, 0, 1]),
        _ => None,
    }
}

impl Field {
    /// GF(p^k) with the crate's fixed modulus for that size.
    pub fn new(p: u32, k: u32) -> Result<Field, FieldError> {
        checked_size(p, k)?;
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            fixed_modulus(p, k).unwrap_or_else(|| default_modulus(p, k))
        };
        Field::with_modulus(p, modulus)
    }

    /// GF(q) for a prime power q.
    pub fn of_order(q: u32) -> Result<Field, FieldError> {
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrime(q))?;
        Field::new(p, k)
    }

    pub fn with_modulus(p: u32, modulus: Vec<u16>) -> Result<Field, FieldError> {
        let k = modulus.len().saturating_sub(1) as u32;
        let q = checked_size(p, k)?;
        if !is_irreducible(&modulus, p) {
            return Err(FieldError::Reducible(modulus));
        }
        let ku = k as usize;
        let qu = q as usize;

        let mut add = vec![0u16; qu * qu];
        let mut mul = vec![0u16; qu * qu];
        let dig: Vec<Vec<u16>> = (0..q).map(|v| digits(v, p, ku)).collect();
        for a in 0..qu {
            for b in 0..qu {
                let s: Vec<u16> = (0..ku)
                    .map(|i| ((dig[a][i] as u32 + dig[b][i] as u32) % p) as u16)
                    .collect();
                add[a * qu + b] = pack(&s, p) as u16;

                let mut prod = vec![0u16; 2 * ku - 1];
                for i in 0..ku {
                    for j in 0..ku {
                        let t = prod[i + j] as u32 + dig[a][i] as u32 * dig[b][j] as u32;
                        prod[i + j] = (t % p) as u16;
                    }
                }
                let mut r = poly_rem(&prod, &modulus, p as u16);
                r.resize(ku, 0);
                mul[a * qu + b] = pack(&r, p) as u16;
            }
        }
        let neg: Vec<u16> = (0..qu)
            .map(|a| (0..qu).find(|&b| add[a * qu + b] == 0).unwrap() as u16)
            .collect();
        let mut inv = vec![0u16; qu];
        for a in 1..qu {
            inv[a] = (1..qu)
                .find(|&b| mul[a * qu + b] == 1)
                .ok_or_else(|| FieldError::Reducible(modulus.clone()))? as u16;
        }
        let pow = |a: usize, e: u32| -> u16 {
            let mut r = 1usize;
            for _ in 0..e {
                r = mul[r * qu + a] as usize;
            }
            r as u16
        };
        let frob: Vec<u16> = (0..qu).map(|a| pow(a, p)).collect();

        // a^(q-1) = 1 for every unit, and some unit has order exactly q-1.
        let order_of = |a: usize| -> u32 {
            let mut r = a;
            let mut n = 1;
            while r != 1 {
                r = mul[r * qu + a] as usize;
                n += 1;
            }
            n
        };
        let mut primitive = 0u16;
        for a in 1..qu {
            let n = order_of(a);
            if (q - 1) % n != 0 {
                return Err(FieldError::Reducible(modulus));
            }
            if primitive == 0 && n == q - 1 {
                primitive = a as u16;
            }
        }
        if primitive == 0 {
            return Err(FieldError::Reducible(modulus));
        }
        let mut log = vec![0u16; qu];
        let mut x = 1usize;
        for e in 0..(q - 1) {
            log[x] = e as u16;
            x = mul[x * qu + primitive as usize] as usize;
        }

        Ok(Field(Arc::new(FieldData {
            p: p as u16,
            k: k as u8,
            q: q as u16,
            modulus,
            add,
            mul,
            neg,
            inv,
            frob,
            primitive,
            log,
        })))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p as u32
    }

    pub fn degree(&self) -> u32 {
        self.0.k as u32
    }

    pub fn order(&self) -> u32 {
        self.0.q as u32
    }

    pub fn modulus(&self) -> &[u16] {
        &self.0.modulus
    }

    /// Smallest (by encoding) generator of the multiplicative group.
    pub fn primitive(&self) -> u16 {
        self.0.primitive
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.0.add[a as usize * self.0.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.0.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.0.mul[a as usize * self.0.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.0.neg[a as usize]
    }

    pub fn inv(&self, a: u16) -> Option<u16> {
        (a != 0).then(|| self.0.inv[a as usize])
    }

    /// `a^p`.
    #[inline]
    pub fn frobenius(&self, a: u16) -> u16 {
        self.0.frob[a as usize]
    }

    /// `a^(p^power)`.
    pub fn frobenius_pow(&self, a: u16, power: u32) -> u16 {
        (0..power % self.degree()).fold(a, |x, _| self.frobenius(x))
    }

    pub fn pow(&self, a: u16, mut e: u64) -> u16 {
        let mut base = a;
        let mut acc = 1u16;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn elem(&self, value: u16) -> FieldElem {
        assert!((value as u32) < self.order(), "value out of range");
        FieldElem {
            field: self.clone(),
            value,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u16> {
        0..self.0.q
    }

    /// Textual name of an element: integers for prime fields, otherwise
    /// `0`, `1`, `w`, `w2`, ... as powers of the primitive element.
    pub fn name(&self, a: u16) -> String {
        if self.0.k == 1 || a <= 1 {
            return a.to_string();
        }
        match self.0.log[a as usize] {
            1 => "w".to_string(),
            e => format!("w{e}"),
        }
    }
}

/// An element of a [`Field`] carrying its field, for checked arithmetic.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElem {
    field: Field,
    value: u16,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.name(self.value))
    }
}

impl FieldElem {
    pub fn value(&self) -> u16 {
        self.value
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &FieldElem) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::Mismatch)
        }
    }

    fn wrap(&self, value: u16) -> FieldElem {
        FieldElem {
            field: self.field.clone(),
            value,
        }
    }

    pub fn try_add(&self, other: &FieldElem) -> Result<FieldElem, FieldError> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn try_sub(&self, other: &FieldElem) -> Result<FieldElem, FieldError> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn try_mul(&self, other: &FieldElem) -> Result<FieldElem, FieldError> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<FieldElem, FieldError> {
        self.field
            .inv(self.value)
            .map(|v| self.wrap(v))
            .ok_or(FieldError::ZeroInverse)
    }

    pub fn frobenius(&self) -> FieldElem {
        self.wrap(self.field.frobenius(self.value))
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        self.wrap(self.field.pow(self.value, e))
    }
}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        self.try_add(rhs).expect("field mismatch")
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        self.try_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        self.try_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.wrap(self.field.neg(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_fields() -> Vec<Field> {
        [2, 3, 4, 5, 7, 8, 9, 16]
            .iter()
            .map(|&q| Field::of_order(q).unwrap())
            .collect()
    }

    #[test]
    fn fixed_moduli() {
        assert_eq!(Field::new(2, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(Field::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(Field::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(Field::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
        // the search rule agrees with the table
        for (p, k) in [(2, 2), (2, 3), (3, 2), (2, 4)] {
            assert_eq!(default_modulus(p, k), fixed_modulus(p, k).unwrap());
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(Field::new(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert!(matches!(
            Field::new(2, 10),
            Err(FieldError::UnsupportedSize { .. })
        ));
        assert!(matches!(
            Field::new(3, 6),
            Err(FieldError::UnsupportedSize { .. })
        ));
        assert!(matches!(
            Field::with_modulus(2, vec![1, 0, 1]),
            Err(FieldError::Reducible(_))
        ));
        assert!(Field::new(2, 8).is_ok());
        assert!(Field::new(2, 9).is_err());
    }

    #[test]
    fn gf4_products() {
        let f = Field::new(2, 2).unwrap();
        let w = f.elem(2);
        let w2 = &w * &w;
        // x^2 = x + 1
        assert_eq!(w2.value(), 3);
        assert_eq!((&w * &w2).value(), 1);
        let one = f.elem(1);
        assert!((&one + &one).is_zero());
        assert_eq!(w.frobenius(), w2);
        assert_eq!(f.name(2), "w");
        assert_eq!(f.name(3), "w2");
    }

    #[test]
    fn mismatch_and_zero_inverse() {
        let a = Field::new(2, 2).unwrap().elem(1);
        let b = Field::new(2, 3).unwrap().elem(1);
        assert_eq!(a.try_mul(&b).unwrap_err(), FieldError::Mismatch);
        assert_eq!(
            Field::new(3, 1).unwrap().elem(0).inv().unwrap_err(),
            FieldError::ZeroInverse
        );
    }

    #[test]
    fn frobenius_is_automorphism_of_order_k() {
        for f in small_fields() {
            for a in f.elements() {
                assert_eq!(f.frobenius_pow(a, f.degree()), a);
                assert_eq!(f.frobenius(a), f.pow(a, f.characteristic() as u64));
                for b in f.elements() {
                    assert_eq!(
                        f.frobenius(f.add(a, b)),
                        f.add(f.frobenius(a), f.frobenius(b))
                    );
                    assert_eq!(
                        f.frobenius(f.mul(a, b)),
                        f.mul(f.frobenius(a), f.frobenius(b))
                    );
                }
            }
            assert_eq!(f.frobenius(0), 0);
            assert_eq!(f.frobenius(1), 1);
        }
    }

    #[test]
    fn units_and_inverses() {
        for f in small_fields() {
            let q = f.order() as u64;
            for a in 1..f.order() as u16 {
                assert_eq!(f.pow(a, q - 1), 1);
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }

    #[test]
    fn gf9_is_not_generated_by_x() {
        let f = Field::new(3, 2).unwrap();
        // x^2 = -1 so x has order 4; the printed generator is elsewhere.
        assert_eq!(f.pow(3, 4), 1);
        assert_eq!(f.pow(f.primitive(), 4), f.neg(1));
    }
}
