//! Arithmetic in `F_{p^n}` for odd primes `p`.
//!
//! Elements are encoded as integers in `[0, q)` whose base-`p` digits are the
//! coefficients `c_0 .. c_{n-1}` of the residue polynomial (`c_0` is the
//! constant term). The prime subfield is exactly `[0, p)`.
//!
//! A [`Field`] is immutable and cheap to clone; fields small enough for
//! lookup tables multiply through discrete logarithms, larger ones fall back
//! to schoolbook polynomial multiplication.

use std::fmt;
use std::ops::Mul;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fields up to this size get exp/log tables.
const LOG_TABLE_LIMIT: u64 = 1 << 22;

/// An element of `F_{p^n}` in base-`p` encoding.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Fx(u32);

impl Fx {
    pub const ZERO: Fx = Fx(0);
    pub const ONE: Fx = Fx(1);

    /// Wraps a raw encoding without range checking. Use [`Field::elem`] for
    /// untrusted input.
    pub const fn new(value: u32) -> Self {
        Fx(value)
    }

    pub const fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<Fx> for u32 {
    fn from(x: Fx) -> u32 {
        x.0
    }
}

/// Quadratic character value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chi {
    NonSquare,
    Zero,
    Square,
}

impl Chi {
    pub fn value(self) -> i8 {
        match self {
            Chi::NonSquare => -1,
            Chi::Zero => 0,
            Chi::Square => 1,
        }
    }

    pub fn from_value(v: i8) -> Option<Chi> {
        match v {
            -1 => Some(Chi::NonSquare),
            0 => Some(Chi::Zero),
            1 => Some(Chi::Square),
            _ => None,
        }
    }
}

impl Mul for Chi {
    type Output = Chi;

    fn mul(self, rhs: Chi) -> Chi {
        Chi::from_value(self.value() * rhs.value()).expect("product of characters")
    }
}

impl fmt::Display for Chi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chi::NonSquare => f.write_str("-1"),
            Chi::Zero => f.write_str("0"),
            Chi::Square => f.write_str("+1"),
        }
    }
}

impl Serialize for Chi {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.value())
    }
}

/// Serializable description of a field: `{p, n, modulus}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
}

struct LogTables {
    /// `exp[i] = g^i`, doubled so that `log x + log y` never needs a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive: Fx,
    logs: Option<LogTables>,
}

/// The finite field `F_{p^n}`, `p` odd.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.0.p)
            .field("n", &self.0.n)
            .field("modulus", &self.0.modulus)
            .finish()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.n == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}", self.0.p, self.0.n)
        }
    }
}

pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    if m.is_multiple_of(2) {
        return m == 2;
    }
    let mut d = 3u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime divisors of `m`, ascending.
pub fn prime_divisors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

// Dense polynomials over F_p, lowest coefficient first.

fn poly_trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem_monic(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    poly_trim(&mut r);
    while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
        let top = r.len() - 1;
        let c = r[top];
        if c != 0 {
            let shift = top - dm;
            for (j, &mj) in m.iter().enumerate() {
                r[shift + j] = (r[shift + j] + (p - mj) * c) % p;
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let n = modulus.len() - 1;
    for d in 1..=n / 2 {
        let count = p.pow(d as u32);
        for e in 0..count {
            let mut divisor = digits_u64(e, p, d);
            divisor.push(1);
            let r = poly_rem_monic(modulus, &divisor, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn digits_u64(mut x: u64, p: u64, n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(x % p);
        x /= p;
    }
    out
}

fn canonical_modulus(p: u64, n: u32) -> Vec<u64> {
    let q = p.pow(n);
    for e in 0..q {
        let mut m = digits_u64(e, p, n as usize);
        m.push(1);
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Inner {
    fn digits(&self, x: u32) -> Vec<u64> {
        digits_u64(x as u64, self.p as u64, self.n as usize)
    }

    fn encode(&self, coeffs: &[u64]) -> u32 {
        let p = self.p as u64;
        coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32
    }

    fn slow_mul(&self, x: u32, y: u32) -> u32 {
        let p = self.p as u64;
        if self.n == 1 {
            return ((x as u64 * y as u64) % p) as u32;
        }
        let n = self.n as usize;
        let a = self.digits(x);
        let b = self.digits(y);
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % p;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..n {
                let mj = self.modulus[j] as u64;
                prod[k - n + j] = (prod[k - n + j] + (p - mj) * c) % p;
            }
        }
        self.encode(&prod[..n])
    }

    fn slow_pow(&self, x: u32, mut k: u64) -> u32 {
        let mut base = x;
        let mut acc = 1u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            k >>= 1;
        }
        acc
    }

    fn find_primitive(&self) -> Fx {
        let order = self.q as u64 - 1;
        let divisors = prime_divisors(order);
        (1..self.q)
            .find(|&x| divisors.iter().all(|r| self.slow_pow(x, order / r) != 1))
            .map(Fx)
            .expect("the multiplicative group is cyclic")
    }
}

impl Field {
    /// Builds `F_{p^n}`. Without an explicit modulus the canonical one is
    /// used: the monic irreducible of degree `n` whose coefficient vector
    /// `(c_0, .., c_{n-1})`, read as a base-`p` integer, is smallest.
    pub fn new(p: u64, n: u32, modulus: Option<&[u64]>) -> Result<Field> {
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::InvalidDegree);
        }
        let q = p
            .checked_pow(n)
            .filter(|&q| q <= u32::MAX as u64)
            .ok_or(Error::Overflow { p, n })?;

        let modulus = match modulus {
            Some(m) => {
                if m.len() != n as usize + 1 {
                    return Err(Error::InvalidModulus(format!(
                        "expected {} coefficients, found {}",
                        n + 1,
                        m.len()
                    )));
                }
                if let Some(&c) = m.iter().find(|&&c| c >= p) {
                    return Err(Error::InvalidModulus(format!(
                        "coefficient {c} is not reduced mod {p}"
                    )));
                }
                if m[n as usize] != 1 {
                    return Err(Error::InvalidModulus("modulus must be monic".into()));
                }
                if !is_irreducible(m, p) {
                    return Err(Error::ReducibleModulus(p as u32));
                }
                m.to_vec()
            }
            None => canonical_modulus(p, n),
        };

        let mut inner = Inner {
            p: p as u32,
            n,
            q: q as u32,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
            primitive: Fx::ONE,
            logs: None,
        };
        inner.primitive = inner.find_primitive();

        if q <= LOG_TABLE_LIMIT {
            let order = (q - 1) as usize;
            let mut exp = vec![0u32; 2 * order];
            let mut log = vec![0u32; q as usize];
            let mut acc = 1u32;
            for i in 0..order {
                exp[i] = acc;
                exp[i + order] = acc;
                log[acc as usize] = i as u32;
                acc = inner.slow_mul(acc, inner.primitive.0);
            }
            inner.logs = Some(LogTables { exp, log });
        }

        Ok(Field(Arc::new(inner)))
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1, None)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn n(&self) -> u32 {
        self.0.n
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients `c_0 .. c_n`, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn describe(&self) -> FieldDesc {
        FieldDesc {
            p: self.0.p,
            n: self.0.n,
            modulus: self.0.modulus.clone(),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fx> + Clone {
        (0..self.0.q).map(Fx)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Fx> + Clone {
        (1..self.0.q).map(Fx)
    }

    /// Checked conversion from an encoding.
    pub fn elem(&self, value: u64) -> Result<Fx> {
        if value < self.0.q as u64 {
            Ok(Fx(value as u32))
        } else {
            Err(Error::ElementOutOfRange { value, q: self.0.q })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> Fx {
        Fx(k.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn zero(&self) -> Fx {
        Fx::ZERO
    }

    pub fn one(&self) -> Fx {
        Fx::ONE
    }

    pub fn neg_one(&self) -> Fx {
        Fx(self.0.p - 1)
    }

    /// `1/2`, always defined in odd characteristic.
    pub fn half(&self) -> Fx {
        Fx(self.0.p.div_ceil(2))
    }

    #[inline]
    pub fn add(&self, x: Fx, y: Fx) -> Fx {
        let p = self.0.p as u64;
        if self.0.n == 1 {
            return Fx(((x.0 as u64 + y.0 as u64) % p) as u32);
        }
        let (mut a, mut b) = (x.0 as u64, y.0 as u64);
        let mut place = 1u64;
        let mut out = 0u64;
        for _ in 0..self.0.n {
            let d = (a % p + b % p) % p;
            out += d * place;
            a /= p;
            b /= p;
            place *= p;
        }
        Fx(out as u32)
    }

    #[inline]
    pub fn neg(&self, x: Fx) -> Fx {
        let p = self.0.p as u64;
        if self.0.n == 1 {
            return Fx(((p - x.0 as u64) % p) as u32);
        }
        let mut a = x.0 as u64;
        let mut place = 1u64;
        let mut out = 0u64;
        for _ in 0..self.0.n {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        Fx(out as u32)
    }

    #[inline]
    pub fn sub(&self, x: Fx, y: Fx) -> Fx {
        let p = self.0.p as u64;
        if self.0.n == 1 {
            return Fx(((x.0 as u64 + p - y.0 as u64) % p) as u32);
        }
        let (mut a, mut b) = (x.0 as u64, y.0 as u64);
        let mut place = 1u64;
        let mut out = 0u64;
        for _ in 0..self.0.n {
            let d = (a % p + p - b % p) % p;
            out += d * place;
            a /= p;
            b /= p;
            place *= p;
        }
        Fx(out as u32)
    }

    #[inline]
    pub fn mul(&self, x: Fx, y: Fx) -> Fx {
        if x.0 == 0 || y.0 == 0 {
            return Fx::ZERO;
        }
        match &self.0.logs {
            Some(t) => Fx(t.exp[(t.log[x.index()] + t.log[y.index()]) as usize]),
            None => Fx(self.0.slow_mul(x.0, y.0)),
        }
    }

    /// Multiplicative inverse; `0` has none.
    pub fn inv(&self, x: Fx) -> Result<Fx> {
        if x.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0.logs {
            Some(t) => {
                let order = self.0.q - 1;
                Fx(t.exp[((order - t.log[x.index()]) % order) as usize])
            }
            None => Fx(self.0.slow_pow(x.0, self.0.q as u64 - 2)),
        })
    }

    pub fn div(&self, x: Fx, y: Fx) -> Result<Fx> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^k` with `0^0 = 1`.
    #[inline]
    pub fn pow(&self, x: Fx, k: u64) -> Fx {
        if k == 0 {
            return Fx::ONE;
        }
        if x.0 == 0 {
            return Fx::ZERO;
        }
        match &self.0.logs {
            Some(t) => {
                let order = self.0.q as u64 - 1;
                let e = (t.log[x.index()] as u64 * (k % order)) % order;
                Fx(t.exp[e as usize])
            }
            None => Fx(self.0.slow_pow(x.0, k)),
        }
    }

    /// Absolute trace `x + x^p + .. + x^{p^{n-1}}`, an element of `[0, p)`.
    pub fn trace(&self, x: Fx) -> Fx {
        let mut conj = x;
        let mut sum = x;
        for _ in 1..self.0.n {
            conj = self.pow(conj, self.0.p as u64);
            sum = self.add(sum, conj);
        }
        debug_assert!(sum.0 < self.0.p);
        sum
    }

    pub fn chi(&self, x: Fx) -> Chi {
        if x.0 == 0 {
            return Chi::Zero;
        }
        let square = match &self.0.logs {
            Some(t) => t.log[x.index()] % 2 == 0,
            None => self.pow(x, (self.0.q as u64 - 1) / 2) == Fx::ONE,
        };
        if square {
            Chi::Square
        } else {
            Chi::NonSquare
        }
    }

    /// Square root with the smaller encoding of `{r, -r}`, by exhaustive search.
    pub fn sqrt(&self, x: Fx) -> Option<Fx> {
        if self.chi(x) == Chi::NonSquare {
            return None;
        }
        self.elements().find(|&r| self.mul(r, r) == x)
    }

    /// The smallest-encoding generator of the multiplicative group.
    pub fn primitive_element(&self) -> Fx {
        self.0.primitive
    }

    pub fn multiplicative_order(&self, x: Fx) -> Result<u64> {
        if x.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let mut order = self.0.q as u64 - 1;
        for r in prime_divisors(order) {
            while order.is_multiple_of(r) && self.pow(x, order / r) == Fx::ONE {
                order /= r;
            }
        }
        Ok(order)
    }
}
