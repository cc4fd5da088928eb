//! Arithmetic in `GF(p^h)` and in its prime subfield.
//!
//! Elements of `GF(q)` are stored as ids in `0..q`. The id of the coefficient
//! tuple `(c0, .., c(h-1))` is `c0*p^(h-1) + .. + c(h-1)`, so comparing ids is
//! lexicographic comparison of tuples. Zero has id 0; one has id `p^(h-1)`.

mod conway;
mod poly;
mod prime;

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

pub use prime::{Fp, PrimeFieldElement, PrimeOp};

/// Largest field order accepted (table memory grows as `q^2`).
pub const MAX_Q: u32 = 1024;
/// Largest order covered by the built-in modulus table.
pub const TABLE_Q: u32 = 128;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    CompositeP(u32),
    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    ReducibleModulus(u32),
    #[error("field of order {0} is not supported without an explicit modulus")]
    UnsupportedSize(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("cannot parse field element: {0}")]
    Parse(String),
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, h)` with `q = p^h`.
pub fn prime_power(q: u64) -> Result<(u32, u32), FieldError> {
    if q < 2 {
        return Err(FieldError::NotPrimePower(q));
    }
    let mut p = 2u64;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut h = 0;
    while rest % p == 0 {
        rest /= p;
        h += 1;
    }
    if rest != 1 || p > u64::from(u32::MAX) {
        return Err(FieldError::NotPrimePower(q));
    }
    Ok((p as u32, h))
}

/// A validated description of `GF(p^h)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    h: u32,
    modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn h(&self) -> u32 {
        self.h
    }
    pub fn q(&self) -> u32 {
        self.p.pow(self.h)
    }
    /// Little-endian coefficients, monic, length `h + 1`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
}

/// Validates `(p, h)` and picks the modulus, from the built-in table when omitted.
pub fn field_make(p: u32, h: u32, modulus: Option<&[u32]>) -> Result<FieldSpec, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::CompositeP(p));
    }
    let q = u64::from(p).checked_pow(h).unwrap_or(u64::MAX);
    if h == 0 || q > u64::from(MAX_Q) {
        return Err(FieldError::UnsupportedSize(q));
    }
    let modulus: Vec<u32> = match modulus {
        Some(m) => {
            if m.len() != h as usize + 1 || m[h as usize] != 1 || m.iter().any(|&c| c >= p) {
                return Err(FieldError::ReducibleModulus(h));
            }
            if !poly::is_irreducible(m, p) {
                return Err(FieldError::ReducibleModulus(h));
            }
            m.to_vec()
        }
        None if h == 1 => vec![0, 1],
        None => match conway::lookup(p, h) {
            Some(m) if q <= u64::from(TABLE_Q) => m.to_vec(),
            _ => return Err(FieldError::UnsupportedSize(q)),
        },
    };
    Ok(FieldSpec { p, h, modulus })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct FieldElement(pub u16);

impl FieldElement {
    pub const ZERO: Self = FieldElement(0);

    #[inline]
    pub fn id(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    Neg,
}

#[derive(Debug)]
struct Tables {
    spec: FieldSpec,
    q: usize,
    one: u16,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    // prime subfield: k -> k*one, and back (u16::MAX when outside)
    embed: Vec<u16>,
    project: Vec<u16>,
}

/// Table-driven `GF(q)`. Cheap to clone.
#[derive(Clone, Debug)]
pub struct GaloisField {
    t: Arc<Tables>,
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.t, &other.t) || self.t.spec == other.t.spec
    }
}
impl Eq for GaloisField {}

impl GaloisField {
    pub fn new(spec: FieldSpec) -> Self {
        let p = spec.p as usize;
        let h = spec.h as usize;
        let q = spec.q() as usize;
        let coeffs: Vec<Vec<u32>> = (0..q).map(|id| id_to_coeffs(id, p, h)).collect();
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            for b in a..q {
                let s: Vec<u32> = (0..h).map(|i| (coeffs[a][i] + coeffs[b][i]) % spec.p).collect();
                let s = coeffs_to_id(&s, p) as u16;
                add[a * q + b] = s;
                add[b * q + a] = s;
                let m = if h == 1 {
                    ((a * b) % p) as u16
                } else {
                    let mut r = poly::mul_mod(&coeffs[a], &coeffs[b], &spec.modulus, spec.p);
                    r.resize(h, 0);
                    coeffs_to_id(&r, p) as u16
                };
                mul[a * q + b] = m;
                mul[b * q + a] = m;
            }
        }
        let mut neg = vec![0u16; q];
        let mut inv = vec![0u16; q];
        for a in 0..q {
            for b in 0..q {
                if add[a * q + b] == 0 {
                    neg[a] = b as u16;
                }
            }
        }
        let one = p.pow(h as u32 - 1) as u16;
        for a in 1..q {
            for b in 1..q {
                if mul[a * q + b] == one {
                    inv[a] = b as u16;
                    break;
                }
            }
        }
        let embed: Vec<u16> = (0..p).map(|k| (k * one as usize) as u16).collect();
        let mut project = vec![u16::MAX; q];
        for (k, &e) in embed.iter().enumerate() {
            project[e as usize] = k as u16;
        }
        GaloisField {
            t: Arc::new(Tables { spec, q, one, add, mul, neg, inv, embed, project }),
        }
    }

    /// Field of order `q` with the default modulus.
    pub fn of_order(q: u32) -> Result<Self, FieldError> {
        let (p, h) = prime_power(u64::from(q))?;
        Ok(Self::new(field_make(p, h, None)?))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.t.spec
    }
    #[inline]
    pub fn q(&self) -> usize {
        self.t.q
    }
    #[inline]
    pub fn p(&self) -> u32 {
        self.t.spec.p
    }
    #[inline]
    pub fn h(&self) -> u32 {
        self.t.spec.h
    }
    pub fn prime_field(&self) -> Fp {
        Fp::new(self.t.spec.p).expect("validated prime")
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }
    #[inline]
    pub fn one(&self) -> FieldElement {
        FieldElement(self.t.one)
    }
    #[inline]
    pub fn elem(&self, id: usize) -> FieldElement {
        debug_assert!(id < self.t.q);
        FieldElement(id as u16)
    }
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.t.q).map(|i| FieldElement(i as u16))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.t.add[a.id() * self.t.q + b.id()])
    }
    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.t.mul[a.id() * self.t.q + b.id()])
    }
    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.t.neg[a.id()])
    }
    /// Inverse of a nonzero element; zero maps to zero.
    #[inline]
    pub fn inv_unchecked(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.t.inv[a.id()])
    }
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(self.inv_unchecked(a))
        }
    }
    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }
    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut r = self.one();
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// Checked arithmetic; `b` is ignored for unary ops.
    pub fn field_arith(&self, a: FieldElement, b: FieldElement, op: FieldOp) -> Result<FieldElement, FieldError> {
        if a.id() >= self.t.q || b.id() >= self.t.q {
            return Err(FieldError::FieldMismatch);
        }
        match op {
            FieldOp::Add => Ok(self.add(a, b)),
            FieldOp::Sub => Ok(self.sub(a, b)),
            FieldOp::Mul => Ok(self.mul(a, b)),
            FieldOp::Div => self.div(a, b),
            FieldOp::Inv => self.inv(a),
            FieldOp::Neg => Ok(self.neg(a)),
        }
    }

    /// Image of `k mod p` in `GF(q)`.
    #[inline]
    pub fn from_prime(&self, k: PrimeFieldElement) -> FieldElement {
        FieldElement(self.t.embed[k.0 as usize])
    }
    /// Inverse of [`from_prime`](Self::from_prime) on the prime subfield.
    #[inline]
    pub fn to_prime(&self, a: FieldElement) -> Option<PrimeFieldElement> {
        match self.t.project[a.id()] {
            u16::MAX => None,
            k => Some(PrimeFieldElement(k)),
        }
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        id_to_coeffs(a.id(), self.p() as usize, self.h() as usize)
    }
    pub fn from_coeffs(&self, c: &[u32]) -> Result<FieldElement, FieldError> {
        if c.len() != self.h() as usize || c.iter().any(|&x| x >= self.p()) {
            return Err(FieldError::FieldMismatch);
        }
        Ok(FieldElement(coeffs_to_id(c, self.p() as usize) as u16))
    }

    /// Textual form `c0,c1,..`; a bare integer for prime fields.
    pub fn format(&self, a: FieldElement) -> String {
        let mut s = String::new();
        for (i, c) in self.coeffs(a).iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{c}");
        }
        s
    }

    pub fn parse(&self, s: &str) -> Result<FieldElement, FieldError> {
        let parts: Result<Vec<u32>, _> = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|x| x.trim().parse::<u32>())
            .collect();
        let parts = parts.map_err(|_| FieldError::Parse(s.into()))?;
        self.from_coeffs(&parts).map_err(|_| FieldError::Parse(s.into()))
    }
}

fn id_to_coeffs(mut id: usize, p: usize, h: usize) -> Vec<u32> {
    let mut c = vec![0u32; h];
    for i in (0..h).rev() {
        c[i] = (id % p) as u32;
        id /= p;
    }
    c
}

fn coeffs_to_id(c: &[u32], p: usize) -> usize {
    c.iter().fold(0usize, |acc, &x| acc * p + x as usize)
}
