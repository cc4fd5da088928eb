//! Piecewise weight bounds `A_q`, `B_{n,q}` and `D_{n,q}`.

use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::prime_power;
use crate::geometry::theta;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundsError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("bounds need n >= 2, got {0}")]
    DimensionError(usize),
}

/// Which piece of the definition applies to a given `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `2q^(n-1)`: `q < 7` or `q` in {8, 9, 16, 25, 27, 49}.
    TwoQ,
    /// `(3q - sqrt(6q) - 1/2) q^(n-2)`: `q` in {7, 11, 13, 17}.
    Small,
    /// `(3q - sqrt(6q) + 9/2) q^(n-2)`: `q` in {19, 121}.
    Medium,
    /// `(4q - 4 sqrt(q) - 25/2) q^(n-2)`: `q` in {29, 31, 32}.
    FourRootQ,
    /// `(4q - sqrt(8q) - 33/2) q^(n-2)`.
    General,
}

impl Branch {
    pub fn of(q: u64) -> Branch {
        match q {
            _ if q < 7 => Branch::TwoQ,
            8 | 9 | 16 | 25 | 27 | 49 => Branch::TwoQ,
            7 | 11 | 13 | 17 => Branch::Small,
            19 | 121 => Branch::Medium,
            29 | 31 | 32 => Branch::FourRootQ,
            _ => Branch::General,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::TwoQ => "2q^(n-1)",
            Branch::Small => "3q-sqrt(6q)-1/2",
            Branch::Medium => "3q-sqrt(6q)+9/2",
            Branch::FourRootQ => "4q-4sqrt(q)-25/2",
            Branch::General => "4q-sqrt(8q)-33/2",
        }
    }
}

/// The real number `(num - sqrt(radicand)) / 2`, held exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfRadical {
    pub num: BigInt,
    pub radicand: BigInt,
}

impl HalfRadical {
    fn new(num: BigInt, radicand: BigInt) -> Self {
        HalfRadical { num, radicand }
    }

    /// Exact floor, from integer square-root bracketing.
    pub fn floor(&self) -> BigInt {
        let t = self.radicand.sqrt();
        let diff = &self.num - &t;
        if &t * &t == self.radicand {
            diff.div_floor(&BigInt::from(2))
        } else {
            (diff - BigInt::one()).div_floor(&BigInt::from(2))
        }
    }

    /// Rational interval of width at most `2^-bits` containing the value.
    pub fn bracket(&self, bits: u32) -> (BigRational, BigRational) {
        let (lo, hi) = sqrt_bracket(&self.radicand, bits);
        let two = BigRational::from_integer(BigInt::from(2));
        let n = BigRational::from_integer(self.num.clone());
        ((&n - hi) / &two, (n - lo) / two)
    }

    /// `true` iff `w <= value`.
    pub fn admits(&self, w: &BigInt) -> bool {
        w <= &self.floor()
    }
}

impl fmt::Display for HalfRadical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand.is_zero() {
            write!(f, "{}/2", self.num)
        } else {
            write!(f, "({} - sqrt({}))/2", self.num, self.radicand)
        }
    }
}

/// `[lo, hi]` with `lo <= sqrt(x) <= hi` and `hi - lo <= 2^-bits`.
pub fn sqrt_bracket(x: &BigInt, bits: u32) -> (BigRational, BigRational) {
    assert!(!x.is_negative());
    let scale = BigInt::one() << (2 * bits);
    let t = (x * &scale).sqrt();
    let den = BigInt::one() << bits;
    let exact = &t * &t == x * &scale;
    let lo = BigRational::new(t.clone(), den.clone());
    let hi = if exact { lo.clone() } else { BigRational::new(t + 1, den) };
    (lo, hi)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundTable {
    pub n: usize,
    pub q: u64,
    pub branch: Branch,
    /// `None` outside the range where the plane lemmas are stated.
    pub a_q: Option<u64>,
    pub b: HalfRadical,
    pub floor_b: BigInt,
    pub d: Option<HalfRadical>,
    pub floor_d: Option<BigInt>,
}

impl BoundTable {
    pub fn floor_b_usize(&self) -> usize {
        self.floor_b.to_usize().unwrap_or(usize::MAX)
    }

    pub fn within_b(&self, weight: usize) -> bool {
        BigInt::from(weight) <= self.floor_b
    }
}

fn half_radical(branch: Branch, n: usize, q: u64) -> HalfRadical {
    let qb = BigInt::from(q);
    let qn2 = qb.pow((n - 2) as u32);
    let qn2sq = &qn2 * &qn2;
    let lin = |k: i64, r: i64| (BigInt::from(2 * k) * &qb + r) * &qn2;
    match branch {
        Branch::TwoQ => HalfRadical::new(BigInt::from(4) * qb.pow((n - 1) as u32), BigInt::zero()),
        Branch::Small => HalfRadical::new(lin(3, -1), BigInt::from(24) * &qb * qn2sq),
        Branch::Medium => HalfRadical::new(lin(3, 9), BigInt::from(24) * &qb * qn2sq),
        Branch::FourRootQ => HalfRadical::new((BigInt::from(8) * &qb - 25) * &qn2, BigInt::from(64) * &qb * qn2sq),
        Branch::General => HalfRadical::new(lin(4, -33), BigInt::from(32) * &qb * qn2sq),
    }
}

/// `A_q`, or `None` when `q < 7` or `q` is in the excluded set.
pub fn a_q(q: u64) -> Option<u64> {
    match Branch::of(q) {
        Branch::TwoQ => None,
        Branch::Small => Some(3 * q - 3),
        Branch::Medium => Some(3 * q + 2),
        Branch::FourRootQ | Branch::General => Some(4 * q - 21),
    }
}

pub fn bounds(n: usize, q: u64) -> Result<BoundTable, BoundsError> {
    if n < 2 {
        return Err(BoundsError::DimensionError(n));
    }
    if prime_power(q).is_err() {
        return Err(BoundsError::NotPrimePower(q));
    }
    let branch = Branch::of(q);
    let b = half_radical(branch, n, q);
    let floor_b = b.floor();
    let d = match branch {
        Branch::TwoQ => None,
        Branch::FourRootQ => Some(half_radical(Branch::General, n, q)),
        br => Some(half_radical(br, n, q)),
    };
    let floor_d = d.as_ref().map(HalfRadical::floor);
    Ok(BoundTable { n, q, branch, a_q: a_q(q), b, floor_b, d, floor_d })
}

/// `(3q - 6) theta_{n-2} + 2`, the ceiling of the two-hyperplane regime.
pub fn two_hyperplane_limit(n: usize, q: u64) -> BigUint {
    let t = theta(n as i64 - 2, q);
    if q < 2 {
        return BigUint::from(2u32);
    }
    BigUint::from(3 * q - 6) * t + 2u32
}
