use core::fmt;

use super::FieldError;

/// Element of the prime field `F_p`, the coefficient domain of codewords.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct PrimeFieldElement(pub u16);

impl PrimeFieldElement {
    pub const ZERO: Self = PrimeFieldElement(0);
    pub const ONE: Self = PrimeFieldElement(1);

    #[inline]
    pub fn value(self) -> u16 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for PrimeFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimeOp {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    Neg,
}

/// Arithmetic modulo a prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Result<Self, FieldError> {
        if !super::is_prime(p) {
            return Err(FieldError::CompositeP(p));
        }
        if p > u32::from(u16::MAX) {
            return Err(FieldError::UnsupportedSize(u64::from(p)));
        }
        Ok(Fp { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn elem(self, v: i64) -> PrimeFieldElement {
        PrimeFieldElement(v.rem_euclid(i64::from(self.p)) as u16)
    }

    #[inline]
    pub fn add(self, a: PrimeFieldElement, b: PrimeFieldElement) -> PrimeFieldElement {
        let s = u32::from(a.0) + u32::from(b.0);
        PrimeFieldElement(if s >= self.p { s - self.p } else { s } as u16)
    }

    #[inline]
    pub fn sub(self, a: PrimeFieldElement, b: PrimeFieldElement) -> PrimeFieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(self, a: PrimeFieldElement) -> PrimeFieldElement {
        if a.0 == 0 {
            a
        } else {
            PrimeFieldElement((self.p - u32::from(a.0)) as u16)
        }
    }

    #[inline]
    pub fn mul(self, a: PrimeFieldElement, b: PrimeFieldElement) -> PrimeFieldElement {
        PrimeFieldElement((u32::from(a.0) * u32::from(b.0) % self.p) as u16)
    }

    pub fn pow(self, a: PrimeFieldElement, e: u32) -> PrimeFieldElement {
        PrimeFieldElement(super::poly::pow_mod(u32::from(a.0), e, self.p) as u16)
    }

    pub fn inv(self, a: PrimeFieldElement) -> Result<PrimeFieldElement, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.p - 2))
    }

    pub fn div(self, a: PrimeFieldElement, b: PrimeFieldElement) -> Result<PrimeFieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Checked entry point; `b` is ignored for unary ops.
    pub fn prime_arith(
        self,
        a: PrimeFieldElement,
        b: PrimeFieldElement,
        op: PrimeOp,
    ) -> Result<PrimeFieldElement, FieldError> {
        let p = self.p;
        for x in [a, b] {
            if u32::from(x.0) >= p {
                return Err(FieldError::FieldMismatch);
            }
        }
        match op {
            PrimeOp::Add => Ok(self.add(a, b)),
            PrimeOp::Sub => Ok(self.sub(a, b)),
            PrimeOp::Mul => Ok(self.mul(a, b)),
            PrimeOp::Div => self.div(a, b),
            PrimeOp::Inv => self.inv(a),
            PrimeOp::Neg => Ok(self.neg(a)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let f5 = Fp::new(5).unwrap();
        let e = |v| PrimeFieldElement(v);
        assert_eq!(f5.prime_arith(e(4), e(3), PrimeOp::Add).unwrap(), e(2));
        assert_eq!(f5.prime_arith(e(2), e(0), PrimeOp::Neg).unwrap(), e(3));
        let f2 = Fp::new(2).unwrap();
        assert_eq!(f2.add(e(1), e(1)), e(0));
        assert_eq!(f5.inv(e(0)), Err(FieldError::DivisionByZero));
        assert_eq!(f5.prime_arith(e(7), e(1), PrimeOp::Add), Err(FieldError::FieldMismatch));
        assert_eq!(Fp::new(9), Err(FieldError::CompositeP(9)));
    }

    #[test]
    fn inverses_mod_small_primes() {
        for p in [2u32, 3, 5, 7, 11, 13, 127] {
            let f = Fp::new(p).unwrap();
            for a in 1..p {
                let a = PrimeFieldElement(a as u16);
                assert_eq!(f.mul(a, f.inv(a).unwrap()), PrimeFieldElement::ONE);
            }
        }
    }
}
