//! The p-ary code spanned by the hyperplanes of `PG(n, q)`.

mod membership;

use alloc::vec;
use alloc::vec::Vec;

use crate::field::{Fp, PrimeFieldElement};
use crate::geometry::{Collineation, Hyperplane, ProjSpace, Subspace};

pub use membership::{hamada_dimension, CodeBasis};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodeError {
    #[error("codewords live in different spaces")]
    DimensionMismatch,
    #[error("dimension error: {0}")]
    DimensionError(&'static str),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("value {0} is not reduced mod p")]
    ValueOutOfRange(u16),
}

/// A function from the points of `PG(n, q)` to `F_p`, stored densely by point index.
#[derive(Clone, PartialEq, Eq)]
pub struct Codeword {
    space: ProjSpace,
    values: Vec<PrimeFieldElement>,
}

impl core::fmt::Debug for Codeword {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Codeword({:?}, wt={})", self.space, self.weight())
    }
}

/// `counts[a]` is the number of lines meeting the support in exactly `a` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecantSpectrum {
    pub counts: Vec<usize>,
}

impl SecantSpectrum {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Values of `a` in `lo..=hi` with a nonzero count.
    pub fn present_in(&self, lo: usize, hi: usize) -> Vec<usize> {
        (lo..=hi.min(self.counts.len().saturating_sub(1))).filter(|&a| self.counts[a] > 0).collect()
    }
}

impl Codeword {
    pub fn zero(space: &ProjSpace) -> Self {
        Codeword { space: space.clone(), values: vec![PrimeFieldElement::ZERO; space.num_points()] }
    }

    pub fn from_values(space: &ProjSpace, values: Vec<PrimeFieldElement>) -> Result<Self, CodeError> {
        if values.len() != space.num_points() {
            return Err(CodeError::LengthMismatch { expected: space.num_points(), got: values.len() });
        }
        if let Some(v) = values.iter().find(|v| u32::from(v.0) >= space.field().p()) {
            return Err(CodeError::ValueOutOfRange(v.0));
        }
        Ok(Codeword { space: space.clone(), values })
    }

    /// Constant `a` on the given points, zero elsewhere.
    pub fn indicator(space: &ProjSpace, points: &[usize], a: PrimeFieldElement) -> Self {
        let mut c = Self::zero(space);
        for &p in points {
            c.values[p] = a;
        }
        c
    }

    #[inline]
    pub fn space(&self) -> &ProjSpace {
        &self.space
    }
    #[inline]
    pub fn values(&self) -> &[PrimeFieldElement] {
        &self.values
    }
    #[inline]
    pub fn get(&self, idx: usize) -> PrimeFieldElement {
        self.values[idx]
    }
    pub fn set(&mut self, idx: usize, v: PrimeFieldElement) {
        self.values[idx] = v;
    }
    pub fn fp(&self) -> Fp {
        self.space.field().prime_field()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| !self.values[i].is_zero()).collect()
    }

    pub fn weight(&self) -> usize {
        self.values.iter().filter(|v| !v.is_zero()).count()
    }

    pub fn support_and_weight(&self) -> (Vec<usize>, usize) {
        let s = self.support();
        let w = s.len();
        (s, w)
    }

    pub fn holes(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i].is_zero()).collect()
    }

    pub fn add(&self, other: &Codeword) -> Result<Codeword, CodeError> {
        if self.space != other.space {
            return Err(CodeError::DimensionMismatch);
        }
        let fp = self.fp();
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| fp.add(a, b)).collect();
        Ok(Codeword { space: self.space.clone(), values })
    }

    pub fn scale(&self, a: PrimeFieldElement) -> Codeword {
        let fp = self.fp();
        Codeword { space: self.space.clone(), values: self.values.iter().map(|&v| fp.mul(a, v)).collect() }
    }

    pub fn add_scaled_points(&mut self, points: &[usize], a: PrimeFieldElement) {
        let fp = self.fp();
        for &p in points {
            self.values[p] = fp.add(self.values[p], a);
        }
    }

    /// Relabels values by the point permutation of `g`: `c^g(gP) = c(P)`.
    pub fn apply_collineation(&self, g: &Collineation) -> Codeword {
        let perm = g.permutation(&self.space);
        let mut values = vec![PrimeFieldElement::ZERO; self.values.len()];
        for (i, &v) in self.values.iter().enumerate() {
            values[perm[i]] = v;
        }
        Codeword { space: self.space.clone(), values }
    }

    /// `sum_P v(P) w(P)` in `F_p`.
    pub fn scalar_product(&self, other: &Codeword) -> Result<PrimeFieldElement, CodeError> {
        if self.space != other.space {
            return Err(CodeError::DimensionMismatch);
        }
        let p = self.space.field().p() as u64;
        let s = self
            .values
            .iter()
            .zip(&other.values)
            .fold(0u64, |acc, (&a, &b)| (acc + u64::from(a.0) * u64::from(b.0)) % p);
        Ok(PrimeFieldElement(s as u16))
    }

    /// Sum of `c` over the points of a flat of dimension at least one
    /// (or zero when `allow_point` is set).
    pub fn subspace_dot(&self, f: &Subspace, allow_point: bool) -> Result<PrimeFieldElement, CodeError> {
        if f.ambient_dim() != self.space.n() {
            return Err(CodeError::DimensionMismatch);
        }
        if f.dim() < 1 && !(allow_point && f.dim() == 0) {
            return Err(CodeError::DimensionError("flat must have dimension at least 1"));
        }
        Ok(self.sum_over(&self.space.flat_points(f)))
    }

    pub fn sum_over(&self, points: &[usize]) -> PrimeFieldElement {
        let fp = self.fp();
        points.iter().fold(PrimeFieldElement::ZERO, |acc, &p| fp.add(acc, self.values[p]))
    }

    /// Restriction to a flat, in the flat's internal coordinates.
    pub fn restrict(&self, f: &Subspace) -> Result<Codeword, CodeError> {
        if f.ambient_dim() != self.space.n() {
            return Err(CodeError::DimensionMismatch);
        }
        if f.dim() < 1 {
            return Err(CodeError::DimensionError("flat must have dimension at least 1"));
        }
        let sub = ProjSpace::new(f.dim() as usize, self.space.field().clone());
        let values = (0..sub.num_points())
            .map(|i| self.values[self.space.embed_point(f, sub.coords(i))])
            .collect();
        Ok(Codeword { space: sub, values })
    }

    pub fn secant_spectrum(&self) -> SecantSpectrum {
        let q = self.space.q();
        let vals = &self.values;
        let counts = self.space.fold_lines(
            || vec![0usize; q + 2],
            |acc, _, pts| {
                let a = pts.iter().filter(|&&p| !vals[p].is_zero()).count();
                acc[a] += 1;
            },
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
        SecantSpectrum { counts }
    }

    /// Whether `v . H = 0` for every hyperplane `H`.
    pub fn is_dual_codeword(&self) -> bool {
        let s = &self.space;
        let p = u32::from(s.field().p() as u16);
        let mut sums = vec![0u32; s.num_points()];
        for pt in self.support() {
            // hyperplanes through pt are the dual points on pt's dual hyperplane
            let dual = s.hyperplane_by_index(pt);
            for h in s.hyperplane_points(&dual) {
                sums[h] = (sums[h] + u32::from(self.values[pt].0)) % p;
            }
        }
        sums.iter().all(|&x| x == 0)
    }

    pub fn is_codeword(&self) -> bool {
        if self.space.field().h() == 1 {
            membership::is_codeword_polynomial(self)
        } else {
            membership::is_codeword_basis(self)
        }
    }

    /// Membership through the cached generator basis, for any `q`.
    pub fn is_codeword_by_basis(&self) -> bool {
        membership::is_codeword_basis(self)
    }

    /// Membership through the coefficient transform; `None` unless `q` is prime.
    pub fn is_codeword_by_polynomial(&self) -> Option<bool> {
        (self.space.field().h() == 1).then(|| membership::is_codeword_polynomial(self))
    }

    /// Some representation as a combination of hyperplanes (index, coefficient).
    pub fn hyperplane_representation(&self) -> Option<Vec<(PrimeFieldElement, usize)>> {
        CodeBasis::for_space(&self.space).represent(self)
    }
}

pub fn incidence_vector(space: &ProjSpace, h: &Hyperplane) -> Codeword {
    Codeword::indicator(space, &space.hyperplane_points(h), PrimeFieldElement::ONE)
}

/// `sum a_i H_i`; zero coefficients are dropped.
pub fn linear_combination(space: &ProjSpace, terms: &[(PrimeFieldElement, Hyperplane)]) -> Codeword {
    let mut c = Codeword::zero(space);
    for (a, h) in terms {
        if a.is_zero() {
            log::warn!("dropping zero coefficient in linear combination");
            continue;
        }
        c.add_scaled_points(&space.hyperplane_points(h), *a);
    }
    c
}
