//! Points, hyperplanes and flats of `PG(n, q)`.
//!
//! Points are numbered by the lexicographic order of their normalized
//! coordinates (first nonzero coordinate equal to one). A point whose leading
//! one sits at position `k` has index
//! `theta(n-k-1) + sum_{m>k} id(x_m) q^(n-m)`.

mod collineation;
mod enumerate;
mod subspace;

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use once_cell::race::OnceBox;

use crate::field::{FieldElement, GaloisField};

pub use collineation::Collineation;
pub use enumerate::{FlatsThrough, LineRef};
pub use subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("dimension error: {0}")]
    DimensionError(&'static str),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("objects live in different ambient spaces")]
    AmbientMismatch,
    #[error("coordinate vector is zero")]
    ZeroVector,
}

/// `(q^(m+1) - 1) / (q - 1)` for `m >= 0`, zero for negative `m`.
pub fn theta(m: i64, q: u64) -> BigUint {
    if m < 0 {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut acc = BigUint::zero();
    let mut pw = BigUint::one();
    for _ in 0..=m {
        acc += &pw;
        pw *= &q;
    }
    acc
}

/// [`theta`] in machine integers; panics on overflow.
pub fn theta_usize(m: i64, q: usize) -> usize {
    if m < 0 {
        return 0;
    }
    let mut acc = 0usize;
    let mut pw = 1usize;
    for _ in 0..=m {
        acc = acc.checked_add(pw).expect("theta overflow");
        pw = pw.saturating_mul(q);
    }
    acc
}

/// A point together with its canonical index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    pub coords: Vec<FieldElement>,
    pub index: usize,
}

/// A hyperplane stored by its normalized dual coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    pub dual_coords: Vec<FieldElement>,
}

pub(crate) struct SpaceInner {
    n: usize,
    field: GaloisField,
    q: usize,
    // thetas[m + 1] = theta(m) for m in -1..=n
    thetas: Vec<usize>,
    qpow: Vec<usize>,
    coords: Vec<FieldElement>,
    pub(crate) basis: OnceBox<crate::code::CodeBasis>,
}

/// `PG(n, q)` with its point table. Cheap to clone.
#[derive(Clone)]
pub struct ProjSpace {
    inner: alloc::sync::Arc<SpaceInner>,
}

impl core::fmt::Debug for ProjSpace {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "PG({}, {})", self.n(), self.q())
    }
}

impl PartialEq for ProjSpace {
    fn eq(&self, other: &Self) -> bool {
        alloc::sync::Arc::ptr_eq(&self.inner, &other.inner)
            || (self.n() == other.n() && self.field() == other.field())
    }
}
impl Eq for ProjSpace {}

#[cfg(feature = "std")]
fn space_cache() -> &'static std::sync::Mutex<std::collections::HashMap<(usize, crate::field::FieldSpec), ProjSpace>> {
    static CACHE: std::sync::OnceLock<
        std::sync::Mutex<std::collections::HashMap<(usize, crate::field::FieldSpec), ProjSpace>>,
    > = std::sync::OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl ProjSpace {
    /// `PG(n, field)`; with `std` the instance is shared per `(n, field)`.
    pub fn new(n: usize, field: GaloisField) -> Self {
        #[cfg(feature = "std")]
        {
            let key = (n, field.spec().clone());
            if let Some(s) = space_cache().lock().unwrap().get(&key) {
                return s.clone();
            }
            let s = Self::build(n, field);
            space_cache().lock().unwrap().entry(key).or_insert(s).clone()
        }
        #[cfg(not(feature = "std"))]
        Self::build(n, field)
    }

    /// `PG(n, q)` with the default modulus.
    pub fn of(n: usize, q: u32) -> Result<Self, crate::field::FieldError> {
        Ok(Self::new(n, GaloisField::of_order(q)?))
    }

    fn build(n: usize, field: GaloisField) -> Self {
        let q = field.q();
        let thetas: Vec<usize> = (-1..=n as i64).map(|m| theta_usize(m, q)).collect();
        let qpow: Vec<usize> = (0..=n).map(|e| q.pow(e as u32)).collect();
        let total = thetas[n + 1];
        let mut coords = vec![FieldElement::ZERO; total * (n + 1)];
        let one = field.one();
        let mut idx = 0usize;
        for k in (0..=n).rev() {
            let free = n - k;
            for rem in 0..qpow[free] {
                let row = &mut coords[idx * (n + 1)..(idx + 1) * (n + 1)];
                row[k] = one;
                let mut r = rem;
                for m in (k + 1..=n).rev() {
                    row[m] = FieldElement((r % q) as u16);
                    r /= q;
                }
                idx += 1;
            }
        }
        ProjSpace {
            inner: alloc::sync::Arc::new(SpaceInner { n, field, q, thetas, qpow, coords, basis: OnceBox::new() }),
        }
    }

    pub(crate) fn inner(&self) -> &SpaceInner {
        &self.inner
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.inner.n
    }
    #[inline]
    pub fn q(&self) -> usize {
        self.inner.q
    }
    #[inline]
    pub fn field(&self) -> &GaloisField {
        &self.inner.field
    }
    #[inline]
    pub fn num_points(&self) -> usize {
        self.inner.thetas[self.inner.n + 1]
    }
    /// `theta(m)` for `-1 <= m <= n`, zero below.
    #[inline]
    pub fn theta(&self, m: i64) -> usize {
        if m < 0 {
            0
        } else {
            self.inner.thetas[m as usize + 1]
        }
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> &[FieldElement] {
        let w = self.inner.n + 1;
        &self.inner.coords[idx * w..(idx + 1) * w]
    }

    pub fn point(&self, idx: usize) -> ProjPoint {
        ProjPoint { coords: self.coords(idx).to_vec(), index: idx }
    }

    /// Index of a vector whose first nonzero entry is already one.
    #[inline]
    pub fn index_normalized(&self, v: &[FieldElement]) -> usize {
        let n = self.inner.n;
        let k = v.iter().position(|x| !x.is_zero()).expect("nonzero vector");
        let mut idx = 0usize;
        for m in k + 1..=n {
            idx = idx * self.inner.q + v[m].id();
        }
        self.inner.thetas[n - k] + idx
    }

    /// Index of the point spanned by a nonzero vector.
    pub fn index_of(&self, v: &[FieldElement]) -> Result<usize, GeometryError> {
        let k = v.iter().position(|x| !x.is_zero()).ok_or(GeometryError::ZeroVector)?;
        let f = self.field();
        let s = f.inv_unchecked(v[k]);
        let n = self.inner.n;
        let mut idx = 0usize;
        for &x in &v[k + 1..=n] {
            idx = idx * self.inner.q + f.mul(x, s).id();
        }
        Ok(self.inner.thetas[n - k] + idx)
    }

    pub fn normalize(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>, GeometryError> {
        let k = v.iter().position(|x| !x.is_zero()).ok_or(GeometryError::ZeroVector)?;
        let f = self.field();
        let s = f.inv_unchecked(v[k]);
        Ok(v.iter().map(|&x| f.mul(x, s)).collect())
    }

    pub fn points(&self) -> impl Iterator<Item = ProjPoint> + '_ {
        (0..self.num_points()).map(move |i| self.point(i))
    }

    #[inline]
    pub fn dot(&self, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
        let f = self.field();
        a.iter().zip(b).fold(f.zero(), |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
    }

    pub fn hyperplane(&self, dual: &[FieldElement]) -> Result<Hyperplane, GeometryError> {
        if dual.len() != self.n() + 1 {
            return Err(GeometryError::AmbientMismatch);
        }
        Ok(Hyperplane { dual_coords: self.normalize(dual)? })
    }

    /// Hyperplanes share the point numbering through their dual coordinates.
    pub fn hyperplane_by_index(&self, idx: usize) -> Hyperplane {
        Hyperplane { dual_coords: self.coords(idx).to_vec() }
    }

    pub fn hyperplane_index(&self, h: &Hyperplane) -> usize {
        self.index_normalized(&h.dual_coords)
    }

    #[inline]
    pub fn on_hyperplane(&self, h: &Hyperplane, point: usize) -> bool {
        self.dot(&h.dual_coords, self.coords(point)).is_zero()
    }

    pub fn hyperplane_points(&self, h: &Hyperplane) -> Vec<usize> {
        self.flat_points(&self.hyperplane_to_flat(h))
    }
}

/// All points of `PG(n, q)` in canonical order.
pub fn enumerate_points(n: usize, q: u32) -> Result<Vec<ProjPoint>, crate::field::FieldError> {
    let s = ProjSpace::of(n, q)?;
    Ok(s.points().collect())
}
