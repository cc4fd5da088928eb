
use alloc::vec::Vec;

use rand::Rng;

use super::subspace::rref_in_place;
use super::{GeometryError, Hyperplane, ProjSpace, Subspace};
use crate::field::{FieldElement, GaloisField};

/// A projectivity `x -> M x` of `PG(n, q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collineation {
    matrix: Vec<Vec<FieldElement>>,
    inverse: Vec<Vec<FieldElement>>,
}

fn invert(f: &GaloisField, m: &[Vec<FieldElement>]) -> Option<Vec<Vec<FieldElement>>> {
    let w = m.len();
    let mut aug: Vec<Vec<FieldElement>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..w).map(|j| if i == j { f.one() } else { FieldElement::ZERO }));
            row
        })
        .collect();
    rref_in_place(f, &mut aug);
    if aug.len() < w || (0..w).any(|i| aug[i][i] != f.one()) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[w..].to_vec()).collect())
}

impl Collineation {
    pub fn new(space: &ProjSpace, matrix: Vec<Vec<FieldElement>>) -> Result<Self, GeometryError> {
        let w = space.n() + 1;
        if matrix.len() != w || matrix.iter().any(|r| r.len() != w) {
            return Err(GeometryError::AmbientMismatch);
        }
        let inverse = invert(space.field(), &matrix).ok_or(GeometryError::SingularMatrix)?;
        Ok(Collineation { matrix, inverse })
    }

    pub fn identity(space: &ProjSpace) -> Self {
        let w = space.n() + 1;
        let f = space.field();
        let m: Vec<Vec<FieldElement>> = (0..w)
            .map(|i| (0..w).map(|j| if i == j { f.one() } else { FieldElement::ZERO }).collect())
            .collect();
        Collineation { matrix: m.clone(), inverse: m }
    }

    pub fn random<R: Rng + ?Sized>(space: &ProjSpace, rng: &mut R) -> Self {
        let w = space.n() + 1;
        let q = space.q();
        loop {
            let m: Vec<Vec<FieldElement>> = (0..w)
                .map(|_| (0..w).map(|_| FieldElement(rng.random_range(0..q) as u16)).collect())
                .collect();
            if let Ok(c) = Self::new(space, m) {
                return c;
            }
        }
    }

    pub fn matrix(&self) -> &[Vec<FieldElement>] {
        &self.matrix
    }

    fn mul_vec(f: &GaloisField, m: &[Vec<FieldElement>], x: &[FieldElement]) -> Vec<FieldElement> {
        m.iter()
            .map(|r| r.iter().zip(x).fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect()
    }

    pub fn apply_vec(&self, space: &ProjSpace, x: &[FieldElement]) -> Vec<FieldElement> {
        Self::mul_vec(space.field(), &self.matrix, x)
    }

    pub fn apply_point(&self, space: &ProjSpace, idx: usize) -> usize {
        space.index_of(&self.apply_vec(space, space.coords(idx))).expect("invertible")
    }

    pub fn apply_flat(&self, space: &ProjSpace, s: &Subspace) -> Subspace {
        let rows: Vec<Vec<FieldElement>> = s.rows().iter().map(|r| self.apply_vec(space, r)).collect();
        space.flat_from_rows(&rows).expect("same ambient")
    }

    /// Image of `{x : a.x = 0}` is `{y : (M^-T a).y = 0}`.
    pub fn apply_hyperplane(&self, space: &ProjSpace, h: &Hyperplane) -> Hyperplane {
        let f = space.field();
        let w = space.n() + 1;
        let d: Vec<FieldElement> = (0..w)
            .map(|j| (0..w).fold(f.zero(), |acc, i| f.add(acc, f.mul(self.inverse[i][j], h.dual_coords[i]))))
            .collect();
        space.hyperplane(&d).expect("invertible")
    }

    /// Point permutation induced on canonical indices.
    pub fn permutation(&self, space: &ProjSpace) -> Vec<usize> {
        (0..space.num_points()).map(|i| self.apply_point(space, i)).collect()
    }

    pub fn compose(&self, space: &ProjSpace, other: &Collineation) -> Collineation {
        let f = space.field();
        let w = space.n() + 1;
        let mm = |a: &[Vec<FieldElement>], b: &[Vec<FieldElement>]| -> Vec<Vec<FieldElement>> {
            (0..w)
                .map(|i| {
                    (0..w)
                        .map(|j| (0..w).fold(f.zero(), |acc, k| f.add(acc, f.mul(a[i][k], b[k][j]))))
                        .collect()
                })
                .collect()
        };
        Collineation { matrix: mm(&self.matrix, &other.matrix), inverse: mm(&other.inverse, &self.inverse) }
    }
}
