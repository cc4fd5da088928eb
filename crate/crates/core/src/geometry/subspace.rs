use alloc::vec;
use alloc::vec::Vec;

use super::{GeometryError, Hyperplane, ProjSpace};
use crate::field::{FieldElement, GaloisField};

/// A flat of `PG(n, q)` given by the reduced row-echelon basis of its vector space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    rows: Vec<Vec<FieldElement>>,
}

impl Subspace {
    pub fn empty(n: usize) -> Self {
        Subspace { n, rows: Vec::new() }
    }

    /// Projective dimension; `-1` for the empty flat.
    #[inline]
    pub fn dim(&self) -> isize {
        self.rows.len() as isize - 1
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.iter().position(|x| !x.is_zero()).unwrap()).collect()
    }
}

/// In-place Gauss-Jordan; returns the rank and leaves nonzero rows first.
pub(crate) fn rref_in_place(f: &GaloisField, m: &mut Vec<Vec<FieldElement>>) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let s = f.inv_unchecked(m[rank][c]);
        for x in m[rank].iter_mut() {
            *x = f.mul(*x, s);
        }
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let t = m[r][c];
                for j in c..cols {
                    let v = f.mul(t, m[rank][j]);
                    m[r][j] = f.sub(m[r][j], v);
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    m.truncate(rank);
    rank
}

impl ProjSpace {
    pub fn flat_from_rows(&self, rows: &[Vec<FieldElement>]) -> Result<Subspace, GeometryError> {
        let w = self.n() + 1;
        if rows.iter().any(|r| r.len() != w) {
            return Err(GeometryError::AmbientMismatch);
        }
        let mut m: Vec<Vec<FieldElement>> = rows.to_vec();
        rref_in_place(self.field(), &mut m);
        Ok(Subspace { n: self.n(), rows: m })
    }

    pub fn whole(&self) -> Subspace {
        let w = self.n() + 1;
        let rows = (0..w)
            .map(|i| {
                let mut r = vec![FieldElement::ZERO; w];
                r[i] = self.field().one();
                r
            })
            .collect();
        Subspace { n: self.n(), rows }
    }

    pub fn point_flat(&self, idx: usize) -> Subspace {
        Subspace { n: self.n(), rows: vec![self.coords(idx).to_vec()] }
    }

    /// Smallest flat containing all the given flats.
    pub fn span(&self, flats: &[&Subspace]) -> Subspace {
        let rows: Vec<Vec<FieldElement>> = flats.iter().flat_map(|s| s.rows.iter().cloned()).collect();
        self.flat_from_rows(&rows).expect("same ambient space")
    }

    pub fn span_points(&self, pts: &[usize]) -> Subspace {
        let rows: Vec<Vec<FieldElement>> = pts.iter().map(|&p| self.coords(p).to_vec()).collect();
        self.flat_from_rows(&rows).expect("same ambient space")
    }

    /// Adds one point to a flat.
    pub fn extend(&self, s: &Subspace, p: usize) -> Subspace {
        let mut rows = s.rows.clone();
        rows.push(self.coords(p).to_vec());
        self.flat_from_rows(&rows).expect("same ambient space")
    }

    pub fn contains_vec(&self, s: &Subspace, v: &[FieldElement]) -> bool {
        let f = self.field();
        let mut x = v.to_vec();
        for r in &s.rows {
            let pc = r.iter().position(|e| !e.is_zero()).unwrap();
            let t = x[pc];
            if !t.is_zero() {
                for (xi, &ri) in x.iter_mut().zip(r) {
                    *xi = f.sub(*xi, f.mul(t, ri));
                }
            }
        }
        x.iter().all(|e| e.is_zero())
    }

    #[inline]
    pub fn contains_point(&self, s: &Subspace, idx: usize) -> bool {
        self.contains_vec(s, self.coords(idx))
    }

    /// Whether `inner` is contained in `outer`.
    pub fn contains_flat(&self, outer: &Subspace, inner: &Subspace) -> bool {
        inner.rows.iter().all(|r| self.contains_vec(outer, r))
    }

    /// The dual flat: all `a` with `a . x = 0` for every `x` in `s`.
    pub fn annihilator(&self, s: &Subspace) -> Subspace {
        let f = self.field();
        let w = self.n() + 1;
        let piv = s.pivots();
        let mut rows = Vec::new();
        for free in (0..w).filter(|c| !piv.contains(c)) {
            let mut v = vec![FieldElement::ZERO; w];
            v[free] = f.one();
            for (r, &pc) in s.rows.iter().zip(&piv) {
                v[pc] = f.neg(r[free]);
            }
            rows.push(v);
        }
        self.flat_from_rows(&rows).expect("same ambient space")
    }

    pub fn meet(&self, a: &Subspace, b: &Subspace) -> Subspace {
        if a.is_empty() || b.is_empty() {
            return Subspace::empty(self.n());
        }
        let da = self.annihilator(a);
        let db = self.annihilator(b);
        let m = self.annihilator(&self.span(&[&da, &db]));
        debug_assert_eq!(a.dim() + b.dim(), self.span(&[a, b]).dim() + m.dim());
        m
    }

    pub fn hyperplane_to_flat(&self, h: &Hyperplane) -> Subspace {
        let d = Subspace { n: self.n(), rows: vec![h.dual_coords.clone()] };
        self.annihilator(&d)
    }

    pub fn flat_to_hyperplane(&self, s: &Subspace) -> Result<Hyperplane, GeometryError> {
        if s.dim() != self.n() as isize - 1 {
            return Err(GeometryError::DimensionError("flat is not a hyperplane"));
        }
        let a = self.annihilator(s);
        Ok(Hyperplane { dual_coords: a.rows[0].clone() })
    }

    /// Points of a flat, in the order of its internal coordinates.
    pub fn flat_points(&self, s: &Subspace) -> Vec<usize> {
        let k = s.rows.len();
        if k == 0 {
            return Vec::new();
        }
        let sub = ProjSpace::new(k - 1, self.field().clone());
        (0..sub.num_points()).map(|i| self.embed_point(s, sub.coords(i))).collect()
    }

    /// Ambient index of the point with internal coordinates `y` in `s`.
    #[inline]
    pub fn embed_point(&self, s: &Subspace, y: &[FieldElement]) -> usize {
        let v = self.embed_vec(s, y);
        self.index_of(&v).expect("independent rows")
    }

    pub fn embed_vec(&self, s: &Subspace, y: &[FieldElement]) -> Vec<FieldElement> {
        let f = self.field();
        let mut v = vec![FieldElement::ZERO; self.n() + 1];
        for (yi, r) in y.iter().zip(&s.rows) {
            if yi.is_zero() {
                continue;
            }
            for (vj, &rj) in v.iter_mut().zip(r) {
                *vj = f.add(*vj, f.mul(*yi, rj));
            }
        }
        v
    }

    /// Internal coordinates of an ambient point lying in `s`.
    pub fn internal_coords(&self, s: &Subspace, idx: usize) -> Option<Vec<FieldElement>> {
        let x = self.coords(idx);
        let piv = s.pivots();
        let y: Vec<FieldElement> = piv.iter().map(|&pc| x[pc]).collect();
        if self.embed_vec(s, &y) == x {
            Some(y)
        } else {
            None
        }
    }

    /// Completes `s` to the whole space with points of lowest index.
    pub fn complement_points(&self, s: &Subspace, count: usize) -> Vec<usize> {
        let mut cur = s.clone();
        let mut out = Vec::new();
        for p in 0..self.num_points() {
            if out.len() == count {
                break;
            }
            if !self.contains_point(&cur, p) {
                cur = self.extend(&cur, p);
                out.push(p);
            }
        }
        out
    }

    pub fn flat_by_points_rank(&self, pts: &[usize]) -> isize {
        self.span_points(pts).dim()
    }
}
