use alloc::vec;
use alloc::vec::Vec;

use super::{GeometryError, ProjSpace, Subspace};
use crate::field::FieldElement;

/// Handle on one line in canonical line order: its pivot pair and the two
/// free-coordinate codes of its reduced basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineRef {
    pub i: u16,
    pub j: u16,
    pub a: u32,
    pub b: u32,
}

impl ProjSpace {
    fn line_chunks(&self) -> Vec<(usize, usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..=n {
                for a in 0..self.inner().qpow[n - i - 1] {
                    out.push((i, j, a));
                }
            }
        }
        out
    }

    // Walks the lines of one (i, j, a) chunk.
    fn walk_chunk(&self, i: usize, j: usize, a: usize, buf: &mut Vec<usize>, mut f: impl FnMut(LineRef, &[usize]) -> bool) -> bool {
        let n = self.n();
        let q = self.q();
        let fld = self.field();
        let qp = &self.inner().qpow;
        let free_a: Vec<usize> = (i + 1..=n).filter(|&m| m != j).collect();
        let mut av = vec![FieldElement::ZERO; n + 1];
        let mut r = a;
        for &m in free_a.iter().rev() {
            av[m] = FieldElement((r % q) as u16);
            r /= q;
        }
        let idx_a: usize = (i + 1..j).map(|m| av[m].id() * qp[n - m]).sum();
        let base_t = self.theta(n as i64 - i as i64 - 1) + idx_a;
        let base_inf = self.theta(n as i64 - j as i64 - 1);
        let nb = qp[n - j];
        let mut bv = vec![FieldElement::ZERO; n + 1];
        for b in 0..nb {
            let mut r = b;
            for m in (j + 1..=n).rev() {
                bv[m] = FieldElement((r % q) as u16);
                r /= q;
            }
            buf.clear();
            buf.push(base_inf + b);
            for t in fld.elements() {
                let mut idx = base_t + t.id() * qp[n - j];
                for m in j + 1..=n {
                    idx += fld.add(av[m], fld.mul(t, bv[m])).id() * qp[n - m];
                }
                buf.push(idx);
            }
            if !f(LineRef { i: i as u16, j: j as u16, a: a as u32, b: b as u32 }, buf) {
                return false;
            }
        }
        true
    }

    /// Visits every line in canonical order with its `q + 1` point indices.
    pub fn for_each_line(&self, mut f: impl FnMut(LineRef, &[usize])) {
        let mut buf = Vec::with_capacity(self.q() + 1);
        for (i, j, a) in self.line_chunks() {
            self.walk_chunk(i, j, a, &mut buf, |l, pts| {
                f(l, pts);
                true
            });
        }
    }

    /// First line in canonical order satisfying `pred`, with its points.
    #[cfg(feature = "parallel")]
    pub fn find_line(&self, pred: impl Fn(&[usize]) -> bool + Sync) -> Option<(LineRef, Vec<usize>)> {
        use rayon::prelude::*;
        self.line_chunks().into_par_iter().find_map_first(|(i, j, a)| {
            let mut buf = Vec::with_capacity(self.q() + 1);
            let mut hit = None;
            self.walk_chunk(i, j, a, &mut buf, |l, pts| {
                if pred(pts) {
                    hit = Some((l, pts.to_vec()));
                    return false;
                }
                true
            });
            hit
        })
    }

    #[cfg(not(feature = "parallel"))]
    pub fn find_line(&self, pred: impl Fn(&[usize]) -> bool) -> Option<(LineRef, Vec<usize>)> {
        let mut buf = Vec::with_capacity(self.q() + 1);
        for (i, j, a) in self.line_chunks() {
            let mut hit = None;
            self.walk_chunk(i, j, a, &mut buf, |l, pts| {
                if pred(pts) {
                    hit = Some((l, pts.to_vec()));
                    return false;
                }
                true
            });
            if hit.is_some() {
                return hit;
            }
        }
        None
    }

    /// Parallel fold over all lines.
    #[cfg(feature = "parallel")]
    pub fn fold_lines<T, ID, F, R>(&self, identity: ID, fold: F, reduce: R) -> T
    where
        T: Send,
        ID: Fn() -> T + Sync + Send,
        F: Fn(&mut T, LineRef, &[usize]) + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
    {
        use rayon::prelude::*;
        self.line_chunks()
            .into_par_iter()
            .fold(
                || (identity(), Vec::with_capacity(self.q() + 1)),
                |(mut acc, mut buf), (i, j, a)| {
                    self.walk_chunk(i, j, a, &mut buf, |l, pts| {
                        fold(&mut acc, l, pts);
                        true
                    });
                    (acc, buf)
                },
            )
            .map(|(acc, _)| acc)
            .reduce(&identity, reduce)
    }

    /// Sequential fallback with the same signature.
    #[cfg(not(feature = "parallel"))]
    pub fn fold_lines<T, ID, F, R>(&self, identity: ID, fold: F, reduce: R) -> T
    where
        ID: Fn() -> T,
        F: Fn(&mut T, LineRef, &[usize]),
        R: Fn(T, T) -> T,
    {
        let _ = &reduce;
        let mut acc = identity();
        self.for_each_line(|l, pts| fold(&mut acc, l, pts));
        acc
    }

    pub fn num_lines(&self) -> usize {
        let n = self.n() as i64;
        self.theta(n) * self.theta(n - 1) / (self.q() + 1)
    }

    pub fn line_flat(&self, l: LineRef) -> Subspace {
        let n = self.n();
        let (i, j) = (l.i as usize, l.j as usize);
        let q = self.q();
        let mut r1 = vec![FieldElement::ZERO; n + 1];
        let mut r2 = vec![FieldElement::ZERO; n + 1];
        r1[i] = self.field().one();
        r2[j] = self.field().one();
        let mut a = l.a as usize;
        for m in (i + 1..=n).filter(|&m| m != j).collect::<Vec<_>>().into_iter().rev() {
            r1[m] = FieldElement((a % q) as u16);
            a /= q;
        }
        let mut b = l.b as usize;
        for m in (j + 1..=n).rev() {
            r2[m] = FieldElement((b % q) as u16);
            b /= q;
        }
        self.flat_from_rows(&[r1, r2]).expect("line rows")
    }

    /// Lines through a point, each given by its other `q` points.
    pub fn lines_through_point(&self, p: usize) -> Vec<Vec<usize>> {
        let x = self.coords(p).to_vec();
        let f = self.field();
        // directions: points of a coordinate hyperplane missing p
        let k = x.iter().position(|e| !e.is_zero()).unwrap();
        let mut out = Vec::new();
        for d in 0..self.num_points() {
            let dv = self.coords(d);
            if !dv[k].is_zero() {
                continue;
            }
            let mut line = Vec::with_capacity(self.q());
            let mut v = dv.to_vec();
            for t in f.elements() {
                for (m, vm) in v.iter_mut().enumerate() {
                    *vm = f.add(dv[m], f.mul(t, x[m]));
                }
                line.push(self.index_of(&v).unwrap());
            }
            out.push(line);
        }
        out
    }

    /// All flats of dimension `dim_target` through `f` inside `within` (default: everything).
    pub fn flats_through(
        &self,
        f: &Subspace,
        dim_target: isize,
        within: Option<&Subspace>,
    ) -> Result<FlatsThrough, GeometryError> {
        let whole = self.whole();
        let w = within.unwrap_or(&whole);
        if !(f.dim() < dim_target && dim_target <= w.dim()) {
            return Err(GeometryError::DimensionError("need dim(f) < target <= dim(within)"));
        }
        if !self.contains_flat(w, f) {
            return Err(GeometryError::DimensionError("base flat is not inside the ambient flat"));
        }
        let mut cur = f.clone();
        let mut comp = Vec::new();
        for r in w.rows() {
            if !self.contains_vec(&cur, r) {
                let mut rows = cur.rows().to_vec();
                rows.push(r.clone());
                cur = self.flat_from_rows(&rows)?;
                comp.push(r.clone());
            }
        }
        let rank = (dim_target - f.dim()) as usize;
        Ok(FlatsThrough::new(self.clone(), f.rows().to_vec(), comp, rank))
    }
}

/// Streaming enumeration of the flats through a fixed flat.
pub struct FlatsThrough {
    space: ProjSpace,
    base: Vec<Vec<FieldElement>>,
    comp: Vec<Vec<FieldElement>>,
    rank: usize,
    pivots: Option<Vec<usize>>,
    free: Vec<(usize, usize)>,
    digits: Vec<usize>,
}

impl FlatsThrough {
    fn new(space: ProjSpace, base: Vec<Vec<FieldElement>>, comp: Vec<Vec<FieldElement>>, rank: usize) -> Self {
        let pivots = if rank <= comp.len() { Some((0..rank).collect()) } else { None };
        let mut it = FlatsThrough { space, base, comp, rank, pivots, free: Vec::new(), digits: Vec::new() };
        it.reset_free();
        it
    }

    fn reset_free(&mut self) {
        self.free.clear();
        if let Some(p) = &self.pivots {
            let m = self.comp.len();
            for (r, &pc) in p.iter().enumerate() {
                for c in pc + 1..m {
                    if !p.contains(&c) {
                        self.free.push((r, c));
                    }
                }
            }
        }
        self.digits = vec![0; self.free.len()];
    }

    fn advance(&mut self) {
        let q = self.space.q();
        for d in self.digits.iter_mut() {
            *d += 1;
            if *d < q {
                return;
            }
            *d = 0;
        }
        // next pivot combination
        let m = self.comp.len();
        let r = self.rank;
        let p = self.pivots.as_mut().unwrap();
        let mut i = r;
        loop {
            if i == 0 {
                self.pivots = None;
                return;
            }
            i -= 1;
            if p[i] < m - r + i {
                p[i] += 1;
                for k in i + 1..r {
                    p[k] = p[k - 1] + 1;
                }
                break;
            }
        }
        self.reset_free();
    }
}

impl Iterator for FlatsThrough {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        let piv = self.pivots.clone()?;
        let f = self.space.field().clone();
        let w = self.space.n() + 1;
        let m = self.comp.len();
        let mut coef = vec![vec![FieldElement::ZERO; m]; self.rank];
        for (r, &pc) in piv.iter().enumerate() {
            coef[r][pc] = f.one();
        }
        for (&(r, c), &d) in self.free.iter().zip(&self.digits) {
            coef[r][c] = FieldElement(d as u16);
        }
        let mut rows = self.base.clone();
        for cr in &coef {
            let mut v = vec![FieldElement::ZERO; w];
            for (cc, g) in cr.iter().zip(&self.comp) {
                if cc.is_zero() {
                    continue;
                }
                for (vj, &gj) in v.iter_mut().zip(g) {
                    *vj = f.add(*vj, f.mul(*cc, gj));
                }
            }
            rows.push(v);
        }
        self.advance();
        Some(self.space.flat_from_rows(&rows).expect("same ambient"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    fn gaussian(m: usize, r: usize, q: usize) -> usize {
        let mut num = 1usize;
        let mut den = 1usize;
        for i in 0..r {
            num *= q.pow((m - i) as u32) - 1;
            den *= q.pow((i + 1) as u32) - 1;
        }
        num / den
    }

    #[test]
    fn find_line_is_first_in_order() {
        let s = ProjSpace::of(3, 4).unwrap();
        let pred = |pts: &[usize]| pts.iter().filter(|&&p| p % 7 == 3).count() == 2;
        let mut first = None;
        s.for_each_line(|l, pts| {
            if first.is_none() && pred(pts) {
                first = Some((l, pts.to_vec()));
            }
        });
        assert_eq!(s.find_line(pred), first);
        assert!(s.find_line(|pts| pts.len() > 100).is_none());
    }

    #[test]
    fn lines_are_distinct_and_complete() {
        for (n, q) in [(2usize, 2u32), (2, 4), (3, 3), (4, 2), (3, 4)] {
            let s = ProjSpace::of(n, q).unwrap();
            let mut seen = BTreeSet::new();
            let mut pairs = 0usize;
            s.for_each_line(|l, pts| {
                assert_eq!(pts.len(), s.q() + 1);
                let set: BTreeSet<usize> = pts.iter().copied().collect();
                assert_eq!(set.len(), s.q() + 1);
                let fl = s.line_flat(l);
                let mut fp = s.flat_points(&fl);
                fp.sort();
                assert_eq!(fp, set.iter().copied().collect::<Vec<_>>());
                assert!(seen.insert(set));
                pairs += pts.len() * (pts.len() - 1) / 2;
            });
            assert_eq!(seen.len(), s.num_lines());
            // each pair of points on exactly one line
            assert_eq!(pairs, s.num_points() * (s.num_points() - 1) / 2);
        }
    }

    #[test]
    fn fold_counts_lines() {
        let s = ProjSpace::of(3, 5).unwrap();
        let c = s.fold_lines(|| 0usize, |a, _, _| *a += 1, |a, b| a + b);
        assert_eq!(c, s.num_lines());
    }

    #[test]
    fn pencil_counts() {
        for q in [2u32, 3, 4, 5] {
            let s2 = ProjSpace::of(2, q).unwrap();
            let p = s2.point_flat(3);
            assert_eq!(s2.flats_through(&p, 1, None).unwrap().count(), q as usize + 1);
            let s3 = ProjSpace::of(3, q).unwrap();
            let l = s3.span_points(&[0, 7]);
            let planes: Vec<_> = s3.flats_through(&l, 2, None).unwrap().collect();
            assert_eq!(planes.len(), q as usize + 1);
            for pl in &planes {
                assert!(s3.contains_flat(pl, &l));
            }
            let s4 = ProjSpace::of(4, q).unwrap();
            let pl = s4.span_points(&[0, 1, s4.num_points() - 1]);
            assert_eq!(pl.dim(), 2);
            assert_eq!(s4.flats_through(&pl, 3, None).unwrap().count(), q as usize + 1);
        }
    }

    #[test]
    fn gaussian_counts_and_distinct() {
        for (n, q) in [(3usize, 2u32), (3, 3), (4, 2)] {
            let s = ProjSpace::of(n, q).unwrap();
            let e = Subspace::empty(n);
            for d in 0..n as isize {
                let all: BTreeSet<Subspace> = s.flats_through(&e, d, None).unwrap().collect();
                assert_eq!(all.len(), gaussian(n + 1, d as usize + 1, q as usize));
            }
            let pt = s.point_flat(4);
            for d in 1..n as isize {
                let all: BTreeSet<Subspace> = s.flats_through(&pt, d, None).unwrap().collect();
                assert_eq!(all.len(), gaussian(n, d as usize, q as usize));
            }
        }
    }

    #[test]
    fn flats_within() {
        let s = ProjSpace::of(4, 3).unwrap();
        let solid = s.hyperplane_to_flat(&s.hyperplane_by_index(10));
        let pts = s.flat_points(&solid);
        let l = s.span_points(&[pts[0], pts[5]]);
        let planes: Vec<_> = s.flats_through(&l, 2, Some(&solid)).unwrap().collect();
        assert_eq!(planes.len(), 4);
        assert!(planes.iter().all(|p| s.contains_flat(&solid, p)));
        assert!(s.flats_through(&l, 1, None).is_err());
        assert!(s.flats_through(&l, 4, Some(&solid)).is_err());
    }

    #[test]
    fn lines_through_point_partition() {
        let s = ProjSpace::of(3, 3).unwrap();
        let ls = s.lines_through_point(11);
        assert_eq!(ls.len(), s.theta(2));
        let mut all: Vec<usize> = ls.concat();
        all.sort();
        let expect: Vec<usize> = (0..s.num_points()).filter(|&x| x != 11).collect();
        assert_eq!(all, expect);
    }
}
