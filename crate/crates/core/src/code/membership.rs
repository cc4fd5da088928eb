use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use super::Codeword;
use crate::field::PrimeFieldElement;
use crate::geometry::ProjSpace;

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Dimension of the code: `C(n + p - 1, n)^h + 1`.
pub fn hamada_dimension(n: usize, p: u32, h: u32) -> usize {
    (binomial(n as u64 + u64::from(p) - 1, n as u64).pow(h) + 1) as usize
}

/// Semi-echelon basis of the code, each row tracked as a combination of hyperplanes.
#[derive(Debug)]
pub struct CodeBasis {
    p: u32,
    len: usize,
    rows: Vec<Vec<u16>>,
    pivots: Vec<usize>,
    combos: Vec<Vec<u16>>,
    generators: Vec<usize>,
}

impl CodeBasis {
    /// Built once per space and cached alongside it.
    pub fn for_space(space: &ProjSpace) -> &CodeBasis {
        space.inner().basis.get_or_init(|| Box::new(CodeBasis::build(space)))
    }

    fn build(space: &ProjSpace) -> CodeBasis {
        let f = space.field();
        let p = f.p();
        let len = space.num_points();
        let target = hamada_dimension(space.n(), p, f.h());
        let mut b = CodeBasis { p, len, rows: Vec::new(), pivots: Vec::new(), combos: Vec::new(), generators: Vec::new() };
        for h in 0..len {
            if b.rows.len() == target {
                break;
            }
            let mut v = vec![0u16; len];
            for pt in space.hyperplane_points(&space.hyperplane_by_index(h)) {
                v[pt] = 1;
            }
            let mut combo = vec![0u16; len];
            combo[h] = 1;
            b.reduce(&mut v, &mut combo);
            if let Some(pc) = v.iter().position(|&x| x != 0) {
                let s = inv_mod(u32::from(v[pc]), p);
                scale(&mut v, s, p);
                scale(&mut combo, s, p);
                b.rows.push(v);
                b.pivots.push(pc);
                b.combos.push(combo);
                b.generators.push(h);
            }
        }
        debug_assert_eq!(b.rows.len(), target);
        b
    }

    fn reduce(&self, v: &mut [u16], combo: &mut [u16]) {
        let p = self.p;
        for ((row, &pc), cmb) in self.rows.iter().zip(&self.pivots).zip(&self.combos) {
            let t = u32::from(v[pc]);
            if t == 0 {
                continue;
            }
            let m = p - t;
            axpy(v, row, m, p);
            axpy(combo, cmb, m, p);
        }
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// Hyperplane indices whose incidence vectors form a basis of the code.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn contains(&self, c: &Codeword) -> bool {
        let p = self.p;
        let mut v: Vec<u16> = c.values().iter().map(|x| x.0).collect();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let t = u32::from(v[pc]);
            if t != 0 {
                axpy(&mut v, row, p - t, p);
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// Coefficients on hyperplanes (by index) summing to `c`, if `c` is in the code.
    pub fn represent(&self, c: &Codeword) -> Option<Vec<(PrimeFieldElement, usize)>> {
        let p = self.p;
        let mut v: Vec<u16> = c.values().iter().map(|x| x.0).collect();
        let mut acc = vec![0u16; self.len];
        for ((row, &pc), cmb) in self.rows.iter().zip(&self.pivots).zip(&self.combos) {
            let t = u32::from(v[pc]);
            if t != 0 {
                axpy(&mut v, row, p - t, p);
                axpy(&mut acc, cmb, t, p);
            }
        }
        if v.iter().any(|&x| x != 0) {
            return None;
        }
        Some(
            acc.iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(h, &a)| (PrimeFieldElement(a), h))
                .collect(),
        )
    }
}

#[inline]
fn axpy(v: &mut [u16], row: &[u16], m: u32, p: u32) {
    for (x, &r) in v.iter_mut().zip(row) {
        if r != 0 {
            *x = ((u32::from(*x) + m * u32::from(r)) % p) as u16;
        }
    }
}

fn scale(v: &mut [u16], s: u32, p: u32) {
    for x in v.iter_mut() {
        *x = ((u32::from(*x) * s) % p) as u16;
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = u64::from(a);
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % u64::from(p);
        }
        b = b * b % u64::from(p);
        e >>= 1;
    }
    r as u32
}

pub(super) fn is_codeword_basis(c: &Codeword) -> bool {
    CodeBasis::for_space(c.space()).contains(c)
}

/// For prime `q`: lift `c` to `G` on `F_p^(n+1)` with `G(0) = 0` and take
/// its reduced polynomial `P`. Then `c` is a codeword iff
/// `P + k * prod(1 - x_i^(p-1))` only has monomials of degree `0` or `p - 1`,
/// where `k` cancels the coefficient of `x0^(p-1) x1^(p-1)`.
pub(super) fn is_codeword_polynomial(c: &Codeword) -> bool {
    let s = c.space();
    let p = s.field().p() as usize;
    let axes = s.n() + 1;
    let size = p.pow(axes as u32);
    let mut g = vec![0u32; size];
    let pw: Vec<usize> = (0..axes).map(|i| p.pow((axes - 1 - i) as u32)).collect();
    for pt in c.support() {
        let val = u32::from(c.get(pt).0);
        let x = s.coords(pt);
        for lam in 1..p {
            let pos: usize = x.iter().zip(&pw).map(|(xi, w)| (xi.id() * lam % p) * w).sum();
            g[pos] = val;
        }
    }
    // coefficient transform, one axis at a time
    let pp = p as u32;
    let mut t = vec![0u32; p * p];
    t[0] = 1;
    for k in 1..p {
        for a in 0..p {
            let e = (p - 1 - k) as u32;
            let apow = if a == 0 { u32::from(e == 0) } else { super::super::field::Fp::new(pp).unwrap().pow(PrimeFieldElement(a as u16), e).0 as u32 };
            t[k * p + a] = (pp - apow) % pp;
        }
    }
    let mut buf = vec![0u32; p];
    for &stride in &pw {
        let block = stride * p;
        for base in (0..size).step_by(block) {
            for off in 0..stride {
                let start = base + off;
                for a in 0..p {
                    buf[a] = g[start + a * stride];
                }
                for k in 0..p {
                    let row = &t[k * p..(k + 1) * p];
                    let s: u32 = row.iter().zip(&buf).fold(0, |acc, (&x, &y)| (acc + x * y) % pp);
                    g[start + k * stride] = s;
                }
            }
        }
    }
    let corner = (p - 1) * pw[0] + (p - 1) * pw[1];
    let kappa = (pp - g[corner]) % pp;
    for (pos, &coef) in g.iter().enumerate() {
        let mut r = pos;
        let mut deg = 0usize;
        let mut extremes = true;
        let mut ones = 0usize;
        for &w in &pw {
            let e = r / w;
            r %= w;
            deg += e;
            if e == p - 1 {
                ones += 1;
            } else if e != 0 {
                extremes = false;
            }
        }
        if deg == 0 || deg == p - 1 {
            continue;
        }
        let mut adj = coef;
        if extremes {
            let sign = if ones % 2 == 0 { kappa } else { (pp - kappa) % pp };
            adj = (adj + sign) % pp;
        }
        if adj != 0 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{incidence_vector, linear_combination};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Independent oracle: rank of the full generator matrix with and without c.
    fn naive_member(c: &Codeword) -> bool {
        let s = c.space();
        let p = s.field().p();
        let rank = |rows: &mut Vec<Vec<u32>>| -> usize {
            let cols = rows[0].len();
            let mut r = 0;
            for col in 0..cols {
                let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
                rows.swap(r, piv);
                let inv = inv_mod(rows[r][col], p);
                for x in rows[r].iter_mut() {
                    *x = *x * inv % p;
                }
                for i in 0..rows.len() {
                    if i != r && rows[i][col] != 0 {
                        let t = rows[i][col];
                        for j in 0..cols {
                            rows[i][j] = (rows[i][j] + (p - t) * rows[r][j]) % p;
                        }
                    }
                }
                r += 1;
            }
            r
        };
        let mut m: Vec<Vec<u32>> = (0..s.num_points())
            .map(|h| {
                let hp = s.hyperplane_by_index(h);
                (0..s.num_points()).map(|pt| u32::from(s.on_hyperplane(&hp, pt))).collect()
            })
            .collect();
        let r1 = rank(&mut m.clone());
        m.push(c.values().iter().map(|x| u32::from(x.0)).collect());
        r1 == rank(&mut m)
    }

    #[test]
    fn dimension_matches_formula() {
        for n in 2..=3usize {
            for q in [2u32, 3, 5, 4] {
                let s = ProjSpace::of(n, q).unwrap();
                let b = CodeBasis::for_space(&s);
                let (p, h) = (s.field().p(), s.field().h());
                assert_eq!(b.dimension(), hamada_dimension(n, p, h));
            }
        }
        assert_eq!(hamada_dimension(3, 3, 1), 11);
        assert_eq!(hamada_dimension(2, 2, 1), 4);
    }

    #[test]
    fn basis_rank_is_full_rank() {
        // the early exit must not stop short of the true rank
        for (n, q) in [(2usize, 2u32), (2, 3), (3, 2), (2, 4)] {
            let s = ProjSpace::of(n, q).unwrap();
            let p = s.field().p();
            let mut m: Vec<Vec<u32>> = (0..s.num_points())
                .map(|h| {
                    let hp = s.hyperplane_by_index(h);
                    (0..s.num_points()).map(|pt| u32::from(s.on_hyperplane(&hp, pt))).collect()
                })
                .collect();
            let cols = m[0].len();
            let mut r = 0;
            for col in 0..cols {
                let Some(piv) = (r..m.len()).find(|&i| m[i][col] != 0) else { continue };
                m.swap(r, piv);
                let inv = inv_mod(m[r][col], p);
                for x in m[r].iter_mut() {
                    *x = *x * inv % p;
                }
                for i in 0..m.len() {
                    if i != r && m[i][col] != 0 {
                        let t = m[i][col];
                        for j in 0..cols {
                            m[i][j] = (m[i][j] + (p - t) * m[r][j]) % p;
                        }
                    }
                }
                r += 1;
            }
            assert_eq!(r, CodeBasis::for_space(&s).dimension());
        }
    }

    #[test]
    fn agrees_with_naive_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (n, q) in [(2usize, 2u32), (2, 3), (3, 2)] {
            let s = ProjSpace::of(n, q).unwrap();
            let p = s.field().p() as u16;
            for trial in 0..60 {
                let c = if trial % 2 == 0 {
                    let terms: Vec<_> = (0..3)
                        .map(|_| (PrimeFieldElement(rng.random_range(1..p)), s.hyperplane_by_index(rng.random_range(0..s.num_points()))))
                        .collect();
                    let mut c = linear_combination(&s, &terms);
                    if trial % 4 == 0 {
                        let i = rng.random_range(0..s.num_points());
                        c.set(i, PrimeFieldElement((c.get(i).0 + 1) % p));
                    }
                    c
                } else {
                    let vals = (0..s.num_points()).map(|_| PrimeFieldElement(rng.random_range(0..p))).collect();
                    Codeword::from_values(&s, vals).unwrap()
                };
                let naive = naive_member(&c);
                assert_eq!(c.is_codeword_by_basis(), naive);
                assert_eq!(c.is_codeword_by_polynomial(), Some(naive));
            }
        }
    }

    #[test]
    fn polynomial_and_basis_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (n, q) in [(2usize, 5u32), (2, 7), (3, 3), (3, 5), (4, 3)] {
            let s = ProjSpace::of(n, q).unwrap();
            let p = q as u16;
            for trial in 0..20 {
                let terms: Vec<_> = (0..4)
                    .map(|_| (PrimeFieldElement(rng.random_range(1..p)), s.hyperplane_by_index(rng.random_range(0..s.num_points()))))
                    .collect();
                let mut c = linear_combination(&s, &terms);
                if trial % 3 == 0 {
                    let i = rng.random_range(0..s.num_points());
                    c.set(i, PrimeFieldElement((c.get(i).0 + 1) % p));
                }
                assert_eq!(c.is_codeword_by_polynomial(), Some(c.is_codeword_by_basis()), "n={n} q={q}");
            }
        }
    }

    #[test]
    fn representation_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (n, q) in [(2usize, 4u32), (3, 3), (2, 9)] {
            let s = ProjSpace::of(n, q).unwrap();
            let p = s.field().p() as u16;
            let terms: Vec<_> = (0..3)
                .map(|_| (PrimeFieldElement(rng.random_range(1..p)), s.hyperplane_by_index(rng.random_range(0..s.num_points()))))
                .collect();
            let c = linear_combination(&s, &terms);
            let rep = c.hyperplane_representation().unwrap();
            let back: Vec<_> = rep.iter().map(|&(a, h)| (a, s.hyperplane_by_index(h))).collect();
            assert_eq!(linear_combination(&s, &back), c);
            let bad = Codeword::indicator(&s, &[0], PrimeFieldElement(1));
            assert!(bad.hyperplane_representation().is_none());
        }
    }

    #[test]
    fn single_point_is_not_a_codeword() {
        for q in [3u32, 4, 5, 7, 8, 9] {
            let s = ProjSpace::of(2, q).unwrap();
            assert!(!Codeword::indicator(&s, &[2], PrimeFieldElement(1)).is_codeword());
            assert!(incidence_vector(&s, &s.hyperplane_by_index(2)).is_codeword());
        }
    }
}
