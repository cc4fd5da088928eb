//! Generators for the codeword families: odd plane words, cones over plane
//! words, and a seeded sampler of small-weight cones.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{bounds, BoundsError};
use crate::classify::{canonical_vertex, TypeTag};
use crate::code::{linear_combination, CodeError, Codeword};
use crate::decompose::{decomposition_with_vertex, DecomposeError, Decomposition};
use crate::field::{is_prime, FieldElement, FieldError, PrimeFieldElement};
use crate::geometry::{Collineation, GeometryError, Hyperplane, ProjSpace, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u32),
    #[error("vertex and plane meet")]
    FlatsNotDisjoint,
    #[error("vertex and plane do not span the space")]
    SpanDeficient,
    #[error("{0}")]
    DimensionError(&'static str),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Decompose(#[from] alloc::boxed::Box<DecomposeError>),
}

/// The three concurrent lines `X0 = 0`, `X1 = 0`, `X0 = X1` of `PG(2, p)`.
pub fn odd_lines(space: &ProjSpace) -> [Hyperplane; 3] {
    let f = space.field();
    let (z, o) = (f.zero(), f.one());
    [
        space.hyperplane(&[o, z, z]).unwrap(),
        space.hyperplane(&[z, o, z]).unwrap(),
        space.hyperplane(&[o, f.neg(o), z]).unwrap(),
    ]
}

/// `a` on `(0,1,a)`, `b` on `(1,0,b)`, `-c` on `(1,1,c)`, zero elsewhere.
pub fn bagchi_codeword(p: u32) -> Result<Codeword, ConstructError> {
    if p == 2 || !is_prime(p) {
        return Err(ConstructError::NotOddPrime(p));
    }
    let s = ProjSpace::of(2, p)?;
    let f = s.field().clone();
    let fp = f.prime_field();
    let mut c = Codeword::zero(&s);
    for a in f.elements() {
        let v = PrimeFieldElement(a.0);
        c.set(s.index_of(&[f.zero(), f.one(), a])?, v);
        c.set(s.index_of(&[f.one(), f.zero(), a])?, v);
        c.set(s.index_of(&[f.one(), f.one(), a])?, fp.neg(v));
    }
    Ok(c)
}

/// Parameters of `(gamma c + l m + l' m' + l'' m'')^g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddParams {
    pub p: u32,
    pub gamma: PrimeFieldElement,
    pub lambdas: [PrimeFieldElement; 3],
    pub g: Collineation,
}

impl OddParams {
    pub fn new(
        p: u32,
        gamma: PrimeFieldElement,
        lambdas: [PrimeFieldElement; 3],
        matrix: Vec<Vec<FieldElement>>,
    ) -> Result<Self, ConstructError> {
        if p == 2 || !is_prime(p) {
            return Err(ConstructError::NotOddPrime(p));
        }
        let s = ProjSpace::of(2, p)?;
        let g = Collineation::new(&s, matrix)?;
        if gamma.is_zero() || u32::from(gamma.0) >= p {
            return Err(ConstructError::DimensionError("gamma must be a nonzero element of F_p"));
        }
        Ok(OddParams { p, gamma, lambdas, g })
    }

    pub fn random<R: Rng + ?Sized>(p: u32, rng: &mut R) -> Result<Self, ConstructError> {
        if p == 2 || !is_prime(p) {
            return Err(ConstructError::NotOddPrime(p));
        }
        let s = ProjSpace::of(2, p)?;
        let pe = |rng: &mut R, lo: u32| PrimeFieldElement(rng.random_range(lo..p) as u16);
        let gamma = pe(rng, 1);
        let lambdas = [pe(rng, 0), pe(rng, 0), pe(rng, 0)];
        Ok(OddParams { p, gamma, lambdas, g: Collineation::random(&s, rng) })
    }

    /// Image of the common point `(0,0,1)` of the three lines.
    pub fn center(&self) -> usize {
        let s = ProjSpace::of(2, self.p).expect("validated");
        self.g.apply_point(&s, s.theta(0) - 1)
    }
}

pub fn generalized_odd(params: &OddParams) -> Result<Codeword, ConstructError> {
    let c = bagchi_codeword(params.p)?;
    let s = c.space().clone();
    let lines = odd_lines(&s);
    let terms: Vec<_> = params
        .lambdas
        .iter()
        .zip(lines)
        .filter(|(l, _)| !l.is_zero())
        .map(|(&l, h)| (l, h))
        .collect();
    let d = c.scale(params.gamma).add(&linear_combination(&s, &terms))?;
    Ok(d.apply_collineation(&params.g))
}

/// `wt(base) q^(n-2) + theta_(n-3) [sigma != 0]`.
pub fn cone_weight(space: &ProjSpace, base_weight: usize, sigma_nonzero: bool) -> usize {
    let n = space.n() as u32;
    base_weight * space.q().pow(n - 2) + if sigma_nonzero { space.theta(n as i64 - 3) } else { 0 }
}

/// Sum of a plane codeword over one line; the same for every line.
pub fn alpha_sum(base: &Codeword) -> PrimeFieldElement {
    let s = base.space();
    base.sum_over(&s.hyperplane_points(&s.hyperplane_by_index(0)))
}

/// The cone with vertex `kappa` over `base`, a codeword on `pi` given in
/// the internal coordinates of `pi`.
pub fn cone_codeword(
    space: &ProjSpace,
    kappa: &Subspace,
    pi: &Subspace,
    base: &Codeword,
) -> Result<Codeword, ConstructError> {
    let n = space.n();
    if pi.dim() != 2 || kappa.dim() != n as isize - 3 {
        return Err(ConstructError::DimensionError("need a plane and an (n-3)-flat"));
    }
    if base.space().n() != 2 || base.space().field() != space.field() {
        return Err(ConstructError::DimensionError("base must live on PG(2, q)"));
    }
    if !space.meet(kappa, pi).is_empty() {
        return Err(ConstructError::FlatsNotDisjoint);
    }
    if space.span(&[kappa, pi]).dim() != n as isize {
        return Err(ConstructError::SpanDeficient);
    }
    let f = space.field();
    let mut c = Codeword::zero(space);
    let sigma = alpha_sum(base);
    if !sigma.is_zero() {
        for p in space.flat_points(kappa) {
            c.set(p, sigma);
        }
    }
    let kr = kappa.rows();
    let m = kr.len();
    let q = space.q();
    let total = q.pow(m as u32);
    let bs = base.space();
    for y in base.support() {
        let v = base.get(y);
        let pv = space.embed_vec(pi, bs.coords(y));
        let mut w = pv.clone();
        for code in 0..total {
            w.copy_from_slice(&pv);
            let mut r = code;
            for row in kr {
                let t = f.elem(r % q);
                r /= q;
                if t.is_zero() {
                    continue;
                }
                for (wj, &kj) in w.iter_mut().zip(row) {
                    *wj = f.add(*wj, f.mul(t, kj));
                }
            }
            c.set(space.index_of(&w)?, v);
        }
    }
    Ok(c)
}

/// Uniformly random flat of projective dimension `d`.
pub fn random_flat<R: Rng + ?Sized>(space: &ProjSpace, d: isize, rng: &mut R) -> Subspace {
    let n = space.n();
    if d < 0 {
        return Subspace::empty(n);
    }
    loop {
        let rows: Vec<Vec<FieldElement>> = (0..=d)
            .map(|_| (0..=n).map(|_| space.field().elem(rng.random_range(0..space.q()))).collect())
            .collect();
        if let Ok(s) = space.flat_from_rows(&rows) {
            if s.dim() == d {
                return s;
            }
        }
    }
}

/// Random plane meeting `kappa` trivially.
pub fn random_complement_plane<R: Rng + ?Sized>(space: &ProjSpace, kappa: &Subspace, rng: &mut R) -> Subspace {
    loop {
        let pi = random_flat(space, 2, rng);
        if space.meet(kappa, &pi).is_empty() {
            return pi;
        }
    }
}

/// Random plane codeword of the given family, on `PG(2, q)`.
pub fn random_plane_word<R: Rng + ?Sized>(
    plane: &ProjSpace,
    tag: TypeTag,
    rng: &mut R,
) -> Result<Option<Codeword>, ConstructError> {
    let p = plane.field().p();
    let nz = |rng: &mut R| PrimeFieldElement(rng.random_range(1..p) as u16);
    let fp = plane.field().prime_field();
    let lines = plane.num_points();
    let distinct = |rng: &mut R, k: usize| -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        while out.len() < k {
            let l = rng.random_range(0..lines);
            if !out.contains(&l) {
                out.push(l);
            }
        }
        out
    };
    let h = |i: usize| plane.hyperplane_by_index(i);
    let word = match tag {
        TypeTag::T0 => Codeword::zero(plane),
        TypeTag::Tq1 => linear_combination(plane, &[(nz(rng), h(rng.random_range(0..lines)))]),
        TypeTag::T2q => {
            let a = nz(rng);
            let l = distinct(rng, 2);
            linear_combination(plane, &[(a, h(l[0])), (fp.neg(a), h(l[1]))])
        }
        TypeTag::T2q1 => {
            if p == 2 {
                return Ok(None);
            }
            let a = nz(rng);
            let b = loop {
                let b = nz(rng);
                if !fp.add(a, b).is_zero() {
                    break b;
                }
            };
            let l = distinct(rng, 2);
            linear_combination(plane, &[(a, h(l[0])), (b, h(l[1]))])
        }
        TypeTag::Ttriangle => {
            let l = loop {
                let l = distinct(rng, 3);
                let fl: Vec<Subspace> = l.iter().map(|&i| plane.hyperplane_to_flat(&h(i))).collect();
                if plane.meet(&plane.meet(&fl[0], &fl[1]), &fl[2]).is_empty() {
                    break l;
                }
            };
            linear_combination(plane, &[(nz(rng), h(l[0])), (nz(rng), h(l[1])), (nz(rng), h(l[2]))])
        }
        TypeTag::Tstar => {
            // lines through a point are the dual points of its dual line
            let center = rng.random_range(0..lines);
            let pencil = plane.hyperplane_points(&plane.hyperplane_by_index(center));
            let mut pick: Vec<usize> = Vec::new();
            while pick.len() < 3 {
                let l = pencil[rng.random_range(0..pencil.len())];
                if !pick.contains(&l) {
                    pick.push(l);
                }
            }
            linear_combination(plane, &[(nz(rng), h(pick[0])), (nz(rng), h(pick[1])), (nz(rng), h(pick[2]))])
        }
        TypeTag::Todd => {
            if plane.field().h() != 1 || p == 2 {
                return Ok(None);
            }
            generalized_odd(&OddParams::random(p, rng)?)?
        }
        TypeTag::Other => return Ok(None),
    };
    Ok(Some(word))
}

/// How a sampled cone was built, plus the decomposition a decomposer should find.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recipe {
    pub seed: u64,
    pub family: TypeTag,
    pub sampled_vertex: Subspace,
    pub sampled_plane: Subspace,
    /// Base word on the sampled plane, in its internal coordinates.
    pub sampled_base: Codeword,
    /// Ground truth with the canonical vertex.
    pub decomposition: Decomposition,
}

const FAMILIES: [(TypeTag, u32); 7] = [
    (TypeTag::T0, 1),
    (TypeTag::Tq1, 4),
    (TypeTag::T2q, 4),
    (TypeTag::T2q1, 4),
    (TypeTag::Ttriangle, 4),
    (TypeTag::Tstar, 4),
    (TypeTag::Todd, 2),
];

/// A random cone of weight at most `floor(B_{n,q})`, deterministic in `seed`.
pub fn random_small_weight(n: usize, q: u32, seed: u64) -> Result<(Codeword, Recipe), ConstructError> {
    if n < 3 {
        return Err(ConstructError::DimensionError("cones need n >= 3"));
    }
    let space = ProjSpace::of(n, q)?;
    let plane = ProjSpace::new(2, space.field().clone());
    let limit = bounds(n, u64::from(q))?.floor_b_usize();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total: u32 = FAMILIES.iter().map(|f| f.1).sum();
    loop {
        let mut r = rng.random_range(0..total);
        let family = FAMILIES.iter().find(|f| if r < f.1 { true } else { r -= f.1; false }).unwrap().0;
        let Some(base) = random_plane_word(&plane, family, &mut rng)? else { continue };
        let w = cone_weight(&space, base.weight(), !alpha_sum(&base).is_zero());
        if w > limit {
            continue;
        }
        let kappa = random_flat(&space, n as isize - 3, &mut rng);
        let pi = random_complement_plane(&space, &kappa, &mut rng);
        let c = cone_codeword(&space, &kappa, &pi, &base)?;
        debug_assert_eq!(c.weight(), w);
        let vertex = canonical_vertex(&c, &kappa, &pi);
        let decomposition = decomposition_with_vertex(&c, &vertex).map_err(alloc::boxed::Box::new)?;
        let recipe = Recipe { seed, family, sampled_vertex: kappa, sampled_plane: pi, sampled_base: base, decomposition };
        return Ok((c, recipe));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::incidence_vector;

    fn pf(v: u16) -> PrimeFieldElement {
        PrimeFieldElement(v)
    }

    #[test]
    fn bagchi_small_values() {
        let c = bagchi_codeword(3).unwrap();
        let s = c.space();
        let f = s.field();
        let at = |x: [usize; 3]| c.get(s.index_of(&[f.elem(x[0]), f.elem(x[1]), f.elem(x[2])]).unwrap());
        assert_eq!(c.weight(), 6);
        assert_eq!(at([0, 1, 1]), pf(1));
        assert_eq!(at([0, 1, 2]), pf(2));
        assert_eq!(at([0, 1, 0]), pf(0));
        assert_eq!(at([1, 1, 1]), pf(2));
        assert_eq!(at([0, 0, 1]), pf(0));
    }

    #[test]
    fn bagchi_weights_and_membership() {
        for p in [3u32, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let c = bagchi_codeword(p).unwrap();
            assert_eq!(c.weight(), 3 * p as usize - 3);
            assert!(c.is_dual_codeword(), "p={p}");
            assert!(c.is_codeword(), "p={p}");
        }
        let c = bagchi_codeword(7).unwrap();
        let s = c.space();
        for l in 0..s.num_points() {
            let line = incidence_vector(s, &s.hyperplane_by_index(l));
            assert!(c.scalar_product(&line).unwrap().is_zero());
        }
    }

    #[test]
    fn bagchi_refuses_bad_p() {
        assert_eq!(bagchi_codeword(2), Err(ConstructError::NotOddPrime(2)));
        assert_eq!(bagchi_codeword(9), Err(ConstructError::NotOddPrime(9)));
    }

    #[test]
    fn generalized_odd_identity_is_bagchi() {
        let s = ProjSpace::of(2, 5).unwrap();
        let params = OddParams { p: 5, gamma: pf(1), lambdas: [pf(0); 3], g: Collineation::identity(&s) };
        assert_eq!(generalized_odd(&params).unwrap(), bagchi_codeword(5).unwrap());
        assert_eq!(params.center(), s.theta(0) - 1);
    }

    #[test]
    fn generalized_odd_weight_dichotomy() {
        let s = ProjSpace::of(2, 5).unwrap();
        let id = Collineation::identity(&s);
        let zero_sum = OddParams { p: 5, gamma: pf(1), lambdas: [pf(1), pf(2), pf(2)], g: id.clone() };
        assert_eq!(generalized_odd(&zero_sum).unwrap().weight(), 12);
        let two = OddParams { p: 5, gamma: pf(1), lambdas: [pf(1), pf(1), pf(0)], g: id };
        let d = generalized_odd(&two).unwrap();
        assert_eq!(d.weight(), 13);
        assert_eq!(d.get(two.center()), pf(2));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in [5u32, 7, 11, 13] {
            for _ in 0..100 {
                let params = OddParams::random(p, &mut rng).unwrap();
                let d = generalized_odd(&params).unwrap();
                let expect = if d.get(params.center()).is_zero() { 3 * p - 3 } else { 3 * p - 2 };
                assert_eq!(d.weight(), expect as usize);
                let lam = params.lambdas.iter().fold(0u32, |a, l| (a + u32::from(l.0)) % p);
                assert_eq!(u32::from(d.get(params.center()).0), lam);
            }
        }
    }

    #[test]
    fn odd_params_validation() {
        let s = ProjSpace::of(2, 5).unwrap();
        let z = s.field().zero();
        assert!(matches!(
            OddParams::new(5, pf(1), [pf(0); 3], vec![vec![z; 3]; 3]),
            Err(ConstructError::Geometry(GeometryError::SingularMatrix))
        ));
        assert!(OddParams::new(5, pf(0), [pf(0); 3], Collineation::identity(&s).matrix().to_vec()).is_err());
    }

    #[test]
    fn cone_examples() {
        let s = ProjSpace::of(3, 7).unwrap();
        let plane = ProjSpace::new(2, s.field().clone());
        let kappa = s.point_flat(0);
        let pi = complement_plane_for(&s, &kappa);
        let line = incidence_vector(&plane, &plane.hyperplane_by_index(3));
        let c = cone_codeword(&s, &kappa, &pi, &line).unwrap();
        assert_eq!(c.weight(), s.theta(2));
        assert!(c.is_codeword());
        let diff = linear_combination(&plane, &[(pf(1), plane.hyperplane_by_index(1)), (pf(6), plane.hyperplane_by_index(9))]);
        let c = cone_codeword(&s, &kappa, &pi, &diff).unwrap();
        assert_eq!(c.weight(), 98);
        assert!(c.get(0).is_zero());
        assert_eq!(c.restrict(&pi).unwrap(), diff);

        let s4 = ProjSpace::of(4, 5).unwrap();
        let plane = ProjSpace::new(2, s4.field().clone());
        let pencil = plane.hyperplane_points(&plane.hyperplane_by_index(4));
        let star = linear_combination(&plane, &[(pf(1), plane.hyperplane_by_index(pencil[0])), (pf(1), plane.hyperplane_by_index(pencil[1])), (pf(2), plane.hyperplane_by_index(pencil[2]))]);
        assert_eq!(star.weight(), 16);
        let kappa = s4.span_points(&[0, 1]);
        let pi = complement_plane_for(&s4, &kappa);
        let c = cone_codeword(&s4, &kappa, &pi, &star).unwrap();
        // direct count against the formula
        assert_eq!(c.weight(), 16 * 25 + 6);
        assert_eq!(c.weight(), cone_weight(&s4, 16, true));
        assert!(c.is_codeword());
    }

    fn complement_plane_for(s: &ProjSpace, kappa: &Subspace) -> Subspace {
        crate::classify::complement_plane(s, kappa)
    }

    #[test]
    fn cone_rejects_bad_flats() {
        let s = ProjSpace::of(3, 3).unwrap();
        let plane = ProjSpace::new(2, s.field().clone());
        let base = Codeword::zero(&plane);
        let pi = s.span_points(&[0, 1, 4]);
        assert_eq!(pi.dim(), 2);
        let on = s.flat_points(&pi)[0];
        assert_eq!(cone_codeword(&s, &s.point_flat(on), &pi, &base), Err(ConstructError::FlatsNotDisjoint));
        assert!(matches!(cone_codeword(&s, &s.span_points(&[0, 5]), &pi, &base), Err(ConstructError::DimensionError(_))));
    }

    #[test]
    fn cone_weight_formula_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for (n, q) in [(3usize, 5u32), (4, 3), (3, 4), (4, 7)] {
            let s = ProjSpace::of(n, q).unwrap();
            let plane = ProjSpace::new(2, s.field().clone());
            for tag in [TypeTag::Tq1, TypeTag::T2q, TypeTag::T2q1, TypeTag::Ttriangle, TypeTag::Tstar, TypeTag::Todd] {
                let Some(base) = random_plane_word(&plane, tag, &mut rng).unwrap() else { continue };
                let kappa = random_flat(&s, n as isize - 3, &mut rng);
                let pi = random_complement_plane(&s, &kappa, &mut rng);
                let c = cone_codeword(&s, &kappa, &pi, &base).unwrap();
                assert_eq!(c.weight(), cone_weight(&s, base.weight(), !alpha_sum(&base).is_zero()));
                assert_eq!(c.restrict(&pi).unwrap(), base);
                assert!(c.is_codeword());
            }
        }
    }

    #[test]
    fn random_small_weight_contract() {
        for (n, q) in [(3usize, 7u32), (3, 8), (4, 7)] {
            let limit = bounds(n, u64::from(q)).unwrap().floor_b_usize();
            for seed in 0..8 {
                let (c, r) = random_small_weight(n, q, seed).unwrap();
                assert!(c.weight() <= limit);
                assert!(c.is_codeword());
                assert_eq!(r.decomposition.reconstruct(c.space()).unwrap(), c);
                assert_eq!(random_small_weight(n, q, seed).unwrap().0, c);
            }
        }
    }
}
