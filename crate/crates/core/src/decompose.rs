//! Recovering the vertex, value plane and hyperplane terms of a small-weight codeword.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::bounds::{bounds, two_hyperplane_limit, BoundsError};
use crate::classify::{
    canonical_vertex, center_flat, classify_plane, classify_space, complement_plane, greedy_subflat, is_apex, lift_flat,
    ClassifyError, TypeTag, Witness,
};
use crate::code::{linear_combination, CodeError, Codeword};
use crate::construct::{cone_codeword, ConstructError};
use crate::field::PrimeFieldElement;
use crate::geometry::{GeometryError, Hyperplane, ProjSpace, Subspace};

/// Everything known about an input the decomposer could not handle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureReport {
    pub weight: usize,
    pub spectrum: Vec<usize>,
    pub trace: Vec<String>,
}

impl fmt::Display for FailureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "weight {}, spectrum {:?}", self.weight, self.spectrum)?;
        for t in &self.trace {
            write!(f, "; {t}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecomposeError {
    #[error("input is not a codeword")]
    NotACodeword,
    #[error("weight {weight} exceeds the limit {limit}")]
    WeightOutOfRange { weight: usize, limit: usize },
    #[error("no representation by at most two hyperplanes: {0}")]
    NoRepresentation(String),
    #[error("decomposition failed: {0}")]
    DecompositionFailed(Box<FailureReport>),
    #[error("{0}")]
    DimensionError(&'static str),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// `c = sum_{P in plane} c(P) <vertex, P>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub vertex: Subspace,
    pub plane: Subspace,
    /// Plane points (ambient index) with their values, in the plane's internal order.
    pub values: Vec<(usize, PrimeFieldElement)>,
    /// Hyperplanes through the vertex with their coefficients.
    pub terms: Vec<(PrimeFieldElement, Hyperplane)>,
    pub base_type: TypeTag,
}

impl Decomposition {
    /// The restriction to the plane, in its internal coordinates.
    pub fn base(&self, space: &ProjSpace) -> Result<Codeword, CodeError> {
        let plane = ProjSpace::new(2, space.field().clone());
        Codeword::from_values(&plane, self.values.iter().map(|v| v.1).collect())
    }

    pub fn reconstruct(&self, space: &ProjSpace) -> Result<Codeword, ConstructError> {
        cone_codeword(space, &self.vertex, &self.plane, &self.base(space)?)
    }
}

/// Rebuilds `d` both as a cone and from its terms and compares with `c`.
pub fn verify_decomposition(c: &Codeword, d: &Decomposition) -> bool {
    let s = c.space();
    if d.vertex.ambient_dim() != s.n() || d.plane.ambient_dim() != s.n() || d.values.len() != s.theta(2) {
        return false;
    }
    if s.flat_points(&d.plane).iter().zip(&d.values).any(|(p, v)| *p != v.0) {
        return false;
    }
    let Ok(cone) = d.reconstruct(s) else { return false };
    if cone != *c {
        return false;
    }
    let vertex_pts = s.flat_points(&d.vertex);
    if d.terms.iter().any(|(_, h)| vertex_pts.iter().any(|&p| !s.on_hyperplane(h, p))) {
        return false;
    }
    linear_combination(s, &d.terms) == *c
}

/// First line in canonical order meeting the support in exactly three points.
pub fn find_3_secant(c: &Codeword) -> Option<Subspace> {
    let s = c.space();
    let v = c.values();
    s.find_line(|pts| pts.iter().filter(|&&p| !v[p].is_zero()).count() == 3)
        .map(|(l, _)| s.line_flat(l))
}

// Span of the point and the lines through it carrying at least q support points.
fn long_span(c: &Codeword, p0: usize) -> (Subspace, Vec<Vec<usize>>) {
    let s = c.space();
    let q = s.q();
    let long: Vec<Vec<usize>> = s
        .lines_through_point(p0)
        .into_iter()
        .filter(|l| l.iter().filter(|&&p| !c.get(p).is_zero()).count() + 1 >= q)
        .collect();
    let mut span = s.point_flat(p0);
    for l in &long {
        if !s.contains_point(&span, l[0]) {
            span = s.extend(&span, l[0]);
        }
    }
    (span, long)
}

fn hyperplane_through(c: &Codeword, p0: usize) -> Option<Subspace> {
    let s = c.space();
    let hyper = s.n() as isize - 1;
    let (span, long) = long_span(c, p0);
    if span.dim() == hyper {
        return Some(span);
    }
    // p0 on both hyperplanes: step to a point lying on only one of them
    let v0 = c.get(p0);
    let p1 = long.iter().flatten().copied().find(|&p| !c.get(p).is_zero() && c.get(p) != v0)?;
    let (span, _) = long_span(c, p1);
    (span.dim() == hyper).then_some(span)
}

fn brute_force_two(c: &Codeword) -> Option<Vec<(PrimeFieldElement, Hyperplane)>> {
    let s = c.space();
    let p = s.field().p() as u16;
    let nh = s.num_points();
    let coeffs: Vec<PrimeFieldElement> = (1..p).map(PrimeFieldElement).collect();
    for i in 0..nh {
        for &a in &coeffs {
            let t = [(a, s.hyperplane_by_index(i))];
            if linear_combination(s, &t) == *c {
                return Some(t.to_vec());
            }
        }
    }
    for i in 0..nh {
        for j in i + 1..nh {
            for &a in &coeffs {
                for &b in &coeffs {
                    let t = [(a, s.hyperplane_by_index(i)), (b, s.hyperplane_by_index(j))];
                    if linear_combination(s, &t) == *c {
                        return Some(t.to_vec());
                    }
                }
            }
        }
    }
    None
}

/// At most two `(coefficient, hyperplane)` terms summing to `c`, for
/// `wt(c) <= min((3q-6) theta_{n-2} + 2, floor(B_{n,q}))`.
pub fn decompose_two_hyperplanes(c: &Codeword) -> Result<Vec<(PrimeFieldElement, Hyperplane)>, DecomposeError> {
    let s = c.space();
    let (n, q) = (s.n(), s.q() as u64);
    let table = bounds(n, q)?;
    let lim = two_hyperplane_limit(n, q);
    let limit = table.floor_b_usize().min(usize::try_from(lim).unwrap_or(usize::MAX));
    let weight = c.weight();
    if weight > limit {
        return Err(DecomposeError::WeightOutOfRange { weight, limit });
    }
    decompose_two_hyperplanes_unchecked(c)
}

/// Same search without the weight hypothesis; fails when no such terms exist.
pub fn decompose_two_hyperplanes_unchecked(c: &Codeword) -> Result<Vec<(PrimeFieldElement, Hyperplane)>, DecomposeError> {
    let s = c.space();
    let sup = c.support();
    if sup.is_empty() {
        return Ok(Vec::new());
    }
    if !c.is_codeword() {
        return Err(DecomposeError::NotACodeword);
    }
    if s.q() == 2 {
        return brute_force_two(c).ok_or_else(|| DecomposeError::NoRepresentation(String::from("exhaustive search")));
    }
    let fail = |why: &str| DecomposeError::NoRepresentation(String::from(why));
    let h1 = hyperplane_through(c, sup[0]).ok_or_else(|| fail("no hyperplane through the first support point"))?;
    let hp1 = s.flat_to_hyperplane(&h1)?;
    let mut terms = match sup.iter().copied().find(|&p| !s.contains_point(&h1, p)) {
        None => {
            let a = c.get(s.flat_points(&h1).into_iter().find(|&p| !c.get(p).is_zero()).ok_or_else(|| fail("empty"))?);
            alloc::vec![(a, hp1)]
        }
        Some(p2) => {
            let h2 = hyperplane_through(c, p2).ok_or_else(|| fail("no second hyperplane"))?;
            let hp2 = s.flat_to_hyperplane(&h2)?;
            let own = s.flat_points(&h1).into_iter().find(|&p| !s.contains_point(&h2, p)).ok_or_else(|| fail("equal hyperplanes"))?;
            alloc::vec![(c.get(own), hp1), (c.get(p2), hp2)]
        }
    };
    terms.retain(|t| !t.0.is_zero());
    terms.sort_by_key(|t| s.hyperplane_index(&t.1));
    if linear_combination(s, &terms) != *c {
        return Err(fail("candidate hyperplanes do not reproduce the word"));
    }
    Ok(terms)
}

/// The decomposition with a given vertex, which must be a vertex of `c`.
pub fn decomposition_with_vertex(c: &Codeword, vertex: &Subspace) -> Result<Decomposition, DecomposeError> {
    let s = c.space();
    if vertex.dim() != s.n() as isize - 3 {
        return Err(DecomposeError::DimensionError("vertex must have dimension n - 3"));
    }
    let plane = complement_plane(s, vertex);
    let base = c.restrict(&plane)?;
    let bt = classify_plane(&base)?;
    let bs = base.space();
    let lines: Vec<(PrimeFieldElement, Subspace)> = match &bt.witness {
        Some(Witness::Lines(ls)) => ls.clone(),
        _ => base
            .hyperplane_representation()
            .ok_or(DecomposeError::NotACodeword)?
            .into_iter()
            .map(|(a, l)| (a, bs.hyperplane_to_flat(&bs.hyperplane_by_index(l))))
            .collect(),
    };
    let mut terms = Vec::with_capacity(lines.len());
    for (a, l) in lines {
        let up = lift_flat(s, &plane, &l);
        terms.push((a, s.flat_to_hyperplane(&s.span(&[vertex, &up]))?));
    }
    let values = s.flat_points(&plane).into_iter().zip(base.values().iter().copied()).collect();
    let d = Decomposition { vertex: vertex.clone(), plane, values, terms, base_type: bt.tag };
    if !verify_decomposition(c, &d) {
        return Err(failure(c, alloc::vec![format!("vertex {:?} does not carry a cone", vertex.rows())]));
    }
    Ok(d)
}

fn failure(c: &Codeword, trace: Vec<String>) -> DecomposeError {
    DecomposeError::DecompositionFailed(Box::new(FailureReport {
        weight: c.weight(),
        spectrum: c.secant_spectrum().counts,
        trace,
    }))
}

fn all_apexes(c: &Codeword, f: &Subspace) -> bool {
    let sup = c.support();
    c.space().flat_points(f).into_iter().all(|x| is_apex(c, &sup, x))
}

// A vertex through a hyperplane of star type containing a 3-secant.
fn vertex_from_star(c: &Codeword, t: &Subspace, trace: &mut Vec<String>) -> Result<Option<Subspace>, DecomposeError> {
    let s = c.space();
    for h in s.flats_through(t, s.n() as isize - 1, None)? {
        let st = classify_space(c, &h)?;
        if st.tag != TypeTag::Tstar {
            continue;
        }
        let (kh, lines) = match &st.witness {
            Some(Witness::Lines(ls)) => (Subspace::empty(s.n()), ls.clone()),
            Some(Witness::Cone { vertex, base, .. }) => match &base.witness {
                Some(Witness::Lines(ls)) => (vertex.clone(), ls.clone()),
                _ => continue,
            },
            _ => continue,
        };
        let centre = s.meet(&lines[0].1, &lines[1].1);
        let k0 = s.span(&[&kh, &centre]);
        if k0.dim() == s.n() as isize - 3 && all_apexes(c, &k0) {
            trace.push(format!("star hyperplane {:?}", h.rows()));
            return Ok(Some(k0));
        }
    }
    Ok(None)
}

/// Vertex, value plane and hyperplane terms of a codeword of weight at most
/// `floor(B_{n,q})`; for `n = 2` the vertex is empty.
pub fn decompose(c: &Codeword) -> Result<Decomposition, DecomposeError> {
    let s = c.space();
    let n = s.n();
    let q = s.q() as u64;
    if n < 2 {
        return Err(DecomposeError::DimensionError("need n >= 2"));
    }
    let weight = c.weight();
    let table = bounds(n, q)?;
    if !table.within_b(weight) {
        return Err(DecomposeError::WeightOutOfRange { weight, limit: table.floor_b_usize() });
    }
    if !c.is_codeword() {
        return Err(DecomposeError::NotACodeword);
    }
    if n == 2 {
        let d = decomposition_with_vertex(c, &Subspace::empty(2))?;
        if d.base_type == TypeTag::Other {
            return Err(failure(c, alloc::vec![String::from("plane word of no listed type")]));
        }
        return Ok(d);
    }
    let mut trace = Vec::new();
    let target = n as isize - 3;
    let mut kappa0 = None;
    if weight == 0 {
        let all: Vec<usize> = (0..s.num_points()).collect();
        kappa0 = greedy_subflat(s, &all, target);
    }
    if kappa0.is_none() && two_hyperplane_limit(n, q) >= weight.into() {
        match decompose_two_hyperplanes_unchecked(c) {
            Ok(terms) => {
                let mut m = s.whole();
                for (_, h) in &terms {
                    m = s.meet(&m, &s.hyperplane_to_flat(h));
                }
                let mut pts = s.flat_points(&m);
                pts.sort_unstable();
                kappa0 = greedy_subflat(s, &pts, target);
                trace.push(format!("{} hyperplane terms", terms.len()));
            }
            Err(e) => trace.push(format!("two-hyperplane search: {e}")),
        }
    }
    if kappa0.is_none() {
        match find_3_secant(c) {
            Some(t) => {
                trace.push(format!("3-secant {:?}", t.rows()));
                kappa0 = vertex_from_star(c, &t, &mut trace)?;
            }
            None => trace.push(String::from("no 3-secant")),
        }
    }
    if kappa0.is_none() {
        let z = center_flat(c);
        trace.push(format!("apex flat of dimension {}", z.dim()));
        let mut pts = s.flat_points(&z);
        pts.sort_unstable();
        kappa0 = greedy_subflat(s, &pts, target);
    }
    let Some(k0) = kappa0 else {
        return Err(failure(c, trace));
    };
    let pi0 = complement_plane(s, &k0);
    let vertex = canonical_vertex(c, &k0, &pi0);
    decomposition_with_vertex(c, &vertex).map_err(|e| match e {
        DecomposeError::DecompositionFailed(mut r) => {
            trace.append(&mut r.trace);
            r.trace = trace;
            DecomposeError::DecompositionFailed(r)
        }
        e => e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::incidence_vector;
    use crate::construct::{bagchi_codeword, random_small_weight};
    use crate::geometry::Collineation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pf(v: u16) -> PrimeFieldElement {
        PrimeFieldElement(v)
    }

    #[test]
    fn three_secants() {
        let s = ProjSpace::of(3, 7).unwrap();
        assert!(find_3_secant(&incidence_vector(&s, &s.hyperplane_by_index(4))).is_none());
        assert!(find_3_secant(&Codeword::zero(&s)).is_none());
        let plane = ProjSpace::new(2, s.field().clone());
        let pencil = plane.hyperplane_points(&plane.hyperplane_by_index(0));
        let star = linear_combination(&plane, &[(pf(1), plane.hyperplane_by_index(pencil[0])), (pf(2), plane.hyperplane_by_index(pencil[1])), (pf(3), plane.hyperplane_by_index(pencil[2]))]);
        let kappa = s.point_flat(3);
        let pi = complement_plane(&s, &kappa);
        let c = cone_codeword(&s, &kappa, &pi, &star).unwrap();
        let t = find_3_secant(&c).unwrap();
        let on = s.flat_points(&t).into_iter().filter(|&p| !c.get(p).is_zero()).count();
        assert_eq!(on, 3);
        assert!(c.secant_spectrum().counts[3] > 0);
    }

    #[test]
    fn two_hyperplane_examples() {
        for q in [2u32, 3, 4, 7] {
            let s = ProjSpace::of(3, q).unwrap();
            let run = |c: &Codeword| {
                // below q = 4 the differences exceed the hypothesis
                if q <= 3 {
                    decompose_two_hyperplanes_unchecked(c)
                } else {
                    decompose_two_hyperplanes(c)
                }
            };
            let p = s.field().p() as u16;
            let h1 = s.hyperplane_by_index(5);
            let h2 = s.hyperplane_by_index(s.num_points() - 2);
            let a = pf(p - 1);
            assert_eq!(run(&incidence_vector(&s, &h1).scale(a)).unwrap(), vec![(a, h1.clone())]);
            let diff = linear_combination(&s, &[(pf(1), h1.clone()), (pf(p - 1), h2.clone())]);
            let mut got = run(&diff).unwrap();
            assert_eq!(linear_combination(&s, &got), diff);
            if q > 2 {
                // binary words have several two-term forms
                got.sort_by_key(|t| t.0);
                let mut want = vec![(pf(1), h1.clone()), (pf(p - 1), h2.clone())];
                want.sort_by_key(|t| t.0);
                assert_eq!(got, want, "q={q}");
            }
        }
    }

    #[test]
    fn sum_of_two_hyperplanes_with_points_on_both() {
        let s = ProjSpace::of(3, 5).unwrap();
        let h1 = s.hyperplane_by_index(0);
        let h2 = s.hyperplane_by_index(1);
        let c = linear_combination(&s, &[(pf(2), h1), (pf(4), h2)]);
        let t = decompose_two_hyperplanes_unchecked(&c).unwrap();
        assert_eq!(linear_combination(&s, &t), c);
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn weight_13_word_in_pg33() {
        let s = ProjSpace::of(3, 3).unwrap();
        let h = s.hyperplane_by_index(20);
        let c = incidence_vector(&s, &h);
        assert_eq!(c.weight(), 13);
        assert_eq!(decompose_two_hyperplanes(&c).unwrap(), vec![(pf(1), h)]);
    }

    #[test]
    fn rejects_heavy_and_non_codewords() {
        let bag = bagchi_codeword(7).unwrap();
        let s3 = ProjSpace::of(3, 7).unwrap();
        let kappa = s3.point_flat(0);
        let pi = complement_plane(&s3, &kappa);
        let c = cone_codeword(&s3, &kappa, &pi, &bag).unwrap();
        assert_eq!(c.weight(), 126);
        assert_eq!(decompose(&c), Err(DecomposeError::WeightOutOfRange { weight: 126, limit: 98 }));
        let pt = Codeword::indicator(&s3, &[4], pf(1));
        assert_eq!(decompose(&pt), Err(DecomposeError::NotACodeword));
    }

    #[test]
    fn three_hyperplanes_meeting_in_a_point() {
        let s = ProjSpace::of(3, 37).unwrap();
        let kappa = s.point_flat(1000);
        let planes: Vec<Subspace> = s.flats_through(&kappa, 2, None).unwrap().collect();
        let mut pick: Vec<Subspace> = vec![planes[0].clone()];
        for f in &planes {
            let m = pick.iter().fold(s.whole(), |m, g| s.meet(&m, g));
            let m = s.meet(&m, f);
            if pick.len() < 3 && !pick.contains(f) && (pick.len() < 2 || m.dim() == 0) {
                pick.push(f.clone());
            }
        }
        let hs: Vec<Hyperplane> = pick.iter().map(|f| s.flat_to_hyperplane(f).unwrap()).collect();
        let c = linear_combination(&s, &[(pf(1), hs[0].clone()), (pf(3), hs[1].clone()), (pf(7), hs[2].clone())]);
        assert!(bounds(3, 37).unwrap().within_b(c.weight()));
        let d = decompose(&c).unwrap();
        assert_eq!(d.vertex, kappa);
        assert!(verify_decomposition(&c, &d));
        assert_eq!(d.base_type, TypeTag::Ttriangle);
    }

    #[test]
    fn verify_detects_mismatch() {
        let (c1, r1) = random_small_weight(3, 7, 1).unwrap();
        let (c2, r2) = random_small_weight(3, 7, 2).unwrap();
        assert!(verify_decomposition(&c1, &r1.decomposition));
        if c1 != c2 {
            assert!(!verify_decomposition(&c1, &r2.decomposition));
        }
        let s = c1.space();
        let z = Codeword::zero(s);
        let d = decompose(&z).unwrap();
        assert!(d.terms.is_empty());
        assert!(verify_decomposition(&z, &d));
    }

    #[test]
    fn round_trip_against_recipes() {
        for (n, q) in [(3usize, 7u32), (3, 8), (3, 9), (4, 7)] {
            for seed in 0..10 {
                let (c, r) = random_small_weight(n, q, seed).unwrap();
                let d = decompose(&c).unwrap();
                assert!(verify_decomposition(&c, &d));
                assert_eq!(d.vertex, r.decomposition.vertex, "n={n} q={q} seed={seed}");
            }
        }
    }

    #[test]
    fn star_route_without_two_hyperplanes() {
        // a Tstar cone above the two-hyperplane range
        let s = ProjSpace::of(3, 37).unwrap();
        let plane = ProjSpace::new(2, s.field().clone());
        let pencil = plane.hyperplane_points(&plane.hyperplane_by_index(7));
        let star = linear_combination(&plane, &[(pf(1), plane.hyperplane_by_index(pencil[0])), (pf(2), plane.hyperplane_by_index(pencil[3])), (pf(5), plane.hyperplane_by_index(pencil[9]))]);
        let kappa = s.point_flat(4000);
        let pi = complement_plane(&s, &kappa);
        let c = cone_codeword(&s, &kappa, &pi, &star).unwrap();
        assert!(c.weight() > usize::try_from(two_hyperplane_limit(3, 37)).unwrap());
        assert!(bounds(3, 37).unwrap().within_b(c.weight()));
        let d = decompose(&c).unwrap();
        // the vertex of a star cone can slide along the line through the centre
        assert_eq!(d.vertex, canonical_vertex(&c, &kappa, &pi));
        assert!(s.contains_flat(&center_flat(&c), &kappa));
        assert_eq!(center_flat(&c).dim(), 1);
        assert_eq!(d.base_type, TypeTag::Tstar);
        assert!(verify_decomposition(&c, &d));
    }

    #[test]
    fn never_returns_invalid_on_bad_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = ProjSpace::of(3, 5).unwrap();
        for _ in 0..30 {
            let k = rng.random_range(1..6);
            let terms: Vec<_> = (0..k).map(|_| (pf(rng.random_range(1..5)), s.hyperplane_by_index(rng.random_range(0..s.num_points())))).collect();
            let c = linear_combination(&s, &terms);
            if let Ok(d) = decompose(&c) {
                assert!(verify_decomposition(&c, &d));
            }
        }
    }

    #[test]
    fn decomposition_is_equivariant_on_apex_flats() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (c, _) = random_small_weight(3, 7, 3).unwrap();
        let s = c.space();
        let d = decompose(&c).unwrap();
        for _ in 0..5 {
            let g = Collineation::random(s, &mut rng);
            let cg = c.apply_collineation(&g);
            let dg = decompose(&cg).unwrap();
            assert!(verify_decomposition(&cg, &dg));
            assert!(s.contains_flat(&center_flat(&cg), &g.apply_flat(s, &d.vertex)));
            assert_eq!(center_flat(&cg), g.apply_flat(s, &center_flat(&c)));
        }
    }

    #[test]
    fn plane_words_decompose_with_empty_vertex() {
        let s = ProjSpace::of(2, 7).unwrap();
        let c = linear_combination(&s, &[(pf(3), s.hyperplane_by_index(2)), (pf(4), s.hyperplane_by_index(9))]);
        let d = decompose(&c).unwrap();
        assert!(d.vertex.is_empty());
        assert!(verify_decomposition(&c, &d));
    }
}
