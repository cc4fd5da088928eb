//! Plane and k-space types of a codeword.
//!
//! A point `X` is an *apex* of `c` when `c` is constant on `l \ {X}` for
//! every line `l` through `X`. A k-space word is a cone exactly over its
//! apexes, so vertex candidates are read off the apex set rather than
//! searched among all `(k-3)`-flats.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::code::{CodeError, Codeword, SecantSpectrum};
use crate::construct::{alpha_sum, cone_codeword, ConstructError};
use crate::field::PrimeFieldElement;
use crate::geometry::{ProjSpace, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("expected a codeword of PG(2, q), got PG({0}, q)")]
    NotAPlaneCodeword(usize),
    #[error("{0}")]
    DimensionError(&'static str),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeTag {
    T0,
    Tq1,
    T2q,
    T2q1,
    Todd,
    Ttriangle,
    Tstar,
    Other,
}

impl TypeTag {
    pub const ALL: [TypeTag; 8] = [
        TypeTag::T0,
        TypeTag::Tq1,
        TypeTag::T2q,
        TypeTag::T2q1,
        TypeTag::Todd,
        TypeTag::Ttriangle,
        TypeTag::Tstar,
        TypeTag::Other,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TypeTag::T0 => "T0",
            TypeTag::Tq1 => "Tq1",
            TypeTag::T2q => "T2q",
            TypeTag::T2q1 => "T2q1",
            TypeTag::Todd => "Todd",
            TypeTag::Ttriangle => "Ttriangle",
            TypeTag::Tstar => "Tstar",
            TypeTag::Other => "Other",
        }
    }

    pub fn parse(s: &str) -> Option<TypeTag> {
        TypeTag::ALL.into_iter().find(|t| t.name().eq_ignore_ascii_case(s))
    }

    /// Whether the tag belongs to the typed family (everything but `Other`).
    pub fn is_typed(self) -> bool {
        self != TypeTag::Other
    }

    /// Combinations of at most two lines.
    pub fn is_two_line(self) -> bool {
        matches!(self, TypeTag::T0 | TypeTag::Tq1 | TypeTag::T2q | TypeTag::T2q1)
    }
}

impl core::fmt::Display for TypeTag {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `sum a_i l_i` over at most three lines.
    Lines(Vec<(PrimeFieldElement, Subspace)>),
    /// Common point of three lines covering the support.
    Odd { center: Subspace, lines: [Subspace; 3] },
    /// Vertex, value plane and the type of the plane.
    Cone { vertex: Subspace, plane: Subspace, base: Box<SpaceType> },
}

impl Witness {
    /// Re-expresses flats given in the internal coordinates of `f`.
    pub fn lift(&self, space: &ProjSpace, f: &Subspace) -> Witness {
        let up = |s: &Subspace| lift_flat(space, f, s);
        match self {
            Witness::Lines(ls) => Witness::Lines(ls.iter().map(|(a, l)| (*a, up(l))).collect()),
            Witness::Odd { center, lines } => Witness::Odd {
                center: up(center),
                lines: [up(&lines[0]), up(&lines[1]), up(&lines[2])],
            },
            Witness::Cone { vertex, plane, base } => Witness::Cone {
                vertex: up(vertex),
                plane: up(plane),
                base: Box::new(base.lift(space, f)),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceType {
    pub tag: TypeTag,
    pub weight: usize,
    pub witness: Option<Witness>,
    /// A second structure matching the same word, when one exists.
    pub alternative: Option<Witness>,
}

impl SpaceType {
    fn other(weight: usize) -> Self {
        SpaceType { tag: TypeTag::Other, weight, witness: None, alternative: None }
    }

    pub fn lift(&self, space: &ProjSpace, f: &Subspace) -> SpaceType {
        SpaceType {
            tag: self.tag,
            weight: self.weight,
            witness: self.witness.as_ref().map(|w| w.lift(space, f)),
            alternative: self.alternative.as_ref().map(|w| w.lift(space, f)),
        }
    }

    /// Vertex and plane of a cone witness.
    pub fn cone(&self) -> Option<(&Subspace, &Subspace, &SpaceType)> {
        match &self.witness {
            Some(Witness::Cone { vertex, plane, base }) => Some((vertex, plane, base)),
            _ => None,
        }
    }
}

/// Image in `space` of a flat given in the internal coordinates of `f`.
pub fn lift_flat(space: &ProjSpace, f: &Subspace, s: &Subspace) -> Subspace {
    if s.is_empty() {
        return Subspace::empty(space.n());
    }
    let rows: Vec<_> = s.rows().iter().map(|r| space.embed_vec(f, r)).collect();
    space.flat_from_rows(&rows).expect("independent rows stay independent")
}

struct LongSecant {
    line: usize,
    points: Vec<usize>,
    on_support: usize,
}

fn long_secants(c: &Codeword) -> Vec<LongSecant> {
    let s = c.space();
    let q = s.q();
    let sup = c.support();
    let mut out = Vec::new();
    for l in 0..s.num_points() {
        let h = s.hyperplane_by_index(l);
        let k = sup.iter().filter(|&&p| s.on_hyperplane(&h, p)).count();
        if k + 1 >= q {
            out.push(LongSecant { line: l, points: s.hyperplane_points(&h), on_support: k });
        }
    }
    out
}

fn k_subsets(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if f(&idx) {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else { return };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

// Lexicographically first representation by the fewest long secants.
fn line_representation(c: &Codeword, long: &[LongSecant]) -> Option<Vec<(PrimeFieldElement, usize)>> {
    let s = c.space();
    let fp = c.fp();
    let wt = c.weight();
    let q = s.q();
    for k in 1..=3usize {
        if wt > k * (q + 1) {
            continue;
        }
        let mut found = None;
        let mut buf = vec![PrimeFieldElement::ZERO; s.num_points()];
        k_subsets(long.len(), k, |sel| {
            let mut terms = Vec::with_capacity(k);
            for (i, &li) in sel.iter().enumerate() {
                let own = long[li]
                    .points
                    .iter()
                    .find(|&&p| sel.iter().enumerate().all(|(j, &lj)| j == i || !long[lj].points.contains(&p)));
                let a = c.get(*own.expect("a line has points off two others"));
                if a.is_zero() {
                    return false;
                }
                terms.push((a, li));
            }
            buf.iter_mut().for_each(|x| *x = PrimeFieldElement::ZERO);
            for &(a, li) in &terms {
                for &p in &long[li].points {
                    buf[p] = fp.add(buf[p], a);
                }
            }
            if buf == c.values() {
                found = Some(terms.iter().map(|&(a, li)| (a, long[li].line)).collect());
                return true;
            }
            false
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

fn odd_signature(c: &Codeword, long: &[LongSecant]) -> Option<Witness> {
    let s = c.space();
    let q = s.q();
    if s.field().h() != 1 || q == 2 {
        return None;
    }
    let wt = c.weight();
    if wt + 3 < 3 * q || wt > 3 * q - 2 {
        return None;
    }
    let mut centers: Vec<usize> = Vec::new();
    for i in 0..long.len() {
        for j in i + 1..long.len() {
            let m = s.meet(&s.hyperplane_to_flat(&s.hyperplane_by_index(long[i].line)), &s.hyperplane_to_flat(&s.hyperplane_by_index(long[j].line)));
            centers.extend(s.flat_points(&m));
        }
    }
    centers.sort_unstable();
    centers.dedup();
    for center in centers {
        let through: Vec<&LongSecant> = long.iter().filter(|l| l.points.contains(&center)).collect();
        if through.len() != 3 {
            continue;
        }
        let on_center = usize::from(!c.get(center).is_zero());
        let mut ok = true;
        let mut covered = on_center;
        for l in &through {
            let mut vals: Vec<u16> = l.points.iter().filter(|&&p| p != center).map(|&p| c.get(p).0).filter(|&v| v != 0).collect();
            if vals.len() != q - 1 {
                ok = false;
                break;
            }
            vals.sort_unstable();
            vals.dedup();
            if vals.len() != q - 1 {
                ok = false;
                break;
            }
            covered += l.on_support - on_center;
        }
        if ok && covered == wt && c.is_codeword() {
            let flat = |l: &LongSecant| s.hyperplane_to_flat(&s.hyperplane_by_index(l.line));
            return Some(Witness::Odd {
                center: s.point_flat(center),
                lines: [flat(through[0]), flat(through[1]), flat(through[2])],
            });
        }
    }
    None
}

/// Type of a codeword of `PG(2, q)`; membership in the code is assumed.
pub fn classify_plane(c: &Codeword) -> Result<SpaceType, ClassifyError> {
    let s = c.space();
    if s.n() != 2 {
        return Err(ClassifyError::NotAPlaneCodeword(s.n()));
    }
    let q = s.q();
    let wt = c.weight();
    if wt == 0 {
        return Ok(SpaceType { tag: TypeTag::T0, weight: 0, witness: Some(Witness::Lines(Vec::new())), alternative: None });
    }
    if wt > 3 * q + 3 {
        return Ok(SpaceType::other(wt));
    }
    let long = long_secants(c);
    let odd = odd_signature(c, &long);
    let Some(terms) = line_representation(c, &long) else {
        return Ok(match odd {
            Some(w) => SpaceType { tag: TypeTag::Todd, weight: wt, witness: Some(w), alternative: None },
            None => SpaceType::other(wt),
        });
    };
    let flats: Vec<Subspace> = terms.iter().map(|&(_, l)| s.hyperplane_to_flat(&s.hyperplane_by_index(l))).collect();
    let fp = c.fp();
    let tag = match terms.len() {
        1 => TypeTag::Tq1,
        2 if fp.add(terms[0].0, terms[1].0).is_zero() => TypeTag::T2q,
        2 => TypeTag::T2q1,
        _ => {
            if s.meet(&s.meet(&flats[0], &flats[1]), &flats[2]).is_empty() {
                TypeTag::Ttriangle
            } else {
                TypeTag::Tstar
            }
        }
    };
    let witness = Witness::Lines(terms.iter().map(|t| t.0).zip(flats).collect());
    Ok(SpaceType { tag, weight: wt, witness: Some(witness), alternative: odd })
}

pub(crate) fn is_apex(c: &Codeword, support: &[usize], x: usize) -> bool {
    let s = c.space();
    let f = s.field();
    let xv = s.coords(x);
    let mut v = vec![f.zero(); xv.len()];
    for &p in support {
        if p == x {
            continue;
        }
        let val = c.get(p);
        let pv = s.coords(p);
        for t in f.elements().skip(1) {
            for (m, vm) in v.iter_mut().enumerate() {
                *vm = f.add(pv[m], f.mul(t, xv[m]));
            }
            if c.get(s.index_of(&v).expect("distinct points")) != val {
                return false;
            }
        }
    }
    true
}

/// All apexes of `c`, ascending. The apexes form a subspace, so points in
/// the span of those already found are not tested again.
pub fn apex_points(c: &Codeword) -> Vec<usize> {
    let s = c.space();
    let sup = c.support();
    let n = s.num_points();
    if sup.is_empty() {
        return (0..n).collect();
    }
    let mut span = Subspace::empty(s.n());
    let mut in_span = vec![false; n];
    let mut out = Vec::new();
    for x in 0..n {
        if in_span[x] {
            out.push(x);
        } else if is_apex(c, &sup, x) {
            out.push(x);
            span = s.extend(&span, x);
            for p in s.flat_points(&span) {
                in_span[p] = true;
            }
        }
    }
    out
}

/// The flat spanned by the apexes.
pub fn center_flat(c: &Codeword) -> Subspace {
    let s = c.space();
    let mut z = Subspace::empty(s.n());
    for p in apex_points(c) {
        if !s.contains_point(&z, p) {
            z = s.extend(&z, p);
        }
    }
    z
}

/// Flat of dimension `d` spanned greedily by the lowest-index points given.
pub fn greedy_subflat(space: &ProjSpace, points: &[usize], d: isize) -> Option<Subspace> {
    let mut cur = Subspace::empty(space.n());
    for &p in points {
        if cur.dim() >= d {
            break;
        }
        if !space.contains_point(&cur, p) {
            cur = space.extend(&cur, p);
        }
    }
    (cur.dim() == d).then_some(cur)
}

/// Canonical `(n-3)`-vertex of a cone known to have vertex `kappa` over `pi`:
/// the greedy lowest-index subflat of the full apex flat.
pub fn canonical_vertex(c: &Codeword, kappa: &Subspace, pi: &Subspace) -> Subspace {
    let s = c.space();
    let base = c.restrict(pi).expect("plane");
    let sigma = alpha_sum(&base);
    let bs = base.space();
    let mut z = kappa.clone();
    for x in apex_points(&base) {
        if base.get(x) != sigma {
            continue;
        }
        let p = s.embed_point(pi, bs.coords(x));
        if !s.contains_point(&z, p) {
            z = s.extend(&z, p);
        }
    }
    let mut pts = s.flat_points(&z);
    pts.sort_unstable();
    greedy_subflat(s, &pts, s.n() as isize - 3).expect("vertex lies in the apex flat")
}

/// Lowest-index plane completing `vertex` to the whole space.
pub fn complement_plane(space: &ProjSpace, vertex: &Subspace) -> Subspace {
    let pts = space.complement_points(vertex, space.n() - vertex.rows().len() + 1);
    space.span_points(&pts)
}

fn classify_local(c: &Codeword) -> Result<SpaceType, ClassifyError> {
    let s = c.space();
    let k = s.n();
    if k == 2 {
        return classify_plane(c);
    }
    let wt = c.weight();
    let apex = apex_points(c);
    let Some(vertex) = greedy_subflat(s, &apex, k as isize - 3) else {
        return Ok(SpaceType::other(wt));
    };
    let plane = complement_plane(s, &vertex);
    let base = c.restrict(&plane)?;
    let bt = classify_plane(&base)?;
    if !bt.tag.is_typed() || cone_codeword(s, &vertex, &plane, &base)? != *c {
        return Ok(SpaceType::other(wt));
    }
    let base = bt.lift(s, &plane);
    Ok(SpaceType {
        tag: bt.tag,
        weight: wt,
        witness: Some(Witness::Cone { vertex, plane, base: Box::new(base) }),
        alternative: None,
    })
}

/// Type of `c` restricted to the flat `f` (dimension at least 2); the
/// witness is expressed in the coordinates of `c`'s space.
pub fn classify_space(c: &Codeword, f: &Subspace) -> Result<SpaceType, ClassifyError> {
    let s = c.space();
    if f.ambient_dim() != s.n() {
        return Err(ClassifyError::DimensionError("flat lives in another space"));
    }
    if f.dim() < 2 {
        return Err(ClassifyError::DimensionError("need a flat of dimension at least 2"));
    }
    if f.dim() == s.n() as isize {
        let t = classify_local(c)?;
        return Ok(t.lift(s, &s.whole()));
    }
    Ok(classify_local(&c.restrict(f)?)?.lift(s, f))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortLongReport {
    pub spectrum: SecantSpectrum,
    /// Secant sizes found in `[4, q - 2]`.
    pub short_long_violations: Vec<usize>,
    /// Secant sizes found in `[3, q - 1]`.
    pub strict_violations: Vec<usize>,
}

impl ShortLongReport {
    pub fn short_long(&self) -> bool {
        self.short_long_violations.is_empty()
    }

    pub fn strict(&self) -> bool {
        self.strict_violations.is_empty()
    }
}

pub fn short_long_check(c: &Codeword) -> ShortLongReport {
    let spectrum = c.secant_spectrum();
    let q = c.space().q();
    ShortLongReport {
        short_long_violations: spectrum.present_in(4, q.saturating_sub(2)),
        strict_violations: spectrum.present_in(3, q - 1),
        spectrum,
    }
}
