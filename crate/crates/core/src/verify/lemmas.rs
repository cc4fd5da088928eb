use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use super::blocking::{check_with_secants, BlockingOutcome};
use super::{timed, VerificationReport, VerifyError};
use crate::bounds::{bounds, two_hyperplane_limit};
use crate::classify::{classify_space, short_long_check, SpaceType, TypeTag};
use crate::code::Codeword;
use crate::geometry::Subspace;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LemmaOptions {
    /// Refuse codewords heavier than `floor(B_{n,q})`.
    pub enforce_weight_bound: bool,
    /// How many 3-secants to examine.
    pub secants: usize,
    /// How many hyperplanes through each 3-secant get the pencil check.
    pub hyperplanes: usize,
}

impl Default for LemmaOptions {
    fn default() -> Self {
        LemmaOptions { enforce_weight_bound: true, secants: 2, hyperplanes: 2 }
    }
}

pub fn lemma_suite(c: &Codeword) -> Result<Vec<VerificationReport>, VerifyError> {
    lemma_suite_with(c, &LemmaOptions::default())
}

struct Ctx<'a> {
    c: &'a Codeword,
    weight: usize,
    floor_b: usize,
    two_limit: usize,
    secants: Vec<usize>,
}

impl Ctx<'_> {
    fn report(&self, id: &str) -> VerificationReport {
        let s = self.c.space();
        VerificationReport::new(id).with_param("n", s.n()).with_param("q", s.q()).with_param("weight", self.weight)
    }

    fn secant_count(&self, pts: &[usize]) -> usize {
        pts.iter().filter(|&&p| !self.c.get(p).is_zero()).count()
    }

    fn first_line_with(&self, sizes: &[usize]) -> Option<Vec<usize>> {
        if sizes.iter().all(|&a| self.secants.get(a).map_or(true, |&k| k == 0)) {
            return None;
        }
        self.c.space().find_line(|pts| sizes.contains(&self.secant_count(pts))).map(|(_, pts)| pts)
    }

    // Up to `k` lines meeting the support in exactly three points.
    fn three_secants(&self, k: usize) -> Vec<Vec<usize>> {
        let mut found: Vec<Vec<usize>> = Vec::new();
        let k = k.min(self.secants.get(3).copied().unwrap_or(0));
        while found.len() < k {
            let hit = self.c.space().find_line(|pts| self.secant_count(pts) == 3 && !found.iter().any(|f| f == pts));
            match hit {
                Some((_, pts)) => found.push(pts),
                None => break,
            }
        }
        found
    }
}

fn describe(t: &SpaceType) -> String {
    format!("{} of weight {}", t.tag, t.weight)
}

/// Pencil of planes through the 3-secant `t` inside the typed flat `f`:
/// planes missing the vertex repeat the type of `f`, the others are `Tstar`.
fn pencil_check(c: &Codeword, f: &Subspace, ty: &SpaceType, t: &Subspace) -> Result<Option<String>, VerifyError> {
    let s = c.space();
    let Some((kappa, _, _)) = ty.cone() else {
        return Ok(None);
    };
    if !s.meet(t, kappa).is_empty() {
        return Ok(Some(format!("3-secant {:?} meets the vertex", s.flat_points(t))));
    }
    let fd = f.dim() as u32;
    let q = s.q();
    let (mut disjoint, mut meeting) = (0usize, 0usize);
    for sigma in s.flats_through(t, 2, Some(f))? {
        let tag = classify_space(c, &sigma)?.tag;
        let want = if s.meet(&sigma, kappa).is_empty() {
            disjoint += 1;
            ty.tag
        } else {
            meeting += 1;
            TypeTag::Tstar
        };
        if tag != want {
            return Ok(Some(format!("plane {:?} has type {tag}, expected {want}", s.flat_points(&sigma))));
        }
    }
    let want_meeting = s.theta(fd as i64 - 3);
    if disjoint != q.pow(fd - 2) || meeting != want_meeting {
        return Ok(Some(format!("pencil splits {disjoint} + {meeting}")));
    }
    Ok(None)
}

/// Runs the structural lemmas on one codeword of weight at most `B_{n,q}`.
pub fn lemma_suite_with(c: &Codeword, opts: &LemmaOptions) -> Result<Vec<VerificationReport>, VerifyError> {
    let s = c.space();
    let n = s.n();
    let q = s.q();
    let weight = c.weight();
    let table = bounds(n, q as u64)?;
    let floor_b = table.floor_b_usize();
    if opts.enforce_weight_bound && weight > floor_b {
        return Err(VerifyError::WeightOutOfRange { weight, limit: floor_b });
    }
    let two_limit = two_hyperplane_limit(n, q as u64).to_usize().unwrap_or(usize::MAX);
    let sl = short_long_check(c);
    let ctx = Ctx { c, weight, floor_b, two_limit, secants: sl.spectrum.counts.clone() };
    let over = weight > floor_b;
    let above = || format!("weight above floor(B) = {floor_b}");
    let mut out = Vec::new();

    // lines are short or long; strictly so for q <= 17 or below the
    // two-hyperplane limit
    let (mut r, rt) = timed(|| {
        let mut r = ctx.report("short-long-secants");
        if over {
            r.skip(above());
            return r;
        }
        let strict = q <= 17 || weight <= ctx.two_limit.min(ctx.floor_b);
        r.note("spectrum", format!("{:?}", sl.spectrum.counts));
        r.note("strict", strict);
        let bad = if strict { &sl.strict_violations } else { &sl.short_long_violations };
        if let Some(line) = (!bad.is_empty()).then(|| ctx.first_line_with(bad)).flatten() {
            r.falsify(format!("line {line:?} meets the support in {} points", ctx.secant_count(&line)));
        }
        r
    });
    r.runtime = rt;
    out.push(r);

    let secants = ctx.three_secants(opts.secants.max(1));

    let (mut r, rt) = timed(|| {
        let mut r = ctx.report("q-1-secant-implies-3-secant");
        if over {
            r.skip(above());
            return r;
        }
        match ctx.first_line_with(&[q - 1]) {
            None => r.skip("no (q-1)-secant"),
            Some(line) if secants.is_empty() => {
                r.falsify(format!("(q-1)-secant {line:?} without any 3-secant"));
            }
            Some(_) => r.note("three_secant", format!("{:?}", secants[0])),
        }
        r
    });
    r.runtime = rt;
    out.push(r);

    let (mut r, rt) = timed(|| {
        let mut r = ctx.report("3-secant-exists");
        let lo = (3 * q).saturating_sub(6) * s.theta(n as i64 - 2) + 3;
        r.note("range", format!("[{lo}, {}]", ctx.floor_b));
        if over {
            r.skip(above());
        } else if weight < lo {
            r.skip(format!("weight below {lo}"));
        } else if secants.is_empty() {
            r.falsify("no line meets the support in exactly three points");
        }
        r
    });
    r.runtime = rt;
    out.push(r);

    let whole = s.whole();
    let ty = classify_space(c, &whole)?;

    let (planes, rt) = timed(|| -> Result<VerificationReport, VerifyError> {
        let mut r = ctx.report("planes-through-3-secant-typed");
        if secants.is_empty() {
            r.skip("no 3-secant");
            return Ok(r);
        }
        let mut checked = 0usize;
        for pts in &secants {
            let t = s.span_points(&pts[..2]);
            for sigma in s.flats_through(&t, 2, None)? {
                let st = classify_space(c, &sigma)?;
                checked += 1;
                if !st.tag.is_typed() {
                    let w = format!("plane {:?} through 3-secant {pts:?} is {}", s.flat_points(&sigma), describe(&st));
                    if over {
                        r.skip(format!("{}; {w}", above()));
                    } else {
                        r.falsify(w);
                    }
                    return Ok(r);
                }
            }
        }
        r.note("planes", checked);
        Ok(r)
    });
    let mut planes = planes?;
    planes.runtime = rt;
    out.push(planes);

    let (pencil, rt) = timed(|| -> Result<VerificationReport, VerifyError> {
        let mut r = ctx.report("pencil-through-3-secant");
        if secants.is_empty() || n < 3 {
            r.skip(if n < 3 { "plane" } else { "no 3-secant" });
            return Ok(r);
        }
        if !ty.tag.is_typed() {
            r.skip("codeword is not typed");
            return Ok(r);
        }
        let mut flats = 0usize;
        for pts in &secants {
            let t = s.span_points(&pts[..2]);
            if let Some(w) = pencil_check(c, &whole, &ty, &t)? {
                r.falsify(w);
                return Ok(r);
            }
            flats += 1;
            if n >= 4 {
                for h in s.flats_through(&t, n as isize - 1, None)?.take(opts.hyperplanes) {
                    let hty = classify_space(c, &h)?;
                    if !hty.tag.is_typed() {
                        continue;
                    }
                    if let Some(w) = pencil_check(c, &h, &hty, &t)? {
                        r.falsify(format!("inside hyperplane {:?}: {w}", s.flat_to_hyperplane(&h)?));
                        return Ok(r);
                    }
                    flats += 1;
                }
            }
        }
        r.note("flats", flats);
        Ok(r)
    });
    let mut pencil = pencil?;
    pencil.runtime = rt;
    out.push(pencil);

    let (mut r, rt) = timed(|| {
        let mut r = ctx.report("blocking-lemma-on-support");
        let outcome = check_with_secants(s, &c.support(), Some(&ctx.secants));
        r.note("outcome", outcome.name());
        match outcome {
            BlockingOutcome::Falsified => r.falsify("support satisfies the line condition but neither conclusion"),
            BlockingOutcome::HypothesisViolated(_) => r.skip("line condition fails"),
            _ => {}
        }
        r
    });
    r.runtime = rt;
    out.push(r);

    let mut r = ctx.report("typed-codeword");
    r.note("type", ty.tag);
    if over {
        r.skip(above());
    } else if !ty.tag.is_typed() {
        r.falsify(format!("codeword of weight {weight} <= floor(B) = {} is not typed", ctx.floor_b));
    }
    out.push(r);

    Ok(out)
}
