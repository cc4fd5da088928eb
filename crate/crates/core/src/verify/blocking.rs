use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{timed, VerificationReport};
use crate::geometry::{Hyperplane, ProjSpace};

/// Why the hypothesis "every line meets `S` in at most 2 or at least `q`
/// points" (with `q >= 7`) does not hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Secant { line: Vec<usize>, meets: usize },
    FieldTooSmall(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockingOutcome {
    /// `|S| <= 2q^(n-1) + theta_{n-2}`.
    Small,
    /// Every point outside `S` lies on this hyperplane.
    ComplementInHyperplane(Hyperplane),
    HypothesisViolated(Violation),
    /// The hypothesis holds but neither conclusion does.
    Falsified,
}

impl BlockingOutcome {
    pub fn name(&self) -> &'static str {
        match self {
            BlockingOutcome::Small => "small",
            BlockingOutcome::ComplementInHyperplane(_) => "complement_in_hyperplane",
            BlockingOutcome::HypothesisViolated(_) => "hypothesis_violated",
            BlockingOutcome::Falsified => "falsified",
        }
    }
}

pub fn check_blocking_lemma(space: &ProjSpace, set: &[usize]) -> BlockingOutcome {
    check_with_secants(space, set, None)
}

/// As `check_blocking_lemma`; `secants[a]` counts the lines meeting `set` in
/// `a` points, when already known.
pub(crate) fn check_with_secants(space: &ProjSpace, set: &[usize], secants: Option<&[usize]>) -> BlockingOutcome {
    let q = space.q();
    let n = space.n();
    let mut member = vec![false; space.num_points()];
    for &p in set {
        member[p] = true;
    }
    if q < 7 {
        return BlockingOutcome::HypothesisViolated(Violation::FieldTooSmall(q));
    }
    let clean = secants.is_some_and(|k| k.iter().take(q).skip(3).all(|&x| x == 0));
    let hit = if clean {
        None
    } else {
        space.find_line(|pts| {
            let k = pts.iter().filter(|&&p| member[p]).count();
            k > 2 && k < q
        })
    };
    if let Some((_, line)) = hit {
        let meets = line.iter().filter(|&&p| member[p]).count();
        return BlockingOutcome::HypothesisViolated(Violation::Secant { line, meets });
    }
    let size = member.iter().filter(|&&m| m).count();
    if size <= 2 * q.pow(n as u32 - 1) + space.theta(n as i64 - 2) {
        return BlockingOutcome::Small;
    }
    let comp: Vec<usize> = (0..space.num_points()).filter(|&p| !member[p]).collect();
    let mut span = space.span_points(&comp);
    if span.dim() >= n as isize {
        return BlockingOutcome::Falsified;
    }
    let hyper = n as isize - 1;
    let extra = space.complement_points(&span, (hyper - span.dim()) as usize);
    for p in extra {
        span = space.extend(&span, p);
    }
    BlockingOutcome::ComplementInHyperplane(space.flat_to_hyperplane(&span).expect("span has codimension one"))
}

pub fn blocking_report(space: &ProjSpace, set: &[usize]) -> VerificationReport {
    let (outcome, runtime) = timed(|| check_blocking_lemma(space, set));
    let mut r = VerificationReport::new("blocking-lemma").with_param("n", space.n()).with_param("q", space.q());
    r.runtime = runtime;
    r.note("set_size", set.len());
    r.note("outcome", outcome.name());
    match outcome {
        BlockingOutcome::Small | BlockingOutcome::ComplementInHyperplane(_) => {}
        BlockingOutcome::HypothesisViolated(Violation::Secant { line, meets }) => {
            r.skip(format!("line {line:?} meets the set in {meets} points"));
        }
        BlockingOutcome::HypothesisViolated(Violation::FieldTooSmall(q)) => r.skip(format!("q = {q} < 7")),
        BlockingOutcome::Falsified => r.falsify(format!("point set {set:?}")),
    }
    r
}
