use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{timed, VerificationReport, VerifyError};
use crate::code::{hamada_dimension, linear_combination, CodeBasis, Codeword};
use crate::decompose::decompose_two_hyperplanes_unchecked;
use crate::field::PrimeFieldElement;
use crate::geometry::ProjSpace;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectrumConfig {
    /// Largest `p^dim` that will be enumerated.
    pub budget: u64,
    /// Witnesses are kept only up to this weight.
    pub max_weight: Option<usize>,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig { budget: DEFAULT_BUDGET, max_weight: None }
    }
}

type Terms = Vec<(PrimeFieldElement, usize)>;

/// Weight distribution of the whole code, with structural checks on the two
/// smallest nonzero weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    pub n: usize,
    pub q: usize,
    pub dimension: usize,
    pub words: u64,
    pub histogram: BTreeMap<usize, u64>,
    /// First word of each weight in walk order, as hyperplane terms.
    pub witnesses: BTreeMap<usize, Terms>,
    /// Words of weight `theta_{n-1}` that are a multiple of one hyperplane.
    pub hyperplane_words: u64,
    /// Words of weight `2q^(n-1)` of the form `a(H1 - H2)`.
    pub difference_words: u64,
    /// First word of weight `theta_{n-1}` or `2q^(n-1)` failing its check.
    pub counterexample: Option<(usize, Terms)>,
    pub runtime: Option<core::time::Duration>,
}

struct Ctx<'a> {
    space: &'a ProjSpace,
    p: u16,
    rows: Vec<Vec<usize>>,
    gens: Vec<usize>,
    low: usize,
    theta: usize,
    second: usize,
    max_weight: Option<usize>,
}

#[derive(Default)]
struct Partial {
    hist: BTreeMap<usize, u64>,
    witnesses: BTreeMap<usize, (u64, Terms)>,
    hyperplane_words: u64,
    difference_words: u64,
    bad: Option<(u64, usize, Terms)>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        for (w, k) in other.hist {
            *self.hist.entry(w).or_default() += k;
        }
        for (w, (m, t)) in other.witnesses {
            match self.witnesses.get(&w) {
                Some((m0, _)) if *m0 <= m => {}
                _ => {
                    self.witnesses.insert(w, (m, t));
                }
            }
        }
        self.hyperplane_words += other.hyperplane_words;
        self.difference_words += other.difference_words;
        self.bad = match (self.bad, other.bad) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }
}

impl Ctx<'_> {
    fn terms(&self, g: &[u16]) -> Terms {
        g.iter().zip(&self.gens).filter(|(&a, _)| a != 0).map(|(&a, &h)| (PrimeFieldElement(a), h)).collect()
    }

    fn is_hyperplane_multiple(&self, vals: &[u16]) -> bool {
        let sup: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] != 0).collect();
        let a = vals[sup[0]];
        sup.iter().all(|&i| vals[i] == a) && self.space.span_points(&sup).dim() == self.space.n() as isize - 1
    }

    fn is_difference(&self, vals: &[u16]) -> bool {
        let c = Codeword::from_values(self.space, vals.iter().map(|&v| PrimeFieldElement(v)).collect())
            .expect("walk stays in the space");
        match decompose_two_hyperplanes_unchecked(&c) {
            Ok(t) => t.len() == 2 && c.fp().add(t[0].0, t[1].0).is_zero() && linear_combination(self.space, &t) == c,
            Err(_) => false,
        }
    }

    fn record(&self, part: &mut Partial, weight: usize, m: u64, g: &[u16], vals: &[u16]) {
        *part.hist.entry(weight).or_default() += 1;
        if self.max_weight.map_or(true, |mw| weight <= mw) && !part.witnesses.contains_key(&weight) {
            part.witnesses.insert(weight, (m, self.terms(g)));
        }
        let ok = if weight == self.theta {
            let ok = self.is_hyperplane_multiple(vals);
            part.hyperplane_words += u64::from(ok);
            ok
        } else if weight == self.second {
            let ok = self.is_difference(vals);
            part.difference_words += u64::from(ok);
            ok
        } else {
            true
        };
        if !ok && part.bad.is_none() {
            part.bad = Some((m, weight, self.terms(g)));
        }
    }

    // Walks messages `b p^low .. (b+1) p^low` in Gray order. Digit `i` of the
    // Gray image of `m` is `m_i - m_{i+1}`, so stepping `m` bumps exactly the
    // digit where the carry stops.
    fn walk_block(&self, b: u64) -> Partial {
        let p = u64::from(self.p);
        let k = self.rows.len();
        let size = p.pow(self.low as u32);
        let m0 = b * size;
        let mut md = vec![0u16; k + 1];
        let mut x = m0;
        for d in md.iter_mut().take(k) {
            *d = (x % p) as u16;
            x /= p;
        }
        let mut g: Vec<u16> = (0..k).map(|i| (md[i] + self.p - md[i + 1]) % self.p).collect();
        let mut vals = vec![0u16; self.space.num_points()];
        for (i, &gi) in g.iter().enumerate() {
            for &pt in &self.rows[i] {
                vals[pt] = (vals[pt] + gi) % self.p;
            }
        }
        let mut weight = vals.iter().filter(|&&v| v != 0).count();
        let mut low = vec![0u16; self.low];
        let mut part = Partial::default();
        for j in 0..size {
            self.record(&mut part, weight, m0 + j, &g, &vals);
            if j + 1 == size {
                break;
            }
            let mut t = 0;
            while low[t] == self.p - 1 {
                low[t] = 0;
                t += 1;
            }
            low[t] += 1;
            g[t] = (g[t] + 1) % self.p;
            for &pt in &self.rows[t] {
                let old = vals[pt];
                let new = if old + 1 == self.p { 0 } else { old + 1 };
                vals[pt] = new;
                if old == 0 {
                    weight += 1;
                } else if new == 0 {
                    weight -= 1;
                }
            }
        }
        part
    }
}

/// Enumerates every codeword of `C_{n-1}(n,q)` by a Gray-code walk over the
/// message space of a hyperplane basis.
pub fn exhaustive_spectrum(n: usize, q: u32, config: &SpectrumConfig) -> Result<Spectrum, VerifyError> {
    let space = ProjSpace::of(n, q)?;
    let (walked, runtime) = timed(|| -> Result<(Partial, u64), VerifyError> {
        let p = space.field().p();
        let dim = hamada_dimension(n, p, space.field().h());
        let words = (0..dim).try_fold(1u128, |acc, _| acc.checked_mul(u128::from(p))).unwrap_or(u128::MAX);
        if words > u128::from(config.budget) {
            return Err(VerifyError::BudgetExceeded { words, budget: config.budget });
        }
        let words = words as u64;
        let basis = CodeBasis::for_space(&space);
        debug_assert_eq!(basis.dimension(), dim);
        let gens = basis.generators().to_vec();
        let rows = gens.iter().map(|&h| space.hyperplane_points(&space.hyperplane_by_index(h))).collect();
        let mut top = 0;
        while top < dim && u64::from(p).pow(top as u32) < 64 {
            top += 1;
        }
        let ctx = Ctx {
            space: &space,
            p: p as u16,
            rows,
            gens,
            low: dim - top,
            theta: space.theta(n as i64 - 1),
            second: 2 * (q as usize).pow(n as u32 - 1),
            max_weight: config.max_weight,
        };
        let blocks = u64::from(p).pow(top as u32);
        #[cfg(feature = "parallel")]
        let part = {
            use rayon::prelude::*;
            (0..blocks).into_par_iter().map(|b| ctx.walk_block(b)).reduce(Partial::default, Partial::merge)
        };
        #[cfg(not(feature = "parallel"))]
        let part = (0..blocks).map(|b| ctx.walk_block(b)).fold(Partial::default(), Partial::merge);
        Ok((part, words))
    });
    let (part, words) = walked?;
    Ok(Spectrum {
        n,
        q: q as usize,
        dimension: CodeBasis::for_space(&space).dimension(),
        words,
        histogram: part.hist,
        witnesses: part.witnesses.into_iter().map(|(w, (_, t))| (w, t)).collect(),
        hyperplane_words: part.hyperplane_words,
        difference_words: part.difference_words,
        counterexample: part.bad.map(|(_, w, t)| (w, t)),
        runtime,
    })
}

impl Spectrum {
    pub fn theta(&self) -> usize {
        (0..self.n).map(|i| self.q.pow(i as u32)).sum()
    }

    pub fn second_weight(&self) -> usize {
        2 * self.q.pow(self.n as u32 - 1)
    }

    pub fn min_weight(&self) -> Option<usize> {
        self.histogram.keys().copied().find(|&w| w > 0)
    }

    /// Weights observed strictly between `theta_{n-1}` and `2q^(n-1)`.
    pub fn gap_weights(&self) -> Vec<usize> {
        self.histogram.range(self.theta() + 1..self.second_weight()).map(|(&w, _)| w).collect()
    }

    fn base(&self, id: &str) -> VerificationReport {
        let mut r = VerificationReport::new(id).with_param("n", self.n).with_param("q", self.q);
        r.runtime = self.runtime;
        r.note("codewords", self.words);
        r.note("dimension", self.dimension);
        r
    }

    /// Minimum weight, gap and second-weight claims.
    pub fn reports(&self) -> Vec<VerificationReport> {
        let theta = self.theta();
        let second = self.second_weight();
        let bad = |w: usize| match &self.counterexample {
            Some((cw, t)) if *cw == w => Some(format!("weight {w} word {t:?} (coefficient, hyperplane index)")),
            _ => None,
        };

        let mut min = self.base("minimum-weight");
        let found = self.min_weight();
        min.note("min_weight", found.map_or("none".into(), |w| format!("{w}")));
        min.note("theta", theta);
        let at_theta = self.histogram.get(&theta).copied().unwrap_or(0);
        min.note("words_at_min_weight", at_theta);
        min.note("hyperplane_multiples", self.hyperplane_words);
        if found != Some(theta) {
            let w = found.unwrap_or(0);
            min.falsify(format!("nonzero word of weight {w}: {:?}", self.witnesses.get(&w)));
        } else if let Some(b) = bad(theta) {
            min.falsify(b);
        }

        let mut gap = self.base("weight-gap");
        gap.note("interval", format!("]{theta}, {second}["));
        let inside = self.gap_weights();
        gap.note("weights_in_interval", inside.len());
        if let Some(&w) = inside.first() {
            gap.falsify(format!("weight {w} word {:?}", self.witnesses.get(&w)));
        }

        let mut two = self.base("second-weight");
        let at_second = self.histogram.get(&second).copied().unwrap_or(0);
        two.note("words_at_second_weight", at_second);
        two.note("hyperplane_differences", self.difference_words);
        if let Some(b) = bad(second) {
            two.falsify(b);
        } else if at_second == 0 {
            two.skip(format!("no words of weight {second}"));
        }
        vec![min, gap, two]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(n: usize, q: u32) -> Spectrum {
        exhaustive_spectrum(n, q, &SpectrumConfig::default()).unwrap()
    }

    // Oracle: brute-force sum over every message vector.
    fn naive(n: usize, q: u32) -> BTreeMap<usize, u64> {
        let s = ProjSpace::of(n, q).unwrap();
        let basis = CodeBasis::for_space(&s);
        let p = s.field().p() as usize;
        let rows: Vec<Vec<usize>> =
            basis.generators().iter().map(|&h| s.hyperplane_points(&s.hyperplane_by_index(h))).collect();
        let mut hist = BTreeMap::new();
        let total = p.pow(rows.len() as u32);
        for m in 0..total {
            let mut v = vec![0usize; s.num_points()];
            let mut x = m;
            for r in &rows {
                let a = x % p;
                x /= p;
                for &pt in r {
                    v[pt] = (v[pt] + a) % p;
                }
            }
            *hist.entry(v.iter().filter(|&&a| a != 0).count()).or_insert(0u64) += 1;
        }
        hist
    }

    #[test]
    fn fano_plane() {
        let sp = run(2, 2);
        assert_eq!(sp.words, 16);
        let expect: BTreeMap<usize, u64> = [(0, 1), (3, 7), (4, 7), (7, 1)].into_iter().collect();
        assert_eq!(sp.histogram, expect);
        assert!(sp.reports().iter().all(VerificationReport::is_verified));
    }

    #[test]
    fn matches_naive_enumeration() {
        for (n, q) in [(2, 2), (2, 3), (2, 4), (3, 2)] {
            assert_eq!(run(n, q).histogram, naive(n, q), "({n},{q})");
        }
    }

    #[test]
    fn plane_of_order_three() {
        let sp = run(2, 3);
        assert_eq!(sp.min_weight(), Some(4));
        assert!(sp.gap_weights().is_empty());
        assert_eq!(sp.histogram[&4], 2 * 13);
        assert!(sp.reports().iter().all(VerificationReport::is_verified));
    }

    #[test]
    fn solid_of_order_three() {
        let sp = run(3, 3);
        assert_eq!(sp.words, 3u64.pow(11));
        assert_eq!(sp.min_weight(), Some(13));
        assert!(sp.gap_weights().is_empty());
        // a(H1 - H2) over unordered pairs and a in {1, 2}, up to sign
        assert_eq!(sp.histogram[&18], 40 * 39);
        assert_eq!(sp.difference_words, 40 * 39);
        assert!(sp.counterexample.is_none());
    }

    #[test]
    fn witnesses_reconstruct() {
        let sp = run(2, 3);
        let s = ProjSpace::of(2, 3).unwrap();
        for (w, t) in &sp.witnesses {
            let terms: Vec<_> = t.iter().map(|&(a, h)| (a, s.hyperplane_by_index(h))).collect();
            assert_eq!(linear_combination(&s, &terms).weight(), *w);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let cfg = SpectrumConfig { budget: 1000, max_weight: None };
        assert!(matches!(exhaustive_spectrum(3, 3, &cfg), Err(VerifyError::BudgetExceeded { .. })));
    }

    #[test]
    fn max_weight_limits_witnesses() {
        let cfg = SpectrumConfig { budget: DEFAULT_BUDGET, max_weight: Some(4) };
        let sp = exhaustive_spectrum(2, 3, &cfg).unwrap();
        assert!(sp.witnesses.keys().all(|&w| w <= 4));
        assert_eq!(sp.histogram.values().sum::<u64>(), 3u64.pow(7));
    }
}
