//! Topological simplification: drop samples in a fixed, nested order until a
//! budget is met, then reconstruct by linear interpolation.
//!
//! The removal schedule is computed once per signal:
//!
//! 1. non-critical samples, flattest first (distance to the chord through
//!    their neighbours), ties by index;
//! 2. non-global persistence pairs in diagram order, i.e. ascending
//!    persistence with nested pairs before the pairs enclosing them;
//! 3. the unpaired interior maximum, if any.
//!
//! Each pair step removes the pair's minimum and maximum, or only the
//! minimum when the maximum is a signal endpoint. Endpoints and the global
//! extrema are never removed. Every budget selects a prefix of the schedule,
//! so kept sets are nested across budgets.

use crate::error::{Error, Result};
use crate::persistence::{compute_diagram, critical_points, PersistenceDiagram};
use crate::signal::Signal;
use crate::wire::{varint_len, CompressedSignal, MethodTag, Point, HEADER_LEN};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Budget {
    /// Largest kept set whose wire size is at most this many bytes.
    Bytes(usize),
    /// Largest kept set with at most this many points.
    Points(usize),
    /// Cancel every non-global pair with persistence strictly below this.
    PersistenceThreshold(f64),
    /// Fraction of points to drop; same as `Points(round((1 - c) * n))`.
    CompressionFraction(f64),
}

impl Budget {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Budget::PersistenceThreshold(t) if !(t.is_finite() && t >= 0.0) => Err(
                Error::InvalidBudget(format!("threshold must be finite and non-negative, got {t}")),
            ),
            Budget::CompressionFraction(c) if !(0.0..=1.0).contains(&c) => Err(
                Error::InvalidBudget(format!("compression fraction must lie in [0, 1], got {c}")),
            ),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    NonCritical,
    /// Position of the pair in [`PersistenceDiagram::pairs`].
    Pair(usize),
    UnpairedMax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub kind: StepKind,
    pub first: usize,
    pub second: Option<usize>,
}

impl Step {
    pub fn removed(&self) -> impl Iterator<Item = usize> {
        std::iter::once(self.first).chain(self.second)
    }
}

/// Precomputed removal schedule for one signal.
#[derive(Debug, Clone)]
pub struct Simplifier {
    signal: Signal,
    diagram: PersistenceDiagram,
    steps: Vec<Step>,
    /// Step at which each sample is removed; `usize::MAX` if never.
    removed_at: Vec<usize>,
    /// Kept count and wire cost after `s` steps, for `s` in `0..=steps.len()`.
    points_after: Vec<usize>,
    cost_after: Vec<usize>,
    noncritical: usize,
}

impl Simplifier {
    pub fn new(signal: &Signal) -> Self {
        let diagram = compute_diagram(signal);
        Self::with_diagram(signal, diagram)
    }

    pub fn with_diagram(signal: &Signal, diagram: PersistenceDiagram) -> Self {
        let v = signal.values();
        let n = v.len();
        let mut critical = vec![false; n];
        for c in critical_points(signal) {
            critical[c.index] = true;
        }

        let chord = |i: usize| (v[i] - 0.5 * (v[i - 1] + v[i + 1])).abs();
        let mut flat: Vec<usize> = (1..n - 1).filter(|&i| !critical[i]).collect();
        flat.sort_by(|&a, &b| chord(a).total_cmp(&chord(b)).then(a.cmp(&b)));
        let noncritical = flat.len();

        let endpoint = |i: usize| i == 0 || i == n - 1;
        let mut steps: Vec<Step> = flat
            .into_iter()
            .map(|i| Step {
                kind: StepKind::NonCritical,
                first: i,
                second: None,
            })
            .collect();
        for (k, p) in diagram.non_global().iter().enumerate() {
            steps.push(Step {
                kind: StepKind::Pair(k),
                first: p.min_index,
                second: (!endpoint(p.max_index)).then_some(p.max_index),
            });
        }
        if let Some(w) = diagram.unpaired_max() {
            steps.push(Step {
                kind: StepKind::UnpairedMax,
                first: w,
                second: None,
            });
        }

        let mut removed_at = vec![usize::MAX; n];
        for (s, step) in steps.iter().enumerate() {
            for i in step.removed() {
                removed_at[i] = s;
            }
        }

        // cost bookkeeping on a doubly linked list of kept indices
        let mut prev: Vec<usize> = (0..n).map(|i| i.wrapping_sub(1)).collect();
        let mut next: Vec<usize> = (1..=n).collect();
        let vl = |d: usize| varint_len(d as u64);
        let mut cost = HEADER_LEN + 4 * n + n;
        let mut points = n;
        let mut cost_after = Vec::with_capacity(steps.len() + 1);
        let mut points_after = Vec::with_capacity(steps.len() + 1);
        cost_after.push(cost);
        points_after.push(points);
        for step in &steps {
            for i in step.removed() {
                let (l, r) = (prev[i], next[i]);
                cost -= 4 + vl(i - l) + vl(r - i);
                cost += vl(r - l);
                next[l] = r;
                prev[r] = l;
                points -= 1;
            }
            cost_after.push(cost);
            points_after.push(points);
        }

        Self {
            signal: signal.clone(),
            diagram,
            steps,
            removed_at,
            points_after,
            cost_after,
            noncritical,
        }
    }

    pub fn signal(&self) -> &Signal {
        &self.signal
    }

    pub fn diagram(&self) -> &PersistenceDiagram {
        &self.diagram
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn schedule_len(&self) -> usize {
        self.steps.len()
    }

    /// Number of leading steps that drop non-critical samples.
    pub fn noncritical_steps(&self) -> usize {
        self.noncritical
    }

    pub fn points_after(&self, steps: usize) -> usize {
        self.points_after[steps]
    }

    /// Exact wire size of the compression after `steps` steps.
    pub fn cost_after(&self, steps: usize) -> usize {
        self.cost_after[steps]
    }

    /// Number of schedule steps a budget selects.
    pub fn steps_for(&self, budget: Budget) -> Result<usize> {
        budget.validate()?;
        let last = self.steps.len();
        match budget {
            Budget::PersistenceThreshold(t) => {
                let below = self
                    .diagram
                    .non_global()
                    .iter()
                    .take_while(|p| p.persistence() < t)
                    .count();
                Ok(self.noncritical + below)
            }
            Budget::Points(k) => match self.points_after.iter().position(|&p| p <= k) {
                Some(s) => Ok(s),
                None => Err(Error::BudgetInfeasible(format!(
                    "{k} points requested but at least {} must be kept",
                    self.points_after[last]
                ))),
            },
            Budget::Bytes(b) => match self.cost_after.iter().position(|&c| c <= b) {
                Some(s) => Ok(s),
                None => Err(Error::BudgetInfeasible(format!(
                    "{b} bytes requested but the smallest compression takes {}",
                    self.cost_after[last]
                ))),
            },
            Budget::CompressionFraction(c) => {
                let k = ((1.0 - c) * self.signal.len() as f64).round() as usize;
                self.steps_for(Budget::Points(k))
            }
        }
    }

    pub fn compress(&self, budget: Budget) -> Result<CompressedSignal> {
        Ok(self.compress_steps(self.steps_for(budget)?))
    }

    /// Compression after the first `steps` schedule steps.
    pub fn compress_steps(&self, steps: usize) -> CompressedSignal {
        assert!(steps <= self.steps.len(), "step count beyond schedule");
        let v = self.signal.values();
        let points = (0..v.len())
            .filter(|&i| self.removed_at[i] >= steps)
            .map(|i| Point::new(i, v[i]))
            .collect();
        CompressedSignal::new(points, v.len(), self.signal.sample_rate_hz(), MethodTag::Tsc)
            .expect("schedule keeps both endpoints")
    }
}

pub fn simplify(signal: &Signal, budget: Budget) -> Result<CompressedSignal> {
    budget.validate()?;
    Simplifier::new(signal).compress(budget)
}

/// Cancels the lowest-persistence pair still present in `compressed`, or the
/// unpaired interior maximum once no pair is left.
///
/// Expects a TSC compression holding critical points only, as produced by
/// [`simplify`] with a budget past the non-critical prefix. Removes two
/// points, or one when the pair dies at a signal endpoint.
pub fn cancel_next(
    compressed: &CompressedSignal,
    diagram: &PersistenceDiagram,
) -> Result<CompressedSignal> {
    let n = diagram.signal_length();
    if compressed.method() != MethodTag::Tsc {
        return Err(Error::Parameter(format!(
            "cancel_next needs a TSC compression, got {}",
            compressed.method().name()
        )));
    }
    if compressed.original_length() != n {
        return Err(Error::Parameter(format!(
            "compression covers {} samples but the diagram covers {n}",
            compressed.original_length()
        )));
    }

    let mut critical = vec![false; n];
    critical[0] = true;
    critical[n - 1] = true;
    for p in diagram.pairs() {
        critical[p.min_index] = true;
        critical[p.max_index] = true;
    }
    if let Some(w) = diagram.unpaired_max() {
        critical[w] = true;
    }
    let mut kept = vec![false; n];
    for i in compressed.indices() {
        if !critical[i] {
            return Err(Error::Parameter(format!(
                "index {i} is not critical; cancel_next expects critical points only"
            )));
        }
        kept[i] = true;
    }

    let endpoint = |i: usize| i == 0 || i == n - 1;
    let target = diagram
        .non_global()
        .iter()
        .find(|p| kept[p.min_index])
        .map(|p| {
            if !endpoint(p.max_index) && !kept[p.max_index] {
                return Err(Error::Parameter(format!(
                    "pair ({}, {}) is only half present",
                    p.min_index, p.max_index
                )));
            }
            Ok((p.min_index, (!endpoint(p.max_index)).then_some(p.max_index)))
        })
        .transpose()?
        .or_else(|| {
            diagram
                .unpaired_max()
                .filter(|&w| kept[w])
                .map(|w| (w, None))
        });
    let Some((a, b)) = target else {
        return Err(Error::NothingToCancel);
    };

    let points = compressed
        .points()
        .iter()
        .filter(|p| p.index != a && Some(p.index) != b)
        .copied()
        .collect();
    CompressedSignal::new(points, n, compressed.sample_rate_hz(), MethodTag::Tsc)
}

/// Piecewise-linear interpolation through the kept points; constant beyond
/// the first and last kept index.
pub fn interpolate(points: &[Point], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    let (Some(first), Some(last)) = (points.first(), points.last()) else {
        return out;
    };
    out[..=first.index].fill(first.value);
    out[last.index..].fill(last.value);
    for w in points.windows(2) {
        let (p0, p1) = (w[0], w[1]);
        let span = (p1.index - p0.index) as f64;
        for i in p0.index + 1..p1.index {
            out[i] = p0.value + (p1.value - p0.value) * (i - p0.index) as f64 / span;
        }
        out[p1.index] = p1.value;
    }
    out
}

/// Linear reconstruction; kept samples are reproduced exactly.
pub fn reconstruct(compressed: &CompressedSignal) -> Result<Signal> {
    if compressed.len() < 2 {
        return Err(Error::Underdetermined(format!(
            "need at least 2 points, got {}",
            compressed.len()
        )));
    }
    let values = interpolate(compressed.points(), compressed.original_length());
    Signal::new(values, compressed.sample_rate_hz())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn sig(v: &[f64]) -> Signal {
        Signal::new(v.to_vec(), 1.0).unwrap()
    }

    fn kept(c: &CompressedSignal) -> Vec<usize> {
        c.indices().collect()
    }

    const EIGHT: [f64; 8] = [3.0, 2.0, 0.0, 2.5, 1.5, 3.5, 4.5, 4.0];

    #[test]
    fn eight_point_panels() {
        let s = sig(&EIGHT);
        let six = simplify(&s, Budget::Points(6)).unwrap();
        assert_eq!(kept(&six), vec![0, 2, 3, 4, 6, 7]);
        let four = simplify(&s, Budget::Points(4)).unwrap();
        assert_eq!(kept(&four), vec![0, 2, 6, 7]);
        let d = compute_diagram(&s);
        assert_eq!(cancel_next(&six, &d).unwrap(), four);
        assert!(matches!(cancel_next(&four, &d), Err(Error::NothingToCancel)));
        // non-critical points remain cancellable only through the schedule
        let all = simplify(&s, Budget::Points(8)).unwrap();
        assert!(cancel_next(&all, &d).is_err());
    }

    #[test]
    fn threshold_is_strict() {
        let s = sig(&[0.0, 2.0, 1.0, 3.0]);
        let c = simplify(&s, Budget::PersistenceThreshold(1.5)).unwrap();
        assert_eq!(kept(&c), vec![0, 3]);
        let c = simplify(&s, Budget::PersistenceThreshold(1.0)).unwrap();
        assert_eq!(kept(&c), vec![0, 1, 2, 3]);
    }

    #[test]
    fn points_never_exceed_budget() {
        let s = sig(&EIGHT);
        assert_eq!(simplify(&s, Budget::Points(5)).unwrap().len(), 4);
        assert_eq!(simplify(&s, Budget::Points(7)).unwrap().len(), 7);
        assert!(matches!(
            simplify(&s, Budget::Points(3)),
            Err(Error::BudgetInfeasible(_))
        ));
        assert_eq!(
            simplify(&s, Budget::CompressionFraction(0.5)).unwrap().len(),
            4
        );
    }

    #[test]
    fn bad_budgets() {
        let s = sig(&EIGHT);
        assert!(matches!(
            simplify(&s, Budget::PersistenceThreshold(-1.0)),
            Err(Error::InvalidBudget(_))
        ));
        assert!(matches!(
            simplify(&s, Budget::CompressionFraction(1.5)),
            Err(Error::InvalidBudget(_))
        ));
        assert!(matches!(
            simplify(&s, Budget::Bytes(HEADER_LEN + 10)),
            Err(Error::BudgetInfeasible(_))
        ));
    }

    #[test]
    fn wall_is_removed_last() {
        let s = sig(&[1.0, 5.0, 0.0, 10.0, 2.0]);
        let sim = Simplifier::new(&s);
        assert_eq!(sim.steps().last().unwrap().kind, StepKind::UnpairedMax);
        let c = sim.compress(Budget::PersistenceThreshold(100.0)).unwrap();
        assert_eq!(kept(&c), vec![0, 1, 2, 3, 4]);
        let c = sim.compress(Budget::Points(4)).unwrap();
        assert_eq!(kept(&c), vec![0, 2, 3, 4]);
    }

    #[test]
    fn linear_midpoint() {
        let c = CompressedSignal::new(
            vec![Point::new(0, 0.0), Point::new(2, 2.0)],
            3,
            1.0,
            MethodTag::Tsc,
        )
        .unwrap();
        assert_eq!(reconstruct(&c).unwrap().values(), &[0.0, 1.0, 2.0]);
    }

    #[test]
    fn underdetermined() {
        let c = CompressedSignal::new(vec![Point::new(0, 1.0)], 1, 1.0, MethodTag::Random).unwrap();
        assert!(matches!(reconstruct(&c), Err(Error::Underdetermined(_))));
    }

    fn arb_values() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-20i32..20, 2..48)
            .prop_map(|v| v.into_iter().map(|x| f64::from(x) * 0.5).collect())
    }

    fn pair_set(d: &PersistenceDiagram) -> BTreeSet<(usize, usize)> {
        d.pairs().iter().map(|p| (p.min_index, p.max_index)).collect()
    }

    proptest! {
        #[test]
        fn identity_when_nothing_removed(v in arb_values()) {
            let s = sig(&v);
            let c = simplify(&s, Budget::Points(v.len())).unwrap();
            let r = reconstruct(&c).unwrap();
            prop_assert_eq!(r.values(), s.values());
        }

        #[test]
        fn cancellation_preserves_survivors(v in arb_values(), t in 0.0f64..12.0) {
            let s = sig(&v);
            let d = compute_diagram(&s);
            let c = simplify(&s, Budget::PersistenceThreshold(t)).unwrap();
            let g = reconstruct(&c).unwrap();
            let dg = compute_diagram(&g);
            let want: BTreeSet<_> = d
                .pairs()
                .iter()
                .filter(|p| p.is_global || p.persistence() >= t)
                .map(|p| (p.min_index, p.max_index))
                .collect();
            prop_assert_eq!(pair_set(&dg), want);
            for p in dg.pairs() {
                prop_assert_eq!(p.birth, v[p.min_index]);
                prop_assert_eq!(p.death, v[p.max_index]);
            }
        }

        #[test]
        fn every_prefix_is_valid(v in arb_values()) {
            // each step keeps the reconstruction's diagram equal to the survivors
            let s = sig(&v);
            let sim = Simplifier::new(&s);
            let d = sim.diagram().clone();
            for st in sim.noncritical_steps()..=sim.schedule_len() {
                let g = reconstruct(&sim.compress_steps(st)).unwrap();
                let dg = compute_diagram(&g);
                let gone: BTreeSet<usize> = sim.steps()[..st]
                    .iter()
                    .filter_map(|x| match x.kind { StepKind::Pair(k) => Some(k), _ => None })
                    .collect();
                let want: BTreeSet<_> = d
                    .pairs()
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| !gone.contains(k))
                    .map(|(_, p)| (p.min_index, p.max_index))
                    .collect();
                prop_assert_eq!(pair_set(&dg), want);
            }
        }

        #[test]
        fn nested_across_point_budgets(v in arb_values(), a in 0usize..48, b in 0usize..48) {
            let s = sig(&v);
            let sim = Simplifier::new(&s);
            let (lo, hi) = (a.min(b), a.max(b));
            if let (Ok(x), Ok(y)) = (sim.compress(Budget::Points(lo)), sim.compress(Budget::Points(hi))) {
                let big: BTreeSet<usize> = y.indices().collect();
                prop_assert!(x.indices().all(|i| big.contains(&i)));
            }
        }

        #[test]
        fn cancel_next_is_local(v in arb_values()) {
            let s = sig(&v);
            let sim = Simplifier::new(&s);
            let d = sim.diagram();
            let mut c = sim.compress_steps(sim.noncritical_steps());
            loop {
                let before = reconstruct(&c).unwrap();
                let next = match cancel_next(&c, d) {
                    Ok(x) => x,
                    Err(Error::NothingToCancel) => break,
                    Err(e) => return Err(TestCaseError::fail(e.to_string())),
                };
                let removed: Vec<usize> = c
                    .indices()
                    .filter(|i| !next.indices().any(|j| j == *i))
                    .collect();
                prop_assert!(removed.len() == 1 || removed.len() == 2);
                let lo = next.indices().filter(|&i| i < removed[0]).last().unwrap();
                let hi = next.indices().find(|&i| i > *removed.last().unwrap()).unwrap();
                let after = reconstruct(&next).unwrap();
                for i in 0..v.len() {
                    if i <= lo || i >= hi {
                        prop_assert_eq!(before.values()[i], after.values()[i]);
                    }
                }
                c = next;
            }
            prop_assert_eq!(c.len(), sim.points_after(sim.schedule_len()));
        }

        #[test]
        fn idempotent(v in arb_values(), t in 0.0f64..12.0) {
            let s = sig(&v);
            let c = simplify(&s, Budget::PersistenceThreshold(t)).unwrap();
            let g = reconstruct(&c).unwrap();
            let c2 = simplify(&g, Budget::PersistenceThreshold(t)).unwrap();
            prop_assert_eq!(kept(&c), kept(&c2));
        }

        #[test]
        fn byte_budget_is_tight(v in arb_values(), b in 0usize..400) {
            let s = sig(&v);
            let sim = Simplifier::new(&s);
            match sim.steps_for(Budget::Bytes(b)) {
                Ok(st) => {
                    let c = sim.compress_steps(st);
                    prop_assert_eq!(c.wire_cost(), sim.cost_after(st));
                    prop_assert!(c.wire_cost() <= b);
                    if st > 0 {
                        prop_assert!(sim.compress_steps(st - 1).wire_cost() > b);
                    }
                }
                Err(_) => prop_assert!(sim.cost_after(sim.schedule_len()) > b),
            }
        }
    }
}
