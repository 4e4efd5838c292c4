//! Zero-dimensional sublevel persistence of a sampled signal.
//!
//! Samples are totally ordered by `(value, index)`, which resolves every tie
//! (plateaus included) deterministically. The sweep adds samples in that
//! order and tracks connected components of the sublevel set with a
//! union-find; when two components meet, the younger one dies (elder rule).
//!
//! Boundary convention: both ends of the domain are attached to a virtual
//! ground vertex lying below every sample. A component that reaches an end
//! of the signal is therefore absorbed into the ground rather than living on
//! as a separate class, so births happen only at interior local minima and a
//! component may die at an endpoint maximum. The global minimum is exempt:
//! by convention it is paired with the global maximum. With this convention
//! every non-global dot can be cancelled while both endpoints keep their
//! sampled values.
//!
//! The interior maximum at which the global minimum's basin first reaches an
//! end of the signal carries no dot. It is reported as
//! [`PersistenceDiagram::unpaired_max`].

use crate::error::Result;
use crate::signal::Signal;
use std::cmp::Ordering;
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalKind {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CriticalPoint {
    pub index: usize,
    pub kind: CriticalKind,
}

/// Strict `(value, index)` order.
#[inline]
pub(crate) fn lex_lt(values: &[f64], a: usize, b: usize) -> bool {
    (values[a], a) < (values[b], b)
}

fn lex_cmp(values: &[f64], a: usize, b: usize) -> Ordering {
    values[a]
        .partial_cmp(&values[b])
        .unwrap_or(Ordering::Equal)
        .then(a.cmp(&b))
}

/// Indices sorted by `(value, index)`.
pub(crate) fn sweep_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_unstable_by(|&a, &b| lex_cmp(values, a, b));
    order
}

fn classify(values: &[f64], i: usize) -> Option<CriticalKind> {
    let n = values.len();
    let below = |j: usize| lex_lt(values, j, i);
    let (l, r) = match i {
        0 => {
            return Some(if below(1) { CriticalKind::Max } else { CriticalKind::Min });
        }
        _ if i == n - 1 => {
            return Some(if below(n - 2) { CriticalKind::Max } else { CriticalKind::Min });
        }
        _ => (below(i - 1), below(i + 1)),
    };
    match (l, r) {
        (true, true) => Some(CriticalKind::Max),
        (false, false) => Some(CriticalKind::Min),
        _ => None,
    }
}

/// Local extrema under the `(value, index)` order, endpoints included.
///
/// Kinds strictly alternate. On a plateau the tie-break makes the leftmost
/// sample the minimum and the rightmost sample the maximum.
pub fn critical_points(signal: &Signal) -> Vec<CriticalPoint> {
    let v = signal.values();
    (0..v.len())
        .filter_map(|i| classify(v, i).map(|kind| CriticalPoint { index: i, kind }))
        .collect()
}

/// One dot of the diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistencePair {
    pub birth: f64,
    pub death: f64,
    /// Local minimum where the component was born.
    pub min_index: usize,
    /// Local maximum where it died (may be an endpoint).
    pub max_index: usize,
    pub is_global: bool,
}

impl PersistencePair {
    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceDiagram {
    pairs: Vec<PersistencePair>,
    signal_length: usize,
    unpaired_max: Option<usize>,
}

impl PersistenceDiagram {
    /// Non-global pairs in cancellation order (ascending persistence, ties by
    /// death rank so nested pairs come first), then the global pair.
    pub fn pairs(&self) -> &[PersistencePair] {
        &self.pairs
    }

    pub fn non_global(&self) -> &[PersistencePair] {
        &self.pairs[..self.pairs.len() - 1]
    }

    pub fn global(&self) -> &PersistencePair {
        self.pairs.last().expect("diagram always has the global pair")
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn signal_length(&self) -> usize {
        self.signal_length
    }

    pub fn unpaired_max(&self) -> Option<usize> {
        self.unpaired_max
    }

    /// Pairs sorted by persistence, largest first; ties by `min_index`.
    pub fn by_persistence_desc(&self) -> Vec<PersistencePair> {
        let mut out = self.pairs.clone();
        out.sort_by(|a, b| {
            b.persistence()
                .partial_cmp(&a.persistence())
                .unwrap_or(Ordering::Equal)
                .then(a.min_index.cmp(&b.min_index))
        });
        out
    }

    /// CSV with columns `birth,death,min_index,max_index,is_global`, sorted by
    /// persistence descending.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "birth,death,min_index,max_index,is_global")?;
        for p in self.by_persistence_desc() {
            writeln!(
                w,
                "{},{},{},{},{}",
                p.birth, p.death, p.min_index, p.max_index, p.is_global
            )?;
        }
        Ok(())
    }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Links two roots; returns the surviving root.
    fn link(&mut self, a: usize, b: usize) -> usize {
        let (big, small) = if self.size[a] >= self.size[b] { (a, b) } else { (b, a) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        big
    }
}

/// Computes the diagram by a single union-find sweep, O(n log n).
pub fn compute_diagram(signal: &Signal) -> PersistenceDiagram {
    let v = signal.values();
    let n = v.len();
    let order = sweep_order(v);
    let mut rank = vec![0usize; n];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let gmin = order[0];
    let gmax = order[n - 1];

    let ground = n;
    let mut uf = UnionFind::new(n + 1);
    // per root: oldest vertex, and whether the component can never die
    let mut oldest = vec![usize::MAX; n + 1];
    let mut immortal = vec![false; n + 1];
    immortal[ground] = true;
    let mut active = vec![false; n];

    let mut deaths: Vec<(usize, usize)> = Vec::with_capacity(n / 2);
    let mut unpaired_max = None;

    for &x in &order {
        active[x] = true;
        oldest[x] = x;
        immortal[x] = x == gmin;
        let left = if x == 0 {
            Some(ground)
        } else {
            active[x - 1].then(|| x - 1)
        };
        let right = if x == n - 1 {
            Some(ground)
        } else {
            active[x + 1].then(|| x + 1)
        };
        let left = left.map(|i| uf.find(i));
        let right = right.map(|i| uf.find(i));
        match (left, right) {
            (None, None) => {}
            (Some(a), None) | (None, Some(a)) => {
                let r = uf.link(a, x);
                oldest[r] = oldest[a];
                immortal[r] = immortal[a] || immortal[x];
            }
            (Some(a), Some(b)) if a == b => {
                // only the global maximum closes the loop through the ground
                let r = uf.link(a, x);
                oldest[r] = oldest[a];
                immortal[r] = true;
            }
            (Some(a), Some(b)) => {
                let survivor = match (immortal[a], immortal[b]) {
                    (true, true) => {
                        if x != 0 && x != n - 1 {
                            unpaired_max = Some(x);
                        }
                        a
                    }
                    (true, false) => {
                        deaths.push((oldest[b], x));
                        a
                    }
                    (false, true) => {
                        deaths.push((oldest[a], x));
                        b
                    }
                    (false, false) => {
                        if rank[oldest[a]] < rank[oldest[b]] {
                            deaths.push((oldest[b], x));
                            a
                        } else {
                            deaths.push((oldest[a], x));
                            b
                        }
                    }
                };
                let keep_oldest = oldest[survivor];
                let keep_immortal = immortal[a] || immortal[b];
                let r = uf.link(a, b);
                let r = uf.link(r, x);
                oldest[r] = keep_oldest;
                immortal[r] = keep_immortal;
            }
        }
    }

    deaths.sort_by(|&(ma, xa), &(mb, xb)| {
        (v[xa] - v[ma])
            .partial_cmp(&(v[xb] - v[mb]))
            .unwrap_or(Ordering::Equal)
            .then(rank[xa].cmp(&rank[xb]))
    });
    let mut pairs: Vec<PersistencePair> = deaths
        .into_iter()
        .map(|(m, x)| PersistencePair {
            birth: v[m],
            death: v[x],
            min_index: m,
            max_index: x,
            is_global: false,
        })
        .collect();
    pairs.push(PersistencePair {
        birth: v[gmin],
        death: v[gmax],
        min_index: gmin,
        max_index: gmax,
        is_global: true,
    });

    PersistenceDiagram {
        pairs,
        signal_length: n,
        unpaired_max,
    }
}
