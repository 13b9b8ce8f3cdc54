//! Exhaustive backtracking oracles for small instances.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::coloring::ColoredGraph;
use crate::error::{Error, Result};
use crate::heuristics::{Method, SolveReport};
use crate::paths::Path;

/// How far an exhaustive search may go.
///
/// Instances above `max_n` are refused unless a node or time budget is set.
/// Running out of budget is reported through the `exhaustive` flag of the
/// result, never by silently returning a partial answer as optimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    pub max_n: usize,
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_n: 11, node_budget: None, time_budget: None }
    }
}

impl SearchLimits {
    pub fn with_max_n(max_n: usize) -> SearchLimits {
        SearchLimits { max_n, ..SearchLimits::default() }
    }

    pub fn has_budget(&self) -> bool {
        self.node_budget.is_some() || self.time_budget.is_some()
    }

    pub(crate) fn admit(&self, n: usize) -> Result<()> {
        if self.max_n < 2 {
            return Err(Error::InvalidArgument("max_n must be at least 2".into()));
        }
        if n > self.max_n && !self.has_budget() {
            return Err(Error::SizeCap { n, cap: self.max_n });
        }
        Ok(())
    }
}

/// Shared budget accounting; safe to use from several search threads.
pub(crate) struct Budget {
    nodes: AtomicU64,
    stopped: AtomicBool,
    node_budget: Option<u64>,
    deadline: Option<Instant>,
}

impl Budget {
    pub(crate) fn new(limits: &SearchLimits) -> Budget {
        Budget {
            nodes: AtomicU64::new(0),
            stopped: AtomicBool::new(false),
            node_budget: limits.node_budget,
            deadline: limits.time_budget.map(|d| Instant::now() + d),
        }
    }

    /// Counts one node; false once any budget is exhausted.
    #[inline]
    pub(crate) fn tick(&self) -> bool {
        if self.stopped.load(Ordering::Relaxed) {
            return false;
        }
        let count = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over_nodes = self.node_budget.is_some_and(|b| count > b);
        let over_time = count.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() >= d);
        if over_nodes || over_time {
            self.stopped.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    pub(crate) fn exhausted(&self) -> bool {
        self.stopped.load(Ordering::Relaxed)
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactPath {
    pub path: Path,
    /// True iff the search finished without hitting a budget.
    pub exhaustive: bool,
    pub nodes: u64,
}

impl ExactPath {
    /// Report form; the guaranteed bound is only claimed for exhaustive results.
    pub fn into_report(self, g: &ColoredGraph, k: u32) -> Result<SolveReport> {
        let n = g.n();
        let bound = if self.exhaustive {
            bounds::maximal(n, k).max(bounds::kfact(n, k))
        } else {
            bounds::int(1)
        };
        let mut report =
            SolveReport::build(g, Method::Exact, k, self.path.clone(), self.path, Vec::new(), bound)?;
        report.exhaustive = Some(self.exhaustive);
        Ok(report)
    }
}

struct PathSearch<'a> {
    g: &'a ColoredGraph,
    k: u32,
    budget: &'a Budget,
    start: usize,
    path: Vec<usize>,
    on: Vec<bool>,
    counts: Vec<u32>,
    best: Vec<usize>,
}

impl<'a> PathSearch<'a> {
    fn new(g: &'a ColoredGraph, k: u32, budget: &'a Budget, best: Vec<usize>) -> PathSearch<'a> {
        PathSearch {
            g,
            k,
            budget,
            start: 0,
            path: Vec::with_capacity(g.n()),
            on: vec![false; g.n()],
            counts: vec![0; g.palette_len()],
            best,
        }
    }

    fn run_from(&mut self, start: usize) {
        self.start = start;
        self.path.push(start);
        self.on[start] = true;
        self.dfs(self.g.n() - 1);
        self.on[start] = false;
        self.path.pop();
    }

    /// `off` is the number of vertices not on the current path.
    fn dfs(&mut self, off: usize) -> bool {
        if !self.budget.tick() {
            return false;
        }
        let n = self.g.n();
        let last = self.path[self.path.len() - 1];
        // only canonical orientations (start <= end) are recorded
        if self.path.len() > self.best.len() && last >= self.start {
            self.best.clone_from(&self.path);
        }
        if self.best.len() == n || self.path.len() + off <= self.best.len() {
            return true;
        }
        for v in 0..n {
            if self.on[v] {
                continue;
            }
            let c = self.g.color_index(last, v);
            if self.counts[c] >= self.k {
                continue;
            }
            self.counts[c] += 1;
            self.on[v] = true;
            self.path.push(v);
            let go_on = self.dfs(off - 1);
            self.path.pop();
            self.on[v] = false;
            self.counts[c] -= 1;
            if !go_on || self.best.len() == n {
                return go_on;
            }
        }
        true
    }
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    Ok(())
}

/// A longest k-rainbow path: the lexicographically smallest one among all
/// optimal vertex sequences.
pub fn max_k_rainbow_path_exact(g: &ColoredGraph, k: u32, limits: &SearchLimits) -> Result<ExactPath> {
    check_k(k)?;
    limits.admit(g.n())?;
    let budget = Budget::new(limits);
    let mut search = PathSearch::new(g, k, &budget, Vec::new());
    for start in 0..g.n() {
        search.run_from(start);
        if budget.exhausted() || search.best.len() == g.n() {
            break;
        }
    }
    Ok(ExactPath {
        path: Path::from_vec_unchecked(search.best),
        exhaustive: !budget.exhausted(),
        nodes: budget.nodes(),
    })
}

/// Same result as [`max_k_rainbow_path_exact`], with one task per start vertex.
pub fn max_k_rainbow_path_exact_parallel(
    g: &ColoredGraph,
    k: u32,
    limits: &SearchLimits,
) -> Result<ExactPath> {
    check_k(k)?;
    limits.admit(g.n())?;
    let budget = Budget::new(limits);
    let best = (0..g.n())
        .into_par_iter()
        .map(|start| {
            let mut search = PathSearch::new(g, k, &budget, Vec::new());
            search.run_from(start);
            (start, search.best)
        })
        .reduce(
            || (usize::MAX, Vec::new()),
            |a, b| match a.1.len().cmp(&b.1.len()) {
                std::cmp::Ordering::Less => b,
                std::cmp::Ordering::Greater => a,
                std::cmp::Ordering::Equal => if a.0 <= b.0 { a } else { b },
            },
        )
        .1;
    Ok(ExactPath {
        path: Path::from_vec_unchecked(best),
        exhaustive: !budget.exhausted(),
        nodes: budget.nodes(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HamiltonianSearch {
    Exists(Path),
    NotExists,
    BudgetExhausted,
}

pub fn has_hamiltonian_rainbow_path(g: &ColoredGraph, limits: &SearchLimits) -> Result<HamiltonianSearch> {
    let found = max_k_rainbow_path_exact(g, 1, limits)?;
    Ok(if found.path.len() == g.n() {
        HamiltonianSearch::Exists(found.path)
    } else if found.exhaustive {
        HamiltonianSearch::NotExists
    } else {
        HamiltonianSearch::BudgetExhausted
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCycle {
    /// Cycle order starting at its smallest vertex; the closing edge is implicit.
    pub vertices: Vec<usize>,
    pub exhaustive: bool,
    pub nodes: u64,
}

impl ExactCycle {
    /// Number of edges, equal to the number of vertices.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

struct CycleSearch<'a> {
    g: &'a ColoredGraph,
    budget: &'a Budget,
    path: Vec<usize>,
    on: Vec<bool>,
    used: Vec<bool>,
    best: Vec<usize>,
}

impl CycleSearch<'_> {
    /// `avail` counts vertices above the cycle's smallest vertex not yet used.
    fn dfs(&mut self, avail: usize) -> bool {
        if !self.budget.tick() {
            return false;
        }
        let n = self.g.n();
        let (s, last) = (self.path[0], self.path[self.path.len() - 1]);
        if self.path.len() >= 3 && self.path.len() > self.best.len() && self.path[1] < last {
            let closing = self.g.color_index(last, s);
            if !self.used[closing] {
                self.best.clone_from(&self.path);
            }
        }
        if self.best.len() == n || self.path.len() + avail <= self.best.len() {
            return true;
        }
        for v in s + 1..n {
            if self.on[v] {
                continue;
            }
            let c = self.g.color_index(last, v);
            if self.used[c] {
                continue;
            }
            self.used[c] = true;
            self.on[v] = true;
            self.path.push(v);
            let go_on = self.dfs(avail - 1);
            self.path.pop();
            self.on[v] = false;
            self.used[c] = false;
            if !go_on || self.best.len() == n {
                return go_on;
            }
        }
        true
    }
}

/// A longest rainbow cycle (at least a triangle).
pub fn max_rainbow_cycle_exact(g: &ColoredGraph, limits: &SearchLimits) -> Result<ExactCycle> {
    let n = g.n();
    if n < 3 {
        return Err(Error::InvalidArgument("a cycle needs n >= 3".into()));
    }
    limits.admit(n)?;
    let budget = Budget::new(limits);
    let mut search = CycleSearch {
        g,
        budget: &budget,
        path: Vec::with_capacity(n),
        on: vec![false; n],
        used: vec![false; g.palette_len()],
        best: Vec::new(),
    };
    for s in 0..n - 2 {
        search.path.push(s);
        search.on[s] = true;
        let go_on = search.dfs(n - 1 - s);
        search.on[s] = false;
        search.path.pop();
        if !go_on || search.best.len() == n {
            break;
        }
    }
    Ok(ExactCycle { vertices: search.best, exhaustive: !budget.exhausted(), nodes: budget.nodes() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{mm_coloring, random_proper_coloring};
    use crate::paths::is_k_rainbow;

    /// Enumerates every vertex sequence of every length.
    fn brute_force_longest(g: &ColoredGraph, k: u32) -> usize {
        fn rec(g: &ColoredGraph, k: u32, p: &mut Vec<usize>, best: &mut usize) {
            let path = Path::from_vec_unchecked(p.clone());
            if !is_k_rainbow(g, &path, k) {
                return;
            }
            *best = (*best).max(p.len());
            for v in 0..g.n() {
                if !p.contains(&v) {
                    p.push(v);
                    rec(g, k, p, best);
                    p.pop();
                }
            }
        }
        let mut best = 0;
        for s in 0..g.n() {
            rec(g, k, &mut vec![s], &mut best);
        }
        best
    }

    #[test]
    fn path_oracle_examples() {
        let lim = SearchLimits::default();
        let g = random_proper_coloring(2, 1).unwrap();
        let r = max_k_rainbow_path_exact(&g, 1, &lim).unwrap();
        assert_eq!((r.path.len(), r.exhaustive), (2, true));

        let g = mm_coloring(2).unwrap();
        let r = max_k_rainbow_path_exact(&g, 1, &lim).unwrap();
        assert_eq!((r.path.len(), r.exhaustive), (3, true));
        assert_eq!(r.path.vertices(), &[0, 1, 2]);
        assert_eq!(max_k_rainbow_path_exact(&g, 2, &lim).unwrap().path.len(), 4);
    }

    #[test]
    fn path_oracle_agrees_with_enumeration() {
        for n in 2..=7 {
            for seed in 0..4 {
                let g = random_proper_coloring(n, seed).unwrap();
                for k in 1..=2 {
                    let r = max_k_rainbow_path_exact(&g, k, &SearchLimits::default()).unwrap();
                    assert_eq!(r.path.len(), brute_force_longest(&g, k), "n={n} seed={seed} k={k}");
                    assert!(is_k_rainbow(&g, &r.path, k));
                    assert!(r.path.first() <= r.path.last());
                }
            }
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        for n in [5usize, 8, 9] {
            for seed in 0..3 {
                let g = random_proper_coloring(n, seed).unwrap();
                let lim = SearchLimits::default();
                let a = max_k_rainbow_path_exact(&g, 1, &lim).unwrap();
                let b = max_k_rainbow_path_exact_parallel(&g, 1, &lim).unwrap();
                assert_eq!(a.path, b.path);
            }
        }
        let g = mm_coloring(3).unwrap();
        let lim = SearchLimits::default();
        assert_eq!(
            max_k_rainbow_path_exact(&g, 1, &lim).unwrap().path,
            max_k_rainbow_path_exact_parallel(&g, 1, &lim).unwrap().path
        );
    }

    #[test]
    fn hamiltonian_examples() {
        let lim = SearchLimits::default();
        let g = random_proper_coloring(2, 0).unwrap();
        assert!(matches!(has_hamiltonian_rainbow_path(&g, &lim).unwrap(), HamiltonianSearch::Exists(_)));
        assert_eq!(has_hamiltonian_rainbow_path(&mm_coloring(2).unwrap(), &lim).unwrap(), HamiltonianSearch::NotExists);
        assert_eq!(has_hamiltonian_rainbow_path(&mm_coloring(3).unwrap(), &lim).unwrap(), HamiltonianSearch::NotExists);
    }

    #[test]
    fn limits_are_enforced() {
        let g = random_proper_coloring(12, 0).unwrap();
        assert!(matches!(
            max_k_rainbow_path_exact(&g, 1, &SearchLimits::default()),
            Err(Error::SizeCap { n: 12, cap: 11 })
        ));
        let lim = SearchLimits { node_budget: Some(50), ..SearchLimits::default() };
        let r = max_k_rainbow_path_exact(&g, 1, &lim).unwrap();
        assert!(!r.exhaustive);
        assert!(!r.path.is_empty());
        let g = mm_coloring(3).unwrap();
        assert_eq!(has_hamiltonian_rainbow_path(&g, &lim).unwrap(), HamiltonianSearch::BudgetExhausted);
        let lim = SearchLimits { time_budget: Some(Duration::ZERO), ..SearchLimits::default() };
        let g = random_proper_coloring(11, 1).unwrap();
        let r = max_k_rainbow_path_exact(&g, 1, &lim).unwrap();
        assert!(r.exhaustive || r.nodes >= 1024);
    }

    fn brute_force_cycle(g: &ColoredGraph) -> usize {
        fn rec(g: &ColoredGraph, p: &mut Vec<usize>, best: &mut usize) {
            if p.len() >= 3 {
                let mut cols: Vec<_> = p.windows(2).map(|e| g.color(e[0], e[1])).collect();
                cols.push(g.color(p[p.len() - 1], p[0]));
                let len = cols.len();
                cols.sort();
                cols.dedup();
                if cols.len() == len {
                    *best = (*best).max(len);
                }
            }
            for v in 0..g.n() {
                if !p.contains(&v) {
                    p.push(v);
                    rec(g, p, best);
                    p.pop();
                }
            }
        }
        let mut best = 0;
        rec(g, &mut vec![0], &mut best);
        for s in 1..g.n() {
            rec(g, &mut vec![s], &mut best);
        }
        best
    }

    #[test]
    fn cycle_oracle() {
        let lim = SearchLimits::default();
        let g = random_proper_coloring(3, 5).unwrap();
        assert_eq!(max_rainbow_cycle_exact(&g, &lim).unwrap().len(), 3);
        let r = max_rainbow_cycle_exact(&mm_coloring(2).unwrap(), &lim).unwrap();
        assert_eq!((r.len(), r.exhaustive), (3, true));
        for n in 3..=7 {
            let g = random_proper_coloring(n, n as u64).unwrap();
            assert_eq!(max_rainbow_cycle_exact(&g, &lim).unwrap().len(), brute_force_cycle(&g));
        }
        assert!(max_rainbow_cycle_exact(&random_proper_coloring(2, 0).unwrap(), &lim).is_err());
    }

    #[test]
    fn exact_report_claims_bound() {
        let g = random_proper_coloring(9, 4).unwrap();
        let r = max_k_rainbow_path_exact(&g, 1, &SearchLimits::default()).unwrap().into_report(&g, 1).unwrap();
        assert_eq!(r.exhaustive, Some(true));
        assert!(r.meets_bound());
        assert!(r.certificate.is_maximal());
    }
}
