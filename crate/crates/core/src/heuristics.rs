//! Constructive solvers with proven length guarantees.
//!
//! Every solver returns a [`SolveReport`] whose trace replays from the
//! report's initial path to its final path. Each proven inequality is
//! re-checked on the output; a failure surfaces as
//! [`Error::BoundViolated`], which can only mean a bug.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, Rational, RationalRepr};
use crate::coloring::{ColorId, ColoredGraph};
use crate::error::{Error, Result};
use crate::paths::{self, MaximalityCertificate, Multiplicity, Path};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Greedy,
    Maximalize,
    Ladder,
    Naive,
    Exact,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::Greedy => "greedy",
            Method::Maximalize => "maximalize",
            Method::Ladder => "ladder",
            Method::Naive => "naive",
            Method::Exact => "exact",
        };
        f.write_str(s)
    }
}

/// One step of a solver run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Move {
    ExtendStart(usize),
    ExtendEnd(usize),
    /// Rotation at a 1-based position.
    Rotate(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub method: Method,
    pub k: u32,
    pub initial: Path,
    pub path: Path,
    pub certificate: MaximalityCertificate,
    pub c_k_size: usize,
    pub trace: Vec<Move>,
    pub guaranteed_bound: Rational,
    /// Only set by the exact oracles.
    pub exhaustive: Option<bool>,
}

impl SolveReport {
    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn meets_bound(&self) -> bool {
        bounds::meets(self.path.len(), &self.guaranteed_bound)
    }

    pub(crate) fn build(
        g: &ColoredGraph,
        method: Method,
        k: u32,
        initial: Path,
        path: Path,
        trace: Vec<Move>,
        guaranteed_bound: Rational,
    ) -> Result<SolveReport> {
        let certificate = paths::maximality_certificate(g, &path, k)?;
        let c_k_size = Multiplicity::of(g, path.vertices()).count_equal(k);
        Ok(SolveReport {
            method,
            k,
            initial,
            path,
            certificate,
            c_k_size,
            trace,
            guaranteed_bound,
            exhaustive: None,
        })
    }

    pub fn to_record(&self, g: &ColoredGraph) -> ReportRecord {
        ReportRecord {
            method: self.method,
            k: self.k,
            vertices: self.path.vertices().to_vec(),
            colors: self.path.colors(g),
            length: self.path.len(),
            c_k_size: self.c_k_size,
            certificate: CertificateRecord {
                start: self.certificate.start_condition,
                end: self.certificate.end_condition,
                c_a: self.certificate.c_a.iter().copied().collect(),
            },
            bound: self.guaranteed_bound.into(),
            initial: self.initial.vertices().to_vec(),
            trace: self.trace.clone(),
            exhaustive: self.exhaustive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub start: bool,
    pub end: bool,
    pub c_a: Vec<ColorId>,
}

/// JSON form of a [`SolveReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub method: Method,
    pub k: u32,
    pub vertices: Vec<usize>,
    pub colors: Vec<ColorId>,
    pub length: usize,
    pub c_k_size: usize,
    pub certificate: CertificateRecord,
    pub bound: RationalRepr,
    pub initial: Vec<usize>,
    pub trace: Vec<Move>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exhaustive: Option<bool>,
}

/// Applies `trace` to `initial`.
pub fn replay(g: &ColoredGraph, initial: &Path, trace: &[Move]) -> Result<Path> {
    let mut v = initial.vertices().to_vec();
    for m in trace {
        match *m {
            Move::ExtendStart(x) => v.insert(0, x),
            Move::ExtendEnd(x) => v.push(x),
            Move::Rotate(i) => paths::rotate_in_place(&mut v, i)?,
        }
    }
    Path::new(g, v)
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 || k > bounds::MAX_K {
        return Err(Error::InvalidArgument(format!("k must be in 1..={}, got {k}", bounds::MAX_K)));
    }
    Ok(())
}

fn check_vertex(g: &ColoredGraph, v: usize) -> Result<()> {
    if v >= g.n() {
        return Err(Error::InvalidArgument(format!("vertex {v} out of range 0..{}", g.n())));
    }
    Ok(())
}

fn violated(bound: &'static str, detail: String) -> Error {
    Error::BoundViolated { bound, detail }
}

/// Mutable path with incremental color counts.
struct Walk<'g> {
    g: &'g ColoredGraph,
    vertices: Vec<usize>,
    on: Vec<bool>,
    counts: Multiplicity,
    trace: Vec<Move>,
}

impl<'g> Walk<'g> {
    fn new(g: &'g ColoredGraph, path: &Path) -> Walk<'g> {
        Walk {
            g,
            vertices: path.vertices().to_vec(),
            on: path.membership(g.n()),
            counts: Multiplicity::of(g, path.vertices()),
            trace: Vec::new(),
        }
    }

    fn first(&self) -> usize {
        self.vertices[0]
    }

    fn last(&self) -> usize {
        self.vertices[self.vertices.len() - 1]
    }

    fn color(&self, u: usize, v: usize) -> usize {
        self.g.color_index(u, v)
    }

    /// Lowest off-path vertex joined to `from` by a color used fewer than `k` times.
    fn open_neighbor(&self, from: usize, k: u32) -> Option<usize> {
        (0..self.g.n()).find(|&r| !self.on[r] && self.counts.get(self.color(from, r)) < k)
    }

    fn extend_start(&mut self, r: usize) {
        self.counts.add(self.color(self.first(), r));
        self.on[r] = true;
        self.vertices.insert(0, r);
        self.trace.push(Move::ExtendStart(r));
    }

    fn extend_end(&mut self, r: usize) {
        self.counts.add(self.color(self.last(), r));
        self.on[r] = true;
        self.vertices.push(r);
        self.trace.push(Move::ExtendEnd(r));
    }

    /// Rotation at 1-based position `i < t`.
    fn rotate(&mut self, i: usize) {
        let (pi, next) = (self.vertices[i - 1], self.vertices[i]);
        self.counts.remove(self.color(pi, next));
        self.counts.add(self.color(self.first(), next));
        self.vertices[..i].reverse();
        self.trace.push(Move::Rotate(i));
    }

    /// Rotation position and vertex for the third extension case: a position
    /// `i` whose edge color is saturated, matches the color from the end to
    /// some off-path `r`, and whose rotation edge is not saturated.
    fn rotation_extension(&self, k: u32) -> Option<(usize, usize)> {
        let last = self.last();
        let mut reach = vec![usize::MAX; self.g.palette_len()];
        for r in (0..self.g.n()).rev().filter(|&r| !self.on[r]) {
            reach[self.color(last, r)] = r;
        }
        let first = self.first();
        let v = &self.vertices;
        (1..v.len()).find_map(|i| {
            let edge = self.color(v[i - 1], v[i]);
            let r = reach[edge];
            (r != usize::MAX && self.counts.get(edge) == k && self.counts.get(self.color(first, v[i])) < k)
                .then_some((i, r))
        })
    }

    fn path(&self) -> Path {
        Path::from_vec_unchecked(self.vertices.clone())
    }
}

/// Extends a path from `start` at its far end only, always taking the lowest
/// off-path vertex whose edge color is still below multiplicity `k`.
pub fn greedy_extend(g: &ColoredGraph, start: usize, k: u32) -> Result<SolveReport> {
    check_k(k)?;
    check_vertex(g, start)?;
    let initial = Path::single(start);
    let mut w = Walk::new(g, &initial);
    while let Some(r) = w.open_neighbor(w.last(), k) {
        w.extend_end(r);
    }
    let bound = if k == 1 { bounds::half(g.n()) } else { bounds::int(1) };
    let path = w.path();
    if !bounds::meets(path.len(), &bound) {
        return Err(violated("half", format!("greedy from {start} reached {} vertices", path.len())));
    }
    SolveReport::build(g, Method::Greedy, k, initial, path, w.trace, bound)
}

/// Grows `initial` into a maximal k-rainbow path by extension at either end
/// and rotation followed by extension, in that order of preference.
///
/// On return the path satisfies both maximality conditions, and
/// `|C_k| >= (k+1)(n - t)`. If `initial` was `(k-1)`-rainbow, additionally
/// `|C_k| <= t - |initial|`. For `k = 1` the path has at least `(2n+1)/3`
/// vertices.
pub fn maximalize(g: &ColoredGraph, initial: &Path, k: u32) -> Result<SolveReport> {
    check_k(k)?;
    if !paths::is_k_rainbow(g, initial, k) {
        return Err(Error::NotKRainbow { k });
    }
    let n = g.n();
    let base_len = initial.len();
    let from_lower = paths::is_k_rainbow(g, initial, k - 1);

    let mut w = Walk::new(g, initial);
    loop {
        if let Some(r) = w.open_neighbor(w.first(), k) {
            w.extend_start(r);
        } else if let Some(r) = w.open_neighbor(w.last(), k) {
            w.extend_end(r);
        } else if let Some((i, r)) = w.rotation_extension(k) {
            w.rotate(i);
            debug_assert_eq!(w.counts.get(w.color(w.last(), r)), k - 1);
            w.extend_end(r);
        } else {
            break;
        }
    }

    let path = w.path();
    let t = path.len();
    let mut bound = bounds::maximal(n, k);
    if from_lower {
        bound = bound.max(bounds::ladder_step(n, k, base_len));
    }
    let report = SolveReport::build(g, Method::Maximalize, k, initial.clone(), path, w.trace, bound)?;

    if !report.certificate.is_maximal() {
        return Err(violated("maximality", format!("{:?}", report.certificate.witnesses)));
    }
    let c_k = report.c_k_size as i128;
    if c_k < bounds::lemma2(n, k, t) {
        return Err(violated("lemma2", format!("|C_{k}| = {c_k} < (k+1)(n-t) with n={n}, t={t}")));
    }
    if from_lower && report.c_k_size > t - base_len {
        return Err(violated("lemma1", format!("|C_{k}| = {c_k} > {t} - {base_len}")));
    }
    if k == 1 && !bounds::meets(t, &bounds::two_thirds(n)) {
        return Err(violated("gm", format!("t = {t} < (2n+1)/3 with n={n}")));
    }
    if !report.meets_bound() {
        return Err(violated("maximal", format!("t = {t} below {}", report.guaranteed_bound)));
    }
    Ok(report)
}

/// Options for [`maximalize_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MaximalizeOptions {
    /// Extra runs from seeded random single-vertex starts. Zero disables.
    pub restarts: usize,
    pub seed: u64,
}

/// [`maximalize`] from `initial`, then from `restarts` random start
/// vertices; keeps the longest result (earliest on ties).
pub fn maximalize_with(
    g: &ColoredGraph,
    initial: &Path,
    k: u32,
    options: MaximalizeOptions,
) -> Result<SolveReport> {
    let mut best = maximalize(g, initial, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    for _ in 0..options.restarts {
        let start = rng.gen_range(0..g.n());
        let report = maximalize(g, &Path::single(start), k)?;
        if report.len() > best.len() {
            best = report;
        }
    }
    Ok(best)
}

/// The longest greedy rainbow path over all start vertices, lowest start on ties.
pub fn best_greedy(g: &ColoredGraph) -> Result<SolveReport> {
    let mut best: Option<SolveReport> = None;
    for start in 0..g.n() {
        let report = greedy_extend(g, start, 1)?;
        if best.as_ref().is_none_or(|b| report.len() > b.len()) {
            best = Some(report);
        }
    }
    best.ok_or_else(|| Error::InvalidArgument("graph has no vertices".into()))
}

/// Maximal k-rainbow paths for `k = 1..=k_max`, each grown from the previous.
/// The first step starts from [`best_greedy`].
///
/// Checks `t_k >= (1 - 2/(k+2)!) n` and `t_k >= t_{k-1}` at every step.
pub fn ladder(g: &ColoredGraph, k_max: u32) -> Result<Vec<SolveReport>> {
    check_k(k_max)?;
    let n = g.n();
    let mut reports: Vec<SolveReport> = Vec::with_capacity(k_max as usize);
    let mut seed = best_greedy(g)?.path;
    for k in 1..=k_max {
        let mut report = maximalize(g, &seed, k)?;
        report.method = Method::Ladder;
        report.guaranteed_bound = report.guaranteed_bound.max(bounds::kfact(n, k));
        let t = report.len();
        if !bounds::meets(t, &bounds::kfact(n, k)) {
            return Err(violated("kfact", format!("t_{k} = {t} < (1 - 2/{}!) * {n}", k + 2)));
        }
        if t < seed.len() {
            return Err(violated("ladder", format!("t_{k} = {t} < t_{} = {}", k - 1, seed.len())));
        }
        seed = report.path.clone();
        reports.push(report);
    }
    Ok(reports)
}

/// Builds a k-rainbow path from up to `k` rainbow segments. Each segment is a
/// greedy rainbow path on the vertices not yet used plus the previous
/// segment's endpoint; colors may repeat across segments.
pub fn naive_recursive(g: &ColoredGraph, k: u32, start: usize) -> Result<SolveReport> {
    check_k(k)?;
    check_vertex(g, start)?;
    let n = g.n();
    let initial = Path::single(start);
    let mut w = Walk::new(g, &initial);
    for _ in 0..k {
        if w.vertices.len() == n {
            break;
        }
        let mut local = vec![false; g.palette_len()];
        while let Some(r) = (0..n).find(|&r| !w.on[r] && !local[w.color(w.last(), r)]) {
            local[w.color(w.last(), r)] = true;
            w.extend_end(r);
        }
    }
    let path = w.path();
    let t = path.len();
    if !paths::is_k_rainbow(g, &path, k) {
        return Err(violated("naive", format!("path is not {k}-rainbow")));
    }
    if !bounds::meets(t, &bounds::naive(n, k)) {
        return Err(violated("naive", format!("t = {t} < n - n/2^{k} with n={n}")));
    }
    let bound = bounds::naive_telescoped(n, k);
    if !bounds::meets(t, &bound) {
        return Err(violated("naive", format!("t = {t} < n - (n-1)/2^{k} with n={n}")));
    }
    SolveReport::build(g, Method::Naive, k, initial, path, w.trace, bound)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonianCycle {
    /// Cycle order; the closing edge returns to the first vertex.
    pub vertices: Vec<usize>,
    pub distinct_colors: usize,
}

/// Appends the off-path vertices in ascending order and closes the cycle.
/// The result uses at least as many colors as the rainbow path has edges.
pub fn complete_to_hamiltonian_cycle(g: &ColoredGraph, path: &Path) -> Result<HamiltonianCycle> {
    if !paths::is_k_rainbow(g, path, 1) {
        return Err(Error::NotKRainbow { k: 1 });
    }
    let mut vertices = path.vertices().to_vec();
    vertices.extend(path.complement(g.n()));
    let mut seen = vec![false; g.palette_len()];
    let len = vertices.len();
    if len >= 2 {
        for i in 0..len {
            seen[g.color_index(vertices[i], vertices[(i + 1) % len])] = true;
        }
    }
    let distinct_colors = seen.iter().filter(|&&s| s).count();
    if distinct_colors < path.edge_count() {
        return Err(violated(
            "cycle",
            format!("{distinct_colors} colors on cycle < {} path edges", path.edge_count()),
        ));
    }
    Ok(HamiltonianCycle { vertices, distinct_colors })
}
