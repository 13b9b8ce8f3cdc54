//! Paths in a colored `K_n` and the structural sets built on them.
//!
//! Positions in this API are 1-based (`p_1 .. p_t`); storage is 0-based.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::bounds::{self, Rational};
use crate::coloring::{ColorId, ColoredGraph};
use crate::error::{Error, Result};

/// An ordered sequence of distinct vertices.
///
/// A `Path` does not borrow its graph; it is validated against one on
/// construction and every operation takes the graph explicitly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path {
    vertices: Vec<usize>,
}

impl Path {
    pub fn new(g: &ColoredGraph, vertices: Vec<usize>) -> Result<Path> {
        if vertices.is_empty() {
            return Err(Error::InvalidPath("a path needs at least one vertex".into()));
        }
        let mut seen = vec![false; g.n()];
        for &v in &vertices {
            if v >= g.n() {
                return Err(Error::InvalidPath(format!("vertex {v} out of range 0..{}", g.n())));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPath(format!("vertex {v} repeated")));
            }
        }
        Ok(Path { vertices })
    }

    pub fn single(v: usize) -> Path {
        Path { vertices: vec![v] }
    }

    pub(crate) fn from_vec_unchecked(vertices: Vec<usize>) -> Path {
        debug_assert!(!vertices.is_empty());
        Path { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.vertices
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        self.vertices[self.vertices.len() - 1]
    }

    /// Vertex at 1-based position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.vertices[i - 1]
    }

    pub fn reversed(&self) -> Path {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Path { vertices }
    }

    pub fn is_hamiltonian(&self, g: &ColoredGraph) -> bool {
        self.len() == g.n()
    }

    /// Edge colors in path order.
    pub fn colors(&self, g: &ColoredGraph) -> Vec<ColorId> {
        self.vertices.windows(2).map(|e| g.color(e[0], e[1])).collect()
    }

    /// Membership mask over `0..n`.
    pub fn membership(&self, n: usize) -> Vec<bool> {
        let mut on = vec![false; n];
        for &v in &self.vertices {
            on[v] = true;
        }
        on
    }

    /// Vertices not on the path, ascending.
    pub fn complement(&self, n: usize) -> Vec<usize> {
        let on = self.membership(n);
        (0..n).filter(|&v| !on[v]).collect()
    }
}

/// Dense per-color edge counts of a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Multiplicity {
    counts: Vec<u32>,
}

impl Multiplicity {
    pub(crate) fn of(g: &ColoredGraph, vertices: &[usize]) -> Multiplicity {
        let mut counts = vec![0; g.palette_len()];
        for e in vertices.windows(2) {
            counts[g.color_index(e[0], e[1])] += 1;
        }
        Multiplicity { counts }
    }

    #[inline]
    pub(crate) fn get(&self, c: usize) -> u32 {
        self.counts[c]
    }

    #[inline]
    pub(crate) fn add(&mut self, c: usize) {
        self.counts[c] += 1;
    }

    #[inline]
    pub(crate) fn remove(&mut self, c: usize) {
        self.counts[c] -= 1;
    }

    pub(crate) fn max(&self) -> u32 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub(crate) fn count_equal(&self, k: u32) -> usize {
        self.counts.iter().filter(|&&m| m == k).count()
    }
}

/// Census of color multiplicities along a path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathColorStats {
    pub k: u32,
    /// Nonzero multiplicities only.
    pub multiplicity: BTreeMap<ColorId, usize>,
    /// `classes[i]` holds the colors used exactly `i` times, for `i` in `0..=k`.
    pub classes: Vec<BTreeSet<ColorId>>,
    /// Colors used more than `k` times.
    pub overflow: BTreeSet<ColorId>,
}

impl PathColorStats {
    pub fn class(&self, i: usize) -> &BTreeSet<ColorId> {
        &self.classes[i]
    }
}

pub fn color_stats(g: &ColoredGraph, path: &Path, k: u32) -> PathColorStats {
    let counts = Multiplicity::of(g, path.vertices());
    let mut classes = vec![BTreeSet::new(); k as usize + 1];
    let mut overflow = BTreeSet::new();
    let mut multiplicity = BTreeMap::new();
    for (i, &c) in g.palette().iter().enumerate() {
        let m = counts.get(i);
        if m > 0 {
            multiplicity.insert(c, m as usize);
        }
        if m > k {
            overflow.insert(c);
        } else {
            classes[m as usize].insert(c);
        }
    }
    PathColorStats { k, multiplicity, classes, overflow }
}

/// Every color appears at most `k` times.
pub fn is_k_rainbow(g: &ColoredGraph, path: &Path, k: u32) -> bool {
    Multiplicity::of(g, path.vertices()).max() <= k
}

fn require_k_rainbow(g: &ColoredGraph, path: &Path, k: u32) -> Result<Multiplicity> {
    let counts = Multiplicity::of(g, path.vertices());
    if counts.max() > k {
        return Err(Error::NotKRainbow { k });
    }
    Ok(counts)
}

/// Vertices joined to `v` by a color the path does not use. Includes vertices
/// on the path.
pub fn new_neighborhood(g: &ColoredGraph, path: &Path, v: usize) -> BTreeSet<usize> {
    let counts = Multiplicity::of(g, path.vertices());
    new_neighbors(g, &counts, v).collect()
}

fn new_neighbors<'a>(
    g: &'a ColoredGraph,
    counts: &'a Multiplicity,
    v: usize,
) -> impl Iterator<Item = usize> + 'a {
    (0..g.n()).filter(move |&u| u != v && counts.get(g.color_index(u, v)) == 0)
}

/// Positions `i` with `p_{i+1}` a new neighbor of `p_1`.
pub fn compute_a(g: &ColoredGraph, path: &Path) -> Result<BTreeSet<usize>> {
    let counts = require_k_rainbow(g, path, 1)?;
    let p = path.vertices();
    let first = p[0];
    Ok((1..p.len())
        .filter(|&i| counts.get(g.color_index(first, p[i])) == 0)
        .collect())
}

/// Positions `i` with `p_{i-1}` a new neighbor of `p_t`.
pub fn compute_b(g: &ColoredGraph, path: &Path) -> Result<BTreeSet<usize>> {
    let counts = require_k_rainbow(g, path, 1)?;
    let p = path.vertices();
    let last = path.last();
    Ok((2..=p.len())
        .filter(|&i| counts.get(g.color_index(last, p[i - 2])) == 0)
        .collect())
}

/// Maps a position on a path of `len` vertices to its position on the reversed path.
pub fn mirror_position(i: usize, len: usize) -> usize {
    len + 1 - i
}

/// Off-path vertices with more than `a` new neighbors off the path.
pub fn compute_r(g: &ColoredGraph, path: &Path, a: usize) -> Result<BTreeSet<usize>> {
    let counts = require_k_rainbow(g, path, 1)?;
    let off = path.complement(g.n());
    Ok(off
        .iter()
        .copied()
        .filter(|&r| {
            off.iter()
                .filter(|&&u| u != r && counts.get(g.color_index(u, r)) == 0)
                .count()
                > a
        })
        .collect())
}

/// `|R(P)| > n - t - 1/epsilon`, evaluated exactly.
pub fn is_nice(g: &ColoredGraph, path: &Path, t: usize, epsilon: Rational, a: usize) -> Result<bool> {
    if epsilon <= Rational::from_integer(0) {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let r = compute_r(g, path, a)?.len();
    Ok(bounds::int(r) > bounds::int(g.n()) - bounds::int(t) - epsilon.recip())
}

/// `(p_i, p_{i-1}, .., p_1, p_{i+1}, .., p_t)`.
pub fn rotate(path: &Path, i: usize) -> Result<Path> {
    let mut p = path.clone();
    rotate_in_place(&mut p.vertices, i)?;
    Ok(p)
}

pub(crate) fn rotate_in_place(vertices: &mut [usize], i: usize) -> Result<()> {
    if i == 0 || i > vertices.len() {
        return Err(Error::PositionOutOfRange { position: i, len: vertices.len() });
    }
    vertices[..i].reverse();
    Ok(())
}

/// Colors `c(p_i, p_{i+1})` whose rotation edge `c(p_1, p_{i+1})` is not in `C_k`.
pub fn compute_c_a(g: &ColoredGraph, path: &Path, k: u32) -> Result<BTreeSet<ColorId>> {
    let counts = require_k_rainbow(g, path, k)?;
    Ok(c_a_indices(g, path.vertices(), &counts, k)
        .into_iter()
        .map(|c| g.palette()[c])
        .collect())
}

fn c_a_indices(g: &ColoredGraph, p: &[usize], counts: &Multiplicity, k: u32) -> BTreeSet<usize> {
    (1..p.len())
        .filter(|&i| counts.get(g.color_index(p[0], p[i])) != k)
        .map(|i| g.color_index(p[i - 1], p[i]))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum End {
    Start,
    End,
}

/// An off-path vertex `vertex` reachable from the given end by an edge of `color`
/// that breaks a maximality condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateWitness {
    pub end: End,
    pub vertex: usize,
    pub color: ColorId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalityCertificate {
    /// `c(p_1, V(P)^c)` is contained in `C_k(P)`.
    pub start_condition: bool,
    /// `c(p_t, V(P)^c)` is contained in `C_k(P) \ C_A(P)`.
    pub end_condition: bool,
    pub c_a: BTreeSet<ColorId>,
    pub witnesses: Vec<CertificateWitness>,
}

impl MaximalityCertificate {
    pub fn is_maximal(&self) -> bool {
        self.start_condition && self.end_condition
    }
}

pub fn maximality_certificate(g: &ColoredGraph, path: &Path, k: u32) -> Result<MaximalityCertificate> {
    let counts = require_k_rainbow(g, path, k)?;
    let p = path.vertices();
    let c_a = c_a_indices(g, p, &counts, k);
    let off = path.complement(g.n());
    let (first, last) = (path.first(), path.last());

    let mut witnesses = Vec::new();
    for &r in &off {
        let c = g.color_index(first, r);
        if counts.get(c) != k {
            witnesses.push(CertificateWitness { end: End::Start, vertex: r, color: g.palette()[c] });
        }
    }
    for &r in &off {
        let c = g.color_index(last, r);
        if counts.get(c) != k || c_a.contains(&c) {
            witnesses.push(CertificateWitness { end: End::End, vertex: r, color: g.palette()[c] });
        }
    }
    Ok(MaximalityCertificate {
        start_condition: !witnesses.iter().any(|w| w.end == End::Start),
        end_condition: !witnesses.iter().any(|w| w.end == End::End),
        c_a: c_a.into_iter().map(|c| g.palette()[c]).collect(),
        witnesses,
    })
}

/// Number of positions with no other position at most `k` steps after them.
pub fn count_without_k_successor(positions: &BTreeSet<usize>, k: u32, t: usize) -> Result<usize> {
    if let Some(&bad) = positions.iter().find(|&&i| i == 0 || i > t) {
        return Err(Error::PositionOutOfRange { position: bad, len: t });
    }
    let sorted: Vec<usize> = positions.iter().copied().collect();
    Ok(sorted
        .iter()
        .enumerate()
        .filter(|&(idx, &i)| sorted.get(idx + 1).is_none_or(|&j| j - i > k as usize))
        .count())
}

/// Wire form of a path: the colors are derived and ignored on input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathRecord {
    pub vertices: Vec<usize>,
    #[serde(default = "one")]
    pub k: u32,
    #[serde(default, skip_deserializing)]
    pub colors: Vec<ColorId>,
}

fn one() -> u32 {
    1
}

impl PathRecord {
    pub fn new(g: &ColoredGraph, path: &Path, k: u32) -> PathRecord {
        PathRecord { vertices: path.vertices().to_vec(), k, colors: path.colors(g) }
    }

    pub fn to_path(&self, g: &ColoredGraph) -> Result<Path> {
        Path::new(g, self.vertices.clone())
    }
}
