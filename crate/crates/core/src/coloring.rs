//! Proper edge colorings of the complete graph `K_n`.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Generators refuse to build graphs above this many vertices unless a cap is given.
pub const DEFAULT_SIZE_CAP: usize = 4096;

const NO_COLOR: u32 = u32::MAX;

/// A color label. Always at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorId(u32);

impl ColorId {
    pub fn new(value: u32) -> Option<ColorId> {
        (value >= 1).then_some(ColorId(value))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Witness that a color matrix is not a proper coloring of `K_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `color[u][v] != color[v][u]`.
    Asymmetric { u: usize, v: usize },
    /// Edge `{u, v}` carries no valid color (zero).
    Uncolored { u: usize, v: usize },
    /// Edges `{u, v}` and `{u, w}` share a color.
    Coincident { u: usize, v: usize, w: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Asymmetric { u, v } => write!(f, "color({u},{v}) differs from color({v},{u})"),
            Violation::Uncolored { u, v } => write!(f, "edge ({u},{v}) has no color"),
            Violation::Coincident { u, v, w } => {
                write!(f, "edges ({u},{v}) and ({u},{w}) share a color")
            }
        }
    }
}

/// Raw `n x n` color matrix, not yet known to be a proper coloring.
/// The diagonal is ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorMatrix {
    n: usize,
    cells: Vec<u32>,
}

impl ColorMatrix {
    pub fn new(n: usize) -> ColorMatrix {
        ColorMatrix { n, cells: vec![0; n * n] }
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<ColorMatrix> {
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::InvalidArgument(format!("row {bad} does not have {n} entries")));
        }
        Ok(ColorMatrix { n, cells: rows.concat() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.cells[u * self.n + v]
    }

    pub fn set(&mut self, u: usize, v: usize, c: u32) {
        self.cells[u * self.n + v] = c;
    }

    /// Sets both `color[u][v]` and `color[v][u]`.
    pub fn set_edge(&mut self, u: usize, v: usize, c: u32) {
        self.set(u, v, c);
        self.set(v, u, c);
    }

    /// Checks symmetry, that every edge is colored, and properness. Returns
    /// the first witness found scanning rows in increasing order.
    pub fn validate(&self) -> Result<(), Violation> {
        let n = self.n;
        for u in 0..n {
            for v in u + 1..n {
                if self.get(u, v) != self.get(v, u) {
                    return Err(Violation::Asymmetric { u, v });
                }
                if self.get(u, v) == 0 {
                    return Err(Violation::Uncolored { u, v });
                }
            }
        }
        let mut seen: BTreeMap<u32, usize> = BTreeMap::new();
        for u in 0..n {
            seen.clear();
            for v in (0..n).filter(|&v| v != u) {
                if let Some(&first) = seen.get(&self.get(u, v)) {
                    return Err(Violation::Coincident { u, v: first, w: v });
                }
                seen.insert(self.get(u, v), v);
            }
        }
        Ok(())
    }
}

/// Free-function form of [`ColorMatrix::validate`].
pub fn validate_proper(matrix: &ColorMatrix) -> Result<(), Violation> {
    matrix.validate()
}

/// A proper edge coloring of `K_n`. Immutable once built.
///
/// Colors are stored as dense indices into the sorted palette so that
/// multiplicity counters can be plain arrays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    n: usize,
    dense: Vec<u32>,
    palette: Vec<ColorId>,
}

impl ColoredGraph {
    pub fn new(matrix: &ColorMatrix) -> Result<ColoredGraph> {
        matrix.validate().map_err(Error::Improper)?;
        let n = matrix.n;
        let mut index: BTreeMap<u32, u32> = BTreeMap::new();
        for u in 0..n {
            for v in u + 1..n {
                index.insert(matrix.get(u, v), 0);
            }
        }
        let palette: Vec<ColorId> = index.keys().map(|&c| ColorId(c)).collect();
        for (i, slot) in index.values_mut().enumerate() {
            *slot = i as u32;
        }
        let mut dense = vec![NO_COLOR; n * n];
        for u in 0..n {
            for v in (0..n).filter(|&v| v != u) {
                dense[u * n + v] = index[&matrix.get(u, v)];
            }
        }
        Ok(ColoredGraph { n, dense, palette })
    }

    /// Builds `K_n` with `color(u, v) = f(u, v)` for `u < v`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> u32) -> Result<ColoredGraph> {
        let mut m = ColorMatrix::new(n);
        for u in 0..n {
            for v in u + 1..n {
                m.set_edge(u, v, f(u, v));
            }
        }
        ColoredGraph::new(&m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Color of edge `{u, v}`. `u` and `v` must differ.
    pub fn color(&self, u: usize, v: usize) -> ColorId {
        self.palette[self.color_index(u, v)]
    }

    /// Dense palette index of the color of edge `{u, v}`.
    #[inline]
    pub fn color_index(&self, u: usize, v: usize) -> usize {
        debug_assert!(u != v);
        self.dense[u * self.n + v] as usize
    }

    /// Sorted palette.
    pub fn palette(&self) -> &[ColorId] {
        &self.palette
    }

    pub fn palette_len(&self) -> usize {
        self.palette.len()
    }

    pub fn index_of(&self, color: ColorId) -> Option<usize> {
        self.palette.binary_search(&color).ok()
    }

    pub fn to_matrix(&self) -> ColorMatrix {
        let mut m = ColorMatrix::new(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                m.set_edge(u, v, self.color(u, v).get());
            }
        }
        m
    }

    /// Applies a color relabelling; `map` must be injective on the palette.
    pub fn map_colors(&self, mut map: impl FnMut(ColorId) -> u32) -> Result<ColoredGraph> {
        ColoredGraph::from_fn(self.n, |u, v| map(self.color(u, v)))
    }

    /// Relabels the palette to `1..=|palette|` preserving order. Returns the
    /// relabelled graph and `(old, new)` pairs.
    pub fn relabel_palette(&self) -> (ColoredGraph, Vec<(ColorId, ColorId)>) {
        let mapping = self
            .palette
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, ColorId(i as u32 + 1)))
            .collect();
        let g = ColoredGraph {
            n: self.n,
            dense: self.dense.clone(),
            palette: (1..=self.palette.len() as u32).map(ColorId).collect(),
        };
        (g, mapping)
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::SizeCap { n, cap })
    } else {
        Ok(())
    }
}

/// XOR coloring of `K_{2^m}`: vertices are the elements of `(Z/2)^m` and an
/// edge gets the group sum of its ends.
pub fn mm_coloring(m: u32) -> Result<ColoredGraph> {
    mm_coloring_with_cap(m, DEFAULT_SIZE_CAP)
}

pub fn mm_coloring_with_cap(m: u32, cap: usize) -> Result<ColoredGraph> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    if m >= usize::BITS - 1 {
        return Err(Error::SizeCap { n: usize::MAX, cap });
    }
    let n = 1usize << m;
    check_cap(n, cap)?;
    ColoredGraph::from_fn(n, |u, v| (u ^ v) as u32)
}

/// Circle-method 1-factorization of `K_n` for even `n`: `n - 1` colors, each a
/// perfect matching.
pub fn round_robin_coloring(n: usize) -> Result<ColoredGraph> {
    round_robin_coloring_with_cap(n, DEFAULT_SIZE_CAP)
}

pub fn round_robin_coloring_with_cap(n: usize, cap: usize) -> Result<ColoredGraph> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "round-robin coloring needs an even n >= 2, got {n}"
        )));
    }
    check_cap(n, cap)?;
    let m = n - 1;
    let hub = n - 1;
    // round r pairs i, j with i + j = 2r (mod m); m is odd so 2 is invertible
    let half_inv = m.div_ceil(2);
    ColoredGraph::from_fn(n, |u, v| {
        let round = if v == hub { u } else { ((u + v) % m) * half_inv % m };
        round as u32 + 1
    })
}

/// Seeded proper coloring of `K_n`: a round-robin factorization with shuffled
/// vertices and colors. For odd `n`, built on `n + 1` vertices with the last
/// one removed, giving `n` colors.
///
/// This is not a uniform sample over proper colorings.
pub fn random_proper_coloring(n: usize, seed: u64) -> Result<ColoredGraph> {
    random_proper_coloring_with_cap(n, seed, DEFAULT_SIZE_CAP)
}

pub fn random_proper_coloring_with_cap(n: usize, seed: u64, cap: usize) -> Result<ColoredGraph> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("random coloring needs n >= 2, got {n}")));
    }
    check_cap(n, cap)?;
    let even = n + n % 2;
    let base = round_robin_coloring_with_cap(even, cap.max(even))?;
    let colors = even - 1;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vertex_perm: Vec<usize> = (0..n).collect();
    vertex_perm.shuffle(&mut rng);
    let mut color_perm: Vec<u32> = (1..=colors as u32).collect();
    color_perm.shuffle(&mut rng);

    let mut m = ColorMatrix::new(n);
    for u in 0..n {
        for v in u + 1..n {
            let c = base.color(u, v).get();
            m.set_edge(vertex_perm[u], vertex_perm[v], color_perm[c as usize - 1]);
        }
    }
    ColoredGraph::new(&m)
}

/// Canonical text form: `n <N>` then one `u v c` line per edge, `u < v`,
/// sorted, LF endings.
pub fn write_coloring(g: &ColoredGraph) -> String {
    let n = g.n();
    let mut out = String::with_capacity(16 + n * n * 4);
    let _ = writeln!(out, "n {n}");
    for u in 0..n {
        for v in u + 1..n {
            let _ = writeln!(out, "{u} {v} {}", g.color(u, v));
        }
    }
    out
}

pub fn read_coloring(text: &str) -> Result<ColoredGraph> {
    read_coloring_with_cap(text, DEFAULT_SIZE_CAP)
}

/// Parses a coloring file. Edge lines may appear in any order but every edge
/// must appear exactly once.
pub fn read_coloring_with_cap(text: &str, cap: usize) -> Result<ColoredGraph> {
    let parse_err = |line: usize, message: String| Error::Parse { line, message };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line_no, header) = lines.next().ok_or_else(|| parse_err(1, "empty input".into()))?;
    let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["n", count] => count
            .parse::<usize>()
            .map_err(|e| parse_err(line_no, format!("bad vertex count: {e}")))?,
        _ => return Err(parse_err(line_no, "expected header `n <N>`".into())),
    };
    if n == 0 {
        return Err(parse_err(line_no, "vertex count must be at least 1".into()));
    }
    check_cap(n, cap)?;

    let mut m = ColorMatrix::new(n);
    let mut seen = 0usize;
    let mut last_line = line_no;
    for (line_no, line) in lines {
        last_line = line_no;
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [u, v, c] = fields.as_slice() else {
            return Err(parse_err(line_no, "expected `u v c`".into()));
        };
        let num = |s: &str, what: &str| {
            s.parse::<u64>()
                .map_err(|e| parse_err(line_no, format!("bad {what} `{s}`: {e}")))
        };
        let (u, v, c) = (num(u, "vertex")?, num(v, "vertex")?, num(c, "color")?);
        if u >= n as u64 || v >= n as u64 {
            return Err(parse_err(line_no, format!("vertex out of range 0..{n}")));
        }
        if u == v {
            return Err(parse_err(line_no, "loop edge".into()));
        }
        if c == 0 || c >= NO_COLOR as u64 {
            return Err(parse_err(line_no, format!("color {c} out of range")));
        }
        let (u, v) = (u.min(v) as usize, u.max(v) as usize);
        if m.get(u, v) != 0 {
            return Err(parse_err(line_no, format!("duplicate edge ({u},{v})")));
        }
        m.set_edge(u, v, c as u32);
        seen += 1;
    }
    if seen != n * (n - 1) / 2 {
        return Err(parse_err(last_line, "incomplete edge list".into()));
    }
    ColoredGraph::new(&m)
}
