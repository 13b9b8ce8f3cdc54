//! Latin squares, transversals, and their correspondence with colorings of
//! `K_n` that use exactly `n - 1` colors.

use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::coloring::{ColorMatrix, ColoredGraph};
use crate::error::{Error, Result};
use crate::exact::{Budget, SearchLimits};

/// Default order cap for exhaustive transversal searches.
pub const DEFAULT_ORDER_CAP: usize = 9;

pub fn default_limits() -> SearchLimits {
    SearchLimits::with_max_n(DEFAULT_ORDER_CAP)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatinSquare {
    order: usize,
    grid: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Line {
    Row(usize),
    Column(usize),
}

/// First defect found scanning cells in row-major order. Indices are 0-based;
/// the `Display` form is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LatinViolation {
    Repeated { line: Line, value: u32 },
    OutOfRange { row: usize, column: usize, value: u32 },
}

impl fmt::Display for LatinViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LatinViolation::Repeated { line: Line::Row(i), value } => {
                write!(f, "row {} repeats value {value}", i + 1)
            }
            LatinViolation::Repeated { line: Line::Column(j), value } => {
                write!(f, "column {} repeats value {value}", j + 1)
            }
            LatinViolation::OutOfRange { row, column, value } => {
                write!(f, "cell ({}, {}) holds {value}, outside 1..=order", row + 1, column + 1)
            }
        }
    }
}

impl LatinSquare {
    /// Accepts any square grid; use [`LatinSquare::validate`] for the Latin property.
    pub fn from_rows(grid: Vec<Vec<u32>>) -> Result<LatinSquare> {
        let order = grid.len();
        if order == 0 {
            return Err(Error::InvalidArgument("a Latin square needs order >= 1".into()));
        }
        if let Some(i) = grid.iter().position(|r| r.len() != order) {
            return Err(Error::InvalidArgument(format!("row {i} does not have {order} entries")));
        }
        Ok(LatinSquare { order, grid })
    }

    /// Like [`LatinSquare::from_rows`] but rejects non-Latin grids.
    pub fn new(grid: Vec<Vec<u32>>) -> Result<LatinSquare> {
        let sq = LatinSquare::from_rows(grid)?;
        sq.validate().map_err(|v| Error::NotLatin(v.to_string()))?;
        Ok(sq)
    }

    /// `L[i][j] = ((i + j) mod n) + 1`.
    pub fn cyclic(order: usize) -> Result<LatinSquare> {
        LatinSquare::from_rows(
            (0..order)
                .map(|i| (0..order).map(|j| ((i + j) % order) as u32 + 1).collect())
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, row: usize, column: usize) -> u32 {
        self.grid[row][column]
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.grid
    }

    pub fn validate(&self) -> Result<(), LatinViolation> {
        validate_latin(self)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.order).all(|i| (0..i).all(|j| self.grid[i][j] == self.grid[j][i]))
    }
}

pub fn validate_latin(sq: &LatinSquare) -> Result<(), LatinViolation> {
    let n = sq.order;
    let mut in_row = vec![vec![false; n + 1]; n];
    let mut in_col = vec![vec![false; n + 1]; n];
    for (i, row) in sq.grid.iter().enumerate() {
        for (j, &value) in row.iter().enumerate() {
            if value == 0 || value as usize > n {
                return Err(LatinViolation::OutOfRange { row: i, column: j, value });
            }
            if std::mem::replace(&mut in_row[i][value as usize], true) {
                return Err(LatinViolation::Repeated { line: Line::Row(i), value });
            }
            if std::mem::replace(&mut in_col[j][value as usize], true) {
                return Err(LatinViolation::Repeated { line: Line::Column(j), value });
            }
        }
    }
    Ok(())
}

/// `A[i][i] = n` and `A[i][j] = c(v_i, v_j)`. The palette must be exactly
/// `1..=n-1`; relabel with [`ColoredGraph::relabel_palette`] first if needed.
pub fn coloring_to_latin(g: &ColoredGraph) -> Result<LatinSquare> {
    let n = g.n();
    let dense = g.palette().iter().enumerate().all(|(i, c)| c.get() as usize == i + 1);
    if g.palette_len() != n - 1 || !dense {
        return Err(Error::PaletteSize { expected: n - 1, found: g.palette_len() });
    }
    let grid = (0..n)
        .map(|i| (0..n).map(|j| if i == j { n as u32 } else { g.color(i, j).get() }).collect())
        .collect();
    let sq = LatinSquare::from_rows(grid)?;
    debug_assert!(sq.validate().is_ok());
    Ok(sq)
}

fn check_in_image(sq: &LatinSquare) -> Result<()> {
    let n = sq.order;
    for i in 0..n {
        if sq.grid[i][i] != n as u32 {
            return Err(Error::NotInImage(format!("diagonal cell ({i}, {i}) is not {n}")));
        }
        for j in 0..i {
            if sq.grid[i][j] != sq.grid[j][i] {
                return Err(Error::NotInImage(format!("cells ({i}, {j}) and ({j}, {i}) differ")));
            }
        }
    }
    Ok(())
}

/// Inverse of [`coloring_to_latin`] on its image.
pub fn latin_to_coloring(sq: &LatinSquare) -> Result<ColoredGraph> {
    check_in_image(sq)?;
    let mut m = ColorMatrix::new(sq.order);
    for i in 0..sq.order {
        for j in i + 1..sq.order {
            m.set_edge(i, j, sq.grid[i][j]);
        }
    }
    ColoredGraph::new(&m)
}

/// A set of cells, at most one per row and column, with distinct values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transversal {
    /// `(row, column)` pairs.
    pub cells: Vec<(usize, usize)>,
}

impl Transversal {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn values(&self, sq: &LatinSquare) -> Vec<u32> {
        self.cells.iter().map(|&(r, c)| sq.get(r, c)).collect()
    }

    /// Checks distinct rows, columns and values; with `complete`, also that
    /// there are `order` cells.
    pub fn check(&self, sq: &LatinSquare, complete: bool) -> Result<()> {
        let n = sq.order;
        if complete && self.cells.len() != n {
            return Err(Error::NotTransversal(format!("{} cells, need {n}", self.cells.len())));
        }
        let mut rows = vec![false; n];
        let mut cols = vec![false; n];
        let mut vals = vec![false; n + 1];
        for &(r, c) in &self.cells {
            if r >= n || c >= n {
                return Err(Error::NotTransversal(format!("cell ({r}, {c}) outside the square")));
            }
            if std::mem::replace(&mut rows[r], true) {
                return Err(Error::NotTransversal(format!("row {r} used twice")));
            }
            if std::mem::replace(&mut cols[c], true) {
                return Err(Error::NotTransversal(format!("column {c} used twice")));
            }
            let v = sq.get(r, c) as usize;
            if v > n || std::mem::replace(&mut vals[v], true) {
                return Err(Error::NotTransversal(format!("value {v} repeated or out of range")));
            }
        }
        Ok(())
    }

    pub fn to_record(&self, sq: &LatinSquare) -> TransversalRecord {
        TransversalRecord {
            cells: self.cells.iter().map(|&(r, c)| [r, c]).collect(),
            values: self.values(sq),
        }
    }
}

/// JSON form: `{"cells": [[r, c], ...], "values": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalRecord {
    pub cells: Vec<[usize; 2]>,
    pub values: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Search<T> {
    Found(T),
    NotFound,
    BudgetExhausted,
}

impl<T> Search<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Search::Found(t) => Some(t),
            _ => None,
        }
    }
}

struct TransversalSearch<'a> {
    sq: &'a LatinSquare,
    budget: &'a Budget,
    row_used: Vec<bool>,
    value_used: Vec<bool>,
    /// `rows[j]` is the row chosen for column `j`, or `usize::MAX` when skipped.
    rows: Vec<usize>,
}

impl<'a> TransversalSearch<'a> {
    fn new(sq: &'a LatinSquare, budget: &'a Budget) -> TransversalSearch<'a> {
        let n = sq.order;
        TransversalSearch {
            sq,
            budget,
            row_used: vec![false; n],
            value_used: vec![false; n + 1],
            rows: Vec::with_capacity(n),
        }
    }

    fn cells(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .filter(|&(_, &r)| r != usize::MAX)
            .map(|(c, &r)| (r, c))
            .collect()
    }

    /// Visits complete transversals column by column, rows ascending. The
    /// visitor returns false to stop. Returns false if stopped or out of budget.
    fn complete(&mut self, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if !self.budget.tick() {
            return false;
        }
        let col = self.rows.len();
        if col == self.sq.order {
            return visit(&self.rows);
        }
        for row in 0..self.sq.order {
            let v = self.sq.get(row, col) as usize;
            if self.row_used[row] || v > self.sq.order || self.value_used[v] {
                continue;
            }
            self.row_used[row] = true;
            self.value_used[v] = true;
            self.rows.push(row);
            let go_on = self.complete(visit);
            self.rows.pop();
            self.value_used[v] = false;
            self.row_used[row] = false;
            if !go_on {
                return false;
            }
        }
        true
    }

    /// Branch and bound for the largest partial transversal.
    fn partial(&mut self, size: usize, best: &mut Vec<(usize, usize)>) -> bool {
        if !self.budget.tick() {
            return false;
        }
        let n = self.sq.order;
        let col = self.rows.len();
        if size > best.len() {
            *best = self.cells();
        }
        if col == n || best.len() == n || size + (n - col) <= best.len() {
            return true;
        }
        for row in 0..n {
            let v = self.sq.get(row, col) as usize;
            if self.row_used[row] || v > n || self.value_used[v] {
                continue;
            }
            self.row_used[row] = true;
            self.value_used[v] = true;
            self.rows.push(row);
            let go_on = self.partial(size + 1, best);
            self.rows.pop();
            self.value_used[v] = false;
            self.row_used[row] = false;
            if !go_on {
                return false;
            }
        }
        self.rows.push(usize::MAX);
        let go_on = self.partial(size, best);
        self.rows.pop();
        go_on
    }
}

fn rows_to_transversal(rows: &[usize]) -> Transversal {
    Transversal { cells: rows.iter().enumerate().map(|(c, &r)| (r, c)).collect() }
}

/// The first complete transversal in column-major, row-ascending order.
pub fn find_transversal(sq: &LatinSquare, limits: &SearchLimits) -> Result<Search<Transversal>> {
    limits.admit(sq.order.max(2))?;
    let budget = Budget::new(limits);
    let mut search = TransversalSearch::new(sq, &budget);
    let mut found = None;
    search.complete(&mut |rows| {
        found = Some(rows_to_transversal(rows));
        false
    });
    Ok(match found {
        Some(t) => Search::Found(t),
        None if budget.exhausted() => Search::BudgetExhausted,
        None => Search::NotFound,
    })
}

/// Every complete transversal, in search order. The flag is false if the
/// budget ran out before the enumeration finished.
pub fn all_transversals(sq: &LatinSquare, limits: &SearchLimits) -> Result<(Vec<Transversal>, bool)> {
    limits.admit(sq.order.max(2))?;
    let budget = Budget::new(limits);
    let mut search = TransversalSearch::new(sq, &budget);
    let mut out = Vec::new();
    search.complete(&mut |rows| {
        out.push(rows_to_transversal(rows));
        true
    });
    Ok((out, !budget.exhausted()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialTransversal {
    pub transversal: Transversal,
    pub exhaustive: bool,
}

pub fn max_partial_transversal(sq: &LatinSquare, limits: &SearchLimits) -> Result<PartialTransversal> {
    limits.admit(sq.order.max(2))?;
    let budget = Budget::new(limits);
    let mut search = TransversalSearch::new(sq, &budget);
    let mut best = Vec::new();
    search.partial(0, &mut best);
    Ok(PartialTransversal { transversal: Transversal { cells: best }, exhaustive: !budget.exhausted() })
}

/// Edge `{row, column}` of the complete bipartite graph, colored by the cell value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingEdge {
    pub row: usize,
    pub column: usize,
    pub color: u32,
}

/// A complete transversal as a rainbow perfect matching between rows and columns.
pub fn latin_to_bipartite_matching(
    sq: &LatinSquare,
    limits: &SearchLimits,
) -> Result<Search<Vec<MatchingEdge>>> {
    Ok(match find_transversal(sq, limits)? {
        Search::Found(t) => Search::Found(
            t.cells
                .iter()
                .map(|&(row, column)| MatchingEdge { row, column, color: sq.get(row, column) })
                .collect(),
        ),
        Search::NotFound => Search::NotFound,
        Search::BudgetExhausted => Search::BudgetExhausted,
    })
}

/// A 2-regular rainbow subgraph of `K_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RainbowSubgraph {
    /// `(u, v, color)` with `u < v`, sorted.
    pub edges: Vec<(usize, usize, u32)>,
    /// Vertices whose diagonal cell was selected.
    pub excluded: Vec<usize>,
}

/// Maps a complete transversal of a square from [`coloring_to_latin`] to the
/// rainbow subgraph it encodes: diagonal cells drop their vertex, other cells
/// `(i, j)` become edges `{v_i, v_j}`.
pub fn transversal_to_rainbow_subgraph(sq: &LatinSquare, t: &Transversal) -> Result<RainbowSubgraph> {
    check_in_image(sq)?;
    t.check(sq, true)?;
    let n = sq.order;
    let mut excluded = Vec::new();
    let mut edges = Vec::new();
    for &(i, j) in &t.cells {
        if i == j {
            excluded.push(i);
        } else {
            edges.push((i.min(j), i.max(j), sq.get(i, j)));
        }
    }
    excluded.sort_unstable();
    edges.sort_unstable();

    let fail = |detail: String| Error::BoundViolated { bound: "rainbow-subgraph", detail };
    let mut colors: Vec<u32> = edges.iter().map(|e| e.2).collect();
    colors.sort_unstable();
    colors.dedup();
    if colors.len() != edges.len() {
        return Err(fail("edge colors repeat".into()));
    }
    if edges.windows(2).any(|w| w[0].0 == w[1].0 && w[0].1 == w[1].1) {
        return Err(fail("2-cycle".into()));
    }
    let mut degree = vec![0usize; n];
    for &(u, v, _) in &edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    for (v, &d) in degree.iter().enumerate() {
        let expected = if excluded.contains(&v) { 0 } else { 2 };
        if d != expected {
            return Err(fail(format!("vertex {v} has degree {d}")));
        }
    }
    if excluded.len() > 1 {
        return Err(fail(format!("{} vertices excluded", excluded.len())));
    }
    Ok(RainbowSubgraph { edges, excluded })
}

/// `order <N>` then `N` rows of `N` space-separated values.
pub fn write_latin(sq: &LatinSquare) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "order {}", sq.order);
    for row in &sq.grid {
        let line: Vec<String> = row.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

/// Parses the text form; the Latin property itself is not checked here.
pub fn read_latin(text: &str) -> Result<LatinSquare> {
    let parse_err = |line: usize, message: String| Error::Parse { line, message };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line_no, header) = lines.next().ok_or_else(|| parse_err(1, "empty input".into()))?;
    let order = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["order", n] => n
            .parse::<usize>()
            .map_err(|e| parse_err(line_no, format!("bad order: {e}")))?,
        _ => return Err(parse_err(line_no, "expected header `order <N>`".into())),
    };
    if order == 0 {
        return Err(parse_err(line_no, "order must be at least 1".into()));
    }
    let mut grid = Vec::with_capacity(order);
    let mut last = line_no;
    for (line_no, line) in lines {
        last = line_no;
        if grid.len() == order {
            return Err(parse_err(line_no, "more rows than the order".into()));
        }
        let row = line
            .split_whitespace()
            .map(|s| s.parse::<u32>().map_err(|e| parse_err(line_no, format!("bad value `{s}`: {e}"))))
            .collect::<Result<Vec<u32>>>()?;
        if row.len() != order {
            return Err(parse_err(line_no, format!("expected {order} values, found {}", row.len())));
        }
        grid.push(row);
    }
    if grid.len() != order {
        return Err(parse_err(last, format!("expected {order} rows, found {}", grid.len())));
    }
    LatinSquare::from_rows(grid)
}
