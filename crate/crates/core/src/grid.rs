//! Cell-set polyominoes on the square lattice.
//!
//! A [`Polyomino`] is a finite, edge-connected, duplicate-free set of cells,
//! always stored translated so that its lowest row and leftmost column sit at
//! ordinate and abscissa 0 ("fixed" polyominoes: equal up to translation only).
//!
//! Two interchange formats are supported:
//!
//! * **Text grid.** One line per row, topmost row first. `#` is a cell and `.`
//!   is empty. [`Polyomino::to_text`] writes every line with exactly `width`
//!   characters, joins lines with `\n` and adds no trailing newline.
//!   [`Polyomino::from_text`] also accepts a trailing newline, `\r\n` line ends
//!   and short lines (missing characters count as `.`).
//! * **JSON.** `{"cells":[[x,y],...]}` with cells sorted by `x`, then `y`.
//!   Reading accepts any order and any translation.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("empty cell set")]
    Empty,
    #[error("cell set is not edge-connected")]
    Disconnected,
    #[error("duplicate cell ({}, {})", .0.x, .0.y)]
    Duplicate(Cell),
    #[error("invalid character {ch:?} at line {line}, column {column}")]
    InvalidChar { line: usize, column: usize, ch: char },
    #[error("invalid polyomino JSON: {0}")]
    Json(String),
}

/// A unit cell, `x` growing eastwards and `y` northwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[i32; 2]", into = "[i32; 2]")]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    pub const fn new(x: i32, y: i32) -> Self {
        Cell { x, y }
    }
}

impl From<[i32; 2]> for Cell {
    fn from([x, y]: [i32; 2]) -> Self {
        Cell { x, y }
    }
}

impl From<Cell> for [i32; 2] {
    fn from(c: Cell) -> Self {
        [c.x, c.y]
    }
}

impl From<(i32, i32)> for Cell {
    fn from((x, y): (i32, i32)) -> Self {
        Cell { x, y }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundingRect {
    pub width: u32,
    pub height: u32,
}

/// Extent of one column (or row): lowest and highest occupied coordinate and
/// the number of occupied cells in between.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Span {
    pub min: i32,
    pub max: i32,
    pub count: u32,
}

impl Span {
    /// The span is a single contiguous run of cells.
    pub fn is_contiguous(&self) -> bool {
        (self.max - self.min + 1) as u32 == self.count
    }

    /// Number of positions from `min` to `max` inclusive.
    pub fn extent(&self) -> u32 {
        (self.max - self.min + 1) as u32
    }

    pub fn contains(&self, v: i32) -> bool {
        self.min <= v && v <= self.max
    }
}

/// A canonical polyomino. Immutable once built.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polyomino {
    cells: Vec<Cell>,
    width: u32,
    height: u32,
    columns: Vec<Span>,
    rows: Vec<Span>,
    occupied: Vec<bool>,
}

impl fmt::Debug for Polyomino {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polyomino[{}x{}]\n{}", self.width, self.height, self.to_text())
    }
}

#[derive(Serialize, Deserialize)]
struct CellsJson {
    cells: Vec<Cell>,
}

impl Polyomino {
    /// Translates `cells` so that the minimum abscissa and ordinate are 0.
    ///
    /// Rejects empty, disconnected or duplicated input.
    pub fn canonicalize<I>(cells: I) -> Result<Polyomino, GridError>
    where
        I: IntoIterator<Item = Cell>,
    {
        let raw: Vec<Cell> = cells.into_iter().collect();
        if raw.is_empty() {
            return Err(GridError::Empty);
        }
        let mut set = BTreeSet::new();
        for &c in &raw {
            if !set.insert(c) {
                return Err(GridError::Duplicate(c));
            }
        }
        let min_x = raw.iter().map(|c| c.x).min().unwrap();
        let min_y = raw.iter().map(|c| c.y).min().unwrap();
        let cells: Vec<Cell> = set.into_iter().map(|c| Cell::new(c.x - min_x, c.y - min_y)).collect();
        let p = Self::build(cells);
        if !p.is_connected() {
            return Err(GridError::Disconnected);
        }
        Ok(p)
    }

    /// Builds a polyomino from column intervals `(bottom, top)`, column `i` at
    /// abscissa `i`. The caller guarantees the result is connected, which holds
    /// whenever consecutive intervals overlap.
    pub(crate) fn from_column_intervals(cols: &[(i32, i32)]) -> Polyomino {
        let min_y = cols.iter().map(|c| c.0).min().expect("at least one column");
        let mut cells = Vec::with_capacity(cols.iter().map(|&(b, t)| (t - b + 1) as usize).sum());
        for (x, &(b, t)) in cols.iter().enumerate() {
            debug_assert!(b <= t);
            for y in b..=t {
                cells.push(Cell::new(x as i32, y - min_y));
            }
        }
        let p = Self::build(cells);
        debug_assert!(p.is_connected());
        p
    }

    /// `cells` must be sorted, duplicate-free and canonically translated.
    fn build(cells: Vec<Cell>) -> Polyomino {
        let width = (cells.iter().map(|c| c.x).max().unwrap() + 1) as u32;
        let height = (cells.iter().map(|c| c.y).max().unwrap() + 1) as u32;
        let empty = Span { min: i32::MAX, max: i32::MIN, count: 0 };
        let mut columns = vec![empty; width as usize];
        let mut rows = vec![empty; height as usize];
        let mut occupied = vec![false; (width * height) as usize];
        for c in &cells {
            for (span, v) in [(&mut columns[c.x as usize], c.y), (&mut rows[c.y as usize], c.x)] {
                span.min = span.min.min(v);
                span.max = span.max.max(v);
                span.count += 1;
            }
            occupied[(c.y as u32 * width + c.x as u32) as usize] = true;
        }
        Polyomino { cells, width, height, columns, rows, occupied }
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.occupied.len()];
        let mut queue = VecDeque::new();
        let start = self.cells[0];
        seen[self.index(start)] = true;
        queue.push_back(start);
        let mut reached = 1;
        while let Some(c) = queue.pop_front() {
            for n in neighbours(c) {
                if self.contains(n) && !seen[self.index(n)] {
                    seen[self.index(n)] = true;
                    reached += 1;
                    queue.push_back(n);
                }
            }
        }
        reached == self.cells.len()
    }

    fn index(&self, c: Cell) -> usize {
        (c.y as u32 * self.width + c.x as u32) as usize
    }

    /// Cells sorted by `x`, then `y`.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn bounding_rect(&self) -> BoundingRect {
        BoundingRect { width: self.width, height: self.height }
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.x >= 0 && c.y >= 0 && (c.x as u32) < self.width && (c.y as u32) < self.height && self.occupied[self.index(c)]
    }

    /// Span of column `x`; every column of the bounding box is occupied.
    pub fn column(&self, x: i32) -> Span {
        self.columns[x as usize]
    }

    pub fn row(&self, y: i32) -> Span {
        self.rows[y as usize]
    }

    pub fn columns(&self) -> &[Span] {
        &self.columns
    }

    pub fn rows(&self) -> &[Span] {
        &self.rows
    }

    pub fn is_column_convex(&self) -> bool {
        self.columns.iter().all(Span::is_contiguous)
    }

    pub fn is_row_convex(&self) -> bool {
        self.rows.iter().all(Span::is_contiguous)
    }

    pub fn is_convex(&self) -> bool {
        self.is_column_convex() && self.is_row_convex()
    }

    /// Half the number of unit edges on the boundary.
    ///
    /// For convex polyominoes this is `width + height`.
    pub fn semi_perimeter(&self) -> u32 {
        let adjacent = self
            .cells
            .iter()
            .map(|&c| self.contains(Cell::new(c.x + 1, c.y)) as u32 + self.contains(Cell::new(c.x, c.y + 1)) as u32)
            .sum::<u32>();
        (4 * self.cells.len() as u32 - 2 * adjacent) / 2
    }

    /// Images under the dihedral group of the square, canonicalized.
    ///
    /// Order: identity, rotations by 90/180/270 degrees, then the same four
    /// composed with the reflection `x -> -x`.
    pub fn symmetries(&self) -> Vec<Polyomino> {
        let maps: [fn(Cell) -> Cell; 8] = [
            |c| c,
            |c| Cell::new(-c.y, c.x),
            |c| Cell::new(-c.x, -c.y),
            |c| Cell::new(c.y, -c.x),
            |c| Cell::new(-c.x, c.y),
            |c| Cell::new(-c.y, -c.x),
            |c| Cell::new(c.x, -c.y),
            |c| Cell::new(c.y, c.x),
        ];
        maps.iter().map(|f| self.map_cells(*f)).collect()
    }

    /// Mirror image in a horizontal axis (`y -> -y`).
    pub fn reflect_horizontal_axis(&self) -> Polyomino {
        self.map_cells(|c| Cell::new(c.x, -c.y))
    }

    /// Mirror image in a vertical axis (`x -> -x`).
    pub fn reflect_vertical_axis(&self) -> Polyomino {
        self.map_cells(|c| Cell::new(-c.x, c.y))
    }

    pub fn transpose(&self) -> Polyomino {
        self.map_cells(|c| Cell::new(c.y, c.x))
    }

    fn map_cells(&self, f: impl Fn(Cell) -> Cell) -> Polyomino {
        let mut cells: Vec<Cell> = self.cells.iter().map(|&c| f(c)).collect();
        let min_x = cells.iter().map(|c| c.x).min().unwrap();
        let min_y = cells.iter().map(|c| c.y).min().unwrap();
        for c in &mut cells {
            c.x -= min_x;
            c.y -= min_y;
        }
        cells.sort_unstable();
        Self::build(cells)
    }

    pub fn from_text(text: &str) -> Result<Polyomino, GridError> {
        let lines: Vec<&str> = text.strip_suffix('\n').unwrap_or(text).split('\n').collect();
        let height = lines.len() as i32;
        let mut cells = Vec::new();
        for (line_no, line) in lines.iter().enumerate() {
            let line = line.strip_suffix('\r').unwrap_or(line);
            let y = height - 1 - line_no as i32;
            for (col, ch) in line.chars().enumerate() {
                match ch {
                    '#' => cells.push(Cell::new(col as i32, y)),
                    '.' => {}
                    _ => return Err(GridError::InvalidChar { line: line_no + 1, column: col + 1, ch }),
                }
            }
        }
        Self::canonicalize(cells)
    }

    pub fn to_text(&self) -> String {
        self.render(|c| if self.contains(c) { '#' } else { '.' })
    }

    /// Renders the bounding box top row first, one character per position.
    pub fn render(&self, glyph: impl Fn(Cell) -> char) -> String {
        let mut out = String::with_capacity(((self.width + 1) * self.height) as usize);
        for y in (0..self.height as i32).rev() {
            for x in 0..self.width as i32 {
                out.push(glyph(Cell::new(x, y)));
            }
            if y > 0 {
                out.push('\n');
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CellsJson { cells: self.cells.clone() }).expect("cells serialize")
    }

    pub fn from_json(json: &str) -> Result<Polyomino, GridError> {
        let parsed: CellsJson = serde_json::from_str(json).map_err(|e| GridError::Json(e.to_string()))?;
        Self::canonicalize(parsed.cells)
    }
}

impl PartialOrd for Polyomino {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Polyomino {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.cells.cmp(&other.cells)
    }
}

pub(crate) fn neighbours(c: Cell) -> [Cell; 4] {
    [Cell::new(c.x + 1, c.y), Cell::new(c.x - 1, c.y), Cell::new(c.x, c.y + 1), Cell::new(c.x, c.y - 1)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cells: &[(i32, i32)]) -> Polyomino {
        Polyomino::canonicalize(cells.iter().map(|&c| c.into())).unwrap()
    }

    #[test]
    fn canonicalize_translates() {
        assert_eq!(poly(&[(5, 7)]).cells(), &[Cell::new(0, 0)]);
        assert_eq!(poly(&[(2, 2), (3, 2)]).cells(), &[Cell::new(0, 0), Cell::new(1, 0)]);
    }

    #[test]
    fn canonicalize_rejects_bad_input() {
        let gap = [Cell::new(0, 0), Cell::new(2, 0)];
        assert_eq!(Polyomino::canonicalize(gap), Err(GridError::Disconnected));
        assert_eq!(Polyomino::canonicalize(Vec::new()), Err(GridError::Empty));
        let dup = [Cell::new(1, 1), Cell::new(1, 1)];
        assert_eq!(Polyomino::canonicalize(dup), Err(GridError::Duplicate(Cell::new(1, 1))));
        // diagonal contact is not connectivity
        let diag = [Cell::new(0, 0), Cell::new(1, 1)];
        assert_eq!(Polyomino::canonicalize(diag), Err(GridError::Disconnected));
    }

    #[test]
    fn convexity_predicates() {
        let square = poly(&[(0, 0), (1, 0), (0, 1), (1, 1)]);
        assert!(square.is_convex());

        let u = poly(&[(0, 0), (1, 0), (2, 0), (0, 2), (1, 2), (2, 2), (0, 1)]);
        assert!(!u.is_column_convex());
        assert!(u.is_row_convex());
        assert!(!u.is_convex());

        let stairs = poly(&[(0, 1), (1, 1), (1, 0), (2, 0)]);
        assert!(stairs.is_convex());
    }

    #[test]
    fn semi_perimeters() {
        assert_eq!(poly(&[(0, 0)]).semi_perimeter(), 2);
        let rect: Vec<(i32, i32)> = (0..2).flat_map(|x| (0..3).map(move |y| (x, y))).collect();
        assert_eq!(poly(&rect).semi_perimeter(), 5);
        assert_eq!(poly(&[(0, 1), (1, 1), (1, 0), (2, 0)]).semi_perimeter(), 5);
    }

    #[test]
    fn symmetry_orbits() {
        let orbit = |p: &Polyomino| p.symmetries().into_iter().collect::<BTreeSet<_>>().len();
        let cell = poly(&[(0, 0)]);
        assert!(cell.symmetries().iter().all(|q| q == &cell));
        assert_eq!(orbit(&poly(&[(0, 0), (1, 0)])), 2);
        assert_eq!(orbit(&poly(&[(0, 0), (1, 0), (0, 1)])), 4);
    }

    #[test]
    fn text_format() {
        let p = Polyomino::from_text("##\n.#").unwrap();
        assert_eq!(p.cells(), &[Cell::new(0, 1), Cell::new(1, 0), Cell::new(1, 1)]);
        assert_eq!(p.to_text(), "##\n.#");
        assert_eq!(Polyomino::from_text("#").unwrap().cells(), &[Cell::new(0, 0)]);
        assert_eq!(Polyomino::from_text("#.#"), Err(GridError::Disconnected));
        assert_eq!(Polyomino::from_text("..\n.."), Err(GridError::Empty));
        assert!(matches!(Polyomino::from_text("#x"), Err(GridError::InvalidChar { line: 1, column: 2, ch: 'x' })));
        assert_eq!(Polyomino::from_text("##\r\n.#\n").unwrap(), p);
    }

    #[test]
    fn json_format() {
        let p = Polyomino::from_text("##\n.#").unwrap();
        assert_eq!(p.to_json(), r#"{"cells":[[0,1],[1,0],[1,1]]}"#);
        assert_eq!(Polyomino::from_json(r#"{"cells":[[4,4],[3,4],[4,3]]}"#).unwrap(), p);
        assert!(matches!(Polyomino::from_json("{}"), Err(GridError::Json(_))));
    }
}
