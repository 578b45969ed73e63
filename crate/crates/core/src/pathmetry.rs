//! Monotone paths and convexity degree.
//!
//! A monotone path from `a` to `b` uses one horizontal step (towards `b`) and
//! one vertical step (towards `b`); with two step types a walk can never
//! revisit a cell, so self-avoidance is automatic. The convexity degree of a
//! convex polyomino is the largest, over cell pairs, of the least number of
//! direction changes on a monotone path between them.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::grid::{Cell, Polyomino};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("cell {0} is not in the polyomino")]
    OutsideCell(Cell),
    #[error("convexity degree is only defined for convex polyominoes")]
    NotConvex,
    #[error("no monotone path between {0} and {1} in a convex polyomino")]
    Unreachable(Cell, Cell),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TurnCount {
    Finite(u32),
    Unreachable,
}

impl TurnCount {
    pub fn finite(self) -> Option<u32> {
        match self {
            TurnCount::Finite(n) => Some(n),
            TurnCount::Unreachable => None,
        }
    }
}

impl fmt::Display for TurnCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TurnCount::Finite(n) => write!(f, "{n}"),
            TurnCount::Unreachable => f.write_str("unreachable"),
        }
    }
}

/// Least number of direction changes over monotone paths inside `p` from `a`
/// to `b`, by 0-1 breadth-first search on (cell, last direction) states.
pub fn min_monotone_turns(p: &Polyomino, a: Cell, b: Cell) -> Result<TurnCount, PathError> {
    for c in [a, b] {
        if !p.contains(c) {
            return Err(PathError::OutsideCell(c));
        }
    }
    if a == b {
        return Ok(TurnCount::Finite(0));
    }
    let mut dirs = Vec::with_capacity(2);
    if b.x != a.x {
        dirs.push(((b.x - a.x).signum(), 0));
    }
    if b.y != a.y {
        dirs.push((0, (b.y - a.y).signum()));
    }
    let w = p.width() as usize;
    let slot = |c: Cell, d: usize| (c.y as usize * w + c.x as usize) * 2 + d;
    let mut dist = vec![u32::MAX; w * p.height() as usize * 2];
    let mut queue = VecDeque::new();
    for (d, &(dx, dy)) in dirs.iter().enumerate() {
        let n = Cell::new(a.x + dx, a.y + dy);
        if p.contains(n) {
            dist[slot(n, d)] = 0;
            queue.push_back((n, d));
        }
    }
    while let Some((c, d)) = queue.pop_front() {
        let here = dist[slot(c, d)];
        for (e, &(dx, dy)) in dirs.iter().enumerate() {
            let n = Cell::new(c.x + dx, c.y + dy);
            if !p.contains(n) {
                continue;
            }
            let cost = here + u32::from(e != d);
            if cost < dist[slot(n, e)] {
                dist[slot(n, e)] = cost;
                if e == d {
                    queue.push_front((n, e));
                } else {
                    queue.push_back((n, e));
                }
            }
        }
    }
    let best = (0..dirs.len()).map(|d| dist[slot(b, d)]).min().unwrap();
    Ok(if best == u32::MAX { TurnCount::Unreachable } else { TurnCount::Finite(best) })
}

const INF: u16 = u16::MAX;

/// Single-source turn counts for the quadrants east of a source, reused
/// across sources to avoid reallocating.
struct QuadrantSweep {
    horizontal: Vec<u16>,
    vertical: Vec<u16>,
}

impl QuadrantSweep {
    fn new(p: &Polyomino) -> Self {
        let n = (p.width() * p.height()) as usize;
        QuadrantSweep { horizontal: vec![INF; n], vertical: vec![INF; n] }
    }

    /// Calls `f(target, turns)` for every target `b` with `b.x >= a.x` and
    /// `(b.y - a.y) * sy >= 0`, where `turns` is `INF` for unreachable targets.
    fn sweep(&mut self, p: &Polyomino, a: Cell, sy: i32, mut f: impl FnMut(Cell, u16)) {
        let w = p.width() as i32;
        let idx = |c: Cell| (c.y * w + c.x) as usize;
        let y_end = if sy > 0 { p.height() as i32 - 1 } else { 0 };
        let mut y = a.y;
        loop {
            for x in a.x..w {
                let c = Cell::new(x, y);
                let i = idx(c);
                if !p.contains(c) {
                    self.horizontal[i] = INF;
                    self.vertical[i] = INF;
                    continue;
                }
                let (h, v) = if c == a {
                    (0, 0)
                } else {
                    let from_west = if x > a.x { Some(idx(Cell::new(x - 1, y))) } else { None };
                    let from_below = if y != a.y { Some(idx(Cell::new(x, y - sy))) } else { None };
                    let h = from_west.map_or(INF, |j| self.horizontal[j].min(self.vertical[j].saturating_add(1)));
                    let v = from_below.map_or(INF, |j| self.vertical[j].min(self.horizontal[j].saturating_add(1)));
                    (h, v)
                };
                self.horizontal[i] = h;
                self.vertical[i] = v;
                f(c, h.min(v));
            }
            if y == y_end {
                break;
            }
            y += sy;
        }
    }
}

/// A pair of cells realizing the convexity degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeWitness {
    pub degree: u32,
    pub a: Cell,
    pub b: Cell,
}

/// Scans all cell pairs; stops early once a pair exceeds `limit`.
fn scan(p: &Polyomino, limit: Option<u32>) -> Result<DegreeWitness, PathError> {
    if !p.is_convex() {
        return Err(PathError::NotConvex);
    }
    let first = p.cells()[0];
    let mut best = DegreeWitness { degree: 0, a: first, b: first };
    let mut sweep = QuadrantSweep::new(p);
    let mut unreachable = None;
    for &a in p.cells() {
        for sy in [1, -1] {
            sweep.sweep(p, a, sy, |b, t| {
                if t == INF {
                    unreachable.get_or_insert((a, b));
                } else if u32::from(t) > best.degree {
                    best = DegreeWitness { degree: t.into(), a, b };
                }
            });
            if let Some((a, b)) = unreachable {
                return Err(PathError::Unreachable(a, b));
            }
            if limit.is_some_and(|k| best.degree > k) {
                return Ok(best);
            }
        }
    }
    Ok(best)
}

/// Largest minimal turn count over all cell pairs, with a pair attaining it.
pub fn degree_witness(p: &Polyomino) -> Result<DegreeWitness, PathError> {
    scan(p, None)
}

pub fn convexity_degree(p: &Polyomino) -> Result<u32, PathError> {
    scan(p, None).map(|w| w.degree)
}

/// `convexity_degree(p) <= k`; `k = 1` is L-convexity and `k = 2` Z-convexity.
pub fn is_k_convex(p: &Polyomino, k: u32) -> Result<bool, PathError> {
    scan(p, Some(k)).map(|w| w.degree <= k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cells: &[(i32, i32)]) -> Polyomino {
        Polyomino::canonicalize(cells.iter().map(|&c| c.into())).unwrap()
    }

    fn staircase() -> Polyomino {
        poly(&[(0, 2), (1, 2), (1, 1), (2, 1), (2, 0)])
    }

    #[test]
    fn single_pair_turns() {
        let sq = poly(&[(0, 0), (1, 0), (0, 1), (1, 1)]);
        let t = |p: &Polyomino, a: (i32, i32), b: (i32, i32)| min_monotone_turns(p, a.into(), b.into()).unwrap();
        assert_eq!(t(&sq, (0, 0), (0, 0)), TurnCount::Finite(0));
        assert_eq!(t(&sq, (0, 0), (1, 1)), TurnCount::Finite(1));
        assert_eq!(t(&sq, (1, 0), (0, 1)), TurnCount::Finite(1));
        assert_eq!(t(&staircase(), (0, 2), (2, 0)), TurnCount::Finite(3));
        assert_eq!(t(&staircase(), (2, 0), (0, 2)), TurnCount::Finite(3));
        let u = poly(&[(0, 0), (0, 1), (1, 1), (2, 1), (2, 0)]);
        assert_eq!(t(&u, (0, 0), (2, 0)), TurnCount::Unreachable);
        assert_eq!(
            min_monotone_turns(&sq, Cell::new(0, 0), Cell::new(3, 3)),
            Err(PathError::OutsideCell(Cell::new(3, 3)))
        );
    }

    #[test]
    fn degrees() {
        let bar = poly(&[(0, 0), (1, 0), (2, 0), (3, 0)]);
        assert_eq!(convexity_degree(&bar), Ok(0));
        assert_eq!(convexity_degree(&poly(&[(0, 0), (1, 0), (0, 1), (1, 1)])), Ok(1));
        let w = degree_witness(&staircase()).unwrap();
        assert_eq!(w.degree, 3);
        assert_eq!(min_monotone_turns(&staircase(), w.a, w.b).unwrap(), TurnCount::Finite(3));
        assert_eq!(is_k_convex(&staircase(), 2), Ok(false));
        assert_eq!(is_k_convex(&staircase(), 3), Ok(true));
        let u = poly(&[(0, 0), (0, 1), (1, 1), (2, 1), (2, 0)]);
        assert_eq!(convexity_degree(&u), Err(PathError::NotConvex));
    }
}
