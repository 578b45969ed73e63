//! Structural anatomy of convex polyominoes: the centered / ascending /
//! descending split, the four regions of a descending polyomino, hooks and
//! the reduction that strips the leftmost column.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{Cell, GridError, Polyomino};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnatomyError {
    #[error("polyomino is not convex")]
    NotConvex,
    #[error("expected a descending polyomino, found {0}")]
    NotDescending(ClassLabel),
    #[error("hooks are only defined on centered or descending polyominoes, found {0}")]
    NotHookable(ClassLabel),
    #[error("non-centered polyomino is neither ascending nor descending")]
    Inconsistent,
    #[error("boundary from the end of row {x_row} to the end of row {y_row} is not a south-east path")]
    Boundary { x_row: i32, y_row: i32 },
    #[error("regions overlap at cell {0}")]
    Overlap(Cell),
    #[error("row X ends in the leftmost column, so the reduction would delete the whole arm")]
    DegenerateArm,
    #[error("reduction is not a polyomino: {0}")]
    Reduction(GridError),
    #[error("row {arm_row} does not carry a valid hook: {reason}")]
    InvalidHook { arm_row: i32, reason: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassLabel {
    Centered,
    Ascending,
    Descending,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassLabel::Centered => "centered",
            ClassLabel::Ascending => "ascending",
            ClassLabel::Descending => "descending",
        })
    }
}

impl FromStr for ClassLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "centered" => Ok(ClassLabel::Centered),
            "ascending" => Ok(ClassLabel::Ascending),
            "descending" => Ok(ClassLabel::Descending),
            _ => Err(format!("unknown class label {s:?}")),
        }
    }
}

/// Some row spans the whole bounding width.
pub fn is_centered(p: &Polyomino) -> bool {
    let w = p.width() as i32;
    p.rows().iter().any(|r| r.min == 0 && r.max == w - 1 && r.is_contiguous())
}

pub fn classify(p: &Polyomino) -> Result<ClassLabel, AnatomyError> {
    if !p.is_convex() {
        return Err(AnatomyError::NotConvex);
    }
    if is_centered(p) {
        return Ok(ClassLabel::Centered);
    }
    let first = p.column(0);
    let last = p.column(p.width() as i32 - 1);
    if last.max < first.min {
        Ok(ClassLabel::Descending)
    } else if last.min > first.max {
        Ok(ClassLabel::Ascending)
    } else {
        Err(AnatomyError::Inconsistent)
    }
}

/// Rows X, Y and columns S, T of a descending polyomino.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    /// Row of the top cell of the leftmost column.
    pub x_row: i32,
    /// Row of the bottom cell of the leftmost column.
    pub y_row: i32,
    /// Column of the rightmost cell of row X.
    pub s_col: i32,
    /// Column of the rightmost cell of row Y.
    pub t_col: i32,
    /// Cells of S from the polyomino bottom up to row X, as (min, max).
    pub s_extent: (i32, i32),
    /// Cells of T from the polyomino bottom up to row Y, as (min, max).
    pub t_extent: (i32, i32),
}

impl Frame {
    fn in_hook(&self, c: Cell) -> bool {
        (c.y == self.y_row && c.x <= self.s_col) || (c.x == self.s_col && c.y <= self.y_row)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Omega,
    Xi,
    Theta,
    Lambda,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regions {
    pub frame: Frame,
    pub omega: Vec<Cell>,
    pub xi: Vec<Cell>,
    pub theta: Vec<Cell>,
    pub lambda: Vec<Cell>,
}

impl Regions {
    pub fn region_of(&self, c: Cell) -> Option<Region> {
        [
            (Region::Omega, &self.omega),
            (Region::Xi, &self.xi),
            (Region::Theta, &self.theta),
            (Region::Lambda, &self.lambda),
        ]
        .into_iter()
        .find(|(_, cells)| cells.binary_search(&c).is_ok())
        .map(|(r, _)| r)
    }

    pub fn is_hook(&self, c: Cell) -> bool {
        self.frame.in_hook(c) && self.xi.binary_search(&c).is_ok()
    }
}

fn frame(p: &Polyomino) -> Result<Frame, AnatomyError> {
    let label = classify(p)?;
    if label != ClassLabel::Descending {
        return Err(AnatomyError::NotDescending(label));
    }
    let first = p.column(0);
    let (x_row, y_row) = (first.max, first.min);
    let s_col = p.row(x_row).max;
    let t_col = p.row(y_row).max;
    // Right ends weakly grow while walking down from X to Y.
    for y in y_row..x_row {
        if p.row(y).max < p.row(y + 1).max {
            return Err(AnatomyError::Boundary { x_row, y_row });
        }
    }
    Ok(Frame {
        x_row,
        y_row,
        s_col,
        t_col,
        s_extent: (p.column(s_col).min, x_row),
        t_extent: (p.column(t_col).min, y_row),
    })
}

pub fn regions(p: &Polyomino) -> Result<Regions, AnatomyError> {
    let f = frame(p)?;
    let mut r = Regions { frame: f, omega: vec![], xi: vec![], theta: vec![], lambda: vec![] };
    for &c in p.cells() {
        let omega = c.y > f.x_row;
        let theta = c.x > f.t_col;
        let xi = (c.y < f.y_row && c.x < f.s_col) || f.in_hook(c);
        match (omega, xi, theta) {
            (true, false, false) => r.omega.push(c),
            (false, true, false) => r.xi.push(c),
            (false, false, true) => r.theta.push(c),
            (false, false, false) => r.lambda.push(c),
            _ => return Err(AnatomyError::Overlap(c)),
        }
    }
    Ok(r)
}

/// No cell of θ lies lower than the lowest cell of column S.
pub fn check_property1(p: &Polyomino) -> Result<bool, AnatomyError> {
    let r = regions(p)?;
    let floor = r.frame.s_extent.0;
    Ok(r.theta.iter().all(|c| c.y >= floor))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HookType {
    A,
    B,
}

impl fmt::Display for HookType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HookType::A => "A",
            HookType::B => "B",
        })
    }
}

/// A hook: the whole row `arm_row` (which meets the leftmost column) and the
/// cells of `corner_col` at or below it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HookSpec {
    pub arm_row: i32,
    pub corner_col: i32,
    pub hook_type: HookType,
    pub k_stat: i32,
}

impl HookSpec {
    pub fn contains(&self, p: &Polyomino, c: Cell) -> bool {
        p.contains(c) && (c.y == self.arm_row || (c.x == self.corner_col && c.y <= self.arm_row))
    }
}

/// A hook shape whose right-hand region may dip below the leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HookCandidate {
    pub spec: HookSpec,
    /// Every cell right of the leg is at least as high as the leg's bottom.
    pub floor_ok: bool,
}

fn candidate_at(q: &Polyomino, arm_row: i32) -> Result<HookCandidate, &'static str> {
    let first = q.column(0);
    if !first.contains(arm_row) {
        return Err("arm row misses the leftmost column");
    }
    let corner_col = q.row(arm_row).max;
    let w = q.width() as i32;
    if corner_col == w - 1 {
        return Err("nothing lies right of the corner");
    }
    let right = &q.columns()[corner_col as usize + 1..];
    if right.iter().any(|s| s.max >= arm_row) {
        return Err("right-hand region reaches the arm row");
    }
    let leg_bottom = q.column(corner_col).min;
    let hook_type = if leg_bottom == 0 { HookType::A } else { HookType::B };
    let k_stat = q.column(corner_col + 1).min - leg_bottom;
    Ok(HookCandidate {
        spec: HookSpec { arm_row, corner_col, hook_type, k_stat },
        floor_ok: right.iter().all(|s| s.min >= leg_bottom),
    })
}

fn hookable(q: &Polyomino) -> Result<(), AnatomyError> {
    match classify(q)? {
        ClassLabel::Ascending => Err(AnatomyError::NotHookable(ClassLabel::Ascending)),
        _ => Ok(()),
    }
}

/// Hook shapes without the floor condition on the right-hand region.
pub fn hook_candidates(q: &Polyomino) -> Result<Vec<HookCandidate>, AnatomyError> {
    hookable(q)?;
    let first = q.column(0);
    Ok((first.min..=first.max).filter_map(|r| candidate_at(q, r).ok()).collect())
}

pub fn enumerate_hooks(q: &Polyomino) -> Result<Vec<HookSpec>, AnatomyError> {
    Ok(hook_candidates(q)?.into_iter().filter(|h| h.floor_ok).map(|h| h.spec).collect())
}

/// The hook carried by `arm_row`, if it is a valid one.
pub fn hook_at(q: &Polyomino, arm_row: i32) -> Result<HookSpec, AnatomyError> {
    hookable(q)?;
    match candidate_at(q, arm_row) {
        Ok(h) if h.floor_ok => Ok(h.spec),
        Ok(_) => Err(AnatomyError::InvalidHook { arm_row, reason: "right-hand region dips below the leg" }),
        Err(reason) => Err(AnatomyError::InvalidHook { arm_row, reason }),
    }
}

/// Φ(P) as a bare polyomino, plus the row of its arm in canonical
/// coordinates. Λ and the leftmost column are removed, ω drops onto the arm
/// and θ slides left against column S.
pub fn reduction(p: &Polyomino) -> Result<(Polyomino, i32), AnatomyError> {
    let r = regions(p)?;
    let f = r.frame;
    if f.s_col == 0 {
        return Err(AnatomyError::DegenerateArm);
    }
    let drop = f.x_row - f.y_row;
    let slide = f.t_col - f.s_col;
    let moved = r
        .omega
        .iter()
        .map(|c| Cell::new(c.x, c.y - drop))
        .chain(r.xi.iter().copied())
        .chain(r.theta.iter().map(|c| Cell::new(c.x - slide, c.y)))
        .filter(|c| c.x > 0);
    let cells: Vec<Cell> = moved.collect();
    let min_y = cells.iter().map(|c| c.y).min().unwrap_or(0);
    let q = Polyomino::canonicalize(cells).map_err(AnatomyError::Reduction)?;
    Ok((q, f.y_row - min_y))
}

/// Φ(P) with its highlighted hook.
pub fn reduce(p: &Polyomino) -> Result<(Polyomino, HookSpec), AnatomyError> {
    let (q, arm_row) = reduction(p)?;
    let hook = hook_at(&q, arm_row)?;
    Ok((q, hook))
}

/// Every pair of cells is joined by a path going down, then sideways, then
/// down again. Searched directly, independent of the row spans.
pub fn all_pairs_vertical_zigzag(p: &Polyomino) -> bool {
    let cells = p.cells();
    let column_run = |x: i32, lo: i32, hi: i32| (lo..=hi).all(|y| p.contains(Cell::new(x, y)));
    let row_run = |y: i32, a: i32, b: i32| (a.min(b)..=a.max(b)).all(|x| p.contains(Cell::new(x, y)));
    for (i, &a) in cells.iter().enumerate() {
        for &b in &cells[i + 1..] {
            let (hi, lo) = if a.y >= b.y { (a, b) } else { (b, a) };
            let ok =
                (lo.y..=hi.y).any(|r| column_run(hi.x, r, hi.y) && row_run(r, hi.x, lo.x) && column_run(lo.x, lo.y, r));
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Text rendering with one letter per region: `w` for ω, `x` for ξ, `h` for
/// the hook, `t` for θ, `l` for Λ.
pub fn render_regions(p: &Polyomino, r: &Regions) -> String {
    p.render(|c| match r.region_of(c) {
        None => '.',
        Some(Region::Xi) if r.is_hook(c) => 'h',
        Some(Region::Omega) => 'w',
        Some(Region::Xi) => 'x',
        Some(Region::Theta) => 't',
        Some(Region::Lambda) => 'l',
    })
}

/// Text rendering of a hooked polyomino, hook cells as `h`.
pub fn render_hook(q: &Polyomino, h: &HookSpec) -> String {
    q.render(|c| {
        if h.contains(q, c) {
            'h'
        } else if q.contains(c) {
            '#'
        } else {
            '.'
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cells: &[(i32, i32)]) -> Polyomino {
        Polyomino::canonicalize(cells.iter().map(|&c| c.into())).unwrap()
    }

    fn cells(v: &[(i32, i32)]) -> Vec<Cell> {
        let mut out: Vec<Cell> = v.iter().map(|&c| c.into()).collect();
        out.sort();
        out
    }

    fn descending_staircase() -> Polyomino {
        poly(&[(0, 1), (1, 1), (1, 0), (2, 0)])
    }

    #[test]
    fn labels() {
        assert!(is_centered(&poly(&[(0, 0), (1, 0), (0, 1), (1, 1)])));
        let asc = poly(&[(0, 0), (1, 0), (1, 1), (2, 1)]);
        assert!(!is_centered(&asc));
        assert_eq!(classify(&asc), Ok(ClassLabel::Ascending));
        assert_eq!(classify(&descending_staircase()), Ok(ClassLabel::Descending));
        assert_eq!(classify(&asc.reflect_horizontal_axis()), Ok(ClassLabel::Descending));
        let u = poly(&[(0, 0), (0, 1), (1, 1), (2, 1), (2, 0)]);
        assert_eq!(classify(&u), Err(AnatomyError::NotConvex));
        assert_eq!("descending".parse::<ClassLabel>(), Ok(ClassLabel::Descending));
    }

    #[test]
    fn staircase_regions() {
        let r = regions(&descending_staircase()).unwrap();
        assert!(r.omega.is_empty());
        assert!(r.lambda.is_empty());
        assert_eq!(r.theta, cells(&[(2, 0)]));
        assert_eq!(r.xi, cells(&[(0, 1), (1, 1), (1, 0)]));
        assert!(r.xi.iter().all(|&c| r.is_hook(c)));
        assert_eq!((r.frame.x_row, r.frame.y_row, r.frame.s_col, r.frame.t_col), (1, 1, 1, 1));
        assert_eq!(check_property1(&descending_staircase()), Ok(true));
        assert_eq!(render_regions(&descending_staircase(), &r), "hh.\n.ht");
    }

    #[test]
    fn tall_first_column_top_in_lambda() {
        // Column 0 spans rows 2..3; X = 3, Y = 2.
        let p = poly(&[(0, 2), (0, 3), (1, 2), (1, 3), (1, 1), (2, 1), (2, 0), (3, 0)]);
        assert_eq!(classify(&p), Ok(ClassLabel::Descending));
        let r = regions(&p).unwrap();
        assert_eq!(r.region_of(Cell::new(0, 3)), Some(Region::Lambda));
        let total = r.omega.len() + r.xi.len() + r.theta.len() + r.lambda.len();
        assert_eq!(total, p.len());
    }

    #[test]
    fn regions_reject_other_classes() {
        let sq = poly(&[(0, 0), (1, 0), (0, 1), (1, 1)]);
        assert_eq!(regions(&sq), Err(AnatomyError::NotDescending(ClassLabel::Centered)));
    }

    #[test]
    fn reduce_staircase() {
        let (q, h) = reduce(&descending_staircase()).unwrap();
        assert_eq!(q, poly(&[(0, 1), (0, 0), (1, 0)]));
        assert_eq!(h, HookSpec { arm_row: 1, corner_col: 0, hook_type: HookType::A, k_stat: 0 });
        assert_eq!(q.len(), descending_staircase().len() - 1);
    }

    #[test]
    fn degenerate_arm() {
        let p = poly(&[(0, 2), (0, 1), (1, 1), (1, 0), (2, 0)]);
        // Column 0 spans rows 1..2, row 2 ends at column 0.
        assert_eq!(classify(&p), Ok(ClassLabel::Descending));
        assert_eq!(reduce(&p), Err(AnatomyError::DegenerateArm));
    }

    #[test]
    fn hooks_small() {
        assert!(enumerate_hooks(&poly(&[(0, 0)])).unwrap().is_empty());
        // The right-hand region must lie strictly below the arm.
        assert!(enumerate_hooks(&poly(&[(0, 0), (1, 0)])).unwrap().is_empty());
        let l = poly(&[(0, 1), (0, 0), (1, 0)]);
        assert_eq!(
            enumerate_hooks(&l).unwrap(),
            vec![HookSpec { arm_row: 1, corner_col: 0, hook_type: HookType::A, k_stat: 0 }]
        );
        let asc = poly(&[(0, 0), (1, 0), (1, 1), (2, 1)]);
        assert_eq!(enumerate_hooks(&asc), Err(AnatomyError::NotHookable(ClassLabel::Ascending)));
    }

    #[test]
    fn type_b_and_k() {
        // Leg on column 1 stops at row 1 while column 0 reaches row 0.
        let q = poly(&[(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 1)]);
        let hooks = enumerate_hooks(&q).unwrap();
        assert_eq!(hooks, vec![HookSpec { arm_row: 2, corner_col: 1, hook_type: HookType::B, k_stat: 0 }]);
        assert!(hooks.iter().all(|h| h.k_stat >= 0 && h.k_stat < q.height() as i32));
    }

    #[test]
    fn zigzag_paths() {
        assert!(all_pairs_vertical_zigzag(&poly(&[(0, 0), (1, 0), (0, 1), (1, 1)])));
        assert!(!all_pairs_vertical_zigzag(&poly(&[(0, 0), (1, 0), (1, 1), (2, 1)])));
    }
}
