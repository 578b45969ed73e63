//! Exhaustive generation of convex polyominoes and census tables.
//!
//! Convex polyominoes are generated column by column as [`ColumnProfile`]s.
//! Bottoms must form a valley (non-increasing, then non-decreasing) and tops a
//! mountain, which is exactly row-convexity once consecutive columns overlap,
//! so non-convex prefixes are never extended.
//!
//! The search space is split into [`Partition`]s keyed by (width, length of
//! the first column). Workers own whole partitions and private accumulators;
//! tables are merged by addition, so the result does not depend on scheduling.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::Polyomino;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("classifier failed on {polyomino}: {message}")]
    Classifier { polyomino: String, message: String },
    #[error("semi-perimeter bound must be at least 2, got {0}")]
    BoundTooSmall(u32),
    #[error("could not build worker pool: {0}")]
    Pool(String),
    #[error("invalid census JSON: {0}")]
    Json(String),
    #[error("unknown class label {0:?}")]
    UnknownClass(String),
}

/// A convex polyomino as a sequence of column intervals `(bottom, top)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColumnProfile {
    columns: Vec<(i32, i32)>,
}

impl ColumnProfile {
    /// Checks every profile invariant: non-empty intervals, overlap of
    /// consecutive columns, valley bottoms, mountain tops and `min bottom = 0`.
    pub fn new(columns: Vec<(i32, i32)>) -> Option<ColumnProfile> {
        let ok = !columns.is_empty()
            && columns.iter().all(|&(b, t)| b <= t)
            && columns.windows(2).all(|w| w[0].0.max(w[1].0) <= w[0].1.min(w[1].1))
            && is_valley(columns.iter().map(|c| c.0))
            && is_valley(columns.iter().map(|c| -c.1))
            && columns.iter().map(|c| c.0).min() == Some(0);
        ok.then_some(ColumnProfile { columns })
    }

    pub fn from_polyomino(p: &Polyomino) -> Option<ColumnProfile> {
        if !p.is_convex() {
            return None;
        }
        Self::new(p.columns().iter().map(|s| (s.min, s.max)).collect())
    }

    pub fn columns(&self) -> &[(i32, i32)] {
        &self.columns
    }

    pub fn width(&self) -> u32 {
        self.columns.len() as u32
    }

    pub fn height(&self) -> u32 {
        (self.columns.iter().map(|c| c.1).max().unwrap() + 1) as u32
    }

    pub fn semi_perimeter(&self) -> u32 {
        self.width() + self.height()
    }

    pub fn to_polyomino(&self) -> Polyomino {
        Polyomino::from_column_intervals(&self.columns)
    }
}

fn is_valley(seq: impl Iterator<Item = i32>) -> bool {
    let mut rising = false;
    let mut prev: Option<i32> = None;
    for v in seq {
        if let Some(p) = prev {
            if v > p {
                rising = true;
            } else if v < p && rising {
                return false;
            }
        }
        prev = Some(v);
    }
    true
}

/// One unit of parallel work: all convex polyominoes of a given width whose
/// first column has a given length, up to the semi-perimeter bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    pub width: u32,
    pub first_column: u32,
}

/// All partitions needed to cover semi-perimeters `2..=max_sp`.
pub fn partitions(max_sp: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    for width in 1..max_sp {
        for first_column in 1..=(max_sp - width) {
            out.push(Partition { width, first_column });
        }
    }
    out
}

struct Dfs<'a, F: FnMut(&ColumnProfile)> {
    width: usize,
    height: i32,
    cols: Vec<(i32, i32)>,
    visit: &'a mut F,
}

impl<F: FnMut(&ColumnProfile)> Dfs<'_, F> {
    // `bottom_rising`: the bottoms have strictly increased at least once, so
    // they may no longer decrease. `top_falling` is the mirror flag for tops.
    fn extend(&mut self, min_bottom: i32, max_top: i32, bottom_rising: bool, top_falling: bool) {
        if self.cols.len() == self.width {
            if min_bottom == 0 && max_top == self.height - 1 {
                let profile = ColumnProfile { columns: std::mem::take(&mut self.cols) };
                (self.visit)(&profile);
                self.cols = profile.columns;
            }
            return;
        }
        // Once bottoms rise they never come back down to 0; same for tops.
        if (bottom_rising && min_bottom > 0) || (top_falling && max_top < self.height - 1) {
            return;
        }
        let (pb, pt) = *self.cols.last().unwrap();
        let b_lo = if bottom_rising { pb } else { 0 };
        for b in b_lo..=pt {
            let t_hi = if top_falling { pt } else { self.height - 1 };
            for t in b.max(pb)..=t_hi {
                self.cols.push((b, t));
                self.extend(min_bottom.min(b), max_top.max(t), bottom_rising || b > pb, top_falling || t < pt);
                self.cols.pop();
            }
        }
    }
}

/// Visits every convex polyomino of the partition with semi-perimeter at most
/// `max_sp`, each exactly once.
pub fn for_each_in_partition<F: FnMut(&ColumnProfile)>(max_sp: u32, part: Partition, mut visit: F) {
    let width = part.width;
    let len = part.first_column as i32;
    for height in part.first_column..=max_sp.saturating_sub(width) {
        let h = height as i32;
        for b0 in 0..=(h - len) {
            let mut dfs = Dfs { width: width as usize, height: h, cols: vec![(b0, b0 + len - 1)], visit: &mut visit };
            dfs.extend(b0, b0 + len - 1, false, false);
        }
    }
}

/// Visits every convex polyomino with semi-perimeter at most `max_sp`.
pub fn for_each_convex<F: FnMut(&ColumnProfile)>(max_sp: u32, mut visit: F) {
    for part in partitions(max_sp) {
        for_each_in_partition(max_sp, part, &mut visit);
    }
}

/// Streams every convex polyomino with semi-perimeter at most `max_sp`.
///
/// Partitions are materialized one at a time.
pub fn enumerate_convex(max_sp: u32) -> impl Iterator<Item = Polyomino> {
    partitions(max_sp).into_iter().flat_map(move |part| {
        let mut batch = Vec::new();
        for_each_in_partition(max_sp, part, |p| batch.push(p.to_polyomino()));
        batch
    })
}

/// Class labels used as the last component of census keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CensusClass {
    Convex,
    Centered,
    Ascending,
    Descending,
    LConvex,
    ZConvex,
    Degree(u32),
}

impl CensusClass {
    /// Classes whose census is invariant under transposition.
    pub fn is_transpose_symmetric(&self) -> bool {
        matches!(self, CensusClass::Convex | CensusClass::LConvex | CensusClass::ZConvex | CensusClass::Degree(_))
    }
}

impl fmt::Display for CensusClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CensusClass::Convex => f.write_str("convex"),
            CensusClass::Centered => f.write_str("centered"),
            CensusClass::Ascending => f.write_str("ascending"),
            CensusClass::Descending => f.write_str("descending"),
            CensusClass::LConvex => f.write_str("l-convex"),
            CensusClass::ZConvex => f.write_str("z-convex"),
            CensusClass::Degree(k) => write!(f, "degree={k}"),
        }
    }
}

impl FromStr for CensusClass {
    type Err = CensusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "convex" => CensusClass::Convex,
            "centered" => CensusClass::Centered,
            "ascending" => CensusClass::Ascending,
            "descending" => CensusClass::Descending,
            "l-convex" => CensusClass::LConvex,
            "z-convex" => CensusClass::ZConvex,
            other => other
                .strip_prefix("degree=")
                .and_then(|k| k.parse().ok())
                .map(CensusClass::Degree)
                .ok_or_else(|| CensusError::UnknownClass(s.to_string()))?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CensusKey {
    pub semiperimeter: u32,
    pub width: u32,
    pub height: u32,
    pub class: CensusClass,
}

impl CensusKey {
    pub fn new(width: u32, height: u32, class: CensusClass) -> Self {
        CensusKey { semiperimeter: width + height, width, height, class }
    }
}

impl Ord for CensusKey {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.semiperimeter, self.width, self.height)
            .cmp(&(other.semiperimeter, other.width, other.height))
            .then_with(|| self.class.to_string().cmp(&other.class.to_string()))
    }
}

impl PartialOrd for CensusKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact counts keyed by (semi-perimeter, width, height, class).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CensusTable {
    counts: BTreeMap<CensusKey, BigUint>,
}

#[derive(Serialize, Deserialize)]
struct CensusRow {
    semiperimeter: u32,
    width: u32,
    height: u32,
    class: String,
    count: serde_json::Value,
}

impl CensusTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, key: CensusKey, n: impl Into<BigUint>) {
        *self.counts.entry(key).or_default() += n.into();
    }

    pub fn merge(&mut self, other: CensusTable) {
        for (k, v) in other.counts {
            self.add(k, v);
        }
    }

    pub fn get(&self, key: &CensusKey) -> BigUint {
        self.counts.get(key).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CensusKey, &BigUint)> {
        self.counts.iter()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Count of `class` at `(width, height)`, 0 if absent.
    pub fn count(&self, width: u32, height: u32, class: CensusClass) -> BigUint {
        self.get(&CensusKey::new(width, height, class))
    }

    /// Totals of `class` by semi-perimeter.
    pub fn by_semiperimeter(&self, class: CensusClass) -> BTreeMap<u32, BigUint> {
        let mut out: BTreeMap<u32, BigUint> = BTreeMap::new();
        for (k, v) in &self.counts {
            if k.class == class {
                *out.entry(k.semiperimeter).or_default() += v;
            }
        }
        out
    }

    /// Counts of `class` by `(width, height)`.
    pub fn by_dimensions(&self, class: CensusClass) -> BTreeMap<(u32, u32), BigUint> {
        self.counts.iter().filter(|(k, _)| k.class == class).map(|(k, v)| ((k.width, k.height), v.clone())).collect()
    }

    pub fn classes(&self) -> Vec<CensusClass> {
        let mut seen: Vec<CensusClass> = Vec::new();
        for k in self.counts.keys() {
            if !seen.contains(&k.class) {
                seen.push(k.class);
            }
        }
        seen
    }

    /// The table with width and height exchanged.
    pub fn transposed(&self) -> CensusTable {
        let mut out = CensusTable::new();
        for (k, v) in &self.counts {
            out.add(CensusKey::new(k.height, k.width, k.class), v.clone());
        }
        out
    }

    /// Restriction to the given classes.
    pub fn restrict(&self, keep: &[CensusClass]) -> CensusTable {
        CensusTable {
            counts: self.counts.iter().filter(|(k, _)| keep.contains(&k.class)).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    /// `semiperimeter,width,height,class,count` rows in key order, `\n` line ends.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("semiperimeter,width,height,class,count\n");
        for (k, v) in &self.counts {
            out.push_str(&format!("{},{},{},{},{}\n", k.semiperimeter, k.width, k.height, k.class, v));
        }
        out
    }

    /// JSON array of row objects in key order. Counts are JSON integers when
    /// they fit in 64 bits and decimal strings otherwise.
    pub fn to_json(&self) -> String {
        let rows: Vec<CensusRow> = self
            .counts
            .iter()
            .map(|(k, v)| CensusRow {
                semiperimeter: k.semiperimeter,
                width: k.width,
                height: k.height,
                class: k.class.to_string(),
                count: match v.to_u64() {
                    Some(n) => n.into(),
                    None => v.to_string().into(),
                },
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("rows serialize")
    }

    pub fn from_json(json: &str) -> Result<CensusTable, CensusError> {
        let rows: Vec<CensusRow> = serde_json::from_str(json).map_err(|e| CensusError::Json(e.to_string()))?;
        let mut out = CensusTable::new();
        for r in rows {
            let count: BigUint = match &r.count {
                serde_json::Value::Number(n) => n.as_u64().map(BigUint::from),
                serde_json::Value::String(s) => s.parse().ok(),
                _ => None,
            }
            .ok_or_else(|| CensusError::Json(format!("bad count {}", r.count)))?;
            if r.semiperimeter != r.width + r.height {
                return Err(CensusError::Json(format!("semiperimeter {} != width + height", r.semiperimeter)));
            }
            out.add(CensusKey::new(r.width, r.height, r.class.parse()?), count);
        }
        Ok(out)
    }
}

/// Failure reported by a classifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyError(pub String);

impl<E: std::error::Error> From<E> for ClassifyError {
    fn from(e: E) -> Self {
        ClassifyError(e.to_string())
    }
}

/// Runs `classifier` over every convex polyomino with semi-perimeter at most
/// `max_sp` and counts the labels it returns.
///
/// `workers = 1` runs on the calling thread; otherwise partitions are spread
/// over a dedicated pool of that many threads.
pub fn census_table<C>(max_sp: u32, workers: usize, classifier: C) -> Result<CensusTable, CensusError>
where
    C: Fn(&Polyomino) -> Result<Vec<CensusClass>, ClassifyError> + Sync,
{
    if max_sp < 2 {
        return Err(CensusError::BoundTooSmall(max_sp));
    }
    let parts = partitions(max_sp);
    let run = |part: &Partition| -> Result<BTreeMap<CensusKey, u64>, CensusError> {
        let mut local: BTreeMap<CensusKey, u64> = BTreeMap::new();
        let mut failure = None;
        for_each_in_partition(max_sp, *part, |profile| {
            if failure.is_some() {
                return;
            }
            let p = profile.to_polyomino();
            match classifier(&p) {
                Ok(labels) => {
                    for class in labels {
                        *local.entry(CensusKey::new(p.width(), p.height(), class)).or_default() += 1;
                    }
                }
                Err(ClassifyError(message)) => {
                    failure = Some(CensusError::Classifier { polyomino: p.to_json(), message });
                }
            }
        });
        match failure {
            Some(e) => Err(e),
            None => Ok(local),
        }
    };
    let locals: Vec<BTreeMap<CensusKey, u64>> = if workers <= 1 {
        parts.iter().map(run).collect::<Result<_, _>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| CensusError::Pool(e.to_string()))?;
        pool.install(|| parts.par_iter().map(run).collect::<Result<_, _>>())?
    };
    let mut table = CensusTable::new();
    for local in locals {
        for (k, v) in local {
            if !v.is_zero() {
                table.add(k, v);
            }
        }
    }
    Ok(table)
}

/// Folds every convex polyomino with semi-perimeter at most `max_sp` into
/// one accumulator per partition; the accumulators come back in partition
/// order whatever the worker count.
pub fn fold_convex<T, F>(max_sp: u32, workers: usize, fold: F) -> Result<Vec<T>, CensusError>
where
    T: Default + Send,
    F: Fn(&mut T, &Polyomino) + Sync,
{
    if max_sp < 2 {
        return Err(CensusError::BoundTooSmall(max_sp));
    }
    let parts = partitions(max_sp);
    let run = |part: &Partition| {
        let mut acc = T::default();
        for_each_in_partition(max_sp, *part, |profile| fold(&mut acc, &profile.to_polyomino()));
        acc
    };
    if workers <= 1 {
        return Ok(parts.iter().map(run).collect());
    }
    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(|e| CensusError::Pool(e.to_string()))?;
    Ok(pool.install(|| parts.par_iter().map(run).collect()))
}

/// Delest–Viennot count of convex polyominoes with semi-perimeter `sp`.
pub fn delest_viennot(sp: u32) -> BigUint {
    match sp {
        0 | 1 => BigUint::zero(),
        2 => BigUint::from(1u32),
        3 => BigUint::from(2u32),
        _ => {
            let n = sp - 4;
            let four_n = BigUint::from(4u32).pow(n);
            let binom = central_binomial(n);
            BigUint::from(2 * n + 11) * four_n - BigUint::from(4 * (2 * n + 1)) * binom
        }
    }
}

fn central_binomial(n: u32) -> BigUint {
    // C(2n, n) via the running product C(2k,k) = C(2k-2,k-1) * 2(2k-1) / k.
    let mut c = BigUint::from(1u32);
    for k in 1..=n {
        c = c * BigUint::from(2 * (2 * k - 1)) / BigUint::from(k);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn counts_by_sp(max_sp: u32) -> BTreeMap<u32, u64> {
        let mut out = BTreeMap::new();
        for_each_convex(max_sp, |p| *out.entry(p.semi_perimeter()).or_default() += 1);
        out
    }

    #[test]
    fn small_counts() {
        let c = counts_by_sp(7);
        assert_eq!(c.values().copied().collect::<Vec<_>>(), vec![1, 2, 7, 28, 120, 528]);
    }

    #[test]
    fn emitted_once_and_convex() {
        let all: Vec<Polyomino> = enumerate_convex(6).collect();
        let distinct: HashSet<&Polyomino> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all.iter().all(Polyomino::is_convex));
        assert_eq!(all.iter().filter(|p| p.semi_perimeter() == 6).count(), 120);
    }

    #[test]
    fn dimension_marginal_at_four() {
        let t = census_table(4, 1, |p| Ok(if p.is_convex() { vec![CensusClass::Convex] } else { vec![] })).unwrap();
        let sp4: BTreeMap<(u32, u32), BigUint> =
            t.by_dimensions(CensusClass::Convex).into_iter().filter(|((w, h), _)| w + h == 4).collect();
        let expected: BTreeMap<(u32, u32), BigUint> =
            [((1, 3), 1u32), ((2, 2), 5), ((3, 1), 1)].into_iter().map(|(k, v)| (k, BigUint::from(v))).collect();
        assert_eq!(sp4, expected);
        assert_eq!(t.transposed(), t);
    }

    #[test]
    fn parallel_matches_sequential() {
        let classify = |p: &Polyomino| -> Result<Vec<CensusClass>, ClassifyError> {
            Ok(vec![CensusClass::Convex, CensusClass::Degree(p.len() as u32 % 3)])
        };
        let seq = census_table(9, 1, classify).unwrap();
        let par = census_table(9, 4, classify).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq.to_csv(), par.to_csv());
    }

    #[test]
    fn classifier_failure_names_polyomino() {
        let err = census_table(3, 1, |p| if p.len() == 2 { Err(ClassifyError("boom".into())) } else { Ok(vec![]) })
            .unwrap_err();
        match err {
            CensusError::Classifier { polyomino, message } => {
                assert!(polyomino.starts_with("{\"cells\":"));
                assert_eq!(message, "boom");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn delest_viennot_values() {
        let v: Vec<u64> = (2..=7).map(|sp| delest_viennot(sp).to_u64().unwrap()).collect();
        assert_eq!(v, vec![1, 2, 7, 28, 120, 528]);
        assert_eq!(delest_viennot(12), BigUint::from(894_312u32));
    }

    #[test]
    fn profile_validation() {
        assert!(ColumnProfile::new(vec![(0, 0), (0, 1)]).is_some());
        assert!(ColumnProfile::new(vec![(1, 1), (2, 2)]).is_none()); // no overlap, min bottom 1
        assert!(ColumnProfile::new(vec![(0, 2), (2, 2), (0, 2)]).is_none()); // bottoms peak
        assert!(ColumnProfile::new(vec![]).is_none());
    }

    #[test]
    fn csv_and_json() {
        let mut t = CensusTable::new();
        t.add(CensusKey::new(2, 1, CensusClass::ZConvex), 3u32);
        t.add(CensusKey::new(1, 1, CensusClass::Convex), 1u32);
        t.add(CensusKey::new(1, 1, CensusClass::Centered), 1u32);
        assert_eq!(
            t.to_csv(),
            "semiperimeter,width,height,class,count\n2,1,1,centered,1\n2,1,1,convex,1\n3,2,1,z-convex,3\n"
        );
        assert_eq!(CensusTable::from_json(&t.to_json()).unwrap(), t);
        assert!(matches!("degree=x".parse::<CensusClass>(), Err(CensusError::UnknownClass(_))));
        assert_eq!("degree=4".parse::<CensusClass>().unwrap(), CensusClass::Degree(4));
    }
}
