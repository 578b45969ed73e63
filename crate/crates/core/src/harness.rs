//! Verification harness: the standard census classifier, the hooked census,
//! the structural scans, and a report tying enumeration to the generating
//! functions.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::anatomy::{self, ClassLabel};
use crate::census::{self, CensusClass, CensusError, CensusTable, ClassifyError};
use crate::grid::Polyomino;
use crate::pathmetry;
use crate::series::{BiSeries, Mono, SeriesError, USeries};
use crate::zgf::{self, BEquation, SystemOptions, SystemState, ZgfError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Zgf(#[from] ZgfError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("classification failed on {polyomino}: {message}")]
    Classify { polyomino: String, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid report JSON: {0}")]
    Json(String),
}

/// Labels every convex polyomino with its class, its convexity degree, and
/// the L-convex / Z-convex flags that follow from the degree.
pub fn standard_classifier(p: &Polyomino) -> Result<Vec<CensusClass>, ClassifyError> {
    let label = anatomy::classify(p)?;
    let degree = pathmetry::convexity_degree(p)?;
    let mut out = vec![
        CensusClass::Convex,
        match label {
            ClassLabel::Centered => CensusClass::Centered,
            ClassLabel::Ascending => CensusClass::Ascending,
            ClassLabel::Descending => CensusClass::Descending,
        },
        CensusClass::Degree(degree),
    ];
    if degree <= 1 {
        out.push(CensusClass::LConvex);
    }
    if degree <= 2 {
        out.push(CensusClass::ZConvex);
    }
    Ok(out)
}

pub fn standard_census(max_sp: u32, workers: usize) -> Result<CensusTable, CensusError> {
    census::census_table(max_sp, workers, standard_classifier)
}

/// Hook counts keyed by (columns, rows, k).
pub type HookCounts = BTreeMap<(u32, u32, i32), u64>;

/// Hooks on Z-convex polyominoes that are centered or descending.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HookCensus {
    /// Hooks on centered polyominoes only.
    pub centered_a: HookCounts,
    pub centered_b: HookCounts,
    /// Hooks on centered and descending polyominoes.
    pub hooked_a: HookCounts,
    pub hooked_b: HookCounts,
}

#[derive(Default)]
struct HookAcc {
    census: HookCensus,
    error: Option<(String, String)>,
}

fn merge_counts(into: &mut HookCounts, from: HookCounts) {
    for (k, v) in from {
        *into.entry(k).or_default() += v;
    }
}

pub fn hooked_census(max_sp: u32, workers: usize) -> Result<HookCensus, HarnessError> {
    let accs = census::fold_convex(max_sp, workers, |acc: &mut HookAcc, p| {
        if acc.error.is_some() {
            return;
        }
        let mut step = || -> Result<(), String> {
            let label = anatomy::classify(p).map_err(|e| e.to_string())?;
            if label == ClassLabel::Ascending || !pathmetry::is_k_convex(p, 2).map_err(|e| e.to_string())? {
                return Ok(());
            }
            for h in anatomy::enumerate_hooks(p).map_err(|e| e.to_string())? {
                let key = (p.width(), p.height(), h.k_stat);
                let c = &mut acc.census;
                let (all, centered) = match h.hook_type {
                    anatomy::HookType::A => (&mut c.hooked_a, &mut c.centered_a),
                    anatomy::HookType::B => (&mut c.hooked_b, &mut c.centered_b),
                };
                *all.entry(key).or_default() += 1;
                if label == ClassLabel::Centered {
                    *centered.entry(key).or_default() += 1;
                }
            }
            Ok(())
        };
        if let Err(message) = step() {
            acc.error = Some((p.to_json(), message));
        }
    })?;
    let mut out = HookCensus::default();
    for acc in accs {
        if let Some((polyomino, message)) = acc.error {
            return Err(HarnessError::Classify { polyomino, message });
        }
        merge_counts(&mut out.centered_a, acc.census.centered_a);
        merge_counts(&mut out.centered_b, acc.census.centered_b);
        merge_counts(&mut out.hooked_a, acc.census.hooked_a);
        merge_counts(&mut out.hooked_b, acc.census.hooked_b);
    }
    Ok(out)
}

/// Outcome of testing "Z-convex iff Property 1 holds and the reduction is
/// Z-convex" on every descending convex polyomino.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionScan {
    pub descending: u64,
    pub zconvex: u64,
    /// Z-convex but Property 1 fails or the reduction is not Z-convex.
    pub forward_failures: u64,
    /// Property 1 holds and the reduction is Z-convex, yet not Z-convex.
    pub backward_failures: u64,
    /// Z-convex, but the reduction carries no valid hook or is ascending.
    pub hook_failures: u64,
    /// Property 1 fails on some descending convex polyomino.
    pub property1_violations: u64,
    pub first_failure: Option<String>,
}

impl ReductionScan {
    pub fn passes(&self) -> bool {
        self.forward_failures == 0 && self.backward_failures == 0 && self.hook_failures == 0
    }

    fn merge(&mut self, o: ReductionScan) {
        self.descending += o.descending;
        self.zconvex += o.zconvex;
        self.forward_failures += o.forward_failures;
        self.backward_failures += o.backward_failures;
        self.hook_failures += o.hook_failures;
        self.property1_violations += o.property1_violations;
        if self.first_failure.is_none() {
            self.first_failure = o.first_failure;
        }
    }
}

fn scan_reduction(acc: &mut ReductionScan, p: &Polyomino) {
    if anatomy::classify(p) != Ok(ClassLabel::Descending) {
        return;
    }
    acc.descending += 1;
    let z = pathmetry::is_k_convex(p, 2) == Ok(true);
    let prop1 = anatomy::check_property1(p) == Ok(true);
    let phi_z = match anatomy::reduction(p) {
        Ok((q, _)) => pathmetry::is_k_convex(&q, 2) == Ok(true),
        Err(_) => false,
    };
    let mut failed = false;
    if !prop1 {
        acc.property1_violations += 1;
    }
    if z {
        acc.zconvex += 1;
        if !(prop1 && phi_z) {
            acc.forward_failures += 1;
            failed = true;
        }
        let hook_ok = match anatomy::reduce(p) {
            Ok((q, _)) => matches!(anatomy::classify(&q), Ok(ClassLabel::Centered | ClassLabel::Descending)),
            Err(_) => false,
        };
        if !hook_ok {
            acc.hook_failures += 1;
            failed = true;
        }
    } else if prop1 && phi_z {
        acc.backward_failures += 1;
        failed = true;
    }
    if failed && acc.first_failure.is_none() {
        acc.first_failure = Some(p.to_json());
    }
}

pub fn reduction_scan(max_sp: u32, workers: usize) -> Result<ReductionScan, HarnessError> {
    let mut out = ReductionScan::default();
    for acc in census::fold_convex(max_sp, workers, scan_reduction)? {
        out.merge(acc);
    }
    Ok(out)
}

/// Compares "centered" with "every pair joined by a down-across-down path".
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathScan {
    pub polyominoes: u64,
    pub centered: u64,
    pub mismatches: u64,
    pub first_mismatch: Option<String>,
}

pub fn centered_path_scan(max_sp: u32, workers: usize) -> Result<PathScan, HarnessError> {
    let accs = census::fold_convex(max_sp, workers, |acc: &mut PathScan, p| {
        acc.polyominoes += 1;
        let centered = anatomy::is_centered(p);
        acc.centered += u64::from(centered);
        if centered != anatomy::all_pairs_vertical_zigzag(p) {
            acc.mismatches += 1;
            acc.first_mismatch.get_or_insert_with(|| p.to_json());
        }
    })?;
    let mut out = PathScan::default();
    for a in accs {
        out.polyominoes += a.polyominoes;
        out.centered += a.centered;
        out.mismatches += a.mismatches;
        if out.first_mismatch.is_none() {
            out.first_mismatch = a.first_mismatch;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub criterion: u32,
    pub name: String,
    /// Where the expected value comes from.
    pub source: String,
    pub observed: String,
    pub expected: String,
    pub pass: bool,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Environment {
    pub order: u32,
    pub max_sp: u32,
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub environment: Environment,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// 0 when every check passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report JSON")
    }

    pub fn from_json(json: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(json).map_err(|e| HarnessError::Json(e.to_string()))
    }

    /// One line per check.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} [{}] {}: observed {}; expected {} ({})\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.criterion,
                c.name,
                c.observed,
                c.expected,
                c.source
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Census bound, also the degree bound for census-versus-series checks.
    pub max_sp: u32,
    /// Truncation order for series-versus-series checks.
    pub order: u32,
    pub workers: usize,
    /// Adds one to a closed-form coefficient, so that a correct build must
    /// fail; used to test the harness itself.
    pub perturb: bool,
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.max_sp < 2 {
            return Err(HarnessError::Config(format!("max-sp must be at least 2, got {}", self.max_sp)));
        }
        if self.order < self.max_sp {
            return Err(HarnessError::Config(format!(
                "order ({}) must be at least max-sp ({})",
                self.order, self.max_sp
            )));
        }
        if self.order > 40 {
            return Err(HarnessError::Config(format!("order {} is beyond what verify supports (40)", self.order)));
        }
        Ok(())
    }
}

pub const CONVEX_REFERENCE: [u64; 6] = [1, 2, 7, 28, 120, 528];
pub const LCONVEX_REFERENCE: [u64; 6] = [1, 2, 7, 24, 82, 280];
pub const ZCONVEX_REFERENCE: [u64; 6] = [1, 2, 7, 28, 116, 484];
pub const CATALAN_REFERENCE: [u64; 7] = [1, 1, 2, 5, 14, 42, 132];

/// Bounds used for the costlier scans, capped by `max_sp`.
pub const REDUCTION_SCAN_SP: u32 = 10;
pub const PATH_SCAN_SP: u32 = 9;
pub const HOOKED_CENTERED_DEGREE: u32 = 9;
pub const HOOKED_SYSTEM_DEGREE: u32 = 8;
/// The classic type-B equations first go wrong at total degree 9 or 10.
pub const CLASSIC_REJECTION_ORDER: u32 = 10;

type Outcome = (String, String, bool);

/// Runs the checks lazily, computing each shared artifact at most once.
pub struct Verifier {
    cfg: VerifyConfig,
    census: OnceLock<CensusTable>,
    hooks: OnceLock<HookCensus>,
    closed: OnceLock<BiSeries>,
    system: OnceLock<SystemState>,
}

fn cached<T>(cell: &OnceLock<T>, f: impl FnOnce() -> Result<T, HarnessError>) -> Result<&T, HarnessError> {
    if let Some(v) = cell.get() {
        return Ok(v);
    }
    let v = f()?;
    Ok(cell.get_or_init(|| v))
}

fn to_int(c: &BigRational) -> Option<BigInt> {
    c.is_integer().then(|| c.to_integer())
}

fn list<T: ToString>(v: impl IntoIterator<Item = T>) -> String {
    format!("[{}]", v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

/// First key where two count maps disagree, a missing key counting as 0.
fn first_difference<K: Ord + Clone + std::fmt::Debug>(
    observed: &BTreeMap<K, BigInt>,
    expected: &BTreeMap<K, BigInt>,
) -> Option<String> {
    let zero = BigInt::zero();
    let keys: std::collections::BTreeSet<&K> = observed.keys().chain(expected.keys()).collect();
    keys.into_iter().find_map(|k| {
        let (o, e) = (observed.get(k).unwrap_or(&zero), expected.get(k).unwrap_or(&zero));
        (o != e).then(|| format!("at {k:?}: {o} vs {e}"))
    })
}

fn compare_maps<K: Ord + Clone + std::fmt::Debug>(
    observed: BTreeMap<K, BigInt>,
    expected: BTreeMap<K, BigInt>,
    what: &str,
) -> Outcome {
    match first_difference(&observed, &expected) {
        None => (format!("{} {what} agree", expected.len().max(observed.len())), "all equal".into(), true),
        Some(d) => (format!("mismatch {d}"), "all equal".into(), false),
    }
}

fn series_by_dimensions(s: &BiSeries, bound: u32) -> BTreeMap<(u32, u32), BigInt> {
    s.bivariate_coefficients()
        .into_iter()
        .filter(|((i, j), _)| i + j <= bound)
        .map(|(k, c)| (k, to_int(&c).unwrap_or_else(|| BigInt::from(-1))))
        .collect()
}

fn useries_by_key(s: &USeries, bound: u32) -> BTreeMap<(u32, u32, i32), BigInt> {
    s.terms()
        .filter(|(m, _)| m.total() <= bound)
        .map(|(m, c)| ((m.i(), m.j(), m.k() as i32), to_int(c).unwrap_or_else(|| BigInt::from(-1))))
        .collect()
}

fn hook_counts(h: &HookCounts, bound: u32) -> BTreeMap<(u32, u32, i32), BigInt> {
    h.iter().filter(|((i, j, _), _)| i + j <= bound).map(|(k, v)| (*k, BigInt::from(*v))).collect()
}

fn census_by_dimensions(t: &CensusTable, class: CensusClass) -> BTreeMap<(u32, u32), BigInt> {
    t.by_dimensions(class).into_iter().map(|(k, v)| (k, BigInt::from(v))).collect()
}

fn reference_check(observed: &BTreeMap<u32, BigUint>, reference: &[u64], max_sp: u32) -> Outcome {
    let upto = (reference.len() as u32 + 1).min(max_sp);
    let got: Vec<String> = (2..=upto).map(|n| observed.get(&n).cloned().unwrap_or_default().to_string()).collect();
    let want: Vec<String> = reference[..(upto - 1) as usize].iter().map(|v| v.to_string()).collect();
    let pass = got == want;
    (list(got), list(want), pass)
}

impl Verifier {
    pub fn new(cfg: VerifyConfig) -> Result<Verifier, HarnessError> {
        cfg.validate()?;
        Ok(Verifier {
            cfg,
            census: OnceLock::new(),
            hooks: OnceLock::new(),
            closed: OnceLock::new(),
            system: OnceLock::new(),
        })
    }

    pub fn config(&self) -> VerifyConfig {
        self.cfg
    }

    pub fn census(&self) -> Result<&CensusTable, HarnessError> {
        cached(&self.census, || Ok(standard_census(self.cfg.max_sp, self.cfg.workers)?))
    }

    fn hooks(&self) -> Result<&HookCensus, HarnessError> {
        let bound = self.cfg.max_sp.min(HOOKED_CENTERED_DEGREE);
        cached(&self.hooks, || hooked_census(bound.max(2), self.cfg.workers))
    }

    /// Closed-form Z-convex series at the configured order, perturbed when asked.
    pub fn closed(&self) -> Result<&BiSeries, HarnessError> {
        cached(&self.closed, || {
            let p = zgf::gf_zconvex_closed(self.cfg.order)?;
            if !self.cfg.perturb {
                return Ok(p);
            }
            let bump = BiSeries::monomial(self.cfg.order, Mono::xy(1, 1), BigRational::one());
            Ok(&p + &bump)
        })
    }

    pub fn system(&self) -> Result<&SystemState, HarnessError> {
        cached(&self.system, || Ok(zgf::solve_system(self.cfg.order, SystemOptions::default())?))
    }

    fn sp_counts(&self, class: CensusClass) -> Result<BTreeMap<u32, BigUint>, HarnessError> {
        Ok(self.census()?.by_semiperimeter(class))
    }

    /// Checks belonging to one acceptance criterion (1 to 8).
    pub fn criterion(&self, n: u32) -> Result<Vec<CheckResult>, HarnessError> {
        let mut out = Vec::new();
        let mut run = |name: &str, source: &str, f: &dyn Fn() -> Result<Outcome, HarnessError>| {
            let start = Instant::now();
            let (observed, expected, pass) = f()?;
            out.push(CheckResult {
                criterion: n,
                name: name.to_string(),
                source: source.to_string(),
                observed,
                expected,
                pass,
                elapsed_ms: start.elapsed().as_millis() as u64,
            });
            Ok::<(), HarnessError>(())
        };
        let max_sp = self.cfg.max_sp;
        let order = self.cfg.order;
        match n {
            1 => {
                run("convex-reference-sequence", "reference sequence", &|| {
                    Ok(reference_check(&self.sp_counts(CensusClass::Convex)?, &CONVEX_REFERENCE, max_sp))
                })?;
                run("convex-census-vs-closed-count", "closed-form count", &|| {
                    let got = self.sp_counts(CensusClass::Convex)?;
                    let bad =
                        (2..=max_sp).find(|&n| got.get(&n).cloned().unwrap_or_default() != census::delest_viennot(n));
                    let last = got.get(&max_sp).cloned().unwrap_or_default();
                    Ok(match bad {
                        None => (
                            format!("sp 2..{max_sp} equal, {last} at sp {max_sp}"),
                            census::delest_viennot(max_sp).to_string(),
                            true,
                        ),
                        Some(n) => (
                            format!("sp {n}: {}", got.get(&n).cloned().unwrap_or_default()),
                            census::delest_viennot(n).to_string(),
                            false,
                        ),
                    })
                })?;
            }
            2 => {
                run("lconvex-reference-sequence", "reference sequence", &|| {
                    Ok(reference_check(&self.sp_counts(CensusClass::LConvex)?, &LCONVEX_REFERENCE, max_sp))
                })?;
                run("lconvex-recurrence", "linear recurrence", &|| {
                    let g = self.sp_counts(CensusClass::LConvex)?;
                    let at = |n: u32| BigInt::from(g.get(&n).cloned().unwrap_or_default());
                    let bad =
                        (5..=max_sp).find(|&n| at(n) != BigInt::from(4) * at(n - 1) - BigInt::from(2) * at(n - 2));
                    Ok(match bad {
                        None => (format!("holds for sp 5..{max_sp}"), "g(n) = 4 g(n-1) - 2 g(n-2)".into(), true),
                        Some(n) => (format!("fails at sp {n}"), "g(n) = 4 g(n-1) - 2 g(n-2)".into(), false),
                    })
                })?;
                run("lconvex-census-vs-series", "univariate rational series", &|| {
                    let g = zgf::gf_lconvex_univariate(order)?;
                    let coeffs = zgf::univariate_coefficients(&g);
                    let got = self.sp_counts(CensusClass::LConvex)?;
                    let obs =
                        (2..=max_sp).map(|n| (n, BigInt::from(got.get(&n).cloned().unwrap_or_default()))).collect();
                    let exp = (2..=max_sp).map(|n| (n, to_int(&coeffs[n as usize]).unwrap_or_default())).collect();
                    Ok(compare_maps(obs, exp, "semi-perimeters"))
                })?;
            }
            3 => {
                run("zconvex-reference-sequence", "reference sequence", &|| {
                    Ok(reference_check(&self.sp_counts(CensusClass::ZConvex)?, &ZCONVEX_REFERENCE, max_sp))
                })?;
                run("zconvex-census-vs-closed-form", "closed form diagonal", &|| {
                    let diag = self.closed()?.diagonal();
                    let got = self.sp_counts(CensusClass::ZConvex)?;
                    let obs =
                        (2..=max_sp).map(|n| (n, BigInt::from(got.get(&n).cloned().unwrap_or_default()))).collect();
                    let exp = (2..=max_sp).map(|n| (n, to_int(&diag[n as usize]).unwrap_or_default())).collect();
                    Ok(compare_maps(obs, exp, "semi-perimeters"))
                })?;
            }
            4 => {
                let table = |class: CensusClass| -> Result<BTreeMap<(u32, u32), BigInt>, HarnessError> {
                    Ok(census_by_dimensions(self.census()?, class))
                };
                run("convex-by-dimensions", "closed form F", &|| {
                    let f = zgf::gf_convex(order)?;
                    Ok(compare_maps(table(CensusClass::Convex)?, series_by_dimensions(&f, max_sp), "coefficients"))
                })?;
                run("centered-by-dimensions", "closed form C", &|| {
                    let c = zgf::gf_centered(order)?;
                    Ok(compare_maps(table(CensusClass::Centered)?, series_by_dimensions(&c, max_sp), "coefficients"))
                })?;
                run("zconvex-by-dimensions", "closed form P", &|| {
                    Ok(compare_maps(
                        table(CensusClass::ZConvex)?,
                        series_by_dimensions(self.closed()?, max_sp),
                        "coefficients",
                    ))
                })?;
            }
            5 => {
                run("system-vs-closed-form", "closed form P", &|| {
                    let s = self.system()?;
                    let closed = self.closed()?;
                    let pass = &s.p == closed;
                    let observed = match first_difference(
                        &series_by_dimensions(&s.p, order),
                        &series_by_dimensions(closed, order),
                    ) {
                        None => format!(
                            "equal at order {order} after {} rounds (valley B equation, multiplicity 2)",
                            s.iterations
                        ),
                        Some(d) => format!("differs {d}"),
                    };
                    Ok((observed, "bit-exact equality".into(), pass))
                })?;
                run("classic-b-equations-rejected", "closed form P", &|| {
                    let bound = order.max(CLASSIC_REJECTION_ORDER);
                    let closed = zgf::gf_zconvex_closed(bound)?;
                    let mut notes = Vec::new();
                    let mut pass = true;
                    for b_equation in [BEquation::Classic, BEquation::ClassicExpanded] {
                        let s = zgf::solve_system(bound, SystemOptions { b_equation, multiplicity: 2 })?;
                        let diff =
                            first_difference(&series_by_dimensions(&s.p, bound), &series_by_dimensions(&closed, bound));
                        pass &= diff.is_some();
                        notes.push(format!("{b_equation}: {}", diff.unwrap_or_else(|| "equal".into())));
                    }
                    let single = zgf::solve_system(bound, SystemOptions { multiplicity: 1, ..Default::default() })?;
                    let equal = single.p == closed;
                    pass &= !equal;
                    notes.push(format!("multiplicity 1: {}", if equal { "equal" } else { "differs" }));
                    Ok((notes.join("; "), "every alternative differs".into(), pass))
                })?;
            }
            6 => {
                let bound = max_sp.min(REDUCTION_SCAN_SP);
                run("reduction-equivalence", "structural scan", &|| {
                    let s = reduction_scan(bound, self.cfg.workers)?;
                    let observed = format!(
                        "{} descending up to sp {bound}, {} Z-convex; failures forward {}, backward {}, hook {}{}",
                        s.descending,
                        s.zconvex,
                        s.forward_failures,
                        s.backward_failures,
                        s.hook_failures,
                        s.first_failure.as_deref().map(|f| format!(", first {f}")).unwrap_or_default()
                    );
                    Ok((observed, "no failures".into(), s.passes()))
                })?;
                let bound = max_sp.min(PATH_SCAN_SP);
                run("centered-path-characterization", "structural scan", &|| {
                    let s = centered_path_scan(bound, self.cfg.workers)?;
                    let observed = format!(
                        "{} polyominoes up to sp {bound}, {} centered, {} mismatches",
                        s.polyominoes, s.centered, s.mismatches
                    );
                    Ok((observed, "0 mismatches".into(), s.mismatches == 0))
                })?;
                run("ascending-equals-descending", "reflection symmetry", &|| {
                    let asc = self.sp_counts(CensusClass::Ascending)?;
                    let desc = self.sp_counts(CensusClass::Descending)?;
                    Ok((list(asc.values()), list(desc.values()), asc == desc))
                })?;
                run("classes-partition-convex", "census", &|| {
                    let conv = self.sp_counts(CensusClass::Convex)?;
                    let parts = [CensusClass::Centered, CensusClass::Ascending, CensusClass::Descending]
                        .map(|c| self.sp_counts(c));
                    let [c, a, d] = parts;
                    let (c, a, d) = (c?, a?, d?);
                    let sum: BTreeMap<u32, BigUint> = conv
                        .keys()
                        .map(|n| {
                            let g = |m: &BTreeMap<u32, BigUint>| m.get(n).cloned().unwrap_or_default();
                            (*n, g(&c) + g(&a) + g(&d))
                        })
                        .collect();
                    Ok((list(sum.values()), list(conv.values()), sum == conv))
                })?;
            }
            7 => {
                let one = BiSeries::one(order);
                let (x, y) = (BiSeries::x(order), BiSeries::y(order));
                let d = BiSeries::solve_d(order);
                let c = BiSeries::solve_kernel_root(order);
                let zero_check = |s: BiSeries| -> Outcome {
                    match s.terms().next() {
                        None => (format!("zero through order {order}"), "zero".into(), true),
                        Some((m, v)) => (format!("nonzero at {m}: {v}"), "zero".into(), false),
                    }
                };
                run("d-fixed-point", "defining equation", &|| Ok(zero_check(&d - &(&(&x + &d) * &(&y + &d)))))?;
                run("d-square-root", "discriminant identity", &|| {
                    let s = &(&(&one - &x) - &y) - &d.scale_int(2);
                    Ok(zero_check(&(&s * &s) - &zgf::delta(order)))
                })?;
                run("kernel-residual", "defining equation", &|| {
                    let r = &(&(&c - &one) - &(&(&x - &y) * &c)) - &(&y * &(&c * &c));
                    Ok(zero_check(r))
                })?;
                run("d-from-kernel-root", "parametrization", &|| Ok(zero_check(&d - &(&y * &(&c - &one)))))?;
                run("catalan-diagonal", "reference sequence", &|| {
                    let diag = c.diagonal();
                    let upto = CATALAN_REFERENCE.len().min(order as usize + 1);
                    let got: Vec<String> = diag[..upto].iter().map(|v| v.to_string()).collect();
                    let want: Vec<String> = CATALAN_REFERENCE[..upto].iter().map(|v| v.to_string()).collect();
                    let pass = got == want;
                    Ok((list(got), list(want), pass))
                })?;
            }
            8 => {
                let centered_bound = max_sp.min(HOOKED_CENTERED_DEGREE);
                let system_bound = max_sp.min(HOOKED_SYSTEM_DEGREE);
                let (ca, cb) = zgf::gf_centered_hooked(order)?;
                run("hooked-centered-type-a", "hook census", &|| {
                    Ok(compare_maps(
                        hook_counts(&self.hooks()?.centered_a, centered_bound),
                        useries_by_key(&ca, centered_bound),
                        "coefficients",
                    ))
                })?;
                run("hooked-centered-type-b", "hook census", &|| {
                    Ok(compare_maps(
                        hook_counts(&self.hooks()?.centered_b, centered_bound),
                        useries_by_key(&cb, centered_bound),
                        "coefficients",
                    ))
                })?;
                run("hooked-type-a", "hook census", &|| {
                    let s = self.system()?;
                    Ok(compare_maps(
                        hook_counts(&self.hooks()?.hooked_a, system_bound),
                        useries_by_key(&s.a, system_bound),
                        "coefficients",
                    ))
                })?;
                run("hooked-type-b", "hook census", &|| {
                    let s = self.system()?;
                    Ok(compare_maps(
                        hook_counts(&self.hooks()?.hooked_b, system_bound),
                        useries_by_key(&s.b, system_bound),
                        "coefficients",
                    ))
                })?;
            }
            _ => return Err(HarnessError::Config(format!("no criterion {n}; criteria run from 1 to 8"))),
        }
        Ok(out)
    }

    pub fn run_all(&self) -> Result<VerificationReport, HarnessError> {
        let mut checks = Vec::new();
        for n in 1..=8 {
            checks.extend(self.criterion(n)?);
        }
        Ok(VerificationReport {
            environment: Environment { order: self.cfg.order, max_sp: self.cfg.max_sp, workers: self.cfg.workers },
            checks,
        })
    }
}

/// Ratio of the Z-convex count at semi-perimeter `n + 2` to `n 4^n / 24`,
/// for `n` up to `order - 2`. It tends to 1, slowly: the correction is of
/// order `n^(-1/2)`. Informational only.
pub fn growth_trend(order: u32) -> Result<Vec<(u32, f64)>, HarnessError> {
    let p = zgf::gf_zconvex_univariate(order)?;
    Ok(zgf::univariate_coefficients(&p)
        .iter()
        .enumerate()
        .skip(3)
        .map(|(sp, c)| {
            let n = (sp - 2) as f64;
            let v = c.to_integer().to_f64().unwrap_or(f64::NAN);
            ((sp - 2) as u32, v / (n * 4f64.powf(n) / 24.0))
        })
        .collect())
}
