//! Generating functions by (columns, rows): closed forms for convex,
//! L-convex, centered and Z-convex polyominoes, the hooked centered series,
//! and the functional-equation system for hooked polyominoes solved by
//! fixed-point iteration.
//!
//! `x` marks columns, `y` rows, `u` the hook statistic `k`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{Bi, BiSeries, DiagBasis, Kind, Mono, Series, SeriesError, TriSeries, USeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZgfError {
    #[error("truncation order {0} is too small, need at least 2")]
    OrderTooSmall(u32),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("the two constructions of the centered series differ at x^{0} y^{1}")]
    CenteredMismatch(u32, u32),
    #[error("{0} has a term whose u-degree exceeds its y-degree")]
    UDegree(&'static str),
    #[error("system did not settle within {0} rounds")]
    NoConvergence(u32),
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn check_order(order: u32) -> Result<(), ZgfError> {
    if order < 2 {
        Err(ZgfError::OrderTooSmall(order))
    } else {
        Ok(())
    }
}

/// Building blocks shared by the hooked-polyomino equations; `z = x y*`.
#[derive(Debug, Clone)]
pub struct Toolbox {
    pub order: u32,
    pub x: BiSeries,
    pub y: BiSeries,
    pub ystar: BiSeries,
    pub yplus: BiSeries,
    pub z: BiSeries,
    pub zstar: BiSeries,
    pub zplus: BiSeries,
    /// Possibly empty staircases, `u` marking their height: `(z* y u)*`.
    pub st: USeries,
    /// Non-empty piles of lines: `((z*)^2 y)+`.
    pub pi: BiSeries,
}

impl Toolbox {
    pub fn new(order: u32) -> Result<Toolbox, ZgfError> {
        let x = BiSeries::x(order);
        let y = BiSeries::y(order);
        let ystar = y.star()?;
        let yplus = y.plus()?;
        let z = &x * &ystar;
        let zstar = z.star()?;
        let zplus = z.plus()?;
        let st = (&(&USeries::lift(&zstar) * &USeries::lift(&y)) * &USeries::u(order)).star()?;
        let pi = (&(&zstar * &zstar) * &y).plus()?;
        Ok(Toolbox { order, x, y, ystar, yplus, z, zstar, zplus, st, pi })
    }
}

/// `(1 - x - y)^2 - 4xy`.
pub fn delta(order: u32) -> BiSeries {
    let one = BiSeries::one(order);
    let (x, y) = (BiSeries::x(order), BiSeries::y(order));
    let s = &(&one - &x) - &y;
    &(&s * &s) - &(&x * &y).scale_int(4)
}

/// Convex polyominoes: `8x²y²d/Δ² + xy(1 - x - y - xy)/Δ`.
pub fn gf_convex(order: u32) -> Result<BiSeries, ZgfError> {
    check_order(order)?;
    let one = BiSeries::one(order);
    let (x, y) = (BiSeries::x(order), BiSeries::y(order));
    let xy = &x * &y;
    let d = BiSeries::solve_d(order);
    let inv = delta(order).invert()?;
    let first = &(&(&xy * &xy) * &d).scale_int(8) * &(&inv * &inv);
    let second = &(&xy * &(&(&(&one - &x) - &y) - &xy)) * &inv;
    Ok(&first + &second)
}

/// L-convex polyominoes by semi-perimeter: `t²(1 - 2t + t²)/(1 - 4t + 2t²)`,
/// as a series in `x` standing for `t`.
pub fn gf_lconvex_univariate(order: u32) -> Result<BiSeries, ZgfError> {
    check_order(order)?;
    let one = BiSeries::one(order);
    let t = BiSeries::x(order);
    let t2 = &t * &t;
    let num = &t2 * &(&(&one - &t.scale_int(2)) + &t2);
    let den = &(&one - &t.scale_int(4)) + &t2.scale_int(2);
    Ok(num.try_div(&den)?)
}

/// Stacks in the column variable `c` and `y`: `c⁺ ((c*)² y)*`, which is
/// `c(1-c)/((1-c)² - y)`.
fn stack<K: Kind>(c: &Series<K>, y: &Series<K>) -> Result<Series<K>, SeriesError> {
    let cs = c.star()?;
    Ok(&c.plus()? * &(&(&cs * &cs) * y).star()?)
}

/// Stacks `S` and strict stacks `S - yS` whose first row is shorter than
/// the base.
pub fn gf_stack(order: u32) -> Result<(BiSeries, BiSeries), SeriesError> {
    let y = BiSeries::y(order);
    let s = stack(&BiSeries::x(order), &y)?;
    let strict = &s - &(&y * &s);
    Ok((s, strict))
}

/// Centered polyominoes through the Hadamard product of two strict stacks
/// glued under a rectangle: `y⁺ (S> ⊙ S>)`.
pub fn gf_centered_hadamard(order: u32) -> Result<BiSeries, ZgfError> {
    check_order(order)?;
    let y = TriSeries::y(order);
    let s = stack(&TriSeries::aux(order), &y)?;
    let strict = &s - &(&y * &s);
    let glued = strict.hadamard(&strict.mark_columns())?.collapse();
    let yplus = BiSeries::y(order).plus()?;
    Ok(&yplus * &glued.cast::<Bi>()?)
}

/// Centered polyominoes, rational form:
/// `xy(1 - y - xy - 2x + x²)(1 - y) / ((1 - x - y)(1 - 2x - 2y + x² - 2xy + y²))`.
pub fn gf_centered_closed(order: u32) -> Result<BiSeries, ZgfError> {
    check_order(order)?;
    let one = BiSeries::one(order);
    let (x, y) = (BiSeries::x(order), BiSeries::y(order));
    let (xx, xy, yy) = (&x * &x, &x * &y, &y * &y);
    let inner = &(&(&(&one - &y) - &xy) - &x.scale_int(2)) + &xx;
    let num = &(&xy * &inner) * &(&one - &y);
    let lin = &(&one - &x) - &y;
    let quad = &(&(&(&(&one - &x.scale_int(2)) - &y.scale_int(2)) + &xx) - &xy.scale_int(2)) + &yy;
    Ok(num.try_div(&(&lin * &quad))?)
}

/// Centered polyominoes; both constructions are computed and must agree.
pub fn gf_centered(order: u32) -> Result<BiSeries, ZgfError> {
    let closed = gf_centered_closed(order)?;
    let glued = gf_centered_hadamard(order)?;
    if let Some(((i, j), _)) = (&closed - &glued).bivariate_coefficients().into_iter().next() {
        return Err(ZgfError::CenteredMismatch(i, j));
    }
    Ok(closed)
}

/// Hooked centered polyominoes with a type A and a type B hook, `u` marking
/// `k`. The auxiliary variable counts the columns left of the leg and is
/// glued to a stack along the arm.
pub fn gf_centered_hooked(order: u32) -> Result<(USeries, USeries), ZgfError> {
    check_order(order)?;
    let x = TriSeries::x(order);
    let y = TriSeries::y(order);
    let u = TriSeries::u(order);
    let z = &TriSeries::aux(order) * &x;
    let zs = z.star()?;
    let ys = y.star()?;
    let st = (&(&zs * &y) * &u).star()?;
    let tail = (&(&x * &ys) * &(&y * &zs).star()?).plus()?;
    let fa = &(&(&(&y * &y) * &z.plus()?) * &st) * &tail;
    let pi = (&(&zs * &zs) * &y).plus()?;
    let fb = &(&fa * &z) * &pi;
    let s = stack(&TriSeries::aux(order), &y)?;
    let ca = s.hadamard(&fa)?.collapse();
    let cb = s.hadamard(&fb)?.collapse();
    for (name, series) in [("C_A", &ca), ("C_B", &cb)] {
        if !series.u_bounded_by_rows() {
            return Err(ZgfError::UDegree(name));
        }
    }
    Ok((ca, cb))
}

/// Z-convex polyominoes, closed form in `x`, `y` and `d`.
pub fn gf_zconvex_closed(order: u32) -> Result<BiSeries, ZgfError> {
    check_order(order)?;
    let one = BiSeries::one(order);
    let (x, y) = (BiSeries::x(order), BiSeries::y(order));
    let xy = &x * &y;
    let x2y2 = &xy * &xy;
    let d = BiSeries::solve_d(order);
    let lin = &(&one - &x) - &y;
    let lin2 = &lin * &lin;
    let inv_delta = delta(order).invert()?;
    let inv_q = (&lin2 - &xy).invert()?;
    let first = &(&(&(&x2y2 * &d).scale_int(2) * &(&inv_delta * &inv_delta)) * &lin2) * &inv_q;
    let num = &(&(&xy * &lin2) * &(&lin - &xy)) - &(&x2y2 * &(&lin - &xy.scale_int(3)));
    let second = &(&num * &inv_delta) * &inv_q;
    Ok(&first + &second)
}

/// Z-convex polyominoes by semi-perimeter, as a series in `x` standing for
/// `t`: `2t⁴(1-2t)²d(t)/((1-4t)²(1-3t)(1-t)) + t²(1-6t+10t²-2t³-t⁴)/((1-4t)(1-3t)(1-t))`
/// with `d(t) = (t + d(t))²`.
pub fn gf_zconvex_univariate(order: u32) -> Result<BiSeries, ZgfError> {
    check_order(order)?;
    let one = BiSeries::one(order);
    let t = BiSeries::x(order);
    let mut d = BiSeries::zero(order);
    for _ in 0..=order {
        let s = &t + &d;
        d = &s * &s;
    }
    let lin = |a: i64| &one - &t.scale_int(a);
    let t2 = &t * &t;
    let t4 = &t2 * &t2;
    let common = &(&lin(4) * &lin(3)) * &lin(1);
    let first_num = &(&t4.scale_int(2) * &(&lin(2) * &lin(2))) * &d;
    let first = first_num.try_div(&(&common * &lin(4)))?;
    let poly = [1, -6, 10, -2, -1];
    let mut p = BiSeries::zero(order);
    for (e, c) in poly.iter().enumerate() {
        p = &p + &t.pow(e as u32).scale_int(*c);
    }
    let second = (&t2 * &p).try_div(&common)?;
    Ok(&first + &second)
}

/// Which right-hand side to use for the type-B equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum BEquation {
    /// Type-B terms split by where the column bottoms reach their minimum;
    /// the one that matches the census.
    #[default]
    Valley,
    /// Short form `B₁ = A₂ z π`, `B₂ = A₄ z π`, `B₃ = A₅ z π`, the `B₄`
    /// difference of diagonals and `z*` in `B₆`.
    Classic,
    /// As `Classic`, with `B₁` carrying an extra non-empty staircase `z* y u`.
    ClassicExpanded,
}

impl fmt::Display for BEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BEquation::Valley => "valley",
            BEquation::Classic => "classic",
            BEquation::ClassicExpanded => "classic-expanded",
        })
    }
}

impl FromStr for BEquation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "valley" => Ok(BEquation::Valley),
            "classic" => Ok(BEquation::Classic),
            "classic-expanded" => Ok(BEquation::ClassicExpanded),
            _ => Err(format!("unknown B equation {s:?} (valley, classic, classic-expanded)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemOptions {
    pub b_equation: BEquation,
    /// How many copies of the non-centered part enter `P`: descending and
    /// ascending polyominoes are equinumerous, so 2.
    pub multiplicity: u32,
}

impl Default for SystemOptions {
    fn default() -> Self {
        SystemOptions { b_equation: BEquation::Valley, multiplicity: 2 }
    }
}

/// Result of the fixed-point solve.
#[derive(Debug, Clone)]
pub struct SystemState {
    pub a: USeries,
    pub b: USeries,
    pub p: BiSeries,
    /// Rounds run, including the last one that changed nothing.
    pub iterations: u32,
    /// Per round, the lowest total degree at which A and B changed.
    pub residuals: Vec<(Option<u32>, Option<u32>)>,
}

fn change_valuation(old: &USeries, new: &USeries) -> Option<u32> {
    (new - old).terms().map(|(m, _)| m.total()).min()
}

/// Solves the hooked-polyomino system from `A = B = 0` and assembles `P`.
pub fn solve_system(order: u32, opts: SystemOptions) -> Result<SystemState, ZgfError> {
    check_order(order)?;
    let tb = Toolbox::new(order)?;
    let (ca, cb) = gf_centered_hooked(order)?;
    let c = gf_centered(order)?;
    let lift = USeries::lift;
    let (x, ys, yp, zs, zp, pi) = (&tb.x, &tb.ystar, &tb.yplus, &tb.zstar, &tb.zplus, &tb.pi);
    let st = &tb.st;
    let yp2 = yp * yp;
    let zp2 = zp * zp;

    // Coefficients of the linear terms, built once.
    let k1 = lift(&(x * &(ys * ys)));
    let k3 = lift(&(&(x * ys) * &(yp * zp)));
    let k2 = &k3 * st;
    let k5 = &lift(&(x * &(&yp2 * &zp2))) * st;
    let k4 = &k5 * &lift(pi);
    let k7 = lift(&(x * &(&yp2 * &zp2)));
    let k6 = match opts.b_equation {
        BEquation::Valley => k3.scale_int(2),
        _ => lift(&(&(x * ys) * &(yp * zs))).scale_int(2),
    };
    let zs_u = lift(zs);
    let zp_u = lift(zp);
    let m_factor = &(&zs_u * &lift(&tb.y)) * st;
    let z_pi = lift(&(&tb.z * pi));
    let one = USeries::one(order);
    let basis = DiagBasis::new(zs, order);

    let mut a = USeries::zero(order);
    let mut b = USeries::zero(order);
    let mut residuals = Vec::new();
    let rounds = order + 2;
    let mut settled = false;
    let mut iterations = 0;
    for _ in 0..rounds {
        iterations += 1;
        let da = a.diag2_with(&basis)?;
        let a_at_zs = lift(&a.eval_u(zs)?);
        let a2 = &k2 * &a;
        let a4 = &k4 * &a_at_zs;
        let a5 = &k5 * &da;
        let new_a = &(&(&(&(&ca + &(&k1 * &a)) + &a2) + &(&k3 * &da)) + &a4) + &a5;

        let b_common = &(&k1 * &b) + &(&k6 * &b.diag2_with(&basis)?);
        let b_common = &b_common + &(&k7 * &b.diag3_with(&basis)?);
        let b_origin = match opts.b_equation {
            BEquation::Valley => {
                let down = a.shift_down();
                let m = &m_factor * &a;
                let t_part = &(&zs_u * &down.diag2_with(&basis)?) + &(&zp_u * &m.diag2_with(&basis)?);
                let mid = &(&zs_u * &down.diag3_with(&basis)?) + &(&zp_u * &m.diag3_with(&basis)?);
                &(&k3 * &t_part) + &(&k7 * &mid)
            }
            BEquation::Classic | BEquation::ClassicExpanded => {
                let mut b1 = &a2 * &z_pi;
                if opts.b_equation == BEquation::ClassicExpanded {
                    b1 = &(&b1 * &zs_u) * &(&lift(&tb.y) * &USeries::u(order));
                }
                let b2 = &a4 * &z_pi;
                let b3 = &a5 * &z_pi;
                let b4 = &(&k7 * &(&one + &z_pi)) * &(&a.diag3_with(&basis)? - &da);
                &(&(&b1 + &b2) + &b3) + &b4
            }
        };
        let new_b = &(&cb + &b_common) + &b_origin;

        for (name, s) in [("A", &new_a), ("B", &new_b)] {
            if !s.u_bounded_by_rows() {
                return Err(ZgfError::UDegree(name));
            }
        }
        let change = (change_valuation(&a, &new_a), change_valuation(&b, &new_b));
        residuals.push(change);
        a = new_a;
        b = new_b;
        if change == (None, None) {
            settled = true;
            break;
        }
    }
    if !settled {
        return Err(ZgfError::NoConvergence(rounds));
    }

    let unit = BiSeries::one(order);
    let a1 = a.eval_u(&unit)?;
    let b1 = b.eval_u(&unit)?;
    let a_zs = a.eval_u(zs)?;
    let b_zs = b.eval_u(zs)?;
    let z_pi = &tb.z * pi;
    let p1 = &(x * ys) * &a1;
    let p2 = &(&(x * yp) * &z_pi) * &a1;
    let p3 = &(&(x * yp) * &(&unit + &z_pi)) * &(&(zs * &a_zs) - &a1);
    let p4 = &(x * ys) * &b1;
    let p5 = &(x * yp) * &(&(zs * &b_zs) - &b1);
    let sum = &(&(&(&p1 + &p2) + &p3) + &p4) + &p5;
    let p = &c + &sum.scale(&q(i64::from(opts.multiplicity)));
    Ok(SystemState { a, b, p, iterations, residuals })
}

/// Coefficient of `x^n` in a series in `x` alone.
pub fn univariate_coefficients(s: &BiSeries) -> Vec<BigRational> {
    (0..=s.order()).map(|n| s.coeff(Mono::xy(n, 0))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn ints(v: &[BigRational]) -> Vec<i64> {
        v.iter().map(|c| c.to_integer().to_i64().unwrap()).collect()
    }

    #[test]
    fn convex_and_lconvex() {
        let f = gf_convex(8).unwrap();
        assert_eq!(ints(&f.diagonal())[2..8], [1, 2, 7, 28, 120, 528]);
        assert_eq!(f, f.transpose());
        let g = gf_lconvex_univariate(8).unwrap();
        assert_eq!(ints(&univariate_coefficients(&g))[2..8], [1, 2, 7, 24, 82, 280]);
        assert_eq!(gf_convex(1), Err(ZgfError::OrderTooSmall(1)));
    }

    #[test]
    fn stacks() {
        let (s, strict) = gf_stack(6).unwrap();
        for h in 1..=5 {
            assert_eq!(s.get(1, h), q(1));
        }
        for w in 1..=6 {
            assert_eq!(s.get(w, 0), q(1));
        }
        assert_eq!(strict, &s - &(&BiSeries::y(6) * &s));
    }

    #[test]
    fn centered_two_ways() {
        let c = gf_centered(9).unwrap();
        assert_eq!(ints(&c.diagonal())[2..10], [1, 2, 7, 26, 100, 392, 1552, 6176]);
        assert_ne!(c.truncate(6), c.truncate(6).transpose());
    }

    #[test]
    fn hooked_centered_low_terms() {
        let (ca, cb) = gf_centered_hooked(5).unwrap();
        let low = ca.terms().next().unwrap();
        assert_eq!(low.0, Mono::xy(2, 2));
        assert_eq!(low.1, &q(1));
        assert!(cb.terms().all(|(m, _)| m.total() >= 5));
    }

    #[test]
    fn zconvex_closed_forms() {
        let n = 10;
        let p = gf_zconvex_closed(n).unwrap();
        assert_eq!(ints(&p.diagonal())[2..11], [1, 2, 7, 28, 116, 484, 2022, 8448, 35290]);
        assert_eq!(p, p.transpose());
        let pt = gf_zconvex_univariate(n).unwrap();
        assert_eq!(univariate_coefficients(&pt), p.diagonal());
        let f = gf_convex(n).unwrap();
        assert_eq!(ints(&(&f - &p).diagonal())[6], 4);
    }

    #[test]
    fn system_matches_closed_form() {
        let n = 9;
        let s = solve_system(n, SystemOptions::default()).unwrap();
        assert_eq!(s.p, gf_zconvex_closed(n).unwrap());
        assert!(s.iterations <= n + 1);
        assert!(s.a.u_bounded_by_rows() && s.b.u_bounded_by_rows());
    }

    #[test]
    fn classic_b_equations_fall_short() {
        let n = 10;
        let closed = gf_zconvex_closed(n).unwrap();
        for b_equation in [BEquation::Classic, BEquation::ClassicExpanded] {
            let s = solve_system(n, SystemOptions { b_equation, multiplicity: 2 }).unwrap();
            assert_ne!(s.p, closed, "{b_equation}");
        }
        let once = solve_system(n, SystemOptions { multiplicity: 1, ..Default::default() }).unwrap();
        assert_eq!(ints(&once.p.diagonal())[5], 27);
    }
}
