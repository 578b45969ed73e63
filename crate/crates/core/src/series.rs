//! Exact truncated power series in `x`, `y`, an optional statistic variable
//! `u` and an optional auxiliary variable used for Hadamard products.
//!
//! Truncation is on total degree `i + j <= order` in `x^i y^j`; the `u` and
//! auxiliary exponents are capped at `order` so that stars of series such as
//! `u` alone still terminate.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_ORDER: u32 = 100;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("truncation orders differ: {0} and {1}")]
    OrderMismatch(u32, u32),
    #[error("cannot invert a series with zero constant term")]
    ZeroConstant,
    #[error("star needs a series with zero constant term")]
    NonZeroConstant,
    #[error("term {0} is not allowed in a {1} series")]
    Kind(Mono, &'static str),
    #[error("diagonal basis stops below u-degree {0}")]
    BasisTooShort(u32),
    #[error("invalid series JSON: {0}")]
    Json(String),
}

/// Exponents `(aux, i, j, k)` of `aux^m x^i y^j u^k`, one byte each.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mono(u32);

impl Mono {
    pub const ONE: Mono = Mono(0);

    pub fn new(m: u32, i: u32, j: u32, k: u32) -> Mono {
        debug_assert!(m < 256 && i < 256 && j < 256 && k < 256);
        Mono(m << 24 | i << 16 | j << 8 | k)
    }

    pub fn xy(i: u32, j: u32) -> Mono {
        Mono::new(0, i, j, 0)
    }

    pub fn m(self) -> u32 {
        self.0 >> 24
    }
    pub fn i(self) -> u32 {
        (self.0 >> 16) & 0xff
    }
    pub fn j(self) -> u32 {
        (self.0 >> 8) & 0xff
    }
    pub fn k(self) -> u32 {
        self.0 & 0xff
    }

    /// Degree in `x` and `y`, the truncated one.
    pub fn total(self) -> u32 {
        self.i() + self.j()
    }

    fn fits(self, order: u32) -> bool {
        self.total() <= order && self.k() <= order && self.m() <= order
    }

    fn times(self, other: Mono) -> Mono {
        // Exponents stay below 2 * MAX_ORDER + 1 < 256, so bytes never carry.
        Mono(self.0 + other.0)
    }

    fn key(self) -> (u32, u32, u32, u32, u32) {
        (self.total(), self.i(), self.j(), self.k(), self.m())
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("w", self.m()), ("x", self.i()), ("y", self.j()), ("u", self.k())] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Which variables a series may carry.
pub trait Kind: Clone + fmt::Debug + PartialEq + Eq {
    const NAME: &'static str;
    const HAS_U: bool;
    const HAS_AUX: bool;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bi;
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WithU;
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WithAux;

impl Kind for Bi {
    const NAME: &'static str = "bivariate";
    const HAS_U: bool = false;
    const HAS_AUX: bool = false;
}
impl Kind for WithU {
    const NAME: &'static str = "u";
    const HAS_U: bool = true;
    const HAS_AUX: bool = false;
}
impl Kind for WithAux {
    const NAME: &'static str = "auxiliary";
    const HAS_U: bool = true;
    const HAS_AUX: bool = true;
}

fn allowed<K: Kind>(m: Mono) -> bool {
    (K::HAS_U || m.k() == 0) && (K::HAS_AUX || m.m() == 0)
}

/// A truncated series; absent terms are zero.
#[derive(Clone, PartialEq, Eq)]
pub struct Series<K: Kind> {
    order: u32,
    terms: BTreeMap<Mono, BigRational>,
    kind: PhantomData<K>,
}

pub type BiSeries = Series<Bi>;
pub type USeries = Series<WithU>;
pub type TriSeries = Series<WithAux>;

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl<K: Kind> Series<K> {
    /// # Panics
    /// If `order` exceeds [`MAX_ORDER`].
    pub fn zero(order: u32) -> Self {
        assert!(order <= MAX_ORDER, "truncation order {order} exceeds {MAX_ORDER}");
        Series { order, terms: BTreeMap::new(), kind: PhantomData }
    }

    pub fn one(order: u32) -> Self {
        Self::constant(order, BigRational::one())
    }

    pub fn constant(order: u32, c: BigRational) -> Self {
        Self::monomial(order, Mono::ONE, c)
    }

    /// # Panics
    /// If the monomial uses a variable this kind does not carry.
    pub fn monomial(order: u32, m: Mono, c: BigRational) -> Self {
        assert!(allowed::<K>(m), "{m} is not a {} monomial", K::NAME);
        let mut s = Self::zero(order);
        s.insert(m, c);
        s
    }

    pub fn x(order: u32) -> Self {
        Self::monomial(order, Mono::xy(1, 0), BigRational::one())
    }

    pub fn y(order: u32) -> Self {
        Self::monomial(order, Mono::xy(0, 1), BigRational::one())
    }

    /// Builds a series from `(monomial, coefficient)` pairs; out-of-order
    /// terms are dropped, repeated monomials add up.
    pub fn from_terms(order: u32, terms: impl IntoIterator<Item = (Mono, BigRational)>) -> Result<Self, SeriesError> {
        let mut s = Self::zero(order);
        for (m, c) in terms {
            if !allowed::<K>(m) {
                return Err(SeriesError::Kind(m, K::NAME));
            }
            let sum = s.coeff(m) + c;
            s.insert(m, sum);
        }
        Ok(s)
    }

    fn insert(&mut self, m: Mono, c: BigRational) {
        if !m.fits(self.order) || c.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, c);
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Mono) -> BigRational {
        self.terms.get(&m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(Mono::ONE)
    }

    /// Nonzero terms in (total degree, i, j, k, aux) order.
    pub fn terms(&self) -> impl Iterator<Item = (Mono, &BigRational)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Reinterprets the series in another kind; fails if a term uses a
    /// variable the target lacks.
    pub fn cast<L: Kind>(&self) -> Result<Series<L>, SeriesError> {
        if let Some((&m, _)) = self.terms.iter().find(|(m, _)| !allowed::<L>(**m)) {
            return Err(SeriesError::Kind(m, L::NAME));
        }
        Ok(Series { order: self.order, terms: self.terms.clone(), kind: PhantomData })
    }

    /// Embeds a series of a kind with fewer variables.
    pub fn lift<L: Kind>(s: &Series<L>) -> Self {
        s.cast().expect("lifting into a kind with fewer variables")
    }

    /// Keeps only terms of total degree `<= order`.
    pub fn truncate(&self, order: u32) -> Self {
        let mut s = Self::zero(order);
        for (m, c) in self.terms() {
            s.insert(m, c.clone());
        }
        s
    }

    fn same_order(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(SeriesError::OrderMismatch(self.order, other.order))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_order(other)?;
        let mut s = self.clone();
        for (m, c) in other.terms() {
            let sum = s.coeff(m) + c;
            s.insert(m, sum);
        }
        Ok(s)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.try_add(&-other)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut s = Self::zero(self.order);
        for (m, v) in self.terms() {
            s.insert(m, v * c);
        }
        s
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&int(c))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_order(other)?;
        let order = self.order;
        let small = |s: &Self| -> Option<Vec<(Mono, i64)>> {
            s.terms().map(|(m, c)| if c.is_integer() { c.numer().to_i64().map(|v| (m, v)) } else { None }).collect()
        };
        if let (Some(a), Some(b)) = (small(self), small(other)) {
            if let Some(out) = mul_small(order, &a, &b) {
                let mut s = Self::zero(order);
                for (m, v) in out {
                    s.insert(m, BigRational::from_integer(BigInt::from(v)));
                }
                return Ok(s);
            }
        }
        let mut acc: HashMap<Mono, BigRational> = HashMap::new();
        for (ma, ca) in self.terms() {
            let room = order - ma.total();
            for (mb, cb) in other.terms().take_while(|(mb, _)| mb.total() <= room) {
                let m = ma.times(mb);
                if m.fits(order) {
                    *acc.entry(m).or_insert_with(BigRational::zero) += ca * cb;
                }
            }
        }
        let mut s = Self::zero(order);
        for (m, v) in acc {
            s.insert(m, v);
        }
        Ok(s)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = Self::one(self.order);
        for _ in 0..n {
            r = &r * self;
        }
        r
    }

    /// `1 / (1 - f)` for `f` without constant term.
    pub fn star(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::NonZeroConstant);
        }
        // (1 + f)(1 + f^2)(1 + f^4)... stops once the power vanishes.
        let one = Self::one(self.order);
        let mut r = one.clone();
        let mut p = self.clone();
        while !p.is_zero() {
            r = &r * &(&one + &p);
            p = &p * &p;
        }
        Ok(r)
    }

    /// `f / (1 - f)`.
    pub fn plus(&self) -> Result<Self, SeriesError> {
        Ok(self * &self.star()?)
    }

    pub fn invert(&self) -> Result<Self, SeriesError> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(SeriesError::ZeroConstant);
        }
        let inv_c = c.recip();
        let rest = &Self::one(self.order) - &self.scale(&inv_c);
        Ok(rest.star()?.scale(&inv_c))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_order(other)?;
        Ok(self * &other.invert()?)
    }

    /// Swaps the roles of `x` and `y`.
    pub fn transpose(&self) -> Self {
        let mut s = Self::zero(self.order);
        for (m, c) in self.terms() {
            s.insert(Mono::new(m.m(), m.j(), m.i(), m.k()), c.clone());
        }
        s
    }

    /// Largest `u` exponent, if any term carries `u`.
    pub fn u_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.k()).max()
    }

    /// Every term has `u`-degree at most its `y`-degree.
    pub fn u_bounded_by_rows(&self) -> bool {
        self.terms.keys().all(|m| m.k() <= m.j())
    }

    /// Every term has auxiliary degree at most its `x`-degree.
    pub fn aux_bounded_by_columns(&self) -> bool {
        self.terms.keys().all(|m| m.m() <= m.i())
    }

    /// Sum of coefficients of each total degree, with `u` and the auxiliary
    /// variable set to 1; entry `n` is the coefficient of `t^n` at `x = y = t`.
    pub fn diagonal(&self) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.order as usize + 1];
        for (m, c) in self.terms() {
            out[m.total() as usize] += c;
        }
        out
    }

    /// Coefficients collapsed onto `x^i y^j`, summing over `u` and aux.
    pub fn bivariate_coefficients(&self) -> BTreeMap<(u32, u32), BigRational> {
        let mut out: BTreeMap<(u32, u32), BigRational> = BTreeMap::new();
        for (m, c) in self.terms() {
            *out.entry((m.i(), m.j())).or_insert_with(BigRational::zero) += c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Grid view: one line per total degree, terms `coeff*monomial`.
    pub fn to_table(&self) -> String {
        let mut lines = Vec::new();
        for n in 0..=self.order {
            let row: Vec<String> =
                self.terms().filter(|(m, _)| m.total() == n).map(|(m, c)| format!("{}*{}", c, m)).collect();
            let body = if row.is_empty() { "0".to_string() } else { row.join(" + ") };
            lines.push(format!("{n:>3} | {body}"));
        }
        lines.join("\n")
    }

    pub fn to_json(&self) -> String {
        let terms = self
            .terms()
            .map(|(m, c)| TermJson { m: m.m(), i: m.i(), j: m.j(), k: m.k(), coeff: c.to_string() })
            .collect();
        let doc = SeriesJson { kind: K::NAME.to_string(), order: self.order, terms };
        serde_json::to_string_pretty(&doc).expect("series JSON")
    }

    pub fn from_json(json: &str) -> Result<Self, SeriesError> {
        let doc: SeriesJson = serde_json::from_str(json).map_err(|e| SeriesError::Json(e.to_string()))?;
        if doc.order > MAX_ORDER {
            return Err(SeriesError::Json(format!("order {} exceeds {MAX_ORDER}", doc.order)));
        }
        let terms = doc
            .terms
            .into_iter()
            .map(|t| {
                let c: BigRational =
                    t.coeff.parse().map_err(|_| SeriesError::Json(format!("bad rational {:?}", t.coeff)))?;
                if [t.m, t.i, t.j, t.k].iter().any(|&e| e > MAX_ORDER) {
                    return Err(SeriesError::Json("exponent out of range".into()));
                }
                Ok((Mono::new(t.m, t.i, t.j, t.k), c))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_terms(doc.order, terms)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    #[serde(default, skip_serializing_if = "is_zero")]
    m: u32,
    i: u32,
    j: u32,
    #[serde(default, skip_serializing_if = "is_zero")]
    k: u32,
    coeff: String,
}

fn is_zero(v: &u32) -> bool {
    *v == 0
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    kind: String,
    order: u32,
    terms: Vec<TermJson>,
}

/// Integer product with overflow detection; `None` sends the caller to the
/// arbitrary-precision path.
fn mul_small(order: u32, a: &[(Mono, i64)], b: &[(Mono, i64)]) -> Option<Vec<(Mono, i128)>> {
    let mut acc: HashMap<Mono, i128> = HashMap::with_capacity(a.len() + b.len());
    for &(ma, ca) in a {
        let room = order - ma.total();
        for &(mb, cb) in b.iter().take_while(|(mb, _)| mb.total() <= room) {
            let m = ma.times(mb);
            if m.fits(order) {
                let e = acc.entry(m).or_insert(0);
                *e = e.checked_add(i128::from(ca) * i128::from(cb))?;
            }
        }
    }
    Some(acc.into_iter().collect())
}

impl<K: Kind> fmt::Debug for Series<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series<{}>(order {}) ", K::NAME, self.order)?;
        f.debug_map().entries(self.terms.iter().map(|(m, c)| (m.to_string(), c.to_string()))).finish()
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        /// # Panics
        /// On mismatched truncation orders; use the `try_` method to get an error.
        impl<K: Kind> $tr<&Series<K>> for &Series<K> {
            type Output = Series<K>;
            fn $method(self, rhs: &Series<K>) -> Series<K> {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<K: Kind> Neg for &Series<K> {
    type Output = Series<K>;
    fn neg(self) -> Series<K> {
        let mut s = self.clone();
        for c in s.terms.values_mut() {
            *c = -c.clone();
        }
        s
    }
}

impl BiSeries {
    /// Coefficient of `x^i y^j`.
    pub fn get(&self, i: u32, j: u32) -> BigRational {
        self.coeff(Mono::xy(i, j))
    }

    /// Unique series with `d = (x + d)(y + d)`, by fixed-point iteration.
    pub fn solve_d(order: u32) -> BiSeries {
        let (x, y) = (BiSeries::x(order), BiSeries::y(order));
        fixed_point(BiSeries::zero(order), |d| &(&x + d) * &(&y + d))
    }

    /// Power series root `c` of `c = 1 + (x - y) c + y c^2`.
    pub fn solve_kernel_root(order: u32) -> BiSeries {
        let one = BiSeries::one(order);
        let x_minus_y = &BiSeries::x(order) - &BiSeries::y(order);
        let y = BiSeries::y(order);
        fixed_point(BiSeries::zero(order), |c| &(&one + &(&x_minus_y * c)) + &(&y * &(c * c)))
    }
}

/// Iterates `f` from `start` until it stops changing. Every map used here
/// gains at least one degree per step, so at most `order + 2` rounds run.
fn fixed_point<K: Kind>(start: Series<K>, f: impl Fn(&Series<K>) -> Series<K>) -> Series<K> {
    let mut cur = start;
    for _ in 0..cur.order() + 3 {
        let next = f(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
    panic!("fixed-point iteration did not settle within order + 3 rounds")
}

impl USeries {
    pub fn u(order: u32) -> USeries {
        USeries::monomial(order, Mono::new(0, 0, 0, 1), BigRational::one())
    }

    /// `A = sum_k a_k u^k` split into its coefficients `a_k`.
    pub fn u_coefficients(&self) -> Vec<BiSeries> {
        let n = self.u_degree().map_or(0, |d| d as usize + 1);
        let mut out = vec![BiSeries::zero(self.order); n];
        for (m, c) in self.terms() {
            out[m.k() as usize].insert(Mono::xy(m.i(), m.j()), c.clone());
        }
        out
    }

    /// `sum_k a_k V^k`.
    pub fn eval_u(&self, v: &BiSeries) -> Result<BiSeries, SeriesError> {
        if self.order != v.order {
            return Err(SeriesError::OrderMismatch(self.order, v.order));
        }
        let coeffs = self.u_coefficients();
        let mut r = BiSeries::zero(self.order);
        for a in coeffs.iter().rev() {
            r = &(&r * v) + a;
        }
        Ok(r)
    }

    /// `sum_n a_n sum_{i+j=n} u^i V^j`.
    pub fn diag2(&self, v: &BiSeries) -> Result<USeries, SeriesError> {
        self.diagonal_op(v, false)
    }

    /// `sum_n a_n sum_{i+j+l=n} V^i V^j u^l`, that is `A(V, V, u)`.
    pub fn diag3(&self, v: &BiSeries) -> Result<USeries, SeriesError> {
        self.diagonal_op(v, true)
    }

    fn diagonal_op(&self, v: &BiSeries, triple: bool) -> Result<USeries, SeriesError> {
        if self.order != v.order {
            return Err(SeriesError::OrderMismatch(self.order, v.order));
        }
        let basis = DiagBasis::new(v, self.u_degree().unwrap_or(0));
        self.diagonal_with(&basis, triple)
    }

    /// `diag2` against a precomputed basis.
    pub fn diag2_with(&self, basis: &DiagBasis) -> Result<USeries, SeriesError> {
        self.diagonal_with(basis, false)
    }

    /// `diag3` against a precomputed basis.
    pub fn diag3_with(&self, basis: &DiagBasis) -> Result<USeries, SeriesError> {
        self.diagonal_with(basis, true)
    }

    fn diagonal_with(&self, basis: &DiagBasis, triple: bool) -> Result<USeries, SeriesError> {
        if self.order != basis.order {
            return Err(SeriesError::OrderMismatch(self.order, basis.order));
        }
        let mut r = USeries::zero(self.order);
        for (n, a) in self.u_coefficients().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let parts = if triple { &basis.triple } else { &basis.double };
            let Some(b) = parts.get(n) else {
                return Err(SeriesError::BasisTooShort(n as u32));
            };
            r = &r + &(&USeries::lift(a) * b);
        }
        Ok(r)
    }

    /// `(A(u) - A(0)) / u`.
    pub fn shift_down(&self) -> USeries {
        let mut s = USeries::zero(self.order);
        for (m, c) in self.terms().filter(|(m, _)| m.k() > 0) {
            s.insert(Mono::new(0, m.i(), m.j(), m.k() - 1), c.clone());
        }
        s
    }
}

/// The polynomials `sum_{i+j=n} u^i V^j` and `sum_{i+j+l=n} V^i V^j u^l`
/// for `n = 0..=max_n`, shared by repeated diagonal substitutions.
#[derive(Debug, Clone)]
pub struct DiagBasis {
    order: u32,
    double: Vec<USeries>,
    triple: Vec<USeries>,
}

impl DiagBasis {
    pub fn new(v: &BiSeries, max_n: u32) -> DiagBasis {
        let order = v.order;
        let vv = USeries::lift(v);
        let u = USeries::u(order);
        let mut double = vec![USeries::one(order)];
        let mut triple = vec![USeries::one(order)];
        let mut u_pow = USeries::one(order);
        for n in 1..=max_n as usize {
            u_pow = &u_pow * &u;
            let d = &(&double[n - 1] * &vv) + &u_pow;
            let t = &(&triple[n - 1] * &vv) + &d;
            double.push(d);
            triple.push(t);
        }
        DiagBasis { order, double, triple }
    }
}

impl TriSeries {
    /// Substitutes `aux -> aux * x`, so the auxiliary variable marks a
    /// subset of the columns.
    pub fn mark_columns(&self) -> TriSeries {
        let mut r = TriSeries::zero(self.order);
        for (m, c) in self.terms() {
            r.insert(Mono::new(m.m(), m.i() + m.m(), m.j(), m.k()), c.clone());
        }
        r
    }

    /// The auxiliary variable.
    pub fn aux(order: u32) -> TriSeries {
        TriSeries::monomial(order, Mono::new(1, 0, 0, 0), BigRational::one())
    }

    pub fn u(order: u32) -> TriSeries {
        TriSeries::monomial(order, Mono::new(0, 0, 0, 1), BigRational::one())
    }

    /// Hadamard product in the auxiliary variable: aux-degree-`m` parts are
    /// multiplied with each other, and only with each other.
    pub fn hadamard(&self, other: &TriSeries) -> Result<TriSeries, SeriesError> {
        self.same_order(other)?;
        let split = |s: &TriSeries| {
            let mut parts: BTreeMap<u32, USeries> = BTreeMap::new();
            for (m, c) in s.terms() {
                parts
                    .entry(m.m())
                    .or_insert_with(|| USeries::zero(s.order))
                    .insert(Mono::new(0, m.i(), m.j(), m.k()), c.clone());
            }
            parts
        };
        let (a, b) = (split(self), split(other));
        let mut r = TriSeries::zero(self.order);
        for (m, pa) in &a {
            let Some(pb) = b.get(m) else { continue };
            for (mono, c) in (pa * pb).terms() {
                r.insert(Mono::new(*m, mono.i(), mono.j(), mono.k()), c.clone());
            }
        }
        Ok(r)
    }

    /// Sets the auxiliary variable to 1.
    pub fn collapse(&self) -> USeries {
        let mut r = USeries::zero(self.order);
        for (m, c) in self.terms() {
            let key = Mono::new(0, m.i(), m.j(), m.k());
            let sum = r.coeff(key) + c;
            r.insert(key, sum);
        }
        r
    }
}
