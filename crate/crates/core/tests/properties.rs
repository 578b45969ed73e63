//! Randomised invariants for grids, path metrics and series arithmetic.

use std::collections::{BTreeSet, VecDeque};

use num_rational::BigRational;
use proptest::prelude::*;
use zconvex::census::ColumnProfile;
use zconvex::grid::{Cell, Polyomino};
use zconvex::pathmetry::{self, TurnCount};
use zconvex::series::{BiSeries, Mono};

const ORDER: u32 = 6;

fn convex() -> impl Strategy<Value = Polyomino> {
    prop::collection::vec((0i32..5, 0i32..5), 1..6).prop_filter_map("not convex", |spans| {
        let cols = spans.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        ColumnProfile::new(cols).map(|p| p.to_polyomino())
    })
}

fn cell_set() -> impl Strategy<Value = BTreeSet<(i32, i32)>> {
    prop::collection::btree_set((-4i32..4, -4i32..4), 1..12)
}

fn series() -> impl Strategy<Value = BiSeries> {
    prop::collection::vec(((0u32..=ORDER, 0u32..=ORDER), -3i64..=3), 0..8).prop_map(|terms| {
        let terms = terms
            .into_iter()
            .filter(|((i, j), _)| i + j <= ORDER)
            .map(|((i, j), c)| (Mono::xy(i, j), BigRational::from_integer(c.into())));
        BiSeries::from_terms(ORDER, terms).unwrap()
    })
}

// Plain BFS over (cell, heading, turns) in increasing turn order.
fn naive_turns(p: &Polyomino, a: Cell, b: Cell) -> Option<u32> {
    if a == b {
        return Some(0);
    }
    let sx = (b.x - a.x).signum();
    let sy = (b.y - a.y).signum();
    let mut steps = Vec::new();
    if sx != 0 {
        steps.push((sx, 0));
    }
    if sy != 0 {
        steps.push((0, sy));
    }
    let mut best = None;
    let mut queue = VecDeque::from([(a, None::<(i32, i32)>, 0u32)]);
    let mut seen = BTreeSet::new();
    while let Some((c, head, turns)) = queue.pop_front() {
        if c == b {
            best = Some(best.map_or(turns, |t: u32| t.min(turns)));
            continue;
        }
        if !seen.insert((c, head, turns)) {
            continue;
        }
        for &d in &steps {
            let n = Cell::new(c.x + d.0, c.y + d.1);
            if p.contains(n) {
                let t = turns + u32::from(head.is_some_and(|h| h != d));
                queue.push_back((n, Some(d), t));
            }
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonicalize_is_idempotent(cells in cell_set()) {
        if let Ok(p) = Polyomino::canonicalize(cells.iter().map(|&c| c.into())) {
            let again = Polyomino::canonicalize(p.cells().iter().copied()).unwrap();
            prop_assert_eq!(&again, &p);
            prop_assert_eq!(p.cells().iter().map(|c| c.x).min(), Some(0));
            prop_assert_eq!(p.cells().iter().map(|c| c.y).min(), Some(0));
            prop_assert_eq!(p.bounding_rect().width, p.width());
        }
    }

    #[test]
    fn text_round_trip(p in convex()) {
        prop_assert_eq!(Polyomino::from_text(&p.to_text()).unwrap(), p.clone());
        prop_assert_eq!(Polyomino::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn invariants_under_symmetry(p in convex()) {
        let d = pathmetry::convexity_degree(&p).unwrap();
        for q in p.symmetries() {
            prop_assert!(q.is_convex());
            prop_assert_eq!(q.semi_perimeter(), p.semi_perimeter());
            prop_assert_eq!(q.len(), p.len());
            prop_assert_eq!(pathmetry::convexity_degree(&q).unwrap(), d);
        }
    }

    #[test]
    fn profile_round_trip(p in convex()) {
        let prof = ColumnProfile::from_polyomino(&p).unwrap();
        prop_assert_eq!(prof.semi_perimeter(), p.semi_perimeter());
        prop_assert_eq!(prof.to_polyomino(), p);
    }

    #[test]
    fn turns_agree_with_naive_search(p in convex(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let a = p.cells()[i.index(p.len())];
        let b = p.cells()[j.index(p.len())];
        let fast = pathmetry::min_monotone_turns(&p, a, b).unwrap();
        prop_assert_eq!(fast.finite(), naive_turns(&p, a, b));
        prop_assert_eq!(pathmetry::min_monotone_turns(&p, b, a).unwrap(), fast);
        prop_assert_ne!(fast, TurnCount::Unreachable);
    }

    #[test]
    fn degree_is_max_over_pairs(p in convex()) {
        let d = pathmetry::convexity_degree(&p).unwrap();
        let mut worst = 0;
        for &a in p.cells() {
            for &b in p.cells() {
                worst = worst.max(naive_turns(&p, a, b).unwrap());
            }
        }
        prop_assert_eq!(d, worst);
        prop_assert!(pathmetry::is_k_convex(&p, d).unwrap());
        if d > 0 {
            prop_assert!(!pathmetry::is_k_convex(&p, d - 1).unwrap());
        }
    }

    #[test]
    fn ring_axioms(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&(&a + &b), &(&b + &a));
        prop_assert_eq!(&(&a * &b), &(&b * &a));
        prop_assert_eq!(&(&(&a * &b) * &c), &(&a * &(&b * &c)));
        prop_assert_eq!(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)));
        prop_assert_eq!(&(&a - &a), &BiSeries::zero(ORDER));
        prop_assert_eq!((&a * &b).transpose(), &a.transpose() * &b.transpose());
    }

    #[test]
    fn star_inverts_one_minus(a in series()) {
        let f = &a - &BiSeries::constant(ORDER, a.constant_term());
        let s = f.star().unwrap();
        prop_assert_eq!(&(&s * &(&BiSeries::one(ORDER) - &f)), &BiSeries::one(ORDER));
        let g = &BiSeries::constant(ORDER, BigRational::from_integer(2.into())) + &f;
        prop_assert_eq!(&(&g * &g.invert().unwrap()), &BiSeries::one(ORDER));
    }

    #[test]
    fn json_round_trip(a in series()) {
        prop_assert_eq!(BiSeries::from_json(&a.to_json()).unwrap(), a);
    }
}
