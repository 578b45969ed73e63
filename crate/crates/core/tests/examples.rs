//! Worked examples and exhaustive small-size checks across modules.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use zconvex::anatomy::{self, ClassLabel, HookType, Region};
use zconvex::census::{self, CensusClass};
use zconvex::grid::{Cell, Polyomino};
use zconvex::harness::standard_census;
use zconvex::pathmetry;
use zconvex::series::{BiSeries, USeries};
use zconvex::zgf;

fn poly(cells: &[(i32, i32)]) -> Polyomino {
    Polyomino::canonicalize(cells.iter().map(|&c| c.into())).unwrap()
}

fn count(n: u64) -> BigUint {
    BigUint::from(n)
}

#[test]
fn degree_counts_at_six() {
    let t = standard_census(7, 1).unwrap();
    let at6 = |c| t.by_semiperimeter(c).get(&6).cloned().unwrap_or_default();
    assert_eq!(at6(CensusClass::Convex), count(120));
    assert_eq!(at6(CensusClass::ZConvex), count(116));
    assert_eq!(at6(CensusClass::LConvex), count(82));
    assert_eq!(at6(CensusClass::Convex) - at6(CensusClass::ZConvex), count(4));
    // Centered: only the two 3x2 staircases miss at semi-perimeter 5.
    assert_eq!(t.by_semiperimeter(CensusClass::Centered)[&5], count(26));
    for class in [CensusClass::Convex, CensusClass::ZConvex, CensusClass::LConvex] {
        assert_eq!(t.restrict(&[class]), t.restrict(&[class]).transposed());
    }
    assert_ne!(t.restrict(&[CensusClass::Centered]), t.restrict(&[CensusClass::Centered]).transposed());
}

#[test]
fn degree_zero_is_bars() {
    for p in census::enumerate_convex(9) {
        let bar = p.width() == 1 || p.height() == 1;
        assert_eq!(pathmetry::convexity_degree(&p).unwrap() == 0, bar, "{}", p.to_text());
    }
}

#[test]
fn nesting_of_classes() {
    let t = standard_census(9, 1).unwrap();
    let g = t.by_dimensions(CensusClass::LConvex);
    let c = t.by_dimensions(CensusClass::Centered);
    let p = t.by_dimensions(CensusClass::ZConvex);
    let f = t.by_dimensions(CensusClass::Convex);
    for (k, total) in &f {
        let get = |m: &BTreeMap<(u32, u32), BigUint>| m.get(k).cloned().unwrap_or_default();
        assert!(get(&g) <= get(&c) && get(&c) <= get(&p) && &get(&p) <= total, "{k:?}");
    }
}

#[test]
fn property1_fails_somewhere_at_six() {
    let failing: Vec<Polyomino> = census::enumerate_convex(6)
        .filter(|p| p.semi_perimeter() == 6 && anatomy::classify(p) == Ok(ClassLabel::Descending))
        .filter(|p| anatomy::check_property1(p) == Ok(false))
        .collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().all(|p| !pathmetry::is_k_convex(p, 2).unwrap()));
}

#[test]
fn regions_partition_descending() {
    for p in census::enumerate_convex(8) {
        if anatomy::classify(&p) != Ok(ClassLabel::Descending) {
            continue;
        }
        let r = anatomy::regions(&p).unwrap();
        let f = r.frame;
        assert_eq!(r.omega.len() + r.xi.len() + r.theta.len() + r.lambda.len(), p.len());
        assert!(!r.theta.is_empty());
        assert!(r.omega.iter().all(|c| c.y > f.x_row));
        for &c in p.cells() {
            let hook = (c.y == f.y_row && c.x <= f.s_col) || (c.x == f.s_col && c.y <= f.y_row);
            if hook {
                assert_eq!(r.region_of(c), Some(Region::Xi));
            }
        }
        if f.x_row != f.y_row {
            assert_eq!(r.region_of(Cell::new(0, f.x_row)), Some(Region::Lambda));
        }
        if let Ok((q, _)) = anatomy::reduction(&p) {
            assert_eq!(q.len(), p.len() - r.lambda.len() - 1);
        }
    }
}

#[test]
fn reflection_swaps_ascending_and_descending() {
    for p in census::enumerate_convex(8) {
        let flipped = anatomy::classify(&p.reflect_horizontal_axis()).unwrap();
        let expect = match anatomy::classify(&p).unwrap() {
            ClassLabel::Centered => ClassLabel::Centered,
            ClassLabel::Ascending => ClassLabel::Descending,
            ClassLabel::Descending => ClassLabel::Ascending,
        };
        assert_eq!(flipped, expect);
    }
}

#[test]
fn hook_statistic_bounds() {
    let mut below_leg = 0;
    for p in census::enumerate_convex(9) {
        if anatomy::classify(&p) == Ok(ClassLabel::Ascending) {
            continue;
        }
        for cand in anatomy::hook_candidates(&p).unwrap() {
            let h = cand.spec;
            if cand.floor_ok {
                assert!(h.k_stat >= 0 && h.k_stat < p.height() as i32);
                assert_eq!(h.hook_type == HookType::A, p.column(h.corner_col).min == 0);
            } else {
                below_leg += 1;
            }
            if h.k_stat < 0 {
                assert!(!cand.floor_ok);
            }
        }
    }
    assert!(below_leg > 0);
}

#[test]
fn stacks_match_census() {
    let (s, _) = zgf::gf_stack(10).unwrap();
    let mut counts: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for p in census::enumerate_convex(11) {
        if p.columns().iter().all(|c| c.min == 0) && p.width() + p.height() - 1 <= 10 {
            *counts.entry((p.width(), p.height() - 1)).or_default() += 1;
        }
    }
    let series: BTreeMap<(u32, u32), u64> =
        s.bivariate_coefficients().into_iter().map(|(k, v)| (k, v.to_integer().to_u64().unwrap())).collect();
    assert_eq!(counts, series);
}

#[test]
fn diagonal_operators_satisfy_closed_identities() {
    // (u - V) A(u, V) = u A(u) - V A(V) and
    // (u - V) A(V, V, u) = u A(u, V) - sum_n a_n (n + 1) V^(n + 1).
    let n = 8;
    let tb = zgf::Toolbox::new(n).unwrap();
    let a = &tb.st * &USeries::lift(&tb.zplus);
    let v = &tb.zstar;
    let u = USeries::u(n);
    let vu = USeries::lift(v);
    let d2 = a.diag2(v).unwrap();
    let d3 = a.diag3(v).unwrap();
    let lhs = &(&u - &vu) * &d2;
    let rhs = &(&u * &a) - &(&vu * &USeries::lift(&a.eval_u(v).unwrap()));
    assert_eq!(lhs, rhs);
    let mut weighted = BiSeries::zero(n);
    for (k, ak) in a.u_coefficients().iter().enumerate() {
        let c = BigRational::from_integer((k as i64 + 1).into());
        weighted = &weighted + &(ak * &v.pow(k as u32 + 1)).scale(&c);
    }
    let lhs3 = &(&u - &vu) * &d3;
    let rhs3 = &(&u * &d2) - &USeries::lift(&weighted);
    assert_eq!(lhs3, rhs3);
    assert_eq!(d2.eval_u(&BiSeries::one(n)).unwrap(), {
        let mut s = BiSeries::zero(n);
        for (k, ak) in a.u_coefficients().iter().enumerate() {
            let mut inner = BiSeries::zero(n);
            for j in 0..=k as u32 {
                inner = &inner + &v.pow(j);
            }
            s = &s + &(ak * &inner);
        }
        s
    });
}

#[test]
fn staircase_forgets_u() {
    let n = 8;
    let tb = zgf::Toolbox::new(n).unwrap();
    let forget = tb.st.eval_u(&BiSeries::one(n)).unwrap();
    assert_eq!(forget, (&tb.zstar * &tb.y).star().unwrap());
}

#[test]
fn hooked_a_lowest_term() {
    let (ca, _) = zgf::gf_centered_hooked(6).unwrap();
    let l = poly(&[(0, 1), (0, 0), (1, 0)]);
    assert_eq!(anatomy::enumerate_hooks(&l).unwrap().len(), 1);
    let low = ca.terms().next().unwrap();
    assert_eq!((low.0.i(), low.0.j(), low.0.k()), (2, 2, 0));
    assert!(low.1.is_one());
}

#[test]
fn text_rendering_of_regions() {
    let p = poly(&[(0, 3), (0, 2), (1, 2), (2, 2), (1, 1), (2, 1), (3, 1), (3, 0), (4, 0)]);
    let r = anatomy::regions(&p).unwrap();
    // S = 0 here, so the hook is a single cell and the arm is degenerate.
    assert_eq!(anatomy::render_regions(&p, &r), "l....\nhll..\n.llt.\n...tt");
    assert!(matches!(anatomy::reduction(&p), Err(anatomy::AnatomyError::DegenerateArm)));
}
