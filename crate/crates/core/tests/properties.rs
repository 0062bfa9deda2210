use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use newton_strata::cyclotomic::{pi_valuation, CycInt, LPolynomial};
use newton_strata::dwork::TruncatedCyc;
use newton_strata::field::{build_field, ExtensionField, FieldElement, DEFAULT_ENUMERATION_CAP};
use newton_strata::polygon::{lies_above, lower_convex_hull, rat, NewtonPolygon};

fn cyc_strategy(p: u64) -> impl Strategy<Value = CycInt> {
    (prop::collection::vec(-50i64..50, p as usize - 1), 0u64..12).prop_map(move |(c, k)| {
        let lambda = CycInt::zeta_pow(p, 1).sub(&CycInt::one(p));
        let mut x = CycInt::from_coords(p, c.into_iter().map(BigInt::from).collect());
        for _ in 0..k {
            x = x.mul(&lambda);
        }
        x
    })
}

fn elem(field: &ExtensionField, seed: u64) -> FieldElement {
    field.random(&mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn valuation_is_a_valuation(x in cyc_strategy(7), y in cyc_strategy(7)) {
        let (vx, vy) = (pi_valuation(&x), pi_valuation(&y));
        let vxy = pi_valuation(&x.mul(&y));
        match (vx, vy) {
            (Some(a), Some(b)) => prop_assert_eq!(vxy, Some(a + b)),
            _ => prop_assert_eq!(vxy, None),
        }
        if let Some(s) = pi_valuation(&x.add(&y)) {
            prop_assert!(vx.is_none_or(|a| s >= a.min(vy.unwrap_or(a))));
            prop_assert!(vy.is_none_or(|b| s >= b.min(vx.unwrap_or(b))));
        }
    }

    #[test]
    fn truncated_arithmetic_agrees_with_exact(x in cyc_strategy(5), y in cyc_strategy(5)) {
        let n = 12;
        let exact = TruncatedCyc::from_cyc(&x.mul(&y), n);
        let trunc = TruncatedCyc::from_cyc(&x, n).mul(&TruncatedCyc::from_cyc(&y, n));
        prop_assert!(exact.congruent(&trunc));
        let v = pi_valuation(&x).filter(|&v| v < n as u64);
        prop_assert_eq!(TruncatedCyc::from_cyc(&x, n).valuation(), v);
    }

    #[test]
    fn trace_is_additive_and_frobenius_invariant(a in any::<u64>(), b in any::<u64>()) {
        let f = build_field(5, 3, 0).unwrap();
        let (x, y) = (elem(&f, a), elem(&f, b));
        prop_assert_eq!((&x + &y).absolute_trace(), (x.absolute_trace() + y.absolute_trace()) % 5);
        prop_assert_eq!(x.pow(5).absolute_trace(), x.absolute_trace());
        prop_assert_eq!(x.absolute_trace(), x.absolute_trace_by_frobenius());
    }

    #[test]
    fn embedding_is_a_ring_homomorphism(a in any::<u64>(), b in any::<u64>()) {
        let base = build_field(7, 2, 0).unwrap();
        let top = base.extend(3, 0).unwrap();
        let (x, y) = (elem(&base, a), elem(&base, b));
        let e = |z: &FieldElement| z.embed(&top).unwrap();
        prop_assert_eq!(e(&(&x * &y)), &e(&x) * &e(&y));
        prop_assert_eq!(e(&(&x + &y)), &e(&x) + &e(&y));
    }

    #[test]
    fn hull_is_idempotent(ys in prop::collection::vec(prop::option::weighted(0.8, 0i64..40), 1..7), last in 0i64..40, den in 1i64..12) {
        let mut pts: Vec<(i64, Option<num_rational::BigRational>)> = vec![(0, Some(rat(0, 1)))];
        for (i, y) in ys.iter().enumerate() {
            pts.push((i as i64 + 1, y.map(|y| rat(y, den))));
        }
        pts.push((ys.len() as i64 + 1, Some(rat(last, den))));
        let hull = lower_convex_hull(&pts).unwrap();
        let again: Vec<_> = hull.vertices().iter().map(|(x, y)| (*x, Some(y.clone()))).collect();
        prop_assert_eq!(&lower_convex_hull(&again).unwrap(), &hull);
        // every finite input point is on or above the hull
        for (x, y) in pts.iter().filter_map(|(x, y)| y.clone().map(|y| (*x, y))) {
            prop_assert!(y >= hull.ordinate_at(x));
        }
        prop_assert!(lies_above(&hull, &hull).unwrap());
    }
}

#[test]
fn frobenius_fixes_exactly_the_prime_field() {
    for (p, s) in [(7u64, 3usize), (3, 4), (11, 2)] {
        let f = build_field(p, s, 0).unwrap();
        let fixed = f
            .enumerate(10_000)
            .unwrap()
            .filter(|x| &x.frobenius() == x)
            .count();
        assert_eq!(fixed as u64, p);
    }
}

#[test]
fn trace_is_onto() {
    let f = build_field(13, 2, 0).unwrap();
    let mut seen = [false; 13];
    for x in f.enumerate(DEFAULT_ENUMERATION_CAP).unwrap() {
        seen[x.absolute_trace() as usize] = true;
    }
    assert!(seen.iter().all(|&b| b));
}

#[test]
fn tower_trace_is_transitive() {
    let base = build_field(5, 2, 0).unwrap();
    let top = base.extend(3, 0).unwrap();
    let base_elems: Vec<FieldElement> = base.enumerate(100).unwrap().collect();
    let images: Vec<FieldElement> = base_elems.iter().map(|x| x.embed(&top).unwrap()).collect();
    let q = base.order() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let x = top.random(&mut rng);
        // relative trace sum_{i<3} x^{q^i}
        let mut rel = top.zero();
        let mut t = x.clone();
        for _ in 0..3 {
            rel = &rel + &t;
            t = t.pow(q);
        }
        let idx = images
            .iter()
            .position(|y| *y == rel)
            .expect("relative trace lies in F_q");
        assert_eq!(x.absolute_trace(), base_elems[idx].absolute_trace());
    }
}

#[test]
fn power_sums_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let p = 7;
    let sums: Vec<CycInt> = (0..3)
        .map(|_| {
            CycInt::from_coords(
                p,
                (0..6)
                    .map(|_| BigInt::from(rng.gen_range(-5i64..5) * 6))
                    .collect(),
            )
        })
        .collect();
    let l = LPolynomial::from_sums(&sums, 1).unwrap();
    assert_eq!(l.power_sums(), sums);
}

#[test]
fn polygon_display_round_trips_through_serde() {
    let poly: NewtonPolygon = lower_convex_hull(&[
        (0, Some(rat(0, 1))),
        (1, Some(rat(2, 5))),
        (2, Some(rat(1, 1))),
    ])
    .unwrap();
    assert_eq!(
        serde_json::to_string(&poly).unwrap(),
        r#"[[0,"0"],[1,"2/5"],[2,"1"]]"#
    );
}
