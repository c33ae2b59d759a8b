//! Property-based invariants of the domain types and statistics.

use dyson_edge_core::model::{GammaLaw, GtArray};
use dyson_edge_core::stats::EmpiricalDistribution;
use proptest::prelude::*;

/// Random interlacing array: a sorted top row, then each lower row drawn
/// uniformly inside its interlacing brackets.
fn interlacing_array(n: usize) -> impl Strategy<Value = GtArray> {
    (
        proptest::collection::vec(-1e3f64..1e3, n),
        proptest::collection::vec(0.001f64..0.999, n * (n - 1) / 2),
    )
        .prop_map(move |(mut top, fracs)| {
            top.sort_by(f64::total_cmp);
            // Spread ties apart so rows stay strictly increasing.
            for i in 1..n {
                if top[i] <= top[i - 1] {
                    top[i] = top[i - 1] + 1e-6;
                }
            }
            let mut rows: Vec<Vec<f64>> = vec![Vec::new(); n];
            rows[n - 1] = top;
            let mut offset = 0;
            for m in (1..n).rev() {
                let upper = rows[m].clone();
                let mut row = Vec::with_capacity(m);
                for i in 0..m {
                    let f = fracs[offset + i];
                    row.push(upper[i] + f * (upper[i + 1] - upper[i]));
                }
                offset += m;
                rows[m - 1] = row;
            }
            GtArray::from_levels(rows).expect("constructed rows are well formed")
        })
}

proptest! {
    #[test]
    fn constructed_arrays_interlace(a in interlacing_array(6)) {
        prop_assert!(a.validate_interlacing());
    }

    #[test]
    fn edge_spacings_are_nonnegative(a in interlacing_array(6), k in 1usize..=5) {
        let r = a.edge_spacings(k).unwrap();
        prop_assert!(r.values().iter().all(|v| *v >= 0.0));
        // Telescoping: the full spacing sum equals the corner-to-corner gap.
        let all = a.edge_spacings(5).unwrap();
        let total: f64 = all.values().iter().sum();
        prop_assert!((total - (a.top(6) - a.top(1))).abs() <= 1e-9 * (1.0 + total.abs()));
    }

    #[test]
    fn rescaling_preserves_interlacing_and_composes(
        a in interlacing_array(5),
        t1 in 0.1f64..50.0,
        t2 in 0.1f64..50.0,
        t3 in 0.1f64..50.0,
    ) {
        let b = a.rescale_time(t1, t2).unwrap();
        prop_assert!(b.validate_interlacing());
        let c1 = b.rescale_time(t2, t3).unwrap();
        let c2 = a.rescale_time(t1, t3).unwrap();
        for (x, y) in c1.level(5).iter().zip(c2.level(5)) {
            prop_assert!((x - y).abs() <= 1e-10 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn gamma_cdf_is_monotone_and_bounded(
        shape in 0.5f64..6.0,
        rate in 0.1f64..5.0,
        x in -1.0f64..20.0,
        dx in 0.0f64..5.0,
    ) {
        let law = GammaLaw::new(shape, rate).unwrap();
        let a = law.cdf(x);
        let b = law.cdf(x + dx);
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(b >= a);
    }

    #[test]
    fn ks_distance_is_a_distance_like_quantity(
        xs in proptest::collection::vec(-50.0f64..50.0, 1..60),
    ) {
        let s = EmpiricalDistribution::new(xs).unwrap();
        let d = s.ks_distance(|x| 1.0 / (1.0 + (-x).exp()));
        prop_assert!((0.0..=1.0).contains(&d));
        let clone = s.clone();
        prop_assert_eq!(s.ks_distance(|x| clone.cdf(x)), 0.0);
    }

    #[test]
    fn two_sample_ks_symmetric_and_bounded(
        xs in proptest::collection::vec(-50.0f64..50.0, 1..50),
        ys in proptest::collection::vec(-50.0f64..50.0, 1..50),
    ) {
        let a = EmpiricalDistribution::new(xs).unwrap();
        let b = EmpiricalDistribution::new(ys).unwrap();
        let d1 = a.ks_two_sample(&b);
        let d2 = b.ks_two_sample(&a);
        prop_assert!((d1 - d2).abs() < 1e-15);
        prop_assert!((0.0..=1.0).contains(&d1));
    }
}
