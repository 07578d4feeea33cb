use formation_core::{
    assign_with_center, assign_with_leader, center_mode_cost, hungarian_solve, leader_mode_cost, leading_slot,
    Assignment, CostMatrix, Formation, Vec2,
};
use proptest::prelude::*;

/// Every permutation of `0..n`.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

fn brute_min<C: Copy + PartialOrd + std::ops::Add<Output = C>>(rows: &[Vec<C>], zero: C) -> C {
    permutations(rows.len())
        .into_iter()
        .map(|p| p.iter().enumerate().fold(zero, |acc, (i, &j)| acc + rows[i][j]))
        .fold(None, |best: Option<C>, c| match best {
            Some(b) if b <= c => Some(b),
            _ => Some(c),
        })
        .unwrap()
}

fn int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=7).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(0i64..100, n), n))
}

fn real_matrix() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1usize..=7).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(0.0f64..1000.0, n), n))
}

fn points(n: usize) -> impl Strategy<Value = Vec<Vec2<f64>>> {
    prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0).prop_map(|(x, y)| Vec2::new(x, y)), n)
}

fn instance(lo: usize, hi: usize) -> impl Strategy<Value = (Vec<Vec2<f64>>, Formation<f64>)> {
    (lo..=hi)
        .prop_flat_map(|n| (points(n), points(n)))
        .prop_filter_map("degenerate formation", |(x, f)| Formation::centered(f).ok().map(|f| (x, f)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn integer_matrices_hit_the_permutation_minimum(rows in int_matrix()) {
        let m = CostMatrix::from_rows(rows.clone()).unwrap();
        let r = hungarian_solve(&m).unwrap();
        prop_assert_eq!(r.total_cost, brute_min(&rows, 0));
        let recomputed: i64 = (0..rows.len()).map(|i| rows[i][r.assignment.slot_of(i)]).sum();
        prop_assert_eq!(recomputed, r.total_cost);
    }

    #[test]
    fn real_matrices_hit_the_permutation_minimum(rows in real_matrix()) {
        let r = hungarian_solve(&CostMatrix::from_rows(rows.clone()).unwrap()).unwrap();
        prop_assert!((r.total_cost - brute_min(&rows, 0.0)).abs() <= 1e-9);
    }

    #[test]
    fn row_and_column_shifts_keep_the_optimum(
        rows in int_matrix(),
        shift in prop::collection::vec(0i64..50, 14),
    ) {
        let n = rows.len();
        let shifted: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| rows[i][j] + shift[i] + shift[7 + j]).collect())
            .collect();
        let r = hungarian_solve(&CostMatrix::from_rows(shifted).unwrap()).unwrap();
        let on_original: i64 = (0..n).map(|i| rows[i][r.assignment.slot_of(i)]).sum();
        prop_assert_eq!(on_original, brute_min(&rows, 0));
    }

    #[test]
    fn leader_search_matches_exhaustive_search((x, f) in instance(2, 6)) {
        let n = x.len();
        let best = assign_with_leader(&x, &f).unwrap();
        let slot = leading_slot(&f);
        let mut brute = f64::INFINITY;
        for leader in 0..n {
            for p in permutations(n) {
                if p[leader] != slot {
                    continue;
                }
                let a = Assignment::with_leader(p, leader).unwrap();
                brute = brute.min(leader_mode_cost(&x, &f, &a).unwrap());
            }
        }
        prop_assert!((best.total_cost - brute).abs() <= 1e-9 * brute.max(1.0));
        prop_assert_eq!(best.assignment.leader_slot(), Some(slot));
        let own = leader_mode_cost(&x, &f, &best.assignment).unwrap();
        prop_assert!((own - best.total_cost).abs() <= 1e-9 * own.max(1.0));
    }

    #[test]
    fn center_search_matches_exhaustive_search(
        (x, f) in instance(1, 6),
        cx in -20.0f64..20.0,
        cy in -20.0f64..20.0,
    ) {
        let c = Vec2::new(cx, cy);
        let best = assign_with_center(&x, &f, c).unwrap();
        let brute = permutations(x.len())
            .into_iter()
            .map(|p| center_mode_cost(&x, &f, &Assignment::new(p).unwrap(), c).unwrap())
            .fold(f64::INFINITY, f64::min);
        prop_assert!((best.total_cost - brute).abs() <= 1e-9 * brute.max(1.0));
    }
}

#[test]
fn permutation_helper_is_complete() {
    let p = permutations(4);
    assert_eq!(p.len(), 24);
    let mut sorted = p.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), 24);
}
