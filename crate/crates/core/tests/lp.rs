use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use qcap::lp::{
    column_generation, nnls, solve_lp, LinearProgram, LpStatus, MasterProblem, PricedColumn, PricingOutcome, Sense,
};

/// Best objective over all basic feasible solutions, or `None` when there is
/// none. Only meaningful for bounded problems.
fn brute_force(lp: &LinearProgram) -> Option<f64> {
    let (m, n) = lp.a.shape();
    let b = DVector::from_column_slice(&lp.b);
    let mut best: Option<f64> = None;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let cols: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
        let basis = DMatrix::from_fn(m, m, |i, k| lp.a[(i, cols[k])]);
        let Some(inv) = basis.try_inverse() else { continue };
        let xb = inv * &b;
        if xb.iter().any(|&x| x < -1e-9) {
            continue;
        }
        let obj: f64 = cols.iter().zip(xb.iter()).map(|(&j, x)| lp.c[j] * x).sum();
        best = Some(match (best, lp.sense) {
            (None, _) => obj,
            (Some(v), Sense::Minimize) => v.min(obj),
            (Some(v), Sense::Maximize) => v.max(obj),
        });
    }
    best
}

fn bounded_lp() -> impl Strategy<Value = LinearProgram> {
    (1usize..=3, 3usize..=6, any::<bool>()).prop_flat_map(|(m, n, maximize)| {
        (
            prop::collection::vec(0.1f64..2.0, m * n),
            prop::collection::vec(-3.0f64..3.0, n),
            prop::collection::vec(0.5f64..4.0, m),
        )
            .prop_map(move |(a, c, b)| {
                let sense = if maximize { Sense::Maximize } else { Sense::Minimize };
                LinearProgram::new(sense, c, DMatrix::from_row_slice(m, n, &a), b).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // With A > 0 entrywise the feasible region is bounded, so the optimum
    // is at a vertex and vertex enumeration is exact.
    #[test]
    fn simplex_matches_vertex_enumeration(lp in bounded_lp()) {
        let sol = solve_lp(&lp);
        match brute_force(&lp) {
            None => prop_assert_eq!(sol.status, LpStatus::Infeasible),
            Some(best) => {
                prop_assert_eq!(sol.status, LpStatus::Optimal);
                prop_assert!((sol.objective - best).abs() < 1e-7, "{} vs {}", sol.objective, best);
                // Primal feasibility.
                let x = DVector::from_column_slice(&sol.x);
                let r = &lp.a * &x - DVector::from_column_slice(&lp.b);
                prop_assert!(r.amax() < 1e-8);
                prop_assert!(sol.x.iter().all(|&v| v >= -1e-12));
                // Strong duality and dual feasibility.
                let by: f64 = lp.b.iter().zip(&sol.duals).map(|(b, y)| b * y).sum();
                prop_assert!((by - sol.objective).abs() < 1e-7);
                for j in 0..lp.num_cols() {
                    let ya: f64 = (0..lp.num_rows()).map(|i| sol.duals[i] * lp.a[(i, j)]).sum();
                    let d = lp.c[j] - ya;
                    match lp.sense {
                        Sense::Minimize => prop_assert!(d > -1e-8),
                        Sense::Maximize => prop_assert!(d < 1e-8),
                    }
                }
            }
        }
    }

    #[test]
    fn nnls_is_nonnegative_and_stationary(
        a in prop::collection::vec(-2.0f64..2.0, 12),
        b in prop::collection::vec(-2.0f64..2.0, 4),
    ) {
        let a = DMatrix::from_row_slice(4, 3, &a);
        let b = DVector::from_column_slice(&b);
        let x = nnls(&a, &b);
        prop_assert!(x.iter().all(|&v| v >= 0.0));
        // KKT: the gradient A^T (A x - b) is zero on the support and
        // non-negative off it.
        let g = a.transpose() * (&a * &x - &b);
        for (xi, gi) in x.iter().zip(g.iter()) {
            if *xi > 1e-10 {
                prop_assert!(gi.abs() < 1e-7, "{gi}");
            } else {
                prop_assert!(*gi > -1e-7, "{gi}");
            }
        }
    }
}

/// `max sum 2^(n-j) x_j` s.t. `sum_{j<i} 2^(i-j+1) x_j + x_i <= 5^i`, with
/// slacks. Dantzig pricing visits every vertex; the optimum is `5^n`.
#[test]
fn klee_minty_cube() {
    let n = 7;
    let mut a = DMatrix::zeros(n, 2 * n);
    let mut c = vec![0.0; 2 * n];
    let mut b = vec![0.0; n];
    for i in 0..n {
        for j in 0..i {
            a[(i, j)] = 2f64.powi((i - j + 1) as i32);
        }
        a[(i, i)] = 1.0;
        a[(i, n + i)] = 1.0;
        b[i] = 5f64.powi(i as i32 + 1);
        c[i] = 2f64.powi((n - 1 - i) as i32);
    }
    let sol = solve_lp(&LinearProgram::new(Sense::Maximize, c, a, b).unwrap());
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.objective - 5f64.powi(n as i32)).abs() < 1e-6, "{}", sol.objective);
    assert!((sol.x[n - 1] - 5f64.powi(n as i32)).abs() < 1e-6);
}

const ROLL: usize = 10;
const WIDTHS: [usize; 3] = [3, 4, 5];
const DEMAND: [f64; 3] = [9.0, 7.0, 5.0];

/// Pattern with the largest dual value, by unbounded knapsack.
fn knapsack(duals: &[f64]) -> (f64, Vec<usize>) {
    let mut best = vec![(0.0, vec![0usize; WIDTHS.len()]); ROLL + 1];
    for cap in 1..=ROLL {
        best[cap] = best[cap - 1].clone();
        for (i, &w) in WIDTHS.iter().enumerate() {
            if w <= cap {
                let v = best[cap - w].0 + duals[i];
                if v > best[cap].0 + 1e-12 {
                    let mut p = best[cap - w].1.clone();
                    p[i] += 1;
                    best[cap] = (v, p);
                }
            }
        }
    }
    best[ROLL].clone()
}

fn all_patterns() -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for a in 0..=ROLL / WIDTHS[0] {
        for b in 0..=ROLL / WIDTHS[1] {
            for c in 0..=ROLL / WIDTHS[2] {
                let used = a * WIDTHS[0] + b * WIDTHS[1] + c * WIDTHS[2];
                if used <= ROLL && used > 0 {
                    out.push(vec![a, b, c]);
                }
            }
        }
    }
    out
}

/// Cutting-stock relaxation `min sum x_p` s.t. `sum_p a_ip x_p - s_i = d_i`:
/// column generation from single-item patterns reaches the same value as the
/// LP over every pattern.
#[test]
fn cutting_stock_column_generation() {
    let k = WIDTHS.len();
    let mut master: MasterProblem<Vec<usize>> = MasterProblem::new(Sense::Minimize, DEMAND.to_vec());
    for i in 0..k {
        let mut surplus = vec![0.0; k];
        surplus[i] = -1.0;
        master.add_column(surplus, 0.0, Vec::new());
        let mut p = vec![0usize; k];
        p[i] = ROLL / WIDTHS[i];
        master.add_column(p.iter().map(|&x| x as f64).collect(), 1.0, p);
    }
    let result = column_generation(
        &mut master,
        |sol, m| {
            let (value, pattern) = knapsack(&sol.duals);
            let column: Vec<f64> = pattern.iter().map(|&x| x as f64).collect();
            let rc = m.reduced_cost(&column, 1.0, &sol.duals);
            assert!((rc - (1.0 - value)).abs() < 1e-9);
            let columns = if rc < -1e-9 {
                vec![PricedColumn { column, cost: 1.0, tag: pattern }]
            } else {
                Vec::new()
            };
            PricingOutcome { columns, best_reduced_cost: rc }
        },
        1e-9,
        100,
    )
    .unwrap();
    assert!(result.converged);
    assert!(result.rounds > 0);
    assert!(result.objective_trace.windows(2).all(|w| w[1] <= w[0] + 1e-9));

    let patterns = all_patterns();
    let mut a = DMatrix::zeros(k, patterns.len() + k);
    for (j, p) in patterns.iter().enumerate() {
        for i in 0..k {
            a[(i, j)] = p[i] as f64;
        }
    }
    for i in 0..k {
        a[(i, patterns.len() + i)] = -1.0;
    }
    let mut c = vec![1.0; patterns.len()];
    c.extend(vec![0.0; k]);
    let full = solve_lp(&LinearProgram::new(Sense::Minimize, c, a, DEMAND.to_vec()).unwrap());
    assert!((result.solution.objective - full.objective).abs() < 1e-8, "{} vs {}", result.solution.objective, full.objective);
}

#[test]
fn degenerate_problem_terminates() {
    // Many ties in the ratio test: every constraint is tight at the origin.
    let a = DMatrix::from_row_slice(
        3,
        7,
        &[
            0.5, -5.5, -2.5, 9.0, 1.0, 0.0, 0.0, //
            0.5, -1.5, -0.5, 1.0, 0.0, 1.0, 0.0, //
            1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0,
        ],
    );
    let lp = LinearProgram::new(Sense::Maximize, vec![10.0, -57.0, -9.0, -24.0, 0.0, 0.0, 0.0], a, vec![0.0, 0.0, 1.0])
        .unwrap();
    let sol = solve_lp(&lp);
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.objective - 1.0).abs() < 1e-9, "{}", sol.objective);
}
