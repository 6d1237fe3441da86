//! The LP kernel against an independent simplex implementation and brute force.

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use multicut::simplex::{
    add_rows_and_reoptimize, solve_ilp, solve_lp, LinearProgram, LpSolver, LpStatus, Row, Sense,
};
use proptest::prelude::*;

struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
    fn below(&mut self, n: usize) -> usize {
        (self.next() * n as f64) as usize % n
    }
}

fn random_lp(seed: u64, n: usize, m: usize) -> LinearProgram {
    let mut r = Lcg(seed);
    let mut lp = LinearProgram::unit_box((0..n).map(|_| r.next() * 2.0 - 1.0).collect());
    for j in 0..n {
        if r.next() < 0.2 {
            lp.upper[j] = 0.5 + r.next();
            lp.lower[j] = -r.next();
        }
    }
    for _ in 0..m {
        let k = 1 + r.below(n.min(4));
        let mut terms = Vec::new();
        for _ in 0..k {
            let j = r.below(n);
            let a = (r.next() * 4.0 - 2.0).round();
            let a = if a == 0.0 { 1.0 } else { a };
            if !terms.iter().any(|t: &(usize, f64)| t.0 == j) {
                terms.push((j, a));
            }
        }
        let sense = match r.below(5) {
            0 | 1 => Sense::Le,
            2 | 3 => Sense::Ge,
            _ => Sense::Eq,
        };
        let rhs = (r.next() * 3.0 - 1.0).round() / 2.0;
        lp.push_row(Row::new(terms, sense, rhs));
    }
    lp
}

fn microlp_value(lp: &LinearProgram) -> Option<f64> {
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = (0..lp.num_vars())
        .map(|j| p.add_var(lp.objective[j], (lp.lower[j], lp.upper[j])))
        .collect();
    for row in lp.active_rows() {
        let expr: Vec<_> = row.terms.iter().map(|&(j, a)| (vars[j], a)).collect();
        let op = match row.sense {
            Sense::Le => ComparisonOp::Le,
            Sense::Ge => ComparisonOp::Ge,
            Sense::Eq => ComparisonOp::Eq,
        };
        p.add_constraint(expr, op, row.rhs);
    }
    match p.solve() {
        Ok(out) => out.solution().map(|s| s.objective() + lp.constant),
        Err(microlp::Error::Infeasible) => None,
        Err(e) => panic!("oracle failed: {e:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn agrees_with_independent_simplex(seed in any::<u64>(), n in 2usize..12, m in 1usize..14) {
        let lp = random_lp(seed, n, m);
        let ours = solve_lp(&lp, None).unwrap();
        match microlp_value(&lp) {
            Some(v) => {
                prop_assert_eq!(ours.status, LpStatus::Optimal);
                prop_assert!((ours.objective_value - v).abs() < 1e-7, "ours {} oracle {}", ours.objective_value, v);
                for row in lp.active_rows() {
                    prop_assert!(row.violation(&ours.values) <= 1e-9);
                }
            }
            None => prop_assert_eq!(ours.status, LpStatus::Infeasible),
        }
    }

    #[test]
    fn agrees_on_larger_sparse_programs(seed in any::<u64>(), n in 20usize..60, m in 20usize..80) {
        let lp = random_lp(seed, n, m);
        let ours = solve_lp(&lp, None).unwrap();
        match microlp_value(&lp) {
            Some(v) => {
                prop_assert_eq!(ours.status, LpStatus::Optimal);
                prop_assert!((ours.objective_value - v).abs() < 1e-7);
            }
            None => prop_assert_eq!(ours.status, LpStatus::Infeasible),
        }
    }

    #[test]
    fn warm_reoptimization_matches_cold_solve(seed in any::<u64>(), n in 2usize..10, m in 2usize..12) {
        let full = random_lp(seed, n, m);
        let split = m / 2;
        let mut first = full.clone();
        first.rows.truncate(split);
        first.active.truncate(split);
        let prior = solve_lp(&first, None).unwrap();
        prop_assume!(prior.status == LpStatus::Optimal);
        let warm = add_rows_and_reoptimize(&mut first, &full.rows[split..], &prior).unwrap();
        let cold = solve_lp(&full, None).unwrap();
        prop_assert_eq!(warm.status, cold.status);
        if cold.status == LpStatus::Optimal {
            prop_assert!((warm.objective_value - cold.objective_value).abs() < 1e-9);
            prop_assert!(warm.objective_value >= prior.objective_value - 1e-9);
        }
    }

    #[test]
    fn ilp_matches_enumeration(seed in any::<u64>(), n in 2usize..8, m in 1usize..8) {
        let mut lp = random_lp(seed, n, m);
        for j in 0..n {
            lp.lower[j] = 0.0;
            lp.upper[j] = 1.0;
        }
        let all: Vec<usize> = (0..n).collect();
        let ilp = solve_ilp(&lp, &all, None).unwrap();
        let mut best = f64::INFINITY;
        for code in 0u32..(1 << n) {
            let x: Vec<f64> = (0..n).map(|j| ((code >> j) & 1) as f64).collect();
            if lp.active_rows().all(|r| r.violation(&x) <= 1e-9) {
                let v: f64 = x.iter().zip(&lp.objective).map(|(a, b)| a * b).sum();
                best = best.min(v);
            }
        }
        if best.is_finite() {
            prop_assert_eq!(ilp.status, LpStatus::Optimal);
            prop_assert!((ilp.objective_value - best).abs() < 1e-9);
            let lp_val = solve_lp(&lp, None).unwrap().objective_value;
            prop_assert!(lp_val <= ilp.objective_value + 1e-9);
        } else {
            prop_assert_eq!(ilp.status, LpStatus::Infeasible);
        }
    }

    #[test]
    fn repeated_solves_are_bitwise_identical(seed in any::<u64>(), n in 2usize..10, m in 1usize..10) {
        let lp = random_lp(seed, n, m);
        let a = solve_lp(&lp, None).unwrap();
        let b = solve_lp(&lp, None).unwrap();
        prop_assert_eq!(a.objective_value.to_bits(), b.objective_value.to_bits());
        prop_assert_eq!(a.values, b.values);
    }
}

#[test]
fn incremental_rows_never_decrease_the_optimum() {
    for seed in 0..50u64 {
        let full = random_lp(seed, 8, 12);
        let mut solver = LpSolver::new(&LinearProgram {
            rows: Vec::new(),
            active: Vec::new(),
            ..full.clone()
        })
        .unwrap();
        let mut last = f64::NEG_INFINITY;
        for row in &full.rows {
            solver.add_rows(std::slice::from_ref(row)).unwrap();
            if solver.solve().unwrap() == LpStatus::Infeasible {
                break;
            }
            let v = solver.objective();
            assert!(v >= last - 1e-9);
            last = v;
        }
    }
}
