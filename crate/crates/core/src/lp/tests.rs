use super::*;
use crate::numeric::parse_rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rat(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn rats(items: &[&str]) -> Vec<Rational> {
    items.iter().map(|s| rat(s)).collect()
}

#[test]
fn maximize_single_variable_upper_bounded() {
    let mut lp = LinearProgram::maximize(rats(&["1"]));
    lp.add_le(rats(&["1"]), rat("1"));
    let out = solve_exact(&lp).unwrap();
    let opt = out.expect_optimal("bounded max");
    assert_eq!(opt.value, rat("1"));
    assert_eq!(opt.solution, rats(&["1"]));
}

#[test]
fn infeasible_produces_verified_farkas() {
    let mut lp = LinearProgram::maximize(rats(&["1"]));
    lp.add_le(rats(&["1"]), rat("-1"));
    let out = solve_exact(&lp).unwrap();
    match out {
        LpOutcome::Infeasible(inf) => {
            verify_farkas(&lp, &inf.farkas).unwrap();
        }
        other => panic!("expected infeasible, got {:?}", other.status()),
    }
}

#[test]
fn unbounded_produces_verified_ray() {
    let mut lp = LinearProgram::maximize(rats(&["1", "0"]));
    lp.add_ge(rats(&["1", "-1"]), rat("0"));
    let out = solve_exact(&lp).unwrap();
    match out {
        LpOutcome::Unbounded(u) => verify_unbounded(&lp, &u).unwrap(),
        other => panic!("expected unbounded, got {:?}", other.status()),
    }
}

#[test]
fn equality_rows_and_general_bounds() {
    // max x + 2y  s.t.  x + y = 3,  1 <= x <= 2,  0 <= y <= 5
    let mut lp = LinearProgram::maximize(rats(&["1", "2"]));
    lp.add_eq(rats(&["1", "1"]), rat("3"));
    lp.set_lower(0, rat("1"));
    lp.set_upper(0, rat("2"));
    lp.set_upper(1, rat("5"));
    let opt = solve_exact(&lp).unwrap().expect_optimal("bounded eq");
    assert_eq!(opt.value, rat("5"));
    assert_eq!(opt.solution, rats(&["1", "2"]));
}

#[test]
fn redundant_equality_row_is_tolerated() {
    let mut lp = LinearProgram::maximize(rats(&["1", "1"]));
    lp.add_eq(rats(&["1", "1"]), rat("1"));
    lp.add_eq(rats(&["1", "1"]), rat("1"));
    let opt = solve_exact(&lp).unwrap().expect_optimal("redundant rows");
    assert_eq!(opt.value, rat("1"));
}

#[test]
fn conflicting_equality_rows_are_infeasible() {
    let mut lp = LinearProgram::maximize(rats(&["1", "1"]));
    lp.add_eq(rats(&["1", "1"]), rat("1"));
    lp.add_eq(rats(&["1", "1"]), rat("2"));
    let out = solve_exact(&lp).unwrap();
    assert_eq!(out.status(), LpStatus::Infeasible);
    verify_outcome(&lp, &out).unwrap();
}

/// Beale's degenerate instance cycles under naive most-negative pricing;
/// both pivot rules must terminate on it with value 1/20.
fn beale() -> LinearProgram {
    let mut lp = LinearProgram::maximize(rats(&["3/4", "-150", "1/50", "-6"]));
    lp.add_le(rats(&["1/4", "-60", "-1/25", "9"]), rat("0"));
    lp.add_le(rats(&["1/2", "-90", "-1/50", "3"]), rat("0"));
    lp.add_le(rats(&["0", "0", "1", "0"]), rat("1"));
    lp
}

#[test]
fn degenerate_instance_terminates_under_both_rules() {
    for rule in [PivotRule::Bland, PivotRule::DantzigThenBland { stall_limit: 3 }] {
        let config = SolverConfig { pivot_rule: rule, max_pivots: 10_000 };
        let opt = solve_exact_with(&beale(), &config).unwrap().expect_optimal("beale");
        assert_eq!(opt.value, rat("1/20"));
        assert!(opt.pivots <= 10_000);
    }
}

#[test]
fn float_mode_matches_exact_on_trivial_examples() {
    for lp in [
        {
            let mut lp = LinearProgram::maximize(rats(&["1"]));
            lp.add_le(rats(&["1"]), rat("1"));
            lp
        },
        {
            let mut lp = LinearProgram::maximize(rats(&["1"]));
            lp.add_le(rats(&["1"]), rat("-1"));
            lp
        },
        beale(),
    ] {
        let exact = solve_exact(&lp).unwrap();
        let fast = solve_float_then_certify(&lp).unwrap();
        assert_eq!(exact.status(), fast.status());
        if let (LpOutcome::Optimal(a), LpOutcome::Optimal(b)) = (&exact, &fast) {
            assert_eq!(a.value, b.value);
        }
    }
}

fn random_lp(rng: &mut ChaCha8Rng) -> LinearProgram {
    let n = 5;
    let mut lp = LinearProgram::maximize(
        (0..n).map(|_| Rational::new(rng.gen_range(-6..=6), rng.gen_range(1..=4))).collect(),
    );
    for _ in 0..4 {
        let coeffs: Vec<Rational> =
            (0..n).map(|_| Rational::new(rng.gen_range(-5..=5), rng.gen_range(1..=3))).collect();
        let rhs = Rational::new(rng.gen_range(-4..=8), rng.gen_range(1..=3));
        match rng.gen_range(0..3) {
            0 => lp.add_le(coeffs, rhs),
            1 => lp.add_ge(coeffs, rhs),
            _ => lp.add_eq(coeffs, rhs),
        }
    }
    // Keep most instances bounded so the optimal branch gets exercised.
    lp.add_le(vec![Rational::one(); n], rat("10"));
    lp
}

#[test]
fn float_mode_agrees_with_exact_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut optimal_seen = 0;
    for _ in 0..60 {
        let lp = random_lp(&mut rng);
        let exact = solve_exact(&lp).unwrap();
        let fast = solve_float_then_certify(&lp).unwrap();
        assert_eq!(exact.status(), fast.status());
        verify_outcome(&lp, &exact).unwrap();
        verify_outcome(&lp, &fast).unwrap();
        if let (LpOutcome::Optimal(a), LpOutcome::Optimal(b)) = (&exact, &fast) {
            assert_eq!(a.value, b.value, "cross-mode value mismatch on {}", lp.dump());
            optimal_seen += 1;
        }
        assert!(exact.pivots() <= 10_000);
    }
    assert!(optimal_seen >= 10, "random corpus produced too few optimal instances");
}

#[test]
fn solutions_satisfy_constraints_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let lp = random_lp(&mut rng);
        if let LpOutcome::Optimal(opt) = solve_exact(&lp).unwrap() {
            // Residual check is part of verify_optimal; re-do it explicitly.
            for c in &lp.constraints {
                let lhs: Rational = c.coeffs.iter().zip(&opt.solution).map(|(a, x)| a * x).sum();
                match c.relation {
                    Relation::Le => assert!(lhs <= c.rhs),
                    Relation::Eq => assert_eq!(lhs, c.rhs),
                    Relation::Ge => assert!(lhs >= c.rhs),
                }
            }
        }
    }
}

#[test]
fn verify_rejects_corrupted_certificates() {
    let mut lp = LinearProgram::maximize(rats(&["1"]));
    lp.add_le(rats(&["1"]), rat("1"));
    let mut opt = solve_exact(&lp).unwrap().expect_optimal("simple");
    opt.duals[0] = rat("-1");
    assert!(verify_optimal(&lp, &opt).is_err());

    let mut lp2 = LinearProgram::maximize(rats(&["1"]));
    lp2.add_le(rats(&["1"]), rat("-1"));
    match solve_exact(&lp2).unwrap() {
        LpOutcome::Infeasible(inf) => {
            let mut bad = inf.farkas.clone();
            bad[0] = -bad[0].clone();
            assert!(verify_farkas(&lp2, &bad).is_err());
        }
        _ => unreachable!(),
    }
}

#[test]
fn dimension_mismatch_is_reported() {
    let mut lp = LinearProgram::maximize(rats(&["1", "2"]));
    lp.add_le(rats(&["1"]), rat("1"));
    assert!(matches!(solve_exact(&lp), Err(LpError::DimensionMismatch { .. })));
}

#[test]
fn dump_is_line_oriented() {
    let mut lp = LinearProgram::maximize(rats(&["1", "-2"]));
    lp.add_le(rats(&["1", "1"]), rat("3"));
    lp.add_eq(rats(&["1", "0"]), rat("1"));
    lp.set_upper(1, rat("4"));
    let dump = lp.dump();
    let lines: Vec<&str> = dump.lines().collect();
    assert_eq!(lines[0], "max 1 -2");
    assert_eq!(lines[1], "1 1 <= 3");
    assert_eq!(lines[2], "1 0 = 1");
}
