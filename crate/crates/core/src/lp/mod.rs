//! Exact linear programming over rationals.
//!
//! The solver is a dense two-phase simplex with Bland's anti-cycling rule.
//! The coherence feasibility programs solved elsewhere in this crate are
//! highly degenerate (many zero weights), so anti-cycling is required, not
//! optional. A faster Dantzig rule runs first by default and hands over to
//! Bland permanently once the objective stalls, which preserves the
//! termination guarantee.
//!
//! Every outcome carries an exactly verifiable certificate: optimal dual
//! multipliers with zero duality gap, a Farkas vector for infeasibility, or
//! an improving ray for unboundedness. [`solve_float_then_certify`] runs the
//! same pivoting in `f64` to locate a basis, refactorizes that basis in exact
//! arithmetic, and falls back to [`solve_exact`] whenever certification
//! fails, so its outcomes satisfy the same invariants.

mod certify;
mod engine;
mod normal;

use crate::numeric::Rational;
use serde::{Deserialize, Serialize};

/// Constraint sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// A single linear constraint `coeffs . x  relation  rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Per-variable bounds; the default is `0 <= v < +inf`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarBound {
    pub lower: Rational,
    pub upper: Option<Rational>,
}

impl Default for VarBound {
    fn default() -> Self {
        VarBound { lower: Rational::zero(), upper: None }
    }
}

/// A maximization program over rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<VarBound>,
}

impl LinearProgram {
    /// New program maximizing `objective` subject to the default bounds.
    pub fn maximize(objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram { objective, constraints: Vec::new(), bounds: vec![VarBound::default(); n] }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn add_le(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.add_constraint(coeffs, Relation::Le, rhs);
    }

    pub fn add_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.add_constraint(coeffs, Relation::Eq, rhs);
    }

    pub fn add_ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.add_constraint(coeffs, Relation::Ge, rhs);
    }

    pub fn set_lower(&mut self, var: usize, lower: Rational) {
        self.bounds[var].lower = lower;
    }

    pub fn set_upper(&mut self, var: usize, upper: Rational) {
        self.bounds[var].upper = Some(upper);
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(LpError::DimensionMismatch { expected: n, got: self.bounds.len() });
        }
        for c in &self.constraints {
            if c.coeffs.len() != n {
                return Err(LpError::DimensionMismatch { expected: n, got: c.coeffs.len() });
            }
        }
        Ok(())
    }

    /// Line-oriented text dump for debugging: the objective row, then one
    /// constraint row per line. Not a compatibility promise.
    pub fn dump(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let row = |coeffs: &[Rational]| coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "max {}", row(&self.objective));
        for c in &self.constraints {
            let rel = match c.relation {
                Relation::Le => "<=",
                Relation::Eq => "=",
                Relation::Ge => ">=",
            };
            let _ = writeln!(out, "{} {} {}", row(&c.coeffs), rel, c.rhs);
        }
        for (j, b) in self.bounds.iter().enumerate() {
            match &b.upper {
                Some(u) => {
                    let _ = writeln!(out, "{} <= x{} <= {}", b.lower, j, u);
                }
                None => {
                    if !b.lower.is_zero() {
                        let _ = writeln!(out, "x{} >= {}", j, b.lower);
                    }
                }
            }
        }
        out
    }
}

/// Proof of optimality: the solution together with dual multipliers whose
/// duality gap is exactly zero.
#[derive(Debug, Clone)]
pub struct OptimalOutcome {
    pub solution: Vec<Rational>,
    pub value: Rational,
    /// One multiplier per certificate row: the program's constraints in
    /// order, then one `x_j <= upper_j` row for each upper-bounded variable
    /// in variable order.
    pub duals: Vec<Rational>,
    pub pivots: u64,
}

/// Farkas proof of infeasibility over the same row layout as
/// [`OptimalOutcome::duals`].
#[derive(Debug, Clone)]
pub struct InfeasibleOutcome {
    pub farkas: Vec<Rational>,
    pub pivots: u64,
}

/// A feasible point plus an improving ray.
#[derive(Debug, Clone)]
pub struct UnboundedOutcome {
    pub feasible_point: Vec<Rational>,
    pub ray: Vec<Rational>,
    pub pivots: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Optimal(OptimalOutcome),
    Infeasible(InfeasibleOutcome),
    Unbounded(UnboundedOutcome),
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal(_) => LpStatus::Optimal,
            LpOutcome::Infeasible(_) => LpStatus::Infeasible,
            LpOutcome::Unbounded(_) => LpStatus::Unbounded,
        }
    }

    pub fn pivots(&self) -> u64 {
        match self {
            LpOutcome::Optimal(o) => o.pivots,
            LpOutcome::Infeasible(o) => o.pivots,
            LpOutcome::Unbounded(o) => o.pivots,
        }
    }

    /// The optimal outcome, or a panic; convenience for callers that have
    /// already established feasibility.
    pub fn expect_optimal(self, what: &str) -> OptimalOutcome {
        match self {
            LpOutcome::Optimal(o) => o,
            other => panic!("expected optimal outcome for {what}, got {:?}", other.status()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("dimension mismatch: expected {expected} coefficients, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("pivot limit {0} exceeded")]
    PivotLimitExceeded(u64),
    #[error("internal certification failure: {0}")]
    Certification(String),
}

/// Pivot selection strategy. Both variants terminate on every input: Bland's
/// rule never cycles, and the Dantzig variant switches to Bland permanently
/// after `stall_limit` consecutive non-improving pivots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    Bland,
    DantzigThenBland { stall_limit: u32 },
}

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub pivot_rule: PivotRule,
    pub max_pivots: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { pivot_rule: PivotRule::DantzigThenBland { stall_limit: 50 }, max_pivots: 2_000_000 }
    }
}

/// Solves the program in exact rational arithmetic and verifies the returned
/// certificate before handing it back.
pub fn solve_exact(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    solve_exact_with(lp, &SolverConfig::default())
}

pub fn solve_exact_with(lp: &LinearProgram, config: &SolverConfig) -> Result<LpOutcome, LpError> {
    lp.validate()?;
    let norm = normal::Normalized::build(lp);
    let raw = engine::two_phase_exact(&norm, config)?;
    let outcome = certify::outcome_from_raw(lp, &norm, raw)
        .map_err(|e| LpError::Certification(format!("exact solve failed certification: {e}")))?;
    verify_outcome(lp, &outcome).map_err(|e| LpError::Certification(e.to_string()))?;
    Ok(outcome)
}

/// Runs double-precision simplex to locate an optimal basis, refactorizes
/// that basis exactly, and falls back to [`solve_exact`] whenever the basis
/// fails exact verification (or the float run claims anything other than
/// optimality). The returned outcome satisfies the same invariants as
/// [`solve_exact`].
pub fn solve_float_then_certify(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    solve_float_then_certify_with(lp, &SolverConfig::default())
}

pub fn solve_float_then_certify_with(lp: &LinearProgram, config: &SolverConfig) -> Result<LpOutcome, LpError> {
    lp.validate()?;
    let norm = normal::Normalized::build(lp);
    match engine::two_phase_float(&norm, config) {
        Ok(engine::RawResult::Optimal(raw)) => {
            match certify::outcome_from_raw(lp, &norm, engine::RawResult::Optimal(raw)) {
                Ok(outcome) if verify_outcome(lp, &outcome).is_ok() => Ok(outcome),
                _ => solve_exact_with(lp, config),
            }
        }
        // Float infeasibility/unboundedness claims and numeric trouble are
        // all re-derived exactly rather than trusted.
        _ => solve_exact_with(lp, config),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("solution length mismatch")]
    ShapeMismatch,
    #[error("variable {var} violates its bounds")]
    BoundViolated { var: usize },
    #[error("constraint {row} violated")]
    RowViolated { row: usize },
    #[error("reported value differs from objective at solution")]
    ValueMismatch,
    #[error("dual multiplier {row} has the wrong sign")]
    DualSign { row: usize },
    #[error("reduced cost of variable {var} is positive")]
    ReducedCost { var: usize },
    #[error("duality gap is nonzero")]
    DualityGap,
    #[error("Farkas vector does not prove infeasibility")]
    FarkasInvalid,
    #[error("ray is not improving or not feasible")]
    RayInvalid,
}

/// Exactly re-checks the certificate carried by `outcome` against `lp`.
pub fn verify_outcome(lp: &LinearProgram, outcome: &LpOutcome) -> Result<(), VerifyError> {
    match outcome {
        LpOutcome::Optimal(o) => verify_optimal(lp, o),
        LpOutcome::Infeasible(o) => verify_farkas(lp, &o.farkas),
        LpOutcome::Unbounded(o) => verify_unbounded(lp, o),
    }
}

/// The certificate row system: the program's rows followed by virtual
/// `x_j <= upper_j` rows. Returns (coeff accessor, relation, rhs) per row.
fn certificate_rows(lp: &LinearProgram) -> Vec<(CertRow<'_>, Relation, Rational)> {
    let mut rows: Vec<(CertRow<'_>, Relation, Rational)> = lp
        .constraints
        .iter()
        .map(|c| (CertRow::Dense(&c.coeffs), c.relation, c.rhs.clone()))
        .collect();
    for (j, b) in lp.bounds.iter().enumerate() {
        if let Some(u) = &b.upper {
            rows.push((CertRow::Unit(j), Relation::Le, u.clone()));
        }
    }
    rows
}

enum CertRow<'a> {
    Dense(&'a [Rational]),
    Unit(usize),
}

impl CertRow<'_> {
    fn coeff(&self, j: usize) -> Rational {
        match self {
            CertRow::Dense(v) => v[j].clone(),
            CertRow::Unit(u) => {
                if *u == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
        }
    }

    fn dot(&self, x: &[Rational]) -> Rational {
        match self {
            CertRow::Dense(v) => v.iter().zip(x).map(|(a, b)| a * b).sum(),
            CertRow::Unit(u) => x[*u].clone(),
        }
    }
}

fn check_primal_feasible(lp: &LinearProgram, x: &[Rational]) -> Result<(), VerifyError> {
    if x.len() != lp.num_vars() {
        return Err(VerifyError::ShapeMismatch);
    }
    for (j, b) in lp.bounds.iter().enumerate() {
        if x[j] < b.lower {
            return Err(VerifyError::BoundViolated { var: j });
        }
        if let Some(u) = &b.upper {
            if &x[j] > u {
                return Err(VerifyError::BoundViolated { var: j });
            }
        }
    }
    for (i, c) in lp.constraints.iter().enumerate() {
        let lhs: Rational = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        let ok = match c.relation {
            Relation::Le => lhs <= c.rhs,
            Relation::Eq => lhs == c.rhs,
            Relation::Ge => lhs >= c.rhs,
        };
        if !ok {
            return Err(VerifyError::RowViolated { row: i });
        }
    }
    Ok(())
}

/// Exact optimality proof: primal feasibility, dual sign conditions,
/// nonpositive reduced costs, and a duality gap of exactly zero.
pub fn verify_optimal(lp: &LinearProgram, o: &OptimalOutcome) -> Result<(), VerifyError> {
    check_primal_feasible(lp, &o.solution)?;
    let objective_at: Rational = lp.objective.iter().zip(&o.solution).map(|(c, v)| c * v).sum();
    if objective_at != o.value {
        return Err(VerifyError::ValueMismatch);
    }
    let rows = certificate_rows(lp);
    if o.duals.len() != rows.len() {
        return Err(VerifyError::ShapeMismatch);
    }
    for (i, ((_, rel, _), y)) in rows.iter().zip(&o.duals).enumerate() {
        let ok = match rel {
            Relation::Le => !y.is_negative(),
            Relation::Eq => true,
            Relation::Ge => !y.is_positive(),
        };
        if !ok {
            return Err(VerifyError::DualSign { row: i });
        }
    }
    // Reduced costs r_j = c_j - y.A_j must be <= 0; the duality identity
    // value = y.b + sum_j r_j l_j then proves optimality over x >= l.
    let n = lp.num_vars();
    let mut gap_terms = Rational::zero();
    for j in 0..n {
        let ya: Rational = rows.iter().zip(&o.duals).map(|((row, _, _), y)| row.coeff(j) * y).sum();
        let r = &lp.objective[j] - &ya;
        if r.is_positive() {
            return Err(VerifyError::ReducedCost { var: j });
        }
        gap_terms = gap_terms + &r * &lp.bounds[j].lower;
    }
    let yb: Rational = rows.iter().zip(&o.duals).map(|((_, _, rhs), y)| rhs * y).sum();
    if o.value != yb + gap_terms {
        return Err(VerifyError::DualityGap);
    }
    Ok(())
}

/// Exact Farkas check: with the sign conventions per relation, the
/// aggregated row `v = y.A` is componentwise nonnegative while
/// `y.b < v.lower`, which no `x >= lower` can satisfy.
pub fn verify_farkas(lp: &LinearProgram, farkas: &[Rational]) -> Result<(), VerifyError> {
    let rows = certificate_rows(lp);
    if farkas.len() != rows.len() {
        return Err(VerifyError::ShapeMismatch);
    }
    for (i, ((_, rel, _), y)) in rows.iter().zip(farkas).enumerate() {
        let ok = match rel {
            Relation::Le => !y.is_negative(),
            Relation::Eq => true,
            Relation::Ge => !y.is_positive(),
        };
        if !ok {
            return Err(VerifyError::DualSign { row: i });
        }
    }
    let n = lp.num_vars();
    let mut v_dot_lower = Rational::zero();
    for j in 0..n {
        let v: Rational = rows.iter().zip(farkas).map(|((row, _, _), y)| row.coeff(j) * y).sum();
        if v.is_negative() {
            return Err(VerifyError::FarkasInvalid);
        }
        v_dot_lower = v_dot_lower + v * &lp.bounds[j].lower;
    }
    let yb: Rational = rows.iter().zip(farkas).map(|((_, _, rhs), y)| rhs * y).sum();
    if yb >= v_dot_lower {
        return Err(VerifyError::FarkasInvalid);
    }
    Ok(())
}

/// Exact unboundedness check: the point is feasible and the ray keeps every
/// constraint satisfied while strictly improving the objective.
pub fn verify_unbounded(lp: &LinearProgram, o: &UnboundedOutcome) -> Result<(), VerifyError> {
    check_primal_feasible(lp, &o.feasible_point)?;
    if o.ray.len() != lp.num_vars() {
        return Err(VerifyError::ShapeMismatch);
    }
    let rows = certificate_rows(lp);
    for (row, rel, _) in &rows {
        let along = row.dot(&o.ray);
        let ok = match rel {
            Relation::Le => !along.is_positive(),
            Relation::Eq => along.is_zero(),
            Relation::Ge => !along.is_negative(),
        };
        if !ok {
            return Err(VerifyError::RayInvalid);
        }
    }
    if o.ray.iter().any(|d| d.is_negative()) {
        return Err(VerifyError::RayInvalid);
    }
    let improvement: Rational = lp.objective.iter().zip(&o.ray).map(|(c, d)| c * d).sum();
    if !improvement.is_positive() {
        return Err(VerifyError::RayInvalid);
    }
    Ok(())
}

#[cfg(test)]
mod tests;
