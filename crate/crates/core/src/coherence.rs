//! Exact coherence decisions for discrete joint laws.
//!
//! A law of `(X_1, ..., X_k)` on `[0,1]^k` is *coherent* when every
//! coordinate is the conditional probability of one common event given
//! itself. For finite support this is equivalent to feasibility of a linear
//! system: split each atom's mass `w_s` into `a_s >= 0` on the event and
//! `b_s >= 0` off it, subject to, for every coordinate `i` and support value
//! `v`, `sum over atoms with i-th coordinate v of a_s = v * (their total
//! mass)`. The split parametrization (rather than the per-atom fraction
//! `a_s / w_s` directly) keeps the constraints linear when the weights
//! themselves become unknowns in the extremal module; the fraction is
//! recovered from the witness afterwards.
//!
//! [`check_coherence`] decides the system exactly and returns either an
//! [`EventSplitWitness`] or a Farkas certificate over the feasibility rows.
//! The remaining operations are lighter-weight checkers: the opposite-sign
//! threshold test ([`quick_incoherence`]), the marginal condition for
//! independent pairs ([`check_independent_pair`]), the two-set inequality
//! test ([`strassen_check`]), and the conditional-probability gap bound
//! ([`verify_gap_lemma`]).

use crate::laws::{DiscreteJointLaw, EventSplitWitness, LawError};
use crate::lp::{self, LinearProgram, LpOutcome};
use crate::numeric::Rational;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoherenceError {
    #[error(transparent)]
    Law(#[from] LawError),
    #[error("lp failure: {0}")]
    Lp(#[from] lp::LpError),
    #[error("operation requires a pair law (k = 2), got k = {0}")]
    PairOnly(usize),
    #[error("operation requires marginal laws (k = 1)")]
    MarginalOnly,
    #[error("marginal means differ: {0} vs {1}")]
    UnequalMeans(String, String),
    #[error("malformed interval: {0}")]
    MalformedInterval(String),
    #[error("conditioning event has probability zero")]
    ZeroConditioningSet,
    #[error("input shapes disagree")]
    ShapeMismatch,
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

// ---------------------------------------------------------------------------
// The coherence feasibility program
// ---------------------------------------------------------------------------

/// The feasibility program deciding coherence of `law`, in variables
/// `a_0..a_{n-1}, b_0..b_{n-1}` (event/complement mass per atom).
///
/// Row layout, which certificates refer to: one mass row `a_s + b_s = w_s`
/// per atom in atom order, then for each coordinate `i` and each of its
/// support values `v` in ascending order the marginal row
/// `sum_{s: point_i = v} a_s = v * sum_{s: point_i = v} w_s`.
pub fn coherence_lp(law: &DiscreteJointLaw) -> LinearProgram {
    let n = law.num_atoms();
    let zero_obj = vec![Rational::zero(); 2 * n];
    let mut lp = LinearProgram::maximize(zero_obj);
    for (s, atom) in law.atoms().iter().enumerate() {
        let mut row = vec![Rational::zero(); 2 * n];
        row[s] = Rational::one();
        row[n + s] = Rational::one();
        lp.add_eq(row, atom.weight.clone());
    }
    for coord in 0..law.k() {
        for value in law.marginal_support(coord) {
            let mut row = vec![Rational::zero(); 2 * n];
            let mut mass = Rational::zero();
            for (s, atom) in law.atoms().iter().enumerate() {
                if atom.point[coord] == value {
                    row[s] = Rational::one();
                    mass = mass + &atom.weight;
                }
            }
            lp.add_eq(row, &value * &mass);
        }
    }
    lp
}

/// Certificate that a law is not coherent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IncoherenceCertificate {
    /// Farkas multipliers over the rows of [`coherence_lp`].
    Farkas(Vec<Rational>),
    /// Opposite-sign threshold pair (see [`QuickCertificate`]).
    Quick(QuickCertificate),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoherenceVerdict {
    Coherent { witness: EventSplitWitness },
    Incoherent { certificate: IncoherenceCertificate },
}

impl CoherenceVerdict {
    pub fn is_coherent(&self) -> bool {
        matches!(self, CoherenceVerdict::Coherent { .. })
    }
}

/// Decides coherence of `law` exactly. A `Coherent` verdict carries an
/// event-split witness that satisfies every marginal equation exactly; an
/// `Incoherent` one carries Farkas multipliers verifying over
/// [`coherence_lp`]. Both are re-checked before being returned.
pub fn check_coherence(law: &DiscreteJointLaw) -> Result<CoherenceVerdict, CoherenceError> {
    let lp_problem = coherence_lp(law);
    match lp::solve_exact(&lp_problem)? {
        LpOutcome::Optimal(opt) => {
            let n = law.num_atoms();
            let masses = (0..n).map(|s| (opt.solution[s].clone(), opt.solution[n + s].clone())).collect();
            let witness = EventSplitWitness { masses };
            witness
                .verify(law)
                .map_err(|e| CoherenceError::Internal(format!("witness failed verification: {e}")))?;
            // Coherence forces equal coordinate means (each equals the event
            // probability); consistency check on every positive verdict.
            let means = law.means();
            let p = witness.event_probability();
            if means.iter().any(|m| m != &p) {
                return Err(CoherenceError::Internal("coherent law with unequal means".into()));
            }
            Ok(CoherenceVerdict::Coherent { witness })
        }
        LpOutcome::Infeasible(inf) => {
            lp::verify_farkas(&lp_problem, &inf.farkas)
                .map_err(|e| CoherenceError::Internal(format!("farkas failed verification: {e}")))?;
            Ok(CoherenceVerdict::Incoherent { certificate: IncoherenceCertificate::Farkas(inf.farkas) })
        }
        LpOutcome::Unbounded(_) => Err(CoherenceError::Internal("feasibility program reported unbounded".into())),
    }
}

/// Re-checks a verdict against a law (used by tests and the CLI on
/// round-tripped artifacts).
pub fn verify_verdict(law: &DiscreteJointLaw, verdict: &CoherenceVerdict) -> Result<(), CoherenceError> {
    match verdict {
        CoherenceVerdict::Coherent { witness } => witness
            .verify(law)
            .map_err(|e| CoherenceError::Internal(format!("witness failed verification: {e}"))),
        CoherenceVerdict::Incoherent { certificate } => match certificate {
            IncoherenceCertificate::Farkas(y) => lp::verify_farkas(&coherence_lp(law), y)
                .map_err(|e| CoherenceError::Internal(format!("farkas failed verification: {e}"))),
            IncoherenceCertificate::Quick(q) => {
                if q.verify(law) {
                    Ok(())
                } else {
                    Err(CoherenceError::Internal("quick certificate does not verify".into()))
                }
            }
        },
    }
}

// ---------------------------------------------------------------------------
// Opposite-sign threshold certificate
// ---------------------------------------------------------------------------

/// Thresholds `0 <= a <= b <= 1` such that `(X - a)(Y - b) < 0` almost
/// surely while `P(Y > b) > 0`, which rules out coherence. The guard
/// `P(Y > b) > 0` is essential: without it constant `X = Y = 1/2` with
/// `a = 1/4, b = 3/4` would be wrongly condemned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuickCertificate {
    pub a: Rational,
    pub b: Rational,
}

impl QuickCertificate {
    /// Atom-scan verification of the certificate conditions.
    pub fn verify(&self, law: &DiscreteJointLaw) -> bool {
        if law.k() != 2 || self.a > self.b || self.a.is_negative() || self.b > Rational::one() {
            return false;
        }
        let opposite = law
            .atoms()
            .iter()
            .all(|atom| ((&atom.point[0] - &self.a) * (&atom.point[1] - &self.b)).is_negative());
        opposite && law.prob_where(|p| p[1] > self.b).is_positive()
    }
}

/// Scans candidate thresholds for a [`QuickCertificate`]. Candidates are
/// the support values of each coordinate plus midpoints of consecutive
/// values and the interval endpoints; the sign pattern of
/// `(X - a)(Y - b)` is piecewise constant with breakpoints only at support
/// values, so this scan is exhaustive over all real thresholds.
///
/// Returns `None` for coherent laws, but may also return `None` for
/// incoherent laws whose incoherence has no opposite-sign explanation.
pub fn quick_incoherence(law: &DiscreteJointLaw) -> Result<Option<QuickCertificate>, CoherenceError> {
    if law.k() != 2 {
        return Err(CoherenceError::PairOnly(law.k()));
    }
    let candidates = |support: Vec<Rational>| -> Vec<Rational> {
        let mut vals = support;
        vals.push(Rational::zero());
        vals.push(Rational::one());
        vals.sort();
        vals.dedup();
        let mut out = vals.clone();
        for w in vals.windows(2) {
            out.push((&w[0] + &w[1]) / Rational::from_int(2));
        }
        out.sort();
        out.dedup();
        out
    };
    let a_candidates = candidates(law.marginal_support(0));
    let b_candidates = candidates(law.marginal_support(1));
    for a in &a_candidates {
        for b in &b_candidates {
            if a > b {
                continue;
            }
            let cert = QuickCertificate { a: a.clone(), b: b.clone() };
            if cert.verify(law) {
                return Ok(Some(cert));
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Independent pairs
// ---------------------------------------------------------------------------

/// Verdict for feasibility of a coherent *independent* pair with the given
/// marginals. `Violated` reports the threshold pair: the condition failed
/// for thresholds just below `s` and `t` (events `X >= s`, `Y >= t`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndependentPairVerdict {
    Coherent,
    UnequalMeans { mean_x: Rational, mean_y: Rational },
    Violated { s: Rational, t: Rational, lhs: Rational, rhs: Rational },
}

impl IndependentPairVerdict {
    pub fn is_coherent(&self) -> bool {
        matches!(self, IndependentPairVerdict::Coherent)
    }
}

/// Decides whether independent `X ~ mu_x`, `Y ~ mu_y` form a coherent pair,
/// by the threshold criterion: for all `s, t`,
/// `E[X 1(X>s)] + E[Y 1(Y>t)] <= p + P(X>s) P(Y>t)`.
/// For finite support, thresholds just below each support value suffice,
/// implemented as closed events `X >= u`, `Y >= v` without numeric
/// perturbation.
pub fn check_independent_pair(
    mu_x: &DiscreteJointLaw,
    mu_y: &DiscreteJointLaw,
) -> Result<IndependentPairVerdict, CoherenceError> {
    if mu_x.k() != 1 || mu_y.k() != 1 {
        return Err(CoherenceError::MarginalOnly);
    }
    let p = mu_x.means().remove(0);
    let mean_y = mu_y.means().remove(0);
    if p != mean_y {
        return Ok(IndependentPairVerdict::UnequalMeans { mean_x: p, mean_y });
    }
    for u in mu_x.marginal_support(0) {
        let ex_tail = mu_x.expectation(|pt| if pt[0] >= u { pt[0].clone() } else { Rational::zero() });
        let px_tail = mu_x.prob_where(|pt| pt[0] >= u);
        for v in mu_y.marginal_support(0) {
            let ey_tail = mu_y.expectation(|pt| if pt[0] >= v { pt[0].clone() } else { Rational::zero() });
            let py_tail = mu_y.prob_where(|pt| pt[0] >= v);
            let lhs = &ex_tail + &ey_tail;
            let rhs = &p + &(&px_tail * &py_tail);
            if lhs > rhs {
                return Ok(IndependentPairVerdict::Violated { s: u, t: v, lhs, rhs });
            }
        }
    }
    Ok(IndependentPairVerdict::Coherent)
}

// ---------------------------------------------------------------------------
// Two-set inequality (marginal feasibility form)
// ---------------------------------------------------------------------------

/// An interval in `[0,1]` with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn closed(lo: Rational, hi: Rational) -> Self {
        Interval { lo, hi, lo_closed: true, hi_closed: true }
    }

    pub fn point(v: Rational) -> Self {
        Interval::closed(v.clone(), v)
    }

    fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed { x >= &self.lo } else { x > &self.lo };
        let below = if self.hi_closed { x <= &self.hi } else { x < &self.hi };
        above && below
    }
}

/// A finite union of intervals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalUnion(Vec<Interval>);

impl IntervalUnion {
    pub fn new(intervals: Vec<Interval>) -> Result<Self, CoherenceError> {
        for iv in &intervals {
            if iv.lo > iv.hi || (iv.lo == iv.hi && !(iv.lo_closed && iv.hi_closed)) {
                return Err(CoherenceError::MalformedInterval(format!(
                    "[{}, {}] with lo_closed={}, hi_closed={}",
                    iv.lo, iv.hi, iv.lo_closed, iv.hi_closed
                )));
            }
        }
        Ok(IntervalUnion(intervals))
    }

    /// The whole interval `[0,1]`.
    pub fn full() -> Self {
        IntervalUnion(vec![Interval::closed(Rational::zero(), Rational::one())])
    }

    /// Degenerate union of single points.
    pub fn from_points(points: &[Rational]) -> Self {
        IntervalUnion(points.iter().map(|v| Interval::point(v.clone())).collect())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.0.iter().any(|iv| iv.contains(x))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrassenReport {
    /// `E[X 1(X in B)] + E[Y 1(Y in C)] - p - P(X in B, Y in C)`.
    pub slack: Rational,
    /// `true` iff `slack <= 0`.
    pub holds: bool,
}

/// Evaluates the two-set inequality for one pair `(B, C)` of interval
/// unions. Requires a pair law with equal coordinate means.
pub fn strassen_check(
    law: &DiscreteJointLaw,
    b_set: &IntervalUnion,
    c_set: &IntervalUnion,
) -> Result<StrassenReport, CoherenceError> {
    if law.k() != 2 {
        return Err(CoherenceError::PairOnly(law.k()));
    }
    let means = law.means();
    if means[0] != means[1] {
        return Err(CoherenceError::UnequalMeans(means[0].to_string(), means[1].to_string()));
    }
    let p = means[0].clone();
    let ex_b = law.expectation(|pt| if b_set.contains(&pt[0]) { pt[0].clone() } else { Rational::zero() });
    let ey_c = law.expectation(|pt| if c_set.contains(&pt[1]) { pt[1].clone() } else { Rational::zero() });
    let joint = law.prob_where(|pt| b_set.contains(&pt[0]) && c_set.contains(&pt[1]));
    let slack = &(&ex_b + &ey_c) - &(&p + &joint);
    let holds = !slack.is_positive();
    Ok(StrassenReport { slack, holds })
}

/// Outcome of scanning the two-set inequality over every subset of each
/// coordinate's support. For finite-support pair laws this quantification
/// is equivalent to all finite unions of intervals, hence to coherence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrassenVerdict {
    Holds,
    UnequalMeans { mean_x: Rational, mean_y: Rational },
    Violated { b_points: Vec<Rational>, c_points: Vec<Rational>, slack: Rational },
}

impl StrassenVerdict {
    pub fn is_coherent(&self) -> bool {
        matches!(self, StrassenVerdict::Holds)
    }
}

/// Exhaustive scan over all `2^m * 2^n` support subsets. Only sensible for
/// small supports (the soundness corpus uses at most 4 values per
/// coordinate, i.e. 256 pairs).
pub fn strassen_verdict(law: &DiscreteJointLaw) -> Result<StrassenVerdict, CoherenceError> {
    if law.k() != 2 {
        return Err(CoherenceError::PairOnly(law.k()));
    }
    let means = law.means();
    if means[0] != means[1] {
        return Ok(StrassenVerdict::UnequalMeans { mean_x: means[0].clone(), mean_y: means[1].clone() });
    }
    let supp_x = law.marginal_support(0);
    let supp_y = law.marginal_support(1);
    assert!(supp_x.len() <= 16 && supp_y.len() <= 16, "support too large for exhaustive scan");
    let subset = |values: &[Rational], mask: u32| -> Vec<Rational> {
        values.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, v)| v.clone()).collect()
    };
    for bm in 0..(1u32 << supp_x.len()) {
        let b_points = subset(&supp_x, bm);
        let b_set = IntervalUnion::from_points(&b_points);
        for cm in 0..(1u32 << supp_y.len()) {
            let c_points = subset(&supp_y, cm);
            let c_set = IntervalUnion::from_points(&c_points);
            let report = strassen_check(law, &b_set, &c_set)?;
            if !report.holds {
                return Ok(StrassenVerdict::Violated { b_points, c_points, slack: report.slack });
            }
        }
    }
    Ok(StrassenVerdict::Holds)
}

// ---------------------------------------------------------------------------
// Conditional-probability gap bound
// ---------------------------------------------------------------------------

/// The classified equality configurations of the gap bound, stated up to
/// exchanging G and H and modulo null events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GapEqualityCase {
    /// `G` and `H` disjoint with `A = G`.
    Disjoint,
    /// `G` a subset of `H` with `A = G`.
    FirstInsideSecond,
    /// `H` a subset of `G` with `A = G \ H`.
    SecondInsideFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GapEquality {
    /// Strict inequality; none of the equality cases applies.
    Strict,
    /// Equality matching one of the three classified configurations,
    /// possibly after exchanging G and H.
    Case { case: GapEqualityCase, swapped: bool },
    /// `G` and `H` coincide up to null sets, so both sides vanish for every
    /// `A`. The three-case classification presumes `G` and `H` differ.
    IdenticalEvents,
    /// Equality matching no known configuration. Never produced unless the
    /// classification itself fails; reported rather than silently dropped.
    Unclassified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapLemmaReport {
    /// `|P(A|G) - P(A|H)|`.
    pub lhs: Rational,
    /// `1 - P(GH) / (P(G) + P(H) - P(GH))`.
    pub rhs: Rational,
    /// `lhs <= rhs`; always true unless the bound itself were false.
    pub holds: bool,
    pub equality: GapEquality,
}

/// Evaluates the gap bound `|P(A|G) - P(A|H)| <= P(G xor H | G or H)` on a
/// finite weighted space, with the convention `P(A | N) = 0` for null `N`,
/// and classifies equality instances.
pub fn verify_gap_lemma(
    weights: &[Rational],
    a_mask: &[bool],
    g_mask: &[bool],
    h_mask: &[bool],
) -> Result<GapLemmaReport, CoherenceError> {
    let n = weights.len();
    if a_mask.len() != n || g_mask.len() != n || h_mask.len() != n {
        return Err(CoherenceError::ShapeMismatch);
    }
    if weights.iter().any(Rational::is_negative) {
        return Err(CoherenceError::Internal("negative weight".into()));
    }
    let mass = |pred: &dyn Fn(usize) -> bool| -> Rational {
        (0..n).filter(|&i| pred(i)).map(|i| &weights[i]).sum()
    };
    // p, q, r partition G union H; a, b, c are the conditional event masses.
    let p = mass(&|i| g_mask[i] && !h_mask[i]);
    let q = mass(&|i| g_mask[i] && h_mask[i]);
    let r = mass(&|i| !g_mask[i] && h_mask[i]);
    if (&p + &q).is_zero() || (&q + &r).is_zero() {
        return Err(CoherenceError::ZeroConditioningSet);
    }
    let cond = |top: Rational, bottom: &Rational| -> Rational {
        if bottom.is_zero() {
            Rational::zero()
        } else {
            top / bottom
        }
    };
    let a = cond(mass(&|i| a_mask[i] && g_mask[i] && !h_mask[i]), &p);
    let b = cond(mass(&|i| a_mask[i] && g_mask[i] && h_mask[i]), &q);
    let c = cond(mass(&|i| a_mask[i] && !g_mask[i] && h_mask[i]), &r);

    let p_a_g = (&(&p * &a) + &(&q * &b)) / (&p + &q);
    let p_a_h = (&(&q * &b) + &(&r * &c)) / (&q + &r);
    let lhs = (&p_a_g - &p_a_h).abs();
    let union = &(&p + &q) + &r;
    let rhs = (&p + &r) / &union;
    let holds = lhs <= rhs;

    let equality = if lhs < rhs {
        GapEquality::Strict
    } else if p.is_zero() && r.is_zero() {
        GapEquality::IdenticalEvents
    } else {
        let one = Rational::one();
        let classify = |p: &Rational, q: &Rational, r: &Rational, a: &Rational, b: &Rational, c: &Rational| {
            if p.is_positive() && q.is_zero() && r.is_positive() && a == &one && c.is_zero() {
                Some(GapEqualityCase::Disjoint)
            } else if p.is_zero() && q.is_positive() && r.is_positive() && b == &one && c.is_zero() {
                Some(GapEqualityCase::FirstInsideSecond)
            } else if p.is_positive() && q.is_positive() && r.is_zero() && a == &one && b.is_zero() {
                Some(GapEqualityCase::SecondInsideFirst)
            } else {
                None
            }
        };
        if let Some(case) = classify(&p, &q, &r, &a, &b, &c) {
            GapEquality::Case { case, swapped: false }
        } else if let Some(case) = classify(&r, &q, &p, &c, &b, &a) {
            GapEquality::Case { case, swapped: true }
        } else {
            GapEquality::Unclassified
        }
    };

    Ok(GapLemmaReport { lhs, rhs, holds, equality })
}
