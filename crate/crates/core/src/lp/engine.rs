//! Dense two-phase simplex, generic over the arithmetic so the exact and
//! float paths pivot identically. Artificial variables start basic where no
//! slack can, never re-enter, and are driven out (or left pinned at zero on
//! redundant rows) before phase two.

use super::normal::Normalized;
use super::{LpError, PivotRule, SolverConfig};
use crate::numeric::Rational;

/// Arithmetic required by the tableau. The `f64` implementation declares
/// anything within `1e-9` of zero to be zero; the `Rational` one is exact.
pub(crate) trait Scalar: Clone + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn sign(&self) -> i8;
    fn lt(&self, o: &Self) -> bool;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn sign(&self) -> i8 {
        self.signum()
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
}

const F64_EPS: f64 = 1e-9;

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        r.to_f64()
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn sign(&self) -> i8 {
        if *self > F64_EPS {
            1
        } else if *self < -F64_EPS {
            -1
        } else {
            0
        }
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
}

#[derive(Debug, Clone)]
pub(crate) struct RawBasis {
    /// Engine column occupying each row's basic slot. Columns below
    /// `total_cols` are structural/slack; higher ones are artificials.
    pub basis: Vec<usize>,
    /// Row served by each artificial column, in column order.
    pub art_rows: Vec<usize>,
    pub pivots: u64,
}

#[derive(Debug, Clone)]
pub(crate) enum RawResult {
    Optimal(RawBasis),
    /// Phase-one optimum left artificial mass behind; the basis proves it.
    Infeasible(RawBasis),
    Unbounded { basis: RawBasis, entering: usize },
}

pub(crate) fn two_phase_exact(norm: &Normalized, config: &SolverConfig) -> Result<RawResult, LpError> {
    Tableau::<Rational>::build(norm).run(config)
}

pub(crate) fn two_phase_float(norm: &Normalized, config: &SolverConfig) -> Result<RawResult, LpError> {
    Tableau::<f64>::build(norm).run(config)
}

struct Tableau<S> {
    m: usize,
    /// Structural + slack columns; artificial columns live above this.
    n_real: usize,
    cols: usize,
    /// `m` rows of `cols + 1` entries, the last being the rhs.
    rows: Vec<Vec<S>>,
    /// Reduced-cost row of `cols + 1` entries; the last is minus the
    /// current objective value.
    cost: Vec<S>,
    basis: Vec<usize>,
    art_rows: Vec<usize>,
    phase2_obj: Vec<S>,
    pivots: u64,
    bland_forever: bool,
    stall: u32,
}

impl<S: Scalar> Tableau<S> {
    fn build(norm: &Normalized) -> Tableau<S> {
        let m = norm.rows.len();
        let n_real = norm.total_cols;

        // Rows whose slack enters positively can use it as the initial
        // basic variable; all other rows receive an artificial column.
        let mut art_rows = Vec::new();
        let mut basis = vec![usize::MAX; m];
        for (i, row) in norm.rows.iter().enumerate() {
            match row.slack {
                Some((s, 1)) => basis[i] = norm.n_struct + s,
                _ => {
                    basis[i] = n_real + art_rows.len();
                    art_rows.push(i);
                }
            }
        }
        let cols = n_real + art_rows.len();

        let mut rows: Vec<Vec<S>> = Vec::with_capacity(m);
        for i in 0..m {
            let mut r: Vec<S> = (0..n_real).map(|j| S::from_rational(&norm.coeff(i, j))).collect();
            for &ar in &art_rows {
                r.push(if ar == i { S::one() } else { S::zero() });
            }
            r.push(S::from_rational(&norm.rows[i].rhs));
            rows.push(r);
        }

        let mut phase2_obj: Vec<S> = norm.engine_objective().iter().map(S::from_rational).collect();
        phase2_obj.resize(cols, S::zero());

        Tableau {
            m,
            n_real,
            cols,
            rows,
            cost: vec![S::zero(); cols + 1],
            basis,
            art_rows,
            phase2_obj,
            pivots: 0,
            bland_forever: false,
            stall: 0,
        }
    }

    fn run(mut self, config: &SolverConfig) -> Result<RawResult, LpError> {
        self.bland_forever = matches!(config.pivot_rule, PivotRule::Bland);

        if !self.art_rows.is_empty() {
            // Phase one: maximize minus the sum of artificials.
            let minus_one = S::zero().sub(&S::one());
            let mut c1 = vec![S::zero(); self.cols];
            for k in 0..self.art_rows.len() {
                c1[self.n_real + k] = minus_one.clone();
            }
            self.recompute_cost(&c1);
            match self.iterate(config)? {
                LoopEnd::Optimal => {}
                LoopEnd::Unbounded(_) => {
                    // Phase one is bounded above by zero; reaching here means
                    // arithmetic trouble, which only the float path can hit.
                    return Err(LpError::Certification("phase one reported unbounded".into()));
                }
            }
            // cost[cols] holds minus the objective; a positive entry means
            // artificial mass remains and the system is infeasible.
            if self.cost[self.cols].sign() > 0 {
                return Ok(RawResult::Infeasible(self.raw()));
            }
            self.drive_out_artificials();
        }

        let c2 = self.phase2_obj.clone();
        self.recompute_cost(&c2);
        match self.iterate(config)? {
            LoopEnd::Optimal => Ok(RawResult::Optimal(self.raw())),
            LoopEnd::Unbounded(e) => Ok(RawResult::Unbounded { basis: self.raw(), entering: e }),
        }
    }

    fn raw(&self) -> RawBasis {
        RawBasis { basis: self.basis.clone(), art_rows: self.art_rows.clone(), pivots: self.pivots }
    }

    fn recompute_cost(&mut self, c: &[S]) {
        for j in 0..=self.cols {
            let mut acc = if j < self.cols { c[j].clone() } else { S::zero() };
            for i in 0..self.m {
                let cb = &c[self.basis[i]];
                if cb.sign() != 0 {
                    acc = acc.sub(&cb.mul(&self.rows[i][j]));
                }
            }
            self.cost[j] = acc;
        }
    }

    /// Entering column, or `None` at optimality. Artificial columns never
    /// enter: they start basic and only leave.
    fn entering(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for j in 0..self.n_real {
            if self.cost[j].sign() > 0 {
                if self.bland_forever {
                    return Some(j);
                }
                match best {
                    Some(b) if !self.cost[b].lt(&self.cost[j]) => {}
                    _ => best = Some(j),
                }
            }
        }
        best
    }

    /// Leaving row by minimum ratio, ties broken toward the smallest basic
    /// variable index (Bland).
    fn leaving(&self, e: usize) -> Option<usize> {
        let mut best: Option<(usize, S)> = None;
        for i in 0..self.m {
            if self.rows[i][e].sign() > 0 {
                let ratio = self.rows[i][self.cols].div(&self.rows[i][e]);
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio.lt(&br) || (!br.lt(&ratio) && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let pv = self.rows[r][e].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.div(&pv);
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        for i in 0..self.m {
            if i != r && self.rows[i][e].sign() != 0 {
                let k = self.rows[i][e].clone();
                for (v, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                    *v = v.sub(&k.mul(p));
                }
            }
        }
        if self.cost[e].sign() != 0 {
            let k = self.cost[e].clone();
            for (v, p) in self.cost.iter_mut().zip(&pivot_row) {
                *v = v.sub(&k.mul(p));
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = e;
        self.pivots += 1;
    }

    fn iterate(&mut self, config: &SolverConfig) -> Result<LoopEnd, LpError> {
        loop {
            if self.pivots >= config.max_pivots {
                return Err(LpError::PivotLimitExceeded(config.max_pivots));
            }
            let Some(e) = self.entering() else {
                return Ok(LoopEnd::Optimal);
            };
            let Some(r) = self.leaving(e) else {
                return Ok(LoopEnd::Unbounded(e));
            };
            let before = self.cost[self.cols].clone();
            self.pivot(r, e);
            if let PivotRule::DantzigThenBland { stall_limit } = config.pivot_rule {
                if !self.bland_forever {
                    // The objective strictly improves iff cost[cols] strictly drops.
                    if self.cost[self.cols].lt(&before) {
                        self.stall = 0;
                    } else {
                        self.stall += 1;
                        if self.stall > stall_limit {
                            self.bland_forever = true;
                        }
                    }
                }
            }
        }
    }

    /// Pivots artificials out of the basis where possible. A row whose
    /// tableau entries vanish on every real column is redundant; its
    /// artificial stays pinned at zero and certification tolerates it.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.m {
            if self.basis[r] >= self.n_real {
                if let Some(j) = (0..self.n_real).find(|&j| self.rows[r][j].sign() != 0) {
                    self.pivot(r, j);
                }
            }
        }
    }
}

enum LoopEnd {
    Optimal,
    Unbounded(usize),
}
