//! Standard-form normalization shared by the exact and float solve paths.
//!
//! Variables are shifted so every lower bound becomes zero, finite upper
//! bounds become extra `<=` rows, and each row is scaled by a sign so its
//! right-hand side is nonnegative. The result is the equality system
//! `A x + sigma s = b`, `x, s >= 0` that the engine pivots on; the original
//! orientation of every row is retained so certificates can be mapped back.

use super::{LinearProgram, Relation};
use crate::numeric::Rational;

#[derive(Debug, Clone)]
pub(crate) struct NormRow {
    /// Coefficients over the structural variables, after the sign flip.
    pub coeffs: Vec<Rational>,
    /// Slack column index and its sign, if the (flipped) relation needs one.
    pub slack: Option<(usize, i8)>,
    /// Nonnegative right-hand side, after shifting and the sign flip.
    pub rhs: Rational,
    /// Sign applied to the original row (+1 or -1).
    pub sign: i8,
}

#[derive(Debug, Clone)]
pub(crate) struct Normalized {
    pub n_struct: usize,
    /// Lower-bound shift per structural variable.
    pub shift: Vec<Rational>,
    /// Objective over structural variables (unchanged by shifting).
    pub obj: Vec<Rational>,
    pub rows: Vec<NormRow>,
    /// Structural plus slack columns.
    pub total_cols: usize,
}

impl Normalized {
    pub fn build(lp: &LinearProgram) -> Normalized {
        let n = lp.num_vars();
        let shift: Vec<Rational> = lp.bounds.iter().map(|b| b.lower.clone()).collect();

        let mut rows = Vec::new();
        let mut n_slack = 0usize;
        let mut push_row = |coeffs: Vec<Rational>, relation: Relation, rhs: Rational| {
            let (sign, coeffs, rhs, relation) = if rhs.is_negative() {
                let flipped = match relation {
                    Relation::Le => Relation::Ge,
                    Relation::Eq => Relation::Eq,
                    Relation::Ge => Relation::Le,
                };
                (-1i8, coeffs.iter().map(|c| -c).collect(), -rhs, flipped)
            } else {
                (1i8, coeffs, rhs, relation)
            };
            let slack = match relation {
                Relation::Le => {
                    n_slack += 1;
                    Some((n_slack - 1, 1i8))
                }
                Relation::Ge => {
                    n_slack += 1;
                    Some((n_slack - 1, -1i8))
                }
                Relation::Eq => None,
            };
            rows.push(NormRow { coeffs, slack, rhs, sign });
        };

        for c in &lp.constraints {
            let shifted_rhs = &c.rhs - &c.coeffs.iter().zip(&shift).map(|(a, l)| a * l).sum::<Rational>();
            push_row(c.coeffs.clone(), c.relation, shifted_rhs);
        }
        for (j, b) in lp.bounds.iter().enumerate() {
            if let Some(u) = &b.upper {
                let mut coeffs = vec![Rational::zero(); n];
                coeffs[j] = Rational::one();
                // x_j <= u_j becomes x'_j <= u_j - l_j after the shift.
                push_row(coeffs, Relation::Le, u - &shift[j]);
            }
        }

        let total_cols = n + n_slack;
        Normalized { n_struct: n, shift, obj: lp.objective.clone(), rows, total_cols }
    }

    /// Coefficient of engine column `col` in row `row` (structural or slack).
    pub fn coeff(&self, row: usize, col: usize) -> Rational {
        let r = &self.rows[row];
        if col < self.n_struct {
            r.coeffs[col].clone()
        } else {
            match r.slack {
                Some((s, sigma)) if self.n_struct + s == col => {
                    if sigma > 0 {
                        Rational::one()
                    } else {
                        -Rational::one()
                    }
                }
                _ => Rational::zero(),
            }
        }
    }

    /// Engine objective: structural coefficients then zeros for slacks.
    pub fn engine_objective(&self) -> Vec<Rational> {
        let mut c = self.obj.clone();
        c.resize(self.total_cols, Rational::zero());
        c
    }
}
