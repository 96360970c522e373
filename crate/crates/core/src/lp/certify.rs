//! Exact reconstruction of certificates from a basis, shared by the exact
//! path and the float-then-certify path. Everything here works on the
//! rational data captured at normalization time, so a basis located by
//! floating-point pivoting is either proven correct or rejected.

use super::engine::{RawBasis, RawResult};
use super::normal::Normalized;
use super::{InfeasibleOutcome, LinearProgram, LpOutcome, OptimalOutcome, UnboundedOutcome};
use crate::numeric::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub(crate) enum CertifyFail {
    #[error("basis matrix is singular")]
    SingularBasis,
    #[error("basic variable is negative")]
    NegativeBasic,
    #[error("artificial variable is basic at a nonzero level")]
    ArtificialNonzero,
    #[error("a reduced cost is positive")]
    PositiveReducedCost,
    #[error("phase-one certificate does not prove infeasibility")]
    BadFarkas,
}

/// Exact Gauss-Jordan solve of a square system; `None` if singular.
pub(crate) fn gauss_solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n) && b.len() == n);
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let pv = a[col][col].clone();
        for j in col..n {
            a[col][j] = &a[col][j] / &pv;
        }
        b[col] = &b[col] / &pv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let k = a[r][col].clone();
                for j in col..n {
                    a[r][j] = &a[r][j] - &(&k * &a[col][j]);
                }
                b[r] = &b[r] - &(&k * &b[col]);
            }
        }
    }
    Some(b)
}

/// Engine column `col` of the equality system as a dense length-`m` vector.
fn engine_column(norm: &Normalized, art_rows: &[usize], col: usize) -> Vec<Rational> {
    let m = norm.rows.len();
    if col < norm.total_cols {
        (0..m).map(|i| norm.coeff(i, col)).collect()
    } else {
        let row = art_rows[col - norm.total_cols];
        (0..m).map(|i| if i == row { Rational::one() } else { Rational::zero() }).collect()
    }
}

fn basis_matrix(norm: &Normalized, raw: &RawBasis) -> Vec<Vec<Rational>> {
    let m = norm.rows.len();
    let cols: Vec<Vec<Rational>> = raw.basis.iter().map(|&c| engine_column(norm, &raw.art_rows, c)).collect();
    (0..m).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

fn transpose(a: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    (0..n).map(|j| (0..n).map(|i| a[i][j].clone()).collect()).collect()
}

/// Solves `B x_B = rhs` exactly and scatters the structural part.
struct BasicPoint {
    x_basic: Vec<Rational>,
    x_struct: Vec<Rational>,
}

fn basic_point(norm: &Normalized, raw: &RawBasis) -> Result<BasicPoint, CertifyFail> {
    let b_mat = basis_matrix(norm, raw);
    let rhs: Vec<Rational> = norm.rows.iter().map(|r| r.rhs.clone()).collect();
    let x_basic = gauss_solve(b_mat, rhs).ok_or(CertifyFail::SingularBasis)?;
    let mut x_struct = vec![Rational::zero(); norm.n_struct];
    for (pos, &col) in raw.basis.iter().enumerate() {
        if col < norm.n_struct {
            x_struct[col] = x_basic[pos].clone();
        }
    }
    Ok(BasicPoint { x_basic, x_struct })
}

/// Dual vector `y` solving `B^T y = c_B` for the given per-column costs.
fn duals_for(norm: &Normalized, raw: &RawBasis, cost_of: impl Fn(usize) -> Rational) -> Result<Vec<Rational>, CertifyFail> {
    let bt = transpose(&basis_matrix(norm, raw));
    let c_b: Vec<Rational> = raw.basis.iter().map(|&c| cost_of(c)).collect();
    gauss_solve(bt, c_b).ok_or(CertifyFail::SingularBasis)
}

/// Multiplier for the original orientation of each normalized row.
fn signed_rows(norm: &Normalized, y: &[Rational]) -> Vec<Rational> {
    norm.rows
        .iter()
        .zip(y)
        .map(|(row, yi)| if row.sign < 0 { -yi } else { yi.clone() })
        .collect()
}

pub(crate) fn outcome_from_raw(lp: &LinearProgram, norm: &Normalized, raw: RawResult) -> Result<LpOutcome, CertifyFail> {
    match raw {
        RawResult::Optimal(basis) => build_optimal(lp, norm, &basis).map(LpOutcome::Optimal),
        RawResult::Infeasible(basis) => build_infeasible(norm, &basis).map(LpOutcome::Infeasible),
        RawResult::Unbounded { basis, entering } => {
            build_unbounded(norm, &basis, entering).map(LpOutcome::Unbounded)
        }
    }
}

fn build_optimal(lp: &LinearProgram, norm: &Normalized, raw: &RawBasis) -> Result<OptimalOutcome, CertifyFail> {
    let point = basic_point(norm, raw)?;
    for (pos, &col) in raw.basis.iter().enumerate() {
        if point.x_basic[pos].is_negative() {
            return Err(CertifyFail::NegativeBasic);
        }
        if col >= norm.total_cols && !point.x_basic[pos].is_zero() {
            return Err(CertifyFail::ArtificialNonzero);
        }
    }

    // Phase-two costs: structural objective, zero on slacks and artificials.
    let engine_obj = norm.engine_objective();
    let y = duals_for(norm, raw, |c| if c < norm.total_cols { engine_obj[c].clone() } else { Rational::zero() })?;

    // Optimality over the real columns: c_j - y.A_j <= 0 for all of them.
    for j in 0..norm.total_cols {
        let ya: Rational = (0..norm.rows.len()).map(|i| &y[i] * &norm.coeff(i, j)).sum();
        if (&engine_obj[j] - &ya).is_positive() {
            return Err(CertifyFail::PositiveReducedCost);
        }
    }

    let solution: Vec<Rational> = point.x_struct.iter().zip(&norm.shift).map(|(x, l)| x + l).collect();
    let value: Rational = lp.objective.iter().zip(&solution).map(|(c, x)| c * x).sum();
    Ok(OptimalOutcome { solution, value, duals: signed_rows(norm, &y), pivots: raw.pivots })
}

fn build_infeasible(norm: &Normalized, raw: &RawBasis) -> Result<InfeasibleOutcome, CertifyFail> {
    // Phase-one costs: -1 on artificials, zero elsewhere.
    let y = duals_for(norm, raw, |c| {
        if c >= norm.total_cols {
            -Rational::one()
        } else {
            Rational::zero()
        }
    })?;
    // At a phase-one optimum with positive residual: y.A_j >= 0 on every
    // real column and y.b < 0. Checked here so a bad basis never escapes.
    for j in 0..norm.total_cols {
        let ya: Rational = (0..norm.rows.len()).map(|i| &y[i] * &norm.coeff(i, j)).sum();
        if ya.is_negative() {
            return Err(CertifyFail::BadFarkas);
        }
    }
    let yb: Rational = norm.rows.iter().zip(&y).map(|(r, yi)| &r.rhs * yi).sum();
    if !yb.is_negative() {
        return Err(CertifyFail::BadFarkas);
    }
    Ok(InfeasibleOutcome { farkas: signed_rows(norm, &y), pivots: raw.pivots })
}

fn build_unbounded(norm: &Normalized, raw: &RawBasis, entering: usize) -> Result<UnboundedOutcome, CertifyFail> {
    let point = basic_point(norm, raw)?;
    for (pos, &col) in raw.basis.iter().enumerate() {
        if point.x_basic[pos].is_negative() {
            return Err(CertifyFail::NegativeBasic);
        }
        if col >= norm.total_cols && !point.x_basic[pos].is_zero() {
            return Err(CertifyFail::ArtificialNonzero);
        }
    }
    let col = engine_column(norm, &raw.art_rows, entering);
    let d_basic = gauss_solve(basis_matrix(norm, raw), col).ok_or(CertifyFail::SingularBasis)?;
    let mut direction = vec![Rational::zero(); norm.n_struct];
    if entering < norm.n_struct {
        direction[entering] = Rational::one();
    }
    for (pos, &c) in raw.basis.iter().enumerate() {
        if c < norm.n_struct {
            direction[c] = &direction[c] - &d_basic[pos];
        }
    }
    let feasible_point: Vec<Rational> = point.x_struct.iter().zip(&norm.shift).map(|(x, l)| x + l).collect();
    Ok(UnboundedOutcome { feasible_point, ray: direction, pivots: raw.pivots })
}
