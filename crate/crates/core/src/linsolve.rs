//! Exact linear systems over the rational function field.
//!
//! Unknowns are few (at most a handful of basis coefficients) while equations
//! are many (one per index tuple), so the system is reduced incrementally:
//! each incoming row is reduced against the current pivot rows and either
//! vanishes, exposes an inconsistency, or becomes a new pivot row.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::symbolic::{RationalFunction, MAX_VARS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Unique,
    Affine,
    Inconsistent,
    DegenerateLhs,
}

/// Solution set `particular + span(null_basis)` of `Σ_b x_b · column_b = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution {
    pub status: SolveStatus,
    pub particular: Vec<RationalFunction>,
    pub null_basis: Vec<Vec<RationalFunction>>,
    /// Column index of the free unknown behind each null vector.
    pub free_columns: Vec<usize>,
    /// Pivot entries divided by during elimination, in order of use.
    pub pivots: Vec<RationalFunction>,
    pub rank: usize,
}

impl LinearSolution {
    pub fn is_consistent(&self) -> bool {
        self.status != SolveStatus::Inconsistent
    }

    /// `particular + Σ t_j null_j`.
    pub fn member(&self, params: &[RationalFunction]) -> Vec<RationalFunction> {
        let mut x = self.particular.clone();
        for (t, v) in params.iter().zip(&self.null_basis) {
            if t.is_zero() {
                continue;
            }
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi = &*xi + &(t * vi);
            }
        }
        x
    }
}

/// Reduced pivot row: `pivot_col` has coefficient 1 and all other pivot
/// columns have coefficient 0.
struct PivotRow {
    col: usize,
    coeffs: Vec<RationalFunction>,
    rhs: RationalFunction,
}

/// Solves the overdetermined system whose `r`-th equation is
/// `Σ_b columns[b][r] · x_b = rhs[r]`.
///
/// Rows are visited in the given order and the pivot of each new row is its
/// first nonzero column, so results are deterministic.
pub fn solve(columns: &[&[RationalFunction]], rhs: &[RationalFunction]) -> LinearSolution {
    let m = columns.len();
    debug_assert!(columns.iter().all(|c| c.len() == rhs.len()));
    let lhs_zero = rhs.iter().all(RationalFunction::is_zero);
    if !lhs_zero && certified_inconsistent(columns, rhs) {
        return LinearSolution {
            status: SolveStatus::Inconsistent,
            particular: Vec::new(),
            null_basis: Vec::new(),
            free_columns: Vec::new(),
            pivots: Vec::new(),
            rank: m,
        };
    }
    let mut rows: Vec<PivotRow> = Vec::new();
    let mut pivots = Vec::new();
    let mut inconsistent = false;

    for r in 0..rhs.len() {
        let mut coeffs: Vec<RationalFunction> = columns.iter().map(|c| c[r].clone()).collect();
        let mut b = rhs[r].clone();
        if coeffs.iter().all(RationalFunction::is_zero) && b.is_zero() {
            continue;
        }
        for p in &rows {
            let f = coeffs[p.col].clone();
            if f.is_zero() {
                continue;
            }
            for (c, pc) in coeffs.iter_mut().zip(&p.coeffs) {
                if !pc.is_zero() {
                    *c = &*c - &(&f * pc);
                }
            }
            if !p.rhs.is_zero() {
                b = &b - &(&f * &p.rhs);
            }
        }
        let Some(col) = coeffs.iter().position(|c| !c.is_zero()) else {
            if !b.is_zero() {
                inconsistent = true;
                break;
            }
            continue;
        };
        let piv = coeffs[col].clone();
        let inv = piv.recip().expect("nonzero pivot");
        for c in coeffs.iter_mut() {
            if !c.is_zero() {
                *c = &*c * &inv;
            }
        }
        b = &b * &inv;
        for p in rows.iter_mut() {
            let f = p.coeffs[col].clone();
            if f.is_zero() {
                continue;
            }
            for (pc, c) in p.coeffs.iter_mut().zip(&coeffs) {
                if !c.is_zero() {
                    *pc = &*pc - &(&f * c);
                }
            }
            p.rhs = &p.rhs - &(&f * &b);
        }
        pivots.push(piv);
        rows.push(PivotRow { col, coeffs, rhs: b });
    }

    let rank = rows.len();
    if inconsistent {
        return LinearSolution {
            status: SolveStatus::Inconsistent,
            particular: Vec::new(),
            null_basis: Vec::new(),
            free_columns: Vec::new(),
            pivots,
            rank,
        };
    }
    rows.sort_by_key(|p| p.col);
    let mut particular = vec![RationalFunction::zero(); m];
    for p in &rows {
        particular[p.col] = p.rhs.clone();
    }
    let pivot_cols: Vec<usize> = rows.iter().map(|p| p.col).collect();
    let free_columns: Vec<usize> = (0..m).filter(|c| !pivot_cols.contains(c)).collect();
    let null_basis: Vec<Vec<RationalFunction>> = free_columns
        .iter()
        .map(|&free| {
            let mut v = vec![RationalFunction::zero(); m];
            v[free] = RationalFunction::one();
            for p in &rows {
                v[p.col] = -&p.coeffs[free];
            }
            v
        })
        .collect();
    let status = if lhs_zero {
        SolveStatus::DegenerateLhs
    } else if null_basis.is_empty() {
        SolveStatus::Unique
    } else {
        SolveStatus::Affine
    };
    LinearSolution {
        status,
        particular,
        null_basis,
        free_columns,
        pivots,
        rank,
    }
}

fn sample_point(t: usize) -> Vec<BigRational> {
    (0..MAX_VARS)
        .map(|j| BigRational::new(BigInt::from(3 + 2 * j + 5 * t), BigInt::from(7 + j + 3 * t)))
        .collect()
}

/// Exact rank test at a few rational points. When the coefficient matrix has
/// full column rank at a point it has full rank over the function field, and
/// a right-hand side outside its span at that point is outside it everywhere.
fn certified_inconsistent(columns: &[&[RationalFunction]], rhs: &[RationalFunction]) -> bool {
    let m = columns.len();
    (0..3).any(|t| {
        let point = sample_point(t);
        let mut reduced: Vec<(usize, Vec<BigRational>)> = Vec::new();
        for r in 0..rhs.len() {
            let row: Option<Vec<BigRational>> = columns
                .iter()
                .map(|c| c[r].eval(&point).ok())
                .chain(std::iter::once(rhs[r].eval(&point).ok()))
                .collect();
            let Some(mut row) = row else {
                return false;
            };
            for (col, p) in &reduced {
                if !row[*col].is_zero() {
                    let f = row[*col].clone();
                    for (x, y) in row.iter_mut().zip(p) {
                        *x -= &f * y;
                    }
                }
            }
            let Some(col) = row.iter().position(|v| !v.is_zero()) else {
                continue;
            };
            let inv = row[col].recip();
            for x in row.iter_mut() {
                *x *= &inv;
            }
            reduced.push((col, row));
            let full_rank = reduced.iter().filter(|(c, _)| *c < m).count() == m;
            if full_rank && reduced.iter().any(|(c, _)| *c == m) {
                return true;
            }
        }
        false
    })
}

/// Exact check of `Σ_b x_b · columns[b] == rhs`.
pub fn substitutes(columns: &[&[RationalFunction]], rhs: &[RationalFunction], x: &[RationalFunction]) -> bool {
    (0..rhs.len()).all(|r| {
        let mut acc = RationalFunction::zero();
        for (c, xb) in columns.iter().zip(x) {
            if !c[r].is_zero() && !xb.is_zero() {
                acc = &acc + &(&c[r] * xb);
            }
        }
        acc == rhs[r]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_expression;

    fn rf(s: &str) -> RationalFunction {
        let names: Vec<String> = ["x1", "x2", "x3"].iter().map(|s| s.to_string()).collect();
        parse_expression(s, &names).unwrap()
    }

    fn v(items: &[&str]) -> Vec<RationalFunction> {
        items.iter().map(|s| rf(s)).collect()
    }

    #[test]
    fn unique_solution() {
        let t = v(&["x1", "0", "x2", "1"]);
        let rhs: Vec<_> = t.iter().map(|c| c * &rf("2*x3")).collect();
        let sol = solve(&[&t], &rhs);
        assert_eq!(sol.status, SolveStatus::Unique);
        assert_eq!(sol.particular, vec![rf("2*x3")]);
        assert!(substitutes(&[&t], &rhs, &sol.particular));
    }

    #[test]
    fn affine_family() {
        // second column is x1 times the first
        let a = v(&["1", "x2", "0"]);
        let b = v(&["x1", "x1*x2", "0"]);
        let c = v(&["0", "1", "1"]);
        let rhs = v(&["3", "3*x2 + x3", "x3"]);
        let sol = solve(&[&a, &b, &c], &rhs);
        assert_eq!(sol.status, SolveStatus::Affine);
        assert_eq!(sol.rank, 2);
        assert_eq!(sol.null_basis.len(), 1);
        assert_eq!(sol.null_basis[0], v(&["-x1", "1", "0"]));
        for t in ["0", "1", "x3/x1"] {
            let x = sol.member(&[rf(t)]);
            assert!(substitutes(&[&a, &b, &c], &rhs, &x));
        }
    }

    #[test]
    fn inconsistent_system() {
        let a = v(&["1", "1"]);
        let rhs = v(&["x1", "x2"]);
        assert_eq!(solve(&[&a], &rhs).status, SolveStatus::Inconsistent);
    }

    #[test]
    fn zero_lhs_and_zero_basis() {
        let a = v(&["0", "0"]);
        let rhs = v(&["0", "0"]);
        let sol = solve(&[&a], &rhs);
        assert_eq!(sol.status, SolveStatus::DegenerateLhs);
        assert_eq!(sol.null_basis.len(), 1);
        let rhs = v(&["1", "0"]);
        assert_eq!(solve(&[&a], &rhs).status, SolveStatus::Inconsistent);
    }
}
