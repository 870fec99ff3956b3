use std::sync::Arc;

use super::chart::Chart;
use super::covariant::{CovariantTensor, Symmetry};
use crate::error::{Error, Result};
use crate::symbolic::RationalFunction;

/// A nondegenerate metric with its exact inverse and determinant.
#[derive(Clone, Debug)]
pub struct MetricData {
    g: CovariantTensor,
    inv: Vec<RationalFunction>,
    det: RationalFunction,
}

impl MetricData {
    pub fn new(g: CovariantTensor) -> Result<Self> {
        if g.rank() != 2 {
            return Err(Error::Symmetry {
                expected: "symmetric-2",
                detail: format!("metric has rank {}", g.rank()),
            });
        }
        let g = g.with_symmetry(Symmetry::Symmetric2);
        g.check_symmetry()?;
        let (inv, det) = invert(g.dim(), g.components())?;
        Ok(MetricData { g, inv, det })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.g.chart()
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn g(&self) -> &CovariantTensor {
        &self.g
    }

    #[inline]
    pub fn inv(&self, i: usize, j: usize) -> &RationalFunction {
        &self.inv[i * self.dim() + j]
    }

    pub fn det(&self) -> &RationalFunction {
        &self.det
    }

    /// Inverse metric packed as a symmetric (2,0) component array.
    pub fn inverse_tensor(&self) -> CovariantTensor {
        CovariantTensor::from_components(self.chart().clone(), 2, Symmetry::Symmetric2, self.inv.clone())
            .expect("n^2 components")
    }

    /// Contravariant components `V^i = g^{ij} w_j` of a one-form.
    pub fn raise(&self, w: &CovariantTensor) -> Vec<RationalFunction> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.inv(i, j) * w.get(&[j])).sum())
            .collect()
    }

    /// Flat metric `diag(1, ..., 1)`.
    pub fn identity(chart: Arc<Chart>) -> Self {
        let g = CovariantTensor::from_fn(chart, 2, Symmetry::Symmetric2, |idx| {
            if idx[0] == idx[1] {
                RationalFunction::one()
            } else {
                RationalFunction::zero()
            }
        });
        MetricData::new(g).expect("identity is nondegenerate")
    }
}

/// Gauss-Jordan inverse over the rational function field, first-nonzero pivoting.
fn invert(n: usize, a: &[RationalFunction]) -> Result<(Vec<RationalFunction>, RationalFunction)> {
    let mut m: Vec<Vec<RationalFunction>> = (0..n).map(|i| a[i * n..(i + 1) * n].to_vec()).collect();
    let mut inv: Vec<Vec<RationalFunction>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        RationalFunction::one()
                    } else {
                        RationalFunction::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut det = RationalFunction::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Err(Error::DegenerateMetric("determinant is identically zero".into()));
        };
        if piv != col {
            m.swap(piv, col);
            inv.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det = &det * &p;
        let pinv = p.recip()?;
        for j in 0..n {
            m[col][j] = &m[col][j] * &pinv;
            inv[col][j] = &inv[col][j] * &pinv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in 0..n {
                if !m[col][j].is_zero() {
                    m[r][j] = &m[r][j] - &(&f * &m[col][j]);
                }
                if !inv[col][j].is_zero() {
                    inv[r][j] = &inv[r][j] - &(&f * &inv[col][j]);
                }
            }
        }
    }
    Ok((inv.into_iter().flatten().collect(), det))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart4() -> Arc<Chart> {
        Arc::new(Chart::standard(4).unwrap())
    }

    fn diag(chart: Arc<Chart>, entries: &[&str]) -> CovariantTensor {
        let parsed: Vec<_> = entries.iter().map(|e| chart.parse(e).unwrap()).collect();
        CovariantTensor::from_fn(chart, 2, Symmetry::Symmetric2, |idx| {
            if idx[0] == idx[1] {
                parsed[idx[0]].clone()
            } else {
                RationalFunction::zero()
            }
        })
    }

    #[test]
    fn diagonal_inverse_and_determinant() {
        let c = chart4();
        let m = MetricData::new(diag(c.clone(), &["x2", "x1", "x4", "x3"])).unwrap();
        assert_eq!(m.inv(0, 0), &c.parse("1/x2").unwrap());
        assert_eq!(m.inv(1, 1), &c.parse("1/x1").unwrap());
        assert_eq!(m.inv(2, 2), &c.parse("1/x4").unwrap());
        assert_eq!(m.inv(3, 3), &c.parse("1/x3").unwrap());
        assert!(m.inv(0, 1).is_zero());
        assert_eq!(m.det(), &c.parse("x1*x2*x3*x4").unwrap());
    }

    #[test]
    fn identity_inverse() {
        let m = MetricData::identity(chart4());
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m.inv(i, j).is_one(), i == j);
            }
        }
    }

    #[test]
    fn degenerate_rejected() {
        let g = diag(chart4(), &["x1", "x1", "x1", "0"]);
        assert!(matches!(MetricData::new(g), Err(Error::DegenerateMetric(_))));
    }

    #[test]
    fn nondiagonal_inverse_is_exact() {
        let c = Arc::new(Chart::standard(3).unwrap());
        let e = [["1 + x1^2", "x2", "0"], ["x2", "2", "x3"], ["0", "x3", "3 + x1"]];
        let g = CovariantTensor::from_fn(c.clone(), 2, Symmetry::Symmetric2, |idx| {
            c.parse(e[idx[0]][idx[1]]).unwrap()
        });
        let m = MetricData::new(g.clone()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let s: RationalFunction = (0..3).map(|k| g.get(&[i, k]) * m.inv(k, j)).sum();
                assert_eq!(s.is_one(), i == j);
                assert!(i == j || s.is_zero());
            }
        }
    }
}
