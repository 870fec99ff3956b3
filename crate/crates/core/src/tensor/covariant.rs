use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;

use super::chart::Chart;
use crate::error::{Error, Result};
use crate::symbolic::RationalFunction;

/// Declared symmetry class of a covariant tensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Symmetry {
    General,
    Symmetric2,
    OneForm,
    TwoForm,
    CurvatureType4,
}

/// A (0,k) tensor field stored densely over all `n^k` index tuples.
///
/// Index tuples are 0-based and laid out lexicographically with the first
/// slot most significant.
#[derive(Clone, Debug)]
pub struct CovariantTensor {
    chart: Arc<Chart>,
    rank: usize,
    comps: Vec<RationalFunction>,
    symmetry: Symmetry,
}

/// Iterates all index tuples of the given rank over `0..n` in lexicographic order.
pub fn index_tuples(n: usize, rank: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(rank as u32);
    (0..total).map(move |flat| unflatten(flat, n, rank))
}

pub(crate) fn unflatten(mut flat: usize, n: usize, rank: usize) -> Vec<usize> {
    let mut idx = vec![0; rank];
    for slot in (0..rank).rev() {
        idx[slot] = flat % n;
        flat /= n;
    }
    idx
}

/// Lexicographically smallest index related to `idx` by the tagged
/// symmetry, with the sign relating the two components; `None` when the
/// symmetry forces the component to vanish.
pub(crate) fn canonical_index(symmetry: Symmetry, idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut c = idx.to_vec();
    let mut negate = false;
    let mut skew = |c: &mut [usize], i: usize, j: usize| {
        if c[i] == c[j] {
            return false;
        }
        if c[i] > c[j] {
            c.swap(i, j);
            negate = !negate;
        }
        true
    };
    match symmetry {
        Symmetry::Symmetric2 if c.len() == 2 => {
            if c[0] > c[1] {
                c.swap(0, 1);
            }
        }
        Symmetry::TwoForm if c.len() == 2 => {
            if !skew(&mut c, 0, 1) {
                return None;
            }
        }
        Symmetry::CurvatureType4 if c.len() == 4 => {
            if !skew(&mut c, 0, 1) || !skew(&mut c, 2, 3) {
                return None;
            }
            if (c[0], c[1]) > (c[2], c[3]) {
                c.swap(0, 2);
                c.swap(1, 3);
            }
        }
        _ => {}
    }
    Some((c, negate))
}

/// Equality compares components only; the symmetry tag is metadata.
impl PartialEq for CovariantTensor {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.chart == other.chart && self.comps == other.comps
    }
}

impl CovariantTensor {
    pub fn zeros(chart: Arc<Chart>, rank: usize, symmetry: Symmetry) -> Self {
        let len = chart.dim().pow(rank as u32);
        CovariantTensor {
            chart,
            rank,
            comps: vec![RationalFunction::zero(); len],
            symmetry,
        }
    }

    pub fn from_fn<F>(chart: Arc<Chart>, rank: usize, symmetry: Symmetry, mut f: F) -> Self
    where
        F: FnMut(&[usize]) -> RationalFunction,
    {
        let n = chart.dim();
        let comps = index_tuples(n, rank).map(|idx| f(&idx)).collect();
        CovariantTensor {
            chart,
            rank,
            comps,
            symmetry,
        }
    }

    pub fn from_components(
        chart: Arc<Chart>,
        rank: usize,
        symmetry: Symmetry,
        comps: Vec<RationalFunction>,
    ) -> Result<Self> {
        if comps.len() != chart.dim().pow(rank as u32) {
            return Err(Error::InvalidIndex(format!(
                "expected {} components, got {}",
                chart.dim().pow(rank as u32),
                comps.len()
            )));
        }
        Ok(CovariantTensor {
            chart,
            rank,
            comps,
            symmetry,
        })
    }

    /// One-form from its covariant components.
    pub fn one_form(chart: Arc<Chart>, comps: Vec<RationalFunction>) -> Result<Self> {
        Self::from_components(chart, 1, Symmetry::OneForm, comps)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Self {
        self.symmetry = symmetry;
        self
    }

    pub fn components(&self) -> &[RationalFunction] {
        &self.comps
    }

    #[inline]
    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        let n = self.dim();
        idx.iter().fold(0, |acc, &i| acc * n + i)
    }

    #[inline]
    pub fn get(&self, idx: &[usize]) -> &RationalFunction {
        &self.comps[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: RationalFunction) {
        let o = self.offset(idx);
        self.comps[o] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(RationalFunction::is_zero)
    }

    /// Iterates `(index tuple, component)` over nonzero components.
    pub fn nonzero(&self) -> impl Iterator<Item = (Vec<usize>, &RationalFunction)> {
        let (n, rank) = (self.dim(), self.rank);
        self.comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(flat, c)| (unflatten(flat, n, rank), c))
    }

    pub fn same_shape(&self, other: &Self) -> Result<()> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch);
        }
        if self.rank != other.rank {
            return Err(Error::InvalidIndex(format!(
                "rank mismatch: {} vs {}",
                self.rank, other.rank
            )));
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&RationalFunction, &RationalFunction) -> RationalFunction,
    ) -> Result<Self> {
        self.same_shape(other)?;
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| f(a, b)).collect();
        let symmetry = if self.symmetry == other.symmetry {
            self.symmetry
        } else {
            Symmetry::General
        };
        Ok(CovariantTensor {
            chart: self.chart.clone(),
            rank: self.rank,
            comps,
            symmetry,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &RationalFunction) -> Self {
        CovariantTensor {
            chart: self.chart.clone(),
            rank: self.rank,
            comps: self.comps.iter().map(|c| c * s).collect(),
            symmetry: self.symmetry,
        }
    }

    pub fn neg(&self) -> Self {
        CovariantTensor {
            chart: self.chart.clone(),
            rank: self.rank,
            comps: self.comps.iter().map(|c| -c).collect(),
            symmetry: self.symmetry,
        }
    }

    /// Tensor product with `self`'s slots first: `(T ⊗ U)_{a..b..} = T_{a..} U_{b..}`.
    pub fn outer(&self, other: &Self) -> Result<Self> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch);
        }
        let mut comps = Vec::with_capacity(self.comps.len() * other.comps.len());
        for a in &self.comps {
            for b in &other.comps {
                comps.push(a * b);
            }
        }
        Ok(CovariantTensor {
            chart: self.chart.clone(),
            rank: self.rank + other.rank,
            comps,
            symmetry: Symmetry::General,
        })
    }

    /// Reorders slots: result slot `s` is input slot `perm[s]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.rank];
        if perm.len() != self.rank
            || perm
                .iter()
                .any(|&p| p >= self.rank || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidIndex(format!("bad permutation {perm:?}")));
        }
        let mut src = vec![0; self.rank];
        Ok(CovariantTensor::from_fn(
            self.chart.clone(),
            self.rank,
            Symmetry::General,
            |idx| {
                for (s, &p) in perm.iter().enumerate() {
                    src[p] = idx[s];
                }
                self.get(&src).clone()
            },
        ))
    }

    /// Slice with the last slot fixed to `direction`.
    pub fn direction_slice(&self, direction: usize) -> Result<Self> {
        if self.rank == 0 || direction >= self.dim() {
            return Err(Error::InvalidIndex(format!("direction {direction}")));
        }
        let n = self.dim();
        let comps = self.comps.iter().skip(direction).step_by(n).cloned().collect();
        Ok(CovariantTensor {
            chart: self.chart.clone(),
            rank: self.rank - 1,
            comps,
            symmetry: Symmetry::General,
        })
    }

    /// Exact component values at a point.
    pub fn eval(&self, point: &[BigRational]) -> Result<Vec<BigRational>> {
        self.comps.iter().map(|c| c.eval(point)).collect()
    }

    /// Checks the declared symmetry class componentwise.
    pub fn check_symmetry(&self) -> Result<()> {
        let fail = |expected: &'static str, idx: &[usize]| {
            Err(Error::Symmetry {
                expected,
                detail: format!("violated at index {:?}", one_based(idx)),
            })
        };
        match self.symmetry {
            Symmetry::General => Ok(()),
            Symmetry::OneForm => {
                if self.rank != 1 {
                    return Err(Error::Symmetry {
                        expected: "one-form",
                        detail: format!("rank {}", self.rank),
                    });
                }
                Ok(())
            }
            Symmetry::Symmetric2 | Symmetry::TwoForm => {
                let (name, sign) = if self.symmetry == Symmetry::Symmetric2 {
                    ("symmetric-2", false)
                } else {
                    ("two-form", true)
                };
                if self.rank != 2 {
                    return Err(Error::Symmetry {
                        expected: name,
                        detail: format!("rank {}", self.rank),
                    });
                }
                let n = self.dim();
                for i in 0..n {
                    for j in i..n {
                        let a = self.get(&[i, j]);
                        let b = self.get(&[j, i]);
                        let ok = if sign { (a + b).is_zero() } else { a == b };
                        if !ok {
                            return fail(name, &[i, j]);
                        }
                    }
                }
                Ok(())
            }
            Symmetry::CurvatureType4 => {
                if self.rank != 4 {
                    return Err(Error::Symmetry {
                        expected: "curvature-type-4",
                        detail: format!("rank {}", self.rank),
                    });
                }
                for idx in index_tuples(self.dim(), 4) {
                    let (h, i, j, k) = (idx[0], idx[1], idx[2], idx[3]);
                    let t = self.get(&idx);
                    let ok = (t + self.get(&[i, h, j, k])).is_zero()
                        && (t + self.get(&[h, i, k, j])).is_zero()
                        && t == self.get(&[j, k, h, i]);
                    if !ok {
                        return fail("curvature-type-4", &idx);
                    }
                }
                Ok(())
            }
        }
    }

    /// Component table `(1-based index string, canonical text)` of nonzero entries.
    pub fn component_table(&self) -> Vec<(String, String)> {
        self.nonzero()
            .map(|(idx, c)| (index_label(&idx), self.chart.format(c)))
            .collect()
    }
}

pub fn one_based(idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|i| i + 1).collect()
}

/// `[0, 1, 0, 1]` becomes `"1212"` (comma separated when n > 9).
pub fn index_label(idx: &[usize]) -> String {
    if idx.iter().all(|&i| i < 9) {
        idx.iter().map(|i| (i + 1).to_string()).collect()
    } else {
        idx.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> Arc<Chart> {
        Arc::new(Chart::standard(3).unwrap())
    }

    #[test]
    fn layout_and_slices() {
        let t = CovariantTensor::from_fn(chart(), 2, Symmetry::General, |idx| {
            RationalFunction::from_integer((10 * idx[0] + idx[1]) as i64)
        });
        assert_eq!(t.get(&[2, 1]), &RationalFunction::from_integer(21));
        let s = t.direction_slice(1).unwrap();
        assert_eq!(s.components()[2], RationalFunction::from_integer(21));
        let p = t.permute(&[1, 0]).unwrap();
        assert_eq!(p.get(&[1, 2]), &RationalFunction::from_integer(21));
    }

    #[test]
    fn symmetry_checks() {
        let c = chart();
        let sym = CovariantTensor::from_fn(c.clone(), 2, Symmetry::Symmetric2, |idx| {
            RationalFunction::var(idx[0]) + RationalFunction::var(idx[1])
        });
        assert!(sym.check_symmetry().is_ok());
        let bad = CovariantTensor::from_fn(c, 2, Symmetry::Symmetric2, |idx| RationalFunction::var(idx[0]));
        assert!(bad.check_symmetry().is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(index_label(&[0, 1, 0, 1]), "1212");
    }
}
