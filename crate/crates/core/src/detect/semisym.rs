use crate::curvature::CurvatureBundle;
use crate::error::Result;
use crate::linsolve::{self, SolveStatus};
use crate::symbolic::RationalFunction;
use crate::tensor::ops;
use crate::tensor::CovariantTensor;

use super::Verdict;

/// `R·T` together with the pseudosymmetry test `R·T = L Q(g, T)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemisymmetryOutcome {
    pub r_dot_t: CovariantTensor,
    pub semisymmetric: bool,
    /// Degenerate when `Q(g, T)` vanishes identically.
    pub pseudosymmetric: Verdict,
    pub l: Option<RationalFunction>,
}

pub fn check_semisymmetry(t: &CovariantTensor, b: &CurvatureBundle) -> Result<SemisymmetryOutcome> {
    let r_dot_t = ops::curvature_action(&b.riemann, t, &b.metric)?;
    let q = ops::q_action(b.g(), t)?;
    let semisymmetric = r_dot_t.is_zero();
    let (pseudosymmetric, l) = if q.is_zero() {
        (Verdict::Degenerate, None)
    } else {
        let sol = linsolve::solve(&[q.components()], r_dot_t.components());
        match sol.status {
            SolveStatus::Inconsistent => (Verdict::Fails, None),
            _ => (Verdict::Holds, Some(sol.particular[0].clone())),
        }
    };
    Ok(SemisymmetryOutcome {
        r_dot_t,
        semisymmetric,
        pseudosymmetric,
        l,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::tensor::{Chart, MetricData, Symmetry};

    fn bundle(entries: &[&str]) -> CurvatureBundle {
        let c = Arc::new(Chart::standard(entries.len()).unwrap());
        let d: Vec<_> = entries.iter().map(|e| c.parse(e).unwrap()).collect();
        let g = CovariantTensor::from_fn(c, 2, Symmetry::Symmetric2, |idx| {
            if idx[0] == idx[1] {
                d[idx[0]].clone()
            } else {
                RationalFunction::zero()
            }
        });
        CurvatureBundle::new(MetricData::new(g).unwrap()).unwrap()
    }

    #[test]
    fn product_example_is_semisymmetric() {
        let b = bundle(&["x2", "x1", "x4", "x3"]);
        let out = check_semisymmetry(&b.riemann, &b).unwrap();
        assert!(out.semisymmetric);
        assert_eq!(out.pseudosymmetric, Verdict::Holds);
        assert!(out.l.unwrap().is_zero());
    }

    #[test]
    fn flat_has_empty_pseudosymmetry_set() {
        let b = bundle(&["1", "1", "1"]);
        let out = check_semisymmetry(&b.riemann, &b).unwrap();
        assert!(out.semisymmetric);
        assert_eq!(out.pseudosymmetric, Verdict::Degenerate);
    }

    #[test]
    fn metric_tensor_is_always_semisymmetric() {
        let b = bundle(&["1 + x2^2", "2 + x1", "1 + x1*x2"]);
        assert!(check_semisymmetry(b.g(), &b).unwrap().semisymmetric);
    }
}
