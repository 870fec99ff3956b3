use crate::curvature::CurvatureBundle;
use crate::linsolve::{self, LinearSolution, SolveStatus};
use crate::symbolic::RationalFunction;
use crate::tensor::{CovariantTensor, Symmetry};

/// Monic quadratic `S² + a₂ S + a₃ g = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ein2 {
    /// Solution set of `(a₂, a₃)` with `a₁ = 1`.
    pub monic: LinearSolution,
    /// Whether some solution with `a₁ = 0` and `(a₂, a₃) ≠ 0` exists.
    pub linear_relation: bool,
}

impl Ein2 {
    pub fn holds(&self) -> bool {
        self.monic.is_consistent() || self.linear_relation
    }

    /// Proper means `a₁ ≠ 0` is attainable.
    pub fn proper(&self) -> bool {
        self.monic.is_consistent()
    }

    /// `(a₂, a₃)` of the particular monic solution.
    pub fn coefficients(&self) -> Option<(RationalFunction, RationalFunction)> {
        self.proper()
            .then(|| (self.monic.particular[0].clone(), self.monic.particular[1].clone()))
    }
}

/// `S = α g + β η⊗η` with `η` taken from a row of the rank-1 residual.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiEinstein {
    pub alpha: RationalFunction,
    pub beta: RationalFunction,
    pub eta: CovariantTensor,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EinsteinClass {
    pub einstein: bool,
    pub ein2: Ein2,
    /// `None` when the Ricci tensor is not quasi-Einstein. Einstein metrics
    /// are reported with `β = 0` and `η = 0`.
    pub quasi_einstein: Option<QuasiEinstein>,
}

pub fn detect_einstein_class(b: &CurvatureBundle) -> EinsteinClass {
    let n = b.dim();
    let g = b.g();
    let s = b.s();
    let kappa_n = b.kappa() * &RationalFunction::from_ratio(1, n as i64);
    let residual = s.sub(&g.scale(&kappa_n)).expect("same chart");
    let einstein = residual.is_zero();

    let minus_s2 = b.s2().neg();
    let monic = linsolve::solve(&[s.components(), g.components()], minus_s2.components());
    let zero = vec![RationalFunction::zero(); s.components().len()];
    let homogeneous = linsolve::solve(&[s.components(), g.components()], &zero);
    let ein2 = Ein2 {
        monic,
        linear_relation: !homogeneous.null_basis.is_empty(),
    };

    let quasi_einstein = if einstein {
        Some(QuasiEinstein {
            alpha: kappa_n,
            beta: RationalFunction::zero(),
            eta: CovariantTensor::zeros(g.chart().clone(), 1, Symmetry::General),
        })
    } else if n >= 3 {
        ein2.coefficients().and_then(|(a2, _)| {
            let alpha = &(b.kappa() + &a2) * &RationalFunction::from_ratio(1, n as i64 - 2);
            rank_one_split(s, g, alpha)
        })
    } else {
        None
    };

    EinsteinClass {
        einstein,
        ein2,
        quasi_einstein,
    }
}

/// Writes `S − αg` as `β η⊗η` when it has rank one.
fn rank_one_split(s: &CovariantTensor, g: &CovariantTensor, alpha: RationalFunction) -> Option<QuasiEinstein> {
    let n = s.dim();
    let m = s.sub(&g.scale(&alpha)).expect("same chart");
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let minor = &(m.get(&[i, j]) * m.get(&[k, l])) - &(m.get(&[i, l]) * m.get(&[k, j]));
                    if !minor.is_zero() {
                        return None;
                    }
                }
            }
        }
    }
    let i = (0..n).find(|&i| !m.get(&[i, i]).is_zero())?;
    let beta = m.get(&[i, i]).recip().ok()?;
    let eta = CovariantTensor::one_form(m.chart().clone(), (0..n).map(|j| m.get(&[i, j]).clone()).collect()).ok()?;
    Some(QuasiEinstein { alpha, beta, eta })
}

/// `R = N₁ g∧g + N₂ g∧S + N₃ S∧S`.
#[derive(Clone, Debug, PartialEq)]
pub struct RoterOutcome {
    pub solution: LinearSolution,
    /// `N₃` is uniquely determined and nonzero.
    pub proper: bool,
}

impl RoterOutcome {
    pub fn holds(&self) -> bool {
        self.solution.is_consistent()
    }

    pub fn coefficients(&self) -> Option<&[RationalFunction]> {
        self.holds().then_some(self.solution.particular.as_slice())
    }
}

pub fn detect_roter(b: &CurvatureBundle) -> RoterOutcome {
    let solution = linsolve::solve(
        &[
            b.g_wedge_g.components(),
            b.g_wedge_s.components(),
            b.s_wedge_s.components(),
        ],
        b.riemann.components(),
    );
    let proper = solution.is_consistent()
        && solution.status != SolveStatus::DegenerateLhs
        && !solution.particular[2].is_zero()
        && solution.null_basis.iter().all(|v| v[2].is_zero());
    RoterOutcome { solution, proper }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::tensor::{Chart, MetricData};

    fn diagonal(entries: &[&str]) -> CurvatureBundle {
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
    fn four_dimensional_product_example() {
        let b = diagonal(&["x2", "x1", "x4", "x3"]);
        let c = b.g().chart().clone();
        let out = detect_einstein_class(&b);
        assert!(!out.einstein);
        assert!(out.ein2.proper());
        let l1 = c.parse("-(x1 + x2)/(4*x1^2*x2^2)").unwrap();
        let l3 = c.parse("-(x3 + x4)/(4*x3^2*x4^2)").unwrap();
        let (a2, a3) = out.ein2.coefficients().unwrap();
        assert_eq!(a2, -&(&l1 + &l3));
        assert_eq!(a3, &l1 * &l3);
        assert!(out.quasi_einstein.is_none());

        let roter = detect_roter(&b);
        assert!(roter.holds());
        assert!(roter.proper);
    }

    #[test]
    fn flat_is_einstein() {
        let b = diagonal(&["1", "1", "1"]);
        let out = detect_einstein_class(&b);
        assert!(out.einstein);
        assert!(out.quasi_einstein.is_some());
        assert!(!detect_roter(&b).proper);
    }

    #[test]
    fn sphere_like_conformal_metric_is_non_proper_roter() {
        let f = "4/(1 + x1^2 + x2^2 + x3^2)^2";
        let b = diagonal(&[f, f, f]);
        let out = detect_einstein_class(&b);
        assert!(out.einstein);
        let roter = detect_roter(&b);
        assert!(roter.holds());
        assert!(!roter.proper);
        assert!(roter.solution.particular[1].is_zero());
        assert!(roter.solution.particular[2].is_zero());
    }

    #[test]
    fn warped_metric_is_quasi_einstein() {
        // dt² + t² (dx² + dy²) in three dimensions has a Ricci operator with a double eigenvalue
        let b = diagonal(&["1", "x1^2", "x1^2"]);
        let out = detect_einstein_class(&b);
        let q = out.quasi_einstein.expect("quasi-Einstein");
        let h = crate::tensor::ops::one_form_product(&q.eta, &q.eta).unwrap();
        let rebuilt = b.g().scale(&q.alpha).add(&h.scale(&q.beta)).unwrap();
        assert_eq!(&rebuilt, b.s());
    }
}
