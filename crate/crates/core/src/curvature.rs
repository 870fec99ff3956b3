//! Levi-Civita connection, curvature tensors and covariant derivatives.
//!
//! Conventions: `R(∂a,∂b)∂c = Rm^d_{abc} ∂d` with
//! `Rm^d_{abc} = ∂aΓ^d_{bc} − ∂bΓ^d_{ac} + Γ^e_{bc}Γ^d_{ae} − Γ^e_{ac}Γ^d_{be}`,
//! `R_{abcd} = g(R(∂a,∂b)∂d, ∂c) = −Rm^e_{abc} g_{ed}` and `S_{bc} = g^{ad} R_{abcd}`,
//! With this choice the unit round sphere has `R_{1212} = g_11 g_22 > 0` and `S = −(n−1)g`.
//! Covariant derivatives append the derivative index as the last slot.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::symbolic::RationalFunction;
use crate::tensor::ops::{self, SecondLevelData};
use crate::tensor::{CovariantTensor, MetricData, Symmetry};

/// Christoffel symbols of the second kind, `Γ^h_{ij}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel {
    n: usize,
    data: Vec<RationalFunction>,
}

impl Christoffel {
    #[inline]
    pub fn get(&self, h: usize, i: usize, j: usize) -> &RationalFunction {
        &self.data[(h * self.n + i) * self.n + j]
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[RationalFunction] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RationalFunction::is_zero)
    }
}

pub fn christoffel(m: &MetricData) -> Christoffel {
    let n = m.dim();
    let g = m.g();
    // dg[(k * n + i) * n + j] = ∂_k g_ij
    let dg: Vec<RationalFunction> = (0..n * n * n)
        .map(|f| g.get(&[(f / n) % n, f % n]).derivative(f / (n * n)))
        .collect();
    let d = |k: usize, i: usize, j: usize| &dg[(k * n + i) * n + j];
    // first kind: Γ_{kij} = ½(∂_i g_jk + ∂_j g_ik − ∂_k g_ij)
    let half = RationalFunction::from_ratio(1, 2);
    let mut first = vec![RationalFunction::zero(); n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let v = &(&(d(i, j, k) + d(j, i, k)) - d(k, i, j)) * &half;
                first[(k * n + i) * n + j] = v.clone();
                first[(k * n + j) * n + i] = v;
            }
        }
    }
    let mut data = vec![RationalFunction::zero(); n * n * n];
    for h in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut acc = RationalFunction::zero();
                for k in 0..n {
                    let gi = m.inv(h, k);
                    let f = &first[(k * n + i) * n + j];
                    if !gi.is_zero() && !f.is_zero() {
                        acc = &acc + &(gi * f);
                    }
                }
                data[(h * n + j) * n + i] = acc.clone();
                data[(h * n + i) * n + j] = acc;
            }
        }
    }
    Christoffel { n, data }
}

/// Fully covariant Riemann tensor `R_{abcd}`. `flip_sign` negates the result and exists
/// only as a negative control for golden-value checks.
pub fn riemann(m: &MetricData, gamma: &Christoffel, flip_sign: bool) -> CovariantTensor {
    let n = m.dim();
    let gm = |d: usize, b: usize, c: usize| gamma.get(d, b, c);
    // mixed[(a, b, c, d)] = Rm^d_{abc} for a < b
    let mut mixed = vec![RationalFunction::zero(); n * n * n * n];
    let at = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
    for a in 0..n {
        for b in (a + 1)..n {
            for c in 0..n {
                for d in 0..n {
                    let mut acc = &gm(d, b, c).derivative(a) - &gm(d, a, c).derivative(b);
                    for e in 0..n {
                        let (p, q) = (gm(e, b, c), gm(d, a, e));
                        if !p.is_zero() && !q.is_zero() {
                            acc = &acc + &(p * q);
                        }
                        let (p, q) = (gm(e, a, c), gm(d, b, e));
                        if !p.is_zero() && !q.is_zero() {
                            acc = &acc - &(p * q);
                        }
                    }
                    mixed[at(a, b, c, d)] = acc;
                }
            }
        }
    }
    let g = m.g();
    let mut lowered = vec![RationalFunction::zero(); n * n * n * n];
    for a in 0..n {
        for b in (a + 1)..n {
            for c in 0..n {
                for d in 0..n {
                    let mut acc = RationalFunction::zero();
                    for e in 0..n {
                        let r = &mixed[at(a, b, c, e)];
                        let ge = g.get(&[e, d]);
                        if !r.is_zero() && !ge.is_zero() {
                            acc = &acc + &(r * ge);
                        }
                    }
                    if !flip_sign {
                        acc = -acc;
                    }
                    lowered[at(b, a, c, d)] = -&acc;
                    lowered[at(a, b, c, d)] = acc;
                }
            }
        }
    }
    CovariantTensor::from_components(m.chart().clone(), 4, Symmetry::CurvatureType4, lowered).expect("n^4 components")
}

/// `S_{bc} = g^{ad} R_{abcd}`.
pub fn ricci(r: &CovariantTensor, m: &MetricData) -> Result<CovariantTensor> {
    Ok(ops::contract(r, 0, 3, m)?.with_symmetry(Symmetry::Symmetric2))
}

/// `(∇T)_{i1..ik,l} = ∂_l T_{i1..ik} − Σ_m Γ^p_{l i_m} T_{..p..}`.
pub fn covariant_derivative(t: &CovariantTensor, gamma: &Christoffel) -> CovariantTensor {
    let n = t.dim();
    let k = t.rank();
    // terms[l * n + i] = nonzero (p, Γ^p_{li})
    let terms: Vec<Vec<(usize, &RationalFunction)>> = (0..n * n)
        .map(|li| {
            (0..n)
                .map(|p| (p, gamma.get(p, li / n, li % n)))
                .filter(|(_, v)| !v.is_zero())
                .collect()
        })
        .collect();
    let partials: Vec<Vec<RationalFunction>> = t
        .components()
        .iter()
        .map(|c| {
            if c.is_zero() {
                Vec::new()
            } else {
                (0..n).map(|l| c.derivative(l)).collect()
            }
        })
        .collect();
    let mut buf = vec![0; k];
    CovariantTensor::from_fn(t.chart().clone(), k + 1, Symmetry::General, |idx| {
        let l = idx[k];
        let base = &idx[..k];
        let mut acc = partials[t.offset(base)]
            .get(l)
            .cloned()
            .unwrap_or_else(RationalFunction::zero);
        for slot in 0..k {
            buf.copy_from_slice(base);
            for &(p, gv) in &terms[l * n + base[slot]] {
                buf[slot] = p;
                let tv = t.get(&buf);
                if !tv.is_zero() {
                    acc = &acc - &(gv * tv);
                }
            }
        }
        acc
    })
}

/// Gradient one-form of a scalar function.
pub fn gradient(f: &RationalFunction, m: &MetricData) -> CovariantTensor {
    let n = m.dim();
    CovariantTensor::one_form(m.chart().clone(), (0..n).map(|i| f.derivative(i)).collect()).expect("n components")
}

/// The four curvature tensors assembled from `R`, `S`, `κ` and `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivedKind {
    Conformal,
    Projective,
    Concircular,
    Conharmonic,
}

impl DerivedKind {
    pub const ALL: [DerivedKind; 4] = [
        DerivedKind::Conformal,
        DerivedKind::Projective,
        DerivedKind::Concircular,
        DerivedKind::Conharmonic,
    ];

    pub fn letter(self) -> char {
        match self {
            DerivedKind::Conformal => 'C',
            DerivedKind::Projective => 'P',
            DerivedKind::Concircular => 'W',
            DerivedKind::Conharmonic => 'K',
        }
    }
}

impl fmt::Display for DerivedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for DerivedKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c" | "conformal" => Ok(DerivedKind::Conformal),
            "p" | "projective" => Ok(DerivedKind::Projective),
            "w" | "concircular" => Ok(DerivedKind::Concircular),
            "k" | "conharmonic" => Ok(DerivedKind::Conharmonic),
            _ => Err(Error::UnknownTensor(s.to_string())),
        }
    }
}

/// Everything derived from a metric that the detectors consume.
#[derive(Clone, Debug)]
pub struct CurvatureBundle {
    pub metric: MetricData,
    pub gamma: Christoffel,
    pub riemann: CovariantTensor,
    pub ricci: SecondLevelData,
    pub nabla_riemann: CovariantTensor,
    pub nabla_ricci: CovariantTensor,
    pub dkappa: CovariantTensor,
    pub g_wedge_g: CovariantTensor,
    pub g_wedge_s: CovariantTensor,
    pub s_wedge_s: CovariantTensor,
}

impl CurvatureBundle {
    pub fn new(metric: MetricData) -> Result<Self> {
        Self::with_sign(metric, false)
    }

    pub fn with_sign(metric: MetricData, flip_sign: bool) -> Result<Self> {
        let gamma = christoffel(&metric);
        let r = riemann(&metric, &gamma, flip_sign);
        let s = ricci(&r, &metric)?;
        let level = ops::second_level(&s, &metric)?;
        let nabla_riemann = covariant_derivative(&r, &gamma);
        let nabla_ricci = covariant_derivative(&s, &gamma);
        let dkappa = gradient(&level.trace, &metric);
        let g = metric.g();
        let g_wedge_g = ops::kulkarni_nomizu(g, g)?;
        let g_wedge_s = ops::kulkarni_nomizu(g, &s)?;
        let s_wedge_s = ops::kulkarni_nomizu(&s, &s)?;
        Ok(CurvatureBundle {
            metric,
            gamma,
            riemann: r,
            ricci: level,
            nabla_riemann,
            nabla_ricci,
            dkappa,
            g_wedge_g,
            g_wedge_s,
            s_wedge_s,
        })
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn g(&self) -> &CovariantTensor {
        self.metric.g()
    }

    pub fn s(&self) -> &CovariantTensor {
        &self.ricci.base
    }

    pub fn s2(&self) -> &CovariantTensor {
        &self.ricci.squared
    }

    pub fn kappa(&self) -> &RationalFunction {
        &self.ricci.trace
    }

    pub fn kappa2(&self) -> &RationalFunction {
        &self.ricci.second_trace
    }

    pub fn derived(&self, kind: DerivedKind) -> Result<CovariantTensor> {
        derived_tensor(kind, self)
    }
}

pub fn derived_tensor(kind: DerivedKind, b: &CurvatureBundle) -> Result<CovariantTensor> {
    let n = b.dim() as i64;
    if n < 3 {
        return Err(Error::InvalidArgument(format!("{kind} needs n ≥ 3")));
    }
    let r = &b.riemann;
    let kappa = b.kappa();
    let out = match kind {
        DerivedKind::Conformal => {
            let c1 = RationalFunction::from_ratio(1, n - 2);
            let c2 = kappa * &RationalFunction::from_ratio(1, 2 * (n - 1) * (n - 2));
            r.sub(&b.g_wedge_s.scale(&c1))?.add(&b.g_wedge_g.scale(&c2))?
        }
        DerivedKind::Projective => {
            // (∧_S)_{hijk} = S_ij g_hk − S_hj g_ik, i.e. X ∧_S Y with (X, Y) moved to the front
            let ws = ops::wedge_vector(b.s(), &b.metric)?.permute(&[2, 3, 0, 1])?;
            let c = RationalFunction::from_ratio(1, n - 1);
            r.sub(&ws.scale(&c))?.with_symmetry(Symmetry::General)
        }
        DerivedKind::Concircular => {
            let c = kappa * &RationalFunction::from_ratio(1, 2 * n * (n - 1));
            r.sub(&b.g_wedge_g.scale(&c))?
        }
        DerivedKind::Conharmonic => {
            let c = RationalFunction::from_ratio(1, n - 2);
            r.sub(&b.g_wedge_s.scale(&c))?
        }
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::tensor::{index_tuples, Chart};

    fn product() -> (Arc<Chart>, CurvatureBundle) {
        let c = Arc::new(Chart::standard(4).unwrap());
        let d = ["x2", "x1", "x4", "x3"].map(|e| c.parse(e).unwrap());
        let g = CovariantTensor::from_fn(c.clone(), 2, Symmetry::Symmetric2, |idx| {
            if idx[0] == idx[1] {
                d[idx[0]].clone()
            } else {
                RationalFunction::zero()
            }
        });
        (c, CurvatureBundle::new(MetricData::new(g).unwrap()).unwrap())
    }

    #[test]
    fn christoffel_spot_value() {
        let (c, b) = product();
        assert_eq!(b.gamma.get(0, 0, 1), &c.parse("1/(2*x2)").unwrap());
        assert_eq!(b.gamma.get(0, 1, 0), &c.parse("1/(2*x2)").unwrap());
    }

    #[test]
    fn sign_convention_matches_golden_values() {
        let (c, b) = product();
        let r1212 = c.parse("(1/4)*(1/x2 + 1/x1)").unwrap();
        let s11 = c.parse("-(x1/x2 + 1)/(4*x1^2)").unwrap();
        assert_eq!(b.riemann.get(&[0, 1, 0, 1]), &r1212);
        assert_eq!(b.s().get(&[0, 0]), &s11);

        let flipped = CurvatureBundle::with_sign(b.metric.clone(), true).unwrap();
        assert_eq!(flipped.riemann.get(&[0, 1, 0, 1]), &-&r1212);
        assert_ne!(flipped.s().get(&[0, 0]), &s11);
    }

    #[test]
    fn flat_metric_has_no_curvature() {
        let m = MetricData::identity(Arc::new(Chart::standard(4).unwrap()));
        let b = CurvatureBundle::new(m).unwrap();
        assert!(b.gamma.is_zero());
        assert!(b.riemann.is_zero());
        assert!(b.kappa().is_zero());
        for kind in DerivedKind::ALL {
            assert!(b.derived(kind).unwrap().is_zero());
        }
    }

    #[test]
    fn metric_is_parallel_and_bianchi_holds() {
        let (_, b) = product();
        assert!(covariant_derivative(b.g(), &b.gamma).is_zero());
        b.riemann.check_symmetry().unwrap();
        let r = &b.riemann;
        for idx in index_tuples(4, 4) {
            let (h, i, j, k) = (idx[0], idx[1], idx[2], idx[3]);
            let s = &(r.get(&[h, i, j, k]) + r.get(&[i, j, h, k])) + r.get(&[j, h, i, k]);
            assert!(s.is_zero());
        }
    }

    #[test]
    fn derived_tensor_traces() {
        let (_, b) = product();
        let cf = b.derived(DerivedKind::Conformal).unwrap();
        assert!(ops::contract(&cf, 0, 3, &b.metric).unwrap().is_zero());
        let p = b.derived(DerivedKind::Projective).unwrap();
        assert!(ops::contract(&p, 0, 3, &b.metric).unwrap().is_zero());
        assert_eq!(p.symmetry(), Symmetry::General);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("w".parse::<DerivedKind>().unwrap(), DerivedKind::Concircular);
        assert!("x".parse::<DerivedKind>().is_err());
    }
}

#[cfg(test)]
mod ricci_identity {
    use std::sync::Arc;

    use super::*;
    use crate::tensor::{index_tuples, Chart};

    #[test]
    fn curvature_action_is_minus_the_commutator() {
        let c = Arc::new(Chart::standard(3).unwrap());
        let e = [["1 + x2^2", "x3", "0"], ["x3", "2 + x1", "0"], ["0", "0", "1 + x1*x2"]];
        let g = CovariantTensor::from_fn(c.clone(), 2, Symmetry::Symmetric2, |idx| {
            c.parse(e[idx[0]][idx[1]]).unwrap()
        });
        let b = CurvatureBundle::new(MetricData::new(g).unwrap()).unwrap();
        let dds = covariant_derivative(&b.nabla_ricci, &b.gamma);
        let rs = ops::curvature_action(&b.riemann, b.s(), &b.metric).unwrap();
        assert!(!rs.is_zero());
        for idx in index_tuples(3, 4) {
            let (i, j, x, y) = (idx[0], idx[1], idx[2], idx[3]);
            // ∇²S(x, y) is stored at [i, j, y, x]
            let commutator = dds.get(&[i, j, y, x]) - dds.get(&[i, j, x, y]);
            assert!((&commutator + rs.get(&idx)).is_zero());
        }
    }
}
