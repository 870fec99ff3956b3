//! Floating-point finite-difference oracle for Christoffel symbols, the
//! curvature tensor and the Ricci tensor.
//!
//! Derivatives use the fourth-order five-point central stencil. Metric values
//! and their first difference quotients are formed in double-double
//! arithmetic; everything downstream runs in `f64`.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use twofloat::TwoFloat;

use crate::curvature::CurvatureBundle;
use crate::error::{Error, Result};
use crate::symbolic::Polynomial;
use crate::tensor::{index_label, index_tuples, CovariantTensor};

pub const DEFAULT_STEP: f64 = 1e-4;
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// Offsets, in steps, of the five-point central stencil without its center.
const STENCIL: [f64; 4] = [-2.0, -1.0, 1.0, 2.0];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericSummary {
    pub points: usize,
    pub step: f64,
    pub tolerance: f64,
    pub max_relative_error: f64,
    /// Object, component and point of the largest deviation.
    pub worst: Option<String>,
    pub passed: bool,
}

/// Double-double value of an exact integer.
fn dd_int(c: &BigInt) -> TwoFloat {
    let hi = c.to_f64().unwrap_or(f64::NAN);
    let rest = BigInt::from_f64(hi).map(|h| c - h);
    let lo = rest.and_then(|r| r.to_f64()).unwrap_or(0.0);
    TwoFloat::new_add(hi, lo)
}

fn dd_rational(q: &BigRational) -> TwoFloat {
    dd_int(q.numer()) / dd_int(q.denom())
}

fn dd_poly(p: &Polynomial, x: &[TwoFloat]) -> TwoFloat {
    let mut acc = TwoFloat::from(0.0);
    for (m, c) in p.terms() {
        let mut t = dd_int(c);
        for (v, xv) in x.iter().enumerate() {
            for _ in 0..m.exp(v) {
                t *= *xv;
            }
        }
        acc += t;
    }
    acc
}

/// Metric components evaluated in double-double precision so that the
/// difference quotients lose little to cancellation.
struct Metric {
    num: Vec<Polynomial>,
    den: Vec<Polynomial>,
    n: usize,
}

impl Metric {
    fn new(g: &CovariantTensor) -> Self {
        let comps = g.components();
        Metric {
            num: comps.iter().map(|c| c.numer().clone()).collect(),
            den: comps.iter().map(|c| c.denom().clone()).collect(),
            n: g.dim(),
        }
    }

    fn at_dd(&self, x: &[TwoFloat]) -> Vec<TwoFloat> {
        self.num
            .iter()
            .zip(&self.den)
            .map(|(p, q)| dd_poly(p, x) / dd_poly(q, x))
            .collect()
    }

    fn at(&self, x: &[TwoFloat]) -> DMatrix<f64> {
        let v = self.at_dd(x);
        DMatrix::from_fn(self.n, self.n, |i, j| f64::from(v[i * self.n + j]))
    }

    fn shifted(&self, x: &[TwoFloat], k: usize, delta: f64) -> Vec<TwoFloat> {
        let mut y = x.to_vec();
        y[k] += delta;
        y
    }

    /// `∂_k g_ij` by fourth-order central differences.
    fn partials(&self, x: &[TwoFloat], h: f64) -> Vec<DMatrix<f64>> {
        (0..self.n)
            .map(|k| {
                let [m2, m1, p1, p2] = STENCIL.map(|o| self.at_dd(&self.shifted(x, k, o * h)));
                DMatrix::from_fn(self.n, self.n, |i, j| {
                    let idx = i * self.n + j;
                    let d = (m2[idx] - p2[idx]) + (p1[idx] - m1[idx]) * 8.0;
                    f64::from(d / (12.0 * h))
                })
            })
            .collect()
    }

    /// `Γ^a_bc` stored at `[a][b][c]`.
    fn christoffel(&self, x: &[TwoFloat], h: f64) -> Result<Vec<Vec<Vec<f64>>>> {
        let n = self.n;
        let inv = self
            .at(x)
            .try_inverse()
            .ok_or_else(|| Error::Pole(format!("{:?}", x.iter().map(|v| v.hi()).collect::<Vec<_>>())))?;
        let dg = self.partials(x, h);
        Ok((0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        (0..n)
                            .map(|c| {
                                0.5 * (0..n)
                                    .map(|l| inv[(a, l)] * (dg[b][(l, c)] + dg[c][(l, b)] - dg[l][(b, c)]))
                                    .sum::<f64>()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect())
    }
}

struct Tracker {
    tolerance: f64,
    max: f64,
    worst: Option<String>,
}

impl Tracker {
    fn compare(&mut self, what: &str, idx: &[usize], numeric: f64, exact: &BigRational, point: &str) {
        let e = exact.to_f64().unwrap_or(f64::NAN);
        let err = (numeric - e).abs() / e.abs().max(1.0);
        if !(err <= self.max) {
            self.max = err;
            self.worst = Some(format!("{what}[{}] at ({point})", index_label(idx)));
        }
    }
}

/// Compares the exact `Γ`, `R` and `S` of the bundle with the numeric pipeline
/// at every point. The relative error of a component is
/// `|numeric − exact| / max(|exact|, 1)`.
pub fn numeric_crosscheck(
    b: &CurvatureBundle,
    points: &[Vec<BigRational>],
    step: f64,
    tolerance: f64,
) -> Result<NumericSummary> {
    let n = b.dim();
    let metric = Metric::new(b.g());
    let mut tracker = Tracker {
        tolerance,
        max: 0.0,
        worst: None,
    };
    for point in points {
        if point.len() != n {
            return Err(Error::InvalidArgument(format!(
                "point has {} coordinates, expected {n}",
                point.len()
            )));
        }
        let label = point.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        let x: Vec<TwoFloat> = point.iter().map(dd_rational).collect();
        let exact_r = b.riemann.eval(point)?;
        let exact_s = b.s().eval(point)?;
        let g = metric.at(&x);
        let inv = g.clone().try_inverse().ok_or_else(|| Error::Pole(label.clone()))?;
        let gamma = metric.christoffel(&x, step)?;
        let dgamma: Vec<Vec<Vec<Vec<f64>>>> = (0..n)
            .map(|k| {
                let [m2, m1, p1, p2]: [Vec<Vec<Vec<f64>>>; 4] = [
                    metric.christoffel(&metric.shifted(&x, k, -2.0 * step), step)?,
                    metric.christoffel(&metric.shifted(&x, k, -step), step)?,
                    metric.christoffel(&metric.shifted(&x, k, step), step)?,
                    metric.christoffel(&metric.shifted(&x, k, 2.0 * step), step)?,
                ];
                Ok((0..n)
                    .map(|a| {
                        (0..n)
                            .map(|bb| {
                                (0..n)
                                    .map(|c| {
                                        let d = (m2[a][bb][c] - p2[a][bb][c]) + 8.0 * (p1[a][bb][c] - m1[a][bb][c]);
                                        d / (12.0 * step)
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect())
            })
            .collect::<Result<_>>()?;

        for a in 0..n {
            for bb in 0..n {
                for c in 0..n {
                    let exact = b.gamma.get(a, bb, c).eval(point)?;
                    tracker.compare("christoffel", &[a, bb, c], gamma[a][bb][c], &exact, &label);
                }
            }
        }

        // mixed[d][a][b][c] = ∂_a Γ^d_bc − ∂_b Γ^d_ac + Γ^e_bc Γ^d_ae − Γ^e_ac Γ^d_be
        let mixed = |d: usize, a: usize, bb: usize, c: usize| -> f64 {
            let mut v = dgamma[a][d][bb][c] - dgamma[bb][d][a][c];
            for e in 0..n {
                v += gamma[e][bb][c] * gamma[d][a][e] - gamma[e][a][c] * gamma[d][bb][e];
            }
            v
        };
        let mut r = vec![0.0; n.pow(4)];
        for (flat, idx) in index_tuples(n, 4).enumerate() {
            let (a, bb, c, d) = (idx[0], idx[1], idx[2], idx[3]);
            r[flat] = -(0..n).map(|e| mixed(e, a, bb, c) * g[(e, d)]).sum::<f64>();
        }
        for (flat, idx) in index_tuples(n, 4).enumerate() {
            tracker.compare("riemann", &idx, r[flat], &exact_r[flat], &label);
        }
        for (flat, idx) in index_tuples(n, 2).enumerate() {
            let (bb, c) = (idx[0], idx[1]);
            let mut s = 0.0;
            for a in 0..n {
                for d in 0..n {
                    s += inv[(a, d)] * r[((a * n + bb) * n + c) * n + d];
                }
            }
            tracker.compare("ricci", &idx, s, &exact_s[flat], &label);
        }
    }
    Ok(NumericSummary {
        points: points.len(),
        step,
        tolerance,
        max_relative_error: tracker.max,
        passed: tracker.max <= tracker.tolerance,
        worst: tracker.worst,
    })
}

/// Seeded rational points away from poles: every Christoffel symbol is
/// finite and `|det g| ≥ 10⁻²`.
///
/// Coordinates listed in `positive` are drawn from `(0, 9]`, the others from
/// `[-6, 6]`.
pub fn random_points(
    b: &CurvatureBundle,
    positive: &[usize],
    count: usize,
    seed: u64,
) -> Result<Vec<Vec<BigRational>>> {
    let n = b.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > 1000 * count.max(1) {
            return Err(Error::InvalidArgument(format!(
                "found only {} pole-free points out of {count}",
                out.len()
            )));
        }
        let point: Vec<BigRational> = (0..n)
            .map(|i| {
                let den: i64 = rng.gen_range(1..=5);
                let num: i64 = if positive.contains(&i) {
                    rng.gen_range(1..=9 * den)
                } else {
                    rng.gen_range(-6 * den..=6 * den)
                };
                BigRational::new(BigInt::from(num), BigInt::from(den))
            })
            .collect();
        let Ok(det) = b.metric.det().eval(&point) else { continue };
        if det.to_f64().map_or(true, |d| d.abs() < 1e-2) {
            continue;
        }
        let finite = index_tuples(n, 3).all(|i| b.gamma.get(i[0], i[1], i[2]).eval(&point).is_ok());
        if finite && b.riemann.eval(&point).is_ok() {
            out.push(point);
        }
    }
    Ok(out)
}
