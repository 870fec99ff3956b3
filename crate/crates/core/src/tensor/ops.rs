//! Algebraic operations on covariant tensors.
//!
//! Slot conventions follow the component formulas literally: products of a
//! symmetric (0,2) tensor with a (0,k) tensor put the two new slots first,
//! while the endomorphism actions `D·T`, `Q(A,T)` and `X ∧_T Y` append the
//! `(X, Y)` pair after the original `k` slots.

use super::covariant::{canonical_index, index_tuples, CovariantTensor, Symmetry};
use super::metric::MetricData;
use crate::error::{Error, Result};
use crate::symbolic::RationalFunction;

fn require_symmetric(a: &CovariantTensor, what: &str) -> Result<()> {
    if a.rank() != 2 {
        return Err(Error::Symmetry {
            expected: "symmetric-2",
            detail: format!("{what} has rank {}", a.rank()),
        });
    }
    let n = a.dim();
    for i in 0..n {
        for j in (i + 1)..n {
            if a.get(&[i, j]) != a.get(&[j, i]) {
                return Err(Error::Symmetry {
                    expected: "symmetric-2",
                    detail: format!("{what} differs at ({}, {})", i + 1, j + 1),
                });
            }
        }
    }
    Ok(())
}

fn require_rank(t: &CovariantTensor, rank: usize, what: &str) -> Result<()> {
    if t.rank() != rank {
        return Err(Error::InvalidIndex(format!(
            "{what} must have rank {rank}, got {}",
            t.rank()
        )));
    }
    Ok(())
}

fn same_chart(a: &CovariantTensor, b: &CovariantTensor) -> Result<()> {
    if a.chart() != b.chart() {
        Err(Error::ChartMismatch)
    } else {
        Ok(())
    }
}

/// `(A ∧ E)_{hijk} = A_hk E_ij + A_ij E_hk − A_hj E_ik − A_ik E_hj`.
pub fn kulkarni_nomizu(a: &CovariantTensor, e: &CovariantTensor) -> Result<CovariantTensor> {
    same_chart(a, e)?;
    require_symmetric(a, "first factor")?;
    require_symmetric(e, "second factor")?;
    Ok(wedge_with(a, e)?.with_symmetry(Symmetry::CurvatureType4))
}

/// Higher-order wedge `(A ∧ T)(X1, X2, Y1, ..., Yk)` of a symmetric (0,2) `A`
/// with a (0,k) tensor `T`, `k ≥ 2`.
pub fn wedge_with(a: &CovariantTensor, t: &CovariantTensor) -> Result<CovariantTensor> {
    same_chart(a, t)?;
    require_symmetric(a, "A")?;
    let k = t.rank();
    if k < 2 {
        return Err(Error::InvalidIndex(format!("A ∧ T needs rank(T) ≥ 2, got {k}")));
    }
    let mut buf = vec![0; k];
    let out = CovariantTensor::from_fn(a.chart().clone(), k + 2, Symmetry::General, |idx| {
        let (x1, x2, y1, y2) = (idx[0], idx[1], idx[2], idx[3]);
        buf[2..].copy_from_slice(&idx[4..]);
        let mut term = |ai: usize, aj: usize, t0: usize, t1: usize, acc: &mut RationalFunction, neg: bool| {
            let av = a.get(&[ai, aj]);
            if av.is_zero() {
                return;
            }
            buf[0] = t0;
            buf[1] = t1;
            let tv = t.get(&buf);
            if tv.is_zero() {
                return;
            }
            let p = av * tv;
            *acc = if neg { &*acc - &p } else { &*acc + &p };
        };
        let mut acc = RationalFunction::zero();
        term(x1, y2, x2, y1, &mut acc, false);
        term(x2, y1, x1, y2, &mut acc, false);
        term(x1, y1, x2, y2, &mut acc, true);
        term(x2, y2, x1, y1, &mut acc, true);
        acc
    });
    let symmetric_t = k == 2 && require_symmetric(t, "T").is_ok();
    Ok(if symmetric_t {
        out.with_symmetry(Symmetry::CurvatureType4)
    } else {
        out
    })
}

/// `Π ∧ Φ = ½(Π ⊗ Φ − Φ ⊗ Π)`.
pub fn exterior_product(p: &CovariantTensor, f: &CovariantTensor) -> Result<CovariantTensor> {
    same_chart(p, f)?;
    require_rank(p, 1, "first factor")?;
    require_rank(f, 1, "second factor")?;
    let half = RationalFunction::from_ratio(1, 2);
    Ok(CovariantTensor::from_fn(
        p.chart().clone(),
        2,
        Symmetry::TwoForm,
        |idx| {
            let (i, j) = (idx[0], idx[1]);
            &half * &(&(p.get(&[i]) * f.get(&[j])) - &(p.get(&[j]) * f.get(&[i])))
        },
    ))
}

/// `(dΠ)_{ij} = ∂_i Π_j − ∂_j Π_i`.
pub fn exterior_derivative(p: &CovariantTensor) -> Result<CovariantTensor> {
    require_rank(p, 1, "one-form")?;
    let n = p.dim();
    let partials: Vec<Vec<RationalFunction>> = (0..n)
        .map(|i| (0..n).map(|j| p.get(&[j]).derivative(i)).collect())
        .collect();
    Ok(CovariantTensor::from_fn(
        p.chart().clone(),
        2,
        Symmetry::TwoForm,
        |idx| {
            let (i, j) = (idx[0], idx[1]);
            &partials[i][j] - &partials[j][i]
        },
    ))
}

/// A symmetric (0,2) tensor with its second level and both traces.
#[derive(Clone, Debug)]
pub struct SecondLevelData {
    pub base: CovariantTensor,
    pub squared: CovariantTensor,
    pub trace: RationalFunction,
    pub second_trace: RationalFunction,
}

/// `A²_{ij} = A_ik g^{kl} A_lj`, `κ_A = g^{ij} A_ij`, `κ_A⁽²⁾ = g^{ij} A²_ij`.
pub fn second_level(a: &CovariantTensor, m: &MetricData) -> Result<SecondLevelData> {
    same_chart(a, m.g())?;
    require_symmetric(a, "A")?;
    let n = a.dim();
    // mixed components A^l_j = g^{lk} A_kj
    let mixed: Vec<RationalFunction> = index_tuples(n, 2)
        .map(|idx| (0..n).map(|k| m.inv(idx[0], k) * a.get(&[k, idx[1]])).sum())
        .collect();
    let squared = CovariantTensor::from_fn(a.chart().clone(), 2, Symmetry::Symmetric2, |idx| {
        (0..n).map(|l| a.get(&[idx[0], l]) * &mixed[l * n + idx[1]]).sum()
    });
    let trace = (0..n).map(|l| mixed[l * n + l].clone()).sum();
    let second_trace = trace_with(&squared, m);
    Ok(SecondLevelData {
        base: a.clone(),
        squared,
        trace,
        second_trace,
    })
}

/// `g^{ij} A_ij`.
pub fn trace_with(a: &CovariantTensor, m: &MetricData) -> RationalFunction {
    let n = a.dim();
    index_tuples(n, 2).map(|idx| m.inv(idx[0], idx[1]) * a.get(&idx)).sum()
}

/// `(D·T)_{i1..ik,xy} = −Σ_m D_{x y i_m}{}^p T_{i1..p..ik}`.
pub fn curvature_action(d: &CovariantTensor, t: &CovariantTensor, m: &MetricData) -> Result<CovariantTensor> {
    same_chart(d, t)?;
    same_chart(d, m.g())?;
    require_rank(d, 4, "D")?;
    let n = d.dim();
    let k = t.rank();
    // raised[x][y][i] = nonzero (p, D_{xyi}^p)
    let mut raised: Vec<Vec<(usize, RationalFunction)>> = vec![Vec::new(); n * n * n];
    for x in 0..n {
        for y in 0..n {
            for i in 0..n {
                for p in 0..n {
                    let v: RationalFunction = (0..n).map(|q| d.get(&[x, y, i, q]) * m.inv(q, p)).sum();
                    if !v.is_zero() {
                        raised[(x * n + y) * n + i].push((p, v));
                    }
                }
            }
        }
    }
    let d_skew = index_tuples(n, 4).all(|i| {
        let swapped = d.get(&[i[1], i[0], i[2], i[3]]);
        i[0] > i[1] || *d.get(&i) == -swapped
    });
    let t_sym = t.symmetry();
    let t_skew_tail = t_sym == Symmetry::General
        && k >= 2
        && index_tuples(n, k).all(|i| {
            let mut j = i.clone();
            j.swap(k - 2, k - 1);
            i[k - 2] > i[k - 1] || *t.get(&i) == -t.get(&j)
        });
    let mut buf = vec![0; k];
    let mut comps: Vec<RationalFunction> = Vec::with_capacity(n.pow(k as u32 + 2));
    for (flat, idx) in index_tuples(n, k + 2).enumerate() {
        let (x, y) = (idx[k], idx[k + 1]);
        if d_skew && x == y {
            comps.push(RationalFunction::zero());
            continue;
        }
        let Some((mut canon, mut negate)) = canonical_index(t_sym, &idx[..k]) else {
            comps.push(RationalFunction::zero());
            continue;
        };
        if t_skew_tail {
            if canon[k - 2] == canon[k - 1] {
                comps.push(RationalFunction::zero());
                continue;
            }
            if canon[k - 2] > canon[k - 1] {
                canon.swap(k - 2, k - 1);
                negate = !negate;
            }
        }
        if d_skew && x > y {
            canon.extend([y, x]);
            negate = !negate;
        } else {
            canon.extend([x, y]);
        }
        let at = canon.iter().fold(0, |acc, &i| acc * n + i);
        if at != flat {
            let v = &comps[at];
            comps.push(if negate { -v } else { v.clone() });
            continue;
        }
        let mut acc = RationalFunction::zero();
        for slot in 0..k {
            buf.copy_from_slice(&idx[..k]);
            for (p, v) in &raised[(x * n + y) * n + idx[slot]] {
                buf[slot] = *p;
                let tv = t.get(&buf);
                if !tv.is_zero() {
                    acc = &acc - &(v * tv);
                }
            }
        }
        comps.push(acc);
    }
    CovariantTensor::from_components(d.chart().clone(), k + 2, Symmetry::General, comps)
}

/// `Q(A,T)_{i1..ik,xy} = Σ_m [A_{x i_m} T_{..y..} − A_{y i_m} T_{..x..}]`.
pub fn q_action(a: &CovariantTensor, t: &CovariantTensor) -> Result<CovariantTensor> {
    same_chart(a, t)?;
    require_symmetric(a, "A")?;
    let k = t.rank();
    let mut buf = vec![0; k];
    Ok(CovariantTensor::from_fn(
        a.chart().clone(),
        k + 2,
        Symmetry::General,
        |idx| {
            let (x, y) = (idx[k], idx[k + 1]);
            let mut acc = RationalFunction::zero();
            for slot in 0..k {
                let im = idx[slot];
                buf.copy_from_slice(&idx[..k]);
                let ax = a.get(&[x, im]);
                if !ax.is_zero() {
                    buf[slot] = y;
                    acc = &acc + &(ax * t.get(&buf));
                }
                let ay = a.get(&[y, im]);
                if !ay.is_zero() {
                    buf[slot] = x;
                    acc = &acc - &(ay * t.get(&buf));
                }
            }
            acc
        },
    ))
}

/// Component array of `(X ∧_T Y)(X1, ..., Xk)` with the `(X, Y)` slots appended:
/// `T(Y, X1, X3, ..., Xk) g(X, X2) − T(X, X1, X3, ..., Xk) g(Y, X2)`.
pub fn wedge_vector(t: &CovariantTensor, m: &MetricData) -> Result<CovariantTensor> {
    same_chart(t, m.g())?;
    let k = t.rank();
    if k < 2 {
        return Err(Error::InvalidIndex(format!("X ∧_T Y needs rank(T) ≥ 2, got {k}")));
    }
    let g = m.g();
    let mut buf = vec![0; k];
    Ok(CovariantTensor::from_fn(
        t.chart().clone(),
        k + 2,
        Symmetry::General,
        |idx| {
            let (x, y) = (idx[k], idx[k + 1]);
            let (x1, x2) = (idx[0], idx[1]);
            buf[1] = x1;
            buf[2..].copy_from_slice(&idx[2..k]);
            let mut acc = RationalFunction::zero();
            let gx = g.get(&[x, x2]);
            if !gx.is_zero() {
                buf[0] = y;
                acc = &acc + &(t.get(&buf) * gx);
            }
            let gy = g.get(&[y, x2]);
            if !gy.is_zero() {
                buf[0] = x;
                acc = &acc - &(t.get(&buf) * gy);
            }
            acc
        },
    ))
}

/// Metric contraction `g^{pq} T_{..p..q..}` over two distinct slots.
pub fn contract(t: &CovariantTensor, s1: usize, s2: usize, m: &MetricData) -> Result<CovariantTensor> {
    same_chart(t, m.g())?;
    let k = t.rank();
    if s1 == s2 || s1 >= k || s2 >= k {
        return Err(Error::InvalidIndex(format!(
            "cannot contract slots ({}, {}) of a rank-{k} tensor",
            s1 + 1,
            s2 + 1
        )));
    }
    let n = t.dim();
    let mut buf = vec![0; k];
    let sym = if k == 4 && t.symmetry() == Symmetry::CurvatureType4 {
        Symmetry::Symmetric2
    } else {
        Symmetry::General
    };
    Ok(CovariantTensor::from_fn(t.chart().clone(), k - 2, sym, |idx| {
        let mut src = idx.iter();
        for (slot, b) in buf.iter_mut().enumerate() {
            if slot != s1 && slot != s2 {
                *b = *src.next().expect("enough free indices");
            }
        }
        let mut acc = RationalFunction::zero();
        for p in 0..n {
            for q in 0..n {
                let gi = m.inv(p, q);
                if gi.is_zero() {
                    continue;
                }
                buf[s1] = p;
                buf[s2] = q;
                let v = t.get(&buf);
                if !v.is_zero() {
                    acc = &acc + &(gi * v);
                }
            }
        }
        acc
    }))
}

/// `η ⊗ ξ` for one-forms, tagged symmetric when `η = ξ`.
pub fn one_form_product(eta: &CovariantTensor, xi: &CovariantTensor) -> Result<CovariantTensor> {
    require_rank(eta, 1, "first factor")?;
    require_rank(xi, 1, "second factor")?;
    let out = eta.outer(xi)?;
    Ok(if eta == xi {
        out.with_symmetry(Symmetry::Symmetric2)
    } else {
        out
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::tensor::Chart;

    fn chart4() -> Arc<Chart> {
        Arc::new(Chart::standard(4).unwrap())
    }

    fn product_metric() -> MetricData {
        let c = chart4();
        let d = ["x2", "x1", "x4", "x3"].map(|e| c.parse(e).unwrap());
        MetricData::new(CovariantTensor::from_fn(c, 2, Symmetry::Symmetric2, |idx| {
            if idx[0] == idx[1] {
                d[idx[0]].clone()
            } else {
                RationalFunction::zero()
            }
        }))
        .unwrap()
    }

    fn form(c: &Arc<Chart>, comps: &[&str]) -> CovariantTensor {
        CovariantTensor::one_form(c.clone(), comps.iter().map(|e| c.parse(e).unwrap()).collect()).unwrap()
    }

    #[test]
    fn kn_of_metric_with_itself() {
        let m = product_metric();
        let gg = kulkarni_nomizu(m.g(), m.g()).unwrap();
        assert_eq!(gg.get(&[0, 1, 0, 1]), &m.chart().parse("-2*x1*x2").unwrap());
        gg.check_symmetry().unwrap();

        let id = MetricData::identity(chart4());
        let gg = kulkarni_nomizu(id.g(), id.g()).unwrap();
        assert_eq!(gg.get(&[0, 1, 0, 1]), &RationalFunction::from_integer(-2));
        assert!(gg.get(&[0, 1, 2, 3]).is_zero());
    }

    #[test]
    fn kn_rejects_non_symmetric() {
        let c = chart4();
        let t = CovariantTensor::from_fn(c.clone(), 2, Symmetry::General, |idx| RationalFunction::var(idx[0]));
        let id = MetricData::identity(c);
        assert!(kulkarni_nomizu(&t, id.g()).is_err());
    }

    #[test]
    fn wedge_with_rank_one_product() {
        let m = product_metric();
        let c = m.chart().clone();
        let eta = form(&c, &["1", "0", "0", "0"]);
        let ee = one_form_product(&eta, &eta).unwrap();
        let w = wedge_with(m.g(), &ee).unwrap();
        assert_eq!(w.get(&[0, 1, 0, 1]), &c.parse("-x1").unwrap());
        assert_eq!(w, kulkarni_nomizu(m.g(), &ee).unwrap());
        let zero = CovariantTensor::zeros(c, 2, Symmetry::Symmetric2);
        assert!(wedge_with(&zero, &ee).unwrap().is_zero());
    }

    #[test]
    fn exterior_products() {
        let c = chart4();
        let d1 = form(&c, &["1", "0", "0", "0"]);
        let d2 = form(&c, &["0", "1", "0", "0"]);
        let w = exterior_product(&d1, &d2).unwrap();
        assert_eq!(w.get(&[0, 1]), &RationalFunction::from_ratio(1, 2));
        assert_eq!(w.get(&[1, 0]), &RationalFunction::from_ratio(-1, 2));
        assert!(exterior_product(&d1, &d1).unwrap().is_zero());
        let a = form(&c, &["x2", "0", "0", "0"]);
        let b = form(&c, &["0", "x1", "0", "0"]);
        assert_eq!(
            exterior_product(&a, &b).unwrap().get(&[0, 1]),
            &c.parse("x1*x2/2").unwrap()
        );
    }

    #[test]
    fn exterior_derivatives() {
        let c = chart4();
        let p = form(&c, &["x2", "0", "0", "0"]);
        assert_eq!(
            exterior_derivative(&p).unwrap().get(&[0, 1]),
            &RationalFunction::from_integer(-1)
        );
        let exact = form(&c, &["x2", "x1", "0", "0"]);
        assert!(exterior_derivative(&exact).unwrap().is_zero());
    }

    #[test]
    fn second_level_of_metric_and_zero() {
        let m = product_metric();
        let sl = second_level(m.g(), &m).unwrap();
        assert_eq!(&sl.squared, m.g());
        assert_eq!(sl.trace, RationalFunction::from_integer(4));
        assert_eq!(sl.second_trace, RationalFunction::from_integer(4));
        let zero = CovariantTensor::zeros(m.chart().clone(), 2, Symmetry::Symmetric2);
        let sl = second_level(&zero, &m).unwrap();
        assert!(sl.squared.is_zero() && sl.trace.is_zero() && sl.second_trace.is_zero());
    }

    #[test]
    fn q_action_annihilates_metric_terms() {
        let m = product_metric();
        assert!(q_action(m.g(), m.g()).unwrap().is_zero());
        let gg = kulkarni_nomizu(m.g(), m.g()).unwrap();
        assert!(q_action(m.g(), &gg).unwrap().is_zero());
    }

    #[test]
    fn contraction_of_gg() {
        let m = product_metric();
        let gg = kulkarni_nomizu(m.g(), m.g()).unwrap();
        let c = contract(&gg, 0, 3, &m).unwrap();
        assert_eq!(c, m.g().scale(&RationalFunction::from_integer(6)));
        let zero = CovariantTensor::zeros(m.chart().clone(), 4, Symmetry::General);
        assert!(contract(&zero, 0, 3, &m).unwrap().is_zero());
        assert!(contract(&gg, 1, 1, &m).is_err());
    }

    #[test]
    fn wedge_vector_with_metric() {
        let id = MetricData::identity(chart4());
        let w = wedge_vector(id.g(), &id).unwrap();
        // g(Y,X1) g(X,X2) - g(X,X1) g(Y,X2) at (X1,X2,X,Y) = (1,2,2,1) and (1,2,1,2)
        assert_eq!(w.get(&[0, 1, 1, 0]), &RationalFunction::one());
        assert_eq!(w.get(&[0, 1, 0, 1]), &RationalFunction::from_integer(-1));
        let zero = CovariantTensor::zeros(id.chart().clone(), 2, Symmetry::General);
        assert!(wedge_vector(&zero, &id).unwrap().is_zero());
    }
}
