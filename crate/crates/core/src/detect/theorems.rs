//! Identities satisfied by the associated one-forms of super generalized
//! recurrent structures, transfers to the derived curvature tensors and the
//! conditional specialization results.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::curvature::{covariant_derivative, CurvatureBundle, DerivedKind};
use crate::error::{Error, Result};
use crate::symbolic::RationalFunction;
use crate::tensor::ops;
use crate::tensor::{Chart, CovariantTensor, Symmetry};

use super::einstein::{EinsteinClass, RoterOutcome};
use super::{combine, SolutionFamily, StructureOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotExercised,
    NotApplicable,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::NotExercised => "not-exercised",
            CheckStatus::NotApplicable => "not-applicable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedCheck {
    pub name: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl NamedCheck {
    pub fn new(name: impl Into<String>, status: CheckStatus) -> Self {
        NamedCheck {
            name: name.into(),
            status,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn from_bool(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, if ok { CheckStatus::Pass } else { CheckStatus::Fail })
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}

/// The four associated one-forms `(Π, Φ, Ψ, Θ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SgkForms {
    pub pi: CovariantTensor,
    pub phi: CovariantTensor,
    pub psi: CovariantTensor,
    pub theta: CovariantTensor,
}

impl SgkForms {
    pub fn from_slice(forms: &[CovariantTensor]) -> Result<Self> {
        match forms {
            [pi, phi, psi, theta] => Ok(SgkForms {
                pi: pi.clone(),
                phi: phi.clone(),
                psi: psi.clone(),
                theta: theta.clone(),
            }),
            _ => Err(Error::InvalidArgument(format!(
                "expected four one-forms, got {}",
                forms.len()
            ))),
        }
    }

    pub fn as_array(&self) -> [&CovariantTensor; 4] {
        [&self.pi, &self.phi, &self.psi, &self.theta]
    }

    pub fn to_vec(&self) -> Vec<CovariantTensor> {
        self.as_array().into_iter().cloned().collect()
    }
}

fn lin(terms: &[(&RationalFunction, &CovariantTensor)]) -> CovariantTensor {
    let first = terms[0].1;
    let mut acc = CovariantTensor::zeros(first.chart().clone(), first.rank(), Symmetry::General);
    for (c, t) in terms {
        if !c.is_zero() {
            acc = acc.add(&t.scale(c)).expect("same shape");
        }
    }
    acc
}

fn int(k: i64) -> RationalFunction {
    RationalFunction::from_integer(k)
}

/// `(ω∘A)_a = ω_p g^{pq} A_{qa}`.
fn compose(w: &CovariantTensor, a: &CovariantTensor, b: &CurvatureBundle) -> CovariantTensor {
    let v = b.metric.raise(w);
    let n = b.dim();
    let comps = (0..n).map(|i| (0..n).map(|q| &v[q] * a.get(&[q, i])).sum()).collect();
    CovariantTensor::one_form(w.chart().clone(), comps).expect("n components")
}

/// `T⊗Π + S∧S⊗Φ + g∧S⊗Ψ + g∧g⊗Θ`.
pub fn sgk_combination(t: &CovariantTensor, f: &SgkForms, b: &CurvatureBundle) -> Result<CovariantTensor> {
    combine(&[t, &b.s_wedge_s, &b.g_wedge_s, &b.g_wedge_g], &f.to_vec())
}

/// The contracted form of the structure equation:
/// `∇S = −2Φ⊗S² + (Π + 2κΦ + (n−2)Ψ)⊗S + (κΨ + 2(n−1)Θ)⊗g`.
pub fn contracted_ricci_rhs(f: &SgkForms, b: &CurvatureBundle) -> Result<CovariantTensor> {
    let n = b.dim() as i64;
    let k = b.kappa();
    let one = RationalFunction::one();
    let p1 = f.phi.scale(&int(-2));
    let f1 = lin(&[(&one, &f.pi), (&(k * &int(2)), &f.phi), (&int(n - 2), &f.psi)]);
    let s1 = lin(&[(k, &f.psi), (&int(2 * (n - 1)), &f.theta)]);
    combine(&[b.s2(), b.s(), b.g()], &[p1, f1, s1])
}

/// `κΠ + 2(κ² − κ⁽²⁾)Φ + 2(n−1)(κΨ + nΘ)`.
pub fn dkappa_rhs(f: &SgkForms, b: &CurvatureBundle) -> CovariantTensor {
    let n = b.dim() as i64;
    let k = b.kappa();
    let c_phi = &(&(k * k) - b.kappa2()) * &int(2);
    let c_psi = k * &int(2 * (n - 1));
    lin(&[
        (k, &f.pi),
        (&c_phi, &f.phi),
        (&c_psi, &f.psi),
        (&int(2 * n * (n - 1)), &f.theta),
    ])
}

/// First contraction of the cyclic Bianchi sum, slots `(X₂, X₃, X₄)`.
pub fn bianchi_contraction_one(f: &SgkForms, b: &CurvatureBundle) -> CovariantTensor {
    let n = b.dim();
    let ni = n as i64;
    let k = b.kappa();
    let one = RationalFunction::one();
    let (g, s, s2, r) = (b.g(), b.s(), b.s2(), &b.riemann);
    let psi_s = compose(&f.psi, s, b);
    let phi_s = compose(&f.phi, s, b);
    let a = lin(&[(k, &f.psi), (&int(-1), &psi_s), (&int(2 * (ni - 2)), &f.theta)]);
    let bb = lin(&[
        (&one, &f.pi),
        (&(k * &int(2)), &f.phi),
        (&int(-2), &phi_s),
        (&int(ni - 3), &f.psi),
    ]);
    let v = b.metric.raise(&f.pi);
    let two = int(2);
    CovariantTensor::from_fn(g.chart().clone(), 3, Symmetry::General, |idx| {
        let (x2, x3, x4) = (idx[0], idx[1], idx[2]);
        let rv: RationalFunction = (0..n).map(|p| &v[p] * r.get(&[p, x4, x2, x3])).sum();
        let mut acc = -rv;
        acc = &acc + &(a.get(&[x3]) * g.get(&[x2, x4]));
        acc = &acc - &(a.get(&[x2]) * g.get(&[x3, x4]));
        acc = &acc + &(bb.get(&[x3]) * s.get(&[x2, x4]));
        acc = &acc - &(&(&two * f.phi.get(&[x3])) * s2.get(&[x2, x4]));
        acc = &acc - &(bb.get(&[x2]) * s.get(&[x3, x4]));
        acc = &acc + &(&(&two * f.phi.get(&[x2])) * s2.get(&[x3, x4]));
        acc
    })
}

/// Second contraction of the cyclic Bianchi sum.
pub fn bianchi_contraction_two(f: &SgkForms, b: &CurvatureBundle) -> CovariantTensor {
    let n = b.dim() as i64;
    let k = b.kappa();
    let one = RationalFunction::one();
    let pi_s = compose(&f.pi, b.s(), b);
    let phi_s = compose(&f.phi, b.s(), b);
    let phi_s2 = compose(&f.phi, b.s2(), b);
    let psi_s = compose(&f.psi, b.s(), b);
    let inner = lin(&[(k, &f.psi), (&int(-1), &psi_s), (&int(n - 1), &f.theta)]);
    let bracket = lin(&[
        (&one, &pi_s),
        (&(b.kappa2() - &(k * k)), &f.phi),
        (&(k * &int(2)), &phi_s),
        (&int(-2), &phi_s2),
        (&int(-(n - 2)), &inner),
    ]);
    lin(&[(&-k, &f.pi), (&int(2), &bracket)])
}

/// Checks the contracted structure equation, the `dκ` relation and both
/// Bianchi contractions for one member of the family.
pub fn verify_sgk_identities(f: &SgkForms, b: &CurvatureBundle) -> Result<Vec<NamedCheck>> {
    let csgk = contracted_ricci_rhs(f, b)? == b.nabla_ricci;
    let dk = dkappa_rhs(f, b) == b.dkappa;
    Ok(vec![
        NamedCheck::from_bool("contracted-ricci-identity", csgk),
        NamedCheck::from_bool("dkappa-identity", dk),
        NamedCheck::from_bool("bianchi-contraction-1", bianchi_contraction_one(f, b).is_zero()),
        NamedCheck::from_bool("bianchi-contraction-2", bianchi_contraction_two(f, b).is_zero()),
    ])
}

/// Right side of the `R·R` expansion in terms of the one-forms, in the slot
/// and sign conventions of [`ops::curvature_action`].
pub fn rdotr_expansion(f: &SgkForms, b: &CurvatureBundle) -> Result<CovariantTensor> {
    let n = b.dim() as i64;
    let one = RationalFunction::one();
    let d_pi = ops::exterior_derivative(&f.pi)?;
    let d_phi = ops::exterior_derivative(&f.phi)?;
    let d_psi = ops::exterior_derivative(&f.psi)?;
    let d_theta = ops::exterior_derivative(&f.theta)?;
    let phi_psi = ops::exterior_product(&f.phi, &f.psi)?;
    let u = lin(&[(&one, &f.pi), (&int(2 * (n - 2)), &f.psi)]);
    let w = lin(&[(&one, &f.pi), (&int(2 * (n - 1)), &f.psi)]);
    let c_ss = d_phi.sub(&ops::exterior_product(&f.phi, &u)?.scale(&int(2)))?;
    let c_gs = d_psi.sub(&ops::exterior_product(&f.phi, &f.theta)?.scale(&int(8 * (n - 1))))?;
    let c_gg = d_theta.add(&ops::exterior_product(&f.theta, &w)?.scale(&int(2)))?;
    let g_s2 = ops::kulkarni_nomizu(b.g(), b.s2())?;
    let terms = [
        b.riemann.outer(&d_pi)?,
        g_s2.outer(&phi_psi)?.scale(&int(-4)),
        b.s_wedge_s.outer(&c_ss)?,
        b.g_wedge_s.outer(&c_gs)?,
        b.g_wedge_g.outer(&c_gg)?,
    ];
    let mut acc = terms[0].clone();
    for t in &terms[1..] {
        acc = acc.add(t)?;
    }
    Ok(acc.neg())
}

/// Compares the expansion with a directly computed `R·R`.
pub fn verify_rdotr_expansion(f: &SgkForms, b: &CurvatureBundle, r_dot_r: &CovariantTensor) -> Result<bool> {
    Ok(&rdotr_expansion(f, b)? == r_dot_r)
}

fn closed_and_codirectional(f: &SgkForms) -> Result<bool> {
    let forms = f.as_array();
    for w in forms {
        if !ops::exterior_derivative(w)?.is_zero() {
            return Ok(false);
        }
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            if !ops::exterior_product(forms[i], forms[j])?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Looks for a tested family member whose four one-forms are closed and
/// pairwise codirectional, and then requires `R·R = 0`.
pub fn check_semisymmetry_sufficiency(
    family: &SolutionFamily,
    b: &CurvatureBundle,
    r_dot_r: &CovariantTensor,
) -> Result<NamedCheck> {
    const NAME: &str = "semisymmetry-sufficiency";
    if !family.is_consistent() || family.labels.len() != 4 {
        return Ok(NamedCheck::new(NAME, CheckStatus::NotApplicable));
    }
    let chart = b.g().chart();
    for params in family.test_members() {
        let f = SgkForms::from_slice(&family.member_forms(chart, &params))?;
        if closed_and_codirectional(&f)? {
            return Ok(NamedCheck::from_bool(NAME, r_dot_r.is_zero()).with_detail("closed codirectional member found"));
        }
    }
    Ok(NamedCheck::new(NAME, CheckStatus::NotExercised).with_detail("sufficient condition not met"))
}

/// Member of the family whose `Π` equals `target`, when the free parameters
/// can reach it directionwise.
pub fn member_with_pi(family: &SolutionFamily, chart: &Arc<Chart>, target: &CovariantTensor) -> Option<SgkForms> {
    let mut params = Vec::with_capacity(family.directions.len());
    for (l, d) in family.directions.iter().enumerate() {
        if !d.is_consistent() {
            return None;
        }
        let gap = target.get(&[l]) - &d.particular[0];
        if gap.is_zero() {
            params.push(Vec::new());
            continue;
        }
        let j = d.null_basis.iter().position(|v| !v[0].is_zero())?;
        let mut p = vec![RationalFunction::zero(); d.null_basis.len()];
        p[j] = gap.checked_div(&d.null_basis[j][0]).ok()?;
        params.push(p);
    }
    SgkForms::from_slice(&family.member_forms(chart, &params)).ok()
}

/// One-forms of the transferred structure for a derived tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferOutcome {
    pub kind: DerivedKind,
    pub forms: Option<SgkForms>,
    pub checks: Vec<NamedCheck>,
}

/// `(Π, Φ, Ψ, Θ)` for `T ∈ {C, P, W, K}` from the structure forms and the
/// Ricci generalized recurrent pair `(Π̄, Φ̄)`.
pub fn transfer_sgk(
    kind: DerivedKind,
    f: &SgkForms,
    pi_bar: &CovariantTensor,
    phi_bar: &CovariantTensor,
    b: &CurvatureBundle,
) -> Result<TransferOutcome> {
    let n = b.dim() as i64;
    let name = format!("{}-transfer", kind.letter());
    if n < 3 {
        return Ok(TransferOutcome {
            kind,
            forms: None,
            checks: vec![NamedCheck::new(name, CheckStatus::NotApplicable)],
        });
    }
    let k = b.kappa();
    let one = RationalFunction::one();
    let inv = |d: i64| RationalFunction::from_ratio(1, d);
    // κΠ̄ + nΦ̄ − κΠ
    let mix = lin(&[(k, pi_bar), (&int(n), phi_bar), (&-k, &f.pi)]);
    let pi_gap = pi_bar.sub(&f.pi)?;
    let (psi, theta) = match kind {
        DerivedKind::Conformal => (
            lin(&[(&one, &f.psi), (&-&inv(n - 2), &pi_gap)]),
            lin(&[
                (&one, &f.theta),
                (&-&inv(n - 2), phi_bar),
                (&inv(2 * (n - 1) * (n - 2)), &mix),
            ]),
        ),
        DerivedKind::Concircular => (f.psi.clone(), lin(&[(&one, &f.theta), (&-&inv(2 * n * (n - 1)), &mix)])),
        DerivedKind::Conharmonic => (
            lin(&[(&one, &f.psi), (&-&inv(n - 2), &pi_gap)]),
            lin(&[(&one, &f.theta), (&-&inv(n - 2), phi_bar)]),
        ),
        DerivedKind::Projective => {
            if !pi_gap.is_zero() {
                return Ok(TransferOutcome {
                    kind,
                    forms: None,
                    checks: vec![NamedCheck::new(name, CheckStatus::NotApplicable)
                        .with_detail("requires the two recurrence forms to coincide")],
                });
            }
            (f.psi.clone(), lin(&[(&one, &f.theta), (&-&inv(2 * (n - 1)), phi_bar)]))
        }
    };
    let transferred = SgkForms {
        pi: f.pi.clone(),
        phi: f.phi.clone(),
        psi,
        theta,
    };
    let t = b.derived(kind)?;
    let nabla_t = covariant_derivative(&t, &b.gamma);
    let mut checks = vec![NamedCheck::from_bool(
        name,
        sgk_combination(&t, &transferred, b)? == nabla_t,
    )];
    checks.extend(same_form_checks(kind, f, &t, &nabla_t, b)?);
    Ok(TransferOutcome {
        kind,
        forms: Some(transferred),
        checks,
    })
}

/// Same-forms transfer, its closed-form criterion and the `T − R`
/// recurrence criterion must agree.
pub fn corollary_same_forms(kind: DerivedKind, f: &SgkForms, b: &CurvatureBundle) -> Result<Vec<NamedCheck>> {
    let t = b.derived(kind)?;
    let nabla_t = covariant_derivative(&t, &b.gamma);
    same_form_checks(kind, f, &t, &nabla_t, b)
}

fn same_form_checks(
    kind: DerivedKind,
    f: &SgkForms,
    t: &CovariantTensor,
    nabla_t: &CovariantTensor,
    b: &CurvatureBundle,
) -> Result<Vec<NamedCheck>> {
    let same = sgk_combination(t, f, b)? == *nabla_t;
    let criterion = match kind {
        DerivedKind::Concircular => b.dkappa == f.pi.scale(b.kappa()),
        _ => b.nabla_ricci == b.s().outer(&f.pi)?,
    };
    let diff = t.sub(&b.riemann)?;
    let diff_recurrent = nabla_t.sub(&b.nabla_riemann)? == diff.outer(&f.pi)?;
    let letter = kind.letter();
    let detail = format!("same-forms {same}, criterion {criterion}, difference recurrent {diff_recurrent}");
    Ok(vec![
        NamedCheck::from_bool(format!("{letter}-same-forms-criterion"), same == criterion).with_detail(detail.clone()),
        NamedCheck::from_bool(format!("{letter}-difference-recurrence"), same == diff_recurrent).with_detail(detail),
    ])
}

/// Structure outcomes consumed by [`verify_specialization_theorems`].
pub struct SpecializationInputs<'a> {
    pub sgk: &'a StructureOutcome,
    pub ricci_generalized: &'a StructureOutcome,
    pub recurrent: &'a StructureOutcome,
    pub einstein: &'a EinsteinClass,
    pub roter: &'a RoterOutcome,
}

fn phi_can_vanish(family: &SolutionFamily) -> bool {
    family
        .directions
        .iter()
        .all(|d| d.is_consistent() && (d.particular[1].is_zero() || d.null_basis.iter().any(|v| !v[1].is_zero())))
}

/// Conditional implications, each checked only when its hypotheses hold.
pub fn verify_specialization_theorems(
    b: &CurvatureBundle,
    input: &SpecializationInputs<'_>,
) -> Result<Vec<NamedCheck>> {
    let chart = b.g().chart();
    let sgk_holds = input.sgk.holds();
    let mut out = Vec::new();

    const EIN: &str = "einstein-implies-recurrent";
    out.push(if input.einstein.einstein && sgk_holds {
        let recurrent = input.recurrent.holds();
        let embeds = recurrent && {
            let pi = input.recurrent.family.particular_forms(chart).remove(0);
            let zero = CovariantTensor::zeros(chart.clone(), 1, Symmetry::General);
            let f = SgkForms {
                pi,
                phi: zero.clone(),
                psi: zero.clone(),
                theta: zero,
            };
            sgk_combination(&b.riemann, &f, b)? == b.nabla_riemann
        };
        NamedCheck::from_bool(EIN, recurrent && embeds)
    } else {
        NamedCheck::new(EIN, CheckStatus::NotExercised)
    });

    const QE: &str = "quasi-einstein-implies-qgk-like";
    let qe = input
        .einstein
        .quasi_einstein
        .as_ref()
        .filter(|_| !input.einstein.einstein);
    out.push(match qe {
        Some(q) if sgk_holds => {
            let f = SgkForms::from_slice(&input.sgk.family.particular_forms(chart))?;
            let (a, be) = (&q.alpha, &q.beta);
            let one = RationalFunction::one();
            let c_gg = lin(&[(&(a * a), &f.phi), (a, &f.psi), (&one, &f.theta)]);
            let c_eta = lin(&[(&(&(a * be) * &int(2)), &f.phi), (be, &f.psi)]);
            let g_eta = ops::kulkarni_nomizu(b.g(), &ops::one_form_product(&q.eta, &q.eta)?)?;
            let rhs = combine(&[&b.riemann, &b.g_wedge_g, &g_eta], &[f.pi.clone(), c_gg, c_eta])?;
            NamedCheck::from_bool(QE, rhs == b.nabla_riemann)
        }
        _ => NamedCheck::new(QE, CheckStatus::NotExercised),
    });

    const PROP: &str = "phi-vanishes-or-proper-ein2";
    out.push(if sgk_holds && input.ricci_generalized.holds() {
        let ok = phi_can_vanish(&input.sgk.family) || input.einstein.ein2.proper();
        NamedCheck::from_bool(PROP, ok)
    } else {
        NamedCheck::new(PROP, CheckStatus::NotExercised)
    });

    const ROTER: &str = "proper-roter-equivalence";
    out.push(if input.roter.proper {
        NamedCheck::from_bool(ROTER, sgk_holds == input.ricci_generalized.holds()).with_detail(format!(
            "sgk {}, ricci generalized recurrent {}",
            input.sgk.verdict, input.ricci_generalized.verdict
        ))
    } else {
        NamedCheck::new(ROTER, CheckStatus::NotExercised)
    });
    Ok(out)
}
