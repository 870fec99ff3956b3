//! Structure detection by exact linear algebra over the rational function field.

mod einstein;
mod semisym;
mod theorems;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::curvature::{covariant_derivative, CurvatureBundle};
use crate::error::{Error, Result};
use crate::linsolve::{self, LinearSolution, SolveStatus};
use crate::symbolic::{coprime_base, Polynomial, RationalFunction};
use crate::tensor::ops;
use crate::tensor::{Chart, CovariantTensor};

pub use einstein::{detect_einstein_class, detect_roter, Ein2, EinsteinClass, QuasiEinstein, RoterOutcome};
pub use semisym::{check_semisymmetry, SemisymmetryOutcome};
pub use theorems::{
    bianchi_contraction_one, bianchi_contraction_two, check_semisymmetry_sufficiency, contracted_ricci_rhs,
    corollary_same_forms, dkappa_rhs, member_with_pi, rdotr_expansion, sgk_combination, transfer_sgk,
    verify_rdotr_expansion, verify_sgk_identities, verify_specialization_theorems, CheckStatus, NamedCheck, SgkForms,
    SpecializationInputs, TransferOutcome,
};

/// Generic verdict of a structure condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    /// The left-hand side vanishes identically, so the defining set is empty.
    Degenerate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Degenerate => "degenerate",
        })
    }
}

/// Recurrent-like structure conditions `∇T = Σ_b ω_b ⊗ B_b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureKind {
    /// `∇T = Π ⊗ T`
    Recurrent,
    /// `∇Z = Π ⊗ Z + Φ ⊗ g`
    Generalized,
    /// `∇T = Π ⊗ T + Ψ ⊗ g∧(g + η⊗η)`
    Qgk,
    /// `∇T = Π ⊗ T + Φ ⊗ g∧g + Ψ ⊗ g∧(η⊗η)`
    QgkLike,
    /// `∇T = Π ⊗ T + Ψ ⊗ g∧S`
    Hgk,
    /// `∇T = Π ⊗ T + Ψ ⊗ S∧S`
    Wgk,
    /// `∇T = Π ⊗ T + Φ ⊗ S∧S + Ψ ⊗ g∧S + Θ ⊗ g∧g`
    Sgk,
}

impl StructureKind {
    pub fn name(self) -> &'static str {
        match self {
            StructureKind::Recurrent => "recurrent",
            StructureKind::Generalized => "generalized-recurrent",
            StructureKind::Qgk => "qgk",
            StructureKind::QgkLike => "qgk-like",
            StructureKind::Hgk => "hgk",
            StructureKind::Wgk => "wgk",
            StructureKind::Sgk => "sgk",
        }
    }

    pub fn coefficient_labels(self) -> &'static [&'static str] {
        match self {
            StructureKind::Recurrent => &["pi"],
            StructureKind::Generalized => &["pi", "phi"],
            StructureKind::Qgk | StructureKind::Hgk | StructureKind::Wgk => &["pi", "psi"],
            StructureKind::QgkLike => &["pi", "phi", "psi"],
            StructureKind::Sgk => &["pi", "phi", "psi", "theta"],
        }
    }

    fn needs_eta(self) -> bool {
        matches!(self, StructureKind::Qgk | StructureKind::QgkLike)
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ordered basis tensors of a structure condition with display labels.
#[derive(Clone, Debug)]
pub struct BasisSet {
    pub labels: Vec<String>,
    pub tensors: Vec<CovariantTensor>,
}

impl BasisSet {
    pub fn new(items: Vec<(String, CovariantTensor)>) -> Result<Self> {
        let (labels, tensors): (Vec<_>, Vec<_>) = items.into_iter().unzip();
        if let Some(first) = tensors.first() {
            for t in &tensors[1..] {
                first.same_shape(t)?;
            }
        }
        Ok(BasisSet { labels, tensors })
    }

    pub fn rank(&self) -> Option<usize> {
        self.tensors.first().map(CovariantTensor::rank)
    }

    /// `Σ_b B_b ⊗ ω_b` with the one-form slot appended.
    pub fn combine(&self, forms: &[CovariantTensor]) -> Result<CovariantTensor> {
        combine(&self.tensors.iter().collect::<Vec<_>>(), forms)
    }
}

/// `Σ_b B_b ⊗ ω_b`; all `B_b` share rank and chart.
pub fn combine(tensors: &[&CovariantTensor], forms: &[CovariantTensor]) -> Result<CovariantTensor> {
    let first = tensors
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty basis".into()))?;
    let mut acc = CovariantTensor::zeros(
        first.chart().clone(),
        first.rank() + 1,
        crate::tensor::Symmetry::General,
    );
    for (t, w) in tensors.iter().zip(forms) {
        if w.is_zero() || t.is_zero() {
            continue;
        }
        acc = acc.add(&t.outer(w)?)?;
    }
    Ok(acc)
}

/// Directionwise affine solution sets of the coefficient one-forms.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionFamily {
    pub labels: Vec<String>,
    pub directions: Vec<LinearSolution>,
    /// Every returned member was substituted back into the defining equation.
    pub verified: bool,
}

impl SolutionFamily {
    pub fn is_consistent(&self) -> bool {
        self.directions.iter().all(LinearSolution::is_consistent)
    }

    pub fn is_degenerate(&self) -> bool {
        self.directions.iter().all(|d| d.status == SolveStatus::DegenerateLhs)
    }

    pub fn null_dims(&self) -> Vec<usize> {
        self.directions.iter().map(|d| d.null_basis.len()).collect()
    }

    /// True when every direction has the same number of free parameters.
    pub fn uniform_null_dim(&self) -> bool {
        self.null_dims().windows(2).all(|w| w[0] == w[1])
    }

    pub fn is_unique(&self) -> bool {
        self.is_consistent() && self.null_dims().iter().all(|&d| d == 0)
    }

    /// Name of every free parameter, per direction (`theta_1`, `phi_3`, ...).
    pub fn parameter_names(&self) -> Vec<Vec<String>> {
        self.directions
            .iter()
            .enumerate()
            .map(|(l, d)| {
                d.free_columns
                    .iter()
                    .map(|&c| format!("{}_{}", self.labels[c], l + 1))
                    .collect()
            })
            .collect()
    }

    /// Coefficient one-forms of the member `particular + Σ params[l][j] · null[l][j]`
    /// (missing parameters are zero).
    pub fn member_forms(
        &self,
        chart: &std::sync::Arc<Chart>,
        params: &[Vec<RationalFunction>],
    ) -> Vec<CovariantTensor> {
        let members: Vec<Vec<RationalFunction>> = self
            .directions
            .iter()
            .enumerate()
            .map(|(l, d)| d.member(params.get(l).map(Vec::as_slice).unwrap_or(&[])))
            .collect();
        (0..self.labels.len())
            .map(|b| {
                let comps = members
                    .iter()
                    .map(|m| m.get(b).cloned().unwrap_or_else(RationalFunction::zero))
                    .collect();
                CovariantTensor::one_form(chart.clone(), comps).expect("n components")
            })
            .collect()
    }

    pub fn particular_forms(&self, chart: &std::sync::Arc<Chart>) -> Vec<CovariantTensor> {
        self.member_forms(chart, &[])
    }

    /// Parameter choices for the particular member and for particular plus each
    /// single null generator.
    pub fn test_members(&self) -> Vec<Vec<Vec<RationalFunction>>> {
        let dims = self.null_dims();
        let max = dims.iter().copied().max().unwrap_or(0);
        let mut out = vec![Vec::new()];
        for j in 0..max {
            out.push(
                dims.iter()
                    .map(|&d| {
                        (0..d)
                            .map(|k| {
                                if k == j {
                                    RationalFunction::one()
                                } else {
                                    RationalFunction::zero()
                                }
                            })
                            .collect()
                    })
                    .collect(),
            );
        }
        out
    }

    /// Nonconstant numerators and denominators of elimination pivots.
    pub fn excluded_loci(&self, chart: &Chart) -> BTreeSet<String> {
        pivot_loci(self.pivots(), chart)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &RationalFunction> {
        self.directions.iter().flat_map(|d| d.pivots.iter())
    }
}

/// Coprime squarefree factors of the numerators and denominators.
pub fn pivot_loci<'a>(pivots: impl Iterator<Item = &'a RationalFunction>, chart: &Chart) -> BTreeSet<String> {
    let polys: Vec<&Polynomial> = pivots.flat_map(|p| [p.numer(), p.denom()]).collect();
    coprime_base(polys)
        .iter()
        .map(|p| p.format_with(chart.names()))
        .collect()
}

/// Solves `lhs(·, l) = Σ_b c_{b,l} basis_b` for every direction `l`.
pub fn solve_linear_family(lhs: &CovariantTensor, basis: &BasisSet) -> Result<SolutionFamily> {
    let k = basis
        .rank()
        .ok_or_else(|| Error::InvalidArgument("empty basis".into()))?;
    if lhs.rank() != k + 1 {
        return Err(Error::InvalidIndex(format!(
            "left side has rank {}, basis rank {k}",
            lhs.rank()
        )));
    }
    let columns: Vec<&[RationalFunction]> = basis.tensors.iter().map(|t| t.components()).collect();
    let mut directions = Vec::with_capacity(lhs.dim());
    let mut verified = true;
    for l in 0..lhs.dim() {
        let slice = lhs.direction_slice(l)?;
        let rhs = slice.components();
        let sol = linsolve::solve(&columns, rhs);
        if sol.is_consistent() {
            verified &= linsolve::substitutes(&columns, rhs, &sol.particular);
            for v in &sol.null_basis {
                let zero = vec![RationalFunction::zero(); rhs.len()];
                verified &= linsolve::substitutes(&columns, &zero, v);
            }
        }
        directions.push(sol);
    }
    Ok(SolutionFamily {
        labels: basis.labels.clone(),
        directions,
        verified,
    })
}

/// Result of one structure detection.
#[derive(Clone, Debug)]
pub struct StructureOutcome {
    pub kind: StructureKind,
    pub target: String,
    pub basis: Vec<String>,
    pub verdict: Verdict,
    pub family: SolutionFamily,
}

impl StructureOutcome {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Builds the basis for `kind` with target tensor `t`.
pub fn structure_basis(
    kind: StructureKind,
    t: &CovariantTensor,
    target: &str,
    b: &CurvatureBundle,
    eta: Option<&CovariantTensor>,
) -> Result<BasisSet> {
    let eta_product = || -> Result<CovariantTensor> {
        let eta = eta.ok_or(Error::MissingEta(kind.name()))?;
        ops::one_form_product(eta, eta)
    };
    let items = match kind {
        StructureKind::Recurrent => vec![(target.to_string(), t.clone())],
        StructureKind::Generalized => vec![(target.to_string(), t.clone()), ("g".into(), b.g().clone())],
        StructureKind::Hgk => vec![(target.to_string(), t.clone()), ("g∧S".into(), b.g_wedge_s.clone())],
        StructureKind::Wgk => vec![(target.to_string(), t.clone()), ("S∧S".into(), b.s_wedge_s.clone())],
        StructureKind::Sgk => vec![
            (target.to_string(), t.clone()),
            ("S∧S".into(), b.s_wedge_s.clone()),
            ("g∧S".into(), b.g_wedge_s.clone()),
            ("g∧g".into(), b.g_wedge_g.clone()),
        ],
        StructureKind::Qgk => {
            let h = b.g().add(&eta_product()?)?;
            vec![
                (target.to_string(), t.clone()),
                ("g∧(g+η⊗η)".into(), ops::kulkarni_nomizu(b.g(), &h)?),
            ]
        }
        StructureKind::QgkLike => vec![
            (target.to_string(), t.clone()),
            ("g∧g".into(), b.g_wedge_g.clone()),
            ("g∧(η⊗η)".into(), ops::kulkarni_nomizu(b.g(), &eta_product()?)?),
        ],
    };
    BasisSet::new(items)
}

/// Detects `kind` for the target tensor `t` (any rank-4 tensor, or a rank-2
/// tensor for the recurrent and generalized-recurrent kinds).
pub fn detect_structure(
    kind: StructureKind,
    t: &CovariantTensor,
    target: &str,
    b: &CurvatureBundle,
    eta: Option<&CovariantTensor>,
) -> Result<StructureOutcome> {
    if kind.needs_eta() && eta.is_none() {
        return Err(Error::MissingEta(kind.name()));
    }
    let mut basis = structure_basis(kind, t, target, b, eta)?;
    for (label, name) in basis.labels.iter_mut().zip(kind.coefficient_labels()) {
        *label = format!("{name}:{label}");
    }
    let lhs = if std::ptr::eq(t, &b.riemann) {
        b.nabla_riemann.clone()
    } else if std::ptr::eq(t, b.s()) {
        b.nabla_ricci.clone()
    } else {
        covariant_derivative(t, &b.gamma)
    };
    detect_with_lhs(kind, &lhs, target, basis)
}

pub(crate) fn detect_with_lhs(
    kind: StructureKind,
    lhs: &CovariantTensor,
    target: &str,
    basis: BasisSet,
) -> Result<StructureOutcome> {
    let basis_labels = basis.labels.clone();
    let mut fam_basis = basis;
    fam_basis.labels = kind.coefficient_labels().iter().map(|s| s.to_string()).collect();
    let family = solve_linear_family(lhs, &fam_basis)?;
    let verdict = if lhs.is_zero() {
        Verdict::Degenerate
    } else if family.is_consistent() {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    Ok(StructureOutcome {
        kind,
        target: target.to_string(),
        basis: basis_labels,
        verdict,
        family,
    })
}
