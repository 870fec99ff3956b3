//! Analysis driver, report documents, the verification battery and point
//! evaluation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;

use crate::curvature::{covariant_derivative, CurvatureBundle, DerivedKind};
use crate::detect::{
    self, check_semisymmetry, check_semisymmetry_sufficiency, detect_einstein_class, detect_roter, detect_structure,
    member_with_pi, transfer_sgk, verify_rdotr_expansion, verify_sgk_identities, verify_specialization_theorems,
    CheckStatus, EinsteinClass, NamedCheck, RoterOutcome, SemisymmetryOutcome, SgkForms, SolutionFamily,
    SpecializationInputs, StructureKind, StructureOutcome, Verdict,
};
use crate::error::{Error, Result};
use crate::manifest::Manifest;
use crate::numeric::{self, NumericSummary};
use crate::symbolic::RationalFunction;
use crate::tensor::ops;
use crate::tensor::{index_label, Chart, CovariantTensor, Symmetry};

/// Tensors addressable by name in `eval` and in golden blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorName {
    Metric,
    Christoffel,
    Riemann,
    Ricci,
    RicciSquared,
    Scalar,
    NablaRiemann,
    NablaRicci,
    GWedgeG,
    GWedgeS,
    SWedgeS,
    Derived(DerivedKind),
}

impl TensorName {
    pub const ALL: [TensorName; 15] = [
        TensorName::Metric,
        TensorName::Christoffel,
        TensorName::Riemann,
        TensorName::Ricci,
        TensorName::RicciSquared,
        TensorName::Scalar,
        TensorName::NablaRiemann,
        TensorName::NablaRicci,
        TensorName::GWedgeG,
        TensorName::GWedgeS,
        TensorName::SWedgeS,
        TensorName::Derived(DerivedKind::Conformal),
        TensorName::Derived(DerivedKind::Projective),
        TensorName::Derived(DerivedKind::Concircular),
        TensorName::Derived(DerivedKind::Conharmonic),
    ];

    /// Short symbol used in golden keys.
    pub fn symbol(self) -> &'static str {
        match self {
            TensorName::Metric => "g",
            TensorName::Christoffel => "Gamma",
            TensorName::Riemann => "R",
            TensorName::Ricci => "S",
            TensorName::RicciSquared => "S2",
            TensorName::Scalar => "kappa",
            TensorName::NablaRiemann => "nablaR",
            TensorName::NablaRicci => "nablaS",
            TensorName::GWedgeG => "gg",
            TensorName::GWedgeS => "gS",
            TensorName::SWedgeS => "SS",
            TensorName::Derived(DerivedKind::Conformal) => "C",
            TensorName::Derived(DerivedKind::Projective) => "P",
            TensorName::Derived(DerivedKind::Concircular) => "W",
            TensorName::Derived(DerivedKind::Conharmonic) => "K",
        }
    }

    pub fn long_name(self) -> &'static str {
        match self {
            TensorName::Metric => "metric",
            TensorName::Christoffel => "christoffel",
            TensorName::Riemann => "riemann",
            TensorName::Ricci => "ricci",
            TensorName::RicciSquared => "ricci-squared",
            TensorName::Scalar => "scalar",
            TensorName::NablaRiemann => "nabla-riemann",
            TensorName::NablaRicci => "nabla-ricci",
            TensorName::GWedgeG => "g-wedge-g",
            TensorName::GWedgeS => "g-wedge-s",
            TensorName::SWedgeS => "s-wedge-s",
            TensorName::Derived(DerivedKind::Conformal) => "conformal",
            TensorName::Derived(DerivedKind::Projective) => "projective",
            TensorName::Derived(DerivedKind::Concircular) => "concircular",
            TensorName::Derived(DerivedKind::Conharmonic) => "conharmonic",
        }
    }

    /// Components of the named object as `(index label, value)` pairs,
    /// all of them (zeros included) in lexicographic index order. The
    /// Christoffel symbols are listed as `Γ^a_bc` under label `abc`.
    pub fn components(self, b: &CurvatureBundle) -> Result<Vec<(String, RationalFunction)>> {
        let from_tensor = |t: &CovariantTensor| {
            crate::tensor::index_tuples(t.dim(), t.rank())
                .map(|idx| (index_label(&idx), t.get(&idx).clone()))
                .collect()
        };
        Ok(match self {
            TensorName::Metric => from_tensor(b.g()),
            TensorName::Christoffel => {
                let n = b.dim();
                crate::tensor::index_tuples(n, 3)
                    .map(|idx| (index_label(&idx), b.gamma.get(idx[0], idx[1], idx[2]).clone()))
                    .collect()
            }
            TensorName::Riemann => from_tensor(&b.riemann),
            TensorName::Ricci => from_tensor(b.s()),
            TensorName::RicciSquared => from_tensor(b.s2()),
            TensorName::Scalar => vec![(String::new(), b.kappa().clone())],
            TensorName::NablaRiemann => from_tensor(&b.nabla_riemann),
            TensorName::NablaRicci => from_tensor(&b.nabla_ricci),
            TensorName::GWedgeG => from_tensor(&b.g_wedge_g),
            TensorName::GWedgeS => from_tensor(&b.g_wedge_s),
            TensorName::SWedgeS => from_tensor(&b.s_wedge_s),
            TensorName::Derived(kind) => from_tensor(&b.derived(kind)?),
        })
    }
}

impl fmt::Display for TensorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.long_name())
    }
}

impl FromStr for TensorName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        TensorName::ALL
            .into_iter()
            .find(|t| t.symbol() == s || t.long_name() == lower)
            .or(match lower.as_str() {
                "r" => Some(TensorName::Riemann),
                "s" => Some(TensorName::Ricci),
                "gamma" => Some(TensorName::Christoffel),
                "kappa" => Some(TensorName::Scalar),
                _ => None,
            })
            .ok_or_else(|| Error::UnknownTensor(s.to_string()))
    }
}

/// Exact component values at a rational point.
pub fn eval_point(b: &CurvatureBundle, name: TensorName, point: &[BigRational]) -> Result<Vec<(String, BigRational)>> {
    if point.len() != b.dim() {
        return Err(Error::InvalidArgument(format!(
            "point has {} coordinates, expected {}",
            point.len(),
            b.dim()
        )));
    }
    name.components(b)?
        .into_iter()
        .map(|(label, v)| Ok((label, v.eval(point)?)))
        .collect()
}

/// Which detector groups [`analyze`] runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection {
    pub recurrent: bool,
    pub ricci_generalized: bool,
    pub hgk: bool,
    pub wgk: bool,
    pub sgk: bool,
    pub qgk: bool,
    pub roter: bool,
    pub einstein: bool,
    pub semisymmetry: bool,
    pub theorems: bool,
}

impl Selection {
    pub fn all() -> Self {
        Selection {
            recurrent: true,
            ricci_generalized: true,
            hgk: true,
            wgk: true,
            sgk: true,
            qgk: true,
            roter: true,
            einstein: true,
            semisymmetry: true,
            theorems: true,
        }
    }

    fn none() -> Self {
        Selection {
            recurrent: false,
            ricci_generalized: false,
            hgk: false,
            wgk: false,
            sgk: false,
            qgk: false,
            roter: false,
            einstein: false,
            semisymmetry: false,
            theorems: false,
        }
    }

    /// Comma separated list drawn from
    /// `k, gk, hgk, wgk, sgk, qgk, roter, einstein, semisym, theorems`.
    pub fn parse_list(list: &str) -> Result<Self> {
        let mut s = Selection::none();
        for item in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match item.to_ascii_lowercase().as_str() {
                "k" => s.recurrent = true,
                "gk" | "s-gk" => s.ricci_generalized = true,
                "hgk" => s.hgk = true,
                "wgk" => s.wgk = true,
                "sgk" => s.sgk = true,
                "qgk" => s.qgk = true,
                "roter" => s.roter = true,
                "einstein" => s.einstein = true,
                "semisym" => s.semisymmetry = true,
                "theorems" => s.theorems = true,
                "all" => s = Selection::all(),
                other => return Err(Error::InvalidArgument(format!("unknown structure '{other}'"))),
            }
        }
        Ok(s)
    }
}

impl Default for Selection {
    fn default() -> Self {
        Selection::all()
    }
}

#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    pub selection: Selection,
    /// Target of the rank-four structure conditions.
    pub target: Option<DerivedKind>,
    pub flip_sign: bool,
    pub step: f64,
    pub tolerance: f64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            selection: Selection::all(),
            target: None,
            flip_sign: false,
            step: numeric::DEFAULT_STEP,
            tolerance: numeric::DEFAULT_TOLERANCE,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ManifestEcho {
    pub coordinates: Vec<String>,
    pub positive: Vec<String>,
    pub metric: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<String>>,
    pub points: Vec<String>,
}

impl ManifestEcho {
    fn new(m: &Manifest) -> Self {
        ManifestEcho {
            coordinates: m.coordinates.clone(),
            positive: m.positive.clone(),
            metric: m
                .metric
                .iter()
                .map(|(&(i, j), v)| (format!("{}{}", i + 1, j + 1), v.clone()))
                .collect(),
            eta: m.eta.clone(),
            points: m.points.clone(),
        }
    }
}

/// Nonzero components keyed by one-based index label.
pub type ComponentTable = BTreeMap<String, String>;

fn table(t: &CovariantTensor) -> ComponentTable {
    t.component_table().into_iter().collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureSummary {
    pub riemann: ComponentTable,
    pub ricci: ComponentTable,
    pub scalar: String,
    pub nabla_riemann: ComponentTable,
    pub g_wedge_g: ComponentTable,
    pub g_wedge_s: ComponentTable,
    pub s_wedge_s: ComponentTable,
}

#[derive(Clone, Debug, Serialize)]
pub struct NullVector {
    pub parameter: String,
    pub vector: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectionReport {
    pub direction: usize,
    pub status: crate::linsolve::SolveStatus,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub particular: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub null_basis: Vec<NullVector>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub verified: bool,
    /// Same number of free parameters in every direction.
    pub uniform_null_dim: bool,
    /// Directionwise particular solutions assemble into rational one-forms.
    pub glues_globally: bool,
    pub directions: Vec<DirectionReport>,
}

fn family_report(f: &SolutionFamily, chart: &Chart) -> FamilyReport {
    let names = f.parameter_names();
    let fmt = |v: &[RationalFunction]| -> BTreeMap<String, String> {
        f.labels
            .iter()
            .zip(v)
            .map(|(l, c)| (l.clone(), chart.format(c)))
            .collect()
    };
    let directions = f
        .directions
        .iter()
        .enumerate()
        .map(|(l, d)| DirectionReport {
            direction: l + 1,
            status: d.status,
            particular: if d.is_consistent() {
                fmt(&d.particular)
            } else {
                BTreeMap::new()
            },
            null_basis: d
                .null_basis
                .iter()
                .zip(&names[l])
                .map(|(v, p)| NullVector {
                    parameter: p.clone(),
                    vector: fmt(v),
                })
                .collect(),
        })
        .collect();
    FamilyReport {
        verified: f.verified,
        uniform_null_dim: f.uniform_null_dim(),
        glues_globally: f.is_consistent(),
        directions,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Properness {
    pub recurrent: Verdict,
    pub hgk: Verdict,
    pub wgk: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureEntry {
    pub verdict: Verdict,
    pub target: String,
    pub basis: Vec<String>,
    pub family: FamilyReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub substructures: Option<Properness>,
}

impl StructureEntry {
    fn new(o: &StructureOutcome, chart: &Chart) -> Self {
        StructureEntry {
            verdict: o.verdict,
            target: o.target.clone(),
            basis: o.basis.clone(),
            family: family_report(&o.family, chart),
            substructures: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RoterEntry {
    pub status: crate::linsolve::SolveStatus,
    pub proper: bool,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub coefficients: BTreeMap<String, String>,
    pub free_parameters: usize,
}

impl RoterEntry {
    pub fn status_is_consistent(&self) -> bool {
        self.status != crate::linsolve::SolveStatus::Inconsistent
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Ein2Entry {
    pub holds: bool,
    pub proper: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a2: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a3: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiEinsteinEntry {
    pub alpha: String,
    pub beta: String,
    pub eta: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EinsteinEntry {
    pub einstein: bool,
    pub ein2: Ein2Entry,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quasi_einstein: Option<QuasiEinsteinEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SemisymmetryEntry {
    pub semisymmetric: bool,
    pub pseudosymmetric: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct StructureReport {
    pub target: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub recurrent_like: BTreeMap<String, StructureEntry>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub skipped: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roter: Option<RoterEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub einstein: Option<EinsteinEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semisymmetry: Option<SemisymmetryEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub manifest: ManifestEcho,
    pub curvature: CurvatureSummary,
    pub structures: StructureReport,
    pub theorems: Vec<NamedCheck>,
    pub excluded_loci: Vec<String>,
    pub numeric_checks: Option<NumericSummary>,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn failed_checks(&self) -> Vec<&NamedCheck> {
        self.theorems.iter().filter(|c| c.failed()).collect()
    }
}

/// Every detector outcome on one bundle, kept in memory for theorem checks.
pub struct Analysis {
    pub bundle: CurvatureBundle,
    pub target_name: String,
    pub outcomes: BTreeMap<&'static str, StructureOutcome>,
    pub skipped: BTreeMap<String, String>,
    pub roter: Option<RoterOutcome>,
    pub einstein: Option<EinsteinClass>,
    pub semisymmetry: Option<SemisymmetryOutcome>,
    pub eta: Option<CovariantTensor>,
}

fn target_tensor(b: &CurvatureBundle, target: Option<DerivedKind>) -> Result<(CovariantTensor, String)> {
    Ok(match target {
        None => (b.riemann.clone(), "R".into()),
        Some(k) => (b.derived(k)?, k.letter().to_string()),
    })
}

/// Runs the selected detectors on a bundle.
pub fn run_detectors(
    b: CurvatureBundle,
    manifest_eta: Option<CovariantTensor>,
    selection: &Selection,
    target: Option<DerivedKind>,
) -> Result<Analysis> {
    let (t, name) = target_tensor(&b, target)?;
    let mut outcomes = BTreeMap::new();
    let mut skipped = BTreeMap::new();
    let need_einstein = selection.einstein || selection.qgk || selection.theorems;
    let einstein = need_einstein.then(|| detect_einstein_class(&b));
    let eta = manifest_eta.or_else(|| {
        einstein
            .as_ref()
            .and_then(|e| e.quasi_einstein.as_ref())
            .filter(|q| !q.eta.is_zero())
            .map(|q| q.eta.clone())
    });
    let rank4 = [
        (selection.recurrent, "recurrent", StructureKind::Recurrent),
        (selection.hgk, "hgk", StructureKind::Hgk),
        (selection.wgk, "wgk", StructureKind::Wgk),
        (selection.sgk || selection.theorems, "sgk", StructureKind::Sgk),
    ];
    for (on, key, kind) in rank4 {
        if on {
            outcomes.insert(key, detect_structure(kind, &t, &name, &b, None)?);
        }
    }
    if selection.qgk {
        match &eta {
            Some(eta) => {
                outcomes.insert("qgk", detect_structure(StructureKind::Qgk, &t, &name, &b, Some(eta))?);
                outcomes.insert(
                    "qgk-like",
                    detect_structure(StructureKind::QgkLike, &t, &name, &b, Some(eta))?,
                );
            }
            None => {
                skipped.insert("qgk".into(), "no eta supplied and none recovered".into());
            }
        }
    }
    if selection.recurrent || selection.theorems {
        outcomes.insert(
            "ricci-recurrent",
            detect_structure(StructureKind::Recurrent, b.s(), "S", &b, None)?,
        );
    }
    if selection.ricci_generalized || selection.theorems {
        outcomes.insert(
            "ricci-generalized-recurrent",
            detect_structure(StructureKind::Generalized, b.s(), "S", &b, None)?,
        );
    }
    let roter = (selection.roter || selection.theorems).then(|| detect_roter(&b));
    let semisymmetry = if selection.semisymmetry || selection.theorems {
        Some(check_semisymmetry(&b.riemann, &b)?)
    } else {
        None
    };
    Ok(Analysis {
        bundle: b,
        target_name: name,
        outcomes,
        skipped,
        roter,
        einstein,
        semisymmetry,
        eta,
    })
}

fn with_member(name: &str, k: usize) -> impl Fn(NamedCheck) -> NamedCheck + '_ {
    move |mut c| {
        c.name = format!("{}[{name} member {k}]", c.name);
        c
    }
}

fn embed_check(name: &str, sub: Option<&StructureOutcome>, b: &CurvatureBundle, place: &[usize]) -> Result<NamedCheck> {
    let Some(sub) = sub.filter(|o| o.holds()) else {
        return Ok(NamedCheck::new(name, CheckStatus::NotExercised));
    };
    let chart = b.g().chart();
    let forms = sub.family.particular_forms(chart);
    let zero = CovariantTensor::zeros(chart.clone(), 1, Symmetry::OneForm);
    let mut full = vec![zero.clone(), zero.clone(), zero.clone(), zero];
    for (f, &slot) in forms.into_iter().zip(place) {
        full[slot] = f;
    }
    let f = SgkForms::from_slice(&full)?;
    Ok(NamedCheck::from_bool(
        name,
        detect::sgk_combination(&b.riemann, &f, b)? == b.nabla_riemann,
    ))
}

impl Analysis {
    fn rr_sgk(&self) -> Option<&StructureOutcome> {
        // the theorem checks always concern the curvature tensor itself
        self.outcomes.get("sgk").filter(|o| o.target == "R")
    }

    /// Identity checks, transfers and specialization results.
    pub fn theorem_checks(&self) -> Result<Vec<NamedCheck>> {
        let b = &self.bundle;
        let chart = b.g().chart();
        let mut out = Vec::new();
        let owned;
        let sgk = match self.rr_sgk() {
            Some(o) => o,
            None => {
                owned = detect_structure(StructureKind::Sgk, &b.riemann, "R", b, None)?;
                &owned
            }
        };
        let semis = match &self.semisymmetry {
            Some(s) => s.clone(),
            None => check_semisymmetry(&b.riemann, b)?,
        };
        let rdr = &semis.r_dot_t;
        if sgk.holds() {
            for (k, params) in sgk.family.test_members().iter().enumerate() {
                let f = SgkForms::from_slice(&sgk.family.member_forms(chart, params))?;
                let tag = with_member("sgk", k);
                out.push(tag(NamedCheck::from_bool(
                    "structure-equation",
                    detect::sgk_combination(&b.riemann, &f, b)? == b.nabla_riemann,
                )));
                out.extend(verify_sgk_identities(&f, b)?.into_iter().map(&tag));
                out.push(tag(NamedCheck::from_bool(
                    "rdotr-expansion",
                    verify_rdotr_expansion(&f, b, rdr)?,
                )));
            }
            out.push(check_semisymmetry_sufficiency(&sgk.family, b, rdr)?);
        } else {
            for name in ["sgk-identities", "rdotr-expansion", "semisymmetry-sufficiency"] {
                out.push(NamedCheck::new(name, CheckStatus::NotApplicable).with_detail(format!("sgk {}", sgk.verdict)));
            }
        }

        out.push(embed_check(
            "recurrent-embeds-in-sgk",
            self.outcomes.get("recurrent").filter(|o| o.target == "R"),
            b,
            &[0],
        )?);
        out.push(embed_check(
            "hgk-embeds-in-sgk",
            self.outcomes.get("hgk").filter(|o| o.target == "R"),
            b,
            &[0, 2],
        )?);
        out.push(embed_check(
            "wgk-embeds-in-sgk",
            self.outcomes.get("wgk").filter(|o| o.target == "R"),
            b,
            &[0, 1],
        )?);

        let gk = self.outcomes.get("ricci-generalized-recurrent");
        let owned_gk;
        let gk = match gk {
            Some(o) => o,
            None => {
                owned_gk = detect_structure(StructureKind::Generalized, b.s(), "S", b, None)?;
                &owned_gk
            }
        };
        if sgk.holds() && gk.holds() && b.dim() >= 3 {
            let bar = gk.family.particular_forms(chart);
            let f = SgkForms::from_slice(&sgk.family.particular_forms(chart))?;
            for kind in DerivedKind::ALL {
                let forms = if kind == DerivedKind::Projective {
                    member_with_pi(&sgk.family, chart, &bar[0])
                } else {
                    Some(f.clone())
                };
                match forms {
                    Some(forms) => out.extend(transfer_sgk(kind, &forms, &bar[0], &bar[1], b)?.checks),
                    None => out.push(
                        NamedCheck::new(format!("{}-transfer", kind.letter()), CheckStatus::NotApplicable)
                            .with_detail("no family member shares the Ricci recurrence form"),
                    ),
                }
            }
        } else {
            out.push(
                NamedCheck::new("transfers", CheckStatus::NotApplicable).with_detail(format!(
                    "sgk {}, ricci generalized recurrent {}",
                    sgk.verdict, gk.verdict
                )),
            );
        }

        let einstein_owned;
        let einstein = match &self.einstein {
            Some(e) => e,
            None => {
                einstein_owned = detect_einstein_class(b);
                &einstein_owned
            }
        };
        let roter_owned;
        let roter = match &self.roter {
            Some(r) => r,
            None => {
                roter_owned = detect_roter(b);
                &roter_owned
            }
        };
        let rec_owned;
        let recurrent = match self.outcomes.get("recurrent").filter(|o| o.target == "R") {
            Some(r) => r,
            None => {
                rec_owned = detect_structure(StructureKind::Recurrent, &b.riemann, "R", b, None)?;
                &rec_owned
            }
        };
        out.extend(verify_specialization_theorems(
            b,
            &SpecializationInputs {
                sgk,
                ricci_generalized: gk,
                recurrent,
                einstein,
                roter,
            },
        )?);
        Ok(out)
    }

    pub fn structure_report(&self) -> StructureReport {
        let chart = self.bundle.g().chart();
        let mut rl: BTreeMap<String, StructureEntry> = self
            .outcomes
            .iter()
            .map(|(k, o)| (k.to_string(), StructureEntry::new(o, chart)))
            .collect();
        if let Some(sgk) = rl.get_mut("sgk") {
            let v = |k: &str| self.outcomes.get(k).map(|o| o.verdict);
            if let (Some(r), Some(h), Some(w)) = (v("recurrent"), v("hgk"), v("wgk")) {
                sgk.substructures = Some(Properness {
                    recurrent: r,
                    hgk: h,
                    wgk: w,
                });
            }
        }
        let roter = self.roter.as_ref().map(|r| RoterEntry {
            status: r.solution.status,
            proper: r.proper,
            coefficients: if r.holds() {
                ["n1", "n2", "n3"]
                    .iter()
                    .zip(&r.solution.particular)
                    .map(|(k, v)| (k.to_string(), chart.format(v)))
                    .collect()
            } else {
                BTreeMap::new()
            },
            free_parameters: r.solution.null_basis.len(),
        });
        let einstein = self.einstein.as_ref().map(|e| {
            let coeffs = e.ein2.coefficients();
            EinsteinEntry {
                einstein: e.einstein,
                ein2: Ein2Entry {
                    holds: e.ein2.holds(),
                    proper: e.ein2.proper(),
                    a2: coeffs.as_ref().map(|c| chart.format(&c.0)),
                    a3: coeffs.as_ref().map(|c| chart.format(&c.1)),
                },
                quasi_einstein: e.quasi_einstein.as_ref().map(|q| QuasiEinsteinEntry {
                    alpha: chart.format(&q.alpha),
                    beta: chart.format(&q.beta),
                    eta: q.eta.components().iter().map(|c| chart.format(c)).collect(),
                }),
            }
        });
        let semisymmetry = self.semisymmetry.as_ref().map(|s| SemisymmetryEntry {
            semisymmetric: s.semisymmetric,
            pseudosymmetric: s.pseudosymmetric,
            l: s.l.as_ref().map(|l| chart.format(l)),
        });
        StructureReport {
            target: self.target_name.clone(),
            recurrent_like: std::mem::take(&mut rl),
            skipped: self.skipped.clone(),
            roter,
            einstein,
            semisymmetry,
        }
    }

    /// Metric determinant, metric denominators and elimination pivots.
    pub fn excluded_loci(&self) -> Vec<String> {
        let b = &self.bundle;
        let chart = b.g().chart();
        let mut sources: Vec<&RationalFunction> = vec![b.metric.det()];
        sources.extend(b.g().components().iter());
        for o in self.outcomes.values() {
            sources.extend(o.family.pivots());
        }
        if let Some(r) = &self.roter {
            sources.extend(r.solution.pivots.iter());
        }
        if let Some(e) = &self.einstein {
            sources.extend(e.ein2.monic.pivots.iter());
        }
        let loci = detect::pivot_loci(sources.into_iter(), chart);
        loci.into_iter().collect()
    }
}

fn curvature_summary(b: &CurvatureBundle) -> CurvatureSummary {
    CurvatureSummary {
        riemann: table(&b.riemann),
        ricci: table(b.s()),
        scalar: b.g().chart().format(b.kappa()),
        nabla_riemann: table(&b.nabla_riemann),
        g_wedge_g: table(&b.g_wedge_g),
        g_wedge_s: table(&b.g_wedge_s),
        s_wedge_s: table(&b.s_wedge_s),
    }
}

pub fn build_bundle(m: &Manifest, flip_sign: bool) -> Result<CurvatureBundle> {
    CurvatureBundle::with_sign(m.metric_data()?, flip_sign)
}

/// Full analysis of a manifest.
pub fn analyze(m: &Manifest, opts: &AnalyzeOptions) -> Result<ReportDocument> {
    let b = build_bundle(m, opts.flip_sign)?;
    let eta = m.eta_form(b.g().chart())?;
    let points = m.sample_points()?;
    let numeric_checks = if points.is_empty() {
        None
    } else {
        Some(numeric::numeric_crosscheck(&b, &points, opts.step, opts.tolerance)?)
    };
    let curvature = curvature_summary(&b);
    let analysis = run_detectors(b, eta, &opts.selection, opts.target)?;
    let theorems = if opts.selection.theorems {
        analysis.theorem_checks()?
    } else {
        Vec::new()
    };
    Ok(ReportDocument {
        manifest: ManifestEcho::new(m),
        curvature,
        structures: analysis.structure_report(),
        excluded_loci: analysis.excluded_loci(),
        theorems,
        numeric_checks,
    })
}

/// Golden component comparison; keys are `<symbol>_<digits>` or a bare
/// scalar symbol.
pub fn check_golden(m: &Manifest, b: &CurvatureBundle) -> Result<NamedCheck> {
    if m.golden.is_empty() {
        return Ok(NamedCheck::new("golden-values", CheckStatus::NotExercised));
    }
    let chart = b.g().chart();
    let mut mismatches = Vec::new();
    let mut cache: BTreeMap<&'static str, Vec<(String, RationalFunction)>> = BTreeMap::new();
    for (key, expr) in &m.golden {
        let (sym, digits) = key.split_once('_').unwrap_or((key.as_str(), ""));
        let name: TensorName = sym.parse()?;
        let comps = match cache.get(name.symbol()) {
            Some(c) => c,
            None => {
                let c = name.components(b)?;
                cache.entry(name.symbol()).or_insert(c)
            }
        };
        let expected = chart.parse(expr)?;
        match comps.iter().find(|(l, _)| l == digits) {
            Some((_, v)) if *v == expected => {}
            Some((_, v)) => mismatches.push(format!("{key}: computed {}", chart.format(v))),
            None => return Err(Error::InvalidIndex(format!("golden key '{key}' names no component"))),
        }
    }
    let check = NamedCheck::from_bool("golden-values", mismatches.is_empty());
    Ok(if mismatches.is_empty() {
        check.with_detail(format!("{} components", m.golden.len()))
    } else {
        check.with_detail(mismatches.join("; "))
    })
}

fn first_bianchi(r: &CovariantTensor) -> bool {
    crate::tensor::index_tuples(r.dim(), 4).all(|i| {
        let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
        (&(r.get(&[a, b, c, d]) + r.get(&[b, c, a, d])) + r.get(&[c, a, b, d])).is_zero()
    })
}

fn second_bianchi(dr: &CovariantTensor) -> bool {
    crate::tensor::index_tuples(dr.dim(), 5).all(|i| {
        let (a, b, c, d, e) = (i[0], i[1], i[2], i[3], i[4]);
        (&(dr.get(&[a, b, c, d, e]) + dr.get(&[b, e, c, d, a])) + dr.get(&[e, a, c, d, b])).is_zero()
    })
}

/// Symmetric polynomial test tensor `A_ij = x_i x_j + δ_ij`.
pub fn probe_symmetric(chart: &Arc<Chart>) -> CovariantTensor {
    CovariantTensor::from_fn(chart.clone(), 2, Symmetry::Symmetric2, |idx| {
        let p = &RationalFunction::var(idx[0]) * &RationalFunction::var(idx[1]);
        if idx[0] == idx[1] {
            &p + &RationalFunction::one()
        } else {
            p
        }
    })
}

/// Structural identities of the curvature computation on one bundle.
pub fn structural_checks(b: &CurvatureBundle) -> Result<Vec<NamedCheck>> {
    let g = b.g();
    let mut out = vec![
        NamedCheck::from_bool("curvature-symmetries", b.riemann.check_symmetry().is_ok()),
        NamedCheck::from_bool("first-bianchi", first_bianchi(&b.riemann)),
        NamedCheck::from_bool("second-bianchi", second_bianchi(&b.nabla_riemann)),
        NamedCheck::from_bool("metric-parallel", covariant_derivative(g, &b.gamma).is_zero()),
        NamedCheck::from_bool("r-dot-g", ops::curvature_action(&b.riemann, g, &b.metric)?.is_zero()),
    ];
    let c = b.derived(DerivedKind::Conformal)?;
    let traces_vanish = [(0, 3), (0, 2), (1, 2), (1, 3)]
        .iter()
        .map(|&(s1, s2)| ops::contract(&c, s1, s2, &b.metric).map(|t| t.is_zero()))
        .collect::<Result<Vec<_>>>()?;
    out.push(NamedCheck::from_bool(
        "conformal-trace-free",
        traces_vanish.iter().all(|&x| x),
    ));

    let mut nabla_commutes = true;
    let mut action_commutes = true;
    for a in [b.s().clone(), probe_symmetric(g.chart())] {
        let na = covariant_derivative(&a, &b.gamma);
        let ga = ops::kulkarni_nomizu(g, &a)?;
        nabla_commutes &= covariant_derivative(&ga, &b.gamma) == ops::wedge_with(g, &na)?;
        let wa = ops::wedge_vector(&a, &b.metric)?;
        nabla_commutes &=
            covariant_derivative(&wa, &b.gamma) == ops::wedge_vector(&na, &b.metric)?.permute(&[0, 1, 3, 4, 2])?;
        let ra = ops::curvature_action(&b.riemann, &a, &b.metric)?;
        action_commutes &= ops::curvature_action(&b.riemann, &ga, &b.metric)? == ops::wedge_with(g, &ra)?;
        action_commutes &= ops::curvature_action(&b.riemann, &wa, &b.metric)?
            == ops::wedge_vector(&ra, &b.metric)?.permute(&[0, 1, 4, 5, 2, 3])?;
    }
    out.push(NamedCheck::from_bool("nabla-commutes-with-wedges", nabla_commutes));
    out.push(NamedCheck::from_bool(
        "curvature-action-commutes-with-wedges",
        action_commutes,
    ));
    Ok(out)
}

/// The verification battery behind the `verify` command.
pub fn verify_suite(m: &Manifest, flip_sign: bool) -> Result<Vec<NamedCheck>> {
    let b = build_bundle(m, flip_sign)?;
    let mut out = vec![check_golden(m, &b)?];
    out.extend(structural_checks(&b)?);
    let points = m.sample_points()?;
    if points.is_empty() {
        out.push(NamedCheck::new("numeric-crosscheck", CheckStatus::NotExercised));
    } else {
        let s = numeric::numeric_crosscheck(&b, &points, numeric::DEFAULT_STEP, numeric::DEFAULT_TOLERANCE)?;
        out.push(
            NamedCheck::from_bool("numeric-crosscheck", s.passed).with_detail(format!(
                "{} points, max relative error {:.3e}",
                s.points, s.max_relative_error
            )),
        );
    }
    let eta = m.eta_form(b.g().chart())?;
    let analysis = run_detectors(b, eta, &Selection::all(), None)?;
    for (key, o) in &analysis.outcomes {
        out.push(NamedCheck::from_bool(
            format!("{key}-resubstitution"),
            o.family.verified,
        ));
    }
    out.extend(analysis.theorem_checks()?);
    Ok(out)
}
