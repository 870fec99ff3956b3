//! Acceptance battery. Prints one line per criterion and exits nonzero when
//! any criterion fails.

use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use curvclass::corpus::{corpus_manifest, CORPUS_NAMES};
use curvclass::curvature::{covariant_derivative, CurvatureBundle, DerivedKind};
use curvclass::detect::{
    check_semisymmetry, detect_einstein_class, detect_roter, detect_structure, rdotr_expansion, sgk_combination,
    transfer_sgk, verify_sgk_identities, CheckStatus, SgkForms, SolutionFamily, StructureKind, Verdict,
};
use curvclass::linsolve::SolveStatus;
use curvclass::manifest::Manifest;
use curvclass::numeric;
use curvclass::report::{build_bundle, check_golden, structural_checks};
use curvclass::tensor::{ops, Chart, CovariantTensor};
use curvclass::RationalFunction;

const BIN: &str = env!("CARGO_BIN_EXE_curvclass");

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

const A: &str = "(x1^2*x3*x2^2 + x1^2*x4*x2^2 - (x1 + x2)*x3^2*x4^2)";
const B: &str = "(x1^2*(x3 + x4)*x2^2 + x3^2*x4^2*x2 + x1*x3^2*x4^2)";
const DPSI: &str = "(x1^4*x3^2*x2^4 + x1^4*x4^2*x2^4 + 2*x1^4*x3*x4*x2^4 - (x1 + x2)^2*x3^4*x4^4)";
const E: &str = "(-x1^2*x2^2*(x3 + x4) + x3^2*x4^2*(x1 + x2))";
const F: &str = "(-x1^2*(x3 + x4)*x2^2 + x3^2*x4^2*x2 + x1*x3^2*x4^2)";

/// Reference `Π_i`, `Φ_i`, `Ψ_i` with `Θ_i` substituted by `t`.
fn reference_sgk_forms(t: &str, i: usize) -> [String; 3] {
    let pi_den = format!("((x1 + x2)*(x3 + x4)*{B})");
    match i {
        0 => [
            format!("(8*{t}*{A}^2 - x1*x2^2*(x1 + 2*x2)*(x3 + x4)^2)/{pi_den}"),
            format!("2*x1*x2^2*x3^2*x4^2*(8*{t}*x1/(x3 + x4) - (x1 + 2*x2)/{A})/(x1 + x2)"),
            format!("x1*(x2*x3*x4)^2*(16*{t}*x1*{A} - (x1 + 2*x2)*(x3 + x4))/{DPSI}"),
        ],
        1 => [
            format!("(8*{t}*{A}^2 - x1^2*x2*(2*x1 + x2)*(x3 + x4)^2)/{pi_den}"),
            format!("2*x1^2*x2*x3^2*x4^2*(8*{t}*x2/(x3 + x4) - (2*x1 + x2)/{A})/(x1 + x2)"),
            format!("x2*(x1*x3*x4)^2*(16*{t}*x2*{A} - (2*x1 + x2)*(x3 + x4))/{DPSI}"),
        ],
        2 => [
            format!("(8*{t}*{A}^2 - (x1 + x2)^2*x3*x4^2*(x3 + 2*x4))/{pi_den}"),
            format!("2*x1^2*x2^2*x3*x4^2*(8*{t}*x3/(x1 + x2) + (x3 + 2*x4)/{A})/(x3 + x4)"),
            format!("x3*(x1*x2*x4)^2*(16*{t}*x3*{A} + (x1 + x2)*(x3 + 2*x4))/{DPSI}"),
        ],
        _ => [
            format!("(8*{t}*{A}^2 - (x1 + x2)^2*x3^2*x4*(2*x3 + x4))/{pi_den}"),
            format!("2*x1^2*x2^2*x3^2*x4*(8*{t}*x4/(x1 + x2) + (2*x3 + x4)/{A})/(x3 + x4)"),
            format!("x4*(x1*x2*x3)^2*(16*{t}*x4*{A} + (x1 + x2)*(2*x3 + x4))/{DPSI}"),
        ],
    }
}

fn reference_roter() -> [String; 3] {
    [
        format!("-(x1 + x2)*(x3 + x4)*{B}/(8*{E}^2)"),
        format!("-2*x1^2*x2^2*(x1 + x2)*x3^2*x4^2*(x3 + x4)/{E}^2"),
        format!("-2*x1^2*x2^2*x3^2*x4^2*{B}/{E}^2"),
    ]
}

fn reference_ricci_forms() -> [[String; 4]; 2] {
    [
        [
            "(x1 + 2*x2)*x3^2*x4^2/(x2^2*x3*x1^3 + x2^2*x4*x1^3 - (x1 + x2)*x3^2*x4^2*x1)".into(),
            "(2*x1 + x2)*x3^2*x4^2/(x1^2*x3*x2^3 + x1^2*x4*x2^3 - (x1 + x2)*x3^2*x4^2*x2)".into(),
            format!("x1^2*x2^2*(x3 + 2*x4)/(x3*{F})"),
            format!("x1^2*x2^2*(2*x3 + x4)/(x4*{F})"),
        ],
        [
            "(x1 + 2*x2)*(x3 + x4)/(4*x2^2*x3*x1^3 + 4*x2^2*x4*x1^3 - 4*(x1 + x2)*x3^2*x4^2*x1)".into(),
            "(2*x1 + x2)*(x3 + x4)/(4*x1^2*x3*x2^3 + 4*x1^2*x4*x2^3 - 4*(x1 + x2)*x3^2*x4^2*x2)".into(),
            format!("(x1 + x2)*(x3 + 2*x4)/(4*x3*{F})"),
            format!("(x1 + x2)*(2*x3 + x4)/(4*x4*{F})"),
        ],
    ]
}

struct Product {
    manifest: Manifest,
    bundle: CurvatureBundle,
    chart: Arc<Chart>,
}

impl Product {
    fn new() -> Self {
        let manifest = corpus_manifest("product_example").unwrap();
        let bundle = build_bundle(&manifest, false).unwrap();
        let chart = bundle.g().chart().clone();
        Product {
            manifest,
            bundle,
            chart,
        }
    }

    fn parse(&self, s: &str) -> Result<RationalFunction, String> {
        self.chart.parse(s).map_err(|e| format!("{e} in {s}"))
    }

    fn one_form(&self, comps: &[String]) -> Result<CovariantTensor, String> {
        let c = comps.iter().map(|s| self.parse(s)).collect::<Result<Vec<_>, _>>()?;
        CovariantTensor::one_form(self.chart.clone(), c).map_err(err)
    }

    /// Reference structure forms for the given `Θ`.
    fn reference_forms(&self, theta: &[&str; 4]) -> Result<SgkForms, String> {
        let rows: Vec<[String; 3]> = (0..4)
            .map(|i| reference_sgk_forms(&format!("({})", theta[i]), i))
            .collect();
        let col = |k: usize| rows.iter().map(|r| r[k].clone()).collect::<Vec<_>>();
        let th: Vec<String> = theta.iter().map(|s| s.to_string()).collect();
        SgkForms::from_slice(&[
            self.one_form(&col(0))?,
            self.one_form(&col(1))?,
            self.one_form(&col(2))?,
            self.one_form(&th)?,
        ])
        .map_err(err)
    }

    fn sgk(&self) -> Result<SolutionFamily, String> {
        let out = detect_structure(StructureKind::Sgk, &self.bundle.riemann, "R", &self.bundle, None).map_err(err)?;
        ensure(out.verdict == Verdict::Holds, format!("SGK verdict {}", out.verdict))?;
        Ok(out.family)
    }

    /// Family member whose free `Θ` equals `theta`.
    fn member(&self, family: &SolutionFamily, theta: &[&str; 4]) -> Result<SgkForms, String> {
        let params = theta
            .iter()
            .map(|t| Ok(vec![self.parse(t)?]))
            .collect::<Result<Vec<_>, String>>()?;
        SgkForms::from_slice(&family.member_forms(&self.chart, &params)).map_err(err)
    }
}

fn criterion_1(p: &Product) -> Outcome {
    ensure(
        p.manifest.golden.len() == 28,
        format!("{} golden entries", p.manifest.golden.len()),
    )?;
    let check = check_golden(&p.manifest, &p.bundle).map_err(err)?;
    ensure(
        check.status == CheckStatus::Pass,
        check.detail.clone().unwrap_or_default(),
    )?;
    Ok("28 components equal as canonical rational functions".into())
}

fn criterion_2(p: &Product) -> Outcome {
    let family = p.sgk()?;
    ensure(
        family.directions.iter().all(|d| d.is_consistent()),
        "inconsistent direction",
    )?;
    ensure(family.verified, "family does not re-substitute")?;
    let thetas = [["0", "0", "0", "0"], ["1", "x3", "x1*x2", "2"]];
    for theta in &thetas {
        let reference = p.reference_forms(theta)?;
        ensure(
            sgk_combination(&p.bundle.riemann, &reference, &p.bundle).map_err(err)? == p.bundle.nabla_riemann,
            format!("reference forms with theta = {theta:?} do not satisfy the equation"),
        )?;
        ensure(
            p.member(&family, theta)? == reference,
            format!("detected member with theta = {theta:?} differs from the reference forms"),
        )?;
    }
    Ok("consistent in all 4 directions; reference forms satisfy the equation for theta = 0 and a nonzero theta".into())
}

fn criterion_3(p: &Product) -> Outcome {
    let b = &p.bundle;
    for kind in [StructureKind::Hgk, StructureKind::Wgk] {
        let o = detect_structure(kind, &b.riemann, "R", b, None).map_err(err)?;
        ensure(
            o.family
                .directions
                .iter()
                .any(|d| d.status == SolveStatus::Inconsistent)
                && o.verdict == Verdict::Fails,
            format!("{kind} verdict {}", o.verdict),
        )?;
    }
    let rr = detect_structure(StructureKind::Recurrent, b.s(), "S", b, None).map_err(err)?;
    ensure(
        rr.verdict == Verdict::Fails,
        format!("Ricci recurrence verdict {}", rr.verdict),
    )?;
    ensure(!detect_einstein_class(b).einstein, "metric is Einstein")?;
    Ok("HGK, WGK and Ricci recurrence inconsistent; not Einstein".into())
}

fn criterion_4(p: &Product) -> Outcome {
    let r = detect_roter(&p.bundle);
    let coeffs = r.coefficients().ok_or("Roter system inconsistent")?;
    for (k, (got, expected)) in coeffs.iter().zip(reference_roter()).enumerate() {
        ensure(
            *got == p.parse(&expected)?,
            format!("N{} = {}", k + 1, p.chart.format(got)),
        )?;
    }
    ensure(r.proper && !coeffs[2].is_zero(), "N3 vanishes")?;
    Ok("N1, N2, N3 equal the reference formulas; N3 != 0".into())
}

fn criterion_5(p: &Product) -> Outcome {
    let b = &p.bundle;
    let o = detect_structure(StructureKind::Generalized, b.s(), "S", b, None).map_err(err)?;
    ensure(
        o.verdict == Verdict::Holds && o.family.is_unique(),
        "Ricci generalized recurrence not unique",
    )?;
    let forms = o.family.particular_forms(&p.chart);
    for (k, expected) in reference_ricci_forms().iter().enumerate() {
        ensure(
            forms[k] == p.one_form(expected)?,
            format!("form {} differs", ["pi_bar", "phi_bar"][k]),
        )?;
    }
    Ok("all eight components equal and the solution is unique".into())
}

fn criterion_6(p: &Product) -> Outcome {
    let b = &p.bundle;
    let rdr = check_semisymmetry(&b.riemann, b).map_err(err)?.r_dot_t;
    ensure(rdr.is_zero(), "R.R does not vanish")?;
    let family = p.sgk()?;
    let mut non_closed = 0;
    let members = [
        ["0", "0", "0", "0"],
        ["x2", "0", "0", "0"],
        ["x3", "x1*x4", "1", "x2^2"],
    ];
    for theta in &members {
        let f = p.member(&family, theta)?;
        if !ops::exterior_derivative(&f.theta).map_err(err)?.is_zero() {
            non_closed += 1;
        }
        ensure(
            rdotr_expansion(&f, b).map_err(err)?.is_zero(),
            format!("expansion nonzero for theta = {theta:?}"),
        )?;
    }
    ensure(non_closed >= 1, "no member with non-closed theta")?;
    Ok(format!(
        "R.R = 0; expansion vanishes for {} members ({non_closed} with non-closed theta)",
        members.len()
    ))
}

fn criterion_7(p: &Product, bundles: &[(&str, CurvatureBundle)]) -> Outcome {
    let mut tested = 0;
    let mut extra = vec![p.reference_forms(&["x2", "x1*x3", "0", "1"])?];
    extra.push(p.member(&p.sgk()?, &["x4", "0", "x1", "x2*x3"])?);
    for (name, b) in bundles {
        let out = detect_structure(StructureKind::Sgk, &b.riemann, "R", b, None).map_err(err)?;
        if !out.family.is_consistent() {
            continue;
        }
        let chart = b.g().chart();
        let mut members: Vec<SgkForms> = out
            .family
            .test_members()
            .iter()
            .map(|params| SgkForms::from_slice(&out.family.member_forms(chart, params)).map_err(err))
            .collect::<Result<_, _>>()?;
        if *name == "product_example" {
            members.append(&mut extra);
        }
        for f in &members {
            for check in verify_sgk_identities(f, b).map_err(err)? {
                ensure(
                    check.status == CheckStatus::Pass,
                    format!("{} fails on {name}", check.name),
                )?;
            }
            tested += 1;
        }
    }
    ensure(tested >= 3, format!("only {tested} members tested"))?;
    Ok(format!(
        "contracted, dkappa and both Bianchi contractions hold for {tested} members"
    ))
}

fn criterion_8(bundles: &[(&str, CurvatureBundle)]) -> Outcome {
    for (name, b) in bundles {
        for check in structural_checks(b).map_err(err)? {
            ensure(
                check.status == CheckStatus::Pass,
                format!("{} fails on {name}", check.name),
            )?;
        }
    }
    Ok(format!("all structural identities hold on {} metrics", bundles.len()))
}

fn criterion_9(manifests: &[(&str, Manifest)], bundles: &[(&str, CurvatureBundle)]) -> Outcome {
    let mut worst: f64 = 0.0;
    for ((name, m), (_, b)) in manifests.iter().zip(bundles) {
        let pts = numeric::random_points(b, &m.positive_indices(), 5, 20_240_917).map_err(err)?;
        let s = numeric::numeric_crosscheck(b, &pts, 1e-4, 1e-6).map_err(err)?;
        ensure(
            s.passed && s.points >= 5,
            format!(
                "{name}: max relative error {:.3e} at {:?}",
                s.max_relative_error, s.worst
            ),
        )?;
        worst = worst.max(s.max_relative_error);
    }
    Ok(format!("5 random points per metric, max relative error {worst:.3e}"))
}

fn criterion_10(p: &Product) -> Outcome {
    let b = &p.bundle;
    ensure(detect_roter(b).proper, "not proper Roter")?;
    let family = p.sgk()?;
    let gk = detect_structure(StructureKind::Generalized, b.s(), "S", b, None).map_err(err)?;
    ensure(gk.holds(), "Ricci generalized recurrence fails")?;
    let bar = gk.family.particular_forms(&p.chart);
    let f = SgkForms::from_slice(&family.particular_forms(&p.chart)).map_err(err)?;
    let t = transfer_sgk(DerivedKind::Concircular, &f, &bar[0], &bar[1], b).map_err(err)?;
    let forms = t.forms.ok_or("no W forms produced")?;
    let w = b.derived(DerivedKind::Concircular).map_err(err)?;
    let nabla_w = covariant_derivative(&w, &b.gamma);
    ensure(
        sgk_combination(&w, &forms, b).map_err(err)? == nabla_w,
        "W forms do not re-substitute against nabla W",
    )?;
    Ok("proper Roter; SGK and Ricci generalized recurrence both hold; W forms re-substitute".into())
}

fn run_cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    (out.status.code(), out.stdout)
}

fn criterion_11() -> Outcome {
    let (c1, a) = run_cli(&["analyze", "product_example", "--json", "-"]);
    let (c2, b) = run_cli(&["analyze", "product_example", "--json", "-"]);
    ensure(
        c1 == Some(0) && c2 == Some(0),
        format!("analyze exit codes {c1:?}, {c2:?}"),
    )?;
    ensure(a == b && !a.is_empty(), "JSON output differs between runs")?;
    let dir = tempfile::tempdir().map_err(err)?;
    let cases: [(&str, &str, i32); 4] = [
        (
            "dimension.tomlish",
            "[chart]\ndimension = 4\ncoordinates = [\"x\", \"y\", \"z\"]\n[metric]\ng11 = \"1\"\n",
            1,
        ),
        (
            "expression.tomlish",
            "[chart]\ndimension = 3\ncoordinates = [\"x\", \"y\", \"z\"]\n[metric]\ng11 = \"1 + * y\"\n",
            1,
        ),
        (
            "missing.tomlish",
            "[chart]\ndimension = 3\ncoordinates = [\"x\", \"y\", \"z\"]\n",
            1,
        ),
        (
            "degenerate.tomlish",
            "[chart]\ndimension = 3\ncoordinates = [\"x\", \"y\", \"z\"]\n[metric]\ng11 = \"1\"\ng22 = \"x\"\n",
            3,
        ),
    ];
    for (file, text, expected) in cases {
        let path = dir.path().join(file);
        std::fs::write(&path, text).map_err(err)?;
        let (code, _) = run_cli(&["analyze", path.to_str().unwrap()]);
        ensure(
            code == Some(expected),
            format!("{file}: exit {code:?}, expected {expected}"),
        )?;
    }
    let (code, _) = run_cli(&["verify", "product_example", "--flip-riemann-sign"]);
    ensure(code == Some(2), format!("flipped sign verify exit {code:?}"))?;
    let (code, _) = run_cli(&["frobnicate"]);
    ensure(code == Some(1), format!("unknown command exit {code:?}"))?;
    Ok("byte-identical JSON; exit codes 1, 1, 1, 3 on corrupted manifests and 2 on the flipped sign".into())
}

fn main() {
    let start = Instant::now();
    let p = Product::new();
    let manifests: Vec<(&str, Manifest)> = CORPUS_NAMES.iter().map(|&n| (n, corpus_manifest(n).unwrap())).collect();
    let bundles: Vec<(&str, CurvatureBundle)> = manifests
        .iter()
        .map(|(n, m)| (*n, build_bundle(m, false).unwrap()))
        .collect();

    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("golden components", Box::new(|| criterion_1(&p))),
        ("SGK reproduction", Box::new(|| criterion_2(&p))),
        ("negative verdicts", Box::new(|| criterion_3(&p))),
        ("Roter coefficients", Box::new(|| criterion_4(&p))),
        ("Ricci generalized recurrent forms", Box::new(|| criterion_5(&p))),
        ("semisymmetry", Box::new(|| criterion_6(&p))),
        ("theorem identities", Box::new(|| criterion_7(&p, &bundles))),
        ("structural invariants", Box::new(|| criterion_8(&bundles))),
        ("numeric oracle", Box::new(|| criterion_9(&manifests, &bundles))),
        ("Roter equivalence and W transfer", Box::new(|| criterion_10(&p))),
        ("determinism and exit codes", Box::new(criterion_11)),
    ];
    let mut failures = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}) [{secs:.1}s]", k + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} {name}: FAIL ({why}) [{secs:.1}s]", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass in {:.1}s",
        criteria.len() - failures,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
