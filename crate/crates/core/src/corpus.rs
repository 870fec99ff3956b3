//! Built-in example manifests.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::manifest::Manifest;

const PRODUCT_EXAMPLE: &str = include_str!("../corpus/product_example.tomlish");
const FLAT: &str = include_str!("../corpus/flat.tomlish");
const CONFORMAL_SPHERE: &str = include_str!("../corpus/conformal_sphere.tomlish");

/// Names accepted by [`corpus_manifest`], in listing order.
pub const CORPUS_NAMES: [&str; 5] = [
    "product_example",
    "flat",
    "conformal_sphere",
    "random_n3_seed7",
    "random_n4_seed11",
];

pub fn corpus_manifest(name: &str) -> Result<Manifest> {
    match name {
        "product_example" => Manifest::parse(PRODUCT_EXAMPLE, "product_example.tomlish"),
        "flat" => Manifest::parse(FLAT, "flat.tomlish"),
        "conformal_sphere" => Manifest::parse(CONFORMAL_SPHERE, "conformal_sphere.tomlish"),
        "random_n3_seed7" => Ok(random_polynomial_metric(3, 7)),
        "random_n4_seed11" => Ok(random_polynomial_metric(4, 11)),
        _ => Err(Error::InvalidArgument(format!(
            "unknown corpus entry '{name}' (available: {})",
            CORPUS_NAMES.join(", ")
        ))),
    }
}

fn random_monomial(rng: &mut ChaCha8Rng, n: usize, max_degree: u32) -> String {
    let degree = rng.gen_range(1..=max_degree);
    let mut factors: Vec<usize> = (0..degree).map(|_| rng.gen_range(0..n)).collect();
    factors.sort_unstable();
    factors
        .iter()
        .map(|i| format!("x{}", i + 1))
        .collect::<Vec<_>>()
        .join("*")
}

/// Diagonally dominant metric with sparse polynomial entries of degree at
/// most two: `c + m` on the diagonal and a few `±m` off it. Sample points
/// keep `|det g| ≥ 1`.
pub fn random_polynomial_metric(n: usize, seed: u64) -> Manifest {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut metric = BTreeMap::new();
    for i in 0..n {
        let c = rng.gen_range(2..=4);
        let m = random_monomial(&mut rng, n, 2);
        metric.insert((i, i), format!("{c} + {m}"));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let off = (n - 2).max(1);
    for _ in 0..off {
        let (i, j) = pairs[rng.gen_range(0..pairs.len())];
        let sign = if rng.gen_bool(0.5) { "" } else { "-" };
        let m = random_monomial(&mut rng, n, 1);
        metric.insert((i, j), format!("{sign}{m}"));
    }
    let mut manifest = Manifest {
        coordinates: (1..=n).map(|i| format!("x{i}")).collect(),
        positive: Vec::new(),
        metric,
        eta: None,
        points: Vec::new(),
        golden: Vec::new(),
    };
    let det = manifest
        .metric_data()
        .expect("diagonally dominant metric is nondegenerate")
        .det()
        .clone();
    while manifest.points.len() < 5 {
        let coords: Vec<(i64, i64)> = (0..n).map(|_| (rng.gen_range(-3..=3), rng.gen_range(1..=4))).collect();
        let x: Vec<f64> = coords.iter().map(|&(p, q)| p as f64 / q as f64).collect();
        if det.eval_f64(&x).abs() < 1.0 {
            continue;
        }
        let text = coords
            .iter()
            .map(|&(num, den)| BigRational::new(BigInt::from(num), BigInt::from(den)).to_string())
            .collect::<Vec<_>>()
            .join(", ");
        manifest.points.push(text);
    }
    manifest
}
