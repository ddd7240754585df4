//! Instance generators and the approximation-ratio benchmark.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use dmbst::approx::{nkry, pkry};
use dmbst::oracle::{exact_dmbst, MAX_EXACT_POINTS};
use dmbst::{mst, Error, Metric, Point3, PointSet, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Generator {
    /// Independent uniform points in the unit cube.
    UniformCube,
    /// Integer lattice points in raster order (ignores the seed).
    Grid,
    /// Gaussian clusters around uniform centers.
    Cluster,
}

pub fn generate(generator: Generator, n: usize, seed: u64, metric: Metric) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::Parameter("instance size must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Point3> = match generator {
        Generator::UniformCube => {
            (0..n).map(|_| Point3::new(rng.random(), rng.random(), rng.random())).collect()
        }
        Generator::Grid => {
            let side = (1..).find(|s: &usize| s.pow(3) >= n).expect("some side fits");
            (0..n).map(|i| Point3::new((i % side) as f64, ((i / side) % side) as f64, (i / side / side) as f64)).collect()
        }
        Generator::Cluster => {
            let centers: Vec<Point3> =
                (0..n.div_ceil(5)).map(|_| Point3::new(rng.random(), rng.random(), rng.random())).collect();
            let spread = Normal::new(0.0, 0.05).expect("positive deviation");
            (0..n)
                .map(|_| {
                    let c = centers[rng.random_range(0..centers.len())];
                    c + Point3::new(spread.sample(&mut rng), spread.sample(&mut rng), spread.sample(&mut rng))
                })
                .collect()
        }
    };
    PointSet::new(points, metric)
}

/// Runs NKRY and every valid PKRY block count for each degree bound and writes CSV rows.
///
/// Ratios are taken against the exact degree-bounded optimum when the instance is small enough,
/// otherwise against the MST bottleneck; the `baseline` column says which.
pub fn bench_csv(ps: &PointSet, deltas: &[usize], timing: bool) -> Result<String> {
    if ps.len() < 2 {
        return Err(Error::InvalidInput("benchmarks need at least two points".into()));
    }
    if deltas.iter().any(|&d| d < 3) {
        return Err(Error::Parameter("benchmark degree bounds must be at least 3".into()));
    }
    let mut out = String::from("algorithm,delta,k,n,bottleneck,baseline,baseline_value,ratio");
    if timing {
        out.push_str(",time_ms");
    }
    out.push('\n');
    let mst_value = mst(ps)?.bottleneck()?;
    for &delta in deltas {
        let (baseline, base_value) = if ps.len() <= MAX_EXACT_POINTS {
            ("exact", exact_dmbst(ps, delta)?.bottleneck_value)
        } else {
            ("mst", mst_value)
        };
        let mut row = |name: &str, k: Option<usize>, run: &dyn Fn() -> Result<f64>| -> Result<()> {
            let start = Instant::now();
            let value = run()?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let k = k.map(|k| k.to_string()).unwrap_or_default();
            write!(
                out,
                "{name},{delta},{k},{},{},{baseline},{},{}",
                ps.len(),
                fmt12(value),
                fmt12(base_value),
                fmt12(value / base_value)
            )
            .expect("writing to a String");
            if timing {
                write!(out, ",{ms:.3}").expect("writing to a String");
            }
            out.push('\n');
            Ok(())
        };
        row("nkry", None, &|| Ok(nkry(ps, delta, 0)?.bottleneck_value))?;
        for k in 1..=delta - 2 {
            row("pkry", Some(k), &|| Ok(pkry(ps, delta, k, 0)?.bottleneck_value))?;
        }
    }
    Ok(out)
}

fn fmt12(x: f64) -> String {
    dmbst::io::round_sig(x, dmbst::io::OUTPUT_SIG_DIGITS).to_string()
}
