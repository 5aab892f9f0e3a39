//! Scaling studies: kernel time against tree size for both suffix array
//! builders, and prediction time against support-set size and input size.
//!
//! Every timing is the median of several runs after one discarded warm-up.
//! Calls shorter than [`MIN_SAMPLE`] are repeated within a run and averaged.
//! The runs of all points of a ladder are interleaved, so slow phases of the
//! machine spread over every point instead of skewing a few.

use std::fmt;
use std::hint::black_box;
use std::time::{Duration, Instant};

use crate::esa::Builder;
use crate::kernel::{subpath_kernel_with, KernelParams};
use crate::predict::{predict_direct, MasterIndex, SupportSet};
use crate::tree::{random_tree, Tree};
use crate::Result;

/// Shortest wall time a single timed run aims for.
pub const MIN_SAMPLE: Duration = Duration::from_millis(20);

/// Median of `runs` timings of `f`, in seconds per call.
pub fn median_time(runs: usize, mut f: impl FnMut()) -> f64 {
    median_times(runs, &mut [&mut f])[0]
}

/// Median seconds per call of each function, timing them in rounds.
pub fn median_times(runs: usize, fs: &mut [&mut dyn FnMut()]) -> Vec<f64> {
    let inner: Vec<usize> = fs
        .iter_mut()
        .map(|f| {
            let start = Instant::now();
            f();
            let once = start.elapsed().max(Duration::from_nanos(100));
            (MIN_SAMPLE.as_secs_f64() / once.as_secs_f64()).ceil().clamp(1.0, 1e6) as usize
        })
        .collect();
    let mut times = vec![Vec::with_capacity(runs); fs.len()];
    for _ in 0..runs.max(1) {
        for (k, f) in fs.iter_mut().enumerate() {
            let start = Instant::now();
            for _ in 0..inner[k] {
                f();
            }
            times[k].push(start.elapsed().as_secs_f64() / inner[k] as f64);
        }
    }
    times.iter_mut().map(|t| median(t)).collect()
}

pub fn median(xs: &mut [f64]) -> f64 {
    assert!(!xs.is_empty());
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Median times of one method over a size ladder.
#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    /// What the sizes count (`nodes`, `support_trees`, ...).
    pub axis: String,
    pub sizes: Vec<usize>,
    pub seconds: Vec<f64>,
    pub runs: usize,
}

impl Series {
    pub fn slope(&self) -> f64 {
        let xs: Vec<f64> = self.sizes.iter().map(|&s| s as f64).collect();
        loglog_slope(&xs, &self.seconds)
    }

    /// Slowest over fastest median.
    pub fn max_min_ratio(&self) -> f64 {
        let max = self.seconds.iter().copied().fold(f64::MIN, f64::max);
        let min = self.seconds.iter().copied().fold(f64::MAX, f64::min);
        max / min
    }

    pub fn last(&self) -> f64 {
        *self.seconds.last().expect("nonempty series")
    }
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub series: Vec<Series>,
}

impl BenchReport {
    pub fn get(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "series\taxis\tsize\tmedian_seconds\truns")?;
        for s in &self.series {
            for (size, t) in s.sizes.iter().zip(&s.seconds) {
                writeln!(f, "{}\t{}\t{}\t{:.6e}\t{}", s.name, s.axis, size, t, s.runs)?;
            }
        }
        for s in &self.series {
            writeln!(
                f,
                "# {} slope {:.4} max/min {:.4}",
                s.name,
                s.slope(),
                s.max_min_ratio()
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct KernelBench {
    pub sizes: Vec<usize>,
    pub sigma: usize,
    pub lambda: f64,
    pub seed: u64,
    pub runs: usize,
}

impl Default for KernelBench {
    fn default() -> Self {
        Self {
            sizes: (12..=17).map(|k| 1 << k).collect(),
            sigma: 5,
            lambda: 0.5,
            seed: 1,
            runs: 5,
        }
    }
}

/// Kernel of two random trees of each size, once per builder. Series are
/// named after the builders: `linear` and `reference`.
pub fn bench_kernel(cfg: &KernelBench) -> Result<BenchReport> {
    let params = KernelParams::new(cfg.lambda)?;
    let pairs = cfg
        .sizes
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let seed = cfg.seed.wrapping_add(2 * k as u64);
            Ok((random_tree(n, cfg.sigma, seed)?, random_tree(n, cfg.sigma, seed + 1)?))
        })
        .collect::<Result<Vec<(Tree, Tree)>>>()?;
    let builders = [Builder::Linear, Builder::Reference];
    let mut jobs: Vec<Box<dyn FnMut()>> = Vec::new();
    for builder in builders {
        for (a, b) in &pairs {
            jobs.push(Box::new(move || {
                black_box(subpath_kernel_with(a, b, params, builder));
            }));
        }
    }
    let seconds = run_jobs(cfg.runs, &mut jobs);
    let series = builders
        .iter()
        .zip(seconds.chunks(pairs.len()))
        .map(|(builder, seconds)| Series {
            name: builder.to_string(),
            axis: "nodes".into(),
            sizes: cfg.sizes.clone(),
            seconds: seconds.to_vec(),
            runs: cfg.runs,
        })
        .collect();
    Ok(BenchReport { series })
}

fn run_jobs(runs: usize, jobs: &mut [Box<dyn FnMut() + '_>]) -> Vec<f64> {
    let mut fs: Vec<&mut dyn FnMut()> = jobs.iter_mut().map(|j| &mut **j as &mut dyn FnMut()).collect();
    median_times(runs, &mut fs)
}

#[derive(Debug, Clone)]
pub struct PredictBench {
    /// Support-set sizes for the flatness study.
    pub support_sizes: Vec<usize>,
    /// Input size used while the support set grows.
    pub input_size: usize,
    /// Input sizes for the input-scaling study.
    pub input_sizes: Vec<usize>,
    /// Support-set size used while the input grows.
    pub fixed_support: usize,
    /// Support trees have between these many nodes.
    pub support_tree_nodes: (usize, usize),
    pub sigma: usize,
    pub lambda: f64,
    pub seed: u64,
    pub runs: usize,
}

impl Default for PredictBench {
    fn default() -> Self {
        Self {
            support_sizes: (1..=10).map(|k| 100 * k).collect(),
            input_size: 1000,
            input_sizes: vec![250, 500, 1000, 2000, 4000, 8000],
            fixed_support: 100,
            support_tree_nodes: (8, 24),
            sigma: 5,
            lambda: 0.5,
            seed: 7,
            runs: 5,
        }
    }
}

/// `m` random support trees with α = 1 and no bias.
pub fn random_support(m: usize, nodes: (usize, usize), sigma: usize, seed: u64) -> Result<SupportSet> {
    let span = (nodes.1 - nodes.0 + 1) as u64;
    let items = (0..m as u64)
        .map(|k| {
            let s = seed.wrapping_mul(1_000_003).wrapping_add(k);
            let n = nodes.0 + (s.wrapping_mul(0x9e37_79b9_7f4a_7c15) >> 32) as usize % span as usize;
            random_tree(n, sigma, s).map(|t| (t, 1.0))
        })
        .collect::<Result<Vec<(Tree, f64)>>>()?;
    SupportSet::new(items, 0.0)
}

/// Series `predict` and `direct` over support-set sizes, and `predict_input`
/// over input sizes at a fixed support set.
pub fn bench_predict(cfg: &PredictBench) -> Result<BenchReport> {
    let params = KernelParams::new(cfg.lambda)?;
    let input = random_tree(cfg.input_size, cfg.sigma, cfg.seed ^ 0x5eed)?;
    let support = cfg
        .support_sizes
        .iter()
        .map(|&m| random_support(m, cfg.support_tree_nodes, cfg.sigma, cfg.seed))
        .collect::<Result<Vec<SupportSet>>>()?;
    let indexes: Vec<MasterIndex> = support.iter().map(|sv| MasterIndex::build(sv, params)).collect();

    let sv = random_support(cfg.fixed_support, cfg.support_tree_nodes, cfg.sigma, cfg.seed)?;
    let fixed = MasterIndex::build(&sv, params);
    let inputs = cfg
        .input_sizes
        .iter()
        .enumerate()
        .map(|(k, &n)| random_tree(n, cfg.sigma, cfg.seed.wrapping_add(31 * k as u64 + 1)))
        .collect::<Result<Vec<Tree>>>()?;

    let mut fast: Vec<Box<dyn FnMut()>> = Vec::new();
    let mut by_input: Vec<Box<dyn FnMut()>> = Vec::new();
    for idx in &indexes {
        let input = &input;
        fast.push(Box::new(move || {
            black_box(idx.predict(input));
        }));
    }
    for t in &inputs {
        let fixed = &fixed;
        by_input.push(Box::new(move || {
            black_box(fixed.predict(t));
        }));
    }
    let fast = run_jobs(cfg.runs, &mut fast);
    let by_input = run_jobs(cfg.runs, &mut by_input);
    let mut direct: Vec<Box<dyn FnMut()>> = Vec::new();
    for sv in &support {
        let input = &input;
        direct.push(Box::new(move || {
            black_box(predict_direct(sv, input, params));
        }));
    }
    let direct = run_jobs(cfg.runs, &mut direct);

    let series = |name: &str, axis: &str, sizes: &[usize], seconds: Vec<f64>| Series {
        name: name.into(),
        axis: axis.into(),
        sizes: sizes.to_vec(),
        seconds,
        runs: cfg.runs,
    };
    Ok(BenchReport {
        series: vec![
            series("predict", "support_trees", &cfg.support_sizes, fast),
            series("direct", "support_trees", &cfg.support_sizes, direct),
            series("predict_input", "input_nodes", &cfg.input_sizes, by_input),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_laws() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(1.5)).collect();
        assert!((loglog_slope(&xs, &ys) - 1.5).abs() < 1e-12);
        let flat = [2.0; 4];
        assert!(loglog_slope(&xs, &flat).abs() < 1e-12);
    }

    #[test]
    fn medians() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn small_reports_are_well_formed() {
        let cfg = KernelBench {
            sizes: vec![64, 128, 256, 512],
            runs: 1,
            ..KernelBench::default()
        };
        let r = bench_kernel(&cfg).unwrap();
        assert_eq!(r.series.len(), 2);
        assert_eq!(r.get("linear").unwrap().sizes, cfg.sizes);
        assert!(r.get("reference").unwrap().seconds.iter().all(|&t| t > 0.0));
        assert!(r.to_string().contains("# linear slope"));

        let sv = random_support(20, (8, 24), 5, 3).unwrap();
        assert_eq!(sv.len(), 20);
        assert!(sv.trees().all(|t| (8..=24).contains(&t.len())));
        assert_eq!(
            random_support(20, (8, 24), 5, 3)
                .unwrap()
                .trees()
                .map(|t| t.len())
                .collect::<Vec<_>>(),
            sv.trees().map(|t| t.len()).collect::<Vec<_>>()
        );
    }
}
