use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use subpath_core::bench::{bench_kernel, bench_predict, KernelBench, PredictBench};
use subpath_core::esa::{build_esa, suffix};
use subpath_core::fmt::format_g17;
use subpath_core::kernel::gram_matrix_with_threads;
use subpath_core::tree::parse_corpus;
use subpath_core::{
    random_tree, serialize_tree, subpath_kernel_oracle, subpath_kernel_with, Alphabet, Builder, KernelParams,
    MasterIndex, Model, Tree,
};

#[derive(Parser)]
#[command(
    name = "subpath",
    version,
    about = "Subpath kernels for rooted labeled unordered trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kernel of each pair of trees taken line by line from two files.
    Kernel {
        #[arg(long)]
        lambda: f64,
        /// Evaluate by explicit enumeration of shared subpaths.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value = "linear")]
        builder: Builder,
        a: PathBuf,
        b: PathBuf,
    },
    /// Lower triangle of the Gram matrix of a tree file.
    Gram {
        #[arg(long)]
        lambda: f64,
        /// Divide entry (i, j) by sqrt(K(i, i) K(j, j)).
        #[arg(long)]
        normalize: bool,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        file: PathBuf,
    },
    /// Suffix array of every tree in a file: rank, node, lcp, suffix.
    EsaDump {
        #[arg(long, default_value = "linear")]
        builder: Builder,
        file: PathBuf,
    },
    /// Predictions of a model on every tree in a file.
    Predict {
        #[arg(long)]
        model: PathBuf,
        trees: PathBuf,
    },
    /// Random trees, one per line.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        sigma: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Kernel time against tree size for both suffix array builders.
    BenchKernel {
        /// Sizes run from 2^min-log to 2^max-log nodes.
        #[arg(long, default_value_t = 12)]
        min_log: u32,
        #[arg(long, default_value_t = 17)]
        max_log: u32,
        #[arg(long, default_value_t = 5)]
        sigma: usize,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        runs: usize,
    },
    /// Prediction time against support-set size and input size.
    BenchPredict {
        #[arg(long, default_value_t = 5)]
        sigma: usize,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        runs: usize,
    },
}

/// A failure reported on stderr with exit status 2.
struct Failure(String);

impl From<subpath_core::Error> for Failure {
    fn from(e: subpath_core::Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn read_trees(path: &Path, alphabet: &mut Alphabet) -> Result<Vec<Tree>, Failure> {
    parse_corpus(&read(path)?, alphabet).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    match cli.command {
        Command::Kernel {
            lambda,
            oracle,
            builder,
            a,
            b,
        } => {
            let params = KernelParams::new(lambda)?;
            let mut alphabet = Alphabet::new();
            let xs = read_trees(&a, &mut alphabet)?;
            let ys = read_trees(&b, &mut alphabet)?;
            if xs.len() != ys.len() {
                return Err(Failure(format!(
                    "{} has {} trees but {} has {}",
                    a.display(),
                    xs.len(),
                    b.display(),
                    ys.len()
                )));
            }
            for (x, y) in xs.iter().zip(&ys) {
                let k = if oracle {
                    subpath_kernel_oracle(x, y, params)
                } else {
                    subpath_kernel_with(x, y, params, builder)
                };
                writeln!(out, "{}", format_g17(k))?;
            }
        }
        Command::Gram {
            lambda,
            normalize,
            jobs,
            file,
        } => {
            let params = KernelParams::new(lambda)?;
            let trees = read_trees(&file, &mut Alphabet::new())?;
            let mut gram = gram_matrix_with_threads(&trees, params, jobs)?;
            if normalize {
                gram = gram.normalized();
            }
            for i in 0..gram.len() {
                let row: Vec<String> = gram.row(i)[..=i].iter().map(|&x| format_g17(x)).collect();
                writeln!(out, "{}", row.join("\t"))?;
            }
        }
        Command::EsaDump { builder, file } => {
            let mut alphabet = Alphabet::new();
            let trees = read_trees(&file, &mut alphabet)?;
            for (k, t) in trees.iter().enumerate() {
                if k > 0 {
                    writeln!(out)?;
                }
                let esa = build_esa(t, builder);
                for r in 0..esa.len() {
                    let v = esa.node_at(r);
                    let mut line = format!("{r}\t{v}\t{}\t", esa.lcp()[r]);
                    for (j, l) in suffix(t, v).into_iter().enumerate() {
                        if j > 0 {
                            line.push('/');
                        }
                        let _ = write!(line, "{}", alphabet.name(l));
                    }
                    writeln!(out, "{line}")?;
                }
            }
        }
        Command::Predict { model, trees } => {
            let model = Model::parse(&read(&model)?).map_err(|e| Failure(format!("{}: {e}", model.display())))?;
            let mut alphabet = model.alphabet.clone();
            let inputs = read_trees(&trees, &mut alphabet)?;
            let idx = MasterIndex::build(&model.support, model.params);
            for t in &inputs {
                writeln!(out, "{}", format_g17(idx.predict(t)))?;
            }
        }
        Command::Gen { n, sigma, seed, count } => {
            let alphabet = Alphabet::synthetic(sigma);
            for k in 0..count as u64 {
                let t = random_tree(n, sigma, seed.wrapping_add(k))?;
                writeln!(out, "{}", serialize_tree(&t, &alphabet))?;
            }
        }
        Command::BenchKernel {
            min_log,
            max_log,
            sigma,
            lambda,
            seed,
            runs,
        } => {
            if min_log > max_log || max_log > 24 {
                return Err(Failure(format!("size range 2^{min_log}..2^{max_log} is not supported")));
            }
            let cfg = KernelBench {
                sizes: (min_log..=max_log).map(|k| 1 << k).collect(),
                sigma,
                lambda,
                seed,
                runs,
            };
            write!(out, "{}", bench_kernel(&cfg)?)?;
        }
        Command::BenchPredict {
            sigma,
            lambda,
            seed,
            runs,
        } => {
            let cfg = PredictBench {
                sigma,
                lambda,
                seed,
                runs,
                ..PredictBench::default()
            };
            write!(out, "{}", bench_predict(&cfg)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out).and_then(|()| out.flush().map_err(Failure::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
