use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gsp_core::io as gio;
use gsp_core::sampling::{sample_residual, BandlimitedModel, SamplingSet};
use gsp_core::{
    apply_exact, detect_outliers, eigendecompose, gft, greedy_select, reconstruct, spectral_upper_bound,
    total_variation, ChebyshevFilter, FilterKernel, Graph, GraphSignal, GspError, Result, ShiftKind, ShiftOperator,
};

#[derive(Debug, Parser)]
#[command(name = "gsp", version, about = "Graph signal processing pipelines")]
pub struct Cli {
    /// Seed for every randomized step (power-iteration start vectors).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues in frequency order, with GFT coefficients of an optional signal.
    Spectrum {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        signal: Option<PathBuf>,
    },
    /// Filter a signal with a kernel given as JSON.
    Filter {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        signal: PathBuf,
        /// Path to a JSON filter specification.
        #[arg(long, conflicts_with = "filter_json", required_unless_present = "filter_json")]
        filter: Option<PathBuf>,
        /// Inline JSON filter specification, e.g. '{"kind":"heat","t":1.0}'.
        #[arg(long)]
        filter_json: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        /// Chebyshev series degree.
        #[arg(long, default_value_t = 30)]
        degree: usize,
        /// Also run the exact route and print the largest absolute difference.
        #[arg(long)]
        compare_exact: bool,
        /// Write the fitted Chebyshev coefficients (`k,c_k`) here.
        #[arg(long)]
        coefficients_out: Option<PathBuf>,
    },
    /// Greedy sampling-set selection for signals bandlimited to K frequencies.
    Sample {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(short = 'K', long = "bandwidth")]
        bandwidth: usize,
        #[arg(short = 'm', long = "samples")]
        samples: usize,
    },
    /// Least-squares reconstruction of a bandlimited signal from `node,value` samples.
    Reconstruct {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(short = 'K', long = "bandwidth")]
        bandwidth: usize,
        #[arg(long)]
        samples: PathBuf,
    },
    /// Nodes whose high-pass residual exceeds tau standard deviations.
    Outliers {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        signal: PathBuf,
        #[arg(long)]
        cutoff: f64,
        #[arg(long)]
        tau: f64,
    },
    /// Total variation of a signal with respect to the adjacency shift.
    Tv {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        signal: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Edge-list CSV with header `src,dst,weight`.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    directed: bool,
    #[arg(long, value_enum, default_value_t = Shift::Adjacency)]
    shift: Shift,
    /// Node count, when it exceeds the largest index in the edge list.
    #[arg(long)]
    nodes: Option<usize>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Shift {
    Adjacency,
    Laplacian,
    Normalized,
}

impl From<Shift> for ShiftKind {
    fn from(s: Shift) -> ShiftKind {
        match s {
            Shift::Adjacency => ShiftKind::Adjacency,
            Shift::Laplacian => ShiftKind::CombinatorialLaplacian,
            Shift::Normalized => ShiftKind::NormalizedLaplacian,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Chebyshev,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| GspError::Parse(format!("{}: {e}", path.display())))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

impl GraphArgs {
    fn load(&self) -> Result<(Graph, ShiftOperator)> {
        let g = gio::read_edge_list(open(&self.graph)?, self.directed, self.nodes)?;
        let op = ShiftOperator::new(&g, self.shift.into())?;
        Ok((g, op))
    }

    fn out(&self) -> Result<Box<dyn Write>> {
        output(self.out.as_deref())
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let seed = cli.seed;
    match cli.command {
        Command::Spectrum { graph, signal } => {
            let (g, op) = graph.load()?;
            let basis = eigendecompose(&op)?;
            let shat = match signal {
                Some(p) => Some(gft(&basis, &gio::read_signal(open(&p)?, g.node_count())?)?),
                None => None,
            };
            gio::write_spectrum(&basis, shat.as_ref(), graph.out()?)
        }
        Command::Filter { graph, signal, filter, filter_json, method, degree, compare_exact, coefficients_out } => {
            let (g, op) = graph.load()?;
            let s = gio::read_signal(open(&signal)?, g.node_count())?;
            let spec = match (filter, filter_json) {
                (Some(p), _) => std::fs::read_to_string(&p).map_err(|e| GspError::Parse(format!("{}: {e}", p.display())))?,
                (None, Some(text)) => text,
                (None, None) => return Err(GspError::Parse("a filter specification is required".into())),
            };
            let kernel = FilterKernel::from_json(&spec)?;
            let filtered = match method {
                Method::Exact => apply_exact(&eigendecompose(&op)?, &kernel, &s)?,
                Method::Chebyshev => {
                    let cheb = ChebyshevFilter::fit(&kernel, degree, spectral_upper_bound(&op, seed))?;
                    if let Some(p) = coefficients_out {
                        gio::write_chebyshev(&cheb, BufWriter::new(File::create(p)?))?;
                    }
                    cheb.apply(&op, &s)?
                }
            };
            gio::write_signal(&filtered, graph.out()?)?;
            if compare_exact {
                let exact = apply_exact(&eigendecompose(&op)?, &kernel, &s)?;
                println!("max_abs_difference,{}", filtered.max_abs_diff(&exact));
            }
            Ok(())
        }
        Command::Sample { graph, bandwidth, samples } => {
            let (_, op) = graph.load()?;
            let model = BandlimitedModel::new(&eigendecompose(&op)?, bandwidth)?;
            let set = greedy_select(&model, samples)?;
            gio::write_nodes(set.nodes(), true, graph.out()?)
        }
        Command::Reconstruct { graph, bandwidth, samples } => {
            let (g, op) = graph.load()?;
            let model = BandlimitedModel::new(&eigendecompose(&op)?, bandwidth)?;
            let mut pairs = gio::read_samples(open(&samples)?)?;
            pairs.sort_by_key(|p| p.0);
            let set = SamplingSet::new(pairs.iter().map(|p| p.0).collect(), g.node_count())?;
            let values: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let s = reconstruct(&model, &set, &values)?;
            gio::write_signal(&s, graph.out()?)?;
            println!("residual_norm,{}", sample_residual(&set, &s, &values)?);
            Ok(())
        }
        Command::Outliers { graph, signal, cutoff, tau } => {
            let (g, op) = graph.load()?;
            let s = gio::read_signal(open(&signal)?, g.node_count())?;
            let nodes = detect_outliers(&op, &s, cutoff, tau)?;
            gio::write_nodes(&nodes, false, graph.out()?)
        }
        Command::Tv { graph, signal } => {
            let (g, op) = graph.load()?;
            let s: GraphSignal = gio::read_signal(open(&signal)?, g.node_count())?;
            let tv = total_variation(&op, &s)?;
            let mut out = graph.out()?;
            writeln!(out, "norm,total_variation")?;
            writeln!(out, "l1,{tv}")?;
            out.flush()?;
            Ok(())
        }
    }
}
