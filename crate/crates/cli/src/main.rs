//! Command-line front end for daisy cubes: generation, stripping, embedding
//! recovery, verification, and benchmarking over stable file formats.
//!
//! Exit codes: 0 success, 2 usage, 3 size cap exceeded, 4 unreadable or
//! inconsistent files, 5 input not a daisy cube, 6 verification failure.

use std::fs::File;
use std::hint::black_box;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use daisy_core::{
    baseline_proper, build_with_cap, embed_isometric, family, is_isometric, is_proper,
    proper_embed, read_graph, read_labels, read_words, strip, structural_audit, DaisyError,
    EmbedError, Embedding, FamilyName, FormatError, GeneratorSet, Graph, GraphError,
    ProperEmbedding, VerifyError, DEFAULT_CLOSURE_CAP, DEFAULT_PAIRWISE_CAP,
};
use daisy_core::{write_graph, write_labels};

/// Daisy cube toolkit: build labeled instances, strip them into unlabeled
/// graphs, recover proper embeddings, and verify the results.
#[derive(Parser)]
#[command(name = "daisy", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a labeled daisy cube from a named family or a words file
    Gen(GenArgs),
    /// Permute a labeled instance into an unlabeled graph plus ground truth
    Strip(StripArgs),
    /// Recover an isometric labeling of an unlabeled daisy cube
    Embed(EmbedArgs),
    /// Recover a proper labeling; prints the minimal vertex and the shift
    Proper(ProperArgs),
    /// Check a labeling against its graph; exit 0 only if every check passes
    Verify(VerifyArgs),
    /// Time recovery algorithms across a width range; CSV on standard output
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Named family: hypercube, qminus, fibonacci, lucas, random-antichain
    #[arg(
        long,
        value_parser = parse_family,
        requires = "h",
        conflicts_with = "words_file",
        required_unless_present = "words_file"
    )]
    family: Option<FamilyName>,
    /// Width of the named family
    #[arg(long)]
    h: Option<usize>,
    /// Read generator words from this file instead (`-` for standard input)
    #[arg(long, conflicts_with = "h")]
    words_file: Option<PathBuf>,
    /// Generator seed, required by random-antichain
    #[arg(long)]
    seed: Option<u64>,
    /// Abort once the closure exceeds this many vertices
    #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
    cap: usize,
    /// Graph output path (`-` for standard output)
    #[arg(long)]
    out_graph: PathBuf,
    /// Labels output path (`-` for standard output)
    #[arg(long)]
    out_labels: PathBuf,
}

#[derive(Args)]
struct StripArgs {
    /// Graph input path (`-` for standard input)
    #[arg(long)]
    in_graph: PathBuf,
    /// Labels input path (`-` for standard input)
    #[arg(long)]
    in_labels: PathBuf,
    /// Permutation seed; 0 keeps vertex ids unchanged
    #[arg(long)]
    seed: u64,
    /// Permuted graph output path (`-` for standard output)
    #[arg(long)]
    out_graph: PathBuf,
    /// Ground-truth labels output path (`-` for standard output)
    #[arg(long)]
    out_truth: PathBuf,
}

#[derive(Args)]
struct EmbedArgs {
    /// Graph input path (`-` for standard input)
    #[arg(long)]
    in_graph: PathBuf,
    /// Labels output path (`-` for standard output)
    #[arg(long)]
    out_labels: PathBuf,
}

#[derive(Args)]
struct ProperArgs {
    /// Graph input path (`-` for standard input)
    #[arg(long)]
    in_graph: PathBuf,
    /// Labels output path (`-` for standard output)
    #[arg(long)]
    out_labels: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Graph input path (`-` for standard input)
    #[arg(long)]
    in_graph: PathBuf,
    /// Labels input path (`-` for standard input)
    #[arg(long)]
    in_labels: PathBuf,
    /// Which property to check
    #[arg(long, value_enum)]
    mode: VerifyMode,
    /// Vertex-count cap for the quadratic checks
    #[arg(long, default_value_t = DEFAULT_PAIRWISE_CAP)]
    cap: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyMode {
    /// Graph distance equals Hamming distance for all label pairs
    Isometric,
    /// Labels are distinct, downward closed, and edge-compatible
    Proper,
    /// Full structural audit against the generators derived from the labels
    Audit,
}

#[derive(Args)]
struct BenchArgs {
    /// Named family: hypercube, qminus, fibonacci, lucas, random-antichain
    #[arg(long, value_parser = parse_family)]
    family: FamilyName,
    /// Smallest width, inclusive
    #[arg(long)]
    h_min: usize,
    /// Largest width, inclusive
    #[arg(long)]
    h_max: usize,
    /// Comma-separated algorithms to time
    #[arg(long, value_enum, value_delimiter = ',', default_value = "linear")]
    algos: Vec<Algo>,
    /// Repetitions per measurement; the reported time is the median
    #[arg(long, default_value_t = 5)]
    reps: usize,
    /// Instance seed: stripping permutation, and generator choice for random-antichain
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Abort once a closure exceeds this many vertices
    #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
    cap: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    /// Single-rooted linear-time recovery
    Linear,
    /// Reference recovery trying every maximum-degree root
    Baseline,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Linear => "linear",
            Algo::Baseline => "baseline",
        }
    }
}

fn parse_family(s: &str) -> Result<FamilyName, String> {
    s.parse()
}

enum Failure {
    Usage(String),
    Cap(String),
    Format(String),
    NotDaisy(String),
    Verify(String),
}

impl Failure {
    fn exit(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Cap(_) => 3,
            Failure::Format(_) => 4,
            Failure::NotDaisy(_) => 5,
            Failure::Verify(_) => 6,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m)
            | Failure::Cap(m)
            | Failure::Format(m)
            | Failure::NotDaisy(m)
            | Failure::Verify(m) => m,
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Failure {
        Failure::Format(e.to_string())
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Failure {
        Failure::Format(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Format(e.to_string())
    }
}

impl From<EmbedError> for Failure {
    fn from(e: EmbedError) -> Failure {
        Failure::NotDaisy(e.to_string())
    }
}

impl From<DaisyError> for Failure {
    fn from(e: DaisyError) -> Failure {
        match e {
            DaisyError::CapExceeded { .. } => Failure::Cap(e.to_string()),
            DaisyError::SeedRequired(_) => Failure::Usage(e.to_string()),
            _ => Failure::Format(e.to_string()),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Failure {
        match e {
            VerifyError::TooLarge { .. } => Failure::Cap(e.to_string()),
            VerifyError::NotProper(_) => Failure::Verify(e.to_string()),
        }
    }
}

fn reader(path: &Path) -> Result<Box<dyn BufRead>, Failure> {
    if path.as_os_str() == "-" {
        return Ok(Box::new(BufReader::new(io::stdin())));
    }
    let f = File::open(path).map_err(|e| Failure::Format(format!("{}: {e}", path.display())))?;
    Ok(Box::new(BufReader::new(f)))
}

fn write_out(path: &Path, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), Failure> {
    let sink: Box<dyn Write> = if path.as_os_str() == "-" {
        Box::new(io::stdout().lock())
    } else {
        let f = File::create(path)
            .map_err(|e| Failure::Format(format!("{}: {e}", path.display())))?;
        Box::new(f)
    };
    let mut buf = BufWriter::new(sink);
    body(&mut buf)?;
    buf.flush()?;
    Ok(())
}

fn check_cover(g: &Graph, e: &Embedding) -> Result<(), Failure> {
    if e.vertex_count() != g.vertex_count() {
        return Err(Failure::Format(format!(
            "labels cover {} vertices but the graph has {}",
            e.vertex_count(),
            g.vertex_count()
        )));
    }
    Ok(())
}

fn run_gen(a: GenArgs) -> Result<(), Failure> {
    let gens = match (&a.family, &a.words_file) {
        (Some(name), None) => {
            let h = a.h.expect("clap ties --h to --family");
            if h == 0 {
                return Err(Failure::Usage("--h must be at least 1".into()));
            }
            family(*name, h, a.seed)?
        }
        (None, Some(path)) => read_words(reader(path)?)?,
        _ => unreachable!("clap enforces exactly one source"),
    };
    let dc = build_with_cap(&gens, a.cap)?;
    write_out(&a.out_graph, |w| write_graph(&dc.graph, w))?;
    write_out(&a.out_labels, |w| write_labels(&dc.labels, w))
}

fn run_strip(a: StripArgs) -> Result<(), Failure> {
    let g = read_graph(reader(&a.in_graph)?)?;
    let e = read_labels(reader(&a.in_labels)?)?;
    check_cover(&g, &e)?;
    let (bare, truth) = strip(&g, &e, a.seed);
    write_out(&a.out_graph, |w| write_graph(&bare, w))?;
    write_out(&a.out_truth, |w| write_labels(&truth, w))
}

fn run_embed(a: EmbedArgs) -> Result<(), Failure> {
    let g = read_graph(reader(&a.in_graph)?)?;
    let (e, _) = embed_isometric(&g)?;
    write_out(&a.out_labels, |w| write_labels(&e, w))
}

fn run_proper(a: ProperArgs) -> Result<(), Failure> {
    let g = read_graph(reader(&a.in_graph)?)?;
    let p = proper_embed(&g)?;
    write_out(&a.out_labels, |w| write_labels(&p.embedding, w))?;
    println!("minimal-vertex {}", p.minimal_vertex);
    println!("shift {}", p.shift);
    Ok(())
}

fn run_verify(a: VerifyArgs) -> Result<(), Failure> {
    let g = read_graph(reader(&a.in_graph)?)?;
    let e = read_labels(reader(&a.in_labels)?)?;
    check_cover(&g, &e)?;
    let (passed, report) = match a.mode {
        VerifyMode::Isometric => {
            let c = is_isometric(&g, &e, a.cap)?;
            (c.passed(), format!("{c}\n"))
        }
        VerifyMode::Proper => {
            let c = is_proper(&g, &e);
            (c.passed(), format!("{c}\n"))
        }
        VerifyMode::Audit => {
            let gens = GeneratorSet::new(e.labels().to_vec())?;
            let r = structural_audit(&g, &e, &gens, a.cap)?;
            (r.passed(), r.to_string())
        }
    };
    print!("{report}");
    if passed {
        Ok(())
    } else {
        Err(Failure::Verify("verification failed".into()))
    }
}

fn run_bench(a: BenchArgs) -> Result<(), Failure> {
    if a.h_min == 0 || a.h_min > a.h_max {
        return Err(Failure::Usage("--h-min must be at least 1 and at most --h-max".into()));
    }
    if a.reps == 0 {
        return Err(Failure::Usage("--reps must be at least 1".into()));
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    writeln!(out, "family,h,n,m,algo,ns,reps")?;
    for h in a.h_min..=a.h_max {
        let gens = family(a.family, h, Some(a.seed))?;
        let dc = build_with_cap(&gens, a.cap)?;
        let (g, _) = strip(&dc.graph, &dc.labels, a.seed);
        drop(dc);
        for &algo in &a.algos {
            let recover: fn(&Graph) -> Result<ProperEmbedding, EmbedError> = match algo {
                Algo::Linear => proper_embed,
                Algo::Baseline => baseline_proper,
            };
            // Surface recovery errors once, then time without re-checking.
            recover(&g)?;
            let ns = median_ns(a.reps, || {
                let _ = black_box(recover(black_box(&g)));
            });
            writeln!(
                out,
                "{},{h},{},{},{},{ns},{}",
                a.family,
                g.vertex_count(),
                g.edge_count(),
                algo.name(),
                a.reps
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Median wall time of `run` over `reps` repetitions, in nanoseconds.
fn median_ns(reps: usize, mut run: impl FnMut()) -> u128 {
    let mut times: Vec<u128> = (0..reps)
        .map(|_| {
            let t = Instant::now();
            run();
            t.elapsed().as_nanos()
        })
        .collect();
    times.sort_unstable();
    times[times.len() / 2]
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(a) => run_gen(a),
        Command::Strip(a) => run_strip(a),
        Command::Embed(a) => run_embed(a),
        Command::Proper(a) => run_proper(a),
        Command::Verify(a) => run_verify(a),
        Command::Bench(a) => run_bench(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("daisy: {}", f.message());
            ExitCode::from(f.exit())
        }
    }
}
