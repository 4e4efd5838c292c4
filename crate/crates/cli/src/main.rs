use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use tsc_core::baselines::dft::{dft_compress, DftSelection};
use tsc_core::baselines::paa::paa_compress;
use tsc_core::baselines::random::random_compress;
use tsc_core::baselines::reconstruct_payload;
use tsc_core::bench::{
    load_corpus, run_bench, synthetic_entries, target_bytes, BenchConfig, ByteEncoder, Method,
};
use tsc_core::io::{is_wav, read_signal, write_csv, write_wav};
use tsc_core::metrics::compression_fraction;
use tsc_core::{compute_diagram, decode_any, encode_dft_wire, encode_wire, Budget, Signal, Simplifier};

#[derive(Parser)]
#[command(name = "tsc", version, about = "Topological signal compression")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compress a WAV or CSV signal into a wire file.
    Compress(CompressArgs),
    /// Rebuild a full-length signal from a wire file.
    Reconstruct(ReconstructArgs),
    /// Write the persistence diagram of a signal as CSV.
    Diagram(DiagramArgs),
    /// Sweep a corpus over methods, compression fractions and noise levels.
    Bench(BenchArgs),
}

#[derive(Args)]
struct CompressArgs {
    input: PathBuf,
    output: PathBuf,
    #[arg(long, default_value = "tsc")]
    method: Method,
    /// Largest encoding that fits in this many bytes (any method).
    #[arg(long)]
    bytes: Option<usize>,
    /// Points to keep (tsc, random).
    #[arg(long)]
    points: Option<usize>,
    /// Cancel pairs with persistence below this (tsc).
    #[arg(long)]
    threshold: Option<f64>,
    /// Compression fraction in [0, 1]: point count for tsc, bytes otherwise.
    #[arg(long)]
    fraction: Option<f64>,
    /// DFT bins to keep (dft).
    #[arg(long)]
    coeffs: Option<usize>,
    /// Window length (paa).
    #[arg(long)]
    window: Option<usize>,
    /// Shuffle seed (random).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep the lowest DFT bins instead of the largest.
    #[arg(long)]
    first_k: bool,
}

#[derive(Args)]
struct ReconstructArgs {
    input: PathBuf,
    /// `.wav` writes 16-bit PCM and needs --rate; anything else is CSV.
    output: PathBuf,
    #[arg(long)]
    rate: Option<u32>,
}

#[derive(Args)]
struct DiagramArgs {
    input: PathBuf,
    /// Defaults to standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Selection {
    Largest,
    FirstK,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of WAV files.
    #[arg(long, conflicts_with = "synthetic", required_unless_present = "synthetic")]
    corpus: Option<PathBuf>,
    /// Use this many generated utterances instead of a corpus.
    #[arg(long)]
    synthetic: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "tsc,dft,paa,random")]
    methods: Vec<Method>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.9,0.95,0.99")]
    fractions: Vec<f64>,
    /// Noise standard deviations, in units of the standardized signal.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    noise: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Read at most this many corpus files.
    #[arg(long)]
    limit: Option<usize>,
    /// Leave the seconds column empty, for byte-identical reruns.
    #[arg(long)]
    no_timing: bool,
    #[arg(long)]
    no_apen: bool,
    #[arg(long)]
    no_dtw: bool,
    #[arg(long, value_enum, default_value = "first-k")]
    dft_selection: Selection,
}

/// Bad flag combinations that clap cannot express; exits like a clap error.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compress(a) => compress(a),
        Command::Reconstruct(a) => reconstruct(a),
        Command::Diagram(a) => diagram(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Usage>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn one_budget(a: &CompressArgs, allowed: &[&str]) -> anyhow::Result<&'static str> {
    let given: Vec<&'static str> = [
        ("bytes", a.bytes.is_some()),
        ("points", a.points.is_some()),
        ("threshold", a.threshold.is_some()),
        ("fraction", a.fraction.is_some()),
        ("coeffs", a.coeffs.is_some()),
        ("window", a.window.is_some()),
    ]
    .into_iter()
    .filter_map(|(name, set)| set.then_some(name))
    .collect();
    let method = a.method;
    match given.as_slice() {
        [one] if allowed.contains(one) => Ok(one),
        [one] => Err(usage(format!("--{one} does not apply to {method}"))),
        [] => Err(usage(format!(
            "{method} needs one of --{}",
            allowed.join(", --")
        ))),
        _ => Err(usage("give exactly one budget flag")),
    }
}

fn compress(a: CompressArgs) -> anyhow::Result<()> {
    if let Some(f) = a.fraction {
        if !(0.0..=1.0).contains(&f) {
            return Err(usage(format!("--fraction {f} is outside [0, 1]")));
        }
    }
    let signal = read_signal(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let n = signal.len();
    let selection = if a.first_k {
        DftSelection::FirstK
    } else {
        DftSelection::LargestMagnitude
    };
    let budget_flag = match a.method {
        Method::Tsc => one_budget(&a, &["bytes", "points", "threshold", "fraction"])?,
        Method::Dft => one_budget(&a, &["bytes", "fraction", "coeffs"])?,
        Method::Paa => one_budget(&a, &["bytes", "fraction", "window"])?,
        Method::Random => one_budget(&a, &["bytes", "fraction", "points"])?,
    };

    let (bytes, kept) = match (a.method, budget_flag) {
        (Method::Tsc, _) => {
            let budget = match budget_flag {
                "bytes" => Budget::Bytes(a.bytes.unwrap()),
                "points" => Budget::Points(a.points.unwrap()),
                "threshold" => Budget::PersistenceThreshold(a.threshold.unwrap()),
                _ => Budget::CompressionFraction(a.fraction.unwrap()),
            };
            let c = Simplifier::new(&signal).compress(budget)?;
            (encode_wire(&c), c.len())
        }
        (method, "bytes" | "fraction") => {
            let target = a.bytes.unwrap_or_else(|| target_bytes(n, a.fraction.unwrap()));
            ByteEncoder::new(&signal, &[method], selection, a.seed)
                .encode(method, target)?
                .ok_or_else(|| anyhow!("no {method} encoding fits in {target} bytes"))?
        }
        (Method::Dft, _) => {
            let c = dft_compress(&signal, a.coeffs.unwrap(), selection)?;
            (encode_dft_wire(&c), c.len())
        }
        (Method::Paa, _) => {
            let c = paa_compress(&signal, a.window.unwrap())?;
            (encode_wire(&c), c.len())
        }
        (Method::Random, _) => {
            let c = random_compress(&signal, a.points.unwrap(), a.seed)?;
            (encode_wire(&c), c.len())
        }
    };

    std::fs::write(&a.output, &bytes).with_context(|| format!("writing {}", a.output.display()))?;
    println!(
        "method={} kept={} bytes={} fraction={:.6}",
        a.method,
        kept,
        bytes.len(),
        compression_fraction(n, bytes.len())
    );
    Ok(())
}

fn reconstruct(a: ReconstructArgs) -> anyhow::Result<()> {
    let wav = is_wav(&a.output);
    if wav && a.rate.is_none() {
        return Err(usage("WAV output needs --rate; the wire format does not store it"));
    }
    let bytes = std::fs::read(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let rate = a.rate.map_or(1.0, f64::from);
    let payload = decode_any(&bytes, rate).with_context(|| format!("decoding {}", a.input.display()))?;
    let signal = reconstruct_payload(&payload)?;
    match a.rate {
        Some(r) if wav => write_wav(&a.output, signal.values(), r)?,
        _ => write_csv(&a.output, signal.values())?,
    }
    Ok(())
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn diagram(a: DiagramArgs) -> anyhow::Result<()> {
    let signal: Signal = read_signal(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let mut w = output(a.output.as_deref())?;
    compute_diagram(&signal).write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

fn bench(a: BenchArgs) -> anyhow::Result<()> {
    let corpus = match (&a.corpus, a.synthetic) {
        (Some(dir), _) => load_corpus(dir, a.limit)?,
        (None, Some(count)) => synthetic_entries(a.limit.map_or(count, |l| l.min(count)), a.seed),
        (None, None) => unreachable!("clap requires one of --corpus, --synthetic"),
    };
    if corpus.is_empty() {
        bail!("corpus is empty");
    }
    let cfg = BenchConfig {
        methods: a.methods,
        fractions: a.fractions,
        noise_multiples: a.noise,
        seed: a.seed,
        dft_selection: match a.dft_selection {
            Selection::Largest => DftSelection::LargestMagnitude,
            Selection::FirstK => DftSelection::FirstK,
        },
        apen: !a.no_apen,
        dtw: !a.no_dtw,
        timing: !a.no_timing,
    };
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(a.jobs).build()?;
    let report = pool.install(|| run_bench(&corpus, &cfg))?;
    let mut w = output(a.out.as_deref())?;
    report.write_csv(&mut w)?;
    w.flush()?;
    eprintln!(
        "{} files, {} detail rows, {} aggregate rows",
        corpus.len(),
        report.details.len(),
        report.aggregates.len()
    );
    Ok(())
}
