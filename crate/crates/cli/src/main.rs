use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use tempfile::NamedTempFile;

use rmg::denoise::{denoiser_by_name, refine, strength_map, ModelParams, DEFAULT_LEVELS};
use rmg::harness::{
    antialias, evaluate_dir, report_csv, simulate_mesh, summarize, summary_csv, training_corpus,
    EvalConfig, SimConfig,
};
use rmg::interpolate::{reconstruct, Method};
use rmg::reliability::ReliabilityMap;
use rmg::training::{fit_parameters, ParamsStore, SearchGrids, TrainingResult};
use rmg::{psnr, Image, MeshSamples, PreparedMesh};

/// Reliability-based mesh-to-grid image reconstruction.
#[derive(Parser)]
#[command(name = "rmg", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Low-pass filter an image and draw a floating mesh from it.
    MeshSim(MeshSimArgs),
    /// Initial estimate of the grid image from a mesh.
    Reconstruct(ReconstructArgs),
    /// Full pipeline: initial estimate, reliability, strength map, refinement.
    Refine(RefineArgs),
    /// Fit strength-map parameters for one method on a directory of images.
    Train(TrainArgs),
    /// PSNR report over a directory of images.
    Evaluate(EvalArgs),
    /// PSNR between two images, in dB (`inf` when identical).
    Psnr {
        /// First image (binary PGM).
        a: PathBuf,
        /// Second image (binary PGM).
        b: PathBuf,
    },
}

#[derive(Args)]
struct MeshSimArgs {
    /// High-resolution source image (binary PGM).
    #[arg(long)]
    image: PathBuf,
    /// Downscale factor between source and reference grid.
    #[arg(long, default_value_t = 5)]
    phi: usize,
    /// Mesh samples per reference pixel, in (0, 1].
    #[arg(long)]
    ratio: f64,
    /// Sampling seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Treat the input as already filtered.
    #[arg(long)]
    no_antialias: bool,
    /// Mesh CSV output.
    #[arg(long)]
    mesh_out: PathBuf,
    /// Reference grid image output.
    #[arg(long)]
    reference_out: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    /// Mesh CSV (`x,y,value`).
    #[arg(long)]
    mesh: PathBuf,
    /// Grid width; taken from --init when omitted.
    #[arg(long)]
    width: Option<usize>,
    /// Grid height; taken from --init when omitted.
    #[arg(long)]
    height: Option<usize>,
    /// Initial estimation method: lin, nnb, idw or mbs.
    #[arg(long)]
    method: Method,
}

#[derive(Args)]
struct ReconstructArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Initial estimate output.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ModelArgs {
    /// Parameter file (`key=value`); shipped defaults for --method otherwise.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Override the strength scale.
    #[arg(long)]
    alpha: Option<f64>,
    /// Override the strength decay rate (negative weakens reliable pixels).
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Override the effective-data / flatness balance, in [0, 1].
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Args)]
struct RefineArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Precomputed initial estimate; reconstructed from the mesh otherwise.
    #[arg(long)]
    init: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
    /// Number of quantized strength levels.
    #[arg(long, default_value_t = DEFAULT_LEVELS)]
    levels: usize,
    /// Denoiser applied at each strength level.
    #[arg(long, default_value = "dct")]
    denoiser: String,
    /// Refined image output.
    #[arg(long)]
    out: PathBuf,
    /// Also write the reliability map (text header + three f32 planes).
    #[arg(long)]
    reliability_out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    /// Directory of high-resolution PGM images.
    #[arg(long)]
    corpus: PathBuf,
    /// Initial estimation method to train for.
    #[arg(long)]
    method: Method,
    /// Downscale factor between source and reference grid.
    #[arg(long, default_value_t = 5)]
    phi: usize,
    /// Sample ratios pooled into one training set.
    #[arg(long = "ratio", value_delimiter = ',', default_values_t = [0.2, 0.3, 0.5, 0.8])]
    ratios: Vec<f64>,
    /// Sampling seeds; each gives one mesh per image and ratio.
    #[arg(long = "seed", value_delimiter = ',', default_values_t = [0u64])]
    seeds: Vec<u64>,
    /// Denoiser used to build the gain surface.
    #[arg(long, default_value = "dct")]
    denoiser: String,
    /// Parameter file output.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Directory of high-resolution PGM images.
    #[arg(long)]
    corpus: PathBuf,
    /// Methods to evaluate (repeatable or comma-separated).
    #[arg(long = "method", value_delimiter = ',', default_values_t = Method::ALL.to_vec())]
    methods: Vec<Method>,
    /// Sample ratios (repeatable or comma-separated).
    #[arg(long = "ratio", value_delimiter = ',', default_values_t = [0.3, 0.5])]
    ratios: Vec<f64>,
    /// Sampling seeds (repeatable or comma-separated).
    #[arg(long = "seed", value_delimiter = ',', default_values_t = [0u64])]
    seeds: Vec<u64>,
    /// Parameter files; methods without one use the shipped defaults.
    #[arg(long)]
    params: Vec<PathBuf>,
    /// Downscale factor between source and reference grid.
    #[arg(long, default_value_t = 5)]
    phi: usize,
    /// Number of quantized strength levels.
    #[arg(long, default_value_t = DEFAULT_LEVELS)]
    levels: usize,
    /// Denoiser applied at each strength level.
    #[arg(long, default_value = "dct")]
    denoiser: String,
    /// Worker threads for independent cells.
    #[arg(long)]
    jobs: Option<usize>,
    /// Per-row report CSV.
    #[arg(long)]
    out: PathBuf,
    /// Per-(method, ratio) means.
    #[arg(long)]
    summary_out: Option<PathBuf>,
}

/// Outputs staged next to their destination and renamed into place only
/// once every output has been written.
#[derive(Default)]
struct Outputs {
    staged: Vec<(NamedTempFile, PathBuf)>,
}

impl Outputs {
    fn add(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        use std::io::Write;
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let mut tmp = NamedTempFile::new_in(dir)
            .with_context(|| format!("cannot write {}", path.display()))?;
        tmp.write_all(bytes)
            .and_then(|_| tmp.flush())
            .with_context(|| format!("cannot write {}", path.display()))?;
        self.staged.push((tmp, path.to_path_buf()));
        Ok(())
    }

    fn commit(self) -> Result<()> {
        for (tmp, path) in self.staged {
            tmp.persist(&path)
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
        Ok(())
    }
}

fn load_mesh(grid: &GridArgs, init: Option<&Image>) -> Result<MeshSamples> {
    let (width, height) = match (grid.width, grid.height, init) {
        (Some(w), Some(h), _) => (w, h),
        (None, None, Some(img)) => (img.width(), img.height()),
        (_, _, Some(_)) => bail!("give both --width and --height or neither"),
        _ => bail!("--width and --height are required without --init"),
    };
    if let Some(img) = init {
        if (img.width(), img.height()) != (width, height) {
            bail!(
                "initial estimate is {}x{} but the grid is {width}x{height}",
                img.width(),
                img.height()
            );
        }
    }
    let (mesh, dropped) = MeshSamples::load(&grid.mesh, width, height)?;
    if dropped > 0 {
        eprintln!("rmg: dropped {dropped} duplicate mesh positions");
    }
    Ok(mesh)
}

fn model_params(method: Method, args: &ModelArgs) -> Result<ModelParams> {
    let mut p = match &args.params {
        Some(path) => {
            let r = TrainingResult::load(path)
                .with_context(|| format!("reading {}", path.display()))?;
            if r.method != method.name() {
                bail!(
                    "{} holds parameters for {}, not {}",
                    path.display(),
                    r.method,
                    method.name()
                );
            }
            r.params
        }
        None => ParamsStore::shipped_defaults().get(method.name())?,
    };
    p.alpha = args.alpha.unwrap_or(p.alpha);
    p.beta = args.beta.unwrap_or(p.beta);
    p.lambda = args.lambda.unwrap_or(p.lambda);
    p.validate()?;
    Ok(p)
}

fn mesh_sim(a: MeshSimArgs) -> Result<()> {
    let cfg = SimConfig::new(a.phi, a.ratio, a.seed)?;
    let img = Image::load(&a.image)?;
    let filtered = if a.no_antialias {
        img
    } else {
        antialias(&img, a.phi)
    };
    let (mesh, reference) = simulate_mesh(&filtered, &cfg)?;
    let mut out = Outputs::default();
    out.add(&a.mesh_out, mesh.to_csv().as_bytes())?;
    if let Some(p) = &a.reference_out {
        out.add(p, &reference.encode_pgm())?;
    }
    out.commit()
}

fn reconstruct_cmd(a: ReconstructArgs) -> Result<()> {
    let mesh = load_mesh(&a.grid, None)?;
    let r = reconstruct(&PreparedMesh::new(mesh)?, a.grid.method)?;
    if r.fell_back {
        eprintln!("rmg: triangulation is degenerate, used NNB instead of LIN");
    }
    let mut out = Outputs::default();
    out.add(&a.out, &r.image.encode_pgm())?;
    out.commit()
}

fn refine_cmd(a: RefineArgs) -> Result<()> {
    let params = model_params(a.grid.method, &a.model)?;
    let denoiser = denoiser_by_name(&a.denoiser)?;
    let init = a.init.as_ref().map(Image::load).transpose()?;
    let mesh = load_mesh(&a.grid, init.as_ref())?;
    let prepared = PreparedMesh::new(mesh)?;
    let init = match init {
        Some(img) => img,
        None => reconstruct(&prepared, a.grid.method)?.image,
    };
    let rel = ReliabilityMap::compute(&prepared, params.lambda)?;
    let s = strength_map(&rel, &params)?;
    let refined = refine(&init, &s, a.levels, denoiser.as_ref())?;
    let mut out = Outputs::default();
    out.add(&a.out, &refined.encode_pgm())?;
    if let Some(p) = &a.reliability_out {
        out.add(p, &rel.to_bytes())?;
    }
    out.commit()
}

fn train_cmd(a: TrainArgs) -> Result<()> {
    let denoiser = denoiser_by_name(&a.denoiser)?;
    for &r in &a.ratios {
        SimConfig::new(a.phi, r, 0)?;
    }
    let images: Vec<Image> = rmg::harness::load_corpus(&a.corpus)?
        .into_iter()
        .map(|(_, img)| img)
        .collect();
    let items = training_corpus(&images, a.phi, &a.ratios, &a.seeds)?;
    let result = fit_parameters(&items, a.method, &SearchGrids::default(), denoiser.as_ref())?;
    let mut out = Outputs::default();
    out.add(&a.out, result.to_text().as_bytes())?;
    out.commit()
}

fn evaluate_cmd(a: EvalArgs) -> Result<()> {
    let denoiser = denoiser_by_name(&a.denoiser)?;
    let mut store = ParamsStore::shipped_defaults();
    for path in &a.params {
        let r =
            TrainingResult::load(path).with_context(|| format!("reading {}", path.display()))?;
        store.insert(&r.method, r.params);
    }
    let cfg = EvalConfig {
        phi: a.phi,
        methods: a.methods,
        ratios: a.ratios,
        seeds: a.seeds,
        levels: a.levels,
        jobs: a.jobs,
    };
    let rows = evaluate_dir(&a.corpus, &cfg, &store, denoiser.as_ref())?;
    let mut out = Outputs::default();
    out.add(&a.out, report_csv(&rows).as_bytes())?;
    if let Some(p) = &a.summary_out {
        out.add(p, summary_csv(&summarize(&rows)).as_bytes())?;
    }
    out.commit()
}

fn psnr_cmd(a: &Path, b: &Path) -> Result<()> {
    let v = psnr(&Image::load(a)?, &Image::load(b)?)?;
    if v.is_infinite() {
        println!("inf");
    } else {
        println!("{v:.4}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::MeshSim(a) => mesh_sim(a),
        Command::Reconstruct(a) => reconstruct_cmd(a),
        Command::Refine(a) => refine_cmd(a),
        Command::Train(a) => train_cmd(a),
        Command::Evaluate(a) => evaluate_cmd(a),
        Command::Psnr { a, b } => psnr_cmd(&a, &b),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // library errors already carry their source in the message
            let mut line = String::new();
            for cause in e.chain() {
                let msg = cause.to_string();
                if !line.contains(&msg) {
                    if !line.is_empty() {
                        line.push_str(": ");
                    }
                    line.push_str(&msg);
                }
            }
            eprintln!("rmg: {line}");
            ExitCode::FAILURE
        }
    }
}
