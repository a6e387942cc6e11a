//! End-to-end evaluation: mesh simulation, initial estimate, refinement and
//! PSNR against the reference grid image.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use super::filter::antialias;
use super::simulate::{simulate_mesh, SimConfig};
use crate::denoise::{refine, strength_map, Denoiser, DEFAULT_LEVELS};
use crate::error::{Error, Result};
use crate::image::{psnr, Image};
use crate::interpolate::{reconstruct, Method};
use crate::prepared::PreparedMesh;
use crate::reliability::ReliabilityMap;
use crate::training::{ParamsStore, TrainingItem};

pub const REPORT_HEADER: &str = "image,method,ratio,seed,psnr_init_db,psnr_rmg_db,gain_db";
pub const SUMMARY_HEADER: &str = "method,ratio,rows,psnr_init_db,psnr_rmg_db,gain_db";

#[derive(Clone, Debug)]
pub struct EvalConfig {
    pub phi: usize,
    pub methods: Vec<Method>,
    pub ratios: Vec<f64>,
    pub seeds: Vec<u64>,
    pub levels: usize,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            phi: 5,
            methods: Method::ALL.to_vec(),
            ratios: vec![0.3, 0.5],
            seeds: vec![0],
            levels: DEFAULT_LEVELS,
            jobs: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalRow {
    pub image: String,
    pub method: Method,
    pub ratio: f64,
    pub seed: u64,
    pub psnr_init: f64,
    pub psnr_rmg: f64,
}

impl EvalRow {
    pub fn gain(&self) -> f64 {
        self.psnr_rmg - self.psnr_init
    }
}

/// Runs every (image, method, ratio, seed) cell. Rows come back sorted by
/// image name, method name, ratio and seed.
pub fn evaluate(
    corpus: &[(String, Image)],
    cfg: &EvalConfig,
    params: &ParamsStore,
    denoiser: &dyn Denoiser,
) -> Result<Vec<EvalRow>> {
    for m in &cfg.methods {
        params.get(m.name())?;
    }
    for &ratio in &cfg.ratios {
        SimConfig::new(cfg.phi, ratio, 0)?;
    }
    match cfg.jobs {
        Some(0) => Err(Error::InvalidParameter("jobs must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(|| run(corpus, cfg, params, denoiser)),
        None => run(corpus, cfg, params, denoiser),
    }
}

fn run(
    corpus: &[(String, Image)],
    cfg: &EvalConfig,
    params: &ParamsStore,
    denoiser: &dyn Denoiser,
) -> Result<Vec<EvalRow>> {
    let filtered: Vec<Image> = corpus
        .par_iter()
        .map(|(_, img)| antialias(img, cfg.phi))
        .collect();
    let mut groups = Vec::new();
    for i in 0..corpus.len() {
        for &ratio in &cfg.ratios {
            for &seed in &cfg.seeds {
                groups.push((i, ratio, seed));
            }
        }
    }
    let nested = groups
        .par_iter()
        .map(|&(i, ratio, seed)| {
            let (mesh, reference) =
                simulate_mesh(&filtered[i], &SimConfig::new(cfg.phi, ratio, seed)?)?;
            let prepared = PreparedMesh::new(mesh)?;
            let base = ReliabilityMap::compute(&prepared, 0.0)?;
            cfg.methods
                .par_iter()
                .map(|&method| {
                    let p = params.get(method.name())?;
                    let init = reconstruct(&prepared, method)?.image;
                    let s = strength_map(&base.with_lambda(p.lambda)?, &p)?;
                    let refined = refine(&init, &s, cfg.levels, denoiser)?;
                    Ok(EvalRow {
                        image: corpus[i].0.clone(),
                        method,
                        ratio,
                        seed,
                        psnr_init: psnr(&init, &reference)?,
                        psnr_rmg: psnr(&refined, &reference)?,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<EvalRow> = nested.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        a.image
            .cmp(&b.image)
            .then_with(|| a.method.name().cmp(b.method.name()))
            .then_with(|| a.ratio.total_cmp(&b.ratio))
            .then_with(|| a.seed.cmp(&b.seed))
    });
    Ok(rows)
}

/// Loads every `*.pgm` file of a directory, sorted by file name.
pub fn load_corpus(dir: impl AsRef<Path>) -> Result<Vec<(String, Image)>> {
    let dir = dir.as_ref();
    let mut paths = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let is_pgm = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("pgm"));
        if is_pgm && path.is_file() {
            paths.push(path);
        }
    }
    paths.sort();
    if paths.is_empty() {
        return Err(Error::Validation(format!(
            "no .pgm images in {}",
            dir.display()
        )));
    }
    paths
        .into_iter()
        .map(|p| {
            let name = p
                .file_name()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned();
            Ok((name, Image::load(&p)?))
        })
        .collect()
}

pub fn evaluate_dir(
    dir: impl AsRef<Path>,
    cfg: &EvalConfig,
    params: &ParamsStore,
    denoiser: &dyn Denoiser,
) -> Result<Vec<EvalRow>> {
    evaluate(&load_corpus(dir)?, cfg, params, denoiser)
}

/// Training items for every (image, ratio, seed): the reference grid image
/// paired with its simulated mesh. Ratios are pooled.
pub fn training_corpus(
    images: &[Image],
    phi: usize,
    ratios: &[f64],
    seeds: &[u64],
) -> Result<Vec<TrainingItem>> {
    let filtered: Vec<Image> = images.par_iter().map(|img| antialias(img, phi)).collect();
    let mut cells = Vec::new();
    for i in 0..images.len() {
        for &ratio in ratios {
            for &seed in seeds {
                cells.push((i, ratio, seed));
            }
        }
    }
    cells
        .par_iter()
        .map(|&(i, ratio, seed)| {
            let (mesh, clean) = simulate_mesh(&filtered[i], &SimConfig::new(phi, ratio, seed)?)?;
            Ok(TrainingItem { clean, mesh })
        })
        .collect()
}

// Values are rounded to 1e-4 dB first so the gain column is exactly the
// difference of the printed columns.
fn ten_thousandths(v: f64) -> Option<i64> {
    v.is_finite().then(|| (v * 1e4).round() as i64)
}

fn fixed4(units: i64) -> String {
    let sign = if units < 0 { "-" } else { "" };
    let a = units.unsigned_abs();
    format!("{sign}{}.{:04}", a / 10_000, a % 10_000)
}

fn format_db(v: f64) -> String {
    match ten_thousandths(v) {
        Some(u) => fixed4(u),
        None if v.is_nan() => "nan".into(),
        None if v > 0.0 => "inf".into(),
        None => "-inf".into(),
    }
}

fn format_gain(rmg: f64, init: f64) -> String {
    match (ten_thousandths(rmg), ten_thousandths(init)) {
        (Some(a), Some(b)) => fixed4(a - b),
        _ if rmg == init => fixed4(0),
        _ => format_db(rmg - init),
    }
}

pub fn report_csv(rows: &[EvalRow]) -> String {
    let mut s = String::from(REPORT_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.image,
            r.method.name(),
            r.ratio,
            r.seed,
            format_db(r.psnr_init),
            format_db(r.psnr_rmg),
            format_gain(r.psnr_rmg, r.psnr_init)
        );
    }
    s
}

/// Means over images and seeds per (method, ratio).
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub method: Method,
    pub ratio: f64,
    pub rows: usize,
    pub psnr_init: f64,
    pub psnr_rmg: f64,
    pub gain: f64,
}

pub fn summarize(rows: &[EvalRow]) -> Vec<SummaryRow> {
    let mut out: Vec<SummaryRow> = Vec::new();
    let mut keyed: Vec<&EvalRow> = rows.iter().collect();
    keyed.sort_by(|a, b| {
        a.method
            .name()
            .cmp(b.method.name())
            .then_with(|| a.ratio.total_cmp(&b.ratio))
    });
    for r in keyed {
        match out.last_mut() {
            Some(s) if s.method == r.method && s.ratio == r.ratio => {
                s.rows += 1;
                s.psnr_init += r.psnr_init;
                s.psnr_rmg += r.psnr_rmg;
                s.gain += r.gain();
            }
            _ => out.push(SummaryRow {
                method: r.method,
                ratio: r.ratio,
                rows: 1,
                psnr_init: r.psnr_init,
                psnr_rmg: r.psnr_rmg,
                gain: r.gain(),
            }),
        }
    }
    for s in &mut out {
        let n = s.rows as f64;
        s.psnr_init /= n;
        s.psnr_rmg /= n;
        s.gain /= n;
    }
    out
}

pub fn summary_csv(summary: &[SummaryRow]) -> String {
    let mut s = String::from(SUMMARY_HEADER);
    s.push('\n');
    for r in summary {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.method.name(),
            r.ratio,
            r.rows,
            format_db(r.psnr_init),
            format_db(r.psnr_rmg),
            format_db(r.gain)
        );
    }
    s
}
