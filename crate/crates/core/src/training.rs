//! Fitting the strength-map parameters by maximizing the expected
//! accumulated denoising gain over a training corpus.
//!
//! For every corpus item the initial estimate is denoised once per level of
//! the noise-power grid, and the per-pixel gain (reduction of squared error
//! against the clean image) is binned by reliability. Integrals over
//! reliability are rectangle-rule sums over the bins.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::denoise::{strength, Denoiser, ModelParams, SIGMA2_MAX};
use crate::error::{Error, Result};
use crate::image::Image;
use crate::interpolate::{reconstruct, Method};
use crate::mesh::MeshSamples;
use crate::prepared::PreparedMesh;
use crate::reliability::{check_lambda, max_reliability, ReliabilityMap};

/// Reduction of squared error achieved by denoising one pixel.
#[inline]
pub fn pixel_gain(clean: f64, init: f64, denoised: f64) -> f64 {
    (clean - init).powi(2) - (clean - denoised).powi(2)
}

/// A clean grid image paired with the mesh sampled from it.
#[derive(Clone, Debug)]
pub struct TrainingItem {
    pub clean: Image,
    pub mesh: MeshSamples,
}

/// Mean gain per (reliability bin, noise power) cell.
#[derive(Clone, Debug, PartialEq)]
pub struct GainSurface {
    lambda: f64,
    sigma2_max: f64,
    r_edges: Vec<f64>,
    sigma2_grid: Vec<f64>,
    // bins x levels, row-major by bin
    sums: Vec<f64>,
    counts: Vec<u64>,
}

impl GainSurface {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn sigma2_max(&self) -> f64 {
        self.sigma2_max
    }

    pub fn r_edges(&self) -> &[f64] {
        &self.r_edges
    }

    pub fn sigma2_grid(&self) -> &[f64] {
        &self.sigma2_grid
    }

    pub fn bins(&self) -> usize {
        self.r_edges.len() - 1
    }

    pub fn bin_center(&self, bin: usize) -> f64 {
        (self.r_edges[bin] + self.r_edges[bin + 1]) / 2.0
    }

    pub fn bin_width(&self, bin: usize) -> f64 {
        self.r_edges[bin + 1] - self.r_edges[bin]
    }

    pub fn count(&self, bin: usize, level: usize) -> u64 {
        self.counts[bin * self.sigma2_grid.len() + level]
    }

    pub fn is_occupied(&self, bin: usize) -> bool {
        self.count(bin, 0) > 0
    }

    /// Mean gain of a cell; `None` for an empty cell.
    pub fn mean_gain(&self, bin: usize, level: usize) -> Option<f64> {
        let i = bin * self.sigma2_grid.len() + level;
        (self.counts[i] > 0).then(|| self.sums[i] / self.counts[i] as f64)
    }

    /// Mean gain at an off-grid noise power, linearly interpolated between
    /// the neighbouring grid levels and clamped to the grid's range.
    pub fn interpolated_gain(&self, bin: usize, sigma2: f64) -> Option<f64> {
        let g = &self.sigma2_grid;
        if sigma2 <= g[0] {
            return self.mean_gain(bin, 0);
        }
        let last = g.len() - 1;
        if sigma2 >= g[last] {
            return self.mean_gain(bin, last);
        }
        let hi = g.partition_point(|&v| v <= sigma2);
        let lo = hi - 1;
        let (a, b) = (self.mean_gain(bin, lo)?, self.mean_gain(bin, hi)?);
        let t = (sigma2 - g[lo]) / (g[hi] - g[lo]);
        Some(a + t * (b - a))
    }
}

fn bin_index(r: f64, r_max: f64, bins: usize) -> usize {
    let t = (r / r_max * bins as f64).floor();
    if t <= 0.0 {
        0
    } else {
        (t as usize).min(bins - 1)
    }
}

/// Probability mass of pixels per reliability bin.
#[derive(Clone, Debug, PartialEq)]
pub struct ReliabilityHistogram {
    r_edges: Vec<f64>,
    mass: Vec<f64>,
}

impl ReliabilityHistogram {
    pub fn r_edges(&self) -> &[f64] {
        &self.r_edges
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }
}

/// Best noise power per occupied bin (`None` for empty bins) and the
/// accumulated gain along that path.
pub fn max_accumulated_gain(surface: &GainSurface) -> (f64, Vec<Option<f64>>) {
    let mut total = 0.0;
    let path = (0..surface.bins())
        .map(|bin| {
            let mut best: Option<(f64, f64)> = None;
            for (level, &s2) in surface.sigma2_grid.iter().enumerate() {
                if let Some(g) = surface.mean_gain(bin, level) {
                    if best.is_none_or(|(bg, _)| g > bg) {
                        best = Some((g, s2));
                    }
                }
            }
            best.map(|(g, s2)| {
                total += g * surface.bin_width(bin);
                s2
            })
        })
        .collect();
    (total, path)
}

/// Expected accumulated gain of the strength mapping `(alpha, beta)` at the
/// surface's balance parameter.
pub fn expected_gain(
    surface: &GainSurface,
    hist: &ReliabilityHistogram,
    alpha: f64,
    beta: f64,
) -> Result<f64> {
    if surface.r_edges != hist.r_edges {
        return Err(Error::InvalidParameter(
            "gain surface and histogram use different bins".into(),
        ));
    }
    let mut total = 0.0;
    for bin in 0..surface.bins() {
        if hist.mass[bin] == 0.0 {
            continue;
        }
        let s2 = strength(alpha, beta, surface.bin_center(bin), surface.sigma2_max);
        if let Some(g) = surface.interpolated_gain(bin, s2) {
            total += g * hist.mass[bin];
        }
    }
    Ok(total)
}

/// Search grids and binning for parameter fitting.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchGrids {
    pub lambdas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub sigma2_grid: Vec<f64>,
    pub r_bins: usize,
    pub sigma2_max: f64,
}

impl Default for SearchGrids {
    fn default() -> Self {
        let alphas = (0..40)
            .map(|k| 10.0 * 100f64.powf(k as f64 / 39.0))
            .collect();
        SearchGrids {
            lambdas: (0..=10).map(|k| k as f64 / 10.0).collect(),
            alphas,
            betas: (0..=32).map(|k| -8.0 + 0.25 * k as f64).collect(),
            sigma2_grid: (0..=20).map(|k| 2.0 * k as f64).collect(),
            r_bins: 64,
            sigma2_max: SIGMA2_MAX,
        }
    }
}

/// Gain surface diagnostics at the chosen balance parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceDiagnostics {
    pub accumulated_gain: f64,
    pub path: Vec<Option<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainingResult {
    pub method: String,
    pub params: ModelParams,
    pub expected_gain: f64,
    pub diagnostics: Option<SurfaceDiagnostics>,
}

struct PreparedItem {
    e_triangle: Vec<f64>,
    flatness: Vec<f64>,
    // gains[level][pixel]
    gains: Vec<Vec<f64>>,
}

/// A corpus reconstructed and denoised once at every grid noise power,
/// ready to be binned at any balance parameter.
pub struct TrainingSet {
    method: Method,
    sigma2_grid: Vec<f64>,
    items: Vec<PreparedItem>,
}

impl TrainingSet {
    pub fn prepare(
        corpus: &[TrainingItem],
        method: Method,
        sigma2_grid: &[f64],
        denoiser: &dyn Denoiser,
    ) -> Result<Self> {
        if corpus.is_empty() {
            return Err(Error::Validation("training corpus is empty".into()));
        }
        if !sigma2_grid.contains(&0.0) {
            return Err(Error::InvalidParameter(
                "noise-power grid must contain 0".into(),
            ));
        }
        if sigma2_grid.windows(2).any(|w| w[0] >= w[1]) || sigma2_grid[0] < 0.0 {
            return Err(Error::InvalidParameter(
                "noise-power grid must be strictly increasing and non-negative".into(),
            ));
        }
        let items = corpus
            .par_iter()
            .map(|item| prepare_item(item, method, sigma2_grid, denoiser))
            .collect::<Result<Vec<_>>>()?;
        Ok(TrainingSet {
            method,
            sigma2_grid: sigma2_grid.to_vec(),
            items,
        })
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// Bins every pixel of the corpus by reliability at `lambda`.
    pub fn gain_surface(
        &self,
        lambda: f64,
        r_bins: usize,
        sigma2_max: f64,
    ) -> Result<(GainSurface, ReliabilityHistogram)> {
        check_lambda(lambda)?;
        if r_bins == 0 {
            return Err(Error::InvalidParameter(
                "need at least one reliability bin".into(),
            ));
        }
        let levels = self.sigma2_grid.len();
        let r_max = max_reliability(lambda);
        let r_edges: Vec<f64> = (0..=r_bins)
            .map(|k| r_max * k as f64 / r_bins as f64)
            .collect();
        let mut sums = vec![0.0; r_bins * levels];
        let mut counts = vec![0u64; r_bins * levels];
        let mut total = 0u64;
        for item in &self.items {
            for (p, (&e, &f)) in item.e_triangle.iter().zip(&item.flatness).enumerate() {
                let r = crate::reliability::combine(e, f, lambda);
                let bin = bin_index(r, r_max, r_bins);
                for level in 0..levels {
                    sums[bin * levels + level] += item.gains[level][p];
                    counts[bin * levels + level] += 1;
                }
                total += 1;
            }
        }
        let mass = (0..r_bins)
            .map(|b| counts[b * levels] as f64 / total.max(1) as f64)
            .collect();
        Ok((
            GainSurface {
                lambda,
                sigma2_max,
                r_edges: r_edges.clone(),
                sigma2_grid: self.sigma2_grid.clone(),
                sums,
                counts,
            },
            ReliabilityHistogram { r_edges, mass },
        ))
    }

    /// Exhaustive search over the grids. Ties prefer smaller alpha, then
    /// smaller (more negative) beta, then smaller lambda: the weakest
    /// denoising among equally good candidates.
    pub fn fit(&self, grids: &SearchGrids) -> Result<TrainingResult> {
        if grids.lambdas.is_empty() || grids.alphas.is_empty() || grids.betas.is_empty() {
            return Err(Error::InvalidParameter(
                "search grids must be non-empty".into(),
            ));
        }
        let per_lambda = grids
            .lambdas
            .par_iter()
            .map(|&lambda| {
                let (surface, hist) = self.gain_surface(lambda, grids.r_bins, grids.sigma2_max)?;
                let mut best: Option<Candidate> = None;
                for &alpha in &grids.alphas {
                    for &beta in &grids.betas {
                        let gain = expected_gain(&surface, &hist, alpha, beta)?;
                        let cand = Candidate {
                            gain,
                            alpha,
                            beta,
                            lambda,
                        };
                        if best.as_ref().is_none_or(|b| cand.beats(b)) {
                            best = Some(cand);
                        }
                    }
                }
                Ok((best.expect("non-empty grids"), surface))
            })
            .collect::<Result<Vec<_>>>()?;
        let (best, surface) = per_lambda
            .into_iter()
            .reduce(|a, b| if b.0.beats(&a.0) { b } else { a })
            .expect("non-empty lambda grid");
        let (accumulated_gain, path) = max_accumulated_gain(&surface);
        Ok(TrainingResult {
            method: self.method.name().to_string(),
            params: ModelParams {
                alpha: best.alpha,
                beta: best.beta,
                lambda: best.lambda,
                sigma2_max: grids.sigma2_max,
            },
            expected_gain: best.gain,
            diagnostics: Some(SurfaceDiagnostics {
                accumulated_gain,
                path,
            }),
        })
    }
}

struct Candidate {
    gain: f64,
    alpha: f64,
    beta: f64,
    lambda: f64,
}

impl Candidate {
    fn beats(&self, other: &Candidate) -> bool {
        if self.gain != other.gain {
            return self.gain > other.gain;
        }
        (self.alpha, self.beta, self.lambda) < (other.alpha, other.beta, other.lambda)
    }
}

fn prepare_item(
    item: &TrainingItem,
    method: Method,
    sigma2_grid: &[f64],
    denoiser: &dyn Denoiser,
) -> Result<PreparedItem> {
    let (w, h) = (item.mesh.width(), item.mesh.height());
    if item.clean.width() != w || item.clean.height() != h {
        return Err(Error::DimensionMismatch(format!(
            "clean image {}x{} vs mesh grid {w}x{h}",
            item.clean.width(),
            item.clean.height()
        )));
    }
    let prepared = PreparedMesh::new(item.mesh.clone())?;
    let init = reconstruct(&prepared, method)?.image;
    let rel = ReliabilityMap::compute(&prepared, 0.0)?;
    let gains = sigma2_grid
        .iter()
        .map(|&s2| {
            let den = denoiser.denoise(&init, s2)?;
            Ok(item
                .clean
                .data()
                .iter()
                .zip(init.data())
                .zip(den.data())
                .map(|((&c, &i), &d)| pixel_gain(c, i, d))
                .collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(PreparedItem {
        e_triangle: rel.e_triangle().to_vec(),
        flatness: rel.flatness().to_vec(),
        gains,
    })
}

/// Builds the gain surface and reliability histogram of a corpus.
pub fn build_gain_surface(
    corpus: &[TrainingItem],
    method: Method,
    lambda: f64,
    sigma2_grid: &[f64],
    r_bins: usize,
    denoiser: &dyn Denoiser,
) -> Result<(GainSurface, ReliabilityHistogram)> {
    TrainingSet::prepare(corpus, method, sigma2_grid, denoiser)?
        .gain_surface(lambda, r_bins, SIGMA2_MAX)
}

pub fn fit_parameters(
    corpus: &[TrainingItem],
    method: Method,
    grids: &SearchGrids,
    denoiser: &dyn Denoiser,
) -> Result<TrainingResult> {
    TrainingSet::prepare(corpus, method, &grids.sigma2_grid, denoiser)?.fit(grids)
}

/// Shipped defaults per method name. CUB, NNI and KER have no
/// reconstruction here but keep their entries for parameter files.
pub const SHIPPED_DEFAULTS: [(&str, f64, f64, f64); 7] = [
    ("LIN", 214.0, -4.3, 0.6),
    ("CUB", 298.0, -4.5, 0.6),
    ("NNI", 185.0, -4.4, 0.6),
    ("NNB", 133.0, -2.5, 0.9),
    ("IDW", 216.0, -3.5, 0.5),
    ("MBS", 318.0, -4.7, 0.3),
    ("KER", 394.0, -4.8, 0.2),
];

/// Strength-map parameters keyed by upper-case method name.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParamsStore {
    params: BTreeMap<String, ModelParams>,
}

impl ParamsStore {
    pub fn new() -> Self {
        ParamsStore::default()
    }

    pub fn shipped_defaults() -> Self {
        let mut store = ParamsStore::new();
        for (name, alpha, beta, lambda) in SHIPPED_DEFAULTS {
            store.insert(
                name,
                ModelParams {
                    alpha,
                    beta,
                    lambda,
                    sigma2_max: SIGMA2_MAX,
                },
            );
        }
        store
    }

    pub fn insert(&mut self, method: &str, params: ModelParams) {
        self.params.insert(normalize_method(method), params);
    }

    pub fn get(&self, method: &str) -> Result<ModelParams> {
        self.params
            .get(&normalize_method(method))
            .copied()
            .ok_or_else(|| Error::MissingParams(normalize_method(method)))
    }

    pub fn methods(&self) -> impl Iterator<Item = &str> {
        self.params.keys().map(String::as_str)
    }
}

fn normalize_method(name: &str) -> String {
    match name.to_ascii_uppercase().as_str() {
        "BSR" => "MBS".to_string(),
        other => other.to_string(),
    }
}

/// Shipped defaults for one method.
pub fn default_params(method: &str) -> Result<ModelParams> {
    ParamsStore::shipped_defaults().get(method)
}

impl TrainingResult {
    /// `key=value` lines: method, alpha, beta, lambda, sigma2_max, expected_gain.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "method={}", self.method);
        let _ = writeln!(s, "alpha={:?}", self.params.alpha);
        let _ = writeln!(s, "beta={:?}", self.params.beta);
        let _ = writeln!(s, "lambda={:?}", self.params.lambda);
        let _ = writeln!(s, "sigma2_max={}", self.params.sigma2_max);
        let _ = writeln!(s, "expected_gain={:?}", self.expected_gain);
        s
    }

    /// Parses the `key=value` format. `expected_gain` and `sigma2_max` are
    /// optional (NaN and 40 when absent); `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut fields = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("expected key=value, found '{line}'"),
            })?;
            fields.insert(k.trim().to_string(), (i + 1, v.trim().to_string()));
        }
        let number = |key: &str| -> Result<Option<f64>> {
            match fields.get(key) {
                None => Ok(None),
                Some((line, v)) => v.parse().map(Some).map_err(|_| Error::Parse {
                    line: *line,
                    message: format!("{key} '{v}' is not a number"),
                }),
            }
        };
        let required = |key: &str| -> Result<f64> {
            number(key)?.ok_or_else(|| Error::Validation(format!("parameter file lacks '{key}'")))
        };
        let method = fields
            .get("method")
            .map(|(_, v)| normalize_method(v))
            .ok_or_else(|| Error::Validation("parameter file lacks 'method'".into()))?;
        let params = ModelParams {
            alpha: required("alpha")?,
            beta: required("beta")?,
            lambda: required("lambda")?,
            sigma2_max: number("sigma2_max")?.unwrap_or(SIGMA2_MAX),
        };
        params.validate()?;
        Ok(TrainingResult {
            method,
            params,
            expected_gain: number("expected_gain")?.unwrap_or(f64::NAN),
            diagnostics: None,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        TrainingResult::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surface(
        gains: &[&[f64]],
        sigma2_grid: &[f64],
        counts: &[u64],
        lambda: f64,
    ) -> (GainSurface, ReliabilityHistogram) {
        let bins = gains.len();
        let levels = sigma2_grid.len();
        let r_max = max_reliability(lambda);
        let r_edges: Vec<f64> = (0..=bins).map(|k| r_max * k as f64 / bins as f64).collect();
        let mut sums = Vec::new();
        let mut cnt = Vec::new();
        for (b, row) in gains.iter().enumerate() {
            for l in 0..levels {
                sums.push(row[l] * counts[b] as f64);
                cnt.push(counts[b]);
            }
        }
        let total: u64 = counts.iter().sum();
        let mass = counts.iter().map(|&c| c as f64 / total as f64).collect();
        (
            GainSurface {
                lambda,
                sigma2_max: 40.0,
                r_edges: r_edges.clone(),
                sigma2_grid: sigma2_grid.to_vec(),
                sums,
                counts: cnt,
            },
            ReliabilityHistogram { r_edges, mass },
        )
    }

    #[test]
    fn pixel_gain_examples() {
        assert!((pixel_gain(0.5, 0.6, 0.55) - 0.0075).abs() < 1e-15);
        assert_eq!(pixel_gain(0.5, 0.6, 0.6), 0.0);
        assert!((pixel_gain(0.5, 0.6, 0.5) - 0.01).abs() < 1e-15);
    }

    #[test]
    fn two_bin_expected_gain() {
        // beta = 0 makes the strength alpha everywhere: level 10 exactly
        let grid = [0.0, 10.0, 20.0];
        let (s, h) = surface(&[&[0.0, 0.1, 0.05], &[0.0, 0.2, 0.0]], &grid, &[1, 3], 0.5);
        let g = expected_gain(&s, &h, 10.0, 0.0).unwrap();
        assert!((g - 0.175).abs() < 1e-12);
        // off-grid strength interpolates: 15 sits halfway between 10 and 20
        let g = expected_gain(&s, &h, 15.0, 0.0).unwrap();
        assert!((g - (0.25 * 0.075 + 0.75 * 0.1)).abs() < 1e-12);
    }

    #[test]
    fn zero_strength_gives_zero_gain() {
        let grid = [0.0, 10.0];
        let (s, h) = surface(&[&[0.0, 0.3], &[0.0, -0.2]], &grid, &[5, 5], 0.2);
        assert_eq!(expected_gain(&s, &h, 0.0, -3.0).unwrap(), 0.0);
    }

    #[test]
    fn single_bin_expected_gain() {
        let grid = [0.0, 4.0, 8.0];
        let (s, h) = surface(&[&[0.0, 0.02, 0.06]], &grid, &[7], 1.0);
        // center of the only bin is 0.5; strength 6 = halfway between 4 and 8
        let alpha = 6.0 / (-0.5f64).exp();
        let g = expected_gain(&s, &h, alpha, -1.0).unwrap();
        assert!((g - 0.04).abs() < 1e-12);
    }

    #[test]
    fn mismatched_bins_rejected() {
        let grid = [0.0, 10.0];
        let (s, _) = surface(&[&[0.0, 0.3]], &grid, &[5], 0.2);
        let (_, h) = surface(&[&[0.0, 0.3], &[0.0, 0.1]], &grid, &[5, 5], 0.2);
        assert!(expected_gain(&s, &h, 1.0, -1.0).is_err());
    }

    #[test]
    fn accumulated_gain_paths() {
        let grid = [0.0, 10.0, 20.0, 30.0];
        let zero: &[f64] = &[0.0; 4];
        let (s, _) = surface(&[zero, zero], &grid, &[3, 3], 0.5);
        assert_eq!(max_accumulated_gain(&s).0, 0.0);

        let (s, _) = surface(&[&[0.4], &[0.2]], &[0.0], &[1, 1], 0.5);
        let (ga, path) = max_accumulated_gain(&s);
        assert_eq!(path, vec![Some(0.0), Some(0.0)]);
        assert!((ga - (0.4 + 0.2) * 1.0).abs() < 1e-12);

        // gain = -(sigma2 - target(bin))^2 peaks exactly at the target level
        let targets = [30.0, 20.0, 10.0, 0.0];
        let rows: Vec<Vec<f64>> = targets
            .iter()
            .map(|t| grid.iter().map(|s| -(s - t) * (s - t)).collect())
            .collect();
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let (s, _) = surface(&refs, &grid, &[1, 1, 1, 1], 0.0);
        let (_, path) = max_accumulated_gain(&s);
        assert_eq!(path, targets.iter().map(|&t| Some(t)).collect::<Vec<_>>());
    }

    #[test]
    fn empty_bins_stay_empty() {
        let (s, h) = surface(&[&[0.0, 0.1], &[0.0, 0.5]], &[0.0, 10.0], &[4, 0], 0.5);
        assert_eq!(s.mean_gain(1, 1), None);
        assert_eq!(h.mass(), &[1.0, 0.0]);
        let (_, path) = max_accumulated_gain(&s);
        assert_eq!(path[1], None);
    }

    #[test]
    fn params_text_round_trip() {
        let r = TrainingResult {
            method: "LIN".into(),
            params: ModelParams::new(214.0, -4.3, 0.6).unwrap(),
            expected_gain: 1.25e-4,
            diagnostics: None,
        };
        let text = r.to_text();
        assert!(text.contains("method=LIN\nalpha=214.0\nbeta=-4.3\nlambda=0.6\nsigma2_max=40\n"));
        assert_eq!(TrainingResult::parse(&text).unwrap(), r);
        assert!(TrainingResult::parse("method=LIN\nalpha=1\n").is_err());
        assert!(matches!(
            TrainingResult::parse("method=LIN\nalpha=x\nbeta=1\nlambda=0.5"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn shipped_defaults_verbatim() {
        let store = ParamsStore::shipped_defaults();
        assert_eq!(store.methods().count(), 7);
        let lin = store.get("lin").unwrap();
        assert_eq!(
            (lin.alpha, lin.beta, lin.lambda, lin.sigma2_max),
            (214.0, -4.3, 0.6, 40.0)
        );
        let nnb = store.get("NNB").unwrap();
        assert_eq!((nnb.alpha, nnb.beta, nnb.lambda), (133.0, -2.5, 0.9));
        let mbs = store.get("BSR").unwrap();
        assert_eq!((mbs.alpha, mbs.beta, mbs.lambda), (318.0, -4.7, 0.3));
        assert!(
            matches!(ParamsStore::new().get("lin"), Err(Error::MissingParams(m)) if m == "LIN")
        );
    }

    #[test]
    fn default_grid_shapes() {
        let g = SearchGrids::default();
        assert_eq!(g.lambdas.len(), 11);
        assert_eq!(g.alphas.len(), 40);
        assert!((g.alphas[0] - 10.0).abs() < 1e-12 && (g.alphas[39] - 1000.0).abs() < 1e-9);
        assert_eq!(g.betas.len(), 33);
        assert_eq!((g.betas[0], g.betas[32]), (-8.0, 0.0));
        assert_eq!(g.sigma2_grid.len(), 21);
        assert_eq!(g.r_bins, 64);
    }
}
