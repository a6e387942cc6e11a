//! Python bindings: images, meshes, the reconstruction pipeline and the
//! evaluation harness.

use std::path::PathBuf;

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use rmg::denoise::{self, DctDenoiser, Denoiser};
use rmg::harness;
use rmg::interpolate::{self, Method};
use rmg::training::{self, ParamsStore, SearchGrids, TrainingResult};

fn to_py(e: rmg::Error) -> PyErr {
    match e {
        rmg::Error::Io { .. } => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn method(name: &str) -> PyResult<Method> {
    name.parse().map_err(to_py)
}

fn denoiser(name: &str) -> PyResult<Box<dyn Denoiser>> {
    denoise::denoiser_by_name(name).map_err(to_py)
}

/// Grayscale image with intensities in [0, 1], stored row-major.
#[pyclass(name = "Image", module = "rmg", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyImage {
    inner: rmg::Image,
}

#[pymethods]
impl PyImage {
    #[new]
    fn new(width: usize, height: usize, data: Vec<f64>) -> PyResult<Self> {
        Ok(PyImage {
            inner: rmg::Image::new(width, height, data).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn constant(width: usize, height: usize, value: f64) -> Self {
        PyImage {
            inner: rmg::Image::constant(width, height, value),
        }
    }

    /// Reads a binary PGM file.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(PyImage {
            inner: rmg::Image::load(path).map_err(to_py)?,
        })
    }

    /// Deterministic synthetic test scene.
    #[staticmethod]
    fn synthetic(width: usize, height: usize, seed: u64) -> Self {
        PyImage {
            inner: harness::synthetic_scene(width, height, seed),
        }
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        self.inner.save(path).map_err(to_py)
    }

    fn to_pgm(&self) -> Vec<u8> {
        self.inner.encode_pgm()
    }

    #[getter]
    fn width(&self) -> usize {
        self.inner.width()
    }

    #[getter]
    fn height(&self) -> usize {
        self.inner.height()
    }

    #[getter]
    fn data(&self) -> Vec<f64> {
        self.inner.data().to_vec()
    }

    fn get(&self, x: usize, y: usize) -> PyResult<f64> {
        if x >= self.inner.width() || y >= self.inner.height() {
            return Err(PyValueError::new_err(format!(
                "pixel ({x}, {y}) out of range"
            )));
        }
        Ok(self.inner.get(x, y))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: &PyImage) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Image({}x{})", self.inner.width(), self.inner.height())
    }
}

/// Floating mesh of samples `(x, y, value)` over a `width` x `height` grid.
#[pyclass(name = "Mesh", module = "rmg", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMesh {
    inner: rmg::MeshSamples,
    dropped: usize,
}

#[pymethods]
impl PyMesh {
    /// Duplicate positions are dropped, keeping the first.
    #[new]
    fn new(samples: Vec<(f64, f64, f64)>, width: usize, height: usize) -> PyResult<Self> {
        let samples = samples
            .into_iter()
            .map(|(x, y, v)| rmg::Sample::new(x, y, v))
            .collect();
        let (inner, dropped) = rmg::MeshSamples::new(samples, width, height).map_err(to_py)?;
        Ok(PyMesh { inner, dropped })
    }

    #[staticmethod]
    fn load(path: PathBuf, width: usize, height: usize) -> PyResult<Self> {
        let (inner, dropped) = rmg::MeshSamples::load(path, width, height).map_err(to_py)?;
        Ok(PyMesh { inner, dropped })
    }

    #[staticmethod]
    fn from_csv(text: &str, width: usize, height: usize) -> PyResult<Self> {
        let (inner, dropped) = rmg::MeshSamples::parse_csv(text, width, height).map_err(to_py)?;
        Ok(PyMesh { inner, dropped })
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        self.inner.save(path).map_err(to_py)
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    #[getter]
    fn samples(&self) -> Vec<(f64, f64, f64)> {
        self.inner
            .samples()
            .iter()
            .map(|s| (s.x, s.y, s.value))
            .collect()
    }

    #[getter]
    fn width(&self) -> usize {
        self.inner.width()
    }

    #[getter]
    fn height(&self) -> usize {
        self.inner.height()
    }

    /// Duplicates removed at construction.
    #[getter]
    fn dropped(&self) -> usize {
        self.dropped
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Mesh({} samples, {}x{})",
            self.inner.len(),
            self.inner.width(),
            self.inner.height()
        )
    }
}

/// Strength-map parameters.
#[pyclass(name = "ModelParams", module = "rmg", frozen, from_py_object)]
#[derive(Clone)]
struct PyParams {
    inner: denoise::ModelParams,
}

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (alpha, beta, lambda_, sigma2_max = denoise::SIGMA2_MAX))]
    fn new(alpha: f64, beta: f64, lambda_: f64, sigma2_max: f64) -> PyResult<Self> {
        let inner = denoise::ModelParams {
            alpha,
            beta,
            lambda: lambda_,
            sigma2_max,
        };
        inner.validate().map_err(to_py)?;
        Ok(PyParams { inner })
    }

    /// Shipped defaults for a method name.
    #[staticmethod]
    fn default_for(method: &str) -> PyResult<Self> {
        Ok(PyParams {
            inner: training::default_params(method).map_err(to_py)?,
        })
    }

    /// Reads a `key=value` parameter file.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(PyParams {
            inner: TrainingResult::load(path).map_err(to_py)?.params,
        })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta
    }

    #[getter]
    fn lambda_(&self) -> f64 {
        self.inner.lambda
    }

    #[getter]
    fn sigma2_max(&self) -> f64 {
        self.inner.sigma2_max
    }

    /// Denoising strength for a reliability value.
    fn strength(&self, r: f64) -> f64 {
        self.inner.strength(r)
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "ModelParams(alpha={}, beta={}, lambda_={}, sigma2_max={})",
            p.alpha, p.beta, p.lambda, p.sigma2_max
        )
    }
}

/// Per-pixel effective data, flatness and reliability.
#[pyclass(name = "ReliabilityMap", module = "rmg", frozen)]
struct PyReliability {
    inner: rmg::ReliabilityMap,
}

#[pymethods]
impl PyReliability {
    #[getter]
    fn width(&self) -> usize {
        self.inner.width()
    }

    #[getter]
    fn height(&self) -> usize {
        self.inner.height()
    }

    #[getter]
    fn lambda_(&self) -> f64 {
        self.inner.lambda()
    }

    #[getter]
    fn e_triangle(&self) -> Vec<f64> {
        self.inner.e_triangle().to_vec()
    }

    #[getter]
    fn flatness(&self) -> Vec<f64> {
        self.inner.flatness().to_vec()
    }

    #[getter]
    fn r(&self) -> Vec<f64> {
        self.inner.r().to_vec()
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        self.inner.save(path).map_err(to_py)
    }
}

fn prepare(mesh: &PyMesh) -> PyResult<rmg::PreparedMesh> {
    rmg::PreparedMesh::new(mesh.inner.clone()).map_err(to_py)
}

/// PSNR in dB; `inf` for identical images.
#[pyfunction]
fn psnr(a: &PyImage, b: &PyImage) -> PyResult<f64> {
    rmg::psnr(&a.inner, &b.inner).map_err(to_py)
}

/// Delaunay triangles (counter-clockwise vertex index triples) of points.
#[pyfunction]
fn triangulate(points: Vec<(f64, f64)>) -> PyResult<Vec<(usize, usize, usize)>> {
    let pts: Vec<[f64; 2]> = points.into_iter().map(|(x, y)| [x, y]).collect();
    let t = rmg::Triangulation::build(&pts).map_err(to_py)?;
    Ok(t.triangles().iter().map(|&[a, b, c]| (a, b, c)).collect())
}

/// Initial estimate with one of lin, nnb, idw, mbs.
#[pyfunction]
fn reconstruct(py: Python<'_>, mesh: &PyMesh, method: &str) -> PyResult<PyImage> {
    let m = self::method(method)?;
    let prepared = prepare(mesh)?;
    let r = py
        .detach(|| interpolate::reconstruct(&prepared, m))
        .map_err(to_py)?;
    Ok(PyImage { inner: r.image })
}

#[pyfunction]
#[pyo3(name = "reliability_map", signature = (mesh, lambda_))]
fn reliability(py: Python<'_>, mesh: &PyMesh, lambda_: f64) -> PyResult<PyReliability> {
    let prepared = prepare(mesh)?;
    let inner = py
        .detach(|| rmg::ReliabilityMap::compute(&prepared, lambda_))
        .map_err(to_py)?;
    Ok(PyReliability { inner })
}

/// Denoises a whole image at one noise power (8-bit units squared).
#[pyfunction]
#[pyo3(signature = (image, sigma2, denoiser = "dct"))]
fn denoise_image(
    py: Python<'_>,
    image: &PyImage,
    sigma2: f64,
    denoiser: &str,
) -> PyResult<PyImage> {
    let d = self::denoiser(denoiser)?;
    let inner = py
        .detach(|| d.denoise(&image.inner, sigma2))
        .map_err(to_py)?;
    Ok(PyImage { inner })
}

/// Full pipeline on a mesh. `params` defaults to the shipped values for
/// `method`; `init` defaults to a fresh reconstruction.
#[pyfunction]
#[pyo3(signature = (mesh, method, params = None, init = None, levels = denoise::DEFAULT_LEVELS, denoiser = "dct"))]
fn refine(
    py: Python<'_>,
    mesh: &PyMesh,
    method: &str,
    params: Option<&PyParams>,
    init: Option<&PyImage>,
    levels: usize,
    denoiser: &str,
) -> PyResult<PyImage> {
    let m = self::method(method)?;
    let p = match params {
        Some(p) => p.inner,
        None => training::default_params(m.name()).map_err(to_py)?,
    };
    let d = self::denoiser(denoiser)?;
    let prepared = prepare(mesh)?;
    let init = init.map(|i| i.inner.clone());
    let out = py.detach(|| -> rmg::Result<rmg::Image> {
        let init = match init {
            Some(img) => img,
            None => interpolate::reconstruct(&prepared, m)?.image,
        };
        let rel = rmg::ReliabilityMap::compute(&prepared, p.lambda)?;
        let s = denoise::strength_map(&rel, &p)?;
        denoise::refine(&init, &s, levels, d.as_ref())
    });
    Ok(PyImage {
        inner: out.map_err(to_py)?,
    })
}

#[pyfunction]
fn antialias(image: &PyImage, phi: usize) -> PyResult<PyImage> {
    if phi < 2 {
        return Err(PyValueError::new_err("phi must be at least 2"));
    }
    Ok(PyImage {
        inner: harness::antialias(&image.inner, phi),
    })
}

/// Draws a floating mesh from a filtered image; returns `(mesh, reference)`.
#[pyfunction]
#[pyo3(signature = (filtered, ratio, phi = 5, seed = 0))]
fn simulate_mesh(
    filtered: &PyImage,
    ratio: f64,
    phi: usize,
    seed: u64,
) -> PyResult<(PyMesh, PyImage)> {
    let cfg = harness::SimConfig::new(phi, ratio, seed).map_err(to_py)?;
    let (mesh, reference) = harness::simulate_mesh(&filtered.inner, &cfg).map_err(to_py)?;
    Ok((
        PyMesh {
            inner: mesh,
            dropped: 0,
        },
        PyImage { inner: reference },
    ))
}

/// Fits parameters for one method on a directory of PGM images. Returns
/// `(params, expected_gain)`.
#[pyfunction]
#[pyo3(signature = (corpus_dir, method, ratios = vec![0.2, 0.3, 0.5, 0.8], seeds = vec![0], phi = 5))]
fn train(
    py: Python<'_>,
    corpus_dir: PathBuf,
    method: &str,
    ratios: Vec<f64>,
    seeds: Vec<u64>,
    phi: usize,
) -> PyResult<(PyParams, f64)> {
    let m = self::method(method)?;
    let result = py
        .detach(|| -> rmg::Result<TrainingResult> {
            let images: Vec<rmg::Image> = harness::load_corpus(&corpus_dir)?
                .into_iter()
                .map(|(_, i)| i)
                .collect();
            let items = harness::training_corpus(&images, phi, &ratios, &seeds)?;
            training::fit_parameters(&items, m, &SearchGrids::default(), &DctDenoiser::default())
        })
        .map_err(to_py)?;
    Ok((
        PyParams {
            inner: result.params,
        },
        result.expected_gain,
    ))
}

/// PSNR report CSV over a directory of PGM images. `params` maps method
/// names to parameters; other methods use the shipped defaults.
#[pyfunction]
#[pyo3(signature = (corpus_dir, methods = vec!["lin".to_string(), "nnb".to_string(), "idw".to_string(), "mbs".to_string()], ratios = vec![0.3, 0.5], seeds = vec![0], params = None, phi = 5, jobs = None))]
#[allow(clippy::too_many_arguments)]
fn evaluate(
    py: Python<'_>,
    corpus_dir: PathBuf,
    methods: Vec<String>,
    ratios: Vec<f64>,
    seeds: Vec<u64>,
    params: Option<std::collections::HashMap<String, PyParams>>,
    phi: usize,
    jobs: Option<usize>,
) -> PyResult<String> {
    let mut store = ParamsStore::shipped_defaults();
    for (name, p) in params.unwrap_or_default() {
        store.insert(&name, p.inner);
    }
    let cfg = harness::EvalConfig {
        phi,
        methods: methods.iter().map(|m| method(m)).collect::<PyResult<_>>()?,
        ratios,
        seeds,
        levels: denoise::DEFAULT_LEVELS,
        jobs,
    };
    let rows = py
        .detach(|| harness::evaluate_dir(&corpus_dir, &cfg, &store, &DctDenoiser::default()))
        .map_err(to_py)?;
    Ok(harness::report_csv(&rows))
}

#[pymodule]
#[pyo3(name = "rmg")]
fn rmg_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyImage>()?;
    m.add_class::<PyMesh>()?;
    m.add_class::<PyParams>()?;
    m.add_class::<PyReliability>()?;
    m.add_function(wrap_pyfunction!(psnr, m)?)?;
    m.add_function(wrap_pyfunction!(triangulate, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(reliability, m)?)?;
    m.add_function(wrap_pyfunction!(denoise_image, m)?)?;
    m.add_function(wrap_pyfunction!(refine, m)?)?;
    m.add_function(wrap_pyfunction!(antialias, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_mesh, m)?)?;
    m.add_function(wrap_pyfunction!(train, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    Ok(())
}
