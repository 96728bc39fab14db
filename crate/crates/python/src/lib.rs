//! Python bindings for `sterilize-core`.
//!
//! ```python
//! import sterilize
//! cover = sterilize.Image.gray(4, 1, bytes([10, 11, 12, 13]))
//! stego, trace = sterilize.embed(cover, "A", [1, 0, 1, 1])
//! clean = sterilize.sterilize(stego)
//! ```

use std::path::PathBuf;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use sterilize_core::experiment::{run_experiment as core_run_experiment, ExperimentConfig};
use sterilize_core::metrics::{self, Psnr};
use sterilize_core::{
    embed as core_embed, Algorithm, BitString, EmbedTrace, ImageBuffer, Position, StegoKey,
    SterilizeConfig,
};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn algorithm(name: &str) -> PyResult<Algorithm> {
    name.parse().map_err(value_error)
}

fn key(seed: Option<u64>, segments: Option<usize>) -> Option<StegoKey> {
    seed.map(|s| StegoKey::new(s, segments.unwrap_or(4)))
}

fn scope(block: Option<usize>) -> PyResult<SterilizeConfig> {
    match block {
        None => Ok(SterilizeConfig::whole_channel()),
        Some(side) => SterilizeConfig::square_block(side)
            .ok_or_else(|| PyValueError::new_err("block side must be positive")),
    }
}

fn bits_from(values: Vec<u8>) -> PyResult<BitString> {
    if values.iter().any(|&b| b > 1) {
        return Err(PyValueError::new_err("bits must be 0 or 1"));
    }
    Ok(BitString::from_u8s(&values))
}

fn bits_to_list(bits: &BitString) -> Vec<u8> {
    bits.bits().iter().map(|&b| b as u8).collect()
}

fn trace_from(entries: Vec<(usize, usize)>) -> PyResult<EmbedTrace> {
    EmbedTrace::from_entries(entries.into_iter().map(|(c, p)| Position::new(c, p)).collect())
        .map_err(value_error)
}

fn trace_to_list(trace: &EmbedTrace) -> Vec<(usize, usize)> {
    trace.entries().iter().map(|p| (p.channel, p.pixel)).collect()
}

/// An image as one intensity plane per channel (1 for gray, 3 for RGB).
#[pyclass(name = "Image", eq, frozen, skip_from_py_object, module = "sterilize")]
#[derive(Clone, PartialEq)]
pub struct PyImage {
    inner: ImageBuffer,
}

#[pymethods]
impl PyImage {
    #[new]
    fn new(width: usize, height: usize, planes: Vec<Vec<u8>>) -> PyResult<Self> {
        let inner = ImageBuffer::from_planes(width, height, planes).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn gray(width: usize, height: usize, data: Vec<u8>) -> PyResult<Self> {
        let inner = ImageBuffer::gray(width, height, data).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_bmp(data: &[u8]) -> PyResult<Self> {
        parse_bmp(data)
    }

    fn to_bmp<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyBytes>> {
        write_bmp(py, self)
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
    fn channels(&self) -> usize {
        self.inner.channels()
    }

    /// Row-major intensities of one channel.
    fn plane<'py>(&self, py: Python<'py>, channel: usize) -> PyResult<Bound<'py, PyBytes>> {
        if channel >= self.inner.channels() {
            return Err(PyValueError::new_err(format!("no channel {channel}")));
        }
        Ok(PyBytes::new(py, self.inner.plane(channel)))
    }

    fn get(&self, channel: usize, pixel: usize) -> PyResult<u8> {
        let pos = Position::new(channel, pixel);
        if !self.inner.contains(pos) {
            return Err(PyValueError::new_err("position out of range"));
        }
        Ok(self.inner.get(pos))
    }

    fn capacity(&self) -> (usize, usize) {
        let cap = core_embed::capacity(&self.inner);
        (cap.max_bits, cap.max_chars)
    }

    fn __repr__(&self) -> String {
        format!(
            "Image(width={}, height={}, channels={})",
            self.inner.width(),
            self.inner.height(),
            self.inner.channels()
        )
    }
}

#[pyfunction]
fn parse_bmp(data: &[u8]) -> PyResult<PyImage> {
    let inner = sterilize_core::parse_bmp(data).map_err(value_error)?;
    Ok(PyImage { inner })
}

#[pyfunction]
fn write_bmp<'py>(py: Python<'py>, image: &PyImage) -> PyResult<Bound<'py, PyBytes>> {
    let bytes = sterilize_core::write_bmp(&image.inner).map_err(value_error)?;
    Ok(PyBytes::new(py, &bytes))
}

/// MSB-first bits of `data`, one 0/1 value per byte.
#[pyfunction]
fn text_to_bits(data: &[u8]) -> Vec<u8> {
    bits_to_list(&sterilize_core::image::text_to_bits(data))
}

#[pyfunction]
fn bits_to_text<'py>(py: Python<'py>, bits: Vec<u8>) -> PyResult<Bound<'py, PyBytes>> {
    let bytes = sterilize_core::image::bits_to_text(&bits_from(bits)?).map_err(value_error)?;
    Ok(PyBytes::new(py, &bytes))
}

/// Embeds `bits` and returns the stego image with its `(channel, pixel)` trace.
#[pyfunction]
#[pyo3(signature = (cover, algo, bits, seed=None, segments=None))]
fn embed(
    cover: &PyImage,
    algo: &str,
    bits: Vec<u8>,
    seed: Option<u64>,
    segments: Option<usize>,
) -> PyResult<(PyImage, Vec<(usize, usize)>)> {
    let res = algorithm(algo)?
        .embed(&cover.inner, &bits_from(bits)?, key(seed, segments).as_ref())
        .map_err(value_error)?;
    Ok((PyImage { inner: res.stego }, trace_to_list(&res.trace)))
}

#[pyfunction]
#[pyo3(signature = (stego, algo, n_bits, seed=None, segments=None))]
fn extract(
    stego: &PyImage,
    algo: &str,
    n_bits: usize,
    seed: Option<u64>,
    segments: Option<usize>,
) -> PyResult<Vec<u8>> {
    let bits = algorithm(algo)?
        .extract(&stego.inner, n_bits, key(seed, segments).as_ref())
        .map_err(value_error)?;
    Ok(bits_to_list(&bits))
}

#[pyfunction]
#[pyo3(name = "sterilize", signature = (image, block=None))]
fn sterilize_image(image: &PyImage, block: Option<usize>) -> PyResult<PyImage> {
    let config = scope(block)?;
    Ok(PyImage { inner: sterilize_core::sterilize_image(&image.inner, &config) })
}

#[pyfunction]
#[pyo3(signature = (plane, width, block=None))]
fn sterilize_channel(plane: Vec<u8>, width: usize, block: Option<usize>) -> PyResult<Vec<u8>> {
    if width == 0 || !plane.len().is_multiple_of(width) {
        return Err(PyValueError::new_err("plane length must be a multiple of width"));
    }
    Ok(sterilize_core::sterilize_channel(&plane, width, &scope(block)?))
}

/// `(per_channel, combined)` mean squared error.
#[pyfunction]
fn mse(reference: &PyImage, test: &PyImage) -> PyResult<(Vec<f64>, f64)> {
    let m = metrics::mse(&reference.inner, &test.inner).map_err(value_error)?;
    Ok((m.per_channel, m.combined))
}

/// PSNR in dB; `inf` for identical images.
#[pyfunction]
fn psnr(reference: &PyImage, test: &PyImage) -> PyResult<f64> {
    Ok(match metrics::psnr(&reference.inner, &test.inner).map_err(value_error)? {
        Psnr::Finite(db) => db,
        Psnr::Infinite => f64::INFINITY,
    })
}

type AccuracyRow = (usize, usize, usize, Option<f64>);

/// One `(S, S', S'', accuracy)` tuple per channel plus the overall one;
/// accuracy is `None` when `S'` is zero.
#[pyfunction]
fn accuracy(
    cover: &PyImage,
    stego: &PyImage,
    sterilized: &PyImage,
    trace: Vec<(usize, usize)>,
) -> PyResult<(Vec<AccuracyRow>, AccuracyRow)> {
    let report = metrics::sterilization_accuracy(
        &cover.inner,
        &stego.inner,
        &sterilized.inner,
        &trace_from(trace)?,
    )
    .map_err(value_error)?;
    let row = |a: &metrics::AccuracyResult| (a.stego_positions, a.changed, a.recovered, a.accuracy());
    Ok((report.per_channel.iter().map(row).collect(), row(&report.overall)))
}

#[pyfunction]
fn histogram(plane: &[u8]) -> Vec<u64> {
    metrics::histogram(plane).to_vec()
}

/// Runs a corpus experiment and returns the CSV report.
#[pyfunction]
#[pyo3(signature = (covers, texts, algo, seed=None, segments=None, fill=1.0, block=None, artifacts=None))]
#[allow(clippy::too_many_arguments)]
fn run_experiment(
    covers: PathBuf,
    texts: PathBuf,
    algo: &str,
    seed: Option<u64>,
    segments: Option<usize>,
    fill: f64,
    block: Option<usize>,
    artifacts: Option<PathBuf>,
) -> PyResult<String> {
    let mut config = ExperimentConfig::new(covers, texts, algorithm(algo)?);
    config.key = key(seed, segments);
    config.fill_ratio = fill;
    config.sterilize = scope(block)?;
    config.artifacts_dir = artifacts;
    let report = core_run_experiment(&config).map_err(value_error)?;
    Ok(report.to_csv())
}

#[pymodule]
fn sterilize(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyImage>()?;
    m.add_function(wrap_pyfunction!(parse_bmp, m)?)?;
    m.add_function(wrap_pyfunction!(write_bmp, m)?)?;
    m.add_function(wrap_pyfunction!(text_to_bits, m)?)?;
    m.add_function(wrap_pyfunction!(bits_to_text, m)?)?;
    m.add_function(wrap_pyfunction!(embed, m)?)?;
    m.add_function(wrap_pyfunction!(extract, m)?)?;
    m.add_function(wrap_pyfunction!(sterilize_image, m)?)?;
    m.add_function(wrap_pyfunction!(sterilize_channel, m)?)?;
    m.add_function(wrap_pyfunction!(mse, m)?)?;
    m.add_function(wrap_pyfunction!(psnr, m)?)?;
    m.add_function(wrap_pyfunction!(accuracy, m)?)?;
    m.add_function(wrap_pyfunction!(histogram, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
