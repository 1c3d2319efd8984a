//! Python bindings: `import schurdet_py`.
//!
//! Partitions cross the boundary as lists of ints and coefficients as
//! Python ints of arbitrary size.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use schurdet::coefficients::{expand_with, factorize_g as factorize, g_coefficient_with};
use schurdet::engine::canonicalize;
use schurdet::hyperdet::{det_direct, DenseTensor};
use schurdet::oracle::schur_expansion_bruteforce;
use schurdet::{selftest, DecreasingVector, DeltaSpec, Engine, EngineConfig, Partition};

fn py_err(e: schurdet::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn partition(parts: Vec<i64>) -> PyResult<Partition> {
    Partition::new(parts).map_err(py_err)
}

fn jobs(jobs: Option<usize>) -> usize {
    jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()))
}

fn config(factorize: bool) -> EngineConfig {
    EngineConfig { factorize, ..EngineConfig::from_env() }
}

/// Sparse 0/1 tensor `Δ` given by its decreasing vectors.
#[pyclass(name = "Delta", module = "schurdet_py")]
struct PyDelta {
    spec: DeltaSpec,
}

#[pymethods]
impl PyDelta {
    #[new]
    fn new(vectors: Vec<Vec<i64>>) -> PyResult<Self> {
        let vectors = vectors.into_iter().map(DecreasingVector::new).collect::<Result<Vec<_>, _>>().map_err(py_err)?;
        Ok(Self { spec: DeltaSpec::new(vectors).map_err(py_err)? })
    }

    /// `Δ` for the coefficient `g_λ^{n,k}` with `n = len(lam)`.
    #[staticmethod]
    fn for_coefficient(lam: Vec<i64>, k: usize) -> PyResult<Self> {
        Ok(Self { spec: DeltaSpec::for_coefficient(&partition(lam)?, k) })
    }

    #[getter]
    fn n(&self) -> usize {
        self.spec.dim()
    }

    #[getter]
    fn order(&self) -> usize {
        self.spec.order()
    }

    #[getter]
    fn vectors(&self) -> Vec<Vec<i64>> {
        self.spec.vectors().iter().map(|v| v.entries().to_vec()).collect()
    }

    /// Whether the 1-based index tuple is a one of the tensor.
    fn entry(&self, idx: Vec<usize>) -> PyResult<bool> {
        if idx.len() != self.spec.order() || idx.iter().any(|&i| i == 0 || i > self.spec.dim()) {
            return Err(PyValueError::new_err("index tuple out of range"));
        }
        Ok(self.spec.entry(&idx))
    }

    /// Normalized vectors and total shift of the canonical key.
    fn canonical_key(&self) -> (Vec<Vec<i64>>, i64) {
        let key = canonicalize(&self.spec);
        (key.normalized().into_iter().map(|v| v.into_inner()).collect(), key.total_shift())
    }

    #[pyo3(signature = (factorize = true))]
    fn hyperdet(&self, factorize: bool) -> BigInt {
        Engine::new(config(factorize)).eval(&self.spec)
    }

    fn __repr__(&self) -> String {
        format!("Delta({})", self.spec)
    }
}

#[pyfunction]
#[pyo3(signature = (lam, n, k, factorize = true))]
fn g_coefficient(lam: Vec<i64>, n: usize, k: usize, factorize: bool) -> PyResult<BigInt> {
    let mut engine = Engine::new(config(factorize));
    g_coefficient_with(&mut engine, &partition(lam)?, n, k).map_err(py_err)
}

/// Every admissible `(partition, coefficient)` pair in reverse-lex order.
#[pyfunction]
#[pyo3(signature = (n, k, jobs = None, factorize = true))]
fn expand(
    py: Python<'_>,
    n: usize,
    k: usize,
    jobs: Option<usize>,
    factorize: bool,
) -> PyResult<Vec<(Vec<i64>, BigInt)>> {
    let workers = self::jobs(jobs);
    let e = py.detach(|| expand_with(n, k, workers, config(factorize))).map_err(py_err)?;
    Ok(e.terms().iter().map(|(p, c)| (p.parts().to_vec(), c.clone())).collect())
}

#[pyfunction]
fn admissible(n: usize, k: usize) -> PyResult<Vec<Vec<i64>>> {
    Ok(schurdet::enumerate_admissible(n, k).map_err(py_err)?.map(|p| p.parts().to_vec()).collect())
}

#[pyfunction]
fn is_admissible(lam: Vec<i64>, n: usize, k: usize) -> PyResult<bool> {
    schurdet::is_admissible(&partition(lam)?, n, k).map_err(py_err)
}

/// `(admissible, vanishing)`.
#[pyfunction]
#[pyo3(signature = (n, k, jobs = None))]
fn count_vanishing(py: Python<'_>, n: usize, k: usize, jobs: Option<usize>) -> PyResult<(usize, usize)> {
    let workers = self::jobs(jobs);
    py.detach(|| schurdet::count_vanishing(n, k, workers)).map_err(py_err)
}

/// `(mu, nu)` with `g_lam = g_mu * g_nu`, or `None`.
#[pyfunction]
fn factorize_g(lam: Vec<i64>, n: usize, k: usize) -> PyResult<Option<(Vec<i64>, Vec<i64>)>> {
    Ok(factorize(&partition(lam)?, n, k).map_err(py_err)?.map(|f| (f.mu.parts().to_vec(), f.nu.parts().to_vec())))
}

/// Expansion read off the expanded polynomial; small cases only.
#[pyfunction]
fn bruteforce_expansion(n: usize, k: usize) -> PyResult<Vec<(Vec<i64>, BigInt)>> {
    let e = schur_expansion_bruteforce(n, k).map_err(py_err)?;
    Ok(e.terms().iter().map(|(p, c)| (p.parts().to_vec(), c.clone())).collect())
}

/// Hyperdeterminant of a dense integer tensor given as a flat row-major list.
#[pyfunction]
fn dense_hyperdet(order: usize, dim: usize, entries: Vec<i64>) -> PyResult<(BigInt, BigInt)> {
    let t = DenseTensor::from_integers(order, dim, &entries).map_err(py_err)?;
    let d = det_direct(&t).map_err(py_err)?;
    Ok((d.numer().clone(), d.denom().clone()))
}

#[pyfunction(name = "selftest")]
fn run_selftest() -> Vec<(String, bool, String)> {
    selftest::run().into_iter().map(|c| (c.name.to_string(), c.passed, c.detail)).collect()
}

#[pymodule]
fn schurdet_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDelta>()?;
    m.add_function(wrap_pyfunction!(g_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(expand, m)?)?;
    m.add_function(wrap_pyfunction!(admissible, m)?)?;
    m.add_function(wrap_pyfunction!(is_admissible, m)?)?;
    m.add_function(wrap_pyfunction!(count_vanishing, m)?)?;
    m.add_function(wrap_pyfunction!(factorize_g, m)?)?;
    m.add_function(wrap_pyfunction!(bruteforce_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(dense_hyperdet, m)?)?;
    m.add_function(wrap_pyfunction!(run_selftest, m)?)?;
    Ok(())
}
