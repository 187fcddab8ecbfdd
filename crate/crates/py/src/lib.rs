//! Python bindings: Witt vector arithmetic over `F_p`, towers, finite algebras and the
//! verification suite. Structured results cross the boundary as JSON strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use wittstone::algebra::fp_algebra::examples::function_algebra;
use wittstone::algebra::{FiniteFpAlgebra, Prime};
use wittstone::duality::{ff_check, phi_functor, round_trip_is_identity};
use wittstone::profinite::{canonical_cantor, canonical_ntilde, check_sequential_surjectivity};
use wittstone::stone::{characters_exhaustive, is_p_boolean, is_perfect, AlgebraMap};
use wittstone::verify::{run_suite, RunConfig};
use wittstone::witt::{witt_polys, WittRing};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn prime(p: u64) -> PyResult<Prime> {
    Prime::new(p).map_err(value_error)
}

fn witt_over_fp(p: u64, lhs: &[u64], rhs: &[u64], multiply: bool) -> PyResult<Vec<u64>> {
    let p = prime(p)?;
    if lhs.len() != rhs.len() {
        return Err(PyValueError::new_err("operands have different lengths"));
    }
    let w = WittRing::new(FiniteFpAlgebra::prime_field(p), p, lhs.len()).map_err(value_error)?;
    let digits = |v: &[u64]| w.vector(v.iter().map(|d| vec![d % p.get()]).collect());
    let (a, b) = (digits(lhs).map_err(value_error)?, digits(rhs).map_err(value_error)?);
    let c = if multiply { w.witt_mul(&a, &b) } else { w.witt_add(&a, &b) }.map_err(value_error)?;
    Ok(c.0.into_iter().map(|d| d[0]).collect())
}

/// Sum of two Witt vectors over `F_p`, given by their digits.
#[pyfunction]
pub fn witt_add(p: u64, lhs: Vec<u64>, rhs: Vec<u64>) -> PyResult<Vec<u64>> {
    witt_over_fp(p, &lhs, &rhs, false)
}

/// Product of two Witt vectors over `F_p`, given by their digits.
#[pyfunction]
pub fn witt_mul(p: u64, lhs: Vec<u64>, rhs: Vec<u64>) -> PyResult<Vec<u64>> {
    witt_over_fp(p, &lhs, &rhs, true)
}

/// The universal sum and product polynomials of `W_n` as JSON.
#[pyfunction]
pub fn witt_polys_json(p: u64, n: usize) -> PyResult<String> {
    Ok(witt_polys(prime(p)?, n).map_err(value_error)?.to_json())
}

#[pyclass(name = "Tower", frozen)]
pub struct PyTower {
    inner: wittstone::profinite::Tower,
}

#[pymethods]
impl PyTower {
    #[staticmethod]
    pub fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyTower { inner: wittstone::profinite::Tower::from_json(s).map_err(value_error)? })
    }

    #[staticmethod]
    pub fn ntilde(depth: usize) -> PyResult<Self> {
        Ok(PyTower { inner: canonical_ntilde(depth).map_err(value_error)? })
    }

    #[staticmethod]
    pub fn cantor(depth: usize) -> PyResult<Self> {
        Ok(PyTower { inner: canonical_cantor(depth).map_err(value_error)? })
    }

    pub fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    pub fn depth(&self) -> usize {
        self.inner.depth()
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        (0..=self.inner.depth()).map(|n| self.inner.level_size(n)).collect()
    }

    /// Every transition is surjective and every level point has a compatible lift.
    pub fn is_replete(&self) -> bool {
        let r = check_sequential_surjectivity(&self.inner);
        r.surjective && r.lifts_valid(&self.inner)
    }

    /// Characters of `Cont(S_n, Z/p^m)` mod `p` recover the level.
    pub fn duality_round_trip(&self, level: usize, p: u64, m: u32) -> PyResult<bool> {
        round_trip_is_identity(&self.inner, level, prime(p)?, m).map_err(value_error)
    }

    /// Number of points of level `n`, read off from the Stone δ-ring of that level.
    pub fn points_via_duality(&self, level: usize, p: u64, m: u32) -> PyResult<usize> {
        Ok(phi_functor(&self.inner, level, prime(p)?, m).map_err(value_error)?.points())
    }

    pub fn __repr__(&self) -> String {
        format!("Tower(level_sizes={:?})", self.level_sizes())
    }
}

#[pyclass(name = "Algebra", frozen)]
pub struct PyAlgebra {
    inner: FiniteFpAlgebra,
}

#[pymethods]
impl PyAlgebra {
    #[staticmethod]
    pub fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyAlgebra { inner: FiniteFpAlgebra::from_json(s).map_err(value_error)? })
    }

    /// `F_p^k` in the indicator basis.
    #[staticmethod]
    pub fn functions(p: u64, k: usize) -> PyResult<Self> {
        if k == 0 {
            return Err(PyValueError::new_err("the set must be nonempty"));
        }
        Ok(PyAlgebra { inner: function_algebra(prime(p)?, k) })
    }

    pub fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn is_p_boolean(&self) -> bool {
        is_p_boolean(&self.inner)
    }

    pub fn is_perfect(&self) -> bool {
        is_perfect(&self.inner)
    }

    /// Algebra maps to `F_p`, as coordinate vectors.
    pub fn characters(&self) -> PyResult<Vec<Vec<u64>>> {
        Ok(characters_exhaustive(&self.inner).map_err(value_error)?.into_iter().map(|c| c.0).collect())
    }

    pub fn __repr__(&self) -> String {
        format!("Algebra(p={}, dim={})", self.inner.prime().get(), self.inner.dim())
    }
}

/// Whether the pullback `F_p^S -> F_p^T` along `dual: T -> S` is faithfully flat.
#[pyfunction]
pub fn faithfully_flat(p: u64, source_size: usize, dual: Vec<usize>) -> PyResult<bool> {
    if dual.iter().any(|s| *s >= source_size) {
        return Err(PyValueError::new_err("dual map leaves the source set"));
    }
    let f = AlgebraMap::pullback(prime(p)?, source_size, &dual);
    Ok(ff_check(&f, source_size, dual.len()).map_err(value_error)?.faithfully_flat())
}

/// Run the verification suite; `config_json` follows the CLI config file format.
#[pyfunction]
#[pyo3(signature = (config_json=None))]
pub fn verify(config_json: Option<&str>) -> PyResult<String> {
    let cfg = match config_json {
        Some(s) => RunConfig::from_json(s).map_err(value_error)?,
        None => RunConfig::default(),
    };
    Ok(run_suite(&cfg).map_err(value_error)?.to_json())
}

#[pyfunction]
pub fn explain(check_id: &str) -> PyResult<String> {
    wittstone::verify::explain(check_id).map_err(value_error)
}

#[pymodule]
fn wittstone_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyTower>()?;
    m.add_class::<PyAlgebra>()?;
    m.add_function(wrap_pyfunction!(witt_add, m)?)?;
    m.add_function(wrap_pyfunction!(witt_mul, m)?)?;
    m.add_function(wrap_pyfunction!(witt_polys_json, m)?)?;
    m.add_function(wrap_pyfunction!(faithfully_flat, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(explain, m)?)?;
    Ok(())
}
