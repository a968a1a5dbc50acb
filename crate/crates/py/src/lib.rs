//! Python bindings: complexes, A∞-structures, contractions and transfer.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use hpt_core::ainfty::{massey_triple as core_massey, AInfinityStructure};
use hpt_core::factory::{cochain_dga as core_cochain, gaussian_contraction, massey_instance as core_massey_instance, random_suite as core_suite, SimplicialComplexDescription};
use hpt_core::homology::homology_basis;
use hpt_core::interchange::{parse_field, Document};
use hpt_core::perturbation::{check_sdr, repair_to_contraction, transfer as core_transfer, verify_transfer, Contraction as CoreContraction, SdrDatum, TransferResult, VerifyOptions};
use hpt_core::{Bidegree, BigradedSpace, Complex as CoreComplex, GradedMap, Space};

type Entry = (String, String, String);

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn entries(m: &GradedMap) -> Vec<Entry> {
    m.entries()
        .map(|(j, i, c)| (m.source().label(j), m.target().label(i), c.to_string()))
        .collect()
}

fn build_map(source: &Space, target: &Space, bidegree: (i64, i64), list: &[Entry]) -> PyResult<GradedMap> {
    let field = source.field();
    let mut triples = Vec::with_capacity(list.len());
    for (from, to, c) in list {
        let j = source.index_of(from).ok_or_else(|| err(format!("unknown source element `{from}`")))?;
        let i = target.index_of(to).ok_or_else(|| err(format!("unknown target element `{to}`")))?;
        triples.push((j, i, field.parse(c).map_err(err)?));
    }
    GradedMap::from_entries(source, target, Bidegree(bidegree.0, bidegree.1), triples).map_err(err)
}

fn vector(space: &Space, terms: &[(String, String)]) -> PyResult<Vec<(usize, hpt_core::Scalar)>> {
    terms
        .iter()
        .map(|(l, c)| {
            let i = space.index_of(l).ok_or_else(|| err(format!("unknown element `{l}`")))?;
            Ok((i, space.field().parse(c).map_err(err)?))
        })
        .collect()
}

/// A bigraded cochain complex over Q or a prime field.
#[pyclass(frozen, skip_from_py_object, name = "Complex")]
#[derive(Clone)]
pub struct PyComplex {
    inner: CoreComplex,
}

#[pymethods]
impl PyComplex {
    /// `basis` holds `(label, degree, weight)`; `d` holds `(from, to, coeff)`.
    #[new]
    #[pyo3(signature = (basis, d, field = "Q"))]
    fn new(basis: Vec<(String, i64, i64)>, d: Vec<Entry>, field: &str) -> PyResult<Self> {
        let field = parse_field(field).map_err(err)?;
        let space = BigradedSpace::from_triples(field, basis).map_err(err)?;
        let d = build_map(&space, &space, (1, 0), &d)?;
        Ok(PyComplex {
            inner: CoreComplex::new(d).map_err(err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.space().field().to_string()
    }

    fn labels(&self) -> Vec<String> {
        (0..self.inner.dim()).map(|i| self.inner.space().label(i)).collect()
    }

    fn differential(&self) -> Vec<Entry> {
        entries(self.inner.d())
    }

    /// `(degree, weight, betti)` for every bidegree with nonzero homology.
    fn homology(&self) -> Vec<(i64, i64, usize)> {
        homology_basis(&self.inner)
            .into_iter()
            .filter(|p| p.betti > 0)
            .map(|p| (p.bidegree.0, p.bidegree.1, p.betti))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("Complex(dim={}, field={})", self.inner.dim(), self.inner.space().field())
    }
}

/// A truncated A∞-structure `m_1, …, m_N`.
#[pyclass(frozen, skip_from_py_object, name = "Structure")]
#[derive(Clone)]
pub struct PyStructure {
    inner: AInfinityStructure,
}

#[pymethods]
impl PyStructure {
    /// `m_1 = d`, `m_2 = μ`; rejects products that are not closed or not associative.
    #[staticmethod]
    #[pyo3(signature = (complex, product, arity = 3))]
    fn from_dga(complex: &PyComplex, product: Vec<Entry>, arity: usize) -> PyResult<Self> {
        let c = &complex.inner;
        let sq = BigradedSpace::tensor_power(c.space(), 2);
        let mu = build_map(&sq, c.space(), (0, 0), &product)?;
        let a = AInfinityStructure::from_dga(c, &mu, arity).map_err(err)?;
        Ok(PyStructure {
            inner: a.truncate(arity).map_err(err)?,
        })
    }

    #[getter]
    fn arity(&self) -> usize {
        self.inner.arity()
    }

    #[getter]
    fn complex(&self) -> PyComplex {
        PyComplex {
            inner: self.inner.complex().clone(),
        }
    }

    /// Entries of `m_n` with `⊗`-joined source labels.
    fn m(&self, n: usize) -> PyResult<Vec<Entry>> {
        if n == 0 || n > self.inner.arity() {
            return Err(err(format!("arity {n} outside 1..={}", self.inner.arity())));
        }
        Ok(entries(self.inner.m(n)))
    }

    /// Number of nonzero entries of each signed Stasheff defect, arities `1..=N`.
    fn stasheff_defects(&self) -> Vec<usize> {
        (1..=self.inner.arity()).map(|n| self.inner.stasheff_defect(n).nnz()).collect()
    }

    /// Nonzero entries of `b∘b` for the bar differential.
    fn bar_defect(&self) -> PyResult<usize> {
        let b = self.inner.bar_differential();
        Ok(b.compose(&b).map_err(err)?.nnz())
    }

    fn is_valid(&self) -> bool {
        self.inner.is_valid()
    }
}

/// A strong deformation retract `(α, r, H)` satisfying the side conditions.
#[pyclass(frozen, skip_from_py_object, name = "Contraction")]
#[derive(Clone)]
pub struct PyContraction {
    inner: CoreContraction,
}

#[pymethods]
impl PyContraction {
    /// Contraction onto a complex with zero differential by Gaussian elimination.
    #[staticmethod]
    fn gaussian(complex: &PyComplex) -> PyResult<Self> {
        Ok(PyContraction {
            inner: gaussian_contraction(&complex.inner).map_err(err)?,
        })
    }

    /// From raw SDR data; `repair` applies the side-condition repair first.
    #[staticmethod]
    #[pyo3(signature = (small, big, alpha, r, h, repair = false))]
    fn from_data(small: &PyComplex, big: &PyComplex, alpha: Vec<Entry>, r: Vec<Entry>, h: Vec<Entry>, repair: bool) -> PyResult<Self> {
        let (cs, ds) = (small.inner.space(), big.inner.space());
        let datum = SdrDatum::new(
            &small.inner,
            &big.inner,
            &build_map(cs, ds, (0, 0), &alpha)?,
            &build_map(ds, cs, (0, 0), &r)?,
            &build_map(ds, ds, (-1, 0), &h)?,
        )
        .map_err(err)?;
        let inner = if repair { repair_to_contraction(&datum) } else { CoreContraction::new(datum) };
        Ok(PyContraction { inner: inner.map_err(err)? })
    }

    #[getter]
    fn small(&self) -> PyComplex {
        PyComplex {
            inner: self.inner.small().clone(),
        }
    }

    #[getter]
    fn big(&self) -> PyComplex {
        PyComplex {
            inner: self.inner.big().clone(),
        }
    }

    fn alpha(&self) -> Vec<Entry> {
        entries(self.inner.alpha())
    }

    fn r(&self) -> Vec<Entry> {
        entries(self.inner.r())
    }

    fn h(&self) -> Vec<Entry> {
        entries(self.inner.h())
    }

    /// Defect entry counts of every SDR identity and side condition.
    fn check(&self) -> BTreeMap<String, usize> {
        check_sdr(self.inner.datum()).checks().into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}

/// Output of a transfer: the structure on the small complex and its verification.
#[pyclass(frozen, skip_from_py_object, name = "TransferResult")]
pub struct PyTransferResult {
    inner: TransferResult,
}

#[pymethods]
impl PyTransferResult {
    #[getter]
    fn structure(&self) -> PyStructure {
        PyStructure {
            inner: self.inner.structure.clone(),
        }
    }

    #[getter]
    fn depth(&self) -> usize {
        self.inner.depth
    }

    /// Components `f_n` of `α∞`.
    fn alpha(&self, n: usize) -> PyResult<Vec<Entry>> {
        let c = self.inner.alpha.components();
        c.get(n.wrapping_sub(1)).map(entries).ok_or_else(|| err(format!("no component {n}")))
    }

    /// Components `f_n` of `r∞`.
    fn r(&self, n: usize) -> PyResult<Vec<Entry>> {
        let c = self.inner.r.components();
        c.get(n.wrapping_sub(1)).map(entries).ok_or_else(|| err(format!("no component {n}")))
    }

    /// Defect entry counts of every postcondition; all zero on success.
    #[pyo3(signature = (homotopy = true))]
    fn verify(&self, homotopy: bool) -> PyResult<Vec<(String, usize)>> {
        Ok(verify_transfer(&self.inner, VerifyOptions { homotopy }).map_err(err)?.checks)
    }
}

#[pyfunction]
#[pyo3(signature = (contraction, structure, arity = None))]
fn transfer(contraction: &PyContraction, structure: &PyStructure, arity: Option<usize>) -> PyResult<PyTransferResult> {
    let n = arity.unwrap_or(structure.inner.arity());
    Ok(PyTransferResult {
        inner: core_transfer(&contraction.inner, &structure.inner, n).map_err(err)?,
    })
}

/// `(nonzero, class coordinates, indeterminacy rank)` of `[m_3(x,y,z)]`.
#[pyfunction]
fn massey_triple(structure: &PyStructure, x: Vec<(String, String)>, y: Vec<(String, String)>, z: Vec<(String, String)>) -> PyResult<(bool, Vec<String>, usize)> {
    let s = structure.inner.complex().space();
    let m = core_massey(&structure.inner, &vector(s, &x)?, &vector(s, &y)?, &vector(s, &z)?).map_err(err)?;
    Ok((m.nonzero, m.class.iter().map(|c| c.to_string()).collect(), m.indeterminacy_rank))
}

/// Cochain algebra of a simplicial complex given by its facets.
#[pyfunction]
#[pyo3(signature = (vertices, facets, field = "Q", arity = 3))]
fn cochain_dga(vertices: Vec<String>, facets: Vec<Vec<usize>>, field: &str, arity: usize) -> PyResult<PyStructure> {
    let field = parse_field(field).map_err(err)?;
    let (c, mu) = core_cochain(&SimplicialComplexDescription::new(vertices, facets), field).map_err(err)?;
    Ok(PyStructure {
        inner: AInfinityStructure::from_dga(&c, &mu, arity).map_err(err)?.truncate(arity).map_err(err)?,
    })
}

/// The bundled Massey algebra and the labels of its three distinguished cycles.
#[pyfunction]
#[pyo3(signature = (field = "Q", arity = 3))]
fn massey_instance(field: &str, arity: usize) -> PyResult<(PyStructure, Vec<String>)> {
    let field = parse_field(field).map_err(err)?;
    let (c, mu, x, y, z) = core_massey_instance(field).map_err(err)?;
    let labels = [x, y, z].iter().map(|v| c.space().label(v[0].0)).collect();
    let a = AInfinityStructure::from_dga(&c, &mu, arity).map_err(err)?.truncate(arity).map_err(err)?;
    Ok((PyStructure { inner: a }, labels))
}

/// Seeded random `(structure or None, contraction)` pairs; structures are DGAs.
#[pyfunction]
#[pyo3(signature = (seed, count, max_dim = 6, field = "Q", arity = 3))]
fn random_suite(seed: u64, count: usize, max_dim: usize, field: &str, arity: usize) -> PyResult<Vec<(PyComplex, Option<PyStructure>, PyContraction)>> {
    let field = parse_field(field).map_err(err)?;
    let suite = core_suite(seed, count, max_dim, -2..=2, field).map_err(err)?;
    suite
        .into_iter()
        .map(|inst| {
            let s = match &inst.product {
                Some(mu) => Some(PyStructure {
                    inner: AInfinityStructure::from_dga(&inst.complex, mu, arity).map_err(err)?.truncate(arity).map_err(err)?,
                }),
                None => None,
            };
            Ok((PyComplex { inner: inst.complex }, s, PyContraction { inner: inst.contraction }))
        })
        .collect()
}

/// Reads the structure and contraction stored under the given labels of an
/// interchange document.
#[pyfunction]
#[pyo3(signature = (text, structure = "A", contraction = "contraction"))]
fn load(text: &str, structure: &str, contraction: &str) -> PyResult<(PyStructure, PyContraction)> {
    let doc = Document::from_json(text).map_err(err)?;
    let mut r = doc.reader().map_err(err)?;
    Ok((
        PyStructure {
            inner: r.structure(structure, None).map_err(err)?,
        },
        PyContraction {
            inner: r.contraction(contraction).map_err(err)?,
        },
    ))
}

#[pymodule]
fn hpt(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyComplex>()?;
    m.add_class::<PyStructure>()?;
    m.add_class::<PyContraction>()?;
    m.add_class::<PyTransferResult>()?;
    m.add_function(wrap_pyfunction!(transfer, m)?)?;
    m.add_function(wrap_pyfunction!(massey_triple, m)?)?;
    m.add_function(wrap_pyfunction!(cochain_dga, m)?)?;
    m.add_function(wrap_pyfunction!(massey_instance, m)?)?;
    m.add_function(wrap_pyfunction!(random_suite, m)?)?;
    m.add_function(wrap_pyfunction!(load, m)?)?;
    Ok(())
}
