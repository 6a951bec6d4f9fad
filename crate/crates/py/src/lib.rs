//! Python bindings for the dynamic coloring engine and workload tools.

use pyo3::create_exception;
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;

use dyncolor::workload::{self, AuditPolicy, ReportFormat, RunOptions, StreamHeader, StreamModel, WorkloadError};
use dyncolor::{Color, EngineConfig, EngineError, UpdateEvent, UpdateKind, VertexId};

create_exception!(dyncolor_py, UpdateError, PyValueError);

fn engine_err(e: EngineError) -> PyErr {
    UpdateError::new_err(e.to_string())
}

fn workload_err(e: WorkloadError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

type Event = (String, u32, u32);

fn to_event((op, u, v): &Event) -> PyResult<UpdateEvent> {
    match op.as_str() {
        "+" => Ok(UpdateEvent::insert(*u, *v)),
        "-" => Ok(UpdateEvent::delete(*u, *v)),
        _ => Err(PyValueError::new_err(format!("operation must be '+' or '-', got {op:?}"))),
    }
}

fn from_event(e: &UpdateEvent) -> Event {
    let op = match e.kind {
        UpdateKind::Insert => "+",
        UpdateKind::Delete => "-",
    };
    (op.to_string(), e.u.0, e.v.0)
}

/// A dynamic (Δ+1)-coloring of a graph on `n` vertices with degree cap `delta`.
#[pyclass(module = "dyncolor_py")]
struct Engine {
    inner: dyncolor::Engine,
}

impl Engine {
    fn vertex(&self, v: u32) -> PyResult<VertexId> {
        if (v as usize) < self.inner.config().n {
            Ok(VertexId(v))
        } else {
            Err(PyIndexError::new_err(format!("vertex {v} out of range")))
        }
    }
}

#[pymethods]
impl Engine {
    #[new]
    #[pyo3(signature = (n, delta, seed = 0))]
    fn new(n: usize, delta: u32, seed: u64) -> PyResult<Self> {
        let inner = dyncolor::Engine::preprocess(EngineConfig::new(n, delta, seed)).map_err(engine_err)?;
        Ok(Engine { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.config().n
    }

    #[getter]
    fn delta(&self) -> u32 {
        self.inner.config().delta
    }

    #[getter]
    fn top_level(&self) -> i32 {
        self.inner.config().top_level().0
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.graph().edge_count()
    }

    fn insert(&mut self, u: u32, v: u32) -> PyResult<()> {
        self.inner.apply_update(UpdateEvent::insert(u, v)).map_err(engine_err)
    }

    fn delete(&mut self, u: u32, v: u32) -> PyResult<()> {
        self.inner.apply_update(UpdateEvent::delete(u, v)).map_err(engine_err)
    }

    /// Applies `("+" | "-", u, v)` events in order, stopping at the first invalid one.
    fn apply(&mut self, events: Vec<Event>) -> PyResult<()> {
        for e in &events {
            self.inner.apply_update(to_event(e)?).map_err(engine_err)?;
        }
        Ok(())
    }

    fn has_edge(&self, u: u32, v: u32) -> PyResult<bool> {
        Ok(self.inner.graph().has_edge(self.vertex(u)?, self.vertex(v)?))
    }

    fn color(&self, v: u32) -> PyResult<u32> {
        Ok(self.inner.color(self.vertex(v)?).0)
    }

    fn level(&self, v: u32) -> PyResult<i32> {
        Ok(self.inner.level(self.vertex(v)?).0)
    }

    fn coloring(&self) -> Vec<u32> {
        self.inner.coloring().into_iter().map(|c| c.0).collect()
    }

    fn levels(&self) -> Vec<i32> {
        self.inner.levels().into_iter().map(|l| l.0).collect()
    }

    fn edges(&self) -> Vec<(u32, u32)> {
        self.inner.graph().edges().map(|(u, v)| (u.0, v.0)).collect()
    }

    /// Monochromatic edges of the current coloring.
    fn conflicts(&self) -> Vec<(u32, u32)> {
        dyncolor::check_proper(&self.inner.coloring(), self.inner.graph().edges())
            .into_iter()
            .map(|(u, v)| (u.0, v.0))
            .collect()
    }

    /// Structural discrepancies, one message each; empty when consistent.
    fn audit(&self) -> Vec<String> {
        self.inner.audit_structures().iter().map(ToString::to_string).collect()
    }

    /// Number of neighbors of `v` at levels below `level`.
    fn phi(&self, v: u32, level: i32) -> PyResult<usize> {
        Ok(self.inner.graph().phi(self.vertex(v)?, dyncolor::Level(level)))
    }

    /// Update counts and work units as a dict.
    fn totals<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
        let t = self.inner.totals();
        let m = &self.inner.instrumentation().meter;
        let d = pyo3::types::PyDict::new(py);
        d.set_item("updates", t.updates)?;
        d.set_item("insertions", t.insertions)?;
        d.set_item("deletions", t.deletions)?;
        d.set_item("conflicts", t.conflicts)?;
        d.set_item("recolors", t.recolors)?;
        d.set_item("det_colors", t.det_colors)?;
        d.set_item("rand_colors", t.rand_colors)?;
        d.set_item("longest_chain", t.longest_chain)?;
        for c in dyncolor::instrument::Category::ALL {
            d.set_item(format!("{}_units", c.name()), m.get(c))?;
        }
        d.set_item("total_units", m.total())?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        let c = self.inner.config();
        format!("Engine(n={}, delta={}, seed={}, edges={})", c.n, c.delta, c.seed, self.inner.graph().edge_count())
    }
}

/// Generates an oblivious stream: `model` is `churn:<p>`, `window:<w>` or `star`.
#[pyfunction]
#[pyo3(signature = (model, n, delta, updates, seed = 0))]
fn generate(model: &str, n: usize, delta: u32, updates: usize, seed: u64) -> PyResult<Vec<Event>> {
    let model: StreamModel = model.parse().map_err(workload_err)?;
    let ev = workload::generate(model, n, delta, updates, seed).map_err(workload_err)?;
    Ok(ev.iter().map(from_event).collect())
}

/// Returns `(n, delta, events)`.
#[pyfunction]
fn parse_stream(text: &str) -> PyResult<(usize, u32, Vec<Event>)> {
    let (h, ev) = workload::parse_stream(text).map_err(workload_err)?;
    Ok((h.n, h.delta, ev.iter().map(from_event).collect()))
}

#[pyfunction]
fn write_stream(n: usize, delta: u32, events: Vec<Event>) -> PyResult<String> {
    let ev = events.iter().map(to_event).collect::<PyResult<Vec<_>>>()?;
    Ok(workload::write_stream(&StreamHeader { n, delta }, &ev))
}

/// Runs a stream given in text form and returns the serialized report.
#[pyfunction]
#[pyo3(signature = (text, seed = 0, audit = "end", baseline = false, skip_invalid = false, report = "json"))]
fn run(text: &str, seed: u64, audit: &str, baseline: bool, skip_invalid: bool, report: &str) -> PyResult<String> {
    let (h, ev) = workload::parse_stream(text).map_err(workload_err)?;
    let audit: AuditPolicy = audit.parse().map_err(workload_err)?;
    let format: ReportFormat = report.parse().map_err(workload_err)?;
    let opts = RunOptions { audit, baseline, skip_invalid, ..RunOptions::new(seed) };
    let r = workload::run(&h, &ev, &opts).map_err(workload_err)?;
    Ok(workload::emit_report(&r, format))
}

/// Edges whose endpoints share a color.
#[pyfunction]
fn check_proper(colors: Vec<u32>, edges: Vec<(u32, u32)>) -> PyResult<Vec<(u32, u32)>> {
    let n = colors.len() as u32;
    if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n) {
        return Err(PyIndexError::new_err(format!("edge ({u}, {v}) out of range")));
    }
    let colors: Vec<Color> = colors.into_iter().map(Color).collect();
    let bad = dyncolor::check_proper(&colors, edges.into_iter().map(|(u, v)| (VertexId(u), VertexId(v))));
    Ok(bad.into_iter().map(|(u, v)| (u.0, v.0)).collect())
}

#[pymodule]
fn dyncolor_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("UpdateError", m.py().get_type::<UpdateError>())?;
    m.add_class::<Engine>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(parse_stream, m)?)?;
    m.add_function(wrap_pyfunction!(write_stream, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(check_proper, m)?)?;
    Ok(())
}
