use pyo3::prelude::*;

#[pymodule(name = "_native")]
fn native(_py: Python<'_>, _m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
