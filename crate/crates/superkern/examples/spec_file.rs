//! The JSON algebra-spec format: export a builtin, reload it, validate, and
//! run a slice computation on the reloaded algebra.
//!
//! Run: cargo run --example spec_file

use std::sync::Arc;

use superkern::central::centralizer_slice;
use superkern::pbw::Engine;
use superkern::superalg::{builtin, SpecJson};

fn main() {
    let spec = builtin("gl", (1, 1), 3).unwrap();
    let json = SpecJson::from_spec(&spec);
    let text = serde_json::to_string_pretty(&json).unwrap();
    println!("gl(1|1) at p = 3 in the exchange format:\n{text}\n");

    let reloaded: SpecJson = serde_json::from_str(&text).unwrap();
    let spec2 = reloaded.to_spec().unwrap();
    let report = spec2.validate();
    println!("reloaded spec validation: {}", if report.passed() { "passed" } else { "FAILED" });

    let eng = Engine::standard(Arc::new(spec2)).unwrap();
    let slice = centralizer_slice(&eng, 2, false).unwrap();
    println!("center slice at degree 2 has dimension {}:", slice.dim());
    for u in &slice.basis {
        println!("  {}", eng.render(u));
    }
}
