//! Build the builtin algebras, run the validator, and show what a broken
//! spec looks like.
//!
//! Run: cargo run --example validate_builtins

use superkern::superalg::{builtin, SpecJson};

fn main() {
    for (name, params, p) in [
        ("osp", (1usize, 2usize), 3u32),
        ("osp", (1, 4), 5),
        ("gl", (1, 1), 3),
        ("gl", (2, 1), 5),
        ("sl", (2, 1), 7),
    ] {
        let spec = builtin(name, params, p).expect("supported builtin");
        let rep = spec.validate();
        println!(
            "{name}({}|{}) at p = {p}: dim g_0 = {}, dim g_1 = {}, validation {}",
            params.0,
            params.1,
            spec.dim_even(),
            spec.dim_odd(),
            if rep.passed() { "passed" } else { "FAILED" }
        );
    }

    // the characteristic restriction of the sl(m|n) row
    match builtin("sl", (2, 2), 3) {
        Err(e) => println!("sl(2|2) at p = 3 rejected: {e}"),
        Ok(_) => unreachable!(),
    }

    // perturb [E, F] inside the JSON form and watch validation fail
    let spec = builtin("osp", (1, 2), 3).unwrap();
    let mut json = SpecJson::from_spec(&spec);
    let e = spec.index_of("e").unwrap();
    let h = spec.index_of("h").unwrap();
    let ee = spec.index_of("E").unwrap();
    let ff = spec.index_of("F").unwrap();
    json.brackets
        .insert(format!("{ee},{ff}"), vec![(1, h), (1, e)]);
    let broken = json.to_spec().unwrap();
    let rep = broken.validate();
    println!("\nperturbed [E,F] = h + e:");
    for check in rep.failures() {
        println!(
            "  failed: {} (witness: {})",
            check.name,
            check.witness.as_deref().unwrap_or("-")
        );
    }
}
