//! Degree-truncated center and anticenter slices of U(osp(1|2)), with the
//! generation checks: the center slices agree with the subalgebra generated
//! by 1, xi_e, xi_h, xi_f, S^2, and the anticenter slices are S times a
//! center slice.
//!
//! Run: cargo run --example center_slices

use std::sync::Arc;

use superkern::central::centralizer_slice;
use superkern::pbw::Engine;
use superkern::superalg::builtin;
use superkern::zassenhaus::{anticenter_check, center_generation_check};

fn main() {
    let p = 3u32;
    let spec = Arc::new(builtin("osp", (1, 2), p).unwrap());
    let eng = Engine::standard(spec).unwrap();

    println!("center slices of U(osp(1|2)) at p = {p}:");
    for d in 0..=6usize {
        let slice = centralizer_slice(&eng, d, false).unwrap();
        let gen = center_generation_check(&eng, d).unwrap();
        println!(
            "  d = {d}: dim = {:2}  generated by (1, xi_e, xi_h, xi_f, S^2): {}",
            slice.dim(),
            if gen.equal { "yes" } else { "NO" }
        );
        if d == 3 {
            for u in &slice.basis {
                println!("      {}", eng.render(u));
            }
        }
    }

    println!("\nanticenter slices (twisted adjoint invariants):");
    for d in 0..=6usize {
        let slice = centralizer_slice(&eng, d, true).unwrap();
        let v = anticenter_check(&eng, d).unwrap();
        println!(
            "  d = {d}: dim = {:2}  equals S * (center at d-2): {}",
            slice.dim(),
            if v.equal { "yes" } else { "NO" }
        );
    }
}
