//! Arithmetic in the skew group ring U(g)#H and its center: the sign rules
//! for sigma, the slice decomposition, and the even-category census.
//!
//! Run: cargo run --example skew_ring

use std::sync::Arc;

use superkern::pbw::Engine;
use superkern::superalg::builtin;
use superkern::zassenhaus::{skew_center_slice, skew_mul, skew_ring_ops, SkewElement};

fn main() {
    let p = 3u32;
    let spec = Arc::new(builtin("osp", (1, 2), p).unwrap());
    let eng = Engine::standard(spec.clone()).unwrap();

    // sigma E sigma = -E
    let sigma = SkewElement {
        plain: eng.zero(),
        sigma: eng.one(),
    };
    let e_skew = SkewElement {
        plain: eng.gen_elem(spec.index_of("E").unwrap()),
        sigma: eng.zero(),
    };
    let ses = skew_mul(&eng, &skew_mul(&eng, &sigma, &e_skew).unwrap(), &sigma).unwrap();
    println!(
        "sigma E sigma = {} + sigma ({})",
        eng.render(&ses.plain),
        eng.render(&ses.sigma)
    );

    for d in [2usize, 4, 6] {
        let (elems, z_dim, a_dim) = skew_center_slice(&eng, d).unwrap();
        println!(
            "skew-center slice at d = {d}: dim {} = {} central + {} anticentral",
            elems.len(),
            z_dim,
            a_dim
        );
    }

    println!("\nfull verification at d = 2p:");
    let report = skew_ring_ops(p, 2 * p as usize).unwrap();
    for (name, ok, detail) in &report.checks {
        println!(
            "  [{}] {}{}",
            if *ok { "pass" } else { "FAIL" },
            name,
            if detail.is_empty() {
                String::new()
            } else {
                format!("  ({detail})")
            }
        );
    }
}
