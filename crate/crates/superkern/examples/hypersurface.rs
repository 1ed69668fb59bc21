//! Discover the minimal polynomial relation among (xi_e, xi_h, xi_f, S^2)
//! and classify the census points as smooth or singular by the Jacobian of
//! the relation.
//!
//! Run: cargo run --example hypersurface

use std::sync::Arc;

use superkern::pbw::Engine;
use superkern::superalg::builtin;
use superkern::zassenhaus::{hypersurface_and_smoothness, locus_report};

fn main() {
    let p = 3u32;
    let spec = Arc::new(builtin("osp", (1, 2), p).unwrap());
    let eng = Engine::standard(spec).unwrap();

    let hyper = hypersurface_and_smoothness(&eng).unwrap();
    println!("minimal relation at p = {p}:  {} = 0", hyper.relation.render(&eng.field));
    println!("  S^2-degree: {}", hyper.relation.degree_in(3));
    println!("  no relation of lower S^2-degree: {}", hyper.minimal);
    println!("  kernel at the searched bound is one-dimensional: {}", hyper.principal_at_bound);
    for v in 0..4 {
        let names = ["xi_e", "xi_h", "xi_f", "T"];
        println!(
            "  dF/d{} = {}",
            names[v],
            hyper.relation.partial(&eng.field, v).render(&eng.field)
        );
    }

    println!("\nfull locus tabulation:");
    let report = locus_report(p).unwrap();
    for row in &report.rows {
        println!(
            "  {:12} dim {:2} {:5} max-dim {:5} smooth {}",
            row.module, row.dim, row.endo_type, row.max_dim, row.smooth
        );
    }
    println!("smooth-set identity: {}", report.smooth_set_identity);
    println!("singular-set identity: {}", report.singular_set_identity);
    println!("{}", report.count_note);
}
