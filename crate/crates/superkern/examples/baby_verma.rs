//! Baby Verma modules of osp(1|2) over all three p-character orbits:
//! weights, dimensions, irreducibility, endomorphism type, central
//! characters.
//!
//! Run: cargo run --example baby_verma

use std::sync::Arc;

use superkern::pbw::Engine;
use superkern::reduced::PCharacter;
use superkern::repmod::{
    baby_verma, central_character_point, endo_type, is_irreducible, lambda_set, simple_head,
    Borel,
};
use superkern::scalar::Field;
use superkern::superalg::builtin;
use superkern::zassenhaus::point_generators;

fn main() {
    let p = 3u32;
    let spec = Arc::new(builtin("osp", (1, 2), p).unwrap());
    let fp = spec.field();
    let ext = Field::extension(p, 2).unwrap();

    let characters = vec![
        ("restricted chi = 0", PCharacter::zero(&spec, &fp), fp.clone()),
        (
            "regular nilpotent chi_0",
            PCharacter::osp12_nilpotent(&spec, &fp).unwrap(),
            fp.clone(),
        ),
        (
            "regular semisimple chi_1 (over F_9)",
            PCharacter::osp12_semisimple(&spec, &ext).unwrap(),
            ext.clone(),
        ),
    ];

    for (title, chi, field) in characters {
        println!("== {title} ==");
        let engine = Engine::new(spec.clone(), field.clone(), superkern::pbw::OrderKind::Standard)
            .unwrap();
        let gens = point_generators(&engine).unwrap();
        let weights = lambda_set(&spec, &field, &chi).unwrap();
        println!(
            "  Lambda(chi) = {{{}}}",
            weights
                .iter()
                .map(|w| field.render(&w.values[0]))
                .collect::<Vec<_>>()
                .join(", ")
        );
        for lam in &weights {
            let z = baby_verma(&spec, &field, &chi, lam, Borel::Standard).unwrap();
            let irr = is_irreducible(&spec, &z).is_irreducible();
            let line = if irr {
                let et = endo_type(&spec, &z).unwrap();
                let pt = central_character_point(&engine, &z, &gens).unwrap();
                format!(
                    "irreducible, type {et}, point ({})",
                    pt.iter().map(|c| field.render(c)).collect::<Vec<_>>().join(", ")
                )
            } else {
                let head = simple_head(&spec, &z).unwrap();
                format!("reducible; simple head of dimension {}", head.dim)
            };
            println!(
                "  Z(lambda = {}): dim {} -- {line}",
                field.render(&lam.values[0]),
                z.dim
            );
        }
        println!();
    }
}
