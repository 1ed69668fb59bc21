//! The irreducible-module census of U_chi(osp(1|2)) for the three coadjoint
//! orbit representatives, with iso-class counts, types, and points.
//!
//! Run: cargo run --example census

use superkern::reduced::OrbitTag;
use superkern::zassenhaus::osp12_census;

fn main() {
    let p = 3u32;
    for which in [
        OrbitTag::NilpotentRegular,
        OrbitTag::SemisimpleRegular,
        OrbitTag::Zero,
    ] {
        let census = osp12_census(p, which).unwrap();
        println!("== {which} at p = {p}: {} iso-classes ==", census.rows.len());
        for row in &census.rows {
            println!(
                "  {:14} dim {:2}  type {}  point ({})",
                row.module_name,
                row.dim,
                row.endo,
                row.point
                    .iter()
                    .map(|c| census.ext.render(c))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
        }
        for (name, ok) in &census.checks {
            if !ok {
                println!("  CHECK FAILED: {name}");
            }
        }
        let all_ok = census.checks.iter().all(|(_, ok)| *ok);
        println!("  all {} checks passed: {all_ok}\n", census.checks.len());
    }
}
