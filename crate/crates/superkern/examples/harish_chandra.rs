//! The Harish-Chandra suite: projections, the rho-shift sign question, Weyl
//! twists of baby Vermas, and the scalar identity over the three characters.
//!
//! Run: cargo run --example harish_chandra

use superkern::harish::verify_hc;

fn main() {
    for (p, d) in [(3u32, 6usize), (5, 7)] {
        println!("== osp(1|2), p = {p}, slice degree {d} ==");
        let report = verify_hc(p, d).unwrap();
        for c in &report.checks {
            println!(
                "  [{}] {}{}",
                if c.passed { "pass" } else { "FAIL" },
                c.name,
                if c.detail.is_empty() {
                    String::new()
                } else {
                    format!("  ({})", c.detail)
                }
            );
        }
        println!(
            "  recorded chi_0 full-slice deviations (p-center sees chi(f), the projection \
             cannot): {}",
            report.chi0_full_slice_deviations.len()
        );
        for d in &report.chi0_full_slice_deviations {
            println!("    {d}");
        }
        println!();
    }
}
