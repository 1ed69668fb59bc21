//! PBW straightening in U(osp(1|2)): normal forms, odd squares, the
//! p-center elements xi, and the special element S.
//!
//! Run: cargo run --example straightening

use std::sync::Arc;

use superkern::central::special_s;
use superkern::pbw::Engine;
use superkern::superalg::builtin;

fn main() {
    let p = 3;
    let spec = Arc::new(builtin("osp", (1, 2), p).unwrap());
    let eng = Engine::standard(spec.clone()).unwrap();
    println!("global PBW order: {:?}", eng.order_names());

    let e = spec.index_of("e").unwrap();
    let h = spec.index_of("h").unwrap();
    let cap_e = spec.index_of("E").unwrap();
    let cap_f = spec.index_of("F").unwrap();

    let one = eng.field.one();
    println!("E F   -> {}", eng.render(&eng.straighten(&[cap_e, cap_f], one)));
    println!("F E   -> {}", eng.render(&eng.straighten(&[cap_f, cap_e], one)));
    println!("E E   -> {}", eng.render(&eng.straighten(&[cap_e, cap_e], one)));
    println!("F F   -> {}", eng.render(&eng.straighten(&[cap_f, cap_f], one)));
    println!("h e h -> {}", eng.render(&eng.straighten(&[h, e, h], one)));

    println!("\np-center elements at p = {p}:");
    for name in ["e", "h", "f"] {
        let idx = spec.index_of(name).unwrap();
        let xi = eng.xi(idx);
        println!("  xi_{name} = {}", eng.render(&xi));
        let central = (0..spec.dim()).all(|x| eng.ad_action(x, &xi, false).unwrap().is_zero());
        assert!(central);
    }

    let s = special_s(&eng).unwrap();
    println!("\nS = EF - FE + 1/2 in normal form: {}", eng.render(&s));
    let s2 = eng.mul(&s, &s).unwrap();
    println!("S^2 = {}  (filtration degree {})", eng.render(&s2), s2.degree());

    // xi elements commute with everything, including each other, with the
    // straightening corrections cancelling mod p
    let xi_h = eng.xi(h);
    let xi_e = eng.xi(e);
    let prod = eng.mul(&xi_h, &xi_e).unwrap();
    println!("\nxi_h * xi_e = {}", eng.render(&prod));
    assert_eq!(prod, eng.mul(&xi_e, &xi_h).unwrap());
}
