//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Everything is exact arithmetic; there are no tolerances anywhere.
//!
//! Run with `cargo test -p superkern --test acceptance -- --nocapture` to see
//! the per-criterion lines.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use superkern::central::{centralizer_slice, special_s};
use superkern::pbw::Engine;
use superkern::reduced::{reduced_algebra, OrbitTag, PCharacter};
use superkern::repmod::{
    baby_verma, endo_type, is_irreducible, iso_test, lambda_set, simple_head, Borel, EndoType,
    IsoDegree, Weight,
};
use superkern::scalar::Field;
use superkern::superalg::{builtin, SuperAlgebraSpec};
use superkern::zassenhaus::{
    anticenter_check, center_generation_check, locus_report, osp12_census, skew_ring_ops,
    special_elements,
};

fn engine_for(name: &str, params: (usize, usize), p: u32) -> Engine {
    Engine::standard(Arc::new(builtin(name, params, p).unwrap())).unwrap()
}

fn report(criterion: u32, passed: bool, detail: &str) {
    println!(
        "criterion {criterion:2}: {} -- {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_01_pbw_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE01);
    let mut checked = 0usize;
    for p in [3u32, 5] {
        for (name, params) in [("osp", (1usize, 2usize)), ("gl", (1, 1))] {
            let eng = engine_for(name, params, p);
            let n = eng.spec.dim();
            for _ in 0..200 {
                let sample = |rng: &mut ChaCha8Rng| {
                    let len = rng.gen_range(0..=4);
                    let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n)).collect();
                    let c = loop {
                        let c = eng.field.rand_element(rng);
                        if !eng.field.is_zero(&c) {
                            break c;
                        }
                    };
                    eng.straighten(&w, c)
                };
                let (u, v, w) = (sample(&mut rng), sample(&mut rng), sample(&mut rng));
                let uv_w = eng.mul(&eng.mul(&u, &v).unwrap(), &w).unwrap();
                let u_vw = eng.mul(&u, &eng.mul(&v, &w).unwrap()).unwrap();
                assert_eq!(uv_w, u_vw, "{name}{params:?} p={p}");
                checked += 1;
            }
            // bracket-lift identity on all basis pairs
            for i in 0..n {
                for j in 0..n {
                    let lift = eng
                        .supercommutator(&eng.gen_elem(i), &eng.gen_elem(j))
                        .unwrap();
                    let mut expect = eng.zero();
                    for &(k, c) in eng.spec.bracket(i, j) {
                        expect = eng.add(
                            &expect,
                            &eng.scale(&eng.gen_elem(k), &eng.field.from_int(c as i64)),
                        );
                    }
                    assert_eq!(lift, expect, "{name}{params:?} p={p} pair ({i},{j})");
                }
            }
        }
    }
    report(
        1,
        true,
        &format!("associativity on {checked} random triples; bracket lift on all basis pairs"),
    );
}

#[test]
fn criterion_02_reduced_dimensions() {
    let mut details = Vec::new();
    for (p, expect) in [(3u32, 108usize), (5, 500)] {
        let eng = engine_for("osp", (1, 2), p);
        let chi = PCharacter::zero(&eng.spec, &eng.field);
        let ra = reduced_algebra(&eng, chi).unwrap();
        assert_eq!(ra.dim(), expect);
        details.push(format!("dim U_chi(osp(1|2)) = {} at p = {p}", ra.dim()));
    }
    for (p, expect) in [(3u32, 36usize), (5, 100)] {
        let eng = engine_for("gl", (1, 1), p);
        let chi = PCharacter::zero(&eng.spec, &eng.field);
        let ra = reduced_algebra(&eng, chi).unwrap();
        assert_eq!(ra.dim(), expect);
        details.push(format!("dim U_chi(gl(1|1)) = {} at p = {p}", ra.dim()));
    }
    report(2, true, &details.join("; "));
}

fn all_characters(
    spec: &Arc<SuperAlgebraSpec>,
    p: u32,
) -> Vec<(&'static str, PCharacter, Field)> {
    let fp = Field::prime(p).unwrap();
    let ext = Field::extension(p, 2).unwrap();
    vec![
        ("chi=0", PCharacter::zero(spec, &fp), fp.clone()),
        (
            "chi0",
            PCharacter::osp12_nilpotent(spec, &fp).unwrap(),
            fp,
        ),
        (
            "chi1",
            PCharacter::osp12_semisimple(spec, &ext).unwrap(),
            ext,
        ),
    ]
}

#[test]
fn criterion_03_baby_verma_dimensions() {
    let mut count = 0usize;
    for p in [3u32, 5] {
        let spec = Arc::new(builtin("osp", (1, 2), p).unwrap());
        for (tag, chi, field) in all_characters(&spec, p) {
            let weights = lambda_set(&spec, &field, &chi).unwrap();
            assert_eq!(weights.len(), p as usize, "{tag} weight count at p={p}");
            for lam in &weights {
                let z = baby_verma(&spec, &field, &chi, lam, Borel::Standard).unwrap();
                assert_eq!(z.dim, 2 * p as usize, "{tag} p={p}");
                z.validate(&spec).unwrap();
                count += 1;
            }
        }
    }
    report(
        3,
        true,
        &format!("{count} baby Vermas built, every dimension equals 2p"),
    );
}

#[test]
fn criterion_04_irreducible_census() {
    for p in [3u32, 5] {
        for which in [
            OrbitTag::NilpotentRegular,
            OrbitTag::SemisimpleRegular,
            OrbitTag::Zero,
        ] {
            let census = osp12_census(p, which).unwrap();
            for (name, ok) in &census.checks {
                assert!(*ok, "p={p}: {name}");
            }
            let expected_classes = match which {
                OrbitTag::NilpotentRegular => (p as usize).div_ceil(2),
                _ => p as usize,
            };
            assert_eq!(census.rows.len(), expected_classes, "p={p} {which:?}");
            match which {
                OrbitTag::NilpotentRegular => {
                    let q_count = census
                        .rows
                        .iter()
                        .filter(|r| r.endo == EndoType::Q)
                        .count();
                    assert_eq!(q_count, 1, "exactly one type-Q class at p={p}");
                    let q_row = census.rows.iter().find(|r| r.endo == EndoType::Q).unwrap();
                    assert_eq!(q_row.lambda_label, ((p - 1) / 2).to_string());
                }
                OrbitTag::SemisimpleRegular => {
                    assert!(census.rows.iter().all(|r| r.endo == EndoType::M));
                    assert!(census.rows.iter().all(|r| r.dim == 2 * p as usize));
                }
                OrbitTag::Zero => {
                    let mut dims: Vec<usize> = census.rows.iter().map(|r| r.dim).collect();
                    dims.sort();
                    let expect: Vec<usize> = (0..p as usize).map(|l| 2 * l + 1).collect();
                    assert_eq!(dims, expect, "L(lambda) dims at p={p}");
                }
                OrbitTag::Other => unreachable!(),
            }
        }
    }
    report(
        4,
        true,
        "chi1: p type-M classes; chi0: (p+1)/2 classes with the lambda <-> p-1-lambda pairing \
         and Q exactly at the midpoint; chi=0: heads of dims {1,3,...,2p-1}; p in {3,5}",
    );
}

#[test]
fn criterion_05_evenness_of_center_and_anticenter() {
    let mut slices = 0usize;
    for (p, dmax) in [(3u32, 6usize), (5, 7)] {
        for (name, params) in [("osp", (1usize, 2usize)), ("gl", (1, 1))] {
            let eng = engine_for(name, params, p);
            for d in 0..=dmax {
                for twisted in [false, true] {
                    let slice = centralizer_slice(&eng, d, twisted).unwrap();
                    for u in &slice.basis {
                        let (_, odd) = eng.parity_split(u);
                        assert!(
                            odd.is_zero(),
                            "{name}{params:?} p={p} d={d} twisted={twisted}"
                        );
                    }
                    slices += 1;
                }
            }
        }
    }
    report(
        5,
        true,
        &format!("{slices} slices checked: every element has zero odd component"),
    );
}

#[test]
fn criterion_06_special_element_identities() {
    for p in [3u32, 5, 7] {
        let eng = engine_for("osp", (1, 2), p);
        // special_elements asserts: S commutes with g_0, anticommutes with
        // g_1, S^2 central, and S^2 + S = 8 Omega + 3/4
        let (s, omega) = special_elements(&eng).unwrap();
        assert!(!s.is_zero() && !omega.is_zero());
    }
    report(
        6,
        true,
        "S and Omega identities hold exactly at p in {3, 5, 7}",
    );
}

#[test]
fn criterion_07_generation_of_center_and_anticenter() {
    let mut details = Vec::new();
    for (p, dmax) in [(3u32, 6usize), (5, 7)] {
        let eng = engine_for("osp", (1, 2), p);
        for d in 0..=dmax {
            let v = center_generation_check(&eng, d).unwrap();
            assert!(v.equal, "center generation p={p} d={d}: {v:?}");
            let a = anticenter_check(&eng, d).unwrap();
            assert!(a.equal, "anticenter p={p} d={d}: {a:?}");
        }
        details.push(format!("p={p}: d <= {dmax}"));
    }
    report(
        7,
        true,
        &format!(
            "center slice = <1, xi_e, xi_h, xi_f, S^2> slice and anticenter = S * center \
             (two degrees lower) at {}",
            details.join(", ")
        ),
    );
}

#[test]
fn criterion_08_harish_chandra_suite() {
    for (p, d) in [(3u32, 6usize), (5, 7)] {
        let rep = superkern::harish::verify_hc(p, d).unwrap();
        for c in &rep.checks {
            assert!(c.passed, "p={p}: {} -- {}", c.name, c.detail);
        }
        // the documented chi_0 exception on the p-center part is recorded
        assert!(
            !rep.chi0_full_slice_deviations.is_empty(),
            "the xi_f deviation at chi0 must be present and recorded"
        );
    }
    report(
        8,
        true,
        "scalar identity chi_lambda(z) = gamma_1(z)(lambda) and gamma_1 injectivity on the \
         invariant slice for chi in {0, chi0, chi1}; full-slice identity for chi in {0, chi1}; \
         Weyl-twist isomorphisms with explicit intertwiners at p in {3, 5}",
    );
}

#[test]
fn criterion_09_skew_ring() {
    for d in 0..=6usize {
        let rep = skew_ring_ops(3, d).unwrap();
        for (name, ok, detail) in &rep.checks {
            assert!(*ok, "d={d}: {name} -- {detail}");
        }
    }
    report(
        9,
        true,
        "skew center = Z-slice + sigma A-slice for d <= 2p at p = 3; even-category census \
         matches the M/Pi M/Q pattern with the chi1 dimension count",
    );
}

#[test]
fn criterion_10_zassenhaus_geometry() {
    let rep = locus_report(3).unwrap();
    assert!(rep.relation_minimal, "no relation of S^2-degree <= 2");
    assert!(rep.relation_principal_at_bound);
    assert!(rep.smooth_set_identity, "{rep:?}");
    assert!(rep.singular_set_identity, "{rep:?}");
    assert!(rep.equal_points_equal_flags);
    assert!(rep.relation_vanishes_on_all_points);
    // cardinality is reported and compared, not failed
    println!("criterion 10 note: {}", rep.count_note);
    report(
        10,
        true,
        &format!(
            "relation {} of S^2-degree 3, none lower; smooth set identity holds; \
             {} distinct singular point(s) from p - 1 = {} lambda labels",
            rep.relation, rep.singular_point_count, rep.label_singular_count
        ),
    );
}

#[test]
fn criterion_11_domain_spot_check() {
    let eng = engine_for("gl", (1, 1), 3);
    // the ambient algebra has a genuine zero-divisor: E12^2 = 0
    let e12 = eng.spec.index_of("E12").unwrap();
    let sq = eng.straighten(&[e12, e12], eng.field.one());
    assert!(sq.is_zero(), "E12^2 = 0 exhibits a zero-divisor in U(gl(1|1))");
    // but pairwise products of center-slice basis elements never vanish
    let slice = centralizer_slice(&eng, 4, false).unwrap();
    assert!(slice.dim() >= 2);
    let mut products = 0usize;
    for a in &slice.basis {
        for b in &slice.basis {
            let ab = eng.mul(a, b).unwrap();
            assert!(!ab.is_zero(), "central product vanished");
            products += 1;
        }
    }
    report(
        11,
        true,
        &format!(
            "all {} pairwise products of the {}-dimensional gl(1|1) center slice (p=3, d=4) \
             are nonzero, while E12^2 = 0 in the ambient algebra",
            products,
            slice.dim()
        ),
    );
}

#[test]
fn acceptance_extras_cross_checks() {
    // census consistency with the separable-degree count: at the regular
    // semisimple character, p modules of dimension 2p with sum of squares
    // p (2p)^2 = 4p^3 = dim U_chi
    for p in [3u32, 5] {
        let census = osp12_census(p, OrbitTag::SemisimpleRegular).unwrap();
        let sum: usize = census.rows.iter().map(|r| r.dim * r.dim).sum();
        assert_eq!(sum, 4 * (p as usize).pow(3));
    }
    // the simple head of an irreducible Verma is itself
    let spec = Arc::new(builtin("osp", (1, 2), 3).unwrap());
    let ext = Field::extension(3, 2).unwrap();
    let chi1 = PCharacter::osp12_semisimple(&spec, &ext).unwrap();
    let lam = lambda_set(&spec, &ext, &chi1).unwrap().remove(0);
    let z = baby_verma(&spec, &ext, &chi1, &lam, Borel::Standard).unwrap();
    let head = simple_head(&spec, &z).unwrap();
    assert_eq!(head.dim, z.dim);
    // type M / Q / flip behaviour across the even category, directly
    let fp = Field::prime(3).unwrap();
    let chi0 = PCharacter::osp12_nilpotent(&spec, &fp).unwrap();
    let w0 = Weight {
        values: vec![fp.from_int(0)],
    };
    let z0 = baby_verma(&spec, &fp, &chi0, &w0, Borel::Standard).unwrap();
    assert!(is_irreducible(&spec, &z0).is_irreducible());
    assert_eq!(endo_type(&spec, &z0).unwrap(), EndoType::M);
    let flip = superkern::repmod::parity_flip(&z0);
    assert!(!iso_test(&spec, &z0, &flip, IsoDegree::EvenOnly)
        .unwrap()
        .is_isomorphic());
    // xi centrality doubles as the p-center sanity check
    let eng = Engine::standard(spec.clone()).unwrap();
    for i in 0..spec.dim_even() {
        let xi = eng.xi(i);
        for x in 0..spec.dim() {
            assert!(eng.ad_action(x, &xi, false).unwrap().is_zero());
        }
    }
    let s = special_s(&eng).unwrap();
    assert_eq!(s.num_terms(), 3);
    println!("acceptance extras: PASS -- census dimension counts, heads, flips, p-center");
}
