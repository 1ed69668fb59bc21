//! Degree-truncated computation of the center and anticenter of `U(g)` by
//! exact linear algebra, generated-subalgebra slices, subspace comparison,
//! and polynomial-relation discovery among commuting elements.
//!
//! Everything here works inside `U(g)^{<= d}`: the adjoint action preserves
//! the filtration, so the d-slice of the (anti)center is the joint kernel of
//! the stacked ad-matrices over the degree-bounded monomial basis.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pbw::{ElemSig, Engine, EnvElement, PbwMonomial};
use crate::scalar::{FieldElement, Matrix, SpanBasis};

/// Hard cap on the monomial count of a slice computation.
pub const MONOMIAL_BUDGET: usize = 20_000;

/// Ordered monomial basis of `U(g)^{<= d}` with an index lookup.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    pub sig: ElemSig,
    pub degree: usize,
    pub monomials: Vec<PbwMonomial>,
    index: HashMap<PbwMonomial, usize>,
}

impl MonomialBasis {
    /// Enumerate all PBW monomials of degree at most `d` in the engine's
    /// order (graded, then lex -- the same order `PbwMonomial: Ord` uses).
    pub fn new(engine: &Engine, d: usize) -> Result<MonomialBasis> {
        let n = engine.dim();
        let mut monomials = Vec::new();
        let mut exp = vec![0u16; n];
        enumerate(engine, 0, d, &mut exp, &mut monomials)?;
        monomials.sort();
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Ok(MonomialBasis {
            sig: engine.sig(),
            degree: d,
            monomials,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: &PbwMonomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of `u` in this basis; errors if `u` sticks out.
    pub fn coords(&self, engine: &Engine, u: &EnvElement) -> Result<Vec<FieldElement>> {
        let mut v = vec![engine.field.zero(); self.len()];
        for (m, c) in &u.terms {
            let i = self.index_of(m).ok_or_else(|| {
                Error::ShapeMismatch(format!(
                    "element of degree {} does not fit in the degree-{} slice",
                    m.degree(),
                    self.degree
                ))
            })?;
            v[i] = *c;
        }
        Ok(v)
    }

    pub fn element(&self, engine: &Engine, v: &[FieldElement]) -> EnvElement {
        let mut u = engine.zero();
        for (i, c) in v.iter().enumerate() {
            if engine.field.is_zero(c) {
                continue;
            }
            let single = EnvElement {
                sig: self.sig,
                terms: std::collections::BTreeMap::from([(self.monomials[i].clone(), *c)]),
            };
            u = engine.add(&u, &single);
        }
        u
    }
}

fn enumerate(
    engine: &Engine,
    pos: usize,
    remaining: usize,
    exp: &mut Vec<u16>,
    out: &mut Vec<PbwMonomial>,
) -> Result<()> {
    if pos == engine.dim() {
        if out.len() >= MONOMIAL_BUDGET {
            return Err(Error::BudgetExceeded {
                rows: out.len() + 1,
                cols: out.len() + 1,
                limit: MONOMIAL_BUDGET,
            });
        }
        out.push(PbwMonomial(exp.clone()));
        return Ok(());
    }
    let max_here = if engine.parity_at(pos) == 1 {
        remaining.min(1)
    } else {
        remaining
    };
    for e in 0..=max_here {
        exp[pos] = e as u16;
        enumerate(engine, pos + 1, remaining - e, exp, out)?;
    }
    exp[pos] = 0;
    Ok(())
}

/// A degree-bounded subspace of `U(g)` with a distinguished spanning list.
#[derive(Debug, Clone)]
pub struct Slice {
    pub degree: usize,
    /// linearly independent spanning elements, in discovery order
    pub basis: Vec<EnvElement>,
}

impl Slice {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Basis of `{u in U^{<= d} : ad x_i(u) = 0 for all basis x_i}` (twisted:
/// `ad_t`), computed as the joint kernel of the per-generator ad-matrices.
pub fn centralizer_slice(engine: &Engine, d: usize, twisted: bool) -> Result<Slice> {
    let basis = MonomialBasis::new(engine, d)?;
    // ad preserves the filtration, but the twisted action of an odd x on an
    // even u is the anticommutator xu + ux, which raises degree by one --
    // images live one degree up
    let target = MonomialBasis::new(engine, d + usize::from(twisted))?;
    let n = basis.len();
    let nt = target.len();
    let field = &engine.field;
    // current solution space, seeded with the full slice
    let mut space: Vec<Vec<FieldElement>> = (0..n)
        .map(|i| {
            let mut v = vec![field.zero(); n];
            v[i] = field.one();
            v
        })
        .collect();
    for gen in 0..engine.spec.dim() {
        if space.is_empty() {
            break;
        }
        // ad x_gen column by column over the monomial basis; monomials are
        // parity-homogeneous, so the twisted action is defined on each and
        // extends linearly
        let cols: Vec<Vec<(usize, FieldElement)>> = (0..n)
            .into_par_iter()
            .map(|j| {
                let single = basis.element(engine, &{
                    let mut v = vec![field.zero(); n];
                    v[j] = field.one();
                    v
                });
                let img = engine
                    .ad_action(gen, &single, twisted)
                    .expect("monomials are parity-homogeneous");
                img.terms
                    .iter()
                    .map(|(m, c)| (target.index_of(m).expect("image fits one degree up"), *c))
                    .collect()
            })
            .collect();
        // restricted matrix: ad applied to each current space vector
        let mut m = Matrix::zeros(nt, space.len(), field);
        for (col, v) in space.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if field.is_zero(vj) {
                    continue;
                }
                for &(i, ref c) in &cols[j] {
                    let cur = *m.at(i, col);
                    *m.at_mut(i, col) = field.add(&cur, &field.mul(c, vj));
                }
            }
        }
        let kernel = m.kernel_basis(field);
        // combine: new space = { sum_j k_j * space_j }
        space = kernel
            .into_iter()
            .map(|k| {
                let mut v = vec![field.zero(); n];
                for (j, kj) in k.iter().enumerate() {
                    if field.is_zero(kj) {
                        continue;
                    }
                    for (i, c) in space[j].iter().enumerate() {
                        v[i] = field.add(&v[i], &field.mul(kj, c));
                    }
                }
                v
            })
            .collect();
    }
    // echelonize for a canonical, deterministic basis
    let sb = SpanBasis::new(&space, n, field);
    let basis_elems = (0..sb.dim())
        .map(|i| basis.element(engine, sb.rref.row(i)))
        .collect();
    Ok(Slice {
        degree: d,
        basis: basis_elems,
    })
}

/// Linear span of all products of the generators with total degree at most
/// `d`. When `require_commuting` is set, the generators must pairwise
/// commute (checked exactly).
pub fn subalgebra_slice(
    engine: &Engine,
    generators: &[EnvElement],
    d: usize,
    require_commuting: bool,
) -> Result<Slice> {
    if require_commuting {
        for (i, a) in generators.iter().enumerate() {
            for b in generators.iter().skip(i + 1) {
                let ab = engine.mul(a, b)?;
                let ba = engine.mul(b, a)?;
                if ab != ba {
                    return Err(Error::NonCommutingGenerators);
                }
            }
        }
    }
    let basis = MonomialBasis::new(engine, d)?;
    let field = engine.field.clone();
    let degrees: Vec<usize> = generators.iter().map(|g| g.degree().max(0)).collect();
    // Nominal degree bookkeeping: enumeration sums generator degrees, but a
    // product's true degree can drop below the sum when top symbols cancel.
    // Start with no slack and widen until no product within the bound was
    // produced only thanks to a drop.
    let mut slack = 0usize;
    loop {
        let mut products: Vec<(Vec<u16>, EnvElement)> = vec![(vec![0; generators.len()], engine.one())];
        let mut frontier = products.clone();
        let mut max_drop = 0usize;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (exp, val) in &frontier {
                for (gi, g) in generators.iter().enumerate() {
                    // canonical path: extend only at the last touched slot
                    // to enumerate each exponent vector once
                    if exp[gi + 1..].iter().any(|&e| e > 0) {
                        continue;
                    }
                    let nominal: usize = exp
                        .iter()
                        .zip(&degrees)
                        .map(|(&e, &dg)| e as usize * dg)
                        .sum::<usize>()
                        + degrees[gi];
                    if degrees[gi] == 0 && exp[gi] >= 1 {
                        continue; // scalar-degree generators contribute once
                    }
                    if nominal > d + slack {
                        continue;
                    }
                    let prod = engine.mul(val, g)?;
                    if prod.is_zero() {
                        continue;
                    }
                    let mut e2 = exp.clone();
                    e2[gi] += 1;
                    max_drop = max_drop.max(nominal.saturating_sub(prod.degree()));
                    next.push((e2, prod));
                }
            }
            products.extend(next.iter().cloned());
            frontier = next;
        }
        if max_drop > slack {
            slack = max_drop;
            continue;
        }
        let kept: Vec<EnvElement> = products
            .into_iter()
            .map(|(_, v)| v)
            .filter(|v| v.degree() <= d)
            .collect();
        let vectors: Vec<Vec<FieldElement>> = kept
            .iter()
            .map(|u| basis.coords(engine, u))
            .collect::<Result<_>>()?;
        let sb = SpanBasis::new(&vectors, basis.len(), &field);
        let chosen = sb.chosen.iter().map(|&i| kept[i].clone()).collect();
        return Ok(Slice {
            degree: d,
            basis: chosen,
        });
    }
}

/// Outcome of a subspace comparison, with witnesses for strictness.
#[derive(Debug, Clone)]
pub enum SliceComparison {
    Equal,
    /// A is a proper subspace of B; the witness lies in B but not A.
    FirstInSecond { witness: EnvElement },
    /// B is a proper subspace of A; the witness lies in A but not B.
    SecondInFirst { witness: EnvElement },
    Incomparable {
        in_first_only: EnvElement,
        in_second_only: EnvElement,
    },
}

impl SliceComparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, SliceComparison::Equal)
    }
}

pub fn slice_compare(engine: &Engine, a: &Slice, b: &Slice) -> Result<SliceComparison> {
    if a.degree != b.degree {
        return Err(Error::ShapeMismatch(format!(
            "cannot compare slices of degree {} and {}",
            a.degree, b.degree
        )));
    }
    let d = a.degree.max(
        a.basis
            .iter()
            .chain(&b.basis)
            .map(|u| u.degree())
            .max()
            .unwrap_or(0),
    );
    let basis = MonomialBasis::new(engine, d)?;
    let field = &engine.field;
    let va: Vec<Vec<FieldElement>> = a
        .basis
        .iter()
        .map(|u| basis.coords(engine, u))
        .collect::<Result<_>>()?;
    let vb: Vec<Vec<FieldElement>> = b
        .basis
        .iter()
        .map(|u| basis.coords(engine, u))
        .collect::<Result<_>>()?;
    let span_a = SpanBasis::new(&va, basis.len(), field);
    let span_b = SpanBasis::new(&vb, basis.len(), field);
    let a_missing = vb
        .iter()
        .enumerate()
        .find(|(_, v)| !span_a.contains(v))
        .map(|(i, _)| b.basis[i].clone());
    let b_missing = va
        .iter()
        .enumerate()
        .find(|(_, v)| !span_b.contains(v))
        .map(|(i, _)| a.basis[i].clone());
    Ok(match (b_missing, a_missing) {
        (None, None) => SliceComparison::Equal,
        (None, Some(w)) => SliceComparison::FirstInSecond { witness: w },
        (Some(w), None) => SliceComparison::SecondInFirst { witness: w },
        (Some(wa), Some(wb)) => SliceComparison::Incomparable {
            in_first_only: wa,
            in_second_only: wb,
        },
    })
}

/// A set of polynomial relations among named elements: each row is a sparse
/// polynomial (exponent tuple, coefficient) that evaluates to zero in U(g).
#[derive(Debug, Clone)]
pub struct RelationSet {
    /// exponent tuples indexing the searched monomials
    pub monomial_exps: Vec<Vec<u16>>,
    /// kernel vectors: coefficients per monomial
    pub relations: Vec<Vec<FieldElement>>,
}

impl RelationSet {
    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// Sparse view of relation `r`.
    pub fn poly(&self, r: usize, field: &crate::scalar::Field) -> Vec<(Vec<u16>, FieldElement)> {
        self.monomial_exps
            .iter()
            .zip(&self.relations[r])
            .filter(|(_, c)| !field.is_zero(c))
            .map(|(e, c)| (e.clone(), *c))
            .collect()
    }
}

/// Find all coefficient vectors `c` with `sum_m c_m m(elements) = 0` in
/// `U(g)`, over monomials `m` whose exponents respect `caps` (per element)
/// and whose nominal total degree is at most `total_degree`. The kernel of
/// the evaluation matrix is the answer; every returned relation is
/// re-evaluated and asserted to vanish.
pub fn find_relations(
    engine: &Engine,
    elements: &[EnvElement],
    caps: &[usize],
    total_degree: usize,
) -> Result<RelationSet> {
    assert_eq!(elements.len(), caps.len());
    for (i, a) in elements.iter().enumerate() {
        for b in elements.iter().skip(i + 1) {
            if engine.mul(a, b)? != engine.mul(b, a)? {
                return Err(Error::NonCommutingGenerators);
            }
        }
    }
    let degrees: Vec<usize> = elements.iter().map(|e| e.degree()).collect();
    // enumerate exponent tuples
    let mut exps: Vec<Vec<u16>> = Vec::new();
    let mut cur = vec![0u16; elements.len()];
    loop {
        let nominal: usize = cur
            .iter()
            .zip(&degrees)
            .map(|(&e, &d)| e as usize * d)
            .sum();
        if nominal <= total_degree {
            exps.push(cur.clone());
        }
        // odometer over the capped box
        let mut i = 0;
        loop {
            if i == cur.len() {
                exps.sort_by_key(|e| {
                    (
                        e.iter()
                            .zip(&degrees)
                            .map(|(&x, &d)| x as usize * d)
                            .sum::<usize>(),
                        e.clone(),
                    )
                });
                return finish_relations(engine, elements, exps, total_degree);
            }
            cur[i] += 1;
            if cur[i] as usize <= caps[i] {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

fn finish_relations(
    engine: &Engine,
    elements: &[EnvElement],
    exps: Vec<Vec<u16>>,
    total_degree: usize,
) -> Result<RelationSet> {
    let field = &engine.field;
    // evaluate monomials, reusing smaller products (exps is sorted by
    // nominal degree, so a predecessor with one lower exponent exists)
    let mut values: HashMap<Vec<u16>, EnvElement> = HashMap::new();
    values.insert(vec![0; elements.len()], engine.one());
    let mut evaluated: Vec<(Vec<u16>, EnvElement)> = Vec::with_capacity(exps.len());
    for e in &exps {
        if !values.contains_key(e) {
            let i = e.iter().position(|&x| x > 0).expect("nonzero exponent");
            let mut prev = e.clone();
            prev[i] -= 1;
            let base = values
                .get(&prev)
                .cloned()
                .map(Ok)
                .unwrap_or_else(|| evaluate_monomial(engine, elements, &prev))?;
            let val = engine.mul(&base, &elements[i])?;
            values.insert(e.clone(), val);
        }
        evaluated.push((e.clone(), values[e].clone()));
    }
    // flatten into the span of occurring PBW monomials
    let basis = MonomialBasis::new(engine, total_degree)?;
    let rows = basis.len();
    let cols = evaluated.len();
    if rows.saturating_mul(cols) > 200_000_000 {
        return Err(Error::BudgetExceeded {
            rows,
            cols,
            limit: 200_000_000,
        });
    }
    let mut m = Matrix::zeros(rows, cols, field);
    for (j, (_, val)) in evaluated.iter().enumerate() {
        for (i, c) in basis.coords(engine, val)?.iter().enumerate() {
            *m.at_mut(i, j) = *c;
        }
    }
    let kernel = m.kernel_basis(field);
    // exactness check: every relation evaluates to zero
    for k in &kernel {
        let mut acc = engine.zero();
        for (j, c) in k.iter().enumerate() {
            if field.is_zero(c) {
                continue;
            }
            acc = engine.add(&acc, &engine.scale(&evaluated[j].1, c));
        }
        assert!(acc.is_zero(), "relation kernel vector fails to vanish");
    }
    Ok(RelationSet {
        monomial_exps: evaluated.into_iter().map(|(e, _)| e).collect(),
        relations: kernel,
    })
}

fn evaluate_monomial(engine: &Engine, elements: &[EnvElement], exp: &[u16]) -> Result<EnvElement> {
    let mut acc = engine.one();
    for (i, &e) in exp.iter().enumerate() {
        for _ in 0..e {
            acc = engine.mul(&acc, &elements[i])?;
        }
    }
    Ok(acc)
}

/// Convenience: the center/anticenter generators of the osp(1|2) laboratory
/// (`1`, `xi_e`, `xi_h`, `xi_f`, and the square of the special element).
pub fn osp12_center_generators(engine: &Engine) -> Result<Vec<EnvElement>> {
    let spec = &engine.spec;
    let s_elem = special_s(engine)?;
    let s_sq = engine.mul(&s_elem, &s_elem)?;
    let mut gens = vec![engine.one()];
    for name in ["e", "h", "f"] {
        let idx = spec
            .index_of(name)
            .ok_or_else(|| Error::InvalidAlgebra("not osp(1|2)".into()))?;
        gens.push(engine.xi(idx));
    }
    gens.push(s_sq);
    Ok(gens)
}

/// `S = E F - F E + 1/2` in PBW normal form.
pub fn special_s(engine: &Engine) -> Result<EnvElement> {
    let spec = &engine.spec;
    let ee = spec.index_of("E").ok_or_else(|| Error::InvalidAlgebra("not osp(1|2)".into()))?;
    let ff = spec.index_of("F").ok_or_else(|| Error::InvalidAlgebra("not osp(1|2)".into()))?;
    let ef = engine.straighten(&[ee, ff], engine.field.one());
    let fe = engine.straighten(&[ff, ee], engine.field.one());
    let half = engine
        .field
        .inv(&engine.field.from_int(2))
        .expect("p odd");
    Ok(engine.add(&engine.sub(&ef, &fe), &engine.scalar(half)))
}

/// Report row for slice computations (CLI serialization).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SliceReport {
    pub degree: usize,
    pub twisted: bool,
    pub dimension: usize,
    pub all_even: bool,
    pub basis_rendered: Vec<String>,
    pub basis_terms: Vec<Vec<crate::pbw::TermJson>>,
}

pub fn slice_report(engine: &Engine, slice: &Slice, twisted: bool) -> SliceReport {
    let all_even = slice
        .basis
        .iter()
        .all(|u| engine.parity_split(u).1.is_zero());
    SliceReport {
        degree: slice.degree,
        twisted,
        dimension: slice.dim(),
        all_even,
        basis_rendered: slice.basis.iter().map(|u| engine.render(u)).collect(),
        basis_terms: slice.basis.iter().map(|u| engine.to_terms(u)).collect(),
    }
}

/// Build an engine with the standard order over the prime field.
pub fn standard_engine(spec: crate::superalg::SuperAlgebraSpec) -> Result<Engine> {
    Engine::standard(Arc::new(spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalg::builtin;

    fn osp12(p: u32) -> Engine {
        standard_engine(builtin("osp", (1, 2), p).unwrap()).unwrap()
    }

    #[test]
    fn monomial_count_osp12() {
        let eng = osp12(3);
        // degree <= 2 over (f, F, h, E, e): 1 constant, 5 linear, and in
        // degree 2: 6 even-even, 6 even-odd, 1 odd-odd (F E)
        let basis = MonomialBasis::new(&eng, 2).unwrap();
        assert_eq!(basis.len(), 19);
    }

    #[test]
    fn center_slice_degree_zero_is_the_scalars() {
        let eng = osp12(3);
        let slice = centralizer_slice(&eng, 0, false).unwrap();
        assert_eq!(slice.dim(), 1);
        assert_eq!(slice.basis[0], eng.one());
    }

    #[test]
    fn center_slice_membership_is_ad_annihilation() {
        let eng = osp12(3);
        let slice = centralizer_slice(&eng, 3, false).unwrap();
        for u in &slice.basis {
            for x in 0..eng.spec.dim() {
                assert!(eng.ad_action(x, u, false).unwrap().is_zero());
            }
        }
        // must contain 1, xi_e, xi_h, xi_f and the degree-2 part of the
        // special element's square
        let basis = MonomialBasis::new(&eng, 3).unwrap();
        let vecs: Vec<_> = slice
            .basis
            .iter()
            .map(|u| basis.coords(&eng, u).unwrap())
            .collect();
        let span = SpanBasis::new(&vecs, basis.len(), &eng.field);
        for name in ["e", "h", "f"] {
            let xi = eng.xi(eng.spec.index_of(name).unwrap());
            assert!(span.contains(&basis.coords(&eng, &xi).unwrap()));
        }
        let s = special_s(&eng).unwrap();
        let s2 = eng.mul(&s, &s).unwrap();
        assert_eq!(s2.degree(), 2, "S^2 drops to filtration degree 2");
        assert!(span.contains(&basis.coords(&eng, &s2).unwrap()));
        // degree-3 slice: span{1, S^2, xi_e, xi_h, xi_f}
        assert_eq!(slice.dim(), 5);
    }

    #[test]
    fn anticenter_slice_at_degree_two_is_spanned_by_s() {
        let eng = osp12(3);
        let slice = centralizer_slice(&eng, 2, true).unwrap();
        assert_eq!(slice.dim(), 1);
        let s = special_s(&eng).unwrap();
        let cmp = slice_compare(
            &eng,
            &slice,
            &Slice {
                degree: 2,
                basis: vec![s],
            },
        )
        .unwrap();
        assert!(cmp.is_equal());
    }

    #[test]
    fn anticenter_has_no_low_degree_part() {
        let eng = osp12(3);
        assert_eq!(centralizer_slice(&eng, 0, true).unwrap().dim(), 0);
        assert_eq!(centralizer_slice(&eng, 1, true).unwrap().dim(), 0);
    }

    #[test]
    fn filtration_compatibility_of_center_slices() {
        let eng = osp12(3);
        let s2 = centralizer_slice(&eng, 2, false).unwrap();
        let s3 = centralizer_slice(&eng, 3, false).unwrap();
        // embed the degree-2 slice and compare inside degree 3
        let lifted = Slice {
            degree: 3,
            basis: s2.basis.clone(),
        };
        match slice_compare(&eng, &lifted, &s3).unwrap() {
            SliceComparison::FirstInSecond { .. } | SliceComparison::Equal => {}
            other => panic!("expected containment, got {other:?}"),
        }
    }

    #[test]
    fn trivial_generator_spans_the_scalars() {
        let eng = osp12(3);
        let slice = subalgebra_slice(&eng, &[eng.one()], 4, true).unwrap();
        assert_eq!(slice.dim(), 1);
    }

    #[test]
    fn xi_h_generates_its_powers() {
        let eng = osp12(3);
        let xi_h = eng.xi(eng.spec.index_of("h").unwrap());
        let slice = subalgebra_slice(&eng, &[eng.one(), xi_h], 7, true).unwrap();
        // {1, xi_h, xi_h^2}: xi_h^2 has degree 6 <= 7
        assert_eq!(slice.dim(), 3);
    }

    #[test]
    fn slice_compare_detects_strict_containment() {
        let eng = osp12(3);
        let small = Slice {
            degree: 3,
            basis: vec![eng.one()],
        };
        let center = centralizer_slice(&eng, 3, false).unwrap();
        match slice_compare(&eng, &small, &center).unwrap() {
            SliceComparison::FirstInSecond { witness } => {
                assert!(witness.degree() >= 2);
            }
            other => panic!("expected strict containment, got {other:?}"),
        }
        assert!(slice_compare(&eng, &center, &center).unwrap().is_equal());
    }

    #[test]
    fn center_vs_anticenter_incomparable_at_degree_two() {
        let eng = osp12(3);
        let center = centralizer_slice(&eng, 2, false).unwrap();
        let anti = centralizer_slice(&eng, 2, true).unwrap();
        match slice_compare(&eng, &center, &anti).unwrap() {
            SliceComparison::Incomparable { .. } => {}
            other => panic!("expected incomparable, got {other:?}"),
        }
    }

    #[test]
    fn no_relation_on_a_transcendental_generator() {
        let eng = osp12(3);
        let xi_h = eng.xi(eng.spec.index_of("h").unwrap());
        let rels = find_relations(&eng, &[xi_h], &[2], 6).unwrap();
        assert!(rels.is_empty());
    }

    #[test]
    fn duplicate_elements_give_the_difference_relation() {
        let eng = osp12(3);
        let s = special_s(&eng).unwrap();
        let s2 = eng.mul(&s, &s).unwrap();
        let rels = find_relations(&eng, &[s2.clone(), s2], &[1, 1], 4).unwrap();
        // kernel contains v1 - v2 (and nothing of total degree > bound)
        assert_eq!(rels.relations.len(), 1);
        let poly = rels.poly(0, &eng.field);
        assert_eq!(poly.len(), 2);
        let (e1, c1) = &poly[0];
        let (e2, c2) = &poly[1];
        assert_eq!(e1.iter().sum::<u16>(), 1);
        assert_eq!(e2.iter().sum::<u16>(), 1);
        assert_eq!(*c2, eng.field.neg(c1));
    }

    #[test]
    fn non_commuting_generators_are_rejected() {
        let eng = osp12(3);
        let e = eng.gen_elem(eng.spec.index_of("e").unwrap());
        let f = eng.gen_elem(eng.spec.index_of("f").unwrap());
        assert!(matches!(
            subalgebra_slice(&eng, &[e, f], 3, true),
            Err(Error::NonCommutingGenerators)
        ));
    }

    #[test]
    fn monomial_budget_is_enforced() {
        let eng = osp12(3);
        match centralizer_slice(&eng, 60, false) {
            Err(crate::error::Error::BudgetExceeded { limit, .. }) => {
                assert_eq!(limit, MONOMIAL_BUDGET);
            }
            other => panic!("expected a budget error, got {other:?}"),
        }
    }

    #[test]
    fn evenness_of_center_and_anticenter_slices() {
        for p in [3u32] {
            let eng = osp12(p);
            for d in 0..=(2 * p as usize) {
                for twisted in [false, true] {
                    let slice = centralizer_slice(&eng, d, twisted).unwrap();
                    for u in &slice.basis {
                        let (_, odd) = eng.parity_split(u);
                        assert!(odd.is_zero(), "odd component in slice d={d} twisted={twisted}");
                    }
                }
            }
        }
    }
}
