//! The osp(1|2) laboratory: special elements S and Omega, center/anticenter
//! structure checks, the skew group ring `U(g)#H`, the hypersurface relation
//! among `(xi_e, xi_h, xi_f, S^2)`, and the smooth/singular tabulation of the
//! census points.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::central::{
    centralizer_slice, find_relations, slice_compare, special_s, subalgebra_slice, MonomialBasis,
    Slice, SliceComparison,
};
use crate::error::{Error, Result};
use crate::pbw::{Engine, EnvElement};
use crate::reduced::{OrbitTag, PCharacter};
use crate::repmod::{
    baby_verma, central_character_point, endo_type, is_irreducible, iso_test, lambda_set,
    simple_head, Borel, EndoType, IsoDegree, IsoVerdict, MatrixRep, Weight,
};
use crate::scalar::{Field, FieldElement, Matrix, SpanBasis};

/// `S = EF - FE + 1/2` and `Omega = (h^2 + 2h + 4fe)/8`, with the defining
/// identities asserted exactly: S commutes with the even part, anticommutes
/// with the odd part, S^2 is central, and `S^2 + S = 8 Omega + 3/4`.
pub fn special_elements(engine: &Engine) -> Result<(EnvElement, EnvElement)> {
    let spec = &engine.spec;
    let field = &engine.field;
    let s = special_s(engine)?;
    let h = spec.index_of("h").ok_or_else(|| Error::InvalidAlgebra("not osp(1|2)".into()))?;
    let e = spec.index_of("e").unwrap();
    let f = spec.index_of("f").unwrap();
    let h2 = engine.straighten(&[h, h], field.one());
    let h1 = engine.scale(&engine.gen_elem(h), &field.from_int(2));
    let fe = engine.scale(&engine.straighten(&[f, e], field.one()), &field.from_int(4));
    let eighth = field.inv(&field.from_int(8)).expect("p > 2");
    let omega = engine.scale(&engine.add(&engine.add(&h2, &h1), &fe), &eighth);
    // identity checks are hard errors: a failure is an engine bug
    for i in 0..spec.dim() {
        if spec.parity(i) == 0 {
            let ad = engine.ad_action(i, &s, false)?;
            assert!(ad.is_zero(), "S must commute with the even part");
        } else {
            let ad_t = engine.ad_action(i, &s, true)?;
            assert!(ad_t.is_zero(), "S must anticommute with the odd part");
        }
    }
    let s2 = engine.mul(&s, &s)?;
    for i in 0..spec.dim() {
        assert!(
            engine.ad_action(i, &s2, false)?.is_zero(),
            "S^2 must be central"
        );
    }
    let lhs = engine.add(&s2, &s);
    let rhs = engine.add(
        &engine.scale(&omega, &field.from_int(8)),
        &engine.scalar(field.mul(
            &field.from_int(3),
            &field.inv(&field.from_int(4)).unwrap(),
        )),
    );
    assert_eq!(lhs, rhs, "S^2 + S = 8 Omega + 3/4 must hold exactly");
    Ok((s, omega))
}

/// Verdict of a slice-equality check, with a witness on failure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SliceVerdict {
    pub degree: usize,
    pub equal: bool,
    pub lhs_dim: usize,
    pub rhs_dim: usize,
    pub witness: Option<String>,
}

/// Is the degree-d center slice exactly the slice generated by
/// `1, xi_e, xi_h, xi_f, S^2`?
pub fn center_generation_check(engine: &Engine, d: usize) -> Result<SliceVerdict> {
    let center = centralizer_slice(engine, d, false)?;
    let gens = crate::central::osp12_center_generators(engine)?;
    let generated = subalgebra_slice(engine, &gens, d, true)?;
    let cmp = slice_compare(engine, &center, &generated)?;
    Ok(verdict_from(engine, d, &center, &generated, cmp))
}

/// Is the degree-d anticenter slice exactly `S * (center slice at d - 2)`?
pub fn anticenter_check(engine: &Engine, d: usize) -> Result<SliceVerdict> {
    let anti = centralizer_slice(engine, d, true)?;
    let (s, _) = special_elements(engine)?;
    let rhs_basis = if d >= 2 {
        let center = centralizer_slice(engine, d - 2, false)?;
        center
            .basis
            .iter()
            .map(|z| engine.mul(&s, z))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let rhs = Slice {
        degree: d,
        basis: rhs_basis,
    };
    let cmp = slice_compare(engine, &anti, &rhs)?;
    Ok(verdict_from(engine, d, &anti, &rhs, cmp))
}

fn verdict_from(
    engine: &Engine,
    d: usize,
    lhs: &Slice,
    rhs: &Slice,
    cmp: SliceComparison,
) -> SliceVerdict {
    let witness = match &cmp {
        SliceComparison::Equal => None,
        SliceComparison::FirstInSecond { witness } => Some(engine.render(witness)),
        SliceComparison::SecondInFirst { witness } => Some(engine.render(witness)),
        SliceComparison::Incomparable { in_first_only, .. } => Some(engine.render(in_first_only)),
    };
    SliceVerdict {
        degree: d,
        equal: cmp.is_equal(),
        lhs_dim: lhs.dim(),
        rhs_dim: rhs.dim(),
        witness,
    }
}

// ---------------------------------------------------------------------------
// Hypersurface relation and the Jacobian smoothness classifier
// ---------------------------------------------------------------------------

/// A polynomial in `(xi_e, xi_h, xi_f, T = S^2)` over `F_p`, sparse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationPoly {
    pub terms: Vec<(Vec<u16>, FieldElement)>,
}

impl RelationPoly {
    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.iter().map(|(e, _)| e[var]).max().unwrap_or(0)
    }

    pub fn eval(&self, coeff_field: &Field, target: &Field, point: &[FieldElement]) -> FieldElement {
        let mut acc = target.zero();
        for (e, c) in &self.terms {
            let mut term = target.from_coeffs(&coeff_field.coeffs_vec(c));
            for (v, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = target.mul(&term, &point[v]);
                }
            }
            acc = target.add(&acc, &term);
        }
        acc
    }

    pub fn partial(&self, field: &Field, var: usize) -> RelationPoly {
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            let c2 = field.mul(c, &field.from_int(e[var] as i64));
            if !field.is_zero(&c2) {
                terms.push((e2, c2));
            }
        }
        RelationPoly { terms }
    }

    pub fn render(&self, field: &Field) -> String {
        let names = ["xi_e", "xi_h", "xi_f", "T"];
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let mut factors = String::new();
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !factors.is_empty() {
                    factors.push(' ');
                }
                if k == 1 {
                    factors.push_str(names[v]);
                } else {
                    factors.push_str(&format!("{}^{}", names[v], k));
                }
            }
            let coeff = field.render(c);
            parts.push(if factors.is_empty() {
                coeff
            } else if coeff == "1" {
                factors
            } else {
                format!("{coeff}*{factors}")
            });
        }
        parts.join(" + ")
    }
}

/// The discovered hypersurface data: the minimal relation, monic of degree p
/// in the `S^2` variable, plus the evidence for minimality and principality
/// at the searched bound.
#[derive(Debug, Clone)]
pub struct Hypersurface {
    pub p: u32,
    pub relation: RelationPoly,
    /// no relation exists with S^2-degree below p (re-search at cap p-1)
    pub minimal: bool,
    /// the kernel at the searched bound is one-dimensional
    pub principal_at_bound: bool,
}

impl Hypersurface {
    /// Smooth iff some partial derivative is nonzero at the point
    /// `(xi_e, xi_h, xi_f, S^2)`.
    pub fn is_smooth(&self, coeff_field: &Field, target: &Field, point: &[FieldElement]) -> bool {
        (0..4).any(|v| {
            let d = self.relation.partial(coeff_field, v);
            !target.is_zero(&d.eval(coeff_field, target, point))
        })
    }
}

/// Search for the minimal relation among `(xi_e, xi_h, xi_f, S^2)`.
///
/// The kernel of the evaluation matrix at the searched bound contains the
/// minimal relation together with whatever monomial multiples of it fit the
/// bound; the minimal one is isolated as the kernel slice supported on
/// monomials of the lowest occupied filtration level, which must be
/// one-dimensional. Principality at the bound then means the kernel
/// dimension equals the number of monomial multiples of F fitting the box.
pub fn hypersurface_and_smoothness(engine: &Engine) -> Result<Hypersurface> {
    let p = engine.field.p();
    let field = &engine.field;
    let mut elements = Vec::with_capacity(4);
    for name in ["e", "h", "f"] {
        elements.push(engine.xi(engine.spec.index_of(name).unwrap()));
    }
    let (s, _) = special_elements(engine)?;
    elements.push(engine.mul(&s, &s)?);
    let degrees: Vec<usize> = elements.iter().map(|e| e.degree()).collect();
    let pu = p as usize;
    let caps = [pu - 1, pu - 1, pu - 1, pu];
    let total = pu * (pu - 1);
    let rels = find_relations(engine, &elements, &caps, total)?;
    if rels.relations.is_empty() {
        return Err(Error::InvalidAlgebra(format!(
            "no relation found at S^2-degree <= {p} and total degree {total}; enlarge the bound"
        )));
    }
    let fil = |e: &[u16]| -> usize {
        e.iter()
            .zip(&degrees)
            .map(|(&x, &d)| x as usize * d)
            .sum::<usize>()
    };
    // kernel vectors supported on filtration <= t, for increasing t: the
    // first nonempty level carries exactly the scalar multiples of F
    let kernel_supported = |t: usize| -> Vec<Vec<FieldElement>> {
        let high: Vec<usize> = (0..rels.monomial_exps.len())
            .filter(|&j| fil(&rels.monomial_exps[j]) > t)
            .collect();
        if high.is_empty() {
            return rels.relations.clone();
        }
        let mut m = Matrix::zeros(high.len(), rels.relations.len(), field);
        for (row, &j) in high.iter().enumerate() {
            for (col, k) in rels.relations.iter().enumerate() {
                *m.at_mut(row, col) = k[j];
            }
        }
        m.kernel_basis(field)
            .into_iter()
            .map(|combo| {
                let mut v = vec![field.zero(); rels.monomial_exps.len()];
                for (col, c) in combo.iter().enumerate() {
                    if field.is_zero(c) {
                        continue;
                    }
                    for (j, x) in rels.relations[col].iter().enumerate() {
                        v[j] = field.add(&v[j], &field.mul(c, x));
                    }
                }
                v
            })
            .collect()
    };
    let mut minimal_vec = None;
    for t in 0..=total {
        let slice = kernel_supported(t);
        if !slice.is_empty() {
            if slice.len() != 1 {
                return Err(Error::InvalidAlgebra(format!(
                    "minimal filtration level {t} carries {} independent relations",
                    slice.len()
                )));
            }
            minimal_vec = Some(slice.into_iter().next().unwrap());
            break;
        }
    }
    let minimal_vec =
        minimal_vec.ok_or_else(|| Error::InvalidAlgebra("kernel mysteriously empty".into()))?;
    let raw: Vec<(Vec<u16>, FieldElement)> = rels
        .monomial_exps
        .iter()
        .zip(&minimal_vec)
        .filter(|(_, c)| !field.is_zero(c))
        .map(|(e, c)| (e.clone(), *c))
        .collect();
    let t_deg = raw.iter().map(|(e, _)| e[3]).max().unwrap_or(0);
    if t_deg != p as u16 {
        return Err(Error::InvalidAlgebra(format!(
            "relation has S^2-degree {t_deg}, expected {p}"
        )));
    }
    let lead = raw
        .iter()
        .find(|(e, _)| e[3] == t_deg && e[..3].iter().all(|&x| x == 0))
        .map(|(_, c)| *c)
        .ok_or_else(|| Error::InvalidAlgebra("relation is not monic in S^2".into()))?;
    let inv = field.inv(&lead)?;
    let relation = RelationPoly {
        terms: raw
            .into_iter()
            .map(|(e, c)| (e, field.mul(&c, &inv)))
            .collect(),
    };
    // principality at the searched bound: the kernel dimension must equal
    // the number of monomial multiples of F whose every term fits the box
    let mut multiple_count = 0usize;
    let mut g = vec![0u16; 4];
    'outer: loop {
        let fits = relation.terms.iter().all(|(e, _)| {
            let sum: Vec<u16> = e.iter().zip(&g).map(|(a, b)| a + b).collect();
            sum.iter()
                .zip(&caps)
                .all(|(&x, &c)| (x as usize) <= c)
                && fil(&sum) <= total
        });
        if fits {
            multiple_count += 1;
        }
        let mut i = 0;
        loop {
            if i == 4 {
                break 'outer;
            }
            g[i] += 1;
            if (g[i] as usize) <= caps[i] {
                break;
            }
            g[i] = 0;
            i += 1;
        }
    }
    let principal_at_bound = rels.relations.len() == multiple_count;
    if !principal_at_bound {
        return Err(Error::InvalidAlgebra(format!(
            "kernel dimension {} differs from the {} multiples of F at the bound; \
             the relation ideal is not principal there",
            rels.relations.len(),
            multiple_count
        )));
    }
    // minimality of the S^2-degree: exhaustive re-search with the cap
    // lowered to p - 1 must come up empty
    let caps_low = [pu - 1, pu - 1, pu - 1, pu - 1];
    let rels_low = find_relations(engine, &elements, &caps_low, total)?;
    let minimal = rels_low.relations.is_empty();
    Ok(Hypersurface {
        p,
        relation,
        minimal,
        principal_at_bound,
    })
}

// ---------------------------------------------------------------------------
// Census and the locus report
// ---------------------------------------------------------------------------

/// One iso-class of irreducible modules with its central-character point.
#[derive(Debug, Clone)]
pub struct CensusRow {
    pub chi_tag: OrbitTag,
    pub lambda_label: String,
    pub module_name: String,
    pub dim: usize,
    pub endo: EndoType,
    /// `(xi_e, xi_h, xi_f, S^2)` scalars over `F_{p^2}`
    pub point: Vec<FieldElement>,
    pub max_dim: bool,
}

/// The irreducible census for one character family.
pub struct Census {
    pub p: u32,
    pub ext: Field,
    pub rows: Vec<CensusRow>,
    /// names of verification steps that passed/failed while building
    pub checks: Vec<(String, bool)>,
}

/// The point generators `(xi_e, xi_h, xi_f, S^2)` over an engine.
pub fn point_generators(engine: &Engine) -> Result<Vec<EnvElement>> {
    let mut gens = Vec::with_capacity(4);
    for name in ["e", "h", "f"] {
        gens.push(engine.xi(engine.spec.index_of(name).unwrap()));
    }
    let (s, _) = special_elements(engine)?;
    gens.push(engine.mul(&s, &s)?);
    Ok(gens)
}

fn fp_weight(field: &Field, v: i64) -> Weight {
    Weight {
        values: vec![field.from_int(v)],
    }
}

/// Build the census for one character: `chi_0` gives `(p+1)/2` classes with
/// the `lambda <-> p-1-lambda` pairing and one type-Q class at the midpoint;
/// `chi_1` gives p pairwise distinct type-M classes; `chi = 0` gives the p
/// simple heads `L(lambda)` of dimension `2 lambda + 1`.
pub fn osp12_census(p: u32, which: OrbitTag) -> Result<Census> {
    let spec = Arc::new(crate::superalg::builtin("osp", (1, 2), p)?);
    let field = spec.field();
    let ext = Field::extension(p, 2)?;
    let ext_engine = Engine::new(spec.clone(), ext.clone(), crate::pbw::OrderKind::Standard)?;
    let gens = point_generators(&ext_engine)?;
    let mut rows = Vec::new();
    let mut checks: Vec<(String, bool)> = Vec::new();
    let lift_rep = |rep: &MatrixRep| lift_to_ext(&spec, rep, &ext);
    match which {
        OrbitTag::NilpotentRegular => {
            let chi0 = PCharacter::osp12_nilpotent(&spec, &field)?;
            let reps: Vec<MatrixRep> = (0..p as i64)
                .map(|l| baby_verma(&spec, &field, &chi0, &fp_weight(&field, l), Borel::Standard))
                .collect::<Result<_>>()?;
            for (l, rep) in reps.iter().enumerate() {
                rep.validate(&spec)?;
                checks.push((
                    format!("Z_chi0({l}) irreducible"),
                    is_irreducible(&spec, rep).is_irreducible(),
                ));
            }
            // pairing lambda <-> p-1-lambda, including the recorded parity
            // of the isomorphism the search finds
            for l in 0..=(p as usize - 1) / 2 {
                let partner = p as usize - 1 - l;
                let verdict = iso_test(&spec, &reps[l], &reps[partner], IsoDegree::Any)?;
                let tag = match &verdict {
                    IsoVerdict::Isomorphic { parity, .. } => {
                        format!("Z_chi0({l}) = Z_chi0({partner}) (degree {parity})")
                    }
                    IsoVerdict::NotIsomorphic => {
                        format!("Z_chi0({l}) = Z_chi0({partner}) missing")
                    }
                };
                checks.push((tag, verdict.is_isomorphic()));
            }
            // distinct classes are pairwise non-isomorphic
            for a in 0..=(p as usize - 1) / 2 {
                for b in a + 1..=(p as usize - 1) / 2 {
                    let verdict = iso_test(&spec, &reps[a], &reps[b], IsoDegree::Any)?;
                    checks.push((
                        format!("Z_chi0({a}) and Z_chi0({b}) distinct"),
                        !verdict.is_isomorphic(),
                    ));
                }
            }
            for l in 0..=(p as usize - 1) / 2 {
                let et = endo_type(&spec, &reps[l])?;
                let expect = if l == (p as usize - 1) / 2 {
                    EndoType::Q
                } else {
                    EndoType::M
                };
                checks.push((format!("Z_chi0({l}) type {expect}"), et == expect));
                let lifted = lift_rep(&reps[l]);
                let point = central_character_point(&ext_engine, &lifted, &gens)?;
                rows.push(CensusRow {
                    chi_tag: OrbitTag::NilpotentRegular,
                    lambda_label: l.to_string(),
                    module_name: format!("Z_chi0({l})"),
                    dim: reps[l].dim,
                    endo: et,
                    point,
                    max_dim: reps[l].dim == 2 * p as usize,
                });
            }
        }
        OrbitTag::SemisimpleRegular => {
            let chi1 = PCharacter::osp12_semisimple(&spec, &ext)?;
            let weights = lambda_set(&spec, &ext, &chi1)?;
            checks.push((format!("|Lambda(chi1)| = {p}"), weights.len() == p as usize));
            let reps: Vec<MatrixRep> = weights
                .iter()
                .map(|w| baby_verma(&spec, &ext, &chi1, w, Borel::Standard))
                .collect::<Result<_>>()?;
            for (i, rep) in reps.iter().enumerate() {
                rep.validate(&spec)?;
                checks.push((
                    format!("Z_chi1(#{i}) irreducible"),
                    is_irreducible(&spec, rep).is_irreducible(),
                ));
                let et = endo_type(&spec, rep)?;
                checks.push((format!("Z_chi1(#{i}) type M"), et == EndoType::M));
                let point = central_character_point(&ext_engine, rep, &gens)?;
                rows.push(CensusRow {
                    chi_tag: OrbitTag::SemisimpleRegular,
                    lambda_label: ext.render(&weights[i].values[0]),
                    module_name: format!("Z_chi1({})", ext.render(&weights[i].values[0])),
                    dim: rep.dim,
                    endo: et,
                    point,
                    max_dim: rep.dim == 2 * p as usize,
                });
            }
            for a in 0..reps.len() {
                for b in a + 1..reps.len() {
                    let verdict = iso_test(&spec, &reps[a], &reps[b], IsoDegree::Any)?;
                    checks.push((
                        format!("Z_chi1(#{a}) and Z_chi1(#{b}) distinct"),
                        !verdict.is_isomorphic(),
                    ));
                }
            }
        }
        OrbitTag::Zero => {
            let chi = PCharacter::zero(&spec, &field);
            for l in 0..p as i64 {
                let z = baby_verma(&spec, &field, &chi, &fp_weight(&field, l), Borel::Standard)?;
                let head = simple_head(&spec, &z)?;
                head.validate(&spec)?;
                checks.push((
                    format!("dim L({l}) = {}", 2 * l + 1),
                    head.dim == (2 * l + 1) as usize,
                ));
                let et = endo_type(&spec, &head)?;
                let lifted = lift_rep(&head);
                let point = central_character_point(&ext_engine, &lifted, &gens)?;
                rows.push(CensusRow {
                    chi_tag: OrbitTag::Zero,
                    lambda_label: l.to_string(),
                    module_name: format!("L({l})"),
                    dim: head.dim,
                    endo: et,
                    point,
                    max_dim: head.dim == 2 * p as usize,
                });
            }
        }
        OrbitTag::Other => {
            return Err(Error::InvalidAlgebra(
                "census supports the three osp(1|2) orbit representatives".into(),
            ))
        }
    }
    Ok(Census {
        p,
        ext,
        rows,
        checks,
    })
}

/// Base-change an F_p representation to the quadratic extension.
fn lift_to_ext(spec: &SuperAlgebraSpecArc, rep: &MatrixRep, ext: &Field) -> MatrixRep {
    let src = &rep.field;
    let lift_mat = |m: &Matrix| {
        let mut out = Matrix::zeros(m.rows, m.cols, ext);
        for i in 0..m.rows {
            for j in 0..m.cols {
                *out.at_mut(i, j) = ext.from_coeffs(&src.coeffs_vec(m.at(i, j)));
            }
        }
        out
    };
    let chi = PCharacter::new(
        spec,
        ext,
        rep.chi
            .values
            .iter()
            .map(|v| ext.from_coeffs(&src.coeffs_vec(v)))
            .collect(),
    );
    MatrixRep {
        field: ext.clone(),
        dim: rep.dim,
        parity: rep.parity.clone(),
        action: rep.action.iter().map(lift_mat).collect(),
        chi,
        cyclic: rep
            .cyclic
            .as_ref()
            .map(|v| v.iter().map(|c| ext.from_coeffs(&src.coeffs_vec(c))).collect()),
        label: rep.label.clone(),
    }
}

type SuperAlgebraSpecArc = Arc<crate::superalg::SuperAlgebraSpec>;

/// A row of the final table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocusRow {
    pub chi: String,
    pub lambda: String,
    pub module: String,
    pub dim: usize,
    pub endo_type: String,
    pub point: Vec<Vec<u32>>,
    pub max_dim: bool,
    pub smooth: bool,
}

/// Table of central-character points with the smooth/singular partition and
/// the supporting assertions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocusReport {
    pub p: u32,
    pub relation: String,
    pub relation_minimal: bool,
    pub relation_principal_at_bound: bool,
    pub rows: Vec<LocusRow>,
    /// set identity: {smooth points} = {max-dim module points} u {L((p-1)/2)}
    pub smooth_set_identity: bool,
    /// set identity: {singular points} = {points of L(lambda), lambda != (p-1)/2}
    pub singular_set_identity: bool,
    pub equal_points_equal_flags: bool,
    pub relation_vanishes_on_all_points: bool,
    pub singular_point_count: usize,
    /// counting singular loci by lambda labels instead of points gives p - 1
    pub label_singular_count: u32,
    pub count_note: String,
}

impl LocusReport {
    pub fn passed(&self) -> bool {
        self.smooth_set_identity
            && self.singular_set_identity
            && self.equal_points_equal_flags
            && self.relation_vanishes_on_all_points
            && self.relation_minimal
            && self.relation_principal_at_bound
    }
}

/// Run the whole pipeline: census over all three characters, hypersurface,
/// Jacobian classification, and the smooth/singular set identities.
/// Refuses to run if the generation check fails at degree 2p.
pub fn locus_report(p: u32) -> Result<LocusReport> {
    let spec = Arc::new(crate::superalg::builtin("osp", (1, 2), p)?);
    let engine = Engine::standard(spec.clone())?;
    let field = engine.field.clone();
    let gen_check = center_generation_check(&engine, 2 * p as usize)?;
    if !gen_check.equal {
        return Err(Error::InvalidAlgebra(
            "points live in (xi, S^2) coordinates only if the generation check holds".into(),
        ));
    }
    let hyper = hypersurface_and_smoothness(&engine)?;
    let mut rows_all: Vec<(CensusRow, Field)> = Vec::new();
    let mut ext = Field::extension(p, 2)?;
    for which in [
        OrbitTag::NilpotentRegular,
        OrbitTag::SemisimpleRegular,
        OrbitTag::Zero,
    ] {
        let census = osp12_census(p, which)?;
        for (name, ok) in &census.checks {
            if !ok {
                return Err(Error::InvalidAlgebra(format!("census check failed: {name}")));
            }
        }
        ext = census.ext.clone();
        for row in census.rows {
            rows_all.push((row, census.ext.clone()));
        }
    }
    let mut rows = Vec::new();
    let mut smooth_points: Vec<Vec<FieldElement>> = Vec::new();
    let mut singular_points: Vec<Vec<FieldElement>> = Vec::new();
    let mut expected_smooth: Vec<Vec<FieldElement>> = Vec::new();
    let mut expected_singular: Vec<Vec<FieldElement>> = Vec::new();
    let mut vanishes = true;
    let midpoint = ((p - 1) / 2).to_string();
    for (row, _) in &rows_all {
        let smooth = hyper.is_smooth(&field, &ext, &row.point);
        if field
            .elements()
            .is_empty()
        {
            unreachable!()
        }
        if !ext.is_zero(&hyper.relation.eval(&field, &ext, &row.point)) {
            vanishes = false;
        }
        let point_set = if smooth {
            &mut smooth_points
        } else {
            &mut singular_points
        };
        if !point_set.contains(&row.point) {
            point_set.push(row.point.clone());
        }
        let is_l = row.chi_tag == OrbitTag::Zero;
        if (row.max_dim || (is_l && row.lambda_label == midpoint))
            && !expected_smooth.contains(&row.point)
        {
            expected_smooth.push(row.point.clone());
        }
        if is_l && row.lambda_label != midpoint && !expected_singular.contains(&row.point) {
            expected_singular.push(row.point.clone());
        }
        rows.push(LocusRow {
            chi: row.chi_tag.to_string(),
            lambda: row.lambda_label.clone(),
            module: row.module_name.clone(),
            dim: row.dim,
            endo_type: row.endo.to_string(),
            point: row.point.iter().map(|c| ext.coeffs_vec(c)).collect(),
            max_dim: row.max_dim,
            smooth,
        });
    }
    let as_set = |v: &[Vec<FieldElement>]| {
        let mut s: Vec<_> = v.to_vec();
        s.sort();
        s
    };
    // at p = 3 the midpoint L(1) point may coincide with nothing, but the
    // paired L(lambda), L(p-1-lambda) share S^2 = (lambda + 1/2)^2, so the
    // expected-singular list already deduplicates
    let smooth_set_identity = as_set(&smooth_points) == as_set(&expected_smooth);
    let singular_set_identity = as_set(&singular_points) == as_set(&expected_singular);
    // rows with equal points must carry equal flags (flags are functions of
    // the point by construction; assert anyway)
    let mut equal_points_equal_flags = true;
    for a in &rows {
        for b in &rows {
            if a.point == b.point && a.smooth != b.smooth {
                equal_points_equal_flags = false;
            }
        }
    }
    let singular_point_count = singular_points.len();
    let count_note = format!(
        "computed {} distinct singular point(s); counting by lambda labels gives p - 1 = {}, \
         but the pairing L(lambda) ~ L(p-1-lambda) identifies those labels in pairs",
        singular_point_count,
        p - 1
    );
    Ok(LocusReport {
        p,
        relation: hyper.relation.render(&field),
        relation_minimal: hyper.minimal,
        relation_principal_at_bound: hyper.principal_at_bound,
        rows,
        smooth_set_identity,
        singular_set_identity,
        equal_points_equal_flags,
        relation_vanishes_on_all_points: vanishes,
        singular_point_count,
        label_singular_count: p - 1,
        count_note,
    })
}

// ---------------------------------------------------------------------------
// Skew group ring U(g)#H
// ---------------------------------------------------------------------------

/// `a + sigma b` with `x sigma = sigma x` for even x and
/// `y sigma = -sigma y` for odd y; `sigma^2 = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewElement {
    pub plain: EnvElement,
    pub sigma: EnvElement,
}

/// The parity involution on `U(g)`: negate odd-parity monomials.
pub fn parity_involution(engine: &Engine, u: &EnvElement) -> EnvElement {
    let (even, odd) = engine.parity_split(u);
    engine.sub(&even, &odd)
}

pub fn skew_mul(engine: &Engine, x: &SkewElement, y: &SkewElement) -> Result<SkewElement> {
    // (a + sigma b)(c + sigma d) = (ac + sigma(b) d) + sigma (sigma(a) d + b c)
    let sa = parity_involution(engine, &x.plain);
    let sb = parity_involution(engine, &x.sigma);
    let plain = engine.add(&engine.mul(&x.plain, &y.plain)?, &engine.mul(&sb, &y.sigma)?);
    let sigma = engine.add(&engine.mul(&sa, &y.sigma)?, &engine.mul(&x.sigma, &y.plain)?);
    Ok(SkewElement { plain, sigma })
}

/// Skew-ring verdicts: the center decomposition, the category round trip,
/// and the even-category census.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SkewReport {
    pub p: u32,
    pub degree: usize,
    pub checks: Vec<(String, bool, String)>,
}

impl SkewReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok, _)| *ok)
    }
}

/// Center of the skew ring in degree <= d: pairs `(a, b)` with `a + sigma b`
/// commuting with every generator and with sigma, solved directly on the
/// doubled slice and compared against `Z-slice + sigma A-slice`.
pub fn skew_center_slice(engine: &Engine, d: usize) -> Result<(Vec<SkewElement>, usize, usize)> {
    let basis = MonomialBasis::new(engine, d)?;
    let target = MonomialBasis::new(engine, d + 1)?;
    let n = basis.len();
    let nt = target.len();
    let field = engine.field.clone();
    // unknown vector: (a coords | b coords)
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    // sigma constraint: sigma(a) = a and sigma(b) = b (odd components vanish)
    for (part, offset) in [(0usize, 0usize), (1, n)] {
        let _ = part;
        for (j, m) in basis.monomials.iter().enumerate() {
            if engine.monomial_parity(m) == 1 {
                let mut row = vec![field.zero(); 2 * n];
                row[offset + j] = field.one();
                rows.push(row);
            }
        }
    }
    // generator constraints
    for g in 0..engine.spec.dim() {
        let odd = engine.spec.parity(g) == 1;
        // column maps on monomials: left and right multiplication by x_g
        let mut left_cols: Vec<Vec<(usize, FieldElement)>> = Vec::with_capacity(n);
        let mut right_cols: Vec<Vec<(usize, FieldElement)>> = Vec::with_capacity(n);
        for m in &basis.monomials {
            let single = EnvElement {
                sig: engine.sig(),
                terms: BTreeMap::from([(m.clone(), field.one())]),
            };
            let lm = engine.mul_gen_left(g, &single)?;
            let rm = engine.mul_gen_right(&single, g)?;
            let sparse = |u: &EnvElement| {
                u.terms
                    .iter()
                    .map(|(mm, c)| (target.index_of(mm).expect("fits"), *c))
                    .collect::<Vec<_>>()
            };
            left_cols.push(sparse(&lm));
            right_cols.push(sparse(&rm));
        }
        // even g: [x, a] = 0 and [x, b] = 0
        // odd y: y a - a y = 0 and y b + b y = 0
        for (offset, sign_for_right) in [(0usize, -1i64), (n, -1)] {
            let flip = if offset == n && odd { 1 } else { sign_for_right };
            for i in 0..nt {
                let _ = i;
            }
            let mut mat_rows: Vec<Vec<FieldElement>> = vec![vec![field.zero(); 2 * n]; nt];
            for (j, (lc, rc)) in left_cols.iter().zip(&right_cols).enumerate() {
                for &(i, c) in lc {
                    mat_rows[i][offset + j] = field.add(&mat_rows[i][offset + j], &c);
                }
                for &(i, c) in rc {
                    let signed = field.mul(&c, &field.from_int(flip));
                    mat_rows[i][offset + j] = field.add(&mat_rows[i][offset + j], &signed);
                }
            }
            rows.extend(mat_rows.into_iter().filter(|r| r.iter().any(|c| !field.is_zero(c))));
        }
    }
    let m = Matrix::from_rows(rows);
    let kernel = m.kernel_basis(&field);
    let mut elems = Vec::with_capacity(kernel.len());
    for k in &kernel {
        let a = basis.element(engine, &k[..n]);
        let b = basis.element(engine, &k[n..]);
        elems.push(SkewElement { plain: a, sigma: b });
    }
    // dimensions of the projections
    let a_vecs: Vec<Vec<FieldElement>> = kernel.iter().map(|k| k[..n].to_vec()).collect();
    let b_vecs: Vec<Vec<FieldElement>> = kernel.iter().map(|k| k[n..].to_vec()).collect();
    let a_dim = SpanBasis::new(&a_vecs, n, &field).dim();
    let b_dim = SpanBasis::new(&b_vecs, n, &field).dim();
    Ok((elems, a_dim, b_dim))
}

/// Full skew-ring verification at degree d.
pub fn skew_ring_ops(p: u32, d: usize) -> Result<SkewReport> {
    let spec = Arc::new(crate::superalg::builtin("osp", (1, 2), p)?);
    let engine = Engine::standard(spec.clone())?;
    let field = engine.field.clone();
    let mut checks: Vec<(String, bool, String)> = Vec::new();

    // sigma E sigma = -E in the skew ring
    let cap_e = spec.index_of("E").unwrap();
    let sigma = SkewElement {
        plain: engine.zero(),
        sigma: engine.one(),
    };
    let e_elem = SkewElement {
        plain: engine.gen_elem(cap_e),
        sigma: engine.zero(),
    };
    let ses = skew_mul(&engine, &skew_mul(&engine, &sigma, &e_elem)?, &sigma)?;
    let neg_e = SkewElement {
        plain: engine.scale(&engine.gen_elem(cap_e), &field.from_int(-1)),
        sigma: engine.zero(),
    };
    checks.push((
        "sigma E sigma = -E".into(),
        ses == neg_e,
        String::new(),
    ));
    let s2 = skew_mul(&engine, &sigma, &sigma)?;
    checks.push((
        "sigma^2 = 1".into(),
        s2 == SkewElement {
            plain: engine.one(),
            sigma: engine.zero(),
        },
        String::new(),
    ));

    // (a) skew center = Z-slice + sigma A-slice
    let (skew_center, a_dim, b_dim) = skew_center_slice(&engine, d)?;
    let z_slice = centralizer_slice(&engine, d, false)?;
    let anti_slice = centralizer_slice(&engine, d, true)?;
    let dims_ok = skew_center.len() == z_slice.dim() + anti_slice.dim()
        && a_dim == z_slice.dim()
        && b_dim == anti_slice.dim();
    // projections must span exactly the two slices
    let plain_parts = Slice {
        degree: d,
        basis: skew_center
            .iter()
            .map(|e| e.plain.clone())
            .filter(|u| !u.is_zero())
            .collect(),
    };
    let sigma_parts = Slice {
        degree: d,
        basis: skew_center
            .iter()
            .map(|e| e.sigma.clone())
            .filter(|u| !u.is_zero())
            .collect(),
    };
    let plain_cmp = slice_compare(&engine, &plain_parts, &z_slice)?;
    let sigma_cmp = slice_compare(&engine, &sigma_parts, &anti_slice)?;
    let plain_ok = matches!(
        plain_cmp,
        SliceComparison::Equal | SliceComparison::FirstInSecond { .. }
    );
    let sigma_ok = matches!(
        sigma_cmp,
        SliceComparison::Equal | SliceComparison::FirstInSecond { .. }
    );
    checks.push((
        format!("skew center slice (d = {d}) = Z-slice + sigma A-slice"),
        dims_ok && plain_ok && sigma_ok,
        format!(
            "skew dim {} = {} + {}",
            skew_center.len(),
            z_slice.dim(),
            anti_slice.dim()
        ),
    ));
    // every skew-center element is (central, anticentral) componentwise
    let mut component_ok = true;
    for el in &skew_center {
        for g in 0..spec.dim() {
            if !engine.ad_action(g, &el.plain, false)?.is_zero() {
                component_ok = false;
            }
            if !el.sigma.is_zero() {
                let (ev, od) = engine.parity_split(&el.sigma);
                let _ = od;
                if !engine.ad_action(g, &ev, true)?.is_zero() {
                    component_ok = false;
                }
            }
        }
    }
    checks.push((
        "skew-center components are central resp. anticentral".into(),
        component_ok,
        String::new(),
    ));

    // (b) functor round trip on the full census: sigma acts as +1/-1 on
    // parity components; F o G recovers the grading
    let mut round_trip_ok = true;
    {
        let field_p = spec.field();
        let ext = Field::extension(p, 2)?;
        let mut reps: Vec<MatrixRep> = Vec::new();
        let chi0 = PCharacter::osp12_nilpotent(&spec, &field_p)?;
        let chi_z = PCharacter::zero(&spec, &field_p);
        for l in 0..p as i64 {
            reps.push(baby_verma(
                &spec,
                &field_p,
                &chi0,
                &fp_weight(&field_p, l),
                Borel::Standard,
            )?);
            let z = baby_verma(&spec, &field_p, &chi_z, &fp_weight(&field_p, l), Borel::Standard)?;
            reps.push(simple_head(&spec, &z)?);
        }
        let chi1 = PCharacter::osp12_semisimple(&spec, &ext)?;
        for w in lambda_set(&spec, &ext, &chi1)? {
            reps.push(baby_verma(&spec, &ext, &chi1, &w, Borel::Standard)?);
        }
        for rep in &reps {
            let fld = &rep.field;
            // G: sigma-matrix from the grading
            let mut sig_mat = Matrix::zeros(rep.dim, rep.dim, fld);
            for i in 0..rep.dim {
                *sig_mat.at_mut(i, i) = if rep.parity[i] == 0 {
                    fld.one()
                } else {
                    fld.from_int(-1)
                };
            }
            // sigma must intertwine the action with its parity involution
            for g in 0..spec.dim() {
                let lhs = sig_mat.mul(&rep.action[g], fld);
                let mut rhs = rep.action[g].mul(&sig_mat, fld);
                if spec.parity(g) == 1 {
                    rhs = rhs.scale(&fld.from_int(-1), fld);
                }
                if lhs != rhs {
                    round_trip_ok = false;
                }
            }
            // F: eigenspace parities recover the original grading
            if sig_mat.mul(&sig_mat, fld) != Matrix::identity(rep.dim, fld) {
                round_trip_ok = false;
            }
        }
    }
    checks.push((
        "functor round trip G then F recovers the grading on the census".into(),
        round_trip_ok,
        String::new(),
    ));

    // (c) even-category census: {M_i, Pi M_i, N_j} pairwise distinct in even
    // degree, with Pi N_j = N_j evenly
    let field_p = spec.field();
    let chi0 = PCharacter::osp12_nilpotent(&spec, &field_p)?;
    let mut m_types: Vec<MatrixRep> = Vec::new();
    let mut q_types: Vec<MatrixRep> = Vec::new();
    for l in 0..=(p as i64 - 1) / 2 {
        let rep = baby_verma(&spec, &field_p, &chi0, &fp_weight(&field_p, l), Borel::Standard)?;
        if endo_type(&spec, &rep)? == EndoType::Q {
            q_types.push(rep);
        } else {
            m_types.push(rep);
        }
    }
    let mut even_census_ok = true;
    let mut detail = String::new();
    let mut even_classes: Vec<MatrixRep> = Vec::new();
    for m in &m_types {
        even_classes.push(m.clone());
        even_classes.push(crate::repmod::parity_flip(m));
    }
    for n_rep in &q_types {
        even_classes.push(n_rep.clone());
    }
    for a in 0..even_classes.len() {
        for b in a + 1..even_classes.len() {
            if iso_test(&spec, &even_classes[a], &even_classes[b], IsoDegree::EvenOnly)?
                .is_isomorphic()
            {
                even_census_ok = false;
                detail = format!("classes {a} and {b} coincide evenly");
            }
        }
    }
    for n_rep in &q_types {
        if !iso_test(&spec, n_rep, &crate::repmod::parity_flip(n_rep), IsoDegree::EvenOnly)?
            .is_isomorphic()
        {
            even_census_ok = false;
            detail = "Pi N = N fails evenly for a type-Q module".into();
        }
    }
    checks.push((
        format!(
            "even-category census at chi0: {} M-classes give {} even classes plus {} Q-classes",
            m_types.len(),
            2 * m_types.len(),
            q_types.len()
        ),
        even_census_ok,
        detail,
    ));
    // for the semisimple character, dimension counting certifies exhaustion:
    // sum of dims^2 over even classes = dim of the skew reduced algebra
    let ext = Field::extension(p, 2)?;
    let chi1 = PCharacter::osp12_semisimple(&spec, &ext)?;
    let weights = lambda_set(&spec, &ext, &chi1)?;
    let mut sum = 0usize;
    for w in &weights {
        let rep = baby_verma(&spec, &ext, &chi1, w, Borel::Standard)?;
        // type M: the class and its parity flip both appear evenly
        sum += 2 * rep.dim * rep.dim;
    }
    let expected = 2 * 4 * (p as usize).pow(3);
    checks.push((
        "chi1 even-category dimension count certifies exhaustion".into(),
        sum == expected,
        format!("sum dims^2 = {sum}, dim U_chi1 # H = {expected}"),
    ));

    Ok(SkewReport {
        p,
        degree: d,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalg::builtin;

    fn osp12(p: u32) -> Engine {
        Engine::standard(Arc::new(builtin("osp", (1, 2), p).unwrap())).unwrap()
    }

    #[test]
    fn special_element_identities_hold() {
        for p in [3u32, 5, 7] {
            let eng = osp12(p);
            let (s, omega) = special_elements(&eng).unwrap();
            // S normal form is -2 F E + h + 1/2
            let spec = &eng.spec;
            let field = &eng.field;
            let cap_f = spec.index_of("F").unwrap();
            let cap_e = spec.index_of("E").unwrap();
            let h = spec.index_of("h").unwrap();
            let fe = eng.straighten(&[cap_f, cap_e], field.one());
            let half = field.inv(&field.from_int(2)).unwrap();
            let expect = eng.add(
                &eng.scale(&fe, &field.from_int(-2)),
                &eng.add(&eng.gen_elem(h), &eng.scalar(half)),
            );
            assert_eq!(s, expect, "p = {p}");
            assert_eq!(s.num_terms(), 3);
            assert!(!omega.is_zero());
        }
    }

    #[test]
    fn center_generation_small_degrees() {
        let eng = osp12(3);
        for d in 0..=6 {
            let v = center_generation_check(&eng, d).unwrap();
            assert!(v.equal, "d = {d}: {v:?}");
        }
    }

    #[test]
    fn anticenter_is_s_times_center() {
        let eng = osp12(3);
        for d in 0..=6 {
            let v = anticenter_check(&eng, d).unwrap();
            assert!(v.equal, "d = {d}: {v:?}");
        }
    }

    #[test]
    fn hypersurface_at_p3_matches_the_derived_relation() {
        let eng = osp12(3);
        let field = &eng.field;
        let hyper = hypersurface_and_smoothness(&eng).unwrap();
        assert!(hyper.minimal);
        assert!(hyper.principal_at_bound);
        assert_eq!(hyper.relation.degree_in(3), 3);
        // independently derived over the dense semisimple locus:
        // T^3 + T^2 + T - xi_h^2 - xi_e xi_f   (4 = 1 mod 3)
        let mut expect = vec![
            (vec![0u16, 0, 0, 3], field.one()),
            (vec![0, 0, 0, 2], field.one()),
            (vec![0, 0, 0, 1], field.one()),
            (vec![0, 2, 0, 0], field.from_int(-1)),
            (vec![1, 0, 1, 0], field.from_int(-1)),
        ];
        expect.sort();
        let mut got = hyper.relation.terms.clone();
        got.sort();
        assert_eq!(got, expect);
        // vanishes at the point of Z_chi0(0) = (0, 0, 1, 1/4)
        let quarter = field.inv(&field.from_int(4)).unwrap();
        let pt = vec![field.zero(), field.zero(), field.one(), quarter];
        assert!(field.is_zero(&hyper.relation.eval(field, field, &pt)));
        // the zero point (L(1)) is smooth, the point (0,0,0,1/4) (L(0)) is not
        let zero_pt = vec![field.zero(); 4];
        assert!(hyper.is_smooth(field, field, &zero_pt));
        let l0_pt = vec![field.zero(), field.zero(), field.zero(), quarter];
        assert!(!hyper.is_smooth(field, field, &l0_pt));
    }

    #[test]
    fn locus_report_at_p3() {
        let report = locus_report(3).unwrap();
        assert!(report.smooth_set_identity, "{report:?}");
        assert!(report.singular_set_identity, "{report:?}");
        assert!(report.equal_points_equal_flags);
        assert!(report.relation_vanishes_on_all_points);
        // 2 chi0 classes + 3 chi1 classes + 3 heads
        assert_eq!(report.rows.len(), 8);
        assert_eq!(report.singular_point_count, 1);
        assert_eq!(report.label_singular_count, 2);
        // every chi1 row is smooth and max-dimensional
        for row in &report.rows {
            if row.chi == "semisimple-regular" {
                assert!(row.smooth && row.max_dim);
            }
        }
    }

    #[test]
    fn skew_report_at_p3() {
        let report = skew_ring_ops(3, 4).unwrap();
        for (name, ok, detail) in &report.checks {
            assert!(ok, "{name}: {detail}");
        }
    }

    #[test]
    fn skew_center_dimensions_add() {
        let eng = osp12(3);
        let (elems, a_dim, b_dim) = skew_center_slice(&eng, 4).unwrap();
        let z = centralizer_slice(&eng, 4, false).unwrap();
        let a = centralizer_slice(&eng, 4, true).unwrap();
        assert_eq!(elems.len(), z.dim() + a.dim());
        assert_eq!(a_dim, z.dim());
        assert_eq!(b_dim, a.dim());
    }
}
