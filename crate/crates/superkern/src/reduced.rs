//! Reduced enveloping algebras `U_chi(g)` as explicit finite-dimensional
//! superalgebras: quotients of `U(g)` by the central elements
//! `x^p - x^{[p]} - chi(x)^p`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pbw::{Engine, EnvElement, PbwMonomial};
use crate::scalar::{Field, FieldElement, Matrix};
use crate::superalg::SuperAlgebraSpec;

/// Coadjoint orbit type of a p-character. Only osp(1|2) is classified
/// automatically; everything else defaults to `Other`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitTag {
    Zero,
    NilpotentRegular,
    SemisimpleRegular,
    Other,
}

impl std::fmt::Display for OrbitTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            OrbitTag::Zero => "zero",
            OrbitTag::NilpotentRegular => "nilpotent-regular",
            OrbitTag::SemisimpleRegular => "semisimple-regular",
            OrbitTag::Other => "other",
        };
        write!(f, "{s}")
    }
}

/// A linear functional on the even part, with its orbit tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PCharacter {
    /// chi(x_i) per even basis element, over the working field.
    pub values: Vec<FieldElement>,
    pub tag: OrbitTag,
}

impl PCharacter {
    pub fn new(spec: &SuperAlgebraSpec, field: &Field, values: Vec<FieldElement>) -> PCharacter {
        assert_eq!(values.len(), spec.dim_even());
        let tag = classify(spec, field, &values);
        PCharacter { values, tag }
    }

    pub fn zero(spec: &SuperAlgebraSpec, field: &Field) -> PCharacter {
        PCharacter::new(spec, field, vec![field.zero(); spec.dim_even()])
    }

    /// The regular nilpotent representative for osp(1|2):
    /// chi(e) = chi(h) = 0, chi(f) = 1.
    pub fn osp12_nilpotent(spec: &SuperAlgebraSpec, field: &Field) -> Result<PCharacter> {
        let f_idx = spec
            .index_of("f")
            .ok_or_else(|| Error::InvalidAlgebra("not osp(1|2)".into()))?;
        let mut values = vec![field.zero(); spec.dim_even()];
        values[f_idx] = field.one();
        Ok(PCharacter::new(spec, field, values))
    }

    /// A regular semisimple representative for osp(1|2) over `F_{p^2}`:
    /// chi(h) = t, the field generator, which has trace zero so the weight
    /// set is nonempty over the quadratic extension.
    pub fn osp12_semisimple(spec: &SuperAlgebraSpec, field: &Field) -> Result<PCharacter> {
        if field.degree() < 2 {
            return Err(Error::InvalidField(
                "the semisimple character needs the quadratic extension".into(),
            ));
        }
        let h_idx = spec
            .index_of("h")
            .ok_or_else(|| Error::InvalidAlgebra("not osp(1|2)".into()))?;
        let mut values = vec![field.zero(); spec.dim_even()];
        values[h_idx] = field.gen();
        Ok(PCharacter::new(spec, field, values))
    }

    /// `chi(x_i)^p`, the scalar by which `x_i^p - x_i^{[p]}` acts.
    pub fn pth(&self, field: &Field, even_idx: usize) -> FieldElement {
        field.pow(&self.values[even_idx], field.p() as u64)
    }

    pub fn is_zero(&self, field: &Field) -> bool {
        self.values.iter().all(|v| field.is_zero(v))
    }
}

fn classify(spec: &SuperAlgebraSpec, field: &Field, values: &[FieldElement]) -> OrbitTag {
    if values.iter().all(|v| field.is_zero(v)) {
        return OrbitTag::Zero;
    }
    // osp(1|2): the sl(2) invariant chi(h)^2 + 4 chi(e) chi(f) separates the
    // regular nilpotent cone (= 0) from the regular semisimple orbits
    if let (Some(e), Some(h), Some(f)) = (spec.index_of("e"), spec.index_of("h"), spec.index_of("f"))
    {
        if spec.dim_even() == 3 && spec.dim_odd() == 2 {
            let disc = field.add(
                &field.mul(&values[h], &values[h]),
                &field.mul(
                    &field.from_int(4),
                    &field.mul(&values[e], &values[f]),
                ),
            );
            return if field.is_zero(&disc) {
                OrbitTag::NilpotentRegular
            } else {
                OrbitTag::SemisimpleRegular
            };
        }
    }
    OrbitTag::Other
}

/// Replace `x^p` by `x^{[p]} + chi(x)^p` inside normal forms until every
/// even exponent is below p. The substituted elements are central, so the
/// replacement order does not matter.
pub fn reduce(engine: &Engine, u: &EnvElement, chi: &PCharacter) -> EnvElement {
    let p = engine.field.p() as u16;
    let mut current = u.clone();
    loop {
        let mut offending: Option<(PbwMonomial, usize)> = None;
        for m in current.terms.keys() {
            if let Some(pos) = m
                .0
                .iter()
                .enumerate()
                .position(|(pos, &e)| engine.parity_at(pos) == 0 && e >= p)
            {
                offending = Some((m.clone(), pos));
                break;
            }
        }
        let Some((m, pos)) = offending else {
            return current;
        };
        let coeff = current.terms[&m];
        let basis_idx = engine.basis_at(pos);
        // strip the p-th powers of this generator from the monomial
        let mut stripped = m.clone();
        stripped.0[pos] -= p;
        let single = EnvElement {
            sig: u.sig,
            terms: std::collections::BTreeMap::from([(stripped.clone(), coeff)]),
        };
        // chi(x)^p * stripped
        let scalar_part = engine.scale(&single, &chi.pth(&engine.field, basis_idx));
        // stripped word with x^{[p]} inserted at the generator's slot
        let mut pmap_part = engine.zero();
        for &(k, c) in engine.spec.p_map(basis_idx) {
            let mut word = Vec::new();
            for (q, &e) in stripped.0.iter().enumerate() {
                for _ in 0..e {
                    word.push(engine.basis_at(q));
                }
                if q == pos {
                    word.push(k);
                }
            }
            let lifted = engine.field.from_int(c as i64);
            pmap_part = engine.add(
                &pmap_part,
                &engine.straighten(&word, engine.field.mul(&coeff, &lifted)),
            );
        }
        // remove the offending term and add the substitution
        let mut rest = current.clone();
        rest.terms.remove(&m);
        current = engine.add(&rest, &engine.add(&scalar_part, &pmap_part));
    }
}

/// `U_chi(g)` with its monomial basis (even exponents below p) and lazy
/// multiplication by straighten-then-reduce.
pub struct ReducedAlgebra {
    pub chi: PCharacter,
    pub basis: Vec<PbwMonomial>,
    index: HashMap<PbwMonomial, usize>,
}

impl ReducedAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, m: &PbwMonomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of a reduced element in the monomial basis.
    pub fn coords(&self, engine: &Engine, u: &EnvElement) -> Vec<FieldElement> {
        let mut v = vec![engine.field.zero(); self.dim()];
        for (m, c) in &u.terms {
            let i = self.index_of(m).expect("element is reduced");
            v[i] = *c;
        }
        v
    }

    /// Product in `U_chi(g)`.
    pub fn mul(&self, engine: &Engine, u: &EnvElement, v: &EnvElement) -> Result<EnvElement> {
        Ok(reduce(engine, &engine.mul(u, v)?, &self.chi))
    }

    /// Left-multiplication matrices of the algebra generators on the
    /// monomial basis (one per basis element of g).
    pub fn regular_rep(&self, engine: &Engine) -> Result<Vec<Matrix>> {
        let field = &engine.field;
        let mut mats = Vec::with_capacity(engine.spec.dim());
        for g in 0..engine.spec.dim() {
            let mut mat = Matrix::zeros(self.dim(), self.dim(), field);
            for (j, m) in self.basis.iter().enumerate() {
                let single = EnvElement {
                    sig: engine.sig(),
                    terms: std::collections::BTreeMap::from([(m.clone(), field.one())]),
                };
                let img = reduce(engine, &engine.mul_gen_left(g, &single)?, &self.chi);
                for (mm, c) in &img.terms {
                    let i = self.index_of(mm).expect("reduced");
                    *mat.at_mut(i, j) = *c;
                }
            }
            mats.push(mat);
        }
        Ok(mats)
    }
}

/// Build `U_chi(g)`: dimension `p^{dim g_0} 2^{dim g_1}`.
pub fn reduced_algebra(engine: &Engine, chi: PCharacter) -> Result<ReducedAlgebra> {
    if chi.values.len() != engine.spec.dim_even() {
        return Err(Error::ChiMismatch);
    }
    let p = engine.field.p() as u16;
    let n = engine.dim();
    let mut basis = Vec::new();
    let mut exp = vec![0u16; n];
    loop {
        basis.push(PbwMonomial(exp.clone()));
        let mut pos = 0;
        loop {
            if pos == n {
                basis.sort();
                let index = basis
                    .iter()
                    .enumerate()
                    .map(|(i, m)| (m.clone(), i))
                    .collect();
                return Ok(ReducedAlgebra { chi, basis, index });
            }
            let cap = if engine.parity_at(pos) == 1 { 1 } else { p - 1 };
            exp[pos] += 1;
            if exp[pos] <= cap {
                break;
            }
            exp[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::central::{centralizer_slice, special_s};
    use crate::superalg::builtin;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn osp12(p: u32) -> Engine {
        Engine::standard(Arc::new(builtin("osp", (1, 2), p).unwrap())).unwrap()
    }

    #[test]
    fn orbit_tags_for_osp12() {
        let eng = osp12(3);
        let spec = &eng.spec;
        let field = &eng.field;
        assert_eq!(PCharacter::zero(spec, field).tag, OrbitTag::Zero);
        let chi0 = PCharacter::osp12_nilpotent(spec, field).unwrap();
        assert_eq!(chi0.tag, OrbitTag::NilpotentRegular);
        let f9 = Field::extension(3, 2).unwrap();
        let chi1 = PCharacter::osp12_semisimple(spec, &f9).unwrap();
        assert_eq!(chi1.tag, OrbitTag::SemisimpleRegular);
    }

    #[test]
    fn reduce_cubes_at_p3() {
        let eng = osp12(3);
        let spec = &eng.spec;
        let chi0 = PCharacter::osp12_nilpotent(spec, &eng.field).unwrap();
        let e = spec.index_of("e").unwrap();
        let h = spec.index_of("h").unwrap();
        let f = spec.index_of("f").unwrap();
        // e^3 -> 0 under chi_0 (e^[3] = 0, chi_0(e) = 0)
        let e3 = eng.straighten(&[e, e, e], eng.field.one());
        assert!(reduce(&eng, &e3, &chi0).is_zero());
        // f^3 -> 1 under chi_0 (chi_0(f) = 1)
        let f3 = eng.straighten(&[f, f, f], eng.field.one());
        assert_eq!(reduce(&eng, &f3, &chi0), eng.one());
        // h^3 -> h under chi = 0 (h^[3] = h)
        let chi2 = PCharacter::zero(spec, &eng.field);
        let h3 = eng.straighten(&[h, h, h], eng.field.one());
        assert_eq!(reduce(&eng, &h3, &chi2), eng.gen_elem(h));
    }

    #[test]
    fn dimensions_match_the_formula() {
        for (p, expect) in [(3u32, 108usize), (5, 500)] {
            let eng = osp12(p);
            let chi = PCharacter::zero(&eng.spec, &eng.field);
            let ra = reduced_algebra(&eng, chi).unwrap();
            assert_eq!(ra.dim(), expect); // p^3 * 2^2
        }
        let spec = builtin("gl", (1, 1), 3).unwrap();
        let eng = Engine::standard(Arc::new(spec)).unwrap();
        let chi = PCharacter::zero(&eng.spec, &eng.field);
        let ra = reduced_algebra(&eng, chi).unwrap();
        assert_eq!(ra.dim(), 36); // p^2 * 2^2
    }

    #[test]
    fn reduce_is_an_algebra_map_on_random_pairs() {
        let eng = osp12(3);
        let chi = PCharacter::osp12_nilpotent(&eng.spec, &eng.field).unwrap();
        let ra = reduced_algebra(&eng, chi.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = eng.spec.dim();
        for _ in 0..200 {
            let mut sample = || {
                let len = rng.gen_range(0..6);
                let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n)).collect();
                eng.straighten(&w, eng.field.one())
            };
            let u = sample();
            let v = sample();
            let lhs = reduce(&eng, &eng.mul(&u, &v).unwrap(), &chi);
            let rhs = ra
                .mul(&eng, &reduce(&eng, &u, &chi), &reduce(&eng, &v, &chi))
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn central_elements_stay_central_after_reduction() {
        let eng = osp12(3);
        let chi = PCharacter::osp12_nilpotent(&eng.spec, &eng.field).unwrap();
        let ra = reduced_algebra(&eng, chi.clone()).unwrap();
        let slice = centralizer_slice(&eng, 3, false).unwrap();
        for z in &slice.basis {
            let rz = reduce(&eng, z, &chi);
            for g in 0..eng.spec.dim() {
                let xg = eng.gen_elem(g);
                let left = ra.mul(&eng, &xg, &rz).unwrap();
                let right = ra.mul(&eng, &rz, &xg).unwrap();
                assert_eq!(left, right, "reduced center must commute (even center)");
            }
        }
    }

    #[test]
    fn xi_acts_by_chi_to_the_p() {
        let eng = osp12(3);
        let spec = &eng.spec;
        let chi0 = PCharacter::osp12_nilpotent(spec, &eng.field).unwrap();
        for (i, name) in ["e", "h", "f"].iter().enumerate() {
            let idx = spec.index_of(name).unwrap();
            let xi = eng.xi(idx);
            let r = reduce(&eng, &xi, &chi0);
            let expect = eng.scalar(chi0.pth(&eng.field, idx));
            assert_eq!(r, expect, "xi_{i} image");
        }
    }

    #[test]
    fn regular_representation_satisfies_the_relations() {
        let eng = osp12(3);
        let chi = PCharacter::osp12_nilpotent(&eng.spec, &eng.field).unwrap();
        let ra = reduced_algebra(&eng, chi).unwrap();
        let mats = ra.regular_rep(&eng).unwrap();
        let field = &eng.field;
        let spec = &eng.spec;
        for i in 0..spec.dim() {
            for j in 0..spec.dim() {
                let sign_flip = spec.parity(i) == 1 && spec.parity(j) == 1;
                let ij = mats[i].mul(&mats[j], field);
                let ji = mats[j].mul(&mats[i], field);
                let lhs = if sign_flip {
                    ij.add(&ji, field)
                } else {
                    ij.sub(&ji, field)
                };
                let mut rhs = Matrix::zeros(ra.dim(), ra.dim(), field);
                for &(k, c) in spec.bracket(i, j) {
                    rhs = rhs.add(&mats[k].scale(&field.from_int(c as i64), field), field);
                }
                assert_eq!(lhs, rhs, "pair ({i},{j})");
            }
        }
        // the special element squares to a central element even here
        let s = special_s(&eng).unwrap();
        let s_red = reduce(&eng, &s, &ra.chi);
        assert!(!s_red.is_zero());
    }
}
