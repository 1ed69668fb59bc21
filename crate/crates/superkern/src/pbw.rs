//! The rewriting engine: arithmetic in `U(g)` on the PBW basis.
//!
//! The global basis order is negative-even, negative-odd, toral,
//! positive-odd, positive-even (refining the user basis order inside each
//! block). With negatives on the left and positives on the right, the
//! Harish-Chandra projection is plain coefficient extraction and baby Verma
//! vectors are monomials of the negative part. A reflected order (positives
//! first) backs baby Vermas over the opposite Borel.
//!
//! Straightening always reduces the leftmost offending adjacent pair
//! `y x -> (-1)^{|x||y|} x y + [y, x]`, and a repeated odd generator
//! `y y -> [y, y] / 2`. Each step lowers (degree of the tail, inversion
//! count) lexicographically, so rewriting terminates; confluence is enforced
//! by the associativity test suite rather than assumed.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Field, FieldElement};
use crate::superalg::SuperAlgebraSpec;

/// Which triangular reading the monomial order follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderKind {
    /// negatives, torals, positives -- the global default.
    Standard,
    /// positives, torals, negatives -- for the opposite Borel.
    Reflected,
}

/// Exponent vector in order positions. Odd positions carry exponents in
/// {0, 1}; even positions are unbounded.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PbwMonomial(pub Vec<u16>);

impl PbwMonomial {
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for PbwMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for PbwMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Cheap signature used to reject cross-engine mixing of elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ElemSig {
    pub p: u32,
    pub k: u8,
    pub n: u16,
    pub order: OrderKind,
}

/// Sparse PBW-normal-form element of `U(g)`: map from monomials to nonzero
/// scalars of the working field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvElement {
    pub sig: ElemSig,
    pub terms: BTreeMap<PbwMonomial, FieldElement>,
}

impl EnvElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
}

/// One term of the machine-readable rendering.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: Vec<u32>,
    pub exponents: Vec<u16>,
}

/// Arithmetic engine for `U(g)` over a chosen working field `F_{p^k}`.
pub struct Engine {
    pub spec: Arc<SuperAlgebraSpec>,
    pub field: Field,
    pub order: OrderKind,
    /// order position -> basis index
    basis_at: Vec<usize>,
    /// basis index -> order position
    position_of: Vec<usize>,
    /// parity by order position
    parity_at: Vec<u8>,
    /// bracket table by order positions, coefficients lifted into the field
    bracket_pos: Vec<Vec<(usize, FieldElement)>>,
    sig: ElemSig,
}

impl Engine {
    pub fn new(spec: Arc<SuperAlgebraSpec>, field: Field, order: OrderKind) -> Result<Engine> {
        if field.p() != spec.p {
            return Err(Error::SpecMismatch);
        }
        let n = spec.dim();
        let basis_at: Vec<usize> = match (&spec.triangular, order) {
            (Some(t), OrderKind::Standard) => t
                .negative_even
                .iter()
                .chain(&t.negative_odd)
                .chain(&t.toral)
                .chain(&t.positive_odd)
                .chain(&t.positive_even)
                .copied()
                .collect(),
            (Some(t), OrderKind::Reflected) => t
                .positive_even
                .iter()
                .chain(&t.positive_odd)
                .chain(&t.toral)
                .chain(&t.negative_odd)
                .chain(&t.negative_even)
                .copied()
                .collect(),
            (None, OrderKind::Standard) => (0..n).collect(),
            (None, OrderKind::Reflected) => return Err(Error::MissingRootData),
        };
        let mut position_of = vec![0usize; n];
        for (pos, &b) in basis_at.iter().enumerate() {
            position_of[b] = pos;
        }
        let parity_at: Vec<u8> = basis_at.iter().map(|&b| spec.parity(b)).collect();
        let mut bracket_pos = vec![Vec::new(); n * n];
        for a in 0..n {
            for b in 0..n {
                let src = spec.bracket(basis_at[a], basis_at[b]);
                bracket_pos[a * n + b] = src
                    .iter()
                    .map(|&(k, c)| (position_of[k], field.from_int(c as i64)))
                    .collect();
            }
        }
        let sig = ElemSig {
            p: spec.p,
            k: field.degree() as u8,
            n: n as u16,
            order,
        };
        Ok(Engine {
            spec,
            field,
            order,
            basis_at,
            position_of,
            parity_at,
            bracket_pos,
            sig,
        })
    }

    /// Standard-order engine over the prime field.
    pub fn standard(spec: Arc<SuperAlgebraSpec>) -> Result<Engine> {
        let field = spec.field();
        Engine::new(spec, field, OrderKind::Standard)
    }

    pub fn sig(&self) -> ElemSig {
        self.sig
    }

    pub fn dim(&self) -> usize {
        self.basis_at.len()
    }

    pub fn basis_at(&self, pos: usize) -> usize {
        self.basis_at[pos]
    }

    pub fn position_of(&self, basis_idx: usize) -> usize {
        self.position_of[basis_idx]
    }

    pub fn parity_at(&self, pos: usize) -> u8 {
        self.parity_at[pos]
    }

    fn check(&self, u: &EnvElement) -> Result<()> {
        if u.sig != self.sig {
            return Err(Error::SpecMismatch);
        }
        Ok(())
    }

    pub fn zero(&self) -> EnvElement {
        EnvElement {
            sig: self.sig,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> EnvElement {
        self.scalar(self.field.one())
    }

    pub fn scalar(&self, c: FieldElement) -> EnvElement {
        let mut terms = BTreeMap::new();
        if !self.field.is_zero(&c) {
            terms.insert(PbwMonomial(vec![0; self.dim()]), c);
        }
        EnvElement {
            sig: self.sig,
            terms,
        }
    }

    /// The generator `x_i` (basis index) as an element.
    pub fn gen_elem(&self, basis_idx: usize) -> EnvElement {
        let mut exp = vec![0u16; self.dim()];
        exp[self.position_of[basis_idx]] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(PbwMonomial(exp), self.field.one());
        EnvElement {
            sig: self.sig,
            terms,
        }
    }

    pub fn add(&self, u: &EnvElement, v: &EnvElement) -> EnvElement {
        let mut out = u.terms.clone();
        for (m, c) in &v.terms {
            let entry = out.entry(m.clone()).or_insert_with(|| self.field.zero());
            *entry = self.field.add(entry, c);
            if self.field.is_zero(entry) {
                out.remove(m);
            }
        }
        EnvElement {
            sig: self.sig,
            terms: out,
        }
    }

    pub fn sub(&self, u: &EnvElement, v: &EnvElement) -> EnvElement {
        self.add(u, &self.scale(v, &self.field.from_int(-1)))
    }

    pub fn scale(&self, u: &EnvElement, c: &FieldElement) -> EnvElement {
        if self.field.is_zero(c) {
            return self.zero();
        }
        let terms = u
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), self.field.mul(a, c)))
            .collect();
        EnvElement {
            sig: self.sig,
            terms,
        }
    }

    fn add_term(&self, acc: &mut BTreeMap<PbwMonomial, FieldElement>, m: PbwMonomial, c: FieldElement) {
        if self.field.is_zero(&c) {
            return;
        }
        let entry = acc.entry(m).or_insert_with(|| self.field.zero());
        *entry = self.field.add(entry, &c);
    }

    fn sweep_zeros(&self, acc: &mut BTreeMap<PbwMonomial, FieldElement>) {
        acc.retain(|_, c| !self.field.is_zero(c));
    }

    /// PBW normal form of the product of the listed generators (basis
    /// indices, in product order) times `coeff`.
    pub fn straighten(&self, word: &[usize], coeff: FieldElement) -> EnvElement {
        let positions: Vec<u16> = word.iter().map(|&b| self.position_of[b] as u16).collect();
        let mut acc = BTreeMap::new();
        self.straighten_pos(&positions, coeff, &mut acc);
        self.sweep_zeros(&mut acc);
        EnvElement {
            sig: self.sig,
            terms: acc,
        }
    }

    /// Core rewriting loop on words of order positions.
    fn straighten_pos(
        &self,
        word: &[u16],
        coeff: FieldElement,
        acc: &mut BTreeMap<PbwMonomial, FieldElement>,
    ) {
        if self.field.is_zero(&coeff) {
            return;
        }
        let n = self.dim();
        let mut work: Vec<(Vec<u16>, FieldElement)> = vec![(word.to_vec(), coeff)];
        let half = self
            .field
            .inv(&self.field.from_int(2))
            .expect("p odd by construction");
        while let Some((w, c)) = work.pop() {
            // leftmost offending adjacent pair
            let mut offend = None;
            for i in 0..w.len().saturating_sub(1) {
                let (a, b) = (w[i] as usize, w[i + 1] as usize);
                if a > b || (a == b && self.parity_at[a] == 1) {
                    offend = Some(i);
                    break;
                }
            }
            let Some(i) = offend else {
                // sorted word with odd exponents <= 1: a monomial
                let mut exp = vec![0u16; n];
                for &pos in &w {
                    exp[pos as usize] += 1;
                }
                self.add_term(acc, PbwMonomial(exp), c);
                continue;
            };
            let (a, b) = (w[i] as usize, w[i + 1] as usize);
            if a == b {
                // repeated odd generator: y y -> [y, y] / 2
                let chalf = self.field.mul(&c, &half);
                for (k, cb) in &self.bracket_pos[a * n + b] {
                    let mut w2 = Vec::with_capacity(w.len() - 1);
                    w2.extend_from_slice(&w[..i]);
                    w2.push(*k as u16);
                    w2.extend_from_slice(&w[i + 2..]);
                    work.push((w2, self.field.mul(&chalf, cb)));
                }
            } else {
                // y x -> (-1)^{|x||y|} x y + [y, x]
                let sign_flip = self.parity_at[a] == 1 && self.parity_at[b] == 1;
                let mut w_swap = w.clone();
                w_swap.swap(i, i + 1);
                let c_swap = if sign_flip { self.field.neg(&c) } else { c };
                work.push((w_swap, c_swap));
                for (k, cb) in &self.bracket_pos[a * n + b] {
                    let mut w2 = Vec::with_capacity(w.len() - 1);
                    w2.extend_from_slice(&w[..i]);
                    w2.push(*k as u16);
                    w2.extend_from_slice(&w[i + 2..]);
                    work.push((w2, self.field.mul(&c, cb)));
                }
            }
        }
    }

    fn monomial_word(m: &PbwMonomial) -> Vec<u16> {
        let mut w = Vec::with_capacity(m.degree());
        for (pos, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                w.push(pos as u16);
            }
        }
        w
    }

    /// Product in `U(g)`, PBW normal form.
    pub fn mul(&self, u: &EnvElement, v: &EnvElement) -> Result<EnvElement> {
        self.check(u)?;
        self.check(v)?;
        let mut acc = BTreeMap::new();
        for (mu, cu) in &u.terms {
            let wu = Self::monomial_word(mu);
            for (mv, cv) in &v.terms {
                let mut w = wu.clone();
                w.extend(Self::monomial_word(mv));
                self.straighten_pos(&w, self.field.mul(cu, cv), &mut acc);
            }
        }
        self.sweep_zeros(&mut acc);
        Ok(EnvElement {
            sig: self.sig,
            terms: acc,
        })
    }

    /// Left multiplication by the generator `x_i` (basis index).
    pub fn mul_gen_left(&self, basis_idx: usize, u: &EnvElement) -> Result<EnvElement> {
        let pos = self.position_of[basis_idx] as u16;
        self.check(u)?;
        let mut acc = BTreeMap::new();
        for (m, c) in &u.terms {
            let mut w = Vec::with_capacity(m.degree() + 1);
            w.push(pos);
            w.extend(Self::monomial_word(m));
            self.straighten_pos(&w, *c, &mut acc);
        }
        self.sweep_zeros(&mut acc);
        Ok(EnvElement {
            sig: self.sig,
            terms: acc,
        })
    }

    pub fn mul_gen_right(&self, u: &EnvElement, basis_idx: usize) -> Result<EnvElement> {
        let pos = self.position_of[basis_idx] as u16;
        self.check(u)?;
        let mut acc = BTreeMap::new();
        for (m, c) in &u.terms {
            let mut w = Self::monomial_word(m);
            w.push(pos);
            self.straighten_pos(&w, *c, &mut acc);
        }
        self.sweep_zeros(&mut acc);
        Ok(EnvElement {
            sig: self.sig,
            terms: acc,
        })
    }

    /// Parity of an element; `None` for mixed parity.
    pub fn parity(&self, u: &EnvElement) -> Option<u8> {
        let mut par = None;
        for m in u.terms.keys() {
            let pm = self.monomial_parity(m);
            match par {
                None => par = Some(pm),
                Some(q) if q != pm => return None,
                _ => {}
            }
        }
        par.or(Some(0))
    }

    pub fn monomial_parity(&self, m: &PbwMonomial) -> u8 {
        let mut s = 0u16;
        for (pos, &e) in m.0.iter().enumerate() {
            if self.parity_at[pos] == 1 {
                s += e;
            }
        }
        (s % 2) as u8
    }

    /// Adjoint action `ad x_i(u) = x u - (-1)^{|x||u|} u x`, or the twisted
    /// variant `ad_t x_i(u) = x u - (-1)^{|x|(|u|+1)} u x`. The twisted form
    /// needs parity-homogeneous input.
    pub fn ad_action(&self, basis_idx: usize, u: &EnvElement, twisted: bool) -> Result<EnvElement> {
        self.check(u)?;
        let px = self.spec.parity(basis_idx) as u16;
        if twisted && self.parity(u).is_none() {
            return Err(Error::MixedParity);
        }
        let mut out = self.zero();
        // act per homogeneous monomial so mixed parity is fine untwisted
        for (m, c) in &u.terms {
            let pu = self.monomial_parity(m) as u16;
            let single = EnvElement {
                sig: self.sig,
                terms: BTreeMap::from([(m.clone(), *c)]),
            };
            let left = self.mul_gen_left(basis_idx, &single)?;
            let right = self.mul_gen_right(&single, basis_idx)?;
            let exponent = if twisted { px * (pu + 1) } else { px * pu };
            let signed_right = if exponent % 2 == 1 {
                self.scale(&right, &self.field.from_int(-1))
            } else {
                right
            };
            out = self.add(&out, &self.sub(&left, &signed_right));
        }
        Ok(out)
    }

    /// `xi_i = x_i^p - x_i^{[p]}` for an even basis index: a p-center element.
    pub fn xi(&self, even_idx: usize) -> EnvElement {
        assert!(even_idx < self.spec.dim_even(), "xi needs an even index");
        let p = self.field.p() as usize;
        let power = self.straighten(&vec![even_idx; p], self.field.one());
        let mut pmap = self.zero();
        for &(k, c) in self.spec.p_map(even_idx) {
            pmap = self.add(
                &pmap,
                &self.scale(&self.gen_elem(k), &self.field.from_int(c as i64)),
            );
        }
        self.sub(&power, &pmap)
    }

    /// Verify additivity of `x -> x^p - x^{[p]}` on sums of even basis
    /// pairs. Needs the matrix realization: the p-th power of a sum is not
    /// determined by the basis p-map alone.
    pub fn semilinearity_check(&self) -> Result<Vec<(usize, usize, bool)>> {
        let realization = self
            .spec
            .realization
            .as_ref()
            .ok_or_else(|| Error::InvalidAlgebra("semilinearity check needs a matrix realization".into()))?;
        let fp = self.spec.field();
        let p = self.field.p() as usize;
        let s = self.spec.dim_even();
        let mut results = Vec::new();
        for i in 0..s {
            for j in i + 1..s {
                // (x_i + x_j)^p in U(g): expand all words of length p
                let mut power = self.zero();
                for code in 0..(1u32 << p) {
                    let word: Vec<usize> = (0..p)
                        .map(|b| if code >> b & 1 == 1 { j } else { i })
                        .collect();
                    power = self.add(&power, &self.straighten(&word, self.field.one()));
                }
                // (x_i + x_j)^{[p]} from the realization
                let msum = realization.mats[i].add(&realization.mats[j], &fp);
                let mp = msum.pow(p as u64, &fp);
                let mut cols = crate::scalar::Matrix::zeros(mp.data.len(), s, &fp);
                for (col, mat) in realization.mats.iter().take(s).enumerate() {
                    for (row, v) in mat.data.iter().enumerate() {
                        *cols.at_mut(row, col) = *v;
                    }
                }
                let coeffs = cols.solve(&mp.data, &fp).ok_or_else(|| {
                    Error::InvalidAlgebra("p-th power of a sum leaves the even span".into())
                })?;
                let mut pmap_sum = self.zero();
                for (k, c) in coeffs.iter().enumerate() {
                    if !fp.is_zero(c) {
                        pmap_sum = self.add(
                            &pmap_sum,
                            &self.scale(&self.gen_elem(k), &self.field.from_int(c.c[0] as i64)),
                        );
                    }
                }
                let xi_sum = self.sub(&power, &pmap_sum);
                let expect = self.add(&self.xi(i), &self.xi(j));
                results.push((i, j, xi_sum == expect));
            }
        }
        Ok(results)
    }

    /// Keep monomials of degree at most `d`.
    pub fn truncate_degree(&self, u: &EnvElement, d: usize) -> EnvElement {
        let terms = u
            .terms
            .iter()
            .filter(|(m, _)| m.degree() <= d)
            .map(|(m, c)| (m.clone(), *c))
            .collect();
        EnvElement {
            sig: u.sig,
            terms,
        }
    }

    /// Split into (even-parity part, odd-parity part).
    pub fn parity_split(&self, u: &EnvElement) -> (EnvElement, EnvElement) {
        let mut even = BTreeMap::new();
        let mut odd = BTreeMap::new();
        for (m, c) in &u.terms {
            if self.monomial_parity(m) == 0 {
                even.insert(m.clone(), *c);
            } else {
                odd.insert(m.clone(), *c);
            }
        }
        (
            EnvElement {
                sig: u.sig,
                terms: even,
            },
            EnvElement {
                sig: u.sig,
                terms: odd,
            },
        )
    }

    /// Supercommutator `[u, v] = uv - (-1)^{|u||v|} vu` for homogeneous
    /// elements (parities inferred; mixed input errors).
    pub fn supercommutator(&self, u: &EnvElement, v: &EnvElement) -> Result<EnvElement> {
        let pu = self.parity(u).ok_or(Error::MixedParity)?;
        let pv = self.parity(v).ok_or(Error::MixedParity)?;
        let uv = self.mul(u, v)?;
        let vu = self.mul(v, u)?;
        let signed = if pu == 1 && pv == 1 {
            self.scale(&vu, &self.field.from_int(-1))
        } else {
            vu
        };
        Ok(self.sub(&uv, &signed))
    }

    /// Stable text rendering, e.g. `2*f^2 F h + 1`. Factors follow the
    /// global basis order.
    pub fn render(&self, u: &EnvElement) -> String {
        if u.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in &u.terms {
            let mut factors = String::new();
            for (pos, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = self.spec.name(self.basis_at[pos]);
                if !factors.is_empty() {
                    factors.push(' ');
                }
                if e == 1 {
                    let _ = write!(factors, "{name}");
                } else {
                    let _ = write!(factors, "{name}^{e}");
                }
            }
            let coeff = self.field.render(c);
            let term = if factors.is_empty() {
                coeff
            } else if coeff == "1" {
                factors
            } else {
                format!("{coeff}*{factors}")
            };
            parts.push(term);
        }
        parts.join(" + ")
    }

    /// Machine-readable term list (exponents in order positions).
    pub fn to_terms(&self, u: &EnvElement) -> Vec<TermJson> {
        u.terms
            .iter()
            .map(|(m, c)| TermJson {
                coeff: self.field.coeffs_vec(c),
                exponents: m.0.clone(),
            })
            .collect()
    }

    pub fn from_terms(&self, terms: &[TermJson]) -> EnvElement {
        let mut out = self.zero();
        for t in terms {
            let c = self.field.from_coeffs(&t.coeff);
            let mut exp = t.exponents.clone();
            exp.resize(self.dim(), 0);
            let single = EnvElement {
                sig: self.sig,
                terms: BTreeMap::from([(PbwMonomial(exp), c)]),
            };
            out = self.add(&out, &single);
        }
        out
    }

    /// Names of the basis in order positions (for report headers).
    pub fn order_names(&self) -> Vec<String> {
        self.basis_at
            .iter()
            .map(|&b| self.spec.name(b).to_string())
            .collect()
    }

    /// Convert an element to another engine over the same algebra (e.g. the
    /// reflected order, or an extension field): re-straighten every
    /// monomial. The target field must contain the source field's prime
    /// subfield coefficients verbatim (prime -> extension is the supported
    /// direction; same field across orders is always fine).
    pub fn convert_from(&self, src: &Engine, u: &EnvElement) -> Result<EnvElement> {
        src.check(u)?;
        if !Arc::ptr_eq(&self.spec, &src.spec) && self.spec.dim() != src.spec.dim() {
            return Err(Error::SpecMismatch);
        }
        let mut out = self.zero();
        for (m, c) in &u.terms {
            let word: Vec<usize> = Engine::monomial_word(m)
                .into_iter()
                .map(|pos| src.basis_at[pos as usize])
                .collect();
            let c_lift = self.field.from_coeffs(&c.c);
            out = self.add(&out, &self.straighten(&word, c_lift));
        }
        Ok(out)
    }
}
