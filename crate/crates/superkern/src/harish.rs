//! The Harish-Chandra projection `gamma_1: U(g) -> U(h)`, its rho-shifted
//! variant, Weyl-group representatives as exponential automorphisms, and the
//! verification suite tying central characters of baby Vermas to projected
//! polynomials.
//!
//! With the global order (negatives, torals, positives), `gamma_1` is plain
//! coefficient extraction: every PBW monomial containing a negative factor
//! starts with one, every monomial containing a positive factor ends with
//! one, and both die against the highest-weight line.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::central::{special_s, subalgebra_slice, Slice};
use crate::error::{Error, Result};
use crate::pbw::{Engine, EnvElement, OrderKind};
use crate::reduced::PCharacter;
use crate::repmod::{
    baby_verma, central_scalar, iso_test, lambda_set, twist_by_automorphism,
    validate_automorphism, Automorphism, Borel, IsoDegree, Weight,
};
use crate::scalar::{Field, FieldElement, Matrix};
use crate::superalg::{rho_weight, SuperAlgebraSpec};

/// Polynomial in the toral generators (an element of `U(h) = k[h^*]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToralPolynomial {
    /// exponent tuple over the toral basis -> coefficient
    pub terms: BTreeMap<Vec<u16>, FieldElement>,
    pub rank: usize,
}

impl ToralPolynomial {
    pub fn zero(rank: usize) -> ToralPolynomial {
        ToralPolynomial {
            terms: BTreeMap::new(),
            rank,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, field: &Field, exp: Vec<u16>, c: FieldElement) {
        if field.is_zero(&c) {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(|| field.zero());
        *entry = field.add(entry, &c);
        if field.is_zero(entry) {
            let dead: Vec<Vec<u16>> = self
                .terms
                .iter()
                .filter(|(_, v)| field.is_zero(v))
                .map(|(k, _)| k.clone())
                .collect();
            for k in dead {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add(&self, field: &Field, other: &ToralPolynomial) -> ToralPolynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(field, e.clone(), *c);
        }
        out
    }

    pub fn mul(&self, field: &Field, other: &ToralPolynomial) -> ToralPolynomial {
        let mut out = ToralPolynomial::zero(self.rank);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u16> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(field, e, field.mul(c1, c2));
            }
        }
        out
    }

    /// Evaluate at a weight, over a possibly larger field (coefficients are
    /// lifted through the prime subfield).
    pub fn eval(&self, coeff_field: &Field, target: &Field, lambda: &Weight) -> FieldElement {
        let mut acc = target.zero();
        for (e, c) in &self.terms {
            let mut term = target.from_coeffs(&coeff_field.coeffs_vec(c));
            for (a, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = target.mul(&term, &lambda.values[a]);
                }
            }
            acc = target.add(&acc, &term);
        }
        acc
    }

    /// Substitute `h_a -> h_a + shift_a` (binomial expansion).
    pub fn shift(&self, field: &Field, shifts: &[FieldElement]) -> ToralPolynomial {
        let mut out = ToralPolynomial::zero(self.rank);
        for (e, c) in &self.terms {
            // expand прод_a (h_a + s_a)^{e_a}
            let mut partial: Vec<(Vec<u16>, FieldElement)> = vec![(vec![0; self.rank], *c)];
            for (a, &k) in e.iter().enumerate() {
                let mut next = Vec::new();
                for (exp, coef) in &partial {
                    // (h + s)^k = sum_j C(k, j) s^{k-j} h^j, with the
                    // binomials computed over Z and reduced mod p
                    for j in 0..=k {
                        let mut e2 = exp.clone();
                        e2[a] += j;
                        let b = binomial_mod(k as u64, j as u64, field.p());
                        let mut c2 = field.mul(coef, &field.from_int(b as i64));
                        for _ in 0..(k - j) {
                            c2 = field.mul(&c2, &shifts[a]);
                        }
                        next.push((e2, c2));
                    }
                }
                partial = next;
            }
            for (e2, c2) in partial {
                out.insert(field, e2, c2);
            }
        }
        out
    }

    /// Substitute `h_a -> sum_b m[a][b] h_b` (a linear change of toral
    /// variables, e.g. a Weyl reflection).
    pub fn subst_linear(&self, field: &Field, m: &[Vec<FieldElement>]) -> ToralPolynomial {
        let mut out = ToralPolynomial::zero(self.rank);
        for (e, c) in &self.terms {
            let mut partial: Vec<(Vec<u16>, FieldElement)> = vec![(vec![0; self.rank], *c)];
            for (a, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    let mut next = Vec::new();
                    for (exp, coef) in &partial {
                        for (b, mb) in m[a].iter().enumerate() {
                            if field.is_zero(mb) {
                                continue;
                            }
                            let mut e2 = exp.clone();
                            e2[b] += 1;
                            next.push((e2, field.mul(coef, mb)));
                        }
                    }
                    partial = next;
                }
            }
            for (e2, c2) in partial {
                out.insert(field, e2, c2);
            }
        }
        out
    }

    pub fn render(&self, field: &Field, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let mut factors = String::new();
            for (a, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !factors.is_empty() {
                    factors.push(' ');
                }
                if k == 1 {
                    factors.push_str(&names[a]);
                } else {
                    factors.push_str(&format!("{}^{}", names[a], k));
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

/// Binomial coefficient mod p via the Pascal recurrence over machine
/// integers reduced mod p (degrees here stay tiny).
fn binomial_mod(n: u64, k: u64, p: u32) -> u64 {
    if k > n {
        return 0;
    }
    let mut row = vec![0u64; (n + 1) as usize];
    row[0] = 1;
    for _ in 0..n {
        for j in (1..row.len()).rev() {
            row[j] = (row[j] + row[j - 1]) % p as u64;
        }
    }
    row[k as usize]
}

fn toral_block(engine: &Engine) -> Result<(usize, usize)> {
    let t = engine
        .spec
        .triangular
        .as_ref()
        .ok_or(Error::MissingRootData)?;
    let start = match engine.order {
        OrderKind::Standard => t.negative_even.len() + t.negative_odd.len(),
        OrderKind::Reflected => t.positive_even.len() + t.positive_odd.len(),
    };
    Ok((start, t.toral.len()))
}

/// The canonical projection `U(g) -> U(h)`: keep exactly the monomials
/// supported on the toral block.
pub fn gamma1(engine: &Engine, u: &EnvElement) -> Result<ToralPolynomial> {
    let (start, r) = toral_block(engine)?;
    let mut out = ToralPolynomial::zero(r);
    for (m, c) in &u.terms {
        let toral_only = m
            .0
            .iter()
            .enumerate()
            .all(|(pos, &e)| e == 0 || (pos >= start && pos < start + r));
        if toral_only {
            let exp: Vec<u16> = (0..r).map(|a| m.0[start + a]).collect();
            out.insert(&engine.field, exp, *c);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftSign {
    Plus,
    Minus,
}

/// The rho-shifted projection `beta o gamma_1` with `h -> h + rho(h)`
/// (plus) or `h -> h - rho(h)` (minus). The minus shift is the default the
/// reflection-invariance check uses; both remain available.
pub fn gamma(engine: &Engine, z: &EnvElement, sign: ShiftSign) -> Result<ToralPolynomial> {
    let g1 = gamma1(engine, z)?;
    let rho = rho_weight(&engine.spec)?;
    let field = &engine.field;
    let shifts: Vec<FieldElement> = rho
        .iter()
        .map(|c| {
            let lifted = field.from_coeffs(&engine.spec.field().coeffs_vec(c));
            match sign {
                ShiftSign::Plus => lifted,
                ShiftSign::Minus => field.neg(&lifted),
            }
        })
        .collect();
    Ok(g1.shift(field, &shifts))
}

/// Rank-one Weyl representative `n_s = exp(ad e) exp(-ad f) exp(ad e)` as a
/// validated automorphism, together with its action on the torus.
#[derive(Debug, Clone)]
pub struct WeylElement {
    pub auto: Automorphism,
    /// toral substitution matrix: h_a -> sum_b m[a][b] h_b (over F_p)
    pub toral_sub: Vec<Vec<FieldElement>>,
}

impl WeylElement {
    /// Image of a weight under the reflection: `(s lambda)(h) = lambda(s^{-1} h)`.
    pub fn weight_action(&self, spec: &SuperAlgebraSpec, field: &Field, lambda: &Weight) -> Weight {
        let fp = spec.field();
        let t = spec.triangular.as_ref().expect("validated");
        let inv = self.auto.matrix.inverse(&fp).expect("automorphism");
        let r = t.toral.len();
        let mut values = Vec::with_capacity(r);
        for (a, &ha) in t.toral.iter().enumerate() {
            let _ = a;
            let mut acc = field.zero();
            for (b, &hb) in t.toral.iter().enumerate() {
                let c = inv.at(hb, ha);
                if fp.is_zero(c) {
                    continue;
                }
                acc = field.add(
                    &acc,
                    &field.mul(&field.from_int(c.c[0] as i64), &lambda.values[b]),
                );
            }
            values.push(acc);
        }
        Weight { values }
    }
}

fn exp_nilpotent(m: &Matrix, field: &Field) -> Result<Matrix> {
    let p = field.p() as u64;
    if !m.pow(p, field).is_zero(field) {
        return Err(Error::InvalidAlgebra(
            "ad-nilpotency order exceeds p; exponential undefined".into(),
        ));
    }
    let mut acc = Matrix::identity(m.rows, field);
    let mut power = Matrix::identity(m.rows, field);
    let mut factorial = field.one();
    for k in 1..p {
        power = power.mul(m, field);
        factorial = field.mul(&factorial, &field.from_int(k as i64));
        let inv = field.inv(&factorial).expect("k < p");
        acc = acc.add(&power.scale(&inv, field), field);
        if power.is_zero(field) {
            break;
        }
    }
    Ok(acc)
}

/// Build the rank-one reflection representative for an algebra with a single
/// positive even root (osp(1|2) and friends).
pub fn weyl_representative(spec: &Arc<SuperAlgebraSpec>) -> Result<WeylElement> {
    let t = spec.triangular.as_ref().ok_or(Error::MissingRootData)?;
    if t.toral.len() != 1 || t.positive_even.len() != 1 || t.negative_even.len() != 1 {
        return Err(Error::InvalidAlgebra(
            "weyl_representative handles the rank-one case only".into(),
        ));
    }
    let field = spec.field();
    let e_idx = t.positive_even[0];
    let f_idx = t.negative_even[0];
    let ad_e = spec.ad_matrix(e_idx, &field);
    let ad_f = spec.ad_matrix(f_idx, &field);
    let exp_e = exp_nilpotent(&ad_e, &field)?;
    let exp_mf = exp_nilpotent(&ad_f.scale(&field.from_int(-1), &field), &field)?;
    let n_s = exp_e.mul(&exp_mf, &field).mul(&exp_e, &field);
    let auto = validate_automorphism(spec, &n_s)?;
    let r = t.toral.len();
    let mut toral_sub = vec![vec![field.zero(); r]; r];
    for (a, &ha) in t.toral.iter().enumerate() {
        for (b, &hb) in t.toral.iter().enumerate() {
            toral_sub[a][b] = *n_s.at(hb, ha);
        }
    }
    Ok(WeylElement { auto, toral_sub })
}

/// Conjugation `u -> n_w u n_w^{-1}` extended multiplicatively to `U(g)`
/// through the images of the generators.
pub fn conjugate(engine: &Engine, w: &WeylElement, u: &EnvElement) -> Result<EnvElement> {
    let fp = engine.spec.field();
    let n = engine.spec.dim();
    let images: Vec<EnvElement> = (0..n)
        .map(|i| {
            let mut img = engine.zero();
            for j in 0..n {
                let c = w.auto.matrix.at(j, i);
                if fp.is_zero(c) {
                    continue;
                }
                img = engine.add(
                    &img,
                    &engine.scale(&engine.gen_elem(j), &engine.field.from_int(c.c[0] as i64)),
                );
            }
            img
        })
        .collect();
    let mut out = engine.zero();
    for (m, c) in &u.terms {
        let mut term = engine.scalar(*c);
        for (pos, &e) in m.0.iter().enumerate() {
            let img = &images[engine.basis_at(pos)];
            for _ in 0..e {
                term = engine.mul(&term, img)?;
            }
        }
        out = engine.add(&out, &term);
    }
    Ok(out)
}

/// One named verification outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HcCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Report of the Harish-Chandra suite for osp(1|2).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HarishReport {
    pub p: u32,
    pub degree: usize,
    pub shift_sign: ShiftSign,
    pub checks: Vec<HcCheck>,
    /// full-slice central-character deviations at the nilpotent character:
    /// p-center elements see chi(f) through f^p = chi(f)^p, which the toral
    /// projection cannot; recorded, not failed
    pub chi0_full_slice_deviations: Vec<String>,
}

impl HarishReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn push(checks: &mut Vec<HcCheck>, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
    checks.push(HcCheck {
        name: name.into(),
        passed,
        detail: detail.into(),
    });
}

/// The central-character identity `chi_lambda(z) = gamma_1(z)(lambda)` over
/// a slice, for one character; returns per-element outcomes.
fn scalar_identity_over(
    spec: &Arc<SuperAlgebraSpec>,
    engine: &Engine,
    ext: &Field,
    slice: &Slice,
    chi: &PCharacter,
) -> Result<Vec<(usize, bool, String)>> {
    let weights = lambda_set(spec, ext, chi)?;
    let ext_engine = Engine::new(spec.clone(), ext.clone(), OrderKind::Standard)?;
    let mut out = Vec::new();
    for (zi, z) in slice.basis.iter().enumerate() {
        let g1 = gamma1(engine, z)?;
        let z_ext = ext_engine.convert_from(engine, z)?;
        let mut ok = true;
        let mut detail = String::new();
        for lam in &weights {
            let verma = baby_verma(spec, ext, chi, lam, Borel::Standard)?;
            let actual = central_scalar(&ext_engine, &z_ext, &verma)?;
            let predicted = g1.eval(&engine.field, ext, lam);
            if actual != predicted {
                ok = false;
                detail = format!(
                    "z#{zi} at lambda = {}: scalar {} vs gamma_1 value {}",
                    ext.render(&lam.values[0]),
                    ext.render(&actual),
                    ext.render(&predicted)
                );
                break;
            }
        }
        out.push((zi, ok, detail));
    }
    Ok(out)
}

/// Kernel dimension of `gamma_1` restricted to a slice.
fn gamma1_kernel_dim(engine: &Engine, slice: &Slice) -> Result<usize> {
    let field = &engine.field;
    // collect the toral monomials that occur
    let polys: Vec<ToralPolynomial> = slice
        .basis
        .iter()
        .map(|z| gamma1(engine, z))
        .collect::<Result<_>>()?;
    let mut cols: Vec<Vec<u16>> = Vec::new();
    for p in &polys {
        for e in p.terms.keys() {
            if !cols.contains(e) {
                cols.push(e.clone());
            }
        }
    }
    cols.sort();
    let mut m = Matrix::zeros(cols.len().max(1), slice.basis.len(), field);
    for (j, p) in polys.iter().enumerate() {
        for (e, c) in &p.terms {
            let i = cols.iter().position(|x| x == e).unwrap();
            *m.at_mut(i, j) = *c;
        }
    }
    Ok(m.kernel_basis(field).len())
}

/// Run the full Harish-Chandra suite for osp(1|2) at prime p, slice degree d.
pub fn verify_hc(p: u32, d: usize) -> Result<HarishReport> {
    let spec = Arc::new(crate::superalg::builtin("osp", (1, 2), p)?);
    let field = spec.field();
    let ext = Field::extension(p, 2)?;
    let engine = Engine::standard(spec.clone())?;
    let mut checks = Vec::new();

    // slices: the invariant surrogate <1, S^2> and the full center
    let s = special_s(&engine)?;
    let s2 = engine.mul(&s, &s)?;
    let inv_slice = subalgebra_slice(&engine, &[engine.one(), s2.clone()], d, true)?;
    let full_slice = crate::central::centralizer_slice(&engine, d, false)?;

    // gamma_1(S) = h + 1/2 and the evaluation identity gamma_1(S^2)(lam) =
    // (lam + 1/2)^2
    let g1_s = gamma1(&engine, &s)?;
    let half = field.inv(&field.from_int(2)).unwrap();
    let mut expect = ToralPolynomial::zero(1);
    expect.insert(&field, vec![1], field.one());
    expect.insert(&field, vec![0], half);
    push(
        &mut checks,
        "gamma_1(S) = h + 1/2",
        g1_s == expect,
        g1_s.render(&field, &["h".into()]),
    );
    let g1_s2 = gamma1(&engine, &s2)?;
    let sq = expect.mul(&field, &expect);
    push(
        &mut checks,
        "gamma_1(S^2) = (h + 1/2)^2",
        g1_s2 == sq,
        g1_s2.render(&field, &["h".into()]),
    );

    // shifted projections: minus shift sends gamma_1(S^2) to h^2, which is
    // reflection invariant; the literal plus shift is not
    let minus = gamma(&engine, &s2, ShiftSign::Minus)?;
    let mut h2 = ToralPolynomial::zero(1);
    h2.insert(&field, vec![2], field.one());
    push(
        &mut checks,
        "gamma(S^2, minus) = h^2",
        minus == h2,
        minus.render(&field, &["h".into()]),
    );
    let refl = vec![vec![field.from_int(-1)]];
    let plus = gamma(&engine, &s2, ShiftSign::Plus)?;
    let plus_invariant = plus.subst_linear(&field, &refl) == plus;
    push(
        &mut checks,
        "plus shift fails reflection invariance (recorded sign discrepancy)",
        !plus_invariant,
        plus.render(&field, &["h".into()]),
    );

    // characters
    let chi0 = PCharacter::osp12_nilpotent(&spec, &field).unwrap();
    let chi0_ext = PCharacter::new(
        &spec,
        &ext,
        chi0.values
            .iter()
            .map(|v| ext.from_coeffs(&field.coeffs_vec(v)))
            .collect(),
    );
    let chi_zero_ext = PCharacter::new(
        &spec,
        &ext,
        vec![ext.zero(), ext.zero(), ext.zero()],
    );
    let chi1 = PCharacter::osp12_semisimple(&spec, &ext)?;

    // (a) central-character identity on the invariant slice, all characters
    for (tag, chi) in [
        ("chi=0", &chi_zero_ext),
        ("chi0", &chi0_ext),
        ("chi1", &chi1),
    ] {
        let results = scalar_identity_over(&spec, &engine, &ext, &inv_slice, chi)?;
        let bad: Vec<String> = results
            .iter()
            .filter(|(_, ok, _)| !ok)
            .map(|(_, _, d)| d.clone())
            .collect();
        push(
            &mut checks,
            format!("chi_lambda(z) = gamma_1(z)(lambda) on <1, S^2> slice, {tag}"),
            bad.is_empty(),
            if bad.is_empty() {
                format!("{} elements x {} weights", inv_slice.dim(), p)
            } else {
                bad.join("; ")
            },
        );
    }
    // (a') strengthened to the full center slice, where the identity holds
    // unconditionally: chi = 0 and the regular semisimple chi
    for (tag, chi) in [("chi=0", &chi_zero_ext), ("chi1", &chi1)] {
        let results = scalar_identity_over(&spec, &engine, &ext, &full_slice, chi)?;
        let bad: Vec<String> = results
            .iter()
            .filter(|(_, ok, _)| !ok)
            .map(|(_, _, d)| d.clone())
            .collect();
        push(
            &mut checks,
            format!("chi_lambda(z) = gamma_1(z)(lambda) on the full center slice, {tag}"),
            bad.is_empty(),
            if bad.is_empty() {
                format!("{} elements", full_slice.dim())
            } else {
                bad.join("; ")
            },
        );
    }
    // at the nilpotent character the p-center part of the slice genuinely
    // deviates (f^p acts by chi(f)^p = 1, gamma_1(f^p) = 0): record it
    let chi0_results = scalar_identity_over(&spec, &engine, &ext, &full_slice, &chi0_ext)?;
    let chi0_full_slice_deviations: Vec<String> = chi0_results
        .into_iter()
        .filter(|(_, ok, _)| !ok)
        .map(|(_, _, d)| d)
        .collect();

    // (c) injectivity of gamma_1 on the invariant slice
    let kdim_inv = gamma1_kernel_dim(&engine, &inv_slice)?;
    push(
        &mut checks,
        "gamma_1 injective on the <1, S^2> slice",
        kdim_inv == 0,
        format!("kernel dimension {kdim_inv} on dimension {}", inv_slice.dim()),
    );
    let kdim_full = gamma1_kernel_dim(&engine, &full_slice)?;
    push(
        &mut checks,
        "gamma_1 kernel on the full center slice is the p-center part (informational)",
        true,
        format!(
            "kernel dimension {kdim_full} on dimension {} (xi_e, xi_f monomials project to 0)",
            full_slice.dim()
        ),
    );

    // Weyl machinery
    let weyl = weyl_representative(&spec)?;
    let h_idx = spec.index_of("h").unwrap();
    let n_s_h: Vec<FieldElement> = (0..spec.dim())
        .map(|i| *weyl.auto.matrix.at(i, h_idx))
        .collect();
    let mut expect_neg_h = vec![field.zero(); spec.dim()];
    expect_neg_h[h_idx] = field.from_int(-1);
    push(
        &mut checks,
        "n_s(h) = -h",
        n_s_h == expect_neg_h,
        String::new(),
    );
    let xi_h = engine.xi(h_idx);
    let conj_xi = conjugate(&engine, &weyl, &xi_h)?;
    push(
        &mut checks,
        "conjugate(n_s, xi_h) = -xi_h",
        conj_xi == engine.scale(&xi_h, &field.from_int(-1)),
        String::new(),
    );
    let conj_s2 = conjugate(&engine, &weyl, &s2)?;
    let s2_fixed = conj_s2 == s2;
    push(
        &mut checks,
        "S^2 is fixed by conjugate(n_s, .)",
        s2_fixed,
        String::new(),
    );
    // (d) reflection invariance of the minus-shifted images of fixed slice
    // elements, over the full center slice
    let mut refl_ok = true;
    let mut refl_detail = String::new();
    let mut fixed_count = 0usize;
    for (zi, z) in inv_slice.basis.iter().chain(full_slice.basis.iter()).enumerate() {
        if conjugate(&engine, &weyl, z)? != *z {
            continue;
        }
        fixed_count += 1;
        let img = gamma(&engine, z, ShiftSign::Minus)?;
        if img.subst_linear(&field, &refl) != img {
            refl_ok = false;
            refl_detail = format!("element #{zi}");
            break;
        }
    }
    push(
        &mut checks,
        "gamma(z, minus) is reflection-invariant for n_s-fixed slice elements",
        refl_ok,
        if refl_ok {
            format!("{fixed_count} fixed elements")
        } else {
            refl_detail
        },
    );

    // fs(s) computed from Delta(s) and from rho - s(rho) must agree, and
    // equal alpha (so lambda_s = -lambda - 1 on h-values)
    let weights_res = spec.root_weights()?;
    let t = spec.triangular.as_ref().unwrap();
    let mut fs_delta = field.zero();
    for &i in t.positive_even.iter() {
        let w = weights_res[i].as_ref().unwrap();
        fs_delta = field.add(&fs_delta, &field.from_int(w[0] as i64));
    }
    for &i in t.positive_odd.iter() {
        let w = weights_res[i].as_ref().unwrap();
        fs_delta = field.sub(&fs_delta, &field.from_int(w[0] as i64));
    }
    let rho = rho_weight(&spec)?;
    // s(rho) = -rho for the rank-one reflection
    let fs_rho = field.add(&rho[0], &rho[0]);
    push(
        &mut checks,
        "fs(s) from Delta(s) equals rho - s(rho)",
        fs_delta == fs_rho && fs_delta == field.one(),
        format!(
            "Delta(s) route {} vs rho route {}",
            field.render(&fs_delta),
            field.render(&fs_rho)
        ),
    );

    // (b) the Weyl-twist isomorphism at the regular semisimple character:
    // twist(Z_chi1(lambda)) and the reflected-Borel Verma at s(lambda) are
    // both isomorphic to the standard Z_{s(chi1)}(-lambda - 1)
    let lam_all = lambda_set(&spec, &ext, &chi1)?;
    let mut twist_ok = true;
    let mut twist_detail = String::new();
    for lam in &lam_all {
        let v = baby_verma(&spec, &ext, &chi1, lam, Borel::Standard)?;
        let v_twist = twist_by_automorphism(&spec, &v, &weyl.auto);
        let chi_s = v_twist.chi.clone();
        let lam_s = Weight {
            values: vec![ext.sub(&ext.neg(&lam.values[0]), &ext.one())],
        };
        let target = baby_verma(&spec, &ext, &chi_s, &lam_s, Borel::Standard)?;
        let s_lam = weyl.weight_action(&spec, &ext, lam);
        let reflected = baby_verma(&spec, &ext, &chi_s, &s_lam, Borel::Reflected)?;
        let iso1 = iso_test(&spec, &v_twist, &target, IsoDegree::Any)?;
        let iso2 = iso_test(&spec, &reflected, &target, IsoDegree::Any)?;
        if !(iso1.is_isomorphic() && iso2.is_isomorphic()) {
            twist_ok = false;
            twist_detail = format!("lambda = {}", ext.render(&lam.values[0]));
            break;
        }
    }
    push(
        &mut checks,
        "Weyl twist: twist(Z(lambda)) and reflected Z(s lambda) are standard Z(-lambda-1)",
        twist_ok,
        if twist_ok {
            format!("{} weights checked with explicit intertwiners", lam_all.len())
        } else {
            twist_detail
        },
    );

    // multiplicativity of gamma_1 on weight-zero elements, sampled
    let mut mult_ok = true;
    let mut mult_detail = String::new();
    let (f_idx, e_idx) = (spec.index_of("f").unwrap(), spec.index_of("e").unwrap());
    let cap_e = spec.index_of("E").unwrap();
    let cap_f = spec.index_of("F").unwrap();
    let samples = [
        engine.straighten(&[f_idx, e_idx], field.one()),
        engine.straighten(&[cap_f, cap_e], field.one()),
        engine.gen_elem(h_idx),
        s2.clone(),
        engine.straighten(&[f_idx, h_idx, e_idx], field.one()),
    ];
    for (i, u) in samples.iter().enumerate() {
        for (j, v) in samples.iter().enumerate() {
            let lhs = gamma1(&engine, &engine.mul(u, v)?)?;
            let rhs = gamma1(&engine, u)?.mul(&field, &gamma1(&engine, v)?);
            if lhs != rhs {
                mult_ok = false;
                mult_detail = format!("pair ({i}, {j})");
            }
        }
    }
    push(
        &mut checks,
        "gamma_1 multiplicative on weight-zero samples",
        mult_ok,
        mult_detail,
    );

    Ok(HarishReport {
        p,
        degree: d,
        shift_sign: ShiftSign::Minus,
        checks,
        chi0_full_slice_deviations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalg::builtin;

    fn engine(p: u32) -> Engine {
        Engine::standard(Arc::new(builtin("osp", (1, 2), p).unwrap())).unwrap()
    }

    #[test]
    fn gamma1_kills_non_toral_monomials() {
        let eng = engine(3);
        let spec = &eng.spec;
        let field = &eng.field;
        // gamma_1(xi_h) = h^p - h: already toral
        let xi_h = eng.xi(spec.index_of("h").unwrap());
        let g = gamma1(&eng, &xi_h).unwrap();
        let mut expect = ToralPolynomial::zero(1);
        expect.insert(field, vec![3], field.one());
        expect.insert(field, vec![1], field.from_int(-1));
        assert_eq!(g, expect);
        // gamma_1(e f) = toral part of f e + [e, f] = h
        let e = spec.index_of("e").unwrap();
        let f = spec.index_of("f").unwrap();
        let ef = eng.straighten(&[e, f], field.one());
        let g = gamma1(&eng, &ef).unwrap();
        let mut expect = ToralPolynomial::zero(1);
        expect.insert(field, vec![1], field.one());
        assert_eq!(g, expect);
        // xi_e projects to zero
        let xi_e = eng.xi(e);
        assert!(gamma1(&eng, &xi_e).unwrap().is_zero());
    }

    #[test]
    fn gamma_shifts_of_the_special_element() {
        let eng = engine(5);
        let field = &eng.field;
        let s = special_s(&eng).unwrap();
        // gamma(S, plus) = h + 1, gamma(S, minus) = h
        let plus = gamma(&eng, &s, ShiftSign::Plus).unwrap();
        let minus = gamma(&eng, &s, ShiftSign::Minus).unwrap();
        let mut h_plus_1 = ToralPolynomial::zero(1);
        h_plus_1.insert(field, vec![1], field.one());
        h_plus_1.insert(field, vec![0], field.one());
        let mut h_only = ToralPolynomial::zero(1);
        h_only.insert(field, vec![1], field.one());
        assert_eq!(plus, h_plus_1);
        assert_eq!(minus, h_only);
        // gamma(1, either) = 1
        let one = gamma(&eng, &eng.one(), ShiftSign::Plus).unwrap();
        let mut c1 = ToralPolynomial::zero(1);
        c1.insert(field, vec![0], field.one());
        assert_eq!(one, c1);
    }

    #[test]
    fn weyl_representative_reflects_the_torus() {
        for p in [3u32, 5] {
            let spec = Arc::new(builtin("osp", (1, 2), p).unwrap());
            let field = spec.field();
            let w = weyl_representative(&spec).unwrap();
            let h = spec.index_of("h").unwrap();
            assert_eq!(*w.auto.matrix.at(h, h), field.from_int(-1));
            // theta(e) = -f, theta(f) = -e, theta(E) = F, theta(F) = -E
            let e = spec.index_of("e").unwrap();
            let f = spec.index_of("f").unwrap();
            let cap_e = spec.index_of("E").unwrap();
            let cap_f = spec.index_of("F").unwrap();
            assert_eq!(*w.auto.matrix.at(f, e), field.from_int(-1));
            assert_eq!(*w.auto.matrix.at(e, f), field.from_int(-1));
            assert_eq!(*w.auto.matrix.at(cap_f, cap_e), field.one());
            assert_eq!(*w.auto.matrix.at(cap_e, cap_f), field.from_int(-1));
        }
    }

    #[test]
    fn conjugation_fixes_s_and_negates_xi_h() {
        let eng = engine(3);
        let spec = eng.spec.clone();
        let w = weyl_representative(&spec).unwrap();
        let s = special_s(&eng).unwrap();
        assert_eq!(conjugate(&eng, &w, &s).unwrap(), s);
        let xi_h = eng.xi(spec.index_of("h").unwrap());
        assert_eq!(
            conjugate(&eng, &w, &xi_h).unwrap(),
            eng.scale(&xi_h, &eng.field.from_int(-1))
        );
    }

    #[test]
    fn full_suite_at_p3() {
        let report = verify_hc(3, 4).unwrap();
        for c in &report.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        // the chi_0 deviation on the p-center part is real and recorded
        assert!(!report.chi0_full_slice_deviations.is_empty());
    }
}
