//! Finite-dimensional graded representations: baby Vermas over either Borel,
//! irreducibility (graded Norton criterion), homomorphism spaces, type M/Q,
//! parity flip, simple heads, automorphism twists, central characters.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pbw::{Engine, EnvElement, OrderKind};
use crate::reduced::{reduce, PCharacter};
use crate::scalar::{artin_schreier_solve, Field, FieldElement, Matrix, SpanBasis};
use crate::superalg::SuperAlgebraSpec;

/// A weight: values on the toral basis, in triangular-toral order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weight {
    pub values: Vec<FieldElement>,
}

/// Does `lambda(h)^p - lambda(h^{[p]}) = chi(h)^p` hold on every toral басис
/// element?
pub fn weight_admissible(
    spec: &SuperAlgebraSpec,
    field: &Field,
    chi: &PCharacter,
    lambda: &Weight,
) -> bool {
    let Some(t) = &spec.triangular else {
        return false;
    };
    let toral_slot: BTreeMap<usize, usize> =
        t.toral.iter().enumerate().map(|(a, &h)| (h, a)).collect();
    for (a, &h) in t.toral.iter().enumerate() {
        let lam_h = &lambda.values[a];
        let mut lam_hp = field.zero();
        for &(k, c) in spec.p_map(h) {
            let slot = toral_slot[&k];
            lam_hp = field.add(
                &lam_hp,
                &field.mul(&field.from_int(c as i64), &lambda.values[slot]),
            );
        }
        let lhs = field.sub(&field.pow(lam_h, field.p() as u64), &lam_hp);
        if lhs != chi.pth(field, h) {
            return false;
        }
    }
    true
}

/// All weights over the working field. Coordinates decouple via
/// Artin-Schreier when every toral element is p-fixed; otherwise brute
/// force over the torus (rank at most 2 at desk scale).
pub fn lambda_set(spec: &SuperAlgebraSpec, field: &Field, chi: &PCharacter) -> Result<Vec<Weight>> {
    let t = spec.triangular.as_ref().ok_or(Error::MissingRootData)?;
    let r = t.toral.len();
    let decoupled = t
        .toral
        .iter()
        .all(|&h| spec.p_map(h).as_slice() == [(h, 1)]);
    if decoupled {
        let mut per_coord: Vec<Vec<FieldElement>> = Vec::with_capacity(r);
        for &h in &t.toral {
            per_coord.push(artin_schreier_solve(&chi.pth(field, h), field));
        }
        let mut out = vec![Weight { values: vec![] }];
        for sols in per_coord {
            let mut next = Vec::with_capacity(out.len() * sols.len());
            for w in &out {
                for s in &sols {
                    let mut v = w.values.clone();
                    v.push(*s);
                    next.push(Weight { values: v });
                }
            }
            out = next;
        }
        return Ok(out);
    }
    if r > 2 {
        return Err(Error::BudgetExceeded {
            rows: field.order().pow(r as u32) as usize,
            cols: 1,
            limit: field.order().pow(2) as usize,
        });
    }
    let elems = field.elements();
    let mut out = Vec::new();
    let mut idx = vec![0usize; r];
    loop {
        let w = Weight {
            values: idx.iter().map(|&i| elems[i]).collect(),
        };
        if weight_admissible(spec, field, chi, &w) {
            out.push(w);
        }
        let mut i = 0;
        loop {
            if i == r {
                return Ok(out);
            }
            idx[i] += 1;
            if idx[i] < elems.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Finite-dimensional Z2-graded representation with exact action matrices.
#[derive(Debug, Clone)]
pub struct MatrixRep {
    pub field: Field,
    pub dim: usize,
    /// parity of each module basis vector
    pub parity: Vec<u8>,
    /// one action matrix per basis element of g
    pub action: Vec<Matrix>,
    pub chi: PCharacter,
    /// coordinates of a marked cyclic vector, when one is known
    pub cyclic: Option<Vec<FieldElement>>,
    pub label: String,
}

impl MatrixRep {
    /// Check the three defining invariants exactly: bracket compatibility,
    /// parity compatibility, and the reduced condition
    /// `M(x)^p = M(x^{[p]}) + chi(x)^p Id` for even x.
    pub fn validate(&self, spec: &SuperAlgebraSpec) -> Result<()> {
        let field = &self.field;
        let n = spec.dim();
        if self.action.len() != n {
            return Err(Error::ShapeMismatch("one matrix per basis element".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let flip = spec.parity(i) == 1 && spec.parity(j) == 1;
                let ab = self.action[i].mul(&self.action[j], field);
                let ba = self.action[j].mul(&self.action[i], field);
                let lhs = if flip {
                    ab.add(&ba, field)
                } else {
                    ab.sub(&ba, field)
                };
                let mut rhs = Matrix::zeros(self.dim, self.dim, field);
                for &(k, c) in spec.bracket(i, j) {
                    rhs = rhs.add(&self.action[k].scale(&field.from_int(c as i64), field), field);
                }
                if lhs != rhs {
                    return Err(Error::InvalidAlgebra(format!(
                        "bracket compatibility fails on pair ({}, {})",
                        spec.name(i),
                        spec.name(j)
                    )));
                }
            }
        }
        for g in 0..n {
            for r in 0..self.dim {
                for c in 0..self.dim {
                    if field.is_zero(self.action[g].at(r, c)) {
                        continue;
                    }
                    let crosses = self.parity[r] != self.parity[c];
                    if crosses != (spec.parity(g) == 1) {
                        return Err(Error::InvalidAlgebra(format!(
                            "parity compatibility fails for {}",
                            spec.name(g)
                        )));
                    }
                }
            }
        }
        for g in 0..spec.dim_even() {
            let lhs = self.action[g].pow(field.p() as u64, field);
            let mut rhs = Matrix::identity(self.dim, field).scale(&self.chi.pth(field, g), field);
            for &(k, c) in spec.p_map(g) {
                rhs = rhs.add(&self.action[k].scale(&field.from_int(c as i64), field), field);
            }
            if lhs != rhs {
                return Err(Error::InvalidAlgebra(format!(
                    "reduced condition fails for {}",
                    spec.name(g)
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Borel {
    Standard,
    Reflected,
}

/// Baby Verma module `Z_chi(lambda)`: induced from the one-dimensional
/// module of the chosen Borel, with basis the reduced monomials of the
/// opposite nilradical applied to the highest-weight vector.
pub fn baby_verma(
    spec: &Arc<SuperAlgebraSpec>,
    field: &Field,
    chi: &PCharacter,
    lambda: &Weight,
    borel: Borel,
) -> Result<MatrixRep> {
    let t = spec.triangular.as_ref().ok_or(Error::MissingRootData)?;
    if !weight_admissible(spec, field, chi, lambda) {
        return Err(Error::WeightNotAdmissible);
    }
    // chi must vanish on the even part of the Borel's nilradical
    let nilrad_even = match borel {
        Borel::Standard => &t.positive_even,
        Borel::Reflected => &t.negative_even,
    };
    for &i in nilrad_even {
        if !field.is_zero(&chi.values[i]) {
            return Err(Error::ChiNotStandard);
        }
    }
    let order = match borel {
        Borel::Standard => OrderKind::Standard,
        Borel::Reflected => OrderKind::Reflected,
    };
    let engine = Engine::new(spec.clone(), field.clone(), order)?;
    let free_len = match borel {
        Borel::Standard => t.negative_even.len() + t.negative_odd.len(),
        Borel::Reflected => t.positive_even.len() + t.positive_odd.len(),
    };
    let r = t.toral.len();
    let p = field.p() as u16;
    // module basis: free-block monomials with even exponents below p
    let mut basis: Vec<Vec<u16>> = Vec::new();
    let mut exp = vec![0u16; free_len];
    loop {
        basis.push(exp.clone());
        let mut pos = 0;
        loop {
            if pos == free_len {
                basis.sort_by_key(|e| {
                    (e.iter().map(|&x| x as usize).sum::<usize>(), e.clone())
                });
                let index: BTreeMap<Vec<u16>, usize> = basis
                    .iter()
                    .enumerate()
                    .map(|(i, m)| (m.clone(), i))
                    .collect();
                let dim = basis.len();
                let parity: Vec<u8> = basis
                    .iter()
                    .map(|m| {
                        let mut s = 0u16;
                        for (q, &e) in m.iter().enumerate() {
                            if engine.parity_at(q) == 1 {
                                s += e;
                            }
                        }
                        (s % 2) as u8
                    })
                    .collect();
                let mut action = Vec::with_capacity(spec.dim());
                for g in 0..spec.dim() {
                    let mut mat = Matrix::zeros(dim, dim, field);
                    for (col, m) in basis.iter().enumerate() {
                        // x_g * (monomial) * v, straightened and reduced
                        let mut full = vec![0u16; engine.dim()];
                        full[..free_len].copy_from_slice(m);
                        let elem = EnvElement {
                            sig: engine.sig(),
                            terms: BTreeMap::from([(
                                crate::pbw::PbwMonomial(full),
                                field.one(),
                            )]),
                        };
                        let acted = reduce(&engine, &engine.mul_gen_left(g, &elem)?, chi);
                        for (mono, c) in &acted.terms {
                            // killed part: anything past the toral block
                            if mono.0[free_len + r..].iter().any(|&e| e > 0) {
                                continue;
                            }
                            // toral part evaluates at lambda
                            let mut scalar = *c;
                            for a in 0..r {
                                let e = mono.0[free_len + a];
                                for _ in 0..e {
                                    scalar = field.mul(&scalar, &lambda.values[a]);
                                }
                            }
                            let key = mono.0[..free_len].to_vec();
                            let row = index[&key];
                            let cur = *mat.at(row, col);
                            *mat.at_mut(row, col) = field.add(&cur, &scalar);
                        }
                    }
                    action.push(mat);
                }
                let mut cyclic = vec![field.zero(); dim];
                cyclic[index[&vec![0u16; free_len]]] = field.one();
                let label = format!(
                    "Z_{}({})",
                    chi.tag,
                    lambda
                        .values
                        .iter()
                        .map(|v| field.render(v))
                        .collect::<Vec<_>>()
                        .join(",")
                );
                return Ok(MatrixRep {
                    field: field.clone(),
                    dim,
                    parity,
                    action,
                    chi: chi.clone(),
                    cyclic: Some(cyclic),
                    label,
                });
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

/// Evaluate an element of `U(g)` on a representation: monomials map to the
/// written-order product of action matrices.
pub fn evaluate(engine: &Engine, u: &EnvElement, rep: &MatrixRep) -> Result<Matrix> {
    if rep.field != engine.field || rep.action.len() != engine.spec.dim() {
        return Err(Error::SpecMismatch);
    }
    let field = &rep.field;
    let mut out = Matrix::zeros(rep.dim, rep.dim, field);
    for (m, c) in &u.terms {
        let mut term = Matrix::identity(rep.dim, field);
        for (pos, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let mat = &rep.action[engine.basis_at(pos)];
            term = term.mul(&mat.pow(e as u64, field), field);
        }
        out = out.add(&term.scale(c, field), field);
    }
    Ok(out)
}

/// Scalar by which a central element acts; errors when the evaluated matrix
/// is not scalar.
pub fn central_scalar(engine: &Engine, z: &EnvElement, rep: &MatrixRep) -> Result<FieldElement> {
    let m = evaluate(engine, z, rep)?;
    let c = *m.at(0, 0);
    let expect = Matrix::identity(rep.dim, &rep.field).scale(&c, &rep.field);
    if m != expect {
        return Err(Error::NotScalar {
            matrix: format!("{m:?}"),
        });
    }
    Ok(c)
}

#[derive(Debug, Clone)]
pub enum Irreducibility {
    Yes,
    /// an explicit proper nonzero graded submodule, as echelon row vectors
    No { submodule: Vec<Vec<FieldElement>> },
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Yes)
    }
}

fn parity_components(
    field: &Field,
    parity: &[u8],
    v: &[FieldElement],
) -> Vec<Vec<FieldElement>> {
    let mut even = vec![field.zero(); v.len()];
    let mut odd = vec![field.zero(); v.len()];
    let mut has = [false, false];
    for (i, c) in v.iter().enumerate() {
        if field.is_zero(c) {
            continue;
        }
        if parity[i] == 0 {
            even[i] = *c;
            has[0] = true;
        } else {
            odd[i] = *c;
            has[1] = true;
        }
    }
    let mut out = Vec::new();
    if has[0] {
        out.push(even);
    }
    if has[1] {
        out.push(odd);
    }
    out
}

/// Smallest graded submodule containing the parity components of the seeds.
fn graded_spin(
    field: &Field,
    parity: &[u8],
    action: &[Matrix],
    seeds: &[Vec<FieldElement>],
) -> SpanBasis {
    let dim = parity.len();
    let mut vectors: Vec<Vec<FieldElement>> = Vec::new();
    for s in seeds {
        vectors.extend(parity_components(field, parity, s));
    }
    let mut span = SpanBasis::new(&vectors, dim, field);
    let mut frontier = vectors;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for v in &frontier {
            for a in action {
                let img = a.apply(v, field);
                if !span.contains(&img) {
                    let sv = SpanBasis::new(
                        &(0..span.dim())
                            .map(|i| span.rref.row(i).to_vec())
                            .chain(std::iter::once(img.clone()))
                            .collect::<Vec<_>>(),
                        dim,
                        field,
                    );
                    span = sv;
                    next.push(img);
                }
            }
        }
        frontier = next;
    }
    span
}

/// Norton-criterion irreducibility over the working finite field, adapted to
/// graded submodules: spin the parity components of null vectors of an even
/// algebra element on both the module and its transpose.
pub fn is_irreducible(spec: &SuperAlgebraSpec, rep: &MatrixRep) -> Irreducibility {
    let field = &rep.field;
    let n = rep.dim;
    if n <= 1 {
        return Irreducibility::Yes;
    }
    // even words of the action algebra: even generators, odd*odd products,
    // then seeded random sums of short products
    let mut words: Vec<Matrix> = Vec::new();
    for g in 0..spec.dim() {
        if spec.parity(g) == 0 {
            words.push(rep.action[g].clone());
        }
    }
    for i in 0..spec.dim() {
        for j in 0..spec.dim() {
            if spec.parity(i) == 1 && spec.parity(j) == 1 {
                words.push(rep.action[i].mul(&rep.action[j], field));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ n as u64);
    let base = words.clone();
    for _ in 0..60 {
        let mut acc = Matrix::zeros(n, n, field);
        for w in &base {
            let c = field.rand_element(&mut rng);
            acc = acc.add(&w.scale(&c, field), field);
        }
        if rng.gen_bool(0.5) {
            let other = &base[rng.gen_range(0..base.len())];
            acc = acc.mul(other, field);
        }
        words.push(acc);
    }

    let line_cap = 2000usize;
    for w in &words {
        let kernel = w.kernel_basis(field);
        if kernel.is_empty() || kernel.len() == n {
            continue;
        }
        let lines = project_lines(field, &kernel, line_cap);
        let Some(lines) = lines else { continue };
        // primal side
        for v in &lines {
            let span = graded_spin(field, &rep.parity, &rep.action, std::slice::from_ref(v));
            if span.dim() < n {
                let sub = (0..span.dim()).map(|i| span.rref.row(i).to_vec()).collect();
                return Irreducibility::No { submodule: sub };
            }
        }
        // dual side: transpose action on functionals
        let t_action: Vec<Matrix> = rep.action.iter().map(|a| a.transpose(field)).collect();
        let wt = w.transpose(field);
        let t_kernel = wt.kernel_basis(field);
        let Some(t_lines) = project_lines(field, &t_kernel, line_cap) else {
            continue;
        };
        for phi in &t_lines {
            let span = graded_spin(field, &rep.parity, &t_action, std::slice::from_ref(phi));
            if span.dim() < n {
                // annihilator of the spun functionals is a proper submodule
                let mut m = Matrix::zeros(span.dim(), n, field);
                for i in 0..span.dim() {
                    for j in 0..n {
                        *m.at_mut(i, j) = *span.rref.at(i, j);
                    }
                }
                let ann = m.kernel_basis(field);
                debug_assert!(!ann.is_empty());
                let sub_span = graded_spin(field, &rep.parity, &rep.action, &ann);
                debug_assert!(sub_span.dim() < n);
                let sub = (0..sub_span.dim())
                    .map(|i| sub_span.rref.row(i).to_vec())
                    .collect();
                return Irreducibility::No { submodule: sub };
            }
        }
        return Irreducibility::Yes;
    }
    unreachable!("MeatAxe found no usable singular even algebra element");
}

/// All nonzero vectors of a subspace up to scalar, or `None` past the cap.
fn project_lines(
    field: &Field,
    basis: &[Vec<FieldElement>],
    cap: usize,
) -> Option<Vec<Vec<FieldElement>>> {
    let q = field.order();
    let k = basis.len() as u32;
    if k == 0 {
        return Some(vec![]);
    }
    let total = (q.pow(k) - 1) / (q - 1);
    if total as usize > cap {
        return None;
    }
    let elems = field.elements();
    let dim = basis[0].len();
    let mut out = Vec::with_capacity(total as usize);
    // representatives: first nonzero coordinate normalized to 1
    let mut idx = vec![0usize; basis.len()];
    loop {
        let coeffs: Vec<FieldElement> = idx.iter().map(|&i| elems[i]).collect();
        if let Some(first) = coeffs.iter().position(|c| !field.is_zero(c)) {
            if coeffs[first] == field.one() {
                let mut v = vec![field.zero(); dim];
                for (b, c) in basis.iter().zip(&coeffs) {
                    if field.is_zero(c) {
                        continue;
                    }
                    for (i, x) in b.iter().enumerate() {
                        v[i] = field.add(&v[i], &field.mul(x, c));
                    }
                }
                out.push(v);
            }
        }
        let mut i = 0;
        loop {
            if i == idx.len() {
                return Some(out);
            }
            idx[i] += 1;
            if idx[i] < elems.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomParity {
    Even,
    Odd,
    Both,
}

/// Basis of intertwiners `T: V -> W`. Even maps commute with the action;
/// odd maps are parity-reversing and anticommute with odd generators
/// (`T M_V(x) = (-1)^{|x||T|} M_W(x) T`).
pub fn hom_space(
    spec: &SuperAlgebraSpec,
    v: &MatrixRep,
    w: &MatrixRep,
    parity: HomParity,
) -> Result<Vec<(u8, Matrix)>> {
    if v.chi != w.chi {
        return Err(Error::ChiMismatch);
    }
    if v.field != w.field {
        return Err(Error::SpecMismatch);
    }
    let mut out = Vec::new();
    if parity != HomParity::Odd {
        for m in hom_solve(spec, v, w, 0) {
            out.push((0u8, m));
        }
    }
    if parity != HomParity::Even {
        for m in hom_solve(spec, v, w, 1) {
            out.push((1u8, m));
        }
    }
    Ok(out)
}

fn hom_solve(spec: &SuperAlgebraSpec, v: &MatrixRep, w: &MatrixRep, tpar: u8) -> Vec<Matrix> {
    let field = &v.field;
    let (nv, nw) = (v.dim, w.dim);
    // allowed entries by parity pattern
    let mut vars = Vec::new();
    for i in 0..nw {
        for j in 0..nv {
            let crosses = w.parity[i] != v.parity[j];
            if crosses == (tpar == 1) {
                vars.push((i, j));
            }
        }
    }
    if vars.is_empty() {
        return vec![];
    }
    let var_index: BTreeMap<(usize, usize), usize> =
        vars.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    for g in 0..spec.dim() {
        let sign = if tpar == 1 && spec.parity(g) == 1 {
            field.from_int(-1)
        } else {
            field.one()
        };
        // T A - sign B T = 0, entry (i, j)
        let a = &v.action[g];
        let b = &w.action[g];
        for i in 0..nw {
            for j in 0..nv {
                let mut row = vec![field.zero(); vars.len()];
                let mut nonzero = false;
                for k in 0..nv {
                    if let Some(&vi) = var_index.get(&(i, k)) {
                        let c = a.at(k, j);
                        if !field.is_zero(c) {
                            row[vi] = field.add(&row[vi], c);
                            nonzero = true;
                        }
                    }
                }
                for k in 0..nw {
                    if let Some(&vi) = var_index.get(&(k, j)) {
                        let c = field.mul(b.at(i, k), &sign);
                        if !field.is_zero(&c) {
                            row[vi] = field.sub(&row[vi], &c);
                            nonzero = true;
                        }
                    }
                }
                if nonzero {
                    rows.push(row);
                }
            }
        }
    }
    let m = if rows.is_empty() {
        Matrix::zeros(1, vars.len(), field)
    } else {
        Matrix::from_rows(rows)
    };
    m.kernel_basis(field)
        .into_iter()
        .map(|k| {
            let mut t = Matrix::zeros(nw, nv, field);
            for (vi, &(i, j)) in vars.iter().enumerate() {
                *t.at_mut(i, j) = k[vi];
            }
            t
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndoType {
    M,
    Q,
    /// two-dimensional all-even endomorphisms: not absolutely irreducible,
    /// extend the field and recheck
    SplitNeeded,
}

impl std::fmt::Display for EndoType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EndoType::M => write!(f, "M"),
            EndoType::Q => write!(f, "Q"),
            EndoType::SplitNeeded => write!(f, "split-needed"),
        }
    }
}

/// Endomorphism type of an irreducible module: 1-dimensional endomorphisms
/// are type M, 2-dimensional with a nonzero odd one are type Q.
pub fn endo_type(spec: &SuperAlgebraSpec, v: &MatrixRep) -> Result<EndoType> {
    let homs = hom_space(spec, v, v, HomParity::Both)?;
    let even = homs.iter().filter(|(p, _)| *p == 0).count();
    let odd = homs.iter().filter(|(p, _)| *p == 1).count();
    match (even, odd) {
        (1, 0) => Ok(EndoType::M),
        (1, 1) => Ok(EndoType::Q),
        (2, 0) => Ok(EndoType::SplitNeeded),
        other => Err(Error::InvalidAlgebra(format!(
            "unexpected endomorphism dimensions {other:?}; input not irreducible?"
        ))),
    }
}

/// The parity flip: same underlying action, exchanged grading.
pub fn parity_flip(v: &MatrixRep) -> MatrixRep {
    let mut out = v.clone();
    out.parity = v.parity.iter().map(|&p| 1 - p).collect();
    out.label = format!("Pi {}", v.label);
    out
}

#[derive(Debug, Clone)]
pub enum IsoVerdict {
    Isomorphic { parity: u8, map: Matrix },
    NotIsomorphic,
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoDegree {
    EvenOnly,
    Any,
}

/// Search for a homogeneous invertible intertwiner. The search enumerates
/// every line of the even (and, if allowed, odd) homomorphism space, so a
/// negative answer is exact over the working field.
pub fn iso_test(
    spec: &SuperAlgebraSpec,
    v: &MatrixRep,
    w: &MatrixRep,
    degree: IsoDegree,
) -> Result<IsoVerdict> {
    if v.dim != w.dim {
        return Ok(IsoVerdict::NotIsomorphic);
    }
    let field = &v.field;
    for tpar in [0u8, 1] {
        if tpar == 1 && degree == IsoDegree::EvenOnly {
            continue;
        }
        let homs: Vec<Matrix> = hom_space(
            spec,
            v,
            w,
            if tpar == 0 {
                HomParity::Even
            } else {
                HomParity::Odd
            },
        )?
        .into_iter()
        .map(|(_, m)| m)
        .collect();
        if homs.is_empty() {
            continue;
        }
        let flat: Vec<Vec<FieldElement>> = homs.iter().map(|m| m.data.clone()).collect();
        let lines = project_lines(field, &flat, 10_000)
            .expect("hom spaces at desk scale are tiny");
        for line in lines {
            let t = Matrix {
                rows: w.dim,
                cols: v.dim,
                data: line,
            };
            if !field.is_zero(&t.det(field)) {
                return Ok(IsoVerdict::Isomorphic {
                    parity: tpar,
                    map: t,
                });
            }
        }
    }
    Ok(IsoVerdict::NotIsomorphic)
}

/// Quotient of a rep by a graded submodule (echelon row vectors).
fn quotient_rep(rep: &MatrixRep, submodule: &[Vec<FieldElement>]) -> MatrixRep {
    let field = &rep.field;
    let n = rep.dim;
    // homogeneous echelon basis of the (graded) submodule
    let mut homogeneous: Vec<Vec<FieldElement>> = Vec::new();
    for row in submodule {
        homogeneous.extend(parity_components(field, &rep.parity, row));
    }
    let span = SpanBasis::new(&homogeneous, n, field);
    assert_eq!(
        span.dim(),
        submodule.len(),
        "submodule must be parity-graded"
    );
    let pivots: Vec<usize> = span.pivots.clone();
    let free: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
    let reduce_vec = |v: &[FieldElement]| -> Vec<FieldElement> {
        // subtract the span to normal form, then read off free coordinates
        let mut w = v.to_vec();
        for (ri, &pc) in span.pivots.iter().enumerate() {
            if field.is_zero(&w[pc]) {
                continue;
            }
            let factor = w[pc];
            for j in 0..n {
                let t = field.sub(&w[j], &field.mul(&factor, span.rref.at(ri, j)));
                w[j] = t;
            }
        }
        free.iter().map(|&j| w[j]).collect()
    };
    let dim = free.len();
    let parity: Vec<u8> = free.iter().map(|&j| rep.parity[j]).collect();
    let action: Vec<Matrix> = rep
        .action
        .iter()
        .map(|a| {
            let mut m = Matrix::zeros(dim, dim, field);
            for (col, &j) in free.iter().enumerate() {
                let mut e = vec![field.zero(); n];
                e[j] = field.one();
                let img = reduce_vec(&a.apply(&e, field));
                for (row, c) in img.into_iter().enumerate() {
                    *m.at_mut(row, col) = c;
                }
            }
            m
        })
        .collect();
    let cyclic = rep.cyclic.as_ref().map(|v| reduce_vec(v));
    MatrixRep {
        field: field.clone(),
        dim,
        parity,
        action,
        chi: rep.chi.clone(),
        cyclic,
        label: format!("head({})", rep.label),
    }
}

/// Unique irreducible quotient of a cyclic highest-weight module: quotient
/// by proper submodules until irreducible, asserting the marked vector
/// survives and generates.
pub fn simple_head(spec: &SuperAlgebraSpec, rep: &MatrixRep) -> Result<MatrixRep> {
    let mut cur = rep.clone();
    let field = rep.field.clone();
    loop {
        let marked = cur
            .cyclic
            .clone()
            .ok_or_else(|| Error::InvalidAlgebra("simple_head needs a marked cyclic vector".into()))?;
        if marked.iter().all(|c| field.is_zero(c)) {
            return Err(Error::HeadNotUnique);
        }
        match is_irreducible(spec, &cur) {
            Irreducibility::Yes => {
                // the marked vector must generate
                let span = graded_spin(&field, &cur.parity, &cur.action, &[marked]);
                if span.dim() != cur.dim {
                    return Err(Error::HeadNotUnique);
                }
                cur.label = format!("L({})", rep.label);
                return Ok(cur);
            }
            Irreducibility::No { submodule } => {
                // the cyclic vector cannot lie in a proper submodule
                let sb = SpanBasis::new(&submodule, cur.dim, &field);
                if sb.contains(cur.cyclic.as_ref().unwrap()) {
                    return Err(Error::HeadNotUnique);
                }
                cur = quotient_rep(&cur, &submodule);
            }
        }
    }
}

/// A validated automorphism of g: columns are images of basis elements.
#[derive(Debug, Clone)]
pub struct Automorphism {
    pub matrix: Matrix,
}

/// Check bracket preservation and p-map compatibility (the latter through
/// ad, which is faithful for the centerless builtins this is used on).
pub fn validate_automorphism(spec: &SuperAlgebraSpec, theta: &Matrix) -> Result<Automorphism> {
    let field = spec.field();
    let n = spec.dim();
    if theta.rows != n || theta.cols != n {
        return Err(Error::ShapeMismatch("automorphism must be dim(g) square".into()));
    }
    if theta.inverse(&field).is_none() {
        return Err(Error::NotAutomorphism);
    }
    // parity preservation
    let s = spec.dim_even();
    for i in 0..n {
        for j in 0..n {
            if !field.is_zero(theta.at(i, j)) && ((i < s) != (j < s)) {
                return Err(Error::NotAutomorphism);
            }
        }
    }
    let col = |j: usize| -> Vec<(usize, u32)> {
        (0..n)
            .filter(|&i| !field.is_zero(theta.at(i, j)))
            .map(|i| (i, theta.at(i, j).c[0]))
            .collect()
    };
    for i in 0..n {
        for j in 0..n {
            let lhs = spec.bracket_sparse(&col(i), &col(j));
            let mut rhs: Vec<(usize, u32)> = Vec::new();
            for &(k, c) in spec.bracket(i, j) {
                for &(l, d) in &col(k) {
                    rhs.push((l, (c as u64 * d as u64 % spec.p as u64) as u32));
                }
            }
            let canon = |mut v: Vec<(usize, u32)>| {
                v.sort();
                let mut acc: Vec<(usize, u32)> = Vec::new();
                for (k, c) in v.drain(..) {
                    if let Some(last) = acc.last_mut() {
                        if last.0 == k {
                            last.1 = (last.1 + c) % spec.p;
                            continue;
                        }
                    }
                    acc.push((k, c % spec.p));
                }
                acc.retain(|&(_, c)| c != 0);
                acc
            };
            if canon(lhs) != canon(rhs) {
                return Err(Error::NotAutomorphism);
            }
        }
    }
    // p-map through ad: ad(theta(x^{[p]})) = (ad theta(x))^p
    for i in 0..spec.dim_even() {
        let mut ad_tx = Matrix::zeros(n, n, &field);
        for &(j, c) in &col(i) {
            ad_tx = ad_tx.add(
                &spec.ad_matrix(j, &field).scale(&field.from_int(c as i64), &field),
                &field,
            );
        }
        let lhs = ad_tx.pow(spec.p as u64, &field);
        let mut rhs = Matrix::zeros(n, n, &field);
        for &(k, c) in spec.p_map(i) {
            for &(l, d) in &col(k) {
                let coef = field.mul(&field.from_int(c as i64), &field.from_int(d as i64));
                rhs = rhs.add(&spec.ad_matrix(l, &field).scale(&coef, &field), &field);
            }
        }
        if lhs != rhs {
            return Err(Error::NotAutomorphism);
        }
    }
    Ok(Automorphism {
        matrix: theta.clone(),
    })
}

/// Twisted representation `x -> M(theta^{-1}(x))`; the p-character becomes
/// `chi o theta^{-1}`.
pub fn twist_by_automorphism(
    spec: &SuperAlgebraSpec,
    rep: &MatrixRep,
    theta: &Automorphism,
) -> MatrixRep {
    let fp = spec.field();
    let field = &rep.field;
    let inv = theta.matrix.inverse(&fp).expect("validated automorphism");
    let n = spec.dim();
    let mut action = Vec::with_capacity(n);
    for i in 0..n {
        let mut m = Matrix::zeros(rep.dim, rep.dim, field);
        for j in 0..n {
            let c = inv.at(j, i);
            if fp.is_zero(c) {
                continue;
            }
            m = m.add(&rep.action[j].scale(&field.from_int(c.c[0] as i64), field), field);
        }
        action.push(m);
    }
    let mut chi_vals = Vec::with_capacity(spec.dim_even());
    for i in 0..spec.dim_even() {
        let mut v = field.zero();
        for j in 0..spec.dim_even() {
            let c = inv.at(j, i);
            if fp.is_zero(c) {
                continue;
            }
            v = field.add(&v, &field.mul(&field.from_int(c.c[0] as i64), &rep.chi.values[j]));
        }
        chi_vals.push(v);
    }
    let chi = PCharacter::new(spec, field, chi_vals);
    MatrixRep {
        field: field.clone(),
        dim: rep.dim,
        parity: rep.parity.clone(),
        action,
        chi,
        cyclic: rep.cyclic.clone(),
        label: format!("twist({})", rep.label),
    }
}

/// The tuple of central scalars over the generator list.
pub fn central_character_point(
    engine: &Engine,
    rep: &MatrixRep,
    generators: &[EnvElement],
) -> Result<Vec<FieldElement>> {
    generators
        .iter()
        .map(|z| central_scalar(engine, z, rep))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::central::special_s;
    use crate::superalg::builtin;

    fn setup(p: u32) -> (Arc<SuperAlgebraSpec>, Field) {
        let spec = Arc::new(builtin("osp", (1, 2), p).unwrap());
        let field = spec.field();
        (spec, field)
    }

    fn fp_weight(field: &Field, v: i64) -> Weight {
        Weight {
            values: vec![field.from_int(v)],
        }
    }

    #[test]
    fn lambda_set_of_chi_zero_is_the_prime_field() {
        let (spec, field) = setup(3);
        let chi = PCharacter::zero(&spec, &field);
        let weights = lambda_set(&spec, &field, &chi).unwrap();
        assert_eq!(weights.len(), 3);
    }

    #[test]
    fn lambda_set_of_chi1_needs_the_extension() {
        let (spec, _) = setup(3);
        let f9 = Field::extension(3, 2).unwrap();
        let chi1 = PCharacter::osp12_semisimple(&spec, &f9).unwrap();
        let weights = lambda_set(&spec, &f9, &chi1).unwrap();
        assert_eq!(weights.len(), 3);
        for w in &weights {
            // solutions lie outside the prime field
            assert!(w.values[0].c[1] != 0);
            assert!(weight_admissible(&spec, &f9, &chi1, w));
        }
        // over F_p alone the set is empty
        let f3 = Field::prime(3).unwrap();
        let chi1_f3 = PCharacter::new(
            &spec,
            &f3,
            vec![f3.zero(), f3.one(), f3.zero()],
        );
        assert!(lambda_set(&spec, &f3, &chi1_f3).unwrap().is_empty());
    }

    #[test]
    fn baby_verma_dimension_and_invariants() {
        for p in [3u32, 5] {
            let (spec, field) = setup(p);
            let chi0 = PCharacter::osp12_nilpotent(&spec, &field).unwrap();
            let z = baby_verma(&spec, &field, &chi0, &fp_weight(&field, 0), Borel::Standard)
                .unwrap();
            assert_eq!(z.dim, 2 * p as usize);
            z.validate(&spec).unwrap();
        }
    }

    #[test]
    fn baby_verma_highest_weight_line() {
        let (spec, field) = setup(3);
        let chi0 = PCharacter::osp12_nilpotent(&spec, &field).unwrap();
        let lam = fp_weight(&field, 2);
        let z = baby_verma(&spec, &field, &chi0, &lam, Borel::Standard).unwrap();
        let v = z.cyclic.clone().unwrap();
        let h = spec.index_of("h").unwrap();
        let e = spec.index_of("e").unwrap();
        let cap_e = spec.index_of("E").unwrap();
        let hv = z.action[h].apply(&v, &field);
        let expect: Vec<_> = v.iter().map(|c| field.mul(c, &lam.values[0])).collect();
        assert_eq!(hv, expect);
        assert!(z.action[e].apply(&v, &field).iter().all(|c| field.is_zero(c)));
        assert!(z.action[cap_e].apply(&v, &field).iter().all(|c| field.is_zero(c)));
    }

    #[test]
    fn verma_action_samples_from_straightening() {
        // E (F v) = lambda(h) v, and F (F^{2p-1} v) = -chi(f)^p v
        let (spec, field) = setup(3);
        let chi0 = PCharacter::osp12_nilpotent(&spec, &field).unwrap();
        let lam = fp_weight(&field, 1);
        let z = baby_verma(&spec, &field, &chi0, &lam, Borel::Standard).unwrap();
        let v = z.cyclic.clone().unwrap();
        let cap_e = spec.index_of("E").unwrap();
        let cap_f = spec.index_of("F").unwrap();
        let fv = z.action[cap_f].apply(&v, &field);
        let efv = z.action[cap_e].apply(&fv, &field);
        let expect: Vec<_> = v.iter().map(|c| field.mul(c, &lam.values[0])).collect();
        assert_eq!(efv, expect);
        let mut w = v.clone();
        for _ in 0..(2 * 3) {
            w = z.action[cap_f].apply(&w, &field);
        }
        // F^{2p} v = -chi(f)^p v = -v for chi_0
        let neg_v: Vec<_> = v.iter().map(|c| field.neg(c)).collect();
        assert_eq!(w, neg_v);
    }

    #[test]
    fn weight_must_be_admissible() {
        let (spec, _field) = setup(3);
        let f9 = Field::extension(3, 2).unwrap();
        let chi1 = PCharacter::osp12_semisimple(&spec, &f9).unwrap();
        // lambda = 0 is not in Lambda(chi_1)
        let bad = Weight {
            values: vec![f9.zero()],
        };
        assert!(matches!(
            baby_verma(&spec, &f9, &chi1, &bad, Borel::Standard),
            Err(Error::WeightNotAdmissible)
        ));
    }

    #[test]
    fn reflected_borel_rejects_nonvanishing_chi() {
        // chi_0(f) = 1 rules out a one-dimensional module of the opposite
        // Borel, whose nilradical contains f
        let (spec, field) = setup(3);
        let chi0 = PCharacter::osp12_nilpotent(&spec, &field).unwrap();
        assert!(matches!(
            baby_verma(&spec, &field, &chi0, &fp_weight(&field, 0), Borel::Reflected),
            Err(Error::ChiNotStandard)
        ));
    }

    #[test]
    fn bad_automorphism_is_rejected() {
        let (spec, _) = setup(3);
        let fp = spec.field();
        let n = spec.dim();
        // swapping e and h preserves neither brackets nor the grading levels
        let mut theta = Matrix::identity(n, &fp);
        let e = spec.index_of("e").unwrap();
        let h = spec.index_of("h").unwrap();
        *theta.at_mut(e, e) = fp.zero();
        *theta.at_mut(h, h) = fp.zero();
        *theta.at_mut(e, h) = fp.one();
        *theta.at_mut(h, e) = fp.one();
        assert!(matches!(
            validate_automorphism(&spec, &theta),
            Err(Error::NotAutomorphism)
        ));
        // singular maps are rejected outright
        let zero = Matrix::zeros(n, n, &fp);
        assert!(validate_automorphism(&spec, &zero).is_err());
    }

    #[test]
    fn evaluate_identity_and_central_scalars() {
        let (spec, field) = setup(3);
        let engine = Engine::standard(spec.clone()).unwrap();
        let chi0 = PCharacter::osp12_nilpotent(&spec, &field).unwrap();
        let lam = fp_weight(&field, 0);
        let z = baby_verma(&spec, &field, &chi0, &lam, Borel::Standard).unwrap();
        let id = evaluate(&engine, &engine.one(), &z).unwrap();
        assert_eq!(id, Matrix::identity(z.dim, &field));
        // xi_f acts by chi_0(f)^p = 1
        let xi_f = engine.xi(spec.index_of("f").unwrap());
        let c = central_scalar(&engine, &xi_f, &z).unwrap();
        assert_eq!(c, field.one());
        // S^2 acts by (lambda + 1/2)^2
        let s = special_s(&engine).unwrap();
        let s2 = engine.mul(&s, &s).unwrap();
        let c = central_scalar(&engine, &s2, &z).unwrap();
        let half = field.inv(&field.from_int(2)).unwrap();
        let lam_half = field.add(&lam.values[0], &half);
        assert_eq!(c, field.mul(&lam_half, &lam_half));
        // a non-central element is rejected
        let e_gen = engine.gen_elem(spec.index_of("e").unwrap());
        assert!(central_scalar(&engine, &e_gen, &z).is_err());
    }

    #[test]
    fn chi1_vermas_are_irreducible() {
        let (spec, _) = setup(3);
        let f9 = Field::extension(3, 2).unwrap();
        let chi1 = PCharacter::osp12_semisimple(&spec, &f9).unwrap();
        for lam in lambda_set(&spec, &f9, &chi1).unwrap() {
            let z = baby_verma(&spec, &f9, &chi1, &lam, Borel::Standard).unwrap();
            z.validate(&spec).unwrap();
            assert!(is_irreducible(&spec, &z).is_irreducible());
            assert_eq!(endo_type(&spec, &z).unwrap(), EndoType::M);
        }
    }

    #[test]
    fn z0_at_lambda_zero_is_reducible_with_big_submodule() {
        let (spec, field) = setup(3);
        let chi = PCharacter::zero(&spec, &field);
        let z = baby_verma(&spec, &field, &chi, &fp_weight(&field, 0), Borel::Standard).unwrap();
        match is_irreducible(&spec, &z) {
            Irreducibility::No { submodule } => {
                assert_eq!(submodule.len(), 2 * 3 - 1);
            }
            Irreducibility::Yes => panic!("Z_0(0) must be reducible"),
        }
    }

    #[test]
    fn trivial_one_dimensional_module_is_irreducible() {
        let (spec, field) = setup(3);
        let chi = PCharacter::zero(&spec, &field);
        let rep = MatrixRep {
            field: field.clone(),
            dim: 1,
            parity: vec![0],
            action: vec![Matrix::zeros(1, 1, &field); spec.dim()],
            chi,
            cyclic: Some(vec![field.one()]),
            label: "trivial".into(),
        };
        rep.validate(&spec).unwrap();
        assert!(is_irreducible(&spec, &rep).is_irreducible());
    }

    #[test]
    fn simple_heads_of_restricted_vermas() {
        let (spec, field) = setup(3);
        let chi = PCharacter::zero(&spec, &field);
        for lam in 0..3i64 {
            let z = baby_verma(&spec, &field, &chi, &fp_weight(&field, lam), Borel::Standard)
                .unwrap();
            let head = simple_head(&spec, &z).unwrap();
            assert_eq!(head.dim, (2 * lam + 1) as usize, "dim L({lam})");
            head.validate(&spec).unwrap();
            assert!(is_irreducible(&spec, &head).is_irreducible());
        }
    }

    #[test]
    fn singular_vector_in_z0() {
        // E * (F^{2 lambda + 1} v) = 0 exhibits the maximal submodule
        let (spec, field) = setup(3);
        let chi = PCharacter::zero(&spec, &field);
        let lam = 1i64;
        let z = baby_verma(&spec, &field, &chi, &fp_weight(&field, lam), Borel::Standard).unwrap();
        let cap_e = spec.index_of("E").unwrap();
        let cap_f = spec.index_of("F").unwrap();
        let mut w = z.cyclic.clone().unwrap();
        for _ in 0..(2 * lam + 1) {
            w = z.action[cap_f].apply(&w, &field);
        }
        assert!(w.iter().any(|c| !field.is_zero(c)));
        let ew = z.action[cap_e].apply(&w, &field);
        assert!(ew.iter().all(|c| field.is_zero(c)));
    }

    #[test]
    fn chi0_pairing_and_types() {
        let (spec, field) = setup(3);
        let chi0 = PCharacter::osp12_nilpotent(&spec, &field).unwrap();
        let z0 = baby_verma(&spec, &field, &chi0, &fp_weight(&field, 0), Borel::Standard).unwrap();
        let z1 = baby_verma(&spec, &field, &chi0, &fp_weight(&field, 1), Borel::Standard).unwrap();
        let z2 = baby_verma(&spec, &field, &chi0, &fp_weight(&field, 2), Borel::Standard).unwrap();
        assert!(is_irreducible(&spec, &z0).is_irreducible());
        assert!(is_irreducible(&spec, &z1).is_irreducible());
        // Z(0) pairs with Z(p-1-0) = Z(2)
        assert!(iso_test(&spec, &z0, &z2, IsoDegree::Any).unwrap().is_isomorphic());
        assert!(!iso_test(&spec, &z0, &z1, IsoDegree::Any).unwrap().is_isomorphic());
        // types: M away from the midpoint, Q at it
        assert_eq!(endo_type(&spec, &z0).unwrap(), EndoType::M);
        assert_eq!(endo_type(&spec, &z1).unwrap(), EndoType::Q);
    }

    #[test]
    fn parity_flip_iso_behaviour() {
        let (spec, field) = setup(3);
        let chi0 = PCharacter::osp12_nilpotent(&spec, &field).unwrap();
        let m_type = baby_verma(&spec, &field, &chi0, &fp_weight(&field, 0), Borel::Standard)
            .unwrap();
        let q_type = baby_verma(&spec, &field, &chi0, &fp_weight(&field, 1), Borel::Standard)
            .unwrap();
        // Pi Pi V is V on the nose
        let pp = parity_flip(&parity_flip(&m_type));
        assert_eq!(pp.parity, m_type.parity);
        // no even isomorphism V = Pi V for type M
        assert!(!iso_test(&spec, &m_type, &parity_flip(&m_type), IsoDegree::EvenOnly)
            .unwrap()
            .is_isomorphic());
        // but an odd one exists
        assert!(iso_test(&spec, &m_type, &parity_flip(&m_type), IsoDegree::Any)
            .unwrap()
            .is_isomorphic());
        // type Q: even isomorphism with the flip
        assert!(iso_test(&spec, &q_type, &parity_flip(&q_type), IsoDegree::EvenOnly)
            .unwrap()
            .is_isomorphic());
    }

    #[test]
    fn twist_by_identity_is_identity() {
        let (spec, field) = setup(3);
        let fp = spec.field();
        let chi0 = PCharacter::osp12_nilpotent(&spec, &field).unwrap();
        let z = baby_verma(&spec, &field, &chi0, &fp_weight(&field, 0), Borel::Standard).unwrap();
        let theta = validate_automorphism(&spec, &Matrix::identity(spec.dim(), &fp)).unwrap();
        let tz = twist_by_automorphism(&spec, &z, &theta);
        assert_eq!(tz.action, z.action);
        assert_eq!(tz.chi, z.chi);
    }

    #[test]
    fn central_character_points() {
        let (spec, field) = setup(3);
        let engine = Engine::standard(spec.clone()).unwrap();
        let chi = PCharacter::zero(&spec, &field);
        let gens = crate::central::osp12_center_generators(&engine).unwrap();
        // point of L(lambda) at chi = 0 is (1, 0, 0, 0, (lambda + 1/2)^2)
        // over the generator list (1, xi_e, xi_h, xi_f, S^2)
        for lam in 0..3i64 {
            let z = baby_verma(&spec, &field, &chi, &fp_weight(&field, lam), Borel::Standard)
                .unwrap();
            let head = simple_head(&spec, &z).unwrap();
            let pt = central_character_point(&engine, &head, &gens).unwrap();
            assert_eq!(pt[0], field.one());
            assert_eq!(pt[1], field.zero());
            assert_eq!(pt[2], field.zero());
            assert_eq!(pt[3], field.zero());
            let half = field.inv(&field.from_int(2)).unwrap();
            let lh = field.add(&field.from_int(lam), &half);
            assert_eq!(pt[4], field.mul(&lh, &lh));
        }
    }
}
