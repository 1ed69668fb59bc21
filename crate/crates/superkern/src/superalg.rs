//! Restricted Lie superalgebras given by structure constants over `F_p`,
//! their validation, and the builtin desk-scale algebras `gl(m|n)`,
//! `sl(m|n)`, `osp(1|2n)`.
//!
//! Basis indexing convention: the combined basis lists the even elements
//! first (`0..s`) and the odd ones after (`s..s+t`). Structure constants
//! live in the prime field; only module/weight scalars live in extensions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Field, Matrix};

/// Sparse vector over `F_p`: sorted `(basis index, coefficient)` pairs with
/// nonzero coefficients.
pub type SparseVec = Vec<(usize, u32)>;

fn sparse_canon(mut v: Vec<(usize, u32)>, p: u32) -> SparseVec {
    let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
    for (i, c) in v.drain(..) {
        *acc.entry(i).or_insert(0) += c as u64 % p as u64;
    }
    acc.into_iter()
        .filter_map(|(i, c)| {
            let c = (c % p as u64) as u32;
            (c != 0).then_some((i, c))
        })
        .collect()
}

/// Indices of the five triangular blocks, partitioning the combined basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangular {
    pub negative_even: Vec<usize>,
    pub negative_odd: Vec<usize>,
    pub toral: Vec<usize>,
    pub positive_odd: Vec<usize>,
    pub positive_even: Vec<usize>,
}

/// A faithful matrix realization in `(m|n)`-block form; kept by builtins so
/// p-th powers of arbitrary even elements are canonical.
#[derive(Debug, Clone)]
pub struct Realization {
    pub block_even: usize,
    pub block_odd: usize,
    /// One matrix per basis element, even then odd, over `F_p`.
    pub mats: Vec<Matrix>,
}

/// Structure constants, parities, p-mapping and optional triangular data of a
/// finite-dimensional restricted Lie superalgebra over `F_p`.
#[derive(Debug, Clone)]
pub struct SuperAlgebraSpec {
    pub p: u32,
    pub even_names: Vec<String>,
    pub odd_names: Vec<String>,
    /// Full `n x n` table, `brackets[i * n + j] = [x_i, x_j]`.
    pub(crate) brackets: Vec<SparseVec>,
    /// `p_map[i]` = coefficients of `x_i^{[p]}` for each even basis index.
    pub(crate) p_map: Vec<SparseVec>,
    pub triangular: Option<Triangular>,
    pub realization: Option<Realization>,
    /// Supersymmetric invariant form `(x_i, x_j)` when a realization is
    /// available (the supertrace form).
    pub form: Option<Vec<Vec<u32>>>,
    /// Integer root weights from the Chevalley-form realization, one per
    /// non-toral basis element. Residue weights mod p are ambiguous at
    /// p = 3 (e.g. the osp(1|2) roots 2a and -a coincide mod 3), so builtins
    /// carry the integral data.
    pub root_weights_z: Option<Vec<Option<Vec<i64>>>>,
}

impl SuperAlgebraSpec {
    /// Assemble a spec from raw parts. Shape checks only; call
    /// [`SuperAlgebraSpec::validate`] for the algebraic invariants.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        p: u32,
        even_names: Vec<String>,
        odd_names: Vec<String>,
        brackets: Vec<SparseVec>,
        p_map: Vec<SparseVec>,
        triangular: Option<Triangular>,
        realization: Option<Realization>,
        form: Option<Vec<Vec<u32>>>,
    ) -> Result<SuperAlgebraSpec> {
        // rejects p = 2 and composites
        let _ = Field::prime(p)?;
        let n = even_names.len() + odd_names.len();
        if brackets.len() != n * n {
            return Err(Error::InvalidAlgebra(format!(
                "bracket table has {} entries, expected {}",
                brackets.len(),
                n * n
            )));
        }
        if p_map.len() != even_names.len() {
            return Err(Error::InvalidAlgebra(
                "p_map must list one image per even basis element".into(),
            ));
        }
        let brackets = brackets
            .into_iter()
            .map(|v| sparse_canon(v, p))
            .collect::<Vec<_>>();
        let p_map = p_map.into_iter().map(|v| sparse_canon(v, p)).collect::<Vec<_>>();
        for v in brackets.iter().chain(p_map.iter()) {
            if v.iter().any(|&(i, _)| i >= n) {
                return Err(Error::InvalidAlgebra("basis index out of range".into()));
            }
        }
        if let Some(t) = &triangular {
            let mut seen = vec![false; n];
            for idx in t
                .negative_even
                .iter()
                .chain(&t.negative_odd)
                .chain(&t.toral)
                .chain(&t.positive_odd)
                .chain(&t.positive_even)
            {
                if *idx >= n || seen[*idx] {
                    return Err(Error::InvalidAlgebra(
                        "triangular data must partition the basis".into(),
                    ));
                }
                seen[*idx] = true;
            }
            if seen.iter().any(|&s| !s) {
                return Err(Error::InvalidAlgebra(
                    "triangular data must partition the basis".into(),
                ));
            }
        }
        Ok(SuperAlgebraSpec {
            p,
            even_names,
            odd_names,
            brackets,
            p_map,
            triangular,
            realization,
            form,
            root_weights_z: None,
        })
    }

    pub fn dim_even(&self) -> usize {
        self.even_names.len()
    }

    pub fn dim_odd(&self) -> usize {
        self.odd_names.len()
    }

    pub fn dim(&self) -> usize {
        self.dim_even() + self.dim_odd()
    }

    pub fn parity(&self, i: usize) -> u8 {
        u8::from(i >= self.dim_even())
    }

    pub fn name(&self, i: usize) -> &str {
        if i < self.dim_even() {
            &self.even_names[i]
        } else {
            &self.odd_names[i - self.dim_even()]
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        (0..self.dim()).find(|&i| self.name(i) == name)
    }

    pub fn bracket(&self, i: usize, j: usize) -> &SparseVec {
        &self.brackets[i * self.dim() + j]
    }

    pub fn p_map(&self, even_i: usize) -> &SparseVec {
        &self.p_map[even_i]
    }

    pub fn field(&self) -> Field {
        Field::prime(self.p).expect("validated at construction")
    }

    /// `ad x_i` as a dim x dim matrix over `F_p` (columns indexed by basis).
    pub fn ad_matrix(&self, i: usize, field: &Field) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n, field);
        for j in 0..n {
            for &(k, c) in self.bracket(i, j) {
                *m.at_mut(k, j) = field.from_int(c as i64);
            }
        }
        m
    }

    /// Bracket of two sparse combinations (bilinear extension of the table).
    pub fn bracket_sparse(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = Vec::new();
        for &(i, ca) in a {
            for &(j, cb) in b {
                let cc = (ca as u64 * cb as u64 % self.p as u64) as u32;
                for &(k, c) in self.bracket(i, j) {
                    out.push((k, (cc as u64 * c as u64 % self.p as u64) as u32));
                }
            }
        }
        sparse_canon(out, self.p)
    }

    pub fn validate(&self) -> ValidationReport {
        let field = self.field();
        let n = self.dim();
        let mut checks = Vec::new();
        let pm1 = |c: u32| (self.p - c % self.p) % self.p;

        // super anti-symmetry
        let mut witness = None;
        'anti: for i in 0..n {
            for j in 0..n {
                let sign_flip = self.parity(i) == 1 && self.parity(j) == 1;
                let lhs = self.bracket(i, j).clone();
                let rhs: SparseVec = self
                    .bracket(j, i)
                    .iter()
                    .map(|&(k, c)| (k, if sign_flip { c } else { pm1(c) }))
                    .collect();
                if sparse_canon(lhs, self.p) != sparse_canon(rhs, self.p) {
                    witness = Some(format!("pair ({}, {})", self.name(i), self.name(j)));
                    break 'anti;
                }
            }
        }
        checks.push(Check::new("super anti-symmetry", witness));

        // super Jacobi identity on all triples
        let mut witness = None;
        'jac: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (px, py, pz) = (
                        self.parity(x) as u32,
                        self.parity(y) as u32,
                        self.parity(z) as u32,
                    );
                    let sgn = |e: u32| if e % 2 == 0 { 1u32 } else { self.p - 1 };
                    let mut total = Vec::new();
                    let term = |a: usize, b: usize, c: usize| {
                        self.bracket_sparse(&vec![(a, 1)], self.bracket(b, c))
                    };
                    for (k, v) in term(x, y, z) {
                        total.push((k, (v as u64 * sgn(px * pz) as u64 % self.p as u64) as u32));
                    }
                    for (k, v) in term(y, z, x) {
                        total.push((k, (v as u64 * sgn(py * px) as u64 % self.p as u64) as u32));
                    }
                    for (k, v) in term(z, x, y) {
                        total.push((k, (v as u64 * sgn(pz * py) as u64 % self.p as u64) as u32));
                    }
                    if !sparse_canon(total, self.p).is_empty() {
                        witness = Some(format!(
                            "triple ({}, {}, {})",
                            self.name(x),
                            self.name(y),
                            self.name(z)
                        ));
                        break 'jac;
                    }
                }
            }
        }
        checks.push(Check::new("super Jacobi identity", witness));

        // restrictedness: ad(x^{[p]}) = (ad x)^p for even basis x
        let mut witness = None;
        for i in 0..self.dim_even() {
            let ad_x = self.ad_matrix(i, &field);
            let lhs = ad_x.pow(self.p as u64, &field);
            let mut rhs = Matrix::zeros(n, n, &field);
            for &(k, c) in self.p_map(i) {
                let adk = self
                    .ad_matrix(k, &field)
                    .scale(&field.from_int(c as i64), &field);
                rhs = rhs.add(&adk, &field);
            }
            if lhs != rhs {
                witness = Some(format!("even element {}", self.name(i)));
                break;
            }
        }
        checks.push(Check::new("restrictedness ad(x^[p]) = (ad x)^p", witness));

        if let Some(t) = &self.triangular {
            // parity consistency of the blocks
            let mut witness = None;
            for &i in t.negative_even.iter().chain(&t.toral).chain(&t.positive_even) {
                if self.parity(i) != 0 {
                    witness = Some(format!("odd element {} in an even block", self.name(i)));
                }
            }
            for &i in t.negative_odd.iter().chain(&t.positive_odd) {
                if self.parity(i) != 1 {
                    witness = Some(format!("even element {} in an odd block", self.name(i)));
                }
            }
            checks.push(Check::new("triangular block parities", witness));

            // grading: [n-, n-] in n-, [n+, n+] in n+, [h, n+-] in n+-,
            // torus abelian
            let level = {
                let mut lv = vec![0i32; n];
                for &i in t.negative_even.iter().chain(&t.negative_odd) {
                    lv[i] = -1;
                }
                for &i in t.positive_even.iter().chain(&t.positive_odd) {
                    lv[i] = 1;
                }
                lv
            };
            let mut witness = None;
            'grade: for i in 0..n {
                for j in 0..n {
                    let (li, lj) = (level[i], level[j]);
                    let allowed: fn(i32) -> bool = match (li, lj) {
                        (0, 0) => |_| false, // toral abelian: bracket must vanish
                        (-1, -1) => |l| l == -1,
                        (1, 1) => |l| l == 1,
                        (0, -1) | (-1, 0) => |l| l == -1,
                        (0, 1) | (1, 0) => |l| l == 1,
                        _ => continue,
                    };
                    for &(k, _) in self.bracket(i, j) {
                        if !allowed(level[k]) {
                            witness = Some(format!(
                                "[{}, {}] leaves its block",
                                self.name(i),
                                self.name(j)
                            ));
                            break 'grade;
                        }
                    }
                }
            }
            checks.push(Check::new("triangular grading", witness));

            // toral closed under p_map
            let mut witness = None;
            for &i in &t.toral {
                for &(k, _) in self.p_map(i) {
                    if !t.toral.contains(&k) {
                        witness = Some(format!("{}^[p] leaves the torus", self.name(i)));
                    }
                }
            }
            checks.push(Check::new("torus closed under p-map", witness));

            // even odd-dimension, needed for evenness of the anticenter
            let witness =
                (self.dim_odd() % 2 != 0).then(|| format!("dim g_1 = {} is odd", self.dim_odd()));
            checks.push(Check::new("odd dimension is even", witness));

            // root data. Residue weights mod p verify that each non-toral
            // basis element is a weight vector and that brackets respect the
            // torus grading; one-dimensionality and coroot pairing need the
            // integral weights (residues collide, e.g. 2a = -a mod 3), so
            // those two run only when the builtin's Chevalley data is there.
            match self.root_weights() {
                Ok(weights) => {
                    let mut witness = None;
                    'sum: for i in 0..n {
                        for j in 0..n {
                            let (Some(wi), Some(wj)) = (&weights[i], &weights[j]) else {
                                continue;
                            };
                            let sum: Vec<u32> =
                                wi.iter().zip(wj).map(|(a, b)| (a + b) % self.p).collect();
                            for &(k, _) in self.bracket(i, j) {
                                let ok = match &weights[k] {
                                    Some(wk) => *wk == sum,
                                    None => sum.iter().all(|&c| c == 0),
                                };
                                if !ok {
                                    witness = Some(format!(
                                        "[{}, {}] not in the root space of the sum",
                                        self.name(i),
                                        self.name(j)
                                    ));
                                    break 'sum;
                                }
                            }
                        }
                    }
                    checks.push(Check::new("[g_a, g_b] in g_{a+b} (mod p)", witness));
                }
                Err(e) => {
                    checks.push(Check::new("root weights well-defined", Some(e.to_string())));
                }
            }

            if let Some(wz) = &self.root_weights_z {
                let mut seen: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
                let mut witness = None;
                for (i, w) in wz.iter().enumerate() {
                    let Some(w) = w else { continue };
                    if let Some(&j) = seen.get(w) {
                        witness =
                            Some(format!("{} and {} share a root", self.name(j), self.name(i)));
                    }
                    seen.insert(w.clone(), i);
                }
                checks.push(Check::new("root spaces one-dimensional", witness));

                if self.form.is_some() {
                    let witness = match self.check_coroots() {
                        Ok(()) => None,
                        Err(e) => Some(e.to_string()),
                    };
                    checks.push(Check::new("coroot pairing (form)", witness));
                }
            }
        }

        ValidationReport { checks }
    }

    /// Weight of each basis element on the toral basis; `None` for toral
    /// elements. Errors when some element is not a weight vector.
    pub fn root_weights(&self) -> Result<Vec<Option<Vec<u32>>>> {
        let t = self.triangular.as_ref().ok_or(Error::MissingRootData)?;
        let n = self.dim();
        let mut out = vec![None; n];
        for i in 0..n {
            if t.toral.contains(&i) {
                continue;
            }
            let mut w = Vec::with_capacity(t.toral.len());
            for &h in &t.toral {
                let br = self.bracket(h, i);
                let c = match br.len() {
                    0 => 0,
                    1 if br[0].0 == i => br[0].1,
                    _ => {
                        return Err(Error::InvalidAlgebra(format!(
                            "{} is not a weight vector for {}",
                            self.name(i),
                            self.name(h)
                        )))
                    }
                };
                w.push(c);
            }
            out[i] = Some(w);
        }
        Ok(out)
    }

    fn check_coroots(&self) -> Result<()> {
        let form = self.form.as_ref().ok_or(Error::MissingRootData)?;
        let t = self.triangular.as_ref().ok_or(Error::MissingRootData)?;
        let wz = self.root_weights_z.as_ref().ok_or(Error::MissingRootData)?;
        let field = self.field();
        let n = self.dim();
        let r = t.toral.len();
        let mut gram = Matrix::zeros(r, r, &field);
        for (a, &ha) in t.toral.iter().enumerate() {
            for (b, &hb) in t.toral.iter().enumerate() {
                *gram.at_mut(a, b) = field.from_int(form[ha][hb] as i64);
            }
        }
        for i in 0..n {
            let Some(wi) = &wz[i] else { continue };
            let neg: Vec<i64> = wi.iter().map(|&c| -c).collect();
            let j = (0..n).find(|&j| wz[j].as_deref() == Some(neg.as_slice()));
            let Some(j) = j else { continue };
            let pairing = field.from_int(form[i][j] as i64);
            if field.is_zero(&pairing) {
                return Err(Error::InvalidAlgebra(format!(
                    "(e_a, e_-a) = 0 for {}",
                    self.name(i)
                )));
            }
            let rhs: Vec<_> = wi.iter().map(|&c| field.from_int(c)).collect();
            let coords = gram
                .solve(&rhs, &field)
                .ok_or_else(|| Error::InvalidAlgebra("form degenerate on the torus".into()))?;
            let mut expect: Vec<(usize, u32)> = Vec::new();
            for (b, &hb) in t.toral.iter().enumerate() {
                let c = field.mul(&pairing, &coords[b]);
                if !field.is_zero(&c) {
                    expect.push((hb, c.c[0]));
                }
            }
            let got = self.bracket(i, j).clone();
            if sparse_canon(expect, self.p) != got {
                return Err(Error::InvalidAlgebra(format!(
                    "[{}, {}] differs from (e_a, e_-a) h_a",
                    self.name(i),
                    self.name(j)
                )));
            }
        }
        Ok(())
    }
}

/// One validation check; `witness` is `None` on pass.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

impl Check {
    fn new(name: &str, witness: Option<String>) -> Check {
        Check {
            name: name.to_string(),
            passed: witness.is_none(),
            witness,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// Build a spec from a faithful `(m|n)`-block matrix realization: brackets
/// from supercommutators, p-mapping from matrix p-th powers.
pub fn from_matrix_realization(
    even_mats: Vec<Matrix>,
    odd_mats: Vec<Matrix>,
    block_even: usize,
    block_odd: usize,
    p: u32,
    even_names: Vec<String>,
    odd_names: Vec<String>,
) -> Result<SuperAlgebraSpec> {
    let field = Field::prime(p)?;
    let size = block_even + block_odd;
    let s = even_mats.len();
    let t = odd_mats.len();
    let n = s + t;
    let all: Vec<&Matrix> = even_mats.iter().chain(odd_mats.iter()).collect();
    for m in &all {
        if m.rows != size || m.cols != size {
            return Err(Error::ShapeMismatch(format!(
                "expected {size} x {size} matrices"
            )));
        }
    }
    for (idx, m) in all.iter().enumerate() {
        let odd = idx >= s;
        for i in 0..size {
            for j in 0..size {
                let cross = (i < block_even) != (j < block_even);
                if cross != odd && !field.is_zero(m.at(i, j)) {
                    return Err(Error::InvalidAlgebra(format!(
                        "matrix {idx} does not respect the (m|n) block grading"
                    )));
                }
            }
        }
    }
    let mut cols = Matrix::zeros(size * size, n, &field);
    for (j, m) in all.iter().enumerate() {
        for (i, v) in m.data.iter().enumerate() {
            *cols.at_mut(i, j) = *v;
        }
    }
    if cols.rank(&field) != n {
        return Err(Error::InvalidAlgebra(
            "realization matrices are linearly dependent".into(),
        ));
    }
    let express = |m: &Matrix, even_only: bool| -> Option<SparseVec> {
        let cols_used = if even_only { s } else { n };
        let mut a = Matrix::zeros(size * size, cols_used, &field);
        for (j, src) in all.iter().take(cols_used).enumerate() {
            for (i, v) in src.data.iter().enumerate() {
                *a.at_mut(i, j) = *v;
            }
        }
        let x = a.solve(&m.data, &field)?;
        Some(
            x.into_iter()
                .enumerate()
                .filter(|(_, c)| !field.is_zero(c))
                .map(|(i, c)| (i, c.c[0]))
                .collect(),
        )
    };
    let mut brackets = vec![Vec::new(); n * n];
    for i in 0..n {
        for j in 0..n {
            let sign_flip = i >= s && j >= s;
            let ab = all[i].mul(all[j], &field);
            let ba = all[j].mul(all[i], &field);
            let sc = if sign_flip {
                ab.add(&ba, &field)
            } else {
                ab.sub(&ba, &field)
            };
            brackets[i * n + j] = express(&sc, false).ok_or(Error::ClosureFailure { i, j })?;
        }
    }
    let mut p_map = Vec::with_capacity(s);
    for (i, m) in even_mats.iter().enumerate() {
        let mp = m.pow(p as u64, &field);
        let v = express(&mp, true).ok_or_else(|| {
            Error::InvalidAlgebra(format!(
                "p-th power of even element {i} leaves the even span"
            ))
        })?;
        p_map.push(v);
    }
    let mut form = vec![vec![0u32; n]; n];
    for i in 0..n {
        for j in 0..n {
            let prod = all[i].mul(all[j], &field);
            let mut tr = field.zero();
            for a in 0..size {
                let d = prod.at(a, a);
                tr = if a < block_even {
                    field.add(&tr, d)
                } else {
                    field.sub(&tr, d)
                };
            }
            form[i][j] = tr.c[0];
        }
    }
    SuperAlgebraSpec::from_parts(
        p,
        even_names,
        odd_names,
        brackets,
        p_map,
        None,
        Some(Realization {
            block_even,
            block_odd,
            mats: all.into_iter().cloned().collect(),
        }),
        Some(form),
    )
}

/// Small integer matrices for the Chevalley-form side of a builtin: exact
/// root weights are read off over Z, where they cannot collide mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
struct IMat {
    n: usize,
    d: Vec<i64>,
}

impl IMat {
    fn zeros(n: usize) -> IMat {
        IMat { n, d: vec![0; n * n] }
    }

    fn unit(n: usize, i: usize, j: usize) -> IMat {
        let mut m = IMat::zeros(n);
        m.d[i * n + j] = 1;
        m
    }

    fn add(&self, o: &IMat) -> IMat {
        IMat {
            n: self.n,
            d: self.d.iter().zip(&o.d).map(|(a, b)| a + b).collect(),
        }
    }

    fn sub(&self, o: &IMat) -> IMat {
        IMat {
            n: self.n,
            d: self.d.iter().zip(&o.d).map(|(a, b)| a - b).collect(),
        }
    }

    fn mul(&self, o: &IMat) -> IMat {
        let n = self.n;
        let mut out = IMat::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = self.d[i * n + l];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out.d[i * n + j] += a * o.d[l * n + j];
                }
            }
        }
        out
    }

    fn scale(&self, s: i64) -> IMat {
        IMat {
            n: self.n,
            d: self.d.iter().map(|a| a * s).collect(),
        }
    }

    fn to_fp(&self, field: &Field) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n, field);
        for i in 0..self.n {
            for j in 0..self.n {
                *m.at_mut(i, j) = field.from_int(self.d[i * self.n + j]);
            }
        }
        m
    }
}

/// Finish a builtin: convert the integer realization to `F_p`, build the
/// spec, compute integral root weights, classify positives by lex order.
fn finish_builtin(
    even_i: Vec<IMat>,
    odd_i: Vec<IMat>,
    block_even: usize,
    block_odd: usize,
    p: u32,
    even_names: Vec<String>,
    odd_names: Vec<String>,
    toral: Vec<usize>,
) -> Result<SuperAlgebraSpec> {
    let field = Field::prime(p)?;
    let even_mats: Vec<Matrix> = even_i.iter().map(|m| m.to_fp(&field)).collect();
    let odd_mats: Vec<Matrix> = odd_i.iter().map(|m| m.to_fp(&field)).collect();
    let mut spec = from_matrix_realization(
        even_mats, odd_mats, block_even, block_odd, p, even_names, odd_names,
    )?;
    let all: Vec<&IMat> = even_i.iter().chain(odd_i.iter()).collect();
    let n = all.len();
    let mut weights_z: Vec<Option<Vec<i64>>> = vec![None; n];
    for i in 0..n {
        if toral.contains(&i) {
            continue;
        }
        let x = all[i];
        let (r, c) = (0..x.n * x.n)
            .find(|&k| x.d[k] != 0)
            .map(|k| (k / x.n, k % x.n))
            .expect("basis matrix nonzero");
        let mut w = Vec::with_capacity(toral.len());
        for &hidx in &toral {
            let h = all[hidx];
            let br = h.mul(x).sub(&x.mul(h));
            let denom = x.d[r * x.n + c];
            let num = br.d[r * br.n + c];
            if num % denom != 0 || br != x.scale(num / denom) {
                return Err(Error::InvalidAlgebra(format!(
                    "basis element {i} is not an integral weight vector"
                )));
            }
            w.push(num / denom);
        }
        weights_z[i] = Some(w);
    }
    let mut tri = Triangular {
        negative_even: vec![],
        negative_odd: vec![],
        toral,
        positive_odd: vec![],
        positive_even: vec![],
    };
    for (i, w) in weights_z.iter().enumerate() {
        let Some(w) = w else { continue };
        let lead = w.iter().find(|&&c| c != 0);
        let positive = match lead {
            Some(&c) => c > 0,
            None => {
                return Err(Error::InvalidAlgebra(format!(
                    "zero weight outside the torus for {}",
                    spec.name(i)
                )))
            }
        };
        match (positive, spec.parity(i)) {
            (true, 0) => tri.positive_even.push(i),
            (true, 1) => tri.positive_odd.push(i),
            (false, 0) => tri.negative_even.push(i),
            (false, 1) => tri.negative_odd.push(i),
            _ => unreachable!(),
        }
    }
    spec.triangular = Some(tri);
    spec.root_weights_z = Some(weights_z);
    Ok(spec)
}

/// Builtin algebras of the supported table, with their characteristic
/// restrictions: `gl(m|n)` for p > 2, `sl(m|n)` for p > 2 and p not dividing
/// m - n, `osp(1|2n)` for p > 2.
pub fn builtin(name: &str, params: (usize, usize), p: u32) -> Result<SuperAlgebraSpec> {
    match name {
        "gl" => builtin_gl(params.0, params.1, p),
        "sl" => builtin_sl(params.0, params.1, p),
        "osp" => {
            if params.0 != 1 || params.1 == 0 || params.1 % 2 != 0 {
                return Err(Error::UnsupportedBuiltin(format!(
                    "osp({}|{}): only osp(1|2n) is supported",
                    params.0, params.1
                )));
            }
            builtin_osp1_2n(params.1 / 2, p)
        }
        other => Err(Error::UnsupportedBuiltin(format!(
            "unknown algebra family {other:?} (supported: gl, sl, osp)"
        ))),
    }
}

fn builtin_gl(m: usize, n: usize, p: u32) -> Result<SuperAlgebraSpec> {
    if m + n == 0 {
        return Err(Error::UnsupportedBuiltin("gl(0|0) is empty".into()));
    }
    let size = m + n;
    let mut even_mats = Vec::new();
    let mut even_names = Vec::new();
    let mut odd_mats = Vec::new();
    let mut odd_names = Vec::new();
    let mut toral = Vec::new();
    for i in 0..size {
        for j in 0..size {
            let cross = (i < m) != (j < m);
            let mat = IMat::unit(size, i, j);
            let nm = format!("E{}{}", i + 1, j + 1);
            if cross {
                odd_mats.push(mat);
                odd_names.push(nm);
            } else {
                if i == j {
                    toral.push(even_mats.len());
                }
                even_mats.push(mat);
                even_names.push(nm);
            }
        }
    }
    finish_builtin(even_mats, odd_mats, m, n, p, even_names, odd_names, toral)
}

fn builtin_sl(m: usize, n: usize, p: u32) -> Result<SuperAlgebraSpec> {
    if m + n < 2 {
        return Err(Error::UnsupportedBuiltin("sl(m|n) needs m + n >= 2".into()));
    }
    let diff = m.abs_diff(n) as u32;
    if diff % p == 0 {
        return Err(Error::UnsupportedBuiltin(format!(
            "sl({m}|{n}) at p = {p}: the table requires p > 2 and p not dividing m - n"
        )));
    }
    let size = m + n;
    let mut even_mats = Vec::new();
    let mut even_names = Vec::new();
    let mut odd_mats = Vec::new();
    let mut odd_names = Vec::new();
    for i in 0..size {
        for j in 0..size {
            if i == j {
                continue;
            }
            let cross = (i < m) != (j < m);
            let mat = IMat::unit(size, i, j);
            let nm = format!("E{}{}", i + 1, j + 1);
            if cross {
                odd_mats.push(mat);
                odd_names.push(nm);
            } else {
                even_mats.push(mat);
                even_names.push(nm);
            }
        }
    }
    // supertraceless Cartan: H_i = E_ii - E_{i+1,i+1}, except across the
    // m|n boundary where the supertrace flips sign: H_m = E_mm + E_{m+1,m+1}
    let toral_start = even_mats.len();
    for i in 0..size - 1 {
        let a = IMat::unit(size, i, i);
        let b = IMat::unit(size, i + 1, i + 1);
        let h = if i + 1 == m { a.add(&b) } else { a.sub(&b) };
        even_mats.push(h);
        even_names.push(format!("H{}", i + 1));
    }
    let toral: Vec<usize> = (toral_start..even_mats.len()).collect();
    finish_builtin(even_mats, odd_mats, m, n, p, even_names, odd_names, toral)
}

/// `osp(1|2n)`. For n = 1 this is the exact 3x3 basis e, h, f, E, F of the
/// `(1|2)`-block realization; for larger n the standard symplectic basis.
fn builtin_osp1_2n(n: usize, p: u32) -> Result<SuperAlgebraSpec> {
    let size = 1 + 2 * n;
    if n == 1 {
        let e = IMat::unit(3, 1, 2);
        let h = IMat::unit(3, 1, 1).sub(&IMat::unit(3, 2, 2));
        let f = IMat::unit(3, 2, 1);
        let cap_e = IMat::unit(3, 0, 2).add(&IMat::unit(3, 1, 0));
        let cap_f = IMat::unit(3, 0, 1).sub(&IMat::unit(3, 2, 0));
        return finish_builtin(
            vec![e, h, f],
            vec![cap_e, cap_f],
            1,
            2,
            p,
            vec!["e".into(), "h".into(), "f".into()],
            vec!["E".into(), "F".into()],
            vec![1],
        );
    }
    // odd coordinates are 1..=2n, split as rows 1..=n and columns n+1..=2n
    let idx_r = |i: usize| i;
    let idx_c = |i: usize| n + i;
    let mut even_mats = Vec::new();
    let mut even_names = Vec::new();
    for i in 1..=n {
        even_mats.push(IMat::unit(size, idx_r(i), idx_r(i)).sub(&IMat::unit(size, idx_c(i), idx_c(i))));
        even_names.push(format!("h{i}"));
    }
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            even_mats
                .push(IMat::unit(size, idx_r(i), idx_r(j)).sub(&IMat::unit(size, idx_c(j), idx_c(i))));
            even_names.push(format!("a{i}{j}"));
        }
    }
    for i in 1..=n {
        for j in i..=n {
            even_mats
                .push(IMat::unit(size, idx_r(i), idx_c(j)).add(&IMat::unit(size, idx_r(j), idx_c(i))));
            even_names.push(format!("b{i}{j}"));
        }
    }
    for i in 1..=n {
        for j in i..=n {
            even_mats
                .push(IMat::unit(size, idx_c(i), idx_r(j)).add(&IMat::unit(size, idx_c(j), idx_r(i))));
            even_names.push(format!("c{i}{j}"));
        }
    }
    let mut odd_mats = Vec::new();
    let mut odd_names = Vec::new();
    for i in 1..=n {
        odd_mats.push(IMat::unit(size, 0, idx_c(i)).add(&IMat::unit(size, idx_r(i), 0)));
        odd_names.push(format!("Ep{i}"));
    }
    for i in 1..=n {
        odd_mats.push(IMat::unit(size, 0, idx_r(i)).sub(&IMat::unit(size, idx_c(i), 0)));
        odd_names.push(format!("Em{i}"));
    }
    finish_builtin(
        even_mats,
        odd_mats,
        1,
        2 * n,
        p,
        even_names,
        odd_names,
        (0..n).collect(),
    )
}

/// Root datum assembled from the triangular data: positive roots as weight
/// vectors, root vectors by basis index, and the coroot-like elements
/// `h_a` with `[e_a, e_{-a}] = (e_a, e_{-a}) h_a` when the form is there.
#[derive(Debug, Clone)]
pub struct RootDatum {
    /// (basis index of the root vector, weight on the toral basis mod p)
    pub positive_even: Vec<(usize, Vec<u32>)>,
    pub positive_odd: Vec<(usize, Vec<u32>)>,
    /// (root index, opposite index, pairing (e_a, e_-a), h_a coefficients
    /// on the toral basis); present when the form and integral weights are
    pub coroots: Vec<(usize, usize, u32, SparseVec)>,
}

pub fn root_datum(spec: &SuperAlgebraSpec) -> Result<RootDatum> {
    let t = spec.triangular.as_ref().ok_or(Error::MissingRootData)?;
    let weights = spec.root_weights()?;
    let grab = |idxs: &[usize]| {
        idxs.iter()
            .map(|&i| (i, weights[i].clone().expect("non-toral")))
            .collect::<Vec<_>>()
    };
    let mut coroots = Vec::new();
    if let (Some(form), Some(wz)) = (&spec.form, &spec.root_weights_z) {
        let field = spec.field();
        let r = t.toral.len();
        let mut gram = Matrix::zeros(r, r, &field);
        for (a, &ha) in t.toral.iter().enumerate() {
            for (b, &hb) in t.toral.iter().enumerate() {
                *gram.at_mut(a, b) = field.from_int(form[ha][hb] as i64);
            }
        }
        for i in 0..spec.dim() {
            let Some(wi) = &wz[i] else { continue };
            let neg: Vec<i64> = wi.iter().map(|&c| -c).collect();
            let Some(j) = (0..spec.dim()).find(|&j| wz[j].as_deref() == Some(neg.as_slice()))
            else {
                continue;
            };
            let pairing = form[i][j];
            let rhs: Vec<_> = wi.iter().map(|&c| field.from_int(c)).collect();
            if let Some(coords) = gram.solve(&rhs, &field) {
                let h_alpha: SparseVec = t
                    .toral
                    .iter()
                    .zip(&coords)
                    .filter(|(_, c)| !field.is_zero(c))
                    .map(|(&hb, c)| (hb, c.c[0]))
                    .collect();
                coroots.push((i, j, pairing, h_alpha));
            }
        }
    }
    Ok(RootDatum {
        positive_even: grab(&t.positive_even),
        positive_odd: grab(&t.positive_odd),
        coroots,
    })
}

/// The half-sum `rho = (sum of positive even roots - sum of positive odd
/// roots) / 2` as a functional on the toral basis.
pub fn rho_weight(spec: &SuperAlgebraSpec) -> Result<Vec<crate::scalar::FieldElement>> {
    let t = spec.triangular.as_ref().ok_or(Error::MissingRootData)?;
    let field = spec.field();
    let weights = spec.root_weights()?;
    let r = t.toral.len();
    let mut acc = vec![field.zero(); r];
    for &i in &t.positive_even {
        let w = weights[i].as_ref().expect("positive root has a weight");
        for (a, &c) in w.iter().enumerate() {
            acc[a] = field.add(&acc[a], &field.from_int(c as i64));
        }
    }
    for &i in &t.positive_odd {
        let w = weights[i].as_ref().expect("positive root has a weight");
        for (a, &c) in w.iter().enumerate() {
            acc[a] = field.sub(&acc[a], &field.from_int(c as i64));
        }
    }
    let half = field.inv(&field.from_int(2)).expect("p odd");
    Ok(acc.into_iter().map(|x| field.mul(&x, &half)).collect())
}

// ---------------------------------------------------------------------------
// JSON algebra-spec format
// ---------------------------------------------------------------------------

/// On-disk JSON shape for user-supplied algebras. Coefficients are integers
/// already reduced mod p; bracket keys are `"i,j"` with combined 0-based
/// basis indices (even basis first) and values list `[coeff, index]` pairs.
/// Realizations are not part of the format, so user specs must provide
/// `p_map` explicitly.
#[derive(Debug, Serialize, Deserialize)]
pub struct SpecJson {
    pub p: u32,
    pub even_basis: Vec<String>,
    pub odd_basis: Vec<String>,
    pub brackets: BTreeMap<String, Vec<(u32, usize)>>,
    pub p_map: BTreeMap<String, Vec<(u32, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangular: Option<Triangular>,
}

impl SpecJson {
    pub fn to_spec(&self) -> Result<SuperAlgebraSpec> {
        let s = self.even_basis.len();
        let n = s + self.odd_basis.len();
        let mut brackets = vec![Vec::new(); n * n];
        let mut filled = vec![false; n * n];
        for (key, val) in &self.brackets {
            let (i, j) = parse_pair(key)?;
            if i >= n || j >= n {
                return Err(Error::InvalidAlgebra(format!(
                    "bracket key {key} out of range"
                )));
            }
            brackets[i * n + j] = val.iter().map(|&(c, k)| (k, c)).collect();
            filled[i * n + j] = true;
        }
        // fill unspecified mirror entries by super anti-symmetry
        for i in 0..n {
            for j in 0..n {
                if filled[i * n + j] || !filled[j * n + i] {
                    continue;
                }
                let flip = !(i >= s && j >= s);
                brackets[i * n + j] = brackets[j * n + i]
                    .iter()
                    .map(|&(k, c)| (k, if flip { (self.p - c % self.p) % self.p } else { c }))
                    .collect();
            }
        }
        let mut p_map = vec![Vec::new(); s];
        for (key, val) in &self.p_map {
            let i: usize = key
                .parse()
                .map_err(|_| Error::InvalidAlgebra(format!("bad p_map key {key}")))?;
            if i >= s {
                return Err(Error::InvalidAlgebra(format!(
                    "p_map key {key} is not an even basis index"
                )));
            }
            p_map[i] = val.iter().map(|&(c, k)| (k, c)).collect();
        }
        SuperAlgebraSpec::from_parts(
            self.p,
            self.even_basis.clone(),
            self.odd_basis.clone(),
            brackets,
            p_map,
            self.triangular.clone(),
            None,
            None,
        )
    }

    pub fn from_spec(spec: &SuperAlgebraSpec) -> SpecJson {
        let n = spec.dim();
        let mut brackets = BTreeMap::new();
        for i in 0..n {
            for j in i..n {
                let br = spec.bracket(i, j);
                if !br.is_empty() {
                    brackets.insert(format!("{i},{j}"), br.iter().map(|&(k, c)| (c, k)).collect());
                }
            }
        }
        let mut p_map = BTreeMap::new();
        for i in 0..spec.dim_even() {
            let v = spec.p_map(i);
            if !v.is_empty() {
                p_map.insert(i.to_string(), v.iter().map(|&(k, c)| (c, k)).collect());
            }
        }
        SpecJson {
            p: spec.p,
            even_basis: spec.even_names.clone(),
            odd_basis: spec.odd_names.clone(),
            brackets,
            p_map,
            triangular: spec.triangular.clone(),
        }
    }
}

fn parse_pair(key: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidAlgebra(format!("bad bracket key {key:?}, expected \"i,j\""));
    let mut it = key.split(',');
    let i = it.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let j = it.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    if it.next().is_some() {
        return Err(bad());
    }
    Ok((i, j))
}

/// Builtin algebras by the short names the CLI accepts.
pub fn builtin_by_name(name: &str, p: u32) -> Result<SuperAlgebraSpec> {
    match name {
        "osp12" => builtin("osp", (1, 2), p),
        "osp14" => builtin("osp", (1, 4), p),
        "gl11" => builtin("gl", (1, 1), p),
        "gl21" => builtin("gl", (2, 1), p),
        "sl21" => builtin("sl", (2, 1), p),
        other => Err(Error::UnsupportedBuiltin(format!(
            "unknown algebra name {other:?} (expected one of osp12, osp14, gl11, gl21, sl21, or a spec file)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(spec: &SuperAlgebraSpec, name: &str) -> usize {
        spec.index_of(name).unwrap()
    }

    #[test]
    fn osp12_matches_the_block_realization() {
        let spec = builtin("osp", (1, 2), 5).unwrap();
        assert_eq!(spec.dim_even(), 3);
        assert_eq!(spec.dim_odd(), 2);
        let (e, h, f) = (idx(&spec, "e"), idx(&spec, "h"), idx(&spec, "f"));
        let (ee, ff) = (idx(&spec, "E"), idx(&spec, "F"));
        // [E,F] = h, [E,E] = 2e, [F,F] = -2f
        assert_eq!(spec.bracket(ee, ff), &vec![(h, 1)]);
        assert_eq!(spec.bracket(ee, ee), &vec![(e, 2)]);
        assert_eq!(spec.bracket(ff, ff), &vec![(f, 5 - 2)]);
        // [h,E] = E, [e,E] = 0, [f,E] = -F
        assert_eq!(spec.bracket(h, ee), &vec![(ee, 1)]);
        assert!(spec.bracket(e, ee).is_empty());
        assert_eq!(spec.bracket(f, ee), &vec![(ff, 5 - 1)]);
        // h^[p] = h, e^[p] = 0
        assert_eq!(spec.p_map(h), &vec![(h, 1)]);
        assert!(spec.p_map(e).is_empty());
        assert!(spec.validate().passed());
    }

    #[test]
    fn gl11_odd_bracket_from_supercommutator() {
        let spec = builtin("gl", (1, 1), 3).unwrap();
        assert_eq!(spec.dim_even(), 2);
        assert_eq!(spec.dim_odd(), 2);
        let e12 = idx(&spec, "E12");
        let e21 = idx(&spec, "E21");
        let e11 = idx(&spec, "E11");
        let e22 = idx(&spec, "E22");
        // odd * odd: E12 E21 + E21 E12 = E11 + E22
        assert_eq!(spec.bracket(e12, e21), &vec![(e11, 1), (e22, 1)]);
        assert!(spec.bracket(e12, e12).is_empty());
        assert!(spec.validate().passed());
    }

    #[test]
    fn sl22_rejected_by_characteristic_restriction() {
        let err = builtin("sl", (2, 2), 3).unwrap_err();
        assert!(matches!(err, Error::UnsupportedBuiltin(_)));
    }

    #[test]
    fn builtins_validate_across_primes() {
        for p in [3u32, 5, 7] {
            for (name, params) in [
                ("osp", (1usize, 2usize)),
                ("osp", (1, 4)),
                ("gl", (1, 1)),
                ("gl", (2, 1)),
                ("sl", (2, 1)),
            ] {
                let spec = builtin(name, params, p)
                    .unwrap_or_else(|e| panic!("{name}{params:?} p={p}: {e}"));
                let report = spec.validate();
                assert!(
                    report.passed(),
                    "{name}{params:?} p={p}: {:?}",
                    report.failures()
                );
            }
        }
    }

    #[test]
    fn perturbed_bracket_fails_jacobi() {
        let mut spec = builtin("osp", (1, 2), 3).unwrap();
        let (e, h) = (idx(&spec, "e"), idx(&spec, "h"));
        let (ee, ff) = (idx(&spec, "E"), idx(&spec, "F"));
        let n = spec.dim();
        // perturb [E,F] from h to h + e (and its mirror, keeping antisymmetry)
        spec.brackets[ee * n + ff] = vec![(e, 1), (h, 1)];
        spec.brackets[ff * n + ee] = vec![(e, 1), (h, 1)];
        let report = spec.validate();
        assert!(!report.passed());
        let jac = report
            .checks
            .iter()
            .find(|c| c.name.contains("Jacobi"))
            .unwrap();
        assert!(!jac.passed);
        assert!(jac.witness.is_some());
    }

    #[test]
    fn zeroed_p_map_fails_restrictedness() {
        let mut spec = builtin("osp", (1, 2), 3).unwrap();
        let h = idx(&spec, "h");
        spec.p_map[h] = vec![];
        let report = spec.validate();
        let restr = report
            .checks
            .iter()
            .find(|c| c.name.contains("restrictedness"))
            .unwrap();
        assert!(!restr.passed);
    }

    #[test]
    fn rho_of_osp12_is_one_half() {
        let spec = builtin("osp", (1, 2), 5).unwrap();
        let field = spec.field();
        let rho = rho_weight(&spec).unwrap();
        assert_eq!(rho.len(), 1);
        assert_eq!(rho[0], field.inv(&field.from_int(2)).unwrap());
    }

    #[test]
    fn rho_of_gl11() {
        // Delta_0^+ empty, Delta_1^+ = {delta - eps}: rho = -1/2 (delta - eps)
        let spec = builtin("gl", (1, 1), 5).unwrap();
        let field = spec.field();
        let rho = rho_weight(&spec).unwrap();
        let half = field.inv(&field.from_int(2)).unwrap();
        assert_eq!(rho, vec![field.neg(&half), half]);
    }

    #[test]
    fn rho_purely_even_is_classical_half_sum() {
        // gl(2|0) = gl(2): Delta_0^+ = {eps1 - eps2}, rho = (1/2, -1/2)
        let spec = builtin("gl", (2, 0), 5).unwrap();
        let field = spec.field();
        let rho = rho_weight(&spec).unwrap();
        let half = field.inv(&field.from_int(2)).unwrap();
        assert_eq!(rho, vec![half, field.neg(&half)]);
    }

    #[test]
    fn closure_failure_names_the_pair() {
        // e and f alone do not span a subalgebra: [e, f] = h leaves the span
        let field = Field::prime(3).unwrap();
        let mut e = Matrix::zeros(2, 2, &field);
        *e.at_mut(0, 1) = field.one();
        let mut f = Matrix::zeros(2, 2, &field);
        *f.at_mut(1, 0) = field.one();
        let err = from_matrix_realization(
            vec![e, f],
            vec![],
            2,
            0,
            3,
            vec!["e".into(), "f".into()],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, Error::ClosureFailure { i: 0, j: 1 }));
    }

    #[test]
    fn root_datum_of_osp12() {
        let spec = builtin("osp", (1, 2), 5).unwrap();
        let rd = root_datum(&spec).unwrap();
        // Delta_0^+ = {2a}, Delta_1^+ = {a}
        assert_eq!(rd.positive_even.len(), 1);
        assert_eq!(rd.positive_odd.len(), 1);
        assert_eq!(rd.positive_even[0].1, vec![2]);
        assert_eq!(rd.positive_odd[0].1, vec![1]);
        // every root pairs against its opposite with nonzero pairing, and
        // [e_a, e_-a] = (e_a, e_-a) h_a holds by the validate check
        assert_eq!(rd.coroots.len(), 4);
        for (_, _, pairing, h_alpha) in &rd.coroots {
            assert_ne!(*pairing, 0);
            assert!(!h_alpha.is_empty());
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = builtin("osp", (1, 2), 3).unwrap();
        let json = SpecJson::from_spec(&spec);
        let text = serde_json::to_string(&json).unwrap();
        let parsed: SpecJson = serde_json::from_str(&text).unwrap();
        let spec2 = parsed.to_spec().unwrap();
        assert!(spec2.validate().passed());
        assert_eq!(spec.brackets, spec2.brackets);
        assert_eq!(spec.p_map, spec2.p_map);
        assert_eq!(spec.triangular, spec2.triangular);
    }
}
