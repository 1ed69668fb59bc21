//! Exact arithmetic over `F_p` and its extensions `F_{p^k}`, plus the dense
//! linear algebra every other module consumes.
//!
//! Fields are small by design (`p` in {3,5,7}, `k <= 4`); the modulus for
//! `F_{p^k}` is the first irreducible monic polynomial in lexicographic order
//! of its coefficient vector `(c_0, ..., c_{k-1})`, fixed per `(p, k)` so
//! cached results are reproducible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite field `F_{p^k}` with a fixed irreducible modulus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Field {
    p: u32,
    k: usize,
    /// Monic modulus, coefficients low-to-high, length `k + 1`. For `k = 1`
    /// this is `[0, 1]`, i.e. the polynomial `x`.
    modulus: Vec<u32>,
}

/// An element of a [`Field`]: the canonical coefficient vector (entries in
/// `[0, p)`, degrees above `k` always zero). Fixed-size and `Copy` because
/// `k <= 4`; the owning field knows how many slots are live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElement {
    pub c: [u32; 4],
}

pub const MAX_EXT_DEGREE: usize = 4;

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Polynomial remainder of `a` by monic `m` over `F_p`, coefficients
/// low-to-high.
fn poly_rem(mut a: Vec<u32>, m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = *a.last().unwrap() % p;
        let shift = a.len() - 1 - dm;
        if lead != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let idx = shift + i;
                let sub = (lead as u64 * mc as u64) % p as u64;
                a[idx] = ((a[idx] as u64 + p as u64 - sub) % p as u64) as u32;
            }
        }
        a.pop();
    }
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u64 + ai as u64 * bj as u64) % p as u64) as u32;
        }
    }
    out
}

/// Brute-force irreducibility over `F_p`: search for a monic factor of degree
/// `1..=deg/2`. Adequate for the desk-scale degrees `k <= 4`.
fn poly_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        // all monic candidates of degree d
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                cand.push((c % p as u64) as u32);
                c /= p as u64;
            }
            cand.push(1);
            let r = poly_rem(m.to_vec(), &cand, p);
            if r.iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Field> {
        if !is_prime(p) || p == 2 {
            return Err(Error::InvalidField(format!("{p} is not an odd prime")));
        }
        Ok(Field {
            p,
            k: 1,
            modulus: vec![0, 1],
        })
    }

    /// The extension `F_{p^k}` with the fixed lex-first irreducible modulus.
    pub fn extension(p: u32, k: usize) -> Result<Field> {
        if !is_prime(p) || p == 2 {
            return Err(Error::InvalidField(format!("{p} is not an odd prime")));
        }
        if k == 0 || k > 4 {
            return Err(Error::InvalidField(format!(
                "extension degree {k} out of the supported range 1..=4"
            )));
        }
        if k == 1 {
            return Field::prime(p);
        }
        let count = (p as u64).pow(k as u32);
        for code in 0..count {
            let mut m = Vec::with_capacity(k + 1);
            let mut c = code;
            for _ in 0..k {
                m.push((c % p as u64) as u32);
                c /= p as u64;
            }
            m.push(1);
            if poly_irreducible(&m, p) {
                return Ok(Field { p, k, modulus: m });
            }
        }
        unreachable!("irreducible polynomials of every degree exist over F_p")
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.k as u32)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { c: [0; 4] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// Image of the integer `n` in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let p = self.p as i64;
        let mut c = [0; 4];
        c[0] = (((n % p) + p) % p) as u32;
        FieldElement { c }
    }

    /// Canonicalize a raw coefficient vector (any length) into an element.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> FieldElement {
        let mut v: Vec<u32> = coeffs.iter().map(|&x| x % self.p).collect();
        if v.is_empty() {
            v.push(0);
        }
        let r = poly_rem(v, &self.modulus, self.p);
        let mut c = [0; 4];
        for (i, x) in r.into_iter().enumerate() {
            if i < self.k {
                c[i] = x;
            }
        }
        FieldElement { c }
    }

    /// The generator `t` of the extension (zero for `k = 1`).
    pub fn gen(&self) -> FieldElement {
        if self.k == 1 {
            return self.zero();
        }
        let mut c = [0; 4];
        c[1] = 1;
        FieldElement { c }
    }

    /// Lift an element of `F_p` (as an integer) into this field.
    pub fn embed_prime(&self, a: u32) -> FieldElement {
        self.from_int(a as i64)
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        a.c == [0; 4]
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut c = [0; 4];
        for i in 0..self.k {
            c[i] = (a.c[i] + b.c[i]) % self.p;
        }
        FieldElement { c }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut c = [0; 4];
        for i in 0..self.k {
            c[i] = (a.c[i] + self.p - b.c[i]) % self.p;
        }
        FieldElement { c }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let mut c = [0; 4];
        for i in 0..self.k {
            c[i] = (self.p - a.c[i]) % self.p;
        }
        FieldElement { c }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        if self.k == 1 {
            let mut c = [0; 4];
            c[0] = ((a.c[0] as u64 * b.c[0] as u64) % self.p as u64) as u32;
            return FieldElement { c };
        }
        let prod = poly_mul(&a.c[..self.k], &b.c[..self.k], self.p);
        let r = poly_rem(prod, &self.modulus, self.p);
        let mut c = [0; 4];
        for (i, x) in r.into_iter().enumerate() {
            c[i] = x;
        }
        FieldElement { c }
    }

    /// Live coefficients (length `k`), for serialization.
    pub fn coeffs_vec(&self, a: &FieldElement) -> Vec<u32> {
        a.c[..self.k].to_vec()
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero {
                p: self.p,
                k: self.k,
            });
        }
        Ok(self.pow(a, self.order() - 2))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// The Frobenius automorphism `x -> x^p`; fixes the prime subfield.
    pub fn frobenius(&self, a: &FieldElement) -> FieldElement {
        self.pow(a, self.p as u64)
    }

    /// Trace down to the prime subfield, `x + x^p + ... + x^{p^{k-1}}`.
    pub fn trace(&self, a: &FieldElement) -> FieldElement {
        let mut acc = *a;
        let mut cur = *a;
        for _ in 1..self.k {
            cur = self.frobenius(&cur);
            acc = self.add(&acc, &cur);
        }
        acc
    }

    /// All elements of the field in a fixed order (coefficient counting).
    pub fn elements(&self) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut c = [0u32; 4];
        loop {
            out.push(FieldElement { c });
            let mut i = 0;
            loop {
                if i == self.k {
                    return out;
                }
                c[i] += 1;
                if c[i] < self.p {
                    break;
                }
                c[i] = 0;
                i += 1;
            }
        }
    }

    pub fn rand_element<R: rand::Rng>(&self, rng: &mut R) -> FieldElement {
        let mut c = [0; 4];
        for slot in c.iter_mut().take(self.k) {
            *slot = rng.gen_range(0..self.p);
        }
        FieldElement { c }
    }

    /// Render with `t` as the extension generator, e.g. `2t+1`.
    pub fn render(&self, a: &FieldElement) -> String {
        if self.k == 1 {
            return a.c[0].to_string();
        }
        let mut parts = Vec::new();
        for (i, &x) in a.c[..self.k].iter().enumerate().rev() {
            if x == 0 {
                continue;
            }
            let var = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            if var.is_empty() {
                parts.push(x.to_string());
            } else if x == 1 {
                parts.push(var);
            } else {
                parts.push(format!("{x}{var}"));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }
}

/// All solutions of the Artin-Schreier equation `x^p - x = c` in `field`.
/// The answer is either empty or a coset of the prime subfield (p elements).
pub fn artin_schreier_solve(c: &FieldElement, field: &Field) -> Vec<FieldElement> {
    let mut out = Vec::new();
    for x in field.elements() {
        let lhs = field.sub(&field.pow(&x, field.p() as u64), &x);
        if lhs == *c {
            out.push(x);
        }
    }
    out
}

/// Dense matrix over a [`Field`], row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, field: &Field) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(n: usize, field: &Field) -> Matrix {
        let mut m = Matrix::zeros(n, n, field);
        for i in 0..n {
            *m.at_mut(i, i) = field.one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Matrix {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut FieldElement {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self, field: &Field) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows, field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = *self.at(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix, field: &Field) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, other.cols, field);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.at(i, l);
                if field.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let add = field.mul(a, other.at(l, j));
                    let cur = *out.at(i, j);
                    *out.at_mut(i, j) = field.add(&cur, &add);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix, field: &Field) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| field.add(a, b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Matrix, field: &Field) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| field.sub(a, b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, s: &FieldElement, field: &Field) -> Matrix {
        let data = self.data.iter().map(|a| field.mul(a, s)).collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn pow(&self, mut e: u64, field: &Field) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.rows, field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, field);
            }
            base = base.mul(&base, field);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self, field: &Field) -> bool {
        self.data.iter().all(|x| field.is_zero(x))
    }

    pub fn apply(&self, v: &[FieldElement], field: &Field) -> Vec<FieldElement> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![field.zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if field.is_zero(a) || field.is_zero(&v[j]) {
                    continue;
                }
                out[i] = field.add(&out[i], &field.mul(a, &v[j]));
            }
        }
        out
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self, field: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let mut pivot_row = None;
            for i in r..self.rows {
                if !field.is_zero(self.at(i, c)) {
                    pivot_row = Some(i);
                    break;
                }
            }
            let Some(pr) = pivot_row else { continue };
            for j in 0..self.cols {
                self.data.swap(r * self.cols + j, pr * self.cols + j);
            }
            let inv = field.inv(self.at(r, c)).expect("pivot nonzero");
            for j in c..self.cols {
                let v = field.mul(self.at(r, j), &inv);
                *self.at_mut(r, j) = v;
            }
            for i in 0..self.rows {
                if i == r || field.is_zero(self.at(i, c)) {
                    continue;
                }
                let factor = *self.at(i, c);
                for j in c..self.cols {
                    let v = field.sub(self.at(i, j), &field.mul(&factor, self.at(r, j)));
                    *self.at_mut(i, j) = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &Field) -> usize {
        let mut m = self.clone();
        m.rref(field).len()
    }

    /// Basis of the right kernel `{v : Mv = 0}`.
    pub fn kernel_basis(&self, field: &Field) -> Vec<Vec<FieldElement>> {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![field.zero(); self.cols];
            v[fc] = field.one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(m.at(ri, fc));
            }
            basis.push(v);
        }
        basis
    }

    /// Solve `Mx = b`; `None` when inconsistent. Returns one solution.
    pub fn solve(&self, b: &[FieldElement], field: &Field) -> Option<Vec<FieldElement>> {
        assert_eq!(self.rows, b.len());
        let mut aug = Matrix::zeros(self.rows, self.cols + 1, field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *aug.at_mut(i, j) = *self.at(i, j);
            }
            *aug.at_mut(i, self.cols) = b[i];
        }
        let pivots = aug.rref(field);
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![field.zero(); self.cols];
        for (ri, &pc) in pivots.iter().enumerate() {
            x[pc] = *aug.at(ri, self.cols);
        }
        Some(x)
    }

    pub fn det(&self, field: &Field) -> FieldElement {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let mut det = field.one();
        for c in 0..m.cols {
            let mut pivot_row = None;
            for i in c..m.rows {
                if !field.is_zero(m.at(i, c)) {
                    pivot_row = Some(i);
                    break;
                }
            }
            let Some(pr) = pivot_row else {
                return field.zero();
            };
            if pr != c {
                for j in 0..m.cols {
                    m.data.swap(c * m.cols + j, pr * m.cols + j);
                }
                det = field.neg(&det);
            }
            let pivot = *m.at(c, c);
            det = field.mul(&det, &pivot);
            let inv = field.inv(&pivot).expect("pivot nonzero");
            for i in c + 1..m.rows {
                if field.is_zero(m.at(i, c)) {
                    continue;
                }
                let factor = field.mul(m.at(i, c), &inv);
                for j in c..m.cols {
                    let v = field.sub(m.at(i, j), &field.mul(&factor, m.at(c, j)));
                    *m.at_mut(i, j) = v;
                }
            }
        }
        det
    }

    pub fn inverse(&self, field: &Field) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n, field);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = *self.at(i, j);
            }
            *aug.at_mut(i, n + i) = field.one();
        }
        let pivots = aug.rref(field);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Matrix::zeros(n, n, field);
        for i in 0..n {
            for j in 0..n {
                *inv.at_mut(i, j) = *aug.at(i, n + j);
            }
        }
        Some(inv)
    }
}

/// Span utility: reduce `vectors` to a linearly independent subset (in input
/// order) together with the rref of their span for membership tests.
pub struct SpanBasis {
    pub field: Field,
    /// rref rows spanning the same space.
    pub rref: Matrix,
    pub pivots: Vec<usize>,
    /// indices into the input list that form an independent subset
    pub chosen: Vec<usize>,
}

impl SpanBasis {
    pub fn new(vectors: &[Vec<FieldElement>], dim: usize, field: &Field) -> SpanBasis {
        let mut rref = Matrix::zeros(0, dim, field);
        rref.rows = 0;
        let mut pivots: Vec<usize> = Vec::new();
        let mut chosen = Vec::new();
        for (idx, v) in vectors.iter().enumerate() {
            if Self::reduce_and_insert(&mut rref, &mut pivots, v, field) {
                chosen.push(idx);
            }
        }
        SpanBasis {
            field: field.clone(),
            rref,
            pivots,
            chosen,
        }
    }

    /// Reduce `v` against the current rref; insert if independent. Returns
    /// true when the vector enlarged the span.
    fn reduce_and_insert(
        rref: &mut Matrix,
        pivots: &mut Vec<usize>,
        v: &[FieldElement],
        field: &Field,
    ) -> bool {
        let mut w = v.to_vec();
        for (ri, &pc) in pivots.iter().enumerate() {
            if field.is_zero(&w[pc]) {
                continue;
            }
            let factor = w[pc];
            for j in 0..w.len() {
                let t = field.sub(&w[j], &field.mul(&factor, rref.at(ri, j)));
                w[j] = t;
            }
        }
        if w.iter().all(|x| field.is_zero(x)) {
            return false;
        }
        // Rebuild the rref with the new row appended; cheap at our scale.
        let dim = rref.cols;
        let mut rows: Vec<Vec<FieldElement>> = (0..rref.rows).map(|i| rref.row(i).to_vec()).collect();
        rows.push(w);
        let mut m = Matrix::from_rows(rows);
        let piv = m.rref(field);
        *pivots = piv;
        // drop zero rows
        let mut keep: Vec<Vec<FieldElement>> = Vec::new();
        for i in 0..m.rows {
            if m.row(i).iter().any(|x| !field.is_zero(x)) {
                keep.push(m.row(i).to_vec());
            }
        }
        *rref = if keep.is_empty() {
            Matrix::zeros(0, dim, field)
        } else {
            Matrix::from_rows(keep)
        };
        true
    }

    pub fn dim(&self) -> usize {
        self.rref.rows
    }

    /// Does the span contain `v`?
    pub fn contains(&self, v: &[FieldElement]) -> bool {
        let field = &self.field;
        let mut w = v.to_vec();
        for (ri, &pc) in self.pivots.iter().enumerate() {
            if field.is_zero(&w[pc]) {
                continue;
            }
            let factor = w[pc];
            for j in 0..w.len() {
                let t = field.sub(&w[j], &field.mul(&factor, self.rref.at(ri, j)));
                w[j] = t;
            }
        }
        w.iter().all(|x| field.is_zero(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn inv_in_f5() {
        let f = Field::prime(5).unwrap();
        let two = f.from_int(2);
        assert_eq!(f.inv(&two).unwrap(), f.from_int(3));
        assert!(f.inv(&f.zero()).is_err());
    }

    #[test]
    fn add_wraps_in_f3() {
        let f = Field::prime(3).unwrap();
        assert_eq!(f.add(&f.from_int(2), &f.from_int(2)), f.from_int(1));
    }

    #[test]
    fn f9_modulus_is_lex_first() {
        // Over F_3 the first irreducible monic quadratic in lex order of
        // (c0, c1) is t^2 + 1.
        let f = Field::extension(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn frobenius_on_f9_generator() {
        // t^3 = -t when t^2 = -1.
        let f = Field::extension(3, 2).unwrap();
        let t = f.gen();
        assert_eq!(f.frobenius(&t), f.neg(&t));
    }

    #[test]
    fn frobenius_iterated_is_identity() {
        for (p, k) in [(3u32, 2usize), (3, 3), (5, 2), (7, 2), (3, 4)] {
            let f = Field::extension(p, k).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(17);
            for _ in 0..50 {
                let a = f.rand_element(&mut rng);
                let mut b = a;
                for _ in 0..k {
                    b = f.frobenius(&b);
                }
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn field_axioms_random_triples() {
        for fld in [
            Field::prime(3).unwrap(),
            Field::prime(5).unwrap(),
            Field::extension(3, 2).unwrap(),
            Field::extension(5, 2).unwrap(),
        ] {
            let mut rng = ChaCha8Rng::seed_from_u64(23);
            for _ in 0..10_000 {
                let a = fld.rand_element(&mut rng);
                let b = fld.rand_element(&mut rng);
                let c = fld.rand_element(&mut rng);
                let ab_c = fld.mul(&fld.mul(&a, &b), &c);
                let a_bc = fld.mul(&a, &fld.mul(&b, &c));
                assert_eq!(ab_c, a_bc);
                let left = fld.mul(&a, &fld.add(&b, &c));
                let right = fld.add(&fld.mul(&a, &b), &fld.mul(&a, &c));
                assert_eq!(left, right);
            }
        }
    }

    #[test]
    fn artin_schreier_on_prime_field() {
        let f3 = Field::prime(3).unwrap();
        // x^3 - x = 0 has all of F_3 as solutions
        let sols = artin_schreier_solve(&f3.zero(), &f3);
        assert_eq!(sols.len(), 3);
        // x^3 - x = 1 has none in F_3
        let sols = artin_schreier_solve(&f3.one(), &f3);
        assert!(sols.is_empty());
    }

    #[test]
    fn artin_schreier_in_f9() {
        let f9 = Field::extension(3, 2).unwrap();
        let omega = f9.gen(); // omega not in F_3
        let c = f9.sub(&f9.pow(&omega, 3), &omega);
        let sols = artin_schreier_solve(&c, &f9);
        assert_eq!(sols.len(), 3);
        // brute-force verification of every claimed solution
        for s in &sols {
            assert_eq!(f9.sub(&f9.pow(s, 3), s), c);
        }
        assert!(sols.contains(&omega));
        // closure under adding prime-subfield elements
        for s in &sols {
            for j in 0..3 {
                assert!(sols.contains(&f9.add(s, &f9.from_int(j))));
            }
        }
    }

    #[test]
    fn kernel_of_zero_and_identity() {
        let f = Field::prime(5).unwrap();
        let z = Matrix::zeros(3, 3, &f);
        assert_eq!(z.kernel_basis(&f).len(), 3);
        let id = Matrix::identity(3, &f);
        assert!(id.kernel_basis(&f).is_empty());
    }

    #[test]
    fn rank_plus_kernel_on_random_matrix() {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        let mut m = Matrix::zeros(20, 30, &f);
        for x in m.data.iter_mut() {
            *x = f.rand_element(&mut rng);
        }
        let rank = m.rank(&f);
        let kernel = m.kernel_basis(&f);
        assert_eq!(rank + kernel.len(), 30);
        for v in &kernel {
            let mv = m.apply(v, &f);
            assert!(mv.iter().all(|x| f.is_zero(x)));
        }
        // independent re-run with permuted rows must give the same rank
        let mut rows: Vec<Vec<FieldElement>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
        rows.reverse();
        rows.swap(0, 7);
        let m2 = Matrix::from_rows(rows);
        assert_eq!(m2.rank(&f), rank);
    }

    #[test]
    fn solve_and_inverse() {
        let f = Field::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut m = Matrix::zeros(6, 6, &f);
        loop {
            for x in m.data.iter_mut() {
                *x = f.rand_element(&mut rng);
            }
            if !f.is_zero(&m.det(&f)) {
                break;
            }
        }
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&inv, &f), Matrix::identity(6, &f));
        let b: Vec<FieldElement> = (0..6).map(|_| f.rand_element(&mut rng)).collect();
        let x = m.solve(&b, &f).unwrap();
        assert_eq!(m.apply(&x, &f), b);
    }

    #[test]
    fn span_basis_membership() {
        let f = Field::prime(3).unwrap();
        let v1 = vec![f.one(), f.zero(), f.one()];
        let v2 = vec![f.zero(), f.one(), f.one()];
        let v3 = vec![f.one(), f.one(), f.from_int(2)]; // v1 + v2
        let sb = SpanBasis::new(&[v1.clone(), v2.clone(), v3.clone()], 3, &f);
        assert_eq!(sb.dim(), 2);
        assert_eq!(sb.chosen, vec![0, 1]);
        assert!(sb.contains(&v3));
        assert!(!sb.contains(&[f.one(), f.zero(), f.zero()]));
    }
}
