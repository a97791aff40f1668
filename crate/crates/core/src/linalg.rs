//! Exact integer matrices: Smith normal form, determinants, kernels,
//! cokernels and signatures. All arithmetic is arbitrary precision.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.iter().flatten().cloned().map(Into::into).collect() }
    }

    /// Explicit shape, for matrices with zero rows or columns.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols);
        IntMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_i64()).collect()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// `v^T M` for a row vector `v`.
    pub fn left_apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| &v[i] * self.get(i, j)).sum())
            .collect()
    }

    /// `M v` for a column vector `v`.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// Gram matrix `B M B^T` of the rows of `basis`.
    pub fn congruence(&self, basis: &IntMatrix) -> IntMatrix {
        basis.mul(self).mul(&basis.transpose())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(ToString::to_string).collect()).collect();
        // Small entries serialize as JSON numbers, large ones as strings.
        let rows: Vec<Vec<serde_json::Value>> = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| match x.parse::<i64>() {
                        Ok(v) => serde_json::Value::from(v),
                        Err(_) => serde_json::Value::String(x),
                    })
                    .collect()
            })
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(d)?;
        if rows.iter().any(|r| r.len() != rows.first().map_or(0, Vec::len)) {
            return Err(serde::de::Error::custom("ragged matrix"));
        }
        Ok(IntMatrix::from_rows(&rows))
    }
}

/// `U * M * V = S` with `U`, `V` unimodular and `S` in Smith normal form.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries of `S`, all positive.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols))
            .map(|i| self.s.get(i, i).clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().len()
    }
}

/// Smith normal form. Pivot: smallest nonzero absolute value in the
/// remaining block, ties broken by row-major position.
pub fn snf(m: &IntMatrix) -> SnfResult {
    let mut s = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let r = m.rows.min(m.cols);

    for t in 0..r {
        loop {
            let Some((pi, pj)) = smallest_entry(&s, t) else {
                return finish(u, s, v);
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..s.rows {
                let (q, rem) = s.get(i, t).div_mod_floor(s.get(t, t));
                let k = -q;
                s.add_row(i, t, &k);
                u.add_row(i, t, &k);
                dirty |= !rem.is_zero();
            }
            for j in t + 1..s.cols {
                let (q, rem) = s.get(t, j).div_mod_floor(s.get(t, t));
                let k = -q;
                s.add_col(j, t, &k);
                v.add_col(j, t, &k);
                dirty |= !rem.is_zero();
            }
            if dirty {
                continue;
            }
            // Pivot now clears its row and column; enforce divisibility.
            let pivot = s.get(t, t).clone();
            let offender = (t + 1..s.rows)
                .flat_map(|i| (t + 1..s.cols).map(move |j| (i, j)))
                .find(|&(i, j)| !s.get(i, j).is_multiple_of(&pivot));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    s.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(u, s, v)
}

fn finish(u: IntMatrix, s: IntMatrix, v: IntMatrix) -> SnfResult {
    SnfResult { u, s, v }
}

fn smallest_entry(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..s.rows {
        for j in t..s.cols {
            let a = s.get(i, j).abs();
            if a.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| a < *b) {
                best = Some(((i, j), a));
            }
        }
    }
    best.map(|(p, _)| p)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}

/// Basis of `{v : M v = 0}`, read off the SNF column transform.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let res = snf(m);
    let r = res.rank();
    (r..m.cols)
        .map(|j| (0..m.cols).map(|i| res.v.get(i, j).clone()).collect::<Vec<_>>())
        .map(|v| primitive(&v))
        .collect()
}

fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Invariant factors of `Z^rows / M Z^cols` that differ from 1, with
/// free summands reported as 0. An empty list is the trivial group.
pub fn coker_invariants(m: &IntMatrix) -> Vec<BigInt> {
    let res = snf(m);
    let d = res.diagonal();
    let mut out: Vec<BigInt> = d.iter().filter(|x| !x.is_one()).cloned().collect();
    out.extend(std::iter::repeat_n(BigInt::zero(), m.rows - d.len()));
    out
}

/// Rank via Smith form.
pub fn rank(m: &IntMatrix) -> usize {
    snf(m).rank()
}

/// `(positive, negative, zero)` eigenvalue counts of a symmetric matrix,
/// by rational congruence diagonalization.
pub fn inertia(q: &IntMatrix) -> Result<(usize, usize, usize)> {
    if !q.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = q.rows;
    let mut a: Vec<Vec<BigRational>> =
        (0..n).map(|i| q.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while let Some(&first) = active.first() {
        // Find a nonzero diagonal pivot, or manufacture one from an off-diagonal entry.
        let pivot = match active.iter().copied().find(|&i| !a[i][i].is_zero()) {
            Some(p) => p,
            None => {
                let pair = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !a[i][j].is_zero());
                match pair {
                    None => {
                        zero += active.len();
                        break;
                    }
                    Some((i, j)) => {
                        // e_i <- e_i + e_j gives diagonal 2 a_ij != 0.
                        for k in 0..n {
                            let v = a[j][k].clone();
                            a[i][k] += v;
                        }
                        for k in 0..n {
                            let v = a[k][j].clone();
                            a[k][i] += v;
                        }
                        i
                    }
                }
            }
        };
        let _ = first;
        let p = a[pivot][pivot].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&i| i != pivot);
        for &i in &active {
            let f = &a[i][pivot] / &p;
            if f.is_zero() {
                continue;
            }
            for k in 0..n {
                let v = &f * &a[pivot][k];
                a[i][k] -= v;
            }
            for k in 0..n {
                let v = &f * &a[k][pivot];
                a[k][i] -= v;
            }
        }
    }
    Ok((pos, neg, zero))
}

/// Signature `b+ - b-` of a symmetric matrix.
pub fn signature(q: &IntMatrix) -> Result<i64> {
    let (p, n, _) = inertia(q)?;
    Ok(p as i64 - n as i64)
}

/// Three-valued answer of the `<-1>`-sum congruence search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagMinusOne {
    /// Rows of the witness form a unimodular basis `P` with `P Q P^T = -I`.
    Yes(IntMatrix),
    No(String),
    Inconclusive,
}

impl DiagMinusOne {
    pub fn is_yes(&self) -> bool {
        matches!(self, DiagMinusOne::Yes(_))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DiagSearchConfig {
    /// Largest absolute coefficient tried in a norm -1 search.
    pub height: i64,
    /// Maximum number of candidate coefficient vectors examined.
    pub budget: u64,
}

impl Default for DiagSearchConfig {
    fn default() -> Self {
        DiagSearchConfig { height: 4, budget: 2_000_000 }
    }
}

/// Decides whether `Q` is integrally congruent to `-I` by repeatedly
/// splitting off vectors of norm -1.
pub fn is_diag_minus_one(q: &IntMatrix) -> Result<DiagMinusOne> {
    is_diag_minus_one_with(q, DiagSearchConfig::default())
}

pub fn is_diag_minus_one_with(q: &IntMatrix, cfg: DiagSearchConfig) -> Result<DiagMinusOne> {
    if !q.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = q.rows;
    let (pos, neg, zero) = inertia(q)?;
    if pos > 0 || zero > 0 {
        return Ok(DiagMinusOne::No(format!("not negative definite: inertia ({pos}, {neg}, {zero})")));
    }
    if !det(q)?.abs().is_one() {
        return Ok(DiagMinusOne::No("not unimodular".into()));
    }
    // Even forms have no odd vectors; -I does.
    if n > 0 && (0..n).all(|i| q.get(i, i).is_even()) {
        return Ok(DiagMinusOne::No("form is even".into()));
    }
    let mut found: Vec<Vec<BigInt>> = Vec::new();
    // Rows of `rest` span the orthogonal complement of everything found so far.
    let mut rest = IntMatrix::identity(n);
    let mut spent = 0u64;
    while rest.rows > 0 {
        let gram = q.congruence(&rest);
        let Some(coeffs) = find_norm_minus_one(&gram, cfg, &mut spent) else {
            return Ok(DiagMinusOne::Inconclusive);
        };
        let e = rest.left_apply(&coeffs);
        // x -> x + Q(x, e) e projects onto e^⊥ since Q(e, e) = -1.
        let qe = q.apply(&e);
        let projected: Vec<Vec<BigInt>> = (0..rest.rows)
            .map(|i| {
                let x = rest.row(i);
                let c: BigInt = x.iter().zip(&qe).map(|(a, b)| a * b).sum();
                x.iter().zip(&e).map(|(xi, ei)| xi + &c * ei).collect()
            })
            .collect();
        found.push(e);
        rest = lattice_basis(&projected, n);
    }
    let witness = IntMatrix::from_vec(found.len(), n, found.into_iter().flatten().collect());
    let check = q.congruence(&witness);
    let minus_i = {
        let mut m = IntMatrix::identity(n);
        (0..n).for_each(|i| m.set(i, i, -BigInt::one()));
        m
    };
    if check == minus_i && det(&witness)?.abs().is_one() {
        Ok(DiagMinusOne::Yes(witness))
    } else {
        Ok(DiagMinusOne::Inconclusive)
    }
}

/// Coefficient vectors ordered by support size, then by height.
fn find_norm_minus_one(gram: &IntMatrix, cfg: DiagSearchConfig, spent: &mut u64) -> Option<Vec<BigInt>> {
    let n = gram.rows;
    let target = -BigInt::one();
    for weight in 1..=n {
        for h in 1..=cfg.height {
            let mut support: Vec<usize> = (0..weight).collect();
            loop {
                // Coefficients in [-h, h] \ {0} on the support, with at least one of magnitude h.
                let mut coeffs = vec![-h; weight];
                loop {
                    if coeffs.iter().any(|c| c.abs() == h) && coeffs[0] > 0 {
                        *spent += 1;
                        if *spent > cfg.budget {
                            return None;
                        }
                        let mut v = vec![BigInt::zero(); n];
                        for (k, &i) in support.iter().enumerate() {
                            v[i] = BigInt::from(coeffs[k]);
                        }
                        let gv = gram.apply(&v);
                        let norm: BigInt = v.iter().zip(&gv).map(|(a, b)| a * b).sum();
                        if norm == target {
                            return Some(v);
                        }
                    }
                    if !next_coeffs(&mut coeffs, h) {
                        break;
                    }
                }
                if !next_combination(&mut support, n) {
                    break;
                }
            }
        }
    }
    None
}

fn next_coeffs(c: &mut [i64], h: i64) -> bool {
    for x in c.iter_mut().rev() {
        if *x < h {
            *x += 1;
            if *x == 0 {
                *x = 1;
            }
            return true;
        }
        *x = -h;
    }
    false
}

fn next_combination(s: &mut [usize], n: usize) -> bool {
    let k = s.len();
    for i in (0..k).rev() {
        if s[i] < n - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// A basis (as matrix rows) of the lattice spanned by `vectors`, by
/// integer row echelon reduction.
pub fn lattice_basis(vectors: &[Vec<BigInt>], dim: usize) -> IntMatrix {
    let rows = vectors.len();
    let mut m = IntMatrix::from_vec(rows, dim, vectors.iter().flatten().cloned().collect());
    let mut r = 0;
    for c in 0..dim {
        if r == rows {
            break;
        }
        loop {
            let pivot = (r..rows)
                .filter(|&i| !m.get(i, c).is_zero())
                .min_by(|&a, &b| m.get(a, c).abs().cmp(&m.get(b, c).abs()));
            let Some(p) = pivot else { break };
            m.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let q = m.get(i, c).div_floor(m.get(r, c));
                m.add_row(i, r, &-q);
                if !m.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                r += 1;
                break;
            }
        }
    }
    IntMatrix::from_vec(r, dim, m.data[..r * dim].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    // Cofactor expansion oracle, independent of the Bareiss path.
    fn det_cofactor(a: &[Vec<i64>]) -> i64 {
        let n = a.len();
        if n == 0 {
            return 1;
        }
        if n == 1 {
            return a[0][0];
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    a[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * a[0][j] * det_cofactor(&minor)
            })
            .sum()
    }

    fn check_snf(a: &IntMatrix) -> SnfResult {
        let r = snf(a);
        assert_eq!(r.u.mul(a).mul(&r.v), r.s, "U M V != S for {a:?}");
        assert!(det(&r.u).unwrap().abs().is_one());
        assert!(det(&r.v).unwrap().abs().is_one());
        for i in 0..r.s.rows() {
            for j in 0..r.s.cols() {
                if i != j {
                    assert!(r.s.get(i, j).is_zero());
                }
            }
        }
        let d = r.diagonal();
        for w in d.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert!(d.iter().all(|x| x.is_positive()));
        r
    }

    #[test]
    fn snf_examples() {
        assert_eq!(check_snf(&IntMatrix::identity(3)).s, IntMatrix::identity(3));
        assert_eq!(check_snf(&m(&[vec![0, 1], vec![1, -1]])).diagonal(), ints(&[1, 1]));
        assert_eq!(check_snf(&m(&[vec![2, 0], vec![0, 3]])).diagonal(), ints(&[1, 6]));
    }

    // Brute-force 2x2 oracle: the first invariant factor is the gcd of the entries,
    // the product of both is |det|.
    #[test]
    fn snf_2x2_matches_gcd_det_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let e: Vec<i64> = (0..4).map(|_| rng.gen_range(-9..=9)).collect();
            let a = m(&[vec![e[0], e[1]], vec![e[2], e[3]]]);
            let g = e.iter().fold(0i64, |g, &x| g.gcd(&x));
            let d = (e[0] * e[3] - e[1] * e[2]).abs();
            let diag = check_snf(&a).diagonal();
            let expected: Vec<i64> = match (g, d) {
                (0, _) => vec![],
                (g, 0) => vec![g],
                (g, d) => vec![g, d / g],
            };
            assert_eq!(diag, ints(&expected), "{e:?}");
        }
    }

    #[test]
    fn snf_random_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let r = rng.gen_range(0..=8);
            let c = rng.gen_range(0..=8);
            let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-5..=5)).collect()).collect();
            let a = if r == 0 { IntMatrix::zeros(0, c) } else { m(&rows) };
            check_snf(&a);
        }
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&IntMatrix::identity(4)).unwrap(), BigInt::one());
        assert_eq!(det(&m(&[vec![0, 1], vec![1, 0]])).unwrap(), BigInt::from(-1));
        assert!(matches!(det(&m(&[vec![1, 2]])), Err(Error::NotSquare { .. })));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(1..=5);
            let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            assert_eq!(det(&m(&rows)).unwrap(), BigInt::from(det_cofactor(&rows)));
        }
    }

    #[test]
    fn det_equals_snf_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let n = rng.gen_range(1..=6);
            let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-5..=5)).collect()).collect();
            let a = m(&rows);
            let r = snf(&a);
            let prod: BigInt = if r.rank() < n { BigInt::zero() } else { r.diagonal().iter().product() };
            assert_eq!(det(&a).unwrap().abs(), prod);
        }
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&IntMatrix::zeros(2, 2));
        assert_eq!(k.len(), 2);
        let k = kernel_basis(&m(&[vec![1, 1]]));
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert!(v == &ints(&[1, -1]) || v == &ints(&[-1, 1]));
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let r = rng.gen_range(1..=5);
            let c = rng.gen_range(1..=7);
            let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-4..=4)).collect()).collect();
            let a = m(&rows);
            let k = kernel_basis(&a);
            assert_eq!(k.len(), c - rank(&a));
            for v in &k {
                assert!(a.apply(v).iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn coker_examples() {
        assert!(coker_invariants(&m(&[vec![1]])).is_empty());
        assert_eq!(coker_invariants(&m(&[vec![2]])), ints(&[2]));
        assert!(coker_invariants(&m(&[vec![0, 1], vec![1, 0]])).is_empty());
        assert_eq!(coker_invariants(&m(&[vec![0]])), ints(&[0]));
        assert_eq!(coker_invariants(&IntMatrix::zeros(2, 0)), ints(&[0, 0]));
    }

    fn random_unimodular(n: usize, rng: &mut ChaCha8Rng) -> IntMatrix {
        let mut u = IntMatrix::identity(n);
        for _ in 0..3 * n {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i != j {
                u.add_row(i, j, &BigInt::from(rng.gen_range(-2..=2)));
            }
        }
        u
    }

    #[test]
    fn coker_invariant_under_unimodular_multiplication() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..100 {
            let r = rng.gen_range(1..=5);
            let c = rng.gen_range(1..=5);
            let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-5..=5)).collect()).collect();
            let a = m(&rows);
            let b = random_unimodular(r, &mut rng).mul(&a).mul(&random_unimodular(c, &mut rng));
            assert_eq!(coker_invariants(&a), coker_invariants(&b));
        }
    }

    #[test]
    fn diag_minus_one_examples() {
        let mut neg3 = IntMatrix::identity(3);
        (0..3).for_each(|i| neg3.set(i, i, BigInt::from(-1)));
        match is_diag_minus_one(&neg3).unwrap() {
            DiagMinusOne::Yes(w) => assert_eq!(neg3.congruence(&w), neg3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(is_diag_minus_one(&m(&[vec![-1, 0], vec![0, 1]])).unwrap(), DiagMinusOne::No(_)));
        // A disguised -I: congruent image of -I under a unimodular change of basis.
        let p = m(&[vec![1, 2, 0], vec![0, 1, -1], vec![1, 3, 0]]);
        assert!(det(&p).unwrap().abs().is_one());
        let q = neg3.congruence(&p);
        assert!(is_diag_minus_one(&q).unwrap().is_yes());
        // -E8 is even, so it is negative definite unimodular but not diagonal.
        let e8 = neg_e8();
        assert!(matches!(is_diag_minus_one(&e8).unwrap(), DiagMinusOne::No(_)));
    }

    fn neg_e8() -> IntMatrix {
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)];
        let mut q = IntMatrix::zeros(8, 8);
        (0..8).for_each(|i| q.set(i, i, BigInt::from(-2)));
        for (a, b) in edges {
            q.set(a, b, BigInt::one());
            q.set(b, a, BigInt::one());
        }
        q
    }

    #[test]
    fn inertia_examples() {
        assert_eq!(inertia(&m(&[vec![0, 1], vec![1, 0]])).unwrap(), (1, 1, 0));
        assert_eq!(inertia(&neg_e8()).unwrap(), (0, 8, 0));
        assert_eq!(det(&neg_e8()).unwrap(), BigInt::one());
        assert_eq!(inertia(&m(&[vec![1, 1], vec![1, 1]])).unwrap(), (1, 0, 1));
    }

    #[test]
    fn lattice_basis_of_dependent_rows() {
        let b = lattice_basis(&[ints(&[2, 0]), ints(&[0, 2]), ints(&[1, 1])], 2);
        assert_eq!(b.rows(), 2);
        assert_eq!(det(&b).unwrap().abs(), BigInt::from(2));
    }
}
