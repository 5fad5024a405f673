//! Integer intersection forms of distinguished bases of vanishing cycles.
//!
//! Every matrix here is symmetric with `-2` on the diagonal (the self-intersection
//! of a vanishing 2-sphere in a complex surface). All arithmetic is checked:
//! an overflow is an error, never a wrap.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::LatticeError;

/// Self-intersection of every vanishing cycle.
pub const SELF_INTERSECTION: i64 = -2;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntersectionMatrix {
    mu: usize,
    entries: Vec<i64>,
}

impl IntersectionMatrix {
    /// Builds a matrix from rows, checking shape, symmetry and the diagonal.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let m = Self::from_rows_unchecked(rows)?;
        m.check()?;
        Ok(m)
    }

    /// Builds a square matrix without checking symmetry or the diagonal.
    /// Used by seed validation, which reports every violation at once.
    pub fn from_rows_unchecked(rows: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let mu = rows.len();
        if mu == 0 {
            return Err(LatticeError::Empty);
        }
        let mut entries = Vec::with_capacity(mu * mu);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != mu {
                return Err(LatticeError::NotSquare { row: i + 1, len: row.len(), mu });
            }
            entries.extend(row);
        }
        Ok(Self { mu, entries })
    }

    /// The diagonal matrix `-2·I` (pairwise orthogonal cycles).
    pub fn orthogonal(mu: usize) -> Self {
        let mut entries = vec![0; mu * mu];
        for i in 0..mu {
            entries[i * mu + i] = SELF_INTERSECTION;
        }
        Self { mu, entries }
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    /// Entry `<Δ_i, Δ_j>` with zero-based indices.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.mu + j]
    }

    #[inline]
    fn set_sym(&mut self, i: usize, j: usize, v: i64) {
        self.entries[i * self.mu + j] = v;
        self.entries[j * self.mu + i] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.mu).map(<[i64]>::to_vec).collect()
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// Every symmetry and diagonal violation, as `(i, j)` pairs (zero-based).
    pub fn violations(&self) -> Vec<MatrixViolation> {
        let mut out = Vec::new();
        for i in 0..self.mu {
            if self.get(i, i) != SELF_INTERSECTION {
                out.push(MatrixViolation::Diagonal { i, value: self.get(i, i) });
            }
            for j in (i + 1)..self.mu {
                if self.get(i, j) != self.get(j, i) {
                    out.push(MatrixViolation::Asymmetric { i, j });
                }
            }
        }
        out
    }

    pub fn check(&self) -> Result<(), LatticeError> {
        match self.violations().into_iter().next() {
            None => Ok(()),
            Some(MatrixViolation::Diagonal { i, value }) => Err(LatticeError::Diagonal { i: i + 1, value }),
            Some(MatrixViolation::Asymmetric { i, j }) => Err(LatticeError::Asymmetric { i: i + 1, j: j + 1 }),
        }
    }

    fn check_index(&self, i: usize) -> Result<(), LatticeError> {
        if i < self.mu {
            Ok(())
        } else {
            Err(LatticeError::IndexOutOfRange { index: i, mu: self.mu })
        }
    }

    /// Square submatrix on the given (zero-based) cycles, in the given order.
    pub fn submatrix(&self, idx: &[usize]) -> Vec<Vec<i64>> {
        idx.iter().map(|&i| idx.iter().map(|&j| self.get(i, j)).collect()).collect()
    }
}

impl TryFrom<Vec<Vec<i64>>> for IntersectionMatrix {
    type Error = LatticeError;
    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self, Self::Error> {
        Self::from_rows(rows)
    }
}

impl From<IntersectionMatrix> for Vec<Vec<i64>> {
    fn from(m: IntersectionMatrix) -> Self {
        m.rows()
    }
}

impl fmt::Display for IntersectionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.entries.chunks(self.mu) {
            let line: Vec<String> = row.iter().map(|v| format!("{v:>2}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixViolation {
    Diagonal { i: usize, value: i64 },
    Asymmetric { i: usize, j: usize },
}

/// Intersection indices of the basic cycles with the real part of the level set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RealString(pub Vec<i64>);

impl RealString {
    pub fn ones(mu: usize) -> Self {
        Self(vec![1; mu])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }
}

/// Congruence fingerprint of a lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormInvariants {
    pub rank: usize,
    pub abs_det: u128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

fn checked(v: Option<i64>) -> Result<i64, LatticeError> {
    v.ok_or(LatticeError::Overflow)
}

/// Substitutes `Δ_i ← Δ_i + s·<Δ_i,Δ_j>·Δ_j` in the form and the real string.
///
/// With `s = +1` this is the reflection in `Δ_j` (an isometry). With `s = -1` and
/// `<Δ_i,Δ_j> ≠ 0` the new self-intersection is `-2 - 4k²`, which is rejected.
pub fn basis_change_add(
    m: &IntersectionMatrix,
    r: &RealString,
    i: usize,
    j: usize,
    s: Sign,
) -> Result<(IntersectionMatrix, RealString), LatticeError> {
    m.check_index(i)?;
    m.check_index(j)?;
    if r.len() != m.mu {
        return Err(LatticeError::DimensionMismatch { matrix: m.mu, real_string: r.len() });
    }
    if i == j {
        return Err(LatticeError::SameCycle { index: i });
    }
    let k = m.get(i, j);
    if k == 0 {
        return Ok((m.clone(), r.clone()));
    }
    let coef = checked(s.as_i64().checked_mul(k))?;
    let mut out = m.clone();
    for l in 0..m.mu {
        if l == i {
            continue;
        }
        let v = checked(m.get(i, l).checked_add(checked(coef.checked_mul(m.get(j, l)))?))?;
        out.set_sym(i, l, v);
    }
    // <Δi + cΔj, Δi + cΔj> = m_ii + 2c·m_ij + c²·m_jj
    let two_c_k = checked(checked(coef.checked_mul(k))?.checked_mul(2))?;
    let c2 = checked(checked(coef.checked_mul(coef))?.checked_mul(m.get(j, j)))?;
    let diag = checked(checked(m.get(i, i).checked_add(two_c_k))?.checked_add(c2))?;
    if diag != SELF_INTERSECTION {
        return Err(LatticeError::NotIsometric { i: i + 1, j: j + 1, diagonal: diag });
    }
    out.entries[i * m.mu + i] = diag;
    let mut rs = r.clone();
    rs.0[i] = checked(r.0[i].checked_add(checked(coef.checked_mul(r.0[j]))?))?;
    Ok((out, rs))
}

/// Relabels cycles: `entries'[i][j] = entries[perm[i]][perm[j]]`, `r'[i] = r[perm[i]]`.
/// `perm` is zero-based.
pub fn reorder(
    m: &IntersectionMatrix,
    r: &RealString,
    perm: &[usize],
) -> Result<(IntersectionMatrix, RealString), LatticeError> {
    let mu = m.mu;
    if perm.len() != mu || r.len() != mu {
        return Err(LatticeError::NotPermutation);
    }
    let mut seen = vec![false; mu];
    for &p in perm {
        if p >= mu || std::mem::replace(&mut seen[p], true) {
            return Err(LatticeError::NotPermutation);
        }
    }
    let mut entries = Vec::with_capacity(mu * mu);
    for &pi in perm {
        for &pj in perm {
            entries.push(m.get(pi, pj));
        }
    }
    let rs = RealString(perm.iter().map(|&p| r.0[p]).collect());
    Ok((IntersectionMatrix { mu, entries }, rs))
}

/// Reverses the orientation of cycle `i`.
pub fn negate_cycle(
    m: &IntersectionMatrix,
    r: &RealString,
    i: usize,
) -> Result<(IntersectionMatrix, RealString), LatticeError> {
    m.check_index(i)?;
    let mut out = m.clone();
    for l in 0..m.mu {
        if l != i {
            out.set_sym(i, l, -m.get(i, l));
        }
    }
    let mut rs = r.clone();
    rs.0[i] = -rs.0[i];
    Ok((out, rs))
}

/// Coordinate vector of a cycle in the basis of a matrix.
pub type Cycle = Vec<i64>;

/// Unit vector of basis cycle `i`.
pub fn unit(mu: usize, i: usize) -> Cycle {
    let mut v = vec![0; mu];
    v[i] = 1;
    v
}

/// `<x, y>` for coordinate vectors.
pub fn pairing(m: &IntersectionMatrix, x: &[i64], y: &[i64]) -> i64 {
    let mu = m.mu;
    let mut acc = 0;
    for (i, &xi) in x.iter().enumerate().filter(|(_, &v)| v != 0) {
        let row = &m.entries[i * mu..(i + 1) * mu];
        acc += xi * row.iter().zip(y).map(|(a, b)| a * b).sum::<i64>();
    }
    acc
}

/// Picard–Lefschetz reflection `x ↦ x + <x,c>·c`.
pub fn reflect(m: &IntersectionMatrix, c: &[i64], x: &[i64]) -> Cycle {
    let k = pairing(m, x, c);
    x.iter().zip(c).map(|(a, b)| a + k * b).collect()
}

/// Reflection in basis cycle `c`, in place.
pub fn reflect_in_basis(m: &IntersectionMatrix, c: usize, x: &mut [i64]) {
    let k: i64 = x.iter().enumerate().map(|(i, &xi)| xi * m.get(i, c)).sum();
    x[c] += k;
}

/// Intersection matrix of a new basis given in old coordinates.
pub fn gram(m: &IntersectionMatrix, basis: &[Cycle]) -> Result<IntersectionMatrix, LatticeError> {
    let mu = basis.len();
    let images: Vec<Cycle> =
        basis.iter().map(|x| (0..m.mu).map(|j| (0..m.mu).map(|i| x[i] * m.get(i, j)).sum()).collect()).collect();
    let mut entries = vec![0; mu * mu];
    for a in 0..mu {
        for b in a..mu {
            let v: i64 = images[a].iter().zip(&basis[b]).map(|(p, q)| p * q).sum();
            entries[a * mu + b] = v;
            entries[b * mu + a] = v;
        }
    }
    let out = IntersectionMatrix { mu, entries };
    out.check()?;
    Ok(out)
}

/// Applies orientation signs: entry `(i,j)` is multiplied by `s_i·s_j`.
pub fn orient(m: &IntersectionMatrix, negate: &[bool]) -> IntersectionMatrix {
    let mut out = m.clone();
    for i in 0..m.mu {
        for j in 0..m.mu {
            if negate[i] != negate[j] {
                out.entries[i * m.mu + j] = -m.get(i, j);
            }
        }
    }
    out
}

/// Rank and absolute determinant by fraction-free (Bareiss) elimination.
pub fn form_invariants(m: &IntersectionMatrix) -> FormInvariants {
    let n = m.mu;
    let mut a: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(m.get(i, j))).collect()).collect();
    let mut rank = 0usize;
    let mut prev: i128 = 1;
    let mut col = 0usize;
    while rank < n && col < n {
        let Some(p) = (rank..n).find(|&r| a[r][col] != 0) else {
            col += 1;
            continue;
        };
        if p != rank {
            a.swap(p, rank);
        }
        for r in (rank + 1)..n {
            for c in (col + 1)..n {
                a[r][c] = (a[r][c] * a[rank][col] - a[r][col] * a[rank][c]) / prev;
            }
            a[r][col] = 0;
        }
        prev = a[rank][col];
        rank += 1;
        col += 1;
    }
    let abs_det = if rank == n { a[n - 1][n - 1].unsigned_abs() } else { 0 };
    FormInvariants { rank, abs_det }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntersectionMatrix {
        IntersectionMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    pub(crate) fn matp8_2() -> IntersectionMatrix {
        m(&[
            &[-2, 0, 0, 1, 1, 1, 0, 0],
            &[0, -2, 0, 1, 1, 0, 1, 0],
            &[0, 0, -2, 1, 1, 0, 0, 1],
            &[1, 1, 1, -2, -2, 0, 0, 0],
            &[1, 1, 1, -2, -2, 0, 0, 0],
            &[1, 0, 0, 0, 0, -2, 0, 0],
            &[0, 1, 0, 0, 0, 0, -2, 0],
            &[0, 0, 1, 0, 0, 0, 0, -2],
        ])
    }

    #[test]
    fn add_on_orthogonal_is_identity() {
        let a = IntersectionMatrix::orthogonal(2);
        let r = RealString(vec![3, -1]);
        for s in [Sign::Plus, Sign::Minus] {
            let (b, rb) = basis_change_add(&a, &r, 0, 1, s).unwrap();
            assert_eq!(b, a);
            assert_eq!(rb, r);
        }
    }

    #[test]
    fn add_reflection_two_cycles() {
        let a = m(&[&[-2, 1], &[1, -2]]);
        let (b, rb) = basis_change_add(&a, &RealString(vec![1, 0]), 0, 1, Sign::Plus).unwrap();
        assert_eq!(b, m(&[&[-2, -1], &[-1, -2]]));
        assert_eq!(rb, RealString(vec![1, 0]));
        assert_eq!(form_invariants(&a).abs_det, 3);
        assert_eq!(form_invariants(&b).abs_det, 3);
    }

    #[test]
    fn add_minus_sign_is_not_an_isometry() {
        let a = m(&[&[-2, 1], &[1, -2]]);
        let err = basis_change_add(&a, &RealString(vec![0, 0]), 0, 1, Sign::Minus).unwrap_err();
        assert!(matches!(err, LatticeError::NotIsometric { diagonal: -6, .. }));
    }

    #[test]
    fn add_rejects_bad_indices() {
        let a = IntersectionMatrix::orthogonal(3);
        let r = RealString::ones(3);
        assert!(matches!(basis_change_add(&a, &r, 0, 3, Sign::Plus), Err(LatticeError::IndexOutOfRange { .. })));
        assert!(matches!(basis_change_add(&a, &r, 1, 1, Sign::Plus), Err(LatticeError::SameCycle { .. })));
    }

    #[test]
    fn reorder_examples() {
        let a = m(&[&[-2, 1, 0], &[1, -2, 1], &[0, 1, -2]]);
        let r = RealString(vec![1, 2, 3]);
        let (b, rb) = reorder(&a, &r, &[1, 0, 2]).unwrap();
        assert_eq!(b, m(&[&[-2, 1, 1], &[1, -2, 0], &[1, 0, -2]]));
        assert_eq!(rb, RealString(vec![2, 1, 3]));
        let (c, _) = reorder(&a, &r, &[0, 1, 2]).unwrap();
        assert_eq!(c, a);

        let p = matp8_2();
        let r8 = RealString::ones(8);
        let swap: Vec<usize> = [1, 0, 2, 3, 4, 5, 6, 7].to_vec();
        let (q, rq) = reorder(&p, &r8, &swap).unwrap();
        let (q2, _) = reorder(&q, &rq, &swap).unwrap();
        assert_eq!(q2, p);
    }

    #[test]
    fn reorder_rejects_non_bijection() {
        let a = IntersectionMatrix::orthogonal(3);
        let r = RealString::ones(3);
        assert_eq!(reorder(&a, &r, &[0, 0, 1]), Err(LatticeError::NotPermutation));
        assert_eq!(reorder(&a, &r, &[0, 1]), Err(LatticeError::NotPermutation));
    }

    #[test]
    fn negate_examples() {
        let a = m(&[&[-2, 1], &[1, -2]]);
        let r = RealString(vec![1, 1]);
        let (b, rb) = negate_cycle(&a, &r, 0).unwrap();
        assert_eq!(b, m(&[&[-2, -1], &[-1, -2]]));
        assert_eq!(rb, RealString(vec![-1, 1]));
        let (c, rc) = negate_cycle(&b, &rb, 0).unwrap();
        assert_eq!((c, rc), (a, r));
    }

    #[test]
    fn invariants_examples() {
        assert_eq!(form_invariants(&m(&[&[-2]])), FormInvariants { rank: 1, abs_det: 2 });
        assert_eq!(form_invariants(&m(&[&[-2, 1], &[1, -2]])), FormInvariants { rank: 2, abs_det: 3 });
        // A3 chain: |det| = 4.
        assert_eq!(form_invariants(&m(&[&[-2, 1, 0], &[1, -2, 1], &[0, 1, -2]])).abs_det, 4);
        // Parabolic P8 lattice: corank 2.
        assert_eq!(form_invariants(&matp8_2()), FormInvariants { rank: 6, abs_det: 0 });
    }

    #[test]
    fn reflection_is_an_involutive_isometry() {
        let p = matp8_2();
        let c = unit(8, 3);
        let x = vec![1, 0, 2, 0, -1, 0, 0, 1];
        let y = vec![0, 1, 0, 1, 0, 1, 0, 0];
        let (hx, hy) = (reflect(&p, &c, &x), reflect(&p, &c, &y));
        assert_eq!(pairing(&p, &hx, &hy), pairing(&p, &x, &y));
        assert_eq!(reflect(&p, &c, &hx), x);
        let mut z = x.clone();
        reflect_in_basis(&p, 3, &mut z);
        assert_eq!(z, hx);
    }

    #[test]
    fn gram_of_unit_basis_is_identity_map() {
        let p = matp8_2();
        let basis: Vec<Cycle> = (0..8).map(|i| unit(8, i)).collect();
        assert_eq!(gram(&p, &basis).unwrap(), p);
        let mut neg = vec![false; 8];
        neg[0] = true;
        let mut flipped = basis.clone();
        flipped[0] = flipped[0].iter().map(|v| -v).collect();
        assert_eq!(gram(&p, &flipped).unwrap(), orient(&p, &neg));
    }

    #[test]
    fn asymmetric_rows_rejected() {
        let err = IntersectionMatrix::from_rows(vec![vec![-2, 1], vec![0, -2]]).unwrap_err();
        assert_eq!(err, LatticeError::Asymmetric { i: 1, j: 2 });
        let err = IntersectionMatrix::from_rows(vec![vec![-1, 0], vec![0, -2]]).unwrap_err();
        assert_eq!(err, LatticeError::Diagonal { i: 1, value: -1 });
    }
}
