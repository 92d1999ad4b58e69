//! Exact linear algebra over a field.
//!
//! Two entry points: [`Matrix::rref`] for explicit dense systems (fraction-free
//! Bareiss forward pass, then back-substitution to reduced echelon form), and
//! [`EchelonBuilder`] for the large sparse systems assembled by the derivation
//! and cohomology solvers, where rows arrive one at a time and only rank and
//! kernel are needed. Both are deterministic: pivots are chosen by position,
//! never by magnitude.

use std::collections::BTreeMap;

use crate::scalar::Scalar;

/// A dense matrix with rational (field) entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<C: Scalar> {
    ncols: usize,
    rows: Vec<Vec<C>>,
}

impl<C: Scalar> Matrix<C> {
    pub fn new(ncols: usize) -> Self {
        Matrix { ncols, rows: Vec::new() }
    }

    pub fn from_rows(ncols: usize, rows: Vec<Vec<C>>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), ncols, "row length mismatch");
        }
        Matrix { ncols, rows }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            ncols,
            rows.iter().map(|r| r.iter().map(|&x| C::int(x)).collect()).collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut rows = vec![vec![C::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = C::one();
        }
        Matrix { ncols: n, rows }
    }

    pub fn push_row(&mut self, row: Vec<C>) {
        assert_eq!(row.len(), self.ncols);
        self.rows.push(row);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &[C] {
        &self.rows[i]
    }

    /// Reduced row echelon form together with the pivot columns.
    ///
    /// Forward elimination is the fraction-free two-term recurrence
    /// `a[i][j] := (p·a[i][j] − a[i][pc]·a[r][j]) / p_prev`, which keeps
    /// entries as division-exact combinations of minors; the back pass then
    /// normalizes pivots to 1 and clears above.
    pub fn rref(&self) -> (Matrix<C>, Vec<usize>) {
        let mut m = self.rows.clone();
        let nrows = m.len();
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        let mut prev_pivot = C::one();
        let mut r = 0;
        for col in 0..self.ncols {
            // Topmost nonzero entry at or below r: deterministic.
            let Some(pr) = (r..nrows).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(r, pr);
            let pivot = m[r][col].clone();
            for i in (r + 1)..nrows {
                let factor = std::mem::replace(&mut m[i][col], C::zero());
                if factor.is_zero() && pivot.is_one() && prev_pivot.is_one() {
                    continue;
                }
                for j in (col + 1)..self.ncols {
                    let v = pivot.clone() * m[i][j].clone() - factor.clone() * m[r][j].clone();
                    m[i][j] = v / prev_pivot.clone();
                }
            }
            pivots.push((r, col));
            prev_pivot = pivot;
            r += 1;
            if r == nrows {
                break;
            }
        }
        // Back-substitution to reduced form.
        for &(pr, pc) in pivots.iter().rev() {
            let inv = C::one() / m[pr][pc].clone();
            for j in pc..self.ncols {
                let v = std::mem::replace(&mut m[pr][j], C::zero());
                m[pr][j] = v * inv.clone();
            }
            for i in 0..pr {
                let factor = std::mem::replace(&mut m[i][pc], C::zero());
                if factor.is_zero() {
                    continue;
                }
                for j in (pc + 1)..self.ncols {
                    let v = m[i][j].clone() - factor.clone() * m[pr][j].clone();
                    m[i][j] = v;
                }
            }
        }
        (Matrix { ncols: self.ncols, rows: m }, pivots.into_iter().map(|(_, c)| c).collect())
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis for the right kernel `{x : Mx = 0}`.
    pub fn kernel_basis(&self) -> SubspaceBasis<C> {
        let (r, pivots) = self.rref();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.ncols];
            for &c in &pivots {
                v[c] = true;
            }
            v
        };
        let mut vectors = Vec::new();
        for free in 0..self.ncols {
            if is_pivot[free] {
                continue;
            }
            let mut x = vec![C::zero(); self.ncols];
            x[free] = C::one();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = -r.rows[row][free].clone();
            }
            vectors.push(x);
        }
        SubspaceBasis::from_vectors(self.ncols, vectors)
    }

    pub fn mul_vec(&self, x: &[C]) -> Vec<C> {
        assert_eq!(x.len(), self.ncols);
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(C::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }
}

/// A subspace given by a reduced-echelon basis.
#[derive(Clone, Debug)]
pub struct SubspaceBasis<C: Scalar> {
    ncols: usize,
    /// Rows in reduced echelon form.
    vectors: Vec<Vec<C>>,
    /// Leading column of each basis vector.
    pivots: Vec<usize>,
}

impl<C: Scalar> SubspaceBasis<C> {
    pub fn empty(ncols: usize) -> Self {
        SubspaceBasis { ncols, vectors: Vec::new(), pivots: Vec::new() }
    }

    /// Echelonize the given spanning set; dependent vectors are dropped.
    pub fn from_vectors(ncols: usize, vectors: Vec<Vec<C>>) -> Self {
        let m = Matrix::from_rows(ncols, vectors);
        let (r, pivots) = m.rref();
        let vectors = r.rows.into_iter().take(pivots.len()).collect();
        SubspaceBasis { ncols, vectors, pivots }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn vectors(&self) -> &[Vec<C>] {
        &self.vectors
    }

    /// Reduce `v` against the basis; the remainder is zero iff `v` is in the
    /// span.
    pub fn reduce(&self, v: &[C]) -> Vec<C> {
        assert_eq!(v.len(), self.ncols, "coordinate dimension mismatch");
        let mut out = v.to_vec();
        for (row, &pc) in self.vectors.iter().zip(&self.pivots) {
            let factor = std::mem::replace(&mut out[pc], C::zero());
            if factor.is_zero() {
                continue;
            }
            for (j, rv) in row.iter().enumerate().skip(pc + 1) {
                if !rv.is_zero() {
                    out[j] = out[j].clone() - factor.clone() * rv.clone();
                }
            }
        }
        out
    }

    pub fn in_span(&self, v: &[C]) -> bool {
        self.reduce(v).iter().all(|c| c.is_zero())
    }
}

/// A sparse row: sorted `(column, coefficient)` pairs, no zeros.
pub type SparseRow<C> = Vec<(usize, C)>;

fn sparse_axpy<C: Scalar>(target: &SparseRow<C>, factor: &C, source: &SparseRow<C>) -> SparseRow<C> {
    // target - factor * source, merging sorted supports
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        match (target.get(i), source.get(j)) {
            (Some((ct, vt)), Some((cs, vs))) if ct == cs => {
                let v = vt.clone() - factor.clone() * vs.clone();
                if !v.is_zero() {
                    out.push((*ct, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ct, vt)), Some((cs, _))) if ct < cs => {
                out.push((*ct, vt.clone()));
                i += 1;
            }
            (Some(_), Some((cs, vs))) => {
                out.push((*cs, -(factor.clone() * vs.clone())));
                j += 1;
            }
            (Some((ct, vt)), None) => {
                out.push((*ct, vt.clone()));
                i += 1;
            }
            (None, Some((cs, vs))) => {
                out.push((*cs, -(factor.clone() * vs.clone())));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Incrementally maintained reduced echelon form for sparse rows.
///
/// Rows are folded in one at a time; the pivot set stays fully reduced, so
/// rank and kernel come out directly. Insertion order does not affect the
/// resulting row space.
#[derive(Clone, Debug)]
pub struct EchelonBuilder<C: Scalar> {
    ncols: usize,
    /// pivot column -> normalized row (leading coefficient 1 at that column)
    pivots: BTreeMap<usize, SparseRow<C>>,
}

impl<C: Scalar> EchelonBuilder<C> {
    pub fn new(ncols: usize) -> Self {
        EchelonBuilder { ncols, pivots: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce a row against the current pivots; the remainder has no support
    /// on pivot columns.
    pub fn reduce(&self, row: SparseRow<C>) -> SparseRow<C> {
        let mut row = row;
        let mut scan = 0;
        while scan < row.len() {
            let (col, coeff) = row[scan].clone();
            if let Some(p) = self.pivots.get(&col) {
                row = sparse_axpy(&row, &coeff, p);
                // entries before `scan` are untouched (pivot rows start at
                // their pivot column), so resume there
            } else {
                scan += 1;
            }
        }
        row
    }

    /// Fold a row in; returns true when it increased the rank.
    pub fn push_row(&mut self, row: SparseRow<C>) -> bool {
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0), "row must be sorted");
        debug_assert!(row.iter().all(|(c, v)| *c < self.ncols && !v.is_zero()));
        let mut row = self.reduce(row);
        if row.is_empty() {
            return false;
        }
        let (lead_col, lead) = row[0].clone();
        let inv = C::one() / lead;
        for (_, v) in row.iter_mut() {
            *v = v.clone() * inv.clone();
        }
        // Keep the stored pivots reduced against the newcomer too.
        let updates: Vec<(usize, C)> = self
            .pivots
            .iter()
            .filter_map(|(pc, prow)| {
                prow.iter()
                    .find(|(c, _)| *c == lead_col)
                    .map(|(_, v)| (*pc, v.clone()))
            })
            .collect();
        for (pc, factor) in updates {
            let prow = self.pivots.get_mut(&pc).unwrap();
            *prow = sparse_axpy(prow, &factor, &row);
        }
        self.pivots.insert(lead_col, row);
        true
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    /// Kernel of the accumulated row space, one basis vector per free column.
    pub fn kernel_basis(&self) -> SubspaceBasis<C> {
        let mut vectors = Vec::new();
        for free in 0..self.ncols {
            if self.pivots.contains_key(&free) {
                continue;
            }
            let mut x = vec![C::zero(); self.ncols];
            x[free] = C::one();
            for (pc, row) in &self.pivots {
                if let Some((_, v)) = row.iter().find(|(c, _)| *c == free) {
                    x[*pc] = -v.clone();
                }
            }
            vectors.push(x);
        }
        // Already independent and echelonized over the free columns.
        SubspaceBasis::from_vectors(self.ncols, vectors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;
    use num_traits::Zero;

    type M = Matrix<Rat>;

    #[test]
    fn rref_identity_is_fixed() {
        let id = M::identity(3);
        let (r, pivots) = id.rref();
        assert_eq!(r, M::identity(3));
        assert_eq!(pivots, vec![0, 1, 2]);
    }

    #[test]
    fn rref_rank_one() {
        let m = M::from_int_rows(&[&[1, 2], &[2, 4]]);
        let (r, pivots) = m.rref();
        assert_eq!(r, M::from_int_rows(&[&[1, 2], &[0, 0]]));
        assert_eq!(pivots, vec![0]);
    }

    #[test]
    fn rref_permutation() {
        let m = M::from_int_rows(&[&[0, 1], &[1, 0]]);
        let (r, _) = m.rref();
        assert_eq!(r, M::identity(2));
    }

    #[test]
    fn rref_is_idempotent() {
        let m = M::from_int_rows(&[&[2, 4, 1], &[3, 7, 0], &[5, 11, 1], &[0, 1, 9]]);
        let (r, p) = m.rref();
        let (r2, p2) = r.rref();
        assert_eq!(r, r2);
        assert_eq!(p, p2);
    }

    #[test]
    fn kernel_examples() {
        // [[1,2],[2,4]] has kernel spanned by (-2, 1)
        let m = M::from_int_rows(&[&[1, 2], &[2, 4]]);
        let k = m.kernel_basis();
        assert_eq!(k.dim(), 1);
        for v in k.vectors() {
            assert!(m.mul_vec(v).iter().all(|c| c.is_zero()));
        }
        assert!(k.in_span(&[Rat::int(-2), Rat::int(1)]));

        assert_eq!(M::identity(4).kernel_basis().dim(), 0);
        assert_eq!(M::from_rows(3, vec![vec![Rat::int(0); 3]; 2]).kernel_basis().dim(), 3);
    }

    #[test]
    fn span_membership() {
        let b = SubspaceBasis::from_vectors(2, vec![vec![Rat::int(1), Rat::int(2)]]);
        assert!(b.in_span(&[Rat::int(2), Rat::int(4)]));
        let b2 = SubspaceBasis::from_vectors(2, vec![vec![Rat::int(0), Rat::int(1)]]);
        assert!(!b2.in_span(&[Rat::int(1), Rat::int(0)]));
        let empty = SubspaceBasis::<Rat>::empty(3);
        assert!(empty.in_span(&[Rat::int(0), Rat::int(0), Rat::int(0)]));
        assert!(!empty.in_span(&[Rat::int(1), Rat::int(0), Rat::int(0)]));
    }

    #[test]
    fn rank_plus_nullity() {
        let m = M::from_int_rows(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 0, 1], &[1, 3, 3, 5]]);
        let rank = m.rank();
        let null = m.kernel_basis().dim();
        assert_eq!(rank + null, 4);
        for v in m.kernel_basis().vectors() {
            assert!(m.mul_vec(v).iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn echelon_builder_matches_dense_rank() {
        let rows: Vec<Vec<i64>> = vec![
            vec![1, 2, 0, 0, 3],
            vec![0, 0, 1, 0, 1],
            vec![1, 2, 1, 0, 4],
            vec![0, 5, 0, 1, 0],
            vec![2, 9, 1, 1, 7],
        ];
        let dense = M::from_rows(
            5,
            rows.iter().map(|r| r.iter().map(|&x| Rat::int(x)).collect()).collect(),
        );
        let mut b = EchelonBuilder::<Rat>::new(5);
        for r in &rows {
            let sparse: SparseRow<Rat> = r
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| (i, Rat::int(x)))
                .collect();
            b.push_row(sparse);
        }
        assert_eq!(b.rank(), dense.rank());
        let kd = dense.kernel_basis();
        let kb = b.kernel_basis();
        assert_eq!(kd.dim(), kb.dim());
        for v in kb.vectors() {
            assert!(dense.mul_vec(v).iter().all(|c| c.is_zero()));
            assert!(kd.in_span(v));
        }
    }
}
