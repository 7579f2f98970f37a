//! Exact rational and integer linear algebra: Gaussian elimination over Q,
//! Smith/Hermite normal forms over Z, saturated kernel lattices.
//!
//! No floating point anywhere; every result is exact.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Z = BigInt;
pub type Q = BigRational;

pub fn zi(n: i64) -> Z {
    BigInt::from(n)
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qz(n: Z) -> Q {
    BigRational::from_integer(n)
}

pub fn q_ratio(num: i64, den: i64) -> Q {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn qvec(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| qi(x)).collect()
}

pub fn zvec(v: &[i64]) -> Vec<Z> {
    v.iter().map(|&x| zi(x)).collect()
}

pub fn dot_q(a: &[Q], b: &[Q]) -> Q {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_zq(a: &[Z], b: &[Q]) -> Q {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| qz(x.clone()) * y).sum()
}

pub fn dot_z(a: &[Z], b: &[Z]) -> Z {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add_q(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_q(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_q(c: &Q, a: &[Q]) -> Vec<Q> {
    a.iter().map(|x| c * x).collect()
}

pub fn neg_z(a: &[Z]) -> Vec<Z> {
    a.iter().map(|x| -x).collect()
}

/// Scales a rational vector to a primitive integer vector with the same
/// direction (positive multiple). Zero maps to zero.
pub fn primitive_from_q(v: &[Q]) -> Vec<Z> {
    if v.iter().all(|x| x.is_zero()) {
        return vec![Z::zero(); v.len()];
    }
    let mut den = Z::one();
    for x in v {
        den = den.lcm(x.denom());
    }
    let ints: Vec<Z> = v
        .iter()
        .map(|x| (x * qz(den.clone())).to_integer())
        .collect();
    primitive_z(&ints)
}

/// Divides an integer vector by the gcd of its entries (content 1); keeps sign.
pub fn primitive_z(v: &[Z]) -> Vec<Z> {
    let mut g = Z::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn zvec_to_q(v: &[Z]) -> Vec<Q> {
    v.iter().map(|x| qz(x.clone())).collect()
}

/// A rectangular matrix over Q. Rows all have equal length.
#[derive(Clone, Debug, PartialEq)]
pub struct QMat {
    rows: Vec<Vec<Q>>,
    ncols: usize,
}

impl QMat {
    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::input("matrix rows have unequal lengths"));
        }
        Ok(QMat { rows, ncols })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Q>> = rows.iter().map(|r| qvec(r)).collect();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        QMat { rows, ncols }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Q::one() } else { Q::zero() })
                    .collect()
            })
            .collect();
        QMat { rows, ncols: n }
    }

    pub fn zero(r: usize, c: usize) -> Self {
        QMat {
            rows: vec![vec![Q::zero(); c]; r],
            ncols: c,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn transpose(&self) -> QMat {
        let rows = (0..self.ncols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        QMat {
            rows,
            ncols: self.nrows(),
        }
    }

    /// Row echelon form; returns (echelon rows, pivot column per row).
    fn echelon(&self) -> (Vec<Vec<Q>>, Vec<usize>) {
        let mut m = self.rows.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.ncols {
            let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            let inv = m[row][col].recip();
            for x in m[row].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..m.len() {
                if i != row && !m[i][col].is_zero() {
                    let f = m[i][col].clone();
                    for j in 0..self.ncols {
                        let d = &m[row][j] * &f;
                        m[i][j] = &m[i][j] - d;
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == m.len() {
                break;
            }
        }
        (m, pivots)
    }

    /// Exact rank over Q.
    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Solves A x = b exactly. Returns None when inconsistent. Free variables
    /// are set to zero, so the answer is deterministic.
    pub fn solve(&self, b: &[Q]) -> Result<Option<Vec<Q>>> {
        if b.len() != self.nrows() {
            return Err(Error::input(format!(
                "solve: matrix has {} rows but right-hand side has {} entries",
                self.nrows(),
                b.len()
            )));
        }
        // Eliminate on the augmented matrix.
        let mut aug = self.rows.clone();
        for (r, bv) in aug.iter_mut().zip(b) {
            r.push(bv.clone());
        }
        let aug = QMat {
            rows: aug,
            ncols: self.ncols + 1,
        };
        let (ech, pivots) = aug.echelon();
        // Inconsistent iff a pivot lands in the augmented column.
        if pivots.last() == Some(&self.ncols) {
            return Ok(None);
        }
        let mut x = vec![Q::zero(); self.ncols];
        for (r, &col) in pivots.iter().enumerate() {
            x[col] = ech[r][self.ncols].clone();
        }
        Ok(Some(x))
    }

    /// A rational basis of the right kernel {x : A x = 0}.
    pub fn kernel_rational(&self) -> Vec<Vec<Q>> {
        let (ech, pivots) = self.echelon();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.ncols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        for free in 0..self.ncols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![Q::zero(); self.ncols];
            v[free] = Q::one();
            for (r, &col) in pivots.iter().enumerate() {
                v[col] = -ech[r][free].clone();
            }
            basis.push(v);
        }
        basis
    }
}

/// Smith-style reduction tracking only the column transform W, so that
/// R * A * W = D for some invertible R and D in (partial) diagonal form.
/// kernel(A) is then spanned by the columns of W at D's zero columns.
fn smith_cols(mut a: Vec<Vec<Z>>, ncols: usize) -> (Vec<Vec<Z>>, Vec<Vec<Z>>) {
    let nrows = a.len();
    // w starts as identity; every column op on `a` is mirrored on `w`.
    let mut w: Vec<Vec<Z>> = (0..ncols)
        .map(|i| {
            (0..ncols)
                .map(|j| if i == j { Z::one() } else { Z::zero() })
                .collect()
        })
        .collect();

    fn swap_cols(m: &mut [Vec<Z>], i: usize, j: usize) {
        for r in m.iter_mut() {
            r.swap(i, j);
        }
    }
    // col_j -= f * col_i
    fn addmul_col(m: &mut [Vec<Z>], j: usize, i: usize, f: &Z) {
        for r in m.iter_mut() {
            let d = &r[i] * f;
            r[j] = &r[j] - d;
        }
    }

    let mut t = 0usize;
    while t < nrows && t < ncols {
        let mut pivot = None;
        'outer: for i in t..nrows {
            for j in t..ncols {
                if !a[i][j].is_zero() {
                    pivot = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut w, t, pj);

        // Clear the pivot row with column ops (tracked) and the pivot column
        // with row ops (untracked; row ops do not change the kernel). Each
        // swap strictly shrinks |pivot|, so the loop terminates.
        loop {
            for j in (t + 1)..ncols {
                while !a[t][j].is_zero() {
                    let f = a[t][j].div_floor(&a[t][t]);
                    if !f.is_zero() {
                        addmul_col(&mut a, j, t, &f);
                        addmul_col(&mut w, j, t, &f);
                    }
                    if !a[t][j].is_zero() {
                        swap_cols(&mut a, t, j);
                        swap_cols(&mut w, t, j);
                    }
                }
            }
            for i in (t + 1)..nrows {
                while !a[i][t].is_zero() {
                    let f = a[i][t].div_floor(&a[t][t]);
                    if !f.is_zero() {
                        let src = a[t].clone();
                        for (x, y) in a[i].iter_mut().zip(src.iter()) {
                            let d = y * &f;
                            *x = &*x - d;
                        }
                    }
                    if !a[i][t].is_zero() {
                        a.swap(t, i);
                    }
                }
            }
            let row_clear = ((t + 1)..ncols).all(|j| a[t][j].is_zero());
            let col_clear = ((t + 1)..nrows).all(|i| a[i][t].is_zero());
            if row_clear && col_clear {
                break;
            }
        }
        t += 1;
    }
    (a, w)
}

/// Smith reduction with the column transform exposed; see `smith_cols`.
pub fn smith_cols_public(a: Vec<Vec<Z>>, ncols: usize) -> (Vec<Vec<Z>>, Vec<Vec<Z>>) {
    smith_cols(a, ncols)
}

/// An integral basis of {x in Z^n : A x = 0}, saturated: every integral
/// solution is an integer combination of the basis.
pub fn kernel_basis(a: &QMat) -> Vec<Vec<Z>> {
    let ncols = a.ncols();
    if ncols == 0 {
        return Vec::new();
    }
    // Clear denominators row by row; kernel is unchanged.
    let int_rows: Vec<Vec<Z>> = a
        .rows()
        .iter()
        .map(|r| {
            let mut den = Z::one();
            for x in r {
                den = den.lcm(x.denom());
            }
            r.iter()
                .map(|x| (x * qz(den.clone())).to_integer())
                .collect()
        })
        .collect();
    let (d, w) = smith_cols(int_rows, ncols);
    let nrows = d.len();
    let mut basis = Vec::new();
    for j in 0..ncols {
        let zero_col = (0..nrows).all(|i| d[i][j].is_zero());
        if zero_col {
            basis.push(w.iter().map(|r| r[j].clone()).collect::<Vec<Z>>());
        }
    }
    basis
}

/// Row-style Hermite normal form: echelon over Z with positive pivots and
/// entries above each pivot reduced into [0, pivot). Canonical for a lattice.
pub fn hnf(rows: &[Vec<Z>]) -> Vec<Vec<Z>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<Z>> = rows.to_vec();
    let mut row = 0;
    for col in 0..ncols {
        // gcd the column below `row` into a single entry
        loop {
            let mut idx: Vec<usize> = (row..m.len()).filter(|&i| !m[i][col].is_zero()).collect();
            if idx.len() <= 1 {
                break;
            }
            idx.sort_by(|&i, &j| m[i][col].abs().cmp(&m[j][col].abs()));
            let small = idx[0];
            for &i in &idx[1..] {
                let f = m[i][col].div_floor(&m[small][col]);
                if !f.is_zero() {
                    for j in 0..ncols {
                        let d = &m[small][j] * &f;
                        m[i][j] = &m[i][j] - d;
                    }
                }
            }
        }
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        if m[row][col].is_negative() {
            for x in m[row].iter_mut() {
                *x = -x.clone();
            }
        }
        // reduce entries above the pivot
        for i in 0..row {
            let f = m[i][col].div_floor(&m[row][col]);
            if !f.is_zero() {
                for j in 0..ncols {
                    let d = &m[row][j] * &f;
                    m[i][j] = &m[i][j] - d;
                }
            }
        }
        row += 1;
        if row == m.len() {
            break;
        }
    }
    m.truncate(row);
    m
}

/// A sublattice of Z^n given by an HNF-canonical row basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    ambient_rank: usize,
    basis: Vec<Vec<Z>>,
}

impl Lattice {
    pub fn from_rows(ambient_rank: usize, rows: Vec<Vec<Z>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != ambient_rank) {
            return Err(Error::input("lattice basis vector of wrong length"));
        }
        let n = rows.len();
        let basis = hnf(&rows);
        if basis.len() != n {
            return Err(Error::input("lattice basis vectors are linearly dependent"));
        }
        Ok(Lattice {
            ambient_rank,
            basis,
        })
    }

    pub fn full(n: usize) -> Self {
        let basis = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Z::one() } else { Z::zero() })
                    .collect()
            })
            .collect();
        Lattice {
            ambient_rank: n,
            basis,
        }
    }

    pub fn zero(n: usize) -> Self {
        Lattice {
            ambient_rank: n,
            basis: Vec::new(),
        }
    }

    /// The saturated lattice {x in Z^n : A x = 0}.
    pub fn saturated_kernel(a: &QMat) -> Self {
        let basis = kernel_basis(a);
        Lattice {
            ambient_rank: a.ncols(),
            basis: hnf(&basis),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn basis(&self) -> &[Vec<Z>] {
        &self.basis
    }

    /// Integral membership (exact divisibility along the HNF pivots).
    pub fn contains(&self, v: &[Z]) -> bool {
        self.coords(v).is_some()
    }

    /// Integer coordinates of v over the basis, when they exist.
    pub fn coords(&self, v: &[Z]) -> Option<Vec<Z>> {
        if v.len() != self.ambient_rank {
            return None;
        }
        let mut v = v.to_vec();
        let mut coords = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            let pivot_col = b.iter().position(|x| !x.is_zero())?;
            let (q, r) = v[pivot_col].div_rem(&b[pivot_col]);
            if !r.is_zero() {
                return None;
            }
            for j in 0..self.ambient_rank {
                let d = &b[j] * &q;
                v[j] = &v[j] - d;
            }
            coords.push(q);
        }
        if v.iter().all(|x| x.is_zero()) {
            Some(coords)
        } else {
            None
        }
    }

    /// Rational coordinates over the basis (membership in the Q-span).
    pub fn coords_rational(&self, v: &[Q]) -> Option<Vec<Q>> {
        if v.len() != self.ambient_rank {
            return None;
        }
        if self.basis.is_empty() {
            return if v.iter().all(|x| x.is_zero()) {
                Some(Vec::new())
            } else {
                None
            };
        }
        let bt = QMat::from_rows(self.basis.iter().map(|b| zvec_to_q(b)).collect())
            .expect("rectangular")
            .transpose();
        // basis vectors are independent, so the solution is unique when it exists
        bt.solve(v).expect("dimensions agree")
    }

    /// Ambient vector from basis coordinates.
    pub fn from_coords(&self, coords: &[Z]) -> Vec<Z> {
        assert_eq!(coords.len(), self.basis.len());
        let mut v = vec![Z::zero(); self.ambient_rank];
        for (c, b) in coords.iter().zip(&self.basis) {
            for j in 0..self.ambient_rank {
                let d = b[j].clone() * c;
                v[j] = &v[j] + d;
            }
        }
        v
    }
}
