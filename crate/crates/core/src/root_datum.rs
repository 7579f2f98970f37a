//! Based root data with Frobenius action: validation, root-system generation,
//! and the convenience builders used by the bundled examples.

use crate::error::{Error, Result};
use crate::linalg::{dot_q, qvec, QMat, Q};
use crate::Limits;
use num_traits::{Signed, Zero};
use serde::Deserialize;
use std::collections::HashSet;

/// Integer matrix helpers (row-major, acting on column vectors).
pub mod imat {
    use super::*;

    pub type IMat = Vec<Vec<i64>>;

    pub fn identity(n: usize) -> IMat {
        (0..n)
            .map(|i| (0..n).map(|j| (i == j) as i64).collect())
            .collect()
    }

    pub fn mul(a: &IMat, b: &IMat) -> IMat {
        let n = a.len();
        let m = b.first().map(|r| r.len()).unwrap_or(0);
        let k = b.len();
        (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum())
                    .collect()
            })
            .collect()
    }

    pub fn apply(a: &IMat, v: &[i64]) -> Vec<i64> {
        a.iter()
            .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
            .collect()
    }

    pub fn transpose(a: &IMat) -> IMat {
        let n = a.len();
        let m = a.first().map(|r| r.len()).unwrap_or(0);
        (0..m).map(|j| (0..n).map(|i| a[i][j]).collect()).collect()
    }

    /// Inverse of a matrix that is invertible over Z; None otherwise.
    pub fn inverse_unimodular(a: &IMat) -> Option<IMat> {
        let n = a.len();
        let rows: Vec<Vec<Q>> = a.iter().map(|r| qvec(r)).collect();
        let m = QMat::from_rows(rows).ok()?;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let e: Vec<Q> = (0..n)
                .map(|i| {
                    if i == j {
                        crate::linalg::qi(1)
                    } else {
                        Q::zero()
                    }
                })
                .collect();
            let x = m.solve(&e).ok()??;
            if x.iter().any(|c| !c.is_integer()) {
                return None;
            }
            cols.push(x);
        }
        Some(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| cols[j][i].to_integer().try_into().unwrap())
                        .collect()
                })
                .collect(),
        )
    }
}

use imat::IMat;

/// A based root datum over F_p: lattices X*(T) = X_*(T) = Z^n with the
/// standard pairing, simple (co)roots, and the finite-order Frobenius action.
#[derive(Clone, Debug)]
pub struct BasedRootDatum {
    pub p: u64,
    pub rank: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
    pub sigma_char: IMat,
    /// Contragredient action on cocharacters; derived as inverse-transpose.
    pub sigma_cochar: IMat,
}

/// The generated root system: all roots with their coroots, split into
/// positives by nonnegativity of the coordinates over the simple roots.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub positive_roots: Vec<Vec<i64>>,
    pub all_roots: Vec<Vec<i64>>,
    pairs: Vec<(Vec<i64>, Vec<i64>)>,
}

impl RootSystem {
    pub fn coroot_of(&self, root: &[i64]) -> Option<&Vec<i64>> {
        self.pairs.iter().find(|(r, _)| r == root).map(|(_, c)| c)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn pair(chi: &[i64], cochar: &[i64]) -> i64 {
    chi.iter().zip(cochar).map(|(a, b)| a * b).sum()
}

impl BasedRootDatum {
    /// Builds and validates. `sigma_char` acts on X*(T) as a matrix on column
    /// vectors; the cocharacter action is derived as its inverse-transpose.
    pub fn new(
        p: u64,
        rank: usize,
        simple_roots: Vec<Vec<i64>>,
        simple_coroots: Vec<Vec<i64>>,
        sigma_char: IMat,
    ) -> Result<Self> {
        let sigma_cochar = imat::inverse_unimodular(&imat::transpose(&sigma_char))
            .ok_or_else(|| Error::input("sigma_char is not invertible over Z"))?;
        let datum = BasedRootDatum {
            p,
            rank,
            simple_roots,
            simple_coroots,
            sigma_char,
            sigma_cochar,
        };
        datum.validate()?;
        Ok(datum)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::input(format!("p = {} is not prime", self.p)));
        }
        if self.simple_roots.len() != self.simple_coroots.len() {
            return Err(Error::input("simple roots and coroots differ in number"));
        }
        let s = self.simple_roots.len();
        for (i, v) in self
            .simple_roots
            .iter()
            .chain(&self.simple_coroots)
            .enumerate()
        {
            if v.len() != self.rank {
                return Err(Error::input(format!(
                    "(co)root {} has wrong length",
                    i % s.max(1)
                )));
            }
        }
        if self.sigma_char.len() != self.rank
            || self.sigma_char.iter().any(|r| r.len() != self.rank)
        {
            return Err(Error::input("sigma_char is not a rank x rank matrix"));
        }

        // Cartan matrix axioms, reported with the offending index pair.
        for i in 0..s {
            for j in 0..s {
                let c = pair(&self.simple_roots[i], &self.simple_coroots[j]);
                if i == j && c != 2 {
                    return Err(Error::input(format!(
                        "Cartan diagonal: <alpha_{}, alpha_{}^> = {} != 2",
                        i + 1,
                        j + 1,
                        c
                    )));
                }
                if i != j && c > 0 {
                    return Err(Error::input(format!(
                        "Cartan off-diagonal positive at ({}, {}): {}",
                        i + 1,
                        j + 1,
                        c
                    )));
                }
                if i != j {
                    let ct = pair(&self.simple_roots[j], &self.simple_coroots[i]);
                    if (c == 0) != (ct == 0) {
                        return Err(Error::input(format!(
                            "Cartan zero pattern asymmetric at ({}, {})",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }

        // Simple roots linearly independent (needed for the positivity test).
        let m = QMat::from_rows(self.simple_roots.iter().map(|r| qvec(r)).collect())?;
        if m.rank() != s {
            return Err(Error::input("simple roots are linearly dependent"));
        }

        // sigma permutes the simple roots, compatibly on both sides.
        let perm = self.sigma_permutation()?;
        for (i, &pi) in perm.iter().enumerate() {
            let img = imat::apply(&self.sigma_cochar, &self.simple_coroots[i]);
            if img != self.simple_coroots[pi] {
                return Err(Error::input(format!(
                    "sigma_cochar does not send alpha_{}^ to alpha_{}^",
                    i + 1,
                    pi + 1
                )));
            }
        }

        // Finite order.
        let mut power = self.sigma_char.clone();
        let id = imat::identity(self.rank);
        let mut ord = 1;
        while power != id {
            power = imat::mul(&self.sigma_char, &power);
            ord += 1;
            if ord > 10_000 {
                return Err(Error::input("sigma_char does not have finite order"));
            }
        }
        Ok(())
    }

    /// The permutation pi with sigma(alpha_i) = alpha_{pi(i)}.
    pub fn sigma_permutation(&self) -> Result<Vec<usize>> {
        let mut perm = Vec::with_capacity(self.simple_roots.len());
        for (i, alpha) in self.simple_roots.iter().enumerate() {
            let img = imat::apply(&self.sigma_char, alpha);
            let j = self
                .simple_roots
                .iter()
                .position(|a| *a == img)
                .ok_or_else(|| {
                    Error::input(format!(
                        "sigma_char does not permute the simple roots (alpha_{})",
                        i + 1
                    ))
                })?;
            perm.push(j);
        }
        let mut seen = vec![false; perm.len()];
        for &j in &perm {
            if seen[j] {
                return Err(Error::input(
                    "sigma_char permutation is not injective on simple roots",
                ));
            }
            seen[j] = true;
        }
        Ok(perm)
    }

    pub fn frobenius_char(&self, lambda: &[i64]) -> Vec<i64> {
        imat::apply(&self.sigma_char, lambda)
    }

    pub fn frobenius_cochar(&self, delta: &[i64]) -> Vec<i64> {
        imat::apply(&self.sigma_cochar, delta)
    }

    pub fn frobenius_char_q(&self, lambda: &[Q]) -> Vec<Q> {
        self.sigma_char
            .iter()
            .map(|row| dot_q(&qvec(row), lambda))
            .collect()
    }

    pub fn frobenius_cochar_q(&self, delta: &[Q]) -> Vec<Q> {
        self.sigma_cochar
            .iter()
            .map(|row| dot_q(&qvec(row), delta))
            .collect()
    }

    /// Simple reflection s_{alpha_i} on X*(T).
    pub fn reflection_char(&self, i: usize) -> IMat {
        let n = self.rank;
        let alpha = &self.simple_roots[i];
        let cov = &self.simple_coroots[i];
        let mut m = imat::identity(n);
        for r in 0..n {
            for c in 0..n {
                m[r][c] -= alpha[r] * cov[c];
            }
        }
        m
    }

    /// Generates the full root system by closing the simple roots under the
    /// simple reflections, carrying coroots along.
    pub fn generate_roots(&self, limits: &Limits) -> Result<RootSystem> {
        let s = self.simple_roots.len();
        let mut pairs: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
        for i in 0..s {
            queue.push((self.simple_roots[i].clone(), self.simple_coroots[i].clone()));
        }
        while let Some((root, coroot)) = queue.pop() {
            if !seen.insert(root.clone()) {
                continue;
            }
            if seen.len() > limits.enumeration {
                return Err(Error::resource(format!(
                    "more than {} roots generated",
                    limits.enumeration
                )));
            }
            for i in 0..s {
                let c = pair(&root, &self.simple_coroots[i]);
                let new_root: Vec<i64> = root
                    .iter()
                    .zip(&self.simple_roots[i])
                    .map(|(x, a)| x - c * a)
                    .collect();
                let cp = pair(&self.simple_roots[i], &coroot);
                let new_coroot: Vec<i64> = coroot
                    .iter()
                    .zip(&self.simple_coroots[i])
                    .map(|(x, a)| x - cp * a)
                    .collect();
                if !seen.contains(&new_root) {
                    queue.push((new_root, new_coroot));
                }
            }
            pairs.push((root, coroot));
        }
        pairs.sort();
        let simple =
            QMat::from_rows(self.simple_roots.iter().map(|r| qvec(r)).collect())?.transpose();
        let mut positive = Vec::new();
        let mut all = Vec::new();
        for (root, _) in &pairs {
            let coords = simple.solve(&qvec(root))?.ok_or_else(|| {
                Error::defect("generated root outside the span of the simple roots")
            })?;
            let nonneg = coords.iter().all(|c| !c.is_negative());
            let nonpos = coords.iter().all(|c| !c.is_positive());
            if !nonneg && !nonpos {
                return Err(Error::defect(
                    "generated root with mixed signs over the simple roots",
                ));
            }
            if nonneg {
                positive.push(root.clone());
            }
            all.push(root.clone());
        }
        Ok(RootSystem {
            positive_roots: positive,
            all_roots: all,
            pairs,
        })
    }

    /// Block direct sum of two data over the same prime.
    pub fn direct_sum(&self, other: &BasedRootDatum) -> Result<BasedRootDatum> {
        if self.p != other.p {
            return Err(Error::input("direct sum requires the same prime p"));
        }
        let n1 = self.rank;
        let n2 = other.rank;
        let pad1 = |v: &[i64]| {
            let mut w = v.to_vec();
            w.extend(std::iter::repeat(0).take(n2));
            w
        };
        let pad2 = |v: &[i64]| {
            let mut w = vec![0; n1];
            w.extend_from_slice(v);
            w
        };
        let mut roots: Vec<Vec<i64>> = self.simple_roots.iter().map(|v| pad1(v)).collect();
        roots.extend(other.simple_roots.iter().map(|v| pad2(v)));
        let mut coroots: Vec<Vec<i64>> = self.simple_coroots.iter().map(|v| pad1(v)).collect();
        coroots.extend(other.simple_coroots.iter().map(|v| pad2(v)));
        let mut sigma = vec![vec![0i64; n1 + n2]; n1 + n2];
        for i in 0..n1 {
            for j in 0..n1 {
                sigma[i][j] = self.sigma_char[i][j];
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                sigma[n1 + i][n1 + j] = other.sigma_char[i][j];
            }
        }
        BasedRootDatum::new(self.p, n1 + n2, roots, coroots, sigma)
    }
}

/// GL_n with the diagonal torus: X*(T) = Z^n, alpha_i = e_i - e_{i+1},
/// split Frobenius.
pub fn gl_n(p: u64, n: usize) -> Result<BasedRootDatum> {
    let mut roots = Vec::new();
    for i in 0..n - 1 {
        let mut v = vec![0i64; n];
        v[i] = 1;
        v[i + 1] = -1;
        roots.push(v);
    }
    BasedRootDatum::new(p, n, roots.clone(), roots, imat::identity(n))
}

/// The rank-3 unitary group split by F_{p^2}: GL_3 lattice data with the
/// order-2 twisted Frobenius lambda -> -(lambda_3, lambda_2, lambda_1).
pub fn u3_inert(p: u64) -> Result<BasedRootDatum> {
    let gl = gl_n(p, 3)?;
    let sigma = vec![vec![0, 0, -1], vec![0, -1, 0], vec![-1, 0, 0]];
    BasedRootDatum::new(p, 3, gl.simple_roots, gl.simple_coroots, sigma)
}

/// Weil restriction of SL_2 over F_{p^m}: m copies of the rank-1 datum
/// (alpha = 2, alpha^ = 1) with the cyclic block permutation as sigma.
pub fn weil_sl2(p: u64, m: usize) -> Result<BasedRootDatum> {
    let mut roots = Vec::new();
    let mut coroots = Vec::new();
    for i in 0..m {
        let mut a = vec![0i64; m];
        a[i] = 2;
        roots.push(a);
        let mut c = vec![0i64; m];
        c[i] = 1;
        coroots.push(c);
    }
    let mut sigma = vec![vec![0i64; m]; m];
    for i in 0..m {
        sigma[(i + 1) % m][i] = 1;
    }
    BasedRootDatum::new(p, m, roots, coroots, sigma)
}

/// Split symplectic rank 2: Delta = {(1,-1), (0,2)}, Delta^ = {(1,-1), (0,1)}.
pub fn c2(p: u64) -> Result<BasedRootDatum> {
    BasedRootDatum::new(
        p,
        2,
        vec![vec![1, -1], vec![0, 2]],
        vec![vec![1, -1], vec![0, 1]],
        imat::identity(2),
    )
}

/// On-disk datum format. All integers; rejected unless the invariants hold.
#[derive(Debug, Deserialize)]
pub struct DatumFile {
    pub p: u64,
    pub rank: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
    /// Row-major rank x rank matrix acting on X*(T).
    pub sigma_char: Vec<Vec<i64>>,
    pub mu: Vec<i64>,
    #[serde(default)]
    pub triviality_sublattice: Option<Vec<Vec<i64>>>,
}

impl DatumFile {
    pub fn parse(text: &str) -> Result<DatumFile> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("datum file: {e}")))
    }

    pub fn to_datum(&self) -> Result<BasedRootDatum> {
        BasedRootDatum::new(
            self.p,
            self.rank,
            self.simple_roots.clone(),
            self.simple_coroots.clone(),
            self.sigma_char.clone(),
        )
    }
}
