//! Derived invariants of a cocharacter datum (G, mu): the type I of the
//! parabolic, Delta^P, the orbit lengths d_alpha, the integers m_alpha, the
//! quasi-cocharacters delta_alpha, and the sublattices X*(L), X*(G).

use crate::error::{Error, Result};
use crate::linalg::{dot_zq, qvec, qz, sub_q, zi, Lattice, QMat, Q, Z};
use crate::root_datum::{pair, BasedRootDatum};
use num_traits::{One, Zero};

#[derive(Clone, Debug)]
pub struct ZipDatum {
    pub datum: BasedRootDatum,
    pub mu: Vec<i64>,
    /// Indices of the simple roots orthogonal to mu (type of the Levi).
    pub i_set: Vec<usize>,
    /// The complementary indices.
    pub delta_p: Vec<usize>,
    /// d[alpha]: sigma-orbit length of alpha, for alpha in Delta^P.
    d: Vec<usize>,
    /// m[alpha]: first m >= 1 with sigma^{-m}(alpha) outside I.
    m: Vec<usize>,
    /// delta[alpha]: the rational solution of delta - p sigma(delta) = alpha^.
    delta: Vec<Vec<Q>>,
    pub xl: Lattice,
    pub xg: Lattice,
}

pub fn build_zip_datum(datum: &BasedRootDatum, mu: &[i64]) -> Result<ZipDatum> {
    datum.validate()?;
    if mu.len() != datum.rank {
        return Err(Error::input("mu has the wrong length"));
    }
    let s = datum.simple_roots.len();
    let mut i_set = Vec::new();
    let mut delta_p = Vec::new();
    for (i, alpha) in datum.simple_roots.iter().enumerate() {
        let v = pair(alpha, mu);
        if v < 0 {
            return Err(Error::input(format!(
                "<alpha_{}, mu> = {} < 0: normalize mu into the dominant chamber",
                i + 1,
                v
            )));
        }
        if v == 0 {
            i_set.push(i);
        } else {
            delta_p.push(i);
        }
    }

    let perm = datum.sigma_permutation()?;
    let mut inv_perm = vec![0usize; s];
    for (i, &j) in perm.iter().enumerate() {
        inv_perm[j] = i;
    }

    let mut d = Vec::new();
    let mut m = Vec::new();
    let mut delta = Vec::new();
    for &a in &delta_p {
        // sigma-orbit length of alpha among the simple roots
        let mut da = 1;
        let mut j = perm[a];
        while j != a {
            j = perm[j];
            da += 1;
        }
        d.push(da);

        // first m >= 1 with sigma^{-m}(alpha) outside I
        let mut ma = 1;
        let mut j = inv_perm[a];
        while i_set.contains(&j) {
            j = inv_perm[j];
            ma += 1;
        }
        m.push(ma);

        // closed form: delta = -(1/(p^d - 1)) sum_{k<d} p^k sigma^k(alpha^)
        let p = zi(datum.p as i64);
        let mut acc = vec![Q::zero(); datum.rank];
        let mut cur: Vec<Q> = qvec(&datum.simple_coroots[a]);
        let mut pk = Z::one();
        for _ in 0..da {
            for (t, c) in acc.iter_mut().zip(&cur) {
                *t = &*t + c * qz(pk.clone());
            }
            cur = datum.frobenius_cochar_q(&cur);
            pk = &pk * &p;
        }
        let denom = qz(pk - Z::one()); // p^d - 1
        let delta_a: Vec<Q> = acc.iter().map(|x| -(x / &denom)).collect();

        // cross-check by substitution; a mismatch here is a sign-convention bug
        let sigma_delta = datum.frobenius_cochar_q(&delta_a);
        let lhs = sub_q(
            &delta_a,
            &sigma_delta
                .iter()
                .map(|x| x * qz(p.clone()))
                .collect::<Vec<Q>>(),
        );
        if lhs != qvec(&datum.simple_coroots[a]) {
            return Err(Error::defect(format!(
                "delta_alpha for alpha_{} fails delta - p sigma(delta) = alpha^",
                a + 1
            )));
        }
        delta.push(delta_a);
    }

    let pairing_rows = |idx: &[usize]| -> QMat {
        if idx.is_empty() {
            // no constraints: the kernel is the full lattice
            return QMat::zero(1, datum.rank);
        }
        QMat::from_rows(
            idx.iter()
                .map(|&i| qvec(&datum.simple_coroots[i]))
                .collect(),
        )
        .expect("rectangular")
    };
    let xl = Lattice::saturated_kernel(&pairing_rows(&i_set));
    let xg = Lattice::saturated_kernel(&pairing_rows(&(0..s).collect::<Vec<_>>()));
    if xl.rank() - xg.rank() != delta_p.len() {
        return Err(Error::defect("rank(X*(L)) - rank(X*(G)) != |Delta^P|"));
    }

    Ok(ZipDatum {
        datum: datum.clone(),
        mu: mu.to_vec(),
        i_set,
        delta_p,
        d,
        m,
        delta,
        xl,
        xg,
    })
}

impl ZipDatum {
    fn delta_p_position(&self, alpha: usize) -> Result<usize> {
        self.delta_p
            .iter()
            .position(|&a| a == alpha)
            .ok_or_else(|| Error::input(format!("alpha_{} is not in Delta^P", alpha + 1)))
    }

    pub fn d_alpha(&self, alpha: usize) -> Result<usize> {
        Ok(self.d[self.delta_p_position(alpha)?])
    }

    pub fn m_alpha(&self, alpha: usize) -> Result<usize> {
        Ok(self.m[self.delta_p_position(alpha)?])
    }

    pub fn delta_alpha(&self, alpha: usize) -> Result<&[Q]> {
        Ok(&self.delta[self.delta_p_position(alpha)?])
    }

    /// All (alpha index, delta_alpha) pairs in Delta^P order.
    pub fn deltas(&self) -> impl Iterator<Item = (usize, &[Q])> {
        self.delta_p
            .iter()
            .copied()
            .zip(self.delta.iter().map(|v| v.as_slice()))
    }

    /// <lambda, delta_alpha> for integral lambda.
    pub fn pair_delta(&self, lambda: &[i64], alpha: usize) -> Result<Q> {
        let d = self.delta_alpha(alpha)?;
        Ok(dot_zq(
            &lambda.iter().map(|&x| zi(x)).collect::<Vec<Z>>(),
            d,
        ))
    }

    pub fn in_xl(&self, lambda: &[i64]) -> bool {
        self.xl
            .contains(&lambda.iter().map(|&x| zi(x)).collect::<Vec<Z>>())
    }

    /// X*(L): characters orthogonal to the coroots of I.
    pub fn xstar_l(&self) -> &Lattice {
        &self.xl
    }

    /// X*(G): characters orthogonal to all simple coroots.
    pub fn xstar_g(&self) -> &Lattice {
        &self.xg
    }
}
