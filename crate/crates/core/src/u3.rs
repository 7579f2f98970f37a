//! The rank-3 worked example: exact section-space dimensions, zip-cone
//! membership, generator decomposition, determinant shifts, and the split
//! correspondence. All integer arithmetic, exact comparisons throughout.

use crate::error::{Error, Result};
use crate::linalg::{q_ratio, Q};

pub type Weight = [i64; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum U3Case {
    Split,
    Inert,
}

pub fn ha1(p: i64) -> Weight {
    [1, 0, p]
}

pub fn ha2(p: i64) -> Weight {
    [1 + p, 1, p]
}

pub fn ha_mu(p: i64) -> Weight {
    [p + 1, p + 1, p * p + p]
}

pub fn lambda_det(p: i64, case: U3Case) -> Weight {
    match case {
        U3Case::Split => [-(p - 1), -(p - 1), -(p - 1)],
        U3Case::Inert => [p + 1, p + 1, p + 1],
    }
}

/// F(lambda) = p (p l1 - (p-1) l2 - l3) / (p^2 - p + 1), exactly.
pub fn f_lambda(lambda: &Weight, p: i64) -> Q {
    q_ratio(
        p * (p * lambda[0] - (p - 1) * lambda[1] - lambda[2]),
        p * p - p + 1,
    )
}

/// i >= F(lambda) compared without rationals: the denominator is positive.
fn at_least_f(i: i64, lambda: &Weight, p: i64) -> bool {
    i * (p * p - p + 1) >= p * (p * lambda[0] - (p - 1) * lambda[1] - lambda[2])
}

fn divides(d: i64, x: i64) -> bool {
    x.rem_euclid(d) == 0
}

/// The integers i naming the weights nu_i = (l1-i, l2+i, l3) that contribute
/// to H^0 in the inert case.
pub fn qualifying_i(lambda: &Weight, p: i64) -> Vec<i64> {
    let (l1, l2, l3) = (lambda[0], lambda[1], lambda[2]);
    if l1 < l2 {
        return Vec::new();
    }
    (0..=l1 - l2)
        .filter(|&i| {
            divides(p, i)
                && divides(p + 1, l2 + i)
                && divides(p * p - 1, l1 - i - p * l3)
                && at_least_f(i, lambda, p)
        })
        .collect()
}

/// dim H^0 of the weight-lambda automorphic bundle in the inert case.
pub fn dim_h0_u3(lambda: &Weight, p: i64) -> usize {
    qualifying_i(lambda, p).len()
}

/// Q-cone membership: l1 >= l2 and (p-1) l1 + l2 - p l3 <= 0.
pub fn czip_u3_contains(lambda: &Weight, p: i64) -> bool {
    lambda[0] >= lambda[1] && (p - 1) * lambda[0] + lambda[1] - p * lambda[2] <= 0
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub k1: i64,
    pub k2: i64,
    pub k_mu: i64,
    pub k_det: i64,
    /// The certified weight nu_i = lambda - i * alpha_1.
    pub nu: Weight,
}

/// Expresses lambda over {ha_1, ha_2, ha_mu, lambda_det} for a qualifying i.
/// The closed forms come with a full reconstruction check; nonnegativity of
/// k1, k2, k_mu is guaranteed by the qualifying conditions.
pub fn decompose_generators(lambda: &Weight, p: i64, i: i64) -> Result<Decomposition> {
    if !qualifying_i(lambda, p).contains(&i) {
        return Err(Error::input(format!(
            "i = {i} does not satisfy the dimension-formula conditions for {lambda:?}"
        )));
    }
    let (l1, l2, l3) = (lambda[0], lambda[1], lambda[2]);
    let k2 = i / p;
    let k1 = l1 - l2 - i;
    // (p^2-1) k_mu = lambda_3 - lambda_2 - p k_1 - (p-1) k_2, cleared by p
    let num = (p * p - p + 1) * i - p * p * l1 + p * (p - 1) * l2 + p * l3;
    debug_assert!(num.rem_euclid(p * (p * p - 1)) == 0);
    let k_mu = num / (p * (p * p - 1));
    let rest1 = l1 - k1 * ha1(p)[0] - k2 * ha2(p)[0] - k_mu * ha_mu(p)[0];
    debug_assert!(rest1.rem_euclid(p + 1) == 0);
    let k_det = rest1 / (p + 1);

    let det = lambda_det(p, U3Case::Inert);
    for c in 0..3 {
        let recon = k1 * ha1(p)[c] + k2 * ha2(p)[c] + k_mu * ha_mu(p)[c] + k_det * det[c];
        if recon != lambda[c] {
            return Err(Error::defect(format!(
                "decomposition fails to reconstruct {lambda:?}"
            )));
        }
    }
    if k1 < 0 || k2 < 0 || k_mu < 0 {
        return Err(Error::defect(format!(
            "negative multiplicity for {lambda:?}, i = {i}"
        )));
    }
    Ok(Decomposition {
        k1,
        k2,
        k_mu,
        k_det,
        nu: [l1 - i, l2 + i, l3],
    })
}

/// lambda + lambda_det for the chosen case.
pub fn det_shift(lambda: &Weight, p: i64, case: U3Case) -> Weight {
    let d = lambda_det(p, case);
    [lambda[0] + d[0], lambda[1] + d[1], lambda[2] + d[2]]
}

/// The reindexed weight on the symplectic side; requires the last coordinate
/// to be zero (use det_shift to arrange that first).
pub fn split_correspondence(lambda: &Weight) -> Result<(i64, i64)> {
    if lambda[2] != 0 {
        return Err(Error::input(
            "last coordinate must be 0: apply det_shift first",
        ));
    }
    Ok((lambda[0], lambda[1]))
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub p: i64,
    pub box_bound: i64,
    /// Points of the box with dim H^0 >= 1.
    pub dim_points: usize,
    /// Box points generated by {ha_1, ha_2, ha_mu} over Z>=0 plus Z lambda_det.
    pub monoid_points: usize,
    pub sets_equal: bool,
    /// Every member decomposes with k_1, k_2, k_mu >= 0 for every qualifying i.
    pub decompositions_ok: bool,
    /// Every box point inside the half-space cone is det-shift-connected to
    /// the monoid: checked as dim >= 1 => half-space membership plus exact
    /// equality of the half-space description with the generator cone.
    pub dim_implies_halfspaces: bool,
}

/// Brute-force double inclusion on the box |lambda|_inf <= bound between the
/// section-dimension locus and the monoid generated by the explicit sections.
pub fn czip_scan(p: i64, bound: i64) -> ScanReport {
    use std::collections::HashSet;
    let mut dim_set: HashSet<Weight> = HashSet::new();
    let mut decompositions_ok = true;
    let mut dim_implies_halfspaces = true;
    for l1 in -bound..=bound {
        for l2 in -bound..=l1 {
            for l3 in -bound..=bound {
                let lam = [l1, l2, l3];
                let qi = qualifying_i(&lam, p);
                if qi.is_empty() {
                    continue;
                }
                dim_set.insert(lam);
                if !czip_u3_contains(&lam, p) {
                    dim_implies_halfspaces = false;
                }
                for i in qi {
                    if decompose_generators(&lam, p, i).is_err() {
                        decompositions_ok = false;
                    }
                }
            }
        }
    }

    let h1 = ha1(p);
    let h2 = ha2(p);
    let hm = ha_mu(p);
    let det = lambda_det(p, U3Case::Inert);
    let mut monoid: HashSet<Weight> = HashSet::new();
    // box bounds: l1 - l2 = k1 + p k2 and l3 - l2 = p k1 + (p-1) k2 + (p^2-1) k_mu
    let k1_max = 2 * bound;
    let k2_max = 2 * bound / p;
    let kmu_max = 2 * bound / (p * p - 1);
    for k1 in 0..=k1_max {
        for k2 in 0..=k2_max {
            for kmu in 0..=kmu_max {
                let base = [
                    k1 * h1[0] + k2 * h2[0] + kmu * hm[0],
                    k1 * h1[1] + k2 * h2[1] + kmu * hm[1],
                    k1 * h1[2] + k2 * h2[2] + kmu * hm[2],
                ];
                // lambda_2 = base_2 + (p+1) k_det must land in [-bound, bound]
                let lo = (-bound - base[1]).div_euclid(p + 1);
                let hi = (bound - base[1]).div_euclid(p + 1);
                for kd in lo..=hi + 1 {
                    let lam = [
                        base[0] + kd * det[0],
                        base[1] + kd * det[1],
                        base[2] + kd * det[2],
                    ];
                    if lam.iter().all(|&x| x.abs() <= bound) {
                        monoid.insert(lam);
                    }
                }
            }
        }
    }

    ScanReport {
        p,
        box_bound: bound,
        dim_points: dim_set.len(),
        monoid_points: monoid.len(),
        sets_equal: dim_set == monoid,
        decompositions_ok,
        dim_implies_halfspaces,
    }
}
