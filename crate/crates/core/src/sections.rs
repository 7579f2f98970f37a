//! Section-existence criteria on the stack of G-zips: the mu-ordinary Hasse
//! criterion, effectivity up to a power, the exact criterion behind a
//! pluggable triviality oracle, Hasse-type classification, and the dual
//! basis of the pairing forms.

use crate::error::{Error, Result};
use crate::linalg::{dot_zq, zi, zvec_to_q, Lattice, QMat, Q, Z};
use crate::root_datum::imat;
use crate::u3;
use crate::weyl::levi_longest_action;
use crate::zip::ZipDatum;
use crate::Limits;
use num_traits::{Signed, Zero};

/// Three-valued verdict for the exact criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trool {
    True,
    False,
    Unknown,
}

/// Decides whether a character of X*(L) is trivial on the finite stabilizer
/// L_phi. No general algorithm is implemented for L_phi itself; callers
/// inject whatever partial knowledge they have.
#[derive(Clone, Debug)]
pub enum TrivialityOracle {
    /// Only the zero character is known trivial.
    Default,
    /// A caller-supplied sublattice of guaranteed-trivial characters;
    /// membership answers true, anything else is unknown.
    Sublattice(Lattice),
    /// An exact two-sided description: trivial if and only if a member.
    ExactSublattice(Lattice),
    /// GL_3 split of type (2,1): L_phi = GL_2(F_p) x F_p^x, so (a,a,c) is
    /// trivial iff (p-1) | a and (p-1) | c.
    Gl3Split,
    /// U(3) inert: decided by det-shifting into the effective range and
    /// applying the exact dimension formula.
    U3Inert,
}

impl TrivialityOracle {
    pub fn is_trivial(&self, zip: &ZipDatum, lambda: &[i64]) -> Trool {
        match self {
            TrivialityOracle::Default => {
                if lambda.iter().all(|&x| x == 0) {
                    Trool::True
                } else {
                    Trool::Unknown
                }
            }
            TrivialityOracle::Sublattice(lat) => {
                let v: Vec<Z> = lambda.iter().map(|&x| zi(x)).collect();
                if lat.contains(&v) {
                    Trool::True
                } else {
                    Trool::Unknown
                }
            }
            TrivialityOracle::ExactSublattice(lat) => {
                let v: Vec<Z> = lambda.iter().map(|&x| zi(x)).collect();
                if lat.contains(&v) {
                    Trool::True
                } else {
                    Trool::False
                }
            }
            TrivialityOracle::Gl3Split => {
                let p = zip.datum.p as i64;
                let trivial = lambda[0].rem_euclid(p - 1) == 0 && lambda[2].rem_euclid(p - 1) == 0;
                if trivial {
                    Trool::True
                } else {
                    Trool::False
                }
            }
            TrivialityOracle::U3Inert => {
                let p = zip.datum.p as i64;
                let lam = [lambda[0], lambda[1], lambda[2]];
                // shift by a multiple of the trivial weight ha_mu until the
                // pairing c - a is nonnegative; triviality is shift-invariant
                let ha_mu = u3::ha_mu(p);
                let gap = lam[2] - lam[0];
                let step = (p * p + p) - (p + 1); // (p+1)(p-1) > 0
                let m = if gap >= 0 {
                    0
                } else {
                    (-gap + step - 1) / step
                };
                let shifted = [
                    lam[0] + m * ha_mu[0],
                    lam[1] + m * ha_mu[1],
                    lam[2] + m * ha_mu[2],
                ];
                if u3::dim_h0_u3(&shifted, p) >= 1 {
                    Trool::True
                } else {
                    Trool::False
                }
            }
        }
    }
}

fn require_in_xl(zip: &ZipDatum, lambda: &[i64]) -> Result<()> {
    if !zip.in_xl(lambda) {
        return Err(Error::input(format!("{lambda:?} is not a point of X*(L)")));
    }
    Ok(())
}

/// Some power of L(lambda) admits a mu-ordinary Hasse invariant iff every
/// pairing <lambda, delta_alpha> is strictly positive.
pub fn has_mu_ordinary_hasse(zip: &ZipDatum, lambda: &[i64]) -> Result<bool> {
    require_in_xl(zip, lambda)?;
    Ok(zip.deltas().all(|(alpha, _)| {
        zip.pair_delta(lambda, alpha)
            .expect("alpha in Delta^P")
            .is_positive()
    }))
}

/// H^0 of some positive tensor power is nonzero iff all pairings are >= 0.
pub fn h0_nonzero_up_to_power(zip: &ZipDatum, lambda: &[i64]) -> Result<bool> {
    require_in_xl(zip, lambda)?;
    Ok(zip.deltas().all(|(alpha, _)| {
        !zip.pair_delta(lambda, alpha)
            .expect("alpha in Delta^P")
            .is_negative()
    }))
}

/// The exact criterion: false when some pairing is negative, otherwise the
/// oracle's verdict on triviality. A true answer certifies a one-dimensional
/// space of sections.
pub fn h0_nonzero_exact(
    zip: &ZipDatum,
    lambda: &[i64],
    oracle: &TrivialityOracle,
) -> Result<Trool> {
    require_in_xl(zip, lambda)?;
    if !h0_nonzero_up_to_power(zip, lambda)? {
        return Ok(Trool::False);
    }
    Ok(oracle.is_trivial(zip, lambda))
}

/// Hasse-type: sigma stabilizes I and acts on it by -w_{0,I}.
pub fn is_hasse_type(zip: &ZipDatum, limits: &Limits) -> Result<bool> {
    let perm = zip.datum.sigma_permutation()?;
    if !zip.i_set.iter().all(|&i| zip.i_set.contains(&perm[i])) {
        return Ok(false);
    }
    if zip.i_set.is_empty() {
        return Ok(true);
    }
    let roots = zip.datum.generate_roots(limits)?;
    let w0i = levi_longest_action(&zip.datum, &roots, &zip.i_set);
    Ok(zip.i_set.iter().all(|&i| {
        let sigma_alpha = zip.datum.frobenius_char(&zip.datum.simple_roots[i]);
        let neg_w0i: Vec<i64> = imat::apply(&w0i, &zip.datum.simple_roots[i])
            .iter()
            .map(|x| -x)
            .collect();
        sigma_alpha == neg_w0i
    }))
}

/// For each alpha in Delta^P, the rational lambda_alpha in X*(L) x Q with
/// <lambda_alpha, delta_beta> = kronecker(alpha, beta), normalized to lie in
/// the orthogonal complement of X*(G).
pub fn dual_basis_lambda(zip: &ZipDatum) -> Result<Vec<Vec<Q>>> {
    let basis = zip.xl.basis();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for (_, delta) in zip.deltas() {
        rows.push(basis.iter().map(|b| dot_zq(b, delta)).collect());
    }
    for g in zip.xg.basis() {
        rows.push(
            basis
                .iter()
                .map(|b| crate::linalg::qz(crate::linalg::dot_z(b, g)))
                .collect(),
        );
    }
    let m = QMat::from_rows(rows)?;
    let k = zip.delta_p.len();
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let mut rhs = vec![Q::zero(); m.nrows()];
        rhs[j] = crate::linalg::qi(1);
        let c = m
            .solve(&rhs)?
            .ok_or_else(|| Error::defect("dual-basis system is inconsistent"))?;
        // map coordinates back to the ambient space
        let mut v = vec![Q::zero(); zip.datum.rank];
        for (ci, b) in c.iter().zip(basis) {
            for (t, be) in v.iter_mut().zip(zvec_to_q(b)) {
                *t = &*t + ci * be;
            }
        }
        out.push(v);
    }
    Ok(out)
}

/// The stronger coroot-negativity condition <lambda, alpha^> < 0 for all
/// alpha in Delta^P (a literal check; lambda is assumed to lie in X*(L)).
/// It implies the existence of a mu-ordinary Hasse invariant.
pub fn kw_condition(zip: &ZipDatum, lambda: &[i64]) -> bool {
    zip.delta_p
        .iter()
        .all(|&a| crate::root_datum::pair(lambda, &zip.datum.simple_coroots[a]) < 0)
}
