//! Rational polyhedral cones on sublattices: double description, membership,
//! Hilbert bases, and the effective / Griffiths-Schmid / partial-Hasse /
//! dominant cones of a zip datum.

use crate::error::{Error, Result};
use crate::linalg::{
    dot_z, dot_zq, hnf, neg_z, primitive_from_q, primitive_z, qvec, qz, zi, zvec_to_q, Lattice,
    QMat, Q, Z,
};
use crate::root_datum::imat::{self, IMat};
use crate::root_datum::BasedRootDatum;
use crate::weyl::{levi_longest_action, levi_positive_roots};
use crate::zip::{build_zip_datum, ZipDatum};
use crate::Limits;
use num_traits::{Signed, Zero};

const RANK_LIMIT: usize = 12;

/// A polyhedral cone inside the Q-span of a sublattice, with both a
/// half-space and a generator description, kept consistent by construction.
#[derive(Clone, Debug)]
pub struct RationalCone {
    pub ambient: Lattice,
    /// Primitive integral linear forms on the ambient space; the cone is
    /// {x in span(ambient) : <form, x> >= 0 for all forms}.
    pub halfspaces: Vec<Vec<Z>>,
    /// Primitive integral extreme-ray generators (ambient coordinates).
    pub rays: Vec<Vec<Z>>,
    /// Saturated basis of the lineality lattice (ambient coordinates).
    pub lineality: Vec<Vec<Z>>,
    /// Forms rewritten in ambient-lattice coordinates, for membership tests.
    forms_lattice: Vec<Vec<Z>>,
}

/// Double description in Z^r: returns (lineality basis, extreme rays) of
/// {x : <f, x> >= 0 for all f in forms}, processing one form at a time.
fn double_description(r: usize, forms: &[Vec<Z>]) -> (Vec<Vec<Z>>, Vec<Vec<Z>>) {
    let mut lin: Vec<Vec<Z>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| if i == j { Z::from(1) } else { Z::zero() })
                .collect()
        })
        .collect();
    let mut rays: Vec<Vec<Z>> = Vec::new();
    let mut processed: Vec<Vec<Z>> = Vec::new();

    for form in forms {
        let lin_vals: Vec<Z> = lin.iter().map(|l| dot_z(form, l)).collect();
        if let Some(pivot) = lin_vals.iter().position(|v| !v.is_zero()) {
            // Split the lineality along this form.
            let mut l0 = lin.remove(pivot);
            let mut v0 = lin_vals[pivot].clone();
            if v0.is_negative() {
                l0 = neg_z(&l0);
                v0 = -v0;
            }
            let mut new_lin = Vec::new();
            for (l, val) in lin.iter().zip(
                lin_vals
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != pivot)
                    .map(|(_, v)| v),
            ) {
                if val.is_zero() {
                    new_lin.push(l.clone());
                } else {
                    let adj: Vec<Z> = l.iter().zip(&l0).map(|(a, b)| a * &v0 - b * val).collect();
                    new_lin.push(primitive_z(&adj));
                }
            }
            lin = new_lin;
            rays = rays
                .iter()
                .map(|ray| {
                    let val = dot_z(form, ray);
                    if val.is_zero() {
                        ray.clone()
                    } else {
                        let adj: Vec<Z> = ray
                            .iter()
                            .zip(&l0)
                            .map(|(a, b)| a * &v0 - b * &val)
                            .collect();
                        primitive_z(&adj)
                    }
                })
                .collect();
            rays.push(l0);
        } else {
            let vals: Vec<Z> = rays.iter().map(|ray| dot_z(form, ray)).collect();
            let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
            let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
            if neg.is_empty() {
                processed.push(form.clone());
                continue;
            }
            let active = |v: &[Z]| -> Vec<usize> {
                processed
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| dot_z(f, v).is_zero())
                    .map(|(i, _)| i)
                    .collect()
            };
            let actives: Vec<Vec<usize>> = rays.iter().map(|v| active(v)).collect();
            let mut new_rays: Vec<Vec<Z>> = Vec::new();
            for (i, ray) in rays.iter().enumerate() {
                if !vals[i].is_negative() {
                    new_rays.push(ray.clone());
                }
            }
            for &ip in &pos {
                for &inn in &neg {
                    let common: Vec<usize> = actives[ip]
                        .iter()
                        .filter(|k| actives[inn].contains(k))
                        .copied()
                        .collect();
                    if !adjacent(r, lin.len(), &processed, &common) {
                        continue;
                    }
                    let combo: Vec<Z> = rays[ip]
                        .iter()
                        .zip(&rays[inn])
                        .map(|(a, b)| {
                            // val_pos * r_neg - val_neg * r_pos, positive combination
                            b * &vals[ip] - a * &vals[inn]
                        })
                        .collect();
                    let combo = primitive_z(&combo);
                    if !combo.iter().all(|x| x.is_zero()) && !new_rays.contains(&combo) {
                        new_rays.push(combo);
                    }
                }
            }
            rays = new_rays;
        }
        processed.push(form.clone());
    }
    let lin = hnf(&lin);
    rays.sort();
    rays.dedup();
    (lin, rays)
}

/// Rank-based adjacency: the two rays span a 2-face iff the common active
/// constraints cut a subspace of dimension lineality + 2.
fn adjacent(r: usize, lin_dim: usize, processed: &[Vec<Z>], common: &[usize]) -> bool {
    if r < lin_dim + 2 {
        return true;
    }
    if common.len() < r - lin_dim - 2 {
        return false;
    }
    let rows: Vec<Vec<Q>> = common.iter().map(|&k| zvec_to_q(&processed[k])).collect();
    match QMat::from_rows(rows) {
        Ok(m) => m.rank() == r - lin_dim - 2,
        Err(_) => false,
    }
}

impl RationalCone {
    /// Builds from ambient linear forms: cone = {x in span : all forms >= 0}.
    pub fn from_halfspaces(ambient: Lattice, forms: Vec<Vec<Q>>) -> Result<Self> {
        if ambient.rank() > RANK_LIMIT {
            return Err(Error::resource(format!(
                "cone rank {} exceeds {}",
                ambient.rank(),
                RANK_LIMIT
            )));
        }
        for f in &forms {
            if f.len() != ambient.ambient_rank() {
                return Err(Error::input("halfspace form has the wrong length"));
            }
        }
        let r = ambient.rank();
        let forms_lattice: Vec<Vec<Z>> = forms
            .iter()
            .map(|f| {
                let on_basis: Vec<Q> = ambient.basis().iter().map(|b| dot_zq(b, f)).collect();
                primitive_from_q(&on_basis)
            })
            .filter(|f| !f.iter().all(|x| x.is_zero()))
            .collect();
        let (lin_lat, rays_lat) = double_description(r, &forms_lattice);
        let halfspaces: Vec<Vec<Z>> = {
            let mut hs: Vec<Vec<Z>> = forms
                .iter()
                .map(|f| primitive_from_q(f))
                .filter(|f| !f.iter().all(|x| x.is_zero()))
                .collect();
            hs.sort();
            hs.dedup();
            hs
        };
        let cone = RationalCone {
            rays: rays_lat
                .iter()
                .map(|v| primitive_z(&ambient.from_coords(v)))
                .collect(),
            lineality: lin_lat.iter().map(|v| ambient.from_coords(v)).collect(),
            ambient,
            halfspaces,
            forms_lattice,
        };
        cone.certify()?;
        Ok(cone)
    }

    /// Builds from generators: cone = cone(rays), computing the dual
    /// half-space description and then re-deriving canonical generators.
    pub fn from_rays(ambient: Lattice, rays: Vec<Vec<Z>>) -> Result<Self> {
        if ambient.rank() > RANK_LIMIT {
            return Err(Error::resource(format!(
                "cone rank {} exceeds {}",
                ambient.rank(),
                RANK_LIMIT
            )));
        }
        let r = ambient.rank();
        let mut rays_lat = Vec::new();
        for ray in &rays {
            let c = ambient.coords(ray).ok_or_else(|| {
                Error::input("ray generator is not a point of the ambient lattice")
            })?;
            rays_lat.push(c);
        }
        // Dual cone {phi : phi(ray) >= 0}: its rays are the facet forms, its
        // lineality is the annihilator of span(rays) (kept as +/- pairs).
        let (dual_lin, dual_rays) = double_description(r, &rays_lat);
        let mut forms_lattice: Vec<Vec<Z>> = dual_rays;
        for l in &dual_lin {
            forms_lattice.push(l.clone());
            forms_lattice.push(neg_z(l));
        }
        let (lin_lat, canon_rays) = double_description(r, &forms_lattice);
        let basis_t = QMat::from_rows(ambient.basis().iter().map(|b| zvec_to_q(b)).collect())?;
        let mut halfspaces = Vec::new();
        for f in &forms_lattice {
            // ambient form g with <g, b_i> = f_i; any solution works on span
            let g = basis_t.solve(&zvec_to_q(f))?.ok_or_else(|| {
                Error::defect("halfspace form does not lift to the ambient space")
            })?;
            halfspaces.push(primitive_from_q(&g));
        }
        halfspaces.sort();
        halfspaces.dedup();
        let cone = RationalCone {
            rays: canon_rays
                .iter()
                .map(|v| primitive_z(&ambient.from_coords(v)))
                .collect(),
            lineality: lin_lat.iter().map(|v| ambient.from_coords(v)).collect(),
            ambient,
            halfspaces,
            forms_lattice,
        };
        cone.certify()?;
        for ray in &rays {
            if !cone.contains_q(&zvec_to_q(ray)) {
                return Err(Error::defect("input ray escaped the reconstructed cone"));
            }
        }
        Ok(cone)
    }

    /// Mutual-membership certificate for the two descriptions.
    fn certify(&self) -> Result<()> {
        for ray in &self.rays {
            let c = zvec_to_q(ray);
            if !self.contains_q(&c) {
                return Err(Error::defect("ray violates a halfspace"));
            }
        }
        for l in &self.lineality {
            let c = self
                .ambient
                .coords_rational(&zvec_to_q(l))
                .ok_or_else(|| Error::defect("lineality outside span"))?;
            for f in &self.forms_lattice {
                if !dot_zq(f, &c).is_zero() {
                    return Err(Error::defect(
                        "lineality generator not on a bounding hyperplane",
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    /// Membership: inside the Q-span of the ambient lattice and on the
    /// nonnegative side of every halfspace.
    pub fn contains_q(&self, v: &[Q]) -> bool {
        match self.ambient.coords_rational(v) {
            None => false,
            Some(c) => self
                .forms_lattice
                .iter()
                .all(|f| !dot_zq(f, &c).is_negative()),
        }
    }

    pub fn contains_i(&self, v: &[i64]) -> bool {
        self.contains_q(&qvec(v))
    }

    /// Minimal generating set of cone ∩ ambient lattice. For cones with
    /// lineality the result is the Hilbert basis of the pointed quotient,
    /// lifted, together with a +/- basis of the lineality lattice.
    pub fn hilbert_basis(&self, limits: &Limits) -> Result<Vec<Vec<Z>>> {
        let r = self.ambient.rank();
        let lin_lat: Vec<Vec<Z>> = self
            .lineality
            .iter()
            .map(|l| {
                self.ambient
                    .coords(l)
                    .expect("lineality is integral in the ambient lattice")
            })
            .collect();
        let rays_lat: Vec<Vec<Z>> = self
            .rays
            .iter()
            .map(|v| {
                self.ambient
                    .coords(v)
                    .expect("rays are integral in the ambient lattice")
            })
            .collect();
        let s = lin_lat.len();

        // Unimodular U whose first s rows span the lineality lattice; the
        // quotient coordinates of x are the last r - s entries of x * U^{-1},
        // computed via the tracked column transform of the Smith reduction.
        let (proj, lift): (Vec<Vec<Z>>, Vec<Vec<Z>>) = quotient_maps(r, &lin_lat)?;
        let project = |x: &[Z]| -> Vec<Z> { proj.iter().map(|row| dot_z(row, x)).collect() };

        let mut img_rays: Vec<Vec<i64>> = Vec::new();
        for ray in &rays_lat {
            let q = primitive_z(&project(ray));
            let q64 = to_i64_vec(&q)?;
            if q64.iter().any(|&x| x != 0) && !img_rays.contains(&q64) {
                img_rays.push(q64);
            }
        }
        let qdim = r - s;
        if qdim == 0 || img_rays.is_empty() {
            let mut out: Vec<Vec<Z>> = Vec::new();
            for l in &self.lineality {
                out.push(l.clone());
                out.push(neg_z(l));
            }
            out.sort();
            return Ok(out);
        }

        // Halfspaces of the image cone.
        let img_rays_z: Vec<Vec<Z>> = img_rays
            .iter()
            .map(|v| v.iter().map(|&x| zi(x)).collect())
            .collect();
        let (dual_lin, dual_rays) = double_description(qdim, &img_rays_z);
        let mut img_forms: Vec<Vec<i64>> = Vec::new();
        for f in dual_rays.iter() {
            img_forms.push(to_i64_vec(f)?);
        }
        for l in dual_lin.iter() {
            img_forms.push(to_i64_vec(l)?);
            img_forms.push(to_i64_vec(&neg_z(l))?);
        }
        // Pointedness of the quotient: no nonzero vector satisfies all forms
        // with equality. Guaranteed when lineality was quotiented out.
        {
            let (plin, _) = double_description(
                qdim,
                &img_forms
                    .iter()
                    .map(|f| f.iter().map(|&x| zi(x)).collect())
                    .collect::<Vec<_>>(),
            );
            if !plin.is_empty() {
                return Err(Error::defect("quotient cone is not pointed"));
            }
        }

        let in_cone = |x: &[i64]| {
            img_forms
                .iter()
                .all(|f| f.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() >= 0)
        };

        // Zonotope bounding box of the ray parallelepiped.
        let mut lo = vec![0i64; qdim];
        let mut hi = vec![0i64; qdim];
        for ray in &img_rays {
            for c in 0..qdim {
                if ray[c] < 0 {
                    lo[c] += ray[c];
                } else {
                    hi[c] += ray[c];
                }
            }
        }
        let mut count: u128 = 1;
        for c in 0..qdim {
            count = count.saturating_mul((hi[c] - lo[c] + 1) as u128);
        }
        if count > limits.lattice_points as u128 {
            return Err(Error::resource(format!(
                "Hilbert-basis enumeration needs {count} lattice points (limit {})",
                limits.lattice_points
            )));
        }

        let mut candidates: Vec<Vec<i64>> = Vec::new();
        let mut cur = lo.clone();
        'walk: loop {
            if cur.iter().any(|&x| x != 0) && in_cone(&cur) {
                candidates.push(cur.clone());
            }
            for c in 0..qdim {
                if cur[c] < hi[c] {
                    cur[c] += 1;
                    continue 'walk;
                }
                cur[c] = lo[c];
            }
            break;
        }
        for ray in &img_rays {
            if !candidates.contains(ray) {
                candidates.push(ray.clone());
            }
        }

        // Strictly positive grading on the pointed cone: the sum of all forms.
        let grade = |x: &[i64]| -> i64 {
            img_forms
                .iter()
                .map(|f| f.iter().zip(x).map(|(a, b)| a * b).sum::<i64>())
                .sum()
        };
        candidates.sort_by_key(|x| (grade(x), x.clone()));
        let mut basis: Vec<Vec<i64>> = Vec::new();
        'cand: for d in &candidates {
            for h in &basis {
                let diff: Vec<i64> = d.iter().zip(h).map(|(a, b)| a - b).collect();
                if in_cone(&diff) {
                    continue 'cand;
                }
            }
            basis.push(d.clone());
        }

        let mut out: Vec<Vec<Z>> = Vec::new();
        for h in &basis {
            let hz: Vec<Z> = h.iter().map(|&x| zi(x)).collect();
            let lifted: Vec<Z> = lift.iter().map(|row| dot_z(row, &hz)).collect();
            out.push(self.ambient.from_coords(&lifted));
        }
        for l in &self.lineality {
            out.push(l.clone());
            out.push(neg_z(l));
        }
        out.sort();
        Ok(out)
    }
}

/// Returns (projection, lift): projection is an (r-s) x r integer matrix
/// sending the lineality lattice to zero and inducing an isomorphism
/// Z^r / lin -> Z^{r-s}; lift is an r x (r-s) section of it.
fn quotient_maps(r: usize, lin: &[Vec<Z>]) -> Result<(Vec<Vec<Z>>, Vec<Vec<Z>>)> {
    let s = lin.len();
    if s == 0 {
        let id: Vec<Vec<Z>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| if i == j { Z::from(1) } else { Z::zero() })
                    .collect()
            })
            .collect();
        return Ok((id.clone(), id));
    }
    // Smith-reduce the lineality rows, tracking the column transform W with
    // R * L * W = D. Saturation makes D's pivots +/-1, so the rows of W^{-1}
    // complete the lineality basis; quotient coords of x are (x W)_{s..r}.
    let (d, w) = crate::linalg::smith_cols_public(lin.to_vec(), r);
    for (i, row) in d.iter().enumerate().take(s) {
        if row[i].abs() != Z::from(1) {
            return Err(Error::defect("lineality lattice is not saturated"));
        }
    }
    // projection rows: columns s..r of W, transposed (x -> x * W restricted).
    let proj: Vec<Vec<Z>> = (s..r)
        .map(|j| (0..r).map(|k| w[k][j].clone()).collect())
        .collect();
    // lift: rows s..r of W^{-1}, transposed into column form.
    let w_q = QMat::from_rows(w.iter().map(|row| zvec_to_q(row)).collect())?;
    let mut winv: Vec<Vec<Z>> = Vec::new();
    for i in 0..r {
        let e: Vec<Q> = (0..r)
            .map(|j| if i == j { qz(Z::from(1)) } else { Q::zero() })
            .collect();
        let col = w_q
            .transpose()
            .solve(&e)?
            .ok_or_else(|| Error::defect("column transform is singular"))?;
        if col.iter().any(|c| !c.is_integer()) {
            return Err(Error::defect("column transform is not unimodular"));
        }
        winv.push(col.iter().map(|c| c.to_integer()).collect());
    }
    // winv[i] is row i of W^{-1}; lift maps quotient coords h to sum h_j * winv[s+j]
    let lift: Vec<Vec<Z>> = (0..r)
        .map(|k| (s..r).map(|j| winv[j][k].clone()).collect())
        .collect();
    Ok((proj, lift))
}

fn to_i64_vec(v: &[Z]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| {
            i64::try_from(x.clone())
                .map_err(|_| Error::resource("coordinate exceeds i64 during Hilbert enumeration"))
        })
        .collect()
}

/// Eff(G-Zip)_{Q>=0}: the cone in X*(L) cut out by <., delta_alpha> >= 0.
pub fn eff_cone(zip: &ZipDatum) -> Result<RationalCone> {
    let forms: Vec<Vec<Q>> = zip.deltas().map(|(_, d)| d.to_vec()).collect();
    RationalCone::from_halfspaces(zip.xl.clone(), forms)
}

/// The Griffiths-Schmid cone in X*(T).
pub fn gs_cone(zip: &ZipDatum, limits: &Limits) -> Result<RationalCone> {
    let roots = zip.datum.generate_roots(limits)?;
    let levi_pos = levi_positive_roots(&zip.datum, &roots, &zip.i_set);
    let mut forms: Vec<Vec<Q>> = Vec::new();
    for &i in &zip.i_set {
        forms.push(qvec(&zip.datum.simple_coroots[i]));
    }
    for beta in &roots.positive_roots {
        if levi_pos.contains(beta) {
            continue;
        }
        let coroot = roots
            .coroot_of(beta)
            .ok_or_else(|| Error::defect("root without coroot"))?;
        forms.push(qvec(coroot).iter().map(|x| -x).collect());
    }
    RationalCone::from_halfspaces(Lattice::full(zip.datum.rank), forms)
}

/// The dominant cone X*_+(T).
pub fn dominant_cone(datum: &BasedRootDatum) -> Result<RationalCone> {
    let forms: Vec<Vec<Q>> = datum.simple_coroots.iter().map(|c| qvec(c)).collect();
    RationalCone::from_halfspaces(Lattice::full(datum.rank), forms)
}

/// The partial-Hasse cone: the image of the dominant cone under
/// h(lambda) = lambda - p * w_{0,I}(sigma^{-1} lambda), together with the raw
/// images of the dominant generators.
pub struct PhaCone {
    pub cone: RationalCone,
    /// h applied to each dominant ray and to +/- each lineality generator.
    pub generator_images: Vec<Vec<i64>>,
}

pub fn pha_map(zip: &ZipDatum, limits: &Limits) -> Result<IMat> {
    let roots = zip.datum.generate_roots(limits)?;
    let w0i = levi_longest_action(&zip.datum, &roots, &zip.i_set);
    let sigma_inv = imat::inverse_unimodular(&zip.datum.sigma_char)
        .ok_or_else(|| Error::input("sigma_char is not invertible over Z"))?;
    let n = zip.datum.rank;
    let comp = imat::mul(&w0i, &sigma_inv);
    let mut h = imat::identity(n);
    for i in 0..n {
        for j in 0..n {
            h[i][j] -= zip.datum.p as i64 * comp[i][j];
        }
    }
    Ok(h)
}

pub fn pha_cone(zip: &ZipDatum, limits: &Limits) -> Result<PhaCone> {
    let h = pha_map(zip, limits)?;
    let dom = dominant_cone(&zip.datum)?;
    let mut images: Vec<Vec<i64>> = Vec::new();
    for ray in &dom.rays {
        images.push(imat::apply(&h, &to_i64_vec(ray)?));
    }
    for l in &dom.lineality {
        let img = imat::apply(&h, &to_i64_vec(l)?);
        images.push(img.iter().map(|&x| -x).collect());
        images.push(img);
    }
    let gens: Vec<Vec<Z>> = images
        .iter()
        .map(|v| v.iter().map(|&x| zi(x)).collect())
        .collect();
    let cone = RationalCone::from_rays(Lattice::full(zip.datum.rank), gens)?;
    Ok(PhaCone {
        cone,
        generator_images: images,
    })
}

/// Direct product of two cocharacter data over the same F_p.
pub fn product_zip(z1: &ZipDatum, z2: &ZipDatum) -> Result<ZipDatum> {
    let datum = z1.datum.direct_sum(&z2.datum)?;
    let mut mu = z1.mu.clone();
    mu.extend_from_slice(&z2.mu);
    build_zip_datum(&datum, &mu)
}
