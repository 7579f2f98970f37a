//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Every assertion is exact (integer or rational equality); there are no
//! floating-point tolerances anywhere.

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use zipcox::cones::{eff_cone, gs_cone, pha_cone, product_zip, RationalCone};
use zipcox::ff;
use zipcox::linalg::{qvec, zi, zvec, Lattice, Q, Z};
use zipcox::root_datum::{c2, gl_n, imat, u3_inert, weil_sl2};
use zipcox::sections;
use zipcox::u3;
use zipcox::weyl::{strata_poset, WeylGroup};
use zipcox::zip::{build_zip_datum, ZipDatum};
use zipcox::Limits;

fn limits() -> Limits {
    Limits::default()
}

/// The five bundled data, mirroring data/*.json.
fn bundled() -> Vec<(&'static str, ZipDatum)> {
    vec![
        (
            "gl3_split",
            build_zip_datum(&gl_n(3, 3).unwrap(), &[1, 1, 0]).unwrap(),
        ),
        (
            "u3_inert",
            build_zip_datum(&u3_inert(2).unwrap(), &[1, 1, 0]).unwrap(),
        ),
        (
            "sl2_weil2",
            build_zip_datum(&weil_sl2(2, 2).unwrap(), &[1, 0]).unwrap(),
        ),
        (
            "sl2_weil3",
            build_zip_datum(&weil_sl2(2, 3).unwrap(), &[1, 0, 0]).unwrap(),
        ),
        (
            "c2_split",
            build_zip_datum(&c2(5).unwrap(), &[1, 1]).unwrap(),
        ),
    ]
}

fn i64_vec(v: &[Z]) -> Vec<i64> {
    v.iter()
        .map(|x| i64::try_from(x.clone()).expect("desk-scale coordinate"))
        .collect()
}

/// Ambient halfspace forms as i64, valid for full-lattice cones.
fn forms_i64(cone: &RationalCone) -> Vec<Vec<i64>> {
    cone.halfspaces.iter().map(|f| i64_vec(f)).collect()
}

fn in_full_cone(forms: &[Vec<i64>], v: &[i64]) -> bool {
    forms
        .iter()
        .all(|f| f.iter().zip(v).map(|(a, b)| a * b).sum::<i64>() >= 0)
}

#[test]
fn criterion_1_wp_inversion() {
    for (name, zip) in bundled() {
        let p = zi(zip.datum.p as i64);
        for (alpha, delta) in zip.deltas() {
            let sigma_delta = zip.datum.frobenius_cochar_q(delta);
            let lhs: Vec<Q> = delta
                .iter()
                .zip(&sigma_delta)
                .map(|(d, s)| d - s * zipcox::linalg::qz(p.clone()))
                .collect();
            assert_eq!(
                lhs,
                qvec(&zip.datum.simple_coroots[alpha]),
                "{name} alpha_{}",
                alpha + 1
            );
        }
    }
    // split identity delta = -alpha^ / (p-1) on the sigma = id bundled data
    for (zip, p) in [
        (
            build_zip_datum(&gl_n(3, 3).unwrap(), &[1, 1, 0]).unwrap(),
            3i64,
        ),
        (build_zip_datum(&c2(5).unwrap(), &[1, 1]).unwrap(), 5i64),
    ] {
        for (alpha, delta) in zip.deltas() {
            let expected: Vec<Q> = zip.datum.simple_coroots[alpha]
                .iter()
                .map(|&c| zipcox::linalg::q_ratio(-c, p - 1))
                .collect();
            assert_eq!(delta, expected.as_slice());
        }
    }
    // U(3): delta_{alpha_2} = -(p, 1-p, -1)/(p^2-1), p = 2
    let zip = build_zip_datum(&u3_inert(2).unwrap(), &[1, 1, 0]).unwrap();
    let expected = vec![
        zipcox::linalg::q_ratio(-2, 3),
        zipcox::linalg::q_ratio(1, 3),
        zipcox::linalg::q_ratio(1, 3),
    ];
    assert_eq!(zip.delta_alpha(1).unwrap(), expected.as_slice());
    println!("criterion 1 (wp-star inversion, exact): PASS");
}

#[test]
fn criterion_2_linear_independence() {
    for (name, zip) in bundled() {
        let rows: Vec<Vec<Q>> = zip
            .xl
            .basis()
            .iter()
            .map(|b| {
                zip.deltas()
                    .map(|(_, d)| zipcox::linalg::dot_zq(b, d))
                    .collect()
            })
            .collect();
        let m = zipcox::linalg::QMat::from_rows(rows).unwrap();
        assert_eq!(m.rank(), zip.delta_p.len(), "{name}: pairing rank");
        assert_eq!(
            zip.xl.rank() - zip.xg.rank(),
            zip.delta_p.len(),
            "{name}: lattice ranks"
        );
    }
    println!("criterion 2 (linear independence of pairing forms): PASS");
}

/// Independent Bruhat oracle: u <= w iff some subword of a fixed reduced
/// word of w multiplies out to u with matching length.
fn subword_leq(g: &WeylGroup, u: usize, w: usize) -> bool {
    let word = &g.element(w).reduced_word;
    let target_len = g.element(u).length;
    for mask in 0u32..(1 << word.len()) {
        let sub: Vec<usize> = word
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &i)| i)
            .collect();
        if sub.len() != target_len {
            continue;
        }
        let m = sub.iter().fold(imat::identity(g.datum.rank), |acc, &i| {
            imat::mul(&acc, &g.datum.reflection_char(i))
        });
        if g.index_of(&m) == Some(u) {
            return true;
        }
    }
    false
}

#[test]
fn criterion_3_stratification() {
    for (name, zip) in bundled() {
        let g = WeylGroup::new(&zip.datum, &limits()).unwrap();
        let reps = g.minimal_coset_reps(&zip.i_set);
        let wi = g.subgroup(&zip.i_set);
        assert_eq!(reps.len() * wi.len(), g.order(), "{name}: |IW| |W_I| = |W|");

        let all: Vec<usize> = (0..zip.datum.simple_roots.len()).collect();
        let w0 = g.longest_element(&all);
        let w0i = g.longest_element(&zip.i_set);
        let top_len = g.element(w0).length - g.element(w0i).length;
        let max_len = reps.iter().map(|&w| g.element(w).length).max().unwrap();
        assert_eq!(max_len, top_len, "{name}: top length");
        assert_eq!(
            reps.iter()
                .filter(|&&w| g.element(w).length == top_len)
                .count(),
            1,
            "{name}: unique top"
        );

        let poset = strata_poset(&g, &zip).unwrap();
        let open_dim = poset.elements.iter().map(|&(_, d)| d).max().unwrap();
        assert_eq!(open_dim, poset.dim_g, "{name}: open stratum dimension");
        assert_eq!(
            poset.codim_one.len(),
            zip.delta_p.len(),
            "{name}: codim-one count"
        );
        for &(_, w) in &poset.codim_one {
            assert_eq!(g.element(w).length + 1, top_len, "{name}: codim-one length");
        }

        // partial order, exhaustively
        let k = poset.elements.len();
        for a in 0..k {
            assert!(poset.order[a][a], "{name}: reflexive");
            for b in 0..k {
                if a != b && poset.order[a][b] && poset.order[b][a] {
                    panic!("{name}: antisymmetry fails");
                }
                for c in 0..k {
                    if poset.order[a][b] && poset.order[b][c] {
                        assert!(poset.order[a][c], "{name}: transitivity");
                    }
                }
            }
        }
        // the top stratum dominates everything
        let top_idx = poset
            .elements
            .iter()
            .position(|&(w, _)| w == poset.top)
            .unwrap();
        for a in 0..k {
            assert!(poset.order[a][top_idx], "{name}: top dominates");
        }
    }

    // Bruhat order vs the subword oracle on S3, S4 (A3 datum), and C2
    for datum in [gl_n(2, 3).unwrap(), gl_n(2, 4).unwrap(), c2(2).unwrap()] {
        let g = WeylGroup::new(&datum, &limits()).unwrap();
        assert!(g.order() <= 48);
        for u in 0..g.order() {
            for w in 0..g.order() {
                assert_eq!(g.bruhat_leq(u, w), subword_leq(&g, u, w), "u={u} w={w}");
            }
        }
    }
    println!("criterion 3 (stratification poset and Bruhat oracle): PASS");
}

#[test]
fn criterion_4_theorem_1_grid() {
    for (name, zip) in bundled() {
        let eff = eff_cone(&zip).unwrap();
        let p = zip.datum.p as i64;
        let b = 2 * p;
        let n = zip.datum.rank;
        let mut idx = vec![-b; n];
        loop {
            let lam = idx.clone();
            if zip.in_xl(&lam) {
                let kw = sections::kw_condition(&zip, &lam);
                let muh = sections::has_mu_ordinary_hasse(&zip, &lam).unwrap();
                let up = sections::h0_nonzero_up_to_power(&zip, &lam).unwrap();
                if kw {
                    assert!(muh, "{name}: kw => mu-ordinary at {lam:?}");
                }
                if muh {
                    assert!(up, "{name}: mu-ordinary => up-to-power at {lam:?}");
                }
                assert_eq!(
                    up,
                    eff.contains_i(&lam),
                    "{name}: up-to-power = eff at {lam:?}"
                );
            }
            let mut c = 0;
            loop {
                if c == n {
                    break;
                }
                if idx[c] < b {
                    idx[c] += 1;
                    break;
                }
                idx[c] = -b;
                c += 1;
            }
            if c == n {
                break;
            }
        }
    }
    println!("criterion 4 (Theorem-1 grid: kw => mu-ordinary => effective, zero exceptions): PASS");
}

#[test]
fn criterion_5_u3_monoid_reproduction() {
    for p in [2i64, 3, 5] {
        let bound = 3 * p * (p + 1);
        let report = u3::czip_scan(p, bound);
        assert!(
            report.sets_equal,
            "p={p}: dim locus {} vs monoid {}",
            report.dim_points, report.monoid_points
        );
        assert!(report.decompositions_ok, "p={p}: decompositions");
        assert!(report.dim_implies_halfspaces, "p={p}: dim => halfspaces");
        assert!(report.dim_points > 0);

        // half-space description = saturation of the generated monoid: the
        // cone over the generators has exactly the two stated facets
        let gens: Vec<Vec<Z>> = vec![
            zvec(&u3::ha1(p)),
            zvec(&u3::ha2(p)),
            zvec(&u3::ha_mu(p)),
            zvec(&u3::lambda_det(p, u3::U3Case::Inert)),
            zvec(&u3::lambda_det(p, u3::U3Case::Inert).map(|x| -x)),
        ];
        let cone = RationalCone::from_rays(Lattice::full(3), gens).unwrap();
        let mut expected = vec![zvec(&[1, -1, 0]), zvec(&[-(p - 1), -1, p])];
        expected.sort();
        assert_eq!(cone.halfspaces, expected, "p={p}: facet forms");

        // cross-module agreement on line-bundle weights (a,a,c)
        let zip = build_zip_datum(&u3_inert(p as u64).unwrap(), &[1, 1, 0]).unwrap();
        let eff = eff_cone(&zip).unwrap();
        for a in -bound..=bound {
            for c in -bound..=bound {
                let lam = [a, a, c];
                assert_eq!(
                    u3::czip_u3_contains(&lam, p),
                    eff.contains_i(&lam),
                    "p={p} {lam:?}"
                );
            }
        }
    }
    println!("criterion 5 (U(3) monoid double inclusion and decomposition): PASS");
}

#[test]
fn criterion_6_cone_relations_u3() {
    for p in [2u64, 3, 5] {
        let zip = build_zip_datum(&u3_inert(p).unwrap(), &[1, 1, 0]).unwrap();
        let pi = p as i64;

        // C_GS inside C_zip on the box, pointwise, zero exceptions
        let gs = gs_cone(&zip, &limits()).unwrap();
        let gs_forms = forms_i64(&gs);
        let bound = 3 * pi * (pi + 1);
        for l1 in -bound..=bound {
            for l2 in -bound..=bound {
                for l3 in -bound..=bound {
                    let lam = [l1, l2, l3];
                    if in_full_cone(&gs_forms, &lam) {
                        assert!(u3::czip_u3_contains(&lam, pi), "p={p} {lam:?}");
                    }
                }
            }
        }

        // C_pHa generator images and cone identity
        let pha = pha_cone(&zip, &limits()).unwrap();
        let mut images = pha.generator_images.clone();
        images.sort();
        let mut expected_images = vec![
            u3::ha1(pi).to_vec(),
            u3::ha2(pi).to_vec(),
            vec![pi + 1, pi + 1, pi + 1],
            vec![-(pi + 1), -(pi + 1), -(pi + 1)],
        ];
        expected_images.sort();
        assert_eq!(images, expected_images, "p={p}: generator images");
        let expected_cone = RationalCone::from_rays(
            Lattice::full(3),
            vec![
                zvec(&u3::ha1(pi)),
                zvec(&u3::ha2(pi)),
                zvec(&[1, 1, 1]),
                zvec(&[-1, -1, -1]),
            ],
        )
        .unwrap();
        assert_eq!(
            pha.cone.halfspaces, expected_cone.halfspaces,
            "p={p}: pha halfspaces"
        );
        assert_eq!(pha.cone.rays, expected_cone.rays, "p={p}: pha rays");
        assert_eq!(
            pha.cone.lineality,
            vec![zvec(&[1, 1, 1])],
            "p={p}: pha lineality"
        );

        // strictness: ha_mu lies in C_zip but not in C_pHa
        let ha_mu = u3::ha_mu(pi);
        assert!(u3::czip_u3_contains(&ha_mu, pi));
        assert!(!pha.cone.contains_i(&ha_mu), "p={p}: ha_mu outside C_pHa");

        // classification
        assert!(
            !sections::is_hasse_type(&zip, &limits()).unwrap(),
            "U(3) is not Hasse-type"
        );
    }
    let gl3 = build_zip_datum(&gl_n(3, 3).unwrap(), &[1, 1, 0]).unwrap();
    assert!(
        sections::is_hasse_type(&gl3, &limits()).unwrap(),
        "split GL3 (2,1) is Hasse-type"
    );
    println!("criterion 6 (cone relations on U(3), Hasse-type classification): PASS");
}

#[test]
fn criterion_7_equivariance_suite() {
    for p in [2u64, 3, 5] {
        let ctx = ff::make_field(p, 6).unwrap();
        let pi = p as i64;
        for (case, secs) in [
            (ff::Case::Split, vec![ff::Section::Det]),
            (
                ff::Case::Inert,
                vec![
                    ff::Section::Ha1,
                    ff::Section::Ha2,
                    ff::Section::HaMu,
                    ff::Section::Det,
                ],
            ),
        ] {
            for section in secs {
                let weight = section.weight(case, pi).unwrap();
                let report = ff::check_equivariance(&ctx, case, section, &weight, 100, 42).unwrap();
                assert!(
                    report.passed,
                    "p={p} {case:?} {section:?} failed at trial {:?}",
                    report.counterexample
                );
                assert!(
                    ff::check_torus_weight(&ctx, case, section, &weight, 100, 42).unwrap(),
                    "p={p} {case:?} {section:?}: torus weight"
                );
            }
        }
        // Ha_mu(1) = 1 and Ha_mu at the alpha_2-reflection representative = 0
        assert_eq!(
            ff::evaluate_section(&ctx, ff::Section::HaMu, &ctx.mat_identity()),
            ctx.one()
        );
        let mut s2 = ctx.mat_zero();
        s2.0[0][0] = ctx.one();
        s2.0[1][2] = ctx.one();
        s2.0[2][1] = ctx.neg(&ctx.one());
        assert!(ctx.is_zero(&ff::evaluate_section(&ctx, ff::Section::HaMu, &s2)));
    }
    println!("criterion 7 (equivariance of Ha1, Ha2, HaMu, det at their weights): PASS");
}

fn decomposes(
    target: [i64; 3],
    basis: &[Vec<i64>],
    forms: &[Vec<i64>],
    memo: &mut HashMap<[i64; 3], bool>,
) -> bool {
    if target == [0, 0, 0] {
        return true;
    }
    if let Some(&r) = memo.get(&target) {
        return r;
    }
    let mut ok = false;
    for h in basis {
        let rest = [target[0] - h[0], target[1] - h[1], target[2] - h[2]];
        if in_full_cone(forms, &rest) && decomposes(rest, basis, forms, memo) {
            ok = true;
            break;
        }
    }
    memo.insert(target, ok);
    ok
}

#[test]
fn criterion_8_hilbert_basis_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut accepted = 0;
    while accepted < 20 {
        let n_rays = rng.gen_range(2..=4);
        let rays: Vec<Vec<i64>> = (0..n_rays)
            .map(|_| (0..3).map(|_| rng.gen_range(-5i64..=5)).collect())
            .collect();
        if rays.iter().all(|r| r.iter().all(|&x| x == 0)) {
            continue;
        }
        let rays_z: Vec<Vec<Z>> = rays.iter().map(|r| zvec(r)).collect();
        let cone = RationalCone::from_rays(Lattice::full(3), rays_z).unwrap();
        if !cone.is_pointed() || cone.rays.is_empty() {
            continue;
        }
        accepted += 1;
        let hb: Vec<Vec<i64>> = cone
            .hilbert_basis(&limits())
            .unwrap()
            .iter()
            .map(|h| i64_vec(h))
            .collect();
        assert!(!hb.is_empty());
        let forms = forms_i64(&cone);
        let mut memo = HashMap::new();
        for x in -10i64..=10 {
            for y in -10i64..=10 {
                for z in -10i64..=10 {
                    let v = [x, y, z];
                    if !in_full_cone(&forms, &v) {
                        continue;
                    }
                    assert!(
                        decomposes(v, &hb, &forms, &mut memo),
                        "cone {rays:?}: {v:?} not generated"
                    );
                }
            }
        }
        // minimality: no element generated by the others
        for (i, h) in hb.iter().enumerate() {
            let others: Vec<Vec<i64>> = hb
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v.clone())
                .collect();
            let mut memo = HashMap::new();
            assert!(
                !decomposes([h[0], h[1], h[2]], &others, &forms, &mut memo),
                "cone {rays:?}: {h:?} is redundant"
            );
        }
    }
    println!("criterion 8 (Hilbert bases generate and are minimal, 20 random cones): PASS");
}

#[test]
fn criterion_9_product_factorization() {
    let pairs: Vec<(ZipDatum, ZipDatum)> = vec![
        (
            build_zip_datum(&gl_n(3, 3).unwrap(), &[1, 1, 0]).unwrap(),
            build_zip_datum(&c2(3).unwrap(), &[1, 1]).unwrap(),
        ),
        (
            build_zip_datum(&u3_inert(2).unwrap(), &[1, 1, 0]).unwrap(),
            build_zip_datum(&weil_sl2(2, 2).unwrap(), &[1, 0]).unwrap(),
        ),
    ];
    for (z1, z2) in pairs {
        let prod = product_zip(&z1, &z2).unwrap();
        let ep = eff_cone(&prod).unwrap();
        let n1 = z1.datum.rank;
        let n2 = z2.datum.rank;
        let mut expected: Vec<Vec<Z>> = Vec::new();
        for f in &eff_cone(&z1).unwrap().halfspaces {
            let mut v = f.clone();
            v.extend(std::iter::repeat(Z::zero()).take(n2));
            expected.push(v);
        }
        for f in &eff_cone(&z2).unwrap().halfspaces {
            let mut v = vec![Z::zero(); n1];
            v.extend(f.iter().cloned());
            expected.push(v);
        }
        expected.sort();
        assert_eq!(ep.halfspaces, expected);
    }
    println!("criterion 9 (effective cone of a product factors blockwise): PASS");
}

#[test]
fn criterion_10_det_shift_invariance() {
    for p in [2i64, 3, 5] {
        let bound = 3 * p * (p + 1);
        for l1 in -bound..=bound {
            for l2 in -bound..=bound {
                for l3 in -bound..=bound {
                    let lam = [l1, l2, l3];
                    let shifted = u3::det_shift(&lam, p, u3::U3Case::Inert);
                    assert_eq!(
                        u3::dim_h0_u3(&lam, p),
                        u3::dim_h0_u3(&shifted, p),
                        "p={p} {lam:?}"
                    );
                }
            }
        }
    }
    println!("criterion 10 (det-shift invariance of dim H^0 on the full box): PASS");
}
