//! Finite Weyl group enumeration, Bruhat order, minimal coset representatives,
//! the twisted closure order, and the stratification poset.

use crate::error::{Error, Result};
use crate::root_datum::imat::{self, IMat};
use crate::root_datum::{BasedRootDatum, RootSystem};
use crate::zip::ZipDatum;
use crate::Limits;
use serde_json::{json, Value};
use std::collections::{HashMap, HashSet, VecDeque};

/// A Weyl-group element: its lattice action, cached length, and the reduced
/// word discovered first by the breadth-first enumeration.
#[derive(Clone, Debug)]
pub struct WeylElement {
    pub action: IMat,
    pub length: usize,
    pub reduced_word: Vec<usize>,
}

/// The whole group, enumerated once; elements are addressed by index in the
/// canonical length-then-word order (index 0 is the identity).
pub struct WeylGroup {
    pub datum: BasedRootDatum,
    pub roots: RootSystem,
    elements: Vec<WeylElement>,
    index: HashMap<IMat, usize>,
}

impl WeylGroup {
    pub fn new(datum: &BasedRootDatum, limits: &Limits) -> Result<Self> {
        let roots = datum.generate_roots(limits)?;
        let positive_set: HashSet<Vec<i64>> = roots.positive_roots.iter().cloned().collect();
        let gens: Vec<IMat> = (0..datum.simple_roots.len())
            .map(|i| datum.reflection_char(i))
            .collect();
        let n = datum.rank;

        let mut discovered: HashMap<IMat, Vec<usize>> = HashMap::new();
        let mut queue = VecDeque::new();
        let id = imat::identity(n);
        discovered.insert(id.clone(), Vec::new());
        queue.push_back(id);
        while let Some(m) = queue.pop_front() {
            let word = discovered[&m].clone();
            for (i, g) in gens.iter().enumerate() {
                let next = imat::mul(&m, g);
                if !discovered.contains_key(&next) {
                    if discovered.len() >= limits.enumeration {
                        return Err(Error::resource(format!(
                            "Weyl group larger than the enumeration limit {}",
                            limits.enumeration
                        )));
                    }
                    let mut w = word.clone();
                    w.push(i);
                    discovered.insert(next.clone(), w);
                    queue.push_back(next);
                }
            }
        }

        let mut elements: Vec<WeylElement> = discovered
            .into_iter()
            .map(|(action, reduced_word)| WeylElement {
                action,
                length: reduced_word.len(),
                reduced_word,
            })
            .collect();
        elements.sort_by(|a, b| (a.length, &a.reduced_word).cmp(&(b.length, &b.reduced_word)));

        // BFS depth must equal the inversion count; a mismatch is a defect.
        for e in &elements {
            let inv = roots
                .positive_roots
                .iter()
                .filter(|beta| !positive_set.contains(&imat::apply(&e.action, beta)))
                .count();
            if inv != e.length {
                return Err(Error::defect(format!(
                    "word length {} disagrees with inversion count {}",
                    e.length, inv
                )));
            }
        }

        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.action.clone(), i))
            .collect();
        Ok(WeylGroup {
            datum: datum.clone(),
            roots,
            elements,
            index,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> &WeylElement {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn index_of(&self, action: &IMat) -> Option<usize> {
        self.index.get(action).copied()
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        let m = imat::mul(&self.elements[a].action, &self.elements[b].action);
        *self
            .index
            .get(&m)
            .expect("group is closed under multiplication")
    }

    pub fn inverse(&self, a: usize) -> usize {
        let m = imat::inverse_unimodular(&self.elements[a].action)
            .expect("Weyl actions are unimodular");
        *self.index.get(&m).expect("group is closed under inversion")
    }

    fn simple(&self, i: usize) -> usize {
        let m = self.datum.reflection_char(i);
        *self.index.get(&m).expect("simple reflections are elements")
    }

    pub fn left_mul_simple(&self, i: usize, w: usize) -> usize {
        self.multiply(self.simple(i), w)
    }

    pub fn length(&self, w: usize) -> usize {
        self.elements[w].length
    }

    /// All of W_I, as indices.
    pub fn subgroup(&self, i_set: &[usize]) -> Vec<usize> {
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(self.identity());
        queue.push_back(self.identity());
        while let Some(w) = queue.pop_front() {
            for &i in i_set {
                let next = self.multiply(w, self.simple(i));
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        let mut out: Vec<usize> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// The longest element of W_I (w_0 when I is all of Delta).
    pub fn longest_element(&self, i_set: &[usize]) -> usize {
        *self
            .subgroup(i_set)
            .iter()
            .max_by_key(|&&w| self.length(w))
            .expect("subgroup contains the identity")
    }

    /// Standard Bruhat order by the lifting property.
    pub fn bruhat_leq(&self, u: usize, w: usize) -> bool {
        if u == self.identity() {
            return true;
        }
        if self.length(u) > self.length(w) {
            return false;
        }
        if w == self.identity() {
            return u == self.identity();
        }
        let i = (0..self.datum.simple_roots.len())
            .find(|&i| self.length(self.left_mul_simple(i, w)) < self.length(w))
            .expect("non-identity element has a left descent");
        let sw = self.left_mul_simple(i, w);
        let su = self.left_mul_simple(i, u);
        let u_min = if self.length(su) < self.length(u) {
            su
        } else {
            u
        };
        self.bruhat_leq(u_min, sw)
    }

    /// The set {}^I W of minimal-length right-coset representatives of W_I\W.
    pub fn minimal_coset_reps(&self, i_set: &[usize]) -> Vec<usize> {
        (0..self.order())
            .filter(|&w| {
                i_set
                    .iter()
                    .all(|&i| self.length(self.left_mul_simple(i, w)) == self.length(w) + 1)
            })
            .collect()
    }

    /// sigma(w): conjugation of the action matrix by sigma_char.
    pub fn sigma_conjugate(&self, w: usize) -> usize {
        let s = &self.datum.sigma_char;
        let s_inv = imat::inverse_unimodular(s).expect("sigma is invertible over Z");
        let m = imat::mul(s, &imat::mul(&self.elements[w].action, &s_inv));
        *self
            .index
            .get(&m)
            .expect("sigma permutes the simple reflections, so conjugation stays in W")
    }

    /// The closure order: some sigma-twisted W_I-conjugate of u lies below w
    /// in Bruhat order, i.e. w1 * u * sigma(w1)^{-1} <= w for some w1 in W_I.
    pub fn twisted_leq(&self, u: usize, w: usize, i_set: &[usize]) -> bool {
        self.subgroup(i_set).iter().any(|&w1| {
            let tw = self.multiply(self.multiply(w1, u), self.inverse(self.sigma_conjugate(w1)));
            self.bruhat_leq(tw, w)
        })
    }

    /// z := sigma(w_{0,I}) * w_0.
    pub fn z_element(&self, i_set: &[usize]) -> usize {
        let w0i = self.longest_element(i_set);
        let w0 = self.longest_element(&(0..self.datum.simple_roots.len()).collect::<Vec<_>>());
        self.multiply(self.sigma_conjugate(w0i), w0)
    }
}

/// Positive roots of the Levi: support contained in I.
pub fn levi_positive_roots(
    datum: &BasedRootDatum,
    roots: &RootSystem,
    i_set: &[usize],
) -> Vec<Vec<i64>> {
    let simple = crate::linalg::QMat::from_rows(
        datum
            .simple_roots
            .iter()
            .map(|r| crate::linalg::qvec(r))
            .collect(),
    )
    .expect("rectangular")
    .transpose();
    roots
        .positive_roots
        .iter()
        .filter(|beta| {
            let coords = simple
                .solve(&crate::linalg::qvec(beta))
                .expect("dims")
                .expect("root in span");
            coords
                .iter()
                .enumerate()
                .all(|(j, c)| i_set.contains(&j) || num_traits::Zero::is_zero(c))
        })
        .cloned()
        .collect()
}

/// The action matrix of w_{0,I} on X*(T), computed inside W_I alone (no full
/// group enumeration): the unique element inverting every Levi-positive root.
pub fn levi_longest_action(datum: &BasedRootDatum, roots: &RootSystem, i_set: &[usize]) -> IMat {
    let gens: Vec<IMat> = i_set.iter().map(|&i| datum.reflection_char(i)).collect();
    let id = imat::identity(datum.rank);
    let mut seen: HashSet<IMat> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(m) = queue.pop_front() {
        for g in &gens {
            let next = imat::mul(&m, g);
            if !seen.contains(&next) {
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    let levi_pos = levi_positive_roots(datum, roots, i_set);
    let positive: HashSet<Vec<i64>> = roots.positive_roots.iter().cloned().collect();
    seen.into_iter()
        .max_by_key(|m| {
            (
                levi_pos
                    .iter()
                    .filter(|beta| !positive.contains(&imat::apply(m, beta)))
                    .count(),
                // tie-break deterministically; the maximum is unique anyway
                m.iter().flatten().copied().collect::<Vec<i64>>(),
            )
        })
        .expect("W_I contains the identity")
}

/// The stratification poset: {}^I W with dimensions and the twisted order.
pub struct StrataPoset {
    /// (element index in the Weyl group, dimension of the stratum)
    pub elements: Vec<(usize, usize)>,
    /// order[a][b] = true iff elements[a] is in the closure of elements[b].
    pub order: Vec<Vec<bool>>,
    pub top: usize,
    /// Codimension-one strata, one per alpha in Delta^P, as group indices.
    pub codim_one: Vec<(usize, usize)>,
    pub dim_g: usize,
    pub dim_p: usize,
}

pub fn strata_poset(group: &WeylGroup, zip: &ZipDatum) -> Result<StrataPoset> {
    let i_set = &zip.i_set;
    let n = group.datum.rank;
    let n_pos = group.roots.positive_roots.len();
    let n_pos_levi = levi_positive_roots(&group.datum, &group.roots, i_set).len();
    let dim_p = n + n_pos + n_pos_levi;
    let dim_g = n + 2 * n_pos;

    let reps = group.minimal_coset_reps(i_set);
    let elements: Vec<(usize, usize)> =
        reps.iter().map(|&w| (w, group.length(w) + dim_p)).collect();
    let order: Vec<Vec<bool>> = reps
        .iter()
        .map(|&a| {
            reps.iter()
                .map(|&b| group.twisted_leq(a, b, i_set))
                .collect()
        })
        .collect();

    let all: Vec<usize> = (0..group.datum.simple_roots.len()).collect();
    let w0 = group.longest_element(&all);
    let w0i = group.longest_element(i_set);
    let top = group.multiply(w0i, w0);
    if !reps.contains(&top) {
        return Err(Error::defect(
            "w_{0,I} w_0 is not a minimal coset representative",
        ));
    }

    let mut codim_one = Vec::new();
    for &alpha in &zip.delta_p {
        let s = group
            .index_of(&group.datum.reflection_char(alpha))
            .expect("simple reflection");
        let w = group.multiply(group.multiply(w0i, s), w0);
        if !reps.contains(&w) || group.length(w) + 1 != group.length(top) {
            return Err(Error::defect(
                "codimension-one stratum representative is malformed",
            ));
        }
        codim_one.push((alpha, w));
    }

    Ok(StrataPoset {
        elements,
        order,
        top,
        codim_one,
        dim_g,
        dim_p,
    })
}

fn word_name(word: &[usize]) -> String {
    if word.is_empty() {
        "e".to_string()
    } else {
        word.iter()
            .map(|i| format!("s{}", i + 1))
            .collect::<Vec<_>>()
            .join("")
    }
}

impl StrataPoset {
    /// Strict cover relations by transitive reduction; no gradedness assumed.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let k = self.elements.len();
        let mut covers = Vec::new();
        for a in 0..k {
            for b in 0..k {
                if a == b || !self.order[a][b] {
                    continue;
                }
                let through =
                    (0..k).any(|v| v != a && v != b && self.order[a][v] && self.order[v][b]);
                if !through {
                    covers.push((a, b));
                }
            }
        }
        covers
    }

    pub fn to_json(&self, group: &WeylGroup) -> Value {
        let elements: Vec<Value> = self
            .elements
            .iter()
            .map(|&(w, dim)| {
                json!({
                    "dim": dim,
                    "length": group.length(w),
                    "name": word_name(&group.element(w).reduced_word),
                    "reduced_word": group.element(w).reduced_word.iter().map(|i| i + 1).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "codim_one": self.codim_one.iter().map(|&(alpha, w)| json!({
                "alpha": format!("alpha{}", alpha + 1),
                "name": word_name(&group.element(w).reduced_word),
            })).collect::<Vec<_>>(),
            "dim_g": self.dim_g,
            "dim_p": self.dim_p,
            "elements": elements,
            "order": self.order.iter().map(|row| row.iter().map(|&b| b as u8).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "top": word_name(&group.element(self.top).reduced_word),
        })
    }

    pub fn to_dot(&self, group: &WeylGroup) -> String {
        let mut out = String::from("digraph strata {\n");
        for &(w, dim) in &self.elements {
            let name = word_name(&group.element(w).reduced_word);
            out.push_str(&format!("  \"{name}\" [label=\"{name} (dim {dim})\"];\n"));
        }
        for (a, b) in self.covers() {
            let na = word_name(&group.element(self.elements[a].0).reduced_word);
            let nb = word_name(&group.element(self.elements[b].0).reduced_word);
            out.push_str(&format!("  \"{nb}\" -> \"{na}\";\n"));
        }
        out.push_str("}\n");
        out
    }
}
