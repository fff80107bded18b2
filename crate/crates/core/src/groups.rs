//! Finite subgroups of SO(8) generated by octonion right multiplications.
//!
//! Everything here is exact. Freeness on `S^7` is decided by exact
//! determinants: `g` fixes a point of the sphere iff `det(g - I) = 0`.

use std::collections::{HashMap, VecDeque};

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{pullback, Form, OrthMap, Vector};
use crate::linalg;
use crate::octonion::{designate_quaternion_frame, CayleyTable, Octonion};
use crate::{q, Rational};

pub const DEFAULT_CAP: usize = 10_000;

/// A closed, finite set of exact matrices together with the generators it
/// came from and a shortest word for each element.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    dim: usize,
    elements: Vec<OrthMap>,
    generators: Vec<OrthMap>,
    labels: Vec<String>,
    index: HashMap<OrthMap, usize>,
}

impl FiniteGroup {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[OrthMap] {
        &self.elements
    }

    pub fn generators(&self) -> &[OrthMap] {
        &self.generators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn contains(&self, g: &OrthMap) -> bool {
        self.index.contains_key(g)
    }

    pub fn position(&self, g: &OrthMap) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// Rebuilds a group from an explicit element list, checking the group
    /// axioms exactly.
    pub fn from_elements(
        elements: Vec<OrthMap>,
        generators: Vec<OrthMap>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let dim = elements
            .first()
            .map(OrthMap::dim)
            .ok_or_else(|| Error::InvalidArgument("empty element list".into()))?;
        let labels =
            labels.unwrap_or_else(|| (0..elements.len()).map(|i| format!("x{i}")).collect());
        if labels.len() != elements.len() {
            return Err(Error::InvalidArgument(format!(
                "{} labels for {} elements",
                labels.len(),
                elements.len()
            )));
        }
        let mut index = HashMap::with_capacity(elements.len());
        for (i, g) in elements.iter().enumerate() {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: g.dim(),
                });
            }
            if index.insert(g.clone(), i).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "duplicate element {}",
                    labels[i]
                )));
            }
        }
        let group = FiniteGroup {
            dim,
            elements,
            generators,
            labels,
            index,
        };
        group.check_axioms()?;
        Ok(group)
    }

    fn check_axioms(&self) -> Result<()> {
        if !self.contains(&OrthMap::identity(self.dim)) {
            return Err(Error::InvalidArgument(
                "element list lacks the identity".into(),
            ));
        }
        for (g, l) in self.elements.iter().zip(&self.labels) {
            if !g.is_orthogonal() {
                return Err(Error::NotOrthonormal(format!(
                    "element {l} is not orthogonal"
                )));
            }
            if !self.contains(&g.transpose()) {
                return Err(Error::InvalidArgument(format!("inverse of {l} missing")));
            }
        }
        let closed = self
            .elements
            .par_iter()
            .all(|a| self.elements.iter().all(|b| self.contains(&(a * b))));
        if !closed {
            return Err(Error::InvalidArgument(
                "element list is not closed under products".into(),
            ));
        }
        Ok(())
    }

    pub fn is_abelian(&self) -> bool {
        self.elements
            .iter()
            .all(|a| self.elements.iter().all(|b| a * b == b * a))
    }

    /// Order of the element at `i`.
    pub fn element_order(&self, i: usize) -> usize {
        let g = &self.elements[i];
        let mut p = g.clone();
        let mut n = 1;
        while !p.is_identity() {
            p = &p * g;
            n += 1;
        }
        n
    }

    /// `P G P^{-1}` for orthogonal `P`, keeping labels.
    pub fn conjugate(&self, p: &OrthMap) -> Result<FiniteGroup> {
        if !p.is_orthogonal() {
            return Err(Error::NotOrthonormal("conjugating matrix".into()));
        }
        let pt = p.transpose();
        let conj = |g: &OrthMap| &(p * g) * &pt;
        let elements: Vec<OrthMap> = self.elements.iter().map(conj).collect();
        let generators = self.generators.iter().map(conj).collect();
        let index = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, g)| (g, i))
            .collect();
        Ok(FiniteGroup {
            dim: self.dim,
            elements,
            generators,
            labels: self.labels.clone(),
            index,
        })
    }
}

/// Breadth-first closure of `generators` under right multiplication.
///
/// Elements are ordered by their shortest generator word (length first,
/// then lexicographic on generator indices). Each element is labelled by
/// that word, e.g. `g1*g3` for `G_1 G_3`; the identity is `e`.
pub fn closure(generators: &[OrthMap], cap: usize) -> Result<FiniteGroup> {
    let dim = generators
        .first()
        .map(OrthMap::dim)
        .ok_or_else(|| Error::InvalidArgument("closure needs at least one generator".into()))?;
    for (i, g) in generators.iter().enumerate() {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: g.dim(),
            });
        }
        if !g.is_orthogonal() {
            return Err(Error::NotOrthonormal(format!(
                "generator g{} is not orthogonal",
                i + 1
            )));
        }
    }
    let identity = OrthMap::identity(dim);
    let mut elements = vec![identity.clone()];
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut index = HashMap::from([(identity, 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(cur) = queue.pop_front() {
        for (gi, g) in generators.iter().enumerate() {
            let p = &elements[cur] * g;
            if index.contains_key(&p) {
                continue;
            }
            if elements.len() >= cap {
                return Err(Error::CapExceeded { cap });
            }
            let mut w = words[cur].clone();
            w.push(gi);
            index.insert(p.clone(), elements.len());
            queue.push_back(elements.len());
            elements.push(p);
            words.push(w);
        }
    }
    let labels = words
        .iter()
        .map(|w| {
            if w.is_empty() {
                "e".to_string()
            } else {
                w.iter()
                    .map(|g| format!("g{}", g + 1))
                    .collect::<Vec<_>>()
                    .join("*")
            }
        })
        .collect();
    Ok(FiniteGroup {
        dim,
        elements,
        generators: generators.to_vec(),
        labels,
        index,
    })
}

fn check_frame(frame: &[Octonion]) -> Result<()> {
    let m = frame.len();
    if !(1..=7).contains(&m) {
        return Err(Error::InvalidArgument(format!(
            "frame size {m} outside 1..=7"
        )));
    }
    for (a, x) in frame.iter().enumerate() {
        if !x.is_imaginary() {
            return Err(Error::NotOrthonormal(format!(
                "sigma_{} = {x} is not imaginary",
                a + 1
            )));
        }
        if !x.norm_sq().is_one() {
            return Err(Error::NotOrthonormal(format!(
                "|sigma_{}|^2 = {}",
                a + 1,
                x.norm_sq()
            )));
        }
        for (b, y) in frame.iter().enumerate().skip(a + 1) {
            if !x.inner(y).is_zero() {
                return Err(Error::NotOrthonormal(format!(
                    "<sigma_{}, sigma_{}> = {}",
                    a + 1,
                    b + 1,
                    x.inner(y)
                )));
            }
        }
    }
    Ok(())
}

/// Closure of `R_{sigma_1}, .., R_{sigma_m}` without the order check.
pub fn frame_closure(table: &CayleyTable, frame: &[Octonion], cap: usize) -> Result<FiniteGroup> {
    check_frame(frame)?;
    let gens: Vec<OrthMap> = frame.iter().map(|x| table.right_mult_matrix(x)).collect();
    closure(&gens, cap)
}

/// `G_sigma` for an orthonormal frame of unit imaginary octonions, required
/// to have order `2^{m+1}`.
pub fn frame_group(table: &CayleyTable, frame: &[Octonion], cap: usize) -> Result<FiniteGroup> {
    let g = frame_closure(table, frame, cap)?;
    let expected = 1usize << (frame.len() + 1);
    if g.order() != expected {
        return Err(Error::OrderMismatch {
            expected,
            found: g.order(),
        });
    }
    Ok(g)
}

/// Parses `e1,e2,e3` style basis labels (imaginary units `e1..e7`).
pub fn parse_frame_labels(spec: &str) -> Result<Vec<Octonion>> {
    spec.split(',')
        .map(|s| {
            let s = s.trim();
            let (neg, body) = match s.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, s),
            };
            let k: usize = body
                .strip_prefix('e')
                .and_then(|d| d.parse().ok())
                .filter(|k| (1..8).contains(k))
                .ok_or_else(|| Error::Parse(format!("frame entry {s:?} is not one of e1..e7")))?;
            let u = Octonion::unit(k);
            Ok(if neg { -&u } else { u })
        })
        .collect()
}

/// Words of the 16 listed maps of `G_sigma(4)`, as index lists into
/// `(i, j, k, l)`. A word `[a, b]` is `o -> (o a) b`.
pub const SIGMA4_WORDS: [&[usize]; 16] = [
    &[],
    &[0],
    &[1],
    &[2],
    &[3],
    &[0, 1],
    &[0, 2],
    &[0, 3],
    &[1, 2],
    &[1, 3],
    &[2, 3],
    &[0, 1, 2],
    &[0, 2, 3],
    &[0, 1, 3],
    &[1, 2, 3],
    &[0, 1, 2, 3],
];

/// The 32 maps `o -> ±o, ±oi, .., ±(((oi)j)k)l` as matrices, labelled.
pub fn sigma4_listed_maps(
    table: &CayleyTable,
    frame: &[Octonion; 4],
    names: &[String; 4],
) -> Vec<(String, OrthMap)> {
    let r: Vec<OrthMap> = frame.iter().map(|x| table.right_mult_matrix(x)).collect();
    let mut out = Vec::with_capacity(32);
    for word in SIGMA4_WORDS {
        let mut m = OrthMap::identity(8);
        let mut label = "o".to_string();
        for &a in word {
            // o -> (..)a composes on the left
            m = &r[a] * &m;
            label = if label.len() == 1 {
                format!("o{}", names[a])
            } else {
                format!("({label}){}", names[a])
            };
        }
        out.push((format!("+{label}"), m.clone()));
        out.push((format!("-{label}"), -&m));
    }
    out
}

/// Block maps `(q, q') -> (q u, q' u)` on `O = H + H l`, with
/// `H = span(e0, i, j, k)` from the designated quaternion frame and the
/// identification `(q, q') -> q + q' . l`.
pub fn sp2_block_matrix(table: &CayleyTable, frame: &[Octonion; 4], u: &Octonion) -> OrthMap {
    let [i, j, k, l] = frame;
    let h = [Octonion::one(), i.clone(), j.clone(), k.clone()];
    let embed = |q0: &Octonion, q1: &Octonion| (q0 + &table.mul(q1, l)).to_vector();
    let zero = Octonion::zero();
    let mut src = Vec::with_capacity(8);
    let mut img = Vec::with_capacity(8);
    for b in &h {
        src.push(embed(b, &zero));
        img.push(embed(&table.mul(b, u), &zero));
    }
    for b in &h {
        src.push(embed(&zero, b));
        img.push(embed(&zero, &table.mul(b, u)));
    }
    let s = OrthMap::from_columns(&src).expect("eight columns");
    let t = OrthMap::from_columns(&img).expect("eight columns");
    // s is orthogonal: H and H l are orthogonal copies of R^4
    &t * &s.transpose()
}

/// The order-8 group `(q, q') -> ±(q, q'), ±(qi, q'i), ±(qj, q'j), ±(qk, q'k)`.
pub fn sp2_example_group(table: &CayleyTable) -> Result<FiniteGroup> {
    let frame = designate_quaternion_frame(table).as_array();
    let gi = sp2_block_matrix(table, &frame, &frame[0]);
    let gj = sp2_block_matrix(table, &frame, &frame[1]);
    closure(&[gi, gj], DEFAULT_CAP)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointWitness {
    pub label: String,
    #[serde(serialize_with = "crate::json::ser_vectors")]
    pub kernel_basis: Vec<Vector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreenessVerdict {
    pub free: bool,
    pub witnesses: Vec<FixedPointWitness>,
}

fn fixed_space(g: &OrthMap) -> Option<Vec<Vector>> {
    let m = g - &OrthMap::identity(g.dim());
    if !m.determinant().is_zero() {
        return None;
    }
    Some(
        linalg::nullspace(&m.rows(), g.dim())
            .into_iter()
            .map(Vector::new)
            .collect(),
    )
}

/// `G` acts freely on `S^7` iff no non-identity element has eigenvalue 1.
pub fn is_free_on_sphere(group: &FiniteGroup) -> FreenessVerdict {
    let witnesses: Vec<FixedPointWitness> = group
        .elements
        .par_iter()
        .zip(group.labels.par_iter())
        .filter(|(g, _)| !g.is_identity())
        .filter_map(|(g, l)| {
            fixed_space(g).map(|kernel_basis| FixedPointWitness {
                label: l.clone(),
                kernel_basis,
            })
        })
        .collect();
    FreenessVerdict {
        free: witnesses.is_empty(),
        witnesses,
    }
}

/// Exact `g^* f = f`.
pub fn preserves_form(g: &OrthMap, f: &Form) -> Result<bool> {
    Ok(pullback(g, f)? == *f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub order: usize,
    pub is_free_on_sphere: bool,
    pub fixed_point_witnesses: Vec<FixedPointWitness>,
    pub preserves_spin7: bool,
    pub violating_elements: Vec<String>,
}

pub fn classify(group: &FiniteGroup, phi: &Form) -> Result<ClassificationReport> {
    if group.dim != 8 || phi.dim() != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: if group.dim != 8 { group.dim } else { phi.dim() },
        });
    }
    let freeness = is_free_on_sphere(group);
    let preserved: Vec<bool> = group
        .elements
        .par_iter()
        .map(|g| preserves_form(g, phi))
        .collect::<Result<_>>()?;
    let violating_elements: Vec<String> = group
        .labels
        .iter()
        .zip(&preserved)
        .filter(|(_, ok)| !**ok)
        .map(|(l, _)| l.clone())
        .collect();
    Ok(ClassificationReport {
        order: group.order(),
        is_free_on_sphere: freeness.free,
        fixed_point_witnesses: freeness.witnesses,
        preserves_spin7: violating_elements.is_empty(),
        violating_elements,
    })
}

/// Householder reflection `I - 2 v v^T / |v|^2`, exact.
pub fn householder(v: &Vector) -> OrthMap {
    let n = v.dim();
    let two_over = q(2) / v.norm_sq();
    let c = v.components();
    OrthMap::from_fn(n, |i, j| {
        let delta = if i == j {
            Rational::one()
        } else {
            Rational::zero()
        };
        delta - &c[i] * &c[j] * &two_over
    })
}

/// Rational orthonormal `m`-frame in `Im O`: the first `m` columns of a
/// product of three Householder reflections with small integer vectors.
pub fn random_rational_frame<R: Rng>(m: usize, rng: &mut R) -> Vec<Octonion> {
    let mut qm = OrthMap::identity(7);
    for _ in 0..3 {
        let v = loop {
            let xs: Vec<i64> = (0..7).map(|_| rng.gen_range(-3..=3)).collect();
            if xs.iter().any(|&x| x != 0) {
                break Vector::from_integers(&xs);
            }
        };
        qm = &qm * &householder(&v);
    }
    (0..m)
        .map(|j| Octonion::from_imaginary(&qm.column(j)).expect("seven components"))
        .collect()
}

/// Signed permutation matrix drawn uniformly.
pub fn random_signed_permutation<R: Rng>(dim: usize, rng: &mut R) -> OrthMap {
    let mut perm: Vec<usize> = (0..dim).collect();
    for i in (1..dim).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let signs: Vec<i8> = (0..dim)
        .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
        .collect();
    OrthMap::signed_permutation(&perm, &signs)
}
