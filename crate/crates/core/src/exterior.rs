//! Exact exterior algebra on Euclidean `R^n`, `n <= 8`.
//!
//! Forms are sparse maps from strictly increasing multi-indices to rational
//! coefficients. Internally every index is a 0-based *position*; the public
//! *label* of a basis covector is `position + label_offset(dim)`, so `R^7` is
//! spanned by `e1..e7` and `R^8` by `e0..e7`. Orientation is the increasing
//! basis order and every Hodge sign is derived from it.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::Rational;

pub const MAX_DIM: usize = 8;

/// Offset between basis positions and the labels used in `e_{...}` names.
pub fn label_offset(dim: usize) -> usize {
    if dim == 7 {
        1
    } else {
        0
    }
}

/// Sorts `v` in place and returns the sign of the sorting permutation, or
/// `None` when an entry repeats.
pub(crate) fn sort_with_sign(v: &mut [usize]) -> Option<i8> {
    let mut sign = 1i8;
    // insertion sort; inputs have at most 8 entries
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

fn signed(c: Rational, sign: i8) -> Rational {
    if sign < 0 {
        -c
    } else {
        c
    }
}

/// All strictly increasing `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    /// Builds an index from 0-based positions.
    pub fn from_positions(positions: Vec<usize>, dim: usize) -> Result<Self> {
        let ok = positions.windows(2).all(|w| w[0] < w[1]) && positions.iter().all(|&p| p < dim);
        if !ok {
            return Err(Error::InvalidIndex {
                labels: positions.iter().map(|p| p + label_offset(dim)).collect(),
                dim,
            });
        }
        Ok(MultiIndex(positions))
    }

    /// Builds an index from basis labels (`1..=7` on `R^7`, `0..=7` on `R^8`).
    pub fn from_labels(labels: &[usize], dim: usize) -> Result<Self> {
        let off = label_offset(dim);
        if labels.iter().any(|&l| l < off) {
            return Err(Error::InvalidIndex {
                labels: labels.to_vec(),
                dim,
            });
        }
        Self::from_positions(labels.iter().map(|l| l - off).collect(), dim)
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    pub fn labels(&self, dim: usize) -> Vec<usize> {
        let off = label_offset(dim);
        self.0.iter().map(|p| p + off).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn complement(&self, dim: usize) -> MultiIndex {
        MultiIndex((0..dim).filter(|p| !self.0.contains(p)).collect())
    }
}

/// Exact alternating form. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    dim: usize,
    degree: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl Form {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Form {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: usize, c: Rational) -> Self {
        let mut f = Form::zero(dim, 0);
        f.accumulate(MultiIndex(Vec::new()), c);
        f
    }

    pub fn one(dim: usize) -> Self {
        Form::scalar(dim, Rational::one())
    }

    /// `e_{0..n}` in the increasing orientation.
    pub fn volume(dim: usize) -> Self {
        let mut f = Form::zero(dim, dim);
        f.accumulate(MultiIndex((0..dim).collect()), Rational::one());
        f
    }

    /// Basis covector at 0-based position `pos`.
    pub fn covector(dim: usize, pos: usize) -> Self {
        let mut f = Form::zero(dim, 1);
        f.accumulate(MultiIndex(vec![pos]), Rational::one());
        f
    }

    /// `coef * e_{labels}`. Labels must be strictly increasing.
    pub fn monomial(dim: usize, labels: &[usize], coef: Rational) -> Result<Self> {
        check_dim(dim)?;
        let idx = MultiIndex::from_labels(labels, dim)?;
        let mut f = Form::zero(dim, labels.len());
        f.accumulate(idx, coef);
        Ok(f)
    }

    /// Sums terms given by arbitrary (possibly unsorted) label lists; each is
    /// re-sorted with its permutation sign, repeated labels vanish.
    pub fn from_labeled_terms<I>(dim: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Rational)>,
    {
        check_dim(dim)?;
        let off = label_offset(dim);
        let mut f = Form::zero(dim, degree);
        for (labels, c) in terms {
            if labels.len() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: labels.len(),
                });
            }
            if labels.iter().any(|&l| l < off || l - off >= dim) {
                return Err(Error::InvalidIndex { labels, dim });
            }
            let mut pos: Vec<usize> = labels.iter().map(|l| l - off).collect();
            if let Some(s) = sort_with_sign(&mut pos) {
                f.accumulate(MultiIndex(pos), signed(c, s));
            }
        }
        Ok(f)
    }

    pub(crate) fn accumulate(&mut self, idx: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(idx);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coef_at(&self, positions: &[usize]) -> Rational {
        self.terms
            .get(&MultiIndex(positions.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `e_{labels}`; labels must be strictly increasing.
    pub fn coef(&self, labels: &[usize]) -> Rational {
        match MultiIndex::from_labels(labels, self.dim) {
            Ok(idx) => self.terms.get(&idx).cloned().unwrap_or_else(Rational::zero),
            Err(_) => Rational::zero(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Form {
        let mut f = Form::zero(self.dim, self.degree);
        if !c.is_zero() {
            for (i, x) in &self.terms {
                f.terms.insert(i.clone(), x * c);
            }
        }
        f
    }

    pub fn try_add(&self, other: &Form) -> Result<Form> {
        self.check_same_space(other)?;
        let mut f = self.clone();
        for (i, x) in &other.terms {
            f.accumulate(i.clone(), x.clone());
        }
        Ok(f)
    }

    pub fn try_sub(&self, other: &Form) -> Result<Form> {
        self.try_add(&-other)
    }

    fn check_same_space(&self, other: &Form) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    /// Induced Euclidean inner product: the monomials `e_I` are orthonormal.
    pub fn inner(&self, other: &Form) -> Result<Rational> {
        self.check_same_space(other)?;
        Ok(self
            .terms
            .iter()
            .filter_map(|(i, x)| other.terms.get(i).map(|y| x * y))
            .sum())
    }

    pub fn norm_sq(&self) -> Rational {
        self.terms.values().map(|x| x * x).sum()
    }

    /// Value on `degree` vectors: sum of coefficient times the minor.
    pub fn eval(&self, vectors: &[Vector]) -> Result<Rational> {
        if vectors.len() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: vectors.len(),
            });
        }
        for v in vectors {
            if v.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: v.dim(),
                });
            }
        }
        let mut acc = Rational::zero();
        for (idx, c) in &self.terms {
            let minor: Vec<Vec<Rational>> = idx
                .0
                .iter()
                .map(|&p| vectors.iter().map(|v| v.0[p].clone()).collect())
                .collect();
            acc += c * linalg::determinant(&minor);
        }
        Ok(acc)
    }

    /// Embeds a form on `R^m` into `R^{m+shift}` by moving every position up.
    pub fn shift_into(&self, dim: usize, shift: usize) -> Result<Form> {
        if self.dim + shift > dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim + shift,
                found: dim,
            });
        }
        let mut f = Form::zero(dim, self.degree);
        for (i, c) in &self.terms {
            f.terms.insert(
                MultiIndex(i.0.iter().map(|p| p + shift).collect()),
                c.clone(),
            );
        }
        Ok(f)
    }

    pub fn max_abs_coef(&self) -> Rational {
        self.terms
            .values()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::InvalidArgument(format!(
            "ambient dimension {dim} outside 1..={MAX_DIM}"
        )));
    }
    Ok(())
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (idx, c)) in self.terms.iter().enumerate() {
            let name: String = if idx.is_empty() {
                "1".into()
            } else {
                format!(
                    "e{}",
                    idx.labels(self.dim)
                        .iter()
                        .map(|l| l.to_string())
                        .collect::<String>()
                )
            };
            let sign = match (n, c.is_negative()) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            let mag = c.abs();
            if mag.is_one() && !idx.is_empty() {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{mag}*{name}")?;
            }
        }
        Ok(())
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.scale(&-Rational::one())
    }
}

impl Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        -&self
    }
}

/// Panics on a dimension or degree mismatch; use [`Form::try_add`] otherwise.
impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        self.try_add(rhs).expect("adding forms of different type")
    }
}

impl Add for Form {
    type Output = Form;
    fn add(self, rhs: Form) -> Form {
        &self + &rhs
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self.try_sub(rhs)
            .expect("subtracting forms of different type")
    }
}

impl Sub for Form {
    type Output = Form;
    fn sub(self, rhs: Form) -> Form {
        &self - &rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector(Vec<Rational>);

impl Vector {
    pub fn new(components: Vec<Rational>) -> Self {
        Vector(components)
    }

    pub fn zero(dim: usize) -> Self {
        Vector(vec![Rational::zero(); dim])
    }

    pub fn basis(dim: usize, pos: usize) -> Self {
        let mut v = Vector::zero(dim);
        v.0[pos] = Rational::one();
        v
    }

    pub fn from_integers(xs: &[i64]) -> Self {
        Vector(
            xs.iter()
                .map(|&x| Rational::from_integer(x.into()))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Rational] {
        &self.0
    }

    pub fn dot(&self, other: &Vector) -> Rational {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> Rational {
        self.dot(self)
    }

    pub fn scale(&self, c: &Rational) -> Vector {
        Vector(self.0.iter().map(|x| x * c).collect())
    }

    /// The metric dual 1-form.
    pub fn flat(&self) -> Form {
        let mut f = Form::zero(self.dim(), 1);
        for (p, x) in self.0.iter().enumerate() {
            f.accumulate(MultiIndex(vec![p]), x.clone());
        }
        f
    }

    /// The metric dual of a 1-form.
    pub fn sharp(form: &Form) -> Result<Vector> {
        if form.degree() != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: form.degree(),
            });
        }
        let mut v = Vector::zero(form.dim());
        for (i, c) in form.terms() {
            v.0[i.0[0]] = c.clone();
        }
        Ok(v)
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// Square matrix with exact entries, row-major. Used for group elements,
/// pullbacks and skew generators alike; orthogonality is checked on demand.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrthMap {
    dim: usize,
    entries: Vec<Rational>,
}

impl OrthMap {
    pub fn zeros(dim: usize) -> Self {
        OrthMap {
            dim,
            entries: vec![Rational::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        OrthMap { dim, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        Ok(OrthMap {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vector]) -> Result<Self> {
        let dim = columns.len();
        if let Some(bad) = columns.iter().find(|c| c.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self::from_fn(dim, |i, j| columns[j].0[i].clone()))
    }

    /// `e_i -> signs[i] * e_{perm[i]}`.
    pub fn signed_permutation(perm: &[usize], signs: &[i8]) -> Self {
        let dim = perm.len();
        let mut m = OrthMap::zeros(dim);
        for (i, (&p, &s)) in perm.iter().zip(signs).enumerate() {
            m.entries[p * dim + i] = signed(Rational::one(), s);
        }
        m
    }

    pub fn diagonal(diag: &[Rational]) -> Self {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector((0..self.dim).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn transpose(&self) -> OrthMap {
        Self::from_fn(self.dim, |i, j| self.get(j, i).clone())
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        Vector(
            (0..self.dim)
                .map(|i| self.row(i).iter().zip(&v.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn try_mul(&self, other: &OrthMap) -> Result<OrthMap> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let n = self.dim;
        let mut m = OrthMap::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        m.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn scale(&self, c: &Rational) -> OrthMap {
        OrthMap {
            dim: self.dim,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == OrthMap::identity(self.dim)
    }

    /// Exact `M^T M = I`.
    pub fn is_orthogonal(&self) -> bool {
        (&self.transpose() * self).is_identity()
    }

    pub fn is_skew(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| *self.get(i, j) == -self.get(j, i).clone()))
    }

    pub fn determinant(&self) -> Rational {
        linalg::determinant(&self.rows())
    }

    pub fn trace(&self) -> Rational {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    /// Skew basis `E_ij - E_ji`, `i < j`, in lexicographic order.
    pub fn skew_basis(dim: usize) -> Vec<OrthMap> {
        let mut out = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                let mut m = OrthMap::zeros(dim);
                m.entries[i * dim + j] = Rational::one();
                m.entries[j * dim + i] = -Rational::one();
                out.push(m);
            }
        }
        out
    }
}

/// Panics on a dimension mismatch; use [`OrthMap::try_mul`] otherwise.
impl Mul for &OrthMap {
    type Output = OrthMap;
    fn mul(self, rhs: &OrthMap) -> OrthMap {
        self.try_mul(rhs)
            .expect("multiplying matrices of different size")
    }
}

impl Sub for &OrthMap {
    type Output = OrthMap;
    fn sub(self, rhs: &OrthMap) -> OrthMap {
        assert_eq!(self.dim, rhs.dim, "subtracting matrices of different size");
        OrthMap {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &OrthMap {
    type Output = OrthMap;
    fn neg(self) -> OrthMap {
        self.scale(&-Rational::one())
    }
}

fn check_pair(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Exterior product. The sign of each merged term is the parity of the
/// merge permutation; a result of degree above `dim` is the zero form.
pub fn wedge(a: &Form, b: &Form) -> Result<Form> {
    check_pair(a.dim, b.dim)?;
    let mut out = Form::zero(a.dim, a.degree + b.degree);
    if a.degree + b.degree > a.dim {
        return Ok(out);
    }
    for (i, x) in &a.terms {
        for (j, y) in &b.terms {
            let mut merged: Vec<usize> = i.0.iter().chain(&j.0).copied().collect();
            if let Some(s) = sort_with_sign(&mut merged) {
                out.accumulate(MultiIndex(merged), signed(x * y, s));
            }
        }
    }
    Ok(out)
}

/// Hodge star for the Euclidean metric: `*e_I = s e_{I^c}` where
/// `e_I ^ e_{I^c} = s vol`.
pub fn hodge(a: &Form) -> Form {
    let mut out = Form::zero(a.dim, a.dim - a.degree.min(a.dim));
    if a.degree > a.dim {
        return out;
    }
    for (i, x) in &a.terms {
        let comp = i.complement(a.dim);
        let mut merged: Vec<usize> = i.0.iter().chain(&comp.0).copied().collect();
        let s = sort_with_sign(&mut merged).expect("index and complement are disjoint");
        out.accumulate(comp, signed(x.clone(), s));
    }
    out
}

/// Interior product `i_v a`, inserting `v` into the first slot.
/// On a 0-form the result is the zero 0-form.
pub fn interior(v: &Vector, a: &Form) -> Result<Form> {
    check_pair(a.dim, v.dim())?;
    if a.degree == 0 {
        return Ok(Form::zero(a.dim, 0));
    }
    let mut out = Form::zero(a.dim, a.degree - 1);
    for (i, x) in &a.terms {
        for (s, &p) in i.0.iter().enumerate() {
            let vp = &v.0[p];
            if vp.is_zero() {
                continue;
            }
            let mut rest = i.0.clone();
            rest.remove(s);
            let c = x * vp;
            out.accumulate(MultiIndex(rest), if s % 2 == 0 { c } else { -c });
        }
    }
    Ok(out)
}

/// `L^* e^i = sum_j L_ij e^j`.
fn pulled_covector(l: &OrthMap, i: usize) -> Form {
    let mut f = Form::zero(l.dim, 1);
    for j in 0..l.dim {
        f.accumulate(MultiIndex(vec![j]), l.get(i, j).clone());
    }
    f
}

/// `(L^* a)(x_1..x_k) = a(L x_1, .., L x_k)`.
pub fn pullback(l: &OrthMap, a: &Form) -> Result<Form> {
    check_pair(a.dim, l.dim)?;
    let images: Vec<Form> = (0..l.dim).map(|i| pulled_covector(l, i)).collect();
    let mut out = Form::zero(a.dim, a.degree);
    for (i, x) in &a.terms {
        let mut term = Form::scalar(a.dim, x.clone());
        for &p in &i.0 {
            term = wedge(&term, &images[p])?;
            if term.is_zero() {
                break;
            }
        }
        for (j, y) in term.terms {
            out.accumulate(j, y);
        }
    }
    Ok(out)
}

/// Derivation action of a skew matrix:
/// `rho(A) a (x_1..x_k) = - sum_i a(x_1, .., A x_i, .., x_k)`.
///
/// With this sign `d/dt pullback(exp(tA), a)` at `t = 0` equals `-rho(A) a`,
/// so `rho` is the differential of the left action `g . a = (g^{-1})^* a`.
pub fn so_action(a_mat: &OrthMap, a: &Form) -> Result<Form> {
    check_pair(a.dim, a_mat.dim)?;
    if !a_mat.is_skew() {
        return Err(Error::NotSkew);
    }
    Ok(derivation(a_mat, a))
}

fn derivation(a_mat: &OrthMap, a: &Form) -> Form {
    let mut out = Form::zero(a.dim, a.degree);
    for (i, x) in &a.terms {
        for s in 0..i.len() {
            let row = i.0[s];
            for j in 0..a.dim {
                let m = a_mat.get(row, j);
                if m.is_zero() {
                    continue;
                }
                let mut idx = i.0.clone();
                idx[s] = j;
                if let Some(sg) = sort_with_sign(&mut idx) {
                    out.accumulate(MultiIndex(idx), signed(-(x * m), sg));
                }
            }
        }
    }
    out
}

/// Dimension of the stabilizer algebra `{A in so(n) : rho(A) a = 0}`,
/// computed as the nullity of the linear map `A -> rho(A) a` over the
/// lexicographic skew basis.
pub fn stabilizer_dim(a: &Form) -> usize {
    let basis = OrthMap::skew_basis(a.dim);
    let images: Vec<Form> = basis.iter().map(|b| derivation(b, a)).collect();
    let mut support: Vec<&MultiIndex> = images.iter().flat_map(|f| f.terms.keys()).collect();
    support.sort();
    support.dedup();
    let rows: Vec<Vec<Rational>> = images
        .iter()
        .map(|f| {
            support
                .iter()
                .map(|k| f.terms.get(*k).cloned().unwrap_or_else(Rational::zero))
                .collect()
        })
        .collect();
    basis.len() - linalg::rank(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn e(dim: usize, labels: &[usize]) -> Form {
        Form::monomial(dim, labels, q(1)).unwrap()
    }

    /// Parity of a permutation by counting inversions directly.
    fn inversion_sign(p: &[usize]) -> i64 {
        let mut inv = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    inv += 1;
                }
            }
        }
        if inv & 1 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(wedge(&e(7, &[1]), &e(7, &[2])).unwrap(), e(7, &[1, 2]));
        assert!(wedge(&e(7, &[1, 2]), &e(7, &[1, 2])).unwrap().is_zero());
        // (1,3,5,2,4,6) has 3 inversions
        let expected = q(inversion_sign(&[1, 3, 5, 2, 4, 6]));
        assert_eq!(expected, q(-1));
        assert_eq!(
            wedge(&e(7, &[1, 3, 5]), &e(7, &[2, 4, 6])).unwrap(),
            e(7, &[1, 2, 3, 4, 5, 6]).scale(&expected)
        );
    }

    #[test]
    fn wedge_past_top_degree_is_zero() {
        let w = wedge(&Form::volume(7), &e(7, &[1])).unwrap();
        assert!(w.is_zero());
        assert_eq!(w.degree(), 8);
    }

    #[test]
    fn wedge_dimension_mismatch() {
        assert!(matches!(
            wedge(&e(7, &[1]), &e(8, &[1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hodge_examples() {
        assert_eq!(hodge(&Form::one(7)), Form::volume(7));
        assert_eq!(hodge(&e(7, &[1, 2, 7])), e(7, &[3, 4, 5, 6]));
        // oracle: e127 ^ e3456 = +vol
        assert_eq!(
            wedge(&e(7, &[1, 2, 7]), &e(7, &[3, 4, 5, 6])).unwrap(),
            Form::volume(7)
        );
        let a = e(7, &[2, 3, 6]).scale(&q(3)) + e(7, &[1, 4, 5]);
        assert_eq!(hodge(&hodge(&a)), a);
    }

    #[test]
    fn hodge_on_r8_uses_e0() {
        assert_eq!(hodge(&e(8, &[0])), e(8, &[1, 2, 3, 4, 5, 6, 7]));
        assert_eq!(
            hodge(&e(8, &[7])),
            e(8, &[0, 1, 2, 3, 4, 5, 6]).scale(&q(-1))
        );
    }

    #[test]
    fn interior_examples() {
        let v1 = Vector::basis(7, 0);
        let v2 = Vector::basis(7, 1);
        let v3 = Vector::basis(7, 2);
        assert_eq!(interior(&v1, &e(7, &[1, 2])).unwrap(), e(7, &[2]));
        assert!(interior(&v3, &e(7, &[1, 2])).unwrap().is_zero());
        assert_eq!(
            interior(&v2, &e(7, &[1, 2, 3])).unwrap(),
            e(7, &[1, 3]).scale(&q(-1))
        );
    }

    #[test]
    fn interior_on_scalar_is_zero() {
        let f = interior(&Vector::basis(7, 0), &Form::scalar(7, q(5))).unwrap();
        assert!(f.is_zero());
        assert_eq!(f.degree(), 0);
    }

    #[test]
    fn interior_matches_evaluation() {
        // oracle: (i_v a)(x, y) = a(v, x, y)
        let a = e(7, &[1, 2, 3]) + e(7, &[2, 4, 7]).scale(&q(-2));
        let v = Vector::from_integers(&[1, 2, 0, -1, 0, 0, 3]);
        let x = Vector::from_integers(&[0, 1, 1, 0, 2, 0, 0]);
        let y = Vector::from_integers(&[1, 0, 5, 1, 0, 0, 1]);
        let lhs = interior(&v, &a)
            .unwrap()
            .eval(&[x.clone(), y.clone()])
            .unwrap();
        let rhs = a.eval(&[v, x, y]).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_examples() {
        let a = e(7, &[1, 2, 7]) - e(7, &[2, 3, 6]);
        assert_eq!(pullback(&OrthMap::identity(7), &a).unwrap(), a);
        assert_eq!(pullback(&-&OrthMap::identity(7), &a).unwrap(), -&a);
        let swap = OrthMap::signed_permutation(&[1, 0, 2, 3, 4, 5, 6], &[1; 7]);
        assert_eq!(
            pullback(&swap, &e(7, &[1, 2])).unwrap(),
            e(7, &[1, 2]).scale(&q(-1))
        );
    }

    #[test]
    fn pullback_matches_evaluation() {
        let a = e(7, &[1, 2, 7]) + e(7, &[3, 4, 5]).scale(&q(3));
        let l = OrthMap::from_fn(7, |i, j| q(((i * 3 + j * 5) % 7) as i64 - 3));
        let xs: Vec<Vector> = (0..3)
            .map(|k| Vector::from_integers(&[k, 1, 0, 2, -1, 0, 1]))
            .collect();
        let lx: Vec<Vector> = xs.iter().map(|x| l.apply(x)).collect();
        assert_eq!(
            pullback(&l, &a).unwrap().eval(&xs).unwrap(),
            a.eval(&lx).unwrap()
        );
    }

    #[test]
    fn so_action_basic_rotation() {
        // A e1 = e2, A e2 = -e1
        let mut rows = vec![vec![q(0); 7]; 7];
        rows[1][0] = q(1);
        rows[0][1] = q(-1);
        let a = OrthMap::from_rows(rows).unwrap();
        assert_eq!(so_action(&a, &e(7, &[1])).unwrap(), e(7, &[2]));
        assert!(so_action(&OrthMap::zeros(7), &e(7, &[1, 2, 7]))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn so_action_rejects_non_skew() {
        assert!(matches!(
            so_action(&OrthMap::identity(7), &e(7, &[1])),
            Err(Error::NotSkew)
        ));
    }

    #[test]
    fn so_action_is_minus_derivative_of_pullback() {
        // oracle: central difference of pullback(exp(tA)) using the exact
        // second-order truncation (I + tA + t^2 A^2 / 2) at t = +-eps; the
        // quadratic term cancels so the quotient is the exact derivative
        let mut rows = vec![vec![q(0); 7]; 7];
        rows[1][0] = q(2);
        rows[0][1] = q(-2);
        rows[4][6] = q(1);
        rows[6][4] = q(-1);
        let a = OrthMap::from_rows(rows).unwrap();
        let f = e(7, &[1, 5, 6]) + e(7, &[2, 3, 7]).scale(&q(3));
        let eps = Rational::new(1.into(), 1000.into());
        let exp_approx = |t: &Rational| {
            let ta = a.scale(t);
            let half = Rational::new(1.into(), 2.into());
            let t2 = (&ta * &ta).scale(&half);
            let id = OrthMap::identity(7);
            let s = OrthMap::from_fn(7, |i, j| id.get(i, j) + ta.get(i, j) + t2.get(i, j));
            s
        };
        let plus = pullback(&exp_approx(&eps), &f).unwrap();
        let minus = pullback(&exp_approx(&-eps.clone()), &f).unwrap();
        let diff = (plus - minus).scale(&(Rational::one() / (eps * q(2))));
        // degree-3 pullback is cubic in t, so the central difference carries
        // an O(eps^2) term; compare after rounding it away
        let rho = so_action(&a, &f).unwrap();
        let err = (diff + rho).max_abs_coef();
        assert!(err < Rational::new(1.into(), 10_000.into()), "err {err}");
    }

    #[test]
    fn stabilizer_of_volume_is_everything() {
        assert_eq!(stabilizer_dim(&Form::volume(7)), 21);
        assert_eq!(stabilizer_dim(&Form::one(5)), 10);
        assert_eq!(stabilizer_dim(&e(4, &[0])), 3);
    }

    #[test]
    fn display_uses_labels() {
        let f = e(7, &[1, 2, 7]) - e(7, &[2, 3, 6]);
        assert_eq!(f.to_string(), "e127 - e236");
        assert_eq!(Form::zero(8, 2).to_string(), "0");
    }

    #[test]
    fn from_labeled_terms_sorts_with_sign() {
        let f = Form::from_labeled_terms(7, 3, vec![(vec![7, 2, 1], q(1)), (vec![1, 1, 2], q(5))])
            .unwrap();
        assert_eq!(f, e(7, &[1, 2, 7]).scale(&q(-1)));
    }

    #[test]
    fn bad_labels_rejected() {
        assert!(Form::monomial(7, &[0, 1], q(1)).is_err());
        assert!(Form::monomial(7, &[2, 1], q(1)).is_err());
        assert!(Form::monomial(8, &[8], q(1)).is_err());
        assert!(Form::monomial(9, &[1], q(1)).is_err());
    }
}
