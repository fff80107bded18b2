//! The octonions on `R^8 = span(e0..e7)`, with `e0` the unit.
//!
//! The multiplication is derived from a G2 3-form `omega` on `R^7 = Im O`:
//! for imaginary `x`, `y`
//!
//! ```text
//! x . y = -<x, y> e0 + x × y,    (x × y)_k = omega(x, y, e_k)
//! ```
//!
//! so the table, the Spin(7) form and every group generator share one
//! source of signs.

use std::array;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exterior::{Form, OrthMap, Vector};
use crate::{q, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Octonion([Rational; 8]);

impl Octonion {
    pub fn new(components: [Rational; 8]) -> Self {
        Octonion(components)
    }

    pub fn from_integers(xs: [i64; 8]) -> Self {
        Octonion(xs.map(q))
    }

    pub fn zero() -> Self {
        Octonion(array::from_fn(|_| Rational::zero()))
    }

    pub fn one() -> Self {
        Self::unit(0)
    }

    /// Basis element `e_k`, `k` in `0..8`.
    pub fn unit(k: usize) -> Self {
        let mut x = Self::zero();
        x.0[k] = Rational::one();
        x
    }

    /// Embeds a vector of `R^7 = Im O` (`e1..e7`).
    pub fn from_imaginary(v: &Vector) -> Result<Self> {
        if v.dim() != 7 {
            return Err(Error::DimensionMismatch {
                expected: 7,
                found: v.dim(),
            });
        }
        let mut x = Self::zero();
        for (k, c) in v.components().iter().enumerate() {
            x.0[k + 1] = c.clone();
        }
        Ok(x)
    }

    pub fn from_vector(v: &Vector) -> Result<Self> {
        if v.dim() != 8 {
            return Err(Error::DimensionMismatch {
                expected: 8,
                found: v.dim(),
            });
        }
        Ok(Octonion(array::from_fn(|k| v.components()[k].clone())))
    }

    pub fn components(&self) -> &[Rational; 8] {
        &self.0
    }

    pub fn real(&self) -> &Rational {
        &self.0[0]
    }

    pub fn imaginary(&self) -> Vector {
        Vector::new(self.0[1..].to_vec())
    }

    pub fn to_vector(&self) -> Vector {
        Vector::new(self.0.to_vec())
    }

    pub fn is_imaginary(&self) -> bool {
        self.0[0].is_zero()
    }

    pub fn conj(&self) -> Octonion {
        Octonion(array::from_fn(|k| {
            if k == 0 {
                self.0[0].clone()
            } else {
                -self.0[k].clone()
            }
        }))
    }

    pub fn inner(&self, other: &Octonion) -> Rational {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> Rational {
        self.inner(self)
    }

    pub fn scale(&self, c: &Rational) -> Octonion {
        Octonion(array::from_fn(|k| &self.0[k] * c))
    }

    /// Product with the table derived from the standard G2 form.
    pub fn mul(&self, other: &Octonion) -> Octonion {
        CayleyTable::standard().mul(self, other)
    }
}

impl Add for &Octonion {
    type Output = Octonion;
    fn add(self, rhs: &Octonion) -> Octonion {
        Octonion(array::from_fn(|k| &self.0[k] + &rhs.0[k]))
    }
}

impl Sub for &Octonion {
    type Output = Octonion;
    fn sub(self, rhs: &Octonion) -> Octonion {
        Octonion(array::from_fn(|k| &self.0[k] - &rhs.0[k]))
    }
}

impl Neg for &Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        Octonion(array::from_fn(|k| -self.0[k].clone()))
    }
}

impl fmt::Display for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("{c}*e{k}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

pub fn conj(x: &Octonion) -> Octonion {
    x.conj()
}

/// Structure constants `c[i][j][k]` for `e_i . e_j`, `i != j` in `1..=7`,
/// stored at 0-based imaginary positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    consts: Vec<Rational>,
}

fn at(i: usize, j: usize, k: usize) -> usize {
    (i * 7 + j) * 7 + k
}

impl CayleyTable {
    /// Builds the table from a 3-form on `R^7` and checks that the result is
    /// a composition algebra on a fixed test set.
    pub fn from_form(omega: &Form) -> Result<Self> {
        if omega.dim() != 7 {
            return Err(Error::DimensionMismatch {
                expected: 7,
                found: omega.dim(),
            });
        }
        if omega.degree() != 3 {
            return Err(Error::DegreeMismatch {
                expected: 3,
                found: omega.degree(),
            });
        }
        let mut consts = vec![Rational::zero(); 343];
        for (idx, c) in omega.terms() {
            let p = idx.positions();
            let (a, b, d) = (p[0], p[1], p[2]);
            // every permutation of (a, b, d) with its sign
            for (i, j, k, s) in [
                (a, b, d, 1),
                (b, d, a, 1),
                (d, a, b, 1),
                (b, a, d, -1),
                (a, d, b, -1),
                (d, b, a, -1),
            ] {
                consts[at(i, j, k)] = if s > 0 { c.clone() } else { -c.clone() };
            }
        }
        let table = CayleyTable { consts };
        table.check_composition()?;
        Ok(table)
    }

    /// Table built from the G2 form `e127 - e236 + e347 + e567 - e146 - e245 + e135`.
    pub fn standard() -> &'static CayleyTable {
        static TABLE: OnceLock<CayleyTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            CayleyTable::from_form(&crate::structures::g2_form())
                .expect("standard G2 form generates the octonions")
        })
    }

    fn check_composition(&self) -> Result<()> {
        let mut samples: Vec<Octonion> = (0..8).map(Octonion::unit).collect();
        // small deterministic integer octonions
        for t in 0..12i64 {
            samples.push(Octonion::from_integers(array::from_fn(|k| {
                ((7 * t + 3 * k as i64 + t * t) % 5) - 2
            })));
        }
        for x in &samples {
            for y in &samples {
                let lhs = self.mul(x, y).norm_sq();
                let rhs = x.norm_sq() * y.norm_sq();
                if lhs != rhs {
                    return Err(Error::NotGeneric(format!(
                        "|xy|^2 = {lhs} but |x|^2|y|^2 = {rhs} for x = {x}, y = {y}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `c_{ij}^k` for labels `i, j, k` in `1..=7`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Rational {
        self.consts[at(i - 1, j - 1, k - 1)].clone()
    }

    pub fn mul(&self, x: &Octonion, y: &Octonion) -> Octonion {
        let (x0, y0) = (&x.0[0], &y.0[0]);
        let mut out = Octonion::zero();
        out.0[0] = x0 * y0;
        for k in 1..8 {
            out.0[0] -= &x.0[k] * &y.0[k];
            out.0[k] = x0 * &y.0[k] + y0 * &x.0[k];
        }
        for i in 0..7 {
            let xi = &x.0[i + 1];
            if xi.is_zero() {
                continue;
            }
            for j in 0..7 {
                let yj = &y.0[j + 1];
                if i == j || yj.is_zero() {
                    continue;
                }
                let xy = xi * yj;
                for k in 0..7 {
                    let c = &self.consts[at(i, j, k)];
                    if !c.is_zero() {
                        out.0[k + 1] += &xy * c;
                    }
                }
            }
        }
        out
    }

    /// `R_x`, the matrix of `o -> o . x` in the basis `e0..e7`.
    pub fn right_mult_matrix(&self, x: &Octonion) -> OrthMap {
        let cols: Vec<Vector> = (0..8)
            .map(|j| self.mul(&Octonion::unit(j), x).to_vector())
            .collect();
        OrthMap::from_columns(&cols).expect("eight columns of length eight")
    }

    /// `L_x`, the matrix of `o -> x . o`.
    pub fn left_mult_matrix(&self, x: &Octonion) -> OrthMap {
        let cols: Vec<Vector> = (0..8)
            .map(|j| self.mul(x, &Octonion::unit(j)).to_vector())
            .collect();
        OrthMap::from_columns(&cols).expect("eight columns of length eight")
    }

    /// Human-readable dump of every product `e_i . e_j`, `i, j` in `0..8`.
    pub fn dump(&self) -> Vec<String> {
        let mut lines = Vec::with_capacity(64);
        for i in 0..8 {
            for j in 0..8 {
                let p = self.mul(&Octonion::unit(i), &Octonion::unit(j));
                lines.push(format!("e{i}*e{j} = {}", signed_unit(&p)));
            }
        }
        lines
    }
}

fn signed_unit(p: &Octonion) -> String {
    let nz: Vec<(usize, &Rational)> =
        p.0.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
    match nz.as_slice() {
        [(k, c)] if c.is_one() => format!("e{k}"),
        [(k, c)] if (-(*c).clone()).is_one() => format!("-e{k}"),
        _ => p.to_string(),
    }
}

/// Table-building entry point under its operational name.
pub fn build_table(omega: &Form) -> Result<CayleyTable> {
    CayleyTable::from_form(omega)
}

/// `R_x` for the standard table.
pub fn right_mult_matrix(x: &Octonion) -> OrthMap {
    CayleyTable::standard().right_mult_matrix(x)
}

/// Unit imaginaries `(i, j, k, l)` used for the quaternionic examples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternionFrame {
    pub i: Octonion,
    pub j: Octonion,
    pub k: Octonion,
    pub l: Octonion,
    pub labels: [String; 4],
    pub rule: String,
}

impl QuaternionFrame {
    pub fn as_array(&self) -> [Octonion; 4] {
        [
            self.i.clone(),
            self.j.clone(),
            self.k.clone(),
            self.l.clone(),
        ]
    }
}

/// Picks `(e1, e2, e3, e4)` when `span(e0, e1, e2, e3)` is a subalgebra,
/// otherwise the lexicographically first basis triple `(a, b, c)` with
/// `e_a e_b = ±e_c`, taking `k = e_a e_b` and `l` the first remaining basis
/// imaginary.
pub fn designate_quaternion_frame(table: &CayleyTable) -> QuaternionFrame {
    let prod = |a: usize, b: usize| table.mul(&Octonion::unit(a), &Octonion::unit(b));
    let is_pm = |x: &Octonion, c: usize| {
        x.0.iter().enumerate().all(|(k, v)| {
            if k == c {
                v.is_one() || (-v.clone()).is_one()
            } else {
                v.is_zero()
            }
        })
    };
    let closes = |a: usize, b: usize, c: usize| {
        is_pm(&prod(a, b), c) && is_pm(&prod(b, c), a) && is_pm(&prod(a, c), b)
    };
    if closes(1, 2, 3) {
        return QuaternionFrame {
            i: Octonion::unit(1),
            j: Octonion::unit(2),
            k: Octonion::unit(3),
            l: Octonion::unit(4),
            labels: ["e1".into(), "e2".into(), "e3".into(), "e4".into()],
            rule: "(e1, e2, e3) spans a quaternion subalgebra".into(),
        };
    }
    for a in 1..8 {
        for b in a + 1..8 {
            for c in b + 1..8 {
                if !closes(a, b, c) {
                    continue;
                }
                let k = prod(a, b);
                let l = (1..8)
                    .find(|m| ![a, b, c].contains(m))
                    .expect("seven imaginary units");
                return QuaternionFrame {
                    i: Octonion::unit(a),
                    j: Octonion::unit(b),
                    k: k.clone(),
                    l: Octonion::unit(l),
                    labels: [format!("e{a}"), format!("e{b}"), signed_unit(&k), format!("e{l}")],
                    rule: format!(
                        "(e1, e2, e3) is not associative; first associative triple is (e{a}, e{b}, e{c}) with k = e{a}*e{b}"
                    ),
                };
            }
        }
    }
    unreachable!("a composition algebra on R^8 has an associative basis triple")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(k: usize) -> Octonion {
        Octonion::unit(k)
    }

    #[test]
    fn table_examples() {
        assert_eq!(u(1).mul(&u(1)), -&u(0));
        assert_eq!(u(1).mul(&u(2)), u(7));
        assert_eq!(u(2).mul(&u(3)), -&u(6));
    }

    #[test]
    fn structure_constants_follow_omega() {
        let t = CayleyTable::standard();
        let omega = crate::structures::g2_form();
        for (idx, c) in omega.terms() {
            let l = idx.labels(7);
            assert_eq!(&t.structure_constant(l[0], l[1], l[2]), c);
            assert_eq!(t.structure_constant(l[1], l[0], l[2]), -c.clone());
        }
    }

    #[test]
    fn unit_and_conjugation() {
        let x = Octonion::from_integers([1, -2, 3, 0, 5, 1, -1, 2]);
        assert_eq!(u(0).mul(&x), x);
        assert_eq!(x.mul(&u(0)), x);
        assert_eq!(u(0).conj(), u(0));
        assert_eq!(u(5).conj(), -&u(5));
        assert_eq!(x.mul(&x.conj()), u(0).scale(&x.norm_sq()));
    }

    #[test]
    fn not_associative() {
        let lhs = u(1).mul(&u(2)).mul(&u(3));
        let rhs = u(1).mul(&u(2).mul(&u(3)));
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn right_multiplication_matrices() {
        let t = CayleyTable::standard();
        assert!(t.right_mult_matrix(&u(0)).is_identity());
        let r1 = t.right_mult_matrix(&u(1));
        assert_eq!(&r1 * &r1, -&OrthMap::identity(8));
        assert!(r1.is_orthogonal());
        // R_x(o) = o . x on a sample
        let o = Octonion::from_integers([2, 0, -1, 1, 0, 3, 0, 1]);
        let x = Octonion::from_integers([0, 1, 1, 0, -2, 0, 1, 0]);
        assert_eq!(
            t.right_mult_matrix(&x).apply(&o.to_vector()),
            o.mul(&x).to_vector()
        );
    }

    #[test]
    fn rejects_degenerate_form() {
        let f = Form::monomial(7, &[1, 2, 3], q(1)).unwrap();
        assert!(matches!(
            CayleyTable::from_form(&f),
            Err(Error::NotGeneric(_))
        ));
        let wrong = Form::monomial(8, &[1, 2, 3], q(1)).unwrap();
        assert!(matches!(
            CayleyTable::from_form(&wrong),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dump_lists_all_products() {
        let d = CayleyTable::standard().dump();
        assert_eq!(d.len(), 64);
        assert!(d.contains(&"e1*e2 = e7".to_string()));
        assert!(d.contains(&"e2*e3 = -e6".to_string()));
        assert!(d.contains(&"e4*e4 = -e0".to_string()));
    }

    #[test]
    fn quaternion_frame_designation() {
        let f = designate_quaternion_frame(CayleyTable::standard());
        assert_eq!(f.labels, ["e1", "e2", "e7", "e3"]);
        assert_eq!(f.i.mul(&f.j), f.k);
        assert!(f.l.inner(&f.k).is_zero());
    }
}
