//! Canonical G2 and Spin(7) forms, Lee-form and torsion operators.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{hodge, interior, pullback, wedge, Form, OrthMap, Vector};
use crate::octonion::{CayleyTable, Octonion};
use crate::{q, ratio, Rational};

/// `omega = e127 - e236 + e347 + e567 - e146 - e245 + e135` on `R^7`.
pub fn g2_form() -> Form {
    let terms: [([usize; 3], i64); 7] = [
        ([1, 2, 7], 1),
        ([2, 3, 6], -1),
        ([3, 4, 7], 1),
        ([5, 6, 7], 1),
        ([1, 4, 6], -1),
        ([2, 4, 5], -1),
        ([1, 3, 5], 1),
    ];
    Form::from_labeled_terms(7, 3, terms.iter().map(|(l, c)| (l.to_vec(), q(*c))))
        .expect("valid G2 monomials")
}

/// `phi = e0 ^ omega + *_7 omega` on `R^8`, with `R^7` embedded as `e1..e7`.
pub fn spin7_form() -> Form {
    let omega = g2_form();
    let e0 = Form::covector(8, 0);
    let first =
        wedge(&e0, &omega.shift_into(8, 1).expect("R^7 fits in R^8")).expect("same dimension");
    let second = hodge(&omega).shift_into(8, 1).expect("R^7 fits in R^8");
    first + second
}

/// `-<x . (conj(y) . z), v>`, the Cayley 4-form as a quadrilinear map.
///
/// It equals `<(x . y) . z, v>` whenever `x` is real, and whenever
/// `x, y, z` lie in a common associative subalgebra with `y` imaginary.
pub fn cayley_quadrilinear(
    table: &CayleyTable,
    x: &Octonion,
    y: &Octonion,
    z: &Octonion,
    v: &Octonion,
) -> Rational {
    -table.mul(x, &table.mul(&y.conj(), z)).inner(v)
}

/// `<(x . y) . z, v>` taken literally.
pub fn naive_quadrilinear(
    table: &CayleyTable,
    x: &Octonion,
    y: &Octonion,
    z: &Octonion,
    v: &Octonion,
) -> Rational {
    table.mul(&table.mul(x, y), z).inner(v)
}

fn perms4() -> Vec<([usize; 4], i8)> {
    let mut out = Vec::with_capacity(24);
    for_each_permutation(4, |p| {
        let mut sorted = p.to_vec();
        let s = crate::exterior::sort_with_sign(&mut sorted).expect("distinct");
        out.push(([p[0], p[1], p[2], p[3]], s));
        false
    });
    out
}

/// Alternating projection of a quadrilinear map on `R^8`, evaluated on
/// increasing basis quadruples with weight `1/4!` and then rescaled so the
/// largest coefficient has absolute value 1.
pub fn alternate_quadrilinear<F>(f: F) -> Form
where
    F: Fn(&Octonion, &Octonion, &Octonion, &Octonion) -> Rational,
{
    let perms = perms4();
    let mut terms = Vec::new();
    for quad in crate::exterior::subsets(8, 4) {
        let units: Vec<Octonion> = quad.iter().map(|&k| Octonion::unit(k)).collect();
        let mut acc = Rational::zero();
        for &(p, s) in &perms {
            let val = f(&units[p[0]], &units[p[1]], &units[p[2]], &units[p[3]]);
            if s > 0 {
                acc += val;
            } else {
                acc -= val;
            }
        }
        terms.push((quad, acc / q(24)));
    }
    let raw = Form::from_labeled_terms(8, 4, terms).expect("labels are positions on R^8");
    let m = raw.max_abs_coef();
    if m.is_zero() {
        raw
    } else {
        raw.scale(&m.recip())
    }
}

/// Cayley form built from octonion multiplication (see [`cayley_quadrilinear`]).
pub fn spin7_form_octonionic() -> Form {
    spin7_form_octonionic_with(CayleyTable::standard())
}

pub fn spin7_form_octonionic_with(table: &CayleyTable) -> Form {
    alternate_quadrilinear(|x, y, z, v| cayley_quadrilinear(table, x, y, z, v))
}

/// Alternation of the literal `<(x . y) . z, v>`. This is
/// `(1/2) e0 ^ omega + *_7 omega`, whose stabilizer is only `g2`.
pub fn naive_octonionic_alternation(table: &CayleyTable) -> Form {
    alternate_quadrilinear(|x, y, z, v| naive_quadrilinear(table, x, y, z, v))
}

fn expect_shape(f: &Form, dim: usize, degree: usize) -> Result<()> {
    if f.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: f.dim(),
        });
    }
    if f.degree() != degree {
        return Err(Error::DegreeMismatch {
            expected: degree,
            found: f.degree(),
        });
    }
    Ok(())
}

/// `theta = -1/3 *(*d omega ^ omega)`, with `d omega` supplied.
pub fn lee_g2(omega3: &Form, domega4: &Form) -> Result<Form> {
    expect_shape(omega3, 7, 3)?;
    expect_shape(domega4, 7, 4)?;
    let inner = wedge(&hodge(domega4), omega3)?;
    Ok(hodge(&inner).scale(&ratio(-1, 3)))
}

/// `Theta = -1/7 *(*d phi ^ phi)`, with `d phi` supplied.
pub fn lee_spin7(phi4: &Form, dphi5: &Form) -> Result<Form> {
    expect_shape(phi4, 8, 4)?;
    expect_shape(dphi5, 8, 5)?;
    let inner = wedge(&hodge(dphi5), phi4)?;
    Ok(hodge(&inner).scale(&ratio(-1, 7)))
}

/// `T = 1/4 *(theta ^ omega)`, cross-checked against `-1/4 i_theta(*omega)`.
pub fn torsion_g2(theta: &Form, omega: &Form) -> Result<Form> {
    expect_shape(theta, 7, 1)?;
    expect_shape(omega, 7, 3)?;
    let via_star = hodge(&wedge(theta, omega)?).scale(&ratio(1, 4));
    let via_interior = interior(&Vector::sharp(theta)?, &hodge(omega))?.scale(&ratio(-1, 4));
    if via_star != via_interior {
        return Err(Error::ConventionMismatch(format!(
            "1/4 *(theta^omega) = {via_star} but -1/4 i_theta(*omega) = {via_interior}"
        )));
    }
    Ok(via_star)
}

/// `T = -1/6 *(Theta ^ phi)`, cross-checked against `-1/6 i_Theta(*phi)`.
pub fn torsion_spin7(theta: &Form, phi: &Form) -> Result<Form> {
    expect_shape(theta, 8, 1)?;
    expect_shape(phi, 8, 4)?;
    let via_star = hodge(&wedge(theta, phi)?).scale(&ratio(-1, 6));
    let via_interior = interior(&Vector::sharp(theta)?, &hodge(phi))?.scale(&ratio(-1, 6));
    if via_star != via_interior {
        return Err(Error::ConventionMismatch(format!(
            "-1/6 *(Theta^phi) = {via_star} but -1/6 i_Theta(*phi) = {via_interior}"
        )));
    }
    Ok(via_star)
}

fn nonneg(x: &Rational, what: &str) -> Result<()> {
    if x.is_negative() {
        return Err(Error::NegativeInput(format!("{what} = {x}")));
    }
    Ok(())
}

/// `s = 15/8 |theta|^2`.
pub fn scalar_curvature_g2(theta_norm_sq: &Rational) -> Result<Rational> {
    nonneg(theta_norm_sq, "|theta|^2")?;
    Ok(theta_norm_sq * ratio(15, 8))
}

/// `s = 21/36 |Theta|^2`.
pub fn scalar_curvature_spin7(theta_norm_sq: &Rational) -> Result<Rational> {
    nonneg(theta_norm_sq, "|Theta|^2")?;
    Ok(theta_norm_sq * ratio(21, 36))
}

/// If `f = c * g` for a scalar `c`, returns `c`.
pub fn proportionality(f: &Form, g: &Form) -> Option<Rational> {
    if g.is_zero() || f.dim() != g.dim() || f.degree() != g.degree() {
        return None;
    }
    let (idx, gc) = g.terms().next()?;
    let c = f.coef_at(idx.positions()) / gc;
    (g.scale(&c) == *f).then_some(c)
}

/// Lee operator applied to `d = s * beta ^ form` for every basis covector
/// `beta`; `per_basis[i]` is the `c` with `Lee = c * beta`, or `None` when
/// the output is not a multiple of `beta`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeeRecovery {
    #[serde(serialize_with = "crate::json::ser_opt_rationals")]
    pub per_basis: Vec<Option<Rational>>,
    #[serde(serialize_with = "crate::json::ser_opt_rational")]
    pub constant: Option<Rational>,
}

fn recovery(dim: usize, per: impl Fn(&Form) -> Result<Form>) -> Result<LeeRecovery> {
    let mut per_basis = Vec::with_capacity(dim);
    for p in 0..dim {
        let beta = Form::covector(dim, p);
        per_basis.push(proportionality(&per(&beta)?, &beta));
    }
    let constant = match per_basis.first() {
        Some(Some(c)) if per_basis.iter().all(|x| x.as_ref() == Some(c)) => Some(c.clone()),
        _ => None,
    };
    Ok(LeeRecovery {
        per_basis,
        constant,
    })
}

/// `lee_g2(omega, (3/4) beta ^ omega) = c beta` over the seven basis `beta`.
pub fn lee_recovery_g2(omega: &Form) -> Result<LeeRecovery> {
    recovery(7, |beta| {
        lee_g2(omega, &wedge(beta, omega)?.scale(&ratio(3, 4)))
    })
}

/// `lee_spin7(phi, beta ^ phi) = c' beta` over the eight basis `beta`.
pub fn lee_recovery_spin7(phi: &Form) -> Result<LeeRecovery> {
    recovery(8, |beta| lee_spin7(phi, &wedge(beta, phi)?))
}

/// A signed permutation `P` and sign `s` with `P^* from = s * to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermutationWitness {
    /// `perm[i]` is the image position of `e_i`.
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
    pub overall_sign: i8,
    pub matrix: OrthMap,
}

impl SignedPermutationWitness {
    pub fn determinant(&self) -> Rational {
        self.matrix.determinant()
    }
}

fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize]) -> bool) {
    // Heap's algorithm, stops when f returns true
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    if f(&p) {
        return;
    }
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            if f(&p) {
                return;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Searches all signed permutations for `P^* from = ±to`, preferring the
/// `+` sign. Only forms whose coefficients agree up to sign term by term can
/// match, which keeps the search over the `2^n n!` group cheap.
pub fn signed_permutation_witness(from: &Form, to: &Form) -> Option<SignedPermutationWitness> {
    if from.dim() != to.dim() || from.degree() != to.degree() || from.len() != to.len() {
        return None;
    }
    let n = from.dim();
    let from_terms: Vec<(Vec<usize>, Rational)> = from
        .terms()
        .map(|(i, c)| (i.positions().to_vec(), c.clone()))
        .collect();

    // For P e_i = s_i e_{perm[i]}: P^* e^{perm[i]} = s_i e^i.
    let candidates = |perm: &[usize]| -> Option<Vec<(u16, i8)>> {
        let mut inv = vec![0usize; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let mut out = Vec::with_capacity(from_terms.len());
        for (idx, c) in &from_terms {
            let mut pulled: Vec<usize> = idx.iter().map(|&j| inv[j]).collect();
            let mask = pulled.iter().fold(0u16, |m, &i| m | (1 << i));
            let s = crate::exterior::sort_with_sign(&mut pulled)?;
            let target = to.coef_at(&pulled);
            if target.is_zero() {
                return None;
            }
            let r = c / &target;
            let rs = if r.is_one() {
                1
            } else if (-r).is_one() {
                -1
            } else {
                return None;
            };
            out.push((mask, s * rs));
        }
        Some(out)
    };

    let mut found: Option<SignedPermutationWitness> = None;
    let mut fallback: Option<SignedPermutationWitness> = None;
    for_each_permutation(n, |perm| {
        let Some(conds) = candidates(perm) else {
            return false;
        };
        for neg in 0u16..(1 << n) {
            let parity = |mask: u16| {
                if (mask & neg).count_ones() & 1 == 0 {
                    1i8
                } else {
                    -1
                }
            };
            let first = conds[0].1 * parity(conds[0].0);
            if conds.iter().all(|&(m, s)| s * parity(m) == first) {
                let signs: Vec<i8> = (0..n)
                    .map(|i| if neg & (1 << i) != 0 { -1 } else { 1 })
                    .collect();
                let w = SignedPermutationWitness {
                    perm: perm.to_vec(),
                    matrix: OrthMap::signed_permutation(perm, &signs),
                    signs,
                    overall_sign: first,
                };
                if first > 0 {
                    found = Some(w);
                    return true;
                }
                if fallback.is_none() {
                    fallback = Some(w);
                }
            }
        }
        false
    });
    let w = found.or(fallback)?;
    debug_assert_eq!(
        pullback(&w.matrix, from).ok(),
        Some(to.scale(&if w.overall_sign > 0 {
            Rational::one()
        } else {
            -Rational::one()
        }))
    );
    Some(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::stabilizer_dim;

    #[test]
    fn g2_form_examples() {
        let w = g2_form();
        assert_eq!(w.coef(&[1, 2, 7]), q(1));
        assert_eq!(w.coef(&[2, 4, 5]), q(-1));
        assert_eq!(w.len(), 7);
    }

    #[test]
    fn spin7_form_examples() {
        let p = spin7_form();
        assert_eq!(p.coef(&[0, 1, 2, 7]), q(1));
        assert_eq!(p.coef(&[3, 4, 5, 6]), q(1));
        assert_eq!(p.len(), 14);
        assert!(p.terms().all(|(_, c)| c.abs().is_one()));
    }

    #[test]
    fn octonionic_form_raw_value_and_alternation() {
        let t = CayleyTable::standard();
        let u = Octonion::unit;
        assert_eq!(cayley_quadrilinear(t, &u(0), &u(1), &u(2), &u(7)), q(1));
        assert_eq!(naive_quadrilinear(t, &u(0), &u(1), &u(2), &u(7)), q(1));
        let f = spin7_form_octonionic();
        assert_eq!(f.coef(&[0, 1, 2, 7]), q(1));
        // alternating: swapping two arguments flips the sign of the evaluation
        let v: Vec<Vector> = [1, 0, 2, 7].iter().map(|&k| Vector::basis(8, k)).collect();
        let swapped = vec![v[1].clone(), v[0].clone(), v[2].clone(), v[3].clone()];
        assert_eq!(f.eval(&v).unwrap(), -f.eval(&swapped).unwrap());
    }

    #[test]
    fn octonionic_form_is_anti_self_dual_variant() {
        // e0^omega - *omega
        let omega = g2_form();
        let e0 = Form::covector(8, 0);
        let expected = wedge(&e0, &omega.shift_into(8, 1).unwrap()).unwrap()
            - hodge(&omega).shift_into(8, 1).unwrap();
        assert_eq!(spin7_form_octonionic(), expected);
        assert_eq!(hodge(&spin7_form_octonionic()), -spin7_form_octonionic());
        assert_eq!(hodge(&spin7_form()), spin7_form());
    }

    #[test]
    fn naive_alternation_is_only_g2_invariant() {
        let t = CayleyTable::standard();
        let naive = naive_octonionic_alternation(t);
        assert_eq!(naive.coef(&[0, 1, 2, 7]), ratio(1, 2));
        assert_eq!(naive.coef(&[3, 4, 5, 6]), q(1));
        assert_eq!(stabilizer_dim(&naive), 14);
    }

    #[test]
    fn stabilizers() {
        assert_eq!(stabilizer_dim(&g2_form()), 14);
        assert_eq!(stabilizer_dim(&spin7_form()), 21);
        assert_eq!(stabilizer_dim(&spin7_form_octonionic()), 21);
    }

    #[test]
    fn witness_between_the_two_cayley_forms() {
        let w = signed_permutation_witness(&spin7_form(), &spin7_form_octonionic())
            .expect("witness exists");
        let s = if w.overall_sign > 0 { q(1) } else { q(-1) };
        assert_eq!(
            pullback(&w.matrix, &spin7_form()).unwrap(),
            spin7_form_octonionic().scale(&s)
        );
        // self-dual vs anti-self-dual: only orientation-reversing maps relate them
        assert_eq!(w.determinant(), q(-1));
    }

    #[test]
    fn witness_absent_for_different_supports() {
        assert!(signed_permutation_witness(&spin7_form(), &Form::volume(8)).is_none());
    }

    #[test]
    fn lee_of_parallel_structure_vanishes() {
        assert!(lee_g2(&g2_form(), &Form::zero(7, 4)).unwrap().is_zero());
        assert!(lee_spin7(&spin7_form(), &Form::zero(8, 5))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn lee_shape_errors() {
        assert!(matches!(
            lee_g2(&g2_form(), &Form::zero(7, 3)),
            Err(Error::DegreeMismatch { .. })
        ));
        assert!(matches!(
            lee_spin7(&g2_form(), &Form::zero(8, 5)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn lee_is_linear() {
        let w = g2_form();
        let d1 = Form::monomial(7, &[1, 2, 3, 4], q(2)).unwrap();
        let d2 = Form::monomial(7, &[3, 5, 6, 7], ratio(-1, 3)).unwrap()
            + Form::monomial(7, &[1, 2, 3, 4], q(1)).unwrap();
        let lhs = lee_g2(&w, &(&d1 + &d2)).unwrap();
        assert_eq!(lhs, lee_g2(&w, &d1).unwrap() + lee_g2(&w, &d2).unwrap());
        let p = spin7_form();
        let e1 = Form::monomial(8, &[0, 1, 2, 3, 4], q(1)).unwrap();
        let e2 = Form::monomial(8, &[1, 3, 5, 6, 7], q(5)).unwrap();
        assert_eq!(
            lee_spin7(&p, &(&e1 + &e2)).unwrap(),
            lee_spin7(&p, &e1).unwrap() + lee_spin7(&p, &e2).unwrap()
        );
    }

    #[test]
    fn lee_recovery_constants_are_uniform() {
        let g = lee_recovery_g2(&g2_form()).unwrap();
        assert!(g.constant.is_some(), "{g:?}");
        let s = lee_recovery_spin7(&spin7_form()).unwrap();
        assert!(s.constant.is_some(), "{s:?}");
    }

    #[test]
    fn torsion_double_formulas() {
        let w = g2_form();
        assert!(torsion_g2(&Form::zero(7, 1), &w).unwrap().is_zero());
        for p in 0..7 {
            let t = torsion_g2(&Form::covector(7, p), &w).unwrap();
            assert_eq!(t.degree(), 3);
        }
        let phi = spin7_form();
        assert!(torsion_spin7(&Form::zero(8, 1), &phi).unwrap().is_zero());
        for p in 0..8 {
            assert_eq!(
                torsion_spin7(&Form::covector(8, p), &phi).unwrap().degree(),
                3
            );
        }
    }

    #[test]
    fn scalar_curvature_arithmetic() {
        assert_eq!(scalar_curvature_g2(&q(0)).unwrap(), q(0));
        assert_eq!(scalar_curvature_g2(&q(16)).unwrap(), q(30));
        assert_eq!(scalar_curvature_g2(&q(8)).unwrap(), q(15));
        assert_eq!(scalar_curvature_spin7(&q(36)).unwrap(), q(21));
        assert_eq!(scalar_curvature_spin7(&q(72)).unwrap(), q(42));
        assert!(matches!(
            scalar_curvature_g2(&q(-1)),
            Err(Error::NegativeInput(_))
        ));
        assert!(matches!(
            scalar_curvature_spin7(&ratio(-1, 2)),
            Err(Error::NegativeInput(_))
        ));
    }
}
