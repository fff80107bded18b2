//! Floating-point verification of the cone geometry.
//!
//! Sphere forms are extended homogeneously off the sphere (through `p/|p|`
//! and the tangential projection `Π_p`) so every derivative is taken in
//! ambient coordinates by central differences and then restricted. Nothing
//! computed here flows back into the exact modules.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::octonion::CayleyTable;
use crate::structures;

pub const DEFAULT_H: f64 = 1e-4;
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_SAMPLES: usize = 50;
pub const TANGENT_TRIPLES: usize = 20;
/// Minimum `res(h) / res(h/2)` demanded of the second-order cone identities.
pub const MIN_HALVING_RATIO: f64 = 3.5;
/// Relative spread allowed in the radial Lee coefficient across samples.
pub const LEE_CONSTANT_REL_STD: f64 = 1e-8;
pub const DILATION_REL_TOL: f64 = 1e-12;
const UNIT_TOL: f64 = 1e-12;
const ORIGIN_GUARD: f64 = 1e-9;

struct Basis {
    subsets: Vec<Vec<usize>>,
    slot: Vec<usize>,
}

fn basis(n: usize, k: usize) -> &'static Basis {
    static CACHE: OnceLock<Vec<Vec<Basis>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        (0..=8)
            .map(|n| {
                (0..=9)
                    .map(|k| {
                        let subsets = crate::exterior::subsets(n, k);
                        let mut slot = vec![usize::MAX; 1 << n];
                        for (i, s) in subsets.iter().enumerate() {
                            slot[mask_of(s)] = i;
                        }
                        Basis { subsets, slot }
                    })
                    .collect()
            })
            .collect()
    });
    &cache[n][k]
}

fn mask_of(idx: &[usize]) -> usize {
    idx.iter().fold(0, |m, &i| m | (1 << i))
}

/// Dense floating-point form; coefficients follow the lexicographic order of
/// increasing multi-indices.
#[derive(Clone, Debug, PartialEq)]
pub struct NumForm {
    dim: usize,
    degree: usize,
    coeffs: Vec<f64>,
}

impl NumForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        NumForm {
            dim,
            degree,
            coeffs: vec![0.0; basis(dim, degree).subsets.len()],
        }
    }

    pub fn from_exact(f: &Form) -> Self {
        let mut out = NumForm::zero(f.dim(), f.degree());
        for (idx, c) in f.terms() {
            let slot = basis(f.dim(), f.degree()).slot[mask_of(idx.positions())];
            out.coeffs[slot] = num_traits::ToPrimitive::to_f64(c).expect("finite rational");
        }
        out
    }

    pub fn covector(v: &[f64]) -> Self {
        NumForm {
            dim: v.len(),
            degree: 1,
            coeffs: v.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `(positions, coefficient)` pairs of the nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (&[usize], f64)> + '_ {
        basis(self.dim, self.degree)
            .subsets
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| **c != 0.0)
            .map(|(s, c)| (s.as_slice(), *c))
    }

    pub fn coef_at(&self, positions: &[usize]) -> f64 {
        let slot = basis(self.dim, self.degree).slot[mask_of(positions)];
        if slot == usize::MAX {
            0.0
        } else {
            self.coeffs[slot]
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn dot(&self, other: &NumForm) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn scale(&self, c: f64) -> NumForm {
        NumForm {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &NumForm) -> NumForm {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &NumForm) -> NumForm {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &NumForm, f: impl Fn(f64, f64) -> f64) -> NumForm {
        assert_eq!(
            (self.dim, self.degree),
            (other.dim, other.degree),
            "numeric forms of different type"
        );
        NumForm {
            dim: self.dim,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    pub fn wedge(&self, other: &NumForm) -> NumForm {
        assert_eq!(
            self.dim, other.dim,
            "wedge of numeric forms on different spaces"
        );
        let n = self.dim;
        let mut out = NumForm::zero(n, self.degree + other.degree);
        if self.degree + other.degree > n {
            return out;
        }
        let ob = basis(n, out.degree);
        for (i, a) in self.terms() {
            let mi = mask_of(i);
            for (j, b) in other.terms() {
                let mj = mask_of(j);
                if mi & mj != 0 {
                    continue;
                }
                // inversions: pairs (x in I, y in J) with x > y
                let inv: u32 = j.iter().map(|&y| (mi >> (y + 1)).count_ones()).sum();
                let s = if inv & 1 == 0 { 1.0 } else { -1.0 };
                out.coeffs[ob.slot[mi | mj]] += s * a * b;
            }
        }
        out
    }

    pub fn interior(&self, v: &[f64]) -> NumForm {
        assert_eq!(
            self.dim,
            v.len(),
            "interior product with a vector of the wrong length"
        );
        if self.degree == 0 {
            return NumForm::zero(self.dim, 0);
        }
        let mut out = NumForm::zero(self.dim, self.degree - 1);
        let ob = basis(self.dim, self.degree - 1);
        for (i, a) in self.terms() {
            let mi = mask_of(i);
            for (s, &p) in i.iter().enumerate() {
                let sg = if s % 2 == 0 { 1.0 } else { -1.0 };
                out.coeffs[ob.slot[mi & !(1 << p)]] += sg * a * v[p];
            }
        }
        out
    }

    pub fn hodge(&self) -> NumForm {
        let n = self.dim;
        let mut out = NumForm::zero(n, n - self.degree);
        let ob = basis(n, n - self.degree);
        let full = (1usize << n) - 1;
        for (i, a) in self.terms() {
            let mi = mask_of(i);
            let comp = full & !mi;
            // inversions of (I, I^c): pairs x in I, y in I^c with x > y
            let inv: u32 = i
                .iter()
                .map(|&x| (comp & ((1 << x) - 1)).count_ones())
                .sum();
            let s = if inv & 1 == 0 { 1.0 } else { -1.0 };
            out.coeffs[ob.slot[comp]] += s * a;
        }
        out
    }

    /// `a - u ^ i_u a`, the part of `a` with no `u`-component (`u` unit).
    pub fn tangential(&self, u: &[f64]) -> NumForm {
        let normal = NumForm::covector(u).wedge(&self.interior(u));
        self.sub(&normal)
    }

    /// Value on `degree` vectors.
    pub fn eval(&self, vectors: &[&[f64]]) -> f64 {
        assert_eq!(vectors.len(), self.degree, "wrong number of arguments");
        self.terms()
            .map(|(idx, c)| {
                let m: Vec<Vec<f64>> = idx
                    .iter()
                    .map(|&p| vectors.iter().map(|v| v[p]).collect())
                    .collect();
                c * det(m)
            })
            .sum()
    }
}

fn det(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))
            .expect("non-empty column");
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            let (top, bottom) = m.split_at_mut(r);
            for (x, y) in bottom[0][c..].iter_mut().zip(&top[c][c..]) {
                *x -= f * y;
            }
        }
    }
    d
}

pub fn norm(p: &[f64]) -> f64 {
    p.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn unit(p: &[f64]) -> Vec<f64> {
    let r = norm(p);
    p.iter().map(|x| x / r).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Numeric form-valued function on `R^n \ {0}`.
pub trait FormField: Sync {
    fn dim(&self) -> usize;
    fn degree(&self) -> usize;
    fn eval(&self, p: &[f64]) -> Result<NumForm>;
}

/// Closure-backed field.
pub struct FnField<F> {
    dim: usize,
    degree: usize,
    f: F,
}

impl<F> FnField<F>
where
    F: Fn(&[f64]) -> Result<NumForm> + Sync,
{
    pub fn new(dim: usize, degree: usize, f: F) -> Self {
        FnField { dim, degree, f }
    }
}

impl<F> FormField for FnField<F>
where
    F: Fn(&[f64]) -> Result<NumForm> + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn degree(&self) -> usize {
        self.degree
    }
    fn eval(&self, p: &[f64]) -> Result<NumForm> {
        if norm(p) < ORIGIN_GUARD {
            return Err(Error::NearOrigin(p.to_vec()));
        }
        (self.f)(p)
    }
}

/// Finite-difference stencil for the coefficient derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stencil {
    /// `(f(x+h) - f(x-h)) / 2h`, error `O(h^2)`.
    Central,
    /// Five-point `(-f(x+2h) + 8f(x+h) - 8f(x-h) + f(x-2h)) / 12h`, error `O(h^4)`.
    FivePoint,
}

/// Central-difference exterior derivative `df = sum_i dx_i ^ ∂_i f` at `p`.
pub fn numeric_d(field: &dyn FormField, p: &[f64], h: f64) -> Result<NumForm> {
    numeric_d_with(field, p, h, Stencil::Central)
}

pub fn numeric_d_with(
    field: &dyn FormField,
    p: &[f64],
    h: f64,
    stencil: Stencil,
) -> Result<NumForm> {
    let n = field.dim();
    if p.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.len(),
        });
    }
    if h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "step size must be positive, got {h}"
        )));
    }
    if norm(p) < ORIGIN_GUARD {
        return Err(Error::NearOrigin(p.to_vec()));
    }
    let at = |i: usize, t: f64| {
        let mut q = p.to_vec();
        q[i] += t;
        field.eval(&q)
    };
    let mut out = NumForm::zero(n, field.degree() + 1);
    for i in 0..n {
        let partial = match stencil {
            Stencil::Central => at(i, h)?.sub(&at(i, -h)?).scale(0.5 / h),
            Stencil::FivePoint => {
                let near = at(i, h)?.sub(&at(i, -h)?).scale(8.0);
                let far = at(i, 2.0 * h)?.sub(&at(i, -2.0 * h)?);
                near.sub(&far).scale(1.0 / (12.0 * h))
            }
        };
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        out = out.add(&NumForm::covector(&e).wedge(&partial));
    }
    Ok(out)
}

/// Normalized fixed-seed Gaussian draws on `S^{n-1}`.
pub fn sample_sphere(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| gaussian_unit(&mut rng, n)).collect()
}

fn gaussian_unit<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        if norm(&v) > 1e-6 {
            return unit(&v);
        }
    }
}

/// Random unit vector orthogonal to the unit vector `u`.
fn gaussian_tangent<R: Rng>(rng: &mut R, u: &[f64]) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..u.len()).map(|_| rng.sample(StandardNormal)).collect();
        let c = dot(&v, u);
        let t: Vec<f64> = v.iter().zip(u).map(|(a, b)| a - c * b).collect();
        if norm(&t) > 1e-6 {
            return unit(&t);
        }
    }
}

/// Orthogonal splitting of a constant form at a unit vector `u`:
/// `a = u ^ sigma + rho` with `sigma = i_u a` and `rho` tangential.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeSplit {
    pub u: Vec<f64>,
    pub sigma: NumForm,
    pub rho: NumForm,
}

impl ConeSplit {
    pub fn reconstruct(&self) -> NumForm {
        NumForm::covector(&self.u).wedge(&self.sigma).add(&self.rho)
    }
}

fn check_unit(u: &[f64]) -> Result<()> {
    let r = norm(u);
    if (r - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnit(r));
    }
    Ok(())
}

pub fn cone_split(parallel: &Form, u: &[f64]) -> Result<ConeSplit> {
    if u.len() != parallel.dim() {
        return Err(Error::DimensionMismatch {
            expected: parallel.dim(),
            found: u.len(),
        });
    }
    check_unit(u)?;
    Ok(split_num(&NumForm::from_exact(parallel), u))
}

fn split_num(a: &NumForm, u: &[f64]) -> ConeSplit {
    // i_u a has no u-component already since i_u i_u = 0
    let sigma = a.interior(u);
    let rho = a.tangential(u);
    ConeSplit {
        u: u.to_vec(),
        sigma,
        rho,
    }
}

/// Homogeneous extension `p -> i_{p/|p|} a`.
pub fn sigma_field(a: &NumForm) -> impl FormField + '_ {
    FnField::new(a.dim, a.degree.saturating_sub(1), move |p: &[f64]| {
        Ok(a.interior(&unit(p)))
    })
}

/// Homogeneous extension `p -> Π_p^* a`.
pub fn rho_field(a: &NumForm) -> impl FormField + '_ {
    FnField::new(a.dim, a.degree, move |p: &[f64]| Ok(a.tangential(&unit(p))))
}

/// Residuals of a verification run. `ratio` and `order_estimate` compare
/// the residual at `h` with the one at `h/2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub test: String,
    pub samples: usize,
    pub h: Option<f64>,
    pub tol: f64,
    pub max_residual: f64,
    pub residual_half_h: Option<f64>,
    pub ratio: Option<f64>,
    pub order_estimate: Option<f64>,
    pub expected_min_ratio: Option<f64>,
    pub passed: bool,
    pub recorded: BTreeMap<String, f64>,
}

impl ResidualReport {
    fn new(test: impl Into<String>, samples: usize, h: Option<f64>, tol: f64) -> Self {
        ResidualReport {
            test: test.into(),
            samples,
            h,
            tol,
            max_residual: 0.0,
            residual_half_h: None,
            ratio: None,
            order_estimate: None,
            expected_min_ratio: None,
            passed: false,
            recorded: BTreeMap::new(),
        }
    }

    fn set_halving(&mut self, coarse: f64, fine: f64) {
        self.residual_half_h = Some(fine);
        // residuals at round-off level carry no convergence information
        if fine > 1e-14 {
            let r = coarse / fine;
            self.ratio = Some(r);
            self.order_estimate = Some(r.log2());
        }
    }

    fn finish(mut self, extra_ok: bool) -> Self {
        let ratio_ok = match (self.expected_min_ratio, self.ratio) {
            (Some(min), Some(r)) => r >= min,
            (Some(_), None) => false,
            (None, _) => true,
        };
        self.passed = self.max_residual < self.tol && ratio_ok && extra_ok;
        self
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{} {}: max residual {:.3e} (tol {:.1e}){}",
            if self.passed { "PASS" } else { "FAIL" },
            self.test,
            self.max_residual,
            self.tol,
            self.ratio
                .map(|r| format!(", h-halving ratio {r:.2}"))
                .unwrap_or_default()
        )
    }
}

fn check_params(samples: usize, h: Option<f64>, tol: f64) -> Result<()> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    if let Some(h) = h {
        if h.is_nan() || h <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "step size must be positive, got {h}"
            )));
        }
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(())
}

fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, f64::max)
}

/// Residuals `|d_S sigma - k rho|` and `|d_S rho|` at one unit point.
fn cone_residuals(a: &NumForm, u: &[f64], h: f64) -> Result<(f64, f64, f64, f64)> {
    let k = a.degree as f64;
    let split = split_num(a, u);
    let ds = numeric_d(&sigma_field(a), u, h)?.tangential(u);
    let dr = numeric_d(&rho_field(a), u, h)?.tangential(u);
    let res_sigma = ds.sub(&split.rho.scale(k)).max_abs();
    Ok((
        res_sigma,
        dr.max_abs(),
        ds.dot(&split.rho),
        split.rho.norm_sq(),
    ))
}

/// Checks `d_S sigma = k rho` and `d_S rho = 0` for a constant `k`-form,
/// the identities forced by `da = 0` in cone coordinates.
pub fn verify_cone_identity(
    parallel: &Form,
    samples: usize,
    h: f64,
    tol: f64,
    seed: u64,
) -> Result<ResidualReport> {
    check_params(samples, Some(h), tol)?;
    let a = NumForm::from_exact(parallel);
    let points = sample_sphere(a.dim, samples, seed);
    let run = |h: f64| -> Result<Vec<(f64, f64, f64, f64)>> {
        points
            .par_iter()
            .map(|u| cone_residuals(&a, u, h))
            .collect()
    };
    let coarse = run(h)?;
    let fine = run(h / 2.0)?;
    let mut rep = ResidualReport::new(
        format!("cone identity, degree {} on R^{}", a.degree, a.dim),
        samples,
        Some(h),
        tol,
    );
    let worst = |rs: &[(f64, f64, f64, f64)]| max_of(rs.iter().map(|r| r.0.max(r.1)));
    rep.max_residual = worst(&coarse);
    rep.set_halving(rep.max_residual, worst(&fine));
    let rho_sq: f64 = coarse.iter().map(|r| r.3).sum();
    // rho vanishes identically for the volume form; only round-off remains
    if rho_sq > 1e-20 * samples as f64 {
        rep.expected_min_ratio = Some(MIN_HALVING_RATIO);
        let fitted = coarse.iter().map(|r| r.2).sum::<f64>() / rho_sq;
        rep.recorded.insert("fitted_ratio".into(), fitted);
        rep.recorded
            .insert("expected_ratio".into(), a.degree as f64);
    }
    rep.recorded.insert(
        "max_sigma_residual".into(),
        max_of(coarse.iter().map(|r| r.0)),
    );
    rep.recorded.insert(
        "max_rho_residual".into(),
        max_of(coarse.iter().map(|r| r.1)),
    );
    Ok(rep.finish(true))
}

/// Structure constants as floats, for `x × y` on `Im O`.
fn cross_table(table: &CayleyTable) -> Vec<f64> {
    let mut c = vec![0.0; 343];
    for i in 0..7 {
        for j in 0..7 {
            for k in 0..7 {
                if i != j {
                    c[(i * 7 + j) * 7 + k] = num_traits::ToPrimitive::to_f64(
                        &table.structure_constant(i + 1, j + 1, k + 1),
                    )
                    .unwrap_or(0.0);
                }
            }
        }
    }
    c
}

/// `J_u x = u . x` for `x` tangent to `S^6` at `u`.
fn apply_j(c: &[f64], u: &[f64], x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; 7];
    for i in 0..7 {
        for j in 0..7 {
            let w = u[i] * x[j];
            if w == 0.0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o += w * c[(i * 7 + j) * 7 + k];
            }
        }
    }
    out
}

struct NkSample {
    type_residual: f64,
    j_invariance: f64,
    j_square: f64,
    dfs_dot_rho: f64,
    rho_sq: f64,
}

/// Nearly Kähler type check on `S^6 ⊂ Im O` with `J_u x = u . x` and
/// `F_u(x, y) = <J_u x, y> = omega(u, x, y)`: `psi = d_S F` must satisfy
/// `psi(Jx, Jy, z) = -psi(x, y, z)`, i.e. be of type (3,0)+(0,3).
pub fn nearly_kaehler_check(
    table: &CayleyTable,
    samples: usize,
    h: f64,
    tol: f64,
    seed: u64,
) -> Result<ResidualReport> {
    check_params(samples, Some(h), tol)?;
    let omega = NumForm::from_exact(&structures::g2_form());
    let c = cross_table(table);
    let points = sample_sphere(7, samples, seed);
    let f_field = sigma_field(&omega);
    let per_point = |idx: usize, u: &Vec<f64>, h: f64| -> Result<NkSample> {
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed.wrapping_add(1)
                .wrapping_mul(0x9E37_79B9)
                .wrapping_add(idx as u64),
        );
        let psi = numeric_d(&f_field, u, h)?.tangential(u);
        let f_u = omega.interior(u);
        let rho = omega.tangential(u);
        let mut s = NkSample {
            type_residual: 0.0,
            j_invariance: 0.0,
            j_square: 0.0,
            dfs_dot_rho: psi.dot(&rho),
            rho_sq: rho.norm_sq(),
        };
        for _ in 0..TANGENT_TRIPLES {
            let x = gaussian_tangent(&mut rng, u);
            let y = gaussian_tangent(&mut rng, u);
            let z = gaussian_tangent(&mut rng, u);
            let jx = apply_j(&c, u, &x);
            let jy = apply_j(&c, u, &y);
            let jjx = apply_j(&c, u, &jx);
            s.j_square = s.j_square.max(
                jjx.iter()
                    .zip(&x)
                    .map(|(a, b)| (a + b).abs())
                    .fold(0.0, f64::max),
            );
            s.type_residual = s
                .type_residual
                .max((psi.eval(&[&jx, &jy, &z]) + psi.eval(&[&x, &y, &z])).abs());
            s.j_invariance = s
                .j_invariance
                .max((f_u.eval(&[&jx, &jy]) - f_u.eval(&[&x, &y])).abs());
        }
        Ok(s)
    };
    let run = |h: f64| -> Result<Vec<NkSample>> {
        points
            .par_iter()
            .enumerate()
            .map(|(i, u)| per_point(i, u, h))
            .collect()
    };
    let coarse = run(h)?;
    let j_sq = max_of(coarse.iter().map(|s| s.j_square));
    if j_sq > 1e-10 {
        return Err(Error::ConventionMismatch(format!(
            "J_u^2 differs from -id by {j_sq:e} on tangent vectors"
        )));
    }
    let fine = run(h / 2.0)?;
    let mut rep = ResidualReport::new("nearly Kähler type of d_S F on S^6", samples, Some(h), tol);
    rep.max_residual = max_of(coarse.iter().map(|s| s.type_residual));
    rep.set_halving(
        rep.max_residual,
        max_of(fine.iter().map(|s| s.type_residual)),
    );
    let j_inv = max_of(coarse.iter().map(|s| s.j_invariance));
    rep.recorded
        .insert("tangent_triples_per_sample".into(), TANGENT_TRIPLES as f64);
    rep.recorded.insert("j_square_residual".into(), j_sq);
    rep.recorded.insert("f_j_invariance_residual".into(), j_inv);
    rep.recorded.insert(
        "dF_over_rho".into(),
        coarse.iter().map(|s| s.dfs_dot_rho).sum::<f64>()
            / coarse.iter().map(|s| s.rho_sq).sum::<f64>(),
    );
    Ok(rep.finish(j_inv < tol))
}

/// Which cylinder model the Lee check runs on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LeeCase {
    G2,
    Spin7,
}

/// `-1/3 *(*dw ^ w)` on floats.
pub fn lee_g2_numeric(omega: &NumForm, domega: &NumForm) -> NumForm {
    domega.hodge().wedge(omega).hodge().scale(-1.0 / 3.0)
}

/// `-1/7 *(*dphi ^ phi)` on floats.
pub fn lee_spin7_numeric(phi: &NumForm, dphi: &NumForm) -> NumForm {
    dphi.hodge().wedge(phi).hodge().scale(-1.0 / 7.0)
}

/// Stencil used for the inner derivative that feeds the Lee operator.
pub const LEE_INNER_STENCIL: Stencil = Stencil::FivePoint;

struct LeeModel {
    case: LeeCase,
    a: NumForm,
}

impl LeeModel {
    fn new(case: LeeCase) -> Self {
        let a = match case {
            LeeCase::G2 => NumForm::from_exact(&structures::g2_form()),
            LeeCase::Spin7 => NumForm::from_exact(&structures::spin7_form()),
        };
        LeeModel { case, a }
    }

    fn k(&self) -> i32 {
        self.a.degree as i32
    }

    /// `|p|^{-k} a`, the flat model of the cylinder structure.
    fn model_field(&self) -> impl FormField + '_ {
        FnField::new(self.a.dim, self.a.degree, move |p: &[f64]| {
            Ok(self.a.scale(norm(p).powi(-self.k())))
        })
    }

    /// Lee form of the model at `p`, together with the frame components of
    /// the structure form and its derivative. The conformal metric
    /// `|p|^{-2} g` has orthonormal frame `|p| e_i`, so a `j`-form's frame
    /// components are `|p|^j` times its coordinate components.
    fn lee_at(&self, p: &[f64], h: f64) -> Result<(NumForm, NumForm, NumForm)> {
        let r = norm(p);
        let k = self.k();
        let form_frame = self.a.scale(norm(p).powi(-k)).scale(r.powi(k));
        let d = numeric_d_with(&self.model_field(), p, h, LEE_INNER_STENCIL)?;
        let d_frame = d.scale(r.powi(k + 1));
        let theta_frame = match self.case {
            LeeCase::G2 => lee_g2_numeric(&form_frame, &d_frame),
            LeeCase::Spin7 => lee_spin7_numeric(&form_frame, &d_frame),
        };
        Ok((theta_frame.scale(1.0 / r), form_frame, d_frame))
    }
}

struct LeeSample {
    d_theta: f64,
    radial: f64,
    radial_coef: f64,
    kappa: f64,
    kappa_fit: f64,
}

/// Lee form of the cylinder model `|p|^{-k} a` on `R^n \ {0}`: the form
/// must be closed and radial, `theta = K dr / r` with one constant `K`,
/// and `d(model) = kappa theta ^ model` with one constant `kappa`.
pub fn lee_closedness_check(
    case: LeeCase,
    samples: usize,
    h: f64,
    tol: f64,
    seed: u64,
) -> Result<ResidualReport> {
    check_params(samples, Some(h), tol)?;
    let model = LeeModel::new(case);
    let n = model.a.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<f64>> = (0..samples)
        .map(|_| {
            let u = gaussian_unit(&mut rng, n);
            let r: f64 = rng.gen_range(0.75..1.5);
            u.iter().map(|x| x * r).collect()
        })
        .collect();
    let theta_field = FnField::new(n, 1, |p: &[f64]| Ok(model.lee_at(p, h)?.0));
    let per_point = |p: &Vec<f64>, h: f64| -> Result<LeeSample> {
        let (theta, form_frame, d_frame) = model.lee_at(p, h)?;
        let d_theta = numeric_d(&theta_field, p, h)?.max_abs();
        let dr = NumForm::covector(&unit(p));
        let radial = theta.wedge(&dr).max_abs();
        let radial_coef: f64 = theta.coeffs.iter().zip(p).map(|(t, x)| t * x).sum();
        let theta_frame = theta.scale(norm(p));
        let tw = theta_frame.wedge(&form_frame);
        let kappa = d_frame.dot(&tw) / tw.norm_sq();
        let kappa_fit = d_frame.sub(&tw.scale(kappa)).max_abs();
        Ok(LeeSample {
            d_theta,
            radial,
            radial_coef,
            kappa,
            kappa_fit,
        })
    };
    let run =
        |h: f64| -> Result<Vec<LeeSample>> { points.par_iter().map(|p| per_point(p, h)).collect() };
    let coarse = run(h)?;
    let fine = run(h / 2.0)?;
    let name = match case {
        LeeCase::G2 => "Lee closedness, G2 cylinder model on R^7",
        LeeCase::Spin7 => "Lee closedness, Spin(7) cylinder model on R^8",
    };
    let mut rep = ResidualReport::new(name, samples, Some(h), tol);
    let worst = |s: &[LeeSample]| max_of(s.iter().map(|x| x.d_theta.max(x.radial)));
    rep.max_residual = worst(&coarse);
    rep.set_halving(rep.max_residual, worst(&fine));
    let m = coarse.len() as f64;
    let mean = coarse.iter().map(|s| s.radial_coef).sum::<f64>() / m;
    let std = (coarse
        .iter()
        .map(|s| (s.radial_coef - mean).powi(2))
        .sum::<f64>()
        / m)
        .sqrt();
    let rel_std = std / mean.abs();
    let kappa_mean = coarse.iter().map(|s| s.kappa).sum::<f64>() / m;
    let kappa_spread = max_of(coarse.iter().map(|s| (s.kappa - kappa_mean).abs()));
    rep.recorded.insert(
        "max_d_theta".into(),
        max_of(coarse.iter().map(|s| s.d_theta)),
    );
    rep.recorded.insert(
        "max_radial_residual".into(),
        max_of(coarse.iter().map(|s| s.radial)),
    );
    rep.recorded.insert("radial_coefficient_mean".into(), mean);
    rep.recorded
        .insert("radial_coefficient_rel_std".into(), rel_std);
    rep.recorded.insert("kappa_mean".into(), kappa_mean);
    rep.recorded
        .insert("kappa_max_deviation".into(), kappa_spread);
    rep.recorded.insert(
        "kappa_fit_residual".into(),
        max_of(coarse.iter().map(|s| s.kappa_fit)),
    );
    Ok(rep.finish(rel_std < LEE_CONSTANT_REL_STD))
}

/// `phi(x, y, z, w) / (|x|^2 + |y|^2 + |z|^2 + |w|^2)^2`.
pub fn rescaled_cayley(phi: &NumForm, args: [&[f64]; 4]) -> f64 {
    let s: f64 = args.iter().map(|v| dot(v, v)).sum();
    phi.eval(&args) / (s * s)
}

fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale < 1e-300 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Dilation invariance of the rescaled Cayley form: scaling all four
/// arguments by `lambda > 0` multiplies numerator and denominator by
/// `lambda^4`. Also checks the field version `p -> |p|^{-4} phi`, whose
/// pullback under `p -> lambda p` is itself.
pub fn dilation_invariance_check(samples: usize, tol: f64, seed: u64) -> Result<ResidualReport> {
    check_params(samples, None, tol)?;
    let phi = NumForm::from_exact(&structures::spin7_form_octonionic());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gauss =
        |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..8).map(|_| rng.sample(StandardNormal)).collect() };
    let mut cases: Vec<(Vec<Vec<f64>>, f64)> = Vec::with_capacity(samples);
    let e0 = {
        let mut v = vec![0.0; 8];
        v[0] = 1.0;
        v
    };
    for i in 0..samples {
        let mut args: Vec<Vec<f64>> = (0..4).map(|_| gauss(&mut rng)).collect();
        let lambda = match i {
            0 => 1.0,
            1 => {
                args[0] = e0.clone();
                2.0
            }
            2 => 1.0 / 3.0,
            _ => rng.gen_range(-3.0f64..3.0).exp(),
        };
        cases.push((args, lambda));
    }
    let (mut tensor_res, mut field_res) = (0.0f64, 0.0f64);
    let mut identity_exact = true;
    for (args, lambda) in &cases {
        let a: Vec<&[f64]> = args.iter().map(Vec::as_slice).collect();
        let base = rescaled_cayley(&phi, [a[0], a[1], a[2], a[3]]);
        let scaled: Vec<Vec<f64>> = args
            .iter()
            .map(|v| v.iter().map(|x| x * lambda).collect())
            .collect();
        let s: Vec<&[f64]> = scaled.iter().map(Vec::as_slice).collect();
        let moved = rescaled_cayley(&phi, [s[0], s[1], s[2], s[3]]);
        if *lambda == 1.0 && moved != base {
            identity_exact = false;
        }
        tensor_res = tensor_res.max(rel_err(base, moved));
        // field: (D_lambda^* F)_p = lambda^4 F_{lambda p}, F_p = |p|^{-4} phi
        let p = &args[0];
        let at_p = phi.scale(norm(p).powi(-4));
        let lp: Vec<f64> = p.iter().map(|x| x * lambda).collect();
        let pulled = phi.scale(norm(&lp).powi(-4) * lambda.powi(4));
        let diff = at_p.sub(&pulled).max_abs() / at_p.max_abs();
        field_res = field_res.max(diff);
    }
    let mut rep = ResidualReport::new(
        "dilation invariance of the rescaled Cayley form",
        samples,
        None,
        tol,
    );
    rep.max_residual = tensor_res.max(field_res);
    rep.recorded
        .insert("tensor_relative_residual".into(), tensor_res);
    rep.recorded
        .insert("field_relative_residual".into(), field_res);
    rep.recorded.insert(
        "lambda_one_exact".into(),
        if identity_exact { 1.0 } else { 0.0 },
    );
    Ok(rep.finish(identity_exact))
}
