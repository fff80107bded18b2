//! The acceptance suite, one function per criterion.

use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conegeo::{self, LeeCase, DEFAULT_H, DEFAULT_SAMPLES, DEFAULT_TOL};
use crate::error::Result;
use crate::exterior::{hodge, interior, stabilizer_dim, wedge, Form, OrthMap, Vector};
use crate::groups::{self, FiniteGroup, DEFAULT_CAP};
use crate::octonion::{designate_quaternion_frame, CayleyTable, Octonion};
use crate::structures;
use crate::{q, Rational};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "{} [{:>2}] {}: {} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

fn timed(
    id: u32,
    title: &str,
    limit: Option<Duration>,
    f: impl FnOnce() -> Result<(bool, String)>,
) -> Outcome {
    let start = Instant::now();
    let (mut passed, mut detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            passed = false;
            detail = format!("{detail}; exceeded time budget of {}s", limit.as_secs());
        }
    }
    Outcome {
        id,
        title: title.into(),
        passed,
        detail,
        elapsed,
    }
}

pub fn stabilizer_dimensions() -> Outcome {
    timed(
        1,
        "stabilizer dimensions",
        Some(Duration::from_secs(5)),
        || {
            let g2 = stabilizer_dim(&structures::g2_form());
            let s7 = stabilizer_dim(&structures::spin7_form());
            let oct = stabilizer_dim(&structures::spin7_form_octonionic());
            Ok((
                g2 == 14 && s7 == 21 && oct == 21,
                format!("g2 {g2}, spin7 {s7}, spin7-oct {oct}"),
            ))
        },
    )
}

/// Frames used by the group criteria: `e1..em` for `m = 1..7` followed by
/// ten random exact frames.
pub fn test_frames(seed: u64) -> Vec<Vec<Octonion>> {
    let mut frames: Vec<Vec<Octonion>> = (1..=7)
        .map(|m| (1..=m).map(Octonion::unit).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..10 {
        let m = rng.gen_range(1..=7);
        frames.push(groups::random_rational_frame(m, &mut rng));
    }
    frames
}

pub fn group_orders(seed: u64) -> Outcome {
    timed(
        2,
        "frame group orders 2^(m+1)",
        Some(Duration::from_secs(30)),
        || {
            let table = CayleyTable::standard();
            let mut bad = Vec::new();
            let mut seen = Vec::new();
            for (n, frame) in test_frames(seed).iter().enumerate() {
                let m = frame.len();
                let order = groups::frame_closure(table, frame, DEFAULT_CAP)?.order();
                let kind = if n < 7 { "basis" } else { "random" };
                seen.push(format!("{kind} m={m}: {order}"));
                if order != 1 << (m + 1) {
                    bad.push(format!(
                        "{kind} m={m} has order {order}, expected {}",
                        1 << (m + 1)
                    ));
                }
            }
            Ok(if bad.is_empty() {
                (true, seen.join(", "))
            } else {
                (false, bad.join("; "))
            })
        },
    )
}

pub fn sigma4_elements() -> Outcome {
    timed(3, "G_sigma(4) equals the listed 32 maps", None, || {
        let table = CayleyTable::standard();
        let qf = designate_quaternion_frame(table);
        let frame = qf.as_array();
        let group = groups::frame_group(table, &frame, DEFAULT_CAP)?;
        let listed = groups::sigma4_listed_maps(table, &frame, &qf.labels);
        let mut mats: Vec<&OrthMap> = listed.iter().map(|(_, m)| m).collect();
        mats.sort();
        mats.dedup();
        let missing: Vec<&str> = listed
            .iter()
            .filter(|(_, m)| !group.contains(m))
            .map(|(l, _)| l.as_str())
            .collect();
        let ok = group.order() == 32 && mats.len() == 32 && missing.is_empty();
        Ok((
            ok,
            format!(
                "frame ({}) [{}]: group order {}, {} distinct listed maps, {} missing",
                qf.labels.join(", "),
                qf.rule,
                group.order(),
                mats.len(),
                missing.len()
            ),
        ))
    })
}

pub fn spin7_membership(seed: u64) -> Outcome {
    timed(
        4,
        "frame groups and the Sp(2) example preserve the Cayley form",
        None,
        || {
            let table = CayleyTable::standard();
            let phi = structures::spin7_form_octonionic();
            let mut groups_checked: Vec<(String, FiniteGroup)> = Vec::new();
            for frame in test_frames(seed) {
                groups_checked.push((
                    format!("m={}", frame.len()),
                    groups::frame_closure(table, &frame, DEFAULT_CAP)?,
                ));
            }
            groups_checked.push(("sp2 example".into(), groups::sp2_example_group(table)?));
            let mut elements = 0;
            let mut bad = Vec::new();
            for (name, g) in &groups_checked {
                let r = groups::classify(g, &phi)?;
                elements += g.order();
                if !r.preserves_spin7 {
                    bad.push(format!("{name}: {}", r.violating_elements.join(" ")));
                }
            }
            Ok((
                bad.is_empty(),
                if bad.is_empty() {
                    format!("{} groups, {elements} elements", groups_checked.len())
                } else {
                    bad.join("; ")
                },
            ))
        },
    )
}

fn random_imaginary<R: Rng>(rng: &mut R) -> Octonion {
    loop {
        let mut xs = [0i64; 8];
        for x in xs.iter_mut().skip(1) {
            *x = rng.gen_range(-5..=5);
        }
        if xs.iter().any(|&x| x != 0) {
            return Octonion::from_integers(xs);
        }
    }
}

fn random_octonion<R: Rng>(rng: &mut R) -> Octonion {
    let mut xs = [0i64; 8];
    for x in xs.iter_mut() {
        *x = rng.gen_range(-5..=5);
    }
    Octonion::from_integers(xs).scale(&crate::ratio(1, rng.gen_range(1..=4)))
}

pub fn octonion_identities(seed: u64) -> Outcome {
    timed(
        5,
        "octonion identities on 1000 exact instances",
        None,
        || {
            let t = CayleyTable::standard();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut failures = Vec::new();
            for n in 0..1000 {
                let x = random_imaginary(&mut rng);
                let y0 = random_imaginary(&mut rng);
                // y := y0 - <x, y0>/|x|^2 x, exact
                let y = &y0 - &x.scale(&(x.inner(&y0) / x.norm_sq()));
                if y.norm_sq().is_zero() {
                    continue;
                }
                let o = random_octonion(&mut rng);
                let (a, b) = (random_octonion(&mut rng), random_octonion(&mut rng));
                let left_alt = t.mul(&t.mul(&a, &a), &b) == t.mul(&a, &t.mul(&a, &b));
                let right_alt = t.mul(&t.mul(&b, &a), &a) == t.mul(&b, &t.mul(&a, &a));
                let comp = t.mul(&a, &b).norm_sq() == a.norm_sq() * b.norm_sq();
                let paper = t.mul(&t.mul(&o, &y.conj()), &x) == -&t.mul(&t.mul(&o, &x.conj()), &y);
                if !(left_alt && right_alt && comp && paper) {
                    failures.push(n);
                }
            }
            Ok((failures.is_empty(), format!("{} failures", failures.len())))
        },
    )
}

pub fn torsion_formulas() -> Outcome {
    timed(
        6,
        "torsion double formulas on basis Lee forms",
        None,
        || {
            let omega = structures::g2_form();
            let phi = structures::spin7_form();
            let (star_omega, star_phi) = (hodge(&omega), hodge(&phi));
            let mut bad = Vec::new();
            for p in 0..7 {
                let theta = Form::covector(7, p);
                let lhs = hodge(&wedge(&theta, &omega)?);
                let rhs = -interior(&Vector::basis(7, p), &star_omega)?;
                if lhs != rhs || structures::torsion_g2(&theta, &omega).is_err() {
                    bad.push(format!("g2 e{}", p + 1));
                }
            }
            for p in 0..8 {
                let theta = Form::covector(8, p);
                let lhs = hodge(&wedge(&theta, &phi)?);
                let rhs = interior(&Vector::basis(8, p), &star_phi)?;
                if lhs != rhs || structures::torsion_spin7(&theta, &phi).is_err() {
                    bad.push(format!("spin7 e{p}"));
                }
            }
            Ok((
                bad.is_empty(),
                if bad.is_empty() {
                    "7 + 8 basis forms agree".into()
                } else {
                    bad.join(", ")
                },
            ))
        },
    )
}

pub fn lee_constants() -> Outcome {
    timed(7, "Lee recovery constants", None, || {
        let g = structures::lee_recovery_g2(&structures::g2_form())?;
        let s = structures::lee_recovery_spin7(&structures::spin7_form())?;
        let show = |c: &Option<Rational>| {
            c.as_ref()
                .map_or("not uniform".to_string(), |c| c.to_string())
        };
        Ok((
            g.constant.is_some() && s.constant.is_some(),
            format!(
                "c = {} over 7 basis forms, c' = {} over 8 basis forms",
                show(&g.constant),
                show(&s.constant)
            ),
        ))
    })
}

pub fn scalar_curvature() -> Outcome {
    timed(8, "scalar curvature of the round S^6 model", None, || {
        let s = structures::scalar_curvature_g2(&q(16))?;
        Ok((s == q(30), format!("scalar_curvature_g2(16) = {s}")))
    })
}

fn report_outcome(r: &conegeo::ResidualReport) -> String {
    let mut s = format!("max residual {:.3e}", r.max_residual);
    if let Some(ratio) = r.ratio {
        s.push_str(&format!(", halving ratio {ratio:.2}"));
    }
    for (k, v) in &r.recorded {
        s.push_str(&format!(", {k} {v:.6e}"));
    }
    s
}

pub fn cone_identities(seed: u64) -> Outcome {
    timed(
        9,
        "cone identities d_S sigma = k rho, d_S rho = 0",
        Some(Duration::from_secs(60)),
        || {
            let a = conegeo::verify_cone_identity(
                &structures::g2_form(),
                DEFAULT_SAMPLES,
                DEFAULT_H,
                DEFAULT_TOL,
                seed,
            )?;
            let b = conegeo::verify_cone_identity(
                &structures::spin7_form(),
                DEFAULT_SAMPLES,
                DEFAULT_H,
                DEFAULT_TOL,
                seed,
            )?;
            Ok((
                a.passed && b.passed,
                format!("omega: {}; phi: {}", report_outcome(&a), report_outcome(&b)),
            ))
        },
    )
}

pub fn nearly_kaehler(seed: u64) -> Outcome {
    timed(10, "nearly Kähler type on S^6", None, || {
        let r = conegeo::nearly_kaehler_check(
            CayleyTable::standard(),
            DEFAULT_SAMPLES,
            DEFAULT_H,
            DEFAULT_TOL,
            seed,
        )?;
        Ok((r.passed, report_outcome(&r)))
    })
}

pub fn lee_closedness(seed: u64) -> Outcome {
    timed(
        11,
        "Lee form closed and radial on cylinder models",
        None,
        || {
            let a = conegeo::lee_closedness_check(
                LeeCase::G2,
                DEFAULT_SAMPLES,
                DEFAULT_H,
                DEFAULT_TOL,
                seed,
            )?;
            let b = conegeo::lee_closedness_check(
                LeeCase::Spin7,
                DEFAULT_SAMPLES,
                DEFAULT_H,
                DEFAULT_TOL,
                seed,
            )?;
            Ok((
                a.passed && b.passed,
                format!("g2: {}; spin7: {}", report_outcome(&a), report_outcome(&b)),
            ))
        },
    )
}

pub fn dilation_invariance(seed: u64) -> Outcome {
    timed(
        12,
        "dilation invariance of the rescaled Cayley form",
        None,
        || {
            let r = conegeo::dilation_invariance_check(100, conegeo::DILATION_REL_TOL, seed)?;
            Ok((r.passed, report_outcome(&r)))
        },
    )
}

fn witnesses_correct(group: &FiniteGroup, verdict: &groups::FreenessVerdict) -> bool {
    verdict.witnesses.iter().all(|w| {
        let Some(i) = group.labels().iter().position(|l| *l == w.label) else {
            return false;
        };
        let g = &group.elements()[i];
        !w.kernel_basis.is_empty()
            && w.kernel_basis
                .iter()
                .all(|v| !v.norm_sq().is_zero() && g.apply(v) == *v)
    })
}

pub fn freeness_engine() -> Outcome {
    timed(13, "freeness engine", None, || {
        let minus = OrthMap::identity(8).scale(&q(-1));
        let pm = groups::closure(std::slice::from_ref(&minus), DEFAULT_CAP)?;
        let pm_free = groups::is_free_on_sphere(&pm).free && pm.order() == 2;
        let mut diag = vec![q(1); 8];
        diag[3] = q(-1);
        let reflection = OrthMap::diagonal(&diag);
        let with_refl = groups::closure(&[reflection.clone(), minus], DEFAULT_CAP)?;
        let v = groups::is_free_on_sphere(&with_refl);
        let refl_label = with_refl.labels()[with_refl
            .position(&reflection)
            .expect("generator is an element")]
        .clone();
        let refl_witness = v.witnesses.iter().find(|w| w.label == refl_label);
        let refl_ok = refl_witness.is_some_and(|w| {
            w.kernel_basis.len() == 7 && w.kernel_basis.iter().all(|b| b.components()[3].is_zero())
        });
        let ok = pm_free && !v.free && refl_ok && witnesses_correct(&with_refl, &v);
        Ok((
            ok,
            format!(
                "{{±I}} free: {pm_free}; reflection group order {} free: {}, {} witnesses, reflection fixes a 7-dim hyperplane: {refl_ok}",
                with_refl.order(),
                v.free,
                v.witnesses.len()
            ),
        ))
    })
}

/// Runs every criterion in order.
pub fn run_all(seed: u64) -> Vec<Outcome> {
    vec![
        stabilizer_dimensions(),
        group_orders(seed),
        sigma4_elements(),
        spin7_membership(seed),
        octonion_identities(seed),
        torsion_formulas(),
        lee_constants(),
        scalar_curvature(),
        cone_identities(seed),
        nearly_kaehler(seed),
        lee_closedness(seed),
        dilation_invariance(seed),
        freeness_engine(),
    ]
}
