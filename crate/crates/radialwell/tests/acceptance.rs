//! The project's acceptance gate: nine end-to-end checks, each printing
//! one verdict line (visible under `--nocapture`; always visible on
//! failure).

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use radialwell::model::{
    BoundaryConditionFamily, PotentialSpec, QuantumChannel, RadialMode, Spectrum, Units,
};
use radialwell::quadrature::{integrate, QuadratureRule};
use radialwell::{
    audit, bessel_zero, bessel_zeros, default_epsilon_ladder, delta_weight, pr_identity_residual,
    regularity_filter, shooting_solve, well_spectrum, AuditTolerances, AuditVerdict,
    ModeAdmissibility, ShootingConfig,
};

fn criterion(number: u32, label: &str, check: impl FnOnce() -> Result<(), String>) {
    match check() {
        Ok(()) => println!("acceptance {number} ({label}): pass"),
        Err(why) => {
            println!("acceptance {number} ({label}): FAIL - {why}");
            panic!("acceptance {number} ({label}) failed: {why}");
        }
    }
}

fn ensure(cond: bool, why: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why.into())
    }
}

fn free_spectrum(l: u32, family: BoundaryConditionFamily, n: u32) -> Spectrum {
    let geometry = PotentialSpec::zero(1.0).unwrap();
    well_spectrum(
        &geometry,
        QuantumChannel::new(l),
        family,
        Units::default(),
        n,
    )
    .unwrap()
}

#[test]
fn criterion_1_conventional_s_wave_ladder() {
    criterion(1, "conventional s-wave levels are n pi / a", || {
        let spectrum = free_spectrum(0, BoundaryConditionFamily::Conventional, 10);
        for e in spectrum.entries() {
            let expect = e.n as f64 * PI;
            ensure(
                (e.k - expect).abs() <= 1e-12 * expect,
                format!("k_{} = {} vs {}", e.n, e.k, expect),
            )?;
        }
        Ok(())
    });
}

#[test]
fn criterion_2_first_p_wave_zero() {
    criterion(2, "first j1 zero against an independent bisection", || {
        // j1(z) = 0 iff sin z - z cos z = 0; bisect that form afresh.
        let g = |z: f64| z.sin() - z * z.cos();
        let (mut lo, mut hi) = (4.0_f64, 4.6_f64);
        ensure(g(lo) > 0.0 && g(hi) < 0.0, "oracle bracket broken")?;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let computed = bessel_zero(1, 1).unwrap();
        ensure(
            (computed - 4.493409457909064).abs() <= 1e-12,
            format!("bessel_zero(1,1) = {computed}"),
        )?;
        ensure(
            (computed - oracle).abs() <= 1e-12,
            format!("bisection oracle gives {oracle}, library {computed}"),
        )
    });
}

#[test]
fn criterion_3_cosine_family_ladder() {
    criterion(3, "cosine-family levels are (n - 1/2) pi / a", || {
        let spectrum = free_spectrum(0, BoundaryConditionFamily::HuangThomann, 5);
        for e in spectrum.entries() {
            let expect = (e.n as f64 - 0.5) * PI;
            ensure(
                (e.k - expect).abs() <= 1e-12 * expect,
                format!("k_{} = {} vs {}", e.n, e.k, expect),
            )?;
        }
        Ok(())
    });
}

#[test]
fn criterion_4_hermiticity_adjudication() {
    criterion(
        4,
        "conventional states pass the audit, cosine states fail it",
        || {
            let units = Units::default();
            let tolerances = AuditTolerances::default();
            for l in 0..=5 {
                let spectrum = free_spectrum(l, BoundaryConditionFamily::Conventional, 5);
                for (e, mode) in spectrum
                    .entries()
                    .iter()
                    .zip(spectrum.well_modes().unwrap())
                {
                    let report = audit(&mode, units, tolerances).map_err(|e| e.to_string())?;
                    ensure(
                        report.verdict == AuditVerdict::Pass,
                        format!("l={l} n={} verdict {}", e.n, report.verdict),
                    )?;
                    let imbalance =
                        (report.endpoint_magnitudes.0 - report.endpoint_magnitudes.1).abs();
                    ensure(
                        report.wronskian_defect.norm() <= 1e-10 && imbalance <= 1e-10,
                        format!(
                            "l={l} n={}: wronskian {} imbalance {imbalance}",
                            e.n,
                            report.wronskian_defect.norm()
                        ),
                    )?;
                }
            }
            let spectrum = free_spectrum(0, BoundaryConditionFamily::HuangThomann, 5);
            for (e, mode) in spectrum
                .entries()
                .iter()
                .zip(spectrum.well_modes().unwrap())
            {
                let report = audit(&mode, units, tolerances).map_err(|e| e.to_string())?;
                ensure(
                    report.verdict == AuditVerdict::FailEndpointBalance,
                    format!("cosine n={} verdict {}", e.n, report.verdict),
                )?;
                let imbalance = (report.endpoint_magnitudes.0 - report.endpoint_magnitudes.1).abs();
                ensure(
                    (imbalance - 2.0_f64.sqrt()).abs() <= 1e-9,
                    format!("cosine n={} imbalance {imbalance}", e.n),
                )?;
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_5_momentum_identity_for_random_pairs() {
    criterion(
        5,
        "momentum matrix-element identity for 50 random pairs",
        || {
            let units = Units::default();
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for trial in 0..50 {
                let l: u32 = rng.gen_range(0..=3);
                let make = |rng: &mut ChaCha8Rng| {
                    let k = rng.gen_range(0.5..15.0);
                    let regular = rng.gen_range(-1.0..1.0_f64).max(0.05);
                    let irregular = if l == 0 {
                        rng.gen_range(-1.0..1.0)
                    } else {
                        0.0
                    };
                    RadialMode::analytic(k, QuantumChannel::new(l), 1.0, regular, irregular)
                        .unwrap()
                        .normalize()
                        .unwrap()
                };
                let m1 = make(&mut rng);
                let m2 = make(&mut rng);
                let residual =
                    pr_identity_residual(&m1, &m2, 16, units).map_err(|e| e.to_string())?;
                ensure(
                    residual <= 1e-8,
                    format!("trial {trial}: l={l} residual {residual}"),
                )?;
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_6_delta_source_weights() {
    criterion(
        6,
        "origin source weight is -B sqrt(4 pi) at quadratic order",
        || {
            let ladder = default_epsilon_ladder(1.0);
            let root_4pi = (4.0 * PI).sqrt();
            for b in [1.0, 0.5, -2.0] {
                let mode = RadialMode::analytic(1.0, QuantumChannel::new(0), 1.0, 1.0, b).unwrap();
                let est = delta_weight(&mode, &ladder).map_err(|e| e.to_string())?;
                ensure(
                    (est.extrapolated_weight + b * root_4pi).abs() <= 1e-6,
                    format!("B={b}: weight {}", est.extrapolated_weight),
                )?;
                let order = est
                    .convergence_order
                    .ok_or(format!("B={b}: no fitted order"))?;
                ensure((order - 2.0).abs() <= 0.5, format!("B={b}: order {order}"))?;
            }
            let pure_sine =
                RadialMode::analytic(PI, QuantumChannel::new(0), 1.0, 1.0, 0.0).unwrap();
            let est = delta_weight(&pure_sine, &ladder).map_err(|e| e.to_string())?;
            ensure(
                est.extrapolated_weight.abs() <= 1e-8,
                format!("B=0: weight {}", est.extrapolated_weight),
            )
        },
    );
}

/// Eigenvalues of the same radial operator on a uniform Dirichlet grid,
/// by Sturm-sequence bisection on the central-difference tridiagonal
/// matrix.
fn difference_levels(alpha: f64, a: f64, l: u32, count: usize, grid: usize) -> Vec<f64> {
    let h = a / grid as f64;
    let diag: Vec<f64> = (1..grid)
        .map(|i| {
            let r = i as f64 * h;
            2.0 / (h * h) - alpha / r + (l * (l + 1)) as f64 / (r * r)
        })
        .collect();
    let off_sq = 1.0 / (h * h * h * h);
    let below = |x: f64| {
        let mut negatives = 0usize;
        let mut q = 1.0_f64;
        for (i, d) in diag.iter().enumerate() {
            q = if i == 0 { d - x } else { d - x - off_sq / q };
            if q == 0.0 {
                q = 1e-300;
            }
            if q < 0.0 {
                negatives += 1;
            }
        }
        negatives
    };
    (1..=count)
        .map(|j| {
            let (mut lo, mut hi) = (-100.0_f64, 200.0_f64);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if below(mid) >= j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

#[test]
fn criterion_7_shooting_equivalence() {
    criterion(
        7,
        "shooting agrees with closed forms and a difference oracle",
        || {
            let units = Units::default();
            let free = PotentialSpec::zero(1.0).unwrap();
            let config = ShootingConfig::for_radius(1.0);
            for l in 0..=5 {
                let channel = QuantumChannel::new(l);
                let spectrum =
                    shooting_solve(&free, channel, units, &config, 5).map_err(|e| e.to_string())?;
                let zeros = bessel_zeros(l, 5).map_err(|e| e.to_string())?;
                for (e, z) in spectrum.entries().iter().zip(&zeros) {
                    ensure(
                        (e.k - z).abs() <= 1e-8 * z,
                        format!("free l={l} n={}: shooting {} vs zero {z}", e.n, e.k),
                    )?;
                }
            }
            let coulomb = PotentialSpec::coulomb_like(1.0, 1.0).unwrap();
            for l in 0..=1u32 {
                let coarse = difference_levels(1.0, 1.0, l, 2, 10_000);
                let fine = difference_levels(1.0, 1.0, l, 2, 20_000);
                let spectrum = shooting_solve(&coulomb, QuantumChannel::new(l), units, &config, 2)
                    .map_err(|e| e.to_string())?;
                for (i, e) in spectrum.entries().iter().enumerate() {
                    let oracle_k = ((4.0 * fine[i] - coarse[i]) / 3.0).sqrt();
                    ensure(
                        (e.k - oracle_k).abs() <= 1e-5 * oracle_k,
                        format!(
                            "coulomb l={l} n={}: shooting {} vs oracle {oracle_k}",
                            e.n, e.k
                        ),
                    )?;
                }
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_8_structural_invariants() {
    criterion(
        8,
        "interlacing, orthonormality, node counts, 1/a^2 scaling",
        || {
            let mut ladders = Vec::new();
            for l in 0..=11u32 {
                ladders.push(bessel_zeros(l, 11).map_err(|e| e.to_string())?);
            }
            for l in 0..=10usize {
                for n in 0..10 {
                    ensure(
                        ladders[l][n] < ladders[l + 1][n] && ladders[l + 1][n] < ladders[l][n + 1],
                        format!("interlacing broken at l={l} n={}", n + 1),
                    )?;
                }
            }
            let rule = QuadratureRule::default_rule();
            for l in [0u32, 1, 2] {
                let spectrum = free_spectrum(l, BoundaryConditionFamily::Conventional, 4);
                let modes: Vec<RadialMode> = spectrum
                    .well_modes()
                    .unwrap()
                    .iter()
                    .map(|m| m.normalize().unwrap())
                    .collect();
                for (i, mi) in modes.iter().enumerate() {
                    for (j, mj) in modes.iter().enumerate() {
                        let overlap = integrate(
                            |r| mi.evaluate_chi(r).unwrap().0 * mj.evaluate_chi(r).unwrap().0,
                            &rule,
                            0.0,
                            1.0,
                        )
                        .map_err(|e| e.to_string())?
                        .value;
                        let expect = if i == j { 1.0 } else { 0.0 };
                        ensure(
                            (overlap - expect).abs() <= 1e-9,
                            format!("l={l}: <{i}|{j}> = {overlap}"),
                        )?;
                    }
                }
            }
            for l in 0..=5 {
                let spectrum = free_spectrum(l, BoundaryConditionFamily::Conventional, 5);
                for e in spectrum.entries() {
                    ensure(
                        e.nodes == e.n - 1,
                        format!("l={l} n={}: {} nodes", e.n, e.nodes),
                    )?;
                }
            }
            let reference = free_spectrum(2, BoundaryConditionFamily::Conventional, 5);
            for a in [0.5, 3.7] {
                let geometry = PotentialSpec::zero(a).unwrap();
                let scaled = well_spectrum(
                    &geometry,
                    QuantumChannel::new(2),
                    BoundaryConditionFamily::Conventional,
                    Units::default(),
                    5,
                )
                .map_err(|e| e.to_string())?;
                for (e, f) in reference.entries().iter().zip(scaled.entries()) {
                    ensure(
                        (f.k * a - e.k).abs() <= 1e-12 * e.k,
                        format!("a={a} n={}: k a = {} vs {}", e.n, f.k * a, e.k),
                    )?;
                    ensure(
                        (f.energy * a * a - e.energy).abs() <= 1e-12 * e.energy,
                        format!(
                            "a={a} n={}: E a^2 = {} vs {}",
                            e.n,
                            f.energy * a * a,
                            e.energy
                        ),
                    )?;
                }
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_9_only_the_conventional_family_survives() {
    criterion(
        9,
        "filter acceptance plus audit pass singles out one family",
        || {
            let units = Units::default();
            let tolerances = AuditTolerances::default();
            let mut cases: Vec<(String, RadialMode, bool)> = Vec::new();
            for l in 0..=3 {
                let spectrum = free_spectrum(l, BoundaryConditionFamily::Conventional, 3);
                for (e, m) in spectrum
                    .entries()
                    .iter()
                    .zip(spectrum.well_modes().unwrap())
                {
                    cases.push((format!("conventional l={l} n={}", e.n), m, true));
                }
            }
            let spectrum = free_spectrum(0, BoundaryConditionFamily::HuangThomann, 3);
            for (e, m) in spectrum
                .entries()
                .iter()
                .zip(spectrum.well_modes().unwrap())
            {
                cases.push((format!("huang-thomann n={}", e.n), m, false));
            }
            for l in 1..=3 {
                for n in 1..=3 {
                    let k = n as f64 * PI;
                    let m = RadialMode::analytic(k, QuantumChannel::new(l), 1.0, 0.0, 1.0).unwrap();
                    cases.push((format!("neumann l={l} n={n}"), m, false));
                }
            }
            for (label, mode, expect) in &cases {
                let accepted = matches!(
                    regularity_filter(mode).map_err(|e| e.to_string())?,
                    ModeAdmissibility::Accepted
                );
                let passed = match audit(mode, units, tolerances) {
                    Ok(report) => report.verdict == AuditVerdict::Pass,
                    Err(_) => false,
                };
                ensure(
                    (accepted && passed) == *expect,
                    format!("{label}: filter accepted = {accepted}, audit pass = {passed}"),
                )?;
            }
            Ok(())
        },
    );
}
