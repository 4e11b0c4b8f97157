//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Runs without the libtest harness so the lines are always printed.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use fermion_magic::analytics::{
    avg_ipr_exact, avg_pre_annealed, avg_pre_asymptotic, log_avg_ipr_exact, EnsembleSpec,
};
use fermion_magic::gaussian::{CovarianceMatrix, MajoranaString};
use fermion_magic::linalg::haar_orthogonal;
use fermion_magic::magic::{characteristic_distribution, pre_exact, sre_estimate, sre_exact};
use fermion_magic::models::{
    random_gaussian, random_orbitals, sweep_kitaev, sweep_random, Kitaev2DParams, SweepConfig,
};
use fermion_magic::oracle::{
    exact_characteristic_distribution, pauli_index, pauli_of_majorana, sre_from_distribution,
    statevector_from_rotation,
};
use fermion_magic::rng::{derive_seed, seeded};
use fermion_magic::sampler::{draw_samples, marginal_probability, Method};
use fermion_magic::stats::{binary_entropy, linear_fit, mean_and_stderr};
use fermion_magic::Result;

const SEED: u64 = 0x5eed_2024;

type Check = fn() -> Result<Outcome>;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

fn oracle_equivalence() -> Result<Outcome> {
    let mut worst_pi = 0.0f64;
    let mut worst_sre = 0.0f64;
    for l in 2..=5usize {
        for s in 0..20u64 {
            let o = haar_orthogonal(2 * l, &mut seeded(derive_seed(SEED, &[1, l as u64, s])));
            let gamma = CovarianceMatrix::vacuum(l).rotate(&o)?;
            let psi = statevector_from_rotation(&o, l)?;
            let pf = characteristic_distribution(&gamma)?;
            let dense = exact_characteristic_distribution(&psi)?;
            for (i, p) in pf.iter().enumerate() {
                let x = MajoranaString::from_index(i as u64, 2 * l);
                let q = dense[pauli_index(pauli_of_majorana(&x), l)];
                worst_pi = worst_pi.max((p - q).abs());
            }
            for alpha in [1.0, 2.0, 3.0] {
                let exact = sre_exact(&gamma, alpha)?;
                let (m, mf) = sre_from_distribution(&dense, l, alpha);
                worst_sre = worst_sre
                    .max((exact.m_alpha - m).abs())
                    .max((exact.m_alpha_filtered - mf).abs());
            }
        }
    }
    Ok(Outcome::new(
        worst_pi < 1e-10 && worst_sre < 1e-10,
        format!("max |Δπ| = {worst_pi:.2e}, max |ΔM| = {worst_sre:.2e} (tol 1e-10)"),
    ))
}

fn sampler_correctness() -> Result<Outcome> {
    let l = 3;
    let n = 100_000;
    let mut worst_tvd = 0.0f64;
    let mut worst_chain = 0.0f64;
    for s in 0..5u64 {
        let gamma = random_gaussian(l, &mut seeded(derive_seed(SEED, &[2, s])));
        let pi = characteristic_distribution(&gamma)?;
        let samples = draw_samples(
            &gamma,
            derive_seed(SEED, &[2, s, 1]),
            n,
            Method::Determinant,
        )?;
        let mut counts: HashMap<u64, usize> = HashMap::new();
        for smp in &samples {
            *counts.entry(smp.x.index()).or_default() += 1;
            let logp = pi[smp.x.index() as usize].ln();
            worst_chain = worst_chain.max((smp.log_prob - logp).abs());
        }
        let tvd = 0.5
            * pi.iter()
                .enumerate()
                .map(|(i, p)| {
                    (counts.get(&(i as u64)).copied().unwrap_or(0) as f64 / n as f64 - p).abs()
                })
                .sum::<f64>();
        worst_tvd = worst_tvd.max(tvd);

        // every prefix of every distinct sampled string
        for &idx in counts.keys() {
            let bits = MajoranaString::from_index(idx, 2 * l).bits().to_vec();
            for k in 0..bits.len() {
                let whole = marginal_probability(&gamma, &bits[..k])?;
                let mut zero = bits[..k].to_vec();
                zero.push(false);
                let mut one = bits[..k].to_vec();
                one.push(true);
                let split =
                    marginal_probability(&gamma, &zero)? + marginal_probability(&gamma, &one)?;
                worst_chain = worst_chain.max((whole - split).abs());
            }
            let full = marginal_probability(&gamma, &bits)?;
            worst_chain = worst_chain.max((full - pi[idx as usize]).abs());
        }
    }
    Ok(Outcome::new(
        worst_tvd < 0.02 && worst_chain < 1e-8,
        format!("max TVD = {worst_tvd:.4} (tol 0.02), max chain/marginal deviation = {worst_chain:.2e} (tol 1e-8)"),
    ))
}

fn estimator_consistency() -> Result<Outcome> {
    let l = 6;
    let mut worst_z = 0.0f64;
    for s in 0..10u64 {
        let gamma = random_gaussian(l, &mut seeded(derive_seed(SEED, &[3, s])));
        let samples = draw_samples(
            &gamma,
            derive_seed(SEED, &[3, s, 1]),
            50_000,
            Method::Determinant,
        )?;
        for alpha in [1.0, 2.0, 3.0] {
            let est = sre_estimate(&samples, alpha, l)?;
            let exact = sre_exact(&gamma, alpha)?;
            worst_z = worst_z
                .max((est.m_alpha_filtered - exact.m_alpha_filtered).abs() / est.stderr)
                .max((est.m_alpha - exact.m_alpha).abs() / est.stderr_unfiltered);
        }
    }
    Ok(Outcome::new(
        worst_z < 3.0,
        format!("max |estimate - exact| / stderr = {worst_z:.2} over 10 states x 3 alphas (tol 3)"),
    ))
}

fn stabilizer_zeros() -> Result<Outcome> {
    let mut bad = Vec::new();
    for (name, gamma) in [
        ("vacuum", CovarianceMatrix::vacuum(6)),
        ("fully occupied", CovarianceMatrix::fully_occupied(6)),
    ] {
        let samples = draw_samples(&gamma, SEED, 2000, Method::Determinant)?;
        for alpha in [1.0, 2.0, 3.0] {
            let est = sre_estimate(&samples, alpha, 6)?;
            if est.m_alpha_filtered != 0.0 || sre_exact(&gamma, alpha)?.m_alpha_filtered != 0.0 {
                bad.push(format!("{name} alpha={alpha}"));
            }
        }
    }
    let grid = [
        Kitaev2DParams::new(8, 1.0, -1.0, 0.0)?,
        Kitaev2DParams::new(8, 1.0, 9.0, 0.0)?,
    ];
    let cfg = SweepConfig::new(SEED, 1, 2000);
    for r in sweep_kitaev(&grid, &[1.0, 2.0, 3.0], &cfg)? {
        if r.m_filtered_mean != 0.0 {
            bad.push(format!(
                "kitaev mu={} alpha={}",
                r.mu.unwrap_or(f64::NAN),
                r.alpha
            ));
        }
    }
    Ok(Outcome::new(
        bad.is_empty(),
        if bad.is_empty() {
            "all exactly 0".to_string()
        } else {
            format!("nonzero: {}", bad.join(", "))
        },
    ))
}

fn ipr_closed_form() -> Result<Outcome> {
    let closed = avg_ipr_exact(&EnsembleSpec::new(4, 2, 2)?);
    let mut rng = seeded(derive_seed(SEED, &[5]));
    let draws: Vec<f64> = (0..100_000)
        .map(|_| pre_exact(&random_orbitals(4, 2, &mut rng)?, 2.0).map(|p| p.ipr))
        .collect::<Result<_>>()?;
    let (mc, se) = mean_and_stderr(&draws);
    let rel = (mc - closed).abs() / closed;
    let mut trivial = true;
    for l in 1..=8u64 {
        for n in 0..=l {
            trivial &= avg_ipr_exact(&EnsembleSpec::new(l, n, 1)?) == 1.0;
        }
        for a in 2..=4 {
            trivial &= avg_ipr_exact(&EnsembleSpec::new(l, 0, a)?) == 1.0;
            trivial &= avg_ipr_exact(&EnsembleSpec::new(l, l, a)?) == 1.0;
        }
    }
    Ok(Outcome::new(
        (closed - 0.3).abs() < 1e-14 && rel < 0.01 && trivial,
        format!(
            "closed form {closed:.15}, Monte Carlo {mc:.5} ± {se:.5} (rel. diff {rel:.2e}, tol 1e-2); trivial cases exact: {trivial}"
        ),
    ))
}

fn entanglement_benchmark() -> Result<Outcome> {
    let mut rng = seeded(derive_seed(SEED, &[6]));
    let values: Vec<f64> = (0..50)
        .map(|_| random_gaussian(100, &mut rng).entanglement_entropy(50))
        .collect::<Result<_>>()?;
    let (mean, se) = mean_and_stderr(&values);
    Ok(Outcome::new(
        (mean - 19.4).abs() <= 0.5,
        format!("mean S_E(50) = {mean:.3} ± {se:.3} (target 19.4 ± 0.5)"),
    ))
}

fn haar_scaling() -> Result<Outcome> {
    let sizes = [8usize, 12, 16, 24, 32];
    let cfg = SweepConfig::new(derive_seed(SEED, &[7]), 100, 2000);
    let records = sweep_random(&sizes, &[1.0, 2.0], &cfg)?;
    let fit = |alpha: f64| {
        let (xs, ys): (Vec<f64>, Vec<f64>) = records
            .iter()
            .filter(|r| r.alpha == alpha)
            .map(|r| {
                let l = r.size as f64;
                (l.ln(), l * std::f64::consts::LN_2 - r.m_filtered_mean)
            })
            .unzip();
        (linear_fit(&xs, &ys).0, ys)
    };
    let (a1, y1) = fit(1.0);
    let (a2, y2) = fit(2.0);
    let fmt = |ys: &[f64]| {
        ys.iter()
            .map(|y| format!("{y:.3}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    Ok(Outcome::new(
        (0.35..=0.65).contains(&a1) && (0.8..=1.2).contains(&a2),
        format!(
            "a_1 = {a1:.3} (need [0.35, 0.65]), a_2 = {a2:.3} (need [0.8, 1.2]); gaps alpha=1: {}; alpha=2: {}",
            fmt(&y1),
            fmt(&y2)
        ),
    ))
}

fn is_concave(v: &[f64]) -> bool {
    v.windows(3).all(|w| w[0] + w[2] - 2.0 * w[1] <= 0.0)
}

fn argmax(v: &[f64]) -> usize {
    (0..v.len()).max_by(|&i, &j| v[i].total_cmp(&v[j])).unwrap()
}

fn fixed_n_correspondence() -> Result<Outcome> {
    let l = 16usize;
    let realizations = 20;
    let fillings: Vec<usize> = (2..=14).step_by(2).collect();
    let mut m2 = Vec::new();
    let mut s2 = Vec::new();
    let mut bound = Vec::new();
    for &n in &fillings {
        let vals: Vec<f64> = (0..realizations)
            .map(|r| {
                let v = random_orbitals(l, n, &mut seeded(derive_seed(SEED, &[8, n as u64, r])))?;
                let gamma = CovarianceMatrix::from_orbitals(&v);
                let samples = draw_samples(
                    &gamma,
                    derive_seed(SEED, &[8, n as u64, r, 1]),
                    2000,
                    Method::Determinant,
                )?;
                Ok(sre_estimate(&samples, 2.0, l)?.m_alpha / l as f64)
            })
            .collect::<Result<_>>()?;
        m2.push(mean_and_stderr(&vals).0);
        s2.push(avg_pre_annealed(&EnsembleSpec::new(l as u64, n as u64, 2)?)? / l as f64);
        bound.push(binary_entropy(n as f64 / l as f64));
    }
    let mid = fillings.iter().position(|&n| 2 * n == l).unwrap();
    let bounded = |v: &[f64]| v.iter().zip(&bound).all(|(x, b)| x <= b);
    let ok = is_concave(&m2)
        && is_concave(&s2)
        && argmax(&m2) == mid
        && argmax(&s2) == mid
        && bounded(&m2)
        && bounded(&s2);
    let fmt = |v: &[f64]| {
        v.iter()
            .map(|x| format!("{x:.4}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    Ok(Outcome::new(
        ok,
        format!(
            "M2/L: {}; S2/L: {}; h(n): {}",
            fmt(&m2),
            fmt(&s2),
            fmt(&bound)
        ),
    ))
}

fn criticality_signature() -> Result<Outcome> {
    let mus: Vec<f64> = (1..16).map(|i| 0.5 * i as f64).collect();
    let grid = mus
        .iter()
        .map(|&mu| Kitaev2DParams::new(8, 1.0, mu, 0.1))
        .collect::<Result<Vec<_>>>()?;
    let cfg = SweepConfig::new(derive_seed(SEED, &[9]), 1, 2000);
    let density: Vec<f64> = sweep_kitaev(&grid, &[1.0], &cfg)?
        .iter()
        .map(|r| r.m_filtered_mean)
        .collect();
    let slopes: Vec<f64> = density.windows(2).map(|w| w[1] - w[0]).collect();
    // a sign change between slope i-1 and slope i sits at grid point i
    let changes: Vec<f64> = (1..slopes.len())
        .filter(|&i| slopes[i - 1].signum() != slopes[i].signum())
        .map(|i| mus[i])
        .collect();
    let ok = changes.len() == 1 && changes[0] == 4.0;
    let fmt = density
        .iter()
        .map(|d| format!("{d:.4}"))
        .collect::<Vec<_>>()
        .join(" ");
    Ok(Outcome::new(
        ok,
        format!("sign changes at mu = {changes:?} (need exactly [4.0]); density on mu = 0.5..7.5: {fmt}"),
    ))
}

fn asymptotic_gap() -> Result<Outcome> {
    let gaps: Vec<f64> = [50u64, 100, 200, 400]
        .iter()
        .map(|&l| {
            let spec = EnsembleSpec::new(l, l / 2, 2)?;
            Ok((-log_avg_ipr_exact(&spec) - avg_pre_asymptotic(&spec)?).abs())
        })
        .collect::<Result<_>>()?;
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    Ok(Outcome::new(
        gaps[2] < 0.05 && decreasing,
        format!(
            "gaps at L = 50, 100, 200, 400: {} (L=200 tol 0.05, decreasing: {decreasing})",
            gaps.iter()
                .map(|g| format!("{g:.3e}"))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("1 oracle equivalence", oracle_equivalence),
        ("2 sampler correctness", sampler_correctness),
        ("3 estimator consistency", estimator_consistency),
        ("4 stabilizer zeros", stabilizer_zeros),
        ("5 IPR closed form", ipr_closed_form),
        ("6 entanglement benchmark", entanglement_benchmark),
        ("7 Haar scaling fit", haar_scaling),
        ("8 fixed-N correspondence", fixed_n_correspondence),
        ("9 2D criticality signature", criticality_signature),
        ("10 asymptotic formula", asymptotic_gap),
    ];
    let only: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failures = 0;
    for (name, check) in criteria {
        if !only.is_empty() && !only.iter().any(|o| name.starts_with(&format!("{o} "))) {
            continue;
        }
        let start = Instant::now();
        let outcome = check().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        let secs = start.elapsed().as_secs_f64();
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {name}: {} [{secs:.1}s]", outcome.detail);
        failures += usize::from(!outcome.passed);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
