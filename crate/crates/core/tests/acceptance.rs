//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every line is printed; the process
//! exits nonzero when any criterion fails.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clifford_magic::clifford::{commutation_sign, sign_product, CliffordElement, MultiIndex};
use clifford_magic::fusion::{fundamental_power, poincare_coefficients};
use clifford_magic::haar::{sphere_moment_exact, SeededSampler};
use clifford_magic::linalg::ComplexMatrix;
use clifford_magic::magic::{
    block_4x4, character, clifford_magic, glue_identity, permutation_magic, two_by_two,
    verify_magic, MagicMatrix,
};
use clifford_magic::moments::{
    catalan, character_moment_exact, estimate_phi_moments, hypothesis_report, phi_moment_exact,
    spectral_histogram, squared_semicircle_moment_quadrature,
};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

const SEED: u64 = 20_240_601;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Exact Catalan identity at n = 4 for k ≤ 20, under one second.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for k in 0..=20u32 {
        let lhs = BigRational::from_integer(BigInt::from(4).pow(k)) * sphere_moment_exact(4, k);
        let rhs = BigRational::from_integer(BigInt::from(catalan(k)));
        if lhs != rhs {
            mismatches.push(k);
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches.is_empty() && elapsed < Duration::from_secs(1),
        format!("k = 0..=20, mismatches {mismatches:?}, {elapsed:.2?}"),
    )
}

/// Monte Carlo at s = 2 with 10^6 samples within 5 standard errors of the
/// Catalan numbers, single-threaded under 60 s.
fn criterion_2() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let start = Instant::now();
    let report = pool
        .install(|| estimate_phi_moments(2, 5, 1_000_000, &SeededSampler::new(SEED)))
        .unwrap();
    let elapsed = start.elapsed();
    let targets = [1.0, 2.0, 5.0, 14.0, 42.0];
    let mut pass = elapsed < Duration::from_secs(60);
    let mut parts = Vec::new();
    for (k, target) in (1..=5).zip(targets) {
        let d = report.degree(k).unwrap();
        let z = (d.mc_estimate - target) / d.mc_stderr;
        pass &= z.abs() <= 5.0;
        parts.push(format!("k={k}: {:.4} (z={z:+.2})", d.mc_estimate));
    }
    outcome(pass, format!("{}, {elapsed:.2?}", parts.join(", ")))
}

/// `character(clifford_magic(x))` is `diag(n x_I²)` to 1e-12 for 1000 random
/// real unit x at each s ∈ {1, 2, 3}.
fn criterion_3() -> Outcome {
    let sampler = SeededSampler::new(SEED).with_stream(3);
    let mut pass = true;
    let mut parts = Vec::new();
    for rank in 1..=3u32 {
        let n = (1usize << rank) as f64;
        let mut off: f64 = 0.0;
        let mut diag: f64 = 0.0;
        for i in 0..1000 {
            let x = sampler.unitary(rank, i).unwrap();
            let chi = character(&clifford_magic(&x, 1e-12).unwrap());
            off = off.max(chi.max_off_diagonal());
            for (k, coeff) in x.coeffs().iter().enumerate() {
                let expected = n * coeff.re * coeff.re;
                diag = diag.max((chi[(k, k)] - c(expected, 0.0)).norm());
            }
        }
        pass &= off <= 1e-12 && diag <= 1e-12;
        parts.push(format!(
            "s={rank}: off-diagonal {off:.2e}, diagonal {diag:.2e}"
        ));
    }
    outcome(pass, parts.join("; "))
}

/// Random `d x d` projection of rank `index mod (d + 1)` from Gram–Schmidt.
fn random_projection(sampler: &SeededSampler, index: u64, d: usize) -> ComplexMatrix {
    let mut rng = sampler.sample_rng(index);
    let rank = index as usize % (d + 1);
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    while basis.len() < rank {
        let mut v: Vec<Complex64> = (0..d)
            .map(|_| c(rng.next_gaussian(), rng.next_gaussian()))
            .collect();
        for u in &basis {
            let dot: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= dot * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            basis.push(v.iter().map(|z| z / norm).collect());
        }
    }
    let mut entries = vec![c(0.0, 0.0); d * d];
    for u in &basis {
        for i in 0..d {
            for j in 0..d {
                entries[i * d + j] += u[i] * u[j].conj();
            }
        }
    }
    ComplexMatrix::new(d, d, entries).unwrap()
}

/// Magic biunitarity of every construction, and of its identity gluing.
fn criterion_4() -> Outcome {
    let sampler = SeededSampler::new(SEED).with_stream(4);
    let tol = 1e-12;
    let mut failures = Vec::new();
    let mut candidates: Vec<(String, MagicMatrix, bool)> = Vec::new();
    for rank in 1..=3u32 {
        for i in 0..100 {
            let x = sampler.unitary(rank, i).unwrap();
            match clifford_magic(&x, tol) {
                Ok(v) => candidates.push((format!("clifford s={rank} #{i}"), v, false)),
                Err(e) => failures.push(format!("clifford s={rank} #{i}: {e}")),
            }
        }
    }
    for n in 1..=4 {
        candidates.push((
            format!("permutation n={n}"),
            permutation_magic(n).unwrap(),
            true,
        ));
    }
    let projections = SeededSampler::new(SEED).with_stream(40);
    for i in 0..50u64 {
        let p = random_projection(&projections, 2 * i, 3);
        let q = random_projection(&projections, 2 * i + 1, 3);
        candidates.push((format!("two_by_two #{i}"), two_by_two(&p).unwrap(), false));
        candidates.push((format!("block_4x4 #{i}"), block_4x4(&p, &q).unwrap(), false));
    }
    let mut worst: f64 = 0.0;
    for (label, v, require_zero) in &candidates {
        for (glued, m) in [(false, v.clone()), (true, glue_identity(v, 2))] {
            let r = verify_magic(&m, tol);
            worst = worst.max(r.max_defect());
            if !r.pass || (*require_zero && r.max_defect() != 0.0) {
                failures.push(format!("{label}{}", if glued { "+glue" } else { "" }));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "worst defect {worst:.2e}, {} failing matrices{}",
            failures.len(),
            failures
                .first()
                .map(|f| format!(" (first: {f})"))
                .unwrap_or_default()
        ),
    )
}

/// `Σ_I ε(I, J) ε(I, K) = 2^s δ_{JK}`, exhaustively for s ≤ 4.
fn criterion_5() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for rank in 1..=4u32 {
        let all: Vec<MultiIndex> = MultiIndex::all(rank).unwrap().collect();
        let n = all.len() as i32;
        let mut bad = 0;
        for &j in &all {
            for &k in &all {
                let sum: i32 = all
                    .iter()
                    .map(|&i| commutation_sign(i, j).unwrap() * commutation_sign(i, k).unwrap())
                    .sum();
                if sum != if j == k { n } else { 0 } {
                    bad += 1;
                }
            }
        }
        pass &= bad == 0;
        parts.push(format!("s={rank}: {bad}/{} pairs off", n * n));
    }
    outcome(pass, parts.join(", "))
}

/// Fusion-ring recomputation of the Catalan numbers and of `dim = 4^m`.
fn criterion_6() -> Outcome {
    let start = Instant::now();
    let coeffs = poincare_coefficients(15);
    let catalan_ok = coeffs
        .iter()
        .enumerate()
        .all(|(k, m)| *m == catalan(k as u32));
    let dims_ok =
        (0..=12u32).all(|m| fundamental_power(m).dimension() == BigUint::from(4u32).pow(m));
    let elapsed = start.elapsed();
    outcome(
        catalan_ok && dims_ok && elapsed < Duration::from_secs(1),
        format!("catalan k<=15 {catalan_ok}, dimension m<=12 {dims_ok}, {elapsed:.2?}"),
    )
}

/// At n = 8 the second moment is 12/5 ≠ 2 and the report is violated at k = 2.
fn criterion_7() -> Outcome {
    let m2 = phi_moment_exact(3, 2);
    let expected = BigRational::new(BigInt::from(12), BigInt::from(5));
    let two = BigRational::from_integer(BigInt::from(2));
    let report = hypothesis_report(3, 6, 0, &SeededSampler::new(SEED)).unwrap();
    let pass =
        m2 == expected && m2 != two && !report.satisfied() && report.witness_degree == Some(2);
    outcome(
        pass,
        format!(
            "phi(chi^2) = {m2} (~{:.4}), verdict '{}', witness {:?}",
            m2.to_f64().unwrap_or(f64::NAN),
            report.verdict.as_str(),
            report.witness_degree
        ),
    )
}

/// Spectral histogram at s = 2 against the squared-semicircle law, and the
/// quadrature moments of that law.
fn criterion_8() -> Outcome {
    let hist =
        spectral_histogram(2, 100_000, 40, &SeededSampler::new(SEED).with_stream(8)).unwrap();
    let sup = hist.sup_norm_deviation.unwrap_or(f64::INFINITY);
    let mut quad_err: f64 = 0.0;
    for k in 0..=6u32 {
        let q = squared_semicircle_moment_quadrature(k, 1e-12);
        quad_err = quad_err.max((q - catalan(k).to_f64().unwrap()).abs());
    }
    let edges_ok =
        hist.histogram.lower == 0.0 && hist.histogram.upper == 4.0 && hist.histogram.bins() == 40;
    outcome(
        sup <= 0.05 && quad_err <= 1e-6 && edges_ok,
        format!("sup-norm {sup:.4} over 40 bins on [0, 4], quadrature error {quad_err:.2e}"),
    )
}

/// Brute-force reduction of a generator word by adjacent swaps and
/// cancellations `e_i e_i = -1`; returns the sign and the surviving set.
fn rewrite_word(mut word: Vec<u32>) -> (i32, u32) {
    let mut sign = 1;
    let mut i = 0;
    while i + 1 < word.len() {
        if word[i] == word[i + 1] {
            word.drain(i..i + 2);
            sign = -sign;
            i = i.saturating_sub(1);
        } else if word[i] > word[i + 1] {
            word.swap(i, i + 1);
            sign = -sign;
            i = i.saturating_sub(1);
        } else {
            i += 1;
        }
    }
    (sign, word.iter().fold(0, |acc, g| acc | 1 << (g - 1)))
}

fn quadratic_roots(m: &ComplexMatrix) -> Vec<f64> {
    let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
    let b2 = m[(0, 1)].norm_sqr();
    let disc = ((a - d) * (a - d) / 4.0 + b2).sqrt();
    vec![(a + d) / 2.0 - disc, (a + d) / 2.0 + disc]
}

/// Roots of `det(λ - m)` for Hermitian 3x3 `m` by the trigonometric formula.
fn cubic_roots(m: &ComplexMatrix) -> Vec<f64> {
    let tr = (0..3).map(|i| m[(i, i)].re).sum::<f64>();
    let minors = m[(0, 0)].re * m[(1, 1)].re - m[(0, 1)].norm_sqr() + m[(0, 0)].re * m[(2, 2)].re
        - m[(0, 2)].norm_sqr()
        + m[(1, 1)].re * m[(2, 2)].re
        - m[(1, 2)].norm_sqr();
    let det = (m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
        - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
        + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)]))
        .re;
    // λ = t + tr/3 turns λ³ - tr λ² + minors λ - det into t³ + p t + q
    let shift = tr / 3.0;
    let p = minors - tr * tr / 3.0;
    let q = -2.0 * tr.powi(3) / 27.0 + tr * minors / 3.0 - det;
    let mut roots = if p.abs() < 1e-300 {
        vec![shift; 3]
    } else {
        let r = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * r)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|j| shift + r * (theta - 2.0 * std::f64::consts::PI * j as f64 / 3.0).cos())
            .collect()
    };
    roots.sort_by(f64::total_cmp);
    roots
}

fn random_hermitian(sampler: &SeededSampler, index: u64, d: usize) -> ComplexMatrix {
    let mut rng = sampler.sample_rng(index);
    let mut m = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = c(rng.next_gaussian(), 0.0);
        for j in i + 1..d {
            let z = c(rng.next_gaussian(), rng.next_gaussian());
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Fast paths against independent oracles.
fn criterion_9() -> Outcome {
    let sampler = SeededSampler::new(SEED).with_stream(9);
    let mut moment_err: f64 = 0.0;
    for rank in 1..=3u32 {
        for i in 0..20 {
            let x = sampler.unitary(rank, i).unwrap();
            let chi = character(&clifford_magic(&x, 1e-12).unwrap());
            for k in 0..=6 {
                let dense = chi.pow(k).unwrap().normalized_trace().unwrap();
                let fast = character_moment_exact(&x, k).unwrap();
                moment_err = moment_err.max((dense - c(fast, 0.0)).norm());
            }
        }
    }

    let mut sign_mismatches = 0;
    let mut pairs = 0;
    for rank in 1..=4u32 {
        for a in MultiIndex::all(rank).unwrap() {
            for b in MultiIndex::all(rank).unwrap() {
                let mut word = a.generators();
                word.extend(b.generators());
                let (sign, bits) = rewrite_word(word);
                let product = CliffordElement::basis(a)
                    .multiply(&CliffordElement::basis(b))
                    .unwrap();
                let expected_coeff = product.coeff(MultiIndex::new(bits, rank).unwrap()).re;
                pairs += 1;
                if sign_product(a, b).unwrap() != sign || expected_coeff != f64::from(sign) {
                    sign_mismatches += 1;
                }
            }
        }
    }

    let mut eigen_err: f64 = 0.0;
    for i in 0..200u64 {
        let d = 2 + (i as usize % 2);
        let m = random_hermitian(&sampler, 1000 + i, d);
        let jacobi = m.hermitian_eigenvalues(1e-14).unwrap();
        let roots = if d == 2 {
            quadratic_roots(&m)
        } else {
            cubic_roots(&m)
        };
        for (a, b) in jacobi.iter().zip(&roots) {
            eigen_err = eigen_err.max((a - b).abs());
        }
    }

    outcome(
        moment_err <= 1e-10 && sign_mismatches == 0 && eigen_err <= 1e-8,
        format!(
            "moments vs trace powers {moment_err:.2e}, sign_product vs rewriting {sign_mismatches}/{pairs} mismatches, \
             jacobi vs roots {eigen_err:.2e}"
        ),
    )
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["clifford-magic"];
    full.extend_from_slice(args);
    let code = clifford_magic::cli::run(full, &mut out, &mut err);
    (code, out)
}

fn artifact_bytes(dir: &Path, tag: &str, threads: &str) -> Vec<(String, Vec<u8>)> {
    let path = |name: &str| {
        dir.join(format!("{tag}-{name}"))
            .to_string_lossy()
            .into_owned()
    };
    let runs: Vec<(String, Vec<String>)> = vec![
        (
            "moments.json".into(),
            vec![
                "moments",
                "--s",
                "2",
                "--k-max",
                "5",
                "--samples",
                "20000",
                "--seed",
                "7",
            ],
        ),
        (
            "moments.csv".into(),
            vec![
                "moments",
                "--s",
                "3",
                "--k-max",
                "4",
                "--samples",
                "20000",
                "--seed",
                "7",
                "--format",
                "csv",
            ],
        ),
        (
            "spectrum.csv".into(),
            vec!["spectrum", "--s", "2", "--samples", "20000", "--seed", "7"],
        ),
        (
            "verify.json".into(),
            vec![
                "verify",
                "--construction",
                "clifford",
                "--s",
                "3",
                "--seed",
                "1",
            ],
        ),
        (
            "character.json".into(),
            vec!["character", "--s", "2", "--seed", "5"],
        ),
        ("fusion.json".into(), vec!["fusion", "--k-max", "12"]),
        (
            "report.json".into(),
            vec![
                "report",
                "--s",
                "2",
                "--k-max",
                "5",
                "--samples",
                "5000",
                "--seed",
                "3",
            ],
        ),
    ]
    .into_iter()
    .map(|(name, args)| (name, args.into_iter().map(String::from).collect()))
    .collect();
    let mut out = Vec::new();
    for (name, mut args) in runs {
        let target = path(&name);
        args.extend([
            "--output".to_string(),
            target.clone(),
            "--threads".into(),
            threads.into(),
        ]);
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, stdout) = run_cli(&argv);
        out.push((format!("{name} exit"), code.to_string().into_bytes()));
        out.push((format!("{name} stdout"), stdout));
        out.push((name.clone(), std::fs::read(&target).unwrap_or_default()));
        if name == "spectrum.csv" {
            out.push((
                "spectrum.csv.json".into(),
                std::fs::read(format!("{target}.json")).unwrap_or_default(),
            ));
        }
    }
    out
}

/// Identical flags give byte-identical artifacts, across thread counts too.
fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let first = artifact_bytes(dir.path(), "a", "1");
    let second = artifact_bytes(dir.path(), "b", "4");
    let differing: Vec<&str> = first
        .iter()
        .zip(&second)
        .filter(|(a, b)| a.1 != b.1)
        .map(|(a, _)| a.0.as_str())
        .collect();
    let empty: Vec<&str> = first
        .iter()
        .filter(|(name, bytes)| !name.contains(' ') && bytes.is_empty())
        .map(|(name, _)| name.as_str())
        .collect();
    outcome(
        differing.is_empty() && empty.is_empty(),
        format!(
            "{} artifacts compared, differing {differing:?}, missing {empty:?}",
            first.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("exact Catalan identity at n = 4", criterion_1),
        ("Monte Carlo Catalan moments at s = 2", criterion_2),
        ("diagonal character", criterion_3),
        ("magic biunitarity", criterion_4),
        ("sign orthogonality", criterion_5),
        ("fusion-ring oracle", criterion_6),
        ("non-semicircular deviation at n = 8", criterion_7),
        ("spectral law at s = 2", criterion_8),
        ("oracle equivalences", criterion_9),
        ("reproducibility", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = check();
        if !result.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({})",
            i + 1,
            if result.pass { "PASS" } else { "FAIL" },
            name,
            result.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
