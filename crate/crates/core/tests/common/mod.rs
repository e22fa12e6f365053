//! Shared helpers for the integration tests.
#![allow(dead_code)]

use ira_lattice::channel::{db_to_linear, remove_coset_flat, Demapper};
use ira_lattice::lattice::{Constellation, PartitionTable};
use rand::Rng;
use rand_distr::StandardNormal;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Upper-tail p-value of the χ² homogeneity test on a `k × 2` table of
/// `(errors, trials)` rows.
pub fn chi_square_homogeneity(rows: &[(u64, u64)]) -> f64 {
    let total_err: u64 = rows.iter().map(|r| r.0).sum();
    let total: u64 = rows.iter().map(|r| r.1).sum();
    let p = total_err as f64 / total as f64;
    let mut stat = 0.0;
    for &(e, n) in rows {
        let exp_e = n as f64 * p;
        let exp_c = n as f64 * (1.0 - p);
        stat += (e as f64 - exp_e).powi(2) / exp_e;
        stat += ((n - e) as f64 - exp_c).powi(2) / exp_c;
    }
    let dof = (rows.len() - 1) as f64;
    1.0 - ChiSquared::new(dof).unwrap().cdf(stat)
}

/// Two-sample Kolmogorov–Smirnov test: `(D, p)` with the asymptotic
/// Kolmogorov distribution.
pub fn ks_two_sample(a: &mut [f64], b: &mut [f64]) -> (f64, f64) {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < n && j < m {
        let x = a[i].min(b[j]);
        while i < n && a[i] <= x {
            i += 1;
        }
        while j < m && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let ne = (n * m) as f64 / (n + m) as f64;
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    (d, kolmogorov_q(lambda))
}

/// `Q(λ) = 2 Σ_{j≥1} (−1)^{j−1} e^{−2j²λ²}`.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=200 {
        let term = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One channel use: `x = c ⊕ r` is sent, and the coset-removed APP of `c`
/// is written to `app`. `with_coset = false` sends `c` directly.
pub fn channel_app(
    c: usize,
    with_coset: bool,
    table: &PartitionTable,
    constellation: &Constellation,
    demapper: &Demapper,
    snr_db: f64,
    rng: &mut impl Rng,
    app: &mut [f64],
) {
    let r = if with_coset { rng.random_range(0..table.size()) } else { 0 };
    let x = table.add_idx(c, r);
    let amp = db_to_linear(snr_db).sqrt();
    let y: Vec<f64> = constellation.points[x]
        .iter()
        .map(|&s| amp * s + std::f64::consts::FRAC_1_SQRT_2 * rng.sample::<f64, _>(StandardNormal))
        .collect();
    demapper.app_into(&y, app);
    remove_coset_flat(app, &[r as u8], table);
}

pub fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// Per-symbol `(errors, trials)` of hard decisions on the coset-removed APP
/// with `c` uniform.
pub fn conditional_errors(samples: usize, snr_db: f64, with_coset: bool, seed: u64) -> Vec<(u64, u64)> {
    let t = PartitionTable::hurwitz_1_2i();
    let c = ira_lattice::normalize_constellation(&t).unwrap();
    let dm = Demapper::new(&c, snr_db);
    let mut rng = ira_lattice::rng::stream(seed, 0);
    let mut rows = vec![(0u64, 0u64); t.size()];
    let mut app = vec![0.0; t.size()];
    for _ in 0..samples {
        let sym = rng.random_range(0..t.size());
        channel_app(sym, with_coset, &t, &c, &dm, snr_db, &mut rng, &mut app);
        rows[sym].1 += 1;
        rows[sym].0 += u64::from(argmax(&app) != sym);
    }
    rows
}

/// Component `k` of `samples` independent coset-removed APP vectors.
/// `c` is uniform unless `fixed` is given.
pub fn app_component(samples: usize, k: usize, snr_db: f64, fixed: Option<usize>, seed: u64) -> Vec<f64> {
    let t = PartitionTable::hurwitz_1_2i();
    let c = ira_lattice::normalize_constellation(&t).unwrap();
    let dm = Demapper::new(&c, snr_db);
    let mut rng = ira_lattice::rng::stream(seed, k as u64);
    let mut app = vec![0.0; t.size()];
    (0..samples)
        .map(|_| {
            let sym = fixed.unwrap_or_else(|| rng.random_range(0..t.size()));
            channel_app(sym, true, &t, &c, &dm, snr_db, &mut rng, &mut app);
            app[k]
        })
        .collect()
}

/// Bonferroni-corrected KS over every pair `(ψ₀, ψ_k)`: the smallest
/// p-value times the number of comparisons.
pub fn permutation_invariance_p(samples: usize, snr_db: f64, fixed: Option<usize>, seed: u64) -> f64 {
    let mut p0 = app_component(samples, 0, snr_db, fixed, seed);
    let mut worst = 1.0f64;
    for k in 1..25 {
        let mut pk = app_component(samples, k, snr_db, fixed, seed.wrapping_add(1));
        let (_, p) = ks_two_sample(&mut p0, &mut pk);
        worst = worst.min(p);
    }
    (worst * 24.0).min(1.0)
}

/// Exhaustive nearest point over a box of doubled coordinates: the squared
/// distance and the doubled coordinates of the first minimizer.
pub fn brute_nearest_point(x: &[f64; 4]) -> (f64, [i64; 4]) {
    let mut best = (f64::INFINITY, [0i64; 4]);
    for parity in [0i64, 1] {
        let centre: Vec<i64> = x.iter().map(|v| (2.0 * v).round() as i64).collect();
        let range = |c: i64| (c - 3..=c + 3).filter(move |d| d.rem_euclid(2) == parity);
        for a in range(centre[0]) {
            for b in range(centre[1]) {
                for c in range(centre[2]) {
                    for d in range(centre[3]) {
                        let p = [a, b, c, d];
                        let e: f64 = (0..4).map(|i| (x[i] - p[i] as f64 / 2.0).powi(2)).sum();
                        if e < best.0 {
                            best = (e, p);
                        }
                    }
                }
            }
        }
    }
    best
}

pub fn brute_nearest(x: &[f64; 4]) -> f64 {
    brute_nearest_point(x).0
}
