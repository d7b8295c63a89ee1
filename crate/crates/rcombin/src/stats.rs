//! Monte Carlo verification harness: reproducible sample batches, empirical
//! distances, goodness-of-fit reports, the four (r,s)-Lah CLT regime checks
//! and the composition/Poisson/profile limit checks.
//!
//! Every batch draws replica `i` from stream `stream_base + i`, so results
//! are bit-for-bit reproducible from `(config, seed)` and independent of the
//! worker count. Aggregations are order-independent (ordered collects,
//! sequential reductions).

use rayon::prelude::*;
use statrs::function::gamma::{gamma_lr, gamma_ur};

use crate::distributions::{
    composition_marginal_b0, composition_marginal_bj, expected_profile, geometric_pmf_f64,
    lah_mean_f64, multihoppe_leaves_pmf, neg_binomial_pmf_f64,
};
use crate::error::Result;
use crate::float::std_normal_cdf;
use crate::pmf::FinitePmf;
use crate::rational::Rational;
use crate::rng::RngState;
use crate::samplers;

/// One versioned home for every Monte Carlo threshold and sample size; a
/// failing report names the `(sampler, params, seed)` triple for replay.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub version: &'static str,
    /// Draws per sampler-fidelity case.
    pub mc_draws: usize,
    /// TV threshold for sampler-vs-exact-pmf checks.
    pub mc_tv_threshold: f64,
    /// Pairwise TV threshold for the three Lah sampling routes.
    pub lah_route_tv_threshold: f64,
    /// Chi-square significance level (pass ⇔ statistic ≤ quantile).
    pub chi_square_significance: f64,
    /// Exact cells below this mass are pooled before the chi-square test.
    pub chi_square_min_cell: f64,
    /// Replicas per CLT regime check.
    pub clt_replicas: usize,
    /// KS threshold for the constant/intermediate/central regimes.
    pub ks_threshold: f64,
    /// KS threshold for the large-k border regime.
    pub ks_threshold_large_k: f64,
    pub clt_constant_n: usize,
    pub clt_intermediate_n: usize,
    pub clt_central_n: usize,
    pub clt_large_n: usize,
    /// n - k in the large-k regime.
    pub clt_large_gap: usize,
    /// Bound for the O(1) mean-shift refinement in the constant-k regime.
    pub mean_shift_bound: f64,
    /// Draws for the composition limit checks.
    pub composition_draws: usize,
    pub composition_n: usize,
    /// TV threshold against the NegBin/Geometric limits (proportional regime).
    pub composition_tv_threshold: f64,
    /// KS threshold against the Gamma/Exp limits (sublinear regime).
    pub sublinear_ks_threshold: f64,
    pub poisson_n: usize,
    pub poisson_replicas: usize,
    /// Bound on pairwise empirical correlations of the cycle counts.
    pub poisson_corr_bound: f64,
    pub profile_n: usize,
    pub profile_replicas: usize,
    /// Mean checks pass within this many standard errors.
    pub se_factor: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            version: "rcombin-verify-v1",
            mc_draws: 100_000,
            mc_tv_threshold: 0.01,
            lah_route_tv_threshold: 0.02,
            chi_square_significance: 1e-6,
            chi_square_min_cell: 1e-4,
            clt_replicas: 10_000,
            ks_threshold: 0.03,
            ks_threshold_large_k: 0.05,
            clt_constant_n: 2000,
            clt_intermediate_n: 5000,
            clt_central_n: 4000,
            clt_large_n: 10_000,
            clt_large_gap: 100,
            mean_shift_bound: 5.0,
            composition_draws: 50_000,
            composition_n: 5000,
            composition_tv_threshold: 0.02,
            sublinear_ks_threshold: 0.03,
            poisson_n: 2000,
            poisson_replicas: 10_000,
            poisson_corr_bound: 0.05,
            profile_n: 100,
            profile_replicas: 10_000,
            se_factor: 3.0,
        }
    }
}

/// Seeded, reproducible batch of i.i.d. draws of an integer statistic.
#[derive(Clone, Debug)]
pub struct SampleBatch {
    pub sampler: String,
    pub params: String,
    pub seed: u64,
    pub stream_base: u64,
    pub values: Vec<i64>,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().map(|&v| v as f64).sum::<f64>() / self.values.len() as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.values
            .iter()
            .map(|&v| (v as f64 - m).powi(2))
            .sum::<f64>()
            / (self.values.len() - 1) as f64
    }
}

/// Draws `count` replicas in parallel, replica `i` on stream
/// `stream_base + i`; the collected order is by replica index, so the batch
/// is identical for any worker count.
pub fn draw_batch<F>(
    sampler: &str,
    params: &str,
    seed: u64,
    stream_base: u64,
    count: usize,
    f: F,
) -> SampleBatch
where
    F: Fn(&mut RngState) -> i64 + Sync,
{
    let values: Vec<i64> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngState::new(seed, stream_base + i as u64);
            f(&mut rng)
        })
        .collect();
    SampleBatch {
        sampler: sampler.to_string(),
        params: params.to_string(),
        seed,
        stream_base,
        values,
    }
}

/// Empirical counts of a batch as `(value, frequency)`.
fn empirical(batch: &[i64]) -> Vec<(i64, f64)> {
    let mut counts: std::collections::BTreeMap<i64, u64> = Default::default();
    for &v in batch {
        *counts.entry(v).or_insert(0) += 1;
    }
    let n = batch.len() as f64;
    counts.into_iter().map(|(v, c)| (v, c as f64 / n)).collect()
}

/// Total variation distance `½ Σ |p̂ - p|` between a batch and a pmf.
pub fn tv_distance(batch: &SampleBatch, pmf: &FinitePmf) -> f64 {
    assert!(!batch.is_empty(), "empty batch");
    tv_distance_entries(&empirical(&batch.values), &pmf.entries_f64())
}

/// Total variation distance between two batches.
pub fn tv_distance_batches(a: &SampleBatch, b: &SampleBatch) -> f64 {
    tv_distance_entries(&empirical(&a.values), &empirical(&b.values))
}

fn tv_distance_entries(a: &[(i64, f64)], b: &[(i64, f64)]) -> f64 {
    let mut points: std::collections::BTreeSet<i64> = Default::default();
    points.extend(a.iter().map(|(v, _)| *v));
    points.extend(b.iter().map(|(v, _)| *v));
    let lookup = |entries: &[(i64, f64)], v: i64| -> f64 {
        entries
            .binary_search_by_key(&v, |(x, _)| *x)
            .map(|i| entries[i].1)
            .unwrap_or(0.0)
    };
    0.5 * points
        .iter()
        .map(|&v| (lookup(a, v) - lookup(b, v)).abs())
        .sum::<f64>()
}

/// Outcome of one goodness-of-fit or mean check; `pass ⇔ statistic ≤
/// threshold`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct GofReport {
    pub test: String,
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
    pub sample_size: usize,
    pub params: String,
    pub seed: u64,
}

impl GofReport {
    pub fn new(
        test: impl Into<String>,
        statistic: f64,
        threshold: f64,
        sample_size: usize,
        params: impl Into<String>,
        seed: u64,
    ) -> Self {
        GofReport {
            test: test.into(),
            statistic,
            threshold,
            pass: statistic <= threshold,
            sample_size,
            params: params.into(),
            seed,
        }
    }

    pub fn json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},\"{}\"",
            self.test, self.statistic, self.threshold, self.pass, self.sample_size, self.seed,
            self.params
        )
    }
}

pub const GOF_CSV_HEADER: &str = "test,statistic,threshold,pass,sample_size,seed,params";

/// Upper quantile of the chi-square distribution with `df` degrees of
/// freedom at tail probability `alpha`, by bisection on the regularized
/// upper incomplete gamma.
pub fn chi_square_quantile(df: f64, alpha: f64) -> f64 {
    let tail = |x: f64| gamma_ur(df / 2.0, x / 2.0);
    let mut hi = df + 10.0;
    while tail(hi) > alpha {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Pearson chi-square goodness-of-fit of a batch against an exact pmf.
/// Support cells with exact mass below `min_cell` are pooled left to right;
/// the threshold is the chi-square quantile at the configured significance.
pub fn chi_square_gof(
    batch: &SampleBatch,
    exact: &FinitePmf,
    min_cell: f64,
    significance: f64,
) -> GofReport {
    let entries = exact.entries_f64();
    // Pool adjacent cells until each pooled cell has mass ≥ min_cell.
    let mut cells: Vec<(Vec<i64>, f64)> = Vec::new();
    let mut cur_vals = Vec::new();
    let mut cur_mass = 0.0;
    for (v, p) in entries {
        cur_vals.push(v);
        cur_mass += p;
        if cur_mass >= min_cell {
            cells.push((std::mem::take(&mut cur_vals), cur_mass));
            cur_mass = 0.0;
        }
    }
    if !cur_vals.is_empty() {
        match cells.last_mut() {
            Some(last) => {
                last.0.extend(cur_vals);
                last.1 += cur_mass;
            }
            None => cells.push((cur_vals, cur_mass)),
        }
    }
    let n = batch.len() as f64;
    let mut observed = vec![0.0f64; cells.len()];
    'outer: for &v in &batch.values {
        for (i, (vals, _)) in cells.iter().enumerate() {
            if vals.binary_search(&v).is_ok() {
                observed[i] += 1.0;
                continue 'outer;
            }
        }
        // Off-support draw: count against the nearest cell to inflate the
        // statistic rather than silently dropping it.
        observed[0] += 1.0;
    }
    let statistic: f64 = cells
        .iter()
        .zip(&observed)
        .map(|((_, p), o)| {
            let e = n * p;
            (o - e) * (o - e) / e
        })
        .sum();
    let df = (cells.len() - 1).max(1) as f64;
    let threshold = chi_square_quantile(df, significance);
    GofReport::new(
        format!("chi2[{} vs {}]", batch.sampler, exact.family()),
        statistic,
        threshold,
        batch.len(),
        batch.params.clone(),
        batch.seed,
    )
}

/// Mid-distribution Kolmogorov–Smirnov statistic against a continuous cdf:
/// at each distinct sample value the empirical cdf is evaluated at the jump
/// midpoint. For integer-lattice data standardized to a coarse grid this is
/// the statistic that actually converges to 0 under the CLT; the plain
/// one-sided jump statistic would saturate at half the largest cell mass.
pub fn ks_mid_statistic(values: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0usize;
    while i < sorted.len() {
        let v = sorted[i];
        let lo = i;
        while i < sorted.len() && sorted[i] == v {
            i += 1;
        }
        let mid = (lo as f64 + i as f64) / 2.0 / n;
        d = d.max((mid - cdf(v)).abs());
    }
    d
}

pub fn ks_vs_normal(standardized: &[f64]) -> f64 {
    ks_mid_statistic(standardized, std_normal_cdf)
}

fn params_str(pairs: &[(&str, String)]) -> String {
    pairs
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Limit variance `σ²(α)` of the central-regime CLT:
/// `-(α/(1-α) + α(α+1)logα/(1-α)² + α²log²α/(1-α)³)`.
pub fn sigma2_central(alpha: f64) -> f64 {
    assert!(alpha > 0.0 && alpha < 1.0);
    let l = alpha.ln();
    let om = 1.0 - alpha;
    -(alpha / om + alpha * (alpha + 1.0) * l / (om * om)
        + alpha * alpha * l * l / (om * om * om))
}

fn lah_batch(
    n: usize,
    k: usize,
    r: &Rational,
    s: &Rational,
    replicas: usize,
    seed: u64,
    stream_base: u64,
) -> SampleBatch {
    let params = params_str(&[
        ("n", n.to_string()),
        ("k", k.to_string()),
        ("r", r.to_string()),
        ("s", s.to_string()),
    ]);
    let (r, s) = (r.clone(), s.clone());
    draw_batch("lah_composition", &params, seed, stream_base, replicas, move |rng| {
        samplers::lah_sample_composition(n, k, &r, &s, rng).expect("admissible quadruple")
    })
}

/// Constant-k regime: KS of the standardized Lah statistic against N(0,1),
/// scale `√((k+s) log n)`. The theorem's centering constant `(k+s) log n` is
/// asymptotic, so the standardization centers at the exact mean and the
/// `O(1)` shift of the remark is checked separately.
pub fn clt_constant_k(
    cfg: &VerifyConfig,
    k: usize,
    r: &Rational,
    s: &Rational,
    seed: u64,
    stream_base: u64,
) -> Result<Vec<GofReport>> {
    let n = cfg.clt_constant_n;
    crate::distributions::check_lah_params(n, k, r, s)?;
    if k == 0 && s.is_zero() {
        return Err(crate::error::Error::invalid("constant-k CLT needs max{k,s} > 0"));
    }
    let batch = lah_batch(n, k, r, s, cfg.clt_replicas, seed, stream_base);
    let mean = lah_mean_f64(n, k, r.to_f64(), s.to_f64());
    let asymptotic = (k as f64 + s.to_f64()) * (n as f64).ln();
    let scale = asymptotic.sqrt();
    let standardized: Vec<f64> = batch.values.iter().map(|&x| (x as f64 - mean) / scale).collect();
    let ks = ks_vs_normal(&standardized);
    Ok(vec![
        GofReport::new(
            "clt_constant_k:ks_normal",
            ks,
            cfg.ks_threshold,
            batch.len(),
            batch.params.clone(),
            seed,
        ),
        GofReport::new(
            "clt_constant_k:mean_shift_O1",
            (mean - asymptotic).abs(),
            cfg.mean_shift_bound,
            batch.len(),
            batch.params,
            seed,
        ),
    ])
}

/// Intermediate regime `k = ⌊n^γ⌋`: standardize by `√(k log(n/k))` around
/// the exact mean; also a variance sanity ratio in [0.8, 1.2].
pub fn clt_intermediate(
    cfg: &VerifyConfig,
    gamma: f64,
    r: &Rational,
    s: &Rational,
    seed: u64,
    stream_base: u64,
) -> Result<Vec<GofReport>> {
    if !(0.0 < gamma && gamma < 1.0) {
        return Err(crate::error::Error::invalid("need γ ∈ (0,1)"));
    }
    let n = cfg.clt_intermediate_n;
    let k = (n as f64).powf(gamma).floor() as usize;
    crate::distributions::check_lah_params(n, k, r, s)?;
    let batch = lah_batch(n, k, r, s, cfg.clt_replicas, seed, stream_base);
    let mean = lah_mean_f64(n, k, r.to_f64(), s.to_f64());
    let var_scale = k as f64 * (n as f64 / k as f64).ln();
    let scale = var_scale.sqrt();
    let standardized: Vec<f64> = batch.values.iter().map(|&x| (x as f64 - mean) / scale).collect();
    let ks = ks_vs_normal(&standardized);
    let var_ratio = batch.variance() / var_scale;
    Ok(vec![
        GofReport::new(
            "clt_intermediate:ks_normal",
            ks,
            cfg.ks_threshold,
            batch.len(),
            batch.params.clone(),
            seed,
        ),
        GofReport::new(
            "clt_intermediate:variance_ratio",
            (var_ratio - 1.0).abs(),
            0.2,
            batch.len(),
            batch.params,
            seed,
        ),
    ])
}

/// Central regime `k = ⌊αn⌋`: per the theorem, standardize by `√n` around
/// the r=s=0 mean `L(n,k,0,0)` and compare against N(0, σ²(α)).
pub fn clt_central(
    cfg: &VerifyConfig,
    alpha: f64,
    r: &Rational,
    s: &Rational,
    seed: u64,
    stream_base: u64,
) -> Result<Vec<GofReport>> {
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(crate::error::Error::invalid("need α ∈ (0,1)"));
    }
    let n = cfg.clt_central_n;
    let k = (alpha * n as f64).floor() as usize;
    crate::distributions::check_lah_params(n, k, r, s)?;
    let sigma2 = sigma2_central(alpha);
    assert!(sigma2 > 0.0, "σ²(α) must be positive");
    let batch = lah_batch(n, k, r, s, cfg.clt_replicas, seed, stream_base);
    let center = lah_mean_f64(n, k, 0.0, 0.0);
    let scale = (n as f64).sqrt() * sigma2.sqrt();
    let standardized: Vec<f64> = batch.values.iter().map(|&x| (x as f64 - center) / scale).collect();
    let ks = ks_vs_normal(&standardized);
    Ok(vec![GofReport::new(
        "clt_central:ks_normal",
        ks,
        cfg.ks_threshold,
        batch.len(),
        batch.params,
        seed,
    )])
}

/// Large-k border regime `k = n - gap`: standardize by `√(n-k)` around the
/// exact mean against N(0, 1/4); also the block-size concentration
/// `ρ₂/(n-k) ≈ 1` and the variance ratio in [0.2, 0.3].
pub fn clt_large_k(
    cfg: &VerifyConfig,
    r: &Rational,
    s: &Rational,
    seed: u64,
    stream_base: u64,
) -> Result<Vec<GofReport>> {
    let n = cfg.clt_large_n;
    let gap = cfg.clt_large_gap;
    let k = n - gap;
    crate::distributions::check_lah_params(n, k, r, s)?;
    let batch = lah_batch(n, k, r, s, cfg.clt_replicas, seed, stream_base);
    let mean = lah_mean_f64(n, k, r.to_f64(), s.to_f64());
    let scale = (gap as f64).sqrt() * 0.5;
    let standardized: Vec<f64> = batch.values.iter().map(|&x| (x as f64 - mean) / scale).collect();
    let ks = ks_vs_normal(&standardized);
    let var_ratio = batch.variance() / gap as f64;

    // ρ₂/(n-k) → 1 in probability: check the empirical mean over 10x fewer
    // replicas on a disjoint stream block.
    let rho_replicas = (cfg.clt_replicas / 10).max(100);
    let rs = r + s;
    let params = batch.params.clone();
    let rho_batch = draw_batch(
        "rho2",
        &params,
        seed,
        stream_base + cfg.clt_replicas as u64,
        rho_replicas,
        move |rng| {
            let comp = samplers::r_composition_dirichlet(n, k, &rs, rng).expect("valid");
            comp.parts.iter().filter(|&&b| b == 2).count() as i64
        },
    );
    let rho_ratio = rho_batch.mean() / gap as f64;
    Ok(vec![
        GofReport::new(
            "clt_large_k:ks_normal_quarter_var",
            ks,
            cfg.ks_threshold_large_k,
            batch.len(),
            batch.params.clone(),
            seed,
        ),
        GofReport::new(
            "clt_large_k:variance_ratio",
            (var_ratio - 0.25).abs(),
            0.05,
            batch.len(),
            batch.params.clone(),
            seed,
        ),
        GofReport::new(
            "clt_large_k:rho2_concentration",
            (rho_ratio - 1.0).abs(),
            0.1,
            rho_batch.len(),
            batch.params,
            seed,
        ),
    ])
}

/// Asymptotic regime selector for [`composition_limit_checks`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompositionRegime {
    /// k fixed: Dirichlet limit, `E[b₀/n] → r/(r+k)`.
    FixedK,
    /// k/n → α: `b₀ ⇒ NegBin(r, α)`, `b₁ ⇒ Geo(α)`.
    Proportional,
    /// k/n → 0: `k·b₀/n ⇒ Gamma(r,1)`, `k·b₁/n ⇒ Exp(1)`.
    Sublinear,
}

/// Limit checks for the random r-composition marginals in the three regimes.
pub fn composition_limit_checks(
    cfg: &VerifyConfig,
    regime: CompositionRegime,
    r: &Rational,
    seed: u64,
    stream_base: u64,
) -> Result<Vec<GofReport>> {
    let n = cfg.composition_n;
    match regime {
        CompositionRegime::FixedK => {
            let k = 3usize;
            let draws = cfg.clt_replicas;
            let params = params_str(&[
                ("n", n.to_string()),
                ("k", k.to_string()),
                ("r", r.to_string()),
                ("regime", "fixed_k".into()),
            ]);
            let rr = r.clone();
            let batch = draw_batch("composition_b0", &params, seed, stream_base, draws, move |rng| {
                samplers::r_composition_dirichlet(n, k, &rr, rng).expect("valid").b0 as i64
            });
            // E[b0/n] → r/(r+k); mean check within 3 SE.
            let values: Vec<f64> = batch.values.iter().map(|&b| b as f64 / n as f64).collect();
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
                / (values.len() - 1) as f64;
            let se = (var / values.len() as f64).sqrt();
            let target = r.to_f64() / (r.to_f64() + k as f64);
            Ok(vec![GofReport::new(
                "composition_fixed_k:dirichlet_mean",
                (mean - target).abs() / se,
                cfg.se_factor,
                batch.len(),
                params,
                seed,
            )])
        }
        CompositionRegime::Proportional => {
            let k = n / 2;
            let draws = cfg.composition_draws;
            let params = params_str(&[
                ("n", n.to_string()),
                ("k", k.to_string()),
                ("r", r.to_string()),
                ("regime", "proportional".into()),
            ]);
            let rr = r.clone();
            let pairs: Vec<(i64, i64)> = (0..draws)
                .into_par_iter()
                .map(|i| {
                    let mut rng = RngState::new(seed, stream_base + i as u64);
                    let c = samplers::r_composition_dirichlet(n, k, &rr, &mut rng).expect("valid");
                    (c.b0 as i64, c.parts[0] as i64)
                })
                .collect();
            let b0_batch = SampleBatch {
                sampler: "composition_b0".into(),
                params: params.clone(),
                seed,
                stream_base,
                values: pairs.iter().map(|p| p.0).collect(),
            };
            let b1_batch = SampleBatch {
                sampler: "composition_b1".into(),
                params: params.clone(),
                seed,
                stream_base,
                values: pairs.iter().map(|p| p.1).collect(),
            };
            let alpha = k as f64 / n as f64;
            let nb = neg_binomial_pmf_f64(r.to_f64(), alpha)?;
            let geo = geometric_pmf_f64(alpha)?;
            Ok(vec![
                GofReport::new(
                    "composition_proportional:tv_b0_negbin",
                    tv_distance(&b0_batch, &nb),
                    cfg.composition_tv_threshold,
                    draws,
                    params.clone(),
                    seed,
                ),
                GofReport::new(
                    "composition_proportional:tv_b1_geometric",
                    tv_distance(&b1_batch, &geo),
                    cfg.composition_tv_threshold,
                    draws,
                    params,
                    seed,
                ),
            ])
        }
        CompositionRegime::Sublinear => {
            let k = (n as f64).sqrt().floor() as usize;
            let draws = cfg.composition_draws / 2;
            let params = params_str(&[
                ("n", n.to_string()),
                ("k", k.to_string()),
                ("r", r.to_string()),
                ("regime", "sublinear".into()),
            ]);
            let rr = r.clone();
            let pairs: Vec<(i64, i64)> = (0..draws)
                .into_par_iter()
                .map(|i| {
                    let mut rng = RngState::new(seed, stream_base + i as u64);
                    let c = samplers::r_composition_dirichlet(n, k, &rr, &mut rng).expect("valid");
                    (c.b0 as i64, c.parts[0] as i64)
                })
                .collect();
            let factor = k as f64 / n as f64;
            let b0_scaled: Vec<f64> = pairs.iter().map(|p| p.0 as f64 * factor).collect();
            let b1_scaled: Vec<f64> = pairs.iter().map(|p| p.1 as f64 * factor).collect();
            let rf = r.to_f64();
            let ks_b0 = ks_mid_statistic(&b0_scaled, |x| {
                if x <= 0.0 {
                    0.0
                } else {
                    gamma_lr(rf, x)
                }
            });
            let ks_b1 = ks_mid_statistic(&b1_scaled, |x| if x <= 0.0 { 0.0 } else { 1.0 - (-x).exp() });
            Ok(vec![
                GofReport::new(
                    "composition_sublinear:ks_b0_gamma",
                    ks_b0,
                    cfg.sublinear_ks_threshold,
                    draws,
                    params.clone(),
                    seed,
                ),
                GofReport::new(
                    "composition_sublinear:ks_b1_exponential",
                    ks_b1,
                    cfg.sublinear_ks_threshold,
                    draws,
                    params,
                    seed,
                ),
            ])
        }
    }
}

/// Poisson cycle-count limit: for the multinomial Ewens permutation at
/// `n = cfg.poisson_n`, the counts `C_{n;j;k}` of color-j k-cycles (k ≤ 3)
/// have means within 3 SE of `θ_j/k` and pairwise empirical correlations
/// below the configured bound.
pub fn poisson_cycle_count_check(
    cfg: &VerifyConfig,
    thetas: &[Rational],
    seed: u64,
    stream_base: u64,
) -> Result<Vec<GofReport>> {
    let n = cfg.poisson_n;
    let max_len = 3usize;
    let d = thetas.len();
    let replicas = cfg.poisson_replicas;
    let params = params_str(&[("n", n.to_string()), ("replicas", replicas.to_string())]);
    let thetas_owned = thetas.to_vec();
    let rows: Vec<Vec<u32>> = (0..replicas)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngState::new(seed, stream_base + i as u64);
            let counts =
                samplers::feller_cycle_type_counts(n, &thetas_owned, max_len, &mut rng).expect("valid");
            counts.into_iter().flatten().collect()
        })
        .collect();
    let dims = d * max_len;
    let mut mean = vec![0.0f64; dims];
    for row in &rows {
        for (i, &c) in row.iter().enumerate() {
            mean[i] += c as f64;
        }
    }
    for m in &mut mean {
        *m /= replicas as f64;
    }
    let mut cov = vec![vec![0.0f64; dims]; dims];
    for row in &rows {
        for i in 0..dims {
            for j in 0..dims {
                cov[i][j] += (row[i] as f64 - mean[i]) * (row[j] as f64 - mean[j]);
            }
        }
    }
    for ci in &mut cov {
        for c in ci.iter_mut() {
            *c /= (replicas - 1) as f64;
        }
    }
    let mut reports = Vec::new();
    let mut worst_mean_z: f64 = 0.0;
    for j in 0..d {
        for len in 1..=max_len {
            let idx = j * max_len + len - 1;
            let target = thetas[j].to_f64() / len as f64;
            let se = (cov[idx][idx] / replicas as f64).sqrt();
            worst_mean_z = worst_mean_z.max((mean[idx] - target).abs() / se);
        }
    }
    reports.push(GofReport::new(
        "poisson_cycle_counts:means_3se",
        worst_mean_z,
        cfg.se_factor,
        replicas,
        params.clone(),
        seed,
    ));
    let mut worst_corr: f64 = 0.0;
    for i in 0..dims {
        for j in (i + 1)..dims {
            let corr = cov[i][j] / (cov[i][i] * cov[j][j]).sqrt();
            worst_corr = worst_corr.max(corr.abs());
        }
    }
    reports.push(GofReport::new(
        "poisson_cycle_counts:pairwise_correlation",
        worst_corr,
        cfg.poisson_corr_bound,
        replicas,
        params,
        seed,
    ));
    Ok(reports)
}

/// Stam randomization: the empty-urn count of the Gibbs sampler has mean θ
/// (within 3 SE).
pub fn stam_empty_urn_check(
    cfg: &VerifyConfig,
    n: usize,
    theta: &Rational,
    r: &Rational,
    seed: u64,
    stream_base: u64,
) -> Result<Vec<GofReport>> {
    let sampler = samplers::GibbsSampler::new(n, theta, r)?;
    let replicas = cfg.clt_replicas;
    let params = params_str(&[
        ("n", n.to_string()),
        ("theta", theta.to_string()),
        ("r", r.to_string()),
    ]);
    let batch = draw_batch("gibbs_empty_urns", &params, seed, stream_base, replicas, move |rng| {
        sampler.sample(rng).1 as i64
    });
    let se = (batch.variance() / replicas as f64).sqrt();
    let z = (batch.mean() - theta.to_f64()).abs() / se;
    Ok(vec![GofReport::new(
        "stam:empty_urn_mean_poisson",
        z,
        cfg.se_factor,
        replicas,
        params,
        seed,
    )])
}

/// Expected-profile and leaf-law checks for Hoppe forests: empirical level
/// counts at depths 1..5 against the exact expected profile (within 3 SE),
/// and the d=2 leaf pmf within TV 0.02 at n = 15.
pub fn profile_and_leaves_checks(
    cfg: &VerifyConfig,
    theta: &Rational,
    seed: u64,
    stream_base: u64,
) -> Result<Vec<GofReport>> {
    let n = cfg.profile_n;
    let replicas = cfg.profile_replicas;
    let depths = 5usize;
    let params = params_str(&[("n", n.to_string()), ("theta", theta.to_string())]);
    let thetas = vec![theta.clone()];
    let thetas_for_draw = thetas.clone();
    let rows: Vec<Vec<u32>> = (0..replicas)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngState::new(seed, stream_base + i as u64);
            let f = samplers::hoppe_forest(n, &thetas_for_draw, &mut rng).expect("valid");
            f.profile(1)[..depths].to_vec()
        })
        .collect();
    let mut reports = Vec::new();
    let mut worst_z: f64 = 0.0;
    for k in 1..=depths {
        let vals: Vec<f64> = rows.iter().map(|r| r[k - 1] as f64).collect();
        let mean = vals.iter().sum::<f64>() / replicas as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (replicas - 1) as f64;
        let se = (var / replicas as f64).sqrt();
        let target = expected_profile(n, &thetas, 1, k)?.to_f64();
        worst_z = worst_z.max((mean - target).abs() / se);
    }
    reports.push(GofReport::new(
        "hoppe_profile:depth_means_3se",
        worst_z,
        cfg.se_factor,
        replicas,
        params,
        seed,
    ));

    // d = 2 leaf law at n = 15, TV ≤ 0.02.
    let n2 = 15usize;
    let thetas2 = vec![Rational::one(), Rational::one()];
    let params2 = params_str(&[("n", n2.to_string()), ("thetas", "[1,1]".into())]);
    let thetas2_for_draw = thetas2.clone();
    let batch = draw_batch(
        "multihoppe_leaves",
        &params2,
        seed,
        stream_base + replicas as u64,
        replicas,
        move |rng| {
            let f = samplers::hoppe_forest(n2, &thetas2_for_draw, rng).expect("valid");
            f.leaf_counts()[0] as i64
        },
    );
    let pmf = multihoppe_leaves_pmf(n2, &thetas2, 1)?;
    reports.push(GofReport::new(
        "multihoppe_leaves:tv",
        tv_distance(&batch, &pmf),
        0.02,
        replicas,
        params2,
        seed,
    ));
    Ok(reports)
}

/// Exact-vs-empirical mean reports used by the composition expectation
/// checks (marginal means match `(n+r)/(k+r)` and `r(n-k)/(k+r)` exactly in
/// the pmfs; this cross-checks the samplers).
pub fn composition_mean_check(
    cfg: &VerifyConfig,
    n: usize,
    k: usize,
    r: &Rational,
    seed: u64,
    stream_base: u64,
) -> Result<Vec<GofReport>> {
    let params = params_str(&[
        ("n", n.to_string()),
        ("k", k.to_string()),
        ("r", r.to_string()),
    ]);
    let draws = cfg.clt_replicas;
    let rr = r.clone();
    let batch = draw_batch("composition_b0_mean", &params, seed, stream_base, draws, move |rng| {
        samplers::r_composition_dirichlet(n, k, &rr, rng).expect("valid").b0 as i64
    });
    let exact = composition_marginal_b0(n, k, r)?.mean().to_f64();
    let se = (batch.variance() / draws as f64).sqrt().max(1e-12);
    let z = (batch.mean() - exact).abs() / se;
    let _ = composition_marginal_bj(n, k, r)?;
    Ok(vec![GofReport::new(
        "composition:b0_mean_3se",
        z,
        cfg.se_factor,
        draws,
        params,
        seed,
    )])
}
