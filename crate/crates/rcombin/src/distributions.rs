//! Exact finite pmf constructors for every distribution family: Stirling
//! distributions of both kinds and their r-versions, the Stirling–Sibuya urn
//! law, multinomial Stirling and Dirichlet-multinomial laws, r-composition
//! joint/marginal laws, the (r,s)-Lah distribution (three independent
//! routes), Hoppe-forest leaf laws and the comparison targets used by the
//! Monte Carlo harness.

use crate::error::{Error, Result};
use crate::float::{harmonic_rs_table, harmonic_table, ln_gen_binomial};
use crate::numbers::{
    self, binomial, eulerian, factorial, gen_binomial, gen_eulerian, harmonic,
    multinomial_stirling1, r_lah, r_stirling1_row, r_stirling2_row, r_touchard, rising_factorial,
};
use crate::pmf::{param, FinitePmf, VectorPmf};
use crate::poly::Polynomial;
use crate::rational::Rational;

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::invalid(msg.to_string()))
    }
}

fn nonneg(x: &Rational, name: &str) -> Result<()> {
    require(!x.is_negative(), &format!("{name} must be ≥ 0"))
}

/// Stirling distribution of the first kind: `pmf(k) = ⟦n k⟧ θ^k / θ^{n↑}`.
pub fn stir1_pmf(n: usize, theta: &Rational) -> Result<FinitePmf> {
    require(n >= 1, "n must be ≥ 1")?;
    require(theta.is_positive(), "θ must be > 0")?;
    r_stir1_pmf(n, theta, &Rational::zero())
}

/// r-Stirling distribution of the first kind:
/// `pmf(k) = ⟦n k⟧_r τ^k / (τ+r)^{n↑}`.
pub fn r_stir1_pmf(n: usize, tau: &Rational, r: &Rational) -> Result<FinitePmf> {
    require(n >= 1, "n must be ≥ 1")?;
    nonneg(tau, "τ")?;
    nonneg(r, "r")?;
    require((tau + r).is_positive(), "τ+r must be > 0")?;
    let norm = rising_factorial(&(tau + r), n);
    let row = r_stirling1_row(n, r)?;
    let mut tau_pow = Rational::one();
    let mut entries = Vec::with_capacity(n + 1);
    for (k, c) in row.into_iter().enumerate() {
        entries.push((k as i64, &(&c * &tau_pow) / &norm));
        tau_pow *= tau;
    }
    FinitePmf::from_exact(
        "r_stir1",
        vec![param("n", n), param("tau", tau), param("r", r)],
        entries,
    )
}

/// Binomial pmf with exact rational success probability.
pub fn binomial_pmf(n: usize, p: &Rational) -> Result<FinitePmf> {
    nonneg(p, "p")?;
    require(!(p - &Rational::one()).is_positive(), "p must be ≤ 1")?;
    let q = Rational::one() - p;
    let entries = (0..=n).map(|k| {
        (
            k as i64,
            Rational::from_bigint(binomial(n, k)) * p.pow(k as i32) * q.pow((n - k) as i32),
        )
    });
    FinitePmf::from_exact("binomial", vec![param("n", n), param("p", p)], entries)
}

/// Beta-binomial `Bin(n, Beta(a, b))`, exact:
/// `pmf(m) = C(n,m) a^{m↑} b^{(n-m)↑} / (a+b)^{n↑}`. The degenerate beta
/// endpoints (`a = 0` or `b = 0`) give point masses at 0 and n.
pub fn beta_binomial_pmf(n: usize, a: &Rational, b: &Rational) -> Result<FinitePmf> {
    nonneg(a, "a")?;
    nonneg(b, "b")?;
    require((a + b).is_positive(), "a+b must be > 0")?;
    let norm = rising_factorial(&(a + b), n);
    let entries = (0..=n).map(|m| {
        let w = Rational::from_bigint(binomial(n, m))
            * rising_factorial(a, m)
            * rising_factorial(b, n - m);
        (m as i64, w / &norm)
    });
    FinitePmf::from_exact(
        "beta_binomial",
        vec![param("n", n), param("a", a), param("b", b)],
        entries,
    )
}

/// `Bin(Stir1(n, τ+r), τ/(τ+r))` — the binomial-mixture route to the
/// r-Stirling distribution of the first kind.
pub fn r_stir1_pmf_via_binomial_mixture(n: usize, tau: &Rational, r: &Rational) -> Result<FinitePmf> {
    require(n >= 1, "n must be ≥ 1")?;
    nonneg(tau, "τ")?;
    nonneg(r, "r")?;
    require((tau + r).is_positive(), "τ+r must be > 0")?;
    let outer = stir1_pmf(n, &(tau + r))?;
    let p = tau / &(tau + r);
    let mut acc = vec![Rational::zero(); n + 1];
    for (&j, pj) in outer.support().iter().zip(outer.probs_exact().unwrap()) {
        let inner = binomial_pmf(j as usize, &p)?;
        for (&k, pk) in inner.support().iter().zip(inner.probs_exact().unwrap()) {
            acc[k as usize] += &(pj * pk);
        }
    }
    FinitePmf::from_exact(
        "r_stir1_via_bin_mixture",
        vec![param("n", n), param("tau", tau), param("r", r)],
        acc.into_iter().enumerate().map(|(k, p)| (k as i64, p)),
    )
}

/// `Stir1(Bin(n, Beta(τ, r)), τ)` — the beta-binomial-mixture route.
pub fn r_stir1_pmf_via_beta_binomial(n: usize, tau: &Rational, r: &Rational) -> Result<FinitePmf> {
    require(n >= 1, "n must be ≥ 1")?;
    require(tau.is_positive(), "τ must be > 0 for this route")?;
    nonneg(r, "r")?;
    let sizes = beta_binomial_pmf(n, tau, r)?;
    let mut acc = vec![Rational::zero(); n + 1];
    for (&m, pm) in sizes.support().iter().zip(sizes.probs_exact().unwrap()) {
        if m == 0 {
            acc[0] += pm;
            continue;
        }
        let inner = stir1_pmf(m as usize, tau)?;
        for (&k, pk) in inner.support().iter().zip(inner.probs_exact().unwrap()) {
            acc[k as usize] += &(pm * pk);
        }
    }
    FinitePmf::from_exact(
        "r_stir1_via_beta_binomial",
        vec![param("n", n), param("tau", tau), param("r", r)],
        acc.into_iter().enumerate().map(|(k, p)| (k as i64, p)),
    )
}

/// Stirling–Sibuya distribution (`N` equiprobable urns):
/// `pmf(k) = {n k} N^{k↓} / N^n`.
pub fn stir_sibuya_pmf(n: usize, cap_n: usize) -> Result<FinitePmf> {
    r_stir_sibuya_pmf(n, cap_n, &Rational::zero())
}

/// r-Stirling–Sibuya distribution: `pmf(k) = {n k}_r N^{k↓} / (N+r)^n` on
/// `{0..min(n,N)}`. Only integer `N ≥ 1` (the urn model) is supported.
pub fn r_stir_sibuya_pmf(n: usize, cap_n: usize, r: &Rational) -> Result<FinitePmf> {
    require(n >= 1, "n must be ≥ 1")?;
    require(cap_n >= 1, "N must be ≥ 1")?;
    nonneg(r, "r")?;
    let cap = Rational::from_int(cap_n as i64);
    let norm = (&cap + r).pow(n as i32);
    let row = r_stirling2_row(n, r)?;
    let entries = row.into_iter().enumerate().take(cap_n + 1).map(|(k, c)| {
        (
            k as i64,
            c * numbers::falling_factorial(&cap, k) / &norm,
        )
    });
    FinitePmf::from_exact(
        "r_stir_sibuya",
        vec![param("n", n), param("N", cap_n), param("r", r)],
        entries,
    )
}

/// Stirling distribution of the second kind: `pmf(k) = {n k} θ^k / T_n(θ)`.
pub fn stir2_pmf(n: usize, theta: &Rational) -> Result<FinitePmf> {
    r_stir2_pmf(n, theta, &Rational::zero())
}

/// r-Stirling distribution of the second kind:
/// `pmf(k) = {n k}_r θ^k / T_{n,r}(θ)`.
pub fn r_stir2_pmf(n: usize, theta: &Rational, r: &Rational) -> Result<FinitePmf> {
    require(n >= 1, "n must be ≥ 1")?;
    require(theta.is_positive(), "θ must be > 0")?;
    nonneg(r, "r")?;
    let norm = r_touchard(n, r, theta)?;
    let row = r_stirling2_row(n, r)?;
    let mut theta_pow = Rational::one();
    let mut entries = Vec::with_capacity(n + 1);
    for (k, c) in row.into_iter().enumerate() {
        entries.push((k as i64, &(&c * &theta_pow) / &norm));
        theta_pow *= theta;
    }
    FinitePmf::from_exact(
        "r_stir2",
        vec![param("n", n), param("theta", theta), param("r", r)],
        entries,
    )
}

/// All `(k_1..k_d)` with nonnegative parts and sum ≤ `n`.
pub fn tuples_sum_at_most(d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..d {
        let mut next = Vec::new();
        for t in &out {
            let used: usize = t.iter().sum();
            for k in 0..=(n - used) {
                let mut t2 = t.clone();
                t2.push(k);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// All weak compositions of `n` into `d` nonnegative parts.
pub fn weak_compositions(n: usize, d: usize) -> Vec<Vec<usize>> {
    tuples_sum_at_most(d - 1, n)
        .into_iter()
        .map(|mut t| {
            let used: usize = t.iter().sum();
            t.push(n - used);
            t
        })
        .collect()
}

/// All compositions of `n` into `k` positive parts.
pub fn positive_compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    if n < k {
        return vec![];
    }
    weak_compositions(n - k, k)
        .into_iter()
        .map(|t| t.into_iter().map(|x| x + 1).collect())
        .collect()
}

/// Multinomial Stirling distribution of the first kind on `ℕ₀^d`:
/// `pmf(k_1..k_d) = ⟦n; k⟧ θ^{Σk} Π p_j^{k_j} / θ^{n↑}`.
pub fn mult_stir1_pmf(n: usize, theta: &Rational, p: &[Rational]) -> Result<VectorPmf> {
    require(n >= 1, "n must be ≥ 1")?;
    require(theta.is_positive(), "θ must be > 0")?;
    require(!p.is_empty(), "need at least one color")?;
    for pj in p {
        nonneg(pj, "p_j")?;
    }
    let total: Rational = p.iter().sum();
    require(total.is_one(), "probability vector must sum to 1")?;
    let norm = rising_factorial(theta, n);
    let mut entries = Vec::new();
    for ks in tuples_sum_at_most(p.len(), n) {
        let ks_i: Vec<i64> = ks.iter().map(|&k| k as i64).collect();
        let count = multinomial_stirling1(n, &ks_i)?;
        if count.is_zero() {
            continue;
        }
        let total_k: usize = ks.iter().sum();
        let mut w = count * theta.pow(total_k as i32);
        for (pj, &kj) in p.iter().zip(&ks) {
            w *= &pj.pow(kj as i32);
        }
        entries.push((ks_i, w / &norm));
    }
    VectorPmf::from_exact(
        "mult_stir1",
        vec![
            param("n", n),
            param("theta", theta),
            param("p", format_vec(p)),
        ],
        entries,
    )
}

/// Mixed-multinomial route: `Mult(Stir1(n,θ); p_1..p_d)`.
pub fn mult_stir1_pmf_via_mixture(n: usize, theta: &Rational, p: &[Rational]) -> Result<VectorPmf> {
    let outer = stir1_pmf(n, theta)?;
    let d = p.len();
    let mut entries: std::collections::BTreeMap<Vec<i64>, Rational> = Default::default();
    for (&c, pc) in outer.support().iter().zip(outer.probs_exact().unwrap()) {
        // Multinomial(c; p) over color counts.
        for ks in weak_compositions(c as usize, d) {
            let mut w = Rational::from_bigint(numbers::multinomial_coefficient(&ks));
            for (pj, &kj) in p.iter().zip(&ks) {
                w *= &pj.pow(kj as i32);
            }
            if w.is_zero() {
                continue;
            }
            let key: Vec<i64> = ks.iter().map(|&k| k as i64).collect();
            *entries.entry(key).or_insert_with(Rational::zero) += &(pc * &w);
        }
    }
    VectorPmf::from_exact(
        "mult_stir1_via_mixture",
        vec![param("n", n), param("theta", theta), param("p", format_vec(p))],
        entries,
    )
}

fn format_vec(xs: &[Rational]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// Dirichlet-multinomial distribution on weak compositions of `n`:
/// `pmf(k_1..k_d) = C(n; k) Π α_i^{k_i↑} / (Σα)^{n↑}`, with the convention
/// that a zero weight pins its coordinate to 0.
pub fn mdir_pmf(n: usize, alphas: &[Rational]) -> Result<VectorPmf> {
    require(!alphas.is_empty(), "need at least one weight")?;
    for a in alphas {
        nonneg(a, "α_i")?;
    }
    let total: Rational = alphas.iter().sum();
    require(total.is_positive(), "Σα must be > 0")?;
    let norm = rising_factorial(&total, n);
    let mut entries = Vec::new();
    for ks in weak_compositions(n, alphas.len()) {
        let mut w = Rational::from_bigint(numbers::multinomial_coefficient(&ks));
        for (a, &k) in alphas.iter().zip(&ks) {
            w *= &rising_factorial(a, k);
        }
        if w.is_zero() {
            continue;
        }
        entries.push((ks.iter().map(|&k| k as i64).collect(), w / &norm));
    }
    VectorPmf::from_exact(
        "mdir",
        vec![param("n", n), param("alphas", format_vec(alphas))],
        entries,
    )
}

/// Joint law of the random r-composition `(b₀, b₁..b_k)` of `n`:
/// `pmf = C(b₀+r-1, b₀) / C(n+r-1, k+r-1)` via generalized binomials.
pub fn composition_joint_pmf(n: usize, k: usize, r: &Rational) -> Result<VectorPmf> {
    require(k >= 1 && k <= n, "need 1 ≤ k ≤ n")?;
    nonneg(r, "r")?;
    let denom = gen_binomial(&(Rational::from_int(n as i64) + r - Rational::one()), n - k);
    let mut entries = Vec::new();
    for b0 in 0..=(n - k) {
        let w = gen_binomial(&(Rational::from_int(b0 as i64) + r - Rational::one()), b0) / &denom;
        if w.is_zero() {
            continue;
        }
        for parts in positive_compositions(n - b0, k) {
            let mut key = vec![b0 as i64];
            key.extend(parts.iter().map(|&p| p as i64));
            entries.push((key, w.clone()));
        }
    }
    VectorPmf::from_exact(
        "composition_joint",
        vec![param("n", n), param("k", k), param("r", r)],
        entries,
    )
}

/// Marginal law of `b₀`:
/// `pmf(b₀) = C(n-b₀-1, k-1) C(b₀+r-1, b₀) / C(n+r-1, k+r-1)`.
pub fn composition_marginal_b0(n: usize, k: usize, r: &Rational) -> Result<FinitePmf> {
    require(k >= 1 && k <= n, "need 1 ≤ k ≤ n")?;
    nonneg(r, "r")?;
    let denom = gen_binomial(&(Rational::from_int(n as i64) + r - Rational::one()), n - k);
    let entries = (0..=(n - k)).map(|b0| {
        let w = Rational::from_bigint(binomial(n - b0 - 1, k - 1))
            * gen_binomial(&(Rational::from_int(b0 as i64) + r - Rational::one()), b0);
        (b0 as i64, w / &denom)
    });
    FinitePmf::from_exact(
        "composition_b0",
        vec![param("n", n), param("k", k), param("r", r)],
        entries,
    )
}

/// Marginal law of a white part `b_j`:
/// `pmf(b) = C(n-b+r-1, k+r-2) / C(n+r-1, k+r-1)` for `b ∈ {1..n-k+1}`.
pub fn composition_marginal_bj(n: usize, k: usize, r: &Rational) -> Result<FinitePmf> {
    require(k >= 1 && k <= n, "need 1 ≤ k ≤ n")?;
    nonneg(r, "r")?;
    let denom = gen_binomial(&(Rational::from_int(n as i64) + r - Rational::one()), n - k);
    let entries = (1..=(n - k + 1)).map(|b| {
        let upper = Rational::from_int((n - b) as i64) + r - Rational::one();
        (b as i64, gen_binomial(&upper, n + 1 - b - k) / &denom)
    });
    FinitePmf::from_exact(
        "composition_bj",
        vec![param("n", n), param("k", k), param("r", r)],
        entries,
    )
}

/// Bivariate law of two white parts `(b_i, b_j)`, `i ≠ j`:
/// `pmf = C(n+r-b_i-b_j-1, k+r-3) / C(n+r-1, k+r-1)`, requires `k ≥ 2`.
pub fn composition_bivariate(n: usize, k: usize, r: &Rational) -> Result<VectorPmf> {
    require(k >= 2 && k <= n, "need 2 ≤ k ≤ n")?;
    nonneg(r, "r")?;
    let denom = gen_binomial(&(Rational::from_int(n as i64) + r - Rational::one()), n - k);
    let mut entries = Vec::new();
    for bi in 1..=(n - k + 1) {
        for bj in 1..=(n - k + 2 - bi) {
            let upper = Rational::from_int((n - bi - bj) as i64) + r - Rational::one();
            let w = gen_binomial(&upper, n + 2 - bi - bj - k) / &denom;
            entries.push((vec![bi as i64, bj as i64], w));
        }
    }
    VectorPmf::from_exact(
        "composition_bivariate",
        vec![param("n", n), param("k", k), param("r", r)],
        entries,
    )
}

/// Validates an admissible (r,s)-Lah parameter quadruple:
/// `n ≥ 1`, `0 ≤ k ≤ n`, `r, s ≥ 0`, `max{k, r, s} > 0`.
pub fn check_lah_params(n: usize, k: usize, r: &Rational, s: &Rational) -> Result<()> {
    require(n >= 1, "n must be ≥ 1")?;
    require(k <= n, "need k ≤ n")?;
    nonneg(r, "r")?;
    nonneg(s, "s")?;
    require(
        k > 0 || r.is_positive() || s.is_positive(),
        "inadmissible quadruple: max{k,r,s} must be > 0",
    )
}

fn lah_params(n: usize, k: usize, r: &Rational, s: &Rational) -> Vec<(String, String)> {
    vec![param("n", n), param("k", k), param("r", r), param("s", s)]
}

/// (r,s)-Lah distribution by its definition:
/// `pmf(j) = ⟦n j⟧_r {j k}_s / L(n,k)_{(r+s)/2}` on `{k..n}`.
pub fn lah_pmf(n: usize, k: usize, r: &Rational, s: &Rational) -> Result<FinitePmf> {
    check_lah_params(n, k, r, s)?;
    let norm = r_lah(n, k as i64, &(&(r + s) / &Rational::from_int(2)));
    let row1 = r_stirling1_row(n, r)?;
    let mut entries = Vec::new();
    for j in k..=n {
        let c2 = numbers::r_stirling2(j, k as i64, s)?;
        entries.push((j as i64, &(&row1[j] * &c2) / &norm));
    }
    FinitePmf::from_exact("lah", lah_params(n, k, r, s), entries)
}

/// (r,s)-Lah distribution computed by the trivariate pmf recursion; agrees
/// with [`lah_pmf`] exactly for all admissible inputs.
pub fn lah_pmf_recursive(n: usize, k: usize, r: &Rational, s: &Rational) -> Result<FinitePmf> {
    check_lah_params(n, k, r, s)?;
    // prev[k'] = pmf vector of Λ(m-1, k') over j = 0..m-1 (None = inadmissible
    // cell, only ever consumed with a zero coefficient).
    let kmax = k;
    let mut prev: Vec<Option<Vec<Rational>>> = vec![Some(vec![Rational::one()])];
    for m in 1..=n {
        let cols = kmax.min(m);
        let mut cur: Vec<Option<Vec<Rational>>> = Vec::with_capacity(cols + 1);
        for kk in 0..=cols {
            if kk == 0 && r.is_zero() && s.is_zero() {
                cur.push(None);
                continue;
            }
            if kk == m {
                // Λ(m, m) is a point mass at m.
                let mut v = vec![Rational::zero(); m + 1];
                v[m] = Rational::one();
                cur.push(Some(v));
                continue;
            }
            let mr = Rational::from_int(m as i64);
            let kr = Rational::from_int(kk as i64);
            let denom = &mr * &(&mr + r + s - &Rational::one());
            let c_same = &(&mr + r - &Rational::one()) * &(&mr - &kr);
            let c_shift = &(&kr + s) * &(&mr - &kr);
            let c_up = &kr * &(&kr + r + s - &Rational::one());
            let mut v = vec![Rational::zero(); m + 1];
            if !c_same.is_zero() || !c_shift.is_zero() {
                let p = prev[kk]
                    .as_ref()
                    .expect("admissible cell depends on inadmissible (m-1, k)");
                for (j, pj) in p.iter().enumerate() {
                    if pj.is_zero() {
                        continue;
                    }
                    if !c_same.is_zero() {
                        v[j] += &(&(pj * &c_same) / &denom);
                    }
                    if !c_shift.is_zero() {
                        v[j + 1] += &(&(pj * &c_shift) / &denom);
                    }
                }
            }
            if kk >= 1 && !c_up.is_zero() {
                let p = prev[kk - 1]
                    .as_ref()
                    .expect("admissible cell depends on inadmissible (m-1, k-1)");
                for (j, pj) in p.iter().enumerate() {
                    if !pj.is_zero() {
                        v[j + 1] += &(&(pj * &c_up) / &denom);
                    }
                }
            }
            cur.push(Some(v));
        }
        prev = cur;
    }
    let v = prev[kmax].take().expect("target cell admissible");
    FinitePmf::from_exact(
        "lah_recursive",
        lah_params(n, k, r, s),
        v.into_iter().enumerate().map(|(j, p)| (j as i64, p)),
    )
}

/// Coefficients `c_j = ⟦n j⟧_r {j k}_s` for `j = 0..=n`, extracted from the
/// generating identity
/// `Σ_j c_j t^j = (n!/k!) [x^n] ((1-x)^{-t} - 1)^k (1-x)^{-(st+r)}`
/// by running the truncated series over polynomials in `t`.
fn lah_coefficients_via_series(
    n: usize,
    k: usize,
    r: &Rational,
    s: &Rational,
) -> Result<Vec<Rational>> {
    // Series in x to order n with coefficients in Q[t].
    let zero = Polynomial::zero();
    let mul = |a: &[Polynomial], b: &[Polynomial]| -> Vec<Polynomial> {
        let mut out = vec![zero.clone(); n + 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.degree().is_none() {
                continue;
            }
            for (j, bj) in b.iter().take(n + 1 - i).enumerate() {
                out[i + j] = &out[i + j] + &(ai * bj);
            }
        }
        out
    };
    // (1-x)^{-t} - 1: coefficient of x^j is t^{j↑}/j! (zero at j = 0).
    let mut base = vec![zero.clone(); n + 1];
    for (j, c) in base.iter_mut().enumerate().skip(1) {
        let rf = Polynomial::rising_factorial_in_x(&Rational::zero(), j);
        *c = rf.scale(&(Rational::one() / Rational::from_bigint(factorial(j))));
    }
    // ((1-x)^{-t} - 1)^k
    let mut powed = vec![zero.clone(); n + 1];
    powed[0] = Polynomial::one();
    for _ in 0..k {
        powed = mul(&powed, &base);
    }
    // (1-x)^{-(st+r)}: coefficient of x^j is Π_{i<j} (s·t + r + i) / j!.
    let mut tail = vec![zero.clone(); n + 1];
    let mut acc = Polynomial::one();
    for (j, c) in tail.iter_mut().enumerate() {
        if j > 0 {
            let lin = Polynomial::from_coeffs(vec![r + &Rational::from_int(j as i64 - 1), s.clone()]);
            acc = &acc * &lin;
        }
        *c = acc.scale(&(Rational::one() / Rational::from_bigint(factorial(j))));
    }
    let product = mul(&powed, &tail);
    let scale = Rational::from_big_ratio(factorial(n), factorial(k)).expect("k! nonzero");
    let poly_t = product[n].scale(&scale);
    Ok((0..=n).map(|j| poly_t.coeff(j)).collect())
}

/// Generating polynomial `Σ_j ⟦n j⟧_r {j k}_s t^j` evaluated at `t`, by
/// truncated-series coefficient extraction.
pub fn lah_gen_poly(n: usize, k: usize, r: &Rational, s: &Rational, t: &Rational) -> Result<Rational> {
    check_lah_params(n, k, r, s)?;
    let coeffs = lah_coefficients_via_series(n, k, r, s)?;
    let mut acc = Rational::zero();
    let mut tp = Rational::one();
    for c in coeffs {
        acc += &(&c * &tp);
        tp *= t;
    }
    Ok(acc)
}

/// (r,s)-Lah distribution as the normalized coefficients of the generating
/// polynomial — the third independent route.
pub fn lah_pmf_via_generating_poly(
    n: usize,
    k: usize,
    r: &Rational,
    s: &Rational,
) -> Result<FinitePmf> {
    check_lah_params(n, k, r, s)?;
    let coeffs = lah_coefficients_via_series(n, k, r, s)?;
    let total: Rational = coeffs.iter().sum();
    FinitePmf::from_exact(
        "lah_genpoly",
        lah_params(n, k, r, s),
        coeffs
            .into_iter()
            .enumerate()
            .map(|(j, c)| (j as i64, c / &total)),
    )
}

/// Exact mean of the (r,s)-Lah distribution.
pub fn lah_mean(n: usize, k: usize, r: &Rational, s: &Rational) -> Result<Rational> {
    Ok(lah_pmf(n, k, r, s)?.mean())
}

/// Closed-form mean for `r = s = 0`: `nk (H_n - H_{k-1}) / (n-k+1)`.
pub fn lah_mean_closed_00(n: usize, k: usize) -> Result<Rational> {
    require(k >= 1 && k <= n, "need 1 ≤ k ≤ n")?;
    let h = harmonic(n) - harmonic(k - 1);
    Ok(Rational::from_int((n * k) as i64) * h / Rational::from_int((n - k + 1) as i64))
}

/// Float-mode mean of the (r,s)-Lah distribution via the composition
/// representation: `L(n,k,r,s) = E[H^{(r,s)}_{b₀}] + k·E[H_{b₁}]` over the
/// random (r+s)-composition of n. Log-gamma arithmetic, valid for large n.
pub fn lah_mean_f64(n: usize, k: usize, r: f64, s: f64) -> f64 {
    assert!(n >= 1 && k <= n);
    let rs = r + s;
    if k == 0 {
        let h = harmonic_rs_table(n, r, s);
        return h[n];
    }
    if k == n {
        return n as f64;
    }
    let h_rs = harmonic_rs_table(n - k, r, s);
    let b0 = composition_marginal_b0_f64(n, k, rs);
    let mut mean = 0.0;
    for (b, p) in b0 {
        mean += p * h_rs[b as usize];
    }
    let h = harmonic_table(n - k + 1);
    let bj = composition_marginal_bj_f64(n, k, rs);
    let mut mj = 0.0;
    for (b, p) in bj {
        mj += p * h[b as usize];
    }
    mean + k as f64 * mj
}

/// Float-mode marginal of `b₀` for the random r-composition.
pub fn composition_marginal_b0_f64(n: usize, k: usize, r: f64) -> Vec<(i64, f64)> {
    assert!(k >= 1 && k <= n && r >= 0.0);
    if r == 0.0 {
        return vec![(0, 1.0)];
    }
    let ln_denom = ln_gen_binomial(n as f64 + r - 1.0, (n - k) as u64);
    (0..=(n - k))
        .map(|b0| {
            let ln_w = ln_gen_binomial((n - b0) as f64 - 1.0, (k - 1) as u64)
                + ln_gen_binomial(b0 as f64 + r - 1.0, b0 as u64)
                - ln_denom;
            (b0 as i64, ln_w.exp())
        })
        .collect()
}

/// Float-mode marginal of a white part `b_j` for the random r-composition.
pub fn composition_marginal_bj_f64(n: usize, k: usize, r: f64) -> Vec<(i64, f64)> {
    assert!(k >= 1 && k <= n && r >= 0.0);
    let ln_denom = ln_gen_binomial(n as f64 + r - 1.0, (n - k) as u64);
    (1..=(n - k + 1))
        .map(|b| {
            let ln_w = ln_gen_binomial((n - b) as f64 + r - 1.0, (n + 1 - b - k) as u64) - ln_denom;
            (b as i64, ln_w.exp())
        })
        .collect()
}

/// Float-mode r-Stirling pmf of the first kind via the Bernoulli-sum
/// representation `Σ_{j=1}^n Bern(τ/(τ+r+j-1))`.
pub fn r_stir1_pmf_f64(n: usize, tau: f64, r: f64) -> Vec<(i64, f64)> {
    assert!(tau >= 0.0 && r >= 0.0 && tau + r > 0.0);
    let mut probs = vec![1.0f64];
    for j in 1..=n {
        let p = tau / (tau + r + (j - 1) as f64);
        let mut next = vec![0.0; probs.len() + 1];
        for (k, &w) in probs.iter().enumerate() {
            next[k] += w * (1.0 - p);
            next[k + 1] += w * p;
        }
        probs = next;
    }
    probs
        .into_iter()
        .enumerate()
        .map(|(k, p)| (k as i64, p))
        .collect()
}

/// Leaf-count law of the Hoppe tree: `pmf(k) = A(n-k, k | 0, θ) / θ^{n↑}`.
pub fn hoppe_leaves_pmf(n: usize, theta: &Rational) -> Result<FinitePmf> {
    require(n >= 1, "n must be ≥ 1")?;
    require(theta.is_positive(), "θ must be > 0")?;
    let norm = rising_factorial(theta, n);
    let entries = (1..=n)
        .map(|k| {
            Ok((
                k as i64,
                gen_eulerian((n - k) as i64, k as i64, &Rational::zero(), theta)? / &norm,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    FinitePmf::from_exact(
        "hoppe_leaves",
        vec![param("n", n), param("theta", theta)],
        entries,
    )
}

/// Leaf-count law of component `j` (1-based) of the multinomial Hoppe forest:
/// `pmf(k) = (1/θ^{n↑}) Σ_{m=k}^n C(n,m) (θ-θ_j)^{(n-m)↑} A(m-k, k | 0, θ_j)`.
pub fn multihoppe_leaves_pmf(n: usize, thetas: &[Rational], j: usize) -> Result<FinitePmf> {
    require(n >= 1, "n must be ≥ 1")?;
    require(j >= 1 && j <= thetas.len(), "component index out of range")?;
    for t in thetas {
        nonneg(t, "θ_j")?;
    }
    let theta: Rational = thetas.iter().sum();
    require(theta.is_positive(), "Σθ must be > 0")?;
    let theta_j = &thetas[j - 1];
    let rest = &theta - theta_j;
    let norm = rising_factorial(&theta, n);
    let mut entries = Vec::new();
    for k in 0..=n {
        let mut w = Rational::zero();
        for m in k..=n {
            w += &(Rational::from_bigint(binomial(n, m))
                * rising_factorial(&rest, n - m)
                * gen_eulerian((m - k) as i64, k as i64, &Rational::zero(), theta_j)?);
        }
        entries.push((k as i64, w / &norm));
    }
    FinitePmf::from_exact(
        "multihoppe_leaves",
        vec![
            param("n", n),
            param("thetas", format_vec(thetas)),
            param("j", j),
        ],
        entries,
    )
}

/// Leaf-count law of the subtree rooted at node `ℓ` of a Hoppe(n, θ) tree,
/// with the atom `P[T=0] = (ℓ-1+θ)/(n-1+θ)` for the childless case.
pub fn subtree_leaves_pmf(n: usize, ell: usize, theta: &Rational) -> Result<FinitePmf> {
    require(ell >= 1 && ell <= n, "need 1 ≤ ℓ ≤ n")?;
    require(theta.is_positive(), "θ must be > 0")?;
    let m_tot = n - ell;
    let shifted = theta + &Rational::from_int(ell as i64);
    let norm = rising_factorial(&shifted, m_tot);
    let older = theta + &Rational::from_int(ell as i64 - 1);
    let mut entries = vec![(
        0i64,
        &older / &(theta + &Rational::from_int(n as i64 - 1)),
    )];
    for k in 1..=m_tot {
        let mut w = Rational::zero();
        for m in k..=m_tot {
            w += &(Rational::from_bigint(binomial(m_tot, m))
                * rising_factorial(&older, m_tot - m)
                * eulerian(m, k as i64 - 1)?);
        }
        entries.push((k as i64, w / &norm));
    }
    FinitePmf::from_exact(
        "subtree_leaves",
        vec![param("n", n), param("ell", ell), param("theta", theta)],
        entries,
    )
}

/// Expected number of nodes at depth `k` in component `j` of the multinomial
/// Hoppe forest: `θ_j ⟦n k⟧_θ / θ^{n↑}`.
pub fn expected_profile(n: usize, thetas: &[Rational], j: usize, k: usize) -> Result<Rational> {
    require(k >= 1 && k <= n, "need 1 ≤ k ≤ n")?;
    require(j >= 1 && j <= thetas.len(), "component index out of range")?;
    let theta: Rational = thetas.iter().sum();
    require(theta.is_positive(), "Σθ must be > 0")?;
    let c = numbers::r_stirling1(n, k as i64, &theta)?;
    Ok(&thetas[j - 1] * &(&c / &rising_factorial(&theta, n)))
}

const FLOAT_TAIL: f64 = 1e-15;

/// Geometric(α) on `{1, 2, ...}`, float mode, truncated where the tail mass
/// drops below 1e-15.
pub fn geometric_pmf_f64(alpha: f64) -> Result<FinitePmf> {
    require(alpha > 0.0 && alpha <= 1.0, "need 0 < α ≤ 1")?;
    let mut entries = Vec::new();
    let mut b = 1i64;
    let mut tail = 1.0;
    while tail > FLOAT_TAIL && b < 1_000_000 {
        let p = alpha * (1.0 - alpha).powi(b as i32 - 1);
        entries.push((b, p));
        tail -= p;
        b += 1;
    }
    FinitePmf::from_float("geometric", vec![param("alpha", alpha)], entries, 1e-12)
}

/// Negative binomial NegBin(r, α) on `{0, 1, ...}` with
/// `pmf(j) = (r^{j↑}/j!) α^r (1-α)^j`, float mode, truncated.
pub fn neg_binomial_pmf_f64(r: f64, alpha: f64) -> Result<FinitePmf> {
    require(r >= 0.0, "need r ≥ 0")?;
    require(alpha > 0.0 && alpha <= 1.0, "need 0 < α ≤ 1")?;
    if r == 0.0 {
        return FinitePmf::from_float(
            "neg_binomial",
            vec![param("r", r), param("alpha", alpha)],
            [(0i64, 1.0)],
            1e-12,
        );
    }
    let mut entries = Vec::new();
    let mut coeff = alpha.powf(r); // (r^{j↑}/j!) α^r (1-α)^j
    let mut j = 0i64;
    let mut tail = 1.0;
    while tail > FLOAT_TAIL && j < 1_000_000 {
        entries.push((j, coeff));
        tail -= coeff;
        coeff *= (r + j as f64) / (j as f64 + 1.0) * (1.0 - alpha);
        j += 1;
    }
    FinitePmf::from_float(
        "neg_binomial",
        vec![param("r", r), param("alpha", alpha)],
        entries,
        1e-12,
    )
}

/// Poisson(λ) float mode, truncated where the tail mass drops below 1e-15.
pub fn poisson_pmf_f64(lambda: f64) -> Result<FinitePmf> {
    require(lambda > 0.0, "need λ > 0")?;
    let mut entries = Vec::new();
    let mut p = (-lambda).exp();
    let mut j = 0i64;
    let mut tail = 1.0;
    while (tail > FLOAT_TAIL || (j as f64) < 2.0 * lambda) && j < 1_000_000 {
        entries.push((j, p));
        tail -= p;
        p *= lambda / (j as f64 + 1.0);
        j += 1;
    }
    FinitePmf::from_float("poisson", vec![param("lambda", lambda)], entries, 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    #[test]
    fn stir1_examples() {
        let p = stir1_pmf(2, &rat(1)).unwrap();
        assert_eq!(p.prob_of(1), ratio(1, 2));
        assert_eq!(p.prob_of(2), ratio(1, 2));
        let p = stir1_pmf(1, &ratio(7, 3)).unwrap();
        assert_eq!(p.prob_of(1), rat(1));
        let p = stir1_pmf(3, &rat(1)).unwrap();
        assert_eq!(p.prob_of(1), ratio(1, 3));
        assert!(stir1_pmf(2, &rat(0)).is_err());
    }

    #[test]
    fn r_stir1_examples() {
        let p = r_stir1_pmf(1, &ratio(3, 2), &ratio(1, 2)).unwrap();
        assert_eq!(p.prob_of(0), ratio(1, 4));
        assert_eq!(p.prob_of(1), ratio(3, 4));
        let p = r_stir1_pmf(2, &rat(1), &rat(1)).unwrap();
        assert_eq!(p.prob_of(1), ratio(1, 2));
        // r = 0 reduces to stir1.
        for n in 1..=8 {
            let a = r_stir1_pmf(n, &ratio(3, 2), &rat(0)).unwrap();
            let b = stir1_pmf(n, &ratio(3, 2)).unwrap();
            assert!(a.same_distribution(&b));
        }
        // τ = 0 degenerates at 0.
        let p = r_stir1_pmf(5, &rat(0), &rat(2)).unwrap();
        assert_eq!(p.prob_of(0), rat(1));
        assert!(r_stir1_pmf(3, &rat(0), &rat(0)).is_err());
    }

    #[test]
    fn three_route_agreement() {
        let grid = [rat(0), ratio(1, 2), rat(1), rat(2)];
        for tau in &grid {
            for r in &grid {
                if (tau + r).is_zero() {
                    continue;
                }
                for n in 1..=15usize {
                    let direct = r_stir1_pmf(n, tau, r).unwrap();
                    let mix = r_stir1_pmf_via_binomial_mixture(n, tau, r).unwrap();
                    assert!(direct.same_distribution(&mix), "bin mixture n={n} τ={tau} r={r}");
                    if tau.is_positive() {
                        let bb = r_stir1_pmf_via_beta_binomial(n, tau, r).unwrap();
                        assert!(direct.same_distribution(&bb), "beta-bin n={n} τ={tau} r={r}");
                    }
                }
            }
        }
    }

    #[test]
    fn sibuya_examples() {
        let p = stir_sibuya_pmf(2, 2).unwrap();
        assert_eq!(p.prob_of(1), ratio(1, 2));
        assert_eq!(p.prob_of(2), ratio(1, 2));
        let p = r_stir_sibuya_pmf(1, 3, &ratio(1, 2)).unwrap();
        assert_eq!(p.prob_of(0), ratio(1, 7));
        assert_eq!(p.prob_of(1), ratio(6, 7));
        let p = r_stir_sibuya_pmf(2, 1, &rat(1)).unwrap();
        assert_eq!(p.prob_of(0), ratio(1, 4));
        assert_eq!(p.prob_of(1), ratio(3, 4));
        assert!(r_stir_sibuya_pmf(2, 0, &rat(1)).is_err());
    }

    #[test]
    fn stir2_examples() {
        let p = stir2_pmf(2, &rat(1)).unwrap();
        assert_eq!(p.prob_of(1), ratio(1, 2));
        assert_eq!(p.prob_of(2), ratio(1, 2));
        let p = r_stir2_pmf(2, &rat(1), &rat(1)).unwrap();
        assert_eq!(p.prob_of(0), ratio(1, 5));
        assert_eq!(p.prob_of(1), ratio(3, 5));
        assert_eq!(p.prob_of(2), ratio(1, 5));
        let p = r_stir2_pmf(1, &ratio(2, 3), &ratio(1, 3)).unwrap();
        assert_eq!(p.prob_of(0), ratio(1, 3));
        assert_eq!(p.prob_of(1), ratio(2, 3));
        assert!(r_stir2_pmf(2, &rat(0), &rat(1)).is_err());
    }

    #[test]
    fn mult_stir1_examples_and_coherence() {
        // n=1: pmf(e_j) = p_j.
        let p = mult_stir1_pmf(1, &rat(2), &[ratio(1, 3), ratio(2, 3)]).unwrap();
        assert_eq!(p.prob_of(&[1, 0]), ratio(1, 3));
        assert_eq!(p.prob_of(&[0, 1]), ratio(2, 3));
        // n=2, θ=2, p=(1/2,1/2): pmf((1,1)) = 2/6.
        let p = mult_stir1_pmf(2, &rat(2), &[ratio(1, 2), ratio(1, 2)]).unwrap();
        assert_eq!(p.prob_of(&[1, 1]), ratio(1, 3));
        // d=1 reduces to stir1.
        for n in 1..=8 {
            let a = mult_stir1_pmf(n, &ratio(3, 2), &[rat(1)]).unwrap();
            let b = stir1_pmf(n, &ratio(3, 2)).unwrap();
            for (ks, prob) in a.entries() {
                assert_eq!(*prob, b.prob_of(ks[0]));
            }
        }
        assert!(mult_stir1_pmf(2, &rat(1), &[ratio(1, 2), ratio(1, 3)]).is_err());

        // Marginals = r_stir1(n, θp_j, θ-θp_j); aggregation drops to d-1;
        // mixed-multinomial route identical. Exact for n ≤ 10, d ≤ 3.
        let configs: Vec<(Rational, Vec<Rational>)> = vec![
            (rat(2), vec![ratio(1, 2), ratio(1, 2)]),
            (ratio(3, 2), vec![ratio(1, 3), ratio(2, 3)]),
            (rat(1), vec![ratio(1, 4), ratio(1, 4), ratio(1, 2)]),
        ];
        for (theta, ps) in configs {
            for n in 1..=10usize {
                let joint = mult_stir1_pmf(n, &theta, &ps).unwrap();
                for (j, pj) in ps.iter().enumerate() {
                    let tau_j = &theta * pj;
                    let marg = joint.marginal(j).unwrap();
                    let expect = r_stir1_pmf(n, &tau_j, &(&theta - &tau_j)).unwrap();
                    assert!(marg.same_distribution(&expect), "marginal n={n} j={j}");
                }
                let mixed = mult_stir1_pmf_via_mixture(n, &theta, &ps).unwrap();
                assert!(joint.same_distribution(&mixed), "mixture n={n}");
                if ps.len() >= 2 {
                    let agg = joint.aggregate(0, 1).unwrap();
                    let mut ps2 = vec![&ps[0] + &ps[1]];
                    ps2.extend_from_slice(&ps[2..]);
                    let expect = mult_stir1_pmf(n, &theta, &ps2).unwrap();
                    assert!(agg.same_distribution(&expect), "aggregation n={n}");
                }
            }
        }
    }

    #[test]
    fn mdir_examples() {
        let p = mdir_pmf(1, &[ratio(1, 2), ratio(3, 2)]).unwrap();
        assert_eq!(p.prob_of(&[1, 0]), ratio(1, 4));
        let p = mdir_pmf(2, &[rat(1), rat(1)]).unwrap();
        for key in [[2, 0], [1, 1], [0, 2]] {
            assert_eq!(p.prob_of(&key), ratio(1, 3));
        }
        let p = mdir_pmf(2, &[rat(0), rat(1)]).unwrap();
        assert_eq!(p.prob_of(&[0, 2]), rat(1));
        assert!(mdir_pmf(2, &[rat(0), rat(0)]).is_err());
    }

    #[test]
    fn beta_binomial_mean_identity() {
        // mean = n·a/(a+b), cross-checked by the exact sum.
        for (a, b) in [(rat(1), rat(1)), (ratio(1, 2), rat(2)), (rat(3), ratio(1, 3))] {
            for n in 1..=10usize {
                let p = beta_binomial_pmf(n, &a, &b).unwrap();
                let expect = Rational::from_int(n as i64) * &a / (&a + &b);
                assert_eq!(p.mean(), expect);
            }
        }
        let p = beta_binomial_pmf(5, &rat(0), &rat(2)).unwrap();
        assert_eq!(p.prob_of(0), rat(1));
        let p = beta_binomial_pmf(5, &rat(2), &rat(0)).unwrap();
        assert_eq!(p.prob_of(5), rat(1));
    }

    #[test]
    fn composition_examples() {
        // n=k: unique composition (0,1,..,1).
        let p = composition_joint_pmf(3, 3, &ratio(5, 2)).unwrap();
        assert_eq!(p.prob_of(&[0, 1, 1, 1]), rat(1));
        // n=2, k=1, r=1: both compositions equally likely.
        let p = composition_joint_pmf(2, 1, &rat(1)).unwrap();
        assert_eq!(p.prob_of(&[0, 2]), ratio(1, 2));
        assert_eq!(p.prob_of(&[1, 1]), ratio(1, 2));
        // r=0: b0 = 0 a.s., uniform over positive compositions.
        let p = composition_joint_pmf(2, 1, &rat(0)).unwrap();
        assert_eq!(p.prob_of(&[0, 2]), rat(1));
        assert!(composition_joint_pmf(2, 3, &rat(1)).is_err());
    }

    #[test]
    fn composition_marginals_and_means() {
        // E[b0] for (3,1,1) = 1.
        assert_eq!(composition_marginal_b0(3, 1, &rat(1)).unwrap().mean(), rat(1));
        // Marginal of b_j at n=k is a point mass at 1.
        let p = composition_marginal_bj(4, 4, &ratio(7, 3)).unwrap();
        assert_eq!(p.prob_of(1), rat(1));
        // Bivariate at r=0 reduces to stars and bars: the 3 compositions of 4
        // into 2 parts are (1,3),(2,2),(3,1), each with probability 1/3.
        let p = composition_bivariate(4, 2, &rat(0)).unwrap();
        assert_eq!(p.prob_of(&[1, 3]), ratio(1, 3));
        assert_eq!(p.prob_of(&[2, 2]), ratio(1, 3));
        assert_eq!(p.prob_of(&[1, 1]), rat(0));

        // Exact means match (n+r)/(k+r) and r(n-k)/(k+r); marginalization of
        // the joint law agrees with the closed-form marginals.
        for r in [rat(0), ratio(1, 2), rat(1), rat(2)] {
            for n in 1..=8usize {
                for k in 1..=n {
                    let joint = composition_joint_pmf(n, k, &r).unwrap();
                    let b0 = composition_marginal_b0(n, k, &r).unwrap();
                    let bj = composition_marginal_bj(n, k, &r).unwrap();
                    assert!(joint.marginal(0).unwrap().same_distribution(&b0));
                    assert!(joint.marginal(1).unwrap().same_distribution(&bj));
                    let expect_bj = (Rational::from_int(n as i64) + &r)
                        / (Rational::from_int(k as i64) + &r);
                    let expect_b0 = &r * &Rational::from_int((n - k) as i64)
                        / (Rational::from_int(k as i64) + &r);
                    assert_eq!(bj.mean(), expect_bj);
                    assert_eq!(b0.mean(), expect_b0);
                    if k >= 2 {
                        let biv = composition_bivariate(n, k, &r).unwrap();
                        assert!(joint.bivariate(1, 2).unwrap().same_distribution(&biv));
                    }
                }
            }
        }
    }

    #[test]
    fn composition_conditional_given_b0_is_uniform() {
        for r in [ratio(1, 2), rat(1), rat(2)] {
            let joint = composition_joint_pmf(6, 2, &r).unwrap();
            let b0_marg = composition_marginal_b0(6, 2, &r).unwrap();
            for (key, prob) in joint.entries() {
                let b0 = key[0];
                let count = binomial(6 - b0 as usize - 1, 1);
                let expect = b0_marg.prob_of(b0) / Rational::from_bigint(count);
                assert_eq!(*prob, expect);
            }
        }
    }

    #[test]
    fn composition_pairwise_covariances_nonpositive() {
        for r in [rat(0), ratio(1, 2), rat(1), rat(2)] {
            for n in 1..=9usize {
                for k in 1..=n {
                    let joint = composition_joint_pmf(n, k, &r).unwrap();
                    for i in 0..=k {
                        for j in (i + 1)..=k {
                            let c = joint.covariance(i, j);
                            assert!(
                                !c.is_positive(),
                                "cov({i},{j}) = {c} > 0 at n={n} k={k} r={r}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lah_examples() {
        let p = lah_pmf(2, 1, &rat(0), &rat(0)).unwrap();
        assert_eq!(p.prob_of(1), ratio(1, 2));
        assert_eq!(p.prob_of(2), ratio(1, 2));
        // k=0 equals rStir1(n, s, r).
        for (r, s) in [(rat(1), rat(1)), (ratio(1, 2), rat(2))] {
            for n in 1..=8 {
                let a = lah_pmf(n, 0, &r, &s).unwrap();
                let b = r_stir1_pmf(n, &s, &r).unwrap();
                assert!(a.same_distribution(&b));
            }
        }
        // n=k collapses to a point mass.
        let p = lah_pmf(4, 4, &ratio(1, 3), &rat(2)).unwrap();
        assert_eq!(p.prob_of(4), rat(1));
        assert!(lah_pmf(3, 0, &rat(0), &rat(0)).is_err());
    }

    #[test]
    fn lah_three_routes_agree() {
        let grid = [rat(0), ratio(1, 2), rat(1), rat(2), ratio(7, 3)];
        for r in &grid {
            for s in &grid {
                for n in 1..=15usize {
                    for k in 0..=n.min(6) {
                        if k == 0 && r.is_zero() && s.is_zero() {
                            continue;
                        }
                        let direct = lah_pmf(n, k, r, s).unwrap();
                        let rec = lah_pmf_recursive(n, k, r, s).unwrap();
                        let gen = lah_pmf_via_generating_poly(n, k, r, s).unwrap();
                        assert!(direct.same_distribution(&rec), "recursive n={n} k={k} r={r} s={s}");
                        assert!(direct.same_distribution(&gen), "genpoly n={n} k={k} r={r} s={s}");
                    }
                }
            }
        }
    }

    #[test]
    fn lah_gen_poly_examples() {
        // t=1 normalizes to the r-Lah number with midpoint parameter.
        for (r, s) in [(rat(0), rat(0)), (rat(1), rat(2)), (ratio(1, 2), ratio(1, 2))] {
            for n in 1..=8usize {
                for k in 0..=n {
                    if k == 0 && r.is_zero() && s.is_zero() {
                        continue;
                    }
                    let mid = &(&r + &s) / &rat(2);
                    assert_eq!(
                        lah_gen_poly(n, k, &r, &s, &rat(1)).unwrap(),
                        r_lah(n, k as i64, &mid)
                    );
                }
            }
        }
        assert_eq!(lah_gen_poly(4, 2, &rat(1), &rat(1), &rat(0)).unwrap(), rat(0));
        assert_eq!(lah_gen_poly(2, 1, &rat(0), &rat(0), &rat(2)).unwrap(), rat(6));
        // Direct sum cross-check at assorted t.
        for t in [rat(-1), ratio(1, 3), rat(2)] {
            for n in 2..=8usize {
                let mut sum = Rational::zero();
                for j in 0..=n {
                    sum += &(numbers::r_stirling1(n, j as i64, &rat(1)).unwrap()
                        * numbers::r_stirling2(j, 2, &ratio(1, 2)).unwrap()
                        * t.pow(j as i32));
                }
                assert_eq!(lah_gen_poly(n, 2, &rat(1), &ratio(1, 2), &t).unwrap(), sum);
            }
        }
    }

    #[test]
    fn lah_mean_formulas() {
        assert_eq!(lah_mean(2, 1, &rat(0), &rat(0)).unwrap(), ratio(3, 2));
        assert_eq!(lah_mean_closed_00(2, 1).unwrap(), ratio(3, 2));
        for n in 1..=12usize {
            for k in 1..=n {
                assert_eq!(
                    lah_mean(n, k, &rat(0), &rat(0)).unwrap(),
                    lah_mean_closed_00(n, k).unwrap(),
                    "n={n} k={k}"
                );
            }
            // n=k: mean n.
            assert_eq!(lah_mean(n, n, &rat(1), &rat(2)).unwrap(), rat(n as i64));
        }
        // k=0: mean of rStir1(n,s,r) = Σ_j s/(r+s+j-1).
        for (r, s) in [(rat(1), rat(1)), (rat(2), ratio(1, 2))] {
            for n in 1..=10usize {
                assert_eq!(
                    lah_mean(n, 0, &r, &s).unwrap(),
                    numbers::harmonic_rs(n, &r, &s).unwrap()
                );
            }
        }
    }

    #[test]
    fn lah_mean_float_matches_exact() {
        for (r, s) in [(0.0, 0.0), (1.0, 0.0), (0.5, 0.5), (2.0, 1.0)] {
            let rr = Rational::from_ratio((r * 2.0) as i64, 2);
            let ss = Rational::from_ratio((s * 2.0) as i64, 2);
            for n in [5usize, 20, 60] {
                for k in [0usize, 1, 3, n / 2, n] {
                    if k == 0 && r == 0.0 && s == 0.0 {
                        continue;
                    }
                    let exact = lah_mean(n, k, &rr, &ss).unwrap().to_f64();
                    let approx = lah_mean_f64(n, k, r, s);
                    assert!(
                        (exact - approx).abs() < 1e-9 * (1.0 + exact.abs()),
                        "n={n} k={k} r={r} s={s}: {exact} vs {approx}"
                    );
                }
            }
        }
    }

    #[test]
    fn float_mode_agrees_with_exact() {
        // r_stir1: Bernoulli-convolution float mirror within 1e-10 relative.
        for (tau, r) in [(1.0, 0.0), (0.5, 1.5), (2.0, 1.0)] {
            let taur = Rational::from_ratio((tau * 2.0) as i64, 2);
            let rr = Rational::from_ratio((r * 2.0) as i64, 2);
            for n in [3usize, 17, 80] {
                let exact = r_stir1_pmf(n, &taur, &rr).unwrap();
                let approx = r_stir1_pmf_f64(n, tau, r);
                for (k, p) in approx {
                    let e = exact.prob_of(k).to_f64();
                    assert!((e - p).abs() <= 1e-10 * (1.0 + e), "n={n} k={k}");
                }
            }
        }
        // Composition marginals.
        for (n, k, r) in [(12usize, 4usize, 1.0), (30, 7, 0.5), (50, 3, 2.0)] {
            let rr = Rational::from_ratio((r * 2.0) as i64, 2);
            let exact = composition_marginal_b0(n, k, &rr).unwrap();
            for (b, p) in composition_marginal_b0_f64(n, k, r) {
                let e = exact.prob_of(b).to_f64();
                assert!((e - p).abs() <= 1e-10 * (1.0 + e));
            }
            let exact = composition_marginal_bj(n, k, &rr).unwrap();
            for (b, p) in composition_marginal_bj_f64(n, k, r) {
                let e = exact.prob_of(b).to_f64();
                assert!((e - p).abs() <= 1e-10 * (1.0 + e));
            }
        }
    }

    #[test]
    fn hoppe_leaves_examples() {
        let p = hoppe_leaves_pmf(3, &rat(1)).unwrap();
        assert_eq!(p.prob_of(1), ratio(1, 6));
        assert_eq!(p.prob_of(2), ratio(4, 6));
        assert_eq!(p.prob_of(3), ratio(1, 6));
        let p = hoppe_leaves_pmf(1, &ratio(5, 3)).unwrap();
        assert_eq!(p.prob_of(1), rat(1));
        // θ=1 reduces to the Eulerian law ⟨n, k-1⟩/n!.
        for n in 1..=9usize {
            let p = hoppe_leaves_pmf(n, &rat(1)).unwrap();
            for k in 1..=n {
                let expect = eulerian(n, k as i64 - 1).unwrap()
                    / Rational::from_bigint(factorial(n));
                assert_eq!(p.prob_of(k as i64), expect);
            }
        }
    }

    #[test]
    fn multihoppe_and_subtree_leaves() {
        // d=1 reduces to hoppe_leaves.
        for n in 1..=8usize {
            let a = multihoppe_leaves_pmf(n, &[ratio(3, 2)], 1).unwrap();
            let b = hoppe_leaves_pmf(n, &ratio(3, 2)).unwrap();
            assert!(a.same_distribution(&b));
        }
        // Subtree at ℓ=n: atom at 0 with mass 1.
        let p = subtree_leaves_pmf(5, 5, &rat(2)).unwrap();
        assert_eq!(p.prob_of(0), rat(1));
        // n=2, ℓ=1, θ=1: equal split.
        let p = subtree_leaves_pmf(2, 1, &rat(1)).unwrap();
        assert_eq!(p.prob_of(0), ratio(1, 2));
        assert_eq!(p.prob_of(1), ratio(1, 2));
        // Subtree law = multihoppe with the merged older-root component.
        for n in 2..=7usize {
            for ell in 1..n {
                for theta in [rat(1), ratio(3, 2)] {
                    let sub = subtree_leaves_pmf(n, ell, &theta).unwrap();
                    let merged = &theta + &Rational::from_int(ell as i64 - 1);
                    let multi = multihoppe_leaves_pmf(n - ell, &[rat(1), merged], 1).unwrap();
                    assert!(sub.same_distribution(&multi), "n={n} ℓ={ell}");
                }
            }
        }
    }

    #[test]
    fn expected_profile_examples() {
        // Σ_k profile = n θ_j / θ.
        let thetas = [rat(1), rat(2)];
        let theta: Rational = thetas.iter().sum();
        for n in 1..=10usize {
            for j in 1..=2usize {
                let mut sum = Rational::zero();
                for k in 1..=n {
                    sum += &expected_profile(n, &thetas, j, k).unwrap();
                }
                let expect = Rational::from_int(n as i64) * &thetas[j - 1] / &theta;
                assert_eq!(sum, expect);
            }
        }
        assert_eq!(
            expected_profile(1, &thetas, 1, 1).unwrap(),
            ratio(1, 3)
        );
        // n=2, d=1, θ=1, k=2: ⟦2 2⟧₁/1^{2↑} = 1/2.
        assert_eq!(expected_profile(2, &[rat(1)], 1, 2).unwrap(), ratio(1, 2));
    }

    #[test]
    fn limit_pmf_examples() {
        let g = geometric_pmf_f64(1.0).unwrap();
        assert_eq!(g.support(), &[1]);
        // NegBin(1, α) is Geometric(α) shifted to {0,1,...}.
        let nb = neg_binomial_pmf_f64(1.0, 0.4).unwrap();
        let g = geometric_pmf_f64(0.4).unwrap();
        for (j, p) in nb.entries_f64() {
            let gp = g.prob_of_f64(j + 1);
            assert!((p - gp).abs() < 1e-12);
        }
        let po = poisson_pmf_f64(2.0).unwrap();
        assert!((po.mean_f64() - 2.0).abs() < 1e-9);
    }
}
