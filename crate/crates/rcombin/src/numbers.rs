//! Exact computation of the combinatorial number families: r-Stirling numbers
//! of both kinds, multinomial Stirling numbers, r-Lah numbers, Eulerian and
//! generalized Eulerian numbers, r-Touchard/r-Bell polynomials and the
//! harmonic sums used by the Lah mean formulas.
//!
//! Everything here is exact rational arithmetic. Triangle-backed operations
//! refuse rows beyond [`MAX_EXACT_ROWS`] (memory guard); large-n consumers use
//! the log-space float paths in [`crate::float`] instead.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::series::{self, PowerSeries};

/// Exact triangle rows beyond this size are refused.
pub const MAX_EXACT_ROWS: usize = 512;

fn check_rows(n: usize) -> Result<()> {
    if n > MAX_EXACT_ROWS {
        Err(Error::guard(format!(
            "exact triangle row {n} exceeds the {MAX_EXACT_ROWS}-row guard"
        )))
    } else {
        Ok(())
    }
}

pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// Integer binomial coefficient; 0 when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Multinomial coefficient `(Σks)! / Π ks!`.
pub fn multinomial_coefficient(ks: &[usize]) -> BigInt {
    let mut acc = BigInt::one();
    let mut total = 0usize;
    for &k in ks {
        total += k;
        acc *= binomial(total, k);
    }
    acc
}

/// Rising factorial `x(x+1)...(x+n-1)`; the empty product is 1.
pub fn rising_factorial(x: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..n {
        acc *= &(x + &Rational::from_int(i as i64));
    }
    acc
}

/// Falling factorial `x(x-1)...(x-n+1)`; the empty product is 1.
pub fn falling_factorial(x: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..n {
        acc *= &(x - &Rational::from_int(i as i64));
    }
    acc
}

/// Generalized binomial `C(x, m) = x^{m↓} / m!` with a real (here rational)
/// upper index and an integer lower one.
pub fn gen_binomial(x: &Rational, m: usize) -> Rational {
    falling_factorial(x, m) / Rational::from_bigint(factorial(m))
}

/// Row `n` of the r-Stirling cycle triangle: `⟦n 0⟧_r .. ⟦n n⟧_r`.
///
/// Recurrence: `⟦n k⟧_r = (n+r-1)·⟦n-1 k⟧_r + ⟦n-1 k-1⟧_r`, `⟦0 0⟧_r = 1`.
pub fn r_stirling1_row(n: usize, r: &Rational) -> Result<Vec<Rational>> {
    check_rows(n)?;
    let mut row = vec![Rational::one()];
    for m in 1..=n {
        let factor = r + &Rational::from_int(m as i64 - 1);
        let mut next = vec![Rational::zero(); m + 1];
        for (k, v) in row.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            next[k] += &(v * &factor);
            next[k + 1] += v;
        }
        row = next;
    }
    Ok(row)
}

/// Row `n` of the r-Stirling partition triangle: `{n 0}_r .. {n n}_r`.
///
/// Recurrence: `{n k}_r = {n-1 k-1}_r + (k+r)·{n-1 k}_r`, `{0 0}_r = 1`.
pub fn r_stirling2_row(n: usize, r: &Rational) -> Result<Vec<Rational>> {
    check_rows(n)?;
    let mut row = vec![Rational::one()];
    for m in 1..=n {
        let mut next = vec![Rational::zero(); m + 1];
        for (k, v) in row.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            next[k] += &(v * &(r + &Rational::from_int(k as i64)));
            next[k + 1] += v;
        }
        row = next;
    }
    Ok(row)
}

/// r-Stirling number of the first kind `⟦n k⟧_r`; 0 outside `k ∈ {0..n}`.
pub fn r_stirling1(n: usize, k: i64, r: &Rational) -> Result<Rational> {
    if k < 0 || k as usize > n {
        return Ok(Rational::zero());
    }
    Ok(r_stirling1_row(n, r)?.swap_remove(k as usize))
}

/// r-Stirling number of the second kind `{n k}_r`; 0 outside `k ∈ {0..n}`.
pub fn r_stirling2(n: usize, k: i64, r: &Rational) -> Result<Rational> {
    if k < 0 || k as usize > n {
        return Ok(Rational::zero());
    }
    Ok(r_stirling2_row(n, r)?.swap_remove(k as usize))
}

pub fn stirling1(n: usize, k: i64) -> Result<Rational> {
    r_stirling1(n, k, &Rational::zero())
}

pub fn stirling2(n: usize, k: i64) -> Result<Rational> {
    r_stirling2(n, k, &Rational::zero())
}

/// `⟦n k⟧_r` as a polynomial in the parameter r, via
/// `⟦n k⟧_r = Σ_j ⟦n j⟧ C(j,k) r^{j-k}`.
pub fn r_stirling1_poly_in_r(n: usize, k: usize) -> Result<Polynomial> {
    let base = r_stirling1_row(n, &Rational::zero())?;
    let mut coeffs = vec![Rational::zero(); n.saturating_sub(k) + 1];
    for (j, v) in base.iter().enumerate().skip(k) {
        coeffs[j - k] = v * &Rational::from_bigint(binomial(j, k));
    }
    Ok(Polynomial::from_coeffs(coeffs))
}

/// `{n k}_r` as a polynomial in the parameter r, via
/// `{n k}_r = Σ_j C(n,j) {j k} r^{n-j}`.
pub fn r_stirling2_poly_in_r(n: usize, k: usize) -> Result<Polynomial> {
    let mut coeffs = vec![Rational::zero(); n.saturating_sub(k) + 1];
    for j in k..=n {
        let s = stirling2(j, k as i64)?;
        coeffs[n - j] = s * Rational::from_bigint(binomial(n, j));
    }
    Ok(Polynomial::from_coeffs(coeffs))
}

/// Multinomial Stirling cycle number `⟦n; k_1..k_d⟧`;
/// 0 when some `k_j < 0` or `Σ k_j > n`, and `⟦0; 0..0⟧ = 1`.
pub fn multinomial_stirling1(n: usize, ks: &[i64]) -> Result<Rational> {
    multinomial_stirling(n, ks, stirling1)
}

/// Multinomial Stirling partition number `{n; k_1..k_d}`.
pub fn multinomial_stirling2(n: usize, ks: &[i64]) -> Result<Rational> {
    multinomial_stirling(n, ks, stirling2)
}

fn multinomial_stirling(
    n: usize,
    ks: &[i64],
    base: impl Fn(usize, i64) -> Result<Rational>,
) -> Result<Rational> {
    if ks.iter().any(|&k| k < 0) {
        return Ok(Rational::zero());
    }
    let total: i64 = ks.iter().sum();
    if total as usize > n {
        return Ok(Rational::zero());
    }
    let sizes: Vec<usize> = ks.iter().map(|&k| k as usize).collect();
    Ok(base(n, total)? * Rational::from_bigint(multinomial_coefficient(&sizes)))
}

/// r-Lah number `L(n,k)_r = C(n+2r-1, k+2r-1) · n!/k!`, with the generalized
/// binomial read as `(n+2r-1)^{(n-k)↓} / (n-k)!` (the two indices differ by
/// the integer `n-k`). 0 outside `k ∈ {0..n}`.
pub fn r_lah(n: usize, k: i64, r: &Rational) -> Rational {
    if k < 0 || k as usize > n {
        return Rational::zero();
    }
    let k = k as usize;
    let two = Rational::from_int(2);
    let upper = Rational::from_int(n as i64) + &two * r - Rational::one();
    gen_binomial(&upper, n - k)
        * Rational::from_big_ratio(factorial(n), factorial(k)).expect("nonzero factorial")
}

/// Eulerian number `⟨n k⟩` with `⟨n 0⟩ = 1` and `⟨n n⟩ = 0` for `n ≥ 1`.
pub fn eulerian(n: usize, k: i64) -> Result<Rational> {
    if n == 0 {
        return Ok(if k == 0 { Rational::one() } else { Rational::zero() });
    }
    gen_eulerian(n as i64 - 1 - k, k, &Rational::one(), &Rational::one())
}

/// Generalized Eulerian number `A(r,s|α,β)` of Carlitz–Scoville:
/// `A(r,s) = (r+β)A(r,s-1) + (s+α)A(r-1,s)`, `A(0,0) = 1`, zero when an index
/// is negative. The classic Eulerian numbers are `⟨n k⟩ = A(n-1-k, k | 1, 1)`.
pub fn gen_eulerian(r_idx: i64, s_idx: i64, alpha: &Rational, beta: &Rational) -> Result<Rational> {
    if r_idx < 0 || s_idx < 0 {
        return Ok(Rational::zero());
    }
    let (ri, si) = (r_idx as usize, s_idx as usize);
    check_rows(ri + si)?;
    // Rectangular fill; grid[i][j] = A(i, j | alpha, beta).
    let mut prev = vec![Rational::zero(); si + 1];
    prev[0] = Rational::one();
    for j in 1..=si {
        prev[j] = &prev[j - 1] * &(beta + &Rational::zero());
    }
    // Row i=0: A(0, j) = β·A(0, j-1) = β^j.
    if ri == 0 {
        return Ok(prev.swap_remove(si));
    }
    for i in 1..=ri {
        let mut cur = vec![Rational::zero(); si + 1];
        cur[0] = &prev[0] * alpha;
        for j in 1..=si {
            let a = &(&Rational::from_int(i as i64) + beta) * &cur[j - 1];
            let b = &(&Rational::from_int(j as i64) + alpha) * &prev[j];
            cur[j] = a + b;
        }
        prev = cur;
    }
    Ok(prev.swap_remove(si))
}

/// r-Touchard polynomial `T_{n,r}(z) = Σ_k {n k}_r z^k`.
pub fn r_touchard(n: usize, r: &Rational, z: &Rational) -> Result<Rational> {
    let row = r_stirling2_row(n, r)?;
    let mut acc = Rational::zero();
    let mut zp = Rational::one();
    for v in row {
        acc += &(&v * &zp);
        zp *= z;
    }
    Ok(acc)
}

/// r-Bell number `𝔅_{n,r} = T_{n,r}(1)`.
pub fn r_bell(n: usize, r: &Rational) -> Result<Rational> {
    r_touchard(n, r, &Rational::one())
}

/// n-th harmonic number `H_n`; `H_0 = 0`.
pub fn harmonic(n: usize) -> Rational {
    let mut acc = Rational::zero();
    for m in 1..=n {
        acc += &Rational::from_ratio(1, m as i64);
    }
    acc
}

/// `H_n^{(r,s)} = Σ_{m=1}^n s/(r+s+m-1)`, with `H_0^{(r,s)} = 0`.
pub fn harmonic_rs(n: usize, r: &Rational, s: &Rational) -> Result<Rational> {
    if r.is_negative() || s.is_negative() {
        return Err(Error::invalid("harmonic_rs requires r, s ≥ 0"));
    }
    if s.is_zero() {
        return Ok(Rational::zero());
    }
    if (r + s).is_zero() {
        return Err(Error::invalid("harmonic_rs requires r+s > 0 when s > 0"));
    }
    let mut acc = Rational::zero();
    for m in 1..=n {
        acc += &(s / &(r + s + Rational::from_int(m as i64 - 1)));
    }
    Ok(acc)
}

/// Which vertical EGF to expand in [`egf_coefficient_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EgfFamily {
    Stirling1,
    Stirling2,
}

/// Expands the vertical exponential generating function of the r-Stirling
/// numbers as a truncated series and returns `n!·[x^n]` for `n = 0..=order`.
///
/// First kind: `(1/k!) (log(1/(1-x)))^k (1-x)^{-r}`;
/// second kind: `(1/k!) (e^x-1)^k e^{rx}`.
pub fn egf_coefficient_check(
    family: EgfFamily,
    k: usize,
    r: &Rational,
    order: usize,
) -> Result<Vec<Rational>> {
    if order < k {
        return Err(Error::invalid(format!("order {order} < k {k}")));
    }
    let series: PowerSeries = match family {
        EgfFamily::Stirling1 => series::log_inv_one_minus(order)
            .pow(k)
            .mul(&series::neg_binomial_series(r, order)),
        EgfFamily::Stirling2 => series::exp_minus_one(order)
            .pow(k)
            .mul(&series::exp_scaled(r, order)),
    };
    let k_fact = Rational::from_bigint(factorial(k));
    let mut out = Vec::with_capacity(order + 1);
    let mut n_fact = Rational::one();
    for n in 0..=order {
        if n > 0 {
            n_fact *= &Rational::from_int(n as i64);
        }
        out.push(&(&series.coeff(n) * &n_fact) / &k_fact);
    }
    Ok(out)
}

/// Tagged triangle family for [`TriangleCache`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriangleFamily {
    Stirling1,
    Stirling2,
    Lah,
    Eulerian,
    GenEulerian,
}

impl TriangleFamily {
    fn param_count(self) -> usize {
        match self {
            TriangleFamily::Eulerian => 0,
            TriangleFamily::GenEulerian => 2,
            _ => 1,
        }
    }
}

/// Dense row-monotone cache of a combinatorial triangle, keyed by the exact
/// parameter tuple. Row `n` is computed only from row `n-1`; rows beyond
/// [`MAX_EXACT_ROWS`] are refused.
///
/// For `GenEulerian` the rows run along diagonals: row `m` stores
/// `A(m-s, s | α, β)` for `s = 0..=m`.
pub struct TriangleCache {
    family: TriangleFamily,
    params: Vec<Rational>,
    rows: Vec<Vec<Rational>>,
}

impl TriangleCache {
    pub fn new(family: TriangleFamily, params: Vec<Rational>) -> Result<Self> {
        if params.len() != family.param_count() {
            return Err(Error::invalid(format!(
                "{:?} triangle takes {} parameter(s), got {}",
                family,
                family.param_count(),
                params.len()
            )));
        }
        Ok(TriangleCache {
            family,
            params,
            rows: vec![vec![Rational::one()]],
        })
    }

    pub fn family(&self) -> TriangleFamily {
        self.family
    }

    fn next_row(&self) -> Vec<Rational> {
        let prev = self.rows.last().expect("rows never empty");
        let m = self.rows.len();
        let mut next = vec![Rational::zero(); m + 1];
        match self.family {
            TriangleFamily::Stirling1 => {
                let r = &self.params[0];
                let factor = r + &Rational::from_int(m as i64 - 1);
                for (k, v) in prev.iter().enumerate() {
                    next[k] += &(v * &factor);
                    next[k + 1] += v;
                }
            }
            TriangleFamily::Stirling2 => {
                let r = &self.params[0];
                for (k, v) in prev.iter().enumerate() {
                    next[k] += &(v * &(r + &Rational::from_int(k as i64)));
                    next[k + 1] += v;
                }
            }
            TriangleFamily::Lah => {
                // L(n,k)_r = L(n-1,k-1)_r + (n-1+k+2r) L(n-1,k)_r
                let r = &self.params[0];
                let two_r = &Rational::from_int(2) * r;
                for (k, v) in prev.iter().enumerate() {
                    let factor = Rational::from_int((m - 1 + k) as i64) + &two_r;
                    next[k] += &(v * &factor);
                    next[k + 1] += v;
                }
            }
            TriangleFamily::Eulerian => {
                // ⟨n k⟩ = (n-k)⟨n-1 k-1⟩ + (k+1)⟨n-1 k⟩
                for (k, v) in prev.iter().enumerate() {
                    next[k] += &(v * &Rational::from_int(k as i64 + 1));
                    next[k + 1] += &(v * &Rational::from_int((m - k - 1) as i64));
                }
            }
            TriangleFamily::GenEulerian => {
                // Diagonal fill: entry s of row m is A(m-s, s | α, β).
                let (alpha, beta) = (&self.params[0], &self.params[1]);
                for (s, v) in prev.iter().enumerate() {
                    // prev[s] = A(m-1-s, s); contributes to A(m-s, s) with
                    // weight (s+α) and to A(m-1-s, s+1) with weight (m-1-s+β).
                    next[s] += &(v * &(&Rational::from_int(s as i64) + alpha));
                    next[s + 1] += &(v * &(&Rational::from_int((m - 1 - s) as i64) + beta));
                }
            }
        }
        next
    }

    pub fn ensure_rows(&mut self, n: usize) -> Result<()> {
        check_rows(n)?;
        while self.rows.len() <= n {
            self.rows.push(self.next_row());
        }
        Ok(())
    }

    pub fn row(&mut self, n: usize) -> Result<&[Rational]> {
        self.ensure_rows(n)?;
        Ok(&self.rows[n])
    }

    /// Entry `(n, k)`; implicit zeros outside `0 ≤ k ≤ n`.
    pub fn get(&mut self, n: usize, k: i64) -> Result<Rational> {
        if k < 0 || k as usize > n {
            return Ok(Rational::zero());
        }
        self.ensure_rows(n)?;
        Ok(self.rows[n][k as usize].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    /// Independent oracle for `{n k}_r` from the finite-difference definition:
    /// `(1/k!) Σ_{j=0}^k (-1)^{k-j} C(k,j) (r+j)^n`.
    fn stirling2_finite_difference(n: usize, k: usize, r: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for j in 0..=k {
            let sign = if (k - j) % 2 == 0 { 1 } else { -1 };
            let base = r + &rat(j as i64);
            acc += &(Rational::from_bigint(binomial(k, j) * BigInt::from(sign))
                * base.pow(n as i32));
        }
        acc / Rational::from_bigint(factorial(k))
    }

    /// Independent oracle for `⟦n k⟧_r`: coefficient of `x^k` in
    /// `(x+r)(x+r+1)...(x+r+n-1)`.
    fn stirling1_product_expansion(n: usize, k: usize, r: &Rational) -> Rational {
        Polynomial::rising_factorial_in_x(r, n).coeff(k)
    }

    fn r_grid() -> Vec<Rational> {
        vec![rat(0), ratio(1, 2), rat(1), rat(2), ratio(7, 3)]
    }

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(3, 5), BigInt::from(0));
        assert_eq!(multinomial_coefficient(&[3, 4, 3]), BigInt::from(4200));
    }

    #[test]
    fn rising_and_falling_factorials() {
        assert_eq!(rising_factorial(&rat(1), 3), rat(6));
        assert_eq!(rising_factorial(&rat(0), 0), rat(1));
        assert_eq!(rising_factorial(&ratio(1, 2), 2), ratio(3, 4));
        assert_eq!(falling_factorial(&rat(3), 2), rat(6));
        assert_eq!(falling_factorial(&rat(2), 3), rat(0));
        assert_eq!(falling_factorial(&ratio(1, 2), 2), ratio(-1, 4));
    }

    #[test]
    fn gen_binomial_values() {
        assert_eq!(gen_binomial(&rat(4), 2), rat(6));
        assert_eq!(gen_binomial(&rat(0), 0), rat(1));
        assert_eq!(gen_binomial(&ratio(3, 2), 2), ratio(3, 8));
    }

    #[test]
    fn r_stirling1_examples() {
        // ⟦2 0⟧_r = r(r+1) on a grid of r.
        for r in r_grid() {
            let expect = &r * &(&r + &rat(1));
            assert_eq!(r_stirling1(2, 0, &r).unwrap(), expect);
        }
        assert_eq!(r_stirling1(2, 1, &rat(1)).unwrap(), rat(3));
        assert_eq!(r_stirling1(3, 3, &ratio(7, 3)).unwrap(), rat(1));
        assert_eq!(r_stirling1(3, -1, &rat(1)).unwrap(), rat(0));
        assert_eq!(r_stirling1(3, 4, &rat(1)).unwrap(), rat(0));
    }

    #[test]
    fn r_stirling2_examples() {
        for r in r_grid() {
            assert_eq!(r_stirling2(2, 0, &r).unwrap(), r.pow(2));
        }
        assert_eq!(r_stirling2(2, 1, &ratio(1, 2)).unwrap(), rat(2));
        assert_eq!(r_stirling2(5, 5, &rat(0)).unwrap(), rat(1));
    }

    #[test]
    fn triangles_match_independent_oracles() {
        for r in r_grid() {
            for n in 0..=12 {
                for k in 0..=n {
                    assert_eq!(
                        r_stirling1(n, k as i64, &r).unwrap(),
                        stirling1_product_expansion(n, k, &r),
                        "stirling1 n={n} k={k} r={r}"
                    );
                    assert_eq!(
                        r_stirling2(n, k as i64, &r).unwrap(),
                        stirling2_finite_difference(n, k, &r),
                        "stirling2 n={n} k={k} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn rising_factorial_expansions_both_kinds() {
        // (x+r)^{n↑} = Σ_k ⟦n k⟧_r x^k and (x+r)^n = Σ_k {n k}_r x^{k↓},
        // coefficient-by-coefficient as polynomials in x.
        for r in r_grid() {
            for n in 0..=12 {
                let lhs1 = Polynomial::rising_factorial_in_x(&r, n);
                let mut rhs1 = Polynomial::zero();
                let row1 = r_stirling1_row(n, &r).unwrap();
                for (k, c) in row1.iter().enumerate() {
                    rhs1 = &rhs1 + &Polynomial::monomial(c.clone(), k);
                }
                assert_eq!(lhs1, rhs1, "first kind n={n} r={r}");

                let xr = Polynomial::from_coeffs(vec![r.clone(), rat(1)]);
                let mut pow = Polynomial::one();
                for _ in 0..n {
                    pow = &pow * &xr;
                }
                let row2 = r_stirling2_row(n, &r).unwrap();
                let mut rhs2 = Polynomial::zero();
                for (k, c) in row2.iter().enumerate() {
                    let fall = Polynomial::falling_factorial_in_x(&rat(0), k);
                    rhs2 = &rhs2 + &fall.scale(c);
                }
                assert_eq!(pow, rhs2, "second kind n={n} r={r}");
            }
        }
    }

    #[test]
    fn polynomial_in_r_expansions() {
        // eq-style expansions in the parameter: both closed sums and the
        // symbolic polynomials agree with direct evaluation on the grid.
        for n in 0..=12usize {
            for k in 0..=n {
                let p1 = r_stirling1_poly_in_r(n, k).unwrap();
                let p2 = r_stirling2_poly_in_r(n, k).unwrap();
                for r in r_grid() {
                    assert_eq!(p1.eval(&r), r_stirling1(n, k as i64, &r).unwrap());
                    assert_eq!(p2.eval(&r), r_stirling2(n, k as i64, &r).unwrap());
                    // Second forms of eq-style sums.
                    let mut alt1 = Rational::zero();
                    let mut alt2 = Rational::zero();
                    for j in k..=n {
                        alt1 += &(stirling1(j, k as i64).unwrap()
                            * Rational::from_bigint(binomial(n, j))
                            * rising_factorial(&r, n - j));
                        alt2 += &(stirling2(n, j as i64).unwrap()
                            * Rational::from_bigint(binomial(j, k))
                            * falling_factorial(&r, j - k));
                    }
                    assert_eq!(alt1, r_stirling1(n, k as i64, &r).unwrap());
                    assert_eq!(alt2, r_stirling2(n, k as i64, &r).unwrap());
                }
            }
        }
    }

    #[test]
    fn multinomial_stirling_examples() {
        assert_eq!(multinomial_stirling1(3, &[1, 1]).unwrap(), rat(6));
        assert_eq!(multinomial_stirling1(2, &[0, 0]).unwrap(), rat(0));
        assert_eq!(multinomial_stirling1(0, &[0, 0]).unwrap(), rat(1));
        assert_eq!(multinomial_stirling1(3, &[-1, 1]).unwrap(), rat(0));
        assert_eq!(multinomial_stirling1(3, &[2, 2]).unwrap(), rat(0));
        assert_eq!(multinomial_stirling2(3, &[1, 1]).unwrap(), rat(6));
        // Reduction to a single color.
        for n in 0..=8 {
            for k in 0..=n {
                assert_eq!(
                    multinomial_stirling1(n, &[k as i64]).unwrap(),
                    stirling1(n, k as i64).unwrap()
                );
            }
        }
    }

    #[test]
    fn multinomial_generating_functions_at_rational_points() {
        // (x1+..+xd)^{n↑} = Σ ⟦n;k⟧ Π x^k and (x1+..+xd)^n = Σ {n;k} Π x^{k↓}
        // evaluated at rational points.
        let points = [
            vec![ratio(1, 2), ratio(3, 2)],
            vec![rat(1), rat(2)],
            vec![ratio(2, 3), rat(1), ratio(1, 5)],
        ];
        for xs in &points {
            let total: Rational = xs.iter().sum();
            for n in 0..=7usize {
                let mut sum1 = Rational::zero();
                let mut sum2 = Rational::zero();
                for ks in all_tuples(xs.len(), n) {
                    let ks_i: Vec<i64> = ks.iter().map(|&k| k as i64).collect();
                    let c1 = multinomial_stirling1(n, &ks_i).unwrap();
                    let c2 = multinomial_stirling2(n, &ks_i).unwrap();
                    let mut m1 = Rational::one();
                    let mut m2 = Rational::one();
                    for (x, &k) in xs.iter().zip(&ks) {
                        m1 *= &x.pow(k as i32);
                        m2 *= &falling_factorial(x, k);
                    }
                    sum1 += &(&c1 * &m1);
                    sum2 += &(&c2 * &m2);
                }
                assert_eq!(sum1, rising_factorial(&total, n), "n={n}");
                assert_eq!(sum2, total.pow(n as i32), "n={n}");
            }
        }
    }

    fn all_tuples(d: usize, max_sum: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..d {
            let mut next = Vec::new();
            for t in &out {
                let used: usize = t.iter().sum();
                for k in 0..=(max_sum - used) {
                    let mut t2 = t.clone();
                    t2.push(k);
                    next.push(t2);
                }
            }
            out = next;
        }
        out
    }

    #[test]
    fn r_lah_examples_and_cross_check() {
        assert_eq!(r_lah(2, 1, &rat(0)), rat(2));
        assert_eq!(r_lah(3, 3, &ratio(5, 2)), rat(1));
        assert_eq!(r_lah(2, 1, &rat(1)), rat(6));
        assert_eq!(r_lah(2, 3, &rat(1)), rat(0));
        // L(n,k)_r = Σ_j ⟦n j⟧_r {j k}_r exactly.
        for r in r_grid() {
            for n in 0..=12usize {
                for k in 0..=n {
                    let mut sum = Rational::zero();
                    for j in k..=n {
                        sum += &(r_stirling1(n, j as i64, &r).unwrap()
                            * r_stirling2(j, k as i64, &r).unwrap());
                    }
                    assert_eq!(r_lah(n, k as i64, &r), sum, "n={n} k={k} r={r}");
                }
            }
        }
    }

    #[test]
    fn r_lah_mixed_parameters() {
        // L(n,k)_{(r+s)/2} = Σ_j ⟦n j⟧_r {j k}_s on a 5x5 rational grid.
        let grid = r_grid();
        for r in &grid {
            for s in &grid {
                let mid = &(r + s) / &rat(2);
                for n in 0..=12usize {
                    for k in 0..=n {
                        let mut sum = Rational::zero();
                        for j in k..=n {
                            sum += &(r_stirling1(n, j as i64, r).unwrap()
                                * r_stirling2(j, k as i64, s).unwrap());
                        }
                        assert_eq!(r_lah(n, k as i64, &mid), sum, "n={n} k={k} r={r} s={s}");
                    }
                }
            }
        }
    }

    #[test]
    fn lah_rising_falling_identity() {
        // (x+r)^{n↑} = Σ_k L(n,k)_r (x-r)^{k↓} as polynomials in x.
        for r in r_grid() {
            for n in 0..=12usize {
                let lhs = Polynomial::rising_factorial_in_x(&r, n);
                let mut rhs = Polynomial::zero();
                for k in 0..=n {
                    let fall = Polynomial::falling_factorial_in_x(&(-&r), k);
                    rhs = &rhs + &fall.scale(&r_lah(n, k as i64, &r));
                }
                assert_eq!(lhs, rhs, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn eulerian_examples() {
        assert_eq!(eulerian(3, 1).unwrap(), rat(4));
        assert_eq!(eulerian(5, 0).unwrap(), rat(1));
        assert_eq!(eulerian(4, 4).unwrap(), rat(0));
        // Row sums are n!.
        for n in 1..=8usize {
            let mut sum = Rational::zero();
            for k in 0..n {
                sum += &eulerian(n, k as i64).unwrap();
            }
            assert_eq!(sum, Rational::from_bigint(factorial(n)));
        }
    }

    #[test]
    fn gen_eulerian_examples() {
        assert_eq!(gen_eulerian(1, 1, &rat(1), &rat(1)).unwrap(), rat(4));
        assert_eq!(gen_eulerian(0, 0, &ratio(3, 7), &rat(5)).unwrap(), rat(1));
        assert_eq!(gen_eulerian(2, 0, &rat(0), &rat(3)).unwrap(), rat(0));
        assert_eq!(gen_eulerian(-1, 2, &rat(1), &rat(1)).unwrap(), rat(0));
        // A(r,s|1,1) = ⟨r+s+1, s⟩ for r+s ≤ 12.
        for total in 0..=12i64 {
            for s in 0..=total {
                assert_eq!(
                    gen_eulerian(total - s, s, &rat(1), &rat(1)).unwrap(),
                    eulerian(total as usize + 1, s).unwrap(),
                    "r={} s={}",
                    total - s,
                    s
                );
            }
        }
    }

    #[test]
    fn touchard_examples() {
        assert_eq!(r_touchard(2, &rat(0), &rat(1)).unwrap(), rat(2));
        assert_eq!(r_touchard(0, &ratio(7, 2), &rat(9)).unwrap(), rat(1));
        assert_eq!(r_touchard(2, &rat(1), &rat(1)).unwrap(), rat(5));
        // Bell numbers via r=0.
        let bell = [1i64, 1, 2, 5, 15, 52, 203, 877];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(r_bell(n, &rat(0)).unwrap(), rat(b));
        }
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic(0), rat(0));
        assert_eq!(harmonic(3), ratio(11, 6));
        assert_eq!(harmonic_rs(0, &rat(3), &rat(2)).unwrap(), rat(0));
        assert_eq!(harmonic_rs(2, &rat(1), &rat(1)).unwrap(), ratio(5, 6));
        assert_eq!(harmonic_rs(4, &rat(1), &rat(0)).unwrap(), rat(0));
        assert!(harmonic_rs(2, &rat(0), &rat(0)).is_ok());
        assert!(harmonic_rs(2, &rat(-1), &rat(1)).is_err());
    }

    #[test]
    fn harmonic_rs_log_estimate() {
        // |H_n^{(r,s)} - s log((r+s+(n-1)_+)/(r+s))| ≤ s/(r+s), in floats.
        for (r, s) in [(rat(1), rat(1)), (ratio(1, 2), ratio(3, 2)), (rat(0), rat(2))] {
            let rs = (&r + &s).to_f64();
            for n in 0..=200usize {
                let h = harmonic_rs(n, &r, &s).unwrap().to_f64();
                let shift = if n >= 1 { (n - 1) as f64 } else { 0.0 };
                let est = s.to_f64() * ((rs + shift) / rs).ln();
                assert!(
                    (h - est).abs() <= s.to_f64() / rs + 1e-12,
                    "n={n} r={r} s={s}: |{h} - {est}|"
                );
            }
        }
    }

    #[test]
    fn egf_expansions_match_triangles() {
        assert_eq!(
            egf_coefficient_check(EgfFamily::Stirling2, 0, &ratio(2, 3), 2).unwrap(),
            vec![rat(1), ratio(2, 3), ratio(4, 9)]
        );
        assert_eq!(
            egf_coefficient_check(EgfFamily::Stirling1, 1, &rat(0), 3).unwrap(),
            vec![rat(0), rat(1), rat(1), rat(2)]
        );
        assert_eq!(
            egf_coefficient_check(EgfFamily::Stirling2, 1, &ratio(1, 2), 2).unwrap(),
            vec![rat(0), rat(1), rat(2)]
        );
        assert!(egf_coefficient_check(EgfFamily::Stirling1, 3, &rat(0), 2).is_err());
        for r in r_grid() {
            for k in 0..=4usize {
                let c1 = egf_coefficient_check(EgfFamily::Stirling1, k, &r, 10).unwrap();
                let c2 = egf_coefficient_check(EgfFamily::Stirling2, k, &r, 10).unwrap();
                for n in 0..=10usize {
                    assert_eq!(c1[n], r_stirling1(n, k as i64, &r).unwrap());
                    assert_eq!(c2[n], r_stirling2(n, k as i64, &r).unwrap());
                }
            }
        }
    }

    #[test]
    fn orthogonality_sums_vanish() {
        // Σ_j ⟦n j⟧_r {j k}_s (-m)^j = 0 for integer r,s and m < (n+r)/(k+s),
        // restricted to where ((1-x)^m - 1)^k (1-x)^{sm-r} is a polynomial
        // (k ≥ 1 with m = 0, or sm ≥ r) so its degree argument applies.
        let mut checked = 0usize;
        for r in 0..=3i64 {
            for s in 0..=3i64 {
                for n in 1..=10usize {
                    for k in 0..=n {
                        if k as i64 + s == 0 {
                            continue;
                        }
                        let mut m = 0i64;
                        while m * (k as i64 + s) < n as i64 + r {
                            let polynomial_case = (m == 0 && k >= 1) || s * m >= r;
                            if polynomial_case {
                                let mut sum = Rational::zero();
                                for j in k..=n {
                                    sum += &(r_stirling1(n, j as i64, &rat(r)).unwrap()
                                        * r_stirling2(j, k as i64, &rat(s)).unwrap()
                                        * rat(-m).pow(j as i32));
                                }
                                assert!(sum.is_zero(), "n={n} k={k} r={r} s={s} m={m}: {sum}");
                                checked += 1;
                            }
                            m += 1;
                        }
                    }
                }
            }
        }
        assert!(checked > 500, "grid unexpectedly small: {checked}");
    }

    #[test]
    fn dobinski_truncation_bound() {
        // Partial sums of Σ_m (r+m)^n θ^m / m! approach e^θ T_{n,r}(θ) and the
        // truncation error is within e^θ θ^M (r+M)^n / M!.
        for (n, r, theta) in [(5usize, rat(1), rat(1)), (8, ratio(1, 2), rat(2))] {
            let target = theta.to_f64().exp() * r_touchard(n, &r, &theta).unwrap().to_f64();
            let mut partial = Rational::zero();
            let mut term_m = Rational::one(); // θ^m / m!
            let mut prev_gap = f64::INFINITY;
            for m in 0..=60usize {
                if m > 0 {
                    term_m = &term_m * &theta / rat(m as i64);
                }
                let base = &r + &rat(m as i64);
                partial += &(base.pow(n as i32) * term_m.clone());
                let gap = (target - partial.to_f64()).abs();
                if m >= 30 {
                    let bound = theta.to_f64().exp() * term_m.to_f64() * base.to_f64().powi(n as i32);
                    assert!(gap <= bound + 1e-9, "m={m}: gap {gap} > bound {bound}");
                    assert!(gap <= prev_gap + 1e-9);
                    prev_gap = gap;
                }
            }
            assert!(prev_gap < 1e-6);
        }
    }

    #[test]
    fn triangle_cache_matches_functions_and_guards() {
        let mut c = TriangleCache::new(TriangleFamily::Stirling1, vec![ratio(1, 2)]).unwrap();
        for n in 0..=10usize {
            for k in 0..=n {
                assert_eq!(
                    c.get(n, k as i64).unwrap(),
                    r_stirling1(n, k as i64, &ratio(1, 2)).unwrap()
                );
            }
        }
        let mut lah = TriangleCache::new(TriangleFamily::Lah, vec![ratio(3, 2)]).unwrap();
        for n in 0..=10usize {
            for k in 0..=n {
                assert_eq!(lah.get(n, k as i64).unwrap(), r_lah(n, k as i64, &ratio(3, 2)));
            }
        }
        let mut eul = TriangleCache::new(TriangleFamily::GenEulerian, vec![rat(0), rat(2)]).unwrap();
        // Row m entry s is A(m-s, s | 0, 2).
        assert_eq!(eul.get(3, 1).unwrap(), gen_eulerian(2, 1, &rat(0), &rat(2)).unwrap());
        assert!(c.ensure_rows(MAX_EXACT_ROWS + 1).is_err());
        assert!(TriangleCache::new(TriangleFamily::Eulerian, vec![rat(1)]).is_err());
    }
}
