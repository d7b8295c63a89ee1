//! Seeded, reproducible samplers for every random structure: the colored
//! Feller coupling and Chinese restaurant process, r-Ewens permutations,
//! Hoppe forests and r-Hoppe trees, urn and Gibbs (Stam-randomized)
//! incomplete partitions, r-compositions by three couplings, the three
//! (r,s)-Lah sampling routes, and the Broder deletion maps.
//!
//! Draw order is part of the reproducibility contract and is documented per
//! sampler. Weighted discrete choices consume exactly one uniform; inverse-cdf
//! sampling over exact pmfs compares a raw `u64` against `floor(cdf · 2^64)`
//! thresholds, with boundary hits resolving to the lower support point.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::pmf::{cdf_thresholds, FinitePmf};
use crate::rational::Rational;
use crate::rng::RngState;
use crate::structures::{
    ColoredPermutation, Cycle, ForestParent, HoppeForest, IncompleteComposition,
    IncompletePartition, IncompletePermutation,
};

/// Exact-threshold inverse-cdf sampler: value `i` is returned for the
/// smallest `i` with `U ≤ T_i`, `U` a raw `u64` draw and
/// `T_i = floor(cdf_i · 2^64)`.
pub struct InverseCdf {
    thresholds: Vec<u128>,
    values: Vec<i64>,
}

impl InverseCdf {
    pub fn from_pmf(pmf: &FinitePmf) -> Self {
        InverseCdf {
            thresholds: pmf.cdf_thresholds_u64(),
            values: pmf.support().to_vec(),
        }
    }

    pub fn from_weights(values: Vec<i64>, weights: &[Rational]) -> Self {
        assert_eq!(values.len(), weights.len());
        InverseCdf {
            thresholds: cdf_thresholds(weights),
            values,
        }
    }

    pub fn sample(&self, rng: &mut RngState) -> i64 {
        let u = rng.next_u64() as u128;
        let idx = self.thresholds.partition_point(|&t| t < u);
        self.values[idx.min(self.values.len() - 1)]
    }
}

fn validate_weights(thetas: &[Rational]) -> Result<(Vec<f64>, f64)> {
    if thetas.is_empty() {
        return Err(Error::invalid("need at least one weight"));
    }
    for t in thetas {
        if t.is_negative() {
            return Err(Error::invalid("weights must be ≥ 0"));
        }
    }
    let total: Rational = thetas.iter().sum();
    if !total.is_positive() {
        return Err(Error::invalid("total weight must be > 0"));
    }
    let cum: Vec<f64> = thetas
        .iter()
        .scan(Rational::zero(), |acc, t| {
            *acc += t;
            Some(acc.to_f64())
        })
        .collect();
    Ok((cum, total.to_f64()))
}

/// Colored Feller coupling. Builds a colored permutation in ordered cycle
/// notation from the choice variables `D_n, .., D_1`; `D_i` consumes one
/// uniform scaled to `θ + i - 1`, ordered `[close_1..close_d | unused labels
/// ascending]`. A close paints the current cycle and opens the next with the
/// smallest unused label.
pub fn feller_colored(n: usize, thetas: &[Rational], rng: &mut RngState) -> Result<ColoredPermutation> {
    let (close_cum, theta) = validate_weights(thetas)?;
    if n == 0 {
        return Ok(ColoredPermutation { n: 0, cycles: vec![] });
    }
    let mut unused: Vec<u32> = (2..=n as u32).collect();
    let mut cycles = Vec::new();
    let mut current = vec![1u32];
    for i in (1..=n).rev() {
        let m = i - 1;
        let scaled = rng.uniform() * (theta + m as f64);
        match close_cum.iter().position(|&c| scaled < c) {
            Some(color) => {
                cycles.push(Cycle {
                    color: color as u32 + 1,
                    labels: std::mem::take(&mut current),
                });
                if i > 1 {
                    current.push(unused.remove(0));
                }
            }
            None => {
                let idx = (((scaled - theta).max(0.0)) as usize).min(m - 1);
                current.push(unused.remove(idx));
            }
        }
    }
    debug_assert!(current.is_empty() && unused.is_empty());
    let perm = ColoredPermutation { n: n as u32, cycles };
    debug_assert!(perm.validate(thetas.len() as u32).is_ok());
    Ok(perm)
}

/// Cycle counts by (color, length ≤ max_len) under the same `D_i` law as
/// [`feller_colored`], without constructing labels. Used by the large-n
/// Poisson cycle-count checks.
pub fn feller_cycle_type_counts(
    n: usize,
    thetas: &[Rational],
    max_len: usize,
    rng: &mut RngState,
) -> Result<Vec<Vec<u32>>> {
    let (close_cum, theta) = validate_weights(thetas)?;
    let mut counts = vec![vec![0u32; max_len]; thetas.len()];
    if n == 0 {
        return Ok(counts);
    }
    let mut len = 1usize;
    for i in (1..=n).rev() {
        let m = i - 1;
        let scaled = rng.uniform() * (theta + m as f64);
        match close_cum.iter().position(|&c| scaled < c) {
            Some(color) => {
                if (1..=max_len).contains(&len) {
                    counts[color][len - 1] += 1;
                }
                len = 1;
            }
            None => len += 1,
        }
    }
    Ok(counts)
}

/// Multinomial Chinese restaurant process. Customer `ℓ` consumes one uniform
/// scaled to `θ + ℓ - 1`, ordered `[new table color 1..d | seat next to
/// customer 1, 2, .., ℓ-1]`; seating next to customer `i` inserts `ℓ`
/// immediately after `i` in its cycle (counterclockwise convention).
pub fn crp_colored(n: usize, thetas: &[Rational], rng: &mut RngState) -> Result<ColoredPermutation> {
    let (close_cum, theta) = validate_weights(thetas)?;
    let mut tables: Vec<Cycle> = Vec::new();
    // (table, seat) of each customer in arrival order.
    let mut pos: Vec<(usize, usize)> = Vec::with_capacity(n);
    for l in 1..=n {
        let scaled = rng.uniform() * (theta + (l - 1) as f64);
        match close_cum.iter().position(|&c| scaled < c) {
            Some(color) => {
                tables.push(Cycle {
                    color: color as u32 + 1,
                    labels: vec![l as u32],
                });
                pos.push((tables.len() - 1, 0));
            }
            None => {
                let i = (((scaled - theta).max(0.0)) as usize).min(l - 2);
                let (t, seat) = pos[i];
                tables[t].labels.insert(seat + 1, l as u32);
                for (c, p) in pos.iter_mut().enumerate() {
                    if c != i && p.0 == t && p.1 > seat {
                        p.1 += 1;
                    }
                }
                pos.push((t, seat + 1));
            }
        }
    }
    let perm = ColoredPermutation { n: n as u32, cycles: tables };
    debug_assert!(perm.validate(thetas.len() as u32).is_ok());
    Ok(perm)
}

/// r-Ewens permutation: runs [`crp_colored`] with two colors weighted
/// `(τ, r)` and discards the color-2 cycles into the red set.
pub fn r_ewens(n: usize, tau: &Rational, r: &Rational, rng: &mut RngState) -> Result<IncompletePermutation> {
    let colored = crp_colored(n, &[tau.clone(), r.clone()], rng)?;
    let cycles = colored
        .cycles
        .into_iter()
        .filter(|c| c.color == 1)
        .map(|c| c.labels)
        .collect();
    let perm = IncompletePermutation { n: n as u32, cycles };
    debug_assert!(perm.validate().is_ok());
    Ok(perm)
}

/// Multinomial Hoppe forest by sequential attachment. Node `ℓ` consumes one
/// uniform scaled to `θ + ℓ - 1`, ordered `[root 1..d | node 1, .., ℓ-1]`.
pub fn hoppe_forest(n: usize, thetas: &[Rational], rng: &mut RngState) -> Result<HoppeForest> {
    let (root_cum, theta) = validate_weights(thetas)?;
    let mut parents = Vec::with_capacity(n);
    for l in 1..=n {
        let scaled = rng.uniform() * (theta + (l - 1) as f64);
        let parent = match root_cum.iter().position(|&c| scaled < c) {
            Some(j) => ForestParent::Root(j as u32 + 1),
            None => {
                let i = (((scaled - theta).max(0.0)) as usize).min(l.saturating_sub(2));
                ForestParent::Node(i as u32 + 1)
            }
        };
        parents.push(parent);
    }
    let forest = HoppeForest { weights: thetas.to_vec(), parents };
    debug_assert!(forest.validate().is_ok());
    Ok(forest)
}

/// r-Hoppe tree: a two-root Hoppe forest with weights `(τ, r)`; returns the
/// forest together with the sorted label set `B` of the component of root 1.
pub fn r_hoppe_tree(
    n: usize,
    tau: &Rational,
    r: &Rational,
    rng: &mut RngState,
) -> Result<(HoppeForest, Vec<u32>)> {
    let forest = hoppe_forest(n, &[tau.clone(), r.clone()], rng)?;
    let comp = forest.component_of();
    let b: Vec<u32> = (1..=n as u32).filter(|&l| comp[(l - 1) as usize] == 1).collect();
    Ok((forest, b))
}

/// Urn incomplete partition: each of the `n` balls consumes one uniform
/// scaled to `N + r`, landing red below `r` and otherwise in urn
/// `1 + floor(scaled - r)`.
pub fn urn_incomplete_partition(
    n: usize,
    cap_n: usize,
    r: &Rational,
    rng: &mut RngState,
) -> Result<IncompletePartition> {
    if cap_n == 0 {
        return Err(Error::invalid("N must be ≥ 1"));
    }
    if r.is_negative() {
        return Err(Error::invalid("r must be ≥ 0"));
    }
    let rf = r.to_f64();
    let mut red = Vec::new();
    let mut urns: Vec<Vec<u32>> = vec![Vec::new(); cap_n];
    for ball in 1..=n as u32 {
        let scaled = rng.uniform() * (cap_n as f64 + rf);
        if scaled < rf {
            red.push(ball);
        } else {
            let u = (((scaled - rf).max(0.0)) as usize).min(cap_n - 1);
            urns[u].push(ball);
        }
    }
    let blocks: Vec<Vec<u32>> = urns.into_iter().filter(|b| !b.is_empty()).collect();
    let mut part = IncompletePartition { n: n as u32, red, blocks };
    part.canonicalize();
    debug_assert!(part.validate().is_ok());
    Ok(part)
}

/// Stam-randomized Gibbs r-partition sampler. The urn count `M` follows the
/// r-Dobiński law `P[M=m] ∝ (r+m)^n θ^m / m!`, truncated at the first point
/// where the remaining tail is below `2^-64` of the accumulated mass, with
/// exact rational cumulative thresholds cached per `(n, θ, r)`.
pub struct GibbsSampler {
    n: usize,
    r: Rational,
    m_cdf: InverseCdf,
}

impl GibbsSampler {
    pub fn new(n: usize, theta: &Rational, r: &Rational) -> Result<Self> {
        if !theta.is_positive() {
            return Err(Error::invalid("θ must be > 0"));
        }
        if r.is_negative() {
            return Err(Error::invalid("r must be ≥ 0"));
        }
        // Past m* = max(2n, 4θ) the weight ratio is below 1/2, so the tail
        // after m is bounded by the m-th weight itself.
        let m_star = (2 * n).max(4 * theta.to_f64().ceil() as usize) + 1;
        let two64 = Rational::from_bigint(BigInt::one() << 64);
        let mut weights = Vec::new();
        let mut partial = Rational::zero();
        let mut theta_term = Rational::one(); // θ^m / m!
        let mut m = 0usize;
        loop {
            if m > 0 {
                theta_term = &theta_term * theta / Rational::from_int(m as i64);
            }
            let w = (r + &Rational::from_int(m as i64)).pow(n as i32) * theta_term.clone();
            partial += &w;
            weights.push(w.clone());
            if m >= m_star && (&w * &two64) < partial {
                break;
            }
            m += 1;
        }
        let values: Vec<i64> = (0..weights.len() as i64).collect();
        Ok(GibbsSampler {
            n,
            r: r.clone(),
            m_cdf: InverseCdf::from_weights(values, &weights),
        })
    }

    /// Draws `(partition, empty_urn_count)`: one `u64` for `M`, then the urn
    /// scheme on `M` urns. `M - #white blocks` is Poisson(θ) distributed and
    /// independent of the partition.
    pub fn sample(&self, rng: &mut RngState) -> (IncompletePartition, u64) {
        let m = self.m_cdf.sample(rng) as usize;
        let part = if m == 0 {
            IncompletePartition {
                n: self.n as u32,
                red: (1..=self.n as u32).collect(),
                blocks: vec![],
            }
        } else {
            urn_incomplete_partition(self.n, m, &self.r, rng).expect("valid urn parameters")
        };
        let empty = m - part.block_count();
        (part, empty as u64)
    }
}

/// One-shot Gibbs r-partition draw (builds the Stam cache each call; loops
/// should construct a [`GibbsSampler`] once).
pub fn gibbs_r_partition(
    n: usize,
    theta: &Rational,
    r: &Rational,
    rng: &mut RngState,
) -> Result<(IncompletePartition, u64)> {
    Ok(GibbsSampler::new(n, theta, r)?.sample(rng))
}

fn check_composition_params(n: usize, k: usize, r: &Rational) -> Result<()> {
    if k < 1 || k > n {
        return Err(Error::invalid("need 1 ≤ k ≤ n"));
    }
    if r.is_negative() {
        return Err(Error::invalid("r must be ≥ 0"));
    }
    Ok(())
}

/// Random r-composition via the Dirichlet coupling. Draw order: one
/// Gamma(r) for the red cell (no draws when r = 0), then `k` Exp(1) for the
/// white cells, then `n - k` uniform ball throws located by binary search in
/// the cumulative cell lengths.
pub fn r_composition_dirichlet(
    n: usize,
    k: usize,
    r: &Rational,
    rng: &mut RngState,
) -> Result<IncompleteComposition> {
    check_composition_params(n, k, r)?;
    let mut lengths = Vec::with_capacity(k + 1);
    lengths.push(if r.is_zero() { 0.0 } else { rng.gamma(r.to_f64()) });
    for _ in 0..k {
        lengths.push(rng.exponential());
    }
    let mut cum = Vec::with_capacity(k + 1);
    let mut acc = 0.0;
    for &l in &lengths {
        acc += l;
        cum.push(acc);
    }
    let total = acc;
    let mut counts = vec![0u32; k + 1];
    for _ in 0..(n - k) {
        let x = rng.uniform() * total;
        let idx = cum.partition_point(|&c| c <= x).min(k);
        counts[idx] += 1;
    }
    let comp = IncompleteComposition {
        b0: counts[0],
        parts: counts[1..].iter().map(|&c| c + 1).collect(),
    };
    debug_assert!(comp.validate(n as u32, k).is_ok());
    Ok(comp)
}

/// Random r-composition via the Pólya urn coupling: start at `(r, 1, .., 1)`,
/// run `n - k` reinforcement steps (one uniform each, cells ordered
/// `0, 1, .., k`), then subtract `r` from cell 0.
pub fn r_composition_polya(
    n: usize,
    k: usize,
    r: &Rational,
    rng: &mut RngState,
) -> Result<IncompleteComposition> {
    check_composition_params(n, k, r)?;
    let mut weights = vec![0.0f64; k + 1];
    weights[0] = r.to_f64();
    for w in weights.iter_mut().skip(1) {
        *w = 1.0;
    }
    let mut total: f64 = weights.iter().sum();
    let mut counts = vec![0u32; k + 1];
    for _ in 0..(n - k) {
        let x = rng.uniform() * total;
        let mut acc = 0.0;
        let mut idx = k;
        for (j, &w) in weights.iter().enumerate() {
            acc += w;
            if x < acc {
                idx = j;
                break;
            }
        }
        counts[idx] += 1;
        weights[idx] += 1.0;
        total += 1.0;
    }
    let comp = IncompleteComposition {
        b0: counts[0],
        parts: counts[1..].iter().map(|&c| c + 1).collect(),
    };
    debug_assert!(comp.validate(n as u32, k).is_ok());
    Ok(comp)
}

/// Coupled family of r-compositions of `n` over `k = 1, 2, .., n`, built on
/// the nested-interval construction (integer `r ≥ 1` only). Construction
/// draws `r` interval points then `n` ball uniforms; every later step draws
/// exactly one more interval point. The step `k → k+1` refines the interval
/// partition (one new boundary) and releases the last ball, and the red
/// interval can only shrink by splitting off a white piece.
pub struct NestedCompositionStream {
    n: usize,
    r: usize,
    points: Vec<f64>,
    balls: Vec<f64>,
    k: usize,
    prev_boundaries: Vec<f64>,
}

impl NestedCompositionStream {
    pub fn new(n: usize, r: usize, rng: &mut RngState) -> Result<Self> {
        if r < 1 {
            return Err(Error::invalid("nested construction needs integer r ≥ 1"));
        }
        if n < 1 {
            return Err(Error::invalid("n must be ≥ 1"));
        }
        let mut points: Vec<f64> = (0..r).map(|_| rng.uniform()).collect();
        points.sort_by(f64::total_cmp);
        let balls: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
        Ok(NestedCompositionStream {
            n,
            r,
            points,
            balls,
            k: 0,
            prev_boundaries: vec![],
        })
    }

    /// Emits the composition for the next `k`; `None` once `k` would
    /// exceed `n`.
    pub fn next_composition(&mut self, rng: &mut RngState) -> Option<IncompleteComposition> {
        if self.k >= self.n {
            return None;
        }
        self.k += 1;
        if self.k >= 2 {
            let x = rng.uniform();
            let pos = self.points.partition_point(|&p| p < x);
            self.points.insert(pos, x);
        }
        let k = self.k;
        // Boundaries: order statistics r, r+1, .., r+k-1 of the point set.
        let boundaries: Vec<f64> = self.points[self.r - 1..self.r + k - 1].to_vec();
        debug_assert!(self.check_refinement(&boundaries));
        let mut counts = vec![0u32; k + 1];
        for &b in &self.balls[..self.n - k] {
            let idx = boundaries.partition_point(|&p| p <= b);
            counts[idx] += 1;
        }
        self.prev_boundaries = boundaries;
        let comp = IncompleteComposition {
            b0: counts[0],
            parts: counts[1..].iter().map(|&c| c + 1).collect(),
        };
        debug_assert!(comp.validate(self.n as u32, k).is_ok());
        Some(comp)
    }

    fn check_refinement(&self, boundaries: &[f64]) -> bool {
        if self.prev_boundaries.is_empty() {
            return true;
        }
        // Every previous boundary survives and exactly one is added; the red
        // end (first boundary) never moves right.
        let old = &self.prev_boundaries;
        boundaries.len() == old.len() + 1
            && old.iter().all(|b| boundaries.binary_search_by(|p| p.total_cmp(b)).is_ok())
            && boundaries[0] <= old[0]
    }
}

/// Direct inverse-cdf sampler over the exact (r,s)-Lah pmf; thresholds are
/// cached per `(n, k, r, s)`. One `u64` per draw.
pub struct LahDirectSampler {
    cdf: InverseCdf,
}

impl LahDirectSampler {
    pub fn new(n: usize, k: usize, r: &Rational, s: &Rational) -> Result<Self> {
        let pmf = crate::distributions::lah_pmf(n, k, r, s)?;
        Ok(LahDirectSampler {
            cdf: InverseCdf::from_pmf(&pmf),
        })
    }

    pub fn sample(&self, rng: &mut RngState) -> i64 {
        self.cdf.sample(rng)
    }
}

pub fn lah_sample_direct(
    n: usize,
    k: usize,
    r: &Rational,
    s: &Rational,
    rng: &mut RngState,
) -> Result<i64> {
    Ok(LahDirectSampler::new(n, k, r, s)?.sample(rng))
}

/// (r,s)-Lah sample via the composition representation: draw an
/// (r+s)-composition (skipped when k = 0, where b₀ = n), then
/// `Z⁽⁰⁾ = Σ_{m≤b₀} Bern(s/(r+s+m-1))` and `Z⁽ʲ⁾ = Σ_{m≤b_j} Bern(1/m)`,
/// cells in order 0..k, one uniform per Bernoulli.
pub fn lah_sample_composition(
    n: usize,
    k: usize,
    r: &Rational,
    s: &Rational,
    rng: &mut RngState,
) -> Result<i64> {
    crate::distributions::check_lah_params(n, k, r, s)?;
    let rs = (r + s).to_f64();
    let sf = s.to_f64();
    let (b0, parts) = if k == 0 {
        (n as u32, vec![])
    } else {
        let comp = r_composition_dirichlet(n, k, &(r + s), rng)?;
        (comp.b0, comp.parts)
    };
    let mut z = 0i64;
    if sf > 0.0 {
        for m in 1..=b0 as usize {
            if rng.bernoulli(sf / (rs + (m - 1) as f64)) {
                z += 1;
            }
        }
    }
    for &b in &parts {
        for m in 1..=b as usize {
            if rng.bernoulli(1.0 / m as f64) {
                z += 1;
            }
        }
    }
    Ok(z)
}

/// (r,s)-Lah sample via the split-root Hoppe subtree representation: grow a
/// Hoppe(n, r+s) tree whose root is split into weight-r and weight-s
/// components (node `ℓ` consumes one uniform scaled to `r+s+ℓ-1`, ordered
/// `[root-r | root-s | node 1.. ℓ-1]`), pick a uniform k-subset by partial
/// Fisher–Yates (one uniform per swap), and count the edges of the minimal
/// subtree spanning the subset plus all direct children of the weight-s
/// component.
pub fn lah_sample_subtree(
    n: usize,
    k: usize,
    r: &Rational,
    s: &Rational,
    rng: &mut RngState,
) -> Result<i64> {
    crate::distributions::check_lah_params(n, k, r, s)?;
    let rf = r.to_f64();
    let sf = s.to_f64();
    let rs = rf + sf;
    // parent[ℓ-1] = 0 for the root, else the parent label; s_child marks
    // direct children of the weight-s root component.
    let mut parent = vec![0u32; n];
    let mut s_child = vec![false; n];
    for l in 1..=n {
        if l == 1 && rs == 0.0 {
            // r = s = 0 is the r → 0 limit: node 1 is forced onto the root
            // (no draw consumed).
            continue;
        }
        let scaled = rng.uniform() * (rs + (l - 1) as f64);
        if scaled < rf {
            parent[l - 1] = 0;
        } else if scaled < rs {
            parent[l - 1] = 0;
            s_child[l - 1] = true;
        } else {
            let i = (((scaled - rs).max(0.0)) as usize).min(l.saturating_sub(2));
            parent[l - 1] = i as u32 + 1;
        }
    }
    // Partial Fisher–Yates for the uniform k-subset of [n].
    let mut arr: Vec<u32> = (1..=n as u32).collect();
    for i in 0..k {
        let j = i + rng.index(n - i);
        arr.swap(i, j);
    }
    let mut in_subtree = vec![false; n];
    let mut edges = 0i64;
    let mark = |start: u32, in_subtree: &mut Vec<bool>, edges: &mut i64| {
        let mut v = start;
        while v != 0 && !in_subtree[(v - 1) as usize] {
            in_subtree[(v - 1) as usize] = true;
            *edges += 1;
            v = parent[(v - 1) as usize];
        }
    };
    for &a in &arr[..k] {
        mark(a, &mut in_subtree, &mut edges);
    }
    for l in 1..=n as u32 {
        if s_child[(l - 1) as usize] {
            mark(l, &mut in_subtree, &mut edges);
        }
    }
    Ok(edges)
}

/// Uniform element of the Broder permutation class: permutations of `[n+r]`
/// with the red elements `n+1..n+r` in distinct cycles, built by sequential
/// insertion (white `i` consumes one uniform over `r+i` options ordered
/// `[new cycle | after element 1, 2, .. in insertion order]`), then pushed
/// through the deletion map: red-containing cycles dissolve into the red set.
pub fn sample_broder_perm(n: usize, r: usize, rng: &mut RngState) -> Result<IncompletePermutation> {
    broder_guard(n)?;
    let total = n + r;
    // successor[x] = next element in x's cycle (1-based labels).
    let mut successor: Vec<u32> = vec![0; total + 1];
    let mut insertion_order: Vec<u32> = Vec::with_capacity(total);
    for red in (n + 1)..=(n + r) {
        successor[red] = red as u32;
        insertion_order.push(red as u32);
    }
    for white in 1..=n {
        let c = rng.index(r + white);
        if c == 0 {
            successor[white] = white as u32;
        } else {
            let after = insertion_order[c - 1] as usize;
            successor[white] = successor[after];
            successor[after] = white as u32;
        }
        insertion_order.push(white as u32);
    }
    // Extract cycles; dissolve those containing a red element.
    let mut seen = vec![false; total + 1];
    let mut cycles = Vec::new();
    for start in 1..=total {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut has_red = false;
        let mut v = start;
        loop {
            seen[v] = true;
            if v > n {
                has_red = true;
            } else {
                cycle.push(v as u32);
            }
            v = successor[v] as usize;
            if v == start {
                break;
            }
        }
        if !has_red && !cycle.is_empty() {
            cycles.push(cycle);
        }
    }
    let perm = IncompletePermutation { n: n as u32, cycles };
    debug_assert!(perm.validate().is_ok());
    Ok(perm)
}

/// Uniform element of the Broder partition class: partitions of `[n+r]` with
/// the red elements in distinct blocks, sampled by a count-weighted
/// sequential construction (exact completion counts, one `u64` per step),
/// then pushed through the deletion map.
pub fn sample_broder_part(n: usize, r: usize, rng: &mut RngState) -> Result<IncompletePartition> {
    broder_guard(n)?;
    // completions[i][j - r]: ways to finish after placing i whites into j
    // blocks total (red blocks included).
    let mut completions: Vec<Vec<BigInt>> = vec![Vec::new(); n + 1];
    completions[n] = vec![BigInt::one(); n + 1];
    for i in (0..n).rev() {
        completions[i] = (0..=i)
            .map(|extra| {
                let j = r + extra;
                &completions[i + 1][extra] * BigInt::from(j) + &completions[i + 1][extra + 1]
            })
            .collect();
    }
    // Blocks: first r are the red-anchored blocks.
    let mut blocks: Vec<Vec<u32>> = (0..r).map(|_| Vec::new()).collect();
    for white in 1..=n {
        let i = white - 1;
        let extra = blocks.len() - r;
        let mut weights: Vec<Rational> = (0..blocks.len())
            .map(|_| Rational::from_bigint(completions[i + 1][extra].clone()))
            .collect();
        weights.push(Rational::from_bigint(completions[i + 1][extra + 1].clone()));
        let values: Vec<i64> = (0..=blocks.len() as i64).collect();
        let choice = InverseCdf::from_weights(values, &weights).sample(rng) as usize;
        if choice == blocks.len() {
            blocks.push(vec![white as u32]);
        } else {
            blocks[choice].push(white as u32);
        }
    }
    // Deletion map: whites of the r red-anchored blocks merge into B0.
    let mut red: Vec<u32> = Vec::new();
    for b in blocks.drain(..r) {
        red.extend(b);
    }
    let mut part = IncompletePartition {
        n: n as u32,
        red,
        blocks: blocks.into_iter().filter(|b| !b.is_empty()).collect(),
    };
    part.canonicalize();
    debug_assert!(part.validate().is_ok());
    Ok(part)
}

fn broder_guard(n: usize) -> Result<()> {
    if n > 10 {
        Err(Error::guard(format!(
            "Broder samplers are enumeration-backed and limited to n ≤ 10, got {n}"
        )))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn rng() -> RngState {
        RngState::new(20240811, 0)
    }

    #[test]
    fn feller_basic_structure() {
        let mut r = rng();
        for _ in 0..200 {
            let p = feller_colored(6, &[rat(1), rat(2)], &mut r).unwrap();
            p.validate(2).unwrap();
        }
        // n=1: single 1-cycle.
        let p = feller_colored(1, &[rat(1), rat(1)], &mut r).unwrap();
        assert_eq!(p.cycles.len(), 1);
        assert_eq!(p.cycles[0].labels, vec![1]);
        assert!(feller_colored(3, &[rat(0)], &mut r).is_err());
    }

    #[test]
    fn crp_and_feller_deterministic() {
        let thetas = [ratio(1, 2), rat(2)];
        let mut a = RngState::new(7, 3);
        let mut b = RngState::new(7, 3);
        let x = crp_colored(12, &thetas, &mut a).unwrap();
        let y = crp_colored(12, &thetas, &mut b).unwrap();
        assert_eq!(x, y);
        let x = feller_colored(12, &thetas, &mut a).unwrap();
        let y = feller_colored(12, &thetas, &mut b).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn r_ewens_reduces_at_r_zero() {
        let mut r = rng();
        for _ in 0..100 {
            let p = r_ewens(8, &rat(1), &rat(0), &mut r).unwrap();
            assert_eq!(p.domain().len(), 8);
        }
    }

    #[test]
    fn hoppe_forest_structure() {
        let mut r = rng();
        for _ in 0..200 {
            let f = hoppe_forest(10, &[rat(1), rat(1)], &mut r).unwrap();
            f.validate().unwrap();
            assert_eq!(f.component_sizes().iter().sum::<u32>(), 10);
        }
        let (_f, b) = r_hoppe_tree(10, &rat(1), &rat(0), &mut r).unwrap();
        assert_eq!(b.len(), 10); // r = 0: everything in component 1
    }

    #[test]
    fn urn_partition_structure() {
        let mut r = rng();
        for _ in 0..200 {
            let p = urn_incomplete_partition(9, 4, &ratio(1, 2), &mut r).unwrap();
            p.validate().unwrap();
            assert!(p.block_count() <= 4);
        }
        // r=0, N=1: single white block.
        let p = urn_incomplete_partition(5, 1, &rat(0), &mut r).unwrap();
        assert_eq!(p.block_count(), 1);
        assert!(p.red.is_empty());
    }

    #[test]
    fn gibbs_sampler_runs() {
        let g = GibbsSampler::new(6, &rat(1), &rat(1)).unwrap();
        let mut r = rng();
        for _ in 0..200 {
            let (p, _empty) = g.sample(&mut r);
            p.validate().unwrap();
        }
    }

    #[test]
    fn composition_samplers_structure() {
        let mut r = rng();
        for _ in 0..200 {
            let c = r_composition_dirichlet(10, 3, &rat(2), &mut r).unwrap();
            c.validate(10, 3).unwrap();
            let c = r_composition_polya(10, 3, &rat(2), &mut r).unwrap();
            c.validate(10, 3).unwrap();
        }
        // n=k forces (0,1,..,1).
        let c = r_composition_dirichlet(4, 4, &rat(1), &mut r).unwrap();
        assert_eq!(c.b0, 0);
        assert_eq!(c.parts, vec![1, 1, 1, 1]);
        // r=0: b0 = 0 always.
        for _ in 0..50 {
            let c = r_composition_dirichlet(8, 2, &rat(0), &mut r).unwrap();
            assert_eq!(c.b0, 0);
        }
        assert!(r_composition_dirichlet(3, 4, &rat(1), &mut r).is_err());
    }

    #[test]
    fn polya_one_step_law() {
        // One step from (r, 1): cell 0 chosen w.p. r/(r+1).
        let mut r = rng();
        let mut hits = 0u32;
        let total = 40_000;
        for _ in 0..total {
            let c = r_composition_polya(2, 1, &rat(3), &mut r).unwrap();
            if c.b0 == 1 {
                hits += 1;
            }
        }
        let freq = hits as f64 / total as f64;
        assert!((freq - 0.75).abs() < 0.01, "freq {freq}");
    }

    #[test]
    fn nested_stream_consistency() {
        let mut r = rng();
        for _ in 0..50 {
            let mut stream = NestedCompositionStream::new(9, 2, &mut r).unwrap();
            let mut k = 0;
            while let Some(c) = stream.next_composition(&mut r) {
                k += 1;
                c.validate(9, k).unwrap();
            }
            assert_eq!(k, 9);
        }
        assert!(NestedCompositionStream::new(5, 0, &mut r).is_err());
    }

    #[test]
    fn lah_routes_at_k_equals_n() {
        let mut r = rng();
        for _ in 0..20 {
            assert_eq!(lah_sample_direct(5, 5, &rat(1), &rat(1), &mut r).unwrap(), 5);
            assert_eq!(
                lah_sample_composition(5, 5, &rat(1), &rat(1), &mut r).unwrap(),
                5
            );
            assert_eq!(lah_sample_subtree(5, 5, &rat(1), &rat(1), &mut r).unwrap(), 5);
        }
        assert!(lah_sample_direct(4, 0, &rat(0), &rat(0), &mut r).is_err());
    }

    #[test]
    fn broder_samplers_structure() {
        let mut r = rng();
        for _ in 0..200 {
            let p = sample_broder_perm(6, 2, &mut r).unwrap();
            p.validate().unwrap();
            let q = sample_broder_part(6, 2, &mut r).unwrap();
            q.validate().unwrap();
        }
        // r=0: identity maps, full domain / empty red block.
        let p = sample_broder_perm(5, 0, &mut r).unwrap();
        assert_eq!(p.domain().len(), 5);
        let q = sample_broder_part(5, 0, &mut r).unwrap();
        assert!(q.red.is_empty());
        assert!(sample_broder_perm(11, 1, &mut r).is_err());
    }

    #[test]
    fn inverse_cdf_boundary_resolves_lower() {
        // Two equal halves: threshold exactly 2^63; U = 2^63 → lower point.
        let pmf = FinitePmf::from_exact(
            "t",
            vec![],
            [(0, ratio(1, 2)), (1, ratio(1, 2))],
        )
        .unwrap();
        let cdf = InverseCdf::from_pmf(&pmf);
        assert_eq!(cdf.thresholds[0], 1u128 << 63);
        // partition_point(|t| t < U) with U = 2^63 keeps index 0.
        let idx = cdf.thresholds.partition_point(|&t| t < (1u128 << 63));
        assert_eq!(idx, 0);
    }
}
