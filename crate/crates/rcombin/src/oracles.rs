//! Brute-force enumeration engines used as ground truth: every object class
//! (permutations, colored permutations, incomplete permutations/partitions/
//! compositions, attachment histories) is generated explicitly for small n
//! and weighted by the paper-level probability expressions, independently of
//! the triangle recurrences and pmf constructors under test.
//!
//! Size guards are hard errors, not silent truncation.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::numbers::rising_factorial;
use crate::pmf::{param, FinitePmf, VectorPmf};
use crate::rational::Rational;
use crate::structures::{
    ColoredPermutation, Cycle, ForestParent, HoppeForest, IncompleteComposition,
    IncompletePartition, IncompletePermutation,
};

/// Distribution of an integer-vector statistic obtained by exhaustive
/// enumeration; probabilities are exact and sum to 1.
#[derive(Clone, Debug)]
pub struct EnumerationReport {
    pub object_class: String,
    pub n: usize,
    pub params: Vec<(String, String)>,
    pub object_count: u64,
    pub probs: BTreeMap<Vec<i64>, Rational>,
}

impl EnumerationReport {
    fn new(object_class: &str, n: usize, params: Vec<(String, String)>) -> Self {
        EnumerationReport {
            object_class: object_class.to_string(),
            n,
            params,
            object_count: 0,
            probs: BTreeMap::new(),
        }
    }

    fn add(&mut self, key: Vec<i64>, weight: Rational) {
        self.object_count += 1;
        if !weight.is_zero() {
            *self.probs.entry(key).or_insert_with(Rational::zero) += &weight;
        }
    }

    pub fn total_mass(&self) -> Rational {
        self.probs.values().sum()
    }

    pub fn prob_of(&self, key: &[i64]) -> Rational {
        self.probs.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    /// The report as an exact univariate pmf (keys must have length 1).
    pub fn scalar_pmf(&self) -> Result<FinitePmf> {
        let entries = self
            .probs
            .iter()
            .map(|(k, p)| {
                if k.len() != 1 {
                    return Err(Error::invalid("statistic is not scalar"));
                }
                Ok((k[0], p.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        FinitePmf::from_exact(
            format!("enum:{}", self.object_class),
            self.params.clone(),
            entries,
        )
    }

    pub fn vector_pmf(&self) -> Result<VectorPmf> {
        VectorPmf::from_exact(
            format!("enum:{}", self.object_class),
            self.params.clone(),
            self.probs.clone(),
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        let support: Vec<&Vec<i64>> = self.probs.keys().collect();
        let probs: Vec<String> = self.probs.values().map(|p| p.to_string()).collect();
        serde_json::json!({
            "schema": crate::pmf::SCHEMA_VERSION,
            "family": format!("enum:{}", self.object_class),
            "params": self.params.iter().cloned().collect::<BTreeMap<_,_>>(),
            "object_count": self.object_count,
            "support": support,
            "probs": probs,
        })
    }
}

fn guard(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::guard(format!("enumeration guard exceeded: {what}")))
    }
}

/// All permutations of `labels`, delivered as cycle decompositions.
fn for_each_permutation(labels: &[u32], f: &mut impl FnMut(Vec<Vec<u32>>)) {
    fn rec(i: usize, idx: &mut Vec<usize>, labels: &[u32], f: &mut impl FnMut(Vec<Vec<u32>>)) {
        if i == idx.len() {
            f(cycles_of(labels, idx));
            return;
        }
        for j in i..idx.len() {
            idx.swap(i, j);
            rec(i + 1, idx, labels, f);
            idx.swap(i, j);
        }
    }
    let mut idx: Vec<usize> = (0..labels.len()).collect();
    rec(0, &mut idx, labels, f);
}

/// Cycle decomposition of the permutation sending `labels[i] → labels[idx[i]]`.
fn cycles_of(labels: &[u32], idx: &[usize]) -> Vec<Vec<u32>> {
    let m = labels.len();
    let mut seen = vec![false; m];
    let mut cycles = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut at = start;
        while !seen[at] {
            seen[at] = true;
            cycle.push(labels[at]);
            at = idx[at];
        }
        cycles.push(cycle);
    }
    cycles
}

/// All set partitions of `labels` via restricted growth strings.
fn for_each_partition(labels: &[u32], f: &mut impl FnMut(&[Vec<u32>])) {
    fn rec(labels: &[u32], i: usize, blocks: &mut Vec<Vec<u32>>, f: &mut impl FnMut(&[Vec<u32>])) {
        if i == labels.len() {
            f(blocks);
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(labels[i]);
            rec(labels, i + 1, blocks, f);
            blocks[b].pop();
        }
        blocks.push(vec![labels[i]]);
        rec(labels, i + 1, blocks, f);
        blocks.pop();
    }
    let mut blocks = Vec::new();
    rec(labels, 0, &mut blocks, f);
}

fn theta_params(thetas: &[Rational]) -> (String, String) {
    let parts: Vec<String> = thetas.iter().map(|t| t.to_string()).collect();
    ("thetas".to_string(), format!("[{}]", parts.join(",")))
}

/// Enumerates all colored permutations of `[n]` (d ≤ 3, n ≤ 7) and reports
/// the law of the per-color cycle-count vector under the multinomial Ewens
/// distribution with weights `thetas`.
pub fn enumerate_colored_permutations(n: usize, thetas: &[Rational]) -> Result<EnumerationReport> {
    guard(n <= 7, "colored permutations need n ≤ 7")?;
    guard((1..=3).contains(&thetas.len()), "colored permutations need d ≤ 3")?;
    let d = thetas.len();
    let theta: Rational = thetas.iter().sum();
    let norm = rising_factorial(&theta, n);
    let mut report = EnumerationReport::new("colored_permutations", n, vec![theta_params(thetas)]);
    let labels: Vec<u32> = (1..=n as u32).collect();
    for_each_permutation(&labels, &mut |cycles| {
        let c = cycles.len();
        // Aggregate the d^c colorings by color-count vector.
        for counts in crate::distributions::weak_compositions(c, d) {
            let ways = crate::numbers::multinomial_coefficient(&counts);
            report.object_count += u64::try_from(&ways).expect("small count");
            let mut weight = Rational::from_bigint(ways) / &norm;
            for (j, &kj) in counts.iter().enumerate() {
                weight *= &thetas[j].pow(kj as i32);
            }
            if !weight.is_zero() {
                let key: Vec<i64> = counts.iter().map(|&k| k as i64).collect();
                *report.probs.entry(key).or_insert_with(Rational::zero) += &weight;
            }
        }
    });
    Ok(report)
}

/// Enumerates colored permutations explicitly (n ≤ 5) and reports an
/// arbitrary statistic under the multinomial Ewens law.
pub fn colored_permutation_report(
    n: usize,
    thetas: &[Rational],
    mut stat: impl FnMut(&ColoredPermutation) -> Vec<i64>,
) -> Result<EnumerationReport> {
    guard(n <= 5, "full colored-permutation enumeration needs n ≤ 5")?;
    let d = thetas.len();
    let theta: Rational = thetas.iter().sum();
    let norm = rising_factorial(&theta, n);
    let mut report =
        EnumerationReport::new("colored_permutations_full", n, vec![theta_params(thetas)]);
    let labels: Vec<u32> = (1..=n as u32).collect();
    for_each_permutation(&labels, &mut |cycles| {
        let c = cycles.len();
        let mut coloring = vec![0usize; c];
        loop {
            let mut weight = Rational::one() / &norm;
            for &col in &coloring {
                weight *= &thetas[col];
            }
            let perm = ColoredPermutation {
                n: n as u32,
                cycles: cycles
                    .iter()
                    .zip(&coloring)
                    .map(|(labels, &col)| Cycle {
                        color: col as u32 + 1,
                        labels: labels.clone(),
                    })
                    .collect(),
            };
            report.add(stat(&perm), weight);
            // Next coloring in lexicographic order.
            let mut pos = 0;
            loop {
                if pos == c {
                    break;
                }
                coloring[pos] += 1;
                if coloring[pos] < d {
                    break;
                }
                coloring[pos] = 0;
                pos += 1;
            }
            if pos == c {
                break;
            }
        }
    });
    Ok(report)
}

/// Enumerates all incomplete permutations of `[n]` (n ≤ 7) and reports a
/// statistic under the r-Ewens law
/// `P[(ρ,B)] = r^{(n-#B)↑} τ^{#cycles} / (τ+r)^{n↑}`.
pub fn incomplete_permutation_report(
    n: usize,
    tau: &Rational,
    r: &Rational,
    mut stat: impl FnMut(&IncompletePermutation) -> Vec<i64>,
) -> Result<EnumerationReport> {
    guard(n <= 7, "incomplete permutations need n ≤ 7")?;
    let norm = rising_factorial(&(tau + r), n);
    let mut report = EnumerationReport::new(
        "incomplete_permutations",
        n,
        vec![param("tau", tau), param("r", r)],
    );
    for mask in 0u32..(1 << n) {
        let domain: Vec<u32> = (1..=n as u32).filter(|&l| mask & (1 << (l - 1)) != 0).collect();
        let red_weight = rising_factorial(r, n - domain.len());
        for_each_permutation(&domain, &mut |cycles| {
            let weight = &red_weight * &tau.pow(cycles.len() as i32) / &norm;
            let perm = IncompletePermutation { n: n as u32, cycles };
            report.add(stat(&perm), weight);
        });
    }
    Ok(report)
}

/// Enumerates all incomplete partitions of `[n]` (n ≤ 10) and reports a
/// statistic under the urn law `P = r^{#B₀} N^{k↓} / (N+r)^n`.
pub fn urn_partition_report(
    n: usize,
    cap_n: usize,
    r: &Rational,
    stat: impl FnMut(&IncompletePartition) -> Vec<i64>,
) -> Result<EnumerationReport> {
    guard(n <= 10, "incomplete partitions need n ≤ 10")?;
    let cap = Rational::from_int(cap_n as i64);
    let norm = (&cap + r).pow(n as i32);
    let weight = move |part: &IncompletePartition| {
        r.pow(part.red.len() as i32)
            * crate::numbers::falling_factorial(&cap, part.block_count())
            / &norm
    };
    incomplete_partition_report_with(
        "urn_partitions",
        n,
        vec![param("N", cap_n), param("r", r)],
        weight,
        stat,
    )
}

/// Enumerates all incomplete partitions of `[n]` (n ≤ 10) and reports a
/// statistic under the Gibbs law `P = θ^k r^{#B₀} / T_{n,r}(θ)`.
pub fn gibbs_partition_report(
    n: usize,
    theta: &Rational,
    r: &Rational,
    stat: impl FnMut(&IncompletePartition) -> Vec<i64>,
) -> Result<EnumerationReport> {
    let norm = gibbs_normalizer(n, theta, r)?;
    let weight =
        move |part: &IncompletePartition| theta.pow(part.block_count() as i32) * r.pow(part.red.len() as i32) / &norm;
    incomplete_partition_report_with(
        "gibbs_partitions",
        n,
        vec![param("theta", theta), param("r", r)],
        weight,
        stat,
    )
}

/// Raw Gibbs normalizer `Σ_{π ∈ Π_n^inc} θ^{#blocks} r^{#B₀}`, by
/// enumeration; equals the r-Touchard polynomial `T_{n,r}(θ)`.
pub fn gibbs_normalizer(n: usize, theta: &Rational, r: &Rational) -> Result<Rational> {
    guard(n <= 10, "incomplete partitions need n ≤ 10")?;
    let mut total = Rational::zero();
    for_each_incomplete_partition(n, &mut |part| {
        total += &(theta.pow(part.block_count() as i32) * r.pow(part.red.len() as i32));
    });
    Ok(total)
}

fn incomplete_partition_report_with(
    class: &str,
    n: usize,
    params: Vec<(String, String)>,
    weight: impl Fn(&IncompletePartition) -> Rational,
    mut stat: impl FnMut(&IncompletePartition) -> Vec<i64>,
) -> Result<EnumerationReport> {
    guard(n <= 10, "incomplete partitions need n ≤ 10")?;
    let mut report = EnumerationReport::new(class, n, params);
    for_each_incomplete_partition(n, &mut |part| {
        report.add(stat(part), weight(part));
    });
    Ok(report)
}

fn for_each_incomplete_partition(n: usize, f: &mut impl FnMut(&IncompletePartition)) {
    for mask in 0u32..(1 << n) {
        let red: Vec<u32> = (1..=n as u32).filter(|&l| mask & (1 << (l - 1)) != 0).collect();
        let white: Vec<u32> = (1..=n as u32).filter(|&l| mask & (1 << (l - 1)) == 0).collect();
        for_each_partition(&white, &mut |blocks| {
            let part = IncompletePartition {
                n: n as u32,
                red: red.clone(),
                blocks: blocks.to_vec(),
            };
            f(&part);
        });
    }
}

/// Enumerates all incomplete compositions of `n` with `k` positive parts
/// (n ≤ 20) and reports a statistic under the r-composition law.
pub fn composition_report(
    n: usize,
    k: usize,
    r: &Rational,
    mut stat: impl FnMut(&IncompleteComposition) -> Vec<i64>,
) -> Result<EnumerationReport> {
    guard(n <= 20, "incomplete compositions need n ≤ 20")?;
    if k < 1 || k > n {
        return Err(Error::invalid("need 1 ≤ k ≤ n"));
    }
    let denom = crate::numbers::gen_binomial(
        &(Rational::from_int(n as i64) + r - Rational::one()),
        n - k,
    );
    let mut report =
        EnumerationReport::new("incomplete_compositions", n, vec![param("k", k), param("r", r)]);
    for b0 in 0..=(n - k) {
        let w = crate::numbers::gen_binomial(
            &(Rational::from_int(b0 as i64) + r - Rational::one()),
            b0,
        ) / &denom;
        for parts in crate::distributions::positive_compositions(n - b0, k) {
            let comp = IncompleteComposition {
                b0: b0 as u32,
                parts: parts.iter().map(|&p| p as u32).collect(),
            };
            report.add(stat(&comp), w.clone());
        }
    }
    Ok(report)
}

/// Enumerates every attachment history of the multinomial Hoppe forest with
/// `n ≤ 5` nodes and reports a statistic of the resulting forest. Histories
/// are weighted by the product of the attachment probabilities.
pub fn attachment_history_report(
    n: usize,
    thetas: &[Rational],
    mut stat: impl FnMut(&HoppeForest) -> Vec<i64>,
) -> Result<EnumerationReport> {
    guard(n <= 5, "attachment histories need n ≤ 5")?;
    let d = thetas.len();
    let theta: Rational = thetas.iter().sum();
    if !theta.is_positive() {
        return Err(Error::invalid("total weight must be > 0"));
    }
    let mut report = EnumerationReport::new("attachment_histories", n, vec![theta_params(thetas)]);
    let mut parents: Vec<ForestParent> = Vec::with_capacity(n);
    fn rec(
        l: usize,
        n: usize,
        d: usize,
        thetas: &[Rational],
        theta: &Rational,
        weight: Rational,
        parents: &mut Vec<ForestParent>,
        report: &mut EnumerationReport,
        stat: &mut impl FnMut(&HoppeForest) -> Vec<i64>,
    ) {
        if l > n {
            let forest = HoppeForest {
                weights: thetas.to_vec(),
                parents: parents.clone(),
            };
            report.add(stat(&forest), weight);
            return;
        }
        let denom = theta + &Rational::from_int(l as i64 - 1);
        for j in 1..=d {
            if thetas[j - 1].is_zero() {
                continue;
            }
            parents.push(ForestParent::Root(j as u32));
            rec(l + 1, n, d, thetas, theta, &weight * &(&thetas[j - 1] / &denom), parents, report, stat);
            parents.pop();
        }
        for i in 1..l {
            parents.push(ForestParent::Node(i as u32));
            rec(l + 1, n, d, thetas, theta, &weight / &denom, parents, report, stat);
            parents.pop();
        }
    }
    rec(1, n, d, thetas, &theta, Rational::one(), &mut parents, &mut report, &mut stat);
    Ok(report)
}

/// Enumerates every seating history of the multinomial Chinese restaurant
/// process (n ≤ 6) and reports a statistic of the resulting colored
/// permutation, weighting each history by its probability.
pub fn crp_history_report(
    n: usize,
    thetas: &[Rational],
    mut stat: impl FnMut(&ColoredPermutation) -> Vec<i64>,
) -> Result<EnumerationReport> {
    guard(n <= 6, "CRP histories need n ≤ 6")?;
    let theta: Rational = thetas.iter().sum();
    if !theta.is_positive() {
        return Err(Error::invalid("total weight must be > 0"));
    }
    let mut report = EnumerationReport::new("crp_histories", n, vec![theta_params(thetas)]);
    // tables: (color, seats); pos[i] = (table, seat) of customer i+1.
    fn rec(
        l: usize,
        n: usize,
        thetas: &[Rational],
        theta: &Rational,
        weight: Rational,
        tables: &mut Vec<(u32, Vec<u32>)>,
        report: &mut EnumerationReport,
        stat: &mut impl FnMut(&ColoredPermutation) -> Vec<i64>,
    ) {
        if l > n {
            let perm = ColoredPermutation {
                n: n as u32,
                cycles: tables
                    .iter()
                    .map(|(color, labels)| Cycle {
                        color: *color,
                        labels: labels.clone(),
                    })
                    .collect(),
            };
            report.add(stat(&perm), weight);
            return;
        }
        let denom = theta + &Rational::from_int(l as i64 - 1);
        for (j, tj) in thetas.iter().enumerate() {
            if tj.is_zero() {
                continue;
            }
            tables.push((j as u32 + 1, vec![l as u32]));
            rec(l + 1, n, thetas, theta, &weight * &(tj / &denom), tables, report, stat);
            tables.pop();
        }
        for i in 1..l {
            // Seat l next to customer i (counterclockwise = right after i).
            let (t, seat) = tables
                .iter()
                .enumerate()
                .find_map(|(t, (_, seats))| {
                    seats.iter().position(|&c| c == i as u32).map(|s| (t, s))
                })
                .expect("customer already seated");
            tables[t].1.insert(seat + 1, l as u32);
            rec(l + 1, n, thetas, theta, &weight / &denom, tables, report, stat);
            tables[t].1.remove(seat + 1);
        }
    }
    let mut tables = Vec::new();
    rec(1, n, thetas, &theta, Rational::one(), &mut tables, &mut report, &mut stat);
    Ok(report)
}

/// Enumerates every Feller choice sequence `D_n, .., D_1` (n ≤ 6) and
/// reports a statistic of the resulting colored permutation in ordered cycle
/// notation.
pub fn feller_history_report(
    n: usize,
    thetas: &[Rational],
    mut stat: impl FnMut(&ColoredPermutation) -> Vec<i64>,
) -> Result<EnumerationReport> {
    guard(n <= 6, "Feller histories need n ≤ 6")?;
    let theta: Rational = thetas.iter().sum();
    if !theta.is_positive() {
        return Err(Error::invalid("total weight must be > 0"));
    }
    let mut report = EnumerationReport::new("feller_histories", n, vec![theta_params(thetas)]);
    struct State {
        unused: Vec<u32>,
        current: Vec<u32>,
        done: Vec<Cycle>,
    }
    fn rec(
        i: usize,
        n: usize,
        thetas: &[Rational],
        theta: &Rational,
        weight: Rational,
        st: &mut State,
        report: &mut EnumerationReport,
        stat: &mut impl FnMut(&ColoredPermutation) -> Vec<i64>,
    ) {
        if i == 0 {
            let perm = ColoredPermutation {
                n: n as u32,
                cycles: st.done.clone(),
            };
            report.add(stat(&perm), weight);
            return;
        }
        let denom = theta + &Rational::from_int(i as i64 - 1);
        for (j, tj) in thetas.iter().enumerate() {
            if tj.is_zero() {
                continue;
            }
            st.done.push(Cycle {
                color: j as u32 + 1,
                labels: st.current.clone(),
            });
            let reopened = if i > 1 {
                let label = st.unused.remove(0);
                Some(label)
            } else {
                None
            };
            let saved = std::mem::replace(&mut st.current, reopened.map_or(vec![], |l| vec![l]));
            rec(i - 1, n, thetas, theta, &weight * &(tj / &denom), st, report, stat);
            st.current = saved;
            if let Some(label) = reopened {
                st.unused.insert(0, label);
            }
            st.done.pop();
        }
        for idx in 0..(i - 1) {
            let label = st.unused.remove(idx);
            st.current.push(label);
            rec(i - 1, n, thetas, theta, &weight / &denom, st, report, stat);
            st.current.pop();
            st.unused.insert(idx, label);
        }
    }
    let mut st = State {
        unused: (2..=n as u32).collect(),
        current: vec![1],
        done: vec![],
    };
    rec(n, n, thetas, &theta, Rational::one(), &mut st, &mut report, &mut stat);
    Ok(report)
}

/// Enumerates split-root Hoppe(n, r+s) histories crossed with all uniform
/// k-subsets (n ≤ 6) and reports the law of the edge count of the minimal
/// subtree spanning the subset plus the weight-s root children — the
/// representation of the (r,s)-Lah distribution.
pub fn lah_history_report(
    n: usize,
    k: usize,
    r: &Rational,
    s: &Rational,
) -> Result<EnumerationReport> {
    guard(n <= 6, "Lah histories need n ≤ 6")?;
    crate::distributions::check_lah_params(n, k, r, s)?;
    let theta = r + s;
    let mut report = EnumerationReport::new(
        "lah_histories",
        n,
        vec![param("k", k), param("r", r), param("s", s)],
    );
    // parent[l-1]: 0 = root; s_child marks attachment to the s-component.
    struct St {
        parent: Vec<u32>,
        s_child: Vec<bool>,
    }
    let subsets = k_subsets(n, k);
    let subset_weight = Rational::one() / Rational::from_bigint(crate::numbers::binomial(n, k));
    fn rec(
        l: usize,
        n: usize,
        r: &Rational,
        s: &Rational,
        theta: &Rational,
        weight: Rational,
        st: &mut St,
        subsets: &[Vec<u32>],
        subset_weight: &Rational,
        report: &mut EnumerationReport,
    ) {
        if l > n {
            for subset in subsets {
                let edges = subtree_edges(&st.parent, &st.s_child, subset);
                let w = &weight * subset_weight;
                report.add(vec![edges], w);
            }
            return;
        }
        if l == 1 && theta.is_zero() {
            // r = s = 0 is the r → 0 limit: node 1 is forced onto the root.
            st.parent.push(0);
            st.s_child.push(false);
            rec(l + 1, n, r, s, theta, weight, st, subsets, subset_weight, report);
            st.parent.pop();
            st.s_child.pop();
            return;
        }
        let denom = theta + &Rational::from_int(l as i64 - 1);
        if r.is_positive() {
            st.parent.push(0);
            st.s_child.push(false);
            rec(l + 1, n, r, s, theta, &weight * &(r / &denom), st, subsets, subset_weight, report);
            st.parent.pop();
            st.s_child.pop();
        }
        if s.is_positive() {
            st.parent.push(0);
            st.s_child.push(true);
            rec(l + 1, n, r, s, theta, &weight * &(s / &denom), st, subsets, subset_weight, report);
            st.parent.pop();
            st.s_child.pop();
        }
        for i in 1..l {
            st.parent.push(i as u32);
            st.s_child.push(false);
            rec(l + 1, n, r, s, theta, &weight / &denom, st, subsets, subset_weight, report);
            st.parent.pop();
            st.s_child.pop();
        }
    }
    let mut st = St {
        parent: vec![],
        s_child: vec![],
    };
    rec(1, n, r, s, &theta, Rational::one(), &mut st, &subsets, &subset_weight, &mut report);
    Ok(report)
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = Vec::new();
    fn rec(start: u32, n: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n as u32, k, &mut cur, &mut out);
    out
}

fn subtree_edges(parent: &[u32], s_child: &[bool], subset: &[u32]) -> i64 {
    let n = parent.len();
    let mut in_tree = vec![false; n];
    let mut edges = 0i64;
    let mut mark = |start: u32, in_tree: &mut Vec<bool>| {
        let mut v = start;
        while v != 0 && !in_tree[(v - 1) as usize] {
            in_tree[(v - 1) as usize] = true;
            edges += 1;
            v = parent[(v - 1) as usize];
        }
    };
    for &a in subset {
        mark(a, &mut in_tree);
    }
    for l in 1..=n as u32 {
        if s_child[(l - 1) as usize] {
            mark(l, &mut in_tree);
        }
    }
    edges
}

/// Fiber structure of a deletion map: total domain size and, per encoded
/// target object, the number of preimages.
#[derive(Clone, Debug)]
pub struct DeletionMapReport {
    pub domain_count: u64,
    pub fibers: BTreeMap<Vec<i64>, u64>,
}

/// Enumerates the permutations of `[n+r]` with the `r` red elements
/// `n+1..n+r` in distinct cycles and groups them by their image under the
/// cycle-dissolving deletion map. Requires `n + r ≤ 9`.
pub fn broder_perm_deletion_report(n: usize, r: usize) -> Result<DeletionMapReport> {
    guard(n + r <= 9, "Broder permutation enumeration needs n + r ≤ 9")?;
    let labels: Vec<u32> = (1..=(n + r) as u32).collect();
    let mut report = DeletionMapReport {
        domain_count: 0,
        fibers: BTreeMap::new(),
    };
    for_each_permutation(&labels, &mut |cycles| {
        // Red elements must sit in pairwise distinct cycles.
        let mut ok = true;
        for c in &cycles {
            if c.iter().filter(|&&l| l > n as u32).count() > 1 {
                ok = false;
                break;
            }
        }
        if !ok {
            return;
        }
        report.domain_count += 1;
        let kept: Vec<Vec<u32>> = cycles
            .iter()
            .filter(|c| c.iter().all(|&l| l <= n as u32))
            .cloned()
            .collect();
        let target = IncompletePermutation {
            n: n as u32,
            cycles: kept,
        };
        *report.fibers.entry(target.encode()).or_insert(0) += 1;
    });
    Ok(report)
}

/// Enumerates the partitions of `[n+r]` with the red elements in distinct
/// blocks and groups them by their image under the block-merging deletion
/// map. Requires `n + r ≤ 10`.
pub fn broder_part_deletion_report(n: usize, r: usize) -> Result<DeletionMapReport> {
    guard(n + r <= 10, "Broder partition enumeration needs n + r ≤ 10")?;
    let labels: Vec<u32> = (1..=(n + r) as u32).collect();
    let mut report = DeletionMapReport {
        domain_count: 0,
        fibers: BTreeMap::new(),
    };
    for_each_partition(&labels, &mut |blocks| {
        let mut ok = true;
        for b in blocks {
            if b.iter().filter(|&&l| l > n as u32).count() > 1 {
                ok = false;
                break;
            }
        }
        if !ok {
            return;
        }
        report.domain_count += 1;
        let mut red = Vec::new();
        let mut whites = Vec::new();
        for b in blocks {
            if b.iter().any(|&l| l > n as u32) {
                red.extend(b.iter().copied().filter(|&l| l <= n as u32));
            } else {
                whites.push(b.clone());
            }
        }
        let mut target = IncompletePartition {
            n: n as u32,
            red,
            blocks: whites,
        };
        target.canonicalize();
        *report.fibers.entry(target.encode()).or_insert(0) += 1;
    });
    Ok(report)
}
