//! Finite probability mass functions with exact rational weights, plus a
//! float mode mirroring the same shape for large sizes. Multivariate laws are
//! kept sparse over integer-vector support points.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Probabilities of a [`FinitePmf`], either exact or floating point.
#[derive(Clone, Debug, PartialEq)]
pub enum Probs {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

/// A pmf on a finite, sorted set of integer support points.
///
/// In exact mode the probabilities are nonnegative rationals summing to
/// exactly 1; in float mode they sum to 1 within 1e-12. Zero-probability
/// support points are dropped at construction.
#[derive(Clone, Debug)]
pub struct FinitePmf {
    family: String,
    params: Vec<(String, String)>,
    support: Vec<i64>,
    probs: Probs,
}

impl FinitePmf {
    pub fn from_exact(
        family: impl Into<String>,
        params: Vec<(String, String)>,
        entries: impl IntoIterator<Item = (i64, Rational)>,
    ) -> Result<Self> {
        let map: BTreeMap<i64, Rational> = entries.into_iter().collect();
        let mut support = Vec::new();
        let mut probs = Vec::new();
        let mut total = Rational::zero();
        for (x, p) in map {
            if p.is_negative() {
                return Err(Error::invalid(format!("negative probability at {x}: {p}")));
            }
            if p.is_zero() {
                continue;
            }
            total += &p;
            support.push(x);
            probs.push(p);
        }
        if !total.is_one() {
            return Err(Error::invalid(format!(
                "exact pmf mass is {total}, expected 1"
            )));
        }
        Ok(FinitePmf {
            family: family.into(),
            params,
            support,
            probs: Probs::Exact(probs),
        })
    }

    pub fn from_float(
        family: impl Into<String>,
        params: Vec<(String, String)>,
        entries: impl IntoIterator<Item = (i64, f64)>,
        tolerance: f64,
    ) -> Result<Self> {
        let map: BTreeMap<i64, f64> = entries.into_iter().collect();
        let mut support = Vec::new();
        let mut probs = Vec::new();
        let mut total = 0.0;
        for (x, p) in map {
            if p < 0.0 {
                return Err(Error::invalid(format!("negative probability at {x}: {p}")));
            }
            if p == 0.0 {
                continue;
            }
            total += p;
            support.push(x);
            probs.push(p);
        }
        if (total - 1.0).abs() > tolerance {
            return Err(Error::invalid(format!(
                "float pmf mass is {total}, expected 1 within {tolerance}"
            )));
        }
        Ok(FinitePmf {
            family: family.into(),
            params,
            support,
            probs: Probs::Float(probs),
        })
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn params(&self) -> &[(String, String)] {
        &self.params
    }

    pub fn support(&self) -> &[i64] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.probs, Probs::Exact(_))
    }

    pub fn probs_exact(&self) -> Option<&[Rational]> {
        match &self.probs {
            Probs::Exact(v) => Some(v),
            Probs::Float(_) => None,
        }
    }

    /// Exact probability of a point (zero off support). Exact mode only.
    pub fn prob_of(&self, x: i64) -> Rational {
        let probs = self.probs_exact().expect("exact mode required");
        match self.support.binary_search(&x) {
            Ok(i) => probs[i].clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// Probability of a point as f64 (zero off support), either mode.
    pub fn prob_of_f64(&self, x: i64) -> f64 {
        match self.support.binary_search(&x) {
            Ok(i) => match &self.probs {
                Probs::Exact(v) => v[i].to_f64(),
                Probs::Float(v) => v[i],
            },
            Err(_) => 0.0,
        }
    }

    pub fn probs_f64(&self) -> Vec<f64> {
        match &self.probs {
            Probs::Exact(v) => v.iter().map(Rational::to_f64).collect(),
            Probs::Float(v) => v.clone(),
        }
    }

    pub fn entries_f64(&self) -> Vec<(i64, f64)> {
        self.support
            .iter()
            .copied()
            .zip(self.probs_f64())
            .collect()
    }

    /// Exact mean (exact mode only).
    pub fn mean(&self) -> Rational {
        let probs = self.probs_exact().expect("exact mode required");
        let mut acc = Rational::zero();
        for (x, p) in self.support.iter().zip(probs) {
            acc += &(p * &Rational::from_int(*x));
        }
        acc
    }

    /// Exact variance (exact mode only).
    pub fn variance(&self) -> Rational {
        let probs = self.probs_exact().expect("exact mode required");
        let mean = self.mean();
        let mut acc = Rational::zero();
        for (x, p) in self.support.iter().zip(probs) {
            let d = Rational::from_int(*x) - &mean;
            acc += &(p * &(&d * &d));
        }
        acc
    }

    pub fn mean_f64(&self) -> f64 {
        self.entries_f64().iter().map(|(x, p)| *x as f64 * p).sum()
    }

    /// True when two pmfs define the same distribution (support and exact
    /// probabilities equal), regardless of family tag or parameters.
    pub fn same_distribution(&self, other: &FinitePmf) -> bool {
        self.support == other.support
            && match (&self.probs, &other.probs) {
                (Probs::Exact(a), Probs::Exact(b)) => a == b,
                _ => false,
            }
    }

    /// Exact total variation distance to another exact pmf.
    pub fn tv_exact(&self, other: &FinitePmf) -> Rational {
        let mut acc = Rational::zero();
        let points: std::collections::BTreeSet<i64> = self
            .support
            .iter()
            .chain(other.support.iter())
            .copied()
            .collect();
        for x in points {
            acc += &(self.prob_of(x) - other.prob_of(x)).abs();
        }
        acc / Rational::from_int(2)
    }

    /// Cumulative thresholds `floor(cdf · 2^64)` for 64-bit inverse-cdf
    /// sampling; exact mode only.
    pub fn cdf_thresholds_u64(&self) -> Vec<u128> {
        let probs = self.probs_exact().expect("exact mode required");
        cdf_thresholds(probs)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let probs: Vec<serde_json::Value> = match &self.probs {
            Probs::Exact(v) => v
                .iter()
                .map(|p| serde_json::Value::String(p.to_string()))
                .collect(),
            Probs::Float(v) => v
                .iter()
                .map(|p| serde_json::json!(p))
                .collect(),
        };
        serde_json::json!({
            "schema": SCHEMA_VERSION,
            "family": self.family,
            "params": params_json(&self.params),
            "mode": if self.is_exact() { "exact" } else { "float" },
            "support": self.support,
            "probs": probs,
        })
    }
}

/// Version tag stamped into every serialized pmf / report.
pub const SCHEMA_VERSION: &str = "rcombin-pmf-v1";

fn params_json(params: &[(String, String)]) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> = params
        .iter()
        .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
        .collect();
    serde_json::Value::Object(map)
}

/// Thresholds `floor(S_i · 2^64 / S)` for the cumulative sums `S_i` of exact
/// nonnegative weights with total `S`.
pub fn cdf_thresholds(weights: &[Rational]) -> Vec<u128> {
    let mut cum = Rational::zero();
    let total: Rational = weights.iter().sum();
    assert!(total.is_positive(), "weights must have positive total");
    let two64 = Rational::from_bigint(BigInt::one() << 64);
    weights
        .iter()
        .map(|w| {
            cum += w;
            let scaled = &(&cum * &two64) / &total;
            let floor = scaled.floor_bigint();
            let (_, digits) = floor.to_u64_digits();
            match digits.len() {
                0 => 0u128,
                1 => digits[0] as u128,
                2 => (digits[1] as u128) << 64 | digits[0] as u128,
                _ => unreachable!("threshold exceeds 2^128"),
            }
        })
        .collect()
}

/// A pmf on a finite set of integer vectors, stored sparsely with exact
/// probabilities. Support points are lexicographically sorted.
#[derive(Clone, Debug)]
pub struct VectorPmf {
    family: String,
    params: Vec<(String, String)>,
    entries: BTreeMap<Vec<i64>, Rational>,
}

impl VectorPmf {
    pub fn from_exact(
        family: impl Into<String>,
        params: Vec<(String, String)>,
        entries: impl IntoIterator<Item = (Vec<i64>, Rational)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut total = Rational::zero();
        for (x, p) in entries {
            if p.is_negative() {
                return Err(Error::invalid(format!("negative probability at {x:?}")));
            }
            if p.is_zero() {
                continue;
            }
            total += &p;
            let prev = map.insert(x, p);
            if prev.is_some() {
                return Err(Error::invalid("duplicate support point"));
            }
        }
        if !total.is_one() {
            return Err(Error::invalid(format!(
                "exact pmf mass is {total}, expected 1"
            )));
        }
        Ok(VectorPmf {
            family: family.into(),
            params,
            entries: map,
        })
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<i64>, &Rational)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.entries.keys().next().map_or(0, |k| k.len())
    }

    pub fn prob_of(&self, x: &[i64]) -> Rational {
        self.entries.get(x).cloned().unwrap_or_else(Rational::zero)
    }

    /// Marginal law of coordinate `idx`.
    pub fn marginal(&self, idx: usize) -> Result<FinitePmf> {
        let mut acc: BTreeMap<i64, Rational> = BTreeMap::new();
        for (x, p) in &self.entries {
            *acc.entry(x[idx]).or_insert_with(Rational::zero) += p;
        }
        FinitePmf::from_exact(
            format!("{}[{}]", self.family, idx),
            self.params.clone(),
            acc,
        )
    }

    /// Joint law of coordinates `(i, j)`.
    pub fn bivariate(&self, i: usize, j: usize) -> Result<VectorPmf> {
        let mut acc: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
        for (x, p) in &self.entries {
            *acc.entry(vec![x[i], x[j]]).or_insert_with(Rational::zero) += p;
        }
        VectorPmf::from_exact(
            format!("{}[{},{}]", self.family, i, j),
            self.params.clone(),
            acc,
        )
    }

    /// Law after summing coordinates `i` and `j` into one (the remaining
    /// coordinates keep their order).
    pub fn aggregate(&self, i: usize, j: usize) -> Result<VectorPmf> {
        assert!(i < j);
        let mut acc: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
        for (x, p) in &self.entries {
            let mut y = Vec::with_capacity(x.len() - 1);
            for (idx, &v) in x.iter().enumerate() {
                if idx == i {
                    y.push(v + x[j]);
                } else if idx != j {
                    y.push(v);
                }
            }
            *acc.entry(y).or_insert_with(Rational::zero) += p;
        }
        VectorPmf::from_exact(format!("{}agg", self.family), self.params.clone(), acc)
    }

    pub fn mean(&self, idx: usize) -> Rational {
        let mut acc = Rational::zero();
        for (x, p) in &self.entries {
            acc += &(p * &Rational::from_int(x[idx]));
        }
        acc
    }

    pub fn covariance(&self, i: usize, j: usize) -> Rational {
        let mi = self.mean(i);
        let mj = self.mean(j);
        let mut acc = Rational::zero();
        for (x, p) in &self.entries {
            let di = Rational::from_int(x[i]) - &mi;
            let dj = Rational::from_int(x[j]) - &mj;
            acc += &(p * &(&di * &dj));
        }
        acc
    }

    pub fn same_distribution(&self, other: &VectorPmf) -> bool {
        self.entries == other.entries
    }

    pub fn to_json(&self) -> serde_json::Value {
        let support: Vec<&Vec<i64>> = self.entries.keys().collect();
        let probs: Vec<String> = self.entries.values().map(|p| p.to_string()).collect();
        serde_json::json!({
            "schema": SCHEMA_VERSION,
            "family": self.family,
            "params": params_json(&self.params),
            "mode": "exact",
            "support": support,
            "probs": probs,
        })
    }
}

/// Canonical `(key, value)` parameter list entry.
pub fn param(key: &str, value: impl ToString) -> (String, String) {
    (key.to_string(), value.to_string())
}
