//! The random combinatorial structures produced by the samplers: colored
//! permutations, incomplete permutations/partitions/compositions and Hoppe
//! forests. Each type validates its structural invariants and serializes to a
//! canonical JSON form (cycles as arrays, partitions as sorted block arrays,
//! forests as parent arrays).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// One cycle of a colored permutation: a color in `1..=d` and the labels in
/// cycle order. Canonical form keeps the smallest label first (rotation only,
/// so the cyclic orientation is preserved).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub color: u32,
    pub labels: Vec<u32>,
}

/// Permutation of `[n]` in which every cycle carries one of `d` colors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColoredPermutation {
    pub n: u32,
    pub cycles: Vec<Cycle>,
}

impl ColoredPermutation {
    /// Rotates each cycle so its minimum is first and sorts cycles by their
    /// minima. Orientation within a cycle is untouched.
    pub fn canonicalize(&mut self) {
        for c in &mut self.cycles {
            let min_pos = c
                .labels
                .iter()
                .enumerate()
                .min_by_key(|(_, v)| **v)
                .map(|(i, _)| i)
                .unwrap_or(0);
            c.labels.rotate_left(min_pos);
        }
        self.cycles.sort_by_key(|c| c.labels.first().copied());
    }

    pub fn cycle_counts(&self, d: usize) -> Vec<u32> {
        let mut counts = vec![0u32; d];
        for c in &self.cycles {
            counts[(c.color - 1) as usize] += 1;
        }
        counts
    }

    /// Counts of cycles by (color, length), lengths `1..=max_len`.
    pub fn cycle_length_counts(&self, d: usize, max_len: usize) -> Vec<Vec<u32>> {
        let mut counts = vec![vec![0u32; max_len]; d];
        for c in &self.cycles {
            let len = c.labels.len();
            if (1..=max_len).contains(&len) {
                counts[(c.color - 1) as usize][len - 1] += 1;
            }
        }
        counts
    }

    pub fn validate(&self, d: u32) -> Result<()> {
        let mut seen = vec![false; self.n as usize + 1];
        for c in &self.cycles {
            if c.labels.is_empty() {
                return Err(Error::invalid("empty cycle"));
            }
            if c.color == 0 || c.color > d {
                return Err(Error::invalid(format!("color {} out of 1..={d}", c.color)));
            }
            for &l in &c.labels {
                if l == 0 || l > self.n || seen[l as usize] {
                    return Err(Error::invalid(format!("bad or repeated label {l}")));
                }
                seen[l as usize] = true;
            }
        }
        if seen[1..].iter().filter(|x| **x).count() != self.n as usize {
            return Err(Error::invalid("cycles do not cover [n]"));
        }
        Ok(())
    }

    /// Flat integer encoding for use as an enumeration-report key:
    /// `[color, labels.., 0]` per cycle, in canonical order.
    pub fn encode(&self) -> Vec<i64> {
        let mut me = self.clone();
        me.canonicalize();
        let mut out = Vec::new();
        for c in &me.cycles {
            out.push(c.color as i64);
            out.extend(c.labels.iter().map(|&l| l as i64));
            out.push(0);
        }
        out
    }
}

/// Bijection on a subset `B ⊆ [n]` given by its white cycles; the complement
/// `B₀ = [n] \ B` is the red set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncompletePermutation {
    pub n: u32,
    pub cycles: Vec<Vec<u32>>,
}

impl IncompletePermutation {
    pub fn domain(&self) -> Vec<u32> {
        let mut b: Vec<u32> = self.cycles.iter().flatten().copied().collect();
        b.sort_unstable();
        b
    }

    pub fn red_set(&self) -> Vec<u32> {
        let dom = self.domain();
        (1..=self.n).filter(|x| dom.binary_search(x).is_err()).collect()
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }

    pub fn canonicalize(&mut self) {
        for c in &mut self.cycles {
            let min_pos = c
                .iter()
                .enumerate()
                .min_by_key(|(_, v)| **v)
                .map(|(i, _)| i)
                .unwrap_or(0);
            c.rotate_left(min_pos);
        }
        self.cycles.sort_by_key(|c| c.first().copied());
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = vec![false; self.n as usize + 1];
        for c in &self.cycles {
            if c.is_empty() {
                return Err(Error::invalid("empty cycle"));
            }
            for &l in c {
                if l == 0 || l > self.n || seen[l as usize] {
                    return Err(Error::invalid(format!("bad or repeated label {l}")));
                }
                seen[l as usize] = true;
            }
        }
        Ok(())
    }

    /// Multiset type `(b₀, sorted white cycle sizes)` as a flat encoding.
    pub fn type_encoding(&self) -> Vec<i64> {
        let b0 = self.n as i64 - self.domain().len() as i64;
        let mut sizes: Vec<i64> = self.cycles.iter().map(|c| c.len() as i64).collect();
        sizes.sort_unstable();
        let mut out = vec![b0];
        out.extend(sizes);
        out
    }

    pub fn encode(&self) -> Vec<i64> {
        let mut me = self.clone();
        me.canonicalize();
        let mut out = Vec::new();
        for c in &me.cycles {
            out.extend(c.iter().map(|&l| l as i64));
            out.push(0);
        }
        out
    }
}

/// Incomplete partition of `[n]`: a possibly-empty red block `B₀` and
/// nonempty, disjoint white blocks covering the rest. Blocks are kept with
/// sorted elements and sorted by their minima.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncompletePartition {
    pub n: u32,
    pub red: Vec<u32>,
    pub blocks: Vec<Vec<u32>>,
}

impl IncompletePartition {
    pub fn canonicalize(&mut self) {
        self.red.sort_unstable();
        for b in &mut self.blocks {
            b.sort_unstable();
        }
        self.blocks.sort_by_key(|b| b.first().copied());
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = vec![false; self.n as usize + 1];
        let mut mark = |l: u32| -> Result<()> {
            if l == 0 || l > self.n || seen[l as usize] {
                return Err(Error::invalid(format!("bad or repeated element {l}")));
            }
            seen[l as usize] = true;
            Ok(())
        };
        for &l in &self.red {
            mark(l)?;
        }
        for b in &self.blocks {
            if b.is_empty() {
                return Err(Error::invalid("empty white block"));
            }
            for &l in b {
                mark(l)?;
            }
        }
        if seen[1..].iter().filter(|x| **x).count() != self.n as usize {
            return Err(Error::invalid("blocks do not cover [n]"));
        }
        Ok(())
    }

    /// Multiset type `(b₀, sorted white block sizes)`.
    pub fn type_encoding(&self) -> Vec<i64> {
        let mut sizes: Vec<i64> = self.blocks.iter().map(|b| b.len() as i64).collect();
        sizes.sort_unstable();
        let mut out = vec![self.red.len() as i64];
        out.extend(sizes);
        out
    }

    pub fn encode(&self) -> Vec<i64> {
        let mut me = self.clone();
        me.canonicalize();
        let mut out: Vec<i64> = me.red.iter().map(|&l| l as i64).collect();
        out.push(0);
        for b in &me.blocks {
            out.extend(b.iter().map(|&l| l as i64));
            out.push(0);
        }
        out
    }
}

/// Incomplete composition `(b₀, b₁..b_k)` of `n`: `b₀ ≥ 0`, `b_j ≥ 1`,
/// `b₀ + Σ b_j = n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncompleteComposition {
    pub b0: u32,
    pub parts: Vec<u32>,
}

impl IncompleteComposition {
    pub fn n(&self) -> u32 {
        self.b0 + self.parts.iter().sum::<u32>()
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn validate(&self, n: u32, k: usize) -> Result<()> {
        if self.parts.len() != k {
            return Err(Error::invalid("wrong number of parts"));
        }
        if self.parts.iter().any(|&p| p == 0) {
            return Err(Error::invalid("zero white part"));
        }
        if self.n() != n {
            return Err(Error::invalid("parts do not sum to n"));
        }
        Ok(())
    }

    /// `[b₀, b₁, .., b_k]` as the vector support point.
    pub fn as_vec(&self) -> Vec<i64> {
        let mut out = vec![self.b0 as i64];
        out.extend(self.parts.iter().map(|&p| p as i64));
        out
    }
}

/// Parent of a forest node: one of the `d` roots (1-based) or an earlier node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ForestParent {
    Root(u32),
    Node(u32),
}

/// Rooted labeled forest grown by sequential attachment: `d` weighted roots
/// and nodes `1..=n` where node `ℓ` attaches to a root or to a node `< ℓ`
/// (so the structure is acyclic by construction).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HoppeForest {
    pub weights: Vec<Rational>,
    pub parents: Vec<ForestParent>,
}

impl HoppeForest {
    pub fn n(&self) -> usize {
        self.parents.len()
    }

    pub fn d(&self) -> usize {
        self.weights.len()
    }

    pub fn validate(&self) -> Result<()> {
        for (i, p) in self.parents.iter().enumerate() {
            let node = i as u32 + 1;
            match *p {
                ForestParent::Root(r) => {
                    if r == 0 || r as usize > self.d() {
                        return Err(Error::invalid(format!("bad root id {r}")));
                    }
                }
                ForestParent::Node(m) => {
                    if m == 0 || m >= node {
                        return Err(Error::invalid(format!(
                            "node {node} attached to non-earlier node {m}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Root component index (1-based) of every node.
    pub fn component_of(&self) -> Vec<u32> {
        let mut comp = vec![0u32; self.n()];
        for (i, p) in self.parents.iter().enumerate() {
            comp[i] = match *p {
                ForestParent::Root(r) => r,
                ForestParent::Node(m) => comp[(m - 1) as usize],
            };
        }
        comp
    }

    /// Sizes of the root components (roots themselves not counted).
    pub fn component_sizes(&self) -> Vec<u32> {
        let mut sizes = vec![0u32; self.d()];
        for c in self.component_of() {
            sizes[(c - 1) as usize] += 1;
        }
        sizes
    }

    /// Degree of each root (number of nodes attached directly to it).
    pub fn root_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.d()];
        for p in &self.parents {
            if let ForestParent::Root(r) = *p {
                deg[(r - 1) as usize] += 1;
            }
        }
        deg
    }

    /// Depth of every node (distance to its root).
    pub fn depths(&self) -> Vec<u32> {
        let mut depth = vec![0u32; self.n()];
        for (i, p) in self.parents.iter().enumerate() {
            depth[i] = match *p {
                ForestParent::Root(_) => 1,
                ForestParent::Node(m) => depth[(m - 1) as usize] + 1,
            };
        }
        depth
    }

    /// Number of nodes of component `root` (1-based) at each depth `1..=n`.
    pub fn profile(&self, root: u32) -> Vec<u32> {
        let comp = self.component_of();
        let depths = self.depths();
        let mut counts = vec![0u32; self.n()];
        for i in 0..self.n() {
            if comp[i] == root {
                counts[(depths[i] - 1) as usize] += 1;
            }
        }
        counts
    }

    /// Number of leaves in each root component (a root with no children has
    /// zero leaves; roots are never leaves).
    pub fn leaf_counts(&self) -> Vec<u32> {
        let mut has_child = vec![false; self.n()];
        for p in &self.parents {
            if let ForestParent::Node(m) = *p {
                has_child[(m - 1) as usize] = true;
            }
        }
        let comp = self.component_of();
        let mut leaves = vec![0u32; self.d()];
        for i in 0..self.n() {
            if !has_child[i] {
                leaves[(comp[i] - 1) as usize] += 1;
            }
        }
        leaves
    }

    /// Flat canonical encoding `[parent(1), parent(2), ..]` with roots as
    /// `-r` and nodes as `+m`.
    pub fn encode(&self) -> Vec<i64> {
        self.parents
            .iter()
            .map(|p| match *p {
                ForestParent::Root(r) => -(r as i64),
                ForestParent::Node(m) => m as i64,
            })
            .collect()
    }
}
