//! Counter-based random number generation with a fixed, documented draw
//! discipline. The generator and every variate kernel below are part of the
//! reproducibility contract: identical `(seed, stream)` pairs produce
//! identical draw sequences on every platform, and parallel Monte Carlo
//! assigns one stream per replica so results are independent of worker count.

/// splitmix64 finalizer.
#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

const GOLDEN: u64 = 0x9e3779b97f4a7c15;
const STREAM_MIX: u64 = 0xd1342543de82ef95;

/// Counter-based generator: the `i`-th output for a given `(seed, stream)` is
///
/// ```text
/// key = splitmix64(seed ^ GOLDEN) ^ splitmix64(stream · STREAM_MIX)
/// out_i = splitmix64(key + i·GOLDEN),   i = 1, 2, ...
/// ```
///
/// with all arithmetic modulo 2^64, GOLDEN = 0x9e3779b97f4a7c15 and
/// STREAM_MIX = 0xd1342543de82ef95.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RngState {
    key: u64,
    counter: u64,
}

impl RngState {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngState {
            key: splitmix64(seed ^ GOLDEN) ^ splitmix64(stream.wrapping_mul(STREAM_MIX)),
            counter: 0,
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        splitmix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform on `[0, 1)` with 53 random bits: `(next_u64 >> 11) · 2^-53`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform index in `0..m` as `floor(uniform · m)`; one draw.
    #[inline]
    pub fn index(&mut self, m: usize) -> usize {
        debug_assert!(m > 0);
        let i = (self.uniform() * m as f64) as usize;
        i.min(m - 1)
    }

    /// Bernoulli(p); one draw, true iff `uniform() < p`.
    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Standard normal via Box–Muller, cosine branch only: two draws
    /// `u₁, u₂`, result `√(-2 ln(1-u₁)) · cos(2π u₂)`. No caching, so every
    /// call consumes exactly two uniforms.
    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Exp(1) by inversion: one draw, `-ln(1-u)`.
    #[inline]
    pub fn exponential(&mut self) -> f64 {
        -(1.0 - self.uniform()).ln()
    }

    /// Gamma(shape, 1).
    ///
    /// Draw order (fixed): shape 0 returns 0 with no draws; shape < 1 first
    /// draws Gamma(shape+1) recursively, then one uniform `u`, returning
    /// `Gamma(shape+1) · u^{1/shape}`; shape ≥ 1 runs Marsaglia–Tsang
    /// squeeze-rejection, each round drawing one normal (two uniforms) and,
    /// when the cube is positive, one more uniform.
    pub fn gamma(&mut self, shape: f64) -> f64 {
        assert!(shape >= 0.0, "negative gamma shape");
        if shape == 0.0 {
            return 0.0;
        }
        if shape < 1.0 {
            let boost = self.gamma(shape + 1.0);
            let u = self.uniform();
            return boost * u.powf(1.0 / shape);
        }
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        loop {
            let x = self.normal();
            let v = (1.0 + c * x).powi(3);
            if v <= 0.0 {
                continue;
            }
            let u = self.uniform();
            if u < 1.0 - 0.0331 * x.powi(4) {
                return d * v;
            }
            if u.ln() < 0.5 * x * x + d * (1.0 - v + v.ln()) {
                return d * v;
            }
        }
    }
}
