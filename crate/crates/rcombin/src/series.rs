use crate::rational::Rational;

/// Formal power series over the exact rationals, truncated at a fixed order.
/// `coeffs[n]` is the coefficient of `x^n`; every operation truncates back to
/// the order fixed at construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    pub fn zero(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = PowerSeries::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    pub fn from_fn(order: usize, f: impl Fn(usize) -> Rational) -> Self {
        PowerSeries {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, rhs: &PowerSeries) -> PowerSeries {
        assert_eq!(self.order(), rhs.order());
        PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub_constant(&self, c: &Rational) -> PowerSeries {
        let mut s = self.clone();
        s.coeffs[0] = &s.coeffs[0] - c;
        s
    }

    pub fn mul(&self, rhs: &PowerSeries) -> PowerSeries {
        assert_eq!(self.order(), rhs.order());
        let order = self.order();
        let mut coeffs = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(order + 1 - i).enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PowerSeries { coeffs }
    }

    pub fn pow(&self, k: usize) -> PowerSeries {
        let mut acc = PowerSeries::one(self.order());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

/// `(1 - x)^{-a}` as a truncated series: coefficient of `x^j` is `a^{j↑}/j!`.
pub fn neg_binomial_series(a: &Rational, order: usize) -> PowerSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut c = Rational::one();
    coeffs.push(c.clone());
    for j in 0..order {
        let jr = Rational::from_int(j as i64);
        c = c * (a + &jr) / Rational::from_int(j as i64 + 1);
        coeffs.push(c.clone());
    }
    PowerSeries { coeffs }
}

/// `log(1/(1-x)) = Σ_{j≥1} x^j / j`.
pub fn log_inv_one_minus(order: usize) -> PowerSeries {
    PowerSeries::from_fn(order, |j| {
        if j == 0 {
            Rational::zero()
        } else {
            Rational::from_ratio(1, j as i64)
        }
    })
}

/// `e^x - 1 = Σ_{j≥1} x^j / j!`.
pub fn exp_minus_one(order: usize) -> PowerSeries {
    let mut coeffs = vec![Rational::zero(); order + 1];
    let mut inv_fact = Rational::one();
    for (j, c) in coeffs.iter_mut().enumerate().skip(1) {
        inv_fact = inv_fact / Rational::from_int(j as i64);
        *c = inv_fact.clone();
    }
    PowerSeries { coeffs }
}

/// `e^{rx} = Σ_j r^j x^j / j!`.
pub fn exp_scaled(r: &Rational, order: usize) -> PowerSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut c = Rational::one();
    coeffs.push(c.clone());
    for j in 1..=order {
        c = c * r / Rational::from_int(j as i64);
        coeffs.push(c.clone());
    }
    PowerSeries { coeffs }
}
