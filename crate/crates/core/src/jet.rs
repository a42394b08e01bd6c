//! Truncated Taylor jets at the fixed center `s = 1/2`.

use std::ops::Mul;

use crate::kernels::binomial;

/// Expansion center shared by every jet in the crate.
pub const CENTER: f64 = 0.5;

/// `values[n]` is the `n`-th derivative at [`CENTER`] (not the Taylor coefficient).
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorJet {
    pub values: Vec<f64>,
}

impl TaylorJet {
    pub fn new(values: Vec<f64>) -> Self {
        assert!(!values.is_empty(), "a jet carries at least the value");
        Self { values }
    }

    /// The jet of the constant `c`.
    pub fn constant(c: f64, order: usize) -> Self {
        let mut values = vec![0.0; order + 1];
        values[0] = c;
        Self { values }
    }

    /// The jet of `s -> value * exp(rate (s - CENTER))`.
    pub fn exponential(value: f64, rate: f64, order: usize) -> Self {
        let mut values = Vec::with_capacity(order + 1);
        let mut v = value;
        for _ in 0..=order {
            values.push(v);
            v *= rate;
        }
        Self { values }
    }

    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn scale(mut self, factor: f64) -> Self {
        self.values.iter_mut().for_each(|v| *v *= factor);
        self
    }

    pub fn add(&self, other: &TaylorJet) -> TaylorJet {
        let order = self.order().min(other.order());
        TaylorJet {
            values: (0..=order).map(|n| self.values[n] + other.values[n]).collect(),
        }
    }

    /// Leibniz rule: `(fg)^(n) = sum_m C(n, m) f^(m) g^(n-m)`, truncated to the
    /// lower of the two orders.
    pub fn leibniz(&self, other: &TaylorJet) -> TaylorJet {
        let order = self.order().min(other.order());
        let values = (0..=order)
            .map(|n| {
                (0..=n)
                    .map(|m| binomial(n, m) * self.values[m] * other.values[n - m])
                    .sum()
            })
            .collect();
        TaylorJet { values }
    }

    /// Sum of the truncated Taylor series at `s`.
    pub fn eval(&self, s: f64) -> f64 {
        let d = s - CENTER;
        let mut term = 1.0;
        let mut acc = 0.0;
        for (n, v) in self.values.iter().enumerate() {
            if n > 0 {
                term *= d / n as f64;
            }
            acc += v * term;
        }
        acc
    }
}

impl Mul for &TaylorJet {
    type Output = TaylorJet;

    fn mul(self, rhs: &TaylorJet) -> TaylorJet {
        self.leibniz(rhs)
    }
}
