//! Compensated summation.

use std::ops::AddAssign;

use crate::Real;

/// Running sum with Neumaier's improvement of Kahan compensation.
///
/// The value is `sum + compensation`; both parts are kept so a partial sum
/// can be resumed bit-for-bit.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CompensatedSum<F> {
    sum: F,
    compensation: F,
}

impl<F: Real> CompensatedSum<F> {
    pub fn new() -> Self {
        Self {
            sum: F::zero(),
            compensation: F::zero(),
        }
    }

    pub fn add(&mut self, value: F) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation = self.compensation + ((self.sum - t) + value);
        } else {
            self.compensation = self.compensation + ((value - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> F {
        self.sum + self.compensation
    }
}

impl<F: Real> AddAssign<F> for CompensatedSum<F> {
    fn add_assign(&mut self, rhs: F) {
        self.add(rhs);
    }
}

impl<F: Real> FromIterator<F> for CompensatedSum<F> {
    fn from_iter<I: IntoIterator<Item = F>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated sum of a sequence.
pub fn compensated_sum<F: Real>(values: impl IntoIterator<Item = F>) -> F {
    values.into_iter().collect::<CompensatedSum<F>>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_next_to_large_ones() {
        let mut s = CompensatedSum::<f64>::new();
        s += 1e100;
        s += 1.0;
        s += -1e100;
        assert_eq!(s.value(), 1.0);
    }

    #[test]
    fn tenths() {
        let naive: f64 = (0..10_000).map(|_| 0.1).sum();
        let comp = compensated_sum((0..10_000).map(|_| 0.1f64));
        assert!((comp - 1000.0).abs() < (naive - 1000.0).abs());
        assert!((comp - 1000.0).abs() < 1e-12);
    }

    #[test]
    fn works_in_single_precision() {
        let comp = compensated_sum((0..100_000).map(|_| 0.1f32));
        assert!((comp - 10_000.0).abs() < 1e-2);
    }
}
