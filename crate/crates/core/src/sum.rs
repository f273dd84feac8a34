//! Compensated (Neumaier) accumulation.
//!
//! The weight constructions and convolution sums in this crate cancel heavily
//! — tail corrections are the small difference of partial sums against zeta
//! values — so plain left-to-right addition would throw digits away exactly
//! where the schemes need them.

/// Running sum with Neumaier's variant of Kahan compensation.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Accumulator {
    sum: f64,
    compensation: f64,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_digits() {
        // 1 + eps + eps + ... - 1 with plain f64 loses the eps entirely.
        let eps = 1e-17;
        let mut acc = Accumulator::new();
        acc.add(1.0);
        for _ in 0..100 {
            acc.add(eps);
        }
        acc.add(-1.0);
        // Plain summation would return exactly 0 here; the compensated total
        // keeps the 100·eps ≈ 1e-15 (up to round-off of the tiny terms).
        assert!((acc.total() - 100.0 * eps).abs() < 1e-28);
    }
}
