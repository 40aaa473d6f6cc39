//! Truncated power series in one variable with exact rational coefficients.

use crate::rat::Rat;

/// Coefficients `c[0..=order]` of a series truncated at the given order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries {
    coeffs: Vec<Rat>,
}

impl TruncSeries {
    pub fn zero(order: usize) -> Self {
        TruncSeries { coeffs: vec![Rat::zero(); order + 1] }
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty());
        TruncSeries { coeffs }
    }

    pub fn set_coeff(&mut self, n: usize, c: Rat) {
        self.coeffs[n] = c;
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Rat {
        self.coeffs.get(n).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        let order = self.order().min(other.order());
        TruncSeries {
            coeffs: (0..=order).map(|n| &self.coeff(n) + &other.coeff(n)).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> TruncSeries {
        TruncSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        let order = self.order().min(other.order());
        let mut coeffs = vec![Rat::zero(); order + 1];
        for i in 0..=order {
            if self.coeff(i).is_zero() {
                continue;
            }
            for j in 0..=(order - i) {
                coeffs[i + j] = &coeffs[i + j] + &(&self.coeff(i) * &other.coeff(j));
            }
        }
        TruncSeries { coeffs }
    }

    /// exp of a series with zero constant term.
    pub fn exp(&self) -> TruncSeries {
        assert!(self.coeff(0).is_zero(), "exp requires zero constant term");
        let order = self.order();
        let mut acc = TruncSeries::zero(order);
        acc.coeffs[0] = Rat::one();
        let mut power = acc.clone();
        for k in 1..=order {
            power = power.mul(self);
            acc = acc.add(&power.scale(&Rat::inv_factorial(k)));
        }
        acc
    }

    /// log of a series with constant term one, via the Mercator series.
    pub fn log(&self) -> TruncSeries {
        assert!(self.coeff(0).is_one(), "log requires constant term 1");
        let order = self.order();
        let mut y = self.clone();
        y.coeffs[0] = Rat::zero();
        let mut acc = TruncSeries::zero(order);
        let mut power = TruncSeries::zero(order);
        power.coeffs[0] = Rat::one();
        for k in 1..=order {
            power = power.mul(&y);
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&power.scale(&(Rat::from_int(sign) / Rat::from_int(k as i64))));
        }
        acc
    }
}

/// Coefficients of `(1 − e^{−t})/t = Σ_{n≥0} (−1)ⁿ tⁿ/(n+1)!`.
pub fn one_minus_exp_neg_over_t(order: usize) -> TruncSeries {
    let coeffs = (0..=order)
        .map(|n| {
            let inv = Rat::inv_factorial(n + 1);
            if n % 2 == 0 {
                inv
            } else {
                -inv
            }
        })
        .collect();
    TruncSeries::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_log_round_trip() {
        let mut s = TruncSeries::zero(6);
        s.set_coeff(1, Rat::new(1, 2));
        s.set_coeff(2, Rat::new(-1, 3));
        s.set_coeff(3, Rat::new(2, 5));
        assert_eq!(s.exp().log(), s);
    }

    #[test]
    fn base_series_coefficients() {
        let f = one_minus_exp_neg_over_t(4);
        assert_eq!(f.coeff(0), Rat::one());
        assert_eq!(f.coeff(1), Rat::new(-1, 2));
        assert_eq!(f.coeff(2), Rat::new(1, 6));
        assert_eq!(f.coeff(3), Rat::new(-1, 24));
    }
}
