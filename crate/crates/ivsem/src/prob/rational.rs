use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// An exact probability: a rational in `[0, 1]`. No floating point anywhere.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prob(BigRational);

impl Prob {
    pub fn zero() -> Self {
        Prob(BigRational::zero())
    }

    pub fn one() -> Self {
        Prob(BigRational::one())
    }

    /// `num/den`; panics when outside `[0, 1]` or `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Prob::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        assert!(
            !r.is_negative() && r <= BigRational::one(),
            "probability out of range: {r}"
        );
        Prob(r)
    }

    pub fn checked_from_rational(r: BigRational) -> Option<Self> {
        if r.is_negative() || r > BigRational::one() {
            None
        } else {
            Some(Prob(r))
        }
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn complement(&self) -> Prob {
        Prob(BigRational::one() - &self.0)
    }
}

impl Add for &Prob {
    type Output = Prob;
    fn add(self, rhs: &Prob) -> Prob {
        Prob::from_rational(&self.0 + &rhs.0)
    }
}

impl Sub for &Prob {
    type Output = Prob;
    fn sub(self, rhs: &Prob) -> Prob {
        Prob::from_rational(&self.0 - &rhs.0)
    }
}

impl Mul for &Prob {
    type Output = Prob;
    fn mul(self, rhs: &Prob) -> Prob {
        Prob(&self.0 * &rhs.0)
    }
}

impl Div for &Prob {
    type Output = Prob;
    fn div(self, rhs: &Prob) -> Prob {
        Prob::from_rational(&self.0 / &rhs.0)
    }
}

impl Sum<Prob> for Prob {
    fn sum<I: Iterator<Item = Prob>>(iter: I) -> Prob {
        let mut acc = BigRational::zero();
        for p in iter {
            acc += p.0;
        }
        Prob::from_rational(acc)
    }
}

impl fmt::Display for Prob {
    /// Always `numer/denom`, reduced (`1/1`, `0/1`, `2/3`, ...).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_exact() {
        let third = Prob::ratio(1, 3);
        let two_thirds = &third + &Prob::ratio(1, 3);
        assert_eq!(two_thirds, Prob::ratio(2, 3));
        assert_eq!(&third * &Prob::ratio(1, 2), Prob::ratio(1, 6));
        assert_eq!(third.complement(), Prob::ratio(2, 3));
        assert_eq!(&Prob::ratio(1, 6) / &Prob::ratio(1, 3), Prob::ratio(1, 2));
    }

    #[test]
    #[should_panic]
    fn sum_above_one_rejected() {
        let _ = &Prob::ratio(2, 3) + &Prob::ratio(2, 3);
    }

    #[test]
    fn display_always_fractional() {
        assert_eq!(Prob::one().to_string(), "1/1");
        assert_eq!(Prob::zero().to_string(), "0/1");
        assert_eq!(Prob::ratio(2, 4).to_string(), "1/2");
    }
}
