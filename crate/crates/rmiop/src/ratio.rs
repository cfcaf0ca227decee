use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Sub};

/// Exact nonnegative rational. Agreement fractions, distances, and error
/// bounds are compared exactly; floating point only enters when a caller asks
/// for `to_f64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Ratio {
    pub const ZERO: Ratio = Ratio { num: 0, den: 1 };
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Ratio {
        assert!(den != 0, "zero denominator");
        if num == 0 {
            return Ratio::ZERO;
        }
        let g = gcd(num, den);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// 1 - self; panics if self > 1.
    pub fn complement(&self) -> Ratio {
        assert!(self.num <= self.den);
        Ratio::new(self.den - self.num, self.den)
    }

    /// Saturating subtraction: max(self - other, 0).
    pub fn saturating_sub(&self, other: Ratio) -> Ratio {
        if *self <= other {
            Ratio::ZERO
        } else {
            *self - other
        }
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.num as u128 * other.den as u128;
        let rhs = other.num as u128 * self.den as u128;
        lhs.cmp(&rhs)
    }
}

impl Add for Ratio {
    type Output = Ratio;
    fn add(self, rhs: Ratio) -> Ratio {
        let num = (self.num as u128 * rhs.den as u128 + rhs.num as u128 * self.den as u128) as u64;
        Ratio::new(num, self.den * rhs.den)
    }
}

impl Sub for Ratio {
    type Output = Ratio;
    fn sub(self, rhs: Ratio) -> Ratio {
        let lhs = self.num as u128 * rhs.den as u128;
        let r = rhs.num as u128 * self.den as u128;
        assert!(lhs >= r, "negative ratio");
        Ratio::new((lhs - r) as u64, self.den * rhs.den)
    }
}

impl Mul for Ratio {
    type Output = Ratio;
    fn mul(self, rhs: Ratio) -> Ratio {
        // cross-reduce first to keep numbers small
        let g1 = gcd(self.num, rhs.den);
        let g2 = gcd(rhs.num, self.den);
        Ratio::new(
            (self.num / g1) * (rhs.num / g2),
            (self.den / g2) * (rhs.den / g1),
        )
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_order() {
        assert_eq!(Ratio::new(10, 16), Ratio::new(5, 8));
        assert!(Ratio::new(2, 16) < Ratio::new(3, 16));
        assert!(Ratio::new(1, 3) < Ratio::new(17, 48));
        assert_eq!(Ratio::new(13, 16) + Ratio::new(3, 16), Ratio::ONE);
    }

    #[test]
    fn complement_is_distance() {
        let agr = Ratio::new(10, 16);
        assert_eq!(agr.complement(), Ratio::new(6, 16));
        assert_eq!(agr + agr.complement(), Ratio::ONE);
    }
}
