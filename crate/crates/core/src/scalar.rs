//! Gaussian rational coefficients.
//!
//! The coefficient field of the dense *-algebra is `Q(i)`. Keeping both
//! components as arbitrary-precision rationals makes every algebra operation
//! in this crate exact; floating point appears only when a gauge character is
//! actually evaluated.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Scalar { re: BigRational::one(), im: BigRational::zero() }
    }

    pub fn from_int(v: i64) -> Self {
        Scalar { re: BigRational::from_integer(BigInt::from(v)), im: BigRational::zero() }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Lossy conversion used by the gauge action and nowhere else.
    pub fn to_f64(&self) -> (f64, f64) {
        fn approx(r: &BigRational) -> f64 {
            let num = r.numer();
            let den = r.denom();
            // Good enough for desk-scale coefficients.
            let n: f64 = num.to_string().parse().unwrap_or(f64::NAN);
            let d: f64 = den.to_string().parse().unwrap_or(f64::NAN);
            n / d
        }
        (approx(&self.re), approx(&self.im))
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Scalar { re, im }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut wrote = false;
        if !self.re.is_zero() {
            write!(f, "{}", self.re)?;
            wrote = true;
        }
        if !self.im.is_zero() {
            if wrote && self.im.is_positive() {
                write!(f, "+")?;
            }
            write!(f, "{}i", self.im)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        let a = Scalar::from_ratio(3, 2) + Scalar::i() * Scalar::from_ratio(1, 3);
        let b = a.clone() * a.clone().conj();
        // |3/2 + i/3|^2 = 9/4 + 1/9 = 85/36
        assert_eq!(b, Scalar::from_ratio(85, 36));
        assert!(b.im().is_zero());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::zero().to_string(), "0");
        assert_eq!(Scalar::from_ratio(3, 2).to_string(), "3/2");
        let z = Scalar::from_ratio(3, 2) + Scalar::i() * Scalar::from_ratio(1, 3);
        assert_eq!(z.to_string(), "3/2+1/3i");
        let w = Scalar::zero() - Scalar::i();
        assert_eq!(w.to_string(), "-1i");
    }
}
