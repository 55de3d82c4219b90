use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational constant with a cached `f64` approximation.
///
/// Equality, ordering and hashing only look at the exact value.
#[derive(Clone)]
pub struct Number {
    value: BigRational,
    approx: f64,
}

impl Number {
    pub fn new(value: BigRational) -> Number {
        let approx = value.to_f64().unwrap_or(f64::NAN);
        Number { value, approx }
    }

    pub fn zero() -> Number {
        Number::new(BigRational::zero())
    }

    pub fn one() -> Number {
        Number::new(BigRational::one())
    }

    pub fn from_int(value: i64) -> Number {
        Number::new(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Number {
        assert!(denom != 0, "zero denominator in rational constant");
        Number::new(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    /// Exact rational closest to `value` with the given denominator.
    pub fn approximate(value: f64, denom: i64) -> Number {
        Number::from_ratio((value * denom as f64).round() as i64, denom)
    }

    /// The exact binary value of a finite float.
    pub fn from_f64(value: f64) -> Number {
        assert!(value.is_finite(), "non-finite constant");
        Number::new(BigRational::from_float(value).expect("finite"))
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn to_f64(&self) -> f64 {
        self.approx
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.value.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative()
    }

    pub fn recip(&self) -> Number {
        Number::new(self.value.recip())
    }

    pub fn powi(&self, exponent: i64) -> Number {
        let base = if exponent < 0 { self.value.recip() } else { self.value.clone() };
        let mut acc = BigRational::one();
        for _ in 0..exponent.unsigned_abs() {
            acc *= &base;
        }
        Number::new(acc)
    }

    pub fn numer(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.value.denom()
    }
}

impl fmt::Debug for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl PartialEq for Number {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for Number {}

impl PartialOrd for Number {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Number {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value)
    }
}

impl Hash for Number {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

impl ops::Add for &Number {
    type Output = Number;
    fn add(self, rhs: &Number) -> Number {
        Number::new(&self.value + &rhs.value)
    }
}

impl ops::Mul for &Number {
    type Output = Number;
    fn mul(self, rhs: &Number) -> Number {
        Number::new(&self.value * &rhs.value)
    }
}

impl ops::Div for &Number {
    type Output = Number;
    fn div(self, rhs: &Number) -> Number {
        Number::new(&self.value / &rhs.value)
    }
}

impl ops::Neg for Number {
    type Output = Number;
    fn neg(self) -> Number {
        Number::new(-self.value)
    }
}
