//! Exact coefficients: rationals, optionally extended by `i`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Which computable subfield of the (algebraically closed) base field we work in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "Q(i)")]
    Gaussian,
}

impl Field {
    pub fn contains(self, c: &Coeff) -> bool {
        match self {
            Field::Rationals => c.is_real(),
            Field::Gaussian => true,
        }
    }

    /// The smallest field of the two containing both.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Gaussian || other == Field::Gaussian {
            Field::Gaussian
        } else {
            Field::Rationals
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Gaussian => write!(f, "Q(i)"),
        }
    }
}

/// An element `re + im*i` with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coeff {
    re: BigRational,
    im: BigRational,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Coeff::from_int(1)
    }

    pub fn i() -> Self {
        Coeff { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Coeff { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Coeff {
            re: BigRational::new(BigInt::from(n), BigInt::from(d)),
            im: BigRational::zero(),
        }
    }

    pub fn from_big(n: BigInt) -> Self {
        Coeff { re: BigRational::from_integer(n), im: BigRational::zero() }
    }

    pub fn new(re: BigRational, im: BigRational) -> Self {
        Coeff { re, im }
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

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn inv(&self) -> Option<Coeff> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Coeff { re: self.re.recip(), im: BigRational::zero() });
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Coeff { re: &self.re / &norm, im: -(&self.im / &norm) })
    }

    pub fn pow(&self, e: u32) -> Coeff {
        let mut acc = Coeff::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Sign-multiplication without allocation churn.
    pub fn signed(mut self, negative: bool) -> Coeff {
        if negative {
            self.re = -self.re;
            self.im = -self.im;
        }
        self
    }

    pub fn add_assign_ref(&mut self, o: &Coeff) {
        self.re += &o.re;
        if !o.im.is_zero() {
            self.im += &o.im;
        }
    }

    /// Render in the poly-string grammar; wraps in parentheses when the value has two parts.
    pub fn to_poly_string(&self) -> String {
        fn rat(r: &BigRational) -> String {
            if r.is_integer() {
                r.numer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }
        if self.im.is_zero() {
            return rat(&self.re);
        }
        let imag = if self.im.is_one() {
            "i".to_string()
        } else if (-&self.im).is_one() {
            "-i".to_string()
        } else {
            format!("{}*i", rat(&self.im))
        };
        if self.re.is_zero() {
            imag
        } else if self.im.is_negative() {
            format!("({}{})", rat(&self.re), imag)
        } else {
            format!("({}+{})", rat(&self.re), imag)
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_poly_string())
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, o: &Coeff) -> Coeff {
        Coeff { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, o: &Coeff) -> Coeff {
        Coeff { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, o: &Coeff) -> Coeff {
        if self.im.is_zero() && o.im.is_zero() {
            return Coeff { re: &self.re * &o.re, im: BigRational::zero() };
        }
        Coeff {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff { re: -&self.re, im: -&self.im }
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff { re: -self.re, im: -self.im }
    }
}

impl From<i64> for Coeff {
    fn from(n: i64) -> Self {
        Coeff::from_int(n)
    }
}
