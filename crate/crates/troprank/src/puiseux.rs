//! Exact Puiseux-series arithmetic restricted to rational functions.
//!
//! An element is a quotient num/den of polynomials in s = t^(1/N) over the
//! rationals, where N is the ramification order. Everything the lift engine
//! needs is the valuation ord (lowest t-exponent) and its coefficient orc,
//! both of which are exact on rational functions:
//!
//!   ord(num/den) = (val_s(num) - val_s(den)) / N
//!   orc(num/den) = trailing(num) / trailing(den)
//!
//! Elements are kept in lowest terms with a monic denominator, so equality
//! is structural.

use crate::poly::Poly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PuiseuxError {
    #[error("ramification {ram} does not clear exponent {exp}")]
    ExponentNotIntegral { exp: BigRational, ram: u64 },
    #[error("ramification order overflow (lcm of denominators exceeds {max})")]
    RamificationTooLarge { max: u64 },
    #[error("division by zero in the Puiseux field")]
    DivisionByZero,
    #[error("zero has no order")]
    ZeroOrder,
    #[error("lift matrices require nonzero entries (zero has no order); entry ({row},{col}) is zero")]
    ZeroEntry { row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Ramification order N >= 1; all exponents are integers after scaling by N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ramification(u64);

const MAX_RAMIFICATION: u64 = 1 << 20;

impl Ramification {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1, "ramification must be >= 1");
        Ramification(n)
    }

    pub fn get(&self) -> u64 {
        self.0
    }

    /// Smallest N clearing the denominators of every exponent in `exps`.
    pub fn clearing<'a>(
        exps: impl IntoIterator<Item = &'a BigRational>,
    ) -> Result<Self, PuiseuxError> {
        let mut n = BigInt::one();
        for e in exps {
            n = n.lcm(&e.denom().abs());
            if n > BigInt::from(MAX_RAMIFICATION) {
                return Err(PuiseuxError::RamificationTooLarge {
                    max: MAX_RAMIFICATION,
                });
            }
        }
        Ok(Ramification(n.to_u64().unwrap()))
    }

    pub fn join(&self, other: &Ramification) -> Result<Self, PuiseuxError> {
        let l = self.0.lcm(&other.0);
        if l > MAX_RAMIFICATION {
            return Err(PuiseuxError::RamificationTooLarge {
                max: MAX_RAMIFICATION,
            });
        }
        Ok(Ramification(l))
    }
}

impl fmt::Display for Ramification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Rational function in s = t^(1/N): exact representative of a Puiseux series.
#[derive(Debug, Clone)]
pub struct PuiseuxScalar {
    num: Poly,
    den: Poly,
    ram: Ramification,
}

impl PuiseuxScalar {
    fn normalized(mut num: Poly, mut den: Poly, ram: Ramification) -> Self {
        assert!(!den.is_zero(), "Puiseux denominator must be nonzero");
        if num.is_zero() {
            return PuiseuxScalar {
                num: Poly::zero(),
                den: Poly::one(),
                ram,
            };
        }
        let g = num.gcd(&den);
        if g.deg() != Some(0) {
            num = num.exact_div(&g);
            den = den.exact_div(&g);
        }
        let lead = den.leading_coeff().unwrap().clone();
        if !lead.is_one() {
            let inv = BigRational::one() / lead;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        PuiseuxScalar { num, den, ram }
    }

    pub fn from_fraction(num: Poly, den: Poly, ram: Ramification) -> Result<Self, PuiseuxError> {
        if den.is_zero() {
            return Err(PuiseuxError::DivisionByZero);
        }
        Ok(Self::normalized(num, den, ram))
    }

    pub fn zero(ram: Ramification) -> Self {
        PuiseuxScalar {
            num: Poly::zero(),
            den: Poly::one(),
            ram,
        }
    }

    pub fn one(ram: Ramification) -> Self {
        PuiseuxScalar {
            num: Poly::one(),
            den: Poly::one(),
            ram,
        }
    }

    pub fn constant(c: BigRational, ram: Ramification) -> Self {
        PuiseuxScalar {
            num: Poly::constant(c),
            den: Poly::one(),
            ram,
        }
    }

    /// c * t^exp; exp may be negative or fractional as long as ram clears it.
    pub fn monomial(
        ram: Ramification,
        exp: &BigRational,
        coeff: BigRational,
    ) -> Result<Self, PuiseuxError> {
        if coeff.is_zero() {
            return Ok(Self::zero(ram));
        }
        let scaled = exp * BigRational::from_integer(BigInt::from(ram.get()));
        if !scaled.is_integer() {
            return Err(PuiseuxError::ExponentNotIntegral {
                exp: exp.clone(),
                ram: ram.get(),
            });
        }
        let e = scaled.to_integer();
        let abs = e.abs().to_usize().ok_or(PuiseuxError::RamificationTooLarge {
            max: MAX_RAMIFICATION,
        })?;
        if e.is_negative() {
            Ok(PuiseuxScalar {
                num: Poly::constant(coeff),
                den: Poly::monomial(abs, BigRational::one()),
                ram,
            })
        } else {
            Ok(PuiseuxScalar {
                num: Poly::monomial(abs, coeff),
                den: Poly::one(),
                ram,
            })
        }
    }

    pub fn ram(&self) -> Ramification {
        self.ram
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    /// Rescale to a ramification `new` that is a multiple of the current one
    /// (substitute s -> s^(new/old)).
    pub fn rescale(&self, new: Ramification) -> Result<Self, PuiseuxError> {
        if new == self.ram {
            return Ok(self.clone());
        }
        if new.get() % self.ram.get() != 0 {
            return Err(PuiseuxError::ExponentNotIntegral {
                exp: BigRational::new(BigInt::one(), BigInt::from(self.ram.get())),
                ram: new.get(),
            });
        }
        let k = (new.get() / self.ram.get()) as usize;
        Ok(PuiseuxScalar {
            num: self.num.stretch(k),
            den: self.den.stretch(k),
            ram: new,
        })
    }

    fn unified(&self, other: &PuiseuxScalar) -> Result<(Self, Self), PuiseuxError> {
        let r = self.ram.join(&other.ram)?;
        Ok((self.rescale(r)?, other.rescale(r)?))
    }

    /// Lowest t-exponent; None for zero.
    pub fn ord(&self) -> Option<BigRational> {
        if self.is_zero() {
            return None;
        }
        let vn = self.num.valuation().unwrap() as i64;
        let vd = self.den.valuation().unwrap() as i64;
        Some(BigRational::new(
            BigInt::from(vn - vd),
            BigInt::from(self.ram.get()),
        ))
    }

    /// Coefficient of the lowest t-exponent; None for zero.
    pub fn orc(&self) -> Option<BigRational> {
        if self.is_zero() {
            return None;
        }
        Some(self.num.trailing_coeff().unwrap() / self.den.trailing_coeff().unwrap())
    }

    pub fn add(&self, other: &PuiseuxScalar) -> PuiseuxScalar {
        let (a, b) = self.unified(other).expect("ramification join");
        let num = a.num.mul(&b.den).add(&b.num.mul(&a.den));
        let den = a.den.mul(&b.den);
        Self::normalized(num, den, a.ram)
    }

    pub fn sub(&self, other: &PuiseuxScalar) -> PuiseuxScalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PuiseuxScalar {
        PuiseuxScalar {
            num: self.num.neg(),
            den: self.den.clone(),
            ram: self.ram,
        }
    }

    pub fn mul(&self, other: &PuiseuxScalar) -> PuiseuxScalar {
        let (a, b) = self.unified(other).expect("ramification join");
        Self::normalized(a.num.mul(&b.num), a.den.mul(&b.den), a.ram)
    }

    pub fn inv(&self) -> Result<PuiseuxScalar, PuiseuxError> {
        if self.is_zero() {
            return Err(PuiseuxError::DivisionByZero);
        }
        Ok(Self::normalized(
            self.den.clone(),
            self.num.clone(),
            self.ram,
        ))
    }

    pub fn div(&self, other: &PuiseuxScalar) -> Result<PuiseuxScalar, PuiseuxError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Multiply by the monomial t^exp.
    pub fn mul_monomial(
        &self,
        exp: &BigRational,
        coeff: BigRational,
    ) -> Result<PuiseuxScalar, PuiseuxError> {
        let r = Ramification::clearing([exp])?.join(&self.ram)?;
        let m = PuiseuxScalar::monomial(r, exp, coeff)?;
        Ok(self.rescale(r)?.mul(&m))
    }
}

impl PartialEq for PuiseuxScalar {
    fn eq(&self, other: &Self) -> bool {
        match self.unified(other) {
            Ok((a, b)) => a.num == b.num && a.den == b.den,
            Err(_) => false,
        }
    }
}

impl Eq for PuiseuxScalar {}

impl fmt::Display for PuiseuxScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.deg() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl std::ops::$trait for &PuiseuxScalar {
            type Output = PuiseuxScalar;
            fn $method(self, rhs: &PuiseuxScalar) -> PuiseuxScalar {
                PuiseuxScalar::$inner(self, rhs)
            }
        }
        impl std::ops::$trait for PuiseuxScalar {
            type Output = PuiseuxScalar;
            fn $method(self, rhs: PuiseuxScalar) -> PuiseuxScalar {
                PuiseuxScalar::$inner(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

impl std::ops::Neg for &PuiseuxScalar {
    type Output = PuiseuxScalar;
    fn neg(self) -> PuiseuxScalar {
        PuiseuxScalar::neg(self)
    }
}
