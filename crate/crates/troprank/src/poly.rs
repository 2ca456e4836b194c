//! Dense univariate polynomials over the rationals.
//!
//! Internal arithmetic for the Puiseux field: a Puiseux element is stored as a
//! rational function in the ramified variable s, and every field operation
//! bottoms out here. Coefficients are exact `BigRational`s; the coefficient
//! vector is low-degree-first and never carries trailing zeros, so the zero
//! polynomial is the empty vector.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// c * s^deg
    pub fn monomial(deg: usize, c: BigRational) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); deg + 1];
        coeffs[deg] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Order of vanishing at s = 0 (index of the lowest nonzero coefficient).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Coefficient at the valuation (the "lowest" coefficient).
    pub fn trailing_coeff(&self) -> Option<&BigRational> {
        self.valuation().map(|v| &self.coeffs[v])
    }

    /// Multiply by s^k.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Exact division by s^k; requires valuation >= k.
    pub fn shift_down(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        debug_assert!(self.valuation().unwrap() >= k);
        Poly {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    /// Substitute s -> s^k (exponent scaling for ramification changes).
    pub fn stretch(&self, k: usize) -> Poly {
        assert!(k >= 1);
        if k == 1 || self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() * k];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[i * k] = c.clone();
            }
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + other.coeff(i));
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - other.coeff(i));
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Euclidean division: self = q * div + r with deg r < deg div.
    /// Panics if div is zero.
    pub fn div_rem(&self, div: &Poly) -> (Poly, Poly) {
        assert!(!div.is_zero(), "polynomial division by zero");
        let dd = div.deg().unwrap();
        if self.is_zero() || self.deg().unwrap() < dd {
            return (Poly::zero(), self.clone());
        }
        let lead = div.leading_coeff().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let qdeg = self.deg().unwrap() - dd;
        let mut q = vec![BigRational::zero(); qdeg + 1];
        for k in (0..=qdeg).rev() {
            let c = &rem[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in div.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    let t = &c * dc;
                    rem[k + i] -= t;
                }
            }
            q[k] = c;
        }
        (Poly::from_coeffs(q), Poly::from_coeffs(rem))
    }

    /// Division known to be exact (used by fraction-free elimination);
    /// panics in debug builds if a remainder appears.
    pub fn exact_div(&self, div: &Poly) -> Poly {
        let (q, r) = self.div_rem(div);
        debug_assert!(r.is_zero(), "non-exact polynomial division");
        q
    }

    /// Monic gcd (leading coefficient 1); gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        match a.leading_coeff() {
            None => a,
            Some(l) => {
                let inv = BigRational::one() / l;
                a.scale(&inv)
            }
        }
    }

    /// Least common multiple, monic; lcm(0, x) = 0.
    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(other);
        let m = self.mul(other).exact_div(&g);
        let inv = BigRational::one() / m.leading_coeff().unwrap();
        m.scale(&inv)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Low-to-high (degree, coefficient) pairs of the nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.terms() {
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            if d == 0 {
                write!(f, "{}", c)?;
            } else if c.is_one() {
                write!(f, "s^{}", d)?;
            } else {
                write!(f, "{}*s^{}", c, d)?;
            }
        }
        Ok(())
    }
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> Poly {
        Poly::from_coeffs(cs.iter().map(|&c| rat_int(c)).collect())
    }

    #[test]
    fn zero_is_canonical() {
        assert!(poly(&[0, 0]).is_zero());
        assert_eq!(poly(&[0, 0]), Poly::zero());
        assert_eq!(Poly::zero().deg(), None);
        assert_eq!(Poly::zero().valuation(), None);
    }

    #[test]
    fn arithmetic_basics() {
        let a = poly(&[1, 2]); // 1 + 2s
        let b = poly(&[3, 0, 1]); // 3 + s^2
        assert_eq!(a.add(&b), poly(&[4, 2, 1]));
        assert_eq!(b.sub(&a), poly(&[2, -2, 1]));
        assert_eq!(a.mul(&b), poly(&[3, 6, 1, 2]));
        assert_eq!(a.mul(&Poly::zero()), Poly::zero());
    }

    #[test]
    fn division_with_remainder() {
        let a = poly(&[-1, 0, 0, 1]); // s^3 - 1
        let b = poly(&[-1, 1]); // s - 1
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, poly(&[1, 1, 1]));
        assert!(r.is_zero());

        let (q2, r2) = poly(&[1, 1]).div_rem(&poly(&[0, 0, 1]));
        assert!(q2.is_zero());
        assert_eq!(r2, poly(&[1, 1]));
    }

    #[test]
    fn gcd_is_monic_common_divisor() {
        let g = poly(&[-1, 1]); // s - 1
        let a = g.mul(&poly(&[2, 2])); // (s-1)(2+2s)
        let b = g.mul(&poly(&[0, 3])); // (s-1)(3s)
        let d = a.gcd(&b);
        assert_eq!(d, poly(&[-1, 1]));
        assert!(a.div_rem(&d).1.is_zero());
        assert!(b.div_rem(&d).1.is_zero());
    }

    #[test]
    fn valuation_and_shifts() {
        let p = poly(&[0, 0, 5, 1]);
        assert_eq!(p.valuation(), Some(2));
        assert_eq!(p.trailing_coeff().unwrap(), &rat_int(5));
        assert_eq!(p.shift_down(2), poly(&[5, 1]));
        assert_eq!(p.shift_down(2).shift_up(2), p);
    }

    #[test]
    fn stretch_scales_exponents() {
        let p = poly(&[1, 2]);
        assert_eq!(p.stretch(3), poly(&[1, 0, 0, 2]));
        assert_eq!(p.stretch(1), p);
    }

    #[test]
    fn exact_division_round_trip() {
        let a = poly(&[1, 4, -2, 7]);
        let b = poly(&[3, 0, 2, 0, 1]);
        assert_eq!(a.mul(&b).exact_div(&b), a);
    }
}
