//! Gaussian rationals: the base field Q(i) of every coefficient tower.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// An element of Q(i), kept in lowest terms by `BigRational`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn zero() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        GaussRat { re: BigRational::one(), im: BigRational::zero() }
    }

    pub fn i() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    /// `a/b + (c/d)i` from four machine integers; `b`, `d` must be nonzero.
    pub fn from_ratio(a: i64, b: i64, c: i64, d: i64) -> Self {
        GaussRat {
            re: BigRational::new(BigInt::from(a), BigInt::from(b)),
            im: BigRational::new(BigInt::from(c), BigInt::from(d)),
        }
    }

    pub fn from_rational(re: BigRational) -> Self {
        GaussRat { re, im: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Field norm re^2 + im^2 (a nonnegative rational, zero iff self is zero).
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(GaussRat { re: &self.re / &n, im: -&self.im / &n })
    }

    /// Exact square root inside Q(i), when one exists.
    ///
    /// For z = a+bi the root is c+di with c^2 = (a + sqrt(a^2+b^2))/2 and
    /// d = b/(2c); both steps stay rational exactly when the intermediate
    /// square roots are rational.
    pub fn sqrt_exact(&self) -> Option<GaussRat> {
        if self.is_zero() {
            return Some(GaussRat::zero());
        }
        let n = self.norm();
        let sqrt_n = rational_sqrt(&n)?;
        if self.im.is_zero() {
            // sqrt of a rational: either re or -re is a rational square.
            if let Some(c) = rational_sqrt(&self.re) {
                return Some(GaussRat::from_rational(c));
            }
            if let Some(c) = rational_sqrt(&(-&self.re)) {
                return Some(GaussRat { re: BigRational::zero(), im: c });
            }
            return None;
        }
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let c2 = (&self.re + &sqrt_n) * &half;
        let c = rational_sqrt(&c2)?;
        if c.is_zero() {
            return None;
        }
        let d = &self.im / (&c + &c);
        let root = GaussRat { re: c, im: d };
        debug_assert_eq!(&root * &root, *self);
        Some(root)
    }

    /// Ordering used only to pick deterministic representatives (e.g. sqrt
    /// signs): lexicographic on (re, im).
    pub fn cmp_lex(&self, other: &Self) -> std::cmp::Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    if x.is_zero() {
        return Some(BigRational::zero());
    }
    let num = x.numer().sqrt();
    let den = x.denom().sqrt();
    if &(&num * &num) == x.numer() && &(&den * &den) == x.denom() {
        Some(BigRational::new(num, den))
    } else {
        None
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &GaussRat {
            type Output = GaussRat;
            fn $method(self, rhs: &GaussRat) -> GaussRat {
                $trait::$method(self.clone(), rhs.clone())
            }
        }
        impl $trait<&GaussRat> for GaussRat {
            type Output = GaussRat;
            fn $method(self, rhs: &GaussRat) -> GaussRat {
                $trait::$method(self, rhs.clone())
            }
        }
        impl $trait<GaussRat> for &GaussRat {
            type Output = GaussRat;
            fn $method(self, rhs: GaussRat) -> GaussRat {
                $trait::$method(self.clone(), rhs)
            }
        }
    };
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: GaussRat) -> GaussRat {
        GaussRat { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}
impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: GaussRat) -> GaussRat {
        GaussRat { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}
impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: GaussRat) -> GaussRat {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        GaussRat { re, im }
    }
}
impl Div for GaussRat {
    type Output = GaussRat;
    fn div(self, rhs: GaussRat) -> GaussRat {
        let inv = rhs.inv().expect("division by zero in Q(i)");
        self * inv
    }
}
impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re, im: -self.im }
    }
}
impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        -self.clone()
    }
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        if !self.re.is_zero() {
            write!(f, "{}", self.re)?;
            first = false;
        }
        if !self.im.is_zero() {
            if !first && self.im.is_positive() {
                write!(f, "+")?;
            }
            if self.im.is_one() {
                write!(f, "i")?;
            } else if (-&self.im).is_one() {
                write!(f, "-i")?;
            } else {
                write!(f, "{}*i", self.im)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn norm_of_one_plus_i() {
        // (1+i)(1-i) = 2
        let z = GaussRat::from_ratio(1, 1, 1, 1);
        let p = &z * &z.conj();
        assert_eq!(p, GaussRat::from_int(2));
    }

    #[test]
    fn sqrt_exact_cases() {
        assert_eq!(GaussRat::from_int(4).sqrt_exact(), Some(GaussRat::from_int(2)));
        assert_eq!(GaussRat::from_int(-1).sqrt_exact(), Some(GaussRat::i()));
        assert_eq!(GaussRat::from_int(2).sqrt_exact(), None);
        // 2i = (1+i)^2
        let z = GaussRat::from_ratio(0, 1, 2, 1);
        let r = z.sqrt_exact().unwrap();
        assert_eq!(&r * &r, z);
        // 4i is not a square in Q(i): needs sqrt(2)
        let z = GaussRat::from_ratio(0, 1, 4, 1);
        assert_eq!(z.sqrt_exact(), None);
        // -5/4 + 3i = (1 + 3i/2)^2? (1+3i/2)^2 = 1 - 9/4 + 3i = -5/4+3i yes
        let z = GaussRat { re: q(-5, 4), im: q(3, 1) };
        let r = z.sqrt_exact().unwrap();
        assert_eq!(&r * &r, z);
    }

    #[test]
    fn division() {
        let a = GaussRat::from_ratio(3, 2, -1, 3);
        let b = GaussRat::from_ratio(7, 5, 2, 1);
        let c = &a / &b;
        assert_eq!(&c * &b, a);
    }
}
