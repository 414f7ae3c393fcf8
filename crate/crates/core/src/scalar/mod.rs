//! Exact coefficient field: rationals and rational functions in one
//! parameter `L` (the tubular parameter of the weighted projective line).

mod poly;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use poly::Poly;

use crate::parse::{parse_scalar, ParseError};

/// Reduced quotient of two polynomials with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Builds `num / den` in lowest terms. Returns `None` if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RatFunc { num, den: Poly::one() });
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.div_rem(&g);
        let (mut d, _) = den.div_rem(&g);
        let lead = d.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.recip();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Some(RatFunc { num: n, den: d })
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }
}

/// A field element: either a rational number or a non-constant rational
/// function of `L`. Constant rational functions are always stored as
/// `Rational`, so structural equality is field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Function(RatFunc),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// The parameter `L` itself.
    pub fn lambda() -> Self {
        Scalar::Function(RatFunc { num: Poly::x(), den: Poly::one() })
    }

    fn from_ratfunc(f: RatFunc) -> Self {
        if f.num.is_constant() && f.den.is_constant() {
            Scalar::Rational(f.num.constant_term())
        } else {
            Scalar::Function(f)
        }
    }

    fn as_ratfunc(&self) -> RatFunc {
        match self {
            Scalar::Rational(r) => RatFunc { num: Poly::constant(r.clone()), den: Poly::one() },
            Scalar::Function(f) => f.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_one())
    }

    /// True when the value does not depend on `L`.
    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Function(_) => None,
        }
    }

    /// Sum of numerator and denominator degrees; zero for rationals.
    pub fn total_degree(&self) -> usize {
        match self {
            Scalar::Rational(_) => 0,
            Scalar::Function(f) => f.num.degree().unwrap_or(0) + f.den.degree().unwrap_or(0),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(r) if r.is_zero() => None,
            Scalar::Rational(r) => Some(Scalar::Rational(r.recip())),
            Scalar::Function(f) => RatFunc::new(f.den.clone(), f.num.clone()).map(Scalar::from_ratfunc),
        }
    }

    /// Substitutes a rational value for `L`. `None` when the denominator
    /// vanishes there.
    pub fn specialize(&self, at: &BigRational) -> Option<Scalar> {
        match self {
            Scalar::Rational(_) => Some(self.clone()),
            Scalar::Function(f) => {
                let d = f.den.eval(at);
                if d.is_zero() {
                    None
                } else {
                    Some(Scalar::Rational(f.num.eval(at) / d))
                }
            }
        }
    }

    /// Substitutes a rational function for `L`.
    pub fn compose(&self, at: &Scalar) -> Option<Scalar> {
        match self {
            Scalar::Rational(_) => Some(self.clone()),
            Scalar::Function(f) => {
                let eval = |p: &Poly| {
                    let mut acc = Scalar::zero();
                    for c in p.coeffs().iter().rev() {
                        acc = &(&acc * at) + &Scalar::Rational(c.clone());
                    }
                    acc
                };
                let d = eval(&f.den);
                if d.is_zero() {
                    return None;
                }
                Some(&eval(&f.num) / &d)
            }
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Rational(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => {
                let (a, b) = (self.as_ratfunc(), rhs.as_ratfunc());
                let num = &(&a.num * &b.den) + &(&b.num * &a.den);
                Scalar::from_ratfunc(RatFunc::new(num, &a.den * &b.den).unwrap())
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            _ => self + &(-rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Rational(a), Scalar::Function(f)) | (Scalar::Function(f), Scalar::Rational(a)) => {
                if a.is_zero() {
                    Scalar::zero()
                } else {
                    Scalar::Function(RatFunc { num: f.num.scale(a), den: f.den.clone() })
                }
            }
            (Scalar::Function(a), Scalar::Function(b)) => {
                Scalar::from_ratfunc(RatFunc::new(&a.num * &b.num, &a.den * &b.den).unwrap())
            }
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero.
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inv().expect("scalar division by zero");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Function(f) => Scalar::Function(RatFunc { num: -&f.num, den: f.den.clone() }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", r),
            Scalar::Function(rf) => {
                if rf.den.is_constant() {
                    rf.num.fmt_with_var(f, "L")
                } else {
                    write!(f, "(")?;
                    rf.num.fmt_with_var(f, "L")?;
                    write!(f, ")/(")?;
                    rf.den.fmt_with_var(f, "L")?;
                    write!(f, ")")
                }
            }
        }
    }
}

impl FromStr for Scalar {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_scalar(s)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
