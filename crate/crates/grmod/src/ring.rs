//! Exact ground rings: the integers, the rationals, and integers mod n.
//!
//! Every arithmetic operation goes through a [`Ring`] value so that the
//! modulus (for `Z/n`) lives in exactly one place. Division by a non-unit
//! is a reported error, never a silent wrap.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Zero};
use std::fmt;

use crate::error::Error;

/// The ground ring `k`. Equality of elements is decidable in all three kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ring {
    /// The ring of integers.
    Int,
    /// The field of rationals.
    Rat,
    /// Integers modulo `n`, `n >= 2`. Not necessarily a field.
    Mod(u64),
}

/// An element of a ground ring. `Mod` values are always stored as the
/// canonical residue in `[0, n)`; the modulus itself lives on the [`Ring`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Mod(u64),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(v) => write!(f, "{}", v),
            Scalar::Rat(v) => {
                if v.denom().is_one() {
                    write!(f, "{}", v.numer())
                } else {
                    write!(f, "{}/{}", v.numer(), v.denom())
                }
            }
            Scalar::Mod(v) => write!(f, "{}", v),
        }
    }
}

impl Ring {
    pub fn new_mod(n: u64) -> Result<Ring, Error> {
        if n < 2 {
            return Err(Error::structural(format!(
                "modulus must be at least 2, got {}",
                n
            )));
        }
        Ok(Ring::Mod(n))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Ring::Mod(_))
    }

    /// Number of elements for finite rings.
    pub fn cardinality(&self) -> Option<u64> {
        match self {
            Ring::Mod(n) => Some(*n),
            _ => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Ring::Int => Scalar::Int(BigInt::zero()),
            Ring::Rat => Scalar::Rat(BigRational::zero()),
            Ring::Mod(_) => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Ring::Int => Scalar::Int(BigInt::one()),
            Ring::Rat => Scalar::Rat(BigRational::one()),
            Ring::Mod(_) => Scalar::Mod(1),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Ring::Int => Scalar::Int(BigInt::from(v)),
            Ring::Rat => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
            Ring::Mod(n) => Scalar::Mod((v as i128).rem_euclid(*n as i128) as u64),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            Ring::Int => Scalar::Int(v.clone()),
            Ring::Rat => Scalar::Rat(BigRational::from_integer(v.clone())),
            Ring::Mod(n) => {
                let m = BigInt::from(*n);
                let r = v.mod_floor(&m);
                Scalar::Mod(r.try_into().expect("reduced residue fits in u64"))
            }
        }
    }

    fn expect_int<'a>(&self, s: &'a Scalar) -> &'a BigInt {
        match s {
            Scalar::Int(v) => v,
            _ => panic!("scalar {:?} does not belong to ring Z", s),
        }
    }

    fn expect_rat<'a>(&self, s: &'a Scalar) -> &'a BigRational {
        match s {
            Scalar::Rat(v) => v,
            _ => panic!("scalar {:?} does not belong to ring Q", s),
        }
    }

    fn expect_mod(&self, s: &Scalar) -> u64 {
        match s {
            Scalar::Mod(v) => *v,
            _ => panic!("scalar {:?} does not belong to ring Z/n", s),
        }
    }

    pub fn is_zero(&self, s: &Scalar) -> bool {
        match (self, s) {
            (Ring::Int, Scalar::Int(v)) => v.is_zero(),
            (Ring::Rat, Scalar::Rat(v)) => v.is_zero(),
            (Ring::Mod(_), Scalar::Mod(v)) => *v == 0,
            _ => panic!("scalar {:?} does not belong to ring {:?}", s, self),
        }
    }

    pub fn is_one(&self, s: &Scalar) -> bool {
        *s == self.one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Ring::Int => Scalar::Int(self.expect_int(a) + self.expect_int(b)),
            Ring::Rat => Scalar::Rat(self.expect_rat(a) + self.expect_rat(b)),
            Ring::Mod(n) => {
                let s = (self.expect_mod(a) as u128 + self.expect_mod(b) as u128) % *n as u128;
                Scalar::Mod(s as u64)
            }
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match self {
            Ring::Int => Scalar::Int(-self.expect_int(a)),
            Ring::Rat => Scalar::Rat(-self.expect_rat(a)),
            Ring::Mod(n) => {
                let v = self.expect_mod(a);
                Scalar::Mod(if v == 0 { 0 } else { n - v })
            }
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Ring::Int => Scalar::Int(self.expect_int(a) * self.expect_int(b)),
            Ring::Rat => Scalar::Rat(self.expect_rat(a) * self.expect_rat(b)),
            Ring::Mod(n) => {
                let p = (self.expect_mod(a) as u128 * self.expect_mod(b) as u128) % *n as u128;
                Scalar::Mod(p as u64)
            }
        }
    }

    /// Multiplicative inverse, if `a` is a unit.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        match self {
            Ring::Int => {
                let v = self.expect_int(a);
                if v.is_one() || (-v).is_one() {
                    Some(Scalar::Int(v.clone()))
                } else {
                    None
                }
            }
            Ring::Rat => {
                let v = self.expect_rat(a);
                if v.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(v.recip()))
                }
            }
            Ring::Mod(n) => {
                let v = self.expect_mod(a);
                mod_inverse(v, *n).map(Scalar::Mod)
            }
        }
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        self.inv(a).is_some()
    }

    /// Exact division. Errors when `b` does not divide `a` in the ring
    /// (over `Z` and `Z/n` this demands an exact quotient; over `Q` only
    /// division by zero fails).
    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, Error> {
        match self {
            Ring::Int => {
                let (x, y) = (self.expect_int(a), self.expect_int(b));
                if y.is_zero() {
                    return Err(Error::structural("division by zero in Z"));
                }
                let (q, r) = x.div_rem(y);
                if r.is_zero() {
                    Ok(Scalar::Int(q))
                } else {
                    Err(Error::structural(format!(
                        "{} does not divide {} in Z",
                        y, x
                    )))
                }
            }
            Ring::Rat => {
                let y = self.expect_rat(b);
                if y.is_zero() {
                    return Err(Error::structural("division by zero in Q"));
                }
                Ok(Scalar::Rat(self.expect_rat(a) / y))
            }
            Ring::Mod(n) => match self.inv(b) {
                Some(binv) => Ok(self.mul(a, &binv)),
                None => Err(Error::structural(format!(
                    "{} is not a unit in Z/{}",
                    self.expect_mod(b),
                    n
                ))),
            },
        }
    }

    /// Lift to an integer representative. For `Q` this requires an integral value.
    pub fn lift(&self, a: &Scalar) -> Result<BigInt, Error> {
        match (self, a) {
            (Ring::Int, Scalar::Int(v)) => Ok(v.clone()),
            (Ring::Mod(_), Scalar::Mod(v)) => Ok(BigInt::from(*v)),
            (Ring::Rat, Scalar::Rat(v)) => {
                if v.denom().is_one() {
                    Ok(v.numer().clone())
                } else {
                    Err(Error::structural(format!("{} is not an integer", v)))
                }
            }
            _ => Err(Error::structural("scalar does not belong to ring")),
        }
    }

    /// All ring elements, for finite rings only.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            Ring::Mod(n) => Some((0..*n).map(Scalar::Mod).collect()),
            _ => None,
        }
    }
}

/// Inverse of `a` modulo `n` via the extended Euclidean algorithm.
pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (n as i128, (a % n) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(n as i128) as u64)
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Int => write!(f, "Z"),
            Ring::Rat => write!(f, "Q"),
            Ring::Mod(n) => write!(f, "Z/{}", n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_arithmetic_wraps_canonically() {
        let r = Ring::Mod(4);
        assert_eq!(r.from_i64(-1), Scalar::Mod(3));
        assert_eq!(r.add(&Scalar::Mod(3), &Scalar::Mod(2)), Scalar::Mod(1));
        assert_eq!(r.mul(&Scalar::Mod(2), &Scalar::Mod(2)), Scalar::Mod(0));
    }

    #[test]
    fn division_by_non_unit_is_an_error() {
        let z = Ring::Int;
        assert!(z.div(&z.from_i64(3), &z.from_i64(2)).is_err());
        assert_eq!(
            z.div(&z.from_i64(6), &z.from_i64(2)).unwrap(),
            z.from_i64(3)
        );

        let m = Ring::Mod(4);
        assert!(m.div(&m.from_i64(1), &m.from_i64(2)).is_err());
        assert_eq!(m.inv(&Scalar::Mod(3)), Some(Scalar::Mod(3)));
        assert_eq!(m.inv(&Scalar::Mod(2)), None);
    }

    #[test]
    fn rational_inverse() {
        let q = Ring::Rat;
        let half = q.div(&q.one(), &q.from_i64(2)).unwrap();
        assert_eq!(q.mul(&half, &q.from_i64(2)), q.one());
    }
}
