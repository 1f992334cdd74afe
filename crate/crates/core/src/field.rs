//! Exact field scalars: arbitrary-precision rationals and prime fields.
//!
//! Every computation in this crate is carried out over an exact field; no
//! floating-point type appears anywhere.  Two scalar types are provided:
//!
//! * [`Rat`] — rationals with arbitrary-precision integer numerator and
//!   denominator, always kept in lowest terms.
//! * [`Fp`] — integers modulo a prime `p`.  The modulus travels with each
//!   element; the additive and multiplicative identities are represented by a
//!   modulus-agnostic sentinel so that `Scalar::zero`/`Scalar::one` need no
//!   runtime context.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

/// An exact field element.
///
/// All operations are total except [`Scalar::inv`], which panics on zero;
/// callers are expected to branch on [`Scalar::is_zero`] first (pivoting code
/// always does).
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse.  Panics if `self` is zero.
    fn inv(&self) -> Self;
    fn from_i64(n: i64) -> Self;
    /// Field characteristic (0 for the rationals, `p` for a prime field).
    fn characteristic(&self) -> u64;
}

/// Arbitrary-precision rational number.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rat(pub BigRational);

impl Rat {
    pub fn from_parts(num: BigInt, den: BigInt) -> Self {
        Rat(BigRational::new(num, den))
    }

    /// Parses `"p/q"` or `"p"` with optional sign.
    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let num = BigInt::from_str(n.trim()).map_err(|e| format!("bad numerator {n:?}: {e}"))?;
            let den = BigInt::from_str(d.trim()).map_err(|e| format!("bad denominator {d:?}: {e}"))?;
            if den.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(Rat(BigRational::new(num, den)))
        } else {
            let num = BigInt::from_str(s).map_err(|e| format!("bad integer {s:?}: {e}"))?;
            Ok(Rat(BigRational::from_integer(num)))
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Scalar for Rat {
    fn zero() -> Self {
        Rat(BigRational::zero())
    }
    fn one() -> Self {
        Rat(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        Rat(&self.0 + &other.0)
    }
    fn sub(&self, other: &Self) -> Self {
        Rat(&self.0 - &other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        Rat(&self.0 * &other.0)
    }
    fn neg(&self) -> Self {
        Rat(-self.0.clone())
    }
    fn inv(&self) -> Self {
        assert!(!self.0.is_zero(), "inverse of zero rational");
        Rat(self.0.recip())
    }
    fn from_i64(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

impl Rat {
    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

/// Element of a prime field.
///
/// `modulus == 0` is a sentinel for the "generic" elements produced by
/// [`Scalar::zero`], [`Scalar::one`] and [`Scalar::from_i64`]; it unifies with
/// any concrete modulus on first contact with one.
#[derive(Clone, Copy, Debug)]
pub struct Fp {
    /// Canonical representative in `0..modulus` (or a signed-free i128 before
    /// unification when `modulus == 0`).
    pub value: i128,
    pub modulus: u64,
}

impl Fp {
    pub fn new(value: i128, modulus: u64) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        let m = modulus as i128;
        Fp { value: value.rem_euclid(m), modulus }
    }

    fn unify(a: &Fp, b: &Fp) -> u64 {
        match (a.modulus, b.modulus) {
            (0, m) | (m, 0) => m,
            (m, n) => {
                assert_eq!(m, n, "mixed prime-field moduli {m} and {n}");
                m
            }
        }
    }

    fn reduced(value: i128, modulus: u64) -> Fp {
        if modulus == 0 {
            Fp { value, modulus: 0 }
        } else {
            Fp::new(value, modulus)
        }
    }
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        match (self.modulus, other.modulus) {
            (0, 0) => self.value == other.value,
            (m, 0) | (0, m) | (m, _) => {
                let m = m as i128;
                self.value.rem_euclid(m) == other.value.rem_euclid(m) && {
                    // Concrete moduli must agree when both are present.
                    self.modulus == 0 || other.modulus == 0 || self.modulus == other.modulus
                }
            }
        }
    }
}

impl Eq for Fp {}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Scalar for Fp {
    fn zero() -> Self {
        Fp { value: 0, modulus: 0 }
    }
    fn one() -> Self {
        Fp { value: 1, modulus: 0 }
    }
    fn is_zero(&self) -> bool {
        if self.modulus == 0 {
            self.value == 0
        } else {
            self.value.rem_euclid(self.modulus as i128) == 0
        }
    }
    fn add(&self, other: &Self) -> Self {
        Fp::reduced(self.value + other.value, Fp::unify(self, other))
    }
    fn sub(&self, other: &Self) -> Self {
        Fp::reduced(self.value - other.value, Fp::unify(self, other))
    }
    fn mul(&self, other: &Self) -> Self {
        Fp::reduced(self.value * other.value, Fp::unify(self, other))
    }
    fn neg(&self) -> Self {
        Fp::reduced(-self.value, self.modulus)
    }
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero prime-field element");
        if self.modulus == 0 {
            // Sentinel elements are plain integers; only ±1 are invertible
            // without a modulus, and in practice only ±1 occur here.
            assert!(
                self.value == 1 || self.value == -1,
                "cannot invert modulus-free element {}",
                self.value
            );
            return *self;
        }
        // Extended Euclid on (value, modulus).
        let m = self.modulus as i128;
        let (mut r0, mut r1) = (self.value.rem_euclid(m), m);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        assert_eq!(r0, 1, "modulus {} is not prime relative to {}", self.modulus, self.value);
        Fp::new(s0, self.modulus)
    }
    fn from_i64(n: i64) -> Self {
        Fp { value: n as i128, modulus: 0 }
    }
    fn characteristic(&self) -> u64 {
        self.modulus
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parse_and_arith() {
        let a = Rat::parse("3/4").unwrap();
        let b = Rat::parse("-1/2").unwrap();
        assert_eq!(a.add(&b), Rat::parse("1/4").unwrap());
        assert_eq!(a.mul(&b), Rat::parse("-3/8").unwrap());
        assert_eq!(a.inv(), Rat::parse("4/3").unwrap());
        assert_eq!(format!("{}", Rat::parse("6/3").unwrap()), "2");
        assert!(Rat::parse("1/0").is_err());
    }

    #[test]
    fn prime_field_arith() {
        let two = Fp::new(2, 5);
        let three = Fp::new(3, 5);
        assert!(two.add(&three).is_zero());
        assert_eq!(two.inv(), Fp::new(3, 5));
        assert_eq!(two.mul(&Fp::one()), two);
        assert_eq!(Fp::from_i64(-1).mul(&two), Fp::new(3, 5));
    }

    #[test]
    fn prime_field_sentinel_unifies() {
        let x = Fp::new(1, 2);
        assert_eq!(Fp::one().add(&x).modulus, 2);
        assert!(Fp::one().add(&x).is_zero());
    }
}
