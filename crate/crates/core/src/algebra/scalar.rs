//! Arbitrary-precision rational scalars and small combinatorial helpers.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// The ground field: arbitrary-precision rationals, always stored reduced
/// with a positive denominator (the invariants `BigRational` maintains).
pub type Scalar = BigRational;

/// Scalar zero.
pub fn zero() -> Scalar {
    Scalar::zero()
}

/// Scalar one.
pub fn one() -> Scalar {
    Scalar::one()
}

/// Integer as a scalar.
pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

/// `n/d` as a scalar. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// `k!` as a scalar.
pub fn factorial(k: u32) -> Scalar {
    let mut acc = BigInt::one();
    for j in 2..=k as u64 {
        acc *= BigInt::from(j);
    }
    Scalar::from_integer(acc)
}

/// Binomial coefficient `C(n, k)` as a scalar (both arguments non-negative).
pub fn binomial(n: u64, k: u64) -> Scalar {
    if k > n {
        return zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    Scalar::from_integer(acc)
}

/// `(-1)^k` for a possibly negative integer `k`.
pub fn neg_one_pow(k: i64) -> Scalar {
    if k.rem_euclid(2) == 0 {
        one()
    } else {
        -one()
    }
}

/// Renders a scalar the way the expression grammar writes rationals:
/// `p` or `p/q`, with a leading `-` for negative values.
pub fn display(s: &Scalar) -> String {
    if s.denom().is_one() {
        format!("{}", s.numer())
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// True when the scalar is a non-negative value (used by serializers to
/// decide between `+` and `-` joiners).
pub fn is_negative(s: &Scalar) -> bool {
    s.is_negative()
}
