//! Exact integer and rational arithmetic plus the closed-form counts.
//!
//! Every count here is computed with arbitrary-precision integers; nothing
//! goes through floating point. The alternating sum for unrooted forests is
//! available in two shapes: [`takacs_count`] sums integer terms
//! `(-1)^j * A * B`, and [`takacs_count_eq1`] evaluates the original
//! rational form and checks that both agree.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg};

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Natural(BigUint);

impl Natural {
    pub fn zero() -> Self {
        Natural(BigUint::zero())
    }

    pub fn one() -> Self {
        Natural(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn pow(&self, exp: u32) -> Natural {
        Natural(self.0.pow(exp))
    }
}

impl From<u64> for Natural {
    fn from(value: u64) -> Self {
        Natural(BigUint::from(value))
    }
}

impl From<u32> for Natural {
    fn from(value: u32) -> Self {
        Natural(BigUint::from(value))
    }
}

impl From<usize> for Natural {
    fn from(value: usize) -> Self {
        Natural(BigUint::from(value))
    }
}

impl From<BigUint> for Natural {
    fn from(value: BigUint) -> Self {
        Natural(value)
    }
}

impl std::str::FromStr for Natural {
    type Err = Error;

    /// Parses plain decimal digits.
    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Domain(format!(
                "not a decimal natural number: {s:?}"
            )));
        }
        BigUint::parse_bytes(s.as_bytes(), 10)
            .map(Natural)
            .ok_or_else(|| Error::Domain(format!("not a decimal natural number: {s:?}")))
    }
}

impl fmt::Display for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Add for Natural {
    type Output = Natural;
    fn add(self, rhs: Natural) -> Natural {
        Natural(self.0 + rhs.0)
    }
}

impl Add<&Natural> for Natural {
    type Output = Natural;
    fn add(self, rhs: &Natural) -> Natural {
        Natural(self.0 + &rhs.0)
    }
}

impl Mul for Natural {
    type Output = Natural;
    fn mul(self, rhs: Natural) -> Natural {
        Natural(self.0 * rhs.0)
    }
}

impl Mul<&Natural> for Natural {
    type Output = Natural;
    fn mul(self, rhs: &Natural) -> Natural {
        Natural(self.0 * &rhs.0)
    }
}

impl Sum for Natural {
    fn sum<I: Iterator<Item = Natural>>(iter: I) -> Natural {
        iter.fold(Natural::zero(), Add::add)
    }
}

/// Values that fit in a `u64` serialize as JSON numbers; larger values
/// serialize as decimal strings so no digits are lost.
impl Serialize for Natural {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(v) => serializer.serialize_u64(v),
            None => serializer.collect_str(&self.0),
        }
    }
}

/// Signed arbitrary-precision integer with a canonical zero (zero is never negative).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SignedCount {
    negative: bool,
    magnitude: Natural,
}

impl SignedCount {
    pub fn new(negative: bool, magnitude: Natural) -> Self {
        let negative = negative && !magnitude.is_zero();
        SignedCount {
            negative,
            magnitude,
        }
    }

    pub fn zero() -> Self {
        SignedCount::new(false, Natural::zero())
    }

    pub fn plus_one() -> Self {
        SignedCount::new(false, Natural::one())
    }

    pub fn minus_one() -> Self {
        SignedCount::new(true, Natural::one())
    }

    /// `(-1)^exponent`.
    pub fn alternating(exponent: usize) -> Self {
        if exponent.is_multiple_of(2) {
            SignedCount::plus_one()
        } else {
            SignedCount::minus_one()
        }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn magnitude(&self) -> &Natural {
        &self.magnitude
    }

    /// `'+'` for nonnegative values, `'-'` otherwise.
    pub fn sign_char(&self) -> char {
        if self.negative {
            '-'
        } else {
            '+'
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        let sign = if self.negative {
            Sign::Minus
        } else {
            Sign::Plus
        };
        BigInt::from_biguint(sign, self.magnitude.0.clone())
    }

    pub fn from_bigint(value: &BigInt) -> Self {
        SignedCount::new(value.is_negative(), Natural(value.magnitude().clone()))
    }

    /// Returns the value as a [`Natural`] if it is nonnegative.
    pub fn to_natural(&self) -> Option<Natural> {
        (!self.negative).then(|| self.magnitude.clone())
    }
}

impl From<Natural> for SignedCount {
    fn from(value: Natural) -> Self {
        SignedCount::new(false, value)
    }
}

impl From<i64> for SignedCount {
    fn from(value: i64) -> Self {
        SignedCount::new(value < 0, Natural::from(value.unsigned_abs()))
    }
}

impl fmt::Display for SignedCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-{}", self.magnitude)
        } else {
            write!(f, "{}", self.magnitude)
        }
    }
}

impl Neg for SignedCount {
    type Output = SignedCount;
    fn neg(self) -> SignedCount {
        SignedCount::new(!self.negative, self.magnitude)
    }
}

impl Add for SignedCount {
    type Output = SignedCount;
    fn add(self, rhs: SignedCount) -> SignedCount {
        SignedCount::from_bigint(&(self.to_bigint() + rhs.to_bigint()))
    }
}

impl Mul for SignedCount {
    type Output = SignedCount;
    fn mul(self, rhs: SignedCount) -> SignedCount {
        SignedCount::new(
            self.negative != rhs.negative,
            self.magnitude * rhs.magnitude,
        )
    }
}

impl Sum for SignedCount {
    fn sum<I: Iterator<Item = SignedCount>>(iter: I) -> SignedCount {
        let total: BigInt = iter.map(|s| s.to_bigint()).sum();
        SignedCount::from_bigint(&total)
    }
}

impl Serialize for SignedCount {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.to_bigint().to_i64() {
            Some(v) => serializer.serialize_i64(v),
            None => serializer.collect_str(self),
        }
    }
}

/// Exact rational in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numerator: BigInt, denominator: BigInt) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::Domain("rational with zero denominator".into()));
        }
        // BigRational::new reduces and moves the sign to the numerator.
        Ok(ExactRational(BigRational::new(numerator, denominator)))
    }

    pub fn from_integer(value: BigInt) -> Self {
        ExactRational(BigRational::from_integer(value))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.numer().clone())
    }
}

impl Add for ExactRational {
    type Output = ExactRational;
    fn add(self, rhs: ExactRational) -> ExactRational {
        ExactRational(self.0 + rhs.0)
    }
}

impl Mul for ExactRational {
    type Output = ExactRational;
    fn mul(self, rhs: ExactRational) -> ExactRational {
        ExactRational(self.0 * rhs.0)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

fn product(range: impl Iterator<Item = u64>) -> Natural {
    Natural(range.fold(BigUint::one(), |acc, k| acc * k))
}

/// `n!`, with `0! = 1`.
pub fn factorial(n: u32) -> Natural {
    product(1..=u64::from(n))
}

/// `(2j-1)!! = 1 * 3 * 5 * ... * (2j-1)`, the number of perfect matchings on `2j` elements.
pub fn double_factorial_odd(j: u32) -> Natural {
    product((1..=u64::from(j)).map(|i| 2 * i - 1))
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> Natural {
    if k > n {
        return Natural::zero();
    }
    let k = k.min(n - k);
    let (n, k) = (u64::from(n), u64::from(k));
    // Each partial product C(n, i) is an integer, so the division is exact.
    let value = (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1));
    Natural(value)
}

/// Number of ways to pick `2j` elements of `[n]` and pair them up:
/// `C(n, 2j) * (2j-1)!!`.
pub fn matching_selection_count(n: u32, j: u32) -> Result<Natural> {
    let matched = j
        .checked_mul(2)
        .filter(|&m| m <= n)
        .ok_or_else(|| Error::Domain(format!("cannot match 2*{j} elements out of {n}")))?;
    Ok(binomial(n, matched) * double_factorial_odd(j))
}

/// Number of forests on `m` labeled vertices made of `k` trees whose roots
/// are a fixed set of `k` vertices: `k * m^(m-k-1)`, and `1` when `k = m`.
pub fn rooted_forest_count_specified_roots(m: u32, k: u32) -> Result<Natural> {
    if k == 0 {
        return Err(Error::Domain(
            "a rooted forest needs at least one root".into(),
        ));
    }
    if k > m {
        return Err(Error::Domain(format!(
            "{k} roots requested on only {m} vertices"
        )));
    }
    if k == m {
        return Ok(Natural::one());
    }
    Ok(Natural::from(k) * Natural::from(m).pow(m - k - 1))
}

/// `(n+1)^(n-1)`, the number of rooted forests on `[n]`.
pub fn cayley_rooted_forest_count(n: u32) -> Result<Natural> {
    if n == 0 {
        return Err(Error::Domain("rooted forest formula needs n >= 1".into()));
    }
    Ok(Natural::from(n + 1).pow(n - 1))
}

/// The `j`-th term `(-1)^j * C(n,2j)(2j-1)!! * (2j+1)(n+1)^(n-2j-1)` of the
/// alternating sum for unrooted forests.
pub fn takacs_term(n: u32, j: u32) -> Result<SignedCount> {
    let matchings = matching_selection_count(n, j)?;
    let forests = rooted_forest_count_specified_roots(n + 1, 2 * j + 1)?;
    Ok(SignedCount::new(j % 2 == 1, matchings * forests))
}

/// Number of forests of unrooted trees on `[n]`, as the integer alternating sum.
/// `n = 0` gives `1` (the empty forest).
pub fn takacs_count(n: u32) -> Result<Natural> {
    let total: SignedCount = (0..=n / 2)
        .map(|j| takacs_term(n, j))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    total
        .to_natural()
        .ok_or_else(|| Error::Internal(format!("alternating sum for n = {n} is negative: {total}")))
}

/// Number of forests of unrooted trees on `[n]`, evaluated from
/// `n!/(n+1) * sum_j (-1)^j (2j+1)(n+1)^(n-2j) / (2^j j! (n-2j)!)`
/// with exact rationals. Fails if the value is not an integer or disagrees
/// with [`takacs_count`].
pub fn takacs_count_eq1(n: u32) -> Result<Natural> {
    if n == 0 {
        return Err(Error::Domain("the rational form needs n >= 1".into()));
    }
    let big = |x: Natural| BigInt::from(x.into_biguint());
    let half = n / 2;
    let factorials: Vec<BigInt> = {
        let mut table = vec![BigInt::one()];
        for k in 1..=n {
            let next = &table[k as usize - 1] * k;
            table.push(next);
        }
        table
    };
    // Every term denominator 2^j j! (n-2j)! divides 2^half half! n!, so the
    // sum is accumulated over that common denominator and reduced once.
    let common =
        big(Natural::from(2u32).pow(half)) * &factorials[half as usize] * &factorials[n as usize];
    let base = Natural::from(n + 1);
    let mut numerator = BigInt::zero();
    for j in 0..=half {
        let denominator = big(Natural::from(2u32).pow(j))
            * &factorials[j as usize]
            * &factorials[(n - 2 * j) as usize];
        let scale = &common / &denominator;
        debug_assert!((&scale * &denominator) == common);
        let term = BigInt::from(2 * j + 1) * big(base.pow(n - 2 * j)) * scale;
        if j % 2 == 1 {
            numerator -= term;
        } else {
            numerator += term;
        }
    }
    let sum = ExactRational::new(numerator, common)?;
    let prefactor = ExactRational::new(factorials[n as usize].clone(), BigInt::from(n + 1))?;
    let value = prefactor * sum;
    let integer = value.to_integer().ok_or_else(|| {
        Error::Internal(format!(
            "rational form for n = {n} is not an integer: {value}"
        ))
    })?;
    let result = SignedCount::from_bigint(&integer)
        .to_natural()
        .ok_or_else(|| Error::Internal(format!("rational form for n = {n} is negative")))?;
    let expected = takacs_count(n)?;
    if result != expected {
        return Err(Error::Internal(format!(
            "rational form gives {result} but the integer sum gives {expected} for n = {n}"
        )));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    // Oracles: direct enumeration with machine integers, independent of the
    // closed forms above.
    fn subsets_of_size(n: u32, k: u32) -> u64 {
        (0u32..1 << n).filter(|m| m.count_ones() == k).count() as u64
    }

    fn perfect_matchings(items: &[u32]) -> u64 {
        match items {
            [] => 1,
            [_] => 0,
            [first, rest @ ..] => (0..rest.len())
                .map(|i| {
                    let _ = first;
                    let mut remaining = rest.to_vec();
                    remaining.remove(i);
                    perfect_matchings(&remaining)
                })
                .sum(),
        }
    }

    fn matchings_on_some(n: u32, j: u32) -> u64 {
        (0u32..1 << n)
            .filter(|m| m.count_ones() == 2 * j)
            .map(|m| {
                let items: Vec<u32> = (0..n).filter(|i| m >> i & 1 == 1).collect();
                perfect_matchings(&items)
            })
            .sum()
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), nat(1));
        assert_eq!(factorial(1), nat(1));
        assert_eq!(factorial(5), nat((1..=5).product()));
        assert_eq!(factorial(20), nat((1..=20u64).product()));
    }

    #[test]
    fn double_factorial_values() {
        assert_eq!(double_factorial_odd(0), nat(1));
        assert_eq!(double_factorial_odd(1), nat(1));
        assert_eq!(double_factorial_odd(3), nat(15));
        for j in 0..5 {
            let items: Vec<u32> = (0..2 * j).collect();
            assert_eq!(double_factorial_odd(j), nat(perfect_matchings(&items)));
        }
    }

    #[test]
    fn binomial_values() {
        for n in 0..10 {
            assert_eq!(binomial(n, 0), nat(1));
        }
        assert_eq!(binomial(4, 2), nat(subsets_of_size(4, 2)));
        assert_eq!(binomial(4, 2), nat(6));
        assert_eq!(binomial(2, 3), nat(0));
        for n in 0..12 {
            for k in 0..=n {
                assert_eq!(binomial(n, k), nat(subsets_of_size(n, k)), "C({n},{k})");
            }
        }
    }

    #[test]
    fn matching_selection_values() {
        assert_eq!(matching_selection_count(5, 0).unwrap(), nat(1));
        assert_eq!(matching_selection_count(4, 1).unwrap(), nat(6));
        assert_eq!(matching_selection_count(4, 2).unwrap(), nat(3));
        for n in 0..9 {
            for j in 0..=n / 2 {
                assert_eq!(
                    matching_selection_count(n, j).unwrap(),
                    nat(matchings_on_some(n, j))
                );
            }
        }
    }

    #[test]
    fn matching_selection_rejects_oversized_j() {
        assert!(matches!(
            matching_selection_count(3, 2),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            matching_selection_count(3, u32::MAX),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn matching_identity_with_falling_factorial() {
        for n in 0..=20u32 {
            for j in 0..=n / 2 {
                let lhs = matching_selection_count(n, j).unwrap()
                    * Natural::from(2u32).pow(j)
                    * factorial(j);
                let falling = product((u64::from(n - 2 * j) + 1)..=u64::from(n));
                assert_eq!(lhs, falling, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn rooted_forest_count_values() {
        assert_eq!(rooted_forest_count_specified_roots(4, 4).unwrap(), nat(1));
        assert_eq!(rooted_forest_count_specified_roots(4, 1).unwrap(), nat(16));
        assert_eq!(rooted_forest_count_specified_roots(4, 2).unwrap(), nat(8));
        assert_eq!(rooted_forest_count_specified_roots(1, 1).unwrap(), nat(1));
    }

    #[test]
    fn rooted_forest_count_domain() {
        assert!(matches!(
            rooted_forest_count_specified_roots(4, 0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            rooted_forest_count_specified_roots(3, 4),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn cayley_values() {
        assert_eq!(cayley_rooted_forest_count(1).unwrap(), nat(1));
        assert_eq!(cayley_rooted_forest_count(2).unwrap(), nat(3));
        assert_eq!(cayley_rooted_forest_count(3).unwrap(), nat(16));
        assert!(matches!(
            cayley_rooted_forest_count(0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn term_values() {
        assert_eq!(takacs_term(2, 0).unwrap(), SignedCount::from(3));
        assert_eq!(takacs_term(2, 1).unwrap(), SignedCount::from(-1));
        assert_eq!(takacs_term(3, 1).unwrap(), SignedCount::from(-9));
        assert!(takacs_term(3, 2).is_err());
    }

    #[test]
    fn full_matching_term_is_odd_double_factorial() {
        for half in 0..8u32 {
            let n = 2 * half;
            let term = takacs_term(n, half).unwrap();
            assert_eq!(term.magnitude(), &double_factorial_odd(half));
            assert_eq!(term.is_negative(), half % 2 == 1);
        }
    }

    #[test]
    fn count_values() {
        assert_eq!(takacs_count(0).unwrap(), nat(1));
        assert_eq!(takacs_count(1).unwrap(), nat(1));
        assert_eq!(takacs_count(3).unwrap(), nat(7));
        assert_eq!(takacs_count(4).unwrap(), nat(38));
    }

    #[test]
    fn rational_form_values() {
        assert_eq!(takacs_count_eq1(1).unwrap(), nat(1));
        assert_eq!(takacs_count_eq1(2).unwrap(), nat(2));
        assert_eq!(takacs_count_eq1(5).unwrap(), nat(291));
        assert!(matches!(takacs_count_eq1(0), Err(Error::Domain(_))));
    }

    #[test]
    fn rational_form_matches_integer_sum() {
        for n in 1..=60 {
            assert_eq!(takacs_count_eq1(n).unwrap(), takacs_count(n).unwrap());
        }
    }

    #[test]
    fn natural_parses_decimal() {
        let big = Natural::from(7u32).pow(90);
        assert_eq!(big.to_string().parse::<Natural>().unwrap(), big);
        assert!("".parse::<Natural>().is_err());
        assert!("-3".parse::<Natural>().is_err());
        assert!("1e5".parse::<Natural>().is_err());
    }

    #[test]
    fn signed_count_has_canonical_zero() {
        let z = SignedCount::new(true, Natural::zero());
        assert!(!z.is_negative());
        assert_eq!(z, SignedCount::zero());
        assert_eq!(-SignedCount::zero(), SignedCount::zero());
        assert_eq!(z.to_string(), "0");
        assert_eq!(
            SignedCount::from(-1) + SignedCount::from(1),
            SignedCount::zero()
        );
    }

    #[test]
    fn rational_is_reduced() {
        let r = ExactRational::new(BigInt::from(6), BigInt::from(-4)).unwrap();
        assert_eq!(r.numerator(), &BigInt::from(-3));
        assert_eq!(r.denominator(), &BigInt::from(2));
        assert!(ExactRational::new(BigInt::one(), BigInt::zero()).is_err());
    }

    #[test]
    fn serialization_keeps_all_digits() {
        assert_eq!(serde_json::to_string(&nat(42)).unwrap(), "42");
        let big = Natural::from(10u32).pow(30);
        assert_eq!(
            serde_json::to_string(&big).unwrap(),
            "\"1000000000000000000000000000000\""
        );
        assert_eq!(serde_json::to_string(&SignedCount::from(-7)).unwrap(), "-7");
    }
}
