//! Elements of the Vilenkin group `G` and its dual `G*`.
//!
//! Both groups consist of digit sequences `(x_j)_{j in Z}` with digits in
//! `{0, .., p-1}` that vanish for all sufficiently negative `j`; the group law
//! is digit-wise addition mod `p` with no carries. Only finitely supported
//! sequences are represented as values. Infinite ones appear only as members
//! of cylinder sets (see [`crate::cylinder`]).
//!
//! Position convention: `lambda(x) = sum_j x_j p^{-j}`, so position `0` holds
//! the units digit, positive positions are fractional digits, and the subgroup
//! `H` (resp. `H⊥`) is the set of points supported on positions `<= 0`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest prime accepted by the textual digit notation (`0-9a-z`).
pub const MAX_TOKEN_PRIME: u32 = 36;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 || (2..).take_while(|d: &u32| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn big(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `p^k` as an exact rational, for any sign of `k`.
    pub fn power(self, k: i64) -> BigRational {
        let base = BigInt::from(self.0).pow(k.unsigned_abs() as u32);
        if k >= 0 {
            BigRational::from_integer(base)
        } else {
            BigRational::new(BigInt::one(), base)
        }
    }

    pub fn pow_u64(self, k: u32) -> u64 {
        (self.0 as u64).pow(k)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Value `exp(2 pi i e / p)` of a character, stored as the exponent `e mod p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    prime: Prime,
    exponent: u32,
}

impl RootOfUnity {
    pub fn new(prime: Prime, exponent: u64) -> Self {
        RootOfUnity {
            prime,
            exponent: (exponent % prime.get() as u64) as u32,
        }
    }

    pub fn exponent(self) -> u32 {
        self.exponent
    }

    pub fn prime(self) -> Prime {
        self.prime
    }

    /// Product of two roots: exponents add.
    pub fn times(self, other: RootOfUnity) -> RootOfUnity {
        RootOfUnity::new(self.prime, self.exponent as u64 + other.exponent as u64)
    }

    pub fn conj(self) -> RootOfUnity {
        RootOfUnity::new(self.prime, (self.prime.get() - self.exponent) as u64)
    }
}

/// A finitely supported element of `G` or `G*`.
///
/// Only nonzero digits are stored, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point {
    prime: Prime,
    digits: BTreeMap<i64, u32>,
}

impl Point {
    /// The identity element θ.
    pub fn zero(prime: Prime) -> Self {
        Point {
            prime,
            digits: BTreeMap::new(),
        }
    }

    pub fn from_digits<I>(prime: Prime, digits: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, u32)>,
    {
        let mut map = BTreeMap::new();
        for (position, digit) in digits {
            if digit >= prime.get() {
                return Err(Error::DigitOutOfRange {
                    digit,
                    position,
                    prime,
                });
            }
            if digit == 0 {
                map.remove(&position);
            } else {
                map.insert(position, digit);
            }
        }
        Ok(Point { prime, digits: map })
    }

    /// Single digit `digit` at `position`; `digit` is reduced mod p.
    pub fn single(prime: Prime, position: i64, digit: u32) -> Self {
        let mut digits = BTreeMap::new();
        let d = digit % prime.get();
        if d != 0 {
            digits.insert(position, d);
        }
        Point { prime, digits }
    }

    /// The point `0.σ`: digit `sigma` at position 1.
    pub fn fractional_digit(prime: Prime, sigma: u32) -> Self {
        Point::single(prime, 1, sigma)
    }

    /// `h_[α]` (or `ω_[α]` on the dual side): base-p digits of α at positions
    /// `0, -1, -2, ..`, least significant at position 0.
    pub fn from_index(prime: Prime, alpha: u64) -> Self {
        let p = prime.get() as u64;
        let mut digits = BTreeMap::new();
        let mut rest = alpha;
        let mut position = 0i64;
        while rest > 0 {
            let d = (rest % p) as u32;
            if d != 0 {
                digits.insert(position, d);
            }
            rest /= p;
            position -= 1;
        }
        Point { prime, digits }
    }

    /// The point whose value is `index * p^{-resolution}`: base-p digits of
    /// `index` placed at positions `resolution, resolution - 1, ..`.
    pub fn from_scaled_index(prime: Prime, index: &BigUint, resolution: i64) -> Self {
        let p = BigUint::from(prime.get());
        let mut digits = BTreeMap::new();
        let mut rest = index.clone();
        let mut position = resolution;
        while !rest.is_zero() {
            let (q, r) = rest.div_rem(&p);
            let d = r.to_u32().unwrap_or(0);
            if d != 0 {
                digits.insert(position, d);
            }
            rest = q;
            position -= 1;
        }
        Point { prime, digits }
    }

    /// `lambda(self) * p^resolution` as an integer. Requires no digits beyond
    /// `resolution`.
    pub fn scaled_index(&self, resolution: i64) -> BigUint {
        debug_assert!(self.max_position().is_none_or(|m| m <= resolution));
        let p = BigUint::from(self.prime.get());
        let mut acc = BigUint::zero();
        let Some(low) = self.min_position() else {
            return acc;
        };
        for position in low..=resolution {
            acc = acc * &p + BigUint::from(self.digit(position));
        }
        acc
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn digit(&self, position: i64) -> u32 {
        self.digits.get(&position).copied().unwrap_or(0)
    }

    /// Nonzero digits in increasing position order.
    pub fn digits(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.digits.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn min_position(&self) -> Option<i64> {
        self.digits.keys().next().copied()
    }

    pub fn max_position(&self) -> Option<i64> {
        self.digits.keys().next_back().copied()
    }

    fn same_prime(&self, other: &Point) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch {
                left: self.prime,
                right: other.prime,
            });
        }
        Ok(())
    }

    /// `x ⊕ y`: digit-wise sum mod p.
    pub fn add(&self, other: &Point) -> Result<Point> {
        self.same_prime(other)?;
        Ok(self.add_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Point) -> Point {
        let p = self.prime.get();
        let mut digits = self.digits.clone();
        for (&position, &d) in &other.digits {
            let sum = (digits.get(&position).copied().unwrap_or(0) + d) % p;
            if sum == 0 {
                digits.remove(&position);
            } else {
                digits.insert(position, sum);
            }
        }
        Point {
            prime: self.prime,
            digits,
        }
    }

    /// Inverse under ⊕: digit-wise `p - digit`.
    pub fn negate(&self) -> Point {
        let p = self.prime.get();
        Point {
            prime: self.prime,
            digits: self.digits.iter().map(|(&k, &d)| (k, p - d)).collect(),
        }
    }

    /// `x ⊖ y`.
    pub fn sub(&self, other: &Point) -> Result<Point> {
        self.add(&other.negate())
    }

    /// λ (or λ*) value `sum_j x_j p^{-j}`.
    pub fn lambda_value(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for (&position, &d) in &self.digits {
            acc += BigRational::from_integer(BigInt::from(d)) * self.prime.power(-position);
        }
        acc
    }

    /// `A^k` on `G` / `B^k` on `G*`: `(shift(x, k))_j = x_{j+k}`.
    pub fn shift(&self, k: i64) -> Point {
        Point {
            prime: self.prime,
            digits: self.digits.iter().map(|(&j, &d)| (j - k, d)).collect(),
        }
    }

    /// Keeps only digits at positions `<= resolution`.
    pub fn truncate(&self, resolution: i64) -> Point {
        Point {
            prime: self.prime,
            digits: self
                .digits
                .range(..=resolution)
                .map(|(&k, &v)| (k, v))
                .collect(),
        }
    }

    /// True when both points carry the same digits at every position `<= n`.
    pub fn agrees_up_to(&self, other: &Point, n: i64) -> bool {
        self.digits.range(..=n).eq(other.digits.range(..=n))
    }

    /// ρ: drops all digits at positions `<= 0`, i.e. the `H⊥` component.
    pub fn rho(&self) -> Point {
        Point {
            prime: self.prime,
            digits: self.digits.range(1..).map(|(&k, &v)| (k, v)).collect(),
        }
    }

    /// Membership in `U*` (no digits at positions `<= 0`).
    pub fn in_unit(&self) -> bool {
        self.min_position().is_none_or(|m| m >= 1)
    }

    /// Membership in `H⊥` (no digits at positions `> 0`).
    pub fn in_lattice(&self) -> bool {
        self.max_position().is_none_or(|m| m <= 0)
    }

    /// The self-map `I` of `U*`: `B ω` when `ω_1 = 0`, otherwise
    /// `B(ω ⊕ 0.(p-σ))`. Equal to `ρ(B ω)`.
    pub fn i_map(&self) -> Result<Point> {
        if !self.in_unit() {
            return Err(Error::Domain(format!("{self} is not in U*")));
        }
        let sigma = self.digit(1);
        let cleared = if sigma == 0 {
            self.clone()
        } else {
            self.add_unchecked(&Point::fractional_digit(self.prime, self.prime.get() - sigma))
        };
        Ok(cleared.shift(1))
    }

    /// Compares by λ value (lexicographic from the lowest position).
    pub fn cmp_value(&self, other: &Point) -> Ordering {
        let mut a = self.digits.iter().peekable();
        let mut b = other.digits.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((&pa, &da)), Some((&pb, &db))) => match pa.cmp(&pb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if da != db {
                            return da.cmp(&db);
                        }
                        a.next();
                        b.next();
                    }
                },
            }
        }
    }

    /// Parses a `D.F` token: `D` holds positions `.., -1, 0` (most
    /// significant first, may be empty), `F` holds positions `1, 2, ..`.
    /// Returns the point and the number of fractional digits written.
    pub fn parse_token(prime: Prime, token: &str) -> std::result::Result<(Point, usize), TokenError> {
        if prime.get() > MAX_TOKEN_PRIME {
            return Err(TokenError::new(0, format!("p = {prime} has no digit notation")));
        }
        let Some(dot) = token.find('.') else {
            return Err(TokenError::new(0, format!("token `{token}` has no `.`")));
        };
        if token[dot + 1..].contains('.') {
            return Err(TokenError::new(dot + 1, "second `.` in token".into()));
        }
        let (int_part, frac_part) = (&token[..dot], &token[dot + 1..]);
        let mut digits = BTreeMap::new();
        let int_len = int_part.chars().count() as i64;
        for (i, ch) in int_part.chars().enumerate() {
            let d = digit_value(ch, prime).map_err(|m| TokenError::new(i, m))?;
            if d != 0 {
                digits.insert(i as i64 + 1 - int_len, d);
            }
        }
        let mut frac_len = 0;
        for (i, ch) in frac_part.chars().enumerate() {
            let d = digit_value(ch, prime).map_err(|m| TokenError::new(dot + 1 + i, m))?;
            if d != 0 {
                digits.insert(i as i64 + 1, d);
            }
            frac_len += 1;
        }
        Ok((Point { prime, digits }, frac_len))
    }

    pub fn parse(prime: Prime, token: &str) -> std::result::Result<Point, TokenError> {
        Point::parse_token(prime, token).map(|(point, _)| point)
    }

    /// Token with exactly `frac_digits` fractional digits (at least as many
    /// as the point needs) and a minimal integer part.
    pub fn to_token(&self, frac_digits: usize) -> String {
        let low = self.min_position().unwrap_or(0).min(0);
        let high = self
            .max_position()
            .unwrap_or(0)
            .max(frac_digits as i64);
        let mut out = String::new();
        for position in low..=0 {
            out.push(digit_char(self.digit(position)));
        }
        out.push('.');
        for position in 1..=high {
            out.push(digit_char(self.digit(position)));
        }
        out
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.prime
            .cmp(&other.prime)
            .then_with(|| self.cmp_value(other))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prime.get() <= MAX_TOKEN_PRIME {
            f.write_str(&self.to_token(0))
        } else {
            write!(f, "{:?}", self.digits)
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point(p={}, {})", self.prime, self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenError {
    pub column: usize,
    pub message: String,
}

impl TokenError {
    fn new(column: usize, message: String) -> Self {
        TokenError { column, message }
    }
}

impl fmt::Display for TokenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column + 1, self.message)
    }
}

impl std::error::Error for TokenError {}

fn digit_value(ch: char, prime: Prime) -> std::result::Result<u32, String> {
    let d = ch
        .to_digit(36)
        .ok_or_else(|| format!("`{ch}` is not a digit"))?;
    if d >= prime.get() {
        return Err(format!("digit `{ch}` is not below p = {prime}"));
    }
    Ok(d)
}

fn digit_char(d: u32) -> char {
    std::char::from_digit(d, 36).expect("digit below 36")
}

/// Character `χ(x, ω) = exp(2πi/p · sum_j x_j ω_{1-j})`.
pub fn character(x: &Point, omega: &Point) -> Result<RootOfUnity> {
    x.same_prime(omega)?;
    let p = x.prime.get() as u64;
    let e = x
        .digits()
        .map(|(j, d)| d as u64 * omega.digit(1 - j) as u64 % p)
        .sum::<u64>();
    Ok(RootOfUnity::new(x.prime, e))
}

/// Dual Walsh function `W*_α(ω) = χ(h_[α], ω)`.
pub fn walsh_dual(alpha: u64, omega: &Point) -> RootOfUnity {
    character(&Point::from_index(omega.prime, alpha), omega).expect("same prime")
}

/// Walsh function `W_α(x) = χ(x, ω_[α])`.
pub fn walsh(alpha: u64, x: &Point) -> RootOfUnity {
    character(x, &Point::from_index(x.prime, alpha)).expect("same prime")
}

/// Which of the three ways two points of `U*` can share an `I`-image holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberRelation {
    /// One point has first digit σ ≠ 0, the other first digit 0, and they
    /// differ by `0.σ`. `reversed` is set when the second argument is the
    /// one carrying σ.
    TranslateBySigma { sigma: u32, reversed: bool },
    /// Both have first digit 0 and are equal.
    EqualInFirstCell,
    /// Both have nonzero first digit and agree from position 2 on.
    DifferAtFirstDigit,
    /// `I` separates them.
    Distinct,
}

impl FiberRelation {
    pub fn tag(self) -> &'static str {
        match self {
            FiberRelation::TranslateBySigma { .. } => "i",
            FiberRelation::EqualInFirstCell => "ii",
            FiberRelation::DifferAtFirstDigit => "iii",
            FiberRelation::Distinct => "none",
        }
    }

    pub fn shares_image(self) -> bool {
        self != FiberRelation::Distinct
    }
}

/// Classifies a pair of points of `U*` by the case analysis of the fibres
/// of `I`.
pub fn classify_fiber(omega1: &Point, omega2: &Point) -> Result<FiberRelation> {
    omega1.same_prime(omega2)?;
    for omega in [omega1, omega2] {
        if !omega.in_unit() {
            return Err(Error::Domain(format!("{omega} is not in U*")));
        }
    }
    let (s1, s2) = (omega1.digit(1), omega2.digit(1));
    let tail_equal = omega1.digits.range(2..).eq(omega2.digits.range(2..));
    Ok(match (s1, s2) {
        _ if !tail_equal => FiberRelation::Distinct,
        (0, 0) => FiberRelation::EqualInFirstCell,
        (0, sigma) => FiberRelation::TranslateBySigma {
            sigma,
            reversed: true,
        },
        (sigma, 0) => FiberRelation::TranslateBySigma {
            sigma,
            reversed: false,
        },
        _ => FiberRelation::DifferAtFirstDigit,
    })
}
