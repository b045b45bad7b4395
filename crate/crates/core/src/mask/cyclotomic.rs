//! Exact arithmetic in `ℚ(ζ_p)` and a floating stand-in with the same API.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::group::Prime;

/// Field operations needed by mask analysis.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero(prime: Prime) -> Self;
    fn one(prime: Prime) -> Self;
    /// `ζ_p^e`.
    fn root(prime: Prime, e: u32) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn conj(&self) -> Self;
    fn div_int(&self, d: u64) -> Self;
    fn is_zero(&self) -> bool;
    fn to_complex(&self) -> Complex64;

    fn norm_sq(&self) -> Self {
        self.mul(&self.conj())
    }

    fn is_one(&self) -> bool {
        self.sub(&Self::one(self.prime())).is_zero()
    }

    fn prime(&self) -> Prime;
}

/// An element `Σ_{k<p-1} c_k ζ^k` of `ℚ(ζ_p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    prime: Prime,
    coords: Vec<BigRational>,
}

impl Cyclotomic {
    /// Coordinates over `1, ζ, …, ζ^{p-2}`; missing ones are zero.
    pub fn from_coords(prime: Prime, coords: Vec<BigRational>) -> Option<Self> {
        let len = prime.get() as usize - 1;
        if coords.len() > len {
            return None;
        }
        let mut coords = coords;
        coords.resize(len, BigRational::zero());
        Some(Cyclotomic { prime, coords })
    }

    pub fn from_rational(prime: Prime, r: BigRational) -> Self {
        Cyclotomic::from_coords(prime, vec![r]).expect("one coordinate")
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// The rational value, if the element lies in `ℚ`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coords[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coords[0])
    }

    /// Reduces a length-`p` vector over `1, ζ, …, ζ^{p-1}` using
    /// `1 + ζ + … + ζ^{p-1} = 0`.
    fn from_full(prime: Prime, mut full: Vec<BigRational>) -> Self {
        let top = full.pop().expect("length p");
        let coords = full.into_iter().map(|c| c - &top).collect();
        Cyclotomic { prime, coords }
    }

    fn to_full(&self) -> Vec<BigRational> {
        let mut full = self.coords.clone();
        full.push(BigRational::zero());
        full
    }
}

impl Scalar for Cyclotomic {
    fn zero(prime: Prime) -> Self {
        Cyclotomic::from_coords(prime, Vec::new()).expect("empty")
    }

    fn one(prime: Prime) -> Self {
        Cyclotomic::from_rational(prime, BigRational::one())
    }

    fn root(prime: Prime, e: u32) -> Self {
        let p = prime.get() as usize;
        let mut full = vec![BigRational::zero(); p];
        full[e as usize % p] = BigRational::one();
        Cyclotomic::from_full(prime, full)
    }

    fn add(&self, other: &Self) -> Self {
        assert_eq!(self.prime, other.prime, "prime mismatch");
        Cyclotomic {
            prime: self.prime,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.prime, other.prime, "prime mismatch");
        Cyclotomic {
            prime: self.prime,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.prime, other.prime, "prime mismatch");
        let p = self.prime.get() as usize;
        let mut full = vec![BigRational::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    full[(i + j) % p] += a * b;
                }
            }
        }
        Cyclotomic::from_full(self.prime, full)
    }

    fn conj(&self) -> Self {
        let p = self.prime.get() as usize;
        let full = self.to_full();
        let mut out = vec![BigRational::zero(); p];
        for (k, c) in full.into_iter().enumerate() {
            out[(p - k) % p] = c;
        }
        Cyclotomic::from_full(self.prime, out)
    }

    fn div_int(&self, d: u64) -> Self {
        let d = BigRational::from_integer(BigInt::from(d));
        Cyclotomic {
            prime: self.prime,
            coords: self.coords.iter().map(|c| c / &d).collect(),
        }
    }

    fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn to_complex(&self) -> Complex64 {
        let p = self.prime.get() as f64;
        self.coords
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let angle = 2.0 * std::f64::consts::PI * k as f64 / p;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle)
            })
            .sum()
    }

    fn prime(&self) -> Prime {
        self.prime
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write_rational(f, r);
        }
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if k == 0 || !c.is_one() {
                write_rational(f, c)?;
            }
            match k {
                0 => {}
                1 => f.write_str("ζ")?,
                _ => write!(f, "ζ^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({self})")
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Tolerance of the floating backend.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// Complex floating values compared up to [`FLOAT_TOLERANCE`].
#[derive(Clone, Copy, Debug)]
pub struct Approx {
    prime: Prime,
    value: Complex64,
}

impl Approx {
    pub fn new(prime: Prime, value: Complex64) -> Self {
        Approx { prime, value }
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }
}

impl PartialEq for Approx {
    fn eq(&self, other: &Self) -> bool {
        self.prime == other.prime && (self.value - other.value).norm() <= FLOAT_TOLERANCE
    }
}

impl fmt::Display for Approx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value.im.abs() <= FLOAT_TOLERANCE {
            write!(f, "{}", self.value.re)
        } else {
            write!(f, "{}{:+}i", self.value.re, self.value.im)
        }
    }
}

impl Scalar for Approx {
    fn zero(prime: Prime) -> Self {
        Approx::new(prime, Complex64::new(0.0, 0.0))
    }

    fn one(prime: Prime) -> Self {
        Approx::new(prime, Complex64::new(1.0, 0.0))
    }

    fn root(prime: Prime, e: u32) -> Self {
        let angle = 2.0 * std::f64::consts::PI * (e % prime.get()) as f64 / prime.get() as f64;
        Approx::new(prime, Complex64::from_polar(1.0, angle))
    }

    fn add(&self, other: &Self) -> Self {
        Approx::new(self.prime, self.value + other.value)
    }

    fn sub(&self, other: &Self) -> Self {
        Approx::new(self.prime, self.value - other.value)
    }

    fn mul(&self, other: &Self) -> Self {
        Approx::new(self.prime, self.value * other.value)
    }

    fn conj(&self) -> Self {
        Approx::new(self.prime, self.value.conj())
    }

    fn div_int(&self, d: u64) -> Self {
        Approx::new(self.prime, self.value / d as f64)
    }

    fn is_zero(&self) -> bool {
        self.value.norm() <= FLOAT_TOLERANCE
    }

    fn to_complex(&self) -> Complex64 {
        self.value
    }

    fn prime(&self) -> Prime {
        self.prime
    }
}
