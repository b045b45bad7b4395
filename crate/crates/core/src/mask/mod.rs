//! Walsh-polynomial masks `m(ω) = Σ_α a_α conj(W*_α(ω))`.

pub mod blocked;
pub mod cyclotomic;
pub mod phi;
pub mod transform;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::cylinder::Cylinder;
use crate::error::{Error, Result};
use crate::group::{walsh_dual, Point, Prime};
use crate::verdict::{Verdict, Witness};

pub use blocked::{blocked_set_find, validate_blocked_set, BlockedSetReport};
pub use cyclotomic::{Approx, Cyclotomic, Scalar};
pub use phi::{phi_hat, scaling_criteria_check, ScalingCriteria};

/// Largest `p^n` accepted for a mask.
pub const MAX_MASK_LEN: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq)]
pub struct Mask<S> {
    prime: Prime,
    n: u32,
    coeffs: Vec<S>,
}

impl<S: Scalar> Mask<S> {
    pub fn new(prime: Prime, n: u32, coeffs: Vec<S>) -> Result<Self> {
        let len = checked_len(prime, n)?;
        if coeffs.len() != len {
            return Err(Error::Domain(format!(
                "a mask with p = {prime}, n = {n} needs {len} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Mask { prime, n, coeffs })
    }

    /// Recovers the coefficients from the `p^n` cell values.
    pub fn from_values(prime: Prime, n: u32, values: Vec<S>) -> Result<Self> {
        let len = checked_len(prime, n)?;
        if values.len() != len {
            return Err(Error::Domain(format!(
                "a mask with p = {prime}, n = {n} needs {len} cell values, got {}",
                values.len()
            )));
        }
        let coeffs = transform::inverse(prime, n, &values);
        Ok(Mask { prime, n, coeffs })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coefficient_sum(&self) -> S {
        self.coeffs
            .iter()
            .fold(S::zero(self.prime), |acc, a| acc.add(a))
    }

    /// Values on the resolution-`n` cells of `U*`.
    pub fn values(&self) -> StepTable<S> {
        StepTable {
            prime: self.prime,
            resolution: self.n as i64,
            scale: 0,
            values: transform::forward(self.prime, self.n, &self.coeffs),
        }
    }

    pub fn values_naive(&self) -> Vec<S> {
        transform::forward_naive(self.prime, self.n, &self.coeffs)
    }

    /// `m(ω)` straight from the Walsh functions.
    pub fn eval(&self, omega: &Point) -> S {
        self.coeffs
            .iter()
            .enumerate()
            .fold(S::zero(self.prime), |acc, (alpha, a)| {
                let w = walsh_dual(alpha as u64, omega).conj();
                acc.add(&a.mul(&S::root(self.prime, w.exponent())))
            })
    }
}

fn checked_len(prime: Prime, n: u32) -> Result<usize> {
    if n == 0 {
        return Err(Error::Domain("mask degree n must be at least 1".into()));
    }
    (prime.get() as u64)
        .checked_pow(n)
        .filter(|&l| l <= MAX_MASK_LEN)
        .map(|l| l as usize)
        .ok_or_else(|| Error::Unsupported(format!("p^n = {prime}^{n} is too large")))
}

/// A function on `B^R U*` constant on the cells of resolution `K`; cell `s`
/// is `[s p^{-K}, (s+1) p^{-K})`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepTable<S> {
    pub prime: Prime,
    pub resolution: i64,
    pub scale: i64,
    pub values: Vec<S>,
}

impl<S: Scalar> StepTable<S> {
    pub fn cell(&self, s: usize) -> Cylinder {
        Cylinder::from_index(self.prime, &BigUint::from(s), self.resolution)
    }

    /// Index of the cell containing `omega`, if it lies in the region.
    pub fn index_of(&self, omega: &Point) -> Option<usize> {
        if omega.min_position().is_some_and(|m| m < 1 - self.scale) {
            return None;
        }
        omega
            .truncate(self.resolution)
            .scaled_index(self.resolution)
            .to_usize()
    }

    pub fn value_at(&self, omega: &Point) -> Option<&S> {
        self.index_of(omega).map(|i| &self.values[i])
    }

    /// λ*-intervals with their values, adjacent equal values merged.
    pub fn rows(&self) -> Vec<(BigRational, BigRational, S)> {
        let mut rows: Vec<(BigRational, BigRational, S)> = Vec::new();
        for (s, v) in self.values.iter().enumerate() {
            let (lo, hi) = self.cell(s).interval();
            match rows.last_mut() {
                Some(last) if last.2 == *v && last.1 == lo => last.1 = hi,
                _ => rows.push((lo, hi, v.clone())),
            }
        }
        rows
    }
}

/// Coefficient sum, `m(θ) = 1`, and the QMF identity on every sibling group.
#[derive(Clone, Debug)]
pub struct MaskHypotheses<S> {
    pub coefficient_sum: S,
    pub value_at_theta: S,
    /// `(cells differing in ω_1, Σ |m|²)` for each group where the sum is not 1.
    pub qmf_violations: Vec<(Vec<usize>, S)>,
}

impl<S: Scalar> MaskHypotheses<S> {
    pub fn sum_is_one(&self) -> bool {
        self.coefficient_sum.is_one()
    }

    pub fn theta_is_one(&self) -> bool {
        self.value_at_theta.is_one()
    }

    pub fn qmf(&self) -> bool {
        self.qmf_violations.is_empty()
    }

    pub fn verdict(&self) -> Verdict {
        let sum = if self.sum_is_one() {
            Verdict::pass()
        } else {
            Verdict::fail(Witness::new(format!(
                "coefficients sum to {}",
                self.coefficient_sum
            )))
        };
        let theta = if self.theta_is_one() {
            Verdict::pass()
        } else {
            Verdict::fail(Witness::new(format!("m(θ) = {}", self.value_at_theta)))
        };
        let qmf = match self.qmf_violations.first() {
            None => Verdict::pass(),
            Some((cells, total)) => Verdict::fail(Witness::new(format!(
                "cells {cells:?} give Σ|m|² = {total}; {} groups violate the identity",
                self.qmf_violations.len()
            ))),
        };
        Verdict::all(vec![
            ("coefficient sum 1".into(), sum),
            ("m(θ) = 1".into(), theta),
            ("QMF".into(), qmf),
        ])
    }
}

pub fn check_mask_hypotheses<S: Scalar>(m: &Mask<S>) -> MaskHypotheses<S> {
    let table = m.values();
    let p = m.prime.get() as usize;
    let group = table.values.len() / p;
    let mut qmf_violations = Vec::new();
    for t in 0..group {
        let cells: Vec<usize> = (0..p).map(|l| l * group + t).collect();
        let total = cells
            .iter()
            .fold(S::zero(m.prime), |acc, &c| acc.add(&table.values[c].norm_sq()));
        if !total.is_one() {
            qmf_violations.push((cells, total));
        }
    }
    MaskHypotheses {
        coefficient_sum: m.coefficient_sum(),
        value_at_theta: table.values[0].clone(),
        qmf_violations,
    }
}
