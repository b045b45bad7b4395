//! The scaling-function transform `φ̂(ω) = Π_{j>=1} m(B^{-j} ω)`.
//!
//! On `B^R U*` factor `j` only sees digits `1-j ..= n-j` of ω, so factors
//! with `j >= R + n` are `m(θ) = 1` and `φ̂` is constant on cells of
//! resolution `n - 1`.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::cyclotomic::Scalar;
use super::{Mask, StepTable};
use crate::error::{Error, Result};
use crate::group::Point;
use crate::verdict::{Verdict, Witness};

/// Exact `φ̂` on `B^R U*` at resolution `n - 1`.
pub fn phi_hat<S: Scalar>(m: &Mask<S>, scale: u32) -> Result<StepTable<S>> {
    let prime = m.prime();
    if !m.coefficient_sum().is_one() {
        return Err(Error::Hypothesis(format!(
            "coefficients sum to {}, so the infinite product does not settle near θ",
            m.coefficient_sum()
        )));
    }
    let n = m.n() as i64;
    let res = n - 1;
    let cells = (prime.get() as u64)
        .checked_pow(scale + m.n() - 1)
        .filter(|&c| c <= super::MAX_MASK_LEN)
        .ok_or_else(|| Error::Unsupported(format!("region B^{scale} U* is too large")))?
        as usize;
    let mvals = m.values();
    let factors = scale as i64 + n - 1;
    let values = (0..cells)
        .map(|s| {
            let omega = Point::from_scaled_index(prime, &BigUint::from(s), res);
            (1..=factors).fold(S::one(prime), |acc, j| {
                let digits = omega.shift(-j).rho().truncate(n);
                let idx = digits.scaled_index(n).to_usize().expect("small index");
                acc.mul(&mvals.values[idx])
            })
        })
        .collect();
    Ok(StepTable {
        prime,
        resolution: res,
        scale: scale as i64,
        values,
    })
}

/// Region-exact checks of the scaling-function criteria.
#[derive(Clone, Debug)]
pub struct ScalingCriteria<S> {
    pub phi: StepTable<S>,
    /// Resolution-`n` cells of `B^{R-1} U*` where `φ̂(Bω) ≠ m(ω) φ̂(ω)`.
    pub refinement_failures: Vec<usize>,
    /// `λ*(h)` for the nonzero `h ∈ H⊥` in the region with `φ̂(h) ≠ 0`.
    pub strang_fix_failures: Vec<u64>,
    /// `Σ_{h, λ*(h) < p^R} |φ̂(ω ⊕ h)|²` on each resolution-`(n-1)` cell of `U*`.
    pub partial_sums: Vec<S>,
    pub theta_value: S,
}

impl<S: Scalar> ScalingCriteria<S> {
    pub fn partial_sums_are_one(&self) -> bool {
        self.partial_sums.iter().all(Scalar::is_one)
    }

    pub fn verdict(&self) -> Verdict {
        let refinement = match self.refinement_failures.first() {
            None => Verdict::pass(),
            Some(&d) => Verdict::fail(Witness::new(format!(
                "φ̂(Bω) ≠ m(ω)φ̂(ω) on resolution-{} cell {d} ({} cells in all)",
                self.phi.resolution + 1,
                self.refinement_failures.len()
            ))),
        };
        let strang_fix = if self.strang_fix_failures.is_empty() {
            Verdict::pass()
        } else {
            let shown: Vec<String> = self
                .strang_fix_failures
                .iter()
                .take(8)
                .map(|h| h.to_string())
                .collect();
            Verdict::fail(Witness::new(format!(
                "φ̂ does not vanish at λ*(h) = {}",
                shown.join(", ")
            )))
        };
        let partial = if self.partial_sums_are_one() {
            Verdict::pass()
        } else {
            let shown: Vec<String> = self.partial_sums.iter().take(8).map(|v| v.to_string()).collect();
            Verdict::fail(Witness::new(format!(
                "partial sums over the region: {}",
                shown.join(", ")
            )))
        }
        .with_note("only translates inside the region are summed");
        let theta = if self.theta_value.is_one() {
            Verdict::pass()
        } else {
            Verdict::fail(Witness::new(format!("φ̂ = {} near θ", self.theta_value)))
        };
        Verdict::all(vec![
            ("refinement identity".into(), refinement),
            ("Strang-Fix".into(), strang_fix),
            ("Parseval partial sums".into(), partial),
            ("limit at θ".into(), theta),
        ])
    }
}

pub fn scaling_criteria_check<S: Scalar>(m: &Mask<S>, scale: u32) -> Result<ScalingCriteria<S>> {
    if scale == 0 {
        return Err(Error::Domain("region scale R must be at least 1".into()));
    }
    let phi = phi_hat(m, scale)?;
    let prime = m.prime();
    let p = prime.get() as usize;
    let n = m.n() as i64;
    let mvals = m.values();
    let group = mvals.values.len();
    // Resolution-n cells of B^{R-1} U*.
    let fine = phi.values.len();
    let mut refinement_failures = Vec::new();
    for d in 0..fine {
        let m_here = &mvals.values[d % group];
        let phi_here = &phi.values[d / p];
        // Bω multiplies λ* by p: the resolution-n cell d becomes the
        // resolution-(n-1) cell d.
        let phi_there = &phi.values[d];
        if *phi_there != m_here.mul(phi_here) {
            refinement_failures.push(d);
        }
    }
    let per_unit = p.pow((n - 1) as u32);
    let translates = phi.values.len() / per_unit;
    let strang_fix_failures = (1..translates)
        .filter(|&h| !phi.values[h * per_unit].is_zero())
        .map(|h| h as u64)
        .collect();
    let partial_sums = (0..per_unit)
        .map(|t| {
            (0..translates).fold(S::zero(prime), |acc, h| {
                acc.add(&phi.values[h * per_unit + t].norm_sq())
            })
        })
        .collect();
    let theta_value = phi.values[0].clone();
    Ok(ScalingCriteria {
        phi,
        refinement_failures,
        strang_fix_failures,
        partial_sums,
        theta_value,
    })
}
