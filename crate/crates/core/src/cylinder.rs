//! Cylinders: the basic clopen cells of `G*`.
//!
//! A cylinder with anchor `a` and resolution `N` is the set of all ω with
//! `ω_j = a_j` for every `j <= N`. Under λ* it is the p-adic interval
//! `[λ*(a), λ*(a) + p^{-N})` and its Haar measure is `p^{-N}`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::group::{Point, Prime};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cylinder {
    anchor: Point,
    resolution: i64,
}

impl Cylinder {
    pub fn new(anchor: Point, resolution: i64) -> Result<Self> {
        if let Some(position) = anchor.max_position().filter(|&m| m > resolution) {
            return Err(Error::AnchorBeyondResolution {
                point: anchor.to_string(),
                position,
                resolution,
            });
        }
        Ok(Cylinder { anchor, resolution })
    }

    /// Builds a cylinder by truncating `point` to `resolution`.
    pub fn around(point: &Point, resolution: i64) -> Self {
        Cylinder {
            anchor: point.truncate(resolution),
            resolution,
        }
    }

    /// `U*_N`: the θ-neighborhood of resolution `N`.
    pub fn zero_neighborhood(prime: Prime, resolution: i64) -> Self {
        Cylinder {
            anchor: Point::zero(prime),
            resolution,
        }
    }

    /// `U*` itself.
    pub fn unit(prime: Prime) -> Self {
        Cylinder::zero_neighborhood(prime, 0)
    }

    /// The dual cell `U*_{n,s}`: resolution `n`, anchor `B^{-n} ω_[s]`.
    pub fn dual_cell(prime: Prime, n: i64, s: u64) -> Self {
        Cylinder {
            anchor: Point::from_index(prime, s).shift(-n),
            resolution: n,
        }
    }

    /// The cylinder `[index · p^{-N}, (index + 1) · p^{-N})`.
    pub fn from_index(prime: Prime, index: &BigUint, resolution: i64) -> Self {
        Cylinder {
            anchor: Point::from_scaled_index(prime, index, resolution),
            resolution,
        }
    }

    pub fn prime(&self) -> Prime {
        self.anchor.prime()
    }

    pub fn anchor(&self) -> &Point {
        &self.anchor
    }

    pub fn resolution(&self) -> i64 {
        self.resolution
    }

    /// `λ*(anchor) · p^N`, the position of this cell among cells of its
    /// resolution.
    pub fn index(&self) -> BigUint {
        self.anchor.scaled_index(self.resolution)
    }

    pub fn measure(&self) -> BigRational {
        self.prime().power(-self.resolution)
    }

    /// λ*-image `[lo, hi)`.
    pub fn interval(&self) -> (BigRational, BigRational) {
        let lo = self.anchor.lambda_value();
        let hi = &lo + self.measure();
        (lo, hi)
    }

    pub fn contains_theta(&self) -> bool {
        self.anchor.is_zero()
    }

    pub fn contains_point(&self, omega: &Point) -> bool {
        self.anchor.agrees_up_to(omega, self.resolution)
            && omega.prime() == self.prime()
    }

    pub fn contains(&self, other: &Cylinder) -> bool {
        self.resolution <= other.resolution
            && self.anchor.agrees_up_to(&other.anchor, self.resolution)
    }

    /// Cylinders are either nested or disjoint.
    pub fn intersects(&self, other: &Cylinder) -> bool {
        self.contains(other) || other.contains(self)
    }

    /// The smaller of two nested cylinders, if they meet.
    pub fn intersection(&self, other: &Cylinder) -> Option<Cylinder> {
        if self.contains(other) {
            Some(other.clone())
        } else if other.contains(self) {
            Some(self.clone())
        } else {
            None
        }
    }

    pub fn parent(&self) -> Cylinder {
        Cylinder {
            anchor: self.anchor.truncate(self.resolution - 1),
            resolution: self.resolution - 1,
        }
    }

    pub fn children(&self) -> Vec<Cylinder> {
        let p = self.prime();
        let n = self.resolution + 1;
        (0..p.get())
            .map(|d| Cylinder {
                anchor: self.anchor.add_unchecked(&Point::single(p, n, d)),
                resolution: n,
            })
            .collect()
    }

    /// Splits into the `p^(target - N)` cells of resolution `target`.
    pub fn refine_to(&self, target: i64) -> Vec<Cylinder> {
        let mut cells = vec![self.clone()];
        for _ in self.resolution..target {
            cells = cells.iter().flat_map(Cylinder::children).collect();
        }
        cells
    }

    /// `{ω ⊕ t : ω in self}`. Digits of `t` at free positions are absorbed.
    pub fn translate(&self, t: &Point) -> Cylinder {
        Cylinder {
            anchor: self.anchor.add_unchecked(&t.truncate(self.resolution)),
            resolution: self.resolution,
        }
    }

    /// `B^k` applied to the cylinder.
    pub fn dilate(&self, k: i64) -> Cylinder {
        Cylinder {
            anchor: self.anchor.shift(k),
            resolution: self.resolution - k,
        }
    }

    /// ρ-image of the cylinder together with its multiplicity: for `N >= 0`
    /// ρ is injective on the cylinder; for `N < 0` the cylinder folds onto
    /// `U*` exactly `p^{-N}` times.
    pub fn rho_image(&self) -> (Cylinder, u64) {
        if self.resolution <= 0 {
            let mult = self.prime().pow_u64((-self.resolution) as u32);
            (Cylinder::unit(self.prime()), mult)
        } else {
            (
                Cylinder {
                    anchor: self.anchor.rho(),
                    resolution: self.resolution,
                },
                1,
            )
        }
    }

    /// Index `k` of the annulus `D_k = B^k U* \ B^{k-1} U*` containing the
    /// cylinder, or `None` when the cylinder contains θ (and so meets every
    /// `D_k` with `k <= -N`).
    pub fn annulus(&self) -> Option<i64> {
        self.anchor.min_position().map(|m| 1 - m)
    }

    /// Orders by λ* of the anchor, coarser first on ties.
    pub fn cmp_canonical(&self, other: &Cylinder) -> Ordering {
        self.anchor
            .cmp_value(&other.anchor)
            .then(self.resolution.cmp(&other.resolution))
    }

    /// Token with `max(N, 0)` fractional digits; negative resolutions need an
    /// explicit `res` annotation in set files.
    pub fn token(&self) -> String {
        self.anchor.to_token(self.resolution.max(0) as usize)
    }
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.resolution < 0 {
            write!(f, "{} res {}", self.token(), self.resolution)
        } else {
            f.write_str(&self.token())
        }
    }
}

impl fmt::Debug for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cylinder({self})")
    }
}
