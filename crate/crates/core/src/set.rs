//! Finite unions of cylinders in canonical form.
//!
//! A [`CylinderSet`] is a sorted list of pairwise disjoint cylinders in which
//! no `p` siblings appear together (they are merged into their parent). This
//! is the decomposition into maximal cylinders, so two sets are equal exactly
//! when their canonical lists are equal.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cylinder::Cylinder;
use crate::error::{Error, Result};
use crate::group::{Point, Prime};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CylinderSet {
    prime: Prime,
    cylinders: Vec<Cylinder>,
}

/// Result of cutting a set along the annuli `D_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnulusSplit {
    pub parts: BTreeMap<i64, CylinderSet>,
    /// The (at most one) canonical cylinder containing θ; it meets every
    /// annulus `D_k` with `k <= -N`.
    pub theta_neighborhood: Option<Cylinder>,
}

impl CylinderSet {
    pub fn empty(prime: Prime) -> Self {
        CylinderSet {
            prime,
            cylinders: Vec::new(),
        }
    }

    /// `U*`.
    pub fn unit(prime: Prime) -> Self {
        CylinderSet::from_cylinder(Cylinder::unit(prime))
    }

    /// `D_0 = U* \ U*_1`, the annulus with λ*-image `[1/p, 1)`.
    pub fn base_annulus(prime: Prime) -> Self {
        CylinderSet::unit(prime).subtract(&CylinderSet::from_cylinder(Cylinder::zero_neighborhood(prime, 1)))
    }

    pub fn from_cylinder(cylinder: Cylinder) -> Self {
        CylinderSet {
            prime: cylinder.prime(),
            cylinders: vec![cylinder],
        }
    }

    /// Union of arbitrary (possibly nested) cylinders.
    pub fn from_cylinders<I>(prime: Prime, cylinders: I) -> Result<Self>
    where
        I: IntoIterator<Item = Cylinder>,
    {
        let cylinders: Vec<Cylinder> = cylinders.into_iter().collect();
        if let Some(c) = cylinders.iter().find(|c| c.prime() != prime) {
            return Err(Error::PrimeMismatch {
                left: prime,
                right: c.prime(),
            });
        }
        Ok(CylinderSet {
            prime,
            cylinders: normalize(prime, cylinders),
        })
    }

    /// The λ*-preimage of the interval `[lo, hi)`; both ends must be
    /// nonnegative with a power of `p` as denominator.
    pub fn from_interval(prime: Prime, lo: &BigRational, hi: &BigRational) -> Result<Self> {
        let pb = prime.big();
        let exponent_of = |r: &BigRational| -> Result<i64> {
            let mut d = r.denom().clone();
            let mut e = 0i64;
            while !d.is_one() {
                let (q, rem) = d.div_rem(&pb);
                if !rem.is_zero() {
                    return Err(Error::Domain(format!("{r} is not a p-adic rational")));
                }
                d = q;
                e += 1;
            }
            Ok(e)
        };
        if lo.is_negative() || hi.is_negative() {
            return Err(Error::Domain("λ* values are nonnegative".into()));
        }
        let mut cylinders = Vec::new();
        if lo >= hi {
            return Ok(CylinderSet::empty(prime));
        }
        let mut x = lo.clone();
        let e_max = exponent_of(lo)?.max(exponent_of(hi)?);
        while &x < hi {
            // coarsest cell starting at x and ending by hi
            let mut n = -((hi.to_integer().bits() as i64) + 1);
            loop {
                let scaled = &x * prime.power(n);
                if scaled.is_integer() && &x + prime.power(-n) <= *hi {
                    let index = scaled.to_integer().to_biguint().expect("nonnegative");
                    cylinders.push(Cylinder::from_index(prime, &index, n));
                    x += prime.power(-n);
                    break;
                }
                n += 1;
                debug_assert!(n <= e_max);
            }
        }
        CylinderSet::from_cylinders(prime, cylinders)
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn cylinders(&self) -> &[Cylinder] {
        &self.cylinders
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Cylinder> {
        self.cylinders.iter()
    }

    pub fn len(&self) -> usize {
        self.cylinders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cylinders.is_empty()
    }

    fn check_prime(&self, other: &CylinderSet) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch {
                left: self.prime,
                right: other.prime,
            });
        }
        Ok(())
    }

    pub fn try_union(&self, other: &CylinderSet) -> Result<CylinderSet> {
        self.check_prime(other)?;
        Ok(self.union(other))
    }

    pub fn try_intersect(&self, other: &CylinderSet) -> Result<CylinderSet> {
        self.check_prime(other)?;
        Ok(self.intersect(other))
    }

    pub fn try_subtract(&self, other: &CylinderSet) -> Result<CylinderSet> {
        self.check_prime(other)?;
        Ok(self.subtract(other))
    }

    /// Panics on mismatched primes; see [`CylinderSet::try_union`].
    pub fn union(&self, other: &CylinderSet) -> CylinderSet {
        assert_eq!(self.prime, other.prime, "prime mismatch");
        let all = self.cylinders.iter().chain(&other.cylinders).cloned().collect();
        CylinderSet {
            prime: self.prime,
            cylinders: normalize(self.prime, all),
        }
    }

    pub fn intersect(&self, other: &CylinderSet) -> CylinderSet {
        assert_eq!(self.prime, other.prime, "prime mismatch");
        let mut out = Vec::new();
        for a in &self.cylinders {
            for b in &other.cylinders {
                if let Some(c) = a.intersection(b) {
                    out.push(c);
                }
            }
        }
        CylinderSet {
            prime: self.prime,
            cylinders: normalize(self.prime, out),
        }
    }

    pub fn subtract(&self, other: &CylinderSet) -> CylinderSet {
        assert_eq!(self.prime, other.prime, "prime mismatch");
        let mut out = Vec::new();
        for a in &self.cylinders {
            let mut pieces = vec![a.clone()];
            for b in other.cylinders.iter().filter(|b| a.intersects(b)) {
                let mut next = Vec::with_capacity(pieces.len());
                for piece in &pieces {
                    cylinder_minus(piece, b, &mut next);
                }
                pieces = next;
                if pieces.is_empty() {
                    break;
                }
            }
            out.extend(pieces);
        }
        CylinderSet {
            prime: self.prime,
            cylinders: normalize(self.prime, out),
        }
    }

    pub fn symmetric_difference(&self, other: &CylinderSet) -> CylinderSet {
        self.subtract(other).union(&other.subtract(self))
    }

    pub fn is_subset(&self, other: &CylinderSet) -> bool {
        self.subtract(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &CylinderSet) -> bool {
        self.cylinders
            .iter()
            .all(|a| other.cylinders.iter().all(|b| !a.intersects(b)))
    }

    pub fn contains_point(&self, omega: &Point) -> bool {
        self.cylinders.iter().any(|c| c.contains_point(omega))
    }

    /// `{ω ⊕ t : ω in self}`.
    pub fn translate(&self, t: &Point) -> CylinderSet {
        let moved = self.cylinders.iter().map(|c| c.translate(t)).collect();
        CylinderSet {
            prime: self.prime,
            cylinders: normalize(self.prime, moved),
        }
    }

    /// `B^k` applied to the set. Dilation is monotone in λ*, so canonical
    /// order is preserved.
    pub fn dilate(&self, k: i64) -> CylinderSet {
        CylinderSet {
            prime: self.prime,
            cylinders: self.cylinders.iter().map(|c| c.dilate(k)).collect(),
        }
    }

    pub fn measure(&self) -> BigRational {
        self.cylinders
            .iter()
            .fold(BigRational::zero(), |acc, c| acc + c.measure())
    }

    pub fn max_resolution(&self) -> Option<i64> {
        self.cylinders.iter().map(Cylinder::resolution).max()
    }

    pub fn min_resolution(&self) -> Option<i64> {
        self.cylinders.iter().map(Cylinder::resolution).min()
    }

    /// The canonical cylinder containing θ, if any.
    pub fn theta_cylinder(&self) -> Option<&Cylinder> {
        self.cylinders.iter().find(|c| c.contains_theta())
    }

    /// Whether some `U*_N` lies inside the set.
    pub fn contains_zero_neighborhood(&self) -> bool {
        self.theta_cylinder().is_some()
    }

    /// Cuts the set along the annuli `D_k`.
    pub fn annulus_split(&self) -> AnnulusSplit {
        let mut parts: BTreeMap<i64, Vec<Cylinder>> = BTreeMap::new();
        let mut theta_neighborhood = None;
        for c in &self.cylinders {
            match c.annulus() {
                Some(k) => parts.entry(k).or_default().push(c.clone()),
                None => theta_neighborhood = Some(c.clone()),
            }
        }
        AnnulusSplit {
            parts: parts
                .into_iter()
                .map(|(k, cs)| {
                    (
                        k,
                        CylinderSet {
                            prime: self.prime,
                            cylinders: cs,
                        },
                    )
                })
                .collect(),
            theta_neighborhood,
        }
    }

    /// Smallest `k` with the set inside `B^k U*`; `None` for the empty set.
    pub fn scale_bound(&self) -> Option<i64> {
        self.cylinders
            .iter()
            .map(|c| c.annulus().unwrap_or(-c.resolution()))
            .max()
    }

    /// λ*-images as merged half-open intervals in increasing order.
    pub fn intervals(&self) -> Vec<(BigRational, BigRational)> {
        let mut out: Vec<(BigRational, BigRational)> = Vec::new();
        for c in &self.cylinders {
            let (lo, hi) = c.interval();
            match out.last_mut() {
                Some(last) if last.1 == lo => last.1 = hi,
                _ => out.push((lo, hi)),
            }
        }
        out
    }

    /// All cells of resolution `k` inside the set, in λ* order.
    pub fn cells_at(&self, k: i64) -> Vec<Cylinder> {
        self.cylinders.iter().flat_map(|c| c.refine_to(k)).collect()
    }
}

/// `a \ b` for a single pair, pushing the pieces onto `out`.
fn cylinder_minus(a: &Cylinder, b: &Cylinder, out: &mut Vec<Cylinder>) {
    if !a.intersects(b) {
        out.push(a.clone());
        return;
    }
    if b.contains(a) {
        return;
    }
    let prime = a.prime();
    let mut current = a.clone();
    for level in a.resolution() + 1..=b.resolution() {
        let keep = b.anchor().digit(level);
        for child in current.children() {
            if child.anchor().digit(level) != keep {
                out.push(child);
            }
        }
        current = Cylinder::around(b.anchor(), level);
        debug_assert_eq!(current.prime(), prime);
    }
}

/// Canonical form: maximal cylinders, siblings merged, λ* order.
fn normalize(prime: Prime, mut cylinders: Vec<Cylinder>) -> Vec<Cylinder> {
    if cylinders.is_empty() {
        return cylinders;
    }
    cylinders.sort_by(|a, b| a.cmp_canonical(b));
    // Drop cylinders nested in an earlier (coarser) one.
    let mut kept: Vec<Cylinder> = Vec::with_capacity(cylinders.len());
    for c in cylinders {
        if kept.last().is_some_and(|last| last.contains(&c)) {
            continue;
        }
        kept.push(c);
    }

    let p = prime.get() as usize;
    let mut by_level: BTreeMap<i64, Vec<Point>> = BTreeMap::new();
    for c in kept {
        let r = c.resolution();
        by_level.entry(r).or_default().push(c.anchor().clone());
    }
    let mut done: Vec<Cylinder> = Vec::new();
    while let Some((level, anchors)) = by_level.pop_last() {
        let mut groups: HashMap<Point, Vec<Point>> = HashMap::new();
        for a in anchors {
            groups.entry(a.truncate(level - 1)).or_default().push(a);
        }
        for (parent, children) in groups {
            if children.len() == p {
                by_level.entry(level - 1).or_default().push(parent);
            } else {
                done.extend(children.into_iter().map(|a| {
                    Cylinder::new(a, level).expect("anchor fits its own level")
                }));
            }
        }
    }
    done.sort_by(|a, b| a.cmp_canonical(b));
    done
}

/// Number of cells of resolution `k` in `B^r U*`, as `u64` if it fits.
pub fn cell_count(prime: Prime, r: i64, k: i64) -> Option<u64> {
    let e = u32::try_from(r + k).ok()?;
    (prime.get() as u64).checked_pow(e)
}
