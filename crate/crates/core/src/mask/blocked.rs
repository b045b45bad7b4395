//! Blocked sets: unions of resolution-`(n-1)` cells, θ-cell excluded, that
//! the inverse-dilation branches `ω ↦ B^{-1}(ω_[l] ⊕ ω)` map into themselves
//! or into zeros of the mask.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use super::cyclotomic::Scalar;
use super::Mask;
use crate::cylinder::Cylinder;
use crate::group::Point;
use crate::set::CylinderSet;
use crate::verdict::{decisions, Verdict, Witness};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockedSetReport {
    /// Cell indices (resolution `n-1`) of the maximal blocked set.
    pub blocked: Option<Vec<usize>>,
    /// Cells removed by the fixed-point iteration, in removal order.
    pub removed: Vec<usize>,
}

impl BlockedSetReport {
    pub fn generates_mra(&self) -> bool {
        self.blocked.is_none()
    }

    pub fn verdict(&self, resolution: i64, prime: crate::group::Prime) -> Verdict {
        let v = match &self.blocked {
            None => Verdict::pass().with_note("no blocked set: the mask generates an MRA"),
            Some(cells) => {
                let cyls: Vec<Cylinder> = cells
                    .iter()
                    .map(|&s| Cylinder::from_index(prime, &BigUint::from(s), resolution))
                    .collect();
                Verdict::fail(
                    Witness::new(format!(
                        "blocked set of {} cells: {}",
                        cells.len(),
                        cyls.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
                    ))
                    .with_cylinders(cyls),
                )
                .with_note("a blocked set exists: the mask does not generate an MRA")
            }
        };
        v.with_decision(decisions::INVERSE_DILATION_BRANCHES)
    }
}

/// Greatest fixed point: start from every cell but the θ-cell and delete
/// cells with a branch landing on a nonzero of `m` outside the set.
pub fn blocked_set_find<S: Scalar>(m: &Mask<S>) -> BlockedSetReport {
    let p = m.prime().get() as usize;
    let table = m.values();
    let coarse = table.values.len() / p;
    let mut alive: BTreeSet<usize> = (1..coarse).collect();
    let mut removed = Vec::new();
    loop {
        let dead: Vec<usize> = alive
            .iter()
            .copied()
            .filter(|&s| {
                (0..p).any(|l| {
                    let landing = l * coarse + s;
                    let parent = landing / p;
                    !table.values[landing].is_zero() && !alive.contains(&parent)
                })
            })
            .collect();
        if dead.is_empty() {
            break;
        }
        for s in dead {
            alive.remove(&s);
            removed.push(s);
        }
    }
    BlockedSetReport {
        blocked: (!alive.is_empty()).then(|| alive.into_iter().collect()),
        removed,
    }
}

/// Re-checks a candidate blocked set with cylinder arithmetic and direct
/// evaluation of `m`: every branch image of every cell must lie in the set
/// or on a zero of `m`. Returns the offending image on failure.
pub fn validate_blocked_set<S: Scalar>(m: &Mask<S>, cells: &[usize]) -> Result<(), Cylinder> {
    let prime = m.prime();
    let res = m.n() as i64 - 1;
    let cyls: Vec<Cylinder> = cells
        .iter()
        .map(|&s| Cylinder::from_index(prime, &BigUint::from(s), res))
        .collect();
    if cyls.iter().any(Cylinder::contains_theta) {
        return Err(Cylinder::zero_neighborhood(prime, res));
    }
    let set = CylinderSet::from_cylinders(prime, cyls.iter().cloned()).expect("same prime");
    for c in &cyls {
        for l in 0..prime.get() {
            let image = c.translate(&Point::from_index(prime, l as u64)).dilate(-1);
            let inside = set.iter().any(|s| s.contains(&image));
            if !inside && !m.eval(image.anchor()).is_zero() {
                return Err(image);
            }
        }
    }
    Ok(())
}
