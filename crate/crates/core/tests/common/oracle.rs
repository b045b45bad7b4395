//! Brute-force model of `G*` restricted to `B^R U*`: the `p^{R+K}` cells of
//! resolution `K`, cell `s` being `[s p^{-K}, (s+1) p^{-K})` under λ*.
//! Everything here is plain integer bookkeeping and shares no code with the
//! library beyond the final conversion to a `CylinderSet`.

use num_bigint::BigUint;
use vilenkin_core::{Cylinder, CylinderSet, Prime};

/// Digit-wise sum mod `p` of two base-`p` integers.
pub fn add_digits(mut a: u64, mut b: u64, p: u64) -> u64 {
    let (mut out, mut scale) = (0, 1);
    while a > 0 || b > 0 {
        out += ((a % p + b % p) % p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

/// A cylinder as `(index, resolution)`: `[i p^{-r}, (i+1) p^{-r})`.
pub type Cell = (u64, i64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub p: u64,
    pub r: u32,
    pub k: u32,
    pub bits: Vec<bool>,
}

impl Grid {
    pub fn empty(p: u64, r: u32, k: u32) -> Self {
        Grid {
            p,
            r,
            k,
            bits: vec![false; p.pow(r + k) as usize],
        }
    }

    /// Fine-cell range of a cylinder, or `None` if it leaves the region or is
    /// finer than the grid.
    pub fn span(&self, (index, res): Cell) -> Option<std::ops::Range<usize>> {
        if res > self.k as i64 || res < -(self.r as i64) {
            return None;
        }
        let width = self.p.pow((self.k as i64 - res) as u32);
        let lo = index.checked_mul(width)?;
        let hi = lo.checked_add(width)?;
        (hi <= self.bits.len() as u64).then_some(lo as usize..hi as usize)
    }

    /// Adds a cylinder; `false` (and no change) if it overlaps or does not fit.
    pub fn insert(&mut self, cell: Cell) -> bool {
        match self.span(cell) {
            Some(range) if !self.bits[range.clone()].iter().any(|&b| b) => {
                self.bits[range].iter_mut().for_each(|b| *b = true);
                true
            }
            _ => false,
        }
    }

    pub fn set(&mut self, cell: Cell, value: bool) {
        let range = self.span(cell).expect("cell fits the grid");
        self.bits[range].iter_mut().for_each(|b| *b = value);
    }

    pub fn count(&self) -> u64 {
        self.bits.iter().filter(|&&b| b).count() as u64
    }

    /// Each residue class mod `p^K` is hit exactly once: ρ is a bijection
    /// onto `U*`.
    pub fn congruent(&self) -> bool {
        let unit = self.p.pow(self.k) as usize;
        let mut hits = vec![0u32; unit];
        for (s, _) in self.bits.iter().enumerate().filter(|(_, &b)| b) {
            hits[s % unit] += 1;
        }
        hits.iter().all(|&h| h == 1)
    }

    /// Coverage counts of `D_0` at resolution `K + R` by the projections
    /// `B^{-m}(Ω ∩ D_m)`, accumulated into `acc`. `false` if Ω meets the
    /// θ-cell.
    fn project(&self, acc: &mut [i64]) -> bool {
        if self.bits[0] {
            return false;
        }
        let p = self.p;
        for (s, _) in self.bits.iter().enumerate().filter(|(_, &b)| b) {
            let s = s as u64;
            // p^e <= s < p^{e+1}, so s p^{-K} lies in D_{e-K+1}.
            let mut e = 0u32;
            while p.pow(e + 1) <= s {
                e += 1;
            }
            let m = e as i64 - self.k as i64 + 1;
            let width = p.pow((self.r as i64 - m) as u32);
            acc[(s * width) as usize] += 1;
            acc[((s + 1) * width) as usize] -= 1;
        }
        true
    }

    fn coverage_is_exact(&self, acc: &[i64]) -> bool {
        let fine = self.p.pow(self.k + self.r) as usize;
        let start = fine / self.p as usize;
        let mut run = 0i64;
        for (t, d) in acc.iter().enumerate().take(fine) {
            run += d;
            if t >= start && run != 1 {
                return false;
            }
        }
        true
    }

    /// The projections onto `D_0` partition it.
    pub fn tiles(&self) -> bool {
        let mut acc = vec![0i64; self.p.pow(self.k + self.r) as usize + 1];
        self.project(&mut acc) && self.coverage_is_exact(&acc)
    }

    pub fn wavelet(&self) -> bool {
        self.tiles() && self.congruent()
    }

    /// Joint tiling of several sets, each congruent.
    pub fn multiwavelet(sets: &[Grid]) -> bool {
        let first = &sets[0];
        let mut acc = vec![0i64; first.p.pow(first.k + first.r) as usize + 1];
        for s in sets {
            if !s.project(&mut acc) {
                return false;
            }
        }
        first.coverage_is_exact(&acc) && sets.iter().all(Grid::congruent)
    }

    /// The same set on the grid of `B^{R+1} U*`.
    pub fn enlarge(&self) -> Grid {
        let mut out = Grid::empty(self.p, self.r + 1, self.k);
        out.bits[..self.bits.len()].copy_from_slice(&self.bits);
        out
    }

    /// `BS`; requires `S ⊆ B^{R-1} U*`.
    pub fn dilate_up(&self) -> Option<Grid> {
        let top = self.bits.len() / self.p as usize;
        if self.bits[top..].iter().any(|&b| b) {
            return None;
        }
        let mut out = Grid::empty(self.p, self.r, self.k);
        for (s, b) in out.bits.iter_mut().enumerate() {
            *b = self.bits[s / self.p as usize];
        }
        Some(out)
    }

    pub fn minus(&self, other: &Grid) -> Grid {
        let mut out = self.clone();
        for (b, &o) in out.bits.iter_mut().zip(&other.bits) {
            *b = *b && !o;
        }
        out
    }

    /// The definition: `μ(S) = 1/(p-1)` and `BS \ S` is a wavelet set.
    pub fn gss(&self) -> bool {
        if self.count() * (self.p - 1) != self.p.pow(self.k) {
            return false;
        }
        match self.dilate_up() {
            Some(bs) => bs.minus(self).wavelet(),
            None => self.enlarge().gss(),
        }
    }

    /// Maximal cylinders covering exactly the marked cells.
    pub fn cells(&self) -> Vec<Cell> {
        let mut prefix = vec![0u64; self.bits.len() + 1];
        for (i, &b) in self.bits.iter().enumerate() {
            prefix[i + 1] = prefix[i] + b as u64;
        }
        let mut out = Vec::new();
        let mut stack = vec![(0u64, -(self.r as i64))];
        while let Some(cell) = stack.pop() {
            let range = self.span(cell).expect("inside");
            let filled = prefix[range.end] - prefix[range.start];
            if filled == range.len() as u64 {
                out.push(cell);
            } else if filled > 0 {
                for child in (0..self.p).rev() {
                    stack.push((cell.0 * self.p + child, cell.1 + 1));
                }
            }
        }
        out
    }

    pub fn to_set(&self) -> CylinderSet {
        let prime = Prime::new(self.p as u32).unwrap();
        CylinderSet::from_cylinders(prime, self.cells().into_iter().map(|c| cylinder(prime, c)))
            .unwrap()
    }
}

pub fn cylinder(prime: Prime, (index, res): Cell) -> Cylinder {
    Cylinder::from_index(prime, &BigUint::from(index), res)
}
