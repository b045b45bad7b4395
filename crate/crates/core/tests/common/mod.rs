//! Shared helpers for the integration tests: parsing shorthands and random
//! set generators built on the cell oracle.

#![allow(dead_code)]

pub mod oracle;
pub mod strategies;

use oracle::{add_digits, Cell, Grid};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vilenkin_core::{Cylinder, CylinderSet, Point, Prime};

pub fn prime(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn point(p: u32, token: &str) -> Point {
    Point::parse(prime(p), token).unwrap()
}

/// A cylinder from a set-file token (resolution = fractional digits).
pub fn cyl(p: u32, token: &str) -> Cylinder {
    let (anchor, frac) = Point::parse_token(prime(p), token).unwrap();
    Cylinder::new(anchor, frac as i64).unwrap()
}

pub fn set(p: u32, tokens: &[&str]) -> CylinderSet {
    CylinderSet::from_cylinders(prime(p), tokens.iter().map(|t| cyl(p, t))).unwrap()
}

/// Cells `(i, q)` partitioning `D_1 = [1, p)`.
fn annulus_cells(p: u64, q: i64) -> Vec<Cell> {
    (p.pow(q as u32)..p.pow(q as u32 + 1)).map(|i| (i, q)).collect()
}

/// Up to `pieces` random disjoint cylinders in `B^R U*` of resolution
/// `>= -R` and `<= K`.
pub fn random_cells(rng: &mut ChaCha8Rng, p: u64, r: u32, k: u32, pieces: usize) -> Grid {
    let mut g = Grid::empty(p, r, k);
    for _ in 0..pieces {
        let res = rng.gen_range(-(r as i64).min(2)..=k as i64);
        let count = p.pow((r as i64 + res) as u32);
        g.insert((rng.gen_range(0..count), res));
    }
    g
}

/// A partition of `D_1` into cells of a random resolution, each paired with
/// a random exponent `j` such that `B^j` of the cell fits the grid.
fn dilation_plan(rng: &mut ChaCha8Rng, p: u64, r: u32, k: u32) -> Vec<(Cell, i64)> {
    let q = rng.gen_range(0..=2i64);
    let lo = (q - k as i64).max(-3);
    let hi = (r as i64 - 1).min(3);
    annulus_cells(p, q)
        .into_iter()
        .map(|c| (c, rng.gen_range(lo..=hi)))
        .collect()
}

/// Cells of `D_1` each moved by a random `B^j`: tiles by construction.
pub fn dilation_shuffle(rng: &mut ChaCha8Rng, p: u64, r: u32, k: u32) -> Grid {
    let mut g = Grid::empty(p, r, k);
    for ((i, q), j) in dilation_plan(rng, p, r, k) {
        g.insert((i, q - j));
    }
    g
}

/// A dilation shuffle that is also congruent, found by rejection; falls back
/// to `D_1` itself when no attempt succeeds.
pub fn wavelet_shuffle(rng: &mut ChaCha8Rng, p: u64, r: u32, k: u32) -> Grid {
    for _ in 0..400 {
        let g = dilation_shuffle(rng, p, r, k);
        if g.congruent() {
            return g;
        }
    }
    dilation_shuffle_identity(p, r, k)
}

fn dilation_shuffle_identity(p: u64, r: u32, k: u32) -> Grid {
    let mut g = Grid::empty(p, r, k);
    g.insert((1, 0));
    g
}

/// Cells of `U*` each moved by a random `h ∈ H⊥`: congruent by construction.
pub fn translation_shuffle(rng: &mut ChaCha8Rng, p: u64, r: u32, k: u32) -> Grid {
    let q = rng.gen_range(0..=2u32.min(k));
    let mut g = Grid::empty(p, r, k);
    for i in 0..p.pow(q) {
        let h = if rng.gen_bool(0.5) { 0 } else { rng.gen_range(0..p.pow(r)) };
        g.insert((i + h * p.pow(q), q as i64));
    }
    g
}

/// Dilation shuffle followed by random translations; neither property is
/// guaranteed.
pub fn mixed_shuffle(rng: &mut ChaCha8Rng, p: u64, r: u32, k: u32) -> Grid {
    let q = rng.gen_range(0..=2i64);
    let mut g = Grid::empty(p, r, k);
    let mut cells = annulus_cells(p, q);
    cells.shuffle(rng);
    for (i, q) in cells {
        let j = rng.gen_range((q - k as i64).max(-2)..=(r as i64 - 1).min(2));
        let res = q - j;
        let mut index = i;
        if rng.gen_bool(0.3) {
            let h = rng.gen_range(0..p.pow(2));
            let shifted = if res >= 0 {
                h * p.pow(res as u32)
            } else {
                h / p.pow((-res) as u32)
            };
            let moved = add_digits(i, shifted, p);
            if moved < p.pow((r as i64 + res) as u32) {
                index = moved;
            }
        }
        g.insert((index, res));
    }
    g
}

/// A finite set with both properties unknown, drawn from all the shuffles.
pub fn random_set(rng: &mut ChaCha8Rng, p: u64, r: u32, k: u32) -> Grid {
    match rng.gen_range(0..5) {
        4 => wavelet_shuffle(rng, p, r, k),
        0 => {
            let pieces = rng.gen_range(1..8);
            random_cells(rng, p, r, k, pieces)
        }
        1 => dilation_shuffle(rng, p, r, k),
        2 => translation_shuffle(rng, p, r, k),
        _ => mixed_shuffle(rng, p, r, k),
    }
}

/// `⋃_{j>=1} B^{-j} Ω` for `Ω` a dilation shuffle of `D_1`, written as `U*`
/// plus or minus finitely many dilates; lies in `B^{R-1} U*`. Half the time
/// `Ω` is a wavelet set, so the closure is a scaling set.
pub fn closure_of_shuffle(rng: &mut ChaCha8Rng, p: u64, r: u32, k: u32) -> Grid {
    let plan = if rng.gen_bool(0.5) {
        let omega = wavelet_shuffle(rng, p, r, k);
        plan_of(&omega)
    } else {
        dilation_plan(rng, p, r, k)
    };
    let mut g = Grid::empty(p, r, k);
    g.set((0, 0), true);
    for ((i, q), j) in plan {
        for m in 0..j {
            g.set((i, q - m), true);
        }
        for m in j..0 {
            g.set((i, q - m), false);
        }
    }
    g
}

/// Recovers `(cell of D_1, j)` pairs from a set that is a dilation shuffle.
fn plan_of(omega: &Grid) -> Vec<(Cell, i64)> {
    omega
        .cells()
        .into_iter()
        .map(|(i, res)| {
            let mut e = 0i64;
            while omega.p.pow(e as u32 + 1) <= i {
                e += 1;
            }
            // `i p^{-res}` lies in `D_{e-res+1}`, so the cell is `B^j` of a
            // cell of `D_1` with `j = e - res`.
            let j = e - res;
            ((i, res + j), j)
        })
        .collect()
}

/// Scaling-set candidates in `B^{R-1} U*`.
pub fn gss_candidate(rng: &mut ChaCha8Rng, p: u64, r: u32, k: u32) -> Grid {
    if rng.gen_bool(0.6) {
        return closure_of_shuffle(rng, p, r, k);
    }
    let mut g = Grid::empty(p, r, k);
    g.insert((0, rng.gen_range(0..=k as i64)));
    for _ in 0..rng.gen_range(0..5) {
        let res = rng.gen_range(-(r as i64 - 1).min(1)..=k as i64);
        let count = p.pow((r as i64 - 1 + res) as u32);
        g.insert((rng.gen_range(0..count), res));
    }
    g
}
