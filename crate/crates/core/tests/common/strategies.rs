//! proptest strategies for primes, points and random oracle-backed sets.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vilenkin_core::{Point, Prime};

use super::oracle::Grid;

pub fn any_prime() -> impl Strategy<Value = Prime> {
    prop_oneof![Just(2u32), Just(3), Just(5)].prop_map(|p| Prime::new(p).unwrap())
}

/// Finitely supported points with digits at positions `lo..=hi`.
pub fn point_in(prime: Prime, lo: i64, hi: i64) -> impl Strategy<Value = Point> {
    let p = prime.get();
    prop::collection::vec((lo..=hi, 0..p), 0..8)
        .prop_map(move |digits| Point::from_digits(prime, digits).unwrap())
}

pub fn point(prime: Prime) -> impl Strategy<Value = Point> {
    point_in(prime, -5, 8)
}

/// A point of `U*` with digits at positions `1..=res`.
pub fn unit_point(prime: Prime, res: i64) -> impl Strategy<Value = Point> {
    point_in(prime, 1, res)
}

pub fn prime_and_points(n: usize) -> impl Strategy<Value = (Prime, Vec<Point>)> {
    any_prime().prop_flat_map(move |prime| (Just(prime), prop::collection::vec(point(prime), n)))
}

/// A seeded generator, so that oracle-backed sets shrink by seed.
pub fn seeded() -> impl Strategy<Value = ChaCha8Rng> {
    any::<u64>().prop_map(ChaCha8Rng::seed_from_u64)
}

/// A random set on the grid of `B^R U*` at resolution `K`.
pub fn grid(p: u64, r: u32, k: u32) -> impl Strategy<Value = Grid> {
    seeded().prop_map(move |mut rng| super::random_set(&mut rng, p, r, k))
}
