//! Seeded generators for random test instances.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exact::{scalar, Point, Scalar};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational `n / den` with `|n| <= range * den`.
pub fn scalar_in<R: Rng>(rng: &mut R, range: i64, den: i64) -> Scalar {
    scalar::ratio(rng.gen_range(-range * den..=range * den), den)
}

pub fn point_in<R: Rng>(rng: &mut R, dim: usize, range: i64, den: i64) -> Point {
    Point::new((0..dim).map(|_| scalar_in(rng, range, den)).collect())
}

pub fn points_in<R: Rng>(rng: &mut R, count: usize, dim: usize, range: i64, den: i64) -> Vec<Point> {
    (0..count).map(|_| point_in(rng, dim, range, den)).collect()
}

/// Points near `center`, each coordinate offset by at most `spread`.
pub fn cluster<R: Rng>(rng: &mut R, center: &Point, count: usize, spread: i64, den: i64) -> Vec<Point> {
    (0..count)
        .map(|_| {
            let off = point_in(rng, center.dim(), spread, den);
            center + &off
        })
        .collect()
}
