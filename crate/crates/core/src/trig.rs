//! Certified enclosures of `sin`, `cos` and `pi`.
//!
//! Values are computed in binary fixed point with an explicit bound on the
//! accumulated rounding error, then returned as exact rational intervals.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::Scalar;

/// Guard bits added on top of the requested precision.
pub const GUARD_BITS: u32 = 48;

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Scalar,
    pub hi: Scalar,
}

impl Interval {
    pub fn point(x: Scalar) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn new(lo: Scalar, hi: Scalar) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn width(&self) -> Scalar {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Scalar {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().expect("four products").clone();
        let hi = c.iter().max().expect("four products").clone();
        Interval::new(lo, hi)
    }

    pub fn scale(&self, k: &Scalar) -> Interval {
        self.mul(&Interval::point(k.clone()))
    }

    /// Undefined when the interval contains zero.
    pub fn recip(&self) -> Option<Interval> {
        if self.contains(&Scalar::zero()) {
            return None;
        }
        Some(Interval::new(self.hi.recip(), self.lo.recip()))
    }

    pub fn square(&self) -> Interval {
        if self.contains(&Scalar::zero()) {
            let m = std::cmp::max(self.lo.abs(), self.hi.abs());
            Interval::new(Scalar::zero(), &m * &m)
        } else {
            self.mul(self)
        }
    }

    /// `ceil` of every member, when they all agree.
    pub fn ceil(&self) -> Option<BigInt> {
        let a = self.lo.ceil().to_integer();
        let b = self.hi.ceil().to_integer();
        (a == b).then_some(a)
    }

    /// Nearest dyadic rational `k / 2^bits` to the midpoint.
    pub fn dyadic(&self, bits: u32) -> Scalar {
        let scale = BigInt::one() << bits;
        let m = self.mid() * BigRational::from_integer(scale.clone());
        BigRational::new(m.round().to_integer(), scale)
    }
}

/// Fixed-point value `value / 2^prec` carrying an error bound in ulps.
#[derive(Clone, Debug)]
struct Fixed {
    value: BigInt,
    err: BigInt,
    prec: u32,
}

impl Fixed {
    fn to_interval(&self) -> Interval {
        let den = BigInt::one() << self.prec;
        Interval::new(
            BigRational::new(&self.value - &self.err, den.clone()),
            BigRational::new(&self.value + &self.err, den),
        )
    }

    fn neg(&self) -> Fixed {
        Fixed {
            value: -self.value.clone(),
            ..self.clone()
        }
    }
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// `atan(1/x)` by its Taylor series.
fn atan_inv(x: u32, prec: u32) -> Fixed {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut u = floor_div(&(BigInt::one() << prec), &x);
    let mut sum = BigInt::zero();
    let mut n: u64 = 0;
    let mut terms: u64 = 0;
    while !u.is_zero() {
        let t = floor_div(&u, &BigInt::from(2 * n + 1));
        if n % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
        u = floor_div(&u, &x2);
        n += 1;
        terms += 1;
    }
    Fixed {
        value: sum,
        err: BigInt::from(3 * terms + 3),
        prec,
    }
}

/// `pi` by Machin's formula `16 atan(1/5) - 4 atan(1/239)`.
fn pi_fixed(prec: u32) -> Fixed {
    let a = atan_inv(5, prec);
    let b = atan_inv(239, prec);
    Fixed {
        value: a.value * 16 - b.value * 4,
        err: a.err * 16 + b.err * 4,
        prec,
    }
}

/// Enclosure of `pi` of width at most `2^-bits`.
pub fn pi(bits: u32) -> Interval {
    pi_fixed(bits + GUARD_BITS).to_interval()
}

/// An angle `pi_multiple * pi + offset` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Angle {
    pub pi_multiple: Scalar,
    pub offset: Scalar,
}

impl Angle {
    pub fn pi_times(q: Scalar) -> Self {
        Angle {
            pi_multiple: q,
            offset: Scalar::zero(),
        }
    }

    pub fn new(pi_multiple: Scalar, offset: Scalar) -> Self {
        Angle { pi_multiple, offset }
    }

    pub fn half(&self) -> Angle {
        let two = BigRational::from_integer(2.into());
        Angle {
            pi_multiple: &self.pi_multiple / &two,
            offset: &self.offset / &two,
        }
    }

    /// Exact `(sin, cos)` when the angle is a multiple of `pi/2`.
    fn exact_quadrant(&self) -> Option<(i64, i64)> {
        if !self.offset.is_zero() {
            return None;
        }
        let twice = &self.pi_multiple * BigRational::from_integer(2.into());
        if !twice.is_integer() {
            return None;
        }
        let q = twice.to_integer().mod_floor(&BigInt::from(4)).to_i64().expect("small");
        Some(match q {
            0 => (0, 1),
            1 => (1, 0),
            2 => (0, -1),
            _ => (-1, 0),
        })
    }
}

fn mul_fixed(a: &BigInt, b: &BigInt, prec: u32) -> BigInt {
    (a * b) >> prec
}

/// Rounded `q * v` for a rational `q` and fixed-point `v`.
fn rat_times(q: &Scalar, v: &BigInt) -> BigInt {
    floor_div(&(q.numer() * v), q.denom())
}

fn rat_fixed(q: &Scalar, prec: u32) -> BigInt {
    floor_div(&(q.numer() << prec), q.denom())
}

/// Taylor sums of `sin y` and `cos y` for `|y| < 0.8`; returns the sums and
/// the rounding-error bound in ulps.
fn taylor(y: &BigInt, prec: u32) -> (BigInt, BigInt, BigInt) {
    let y2 = mul_fixed(y, y, prec);
    let mut sin = y.clone();
    let mut t = y.clone();
    let mut n: u64 = 1;
    let mut steps: u64 = 0;
    while !t.is_zero() {
        t = mul_fixed(&t, &y2, prec) / BigInt::from((n + 1) * (n + 2));
        n += 2;
        steps += 1;
        if (n / 2) % 2 == 1 {
            sin -= &t;
        } else {
            sin += &t;
        }
    }
    let mut cos = BigInt::one() << prec;
    let mut t = cos.clone();
    let mut n: u64 = 0;
    while !t.is_zero() {
        t = mul_fixed(&t, &y2, prec) / BigInt::from((n + 1) * (n + 2));
        n += 2;
        steps += 1;
        if (n / 2) % 2 == 1 {
            cos -= &t;
        } else {
            cos += &t;
        }
    }
    (sin, cos, BigInt::from(10 * (steps + 2)))
}

/// Certified enclosures of `(sin a, cos a)`, each of width at most
/// `2^-bits` for angles of moderate size.
pub fn sin_cos(a: &Angle, bits: u32) -> (Interval, Interval) {
    if let Some((s, c)) = a.exact_quadrant() {
        return (
            Interval::point(BigRational::from_integer(s.into())),
            Interval::point(BigRational::from_integer(c.into())),
        );
    }
    let magnitude = (a.pi_multiple.abs() * BigRational::from_integer(4.into()) + a.offset.abs())
        .ceil()
        .to_integer();
    let extra = magnitude.bits() as u32 + 2;
    let prec = bits + GUARD_BITS + extra;
    let pi = pi_fixed(prec);
    let x = rat_times(&a.pi_multiple, &pi.value) + rat_fixed(&a.offset, prec);
    let x_err = rat_times(&a.pi_multiple.abs(), &pi.err) + 3;
    let half_pi = &pi.value >> 1u32;
    let half_pi_err = &pi.err + 1;
    // nearest multiple of pi/2
    let k = floor_div(&((&x << 1u32) + &half_pi), &(&half_pi << 1u32));
    let y = &x - &k * &half_pi;
    let y_err: BigInt = x_err + k.abs() * half_pi_err + 1;
    let (s, c, round_err) = taylor(&y, prec);
    let err: BigInt = y_err + round_err;
    let sy = Fixed {
        value: s,
        err: err.clone(),
        prec,
    };
    let cy = Fixed { value: c, err, prec };
    let q = k.mod_floor(&BigInt::from(4)).to_i64().expect("small");
    let (sx, cx) = match q {
        0 => (sy, cy),
        1 => (cy, sy.neg()),
        2 => (sy.neg(), cy.neg()),
        _ => (cy.neg(), sy),
    };
    (clamp_unit(sx.to_interval()), clamp_unit(cx.to_interval()))
}

fn clamp_unit(i: Interval) -> Interval {
    let one = BigRational::one();
    let lo = std::cmp::max(i.lo, -one.clone());
    let hi = std::cmp::min(i.hi, one);
    Interval::new(lo, hi)
}

pub fn sin(a: &Angle, bits: u32) -> Interval {
    sin_cos(a, bits).0
}

pub fn cos(a: &Angle, bits: u32) -> Interval {
    sin_cos(a, bits).1
}

/// A rational point exactly on the unit circle at angle close to `a`:
/// `((c^2 - s^2), 2sc) / (c^2 + s^2)` with `s, c` dyadic approximations of
/// `sin(a/2), cos(a/2)`.
pub fn unit_circle_point(a: &Angle, bits: u32) -> (Scalar, Scalar) {
    if let Some((s, c)) = a.exact_quadrant() {
        return (BigRational::from_integer(c.into()), BigRational::from_integer(s.into()));
    }
    let (s, c) = sin_cos(&a.half(), bits + 2);
    let s = s.dyadic(bits + 2);
    let c = c.dyadic(bits + 2);
    let n = &c * &c + &s * &s;
    ((&c * &c - &s * &s) / &n, (&s * &c * BigRational::from_integer(2.into())) / &n)
}

/// Exact `sin^2(pi / s)` for the `s` where it is rational.
pub fn rational_sin_squared_pi_over(s: u32) -> Option<Scalar> {
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    match s {
        1 => Some(r(0, 1)),
        2 => Some(r(1, 1)),
        3 => Some(r(3, 4)),
        4 => Some(r(1, 2)),
        6 => Some(r(1, 4)),
        _ => None,
    }
}

pub fn sign(i: &Interval) -> Option<Ordering> {
    if i.is_positive() {
        Some(Ordering::Greater)
    } else if i.is_negative() {
        Some(Ordering::Less)
    } else if i.lo.is_zero() && i.hi.is_zero() {
        Some(Ordering::Equal)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn pi_enclosure() {
        let p = pi(200);
        let lo = q(314159265358979, 100000000000000);
        let hi = q(314159265358980, 100000000000000);
        assert!(p.lo > lo && p.hi < hi);
        assert!(p.width() < BigRational::new(BigInt::one(), BigInt::one() << 200u32));
    }

    #[test]
    fn known_values() {
        let (s, c) = sin_cos(&Angle::pi_times(q(1, 6)), 100);
        assert!(s.contains(&q(1, 2)));
        assert!(c.square().contains(&q(3, 4)));
        let (s, c) = sin_cos(&Angle::pi_times(q(-3, 4)), 100);
        assert!(s.square().contains(&q(1, 2)) && s.is_negative());
        assert!(c.is_negative());
        let (s, c) = sin_cos(&Angle::pi_times(q(1, 2)), 64);
        assert_eq!((s.lo, c.lo), (q(1, 1), q(0, 1)));
    }

    #[test]
    fn large_multiples_reduce_correctly() {
        let (s, _) = sin_cos(&Angle::pi_times(q(61, 6)), 80);
        assert!(s.contains(&q(1, 2)));
        let (s, _) = sin_cos(&Angle::new(q(0, 1), q(1, 1)), 80);
        assert!(s.lo > q(841470984807, 1000000000000) && s.hi < q(841470984808, 1000000000000));
    }

    #[test]
    fn circle_points_are_exact() {
        for k in 0..13 {
            let (x, y) = unit_circle_point(&Angle::new(q(2 * k + 1, 13), q(1, 1000)), 64);
            assert_eq!(&x * &x + &y * &y, q(1, 1));
        }
        assert_eq!(unit_circle_point(&Angle::pi_times(q(1, 1)), 64), (q(-1, 1), q(0, 1)));
    }
}
