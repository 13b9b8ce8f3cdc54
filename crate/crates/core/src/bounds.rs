//! Exact rational forms of the length guarantees.
//!
//! Every bound is a `Ratio<i128>` so comparisons against integer path
//! lengths never go through floating point.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

pub type Rational = Ratio<i128>;

/// Largest multiplicity bound for which `(k+2)! * n` still fits comfortably.
pub const MAX_K: u32 = 20;

pub fn int(v: usize) -> Rational {
    Rational::from_integer(v as i128)
}

pub fn factorial(m: u32) -> i128 {
    (1..=m as i128).product()
}

/// `(n+1)/2`: greedy one-end extension of a rainbow path.
pub fn half(n: usize) -> Rational {
    Rational::new(n as i128 + 1, 2)
}

/// `(2n+1)/3`: maximal rainbow paths.
pub fn two_thirds(n: usize) -> Rational {
    Rational::new(2 * n as i128 + 1, 3)
}

/// `(1 - 2/(k+2)!) n`: the k-rainbow ladder.
pub fn kfact(n: usize, k: u32) -> Rational {
    let f = factorial(k + 2);
    Rational::new((f - 2) * n as i128, f)
}

/// `n - n/2^k`: the recursive segment builder.
pub fn naive(n: usize, k: u32) -> Rational {
    let p = 1i128 << k.min(100);
    int(n) - Rational::new(n as i128, p)
}

/// `n - (n-1)/2^k`: what the recursive builder actually delivers when each
/// level covers at least half of what is left plus one.
pub fn naive_telescoped(n: usize, k: u32) -> Rational {
    if n == 0 {
        return int(0);
    }
    let p = 1i128 << k.min(100);
    int(n) - Rational::new(n as i128 - 1, p)
}

/// `(k+1)(n - t)`: lower bound on `|C_k|` of a maximal k-rainbow path on `t` vertices.
pub fn lemma2(n: usize, k: u32, t: usize) -> i128 {
    (k as i128 + 1) * (n as i128 - t as i128)
}

/// `(t_prev + (k+1) n) / (k+2)`: one ladder step from a `(k-1)`-rainbow path on `t_prev` vertices.
pub fn ladder_step(n: usize, k: u32, t_prev: usize) -> Rational {
    Rational::new(t_prev as i128 + (k as i128 + 1) * n as i128, k as i128 + 2)
}

/// `(k(k+1) n + 1) / (k(k+1) + 1)`: any maximal k-rainbow path, from
/// `k |C_k| <= t - 1` combined with `|C_k| >= (k+1)(n-t)`.
pub fn maximal(n: usize, k: u32) -> Rational {
    let q = k as i128 * (k as i128 + 1);
    Rational::new(q * n as i128 + 1, q + 1)
}

/// `1 + t/k`: positions without a k-successor.
pub fn counting(t: usize, k: u32) -> Rational {
    Rational::new(k as i128 + t as i128, k as i128)
}

/// Smallest integer not below `r`.
pub fn ceil(r: &Rational) -> i128 {
    r.ceil().to_integer()
}

pub fn meets(len: usize, bound: &Rational) -> bool {
    int(len) >= *bound
}

/// Wire form of a rational: numerator, denominator and a decimal rendering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub num: i128,
    pub den: i128,
    pub decimal: f64,
}

impl From<Rational> for RationalRepr {
    fn from(r: Rational) -> Self {
        RationalRepr {
            num: *r.numer(),
            den: *r.denom(),
            decimal: *r.numer() as f64 / *r.denom() as f64,
        }
    }
}

impl From<RationalRepr> for Rational {
    fn from(r: RationalRepr) -> Self {
        Rational::new(r.num, r.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_values_at_120() {
        assert_eq!(kfact(120, 1), Rational::from_integer(80));
        assert_eq!(kfact(120, 2), Rational::from_integer(110));
        assert_eq!(kfact(120, 3), Rational::from_integer(118));
        assert_eq!(kfact(4, 1), Rational::new(8, 3));
        assert_eq!(kfact(4, 2), Rational::new(11, 3));
    }

    #[test]
    fn maximal_bound_reduces_to_two_thirds() {
        for n in 1..50 {
            assert_eq!(maximal(n, 1), two_thirds(n));
        }
    }

    #[test]
    fn two_thirds_dominates_kfact_base() {
        for n in 1..200 {
            assert!(two_thirds(n) >= kfact(n, 1));
        }
    }

    #[test]
    fn recurrence_preserves_kfact() {
        // (t_prev + (k+1)n)/(k+2) >= kfact(n,k) whenever t_prev >= kfact(n,k-1)
        for n in [24usize, 120, 360] {
            for k in 2..=6 {
                let t_prev = ceil(&kfact(n, k - 1)) as usize;
                assert!(ladder_step(n, k, t_prev) >= kfact(n, k));
            }
        }
    }

    #[test]
    fn telescoped_dominates_naive() {
        for n in [1usize, 2, 16, 64, 256] {
            for k in 1..=6 {
                assert!(naive_telescoped(n, k) >= naive(n, k));
            }
            assert_eq!(naive_telescoped(n, 1), half(n));
        }
    }

    #[test]
    fn repr_keeps_exact_parts() {
        let r: RationalRepr = two_thirds(4).into();
        assert_eq!((r.num, r.den), (3, 1));
        let r: RationalRepr = kfact(4, 1).into();
        assert_eq!((r.num, r.den), (8, 3));
        assert_eq!(Rational::from(r), kfact(4, 1));
    }
}
