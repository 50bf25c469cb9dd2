//! Prime fields and binomial coefficients modulo a prime.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A prime `p`; scalars of `F_p` are `u32` values canonically reduced into `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Prime(u32);

impl Prime {
    pub const TWO: Prime = Prime(2);
    pub const THREE: Prime = Prime(3);
    pub const FIVE: Prime = Prime(5);

    pub fn new(p: u32) -> Result<Prime> {
        if p < 2 || (2..).take_while(|d: &u32| d * d <= p).any(|d| p % d == 0) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_two(self) -> bool {
        self.0 == 2
    }

    /// Reduce an arbitrary signed integer into `0..p`.
    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.0 != 0, "zero has no inverse in F_{}", self.0);
        self.pow(a, self.0 as u64 - 2)
    }

    /// `(-1)^e` as a field element.
    #[inline]
    pub fn sign(self, e: i64) -> u32 {
        if e.rem_euclid(2) == 0 {
            1
        } else {
            self.0 - 1
        }
    }

    /// `C(n, r) mod p` by Lucas' theorem, with `C(n, r) = 0` for `r < 0` or `r > n`.
    pub fn binomial(self, n: i64, r: i64) -> u32 {
        if r < 0 || n < 0 || r > n {
            return 0;
        }
        let p = self.0 as i64;
        let (mut n, mut r) = (n, r);
        let mut acc = 1u32;
        while r > 0 || n > 0 {
            let (nd, rd) = (n % p, r % p);
            if rd > nd {
                return 0;
            }
            acc = self.mul(acc, small_binomial(self, nd as u32, rd as u32));
            n /= p;
            r /= p;
        }
        acc
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

// n, r < p
fn small_binomial(p: Prime, n: u32, r: u32) -> u32 {
    let r = r.min(n - r);
    let mut num = 1u32;
    let mut den = 1u32;
    for i in 0..r {
        num = p.mul(num, n - i);
        den = p.mul(den, i + 1);
    }
    p.mul(num, p.inv(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        assert!(Prime::new(4).is_err());
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(9).is_err());
        assert_eq!(Prime::new(11).unwrap().value(), 11);
    }

    #[test]
    fn binomials_match_small_table() {
        let two = Prime::TWO;
        assert_eq!(two.binomial(7, 4), 1); // 35
        assert_eq!(two.binomial(19, 4), 0); // 3876
        assert_eq!(two.binomial(15, 8), 1); // 6435
        assert_eq!(Prime::THREE.binomial(9, 1), 0);
        assert_eq!(Prime::THREE.binomial(-1, 0), 0);
        assert_eq!(Prime::THREE.binomial(3, 5), 0);
    }

    #[test]
    fn inverse_and_sign() {
        let p = Prime::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(p.mul(a, p.inv(a)), 1);
        }
        assert_eq!(p.sign(3), 6);
        assert_eq!(p.sign(-2), 1);
        assert_eq!(p.reduce(-3), 4);
    }
}
