//! Integral Pontryagin data and the Newton-polynomial divisibility test.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::classes::{Poly, PolyRing, TruncatedRing};
use super::{Class, PoincareRing};
use crate::error::{Error, Result};
use crate::field::Prime;

/// A polynomial in `p1, ..., pk` together with the ring it lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    pub ring: PolyRing,
    pub poly: Poly,
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.format(&self.poly))
    }
}

/// `N_k` in the elementary symmetric functions of the squared Chern roots,
/// i.e. in the Pontryagin classes, via
/// `N_k = p1 N_(k-1) - p2 N_(k-2) + ... + (-1)^(k-1) k pk`.
pub fn newton_polynomial(k: usize, modulus: Option<Prime>) -> Polynomial {
    let ring = PolyRing::indexed("p", k.max(1));
    let mut n: Vec<Poly> = vec![ring.constant(0)];
    for m in 1..=k {
        let mut acc = ring.constant(0);
        for i in 1..m {
            let term = ring.mul(&ring.var(i - 1), &n[m - i]);
            acc = if i % 2 == 1 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
        }
        let last = ring.scale(&ring.var(m - 1), &BigInt::from(m));
        acc = if m % 2 == 1 { ring.add(&acc, &last) } else { ring.sub(&acc, &last) };
        n.push(acc);
    }
    let poly = n.pop().unwrap_or_default();
    match modulus {
        Some(p) => {
            let (ring, poly) = ring.reduce(&poly, p);
            Polynomial { ring, poly }
        }
        None => Polynomial { ring, poly },
    }
}

/// Total Pontryagin class of a manifold whose rational cohomology is a
/// truncated polynomial ring `Z[g]/(g^(m+1))`, stored as the coefficients of
/// the powers of `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralCharData {
    pub generator: String,
    pub generator_degree: u32,
    pub top_power: u32,
    #[serde(serialize_with = "ser_bigints")]
    pub total: Vec<BigInt>,
    /// Sign `s` with `g = s x` for the mod-`p` generator `x` of the ring
    /// models at odd primes.
    pub odd_sign: i32,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

fn series_pow(a: &[BigInt], e: u32, len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    out[0] = BigInt::one();
    for _ in 0..e {
        out = series_mul(&out, a, len);
    }
    out
}

fn series_mul(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate().take(len.saturating_sub(i)) {
            out[i + j] += x * y;
        }
    }
    out
}

impl IntegralCharData {
    pub fn new(generator: &str, generator_degree: u32, top_power: u32, total: Vec<BigInt>, odd_sign: i32) -> Result<Self> {
        if total.len() != top_power as usize + 1 {
            return Err(Error::Dimension(format!("expected {} coefficients, got {}", top_power + 1, total.len())));
        }
        if !total[0].is_one() {
            return Err(Error::NonUnitConstant);
        }
        if let Some(j) = (1..total.len()).find(|&j| !total[j].is_zero() && (j as u32 * generator_degree) % 4 != 0) {
            return Err(Error::InconsistentDegrees(format!(
                "Pontryagin term {generator}^{j} has degree {}",
                j as u32 * generator_degree
            )));
        }
        Ok(IntegralCharData { generator: generator.to_string(), generator_degree, top_power, total, odd_sign })
    }

    /// `p(CP^n) = (1 + x^2)^(n+1)`.
    pub fn cp(n: u32) -> Self {
        let len = n as usize + 1;
        let mut base = vec![BigInt::zero(); len];
        base[0] = BigInt::one();
        if len > 2 {
            base[2] = BigInt::one();
        }
        IntegralCharData::new("x", 2, n, series_pow(&base, n + 1, len), 1).expect("valid by construction")
    }

    /// `p(HP^n) = (1 + u)^(2n+2) (1 + 4u)^(-1)`; the mod-`p` generator is `x = -u`.
    pub fn hp(n: u32) -> Self {
        let len = n as usize + 1;
        let mut base = vec![BigInt::zero(); len];
        base[0] = BigInt::one();
        if len > 1 {
            base[1] = BigInt::one();
        }
        let num = series_pow(&base, 2 * n + 2, len);
        let inv: Vec<BigInt> = (0..len).map(|k| BigInt::from(-4).pow(k as u32)).collect();
        IntegralCharData::new("u", 4, n, series_mul(&num, &inv, len), -1).expect("valid by construction")
    }

    /// Coefficient of `p_i` as a multiple of the appropriate power of the generator.
    pub fn pontryagin(&self, i: u32) -> BigInt {
        let deg = 4 * i;
        if deg % self.generator_degree != 0 {
            return BigInt::zero();
        }
        let j = (deg / self.generator_degree) as usize;
        self.total.get(j).cloned().unwrap_or_default()
    }

    /// Power of the generator carrying `p_i`.
    pub fn power_of(&self, i: u32) -> Option<u32> {
        let deg = 4 * i;
        (deg % self.generator_degree == 0).then_some(deg / self.generator_degree)
    }

    /// Coefficient of `p_1 / 2` when `p_1` is even.
    pub fn p1_half(&self) -> Option<BigInt> {
        let p1 = self.pontryagin(1);
        let two = BigInt::from(2);
        (&p1 % &two).is_zero().then(|| p1 / two)
    }

    /// Text of a class `c g^j`, e.g. `12 u` or `6 x^2`.
    pub fn format_term(&self, c: &BigInt, j: u32) -> String {
        let g = match j {
            0 => return c.to_string(),
            1 => self.generator.clone(),
            j => format!("{}^{j}", self.generator),
        };
        format!("{c} {g}")
    }

    /// Substitute the Pontryagin classes into `f`, giving coefficients of
    /// the powers of the generator.
    pub fn evaluate(&self, f: &Polynomial) -> Vec<BigInt> {
        let len = self.top_power as usize + 1;
        let mut out = vec![BigInt::zero(); len];
        for (exps, c) in &f.poly.terms {
            let mut term = vec![BigInt::zero(); len];
            term[0] = c.clone();
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut pi = vec![BigInt::zero(); len];
                if let Some(j) = self.power_of(i as u32 + 1).filter(|&j| (j as usize) < len) {
                    pi[j as usize] = self.pontryagin(i as u32 + 1);
                }
                term = series_mul(&term, &series_pow(&pi, e, len), len);
            }
            for (o, t) in out.iter_mut().zip(term) {
                *o += t;
            }
        }
        out
    }

    /// Reduce a class in powers of the generator into a ring model at `p`
    /// whose basis is `1, x, x^2, ...`.
    pub fn reduce(&self, coefficients: &[BigInt], ring: &PoincareRing) -> Class {
        let p = ring.prime();
        let mut out = ring.zero();
        for (j, c) in coefficients.iter().enumerate() {
            if j >= out.len() {
                break;
            }
            let sign = if !p.is_two() && self.odd_sign < 0 && j % 2 == 1 { -1 } else { 1 };
            let m = BigInt::from(p.value());
            let r: BigInt = ((c * sign) % &m + &m) % &m;
            out[j] = r.to_u32().unwrap_or(0);
        }
        out
    }

    /// Total Pontryagin class of the stable normal bundle.
    pub fn negative(&self) -> Self {
        let len = self.top_power as usize + 1;
        let ring = PolyRing::new(vec![self.generator.clone()], vec![1]).truncated(self.top_power);
        let mut poly = Poly::default();
        for (j, c) in self.total.iter().enumerate() {
            if !c.is_zero() {
                poly.terms.insert(vec![j as u32], c.clone());
            }
        }
        let inv = super::classes::inverse_total_class(&ring, &poly).expect("unit constant");
        let total = (0..len).map(|j| inv.coefficient(&[j as u32])).collect();
        IntegralCharData { total, ..self.clone() }
    }
}

/// Whether `N_((p-1)/2)` evaluated on the Pontryagin classes has every
/// coefficient divisible by `p`.
pub fn q1_divisibility(data: &IntegralCharData, p: Prime) -> bool {
    let k = ((p.value() - 1) / 2) as usize;
    let n = newton_polynomial(k, None);
    let m = BigInt::from(p.value());
    data.evaluate(&n).iter().all(|c| (c % &m).is_zero())
}
