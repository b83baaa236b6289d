//! Closed intervals with dyadic rational endpoints and outward rounding.
//!
//! Every arithmetic result is rounded outward to `prec` significant bits, so
//! the true value of any expression is enclosed by the computed interval.
//! A precision of 0 means exact rational arithmetic (no rounding).

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::{rational_to_f64, Scalar};

#[derive(Clone, PartialEq)]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
    prec: u32,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:e}, {:e}]@{}",
            rational_to_f64(&self.lo),
            rational_to_f64(&self.hi),
            self.prec
        )
    }
}

fn pow2(s: u64) -> BigInt {
    BigInt::one() << s
}

fn bit_len(n: &BigInt) -> i64 {
    n.bits() as i64
}

fn round_dir(r: &BigRational, prec: u32, up: bool) -> BigRational {
    if prec == 0 || r.is_zero() {
        return r.clone();
    }
    let n = r.numer();
    let d = r.denom();
    if d.trailing_zeros() == Some(d.bits() - 1) && n.bits() <= prec as u64 {
        return r.clone();
    }
    let e = bit_len(n) - bit_len(d);
    let s = prec as i64 - e;
    let (num, den) = if s >= 0 {
        (n << (s as usize), d.clone())
    } else {
        (n.clone(), d << ((-s) as usize))
    };
    let m = if up {
        -((-num).div_floor(&den))
    } else {
        num.div_floor(&den)
    };
    if s >= 0 {
        BigRational::new(m, pow2(s as u64))
    } else {
        BigRational::from_integer(m << ((-s) as usize))
    }
}

fn merge_prec(a: u32, b: u32) -> u32 {
    match (a, b) {
        (0, p) | (p, 0) => p,
        (p, q) => p.max(q),
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Interval {
    /// Interval `[lo, hi]` at the given precision (endpoints rounded outward).
    pub fn new(lo: BigRational, hi: BigRational, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval {
            lo: round_dir(&lo, prec, false),
            hi: round_dir(&hi, prec, true),
            prec,
        }
    }

    pub fn point(r: BigRational, prec: u32) -> Self {
        Self::new(r.clone(), r, prec)
    }

    pub fn from_ratio(n: i64, d: i64, prec: u32) -> Self {
        Self::point(rat(n, d), prec)
    }

    /// Exact enclosure of a finite double.
    pub fn from_f64(x: f64, prec: u32) -> Self {
        let r = BigRational::from_float(x).expect("finite float");
        Interval { lo: r.clone(), hi: r, prec }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self
    }

    pub fn width(&self) -> f64 {
        rational_to_f64(&(&self.hi - &self.lo))
    }

    pub fn mid(&self) -> f64 {
        rational_to_f64(&((&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))))
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, x: f64) -> bool {
        match BigRational::from_float(x) {
            Some(r) => self.lo <= r && r <= self.hi,
            None => false,
        }
    }

    fn from_bounds(lo: BigRational, hi: BigRational, prec: u32) -> Self {
        Interval {
            lo: round_dir(&lo, prec, false),
            hi: round_dir(&hi, prec, true),
            prec,
        }
    }

    pub fn abs_max(&self) -> BigRational {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Interval::one().with_prec(self.prec);
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }

    /// Square root; `None` if the interval reaches below zero.
    pub fn sqrt(&self) -> Option<Self> {
        if self.lo.is_negative() {
            return None;
        }
        let prec = if self.prec == 0 { 256 } else { self.prec };
        let s = prec as u64 + 16;
        let scale = pow2(2 * s);
        let lo_scaled = (self.lo.clone() * BigRational::from_integer(scale.clone())).floor();
        let hi_scaled = (self.hi.clone() * BigRational::from_integer(scale)).ceil();
        let lo_root = lo_scaled.to_integer().sqrt();
        let mut hi_root = hi_scaled.to_integer().sqrt();
        if &hi_root * &hi_root < hi_scaled.to_integer() {
            hi_root += 1;
        }
        let den = pow2(s);
        Some(Self::from_bounds(
            BigRational::new(lo_root, den.clone()),
            BigRational::new(hi_root, den),
            prec,
        ))
    }

    /// Natural logarithm; `None` unless the interval is strictly positive.
    pub fn ln(&self) -> Option<Self> {
        if !self.lo.is_positive() {
            return None;
        }
        let prec = if self.prec == 0 { 256 } else { self.prec };
        let lo = ln_point(&self.lo, prec);
        if self.lo == self.hi {
            return Some(lo);
        }
        let hi = ln_point(&self.hi, prec);
        Some(Interval { lo: lo.lo, hi: hi.hi, prec })
    }

    /// Inverse hyperbolic cotangent, `acoth y = ½ ln((y+1)/(y−1))` for `y > 1`.
    pub fn acoth(&self) -> Option<Self> {
        let one = Interval::one().with_prec(self.prec);
        let ratio = (self.clone() + one.clone()).checked_div(&(self.clone() - one))?;
        Some(ratio.ln()? * Interval::from_ratio(1, 2, 0))
    }

    /// `ln 2 = 2 atanh(1/3)`, cached per precision.
    pub fn ln2(prec: u32) -> Self {
        static CACHE: OnceLock<Mutex<HashMap<u32, Interval>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(v) = cache.lock().expect("ln2 cache").get(&prec) {
            return v.clone();
        }
        let v = atanh_series(&Interval::from_ratio(1, 3, prec), prec) * Interval::from_i64(2);
        cache.lock().expect("ln2 cache").insert(prec, v.clone());
        v
    }

    pub fn sqrt5(prec: u32) -> Self {
        Interval::from_ratio(5, 1, prec).sqrt().expect("positive")
    }

    pub fn golden(prec: u32) -> Self {
        (Interval::one().with_prec(prec) + Interval::sqrt5(prec)) * Interval::from_ratio(1, 2, 0)
    }
}

/// `atanh r` for `|r| ≤ 1/3` by its odd power series plus a rigorous tail bound.
fn atanh_series(r: &Interval, prec: u32) -> Interval {
    let rmax = rational_to_f64(&r.abs_max());
    assert!(rmax <= 0.34, "atanh series argument too large");
    if rmax == 0.0 {
        return Interval::zero().with_prec(prec);
    }
    let bits_per_term = -2.0 * rmax.log2();
    let n_terms = ((prec as f64 + 8.0) / bits_per_term).ceil() as u32 + 1;
    let r2 = r.clone() * r.clone();
    let mut power = r.clone();
    let mut sum = Interval::zero().with_prec(prec);
    for i in 0..n_terms {
        let denom = Interval::from_i64(2 * i as i64 + 1);
        sum = sum + power.checked_div(&denom).expect("nonzero");
        power = power * r2.clone();
    }
    // |tail| ≤ |r|^(2N+1) / ((2N+1)(1 − r²))
    let rb = Interval::point(r.abs_max(), prec);
    let one = Interval::one().with_prec(prec);
    let tail = rb
        .powi(2 * n_terms + 1)
        .checked_div(&(Interval::from_i64(2 * n_terms as i64 + 1) * (one - rb.clone() * rb)))
        .expect("nonzero");
    let t = tail.hi.clone();
    sum + Interval { lo: -t.clone(), hi: t, prec }
}

fn ln_point(q: &BigRational, prec: u32) -> Interval {
    let mut k = bit_len(q.numer()) - bit_len(q.denom());
    let mut m = if k >= 0 {
        q / BigRational::from_integer(pow2(k as u64))
    } else {
        q * BigRational::from_integer(pow2((-k) as u64))
    };
    // m ∈ [2/3, 4/3] keeps |r| ≤ 1/7
    let two = BigRational::from_integer(BigInt::from(2));
    if m > rat(4, 3) {
        m /= &two;
        k += 1;
    } else if m < rat(2, 3) {
        m *= &two;
        k -= 1;
    }
    let one = BigRational::from_integer(BigInt::one());
    let r = (&m - &one) / (&m + &one);
    let r_iv = Interval::point(r, prec);
    let mut out = atanh_series(&r_iv, prec) * Interval::from_i64(2);
    if k != 0 {
        out = out + Interval::ln2(prec) * Interval::from_i64(k);
    }
    out
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Self) -> Self {
        let p = merge_prec(self.prec, rhs.prec);
        Interval::from_bounds(self.lo + rhs.lo, self.hi + rhs.hi, p)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Self) -> Self {
        let p = merge_prec(self.prec, rhs.prec);
        Interval::from_bounds(self.lo - rhs.hi, self.hi - rhs.lo, p)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Self {
        Interval { lo: -self.hi, hi: -self.lo, prec: self.prec }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Self) -> Self {
        let p = merge_prec(self.prec, rhs.prec);
        if self.lo == self.hi && rhs.lo == rhs.hi {
            let v = &self.lo * &rhs.lo;
            return Interval::from_bounds(v.clone(), v, p);
        }
        let c = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = c.iter().min().expect("nonempty").clone();
        let hi = c.iter().max().expect("nonempty").clone();
        Interval::from_bounds(lo, hi, p)
    }
}

impl Scalar for Interval {
    fn from_i64(n: i64) -> Self {
        let r = BigRational::from_integer(BigInt::from(n));
        Interval { lo: r.clone(), hi: r, prec: 0 }
    }

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.contains_zero() {
            return None;
        }
        let p = merge_prec(self.prec, rhs.prec);
        let inv = Interval::from_bounds(rhs.hi.recip(), rhs.lo.recip(), p);
        Some(self.clone() * inv)
    }

    fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    fn is_exact_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    fn approx_f64(&self) -> f64 {
        self.mid()
    }
}

/// Sign of a big integer as an `Ordering` (helper for callers holding raw rationals).
pub fn sign_of(r: &BigRational) -> Ordering {
    match r.numer().sign() {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}
