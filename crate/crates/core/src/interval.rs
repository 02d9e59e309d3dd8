//! Certified real intervals on dyadic fixed-point endpoints.
//!
//! An interval stores integer endpoints `lo ≤ hi` meaning
//! `[lo·2^-f, hi·2^-f]` with `f = precision_bits + GUARD_BITS`. Every
//! operation rounds outward, and the transcendental functions add explicit
//! truncation bounds, so the true value is always enclosed.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{Rational, RationalAngle};

const GUARD_BITS: u32 = 48;

/// Starting precision for certified comparisons.
pub const DEFAULT_PRECISION: u32 = 192;
/// Escalation cap; comparisons still undecided here are reported as
/// indeterminate.
pub const MAX_PRECISION: u32 = 1536;

/// `192, 384, 768, 1536`.
pub fn precision_ladder() -> impl Iterator<Item = u32> {
    core::iter::successors(Some(DEFAULT_PRECISION), |&p| (p < MAX_PRECISION).then_some(p * 2))
}

fn pow2(s: u32) -> BigInt {
    BigInt::one() << s
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealInterval {
    lo: BigInt,
    hi: BigInt,
    frac: u32,
    precision_bits: u32,
}

impl RealInterval {
    fn raw(lo: BigInt, hi: BigInt, frac: u32, precision_bits: u32) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi, frac, precision_bits }
    }

    fn like(&self, lo: BigInt, hi: BigInt) -> Self {
        Self::raw(lo, hi, self.frac, self.precision_bits)
    }

    pub fn zero(precision_bits: u32) -> Self {
        Self::raw(BigInt::zero(), BigInt::zero(), precision_bits + GUARD_BITS, precision_bits)
    }

    pub fn from_integer(n: i64, precision_bits: u32) -> Self {
        let f = precision_bits + GUARD_BITS;
        let v = BigInt::from(n) << f;
        Self::raw(v.clone(), v, f, precision_bits)
    }

    /// Tightest enclosure of `q` on the dyadic grid.
    pub fn from_rational(q: &Rational, precision_bits: u32) -> Self {
        let f = precision_bits + GUARD_BITS;
        let n = q.numer() << f;
        let lo = n.div_floor(q.denom());
        let hi = ceil_div(&n, q.denom());
        Self::raw(lo, hi, f, precision_bits)
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn lo(&self) -> Rational {
        Rational::new(self.lo.clone(), pow2(self.frac))
    }

    pub fn hi(&self) -> Rational {
        Rational::new(self.hi.clone(), pow2(self.frac))
    }

    pub fn mid(&self) -> Rational {
        Rational::new(&self.lo + &self.hi, pow2(self.frac + 1))
    }

    pub fn width(&self) -> Rational {
        Rational::new(&self.hi - &self.lo, pow2(self.frac))
    }

    /// Midpoint rounded down onto the dyadic grid `2^-(precision_bits)`.
    pub fn mid_dyadic(&self, bits: u32) -> Rational {
        let m = (&self.lo + &self.hi).div_floor(&pow2(self.frac + 1 - bits.min(self.frac)));
        Rational::new(m, pow2(bits.min(self.frac)))
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo() <= q && q <= &self.hi()
    }

    /// Certified `> 0`.
    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Certified `< 0`.
    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn disjoint(&self, other: &Self) -> bool {
        self.compare(other).is_some()
    }

    /// Certified ordering, `None` when the intervals overlap.
    pub fn compare(&self, other: &Self) -> Option<Ordering> {
        let (a, b) = align(self, other);
        if a.hi < b.lo {
            Some(Ordering::Less)
        } else if b.hi < a.lo {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        let m = &self.lo + &self.hi;
        let shift = self.frac as i32 + 1;
        // keep ~60 significant bits before converting
        let bits = m.bits() as i32;
        let drop = (bits - 60).max(0);
        let top = (&m >> drop as u32).to_f64().unwrap_or(0.0);
        top * pow2f(drop - shift)
    }

    /// Upper bound on `max(|lo|, |hi|)` as an interval endpoint.
    pub fn mag(&self) -> Self {
        let m = self.lo.abs().max(self.hi.abs());
        self.like(m.clone(), m)
    }

    pub fn neg(&self) -> Self {
        self.like(-&self.hi, -&self.lo)
    }

    pub fn abs(&self) -> Self {
        if self.lo.is_negative() && self.hi.is_positive() {
            let m = (-&self.lo).max(self.hi.clone());
            self.like(BigInt::zero(), m)
        } else if self.hi.is_negative() || (self.hi.is_zero() && self.lo.is_negative()) {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let (a, b) = align(self, rhs);
        a.like(&a.lo + &b.lo, &a.hi + &b.hi)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = align(self, rhs);
        let p = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let mn = p.iter().min().unwrap();
        let mx = p.iter().max().unwrap();
        let s = pow2(a.frac);
        a.like(mn.div_floor(&s), ceil_div(mx, &s))
    }

    pub fn square(&self) -> Self {
        let a = self.abs();
        let s = pow2(a.frac);
        a.like((&a.lo * &a.lo).div_floor(&s), ceil_div(&(&a.hi * &a.hi), &s))
    }

    /// Fails when the divisor interval contains zero.
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.contains_zero() {
            return Err(Error::Numeric("division by an interval containing zero"));
        }
        let (a, b) = align(self, rhs);
        let f = a.frac;
        let nums = [&a.lo << f, &a.hi << f];
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for n in &nums {
            for d in [&b.lo, &b.hi] {
                let fl = n.div_floor(d);
                let cl = ceil_div(n, d);
                lo = Some(lo.map_or(fl.clone(), |x| x.min(fl)));
                hi = Some(hi.map_or(cl.clone(), |x| x.max(cl)));
            }
        }
        Ok(a.like(lo.unwrap(), hi.unwrap()))
    }

    pub fn mul_int(&self, k: i64) -> Self {
        let k = BigInt::from(k);
        let (x, y) = (&self.lo * &k, &self.hi * &k);
        if x <= y {
            self.like(x, y)
        } else {
            self.like(y, x)
        }
    }

    pub fn div_int(&self, k: i64) -> Self {
        assert!(k != 0);
        let kb = BigInt::from(k.abs());
        let r = self.like(self.lo.div_floor(&kb), ceil_div(&self.hi, &kb));
        if k < 0 {
            r.neg()
        } else {
            r
        }
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        let n = self.mul_big(q.numer());
        let d = q.denom();
        n.like(n.lo.div_floor(d), ceil_div(&n.hi, d))
    }

    fn mul_big(&self, k: &BigInt) -> Self {
        let (x, y) = (&self.lo * k, &self.hi * k);
        if x <= y {
            self.like(x, y)
        } else {
            self.like(y, x)
        }
    }

    /// Square root; a slightly negative lower end (from rounding) is clamped
    /// to zero. Fails when the interval is entirely negative.
    pub fn sqrt(&self) -> Result<Self> {
        if self.hi.is_negative() {
            return Err(Error::Numeric("sqrt of a negative interval"));
        }
        let f = self.frac;
        let lo = if self.lo.is_positive() { (&self.lo << f).sqrt() } else { BigInt::zero() };
        let hn = &self.hi << f;
        let hr = hn.sqrt();
        let hi = if &hr * &hr == hn { hr } else { hr + 1 };
        Ok(self.like(lo, hi))
    }

    /// Smallest `e` with `width/2 ≤ 2^e` (`None` for a point interval).
    pub fn radius_log2(&self) -> Option<i64> {
        let w = &self.hi - &self.lo;
        if w.is_zero() {
            return None;
        }
        // width/2 = w·2^-(f+1) ≤ 2^(bits(w) - f - 1)
        Some(w.bits() as i64 - self.frac as i64 - 1)
    }

    fn widen(&self, pad: &BigInt) -> Self {
        self.like(&self.lo - pad, &self.hi + pad)
    }

    fn halve(&self) -> Self {
        self.div_int(2)
    }
}

fn pow2f(e: i32) -> f64 {
    let mut x = 1.0f64;
    if e >= 0 {
        for _ in 0..e {
            x *= 2.0;
        }
    } else {
        for _ in 0..(-e) {
            x *= 0.5;
        }
    }
    x
}

fn align<'a>(a: &'a RealInterval, b: &'a RealInterval) -> (RealInterval, RealInterval) {
    match a.frac.cmp(&b.frac) {
        Ordering::Equal => (a.clone(), b.clone()),
        Ordering::Less => (a.rescale(b.frac, b.precision_bits), b.clone()),
        Ordering::Greater => (a.clone(), b.rescale(a.frac, a.precision_bits)),
    }
}

impl RealInterval {
    fn rescale(&self, frac: u32, precision_bits: u32) -> Self {
        if frac >= self.frac {
            let s = frac - self.frac;
            Self::raw(&self.lo << s, &self.hi << s, frac, precision_bits)
        } else {
            let d = pow2(self.frac - frac);
            Self::raw(self.lo.div_floor(&d), ceil_div(&self.hi, &d), frac, precision_bits)
        }
    }
}

/// Scientific decimal rendering of a rational with `digits` significant
/// digits (truncated toward zero), e.g. `1.7320508075e0`.
pub fn fmt_sci(q: &Rational, digits: usize) -> String {
    use alloc::format;
    if q.is_zero() {
        return String::from("0");
    }
    let neg = q.is_negative();
    let a = q.abs();
    // find exponent e with 10^e ≤ a < 10^(e+1)
    let ten = Rational::from_integer(BigInt::from(10));
    let mut e: i64 = 0;
    let mut scaled = a.clone();
    while scaled >= ten {
        scaled /= &ten;
        e += 1;
    }
    while scaled < Rational::one() {
        scaled *= &ten;
        e -= 1;
    }
    let p = BigInt::from(10).pow(digits.saturating_sub(1) as u32);
    let m = (scaled * Rational::from_integer(p)).floor().to_integer();
    let s = m.to_str_radix(10);
    let (head, tail) = s.split_at(1);
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mid = self.mid();
        f.write_str(&fmt_sci(&mid, 20))?;
        match self.radius_log2() {
            Some(e) => write!(f, " ±2^{e}"),
            None => f.write_str(" (exact)"),
        }
    }
}

/// π, ln 2 and the elementary functions at one working precision.
#[derive(Clone, Debug)]
pub struct RealContext {
    precision_bits: u32,
    pi: RealInterval,
    ln2: RealInterval,
}

impl RealContext {
    pub fn new(precision_bits: u32) -> Self {
        let pi = machin_pi(precision_bits);
        let ln2 = {
            let third = RealInterval::from_integer(1, precision_bits).div_int(3);
            atanh_series(&third).mul_int(2)
        };
        Self { precision_bits, pi, ln2 }
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn pi(&self) -> &RealInterval {
        &self.pi
    }

    pub fn rational(&self, q: &Rational) -> RealInterval {
        RealInterval::from_rational(q, self.precision_bits)
    }

    pub fn integer(&self, n: i64) -> RealInterval {
        RealInterval::from_integer(n, self.precision_bits)
    }

    /// The real number `a.coeff·π`.
    pub fn angle(&self, a: &RationalAngle) -> RealInterval {
        self.pi.mul_rational(a.coeff())
    }

    pub fn sin_cos(&self, x: &RealInterval) -> (RealInterval, RealInterval) {
        let half_pi = self.pi.halve();
        let hp_mid = &half_pi.lo + &half_pi.hi;
        let x_mid = &x.lo + &x.hi;
        // k = round(x / (π/2))
        let k: BigInt = (&x_mid * 2u32 + &hp_mid).div_floor(&(&hp_mid * 2u32));
        let r = x.sub(&half_pi.mul_big(&k));
        let s = sin_series(&r);
        let c = cos_series(&r);
        match k.mod_floor(&BigInt::from(4)).to_u8().unwrap() {
            0 => (s, c),
            1 => (c, s.neg()),
            2 => (s.neg(), c.neg()),
            _ => (c.neg(), s),
        }
    }

    pub fn sin(&self, x: &RealInterval) -> RealInterval {
        self.sin_cos(x).0
    }

    pub fn cos(&self, x: &RealInterval) -> RealInterval {
        self.sin_cos(x).1
    }

    /// `cot(a)` for an exact angle; `Error::Pole` on `πZ`.
    pub fn cot_angle(&self, a: &RationalAngle) -> Result<RealInterval> {
        let t = a.normalize_mod_pi();
        if t.coeff().is_zero() {
            return Err(Error::Pole(crate::exact::fmt_rational(a.coeff())));
        }
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        if t.coeff() == &half {
            return Ok(RealInterval::zero(self.precision_bits));
        }
        // cot(π - t) = -cot(t): keep the argument in (0, π/2)
        let (arg, flip) =
            if t.coeff() > &half { (RationalAngle::new(Rational::one() - t.coeff()), true) } else { (t, false) };
        let (s, c) = self.sin_cos(&self.angle(&arg));
        let v = c.div(&s)?;
        Ok(if flip { v.neg() } else { v })
    }

    /// `|sin(a)|` for an exact angle.
    pub fn abs_sin_angle(&self, a: &RationalAngle) -> RealInterval {
        let t = a.normalize_mod_pi();
        self.sin(&self.angle(&t)).abs()
    }

    /// Natural logarithm of a positive interval.
    pub fn ln(&self, x: &RealInterval) -> Result<RealInterval> {
        if !x.is_positive() {
            return Err(Error::Numeric("logarithm of a non-positive interval"));
        }
        // x = y·2^n with y ≤ 1
        let n = x.hi.bits() as i64 - x.frac as i64;
        let y = if n >= 0 {
            let d = pow2(n as u32);
            x.like(x.lo.div_floor(&d), ceil_div(&x.hi, &d))
        } else {
            let s = (-n) as u32;
            x.like(&x.lo << s, &x.hi << s)
        };
        let one = RealInterval::from_integer(1, x.precision_bits).rescale(x.frac, x.precision_bits);
        let z = y.sub(&one).div(&y.add(&one))?;
        let ln_y = atanh_series(&z).mul_int(2);
        let ln2 = self.ln2.rescale(x.frac, x.precision_bits);
        Ok(ln_y.add(&ln2.mul_int(n)))
    }
}

/// Certified enclosure of `cot(a)`.
pub fn cot_eval(a: &RationalAngle, precision_bits: u32) -> Result<RealInterval> {
    RealContext::new(precision_bits).cot_angle(a)
}

/// `arctan(1/k)` on a fixed-point grid with `f` fractional bits; returns the
/// truncated sum and an error bound in ulps.
fn arctan_inv(k: u32, f: u32) -> (BigInt, BigInt) {
    let k = BigInt::from(k);
    let k2 = &k * &k;
    let mut p = pow2(f).div_floor(&k);
    let mut sum = BigInt::zero();
    let mut n: u32 = 0;
    while !p.is_zero() {
        let t = p.div_floor(&BigInt::from(2 * n + 1));
        if n.is_multiple_of(2) {
            sum += t;
        } else {
            sum -= t;
        }
        p = p.div_floor(&k2);
        n += 1;
    }
    // each term off by < 3 ulps; the omitted tail is < 1 ulp
    (sum, BigInt::from(3 * n + 1))
}

fn machin_pi(precision_bits: u32) -> RealInterval {
    let f = precision_bits + GUARD_BITS;
    let g = f + 16;
    let (a, ea) = arctan_inv(5, g);
    let (b, eb) = arctan_inv(239, g);
    let v: BigInt = a * 16u32 - b * 4u32;
    let e: BigInt = ea * 16u32 + eb * 4u32;
    let d = pow2(16);
    RealInterval::raw((&v - &e).div_floor(&d), ceil_div(&(&v + &e), &d), f, precision_bits)
}

fn below_ulp(t: &RealInterval) -> bool {
    t.lo.abs() <= BigInt::one() && t.hi.abs() <= BigInt::one()
}

fn sin_series(r: &RealInterval) -> RealInterval {
    let r2 = r.square();
    let mut term = r.clone();
    let mut sum = r.clone();
    let mut k: i64 = 1;
    loop {
        term = term.mul(&r2).div_int((2 * k) * (2 * k + 1)).neg();
        sum = sum.add(&term);
        k += 1;
        if below_ulp(&term) {
            break;
        }
    }
    let pad = term.mag().hi + 1;
    sum.widen(&pad)
}

fn cos_series(r: &RealInterval) -> RealInterval {
    let r2 = r.square();
    let mut term = r.like(pow2(r.frac), pow2(r.frac));
    let mut sum = term.clone();
    let mut k: i64 = 1;
    loop {
        term = term.mul(&r2).div_int((2 * k - 1) * (2 * k)).neg();
        sum = sum.add(&term);
        k += 1;
        if below_ulp(&term) {
            break;
        }
    }
    let pad = term.mag().hi + 1;
    sum.widen(&pad)
}

/// `atanh(z)` for `|z| ≤ 1/2`.
fn atanh_series(z: &RealInterval) -> RealInterval {
    let z2 = z.square();
    let mut pow = z.clone();
    let mut sum = z.clone();
    let mut k: i64 = 1;
    loop {
        pow = pow.mul(&z2);
        sum = sum.add(&pow.div_int(2 * k + 1));
        k += 1;
        if below_ulp(&pow) {
            break;
        }
    }
    // tail ≤ |z|^(2k+1)/(1-z²) ≤ (4/3)|pow|
    let pad = pow.mag().hi * 2 + 1;
    sum.widen(&pad)
}

impl PartialOrd for RealInterval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.compare(other)
    }
}
