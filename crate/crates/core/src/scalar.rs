//! Complex numbers over MPFR reals.
//!
//! Every value carries its own mantissa precision; binary operations produce
//! results at the precision of the left operand, so values built from one
//! [`PrecisionContext`] stay in that context.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};
use crate::precision::PrecisionContext;

pub type Real = Float;

pub fn real(ctx: PrecisionContext, value: f64) -> Real {
    Float::with_val(ctx.bits(), value)
}

pub fn pi(ctx: PrecisionContext) -> Real {
    Float::with_val(ctx.bits(), Constant::Pi)
}

/// Parses a decimal string such as `"0.7304992431"` or `"-1.5e-3"`.
pub fn parse_real(ctx: PrecisionContext, text: &str) -> Result<Real> {
    let text = text.trim();
    let parsed = Float::parse(text).map_err(|e| Error::Parse(format!("{text:?}: {e}")))?;
    Ok(Float::with_val(ctx.bits(), parsed))
}

/// Decimal rendering with `digits` significant digits, fixed layout so that
/// identical values always print identically.
pub fn format_real(x: &Real, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits))
}

#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Self { re, im }
    }

    pub fn zero(ctx: PrecisionContext) -> Self {
        Self::new(Float::new(ctx.bits()), Float::new(ctx.bits()))
    }

    pub fn one(ctx: PrecisionContext) -> Self {
        Self::from_f64(ctx, 1.0, 0.0)
    }

    pub fn i(ctx: PrecisionContext) -> Self {
        Self::from_f64(ctx, 0.0, 1.0)
    }

    pub fn from_f64(ctx: PrecisionContext, re: f64, im: f64) -> Self {
        Self::new(real(ctx, re), real(ctx, im))
    }

    pub fn from_real(re: Real) -> Self {
        let im = Float::new(re.prec());
        Self { re, im }
    }

    pub fn parse(ctx: PrecisionContext, re: &str, im: &str) -> Result<Self> {
        Ok(Self::new(parse_real(ctx, re)?, parse_real(ctx, im)?))
    }

    /// e^{iθ}.
    pub fn cis(theta: &Real) -> Self {
        let (s, c) = theta.clone().sin_cos(Float::new(theta.prec()));
        Self::new(c, s)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn ctx(&self) -> PrecisionContext {
        PrecisionContext::new(self.prec().max(PrecisionContext::MIN_BITS))
            .expect("precision above minimum")
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), Float::with_val(self.prec(), -&self.im))
    }

    pub fn norm_sqr(&self) -> Real {
        let mut out = Float::with_val(self.prec(), self.re.square_ref());
        out += Float::with_val(self.prec(), self.im.square_ref());
        out
    }

    pub fn abs(&self) -> Real {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Multiplies by a real factor.
    pub fn scale(&self, factor: &Real) -> Self {
        Self::new(
            Float::with_val(self.prec(), &self.re * factor),
            Float::with_val(self.prec(), &self.im * factor),
        )
    }

    /// `self += a * b` without temporaries (fused multiply-add on each part).
    pub fn mul_add_assign(&mut self, a: &Complex, b: &Complex) {
        self.re += &a.re * &b.re;
        self.re -= &a.im * &b.im;
        self.im += &a.re * &b.im;
        self.im += &a.im * &b.re;
    }

    /// `self -= a * b`.
    pub fn mul_sub_assign(&mut self, a: &Complex, b: &Complex) {
        self.re -= &a.re * &b.re;
        self.re += &a.im * &b.im;
        self.im -= &a.re * &b.im;
        self.im -= &a.im * &b.re;
    }

    /// `self += a * conj(b)`.
    pub fn mul_conj_add_assign(&mut self, a: &Complex, b: &Complex) {
        self.re += &a.re * &b.re;
        self.re += &a.im * &b.im;
        self.im += &a.im * &b.re;
        self.im -= &a.re * &b.im;
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        Self::new(
            Float::with_val(self.prec(), &self.re / &d),
            Float::with_val(self.prec(), -Float::with_val(self.prec(), &self.im / &d)),
        )
    }

    pub fn powu(&self, exp: u32) -> Self {
        let mut acc = Complex::one(self.ctx());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Principal square root (branch cut along the negative real axis).
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        let r = self.abs();
        let re = (Float::with_val(p, &r + &self.re) / 2u32).sqrt();
        let mut im = (Float::with_val(p, &r - &self.re) / 2u32).sqrt();
        if self.im.is_sign_negative() {
            im = -im;
        }
        Self::new(re, im)
    }

    /// `|re| + |im|`, a cheap norm for convergence tests.
    pub fn abs1(&self) -> Real {
        let mut out = Float::with_val(self.prec(), self.re.abs_ref());
        out += Float::with_val(self.prec(), self.im.abs_ref());
        out
    }

    pub fn with_prec(&self, ctx: PrecisionContext) -> Self {
        Self::new(
            Float::with_val(ctx.bits(), &self.re),
            Float::with_val(ctx.bits(), &self.im),
        )
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64();
        write!(f, "({re:e}{im:+e}i)")
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<'a> Add<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn add(self, rhs: &'a Complex) -> Complex {
        let p = self.prec();
        Complex::new(
            Float::with_val(p, &self.re + &rhs.re),
            Float::with_val(p, &self.im + &rhs.im),
        )
    }
}

impl<'a> Sub<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn sub(self, rhs: &'a Complex) -> Complex {
        let p = self.prec();
        Complex::new(
            Float::with_val(p, &self.re - &rhs.re),
            Float::with_val(p, &self.im - &rhs.im),
        )
    }
}

impl<'a> Mul<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn mul(self, rhs: &'a Complex) -> Complex {
        let mut out = Complex::zero(self.ctx());
        out.mul_add_assign(self, rhs);
        out
    }
}

impl<'a> Div<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn div(self, rhs: &'a Complex) -> Complex {
        let d = rhs.norm_sqr();
        let mut num = Complex::zero(self.ctx());
        num.mul_conj_add_assign(self, rhs);
        Complex::new(num.re / &d, num.im / &d)
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl AddAssign<&Complex> for Complex {
    fn add_assign(&mut self, rhs: &Complex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Complex> for Complex {
    fn sub_assign(&mut self, rhs: &Complex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Complex> for Complex {
    fn mul_assign(&mut self, rhs: &Complex) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(113).unwrap()
    }

    #[test]
    fn arithmetic_matches_f64() {
        let a = Complex::from_f64(ctx(), 1.5, -2.0);
        let b = Complex::from_f64(ctx(), 0.25, 3.0);
        let (re, im) = (&a * &b).to_f64();
        assert_eq!((re, im), (1.5 * 0.25 + 6.0, 4.5 - 0.5));
        let q = &(&a * &b) / &b;
        assert!((&q - &a).abs_f64() < 1e-30);
        let r = b.recip();
        assert!((&(&r * &b) - &Complex::one(ctx())).abs_f64() < 1e-30);
    }

    #[test]
    fn fused_updates() {
        let a = Complex::from_f64(ctx(), 2.0, 1.0);
        let b = Complex::from_f64(ctx(), -1.0, 4.0);
        let mut acc = Complex::zero(ctx());
        acc.mul_conj_add_assign(&a, &b);
        assert_eq!(acc, &a * &b.conj());
        acc.mul_sub_assign(&a, &b.conj());
        assert!(acc.is_zero());
    }

    #[test]
    fn powers_and_cis() {
        let w = Complex::cis(&(pi(ctx()) / 3u32));
        let w6 = w.powu(6);
        assert!((&w6 - &Complex::one(ctx())).abs_f64() < 1e-30);
        assert_eq!(Complex::from_f64(ctx(), 0.0, 1.0).powu(2).to_f64(), (-1.0, 0.0));
    }

    #[test]
    fn square_roots() {
        for (re, im) in [(4.0, 0.0), (-4.0, 0.0), (0.0, 2.0), (3.0, -4.0), (-1.0, -1e-3)] {
            let z = Complex::from_f64(ctx(), re, im);
            let r = z.sqrt();
            assert!((&(&r * &r) - &z).abs_f64() < 1e-30, "sqrt({re},{im})");
            assert!(r.re.to_f64() >= 0.0);
        }
    }

    #[test]
    fn parse_and_format_roundtrip() {
        let x = parse_real(ctx(), "0.730499243103159179079436558923").unwrap();
        let s = format_real(&x, 30);
        let y = parse_real(ctx(), &s).unwrap();
        let diff = Float::with_val(113, &x - &y).abs().to_f64();
        assert!(diff < 1e-29);
        assert!(parse_real(ctx(), "abc").is_err());
    }
}
