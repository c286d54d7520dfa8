//! Dense polynomials in the monomial basis and the moment inner product.

use crate::error::{Error, Result};
use crate::moments::MomentMatrix;
use crate::precision::PrecisionContext;
use crate::scalar::{Complex, Real};

/// Polynomial with coefficients stored by ascending degree.
///
/// The leading stored coefficient is nonzero; the zero polynomial has no
/// coefficients at all.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex>,
}

impl ComplexPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c·z^k`.
    pub fn monomial(c: Complex, k: usize) -> Self {
        let ctx = c.ctx();
        let mut coeffs = vec![Complex::zero(ctx); k];
        coeffs.push(c);
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Complex>) -> Self {
        while coeffs.last().is_some_and(Complex::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Complex> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> Option<&Complex> {
        self.coeffs.get(k)
    }

    /// `z·p(z)`: every coefficient moves up one degree.
    pub fn multiply_by_z(&self) -> Self {
        match self.coeffs.first() {
            None => Self::zero(),
            Some(c0) => {
                let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
                coeffs.push(Complex::zero(c0.ctx()));
                coeffs.extend(self.coeffs.iter().cloned());
                Self { coeffs }
            }
        }
    }

    /// Horner evaluation at the precision of `z`.
    pub fn evaluate(&self, z: &Complex) -> Result<Complex> {
        let mut acc = Complex::zero(z.ctx());
        for c in self.coeffs.iter().rev() {
            acc = &acc * z;
            acc += c;
        }
        if acc.is_finite() {
            Ok(acc)
        } else {
            Err(Error::EvaluationOverflow)
        }
    }

    pub fn scale(&self, factor: &Complex) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn scale_real(&self, factor: &Real) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.scale(factor)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, None);
        out
    }

    /// `self += factor·other` (`factor = None` means 1).
    pub fn add_scaled(&mut self, other: &Self, factor: Option<&Complex>) {
        if other.coeffs.len() > self.coeffs.len() {
            let ctx = other.coeffs[0].ctx();
            self.coeffs.resize(other.coeffs.len(), Complex::zero(ctx));
        }
        for (dst, src) in self.coeffs.iter_mut().zip(&other.coeffs) {
            match factor {
                Some(f) => dst.mul_add_assign(src, f),
                None => *dst += src,
            }
        }
        self.trim();
    }

    /// `self -= factor·other`.
    pub fn sub_scaled(&mut self, other: &Self, factor: &Complex) {
        if other.coeffs.len() > self.coeffs.len() {
            let ctx = other.coeffs[0].ctx();
            self.coeffs.resize(other.coeffs.len(), Complex::zero(ctx));
        }
        for (dst, src) in self.coeffs.iter_mut().zip(&other.coeffs) {
            dst.mul_sub_assign(src, factor);
        }
        self.trim();
    }

    /// Re-rounds every coefficient to `ctx`.
    pub fn with_prec(&self, ctx: PrecisionContext) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.with_prec(ctx)).collect())
    }

    /// Largest coefficient modulus (0 for the zero polynomial).
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(Complex::abs_f64).fold(0.0, f64::max)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Complex::is_zero) {
            self.coeffs.pop();
        }
    }
}

/// `⟨p, q⟩ = Σ_a Σ_b p_a · conj(q_b) · μ_{a,b}`.
///
/// The inner sum over `b` is formed first (see [`MomentMatrix::dual`]), then
/// contracted with the coefficients of `p`; both loops run in ascending index
/// order so the result is reproducible bit for bit.
pub fn weighted_inner_product(
    p: &ComplexPolynomial,
    q: &ComplexPolynomial,
    moments: &MomentMatrix,
) -> Result<Complex> {
    let ctx = moments.ctx();
    let (Some(dp), Some(_)) = (p.degree(), q.degree()) else {
        return Ok(Complex::zero(ctx));
    };
    let dual = moments.dual(q, dp)?;
    Ok(pair(p, &dual, ctx))
}

/// `Σ_a p_a · dual[a]`, where `dual` comes from [`MomentMatrix::dual`].
pub(crate) fn pair(p: &ComplexPolynomial, dual: &[Complex], ctx: PrecisionContext) -> Complex {
    let mut acc = Complex::zero(ctx);
    for (pa, da) in p.coeffs().iter().zip(dual) {
        acc.mul_add_assign(pa, da);
    }
    acc
}
