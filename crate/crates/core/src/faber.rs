//! Exterior Laurent maps `Ψ(w) = b·w + b_0 + b_1/w + … + b_m/w^m`, second-kind
//! Faber polynomials and the Toeplitz matrix with symbol `Ψ`.

use rug::ops::Pow;
use rug::Float;

use crate::arnoldi::HessenbergMatrix;
use crate::error::{Error, Result};
use crate::poly::ComplexPolynomial;
use crate::precision::PrecisionContext;
use crate::scalar::{parse_real, pi, Complex, Real};

/// Γ(1/3) to 70 significant digits.
const GAMMA_ONE_THIRD: &str =
    "2.678938534707747633655692940974677644128689377957301100950428327590418";

/// A truncated exterior conformal map.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentMap {
    b: Real,
    coeffs: Vec<Complex>,
    b_imag_residue: f64,
}

impl LaurentMap {
    /// `b` must be positive; `coeffs` are `b_0, …, b_m`.
    pub fn new(b: Real, coeffs: Vec<Complex>) -> Result<Self> {
        if !(b.is_finite() && b.is_sign_positive() && !b.is_zero()) {
            return Err(Error::InvalidDomain(format!("capacity b must be positive, got {}", b.to_f64())));
        }
        let prec = b.prec();
        let coeffs = coeffs
            .into_iter()
            .map(|c| Complex::new(Float::with_val(prec, c.re), Float::with_val(prec, c.im)))
            .collect();
        Ok(Self { b, coeffs, b_imag_residue: 0.0 })
    }

    /// Builds a map from a complex estimate of `b`, keeping its real part and
    /// recording the discarded imaginary part.
    pub fn from_complex_capacity(b: &Complex, coeffs: Vec<Complex>) -> Result<Self> {
        let mut map = Self::new(b.re.clone(), coeffs)?;
        map.b_imag_residue = b.im.to_f64().abs();
        Ok(map)
    }

    pub fn identity(ctx: PrecisionContext) -> Self {
        Self::new(Float::with_val(ctx.bits(), 1), Vec::new()).expect("b = 1")
    }

    /// Ellipse with semiaxes `a` (real) and `b̂` (imaginary):
    /// `Ψ(w) = ((a+b̂)/2)·w + ((a−b̂)/2)/w`.
    pub fn ellipse(a: Real, b_hat: Real) -> Self {
        let prec = a.prec();
        let cap = Float::with_val(prec, &a + &b_hat) / 2u32;
        let b1 = Float::with_val(prec, &a - &b_hat) / 2u32;
        let zero = Complex::from_real(Float::new(prec));
        Self::new(cap, vec![zero, Complex::from_real(b1)]).expect("positive semiaxes")
    }

    /// `Ψ(w) = w + 1/(2w²)`.
    pub fn hypocycloid3(ctx: PrecisionContext) -> Self {
        let zero = Complex::zero(ctx);
        let half = Complex::from_f64(ctx, 0.5, 0.0);
        Self::new(Float::with_val(ctx.bits(), 1), vec![zero.clone(), zero, half]).expect("b = 1")
    }

    pub fn b(&self) -> &Real {
        &self.b
    }

    /// `γ = 1/b`.
    pub fn gamma(&self) -> Real {
        Float::with_val(self.b.prec(), self.b.recip_ref())
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    /// Truncation order `m` (0 when no coefficients are stored).
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn ctx(&self) -> PrecisionContext {
        PrecisionContext::new(self.b.prec()).expect("precision ≥ 53")
    }

    /// Imaginary part discarded from a complex capacity estimate.
    pub fn b_imag_residue(&self) -> f64 {
        self.b_imag_residue
    }

    /// `b_k`, or zero beyond the truncation order.
    pub fn coefficient(&self, k: usize) -> Complex {
        self.coeffs.get(k).cloned().unwrap_or_else(|| Complex::zero(self.ctx()))
    }

    pub fn with_prec(&self, ctx: PrecisionContext) -> Self {
        Self {
            b: Float::with_val(ctx.bits(), &self.b),
            coeffs: self.coeffs.iter().map(|c| c.with_prec(ctx)).collect(),
            b_imag_residue: self.b_imag_residue,
        }
    }

    /// Keeps `b_0..b_m`.
    pub fn truncated(&self, m: usize) -> Self {
        let mut out = self.clone();
        out.coeffs.truncate(m + 1);
        out
    }

    pub(crate) fn eval_unchecked(&self, w: &Complex) -> Complex {
        let u = w.recip();
        let mut tail = Complex::zero(w.ctx());
        for c in self.coeffs.iter().skip(1).rev() {
            tail += c;
            tail = &tail * &u;
        }
        let mut out = w.scale(&self.b);
        if let Some(b0) = self.coeffs.first() {
            out += b0;
        }
        out += &tail;
        out
    }

    /// `Ψ'(w) = b − Σ k·b_k·w^{−k−1}`.
    pub(crate) fn derivative_unchecked(&self, w: &Complex) -> Complex {
        let u = w.recip();
        let mut acc = Complex::zero(w.ctx());
        for (k, c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc += &c.scale(&Float::with_val(w.prec(), k as u32));
            acc = &acc * &u;
        }
        let acc = &acc * &u;
        &Complex::from_real(Float::with_val(w.prec(), &self.b)) - &acc
    }
}

/// `Ψ(w) = b·w + b_0 + Σ_{k=1}^m b_k w^{−k}`.
pub fn laurent_eval(map: &LaurentMap, w: &Complex) -> Result<Complex> {
    if w.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let out = map.eval_unchecked(w);
    if out.is_finite() {
        Ok(out)
    } else {
        Err(Error::EvaluationOverflow)
    }
}

/// `G_0, …, G_n`.
#[derive(Clone, Debug)]
pub struct FaberSequence {
    pub polys: Vec<ComplexPolynomial>,
    /// Set when the recurrence needed `b_j` beyond the map's truncation order
    /// (those were taken as zero).
    pub truncated: bool,
}

/// Second-kind Faber polynomials from
/// `z·G_k = b·G_{k+1} + Σ_{j=0}^{k} b_j·G_{k−j}`, started from `G_0 ≡ γ` so
/// that `G_k = γ^{k+1} z^k + ⋯`.
pub fn faber_second_kind(map: &LaurentMap, n: usize) -> FaberSequence {
    let b_inv = map.gamma();
    let mut polys = vec![ComplexPolynomial::constant(Complex::from_real(b_inv.clone()))];
    for k in 0..n {
        let mut next = polys[k].multiply_by_z();
        for j in 0..=k {
            if let Some(bj) = map.coeffs.get(j) {
                next.sub_scaled(&polys[k - j], bj);
            }
        }
        polys.push(next.scale_real(&b_inv));
    }
    FaberSequence { polys, truncated: n > map.coeffs.len() }
}

/// Leading `n` columns of `T_Ψ` (rows `0..=n`): entry `(k,j)` is `b_{j−k}`
/// for `j ≥ k`, `b` on the subdiagonal. Missing coefficients are zero.
pub fn toeplitz_matrix(map: &LaurentMap, n: usize) -> HessenbergMatrix {
    let ctx = map.ctx();
    let b = Complex::from_real(map.b.clone());
    let columns = (0..n)
        .map(|j| {
            let mut col: Vec<Complex> = (0..=j).map(|k| map.coefficient(j - k)).collect();
            col.push(b.clone());
            col
        })
        .collect();
    HessenbergMatrix::from_columns(columns, ctx)
}

/// `cap(Π_3) = (3/2)·Γ(1/3)³ / (4π²)` for the equilateral triangle with
/// vertices `1, e^{2πi/3}, e^{4πi/3}`.
pub fn triangle_capacity(ctx: PrecisionContext) -> Real {
    let g = parse_real(ctx, GAMMA_ONE_THIRD).expect("constant parses");
    let g3 = Float::with_val(ctx.bits(), (&g).pow(3u32));
    let pi2 = Float::with_val(ctx.bits(), pi(ctx).square_ref());
    Float::with_val(ctx.bits(), g3 * 3u32) / (pi2 * 8u32)
}

/// Exact exterior map of the equilateral triangle to order `m_max`:
/// `b_0 = 0`, and for `n = 3m − 1`, `b_n = cap·(−1)^{m+1}·C(2/3, m)/n`; all
/// other coefficients vanish.
pub fn triangle_coefficients(m_max: usize, ctx: PrecisionContext) -> LaurentMap {
    let cap = triangle_capacity(ctx);
    let two_thirds = Float::with_val(ctx.bits(), 2) / 3u32;
    let mut coeffs = vec![Complex::zero(ctx); m_max + 1];
    // generalized binomial C(2/3, m) by the falling factorial
    let mut binom = Float::with_val(ctx.bits(), 1);
    let mut m = 0usize;
    loop {
        m += 1;
        let n = 3 * m - 1;
        if n > m_max {
            break;
        }
        let factor = Float::with_val(ctx.bits(), &two_thirds - (m - 1) as u32) / m as u32;
        binom *= factor;
        let mut value = Float::with_val(ctx.bits(), &cap * &binom) / n as u32;
        if m.is_multiple_of(2) {
            value = -value;
        }
        coeffs[n] = Complex::from_real(value);
    }
    LaurentMap::new(cap, coeffs).expect("positive capacity")
}
