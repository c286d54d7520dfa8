//! Bergman polynomials by Arnoldi Gram–Schmidt and the Hessenberg matrix of
//! the Bergman shift.
//!
//! Step `k` orthonormalizes `z·p_{k−1}` against `p_0, …, p_{k−1}` under the
//! moment inner product. The projection coefficients are exactly the column
//! `b_{·,k−1} = ⟨z p_{k−1}, p_·⟩` of `M`, and the residual norm is the
//! subdiagonal `b_{k,k−1} = λ_{k−1}/λ_k`.

use rayon::prelude::*;
use rug::Float;

use crate::error::{Error, Result};
use crate::moments::MomentMatrix;
use crate::poly::{pair, ComplexPolynomial};
use crate::precision::PrecisionContext;
use crate::scalar::{Complex, Real};

/// Upper Hessenberg matrix stored by columns; column `j` holds rows `0..=j+1`.
#[derive(Clone, Debug, PartialEq)]
pub struct HessenbergMatrix {
    columns: Vec<Vec<Complex>>,
    ctx: PrecisionContext,
}

impl HessenbergMatrix {
    /// `columns[j]` must have length `j + 2`.
    pub fn from_columns(columns: Vec<Vec<Complex>>, ctx: PrecisionContext) -> Self {
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), j + 2, "column {j} of a Hessenberg matrix holds rows 0..={}", j + 1);
        }
        Self { columns, ctx }
    }

    /// Dense principal `n×n` block of an upper Hessenberg matrix; entries
    /// below the subdiagonal are ignored. The subdiagonal entry of the last
    /// column is set to zero.
    pub fn from_dense(rows: &[Vec<Complex>], ctx: PrecisionContext) -> Self {
        let n = rows.len();
        let columns = (0..n)
            .map(|j| {
                (0..=j + 1)
                    .map(|k| if k < n { rows[k][j].clone() } else { Complex::zero(ctx) })
                    .collect()
            })
            .collect();
        Self { columns, ctx }
    }

    /// Number of stored columns.
    pub fn order(&self) -> usize {
        self.columns.len()
    }

    pub fn ctx(&self) -> PrecisionContext {
        self.ctx
    }

    /// Stored entry; `None` below the subdiagonal or outside the columns.
    pub fn entry(&self, k: usize, j: usize) -> Option<&Complex> {
        self.columns.get(j).and_then(|c| c.get(k))
    }

    /// Entry `(k, j)` with structural zeros filled in.
    ///
    /// Panics if `j` is not a stored column.
    pub fn get(&self, k: usize, j: usize) -> Complex {
        assert!(j < self.columns.len(), "column {j} out of range");
        self.entry(k, j).cloned().unwrap_or_else(|| Complex::zero(self.ctx))
    }

    pub fn column(&self, j: usize) -> &[Complex] {
        &self.columns[j]
    }

    /// Row-major principal `n×n` submatrix.
    pub fn principal(&self, n: usize) -> Result<Vec<Vec<Complex>>> {
        if n == 0 || n > self.order() {
            return Err(Error::IndexOutOfRange(format!(
                "principal submatrix of order {n} requested from {} columns",
                self.order()
            )));
        }
        Ok((0..n).map(|k| (0..n).map(|j| self.get(k, j)).collect()).collect())
    }

    /// `(k, j, value)` for every stored entry, column by column.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Complex)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().enumerate().map(move |(k, v)| (k, j, v)))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().map(|(_, _, v)| v.abs_f64()).fold(0.0, f64::max)
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            columns: self.columns.iter().map(|c| c.iter().map(Complex::conj).collect()).collect(),
            ctx: self.ctx,
        }
    }
}

/// Bergman polynomials `p_0, …, p_n` with their leading coefficients.
#[derive(Clone, Debug)]
pub struct OrthonormalBasis {
    polys: Vec<ComplexPolynomial>,
    lambdas: Vec<Real>,
}

impl OrthonormalBasis {
    pub fn polys(&self) -> &[ComplexPolynomial] {
        &self.polys
    }

    pub fn poly(&self, k: usize) -> &ComplexPolynomial {
        &self.polys[k]
    }

    pub fn lambdas(&self) -> &[Real] {
        &self.lambdas
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// `max_{j,k} |⟨p_j, p_k⟩ − δ_{jk}|`.
    pub fn orthonormality_residual(&self, moments: &MomentMatrix) -> Result<f64> {
        let ctx = moments.ctx();
        let top = self.polys.len().saturating_sub(1);
        let duals = self
            .polys
            .par_iter()
            .map(|p| moments.dual(p, top))
            .collect::<Result<Vec<_>>>()?;
        let one = Complex::one(ctx);
        Ok((0..self.polys.len())
            .into_par_iter()
            .map(|j| {
                (0..self.polys.len())
                    .map(|k| {
                        let g = pair(&self.polys[j], &duals[k], ctx);
                        if j == k { (&g - &one).abs_f64() } else { g.abs_f64() }
                    })
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max))
    }

    /// `⟨z·p_j, p_k⟩` evaluated directly from the moments.
    pub fn shift_entry(&self, moments: &MomentMatrix, k: usize, j: usize) -> Result<Complex> {
        crate::poly::weighted_inner_product(&self.polys[j].multiply_by_z(), &self.polys[k], moments)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ArnoldiOptions {
    /// Refuse to run when the precision is below [`required_precision`].
    pub strict_precision: bool,
}

/// Rough diameter of the domain from the moments: for a disk of radius `R`,
/// `(N+1)·μ_{NN}/μ_{00} = R^{2N}`.
pub fn estimated_diameter(moments: &MomentMatrix) -> f64 {
    let n = moments.degree();
    let mu00 = moments.area();
    if n == 0 {
        return 2.0 * (mu00 / std::f64::consts::PI).sqrt();
    }
    let mu_nn = moments.get(n, n).map_or(0.0, |m| m.re.to_f64());
    2.0 * ((n as f64 + 1.0) * mu_nn / mu00).powf(1.0 / (2.0 * n as f64))
}

/// `53 + 2n·log2(diam + 2)` mantissa bits.
pub fn required_precision(moments: &MomentMatrix, n: usize) -> u32 {
    let diam = estimated_diameter(moments);
    (53.0 + 2.0 * n as f64 * (diam + 2.0).log2()).ceil() as u32
}

/// Runs Arnoldi Gram–Schmidt to produce `p_0..p_n` and Hessenberg columns
/// `0..=n` (rows `0..=n+1`). Needs moments to degree `n+1`.
pub fn arnoldi_orthonormalize(moments: &MomentMatrix, n: usize) -> Result<(OrthonormalBasis, HessenbergMatrix)> {
    arnoldi_orthonormalize_with(moments, n, ArnoldiOptions::default())
}

pub fn arnoldi_orthonormalize_with(
    moments: &MomentMatrix,
    n: usize,
    options: ArnoldiOptions,
) -> Result<(OrthonormalBasis, HessenbergMatrix)> {
    let ctx = moments.ctx();
    if n + 1 > moments.degree() {
        return Err(Error::DegreeExceedsMoments { needed: n + 1, available: moments.degree() });
    }
    let required = required_precision(moments, n);
    if ctx.bits() < required {
        if options.strict_precision {
            return Err(Error::PrecisionTooLow { required, actual: ctx.bits() });
        }
        log::warn!("precision {} bits is below the {required} bits suggested for n = {n}", ctx.bits());
    }

    let mu00 = moments.entry(0, 0)?.re.clone();
    if !(mu00.is_sign_positive() && !mu00.is_zero()) {
        return Err(Error::MomentsNotPositiveDefinite { step: 0, norm2: mu00.to_f64() });
    }
    let top = n + 1;
    let p0 = Float::with_val(ctx.bits(), mu00.sqrt_ref()).recip();
    let mut polys = vec![ComplexPolynomial::constant(Complex::from_real(p0.clone()))];
    let mut lambdas = vec![p0];
    let mut duals = vec![moments.dual(&polys[0], top)?];
    let mut columns: Vec<Vec<Complex>> = Vec::with_capacity(n + 1);
    let degeneracy = Float::with_val(ctx.bits(), 1) >> (ctx.bits() / 2);

    for k in 1..=n + 1 {
        let v = polys[k - 1].multiply_by_z();
        let vv = pair(&v, &moments.dual(&v, k)?, ctx).re;

        // classical Gram–Schmidt, then one correction pass
        let mut col = project(&v, &duals, ctx);
        let mut r = v;
        for (pj, h) in polys.iter().zip(&col) {
            r.sub_scaled(pj, h);
        }
        let correction = project(&r, &duals, ctx);
        for ((pj, c), h) in polys.iter().zip(&correction).zip(col.iter_mut()) {
            r.sub_scaled(pj, c);
            *h += c;
        }

        let rr = pair(&r, &moments.dual(&r, k)?, ctx).re;
        let threshold = Float::with_val(ctx.bits(), &vv * &degeneracy);
        if !rr.is_finite() || rr <= threshold {
            return Err(Error::MomentsNotPositiveDefinite { step: k, norm2: rr.to_f64() });
        }
        let sub = rr.sqrt();
        col.push(Complex::from_real(sub.clone()));
        columns.push(col);

        if k <= n {
            let inv = Float::with_val(ctx.bits(), sub.recip_ref());
            let pk = r.scale_real(&inv);
            let lambda = pk.leading().map(|c| c.re.clone()).unwrap_or_else(|| Float::new(ctx.bits()));
            duals.push(moments.dual(&pk, top)?);
            lambdas.push(lambda);
            polys.push(pk);
        }
    }
    Ok((OrthonormalBasis { polys, lambdas }, HessenbergMatrix::from_columns(columns, ctx)))
}

/// `⟨v, p_j⟩` for every basis polynomial, independently per `j`.
fn project(v: &ComplexPolynomial, duals: &[Vec<Complex>], ctx: PrecisionContext) -> Vec<Complex> {
    duals.par_iter().map(|d| pair(v, d, ctx)).collect()
}

/// `λ_0, …, λ_n`.
pub fn leading_coefficients(basis: &OrthonormalBasis) -> Vec<Real> {
    basis.lambdas.clone()
}

/// Scaled Hessenberg diagonals: estimates of the capacity and of `b_0..b_m`.
#[derive(Clone, Debug)]
pub struct ScaledDiagonals {
    /// `b^{(n)} = √((n+2)/(n+1))·Re b_{n+1,n}`.
    pub capacity: Real,
    /// `|Im b_{n+1,n}|`, zero for matrices produced by Arnoldi.
    pub capacity_imag_residue: f64,
    /// `b_k^{(n)} = √((n−k+1)/(n+1))·b_{n−k,n}`, `k = 0..=m`.
    pub coeffs: Vec<Complex>,
}

fn sqrt_ratio(num: usize, den: usize, ctx: PrecisionContext) -> Real {
    (Float::with_val(ctx.bits(), num as u32) / den as u32).sqrt()
}

/// Which Hessenberg column the estimate for `n` reads.
///
/// With `ZeroBased`, rows and columns are labelled from 0 as in
/// `b_{k,j} = ⟨z p_j, p_k⟩`, so `b^{(n)}` uses `b_{n+1,n}`. With `OneBased`,
/// the same subscripts count from 1, so `b^{(n)}` uses the 0-based entry
/// `b_{n,n−1}` while keeping the scale factors of `n`. Both converge to the
/// same limits; they differ at `O(1/n²)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DiagonalIndexing {
    #[default]
    ZeroBased,
    OneBased,
}

impl DiagonalIndexing {
    /// 0-based column index for the estimate at `n`.
    pub fn column(self, n: usize) -> Result<usize> {
        match self {
            Self::ZeroBased => Ok(n),
            Self::OneBased => n
                .checked_sub(1)
                .ok_or_else(|| Error::IndexOutOfRange("one-based indexing needs n ≥ 1".into())),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "zero-based" | "zero" | "0" => Ok(Self::ZeroBased),
            "one-based" | "one" | "1" => Ok(Self::OneBased),
            other => Err(Error::InvalidParameter(format!("unknown indexing {other:?}"))),
        }
    }
}

/// `b^{(n)}` and `b_0^{(n)}..b_m^{(n)}` from column `n` of `H`; `1 < m < n`.
pub fn scaled_diagonals(h: &HessenbergMatrix, n: usize, m: usize) -> Result<ScaledDiagonals> {
    scaled_diagonals_indexed(h, n, m, DiagonalIndexing::ZeroBased)
}

pub fn scaled_diagonals_indexed(
    h: &HessenbergMatrix,
    n: usize,
    m: usize,
    indexing: DiagonalIndexing,
) -> Result<ScaledDiagonals> {
    if !(1 < m && m < n) {
        return Err(Error::InvalidParameter("m must satisfy 1 < m < n".into()));
    }
    let capacity = scaled_capacity_indexed(h, n, indexing)?;
    let coeffs = (0..=m).map(|k| scaled_coefficient_indexed(h, n, k, indexing)).collect::<Result<Vec<_>>>()?;
    Ok(ScaledDiagonals {
        capacity: capacity.re.clone(),
        capacity_imag_residue: capacity.im.to_f64().abs(),
        coeffs,
    })
}

/// `√((n+2)/(n+1))·b_{n+1,n}`.
pub fn scaled_capacity(h: &HessenbergMatrix, n: usize) -> Result<Complex> {
    scaled_capacity_indexed(h, n, DiagonalIndexing::ZeroBased)
}

/// `√((n−k+1)/(n+1))·b_{n−k,n}`.
pub fn scaled_coefficient(h: &HessenbergMatrix, n: usize, k: usize) -> Result<Complex> {
    scaled_coefficient_indexed(h, n, k, DiagonalIndexing::ZeroBased)
}

pub fn scaled_capacity_indexed(h: &HessenbergMatrix, n: usize, indexing: DiagonalIndexing) -> Result<Complex> {
    let col = indexing.column(n)?;
    let sub = h.entry(col + 1, col).ok_or_else(|| {
        Error::IndexOutOfRange(format!("b_{{{},{col}}} needs {} columns, matrix has {}", col + 1, col + 1, h.order()))
    })?;
    Ok(sub.scale(&sqrt_ratio(n + 2, n + 1, h.ctx())))
}

pub fn scaled_coefficient_indexed(
    h: &HessenbergMatrix,
    n: usize,
    k: usize,
    indexing: DiagonalIndexing,
) -> Result<Complex> {
    let col = indexing.column(n)?;
    if k > col {
        return Err(Error::IndexOutOfRange(format!("diagonal offset {k} exceeds column {col}")));
    }
    let entry = h.entry(col - k, col).ok_or_else(|| {
        Error::IndexOutOfRange(format!("column {col} requested, matrix has {} columns", h.order()))
    })?;
    Ok(entry.scale(&sqrt_ratio(n - k + 1, n + 1, h.ctx())))
}
