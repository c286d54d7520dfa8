//! Complex area moments `μ_{kj} = ∫_G z^k conj(z)^j dA` and their sources.

mod contour;
mod convert;
mod polygon;

pub use contour::{
    contour_moments, default_nodes, parametric_moments, BoundaryCurve, GradedPolygon,
};
pub use convert::{complex_to_real, real_to_complex, real_to_complex_degree, RealLayout, RealMomentArray};
pub use polygon::{polygon_moments, validate_polygon};

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::poly::ComplexPolynomial;
use crate::precision::PrecisionContext;
use crate::scalar::{Complex, Real};

/// Hermitian table `μ_{kj}`, `0 ≤ k, j ≤ N`.
#[derive(Clone, Debug)]
pub struct MomentMatrix {
    degree: usize,
    ctx: PrecisionContext,
    entries: Vec<Complex>,
    symmetrization_defect: f64,
}

impl MomentMatrix {
    /// Builds a table from a full row-major array of `(N+1)²` entries and
    /// averages `μ_{kj}` with `conj(μ_{jk})`.
    pub fn from_entries(degree: usize, ctx: PrecisionContext, entries: Vec<Complex>) -> Result<Self> {
        let n1 = degree + 1;
        if entries.len() != n1 * n1 {
            return Err(Error::InvalidParameter(format!(
                "moment table of degree {degree} needs {} entries, got {}",
                n1 * n1,
                entries.len()
            )));
        }
        let mut m = Self { degree, ctx, entries, symmetrization_defect: 0.0 };
        m.enforce_hermitian();
        if !m.area().is_finite() || m.area() <= 0.0 {
            return Err(Error::MomentsNotPositiveDefinite { step: 0, norm2: m.area() });
        }
        Ok(m)
    }

    /// Like [`from_entries`](Self::from_entries) but keeps the entries as
    /// given, so a non-Hermitian table can be inspected.
    pub fn from_entries_unchecked(degree: usize, ctx: PrecisionContext, entries: Vec<Complex>) -> Self {
        assert_eq!(entries.len(), (degree + 1) * (degree + 1));
        Self { degree, ctx, entries, symmetrization_defect: 0.0 }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ctx(&self) -> PrecisionContext {
        self.ctx
    }

    pub fn get(&self, k: usize, j: usize) -> Option<&Complex> {
        if k > self.degree || j > self.degree {
            return None;
        }
        self.entries.get(k * (self.degree + 1) + j)
    }

    pub fn entry(&self, k: usize, j: usize) -> Result<&Complex> {
        self.get(k, j).ok_or(Error::DegreeExceedsMoments {
            needed: k.max(j),
            available: self.degree,
        })
    }

    /// `μ_{00}`, the area of the domain.
    pub fn area(&self) -> f64 {
        self.entries[0].re.to_f64()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(Complex::abs_f64).fold(0.0, f64::max)
    }

    /// Largest `|μ_{kj} - conj(μ_{jk})|` removed when the table was symmetrized,
    /// relative to `max |μ|`.
    pub fn symmetrization_defect(&self) -> f64 {
        self.symmetrization_defect
    }

    /// Current `max |μ_{kj} - conj(μ_{jk})| / max |μ|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let mut worst = 0.0f64;
        for k in 0..=self.degree {
            for j in k..=self.degree {
                let d = (&self.entries[self.idx(k, j)] - &self.entries[self.idx(j, k)].conj()).abs_f64();
                worst = worst.max(d);
            }
        }
        worst / scale
    }

    fn idx(&self, k: usize, j: usize) -> usize {
        k * (self.degree + 1) + j
    }

    fn enforce_hermitian(&mut self) {
        let defect = self.hermitian_deviation();
        let half = Float::with_val(self.ctx.bits(), 0.5);
        for k in 0..=self.degree {
            let d = self.idx(k, k);
            self.entries[d].im = Float::new(self.ctx.bits());
            for j in (k + 1)..=self.degree {
                let (a, b) = (self.idx(k, j), self.idx(j, k));
                let avg = (&self.entries[a] + &self.entries[b].conj()).scale(&half);
                self.entries[b] = avg.conj();
                self.entries[a] = avg;
            }
        }
        self.symmetrization_defect = defect;
    }

    /// Leading `(d+1)×(d+1)` block.
    pub fn truncate(&self, degree: usize) -> Result<Self> {
        if degree > self.degree {
            return Err(Error::DegreeExceedsMoments { needed: degree, available: self.degree });
        }
        let mut entries = Vec::with_capacity((degree + 1) * (degree + 1));
        for k in 0..=degree {
            for j in 0..=degree {
                entries.push(self.entries[self.idx(k, j)].clone());
            }
        }
        Ok(Self { degree, ctx: self.ctx, entries, symmetrization_defect: self.symmetrization_defect })
    }

    /// Moments of the domain scaled by `ρ > 0`: `μ_{kj} ↦ ρ^{k+j+2} μ_{kj}`.
    pub fn scaled(&self, rho: &Real) -> Self {
        let mut out = self.clone();
        for k in 0..=self.degree {
            for j in 0..=self.degree {
                let f = Float::with_val(self.ctx.bits(), rho.pow((k + j + 2) as u32));
                let i = self.idx(k, j);
                out.entries[i] = self.entries[i].scale(&f);
            }
        }
        out
    }

    /// Moments of the domain rotated by `e^{iφ}`: `μ_{kj} ↦ e^{i(k-j)φ} μ_{kj}`.
    pub fn rotated(&self, phi: &Real) -> Self {
        let mut out = self.clone();
        for k in 0..=self.degree {
            for j in 0..=self.degree {
                let angle = Float::with_val(self.ctx.bits(), phi * (k as i64 - j as i64));
                let i = self.idx(k, j);
                out.entries[i] = &self.entries[i] * &Complex::cis(&angle);
            }
        }
        out
    }

    /// `dual[a] = Σ_b μ_{a,b} · conj(q_b)` for `a = 0..=max_a`, so that
    /// `⟨p, q⟩ = Σ_a p_a · dual[a]`.
    pub fn dual(&self, q: &ComplexPolynomial, max_a: usize) -> Result<Vec<Complex>> {
        let dq = q.degree().unwrap_or(0);
        let needed = dq.max(max_a);
        if needed > self.degree {
            return Err(Error::DegreeExceedsMoments { needed, available: self.degree });
        }
        Ok((0..=max_a)
            .map(|a| {
                let mut acc = Complex::zero(self.ctx);
                for (b, qb) in q.coeffs().iter().enumerate() {
                    acc.mul_conj_add_assign(&self.entries[self.idx(a, b)], qb);
                }
                acc
            })
            .collect())
    }

    /// Pivots of the `LDL*` factorization of the Gram matrix `[μ_{a,b}]`,
    /// relative to `μ_{00}`. All positive for the moments of a domain with
    /// interior.
    pub fn gram_pivots(&self) -> Vec<f64> {
        let n = self.degree + 1;
        let mut a: Vec<Complex> = self.entries.clone();
        let mut pivots = Vec::with_capacity(n);
        let mu00 = self.entries[0].re.clone();
        for k in 0..n {
            let d = a[k * n + k].re.clone();
            pivots.push(Float::with_val(self.ctx.bits(), &d / &mu00).to_f64());
            if d.is_zero() {
                continue;
            }
            for i in (k + 1)..n {
                let l = Complex::new(
                    Float::with_val(self.ctx.bits(), &a[i * n + k].re / &d),
                    Float::with_val(self.ctx.bits(), &a[i * n + k].im / &d),
                );
                for j in (k + 1)..n {
                    let akj = a[k * n + j].clone();
                    a[i * n + j].mul_sub_assign(&l, &akj);
                }
            }
        }
        pivots
    }

    /// `true` when every Gram pivot exceeds `-tol`.
    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        self.gram_pivots().iter().all(|&p| p > -tol)
    }
}
