//! Moments from a parametrized boundary via the trapezoid rule.
//!
//! `μ_{kj} = 1/(2i(j+1)) ∫₀^{2π} z^k z̄^{j+1} z'(θ) dθ` is sampled on equispaced
//! `θ`. For analytic periodic integrands the rule converges geometrically;
//! for Laurent polynomial boundaries it is exact once the node count exceeds
//! the trigonometric degree of the integrand.

use rayon::prelude::*;
use rug::Float;

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::faber::LaurentMap;
use crate::moments::polygon::{closed_polyline_self_intersects, validate_polygon};
use crate::moments::MomentMatrix;
use crate::precision::PrecisionContext;
use crate::scalar::{pi, Complex, Real};

/// A closed counterclockwise curve `θ ↦ z(θ)`, `θ ∈ [0, 2π)`.
pub trait BoundaryCurve: Sync {
    /// `(z(θ), z'(θ))`.
    fn point_and_derivative(&self, theta: &Real) -> (Complex, Complex);

    fn point(&self, theta: &Real) -> Complex {
        self.point_and_derivative(theta).0
    }
}

impl BoundaryCurve for LaurentMap {
    fn point_and_derivative(&self, theta: &Real) -> (Complex, Complex) {
        let w = Complex::cis(theta);
        let z = self.eval_unchecked(&w);
        // dz/dθ = i·w·Ψ'(w)
        let dz = &(&Complex::i(w.ctx()) * &w) * &self.derivative_unchecked(&w);
        (z, dz)
    }
}

/// A polygon traversed edge by edge, each edge taking an equal share of `θ`
/// and graded by `t(s) = ∫₀ˢ (16/5) sin⁶(πσ) dσ` so that the speed vanishes to
/// sixth order at the vertices. The periodic trapezoid rule then stays
/// high-order despite the corners.
#[derive(Clone, Debug)]
pub struct GradedPolygon {
    vertices: Vec<Complex>,
}

impl GradedPolygon {
    pub fn new(vertices: Vec<Complex>) -> Result<Self> {
        validate_polygon(&vertices)?;
        Ok(Self { vertices })
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len()
    }
}

impl BoundaryCurve for GradedPolygon {
    fn point_and_derivative(&self, theta: &Real) -> (Complex, Complex) {
        let bits = theta.prec();
        let edges = self.vertices.len();
        let two_pi = Float::with_val(bits, pi_bits(bits) * 2u32);
        let u = Float::with_val(bits, theta * edges as u32) / &two_pi;
        let e = (u.to_f64().floor().max(0.0) as usize).min(edges - 1);
        let s = u - e as u32;

        let angle = Float::with_val(bits, &two_pi * &s);
        let harmonic = |k: u32| {
            let x = Float::with_val(bits, &angle * k);
            x.sin_cos(Float::new(bits))
        };
        let (s1, c1) = harmonic(1);
        let (s2, c2) = harmonic(2);
        let (s3, c3) = harmonic(3);
        let pi = pi_bits(bits);
        let mut t = s.clone();
        t -= Float::with_val(bits, &s1 * 3u32) / Float::with_val(bits, &pi * 4u32);
        t += Float::with_val(bits, &s2 * 3u32) / Float::with_val(bits, &pi * 20u32);
        t -= s3 / Float::with_val(bits, &pi * 60u32);
        let mut dt = Float::with_val(bits, 1);
        dt -= Float::with_val(bits, &c1 * 3u32) / 2u32;
        dt += Float::with_val(bits, &c2 * 3u32) / 5u32;
        dt -= c3 / 10u32;

        let a = &self.vertices[e];
        let d = &self.vertices[(e + 1) % edges] - a;
        let z = &d.scale(&t) + a;
        let speed = Float::with_val(bits, dt * edges as u32) / two_pi;
        (z, d.scale(&speed))
    }
}

fn pi_bits(bits: u32) -> Real {
    Float::with_val(bits, rug::float::Constant::Pi)
}

/// Default trapezoid node count for degree `N`: `max(256, 8(N+2))`.
pub fn default_nodes(degree: usize) -> usize {
    256.max(8 * (degree + 2))
}

/// Trapezoid-rule moments of an arbitrary boundary curve.
pub fn contour_moments(
    curve: &dyn BoundaryCurve,
    degree: usize,
    nodes: usize,
    ctx: PrecisionContext,
) -> Result<MomentMatrix> {
    let two_pi = Float::with_val(ctx.bits(), pi(ctx) * 2u32);
    let samples: Vec<(Vec<Complex>, Vec<Complex>)> = (0..nodes)
        .into_par_iter()
        .map(|q| {
            let theta = Float::with_val(ctx.bits(), &two_pi * q as u32) / nodes as u32;
            let (z, dz) = curve.point_and_derivative(&theta);
            let zbar = z.conj();
            let mut zk = Vec::with_capacity(degree + 1);
            zk.push(dz);
            for k in 1..=degree {
                let next = &zk[k - 1] * &z;
                zk.push(next);
            }
            let mut zb = Vec::with_capacity(degree + 1);
            zb.push(zbar.clone());
            for j in 1..=degree {
                let next = &zb[j - 1] * &zbar;
                zb.push(next);
            }
            (zk, zb)
        })
        .collect();

    let rows: Vec<Vec<Complex>> = (0..=degree)
        .into_par_iter()
        .map(|k| {
            let mut row = vec![Complex::zero(ctx); degree + 1];
            for (zk, zb) in &samples {
                for (acc, zbj) in row.iter_mut().zip(zb) {
                    acc.mul_add_assign(&zk[k], zbj);
                }
            }
            // weight 2π/nodes and factor 1/(2i(j+1)) = -i/(2(j+1))
            for (j, v) in row.iter_mut().enumerate() {
                let w = Float::with_val(ctx.bits(), &two_pi / (2 * nodes * (j + 1)) as u32);
                let re = Float::with_val(ctx.bits(), &v.im * &w);
                let im = -Float::with_val(ctx.bits(), &v.re * &w);
                *v = Complex::new(re, im);
            }
            row
        })
        .collect();
    MomentMatrix::from_entries(degree, ctx, rows.into_iter().flatten().collect())
}

/// Moments of a domain from trapezoid quadrature on its boundary.
///
/// Requires `nodes ≥ 4(N+2)`; the boundary is sampled at `jordan_resolution`
/// points and rejected if the polyline self-intersects.
pub fn parametric_moments(
    spec: &DomainSpec,
    degree: usize,
    nodes: usize,
    ctx: PrecisionContext,
) -> Result<MomentMatrix> {
    let required = 4 * (degree + 2);
    if nodes < required {
        return Err(Error::InsufficientNodes { nodes, required });
    }
    let curve = spec.boundary_curve(ctx)?;
    check_jordan(curve.as_ref(), 512, ctx)?;
    contour_moments(curve.as_ref(), degree, nodes, ctx)
}

/// Samples the curve and rejects it if the closed polyline self-intersects.
pub(crate) fn check_jordan(curve: &dyn BoundaryCurve, resolution: usize, ctx: PrecisionContext) -> Result<()> {
    let two_pi = Float::with_val(ctx.bits(), pi(ctx) * 2u32);
    let pts: Vec<(f64, f64)> = (0..resolution)
        .map(|q| {
            let theta = Float::with_val(ctx.bits(), &two_pi * q as u32) / resolution as u32;
            curve.point(&theta).to_f64()
        })
        .collect();
    if closed_polyline_self_intersects(&pts) {
        Err(Error::NonJordanBoundary)
    } else {
        Ok(())
    }
}
