//! Closed-form moments of polygons.
//!
//! With `dA = dz̄∧dz / 2i` the area moments reduce to the contour integral
//! `μ_{kj} = 1/(2i(j+1)) ∮ z^k z̄^{j+1} dz`. On an edge `z = A + tD`,
//! `t ∈ [0,1]`, the edge integral `I(k,m) = ∫₀¹ u^k v^m dt` with `u = A + tD`,
//! `v = conj(u)` satisfies, after one integration by parts,
//!
//! `(k+1)·D·I(k,m) = [u^{k+1} v^m]₀¹ − m·D̄·I(k+1, m−1)`,
//!
//! which is run along each anti-diagonal `k + m = s` starting from
//! `I(s,0) = [u^{s+1}]₀¹ / ((s+1)D)`. Rounding along a chain can grow by up
//! to `binom(k+m, m)`, so the tables are built with `2N + 20` guard bits.

use rug::Float;

use crate::error::{Error, Result};
use crate::moments::MomentMatrix;
use crate::precision::PrecisionContext;
use crate::scalar::Complex;

pub fn polygon_moments(vertices: &[Complex], degree: usize, ctx: PrecisionContext) -> Result<MomentMatrix> {
    validate_polygon(vertices)?;
    let work = PrecisionContext::new(ctx.bits() + 2 * degree as u32 + 20)?;
    let n1 = degree + 1;
    let mut acc = vec![Complex::zero(work); n1 * n1];
    let count = vertices.len();
    for e in 0..count {
        let a = vertices[e].with_prec(work);
        let b = vertices[(e + 1) % count].with_prec(work);
        let edge = EdgeIntegrals::new(&a, &b, degree, work);
        let d = &b - &a;
        for k in 0..=degree {
            for j in 0..=degree {
                acc[k * n1 + j].mul_add_assign(&d, edge.get(k, j + 1));
            }
        }
    }
    // multiply by 1/(2i(j+1)) = -i / (2(j+1))
    for k in 0..=degree {
        for j in 0..=degree {
            let v = &mut acc[k * n1 + j];
            let denom = (2 * (j + 1)) as u32;
            let re = Float::with_val(ctx.bits(), &v.im / denom);
            let im = Float::with_val(ctx.bits(), -Float::with_val(work.bits(), &v.re / denom));
            *v = Complex::new(re, im);
        }
    }
    MomentMatrix::from_entries(degree, ctx, acc)
}

/// `I(k,m)` for `k ≤ N`, `m ≤ N+1` on one edge.
struct EdgeIntegrals {
    degree: usize,
    table: Vec<Complex>,
}

impl EdgeIntegrals {
    fn new(a: &Complex, b: &Complex, degree: usize, ctx: PrecisionContext) -> Self {
        let max_m = degree + 1;
        let max_s = degree + max_m;
        let d = b - a;
        let d_conj = d.conj();
        let d_inv = d.recip();
        let powers = |z: &Complex, n: usize| -> Vec<Complex> {
            let mut out = Vec::with_capacity(n + 1);
            out.push(Complex::one(ctx));
            for i in 1..=n {
                let next = &out[i - 1] * z;
                out.push(next);
            }
            out
        };
        let (ua, ub) = (powers(a, max_s + 1), powers(b, max_s + 1));
        let (va, vb) = (powers(&a.conj(), max_m), powers(&b.conj(), max_m));

        let width = max_m + 1;
        let mut table = vec![Complex::zero(ctx); (degree + 1) * width];
        for s in 0..=max_s {
            let mut prev: Option<Complex> = None;
            for m in 0..=s.min(max_m) {
                let k = s - m;
                let mut val = &ub[k + 1] * &vb[m];
                val.mul_sub_assign(&ua[k + 1], &va[m]);
                if let Some(p) = &prev {
                    let scaled = p.scale(&Float::with_val(ctx.bits(), m as u32));
                    val.mul_sub_assign(&d_conj, &scaled);
                }
                let mut val = &val * &d_inv;
                val.re /= (k + 1) as u32;
                val.im /= (k + 1) as u32;
                if k <= degree {
                    table[k * width + m] = val.clone();
                }
                prev = Some(val);
            }
        }
        Self { degree, table }
    }

    fn get(&self, k: usize, m: usize) -> &Complex {
        debug_assert!(k <= self.degree);
        &self.table[k * (self.degree + 2) + m]
    }
}

/// At least three vertices, counterclockwise, no self-intersections.
pub fn validate_polygon(vertices: &[Complex]) -> Result<()> {
    if vertices.len() < 3 {
        return Err(Error::InvalidPolygon(format!(
            "a polygon needs at least 3 vertices, got {}",
            vertices.len()
        )));
    }
    let pts: Vec<(f64, f64)> = vertices.iter().map(Complex::to_f64).collect();
    if pts.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::InvalidPolygon("non-finite vertex".into()));
    }
    let n = pts.len();
    for i in 0..n {
        if pts[i] == pts[(i + 1) % n] {
            return Err(Error::InvalidPolygon(format!("repeated vertex at index {i}")));
        }
    }
    if signed_area(&pts) <= 0.0 {
        return Err(Error::InvalidPolygon("vertices must be in counterclockwise order".into()));
    }
    if closed_polyline_self_intersects(&pts) {
        return Err(Error::InvalidPolygon("edges intersect".into()));
    }
    Ok(())
}

pub(crate) fn signed_area(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len();
    (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum::<f64>()
        / 2.0
}

/// Tests every pair of non-adjacent edges of the closed polyline.
pub(crate) fn closed_polyline_self_intersects(pts: &[(f64, f64)]) -> bool {
    let n = pts.len();
    for i in 0..n {
        let (p1, p2) = (pts[i], pts[(i + 1) % n]);
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (q1, q2) = (pts[j], pts[(j + 1) % n]);
            if segments_intersect(p1, p2, q1, q2) {
                return true;
            }
        }
    }
    false
}

fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn on_segment(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> bool {
    p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

fn segments_intersect(p1: (f64, f64), p2: (f64, f64), q1: (f64, f64), q2: (f64, f64)) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}
