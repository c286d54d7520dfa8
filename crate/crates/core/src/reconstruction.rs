//! End-to-end recovery: moments → Arnoldi → scaled diagonals → truncated
//! exterior map → boundary samples, plus convergence tables against a known
//! reference map.

use rug::Float;

use crate::arnoldi::{
    arnoldi_orthonormalize_with, scaled_capacity_indexed, scaled_coefficient_indexed, scaled_diagonals_indexed, ArnoldiOptions,
    DiagonalIndexing, HessenbergMatrix,
};
use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::faber::{laurent_eval, LaurentMap};
use crate::moments::MomentMatrix;
use crate::precision::PrecisionContext;
use crate::scalar::{pi, Complex};

/// Default truncation order `m = n/2`.
pub fn default_order(n: usize) -> usize {
    n / 2
}

/// `Ψ_m^{(n)}` with `b = b^{(n)}` and coefficients `b_0^{(n)}..b_m^{(n)}`.
pub fn reconstruct(moments: &MomentMatrix, n: usize, m: usize) -> Result<LaurentMap> {
    reconstruct_with(moments, n, m, ArnoldiOptions::default(), DiagonalIndexing::ZeroBased)
}

pub fn reconstruct_with(
    moments: &MomentMatrix,
    n: usize,
    m: usize,
    options: ArnoldiOptions,
    indexing: DiagonalIndexing,
) -> Result<LaurentMap> {
    check_orders(n, m)?;
    let (_, h) = arnoldi_orthonormalize_with(moments, indexing.column(n)?, options)?;
    reconstruct_from_hessenberg(&h, n, m, indexing)
}

/// [`reconstruct_with`] on a precomputed Hessenberg matrix.
pub fn reconstruct_from_hessenberg(
    h: &HessenbergMatrix,
    n: usize,
    m: usize,
    indexing: DiagonalIndexing,
) -> Result<LaurentMap> {
    check_orders(n, m)?;
    let diag = scaled_diagonals_indexed(h, n, m, indexing)?;
    let b = Complex::new(diag.capacity, Float::with_val(h.ctx().bits(), diag.capacity_imag_residue));
    LaurentMap::from_complex_capacity(&b, diag.coeffs)
}

fn check_orders(n: usize, m: usize) -> Result<()> {
    if 1 < m && m < n {
        Ok(())
    } else {
        Err(Error::InvalidParameter("m must satisfy 1 < m < n".into()))
    }
}

#[derive(Clone, Debug)]
pub struct CurveSample {
    pub theta: f64,
    pub point: Complex,
}

/// `K` samples of `Ψ(e^{iθ})` at `θ = 2πk/K`.
pub fn curve_points(map: &LaurentMap, samples: usize) -> Result<Vec<CurveSample>> {
    if samples < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 curve samples, got {samples}")));
    }
    let ctx = map.ctx();
    let two_pi = Float::with_val(ctx.bits(), pi(ctx) * 2u32);
    (0..samples)
        .map(|k| {
            let theta = Float::with_val(ctx.bits(), &two_pi * k as u32) / samples as u32;
            let point = laurent_eval(map, &Complex::cis(&theta))?;
            Ok(CurveSample { theta: theta.to_f64(), point })
        })
        .collect()
}

/// `max_k |Ψ_ref(w_k) − Ψ_est(w_k)|` over `K ≥ 64` equispaced points of the
/// unit circle.
pub fn sup_distance(reference: &LaurentMap, estimate: &LaurentMap, samples: usize) -> Result<f64> {
    if samples < 64 {
        return Err(Error::InvalidParameter(format!("sup distance needs at least 64 samples, got {samples}")));
    }
    let ctx = reference.ctx();
    let estimate = estimate.with_prec(ctx);
    let two_pi = Float::with_val(ctx.bits(), pi(ctx) * 2u32);
    let mut worst = 0.0f64;
    for k in 0..samples {
        let theta = Float::with_val(ctx.bits(), &two_pi * k as u32) / samples as u32;
        let w = Complex::cis(&theta);
        let d = (&laurent_eval(reference, &w)? - &laurent_eval(&estimate, &w)?).abs_f64();
        worst = worst.max(d);
    }
    Ok(worst)
}

/// One line of a convergence table.
#[derive(Clone, Debug)]
pub struct RateRow {
    pub n: usize,
    /// `b^{(n)}`.
    pub capacity: Complex,
    /// `b − b^{(n)}` (real part; `b` is real).
    pub capacity_error: Option<f64>,
    /// Observed exponent `s_n` from this row and the next.
    pub capacity_rate: Option<f64>,
    /// `b_k^{(n)}`.
    pub coefficient: Complex,
    /// `b_k − b_k^{(n)}`.
    pub coefficient_error: Option<Complex>,
    pub coefficient_rate: Option<f64>,
}

/// `s_n = log(|t_n| / |t_{n'}|) / log(n'/n)`; `None` when either error is at
/// roundoff level.
pub fn observed_rate(n: usize, t_n: f64, n_next: usize, t_next: f64, floor: f64) -> Option<f64> {
    let (a, b) = (t_n.abs(), t_next.abs());
    if a <= floor || b <= floor || n_next <= n {
        return None;
    }
    Some((a / b).ln() / (n_next as f64 / n as f64).ln())
}

/// Rows `(n, b^{(n)}, t^{(n)}, b_k^{(n)}, t_k^{(n)}, s_n)` for every `n` in
/// `n_list`. The Hessenberg sections are nested, so one Arnoldi run to the
/// largest `n` serves every row.
pub fn rate_table(
    domain: &DomainSpec,
    reference: Option<&LaurentMap>,
    n_list: &[usize],
    k: usize,
    indexing: DiagonalIndexing,
    ctx: PrecisionContext,
) -> Result<Vec<RateRow>> {
    let Some(&max_n) = n_list.last() else {
        return Ok(Vec::new());
    };
    let moments = domain.moments(max_n + 1, ctx, None)?;
    rate_table_from_moments(&moments, reference, n_list, k, indexing)
}

pub fn rate_table_from_moments(
    moments: &MomentMatrix,
    reference: Option<&LaurentMap>,
    n_list: &[usize],
    k: usize,
    indexing: DiagonalIndexing,
) -> Result<Vec<RateRow>> {
    let Some(&max_n) = n_list.last() else {
        return Ok(Vec::new());
    };
    let (_, h) = arnoldi_orthonormalize_with(moments, indexing.column(max_n)?, ArnoldiOptions::default())?;
    rate_table_from_hessenberg(&h, reference, n_list, k, indexing)
}

/// Rows read from an existing Hessenberg matrix with enough columns for the
/// largest `n`.
pub fn rate_table_from_hessenberg(
    h: &HessenbergMatrix,
    reference: Option<&LaurentMap>,
    n_list: &[usize],
    k: usize,
    indexing: DiagonalIndexing,
) -> Result<Vec<RateRow>> {
    if n_list.is_empty() {
        return Ok(Vec::new());
    }
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("n values must be strictly increasing".into()));
    }
    if indexing.column(n_list[0])? < k {
        return Err(Error::InvalidParameter(format!("diagonal offset {k} exceeds n = {}", n_list[0])));
    }
    let ctx = h.ctx();
    let reference = reference.map(|r| r.with_prec(ctx));
    let mut rows = n_list
        .iter()
        .map(|&n| {
            let capacity = scaled_capacity_indexed(h, n, indexing)?;
            let coefficient = scaled_coefficient_indexed(h, n, k, indexing)?;
            let (capacity_error, coefficient_error) = match &reference {
                Some(r) => {
                    let t = Float::with_val(ctx.bits(), r.b() - &capacity.re).to_f64();
                    (Some(t), Some(&r.coefficient(k) - &coefficient))
                }
                None => (None, None),
            };
            Ok(RateRow {
                n,
                capacity,
                capacity_error,
                capacity_rate: None,
                coefficient,
                coefficient_error,
                coefficient_rate: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let floor = ctx.tolerance(16) * 1e3;
    for i in 0..rows.len().saturating_sub(1) {
        let (n, n_next) = (rows[i].n, rows[i + 1].n);
        if let (Some(a), Some(b)) = (rows[i].capacity_error, rows[i + 1].capacity_error) {
            rows[i].capacity_rate = observed_rate(n, a, n_next, b, floor);
        }
        if let (Some(a), Some(b)) = (&rows[i].coefficient_error, &rows[i + 1].coefficient_error) {
            rows[i].coefficient_rate = observed_rate(n, a.abs_f64(), n_next, b.abs_f64(), floor);
        }
    }
    Ok(rows)
}

/// Everything one reconstruction run produces.
#[derive(Clone, Debug)]
pub struct ReconstructionReport {
    pub n: usize,
    pub m: usize,
    pub laurent: LaurentMap,
    pub curve: Vec<CurveSample>,
    pub sup_error: Option<f64>,
    pub rate_rows: Option<Vec<RateRow>>,
}

impl ReconstructionReport {
    /// Runs [`reconstruct`], samples `curve_samples` boundary points and,
    /// given a reference map, measures the sup distance on the unit circle.
    pub fn run(
        moments: &MomentMatrix,
        n: usize,
        m: usize,
        curve_samples: usize,
        reference: Option<&LaurentMap>,
        options: ArnoldiOptions,
        indexing: DiagonalIndexing,
    ) -> Result<Self> {
        let laurent = reconstruct_with(moments, n, m, options, indexing)?;
        let curve = curve_points(&laurent, curve_samples)?;
        let sup_error = reference
            .map(|r| sup_distance(&r.with_prec(moments.ctx()), &laurent, curve_samples.max(64)))
            .transpose()?;
        Ok(Self { n, m, laurent, curve, sup_error, rate_rows: None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::NamedDomain;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(113).unwrap()
    }

    #[test]
    fn curve_examples() {
        let id = curve_points(&LaurentMap::identity(ctx()), 4).unwrap();
        let expect = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        for (s, (x, y)) in id.iter().zip(expect) {
            let (re, im) = s.point.to_f64();
            assert!((re - x).abs() < 1e-30 && (im - y).abs() < 1e-30);
        }
        assert!(id.windows(2).all(|w| w[0].theta < w[1].theta));

        let hypo = curve_points(&LaurentMap::hypocycloid3(ctx()), 12).unwrap();
        assert_eq!(hypo[0].point.to_f64(), (1.5, 0.0));

        let ell = LaurentMap::ellipse(Float::with_val(113, 1.25), Float::with_val(113, 1.0));
        let pts = curve_points(&ell, 4).unwrap();
        let (re, im) = pts[1].point.to_f64();
        assert!(re.abs() < 1e-30 && (im - 1.0).abs() < 1e-30);
        assert!(curve_points(&ell, 2).is_err());
    }

    #[test]
    fn sup_distance_examples() {
        let id = LaurentMap::identity(ctx());
        assert_eq!(sup_distance(&id, &id, 64).unwrap(), 0.0);
        let eps = 1e-3;
        let bumped = LaurentMap::new(Float::with_val(113, 1), vec![Complex::zero(ctx()), Complex::from_f64(ctx(), eps, 0.0)]).unwrap();
        assert!((sup_distance(&id, &bumped, 64).unwrap() - eps).abs() < 1e-18);
        assert!(sup_distance(&id, &bumped, 63).is_err());
    }

    #[test]
    fn sup_distance_grows_on_nested_grids() {
        let tri = crate::faber::triangle_coefficients(40, ctx());
        let est = tri.truncated(10);
        let mut last = 0.0;
        for k in [64, 128, 256, 512] {
            let d = sup_distance(&tri, &est, k).unwrap();
            assert!(d >= last);
            last = d;
        }
    }

    #[test]
    fn order_checks() {
        let m = NamedDomain::UnitDisk.moments(8, ctx()).unwrap();
        let err = reconstruct(&m, 5, 10).unwrap_err();
        assert_eq!(err.to_string(), "InvalidParameter: m must satisfy 1 < m < n");
        assert!(reconstruct(&m, 5, 1).is_err());
    }

    #[test]
    fn disk_rate_rows_flag_undefined_exponent() {
        let disk = NamedDomain::UnitDisk.spec();
        let reference = LaurentMap::identity(ctx());
        let rows = rate_table(&disk, Some(&reference), &[10, 15, 20], 2, DiagonalIndexing::ZeroBased, ctx()).unwrap();
        for row in &rows {
            assert!(row.capacity_error.unwrap().abs() < 1e-12);
            assert!(row.coefficient_error.as_ref().unwrap().abs_f64() < 1e-12);
            assert!(row.capacity_rate.is_none() && row.coefficient_rate.is_none());
        }
    }

    #[test]
    fn rate_formula() {
        let s = observed_rate(100, 1.17e-5, 110, 9.70e-6, 0.0).unwrap();
        assert!((s - 1.96687).abs() < 1e-4);
        assert_eq!(observed_rate(100, 0.0, 110, 1.0, 1e-30), None);
    }
}
