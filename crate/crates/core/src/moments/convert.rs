//! Conversion between real moments `τ_{mn} = ∫ x^m y^n` and complex moments.
//!
//! Expanding `z^m z̄^n = (x+iy)^m (x−iy)^n` gives
//! `μ_{mn} = Σ_j Σ_k C(m,j) C(n,k) i^{m−j} (−i)^{n−k} τ_{j+k, m+n−j−k}`,
//! and `x^m y^n = ((z+z̄)/2)^m ((z−z̄)/(2i))^n` gives
//! `τ_{mn} = (−i)^n 2^{−m−n} Σ_j Σ_k (−1)^{n−k} C(m,j) C(n,k) μ_{j+k, m+n−j−k}`.

use rug::Float;

use crate::error::{Error, Result};
use crate::moments::MomentMatrix;
use crate::precision::PrecisionContext;
use crate::scalar::{Complex, Real};

/// Which index pairs a [`RealMomentArray`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealLayout {
    /// `m + n ≤ max_total`.
    Triangular { max_total: usize },
    /// `m, n ≤ max_each`.
    Rectangular { max_each: usize },
}

impl RealLayout {
    pub fn contains(&self, m: usize, n: usize) -> bool {
        match *self {
            RealLayout::Triangular { max_total } => m + n <= max_total,
            RealLayout::Rectangular { max_each } => m <= max_each && n <= max_each,
        }
    }

    fn side(&self) -> usize {
        match *self {
            RealLayout::Triangular { max_total } => max_total,
            RealLayout::Rectangular { max_each } => max_each,
        }
    }

    /// Highest complex-moment degree this layout fully determines.
    pub fn complex_degree(&self) -> usize {
        self.side() / 2
    }
}

#[derive(Clone, Debug)]
pub struct RealMomentArray {
    layout: RealLayout,
    ctx: PrecisionContext,
    // (side+1)² grid; entries outside the layout are None
    entries: Vec<Option<Real>>,
}

impl RealMomentArray {
    pub fn new(layout: RealLayout, ctx: PrecisionContext) -> Self {
        let side = layout.side() + 1;
        Self { layout, ctx, entries: vec![None; side * side] }
    }

    /// Fills every slot of the layout from `f(m, n)`.
    pub fn from_fn(layout: RealLayout, ctx: PrecisionContext, mut f: impl FnMut(usize, usize) -> Real) -> Result<Self> {
        let mut out = Self::new(layout, ctx);
        let side = layout.side();
        for m in 0..=side {
            for n in 0..=side {
                if layout.contains(m, n) {
                    out.set(m, n, f(m, n))?;
                }
            }
        }
        out.validate()?;
        Ok(out)
    }

    pub fn layout(&self) -> RealLayout {
        self.layout
    }

    pub fn ctx(&self) -> PrecisionContext {
        self.ctx
    }

    pub fn get(&self, m: usize, n: usize) -> Option<&Real> {
        if !self.layout.contains(m, n) {
            return None;
        }
        self.entries[m * (self.layout.side() + 1) + n].as_ref()
    }

    pub fn set(&mut self, m: usize, n: usize, value: Real) -> Result<()> {
        if !self.layout.contains(m, n) {
            return Err(Error::IndexOutOfRange(format!("tau[{m}][{n}] outside {:?}", self.layout)));
        }
        let side = self.layout.side() + 1;
        self.entries[m * side + n] = Some(value);
        Ok(())
    }

    /// All entries finite and `τ_{00} > 0`.
    pub fn validate(&self) -> Result<()> {
        if self.entries.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Parse("non-finite real moment".into()));
        }
        match self.get(0, 0) {
            Some(t) if t.is_sign_positive() && !t.is_zero() => Ok(()),
            _ => Err(Error::MomentsNotPositiveDefinite { step: 0, norm2: self.get(0, 0).map_or(0.0, Real::to_f64) }),
        }
    }

    fn need(&self, m: usize, n: usize) -> Result<&Real> {
        self.get(m, n).ok_or(Error::IncompleteRealMoments { m, n })
    }
}

fn binomial_rows(n: usize, ctx: PrecisionContext) -> Vec<Vec<Real>> {
    let mut rows: Vec<Vec<Real>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = Vec::with_capacity(i + 1);
        for j in 0..=i {
            if j == 0 || j == i {
                row.push(Float::with_val(ctx.bits(), 1));
            } else {
                row.push(Float::with_val(ctx.bits(), &rows[i - 1][j - 1] + &rows[i - 1][j]));
            }
        }
        rows.push(row);
    }
    rows
}

/// `x·i^p` for real `x`.
fn times_i_power(x: &Real, p: usize, ctx: PrecisionContext) -> Complex {
    let zero = || Float::new(ctx.bits());
    let neg = || Float::with_val(ctx.bits(), -x);
    match p % 4 {
        0 => Complex::new(x.clone(), zero()),
        1 => Complex::new(zero(), x.clone()),
        2 => Complex::new(neg(), zero()),
        _ => Complex::new(zero(), neg()),
    }
}

/// Complex moments up to the largest degree the real array determines.
pub fn real_to_complex(tau: &RealMomentArray) -> Result<MomentMatrix> {
    real_to_complex_degree(tau, tau.layout.complex_degree())
}

/// Complex moments `μ_{mn}` for `m, n ≤ degree`.
pub fn real_to_complex_degree(tau: &RealMomentArray, degree: usize) -> Result<MomentMatrix> {
    let ctx = tau.ctx;
    let binom = binomial_rows(degree, ctx);
    let n1 = degree + 1;
    let mut entries = Vec::with_capacity(n1 * n1);
    for m in 0..=degree {
        for n in 0..=degree {
            let mut acc = Complex::zero(ctx);
            for j in 0..=m {
                for k in 0..=n {
                    let t = tau.need(j + k, m + n - j - k)?;
                    let w = Float::with_val(ctx.bits(), &binom[m][j] * &binom[n][k]);
                    let term = Float::with_val(ctx.bits(), t * &w);
                    // i^{m-j} (−i)^{n-k} = i^{(m-j) + 3(n-k)}
                    acc += &times_i_power(&term, (m - j) + 3 * (n - k), ctx);
                }
            }
            entries.push(acc);
        }
    }
    MomentMatrix::from_entries(degree, ctx, entries)
}

/// Real moments `τ_{mn}`, `m + n ≤ N`, from a Hermitian table of degree `N`.
///
/// Fails with `NonHermitianInput` when `max |μ_{kj} − conj(μ_{jk})|` exceeds
/// `2^{−bits/2}` relative to `max |μ|`.
pub fn complex_to_real(mu: &MomentMatrix) -> Result<RealMomentArray> {
    let ctx = mu.ctx();
    let tolerance = 2f64.powi(-((ctx.bits() / 2) as i32));
    let deviation = mu.hermitian_deviation();
    if deviation > tolerance {
        return Err(Error::NonHermitianInput { deviation, tolerance });
    }
    let degree = mu.degree();
    let binom = binomial_rows(degree, ctx);
    let layout = RealLayout::Triangular { max_total: degree };
    let mut out = RealMomentArray::new(layout, ctx);
    let scale_max = mu.max_abs();
    for m in 0..=degree {
        for n in 0..=(degree - m) {
            let mut acc = Complex::zero(ctx);
            for j in 0..=m {
                for k in 0..=n {
                    let w = Float::with_val(ctx.bits(), &binom[m][j] * &binom[n][k]);
                    let term = mu.entry(j + k, m + n - j - k)?.scale(&w);
                    if (n - k) % 2 == 1 {
                        acc -= &term;
                    } else {
                        acc += &term;
                    }
                }
            }
            // (−i)^n 2^{−m−n}
            let unit = times_i_power(&Float::with_val(ctx.bits(), 1), 3 * n, ctx);
            let mut value = &acc * &unit;
            value.re >>= (m + n) as u32;
            value.im >>= (m + n) as u32;
            let residue = value.im.to_f64().abs();
            if residue > tolerance * scale_max.max(1.0) {
                log::warn!("tau[{m}][{n}] has imaginary residue {residue:e}");
            }
            out.set(m, n, value.re)?;
        }
    }
    out.validate()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainSpec;
    use crate::scalar::real;
    use proptest::prelude::*;

    const CTX: PrecisionContext = PrecisionContext::DOUBLE;

    fn sample_tau(max_total: usize, seed: &[f64]) -> RealMomentArray {
        let layout = RealLayout::Triangular { max_total };
        RealMomentArray::from_fn(layout, CTX, |m, n| {
            let v = seed[(m * 31 + n * 17) % seed.len()];
            if m == 0 && n == 0 {
                real(CTX, 1.0 + v.abs())
            } else {
                real(CTX, v)
            }
        })
        .unwrap()
    }

    #[test]
    fn low_order_identities() {
        let tau = sample_tau(4, &[0.3, -0.7, 1.1, 0.25, -0.05, 0.9]);
        let mu = real_to_complex(&tau).unwrap();
        let t = |m, n| tau.get(m, n).unwrap().to_f64();
        assert_eq!(mu.get(0, 0).unwrap().to_f64(), (t(0, 0), 0.0));
        let (re, im) = mu.get(1, 0).unwrap().to_f64();
        assert!((re - t(1, 0)).abs() < 1e-15 && (im - t(0, 1)).abs() < 1e-15);
        let (re, im) = mu.get(0, 1).unwrap().to_f64();
        assert!((re - t(1, 0)).abs() < 1e-15 && (im + t(0, 1)).abs() < 1e-15);

        let back = complex_to_real(&mu).unwrap();
        assert!((back.get(0, 0).unwrap().to_f64() - t(0, 0)).abs() < 1e-15);
        // τ_{01} = (μ_{10} − μ_{01}) / (2i)
        let d = &(mu.get(1, 0).unwrap() - mu.get(0, 1).unwrap()) / &Complex::from_f64(CTX, 0.0, 2.0);
        assert!((back.get(0, 1).unwrap().to_f64() - d.re.to_f64()).abs() < 1e-15);
    }

    #[test]
    fn square_real_moments_match_direct_integration() {
        // ∫∫_{[-1,1]²} x^m y^n = (1-(-1)^{m+1})/(m+1) · (1-(-1)^{n+1})/(n+1)
        let side = |p: usize| if p.is_multiple_of(2) { 2.0 / (p as f64 + 1.0) } else { 0.0 };
        let square = DomainSpec::polygon_f64(&[(1.0, -1.0), (1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0)]);
        let mu = square.moments(6, PrecisionContext::new(113).unwrap(), None).unwrap();
        let tau = complex_to_real(&mu).unwrap();
        for m in 0..=6 {
            for n in 0..=(6 - m) {
                let got = tau.get(m, n).unwrap().to_f64();
                assert!((got - side(m) * side(n)).abs() < 1e-25, "tau[{m}][{n}] = {got}");
            }
        }
    }

    #[test]
    fn missing_entries_are_reported() {
        let tau = sample_tau(2, &[0.5, 0.1]);
        assert!(matches!(
            real_to_complex_degree(&tau, 2),
            Err(Error::IncompleteRealMoments { .. })
        ));
    }

    #[test]
    fn rectangular_layout() {
        let layout = RealLayout::Rectangular { max_each: 4 };
        let tau = RealMomentArray::from_fn(layout, CTX, |m, n| real(CTX, 1.0 / (1.0 + m as f64 + 2.0 * n as f64))).unwrap();
        let mu = real_to_complex(&tau).unwrap();
        assert_eq!(mu.degree(), 2);
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let e = vec![
            Complex::from_f64(CTX, 1.0, 0.0),
            Complex::from_f64(CTX, 0.5, 0.0),
            Complex::from_f64(CTX, -0.5, 0.0),
            Complex::from_f64(CTX, 1.0, 0.0),
        ];
        let mu = MomentMatrix::from_entries_unchecked(1, CTX, e);
        assert!(matches!(complex_to_real(&mu), Err(Error::NonHermitianInput { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn round_trip_is_identity(degree in 1usize..=10, seed in prop::collection::vec(-1.0f64..1.0, 7..40)) {
            let tau = sample_tau(2 * degree, &seed);
            let mu = real_to_complex(&tau).unwrap();
            let back = complex_to_real(&mu).unwrap();
            for m in 0..=degree {
                for n in 0..=(degree - m) {
                    let a = tau.get(m, n).unwrap().to_f64();
                    let b = back.get(m, n).unwrap().to_f64();
                    prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "tau[{}][{}]: {} vs {}", m, n, a, b);
                }
            }
        }
    }
}
