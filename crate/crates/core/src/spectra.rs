//! Eigenvalues of complex upper Hessenberg matrices by shifted QR.
//!
//! Used on both sides of the zero/eigenvalue duality: the principal `n×n`
//! block of the Bergman-shift matrix has the zeros of `p_n` as eigenvalues,
//! and the `n×n` block of `T_Ψ` has the zeros of `G_n`.

use rug::Float;

use crate::arnoldi::HessenbergMatrix;
use crate::error::{Error, Result};
use crate::poly::ComplexPolynomial;
use crate::precision::PrecisionContext;
use crate::scalar::{Complex, Real};

#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Eigenvalues with multiplicity, in deflation order.
    pub values: Vec<Complex>,
    /// Largest subdiagonal entry neglected at deflation, relative to the
    /// largest matrix entry.
    pub residual: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_f64(&self) -> Vec<(f64, f64)> {
        self.values.iter().map(Complex::to_f64).collect()
    }
}

/// Eigenvalues of the principal `n×n` block of `h`.
pub fn hessenberg_eigenvalues(h: &HessenbergMatrix, n: usize) -> Result<Spectrum> {
    let a = h.principal(n)?;
    qr_eigenvalues(a, h.ctx())
}

/// Zeros of `p` as eigenvalues of its balanced monic companion matrix.
pub fn polynomial_zeros_oracle(p: &ComplexPolynomial) -> Result<Spectrum> {
    let n = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::InvalidParameter("polynomial zeros need degree ≥ 1".into())),
    };
    let lead = p.leading().expect("nonzero polynomial").clone();
    let ctx = lead.ctx();
    let mut a = vec![vec![Complex::zero(ctx); n]; n];
    for (j, entry) in a[0].iter_mut().enumerate() {
        *entry = -(&p.coeffs()[n - 1 - j] / &lead);
    }
    for k in 1..n {
        a[k][k - 1] = Complex::one(ctx);
    }
    balance(&mut a);
    qr_eigenvalues(a, ctx)
}

/// Diagonal similarity by powers of two equalizing row and column norms.
/// Preserves the Hessenberg structure and is exact in binary arithmetic.
fn balance(a: &mut [Vec<Complex>]) {
    let n = a.len();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j][i].abs1().to_f64();
                    r += a[i][j].abs1().to_f64();
                }
            }
            if c == 0.0 || r == 0.0 || !c.is_finite() || !r.is_finite() {
                continue;
            }
            let s = c + r;
            let mut f = 1.0f64;
            let mut g = r / 2.0;
            while c < g {
                f *= 2.0;
                c *= 4.0;
            }
            g = r * 2.0;
            while c >= g {
                f /= 2.0;
                c /= 4.0;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let exp = f.log2().round() as i32;
                for j in 0..n {
                    shift_exp(&mut a[i][j], -exp);
                    shift_exp(&mut a[j][i], exp);
                }
            }
        }
    }
}

fn shift_exp(z: &mut Complex, exp: i32) {
    if exp >= 0 {
        z.re <<= exp as u32;
        z.im <<= exp as u32;
    } else {
        z.re >>= (-exp) as u32;
        z.im >>= (-exp) as u32;
    }
}

/// Complex Givens rotation `[c s; −s̄ c]` with real `c` that maps `(x, y)` to
/// `(ρ, 0)`.
fn givens(x: &Complex, y: &Complex) -> (Real, Complex) {
    let p = x.prec();
    if y.is_zero() {
        return (Float::with_val(p, 1), Complex::zero(x.ctx()));
    }
    if x.is_zero() {
        return (Float::new(p), Complex::one(x.ctx()));
    }
    let ax = x.abs();
    let mut r2 = x.norm_sqr();
    r2 += y.norm_sqr();
    let r = r2.sqrt();
    let c = Float::with_val(p, &ax / &r);
    let phase = x.scale(&Float::with_val(p, ax.recip_ref()));
    let s = (&phase * &y.conj()).scale(&Float::with_val(p, r.recip_ref()));
    (c, s)
}

/// Eigenvalues of the 2×2 block `[a b; c d]`, the one nearer `d` first.
fn wilkinson_shift(a: &Complex, b: &Complex, c: &Complex, d: &Complex) -> Complex {
    let p = a.prec();
    let half = Float::with_val(p, 0.5);
    let mean = (a + d).scale(&half);
    let diff = (a - d).scale(&half);
    let disc = (&(&diff * &diff) + &(b * c)).sqrt();
    let l1 = &mean + &disc;
    let l2 = &mean - &disc;
    if (&l1 - d).abs() <= (&l2 - d).abs() { l1 } else { l2 }
}

fn qr_eigenvalues(mut a: Vec<Vec<Complex>>, ctx: PrecisionContext) -> Result<Spectrum> {
    let n = a.len();
    let eps = Float::with_val(ctx.bits(), 1) >> ctx.bits().saturating_sub(8);
    let mut anorm = Float::new(ctx.bits());
    for row in &a {
        for v in row {
            let m = v.abs1();
            if m > anorm {
                anorm = m;
            }
        }
    }
    let norm_f64 = anorm.to_f64().max(f64::MIN_POSITIVE);
    let max_iter = 40 * n.max(1);
    let mut values = Vec::with_capacity(n);
    let mut residual = 0.0f64;
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n;

    while hi > 0 {
        let last = hi - 1;
        // find the start of the trailing unreduced block
        let mut lo = last;
        while lo > 0 {
            let sub = a[lo][lo - 1].abs1();
            let mut tst = a[lo - 1][lo - 1].abs1();
            tst += a[lo][lo].abs1();
            if tst.is_zero() {
                tst = anorm.clone();
            }
            if sub <= Float::with_val(ctx.bits(), &eps * &tst) {
                residual = residual.max(sub.to_f64() / norm_f64);
                a[lo][lo - 1] = Complex::zero(ctx);
                break;
            }
            lo -= 1;
        }
        if lo == last {
            values.push(a[last][last].clone());
            hi = last;
            since_deflation = 0;
            continue;
        }

        total += 1;
        since_deflation += 1;
        if total > max_iter {
            return Err(Error::NoConvergence { iterations: total });
        }
        let shift = if since_deflation % 10 == 0 {
            let kick = Float::with_val(ctx.bits(), a[last][last - 1].re.abs_ref()) * 0.75f64;
            let mut s = a[last][last].clone();
            s.re += &kick;
            s.re += Float::with_val(ctx.bits(), &anorm * &eps);
            s
        } else {
            wilkinson_shift(&a[last - 1][last - 1], &a[last - 1][last], &a[last][last - 1], &a[last][last])
        };
        qr_sweep(&mut a, lo, last, &shift);
    }
    Ok(Spectrum { values, residual })
}

/// One shifted QR step `H − σI = QR`, `H ← RQ + σI` on rows/columns `lo..=hi`.
fn qr_sweep(a: &mut [Vec<Complex>], lo: usize, hi: usize, shift: &Complex) {
    for i in lo..=hi {
        a[i][i] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(&a[k][k], &a[k + 1][k]);
        let s_conj = s.conj();
        for j in k..=hi {
            let x = a[k][j].clone();
            let y = a[k + 1][j].clone();
            let mut top = x.scale(&c);
            top.mul_add_assign(&s, &y);
            let mut bottom = y.scale(&c);
            bottom.mul_sub_assign(&s_conj, &x);
            a[k][j] = top;
            a[k + 1][j] = bottom;
        }
        rotations.push((c, s));
    }
    for (offset, (c, s)) in rotations.iter().enumerate() {
        let k = lo + offset;
        let s_conj = s.conj();
        for row in a.iter_mut().take((k + 2).min(hi) + 1).skip(lo) {
            let x = row[k].clone();
            let y = row[k + 1].clone();
            let mut left = x.scale(c);
            left.mul_add_assign(&s_conj, &y);
            let mut right = y.scale(c);
            right.mul_sub_assign(s, &x);
            row[k] = left;
            row[k + 1] = right;
        }
    }
    for i in lo..=hi {
        a[i][i] += shift;
    }
}

/// `q_n` from the column recurrence `z q_k = Σ_{j ≤ k+1} h_{jk} q_j`, `q_0 = 1`.
/// Its zeros are the eigenvalues of the principal `n×n` block.
pub fn recurrence_polynomial(h: &HessenbergMatrix, n: usize) -> Result<ComplexPolynomial> {
    if n > h.order() {
        return Err(Error::IndexOutOfRange(format!("recurrence to degree {n} needs {n} columns, have {}", h.order())));
    }
    let ctx = h.ctx();
    let mut q = vec![ComplexPolynomial::constant(Complex::one(ctx))];
    for k in 0..n {
        let sub = h.get(k + 1, k);
        if sub.is_zero() {
            return Err(Error::InvalidParameter(format!("zero subdiagonal in column {k}")));
        }
        let mut next = q[k].multiply_by_z();
        for (j, qj) in q.iter().enumerate() {
            next.sub_scaled(qj, &h.get(j, k));
        }
        q.push(next.scale(&sub.recip()));
    }
    Ok(q.pop().expect("nonempty"))
}

/// Pairs the two multisets by minimum total distance and returns the largest
/// distance within a pair. `None` if the lengths differ.
pub fn matched_distance(a: &[Complex], b: &[Complex]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    if a.is_empty() {
        return Some(0.0);
    }
    let cost: Vec<Vec<f64>> = a.iter().map(|x| b.iter().map(|y| (x - y).abs_f64()).collect()).collect();
    let assignment = hungarian(&cost);
    Some(assignment.iter().enumerate().map(|(i, &j)| cost[i][j]).fold(0.0, f64::max))
}

/// Minimum-cost perfect matching on a square cost matrix; `result[row] = col`.
fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    // 1-based potentials, column 0 is a sentinel
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut result = vec![0; n];
    for j in 1..=n {
        if owner[j] > 0 {
            result[owner[j] - 1] = j - 1;
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::faber::{toeplitz_matrix, LaurentMap};
    use proptest::prelude::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(113).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex {
        Complex::from_f64(ctx(), re, im)
    }

    #[test]
    fn one_by_one() {
        let h = HessenbergMatrix::from_dense(&[vec![c(0.25, -3.0)]], ctx());
        let s = hessenberg_eigenvalues(&h, 1).unwrap();
        assert_eq!(s.to_f64(), vec![(0.25, -3.0)]);
    }

    #[test]
    fn quadratic_zeros() {
        let p = ComplexPolynomial::from_coeffs(vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let s = polynomial_zeros_oracle(&p).unwrap();
        let d = matched_distance(&s.values, &[c(-1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(d < 1e-30);
        assert!(polynomial_zeros_oracle(&ComplexPolynomial::constant(c(2.0, 0.0))).is_err());
    }

    #[test]
    fn hypocycloid_toeplitz_cube_roots() {
        let t = toeplitz_matrix(&LaurentMap::hypocycloid3(ctx()), 3);
        let s = hessenberg_eigenvalues(&t, 3).unwrap();
        let r = 0.5f64.cbrt();
        let roots: Vec<Complex> = (0..3)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                c(r * a.cos(), r * a.sin())
            })
            .collect();
        assert!(matched_distance(&s.values, &roots).unwrap() < 1e-14);
        for v in &s.values {
            assert!((v.abs_f64() - 0.7937005259840998).abs() < 1e-14);
        }
    }

    #[test]
    fn nilpotent_shift_matrix_converges() {
        // exact zeros above the subdiagonal: all eigenvalues 0
        let n = 6;
        let rows: Vec<Vec<Complex>> = (0..n)
            .map(|k| (0..n).map(|j| if k == j + 1 { c(0.9, 0.0) } else { c(0.0, 0.0) }).collect())
            .collect();
        let s = hessenberg_eigenvalues(&HessenbergMatrix::from_dense(&rows, ctx()), n).unwrap();
        assert_eq!(s.len(), n);
        for v in &s.values {
            assert!(v.abs_f64() < 1e-4, "{v:?}");
        }
    }

    #[test]
    fn hungarian_finds_optimal_pairing() {
        let a = [c(0.0, 0.0), c(1.0, 0.0), c(5.0, 0.0)];
        let b = [c(5.1, 0.0), c(0.2, 0.0), c(0.9, 0.0)];
        assert!((matched_distance(&a, &b).unwrap() - 0.2).abs() < 1e-12);
        assert_eq!(matched_distance(&a, &b[..2]), None);
    }

    fn arb_hessenberg(max: usize) -> impl Strategy<Value = Vec<Vec<(f64, f64)>>> {
        (1..=max).prop_flat_map(|n| {
            prop::collection::vec(prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n), n)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn conjugation_equivariance(rows in arb_hessenberg(8)) {
            let n = rows.len();
            let dense: Vec<Vec<Complex>> = rows
                .iter()
                .enumerate()
                .map(|(k, r)| r.iter().enumerate()
                    .map(|(j, &(x, y))| if k > j + 1 { c(0.0, 0.0) } else { c(x, y) })
                    .collect())
                .collect();
            let h = HessenbergMatrix::from_dense(&dense, ctx());
            let s = hessenberg_eigenvalues(&h, n).unwrap();
            let sc = hessenberg_eigenvalues(&h.conj(), n).unwrap();
            let conj: Vec<Complex> = s.values.iter().map(Complex::conj).collect();
            prop_assert!(matched_distance(&conj, &sc.values).unwrap() < 1e-8);

            // trace is preserved
            let mut trace = c(0.0, 0.0);
            let mut sum = c(0.0, 0.0);
            for k in 0..n {
                trace += &dense[k][k];
                sum += &s.values[k];
            }
            prop_assert!((&trace - &sum).abs_f64() < 1e-20);
        }
    }

    #[test]
    fn recurrence_zeros_match_eigenvalues() {
        let ctx = PrecisionContext::new(113).unwrap();
        let t = crate::faber::toeplitz_matrix(&crate::faber::LaurentMap::hypocycloid3(ctx), 6);
        for n in 1..=6 {
            let q = recurrence_polynomial(&t, n).unwrap();
            assert_eq!(q.degree(), Some(n));
            let zeros = polynomial_zeros_oracle(&q).unwrap();
            let eig = hessenberg_eigenvalues(&t, n).unwrap();
            assert!(matched_distance(&zeros.values, &eig.values).unwrap() < 1e-20);
        }
        assert!(recurrence_polynomial(&t, 7).is_err());
    }
}
