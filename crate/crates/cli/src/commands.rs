use std::fs;
use std::path::{Path, PathBuf};

use bergshape_core::arnoldi::{arnoldi_orthonormalize_with, ArnoldiOptions, DiagonalIndexing};
use bergshape_core::faber::{faber_second_kind, toeplitz_matrix};
use bergshape_core::io::{
    header_precision, laurent_from_json, laurent_to_json, read_hessenberg_csv, read_moments_csv, write_curve_csv,
    write_moments_csv, write_spectrum_csv, write_table_csv, ReportJson,
};
use bergshape_core::reconstruction::{
    curve_points, default_order, rate_table_from_hessenberg, reconstruct_from_hessenberg, sup_distance,
    ReconstructionReport,
};
use bergshape_core::scalar::format_real;
use bergshape_core::spectra::{hessenberg_eigenvalues, matched_distance, polynomial_zeros_oracle, recurrence_polynomial};
use bergshape_core::svg::overlay_svg;
use bergshape_core::tables::{check_rows, TableTolerance};
use bergshape_core::{DomainSpec, Error, LaurentMap, NamedDomain, PrecisionContext, Result};
use clap::Args;

use crate::{GlobalArgs, Status};

const COMPARE_TOLERANCE: f64 = 1e-8;
const SUP_TOLERANCE: f64 = 0.05;
const DISK_TOLERANCE: f64 = 1e-12;

#[derive(Args, Debug)]
pub struct MomentsArgs {
    /// Domain description (JSON).
    #[arg(long)]
    domain: PathBuf,
    /// Highest power `N` in `μ_kj`, `0 ≤ k, j ≤ N`.
    #[arg(long, default_value_t = 10)]
    degree: usize,
    #[arg(long, default_value = "moments.csv")]
    out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ReconstructArgs {
    /// Moment CSV covering degree `n + 1`.
    #[arg(long)]
    moments: PathBuf,
    #[arg(long)]
    n: usize,
    /// Truncation order; defaults to `n / 2`.
    #[arg(long)]
    m: Option<usize>,
    /// Boundary samples in the curve file.
    #[arg(long, default_value_t = 720)]
    samples: usize,
    /// Domain JSON whose exact map is used for the sup distance.
    #[arg(long)]
    reference: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    /// `triangle`, `disk`, `ellipse`, `ellipse(a,b)` or `hypocycloid`.
    domain: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 10)]
    step: usize,
    /// Rows in the convergence table; 11 for the triangle, 1 otherwise.
    #[arg(long)]
    rows: Option<usize>,
    /// Diagonal offset of the tabulated coefficient.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Table CSV; printed to standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SpectraArgs {
    /// Hessenberg CSV.
    #[arg(long, conflicts_with_all = ["laurent", "domain"])]
    hessenberg: Option<PathBuf>,
    /// Laurent-map JSON; its Toeplitz matrix is used.
    #[arg(long, conflicts_with = "domain")]
    laurent: Option<PathBuf>,
    /// Domain JSON; the Bergman-shift matrix is computed from its moments.
    #[arg(long)]
    domain: Option<PathBuf>,
    /// Order of the principal section.
    #[arg(long)]
    n: usize,
    /// Compare against the zeros of the matching polynomial.
    #[arg(long)]
    compare: bool,
    /// Spectrum CSV; printed to standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn context(global: &GlobalArgs, fallback: u32) -> Result<PrecisionContext> {
    PrecisionContext::new(global.precision.unwrap_or(fallback))
}

fn indexing(global: &GlobalArgs, fallback: DiagonalIndexing) -> Result<DiagonalIndexing> {
    global.indexing.as_deref().map_or(Ok(fallback), DiagonalIndexing::parse)
}

fn options(global: &GlobalArgs) -> ArnoldiOptions {
    ArnoldiOptions { strict_precision: global.strict_precision }
}

fn points(map: &LaurentMap, samples: usize) -> Result<Vec<(f64, f64)>> {
    Ok(curve_points(map, samples)?.iter().map(|s| s.point.to_f64()).collect())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// 40 digits cover the interchange format; larger tables need `2N` bits.
fn moments_precision(degree: usize) -> u32 {
    136.max(2 * degree as u32)
}

pub fn moments(global: &GlobalArgs, args: &MomentsArgs) -> Result<Status> {
    let ctx = context(global, moments_precision(args.degree))?;
    let spec = DomainSpec::from_json(&read(&args.domain)?, ctx)?;
    let mu = spec.moments(args.degree, ctx, global.quad_nodes)?;
    write(&args.out, &write_moments_csv(&mu))?;
    println!("area = {}", format_real(&mu.entry(0, 0)?.re, 40));
    Ok(Status::Ok)
}

pub fn reconstruct(global: &GlobalArgs, args: &ReconstructArgs) -> Result<Status> {
    let text = read(&args.moments)?;
    let ctx = context(global, header_precision(&text).unwrap_or(PrecisionContext::VALIDATION.bits()))?;
    let mu = read_moments_csv(&text, ctx)?;
    let m = args.m.unwrap_or_else(|| default_order(args.n));
    let reference = match &args.reference {
        Some(path) => Some(
            DomainSpec::from_json(&read(path)?, ctx)?
                .reference_map(ctx, m.max(10))
                .ok_or_else(|| Error::InvalidDomain("reference domain has no known exterior map".into()))?,
        ),
        None => None,
    };
    let report = ReconstructionReport::run(
        &mu,
        args.n,
        m,
        args.samples,
        reference.as_ref(),
        options(global),
        indexing(global, DiagonalIndexing::ZeroBased)?,
    )?;

    fs::create_dir_all(&args.out_dir)?;
    write(&args.out_dir.join("laurent.json"), &laurent_to_json(&report.laurent))?;
    write(&args.out_dir.join("curve.csv"), &write_curve_csv(&report.curve))?;
    let summary = ReportJson {
        domain: args.moments.display().to_string(),
        n: report.n,
        m: report.m,
        precision_bits: ctx.bits(),
        area: mu.area(),
        capacity: format_real(report.laurent.b(), 40),
        capacity_imag_residue: report.laurent.b_imag_residue(),
        sup_error: report.sup_error,
        curve_samples: report.curve.len(),
    };
    write(&args.out_dir.join("report.json"), &(serde_json::to_string_pretty(&summary)? + "\n"))?;
    if let Some(svg) = &global.svg {
        let estimate: Vec<(f64, f64)> = report.curve.iter().map(|s| s.point.to_f64()).collect();
        let exact = reference.as_ref().map(|r| points(r, args.samples)).transpose()?;
        write(svg, &overlay_svg(&estimate, exact.as_deref()))?;
    }

    println!("b = {:.12}", report.laurent.b().to_f64());
    if let Some(e) = report.sup_error {
        println!("sup_error = {e:.3e}");
    }
    Ok(Status::Ok)
}

pub fn validate(global: &GlobalArgs, args: &ValidateArgs) -> Result<Status> {
    let domain = NamedDomain::parse(&args.domain, None)?;
    let triangle = domain == NamedDomain::EquilateralTriangle;
    let n0 = args.n.unwrap_or(if triangle { 100 } else { 20 });
    let rows = args.rows.unwrap_or(if triangle { 11 } else { 1 });
    if rows == 0 || args.step == 0 {
        return Err(Error::InvalidParameter("rows and step must be positive".into()));
    }
    let n_list: Vec<usize> = (0..rows).map(|i| n0 + i * args.step).collect();
    let max_n = *n_list.last().expect("nonempty");
    let fallback_bits = if triangle { 212.max(2 * max_n as u32) } else { 113 };
    let ctx = context(global, fallback_bits)?;
    let index = indexing(global, if triangle { DiagonalIndexing::OneBased } else { DiagonalIndexing::ZeroBased })?;

    let reference = domain.reference_map(ctx, args.k.max(max_n / 2).max(10));
    let mu = domain.spec().moments(max_n + 1, ctx, global.quad_nodes)?;
    let (_, h) = arnoldi_orthonormalize_with(&mu, index.column(max_n)?, options(global))?;
    let table = rate_table_from_hessenberg(&h, Some(&reference), &n_list, args.k, index)?;
    let csv = write_table_csv(&table, args.k);
    match &args.out {
        Some(path) => write(path, &csv)?,
        None => print!("{csv}"),
    }

    let mut all_ok = true;
    let mut report = |label: String, ok: bool, detail: String| {
        all_ok &= ok;
        println!("{} {label}: {detail}", verdict(ok));
    };

    if triangle {
        for (coefficient, name) in [(false, "b"), (true, "b2")] {
            for c in check_rows(&table, coefficient, TableTolerance::default()) {
                let detail = format!(
                    "estimate {:.9} (published {:.9}), error {:.3e} ({:.2e}), exponent {} ({})",
                    c.computed.0,
                    c.published.0,
                    c.computed.1,
                    c.published.1,
                    c.computed.2.map_or("-".into(), |s| format!("{s:.4}")),
                    c.published.2.map_or("-".into(), |s| format!("{s:.4}")),
                );
                report(format!("{name} n={}", c.n), c.passed(), detail);
            }
        }
        let errors: Vec<f64> = table.iter().filter_map(|r| r.capacity_error).map(f64::abs).collect();
        let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
        report("capacity error decreasing".into(), decreasing, format!("{} rows", errors.len()));
    }

    for &n in &n_list {
        let m = default_order(n);
        let map = reconstruct_from_hessenberg(&h, n, m, index)?;
        match domain {
            NamedDomain::UnitDisk => {
                let cap = (map.b().to_f64() - 1.0).abs();
                let worst = map.coeffs().iter().map(|c| c.abs_f64()).fold(0.0, f64::max);
                let ok = cap <= DISK_TOLERANCE && worst <= DISK_TOLERANCE;
                report(format!("n={n} m={m} coefficients"), ok, format!("|b-1| = {cap:.1e}, max |b_k| = {worst:.1e}"));
            }
            _ => {
                let d = sup_distance(&reference, &map, 720)?;
                report(format!("n={n} m={m} sup distance"), d <= SUP_TOLERANCE, format!("{d:.3e}"));
            }
        }
        if n == max_n {
            if let Some(svg) = &global.svg {
                let exact = points(&reference, 720)?;
                write(svg, &overlay_svg(&points(&map, 720)?, Some(&exact)))?;
            }
        }
    }

    Ok(if all_ok { Status::Ok } else { Status::ValidationFailed })
}

pub fn spectra(global: &GlobalArgs, args: &SpectraArgs) -> Result<Status> {
    let n = args.n;
    let (h, polynomial) = if let Some(path) = &args.hessenberg {
        let h = read_hessenberg_csv(&read(path)?)?;
        let h = match global.precision {
            Some(bits) => rebuild(&h, PrecisionContext::new(bits)?),
            None => h,
        };
        let p = if args.compare { Some(recurrence_polynomial(&h, n)?) } else { None };
        (h, p)
    } else if let Some(path) = &args.laurent {
        let ctx = context(global, 113)?;
        let map = laurent_from_json(&read(path)?, ctx)?;
        let p = if args.compare { faber_second_kind(&map, n).polys.pop() } else { None };
        (toeplitz_matrix(&map, n), p)
    } else if let Some(path) = &args.domain {
        let ctx = context(global, 113)?;
        let mu = DomainSpec::from_json(&read(path)?, ctx)?.moments(n + 1, ctx, global.quad_nodes)?;
        let (basis, h) = arnoldi_orthonormalize_with(&mu, n, options(global))?;
        (h, Some(basis.poly(n).clone()))
    } else {
        return Err(Error::InvalidParameter("one of --hessenberg, --laurent or --domain is required".into()));
    };

    let spectrum = hessenberg_eigenvalues(&h, n)?;
    let csv = write_spectrum_csv(&spectrum);
    match &args.out {
        Some(path) => write(path, &csv)?,
        None => print!("{csv}"),
    }
    if !args.compare {
        return Ok(Status::Ok);
    }
    let p = polynomial.ok_or_else(|| Error::InvalidParameter(format!("no polynomial of degree {n} available")))?;
    let zeros = polynomial_zeros_oracle(&p)?;
    let d = matched_distance(&spectrum.values, &zeros.values)
        .ok_or_else(|| Error::InvalidParameter("eigenvalue and zero counts differ".into()))?;
    let ok = d <= COMPARE_TOLERANCE;
    println!("max_pairing_distance = {d:.3e}");
    println!("{} eigenvalues vs zeros at {COMPARE_TOLERANCE:e}", verdict(ok));
    Ok(if ok { Status::Ok } else { Status::ValidationFailed })
}

fn rebuild(h: &bergshape_core::HessenbergMatrix, ctx: PrecisionContext) -> bergshape_core::HessenbergMatrix {
    let columns = (0..h.order()).map(|j| h.column(j).iter().map(|z| z.with_prec(ctx)).collect()).collect();
    bergshape_core::HessenbergMatrix::from_columns(columns, ctx)
}
