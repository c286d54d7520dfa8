//! Text formats: moment, Hessenberg, spectrum, curve and table CSVs, and the
//! Laurent-map and report JSON documents.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::arnoldi::HessenbergMatrix;
use crate::domain::Pair;
use crate::error::{Error, Result};
use crate::faber::LaurentMap;
use crate::moments::MomentMatrix;
use crate::precision::PrecisionContext;
use crate::reconstruction::{CurveSample, RateRow};
use crate::scalar::{format_real, Complex};
use crate::spectra::Spectrum;

/// Significant digits written for a value of `bits` precision: at least 40,
/// and enough to round-trip at higher precision.
pub fn interchange_digits(bits: u32) -> usize {
    let exact = (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1;
    exact.max(40)
}

fn fmt_r(x: &crate::scalar::Real) -> String {
    format_real(x, interchange_digits(x.prec()))
}

fn fmt_c(z: &Complex) -> (String, String) {
    (fmt_r(&z.re), fmt_r(&z.im))
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn header_value<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().filter_map(|l| l.trim().strip_prefix('#')).find_map(|l| {
        let (k, v) = l.trim().split_once('=')?;
        (k.trim() == key).then(|| v.trim())
    })
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

fn fields<const N: usize>(line: usize, l: &str) -> Result<[&str; N]> {
    let parts: Vec<&str> = l.split(',').map(str::trim).collect();
    parts.try_into().map_err(|p: Vec<&str>| parse_err(line, format!("expected {N} fields, found {}", p.len())))
}

fn index(line: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| parse_err(line, format!("bad index {s:?}")))
}

/// Rows `k,j,re,im` for `k ≤ j`.
pub fn write_moments_csv(mu: &MomentMatrix) -> String {
    let mut out = format!("# degree={}\n# precision_bits={}\nk,j,re,im\n", mu.degree(), mu.ctx().bits());
    for k in 0..=mu.degree() {
        for j in k..=mu.degree() {
            let (re, im) = fmt_c(mu.get(k, j).expect("in range"));
            writeln!(out, "{k},{j},{re},{im}").expect("string write");
        }
    }
    out
}

/// The `# precision_bits=` header of a moment or Hessenberg file, if present.
pub fn header_precision(text: &str) -> Option<u32> {
    header_value(text, "precision_bits")?.parse().ok()
}

/// Reads `k,j,re,im` rows; missing `(j,k)` entries are filled by conjugation.
pub fn read_moments_csv(text: &str, ctx: PrecisionContext) -> Result<MomentMatrix> {
    let mut rows = Vec::new();
    for (line, l) in data_lines(text) {
        if l.starts_with('k') {
            continue;
        }
        let [k, j, re, im] = fields::<4>(line, l)?;
        let z = Complex::parse(ctx, re, im).map_err(|e| parse_err(line, e))?;
        rows.push((index(line, k)?, index(line, j)?, z));
    }
    let degree = rows.iter().map(|(k, j, _)| (*k).max(*j)).max().ok_or_else(|| Error::Parse("no moment rows".into()))?;
    let side = degree + 1;
    let mut entries: Vec<Option<Complex>> = vec![None; side * side];
    for (k, j, z) in rows {
        if entries[k * side + j].is_none() {
            entries[j * side + k].get_or_insert_with(|| z.conj());
        }
        entries[k * side + j] = Some(z);
    }
    let entries = entries
        .into_iter()
        .enumerate()
        .map(|(i, z)| z.ok_or_else(|| Error::Parse(format!("missing moment ({}, {})", i / side, i % side))))
        .collect::<Result<Vec<_>>>()?;
    MomentMatrix::from_entries(degree, ctx, entries)
}

/// Structural nonzeros `row,col,re,im` with `# order=` and
/// `# precision_bits=` headers.
pub fn write_hessenberg_csv(h: &HessenbergMatrix) -> String {
    let mut out = format!("# order={}\n# precision_bits={}\nrow,col,re,im\n", h.order(), h.ctx().bits());
    for (k, j, z) in h.entries() {
        let (re, im) = fmt_c(z);
        writeln!(out, "{k},{j},{re},{im}").expect("string write");
    }
    out
}

pub fn read_hessenberg_csv(text: &str) -> Result<HessenbergMatrix> {
    let order: usize = header_value(text, "order")
        .ok_or_else(|| Error::Parse("missing '# order=' header".into()))?
        .parse()
        .map_err(|_| Error::Parse("bad order header".into()))?;
    let bits: u32 = header_value(text, "precision_bits")
        .ok_or_else(|| Error::Parse("missing '# precision_bits=' header".into()))?
        .parse()
        .map_err(|_| Error::Parse("bad precision_bits header".into()))?;
    let ctx = PrecisionContext::new(bits)?;
    let mut columns: Vec<Vec<Option<Complex>>> = (0..order).map(|j| vec![None; j + 2]).collect();
    for (line, l) in data_lines(text) {
        if l.starts_with("row") {
            continue;
        }
        let [k, j, re, im] = fields::<4>(line, l)?;
        let (k, j) = (index(line, k)?, index(line, j)?);
        if j >= order || k > j + 1 {
            return Err(parse_err(line, format!("entry ({k}, {j}) outside a Hessenberg matrix of order {order}")));
        }
        columns[j][k] = Some(Complex::parse(ctx, re, im).map_err(|e| parse_err(line, e))?);
    }
    let columns = columns
        .into_iter()
        .enumerate()
        .map(|(j, col)| {
            col.into_iter()
                .enumerate()
                .map(|(k, z)| z.ok_or_else(|| Error::Parse(format!("missing entry ({k}, {j})"))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HessenbergMatrix::from_columns(columns, ctx))
}

/// `index,re,im` with a `# residual=` header.
pub fn write_spectrum_csv(spectrum: &Spectrum) -> String {
    let mut out = format!("# residual={:e}\nindex,re,im\n", spectrum.residual);
    for (i, z) in spectrum.values.iter().enumerate() {
        let (re, im) = fmt_c(z);
        writeln!(out, "{i},{re},{im}").expect("string write");
    }
    out
}

/// `theta,re,im`.
pub fn write_curve_csv(curve: &[CurveSample]) -> String {
    let mut out = String::from("theta,re,im\n");
    for s in curve {
        let (re, im) = s.point.to_f64();
        writeln!(out, "{:.17e},{:.17e},{:.17e}", s.theta, re, im).expect("string write");
    }
    out
}

fn sci3(x: f64) -> String {
    format!("{x:.2e}")
}

/// Real part alone when the imaginary part is negligible, otherwise
/// `re±im i`.
fn format_table_complex(z: &Complex, re_fmt: impl Fn(f64) -> String, im_fmt: impl Fn(f64) -> String) -> String {
    let (re, im) = z.to_f64();
    let floor = 2f64.powi(-(z.prec() as i32) / 4).min(1e-12) * re.abs().max(1.0);
    if im.abs() <= floor {
        re_fmt(re)
    } else {
        format!("{}{}i", re_fmt(re), im_fmt(im))
    }
}

fn opt<T>(x: Option<T>, f: impl Fn(T) -> String) -> String {
    x.map(f).unwrap_or_default()
}

/// Convergence table: 9 decimals for estimates, 3 significant digits for
/// errors, 4 decimals for exponents. Undefined entries are left empty.
pub fn write_table_csv(rows: &[RateRow], k: usize) -> String {
    let mut out = format!("n,b_n,t_n,s_n,b{k}_n,t{k}_n,s{k}_n\n");
    for r in rows {
        let coeff = format_table_complex(&r.coefficient, |x| format!("{x:.9}"), |x| format!("{x:+.9}"));
        let t_k = r.coefficient_error.as_ref().map(|e| format_table_complex(e, sci3, |x| format!("{}{}", if x < 0.0 { "" } else { "+" }, sci3(x))));
        writeln!(
            out,
            "{},{:.9},{},{},{},{},{}",
            r.n,
            r.capacity.re.to_f64(),
            opt(r.capacity_error, sci3),
            opt(r.capacity_rate, |s| format!("{s:.4}")),
            coeff,
            t_k.unwrap_or_default(),
            opt(r.coefficient_rate, |s| format!("{s:.4}")),
        )
        .expect("string write");
    }
    out
}

#[derive(Serialize, Deserialize)]
struct LaurentJson {
    b: String,
    coeffs: Vec<(String, String)>,
    order: usize,
}

/// `{"b": "...", "coeffs": [[re, im], ...], "order": m}` with decimal strings.
pub fn laurent_to_json(map: &LaurentMap) -> String {
    let doc = LaurentJson {
        b: fmt_r(map.b()),
        coeffs: map.coeffs().iter().map(fmt_c).collect(),
        order: map.order(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn laurent_from_json(text: &str, ctx: PrecisionContext) -> Result<LaurentMap> {
    #[derive(Deserialize)]
    struct Raw {
        b: crate::domain::Decimal,
        coeffs: Vec<Pair>,
        order: Option<usize>,
    }
    let raw: Raw = serde_json::from_str(text)?;
    let coeffs = raw.coeffs.iter().map(|p| p.to_complex(ctx)).collect::<Result<Vec<_>>>()?;
    if let Some(order) = raw.order {
        if order + 1 != coeffs.len() && !(order == 0 && coeffs.is_empty()) {
            return Err(Error::Parse(format!("order {order} does not match {} coefficients", coeffs.len())));
        }
    }
    LaurentMap::new(raw.b.to_real(ctx)?, coeffs)
}

/// Summary written next to the CSV outputs of a reconstruction run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportJson {
    pub domain: String,
    pub n: usize,
    pub m: usize,
    pub precision_bits: u32,
    pub area: f64,
    pub capacity: String,
    pub capacity_imag_residue: f64,
    pub sup_error: Option<f64>,
    pub curve_samples: usize,
}
