//! Test domains and their JSON description.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::faber::{triangle_coefficients, LaurentMap};
use crate::moments::{default_nodes, parametric_moments, polygon_moments, BoundaryCurve, GradedPolygon, MomentMatrix};
use crate::precision::PrecisionContext;
use crate::scalar::{real, Complex};

/// Reference shapes with known exterior maps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NamedDomain {
    UnitDisk,
    /// Semiaxes `a ≥ b > 0` along the real and imaginary axes.
    Ellipse { a: f64, b: f64 },
    /// Vertices `1, e^{2πi/3}, e^{4πi/3}`.
    EquilateralTriangle,
    /// `Ψ(w) = w + 1/(2w²)`.
    Hypocycloid3,
}

impl NamedDomain {
    /// Accepts `unit-disk`, `ellipse`, `ellipse(a,b)`, `equilateral-triangle`,
    /// `hypocycloid-3` and the short forms `disk`, `triangle`, `hypocycloid`.
    pub fn parse(name: &str, semiaxes: Option<(f64, f64)>) -> Result<Self> {
        let name = name.trim().to_ascii_lowercase();
        let named = match name.as_str() {
            "unit-disk" | "disk" => NamedDomain::UnitDisk,
            "equilateral-triangle" | "triangle" => NamedDomain::EquilateralTriangle,
            "hypocycloid-3" | "hypocycloid" => NamedDomain::Hypocycloid3,
            "ellipse" => {
                let (a, b) = semiaxes.unwrap_or((1.25, 1.0));
                NamedDomain::Ellipse { a, b }
            }
            other => {
                let inner = other
                    .strip_prefix("ellipse(")
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| Error::InvalidDomain(format!("unknown domain name {name:?}")))?;
                let parts: Vec<f64> = inner
                    .split(',')
                    .map(|p| p.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Error::InvalidDomain(format!("bad ellipse semiaxes {inner:?}: {e}")))?;
                match parts[..] {
                    [a, b] => NamedDomain::Ellipse { a, b },
                    _ => return Err(Error::InvalidDomain(format!("ellipse needs two semiaxes, got {inner:?}"))),
                }
            }
        };
        named.validate()?;
        Ok(named)
    }

    pub fn validate(&self) -> Result<()> {
        if let NamedDomain::Ellipse { a, b } = *self {
            if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
                return Err(Error::InvalidDomain(format!("ellipse semiaxes must be positive, got ({a}, {b})")));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> String {
        match self {
            NamedDomain::UnitDisk => "unit-disk".into(),
            NamedDomain::Ellipse { a, b } => format!("ellipse({a},{b})"),
            NamedDomain::EquilateralTriangle => "equilateral-triangle".into(),
            NamedDomain::Hypocycloid3 => "hypocycloid-3".into(),
        }
    }

    pub fn triangle_vertices(ctx: PrecisionContext) -> Vec<Complex> {
        let third = crate::scalar::pi(ctx) * 2u32 / 3u32;
        (0..3u32)
            .map(|k| Complex::cis(&rug::Float::with_val(ctx.bits(), &third * k)))
            .collect()
    }

    pub fn spec(&self) -> DomainSpec {
        DomainSpec::Named(*self)
    }

    /// Moments with the default quadrature density.
    pub fn moments(&self, degree: usize, ctx: PrecisionContext) -> Result<MomentMatrix> {
        self.spec().moments(degree, ctx, None)
    }

    /// Exact exterior map. The triangle's series is infinite and is cut at
    /// `triangle_order`.
    pub fn reference_map(&self, ctx: PrecisionContext, triangle_order: usize) -> LaurentMap {
        match *self {
            NamedDomain::UnitDisk => LaurentMap::identity(ctx),
            NamedDomain::Ellipse { a, b } => LaurentMap::ellipse(real(ctx, a), real(ctx, b)),
            NamedDomain::EquilateralTriangle => triangle_coefficients(triangle_order, ctx),
            NamedDomain::Hypocycloid3 => LaurentMap::hypocycloid3(ctx),
        }
    }
}

/// A bounded Jordan domain given by a polygon, an exterior Laurent map, or a
/// reference name.
#[derive(Clone, Debug)]
pub enum DomainSpec {
    Polygon { vertices: Vec<Complex> },
    Laurent(LaurentMap),
    Named(NamedDomain),
}

impl DomainSpec {
    pub fn polygon_f64(vertices: &[(f64, f64)]) -> Self {
        let ctx = PrecisionContext::new(256).expect("valid precision");
        DomainSpec::Polygon {
            vertices: vertices.iter().map(|&(x, y)| Complex::from_f64(ctx, x, y)).collect(),
        }
    }

    /// Exact moments for polygons (including the named triangle), trapezoid
    /// quadrature with `nodes` (default [`default_nodes`]) otherwise.
    pub fn moments(&self, degree: usize, ctx: PrecisionContext, nodes: Option<usize>) -> Result<MomentMatrix> {
        match self {
            DomainSpec::Polygon { vertices } => polygon_moments(vertices, degree, ctx),
            DomainSpec::Named(NamedDomain::EquilateralTriangle) => {
                polygon_moments(&NamedDomain::triangle_vertices(ctx), degree, ctx)
            }
            _ => parametric_moments(self, degree, nodes.unwrap_or_else(|| default_nodes(degree)), ctx),
        }
    }

    pub fn boundary_curve(&self, ctx: PrecisionContext) -> Result<Box<dyn BoundaryCurve>> {
        Ok(match self {
            DomainSpec::Polygon { vertices } => {
                Box::new(GradedPolygon::new(vertices.iter().map(|v| v.with_prec(ctx)).collect())?)
            }
            DomainSpec::Laurent(map) => Box::new(map.with_prec(ctx)),
            DomainSpec::Named(NamedDomain::EquilateralTriangle) => {
                Box::new(GradedPolygon::new(NamedDomain::triangle_vertices(ctx))?)
            }
            DomainSpec::Named(named) => {
                named.validate()?;
                Box::new(named.reference_map(ctx, 0))
            }
        })
    }

    /// Exterior map when it is known exactly.
    pub fn reference_map(&self, ctx: PrecisionContext, triangle_order: usize) -> Option<LaurentMap> {
        match self {
            DomainSpec::Polygon { .. } => None,
            DomainSpec::Laurent(map) => Some(map.with_prec(ctx)),
            DomainSpec::Named(named) => Some(named.reference_map(ctx, triangle_order)),
        }
    }

    /// Parses the JSON domain description
    /// `{"type": "polygon"|"laurent"|"named", "vertices", "b", "coeffs", "name"}`.
    pub fn from_json(text: &str, ctx: PrecisionContext) -> Result<Self> {
        let raw: RawDomain = serde_json::from_str(text)?;
        match raw.kind.as_str() {
            "polygon" => {
                let vertices = raw
                    .vertices
                    .ok_or_else(|| Error::InvalidPolygon("missing \"vertices\"".into()))?
                    .iter()
                    .map(|p| p.to_complex(ctx))
                    .collect::<Result<Vec<_>>>()?;
                crate::moments::validate_polygon(&vertices)?;
                Ok(DomainSpec::Polygon { vertices })
            }
            "laurent" => {
                let b = raw.b.ok_or_else(|| Error::InvalidDomain("missing \"b\"".into()))?.to_real(ctx)?;
                let coeffs = raw
                    .coeffs
                    .unwrap_or_default()
                    .iter()
                    .map(|p| p.to_complex(ctx))
                    .collect::<Result<Vec<_>>>()?;
                Ok(DomainSpec::Laurent(LaurentMap::new(b, coeffs)?))
            }
            "named" => {
                let name = raw.name.ok_or_else(|| Error::InvalidDomain("missing \"name\"".into()))?;
                let semiaxes = raw.semiaxes.map(|[a, b]| (a, b));
                Ok(DomainSpec::Named(NamedDomain::parse(&name, semiaxes)?))
            }
            other => Err(Error::InvalidDomain(format!("unknown domain type {other:?}"))),
        }
    }
}

/// A JSON number or a decimal string (for values beyond f64 precision).
#[derive(Deserialize, Clone, Debug)]
#[serde(untagged)]
pub(crate) enum Decimal {
    Number(f64),
    Text(String),
}

impl Decimal {
    pub(crate) fn to_real(&self, ctx: PrecisionContext) -> Result<crate::scalar::Real> {
        match self {
            Decimal::Number(x) => Ok(real(ctx, *x)),
            Decimal::Text(s) => crate::scalar::parse_real(ctx, s),
        }
    }
}

#[derive(Deserialize, Clone, Debug)]
pub(crate) struct Pair(pub Decimal, pub Decimal);

impl Pair {
    pub(crate) fn to_complex(&self, ctx: PrecisionContext) -> Result<Complex> {
        Ok(Complex::new(self.0.to_real(ctx)?, self.1.to_real(ctx)?))
    }
}

#[derive(Deserialize)]
struct RawDomain {
    #[serde(rename = "type")]
    kind: String,
    vertices: Option<Vec<Pair>>,
    b: Option<Decimal>,
    coeffs: Option<Vec<Pair>>,
    name: Option<String>,
    semiaxes: Option<[f64; 2]>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_variant() {
        let ctx = PrecisionContext::DOUBLE;
        let p = DomainSpec::from_json(r#"{"type":"polygon","vertices":[[1,-1],[1,1],[-1,1],[-1,-1]]}"#, ctx).unwrap();
        assert!(matches!(p, DomainSpec::Polygon { ref vertices } if vertices.len() == 4));
        let l = DomainSpec::from_json(r#"{"type":"laurent","b":"1","coeffs":[[0,0],[0,0],["0.5",0]]}"#, ctx).unwrap();
        assert!(matches!(l, DomainSpec::Laurent(ref m) if m.order() == 2));
        let n = DomainSpec::from_json(r#"{"type":"named","name":"ellipse(1.25, 1.0)"}"#, ctx).unwrap();
        assert!(matches!(n, DomainSpec::Named(NamedDomain::Ellipse { a, b }) if a == 1.25 && b == 1.0));
    }

    #[test]
    fn rejects_bad_input() {
        let ctx = PrecisionContext::DOUBLE;
        let two = DomainSpec::from_json(r#"{"type":"polygon","vertices":[[0,0],[1,0]]}"#, ctx);
        assert!(matches!(two, Err(Error::InvalidPolygon(_))));
        let cw = DomainSpec::from_json(r#"{"type":"polygon","vertices":[[0,0],[0,1],[1,0]]}"#, ctx);
        assert!(matches!(cw, Err(Error::InvalidPolygon(_))));
        let bowtie = DomainSpec::from_json(r#"{"type":"polygon","vertices":[[0,0],[1,1],[1,0],[0,1]]}"#, ctx);
        assert!(matches!(bowtie, Err(Error::InvalidPolygon(_))));
        assert!(NamedDomain::parse("ellipse(1,-2)", None).is_err());
        assert!(NamedDomain::parse("pentagon", None).is_err());
        assert!(DomainSpec::from_json(r#"{"type":"laurent","b":-1}"#, ctx).is_err());
    }
}
