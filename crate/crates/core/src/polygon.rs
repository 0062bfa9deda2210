//! Newton and Hodge polygons with exact rational ordinates.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::strata::{y_n, StratumParams};

/// A lower-convex polygon starting at `(0, 0)`; only hull vertices are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    vertices: Vec<(i64, BigRational)>,
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl NewtonPolygon {
    pub fn vertices(&self) -> &[(i64, BigRational)] {
        &self.vertices
    }

    pub fn endpoint(&self) -> &(i64, BigRational) {
        self.vertices
            .last()
            .expect("polygon has at least one vertex")
    }

    pub fn width(&self) -> i64 {
        self.endpoint().0
    }

    /// Segments as `(slope, horizontal length)`, slopes strictly increasing.
    pub fn slopes(&self) -> Vec<(BigRational, i64)> {
        self.vertices
            .windows(2)
            .map(|w| {
                let len = w[1].0 - w[0].0;
                ((&w[1].1 - &w[0].1) / BigInt::from(len), len)
            })
            .collect()
    }

    /// Ordinate at integer abscissa `x` in `0..=width`.
    pub fn ordinate_at(&self, x: i64) -> BigRational {
        for w in self.vertices.windows(2) {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            if x >= *x0 && x <= *x1 {
                return y0 + (y1 - y0) * rat(x - x0, x1 - x0);
            }
        }
        assert_eq!(x, self.vertices[0].0, "x outside polygon range");
        self.vertices[0].1.clone()
    }

    /// Multiset of slopes expanded to unit lengths, useful for comparisons.
    pub fn slope_sequence(&self) -> Vec<BigRational> {
        self.slopes()
            .into_iter()
            .flat_map(|(s, l)| std::iter::repeat_n(s, l as usize))
            .collect()
    }

    /// One `x<TAB>num/den` line per vertex.
    pub fn to_tsv(&self) -> String {
        self.vertices
            .iter()
            .map(|(x, y)| format!("{x}\t{}/{}\n", y.numer(), y.denom()))
            .collect()
    }

    /// Vertices as `(x, "y")` pairs for serialization; `y` is `"n"` or `"n/m"` in lowest terms.
    pub fn to_pairs(&self) -> Vec<(i64, String)> {
        self.vertices
            .iter()
            .map(|(x, y)| (*x, y.to_string()))
            .collect()
    }
}

impl Serialize for NewtonPolygon {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(serializer)
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vertices
            .iter()
            .map(|(x, y)| format!("({x},{y})"))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Lower convex hull of points `(x, y)`, where `y = None` stands for `+inf`
/// (a vanishing coefficient) and such points are skipped.
///
/// The points must have distinct abscissae, include `(0, 0)`, and the point with
/// the largest abscissa must be finite.
pub fn lower_convex_hull(points: &[(i64, Option<BigRational>)]) -> Result<NewtonPolygon> {
    let mut pts: Vec<(i64, Option<BigRational>)> = points.to_vec();
    pts.sort_by_key(|(x, _)| *x);
    if pts.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::HullInput("duplicate abscissa".into()));
    }
    match pts.first() {
        Some((0, Some(y))) if y.is_zero() => {}
        _ => return Err(Error::HullInput("the point (0, 0) is required".into())),
    }
    let last = pts.last().unwrap();
    if last.1.is_none() {
        return Err(Error::InfiniteEndpoint(last.0));
    }
    let mut hull: Vec<(i64, BigRational)> = Vec::new();
    for (x, y) in pts.into_iter().filter_map(|(x, y)| y.map(|y| (x, y))) {
        while hull.len() >= 2 {
            let (x1, y1) = &hull[hull.len() - 2];
            let (x2, y2) = &hull[hull.len() - 1];
            // drop the middle point unless slope(1,2) < slope(2,new)
            let lhs = (y2 - y1) * BigInt::from(x - x2);
            let rhs = (&y - y2) * BigInt::from(x2 - x1);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }
    Ok(NewtonPolygon { vertices: hull })
}

/// Vertices `(n, n(n+1)/(2d))` for `0 <= n <= d-1`.
pub fn hodge_polygon(d: usize) -> Result<NewtonPolygon> {
    if d < 2 {
        return Err(Error::Invalid(format!("degree {d} must be at least 2")));
    }
    let pts: Vec<_> = (0..d as i64)
        .map(|n| (n, Some(rat(n * (n + 1), 2 * d as i64))))
        .collect();
    lower_convex_hull(&pts)
}

/// Lower convex hull of `(n, Y_n / (p - 1))`, `0 <= n <= d-1`; requires `p >= 3d`.
pub fn generic_polygon(params: &StratumParams) -> Result<NewtonPolygon> {
    params.require_theorem_tier()?;
    generic_polygon_unchecked(params)
}

/// Same hull without the tier check, for exploring small primes.
pub fn generic_polygon_unchecked(params: &StratumParams) -> Result<NewtonPolygon> {
    let pm1 = params.p() as i64 - 1;
    let pts = (0..params.d())
        .map(|n| Ok((n as i64, Some(rat(y_n(params, n)? as i64, pm1)))))
        .collect::<Result<Vec<_>>>()?;
    lower_convex_hull(&pts)
}

/// True when `a` is on or above `b` at every integer abscissa.
pub fn lies_above(a: &NewtonPolygon, b: &NewtonPolygon) -> Result<bool> {
    if a.width() != b.width() {
        return Err(Error::RangeMismatch(a.width(), b.width()));
    }
    Ok((0..=a.width()).all(|x| a.ordinate_at(x) >= b.ordinate_at(x)))
}

/// Each slope `s` of length `l` is matched by a slope `1 - s` of length `l`.
pub fn is_symmetric(a: &NewtonPolygon) -> bool {
    let slopes = a.slopes();
    let one = BigRational::one();
    slopes
        .iter()
        .all(|(s, l)| slopes.iter().any(|(t, m)| m == l && *t == &one - s))
}

/// Endpoint `(d - 1, (d - 1) / 2)` forced by weight one.
pub fn has_weight_one_endpoint(a: &NewtonPolygon, d: usize) -> bool {
    let (x, y) = a.endpoint();
    *x == d as i64 - 1 && *y == rat(d as i64 - 1, 2)
}

/// Static SVG overlay of several labelled polygons.
pub fn render_svg(polygons: &[(&str, &NewtonPolygon)]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const PAD: f64 = 48.0;
    const COLORS: [&str; 6] = [
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
    ];
    let to_f = |r: &BigRational| -> f64 {
        let n: f64 = r.numer().to_string().parse().unwrap_or(0.0);
        let d: f64 = r.denom().to_string().parse().unwrap_or(1.0);
        n / d
    };
    let max_x = polygons
        .iter()
        .map(|(_, p)| p.width())
        .max()
        .unwrap_or(1)
        .max(1) as f64;
    let max_y = polygons
        .iter()
        .flat_map(|(_, p)| p.vertices().iter().map(|(_, y)| to_f(y)))
        .fold(0.0f64, f64::max)
        .max(1e-9);
    let sx = |x: f64| PAD + x / max_x * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - y / max_y * (H - 2.0 * PAD);
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    );
    out += &format!(
        "<line x1=\"{PAD}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n<line x1=\"{PAD}\" y1=\"{PAD}\" x2=\"{PAD}\" y2=\"{y0}\" stroke=\"black\"/>\n",
        y0 = H - PAD,
        x1 = W - PAD
    );
    for (i, (label, poly)) in polygons.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = poly
            .vertices()
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", sx(*x as f64), sy(to_f(y))))
            .collect();
        out += &format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>\n",
            pts.join(" ")
        );
        out += &format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" fill=\"{color}\" font-size=\"12\">{}</text>\n",
            PAD + 8.0,
            PAD + 16.0 * (i as f64 + 1.0),
            escape_xml(label)
        );
    }
    out += "</svg>\n";
    out
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
