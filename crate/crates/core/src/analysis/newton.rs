use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{drifted_valuation, Extended, Split};
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::hyper::{CoefficientValuations, HypergeometricParameters};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Terminal {
    Finite,
    /// Infinite edge of the given slope leaving the last vertex.
    Ray(Rational),
}

/// Lower convex hull of the points `(k, val_p(c_k))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    vertices: Vec<(u64, Rational)>,
    terminal: Terminal,
    points: Vec<(u64, Rational)>,
}

/// `{vertices: [[k, "v"], ...], ray: "slope" | null}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonJson {
    pub vertices: Vec<(u64, String)>,
    pub ray: Option<String>,
}

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Monotone chain; keeps only vertices where the slope strictly increases.
fn lower_hull(points: &[(u64, Rational)]) -> Vec<(u64, Rational)> {
    let mut hull: Vec<(u64, Rational)> = Vec::new();
    for pt in points {
        while hull.len() >= 2 {
            let (k1, v1) = &hull[hull.len() - 2];
            let (k2, v2) = &hull[hull.len() - 1];
            // drop the middle point unless slope(1,2) < slope(2,pt)
            let lhs = (v2 - v1) * q((pt.0 - k2) as i64);
            let rhs = (&pt.1 - v2) * q((k2 - k1) as i64);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt.clone());
    }
    hull
}

impl NewtonPolygon {
    pub fn from_points(points: Vec<(u64, Rational)>, terminal: Terminal) -> Self {
        let vertices = lower_hull(&points);
        NewtonPolygon {
            vertices,
            terminal,
            points,
        }
    }

    pub fn vertices(&self) -> &[(u64, Rational)] {
        &self.vertices
    }

    pub fn terminal(&self) -> &Terminal {
        &self.terminal
    }

    /// The points `(k, val_p(c_k))` the hull was built from.
    pub fn points(&self) -> &[(u64, Rational)] {
        &self.points
    }

    pub fn slopes(&self) -> Vec<Rational> {
        self.vertices
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / q((w[1].0 - w[0].0) as i64))
            .collect()
    }

    /// `min over vertices of (v - ν k)`.
    pub fn support(&self, nu: &Rational) -> Rational {
        self.vertices
            .iter()
            .map(|(k, v)| v - nu * q(*k as i64))
            .min()
            .expect("nonempty")
    }

    pub fn to_json(&self) -> NewtonJson {
        NewtonJson {
            vertices: self
                .vertices
                .iter()
                .map(|(k, v)| (*k, v.to_string()))
                .collect(),
            ray: match &self.terminal {
                Terminal::Finite => None,
                Terminal::Ray(s) => Some(s.to_string()),
            },
        }
    }

    /// Self-contained SVG: axes, the computed points, the hull and a dashed
    /// terminal ray.
    pub fn to_svg(&self) -> String {
        let f = |r: &Rational| r.to_f64().unwrap_or(0.0);
        let kmax = self.points.iter().map(|p| p.0).max().unwrap_or(0) as f64 + 2.0;
        let ray_end = match &self.terminal {
            Terminal::Ray(s) => {
                let (k, v) = self.vertices.last().unwrap();
                Some((*k as f64 + 2.0, f(v) + 2.0 * f(s)))
            }
            Terminal::Finite => None,
        };
        let mut ys: Vec<f64> = self.points.iter().map(|p| f(&p.1)).collect();
        ys.push(0.0);
        if let Some((_, y)) = ray_end {
            ys.push(y);
        }
        let ymin = ys.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
        let ymax = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 1.0;
        let (w, h, pad) = (640.0, 480.0, 40.0);
        let sx = |x: f64| pad + (x + 0.5) / (kmax + 0.5) * (w - 2.0 * pad);
        let sy = |y: f64| h - pad - (y - ymin) / (ymax - ymin) * (h - 2.0 * pad);
        let mut out = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
        );
        out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        out += &format!(
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
            sx(-0.5),
            sy(0.0),
            sx(kmax),
            sy(0.0)
        );
        out += &format!(
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
            sx(0.0),
            sy(ymin),
            sx(0.0),
            sy(ymax)
        );
        for k in 1..=kmax as i64 {
            out += &format!(
                "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"middle\">{k}</text>\n",
                sx(k as f64),
                sy(0.0) + 14.0
            );
        }
        for y in ymin.ceil() as i64..=ymax.floor() as i64 {
            if y != 0 {
                out += &format!(
                    "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"end\">{y}</text>\n",
                    sx(0.0) - 6.0,
                    sy(y as f64) + 4.0
                );
            }
        }
        let pts: Vec<String> = self
            .vertices
            .iter()
            .map(|(k, v)| format!("{:.1},{:.1}", sx(*k as f64), sy(f(v))))
            .collect();
        out += &format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\"/>\n",
            pts.join(" ")
        );
        if let Some((x, y)) = ray_end {
            let (k, v) = self.vertices.last().unwrap();
            out += &format!(
                "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"steelblue\" stroke-width=\"2\" stroke-dasharray=\"6,4\"/>\n",
                sx(*k as f64),
                sy(f(v)),
                sx(x),
                sy(y)
            );
        }
        for (k, v) in &self.points {
            out += &format!(
                "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"3\" fill=\"gray\"/>\n",
                sx(*k as f64),
                sy(f(v))
            );
        }
        for (k, v) in &self.vertices {
            out += &format!(
                "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"5\" fill=\"crimson\"/>\n",
                sx(*k as f64),
                sy(f(v))
            );
        }
        out += "</svg>\n";
        out
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.terminal {
            Terminal::Finite => "Finite",
            Terminal::Ray(_) => "Infinite",
        };
        let n = self.vertices.len();
        let plural = if n == 1 { "vertex" } else { "vertices" };
        let vs: Vec<String> = self
            .vertices
            .iter()
            .map(|(k, v)| format!("({k}, {v})"))
            .collect();
        write!(
            f,
            "{kind} Newton polygon with {n} {plural}: {}",
            vs.join(", ")
        )?;
        if let Terminal::Ray(s) = &self.terminal {
            write!(f, " ending by an infinite line of slope {s}")?;
        }
        Ok(())
    }
}

/// Newton polygon of the series; non-terminating series need a truncation
/// slope `ν ≤ λ`, and then the polygon ends with a ray of slope `ν`.
pub fn newton_polygon(
    params: &HypergeometricParameters,
    p: u64,
    nu: Option<&Rational>,
) -> Result<NewtonPolygon> {
    let vals = CoefficientValuations::new(params, p);
    let point = |k: u64| vals.at(k).map(|v| (k, q(v)));
    if let Some(t) = params.terminating_degree() {
        let pts = (0..=t).filter_map(point).collect();
        return Ok(NewtonPolygon::from_points(pts, Terminal::Finite));
    }
    let lambda = Split::new(params, p).lambda;
    let Some(nu) = nu else {
        return Err(Error::InfiniteNewtonPolygon {
            bound: lambda.to_string(),
        });
    };
    if *nu > lambda {
        return Err(Error::InvalidArgument(format!(
            "truncation slope {nu} exceeds the log radius of convergence {lambda}"
        )));
    }
    let dv = drifted_valuation(params, p, nu)?;
    let (Extended::Finite(_), Some(last)) = (&dv.value, dv.position) else {
        return Err(Error::InfiniteNewtonPolygon {
            bound: lambda.to_string(),
        });
    };
    let pts: Vec<(u64, Rational)> = (0..=last).filter_map(point).collect();
    Ok(NewtonPolygon::from_points(pts, Terminal::Ray(nu.clone())))
}
