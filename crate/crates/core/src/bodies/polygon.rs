//! Convex polygons in the plane, stored both as a bounded halfspace
//! intersection and as a counterclockwise vertex list. Used for the
//! polytope body kind and for floating/surface body approximations.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Halfspace {
    /// Outward unit normal.
    pub normal: [f64; 2],
    /// Offset c in { x : <x, normal> <= c }.
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polygon2 {
    vertices: Vec<[f64; 2]>,
}

const MERGE_TOL: f64 = 1e-12;

pub fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Clips a convex polygon against { <x, n> <= c } (Sutherland-Hodgman with
/// a single plane). Returns the possibly empty clipped vertex list.
pub fn clip_polygon(vertices: &[[f64; 2]], normal: [f64; 2], offset: f64) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(vertices.len() + 1);
    let m = vertices.len();
    if m == 0 {
        return out;
    }
    for i in 0..m {
        let a = vertices[i];
        let b = vertices[(i + 1) % m];
        let da = dot(a, normal) - offset;
        let db = dot(b, normal) - offset;
        if da <= 0.0 {
            out.push(a);
        }
        if (da < 0.0 && db > 0.0) || (da > 0.0 && db <= 0.0) {
            let t = da / (da - db);
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    out
}

fn dedupe(vertices: Vec<[f64; 2]>, scale: f64) -> Vec<[f64; 2]> {
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(vertices.len());
    for v in vertices {
        if let Some(last) = out.last() {
            if (last[0] - v[0]).abs() <= MERGE_TOL * scale
                && (last[1] - v[1]).abs() <= MERGE_TOL * scale
            {
                continue;
            }
        }
        out.push(v);
    }
    while out.len() > 1 {
        let first = out[0];
        let last = *out.last().unwrap();
        if (first[0] - last[0]).abs() <= MERGE_TOL * scale
            && (first[1] - last[1]).abs() <= MERGE_TOL * scale
        {
            out.pop();
        } else {
            break;
        }
    }
    out
}

impl Polygon2 {
    pub fn from_vertices(vertices: Vec<[f64; 2]>) -> Result<Self> {
        let scale = vertices
            .iter()
            .map(|v| v[0].abs().max(v[1].abs()))
            .fold(1.0_f64, f64::max);
        let vertices = dedupe(vertices, scale);
        if vertices.len() < 3 {
            return Err(Error::Degenerate(format!(
                "polygon needs at least 3 distinct vertices, got {}",
                vertices.len()
            )));
        }
        let p = Polygon2 { vertices };
        if p.area() <= 0.0 {
            return Err(Error::InvalidBody(
                "polygon vertices are not in counterclockwise order".into(),
            ));
        }
        Ok(p)
    }

    /// Intersects the given halfspaces by incremental clipping, starting
    /// from a bounding box derived from the offsets. Fails if the result
    /// is unbounded, empty, or does not contain the origin.
    pub fn from_halfspaces(halfspaces: &[Halfspace]) -> Result<Self> {
        if halfspaces.len() < 3 {
            return Err(Error::InvalidBody(
                "need at least 3 halfspaces for a bounded polygon".into(),
            ));
        }
        let mut max_offset: f64 = 0.0;
        for hs in halfspaces {
            let norm = (hs.normal[0] * hs.normal[0] + hs.normal[1] * hs.normal[1]).sqrt();
            if !(norm > 0.999999 && norm < 1.000001) {
                return Err(Error::InvalidBody(format!(
                    "halfspace normal has norm {norm}, expected a unit vector"
                )));
            }
            if !hs.offset.is_finite() || hs.offset <= 0.0 {
                return Err(Error::Precondition(format!(
                    "halfspace offset {} not positive; origin must be interior",
                    hs.offset
                )));
            }
            max_offset = max_offset.max(hs.offset);
        }
        let big = 4.0 * max_offset;
        let mut poly = vec![[big, big], [-big, big], [-big, -big], [big, -big]];
        // clip in normal-angle order so near-parallel constraints arrive together
        let mut order: Vec<usize> = (0..halfspaces.len()).collect();
        order.sort_by(|&i, &j| {
            let ai = halfspaces[i].normal[1].atan2(halfspaces[i].normal[0]);
            let aj = halfspaces[j].normal[1].atan2(halfspaces[j].normal[0]);
            ai.partial_cmp(&aj).unwrap()
        });
        for idx in order {
            let hs = &halfspaces[idx];
            poly = clip_polygon(&poly, hs.normal, hs.offset);
            if poly.is_empty() {
                return Err(Error::Degenerate(
                    "halfspace intersection is empty".into(),
                ));
            }
        }
        let bound = big * 0.999;
        if poly
            .iter()
            .any(|v| v[0].abs() >= bound || v[1].abs() >= bound)
        {
            return Err(Error::InvalidBody(
                "halfspace intersection is unbounded".into(),
            ));
        }
        Self::from_vertices(poly)
    }

    pub fn square(half_side: f64) -> Self {
        Polygon2 {
            vertices: vec![
                [half_side, half_side],
                [-half_side, half_side],
                [-half_side, -half_side],
                [half_side, -half_side],
            ],
        }
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        shoelace(&self.vertices)
    }

    pub fn centroid(&self) -> [f64; 2] {
        let mut cx = 0.0;
        let mut cy = 0.0;
        let m = self.vertices.len();
        for i in 0..m {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % m];
            let w = cross(a, b);
            cx += (a[0] + b[0]) * w;
            cy += (a[1] + b[1]) * w;
        }
        let area = self.area();
        [cx / (6.0 * area), cy / (6.0 * area)]
    }

    pub fn support(&self, u: [f64; 2]) -> f64 {
        self.vertices
            .iter()
            .map(|v| dot(*v, u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains_origin(&self) -> bool {
        let m = self.vertices.len();
        (0..m).all(|i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % m];
            cross([b[0] - a[0], b[1] - a[1]], [-a[0], -a[1]]) > 0.0
        })
    }

    /// Largest t with t*u inside the polygon (u unit). Exact: the minimum
    /// of offset / <u, n> over the edges facing u.
    pub fn radial(&self, u: [f64; 2]) -> f64 {
        let m = self.vertices.len();
        let mut t_min = f64::INFINITY;
        for i in 0..m {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % m];
            // outward edge normal (unnormalized) and offset
            let n = [b[1] - a[1], a[0] - b[0]];
            let c = dot(a, n);
            let d = dot(u, n);
            if d > 0.0 {
                t_min = t_min.min(c / d);
            }
        }
        t_min
    }

    /// Polar polygon, exact for a convex polygon with the origin interior:
    /// each pair of consecutive vertex constraints <v_i, y> = 1 meets in a
    /// vertex of the polar.
    pub fn polar(&self) -> Result<Polygon2> {
        if !self.contains_origin() {
            return Err(Error::Precondition(
                "polar of a polygon requires the origin in its interior".into(),
            ));
        }
        let m = self.vertices.len();
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % m];
            let det = cross(a, b);
            if det.abs() < 1e-300 {
                return Err(Error::Numeric(
                    "consecutive polygon vertices are radially collinear".into(),
                ));
            }
            out.push([(b[1] - a[1]) / det, (a[0] - b[0]) / det]);
        }
        Polygon2::from_vertices(out)
    }

    /// Edge description as halfspaces (unit normals, offsets).
    pub fn edge_halfspaces(&self) -> Vec<Halfspace> {
        let m = self.vertices.len();
        (0..m)
            .map(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % m];
                let n = [b[1] - a[1], a[0] - b[0]];
                let len = (n[0] * n[0] + n[1] * n[1]).sqrt();
                let n = [n[0] / len, n[1] / len];
                Halfspace {
                    normal: n,
                    offset: dot(a, n),
                }
            })
            .collect()
    }

    pub fn translated(&self, c: [f64; 2]) -> Polygon2 {
        Polygon2 {
            vertices: self
                .vertices
                .iter()
                .map(|v| [v[0] + c[0], v[1] + c[1]])
                .collect(),
        }
    }
}

pub fn shoelace(vertices: &[[f64; 2]]) -> f64 {
    let m = vertices.len();
    let mut area = 0.0;
    for i in 0..m {
        area += cross(vertices[i], vertices[(i + 1) % m]);
    }
    0.5 * area
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn square_area_and_support() {
        let sq = Polygon2::square(1.0);
        assert_relative_eq!(sq.area(), 4.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(sq.support([s, s]), std::f64::consts::SQRT_2, epsilon = 1e-15);
        assert_relative_eq!(sq.radial([s, s]), std::f64::consts::SQRT_2, epsilon = 1e-12);
        assert_relative_eq!(sq.radial([1.0, 0.0]), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn polar_of_square_is_cross_polytope() {
        let sq = Polygon2::square(1.0);
        let p = sq.polar().unwrap();
        assert_relative_eq!(p.area(), 2.0, epsilon = 1e-12);
        assert_relative_eq!(p.support([1.0, 0.0]), 1.0, epsilon = 1e-12);
        assert_relative_eq!(
            p.support([std::f64::consts::FRAC_1_SQRT_2; 2]),
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn halfspace_intersection_of_octagon() {
        let hs: Vec<Halfspace> = (0..8)
            .map(|i| {
                let a = 2.0 * std::f64::consts::PI * i as f64 / 8.0;
                Halfspace {
                    normal: [a.cos(), a.sin()],
                    offset: 1.0,
                }
            })
            .collect();
        let p = Polygon2::from_halfspaces(&hs).unwrap();
        assert_eq!(p.vertices().len(), 8);
        // area of a regular octagon circumscribing the unit circle
        let expected = 8.0 * (std::f64::consts::PI / 8.0).tan();
        assert_relative_eq!(p.area(), expected, epsilon = 1e-12);
        assert!(p.contains_origin());
    }

    #[test]
    fn empty_intersection_reported() {
        let hs = vec![
            Halfspace { normal: [1.0, 0.0], offset: 1.0 },
            Halfspace { normal: [-1.0, 0.0], offset: -2.0 },
            Halfspace { normal: [0.0, 1.0], offset: 1.0 },
        ];
        assert!(Polygon2::from_halfspaces(&hs).is_err());
    }

    #[test]
    fn clip_keeps_half_of_square() {
        let sq = Polygon2::square(1.0);
        let clipped = clip_polygon(sq.vertices(), [1.0, 0.0], 0.0);
        assert_relative_eq!(shoelace(&clipped), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn centroid_of_shifted_square() {
        let sq = Polygon2::square(1.0).translated([0.5, -0.25]);
        let c = sq.centroid();
        assert_relative_eq!(c[0], 0.5, epsilon = 1e-12);
        assert_relative_eq!(c[1], -0.25, epsilon = 1e-12);
    }
}
