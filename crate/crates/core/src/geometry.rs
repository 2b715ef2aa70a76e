//! Coordinate-level geometry: points, polygons and their metrics.
//!
//! Nothing in here knows about closed forms. Perimeter, width, diameter and
//! area are measured from raw vertex coordinates so they can be checked
//! against the analytic expressions in [`crate::bounds`].

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Deref, Mul, Sub};

use thiserror::Error;

use crate::math::{atan2, compensated_sum, hypot, PI};
use crate::{CONVEXITY_TOL, DIAMETER_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("polygon is not strictly convex in counterclockwise order")]
    NonConvex,
    #[error("polygon diameter {0} exceeds 1")]
    NotSmall(f64),
    #[error("first vertex must sit at the origin with the polygon in y >= 0")]
    BadFrame,
    #[error("label table does not match the vertex count")]
    BadLabels,
}

/// A point in the plane, in unit-diameter lengths.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn dist(self, other: Point2) -> f64 {
        hypot(self.x - other.x, self.y - other.y)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        hypot(self.x, self.y)
    }

    #[inline]
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Reflection across the y-axis.
    #[inline]
    pub fn mirrored(self) -> Self {
        Self::new(-self.x, self.y)
    }

    /// Unsigned angle between two direction vectors, in `[0, π]`.
    pub fn angle_between(self, other: Point2) -> f64 {
        atan2(self.cross(other).abs(), self.dot(other))
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

/// Largest pairwise vertex distance together with every pair attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct Diameter {
    pub length: f64,
    /// Pairs `(i, j)`, `i < j`, whose distance is within [`DIAMETER_TOL`] of `length`.
    pub edges: Vec<(usize, usize)>,
}

/// Shape of a diameter graph made of one cycle with pendant edges hanging off it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphShape {
    pub cycle_len: usize,
    pub pendants: usize,
    /// Vertices not incident to any diameter edge.
    pub isolated: usize,
}

impl Diameter {
    /// Decomposes the diameter graph on `n` vertices into a single cycle plus
    /// pendant edges. Returns `None` if the graph has any other shape.
    pub fn shape(&self, n: usize) -> Option<GraphShape> {
        let mut degree = alloc::vec![0usize; n];
        for &(i, j) in &self.edges {
            degree[i] += 1;
            degree[j] += 1;
        }
        let is_leaf = |v: usize| degree[v] == 1;
        // pendant edges join a leaf to a cycle vertex, never two leaves
        let mut pendants = 0;
        let mut core_degree = alloc::vec![0usize; n];
        let mut core_edges = Vec::new();
        for &(i, j) in &self.edges {
            match (is_leaf(i), is_leaf(j)) {
                (true, true) => return None,
                (true, false) | (false, true) => pendants += 1,
                (false, false) => {
                    core_degree[i] += 1;
                    core_degree[j] += 1;
                    core_edges.push((i, j));
                }
            }
        }
        let isolated = degree.iter().filter(|&&d| d == 0).count();
        let core: Vec<usize> = (0..n).filter(|&v| degree[v] >= 2).collect();
        if core.len() < 3 || core.iter().any(|&v| core_degree[v] != 2) {
            return None;
        }
        // walk the cycle from its first vertex and make sure it is connected
        let start = core[0];
        let mut prev = usize::MAX;
        let mut cur = start;
        let mut len = 0;
        loop {
            let next = core_edges
                .iter()
                .filter_map(|&(i, j)| {
                    if i == cur && j != prev {
                        Some(j)
                    } else if j == cur && i != prev {
                        Some(i)
                    } else {
                        None
                    }
                })
                .next()?;
            len += 1;
            prev = cur;
            cur = next;
            if cur == start || len > n {
                break;
            }
        }
        if cur != start || len != core.len() {
            return None;
        }
        Some(GraphShape {
            cycle_len: len,
            pendants,
            isolated,
        })
    }
}

/// Everything that gets measured for one polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub perimeter: f64,
    pub width: f64,
    pub diameter: f64,
    pub area: f64,
    pub convex: bool,
    pub diameter_edges: Vec<(usize, usize)>,
}

/// A closed polygon given by its vertices in order.
///
/// Only the vertex count and finiteness are enforced; no convexity or size
/// assumptions are made.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point2>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point2>) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::TooFewVertices(vertices.len()));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite(i));
        }
        Ok(Self { vertices })
    }

    #[inline]
    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Sum of edge lengths, closed cyclically.
    pub fn perimeter(&self) -> f64 {
        compensated_sum(self.edges().map(|(a, b)| a.dist(b)))
    }

    /// Shoelace area. Positive for counterclockwise order.
    pub fn signed_area(&self) -> f64 {
        0.5 * compensated_sum(self.edges().map(|(a, b)| a.cross(b)))
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    /// Strict convexity in counterclockwise order: every turn is a left turn
    /// by more than [`CONVEXITY_TOL`], and the boundary winds exactly once.
    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        let mut turning = 0.0;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let c = self.vertices[(i + 2) % n];
            let (u, v) = (b - a, c - b);
            if u.cross(v) <= CONVEXITY_TOL {
                return false;
            }
            turning += atan2(u.cross(v), u.dot(v));
        }
        // a star polygon turns left everywhere but winds more than once
        (turning - 2.0 * PI).abs() < 1e-6
    }

    /// Minimum width over all directions.
    ///
    /// For a convex polygon the minimizing direction is normal to an edge, so
    /// the width is the smallest, over edges, of the largest distance from the
    /// edge's supporting line to a vertex. The farthest vertex is tracked with
    /// a rotating pointer, which makes the sweep linear.
    pub fn width(&self) -> Result<f64, GeometryError> {
        if !self.is_convex() {
            return Err(GeometryError::NonConvex);
        }
        let v = &self.vertices;
        let n = v.len();
        let height = |i: usize, j: usize| {
            let a = v[i];
            let e = v[(i + 1) % n] - a;
            e.cross(v[j % n] - a) / e.norm()
        };
        let mut j = (0..n)
            .max_by(|&p, &q| height(0, p).total_cmp(&height(0, q)))
            .unwrap_or(0);
        let mut best = f64::INFINITY;
        for i in 0..n {
            let mut steps = 0;
            while steps < n && height(i, j + 1) >= height(i, j) {
                j = (j + 1) % n;
                steps += 1;
            }
            best = best.min(height(i, j));
        }
        Ok(best)
    }

    /// Largest pairwise vertex distance and all pairs within [`DIAMETER_TOL`] of it.
    pub fn diameter(&self) -> Diameter {
        let v = &self.vertices;
        let n = v.len();
        let mut length = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                length = length.max(v[i].dist(v[j]));
            }
        }
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if (v[i].dist(v[j]) - length).abs() <= DIAMETER_TOL {
                    edges.push((i, j));
                }
            }
        }
        Diameter { length, edges }
    }

    pub fn metrics(&self) -> Result<MetricsReport, GeometryError> {
        let width = self.width()?;
        let diameter = self.diameter();
        Ok(MetricsReport {
            perimeter: self.perimeter(),
            width,
            diameter: diameter.length,
            area: self.area(),
            convex: true,
            diameter_edges: diameter.edges,
        })
    }

    /// Uniform scaling about the origin.
    pub fn scaled(&self, factor: f64) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|&p| p * factor).collect(),
        }
    }

    /// The same polygon contracted to unit perimeter.
    pub fn to_unit_perimeter(&self) -> Polygon {
        self.scaled(1.0 / self.perimeter())
    }
}

/// Construction tag carried by a [`SmallPolygon`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Regular,
    RegularPlus,
    ReuleauxSub,
    Tamvakis,
    BFamily,
    QFamily,
    FromAngles,
    Raw,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Regular => "regular",
            Family::RegularPlus => "regular-plus",
            Family::ReuleauxSub => "reuleaux",
            Family::Tamvakis => "tamvakis",
            Family::BFamily => "b",
            Family::QFamily => "q",
            Family::FromAngles => "from-angles",
            Family::Raw => "raw",
        }
    }
}

/// Defining parameters of a constructed polygon.
#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    Regular { n: usize },
    RegularPlus { n: usize },
    ReuleauxSub { m: usize, n: usize },
    Tamvakis { n: usize },
    BFamily { n: usize },
    QFamily { n: usize },
    FromAnglesB { alphas: Vec<f64> },
    FromAnglesQ { alphas: Vec<f64> },
    Raw,
}

impl Params {
    pub fn family(&self) -> Family {
        match self {
            Params::Regular { .. } => Family::Regular,
            Params::RegularPlus { .. } => Family::RegularPlus,
            Params::ReuleauxSub { .. } => Family::ReuleauxSub,
            Params::Tamvakis { .. } => Family::Tamvakis,
            Params::BFamily { .. } => Family::BFamily,
            Params::QFamily { .. } => Family::QFamily,
            Params::FromAnglesB { .. } | Params::FromAnglesQ { .. } => Family::FromAngles,
            Params::Raw => Family::Raw,
        }
    }
}

/// A validated convex polygon of diameter at most one.
///
/// Vertices run counterclockwise starting at the origin and the polygon lies
/// in the half-plane `y >= 0`. Constructions that number their vertices along
/// the diameter graph rather than the boundary keep that numbering in
/// `labels`: `labels[i]` is the construction index of boundary vertex `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallPolygon {
    polygon: Polygon,
    params: Params,
    labels: Option<Vec<usize>>,
}

impl SmallPolygon {
    pub fn new(vertices: Vec<Point2>, params: Params) -> Result<Self, GeometryError> {
        let polygon = Polygon::new(vertices)?;
        Self::validate(&polygon)?;
        Ok(Self {
            polygon,
            params,
            labels: None,
        })
    }

    /// Builds a polygon from points numbered by construction label, sorting
    /// them into counterclockwise boundary order starting at label 0.
    pub fn from_labeled(points: Vec<Point2>, params: Params) -> Result<Self, GeometryError> {
        let n = points.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        let inv = 1.0 / n as f64;
        let centroid = Point2::new(
            compensated_sum(points.iter().map(|p| p.x)) * inv,
            compensated_sum(points.iter().map(|p| p.y)) * inv,
        );
        let bearing = |p: Point2| {
            let d = p - centroid;
            atan2(d.y, d.x)
        };
        let start = bearing(points[0]);
        let key = |p: Point2| {
            let mut a = bearing(p) - start;
            if a < 0.0 {
                a += 2.0 * PI;
            }
            a
        };
        let mut labels: Vec<usize> = (0..n).collect();
        labels.sort_by(|&a, &b| match (a, b) {
            (0, 0) => Ordering::Equal,
            (0, _) => Ordering::Less,
            (_, 0) => Ordering::Greater,
            _ => key(points[a]).total_cmp(&key(points[b])),
        });
        let vertices = labels.iter().map(|&l| points[l]).collect();
        let mut poly = Self::new(vertices, params)?;
        poly.labels = Some(labels);
        Ok(poly)
    }

    fn validate(polygon: &Polygon) -> Result<(), GeometryError> {
        let v = polygon.vertices();
        if v[0].norm() > 1e-12 || v.iter().any(|p| p.y < -1e-12) {
            return Err(GeometryError::BadFrame);
        }
        if !polygon.is_convex() {
            return Err(GeometryError::NonConvex);
        }
        let d = polygon.diameter().length;
        if d > 1.0 + DIAMETER_TOL {
            return Err(GeometryError::NotSmall(d));
        }
        Ok(())
    }

    #[inline]
    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    #[inline]
    pub fn params(&self) -> &Params {
        &self.params
    }

    #[inline]
    pub fn family(&self) -> Family {
        self.params.family()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.polygon.len()
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    /// Vertex with construction label `label`, if the polygon carries labels.
    pub fn vertex_by_label(&self, label: usize) -> Option<Point2> {
        let labels = self.labels.as_ref()?;
        let i = labels.iter().position(|&l| l == label)?;
        Some(self.polygon.vertices()[i])
    }

    /// All vertices ordered by construction label.
    pub fn labeled_vertices(&self) -> Option<Vec<Point2>> {
        let labels = self.labels.as_ref()?;
        let mut out = alloc::vec![Point2::ORIGIN; labels.len()];
        for (i, &l) in labels.iter().enumerate() {
            out[l] = self.polygon.vertices()[i];
        }
        Some(out)
    }

    /// Contracts the polygon to unit perimeter, keeping parameters and labels.
    pub fn to_unit_perimeter(&self) -> SmallPolygon {
        SmallPolygon {
            polygon: self.polygon.to_unit_perimeter(),
            params: self.params.clone(),
            labels: self.labels.clone(),
        }
    }
}

impl Deref for SmallPolygon {
    type Target = Polygon;
    fn deref(&self) -> &Polygon {
        &self.polygon
    }
}

impl AsRef<Polygon> for SmallPolygon {
    fn as_ref(&self) -> &Polygon {
        &self.polygon
    }
}
