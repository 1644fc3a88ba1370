//! Conforming triangulations with tagged boundary edges.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::profile::ProfileFn;
use crate::error::{Error, Result};
use crate::gaussian::{triangle_weighted_integral, SQRT_2PI};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeTag {
    /// On the symmetry axis x = 0 (half-domain meshes only).
    Axis,
    Outer,
}

/// The exact curve a boundary edge approximates; refinement projects onto it.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryShape {
    Straight,
    Circle { c: [f64; 2], r: f64 },
    /// y = f(x) with f even.
    Graph { f: ProfileFn },
}

impl BoundaryShape {
    fn project(&self, p: [f64; 2]) -> [f64; 2] {
        match self {
            BoundaryShape::Straight => p,
            BoundaryShape::Circle { c, r } => {
                let (dx, dy) = (p[0] - c[0], p[1] - c[1]);
                let len = dx.hypot(dy);
                [c[0] + r * dx / len, c[1] + r * dy / len]
            }
            BoundaryShape::Graph { f } => [p[0], f.eval(p[0])],
        }
    }

    fn mirrored(&self) -> Self {
        match self {
            BoundaryShape::Circle { c, r } => BoundaryShape::Circle { c: [-c[0], c[1]], r: *r },
            other => other.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub v: [usize; 2],
    pub tag: EdgeTag,
    /// Index into [`Mesh::shapes`].
    pub shape: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 2]>,
    /// Counter-clockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    pub shapes: Vec<BoundaryShape>,
    /// Realized maximum edge length.
    pub h: f64,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl Mesh {
    /// Assemble and validate a mesh; `h` is computed from the edges.
    pub fn new(
        vertices: Vec<[f64; 2]>,
        triangles: Vec<[usize; 3]>,
        boundary_edges: Vec<BoundaryEdge>,
        shapes: Vec<BoundaryShape>,
    ) -> Result<Mesh> {
        let mut m = Mesh { vertices, triangles, boundary_edges, shapes, h: 0.0 };
        m.h = m.max_edge_length();
        m.validate()?;
        Ok(m)
    }

    fn max_edge_length(&self) -> f64 {
        let mut h = 0.0f64;
        for t in &self.triangles {
            for i in 0..3 {
                let (p, q) = (self.vertices[t[i]], self.vertices[t[(i + 1) % 3]]);
                h = h.max((p[0] - q[0]).hypot(p[1] - q[1]));
            }
        }
        h
    }

    pub fn triangle(&self, t: usize) -> [[f64; 2]; 3] {
        self.triangles[t].map(|i| self.vertices[i])
    }

    pub fn signed_area(&self, t: usize) -> f64 {
        crate::gaussian::quadrature_signed_area(&self.triangle(t))
    }

    /// Check orientation, conformity and boundary tagging.
    pub fn validate(&self) -> Result<()> {
        let nv = self.vertices.len();
        let mut count: HashMap<(usize, usize), u32> = HashMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            if tri.iter().any(|&i| i >= nv) {
                return Err(Error::Mesh(format!("triangle {t} references a missing vertex")));
            }
            if !(self.signed_area(t) > 0.0) {
                return Err(Error::Mesh(format!("triangle {t} is not positively oriented")));
            }
            for i in 0..3 {
                *count.entry(key(tri[i], tri[(i + 1) % 3])).or_insert(0) += 1;
            }
        }
        if let Some((e, c)) = count.iter().find(|(_, &c)| c > 2) {
            return Err(Error::Mesh(format!("edge {e:?} shared by {c} triangles")));
        }
        let mut tagged: HashMap<(usize, usize), EdgeTag> = HashMap::new();
        for be in &self.boundary_edges {
            if tagged.insert(key(be.v[0], be.v[1]), be.tag).is_some() {
                return Err(Error::Mesh(format!("boundary edge {:?} tagged twice", be.v)));
            }
            if count.get(&key(be.v[0], be.v[1])) != Some(&1) {
                return Err(Error::Mesh(format!("tagged edge {:?} is not a boundary edge", be.v)));
            }
            if be.shape >= self.shapes.len() {
                return Err(Error::Mesh(format!("edge {:?} has no boundary shape", be.v)));
            }
            if be.tag == EdgeTag::Axis && be.v.iter().any(|&i| self.vertices[i][0].abs() > 1e-12) {
                return Err(Error::Mesh(format!("axis edge {:?} leaves x = 0", be.v)));
            }
        }
        let untagged = count.iter().filter(|(e, &c)| c == 1 && !tagged.contains_key(e)).count();
        if untagged > 0 {
            return Err(Error::Mesh(format!("{untagged} boundary edges carry no tag")));
        }
        Ok(())
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.signed_area(t)).sum()
    }

    /// Σ_T ∫_T dγ₂ with the degree-6 rule.
    pub fn gaussian_mass(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| triangle_weighted_integral(self.triangle(t), |_, _| 1.0).unwrap_or(0.0))
            .sum::<f64>()
            / (SQRT_2PI * SQRT_2PI)
    }

    pub fn boundary_vertices(&self) -> Vec<bool> {
        let mut b = vec![false; self.vertices.len()];
        for e in &self.boundary_edges {
            b[e.v[0]] = true;
            b[e.v[1]] = true;
        }
        b
    }

    pub fn axis_vertices(&self) -> Vec<bool> {
        let mut b = vec![false; self.vertices.len()];
        for e in self.boundary_edges.iter().filter(|e| e.tag == EdgeTag::Axis) {
            b[e.v[0]] = true;
            b[e.v[1]] = true;
        }
        b
    }

    pub fn interior_vertex_count(&self) -> usize {
        self.boundary_vertices().iter().filter(|&&b| !b).count()
    }

    /// Red refinement: every triangle split into four; boundary midpoints are
    /// projected onto the curve they approximate.
    pub fn refine(&self) -> Result<Mesh> {
        let mut vertices = self.vertices.clone();
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut boundary_shape: HashMap<(usize, usize), usize> = HashMap::new();
        for e in &self.boundary_edges {
            boundary_shape.insert(key(e.v[0], e.v[1]), e.shape);
        }
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<[f64; 2]>| -> usize {
            *mid.entry(key(a, b)).or_insert_with(|| {
                let (p, q) = (vertices[a], vertices[b]);
                let mut m = [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
                if let Some(&s) = boundary_shape.get(&key(a, b)) {
                    m = self.shapes[s].project(m);
                    if p[0] == 0.0 && q[0] == 0.0 {
                        m[0] = 0.0;
                    }
                }
                vertices.push(m);
                vertices.len() - 1
            })
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            triangles.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        let mut boundary_edges = Vec::with_capacity(2 * self.boundary_edges.len());
        for e in &self.boundary_edges {
            let m = mid[&key(e.v[0], e.v[1])];
            boundary_edges.push(BoundaryEdge { v: [e.v[0], m], ..*e });
            boundary_edges.push(BoundaryEdge { v: [m, e.v[1]], ..*e });
        }
        Mesh::new(vertices, triangles, boundary_edges, self.shapes.clone())
    }

    /// Reflection across x = 0 (orientation restored).
    pub fn mirror(&self) -> Mesh {
        Mesh {
            vertices: self.vertices.iter().map(|p| [-p[0], p[1]]).collect(),
            triangles: self.triangles.iter().map(|t| [t[0], t[2], t[1]]).collect(),
            boundary_edges: self.boundary_edges.iter().map(|e| BoundaryEdge { v: [e.v[1], e.v[0]], ..*e }).collect(),
            shapes: self.shapes.iter().map(BoundaryShape::mirrored).collect(),
            h: self.h,
        }
    }

    /// Full symmetric mesh from a half mesh: the half, its mirror image, axis vertices shared.
    pub fn mirror_union(&self) -> Result<Mesh> {
        let axis = self.axis_vertices();
        let n = self.vertices.len();
        let mut vertices = self.vertices.clone();
        let mut image = vec![0usize; n];
        for i in 0..n {
            image[i] = if axis[i] {
                i
            } else {
                vertices.push([-self.vertices[i][0], self.vertices[i][1]]);
                vertices.len() - 1
            };
        }
        let mut triangles = self.triangles.clone();
        triangles.extend(self.triangles.iter().map(|t| [image[t[0]], image[t[2]], image[t[1]]]));
        let ns = self.shapes.len();
        let mut shapes = self.shapes.clone();
        shapes.extend(self.shapes.iter().map(BoundaryShape::mirrored));
        let mut boundary_edges = Vec::new();
        for e in self.boundary_edges.iter().filter(|e| e.tag == EdgeTag::Outer) {
            boundary_edges.push(*e);
            boundary_edges.push(BoundaryEdge { v: [image[e.v[1]], image[e.v[0]]], tag: EdgeTag::Outer, shape: e.shape + ns });
        }
        Mesh::new(vertices, triangles, boundary_edges, shapes)
    }

    /// ASCII export: vertex, triangle and tagged-edge sections, plus optional
    /// nodal-value columns.
    pub fn to_ascii(&self, values: &[(&str, &[f64])]) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# hermite-gap mesh v1");
        let _ = writeln!(s, "vertices {}", self.vertices.len());
        for p in &self.vertices {
            let _ = writeln!(s, "{:.17e} {:.17e}", p[0], p[1]);
        }
        let _ = writeln!(s, "triangles {}", self.triangles.len());
        for t in &self.triangles {
            let _ = writeln!(s, "{} {} {}", t[0], t[1], t[2]);
        }
        let _ = writeln!(s, "edges {}", self.boundary_edges.len());
        for e in &self.boundary_edges {
            let tag = match e.tag {
                EdgeTag::Axis => "axis",
                EdgeTag::Outer => "outer",
            };
            let _ = writeln!(s, "{} {} {}", e.v[0], e.v[1], tag);
        }
        for (name, vals) in values {
            let _ = writeln!(s, "values {} {}", name, vals.len());
            for v in vals.iter() {
                let _ = writeln!(s, "{v:.12e}");
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Mesh {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let t = vec![[0, 1, 2], [0, 2, 3]];
        let e = vec![
            BoundaryEdge { v: [0, 1], tag: EdgeTag::Outer, shape: 0 },
            BoundaryEdge { v: [1, 2], tag: EdgeTag::Outer, shape: 0 },
            BoundaryEdge { v: [2, 3], tag: EdgeTag::Outer, shape: 0 },
            BoundaryEdge { v: [3, 0], tag: EdgeTag::Axis, shape: 0 },
        ];
        Mesh::new(v, t, e, vec![BoundaryShape::Straight]).unwrap()
    }

    #[test]
    fn refinement_and_mirroring_keep_invariants() {
        let m = square();
        let r = m.refine().unwrap();
        assert_eq!(r.triangles.len(), 8);
        assert!((r.area() - 1.0).abs() < 1e-15);
        assert!((r.h - m.h / 2.0).abs() < 1e-15);
        let full = r.mirror_union().unwrap();
        assert!((full.area() - 2.0).abs() < 1e-14);
        assert!(full.boundary_edges.iter().all(|e| e.tag == EdgeTag::Outer));
        assert!(m.mirror().validate().is_ok());
    }

    #[test]
    fn bad_meshes_are_rejected() {
        let mut m = square();
        m.triangles[0] = [0, 2, 1];
        assert!(m.validate().is_err());
        let mut m = square();
        m.boundary_edges.pop();
        assert!(matches!(m.validate(), Err(Error::Mesh(_))));
    }

    #[test]
    fn ascii_sections() {
        let m = square();
        let s = m.to_ascii(&[("u", &[1.0, 2.0, 3.0, 4.0])]);
        assert!(s.contains("vertices 4\n") && s.contains("triangles 2\n") && s.contains("3 0 axis\n"));
        assert!(s.contains("values u 4\n"));
    }
}
