//! Triangulated surface meshes: file ingestion, icosphere generation,
//! per-triangle reference geometry and singularity classification of
//! triangle pairs.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use crate::error::{Error, Result};
use crate::Vec3;

/// Relative Gram-determinant threshold below which a triangle is degenerate.
const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// Supported mesh file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Off,
    /// Wavefront OBJ restricted to `v` and triangular `f` statements.
    Obj,
}

/// Singularity class of a pair of triangles (test σ, trial τ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairCase {
    Identical,
    SharedEdge,
    SharedVertex,
    Disjoint,
}

/// Canonical vertex orderings for a classified pair.
///
/// `sigma_order`/`tau_order` are local-index permutations. For shared edges
/// both reordered triangles start with the common edge traversed in the same
/// direction; for shared vertices both start at the common vertex.
/// `tau_normal` is the unit normal of τ in its ORIGINAL stored orientation
/// (reordering σ may be an odd permutation and would flip it).
#[derive(Debug, Clone)]
pub struct PairClassification {
    pub case: PairCase,
    pub sigma_order: [usize; 3],
    pub tau_order: [usize; 3],
    pub tau_normal: Vec3,
}

/// Reference-map geometry of one triangle: χ(x₁,x₂) = p + x₁v + x₂w over
/// the triangle {0 < x₂ < x₁ < 1}.
#[derive(Debug, Clone)]
pub struct TriangleGeometry {
    pub p: Vec3,
    pub v: Vec3,
    pub w: Vec3,
    /// Gram determinant sqrt(det(JᵀJ)) = |v×w| = twice the area.
    pub gram: f64,
    pub area: f64,
    pub normal: Vec3,
}

/// Immutable triangle surface mesh with validated connectivity.
#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
}

impl SurfaceMesh {
    /// Builds a mesh and checks all structural invariants: index validity,
    /// non-degeneracy, conformity and consistent orientation.
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let mesh = SurfaceMesh {
            vertices,
            triangles,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    fn validate(&self) -> Result<()> {
        let m = self.vertices.len();
        let mut seen = HashSet::with_capacity(self.triangles.len());
        for (t, tri) in self.triangles.iter().enumerate() {
            for &i in tri {
                if i >= m {
                    return Err(Error::validation(format!(
                        "triangle {t} references vertex {i} but the mesh has {m} vertices"
                    )));
                }
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::validation(format!(
                    "triangle {t} repeats a vertex index"
                )));
            }
            let mut key = *tri;
            key.sort_unstable();
            if !seen.insert(key) {
                return Err(Error::validation(format!(
                    "triangle {t} duplicates another triangle's vertex set"
                )));
            }
            self.geometry_unchecked(t, [0, 1, 2]).map_err(|_| {
                Error::validation(format!("degenerate triangle {t}: collinear vertices"))
            })?;
        }
        // Conformity and orientation: every undirected edge is used by at most
        // two triangles, and a doubly-used edge appears in opposite directions.
        let mut edges: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let entry = edges.entry((a.min(b), a.max(b))).or_insert((0, 0));
                if a < b {
                    entry.0 += 1;
                } else {
                    entry.1 += 1;
                }
                if entry.0 + entry.1 > 2 {
                    return Err(Error::validation(format!(
                        "edge ({a},{b}) of triangle {t} is shared by more than two triangles"
                    )));
                }
                if entry.0 == 2 || entry.1 == 2 {
                    return Err(Error::validation(format!(
                        "edge ({a},{b}) of triangle {t} appears twice in the same direction: \
                         inconsistent orientation"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Reads a mesh from `path` in the given format.
    pub fn load(path: impl AsRef<Path>, format: MeshFormat) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        match format {
            MeshFormat::Off => Self::parse_off(&text),
            MeshFormat::Obj => Self::parse_obj(&text),
        }
    }

    /// Parses the OFF format: header "OFF", counts "M N 0", M vertex lines,
    /// N face lines "3 i j k" with 0-based indices.
    pub fn parse_off(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty OFF file"))?;
        if header != "OFF" {
            return Err(parse_err(line, "expected OFF header"));
        }
        let (line, counts) = lines
            .next()
            .ok_or_else(|| parse_err(line, "missing counts line"))?;
        let counts: Vec<usize> = counts
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err(line, "bad counts line")))
            .collect::<Result<_>>()?;
        if counts.len() != 3 {
            return Err(parse_err(line, "counts line must be `M N 0`"));
        }
        let (nv, nf) = (counts[0], counts[1]);
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            let (line, l) = lines
                .next()
                .ok_or_else(|| parse_err(line, "unexpected end of vertex list"))?;
            vertices.push(parse_point(line, l)?);
        }
        let mut triangles = Vec::with_capacity(nf);
        for _ in 0..nf {
            let (line, l) = lines
                .next()
                .ok_or_else(|| parse_err(line, "unexpected end of face list"))?;
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.len() < 4 || toks[0] != "3" {
                return Err(parse_err(line, "face line must start with `3 i j k`"));
            }
            let mut tri = [0usize; 3];
            for (slot, tok) in tri.iter_mut().zip(&toks[1..4]) {
                *slot = tok
                    .parse()
                    .map_err(|_| parse_err(line, "bad vertex index"))?;
            }
            triangles.push(tri);
        }
        Self::new(vertices, triangles)
    }

    /// Parses the OBJ subset: `v x y z` and triangular `f i j k` (1-based,
    /// `i/..` attribute suffixes tolerated); everything else is ignored.
    pub fn parse_obj(text: &str) -> Result<Self> {
        let mut vertices = Vec::new();
        let mut triangles = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = l.split_whitespace().collect();
            match toks[0] {
                "v" => {
                    if toks.len() < 4 {
                        return Err(parse_err(line, "vertex line needs 3 coordinates"));
                    }
                    vertices.push(parse_point(line, &toks[1..4].join(" "))?);
                }
                "f" => {
                    if toks.len() != 4 {
                        return Err(parse_err(line, "only triangular faces are supported"));
                    }
                    let mut tri = [0usize; 3];
                    for (slot, tok) in tri.iter_mut().zip(&toks[1..4]) {
                        let idx: usize = tok
                            .split('/')
                            .next()
                            .unwrap_or("")
                            .parse()
                            .map_err(|_| parse_err(line, "bad face index"))?;
                        if idx == 0 {
                            return Err(parse_err(line, "face indices are 1-based"));
                        }
                        *slot = idx - 1;
                    }
                    triangles.push(tri);
                }
                _ => {}
            }
        }
        Self::new(vertices, triangles)
    }

    /// Writes the mesh as an OFF file.
    pub fn write_off(&self, path: impl AsRef<Path>) -> Result<()> {
        use std::io::Write;
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "OFF")?;
        writeln!(out, "{} {} 0", self.vertex_count(), self.triangle_count())?;
        for p in &self.vertices {
            writeln!(out, "{:.17} {:.17} {:.17}", p.x, p.y, p.z)?;
        }
        for t in &self.triangles {
            writeln!(out, "3 {} {} {}", t[0], t[1], t[2])?;
        }
        Ok(())
    }

    /// Icosahedron subdivided `level` times with vertices projected onto the
    /// sphere of the given radius; triangles are oriented outward.
    pub fn build_icosphere(level: usize, radius: f64) -> Result<Self> {
        if level > 7 {
            return Err(Error::invalid(format!(
                "icosphere level {level} exceeds the supported maximum 7"
            )));
        }
        if !(radius > 0.0) {
            return Err(Error::invalid("icosphere radius must be positive"));
        }
        let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
        #[rustfmt::skip]
        let mut vertices: Vec<Vec3> = [
            (-1.0, phi, 0.0), (1.0, phi, 0.0), (-1.0, -phi, 0.0), (1.0, -phi, 0.0),
            (0.0, -1.0, phi), (0.0, 1.0, phi), (0.0, -1.0, -phi), (0.0, 1.0, -phi),
            (phi, 0.0, -1.0), (phi, 0.0, 1.0), (-phi, 0.0, -1.0), (-phi, 0.0, 1.0),
        ]
        .iter()
        .map(|&(x, y, z)| Vec3::new(x, y, z))
        .collect();
        #[rustfmt::skip]
        let mut triangles: Vec<[usize; 3]> = vec![
            [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
            [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
            [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
            [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
        ];
        for _ in 0..level {
            let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
            let mut next = Vec::with_capacity(triangles.len() * 4);
            for tri in &triangles {
                let mut mid = [0usize; 3];
                for k in 0..3 {
                    let (a, b) = (tri[k], tri[(k + 1) % 3]);
                    let key = (a.min(b), a.max(b));
                    mid[k] = *midpoint.entry(key).or_insert_with(|| {
                        vertices.push(0.5 * (vertices[a] + vertices[b]));
                        vertices.len() - 1
                    });
                }
                next.push([tri[0], mid[0], mid[2]]);
                next.push([tri[1], mid[1], mid[0]]);
                next.push([tri[2], mid[2], mid[1]]);
                next.push([mid[0], mid[1], mid[2]]);
            }
            triangles = next;
        }
        for v in &mut vertices {
            *v = *v * (radius / v.norm());
        }
        Self::new(vertices, triangles)
    }

    /// Classifies the pair (σ = triangle `i`, the test/outer element; τ =
    /// triangle `j`, the trial/inner element) by counting shared vertex
    /// indices, and produces the canonical orderings.
    pub fn classify_pair(&self, i: usize, j: usize) -> Result<PairClassification> {
        let n = self.triangles.len();
        if i >= n || j >= n {
            return Err(Error::invalid(format!(
                "pair ({i},{j}) out of range for {n} triangles"
            )));
        }
        let tau_normal = self.geometry_unchecked(j, [0, 1, 2])?.normal;
        if i == j {
            return Ok(PairClassification {
                case: PairCase::Identical,
                sigma_order: [0, 1, 2],
                tau_order: [0, 1, 2],
                tau_normal,
            });
        }
        let (si, sj) = (self.triangles[i], self.triangles[j]);
        // Shared vertices as (local in σ, local in τ); identity is decided by
        // index equality only.
        let mut shared = Vec::with_capacity(2);
        for (a, &gi) in si.iter().enumerate() {
            for (b, &gj) in sj.iter().enumerate() {
                if gi == gj {
                    shared.push((a, b));
                }
            }
        }
        match shared.len() {
            0 => Ok(PairClassification {
                case: PairCase::Disjoint,
                sigma_order: [0, 1, 2],
                tau_order: [0, 1, 2],
                tau_normal,
            }),
            1 => {
                let (a, b) = shared[0];
                Ok(PairClassification {
                    case: PairCase::SharedVertex,
                    sigma_order: rotation_from(a),
                    tau_order: rotation_from(b),
                    tau_normal,
                })
            }
            2 => {
                // τ keeps its own direction of the common edge; σ is reordered
                // (possibly an odd permutation) to start with the same directed
                // edge, so both parametrizations agree on it.
                let k = (0..3)
                    .find(|&k| {
                        let (a, b) = (sj[k], sj[(k + 1) % 3]);
                        shared.iter().any(|&(_, l)| sj[l] == a)
                            && shared.iter().any(|&(_, l)| sj[l] == b)
                    })
                    .expect("two shared vertices always form an edge of the triangle");
                let tau_order = rotation_from(k);
                let (start, end) = (sj[k], sj[(k + 1) % 3]);
                let pos = |g: usize| si.iter().position(|&x| x == g).unwrap();
                let (a, b) = (pos(start), pos(end));
                let sigma_order = [a, b, 3 - a - b];
                Ok(PairClassification {
                    case: PairCase::SharedEdge,
                    sigma_order,
                    tau_order,
                    tau_normal,
                })
            }
            _ => Err(Error::validation(format!(
                "triangles {i} and {j} share {} vertices",
                shared.len()
            ))),
        }
    }

    /// Reference-map geometry of triangle `idx` with its vertices permuted by
    /// `order`. The normal follows the permuted order; callers needing the
    /// physical normal use `PairClassification::tau_normal`.
    pub fn triangle_geometry(&self, idx: usize, order: [usize; 3]) -> Result<TriangleGeometry> {
        if idx >= self.triangles.len() {
            return Err(Error::invalid(format!("triangle index {idx} out of range")));
        }
        let mut check = order;
        check.sort_unstable();
        if check != [0, 1, 2] {
            return Err(Error::invalid(format!(
                "order {order:?} is not a permutation of (0,1,2)"
            )));
        }
        self.geometry_unchecked(idx, order)
    }

    fn geometry_unchecked(&self, idx: usize, order: [usize; 3]) -> Result<TriangleGeometry> {
        let tri = self.triangles[idx];
        let p1 = self.vertices[tri[order[0]]];
        let p2 = self.vertices[tri[order[1]]];
        let p3 = self.vertices[tri[order[2]]];
        triangle_geometry_from_points(p1, p2, p3)
    }
}

/// Geometry of the triangle (p1,p2,p3) in that parametrization order.
pub fn triangle_geometry_from_points(p1: Vec3, p2: Vec3, p3: Vec3) -> Result<TriangleGeometry> {
    let v = p2 - p1;
    let w = p3 - p2;
    let cross = v.cross(&w);
    let gram = cross.norm();
    let longest = v.norm_squared().max(w.norm_squared()).max((v + w).norm_squared());
    if gram <= DEGENERACY_THRESHOLD * longest {
        return Err(Error::degenerate(
            "triangle Gram determinant vanishes relative to its longest edge",
        ));
    }
    Ok(TriangleGeometry {
        p: p1,
        v,
        w,
        gram,
        area: 0.5 * gram,
        normal: cross / gram,
    })
}

/// Coefficients (a0,a1,a2) of the linear trial function a0 + a1y₁ + a2y₂ on
/// the reference triangle, for nodal values given in ORIGINAL vertex order
/// and a parametrization permuted by `order`.
pub fn local_linear_coeffs(nodal_values: [f64; 3], order: [usize; 3]) -> (f64, f64, f64) {
    let f = [
        nodal_values[order[0]],
        nodal_values[order[1]],
        nodal_values[order[2]],
    ];
    (f[0], f[1] - f[0], f[2] - f[1])
}

fn rotation_from(k: usize) -> [usize; 3] {
    [k, (k + 1) % 3, (k + 2) % 3]
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_point(line: usize, text: &str) -> Result<Vec3> {
    let coords: Vec<f64> = text
        .split_whitespace()
        .take(3)
        .map(|t| {
            t.parse()
                .map_err(|_| parse_err(line, format!("bad coordinate `{t}`")))
        })
        .collect::<Result<_>>()?;
    if coords.len() != 3 {
        return Err(parse_err(line, "vertex line needs 3 coordinates"));
    }
    Ok(Vec3::new(coords[0], coords[1], coords[2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_right_triangle() -> SurfaceMesh {
        SurfaceMesh::new(
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2]],
        )
        .unwrap()
    }

    #[test]
    fn parses_single_triangle_off() {
        let text = "OFF\n3 1 0\n0 0 0\n1 0 0\n1 1 0\n3 0 1 2\n";
        let mesh = SurfaceMesh::parse_off(text).unwrap();
        assert_eq!(mesh.triangle_count(), 1);
        assert_eq!(mesh.vertex_count(), 3);
        let geom = mesh.triangle_geometry(0, [0, 1, 2]).unwrap();
        assert_relative_eq!(geom.area, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn accepts_consistently_oriented_edge_pair() {
        let mesh = SurfaceMesh::new(
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 0.0),
                Vec3::new(0.0, -1.0, 0.5),
            ],
            vec![[0, 1, 2], [1, 0, 3]],
        )
        .unwrap();
        assert_eq!(mesh.triangle_count(), 2);
    }

    #[test]
    fn rejects_same_direction_shared_edge() {
        let result = SurfaceMesh::new(
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 0.0),
                Vec3::new(0.0, -1.0, 0.5),
            ],
            vec![[0, 1, 2], [0, 1, 3]],
        );
        assert!(matches!(result, Err(Error::Validation(_))));
    }

    #[test]
    fn rejects_collinear_triangle() {
        let result = SurfaceMesh::new(
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(2.0, 0.0, 0.0),
            ],
            vec![[0, 1, 2]],
        );
        assert!(matches!(result, Err(Error::Validation(_))));
    }

    #[test]
    fn parses_obj_subset_with_attribute_suffixes() {
        let text = "# comment\nv 0 0 0\nv 1 0 0\nv 1 1 0\nvn 0 0 1\nf 1/1 2/2 3/3\n";
        let mesh = SurfaceMesh::parse_obj(text).unwrap();
        assert_eq!(mesh.triangle_count(), 1);
        assert_eq!(mesh.triangles()[0], [0, 1, 2]);
    }

    #[test]
    fn off_round_trip_preserves_mesh() {
        let mesh = SurfaceMesh::build_icosphere(1, 1.0).unwrap();
        let dir = std::env::temp_dir().join("bem_core_mesh_roundtrip.off");
        mesh.write_off(&dir).unwrap();
        let back = SurfaceMesh::load(&dir, MeshFormat::Off).unwrap();
        assert_eq!(back.triangle_count(), mesh.triangle_count());
        for (a, b) in mesh.vertices().iter().zip(back.vertices()) {
            assert_relative_eq!((a - b).norm(), 0.0, epsilon = 1e-15);
        }
        std::fs::remove_file(dir).ok();
    }

    #[test]
    fn icosphere_counts_and_orientation() {
        for level in 0..=4 {
            let mesh = SurfaceMesh::build_icosphere(level, 1.0).unwrap();
            assert_eq!(mesh.triangle_count(), 20 * 4usize.pow(level as u32));
            assert_eq!(mesh.vertex_count(), 10 * 4usize.pow(level as u32) + 2);
            for t in 0..mesh.triangle_count() {
                let g = mesh.triangle_geometry(t, [0, 1, 2]).unwrap();
                let centroid = g.p + (g.v + (g.v + g.w)) / 3.0;
                assert!(g.normal.dot(&centroid) > 0.0, "inward triangle {t}");
            }
        }
        assert!(SurfaceMesh::build_icosphere(8, 1.0).is_err());
    }

    #[test]
    fn icosphere_vertices_lie_on_radius() {
        let mesh = SurfaceMesh::build_icosphere(2, 2.5).unwrap();
        for v in mesh.vertices() {
            assert_relative_eq!(v.norm(), 2.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn classify_identical_pair() {
        let mesh = unit_right_triangle();
        let cls = mesh.classify_pair(0, 0).unwrap();
        assert_eq!(cls.case, PairCase::Identical);
        assert_eq!(cls.sigma_order, [0, 1, 2]);
        assert_eq!(cls.tau_order, [0, 1, 2]);
        assert_relative_eq!(cls.tau_normal.z, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn classify_shared_edge_aligns_parametrizations() {
        // σ=(a,b,c), τ=(b,a,d): the common edge must be traversed identically
        // by both canonical orders.
        let mesh = SurfaceMesh::new(
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 0.0),
                Vec3::new(0.0, -1.0, 0.5),
            ],
            vec![[0, 1, 2], [1, 0, 3]],
        )
        .unwrap();
        let cls = mesh.classify_pair(0, 1).unwrap();
        assert_eq!(cls.case, PairCase::SharedEdge);
        let gs = mesh.triangle_geometry(0, cls.sigma_order).unwrap();
        let gt = mesh.triangle_geometry(1, cls.tau_order).unwrap();
        for t in [0.0, 0.25, 0.5, 1.0] {
            let xs = gs.p + t * gs.v;
            let xt = gt.p + t * gt.v;
            assert_relative_eq!((xs - xt).norm(), 0.0, epsilon = 1e-14);
        }
        // τ's stored orientation supplies the normal even though σ was
        // reordered by an odd permutation.
        let gt_orig = mesh.triangle_geometry(1, [0, 1, 2]).unwrap();
        assert_relative_eq!((cls.tau_normal - gt_orig.normal).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn classify_shared_vertex_starts_at_common_vertex() {
        let mesh = SurfaceMesh::new(
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 0.0),
                Vec3::new(-1.0, 0.0, 0.3),
                Vec3::new(-1.0, -1.0, 0.3),
            ],
            vec![[0, 1, 2], [3, 4, 0]],
        )
        .unwrap();
        let cls = mesh.classify_pair(0, 1).unwrap();
        assert_eq!(cls.case, PairCase::SharedVertex);
        let gs = mesh.triangle_geometry(0, cls.sigma_order).unwrap();
        let gt = mesh.triangle_geometry(1, cls.tau_order).unwrap();
        assert_relative_eq!((gs.p - gt.p).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn classification_case_is_symmetric() {
        let mesh = SurfaceMesh::build_icosphere(1, 1.0).unwrap();
        for i in 0..mesh.triangle_count() {
            for j in 0..mesh.triangle_count() {
                let a = mesh.classify_pair(i, j).unwrap().case;
                let b = mesh.classify_pair(j, i).unwrap().case;
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn geometry_follows_permuted_order() {
        let mesh = unit_right_triangle();
        let g = mesh.triangle_geometry(0, [0, 1, 2]).unwrap();
        assert_relative_eq!((g.v - Vec3::new(1.0, 0.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        assert_relative_eq!((g.w - Vec3::new(0.0, 1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        assert_relative_eq!(g.gram, 1.0, epsilon = 1e-15);
        assert_relative_eq!((g.normal - Vec3::new(0.0, 0.0, 1.0)).norm(), 0.0, epsilon = 1e-15);
        // Swapped first two vertices: p moves, v flips, w spans p1→p3.
        let g = mesh.triangle_geometry(0, [1, 0, 2]).unwrap();
        assert_relative_eq!((g.p - Vec3::new(1.0, 0.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        assert_relative_eq!((g.v - Vec3::new(-1.0, 0.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        assert_relative_eq!((g.w - Vec3::new(1.0, 1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        assert_relative_eq!(g.gram, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn geometry_scales_quadratically() {
        let mesh = SurfaceMesh::new(
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(2.0, 0.0, 0.0),
                Vec3::new(2.0, 2.0, 0.0),
            ],
            vec![[0, 1, 2]],
        )
        .unwrap();
        let g = mesh.triangle_geometry(0, [0, 1, 2]).unwrap();
        assert_relative_eq!(g.gram, 4.0, epsilon = 1e-15);
        assert_relative_eq!(g.area, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn linear_coeffs_reproduce_nodal_values() {
        // Constant function.
        assert_eq!(local_linear_coeffs([1.0, 1.0, 1.0], [0, 1, 2]), (1.0, 0.0, 0.0));
        // Hat at the first vertex, identity and permuted orders.
        assert_eq!(local_linear_coeffs([1.0, 0.0, 0.0], [0, 1, 2]), (1.0, -1.0, 0.0));
        assert_eq!(local_linear_coeffs([1.0, 0.0, 0.0], [1, 0, 2]), (0.0, 1.0, -1.0));
        // Evaluating a0 + a1y₁ + a2y₂ at the permuted reference vertices
        // (0,0), (1,0), (1,1) returns the permuted nodal values.
        let nodal = [0.3, -1.2, 2.7];
        for order in [[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]] {
            let (a0, a1, a2) = local_linear_coeffs(nodal, order);
            let eval = |y1: f64, y2: f64| a0 + a1 * y1 + a2 * y2;
            assert_relative_eq!(eval(0.0, 0.0), nodal[order[0]], epsilon = 1e-15);
            assert_relative_eq!(eval(1.0, 0.0), nodal[order[1]], epsilon = 1e-15);
            assert_relative_eq!(eval(1.0, 1.0), nodal[order[2]], epsilon = 1e-15);
        }
    }
}
