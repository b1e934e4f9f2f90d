//! Seeded random-geometry generators shared by the integration suites.
//!
//! All generators emit canonically ordered pairs: the shared edge first and
//! in the same direction for edge pairs, the shared vertex first for vertex
//! pairs. Non-degeneracy is enforced quantitatively: every triangle keeps
//! 2·area/longest_edge² ≥ 0.45 (minimum angle around 30°), and each pair
//! keeps a fixed angular or spatial margin beyond the shared feature. Within
//! these floors the order-20 regularized reference is itself converged well
//! beyond the comparison tolerances (checked by order sweeps up to 32), so
//! closed-form-vs-reference comparisons measure the closed forms and not the
//! reference.

#![allow(dead_code)]

use bem_core::mesh::triangle_geometry_from_points;
use bem_core::{TriangleGeometry, Vec3};
use nalgebra::{Rotation3, Unit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape floor: 2·area divided by the squared longest edge.
const MIN_SHAPE: f64 = 0.45;

fn shape(g: &TriangleGeometry) -> f64 {
    let longest = g
        .v
        .norm_squared()
        .max(g.w.norm_squared())
        .max((g.v + g.w).norm_squared());
    g.gram / longest
}

/// Both triangles keep the shared edge (0,0,0)→(len,0,0); the third vertices
/// lie in opposite y half-spaces with a height floor, and the dihedral angle
/// between the flaps stays at least ~25° away from flat (nearly coplanar
/// double-layer integrals vanish and carry no relative-error information).
pub fn shared_edge_pair(rng: &mut ChaCha8Rng) -> (TriangleGeometry, TriangleGeometry) {
    loop {
        let len = rng.gen_range(0.7..1.4);
        let a = Vec3::zeros();
        let b = Vec3::new(len, 0.0, 0.0);
        let third = |rng: &mut ChaCha8Rng, side: f64| {
            Vec3::new(
                rng.gen_range(-0.2..len + 0.2),
                side * rng.gen_range(0.5..1.15),
                rng.gen_range(-0.55..0.55),
            )
        };
        let tau = triangle_geometry_from_points(a, b, third(rng, 1.0));
        let sigma = triangle_geometry_from_points(a, b, third(rng, -1.0));
        let (Ok(gt), Ok(gs)) = (tau, sigma) else {
            continue;
        };
        if shape(&gt) < MIN_SHAPE || shape(&gs) < MIN_SHAPE {
            continue;
        }
        if gt.normal.dot(&gs.normal).abs() > 0.85 {
            continue;
        }
        return (gs, gt);
    }
}

/// Shared vertex at the origin; τ's remaining vertices lie in x ≥ 0.6 and
/// σ's in x ≤ −0.6 with |y|,|z| ≤ 0.65, so every edge direction stays at
/// least ~33° away from the separating plane and the triangles meet only at
/// the origin with a wide angular gap.
pub fn shared_vertex_pair(rng: &mut ChaCha8Rng) -> (TriangleGeometry, TriangleGeometry) {
    loop {
        let pick = |rng: &mut ChaCha8Rng, sign: f64| {
            Vec3::new(
                sign * rng.gen_range(0.6..1.2),
                rng.gen_range(-0.65..0.65),
                rng.gen_range(-0.65..0.65),
            )
        };
        let tau = triangle_geometry_from_points(Vec3::zeros(), pick(rng, 1.0), pick(rng, 1.0));
        let sigma = triangle_geometry_from_points(Vec3::zeros(), pick(rng, -1.0), pick(rng, -1.0));
        let (Ok(gt), Ok(gs)) = (tau, sigma) else {
            continue;
        };
        if shape(&gt) < MIN_SHAPE || shape(&gs) < MIN_SHAPE {
            continue;
        }
        // Keep the test triangle on one side of τ's plane with margin: the
        // double-layer numerator is the out-of-plane coordinate of σ, and a
        // sign change across σ deflates the pair integral towards its zero
        // set, where relative errors carry no information.
        let d1 = gs.v.dot(&gt.normal);
        let d2 = (gs.v + gs.w).dot(&gt.normal);
        if d1 * d2 <= 0.0
            || d1.abs() < 0.25 * gs.v.norm()
            || d2.abs() < 0.25 * (gs.v + gs.w).norm()
        {
            continue;
        }
        return (gs, gt);
    }
}

/// Disjoint pair: σ near the origin, τ at center distance 3–7 in a random
/// direction; both triangles fit in balls of radius ≈ 1.
pub fn disjoint_pair(rng: &mut ChaCha8Rng) -> (TriangleGeometry, TriangleGeometry) {
    let triangle = |rng: &mut ChaCha8Rng, center: Vec3| loop {
        let p = |rng: &mut ChaCha8Rng| {
            center
                + Vec3::new(
                    rng.gen_range(-0.6..0.6),
                    rng.gen_range(-0.6..0.6),
                    rng.gen_range(-0.6..0.6),
                )
        };
        if let Ok(geom) = triangle_geometry_from_points(p(rng), p(rng), p(rng)) {
            if shape(&geom) >= MIN_SHAPE && geom.gram >= 0.2 {
                return geom;
            }
        }
    };
    let gs = triangle(rng, Vec3::zeros());
    let direction = loop {
        let d = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        if d.norm() > 0.1 {
            break d / d.norm();
        }
    };
    let distance = rng.gen_range(3.0..7.0);
    loop {
        let gt = triangle(rng, distance * direction);
        // Same deflation guard as the vertex family: every corner of the
        // test triangle must sit on the same side of τ's plane with margin,
        // or the double-layer value collapses towards its sign change.
        let offsets = [gs.p, gs.p + gs.v, gs.p + gs.v + gs.w].map(|c| c - gt.p);
        let dots = offsets.map(|o| o.dot(&gt.normal));
        if dots.iter().all(|d| *d > 0.0) || dots.iter().all(|d| *d < 0.0) {
            let margin_ok = offsets
                .iter()
                .zip(&dots)
                .all(|(o, d)| d.abs() >= 0.25 * o.norm());
            if margin_ok {
                return (gs, gt);
            }
        }
    }
}

/// Random proper rotation and translation.
pub fn rigid_motion(rng: &mut ChaCha8Rng) -> (Rotation3<f64>, Vec3) {
    let axis = loop {
        let d = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        if d.norm() > 0.1 {
            break Unit::new_normalize(d);
        }
    };
    let rotation = Rotation3::from_axis_angle(&axis, rng.gen_range(0.0..std::f64::consts::TAU));
    let shift = Vec3::new(
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
    );
    (rotation, shift)
}

/// The three stored corner points of a canonical geometry.
pub fn corners(geom: &TriangleGeometry) -> [Vec3; 3] {
    [geom.p, geom.p + geom.v, geom.p + geom.v + geom.w]
}

/// Rebuilds the geometry from transformed corner points.
pub fn map_geometry(geom: &TriangleGeometry, f: impl Fn(Vec3) -> Vec3) -> TriangleGeometry {
    let [a, b, c] = corners(geom);
    triangle_geometry_from_points(f(a), f(b), f(c)).expect("mapped triangle stays non-degenerate")
}
