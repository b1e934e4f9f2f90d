//! Fully numerical reference integrator for pair integrals.
//!
//! Every singular pair integral is regularized by the case-dependent
//! coordinate transforms onto the unit 4-cube and then evaluated with
//! tensorized Gauss-Legendre quadrature. This module is deliberately
//! independent of the closed forms in `slp`/`dlp`: it is the oracle they are
//! validated against, and it assembles the reference matrices for the
//! convergence experiment.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mesh::{local_linear_coeffs, PairCase, SurfaceMesh, TriangleGeometry};
use crate::quad::{gauss_legendre, QuadratureRule};
use crate::{DenseMatrix, Vec3};

/// Maximum tensor order accepted by the oracle (order⁴ evaluations per pair).
pub const MAX_ORACLE_ORDER: usize = 32;

const INV_4PI: f64 = 1.0 / (4.0 * std::f64::consts::PI);

/// Kernel selector: single layer 1/(4π|x−y|) or double layer
/// (x−y)·n(y)/(4π|x−y|³).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    Slp,
    Dlp,
}

/// A pair integrand in regularized form: the canonical parametrizations of
/// the test triangle σ (carrying x) and the trial triangle τ (carrying y),
/// the trial coefficients, and the case/kernel tags selecting the transform.
#[derive(Debug, Clone)]
pub struct RegularizedIntegrand {
    pub case: PairCase,
    pub kernel: Kernel,
    pub p_sigma: Vec3,
    pub e1_sigma: Vec3,
    pub e2_sigma: Vec3,
    pub gram_sigma: f64,
    pub p_tau: Vec3,
    pub e1_tau: Vec3,
    pub e2_tau: Vec3,
    pub gram_tau: f64,
    /// Unit normal of τ in its original stored orientation (DLP only).
    pub tau_normal: Vec3,
    /// Trial coefficients (a0,a1,a2) of a0 + a1y₁ + a2y₂; (1,0,0) for SLP.
    pub trial: [f64; 3],
}

impl RegularizedIntegrand {
    /// Builds the integrand for the mesh pair (σ = triangle `i`, τ = triangle
    /// `j`) with nodal trial values given in τ's original vertex order.
    pub fn from_pair(
        mesh: &SurfaceMesh,
        i: usize,
        j: usize,
        kernel: Kernel,
        nodal_values: [f64; 3],
    ) -> Result<Self> {
        let cls = mesh.classify_pair(i, j)?;
        let sigma = mesh.triangle_geometry(i, cls.sigma_order)?;
        let tau = mesh.triangle_geometry(j, cls.tau_order)?;
        let trial = match kernel {
            Kernel::Slp => [1.0, 0.0, 0.0],
            Kernel::Dlp => {
                let (a0, a1, a2) = local_linear_coeffs(nodal_values, cls.tau_order);
                [a0, a1, a2]
            }
        };
        Ok(Self::from_parts(
            cls.case,
            kernel,
            &sigma,
            &tau,
            cls.tau_normal,
            trial,
        ))
    }

    /// Builds the integrand from already-canonicalized pair geometry.
    pub fn from_parts(
        case: PairCase,
        kernel: Kernel,
        sigma: &TriangleGeometry,
        tau: &TriangleGeometry,
        tau_normal: Vec3,
        trial: [f64; 3],
    ) -> Self {
        RegularizedIntegrand {
            case,
            kernel,
            p_sigma: sigma.p,
            e1_sigma: sigma.v,
            e2_sigma: sigma.w,
            gram_sigma: sigma.gram,
            p_tau: tau.p,
            e1_tau: tau.v,
            e2_tau: tau.w,
            gram_tau: tau.gram,
            tau_normal,
            trial,
        }
    }

    /// Integrals of kernel × (1, y₁, y₂) over the pair, including the Gram
    /// and 1/(4π) prefactors; the pair integral is `trial · moments`.
    pub(crate) fn moment_sums(&self, order: usize) -> Result<[f64; 3]> {
        if order == 0 || order > MAX_ORACLE_ORDER {
            return Err(Error::invalid(format!(
                "oracle order {order} outside 1..={MAX_ORACLE_ORDER}"
            )));
        }
        let rule = gauss_legendre(order)?;
        let raw = match self.case {
            PairCase::Identical => {
                return Err(Error::invalid(
                    "moment sums are not defined for identical pairs",
                ))
            }
            PairCase::SharedEdge => self.tensor_sums(&rule, &EDGE_MAPS),
            PairCase::SharedVertex => self.tensor_sums(&rule, &VERTEX_MAPS),
            PairCase::Disjoint => self.disjoint_sums(&rule),
        };
        let scale = self.gram_sigma * self.gram_tau * INV_4PI;
        Ok([raw[0] * scale, raw[1] * scale, raw[2] * scale])
    }

    /// Tensorized evaluation of the listed maps. For fixed (η₁,η₂,η₃) every
    /// map is affine in η₄, so the squared distance is a quadratic in η₄ whose
    /// coefficients are hoisted out of the innermost loop.
    fn tensor_sums(&self, rule: &QuadratureRule, maps: &[RegularizedMap]) -> [f64; 3] {
        let n = rule.order();
        let mut total = [0.0; 3];
        for map in maps {
            let mut map_sum = [0.0; 3];
            for k1 in 0..n {
                let e1 = rule.nodes[k1];
                for k2 in 0..n {
                    let e2 = rule.nodes[k2];
                    for k3 in 0..n {
                        let e3 = rule.nodes[k3];
                        let (base, dir) = (map.eval)(e1, e2, e3);
                        let xb = self.p_sigma + base[0] * self.e1_sigma + base[1] * self.e2_sigma;
                        let xd = dir[0] * self.e1_sigma + dir[1] * self.e2_sigma;
                        let yb = self.p_tau + base[2] * self.e1_tau + base[3] * self.e2_tau;
                        let yd = dir[2] * self.e1_tau + dir[3] * self.e2_tau;
                        let s = xb - yb;
                        let t = xd - yd;
                        let c0 = s.norm_squared();
                        let c1 = 2.0 * s.dot(&t);
                        let c2 = t.norm_squared();
                        let mut acc = [0.0; 3];
                        match self.kernel {
                            Kernel::Slp => {
                                for k4 in 0..n {
                                    let e4 = rule.nodes[k4];
                                    let d2 = c0 + e4 * (c1 + e4 * c2);
                                    let val = rule.weights[k4] / d2.sqrt();
                                    acc[0] += val;
                                    acc[1] += val * (base[2] + e4 * dir[2]);
                                    acc[2] += val * (base[3] + e4 * dir[3]);
                                }
                            }
                            Kernel::Dlp => {
                                let nb = s.dot(&self.tau_normal);
                                let nd = t.dot(&self.tau_normal);
                                for k4 in 0..n {
                                    let e4 = rule.nodes[k4];
                                    let d2 = c0 + e4 * (c1 + e4 * c2);
                                    let val = rule.weights[k4] * (nb + e4 * nd)
                                        / (d2 * d2.sqrt());
                                    acc[0] += val;
                                    acc[1] += val * (base[2] + e4 * dir[2]);
                                    acc[2] += val * (base[3] + e4 * dir[3]);
                                }
                            }
                        }
                        let w = rule.weights[k1]
                            * rule.weights[k2]
                            * rule.weights[k3]
                            * (map.weight)(e1, e2, e3);
                        for (tot, a) in map_sum.iter_mut().zip(acc) {
                            *tot += w * a;
                        }
                    }
                }
            }
            for (tot, m) in total.iter_mut().zip(map_sum) {
                *tot += m;
            }
        }
        total
    }

    /// Disjoint pairs: the double Duffy transform (η₁, η₁η₂, η₃, η₃η₄) with
    /// weight η₁η₃ factorizes into independent σ- and τ-side point lists.
    fn disjoint_sums(&self, rule: &QuadratureRule) -> [f64; 3] {
        let n = rule.order();
        let m = n * n;
        let mut xs = vec![0.0; m];
        let mut ys = vec![0.0; m];
        let mut zs = vec![0.0; m];
        let mut wx = vec![0.0; m];
        let (mut tx, mut ty, mut tz) = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
        let mut wy = vec![0.0; m];
        let (mut y1s, mut y2s) = (vec![0.0; m], vec![0.0; m]);
        let mut idx = 0;
        for ka in 0..n {
            let ea = rule.nodes[ka];
            for kb in 0..n {
                let eb = rule.nodes[kb];
                let duffy_w = rule.weights[ka] * rule.weights[kb] * ea;
                let x = self.p_sigma + ea * self.e1_sigma + ea * eb * self.e2_sigma;
                xs[idx] = x.x;
                ys[idx] = x.y;
                zs[idx] = x.z;
                wx[idx] = duffy_w;
                let y = self.p_tau + ea * self.e1_tau + ea * eb * self.e2_tau;
                tx[idx] = y.x;
                ty[idx] = y.y;
                tz[idx] = y.z;
                wy[idx] = duffy_w;
                y1s[idx] = ea;
                y2s[idx] = ea * eb;
                idx += 1;
            }
        }
        let normal = self.tau_normal;
        let mut total = [0.0; 3];
        for i in 0..m {
            let (px, py, pz, wi) = (xs[i], ys[i], zs[i], wx[i]);
            let mut acc = [0.0; 3];
            match self.kernel {
                Kernel::Slp => {
                    for j in 0..m {
                        let dx = px - tx[j];
                        let dy = py - ty[j];
                        let dz = pz - tz[j];
                        let d2 = dx * dx + dy * dy + dz * dz;
                        let val = wy[j] / d2.sqrt();
                        acc[0] += val;
                        acc[1] += val * y1s[j];
                        acc[2] += val * y2s[j];
                    }
                }
                Kernel::Dlp => {
                    for j in 0..m {
                        let dx = px - tx[j];
                        let dy = py - ty[j];
                        let dz = pz - tz[j];
                        let d2 = dx * dx + dy * dy + dz * dz;
                        let numer = dx * normal.x + dy * normal.y + dz * normal.z;
                        let val = wy[j] * numer / (d2 * d2.sqrt());
                        acc[0] += val;
                        acc[1] += val * y1s[j];
                        acc[2] += val * y2s[j];
                    }
                }
            }
            for (tot, a) in total.iter_mut().zip(acc) {
                *tot += wi * a;
            }
        }
        total
    }
}

/// One regularization map: (η₁,η₂,η₃) ↦ affine-in-η₄ coordinates
/// (x₁,x₂,y₁,y₂) = base + η₄·dir, plus the map's scalar weight.
struct RegularizedMap {
    eval: fn(f64, f64, f64) -> ([f64; 4], [f64; 4]),
    weight: fn(f64, f64, f64) -> f64,
}

fn edge_weight_first(e1: f64, e2: f64, _e3: f64) -> f64 {
    e1.powi(3) * e2 * e2
}

fn edge_weight_rest(e1: f64, e2: f64, e3: f64) -> f64 {
    e1.powi(3) * e2 * e2 * e3
}

/// The five shared-edge transforms in (x₁,x₂,y₁,y₂) order.
static EDGE_MAPS: [RegularizedMap; 5] = [
    RegularizedMap {
        // η₁(1, η₂η₄, 1−η₂η₃, η₂(1−η₃))
        eval: |e1, e2, e3| {
            (
                [e1, 0.0, e1 * (1.0 - e2 * e3), e1 * e2 * (1.0 - e3)],
                [0.0, e1 * e2, 0.0, 0.0],
            )
        },
        weight: edge_weight_first,
    },
    RegularizedMap {
        // η₁(1, η₂, 1−η₂η₃η₄, η₂η₃(1−η₄))
        eval: |e1, e2, e3| {
            let c = e1 * e2 * e3;
            ([e1, e1 * e2, e1, c], [0.0, 0.0, -c, -c])
        },
        weight: edge_weight_rest,
    },
    RegularizedMap {
        // η₁(1−η₂η₃, η₂(1−η₃), 1, η₂η₃η₄)
        eval: |e1, e2, e3| {
            (
                [e1 * (1.0 - e2 * e3), e1 * e2 * (1.0 - e3), e1, 0.0],
                [0.0, 0.0, 0.0, e1 * e2 * e3],
            )
        },
        weight: edge_weight_rest,
    },
    RegularizedMap {
        // η₁(1−η₂η₃η₄, η₂η₃(1−η₄), 1, η₂)
        eval: |e1, e2, e3| {
            let c = e1 * e2 * e3;
            ([e1, c, e1, e1 * e2], [-c, -c, 0.0, 0.0])
        },
        weight: edge_weight_rest,
    },
    RegularizedMap {
        // η₁(1−η₂η₃η₄, η₂(1−η₃η₄), 1, η₂η₃)
        eval: |e1, e2, e3| {
            let c = e1 * e2 * e3;
            ([e1, e1 * e2, e1, c], [-c, -c, 0.0, 0.0])
        },
        weight: edge_weight_rest,
    },
];

/// The two shared-vertex transforms with weight η₁³η₃.
static VERTEX_MAPS: [RegularizedMap; 2] = [
    RegularizedMap {
        // η₁(1, η₂, η₃, η₃η₄)
        eval: |e1, e2, e3| ([e1, e1 * e2, e1 * e3, 0.0], [0.0, 0.0, 0.0, e1 * e3]),
        weight: |e1, _e2, e3| e1.powi(3) * e3,
    },
    RegularizedMap {
        // η₁(η₃, η₃η₄, 1, η₂)
        eval: |e1, e2, e3| ([e1 * e3, 0.0, e1, e1 * e2], [0.0, e1 * e3, 0.0, 0.0]),
        weight: |e1, _e2, e3| e1.powi(3) * e3,
    },
];

/// Identical-pair SLP integral via the exact 1D reduction: for σ=τ the four
/// iterated integrals collapse to g²/(12π)·∫₀¹ [1/|ηv+w| + 1/|ηw+v| +
/// 1/|η(w+v)−w|] dη, evaluated here by Gauss quadrature.
pub fn identical_slp_quadrature(geom: &TriangleGeometry, order: usize) -> Result<f64> {
    let rule = gauss_legendre(order)?;
    let (v, w) = (geom.v, geom.w);
    let integral = rule.integrate(|eta| {
        1.0 / (eta * v + w).norm() + 1.0 / (eta * w + v).norm() + 1.0 / (eta * (w + v) - w).norm()
    });
    Ok(geom.gram * geom.gram / (12.0 * std::f64::consts::PI) * integral)
}

/// Reference value of one pair integral by tensorized quadrature of the
/// regularized representation (`order` points per tensor direction).
pub fn oracle_pair_integral(integrand: &RegularizedIntegrand, order: usize) -> Result<f64> {
    if order == 0 || order > MAX_ORACLE_ORDER {
        return Err(Error::invalid(format!(
            "oracle order {order} outside 1..={MAX_ORACLE_ORDER}"
        )));
    }
    if integrand.case == PairCase::Identical {
        return match integrand.kernel {
            // Antisymmetry of the double-layer kernel on a flat element.
            Kernel::Dlp => Ok(0.0),
            Kernel::Slp => {
                let geom = TriangleGeometry {
                    p: integrand.p_tau,
                    v: integrand.e1_tau,
                    w: integrand.e2_tau,
                    gram: integrand.gram_tau,
                    area: 0.5 * integrand.gram_tau,
                    normal: integrand.tau_normal,
                };
                identical_slp_quadrature(&geom, order)
            }
        };
    }
    let sums = integrand.moment_sums(order)?;
    Ok(integrand.trial[0] * sums[0] + integrand.trial[1] * sums[1] + integrand.trial[2] * sums[2])
}

/// Assembles the full Galerkin matrix (V for SLP: N×N; K for DLP: N×M) with
/// EVERY pair, including the singular ones, integrated by the oracle.
/// Disjoint pairs use order `r`, all singular cases order `s`.
pub fn oracle_matrix(
    mesh: &SurfaceMesh,
    kernel: Kernel,
    r: usize,
    s: usize,
) -> Result<DenseMatrix> {
    let n = mesh.triangle_count();
    let cols = match kernel {
        Kernel::Slp => n,
        Kernel::Dlp => mesh.vertex_count(),
    };
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|row| oracle_matrix_row(mesh, kernel, r, s, row, cols))
        .collect::<Result<_>>()?;
    let mut out = DenseMatrix::zeros(n, cols);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, value) in row.into_iter().enumerate() {
            out[(i, j)] = value;
        }
    }
    Ok(out)
}

fn oracle_matrix_row(
    mesh: &SurfaceMesh,
    kernel: Kernel,
    r: usize,
    s: usize,
    row: usize,
    cols: usize,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; cols];
    for j in 0..mesh.triangle_count() {
        let cls = mesh.classify_pair(row, j)?;
        let order = match cls.case {
            PairCase::Disjoint => r,
            _ => s,
        };
        match kernel {
            Kernel::Slp => {
                let value = if cls.case == PairCase::Identical {
                    let geom = mesh.triangle_geometry(j, [0, 1, 2])?;
                    identical_slp_quadrature(&geom, s)?
                } else {
                    let sigma = mesh.triangle_geometry(row, cls.sigma_order)?;
                    let tau = mesh.triangle_geometry(j, cls.tau_order)?;
                    let integrand = RegularizedIntegrand::from_parts(
                        cls.case,
                        kernel,
                        &sigma,
                        &tau,
                        cls.tau_normal,
                        [1.0, 0.0, 0.0],
                    );
                    integrand.moment_sums(order)?[0]
                };
                out[j] = value;
            }
            Kernel::Dlp => {
                if cls.case == PairCase::Identical {
                    continue;
                }
                let sigma = mesh.triangle_geometry(row, cls.sigma_order)?;
                let tau = mesh.triangle_geometry(j, cls.tau_order)?;
                let integrand = RegularizedIntegrand::from_parts(
                    cls.case,
                    kernel,
                    &sigma,
                    &tau,
                    cls.tau_normal,
                    [1.0, 0.0, 0.0],
                );
                let sums = integrand.moment_sums(order)?;
                let tri = mesh.triangles()[j];
                for k in 0..3 {
                    let mut nodal = [0.0; 3];
                    nodal[k] = 1.0;
                    let (a0, a1, a2) = local_linear_coeffs(nodal, cls.tau_order);
                    out[tri[k]] += a0 * sums[0] + a1 * sums[1] + a2 * sums[2];
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::triangle_geometry_from_points;
    use approx::assert_relative_eq;

    fn pair_integrand(
        case: PairCase,
        kernel: Kernel,
        sigma: (Vec3, Vec3, Vec3),
        tau: (Vec3, Vec3, Vec3),
        trial: [f64; 3],
    ) -> RegularizedIntegrand {
        let gs = triangle_geometry_from_points(sigma.0, sigma.1, sigma.2).unwrap();
        let gt = triangle_geometry_from_points(tau.0, tau.1, tau.2).unwrap();
        let normal = gt.normal;
        RegularizedIntegrand::from_parts(case, kernel, &gs, &gt, normal, trial)
    }

    fn spec_edge_pair(kernel: Kernel, trial: [f64; 3]) -> RegularizedIntegrand {
        // τ=(0,0,0),(1,0,0),(1,1,0), σ=(0,0,0),(1,0,0),(1,0,1): both triangles
        // start with the shared edge in the same direction.
        pair_integrand(
            PairCase::SharedEdge,
            kernel,
            (
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 1.0),
            ),
            (
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 0.0),
            ),
            trial,
        )
    }

    #[test]
    fn identical_dlp_is_exactly_zero() {
        let q = pair_integrand(
            PairCase::Identical,
            Kernel::Dlp,
            (
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 0.0),
            ),
            (
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 0.0),
            ),
            [1.0, 0.0, 0.0],
        );
        assert_eq!(oracle_pair_integral(&q, 8).unwrap(), 0.0);
    }

    #[test]
    fn distant_slp_pair_matches_point_asymptotics() {
        // Two unit-area triangles 100 apart: I ≈ AσAτ/(4πd).
        let d = 100.0;
        let q = pair_integrand(
            PairCase::Disjoint,
            Kernel::Slp,
            (
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(2.0, 0.0, 0.0),
                Vec3::new(2.0, 1.0, 0.0),
            ),
            (
                Vec3::new(0.0, 0.0, d),
                Vec3::new(2.0, 0.0, d),
                Vec3::new(2.0, 1.0, d),
            ),
            [1.0, 0.0, 0.0],
        );
        let value = oracle_pair_integral(&q, 8).unwrap();
        let expected = 1.0 / (4.0 * std::f64::consts::PI * d);
        assert_relative_eq!(value, expected, max_relative = 0.01);
    }

    #[test]
    fn edge_oracle_self_convergence_certificate() {
        let q = spec_edge_pair(Kernel::Slp, [1.0, 0.0, 0.0]);
        let coarse = oracle_pair_integral(&q, 16).unwrap();
        let fine = oracle_pair_integral(&q, 20).unwrap();
        assert_relative_eq!(coarse, fine, max_relative = 1e-11);
    }

    #[test]
    fn oracle_differences_decay_geometrically() {
        for kernel in [Kernel::Slp, Kernel::Dlp] {
            let q = spec_edge_pair(kernel, [1.0, -0.5, 0.25]);
            let orders = [8, 12, 16, 20, 24];
            let values: Vec<f64> = orders
                .iter()
                .map(|&k| oracle_pair_integral(&q, k).unwrap())
                .collect();
            let scale = values[4].abs();
            let mut diffs = Vec::new();
            for i in 0..4 {
                diffs.push((values[i + 1] - values[i]).abs());
            }
            for i in 0..3 {
                // Each refinement shrinks the change, until rounding floor.
                assert!(
                    diffs[i + 1] <= 0.7 * diffs[i] || diffs[i + 1] <= 1e-13 * scale,
                    "kernel {kernel:?}: differences {diffs:?} not geometric"
                );
            }
            assert!(diffs[3] <= 1e-10 * scale, "tail difference too large: {diffs:?}");
        }
    }

    #[test]
    fn vertex_oracle_self_convergence() {
        for kernel in [Kernel::Slp, Kernel::Dlp] {
            let q = pair_integrand(
                PairCase::SharedVertex,
                kernel,
                (
                    Vec3::new(0.0, 0.0, 0.0),
                    Vec3::new(-1.0, 0.3, 0.1),
                    Vec3::new(-1.0, -0.7, 0.4),
                ),
                (
                    Vec3::new(0.0, 0.0, 0.0),
                    Vec3::new(1.0, 0.0, 0.0),
                    Vec3::new(1.0, 1.0, 0.0),
                ),
                [0.7, 0.2, -0.4],
            );
            let coarse = oracle_pair_integral(&q, 16).unwrap();
            let fine = oracle_pair_integral(&q, 20).unwrap();
            assert_relative_eq!(coarse, fine, max_relative = 1e-10);
        }
    }

    #[test]
    fn single_triangle_slp_matrix_is_the_identical_value() {
        let mesh = SurfaceMesh::new(
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2]],
        )
        .unwrap();
        let m = oracle_matrix(&mesh, Kernel::Slp, 8, 20).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (1, 1));
        let geom = mesh.triangle_geometry(0, [0, 1, 2]).unwrap();
        let direct = identical_slp_quadrature(&geom, 20).unwrap();
        assert_relative_eq!(m[(0, 0)], direct, epsilon = 1e-15);
    }

    #[test]
    fn two_triangle_slp_matrix_is_symmetric() {
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
        let m = oracle_matrix(&mesh, Kernel::Slp, 16, 16).unwrap();
        assert!(m[(0, 1)] > 0.0);
        assert_relative_eq!(m[(0, 1)], m[(1, 0)], max_relative = 1e-13);
    }

    #[test]
    fn icosphere_dlp_row_identity() {
        // Interior Laplace identity: (½M+K)·1 ≈ 0, approximately at the
        // discrete level.
        let mesh = SurfaceMesh::build_icosphere(1, 1.0).unwrap();
        let k = oracle_matrix(&mesh, Kernel::Dlp, 16, 16).unwrap();
        let m = crate::assembly::assemble_m(&mesh);
        let ones = nalgebra::DVector::from_element(mesh.vertex_count(), 1.0);
        let residual = (0.5 * &m + &k) * ones;
        let max_row = residual.amax();
        assert!(
            max_row <= 1e-3 * k.norm(),
            "row identity residual {max_row} vs ‖K‖={}", k.norm()
        );
    }
}
