//! Scratch diagnostic: replicates the randomized acceptance protocols with
//! fresh per-criterion streams across many seeds and prints worst-case
//! margins.

#[path = "../tests/common/mod.rs"]
mod common;

use bem_core::dlp::{dlp_edge, dlp_farfield, dlp_vertex};
use bem_core::mesh::local_linear_coeffs;
use bem_core::oracle::{oracle_pair_integral, Kernel, RegularizedIntegrand};
use bem_core::slp::{slp_edge, slp_farfield, slp_identical, slp_vertex};
use bem_core::{PairCase, TriangleGeometry, Vec3};
use rand::Rng;

const NODAL: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

fn coeffs(nodal: [f64; 3]) -> [f64; 3] {
    let (a0, a1, a2) = local_linear_coeffs(nodal, [0, 1, 2]);
    [a0, a1, a2]
}

fn oracle_at(
    case: PairCase,
    kernel: Kernel,
    gs: &TriangleGeometry,
    gt: &TriangleGeometry,
    trial: [f64; 3],
    order: usize,
) -> f64 {
    let q = RegularizedIntegrand::from_parts(case, kernel, gs, gt, gt.normal, trial);
    oracle_pair_integral(&q, order).unwrap()
}

fn rel(v: f64, r: f64) -> f64 {
    ((v - r) / r).abs()
}

fn main() {
    for seed in [101u64, 202, 303, 404, 505, 606, 7, 99, 1234, 31415] {
        eprintln!("[{seed}] c1");
        // Criterion 1 protocol.
        let mut rng = common::rng(seed);
        let mut c1 = 0.0f64;
        for _ in 0..200 {
            let (gs, gt) = common::shared_edge_pair(&mut rng);
            let v = slp_edge(gt.w, gt.v, gs.w, gs.gram, gt.gram).unwrap();
            let r = oracle_at(PairCase::SharedEdge, Kernel::Slp, &gs, &gt, [1.0, 0.0, 0.0], 20);
            c1 = c1.max(rel(v, r));
        }

        eprintln!("[{seed}] c2");
        // Criterion 2 protocol.
        let mut rng = common::rng(seed);
        let mut c2 = 0.0f64;
        let fallback_before = bem_core::dlp::fallback_invocations();
        for _ in 0..200 {
            let (gs, gt) = common::shared_edge_pair(&mut rng);
            for nodal in NODAL {
                let a = coeffs(nodal);
                let v = dlp_edge(gt.w, gt.v, gs.w, gt.normal, a, gs.gram, gt.gram).unwrap();
                let r = oracle_at(PairCase::SharedEdge, Kernel::Dlp, &gs, &gt, a, 20);
                c2 = c2.max(rel(v, r));
            }
        }
        let fb_rate =
            (bem_core::dlp::fallback_invocations() - fallback_before) as f64 / (200.0 * 30.0);

        eprintln!("[{seed}] c3");
        // Criterion 3 protocol.
        let mut rng = common::rng(seed);
        let (mut vx_s, mut vx_d, mut far_s, mut far_d) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for i in 0..200 {
            eprintln!("vx {i}");
            let (gs, gt) = common::shared_vertex_pair(&mut rng);
            let v = slp_vertex(gt.v, gt.w, gs.v, gs.w, gs.gram, gt.gram, 12).unwrap();
            let r = oracle_at(PairCase::SharedVertex, Kernel::Slp, &gs, &gt, [1.0, 0.0, 0.0], 20);
            vx_s = vx_s.max(rel(v, r));
            for nodal in NODAL {
                let a = coeffs(nodal);
                let v = dlp_vertex(gt.v, gt.w, gs.v, gs.w, gt.normal, a, gs.gram, gt.gram, 12)
                    .unwrap();
                let r = oracle_at(PairCase::SharedVertex, Kernel::Dlp, &gs, &gt, a, 20);
                vx_d = vx_d.max(rel(v, r));
            }
        }
        for i in 0..200 {
            let t0 = std::time::Instant::now();
            let (gs, gt) = common::disjoint_pair(&mut rng);
            if i == 0 {
                eprintln!("far0 fingerprint gs.p={:?} gt.p={:?}", gs.p, gt.p);
            }
            let gen_us = t0.elapsed().as_micros();
            let p = gt.p - gs.p;
            let v = slp_farfield(p, gt.v, gt.w, gs.v, gs.w, gs.gram, gt.gram, 12).unwrap();
            let r = oracle_at(PairCase::Disjoint, Kernel::Slp, &gs, &gt, [1.0, 0.0, 0.0], 20);
            far_s = far_s.max(rel(v, r));
            for nodal in NODAL {
                let a = coeffs(nodal);
                let v = dlp_farfield(p, gt.v, gt.w, gs.v, gs.w, gt.normal, a, gs.gram, gt.gram, 12)
                    .unwrap();
                let r = oracle_at(PairCase::Disjoint, Kernel::Dlp, &gs, &gt, a, 20);
                far_d = far_d.max(rel(v, r));
            }
            let tot_us = t0.elapsed().as_micros();
            if tot_us > 20_000 {
                eprintln!("far {i}: gen={gen_us}us total={tot_us}us");
            }
        }

        eprintln!("[{seed}] c6");
        // Criterion 6 protocol (kernel invariances only).
        let mut rng = common::rng(seed);
        let (mut rigid, mut scale, mut linear) = (0.0f64, 0.0f64, 0.0f64);
        let mut rigid_info = (0usize, 0.0f64);
        let mut scale_info = (0usize, 0.0f64);
        // For DLP nodal entries, how small the value is next to its two
        // sibling bases of the same kernel; 1.0 for the SLP entries.
        let deflation = |base: &[f64], k: usize| -> f64 {
            if k < 4 {
                return 1.0;
            }
            let i = (k - 4) % 3;
            let row = [base[4 + i].abs(), base[7 + i].abs(), base[10 + i].abs()];
            base[k].abs() / row.iter().cloned().fold(0.0f64, f64::max)
        };
        for _ in 0..20 {
            let (es, et) = common::shared_edge_pair(&mut rng);
            let (vs, vt) = common::shared_vertex_pair(&mut rng);
            let (ds, dt) = common::disjoint_pair(&mut rng);
            let a = coeffs([
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ]);
            let values = |es: &TriangleGeometry,
                          et: &TriangleGeometry,
                          vs: &TriangleGeometry,
                          vt: &TriangleGeometry,
                          ds: &TriangleGeometry,
                          dt: &TriangleGeometry|
             -> Vec<f64> {
                let mut out = vec![
                    slp_identical(et).unwrap(),
                    slp_edge(et.w, et.v, es.w, es.gram, et.gram).unwrap(),
                    slp_vertex(vt.v, vt.w, vs.v, vs.w, vs.gram, vt.gram, 14).unwrap(),
                    slp_farfield(dt.p - ds.p, dt.v, dt.w, ds.v, ds.w, ds.gram, dt.gram, 10)
                        .unwrap(),
                ];
                for nodal in NODAL {
                    let a = coeffs(nodal);
                    out.push(dlp_edge(et.w, et.v, es.w, et.normal, a, es.gram, et.gram).unwrap());
                    out.push(
                        dlp_vertex(vt.v, vt.w, vs.v, vs.w, vt.normal, a, vs.gram, vt.gram, 14)
                            .unwrap(),
                    );
                    out.push(
                        dlp_farfield(dt.p - ds.p, dt.v, dt.w, ds.v, ds.w, dt.normal, a, ds.gram, dt.gram, 10)
                            .unwrap(),
                    );
                }
                out
            };
            let base = values(&es, &et, &vs, &vt, &ds, &dt);
            let (rot, shift) = common::rigid_motion(&mut rng);
            let move_point = |x: Vec3| rot * x + shift;
            let moved = values(
                &common::map_geometry(&es, move_point),
                &common::map_geometry(&et, move_point),
                &common::map_geometry(&vs, move_point),
                &common::map_geometry(&vt, move_point),
                &common::map_geometry(&ds, move_point),
                &common::map_geometry(&dt, move_point),
            );
            for (k, (m, b)) in moved.iter().zip(&base).enumerate() {
                let e = rel(*m, *b);
                if e > rigid {
                    rigid = e;
                    rigid_info = (k, deflation(&base, k));
                }
            }
            let lambda: f64 = rng.gen_range(0.5..2.0);
            let stretch = |x: Vec3| lambda * x;
            let scaled = values(
                &common::map_geometry(&es, stretch),
                &common::map_geometry(&et, stretch),
                &common::map_geometry(&vs, stretch),
                &common::map_geometry(&vt, stretch),
                &common::map_geometry(&ds, stretch),
                &common::map_geometry(&dt, stretch),
            );
            for (k, (s, b)) in scaled.iter().zip(&base).enumerate() {
                let degree = if k < 4 { 3 } else { 2 };
                let e = rel(*s, lambda.powi(degree) * b);
                if e > scale {
                    scale = e;
                    scale_info = (k, deflation(&base, k));
                }
            }
            let b = coeffs([
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ]);
            let (alpha, beta) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let combined = [
                alpha * a[0] + beta * b[0],
                alpha * a[1] + beta * b[1],
                alpha * a[2] + beta * b[2],
            ];
            let dlp_a = dlp_edge(et.w, et.v, es.w, et.normal, a, es.gram, et.gram).unwrap();
            let dlp_b = dlp_edge(et.w, et.v, es.w, et.normal, b, es.gram, et.gram).unwrap();
            let dlp_ab =
                dlp_edge(et.w, et.v, es.w, et.normal, combined, es.gram, et.gram).unwrap();
            let expected = alpha * dlp_a + beta * dlp_b;
            let denom = (alpha * dlp_a).abs() + (beta * dlp_b).abs();
            linear = linear.max((dlp_ab - expected).abs() / denom.max(1e-300));
        }

        println!(
            "seed {seed:5}: c1 {c1:.2e} c2 {c2:.2e} fb {fb_rate:.4} | c3 vxS {vx_s:.2e} vxD {vx_d:.2e} \
             farS {far_s:.2e} farD {far_d:.2e} | c6 rigid {rigid:.2e} scale {scale:.2e} \
             lin {linear:.2e} | rigid k={} defl {:.2e} scale k={} defl {:.2e}",
            rigid_info.0, rigid_info.1, scale_info.0, scale_info.1
        );
    }
}
