//! Scratch: reproduce seed 101 far pair 160 with timing.
#[path = "../tests/common/mod.rs"]
mod common;

use bem_core::dlp::dlp_farfield;
use bem_core::oracle::{oracle_pair_integral, Kernel, RegularizedIntegrand};
use bem_core::slp::slp_farfield;
use bem_core::mesh::local_linear_coeffs;
use bem_core::PairCase;
use std::time::Instant;

fn main() {
    let mut rng = common::rng(101);
    for _ in 0..200 {
        let _ = common::shared_vertex_pair(&mut rng);
    }
    for i in 0..160 {
        let (gs, gt) = common::disjoint_pair(&mut rng);
        if i == 0 {
            eprintln!("far0 fingerprint gs.p={:?} gt.p={:?}", gs.p, gt.p);
        }
    }
    let t = Instant::now();
    let (gs, gt) = common::disjoint_pair(&mut rng);
    eprintln!("gen: {:?}", t.elapsed());
    let p = gt.p - gs.p;
    let t = Instant::now();
    let v = slp_farfield(p, gt.v, gt.w, gs.v, gs.w, gs.gram, gt.gram, 12).unwrap();
    eprintln!("slp_far: {:?} v={v:.6e}", t.elapsed());
    for nodal in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
        let (a0, a1, a2) = local_linear_coeffs(nodal, [0, 1, 2]);
        let a = [a0, a1, a2];
        let t = Instant::now();
        let v = dlp_farfield(p, gt.v, gt.w, gs.v, gs.w, gt.normal, a, gs.gram, gt.gram, 12)
            .unwrap();
        eprintln!("dlp_far {nodal:?}: {:?} v={v:.6e}", t.elapsed());
        let t = Instant::now();
        let q = RegularizedIntegrand::from_parts(
            PairCase::Disjoint,
            Kernel::Dlp,
            &gs,
            &gt,
            gt.normal,
            a,
        );
        let r = oracle_pair_integral(&q, 20).unwrap();
        eprintln!("oracle {nodal:?}: {:?} r={r:.6e} rel={:.3e}", t.elapsed(), ((v - r) / r).abs());
    }
}
