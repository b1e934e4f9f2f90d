//! Cross-cutting properties of the public API: exchange symmetries the
//! closed forms must inherit from the integrals they represent, agreement of
//! the two assembly engines, and randomized checks of the small numerical
//! kernels everything else is built on.

mod common;

use bem_core::assembly::{
    assemble_k, assemble_v, frobenius_rel_error, read_matrix, write_matrix, AssemblyConfig,
    Engine,
};
use bem_core::dlp::{dlp_h_integral, EdgeKernelParams};
use bem_core::mesh::local_linear_coeffs;
use bem_core::oracle::{oracle_matrix, Kernel};
use bem_core::quad::gauss_legendre;
use bem_core::slp::{antiderivative_f, slp_edge, slp_vertex, QuadraticRadical};
use bem_core::{DenseMatrix, SurfaceMesh};
use proptest::prelude::*;
use rand::Rng;

/// Adaptive Simpson with interval bisection until the classic error
/// estimate drops below `tol`.
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        recurse(f, a, m, fa, fm, flm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, fb, frm, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, b, fa, fb, fm, whole, tol, 40)
}

/// Both singular single-layer routes integrate a kernel that is symmetric in
/// exchanging the test and trial triangles; the shared-vertex decomposition
/// is symmetric term by term, the shared-edge one only in the sum.
#[test]
fn single_layer_values_survive_the_test_trial_exchange() {
    let mut rng = common::rng(71);
    for _ in 0..100 {
        let (gs, gt) = common::shared_edge_pair(&mut rng);
        let forward = slp_edge(gt.w, gt.v, gs.w, gs.gram, gt.gram).unwrap();
        let swapped = slp_edge(gs.w, gs.v, gt.w, gt.gram, gs.gram).unwrap();
        let diff = (forward - swapped).abs() / forward.abs();
        assert!(
            diff <= 1e-12,
            "edge exchange symmetry violated: {forward} vs {swapped} (rel {diff:.2e})"
        );
    }
    for _ in 0..100 {
        let (gs, gt) = common::shared_vertex_pair(&mut rng);
        let forward = slp_vertex(gt.v, gt.w, gs.v, gs.w, gs.gram, gt.gram, 12).unwrap();
        let swapped = slp_vertex(gs.v, gs.w, gt.v, gt.w, gt.gram, gs.gram, 12).unwrap();
        assert_eq!(forward, swapped, "vertex exchange must be exact");
    }
}

/// The closed form of `integral_0^1 4 P / (D sqrt(Q)) de` against adaptive
/// Simpson on randomly sampled admissible polynomial coefficients. Samples
/// that bail out with `FallbackRequired` are skipped (the fallback has its
/// own agreement test); the closed form must carry a solid majority.
#[test]
fn h_integral_matches_quadrature_on_random_parameters() {
    let mut rng = common::rng(72);
    let mut closed_count = 0usize;
    let monic = |rng: &mut rand_chacha::ChaCha8Rng| {
        let c0: f64 = rng.gen_range(0.05..2.0);
        let c1: f64 = 1.8 * c0.sqrt() * rng.gen_range(-1.0..1.0);
        (c0, c1)
    };
    for _ in 0..300 {
        let q: f64 = rng.gen_range(0.2..3.0);
        let d: f64 = rng.gen_range(0.2..3.0);
        let (q0, q1) = monic(&mut rng);
        let (d0, d1) = monic(&mut rng);
        let p = [
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        ];
        let params =
            EdgeKernelParams::from_products(q, q * q0, q * q1, d, d * d0, d * d1, p).unwrap();
        let closed = match dlp_h_integral(&params) {
            Ok(value) => value,
            Err(_) => continue,
        };
        closed_count += 1;
        let integrand = |e: f64| {
            let pe = p[0] + e * (p[1] + e * (p[2] + e * p[3]));
            let de = 4.0 * d * (d0 + e * (d1 + e));
            let qe = q * (q0 + e * (q1 + e));
            4.0 * pe / (de * qe.sqrt())
        };
        let scale = 1.0 + closed.abs();
        let reference = simpson(&integrand, 0.0, 1.0, 1e-11 * scale);
        assert!(
            (closed - reference).abs() <= 1e-8 * scale,
            "closed {closed} vs quadrature {reference} for {params:?}"
        );
    }
    assert!(
        closed_count >= 150,
        "closed form applied to only {closed_count} of 300 samples"
    );
}

/// Semi-analytical assembly against the regularized-quadrature engine on the
/// once-refined sphere, for both matrices.
#[test]
fn engines_agree_on_the_refined_sphere() {
    let mesh = SurfaceMesh::build_icosphere(1, 1.0).unwrap();
    let semi = AssemblyConfig::with_orders(12, 14, Engine::SemiAnalytic).unwrap();
    let (v, _) = assemble_v(&mesh, &semi).unwrap();
    let (k, _) = assemble_k(&mesh, &semi).unwrap();
    let v_ref = oracle_matrix(&mesh, Kernel::Slp, 16, 18).unwrap();
    let k_ref = oracle_matrix(&mesh, Kernel::Dlp, 16, 18).unwrap();
    let ev = frobenius_rel_error(&v, &v_ref).unwrap();
    let ek = frobenius_rel_error(&k, &k_ref).unwrap();
    assert!(ev <= 1e-8, "single-layer engines differ: {ev:.2e}");
    assert!(ek <= 1e-8, "double-layer engines differ: {ek:.2e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// An n-point rule must integrate polynomials through degree 2n-1
    /// exactly, with positive weights summing to one and nodes inside (0,1).
    #[test]
    fn gauss_rules_integrate_their_degree(n in 1usize..=32, coeffs in proptest::collection::vec(-1.0f64..1.0, 1..=16)) {
        let rule = gauss_legendre(n).unwrap();
        prop_assert!(rule.nodes.iter().all(|&x| 0.0 < x && x < 1.0));
        prop_assert!(rule.weights.iter().all(|&w| w > 0.0));
        prop_assert!((rule.weights.iter().sum::<f64>() - 1.0).abs() <= 1e-14);
        let degree = coeffs.len().min(2 * n).saturating_sub(1);
        let poly = &coeffs[..=degree];
        let numeric = rule.integrate(|x| {
            poly.iter().rev().fold(0.0, |acc, &c| acc * x + c)
        });
        let exact: f64 = poly
            .iter()
            .enumerate()
            .map(|(deg, &c)| c / (deg as f64 + 1.0))
            .sum();
        prop_assert!((numeric - exact).abs() <= 1e-12, "degree {degree}: {numeric} vs {exact}");
    }

    /// The logarithmic antiderivative differentiates back to the reciprocal
    /// square root of its radicand.
    #[test]
    fn antiderivative_slope_is_the_reciprocal_square_root(
        alpha in 0.1f64..5.0,
        beta in -3.0f64..3.0,
        extra in 0.1f64..3.0,
        x in 0.05f64..0.95,
    ) {
        let gamma = beta.abs() + extra;
        let qr = QuadraticRadical { alpha, beta, gamma };
        let h = 1e-5;
        let slope = (antiderivative_f(&qr, x + h).unwrap()
            - antiderivative_f(&qr, x - h).unwrap())
            / (2.0 * h);
        let expected = 1.0 / (gamma + x * (beta + x * alpha)).sqrt();
        prop_assert!(
            (slope - expected).abs() <= 1e-6 * (1.0 + expected),
            "slope {slope} vs {expected}"
        );
    }

    /// The trial coefficients reproduce the nodal values at the reference
    /// corners (0,0), (1,0), (1,1) for every vertex permutation.
    #[test]
    fn linear_coefficients_interpolate_nodal_values(
        nodal in [-10.0f64..10.0, -10.0f64..10.0, -10.0f64..10.0],
        k in 0usize..6,
    ) {
        let orders = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [2, 1, 0], [1, 0, 2]];
        let order = orders[k];
        let (a0, a1, a2) = local_linear_coeffs(nodal, order);
        let at = |y1: f64, y2: f64| a0 + a1 * y1 + a2 * y2;
        for (corner, value) in [(at(0.0, 0.0), nodal[order[0]]),
                                (at(1.0, 0.0), nodal[order[1]]),
                                (at(1.0, 1.0), nodal[order[2]])] {
            prop_assert!((corner - value).abs() <= 1e-12);
        }
    }

    /// Matrices round-trip bitwise through the binary container.
    #[test]
    fn matrix_files_round_trip(
        rows in 1usize..10,
        cols in 1usize..10,
        seed in 0u64..1000,
    ) {
        let mut rng = common::rng(seed);
        let matrix = DenseMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1e6..1e6));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("roundtrip.bemm");
        write_matrix(&path, &matrix).unwrap();
        let back = read_matrix(&path).unwrap();
        prop_assert_eq!(matrix.shape(), back.shape());
        for (a, b) in matrix.iter().zip(back.iter()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
