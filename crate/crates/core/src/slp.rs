//! Semi-analytical single-layer-potential pair integrals.
//!
//! Identical and shared-edge pairs are evaluated fully in closed form;
//! shared-vertex pairs need one numerical direction and disjoint pairs two.
//! The building block is the scalar function H(a,b,c), an antiderivative of
//! the rational integrand left after the radial integrations.

use crate::error::{Error, Result};
use crate::mesh::TriangleGeometry;
use crate::quad::{gauss_legendre, QuadratureRule};
use crate::Vec3;

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Smallest admissible logarithm argument; anything below is degenerate.
const MIN_LOG_ARG: f64 = 1e-300;
/// Relative threshold for the q=0 (collinear) branch of `h_integral`.
const Q_ZERO_TOL: f64 = 1e-10;
/// Relative threshold on the discriminant selecting the double-root form of G.
const D_ZERO_TOL: f64 = 1e-12;
/// Relative threshold below which the G denominator loses its quadratic term.
const ALPHA2_TOL: f64 = 1e-14;
/// Threshold on 1−|cos∠(a,c)| below which the edge term switches to its
/// hybrid route; the partial fractions of H divide by 1±cos∠(a,c).
const PARALLEL_TOL: f64 = 1e-8;

/// Coefficients of a radicand γ + βx + αx² that is non-negative on the line.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticRadical {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Antiderivative of 1/√(γ+βx+αx²): (1/√α)·ln(2√α√(γ+βx+αx²) + 2αx + β).
///
/// Differences F(1)−F(0) integrate the reciprocal square root over (0,1).
/// # Errors
/// Degenerate when the radicand is negative or the log argument vanishes
/// (double root of the radicand at x).
pub fn antiderivative_f(qr: &QuadraticRadical, x: f64) -> Result<f64> {
    let QuadraticRadical { alpha, beta, gamma } = *qr;
    if !(alpha > 0.0) {
        return Err(Error::invalid("quadratic radical needs alpha > 0"));
    }
    let radicand = gamma + x * (beta + x * alpha);
    let scale = alpha.max(beta.abs()).max(gamma.abs()) * (1.0 + x * x);
    if radicand < -1e-14 * scale {
        return Err(Error::degenerate("negative radicand in antiderivative"));
    }
    let sqrt_alpha = alpha.sqrt();
    let arg = 2.0 * sqrt_alpha * radicand.max(0.0).sqrt() + 2.0 * alpha * x + beta;
    // The argument keeps one sign wherever the radicand is positive.
    if arg.abs() < MIN_LOG_ARG {
        return Err(Error::degenerate(
            "vanishing log argument in antiderivative (radicand double root)",
        ));
    }
    Ok(arg.abs().ln() / sqrt_alpha)
}

/// Exact single-layer integral of a triangle paired with itself:
/// g²/(12π)·Σᵢ [Fᵢ(1) − Fᵢ(0)] over the three radicand parameter rows built
/// from the edges v and w.
pub fn slp_identical(geom: &TriangleGeometry) -> Result<f64> {
    let (v, w) = (geom.v, geom.w);
    let rows = [
        QuadraticRadical {
            alpha: v.norm_squared(),
            beta: 2.0 * v.dot(&w),
            gamma: w.norm_squared(),
        },
        QuadraticRadical {
            alpha: w.norm_squared(),
            beta: 2.0 * w.dot(&v),
            gamma: v.norm_squared(),
        },
        QuadraticRadical {
            alpha: (w + v).norm_squared(),
            beta: -2.0 * (w + v).dot(&w),
            gamma: w.norm_squared(),
        },
    ];
    let mut sum = 0.0;
    for row in &rows {
        sum += antiderivative_f(row, 1.0)? - antiderivative_f(row, 0.0)?;
    }
    Ok(geom.gram * geom.gram / (12.0 * PI) * sum)
}

/// Arguments of H(a,b,c) with the derived collinearity parameters.
#[derive(Debug, Clone)]
pub struct HArguments {
    pub a: Vec3,
    pub b: Vec3,
    pub c: Vec3,
    /// p = a·b/|a|².
    pub p: f64,
    /// q = sqrt(|b|²/|a|² − p²), clamped to 0 against rounding.
    pub q: f64,
    pub c_hat: Vec3,
}

impl HArguments {
    pub fn new(a: Vec3, b: Vec3, c: Vec3) -> Result<Self> {
        let na2 = a.norm_squared();
        let nc = c.norm();
        if na2 == 0.0 || nc == 0.0 {
            return Err(Error::invalid("H(a,b,c) requires |a| > 0 and |c| > 0"));
        }
        let p = a.dot(&b) / na2;
        let q2 = b.norm_squared() / na2 - p * p;
        Ok(HArguments {
            a,
            b,
            c,
            p,
            q: q2.max(0.0).sqrt(),
            c_hat: c / nc,
        })
    }
}

/// H(a,b,c) = ∫₀¹ h(η)dη for the rational integrand
/// h(η) = [(ηa+b)·b + |ηa+b| b·ĉ] / [|ηa+b|² + |ηa+b| (ηa+b)·ĉ].
///
/// Uses the Weierstraß substitution with partial fractions; the q=0 branch
/// degenerates to p·ln(1+1/p).
/// # Errors
/// Degenerate when the integrand has a pole on the path (folded or touching
/// configurations which cannot arise from a valid triangle pair).
pub fn h_integral(args: &HArguments) -> Result<f64> {
    let (a, b) = (args.a, args.b);
    let c_hat = args.c_hat;
    let (p, q) = (args.p, args.q);
    let na = a.norm();
    let ratio = b.norm() / na;
    if q < Q_ZERO_TOL * ratio.max(1.0) {
        // b is (numerically) collinear with a.
        if ratio < 1e-14 {
            return Ok(0.0);
        }
        if p == 0.0 || 1.0 + 1.0 / p <= 0.0 {
            return Err(Error::degenerate(
                "collinear H configuration with a pole inside the unit interval",
            ));
        }
        return Ok(p * (1.0 + 1.0 / p).ln());
    }

    let b_dot_c = b.dot(&c_hat);
    let a_dot_c = a.dot(&c_hat);
    let beta0 = b_dot_c + q * na;
    let beta1 = 2.0 * p * na;
    let beta2 = b_dot_c - q * na;
    let alpha0 = q * na + (b - p * a).dot(&c_hat);
    let alpha1 = 2.0 * q * a_dot_c;
    let alpha2 = q * na + (p * a - b).dot(&c_hat);
    let alpha_scale = alpha0 + alpha1.abs() + alpha2;

    let den_plus = alpha0 + alpha1 + alpha2;
    let den_minus = alpha0 - alpha1 + alpha2;
    if den_plus.abs() < 1e-14 * alpha_scale || den_minus.abs() < 1e-14 * alpha_scale {
        return Err(Error::degenerate(
            "partial-fraction denominator vanishes (a parallel to c)",
        ));
    }
    let gamma1 = 0.5 * (beta0 + beta1 + beta2) / den_plus;
    let gamma2 = 0.5 * (beta0 - beta1 + beta2) / den_minus;
    let gamma3 = beta0 - (gamma1 + gamma2) * alpha0;
    let gamma4 = alpha2 * (gamma1 - gamma2);

    let t0 = (p) / (q + (p * p + q * q).sqrt());
    let t1 = (p + 1.0) / (q + ((p + 1.0) * (p + 1.0) + q * q).sqrt());

    let f = |t: f64| gamma2 * (1.0 + t).abs().ln() - gamma1 * (1.0 - t).abs().ln();

    let disc = 4.0 * alpha0 * alpha2 - alpha1 * alpha1;
    let g: Box<dyn Fn(f64) -> Result<f64>> = if alpha2 <= ALPHA2_TOL * alpha_scale {
        // The quadratic denominator collapses; disc ≥ 0 forces α₁ → 0 with it.
        if alpha1.abs() <= 1e-7 * alpha_scale {
            Box::new(move |t| Ok((gamma3 + 0.5 * gamma4 * t) * t / alpha0))
        } else {
            Box::new(move |t| {
                let lin = alpha0 + alpha1 * t;
                if lin.abs() < MIN_LOG_ARG {
                    return Err(Error::degenerate("pole of the linear G denominator"));
                }
                Ok(gamma4 / alpha1 * t
                    + (gamma3 * alpha1 - gamma4 * alpha0) / (alpha1 * alpha1) * lin.abs().ln())
            })
        }
    } else if disc < D_ZERO_TOL * alpha_scale * alpha_scale {
        Box::new(move |t| {
            let root_dist = 2.0 * alpha2 * t + alpha1;
            if root_dist.abs() < 1e-14 * alpha_scale {
                return Err(Error::degenerate("double root of G denominator on the path"));
            }
            Ok(gamma4 / alpha2 * (t + alpha1 / (2.0 * alpha2)).abs().ln()
                - (2.0 * gamma3 * alpha2 - gamma4 * alpha1) / (alpha2 * root_dist))
        })
    } else {
        let sqrt_d = disc.sqrt();
        Box::new(move |t| {
            let quad = alpha0 + t * (alpha1 + t * alpha2);
            if quad.abs() < MIN_LOG_ARG {
                return Err(Error::degenerate("vanishing G denominator"));
            }
            Ok(gamma4 / (2.0 * alpha2) * quad.abs().ln()
                + (2.0 * gamma3 * alpha2 - gamma4 * alpha1) / (alpha2 * sqrt_d)
                    * ((alpha1 + 2.0 * alpha2 * t) / sqrt_d).atan())
        })
    };

    let value = 2.0 * q * (f(t1) - f(t0) + g(t1)? - g(t0)?);
    if !value.is_finite() {
        return Err(Error::degenerate("non-finite H value"));
    }
    Ok(value)
}

fn h(a: Vec3, b: Vec3, c: Vec3) -> Result<f64> {
    h_integral(&HArguments::new(a, b, c)?)
}

/// Shared logarithmic boundary term of both edge-term variants.
fn edge_log_part(a: Vec3, b: Vec3, c: Vec3) -> Result<f64> {
    let nc = c.norm();
    if nc == 0.0 {
        return Err(Error::invalid("edge term requires |c| > 0"));
    }
    let ab = a + b;
    let abc = ab - c;
    let num = ab.norm() * nc + ab.dot(&c);
    let den = abc.norm() * nc + abc.dot(&c);
    if num < MIN_LOG_ARG || den < MIN_LOG_ARG {
        return Err(Error::degenerate("vanishing log argument in edge term"));
    }
    Ok((num / den).ln() / nc)
}

/// True when a and c span (numerically) no area, the direction the H
/// reduction cannot take.
fn nearly_parallel(a: Vec3, c: Vec3) -> bool {
    let denom = a.norm() * c.norm();
    denom > 0.0 && 1.0 - (a.dot(&c) / denom).abs() <= PARALLEL_TOL
}

/// The edge-term double integral with the η₄ direction integrated exactly and
/// the η₃ direction by a fixed Gauss rule. Used when a ∥ ±c: mirror-image and
/// congruent triangle pairs produce that alignment systematically, and there
/// the partial fractions of H degenerate while the integral itself stays
/// perfectly benign.
fn edge_term_quadrature(a: Vec3, b: Vec3, c: Vec3) -> Result<f64> {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    let rule = RULE.get_or_init(|| gauss_legendre(24).expect("fixed rule order is supported"));
    let mut sum = 0.0;
    for (node, weight) in rule.nodes.iter().zip(&rule.weights) {
        let shifted = b - *node * c;
        let qr = QuadraticRadical {
            alpha: a.norm_squared(),
            beta: 2.0 * a.dot(&shifted),
            gamma: shifted.norm_squared(),
        };
        sum += weight * (antiderivative_f(&qr, 1.0)? - antiderivative_f(&qr, 0.0)?);
    }
    Ok(sum)
}

/// Closed form of the double integral ∫∫ dη₃dη₄ / |η₄a + b − η₃c| over the
/// unit square, in the variant whose H-difference shifts b.
pub fn slp_edge_term(a: Vec3, b: Vec3, c: Vec3) -> Result<f64> {
    if nearly_parallel(a, c) {
        return edge_term_quadrature(a, b, c);
    }
    let log_part = edge_log_part(a, b, c)?;
    let h_diff = h(a, b - c, c)? - h(a, b, c)?;
    Ok(log_part - h_diff / c.norm())
}

/// Same closed form in the variant whose H-difference shifts a; this is the
/// reduction used for the trailing edge integrals and the vertex case.
pub fn slp_edge_term_shifted(a: Vec3, b: Vec3, c: Vec3) -> Result<f64> {
    if nearly_parallel(a, c) {
        return edge_term_quadrature(a, b, c);
    }
    let log_part = edge_log_part(a, b, c)?;
    let h_diff = h(a - c, b, c)? - h(a, b, c)?;
    Ok(log_part - h_diff / c.norm())
}

/// Closed-form single-layer integral of a shared-edge pair.
///
/// The common edge is v; u completes the trial triangle τ and w the test
/// triangle σ, i.e. χ_τ(y) = p + y₁v + y₂u and χ_σ(x) = p + x₁v + x₂w.
pub fn slp_edge(u: Vec3, v: Vec3, w: Vec3, gram_sigma: f64, gram_tau: f64) -> Result<f64> {
    let i1 = slp_edge_term(w, v, u + v)?;
    let i2 = slp_edge_term_shifted(v, w, u + v)?;
    let i3 = slp_edge_term_shifted(v, u, w + v)?;
    let i4 = slp_edge_term_shifted(u + v + w, -w, u)?;
    let i5 = slp_edge_term_shifted(u + v + w, -w, v + w)?;
    Ok(gram_sigma * gram_tau / (24.0 * PI) * (i1 + i2 + i3 + i4 + i5))
}

/// Single-layer integral of a shared-vertex pair: closed form except for one
/// `order`-point quadrature of an H-difference per half.
///
/// τ's edges from the shared vertex are (u1,u2), σ's are (v1,v2):
/// χ_τ(y) = p + y₁u₁ + y₂u₂ and χ_σ(x) = p + x₁v₁ + x₂v₂.
pub fn slp_vertex(
    u1: Vec3,
    u2: Vec3,
    v1: Vec3,
    v2: Vec3,
    gram_sigma: f64,
    gram_tau: f64,
    order: usize,
) -> Result<f64> {
    let rule = gauss_legendre(order)?;
    let half = |t1: Vec3, t2: Vec3, s1: Vec3, s2: Vec3| -> Result<f64> {
        let a = t1 + t2;
        let c = t2;
        let closed = slp_edge_term(-s2, t1 + t2 - s1, t2)?;
        let mut h_sum = 0.0;
        for (&x, &wt) in rule.nodes.iter().zip(&rule.weights) {
            let b = -s1 - x * s2;
            h_sum += wt * (h(a - c, b, c)? - h(a, b, c)?);
        }
        Ok(closed - h_sum / c.norm())
    };
    let i1 = half(u1, u2, v1, v2)?;
    let i2 = half(v1, v2, u1, u2)?;
    Ok(gram_sigma * gram_tau / (12.0 * PI) * (i1 + i2))
}

/// Single-layer integral of a disjoint pair: two directions analytic via the
/// edge term, two by an order×order tensor quadrature.
///
/// p = p_τ − p_σ is the difference of the first vertices; τ carries (u1,u2),
/// σ carries (v1,v2).
pub fn slp_farfield(
    p: Vec3,
    u1: Vec3,
    u2: Vec3,
    v1: Vec3,
    v2: Vec3,
    gram_sigma: f64,
    gram_tau: f64,
    order: usize,
) -> Result<f64> {
    let mut evals = 0;
    slp_farfield_counted(p, u1, u2, v1, v2, gram_sigma, gram_tau, order, &mut evals)
}

/// `slp_farfield` with an antiderivative-bundle evaluation counter (one count
/// per inner closed form) for cost accounting.
#[allow(clippy::too_many_arguments)]
pub fn slp_farfield_counted(
    p: Vec3,
    u1: Vec3,
    u2: Vec3,
    v1: Vec3,
    v2: Vec3,
    gram_sigma: f64,
    gram_tau: f64,
    order: usize,
    evals: &mut u64,
) -> Result<f64> {
    let rule = gauss_legendre(order)?;
    let mut sum = 0.0;
    for (&ek, &wk) in rule.nodes.iter().zip(&rule.weights) {
        for (&el, &wl) in rule.nodes.iter().zip(&rule.weights) {
            // Inner double integral 1/|p + el·u1 + η₄el·u2 − ek·v1 − η₂ek·v2|
            // over (η₂,η₄) in closed form.
            let a = el * u2;
            let b = p + el * u1 - ek * v1;
            let c = ek * v2;
            sum += wk * wl * ek * el * slp_edge_term(a, b, c)?;
            *evals += 1;
        }
    }
    Ok(gram_sigma * gram_tau / (4.0 * PI) * sum)
}
