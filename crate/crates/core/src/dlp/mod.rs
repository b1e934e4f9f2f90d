//! Closed forms for the double-layer pair integrals.
//!
//! Every pair case reduces, contribution by contribution, to one-dimensional
//! integrals of `4 P(e) / (D(e) sqrt(Q(e)))` with quadratic `Q > 0`,
//! quadratic `D >= 0` and cubic `P`; the polynomial coefficients are produced
//! by the embedded tables in `tables.txt`. `dlp_h_integral` evaluates that
//! integral exactly via a rational substitution. Configurations for which the
//! substitution degenerates (proportional quadratics, confluent roots, a near
//! zero of `D` on the interval) are rare and bail out to Gauss quadrature of
//! the same integrand; `fallback_invocations` counts the bailouts so callers
//! can report the rate.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::quad::{gauss_legendre, QuadratureRule};
use crate::Vec3;

mod tables;

use tables::{tables, EvalContext, RawParams};

/// Trial-polynomial moments entering the closed forms. Integrating the
/// radial variables of a pair case against `a0 + a1 y1 + a2 y2` leaves a
/// quadratic in the remaining variables whose coefficients are `c0, c1, c2`;
/// the two singular cases integrate different powers, hence two maps.
#[derive(Debug, Clone, Copy)]
pub struct DlpCoefficients {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl DlpCoefficients {
    /// Moments for the shared-edge contributions.
    pub fn edge(a: [f64; 3]) -> Self {
        DlpCoefficients {
            c0: 0.5 * a[0] + a[1] / 3.0,
            c1: -a[1] / 6.0,
            c2: a[2] / 6.0,
        }
    }

    /// Moments for the shared-vertex contributions.
    pub fn vertex(a: [f64; 3]) -> Self {
        DlpCoefficients {
            c0: 0.5 * a[0],
            c1: a[1] / 3.0,
            c2: a[2] / 3.0,
        }
    }
}

/// Coefficients of one integrand `4 P(e) / (D(e) sqrt(Q(e)))` on (0, 1) in
/// normalized form: `Q(e) = q (q0 + q1 e + e^2)` with `q > 0` and `Q > 0` on
/// the interval, `D(e) = 4 d (d0 + d1 e + e^2)` with `d > 0` and `D >= 0`,
/// and `P(e) = p[0] + p[1] e + p[2] e^2 + p[3] e^3` at full scale.
#[derive(Debug, Clone, Copy)]
pub struct EdgeKernelParams {
    pub q: f64,
    pub q0: f64,
    pub q1: f64,
    pub d: f64,
    pub d0: f64,
    pub d1: f64,
    pub p: [f64; 4],
}

/// Minimum of the monic quadratic `c0 + c1 x + x^2` over [0, 1]: endpoints
/// plus the parabola vertex when it lies inside.
fn quad_min_01(c0: f64, c1: f64) -> f64 {
    let mut min = c0.min(c0 + c1 + 1.0);
    let vertex = -0.5 * c1;
    if vertex > 0.0 && vertex < 1.0 {
        min = min.min(c0 - 0.25 * c1 * c1);
    }
    min
}

impl EdgeKernelParams {
    /// Builds normalized parameters from the full polynomial products
    /// `Q(e) = qq0 + qq1 e + q e^2` and `D(e) = 4 (dd0 + dd1 e + d e^2)`,
    /// validating the positivity invariants.
    pub fn from_products(
        q: f64,
        qq0: f64,
        qq1: f64,
        d: f64,
        dd0: f64,
        dd1: f64,
        p: [f64; 4],
    ) -> Result<Self> {
        let inputs = [q, qq0, qq1, d, dd0, dd1, p[0], p[1], p[2], p[3]];
        if inputs.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("non-finite kernel parameter"));
        }
        if q <= 0.0 {
            return Err(Error::validation(
                "radicand leading coefficient must be positive",
            ));
        }
        if d <= 0.0 {
            return Err(Error::validation(
                "denominator leading coefficient must be positive",
            ));
        }
        let (q0, q1) = (qq0 / q, qq1 / q);
        let (d0, d1) = (dd0 / d, dd1 / d);
        if quad_min_01(q0, q1) <= 0.0 {
            return Err(Error::validation(
                "radicand must stay positive on the unit interval",
            ));
        }
        if quad_min_01(d0, d1) < -1e-9 * (1.0 + d0.abs() + d1.abs()) {
            return Err(Error::validation(
                "denominator must stay nonnegative on the unit interval",
            ));
        }
        Ok(EdgeKernelParams { q, q0, q1, d, d0, d1, p })
    }
}

fn kernel_params(raw: RawParams) -> Result<EdgeKernelParams> {
    EdgeKernelParams::from_products(raw.q, raw.qq0, raw.qq1, raw.d, raw.dd0, raw.dd1, raw.p)
}

/// The closed form does not apply; integrate the record numerically instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FallbackRequired;

/// Antiderivative kernel shared by the rational part: for `rho > 0` an
/// arctangent, for `rho = 0` a reciprocal, for `rho < 0` a logarithm.
/// Arguments on a pole of the selected branch are a degenerate-configuration
/// error.
pub fn g_branch(rho: f64, s: f64) -> Result<f64> {
    if !(rho.is_finite() && s.is_finite()) {
        return Err(Error::invalid("non-finite branch argument"));
    }
    if rho > 0.0 {
        let root = rho.sqrt();
        Ok((s / root).atan() / root)
    } else if rho == 0.0 {
        if s == 0.0 {
            return Err(Error::degenerate("reciprocal branch pole at s = 0"));
        }
        Ok(-1.0 / s)
    } else {
        let root = (-rho).sqrt();
        let ratio = (s - root) / (s + root);
        if ratio == 0.0 || !ratio.is_finite() {
            return Err(Error::degenerate("logarithmic branch pole at |s| = sqrt(-rho)"));
        }
        Ok(ratio.abs().ln() / (2.0 * root))
    }
}

/// Exact value of `integral_0^1 4 P(e) / (D(e) sqrt(Q(e))) de`.
///
/// The cubic part of `P` splits off against the monic denominator quadratic
/// into square-root and logarithm terms; the linear remainder is handled by
/// the substitution `t = (nu - e)/(e - mu)`, where `mu > nu` are the points
/// at which the two monic quadratics are proportional. `Err` means a
/// degeneracy of that substitution, not a failure of the integral: callers
/// fall back to quadrature.
pub fn dlp_h_integral(params: &EdgeKernelParams) -> std::result::Result<f64, FallbackRequired> {
    dlp_h_with_magnitude(params).map(|(value, _)| value)
}

/// Closed form together with the sum of the antiderivative term magnitudes
/// that produced it; the ratio of the two bounds the rounding amplification
/// and drives the cancellation rescue in the difference-based routes.
fn dlp_h_with_magnitude(
    params: &EdgeKernelParams,
) -> std::result::Result<(f64, f64), FallbackRequired> {
    let [pc0, pc1, pc2, pc3] = params.p;
    if pc0 == 0.0 && pc1 == 0.0 && pc2 == 0.0 && pc3 == 0.0 {
        return Ok((0.0, 0.0));
    }
    let (q0, q1) = (params.q0, params.q1);
    let (d0, d1) = (params.d0, params.d1);

    // A near-zero of D inside the interval defeats the rational split.
    if quad_min_01(d0, d1) < 2.5e-13 {
        return Err(FallbackRequired);
    }
    if quad_min_01(q0, q1) <= 0.0 {
        return Err(FallbackRequired);
    }

    // Quotient part of P / (monic D): contributes sqrt and log terms. The
    // log argument keeps one sign on [0, 1] because it only vanishes where
    // the radicand is negative.
    let bracket = |e: f64| -> f64 {
        let root = (q0 + e * (q1 + e)).sqrt();
        pc3 * root + (pc2 - d1 * pc3 - 0.5 * q1 * pc3) * (2.0 * root + 2.0 * e + q1).abs().ln()
    };
    let bracket_part = bracket(1.0) - bracket(0.0);

    // Linear remainder of P after division by the monic denominator.
    let nn = pc0 - d0 * pc2 + d0 * d1 * pc3;
    let mm = pc1 - d1 * pc2 - d0 * pc3 + d1 * d1 * pc3;
    let (hcombo, habs) = if nn == 0.0 && mm == 0.0 {
        (0.0, 0.0)
    } else {
        rational_part(q0, q1, d0, d1, nn, mm)?
    };

    let value = (bracket_part + hcombo) / (params.d * params.q.sqrt());
    if !value.is_finite() {
        return Err(FallbackRequired);
    }
    let magnitude =
        (bracket(1.0).abs() + bracket(0.0).abs() + habs) / (params.d * params.q.sqrt());
    Ok((value, magnitude))
}

/// `integral_0^1 (mm e + nn) / ((d0 + d1 e + e^2) sqrt(q0 + q1 e + e^2)) de`
/// by the rational substitution. When `mu` lies inside (0, 1) the image of
/// the interval is two unbounded pieces and the antiderivative is combined
/// across its limits at -inf and +inf. Returns the value together with the
/// sum of the term magnitudes that produced it, so the caller can detect
/// catastrophic cancellation.
fn rational_part(
    q0: f64,
    q1: f64,
    d0: f64,
    d1: f64,
    nn: f64,
    mm: f64,
) -> std::result::Result<(f64, f64), FallbackRequired> {
    // Identical monic quadratics (right-angle geometries produce them
    // exactly): the integrand is (mm e + nn) / R^(3/2) with an elementary
    // antiderivative, and the substitution below would have no pivots.
    let same0 = (d0 - q0).abs() <= 1e-12 * (1.0 + d0.abs() + q0.abs());
    let same1 = (d1 - q1).abs() <= 1e-12 * (1.0 + d1.abs() + q1.abs());
    if same0 && same1 {
        let a = 4.0 * q0 - q1 * q1;
        if a.abs() <= 1e-10 * (1.0 + q0.abs() + q1 * q1) {
            return Err(FallbackRequired);
        }
        let anti = |e: f64| -> f64 {
            let root = (q0 + e * (q1 + e)).sqrt();
            ((2.0 * nn - mm * q1) * (2.0 * e + q1) / a - mm) / root
        };
        return Ok((anti(1.0) - anti(0.0), anti(1.0).abs() + anti(0.0).abs()));
    }

    // mu, nu solve (d1-q1) z^2 + 2 (d0-q0) z + (q1 d0 - d1 q0) = 0; at these
    // points the two monic quadratics are proportional.
    let za = d1 - q1;
    if za.abs() <= 1e-12 * (1.0 + d1.abs() + q1.abs()) {
        return Err(FallbackRequired);
    }
    let zb = 2.0 * (d0 - q0);
    let zc = q1 * d0 - d1 * q0;
    let disc = zb * zb - 4.0 * za * zc;
    if disc <= 0.0 {
        return Err(FallbackRequired);
    }
    let shifted = -0.5 * (zb + zb.signum() * disc.sqrt());
    let (r1, r2) = (shifted / za, zc / shifted);
    let (mu, nu) = if r1 >= r2 { (r1, r2) } else { (r2, r1) };

    let root_scale = 1.0 + mu.abs() + nu.abs();
    if (mu - nu).abs() < 1e-8 * root_scale {
        return Err(FallbackRequired);
    }
    // The substitution pivots on mu; an endpoint pivot blows up t(0) or t(1).
    if mu.abs() < 1e-9 * root_scale || (mu - 1.0).abs() < 1e-9 * root_scale {
        return Err(FallbackRequired);
    }

    let dn_mu = d0 + mu * (d1 + mu);
    let dn_nu = d0 + nu * (d1 + nu);
    let qn_mu = q0 + mu * (q1 + mu);
    let qn_nu = q0 + nu * (q1 + nu);
    if qn_mu <= 0.0 {
        return Err(FallbackRequired);
    }
    if dn_mu.abs() <= 1e-12 * (d0.abs() + (d1 * mu).abs() + mu * mu).max(1e-300) {
        return Err(FallbackRequired);
    }
    let lambda = dn_nu / dn_mu;
    let kappa = qn_nu / qn_mu;
    if kappa <= 0.0 {
        return Err(FallbackRequired);
    }
    if (kappa - lambda).abs() < 1e-10 * (1.0 + kappa.abs() + lambda.abs()) {
        return Err(FallbackRequired);
    }

    let omega = (mu - nu) / (dn_mu * qn_mu.sqrt());
    let rho0 = lambda / (kappa - lambda);
    let rho1 = lambda - kappa;
    let coef0 = (nn + mm * nu) / (kappa - lambda);
    let coef1 = nn + mm * mu;

    let h_at = |t: f64| -> std::result::Result<(f64, f64), FallbackRequired> {
        let rad = kappa + t * t;
        if rad <= 0.0 {
            return Err(FallbackRequired);
        }
        let s1 = rad.sqrt();
        let s0 = t / s1;
        let sign = if t >= -1.0 { 1.0 } else { -1.0 };
        let g0 = g_branch(rho0, s0).map_err(|_| FallbackRequired)?;
        let g1 = g_branch(rho1, s1).map_err(|_| FallbackRequired)?;
        let (t0, t1) = (omega * coef0 * g0, omega * coef1 * g1);
        Ok((sign * (t0 + t1), t0.abs() + t1.abs()))
    };
    // As t -> ±inf: s0 -> ±1 and the unbounded-argument branch tends to
    // pi/(2 sqrt(rho)) for the arctangent, 0 otherwise.
    let h_limit = |toward: f64| -> std::result::Result<(f64, f64), FallbackRequired> {
        let g0 = g_branch(rho0, toward).map_err(|_| FallbackRequired)?;
        let g1 = if rho1 > 0.0 { FRAC_PI_2 / rho1.sqrt() } else { 0.0 };
        let (t0, t1) = (omega * coef0 * g0, omega * coef1 * g1);
        Ok((toward * (t0 + t1), t0.abs() + t1.abs()))
    };

    let t_at_0 = -nu / mu;
    let t_at_1 = (nu - 1.0) / (1.0 - mu);
    if 0.0 < mu && mu < 1.0 {
        // t maps [0, mu) onto [t(0), +inf) and (mu, 1] onto (-inf, t(1)].
        let parts = [h_limit(1.0)?, h_at(t_at_0)?, h_at(t_at_1)?, h_limit(-1.0)?];
        let value = parts[0].0 - parts[1].0 + parts[2].0 - parts[3].0;
        Ok((value, parts.iter().map(|p| p.1).sum()))
    } else {
        let (hi, lo) = (h_at(t_at_1)?, h_at(t_at_0)?);
        Ok((hi.0 - lo.0, hi.1 + lo.1))
    }
}

/// Numerical integration of the record integrand; used when the closed form
/// bails out or its cancellation rescue asks for an independent value. The
/// quadratics are evaluated about their vertices: near a double root the
/// Horner form loses half the mantissa to cancellation, which poisons the
/// adaptive refinement with noise and caps the attainable accuracy. The
/// domain is split at interior vertices so a narrow spike cannot slip
/// between sample points, and the tolerance is tied to the integral of
/// `|f|`, so the result is as accurate as the integrand's own conditioning
/// allows.
fn h_fallback_quadrature(params: &EdgeKernelParams) -> f64 {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    let rule = RULE.get_or_init(|| gauss_legendre(32).expect("32-point rule is available"));
    let (cq, cd) = (-0.5 * params.q1, -0.5 * params.d1);
    let mq = params.q0 - cq * cq;
    let md = params.d0 - cd * cd;
    let f = |e: f64| -> f64 {
        let qe = params.q * ((e - cq) * (e - cq) + mq);
        let de = 4.0 * params.d * ((e - cd) * (e - cd) + md);
        let pe = params.p[0] + e * (params.p[1] + e * (params.p[2] + e * params.p[3]));
        4.0 * pe / (de * qe.sqrt())
    };
    let mut cuts = [0.0, 1.0, 1.0, 1.0];
    let mut n = 1;
    for c in [cd.min(cq), cd.max(cq)] {
        if c > cuts[n - 1] && c < 1.0 {
            cuts[n] = c;
            n += 1;
        }
    }
    cuts[n] = 1.0;
    let segments = &cuts[..=n];
    let magnitude: f64 = segments
        .windows(2)
        .map(|s| (s[1] - s[0]) * rule.integrate(|x| f(s[0] + (s[1] - s[0]) * x).abs()))
        .sum();
    let tol = 1e-15 * magnitude.max(1e-300);
    segments
        .windows(2)
        .map(|s| crate::quad::adaptive_simpson(&f, s[0], s[1], tol))
        .sum()
}

static FALLBACKS: AtomicU64 = AtomicU64::new(0);

/// Number of closed-form bailouts since process start. Monotone and global;
/// callers snapshot before and after a batch to report a rate.
pub fn fallback_invocations() -> u64 {
    FALLBACKS.load(Ordering::Relaxed)
}

fn h_or_fallback(params: &EdgeKernelParams) -> f64 {
    match dlp_h_integral(params) {
        Ok(value) => value,
        Err(FallbackRequired) => {
            FALLBACKS.fetch_add(1, Ordering::Relaxed);
            h_fallback_quadrature(params)
        }
    }
}

/// One record of a difference-based route: the closed-form value with its
/// term magnitude, or the quadrature fallback, whose magnitude is its own
/// absolute value because the adaptive sum carries no cancelling terms for
/// the one-signed integrands these records produce.
struct HEval {
    value: f64,
    magnitude: f64,
    quadrature: bool,
}

fn h_eval(params: &EdgeKernelParams) -> HEval {
    match dlp_h_with_magnitude(params) {
        Ok((value, magnitude)) => HEval { value, magnitude, quadrature: false },
        Err(FallbackRequired) => {
            FALLBACKS.fetch_add(1, Ordering::Relaxed);
            let value = h_fallback_quadrature(params);
            HEval { value, magnitude: value.abs(), quadrature: true }
        }
    }
}

/// Difference of the two boundary records of a vertex or far table. The
/// closed forms subtract large antiderivative terms, and per quadrature node
/// the two records' roundings are independent, so once the combined term
/// magnitude towers over the difference the result is mostly noise. Both
/// sides are then recomputed by adaptive quadrature, whose error scales with
/// the record values rather than their internal terms.
fn h_difference(upper: &EdgeKernelParams, lower: &EdgeKernelParams) -> f64 {
    let (u, l) = (h_eval(upper), h_eval(lower));
    let diff = u.value - l.value;
    // 1024 eps of amplified rounding is well inside the 1e-12 target and
    // keeps the rescue on the rare tail.
    if u.magnitude + l.magnitude <= 1024.0 * diff.abs() {
        return diff;
    }
    let requad = |params: &EdgeKernelParams, e: &HEval| -> f64 {
        if e.quadrature {
            e.value
        } else {
            FALLBACKS.fetch_add(1, Ordering::Relaxed);
            h_fallback_quadrature(params)
        }
    };
    requad(upper, &u) - requad(lower, &l)
}

/// Inner double integral of the disjoint contribution for one fixed trial
/// point offset `u`: both boundary records of the far table at `pn = u·n`
/// (the trial-plane components of `u` are normal to `n` and drop out).
fn far_inner(u: Vec3, v1: Vec3, v2: Vec3, n: Vec3, pn: f64) -> Result<f64> {
    let t = tables();
    let ctx = EvalContext::new(&[u, v1, v2, n], &[pn]);
    let lower = kernel_params(t.far[0].evaluate(&ctx))?;
    let upper = kernel_params(t.far[1].evaluate(&ctx))?;
    Ok(h_difference(&upper, &lower))
}

/// Double-layer pair integral for triangles sharing an edge.
///
/// `v` is the shared edge vector, `u` completes the trial triangle τ
/// (`u = e2_tau`), `w` the test triangle σ (`w = e2_sigma`); `tau_normal` is
/// τ's unit normal in original orientation and `a` the trial coefficients of
/// `a0 + a1 y1 + a2 y2` on τ's reference triangle.
pub fn dlp_edge(
    u: Vec3,
    v: Vec3,
    w: Vec3,
    tau_normal: Vec3,
    a: [f64; 3],
    gram_sigma: f64,
    gram_tau: f64,
) -> Result<f64> {
    let wn = w.dot(&tau_normal);
    // The kernel numerator is proportional to the test triangle's
    // out-of-plane coordinate, so coplanar pairs vanish identically.
    if wn.abs() < 1e-14 * w.norm() {
        return Ok(0.0);
    }
    let c = DlpCoefficients::edge(a);
    let ctx = EvalContext::new(&[u, v, w], &[c.c0, c.c1, c.c2]);
    let mut sum = 0.0;
    for pair in &tables().edge {
        let lower = kernel_params(pair[0].evaluate(&ctx))?;
        let upper = kernel_params(pair[1].evaluate(&ctx))?;
        sum += h_or_fallback(&upper) - h_or_fallback(&lower);
    }
    Ok(gram_sigma * gram_tau * wn / (4.0 * PI) * sum)
}

/// Double-layer pair integral for triangles sharing a vertex.
///
/// Both triangles are parametrized radially from the shared vertex: the
/// trial triangle τ by `u1, u2` (`e1_tau, e2_tau`), the test triangle σ by
/// `v1, v2`. One transform concentrates the interaction on the test side
/// (handled by the vertex table at `v = v1 + x v2` per quadrature node `x`),
/// the other on the trial side, where the inner double integral coincides
/// with the disjoint one at offset `u1 + x u2` in τ's plane.
#[allow(clippy::too_many_arguments)]
pub fn dlp_vertex(
    u1: Vec3,
    u2: Vec3,
    v1: Vec3,
    v2: Vec3,
    tau_normal: Vec3,
    a: [f64; 3],
    gram_sigma: f64,
    gram_tau: f64,
    order: usize,
) -> Result<f64> {
    let rule = gauss_legendre(order)?;
    let c = DlpCoefficients::vertex(a);
    let t = tables();
    let mut sum = 0.0;
    for (&x, &weight) in rule.nodes.iter().zip(&rule.weights) {
        let v = v1 + x * v2;
        let vn = v.dot(&tau_normal);
        if vn.abs() >= 1e-14 * v.norm() {
            let ctx = EvalContext::new(&[u1, u2, v], &[c.c0, c.c1, c.c2]);
            let lower = kernel_params(t.vertex[0].evaluate(&ctx))?;
            let upper = kernel_params(t.vertex[1].evaluate(&ctx))?;
            sum += weight * vn * h_difference(&upper, &lower);
        }
        sum += weight * (c.c0 + c.c1 + c.c2 * x) * far_inner(u1 + x * u2, v1, v2, tau_normal, 0.0)?;
    }
    Ok(gram_sigma * gram_tau / (4.0 * PI) * sum)
}

/// Double-layer moments for a disjoint pair: integrals of the kernel times
/// `(1, y1, y2)` in τ's reference coordinates, so the pair integral for any
/// trial coefficients is `a · moments`. One inner bundle is evaluated per
/// outer node pair and shared by all three moments; `evals` counts bundles.
#[allow(clippy::too_many_arguments)]
pub fn dlp_farfield_moments(
    p: Vec3,
    u1: Vec3,
    u2: Vec3,
    v1: Vec3,
    v2: Vec3,
    tau_normal: Vec3,
    gram_sigma: f64,
    gram_tau: f64,
    order: usize,
    evals: &mut u64,
) -> Result<[f64; 3]> {
    let rule = gauss_legendre(order)?;
    let pn = p.dot(&tau_normal);
    let mut m = [0.0; 3];
    for (&xk, &wk) in rule.nodes.iter().zip(&rule.weights) {
        for (&xl, &wl) in rule.nodes.iter().zip(&rule.weights) {
            let u = p + xk * u1 + xk * xl * u2;
            let inner = far_inner(u, v1, v2, tau_normal, pn)?;
            *evals += 1;
            // xk is the Duffy weight of the trial-side transform; the
            // test-side one is inside the far table.
            let base = wk * wl * xk * inner;
            m[0] += base;
            m[1] += base * xk;
            m[2] += base * xk * xl;
        }
    }
    let scale = gram_sigma * gram_tau / (4.0 * PI);
    Ok([m[0] * scale, m[1] * scale, m[2] * scale])
}

/// Double-layer pair integral for disjoint triangles; `p = p_tau - p_sigma`,
/// `u1, u2` span the trial triangle τ and `v1, v2` the test triangle σ.
#[allow(clippy::too_many_arguments)]
pub fn dlp_farfield(
    p: Vec3,
    u1: Vec3,
    u2: Vec3,
    v1: Vec3,
    v2: Vec3,
    tau_normal: Vec3,
    a: [f64; 3],
    gram_sigma: f64,
    gram_tau: f64,
    order: usize,
) -> Result<f64> {
    let mut evals = 0;
    let m = dlp_farfield_moments(
        p, u1, u2, v1, v2, tau_normal, gram_sigma, gram_tau, order, &mut evals,
    )?;
    Ok(a[0] * m[0] + a[1] * m[1] + a[2] * m[2])
}
