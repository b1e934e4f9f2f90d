//! Galerkin assembly of the mass, single-layer and double-layer matrices,
//! the Dirichlet solve V t = (½M + K) g, and the dense matrix container.
//!
//! Every pair integral goes through one of two interchangeable backends: the
//! semi-analytical closed forms of `slp`/`dlp`, or the regularized reference
//! quadrature of `oracle`. Both are driven by the same two orders, `r` for
//! disjoint pairs and `s` for the residual rules of the singular cases.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use crate::dlp::{self, dlp_edge, dlp_farfield_moments, dlp_vertex};
use crate::error::{Error, Result};
use crate::mesh::{local_linear_coeffs, PairCase, PairClassification, SurfaceMesh};
use crate::oracle::{
    identical_slp_quadrature, oracle_pair_integral, Kernel, RegularizedIntegrand, MAX_ORACLE_ORDER,
};
use crate::slp::{slp_edge, slp_farfield_counted, slp_identical, slp_vertex};
use crate::{DenseMatrix, DenseVector};

/// Dense N×N storage bound: 6000 triangles is 288 MB of f64 entries.
pub const MAX_TRIANGLES: usize = 6000;

/// Accepted relative residual ‖V t − rhs‖₂ / ‖rhs‖₂ of the Dirichlet solve.
const RESIDUAL_TOL: f64 = 1e-10;

/// Pair-integral backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    /// Closed forms for the singular cases, inner closed form plus outer
    /// Gauss rule for disjoint pairs.
    SemiAnalytic,
    /// Tensorized Gauss quadrature of the regularized representation for
    /// every pair; slower, but derivation-independent of the closed forms.
    Oracle,
}

/// Quadrature orders and backend for one assembly run.
#[derive(Debug, Clone, Copy)]
pub struct AssemblyConfig {
    /// Outer 2D Gauss order r of the disjoint (far-field) route.
    pub disjoint_order: usize,
    /// Order s of the residual 1D rules in the shared-vertex closed forms
    /// and of the singular oracle transforms.
    pub singular_order: usize,
    pub engine: Engine,
}

impl AssemblyConfig {
    /// Configuration with the default singular order r+2 (capped at the
    /// largest supported order).
    pub fn new(disjoint_order: usize, engine: Engine) -> Result<Self> {
        let singular = (disjoint_order + 2).min(MAX_ORACLE_ORDER);
        Self::with_orders(disjoint_order, singular, engine)
    }

    pub fn with_orders(
        disjoint_order: usize,
        singular_order: usize,
        engine: Engine,
    ) -> Result<Self> {
        let config = AssemblyConfig {
            disjoint_order,
            singular_order,
            engine,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, order) in [
            ("disjoint", self.disjoint_order),
            ("singular", self.singular_order),
        ] {
            if order == 0 || order > MAX_ORACLE_ORDER {
                return Err(Error::invalid(format!(
                    "{name} quadrature order {order} outside 1..={MAX_ORACLE_ORDER}"
                )));
            }
        }
        Ok(())
    }
}

/// Work counters of one assembly run. Pair counts are over ordered pairs
/// (row σ, column τ) and sum to N²; with the symmetric single-layer driver a
/// mirrored pair is counted but its twin's work is not repeated.
#[derive(Debug, Clone, Copy, Default)]
pub struct AssemblyStats {
    pub identical_pairs: u64,
    pub shared_edge_pairs: u64,
    pub shared_vertex_pairs: u64,
    pub disjoint_pairs: u64,
    /// Inner closed forms evaluated on disjoint pairs, one per outer
    /// quadrature node pair; at most r² per disjoint pair actually computed.
    pub bundle_evaluations: u64,
    /// h-integrals routed to the guarded quadrature fallback. Read from a
    /// process-wide counter, so concurrent assemblies in one process mix
    /// their deltas.
    pub fallback_invocations: u64,
    pub seconds: f64,
}

impl AssemblyStats {
    pub fn total_pairs(&self) -> u64 {
        self.identical_pairs + self.shared_edge_pairs + self.shared_vertex_pairs
            + self.disjoint_pairs
    }

    fn count(&mut self, case: PairCase, times: u64) {
        match case {
            PairCase::Identical => self.identical_pairs += times,
            PairCase::SharedEdge => self.shared_edge_pairs += times,
            PairCase::SharedVertex => self.shared_vertex_pairs += times,
            PairCase::Disjoint => self.disjoint_pairs += times,
        }
    }

    fn merge(&mut self, other: &AssemblyStats) {
        self.identical_pairs += other.identical_pairs;
        self.shared_edge_pairs += other.shared_edge_pairs;
        self.shared_vertex_pairs += other.shared_vertex_pairs;
        self.disjoint_pairs += other.disjoint_pairs;
        self.bundle_evaluations += other.bundle_evaluations;
        // fallback_invocations and seconds are filled in by the driver.
    }
}

fn check_mesh_size(mesh: &SurfaceMesh) -> Result<()> {
    let n = mesh.triangle_count();
    if n > MAX_TRIANGLES {
        return Err(Error::validation(format!(
            "mesh has {n} triangles, dense assembly is limited to {MAX_TRIANGLES}"
        )));
    }
    Ok(())
}

/// Mixed mass matrix M[n,m] = ⟨φ_n⁰, φ_m¹⟩ (N×M): a hat function integrates
/// to area/3 over each incident triangle, so row n carries area(n)/3 in the
/// columns of triangle n's vertices.
pub fn assemble_m(mesh: &SurfaceMesh) -> DenseMatrix {
    let verts = mesh.vertices();
    let mut out = DenseMatrix::zeros(mesh.triangle_count(), mesh.vertex_count());
    for (i, tri) in mesh.triangles().iter().enumerate() {
        let [a, b, c] = tri.map(|k| verts[k]);
        let area = 0.5 * (b - a).cross(&(c - a)).norm();
        for &vertex in tri {
            out[(i, vertex)] += area / 3.0;
        }
    }
    out
}

/// Assembles the single-layer matrix V[n,i] = ∫_{σ_n}∫_{σ_i} 1/(4π|x−y|).
///
/// Rows run in parallel; only pairs with j ≥ i are integrated and the strict
/// lower triangle is mirrored, which keeps V exactly symmetric.
pub fn assemble_v(
    mesh: &SurfaceMesh,
    config: &AssemblyConfig,
) -> Result<(DenseMatrix, AssemblyStats)> {
    config.validate()?;
    check_mesh_size(mesh)?;
    let start = Instant::now();
    let fallbacks_before = dlp::fallback_invocations();
    let n = mesh.triangle_count();
    let rows: Vec<(Vec<f64>, AssemblyStats)> = (0..n)
        .into_par_iter()
        .map(|i| v_row_upper(mesh, config, i))
        .collect::<Result<_>>()?;
    let mut out = DenseMatrix::zeros(n, n);
    let mut stats = AssemblyStats::default();
    for (i, (row, row_stats)) in rows.iter().enumerate() {
        stats.merge(row_stats);
        for (offset, &value) in row.iter().enumerate() {
            let j = i + offset;
            out[(i, j)] = value;
            out[(j, i)] = value;
        }
    }
    stats.fallback_invocations = dlp::fallback_invocations() - fallbacks_before;
    stats.seconds = start.elapsed().as_secs_f64();
    Ok((out, stats))
}

/// Entries j ≥ i of row i. Mirrored pairs enter the counters (so they sum to
/// N²) but not the work.
fn v_row_upper(
    mesh: &SurfaceMesh,
    config: &AssemblyConfig,
    i: usize,
) -> Result<(Vec<f64>, AssemblyStats)> {
    let n = mesh.triangle_count();
    let mut values = Vec::with_capacity(n - i);
    let mut stats = AssemblyStats::default();
    for j in i..n {
        let cls = mesh.classify_pair(i, j)?;
        stats.count(cls.case, if j == i { 1 } else { 2 });
        let value = match config.engine {
            Engine::SemiAnalytic => {
                slp_pair_semi_analytic(mesh, config, i, j, &cls, &mut stats.bundle_evaluations)?
            }
            Engine::Oracle => slp_pair_oracle(mesh, config, i, j, &cls)?,
        };
        values.push(value);
    }
    Ok((values, stats))
}

fn slp_pair_semi_analytic(
    mesh: &SurfaceMesh,
    config: &AssemblyConfig,
    i: usize,
    j: usize,
    cls: &PairClassification,
    evals: &mut u64,
) -> Result<f64> {
    if cls.case == PairCase::Identical {
        let geom = mesh.triangle_geometry(i, [0, 1, 2])?;
        return slp_identical(&geom);
    }
    let gs = mesh.triangle_geometry(i, cls.sigma_order)?;
    let gt = mesh.triangle_geometry(j, cls.tau_order)?;
    match cls.case {
        PairCase::SharedEdge => slp_edge(gt.w, gt.v, gs.w, gs.gram, gt.gram),
        PairCase::SharedVertex => slp_vertex(
            gt.v,
            gt.w,
            gs.v,
            gs.w,
            gs.gram,
            gt.gram,
            config.singular_order,
        ),
        PairCase::Disjoint => slp_farfield_counted(
            gt.p - gs.p,
            gt.v,
            gt.w,
            gs.v,
            gs.w,
            gs.gram,
            gt.gram,
            config.disjoint_order,
            evals,
        ),
        PairCase::Identical => unreachable!("handled above"),
    }
}

fn slp_pair_oracle(
    mesh: &SurfaceMesh,
    config: &AssemblyConfig,
    i: usize,
    j: usize,
    cls: &PairClassification,
) -> Result<f64> {
    if cls.case == PairCase::Identical {
        let geom = mesh.triangle_geometry(i, [0, 1, 2])?;
        return identical_slp_quadrature(&geom, config.singular_order);
    }
    let gs = mesh.triangle_geometry(i, cls.sigma_order)?;
    let gt = mesh.triangle_geometry(j, cls.tau_order)?;
    let integrand = RegularizedIntegrand::from_parts(
        cls.case,
        Kernel::Slp,
        &gs,
        &gt,
        cls.tau_normal,
        [1.0, 0.0, 0.0],
    );
    oracle_pair_integral(&integrand, pair_order(config, cls.case))
}

fn pair_order(config: &AssemblyConfig, case: PairCase) -> usize {
    match case {
        PairCase::Disjoint => config.disjoint_order,
        _ => config.singular_order,
    }
}

/// Assembles the double-layer matrix K[n,m] = ∫_{σ_n}∫_Γ k(x,y) φ_m¹(y)
/// (N×M, constant test against the vertex hat functions).
///
/// Rows run in parallel. Per pair the three incident hat functions share one
/// set of trial moments: for disjoint pairs the inner closed forms are
/// evaluated once per outer node pair and reused across all three columns.
pub fn assemble_k(
    mesh: &SurfaceMesh,
    config: &AssemblyConfig,
) -> Result<(DenseMatrix, AssemblyStats)> {
    config.validate()?;
    check_mesh_size(mesh)?;
    let start = Instant::now();
    let fallbacks_before = dlp::fallback_invocations();
    let n = mesh.triangle_count();
    let rows: Vec<(Vec<f64>, AssemblyStats)> = (0..n)
        .into_par_iter()
        .map(|i| k_row(mesh, config, i))
        .collect::<Result<_>>()?;
    let mut out = DenseMatrix::zeros(n, mesh.vertex_count());
    let mut stats = AssemblyStats::default();
    for (i, (row, row_stats)) in rows.iter().enumerate() {
        stats.merge(row_stats);
        for (j, &value) in row.iter().enumerate() {
            out[(i, j)] = value;
        }
    }
    stats.fallback_invocations = dlp::fallback_invocations() - fallbacks_before;
    stats.seconds = start.elapsed().as_secs_f64();
    Ok((out, stats))
}

fn k_row(
    mesh: &SurfaceMesh,
    config: &AssemblyConfig,
    i: usize,
) -> Result<(Vec<f64>, AssemblyStats)> {
    let mut out = vec![0.0; mesh.vertex_count()];
    let mut stats = AssemblyStats::default();
    for j in 0..mesh.triangle_count() {
        let cls = mesh.classify_pair(i, j)?;
        stats.count(cls.case, 1);
        if cls.case == PairCase::Identical {
            // The kernel numerator (x−y)·n(y) vanishes on a flat element.
            continue;
        }
        let gs = mesh.triangle_geometry(i, cls.sigma_order)?;
        let gt = mesh.triangle_geometry(j, cls.tau_order)?;
        let tri = mesh.triangles()[j];
        match config.engine {
            Engine::SemiAnalytic => match cls.case {
                PairCase::SharedEdge | PairCase::SharedVertex => {
                    for (k, coeffs) in nodal_coeffs(&cls).into_iter().enumerate() {
                        let value = if cls.case == PairCase::SharedEdge {
                            dlp_edge(gt.w, gt.v, gs.w, cls.tau_normal, coeffs, gs.gram, gt.gram)?
                        } else {
                            dlp_vertex(
                                gt.v,
                                gt.w,
                                gs.v,
                                gs.w,
                                cls.tau_normal,
                                coeffs,
                                gs.gram,
                                gt.gram,
                                config.singular_order,
                            )?
                        };
                        out[tri[k]] += value;
                    }
                }
                PairCase::Disjoint => {
                    let moments = dlp_farfield_moments(
                        gt.p - gs.p,
                        gt.v,
                        gt.w,
                        gs.v,
                        gs.w,
                        cls.tau_normal,
                        gs.gram,
                        gt.gram,
                        config.disjoint_order,
                        &mut stats.bundle_evaluations,
                    )?;
                    accumulate_moments(&mut out, tri, &cls, moments);
                }
                PairCase::Identical => unreachable!("skipped above"),
            },
            Engine::Oracle => {
                let integrand = RegularizedIntegrand::from_parts(
                    cls.case,
                    Kernel::Dlp,
                    &gs,
                    &gt,
                    cls.tau_normal,
                    [1.0, 0.0, 0.0],
                );
                let moments = integrand.moment_sums(pair_order(config, cls.case))?;
                accumulate_moments(&mut out, tri, &cls, moments);
            }
        }
    }
    Ok((out, stats))
}

/// Polynomial coefficients of the three nodal hat functions of τ in its
/// canonical parametrization.
fn nodal_coeffs(cls: &PairClassification) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for (k, coeffs) in out.iter_mut().enumerate() {
        let mut nodal = [0.0; 3];
        nodal[k] = 1.0;
        let (a0, a1, a2) = local_linear_coeffs(nodal, cls.tau_order);
        *coeffs = [a0, a1, a2];
    }
    out
}

/// Distributes trial moments (integrals against 1, y₁, y₂) onto the vertex
/// columns of τ.
fn accumulate_moments(
    out: &mut [f64],
    tri: [usize; 3],
    cls: &PairClassification,
    moments: [f64; 3],
) {
    for (k, coeffs) in nodal_coeffs(cls).into_iter().enumerate() {
        out[tri[k]] += coeffs[0] * moments[0] + coeffs[1] * moments[1] + coeffs[2] * moments[2];
    }
}

/// ‖a − b‖_F / ‖b‖_F.
pub fn frobenius_rel_error(a: &DenseMatrix, b: &DenseMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::invalid(format!(
            "matrix shapes {:?} and {:?} differ",
            a.shape(),
            b.shape()
        )));
    }
    let denom = b.norm();
    if denom == 0.0 {
        return Err(Error::invalid("reference matrix has zero Frobenius norm"));
    }
    Ok((a - b).norm() / denom)
}

/// Solves V t = rhs for the Neumann trace coefficients. V is symmetric
/// positive definite up to quadrature error, so Cholesky is tried first and
/// LU is the fallback; a solution is accepted only if the relative residual
/// stays below 1e-10.
pub fn solve_dirichlet(v: &DenseMatrix, rhs: &DenseVector) -> Result<DenseVector> {
    if v.nrows() != v.ncols() || v.nrows() != rhs.len() {
        return Err(Error::invalid(format!(
            "system shape {:?} does not match right-hand side of length {}",
            v.shape(),
            rhs.len()
        )));
    }
    let solution = match v.clone().cholesky() {
        Some(chol) => chol.solve(rhs),
        None => v
            .clone()
            .lu()
            .solve(rhs)
            .ok_or_else(|| Error::numeric("single-layer system is numerically singular"))?,
    };
    let residual = (v * &solution - rhs).norm();
    if !(residual <= RESIDUAL_TOL * rhs.norm()) {
        return Err(Error::numeric(format!(
            "solve residual {residual:.3e} exceeds {RESIDUAL_TOL:.0e}·‖rhs‖ = {:.3e}",
            RESIDUAL_TOL * rhs.norm()
        )));
    }
    Ok(solution)
}

const MATRIX_MAGIC: &[u8; 4] = b"BEMM";

/// Writes a matrix in the binary container: magic "BEMM", u32 little-endian
/// row and column counts, then the entries as f64 little-endian row-major.
pub fn write_matrix(path: impl AsRef<Path>, matrix: &DenseMatrix) -> Result<()> {
    let mut file = BufWriter::new(File::create(path)?);
    file.write_all(MATRIX_MAGIC)?;
    for dim in [matrix.nrows(), matrix.ncols()] {
        let dim =
            u32::try_from(dim).map_err(|_| Error::invalid("matrix dimension exceeds u32"))?;
        file.write_all(&dim.to_le_bytes())?;
    }
    for i in 0..matrix.nrows() {
        for j in 0..matrix.ncols() {
            file.write_all(&matrix[(i, j)].to_le_bytes())?;
        }
    }
    file.flush()?;
    Ok(())
}

/// Reads a matrix written by `write_matrix`, rejecting wrong magic, truncated
/// payloads and trailing bytes.
pub fn read_matrix(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let mut file = BufReader::new(File::open(path)?);
    let magic: [u8; 4] = read_chunk(&mut file, "magic")?;
    if &magic != MATRIX_MAGIC {
        return Err(Error::Parse {
            line: 1,
            msg: format!("bad matrix magic {magic:?}, expected {MATRIX_MAGIC:?}"),
        });
    }
    let rows = u32::from_le_bytes(read_chunk(&mut file, "row count")?) as usize;
    let cols = u32::from_le_bytes(read_chunk(&mut file, "column count")?) as usize;
    let limit = MAX_TRIANGLES * MAX_TRIANGLES;
    match rows.checked_mul(cols) {
        Some(entries) if entries <= limit => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("matrix of {rows}×{cols} entries exceeds the {limit} entry limit"),
            })
        }
    }
    let mut out = DenseMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            out[(i, j)] = f64::from_le_bytes(read_chunk(&mut file, "matrix entry")?);
        }
    }
    let mut probe = [0u8; 1];
    if file.read(&mut probe)? != 0 {
        return Err(Error::Parse {
            line: 1,
            msg: "trailing bytes after matrix payload".into(),
        });
    }
    Ok(out)
}

fn read_chunk<const N: usize>(file: &mut impl Read, what: &str) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    file.read_exact(&mut buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Parse {
            line: 1,
            msg: format!("truncated matrix file while reading {what}"),
        },
        _ => Error::Io(e),
    })?;
    Ok(buf)
}

/// Writes a matrix as plain CSV, one row per line; f64 display output
/// round-trips exactly.
pub fn write_matrix_csv(path: impl AsRef<Path>, matrix: &DenseMatrix) -> Result<()> {
    let mut file = BufWriter::new(File::create(path)?);
    for i in 0..matrix.nrows() {
        for j in 0..matrix.ncols() {
            if j > 0 {
                file.write_all(b",")?;
            }
            write!(file, "{}", matrix[(i, j)])?;
        }
        file.write_all(b"\n")?;
    }
    file.flush()?;
    Ok(())
}
