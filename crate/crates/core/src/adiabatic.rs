//! Numerical check of the adiabatic theorem in its explicit-bound form:
//! midpoint product-formula integration of the Schrödinger equation under
//! H(t/T), compared against the 1/T bound assembled from the gap profile
//! and the derivative norms of H(s).

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, hermitian_eig, hermiticity_defect, opnorm, CMatrix, ComplexMatrix};
use crate::tol;

/// Default node count for derivative estimation and quadrature.
pub const DEFAULT_GRID: usize = 512;

/// The step count doubles at most this many times before `evolve` settles
/// for the finest state it has.
pub const MAX_STEP_DOUBLINGS: usize = 12;

/// The quadrature grid doubles at most this many times.
pub const MAX_GRID_DOUBLINGS: usize = 8;

const EIG_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone)]
enum SchedulePath {
    /// H(s) = (1 - s) H0 + s H1, extended linearly beyond [0, 1] so that
    /// endpoint derivative stencils stay well-defined.
    Linear { h0: CMatrix, dh: CMatrix },
    /// Natural cubic interpolation of uniformly spaced Hermitian samples;
    /// the end segments extend cubically beyond [0, 1].
    Sampled {
        nodes: Vec<CMatrix>,
        second: Vec<CMatrix>,
    },
}

/// A Hermitian-matrix-valued path s -> H(s) on [0, 1], with the grid
/// resolution used for derivative estimation and quadrature.
#[derive(Debug, Clone)]
pub struct AdiabaticSchedule {
    dim: usize,
    path: SchedulePath,
    grid: usize,
}

fn require_hermitian(m: &CMatrix, label: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Contract(format!(
            "{label} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let defect = hermiticity_defect(m);
    if defect > tol::SCHEDULE_HERMITIAN {
        return Err(Error::Contract(format!(
            "{label} is not Hermitian: defect {defect:.3e} exceeds {:.0e}",
            tol::SCHEDULE_HERMITIAN
        )));
    }
    Ok(())
}

impl AdiabaticSchedule {
    /// Linear interpolation between two Hermitian endpoint Hamiltonians.
    pub fn linear(h0: CMatrix, h1: CMatrix) -> Result<Self> {
        require_hermitian(&h0, "H(0)")?;
        require_hermitian(&h1, "H(1)")?;
        if h0.shape() != h1.shape() {
            return Err(Error::Contract(format!(
                "endpoint Hamiltonians differ in shape: {}x{} vs {}x{}",
                h0.nrows(),
                h0.ncols(),
                h1.nrows(),
                h1.ncols()
            )));
        }
        let dim = h0.nrows();
        if dim < 2 {
            return Err(Error::Contract(
                "a schedule needs at least a two-level system".into(),
            ));
        }
        let dh = &h1 - &h0;
        Ok(Self {
            dim,
            path: SchedulePath::Linear { h0, dh },
            grid: DEFAULT_GRID,
        })
    }

    /// Natural cubic interpolation of Hermitian samples at uniform s-nodes
    /// 0, 1/(m-1), ..., 1.
    pub fn sampled(nodes: Vec<CMatrix>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::Contract(format!(
                "sampled schedules need at least two nodes, got {}",
                nodes.len()
            )));
        }
        for (i, node) in nodes.iter().enumerate() {
            require_hermitian(node, &format!("sample {i}"))?;
            if node.shape() != nodes[0].shape() {
                return Err(Error::Contract("samples differ in shape".into()));
            }
        }
        let dim = nodes[0].nrows();
        if dim < 2 {
            return Err(Error::Contract(
                "a schedule needs at least a two-level system".into(),
            ));
        }
        let second = natural_spline_second_derivatives(&nodes);
        Ok(Self {
            dim,
            path: SchedulePath::Sampled { nodes, second },
            grid: DEFAULT_GRID,
        })
    }

    /// Overrides the derivative/quadrature grid resolution.
    pub fn with_grid(mut self, grid: usize) -> Result<Self> {
        if !(16..=1 << 17).contains(&grid) {
            return Err(Error::Contract(format!(
                "grid resolution must lie in 16..=131072, got {grid}"
            )));
        }
        self.grid = grid;
        Ok(self)
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Evaluates H(s). The path extends smoothly slightly beyond [0, 1] so
    /// central-difference stencils at the endpoints remain usable.
    pub fn hamiltonian(&self, s: f64) -> CMatrix {
        match &self.path {
            SchedulePath::Linear { h0, dh } => h0 + dh * c64(s, 0.0),
            SchedulePath::Sampled { nodes, second } => {
                let m = nodes.len();
                let h = 1.0 / (m - 1) as f64;
                let seg = ((s / h).floor() as isize).clamp(0, m as isize - 2) as usize;
                let t = s / h - seg as f64;
                let u = 1.0 - t;
                &nodes[seg] * c64(u, 0.0)
                    + &nodes[seg + 1] * c64(t, 0.0)
                    + (&second[seg] * c64(u * u * u - u, 0.0)
                        + &second[seg + 1] * c64(t * t * t - t, 0.0))
                        * c64(h * h / 6.0, 0.0)
            }
        }
    }
}

/// Second-derivative matrices of the natural cubic spline through uniform
/// samples, by the standard tridiagonal solve (zero at both ends).
fn natural_spline_second_derivatives(nodes: &[CMatrix]) -> Vec<CMatrix> {
    let m = nodes.len();
    let (rows, cols) = nodes[0].shape();
    let mut second = vec![CMatrix::zeros(rows, cols); m];
    if m <= 2 {
        return second;
    }
    let h = 1.0 / (m - 1) as f64;
    let scale = c64(6.0 / (h * h), 0.0);
    let inner = m - 2;
    let mut diag = vec![4.0f64; inner];
    let mut rhs: Vec<CMatrix> = (1..=inner)
        .map(|i| (&nodes[i + 1] - &nodes[i] * c64(2.0, 0.0) + &nodes[i - 1]) * scale)
        .collect();
    for i in 1..inner {
        let factor = 1.0 / diag[i - 1];
        diag[i] -= factor;
        let carry = &rhs[i - 1] * c64(factor, 0.0);
        rhs[i] -= carry;
    }
    second[inner] = &rhs[inner - 1] * c64(1.0 / diag[inner - 1], 0.0);
    for i in (1..inner).rev() {
        second[i] = (&rhs[i - 1] - &second[i + 1]) * c64(1.0 / diag[i - 1], 0.0);
    }
    second
}

/// JSON wire form of a linear schedule.
#[derive(Debug, Serialize, Deserialize)]
struct RawSchedule {
    dim: usize,
    #[serde(rename = "H0")]
    h0: ComplexMatrix,
    #[serde(rename = "H1")]
    h1: ComplexMatrix,
}

/// Parses `{"dim": d, "H0": matrix, "H1": matrix}` into the linear
/// schedule H(s) = (1 - s) H0 + s H1.
pub fn schedule_from_json(text: &str) -> Result<AdiabaticSchedule> {
    let raw: RawSchedule =
        serde_json::from_str(text).map_err(|e| Error::Contract(format!("schedule JSON: {e}")))?;
    let h0 = raw.h0.to_cmatrix()?;
    let h1 = raw.h1.to_cmatrix()?;
    if h0.nrows() != raw.dim || h1.nrows() != raw.dim {
        return Err(Error::Contract(format!(
            "declared dim {} does not match the matrices ({} and {})",
            raw.dim,
            h0.nrows(),
            h1.nrows()
        )));
    }
    AdiabaticSchedule::linear(h0, h1)
}

fn degenerate(s: f64, gap: f64) -> Error {
    Error::Contract(format!(
        "ground state degenerate at s = {s}: gap {gap:.3e} is below {:.0e}",
        tol::MIN_GAP
    ))
}

/// Ground vector, ground energy, and gap of a Hermitian matrix, rejecting
/// near-degenerate ground states.
fn ground_of(m: &CMatrix, s: f64) -> Result<(CMatrix, f64, f64)> {
    let eig = hermitian_eig(m)?;
    let gap = eig.eigenvalues[1] - eig.eigenvalues[0];
    if gap <= tol::MIN_GAP {
        return Err(degenerate(s, gap));
    }
    let dim = m.nrows();
    let ground = CMatrix::from_fn(dim, 1, |r, _| eig.eigenvectors[(r, 0)]);
    Ok((ground, eig.eigenvalues[0], gap))
}

/// Final state of one product-formula pass with a fixed step count, for a
/// two-level linear path. The traceless part of H(s) is carried as a Bloch
/// vector, so each step is a closed-form rotation with the ground energy
/// already zeroed.
fn run_linear_dim2(
    b0: [f64; 3],
    db: [f64; 3],
    psi0: [Complex64; 2],
    t_total: f64,
    n: usize,
) -> Result<[Complex64; 2]> {
    let dt = t_total / n as f64;
    let mut psi = psi0;
    for j in 0..n {
        let s = (j as f64 + 0.5) / n as f64;
        let bx = b0[0] + s * db[0];
        let by = b0[1] + s * db[1];
        let bz = b0[2] + s * db[2];
        let bn = (bx * bx + by * by + bz * bz).sqrt();
        if 2.0 * bn <= tol::MIN_GAP {
            return Err(degenerate(s, 2.0 * bn));
        }
        let theta = bn * dt;
        let (sin_t, cos_t) = theta.sin_cos();
        let phase = Complex64::from_polar(1.0, -theta);
        let (nx, ny, nz) = (bx / bn, by / bn, bz / bn);
        let mi_s = c64(0.0, -sin_t);
        let u00 = (c64(cos_t, 0.0) + mi_s * nz) * phase;
        let u01 = mi_s * c64(nx, -ny) * phase;
        let u10 = mi_s * c64(nx, ny) * phase;
        let u11 = (c64(cos_t, 0.0) - mi_s * nz) * phase;
        psi = [u00 * psi[0] + u01 * psi[1], u10 * psi[0] + u11 * psi[1]];
    }
    Ok(psi)
}

/// Same pass for a three-level linear path, using stack-allocated
/// eigendecompositions.
fn run_linear_dim3(
    h0: &Matrix3<Complex64>,
    dh: &Matrix3<Complex64>,
    psi0: Vector3<Complex64>,
    t_total: f64,
    n: usize,
) -> Result<Vector3<Complex64>> {
    let dt = t_total / n as f64;
    let mut psi = psi0;
    for j in 0..n {
        let s = (j as f64 + 0.5) / n as f64;
        let hm = h0 + dh * c64(s, 0.0);
        let eig =
            hm.try_symmetric_eigen(f64::EPSILON, EIG_MAX_ITER)
                .ok_or(Error::EigenConvergence {
                    iterations: EIG_MAX_ITER,
                })?;
        let mut sorted = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2]];
        sorted.sort_by(f64::total_cmp);
        let gap = sorted[1] - sorted[0];
        if gap <= tol::MIN_GAP {
            return Err(degenerate(s, gap));
        }
        let mut w = eig.eigenvectors.adjoint() * psi;
        for k in 0..3 {
            w[k] *= Complex64::from_polar(1.0, -dt * (eig.eigenvalues[k] - sorted[0]));
        }
        psi = eig.eigenvectors * w;
    }
    Ok(psi)
}

/// Same pass through the general dense route, used for sampled paths and
/// dimensions above three.
fn run_generic(
    schedule: &AdiabaticSchedule,
    psi0: &CMatrix,
    t_total: f64,
    n: usize,
) -> Result<CMatrix> {
    let dt = t_total / n as f64;
    let dim = schedule.dim;
    let mut psi = psi0.clone();
    for j in 0..n {
        let s = (j as f64 + 0.5) / n as f64;
        let hm = schedule.hamiltonian(s);
        let eig = hermitian_eig(&hm)?;
        let gap = eig.eigenvalues[1] - eig.eigenvalues[0];
        if gap <= tol::MIN_GAP {
            return Err(degenerate(s, gap));
        }
        let mut w = eig.eigenvectors.adjoint() * &psi;
        for k in 0..dim {
            w[(k, 0)] *=
                Complex64::from_polar(1.0, -dt * (eig.eigenvalues[k] - eig.eigenvalues[0]));
        }
        psi = &eig.eigenvectors * w;
    }
    Ok(psi)
}

/// Result of an adiabatic evolution with step-doubling refinement.
#[derive(Debug, Clone)]
pub struct Evolution {
    /// Final state ψ(T) as a unit column vector.
    pub state: CMatrix,
    /// Step count of the finest pass.
    pub steps: usize,
    /// Whether consecutive refinements agreed before the doubling cap.
    pub converged: bool,
    /// Final-state change across the last doubling.
    pub step_change: f64,
}

/// Integrates the Schrödinger equation for H(t/T) from the ground state of
/// H(0), sampling the schedule at step midpoints, with the ground energy
/// zeroed inside each step. The step count doubles until the final state
/// settles within tolerance or the doubling cap is reached.
pub fn evolve(schedule: &AdiabaticSchedule, t_total: f64, steps: usize) -> Result<Evolution> {
    if !t_total.is_finite() || t_total <= 0.0 {
        return Err(Error::Contract(format!(
            "total time must be finite and positive, got {t_total}"
        )));
    }
    if steps < 100 {
        return Err(Error::Contract(format!(
            "the integrator needs at least 100 steps, got {steps}"
        )));
    }
    let (psi0, _, _) = ground_of(&schedule.hamiltonian(0.0), 0.0)?;

    let run = |n: usize| -> Result<CMatrix> {
        match (&schedule.path, schedule.dim) {
            (SchedulePath::Linear { h0, dh }, 2) => {
                let split = |m: &CMatrix| -> [f64; 3] {
                    [
                        m[(0, 1)].re,
                        -m[(0, 1)].im,
                        0.5 * (m[(0, 0)].re - m[(1, 1)].re),
                    ]
                };
                let out = run_linear_dim2(
                    split(h0),
                    split(dh),
                    [psi0[(0, 0)], psi0[(1, 0)]],
                    t_total,
                    n,
                )?;
                Ok(CMatrix::from_fn(2, 1, |r, _| out[r]))
            }
            (SchedulePath::Linear { h0, dh }, 3) => {
                let h0s = Matrix3::from_fn(|r, c| h0[(r, c)]);
                let dhs = Matrix3::from_fn(|r, c| dh[(r, c)]);
                let p0 = Vector3::new(psi0[(0, 0)], psi0[(1, 0)], psi0[(2, 0)]);
                let out = run_linear_dim3(&h0s, &dhs, p0, t_total, n)?;
                Ok(CMatrix::from_fn(3, 1, |r, _| out[r]))
            }
            _ => run_generic(schedule, &psi0, t_total, n),
        }
    };

    let mut n = steps;
    let mut state = run(n)?;
    let mut converged = false;
    let mut step_change = f64::NAN;
    for _ in 0..MAX_STEP_DOUBLINGS {
        let finer = run(2 * n)?;
        step_change = (&finer - &state).norm();
        n *= 2;
        state = finer;
        if step_change <= tol::EVOLVE_REFINE {
            converged = true;
            break;
        }
    }

    let drift = (state.norm() - 1.0).abs();
    if drift > tol::NORM_DRIFT {
        return Err(Error::Verification(format!(
            "state norm drifted by {drift:.3e} during evolution"
        )));
    }
    Ok(Evolution {
        state,
        steps: n,
        converged,
        step_change,
    })
}

/// One grid pass over the T-independent bracket of the bound: the two
/// endpoint terms plus the trapezoid integral of
/// 5 ||H'||^2 / gap^3 + ||H''|| / gap^2.
fn bracket_on_grid(schedule: &AdiabaticSchedule, grid: usize) -> Result<f64> {
    let h = 1.0 / grid as f64;
    let vals: Vec<CMatrix> = (-1..=grid as isize + 1)
        .map(|i| schedule.hamiltonian(i as f64 * h))
        .collect();
    let mut integral = 0.0;
    let mut endpoints = 0.0;
    for i in 0..=grid {
        let s = i as f64 * h;
        let hp = (&vals[i + 2] - &vals[i]) * c64(0.5 / h, 0.0);
        let hpp =
            (&vals[i + 2] - &vals[i + 1] * c64(2.0, 0.0) + &vals[i]) * c64(1.0 / (h * h), 0.0);
        let eig = hermitian_eig(&vals[i + 1])?;
        let gap = eig.eigenvalues[1] - eig.eigenvalues[0];
        if gap <= tol::MIN_GAP {
            return Err(degenerate(s, gap));
        }
        let np = opnorm(&hp)?;
        let npp = opnorm(&hpp)?;
        let f = 5.0 * np * np / (gap * gap * gap) + npp / (gap * gap);
        let w = if i == 0 || i == grid { 0.5 } else { 1.0 };
        integral += w * f * h;
        if i == 0 || i == grid {
            endpoints += np / (gap * gap);
        }
    }
    Ok(endpoints + integral)
}

/// T-independent bracket of the bound, grid-refined until it settles.
fn bound_bracket(schedule: &AdiabaticSchedule) -> Result<f64> {
    let mut grid = schedule.grid;
    let mut prev: Option<f64> = None;
    for _ in 0..=MAX_GRID_DOUBLINGS {
        let value = bracket_on_grid(schedule, grid)?;
        if let Some(p) = prev {
            if (value - p).abs() <= tol::QUADRATURE_REL * value.abs().max(f64::MIN_POSITIVE) {
                return Ok(value);
            }
        }
        prev = Some(value);
        grid *= 2;
    }
    Err(Error::Verification(format!(
        "bound quadrature did not settle within {} grid doublings",
        MAX_GRID_DOUBLINGS
    )))
}

/// Evaluates the explicit adiabatic bound
/// (1/T) [ ||H'(0)||/γ(0)² + ||H'(1)||/γ(1)² + ∫ (5||H'||²/γ³ + ||H''||/γ²) ds ]
/// with central-difference derivatives and trapezoid quadrature, refined
/// until the value settles in relative terms.
pub fn goldstone_bound(schedule: &AdiabaticSchedule, t_total: f64) -> Result<f64> {
    if !t_total.is_finite() || t_total <= 0.0 {
        return Err(Error::Contract(format!(
            "total time must be finite and positive, got {t_total}"
        )));
    }
    Ok(bound_bracket(schedule)? / t_total)
}

/// Distance-versus-bound verdict for one total time.
#[derive(Debug, Clone, Serialize)]
pub struct AdiabaticReport {
    /// Total evolution time T.
    pub total_time: f64,
    /// Phase-minimized distance between ψ(T) and the final ground state.
    pub distance: f64,
    /// The theorem's right-hand side at this T.
    pub bound: f64,
    /// distance <= bound + slack.
    pub pass: bool,
    /// Step count of the finest integrator pass.
    pub steps: usize,
    /// Whether step doubling settled before its cap.
    pub converged: bool,
    /// Final-state change across the last doubling.
    pub step_change: f64,
}

/// Runs the evolution for each total time and compares the final-state
/// distance (minimized over a global phase) against the bound. The phase
/// minimization is sound because the theorem asserts existence of a good
/// phase: the minimized distance is no larger than the theorem's.
pub fn adiabatic_check(
    schedule: &AdiabaticSchedule,
    times: &[f64],
    steps: usize,
) -> Result<Vec<AdiabaticReport>> {
    if times.is_empty() {
        return Err(Error::Contract("at least one total time is needed".into()));
    }
    let bracket = bound_bracket(schedule)?;
    let (ground_final, _, _) = ground_of(&schedule.hamiltonian(1.0), 1.0)?;
    let mut reports = Vec::with_capacity(times.len());
    for &t_total in times {
        let ev = evolve(schedule, t_total, steps)?;
        let overlap = (ground_final.adjoint() * &ev.state)[(0, 0)].norm();
        let distance = (2.0 - 2.0 * overlap.min(1.0)).max(0.0).sqrt();
        let bound = bracket / t_total;
        reports.push(AdiabaticReport {
            total_time: t_total,
            distance,
            bound,
            pass: distance <= bound + tol::DISTANCE_SLACK,
            steps: ev.steps,
            converged: ev.converged,
            step_change: ev.step_change,
        });
    }
    Ok(reports)
}
