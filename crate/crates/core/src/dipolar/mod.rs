//! Dipolar physics: the angular `1/r^3` coupling, control-volume interaction
//! integrals with their scale invariance, the analytic monotonicity
//! derivative, and cube-dilation GHZ scheduling.

mod quad;

use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use quad::{integrate_box, DEFAULT_MAX_BOXES};

/// Dipole-dipole coupling kernel with a configurable field axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DipoleCoupling {
    axis: [f64; 3],
}

impl DipoleCoupling {
    /// Field along `+z`, the frame used by all the prism integrals.
    pub fn zhat() -> Self {
        Self {
            axis: [0.0, 0.0, 1.0],
        }
    }

    pub fn new(axis: [f64; 3]) -> Result<Self> {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if !norm.is_finite() || norm < 1e-12 {
            return Err(Error::InvalidParameter(
                "field axis must be a nonzero finite vector".into(),
            ));
        }
        Ok(Self {
            axis: [axis[0] / norm, axis[1] / norm, axis[2] / norm],
        })
    }

    pub fn axis(&self) -> [f64; 3] {
        self.axis
    }

    /// `(1 - 3 cos^2 theta) / r^3` for a separation vector `r_vec`.
    pub fn coupling(&self, r_vec: [f64; 3]) -> Result<f64> {
        let r2 = r_vec[0] * r_vec[0] + r_vec[1] * r_vec[1] + r_vec[2] * r_vec[2];
        if r2 == 0.0 {
            return Err(Error::InvalidParameter(
                "zero separation vector has no dipole coupling".into(),
            ));
        }
        let dot = r_vec[0] * self.axis[0] + r_vec[1] * self.axis[1] + r_vec[2] * self.axis[2];
        let cos2 = dot * dot / r2;
        Ok((1.0 - 3.0 * cos2) / (r2 * r2.sqrt()))
    }
}

/// Dipole coupling with the default `+z` field axis.
pub fn dipole_coupling(r_vec: [f64; 3]) -> Result<f64> {
    DipoleCoupling::zhat().coupling(r_vec)
}

/// The dipole kernel in Cartesian separation coordinates (field along `+z`):
/// `(x^2 + y^2 - 2 z^2) / (x^2 + y^2 + z^2)^(5/2)`.
#[inline]
fn dipole_kernel(u: &[f64; 3]) -> f64 {
    let r2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    (u[0] * u[0] + u[1] * u[1] - 2.0 * u[2] * u[2]) / (r2 * r2 * r2.sqrt())
}

/// Rectangular prism of control qubits occupying `x in [x0, x0 + lx]`,
/// centered on the `y` and `z` axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ControlPrism {
    pub lx: f64,
    pub ly: f64,
    pub lz: f64,
    pub x0: f64,
}

impl ControlPrism {
    pub fn new(lx: f64, ly: f64, lz: f64, x0: f64) -> Result<Self> {
        for (name, v) in [("lx", lx), ("ly", ly), ("lz", lz)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "prism edge {name} = {v} must be positive and finite"
                )));
            }
        }
        if !x0.is_finite() {
            return Err(Error::InvalidParameter("prism anchor must be finite".into()));
        }
        Ok(Self { lx, ly, lz, x0 })
    }

    /// Cube of the given edge anchored at the origin.
    pub fn cube(edge: f64) -> Result<Self> {
        Self::new(edge, edge, edge, 0.0)
    }

    /// Prism whose near (`+x`) face sits at the origin, the frame in which
    /// the monotonicity derivative is written: anchored at `x0 = -lx`.
    pub fn facing_origin(lx: f64, ly: f64, lz: f64) -> Result<Self> {
        Self::new(lx, ly, lz, -lx)
    }

    fn bounds(&self) -> ([f64; 3], [f64; 3]) {
        (
            [self.x0, -self.ly / 2.0, -self.lz / 2.0],
            [self.x0 + self.lx, self.ly / 2.0, self.lz / 2.0],
        )
    }

    /// Closed containment; the kernel is non-integrable at interior points
    /// and on the boundary.
    pub fn contains(&self, p: [f64; 3]) -> bool {
        let (lo, hi) = self.bounds();
        (0..3).all(|k| p[k] >= lo[k] && p[k] <= hi[k])
    }
}

/// Interaction integral of the dipole kernel over an arbitrary axis-aligned
/// control box against a target point.
pub(crate) fn dipole_box_integral(
    lo: [f64; 3],
    hi: [f64; 3],
    target: [f64; 3],
    tol: f64,
) -> Result<f64> {
    if (0..3).all(|k| target[k] >= lo[k] && target[k] <= hi[k]) {
        return Err(Error::TargetInsidePrism);
    }
    // Integrate in separation coordinates u = source - target.
    let u_lo = [lo[0] - target[0], lo[1] - target[1], lo[2] - target[2]];
    let u_hi = [hi[0] - target[0], hi[1] - target[1], hi[2] - target[2]];
    integrate_box(&dipole_kernel, u_lo, u_hi, 3, tol, DEFAULT_MAX_BOXES)
}

/// Total dipolar interaction between a continuum control prism and a target
/// qubit, to absolute accuracy `quadrature_tol`.
pub fn prism_interaction(prism: &ControlPrism, target: [f64; 3], quadrature_tol: f64) -> Result<f64> {
    if prism.contains(target) {
        return Err(Error::TargetInsidePrism);
    }
    let (lo, hi) = prism.bounds();
    dipole_box_integral(lo, hi, target, quadrature_tol)
}

/// Unit-spaced lattice sum approximating [`prism_interaction`]: dipole
/// couplings summed over cell centers, scaled by the cell volume.
pub fn prism_lattice_sum(prism: &ControlPrism, target: [f64; 3], spacing: f64) -> Result<f64> {
    if !(spacing > 0.0) || !spacing.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "lattice spacing {spacing} must be positive and finite"
        )));
    }
    if prism.contains(target) {
        return Err(Error::TargetInsidePrism);
    }
    let (lo, hi) = prism.bounds();
    let cells: Vec<usize> = (0..3)
        .map(|k| (((hi[k] - lo[k]) / spacing).round() as usize).max(1))
        .collect();
    let widths: Vec<f64> = (0..3).map(|k| (hi[k] - lo[k]) / cells[k] as f64).collect();
    let mut acc = KahanSum::new();
    for i in 0..cells[0] {
        let x = lo[0] + (i as f64 + 0.5) * widths[0];
        for j in 0..cells[1] {
            let y = lo[1] + (j as f64 + 0.5) * widths[1];
            for k in 0..cells[2] {
                let z = lo[2] + (k as f64 + 0.5) * widths[2];
                let u = [x - target[0], y - target[1], z - target[2]];
                acc.add(dipole_kernel(&u));
            }
        }
    }
    Ok(acc.value() * widths[0] * widths[1] * widths[2])
}

/// Analytic `d/dx` of the prism interaction for a target beyond the `+x`
/// face with its `y, z` projection inside the cross-section. Strictly
/// negative on that region. Four-corner combination of the mixed
/// antiderivative `Phi(X, a, b) = a b / ((X^2 + b^2) sqrt(X^2 + a^2 + b^2))`
/// differenced between the far and near faces.
pub fn dvdx_analytic(prism: &ControlPrism, point: [f64; 3]) -> Result<f64> {
    let gap = point[0] - (prism.x0 + prism.lx);
    let y = point[1];
    let z = point[2];
    if !(gap > 0.0) || y.abs() >= prism.ly / 2.0 || z.abs() >= prism.lz / 2.0 {
        return Err(Error::MonotonicityRegionViolated);
    }
    let x1 = gap;
    let x2 = gap + prism.lx;
    let phi = |x: f64, a: f64, b: f64| {
        let x2b2 = x * x + b * b;
        a * b / (x2b2 * (x * x + a * a + b * b).sqrt())
    };
    let dterm = |a: f64, b: f64| phi(x2, a, b) - phi(x1, a, b);
    let a1 = y - prism.ly / 2.0;
    let a2 = y + prism.ly / 2.0;
    let b1 = z - prism.lz / 2.0;
    let b2 = z + prism.lz / 2.0;
    Ok(dterm(a1, b1) + dterm(a2, b2) - dterm(a1, b2) - dterm(a2, b1))
}

/// Kernel family for cube dilation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DilationKind {
    /// Angular dipole kernel in 3D with directional sub-steps (the sign
    /// changes force face-by-face expansion).
    Dipolar,
    /// Isotropic `1/r^alpha` kernel in `d` dimensions; the whole cube is
    /// dilated at once and the far corner sets the step time.
    PowerLaw { alpha: f64, d: usize },
}

/// A cube-dilation schedule: grow the control cube edge by `lambda` per step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DilationPlan {
    pub initial_edge: f64,
    pub lambda: f64,
    pub steps: usize,
    pub kind: DilationKind,
    /// Filled by [`dilation_schedule`].
    pub per_step_times: Vec<f64>,
    pub total_time: f64,
    /// Conservative bound on the per-step time error from quadrature and
    /// face sampling.
    pub time_tolerance: f64,
}

impl DilationPlan {
    pub fn new(initial_edge: f64, lambda: f64, steps: usize, kind: DilationKind) -> Result<Self> {
        if !(initial_edge > 0.0) || !initial_edge.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "initial edge {initial_edge} must be positive and finite"
            )));
        }
        if !(lambda > 1.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "dilation factor {lambda} must exceed 1"
            )));
        }
        if steps == 0 {
            return Err(Error::InvalidParameter("need at least one dilation step".into()));
        }
        if let DilationKind::PowerLaw { alpha, d } = kind {
            if !(1..=3).contains(&d) {
                return Err(Error::InvalidParameter(format!(
                    "dimension {d} unsupported (need 1 <= d <= 3)"
                )));
            }
            if !alpha.is_finite() || alpha < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "exponent {alpha} must be finite and non-negative"
                )));
            }
        }
        Ok(Self {
            initial_edge,
            lambda,
            steps,
            kind,
            per_step_times: Vec::new(),
            total_time: 0.0,
            time_tolerance: 0.0,
        })
    }
}

/// Resolution of the slab-face sampling grid used to bound the slowest
/// qubit's interaction during an expansion sub-step.
const FACE_GRID: usize = 32;
const GOLDEN_ROUNDS: usize = 2;
const GOLDEN_ITERS: usize = 12;

/// Fill in the per-step times of a dilation plan.
///
/// Dipolar: each step expands along `+x`, `+y`, `+z` successively; each
/// sub-step converts the whole added slab in `pi / (2 min |V_j|)` with the
/// minimum taken over the slab's far face (interaction magnitude decreases
/// monotonically along the expansion direction). Slab qubits are modeled as
/// a continuum.
///
/// Power-law: the whole cube dilates at once; the far corner of the dilated
/// cube is slowest, giving `pi / (2 V_corner)` per step.
pub fn dilation_schedule(plan: &DilationPlan, quadrature_tol: f64) -> Result<DilationPlan> {
    if !(quadrature_tol > 0.0) || !quadrature_tol.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "quadrature tolerance {quadrature_tol} must be positive and finite"
        )));
    }
    let mut filled = plan.clone();
    filled.per_step_times.clear();
    let mut total = KahanSum::new();
    let mut worst_tol = 0.0f64;

    match plan.kind {
        DilationKind::Dipolar => {
            let mut dims = [plan.initial_edge; 3];
            for step in 1..=plan.steps {
                let mut step_time = 0.0;
                let mut step_tol = 0.0;
                for axis in 0..3 {
                    let grown = dims[axis] * plan.lambda;
                    let (v_min, sub_tol) =
                        slab_face_min(dims, axis, grown, quadrature_tol, step)?;
                    step_time += FRAC_PI_2 / v_min;
                    step_tol += sub_tol;
                    dims[axis] = grown;
                }
                filled.per_step_times.push(step_time);
                total.add(step_time);
                worst_tol = worst_tol.max(step_tol);
            }
        }
        DilationKind::PowerLaw { alpha, d } => {
            let mut edge = plan.initial_edge;
            for step in 1..=plan.steps {
                let corner = edge * plan.lambda;
                let target = [corner; 3];
                let kernel = move |u: &[f64; 3]| {
                    let r2: f64 = u[..d].iter().map(|c| c * c).sum();
                    r2.powf(-alpha / 2.0)
                };
                let mut lo = [0.0; 3];
                let mut hi = [0.0; 3];
                for k in 0..d {
                    lo[k] = -target[k];
                    hi[k] = edge - target[k];
                }
                let v = integrate_box(&kernel, lo, hi, d, quadrature_tol, DEFAULT_MAX_BOXES)?;
                if v.abs() <= 2.0 * quadrature_tol {
                    return Err(Error::ZeroCrossingInSlab { step });
                }
                filled.per_step_times.push(FRAC_PI_2 / v);
                total.add(FRAC_PI_2 / v);
                worst_tol = worst_tol.max(propagated_time_tol(v, quadrature_tol));
                edge = corner;
            }
        }
    }

    filled.total_time = total.value();
    filled.time_tolerance = worst_tol;
    Ok(filled)
}

fn propagated_time_tol(v: f64, quad_tol: f64) -> f64 {
    let v = v.abs();
    FRAC_PI_2 * quad_tol / (v * (v - quad_tol).max(v / 2.0))
}

/// Minimum |V| over the far face of the slab added when `dims[axis]` grows to
/// `grown`, with the pre-expansion box as the control volume: a uniform grid
/// over the face plus a coordinate golden-section refinement around the grid
/// minimum.
fn slab_face_min(
    dims: [f64; 3],
    axis: usize,
    grown: f64,
    tol: f64,
    step: usize,
) -> Result<(f64, f64)> {
    let lo = [0.0; 3];
    let hi = dims;
    let (u, w) = match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };

    let face_point = |cu: f64, cw: f64| {
        let mut p = [0.0; 3];
        p[axis] = grown;
        p[u] = cu;
        p[w] = cw;
        p
    };

    let samples: Vec<(f64, f64)> = (0..FACE_GRID)
        .flat_map(|i| (0..FACE_GRID).map(move |j| (i, j)))
        .map(|(i, j)| {
            (
                dims[u] * i as f64 / (FACE_GRID - 1) as f64,
                dims[w] * j as f64 / (FACE_GRID - 1) as f64,
            )
        })
        .collect();
    let values: Vec<f64> = samples
        .par_iter()
        .map(|&(cu, cw)| dipole_box_integral(lo, hi, face_point(cu, cw), tol).map(f64::abs))
        .collect::<Result<_>>()?;

    let (mut best_idx, mut best) = (0usize, f64::INFINITY);
    for (idx, &v) in values.iter().enumerate() {
        if v < best {
            best = v;
            best_idx = idx;
        }
    }

    // Coordinate golden-section refinement inside the neighboring grid cells.
    let cell_u = dims[u] / (FACE_GRID - 1) as f64;
    let cell_w = dims[w] / (FACE_GRID - 1) as f64;
    let (mut cu, mut cw) = samples[best_idx];
    let eval = |cu: f64, cw: f64| -> Result<f64> {
        dipole_box_integral(lo, hi, face_point(cu, cw), tol).map(f64::abs)
    };
    for _ in 0..GOLDEN_ROUNDS {
        cu = golden_min(
            |x| eval(x, cw),
            (cu - cell_u).max(0.0),
            (cu + cell_u).min(dims[u]),
        )?;
        cw = golden_min(
            |x| eval(cu, x),
            (cw - cell_w).max(0.0),
            (cw + cell_w).min(dims[w]),
        )?;
    }
    best = best.min(eval(cu, cw)?);

    if best <= 2.0 * tol {
        return Err(Error::ZeroCrossingInSlab { step });
    }
    Ok((best, propagated_time_tol(best, tol)))
}

fn golden_min<F: FnMut(f64) -> Result<f64>>(mut f: F, mut a: f64, mut b: f64) -> Result<f64> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - (b - a) * INV_PHI;
    let mut d = a + (b - a) * INV_PHI;
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..GOLDEN_ITERS {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * INV_PHI;
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * INV_PHI;
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}
