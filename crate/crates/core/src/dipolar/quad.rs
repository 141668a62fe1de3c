//! Adaptive Gauss-Legendre quadrature over axis-aligned boxes in 1-3 dims.
//!
//! Each box is scored by the difference between nested 7- and 15-point
//! product rules; the worst box is split along its widest axis until the
//! summed error estimate meets the absolute tolerance. The dipole integrands
//! are smooth away from the target and sharply peaked near the closest face,
//! which is exactly the profile this refinement handles.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::kahan::KahanSum;

const GL7_NODES: [f64; 7] = [
    -0.9491079123427585,
    -0.7415311855993945,
    -0.4058451513773972,
    0.0,
    0.4058451513773972,
    0.7415311855993945,
    0.9491079123427585,
];
const GL7_WEIGHTS: [f64; 7] = [
    0.1294849661688697,
    0.2797053914892766,
    0.3818300505051189,
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892766,
    0.1294849661688697,
];

const GL15_NODES: [f64; 15] = [
    -0.9879925180204854,
    -0.937273392400706,
    -0.8482065834104272,
    -0.7244177313601701,
    -0.5709721726085388,
    -0.3941513470775634,
    -0.2011940939974345,
    0.0,
    0.2011940939974345,
    0.3941513470775634,
    0.5709721726085388,
    0.7244177313601701,
    0.8482065834104272,
    0.937273392400706,
    0.9879925180204854,
];
const GL15_WEIGHTS: [f64; 15] = [
    0.0307532419961173,
    0.070366047488108,
    0.1071592204671719,
    0.1395706779261543,
    0.1662692058169939,
    0.1861610000155622,
    0.1984314853271116,
    0.2025782419255613,
    0.1984314853271116,
    0.1861610000155622,
    0.1662692058169939,
    0.1395706779261543,
    0.1071592204671719,
    0.070366047488108,
    0.0307532419961173,
];

pub(crate) const DEFAULT_MAX_BOXES: usize = 20_000;

#[derive(Debug, Clone, Copy)]
struct Region {
    lo: [f64; 3],
    hi: [f64; 3],
    value: f64,
    err: f64,
}

impl PartialEq for Region {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Region {}
impl PartialOrd for Region {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Region {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn product_rule<F: Fn(&[f64; 3]) -> f64>(
    f: &F,
    lo: &[f64; 3],
    hi: &[f64; 3],
    dim: usize,
    nodes: &[f64],
    weights: &[f64],
) -> f64 {
    let mut center = [0.0; 3];
    let mut half = [0.0; 3];
    for k in 0..dim {
        center[k] = 0.5 * (lo[k] + hi[k]);
        half[k] = 0.5 * (hi[k] - lo[k]);
    }
    let jacobian: f64 = half[..dim].iter().product();
    let mut acc = KahanSum::new();
    let mut point = [0.0; 3];
    match dim {
        1 => {
            for (i, &xi) in nodes.iter().enumerate() {
                point[0] = center[0] + half[0] * xi;
                acc.add(weights[i] * f(&point));
            }
        }
        2 => {
            for (i, &xi) in nodes.iter().enumerate() {
                point[0] = center[0] + half[0] * xi;
                for (j, &yj) in nodes.iter().enumerate() {
                    point[1] = center[1] + half[1] * yj;
                    acc.add(weights[i] * weights[j] * f(&point));
                }
            }
        }
        3 => {
            for (i, &xi) in nodes.iter().enumerate() {
                point[0] = center[0] + half[0] * xi;
                for (j, &yj) in nodes.iter().enumerate() {
                    point[1] = center[1] + half[1] * yj;
                    for (k, &zk) in nodes.iter().enumerate() {
                        point[2] = center[2] + half[2] * zk;
                        acc.add(weights[i] * weights[j] * weights[k] * f(&point));
                    }
                }
            }
        }
        _ => unreachable!("dimension validated by callers"),
    }
    jacobian * acc.value()
}

fn eval_region<F: Fn(&[f64; 3]) -> f64>(f: &F, lo: [f64; 3], hi: [f64; 3], dim: usize) -> Region {
    let coarse = product_rule(f, &lo, &hi, dim, &GL7_NODES, &GL7_WEIGHTS);
    let fine = product_rule(f, &lo, &hi, dim, &GL15_NODES, &GL15_WEIGHTS);
    Region {
        lo,
        hi,
        value: fine,
        err: (fine - coarse).abs(),
    }
}

/// Integrate `f` over the box `[lo, hi]` (first `dim` coordinates used) to an
/// absolute error estimate at most `tol`.
pub(crate) fn integrate_box<F: Fn(&[f64; 3]) -> f64>(
    f: &F,
    lo: [f64; 3],
    hi: [f64; 3],
    dim: usize,
    tol: f64,
    max_boxes: usize,
) -> Result<f64> {
    debug_assert!((1..=3).contains(&dim));
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "quadrature tolerance {tol} must be positive and finite"
        )));
    }

    let mut heap = BinaryHeap::new();
    let first = eval_region(f, lo, hi, dim);
    let mut total_err = first.err;
    heap.push(first);

    while total_err > tol && heap.len() < max_boxes {
        let worst = heap.pop().expect("heap non-empty");
        if worst.err == 0.0 {
            heap.push(worst);
            break;
        }
        let mut axis = 0;
        let mut widest = 0.0;
        for k in 0..dim {
            let w = worst.hi[k] - worst.lo[k];
            if w > widest {
                widest = w;
                axis = k;
            }
        }
        let mid = 0.5 * (worst.lo[axis] + worst.hi[axis]);
        let mut hi_left = worst.hi;
        hi_left[axis] = mid;
        let mut lo_right = worst.lo;
        lo_right[axis] = mid;
        let left = eval_region(f, worst.lo, hi_left, dim);
        let right = eval_region(f, lo_right, worst.hi, dim);
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }

    let mut acc = KahanSum::new();
    let mut err = KahanSum::new();
    for region in heap {
        acc.add(region.value);
        err.add(region.err);
    }
    let estimate = acc.value();
    let error = err.value();
    if error > tol {
        return Err(Error::QuadratureNoConvergence {
            estimate,
            error,
            tol,
        });
    }
    Ok(estimate)
}
