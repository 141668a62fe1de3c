//! Lattice geometry and power-law coupling sums.
//!
//! Sites live on the integer lattice with unit spacing and Euclidean metric.
//! The coupling between two sites at distance `r` is `r^(-alpha)`. The shell
//! sums `H(p, q)` — total coupling from a control hypercube of edge `p`
//! (corners `(0,..,0)` and `(p-1,..,p-1)`) onto the target at `(q,..,q)` —
//! drive all of the scheduling math.
//!
//! Summation order: every shell sum visits sites in lexicographic coordinate
//! order, buckets them into shells by max coordinate, compensates each shell
//! with Neumaier summation, and prefix-sums the shells in ascending order.
//! `hypercube_coupling_sum(p, q, ..)` and `shell_bucketed_sums(q, ..)[p-1]`
//! therefore agree bit for bit.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kahan::KahanSum;

/// Geometry of a `d`-dimensional lattice of `l^d` sites with a power-law
/// coupling exponent and marked source/destination sites.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeSpec {
    d: usize,
    l: usize,
    alpha: f64,
    source: Vec<i64>,
    destination: Vec<i64>,
}

impl LatticeSpec {
    pub fn new(
        d: usize,
        l: usize,
        alpha: f64,
        source: Vec<i64>,
        destination: Vec<i64>,
    ) -> Result<Self> {
        if !(1..=3).contains(&d) {
            return Err(Error::InvalidLattice(format!(
                "dimension {d} unsupported (need 1 <= d <= 3)"
            )));
        }
        if l < 2 {
            return Err(Error::InvalidLattice(format!(
                "linear size {l} too small (need L >= 2)"
            )));
        }
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidLattice(format!(
                "coupling exponent {alpha} must be finite and non-negative"
            )));
        }
        let inside = |c: &[i64]| c.len() == d && c.iter().all(|&x| x >= 0 && (x as usize) < l);
        if !inside(&source) {
            return Err(Error::InvalidLattice(format!(
                "source {source:?} outside the {l}^{d} lattice"
            )));
        }
        if !inside(&destination) {
            return Err(Error::InvalidLattice(format!(
                "destination {destination:?} outside the {l}^{d} lattice"
            )));
        }
        if source == destination {
            return Err(Error::InvalidLattice(
                "source and destination must be distinct".into(),
            ));
        }
        Ok(Self {
            d,
            l,
            alpha,
            source,
            destination,
        })
    }

    /// Chain of `l` sites with the source and destination at opposite ends.
    pub fn chain(l: usize, alpha: f64) -> Result<Self> {
        Self::new(1, l, alpha, vec![0], vec![l as i64 - 1])
    }

    /// `l^d` lattice with the source at the origin corner and the destination
    /// at the far corner.
    pub fn corner_to_corner(d: usize, l: usize, alpha: f64) -> Result<Self> {
        let far = l as i64 - 1;
        Self::new(d, l, alpha, vec![0; d], vec![far; d])
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn source(&self) -> &[i64] {
        &self.source
    }

    pub fn destination(&self) -> &[i64] {
        &self.destination
    }

    pub fn site_count(&self) -> usize {
        self.l.pow(self.d as u32)
    }

    /// Row-major index of a coordinate tuple (first coordinate slowest).
    pub fn site_index(&self, coords: &[i64]) -> usize {
        debug_assert_eq!(coords.len(), self.d);
        coords
            .iter()
            .fold(0usize, |acc, &c| acc * self.l + c as usize)
    }

    pub fn site_coords(&self, mut index: usize) -> Vec<i64> {
        let mut coords = vec![0i64; self.d];
        for k in (0..self.d).rev() {
            coords[k] = (index % self.l) as i64;
            index /= self.l;
        }
        coords
    }

    pub fn source_index(&self) -> usize {
        self.site_index(&self.source)
    }

    pub fn destination_index(&self) -> usize {
        self.site_index(&self.destination)
    }

    /// All site coordinates in row-major (lexicographic) order.
    pub fn sites(&self) -> Vec<Vec<i64>> {
        (0..self.site_count()).map(|i| self.site_coords(i)).collect()
    }

    /// Reflection through the lattice center, mapping each corner to the
    /// opposite one.
    pub fn mirror(&self, coords: &[i64]) -> Vec<i64> {
        coords.iter().map(|&c| self.l as i64 - 1 - c).collect()
    }

    pub fn coupling_model(&self) -> CouplingModel {
        CouplingModel { alpha: self.alpha }
    }
}

/// Euclidean power-law coupling `r^(-alpha)` on unit-spaced integer sites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingModel {
    alpha: f64,
}

impl CouplingModel {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "coupling exponent {alpha} must be finite and non-negative"
            )));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn coupling(&self, i: &[i64], j: &[i64]) -> Result<f64> {
        coupling(i, j, self.alpha)
    }
}

fn squared_distance(i: &[i64], j: &[i64]) -> u64 {
    i.iter()
        .zip(j)
        .map(|(&a, &b)| {
            let d = a - b;
            (d * d) as u64
        })
        .sum()
}

/// Coupling strength between two distinct sites: `(squared distance)^(-alpha/2)`.
pub fn coupling(i: &[i64], j: &[i64], alpha: f64) -> Result<f64> {
    if i.len() != j.len() {
        return Err(Error::InvalidParameter(format!(
            "coordinate tuples of different lengths: {} vs {}",
            i.len(),
            j.len()
        )));
    }
    let dist2 = squared_distance(i, j);
    if dist2 == 0 {
        return Err(Error::SelfCoupling);
    }
    Ok(inverse_power(dist2, alpha))
}

#[inline]
fn inverse_power(dist2: u64, alpha: f64) -> f64 {
    (dist2 as f64).powf(-alpha / 2.0)
}

/// Precomputed `s^(-alpha/2)` for every squared distance `s` up to a bound.
///
/// The solver reuses one table across all shells of a sweep; entries are the
/// same `powf` evaluations the table-free path performs, so results are
/// bit-identical either way.
#[derive(Debug, Clone)]
pub struct CouplingTable {
    alpha: f64,
    inv_pow: Vec<f64>,
}

impl CouplingTable {
    pub fn new(alpha: f64, max_dist2: u64) -> Self {
        use rayon::prelude::*;
        let inv_pow = (0..=max_dist2)
            .into_par_iter()
            .map(|s| if s == 0 { 0.0 } else { inverse_power(s, alpha) })
            .collect();
        Self { alpha, inv_pow }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    fn weight(&self, dist2: u64) -> f64 {
        self.inv_pow[dist2 as usize]
    }
}

/// Per-shell increments of the coupling sum onto the target at `(q,..,q)`:
/// `deltas[m]` collects the sites of `[0, edge-1]^d` whose max coordinate is
/// `m`, visited in lexicographic order.
fn shell_deltas<W: Fn(u64) -> f64>(edge: usize, q: usize, d: usize, weight: W) -> Vec<KahanSum> {
    let mut deltas = vec![KahanSum::new(); edge];
    let q = q as i64;
    match d {
        1 => {
            for x in 0..edge as i64 {
                let dx = q - x;
                deltas[x as usize].add(weight((dx * dx) as u64));
            }
        }
        2 => {
            for x in 0..edge as i64 {
                let dx2 = ((q - x) * (q - x)) as u64;
                for y in 0..edge as i64 {
                    let dy = q - y;
                    let m = x.max(y) as usize;
                    deltas[m].add(weight(dx2 + (dy * dy) as u64));
                }
            }
        }
        3 => {
            for x in 0..edge as i64 {
                let dx2 = ((q - x) * (q - x)) as u64;
                for y in 0..edge as i64 {
                    let dy2 = ((q - y) * (q - y)) as u64;
                    let mxy = x.max(y);
                    for z in 0..edge as i64 {
                        let dz = q - z;
                        let m = mxy.max(z) as usize;
                        deltas[m].add(weight(dx2 + dy2 + (dz * dz) as u64));
                    }
                }
            }
        }
        _ => unreachable!("dimension validated by callers"),
    }
    deltas
}

fn prefix_sums(deltas: &[KahanSum]) -> Vec<f64> {
    let mut acc = KahanSum::new();
    deltas
        .iter()
        .map(|delta| {
            acc.add(delta.value());
            acc.value()
        })
        .collect()
}

fn validate_shell_args(p: usize, q: usize, d: usize) -> Result<()> {
    if p < 1 || p > q {
        return Err(Error::InvalidShellIndices { p, q });
    }
    if !(1..=3).contains(&d) {
        return Err(Error::InvalidParameter(format!(
            "dimension {d} unsupported (need 1 <= d <= 3)"
        )));
    }
    Ok(())
}

/// `H(p, q)`: total coupling from the control hypercube `[0, p-1]^d` onto the
/// target at `(q, .., q)`.
pub fn hypercube_coupling_sum(p: usize, q: usize, d: usize, alpha: f64) -> Result<f64> {
    validate_shell_args(p, q, d)?;
    let deltas = shell_deltas(p, q, d, |s| inverse_power(s, alpha));
    Ok(prefix_sums(&deltas)[p - 1])
}

/// All of `H(1, q) .. H(q, q)` in one `O(q^d)` pass over the `q^d` cube.
pub fn shell_bucketed_sums(q: usize, d: usize, alpha: f64) -> Result<Vec<f64>> {
    validate_shell_args(1, q, d)?;
    let deltas = shell_deltas(q, q, d, |s| inverse_power(s, alpha));
    Ok(prefix_sums(&deltas))
}

/// Table-backed variant of [`shell_bucketed_sums`] for sweeps that reuse one
/// [`CouplingTable`] across many `q`. The table must cover `d * q^2`.
pub fn shell_bucketed_sums_with(q: usize, d: usize, table: &CouplingTable) -> Result<Vec<f64>> {
    validate_shell_args(1, q, d)?;
    debug_assert!(table.inv_pow.len() > d * q * q);
    let deltas = shell_deltas(q, q, d, |s| table.weight(s));
    Ok(prefix_sums(&deltas))
}
