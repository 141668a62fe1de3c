//! Exact pure-state simulation.
//!
//! Amplitudes are ordered by the binary expansion of the basis index with
//! qubit 0 as the most significant bit: `|q0 q1 .. q_{n-1}>` sits at index
//! `q0*2^(n-1) + q1*2^(n-2) + .. + q_{n-1}`. State dumps follow this order so
//! they are comparable bit for bit across implementations.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Hard cap on the simulated qubit count (memory guard: 2^24 amplitudes).
pub const MAX_QUBITS: usize = 24;

/// Normalized complex amplitude vector over `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    /// `|0..0>` on `n` qubits.
    pub fn zeros(n: usize) -> Result<Self> {
        Self::check_qubit_count(n)?;
        let mut amps = vec![Complex64::ZERO; 1 << n];
        amps[0] = Complex64::ONE;
        Ok(Self { n, amps })
    }

    /// Product state with `qubit` in `a|0> + b|1>` and every other qubit in `|0>`.
    pub fn product_with_qubit(n: usize, qubit: usize, a: Complex64, b: Complex64) -> Result<Self> {
        Self::check_qubit_count(n)?;
        if qubit >= n {
            return Err(Error::InvalidParameter(format!(
                "qubit {qubit} out of range for {n} qubits"
            )));
        }
        let norm = (a.norm_sqr() + b.norm_sqr() - 1.0).abs();
        if norm > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "|a|^2 + |b|^2 = {} is not 1",
                a.norm_sqr() + b.norm_sqr()
            )));
        }
        let mut amps = vec![Complex64::ZERO; 1 << n];
        amps[0] = a;
        amps[1 << (n - 1 - qubit)] = b;
        Ok(Self { n, amps })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        Self::check_qubit_count(n)?;
        if amps.len() != 1 << n {
            return Err(Error::InvalidParameter(format!(
                "amplitude vector of length {} does not match {n} qubits",
                amps.len()
            )));
        }
        Ok(Self { n, amps })
    }

    fn check_qubit_count(n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidParameter("need at least one qubit".into()));
        }
        if n > MAX_QUBITS {
            return Err(Error::QubitCapExceeded { n, cap: MAX_QUBITS });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, basis: usize) -> Complex64 {
        self.amps[basis]
    }

    /// Bit mask selecting `qubit` in a basis index (qubit 0 most significant).
    #[inline]
    pub fn qubit_mask(&self, qubit: usize) -> usize {
        1 << (self.n - 1 - qubit)
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<other|self>`.
    pub fn overlap(&self, other: &PureState) -> Complex64 {
        debug_assert_eq!(self.n, other.n);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| b.conj() * a)
            .sum()
    }

    /// `|<other|self>|` — fidelity up to global phase.
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.overlap(other).norm()
    }

    /// Largest amplitude difference after aligning global phase on the
    /// largest amplitude of `reference`.
    pub fn max_amplitude_error(&self, reference: &PureState) -> f64 {
        debug_assert_eq!(self.n, reference.n);
        let pivot = reference
            .amps
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.norm_sqr().total_cmp(&b.norm_sqr()))
            .map(|(i, _)| i)
            .expect("non-empty");
        let phase = if self.amps[pivot].norm() > 0.0 {
            (reference.amps[pivot] / self.amps[pivot]).unscale(
                (reference.amps[pivot] / self.amps[pivot]).norm(),
            )
        } else {
            Complex64::ONE
        };
        self.amps
            .iter()
            .zip(&reference.amps)
            .map(|(a, r)| (a * phase - r).norm())
            .fold(0.0, f64::max)
    }

    /// Amplitudes as `(real, imag)` pairs in basis order, the JSON dump form.
    pub fn to_amplitude_pairs(&self) -> Vec<(f64, f64)> {
        self.amps.iter().map(|a| (a.re, a.im)).collect()
    }

    /// Controlled-X evolution: every target accumulates an X rotation by
    /// `duration * sum(strengths of its pairs whose control bit is set)`,
    /// branch by branch. Branches whose controls are clear are untouched.
    pub(crate) fn controlled_x_step(
        &mut self,
        pairs: &[(usize, usize, f64)],
        duration: f64,
    ) -> Result<()> {
        validate_disjoint_roles(self.n, pairs)?;
        // Group the drive on each target; distinct targets commute.
        let mut by_target: Vec<(usize, Vec<(usize, f64)>)> = Vec::new();
        for &(control, target, strength) in pairs {
            match by_target.iter_mut().find(|(t, _)| *t == target) {
                Some((_, drives)) => drives.push((control, strength)),
                None => by_target.push((target, vec![(control, strength)])),
            }
        }
        by_target.sort_by_key(|(t, _)| *t);

        let dim = self.amps.len();
        for (target, drives) in &by_target {
            let t_mask = self.qubit_mask(*target);
            let masks: Vec<(usize, f64)> = drives
                .iter()
                .map(|&(c, h)| (self.qubit_mask(c), h))
                .collect();
            for basis in 0..dim {
                if basis & t_mask != 0 {
                    continue;
                }
                let mut rate = 0.0;
                for &(c_mask, h) in &masks {
                    if basis & c_mask != 0 {
                        rate += h;
                    }
                }
                if rate == 0.0 {
                    continue;
                }
                let theta = rate * duration;
                let (sin, cos) = theta.sin_cos();
                let partner = basis | t_mask;
                let lo = self.amps[basis];
                let hi = self.amps[partner];
                self.amps[basis] = cos * lo - Complex64::I * sin * hi;
                self.amps[partner] = cos * hi - Complex64::I * sin * lo;
            }
        }
        Ok(())
    }

    /// Diagonal ZZ evolution `exp(-i * duration * sum V_ij Z_i Z_j)`.
    pub(crate) fn zz_step(&mut self, pairs: &[(usize, usize, f64)], duration: f64) -> Result<()> {
        for &(a, b, _) in pairs {
            if a >= self.n || b >= self.n {
                return Err(Error::InvalidParameter(format!(
                    "qubit pair ({a}, {b}) out of range for {} qubits",
                    self.n
                )));
            }
            if a == b {
                return Err(Error::SelfCoupling);
            }
        }
        let masks: Vec<(usize, usize, f64)> = pairs
            .iter()
            .map(|&(a, b, v)| (self.qubit_mask(a), self.qubit_mask(b), v))
            .collect();
        for (basis, amp) in self.amps.iter_mut().enumerate() {
            let mut energy = 0.0;
            for &(ma, mb, v) in &masks {
                let za = 1.0 - 2.0 * ((basis & ma != 0) as i32 as f64);
                let zb = 1.0 - 2.0 * ((basis & mb != 0) as i32 as f64);
                energy += v * za * zb;
            }
            *amp *= Complex64::from_polar(1.0, -duration * energy);
        }
        Ok(())
    }

    pub(crate) fn apply_x(&mut self, qubit: usize) {
        let mask = self.qubit_mask(qubit);
        for basis in 0..self.amps.len() {
            if basis & mask == 0 {
                self.amps.swap(basis, basis | mask);
            }
        }
    }

    pub(crate) fn apply_hadamard(&mut self, qubit: usize) {
        let mask = self.qubit_mask(qubit);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        for basis in 0..self.amps.len() {
            if basis & mask == 0 {
                let partner = basis | mask;
                let lo = self.amps[basis];
                let hi = self.amps[partner];
                self.amps[basis] = (lo + hi) * inv_sqrt2;
                self.amps[partner] = (lo - hi) * inv_sqrt2;
            }
        }
    }

    /// `Rz(theta) = exp(-i theta Z / 2)`.
    pub(crate) fn apply_rot_z(&mut self, qubit: usize, theta: f64) {
        let mask = self.qubit_mask(qubit);
        let lo_phase = Complex64::from_polar(1.0, -theta / 2.0);
        let hi_phase = Complex64::from_polar(1.0, theta / 2.0);
        for (basis, amp) in self.amps.iter_mut().enumerate() {
            *amp *= if basis & mask == 0 { lo_phase } else { hi_phase };
        }
    }

    /// Apply a dense two-qubit unitary on `(q1, q2)`; `gate` is row-major in
    /// the basis `|q1 q2> = |00>, |01>, |10>, |11>`.
    pub fn apply_two_qubit(&mut self, q1: usize, q2: usize, gate: &[[Complex64; 4]; 4]) -> Result<()> {
        if q1 >= self.n || q2 >= self.n || q1 == q2 {
            return Err(Error::InvalidParameter(format!(
                "bad two-qubit gate operands ({q1}, {q2}) on {} qubits",
                self.n
            )));
        }
        let m1 = self.qubit_mask(q1);
        let m2 = self.qubit_mask(q2);
        for basis in 0..self.amps.len() {
            if basis & (m1 | m2) != 0 {
                continue;
            }
            let idx = [basis, basis | m2, basis | m1, basis | m1 | m2];
            let input = idx.map(|i| self.amps[i]);
            for (row, &i) in idx.iter().enumerate() {
                let mut acc = Complex64::ZERO;
                for (col, &v) in input.iter().enumerate() {
                    acc += gate[row][col] * v;
                }
                self.amps[i] = acc;
            }
        }
        Ok(())
    }
}

/// Serialization proxy: amplitudes as `(re, im)` pairs in basis order.
#[derive(Serialize)]
struct PureStateDump {
    n: usize,
    amplitudes: Vec<(f64, f64)>,
}

impl Serialize for PureState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PureStateDump {
            n: self.n,
            amplitudes: self.to_amplitude_pairs(),
        }
        .serialize(serializer)
    }
}

fn validate_disjoint_roles(n: usize, pairs: &[(usize, usize, f64)]) -> Result<()> {
    let mut controls = vec![false; n];
    let mut targets = vec![false; n];
    for &(c, t, _) in pairs {
        if c >= n || t >= n {
            return Err(Error::InvalidParameter(format!(
                "pair ({c}, {t}) out of range for {n} qubits"
            )));
        }
        if c == t {
            return Err(Error::NonCommutingTerms { qubit: c });
        }
        controls[c] = true;
        targets[t] = true;
    }
    for qubit in 0..n {
        if controls[qubit] && targets[qubit] {
            return Err(Error::NonCommutingTerms { qubit });
        }
    }
    Ok(())
}

/// Simultaneous controlled-X evolution of `pairs` for `duration`, as a pure
/// function. Control and target sets must be disjoint across all pairs.
pub fn evolve_controlled_x(
    state: &PureState,
    pairs: &[(usize, usize, f64)],
    duration: f64,
) -> Result<PureState> {
    let mut next = state.clone();
    next.controlled_x_step(pairs, duration)?;
    Ok(next)
}
